use crate::config::{pick, FileConfig};
use crate::emit::{pass_label, print_table, write_output};
use crate::{ExactArgs, FormatArg, ReproduceArgs, SimulateArgs, SuiteArg, TargetArg, VerifyArgs};
use anyhow::{bail, Result};
use serde::Serialize;
use std::fmt::Display;
use std::path::PathBuf;
use warlab::classic::TiePolicy;
use warlab::exact::{
    absorption_solve, coin_split_law, enumerate_fwar, enumerate_pwar, eq5_law, expect_under, srw_oracle, state_label,
    uniform_level_average, StateSpace, RESIDUAL_TOL,
};
use warlab::fwar::{eq5_win_prob, ReturnOrder};
use warlab::output::{fmt_f64, RunMetadata, Table};
use warlab::pwar::DEFAULT_MAX_ROUNDS;
use warlab::reproduce::{
    reproduce_aces, reproduce_fig1, reproduce_scaling, Comparison, ReproduceOptions, DEFAULT_REPRODUCE_FLOOR,
    DEFAULT_TRIALS,
};
use warlab::stats::{binomial_ci, default_workers, histogram, summarize_outcomes, HistogramData, SampleStats};
use warlab::suites::{run_suite, CheckRow, Suite};
use warlab::{BuiltinRule, DealKind, Deck, DeckSpec, Exact, GameConfig, GameKind, Scalar, Strength, WarError, Winner};

const DEFAULT_SIM_TRIALS: u64 = 10_000;
const DEFAULT_SEED: u64 = 1;
const DEFAULT_BINS: usize = 50;
const EXACT_TOL: f64 = 1e-9;

fn parse_format(flag: Option<FormatArg>, file: Option<String>) -> Result<FormatArg> {
    if let Some(f) = flag {
        return Ok(f);
    }
    match file.as_deref() {
        None | Some("csv") => Ok(FormatArg::Csv),
        Some("json") => Ok(FormatArg::Json),
        Some(other) => bail!(WarError::UnknownName {
            kind: "format",
            name: other.into(),
            valid: "csv, json".into(),
        }),
    }
}

fn parse_workers(flag: Option<usize>, file: Option<usize>) -> Result<usize> {
    let w = flag.or(file).unwrap_or_else(default_workers);
    if w == 0 {
        bail!("--workers must be at least 1");
    }
    Ok(w)
}

fn parse_trials(flag: Option<u64>, file: Option<u64>, default: u64) -> Result<u64> {
    let t = pick(flag, file, default);
    if t == 0 {
        bail!("--trials must be at least 1");
    }
    Ok(t)
}

/// Rule by name; plain `bradley-terry` takes the separate strength function.
fn parse_rule(name: &str, strength: Option<Strength>) -> Result<BuiltinRule> {
    Ok(if name.contains([':', '(']) {
        name.parse()?
    } else {
        BuiltinRule::parse(name, strength)?
    })
}

fn parse_tie(name: &str, face_down: usize) -> Result<TiePolicy> {
    match name {
        "war" => Ok(TiePolicy::war(face_down)),
        "coin" => Ok(TiePolicy::coin()),
        _ => bail!(WarError::UnknownName {
            kind: "tie policy",
            name: name.into(),
            valid: "war, coin".into(),
        }),
    }
}

fn parse_return_order(name: &str) -> Result<ReturnOrder> {
    match name {
        "random" => Ok(ReturnOrder::Random),
        "won-card-first" => Ok(ReturnOrder::WonCardFirst),
        "own-card-first" => Ok(ReturnOrder::OwnCardFirst),
        _ => bail!(WarError::UnknownName {
            kind: "return order",
            name: name.into(),
            valid: "random, won-card-first, own-card-first".into(),
        }),
    }
}

#[derive(Serialize)]
struct SimulateEcho<'a> {
    #[serde(flatten)]
    game: &'a GameConfig,
    trials: u64,
    seed: u64,
    bins: usize,
    per_trial: bool,
}

#[derive(Serialize)]
struct OutcomeCounts {
    a_wins: u64,
    b_wins: u64,
    draws: u64,
    truncated: u64,
    /// Among decided games.
    p_a_win: f64,
    p_a_win_ci95: (f64, f64),
}

#[derive(Serialize)]
struct TrialRow {
    trial: u64,
    tau: u64,
    winner: Winner,
}

#[derive(Serialize)]
struct SimulateData {
    stats: SampleStats,
    outcomes: OutcomeCounts,
    histogram: HistogramData,
    #[serde(skip_serializing_if = "Option::is_none")]
    trials: Option<Vec<TrialRow>>,
}

pub fn simulate(a: SimulateArgs) -> Result<bool> {
    let file = FileConfig::load(a.common.config.as_deref())?;
    let trials = parse_trials(a.common.trials, file.trials, DEFAULT_SIM_TRIALS)?;
    let seed = pick(a.common.seed, file.seed, DEFAULT_SEED);
    let workers = parse_workers(a.common.workers, file.workers)?;
    let format = parse_format(a.common.format, file.format)?;
    let out: Option<PathBuf> = a.common.out.or(file.out);
    let bins = pick(a.bins, file.bins, DEFAULT_BINS);
    if bins == 0 {
        bail!("--bins must be at least 1");
    }
    let per_trial = a.per_trial || file.per_trial.unwrap_or(false);

    let game: GameKind = pick(a.game, file.game, "pwar".into()).parse()?;
    let deck: DeckSpec = pick(a.deck, file.deck, "13x4".into()).parse()?;
    let strength: Option<Strength> = a.strength.or(file.strength).map(|s| s.parse()).transpose()?;
    let rule_name = pick(a.rule, file.rule, "greater-tiecoin".into());
    let face_down = pick(a.face_down, file.face_down, 1);
    let tie = parse_tie(&pick(a.tie, file.tie, "war".into()), face_down)?;
    let config = GameConfig {
        game,
        deck,
        rule: match game {
            GameKind::Pwar => Some(parse_rule(&rule_name, strength)?),
            _ => None,
        },
        strength: match game {
            GameKind::Fwar => Some(strength.unwrap_or(Strength::Identity)),
            _ => None,
        },
        tie,
        deal: pick(a.deal, file.deal, "uniform".into()).parse::<DealKind>()?,
        split: a.split.or(file.split),
        return_order: parse_return_order(&pick(a.return_order, file.return_order, "random".into()))?,
        max_rounds: pick(a.max_rounds, file.max_rounds, DEFAULT_MAX_ROUNDS),
        hand_floor: pick(a.hand_floor, file.hand_floor, 0),
    };

    let outcomes = config.run(trials, seed, workers)?;
    let stats = summarize_outcomes(outcomes.iter().map(|o| (o.tau, o.winner)))?;
    let taus: Vec<f64> = outcomes
        .iter()
        .filter(|o| o.winner.is_decided())
        .map(|o| o.tau as f64)
        .collect();
    let hist = histogram(&taus, bins)?;
    let count = |w: Winner| outcomes.iter().filter(|o| o.winner == w).count() as u64;
    let (a_wins, b_wins) = (count(Winner::A), count(Winner::B));
    let decided = a_wins + b_wins;
    let counts = OutcomeCounts {
        a_wins,
        b_wins,
        draws: count(Winner::Draw),
        truncated: count(Winner::Truncated),
        p_a_win: if decided > 0 {
            a_wins as f64 / decided as f64
        } else {
            f64::NAN
        },
        p_a_win_ci95: binomial_ci(a_wins, decided, 0.95),
    };

    let echo = SimulateEcho {
        game: &config,
        trials,
        seed,
        bins,
        per_trial,
    };
    let meta = RunMetadata::new("simulate", Some(seed), &echo);

    let mut summary = Table::new(&[
        "n_trials",
        "n_samples",
        "mean",
        "median",
        "min",
        "max",
        "std",
        "std_err",
        "ci95_lo",
        "ci95_hi",
        "truncated",
        "draws",
        "a_wins",
        "b_wins",
        "p_a_win",
        "p_a_win_ci95_lo",
        "p_a_win_ci95_hi",
    ]);
    summary.push(vec![
        stats.n_trials.to_string(),
        stats.n_samples.to_string(),
        fmt_f64(stats.mean),
        fmt_f64(stats.median),
        fmt_f64(stats.min),
        fmt_f64(stats.max),
        fmt_f64(stats.std),
        fmt_f64(stats.std_err),
        fmt_f64(stats.ci95.0),
        fmt_f64(stats.ci95.1),
        stats.truncated_count.to_string(),
        stats.draw_count.to_string(),
        a_wins.to_string(),
        b_wins.to_string(),
        fmt_f64(counts.p_a_win),
        fmt_f64(counts.p_a_win_ci95.0),
        fmt_f64(counts.p_a_win_ci95.1),
    ]);
    let mut hist_table = Table::new(&["bin_lo", "bin_hi", "count"]);
    for (i, c) in hist.counts.iter().enumerate() {
        hist_table.push(vec![
            fmt_f64(hist.bin_edges[i]),
            fmt_f64(hist.bin_edges[i + 1]),
            c.to_string(),
        ]);
    }
    let mut trial_table = Table::new(&["trial", "tau", "winner"]);
    let trial_rows = per_trial.then(|| {
        outcomes
            .iter()
            .enumerate()
            .map(|(i, o)| TrialRow {
                trial: i as u64,
                tau: o.tau,
                winner: o.winner,
            })
            .collect::<Vec<_>>()
    });
    if let Some(rows) = &trial_rows {
        for r in rows {
            trial_table.push(vec![r.trial.to_string(), r.tau.to_string(), format!("{:?}", r.winner)]);
        }
    }
    let mut tables = vec![("summary", &summary), ("histogram", &hist_table)];
    if per_trial {
        tables.push(("trials", &trial_table));
    }
    let data = SimulateData {
        stats,
        outcomes: counts,
        histogram: hist,
        trials: trial_rows,
    };
    write_output(out.as_deref(), format, &meta, &data, &tables)?;
    eprintln!(
        "{} games: mean {:.3} rounds (95% CI {:.3} to {:.3}), median {}, max {}; A wins {:.4}",
        data.stats.n_trials,
        data.stats.mean,
        data.stats.ci95.0,
        data.stats.ci95.1,
        data.stats.median,
        data.stats.max,
        data.outcomes.p_a_win
    );
    Ok(true)
}

#[derive(Serialize)]
struct ExactEcho {
    game: String,
    deck: String,
    rule: Option<String>,
    strength: Option<String>,
    deals: Vec<String>,
    rational: bool,
}

#[derive(Serialize)]
struct SummaryRow {
    deal: String,
    win_prob: f64,
    expected_tau: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    win_prob_exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected_tau_exact: Option<String>,
    reference_win_prob: Option<f64>,
    reference_tau: Option<f64>,
    pass: Option<bool>,
}

#[derive(Serialize)]
struct StateRow {
    state: usize,
    hand: String,
    win_prob: f64,
    expected_tau: f64,
}

#[derive(Serialize)]
struct ExactData {
    n_states: usize,
    residual: f64,
    summary: Vec<SummaryRow>,
    states: Vec<StateRow>,
}

enum Deal {
    Uniform(usize),
    TopCard,
    CoinSplit,
}

impl Display for Deal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Deal::Uniform(k) => write!(f, "uniform:{k}"),
            Deal::TopCard => write!(f, "top-card-to-a"),
            Deal::CoinSplit => write!(f, "coin-split"),
        }
    }
}

/// Known closed forms for a summary row: the fair walk for symmetric
/// random-draw rules and constant strengths, and the top-card formula for
/// Bradley-Terry games.
fn references(
    deal: &Deal,
    fair_walk: bool,
    fwar_strength: Option<&Strength>,
    n: usize,
) -> Result<(Option<f64>, Option<f64>)> {
    let nf = n as f64;
    Ok(match deal {
        Deal::Uniform(k) if fair_walk => {
            let o = srw_oracle::<f64>(n, *k)?;
            (Some(o.win_prob), Some(o.expected_tau))
        }
        // Each card to A with probability 1/2: E[k] = N/2, E[k(N-k)] = N(N-1)/4.
        Deal::CoinSplit if fair_walk => (Some(0.5), Some(nf * (nf - 1.0) / 4.0)),
        Deal::CoinSplit if fwar_strength.is_some() => (Some(0.5), None),
        Deal::TopCard => match fwar_strength {
            Some(f) => (Some(eq5_win_prob::<f64>(f, n as u32)?), None),
            // k = 1 + Binomial(N-1, 1/2), so E[k] / N = (N+1) / 2N.
            None if fair_walk => (Some((nf + 1.0) / (2.0 * nf)), None),
            None => (None, None),
        },
        _ => (None, None),
    })
}

pub fn exact(a: ExactArgs) -> Result<bool> {
    if a.rational {
        exact_in::<Exact>(a, true)
    } else {
        exact_in::<f64>(a, false)
    }
}

fn exact_in<T: Scalar + Display>(a: ExactArgs, rational: bool) -> Result<bool> {
    let file = FileConfig::load(a.common.config.as_deref())?;
    let format = parse_format(a.common.format, file.format)?;
    let out: Option<PathBuf> = a.common.out.or(file.out);
    let game: GameKind = pick(a.game, file.game, "pwar".into()).parse()?;
    let strength: Option<Strength> = a.strength.or(file.strength).map(|s| s.parse()).transpose()?;

    let (space, rule, fwar_strength): (StateSpace<T>, Option<BuiltinRule>, Option<Strength>) = match game {
        GameKind::Pwar => {
            let deck = Deck::new(&pick(a.deck, file.deck, "8".into()).parse()?)?;
            let rule = parse_rule(&pick(a.rule, file.rule, "greater-tiecoin".into()), strength)?;
            (enumerate_pwar(&deck, &rule)?, Some(rule), None)
        }
        GameKind::Fwar => {
            let n = pick(a.n, file.n, 4);
            let f = strength.unwrap_or(Strength::Identity);
            (enumerate_fwar(n, &f)?, None, Some(f))
        }
        GameKind::Classic => {
            bail!("exact solving supports pwar and fwar; classic war's pile order makes the state space too large")
        }
    };
    let n = space.deck.len();
    let fair_walk = match (&rule, &fwar_strength) {
        (Some(r), _) => r.is_symmetric(),
        (None, Some(f)) => *f == Strength::Constant,
        _ => false,
    };

    let mut deals = Vec::new();
    if let Some(k) = a.uniform_size.or(file.uniform_size) {
        if k > n {
            bail!(WarError::SizeOutOfRange { size: k, deck: n });
        }
        deals.push(Deal::Uniform(k));
    }
    if a.eq5_deal {
        deals.push(Deal::TopCard);
    }
    if a.coin_split_deal {
        deals.push(Deal::CoinSplit);
    }
    if deals.is_empty() {
        deals.push(Deal::Uniform(n / 2));
    }

    let result = absorption_solve(&space)?;
    let mut ok = result.residual <= RESIDUAL_TOL;
    let mut summary = Vec::new();
    for deal in &deals {
        let (w, t) = match deal {
            Deal::Uniform(k) => uniform_level_average(&space, &result, *k)?,
            Deal::TopCard | Deal::CoinSplit => {
                let law = if matches!(deal, Deal::TopCard) {
                    eq5_law(&space)
                } else {
                    coin_split_law(&space)
                };
                (
                    expect_under(&result.win_prob_a, &law),
                    expect_under(&result.expected_tau, &law),
                )
            }
        };
        let (rw, rt) = references(deal, fair_walk, fwar_strength.as_ref(), n)?;
        let (wf, tf) = (w.to_f64_lossy(), t.to_f64_lossy());
        let pass = (rw.is_some() || rt.is_some())
            .then(|| rw.is_none_or(|r| (wf - r).abs() <= EXACT_TOL) && rt.is_none_or(|r| (tf - r).abs() <= EXACT_TOL));
        ok &= pass != Some(false);
        summary.push(SummaryRow {
            deal: deal.to_string(),
            win_prob: wf,
            expected_tau: tf,
            win_prob_exact: rational.then(|| w.to_string()),
            expected_tau_exact: rational.then(|| t.to_string()),
            reference_win_prob: rw,
            reference_tau: rt,
            pass,
        });
    }

    let states: Vec<StateRow> = (0..space.len())
        .map(|i| StateRow {
            state: i,
            hand: state_label(&space, i),
            win_prob: result.win_prob_a[i].to_f64_lossy(),
            expected_tau: result.expected_tau[i].to_f64_lossy(),
        })
        .collect();

    let echo = ExactEcho {
        game: game.to_string(),
        deck: space.deck.spec().to_string(),
        rule: rule.map(|r| r.to_string()),
        strength: fwar_strength.or(strength).map(|f| f.to_string()),
        deals: deals.iter().map(|d| d.to_string()).collect(),
        rational,
    };
    let meta = RunMetadata::new("exact", None, &echo);
    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    let mut sum_table = Table::new(&[
        "deal",
        "win_prob",
        "expected_tau",
        "reference_win_prob",
        "reference_tau",
        "pass",
    ]);
    for r in &summary {
        sum_table.push(vec![
            r.deal.clone(),
            fmt_f64(r.win_prob),
            fmt_f64(r.expected_tau),
            opt(r.reference_win_prob),
            opt(r.reference_tau),
            r.pass.map(|p| p.to_string()).unwrap_or_default(),
        ]);
    }
    let mut state_table = Table::new(&["state", "hand", "win_prob", "expected_tau"]);
    for s in &states {
        state_table.push(vec![
            s.state.to_string(),
            s.hand.clone(),
            fmt_f64(s.win_prob),
            fmt_f64(s.expected_tau),
        ]);
    }
    let data = ExactData {
        n_states: space.len(),
        residual: result.residual,
        summary,
        states,
    };
    write_output(
        out.as_deref(),
        format,
        &meta,
        &data,
        &[("summary", &sum_table), ("states", &state_table)],
    )?;
    for r in &data.summary {
        eprintln!(
            "{}: P(A wins) = {}, E[tau] = {}{}",
            r.deal,
            r.win_prob,
            r.expected_tau,
            match r.pass {
                Some(true) => " (matches closed form)",
                Some(false) => " (DIFFERS from closed form)",
                None => "",
            }
        );
    }
    Ok(ok)
}

fn check_table(rows: &[CheckRow]) -> Table {
    let mut t = Table::new(&["suite", "case", "deviation", "tolerance", "control", "pass"]);
    for r in rows {
        t.push(vec![
            r.suite.clone(),
            r.case.clone(),
            format!("{:e}", r.deviation),
            format!("{:e}", r.tolerance),
            r.control.to_string(),
            r.pass.to_string(),
        ]);
    }
    t
}

pub fn verify(a: VerifyArgs) -> Result<bool> {
    let suite = match a.suite {
        SuiteArg::Rules => Suite::Rules,
        SuiteArg::Theorem => Suite::Theorem,
        SuiteArg::Martingales => Suite::Martingales,
        SuiteArg::Identity => Suite::Identity,
        SuiteArg::All => Suite::All,
    };
    let rows = run_suite(suite)?;
    let printed: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let bound = if r.control {
                format!("> {:.0e}", r.tolerance)
            } else {
                format!("<= {:.0e}", r.tolerance)
            };
            vec![
                r.case.clone(),
                format!("{:.3e}", r.deviation),
                bound,
                pass_label(Some(r.pass)),
            ]
        })
        .collect();
    print_table(&["case", "deviation", "required", "result"], &printed);
    let ok = rows.iter().all(|r| r.pass);
    println!(
        "{} of {} checks passed",
        rows.iter().filter(|r| r.pass).count(),
        rows.len()
    );
    if let Some(path) = a.out {
        let meta = RunMetadata::new(format!("verify {suite}"), None, &serde_json::json!({ "suite": suite }));
        let table = check_table(&rows);
        write_output(
            Some(&path),
            a.format.unwrap_or(FormatArg::Csv),
            &meta,
            &rows,
            &[("checks", &table)],
        )?;
    }
    Ok(ok)
}

fn comparison_table(rows: &[Comparison]) -> Table {
    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    let mut t = Table::new(&["label", "value", "reference", "lo", "hi", "pass"]);
    for r in rows {
        t.push(vec![
            r.label.clone(),
            fmt_f64(r.value),
            opt(r.reference),
            opt(r.lo),
            opt(r.hi),
            r.pass.map(|p| p.to_string()).unwrap_or_default(),
        ]);
    }
    t
}

fn print_comparisons(rows: &[Comparison]) {
    let opt = |v: Option<f64>, prec: usize| v.map(|x| format!("{x:.prec$}")).unwrap_or_else(|| "-".into());
    let printed: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let prec = if r.value.abs() < 10.0 { 4 } else { 1 };
            let band = match (r.lo, r.hi) {
                (Some(lo), Some(hi)) if lo == hi => format!("= {}", opt(Some(lo), prec)),
                (Some(lo), Some(hi)) => format!("[{}, {}]", opt(Some(lo), prec), opt(Some(hi), prec)),
                _ => "-".into(),
            };
            vec![
                r.label.clone(),
                format!("{:.prec$}", r.value),
                opt(r.reference, prec),
                band,
                pass_label(r.pass),
            ]
        })
        .collect();
    print_table(&["quantity", "value", "reference", "accepted", "result"], &printed);
}

pub fn reproduce(a: ReproduceArgs) -> Result<bool> {
    let file = FileConfig::load(a.common.config.as_deref())?;
    let opts = ReproduceOptions {
        trials: parse_trials(a.common.trials, file.trials, DEFAULT_TRIALS)?,
        seed: pick(a.common.seed, file.seed, DEFAULT_SEED),
        workers: parse_workers(a.common.workers, file.workers)?,
        hand_floor: pick(a.hand_floor, file.hand_floor, DEFAULT_REPRODUCE_FLOOR),
    };
    let format = parse_format(a.common.format, file.format)?;
    let out: Option<PathBuf> = a.common.out.or(file.out);

    let (name, report_rows, passed) = match a.target {
        TargetArg::Fig1 => {
            let r = reproduce_fig1(&opts)?;
            let mut stats = Table::new(&[
                "model",
                "n_trials",
                "n_samples",
                "mean",
                "median",
                "min",
                "max",
                "std",
                "std_err",
                "truncated",
                "draws",
            ]);
            let mut hist = Table::new(&["model", "bin_lo", "bin_hi", "count"]);
            for m in &r.models {
                let s = &m.stats;
                stats.push(vec![
                    m.model.clone(),
                    s.n_trials.to_string(),
                    s.n_samples.to_string(),
                    fmt_f64(s.mean),
                    fmt_f64(s.median),
                    fmt_f64(s.min),
                    fmt_f64(s.max),
                    fmt_f64(s.std),
                    fmt_f64(s.std_err),
                    s.truncated_count.to_string(),
                    s.draw_count.to_string(),
                ]);
                for (i, c) in m.histogram.counts.iter().enumerate() {
                    hist.push(vec![
                        m.model.clone(),
                        fmt_f64(m.histogram.bin_edges[i]),
                        fmt_f64(m.histogram.bin_edges[i + 1]),
                        c.to_string(),
                    ]);
                }
            }
            if let Some(path) = &out {
                emit_reproduce(
                    path,
                    format,
                    "fig1",
                    &opts,
                    &r,
                    &r.report.rows,
                    &[("models", &stats), ("histograms", &hist)],
                )?;
            }
            ("fig1", r.report.rows.clone(), r.report.passed())
        }
        TargetArg::AcesTable => {
            let r = reproduce_aces(&opts)?;
            let mut t = Table::new(&[
                "model",
                "aces",
                "trials",
                "wins",
                "losses",
                "draws",
                "truncated",
                "p_win",
                "ci95_lo",
                "ci95_hi",
            ]);
            for (model, rows) in [("A", &r.war_rounds), ("B", &r.coin_ties)] {
                for row in rows.iter() {
                    t.push(vec![
                        model.into(),
                        row.k.to_string(),
                        row.trials.to_string(),
                        row.wins.to_string(),
                        row.losses.to_string(),
                        row.draws.to_string(),
                        row.truncated.to_string(),
                        fmt_f64(row.p_win),
                        fmt_f64(row.ci95.0),
                        fmt_f64(row.ci95.1),
                    ]);
                }
            }
            if let Some(path) = &out {
                emit_reproduce(path, format, "aces-table", &opts, &r, &r.report.rows, &[("table", &t)])?;
            }
            ("aces-table", r.report.rows.clone(), r.report.passed())
        }
        TargetArg::Scaling => {
            let r = reproduce_scaling(&opts)?;
            let mut t = Table::new(&[
                "n",
                "n_trials",
                "mean",
                "median",
                "max",
                "std_err",
                "q_rate_min",
                "q_rate_max",
                "bound_violations",
            ]);
            for row in &r.rows {
                t.push(vec![
                    row.n.to_string(),
                    row.stats.n_trials.to_string(),
                    fmt_f64(row.stats.mean),
                    fmt_f64(row.stats.median),
                    fmt_f64(row.stats.max),
                    fmt_f64(row.stats.std_err),
                    fmt_f64(row.q_rate_range.0),
                    fmt_f64(row.q_rate_range.1),
                    row.bound_violations.to_string(),
                ]);
            }
            let used = r.report.options;
            if let Some(path) = &out {
                emit_reproduce(path, format, "scaling", &used, &r, &r.report.rows, &[("table", &t)])?;
            }
            ("scaling", r.report.rows.clone(), r.report.passed())
        }
    };
    match a.target {
        TargetArg::Scaling => println!("reproduce {name}: seed {}", opts.seed),
        _ => println!(
            "reproduce {name}: {} trials, seed {}, hand floor {}",
            opts.trials, opts.seed, opts.hand_floor
        ),
    }
    print_comparisons(&report_rows);
    println!(
        "{}",
        if passed {
            "all checks passed"
        } else {
            "some checks FAILED"
        }
    );
    Ok(passed)
}

fn emit_reproduce(
    path: &std::path::Path,
    format: FormatArg,
    target: &str,
    opts: &ReproduceOptions,
    data: &impl Serialize,
    rows: &[Comparison],
    extra: &[(&str, &Table)],
) -> Result<()> {
    #[derive(Serialize)]
    struct Echo<'a> {
        target: &'a str,
        trials: u64,
        seed: u64,
        hand_floor: usize,
    }
    let echo = Echo {
        target,
        trials: opts.trials,
        seed: opts.seed,
        hand_floor: opts.hand_floor,
    };
    let meta = RunMetadata::new(format!("reproduce {target}"), Some(opts.seed), &echo);
    let cmp = comparison_table(rows);
    let mut tables = vec![("comparison", &cmp)];
    tables.extend(extra.iter().copied());
    write_output(Some(path), format, &meta, data, &tables)
}
