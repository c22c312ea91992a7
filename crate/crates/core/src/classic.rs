//! Classic top-card war. The higher top card takes the table; equal ranks
//! go to a war round (stakes face down, then a deciding face-up card) or to
//! a fair coin. The whole table goes to the winner, shuffled, on the bottom.

use crate::deck::{CardId, Deck};
use crate::error::{Result, WarError};
use crate::hand::{GameState, Hand, HandSeq};
use crate::pwar::DEFAULT_MAX_ROUNDS;
use crate::record::Winner;
use crate::rng::RngStream;
use crate::stats::{binomial_ci, run_trials};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieKind {
    WarRound,
    CoinFlip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Runout {
    /// A player who cannot stake a war loses at once.
    ImmediateLoss,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TiePolicy {
    pub kind: TieKind,
    /// Cards each player stakes face down before the deciding card.
    pub face_down: usize,
    pub runout: Runout,
}

impl TiePolicy {
    pub fn war(face_down: usize) -> Self {
        Self {
            kind: TieKind::WarRound,
            face_down,
            runout: Runout::ImmediateLoss,
        }
    }

    pub fn coin() -> Self {
        Self {
            kind: TieKind::CoinFlip,
            face_down: 0,
            runout: Runout::ImmediateLoss,
        }
    }
}

impl Default for TiePolicy {
    fn default() -> Self {
        Self::war(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassicOptions {
    pub tie: TiePolicy,
    pub max_rounds: u64,
    /// The game ends once a hand holds at most this many cards.
    pub hand_floor: usize,
    pub record_cards_won: bool,
}

impl Default for ClassicOptions {
    fn default() -> Self {
        Self {
            tie: TiePolicy::default(),
            max_rounds: DEFAULT_MAX_ROUNDS,
            hand_floor: 0,
            record_cards_won: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicTrialRecord {
    pub tau: u64,
    pub winner: Winner,
    /// Net change of `|A|` in each round, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cards_won_by_round: Option<Vec<i32>>,
    pub seed: u64,
    pub stream_id: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassicRound {
    pub a_delta: i32,
    /// Set when the round ended the game through a run-out.
    pub ended: Option<Winner>,
    pub wars: u32,
}

/// Plays one round, including any chain of war rounds it triggers.
pub fn classic_step(
    state: &mut GameState<HandSeq>,
    deck: &Deck,
    tie: &TiePolicy,
    rng: &mut RngStream,
) -> Result<ClassicRound> {
    if state.is_absorbing() {
        return Err(WarError::Absorbing);
    }
    let size_before = state.hand_a.len() as i32;
    let hand_a = &mut state.hand_a;
    let hand_b = &mut state.hand_b;
    let mut a_up = hand_a.pop_front().expect("non-empty");
    let mut b_up = hand_b.pop_front().expect("non-empty");
    let mut table_a = vec![a_up];
    let mut table_b = vec![b_up];
    let mut wars = 0u32;

    let a_won = loop {
        let (ra, rb) = (deck.rank(a_up), deck.rank(b_up));
        if ra != rb {
            break ra > rb;
        }
        match tie.kind {
            TieKind::CoinFlip => break rng.coin(),
            TieKind::WarRound => {
                let need = tie.face_down + 1;
                let a_short = hand_a.len() < need;
                let b_short = hand_b.len() < need;
                if a_short || b_short {
                    state.round += 1;
                    let winner = match (a_short, b_short) {
                        (true, true) => {
                            table_a.into_iter().for_each(|c| state.hand_a.push_back(c));
                            table_b.into_iter().for_each(|c| state.hand_b.push_back(c));
                            Winner::Draw
                        }
                        (true, false) => {
                            collect_runout(&mut state.hand_b, &mut state.hand_a, table_a, table_b, rng);
                            Winner::B
                        }
                        _ => {
                            collect_runout(&mut state.hand_a, &mut state.hand_b, table_a, table_b, rng);
                            Winner::A
                        }
                    };
                    debug_assert!(state.conserves(deck.len()));
                    return Ok(ClassicRound {
                        a_delta: state.hand_a.len() as i32 - size_before,
                        ended: Some(winner),
                        wars: wars + 1,
                    });
                }
                for _ in 0..tie.face_down {
                    table_a.push(hand_a.pop_front().expect("staked"));
                    table_b.push(hand_b.pop_front().expect("staked"));
                }
                a_up = hand_a.pop_front().expect("staked");
                b_up = hand_b.pop_front().expect("staked");
                table_a.push(a_up);
                table_b.push(b_up);
                wars += 1;
            }
        }
    };

    let mut table = table_a;
    table.extend(table_b);
    rng.shuffle(&mut table);
    let dest = if a_won { &mut state.hand_a } else { &mut state.hand_b };
    table.into_iter().for_each(|c| dest.push_back(c));
    state.round += 1;
    debug_assert!(state.conserves(deck.len()));
    Ok(ClassicRound {
        a_delta: state.hand_a.len() as i32 - size_before,
        ended: None,
        wars,
    })
}

fn collect_runout(
    winner: &mut HandSeq,
    loser: &mut HandSeq,
    table_a: Vec<CardId>,
    table_b: Vec<CardId>,
    rng: &mut RngStream,
) {
    let mut table = table_a;
    table.extend(table_b);
    rng.shuffle(&mut table);
    table.into_iter().for_each(|c| winner.push_back(c));
    let rest: Vec<CardId> = loser.drain_all().collect();
    rest.into_iter().for_each(|c| winner.push_back(c));
}

pub fn classic_run(
    init: GameState<HandSeq>,
    deck: &Deck,
    rng: &mut RngStream,
    opts: &ClassicOptions,
) -> ClassicTrialRecord {
    let mut state = init;
    let start = state.round;
    let mut won = opts.record_cards_won.then(Vec::new);
    let winner = loop {
        if let Some(w) = Winner::from_sizes(state.hand_a.len(), state.hand_b.len(), opts.hand_floor) {
            break w;
        }
        if state.round - start >= opts.max_rounds {
            break Winner::Truncated;
        }
        let r = classic_step(&mut state, deck, &opts.tie, rng).expect("not absorbing");
        if let Some(w) = won.as_mut() {
            w.push(r.a_delta);
        }
        if let Some(w) = r.ended {
            break w;
        }
    };
    ClassicTrialRecord {
        tau: state.round - start,
        winner,
        cards_won_by_round: won,
        seed: rng.seed(),
        stream_id: rng.stream_id(),
    }
}

/// Deals A exactly `k` cards of the deck's highest rank plus uniformly
/// chosen other cards up to `size_a`; both hands shuffled.
pub fn deal_with_top_rank(deck: &Deck, k: usize, size_a: usize, rng: &mut RngStream) -> Result<GameState<HandSeq>> {
    let top = deck.max_rank();
    let (mut tops, mut others): (Vec<CardId>, Vec<CardId>) = deck.ids().partition(|&c| deck.rank(c) == top);
    if k > tops.len() || k > size_a || size_a - k > others.len() {
        return Err(WarError::OutOfRange(format!(
            "cannot give {k} top-rank cards in a hand of {size_a}"
        )));
    }
    rng.shuffle(&mut tops);
    rng.shuffle(&mut others);
    let mut a: Vec<CardId> = tops.drain(..k).collect();
    a.extend(others.drain(..size_a - k));
    let mut b = tops;
    b.extend(others);
    rng.shuffle(&mut a);
    rng.shuffle(&mut b);
    Ok(GameState::from_ids(a, b))
}

/// One row of the win-probability-by-top-rank-count table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AcesRow {
    pub k: usize,
    pub trials: u64,
    pub wins: u64,
    pub losses: u64,
    pub draws: u64,
    pub truncated: u64,
    /// `wins / (wins + losses)`; draws and truncated games are excluded.
    pub p_win: f64,
    /// Clopper-Pearson 95% interval.
    pub ci95: (f64, f64),
}

/// Estimates P(A wins) conditioned on A holding `k` top-rank cards, for
/// every `k` from 0 to the number of top-rank cards. Hands are half the deck
/// each. Row `k` uses run seed `seed + k`.
pub fn aces_win_table(
    deck: &Deck,
    opts: &ClassicOptions,
    trials_per_cell: u64,
    seed: u64,
    workers: usize,
) -> Result<Vec<AcesRow>> {
    if trials_per_cell == 0 {
        return Err(WarError::OutOfRange("trials_per_cell must be positive".into()));
    }
    let top = deck.max_rank();
    let n_top = deck.cards().iter().filter(|c| c.rank == top).count();
    let half = deck.len() / 2;
    (0..=n_top)
        .map(|k| {
            let records = run_trials(trials_per_cell, seed.wrapping_add(k as u64), workers, |rng| {
                let init = deal_with_top_rank(deck, k, half, rng)?;
                Ok(classic_run(init, deck, rng, opts))
            })?;
            let count = |w: Winner| records.iter().filter(|r| r.winner == w).count() as u64;
            let (wins, losses) = (count(Winner::A), count(Winner::B));
            let decided = wins + losses;
            Ok(AcesRow {
                k,
                trials: trials_per_cell,
                wins,
                losses,
                draws: count(Winner::Draw),
                truncated: count(Winner::Truncated),
                p_win: if decided > 0 {
                    wins as f64 / decided as f64
                } else {
                    f64::NAN
                },
                ci95: binomial_ci(wins, decided, 0.95),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deck::DeckSpec;
    use crate::hand::deal_uniform;

    fn ids(v: &[u32]) -> Vec<CardId> {
        v.iter().map(|&i| CardId(i)).collect()
    }

    #[test]
    fn higher_card_takes_both() {
        let deck = Deck::new(&DeckSpec::Ranks(vec![2, 1])).unwrap();
        let mut rng = RngStream::new(0, 0);
        let rec = classic_run(
            GameState::from_ids(ids(&[0]), ids(&[1])),
            &deck,
            &mut rng,
            &ClassicOptions::default(),
        );
        assert_eq!((rec.tau, rec.winner), (1, Winner::A));
    }

    #[test]
    fn coin_flip_ties_are_fair() {
        let deck = Deck::new(&DeckSpec::Ranks(vec![5, 5, 1, 2])).unwrap();
        let n = 100_000u64;
        let wins = (0..n)
            .filter(|&t| {
                let mut rng = RngStream::new(6, t);
                let mut s = GameState::from_ids(ids(&[0, 2]), ids(&[1, 3]));
                let r = classic_step(&mut s, &deck, &TiePolicy::coin(), &mut rng).unwrap();
                assert_eq!(r.a_delta.abs(), 1);
                r.a_delta == 1
            })
            .count() as f64;
        assert!((wins - n as f64 / 2.0).abs() <= 3.0 * (n as f64 * 0.25).sqrt());
    }

    #[test]
    fn runout_mid_war_loses() {
        // A: (7) only. B: (7, 3, 9). Tie with face_down = 1; A cannot stake.
        let deck = Deck::new(&DeckSpec::Ranks(vec![7, 7, 3, 9])).unwrap();
        let mut rng = RngStream::new(0, 0);
        let mut s = GameState::from_ids(ids(&[0]), ids(&[1, 2, 3]));
        let r = classic_step(&mut s, &deck, &TiePolicy::war(1), &mut rng).unwrap();
        assert_eq!(r.ended, Some(Winner::B));
        assert!(s.hand_a.is_empty());
        assert!(s.conserves(4));
    }

    #[test]
    fn simultaneous_runout_is_draw() {
        let deck = Deck::new(&DeckSpec::Ranks(vec![4, 4, 1, 2])).unwrap();
        let mut rng = RngStream::new(0, 0);
        let mut s = GameState::from_ids(ids(&[0, 2]), ids(&[1, 3]));
        let r = classic_step(&mut s, &deck, &TiePolicy::war(1), &mut rng).unwrap();
        assert_eq!(r.ended, Some(Winner::Draw));
        assert!(s.conserves(4));
        assert_eq!(s.hand_a.len(), 2);
    }

    #[test]
    fn war_moves_whole_table() {
        // A: (5, x, 9) B: (5, y, 2): war, A's 9 beats 2, A takes all six.
        let deck = Deck::new(&DeckSpec::Ranks(vec![5, 1, 9, 5, 3, 2])).unwrap();
        let mut rng = RngStream::new(0, 0);
        let mut s = GameState::from_ids(ids(&[0, 1, 2]), ids(&[3, 4, 5]));
        let r = classic_step(&mut s, &deck, &TiePolicy::war(1), &mut rng).unwrap();
        assert_eq!(r.wars, 1);
        assert_eq!(r.a_delta, 3);
        assert!(s.hand_b.is_empty());
        assert_eq!(s.round, 1);
    }

    #[test]
    fn deeper_stakes_and_conservation() {
        let deck = Deck::new(&DeckSpec::uniform(5, 4)).unwrap();
        for face_down in 0..=3 {
            let opts = ClassicOptions {
                tie: TiePolicy::war(face_down),
                record_cards_won: true,
                ..Default::default()
            };
            for t in 0..300 {
                let mut rng = RngStream::new(face_down as u64, t);
                let mut s: GameState<HandSeq> = deal_uniform(&deck, 10, &mut rng).unwrap();
                while !s.is_absorbing() {
                    let r = classic_step(&mut s, &deck, &opts.tie, &mut rng).unwrap();
                    assert!(s.conserves(20));
                    if r.ended.is_some() {
                        break;
                    }
                }
                let init: GameState<HandSeq> = deal_uniform(&deck, 10, &mut rng).unwrap();
                let rec = classic_run(init, &deck, &mut rng, &opts);
                let deltas = rec.cards_won_by_round.unwrap();
                assert_eq!(deltas.len() as u64, rec.tau);
                let total: i32 = deltas.iter().sum();
                match rec.winner {
                    Winner::A => assert_eq!(10 + total, 20),
                    Winner::B => assert_eq!(10 + total, 0),
                    _ => {}
                }
            }
        }
    }

    #[test]
    fn top_rank_deal() {
        let deck = Deck::new(&DeckSpec::uniform(13, 4)).unwrap();
        for k in 0..=4 {
            let mut rng = RngStream::new(1, k as u64);
            let s = deal_with_top_rank(&deck, k, 26, &mut rng).unwrap();
            let aces = s.hand_a.iter().filter(|&c| deck.rank(c) == 13).count();
            assert_eq!(aces, k);
            assert_eq!(s.hand_a.len(), 26);
            assert!(s.conserves(52));
        }
        let mut rng = RngStream::new(1, 0);
        assert!(deal_with_top_rank(&deck, 5, 26, &mut rng).is_err());
    }

    #[test]
    fn aces_table_rejects_zero_trials() {
        let deck = Deck::new(&DeckSpec::uniform(13, 4)).unwrap();
        assert!(aces_win_table(&deck, &ClassicOptions::default(), 0, 1, 1).is_err());
    }
}
