//! Bradley-Terry ("martingale") war: top cards meet, card `a` beats `b` with
//! probability `f(a) / (f(a) + f(b))`, and the round winner puts both cards
//! on the bottom of their hand.
//!
//! The engine tracks `M_t`, the total strength of A's hand, and `Q_t`, the
//! running sum of `f(a_t) f(b_t)` over played rounds. `M_t` and
//! `M_t^2 - Q_t` are martingales.

use crate::deck::{CardId, Deck};
use crate::error::{Result, WarError};
use crate::hand::{deal_bernoulli, GameState, Hand, HandSeq};
use crate::pwar::DEFAULT_MAX_ROUNDS;
use crate::record::Winner;
use crate::rng::RngStream;
use crate::rules::Strength;
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};

/// Order in which the round winner puts the two cards on the bottom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReturnOrder {
    /// Each order with probability 1/2 (one draw per round).
    #[default]
    Random,
    /// The card taken from the opponent goes under first.
    WonCardFirst,
    /// The winner's own card goes under first.
    OwnCardFirst,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FwarOptions {
    pub max_rounds: u64,
    pub record: bool,
    pub return_order: ReturnOrder,
}

impl Default for FwarOptions {
    fn default() -> Self {
        Self {
            max_rounds: DEFAULT_MAX_ROUNDS,
            record: false,
            return_order: ReturnOrder::Random,
        }
    }
}

/// What happened in one round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FwarRound {
    pub a_card: CardId,
    pub b_card: CardId,
    pub a_won: bool,
    /// `f(a) f(b)`, the round's increment of `Q`.
    pub round_product: f64,
    /// Change of `M`: `+f(b)` if A won, `-f(a)` otherwise.
    pub delta_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FwarTrace {
    pub tau: u64,
    pub winner: Winner,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_trajectory: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_trajectory: Option<Vec<f64>>,
    pub m_initial: f64,
    pub m_final: f64,
    pub q_final: f64,
    /// Smallest and largest round product seen (`None` when `tau = 0`).
    pub product_range: Option<(f64, f64)>,
    pub seed: u64,
    pub stream_id: u64,
}

pub fn hand_strength(hand: impl IntoIterator<Item = CardId>, deck: &Deck, f: &Strength) -> f64 {
    hand.into_iter().map(|c| f.eval_f64(deck.rank(c))).sum()
}

pub fn fwar_step(
    state: &mut GameState<HandSeq>,
    deck: &Deck,
    f: &Strength,
    order: ReturnOrder,
    rng: &mut RngStream,
) -> Result<FwarRound> {
    let (Some(a), Some(b)) = (state.hand_a.front(), state.hand_b.front()) else {
        return Err(WarError::Absorbing);
    };
    let fa = f.eval_f64(deck.rank(a));
    let fb = f.eval_f64(deck.rank(b));
    let a_won = rng.bernoulli_unchecked(fa / (fa + fb));
    let own_first = match order {
        ReturnOrder::Random => rng.coin(),
        ReturnOrder::OwnCardFirst => true,
        ReturnOrder::WonCardFirst => false,
    };

    state.hand_a.pop_front();
    state.hand_b.pop_front();
    let (own, won, hand) = if a_won {
        (a, b, &mut state.hand_a)
    } else {
        (b, a, &mut state.hand_b)
    };
    if own_first {
        hand.push_back(own);
        hand.push_back(won);
    } else {
        hand.push_back(won);
        hand.push_back(own);
    }
    state.round += 1;
    debug_assert!(state.conserves(deck.len()));

    Ok(FwarRound {
        a_card: a,
        b_card: b,
        a_won,
        round_product: fa * fb,
        delta_m: if a_won { fb } else { -fa },
    })
}

/// Runs a game, calling `observe` with the pre-round `M` and each round.
pub fn fwar_run_observed(
    init: GameState<HandSeq>,
    deck: &Deck,
    f: &Strength,
    rng: &mut RngStream,
    opts: &FwarOptions,
    mut observe: impl FnMut(f64, &FwarRound),
) -> FwarTrace {
    let mut state = init;
    let start = state.round;
    let m_initial = hand_strength(state.hand_a.iter(), deck, f);
    let mut m = m_initial;
    let mut q = 0.0;
    let mut range: Option<(f64, f64)> = None;
    let mut m_traj = opts.record.then(|| vec![m]);
    let mut q_traj = opts.record.then(|| vec![q]);

    let winner = loop {
        if let Some(w) = Winner::from_sizes(state.hand_a.len(), state.hand_b.len(), 0) {
            break w;
        }
        if state.round - start >= opts.max_rounds {
            break Winner::Truncated;
        }
        let r = fwar_step(&mut state, deck, f, opts.return_order, rng).expect("not absorbing");
        observe(m, &r);
        m += r.delta_m;
        q += r.round_product;
        range = Some(match range {
            None => (r.round_product, r.round_product),
            Some((lo, hi)) => (lo.min(r.round_product), hi.max(r.round_product)),
        });
        if let (Some(mt), Some(qt)) = (m_traj.as_mut(), q_traj.as_mut()) {
            mt.push(m);
            qt.push(q);
        }
    };

    debug_assert!({
        let exact = hand_strength(state.hand_a.iter(), deck, f);
        (exact - m).abs() <= 1e-9 * exact.abs().max(1.0)
    });

    FwarTrace {
        tau: state.round - start,
        winner,
        m_trajectory: m_traj,
        q_trajectory: q_traj,
        m_initial,
        m_final: m,
        q_final: q,
        product_range: range,
        seed: rng.seed(),
        stream_id: rng.stream_id(),
    }
}

pub fn fwar_run(
    init: GameState<HandSeq>,
    deck: &Deck,
    f: &Strength,
    rng: &mut RngStream,
    opts: &FwarOptions,
) -> FwarTrace {
    fwar_run_observed(init, deck, f, rng, opts, |_, _| {})
}

/// Initial law behind the optional-stopping win probability: the top card
/// goes to A, every other card to A with probability 1/2, hands shuffled.
pub fn deal_top_card_to_a(deck: &Deck, rng: &mut RngStream) -> GameState<HandSeq> {
    let top = deck.cards().iter().max_by_key(|c| c.rank).map(|c| c.id);
    deal_bernoulli(deck, top, rng)
}

/// Initial law of the shifted-strength scaling experiment: every card to A
/// with probability 1/2, hands shuffled.
pub fn deal_coin_split(deck: &Deck, rng: &mut RngStream) -> GameState<HandSeq> {
    deal_bernoulli(deck, None, rng)
}

/// Win probability of A on deck `[n]` when A starts with card `n` and every
/// other card independently with probability 1/2:
/// `1/2 + f(n) / (2 sum_i f(i))`.
pub fn eq5_win_prob<T: Scalar>(f: &Strength, n: u32) -> Result<T> {
    if n == 0 {
        return Err(WarError::OutOfRange("n must be positive".into()));
    }
    let total = (1..=n).fold(T::zero(), |acc, i| acc + f.eval::<T>(i));
    let two = T::from_usize_exact(2);
    Ok(T::half() + f.eval::<T>(n) / (two * total))
}

/// `(E[M_0], E[M_0^2])` for `f(a) = a + n` on deck `[n]` with each card
/// dealt to A independently with probability 1/2.
///
/// With strengths `i` in `n+1..=2n`, `E[M_0] = (3n^2 + n) / 4` and
/// `E[M_0^2] = sum_i i^2 / 2 + sum_{i != j} i j / 4`.
pub fn claim_moments<T: Scalar>(n: u32) -> Result<(T, T)> {
    if n == 0 {
        return Err(WarError::OutOfRange("n must be positive".into()));
    }
    let strengths = || (n + 1..=2 * n).map(|i| T::from_u32(i).unwrap());
    let s1 = strengths().fold(T::zero(), |acc, x| acc + x);
    let s2 = strengths().fold(T::zero(), |acc, x| acc + x.clone() * x);
    let four = T::from_usize_exact(4);
    let e_m0 = s1.clone() / T::from_usize_exact(2);
    let e_m0_sq = s2.clone() / T::from_usize_exact(2) + (s1.clone() * s1 - s2) / four;
    Ok((e_m0, e_m0_sq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deck::DeckSpec;
    use crate::hand::Hand;
    use crate::scalar::Exact;

    fn ids(v: &[u32]) -> Vec<CardId> {
        v.iter().map(|&i| CardId(i)).collect()
    }

    #[test]
    fn constant_strength_round() {
        let deck = Deck::new(&DeckSpec::distinct(6)).unwrap();
        let mut rng = RngStream::new(1, 0);
        let mut s = GameState::from_ids(ids(&[0, 1, 2]), ids(&[3, 4, 5]));
        let r = fwar_step(&mut s, &deck, &Strength::Constant, ReturnOrder::Random, &mut rng).unwrap();
        assert_eq!(r.round_product, 1.0);
        assert!(s.conserves(6));
        assert_eq!(s.hand_a.len() + s.hand_b.len(), 6);
    }

    #[test]
    fn identity_one_vs_three() {
        // a = rank 1, b = rank 3: A wins with probability 1/4.
        let deck = Deck::new(&DeckSpec::distinct(3)).unwrap();
        let n = 200_000u64;
        let wins = (0..n)
            .filter(|&t| {
                let mut rng = RngStream::new(8, t);
                let mut s = GameState::from_ids(ids(&[0, 1]), ids(&[2]));
                fwar_step(&mut s, &deck, &Strength::Identity, ReturnOrder::Random, &mut rng)
                    .unwrap()
                    .a_won
            })
            .count() as f64;
        let sigma = (n as f64 * 0.25 * 0.75).sqrt();
        assert!((wins - n as f64 * 0.25).abs() <= 3.0 * sigma);
    }

    #[test]
    fn return_orders() {
        let deck = Deck::new(&DeckSpec::distinct(4)).unwrap();
        let mut rng = RngStream::new(2, 0);
        // Constant strength, force outcomes by repeating until A wins.
        loop {
            let mut s = GameState::from_ids(ids(&[0, 1]), ids(&[2, 3]));
            let r = fwar_step(&mut s, &deck, &Strength::Constant, ReturnOrder::OwnCardFirst, &mut rng).unwrap();
            if r.a_won {
                assert_eq!(s.hand_a.ids(), ids(&[1, 0, 2]));
                break;
            }
        }
        loop {
            let mut s = GameState::from_ids(ids(&[0, 1]), ids(&[2, 3]));
            let r = fwar_step(&mut s, &deck, &Strength::Constant, ReturnOrder::WonCardFirst, &mut rng).unwrap();
            if !r.a_won {
                assert_eq!(s.hand_b.ids(), ids(&[3, 0, 2]));
                break;
            }
        }
    }

    #[test]
    fn empty_hand_is_immediate_loss() {
        let deck = Deck::new(&DeckSpec::distinct(3)).unwrap();
        let mut rng = RngStream::new(1, 0);
        let t = fwar_run(
            GameState::from_ids(vec![], ids(&[0, 1, 2])),
            &deck,
            &Strength::Identity,
            &mut rng,
            &FwarOptions::default(),
        );
        assert_eq!((t.tau, t.winner), (0, Winner::B));
        assert_eq!(t.product_range, None);
    }

    #[test]
    fn tracked_strength_matches_hands() {
        let n = 16;
        let deck = Deck::new(&DeckSpec::distinct(n)).unwrap();
        let f = Strength::Shifted(n as i64);
        for t in 0..200 {
            let mut rng = RngStream::new(5, t);
            let init = deal_coin_split(&deck, &mut rng);
            let trace = fwar_run(
                init,
                &deck,
                &f,
                &mut rng,
                &FwarOptions {
                    record: true,
                    ..Default::default()
                },
            );
            let m = trace.m_trajectory.as_ref().unwrap();
            let q = trace.q_trajectory.as_ref().unwrap();
            assert_eq!(m.len() as u64, trace.tau + 1);
            assert_eq!(q[0], 0.0);
            assert!(q.windows(2).all(|w| w[1] >= w[0]));
            let expected_final = if trace.winner == Winner::A {
                hand_strength(deck.ids(), &deck, &f)
            } else {
                0.0
            };
            assert!((trace.m_final - expected_final).abs() <= 1e-9 * expected_final.max(1.0));
            if let Some((lo, hi)) = trace.product_range {
                let (lo_bound, hi_bound) = (((n + 1) * (n + 1)) as f64, (4 * n * n) as f64);
                assert!(lo >= lo_bound && hi <= hi_bound);
            }
        }
    }

    #[test]
    fn eq5_values() {
        assert_eq!(
            eq5_win_prob::<Exact>(&Strength::Identity, 3).unwrap(),
            Exact::new(3.into(), 4.into())
        );
        assert_eq!(eq5_win_prob::<f64>(&Strength::Constant, 4).unwrap(), 0.625);
        let mut last = 0.0;
        for lambda in [0.0, 0.5, 1.0, 2.0, 4.0, 8.0] {
            let p = eq5_win_prob::<f64>(&Strength::Exponential(lambda), 10).unwrap();
            assert!(p > last);
            last = p;
        }
        assert!(1.0 - last < 1e-3);
    }

    /// Exhaustive oracle over all 2^n deals.
    fn brute_moments(n: u32) -> (f64, f64) {
        let (mut m1, mut m2) = (0.0, 0.0);
        let weight = 0.5f64.powi(n as i32);
        for mask in 0u32..(1 << n) {
            let m: f64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| (i + 1 + n) as f64).sum();
            m1 += weight * m;
            m2 += weight * m * m;
        }
        (m1, m2)
    }

    #[test]
    fn claim_moments_match_enumeration() {
        assert_eq!(claim_moments::<f64>(2).unwrap().0, 3.5);
        assert_eq!(claim_moments::<f64>(1).unwrap().0, 1.0);
        assert_eq!(claim_moments::<f64>(1).unwrap().1, 2.0);
        for n in 1..=12 {
            let (m1, m2) = claim_moments::<f64>(n).unwrap();
            let (b1, b2) = brute_moments(n);
            assert!((m1 - b1).abs() <= 1e-9, "n={n}");
            assert!((m2 - b2).abs() <= 1e-9 * b2, "n={n}: {m2} vs {b2}");
            let nf = n as f64;
            assert_eq!(m1, (3.0 * nf * nf + nf) / 4.0);
        }
        let exact = claim_moments::<Exact>(10).unwrap();
        let (b1, b2) = brute_moments(10);
        assert_eq!(exact.0.to_f64_lossy(), b1);
        assert!((exact.1.to_f64_lossy() - b2).abs() <= 1e-9);
    }
}
