//! Random-draw war: each round both players play a uniformly random card
//! from their hand and a winning rule decides who takes both cards.

use crate::deck::Deck;
use crate::error::{Result, WarError};
use crate::hand::{GameState, Hand, HandSet};
use crate::record::{TrialRecord, Winner};
use crate::rng::RngStream;
use crate::rules::{Matchup, WinningRule};

pub const DEFAULT_MAX_ROUNDS: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PwarOptions {
    pub max_rounds: u64,
    pub record_trajectory: bool,
    /// The game ends once a hand holds at most this many cards.
    pub hand_floor: usize,
}

impl Default for PwarOptions {
    fn default() -> Self {
        Self {
            max_rounds: DEFAULT_MAX_ROUNDS,
            record_trajectory: false,
            hand_floor: 0,
        }
    }
}

/// Plays one round. Consumes three draws in fixed order: A's card, B's card,
/// then the outcome. Returns whether A won the round.
pub fn pwar_step<R: WinningRule<f64> + ?Sized>(
    state: &mut GameState<HandSet>,
    deck: &Deck,
    rule: &R,
    rng: &mut RngStream,
) -> Result<bool> {
    if state.is_absorbing() {
        return Err(WarError::Absorbing);
    }
    let i = rng.index(state.hand_a.len());
    let j = rng.index(state.hand_b.len());
    let u = rng.unit();

    state.hand_a.move_to_back(i);
    state.hand_b.move_to_back(j);
    let (ha, hb) = (state.hand_a.as_slice(), state.hand_b.as_slice());
    let (a_rest, a) = ha.split_at(ha.len() - 1);
    let (b_rest, b) = hb.split_at(hb.len() - 1);
    let p = rule.win_prob(&Matchup {
        a: a[0],
        b: b[0],
        rest_a: a_rest,
        rest_b: b_rest,
        deck,
    });
    debug_assert!((0.0..=1.0).contains(&p), "rule returned {p}");

    let a_wins = u < p;
    if a_wins {
        let card = state.hand_b.pop().expect("non-empty");
        state.hand_a.push(card);
    } else {
        let card = state.hand_a.pop().expect("non-empty");
        state.hand_b.push(card);
    }
    state.round += 1;
    debug_assert!(state.conserves(deck.len()));
    Ok(a_wins)
}

/// Runs a game to absorption or to `max_rounds`.
pub fn pwar_run<R: WinningRule<f64> + ?Sized>(
    init: GameState<HandSet>,
    deck: &Deck,
    rule: &R,
    rng: &mut RngStream,
    opts: &PwarOptions,
) -> TrialRecord {
    let mut state = init;
    let start = state.round;
    let mut traj = opts.record_trajectory.then(|| vec![state.hand_a.len() as u32]);

    let winner = loop {
        if let Some(w) = Winner::from_sizes(state.hand_a.len(), state.hand_b.len(), opts.hand_floor) {
            break w;
        }
        if state.round - start >= opts.max_rounds {
            break Winner::Truncated;
        }
        pwar_step(&mut state, deck, rule, rng).expect("state is not absorbing");
        if let Some(t) = traj.as_mut() {
            t.push(state.hand_a.len() as u32);
        }
    };

    TrialRecord {
        tau: state.round - start,
        winner,
        a_trajectory: traj,
        seed: rng.seed(),
        stream_id: rng.stream_id(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deck::{CardId, DeckSpec};
    use crate::hand::deal_uniform;
    use crate::rules::*;

    fn ids(v: &[u32]) -> Vec<CardId> {
        v.iter().map(|&i| CardId(i)).collect()
    }

    #[test]
    fn dominant_hand_always_gains() {
        // deck [4]; A holds ranks 3 and 4.
        let deck = Deck::new(&DeckSpec::distinct(4)).unwrap();
        for t in 0..500 {
            let mut rng = RngStream::new(3, t);
            let mut s = GameState::from_ids(ids(&[2, 3]), ids(&[0, 1]));
            assert!(pwar_step(&mut s, &deck, &rule_greater_tiecoin(), &mut rng).unwrap());
            assert_eq!(s.hand_a.len(), 3);
            assert_eq!(s.round, 1);
        }
    }

    #[test]
    fn two_card_game() {
        let deck = Deck::new(&DeckSpec::distinct(2)).unwrap();
        let mut rng = RngStream::new(1, 0);
        let mut s = GameState::from_ids(ids(&[1]), ids(&[0]));
        pwar_step(&mut s, &deck, &rule_greater_tiecoin(), &mut rng).unwrap();
        assert!(s.is_absorbing());
        assert_eq!(s.hand_a.len(), 2);
        assert_eq!(
            pwar_step(&mut s, &deck, &rule_greater_tiecoin(), &mut rng),
            Err(WarError::Absorbing)
        );

        let rec = pwar_run(
            GameState::from_ids(ids(&[1]), ids(&[0])),
            &deck,
            &rule_greater_tiecoin(),
            &mut rng,
            &PwarOptions {
                record_trajectory: true,
                ..Default::default()
            },
        );
        assert_eq!(rec.tau, 1);
        assert_eq!(rec.winner, Winner::A);
        assert_eq!(rec.a_trajectory.unwrap(), vec![1, 2]);
    }

    #[test]
    fn coin_increments_are_fair() {
        let deck = Deck::new(&DeckSpec::distinct(10)).unwrap();
        let n = 200_000u64;
        let mut ups = 0u64;
        for t in 0..n {
            let mut rng = RngStream::new(77, t);
            let mut s: GameState<HandSet> = deal_uniform(&deck, 1 + (t as usize % 9), &mut rng).unwrap();
            if pwar_step(&mut s, &deck, &rule_coin(), &mut rng).unwrap() {
                ups += 1;
            }
        }
        let sigma = (n as f64 * 0.25).sqrt();
        assert!((ups as f64 - n as f64 / 2.0).abs() <= 3.0 * sigma);
    }

    #[test]
    fn max_holder_wins_within_deck_size() {
        let deck = Deck::new(&DeckSpec::distinct(12)).unwrap();
        let top = CardId(11);
        for t in 0..2000 {
            let mut rng = RngStream::new(9, t);
            let s: GameState<HandSet> = deal_uniform(&deck, 1 + (t as usize % 11), &mut rng).unwrap();
            let a_has_top = s.hand_a.contains(top);
            let b_size = s.hand_b.len() as u64;
            let rec = pwar_run(s, &deck, &rule_max_holder(), &mut rng, &PwarOptions::default());
            assert_eq!(rec.winner, if a_has_top { Winner::A } else { Winner::B });
            assert!(rec.tau <= 12);
            if a_has_top {
                assert_eq!(rec.tau, b_size);
            }
        }
    }

    #[test]
    fn truncation_and_floor() {
        let deck = Deck::new(&DeckSpec::distinct(40)).unwrap();
        let mut rng = RngStream::new(4, 0);
        let s: GameState<HandSet> = deal_uniform(&deck, 20, &mut rng).unwrap();
        let rec = pwar_run(
            s.clone(),
            &deck,
            &rule_coin(),
            &mut rng,
            &PwarOptions {
                max_rounds: 3,
                ..Default::default()
            },
        );
        assert_eq!((rec.tau, rec.winner), (3, Winner::Truncated));

        let rec = pwar_run(
            s,
            &deck,
            &rule_coin(),
            &mut rng,
            &PwarOptions {
                hand_floor: 19,
                ..Default::default()
            },
        );
        assert_eq!(rec.tau, 1);
        assert!(rec.winner.is_decided());
    }
}
