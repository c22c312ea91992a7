use crate::deck::{CardId, Deck, DeckSpec};
use crate::error::{Result, WarError};
use crate::rules::{Matchup, Strength, WinningRule};
use crate::scalar::Scalar;
use std::collections::BTreeMap;

pub const PWAR_LIMIT: usize = 14;
pub const FWAR_LIMIT: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    /// States are subsets of the deck held by A, indexed by bitmask.
    PwarSubsets,
    /// States are ordered hand pairs, indexed by `|A| * n! + lexrank(A ++ B)`.
    FwarOrdered,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactState {
    pub hand_a: Vec<CardId>,
    pub hand_b: Vec<CardId>,
}

/// Finite Markov chain of one game on a small deck. Every transition moves
/// exactly one card, so states at level `|A| = k` only lead to levels
/// `k - 1` and `k + 1`.
#[derive(Debug, Clone)]
pub struct StateSpace<T> {
    pub flavor: Flavor,
    pub deck: Deck,
    pub states: Vec<ExactState>,
    /// Outgoing `(next, probability)` pairs; empty for absorbing states.
    pub transitions: Vec<Vec<(usize, T)>>,
    /// State indices grouped by `|A|`.
    pub levels: Vec<Vec<usize>>,
}

impl<T: Scalar> StateSpace<T> {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn level(&self, i: usize) -> usize {
        self.states[i].hand_a.len()
    }

    pub fn is_absorbing(&self, i: usize) -> bool {
        let s = &self.states[i];
        s.hand_a.is_empty() || s.hand_b.is_empty()
    }

    /// Largest deviation of an outgoing row sum from 1.
    pub fn max_row_sum_error(&self) -> f64 {
        self.transitions
            .iter()
            .filter(|row| !row.is_empty())
            .map(|row| {
                let sum = row.iter().fold(T::zero(), |acc, (_, p)| acc + p.clone());
                (sum - T::one()).abs().to_f64_lossy()
            })
            .fold(0.0, f64::max)
    }

    /// Total probability of moving from `i` to a state with `|A| = level`.
    pub fn level_transition_prob(&self, i: usize, level: usize) -> T {
        self.transitions[i]
            .iter()
            .filter(|(j, _)| self.level(*j) == level)
            .fold(T::zero(), |acc, (_, p)| acc + p.clone())
    }

    fn group_levels(states: &[ExactState], max_level: usize) -> Vec<Vec<usize>> {
        let mut levels = vec![Vec::new(); max_level + 1];
        for (i, s) in states.iter().enumerate() {
            levels[s.hand_a.len()].push(i);
        }
        levels
    }
}

fn merge<T: Scalar>(row: BTreeMap<usize, T>) -> Vec<(usize, T)> {
    row.into_iter().filter(|(_, p)| !p.is_zero()).collect()
}

/// Enumerates random-draw war on `deck`: all `2^|D|` splits, each round
/// drawing `a` and `b` uniformly and applying `rule`.
pub fn enumerate_pwar<T: Scalar, R: WinningRule<T> + ?Sized>(deck: &Deck, rule: &R) -> Result<StateSpace<T>> {
    let n = deck.len();
    if n > PWAR_LIMIT {
        return Err(WarError::TooLarge {
            size: n,
            limit: PWAR_LIMIT,
        });
    }
    rule.check_deck(deck)?;
    let full: u32 = (1u32 << n) - 1;
    let mut states = Vec::with_capacity(1 << n);
    let mut transitions = Vec::with_capacity(1 << n);

    for mask in 0..=full {
        let (hand_a, hand_b): (Vec<CardId>, Vec<CardId>) = deck.ids().partition(|c| mask >> c.0 & 1 == 1);
        let mut row = BTreeMap::new();
        if !hand_a.is_empty() && !hand_b.is_empty() {
            let draw = T::one() / T::from_usize_exact(hand_a.len() * hand_b.len());
            for &a in &hand_a {
                let rest_a: Vec<CardId> = hand_a.iter().copied().filter(|&c| c != a).collect();
                for &b in &hand_b {
                    let rest_b: Vec<CardId> = hand_b.iter().copied().filter(|&c| c != b).collect();
                    let p = rule.win_prob(&Matchup {
                        a,
                        b,
                        rest_a: &rest_a,
                        rest_b: &rest_b,
                        deck,
                    });
                    let up = (mask | 1 << b.0) as usize;
                    let down = (mask & !(1 << a.0)) as usize;
                    *row.entry(up).or_insert_with(T::zero) += draw.clone() * p.clone();
                    *row.entry(down).or_insert_with(T::zero) += draw.clone() * (T::one() - p);
                }
            }
        }
        transitions.push(merge(row));
        states.push(ExactState { hand_a, hand_b });
    }
    let levels = StateSpace::<T>::group_levels(&states, n);
    Ok(StateSpace {
        flavor: Flavor::PwarSubsets,
        deck: deck.clone(),
        states,
        transitions,
        levels,
    })
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Lexicographic rank of a permutation of `0..perm.len()`.
fn perm_rank(perm: &[u32]) -> usize {
    let n = perm.len();
    let mut rank = 0;
    for i in 0..n {
        let smaller_after = perm[i + 1..].iter().filter(|&&x| x < perm[i]).count();
        rank += smaller_after * factorial(n - 1 - i);
    }
    rank
}

fn perm_unrank(mut rank: usize, n: usize) -> Vec<u32> {
    let mut pool: Vec<u32> = (0..n as u32).collect();
    let mut out = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let f = factorial(i);
        out.push(pool.remove(rank / f));
        rank %= f;
    }
    out
}

fn fwar_index(a: &[u32], b: &[u32], n: usize) -> usize {
    let perm: Vec<u32> = a.iter().chain(b).copied().collect();
    a.len() * factorial(n) + perm_rank(&perm)
}

/// Enumerates Bradley-Terry war on deck `[n]`: `(n + 1)!` ordered states.
/// Each round branches on the winner and on the two return orders.
pub fn enumerate_fwar<T: Scalar>(n: usize, f: &Strength) -> Result<StateSpace<T>> {
    if n == 0 || n > FWAR_LIMIT {
        return Err(WarError::TooLarge {
            size: n,
            limit: FWAR_LIMIT,
        });
    }
    let deck = Deck::new(&DeckSpec::distinct(n as u32))?;
    f.check_deck(&deck)?;
    let nf = factorial(n);
    let strength: Vec<T> = deck.cards().iter().map(|c| f.eval::<T>(c.rank)).collect();
    let half = T::half();

    let mut states = Vec::with_capacity((n + 1) * nf);
    let mut transitions = Vec::with_capacity((n + 1) * nf);
    for k in 0..=n {
        for r in 0..nf {
            let perm = perm_unrank(r, n);
            let (a, b) = perm.split_at(k);
            let mut row = BTreeMap::new();
            if k > 0 && k < n {
                let (top_a, top_b) = (a[0], b[0]);
                let (fa, fb) = (strength[top_a as usize].clone(), strength[top_b as usize].clone());
                let pa = fa.clone() / (fa + fb);
                let pb = T::one() - pa.clone();
                for (a_wins, p) in [(true, pa), (false, pb)] {
                    for order in [[top_a, top_b], [top_b, top_a]] {
                        let (na, nb) = if a_wins {
                            ([&a[1..], &order[..]].concat(), b[1..].to_vec())
                        } else {
                            (a[1..].to_vec(), [&b[1..], &order[..]].concat())
                        };
                        *row.entry(fwar_index(&na, &nb, n)).or_insert_with(T::zero) += p.clone() * half.clone();
                    }
                }
            }
            transitions.push(merge(row));
            states.push(ExactState {
                hand_a: a.iter().map(|&c| CardId(c)).collect(),
                hand_b: b.iter().map(|&c| CardId(c)).collect(),
            });
        }
    }
    let levels = StateSpace::<T>::group_levels(&states, n);
    Ok(StateSpace {
        flavor: Flavor::FwarOrdered,
        deck,
        states,
        transitions,
        levels,
    })
}
