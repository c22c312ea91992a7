//! Exact checks of the random-walk and martingale facts on small decks.

use super::solve::SolveResult;
use super::space::{enumerate_pwar, Flavor, StateSpace};
use crate::deck::Deck;
use crate::error::{Result, WarError};
use crate::rules::{Strength, WinningRule};
use crate::scalar::{Exact, Scalar};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Largest deck accepted by [`verify_uniform_preservation`].
pub const PRESERVATION_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct SrwOracle<T> {
    pub expected_tau: T,
    pub win_prob: T,
}

/// Gambler's-ruin values for a fair walk on `0..=total` started at `a0`:
/// `E[tau] = a0 (total - a0)` and `P(hit total) = a0 / total`.
pub fn srw_oracle<T: Scalar>(total: usize, a0: usize) -> Result<SrwOracle<T>> {
    if total == 0 || a0 > total {
        return Err(WarError::OutOfRange(format!("start {a0} outside 0..={total}")));
    }
    Ok(SrwOracle {
        expected_tau: T::from_usize_exact(a0 * (total - a0)),
        win_prob: T::ratio(a0, total),
    })
}

/// Starts from the uniform law over A-hands of size `k`, takes one exact
/// step, and returns the largest deviation from the even mixture of the
/// uniform laws at sizes `k - 1` and `k + 1`.
pub fn verify_uniform_preservation<T: Scalar, R: WinningRule<T> + ?Sized>(
    rule: &R,
    deck: &Deck,
    k: usize,
) -> Result<T> {
    let n = deck.len();
    if n > PRESERVATION_LIMIT {
        return Err(WarError::TooLarge {
            size: n,
            limit: PRESERVATION_LIMIT,
        });
    }
    if k == 0 || k >= n {
        return Err(WarError::Absorbing);
    }
    let space: StateSpace<T> = enumerate_pwar(deck, rule)?;
    let start = T::one() / T::from_usize_exact(space.levels[k].len());
    let mut next = vec![T::zero(); space.len()];
    for &i in &space.levels[k] {
        for (j, p) in &space.transitions[i] {
            next[*j] += start.clone() * p.clone();
        }
    }
    let target = |level: usize| T::half() / T::from_usize_exact(space.levels[level].len());
    let (down, up) = (target(k - 1), target(k + 1));
    let mut worst = T::zero();
    for (i, mass) in next.into_iter().enumerate() {
        let level = space.level(i);
        let want = if level + 1 == k {
            down.clone()
        } else if level == k + 1 {
            up.clone()
        } else {
            T::zero()
        };
        let dev = (mass - want).abs();
        if dev > worst {
            worst = dev;
        }
    }
    Ok(worst)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Both sides of the reversed-step counting identity on a deck of `2n`:
/// `1/C(2n,k-1) * 1/C(2n-k+1,2) * 1/2` and `1/C(2n,k) * 1/k * 1/(2n-k)`.
pub fn counting_identity_sides(n: u64, k: u64) -> Result<(Exact, Exact)> {
    if n == 0 || k == 0 || k >= 2 * n {
        return Err(WarError::OutOfRange(format!(
            "k = {k} outside 1..={} for n = {n}",
            (2 * n).saturating_sub(1)
        )));
    }
    let inv = |x: BigInt| Exact::new(BigInt::one(), x);
    let two_n = 2 * n;
    let left = inv(binomial(two_n, k - 1)) * inv(binomial(two_n - k + 1, 2)) * inv(BigInt::from(2));
    let right = inv(binomial(two_n, k)) * inv(BigInt::from(k)) * inv(BigInt::from(two_n - k));
    Ok((left, right))
}

pub fn counting_identity(n: u64, k: u64) -> Result<bool> {
    let (l, r) = counting_identity_sides(n, k)?;
    Ok(l == r)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MartingaleDrift {
    /// Largest `|E[M_{t+1} - M_t | state]|` over non-absorbing states.
    pub drift_m: f64,
    /// Largest `|E[M_{t+1}^2 - M_t^2 | state] - f(a) f(b)|`.
    pub drift_q: f64,
}

/// Exact one-step drifts of `M` and `M^2 - Q` over an ordered state space.
pub fn verify_martingales<T: Scalar>(space: &StateSpace<T>, f: &Strength) -> Result<MartingaleDrift> {
    if space.flavor != Flavor::FwarOrdered {
        return Err(WarError::InvalidConfig(
            "martingale drifts need an ordered (top-card) state space".into(),
        ));
    }
    let strength: Vec<T> = space.deck.cards().iter().map(|c| f.eval::<T>(c.rank)).collect();
    let m: Vec<T> = space
        .states
        .iter()
        .map(|s| {
            s.hand_a
                .iter()
                .fold(T::zero(), |acc, c| acc + strength[c.index()].clone())
        })
        .collect();
    let mut drift = MartingaleDrift {
        drift_m: 0.0,
        drift_q: 0.0,
    };
    for (i, s) in space.states.iter().enumerate() {
        if space.is_absorbing(i) {
            continue;
        }
        let product = strength[s.hand_a[0].index()].clone() * strength[s.hand_b[0].index()].clone();
        let m2 = m[i].clone() * m[i].clone();
        let (mut dm, mut dq) = (T::zero(), -product);
        for (j, p) in &space.transitions[i] {
            dm += p.clone() * (m[*j].clone() - m[i].clone());
            dq += p.clone() * (m[*j].clone() * m[*j].clone() - m2.clone());
        }
        drift.drift_m = drift.drift_m.max(dm.abs().to_f64_lossy());
        drift.drift_q = drift.drift_q.max(dq.abs().to_f64_lossy());
    }
    Ok(drift)
}

/// Mean win probability and expected time over all states at `|A| = k`,
/// which is the uniform deal of `k` cards to A.
pub fn uniform_level_average<T: Scalar>(space: &StateSpace<T>, result: &SolveResult<T>, k: usize) -> Result<(T, T)> {
    let level = space
        .levels
        .get(k)
        .filter(|l| !l.is_empty())
        .ok_or_else(|| WarError::SizeOutOfRange {
            size: k,
            deck: space.deck.len(),
        })?;
    let w = T::one() / T::from_usize_exact(level.len());
    let (mut win, mut tau) = (T::zero(), T::zero());
    for &i in level {
        win += result.win_prob_a[i].clone();
        tau += result.expected_tau[i].clone();
    }
    Ok((win * w.clone(), tau * w))
}

fn factorial<T: Scalar>(k: usize) -> T {
    (1..=k).fold(T::one(), |acc, i| acc * T::from_usize_exact(i))
}

/// Initial law where each card goes to A independently with probability
/// 1/2, except `forced`, which always goes to A. Ordered hands are shuffled.
fn bernoulli_law<T: Scalar>(space: &StateSpace<T>, forced: Option<usize>) -> Vec<(usize, T)> {
    let free = space.deck.len() - forced.is_some() as usize;
    let set_weight = (0..free).fold(T::one(), |acc, _| acc * T::half());
    space
        .states
        .iter()
        .enumerate()
        .filter(|(_, s)| forced.is_none_or(|f| s.hand_a.iter().any(|c| c.index() == f)))
        .map(|(i, s)| {
            let w = match space.flavor {
                Flavor::PwarSubsets => set_weight.clone(),
                Flavor::FwarOrdered => {
                    set_weight.clone() / (factorial::<T>(s.hand_a.len()) * factorial::<T>(s.hand_b.len()))
                }
            };
            (i, w)
        })
        .collect()
}

/// Deal with the highest card forced to A and every other card to A with
/// probability 1/2.
pub fn eq5_law<T: Scalar>(space: &StateSpace<T>) -> Vec<(usize, T)> {
    let top = space.deck.cards().iter().max_by_key(|c| c.rank).map(|c| c.id.index());
    bernoulli_law(space, top)
}

/// Deal with every card to A independently with probability 1/2.
pub fn coin_split_law<T: Scalar>(space: &StateSpace<T>) -> Vec<(usize, T)> {
    bernoulli_law(space, None)
}

pub fn expect_under<T: Scalar>(values: &[T], law: &[(usize, T)]) -> T {
    law.iter()
        .fold(T::zero(), |acc, (i, w)| acc + w.clone() * values[*i].clone())
}
