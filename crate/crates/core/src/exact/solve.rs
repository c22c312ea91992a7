//! First-step analysis by block elimination over hand-size levels.
//!
//! With `x_k` the unknowns at level `k`, each level satisfies
//! `x_k - U_k x_{k+1} - D_k x_{k-1} = r_k`. A forward sweep produces
//! `x_k = G_k x_{k+1} + h_k` by Gaussian elimination with partial pivoting
//! on `(I - D_k G_{k-1})`; a backward sweep recovers every `x_k`.

use super::space::{Flavor, StateSpace};
use crate::error::{Result, WarError};
use crate::scalar::Scalar;
use std::collections::VecDeque;
use std::io::{self, Write};

pub const RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult<T> {
    /// Probability that A ends up with every card, per state.
    pub win_prob_a: Vec<T>,
    /// Expected rounds to absorption, per state.
    pub expected_tau: Vec<T>,
    /// Largest residual of the first-step equations.
    pub residual: f64,
}

struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    #[inline]
    fn at(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    #[inline]
    fn at_mut(&mut self, r: usize, c: usize) -> &mut T {
        &mut self.data[r * self.cols + c]
    }

    fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Mutable row `dst` together with shared row `src` (`dst != src`).
    fn row_pair(&mut self, dst: usize, src: usize) -> (&mut [T], &[T]) {
        let c = self.cols;
        if dst > src {
            let (lo, hi) = self.data.split_at_mut(dst * c);
            (&mut hi[..c], &lo[src * c..(src + 1) * c])
        } else {
            let (lo, hi) = self.data.split_at_mut(src * c);
            (&mut lo[dst * c..(dst + 1) * c], &hi[..c])
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }
}

/// `dst -= f * src`
#[inline]
fn sub_scaled<T: Scalar>(dst: &mut [T], f: &T, src: &[T]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d -= f.clone() * s.clone();
    }
}

/// Solves `a X = b` in place (`b` becomes `X`).
fn gauss_solve<T: Scalar>(mut a: Mat<T>, b: &mut Mat<T>, level: usize) -> Result<()> {
    let n = a.rows;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| {
                a.at(x, col)
                    .abs()
                    .partial_cmp(&a.at(y, col).abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("non-empty range");
        if a.at(pivot, col).is_zero() {
            return Err(WarError::Singular { level });
        }
        a.swap_rows(col, pivot);
        b.swap_rows(col, pivot);
        let diag = a.at(col, col).clone();
        for r in col + 1..n {
            if a.at(r, col).is_zero() {
                continue;
            }
            let f = a.at(r, col).clone() / diag.clone();
            let (dst, src) = a.row_pair(r, col);
            sub_scaled(&mut dst[col..], &f, &src[col..]);
            let (dst, src) = b.row_pair(r, col);
            sub_scaled(dst, &f, src);
        }
    }
    for r in (0..n).rev() {
        for c in r + 1..n {
            if a.at(r, c).is_zero() {
                continue;
            }
            let f = a.at(r, c).clone();
            let (dst, src) = b.row_pair(r, c);
            sub_scaled(dst, &f, src);
        }
        let diag = a.at(r, r).clone();
        for x in &mut b.data[r * b.cols..(r + 1) * b.cols] {
            *x = x.clone() / diag.clone();
        }
    }
    Ok(())
}

/// Every state must reach an absorbing state with positive probability.
fn check_absorption<T: Scalar>(space: &StateSpace<T>) -> Result<()> {
    let n = space.len();
    let mut reverse = vec![Vec::new(); n];
    for (i, row) in space.transitions.iter().enumerate() {
        for (j, p) in row {
            if !p.is_zero() {
                reverse[*j].push(i);
            }
        }
    }
    let mut reached = vec![false; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| space.is_absorbing(i)).collect();
    queue.iter().for_each(|&i| reached[i] = true);
    while let Some(j) = queue.pop_front() {
        for &i in &reverse[j] {
            if !reached[i] {
                reached[i] = true;
                queue.push_back(i);
            }
        }
    }
    let stuck: Vec<usize> = (0..n).filter(|&i| !reached[i]).collect();
    match stuck.first() {
        Some(&witness) => Err(WarError::NotAbsorbing {
            count: stuck.len(),
            witness,
        }),
        None => Ok(()),
    }
}

/// Win probability and expected absorption time from every state.
pub fn absorption_solve<T: Scalar>(space: &StateSpace<T>) -> Result<SolveResult<T>> {
    check_absorption(space)?;
    let n = space.len();
    let top = space.levels.len() - 1;
    let mut win = vec![T::zero(); n];
    let mut tau = vec![T::zero(); n];
    for &i in &space.levels[top] {
        win[i] = T::one();
    }

    let mut pos = vec![0usize; n];
    for level in &space.levels {
        for (p, &i) in level.iter().enumerate() {
            pos[i] = p;
        }
    }

    // solved[k] = [G_k | h_k] for interior levels.
    let mut solved: Vec<Option<Mat<T>>> = (0..=top).map(|_| None).collect();
    for k in 1..top {
        let states = &space.levels[k];
        let m = states.len();
        let up_m = if k + 1 < top { space.levels[k + 1].len() } else { 0 };
        let (wc, tc) = (up_m, up_m + 1);
        let mut a = Mat::identity(m);
        let mut rhs = Mat::zeros(m, up_m + 2);
        for (r, &i) in states.iter().enumerate() {
            *rhs.at_mut(r, tc) = T::one();
            for (j, p) in &space.transitions[i] {
                let lj = space.level(*j);
                if lj == k + 1 {
                    if k + 1 == top {
                        *rhs.at_mut(r, wc) += p.clone() * win[*j].clone();
                    } else {
                        *rhs.at_mut(r, pos[*j]) += p.clone();
                    }
                } else if lj + 1 == k {
                    if let Some(prev) = solved[k - 1].as_ref() {
                        let prow = prev.row(pos[*j]);
                        let arow = &mut a.data[r * m..(r + 1) * m];
                        sub_scaled(arow, p, &prow[..m]);
                        *rhs.at_mut(r, wc) += p.clone() * prow[prev.cols - 2].clone();
                        *rhs.at_mut(r, tc) += p.clone() * prow[prev.cols - 1].clone();
                    }
                    // level 0 is absorbing with win = tau = 0: nothing to add.
                } else {
                    return Err(WarError::InvalidConfig(format!("transition {i} -> {j} skips a level")));
                }
            }
        }
        gauss_solve(a, &mut rhs, k)?;
        solved[k] = Some(rhs);
    }

    for k in (1..top).rev() {
        let x = solved[k].as_ref().expect("solved in forward sweep");
        for (r, &i) in space.levels[k].iter().enumerate() {
            let mut w = x.at(r, x.cols - 2).clone();
            let mut t = x.at(r, x.cols - 1).clone();
            if k + 1 < top {
                for (c, &j) in space.levels[k + 1].iter().enumerate() {
                    let g = x.at(r, c);
                    if !g.is_zero() {
                        w += g.clone() * win[j].clone();
                        t += g.clone() * tau[j].clone();
                    }
                }
            }
            win[i] = w;
            tau[i] = t;
        }
    }

    let residual = (0..n)
        .filter(|&i| !space.is_absorbing(i))
        .map(|i| {
            let (mut rw, mut rt) = (win[i].clone(), tau[i].clone() - T::one());
            for (j, p) in &space.transitions[i] {
                rw -= p.clone() * win[*j].clone();
                rt -= p.clone() * tau[*j].clone();
            }
            rw.abs().to_f64_lossy().max(rt.abs().to_f64_lossy())
        })
        .fold(0.0, f64::max);

    Ok(SolveResult {
        win_prob_a: win,
        expected_tau: tau,
        residual,
    })
}

/// Hand label of state `i`: A's card bitmask for random-draw spaces, and
/// `a1-a2|b1-b2` (ranks, top card first) for ordered ones.
pub fn state_label<T: Scalar>(space: &StateSpace<T>, i: usize) -> String {
    let s = &space.states[i];
    match space.flavor {
        Flavor::PwarSubsets => s.hand_a.iter().fold(0u64, |m, c| m | 1 << c.0).to_string(),
        Flavor::FwarOrdered => {
            let join = |h: &[crate::deck::CardId]| {
                h.iter()
                    .map(|&c| space.deck.rank(c).to_string())
                    .collect::<Vec<_>>()
                    .join("-")
            };
            format!("{}|{}", join(&s.hand_a), join(&s.hand_b))
        }
    }
}

/// Writes `state,hand,win_prob,expected_tau` rows, `hand` as in
/// [`state_label`].
pub fn write_solve_csv<T: Scalar, W: Write>(
    space: &StateSpace<T>,
    result: &SolveResult<T>,
    mut out: W,
) -> io::Result<()> {
    writeln!(out, "state,hand,win_prob,expected_tau")?;
    for i in 0..space.len() {
        writeln!(
            out,
            "{i},{},{},{}",
            state_label(space, i),
            result.win_prob_a[i].to_f64_lossy(),
            result.expected_tau[i].to_f64_lossy()
        )?;
    }
    Ok(())
}
