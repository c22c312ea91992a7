use super::{Matchup, WinningRule};
use crate::deck::{CardId, Deck};
use crate::error::{Result, WarError};
use crate::scalar::Scalar;
use serde::Serialize;

/// Largest deck `validate_rule` will enumerate.
pub const VALIDATE_LIMIT: usize = 14;
pub const VIOLATION_TOL: f64 = 1e-12;

/// A point `(a, b, S)` of the rule's domain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub a: CardId,
    pub b: CardId,
    pub rest_a: Vec<CardId>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RuleReport {
    pub rule: String,
    pub is_valid_rule: bool,
    pub is_symmetric: bool,
    /// Largest violation of `p_{a,b}(S) + p_{b,a}(D \ (S ∪ {a,b})) = 1`, or
    /// of `0 <= p <= 1`.
    pub max_violation: f64,
    pub witness: Option<Witness>,
    /// Largest violation of `p_{a,b}(S) + p_{b,a}(S) = 1`.
    pub max_symmetry_violation: f64,
    pub symmetry_witness: Option<Witness>,
}

/// Enumerates every `(a, b, S)` and checks the winning-rule identity and the
/// symmetry identity.
pub fn validate_rule<T: Scalar, R: WinningRule<T> + ?Sized>(rule: &R, deck: &Deck) -> Result<RuleReport> {
    let n = deck.len();
    if n > VALIDATE_LIMIT {
        return Err(WarError::TooLarge {
            size: n,
            limit: VALIDATE_LIMIT,
        });
    }
    rule.check_deck(deck)?;

    let mut worst = (0.0f64, None);
    let mut worst_sym = (0.0f64, None);
    let mut rest_a = Vec::with_capacity(n);
    let mut rest_b = Vec::with_capacity(n);
    let one = T::one();

    for a in deck.ids() {
        for b in deck.ids().filter(|&b| b != a) {
            let others: Vec<CardId> = deck.ids().filter(|&c| c != a && c != b).collect();
            for mask in 0u32..(1u32 << others.len()) {
                rest_a.clear();
                rest_b.clear();
                for (i, &c) in others.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        rest_a.push(c);
                    } else {
                        rest_b.push(c);
                    }
                }
                let m = Matchup {
                    a,
                    b,
                    rest_a: &rest_a,
                    rest_b: &rest_b,
                    deck,
                };
                let p = rule.win_prob(&m);
                let mirrored = rule.win_prob(&m.swapped());
                let same_rest = rule.win_prob(&Matchup {
                    a: b,
                    b: a,
                    rest_a: &rest_a,
                    rest_b: &rest_b,
                    deck,
                });

                let pf = p.to_f64_lossy();
                let range = (-pf).max(pf - 1.0).max(0.0);
                let ident = (p.clone() + mirrored - one.clone()).abs().to_f64_lossy();
                let violation = range.max(ident);
                let sym = (p + same_rest - one.clone()).abs().to_f64_lossy();

                let witness = || Witness {
                    a,
                    b,
                    rest_a: rest_a.clone(),
                };
                if violation > worst.0 || violation.is_nan() && !worst.0.is_nan() {
                    worst = (violation, Some(witness()));
                }
                if sym > worst_sym.0 || sym.is_nan() && !worst_sym.0.is_nan() {
                    worst_sym = (sym, Some(witness()));
                }
            }
        }
    }

    Ok(RuleReport {
        rule: rule.name(),
        is_valid_rule: worst.0 <= VIOLATION_TOL,
        is_symmetric: worst_sym.0 <= VIOLATION_TOL,
        max_violation: worst.0,
        witness: worst.1,
        max_symmetry_violation: worst_sym.0,
        symmetry_witness: worst_sym.1,
    })
}
