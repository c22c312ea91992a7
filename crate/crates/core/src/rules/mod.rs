//! Winning rules for random-draw war and the strength functions used by
//! Bradley-Terry play.
//!
//! A winning rule gives the probability `p_{a,b}(S)` that A's card `a` beats
//! B's card `b` when the rest of A's hand is `S`. Rules see card ids, so they
//! can use ranks, hand contents and hand sizes.

mod strength;
mod validate;

pub use strength::{strength_builtin, Strength, STRENGTH_NAMES};
pub use validate::{validate_rule, RuleReport, Witness, VALIDATE_LIMIT, VIOLATION_TOL};

use crate::deck::{CardId, Deck};
use crate::error::{Result, WarError};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// One round as seen by a rule. `rest_a` is `S = A \ {a}` and `rest_b` is
/// `B \ {b} = D \ (S ∪ {a, b})`.
#[derive(Debug, Clone, Copy)]
pub struct Matchup<'a> {
    pub a: CardId,
    pub b: CardId,
    pub rest_a: &'a [CardId],
    pub rest_b: &'a [CardId],
    pub deck: &'a Deck,
}

impl<'a> Matchup<'a> {
    pub fn rank_a(&self) -> u32 {
        self.deck.rank(self.a)
    }

    pub fn rank_b(&self) -> u32 {
        self.deck.rank(self.b)
    }

    /// The same round with the players' roles exchanged.
    pub fn swapped(&self) -> Matchup<'a> {
        Matchup {
            a: self.b,
            b: self.a,
            rest_a: self.rest_b,
            rest_b: self.rest_a,
            deck: self.deck,
        }
    }
}

pub trait WinningRule<T: Scalar>: Send + Sync {
    fn name(&self) -> String;

    /// Probability that A's card wins the round.
    fn win_prob(&self, m: &Matchup<'_>) -> T;

    /// Rejects decks the rule is not defined on.
    fn check_deck(&self, _deck: &Deck) -> Result<()> {
        Ok(())
    }
}

/// The rules shipped with the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuiltinRule {
    /// Fair coin regardless of the cards.
    Coin,
    /// Higher rank wins; equal ranks flip a fair coin.
    GreaterTieCoin,
    /// Higher rank wins; distinct-rank decks only.
    Greater,
    /// `a^s / (a^s + b^s)` with `s = min(|S|, |B \ {b}|)`.
    Powered,
    /// `f(a) / (f(a) + f(b))`.
    BradleyTerry(Strength),
    /// Whoever holds the deck's top card wins every round. Not symmetric.
    MaxHolder,
}

pub const RULE_NAMES: &str = "coin, greater-tiecoin, greater, powered, bradley-terry, max-holder";

pub fn rule_coin() -> BuiltinRule {
    BuiltinRule::Coin
}

pub fn rule_greater_tiecoin() -> BuiltinRule {
    BuiltinRule::GreaterTieCoin
}

pub fn rule_greater() -> BuiltinRule {
    BuiltinRule::Greater
}

pub fn rule_powered() -> BuiltinRule {
    BuiltinRule::Powered
}

pub fn rule_bradley_terry(f: Strength) -> BuiltinRule {
    BuiltinRule::BradleyTerry(f)
}

pub fn rule_max_holder() -> BuiltinRule {
    BuiltinRule::MaxHolder
}

impl BuiltinRule {
    /// Parses a CLI rule name. `bradley-terry` takes its strength function
    /// separately.
    pub fn parse(name: &str, strength: Option<Strength>) -> Result<Self> {
        let rule = match name {
            "coin" => BuiltinRule::Coin,
            "greater-tiecoin" => BuiltinRule::GreaterTieCoin,
            "greater" => BuiltinRule::Greater,
            "powered" => BuiltinRule::Powered,
            "bradley-terry" => BuiltinRule::BradleyTerry(strength.unwrap_or(Strength::Identity)),
            "max-holder" => BuiltinRule::MaxHolder,
            _ => {
                return Err(WarError::UnknownName {
                    kind: "rule",
                    name: name.to_string(),
                    valid: RULE_NAMES.to_string(),
                })
            }
        };
        Ok(rule)
    }

    /// True for the rules whose hand-size process is a fair random walk.
    pub fn is_symmetric(&self) -> bool {
        !matches!(self, BuiltinRule::MaxHolder)
    }
}

impl fmt::Display for BuiltinRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuiltinRule::Coin => write!(f, "coin"),
            BuiltinRule::GreaterTieCoin => write!(f, "greater-tiecoin"),
            BuiltinRule::Greater => write!(f, "greater"),
            BuiltinRule::Powered => write!(f, "powered"),
            BuiltinRule::BradleyTerry(s) => write!(f, "bradley-terry({s})"),
            BuiltinRule::MaxHolder => write!(f, "max-holder"),
        }
    }
}

impl FromStr for BuiltinRule {
    type Err = WarError;

    /// Like [`BuiltinRule::parse`], also accepting `bradley-terry:<strength>`
    /// and the display form `bradley-terry(<strength>)`.
    fn from_str(s: &str) -> Result<Self> {
        if let Some(f) = s.strip_prefix("bradley-terry(").and_then(|r| r.strip_suffix(')')) {
            return Ok(BuiltinRule::BradleyTerry(f.parse()?));
        }
        match s.split_once(':') {
            Some(("bradley-terry", f)) => Ok(BuiltinRule::BradleyTerry(f.parse()?)),
            _ => BuiltinRule::parse(s, None),
        }
    }
}

fn indicator<T: Scalar>(cond: bool) -> T {
    if cond {
        T::one()
    } else {
        T::zero()
    }
}

fn max_rank(ids: &[CardId], extra: CardId, deck: &Deck) -> u32 {
    ids.iter().map(|&c| deck.rank(c)).fold(deck.rank(extra), u32::max)
}

impl<T: Scalar> WinningRule<T> for BuiltinRule {
    fn name(&self) -> String {
        self.to_string()
    }

    fn win_prob(&self, m: &Matchup<'_>) -> T {
        let (ra, rb) = (m.rank_a(), m.rank_b());
        match self {
            BuiltinRule::Coin => T::half(),
            BuiltinRule::GreaterTieCoin | BuiltinRule::Greater => {
                if ra == rb {
                    T::half()
                } else {
                    indicator(ra > rb)
                }
            }
            BuiltinRule::Powered => {
                let s = m.rest_a.len().min(m.rest_b.len());
                // 1 / (1 + (b/a)^s) avoids overflowing a^s in floating point.
                let ratio = T::from_u32(rb).unwrap() / T::from_u32(ra).unwrap();
                T::one() / (T::one() + num_traits::pow(ratio, s))
            }
            BuiltinRule::BradleyTerry(f) => {
                let fa: T = f.eval(ra);
                let fb: T = f.eval(rb);
                fa.clone() / (fa + fb)
            }
            BuiltinRule::MaxHolder => indicator(max_rank(m.rest_a, m.a, m.deck) > max_rank(m.rest_b, m.b, m.deck)),
        }
    }

    fn check_deck(&self, deck: &Deck) -> Result<()> {
        let mismatch = |reason: &str| WarError::RuleDeckMismatch {
            rule: self.to_string(),
            reason: reason.to_string(),
        };
        match self {
            BuiltinRule::Greater | BuiltinRule::MaxHolder if deck.has_repeated_ranks() => {
                Err(mismatch("requires distinct ranks"))
            }
            BuiltinRule::BradleyTerry(f) => f.check_deck(deck),
            _ => Ok(()),
        }
    }
}
