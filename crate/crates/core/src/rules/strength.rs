use crate::deck::Deck;
use crate::error::{Result, WarError};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Per-card strength for Bradley-Terry play: card `a` beats card `b` with
/// probability `f(a) / (f(a) + f(b))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strength {
    /// `f(a) = 1`; the game is a simple random walk.
    Constant,
    /// `f(a) = a` (gladiator game).
    Identity,
    /// `f(a) = a + shift`.
    Shifted(i64),
    /// `f(a) = exp(lambda * a)`.
    Exponential(f64),
}

pub const STRENGTH_NAMES: &str = "constant, identity, shifted:<int>, exp:<lambda>";

/// Validated constructor for the built-in families.
pub fn strength_builtin(kind: Strength) -> Result<Strength> {
    if let Strength::Exponential(lambda) = kind {
        if !lambda.is_finite() {
            return Err(WarError::InvalidStrength(format!(
                "lambda must be finite, got {lambda}"
            )));
        }
    }
    Ok(kind)
}

impl Strength {
    pub fn eval<T: Scalar>(&self, rank: u32) -> T {
        match *self {
            Strength::Constant => T::one(),
            Strength::Identity => T::from_u32(rank).expect("rank fits scalar"),
            Strength::Shifted(shift) => T::from_i64(rank as i64 + shift).expect("shifted rank fits scalar"),
            Strength::Exponential(lambda) => T::from_f64((lambda * rank as f64).exp()).expect("finite strength"),
        }
    }

    #[inline]
    pub fn eval_f64(&self, rank: u32) -> f64 {
        match *self {
            Strength::Constant => 1.0,
            Strength::Identity => rank as f64,
            Strength::Shifted(shift) => (rank as i64 + shift) as f64,
            Strength::Exponential(lambda) => (lambda * rank as f64).exp(),
        }
    }

    /// Rejects decks on which some card would get a non-positive or
    /// non-finite strength.
    pub fn check_deck(&self, deck: &Deck) -> Result<()> {
        strength_builtin(*self)?;
        for card in deck.cards() {
            let v = self.eval_f64(card.rank);
            if !(v.is_finite() && v > 0.0) {
                return Err(WarError::InvalidStrength(format!(
                    "{self} gives strength {v} to rank {}",
                    card.rank
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Strength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strength::Constant => write!(f, "constant"),
            Strength::Identity => write!(f, "identity"),
            Strength::Shifted(s) => write!(f, "shifted:{s}"),
            Strength::Exponential(l) => write!(f, "exp:{l}"),
        }
    }
}

impl FromStr for Strength {
    type Err = WarError;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || WarError::UnknownName {
            kind: "strength function",
            name: s.to_string(),
            valid: STRENGTH_NAMES.to_string(),
        };
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let kind = match (head, arg) {
            ("constant", None) => Strength::Constant,
            ("identity", None) => Strength::Identity,
            ("shifted", Some(a)) => Strength::Shifted(a.parse().map_err(|_| unknown())?),
            ("exp" | "exponential", Some(a)) => Strength::Exponential(a.parse().map_err(|_| unknown())?),
            _ => return Err(unknown()),
        };
        strength_builtin(kind)
    }
}
