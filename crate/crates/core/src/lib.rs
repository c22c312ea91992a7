//! Simulation and exact analysis of the card game War and its random-draw
//! and strength-weighted variants.
//!
//! The engines run in `f64`. Rules, state-space enumeration and the
//! absorption solver are generic over [`Scalar`], so the same code also runs
//! in exact rational arithmetic ([`Exact`]).

pub mod classic;
pub mod deck;
pub mod error;
pub mod exact;
pub mod fwar;
pub mod game;
pub mod hand;
pub mod output;
pub mod pwar;
pub mod record;
pub mod reproduce;
pub mod rng;
pub mod rules;
pub mod scalar;
pub mod stats;
pub mod suites;

pub use deck::{build_deck, Card, CardId, Deck, DeckSpec};
pub use error::{Result, WarError};
pub use game::{DealKind, GameConfig, GameKind, GameOutcome, PreparedGame};
pub use hand::{deal_bernoulli, deal_uniform, GameState, Hand, HandSeq, HandSet};
pub use record::{TrialRecord, Winner};
pub use rng::{RngStream, RNG_ALGORITHM};
pub use rules::{BuiltinRule, Matchup, Strength, WinningRule};
pub use scalar::{exact_from_int, Exact, Scalar};

/// State space with floating-point transition probabilities.
pub type StateSpaceF64 = exact::StateSpace<f64>;
/// State space with exact rational transition probabilities.
pub type StateSpaceExact = exact::StateSpace<Exact>;
pub type SolveResultF64 = exact::SolveResult<f64>;
pub type SolveResultExact = exact::SolveResult<Exact>;
