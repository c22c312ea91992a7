use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Winner {
    A,
    B,
    /// Both players ran out mid-war.
    Draw,
    /// Round cap hit before absorption.
    Truncated,
}

impl Winner {
    pub fn is_decided(self) -> bool {
        matches!(self, Winner::A | Winner::B)
    }

    /// Winner of a finished game given the final hand sizes and the floor
    /// below which a hand counts as beaten.
    pub(crate) fn from_sizes(a: usize, b: usize, floor: usize) -> Option<Winner> {
        match (a <= floor, b <= floor) {
            (true, true) => Some(Winner::Draw),
            (true, false) => Some(Winner::B),
            (false, true) => Some(Winner::A),
            (false, false) => None,
        }
    }
}

/// Outcome of one simulated game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub tau: u64,
    pub winner: Winner,
    /// `|A_t|` for `t = 0..=tau`, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_trajectory: Option<Vec<u32>>,
    pub seed: u64,
    pub stream_id: u64,
}
