//! Exact analysis on small decks: state-space enumeration, absorption
//! solves, and exact checks of the random-walk and martingale identities.

mod solve;
mod space;
mod verify;

pub use solve::{absorption_solve, state_label, write_solve_csv, SolveResult, RESIDUAL_TOL};
pub use space::{enumerate_fwar, enumerate_pwar, ExactState, Flavor, StateSpace, FWAR_LIMIT, PWAR_LIMIT};
pub use verify::{
    binomial, coin_split_law, counting_identity, counting_identity_sides, eq5_law, expect_under, srw_oracle,
    uniform_level_average, verify_martingales, verify_uniform_preservation, MartingaleDrift, SrwOracle,
    PRESERVATION_LIMIT,
};
