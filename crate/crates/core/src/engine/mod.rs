//! BLITS and its SIEVE subroutine.

mod blits;
mod config;
pub mod estimate;
pub mod sieve;

pub use blits::{blits, blits_plus, blits_with_guess, guess_opt_grid, BlitsRun, SieveRecord};
pub use config::{default_rho_cap, threshold_t, BlitsConfig, EstimationMode, OptGuess, TheoryLogBase};
pub use sieve::{BlockChoice, SieveExit, SieveIteration, SieveOutcome};
