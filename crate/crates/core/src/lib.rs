//! Noisy statevector simulation of SWAP-test authenticated quantum tokens,
//! threshold calibration, bill statistics and a query-based forgery attack.

pub mod attack;
pub mod calibration;
pub mod error;
pub mod presets;
pub mod protocol;
pub mod rng;
pub mod statekit;
pub mod stats;
pub mod swaptest;

pub use error::{Error, Result};
pub mod cli;
