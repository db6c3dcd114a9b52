pub mod characteristics;
pub mod cli;
pub mod convergence;
pub mod diagnostics;
pub mod error;
pub mod grid;
pub mod integrator;
pub mod model;
pub mod output;
pub mod scenario;
pub mod sweep;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
