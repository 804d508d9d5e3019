//! Text formats, a threaded enumeration layer and the command line for
//! `ugl-core`.

pub mod cli;
pub mod error;
pub mod format;
pub mod parallel;

pub use error::{Error, Result};
