pub mod artifact;
pub mod channel;
pub mod cli;
mod error;
pub mod format;
pub mod report;

pub use error::{Error, Result};
