//! Library side of the `binhk` executable, kept separate so it can be tested in-process.

pub mod cache;
pub mod emit;
pub mod run;

pub use cache::{Cache, CacheKey, CacheStats};
pub use run::{exit, run, Cli, Failure};
