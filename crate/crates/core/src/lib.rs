pub mod classify;
pub mod cli;
pub mod error;
pub mod format;
pub mod graph;
pub mod groups;
pub mod intlinalg;
pub mod ktheory;
pub mod moves;

pub use error::{Error, Result};
pub use graph::{Graph, Mult};
pub use intlinalg::{IntMatrix, SnfResult};
