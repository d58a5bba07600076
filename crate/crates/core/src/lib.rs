pub mod cli;
pub mod diagonals;
pub mod error;
pub mod io;
pub mod jointrange;
pub mod kadison;
pub mod linalg;
pub mod numrange;
pub mod verify;

pub use error::{Error, Result};
