//! Coalgebraic geometric modal logic over finite topological coalgebras.

pub mod acceptance;
pub mod bisim;
pub mod bits;
pub mod error;
pub mod finspace;
pub mod fixtures;
pub mod io;
pub mod coalgfun;
pub mod framealg;
pub mod kkplift;
pub mod liftings;
pub mod logic;
pub mod proofsys;

pub use bits::Bits;
pub use error::{Error, Result};
