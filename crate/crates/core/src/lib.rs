//! Games with unawareness and quantum penny-flip variants.
//!
//! [`qlinalg`] holds the 2×2 complex algebra, [`gamecore`] the finite-game
//! machinery, [`unaware`] view hierarchies and extended Nash equilibria, and
//! [`pennyflip`] the quantum instantiations built on top of them.

pub mod error;
pub mod gamecore;
pub mod gate;
mod linalg;
pub mod pennyflip;
pub mod qlinalg;
pub mod unaware;

pub use error::{Error, Result};
