//! Sampling from Gibbs distributions of congestion games.

pub mod cap_uniform;
pub mod cli;
pub mod combin;
pub mod dynamics;
pub mod error;
pub mod game;
pub mod gibbs_ep;
pub mod matroid;
pub mod numeric;
pub mod verify;

pub use error::{Error, Result};
