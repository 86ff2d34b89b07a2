//! Logic synthesis for four-terminal switching lattices.

pub mod error;
pub mod model;
pub mod truth;

pub use error::{Error, Result};
pub mod cli;
pub mod decompose;
pub mod graph;
pub mod mapper;
pub mod paths;
pub mod solver;
pub mod synth;
