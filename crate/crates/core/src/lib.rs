//! Covering maps from vertex-transitive planar tessellations onto graphs
//! that look locally like them: patch generation, peripheral-cycle local
//! structure, flag colourings, a face-by-face cover builder and checkers.

pub mod builder;
pub mod cli;
pub mod error;
pub mod flags;
pub mod graph;
pub mod instances;
pub mod io;
pub mod local;
pub mod tessellation;
pub mod verify;

pub use error::{Error, Result};
