pub mod arith;
pub mod error;
pub mod geom;
pub mod orbits;
pub mod lift;
pub mod periods;
pub mod reduction;
pub mod search;

pub use error::{Error, Result};
