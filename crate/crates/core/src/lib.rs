pub mod baths;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod states;
pub mod witnesses;

pub use error::{Error, Result};
