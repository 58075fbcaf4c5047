pub mod algebra;
pub mod error;
pub mod resolution;
pub mod schemes;
pub mod toric;
pub mod verification;

pub use error::{Error, Result};
