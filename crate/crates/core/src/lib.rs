pub mod analysis;
pub mod error;
pub mod figure;
pub mod montecarlo;
pub mod numerics;
pub mod scenario;
pub mod sweep;

pub use error::{Error, Result};
