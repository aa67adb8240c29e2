pub mod battery;
pub mod error;
pub mod fixtures;
pub mod persistence;
pub mod preclean;
pub mod report;
pub mod series;
pub mod stats;

pub use error::{Error, Result};
