//! Hurst exponent estimators, the chronological Hurst exponent over
//! expanding prefixes, S-curve segmentation, and fractional Gaussian noise
//! synthesis for estimator validation.

mod che;
mod fgn;
mod hurst;
mod segment;

pub use che::{che, che_serial, CheCurve, DEFAULT_MIN_WINDOW, DEFAULT_STEP};
pub use fgn::{fgn_autocovariance, simulate_fgn, FgnSpec};
pub use hurst::{
    block_sizes, hurst, hurst_dfa, hurst_rs, HurstEstimate, HurstMethod, ScalePoint, MIN_LENGTH,
};
pub use segment::{fit_logistic, segment_che, ChePeriods, LogisticFit, MIN_AMPLITUDE};
