use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Eigenvalues of the circulant embedding below this are a failure.
const EIGEN_TOLERANCE: f64 = -1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FgnSpec {
    pub h: f64,
    pub n: usize,
    pub seed: u64,
}

/// Autocovariance of unit-variance fractional Gaussian noise at lag `k`.
pub fn fgn_autocovariance(h: f64, k: usize) -> f64 {
    let k = k as f64;
    let e = 2.0 * h;
    0.5 * ((k + 1.0).powf(e) - 2.0 * k.powf(e) + (k - 1.0).abs().powf(e))
}

/// Exact fractional Gaussian noise by circulant embedding (Davies–Harte).
pub fn simulate_fgn(spec: FgnSpec) -> Result<Vec<f64>> {
    if !(spec.h > 0.0 && spec.h < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "hurst exponent {} outside (0, 1)",
            spec.h
        )));
    }
    if spec.n < 64 || !spec.n.is_power_of_two() {
        return Err(Error::UnsupportedSize(spec.n));
    }
    let eigen = match embedding_eigenvalues(spec.h, spec.n) {
        Ok(l) => l,
        Err(_) => embedding_eigenvalues(spec.h, 2 * spec.n)?,
    };
    let m = eigen.len();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut buf: Vec<Complex<f64>> = eigen
        .iter()
        .map(|l| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex::new(re, im) * (l.max(0.0) / m as f64).sqrt()
        })
        .collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    Ok(buf[..spec.n].iter().map(|c| c.re).collect())
}

/// Eigenvalues of the circulant of size 2·len built from the autocovariance.
fn embedding_eigenvalues(h: f64, len: usize) -> Result<Vec<f64>> {
    let m = 2 * len;
    let mut buf: Vec<Complex<f64>> = (0..m)
        .map(|j| {
            let lag = if j <= len { j } else { m - j };
            Complex::new(fgn_autocovariance(h, lag), 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let eigen: Vec<f64> = buf.iter().map(|c| c.re).collect();
    let min = eigen.iter().copied().fold(f64::INFINITY, f64::min);
    if min < EIGEN_TOLERANCE {
        return Err(Error::SynthesisFailure {
            min_eigenvalue: min,
        });
    }
    Ok(eigen)
}
