use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::require;
use crate::error::{Error, Result};
use crate::series::TimeSeries;
use crate::stats;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GphEstimate {
    /// Fractional-differencing order.
    pub d: f64,
    pub std_err: f64,
    /// Number of Fourier frequencies in the regression.
    pub bandwidth: usize,
}

/// Geweke–Porter-Hudak log-periodogram regression over the first ⌊√N⌋
/// Fourier frequencies.
pub fn estimate_gph(s: &TimeSeries) -> Result<GphEstimate> {
    let x = s.values();
    require(x, 64)?;
    let n = x.len();
    let m = (n as f64).sqrt().floor() as usize;
    let mean = stats::mean(x);
    let mut buf: Vec<Complex<f64>> = x.iter().map(|v| Complex::new(v - mean, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let mut reg = Vec::with_capacity(m);
    let mut log_i = Vec::with_capacity(m);
    for (j, c) in buf.iter().enumerate().skip(1).take(m) {
        let lambda = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
        let periodogram = c.norm_sqr() / (2.0 * std::f64::consts::PI * n as f64);
        if periodogram <= 0.0 {
            return Err(Error::DegenerateSample("zero periodogram ordinate"));
        }
        reg.push(-(4.0 * (lambda / 2.0).sin().powi(2)).ln());
        log_i.push(periodogram.ln());
    }
    let fit = stats::ols(&[vec![1.0; m], reg], &log_i);
    let se = fit
        .std_err
        .ok_or(Error::DegenerateSample("singular periodogram regression"))?;
    Ok(GphEstimate {
        d: fit.coef[1],
        std_err: se[1],
        bandwidth: m,
    })
}
