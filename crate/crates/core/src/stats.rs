//! Small numeric helpers shared across modules: moments, order statistics,
//! least squares and reference-distribution tail probabilities.

use nalgebra::{DMatrix, DVector};
use statrs::distribution::{ChiSquared, ContinuousCDF, FisherSnedecor, Normal};

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Sum of squared deviations from the mean.
pub fn centered_ss(x: &[f64]) -> f64 {
    let m = mean(x);
    x.iter().map(|v| (v - m) * (v - m)).sum()
}

/// Sample variance with the n-1 denominator.
pub fn sample_variance(x: &[f64]) -> f64 {
    centered_ss(x) / (x.len() as f64 - 1.0)
}

pub fn is_constant(x: &[f64]) -> bool {
    match x.first() {
        Some(first) => x.iter().all(|v| v == first),
        None => true,
    }
}

/// Quantile with linear interpolation between order statistics,
/// h = (n-1)p + 1 (1-based). `sorted` must be ascending and nonempty.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let h = (n as f64 - 1.0) * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    let frac = h - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

pub fn sorted(x: &[f64]) -> Vec<f64> {
    let mut v = x.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

pub fn median(x: &[f64]) -> f64 {
    quantile_sorted(&sorted(x), 0.5)
}

/// Median absolute deviation about the median, unscaled.
pub fn mad(x: &[f64]) -> f64 {
    let m = median(x);
    let dev: Vec<f64> = x.iter().map(|v| (v - m).abs()).collect();
    median(&dev)
}

/// Ordinary least squares fit.
#[derive(Debug, Clone)]
pub struct Ols {
    pub coef: Vec<f64>,
    pub residuals: Vec<f64>,
    pub rss: f64,
    /// Standard errors of the coefficients, `None` when the design is rank deficient.
    pub std_err: Option<Vec<f64>>,
}

/// Least squares of `y` on the given regressor columns (no implicit intercept).
pub fn ols(columns: &[Vec<f64>], y: &[f64]) -> Ols {
    let n = y.len();
    let p = columns.len();
    if p == 0 {
        let rss = y.iter().map(|v| v * v).sum();
        return Ols {
            coef: vec![],
            residuals: y.to_vec(),
            rss,
            std_err: Some(vec![]),
        };
    }
    let x = DMatrix::from_fn(n, p, |i, j| columns[j][i]);
    let yv = DVector::from_column_slice(y);
    let svd = x.clone().svd(true, true);
    let max_sv = svd.singular_values.max();
    let tol = max_sv * (n.max(p) as f64) * f64::EPSILON;
    let beta = svd.solve(&yv, tol).expect("svd computed with both u and v");
    let fitted = &x * &beta;
    let residuals: Vec<f64> = (0..n).map(|i| y[i] - fitted[i]).collect();
    let rss: f64 = residuals.iter().map(|r| r * r).sum();

    let full_rank = svd.singular_values.iter().all(|s| *s > tol);
    let std_err = if full_rank && n > p {
        let sigma2 = rss / (n - p) as f64;
        let v_t = svd.v_t.as_ref().expect("v_t requested");
        let se = (0..p)
            .map(|j| {
                let var: f64 = (0..p)
                    .map(|k| {
                        let v = v_t[(k, j)];
                        v * v / (svd.singular_values[k] * svd.singular_values[k])
                    })
                    .sum();
                (sigma2 * var).sqrt()
            })
            .collect();
        Some(se)
    } else {
        None
    };
    Ols {
        coef: beta.iter().copied().collect(),
        residuals,
        rss,
        std_err,
    }
}

/// Orthogonal projection onto the column space of a design, for computing
/// many residual vectors against the same regressors.
pub struct Projection {
    basis: DMatrix<f64>,
}

impl Projection {
    pub fn new(columns: &[Vec<f64>]) -> Self {
        let n = columns.first().map_or(0, Vec::len);
        let p = columns.len();
        let x = DMatrix::from_fn(n, p, |i, j| columns[j][i]);
        let svd = x.svd(true, false);
        let u = svd.u.expect("u requested");
        let max_sv = svd.singular_values.max();
        let tol = max_sv * (n.max(p) as f64) * f64::EPSILON;
        let keep: Vec<usize> = (0..svd.singular_values.len())
            .filter(|&k| svd.singular_values[k] > tol)
            .collect();
        let basis = DMatrix::from_fn(n, keep.len(), |i, j| u[(i, keep[j])]);
        Projection { basis }
    }

    pub fn residuals(&self, y: &[f64]) -> Vec<f64> {
        let yv = DVector::from_column_slice(y);
        let coef = self.basis.tr_mul(&yv);
        let fitted = &self.basis * coef;
        (0..y.len()).map(|i| y[i] - fitted[i]).collect()
    }
}

/// Upper tail of the chi-square distribution.
pub fn chi2_sf(x: f64, df: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    ChiSquared::new(df).map(|d| d.sf(x)).unwrap_or(f64::NAN)
}

/// Upper tail of the F distribution.
pub fn f_sf(x: f64, df1: f64, df2: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    FisherSnedecor::new(df1, df2)
        .map(|d| d.sf(x))
        .unwrap_or(f64::NAN)
}

pub fn normal_cdf(z: f64) -> f64 {
    Normal::standard().cdf(z)
}

/// Average ranks (ties share the mean rank), 1-based.
pub fn ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut out = vec![0.0; x.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && x[idx[j + 1]] == x[idx[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for k in i..=j {
            out[idx[k]] = r;
        }
        i = j + 1;
    }
    out
}

/// Spearman rank correlation.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    pearson(&ranks(x), &ranks(y))
}

pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let mx = mean(x);
    let my = mean(y);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}

/// Linear interpolation of `y` at `x0` over ascending knots `xs`,
/// clamped to the end values outside the knot range.
pub fn interp_clamped(xs: &[f64], ys: &[f64], x0: f64) -> f64 {
    if x0 <= xs[0] {
        return ys[0];
    }
    let last = xs.len() - 1;
    if x0 >= xs[last] {
        return ys[last];
    }
    let j = xs.iter().position(|&v| v >= x0).unwrap();
    let (x1, x2) = (xs[j - 1], xs[j]);
    let w = (x0 - x1) / (x2 - x1);
    ys[j - 1] + w * (ys[j] - ys[j - 1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_convention_on_one_to_hundred() {
        let x: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(quantile_sorted(&x, 0.25), 25.75);
        assert_eq!(quantile_sorted(&x, 0.5), 50.5);
        assert_eq!(quantile_sorted(&x, 0.75), 75.25);
    }

    #[test]
    fn ols_recovers_exact_line() {
        let t: Vec<f64> = (0..10).map(f64::from).collect();
        let y: Vec<f64> = t.iter().map(|v| 3.0 + 2.0 * v).collect();
        let fit = ols(&[vec![1.0; 10], t], &y);
        assert!((fit.coef[0] - 3.0).abs() < 1e-10);
        assert!((fit.coef[1] - 2.0).abs() < 1e-10);
        assert!(fit.rss < 1e-18);
    }

    #[test]
    fn ols_standard_errors_match_closed_form() {
        // simple regression: se(slope) = sqrt(s^2 / Sxx)
        let x = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let y = vec![1.1, 1.9, 3.2, 3.9, 5.3, 5.8];
        let fit = ols(&[vec![1.0; 6], x.clone()], &y);
        let s2 = fit.rss / 4.0;
        let sxx = centered_ss(&x);
        let se = fit.std_err.unwrap();
        assert!((se[1] - (s2 / sxx).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn projection_residuals_match_ols() {
        let x = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let y = vec![1.1, 1.9, 3.2, 3.9, 5.3, 5.8];
        let cols = [vec![1.0; 6], x];
        let a = ols(&cols, &y).residuals;
        let b = Projection::new(&cols).residuals(&y);
        for (u, v) in a.iter().zip(&b) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn ranks_average_ties() {
        assert_eq!(ranks(&[10.0, 20.0, 10.0, 5.0]), vec![2.5, 4.0, 2.5, 1.0]);
    }

    #[test]
    fn tail_probabilities() {
        assert!((chi2_sf(5.991464547107979, 2.0) - 0.05).abs() < 1e-9);
        assert!((f_sf(4.964602743, 1.0, 10.0) - 0.05).abs() < 1e-8);
        assert!((normal_cdf(1.959963984540054) - 0.975).abs() < 1e-9);
    }
}
