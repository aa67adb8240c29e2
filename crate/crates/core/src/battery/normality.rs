use super::{require, NormalityMethod, TestResult, P_FLOOR};
use crate::error::Result;
use crate::series::TimeSeries;
use crate::stats;

/// Composite normality test with mean and standard deviation estimated.
pub fn test_normality(s: &TimeSeries, method: NormalityMethod) -> Result<TestResult> {
    let x = s.values();
    require(x, 8)?;
    let n = x.len() as f64;
    let m = stats::mean(x);
    let sd = stats::sample_variance(x).sqrt();
    let p: Vec<f64> = stats::sorted(x)
        .iter()
        .map(|v| stats::normal_cdf((v - m) / sd))
        .collect();

    let (stat, pv) = match method {
        NormalityMethod::AndersonDarling => {
            let k = p.len();
            let sum: f64 = (0..k)
                .map(|i| {
                    let w = (2 * i + 1) as f64;
                    w * (p[i].ln() + (1.0 - p[k - 1 - i]).ln())
                })
                .sum();
            let a = -n - sum / n;
            (a, ad_p_value(a * (1.0 + 0.75 / n + 2.25 / (n * n))))
        }
        NormalityMethod::CramerVonMises => {
            let w = 1.0 / (12.0 * n)
                + p.iter()
                    .enumerate()
                    .map(|(i, pi)| {
                        let d = pi - (2 * i + 1) as f64 / (2.0 * n);
                        d * d
                    })
                    .sum::<f64>();
            (w, cvm_p_value(w * (1.0 + 0.5 / n)))
        }
    };
    let (pv, clamped) = match pv {
        Tail::Estimate(p) if p < P_FLOOR => (P_FLOOR, true),
        Tail::Estimate(p) => (p.min(1.0), false),
        Tail::Bound(p) => (p, true),
    };
    Ok(TestResult::new(method.as_str(), stat, pv, clamped).param("n", n))
}

enum Tail {
    Estimate(f64),
    Bound(f64),
}

/// D'Agostino–Stephens approximation for the modified statistic.
fn ad_p_value(aa: f64) -> Tail {
    let p = if aa < 0.2 {
        1.0 - (-13.436 + 101.14 * aa - 223.73 * aa * aa).exp()
    } else if aa < 0.34 {
        1.0 - (-8.318 + 42.796 * aa - 59.938 * aa * aa).exp()
    } else if aa < 0.6 {
        (0.9177 - 4.279 * aa - 1.38 * aa * aa).exp()
    } else if aa < 10.0 {
        (1.2937 - 5.709 * aa + 0.0186 * aa * aa).exp()
    } else {
        3.7e-24
    };
    Tail::Estimate(p.max(0.0))
}

/// Stephens approximation; beyond its range only an upper bound is known.
fn cvm_p_value(ww: f64) -> Tail {
    if ww >= 1.1 {
        return Tail::Bound(7.37e-10);
    }
    let p = if ww < 0.0275 {
        1.0 - (-13.953 + 775.5 * ww - 12542.61 * ww * ww).exp()
    } else if ww < 0.051 {
        1.0 - (-5.903 + 179.546 * ww - 1515.29 * ww * ww).exp()
    } else if ww < 0.092 {
        (0.886 - 31.62 * ww + 10.897 * ww * ww).exp()
    } else {
        (1.111 - 34.242 * ww + 12.832 * ww * ww).exp()
    };
    Tail::Estimate(p.max(0.0))
}
