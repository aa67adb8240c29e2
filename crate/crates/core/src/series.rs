//! Calendar-anchored monthly series: CSV ingestion and serialization,
//! descriptive statistics, differencing, correlograms and classical
//! additive decomposition.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::error::{Error, ParseErrorKind, Result};
use crate::stats;

/// Samples per seasonal cycle. Only monthly data is supported.
pub const PERIOD: usize = 12;

/// A calendar month.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MonthStamp {
    year: i32,
    month: u8,
}

impl MonthStamp {
    pub fn new(year: i32, month: u32) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return Err(Error::InvalidParameter(format!(
                "month {month} outside 1..=12"
            )));
        }
        Ok(MonthStamp {
            year,
            month: month as u8,
        })
    }

    pub fn year(self) -> i32 {
        self.year
    }

    pub fn month(self) -> u32 {
        u32::from(self.month)
    }

    /// Months since year 0, January.
    pub fn ordinal(self) -> i64 {
        i64::from(self.year) * 12 + i64::from(self.month) - 1
    }

    pub fn from_ordinal(ord: i64) -> Self {
        MonthStamp {
            year: ord.div_euclid(12) as i32,
            month: (ord.rem_euclid(12) + 1) as u8,
        }
    }

    pub fn add_months(self, n: i64) -> Self {
        Self::from_ordinal(self.ordinal() + n)
    }

    /// Decimal year with January at the integer, e.g. 1980-07 -> 1980.5.
    pub fn decimal_year(self) -> f64 {
        self.ordinal() as f64 / 12.0
    }

    /// Nearest month to a decimal year as produced by [`MonthStamp::decimal_year`].
    pub fn from_decimal_year(t: f64) -> Self {
        Self::from_ordinal((t * 12.0).round() as i64)
    }

    /// Zero-based calendar month index (January = 0).
    pub fn month_index(self) -> usize {
        usize::from(self.month - 1)
    }
}

impl PartialOrd for MonthStamp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MonthStamp {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.year, self.month).cmp(&(other.year, other.month))
    }
}

impl fmt::Display for MonthStamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for MonthStamp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("malformed month {s:?}, expected YYYY-MM"));
        let (y, m) = s.split_once('-').ok_or_else(bad)?;
        if y.len() != 4 || m.len() != 2 || !y.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        if !m.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let year: i32 = y.parse().map_err(|_| bad())?;
        let month: u32 = m.parse().map_err(|_| bad())?;
        MonthStamp::new(year, month).map_err(|_| bad())
    }
}

impl Serialize for MonthStamp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MonthStamp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A gap-free sequence of monthly observations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    start: MonthStamp,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(start: MonthStamp, values: Vec<f64>) -> Self {
        TimeSeries { start, values }
    }

    pub fn start(&self) -> MonthStamp {
        self.start
    }

    pub fn end(&self) -> MonthStamp {
        self.month_at(self.values.len().saturating_sub(1))
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn period(&self) -> usize {
        PERIOD
    }

    pub fn month_at(&self, index: usize) -> MonthStamp {
        self.start.add_months(index as i64)
    }

    /// Index of a calendar month within the series, if covered.
    pub fn index_of(&self, month: MonthStamp) -> Option<usize> {
        let off = month.ordinal() - self.start.ordinal();
        (off >= 0 && (off as usize) < self.values.len()).then_some(off as usize)
    }

    /// The leading `len` observations.
    pub fn prefix(&self, len: usize) -> TimeSeries {
        TimeSeries::new(self.start, self.values[..len].to_vec())
    }

    /// Same calendar, values replaced.
    pub fn with_values(&self, values: Vec<f64>) -> TimeSeries {
        TimeSeries::new(self.start, values)
    }

    /// Serializes to the `date,value` CSV dialect accepted by [`parse_csv`].
    /// Integral values are written without a fractional part.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(12 * self.values.len() + 11);
        out.push_str("date,value\n");
        for (i, v) in self.values.iter().enumerate() {
            out.push_str(&self.month_at(i).to_string());
            out.push(',');
            out.push_str(&format_value(*v));
            out.push('\n');
        }
        out
    }

    /// SHA-256 of the canonical CSV serialization, hex encoded.
    pub fn digest(&self) -> String {
        sha256_hex(self.to_csv().as_bytes())
    }
}

pub(crate) fn format_value(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Parses the `date,value` CSV dialect.
pub fn parse_csv(text: &str) -> Result<TimeSeries> {
    let mut lines = text.lines().enumerate();
    let err = |line: usize, kind, text: &str| Error::Parse {
        line,
        kind,
        text: text.to_string(),
    };

    match lines.next() {
        Some((_, h)) if h.trim_end_matches('\r') == "date,value" => {}
        Some((_, h)) => return Err(err(1, ParseErrorKind::BadHeader, h)),
        None => return Err(err(1, ParseErrorKind::BadHeader, "")),
    }

    let mut start: Option<MonthStamp> = None;
    let mut prev: Option<MonthStamp> = None;
    let mut values = Vec::new();
    for (i, raw) in lines {
        let lineno = i + 1;
        let row = raw.trim_end_matches('\r');
        if row.is_empty() {
            continue;
        }
        let mut fields = row.split(',');
        let (Some(date), Some(value), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(err(lineno, ParseErrorKind::MalformedRow, row));
        };
        let month: MonthStamp = date
            .parse()
            .map_err(|_| err(lineno, ParseErrorKind::MalformedDate, row))?;
        let value = parse_integer(value)
            .ok_or_else(|| err(lineno, ParseErrorKind::NonIntegerValue, row))?;
        if let Some(p) = prev {
            let step = month.ordinal() - p.ordinal();
            if step <= 0 {
                return Err(err(lineno, ParseErrorKind::DuplicateMonth, row));
            }
            if step > 1 {
                return Err(err(lineno, ParseErrorKind::CalendarGap, row));
            }
        }
        start.get_or_insert(month);
        prev = Some(month);
        values.push(value);
    }
    match start {
        Some(start) => Ok(TimeSeries::new(start, values)),
        None => Err(err(2, ParseErrorKind::EmptyBody, "")),
    }
}

fn parse_integer(s: &str) -> Option<f64> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse::<i64>().ok().map(|v| v as f64)
}

/// Table-1 style summary. Skewness and kurtosis are `None` for a zero-variance sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescriptiveStats {
    pub n: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub mean: f64,
    pub q3: f64,
    pub max: f64,
    pub sd: f64,
    pub skewness: Option<f64>,
    /// Non-excess (Pearson) kurtosis; 3 for a Gaussian.
    pub kurtosis: Option<f64>,
}

pub fn descriptive_stats(s: &TimeSeries) -> Result<DescriptiveStats> {
    let x = s.values();
    if x.len() < 2 {
        return Err(Error::insufficient(2, x.len()));
    }
    let sorted = stats::sorted(x);
    let n = x.len() as f64;
    let mean = stats::mean(x);
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for v in x {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    let sd = (m2 / (n - 1.0)).sqrt();
    m2 /= n;
    m3 /= n;
    m4 /= n;
    let (skewness, kurtosis) = if m2 > 0.0 {
        (Some(m3 / m2.powf(1.5)), Some(m4 / (m2 * m2)))
    } else {
        (None, None)
    };
    Ok(DescriptiveStats {
        n: x.len(),
        min: sorted[0],
        q1: stats::quantile_sorted(&sorted, 0.25),
        median: stats::quantile_sorted(&sorted, 0.5),
        mean,
        q3: stats::quantile_sorted(&sorted, 0.75),
        max: sorted[sorted.len() - 1],
        sd,
        skewness,
        kurtosis,
    })
}

/// Applies the first difference `order` times; the start advances by `order` months.
pub fn difference(s: &TimeSeries, order: usize) -> Result<TimeSeries> {
    if order == 0 {
        return Err(Error::InvalidParameter(
            "difference order must be >= 1".into(),
        ));
    }
    if s.len() <= order {
        return Err(Error::insufficient(order + 1, s.len()));
    }
    let mut v = s.values().to_vec();
    for _ in 0..order {
        v = v.windows(2).map(|w| w[1] - w[0]).collect();
    }
    Ok(TimeSeries::new(s.start().add_months(order as i64), v))
}

pub(crate) fn diff_values(x: &[f64]) -> Vec<f64> {
    x.windows(2).map(|w| w[1] - w[0]).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrelogramKind {
    Acf,
    Pacf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Correlogram {
    pub kind: CorrelogramKind,
    pub lags: Vec<usize>,
    pub coefficients: Vec<f64>,
    /// Half-width of the approximate 95% white-noise band, 1.96/sqrt(N).
    pub ci_bound: f64,
}

/// Sample autocorrelations at lags `0..=max_lag`, biased (divide-by-N) normalization.
pub fn acf_values(x: &[f64], max_lag: usize) -> Vec<f64> {
    let n = x.len();
    let m = stats::mean(x);
    let c: Vec<f64> = x.iter().map(|v| v - m).collect();
    let c0: f64 = c.iter().map(|v| v * v).sum();
    (0..=max_lag)
        .map(|k| {
            if k == 0 {
                1.0
            } else {
                (k..n).map(|t| c[t] * c[t - k]).sum::<f64>() / c0
            }
        })
        .collect()
}

/// Partial autocorrelations at lags `1..=max_lag` via Durbin–Levinson.
pub fn pacf_values(x: &[f64], max_lag: usize) -> Vec<f64> {
    let rho = acf_values(x, max_lag);
    durbin_levinson(&rho).0
}

/// Runs the Durbin–Levinson recursion on autocorrelations `rho[0..=p]`.
/// Returns the partial autocorrelations and the prediction-error variance
/// ratios (relative to lag-0 variance) for orders `1..=p`.
pub(crate) fn durbin_levinson(rho: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let p = rho.len() - 1;
    let mut phi: Vec<f64> = Vec::with_capacity(p);
    let mut pacf = Vec::with_capacity(p);
    let mut vars = Vec::with_capacity(p);
    let mut v = 1.0;
    for k in 1..=p {
        let num = rho[k] - (0..k - 1).map(|j| phi[j] * rho[k - 1 - j]).sum::<f64>();
        let a = num / v;
        let prev = phi.clone();
        for j in 0..k - 1 {
            phi[j] = prev[j] - a * prev[k - 2 - j];
        }
        phi.push(a);
        v *= 1.0 - a * a;
        pacf.push(a);
        vars.push(v);
    }
    (pacf, vars)
}

pub fn correlogram(s: &TimeSeries, kind: CorrelogramKind, max_lag: usize) -> Result<Correlogram> {
    if max_lag < 1 {
        return Err(Error::InvalidParameter("max_lag must be >= 1".into()));
    }
    if s.len() < max_lag + 2 {
        return Err(Error::insufficient(max_lag + 2, s.len()));
    }
    if stats::is_constant(s.values()) {
        return Err(Error::ZeroVariance);
    }
    let (lags, coefficients) = match kind {
        CorrelogramKind::Acf => ((0..=max_lag).collect(), acf_values(s.values(), max_lag)),
        CorrelogramKind::Pacf => ((1..=max_lag).collect(), pacf_values(s.values(), max_lag)),
    };
    Ok(Correlogram {
        kind,
        lags,
        coefficients,
        ci_bound: 1.96 / (s.len() as f64).sqrt(),
    })
}

/// Classical additive decomposition. `trend` and `remainder` are `None`
/// at the six observations at each edge where the centered moving average
/// is undefined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub trend: Vec<Option<f64>>,
    pub seasonal: Vec<f64>,
    pub remainder: Vec<Option<f64>>,
    /// Seasonal effect per calendar month, January first; sums to zero.
    pub seasonal_means: [f64; PERIOD],
}

pub fn decompose_additive(s: &TimeSeries) -> Result<Decomposition> {
    let x = s.values();
    let n = x.len();
    if n < 2 * PERIOD {
        return Err(Error::insufficient(2 * PERIOD, n));
    }
    let half = PERIOD / 2;
    let mut trend = vec![None; n];
    for i in half..n - half {
        let inner: f64 = x[i + 1 - half..i + half].iter().sum();
        let ends = 0.5 * (x[i - half] + x[i + half]);
        trend[i] = Some((inner + ends) / PERIOD as f64);
    }

    let mut sums = [0.0; PERIOD];
    let mut counts = [0usize; PERIOD];
    for (i, t) in trend.iter().enumerate() {
        if let Some(t) = t {
            let m = s.month_at(i).month_index();
            sums[m] += x[i] - t;
            counts[m] += 1;
        }
    }
    let mut seasonal_means = [0.0; PERIOD];
    for m in 0..PERIOD {
        seasonal_means[m] = sums[m] / counts[m] as f64;
    }
    let grand = seasonal_means.iter().sum::<f64>() / PERIOD as f64;
    for v in seasonal_means.iter_mut() {
        *v -= grand;
    }

    let seasonal: Vec<f64> = (0..n)
        .map(|i| seasonal_means[s.month_at(i).month_index()])
        .collect();
    let remainder = (0..n)
        .map(|i| trend[i].map(|t| x[i] - t - seasonal[i]))
        .collect();
    Ok(Decomposition {
        trend,
        seasonal,
        remainder,
        seasonal_means,
    })
}
