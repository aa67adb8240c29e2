//! Outlier detection and neighbour-average repair.
//!
//! Detection decomposes the series additively and scores each remainder by
//! its distance from the remainder median in robust standard deviations
//! (MAD scaled by 1.4826). The most extreme point above the threshold is
//! flagged, temporarily repaired, and the decomposition recomputed, so a
//! single spike cannot drag its neighbours over the threshold through the
//! moving-average trend.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixtures::Fixture;
use crate::series::{decompose_additive, MonthStamp, TimeSeries, PERIOD};
use crate::stats;

pub const DEFAULT_THRESHOLD: f64 = 7.0;

/// Consistency factor turning a MAD into a Gaussian standard deviation.
const MAD_TO_SD: f64 = 1.4826;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutlierKind {
    Additive,
    LevelShift,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutlierEvent {
    pub index: usize,
    pub month: MonthStamp,
    pub kind: OutlierKind,
    /// Remainder excess (additive) or median step (level shift), in series units.
    pub magnitude: f64,
    /// Robust z-score at the time of emission.
    pub score: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CleanRule {
    NeighborAverage,
    ForcedList,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Replacement {
    pub index: usize,
    pub month: MonthStamp,
    pub original: f64,
    pub replacement: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CleanReport {
    pub source_digest: String,
    pub rule: CleanRule,
    /// Detector output that drove the repair; empty for a forced list.
    pub events: Vec<OutlierEvent>,
    pub replacements: Vec<Replacement>,
    pub repaired: TimeSeries,
}

pub fn detect_outliers(s: &TimeSeries, threshold: f64) -> Result<Vec<OutlierEvent>> {
    if s.len() < 2 * PERIOD {
        return Err(Error::insufficient(2 * PERIOD, s.len()));
    }
    if !(threshold.is_finite() && threshold > 0.0) {
        return Err(Error::InvalidParameter(format!("threshold {threshold}")));
    }
    let mut work = s.clone().into_values();
    let mut flagged = BTreeSet::new();
    let mut events = Vec::new();

    loop {
        let d = decompose_additive(&s.with_values(work.clone()))?;
        let defined: Vec<f64> = d.remainder.iter().flatten().copied().collect();
        let center = stats::median(&defined);
        let scale = stats::mad(&defined) * MAD_TO_SD;
        if scale == 0.0 {
            return Err(Error::ZeroDispersion);
        }

        let candidate = d
            .remainder
            .iter()
            .enumerate()
            .filter(|(i, _)| !flagged.contains(i))
            .filter_map(|(i, r)| r.map(|r| (i, (r - center).abs() / scale)))
            .fold(None::<(usize, f64)>, |best, (i, z)| match best {
                Some((_, bz)) if bz >= z => best,
                _ => Some((i, z)),
            });
        let Some((i, z)) = candidate else { break };
        if z <= threshold {
            break;
        }
        flagged.insert(i);

        // Steps are judged on the seasonally adjusted series: the trend
        // filter absorbs a persistent shift, so the remainder alone cannot
        // separate it from a spike.
        let adjusted: Vec<f64> = work.iter().zip(&d.seasonal).map(|(x, sf)| x - sf).collect();
        let pre = &adjusted[i.saturating_sub(PERIOD)..i];
        let post = &adjusted[(i + 1).min(work.len())..(i + 1 + PERIOD).min(work.len())];
        let shift = if pre.len() >= 3 && post.len() >= 3 {
            stats::median(post) - stats::median(pre)
        } else {
            0.0
        };

        if shift.abs() / scale > threshold {
            events.push(OutlierEvent {
                index: i,
                month: s.month_at(i),
                kind: OutlierKind::LevelShift,
                magnitude: shift,
                score: shift.abs() / scale,
            });
            // the trend filter smears a step over half a period either side
            let lo = i.saturating_sub(PERIOD / 2);
            let hi = (i + PERIOD / 2).min(work.len() - 1);
            flagged.extend(lo..=hi);
        } else {
            let r = d.remainder[i].expect("candidate has a remainder");
            events.push(OutlierEvent {
                index: i,
                month: s.month_at(i),
                kind: OutlierKind::Additive,
                magnitude: r - center,
                score: z,
            });
            work[i] = neighbour_average(&work, i).expect("interior index");
        }
    }
    events.sort_by_key(|e| e.index);
    Ok(events)
}

fn neighbour_average(x: &[f64], i: usize) -> Option<f64> {
    match (i.checked_sub(1).map(|j| x[j]), x.get(i + 1)) {
        (Some(a), Some(b)) => Some((a + b) / 2.0),
        (Some(a), None) => Some(a),
        (None, Some(b)) => Some(*b),
        (None, None) => None,
    }
}

/// Replaces each target by the mean of its two neighbours (a single
/// neighbour at the series boundary). Targets must not be adjacent.
pub fn repair_outliers(s: &TimeSeries, targets: &[usize]) -> Result<CleanReport> {
    repair(s, targets, CleanRule::NeighborAverage, Vec::new())
}

fn repair(
    s: &TimeSeries,
    targets: &[usize],
    rule: CleanRule,
    events: Vec<OutlierEvent>,
) -> Result<CleanReport> {
    if s.is_empty() {
        return Err(Error::insufficient(1, 0));
    }
    let targets: BTreeSet<usize> = targets.iter().copied().collect();
    if let Some(&bad) = targets.iter().find(|&&i| i >= s.len()) {
        return Err(Error::InvalidParameter(format!(
            "target index {bad} outside series of length {}",
            s.len()
        )));
    }
    let ordered: Vec<usize> = targets.into_iter().collect();
    if let Some(w) = ordered.windows(2).find(|w| w[1] == w[0] + 1) {
        return Err(Error::UnsupportedConfiguration(format!(
            "adjacent repair targets {} and {}",
            s.month_at(w[0]),
            s.month_at(w[1])
        )));
    }

    let src = s.values();
    let mut values = src.to_vec();
    let mut replacements = Vec::with_capacity(ordered.len());
    for &i in &ordered {
        let replacement = neighbour_average(src, i).ok_or_else(|| {
            Error::UnsupportedConfiguration("cannot repair a single-observation series".into())
        })?;
        values[i] = replacement;
        replacements.push(Replacement {
            index: i,
            month: s.month_at(i),
            original: src[i],
            replacement,
        });
    }
    Ok(CleanReport {
        source_digest: s.digest(),
        rule,
        events,
        replacements,
        repaired: s.with_values(values),
    })
}

/// Repairs exactly the given calendar months.
pub fn clean_months(s: &TimeSeries, months: &[MonthStamp]) -> Result<CleanReport> {
    let targets = months
        .iter()
        .map(|&m| {
            s.index_of(m).ok_or_else(|| {
                Error::InvalidParameter(format!("month {m} outside {}..{}", s.start(), s.end()))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    repair(s, &targets, CleanRule::ForcedList, Vec::new())
}

/// Repairs the bundled fixture at the months listed by the reference analysis.
pub fn clean_like_paper(s: &TimeSeries, which: Fixture) -> Result<CleanReport> {
    let digest = s.digest();
    if digest != which.sha256() {
        return Err(Error::WrongFixture {
            expected: which.name(),
            found: digest,
        });
    }
    clean_months(s, &which.paper_outlier_months())
}

/// Detects outliers and repairs the additive ones. When two flagged points
/// are adjacent only the higher-scoring one is repaired.
pub fn clean_auto(s: &TimeSeries, threshold: f64) -> Result<CleanReport> {
    let events = detect_outliers(s, threshold)?;
    let mut additive: Vec<&OutlierEvent> = events
        .iter()
        .filter(|e| e.kind == OutlierKind::Additive)
        .collect();
    additive.sort_by(|a, b| b.score.total_cmp(&a.score));
    let mut chosen: Vec<usize> = Vec::new();
    for e in additive {
        if chosen.iter().all(|&c| c.abs_diff(e.index) > 1) {
            chosen.push(e.index);
        }
    }
    repair(s, &chosen, CleanRule::NeighborAverage, events)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn ms(y: i32, m: u32) -> MonthStamp {
        MonthStamp::new(y, m).unwrap()
    }

    fn noise(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    #[test]
    fn repairs_interior_and_boundary_targets() {
        let s = TimeSeries::new(ms(2000, 1), vec![1.0, 100.0, 3.0]);
        let r = repair_outliers(&s, &[1]).unwrap();
        assert_eq!(r.repaired.values(), &[1.0, 2.0, 3.0]);
        let r = repair_outliers(&s, &[0, 2]).unwrap();
        assert_eq!(r.repaired.values(), &[100.0, 100.0, 100.0]);
        assert_eq!(r.replacements.len(), 2);
    }

    #[test]
    fn rejects_adjacent_and_empty() {
        let s = TimeSeries::new(ms(2000, 1), vec![1.0, 2.0, 3.0, 4.0]);
        assert!(matches!(
            repair_outliers(&s, &[1, 2]),
            Err(Error::UnsupportedConfiguration(_))
        ));
        let empty = TimeSeries::new(ms(2000, 1), vec![]);
        assert!(matches!(
            repair_outliers(&empty, &[]),
            Err(Error::InsufficientData { .. })
        ));
        assert!(repair_outliers(&s, &[4]).is_err());
    }

    #[test]
    fn single_spike_in_white_noise() {
        let mut v = noise(240, 2024);
        v[50] += 10.0;
        let s = TimeSeries::new(ms(2000, 1), v);
        let events = detect_outliers(&s, DEFAULT_THRESHOLD).unwrap();
        let idx: Vec<usize> = events.iter().map(|e| e.index).collect();
        assert_eq!(idx, vec![50]);
    }

    #[test]
    fn level_shift_is_reported_not_repaired() {
        let mut v = noise(120, 11);
        for x in v.iter_mut().skip(60) {
            *x += 40.0;
        }
        let s = TimeSeries::new(ms(2000, 1), v);
        let r = clean_auto(&s, DEFAULT_THRESHOLD).unwrap();
        assert!(r
            .events
            .iter()
            .any(|e| e.kind == OutlierKind::LevelShift && e.index.abs_diff(60) <= 1));
        for rep in &r.replacements {
            assert!(r
                .events
                .iter()
                .any(|e| e.index == rep.index && e.kind == OutlierKind::Additive));
        }
    }

    #[test]
    fn detector_errors() {
        let short = TimeSeries::new(ms(2000, 1), vec![1.0; 23]);
        assert!(matches!(
            detect_outliers(&short, 7.0),
            Err(Error::InsufficientData { .. })
        ));
        let flat = TimeSeries::new(ms(2000, 1), vec![3.0; 48]);
        assert!(matches!(
            detect_outliers(&flat, 7.0),
            Err(Error::ZeroDispersion)
        ));
    }

    proptest! {
        #[test]
        fn repair_preserves_shape_and_brackets_neighbours(
            v in prop::collection::vec(-1e4f64..1e4, 3..50),
            pick in 1usize..48,
        ) {
            let i = 1 + pick % (v.len() - 2);
            let s = TimeSeries::new(ms(1990, 5), v.clone());
            let r = repair_outliers(&s, &[i]).unwrap();
            prop_assert_eq!(r.repaired.len(), s.len());
            prop_assert_eq!(r.repaired.start(), s.start());
            let lo = v[i - 1].min(v[i + 1]);
            let hi = v[i - 1].max(v[i + 1]);
            prop_assert!(r.repaired.values()[i] >= lo && r.repaired.values()[i] <= hi);
        }

        #[test]
        fn detection_is_affine_invariant(seed in 0u64..1000, a in 0.5f64..50.0, b in -1e3f64..1e3) {
            let mut v = noise(96, seed);
            v[40] += 12.0;
            let s = TimeSeries::new(ms(2000, 1), v.clone());
            let t = s.with_values(v.iter().map(|x| a * x + b).collect());
            let e1: Vec<(usize, OutlierKind)> =
                detect_outliers(&s, 7.0).unwrap().iter().map(|e| (e.index, e.kind)).collect();
            let e2: Vec<(usize, OutlierKind)> =
                detect_outliers(&t, 7.0).unwrap().iter().map(|e| (e.index, e.kind)).collect();
            prop_assert_eq!(e1, e2);
        }
    }
}
