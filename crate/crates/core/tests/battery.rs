use chronohurst::battery::*;
use chronohurst::fixtures::Fixture;
use chronohurst::preclean::clean_like_paper;
use chronohurst::series::{difference, MonthStamp, TimeSeries};
use chronohurst::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn cleaned(f: Fixture) -> TimeSeries {
    clean_like_paper(&f.series(), f).unwrap().repaired
}

fn series(v: Vec<f64>) -> TimeSeries {
    TimeSeries::new(MonthStamp::new(1990, 1).unwrap(), v)
}

fn noise(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
}

fn within(actual: f64, target: f64, rel: f64) -> bool {
    ((actual - target) / target).abs() <= rel
}

#[test]
fn anderson_darling_on_fixtures() {
    let t = test_normality(
        &cleaned(Fixture::Trademarks),
        NormalityMethod::AndersonDarling,
    )
    .unwrap();
    assert!(within(t.statistic, 11.055, 0.02), "{}", t.statistic);
    assert!(t.p_clamped && t.p_value == P_FLOOR && t.reject_at_05);
    let p = test_normality(&cleaned(Fixture::Patents), NormalityMethod::AndersonDarling).unwrap();
    assert!(within(p.statistic, 13.102, 0.02), "{}", p.statistic);
}

#[test]
fn cramer_von_mises_on_trademarks() {
    let t = test_normality(
        &cleaned(Fixture::Trademarks),
        NormalityMethod::CramerVonMises,
    )
    .unwrap();
    assert!(within(t.statistic, 1.7112, 0.02), "{}", t.statistic);
    assert!(t.reject_at_05 && t.p_clamped);
}

#[test]
fn normal_samples_rarely_rejected() {
    for method in NormalityMethod::ALL.iter().copied() {
        let rejections = (0..100)
            .filter(|&seed| {
                test_normality(&series(noise(500, seed)), method)
                    .unwrap()
                    .reject_at_05
            })
            .count();
        assert!(rejections <= 10, "{method}: {rejections}");
    }
}

#[test]
fn kpss_matches_reference_statistics() {
    let p = test_stationarity(
        &cleaned(Fixture::Patents),
        StationarityMethod::Kpss,
        Deterministic::Drift,
    )
    .unwrap();
    assert!(within(p.statistic, 5.53, 0.05), "{}", p.statistic);
    assert_eq!(p.p_value, 0.01);
    assert!(p.p_clamped);

    let t = cleaned(Fixture::Trademarks);
    let lvl = test_stationarity(&t, StationarityMethod::Kpss, Deterministic::Drift).unwrap();
    assert!(within(lvl.statistic, 0.751, 0.15), "{}", lvl.statistic);
    let d = test_stationarity(
        &difference(&t, 1).unwrap(),
        StationarityMethod::Kpss,
        Deterministic::Drift,
    )
    .unwrap();
    assert!(within(d.statistic, 0.0294, 0.15), "{}", d.statistic);
    assert_eq!(d.p_value, 0.10);
    assert!(!d.reject_at_05);
}

#[test]
fn kpss_other_deterministic_terms() {
    // (fixture, differenced, type, reference value)
    let cases = [
        (Fixture::Trademarks, false, Deterministic::None, 0.59),
        (Fixture::Trademarks, false, Deterministic::Trend, 0.181),
        (Fixture::Trademarks, true, Deterministic::None, 0.642),
        (Fixture::Trademarks, true, Deterministic::Trend, 0.015),
        (Fixture::Patents, false, Deterministic::None, 5.88),
        (Fixture::Patents, false, Deterministic::Trend, 0.524),
        (Fixture::Patents, true, Deterministic::None, 0.799),
        (Fixture::Patents, true, Deterministic::Drift, 0.0858),
        (Fixture::Patents, true, Deterministic::Trend, 0.0716),
    ];
    for (f, diffed, det, target) in cases {
        let mut s = cleaned(f);
        if diffed {
            s = difference(&s, 1).unwrap();
        }
        let r = test_stationarity(&s, StationarityMethod::Kpss, det).unwrap();
        assert!(
            within(r.statistic, target, 0.15),
            "{f} {diffed} {det}: {}",
            r.statistic
        );
        assert!((0.01..=0.10).contains(&r.p_value));
    }
}

#[test]
fn kpss_white_noise_not_rejected() {
    let r = test_stationarity(
        &series(noise(500, 2024)),
        StationarityMethod::Kpss,
        Deterministic::Drift,
    )
    .unwrap();
    assert!(!r.reject_at_05);
}

#[test]
fn adf_levels_keep_unit_root_differences_reject() {
    for f in Fixture::ALL {
        let s = cleaned(f);
        let lvl = test_stationarity(&s, StationarityMethod::Adf, Deterministic::Drift).unwrap();
        assert!(!lvl.reject_at_05, "{f}: {}", lvl.statistic);
        assert_eq!(lvl.params["lag"], 7.0);
        let d = test_stationarity(
            &difference(&s, 1).unwrap(),
            StationarityMethod::Adf,
            Deterministic::Drift,
        )
        .unwrap();
        assert!(
            d.reject_at_05 && d.p_value == 0.01 && d.p_clamped,
            "{f}: {}",
            d.statistic
        );
    }
}

fn walk(w: &[f64]) -> Vec<f64> {
    w.iter()
        .scan(0.0, |acc, v| {
            *acc += v;
            Some(*acc)
        })
        .collect()
}

#[test]
fn integration_orders() {
    assert_eq!(
        integration_order(&cleaned(Fixture::Patents), StationarityMethod::Kpss).unwrap(),
        1
    );
    assert_eq!(
        integration_order(&cleaned(Fixture::Trademarks), StationarityMethod::Adf).unwrap(),
        1
    );
    let w = noise(500, 2024);
    assert_eq!(
        integration_order(&series(w.clone()), StationarityMethod::Kpss).unwrap(),
        0
    );
    assert_eq!(
        integration_order(&series(walk(&w)), StationarityMethod::Kpss).unwrap(),
        1
    );
}

#[test]
fn adf_integration_order_over_seeds() {
    // ADF rejects a true unit root about 5% of the time, so judge a rate
    let mut noise_zero = 0;
    let mut walk_one = 0;
    for seed in 0..50 {
        let w = noise(500, seed);
        noise_zero +=
            (integration_order(&series(w.clone()), StationarityMethod::Adf).unwrap() == 0) as usize;
        walk_one +=
            (integration_order(&series(walk(&w)), StationarityMethod::Adf).unwrap() == 1) as usize;
    }
    assert!(noise_zero >= 45, "{noise_zero}");
    assert!(walk_one >= 45, "{walk_one}");
}

#[test]
fn differencing_never_raises_the_order() {
    for f in Fixture::ALL {
        let s = cleaned(f);
        for method in StationarityMethod::ALL.iter().copied() {
            let a = integration_order(&s, method).unwrap();
            let b = integration_order(&difference(&s, 1).unwrap(), method).unwrap();
            assert!(b <= a, "{f} {method}");
        }
    }
}

#[test]
fn seasonality_detected_on_fixtures() {
    for method in SeasonalityMethod::ALL.iter().copied() {
        for f in Fixture::ALL {
            let r = test_seasonality(&cleaned(f), method).unwrap();
            assert!(r.reject_at_05, "{f} {method}: p={}", r.p_value);
        }
    }
}

#[test]
fn white_noise_rarely_seasonal() {
    let hits = (0..100)
        .filter(|&seed| {
            test_seasonality(&series(noise(480, seed)), SeasonalityMethod::Combined)
                .unwrap()
                .reject_at_05
        })
        .count();
    assert!(hits <= 10, "{hits}");
}

#[test]
fn seasonality_needs_three_years() {
    let err = test_seasonality(&series(noise(35, 1)), SeasonalityMethod::Qs).unwrap_err();
    assert!(matches!(
        err,
        Error::InsufficientData {
            needed: 36,
            got: 35
        }
    ));
}

#[test]
fn teraesvirta_on_fixtures() {
    let t = test_nonlinearity(
        &cleaned(Fixture::Trademarks),
        NonlinearityMethod::Teraesvirta,
    )
    .unwrap();
    assert!(within(t.statistic, 13.656, 0.10), "{}", t.statistic);
    assert!(t.reject_at_05);
    let p = test_nonlinearity(&cleaned(Fixture::Patents), NonlinearityMethod::Teraesvirta).unwrap();
    assert!(p.reject_at_05 && p.p_value < 1e-6);
}

#[test]
fn keenan_does_not_reject_trademarks() {
    let t = test_nonlinearity(&cleaned(Fixture::Trademarks), NonlinearityMethod::Keenan).unwrap();
    assert!(!t.reject_at_05, "p={}", t.p_value);
}

#[test]
fn tsay_and_mcleod_li_on_fixtures() {
    for f in Fixture::ALL {
        let s = cleaned(f);
        let tsay = test_nonlinearity(&s, NonlinearityMethod::Tsay).unwrap();
        assert!(tsay.reject_at_05, "{f}");
        let ml = test_nonlinearity(&s, NonlinearityMethod::McleodLi).unwrap();
        assert!(ml.reject_at_05, "{f}");
    }
}

#[test]
fn keenan_quiet_on_linear_ar1() {
    let rejections = (0..100u64)
        .filter(|&seed| {
            let e = noise(500, seed);
            let mut x = vec![0.0; 500];
            for t in 1..500 {
                x[t] = 0.5 * x[t - 1] + e[t];
            }
            test_nonlinearity(&series(x), NonlinearityMethod::Keenan)
                .unwrap()
                .reject_at_05
        })
        .count();
    assert!(rejections <= 10, "{rejections}");
}

#[test]
fn gph_signs() {
    let d = estimate_gph(&difference(&cleaned(Fixture::Trademarks), 1).unwrap()).unwrap();
    assert!(d.d < 0.0, "{}", d.d);
    let w = noise(2048, 2024);
    let g = estimate_gph(&series(w.clone())).unwrap();
    assert!(g.d.abs() <= 0.15, "{}", g.d);
    assert_eq!(g.bandwidth, 45);
    assert!(estimate_gph(&series(walk(&w))).unwrap().d > 0.4);
}

#[test]
fn degenerate_inputs() {
    let flat = series(vec![5.0; 100]);
    assert!(matches!(
        test_normality(&flat, NormalityMethod::AndersonDarling),
        Err(Error::DegenerateSample(_))
    ));
    assert!(matches!(
        test_stationarity(&flat, StationarityMethod::Kpss, Deterministic::Drift),
        Err(Error::DegenerateSample(_))
    ));
    assert!(matches!(
        test_nonlinearity(&flat, NonlinearityMethod::Keenan),
        Err(Error::DegenerateSample(_))
    ));
    assert!(matches!(
        estimate_gph(&flat),
        Err(Error::DegenerateSample(_))
    ));
}

#[test]
fn battery_verdicts_on_fixtures() {
    for f in Fixture::ALL {
        let r = run_battery(&cleaned(f)).unwrap();
        assert_eq!(
            r.verdicts,
            Verdicts {
                non_normal: true,
                non_stationary: true,
                seasonal: true,
                non_linear: true
            },
            "{f}"
        );
        assert_eq!(r.integration_order, 1);
        let groups = [
            &r.normality,
            &r.stationarity,
            &r.seasonality,
            &r.nonlinearity,
        ];
        for t in groups.into_iter().flatten() {
            assert!(
                (0.0..=1.0).contains(&t.p_value) && t.statistic.is_finite(),
                "{f} {}",
                t.name
            );
        }
    }
}

#[test]
fn decisions_are_affine_invariant() {
    for f in Fixture::ALL {
        let s = cleaned(f);
        let t = s.with_values(s.values().iter().map(|v| 0.37 * v + 1234.5).collect());
        let a = run_battery(&s).unwrap();
        let b = run_battery(&t).unwrap();
        let decisions = |r: &BatteryReport| -> Vec<(String, bool)> {
            [
                &r.normality,
                &r.stationarity,
                &r.seasonality,
                &r.nonlinearity,
            ]
            .into_iter()
            .flatten()
            .map(|t| (t.name.clone(), t.reject_at_05))
            .collect()
        };
        assert_eq!(decisions(&a), decisions(&b), "{f}");
        assert_eq!(a.integration_order, b.integration_order);
        assert_eq!(a.verdicts, b.verdicts);
    }
}
