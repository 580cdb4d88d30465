use super::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn series(v: Vec<f64>) -> AnnualSeries {
    AnnualSeries::new(1900, v, Unit::Index, "s").unwrap()
}

fn white(seed: u64, n: usize, sd: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = Normal::new(0.0, sd).unwrap();
    (0..n).map(|_| d.sample(&mut rng)).collect()
}

fn cumsum(v: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    v.iter()
        .map(|x| {
            acc += x;
            acc
        })
        .collect()
}

/// Dickey-Fuller t-ratio with a constant and no augmentation, from the
/// simple-regression formulas.
fn df_oracle(y: &[f64]) -> (f64, f64) {
    let x: Vec<f64> = y[..y.len() - 1].to_vec();
    let d: Vec<f64> = (1..y.len()).map(|t| y[t] - y[t - 1]).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let md = d.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxd: f64 = x.iter().zip(&d).map(|(a, b)| (a - mx) * (b - md)).sum();
    let b = sxd / sxx;
    let a = md - b * mx;
    let ssr: f64 = x
        .iter()
        .zip(&d)
        .map(|(xv, dv)| (dv - a - b * xv).powi(2))
        .sum();
    let se = (ssr / (n - 2.0) / sxx).sqrt();
    (n * b, b / se)
}

#[test]
fn adf_without_lags_matches_simple_regression() {
    let y = cumsum(&white(1, 60, 1.0));
    let r = adf(&series(y.clone()), 0, Deterministic::Constant).unwrap();
    let (z, t) = df_oracle(&y);
    assert!((r.statistic_t - t).abs() < 1e-10);
    assert!((r.statistic_rho - z).abs() < 1e-9);
    assert_eq!(r.nobs, 59);
}

#[test]
fn pp_without_correction_equals_df() {
    for seed in 0..100u64 {
        let raw = white(seed, 40 + (seed as usize % 50), 1.0);
        let y = if seed % 2 == 0 { cumsum(&raw) } else { raw };
        for det in [
            Deterministic::None,
            Deterministic::Constant,
            Deterministic::Trend,
        ] {
            let s = series(y.clone());
            let a = adf(&s, 0, det).unwrap();
            let p = phillips_perron(&s, 0, det).unwrap();
            assert!(
                (a.statistic_t - p.statistic_t).abs() < 1e-10,
                "{seed} {det:?}"
            );
            assert!(
                (a.statistic_rho - p.statistic_rho).abs() < 1e-8,
                "{seed} {det:?}"
            );
        }
    }
}

#[test]
fn reject_at_follows_critical_values() {
    let cv = CriticalValues {
        one: -3.5,
        five: -2.9,
        ten: -2.6,
    };
    assert_eq!(cv.reject_at(-4.0), Some(Level::One));
    assert_eq!(cv.reject_at(-3.0), Some(Level::Five));
    assert_eq!(cv.reject_at(-2.7), Some(Level::Ten));
    assert_eq!(cv.reject_at(-2.6), None);
}

#[test]
fn short_series_are_rejected() {
    let s = series(white(2, 13, 1.0));
    assert!(matches!(
        adf(&s, 4, Deterministic::Constant),
        Err(Error::SeriesTooShort(_))
    ));
    assert!(adf(&s, 3, Deterministic::Constant).is_ok());
    let s = series(white(2, 11, 1.0));
    assert!(matches!(
        phillips_perron(&s, 4, Deterministic::Constant),
        Err(Error::SeriesTooShort(_))
    ));
    assert!(matches!(
        integration_order(&series(white(3, 19, 1.0))),
        Err(Error::SeriesTooShort(_))
    ));
}

#[test]
fn constant_series_is_degenerate() {
    let s = series(vec![2.0; 30]);
    assert!(matches!(
        adf(&s, 1, Deterministic::Constant),
        Err(Error::DegenerateRegressor(_))
    ));
    assert_eq!(integration_order(&s).unwrap(), IntegrationOrder::I0);
}

fn study(test: UnitRootTest, process: SimulatedProcess, n: usize, seed: u64) -> f64 {
    RejectionStudy {
        test,
        process,
        n,
        max_lag: 4,
        deterministic: Deterministic::Constant,
        level: Level::Five,
        replications: 1000,
        seed,
    }
    .rejection_rate()
    .unwrap()
}

#[test]
fn adf_size_and_power() {
    let size = study(
        UnitRootTest::AugmentedDickeyFuller,
        SimulatedProcess::RandomWalk,
        200,
        100,
    );
    assert!(size <= 0.07, "{size}");
    let power = study(
        UnitRootTest::AugmentedDickeyFuller,
        SimulatedProcess::Ar1(0.5),
        200,
        200,
    );
    assert!(power >= 0.90, "{power}");
}

#[test]
fn pp_size_and_white_noise() {
    let size = study(
        UnitRootTest::PhillipsPerron,
        SimulatedProcess::RandomWalk,
        100,
        300,
    );
    assert!(size <= 0.07, "{size}");
    for seed in 0..50 {
        let r =
            phillips_perron(&series(white(seed, 100, 1.0)), 4, Deterministic::Constant).unwrap();
        assert!(
            r.statistic_t < r.critical_values.one - 3.0,
            "{}",
            r.statistic_t
        );
    }
}

#[test]
fn integration_orders_of_simulated_series() {
    let (mut i0, mut i1, mut i2) = (0, 0, 0);
    for seed in 0..100u64 {
        let e = white(500 + seed, 100, 1.0);
        i0 += (integration_order(&series(e.clone())).unwrap() == IntegrationOrder::I0) as usize;
        i1 += (integration_order(&series(cumsum(&e))).unwrap() == IntegrationOrder::I1) as usize;
        i2 += (integration_order(&series(cumsum(&cumsum(&e)))).unwrap() == IntegrationOrder::I2)
            as usize;
    }
    assert!(i0 >= 95, "{i0}");
    assert!(i1 >= 90, "{i1}");
    assert!(i2 >= 85, "{i2}");
}

fn rates(seed: u64, n: usize) -> AnnualSeries {
    let v = white(seed, n, 0.01).into_iter().map(|e| 0.03 + e).collect();
    AnnualSeries::new(1960, v, Unit::RatePerYear, "pi").unwrap()
}

#[test]
fn identical_series_are_stationary() {
    let m = rates(1, 50);
    let r = residual_report(&m, &m).unwrap();
    assert_eq!(r.verdict, Verdict::I0);
    assert!(r.dynamic_diff.values().iter().all(|&v| v == 0.0));
    assert!(r.cumulative_diff.values().iter().all(|&v| v == 0.0));
    assert_eq!(r.dynamic_ur.statistic_t, f64::NEG_INFINITY);
    assert_eq!(r.cumulative_ur.reject_at, Some(Level::One));
}

#[test]
fn domain_mismatch_is_an_error() {
    let m = rates(2, 50);
    let p = m.slice(1961, 2009).unwrap();
    assert!(matches!(
        residual_report(&m, &p),
        Err(Error::DisjointDomains(_))
    ));
}

/// Adds noise to the cumulative curve: rates get `e_t - e_{t-1}`.
fn level_perturbed(m: &AnnualSeries, seed: u64, sd: f64) -> AnnualSeries {
    let e = white(seed, m.len() + 1, sd);
    let v = m
        .values()
        .iter()
        .enumerate()
        .map(|(i, x)| x + e[i + 1] - e[i])
        .collect();
    AnnualSeries::new(m.start_year(), v, Unit::RatePerYear, "predicted").unwrap()
}

#[test]
fn white_noise_on_the_level_gives_i0() {
    let mut ok = 0;
    for seed in 0..100u64 {
        let m = rates(1000 + seed, 50);
        let p = level_perturbed(&m, 2000 + seed, 0.005);
        if residual_report(&m, &p).unwrap().verdict == Verdict::I0 {
            ok += 1;
        }
    }
    assert!(ok >= 90, "{ok}/100");
}

#[test]
fn random_walk_perturbation_is_not_i0() {
    let mut not_i0 = 0;
    for seed in 0..100u64 {
        let m = rates(3000 + seed, 50);
        let walk = cumsum(&white(4000 + seed, 50, 0.005));
        let v = m.values().iter().zip(&walk).map(|(a, b)| a + b).collect();
        let p = AnnualSeries::new(m.start_year(), v, Unit::RatePerYear, "p").unwrap();
        let r = residual_report(&m, &p).unwrap();
        if r.verdict != Verdict::I0 {
            not_i0 += 1;
        }
    }
    assert!(not_i0 >= 90, "{not_i0}/100");
}

#[test]
fn relative_error_declines() {
    let mut ok = 0;
    for seed in 0..100u64 {
        let m = rates(5000 + seed, 45);
        let p = level_perturbed(&m, 6000 + seed, 0.005);
        let rel = residual_report(&m, &p).unwrap().relative_diff.unwrap();
        let v = rel.values();
        let third = v.len() / 3;
        let mean = |s: &[f64]| s.iter().map(|x| x.abs()).sum::<f64>() / s.len() as f64;
        if mean(&v[v.len() - third..]) < mean(&v[..third]) {
            ok += 1;
        }
    }
    assert!(ok >= 90, "{ok}/100");
}

#[test]
fn relative_difference_starts_after_last_small_level() {
    let mut v = vec![0.01, -0.01];
    v.extend(white(7, 18, 0.01).iter().map(|e| 0.03 + e));
    let m = AnnualSeries::new(2000, v, Unit::RatePerYear, "m").unwrap();
    let p = level_perturbed(&m, 8, 0.002);
    let r = residual_report(&m, &p).unwrap();
    let rel = r.relative_diff.unwrap();
    assert_eq!(rel.start_year(), 2002);
    assert_eq!(rel.end_year(), 2019);
    let level = m.cumulative_sum();
    let expected = r.cumulative_diff.get(2010).unwrap() / level.get(2010).unwrap();
    assert_eq!(rel.get(2010), Some(expected));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adf_t_is_location_scale_invariant(seed in 0u64..10_000, a in -100.0f64..100.0, b in 0.01f64..100.0, lags in 0usize..5) {
        let y = cumsum(&white(seed, 60, 1.0));
        let t0 = adf(&series(y.clone()), lags, Deterministic::Constant).unwrap().statistic_t;
        let moved: Vec<f64> = y.iter().map(|v| a + b * v).collect();
        let t1 = adf(&series(moved), lags, Deterministic::Constant).unwrap().statistic_t;
        prop_assert!((t0 - t1).abs() < 1e-9, "{} vs {}", t0, t1);
    }

    #[test]
    fn critical_values_strictly_increase(n in 12usize..400, lags in 0usize..4) {
        let r = adf(&series(white(n as u64, n, 1.0)), lags, Deterministic::Trend).unwrap();
        let cv = r.critical_values;
        prop_assert!(cv.one < cv.five && cv.five < cv.ten);
    }
}
