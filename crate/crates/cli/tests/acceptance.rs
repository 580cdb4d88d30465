//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Criterion 7 needs real data: set `LFCURVE_DATA_DIR` to a directory with
//! `italy.manifest`, `netherlands.manifest` and `switzerland.manifest`.
//! Without it the criterion is reported as SKIP.

mod common;

use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use lfcurve::app::{replicate, CountryManifest, Metric, Replication};
use lfcurve::diagnostics::{tau_critical_values, RejectionStudy, SimulatedProcess};
use lfcurve::{
    eval_piecewise, fit_cumulative, integration_order, residual_report, AnnualSeries, CountryModel,
    Deterministic, FitConfig, IntegrationOrder, Level, ModelSegment, Objective, Registry, Unit,
    UnitRootTest, Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

enum Status {
    Pass,
    Fail,
    Skip,
}

struct Outcome {
    status: Status,
    detail: String,
}

fn pass_if(ok: bool, detail: String) -> Outcome {
    Outcome {
        status: if ok { Status::Pass } else { Status::Fail },
        detail,
    }
}

// ---- generators -----------------------------------------------------------

/// Labor-force levels with growth `mean + x_t`, `x_t = phi x_{t-1} + sd e_t`.
fn labor_force(
    rng: &mut ChaCha8Rng,
    start: i32,
    len: usize,
    mean: f64,
    phi: f64,
    sd: f64,
) -> AnnualSeries {
    let mut level = 1.0e6;
    let mut x = 0.0;
    let mut v = vec![level];
    for _ in 1..len {
        x = phi * x + sd * rng.sample::<f64, _>(StandardNormal);
        level *= 1.0 + mean + x;
        v.push(level);
    }
    AnnualSeries::new(start, v, Unit::Count, "labor force").unwrap()
}

/// `a1 * g(t - lag) + a2`, from an explicit loop over the levels.
fn linear_target(lf: &AnnualSeries, a1: f64, a2: f64, lag: u32) -> AnnualSeries {
    let v = lf.values();
    let out: Vec<f64> = (1..v.len())
        .map(|i| a1 * (v[i] - v[i - 1]) / v[i - 1] + a2)
        .collect();
    AnnualSeries::new(
        lf.start_year() + 1 + lag as i32,
        out,
        Unit::RatePerYear,
        "target",
    )
    .unwrap()
}

/// i.i.d. noise on the cumulative curve: rates carry `e_t - e_{t-1}`.
fn level_noise(rng: &mut ChaCha8Rng, s: &AnnualSeries, sd: f64) -> AnnualSeries {
    let mut prev = sd * rng.sample::<f64, _>(StandardNormal);
    let v = s
        .values()
        .iter()
        .map(|x| {
            let e = sd * rng.sample::<f64, _>(StandardNormal);
            let out = x + e - prev;
            prev = e;
            out
        })
        .collect();
    AnnualSeries::new(s.start_year(), v, Unit::RatePerYear, "measured").unwrap()
}

fn last_n(s: &AnnualSeries, n: usize) -> AnnualSeries {
    s.slice(s.end_year() - n as i32 + 1, s.end_year()).unwrap()
}

fn segment(r: &lfcurve::FitReport) -> &ModelSegment {
    &r.fitted.segments[0]
}

// ---- criteria -------------------------------------------------------------

fn exact_recovery() -> Outcome {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let cfg = FitConfig::default();
    let (mut ok, mut worst) = (0, 0.0f64);
    for i in 0..50 {
        let a1: f64 = rng.random_range(cfg.lf_grid.min..=cfg.lf_grid.max);
        let a2: f64 = rng.random_range(cfg.intercept_grid.min..=cfg.intercept_grid.max);
        let lag: u32 = rng.random_range(0..=11);
        let lf = labor_force(&mut rng, 1900 + i, 74, 0.012, 0.8, 0.006);
        let target = last_n(&linear_target(&lf, a1, a2, lag), 60);
        let r = fit_cumulative(&target, &lf, &cfg).unwrap();
        let s = segment(&r);
        let err = (s.lf_coeff - a1).abs().max((s.intercept - a2).abs());
        worst = worst.max(err);
        if s.lf_lag == lag && err < 1e-6 {
            ok += 1;
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    pass_if(
        ok == 50 && secs < 60.0,
        format!("{ok}/50 exact, worst |coefficient error| {worst:.1e}, {secs:.1} s"),
    )
}

/// Cumulative and dynamic fits of the same noisy sample.
fn noisy_fit(seed: u64) -> (ModelSegment, ModelSegment) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lf = labor_force(&mut rng, 1950, 63, 0.012, 0.8, 0.006);
    let target = level_noise(
        &mut rng,
        &last_n(&linear_target(&lf, 4.0, -0.03, 2), 50),
        0.005,
    );
    let cfg = FitConfig::default();
    let cum = fit_cumulative(&target, &lf, &cfg).unwrap();
    let dynamic = fit_cumulative(
        &target,
        &lf,
        &FitConfig {
            objective: Objective::DynamicRms,
            ..cfg
        },
    )
    .unwrap();
    (segment(&cum).clone(), segment(&dynamic).clone())
}

fn noisy_recovery() -> Outcome {
    let ok = (0..100u64)
        .filter(|&s| {
            let (c, _) = noisy_fit(20_000 + s);
            (c.lf_coeff - 4.0).abs() <= 0.2 && (c.intercept + 0.03).abs() <= 0.005
        })
        .count();
    pass_if(
        ok >= 95,
        format!("{ok}/100 seeds within ±0.2 / ±0.005 (need 95)"),
    )
}

fn noise_suppression() -> Outcome {
    // Error in units of the criterion-2 tolerances.
    let err = |s: &ModelSegment| ((s.lf_coeff - 4.0) / 0.2).hypot((s.intercept + 0.03) / 0.005);
    let wins = (0..100u64)
        .filter(|&s| {
            let (c, d) = noisy_fit(30_000 + s);
            err(&c) < err(&d)
        })
        .count();
    pass_if(
        wins >= 60,
        format!("cumulative more accurate in {wins}/100 seeds (need 60)"),
    )
}

fn stationarity() -> Outcome {
    let (mut i0, mut integrated) = (0, 0);
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(40_000 + seed);
        // Persistent labor-force growth: inflation inherits its near unit root.
        let lf = labor_force(&mut rng, 1950, 63, 0.012, 0.97, 0.002);
        let measured = level_noise(
            &mut rng,
            &last_n(&linear_target(&lf, 4.0, -0.03, 2), 50),
            0.005,
        );
        let fit = fit_cumulative(&measured, &lf, &FitConfig::default()).unwrap();
        let (a, b) = fit.evaluation_years();
        let predicted = eval_piecewise(&fit.fitted, &lf, None, Some((a, b))).unwrap();
        let m = measured.slice(a, b).unwrap();
        if residual_report(&m, &predicted).unwrap().verdict == Verdict::I0 {
            i0 += 1;
        }
        if integration_order(&measured).unwrap() != IntegrationOrder::I0 {
            integrated += 1;
        }
    }
    pass_if(
        i0 >= 90 && integrated >= 85,
        format!("residual verdict I(0) in {i0}/100 (need 90); raw inflation I(1) or higher in {integrated}/100 (need 85)"),
    )
}

fn unit_root_calibration() -> Outcome {
    let rate = |test, process, seed| {
        RejectionStudy {
            test,
            process,
            n: 200,
            max_lag: 4,
            deterministic: Deterministic::Constant,
            level: Level::Five,
            replications: 1000,
            seed,
        }
        .rejection_rate()
        .unwrap()
    };
    let mut ok = true;
    let mut parts = Vec::new();
    for (test, seed) in [
        (UnitRootTest::AugmentedDickeyFuller, 50_000),
        (UnitRootTest::PhillipsPerron, 60_000),
    ] {
        let size = rate(test, SimulatedProcess::RandomWalk, seed);
        let power = rate(test, SimulatedProcess::Ar1(0.5), seed + 5_000);
        ok &= (0.03..=0.07).contains(&size) && power >= 0.90;
        parts.push(format!("{} size {size:.3} power {power:.3}", test.as_str()));
    }
    let cv = tau_critical_values(Deterministic::Constant, 44);
    let cv_ok = (cv.one + 3.61).abs() <= 0.05 && (cv.five + 2.94).abs() <= 0.05;
    parts.push(format!("n=44 criticals {:.3} / {:.3}", cv.one, cv.five));
    pass_if(ok && cv_ok, parts.join("; "))
}

fn registry_fidelity() -> Outcome {
    let reg = Registry::builtin();
    let mut problems = Vec::new();
    let table = reg.to_table().unwrap();
    let back = Registry::from_table(&table).unwrap();
    if back != reg || back.to_table().unwrap() != table {
        problems.push("table round trip".to_string());
    }
    for e in reg.entries() {
        for r in &e.models {
            let b = back
                .lookup(&e.country)
                .unwrap()
                .model(r.model.name())
                .unwrap();
            if !bit_equal(&r.model, &b.model) {
                problems.push(format!("{} {} not bit-exact", e.country, r.model.name()));
            }
        }
    }
    // Evaluate every canonical model on synthetic data.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let lf = labor_force(&mut rng, 1950, 70, 0.012, 0.8, 0.006);
    let rate = AnnualSeries::new(
        1950,
        (0..70)
            .map(|i| 0.05 + 0.01 * (i as f64 * 0.3).sin())
            .collect(),
        Unit::RatePerYear,
        "rate",
    )
    .unwrap();
    let mut evaluated = 0;
    for e in reg.entries() {
        for m in e.canonical() {
            let out = match m {
                CountryModel::Lagged(p) => eval_piecewise(p, &lf, Some(&rate), None),
                CountryModel::Phillips(p) => p.eval(&rate),
            };
            match out {
                Ok(s) if s.values().iter().all(|v| v.is_finite()) => evaluated += 1,
                _ => problems.push(format!("{} {} does not evaluate", e.country, m.name())),
            }
        }
    }
    // Italy: smoothed lagged growth 0.0097 everywhere.
    let italy = reg.lookup("Italy").unwrap().lagged().next().unwrap();
    let flat: Vec<f64> = (0..30)
        .scan(2.0e7, |l, i| {
            if i > 0 {
                *l *= 1.0097;
            }
            Some(*l)
        })
        .collect();
    let flat = AnnualSeries::new(1980, flat, Unit::Count, "lf").unwrap();
    let spot = eval_piecewise(italy, &flat, None, Some((2012, 2012)))
        .unwrap()
        .values()[0];
    if (spot - 0.1141).abs() > 1e-12 {
        problems.push(format!("Italy spot value {spot}"));
    }
    pass_if(
        problems.is_empty() && reg.entries().len() == 10,
        format!(
            "{} countries, {evaluated} canonical models evaluated, Italy spot {spot:.4}{}",
            reg.entries().len(),
            if problems.is_empty() {
                String::new()
            } else {
                format!("; problems: {}", problems.join(", "))
            }
        ),
    )
}

fn bit_equal(a: &CountryModel, b: &CountryModel) -> bool {
    let seg_bits = |s: &ModelSegment| {
        (
            s.lf_coeff.to_bits(),
            s.intercept.to_bits(),
            s.ue_coeff.map(f64::to_bits),
            s.lf_lag,
            s.ue_lag,
            s.valid_from,
            s.valid_to,
        )
    };
    match (a, b) {
        (CountryModel::Lagged(x), CountryModel::Lagged(y)) => {
            x.segments.len() == y.segments.len()
                && x.segments
                    .iter()
                    .zip(&y.segments)
                    .all(|(p, q)| seg_bits(p) == seg_bits(q))
                && x.smoothing == y.smoothing
                && x.comparison_smoothing == y.comparison_smoothing
        }
        (CountryModel::Phillips(x), CountryModel::Phillips(y)) => {
            x.slope.to_bits() == y.slope.to_bits()
                && x.intercept.to_bits() == y.intercept.to_bits()
                && x.independent_lag == y.independent_lag
        }
        _ => false,
    }
}

fn data_replication() -> Outcome {
    let Ok(dir) = std::env::var("LFCURVE_DATA_DIR") else {
        return Outcome {
            status: Status::Skip,
            detail:
                "set LFCURVE_DATA_DIR to a directory with italy/netherlands/switzerland manifests"
                    .into(),
        };
    };
    let reg = Registry::builtin();
    let load = |name: &str| -> Result<Replication, String> {
        let m = CountryManifest::load(&Path::new(&dir).join(format!("{name}.manifest")))
            .map_err(|e| e.to_string())?;
        let data = m.load_data().map_err(|e| e.to_string())?;
        replicate(&reg, &data).map_err(|e| e.to_string())
    };
    let checks = [
        ("italy", "unemployment", Metric::RSquared),
        ("italy", "unemployment", Metric::Rmsfe),
        ("netherlands", "inflation-generalized", Metric::RSquared),
        ("switzerland", "inflation", Metric::Slope),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (country, model, metric) in checks {
        let line = match load(country) {
            Err(e) => {
                ok = false;
                format!("{country}: {e}")
            }
            Ok(rep) => {
                let c = rep
                    .comparisons()
                    .into_iter()
                    .find(|c| c.target.model == model && c.target.metric == metric);
                match c {
                    Some(c) if c.pass == Some(true) => format!(
                        "{country} {} {:.4} ok",
                        metric.as_str(),
                        c.achieved.unwrap()
                    ),
                    Some(c) => {
                        ok = false;
                        format!(
                            "{country} {} {:?} vs published {}",
                            metric.as_str(),
                            c.achieved,
                            c.target.value
                        )
                    }
                    None => {
                        ok = false;
                        format!("{country} {} not computed", metric.as_str())
                    }
                }
            }
        };
        parts.push(line);
    }
    pass_if(ok, parts.join("; "))
}

fn cli_golden() -> Outcome {
    let first = common::golden_artifacts();
    let second = common::golden_artifacts();
    let unstable: Vec<&str> = first
        .iter()
        .zip(&second)
        .filter(|(a, b)| a.1 != b.1)
        .map(|(a, _)| a.0)
        .collect();
    let mismatched = common::check_golden(&first);
    pass_if(
        unstable.is_empty() && mismatched.is_empty(),
        format!(
            "{} artifacts; unstable {unstable:?}; differing from golden {mismatched:?}",
            first.len()
        ),
    )
}

fn main() -> ExitCode {
    // Respect `cargo test -- <filter>` style invocations that target other tests.
    if std::env::args().skip(1).any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    type Criterion = (u8, &'static str, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        (1, "exact recovery", exact_recovery),
        (2, "noisy recovery", noisy_recovery),
        (3, "noise suppression", noise_suppression),
        (4, "stationarity reproduction", stationarity),
        (5, "unit-root calibration", unit_root_calibration),
        (6, "registry fidelity", registry_fidelity),
        (7, "data-dependent replication", data_replication),
        (8, "CLI golden outputs", cli_golden),
    ];
    let mut failed = 0;
    for (id, name, f) in criteria {
        let o = f();
        let tag = match o.status {
            Status::Pass => "PASS",
            Status::Fail => {
                failed += 1;
                "FAIL"
            }
            Status::Skip => "SKIP",
        };
        println!("criterion {id} [{tag}] {name}: {}", o.detail);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
