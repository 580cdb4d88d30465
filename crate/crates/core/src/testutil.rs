//! Synthetic data generators for tests. These build series with explicit
//! loops so that they stay independent of the library's evaluation code.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::timeseries::{AnnualSeries, Unit};

/// Labor-force levels whose growth is `0.012 + x_t`, `x_t = 0.8 x_{t-1} + sd * e_t`.
pub fn labor_force<R: Rng>(
    rng: &mut R,
    start_year: i32,
    len: usize,
    growth_sd: f64,
) -> AnnualSeries {
    let mut level = 1.0e6;
    let mut x = 0.0;
    let mut values = vec![level];
    for _ in 1..len {
        let e: f64 = rng.sample(StandardNormal);
        x = 0.8 * x + growth_sd * e;
        level *= 1.0 + 0.012 + x;
        values.push(level);
    }
    AnnualSeries::new(start_year, values, Unit::Count, "labor force").unwrap()
}

/// `(year, (L[t] - L[t-1]) / L[t-1])` for every year after the first.
pub fn growth_pairs(lf: &AnnualSeries) -> Vec<(i32, f64)> {
    let v = lf.values();
    (1..v.len())
        .map(|i| (lf.start_year() + i as i32, (v[i] - v[i - 1]) / v[i - 1]))
        .collect()
}

/// `a1 * g(t - lag) + a2` on every computable year.
pub fn linear_target(lf: &AnnualSeries, a1: f64, a2: f64, lag: u32) -> AnnualSeries {
    let g = growth_pairs(lf);
    let start = g[0].0 + lag as i32;
    let values: Vec<f64> = g.iter().map(|&(_, gv)| a1 * gv + a2).collect();
    AnnualSeries::new(start, values, Unit::RatePerYear, "target").unwrap()
}

/// Adds i.i.d. Gaussian noise to annual rates.
pub fn rate_noise<R: Rng>(rng: &mut R, s: &AnnualSeries, sd: f64) -> AnnualSeries {
    let v = s
        .values()
        .iter()
        .map(|x| x + sd * rng.sample::<f64, _>(StandardNormal))
        .collect();
    AnnualSeries::new(s.start_year(), v, s.unit(), "noisy").unwrap()
}

/// Adds i.i.d. Gaussian noise to the cumulative (log level) curve, so that
/// rates carry `e_t - e_{t-1}`.
pub fn level_noise<R: Rng>(rng: &mut R, s: &AnnualSeries, sd: f64) -> AnnualSeries {
    let mut prev: f64 = sd * rng.sample::<f64, _>(StandardNormal);
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
    AnnualSeries::new(s.start_year(), v, s.unit(), "noisy").unwrap()
}

pub fn last_n(s: &AnnualSeries, n: usize) -> AnnualSeries {
    s.slice(s.end_year() - n as i32 + 1, s.end_year()).unwrap()
}
