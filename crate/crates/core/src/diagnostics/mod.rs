//! Unit-root tests and residual stationarity reports.

mod critical;
mod montecarlo;

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::timeseries::{AnnualSeries, Unit};

pub use critical::{rho_critical_values, tau_critical_values};
pub use montecarlo::{RejectionStudy, SimulatedProcess};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Deterministic {
    None,
    #[default]
    Constant,
    Trend,
}

impl Deterministic {
    pub fn as_str(&self) -> &'static str {
        match self {
            Deterministic::None => "none",
            Deterministic::Constant => "constant",
            Deterministic::Trend => "constant+trend",
        }
    }

    fn columns(&self) -> usize {
        match self {
            Deterministic::None => 0,
            Deterministic::Constant => 1,
            Deterministic::Trend => 2,
        }
    }
}

impl FromStr for Deterministic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Deterministic::None),
            "constant" | "c" => Ok(Deterministic::Constant),
            "constant+trend" | "trend" | "ct" => Ok(Deterministic::Trend),
            other => Err(Error::InvalidConfig(format!(
                "unknown deterministic terms '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Level {
    One,
    Five,
    Ten,
}

impl Level {
    pub fn as_str(&self) -> &'static str {
        match self {
            Level::One => "1%",
            Level::Five => "5%",
            Level::Ten => "10%",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalValues {
    pub one: f64,
    pub five: f64,
    pub ten: f64,
}

impl CriticalValues {
    pub fn at(&self, level: Level) -> f64 {
        match level {
            Level::One => self.one,
            Level::Five => self.five,
            Level::Ten => self.ten,
        }
    }

    /// Strictest level at which `statistic` rejects a unit root.
    pub fn reject_at(&self, statistic: f64) -> Option<Level> {
        [Level::One, Level::Five, Level::Ten]
            .into_iter()
            .find(|&l| statistic < self.at(l))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitRootTest {
    AugmentedDickeyFuller,
    PhillipsPerron,
}

impl UnitRootTest {
    pub fn as_str(&self) -> &'static str {
        match self {
            UnitRootTest::AugmentedDickeyFuller => "ADF",
            UnitRootTest::PhillipsPerron => "PP",
        }
    }

    pub fn run(
        &self,
        s: &AnnualSeries,
        max_lag: usize,
        deterministic: Deterministic,
    ) -> Result<UnitRootResult> {
        match self {
            UnitRootTest::AugmentedDickeyFuller => adf(s, max_lag, deterministic),
            UnitRootTest::PhillipsPerron => phillips_perron(s, max_lag, deterministic),
        }
    }
}

impl FromStr for UnitRootTest {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "adf" => Ok(UnitRootTest::AugmentedDickeyFuller),
            "pp" => Ok(UnitRootTest::PhillipsPerron),
            other => Err(Error::InvalidConfig(format!(
                "unknown unit-root test '{other}' (adf or pp)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitRootResult {
    pub test: UnitRootTest,
    /// Normalized bias statistic, z(rho).
    pub statistic_rho: f64,
    /// t-ratio statistic, z(t). Decides `reject_at`.
    pub statistic_t: f64,
    /// Critical values for `statistic_t`.
    pub critical_values: CriticalValues,
    /// Critical values for `statistic_rho`.
    pub rho_critical_values: CriticalValues,
    pub lags_used: usize,
    pub deterministic: Deterministic,
    /// Observations in the test regression.
    pub nobs: usize,
    pub reject_at: Option<Level>,
}

impl UnitRootResult {
    pub fn rejects_at(&self, level: Level) -> bool {
        self.reject_at.is_some_and(|l| l <= level)
    }

    /// Result used for an identically zero series, treated as stationary.
    fn degenerate(test: UnitRootTest, n: usize, lags: usize, deterministic: Deterministic) -> Self {
        Self {
            test,
            statistic_rho: f64::NEG_INFINITY,
            statistic_t: f64::NEG_INFINITY,
            critical_values: tau_critical_values(deterministic, n),
            rho_critical_values: rho_critical_values(deterministic, n),
            lags_used: lags,
            deterministic,
            nobs: n,
            reject_at: Some(Level::One),
        }
    }

    fn new(
        test: UnitRootTest,
        statistic_rho: f64,
        statistic_t: f64,
        lags_used: usize,
        deterministic: Deterministic,
        nobs: usize,
    ) -> Self {
        let critical_values = tau_critical_values(deterministic, nobs);
        Self {
            test,
            statistic_rho,
            statistic_t,
            critical_values,
            rho_critical_values: rho_critical_values(deterministic, nobs),
            lags_used,
            deterministic,
            nobs,
            reject_at: critical_values.reject_at(statistic_t),
        }
    }
}

impl fmt::Display for UnitRootResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cv = &self.critical_values;
        let rc = &self.rho_critical_values;
        write!(
            f,
            "{} ({}, lags {}, n {}): z(rho) = {:.4} [1% {:.2}, 5% {:.2}, 10% {:.2}]; z(t) = {:.4} [1% {:.3}, 5% {:.3}, 10% {:.3}]; ",
            self.test.as_str(),
            self.deterministic.as_str(),
            self.lags_used,
            self.nobs,
            self.statistic_rho,
            rc.one,
            rc.five,
            rc.ten,
            self.statistic_t,
            cv.one,
            cv.five,
            cv.ten
        )?;
        match self.reject_at {
            Some(l) => write!(f, "unit root rejected at {l}"),
            None => f.write_str("unit root not rejected"),
        }
    }
}

struct Regression {
    beta: DVector<f64>,
    resid: DVector<f64>,
    /// Diagonal of `(X^T X)^{-1}`.
    inv_diag: Vec<f64>,
}

fn regress(x: DMatrix<f64>, y: DVector<f64>) -> Result<Regression> {
    let k = x.ncols();
    let qr = x.clone().qr();
    let r = qr.r();
    let scale = (0..k).map(|i| r[(i, i)].abs()).fold(0.0f64, f64::max);
    if (0..k).any(|i| r[(i, i)].abs() <= 1e-12 * scale) || scale == 0.0 {
        return Err(Error::DegenerateRegressor(
            "unit-root regression is rank deficient".into(),
        ));
    }
    let qty = qr.q().transpose() * &y;
    let beta = r
        .solve_upper_triangular(&qty)
        .ok_or_else(|| Error::Numerical("triangular solve failed".into()))?;
    let rinv = r
        .solve_upper_triangular(&DMatrix::identity(k, k))
        .ok_or_else(|| Error::Numerical("triangular inverse failed".into()))?;
    let inv_diag = (0..k)
        .map(|i| rinv.row(i).iter().map(|v| v * v).sum())
        .collect();
    let resid = &y - &x * &beta;
    Ok(Regression {
        beta,
        resid,
        inv_diag,
    })
}

fn deterministic_columns(d: Deterministic, rows: usize, first_t: usize) -> Vec<Vec<f64>> {
    let mut cols = Vec::new();
    if d.columns() >= 1 {
        cols.push(vec![1.0; rows]);
    }
    if d.columns() >= 2 {
        cols.push((0..rows).map(|i| (first_t + i) as f64).collect());
    }
    cols
}

fn is_zero(s: &AnnualSeries) -> bool {
    s.values().iter().all(|&v| v == 0.0)
}

/// Augmented Dickey-Fuller test with exactly `max_lag` lagged differences:
/// `dy_t = a [+ b t] + rho y_{t-1} + sum_i g_i dy_{t-i} + e_t`.
pub fn adf(
    s: &AnnualSeries,
    max_lag: usize,
    deterministic: Deterministic,
) -> Result<UnitRootResult> {
    let y = s.values();
    let t_len = y.len();
    if t_len < max_lag + 10 {
        return Err(Error::SeriesTooShort(format!(
            "ADF with {max_lag} lags needs at least {} points, got {t_len}",
            max_lag + 10
        )));
    }
    let dy: Vec<f64> = (1..t_len).map(|t| y[t] - y[t - 1]).collect();
    // dy[t-1] is the change into y[t]; usable t runs from max_lag + 1.
    let first = max_lag + 1;
    let rows = t_len - first;
    let mut cols = deterministic_columns(deterministic, rows, first);
    let rho_col = cols.len();
    cols.push((first..t_len).map(|t| y[t - 1]).collect());
    for i in 1..=max_lag {
        cols.push((first..t_len).map(|t| dy[t - 1 - i]).collect());
    }
    let k = cols.len();
    if rows <= k {
        return Err(Error::SeriesTooShort(format!(
            "ADF regression has {rows} observations for {k} coefficients"
        )));
    }
    let x = DMatrix::from_fn(rows, k, |r, c| cols[c][r]);
    let yv = DVector::from_iterator(rows, (first..t_len).map(|t| dy[t - 1]));
    let reg = regress(x, yv)?;
    let s2 = reg.resid.norm_squared() / (rows - k) as f64;
    let rho = reg.beta[rho_col];
    let se = (s2 * reg.inv_diag[rho_col]).sqrt();
    let gamma_sum: f64 = (rho_col + 1..k).map(|i| reg.beta[i]).sum();
    Ok(UnitRootResult::new(
        UnitRootTest::AugmentedDickeyFuller,
        rows as f64 * rho / (1.0 - gamma_sum),
        rho / se,
        max_lag,
        deterministic,
        rows,
    ))
}

/// Phillips-Perron test: `y_t = a [+ b t] + rho y_{t-1} + u_t` with Newey-West
/// (Bartlett kernel, `max_lag` autocovariances) corrections.
pub fn phillips_perron(
    s: &AnnualSeries,
    max_lag: usize,
    deterministic: Deterministic,
) -> Result<UnitRootResult> {
    let y = s.values();
    let t_len = y.len();
    if t_len < 12 {
        return Err(Error::SeriesTooShort(format!(
            "PP test needs at least 12 points, got {t_len}"
        )));
    }
    let rows = t_len - 1;
    let mut cols = deterministic_columns(deterministic, rows, 1);
    let rho_col = cols.len();
    cols.push(y[..rows].to_vec());
    let k = cols.len();
    let x = DMatrix::from_fn(rows, k, |r, c| cols[c][r]);
    let yv = DVector::from_column_slice(&y[1..]);
    let reg = regress(x, yv)?;
    let n = rows as f64;
    let u = reg.resid.as_slice();
    let s2 = reg.resid.norm_squared() / (rows - k) as f64;
    let se = (s2 * reg.inv_diag[rho_col]).sqrt();
    let rho = reg.beta[rho_col];
    let gamma = |j: usize| u[j..].iter().zip(u).map(|(a, b)| a * b).sum::<f64>() / n;
    let gamma0 = gamma(0);
    let lambda2 = gamma0
        + 2.0
            * (1..=max_lag.min(rows - 1))
                .map(|j| (1.0 - j as f64 / (max_lag as f64 + 1.0)) * gamma(j))
                .sum::<f64>();
    let t_rho = (rho - 1.0) / se;
    let z_rho = n * (rho - 1.0) - 0.5 * (n * n * se * se / s2) * (lambda2 - gamma0);
    let z_t = (gamma0 / lambda2).sqrt() * t_rho
        - 0.5 * (lambda2 - gamma0) / lambda2.sqrt() * (n * se / s2.sqrt());
    if !(z_rho.is_finite() && z_t.is_finite()) {
        return Err(Error::Numerical(
            "non-finite Phillips-Perron statistic".into(),
        ));
    }
    Ok(UnitRootResult::new(
        UnitRootTest::PhillipsPerron,
        z_rho,
        z_t,
        max_lag,
        deterministic,
        rows,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum IntegrationOrder {
    I0,
    I1,
    I2,
    Higher,
}

impl IntegrationOrder {
    pub fn as_str(&self) -> &'static str {
        match self {
            IntegrationOrder::I0 => "I(0)",
            IntegrationOrder::I1 => "I(1)",
            IntegrationOrder::I2 => "I(2)",
            IntegrationOrder::Higher => "I(3+)",
        }
    }
}

impl fmt::Display for IntegrationOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Lagged differences used by [`integration_order`].
pub const INTEGRATION_ORDER_LAGS: usize = 4;

/// Differences `s` until an ADF test with a constant rejects at 5%.
/// A series that becomes constant is stationary at that order.
pub fn integration_order(s: &AnnualSeries) -> Result<IntegrationOrder> {
    if s.len() < 20 {
        return Err(Error::SeriesTooShort(format!(
            "integration order needs at least 20 points, got {}",
            s.len()
        )));
    }
    let orders = [
        IntegrationOrder::I0,
        IntegrationOrder::I1,
        IntegrationOrder::I2,
    ];
    let mut current = s.clone();
    for (d, order) in orders.into_iter().enumerate() {
        if d > 0 {
            current = current.first_difference()?;
        }
        let v = current.values();
        if v.iter().all(|&x| x == v[0]) {
            return Ok(order);
        }
        let r = match adf(&current, INTEGRATION_ORDER_LAGS, Deterministic::Constant) {
            Ok(r) => r,
            // A deterministic trend left after differencing: treat the next
            // difference, which is constant, as the stationary order.
            Err(Error::DegenerateRegressor(_)) => continue,
            Err(e) => return Err(e),
        };
        if r.rejects_at(Level::Five) {
            return Ok(order);
        }
    }
    Ok(IntegrationOrder::Higher)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    I0,
    I1,
    I2,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::I0 => "I(0)",
            Verdict::I1 => "I(1)",
            Verdict::I2 => "I(2)",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Settings for [`residual_report_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualTestConfig {
    pub test: UnitRootTest,
    pub max_lag: usize,
    pub deterministic: Deterministic,
    /// Cumulative levels with smaller magnitude are not used as divisors.
    pub level_epsilon: f64,
}

impl Default for ResidualTestConfig {
    fn default() -> Self {
        Self {
            test: UnitRootTest::PhillipsPerron,
            max_lag: 4,
            deterministic: Deterministic::Constant,
            level_epsilon: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub dynamic_diff: AnnualSeries,
    pub cumulative_diff: AnnualSeries,
    /// Cumulative difference over the measured cumulative level, on the
    /// years after the last one where that level is below epsilon.
    pub relative_diff: Option<AnnualSeries>,
    pub dynamic_ur: UnitRootResult,
    pub cumulative_ur: UnitRootResult,
    /// Integration order of the cumulative difference when the verdict is not I0.
    pub cumulative_order: Option<IntegrationOrder>,
    pub verdict: Verdict,
}

impl ResidualReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("dynamic difference:    {}\n", self.dynamic_ur));
        s.push_str(&format!("cumulative difference: {}\n", self.cumulative_ur));
        if let Some(o) = self.cumulative_order {
            s.push_str(&format!("cumulative difference integration order: {o}\n"));
        }
        s.push_str(&format!("verdict: {}\n", self.verdict));
        s
    }
}

/// [`residual_report_with`] using Phillips-Perron with 4 lags and a constant.
pub fn residual_report(
    measured: &AnnualSeries,
    predicted: &AnnualSeries,
) -> Result<ResidualReport> {
    residual_report_with(measured, predicted, &ResidualTestConfig::default())
}

pub fn residual_report_with(
    measured: &AnnualSeries,
    predicted: &AnnualSeries,
    cfg: &ResidualTestConfig,
) -> Result<ResidualReport> {
    if measured.start_year() != predicted.start_year()
        || measured.end_year() != predicted.end_year()
    {
        return Err(Error::DisjointDomains(format!(
            "measured covers {}-{} but predicted covers {}-{}",
            measured.start_year(),
            measured.end_year(),
            predicted.start_year(),
            predicted.end_year()
        )));
    }
    let dynamic_diff = measured.zip_with(
        predicted,
        Unit::RatePerYear,
        "dynamic difference",
        |m, p| m - p,
    )?;
    let level = measured.cumulative_sum();
    let cumulative_diff = level.zip_with(
        &predicted.cumulative_sum(),
        Unit::Index,
        "cumulative difference",
        |m, p| m - p,
    )?;
    let relative_diff = {
        let last_small = level
            .iter()
            .filter(|(_, v)| v.abs() < cfg.level_epsilon)
            .map(|(y, _)| y)
            .last();
        let from = last_small.map_or(level.start_year(), |y| y + 1);
        if from > level.end_year() {
            None
        } else {
            let c = cumulative_diff.slice(from, level.end_year())?;
            let l = level.slice(from, level.end_year())?;
            Some(c.zip_with(&l, Unit::Index, "relative difference", |d, m| d / m)?)
        }
    };
    let run = |s: &AnnualSeries| {
        if is_zero(s) {
            Ok(UnitRootResult::degenerate(
                cfg.test,
                s.len(),
                cfg.max_lag,
                cfg.deterministic,
            ))
        } else {
            cfg.test.run(s, cfg.max_lag, cfg.deterministic)
        }
    };
    let dynamic_ur = run(&dynamic_diff)?;
    let cumulative_ur = run(&cumulative_diff)?;
    let (verdict, cumulative_order) =
        if dynamic_ur.rejects_at(Level::Five) && cumulative_ur.rejects_at(Level::Five) {
            (Verdict::I0, None)
        } else {
            let order = integration_order(&cumulative_diff)?;
            let v = match order {
                IntegrationOrder::I1 => Verdict::I1,
                IntegrationOrder::I2 => Verdict::I2,
                _ => Verdict::Inconclusive,
            };
            (v, Some(order))
        };
    Ok(ResidualReport {
        dynamic_diff,
        cumulative_diff,
        relative_diff,
        dynamic_ur,
        cumulative_ur,
        cumulative_order,
        verdict,
    })
}

#[cfg(test)]
mod tests;
