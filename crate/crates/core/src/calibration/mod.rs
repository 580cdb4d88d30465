//! Coefficient calibration by matching cumulative curves.
//!
//! The cumulative curve of a rate series is its running sum from the first
//! year of the evaluation domain, so the fitted and measured curves share the
//! boundary value 0 there. Coefficients are picked on a grid and polished by
//! coordinate descent; lags and break years are enumerated.

mod ols;
mod report;
mod search;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::models::{eval_piecewise, Measure, ModelSegment, PiecewiseModel, Smoothing, Target};
use crate::timeseries::{AnnualSeries, Unit};

pub use ols::{ols, OlsFit};
use search::{grid_search, polish, refine, tie_order, Quadratic};

/// Minimum usable points for a fit unless `allow_short` is set.
pub const MIN_POINTS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Objective {
    #[default]
    CumulativeRms,
    DynamicRms,
}

impl Objective {
    pub fn as_str(&self) -> &'static str {
        match self {
            Objective::CumulativeRms => "cumulative-rms",
            Objective::DynamicRms => "dynamic-rms",
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Objective {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cumulative-rms" | "cumulative" => Ok(Objective::CumulativeRms),
            "dynamic-rms" | "dynamic" => Ok(Objective::DynamicRms),
            other => Err(Error::InvalidConfig(format!(
                "unknown objective '{other}' (expected cumulative-rms or dynamic-rms)"
            ))),
        }
    }
}

/// Inclusive evenly spaced grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Grid {
    pub const fn new(min: f64, max: f64, step: f64) -> Self {
        Self { min, max, step }
    }

    pub fn validate(&self, what: &str) -> Result<()> {
        if !self.step.is_finite() || self.step <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "{what} grid step must be positive"
            )));
        }
        if !(self.min.is_finite() && self.max.is_finite()) || self.min > self.max {
            return Err(Error::InvalidConfig(format!("{what} grid is empty")));
        }
        Ok(())
    }

    /// Grid points, computed as `min + i * step` to avoid drift.
    pub fn values(&self) -> Vec<f64> {
        let count = ((self.max - self.min) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| self.min + i as f64 * self.step)
            .collect()
    }
}

/// Coefficients held fixed during a fit. Applies to every segment.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Pins {
    pub lf_coeff: Option<f64>,
    pub ue_coeff: Option<f64>,
    pub intercept: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig {
    /// Labor-force lags tried, inclusive.
    pub lag_range: (u32, u32),
    /// Unemployment lags tried by generalized fits, inclusive.
    pub ue_lag_range: (i32, i32),
    pub lf_grid: Grid,
    pub intercept_grid: Grid,
    pub ue_grid: Grid,
    /// With candidates, only two-segment models split after one of these
    /// years are considered. Infeasible candidates are skipped; if none is
    /// feasible a single segment is fitted.
    pub break_candidates: Option<Vec<i32>>,
    /// Maximum coordinate-descent passes.
    pub refine_iters: usize,
    pub objective: Objective,
    /// Centered moving average applied to the growth rate before lagging.
    pub smoothing: Option<usize>,
    pub pins: Pins,
    /// Restricts the evaluation domain to these years.
    pub eval_range: Option<(i32, i32)>,
    /// Accept fewer than [`MIN_POINTS`] points.
    pub allow_short: bool,
    pub target: Target,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            lag_range: (0, 12),
            ue_lag_range: (0, 0),
            lf_grid: Grid::new(-8.0, 8.0, 0.05),
            intercept_grid: Grid::new(-0.15, 0.15, 0.001),
            ue_grid: Grid::new(-2.0, 2.0, 0.01),
            break_candidates: None,
            refine_iters: 100_000,
            objective: Objective::CumulativeRms,
            smoothing: None,
            pins: Pins::default(),
            eval_range: None,
            allow_short: false,
            target: Target::Inflation,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        self.lf_grid.validate("lf coefficient")?;
        self.intercept_grid.validate("intercept")?;
        self.ue_grid.validate("unemployment coefficient")?;
        if self.lag_range.0 > self.lag_range.1 {
            return Err(Error::InvalidConfig("lag range is empty".into()));
        }
        if self.ue_lag_range.0 > self.ue_lag_range.1 {
            return Err(Error::InvalidConfig(
                "unemployment lag range is empty".into(),
            ));
        }
        if let Some((a, b)) = self.eval_range {
            if a > b {
                return Err(Error::InvalidConfig(format!(
                    "evaluation range {a}-{b} is empty"
                )));
            }
        }
        if let Some(w) = self.smoothing {
            if w == 0 || w % 2 == 0 {
                return Err(Error::InvalidWindow {
                    window: w,
                    reason: "window must be odd and positive",
                });
            }
        }
        Ok(())
    }
}

/// Boundary values of the measured cumulative curve. The price level is
/// `P = P0 * exp(cumulative)` with `P0 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryConditions {
    /// Year before the first evaluated year; the cumulative curve is 0 here.
    pub start_year: i32,
    pub end_year: i32,
    pub cumulative_start: f64,
    pub cumulative_end: f64,
    pub p0: f64,
    pub p1: f64,
    /// Labor force at the start and end years shifted by the first segment's lag.
    pub lf0: Option<f64>,
    pub lf1: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub fitted: PiecewiseModel,
    pub objective: Objective,
    /// Value of the selected objective (RMS).
    pub objective_value: f64,
    pub r_squared: f64,
    pub rms_dynamic: f64,
    pub rms_cumulative: f64,
    pub rmsfe: Option<f64>,
    pub residual_dynamic: AnnualSeries,
    pub residual_cumulative: AnnualSeries,
    pub boundary: BoundaryConditions,
    pub break_year: Option<i32>,
    /// Coordinate-descent passes used for the selected candidate.
    pub refine_passes: usize,
}

impl FitReport {
    pub fn evaluation_years(&self) -> (i32, i32) {
        (
            self.residual_dynamic.start_year(),
            self.residual_dynamic.end_year(),
        )
    }
}

/// One row of a lag scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagScanRow {
    pub lag: u32,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LagScan {
    pub rows: Vec<LagScanRow>,
    pub best_lag: u32,
    /// No lag improves on the worst by more than 5%.
    pub flat: bool,
}

/// Fits a single-segment (or, with break candidates, two-segment) model of
/// `target` on labor-force growth.
pub fn fit_cumulative(
    target: &AnnualSeries,
    lf: &AnnualSeries,
    cfg: &FitConfig,
) -> Result<FitReport> {
    let prep = Prepared::new(target, lf, None, cfg)?;
    let best = prep.search(cfg, &lags(cfg))?;
    prep.report(cfg, lf, None, &best)
}

/// As [`fit_cumulative`] with an additional unemployment term.
pub fn fit_generalized(
    target: &AnnualSeries,
    lf: &AnnualSeries,
    ue: &AnnualSeries,
    cfg: &FitConfig,
) -> Result<FitReport> {
    let prep = Prepared::new(target, lf, Some(ue), cfg)?;
    let best = prep.search(cfg, &lags(cfg))?;
    prep.report(cfg, lf, Some(ue), &best)
}

/// Best objective for each lag, all evaluated on the same years.
pub fn scan_lag(target: &AnnualSeries, lf: &AnnualSeries, cfg: &FitConfig) -> Result<LagScan> {
    let prep = Prepared::new(target, lf, None, cfg)?;
    let rows = lags(cfg)
        .into_iter()
        .map(|lag| {
            prep.search(cfg, &[lag]).map(|b| LagScanRow {
                lag,
                objective: b.rms,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut best = rows[0];
    let mut worst = rows[0].objective;
    for r in &rows[1..] {
        if r.objective < best.objective {
            best = *r;
        }
        worst = worst.max(r.objective);
    }
    let flat = worst <= 0.0 || (worst - best.objective) / worst <= 0.05;
    Ok(LagScan {
        rows,
        best_lag: best.lag,
        flat,
    })
}

/// Expanding-window pseudo out-of-sample forecast error at horizon `lag`.
///
/// With `n` usable years, for each `T` from `ceil(start_fraction * n)` to
/// `n - lag` the model is refitted on the first `T` years and year `T + lag`
/// is forecast from the predictor observed at `T`.
pub fn rmsfe_pseudo_oos(
    target: &AnnualSeries,
    lf: &AnnualSeries,
    lag: u32,
    cfg: &FitConfig,
    start_fraction: f64,
) -> Result<f64> {
    if !(start_fraction > 0.0 && start_fraction < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "start fraction must lie in (0, 1), got {start_fraction}"
        )));
    }
    if lag == 0 {
        return Err(Error::InvalidConfig(
            "forecast horizon (lag) must be at least 1".into(),
        ));
    }
    let mut base = cfg.clone();
    base.lag_range = (lag, lag);
    base.allow_short = true;
    let prep = Prepared::new(target, lf, None, &base)?;
    let (d0, d1) = prep.years;
    let n = (d1 - d0 + 1) as usize;
    let first = (start_fraction * n as f64).ceil() as usize;
    let last = n.saturating_sub(lag as usize);
    if first < 10 || first > last {
        return Err(Error::InsufficientData(format!(
            "{n} usable years give no expanding window with at least 10 training points at horizon {lag}"
        )));
    }
    let mut sq = 0.0;
    let mut count = 0usize;
    for t in first..=last {
        let end = d0 + t as i32 - 1;
        let mut window = base.clone();
        window.eval_range = Some((d0, end));
        let fit = fit_cumulative(target, lf, &window)?;
        let year = end + lag as i32;
        let forecast = eval_piecewise(&fit.fitted, lf, None, Some((year, year)))?.values()[0];
        let actual = target
            .get(year)
            .expect("forecast year lies in the evaluation domain");
        sq += (actual - forecast).powi(2);
        count += 1;
    }
    Ok((sq / count as f64).sqrt())
}

/// Scores an existing model against measured data over the model's
/// computable years (optionally restricted to `years`).
pub fn evaluate_model(
    model: &PiecewiseModel,
    target: &AnnualSeries,
    lf: &AnnualSeries,
    ue: Option<&AnnualSeries>,
    years: Option<(i32, i32)>,
    objective: Objective,
) -> Result<FitReport> {
    let predicted = eval_piecewise(model, lf, ue, None)?;
    let (mut a, mut b) = (
        predicted.start_year().max(target.start_year()),
        predicted.end_year().min(target.end_year()),
    );
    if let Some((f, t)) = years {
        a = a.max(f);
        b = b.min(t);
    }
    if a > b {
        return Err(Error::DisjointDomains(format!(
            "model output and '{}' do not overlap",
            target.label()
        )));
    }
    let measured = target.slice(a, b)?;
    let predicted = predicted.slice(a, b)?;
    build_report(model.clone(), &measured, &predicted, lf, objective, None, 0)
}

fn lags(cfg: &FitConfig) -> Vec<u32> {
    (cfg.lag_range.0..=cfg.lag_range.1).collect()
}

fn ue_lags(cfg: &FitConfig) -> Vec<i32> {
    let mut v: Vec<i32> = (cfg.ue_lag_range.0..=cfg.ue_lag_range.1).collect();
    v.sort_by_key(|l| (l.abs(), *l));
    v
}

/// Data aligned on the common evaluation domain of every candidate lag.
struct Prepared {
    years: (i32, i32),
    target: Vec<f64>,
    growth: AnnualSeries,
    ue: Option<AnnualSeries>,
}

#[derive(Debug, Clone)]
struct Candidate {
    lag: u32,
    ue_lag: Option<i32>,
    break_year: Option<i32>,
    theta: Vec<f64>,
    rms: f64,
    passes: usize,
}

impl Prepared {
    fn new(
        target: &AnnualSeries,
        lf: &AnnualSeries,
        ue: Option<&AnnualSeries>,
        cfg: &FitConfig,
    ) -> Result<Self> {
        cfg.validate()?;
        let mut growth = lf.growth_rate()?;
        if let Some(w) = cfg.smoothing {
            growth = growth.moving_average(w)?;
        }
        let (lo, hi) = cfg.lag_range;
        let mut a = target.start_year().max(growth.start_year() + hi as i32);
        let mut b = target.end_year().min(growth.end_year() + lo as i32);
        if let Some(u) = ue {
            let (ulo, uhi) = cfg.ue_lag_range;
            a = a.max(u.start_year() + uhi);
            b = b.min(u.end_year() + ulo);
        }
        if let Some((f, t)) = cfg.eval_range {
            a = a.max(f);
            b = b.min(t);
        }
        let n = if a <= b { (b - a + 1) as usize } else { 0 };
        if n < 3 {
            return Err(Error::InsufficientData(format!(
                "only {n} years where target and predictors overlap for lags {lo}..={hi}"
            )));
        }
        if n < MIN_POINTS && !cfg.allow_short {
            return Err(Error::InsufficientData(format!(
                "{n} usable points ({a}-{b}); at least {MIN_POINTS} are required unless the short-sample override is set"
            )));
        }
        Ok(Self {
            years: (a, b),
            target: (a..=b).map(|y| target.get(y).unwrap()).collect(),
            growth,
            ue: ue.cloned(),
        })
    }

    fn len(&self) -> usize {
        self.target.len()
    }

    fn break_options(&self, cfg: &FitConfig) -> Vec<Option<i32>> {
        let (a, b) = self.years;
        match &cfg.break_candidates {
            None => vec![None],
            Some(list) => {
                let mut ok: Vec<i32> = list
                    .iter()
                    .copied()
                    .filter(|&y| y > a && y < b - 1)
                    .collect();
                ok.sort_unstable();
                ok.dedup();
                if ok.is_empty() {
                    vec![None]
                } else {
                    ok.into_iter().map(Some).collect()
                }
            }
        }
    }

    fn params_per_segment(&self) -> usize {
        if self.ue.is_some() {
            3
        } else {
            2
        }
    }

    /// Design columns (lf, intercept, [ue] per segment), transformed to the
    /// objective's space, plus the transformed target.
    fn design(
        &self,
        cfg: &FitConfig,
        lag: u32,
        ue_lag: Option<i32>,
        brk: Option<i32>,
    ) -> (Vec<Vec<f64>>, Vec<f64>) {
        let k = self.params_per_segment();
        let segments = if brk.is_some() { 2 } else { 1 };
        let n = self.len();
        let mut cols = vec![vec![0.0; n]; k * segments];
        for (i, year) in (self.years.0..=self.years.1).enumerate() {
            let s = match brk {
                Some(b) if year > b => 1,
                _ => 0,
            };
            cols[s * k][i] = self.growth.get(year - lag as i32).unwrap();
            cols[s * k + 1][i] = 1.0;
            if let (Some(u), Some(l)) = (&self.ue, ue_lag) {
                cols[s * k + 2][i] = u.get(year - l).unwrap();
            }
        }
        let mut y = self.target.clone();
        if cfg.objective == Objective::CumulativeRms {
            for c in cols.iter_mut().chain(std::iter::once(&mut y)) {
                running_sum(c);
            }
        }
        (cols, y)
    }

    fn fit_candidate(
        &self,
        cfg: &FitConfig,
        lag: u32,
        ue_lag: Option<i32>,
        brk: Option<i32>,
    ) -> Candidate {
        let (cols, y) = self.design(cfg, lag, ue_lag, brk);
        let q = Quadratic::from_columns(&cols, &y);
        let k = self.params_per_segment();
        let segments = cols.len() / k;
        let lf_grid = tie_order(cfg.lf_grid.values());
        let int_grid = tie_order(cfg.intercept_grid.values());
        let ue_grid = tie_order(cfg.ue_grid.values());

        let mut theta = vec![0.0; cols.len()];
        let mut grids = vec![Vec::new(); cols.len()];
        let mut blocks = Vec::new();
        let mut free = Vec::new();
        for s in 0..segments {
            let mut block = Vec::new();
            let specs = [
                (s * k, cfg.pins.lf_coeff, &lf_grid),
                (s * k + 1, cfg.pins.intercept, &int_grid),
            ];
            for (i, pin, grid) in specs {
                match pin {
                    Some(v) => theta[i] = v,
                    None => {
                        grids[i] = grid.clone();
                        block.push(i);
                        free.push(i);
                    }
                }
            }
            if !block.is_empty() {
                blocks.push(block);
            }
            if k == 3 {
                let i = s * k + 2;
                match cfg.pins.ue_coeff {
                    Some(v) => theta[i] = v,
                    None => {
                        grids[i] = ue_grid.clone();
                        blocks.push(vec![i]);
                        free.push(i);
                    }
                }
            }
        }
        if !blocks.is_empty() {
            grid_search(&q, &grids, &blocks, &mut theta);
        }
        let passes = if free.is_empty() {
            0
        } else {
            refine(&q, &free, &mut theta, cfg.refine_iters).len()
        };
        polish(&q, &free, &mut theta);
        let ss: f64 = (0..y.len())
            .map(|i| {
                let fitted: f64 = cols.iter().zip(&theta).map(|(c, t)| c[i] * t).sum();
                (y[i] - fitted).powi(2)
            })
            .sum();
        Candidate {
            lag,
            ue_lag,
            break_year: brk,
            theta,
            rms: (ss / y.len() as f64).sqrt(),
            passes,
        }
    }

    fn search(&self, cfg: &FitConfig, lag_list: &[u32]) -> Result<Candidate> {
        let ue_options: Vec<Option<i32>> = if self.ue.is_some() {
            ue_lags(cfg).into_iter().map(Some).collect()
        } else {
            vec![None]
        };
        let breaks = self.break_options(cfg);
        let mut jobs = Vec::new();
        for &lag in lag_list {
            for &ul in &ue_options {
                for &b in &breaks {
                    jobs.push((lag, ul, b));
                }
            }
        }
        let results: Vec<Candidate> = jobs
            .par_iter()
            .map(|&(lag, ul, b)| self.fit_candidate(cfg, lag, ul, b))
            .collect();
        let mut best: Option<Candidate> = None;
        for c in results {
            if !c.rms.is_finite() {
                return Err(Error::Numerical(format!(
                    "non-finite objective at lag {}",
                    c.lag
                )));
            }
            if best.as_ref().is_none_or(|b| c.rms < b.rms) {
                best = Some(c);
            }
        }
        best.ok_or_else(|| Error::InvalidConfig("no candidate models to fit".into()))
    }

    fn segments(&self, c: &Candidate) -> Vec<ModelSegment> {
        let k = self.params_per_segment();
        let count = c.theta.len() / k;
        (0..count)
            .map(|s| {
                let t = &c.theta[s * k..(s + 1) * k];
                let seg = match c.ue_lag {
                    Some(l) => ModelSegment::generalized(t[0], t[2], t[1], c.lag, l),
                    None => ModelSegment::simple(t[0], t[1], c.lag),
                };
                match (c.break_year, s) {
                    (Some(b), 0) => seg.valid(None, Some(b)),
                    (Some(b), _) => seg.valid(Some(b + 1), None),
                    (None, _) => seg,
                }
            })
            .collect()
    }

    fn report(
        &self,
        cfg: &FitConfig,
        lf: &AnnualSeries,
        ue: Option<&AnnualSeries>,
        c: &Candidate,
    ) -> Result<FitReport> {
        let mut model = PiecewiseModel {
            name: "fitted".into(),
            target: cfg.target,
            measure: Measure::Unspecified,
            segments: self.segments(c),
            smoothing: None,
            comparison_smoothing: None,
        };
        if let Some(w) = cfg.smoothing {
            model = model.with_smoothing(Smoothing::predictor(w));
        }
        let predicted = eval_piecewise(&model, lf, ue, Some(self.years))?;
        let measured = AnnualSeries::new(
            self.years.0,
            self.target.clone(),
            Unit::RatePerYear,
            "measured",
        )?;
        build_report(
            model,
            &measured,
            &predicted,
            lf,
            cfg.objective,
            c.break_year,
            c.passes,
        )
    }
}

fn running_sum(v: &mut [f64]) {
    let mut acc = 0.0;
    for x in v.iter_mut() {
        acc += *x;
        *x = acc;
    }
}

fn rms(v: &[f64]) -> f64 {
    (v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64).sqrt()
}

fn build_report(
    model: PiecewiseModel,
    measured: &AnnualSeries,
    predicted: &AnnualSeries,
    lf: &AnnualSeries,
    objective: Objective,
    break_year: Option<i32>,
    refine_passes: usize,
) -> Result<FitReport> {
    let residual_dynamic =
        measured.zip_with(predicted, Unit::RatePerYear, "dynamic residual", |m, p| {
            m - p
        })?;
    let residual_cumulative = measured.cumulative_sum().zip_with(
        &predicted.cumulative_sum(),
        Unit::Index,
        "cumulative residual",
        |m, p| m - p,
    )?;
    let rms_dynamic = rms(residual_dynamic.values());
    let rms_cumulative = rms(residual_cumulative.values());
    let mean = measured.values().iter().sum::<f64>() / measured.len() as f64;
    let sst: f64 = measured.values().iter().map(|v| (v - mean).powi(2)).sum();
    let ssr: f64 = residual_dynamic.values().iter().map(|v| v * v).sum();
    let r_squared = if sst > 0.0 {
        1.0 - ssr / sst
    } else if ssr == 0.0 {
        1.0
    } else {
        f64::NEG_INFINITY
    };
    let (a, b) = (measured.start_year(), measured.end_year());
    let cumulative_end: f64 = measured.values().iter().sum();
    let lag = model.segments.first().map_or(0, |s| s.lf_lag as i32);
    let boundary = BoundaryConditions {
        start_year: a - 1,
        end_year: b,
        cumulative_start: 0.0,
        cumulative_end,
        p0: 1.0,
        p1: cumulative_end.exp(),
        lf0: lf.get(a - 1 - lag),
        lf1: lf.get(b - lag),
    };
    Ok(FitReport {
        objective_value: match objective {
            Objective::CumulativeRms => rms_cumulative,
            Objective::DynamicRms => rms_dynamic,
        },
        fitted: model,
        objective,
        r_squared,
        rms_dynamic,
        rms_cumulative,
        rmsfe: None,
        residual_dynamic,
        residual_cumulative,
        boundary,
        break_year,
        refine_passes,
    })
}
