//! Re-evaluates a country's registry models on user-supplied data and sets
//! the achieved statistics beside the published ones.

use std::fmt::Write as _;

use super::io::{SeriesMeasure, SeriesRole};
use super::manifest::LoadedManifest;
use crate::calibration::{
    evaluate_model, ols, rmsfe_pseudo_oos, FitConfig, FitReport, Objective, OlsFit,
};
use crate::diagnostics::{residual_report, ResidualReport};
use crate::error::{Error, Result};
use crate::models::{
    eval_piecewise, CountryModel, Measure, PhillipsCurve, PiecewiseModel, Registry, SmoothingTarget,
};
use crate::timeseries::{align, AnnualSeries};

/// Start of the expanding window used for pseudo out-of-sample forecasts.
pub const RMSFE_START_FRACTION: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// R² of the regression of measured on predicted.
    RSquared,
    /// Slope of the same regression.
    Slope,
    Intercept,
    Rmsfe,
}

impl Metric {
    pub fn as_str(&self) -> &'static str {
        match self {
            Metric::RSquared => "R2",
            Metric::Slope => "slope",
            Metric::Intercept => "intercept",
            Metric::Rmsfe => "RMSFE",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Check {
    AtLeast(f64),
    AtMost(f64),
    Within(f64),
    /// Printed for comparison only.
    Info,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedTarget {
    pub country: &'static str,
    pub model: &'static str,
    pub period: Option<(i32, i32)>,
    pub metric: Metric,
    pub value: f64,
    pub check: Check,
}

impl PublishedTarget {
    /// `None` for informational targets.
    pub fn passes(&self, achieved: f64) -> Option<bool> {
        match self.check {
            Check::AtLeast(v) => Some(achieved >= v),
            Check::AtMost(v) => Some(achieved <= v),
            Check::Within(tol) => Some((achieved - self.value).abs() <= tol),
            Check::Info => None,
        }
    }
}

pub const PUBLISHED: &[PublishedTarget] = &[
    PublishedTarget {
        country: "Italy",
        model: "unemployment",
        period: Some((1973, 2006)),
        metric: Metric::RSquared,
        value: 0.92,
        check: Check::AtLeast(0.90),
    },
    PublishedTarget {
        country: "Italy",
        model: "unemployment",
        period: Some((1973, 2006)),
        metric: Metric::Slope,
        value: 0.96,
        check: Check::Info,
    },
    PublishedTarget {
        country: "Italy",
        model: "unemployment",
        period: Some((1973, 2006)),
        metric: Metric::Rmsfe,
        value: 0.0055,
        check: Check::AtMost(0.007),
    },
    PublishedTarget {
        country: "Netherlands",
        model: "inflation-generalized",
        period: Some((1980, 2006)),
        metric: Metric::RSquared,
        value: 0.77,
        check: Check::Within(0.05),
    },
    PublishedTarget {
        country: "Switzerland",
        model: "inflation",
        period: None,
        metric: Metric::Slope,
        value: 0.74,
        check: Check::Within(0.05),
    },
    PublishedTarget {
        country: "Switzerland",
        model: "inflation",
        period: None,
        metric: Metric::Intercept,
        value: 0.003,
        check: Check::Info,
    },
    PublishedTarget {
        country: "Switzerland",
        model: "inflation",
        period: None,
        metric: Metric::RSquared,
        value: 0.82,
        check: Check::Info,
    },
    PublishedTarget {
        country: "Germany",
        model: "phillips-unemployment",
        period: Some((1971, 2004)),
        metric: Metric::RSquared,
        value: 0.79,
        check: Check::Info,
    },
    PublishedTarget {
        country: "United States",
        model: "inflation",
        period: Some((1965, 2004)),
        metric: Metric::Rmsfe,
        value: 0.008,
        check: Check::Info,
    },
];

pub fn published_for<'a>(
    country: &'a str,
    model: &'a str,
) -> impl Iterator<Item = &'static PublishedTarget> + 'a {
    PUBLISHED
        .iter()
        .filter(move |t| t.country.eq_ignore_ascii_case(country) && t.model == model)
}

/// Evaluation of one registry model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelReplication {
    pub model: String,
    /// Description of the measured series used, e.g. "inflation (CPI)".
    pub measured_source: String,
    pub measured: AnnualSeries,
    pub predicted: AnnualSeries,
    /// Only for lagged models.
    pub fit: Option<FitReport>,
    pub r_squared: f64,
    pub rms: f64,
    pub scatter: Option<OlsFit>,
    pub residual: Option<ResidualReport>,
    pub rmsfe: Option<f64>,
    /// Why an optional statistic could not be computed.
    pub notes: Vec<String>,
}

impl ModelReplication {
    pub fn metric(&self, m: Metric) -> Option<f64> {
        match m {
            Metric::RSquared => self.scatter.map(|s| s.r_squared),
            Metric::Slope => self.scatter.map(|s| s.slope),
            Metric::Intercept => self.scatter.map(|s| s.intercept),
            Metric::Rmsfe => self.rmsfe,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Replication {
    pub country: String,
    pub models: Vec<ModelReplication>,
    /// Models not evaluated, with the reason.
    pub skipped: Vec<(String, String)>,
    pub warnings: Vec<String>,
}

/// A published target next to the achieved value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub target: &'static PublishedTarget,
    pub achieved: Option<f64>,
    pub pass: Option<bool>,
}

impl Replication {
    pub fn model(&self, name: &str) -> Option<&ModelReplication> {
        self.models.iter().find(|m| m.model == name)
    }

    pub fn comparisons(&self) -> Vec<Comparison> {
        PUBLISHED
            .iter()
            .filter(|t| t.country.eq_ignore_ascii_case(&self.country))
            .map(|t| {
                let achieved = self.model(t.model).and_then(|m| m.metric(t.metric));
                Comparison {
                    target: t,
                    achieved,
                    pass: achieved.and_then(|a| t.passes(a)),
                }
            })
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "country: {}", self.country);
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        for m in &self.models {
            let (a, b) = (m.measured.start_year(), m.measured.end_year());
            let _ = writeln!(s, "\n[{}] measured: {} {a}-{b}", m.model, m.measured_source);
            let _ = writeln!(
                s,
                "R2 (1 - SSR/SST) = {:.4}  RMS = {:.6}",
                m.r_squared, m.rms
            );
            if let Some(o) = m.scatter {
                let _ = writeln!(
                    s,
                    "scatter: measured = {:.4} * predicted {:+.5}, R2 = {:.4}, n = {}",
                    o.slope, o.intercept, o.r_squared, o.n
                );
            }
            if let Some(r) = m.rmsfe {
                let _ = writeln!(s, "RMSFE = {:.4}%", 100.0 * r);
            }
            if let Some(r) = &m.residual {
                s.push_str(&r.to_text());
            }
            for n in &m.notes {
                let _ = writeln!(s, "note: {n}");
            }
        }
        for (name, why) in &self.skipped {
            let _ = writeln!(s, "\n[{name}] skipped: {why}");
        }
        let cmp = self.comparisons();
        if !cmp.is_empty() {
            let _ = writeln!(s, "\npublished vs achieved:");
            for c in cmp {
                let t = c.target;
                let period = t
                    .period
                    .map_or("full overlap".to_string(), |(a, b)| format!("{a}-{b}"));
                let achieved = c.achieved.map_or("n/a".to_string(), |v| format!("{v:.4}"));
                let status = match c.pass {
                    Some(true) => "PASS",
                    Some(false) => "FAIL",
                    None if matches!(t.check, Check::Info) => "info",
                    None => "n/a",
                };
                let _ = writeln!(
                    s,
                    "  {:<24} {:<9} {:<12} published {:<8} achieved {:<8} {status}",
                    t.model,
                    t.metric.as_str(),
                    period,
                    t.value,
                    achieved
                );
            }
        }
        s
    }
}

fn preferred_measures(m: Measure) -> &'static [SeriesMeasure] {
    match m {
        Measure::Cpi => &[SeriesMeasure::Cpi],
        Measure::Dgdp => &[SeriesMeasure::Dgdp],
        Measure::UeUsDefinition => &[SeriesMeasure::UsDefinition],
        Measure::UeNational => &[SeriesMeasure::Nac, SeriesMeasure::Oecd],
        Measure::Unspecified => &[],
    }
}

fn describe(role: SeriesRole, measure: SeriesMeasure) -> String {
    format!("{} ({})", role.as_str(), measure.as_str())
}

fn r2_rms(measured: &AnnualSeries, predicted: &AnnualSeries) -> (f64, f64) {
    let y = measured.values();
    let n = y.len() as f64;
    let mean = y.iter().sum::<f64>() / n;
    let sst: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let ssr: f64 = y
        .iter()
        .zip(predicted.values())
        .map(|(a, b)| (a - b).powi(2))
        .sum();
    let r2 = if sst > 0.0 {
        1.0 - ssr / sst
    } else if ssr == 0.0 {
        1.0
    } else {
        f64::NEG_INFINITY
    };
    (r2, (ssr / n).sqrt())
}

fn period_for(country: &str, model: &str) -> Option<(i32, i32)> {
    published_for(country, model).find_map(|t| t.period)
}

fn comparison(measured: &AnnualSeries, window: Option<usize>) -> Result<AnnualSeries> {
    match window {
        Some(w) => measured.moving_average(w),
        None => Ok(measured.clone()),
    }
}

/// Scatter statistics and the residual report; failures become notes.
fn finish(mut r: ModelReplication) -> ModelReplication {
    match ols(&r.predicted, &r.measured) {
        Ok(o) => r.scatter = Some(o),
        Err(e) => r.notes.push(format!("scatter regression: {e}")),
    }
    match residual_report(&r.measured, &r.predicted) {
        Ok(rep) => r.residual = Some(rep),
        Err(e) => r.notes.push(format!("residual report: {e}")),
    }
    r
}

fn replicate_lagged(
    country: &str,
    m: &PiecewiseModel,
    data: &LoadedManifest,
) -> Result<ModelReplication> {
    let role = SeriesRole::for_target(m.target);
    let (file, target) = data
        .pick(role, preferred_measures(m.measure))
        .ok_or_else(|| {
            Error::InsufficientData(format!("no {} series in the manifest", role.as_str()))
        })?;
    let (_, lf) = data
        .pick(SeriesRole::LaborForce, &[])
        .ok_or_else(|| Error::Manifest("labor_force series required".into()))?;
    let ue = if m.is_generalized() {
        let (_, u) = data.pick(SeriesRole::Unemployment, &[]).ok_or_else(|| {
            Error::InsufficientData("generalized model needs an unemployment series".into())
        })?;
        Some(u)
    } else {
        None
    };
    let measured = comparison(target, m.comparison_smoothing)?;
    let period = period_for(country, &m.name);
    let fit = evaluate_model(m, &measured, lf, ue, period, Objective::CumulativeRms)?;
    let (a, b) = fit.evaluation_years();
    let measured = measured.slice(a, b)?;
    let predicted = eval_piecewise(m, lf, ue, Some((a, b)))?;
    let mut notes = Vec::new();
    let lag = m.segments[0].lf_lag;
    let rmsfe = if m.segments.len() == 1 && lag >= 1 && !m.is_generalized() {
        let cfg = FitConfig {
            target: m.target,
            eval_range: period,
            smoothing: m
                .smoothing
                .filter(|s| s.applied_to == SmoothingTarget::Predictor)
                .map(|s| s.window),
            ..FitConfig::default()
        };
        match rmsfe_pseudo_oos(target, lf, lag, &cfg, RMSFE_START_FRACTION) {
            Ok(v) => Some(v),
            Err(e) => {
                notes.push(format!("RMSFE: {e}"));
                None
            }
        }
    } else {
        None
    };
    Ok(finish(ModelReplication {
        model: m.name.clone(),
        measured_source: describe(role, file.measure),
        r_squared: fit.r_squared,
        rms: fit.rms_dynamic,
        measured,
        predicted,
        fit: Some(fit),
        scatter: None,
        residual: None,
        rmsfe,
        notes,
    }))
}

fn replicate_phillips(
    country: &str,
    p: &PhillipsCurve,
    data: &LoadedManifest,
) -> Result<ModelReplication> {
    let dep_role = SeriesRole::for_target(p.dependent);
    let ind_role = SeriesRole::for_target(p.independent());
    let (file, dep) = data
        .pick(dep_role, preferred_measures(p.measure))
        .ok_or_else(|| {
            Error::InsufficientData(format!("no {} series in the manifest", dep_role.as_str()))
        })?;
    let (_, ind) = data
        .pick(ind_role, preferred_measures(p.measure))
        .ok_or_else(|| {
            Error::InsufficientData(format!("no {} series in the manifest", ind_role.as_str()))
        })?;
    let mut predicted = p.eval(ind)?;
    if let Some((a, b)) = period_for(country, &p.name) {
        let (a, b) = (a.max(predicted.start_year()), b.min(predicted.end_year()));
        if a > b {
            return Err(Error::DisjointDomains(format!(
                "no predictions inside {a}-{b}"
            )));
        }
        predicted = predicted.slice(a, b)?;
    }
    let (measured, predicted) = align(dep, &predicted)?;
    let (r_squared, rms) = r2_rms(&measured, &predicted);
    Ok(finish(ModelReplication {
        model: p.name.clone(),
        measured_source: describe(dep_role, file.measure),
        measured,
        predicted,
        fit: None,
        r_squared,
        rms,
        scatter: None,
        residual: None,
        rmsfe: None,
        notes: Vec::new(),
    }))
}

/// Evaluates every canonical model of `country` that the manifest has data
/// for. Fails when none can be evaluated.
pub fn replicate(registry: &Registry, data: &LoadedManifest) -> Result<Replication> {
    let entry = registry.lookup(&data.manifest.country)?;
    let mut models = Vec::new();
    let mut skipped = Vec::new();
    let mut first_err = None;
    for m in entry.canonical() {
        let r = match m {
            CountryModel::Lagged(p) => replicate_lagged(&entry.country, p, data),
            CountryModel::Phillips(p) => replicate_phillips(&entry.country, p, data),
        };
        match r {
            Ok(r) => models.push(r),
            Err(e) => {
                skipped.push((m.name().to_string(), e.to_string()));
                first_err.get_or_insert(e);
            }
        }
    }
    if models.is_empty() {
        return Err(
            first_err.unwrap_or_else(|| Error::InsufficientData("no canonical models".into()))
        );
    }
    Ok(Replication {
        country: entry.country.clone(),
        models,
        skipped,
        warnings: data.warnings.clone(),
    })
}
