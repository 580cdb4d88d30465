//! Lagged linear models driven by the labor-force growth rate.
//!
//! A [`ModelSegment`] holds one set of coefficients:
//!
//! ```text
//! y(t) = lf_coeff * g(t - lf_lag) [+ ue_coeff * UE(t - ue_lag)] + intercept
//! ```
//!
//! where `g` is the backward relative change of the labor force level. A
//! [`PiecewiseModel`] strings segments together across structural breaks
//! (measurement-unit changes), and a [`PhillipsCurve`] links unemployment and
//! inflation directly.

mod registry;
mod table;

use std::fmt;

pub use registry::{CountryModel, CountryModelEntry, ModelRecord, Registry, Variant};

use crate::error::{Error, Result};
use crate::timeseries::{align, AnnualSeries, Unit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    Inflation,
    Unemployment,
}

impl Target {
    pub fn as_str(&self) -> &'static str {
        match self {
            Target::Inflation => "inflation",
            Target::Unemployment => "unemployment",
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Target::Inflation => "pi",
            Target::Unemployment => "UE",
        }
    }
}

impl std::str::FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inflation" => Ok(Target::Inflation),
            "unemployment" => Ok(Target::Unemployment),
            other => Err(Error::InvalidConfig(format!("unknown target '{other}'"))),
        }
    }
}

/// Statistical definition the coefficients were estimated against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    Cpi,
    Dgdp,
    UeNational,
    UeUsDefinition,
    Unspecified,
}

impl Measure {
    pub fn as_str(&self) -> &'static str {
        match self {
            Measure::Cpi => "CPI",
            Measure::Dgdp => "DGDP",
            Measure::UeNational => "UE-national",
            Measure::UeUsDefinition => "UE-US-definition",
            Measure::Unspecified => "unspecified",
        }
    }
}

impl std::str::FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "CPI" => Ok(Measure::Cpi),
            "DGDP" => Ok(Measure::Dgdp),
            "UE-national" => Ok(Measure::UeNational),
            "UE-US-definition" => Ok(Measure::UeUsDefinition),
            "unspecified" => Ok(Measure::Unspecified),
            other => Err(Error::InvalidConfig(format!("unknown measure '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SmoothingTarget {
    /// Smooth the labor-force growth rate before lagging it.
    Predictor,
    /// Smooth the model output.
    Prediction,
}

/// Centered moving average attached to a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Smoothing {
    pub window: usize,
    pub applied_to: SmoothingTarget,
}

impl Smoothing {
    pub fn predictor(window: usize) -> Self {
        Self {
            window,
            applied_to: SmoothingTarget::Predictor,
        }
    }

    pub fn prediction(window: usize) -> Self {
        Self {
            window,
            applied_to: SmoothingTarget::Prediction,
        }
    }

    /// Years lost at each edge.
    pub fn half_width(&self) -> i32 {
        (self.window as i32 - 1) / 2
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSegment {
    pub lf_coeff: f64,
    pub intercept: f64,
    pub lf_lag: u32,
    pub ue_coeff: Option<f64>,
    /// Signed: the unemployment reading used at year `t` is `UE(t - ue_lag)`,
    /// so negative values read future unemployment.
    pub ue_lag: Option<i32>,
    pub valid_from: Option<i32>,
    pub valid_to: Option<i32>,
}

impl ModelSegment {
    pub fn simple(lf_coeff: f64, intercept: f64, lf_lag: u32) -> Self {
        Self {
            lf_coeff,
            intercept,
            lf_lag,
            ue_coeff: None,
            ue_lag: None,
            valid_from: None,
            valid_to: None,
        }
    }

    pub fn generalized(
        lf_coeff: f64,
        ue_coeff: f64,
        intercept: f64,
        lf_lag: u32,
        ue_lag: i32,
    ) -> Self {
        Self {
            ue_coeff: Some(ue_coeff),
            ue_lag: Some(ue_lag),
            ..Self::simple(lf_coeff, intercept, lf_lag)
        }
    }

    pub fn valid(mut self, from: Option<i32>, to: Option<i32>) -> Self {
        self.valid_from = from;
        self.valid_to = to;
        self
    }

    pub fn is_generalized(&self) -> bool {
        self.ue_coeff.is_some()
    }

    pub fn covers(&self, year: i32) -> bool {
        self.valid_from.is_none_or(|f| year >= f) && self.valid_to.is_none_or(|t| year <= t)
    }

    pub fn validate(&self) -> Result<()> {
        if let (Some(from), Some(to)) = (self.valid_from, self.valid_to) {
            if from > to {
                return Err(Error::InvariantViolation(format!(
                    "segment validity {from}-{to} is reversed"
                )));
            }
        }
        if !self.lf_coeff.is_finite()
            || !self.intercept.is_finite()
            || self.ue_coeff.is_some_and(|c| !c.is_finite())
        {
            return Err(Error::InvariantViolation("non-finite coefficient".into()));
        }
        Ok(())
    }

    /// Evaluates the segment on an already prepared growth-rate series.
    pub(crate) fn eval_on_growth(
        &self,
        growth: &AnnualSeries,
        ue: Option<&AnnualSeries>,
    ) -> Result<AnnualSeries> {
        let lagged = growth.shift(self.lf_lag as i32);
        match (self.ue_coeff, ue) {
            (None, _) => lagged.map(Unit::RatePerYear, "prediction", |g| {
                self.lf_coeff * g + self.intercept
            }),
            (Some(ue_coeff), Some(ue)) => {
                let ue_lagged = ue.shift(self.ue_lag.unwrap_or(0));
                lagged.zip_with(&ue_lagged, Unit::RatePerYear, "prediction", |g, u| {
                    self.lf_coeff * g + ue_coeff * u + self.intercept
                })
            }
            (Some(_), None) => Err(Error::InsufficientData(
                "generalized segment needs an unemployment series".into(),
            )),
        }
    }

    fn lf_term(&self) -> String {
        format!("{}*{}", self.lf_coeff, growth_term(self.lf_lag as i32))
    }
}

fn lagged_time(lag: i32) -> String {
    match lag {
        0 => "t".to_string(),
        l if l > 0 => format!("t-{l}"),
        l => format!("t+{}", -l),
    }
}

fn growth_term(lag: i32) -> String {
    let t = lagged_time(lag);
    format!("dLF({t})/LF({t})")
}

fn signed(v: f64) -> String {
    if v < 0.0 || (v == 0.0 && v.is_sign_negative()) {
        format!("- {}", -v)
    } else {
        format!("+ {v}")
    }
}

fn validity(from: Option<i32>, to: Option<i32>) -> String {
    match (from, to) {
        (Some(f), Some(t)) => format!("; {f} <= t <= {t}"),
        (Some(f), None) => format!("; t >= {f}"),
        (None, Some(t)) => format!("; t <= {t}"),
        (None, None) => String::new(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseModel {
    pub name: String,
    pub target: Target,
    pub measure: Measure,
    pub segments: Vec<ModelSegment>,
    pub smoothing: Option<Smoothing>,
    /// Window of the centered moving average applied to the measured series
    /// when comparing it against this model.
    pub comparison_smoothing: Option<usize>,
}

impl PiecewiseModel {
    pub fn single(
        name: impl Into<String>,
        target: Target,
        measure: Measure,
        segment: ModelSegment,
    ) -> Self {
        Self {
            name: name.into(),
            target,
            measure,
            segments: vec![segment],
            smoothing: None,
            comparison_smoothing: None,
        }
    }

    pub fn with_smoothing(mut self, smoothing: Smoothing) -> Self {
        self.smoothing = Some(smoothing);
        self
    }

    pub fn with_comparison_smoothing(mut self, window: usize) -> Self {
        self.comparison_smoothing = Some(window);
        self
    }

    pub fn is_generalized(&self) -> bool {
        self.segments.iter().any(ModelSegment::is_generalized)
    }

    pub fn max_lf_lag(&self) -> u32 {
        self.segments.iter().map(|s| s.lf_lag).max().unwrap_or(0)
    }

    /// Segments must be non-empty, individually valid, ordered and disjoint.
    pub fn validate(&self) -> Result<()> {
        if self.segments.is_empty() {
            return Err(Error::InvariantViolation(format!(
                "model '{}' has no segments",
                self.name
            )));
        }
        for s in &self.segments {
            s.validate()?;
        }
        for pair in self.segments.windows(2) {
            match (pair[0].valid_to, pair[1].valid_from) {
                (Some(to), Some(from)) if to < from => {}
                _ => {
                    return Err(Error::InvariantViolation(format!(
                        "segments of '{}' overlap or are unordered",
                        self.name
                    )))
                }
            }
        }
        if let Some(s) = self.smoothing {
            if s.window == 0 || s.window % 2 == 0 {
                return Err(Error::InvalidWindow {
                    window: s.window,
                    reason: "window must be odd and positive",
                });
            }
        }
        Ok(())
    }

    /// Growth-rate predictor with predictor smoothing applied when declared.
    pub fn predictor(&self, lf: &AnnualSeries) -> Result<AnnualSeries> {
        let g = lf.growth_rate().map_err(|e| match e {
            Error::SeriesTooShort(_) => Error::InsufficientHistory {
                first_computable: lf.start_year() + 1 + self.max_lf_lag() as i32,
            },
            other => other,
        })?;
        match self.smoothing {
            Some(s) if s.applied_to == SmoothingTarget::Predictor => g.moving_average(s.window),
            _ => Ok(g),
        }
    }
}

impl fmt::Display for PiecewiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lhs = format!("{}(t)", self.target.symbol());
        for (i, s) in self.segments.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{lhs} = {}", s.lf_term())?;
            if let (Some(c), Some(l)) = (s.ue_coeff, s.ue_lag) {
                write!(f, " {}*UE({})", signed(c), lagged_time(l))?;
            }
            write!(
                f,
                " {}{}",
                signed(s.intercept),
                validity(s.valid_from, s.valid_to)
            )?;
        }
        if let Some(s) = self.smoothing {
            let what = match s.applied_to {
                SmoothingTarget::Predictor => "predictor",
                SmoothingTarget::Prediction => "prediction",
            };
            write!(f, " [MA({}) on {what}]", s.window)?;
        }
        Ok(())
    }
}

/// Direct link between unemployment and inflation:
/// `dependent(t) = slope * independent(t - independent_lag) + intercept`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhillipsCurve {
    pub name: String,
    pub dependent: Target,
    pub measure: Measure,
    pub slope: f64,
    pub intercept: f64,
    pub independent_lag: i32,
    pub valid_from: Option<i32>,
    pub valid_to: Option<i32>,
}

impl PhillipsCurve {
    pub fn independent(&self) -> Target {
        match self.dependent {
            Target::Inflation => Target::Unemployment,
            Target::Unemployment => Target::Inflation,
        }
    }

    pub fn eval(&self, independent: &AnnualSeries) -> Result<AnnualSeries> {
        let out =
            independent
                .shift(self.independent_lag)
                .map(Unit::RatePerYear, "prediction", |x| {
                    self.slope * x + self.intercept
                })?;
        let from = self.valid_from.unwrap_or(out.start_year());
        let to = self.valid_to.unwrap_or(out.end_year());
        out.slice(from, to)
    }
}

impl fmt::Display for PhillipsCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}(t) = {}*{}({}) {}{}",
            self.dependent.symbol(),
            self.slope,
            self.independent().symbol(),
            lagged_time(self.independent_lag),
            signed(self.intercept),
            validity(self.valid_from, self.valid_to)
        )
    }
}

/// `lf_coeff * g(t - lf_lag) + intercept` over every year where the lagged
/// growth rate exists.
pub fn eval_simple(seg: &ModelSegment, lf: &AnnualSeries) -> Result<AnnualSeries> {
    let g = lf.growth_rate().map_err(|e| match e {
        Error::SeriesTooShort(_) => Error::InsufficientHistory {
            first_computable: lf.start_year() + 1 + seg.lf_lag as i32,
        },
        other => other,
    })?;
    ModelSegment {
        ue_coeff: None,
        ue_lag: None,
        ..seg.clone()
    }
    .eval_on_growth(&g, None)
}

/// Generalized (Phillips-type) form with an unemployment term.
pub fn eval_generalized(
    seg: &ModelSegment,
    lf: &AnnualSeries,
    ue: &AnnualSeries,
) -> Result<AnnualSeries> {
    if !seg.is_generalized() {
        return Err(Error::NotGeneralized);
    }
    let g = lf.growth_rate().map_err(|e| match e {
        Error::SeriesTooShort(_) => Error::InsufficientHistory {
            first_computable: lf.start_year() + 1 + seg.lf_lag as i32,
        },
        other => other,
    })?;
    seg.eval_on_growth(&g, Some(ue))
}

/// Evaluates a piecewise model, dispatching every year to the segment whose
/// validity range owns it.
///
/// Without `years`, the output covers every computable year inside the hull
/// of the segment validity ranges. Years inside that range not owned by any
/// segment are an error, as are requested years that cannot be computed.
pub fn eval_piecewise(
    m: &PiecewiseModel,
    lf: &AnnualSeries,
    ue: Option<&AnnualSeries>,
    years: Option<(i32, i32)>,
) -> Result<AnnualSeries> {
    m.validate()?;
    if m.is_generalized() && ue.is_none() {
        return Err(Error::InsufficientData(format!(
            "model '{}' needs an unemployment series",
            m.name
        )));
    }
    let g = m.predictor(lf)?;
    let per_segment: Vec<Option<AnnualSeries>> = m
        .segments
        .iter()
        .map(|s| match s.eval_on_growth(&g, ue) {
            Ok(out) => Ok(Some(out)),
            Err(Error::DisjointDomains(_)) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;

    let (from, to) = match years {
        Some(range) => range,
        None => {
            let mut lo = i32::MAX;
            let mut hi = i32::MIN;
            for (s, out) in m.segments.iter().zip(&per_segment) {
                if let Some(out) = out {
                    let a = s
                        .valid_from
                        .map_or(out.start_year(), |f| f.max(out.start_year()));
                    let b = s.valid_to.map_or(out.end_year(), |t| t.min(out.end_year()));
                    if a <= b {
                        lo = lo.min(a);
                        hi = hi.max(b);
                    }
                }
            }
            if lo > hi {
                return Err(Error::InsufficientHistory {
                    first_computable: g.start_year() + m.max_lf_lag() as i32,
                });
            }
            (lo, hi)
        }
    };

    let mut uncovered = Vec::new();
    let mut values = Vec::with_capacity((to - from + 1).max(0) as usize);
    for year in from..=to {
        let Some(idx) = m.segments.iter().position(|s| s.covers(year)) else {
            uncovered.push(year);
            continue;
        };
        match per_segment[idx].as_ref().and_then(|out| out.get(year)) {
            Some(v) => values.push(v),
            None => {
                return Err(Error::InsufficientHistory {
                    first_computable: per_segment[idx]
                        .as_ref()
                        .map_or(g.start_year() + m.segments[idx].lf_lag as i32, |o| {
                            o.start_year()
                        }),
                })
            }
        }
    }
    if !uncovered.is_empty() {
        return Err(Error::UncoveredYears(format_year_ranges(&uncovered)));
    }
    let out = AnnualSeries::new(
        from,
        values,
        Unit::RatePerYear,
        format!("predicted {}", m.target.as_str()),
    )?;
    match m.smoothing {
        Some(s) if s.applied_to == SmoothingTarget::Prediction => out.moving_average(s.window),
        _ => Ok(out),
    }
}

/// `(pi + UE) - (A1 g(t-t1) + B1 g(t-t2) + A2 + B2)`: the residual of the
/// summed inflation and unemployment equations.
pub fn balance_residual(
    inflation: &AnnualSeries,
    unemployment: &AnnualSeries,
    inflation_seg: &ModelSegment,
    unemployment_seg: &ModelSegment,
    lf: &AnnualSeries,
) -> Result<AnnualSeries> {
    let sum = inflation.zip_with(unemployment, Unit::RatePerYear, "pi + UE", |a, b| a + b)?;
    let p1 = eval_simple(inflation_seg, lf)?;
    let p2 = eval_simple(unemployment_seg, lf)?;
    let predicted = p1.zip_with(&p2, Unit::RatePerYear, "balance", |a, b| a + b)?;
    let (s, p) = align(&sum, &predicted)?;
    s.zip_with(&p, Unit::RatePerYear, "balance residual", |a, b| a - b)
}

pub(crate) fn format_year_ranges(years: &[i32]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < years.len() {
        let start = years[i];
        let mut end = start;
        while i + 1 < years.len() && years[i + 1] == end + 1 {
            i += 1;
            end = years[i];
        }
        parts.push(if start == end {
            start.to_string()
        } else {
            format!("{start}-{end}")
        });
        i += 1;
    }
    parts.join(", ")
}
