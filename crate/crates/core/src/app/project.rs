//! Forward projections from labor-force scenarios.

use crate::error::{Error, Result};
use crate::models::{eval_piecewise, PiecewiseModel};
use crate::timeseries::AnnualSeries;

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionScenario {
    /// Usually the agency that published the labor-force projection.
    pub name: String,
    /// Labor-force levels; may include history ahead of the projected years.
    pub lf_projection: AnnualSeries,
    pub model: PiecewiseModel,
    /// Required by generalized models.
    pub ue: Option<AnnualSeries>,
    /// Last observed year. When given, the projection must run past it.
    pub history_end: Option<i32>,
}

/// Evaluates the scenario's model on the projected labor force. The output
/// runs `lag` years past the last projected level, less any smoothing edge.
pub fn project(s: &ProjectionScenario) -> Result<AnnualSeries> {
    let lag = s.model.max_lf_lag() as usize;
    let lf = &s.lf_projection;
    if lf.len() < 2 || lf.len() - 1 < lag {
        return Err(Error::SeriesTooShort(format!(
            "projection '{}' has {} levels; the model lag {lag} needs at least {}",
            s.name,
            lf.len(),
            lag.max(1) + 1
        )));
    }
    if let Some(end) = s.history_end {
        if lf.end_year() <= end {
            return Err(Error::InvalidConfig(format!(
                "projection '{}' ends in {} and does not extend past the last historical year {end}",
                s.name,
                lf.end_year()
            )));
        }
    }
    let out = eval_piecewise(&s.model, lf, s.ue.as_ref(), None)?;
    Ok(out.with_label(format!("{} ({})", s.model.target.as_str(), s.name)))
}
