use crate::error::{Error, Result};
use crate::timeseries::{align, AnnualSeries};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OlsFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Root mean squared residual.
    pub rms: f64,
    pub n: usize,
}

/// Ordinary least squares of `y` on `x` over their common years.
pub fn ols(x: &AnnualSeries, y: &AnnualSeries) -> Result<OlsFit> {
    let (x, y) = align(x, y)?;
    let n = x.len();
    if n < 3 {
        return Err(Error::InsufficientData(format!(
            "regression needs at least 3 points, got {n}"
        )));
    }
    let (x, y) = (x.values(), y.values());
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx <= 0.0 {
        return Err(Error::DegenerateRegressor(
            "regressor has zero variance".into(),
        ));
    }
    if syy <= 0.0 {
        return Err(Error::DegenerateRegressor(
            "dependent series has zero variance, R-squared is undefined".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    Ok(OlsFit {
        slope,
        intercept,
        r_squared: 1.0 - ssr / syy,
        rms: (ssr / n as f64).sqrt(),
        n,
    })
}
