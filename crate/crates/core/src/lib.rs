//! Labor-force driven models of inflation and unemployment.
//!
//! Inflation and unemployment are modelled as linear, lagged functions of the
//! relative change in the labor force level. Coefficients are calibrated by
//! matching cumulative curves, and residuals are checked for stationarity
//! with Dickey-Fuller and Phillips-Perron tests.

pub mod app;
pub mod calibration;
pub mod diagnostics;
pub mod error;
pub mod models;
pub mod timeseries;

#[cfg(test)]
mod testutil;

pub use calibration::{
    evaluate_model, fit_cumulative, fit_generalized, ols, rmsfe_pseudo_oos, scan_lag,
    BoundaryConditions, FitConfig, FitReport, Grid, LagScan, LagScanRow, Objective, OlsFit, Pins,
};
pub use diagnostics::{
    adf, integration_order, phillips_perron, residual_report, residual_report_with, CriticalValues,
    Deterministic, IntegrationOrder, Level, ResidualReport, ResidualTestConfig, UnitRootResult,
    UnitRootTest, Verdict,
};
pub use error::{Error, ErrorKind, Result};
pub use models::{
    balance_residual, eval_generalized, eval_piecewise, eval_simple, CountryModel,
    CountryModelEntry, Measure, ModelSegment, PhillipsCurve, PiecewiseModel, Registry, Smoothing,
    SmoothingTarget, Target, Variant,
};
pub use timeseries::{align, AnnualSeries, Unit};
