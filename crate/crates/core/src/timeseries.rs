//! Year-indexed series and the small algebra the models need.
//!
//! Every series is annual and gap free: `values[i]` belongs to year
//! `start_year + i`. All operations return new series; nothing mutates in
//! place.

use std::fmt;

use crate::error::{Error, Result};

/// Unit of measurement carried by a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Unit {
    /// A rate expressed as a decimal fraction per year (inflation, unemployment, growth).
    RatePerYear,
    /// A strictly positive level (labor force, price level).
    Count,
    /// A dimensionless accumulated quantity such as a cumulative curve.
    Index,
}

impl Unit {
    pub fn as_str(&self) -> &'static str {
        match self {
            Unit::RatePerYear => "rate-per-year",
            Unit::Count => "count",
            Unit::Index => "index",
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Unit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rate-per-year" | "rate" => Ok(Unit::RatePerYear),
            "count" => Ok(Unit::Count),
            "index" => Ok(Unit::Index),
            other => Err(Error::InvalidConfig(format!("unknown unit '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnualSeries {
    start_year: i32,
    values: Vec<f64>,
    unit: Unit,
    label: String,
}

impl AnnualSeries {
    pub fn new(
        start_year: i32,
        values: Vec<f64>,
        unit: Unit,
        label: impl Into<String>,
    ) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvariantViolation("series has no values".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvariantViolation(format!(
                "non-finite value in year {}",
                start_year + i as i32
            )));
        }
        if unit == Unit::Count {
            if let Some(i) = values.iter().position(|&v| v <= 0.0) {
                return Err(Error::InvariantViolation(format!(
                    "nonpositive level {} in year {}",
                    values[i],
                    start_year + i as i32
                )));
            }
        }
        Ok(Self {
            start_year,
            values,
            unit,
            label: label.into(),
        })
    }

    pub fn start_year(&self) -> i32 {
        self.start_year
    }

    /// Last year carrying a value (inclusive).
    pub fn end_year(&self) -> i32 {
        self.start_year + self.values.len() as i32 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn unit(&self) -> Unit {
        self.unit
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn contains_year(&self, year: i32) -> bool {
        year >= self.start_year && year <= self.end_year()
    }

    pub fn get(&self, year: i32) -> Option<f64> {
        if self.contains_year(year) {
            Some(self.values[(year - self.start_year) as usize])
        } else {
            None
        }
    }

    pub fn years(&self) -> impl Iterator<Item = i32> + '_ {
        (0..self.values.len()).map(move |i| self.start_year + i as i32)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.start_year + i as i32, v))
    }

    /// Restricts the series to `[from, to]`, both inclusive.
    pub fn slice(&self, from: i32, to: i32) -> Result<Self> {
        let from = from.max(self.start_year);
        let to = to.min(self.end_year());
        if from > to {
            return Err(Error::DisjointDomains(format!(
                "'{}' covers {}-{}, requested range is empty",
                self.label,
                self.start_year,
                self.end_year()
            )));
        }
        let lo = (from - self.start_year) as usize;
        let hi = (to - self.start_year) as usize;
        Ok(Self {
            start_year: from,
            values: self.values[lo..=hi].to_vec(),
            unit: self.unit,
            label: self.label.clone(),
        })
    }

    /// Backward relative change `(s[t] - s[t-1]) / s[t-1]`, starting one year later.
    pub fn growth_rate(&self) -> Result<Self> {
        if self.values.len() < 2 {
            return Err(Error::SeriesTooShort(format!(
                "growth rate of '{}' needs at least 2 points",
                self.label
            )));
        }
        if let Some(i) = self.values.iter().position(|&v| v <= 0.0) {
            return Err(Error::InvariantViolation(format!(
                "growth rate needs positive levels, found {} in year {}",
                self.values[i],
                self.start_year + i as i32
            )));
        }
        let values = self
            .values
            .windows(2)
            .map(|w| (w[1] - w[0]) / w[0])
            .collect();
        Self::new(
            self.start_year + 1,
            values,
            Unit::RatePerYear,
            format!("growth of {}", self.label),
        )
    }

    /// Moves every value `k` years later (earlier for negative `k`).
    pub fn shift(&self, k: i32) -> Self {
        Self {
            start_year: self.start_year + k,
            values: self.values.clone(),
            unit: self.unit,
            label: self.label.clone(),
        }
    }

    /// Centered moving average over an odd window. Edge years without a full
    /// window are dropped.
    pub fn moving_average(&self, window: usize) -> Result<Self> {
        if window == 0 || window.is_multiple_of(2) {
            return Err(Error::InvalidWindow {
                window,
                reason: "window must be odd and positive",
            });
        }
        if window > self.values.len() {
            return Err(Error::InvalidWindow {
                window,
                reason: "window longer than the series",
            });
        }
        if window == 1 {
            return Ok(self.clone());
        }
        let half = (window - 1) / 2;
        let values = self
            .values
            .windows(window)
            .map(|w| w.iter().sum::<f64>() / window as f64)
            .collect();
        Ok(Self {
            start_year: self.start_year + half as i32,
            values,
            unit: self.unit,
            label: format!("MA({window}) of {}", self.label),
        })
    }

    /// Running sum over the whole domain; the cumulative curve of a rate series.
    pub fn cumulative_sum(&self) -> Self {
        let mut acc = 0.0;
        let values = self
            .values
            .iter()
            .map(|v| {
                acc += v;
                acc
            })
            .collect();
        Self {
            start_year: self.start_year,
            values,
            unit: Unit::Index,
            label: format!("cumulative {}", self.label),
        }
    }

    /// `s[t] - s[t-1]`, starting one year later.
    pub fn first_difference(&self) -> Result<Self> {
        if self.values.len() < 2 {
            return Err(Error::SeriesTooShort(format!(
                "difference of '{}' needs at least 2 points",
                self.label
            )));
        }
        let unit = match self.unit {
            Unit::Count => Unit::Index,
            _ => Unit::RatePerYear,
        };
        Ok(Self {
            start_year: self.start_year + 1,
            values: self.values.windows(2).map(|w| w[1] - w[0]).collect(),
            unit,
            label: format!("difference of {}", self.label),
        })
    }

    /// `ln(s[last] / s[first])` for a level series.
    pub fn log_total_change(&self) -> Result<f64> {
        if self.values.len() < 2 {
            return Err(Error::SeriesTooShort(format!(
                "log change of '{}' needs at least 2 points",
                self.label
            )));
        }
        let first = self.values[0];
        let last = self.values[self.values.len() - 1];
        if first <= 0.0 || last <= 0.0 {
            return Err(Error::InvariantViolation(format!(
                "log change needs positive endpoints, got {first} and {last}"
            )));
        }
        Ok((last / first).ln())
    }

    /// Pointwise map that keeps the domain.
    pub fn map(
        &self,
        unit: Unit,
        label: impl Into<String>,
        mut f: impl FnMut(f64) -> f64,
    ) -> Result<Self> {
        Self::new(
            self.start_year,
            self.values.iter().map(|&v| f(v)).collect(),
            unit,
            label,
        )
    }

    /// Combines two series over their common years.
    pub fn zip_with(
        &self,
        other: &AnnualSeries,
        unit: Unit,
        label: impl Into<String>,
        mut f: impl FnMut(f64, f64) -> f64,
    ) -> Result<Self> {
        let (a, b) = align(self, other)?;
        let values = a
            .values
            .iter()
            .zip(&b.values)
            .map(|(&x, &y)| f(x, y))
            .collect();
        Self::new(a.start_year, values, unit, label)
    }
}

/// Restricts both series to the intersection of their year domains.
pub fn align(a: &AnnualSeries, b: &AnnualSeries) -> Result<(AnnualSeries, AnnualSeries)> {
    let from = a.start_year.max(b.start_year);
    let to = a.end_year().min(b.end_year());
    if from > to {
        return Err(Error::DisjointDomains(format!(
            "'{}' covers {}-{}, '{}' covers {}-{}",
            a.label,
            a.start_year,
            a.end_year(),
            b.label,
            b.start_year,
            b.end_year()
        )));
    }
    Ok((a.slice(from, to)?, b.slice(from, to)?))
}
