//! Two-column `year,value` CSV files.
//!
//! Reading accepts empty values only at the edges of the file; those rows are
//! dropped and reported as warnings. Writing is canonical: `\n` line endings
//! and the shortest decimal that reads back to the same `f64`.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::models::Target;
use crate::timeseries::{AnnualSeries, Unit};

pub const CSV_HEADER: &str = "year,value";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesRole {
    LaborForce,
    Unemployment,
    Inflation,
}

impl SeriesRole {
    pub fn as_str(&self) -> &'static str {
        match self {
            SeriesRole::LaborForce => "labor_force",
            SeriesRole::Unemployment => "unemployment",
            SeriesRole::Inflation => "inflation",
        }
    }

    /// Levels for the labor force, annual fractions otherwise.
    pub fn unit(&self) -> Unit {
        match self {
            SeriesRole::LaborForce => Unit::Count,
            _ => Unit::RatePerYear,
        }
    }

    pub fn for_target(t: Target) -> Self {
        match t {
            Target::Inflation => SeriesRole::Inflation,
            Target::Unemployment => SeriesRole::Unemployment,
        }
    }
}

impl fmt::Display for SeriesRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SeriesRole {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "labor_force" => Ok(SeriesRole::LaborForce),
            "unemployment" => Ok(SeriesRole::Unemployment),
            "inflation" => Ok(SeriesRole::Inflation),
            other => Err(Error::Manifest(format!(
                "unknown series role '{other}' (labor_force, unemployment, inflation)"
            ))),
        }
    }
}

/// Statistical source or definition of a data file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesMeasure {
    Cpi,
    Dgdp,
    Nac,
    UsDefinition,
    Ams,
    Eurostat,
    Oecd,
}

impl SeriesMeasure {
    pub fn as_str(&self) -> &'static str {
        match self {
            SeriesMeasure::Cpi => "CPI",
            SeriesMeasure::Dgdp => "DGDP",
            SeriesMeasure::Nac => "NAC",
            SeriesMeasure::UsDefinition => "US-definition",
            SeriesMeasure::Ams => "AMS",
            SeriesMeasure::Eurostat => "Eurostat",
            SeriesMeasure::Oecd => "OECD",
        }
    }
}

impl fmt::Display for SeriesMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SeriesMeasure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "CPI" => SeriesMeasure::Cpi,
            "DGDP" => SeriesMeasure::Dgdp,
            "NAC" => SeriesMeasure::Nac,
            "US-definition" => SeriesMeasure::UsDefinition,
            "AMS" => SeriesMeasure::Ams,
            "Eurostat" => SeriesMeasure::Eurostat,
            "OECD" => SeriesMeasure::Oecd,
            other => {
                return Err(Error::Manifest(format!(
                    "unknown measure '{other}' (CPI, DGDP, NAC, US-definition, AMS, Eurostat, OECD)"
                )))
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesFile {
    pub path: PathBuf,
    pub role: SeriesRole,
    pub measure: SeriesMeasure,
}

impl SeriesFile {
    pub fn unit(&self) -> Unit {
        self.role.unit()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedSeries {
    pub series: AnnualSeries,
    /// One message per dropped edge row.
    pub warnings: Vec<String>,
}

fn parse_err(line: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses CSV text; `label` names the series in messages.
pub fn parse_series_csv(text: &str, unit: Unit, label: &str) -> Result<LoadedSeries> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows: Vec<(u64, i32, Option<f64>)> = Vec::new();
    let mut saw_header = false;
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if !saw_header {
            if record.len() != 2 || &record[0] != "year" || &record[1] != "value" {
                return Err(parse_err(
                    line,
                    format!("header must be exactly '{CSV_HEADER}'"),
                ));
            }
            saw_header = true;
            continue;
        }
        if record.len() != 2 {
            return Err(parse_err(
                line,
                format!("expected 2 fields, found {}", record.len()),
            ));
        }
        let year: i32 = record[0]
            .parse()
            .map_err(|_| parse_err(line, format!("invalid year '{}'", &record[0])))?;
        let value = match &record[1] {
            "" => None,
            v => {
                let x: f64 = v
                    .parse()
                    .map_err(|_| parse_err(line, format!("invalid value '{v}'")))?;
                if !x.is_finite() {
                    return Err(parse_err(line, format!("non-finite value '{v}'")));
                }
                Some(x)
            }
        };
        if let Some(&(_, prev, _)) = rows.last() {
            if year <= prev {
                return Err(parse_err(
                    line,
                    format!("year {year} does not follow {prev}"),
                ));
            }
            if year > prev + 1 {
                return Err(Error::MissingYear(prev + 1));
            }
        }
        rows.push((line, year, value));
    }
    if !saw_header {
        return Err(parse_err(
            1,
            format!("empty file; expected header '{CSV_HEADER}'"),
        ));
    }
    let first = rows.iter().position(|r| r.2.is_some());
    let last = rows.iter().rposition(|r| r.2.is_some());
    let (Some(first), Some(last)) = (first, last) else {
        return Err(Error::InsufficientData(format!(
            "'{label}' contains no values"
        )));
    };
    if let Some(gap) = rows[first..=last].iter().find(|r| r.2.is_none()) {
        return Err(Error::MissingYear(gap.1));
    }
    let warnings = rows[..first]
        .iter()
        .chain(&rows[last + 1..])
        .map(|r| format!("{label}: line {}: year {} has no value; dropped", r.0, r.1))
        .collect();
    let values = rows[first..=last].iter().map(|r| r.2.unwrap()).collect();
    let series = AnnualSeries::new(rows[first].1, values, unit, label).map_err(|e| match e {
        Error::InvariantViolation(m) => Error::InvariantViolation(format!("{label}: {m}")),
        other => other,
    })?;
    Ok(LoadedSeries { series, warnings })
}

pub fn load_csv(path: &Path, unit: Unit) -> Result<LoadedSeries> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let label = path
        .file_stem()
        .map_or_else(|| "series".into(), |s| s.to_string_lossy().into_owned());
    parse_series_csv(&text, unit, &label).map_err(|e| match e {
        Error::Parse { line, message } => Error::Parse {
            line,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

pub fn load_series(f: &SeriesFile) -> Result<LoadedSeries> {
    let mut loaded = load_csv(&f.path, f.unit())?;
    let label = format!("{} ({})", f.role, f.measure);
    loaded.series = loaded.series.with_label(label);
    Ok(loaded)
}

pub fn series_to_csv(s: &AnnualSeries) -> String {
    let mut out = String::with_capacity(16 * (s.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (y, v) in s.iter() {
        out.push_str(&format!("{y},{v}\n"));
    }
    out
}

pub fn save_series(path: &Path, s: &AnnualSeries) -> Result<()> {
    write_file(path, &series_to_csv(s))
}

/// Writes `contents`, creating parent directories.
pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}
