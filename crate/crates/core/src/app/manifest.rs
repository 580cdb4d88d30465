//! Country manifests: which data files to use for a country.
//!
//! ```text
//! # comment
//! country=Italy
//! series=labor_force,OECD,italy_lf.csv
//! series=unemployment,OECD,italy_ue.csv
//! break=1992,new survey design
//! ```
//!
//! Relative paths are resolved against the manifest's directory.

use std::fs;
use std::path::{Path, PathBuf};

use super::io::{load_series, LoadedSeries, SeriesFile, SeriesMeasure, SeriesRole};
use crate::error::{Error, Result};
use crate::timeseries::AnnualSeries;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnownBreak {
    pub year: i32,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountryManifest {
    pub country: String,
    pub series: Vec<SeriesFile>,
    pub breaks: Vec<KnownBreak>,
}

/// Manifest with every series loaded.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedManifest {
    pub manifest: CountryManifest,
    pub series: Vec<(SeriesFile, AnnualSeries)>,
    pub warnings: Vec<String>,
}

impl LoadedManifest {
    pub fn with_role(
        &self,
        role: SeriesRole,
    ) -> impl Iterator<Item = &(SeriesFile, AnnualSeries)> + '_ {
        self.series.iter().filter(move |(f, _)| f.role == role)
    }

    /// First series of `role` whose measure is in `preferred`, else the first of `role`.
    pub fn pick(
        &self,
        role: SeriesRole,
        preferred: &[SeriesMeasure],
    ) -> Option<&(SeriesFile, AnnualSeries)> {
        self.with_role(role)
            .find(|(f, _)| preferred.contains(&f.measure))
            .or_else(|| self.with_role(role).next())
    }
}

fn manifest_err(line: usize, message: impl std::fmt::Display) -> Error {
    Error::Manifest(format!("manifest line {line}: {message}"))
}

impl CountryManifest {
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut country = None;
        let mut series = Vec::new();
        let mut breaks = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = i + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| manifest_err(lineno, "expected key=value"))?;
            match key.trim() {
                "country" => {
                    if country.replace(value.trim().to_string()).is_some() {
                        return Err(manifest_err(lineno, "country declared twice"));
                    }
                }
                "series" => {
                    let mut parts = value.splitn(3, ',');
                    let (Some(role), Some(measure), Some(path)) =
                        (parts.next(), parts.next(), parts.next())
                    else {
                        return Err(manifest_err(
                            lineno,
                            "expected series=<role>,<measure>,<path>",
                        ));
                    };
                    let role: SeriesRole =
                        role.trim().parse().map_err(|e| manifest_err(lineno, e))?;
                    let measure: SeriesMeasure = measure
                        .trim()
                        .parse()
                        .map_err(|e| manifest_err(lineno, e))?;
                    let path = PathBuf::from(path.trim());
                    let path = if path.is_absolute() {
                        path
                    } else {
                        base_dir.join(path)
                    };
                    series.push(SeriesFile {
                        path,
                        role,
                        measure,
                    });
                }
                "break" => {
                    let (year, note) = value.split_once(',').unwrap_or((value, ""));
                    let year = year.trim().parse().map_err(|_| {
                        manifest_err(lineno, format!("invalid break year '{}'", year.trim()))
                    })?;
                    breaks.push(KnownBreak {
                        year,
                        note: note.trim().to_string(),
                    });
                }
                other => return Err(manifest_err(lineno, format!("unknown key '{other}'"))),
            }
        }
        let country =
            country.ok_or_else(|| Error::Manifest("manifest declares no country".into()))?;
        if !series.iter().any(|s| s.role == SeriesRole::LaborForce) {
            return Err(Error::Manifest("labor_force series required".into()));
        }
        Ok(Self {
            country,
            series,
            breaks,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    /// Loads every series and checks that break years fall inside the
    /// labor-force data.
    pub fn load_data(&self) -> Result<LoadedManifest> {
        let mut warnings = Vec::new();
        let mut series = Vec::new();
        for f in &self.series {
            let LoadedSeries {
                series: s,
                warnings: w,
            } = load_series(f)?;
            warnings.extend(w);
            series.push((f.clone(), s));
        }
        let (lo, hi) = series
            .iter()
            .filter(|(f, _)| f.role == SeriesRole::LaborForce)
            .fold((i32::MAX, i32::MIN), |(lo, hi), (_, s)| {
                (lo.min(s.start_year()), hi.max(s.end_year()))
            });
        if let Some(b) = self.breaks.iter().find(|b| b.year < lo || b.year > hi) {
            return Err(Error::Manifest(format!(
                "break year {} lies outside the labor force data {lo}-{hi}",
                b.year
            )));
        }
        Ok(LoadedManifest {
            manifest: self.clone(),
            series,
            warnings,
        })
    }
}
