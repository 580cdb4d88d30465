//! Plain-text registry table: one `|`-separated row per model segment.
//!
//! Numbers are written with the shortest decimal that parses back to the same
//! `f64`, so export followed by import is bit exact.

use super::registry::{CountryModel, CountryModelEntry, ModelRecord, Registry, Variant};
use super::{
    Measure, ModelSegment, PhillipsCurve, PiecewiseModel, Smoothing, SmoothingTarget, Target,
};
use crate::error::{Error, Result};

pub const HEADER: &str = "country|variant|model|kind|target|measure|segment|lf_coeff|lf_lag|ue_coeff|ue_lag|pi_coeff|pi_lag|intercept|valid_from|valid_to|smoothing|compare_smoothing|note";
const COLUMNS: usize = 19;

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn smoothing_cell(s: Option<Smoothing>) -> String {
    match s {
        None => String::new(),
        Some(s) => {
            let what = match s.applied_to {
                SmoothingTarget::Predictor => "predictor",
                SmoothingTarget::Prediction => "prediction",
            };
            format!("{}:{what}", s.window)
        }
    }
}

fn check_cell(text: &str) -> Result<&str> {
    if text.contains('|') || text.contains('\n') {
        return Err(Error::InvalidConfig(format!(
            "text '{text}' cannot be stored in a registry table"
        )));
    }
    Ok(text)
}

impl Registry {
    pub fn to_table(&self) -> Result<String> {
        let mut out = String::from(HEADER);
        out.push('\n');
        for e in self.entries() {
            let mut cells = vec![String::new(); COLUMNS];
            cells[0] = check_cell(&e.country)?.to_string();
            cells[3] = "entry".into();
            cells[18] = check_cell(&e.source_note)?.to_string();
            out.push_str(&cells.join("|"));
            out.push('\n');
            for r in &e.models {
                for row in record_rows(&e.country, r)? {
                    out.push_str(&row.join("|"));
                    out.push('\n');
                }
            }
        }
        Ok(out)
    }

    pub fn from_table(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h == HEADER => {}
            _ => {
                return Err(Error::Parse {
                    line: 1,
                    message: "registry table header mismatch".into(),
                })
            }
        }
        let mut entries: Vec<CountryModelEntry> = Vec::new();
        for (i, line) in lines {
            let lineno = i as u64 + 1;
            if line.trim().is_empty() {
                continue;
            }
            let cells: Vec<&str> = line.split('|').collect();
            if cells.len() != COLUMNS {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("expected {COLUMNS} columns, found {}", cells.len()),
                });
            }
            let row = Row {
                cells,
                line: lineno,
            };
            let country = row.cells[0];
            if row.cells[3] == "entry" {
                entries.push(CountryModelEntry {
                    country: country.to_string(),
                    models: Vec::new(),
                    source_note: row.cells[18].to_string(),
                });
                continue;
            }
            let entry = entries
                .last_mut()
                .filter(|e| e.country == country)
                .ok_or_else(|| row.err("model row before its country entry row"))?;
            row.apply(entry)?;
        }
        Registry::new(entries)
    }
}

fn record_rows(country: &str, r: &ModelRecord) -> Result<Vec<Vec<String>>> {
    let note = check_cell(&r.note)?.to_string();
    let mut rows = Vec::new();
    match &r.model {
        CountryModel::Lagged(m) => {
            for (i, s) in m.segments.iter().enumerate() {
                let mut c = vec![String::new(); COLUMNS];
                c[0] = country.to_string();
                c[1] = r.variant.as_str().into();
                c[2] = check_cell(&m.name)?.to_string();
                c[3] = "lagged".into();
                c[4] = m.target.as_str().into();
                c[5] = m.measure.as_str().into();
                c[6] = i.to_string();
                c[7] = s.lf_coeff.to_string();
                c[8] = s.lf_lag.to_string();
                c[9] = opt(s.ue_coeff);
                c[10] = opt(s.ue_lag);
                c[13] = s.intercept.to_string();
                c[14] = opt(s.valid_from);
                c[15] = opt(s.valid_to);
                c[16] = smoothing_cell(m.smoothing);
                c[17] = opt(m.comparison_smoothing);
                c[18] = note.clone();
                rows.push(c);
            }
        }
        CountryModel::Phillips(p) => {
            let mut c = vec![String::new(); COLUMNS];
            c[0] = country.to_string();
            c[1] = r.variant.as_str().into();
            c[2] = check_cell(&p.name)?.to_string();
            c[3] = "phillips".into();
            c[4] = p.dependent.as_str().into();
            c[5] = p.measure.as_str().into();
            c[6] = "0".into();
            let (coeff, lag) = match p.dependent {
                Target::Inflation => (9, 10),
                Target::Unemployment => (11, 12),
            };
            c[coeff] = p.slope.to_string();
            c[lag] = p.independent_lag.to_string();
            c[13] = p.intercept.to_string();
            c[14] = opt(p.valid_from);
            c[15] = opt(p.valid_to);
            c[18] = note;
            rows.push(c);
        }
    }
    Ok(rows)
}

struct Row<'a> {
    cells: Vec<&'a str>,
    line: u64,
}

impl<'a> Row<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            message: message.into(),
        }
    }

    fn parse<T: std::str::FromStr>(&self, col: usize) -> Result<T> {
        self.cells[col].parse().map_err(|_| {
            self.err(format!(
                "cannot parse '{}' in column {}",
                self.cells[col],
                col + 1
            ))
        })
    }

    fn parse_opt<T: std::str::FromStr>(&self, col: usize) -> Result<Option<T>> {
        if self.cells[col].is_empty() {
            Ok(None)
        } else {
            self.parse(col).map(Some)
        }
    }

    fn variant(&self) -> Result<Variant> {
        match self.cells[1] {
            "canonical" => Ok(Variant::Canonical),
            "alternate" => Ok(Variant::Alternate),
            other => Err(self.err(format!("unknown variant '{other}'"))),
        }
    }

    fn smoothing(&self) -> Result<Option<Smoothing>> {
        let cell = self.cells[16];
        if cell.is_empty() {
            return Ok(None);
        }
        let (w, what) = cell
            .split_once(':')
            .ok_or_else(|| self.err("smoothing must be window:target"))?;
        let window = w
            .parse()
            .map_err(|_| self.err(format!("bad smoothing window '{w}'")))?;
        let applied_to = match what {
            "predictor" => SmoothingTarget::Predictor,
            "prediction" => SmoothingTarget::Prediction,
            other => return Err(self.err(format!("unknown smoothing target '{other}'"))),
        };
        Ok(Some(Smoothing { window, applied_to }))
    }

    fn apply(&self, entry: &mut CountryModelEntry) -> Result<()> {
        let variant = self.variant()?;
        let name = self.cells[2].to_string();
        let target: Target = self.cells[4].parse().map_err(|_| self.err("bad target"))?;
        let measure: Measure = self.cells[5].parse().map_err(|_| self.err("bad measure"))?;
        let note = self.cells[18].to_string();
        match self.cells[3] {
            "lagged" => {
                let segment = ModelSegment {
                    lf_coeff: self.parse(7)?,
                    lf_lag: self.parse(8)?,
                    ue_coeff: self.parse_opt(9)?,
                    ue_lag: self.parse_opt(10)?,
                    intercept: self.parse(13)?,
                    valid_from: self.parse_opt(14)?,
                    valid_to: self.parse_opt(15)?,
                };
                let index: usize = self.parse(6)?;
                let existing = entry
                    .models
                    .last_mut()
                    .filter(|r| r.model.name() == name && r.variant == variant && index > 0);
                match existing {
                    Some(ModelRecord {
                        model: CountryModel::Lagged(m),
                        ..
                    }) if m.segments.len() == index => m.segments.push(segment),
                    Some(_) => return Err(self.err("segment index out of order")),
                    None if index == 0 => entry.models.push(ModelRecord {
                        variant,
                        note,
                        model: CountryModel::Lagged(PiecewiseModel {
                            name,
                            target,
                            measure,
                            segments: vec![segment],
                            smoothing: self.smoothing()?,
                            comparison_smoothing: self.parse_opt(17)?,
                        }),
                    }),
                    None => return Err(self.err("continuation segment without a first segment")),
                }
            }
            "phillips" => {
                let (coeff, lag) = match target {
                    Target::Inflation => (9, 10),
                    Target::Unemployment => (11, 12),
                };
                entry.models.push(ModelRecord {
                    variant,
                    note,
                    model: CountryModel::Phillips(PhillipsCurve {
                        name,
                        dependent: target,
                        measure,
                        slope: self.parse(coeff)?,
                        intercept: self.parse(13)?,
                        independent_lag: self.parse(lag)?,
                        valid_from: self.parse_opt(14)?,
                        valid_to: self.parse_opt(15)?,
                    }),
                });
            }
            other => return Err(self.err(format!("unknown row kind '{other}'"))),
        }
        Ok(())
    }
}
