use super::{Measure, ModelSegment, PhillipsCurve, PiecewiseModel, Smoothing, Target};
use crate::error::{Error, Result};

/// Canonical models come from the consolidated coefficient list; alternates
/// are earlier or differently-sourced estimates kept side by side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Canonical,
    Alternate,
}

impl Variant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::Canonical => "canonical",
            Variant::Alternate => "alternate",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CountryModel {
    Lagged(PiecewiseModel),
    Phillips(PhillipsCurve),
}

impl CountryModel {
    pub fn name(&self) -> &str {
        match self {
            CountryModel::Lagged(m) => &m.name,
            CountryModel::Phillips(p) => &p.name,
        }
    }

    pub fn target(&self) -> Target {
        match self {
            CountryModel::Lagged(m) => m.target,
            CountryModel::Phillips(p) => p.dependent,
        }
    }
}

impl std::fmt::Display for CountryModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CountryModel::Lagged(m) => m.fmt(f),
            CountryModel::Phillips(p) => p.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelRecord {
    pub variant: Variant,
    /// Data definition the coefficients assume.
    pub note: String,
    pub model: CountryModel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountryModelEntry {
    pub country: String,
    pub models: Vec<ModelRecord>,
    pub source_note: String,
}

impl CountryModelEntry {
    pub fn canonical(&self) -> impl Iterator<Item = &CountryModel> {
        self.models
            .iter()
            .filter(|r| r.variant == Variant::Canonical)
            .map(|r| &r.model)
    }

    pub fn lagged(&self) -> impl Iterator<Item = &PiecewiseModel> {
        self.canonical().filter_map(|m| match m {
            CountryModel::Lagged(p) => Some(p),
            _ => None,
        })
    }

    pub fn model(&self, name: &str) -> Option<&ModelRecord> {
        self.models.iter().find(|r| r.model.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Registry {
    entries: Vec<CountryModelEntry>,
}

impl Registry {
    pub fn new(entries: Vec<CountryModelEntry>) -> Result<Self> {
        for (i, e) in entries.iter().enumerate() {
            if entries[..i]
                .iter()
                .any(|o| o.country.eq_ignore_ascii_case(&e.country))
            {
                return Err(Error::InvariantViolation(format!(
                    "duplicate country '{}'",
                    e.country
                )));
            }
            for r in &e.models {
                if let CountryModel::Lagged(m) = &r.model {
                    m.validate()?;
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[CountryModelEntry] {
        &self.entries
    }

    pub fn countries(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.country.as_str())
    }

    pub fn lookup(&self, country: &str) -> Result<&CountryModelEntry> {
        let wanted = country.trim();
        self.entries
            .iter()
            .find(|e| e.country.eq_ignore_ascii_case(wanted))
            .ok_or_else(|| Error::UnknownCountry {
                name: wanted.to_string(),
                available: self.countries().collect::<Vec<_>>().join(", "),
            })
    }

    /// The ten country models shipped with the library.
    pub fn builtin() -> Self {
        Self::new(builtin_entries()).expect("built-in registry is valid")
    }
}

fn lagged(variant: Variant, note: &str, model: PiecewiseModel) -> ModelRecord {
    ModelRecord {
        variant,
        note: note.to_string(),
        model: CountryModel::Lagged(model),
    }
}

fn simple(
    name: &str,
    target: Target,
    measure: Measure,
    a: f64,
    b: f64,
    lag: u32,
) -> PiecewiseModel {
    PiecewiseModel::single(name, target, measure, ModelSegment::simple(a, b, lag))
}

fn two_piece(
    name: &str,
    target: Target,
    measure: Measure,
    left: ModelSegment,
    right: ModelSegment,
) -> PiecewiseModel {
    PiecewiseModel {
        name: name.to_string(),
        target,
        measure,
        segments: vec![left, right],
        smoothing: None,
        comparison_smoothing: None,
    }
}

#[allow(clippy::too_many_arguments)]
fn phillips(
    variant: Variant,
    note: &str,
    name: &str,
    dependent: Target,
    measure: Measure,
    slope: f64,
    intercept: f64,
    independent_lag: i32,
    valid_from: Option<i32>,
) -> ModelRecord {
    ModelRecord {
        variant,
        note: note.to_string(),
        model: CountryModel::Phillips(PhillipsCurve {
            name: name.to_string(),
            dependent,
            measure,
            slope,
            intercept,
            independent_lag,
            valid_from,
            valid_to: None,
        }),
    }
}

fn entry(country: &str, source_note: &str, models: Vec<ModelRecord>) -> CountryModelEntry {
    CountryModelEntry {
        country: country.to_string(),
        models,
        source_note: source_note.to_string(),
    }
}

fn builtin_entries() -> Vec<CountryModelEntry> {
    use Measure::*;
    use Target::*;
    use Variant::*;

    let gen = ModelSegment::generalized;
    let seg = ModelSegment::simple;

    vec![
        entry(
            "Austria",
            "GDP deflator with national labor force; break in measurement units after 1986",
            vec![
                lagged(
                    Canonical,
                    "consolidated list",
                    two_piece(
                        "inflation-generalized",
                        Inflation,
                        Dgdp,
                        gen(1.2, -1.0, 0.066, 0, 0).valid(Some(1965), Some(1986)),
                        gen(0.9, -1.0, 0.0074, 0, 0).valid(Some(1987), None),
                    ),
                ),
                lagged(
                    Alternate,
                    "GDP deflator from national statistics, fitted on cumulative curves 1960-2003",
                    two_piece(
                        "inflation-dgdp-1960-2003",
                        Inflation,
                        Dgdp,
                        seg(2.0, 0.033, 0).valid(None, Some(1986)),
                        seg(1.25, 0.0075, 0).valid(Some(1987), None),
                    ),
                ),
                lagged(
                    Alternate,
                    "AMS labor force and unemployment; C2 pinned at -1.0",
                    two_piece(
                        "inflation-generalized-ams",
                        Inflation,
                        Dgdp,
                        gen(1.1, -1.0, 0.068, 0, 0).valid(None, Some(1986)),
                        gen(0.8, -1.0, 0.077, 0, 0).valid(Some(1987), None),
                    ),
                ),
            ],
        ),
        entry(
            "Canada",
            "CPI inflation and national unemployment",
            vec![
                lagged(Canonical, "consolidated list", simple("unemployment", Unemployment, UeNational, -2.1, 0.12, 0)),
                lagged(Canonical, "consolidated list", simple("inflation", Inflation, Cpi, 2.58, -0.043, 2)),
                lagged(
                    Canonical,
                    "consolidated list",
                    PiecewiseModel::single("inflation-generalized", Inflation, Cpi, gen(3.8, 0.79, -0.098, 2, 2)),
                ),
                lagged(
                    Alternate,
                    "model description prints A2 = -0.0043 (R2 = 0.67); consolidated list prints -0.043",
                    simple("inflation-early", Inflation, Cpi, 2.58, -0.0043, 2),
                ),
            ],
        ),
        entry(
            "France",
            "generalized model; unemployment leads inflation by four years",
            vec![lagged(
                Canonical,
                "consolidated list",
                PiecewiseModel::single("inflation-generalized", Inflation, Unspecified, gen(4.0, -1.0, 0.095, 4, 4)),
            )],
        ),
        entry(
            "Germany",
            "single model across reunification; CPI inflation",
            vec![
                lagged(Canonical, "consolidated list", simple("inflation", Inflation, Cpi, -1.71, 0.041, 6)),
                lagged(Canonical, "consolidated list", simple("unemployment", Unemployment, Unspecified, 2.5, 0.04, 5)),
                phillips(
                    Canonical,
                    "consolidated list; UE(t-1) = -1.50 pi(t) + 0.116 for t > 1971",
                    "phillips-unemployment",
                    Unemployment,
                    Dgdp,
                    -1.5,
                    0.116,
                    -1,
                    Some(1971),
                ),
                lagged(
                    Canonical,
                    "consolidated list",
                    PiecewiseModel::single("inflation-generalized", Inflation, Cpi, gen(-0.3, 0.59, 0.072, 6, 1)),
                ),
            ],
        ),
        entry(
            "Italy",
            "BLS/OECD series; labor-force growth smoothed with centered MA(5)",
            vec![lagged(
                Canonical,
                "consolidated list",
                PiecewiseModel::single(
                    "unemployment",
                    Unemployment,
                    Unspecified,
                    seg(3.0, 0.085, 11).valid(Some(1969), None),
                )
                .with_smoothing(Smoothing::predictor(5)),
            )],
        ),
        entry(
            "Japan",
            "GDP deflator",
            vec![
                lagged(Canonical, "consolidated list", simple("unemployment", Unemployment, Unspecified, -1.5, 0.045, 0)),
                lagged(Canonical, "consolidated list", simple("inflation", Inflation, Dgdp, 1.77, -0.0035, 0)),
                lagged(
                    Alternate,
                    "model description prints A1 = 1.31, A2 = 0.0007",
                    simple("inflation-early", Inflation, Dgdp, 1.31, 0.0007, 0),
                ),
            ],
        ),
        entry(
            "Netherlands",
            "OECD GDP deflator and national unemployment",
            vec![
                lagged(Canonical, "consolidated list", simple("inflation", Inflation, Dgdp, 3.5, -0.03, 3)),
                lagged(
                    Canonical,
                    "consolidated list; prediction smoothed with MA(5)",
                    PiecewiseModel::single("inflation-generalized", Inflation, Dgdp, gen(3.5, -0.48, 0.006, 3, 3))
                        .with_smoothing(Smoothing::prediction(5)),
                ),
            ],
        ),
        entry(
            "Sweden",
            "national and US-definition series nearly coincide; step in 1993",
            vec![
                phillips(
                    Canonical,
                    "consolidated list",
                    "phillips-inflation",
                    Inflation,
                    Unspecified,
                    1.15,
                    0.11,
                    0,
                    None,
                ),
                lagged(Canonical, "consolidated list", simple("unemployment", Unemployment, Unspecified, -6.0, 0.069, 2)),
                lagged(Canonical, "consolidated list", simple("inflation", Inflation, Unspecified, 5.0, 0.044, 2)),
                lagged(
                    Canonical,
                    "consolidated list; labor force smoothed with MA(7), inflation compared with MA(5)",
                    PiecewiseModel::single("inflation-generalized", Inflation, Unspecified, gen(5.0, -0.5, 0.006, 2, 0))
                        .with_smoothing(Smoothing::predictor(7))
                        .with_comparison_smoothing(5),
                ),
            ],
        ),
        entry(
            "Switzerland",
            "OECD CPI; unemployment only from 1991; break in measurement units after 1986",
            vec![
                phillips(
                    Canonical,
                    "consolidated list",
                    "phillips-unemployment",
                    Unemployment,
                    Cpi,
                    -1.0,
                    0.04,
                    0,
                    None,
                ),
                lagged(
                    Canonical,
                    "consolidated list; prediction smoothed with MA(3)",
                    two_piece(
                        "inflation",
                        Inflation,
                        Cpi,
                        seg(2.0, 0.005, 2).valid(None, Some(1986)),
                        seg(1.1, 0.055, 2).valid(Some(1987), None),
                    )
                    .with_smoothing(Smoothing::prediction(3)),
                ),
            ],
        ),
        entry(
            "United States",
            "GDP deflator for the canonical inflation model; US-definition unemployment",
            vec![
                lagged(
                    Canonical,
                    "consolidated list; compared with measured MA(5) and predicted MA(3)",
                    simple("unemployment", Unemployment, UeUsDefinition, 2.1, -0.023, 5)
                        .with_smoothing(Smoothing::prediction(3))
                        .with_comparison_smoothing(5),
                ),
                lagged(Canonical, "consolidated list", simple("inflation", Inflation, Dgdp, 4.0, -0.03, 2)),
                lagged(
                    Alternate,
                    "CPI inflation fitted on cumulative curves 1965-2006",
                    simple("inflation-cpi-1965-2006", Inflation, Cpi, 4.5, -0.031, 2),
                ),
            ],
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_countries() {
        let r = Registry::builtin();
        let names: Vec<_> = r.countries().collect();
        assert_eq!(
            names,
            [
                "Austria",
                "Canada",
                "France",
                "Germany",
                "Italy",
                "Japan",
                "Netherlands",
                "Sweden",
                "Switzerland",
                "United States"
            ]
        );
    }

    #[test]
    fn italy_entry() {
        let r = Registry::builtin();
        let italy = r.lookup("Italy").unwrap();
        let m: Vec<_> = italy.lagged().collect();
        assert_eq!(m.len(), 1);
        let m = m[0];
        assert_eq!(m.target, Target::Unemployment);
        assert_eq!(m.segments[0].lf_coeff, 3.0);
        assert_eq!(m.segments[0].intercept, 0.085);
        assert_eq!(m.segments[0].lf_lag, 11);
        assert_eq!(m.segments[0].valid_from, Some(1969));
        assert_eq!(m.smoothing, Some(Smoothing::predictor(5)));
    }

    #[test]
    fn united_states_entry() {
        let r = Registry::builtin();
        let us = r.lookup("united states").unwrap();
        let by_target =
            |t: Target| us.lagged().find(|m| m.target == t).unwrap().segments[0].clone();
        let pi = by_target(Target::Inflation);
        assert_eq!((pi.lf_coeff, pi.intercept, pi.lf_lag), (4.0, -0.03, 2));
        let ue = by_target(Target::Unemployment);
        assert_eq!((ue.lf_coeff, ue.intercept, ue.lf_lag), (2.1, -0.023, 5));
        let alt = us.model("inflation-cpi-1965-2006").unwrap();
        assert_eq!(alt.variant, Variant::Alternate);
    }

    #[test]
    fn unknown_country_lists_names() {
        match Registry::builtin().lookup("Atlantis") {
            Err(Error::UnknownCountry { name, available }) => {
                assert_eq!(name, "Atlantis");
                assert!(available.contains("Italy"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rendering() {
        let r = Registry::builtin();
        let austria = r.lookup("Austria").unwrap();
        let text = austria.canonical().next().unwrap().to_string();
        assert_eq!(
            text,
            "pi(t) = 1.2*dLF(t)/LF(t) - 1*UE(t) + 0.066; 1965 <= t <= 1986\n\
             pi(t) = 0.9*dLF(t)/LF(t) - 1*UE(t) + 0.0074; t >= 1987"
        );
        let germany = r.lookup("Germany").unwrap();
        let pc = germany
            .model("phillips-unemployment")
            .unwrap()
            .model
            .to_string();
        assert_eq!(pc, "UE(t) = -1.5*pi(t+1) + 0.116; t >= 1971");
    }

    #[test]
    fn duplicate_countries_rejected() {
        let mut e = builtin_entries();
        let dup = e[0].clone();
        e.push(dup);
        assert!(Registry::new(e).is_err());
    }
}
