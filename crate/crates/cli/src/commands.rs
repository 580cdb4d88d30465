use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use lfcurve::app::io::write_file;
use lfcurve::app::{
    emit_plot, load_csv, project, replicate, series_to_csv, CountryManifest, ProjectionScenario,
};
use lfcurve::diagnostics::{RejectionStudy, SimulatedProcess};
use lfcurve::{
    align, eval_piecewise, fit_cumulative, fit_generalized, residual_report_with, AnnualSeries,
    CountryModel, Deterministic, Error, FitConfig, Level, Objective, Pins, Registry,
    ResidualTestConfig, Result, Target, Unit, UnitRootTest,
};

use crate::{
    Cli, Command, DiagnoseArgs, FitArgs, ModelArgs, PredictArgs, ProjectArgs, RegistryArgs,
    ReplicateArgs, SeriesArgs,
};

struct Output {
    dir: Option<PathBuf>,
    svg: bool,
}

impl Output {
    fn new(dir: Option<PathBuf>, svg: bool) -> Result<Self> {
        if svg && dir.is_none() {
            return Err(usage("--svg needs --out-dir"));
        }
        Ok(Self { dir, svg })
    }

    fn csv(&self, name: &str, contents: &str) -> Result<()> {
        match &self.dir {
            Some(d) => write_file(&d.join(name), contents),
            None => Ok(()),
        }
    }

    fn plot(&self, name: &str, title: &str, series: &[AnnualSeries]) -> Result<()> {
        match &self.dir {
            Some(d) if self.svg => emit_plot(title, series, &d.join(name)),
            _ => Ok(()),
        }
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidConfig(msg.into())
}

pub fn run(cli: Cli) -> Result<String> {
    let out = Output::new(cli.out_dir, cli.svg)?;
    match cli.command {
        Command::Fit(a) => fit(a, &out),
        Command::Predict(a) => predict(a, &out),
        Command::Diagnose(a) => diagnose(a, &out),
        Command::Replicate(a) => replicate_cmd(a, &out),
        Command::Project(a) => project_cmd(a, &out),
        Command::Registry(a) => registry(a),
    }
}

/// `a..b`, `a-b` or a single number.
fn parse_range<T: std::str::FromStr + Copy>(s: &str, what: &str) -> Result<(T, T)> {
    let bad = || {
        usage(format!(
            "invalid {what} '{s}' (expected a..b or a single value)"
        ))
    };
    let parts: Vec<&str> = if s.contains("..") {
        s.splitn(2, "..").collect()
    } else if let Some(i) = s.get(1..).and_then(|t| t.find('-')) {
        // A leading minus belongs to the first number.
        vec![&s[..=i], &s[i + 2..]]
    } else {
        vec![s, s]
    };
    let lo = parts[0].trim().parse().map_err(|_| bad())?;
    let hi = parts[1].trim().parse().map_err(|_| bad())?;
    Ok((lo, hi))
}

fn read(path: &Path, unit: Unit, warnings: &mut String) -> Result<AnnualSeries> {
    let loaded = load_csv(path, unit)?;
    for w in loaded.warnings {
        let _ = writeln!(warnings, "warning: {w}");
    }
    Ok(loaded.series)
}

fn require(p: &Option<PathBuf>, flag: &str) -> Result<PathBuf> {
    p.clone()
        .ok_or_else(|| usage(format!("{flag} is required")))
}

fn load_registry(path: &Option<PathBuf>) -> Result<Registry> {
    match path {
        None => Ok(Registry::builtin()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Error::Io {
                path: p.display().to_string(),
                source: e,
            })?;
            Registry::from_table(&text)
        }
    }
}

fn pick_model(reg: &Registry, args: &ModelArgs) -> Result<CountryModel> {
    let entry = reg.lookup(&args.country)?;
    match &args.model {
        Some(name) => entry.model(name).map(|r| r.model.clone()).ok_or_else(|| {
            let names: Vec<&str> = entry.models.iter().map(|r| r.model.name()).collect();
            usage(format!(
                "{} has no model '{name}'; available: {}",
                entry.country,
                names.join(", ")
            ))
        }),
        None => entry
            .canonical()
            .next()
            .cloned()
            .ok_or_else(|| usage(format!("{} has no canonical model", entry.country))),
    }
}

/// Evaluates a registry model: lagged models on the labor force, Phillips
/// curves on the opposite rate.
fn evaluate(m: &CountryModel, series: &SeriesArgs, notes: &mut String) -> Result<AnnualSeries> {
    match m {
        CountryModel::Lagged(p) => {
            let lf = read(&require(&series.lf, "--lf")?, Unit::Count, notes)?;
            let ue = match &series.ue {
                Some(u) if p.is_generalized() => Some(read(u, Unit::RatePerYear, notes)?),
                _ => None,
            };
            eval_piecewise(p, &lf, ue.as_ref(), None)
        }
        CountryModel::Phillips(c) => {
            let (path, flag) = match c.independent() {
                Target::Inflation => (&series.inflation, "--inflation"),
                Target::Unemployment => (&series.ue, "--ue"),
            };
            let x = read(&require(path, flag)?, Unit::RatePerYear, notes)?;
            c.eval(&x)
        }
    }
}

fn fit(a: FitArgs, out: &Output) -> Result<String> {
    let mut text = String::new();
    let target: Target = match (&a.target, &a.series.inflation) {
        (Some(t), _) => t.parse()?,
        (None, Some(_)) => Target::Inflation,
        (None, None) => Target::Unemployment,
    };
    let lf = read(&require(&a.series.lf, "--lf")?, Unit::Count, &mut text)?;
    let measured_path = match target {
        Target::Inflation => require(&a.series.inflation, "--inflation")?,
        Target::Unemployment => {
            if a.generalized {
                return Err(usage("--generalized fits inflation; pass --inflation"));
            }
            require(&a.series.ue, "--ue")?
        }
    };
    let measured = read(&measured_path, Unit::RatePerYear, &mut text)?;
    let cfg = FitConfig {
        lag_range: parse_range(&a.lag_range, "lag range")?,
        ue_lag_range: parse_range(&a.ue_lag_range, "unemployment lag range")?,
        break_candidates: (!a.breaks.is_empty()).then(|| a.breaks.clone()),
        objective: a.objective.parse::<Objective>()?,
        smoothing: a.smooth,
        eval_range: a
            .eval_range
            .as_deref()
            .map(|r| parse_range(r, "evaluation range"))
            .transpose()?,
        allow_short: a.allow_short,
        pins: Pins {
            ue_coeff: a.pin_ue,
            ..Pins::default()
        },
        target,
        ..FitConfig::default()
    };
    let report = if a.generalized {
        let ue = read(
            &require(&a.series.ue, "--ue")?,
            Unit::RatePerYear,
            &mut text,
        )?;
        fit_generalized(&measured, &lf, &ue, &cfg)?
    } else {
        fit_cumulative(&measured, &lf, &cfg)?
    };
    text.push_str(&report.to_text());
    out.csv("fit.csv", &report.to_csv())?;
    let (y0, y1) = report.evaluation_years();
    let measured = measured.slice(y0, y1)?.with_label("measured");
    let predicted = measured.zip_with(
        &report.residual_dynamic,
        Unit::RatePerYear,
        "predicted",
        |m, r| m - r,
    )?;
    out.csv("predicted.csv", &series_to_csv(&predicted))?;
    out.plot(
        "fit.svg",
        &format!("{} fit", target.as_str()),
        &[measured, predicted],
    )?;
    Ok(text)
}

fn predict(a: PredictArgs, out: &Output) -> Result<String> {
    let reg = load_registry(&a.model.registry)?;
    let m = pick_model(&reg, &a.model)?;
    let mut notes = String::new();
    let predicted = evaluate(&m, &a.series, &mut notes)?;
    eprint!("{notes}");
    let csv = series_to_csv(&predicted);
    out.csv("predicted.csv", &csv)?;
    out.plot(
        "predicted.svg",
        &format!("{} {}", a.model.country, m.name()),
        &[predicted.with_label(m.name())],
    )?;
    Ok(csv)
}

fn diagnose(a: DiagnoseArgs, out: &Output) -> Result<String> {
    let mut text = String::new();
    let measured = read(
        &require(&a.measured, "--measured")?,
        Unit::RatePerYear,
        &mut text,
    )?;
    let predicted = match (&a.predicted, &a.country) {
        (Some(p), None) => read(p, Unit::RatePerYear, &mut text)?,
        (None, Some(c)) => {
            let args = ModelArgs {
                country: c.clone(),
                model: a.model.clone(),
                registry: None,
            };
            let m = pick_model(&Registry::builtin(), &args)?;
            evaluate(&m, &a.series, &mut text)?
        }
        _ => return Err(usage("pass exactly one of --predicted or --country")),
    };
    let (measured, predicted) = align(&measured, &predicted)?;
    let cfg = ResidualTestConfig {
        test: a.test.parse::<UnitRootTest>()?,
        max_lag: a.max_lag,
        deterministic: a.deterministic.parse::<Deterministic>()?,
        ..ResidualTestConfig::default()
    };
    let report = residual_report_with(&measured, &predicted, &cfg)?;
    let _ = writeln!(
        text,
        "years: {}-{} ({} points)",
        measured.start_year(),
        measured.end_year(),
        measured.len()
    );
    text.push_str(&report.to_text());
    out.csv("dynamic_diff.csv", &series_to_csv(&report.dynamic_diff))?;
    out.csv(
        "cumulative_diff.csv",
        &series_to_csv(&report.cumulative_diff),
    )?;
    if let Some(rel) = &report.relative_diff {
        out.csv("relative_diff.csv", &series_to_csv(rel))?;
    }
    out.plot(
        "cumulative.svg",
        "cumulative curves",
        &[
            measured.cumulative_sum().with_label("measured"),
            predicted.cumulative_sum().with_label("predicted"),
        ],
    )?;
    if let Some(seed) = a.seed {
        let study = |process, seed| RejectionStudy {
            test: cfg.test,
            process,
            n: measured.len(),
            max_lag: cfg.max_lag,
            deterministic: cfg.deterministic,
            level: Level::Five,
            replications: a.replications,
            seed,
        };
        let size = study(SimulatedProcess::RandomWalk, seed).rejection_rate()?;
        let power =
            study(SimulatedProcess::Ar1(0.5), seed.wrapping_add(1 << 32)).rejection_rate()?;
        let _ = writeln!(
            text,
            "monte carlo ({} replications, n {}, seed {seed}): size at 5% = {size:.3}, power vs AR(0.5) = {power:.3}",
            a.replications,
            measured.len()
        );
    }
    Ok(text)
}

fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn replicate_cmd(a: ReplicateArgs, out: &Output) -> Result<String> {
    let manifest = CountryManifest::load(&a.manifest)?;
    if !manifest.country.eq_ignore_ascii_case(a.country.trim()) {
        return Err(usage(format!(
            "manifest describes {} but {} was requested",
            manifest.country, a.country
        )));
    }
    let reg = load_registry(&a.registry)?;
    let data = manifest.load_data()?;
    let rep = replicate(&reg, &data)?;
    for m in &rep.models {
        let stem = file_stem(&m.model);
        let mut csv = String::from("year,measured,predicted\n");
        for ((y, mv), (_, pv)) in m.measured.iter().zip(m.predicted.iter()) {
            let _ = writeln!(csv, "{y},{mv},{pv}");
        }
        out.csv(&format!("{stem}.csv"), &csv)?;
        if let Some(fit) = &m.fit {
            out.csv(&format!("{stem}_fit.csv"), &fit.to_csv())?;
        }
        out.plot(
            &format!("{stem}.svg"),
            &format!("{} {}", rep.country, m.model),
            &[
                m.measured.clone().with_label("measured"),
                m.predicted.clone().with_label("predicted"),
            ],
        )?;
    }
    Ok(rep.to_text())
}

fn project_cmd(a: ProjectArgs, out: &Output) -> Result<String> {
    let reg = load_registry(&a.model.registry)?;
    let CountryModel::Lagged(model) = pick_model(&reg, &a.model)? else {
        return Err(usage("projections need a lagged labor-force model"));
    };
    let mut notes = String::new();
    let lf = read(&require(&a.series.lf, "--lf")?, Unit::Count, &mut notes)?;
    let ue = a
        .series
        .ue
        .as_ref()
        .map(|u| read(u, Unit::RatePerYear, &mut notes))
        .transpose()?;
    eprint!("{notes}");
    let scenario = ProjectionScenario {
        name: a.name.clone(),
        lf_projection: lf,
        model,
        ue,
        history_end: a.history_end,
    };
    let projected = project(&scenario)?;
    let csv = series_to_csv(&projected);
    out.csv("projection.csv", &csv)?;
    out.plot(
        "projection.svg",
        &format!("{} projection", a.model.country),
        &[projected],
    )?;
    Ok(csv)
}

fn registry(a: RegistryArgs) -> Result<String> {
    let reg = load_registry(&a.import)?;
    if let Some(path) = &a.export {
        write_file(path, &reg.to_table()?)?;
    }
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<14} {:<26} {:<10} model",
        "country", "name", "variant"
    );
    for e in reg.entries() {
        for r in &e.models {
            let eq = r.model.to_string().replace('\n', "; ");
            let _ = writeln!(
                s,
                "{:<14} {:<26} {:<10} {eq}",
                e.country,
                r.model.name(),
                r.variant.as_str()
            );
        }
    }
    let _ = writeln!(s, "{} countries", reg.entries().len());
    Ok(s)
}
