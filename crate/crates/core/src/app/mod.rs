//! Data files, country manifests, projections, replication reports and
//! charts: the pieces a front end strings together.

pub mod io;
pub mod manifest;
pub mod plot;
pub mod project;
pub mod replicate;

pub use io::{
    load_csv, load_series, parse_series_csv, save_series, series_to_csv, LoadedSeries, SeriesFile,
    SeriesMeasure, SeriesRole,
};
pub use manifest::{CountryManifest, KnownBreak, LoadedManifest};
pub use plot::{emit_plot, render_svg};
pub use project::{project, ProjectionScenario};
pub use replicate::{
    replicate, Check, Comparison, Metric, ModelReplication, PublishedTarget, Replication, PUBLISHED,
};
