//! Command-line front end.
//!
//! Every subcommand is a thin wrapper over the library API, so anything the
//! binary does can also be done programmatically. Exit codes: 0 on success,
//! 1 for data problems (bad feed, unknown station, failed download), 2 for
//! usage errors.

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::download::{download_inputs, parse_download_config, DownloadStatus};
use crate::error::{Error, ErrorReport};
use crate::export::{
    export_dist_fare_csv, export_geojson, export_meandist_csv, export_od_csv, export_poi_csv,
    export_stats_csv, read_metric_csv,
};
use crate::ingest::{load_feed, parse_poi_file};
use crate::model::{FeedBundle, PoiKind};
use crate::od::reachable_set;
use crate::stats::{network_fare_distribution, station_fare_distribution, summary_stats};
use crate::synth::{generate_synthetic_feed, SyntheticFeedSpec};

#[derive(Parser)]
#[command(
    name = "railfares",
    version,
    about = "Query rail fares feeds: cheapest fares, fare-budget accessibility, and exports"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FeedArgs {
    /// Feed directory holding the six canonical CSV files.
    #[arg(long, value_name = "DIR", env = "RAILFARES_FEED_DIR")]
    feed: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Load a feed, report any problems, and print its summary counts.
    Validate {
        #[command(flatten)]
        feed: FeedArgs,
    },
    /// Fetch configured remote inputs, skipping files already up to date.
    Download {
        /// Download list: name,url,destination,expected_hash per line.
        #[arg(long, value_name = "FILE")]
        config: PathBuf,
    },
    /// Export the minimum-fare origin-destination matrix as CSV.
    Od {
        #[command(flatten)]
        feed: FeedArgs,
        /// Restrict the export to one origin (CRS or NLC code).
        #[arg(long, value_name = "STATION")]
        origin: Option<String>,
        #[arg(long, value_name = "CODE", default_value = "SGL")]
        ticket: String,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        /// Worker threads; output bytes do not depend on this.
        #[arg(long, value_name = "N")]
        jobs: Option<usize>,
    },
    /// List the stations reachable from an origin within a fare budget.
    Reach {
        #[command(flatten)]
        feed: FeedArgs,
        #[arg(long, value_name = "STATION")]
        origin: String,
        /// Fare budget in pence.
        #[arg(long, value_name = "PENCE")]
        budget: u32,
        #[arg(long, value_name = "CODE", default_value = "SGL")]
        ticket: String,
    },
    /// Export mean reachable distance per origin at one budget.
    Meandist {
        #[command(flatten)]
        feed: FeedArgs,
        /// One origin; use --all for every station.
        #[arg(long, value_name = "STATION", required_unless_present = "all", conflicts_with = "all")]
        origin: Option<String>,
        /// Compute the metric for every station in the feed.
        #[arg(long)]
        all: bool,
        #[arg(long, value_name = "PENCE")]
        budget: u32,
        #[arg(long, value_name = "CODE", default_value = "SGL")]
        ticket: String,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        #[arg(long, value_name = "N")]
        jobs: Option<usize>,
    },
    /// Export POI reach counts over a ladder of fare budgets.
    Poi {
        #[command(flatten)]
        feed: FeedArgs,
        /// POI file (pois.csv layout).
        #[arg(long, value_name = "FILE")]
        poi: PathBuf,
        /// POI kind to count: HOSPITAL, EMPLOYMENT_CENTRE, or TOWN_CENTRE.
        #[arg(long, value_name = "KIND")]
        kind: String,
        /// Comma-separated, strictly ascending budgets in pence.
        #[arg(long, value_name = "PENCE", value_delimiter = ',', required = true)]
        budgets: Vec<u32>,
        /// Count POIs within this many kilometres of a reachable station.
        #[arg(long, value_name = "KM")]
        radius_km: f64,
        #[arg(long, value_name = "CODE", default_value = "SGL")]
        ticket: String,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        #[arg(long, value_name = "N")]
        jobs: Option<usize>,
    },
    /// Export summary statistics of a fare distribution.
    Stats {
        #[command(flatten)]
        feed: FeedArgs,
        /// Restrict to fares from one origin; default is the whole network.
        #[arg(long, value_name = "STATION")]
        origin: Option<String>,
        #[arg(long, value_name = "CODE", default_value = "SGL")]
        ticket: String,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Export distance-fare pairs from one origin.
    Distfare {
        #[command(flatten)]
        feed: FeedArgs,
        #[arg(long, value_name = "STATION")]
        origin: String,
        #[arg(long, value_name = "CODE", default_value = "SGL")]
        ticket: String,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Render a metric column of an exported CSV as station GeoJSON.
    Geojson {
        #[command(flatten)]
        feed: FeedArgs,
        /// Name of the metric column to pick up.
        #[arg(long, value_name = "NAME")]
        metric: String,
        /// Previously exported CSV with origin_crs plus the metric column.
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Generate a deterministic synthetic feed for benchmarks and tests.
    Synth {
        #[arg(long, value_name = "N")]
        stations: u32,
        #[arg(long, value_name = "N")]
        clusters: u32,
        #[arg(long, value_name = "N")]
        flows: u64,
        #[arg(long, value_name = "SEED")]
        seed: u64,
        #[arg(long, value_name = "N", default_value_t = 8)]
        mean_cluster_size: u32,
        /// Directory to write the feed into (created if needed).
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
}

/// A data-level failure: either a single error or a collected report.
enum CliError {
    Single(Error),
    Report(ErrorReport),
    Message(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Single(e)
    }
}

impl From<ErrorReport> for CliError {
    fn from(r: ErrorReport) -> Self {
        CliError::Report(r)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Single(e) => write!(f, "error: {e}"),
            CliError::Report(r) => write!(f, "{r}"),
            CliError::Message(m) => write!(f, "error: {m}"),
        }
    }
}

/// Runs the CLI on the given argument list and returns the process exit
/// code: 0 success, 1 data error, 2 usage error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            1
        }
    }
}

fn load(feed: &FeedArgs) -> Result<FeedBundle, CliError> {
    Ok(load_feed(&feed.feed)?)
}

fn origin_list(origin: Option<String>) -> Option<Vec<String>> {
    origin.map(|o| vec![o])
}

fn report_written(path: &PathBuf, rows: u64) {
    eprintln!("wrote {}: {} data rows", path.display(), rows);
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Validate { feed } => {
            let bundle = load(&feed)?;
            println!(
                "{} stations, {} clusters, {} flows, {} fares",
                bundle.stations().len(),
                bundle.clusters().len(),
                bundle.flows().len(),
                bundle.fare_count()
            );
            Ok(())
        }
        Command::Download { config } => {
            let entries = parse_download_config(&config)?;
            let manifest = download_inputs(&entries);
            for entry in &manifest.entries {
                match &entry.status {
                    DownloadStatus::Downloaded => println!(
                        "{}: downloaded {} bytes to {}",
                        entry.name,
                        entry.bytes.unwrap_or(0),
                        entry.destination.display()
                    ),
                    DownloadStatus::SkippedUpToDate => {
                        println!("{}: up to date at {}", entry.name, entry.destination.display())
                    }
                    DownloadStatus::Failed(reason) => {
                        println!("{}: failed: {reason}", entry.name)
                    }
                }
            }
            let failed = manifest.failed();
            if failed == 0 {
                Ok(())
            } else {
                Err(CliError::Message(format!(
                    "{failed} of {} downloads failed",
                    manifest.entries.len()
                )))
            }
        }
        Command::Od { feed, origin, ticket, out, jobs } => {
            let bundle = load(&feed)?;
            let origins = origin_list(origin);
            let rows = export_od_csv(&bundle, &ticket, origins.as_deref(), &out, jobs)?;
            report_written(&out, rows);
            Ok(())
        }
        Command::Reach { feed, origin, budget, ticket } => {
            let bundle = load(&feed)?;
            let nlcs = reachable_set(&bundle, &origin, &ticket, budget)?;
            let mut crs_codes: Vec<String> = nlcs
                .iter()
                .map(|nlc| bundle.station(nlc).map(|s| s.crs.clone()))
                .collect::<Result<_, Error>>()?;
            crs_codes.sort();
            for crs in crs_codes {
                println!("{crs}");
            }
            Ok(())
        }
        Command::Meandist { feed, origin, all: _, budget, ticket, out, jobs } => {
            let bundle = load(&feed)?;
            let origins = origin_list(origin);
            let rows = export_meandist_csv(&bundle, &ticket, budget, origins.as_deref(), &out, jobs)?;
            report_written(&out, rows);
            Ok(())
        }
        Command::Poi { feed, poi, kind, budgets, radius_km, ticket, out, jobs } => {
            let bundle = load(&feed)?;
            let kind = PoiKind::from_str(&kind).ok_or_else(|| Error::InvalidParameter {
                reason: format!(
                    "unknown POI kind {kind:?}; expected HOSPITAL, EMPLOYMENT_CENTRE, or TOWN_CENTRE"
                ),
            })?;
            let pois: Vec<_> = parse_poi_file(&poi)?.into_iter().map(|r| r.value).collect();
            let rows = export_poi_csv(
                &bundle, &pois, &ticket, &budgets, radius_km, kind, None, &out, jobs,
            )?;
            report_written(&out, rows);
            Ok(())
        }
        Command::Stats { feed, origin, ticket, out } => {
            let bundle = load(&feed)?;
            let (scope, values) = match origin {
                None => ("network".to_string(), network_fare_distribution(&bundle, &ticket)?),
                Some(key) => {
                    let crs = bundle.station(&key)?.crs.clone();
                    (crs, station_fare_distribution(&bundle, &key, &ticket)?)
                }
            };
            let stats = summary_stats(&values)?;
            export_stats_csv(&[(scope, ticket, stats)], &out)?;
            report_written(&out, 1);
            Ok(())
        }
        Command::Distfare { feed, origin, ticket, out } => {
            let bundle = load(&feed)?;
            let rows = export_dist_fare_csv(&bundle, &origin, &ticket, &out)?;
            report_written(&out, rows);
            Ok(())
        }
        Command::Geojson { feed, metric, input, out } => {
            let bundle = load(&feed)?;
            let values = read_metric_csv(&input, &metric)?;
            export_geojson(&bundle, &metric, &values, &out)?;
            report_written(&out, values.len() as u64);
            Ok(())
        }
        Command::Synth { stations, clusters, flows, seed, mean_cluster_size, out } => {
            let mut spec = SyntheticFeedSpec::new(stations, clusters, flows, seed);
            spec.mean_cluster_size = mean_cluster_size;
            generate_synthetic_feed(&spec, &out)?;
            eprintln!(
                "wrote synthetic feed to {}: {stations} stations, {clusters} clusters, {flows} flows",
                out.display()
            );
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["railfares", "no-such-command"]), 2);
        assert_eq!(run(["railfares"]), 2);
        assert_eq!(run(["railfares", "od", "--feed", "x"]), 2);
    }

    #[test]
    fn help_and_version_exit_zero() {
        assert_eq!(run(["railfares", "--help"]), 0);
        assert_eq!(run(["railfares", "--version"]), 0);
        assert_eq!(run(["railfares", "od", "--help"]), 0);
    }

    #[test]
    fn missing_feed_directory_is_a_data_error() {
        let dir = tempfile::tempdir().unwrap();
        let missing = dir.path().join("nope");
        assert_eq!(
            run(["railfares", "validate", "--feed", missing.to_str().unwrap()]),
            1
        );
    }

    #[test]
    fn meandist_requires_origin_or_all() {
        let args = [
            "railfares", "meandist", "--feed", "x", "--budget", "100", "--out", "y",
        ];
        assert_eq!(run(args), 2);
    }
}
