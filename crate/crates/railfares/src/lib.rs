//! Fares and accessibility queries over GB rail fares feeds.
//!
//! The feed model is fare-and-flow: stations, station groups, and station
//! clusters are fare points, flows connect pairs of fare points, and fares
//! price a flow for a ticket type. This crate parses such feeds from six
//! canonical CSV files, resolves the cheapest fare between any two stations,
//! and derives fare-budget accessibility metrics on top: reachable station
//! sets, mean reachable distance, and reachable points of interest.
//!
//! ## Examples
//!
//! Each major capability has a runnable example; all of them work against
//! the bundled `fixtures/tiny-gb` feed and print what they are doing.
//!
//! Start with loading and fare resolution:
//!
//! - **`validate_feed`** - Load a feed, handle collected errors, print counts
//! - **`cheapest_fare`** - Candidate fares and the minimum fare for a pair
//! - **`od_matrix`** - Stream the full minimum-fare matrix for a ticket
//!
//! ```bash
//! cargo run --example validate_feed
//! cargo run --example cheapest_fare
//! cargo run --example od_matrix
//! ```
//!
//! Then the accessibility metrics:
//!
//! - **`reachable_stations`** - Stations within a fare budget
//! - **`mean_distance`** - Mean reachable distance as the budget grows
//! - **`poi_access`** - Hospitals reachable over a ladder of budgets
//!
//! ```bash
//! cargo run --example reachable_stations
//! cargo run --example mean_distance
//! cargo run --example poi_access
//! ```
//!
//! Statistics, exports, and data management:
//!
//! - **`fare_stats`** - Summary statistics of fare distributions
//! - **`distance_vs_fare`** - Distance-fare pairs and a GeoJSON export
//! - **`synthetic_feed`** - Generate a deterministic random feed
//! - **`download_inputs`** - Fetch remote inputs with checksum verification
//!
//! ```bash
//! cargo run --example fare_stats
//! cargo run --example distance_vs_fare
//! cargo run --example synthetic_feed
//! cargo run --example download_inputs
//! ```
//!
//! ## The same thing from the shell
//!
//! The `railfares` binary wraps every capability above; see `railfares
//! --help`. The feed directory comes from `--feed` or the
//! `RAILFARES_FEED_DIR` environment variable.
//!
//! ```bash
//! cargo run -- validate --feed fixtures/tiny-gb
//! cargo run -- od --feed fixtures/tiny-gb --ticket SGL --out od.csv
//! ```

pub mod cli;
pub mod download;
pub mod error;
pub mod export;
pub mod geo;
pub mod ingest;
pub mod model;
pub mod od;
pub mod resolve;
pub mod stats;
pub mod synth;

pub use error::{Error, ErrorReport, Result, SourceRef};
pub use export::{
    export_dist_fare_csv, export_geojson, export_meandist_csv, export_od_csv, export_poi_csv,
    export_stats_csv, geojson_value, read_metric_csv,
};
pub use geo::{
    haversine_km, mean_distances, mean_reachable_distance_km, poi_counts_multi_budget,
    poi_reach_count, AccessResult, GeoPoint, Metric,
};
pub use ingest::{load_feed, load_records, parse_poi_file};
pub use model::{
    build_bundle, Direction, FeedBundle, FeedRecords, PoiKind, PoiRecord, StationRecord,
    TicketType,
};
pub use od::{od_matrix, od_row, reachable_set, OdRow};
pub use resolve::{candidate_fares, min_fare, CandidateFare};
pub use stats::{
    distance_fare_pairs, network_fare_distribution, station_fare_distribution, summary_stats,
    SummaryStats,
};
pub use synth::{generate_synthetic_feed, SyntheticFeedSpec};
