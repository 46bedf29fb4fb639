//! Pair distances with fares, export them, and render a metric as GeoJSON.
//! The distance-fare relation is the raw material for fare-per-kilometre
//! analysis; the GeoJSON output drops straight into any map viewer.
//!
//! ```bash
//! cargo run --example distance_vs_fare
//! ```

use std::path::Path;

use railfares::{
    distance_fare_pairs, export_dist_fare_csv, export_geojson, export_meandist_csv, load_feed,
    read_metric_csv,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let feed_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/tiny-gb");
    let bundle = load_feed(&feed_dir)?;

    println!("distance vs fare from AAA (SGL):");
    for (km, fare) in distance_fare_pairs(&bundle, "AAA", "SGL")? {
        println!("  {km:8.3} km for {fare:5}p ({:.2} p/km)", fare as f64 / km);
    }

    let out_dir = tempfile::tempdir()?;

    let dist_fare = out_dir.path().join("dist_fare.csv");
    let rows = export_dist_fare_csv(&bundle, "AAA", "SGL", &dist_fare)?;
    println!("\nwrote {rows} rows to dist_fare.csv:");
    print!("{}", std::fs::read_to_string(&dist_fare)?);

    // Chain two exports: a per-station metric table, then its GeoJSON view.
    let meandist = out_dir.path().join("meandist.csv");
    export_meandist_csv(&bundle, "SGL", 2000, None, &meandist, None)?;
    let values = read_metric_csv(&meandist, "mean_distance_km")?;
    let geojson = out_dir.path().join("meandist.geojson");
    export_geojson(&bundle, "mean_distance_km", &values, &geojson)?;
    println!("\nmeandist.geojson:");
    print!("{}", std::fs::read_to_string(&geojson)?);
    Ok(())
}
