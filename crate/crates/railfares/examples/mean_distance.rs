//! Mean reachable distance: how far, on average, do the stations you can
//! afford to reach lie? Undefined (not zero) when nothing is reachable,
//! and computed with great-circle distances on the mean Earth radius.
//!
//! ```bash
//! cargo run --example mean_distance
//! ```

use std::path::Path;

use railfares::{haversine_km, load_feed, mean_reachable_distance_km, GeoPoint};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let feed_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/tiny-gb");
    let bundle = load_feed(&feed_dir)?;

    let aaa = bundle.station("AAA")?;
    let bbb = bundle.station("BBB")?;
    let d = haversine_km(
        GeoPoint { lat: aaa.lat, lon: aaa.lon },
        GeoPoint { lat: bbb.lat, lon: bbb.lon },
    );
    println!("great-circle AAA to BBB: {d:.3} km");

    for budget in [0u32, 500, 2000] {
        match mean_reachable_distance_km(&bundle, "AAA", "SGL", budget)? {
            Some(km) => println!("mean reachable distance from AAA at {budget}p: {km:.3} km"),
            None => println!("mean reachable distance from AAA at {budget}p: undefined"),
        }
    }
    Ok(())
}
