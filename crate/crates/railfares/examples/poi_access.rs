//! How many hospitals can you reach on a budget? A point of interest
//! counts when it lies within a radius of any station reachable within the
//! fare budget; the origin station itself costs nothing.
//!
//! ```bash
//! cargo run --example poi_access
//! ```

use std::path::Path;

use railfares::{load_feed, parse_poi_file, poi_counts_multi_budget, poi_reach_count, PoiKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let feed_dir = manifest.join("fixtures/tiny-gb");
    let bundle = load_feed(&feed_dir)?;

    let pois: Vec<_> = parse_poi_file(&feed_dir.join("pois.csv"))?
        .into_iter()
        .map(|row| row.value)
        .collect();
    println!("{} POIs on file:", pois.len());
    for poi in &pois {
        println!("  {} {} \"{}\" at {},{}", poi.poi_id, poi.kind.as_str(), poi.name, poi.lat, poi.lon);
    }

    let n = poi_reach_count(&bundle, &pois, "AAA", "SGL", 500, 5.0, PoiKind::Hospital)?;
    println!("\nhospitals within 5 km of anywhere AAA reaches on 500p: {n}");

    // A whole ladder of budgets in one call; counts never decrease.
    let budgets = [0u32, 500, 2000];
    println!("\ncounts per origin over budgets {budgets:?}:");
    for (origin_nlc, counts) in
        poi_counts_multi_budget(&bundle, &pois, "SGL", &budgets, 5.0, PoiKind::Hospital, None)?
    {
        let crs = &bundle.station(&origin_nlc)?.crs;
        println!("  {crs}: {counts:?}");
    }
    Ok(())
}
