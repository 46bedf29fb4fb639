//! Load a feed directory, print its summary counts, and show how parse
//! problems come back as one collected report rather than a single failure.
//!
//! ```bash
//! cargo run --example validate_feed
//! ```

use std::path::Path;

use railfares::load_feed;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let feed_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/tiny-gb");

    let bundle = load_feed(&feed_dir)?;
    println!("loaded {}", feed_dir.display());
    println!(
        "  {} stations, {} groups, {} clusters, {} tickets, {} flows, {} fares",
        bundle.stations().len(),
        bundle.groups().len(),
        bundle.clusters().len(),
        bundle.tickets().len(),
        bundle.flows().len(),
        bundle.fare_count(),
    );
    for station in bundle.stations() {
        println!(
            "  station {} ({}) {} at {:.2},{:.2}",
            station.nlc, station.crs, station.name, station.lat, station.lon
        );
    }

    // Now break a copy of the feed in two places at once. Loading collects
    // every problem instead of stopping at the first one.
    let broken = tempfile::tempdir()?;
    for entry in std::fs::read_dir(&feed_dir)? {
        let entry = entry?;
        std::fs::copy(entry.path(), broken.path().join(entry.file_name()))?;
    }
    let mut flows = std::fs::read_to_string(broken.path().join("flows.csv"))?;
    flows = flows.replace("1,1000,1001,S", "1,10X0,1001,S");
    flows = flows.replace("2,1000,K500,R", "2,1000,K500,X");
    std::fs::write(broken.path().join("flows.csv"), flows)?;

    match load_feed(broken.path()) {
        Ok(_) => println!("unexpectedly loaded a broken feed"),
        Err(report) => {
            println!("\nbroken copy refused to load, {} problem(s):", report.len());
            print!("{report}");
        }
    }
    Ok(())
}
