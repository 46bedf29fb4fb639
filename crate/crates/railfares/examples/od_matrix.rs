//! Stream the full minimum-fare origin-destination matrix, then export it
//! as CSV. The iterator computes one row at a time, so even national-scale
//! feeds stream in bounded memory.
//!
//! ```bash
//! cargo run --example od_matrix
//! ```

use std::path::Path;

use railfares::{export_od_csv, load_feed, od_matrix, od_row};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let feed_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/tiny-gb");
    let bundle = load_feed(&feed_dir)?;

    println!("single-ticket OD matrix, one line per origin:");
    let mut defined = 0;
    for row in od_matrix(&bundle, "SGL", None)? {
        defined += row.fares.len();
        let cells: Vec<String> = row
            .fares
            .iter()
            .map(|(dest, fare)| format!("{dest}:{fare}p"))
            .collect();
        println!("  {} -> {{{}}}", row.origin_nlc, cells.join(", "));
    }
    println!("{defined} ordered pairs are priced; the rest have no flow");

    // A single row works without touching the rest of the matrix.
    let row = od_row(&bundle, "AAA", "SGL")?;
    println!("\nrow for AAA only: {} destinations", row.fares.len());

    // The CSV export sorts by CRS code and is stable across worker counts.
    let out_dir = tempfile::tempdir()?;
    let out = out_dir.path().join("od.csv");
    let rows = export_od_csv(&bundle, "SGL", None, &out, Some(2))?;
    println!("\nexported {rows} rows:");
    print!("{}", std::fs::read_to_string(&out)?);
    Ok(())
}
