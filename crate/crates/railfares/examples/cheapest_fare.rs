//! Resolve the fare between two stations: enumerate every candidate flow,
//! then take the cheapest. Shows how station clusters and groups widen the
//! candidate set, and what an unpriced pair looks like.
//!
//! ```bash
//! cargo run --example cheapest_fare
//! ```

use std::path::Path;

use railfares::{candidate_fares, load_feed, min_fare, Error};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let feed_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/tiny-gb");
    let bundle = load_feed(&feed_dir)?;

    // AAA sits in group 0900, which sits in cluster K501; BBB sits in
    // cluster K500. All of those points can carry flows for the pair.
    println!("candidates for AAA -> BBB, ticket SGL:");
    for c in candidate_fares(&bundle, "AAA", "BBB", "SGL")? {
        println!(
            "  flow {} at {}p via {} -> {}{}",
            c.flow_id,
            c.fare_pence,
            c.via_origin_code,
            c.via_dest_code,
            if c.reversed { " (reversed)" } else { "" },
        );
    }
    println!("cheapest: {}p", min_fare(&bundle, "AAA", "BBB", "SGL")?);

    // The other direction only keeps reversible flows.
    println!("\ncandidates for BBB -> AAA, ticket SGL:");
    for c in candidate_fares(&bundle, "BBB", "AAA", "SGL")? {
        println!(
            "  flow {} at {}p via {} -> {}{}",
            c.flow_id,
            c.fare_pence,
            c.via_origin_code,
            c.via_dest_code,
            if c.reversed { " (reversed)" } else { "" },
        );
    }

    // Not every pair is priced; asking for one is an error, not a zero.
    match min_fare(&bundle, "AAA", "EEE", "SGL") {
        Err(Error::NoFlow { origin, dest, ticket }) => {
            println!("\nno flow prices {origin} -> {dest} for {ticket}");
        }
        other => println!("\nunexpected result: {other:?}"),
    }
    Ok(())
}
