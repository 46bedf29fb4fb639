//! Summarize fare distributions: the multiset of minimum fares over every
//! priced pair (network-wide or from one origin), reduced to count, mean,
//! quartiles, and extremes.
//!
//! ```bash
//! cargo run --example fare_stats
//! ```

use std::path::Path;

use railfares::{
    load_feed, network_fare_distribution, station_fare_distribution, summary_stats, SummaryStats,
};

fn print_stats(label: &str, s: &SummaryStats) {
    println!("{label}:");
    println!("  count  {}", s.count);
    println!("  mean   {:.2}p", s.mean_pence);
    println!("  median {:.2}p", s.median_pence);
    println!("  lq/uq  {:.2}p / {:.2}p", s.lower_quartile_pence, s.upper_quartile_pence);
    println!("  range  {}p ..= {}p", s.min_pence, s.max_pence);
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let feed_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/tiny-gb");
    let bundle = load_feed(&feed_dir)?;

    let network = network_fare_distribution(&bundle, "SGL")?;
    println!("network SGL minimum fares (pence): {network:?}\n");
    print_stats("network SGL", &summary_stats(&network)?);

    let from_aaa = station_fare_distribution(&bundle, "AAA", "SGL")?;
    println!("\nfares from AAA (pence): {from_aaa:?}\n");
    print_stats("AAA SGL", &summary_stats(&from_aaa)?);

    let returns = network_fare_distribution(&bundle, "RTN")?;
    print_stats("\nnetwork RTN", &summary_stats(&returns)?);
    Ok(())
}
