//! Which stations can you reach on a fare budget? The reachable set is the
//! basis of every accessibility metric in this crate: it contains every
//! destination whose minimum fare fits the budget.
//!
//! ```bash
//! cargo run --example reachable_stations
//! ```

use std::path::Path;

use railfares::{load_feed, reachable_set};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let feed_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/tiny-gb");
    let bundle = load_feed(&feed_dir)?;

    for budget in [0u32, 450, 500, 2000] {
        let reach = reachable_set(&bundle, "AAA", "SGL", budget)?;
        let names: Vec<String> = reach
            .iter()
            .map(|nlc| {
                let s = bundle.station(nlc).expect("reachable stations are known");
                format!("{} ({})", s.crs, s.name)
            })
            .collect();
        println!(
            "from AAA with {budget}p: {} station(s){}{}",
            reach.len(),
            if names.is_empty() { "" } else { ": " },
            names.join(", "),
        );
    }

    // Budgets bite station by station; the sets only ever grow.
    let cheap = reachable_set(&bundle, "AAA", "SGL", 450)?;
    let rich = reachable_set(&bundle, "AAA", "SGL", 2000)?;
    assert!(cheap.is_subset(&rich));
    println!("larger budgets never lose stations");
    Ok(())
}
