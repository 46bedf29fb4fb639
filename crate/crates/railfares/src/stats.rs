//! Fare distributions and their summary statistics.
//!
//! Distributions are raw fare sequences, not histograms; binning is left to
//! whatever consumes them. All statistics are computed from integer pence
//! with exact arithmetic: the mean is rounded half-up to two decimal places
//! and quantiles interpolate linearly at position (n - 1) * q, which lands
//! on exact quarter fractions.

use crate::error::{Error, Result};
use crate::geo::{haversine_km, GeoPoint};
use crate::model::{FeedBundle, StationIdx};
use crate::od::row_fares;

/// Six-number summary of a fare sequence, in pence.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryStats {
    pub count: usize,
    /// Arithmetic mean rounded half-up to 2 decimal places.
    pub mean_pence: f64,
    pub median_pence: f64,
    pub min_pence: u32,
    pub max_pence: u32,
    pub lower_quartile_pence: f64,
    pub upper_quartile_pence: f64,
}

/// The minimum fare of every priced ordered station pair, by (origin NLC,
/// destination NLC). One value per pair; unpriceable pairs contribute
/// nothing. An empty feed yields an empty sequence.
pub fn network_fare_distribution(bundle: &FeedBundle, ticket_code: &str) -> Result<Vec<u32>> {
    let ticket = bundle.ticket_id(ticket_code)?;
    let mut out = Vec::new();
    let mut scratch = Vec::new();
    for origin in 0..bundle.stations().len() as u32 {
        row_fares(bundle, StationIdx(origin), ticket, &mut scratch);
        out.extend(scratch.iter().flatten());
    }
    Ok(out)
}

/// The defined fares of one origin's OD row, ordered by destination NLC.
pub fn station_fare_distribution(
    bundle: &FeedBundle,
    origin: &str,
    ticket_code: &str,
) -> Result<Vec<u32>> {
    let origin_idx = bundle.station_idx(origin)?;
    let ticket = bundle.ticket_id(ticket_code)?;
    let mut scratch = Vec::new();
    row_fares(bundle, origin_idx, ticket, &mut scratch);
    Ok(scratch.iter().flatten().copied().collect())
}

/// Summarizes a non-empty fare sequence.
///
/// Median and quartiles interpolate between closest ranks of the sorted
/// sequence at position p = (n - 1) * q for q in {0.25, 0.5, 0.75}; with
/// integer inputs every result is an exact multiple of 0.25.
pub fn summary_stats(values: &[u32]) -> Result<SummaryStats> {
    if values.is_empty() {
        return Err(Error::EmptyInput {
            context: "fare sequence".into(),
        });
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let n = sorted.len();
    let sum: u128 = sorted.iter().map(|&v| v as u128).sum();
    // Half-up rounding to hundredths, kept in integers throughout:
    // floor(100 * sum / n + 1/2) = floor((200 * sum + n) / (2 * n)).
    let mean_hundredths = (200 * sum + n as u128) / (2 * n as u128);
    let quantile = |quarters: usize| -> f64 {
        let pos4 = (n - 1) * quarters;
        let lo = sorted[pos4 / 4] as f64;
        match pos4 % 4 {
            0 => lo,
            rem => {
                let hi = sorted[pos4 / 4 + 1] as f64;
                lo + (hi - lo) * rem as f64 / 4.0
            }
        }
    };
    Ok(SummaryStats {
        count: n,
        mean_pence: mean_hundredths as f64 / 100.0,
        median_pence: quantile(2),
        min_pence: sorted[0],
        max_pence: sorted[n - 1],
        lower_quartile_pence: quantile(1),
        upper_quartile_pence: quantile(3),
    })
}

/// (great-circle km, fare) for every priced destination of an origin,
/// ordered by destination NLC.
pub fn distance_fare_pairs(
    bundle: &FeedBundle,
    origin: &str,
    ticket_code: &str,
) -> Result<Vec<(f64, u32)>> {
    let origin_idx = bundle.station_idx(origin)?;
    let ticket = bundle.ticket_id(ticket_code)?;
    let mut scratch = Vec::new();
    row_fares(bundle, origin_idx, ticket, &mut scratch);
    let from = bundle.station_at(origin_idx);
    let from = GeoPoint { lat: from.lat, lon: from.lon };
    Ok(scratch
        .iter()
        .enumerate()
        .filter_map(|(i, fare)| {
            fare.map(|f| {
                let to = &bundle.stations()[i];
                (haversine_km(from, GeoPoint { lat: to.lat, lon: to.lon }), f)
            })
        })
        .collect())
}
