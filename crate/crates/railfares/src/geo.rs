//! Great-circle geometry and the budget-constrained accessibility metrics:
//! mean reachable distance and reachable points of interest.
//!
//! Distances are great-circle between station coordinates; rail-route
//! distance is not available in the inputs. The origin station itself takes
//! part in POI coverage at zero cost: someone standing at the origin can
//! reach its nearby services without buying a ticket.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{FeedBundle, PoiKind, PoiRecord, StationIdx, StationRecord};
use crate::od::{reachable_idxs, row_fares};

/// Mean Earth radius in kilometres.
pub const EARTH_RADIUS_KM: f64 = 6371.0088;

/// A WGS84 coordinate pair in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoPoint {
    pub lat: f64,
    pub lon: f64,
}

fn station_point(s: &StationRecord) -> GeoPoint {
    GeoPoint { lat: s.lat, lon: s.lon }
}

/// Great-circle distance between two points in kilometres.
///
/// Symmetric to the last bit: both deltas go through `abs`, and every
/// remaining term is commutative, so `haversine_km(a, b)` and
/// `haversine_km(b, a)` are computed from identical intermediates.
pub fn haversine_km(a: GeoPoint, b: GeoPoint) -> f64 {
    let dlat = (b.lat - a.lat).abs().to_radians();
    let dlon = (b.lon - a.lon).abs().to_radians();
    let h = (dlat / 2.0).sin().powi(2)
        + a.lat.to_radians().cos() * b.lat.to_radians().cos() * (dlon / 2.0).sin().powi(2);
    // Rounding can push h a hair past 1 for near-antipodal points.
    2.0 * EARTH_RADIUS_KM * h.sqrt().min(1.0).asin()
}

/// The accessibility metrics this module can attach to an origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    MeanDistanceKm,
    PoiCount,
}

/// One accessibility measurement for an origin under a budget.
#[derive(Debug, Clone, PartialEq)]
pub struct AccessResult {
    pub origin_nlc: String,
    pub ticket_code: String,
    pub budget_pence: u32,
    pub metric: Metric,
    /// `None` marks an undefined value (empty reachable set), never zero.
    pub value: Option<f64>,
    pub poi_kind: Option<PoiKind>,
}

/// Mean great-circle distance from the origin to every station reachable
/// within the budget. `None` when nothing is reachable: an undefined mean is
/// not the same as a mean of zero kilometres.
pub fn mean_reachable_distance_km(
    bundle: &FeedBundle,
    origin: &str,
    ticket_code: &str,
    budget_pence: u32,
) -> Result<Option<f64>> {
    let origin_idx = bundle.station_idx(origin)?;
    let ticket = bundle.ticket_id(ticket_code)?;
    let mut scratch = Vec::new();
    let reach = reachable_idxs(bundle, origin_idx, ticket, budget_pence, &mut scratch);
    Ok(mean_distance_to(bundle, origin_idx, &reach))
}

fn mean_distance_to(bundle: &FeedBundle, origin: StationIdx, reach: &[StationIdx]) -> Option<f64> {
    if reach.is_empty() {
        return None;
    }
    let from = station_point(bundle.station_at(origin));
    let sum: f64 = reach
        .iter()
        .map(|&d| haversine_km(from, station_point(bundle.station_at(d))))
        .sum();
    Some(sum / reach.len() as f64)
}

/// Mean reachable distance for many origins at one budget, in ascending NLC
/// order. Rows are computed on the current rayon pool; the output order does
/// not depend on scheduling.
pub fn mean_distances(
    bundle: &FeedBundle,
    ticket_code: &str,
    budget_pence: u32,
    origins: Option<&[String]>,
) -> Result<Vec<AccessResult>> {
    let ticket = bundle.ticket_id(ticket_code)?;
    let origins = resolve_origins(bundle, origins)?;
    Ok(origins
        .par_iter()
        .map_init(Vec::new, |scratch, &origin| {
            let reach = reachable_idxs(bundle, origin, ticket, budget_pence, scratch);
            AccessResult {
                origin_nlc: bundle.station_at(origin).nlc.clone(),
                ticket_code: ticket_code.to_string(),
                budget_pence,
                metric: Metric::MeanDistanceKm,
                value: mean_distance_to(bundle, origin, &reach),
                poi_kind: None,
            }
        })
        .collect())
}

fn check_radius(radius_km: f64) -> Result<()> {
    if radius_km.is_finite() && radius_km > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            reason: format!("radius must be a positive number of kilometres, got {radius_km}"),
        })
    }
}

fn resolve_origins(bundle: &FeedBundle, origins: Option<&[String]>) -> Result<Vec<StationIdx>> {
    match origins {
        None => Ok((0..bundle.stations().len() as u32).map(StationIdx).collect()),
        Some(keys) => {
            let mut idxs = keys
                .iter()
                .map(|k| bundle.station_idx(k))
                .collect::<Result<Vec<StationIdx>>>()?;
            idxs.sort();
            idxs.dedup();
            Ok(idxs)
        }
    }
}

/// For each POI of the kind, the cheapest fare at which some station within
/// `radius_km` of it becomes available, `None` if no station ever covers it.
/// The origin station costs zero.
fn poi_cost_thresholds(
    bundle: &FeedBundle,
    origin: StationIdx,
    row: &[Option<u32>],
    pois: &[PoiRecord],
    kind: PoiKind,
    radius_km: f64,
) -> Vec<Option<u32>> {
    pois.iter()
        .filter(|p| p.kind == kind)
        .map(|poi| {
            let poi_point = GeoPoint { lat: poi.lat, lon: poi.lon };
            let mut best: Option<u32> = None;
            for (i, station) in bundle.stations().iter().enumerate() {
                let cost = if i == origin.0 as usize { Some(0) } else { row[i] };
                let Some(cost) = cost else { continue };
                if best.is_some_and(|b| cost >= b) {
                    continue;
                }
                if haversine_km(station_point(station), poi_point) <= radius_km {
                    best = Some(cost);
                    if cost == 0 {
                        break;
                    }
                }
            }
            best
        })
        .collect()
}

/// Number of distinct POIs of a kind within `radius_km` (inclusive) of any
/// station reachable within the budget, the origin included at zero cost.
/// Each POI counts once however many stations cover it.
pub fn poi_reach_count(
    bundle: &FeedBundle,
    pois: &[PoiRecord],
    origin: &str,
    ticket_code: &str,
    budget_pence: u32,
    radius_km: f64,
    kind: PoiKind,
) -> Result<usize> {
    check_radius(radius_km)?;
    let origin_idx = bundle.station_idx(origin)?;
    let ticket = bundle.ticket_id(ticket_code)?;
    let mut row = Vec::new();
    row_fares(bundle, origin_idx, ticket, &mut row);
    let thresholds = poi_cost_thresholds(bundle, origin_idx, &row, pois, kind, radius_km);
    Ok(count_within(&thresholds, budget_pence))
}

fn count_within(thresholds: &[Option<u32>], budget_pence: u32) -> usize {
    thresholds
        .iter()
        .filter(|t| t.is_some_and(|cost| cost <= budget_pence))
        .count()
}

/// POI reach counts for every origin across a ladder of budgets.
///
/// `budgets` must be non-empty and strictly ascending; each row of the
/// returned table is then non-decreasing left to right by construction.
/// Rows are in ascending origin-NLC order.
pub fn poi_counts_multi_budget(
    bundle: &FeedBundle,
    pois: &[PoiRecord],
    ticket_code: &str,
    budgets: &[u32],
    radius_km: f64,
    kind: PoiKind,
    origins: Option<&[String]>,
) -> Result<Vec<(String, Vec<usize>)>> {
    check_radius(radius_km)?;
    if budgets.is_empty() {
        return Err(Error::EmptyInput { context: "budget list".into() });
    }
    if budgets.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BudgetOrder {
            budgets: budgets.to_vec(),
        });
    }
    let ticket = bundle.ticket_id(ticket_code)?;
    let origins = resolve_origins(bundle, origins)?;
    Ok(origins
        .par_iter()
        .map_init(Vec::new, |row, &origin| {
            row_fares(bundle, origin, ticket, row);
            let thresholds = poi_cost_thresholds(bundle, origin, row, pois, kind, radius_km);
            let counts = budgets.iter().map(|&b| count_within(&thresholds, b)).collect();
            (bundle.station_at(origin).nlc.clone(), counts)
        })
        .collect())
}
