//! Fare resolution for a single station pair.
//!
//! A journey between two stations can be priced by many flows, because each
//! endpoint may be represented by the station itself, any group it belongs
//! to, or any cluster containing it. [`candidate_fares`] enumerates every
//! such flow for a ticket type and [`min_fare`] selects the cheapest, which
//! is the fare the rest of the toolkit works with.

use crate::error::{Error, Result};
use crate::model::{Direction, FeedBundle};

/// One way of pricing a station pair: a flow, matched either forwards or
/// (for reversible flows) backwards.
///
/// `via_origin_code` and `via_dest_code` are the fare points the query's
/// origin and destination matched; for a reversed candidate these are the
/// flow's destination and origin respectively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateFare {
    pub flow_id: u64,
    pub fare_pence: u32,
    pub via_origin_code: String,
    pub via_dest_code: String,
    pub reversed: bool,
}

/// Enumerates every fare that prices `origin -> dest` for the ticket type.
///
/// With O the fare points containing the origin and D those containing the
/// destination, this returns fares on flows (o -> d) with o ∈ O and d ∈ D,
/// plus fares on reversible flows (d -> o), flagged `reversed`. Candidates
/// are ordered by ascending fare, then flow id, then forward before
/// reversed. The sequence is empty when nothing prices the pair.
pub fn candidate_fares(
    bundle: &FeedBundle,
    origin: &str,
    dest: &str,
    ticket_code: &str,
) -> Result<Vec<CandidateFare>> {
    let origin_idx = bundle.station_idx(origin)?;
    let dest_idx = bundle.station_idx(dest)?;
    let ticket = bundle.ticket_id(ticket_code)?;

    // A station never prices travel to itself, even where overlapping
    // clusters would otherwise match a flow.
    if origin_idx == dest_idx {
        return Ok(Vec::new());
    }

    let origin_points = &bundle.containing[origin_idx.0 as usize];
    let dest_points = &bundle.containing[dest_idx.0 as usize];

    let mut candidates: Vec<CandidateFare> = Vec::new();
    for &o in origin_points {
        // Forward: flow starts at a point containing the origin and ends at
        // one containing the destination.
        for &flow_idx in &bundle.flows_from[o.0 as usize] {
            let flow = &bundle.flows[flow_idx.0 as usize];
            let d = bundle.flow_points[flow_idx.0 as usize].1;
            if !dest_points.contains(&d) {
                continue;
            }
            if let Some(fare_pence) = bundle.fare_of(flow_idx, ticket) {
                candidates.push(CandidateFare {
                    flow_id: flow.flow_id,
                    fare_pence,
                    via_origin_code: flow.origin_code.clone(),
                    via_dest_code: flow.dest_code.clone(),
                    reversed: false,
                });
            }
        }
        // Reversed: a reversible flow ending at the origin side prices the
        // pair at the same fare.
        for &flow_idx in &bundle.flows_to[o.0 as usize] {
            let flow = &bundle.flows[flow_idx.0 as usize];
            if flow.direction != Direction::Reversible {
                continue;
            }
            let d = bundle.flow_points[flow_idx.0 as usize].0;
            if !dest_points.contains(&d) {
                continue;
            }
            if let Some(fare_pence) = bundle.fare_of(flow_idx, ticket) {
                candidates.push(CandidateFare {
                    flow_id: flow.flow_id,
                    fare_pence,
                    via_origin_code: flow.dest_code.clone(),
                    via_dest_code: flow.origin_code.clone(),
                    reversed: true,
                });
            }
        }
    }
    candidates.sort_by(|a, b| {
        (a.fare_pence, a.flow_id, a.reversed).cmp(&(b.fare_pence, b.flow_id, b.reversed))
    });
    Ok(candidates)
}

/// The minimum fare for `origin -> dest` with the given ticket type.
///
/// Fails with [`Error::NoFlow`] when no flow prices the pair. Asking for
/// `origin == dest` also yields `NoFlow`: the feed has no self-flows, and
/// zero-cost self-travel is a concern of the accessibility metrics, not of
/// fare lookup.
pub fn min_fare(bundle: &FeedBundle, origin: &str, dest: &str, ticket_code: &str) -> Result<u32> {
    let candidates = candidate_fares(bundle, origin, dest, ticket_code)?;
    match candidates.first() {
        Some(best) => Ok(best.fare_pence),
        None => Err(Error::NoFlow {
            origin: origin.to_string(),
            dest: dest.to_string(),
            ticket: ticket_code.to_string(),
        }),
    }
}
