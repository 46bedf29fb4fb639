//! Origin rows, the full origin-destination matrix, and budget-constrained
//! reachable sets.
//!
//! The matrix streams one row at a time so that a national-scale feed never
//! needs quadratic memory: peak usage is the bundle plus a single row. Rows
//! are independent, which is what lets the CSV exporter compute them on a
//! worker pool without changing the output.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Result;
use crate::model::{Direction, FeedBundle, StationIdx, TicketId};

/// One origin's slice of the OD matrix: minimum fare to every destination
/// that any flow prices. Unpriceable pairs are absent, never zero, and the
/// origin itself is never a key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OdRow {
    pub origin_nlc: String,
    pub ticket_code: String,
    /// Destination NLC to minimum fare in pence, ascending by NLC.
    pub fares: BTreeMap<String, u32>,
}

/// Fills `out` with the minimum fare from `origin` to every station index,
/// `None` where no flow prices the pair. The origin's own slot is `None`.
pub(crate) fn row_fares(
    bundle: &FeedBundle,
    origin: StationIdx,
    ticket: TicketId,
    out: &mut Vec<Option<u32>>,
) {
    out.clear();
    out.resize(bundle.stations.len(), None);
    for &o in &bundle.containing[origin.0 as usize] {
        for &flow_idx in &bundle.flows_from[o.0 as usize] {
            if let Some(fare) = bundle.fare_of(flow_idx, ticket) {
                let dest_point = bundle.flow_points[flow_idx.0 as usize].1;
                for &d in &bundle.expand[dest_point.0 as usize] {
                    let slot = &mut out[d.0 as usize];
                    if slot.map_or(true, |best| fare < best) {
                        *slot = Some(fare);
                    }
                }
            }
        }
        for &flow_idx in &bundle.flows_to[o.0 as usize] {
            if bundle.flows[flow_idx.0 as usize].direction != Direction::Reversible {
                continue;
            }
            if let Some(fare) = bundle.fare_of(flow_idx, ticket) {
                let origin_point = bundle.flow_points[flow_idx.0 as usize].0;
                for &d in &bundle.expand[origin_point.0 as usize] {
                    let slot = &mut out[d.0 as usize];
                    if slot.map_or(true, |best| fare < best) {
                        *slot = Some(fare);
                    }
                }
            }
        }
    }
    out[origin.0 as usize] = None;
}

/// Computes one origin's OD row for a ticket type.
pub fn od_row(bundle: &FeedBundle, origin: &str, ticket_code: &str) -> Result<OdRow> {
    let origin_idx = bundle.station_idx(origin)?;
    let ticket = bundle.ticket_id(ticket_code)?;
    let mut scratch = Vec::new();
    row_fares(bundle, origin_idx, ticket, &mut scratch);
    let fares: BTreeMap<String, u32> = scratch
        .iter()
        .enumerate()
        .filter_map(|(i, fare)| fare.map(|f| (bundle.stations[i].nlc.clone(), f)))
        .collect();
    Ok(OdRow {
        origin_nlc: bundle.station_at(origin_idx).nlc.clone(),
        ticket_code: ticket_code.to_string(),
        fares,
    })
}

/// Streaming iterator over OD rows in ascending origin-NLC order.
///
/// Created by [`od_matrix`]; each `next` computes one row, so memory stays
/// bounded by a single row however large the feed is.
#[derive(Debug)]
pub struct OdMatrix<'a> {
    bundle: &'a FeedBundle,
    ticket: TicketId,
    ticket_code: String,
    origins: Vec<StationIdx>,
    pos: usize,
    scratch: Vec<Option<u32>>,
}

impl Iterator for OdMatrix<'_> {
    type Item = OdRow;

    fn next(&mut self) -> Option<OdRow> {
        let &origin = self.origins.get(self.pos)?;
        self.pos += 1;
        row_fares(self.bundle, origin, self.ticket, &mut self.scratch);
        let fares: BTreeMap<String, u32> = self
            .scratch
            .iter()
            .enumerate()
            .filter_map(|(i, fare)| fare.map(|f| (self.bundle.stations[i].nlc.clone(), f)))
            .collect();
        Some(OdRow {
            origin_nlc: self.bundle.station_at(origin).nlc.clone(),
            ticket_code: self.ticket_code.clone(),
            fares,
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rest = self.origins.len() - self.pos;
        (rest, Some(rest))
    }
}

/// Streams the OD matrix for a ticket type, one row per origin.
///
/// With `origins = None` every station becomes a row; otherwise only the
/// given stations (CRS or NLC keys, deduplicated). Rows always come out in
/// ascending NLC order.
pub fn od_matrix<'a>(
    bundle: &'a FeedBundle,
    ticket_code: &str,
    origins: Option<&[String]>,
) -> Result<OdMatrix<'a>> {
    let ticket = bundle.ticket_id(ticket_code)?;
    let origins = match origins {
        None => (0..bundle.stations.len() as u32).map(StationIdx).collect(),
        Some(keys) => {
            let mut idxs = keys
                .iter()
                .map(|k| bundle.station_idx(k))
                .collect::<Result<Vec<StationIdx>>>()?;
            idxs.sort();
            idxs.dedup();
            idxs
        }
    };
    Ok(OdMatrix {
        bundle,
        ticket,
        ticket_code: ticket_code.to_string(),
        origins,
        pos: 0,
        scratch: Vec::new(),
    })
}

/// Destination station indexes whose minimum fare is within the budget.
/// The origin itself is excluded.
pub(crate) fn reachable_idxs(
    bundle: &FeedBundle,
    origin: StationIdx,
    ticket: TicketId,
    budget_pence: u32,
    scratch: &mut Vec<Option<u32>>,
) -> Vec<StationIdx> {
    row_fares(bundle, origin, ticket, scratch);
    scratch
        .iter()
        .enumerate()
        .filter_map(|(i, fare)| match fare {
            Some(f) if *f <= budget_pence => Some(StationIdx(i as u32)),
            _ => None,
        })
        .collect()
}

/// The stations reachable from an origin within a fare budget: every
/// destination whose minimum fare is at most `budget_pence`, as NLC codes.
pub fn reachable_set(
    bundle: &FeedBundle,
    origin: &str,
    ticket_code: &str,
    budget_pence: u32,
) -> Result<BTreeSet<String>> {
    let origin_idx = bundle.station_idx(origin)?;
    let ticket = bundle.ticket_id(ticket_code)?;
    let mut scratch = Vec::new();
    Ok(reachable_idxs(bundle, origin_idx, ticket, budget_pence, &mut scratch)
        .into_iter()
        .map(|idx| bundle.station_at(idx).nlc.clone())
        .collect())
}
