//! Domain types of the fare-and-flow model and the indexed [`FeedBundle`].
//!
//! A feed describes priced relations ("flows") between fare points. A fare
//! point is an individual station, a station group, or a station cluster.
//! Groups collect stations under one code; clusters collect stations and
//! groups that share pricing. [`build_bundle`] checks every cross-record
//! invariant and precomputes the membership and flow indexes that the query
//! modules rely on.

use std::collections::hash_map::Entry;
use std::collections::HashMap;

use crate::error::{Error, ErrorReport, Result, SourceRef};

/// Canonical feed file names, also used in error locations.
pub const FILE_LOCATIONS: &str = "locations.csv";
pub const FILE_GROUPS: &str = "groups.csv";
pub const FILE_CLUSTERS: &str = "clusters.csv";
pub const FILE_FLOWS: &str = "flows.csv";
pub const FILE_FARES: &str = "fares.csv";
pub const FILE_TICKETS: &str = "tickets.csv";
pub const FILE_POIS: &str = "pois.csv";

/// All six feed files in their canonical load order.
pub const FEED_FILES: [&str; 6] = [
    FILE_LOCATIONS,
    FILE_GROUPS,
    FILE_CLUSTERS,
    FILE_FLOWS,
    FILE_FARES,
    FILE_TICKETS,
];

/// A rail station: 4-digit NLC code, 3-letter CRS code, and WGS84 position.
#[derive(Debug, Clone, PartialEq)]
pub struct StationRecord {
    pub nlc: String,
    pub crs: String,
    pub name: String,
    pub lat: f64,
    pub lon: f64,
}

/// One `groups.csv` row: a single member of a station group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupMemberRecord {
    pub group_nlc: String,
    pub group_name: String,
    pub member_nlc: String,
}

/// One `clusters.csv` row: a single member (station or group) of a cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterMemberRecord {
    pub cluster_id: String,
    pub member_code: String,
}

/// Whether a flow prices one direction or both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Prices origin to destination only (`S`).
    Single,
    /// Prices both directions at the same fare (`R`).
    Reversible,
}

impl Direction {
    pub fn code(self) -> &'static str {
        match self {
            Direction::Single => "S",
            Direction::Reversible => "R",
        }
    }

    pub fn from_code(code: &str) -> Option<Direction> {
        match code {
            "S" => Some(Direction::Single),
            "R" => Some(Direction::Reversible),
            _ => None,
        }
    }
}

/// A priced relation between two fare points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowRecord {
    pub flow_id: u64,
    pub origin_code: String,
    pub dest_code: String,
    pub direction: Direction,
}

/// One fare: (flow, ticket type) priced in whole pence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FareRecord {
    pub flow_id: u64,
    pub ticket_code: String,
    pub fare_pence: u32,
}

/// A ticket type, e.g. `SGL` "Anytime Single".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TicketType {
    pub ticket_code: String,
    pub name: String,
}

/// Kinds of point of interest carried by POI files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PoiKind {
    Hospital,
    EmploymentCentre,
    TownCentre,
}

impl PoiKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PoiKind::Hospital => "HOSPITAL",
            PoiKind::EmploymentCentre => "EMPLOYMENT_CENTRE",
            PoiKind::TownCentre => "TOWN_CENTRE",
        }
    }

    pub fn from_str(s: &str) -> Option<PoiKind> {
        match s {
            "HOSPITAL" => Some(PoiKind::Hospital),
            "EMPLOYMENT_CENTRE" => Some(PoiKind::EmploymentCentre),
            "TOWN_CENTRE" => Some(PoiKind::TownCentre),
            _ => None,
        }
    }
}

/// A key-service location (hospital, employment centre, town centre).
#[derive(Debug, Clone, PartialEq)]
pub struct PoiRecord {
    pub poi_id: String,
    pub kind: PoiKind,
    pub name: String,
    pub lat: f64,
    pub lon: f64,
}

/// A parsed record together with the 1-based line it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Row<T> {
    pub value: T,
    pub line: u64,
}

impl<T> Row<T> {
    pub fn new(value: T, line: u64) -> Self {
        Row { value, line }
    }
}

/// The six parsed record sequences of one feed, before cross-validation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FeedRecords {
    pub stations: Vec<Row<StationRecord>>,
    pub groups: Vec<Row<GroupMemberRecord>>,
    pub clusters: Vec<Row<ClusterMemberRecord>>,
    pub flows: Vec<Row<FlowRecord>>,
    pub fares: Vec<Row<FareRecord>>,
    pub tickets: Vec<Row<TicketType>>,
}

/// A station group assembled from its member rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StationGroup {
    pub group_nlc: String,
    pub name: String,
    /// Member station NLCs, ascending.
    pub members: Vec<String>,
}

/// A station cluster assembled from its member rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StationCluster {
    pub cluster_id: String,
    /// Member codes (station NLCs and group NLCs), ascending.
    pub members: Vec<String>,
}

/// Index of a station in [`FeedBundle::stations`] (ascending NLC order).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct StationIdx(pub u32);

/// Interned fare-point id; covers stations, groups, and clusters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct PointId(pub u32);

/// Index of a ticket type in [`FeedBundle::tickets`] (ascending code order).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct TicketId(pub u16);

/// Index of a flow in [`FeedBundle::flows`] (ascending flow id order).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct FlowIdx(pub u32);

/// An immutable, referentially validated, fully indexed feed.
///
/// Construction via [`build_bundle`] guarantees that every code referenced
/// anywhere resolves, that unique keys really are unique, and that the
/// membership indexes agree with the raw group and cluster rows. All query
/// operations are read-only, so a bundle can be shared freely across threads.
#[derive(Debug)]
pub struct FeedBundle {
    /// Stations sorted by NLC; `StationIdx` indexes this.
    pub(crate) stations: Vec<StationRecord>,
    /// Groups sorted by group NLC.
    pub(crate) groups: Vec<StationGroup>,
    /// Clusters sorted by cluster id.
    pub(crate) clusters: Vec<StationCluster>,
    /// Ticket types sorted by code; `TicketId` indexes this.
    pub(crate) tickets: Vec<TicketType>,
    /// Flows sorted by flow id; `FlowIdx` indexes this.
    pub(crate) flows: Vec<FlowRecord>,
    pub(crate) by_nlc: HashMap<String, StationIdx>,
    /// CRS lookup, keyed uppercase.
    pub(crate) by_crs: HashMap<String, StationIdx>,
    pub(crate) ticket_ids: HashMap<String, TicketId>,
    /// Fare-point code for each `PointId`.
    pub(crate) point_codes: Vec<String>,
    /// Stations each point stands for, ascending `StationIdx`.
    pub(crate) expand: Vec<Vec<StationIdx>>,
    /// Points covering each station (self, groups, clusters), sorted by code.
    pub(crate) containing: Vec<Vec<PointId>>,
    /// Interned (origin, destination) points per flow, aligned with `flows`.
    pub(crate) flow_points: Vec<(PointId, PointId)>,
    /// Flows grouped by origin point.
    pub(crate) flows_from: Vec<Vec<FlowIdx>>,
    /// Flows grouped by destination point.
    pub(crate) flows_to: Vec<Vec<FlowIdx>>,
    /// Per-flow ranges into `fare_entries`; length `flows.len() + 1`.
    pub(crate) fare_offsets: Vec<u32>,
    /// Fares per flow, each flow's entries sorted by ticket id.
    pub(crate) fare_entries: Vec<(TicketId, u32)>,
}

impl FeedBundle {
    /// Stations in ascending NLC order.
    pub fn stations(&self) -> &[StationRecord] {
        &self.stations
    }

    /// Station groups in ascending group-NLC order.
    pub fn groups(&self) -> &[StationGroup] {
        &self.groups
    }

    /// Station clusters in ascending cluster-id order.
    pub fn clusters(&self) -> &[StationCluster] {
        &self.clusters
    }

    /// Ticket types in ascending code order.
    pub fn tickets(&self) -> &[TicketType] {
        &self.tickets
    }

    /// Flows in ascending flow-id order.
    pub fn flows(&self) -> &[FlowRecord] {
        &self.flows
    }

    /// Number of fare records in the feed.
    pub fn fare_count(&self) -> usize {
        self.fare_entries.len()
    }

    /// Looks up a station by CRS code (case-insensitive) or NLC code.
    pub fn station(&self, key: &str) -> Result<&StationRecord> {
        self.station_idx(key).map(|idx| &self.stations[idx.0 as usize])
    }

    pub(crate) fn station_idx(&self, key: &str) -> Result<StationIdx> {
        if let Some(&idx) = self.by_nlc.get(key) {
            return Ok(idx);
        }
        let upper = key.to_ascii_uppercase();
        if let Some(&idx) = self.by_crs.get(&upper) {
            return Ok(idx);
        }
        Err(Error::UnknownStation { key: key.to_string() })
    }

    pub(crate) fn ticket_id(&self, code: &str) -> Result<TicketId> {
        self.ticket_ids
            .get(code)
            .copied()
            .ok_or_else(|| Error::UnknownTicket { code: code.to_string() })
    }

    pub(crate) fn station_at(&self, idx: StationIdx) -> &StationRecord {
        &self.stations[idx.0 as usize]
    }

    pub(crate) fn fares_of(&self, flow: FlowIdx) -> &[(TicketId, u32)] {
        let lo = self.fare_offsets[flow.0 as usize] as usize;
        let hi = self.fare_offsets[flow.0 as usize + 1] as usize;
        &self.fare_entries[lo..hi]
    }

    pub(crate) fn fare_of(&self, flow: FlowIdx, ticket: TicketId) -> Option<u32> {
        self.fares_of(flow)
            .iter()
            .find(|(t, _)| *t == ticket)
            .map(|&(_, fare)| fare)
    }

    /// Every fare-point code that can stand for the given station in a flow:
    /// the station itself, its groups, and the clusters containing it either
    /// directly or through one of its groups. Sorted ascending.
    pub fn points_containing(&self, station_key: &str) -> Result<Vec<String>> {
        let idx = self.station_idx(station_key)?;
        Ok(self.containing[idx.0 as usize]
            .iter()
            .map(|&p| self.point_codes[p.0 as usize].clone())
            .collect())
    }
}

/// True if `code` is a well-formed station or group NLC (`[0-9]{4}`).
pub fn is_nlc_code(code: &str) -> bool {
    code.len() == 4 && code.bytes().all(|b| b.is_ascii_digit())
}

/// True if `code` is a well-formed cluster id (`K[0-9]{3}`).
pub fn is_cluster_code(code: &str) -> bool {
    code.len() == 4 && code.as_bytes()[0] == b'K' && code.bytes().skip(1).all(|b| b.is_ascii_digit())
}

/// True if `code` is a well-formed CRS code (`[A-Z]{3}`).
pub fn is_crs_code(code: &str) -> bool {
    code.len() == 3 && code.bytes().all(|b| b.is_ascii_uppercase())
}

/// True if `code` is a well-formed ticket code (3 ASCII alphanumerics).
pub fn is_ticket_code(code: &str) -> bool {
    code.len() == 3 && code.bytes().all(|b| b.is_ascii_alphanumeric())
}

fn src(file: &str, line: u64) -> SourceRef {
    SourceRef { file: file.to_string(), line }
}

/// Validates the parsed record sequences against every cross-record invariant
/// and builds the indexed bundle.
///
/// All problems are collected before failing, so one run reports every
/// dangling reference and duplicate key in the feed. The returned bundle is
/// deterministic: identical inputs produce identical indexes.
pub fn build_bundle(records: FeedRecords) -> Result<FeedBundle, ErrorReport> {
    let mut errors: Vec<Error> = Vec::new();

    // Stations: unique nlc and crs, first occurrence wins.
    let mut stations: Vec<StationRecord> = Vec::with_capacity(records.stations.len());
    let mut station_lines: HashMap<String, u64> = HashMap::new();
    let mut crs_lines: HashMap<String, u64> = HashMap::new();
    for row in &records.stations {
        let s = &row.value;
        if let Some(&first) = station_lines.get(&s.nlc) {
            errors.push(Error::DuplicateKey {
                kind: "station nlc".into(),
                key: s.nlc.clone(),
                first: src(FILE_LOCATIONS, first),
                second: src(FILE_LOCATIONS, row.line),
            });
            continue;
        }
        if let Some(&first) = crs_lines.get(&s.crs) {
            errors.push(Error::DuplicateKey {
                kind: "station crs".into(),
                key: s.crs.clone(),
                first: src(FILE_LOCATIONS, first),
                second: src(FILE_LOCATIONS, row.line),
            });
            continue;
        }
        station_lines.insert(s.nlc.clone(), row.line);
        crs_lines.insert(s.crs.clone(), row.line);
        stations.push(s.clone());
    }
    stations.sort_by(|a, b| a.nlc.cmp(&b.nlc));
    let by_nlc: HashMap<String, StationIdx> = stations
        .iter()
        .enumerate()
        .map(|(i, s)| (s.nlc.clone(), StationIdx(i as u32)))
        .collect();
    let by_crs: HashMap<String, StationIdx> = stations
        .iter()
        .enumerate()
        .map(|(i, s)| (s.crs.clone(), StationIdx(i as u32)))
        .collect();

    // Tickets: unique code.
    let mut tickets: Vec<TicketType> = Vec::new();
    let mut ticket_lines: HashMap<String, u64> = HashMap::new();
    for row in &records.tickets {
        let t = &row.value;
        match ticket_lines.entry(t.ticket_code.clone()) {
            Entry::Occupied(first) => errors.push(Error::DuplicateKey {
                kind: "ticket code".into(),
                key: t.ticket_code.clone(),
                first: src(FILE_TICKETS, *first.get()),
                second: src(FILE_TICKETS, row.line),
            }),
            Entry::Vacant(e) => {
                e.insert(row.line);
                tickets.push(t.clone());
            }
        }
    }
    tickets.sort_by(|a, b| a.ticket_code.cmp(&b.ticket_code));
    let ticket_ids: HashMap<String, TicketId> = tickets
        .iter()
        .enumerate()
        .map(|(i, t)| (t.ticket_code.clone(), TicketId(i as u16)))
        .collect();

    // Groups: assemble members per group nlc; the code space must not collide
    // with stations, names must agree across rows, members must be stations
    // (nesting a group inside a group is not allowed).
    let mut group_names: HashMap<String, (String, u64)> = HashMap::new();
    let mut group_members: HashMap<String, Vec<(String, u64)>> = HashMap::new();
    let mut group_order: Vec<String> = Vec::new();
    for row in &records.groups {
        let g = &row.value;
        match group_names.entry(g.group_nlc.clone()) {
            Entry::Occupied(e) => {
                let (name, first_line) = e.get().clone();
                if name != g.group_name {
                    errors.push(Error::DuplicateKey {
                        kind: "group name".into(),
                        key: g.group_nlc.clone(),
                        first: src(FILE_GROUPS, first_line),
                        second: src(FILE_GROUPS, row.line),
                    });
                    continue;
                }
            }
            Entry::Vacant(e) => {
                if let Some(&station_line) = station_lines.get(&g.group_nlc) {
                    errors.push(Error::DuplicateKey {
                        kind: "location code".into(),
                        key: g.group_nlc.clone(),
                        first: src(FILE_LOCATIONS, station_line),
                        second: src(FILE_GROUPS, row.line),
                    });
                    continue;
                }
                e.insert((g.group_name.clone(), row.line));
                group_order.push(g.group_nlc.clone());
            }
        }
        let members = group_members.entry(g.group_nlc.clone()).or_default();
        if let Some((_, first)) = members.iter().find(|(m, _)| *m == g.member_nlc) {
            errors.push(Error::DuplicateKey {
                kind: "group member".into(),
                key: format!("{}/{}", g.group_nlc, g.member_nlc),
                first: src(FILE_GROUPS, *first),
                second: src(FILE_GROUPS, row.line),
            });
            continue;
        }
        members.push((g.member_nlc.clone(), row.line));
    }
    let mut groups: Vec<StationGroup> = Vec::new();
    for nlc in &group_order {
        let (name, _) = &group_names[nlc];
        let mut members: Vec<String> = Vec::new();
        for (member, line) in &group_members[nlc] {
            if group_names.contains_key(member) {
                errors.push(Error::Referential {
                    code: member.clone(),
                    context: "as a group member (groups cannot contain groups)".into(),
                    at: Some(src(FILE_GROUPS, *line)),
                });
            } else if !station_lines.contains_key(member) {
                errors.push(Error::Referential {
                    code: member.clone(),
                    context: format!("as a member of group {nlc}"),
                    at: Some(src(FILE_GROUPS, *line)),
                });
            } else {
                members.push(member.clone());
            }
        }
        members.sort();
        groups.push(StationGroup {
            group_nlc: nlc.clone(),
            name: name.clone(),
            members,
        });
    }
    groups.sort_by(|a, b| a.group_nlc.cmp(&b.group_nlc));

    // Clusters: members are stations or groups; a K-code member would nest
    // clusters, which is not allowed.
    let mut cluster_members: HashMap<String, Vec<(String, u64)>> = HashMap::new();
    let mut cluster_order: Vec<String> = Vec::new();
    for row in &records.clusters {
        let c = &row.value;
        let members = match cluster_members.entry(c.cluster_id.clone()) {
            Entry::Occupied(e) => e.into_mut(),
            Entry::Vacant(e) => {
                cluster_order.push(c.cluster_id.clone());
                e.insert(Vec::new())
            }
        };
        if let Some((_, first)) = members.iter().find(|(m, _)| *m == c.member_code) {
            errors.push(Error::DuplicateKey {
                kind: "cluster member".into(),
                key: format!("{}/{}", c.cluster_id, c.member_code),
                first: src(FILE_CLUSTERS, *first),
                second: src(FILE_CLUSTERS, row.line),
            });
            continue;
        }
        members.push((c.member_code.clone(), row.line));
    }
    let mut clusters: Vec<StationCluster> = Vec::new();
    for id in &cluster_order {
        let mut members: Vec<String> = Vec::new();
        for (member, line) in &cluster_members[id] {
            if is_cluster_code(member) {
                errors.push(Error::Referential {
                    code: member.clone(),
                    context: "as a cluster member (clusters cannot contain clusters)".into(),
                    at: Some(src(FILE_CLUSTERS, *line)),
                });
            } else if !station_lines.contains_key(member) && !group_names.contains_key(member) {
                errors.push(Error::Referential {
                    code: member.clone(),
                    context: format!("as a member of cluster {id}"),
                    at: Some(src(FILE_CLUSTERS, *line)),
                });
            } else {
                members.push(member.clone());
            }
        }
        members.sort();
        clusters.push(StationCluster {
            cluster_id: id.clone(),
            members,
        });
    }
    clusters.sort_by(|a, b| a.cluster_id.cmp(&b.cluster_id));

    // Fare points: stations, then groups, then clusters.
    let mut point_codes: Vec<String> = Vec::new();
    let mut point_ids: HashMap<String, PointId> = HashMap::new();
    for code in stations
        .iter()
        .map(|s| &s.nlc)
        .chain(groups.iter().map(|g| &g.group_nlc))
        .chain(clusters.iter().map(|c| &c.cluster_id))
    {
        point_ids.insert(code.clone(), PointId(point_codes.len() as u32));
        point_codes.push(code.clone());
    }

    // Flows: unique id, endpoints resolve to known fare points.
    let mut flows: Vec<(FlowRecord, u64)> = Vec::new();
    let mut flow_lines: HashMap<u64, u64> = HashMap::new();
    for row in &records.flows {
        let f = &row.value;
        match flow_lines.entry(f.flow_id) {
            Entry::Occupied(first) => {
                errors.push(Error::DuplicateKey {
                    kind: "flow id".into(),
                    key: f.flow_id.to_string(),
                    first: src(FILE_FLOWS, *first.get()),
                    second: src(FILE_FLOWS, row.line),
                });
                continue;
            }
            Entry::Vacant(e) => {
                e.insert(row.line);
            }
        }
        let mut ok = true;
        for (code, side) in [(&f.origin_code, "origin"), (&f.dest_code, "destination")] {
            if !point_ids.contains_key(code.as_str()) {
                errors.push(Error::Referential {
                    code: code.clone(),
                    context: format!("as the {side} of flow {}", f.flow_id),
                    at: Some(src(FILE_FLOWS, row.line)),
                });
                ok = false;
            }
        }
        if ok {
            flows.push((f.clone(), row.line));
        }
    }
    flows.sort_by_key(|(f, _)| f.flow_id);
    let flow_idx_by_id: HashMap<u64, FlowIdx> = flows
        .iter()
        .enumerate()
        .map(|(i, (f, _))| (f.flow_id, FlowIdx(i as u32)))
        .collect();

    // Fares: flow and ticket must exist, (flow, ticket) unique.
    let mut fare_lines: HashMap<(u64, String), u64> = HashMap::new();
    let mut fares_by_flow: Vec<Vec<(TicketId, u32)>> = vec![Vec::new(); flows.len()];
    for row in &records.fares {
        let fare = &row.value;
        match fare_lines.entry((fare.flow_id, fare.ticket_code.clone())) {
            Entry::Occupied(first) => {
                errors.push(Error::DuplicateKey {
                    kind: "fare (flow id, ticket code)".into(),
                    key: format!("{}/{}", fare.flow_id, fare.ticket_code),
                    first: src(FILE_FARES, *first.get()),
                    second: src(FILE_FARES, row.line),
                });
                continue;
            }
            Entry::Vacant(e) => {
                e.insert(row.line);
            }
        }
        let flow = flow_idx_by_id.get(&fare.flow_id);
        if flow.is_none() && !flow_lines.contains_key(&fare.flow_id) {
            errors.push(Error::Referential {
                code: fare.flow_id.to_string(),
                context: "as the flow of a fare record".into(),
                at: Some(src(FILE_FARES, row.line)),
            });
        }
        let ticket = ticket_ids.get(&fare.ticket_code);
        if ticket.is_none() {
            errors.push(Error::Referential {
                code: fare.ticket_code.clone(),
                context: "as the ticket of a fare record".into(),
                at: Some(src(FILE_FARES, row.line)),
            });
        }
        if let (Some(&flow), Some(&ticket)) = (flow, ticket) {
            fares_by_flow[flow.0 as usize].push((ticket, fare.fare_pence));
        }
    }

    if !errors.is_empty() {
        return Err(ErrorReport::new(errors));
    }

    // Membership expansion. One nesting level: clusters may contain groups.
    let mut expand: Vec<Vec<StationIdx>> = Vec::with_capacity(point_codes.len());
    for (i, _) in stations.iter().enumerate() {
        expand.push(vec![StationIdx(i as u32)]);
    }
    for group in &groups {
        expand.push(group.members.iter().map(|m| by_nlc[m]).collect());
    }
    for cluster in &clusters {
        let mut members: Vec<StationIdx> = Vec::new();
        for code in &cluster.members {
            if let Some(&s) = by_nlc.get(code) {
                members.push(s);
            } else {
                let group = &groups[groups
                    .binary_search_by(|g| g.group_nlc.as_str().cmp(code))
                    .expect("validated cluster member")];
                members.extend(group.members.iter().map(|m| by_nlc[m]));
            }
        }
        members.sort();
        members.dedup();
        expand.push(members);
    }

    let mut containing: Vec<Vec<PointId>> = vec![Vec::new(); stations.len()];
    for (point, members) in expand.iter().enumerate() {
        for &s in members {
            containing[s.0 as usize].push(PointId(point as u32));
        }
    }
    for points in &mut containing {
        points.sort_by(|a, b| point_codes[a.0 as usize].cmp(&point_codes[b.0 as usize]));
    }

    let mut flow_points: Vec<(PointId, PointId)> = Vec::with_capacity(flows.len());
    let mut flows_from: Vec<Vec<FlowIdx>> = vec![Vec::new(); point_codes.len()];
    let mut flows_to: Vec<Vec<FlowIdx>> = vec![Vec::new(); point_codes.len()];
    for (i, (flow, _)) in flows.iter().enumerate() {
        let origin = point_ids[&flow.origin_code];
        let dest = point_ids[&flow.dest_code];
        flow_points.push((origin, dest));
        flows_from[origin.0 as usize].push(FlowIdx(i as u32));
        flows_to[dest.0 as usize].push(FlowIdx(i as u32));
    }

    let mut fare_offsets: Vec<u32> = Vec::with_capacity(flows.len() + 1);
    let mut fare_entries: Vec<(TicketId, u32)> = Vec::with_capacity(records.fares.len());
    fare_offsets.push(0);
    for entries in &mut fares_by_flow {
        entries.sort_by_key(|&(ticket, _)| ticket);
        fare_entries.extend_from_slice(entries);
        fare_offsets.push(fare_entries.len() as u32);
    }

    Ok(FeedBundle {
        stations,
        groups,
        clusters,
        tickets,
        flows: flows.into_iter().map(|(f, _)| f).collect(),
        by_nlc,
        by_crs,
        ticket_ids,
        point_codes,
        expand,
        containing,
        flow_points,
        flows_from,
        flows_to,
        fare_offsets,
        fare_entries,
    })
}
