//! Parsing and canonical serialization of the feed interchange files.
//!
//! The interchange format is comma-separated text, UTF-8, LF line endings,
//! with a mandatory exact header per file. Every field-level invariant is
//! checked at parse time and all problems in a file are collected into one
//! [`ErrorReport`] rather than failing on the first bad line.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, ErrorReport, Result, SourceRef};
use crate::model::{
    build_bundle, is_cluster_code, is_crs_code, is_nlc_code, is_ticket_code, ClusterMemberRecord,
    Direction, FareRecord, FeedBundle, FeedRecords, FlowRecord, GroupMemberRecord, PoiKind,
    PoiRecord, Row, StationRecord, TicketType, FEED_FILES, FILE_CLUSTERS, FILE_FARES, FILE_FLOWS,
    FILE_GROUPS, FILE_LOCATIONS, FILE_TICKETS,
};

pub const LOCATIONS_HEADER: [&str; 5] = ["nlc", "crs", "name", "lat", "lon"];
pub const GROUPS_HEADER: [&str; 3] = ["group_nlc", "group_name", "member_nlc"];
pub const CLUSTERS_HEADER: [&str; 2] = ["cluster_id", "member_code"];
pub const FLOWS_HEADER: [&str; 4] = ["flow_id", "origin_code", "dest_code", "direction"];
pub const FARES_HEADER: [&str; 3] = ["flow_id", "ticket_code", "fare_pence"];
pub const TICKETS_HEADER: [&str; 2] = ["ticket_code", "name"];
pub const POIS_HEADER: [&str; 5] = ["poi_id", "kind", "name", "lat", "lon"];

fn display_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn csv_error(file: &str, path: &Path, e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::io(path, source),
        csv::ErrorKind::Utf8 { .. } => Error::field(file, line, "encoding", "invalid UTF-8"),
        other => Error::field(file, line, "record", format!("unreadable record: {other:?}")),
    }
}

/// Generic driver: header check, then field validation row by row.
fn parse_file<T>(
    path: &Path,
    header: &[&str],
    mut row_fn: impl FnMut(&str, &csv::StringRecord, u64, &mut Vec<Error>) -> Option<T>,
) -> Result<Vec<Row<T>>, ErrorReport> {
    let file = display_name(path);
    let bytes = std::fs::read(path).map_err(|e| ErrorReport::from(Error::io(path, e)))?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(bytes.as_slice());
    let found = match rdr.headers() {
        Ok(h) => h.iter().collect::<Vec<_>>().join(","),
        Err(e) => return Err(ErrorReport::from(csv_error(&file, path, e))),
    };
    let expected = header.join(",");
    if found != expected {
        return Err(ErrorReport::from(Error::Schema {
            file,
            expected,
            found,
        }));
    }
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for result in rdr.records() {
        match result {
            Ok(rec) => {
                let line = rec.position().map(|p| p.line()).unwrap_or(0);
                if rec.len() != header.len() {
                    errors.push(Error::field(
                        &file,
                        line,
                        "fields",
                        format!("expected {} fields, found {}", header.len(), rec.len()),
                    ));
                    continue;
                }
                if let Some(value) = row_fn(&file, &rec, line, &mut errors) {
                    rows.push(Row::new(value, line));
                }
            }
            Err(e) => errors.push(csv_error(&file, path, e)),
        }
    }
    if errors.is_empty() {
        Ok(rows)
    } else {
        Err(ErrorReport::new(errors))
    }
}

fn code_field(
    file: &str,
    line: u64,
    column: &str,
    raw: &str,
    pred: fn(&str) -> bool,
    reason: &str,
    errors: &mut Vec<Error>,
) -> Option<String> {
    if pred(raw) {
        Some(raw.to_string())
    } else {
        errors.push(Error::field(file, line, column, reason));
        None
    }
}

fn name_field(file: &str, line: u64, column: &str, raw: &str, errors: &mut Vec<Error>) -> Option<String> {
    if raw.is_empty() {
        errors.push(Error::field(file, line, column, "must not be empty"));
        None
    } else {
        Some(raw.to_string())
    }
}

fn coord_field(
    file: &str,
    line: u64,
    column: &str,
    raw: &str,
    lo: f64,
    hi: f64,
    errors: &mut Vec<Error>,
) -> Option<f64> {
    match raw.parse::<f64>() {
        Ok(v) if v.is_finite() && (lo..=hi).contains(&v) => Some(v),
        Ok(v) if !v.is_finite() => {
            errors.push(Error::field(file, line, column, "must be a finite number"));
            None
        }
        Ok(_) => {
            errors.push(Error::field(
                file,
                line,
                column,
                format!("must be between {lo} and {hi} degrees"),
            ));
            None
        }
        Err(_) => {
            errors.push(Error::field(file, line, column, "must be a decimal number"));
            None
        }
    }
}

fn flow_id_field(file: &str, line: u64, column: &str, raw: &str, errors: &mut Vec<Error>) -> Option<u64> {
    match raw.parse::<u64>() {
        Ok(id) if id > 0 => Some(id),
        _ => {
            errors.push(Error::field(file, line, column, "must be a positive integer"));
            None
        }
    }
}

fn point_code_field(file: &str, line: u64, column: &str, raw: &str, errors: &mut Vec<Error>) -> Option<String> {
    if is_nlc_code(raw) || is_cluster_code(raw) {
        Some(raw.to_string())
    } else {
        errors.push(Error::field(
            file,
            line,
            column,
            "must be a 4-digit code or a K-prefixed cluster id",
        ));
        None
    }
}

/// Parses `locations.csv`: stations with NLC, CRS, name, and coordinates.
pub fn parse_locations(path: &Path) -> Result<Vec<Row<StationRecord>>, ErrorReport> {
    parse_file(path, &LOCATIONS_HEADER, |file, rec, line, errors| {
        let nlc = code_field(file, line, "nlc", &rec[0], is_nlc_code, "must be a 4-digit code", errors);
        let crs = code_field(
            file,
            line,
            "crs",
            &rec[1],
            is_crs_code,
            "must be a 3-letter uppercase code",
            errors,
        );
        let name = name_field(file, line, "name", &rec[2], errors);
        let lat = coord_field(file, line, "lat", &rec[3], -90.0, 90.0, errors);
        let lon = coord_field(file, line, "lon", &rec[4], -180.0, 180.0, errors);
        Some(StationRecord {
            nlc: nlc?,
            crs: crs?,
            name: name?,
            lat: lat?,
            lon: lon?,
        })
    })
}

/// Parses `groups.csv`: one row per group member.
pub fn parse_groups(path: &Path) -> Result<Vec<Row<GroupMemberRecord>>, ErrorReport> {
    parse_file(path, &GROUPS_HEADER, |file, rec, line, errors| {
        let group_nlc = code_field(
            file,
            line,
            "group_nlc",
            &rec[0],
            is_nlc_code,
            "must be a 4-digit code",
            errors,
        );
        let group_name = name_field(file, line, "group_name", &rec[1], errors);
        let member_nlc = code_field(
            file,
            line,
            "member_nlc",
            &rec[2],
            is_nlc_code,
            "must be a 4-digit code",
            errors,
        );
        Some(GroupMemberRecord {
            group_nlc: group_nlc?,
            group_name: group_name?,
            member_nlc: member_nlc?,
        })
    })
}

/// Parses `clusters.csv`: one row per cluster member.
pub fn parse_clusters(path: &Path) -> Result<Vec<Row<ClusterMemberRecord>>, ErrorReport> {
    parse_file(path, &CLUSTERS_HEADER, |file, rec, line, errors| {
        let cluster_id = code_field(
            file,
            line,
            "cluster_id",
            &rec[0],
            is_cluster_code,
            "must be a K-prefixed cluster id",
            errors,
        );
        let member_code = point_code_field(file, line, "member_code", &rec[1], errors);
        Some(ClusterMemberRecord {
            cluster_id: cluster_id?,
            member_code: member_code?,
        })
    })
}

/// Parses `flows.csv`: priced relations between fare points.
pub fn parse_flows(path: &Path) -> Result<Vec<Row<FlowRecord>>, ErrorReport> {
    parse_file(path, &FLOWS_HEADER, |file, rec, line, errors| {
        let flow_id = flow_id_field(file, line, "flow_id", &rec[0], errors);
        let origin = point_code_field(file, line, "origin_code", &rec[1], errors);
        let dest = point_code_field(file, line, "dest_code", &rec[2], errors);
        if let (Some(o), Some(d)) = (&origin, &dest) {
            if o == d {
                errors.push(Error::field(
                    file,
                    line,
                    "dest_code",
                    "must differ from origin_code",
                ));
                return None;
            }
        }
        let direction = match Direction::from_code(&rec[3]) {
            Some(d) => Some(d),
            None => {
                errors.push(Error::field(file, line, "direction", "must be S or R"));
                None
            }
        };
        Some(FlowRecord {
            flow_id: flow_id?,
            origin_code: origin?,
            dest_code: dest?,
            direction: direction?,
        })
    })
}

/// Parses `fares.csv`: (flow, ticket) priced in whole pence.
pub fn parse_fares(path: &Path) -> Result<Vec<Row<FareRecord>>, ErrorReport> {
    parse_file(path, &FARES_HEADER, |file, rec, line, errors| {
        let flow_id = flow_id_field(file, line, "flow_id", &rec[0], errors);
        let ticket = code_field(
            file,
            line,
            "ticket_code",
            &rec[1],
            is_ticket_code,
            "must be 3 alphanumeric characters",
            errors,
        );
        let fare = match rec[2].parse::<u32>() {
            Ok(p) => Some(p),
            Err(_) => {
                errors.push(Error::field(
                    file,
                    line,
                    "fare_pence",
                    "must be a non-negative integer number of pence",
                ));
                None
            }
        };
        Some(FareRecord {
            flow_id: flow_id?,
            ticket_code: ticket?,
            fare_pence: fare?,
        })
    })
}

/// Parses `tickets.csv`: the ticket-type catalogue.
pub fn parse_tickets(path: &Path) -> Result<Vec<Row<TicketType>>, ErrorReport> {
    parse_file(path, &TICKETS_HEADER, |file, rec, line, errors| {
        let code = code_field(
            file,
            line,
            "ticket_code",
            &rec[0],
            is_ticket_code,
            "must be 3 alphanumeric characters",
            errors,
        );
        let name = name_field(file, line, "name", &rec[1], errors);
        Some(TicketType {
            ticket_code: code?,
            name: name?,
        })
    })
}

/// Parses a POI file (`pois.csv` schema). POI ids must be unique within the
/// file; duplicates are reported with both line numbers.
pub fn parse_poi_file(path: &Path) -> Result<Vec<Row<PoiRecord>>, ErrorReport> {
    let mut seen: HashMap<String, u64> = HashMap::new();
    parse_file(path, &POIS_HEADER, move |file, rec, line, errors| {
        let poi_id = name_field(file, line, "poi_id", &rec[0], errors);
        let kind = match PoiKind::from_str(&rec[1]) {
            Some(k) => Some(k),
            None => {
                errors.push(Error::field(
                    file,
                    line,
                    "kind",
                    "must be one of HOSPITAL, EMPLOYMENT_CENTRE, TOWN_CENTRE",
                ));
                None
            }
        };
        let name = name_field(file, line, "name", &rec[2], errors);
        let lat = coord_field(file, line, "lat", &rec[3], -90.0, 90.0, errors);
        let lon = coord_field(file, line, "lon", &rec[4], -180.0, 180.0, errors);
        let poi_id = poi_id?;
        if let Some(&first) = seen.get(&poi_id) {
            errors.push(Error::DuplicateKey {
                kind: "poi id".into(),
                key: poi_id,
                first: SourceRef {
                    file: file.to_string(),
                    line: first,
                },
                second: SourceRef {
                    file: file.to_string(),
                    line,
                },
            });
            return None;
        }
        seen.insert(poi_id.clone(), line);
        Some(PoiRecord {
            poi_id,
            kind: kind?,
            name: name?,
            lat: lat?,
            lon: lon?,
        })
    })
}

/// Parses all six feed files from a directory into record sequences.
///
/// Missing files are reported together before any parsing; parse errors are
/// aggregated across files.
pub fn load_records(dir: &Path) -> Result<FeedRecords, ErrorReport> {
    let mut errors: Vec<Error> = Vec::new();
    for name in FEED_FILES {
        let path = dir.join(name);
        if !path.is_file() {
            errors.push(Error::MissingFile { path });
        }
    }
    if !errors.is_empty() {
        return Err(ErrorReport::new(errors));
    }

    let mut records = FeedRecords::default();
    macro_rules! collect {
        ($slot:ident, $parser:ident, $name:ident) => {
            match $parser(&dir.join($name)) {
                Ok(rows) => records.$slot = rows,
                Err(report) => errors.extend(report.errors),
            }
        };
    }
    collect!(stations, parse_locations, FILE_LOCATIONS);
    collect!(groups, parse_groups, FILE_GROUPS);
    collect!(clusters, parse_clusters, FILE_CLUSTERS);
    collect!(flows, parse_flows, FILE_FLOWS);
    collect!(fares, parse_fares, FILE_FARES);
    collect!(tickets, parse_tickets, FILE_TICKETS);

    if errors.is_empty() {
        Ok(records)
    } else {
        Err(ErrorReport::new(errors))
    }
}

/// Parses and validates a full feed directory into an indexed [`FeedBundle`].
pub fn load_feed(dir: &Path) -> Result<FeedBundle, ErrorReport> {
    build_bundle(load_records(dir)?)
}

fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

fn write_csv<const N: usize>(header: [&str; N], rows: impl Iterator<Item = [String; N]>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
}

/// Serializes stations to canonical `locations.csv` form.
pub fn locations_to_csv(stations: &[StationRecord]) -> String {
    write_csv(
        LOCATIONS_HEADER,
        stations.iter().map(|s| {
            [
                s.nlc.clone(),
                s.crs.clone(),
                s.name.clone(),
                fmt_f64(s.lat),
                fmt_f64(s.lon),
            ]
        }),
    )
}

/// Serializes group member rows to canonical `groups.csv` form.
pub fn groups_to_csv(rows: &[GroupMemberRecord]) -> String {
    write_csv(
        GROUPS_HEADER,
        rows.iter()
            .map(|g| [g.group_nlc.clone(), g.group_name.clone(), g.member_nlc.clone()]),
    )
}

/// Serializes cluster member rows to canonical `clusters.csv` form.
pub fn clusters_to_csv(rows: &[ClusterMemberRecord]) -> String {
    write_csv(
        CLUSTERS_HEADER,
        rows.iter().map(|c| [c.cluster_id.clone(), c.member_code.clone()]),
    )
}

/// Serializes flows to canonical `flows.csv` form.
pub fn flows_to_csv(rows: &[FlowRecord]) -> String {
    write_csv(
        FLOWS_HEADER,
        rows.iter().map(|f| {
            [
                f.flow_id.to_string(),
                f.origin_code.clone(),
                f.dest_code.clone(),
                f.direction.code().to_string(),
            ]
        }),
    )
}

/// Serializes fares to canonical `fares.csv` form.
pub fn fares_to_csv(rows: &[FareRecord]) -> String {
    write_csv(
        FARES_HEADER,
        rows.iter().map(|f| {
            [
                f.flow_id.to_string(),
                f.ticket_code.clone(),
                f.fare_pence.to_string(),
            ]
        }),
    )
}

/// Serializes ticket types to canonical `tickets.csv` form.
pub fn tickets_to_csv(rows: &[TicketType]) -> String {
    write_csv(
        TICKETS_HEADER,
        rows.iter().map(|t| [t.ticket_code.clone(), t.name.clone()]),
    )
}

/// Serializes POIs to canonical `pois.csv` form.
pub fn pois_to_csv(rows: &[PoiRecord]) -> String {
    write_csv(
        POIS_HEADER,
        rows.iter().map(|p| {
            [
                p.poi_id.clone(),
                p.kind.as_str().to_string(),
                p.name.clone(),
                fmt_f64(p.lat),
                fmt_f64(p.lon),
            ]
        }),
    )
}

/// Serializes parsed record sequences back to the six canonical files,
/// preserving record order.
pub fn records_to_files(records: &FeedRecords) -> Vec<(&'static str, String)> {
    fn values<T: Clone>(rows: &[Row<T>]) -> Vec<T> {
        rows.iter().map(|r| r.value.clone()).collect()
    }
    vec![
        (FILE_LOCATIONS, locations_to_csv(&values(&records.stations))),
        (FILE_GROUPS, groups_to_csv(&values(&records.groups))),
        (FILE_CLUSTERS, clusters_to_csv(&values(&records.clusters))),
        (FILE_FLOWS, flows_to_csv(&values(&records.flows))),
        (FILE_FARES, fares_to_csv(&values(&records.fares))),
        (FILE_TICKETS, tickets_to_csv(&values(&records.tickets))),
    ]
}

/// Serializes a bundle to its canonical file set: stations by NLC, group and
/// cluster members ascending, flows by flow id, fares by (flow id, ticket).
/// Two bundles built from the same records always serialize identically.
pub fn canonical_files(bundle: &FeedBundle) -> Vec<(&'static str, String)> {
    let group_rows: Vec<GroupMemberRecord> = bundle
        .groups()
        .iter()
        .flat_map(|g| {
            g.members.iter().map(|m| GroupMemberRecord {
                group_nlc: g.group_nlc.clone(),
                group_name: g.name.clone(),
                member_nlc: m.clone(),
            })
        })
        .collect();
    let cluster_rows: Vec<ClusterMemberRecord> = bundle
        .clusters()
        .iter()
        .flat_map(|c| {
            c.members.iter().map(|m| ClusterMemberRecord {
                cluster_id: c.cluster_id.clone(),
                member_code: m.clone(),
            })
        })
        .collect();
    let fare_rows: Vec<FareRecord> = bundle
        .flows()
        .iter()
        .enumerate()
        .flat_map(|(i, f)| {
            bundle
                .fares_of(crate::model::FlowIdx(i as u32))
                .iter()
                .map(|&(ticket, fare_pence)| FareRecord {
                    flow_id: f.flow_id,
                    ticket_code: bundle.tickets()[ticket.0 as usize].ticket_code.clone(),
                    fare_pence,
                })
                .collect::<Vec<_>>()
        })
        .collect();
    vec![
        (FILE_LOCATIONS, locations_to_csv(bundle.stations())),
        (FILE_GROUPS, groups_to_csv(&group_rows)),
        (FILE_CLUSTERS, clusters_to_csv(&cluster_rows)),
        (FILE_FLOWS, flows_to_csv(bundle.flows())),
        (FILE_FARES, fares_to_csv(&fare_rows)),
        (FILE_TICKETS, tickets_to_csv(bundle.tickets())),
    ]
}
