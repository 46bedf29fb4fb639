//! Deterministic synthetic feed generation.
//!
//! Produces feeds in the canonical interchange format for oracle testing and
//! benchmarks. Generation is a pure function of the spec: the same spec
//! (including seed) always writes byte-identical files. Station coordinates
//! fall inside Great Britain's bounding box. Synthetic feeds use clusters but
//! no station groups, and every flow carries a fare for every ticket type, so
//! the fare count is always `flow_count * ticket_codes.len()`.

use std::collections::BTreeSet;
use std::path::Path;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ingest::{
    clusters_to_csv, fares_to_csv, flows_to_csv, groups_to_csv, locations_to_csv, tickets_to_csv,
};
use crate::model::{
    is_ticket_code, ClusterMemberRecord, Direction, FareRecord, FlowRecord, StationRecord,
    TicketType, FILE_CLUSTERS, FILE_FARES, FILE_FLOWS, FILE_GROUPS, FILE_LOCATIONS, FILE_TICKETS,
};

/// Great Britain's bounding box, the coordinate range of generated stations.
pub const GB_LAT_RANGE: (f64, f64) = (49.9, 58.7);
pub const GB_LON_RANGE: (f64, f64) = (-8.2, 1.8);

/// Parameters of a synthetic feed. Generation is deterministic in all of
/// them, seed included.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticFeedSpec {
    pub station_count: u32,
    pub cluster_count: u32,
    /// Cluster sizes are drawn uniformly from 1..=2*mean-1.
    pub mean_cluster_size: u32,
    pub flow_count: u64,
    pub ticket_codes: Vec<TicketType>,
    pub seed: u64,
}

impl SyntheticFeedSpec {
    /// A spec with the default cluster size (8) and ticket catalogue
    /// (`SGL` and `RTN`).
    pub fn new(station_count: u32, cluster_count: u32, flow_count: u64, seed: u64) -> Self {
        SyntheticFeedSpec {
            station_count,
            cluster_count,
            mean_cluster_size: 8,
            flow_count,
            ticket_codes: vec![
                TicketType {
                    ticket_code: "SGL".into(),
                    name: "Anytime Single".into(),
                },
                TicketType {
                    ticket_code: "RTN".into(),
                    name: "Anytime Return".into(),
                },
            ],
            seed,
        }
    }
}

fn validate(spec: &SyntheticFeedSpec) -> Result<()> {
    let fail = |reason: String| Err(Error::InvalidParameter { reason });
    if spec.station_count == 0 || spec.cluster_count == 0 || spec.flow_count == 0 {
        return fail("station, cluster, and flow counts must all be positive".into());
    }
    if spec.mean_cluster_size == 0 {
        return fail("mean cluster size must be positive".into());
    }
    if spec.station_count > 9000 {
        return fail(format!(
            "at most 9000 stations fit the 4-digit NLC space, got {}",
            spec.station_count
        ));
    }
    if spec.cluster_count > 1000 {
        return fail(format!(
            "at most 1000 clusters fit the K-prefixed id space, got {}",
            spec.cluster_count
        ));
    }
    if spec.ticket_codes.is_empty() {
        return fail("at least one ticket type is required".into());
    }
    let mut seen = BTreeSet::new();
    for t in &spec.ticket_codes {
        if !is_ticket_code(&t.ticket_code) {
            return fail(format!("bad ticket code {:?}", t.ticket_code));
        }
        if t.name.is_empty() {
            return fail(format!("ticket {} needs a name", t.ticket_code));
        }
        if !seen.insert(&t.ticket_code) {
            return fail(format!("duplicate ticket code {}", t.ticket_code));
        }
    }
    Ok(())
}

fn crs_code(i: u32) -> String {
    let letter = |n: u32| (b'A' + (n % 26) as u8) as char;
    [letter(i / 676), letter(i / 26), letter(i)].iter().collect()
}

fn round5(v: f64) -> f64 {
    (v * 100_000.0).round() / 100_000.0
}

/// Generates a synthetic feed into `out_dir` (created if needed), writing
/// all six canonical files. The result always passes `load_feed`.
pub fn generate_synthetic_feed(spec: &SyntheticFeedSpec, out_dir: &Path) -> Result<()> {
    validate(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut stations = Vec::with_capacity(spec.station_count as usize);
    for i in 0..spec.station_count {
        let crs = crs_code(i);
        stations.push(StationRecord {
            nlc: format!("{:04}", 1000 + i),
            crs: crs.clone(),
            name: format!("Station {crs}"),
            lat: round5(rng.random_range(GB_LAT_RANGE.0..GB_LAT_RANGE.1)),
            lon: round5(rng.random_range(GB_LON_RANGE.0..GB_LON_RANGE.1)),
        });
    }

    let mut cluster_rows = Vec::new();
    for k in 0..spec.cluster_count {
        let cluster_id = format!("K{k:03}");
        let max_size = (2 * spec.mean_cluster_size - 1).min(spec.station_count);
        let size = rng.random_range(1..=max_size.max(1));
        let mut members: BTreeSet<u32> = BTreeSet::new();
        while members.len() < size as usize {
            members.insert(rng.random_range(0..spec.station_count));
        }
        for m in members {
            cluster_rows.push(ClusterMemberRecord {
                cluster_id: cluster_id.clone(),
                member_code: stations[m as usize].nlc.clone(),
            });
        }
    }

    // Fare points: stations first, then clusters. Pairs may repeat across
    // flows; real feeds price many flows between the same pair.
    let total_points = spec.station_count + spec.cluster_count;
    let point_code = |p: u32, stations: &[StationRecord]| -> String {
        if p < spec.station_count {
            stations[p as usize].nlc.clone()
        } else {
            format!("K{:03}", p - spec.station_count)
        }
    };
    let mut flows = Vec::with_capacity(spec.flow_count as usize);
    for flow_id in 1..=spec.flow_count {
        let (origin, dest) = loop {
            let o = rng.random_range(0..total_points);
            let d = rng.random_range(0..total_points);
            if o != d {
                break (o, d);
            }
        };
        let direction = if rng.random_range(0..2) == 0 {
            Direction::Single
        } else {
            Direction::Reversible
        };
        flows.push(FlowRecord {
            flow_id,
            origin_code: point_code(origin, &stations),
            dest_code: point_code(dest, &stations),
            direction,
        });
    }

    let mut fares = Vec::with_capacity(flows.len() * spec.ticket_codes.len());
    for flow in &flows {
        let base: u32 = rng.random_range(100..=20_000);
        for (i, ticket) in spec.ticket_codes.iter().enumerate() {
            fares.push(FareRecord {
                flow_id: flow.flow_id,
                ticket_code: ticket.ticket_code.clone(),
                // Later ticket types price like returns: multiples of the base.
                fare_pence: base * (i as u32 + 1),
            });
        }
    }

    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let files = [
        (FILE_LOCATIONS, locations_to_csv(&stations)),
        (FILE_GROUPS, groups_to_csv(&[])),
        (FILE_CLUSTERS, clusters_to_csv(&cluster_rows)),
        (FILE_FLOWS, flows_to_csv(&flows)),
        (FILE_FARES, fares_to_csv(&fares)),
        (FILE_TICKETS, tickets_to_csv(&spec.ticket_codes)),
    ];
    for (name, content) in files {
        let path = out_dir.join(name);
        std::fs::write(&path, content).map_err(|e| Error::io(path.clone(), e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::load_feed;
    use std::collections::BTreeMap;

    fn read_all(dir: &Path) -> BTreeMap<String, Vec<u8>> {
        let mut out = BTreeMap::new();
        for entry in std::fs::read_dir(dir).unwrap() {
            let entry = entry.unwrap();
            out.insert(
                entry.file_name().to_string_lossy().into_owned(),
                std::fs::read(entry.path()).unwrap(),
            );
        }
        out
    }

    #[test]
    fn identical_specs_write_identical_bytes() {
        let spec = SyntheticFeedSpec::new(10, 2, 20, 7);
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        generate_synthetic_feed(&spec, a.path()).unwrap();
        generate_synthetic_feed(&spec, b.path()).unwrap();
        assert_eq!(read_all(a.path()), read_all(b.path()));
    }

    #[test]
    fn different_seeds_differ() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        generate_synthetic_feed(&SyntheticFeedSpec::new(10, 2, 20, 7), a.path()).unwrap();
        generate_synthetic_feed(&SyntheticFeedSpec::new(10, 2, 20, 8), b.path()).unwrap();
        assert_ne!(
            read_all(a.path())["flows.csv"],
            read_all(b.path())["flows.csv"]
        );
    }

    #[test]
    fn generated_feed_loads_with_expected_counts() {
        let dir = tempfile::tempdir().unwrap();
        let spec = SyntheticFeedSpec::new(25, 4, 60, 42);
        generate_synthetic_feed(&spec, dir.path()).unwrap();
        let bundle = load_feed(dir.path()).unwrap();
        assert_eq!(bundle.stations().len(), 25);
        assert_eq!(bundle.clusters().len(), 4);
        assert_eq!(bundle.flows().len(), 60);
        assert_eq!(bundle.fare_count(), 120);
        assert!(bundle.groups().is_empty());
        for s in bundle.stations() {
            assert!((GB_LAT_RANGE.0..=GB_LAT_RANGE.1).contains(&s.lat));
            assert!((GB_LON_RANGE.0..=GB_LON_RANGE.1).contains(&s.lon));
        }
    }

    #[test]
    fn coordinates_survive_a_round_trip_exactly() {
        let dir = tempfile::tempdir().unwrap();
        generate_synthetic_feed(&SyntheticFeedSpec::new(30, 2, 5, 3), dir.path()).unwrap();
        let first = std::fs::read(dir.path().join("locations.csv")).unwrap();
        let rows = crate::ingest::parse_locations(&dir.path().join("locations.csv")).unwrap();
        let values: Vec<StationRecord> = rows.into_iter().map(|r| r.value).collect();
        assert_eq!(locations_to_csv(&values).as_bytes(), first.as_slice());
    }

    #[test]
    fn inconsistent_specs_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let cases = [
            SyntheticFeedSpec::new(0, 1, 1, 0),
            SyntheticFeedSpec::new(1, 0, 1, 0),
            SyntheticFeedSpec::new(1, 1, 0, 0),
            SyntheticFeedSpec::new(9001, 1, 1, 0),
            SyntheticFeedSpec::new(10, 1001, 1, 0),
            SyntheticFeedSpec {
                ticket_codes: Vec::new(),
                ..SyntheticFeedSpec::new(10, 2, 5, 0)
            },
            SyntheticFeedSpec {
                ticket_codes: vec![TicketType {
                    ticket_code: "TOOLONG".into(),
                    name: "Bad".into(),
                }],
                ..SyntheticFeedSpec::new(10, 2, 5, 0)
            },
        ];
        for spec in cases {
            assert!(
                matches!(
                    generate_synthetic_feed(&spec, dir.path()),
                    Err(Error::InvalidParameter { .. })
                ),
                "spec should be rejected: {spec:?}"
            );
        }
    }
}
