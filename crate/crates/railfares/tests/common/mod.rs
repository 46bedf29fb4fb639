//! Shared support for the integration tests: a brute-force fare oracle
//! that never touches the library's indexes, a random feed generator with
//! its own serializer, and a loopback HTTP server for download tests.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{Read, Write};
use std::net::TcpListener;
use std::path::Path;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A feed held as plain rows, the way the CSV files spell it.
#[derive(Debug, Clone, Default)]
pub struct OracleFeed {
    /// nlc, crs, name, lat, lon
    pub stations: Vec<(String, String, String, f64, f64)>,
    /// group_nlc, group_name, member_nlc
    pub groups: Vec<(String, String, String)>,
    /// cluster_id, member_code
    pub clusters: Vec<(String, String)>,
    /// flow_id, origin_code, dest_code, direction (S or R)
    pub flows: Vec<(u64, String, String, char)>,
    /// flow_id, ticket_code, fare_pence
    pub fares: Vec<(u64, String, u32)>,
    /// ticket_code, name
    pub tickets: Vec<(String, String)>,
}

impl OracleFeed {
    /// The tiny-gb reference feed, spelled out by hand.
    pub fn tiny_gb() -> OracleFeed {
        let s = |a: &str, b: &str, c: &str, lat, lon| {
            (a.to_string(), b.to_string(), c.to_string(), lat, lon)
        };
        OracleFeed {
            stations: vec![
                s("1000", "AAA", "Alphaton", 50.70, -3.50),
                s("1001", "BBB", "Betaford", 51.45, -2.58),
                s("1002", "CCC", "Gammaville", 51.48, -2.60),
                s("1003", "DDD", "Deltaby", 52.48, -1.90),
                s("1004", "EEE", "Epsilon Halt", 50.72, -3.53),
            ],
            groups: vec![
                ("0900".into(), "Alphaton Stns".into(), "1000".into()),
                ("0900".into(), "Alphaton Stns".into(), "1004".into()),
            ],
            clusters: vec![
                ("K500".into(), "1001".into()),
                ("K500".into(), "1002".into()),
                ("K501".into(), "0900".into()),
                ("K501".into(), "1003".into()),
            ],
            flows: vec![
                (1, "1000".into(), "1001".into(), 'S'),
                (2, "1000".into(), "K500".into(), 'R'),
                (3, "K501".into(), "1001".into(), 'S'),
                (4, "1000".into(), "1003".into(), 'S'),
            ],
            fares: vec![
                (1, "SGL".into(), 500),
                (2, "SGL".into(), 450),
                (2, "RTN".into(), 800),
                (3, "SGL".into(), 700),
                (4, "SGL".into(), 2000),
                (4, "RTN".into(), 3600),
            ],
            tickets: vec![
                ("SGL".into(), "Anytime Single".into()),
                ("RTN".into(), "Anytime Return".into()),
            ],
        }
    }

    /// Serializes the feed with its own plain writer (no library code).
    pub fn write_to(&self, dir: &Path) {
        std::fs::create_dir_all(dir).unwrap();
        let mut locations = String::from("nlc,crs,name,lat,lon\n");
        for (nlc, crs, name, lat, lon) in &self.stations {
            locations.push_str(&format!("{nlc},{crs},{name},{lat},{lon}\n"));
        }
        let mut groups = String::from("group_nlc,group_name,member_nlc\n");
        for (g, name, member) in &self.groups {
            groups.push_str(&format!("{g},{name},{member}\n"));
        }
        let mut clusters = String::from("cluster_id,member_code\n");
        for (c, member) in &self.clusters {
            clusters.push_str(&format!("{c},{member}\n"));
        }
        let mut flows = String::from("flow_id,origin_code,dest_code,direction\n");
        for (id, o, d, dir) in &self.flows {
            flows.push_str(&format!("{id},{o},{d},{dir}\n"));
        }
        let mut fares = String::from("flow_id,ticket_code,fare_pence\n");
        for (id, t, p) in &self.fares {
            fares.push_str(&format!("{id},{t},{p}\n"));
        }
        let mut tickets = String::from("ticket_code,name\n");
        for (t, name) in &self.tickets {
            tickets.push_str(&format!("{t},{name}\n"));
        }
        for (file, text) in [
            ("locations.csv", locations),
            ("groups.csv", groups),
            ("clusters.csv", clusters),
            ("flows.csv", flows),
            ("fares.csv", fares),
            ("tickets.csv", tickets),
        ] {
            std::fs::write(dir.join(file), text).unwrap();
        }
    }
}

/// Brute-force fare answers computed straight from the rows: full flow
/// scan per query, memberships recomputed from the raw group and cluster
/// rows, minimum taken at the end.
pub struct Oracle {
    pub feed: OracleFeed,
    member_of: BTreeMap<String, BTreeSet<String>>,
    fare_by: HashMap<(u64, String), u32>,
}

impl Oracle {
    pub fn new(feed: OracleFeed) -> Oracle {
        let mut member_of = BTreeMap::new();
        for (nlc, ..) in &feed.stations {
            let mut points = BTreeSet::new();
            points.insert(nlc.clone());
            for (g, _, member) in &feed.groups {
                if member == nlc {
                    points.insert(g.clone());
                }
            }
            for (c, code) in &feed.clusters {
                let direct = code == nlc;
                let via_group = feed
                    .groups
                    .iter()
                    .any(|(g, _, member)| g == code && member == nlc);
                if direct || via_group {
                    points.insert(c.clone());
                }
            }
            member_of.insert(nlc.clone(), points);
        }
        let fare_by = feed
            .fares
            .iter()
            .map(|(id, t, p)| ((*id, t.clone()), *p))
            .collect();
        Oracle { feed, member_of, fare_by }
    }

    pub fn station_nlcs(&self) -> Vec<String> {
        let mut nlcs: Vec<String> = self.feed.stations.iter().map(|s| s.0.clone()).collect();
        nlcs.sort();
        nlcs
    }

    /// Minimum fare between two stations, `None` when no flow prices the
    /// pair (a station to itself included).
    pub fn min_fare(&self, origin_nlc: &str, dest_nlc: &str, ticket: &str) -> Option<u32> {
        if origin_nlc == dest_nlc {
            return None;
        }
        let from = &self.member_of[origin_nlc];
        let to = &self.member_of[dest_nlc];
        let mut best: Option<u32> = None;
        for (id, o, d, dir) in &self.feed.flows {
            let Some(&fare) = self.fare_by.get(&(*id, ticket.to_string())) else {
                continue;
            };
            let forward = from.contains(o) && to.contains(d);
            let reversed = *dir == 'R' && from.contains(d) && to.contains(o);
            if forward || reversed {
                best = Some(best.map_or(fare, |b| b.min(fare)));
            }
        }
        best
    }

    /// One OD row: every destination with a defined minimum fare.
    pub fn od_row(&self, origin_nlc: &str, ticket: &str) -> BTreeMap<String, u32> {
        self.station_nlcs()
            .iter()
            .filter_map(|d| self.min_fare(origin_nlc, d, ticket).map(|f| (d.clone(), f)))
            .collect()
    }

    /// Stations whose minimum fare fits the budget.
    pub fn reachable(&self, origin_nlc: &str, ticket: &str, budget: u32) -> BTreeSet<String> {
        self.station_nlcs()
            .iter()
            .filter(|d| self.min_fare(origin_nlc, d, ticket).is_some_and(|f| f <= budget))
            .cloned()
            .collect()
    }

    /// Minimum fares of every priced ordered pair, origin-major order.
    pub fn network_distribution(&self, ticket: &str) -> Vec<u32> {
        let nlcs = self.station_nlcs();
        let mut out = Vec::new();
        for o in &nlcs {
            for d in &nlcs {
                if let Some(f) = self.min_fare(o, d, ticket) {
                    out.push(f);
                }
            }
        }
        out
    }
}

fn crs(i: usize) -> String {
    let letter = |n: usize| (b'A' + (n % 26) as u8) as char;
    [letter(i / 676), letter(i / 26), letter(i)].iter().collect()
}

/// A random feed that satisfies every feed invariant: unique keys, valid
/// code shapes, resolvable references, no nesting, no self-flows. Stations
/// can sit in several groups and clusters at once, fares can be zero, and
/// some (flow, ticket) pairs are left unpriced.
pub fn random_feed(seed: u64) -> OracleFeed {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut feed = OracleFeed::default();

    let n_stations = rng.random_range(2..=30usize);
    for i in 0..n_stations {
        feed.stations.push((
            format!("{}", 1000 + i),
            crs(i),
            format!("Station {i}"),
            50.0 + rng.random_range(0..800) as f64 / 100.0,
            -5.5 + rng.random_range(0..700) as f64 / 100.0,
        ));
    }
    let station_nlcs: Vec<String> = feed.stations.iter().map(|s| s.0.clone()).collect();

    let n_groups = rng.random_range(0..=3usize).min(n_stations);
    for g in 0..n_groups {
        let group_nlc = format!("09{g:02}");
        let name = format!("Group {g}");
        let size = rng.random_range(1..=3usize.min(n_stations));
        let mut members = BTreeSet::new();
        while members.len() < size {
            members.insert(station_nlcs[rng.random_range(0..n_stations)].clone());
        }
        for m in members {
            feed.groups.push((group_nlc.clone(), name.clone(), m));
        }
    }
    let group_nlcs: Vec<String> = {
        let mut v: Vec<String> = feed.groups.iter().map(|g| g.0.clone()).collect();
        v.dedup();
        v
    };

    let n_clusters = rng.random_range(0..=10usize);
    let mut member_pool: Vec<String> = station_nlcs.clone();
    member_pool.extend(group_nlcs.iter().cloned());
    for c in 0..n_clusters {
        let id = format!("K{c:03}");
        let size = rng.random_range(1..=4usize.min(member_pool.len()));
        let mut members = BTreeSet::new();
        while members.len() < size {
            members.insert(member_pool[rng.random_range(0..member_pool.len())].clone());
        }
        for m in members {
            feed.clusters.push((id.clone(), m));
        }
    }

    feed.tickets.push(("SGL".into(), "Anytime Single".into()));
    feed.tickets.push(("RTN".into(), "Anytime Return".into()));
    let ticket_codes = ["SGL", "RTN"];

    let mut point_pool: Vec<String> = member_pool.clone();
    point_pool.extend((0..n_clusters).map(|c| format!("K{c:03}")));
    let n_flows = rng.random_range(1..=200usize);
    for id in 1..=n_flows as u64 {
        let origin = point_pool[rng.random_range(0..point_pool.len())].clone();
        let dest = loop {
            let d = point_pool[rng.random_range(0..point_pool.len())].clone();
            if d != origin {
                break d;
            }
        };
        let direction = if rng.random_range(0..2) == 0 { 'S' } else { 'R' };
        feed.flows.push((id, origin, dest, direction));
        for t in ticket_codes {
            if rng.random_range(0..10) < 7 {
                feed.fares.push((id, t.to_string(), rng.random_range(0..=10_000)));
            }
        }
    }
    feed
}

/// A loopback HTTP server for download tests: serves fixed bodies by path,
/// 404 for anything else, until dropped.
pub struct TestServer {
    addr: std::net::SocketAddr,
    done: std::sync::Arc<std::sync::atomic::AtomicBool>,
    handle: Option<std::thread::JoinHandle<()>>,
}

impl TestServer {
    pub fn serve(routes: Vec<(String, Vec<u8>)>) -> TestServer {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        listener.set_nonblocking(true).unwrap();
        let done = std::sync::Arc::new(std::sync::atomic::AtomicBool::new(false));
        let stop = done.clone();
        let handle = std::thread::spawn(move || {
            while !stop.load(std::sync::atomic::Ordering::Relaxed) {
                match listener.accept() {
                    Ok((mut stream, _)) => {
                        stream.set_nonblocking(false).unwrap();
                        let mut buf = [0u8; 4096];
                        let n = stream.read(&mut buf).unwrap_or(0);
                        let request = String::from_utf8_lossy(&buf[..n]).into_owned();
                        let path = request
                            .split_whitespace()
                            .nth(1)
                            .unwrap_or("/")
                            .to_string();
                        let response = routes.iter().find(|(p, _)| *p == path);
                        match response {
                            Some((_, body)) => {
                                let head = format!(
                                    "HTTP/1.1 200 OK\r\ncontent-length: {}\r\nconnection: close\r\n\r\n",
                                    body.len()
                                );
                                let _ = stream.write_all(head.as_bytes());
                                let _ = stream.write_all(body);
                            }
                            None => {
                                let _ = stream.write_all(
                                    b"HTTP/1.1 404 Not Found\r\ncontent-length: 0\r\nconnection: close\r\n\r\n",
                                );
                            }
                        }
                    }
                    Err(ref e) if e.kind() == std::io::ErrorKind::WouldBlock => {
                        std::thread::sleep(std::time::Duration::from_millis(5));
                    }
                    Err(_) => break,
                }
            }
        });
        TestServer { addr, done, handle: Some(handle) }
    }

    pub fn url(&self, path: &str) -> String {
        format!("http://{}{}", self.addr, path)
    }
}

impl Drop for TestServer {
    fn drop(&mut self) {
        self.done.store(true, std::sync::atomic::Ordering::Relaxed);
        if let Some(handle) = self.handle.take() {
            let _ = handle.join();
        }
    }
}
