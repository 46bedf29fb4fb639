//! End-to-end tests of the `railfares` binary: exit codes, output formats,
//! and file side effects, all through real process invocations.

use std::path::{Path, PathBuf};
use std::process::Output;

const BIN: &str = env!("CARGO_BIN_EXE_railfares");

fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/tiny-gb")
}

fn feed() -> String {
    fixture_dir().to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> Output {
    std::process::Command::new(BIN)
        .args(args)
        .env_remove("RAILFARES_FEED_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn validate_prints_summary_counts() {
    let out = run(&["validate", "--feed", &feed()]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert_eq!(stdout(&out), "5 stations, 2 clusters, 4 flows, 6 fares\n");
}

#[test]
fn validate_reports_every_problem_and_fails() {
    let dir = tempfile::tempdir().unwrap();
    for entry in std::fs::read_dir(fixture_dir()).unwrap() {
        let entry = entry.unwrap();
        std::fs::copy(entry.path(), dir.path().join(entry.file_name())).unwrap();
    }
    let flows = dir.path().join("flows.csv");
    let broken = std::fs::read_to_string(&flows)
        .unwrap()
        .replace("1,1000,1001,S", "1,10X0,1001,S")
        .replace("2,1000,K500,R", "2,1000,K500,X");
    std::fs::write(&flows, broken).unwrap();

    let out = run(&["validate", "--feed", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out), "", "failed validate must not print counts");
    let err = stderr(&out);
    assert!(err.contains("flows.csv:2"), "stderr: {err}");
    assert!(err.contains("flows.csv:3"), "stderr: {err}");
}

#[test]
fn od_single_origin_writes_expected_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("od.csv");
    let out = run(&[
        "od", "--feed", &feed(), "--origin", "AAA", "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("3 data rows"), "stderr: {}", stderr(&out));
    assert_eq!(
        std::fs::read_to_string(&out_path).unwrap(),
        "origin_crs,dest_crs,ticket_code,fare_pence\n\
         AAA,BBB,SGL,450\n\
         AAA,CCC,SGL,450\n\
         AAA,DDD,SGL,2000\n"
    );
}

#[test]
fn od_accepts_feed_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("od.csv");
    let out = std::process::Command::new(BIN)
        .args(["od", "--out", out_path.to_str().unwrap()])
        .env("RAILFARES_FEED_DIR", fixture_dir())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let content = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(content.lines().count(), 8, "header plus all 7 priced pairs");
    assert!(content.ends_with("EEE,BBB,SGL,700\n"));
}

#[test]
fn reach_prints_sorted_crs_codes() {
    let out = run(&["reach", "--feed", &feed(), "--origin", "AAA", "--budget", "500"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "BBB\nCCC\n");

    let out = run(&["reach", "--feed", &feed(), "--origin", "AAA", "--budget", "2500"]);
    assert_eq!(stdout(&out), "BBB\nCCC\nDDD\n");

    let out = run(&["reach", "--feed", &feed(), "--origin", "AAA", "--budget", "0"]);
    assert_eq!(code(&out), 0, "empty result is still success");
    assert_eq!(stdout(&out), "");
}

#[test]
fn reach_unknown_station_is_a_data_error() {
    let out = run(&["reach", "--feed", &feed(), "--origin", "ZZZ", "--budget", "500"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("unknown station"), "stderr: {}", stderr(&out));
}

#[test]
fn usage_errors_exit_two_and_help_exits_zero() {
    let out = run(&[]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("Usage"), "stderr: {}", stderr(&out));

    let out = run(&["od", "--feed", &feed()]);
    assert_eq!(code(&out), 2, "missing --out is a usage error");

    for sub in [
        "validate", "download", "od", "reach", "meandist", "poi", "stats",
        "distfare", "geojson", "synth",
    ] {
        let out = run(&[sub, "--help"]);
        assert_eq!(code(&out), 0, "{sub} --help failed");
        assert!(stdout(&out).contains("Usage"), "{sub} --help prints usage");
    }
}

#[test]
fn meandist_single_origin_golden_value() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("meandist.csv");
    let out = run(&[
        "meandist", "--feed", &feed(), "--origin", "AAA", "--budget", "2000",
        "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert_eq!(
        std::fs::read_to_string(&out_path).unwrap(),
        "origin_crs,ticket_code,budget_pence,mean_distance_km\n\
         AAA,SGL,2000,146.363\n"
    );
}

#[test]
fn meandist_all_covers_every_station() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("meandist.csv");
    let out = run(&[
        "meandist", "--feed", &feed(), "--all", "--budget", "2000",
        "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let content = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(content.lines().count(), 6, "header plus one row per station");
    assert!(content.contains("AAA,SGL,2000,146.363\n"));
}

#[test]
fn meandist_requires_origin_or_all() {
    let out = run(&["meandist", "--feed", &feed(), "--budget", "100", "--out", "x.csv"]);
    assert_eq!(code(&out), 2);
    assert!(!Path::new("x.csv").exists());
}

#[test]
fn poi_counts_over_budget_ladder() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("poi.csv");
    let poi_path = fixture_dir().join("pois.csv");
    let out = run(&[
        "poi", "--feed", &feed(), "--poi", poi_path.to_str().unwrap(),
        "--kind", "HOSPITAL", "--budgets", "0,500,2000", "--radius-km", "5",
        "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let content = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(content.lines().count(), 16, "header plus 5 stations x 3 budgets");
    assert_eq!(
        content.lines().next().unwrap(),
        "origin_crs,ticket_code,budget_pence,poi_kind,radius_km,count"
    );
    assert_eq!(content.lines().nth(1).unwrap(), "AAA,SGL,0,HOSPITAL,5,0");
    assert!(content.contains("AAA,SGL,500,HOSPITAL,5,1\n"));
    assert!(content.contains("AAA,SGL,2000,HOSPITAL,5,1\n"));
}

#[test]
fn poi_rejects_unknown_kind() {
    let out = run(&[
        "poi", "--feed", &feed(), "--poi", fixture_dir().join("pois.csv").to_str().unwrap(),
        "--kind", "SCHOOL", "--budgets", "0", "--radius-km", "5", "--out", "poi.csv",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("unknown POI kind"), "stderr: {}", stderr(&out));
    assert!(!Path::new("poi.csv").exists());
}

#[test]
fn stats_network_and_per_origin_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("stats.csv");

    let out = run(&["stats", "--feed", &feed(), "--out", out_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert_eq!(
        std::fs::read_to_string(&out_path).unwrap(),
        "scope,ticket_code,count,mean_pence,median_pence,min_pence,max_pence,lq_pence,uq_pence\n\
         network,SGL,7,742.86,450,450,2000,450,700\n"
    );

    let out = run(&[
        "stats", "--feed", &feed(), "--origin", "1000", "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "NLC keys work too; stderr: {}", stderr(&out));
    assert_eq!(
        std::fs::read_to_string(&out_path).unwrap(),
        "scope,ticket_code,count,mean_pence,median_pence,min_pence,max_pence,lq_pence,uq_pence\n\
         AAA,SGL,3,966.67,450,450,2000,450,1225\n"
    );
}

#[test]
fn distfare_pairs_from_origin() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("distfare.csv");
    let out = run(&[
        "distfare", "--feed", &feed(), "--origin", "AAA", "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert_eq!(
        std::fs::read_to_string(&out_path).unwrap(),
        "origin_crs,dest_crs,distance_km,fare_pence\n\
         AAA,BBB,105.289,450\n\
         AAA,CCC,107.113,450\n\
         AAA,DDD,226.687,2000\n"
    );
}

#[test]
fn geojson_renders_an_exported_metric() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("meandist.csv");
    let geo_path = dir.path().join("meandist.geojson");

    let out = run(&[
        "meandist", "--feed", &feed(), "--all", "--budget", "2000",
        "--out", csv_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));

    let out = run(&[
        "geojson", "--feed", &feed(), "--metric", "mean_distance_km",
        "--in", csv_path.to_str().unwrap(), "--out", geo_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));

    let doc: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&geo_path).unwrap()).unwrap();
    assert_eq!(doc["type"], "FeatureCollection");
    assert_eq!(doc["features"].as_array().unwrap().len(), 5);
    let first = &doc["features"][0];
    assert_eq!(first["properties"]["crs"], "AAA");
    assert_eq!(first["properties"]["metric_name"], "mean_distance_km");
    assert_eq!(first["properties"]["value"].as_f64(), Some(146.363));
}

#[test]
fn synth_output_validates_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let feed_a = dir.path().join("a");
    let feed_b = dir.path().join("b");
    for out_dir in [&feed_a, &feed_b] {
        let out = run(&[
            "synth", "--stations", "30", "--clusters", "3", "--flows", "120",
            "--seed", "9", "--out", out_dir.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    }

    let out = run(&["validate", "--feed", feed_a.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert_eq!(stdout(&out), "30 stations, 3 clusters, 120 flows, 240 fares\n");

    for name in ["locations.csv", "clusters.csv", "flows.csv", "fares.csv"] {
        assert_eq!(
            std::fs::read(feed_a.join(name)).unwrap(),
            std::fs::read(feed_b.join(name)).unwrap(),
            "{name} differs between identical synth runs"
        );
    }
}

#[test]
fn reruns_overwrite_with_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("od.csv");
    let args = [
        "od", "--feed", &feed(), "--ticket", "RTN", "--out",
        out_path.to_str().unwrap(),
    ];
    assert_eq!(code(&run(&args)), 0);
    let first = std::fs::read(&out_path).unwrap();
    assert_eq!(code(&run(&args)), 0);
    assert_eq!(first, std::fs::read(&out_path).unwrap());
}

#[test]
fn failed_export_leaves_no_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("od.csv");
    let out = run(&[
        "od", "--feed", &feed(), "--ticket", "XXX", "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("unknown ticket"), "stderr: {}", stderr(&out));
    assert!(!out_path.exists(), "failed run must not leave a file behind");
    assert_eq!(
        std::fs::read_dir(dir.path()).unwrap().count(),
        0,
        "no stray temp files either"
    );
}
