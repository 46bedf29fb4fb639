//! File exports: OD matrix, accessibility tables, statistics, and GeoJSON.
//!
//! Every export is atomic: content is written to a temporary file in the
//! destination directory and renamed into place, so a failed run never
//! leaves a truncated file. The OD exporter computes rows on a worker pool
//! but assembles them in order, which keeps the output byte-identical
//! whatever the worker count.

use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geo::{haversine_km, mean_distances, poi_counts_multi_budget, GeoPoint};
use crate::model::{FeedBundle, PoiKind, PoiRecord, StationIdx};
use crate::od::row_fares;
use crate::stats::SummaryStats;

/// Origins processed per parallel batch while exporting the OD matrix.
const OD_CHUNK: usize = 64;

/// Writes `content` to `path` atomically (temp file plus rename).
pub fn atomic_write(path: &Path, content: &[u8]) -> Result<()> {
    atomic_write_with(path, |w| w.write_all(content))
}

fn atomic_write_with(
    path: &Path,
    write_fn: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Result<()> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut temp = tempfile::NamedTempFile::new_in(parent).map_err(|e| Error::io(parent, e))?;
    {
        let mut w = BufWriter::new(temp.as_file_mut());
        write_fn(&mut w).map_err(|e| Error::io(path, e))?;
        w.flush().map_err(|e| Error::io(path, e))?;
    }
    temp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

/// Runs `f` on a dedicated pool of `jobs` workers, or on the current rayon
/// pool when `jobs` is `None`.
fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidParameter {
                    reason: format!("cannot build a pool of {n} workers: {e}"),
                })?;
            Ok(pool.install(f))
        }
    }
}

/// Station indexes sorted by CRS code; export files order rows by CRS.
fn crs_sorted(bundle: &FeedBundle, subset: Option<&[String]>) -> Result<Vec<StationIdx>> {
    let mut idxs: Vec<StationIdx> = match subset {
        None => (0..bundle.stations().len() as u32).map(StationIdx).collect(),
        Some(keys) => {
            let mut v = keys
                .iter()
                .map(|k| bundle.station_idx(k))
                .collect::<Result<Vec<StationIdx>>>()?;
            v.sort();
            v.dedup();
            v
        }
    };
    idxs.sort_by(|&a, &b| bundle.station_at(a).crs.cmp(&bundle.station_at(b).crs));
    Ok(idxs)
}

/// Streams the minimum-fare OD matrix to `path` as
/// `origin_crs,dest_crs,ticket_code,fare_pence`, sorted by (origin CRS,
/// destination CRS). Returns the number of data rows written.
///
/// Rows are computed in parallel batches and written strictly in order, so
/// `jobs = Some(1)` and `jobs = Some(4)` produce identical bytes.
pub fn export_od_csv(
    bundle: &FeedBundle,
    ticket_code: &str,
    origins: Option<&[String]>,
    path: &Path,
    jobs: Option<usize>,
) -> Result<u64> {
    let ticket = bundle.ticket_id(ticket_code)?;
    let origin_idxs = crs_sorted(bundle, origins)?;
    let dest_order = crs_sorted(bundle, None)?;

    let mut rows_written: u64 = 0;
    with_jobs(jobs, || {
        atomic_write_with(path, |w| {
            w.write_all(b"origin_crs,dest_crs,ticket_code,fare_pence\n")?;
            for chunk in origin_idxs.chunks(OD_CHUNK) {
                let blocks: Vec<(Vec<u8>, u64)> = chunk
                    .par_iter()
                    .map_init(Vec::new, |scratch, &origin| {
                        row_fares(bundle, origin, ticket, scratch);
                        let origin_crs = &bundle.station_at(origin).crs;
                        let mut buf = Vec::new();
                        let mut count = 0;
                        for &dest in &dest_order {
                            if let Some(fare) = scratch[dest.0 as usize] {
                                let dest_crs = &bundle.station_at(dest).crs;
                                writeln!(buf, "{origin_crs},{dest_crs},{ticket_code},{fare}")
                                    .expect("in-memory write");
                                count += 1;
                            }
                        }
                        (buf, count)
                    })
                    .collect();
                for (block, count) in blocks {
                    w.write_all(&block)?;
                    rows_written += count;
                }
            }
            Ok(())
        })
    })??;
    Ok(rows_written)
}

/// Formats a pence value with up to two decimals, trimming trailing zeros
/// so integer values print as integers.
fn fmt_pence(v: f64) -> String {
    let s = format!("{v:.2}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Writes one `stats.csv` with the given rows; `scope` is `network` or a
/// CRS code.
pub fn export_stats_csv(rows: &[(String, String, SummaryStats)], path: &Path) -> Result<()> {
    atomic_write_with(path, |w| {
        writeln!(
            w,
            "scope,ticket_code,count,mean_pence,median_pence,min_pence,max_pence,lq_pence,uq_pence"
        )?;
        for (scope, ticket, s) in rows {
            writeln!(
                w,
                "{scope},{ticket},{},{},{},{},{},{},{}",
                s.count,
                fmt_pence(s.mean_pence),
                fmt_pence(s.median_pence),
                s.min_pence,
                s.max_pence,
                fmt_pence(s.lower_quartile_pence),
                fmt_pence(s.upper_quartile_pence),
            )?;
        }
        Ok(())
    })
}

/// Writes mean reachable distance per origin to `path` as
/// `origin_crs,ticket_code,budget_pence,mean_distance_km` (3 decimal places,
/// empty when undefined), sorted by origin CRS.
pub fn export_meandist_csv(
    bundle: &FeedBundle,
    ticket_code: &str,
    budget_pence: u32,
    origins: Option<&[String]>,
    path: &Path,
    jobs: Option<usize>,
) -> Result<u64> {
    let results = with_jobs(jobs, || {
        mean_distances(bundle, ticket_code, budget_pence, origins)
    })??;
    let mut rows: Vec<(String, Option<f64>)> = results
        .into_iter()
        .map(|r| {
            let crs = bundle.station(&r.origin_nlc).expect("own origin").crs.clone();
            (crs, r.value)
        })
        .collect();
    rows.sort_by(|a, b| a.0.cmp(&b.0));
    let count = rows.len() as u64;
    atomic_write_with(path, |w| {
        writeln!(w, "origin_crs,ticket_code,budget_pence,mean_distance_km")?;
        for (crs, value) in &rows {
            match value {
                Some(km) => writeln!(w, "{crs},{ticket_code},{budget_pence},{km:.3}")?,
                None => writeln!(w, "{crs},{ticket_code},{budget_pence},")?,
            }
        }
        Ok(())
    })?;
    Ok(count)
}

/// Writes POI reach counts over a budget ladder to `path` as
/// `origin_crs,ticket_code,budget_pence,poi_kind,radius_km,count`, sorted by
/// origin CRS then budget.
pub fn export_poi_csv(
    bundle: &FeedBundle,
    pois: &[PoiRecord],
    ticket_code: &str,
    budgets: &[u32],
    radius_km: f64,
    kind: PoiKind,
    origins: Option<&[String]>,
    path: &Path,
    jobs: Option<usize>,
) -> Result<u64> {
    let table = with_jobs(jobs, || {
        poi_counts_multi_budget(bundle, pois, ticket_code, budgets, radius_km, kind, origins)
    })??;
    let mut rows: Vec<(String, Vec<usize>)> = table
        .into_iter()
        .map(|(nlc, counts)| {
            let crs = bundle.station(&nlc).expect("own origin").crs.clone();
            (crs, counts)
        })
        .collect();
    rows.sort_by(|a, b| a.0.cmp(&b.0));
    let written = (rows.len() * budgets.len()) as u64;
    atomic_write_with(path, |w| {
        writeln!(w, "origin_crs,ticket_code,budget_pence,poi_kind,radius_km,count")?;
        for (crs, counts) in &rows {
            for (&budget, count) in budgets.iter().zip(counts) {
                writeln!(
                    w,
                    "{crs},{ticket_code},{budget},{},{radius_km},{count}",
                    kind.as_str()
                )?;
            }
        }
        Ok(())
    })?;
    Ok(written)
}

/// Writes one origin's distance-fare pairs to `path` as
/// `origin_crs,dest_crs,distance_km,fare_pence` (distance to 3 decimal
/// places), sorted by destination CRS.
pub fn export_dist_fare_csv(
    bundle: &FeedBundle,
    origin: &str,
    ticket_code: &str,
    path: &Path,
) -> Result<u64> {
    let origin_idx = bundle.station_idx(origin)?;
    let ticket = bundle.ticket_id(ticket_code)?;
    let mut scratch = Vec::new();
    row_fares(bundle, origin_idx, ticket, &mut scratch);
    let origin_station = bundle.station_at(origin_idx);
    let from = GeoPoint {
        lat: origin_station.lat,
        lon: origin_station.lon,
    };
    let origin_crs = origin_station.crs.clone();
    let mut count = 0;
    atomic_write_with(path, |w| {
        writeln!(w, "origin_crs,dest_crs,distance_km,fare_pence")?;
        for &dest in &crs_sorted(bundle, None).expect("all stations") {
            if let Some(fare) = scratch[dest.0 as usize] {
                let to = bundle.station_at(dest);
                let km = haversine_km(from, GeoPoint { lat: to.lat, lon: to.lon });
                writeln!(w, "{origin_crs},{},{km:.3},{fare}", to.crs)?;
                count += 1;
            }
        }
        Ok(())
    })?;
    Ok(count)
}

/// Reads a previously exported CSV and extracts `(origin_crs, value)` pairs
/// from the named metric column. Rows with an empty metric cell (undefined
/// values) are skipped.
pub fn read_metric_csv(path: &Path, metric: &str) -> Result<Vec<(String, f64)>> {
    let file = display_file(path);
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(bytes.as_slice());
    let headers = rdr
        .headers()
        .map_err(|e| Error::field(&file, 1, "header", e.to_string()))?
        .clone();
    let crs_col = headers
        .iter()
        .position(|h| h == "origin_crs" || h == "crs")
        .ok_or_else(|| Error::Schema {
            file: file.clone(),
            expected: "a column named origin_crs or crs".into(),
            found: headers.iter().collect::<Vec<_>>().join(","),
        })?;
    let metric_col = headers.iter().position(|h| h == metric).ok_or_else(|| Error::Schema {
        file: file.clone(),
        expected: format!("a column named {metric}"),
        found: headers.iter().collect::<Vec<_>>().join(","),
    })?;
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::field(&file, 0, "record", e.to_string()))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let raw = record.get(metric_col).unwrap_or("");
        if raw.is_empty() {
            continue;
        }
        let value: f64 = raw.parse().map_err(|_| {
            Error::field(&file, line, metric, "must be a number or empty")
        })?;
        let crs = record.get(crs_col).unwrap_or("").to_string();
        out.push((crs, value));
    }
    Ok(out)
}

fn display_file(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Builds an RFC 7946 FeatureCollection of station Points carrying exactly
/// the properties `crs`, `metric_name`, and `value`.
pub fn geojson_value(
    bundle: &FeedBundle,
    metric_name: &str,
    values: &[(String, f64)],
) -> Result<serde_json::Value> {
    let mut features = Vec::with_capacity(values.len());
    for (crs, value) in values {
        let station = bundle.station(crs)?;
        let value_json = if value.fract() == 0.0 && value.abs() < 9.0e15 {
            serde_json::json!(*value as i64)
        } else {
            serde_json::json!(*value)
        };
        features.push(serde_json::json!({
            "type": "Feature",
            "geometry": {
                "type": "Point",
                "coordinates": [station.lon, station.lat],
            },
            "properties": {
                "crs": station.crs,
                "metric_name": metric_name,
                "value": value_json,
            },
        }));
    }
    Ok(serde_json::json!({
        "type": "FeatureCollection",
        "features": features,
    }))
}

/// Writes the station-metric GeoJSON export to `path`.
pub fn export_geojson(
    bundle: &FeedBundle,
    metric_name: &str,
    values: &[(String, f64)],
    path: &Path,
) -> Result<()> {
    let value = geojson_value(bundle, metric_name, values)?;
    let mut text = serde_json::to_string(&value).expect("serializable value");
    text.push('\n');
    atomic_write(path, text.as_bytes())
}
