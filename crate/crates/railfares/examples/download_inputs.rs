//! Fetch remote inputs from a config file, verify checksums, and skip
//! files that are already up to date. This example runs its own tiny HTTP
//! server on a loopback port so it works fully offline.
//!
//! ```bash
//! cargo run --example download_inputs
//! ```

use std::io::{Read, Write};
use std::net::TcpListener;
use std::path::Path;

use railfares::download::{download_inputs, parse_download_config, sha256_hex, DownloadStatus};

/// Serves `body` for any GET on a loopback port until the process exits.
fn serve(body: Vec<u8>) -> std::io::Result<String> {
    let listener = TcpListener::bind("127.0.0.1:0")?;
    let addr = listener.local_addr()?;
    std::thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(mut stream) = stream else { continue };
            let mut buf = [0u8; 4096];
            let _ = stream.read(&mut buf);
            let header = format!(
                "HTTP/1.1 200 OK\r\ncontent-length: {}\r\nconnection: close\r\n\r\n",
                body.len()
            );
            let _ = stream.write_all(header.as_bytes());
            let _ = stream.write_all(&body);
        }
    });
    Ok(format!("http://{addr}"))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/tiny-gb/locations.csv");
    let body = std::fs::read(&fixture)?;
    let hash = sha256_hex(&body);
    let base = serve(body)?;

    let dir = tempfile::tempdir()?;
    let config_path = dir.path().join("downloads.csv");
    let dest = dir.path().join("data").join("locations.csv");
    std::fs::write(
        &config_path,
        format!(
            "name,url,destination,expected_hash\n\
             locations,{base}/locations.csv,{},{hash}\n\
             unpinned,{base}/anything.csv,{},\n",
            dest.display(),
            dir.path().join("data").join("anything.csv").display(),
        ),
    )?;

    let entries = parse_download_config(&config_path)?;
    println!("configured {} downloads", entries.len());

    let manifest = download_inputs(&entries);
    for e in &manifest.entries {
        match &e.status {
            DownloadStatus::Downloaded => println!(
                "  {}: downloaded {} bytes, sha256 {}...",
                e.name,
                e.bytes.unwrap_or(0),
                &e.sha256.as_deref().unwrap_or("")[..12],
            ),
            DownloadStatus::SkippedUpToDate => println!("  {}: already up to date", e.name),
            DownloadStatus::Failed(reason) => println!("  {}: FAILED: {reason}", e.name),
        }
    }

    // Run it again: the pinned file short-circuits on its checksum.
    println!("second run:");
    for e in &download_inputs(&entries).entries {
        println!("  {}: {:?}", e.name, e.status);
    }
    Ok(())
}
