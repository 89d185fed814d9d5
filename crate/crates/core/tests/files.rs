use std::fs::{self, File};
use std::io::BufReader;

use netentropy::entropy::{full_report, Conventions, UpsilonSource};
use netentropy::generators::{dumbbell, ring_lattice, GrowthConfig};
use netentropy::io::{
    load_config, load_edge_list, read_report_jsonl, render_config, write_edge_list, write_report, EdgeListFormat,
    ExperimentConfig, IoError, ReportDocument, ReportEntry, ReportFormat,
};
use netentropy::PairConvention;

#[test]
fn edge_list_file_round_trip_keeps_digest_stable() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ring.edges");
    let g = ring_lattice(20, 2).unwrap();
    write_edge_list(&g, File::create(&path).unwrap()).unwrap();

    let a = load_edge_list(&path, &EdgeListFormat::default()).unwrap();
    let b = load_edge_list(&path, &EdgeListFormat::default()).unwrap();
    assert_eq!(a.graph, g);
    assert_eq!(a.digest, b.digest);
    assert_eq!(a.digest.len(), 64);

    fs::write(&path, "0 1\n").unwrap();
    let c = load_edge_list(&path, &EdgeListFormat::default()).unwrap();
    assert_ne!(a.digest, c.digest);
}

#[test]
fn missing_file_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("absent.edges");
    let err = load_edge_list(&path, &EdgeListFormat::default()).unwrap_err();
    assert!(matches!(err, IoError::Io { .. }));
    assert!(err.to_string().contains("absent.edges"));
}

#[test]
fn jsonl_report_file_round_trips_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.jsonl");
    let conv = Conventions::new(PairConvention::Ordered, UpsilonSource::Normalized);
    let mut doc = ReportDocument::new(conv);
    doc.entries.push(ReportEntry::new("dumbbell", full_report(&dumbbell(10).unwrap(), &conv).unwrap()));
    doc.entries.push(ReportEntry::new("ring", full_report(&ring_lattice(30, 3).unwrap(), &conv).unwrap()));
    write_report(&doc, &path, ReportFormat::JsonLines).unwrap();

    let back = read_report_jsonl(BufReader::new(File::open(&path).unwrap())).unwrap();
    assert_eq!(back, doc);
}

#[test]
fn config_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("growth.cfg");
    let cfg = ExperimentConfig {
        growth: GrowthConfig { seed_nodes: 64, iterations: 7, rng_seed: 99, ..GrowthConfig::default() },
        conventions: Conventions::new(PairConvention::Ordered, UpsilonSource::Raw),
    };
    fs::write(&path, render_config(&cfg)).unwrap();
    assert_eq!(load_config(&path).unwrap(), cfg);
}
