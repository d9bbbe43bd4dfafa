use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use meltdown_core::eigen::diagonalize;
use meltdown_core::model::{build_hamiltonian, draw_couplings, ModelConfig};
use meltdown_core::reaction::{synthesize_spectrum, timescale_report, LevelDensity, SynthParams};
use meltdown_lab::dump::{decode, encode, read_dump, write_dump, DumpHeader};
use meltdown_lab::emit::{emit, read_records};
use meltdown_lab::ingest::{ingest, ingest_angular, ingest_spectrum, write_angular, write_spectrum, Ingested};
use meltdown_lab::record::{hash_file, verify_provenance, Payload, Provenance, ResultRecord, SynthRecord};
use meltdown_lab::{LabError, OutputFormat};
use tempfile::tempdir;

const SPECTRUM: &str = "# angle_deg: 60\n# beam_MeV: 18\n# Zp: 1\n# Zt: 78\n# At: 194\n# label: p + Pt\nE_MeV,yield,yield_err\n2,0.0013,0.00007\n3,0.004,0.0002\n4,0.003,0.00015\n";

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn ingest_line(e: LabError) -> u64 {
    match e {
        LabError::Ingest { line, .. } => line,
        other => panic!("expected an ingest error, got {other}"),
    }
}

#[test]
fn well_formed_spectrum() {
    let d = tempdir().unwrap();
    let s = ingest_spectrum(&write(d.path(), "s.csv", SPECTRUM)).unwrap();
    assert_eq!(s.samples.len(), 3);
    assert_eq!(s.meta.angle_deg, 60.0);
    assert_eq!(s.meta.at, Some(194.0));
    assert_eq!(s.meta.label, "p + Pt");
    assert_eq!(s.samples[1].value, 0.004);
}

#[test]
fn non_monotonic_energy_names_its_line() {
    let d = tempdir().unwrap();
    let text = SPECTRUM.replace("4,0.003", "2.5,0.003");
    let e = ingest_spectrum(&write(d.path(), "s.csv", &text)).unwrap_err();
    assert!(e.is_validation());
    assert_eq!(ingest_line(e), 10);
}

#[test]
fn malformed_row_names_its_line() {
    let d = tempdir().unwrap();
    let text = SPECTRUM.replace("3,0.004", "3,abc");
    assert_eq!(ingest_line(ingest_spectrum(&write(d.path(), "s.csv", &text)).unwrap_err()), 9);
    let text = SPECTRUM.replace("3,0.004,0.0002", "3,0.004");
    assert_eq!(ingest_line(ingest_spectrum(&write(d.path(), "t.csv", &text)).unwrap_err()), 9);
}

#[test]
fn missing_metadata_is_reported() {
    let d = tempdir().unwrap();
    let text = SPECTRUM.replace("# At: 194\n", "");
    let e = ingest_spectrum(&write(d.path(), "s.csv", &text)).unwrap_err();
    assert!(e.to_string().contains("At"), "{e}");
}

#[test]
fn wrong_columns_are_rejected() {
    let d = tempdir().unwrap();
    let text = SPECTRUM.replace("E_MeV,yield,yield_err", "E,y,dy");
    assert!(ingest(&write(d.path(), "s.csv", &text)).is_err());
}

#[test]
fn synthesized_files_round_trip_exactly() {
    let d = tempdir().unwrap();
    let out = synthesize_spectrum(&SynthParams::platinum_like(11)).unwrap();
    for (i, spec) in out.spectra.iter().enumerate() {
        let p = d.path().join(format!("s{i}.csv"));
        write_spectrum(&p, spec).unwrap();
        assert_eq!(&ingest_spectrum(&p).unwrap(), spec);
        assert!(matches!(ingest(&p).unwrap(), Ingested::Spectrum(_)));
    }
    let p = d.path().join("a.csv");
    write_angular(&p, &out.angular).unwrap();
    assert_eq!(ingest_angular(&p).unwrap(), out.angular);
    assert!(matches!(ingest(&p).unwrap(), Ingested::Angular(_)));
}

fn provenance() -> Provenance {
    Provenance { config_hash: "ab".repeat(32), inputs: BTreeMap::new(), seed: 3, tool_version: "t".into() }
}

fn timescale_record() -> ResultRecord {
    let report = timescale_report(1.0, 0.02, LevelDensity { a: 24.25, u: 26.0 }).unwrap();
    ResultRecord { payload: Payload::Timescale(report), provenance: provenance() }
}

fn synth_record() -> ResultRecord {
    let params = SynthParams::platinum_like(1);
    ResultRecord { payload: Payload::Synth(SynthRecord { params, files: vec!["a.csv".into()] }), provenance: provenance() }
}

#[test]
fn empty_record_set_gives_an_empty_container() {
    let d = tempdir().unwrap();
    let files = emit(&[], OutputFormat::Json, d.path()).unwrap();
    assert_eq!(files.len(), 1);
    let text = fs::read_to_string(&files[0]).unwrap();
    assert_eq!(serde_json::from_str::<Vec<serde_json::Value>>(&text).unwrap().len(), 0);
    assert!(read_records(&files[0]).unwrap().is_empty());
    let files = emit(&[], OutputFormat::Csv, d.path()).unwrap();
    assert_eq!(fs::read_to_string(&files[0]).unwrap(), "kind\n");
}

#[test]
fn mixed_kinds_are_partitioned() {
    let d = tempdir().unwrap();
    let recs = [timescale_record(), synth_record(), timescale_record()];
    let files = emit(&recs, OutputFormat::Json, d.path()).unwrap();
    let names: Vec<_> = files.iter().map(|f| f.file_name().unwrap().to_str().unwrap().to_string()).collect();
    assert_eq!(names, ["synth.json", "timescale.json"]);
    let back = read_records(&files[1]).unwrap();
    assert_eq!(back, vec![recs[0].clone(), recs[2].clone()]);
    assert_eq!(read_records(&files[0]).unwrap(), vec![recs[1].clone()]);

    let files = emit(&recs, OutputFormat::Csv, d.path()).unwrap();
    let csv = fs::read_to_string(&files[1]).unwrap();
    assert!(csv.starts_with("# kind: timescale\n"));
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 3);
}

#[test]
fn emitting_twice_gives_identical_bytes() {
    let recs = [timescale_record(), synth_record()];
    for format in [OutputFormat::Json, OutputFormat::Csv] {
        let (a, b) = (tempdir().unwrap(), tempdir().unwrap());
        let fa = emit(&recs, format, a.path()).unwrap();
        let fb = emit(&recs, format, b.path()).unwrap();
        for (x, y) in fa.iter().zip(&fb) {
            assert_eq!(fs::read(x).unwrap(), fs::read(y).unwrap());
        }
    }
}

#[test]
fn record_fields_follow_a_stable_order() {
    let d = tempdir().unwrap();
    let files = emit(&[timescale_record()], OutputFormat::Json, d.path()).unwrap();
    let text = fs::read_to_string(&files[0]).unwrap();
    let (k, p, v) = (text.find("\"kind\"").unwrap(), text.find("\"payload\"").unwrap(), text.find("\"provenance\"").unwrap());
    assert!(k < p && p < v);
}

#[test]
fn tampered_input_is_detected() {
    let d = tempdir().unwrap();
    let path = write(d.path(), "s.csv", SPECTRUM);
    let mut prov = provenance();
    prov.inputs.insert("s.csv".into(), hash_file(&path).unwrap());
    verify_provenance(&prov, d.path()).unwrap();

    let mut bytes = fs::read(&path).unwrap();
    let last = bytes.len() - 2;
    bytes[last] ^= 1;
    fs::write(&path, bytes).unwrap();
    assert!(matches!(verify_provenance(&prov, d.path()), Err(LabError::Provenance { .. })));
}

#[test]
fn spectrum_dump_round_trips() {
    let mut config = ModelConfig::new(5);
    config.j_bound = 0.3;
    let draw = draw_couplings(&config, 2);
    let h = build_hamiltonian(&draw, &config).unwrap();
    let spectrum = diagonalize(&h.matrix, 1e-10).unwrap();
    let header = DumpHeader { config_hash: [7; 32], realization: 2, j_over_delta0: 0.3 };

    let bytes = encode(&header, &spectrum);
    assert_eq!(bytes.len(), 64 + 8 * 32 * 33);
    assert_eq!(&bytes[..8], b"MLTSPEC1");
    assert_eq!(u64::from_le_bytes(bytes[56..64].try_into().unwrap()), 32);

    let d = tempdir().unwrap();
    let p = d.path().join("x.bin");
    write_dump(&p, &header, &spectrum).unwrap();
    let (h2, s2) = read_dump(&p).unwrap();
    assert_eq!(h2, header);
    assert_eq!(s2, spectrum);

    assert!(decode(&bytes[..bytes.len() - 8], &p).is_err());
    let mut bad = bytes.clone();
    bad[0] = b'X';
    assert!(decode(&bad, &p).is_err());
}
