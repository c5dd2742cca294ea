use std::path::Path;

use dgbound::output::{entropy_csv, parse_snapshot, resolve_output_dir, snapshot_csv, write_file, ENTROPY_HEADER};
use dgbound::scenario::ScenarioConfig;

fn short_channel() -> ScenarioConfig {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/swe_channel_subcritical.toml");
    let mut cfg = ScenarioConfig::from_path(&path).unwrap().with_degree(3);
    cfg.t_end = 0.05;
    cfg.dt_max = None;
    cfg
}

#[test]
fn snapshot_round_trips_bit_for_bit() {
    let s = short_channel().build().unwrap();
    let out = s.execute(|_| {}).unwrap();
    let q = out.result.state.unwrap();
    let text = snapshot_csv(s.disc.as_ref(), &q);
    let records = parse_snapshot(&text).unwrap();
    assert_eq!(records.len() * 3, q.data.len());
    for (k, r) in records.iter().enumerate() {
        assert_eq!(r.state.as_slice(), &q.data[3 * k..3 * k + 3]);
    }
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(&dir.path().join("nested"), "snap.csv", &text).unwrap();
    assert_eq!(std::fs::read_to_string(path).unwrap(), text);
}

#[test]
fn runs_are_deterministic() {
    let cfg = short_channel();
    let run = || {
        let s = cfg.build().unwrap();
        let out = s.execute(|_| {}).unwrap();
        (entropy_csv(&out.result.reports), out.result.state.unwrap().data)
    };
    let (e1, q1) = run();
    let (e2, q2) = run();
    assert!(e1.starts_with(ENTROPY_HEADER));
    assert_eq!(e1, e2);
    assert_eq!(q1, q2);
}

#[test]
fn configured_output_dir_used_without_override() {
    if std::env::var_os("DGBOUND_OUTPUT_DIR").is_none() {
        assert_eq!(resolve_output_dir(Some(Path::new("results"))), Path::new("results"));
        assert_eq!(resolve_output_dir(None), Path::new("output"));
    }
}
