use std::fs;

use tempfile::TempDir;
use truncvar_core::harness::{run, ExperimentConfig, ExperimentKind};
use truncvar_core::simulate::{generate, ProcessKind, SimConfig};
use truncvar_core::{CadlagPath, JumpDesignation};

fn small(kind: ExperimentKind) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(kind);
    let mut sim = cfg.sim();
    sim.steps = 1 << 12;
    cfg.sim = Some(sim);
    cfg.replicates = 2;
    cfg
}

#[test]
fn reruns_are_bitwise_identical() {
    for kind in [ExperimentKind::Thm1Convergence, ExperimentKind::FollmerResiduals, ExperimentKind::PureJumpOrder] {
        let a = TempDir::new().unwrap();
        let b = TempDir::new().unwrap();
        let cfg = small(kind);
        let fa = run(&cfg).unwrap().write(a.path()).unwrap();
        let fb = run(&cfg).unwrap().write(b.path()).unwrap();
        assert_eq!(fa.len(), fb.len());
        for (x, y) in fa.iter().zip(&fb) {
            assert_eq!(x.file_name(), y.file_name());
            assert_eq!(fs::read(x).unwrap(), fs::read(y).unwrap(), "{x:?}");
        }
    }
}

#[test]
fn every_table_has_a_sidecar() {
    let dir = TempDir::new().unwrap();
    let files = run(&small(ExperimentKind::Thm1Convergence)).unwrap().write(dir.path()).unwrap();
    let csvs: Vec<_> = files.iter().filter(|f| f.extension().is_some_and(|e| e == "csv")).collect();
    assert!(!csvs.is_empty());
    for csv in csvs {
        let meta = csv.with_extension("meta.json");
        let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&meta).unwrap()).unwrap();
        let header = fs::read_to_string(csv).unwrap().lines().next().unwrap().to_string();
        let cols: Vec<String> = v["columns"].as_array().unwrap().iter().map(|c| c.as_str().unwrap().to_string()).collect();
        assert_eq!(header, cols.join(","));
        assert!(v["code_version"].is_string());
    }
}

#[test]
fn simulated_paths_round_trip_through_csv() {
    let dir = TempDir::new().unwrap();
    let sim = SimConfig { lambda: 4.0, ..SimConfig::new(ProcessKind::JumpDiffusion, 2000, 11) };
    let p = generate(&sim).unwrap();
    let file = dir.path().join("p.csv");
    p.to_csv_file(&file).unwrap();
    let q = CadlagPath::from_csv_file(&file).unwrap();
    assert_eq!(p.times(), q.times());
    assert_eq!(p.values(), q.values());
    assert_eq!(p.jump_designation(), q.jump_designation());
    assert!(matches!(q.jump_designation(), JumpDesignation::Designated(j) if !j.is_empty()));
}
