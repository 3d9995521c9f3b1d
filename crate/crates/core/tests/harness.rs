use std::fs;
use std::path::Path;
use std::process::Command;

use mcd_opt::harness::{self, compute_iar, densify, tally_wtl, Algorithm, ExperimentConfig};
use mcd_opt::{Bounds, BudgetedEvaluator, FnObjective, TracePoint};

fn small_config(dir: &Path) -> ExperimentConfig {
    ExperimentConfig {
        algorithms: vec![Algorithm::Mcd, Algorithm::De, Algorithm::Cc],
        functions: vec!["shifted_sphere".into(), "shifted_rosenbrock".into()],
        dim: 8,
        max_nfe: vec![800],
        max_iter: 5,
        repeats: 3,
        base_seed: 10,
        cc: mcd_opt::baselines::CcConfig {
            num_groups: 4,
            ..Default::default()
        },
        output_dir: dir.to_path_buf(),
        ..ExperimentConfig::default()
    }
}

#[test]
fn error_of_fixture() {
    let f = FnObjective::new(Bounds::uniform(1, -1e5, 1e5).unwrap(), |_: &[f64]| 5.67e7)
        .with_optimum(0.0);
    let mut ev = BudgetedEvaluator::new(&f, 3);
    ev.evaluate(&[1.0]).unwrap();
    assert_eq!(ev.error().unwrap(), 5.67e7);
}

#[test]
fn densify_carries_forward() {
    let trace = [
        TracePoint {
            nfe: 3,
            best_value: 9.0,
        },
        TracePoint {
            nfe: 7,
            best_value: 4.0,
        },
    ];
    assert_eq!(
        densify(&trace, &[2, 4, 6, 8]),
        vec![None, Some(9.0), Some(9.0), Some(4.0)]
    );
}

#[test]
fn wtl_and_iar_agree() {
    let mcd = [1.0, 5.0, 9.0, 0.0];
    let base = [2.0, 5.0, 3.0, 1.0];
    let wtl = tally_wtl(&mcd, &base, 0.0).unwrap();
    assert_eq!((wtl.wins, wtl.ties, wtl.losses), (2, 1, 1));
    let better = mcd
        .iter()
        .zip(&base)
        .filter(|(m, b)| compute_iar(**b, **m).mcd_better())
        .count();
    assert_eq!(better, wtl.wins);
    assert!(tally_wtl(&mcd, &base[..2], 0.0).is_err());
}

#[test]
fn grid_writes_expected_files() {
    let dir = tempfile::tempdir().unwrap();
    let report = harness::run_grid(&small_config(dir.path())).unwrap();
    assert_eq!(report.runs.len(), 3 * 2 * 3);
    assert!(report
        .runs
        .iter()
        .all(|r| r.failure.is_none() && r.row.used_nfe <= 800));

    let csv = fs::read_to_string(dir.path().join("results.csv")).unwrap();
    assert!(csv.starts_with("algorithm,function,dim,seed,max_nfe,used_nfe,final_error,wall_ms\n"));
    assert_eq!(csv.lines().count(), 19);
    assert!(dir
        .path()
        .join("traces/mcd__shifted_sphere__nfe800__r2.csv")
        .exists());
    assert!(dir
        .path()
        .join("plots/shifted_rosenbrock__nfe800.svg")
        .exists());
    assert!(!dir.path().join("failures.txt").exists());

    // MCD at D=8, 5 iterations spends 80 per restart, 10 restarts.
    assert!(report
        .runs
        .iter()
        .filter(|r| r.row.algorithm == "mcd")
        .all(|r| r.row.used_nfe == 800));

    let iar = report
        .summary
        .iar
        .iter()
        .find(|e| e.baseline == "de" && e.function == "shifted_sphere")
        .unwrap();
    let direct = compute_iar(iar.baseline_error, iar.mcd_error);
    assert_eq!(iar.iar, Some(direct.value));
    assert_eq!(iar.mcd_better, direct.mcd_better());
}

#[test]
fn report_regenerates_identical_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let first = harness::run_grid(&small_config(dir.path())).unwrap();
    let summary = fs::read(dir.path().join("summary.json")).unwrap();
    let svg = fs::read(dir.path().join("plots/shifted_sphere__nfe800.svg")).unwrap();
    fs::remove_file(dir.path().join("summary.json")).unwrap();
    fs::remove_dir_all(dir.path().join("plots")).unwrap();

    let again = harness::derive_report(dir.path()).unwrap();
    assert_eq!(again.summary, first.summary);
    assert_eq!(fs::read(dir.path().join("summary.json")).unwrap(), summary);
    assert_eq!(
        fs::read(dir.path().join("plots/shifted_sphere__nfe800.svg")).unwrap(),
        svg
    );
}

#[test]
fn equal_seeds_give_equal_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig {
        seeds: Some(vec![4, 4]),
        repeats: 2,
        ..small_config(dir.path())
    };
    let report = harness::run_grid(&cfg).unwrap();
    for pair in report.runs.chunks(2) {
        assert_eq!(pair[0].row, pair[1].row);
        assert_eq!(pair[0].trace, pair[1].trace);
    }
}

#[test]
fn config_round_trips_through_text() {
    let cfg = small_config(Path::new("out"));
    assert_eq!(ExperimentConfig::parse(&cfg.to_text()).unwrap(), cfg);
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mcd-bench"))
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    fs::write(&bad, "dim = ten\n").unwrap();
    let status = bin().args(["run", "--config"]).arg(&bad).status().unwrap();
    assert_eq!(status.code(), Some(2));

    let tight = dir.path().join("tight.cfg");
    fs::write(
        &tight,
        "algorithms = mcd\ndim = 100\nmax_nfe = 1000\nmax_iter = 10\n",
    )
    .unwrap();
    let status = bin()
        .args(["run", "--config"])
        .arg(&tight)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));
}

#[test]
fn cli_run_report_and_suite() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.cfg");
    fs::write(
        &cfg,
        "algorithms = mcd, de\nfunctions = shifted_sphere, shifted_ackley\ndim = 4\nmax_nfe = 400\nmax_iter = 5\nrepeats = 2\noutput_dir = ignored\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .env("MCD_OUTPUT_DIR", &out_dir)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stdout).contains("mcd vs de @ 400 NFE: w/t/l ="));
    assert!(out_dir.join("results.csv").exists());

    let out = bin()
        .args(["report", "--in"])
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(out.status.success());

    let manifest = dir.path().join("suite.json");
    let out = bin()
        .args(["suite", "--dim", "10", "--seed", "3", "--manifest"])
        .arg(&manifest)
        .output()
        .unwrap();
    assert!(out.status.success());
    let entries: Vec<serde_json::Value> =
        serde_json::from_str(&fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(entries.len(), 8);
    assert_eq!(entries[0]["box"]["lower"][0], -100.0);
}
