use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use xxcrit::Solver;
use xxcrit_cli::args::{BoundaryArg, Observable, SweepParam};
use xxcrit_cli::sweep::{run_sweep, SweepConfig};
use xxcrit_cli::table::{Cell, Table};

fn run(args: &[&str], threads: Option<&str>) -> Vec<u8> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_xxcrit"));
    cmd.args(args);
    if let Some(t) = threads {
        cmd.env("XXCRIT_THREADS", t);
    }
    let out = cmd.output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn json(args: &[&str]) -> Value {
    serde_json::from_slice(&run(args, None)).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn config(param: SweepParam, from: f64, to: f64, steps: usize, obs: &[Observable]) -> SweepConfig {
    SweepConfig {
        swept_parameter: param,
        from,
        to,
        steps,
        log_spacing: false,
        observables: obs.iter().copied().collect::<BTreeSet<_>>(),
        solver: Solver::Infinite,
        n_sites: 2,
        boundary: BoundaryArg::Periodic,
        j: 1.0,
        mu: 0.0,
        temperature: 0.0,
        theta: 1e-3,
        j_perp: 1.0,
        quadrature_points: 64,
    }
}

fn values(t: &Table, col: &str) -> Vec<f64> {
    t.column(col).unwrap().iter().map(|c| c.as_f64().unwrap()).collect()
}

#[test]
fn mu_sweep_vanishes_beyond_critical_point() {
    let t = run_sweep(&config(SweepParam::Mu, 0.0, 2.0, 41, &[Observable::FsKinetic, Observable::Entropy])).unwrap();
    assert_eq!(t.rows.len(), 41);
    let mu = values(&t, "mu");
    for col in ["fs_kinetic", "entropy"] {
        for (m, v) in mu.iter().zip(values(&t, col)) {
            if *m >= 1.0 {
                assert!(v.abs() <= 1e-10, "{col} at mu={m}: {v}");
            } else {
                assert!(v > 0.0);
            }
        }
    }
}

#[test]
fn theta_sweep_curvature_constant() {
    let mut cfg = config(SweepParam::Theta, 2.5e-3, 1e-2, 3, &[Observable::FsCurvature]);
    cfg.log_spacing = true;
    let t = run_sweep(&cfg).unwrap();
    assert_eq!(values(&t, "theta"), vec![2.5e-3, 5e-3, 1e-2]);
    let f = values(&t, "fs_curvature");
    assert!(f.iter().all(|x| (x / f[0] - 1.0).abs() < 0.01));
}

#[test]
fn failed_points_are_flagged_not_fatal() {
    let mut cfg = config(SweepParam::Temperature, -1.0, 1.0, 3, &[Observable::Entropy, Observable::FsKinetic]);
    cfg.n_sites = 6;
    cfg.solver = Solver::ExactDiag;
    let t = run_sweep(&cfg).unwrap();
    let status = t.column("status").unwrap();
    assert!(matches!(status[0], Cell::Text(s) if s.contains("temperature")));
    assert_eq!(status[1], &Cell::text("ok"));
    assert_eq!(t.rows[0][2], Cell::Null);
}

#[test]
fn csv_and_json_round_trip() {
    let t = run_sweep(&config(
        SweepParam::Mu,
        -1.3,
        1.7,
        13,
        &[Observable::Concurrence, Observable::Correlators, Observable::Witnesses, Observable::FsCurvature],
    ))
    .unwrap();
    let csv = t.to_csv_string().unwrap();
    assert_eq!(Table::read_csv(csv.as_bytes()).unwrap(), t);
    let encoded = serde_json::to_string(&t).unwrap();
    assert_eq!(serde_json::from_str::<Table>(&encoded).unwrap(), t);

    let twod = run_sweep(&config(SweepParam::JPerp, 0.5, 1.5, 4, &[Observable::Witnesses, Observable::Entropy])).unwrap();
    assert_eq!(Table::read_csv(twod.to_csv_string().unwrap().as_bytes()).unwrap(), twod);
    assert!(matches!(twod.column("status").unwrap()[0], Cell::Text(s) if s.contains("entropy: not defined")));
    assert!(twod.column("energy_2d_margin").unwrap().iter().all(|c| c.as_f64().is_some()));
}

#[test]
fn sweep_file_round_trip_through_binary() {
    let path = tmp("sweep_roundtrip.json");
    let p = path.to_str().unwrap();
    run(&["sweep", "--param", "mu", "--from", "0", "--to", "1.5", "--steps", "7", "--observables", "fs_kinetic,entropy",
        "--out", p], None);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["schema_version"], 1);
    let from_file: Table = serde_json::from_value(doc["result"].clone()).unwrap();
    let direct = run_sweep(&config(SweepParam::Mu, 0.0, 1.5, 7, &[Observable::FsKinetic, Observable::Entropy])).unwrap();
    assert_eq!(from_file, direct);
}

#[test]
fn reruns_are_bit_identical_across_thread_counts() {
    let args = ["sweep", "--param", "mu", "--from", "0", "--to", "1.2", "--steps", "9", "--n-sites", "8", "--temp", "0.3",
        "--observables", "fs_kinetic,fs_curvature,concurrence", "--format", "csv"];
    let one = run(&args, Some("1"));
    assert_eq!(one, run(&args, Some("4")));
    assert_eq!(one, run(&args, None));
}

#[test]
fn profile_writes_csv_and_classification() {
    let path = tmp("profile_mu0.csv");
    run(&["profile", "--mu", "0", "--r-max", "64", "--format", "csv", "--out", path.to_str().unwrap()], None);
    let t = Table::read_csv(std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(t.columns, vec!["r", "value"]);
    assert_eq!(t.rows.len(), 64);
    let side: Value =
        serde_json::from_str(&std::fs::read_to_string(path.with_extension("classification.json")).unwrap()).unwrap();
    assert_eq!(side["result"]["classification"], "quasi_long_range");
    let p = side["result"]["fit_poly"]["parameter"].as_f64().unwrap();
    assert!((p - 0.5).abs() < 0.05);
}

#[test]
fn experiment_report_has_checks() {
    let doc = json(&["experiment", "--mass-amu", "87", "--spacing-m", "0.2e-6", "--temp-kelvin", "150e-9",
        "--mu-hz", "1e4", "--quoted-disc-holds", "true"]);
    let checks = doc["result"]["checks"].as_array().unwrap();
    let names: Vec<&str> = checks.iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["mu_t_disc", "thermal_wavelength", "continuum_energy"]);
    assert_eq!(checks[0]["verdict"], "fails");
    assert!(checks[0]["left"].is_number() && checks[0]["right"].is_number());
    assert!(!doc["result"]["discrepancies"].as_array().unwrap().is_empty());
    let j_hz = doc["result"]["j_energy"]["hz"].as_f64().unwrap();
    assert!((j_hz / 1450.0 - 1.0).abs() < 0.02);
}

#[test]
fn dim2_report_compares_with_asymptote() {
    let doc = json(&["dim2", "--j", "1", "--j-perp", "1", "--beta", "1e-3"]);
    let dev = doc["result"]["high_t_comparison"]["relative_deviation"].as_f64().unwrap();
    assert!(dev < 1e-3);
    assert_eq!(doc["result"]["high_t_entanglement_threshold"], 0.125);
    let cold = json(&["dim2"]);
    assert!(cold["result"]["high_t_comparison"].is_null());
    assert!((cold["result"]["u"].as_f64().unwrap() + 0.479045699341425).abs() < 1e-12);
}

#[test]
fn ground_energy_agrees_between_engines() {
    let e = |solver: &str| {
        json(&["ground", "--n-sites", "10", "--mu", "0.4", "--solver", solver])["result"]["energy_per_site"]
            .as_f64()
            .unwrap()
    };
    assert!((e("exactdiag") - e("freefermion")).abs() < 1e-10);
    let t = |solver: &str| {
        json(&["thermal", "--n-sites", "8", "--mu", "0.4", "--temp", "0.7", "--solver", solver])["result"]
            ["energy_per_site"]
            .as_f64()
            .unwrap()
    };
    assert!((t("exactdiag") - t("freefermion")).abs() < 1e-10);
}

#[test]
fn counterexamples_and_hardcore() {
    let doc = json(&["counterexamples"]);
    for g in doc["result"]["ghz"].as_array().unwrap() {
        assert!(g["max_transverse_correlator"].as_f64().unwrap() <= 1e-12);
        assert!(g["max_entropy_deviation_from_ln2"].as_f64().unwrap() <= 1e-12);
    }
    assert!(doc["result"]["coherent"]["max_hop_deviation"].as_f64().unwrap() <= 1e-6);
    assert!(doc["result"]["coherent"]["max_cut_entropy"].as_f64().unwrap() <= 1e-12);
    let hc = json(&["hardcore"]);
    assert!(hc["result"]["spectrum_max_deviation"].as_f64().unwrap() <= 1e-10);
    assert!(hc["result"]["relative_difference"].as_f64().unwrap() <= 0.02);
}
