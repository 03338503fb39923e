use std::path::Path;
use std::process::{Command, Output};

fn qecvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qecvar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json_lines(bytes: &[u8]) -> Vec<serde_json::Value> {
    std::str::from_utf8(bytes)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn value_of(rows: &[serde_json::Value], name: &str) -> f64 {
    rows.iter()
        .find(|r| r["name"] == name)
        .unwrap_or_else(|| panic!("row {name}"))["value"]
        .as_f64()
        .unwrap()
}

fn csv_records(path: &Path) -> (csv::StringRecord, Vec<csv::StringRecord>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().clone();
    (header, r.records().map(Result::unwrap).collect())
}

#[test]
fn analytic_normal_values() {
    let o = qecvar(&["analytic", "--dist", "normal", "--sigma", "0.9"]);
    assert_eq!(code(&o), 0);
    let rows = json_lines(&o.stdout);
    assert!((value_of(&rows, "v_psi_n1") - 0.2).abs() < 1e-9);
    assert!((value_of(&rows, "v_psi_n5") - 0.81902).abs() < 1e-9);
    let p0 = (1.0 + 15.0 * 0.9f64.powi(8)) / 16.0;
    assert!((value_of(&rows, "e_p0") - p0).abs() < 1e-9);
    assert!(rows.iter().all(|r| r["sigma"] == 0.9 && r["dist"] == "normal"));
    assert!(rows.iter().filter(|r| r["name"].as_str().unwrap().starts_with("appendix")).count() == 8);
}

#[test]
fn analytic_uniform_values() {
    let o = qecvar(&["analytic", "--dist", "uniform"]);
    assert_eq!(code(&o), 0);
    let rows = json_lines(&o.stdout);
    assert!((value_of(&rows, "v_psi_n1") - 2.0).abs() < 1e-9);
    assert!((value_of(&rows, "vq_n1") - 2.0 / 3.0).abs() < 1e-6);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(code(&qecvar(&["analytic", "--dist", "normal", "--sigma", "1.5"])), 2);
    assert_eq!(code(&qecvar(&["analytic", "--dist", "normal"])), 2);
    assert_eq!(code(&qecvar(&["analytic", "--dist", "table"])), 2);
    assert_eq!(code(&qecvar(&["mc", "--dist", "uniform", "--n", "3"])), 2);
    assert_eq!(code(&qecvar(&["mc", "--dist", "uniform", "--samples", "0"])), 2);
    assert_eq!(code(&qecvar(&["frobnicate"])), 2);
    assert_eq!(code(&qecvar(&["--help"])), 0);
}

#[test]
fn mc_is_reproducible_and_worker_independent() {
    let dir = tempfile::tempdir().unwrap();
    let out = |name: &str| dir.path().join(name).display().to_string();
    let base = ["mc", "--dist", "normal", "--sigma", "0.9", "--samples", "10000", "--seed", "42"];
    for (file, workers) in [("a.json", "1"), ("b.json", "1"), ("c.json", "4")] {
        let mut args = base.to_vec();
        let path = out(file);
        args.extend(["--workers", workers, "--out", &path]);
        assert_eq!(code(&qecvar(&args)), 0);
    }
    let read = |f: &str| std::fs::read(dir.path().join(f)).unwrap();
    assert_eq!(read("a.json"), read("b.json"));
    let strip = |f: &str| -> Vec<(String, f64, Option<f64>)> {
        json_lines(&read(f))
            .into_iter()
            .map(|r| (r["name"].as_str().unwrap().to_string(), r["value"].as_f64().unwrap(), r["std_error"].as_f64()))
            .collect()
    };
    assert_eq!(strip("a.json"), strip("c.json"));
    let rows = json_lines(&read("a.json"));
    assert!(rows.iter().all(|r| r["seed"] == 42 && r["samples"] == 10000));
    let names: Vec<&str> = rows.iter().map(|r| r["name"].as_str().unwrap()).collect();
    for needed in ["v_psi", "v_corrected", "v_corrected_s7", "a0_term", "check.conservation"] {
        assert!(names.contains(&needed), "{needed}");
    }
}

#[test]
fn generated_seed_is_reported_and_embedded() {
    let o = qecvar(&["mc", "--dist", "uniform", "--n", "1", "--samples", "100", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let stderr = String::from_utf8(o.stderr).unwrap();
    let seed = stderr
        .lines()
        .find_map(|l| l.strip_prefix("seed: "))
        .and_then(|l| l.split_whitespace().next())
        .expect("seed line");
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    let idx = r.headers().unwrap().iter().position(|h| h == "seed").unwrap();
    for rec in r.records() {
        assert_eq!(&rec.unwrap()[idx], seed);
    }
}

#[test]
fn config_file_is_layered_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "dist = \"normal\"\nsigma = 0.5\nsamples = 200\nseed = 9\n").unwrap();
    let cfg = cfg.display().to_string();
    let o = qecvar(&["mc", "--config", &cfg, "--sigma", "0.7"]);
    assert_eq!(code(&o), 0);
    let rows = json_lines(&o.stdout);
    assert!(rows.iter().all(|r| r["sigma"] == 0.7 && r["samples"] == 200 && r["seed"] == 9));

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "dist = \"normal\"\nsigmaa = 0.5\n").unwrap();
    let o = qecvar(&["mc", "--config", &bad.display().to_string()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8(o.stderr).unwrap().contains("sigmaa"));
}

#[test]
fn table_distribution_runs() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("flat.csv");
    let f = 1.0 / (2.0 * std::f64::consts::PI * std::f64::consts::PI);
    let text: String = std::iter::once("theta0,f\n".to_string())
        .chain((0..=64).map(|i| format!("{},{}\n", i as f64 * std::f64::consts::PI / 64.0, f)))
        .collect();
    std::fs::write(&table, text).unwrap();
    let o = qecvar(&["analytic", "--dist", "table", "--table", &table.display().to_string()]);
    assert_eq!(code(&o), 0);
    let rows = json_lines(&o.stdout);
    assert!((value_of(&rows, "v_psi_n1") - 2.0).abs() < 1e-6);
    std::fs::write(&table, "theta0,f\n0,1\nnot,a number\n").unwrap();
    assert_eq!(code(&qecvar(&["analytic", "--dist", "table", "--table", &table.display().to_string()])), 2);
}

#[test]
fn verify_passes_and_writes_key_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("verify.txt");
    let o = qecvar(&["verify", "--out", &out.display().to_string()]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("all_passed=true"));
    assert!(text.contains("config.corrupt_m=false"));
    let feasible = text
        .lines()
        .filter(|l| l.starts_with("flip_set.s") && !l.ends_with("infeasible"))
        .count();
    assert_eq!(feasible, 15);
    assert!(text.contains("a_count.s0=1,0,0,30,15,18"));
}

#[test]
fn verify_catches_a_corrupted_matrix() {
    let o = qecvar(&["verify", "--corrupt-m"]);
    assert_eq!(code(&o), 1);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("[FAIL] generator_shape")));
}

#[test]
fn sweep_rows_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let o = qecvar(&[
        "sweep", "--sigmas", "0.1,0.3,0.5,0.7,0.9", "--samples", "20000", "--seed", "5", "--format", "csv", "--out",
        &out.display().to_string(),
    ]);
    assert_eq!(code(&o), 0);
    let (header, rows) = csv_records(&out);
    assert_eq!(rows.len(), 5);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let v: Vec<f64> = rows.iter().map(|r| r[col("v_psi_analytic")].parse().unwrap()).collect();
    assert!(v.windows(2).all(|w| w[1] < w[0]));
    assert!(rows.iter().all(|r| &r[col("corrected_not_below_psi")] == "true"));
    assert!(rows.iter().all(|r| &r[col("seed")] == "5"));
    assert_eq!(code(&qecvar(&["sweep"])), 2);
    assert_eq!(code(&qecvar(&["sweep", "--sigmas", ""])), 2);
}

#[test]
fn weights_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.csv");
    let o = qecvar(&["weights", "--grid", "512", "--format", "csv", "--out", &out.display().to_string()]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next().unwrap(), "theta0,w_quantum,w_variance");
    let (_, rows) = csv_records(&out);
    assert_eq!(rows.len(), 512);
    let first: Vec<f64> = rows[0].iter().map(|x| x.parse().unwrap()).collect();
    assert!((first[1] - 2.0).abs() < 1e-9 && (first[2] - 2.0).abs() < 1e-9);
    let mid = rows
        .iter()
        .map(|r| r.iter().map(|x| x.parse::<f64>().unwrap()).collect::<Vec<_>>())
        .min_by(|a, b| (a[0] - std::f64::consts::FRAC_PI_2).abs().total_cmp(&(b[0] - std::f64::consts::FRAC_PI_2).abs()))
        .unwrap();
    assert!(mid[2].abs() < 1e-2);
    assert_ne!(code(&qecvar(&["weights", "--out", "/nonexistent-dir/w.csv"])), 0);
    assert_eq!(code(&qecvar(&["weights", "--grid", "1"])), 2);
}
