use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn zetashift(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zetashift"))
        .current_dir(root())
        .env_remove("ZETASHIFT_OUT")
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .unwrap()
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&read(path)).unwrap()
}

#[test]
fn help_and_version_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(zetashift(dir.path(), &["--help"]).status.code(), Some(0));
    assert_eq!(zetashift(dir.path(), &["--version"]).status.code(), Some(0));
}

#[test]
fn unknown_command_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = zetashift(dir.path(), &["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "ConfigError");
}

#[test]
fn nonpositive_epsilon_fails_before_evaluation() {
    let dir = tempfile::tempdir().unwrap();
    for eps in ["0", "-0.5"] {
        let out = zetashift(dir.path(), &["scan", "--config", "configs/scan.toml", "--epsilon", eps]);
        assert_eq!(out.status.code(), Some(2));
        assert_eq!(json(&dir.path().join("error.json"))["error"], "ConfigError");
        assert!(!dir.path().join("summary.json").exists());
    }
}

#[test]
fn budget_coupling_is_checked_at_load() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scan.toml");
    let text = read(&root().join("configs/scan.toml")).replace("abs_tol = 1e-4", "abs_tol = 0.2");
    std::fs::write(&cfg, text).unwrap();
    let out = zetashift(dir.path(), &["scan", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scan.toml");
    let text = read(&root().join("configs/scan.toml"));
    for bad in [format!("extra = 1\n{text}"), format!("{text}\nextra = 1\n")] {
        std::fs::write(&cfg, bad).unwrap();
        let out = zetashift(dir.path(), &["scan", "--config", cfg.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2));
    }
}

#[test]
fn missing_config_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = zetashift(dir.path(), &["torus", "--config", "no/such/file.toml"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&dir.path().join("error.json"))["error"], "IoError");
}

#[test]
fn eval_writes_a_stamped_record() {
    let dir = tempfile::tempdir().unwrap();
    let out = zetashift(dir.path(), &["--seed", "11", "eval", "--spec", "configs/functions/riemann.toml", "--at", "2,0"]);
    assert_eq!(out.status.code(), Some(0));
    let rec = json(&dir.path().join("eval.json"));
    let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
    assert!((rec["value"][0].as_f64().unwrap() - pi2_6).abs() < 1e-13);
    assert_eq!(rec["seed"], 11);
    assert_eq!(rec["config_hash"].as_str().unwrap().len(), 64);
    assert!(dir.path().join("timing.json").exists());
}

#[test]
fn eval_accepts_negative_ordinates() {
    let dir = tempfile::tempdir().unwrap();
    let out = zetashift(dir.path(), &["eval", "--spec", "configs/functions/periodic.toml", "--at", "0.7,-3"]);
    assert_eq!(out.status.code(), Some(0));
    let rec = json(&dir.path().join("eval.json"));
    assert_eq!(rec["s"][1], -3.0);
}

#[test]
fn scan_is_byte_reproducible_and_stamped() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["scan", "--config", "configs/scan.toml", "--n", "400"];
    assert_eq!(zetashift(a.path(), &args).status.code(), Some(0));
    assert_eq!(zetashift(b.path(), &[&["--workers", "3"], &args[..]].concat()).status.code(), Some(0));
    let summary = json(&a.path().join("summary.json"));
    let hash = summary["config_hash"].as_str().unwrap().to_string();
    for name in ["summary.json", "density.csv", "hits.csv"] {
        let text = read(&a.path().join(name));
        assert_eq!(text, read(&b.path().join(name)), "{name} differs");
        assert!(text.contains(&hash), "{name} lacks the config hash");
    }
    assert_eq!(summary["density_den"], 401);
    let density = read(&a.path().join("density.csv"));
    let rows: Vec<&str> = density.lines().skip(2).collect();
    assert_eq!(rows.iter().map(|r| r.split(',').next().unwrap()).collect::<Vec<_>>(), ["10", "100", "400"]);
    let hits = read(&a.path().join("hits.csv"));
    assert_eq!(hits.lines().nth(1), Some("k,dist1,dist2"));
    assert_eq!(hits.lines().count() - 2, summary["hits"].as_u64().unwrap() as usize);
}

#[test]
fn overrides_change_the_hash() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    zetashift(a.path(), &["scan", "--config", "configs/scan.toml", "--n", "50"]);
    zetashift(b.path(), &["scan", "--config", "configs/scan.toml", "--n", "51"]);
    assert_ne!(json(&a.path().join("summary.json"))["config_hash"], json(&b.path().join("summary.json"))["config_hash"]);
}

#[test]
fn density_reports_each_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let out = zetashift(dir.path(), &["density", "--config", "configs/scan.toml", "--checkpoints", "10,100,300"]);
    assert_eq!(out.status.code(), Some(0));
    let text = read(&dir.path().join("density.csv"));
    for line in text.lines().skip(2) {
        let f: Vec<&str> = line.split(',').collect();
        let (n, hits, d): (u64, u64, f64) = (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap());
        assert_eq!(d, hits as f64 / (n + 1) as f64);
    }
    let bad = zetashift(dir.path(), &["density", "--config", "configs/scan.toml", "--checkpoints", "100,10"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_lists_every_check_and_compares_baselines() {
    let dir = tempfile::tempdir().unwrap();
    let out = zetashift(dir.path(), &["verify", "--suite", "claims"]);
    assert_eq!(out.status.code(), Some(0));
    let summary = json(&dir.path().join("summary.json"));
    let checks = summary["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 16);
    assert!(checks.iter().all(|c| c["passed"].is_boolean() && c["measured"].is_number()));
    let base = dir.path().join("baseline.json");
    std::fs::copy(dir.path().join("summary.json"), &base).unwrap();

    let again = tempfile::tempdir().unwrap();
    let ok = zetashift(again.path(), &["verify", "--suite", "claims", "--baseline", base.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(read(&again.path().join("summary.json")), read(&dir.path().join("summary.json")));

    let other = zetashift(again.path(), &["--seed", "5", "verify", "--suite", "claims", "--baseline", base.to_str().unwrap()]);
    assert_eq!(other.status.code(), Some(2));
}

#[test]
fn strict_verify_fails_on_a_failed_check_and_baselines_catch_regressions() {
    let dir = tempfile::tempdir().unwrap();
    let bundled = read(&root().join("configs/verify.toml"));
    let section = |text: &str| {
        let start = text.find("[claims]").unwrap();
        let end = text.find("[torus]").unwrap();
        text[start..end].to_string()
    };
    let good = dir.path().join("good.toml");
    let bad = dir.path().join("bad.toml");
    std::fs::write(&good, section(&bundled)).unwrap();
    std::fs::write(&bad, section(&bundled).replace("decay_final = 0.05", "decay_final = 1e-9")).unwrap();

    let out = dir.path().join("out");
    let lenient = zetashift(&out, &["verify", "--suite", "claims", "--config", bad.to_str().unwrap()]);
    assert_eq!(lenient.status.code(), Some(0));
    assert!(json(&out.join("summary.json"))["failed"].as_u64().unwrap() > 0);
    let strict = zetashift(&out, &["verify", "--suite", "claims", "--strict", "--config", bad.to_str().unwrap()]);
    assert_eq!(strict.status.code(), Some(1));

    // A baseline must carry the same config hash to be comparable.
    let good_out = dir.path().join("good_out");
    zetashift(&good_out, &["verify", "--suite", "claims", "--config", good.to_str().unwrap()]);
    let mut base = json(&good_out.join("summary.json"));
    base["config_hash"] = json(&out.join("summary.json"))["config_hash"].clone();
    let base_path = dir.path().join("base.json");
    std::fs::write(&base_path, base.to_string()).unwrap();
    let reg = zetashift(&out, &["verify", "--suite", "claims", "--config", bad.to_str().unwrap(), "--baseline", base_path.to_str().unwrap()]);
    assert_eq!(reg.status.code(), Some(1));
    assert!(!json(&out.join("summary.json"))["regressions"].as_array().unwrap().is_empty());
}

#[test]
fn missing_suite_section_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("empty.toml");
    std::fs::write(&cfg, "").unwrap();
    let out = zetashift(dir.path(), &["verify", "--suite", "torus", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn torus_writes_orbit_and_haar_tables() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("torus.toml");
    let text = read(&root().join("configs/torus.toml"))
        .replace("n = 10000", "n = 300")
        .replace("samples = 10000", "samples = 200")
        .replace("m_cutoff = 1000", "m_cutoff = 60");
    std::fs::write(&cfg, text).unwrap();
    let run = |out: &Path, seed: &str| zetashift(out, &["--seed", seed, "torus", "--config", cfg.to_str().unwrap()]);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert_eq!(run(&a, "3").status.code(), Some(0));
    assert_eq!(run(&b, "3").status.code(), Some(0));
    for name in ["orbit.csv", "haar.csv", "summary.json"] {
        assert_eq!(read(&a.join(name)), read(&b.join(name)));
    }
    assert_eq!(read(&a.join("orbit.csv")).lines().count(), 2 + 301);
    assert_eq!(read(&a.join("haar.csv")).lines().count(), 2 + 200);
    let s = json(&a.join("summary.json"));
    assert_eq!(s["seed"], 3);
    assert_eq!(s["functionals"].as_array().unwrap().len(), 3);
    let c = dir.path().join("c");
    run(&c, "4");
    assert_ne!(read(&a.join("haar.csv")), read(&c.join("haar.csv")));
}

#[test]
fn mean_square_reports_the_reference() {
    let dir = tempfile::tempdir().unwrap();
    let out = zetashift(dir.path(), &["mean-square", "--spec", "configs/functions/riemann.toml", "--sigma0", "2", "--T", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let s = json(&dir.path().join("summary.json"));
    assert!(s["relative_deviation"].as_f64().unwrap() < 0.01);
}

#[test]
fn output_dir_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_zetashift"))
        .current_dir(root())
        .env("ZETASHIFT_OUT", dir.path())
        .args(["eval", "--spec", "configs/functions/riemann.toml", "--at", "3,1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("eval.json").exists());
}
