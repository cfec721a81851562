use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn nctrap(args: &[&str]) -> Output {
    nctrap_env(args, &[])
}

fn nctrap_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_nctrap"));
    cmd.args(args).env_remove("NCTRAP_PRECISION");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("nctrap runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn num(v: &Value, path: &str) -> f64 {
    let mut node = v;
    for k in path.split('.') {
        node = match k.parse::<usize>() {
            Ok(i) => &node[i],
            Err(_) => &node[k],
        };
    }
    node.as_f64().unwrap_or_else(|| panic!("{path} = {node}"))
}

/// Every non-integer number token has 17 significant digits.
fn assert_sig17(text: &str) {
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let starts = (c == b'-' || c.is_ascii_digit()) && (i == 0 || b" :[,\n".contains(&bytes[i - 1]));
        if !starts {
            i += 1;
            continue;
        }
        let end = (i..bytes.len())
            .find(|&j| !(bytes[j].is_ascii_alphanumeric() || b"-+.".contains(&bytes[j])))
            .unwrap_or(bytes.len());
        let tok = &text[i..end];
        if tok.contains('.') || tok.contains('e') {
            let mantissa = tok.trim_start_matches('-').split('e').next().unwrap();
            let digits = mantissa.chars().filter(|c| c.is_ascii_digit()).count();
            assert!(tok.contains('e') && digits == 17, "non-canonical number {tok}");
        }
        i = end;
    }
}

#[test]
fn spectra_example_json() {
    let o = nctrap(&["spectra"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_sig17(&stdout(&o));
    let r = json(&o);
    assert!((num(&r, "signal.dev_star") - 0.079212580063462).abs() < 1e-14);
    assert!(r["tilde"].is_null());
    let b0 = json(&nctrap(&["spectra", "--set", "trap.B=0"]));
    assert!(num(&b0, "tilde.J0_hbar") < 0.5);
}

#[test]
fn spectra_csv_rows() {
    let o = nctrap(&["spectra", "--format", "csv", "--set", "spectra.n_max=6"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,E_h0,J_z_hbar");
    assert_eq!(lines.len(), 1 + 7);
    assert!(lines[1].starts_with("0,1.09383199908e0,"));
}

#[test]
fn commutative_zero_field_exits_2() {
    let o = nctrap(&[
        "spectra",
        "--set",
        "trap.B=0",
        "--set",
        "nc.theta=0",
        "--set",
        "nc.eta=0",
    ]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("commutative limit"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn invalid_configs_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let both = dir.path().join("both.json");
    std::fs::write(&both, r#"{"nc": {"theta": 0.1, "eta": 0.1, "c_const": 2}}"#).unwrap();
    let cases: Vec<Vec<String>> = vec![
        vec!["spectra".into(), "--config".into(), both.display().to_string()],
        vec!["spectra".into(), "--set".into(), "trap.bogus=1".into()],
        vec!["spectra".into(), "--set".into(), "trap.mass=-1".into()],
        vec!["spectra".into(), "--set".into(), "trap.B_tesla=1".into()],
        vec!["spectra".into(), "--config".into(), "/nonexistent/cfg.json".into()],
        vec!["spectra".into(), "--format".into(), "xml".into()],
        vec!["sweep".into()],
        vec!["dirac".into(), "--format".into(), "csv".into()],
    ];
    for args in cases {
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        let o = nctrap(&a);
        assert_eq!(code(&o), 1, "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"unit_system": "trap", "trap": {"B": 0.25}, "nc": {"theta": 0.1, "c_const": 2.0}, "spectra": {"n_max": 2}}"#,
    )
    .unwrap();
    let c = cfg.display().to_string();
    let r = json(&nctrap(&["spectra", "--config", &c]));
    assert_eq!(num(&r, "inputs.b_field"), 0.25);
    assert!((num(&r, "inputs.eta") - 0.025).abs() < 1e-16);
    let r = json(&nctrap(&[
        "spectra",
        "--config",
        &c,
        "--set",
        "nc.eta=0.04",
        "--set",
        "trap.B=0.5",
    ]));
    assert!((num(&r, "signal.dev_star") - 0.079212580063462).abs() < 1e-14);
}

#[test]
fn extended_precision_env() {
    let d = json(&nctrap(&["spectra"]));
    let e = json(&nctrap_env(&["spectra"], &[("NCTRAP_PRECISION", "extended")]));
    assert_eq!(e["inputs"]["precision"], "extended");
    assert!((num(&d, "signal.dev_star") - num(&e, "signal.dev_star")).abs() < 1e-15);
    let bad = nctrap_env(&["spectra"], &[("NCTRAP_PRECISION", "quad")]);
    assert_eq!(code(&bad), 1);
}

#[test]
fn verify_truncation_and_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.json");
    let o_path = out.display().to_string();
    let o = nctrap(&["verify", "--set", "oracle.n_per_mode=4", "--output", &o_path]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("n_per_mode >="));
    assert!(!out.exists());

    // the unreachable tolerance fails even the canonical algebra
    let o = nctrap(&[
        "verify",
        "--set",
        "oracle.n_per_mode=16",
        "--set",
        "oracle.tolerances.algebra=1e-20",
        "--set",
        "oracle.tolerances.canonical=1e-20",
    ]);
    assert_ne!(code(&o), 0);
    let r = json(&o);
    let failed: Vec<&str> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(
        failed.contains(&"deformed_x1x2") && failed.contains(&"canonical_commutators"),
        "{failed:?}"
    );
}

#[test]
fn verify_commuting_configuration_exits_0() {
    // η = θ·M·MΩ_P² removes the [H2, Jz] obstruction
    let trap = nctrap_core::TrapConfig::trap_units(0.5).unwrap();
    let eta = nctrap_core::fock::commuting_eta(&trap, 0.1, 1.0).unwrap();
    let set = format!("nc.eta={eta:e}");
    let o = nctrap(&[
        "verify",
        "--set",
        "oracle.n_per_mode=20",
        "--set",
        &set,
        "--format",
        "csv",
    ]);
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).starts_with("check,value,tolerance,pass\n"));
    assert!(!stdout(&o).contains(",false"));
}

#[test]
fn dirac_replay() {
    let o = nctrap(&["dirac"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    for needle in [
        "{x1,x2}_D = -1/G",
        "mu_star = G^2/(2K)",
        "omega_star = K/G",
        "{p1,p2}_D = -G/4",
    ] {
        assert!(text.contains(needle), "missing {needle}");
    }
    assert!(text.contains("G=2, K=1"));
    let j = json(&nctrap(&["dirac", "--format", "json"]));
    assert!(j.is_object());
}

#[test]
fn sensitivity_defaults() {
    let o = nctrap(&["sensitivity"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_sig17(&stdout(&o));
    let r = json(&o);
    let b_eta = num(&r, "scenarios.0.B_eta");
    assert!(b_eta > 1e-14 && b_eta < 2e-14);
    let d9 = num(&r, "scenarios.0.delta_j0_hbar");
    let d12 = num(&r, "scenarios.1.delta_j0_hbar");
    assert_eq!((d9.log10().floor(), d12.log10().floor()), (-6.0, -3.0));
    let rate = num(&r, "rate_plan.rate");
    assert!((rate / 1e-5 - 1.0).abs() < 1e-9);

    let bad = nctrap(&["sensitivity", "--set", "sensitivity.fields=[1e-9, 0]"]);
    assert_eq!(code(&bad), 1);
    let trap = nctrap(&["sensitivity", "--set", "unit_system=trap"]);
    assert_eq!(code(&trap), 1);
    let csv = stdout(&nctrap(&["sensitivity", "--format", "csv"]));
    assert_eq!(csv.lines().count(), 3);
}

fn sweep_column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(col).unwrap().to_string()).collect()
}

#[test]
fn sweep_c_squared_monotone() {
    let o = nctrap(&[
        "sweep",
        "--format",
        "csv",
        "--set",
        "trap.B=0",
        "--set",
        "sweep.path=nc.c_sq",
        "--set",
        r#"sweep.log_range={"start": 1e-2, "stop": 1e2, "points": 5}"#,
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    assert!(sweep_column(&text, "status").iter().all(|s| s == "ok"));
    let dev: Vec<f64> = sweep_column(&text, "dev_tilde")
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    assert_eq!(dev.len(), 5);
    assert!(dev.windows(2).all(|w| w[1] < w[0]), "{dev:?}");
}

#[test]
fn sweep_marks_bad_rows() {
    let o = nctrap(&[
        "sweep",
        "--format",
        "csv",
        "--set",
        "nc.theta=0",
        "--set",
        "nc.eta=0",
        "--set",
        "sweep.path=trap.B",
        "--set",
        "sweep.values=[0, 0.5, -1]",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let status = sweep_column(&stdout(&o), "status");
    assert_eq!(status, ["undefined_reduction", "ok", "domain"]);
    let j = nctrap(&[
        "sweep",
        "--set",
        "nc.theta=0",
        "--set",
        "nc.eta=0",
        "--set",
        "sweep.path=trap.B",
        "--set",
        "sweep.values=[0]",
    ]);
    let r = json(&j);
    assert_eq!(r["rows"][0]["status"], "undefined_reduction");
    assert!(r["rows"][0]["error"].as_str().unwrap().contains("commutative"));
}

#[test]
fn sweep_theta_at_fixed_c() {
    let o = nctrap(&[
        "sweep",
        "--format",
        "csv",
        "--set",
        "trap.B=0",
        "--set",
        "nc.c_const=1.5",
        "--set",
        "sweep.path=nc.theta",
        "--set",
        "sweep.values=[0.001, 0.01, 0.1, 1, 10]",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let dev = sweep_column(&stdout(&o), "dev_tilde");
    assert!(dev.iter().all(|d| d == &dev[0]), "{dev:?}");
}

#[test]
fn failed_runs_leave_no_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    std::fs::write(&out, "previous\n").unwrap();
    let p = out.display().to_string();
    let o = nctrap(&[
        "spectra",
        "--set",
        "trap.B=0",
        "--set",
        "nc.theta=0",
        "--set",
        "nc.eta=0",
        "--output",
        &p,
    ]);
    assert_eq!(code(&o), 2);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "previous\n");
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);

    let ok = nctrap(&["spectra", "--output", &p]);
    assert_eq!(code(&ok), 0);
    assert!(ok.stdout.is_empty());
    let written = std::fs::read_to_string(Path::new(&p)).unwrap();
    assert_eq!(written, stdout(&nctrap(&["spectra"])));
}

#[test]
fn sample_configs_run() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let cfg = |name: &str| dir.join(name).display().to_string();
    for (name, cmd) in [
        ("trap_units.json", "spectra"),
        ("si_ion.json", "spectra"),
        ("si_ion.json", "sensitivity"),
        ("sweep_c_sq.json", "sweep"),
    ] {
        let o = nctrap(&[cmd, "--config", &cfg(name)]);
        assert_eq!(code(&o), 0, "{name} {cmd}: {}", stderr(&o));
    }
    let r = json(&nctrap(&["spectra", "--config", &cfg("trap_units.json")]));
    assert!((num(&r, "signal.dev_star") - 0.079212580063462).abs() < 1e-14);
    let si = json(&nctrap(&["spectra", "--config", &cfg("si_ion.json")]));
    assert_eq!(si["inputs"]["unit_system"], "si");
}
