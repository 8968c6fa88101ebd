use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_magnon-kerr"))
        .args(args)
        .output()
        .expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn point_text_and_json() {
    let o = run(&["point"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = stdout(&o);
    assert!(text.contains("[positive]") && text.contains("[negative]"));
    assert!(text.contains("lyapunov_residual = "));
    assert!(text.contains("C_R = "));

    let o = run(&["point", "--json", "--kerr", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in ["c_ab", "c_am", "c_mb", "c_r"] {
        assert_eq!(v["ratios"][key].as_f64(), Some(0.0));
    }
    assert_eq!(v["forward"]["stable"], true);
}

#[test]
fn sweep_writes_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let o = run(&[
        "sweep",
        "--var",
        "Delta_m",
        "--start",
        "-1.5",
        "--stop",
        "-0.5",
        "--count",
        "11",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv.lines().count(), 12);
    assert!(csv.starts_with("sweep_var,value,stable_pos"));
    assert!(csv
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("Delta_m,-1.5000000000000000e0,true,true,"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("params.toml");
    std::fs::write(&cfg, "K = 0.0\ng_m = 0.0\ng_b = 0.0\n").unwrap();
    let o = run(&["point", "--json", "--config", cfg.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["forward"]["measures"]["e_ab"].as_f64(), Some(0.0));

    let o = run(&[
        "point",
        "--json",
        "--config",
        cfg.to_str().unwrap(),
        "--g-b",
        "0.5",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["params"]["g_b"].as_f64(), Some(0.5));
    assert_eq!(v["params"]["g_m"].as_f64(), Some(0.0));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["figure", "fig9"]).status.code(), Some(1));
    assert_eq!(run(&["point", "--kappa-a", "-1"]).status.code(), Some(1));
    assert_eq!(
        run(&["sweep", "--var", "K", "--start", "1", "--stop", "0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run(&["bogus"]).status.code(), Some(1));
    let all_unstable = run(&[
        "sweep",
        "--var",
        "Delta_m",
        "--start",
        "-1",
        "--stop",
        "-0.9",
        "--count",
        "3",
        "--g-b",
        "3",
        "--delta-a-tilde",
        "-1",
    ]);
    assert_eq!(all_unstable.status.code(), Some(3));
    assert_eq!(
        run(&["check", "--g-b", "3", "--delta-a-tilde", "-1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn check_reports_physical_state() {
    let o = run(&["check", "--kerr", "-0.4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("stable = true"));
    assert!(text.contains("physical = true"));
}

#[test]
fn figure_preset_to_stdout() {
    let o = run(&["figure", "fig4d", "--count", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert_eq!(csv.lines().count(), 6);
    assert!(csv.lines().skip(1).all(|l| l.starts_with("T,")));
}
