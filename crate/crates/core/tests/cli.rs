use std::process::{Command, Output};

use tricong::cli::show_lines;
use tricong::verifier::{sweep, CongruenceTarget, SweepSpec, TargetArgs};

fn tricong(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tricong"))
        .args(args)
        .env_remove("TRICONG_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn abstract_case_passes() {
    let o = tricong(&["verify", "--targets", "ABSTRACT_BC1", "--primes", "5..199"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["summary"]["checked"], 44);
    assert_eq!(v["summary"]["failed"], 0);
    assert_eq!(v["records"][0]["lhs"], "115");
    assert_eq!(v["records"][0]["p"], "5");
}

#[test]
fn csv_output() {
    let o = tricong(&["verify", "--targets", "ABSTRACT_BC1", "--primes", "5..7", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "target,p,b,c,lhs,rhs,residual_valuation,status,args");
    assert!(lines[1].starts_with("ABSTRACT_BC1,5,1,1,115,115,3,pass"));
    assert_eq!(lines.len(), 3);
}

#[test]
fn usage_errors_exit_two() {
    let o = tricong(&["verify", "--primes", "4..10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("prime_min"));

    let o = tricong(&["verify", "--targets", "THM9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("targets"));

    let o = tricong(&["verify", "--b", "3..x"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("b_range"));

    let o = tricong(&["verify", "--jobs", "zero"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("parallelism"));

    assert_eq!(tricong(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(tricong(&["--help"]).status.code(), Some(0));
}

#[test]
fn unwritable_output_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("report.json");
    let o = tricong(&["verify", "--targets", "ABSTRACT_BC1", "--primes", "5..7", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("output_path"));
}

#[test]
fn output_file_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("cfg.json");
    std::fs::write(
        &config,
        r#"{"targets": ["THM2_III", "L_MORLEY", "ID_CONV_4N"], "prime_min": 5, "prime_max": 31, "b_range": [-2, 2], "c_range": [-2, 2], "n_max": 10, "output_format": "csv"}"#,
    )
    .unwrap();
    let out = dir.path().join("report.csv");
    let o = tricong(&["all", "--config", config.to_str().unwrap(), "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("L_MORLEY,11,"));
    assert!(text.contains("ID_CONV_4N,,,,16,16,,pass,k=2"));
    assert!(text.lines().skip(1).all(|l| l.starts_with("THM2_III") || l.starts_with("L_MORLEY") || l.starts_with("ID_CONV_4N")));

    // Flags override the config file.
    let o = tricong(&["all", "--config", config.to_str().unwrap(), "--format", "json", "--primes", "5..5"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["config"]["prime_max"], 5);
    assert_eq!(v["config"]["targets"], serde_json::json!(["THM2_III", "ID_CONV_4N", "L_MORLEY"]));

    std::fs::write(&config, r#"{"prime_min": 3}"#).unwrap();
    let o = tricong(&["verify", "--config", config.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("prime_min"));
}

#[test]
fn reports_are_reproducible_across_job_counts() {
    let args = ["all", "--primes", "5..23", "--b", "-3..3", "--c", "-3..3", "--n-max", "12"];
    let one = tricong(&[&args[..], &["--jobs", "1"]].concat());
    let four = tricong(&[&args[..], &["--jobs", "4"]].concat());
    let env = Command::new(env!("CARGO_BIN_EXE_tricong"))
        .args(args)
        .env("TRICONG_JOBS", "3")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, env.stdout);
    let v: serde_json::Value = serde_json::from_slice(&one.stdout).unwrap();
    assert!(v.get("wall_time").is_none());
    assert!(v["config"].get("parallelism").is_none());
    assert_eq!(v["notes"].as_array().unwrap().len(), 3);
}

#[test]
fn show_example() {
    let o = tricong(&["show", "--target", "THM2_III", "--p", "5", "--b", "1", "--c", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("lhs=115\n"));
    assert!(text.contains("rhs=115\n"));
    assert!(text.contains("modulus=125\n"));

    let o = tricong(&["show", "--target", "COR1", "--p", "7"]);
    assert_eq!(o.status.code(), Some(2));
    let o = tricong(&["show", "--target", "COR1", "--p", "7", "--x", "2"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn show_matches_sweep_records() {
    let spec = SweepSpec {
        targets: CongruenceTarget::ALL.to_vec(),
        primes: vec![5, 7, 13],
        b_range: (-3, 3),
        c_range: (-3, 3),
        x_range: (1, 4),
        margin: 2,
    };
    for r in sweep(&spec).unwrap() {
        let lines = show_lines(r.target, r.p, r.args, 2).unwrap();
        let value = |key: &str| lines.iter().find_map(|l| l.strip_prefix(&format!("{key}=")).map(String::from)).unwrap();
        assert_eq!(value("lhs"), r.lhs.map(|v| v.value().to_string()).unwrap_or_default());
        assert_eq!(value("rhs"), r.rhs.map(|v| v.value().to_string()).unwrap_or_default());
        assert_eq!(value("status"), r.status.to_string());
        if let TargetArgs::Pair { b, c } = r.args {
            assert_eq!(value("b"), b.to_string());
            assert_eq!(value("c"), c.to_string());
        }
    }
}
