use std::process::Command;

fn simplexvol(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_simplexvol"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn integrate_prints_exact_csv() {
    let (code, out, err) = simplexvol(&["integrate", "--simplex", "std:2", "--f", "poly:x1*x2"]);
    assert_eq!(code, 0, "{err}");
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "value,decimal,method,error");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "1/24");
    assert!((row[1].parse::<f64>().unwrap() - 1.0 / 24.0).abs() < 1e-15);
}

#[test]
fn monte_carlo_is_deterministic_per_seed() {
    let args = [
        "integrate", "--simplex", "std:3", "--f", "logsumexp:d=3", "--method", "monte-carlo", "--samples", "20000",
        "--seed", "17",
    ];
    let a = simplexvol(&args);
    let b = simplexvol(&args);
    assert_eq!(a.0, 0, "{}", a.2);
    assert_eq!(a.1, b.1);
    let mut other = args;
    other[args.len() - 1] = "18";
    assert_ne!(simplexvol(&other).1, a.1);
}

#[test]
fn sweep_csv_round_trip() {
    let (code, out, err) = simplexvol(&["sweep", "--family", "exp-b", "--v0", "1,0.5", "--u-grid", "2,4,8"]);
    assert_eq!(code, 0, "{err}");
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "u,perspective,naive,ratio");
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.iter().map(|r| r[0]).collect::<Vec<_>>(), vec![2.0, 4.0, 8.0]);
    for r in &rows {
        assert!(r[2] >= r[1] && r[1] > 0.0);
        assert!((r[3] - (r[2] - r[1]) / r[2]).abs() < 1e-12);
    }
}

#[test]
fn volume_json_for_interval() {
    let (code, out, err) = simplexvol(&["volume", "--simplex", "interval:1,2", "--f", "poly:x1^2"]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["cutoff_amount"]["rational"], "7/36");
    assert_eq!(v["cutoff_ratio"]["rational"], "7/9");
    assert_eq!(v["ratio_undefined"], false);
}

#[test]
fn affine_function_has_undefined_ratio() {
    let (code, out, err) = simplexvol(&["volume", "--simplex", "std:2", "--f", "poly:x1 + 2*x2"]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["ratio_undefined"], true);
}

#[test]
fn simplex_from_file() {
    let dir = std::env::temp_dir().join(format!("simplexvol-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tri.json");
    std::fs::write(&path, r#"{"vertices": [["0","0"], ["1","0"], ["0","1"]]}"#).unwrap();
    let spec = format!("file:{}", path.display());
    let (code, out, err) = simplexvol(&["integrate", "--simplex", &spec, "--f", "poly:x1*x2"]);
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(code, 0, "{err}");
    assert!(out.lines().nth(1).unwrap().starts_with("1/24,"));
}

#[test]
fn rule_export_sums_to_volume() {
    let (code, out, err) = simplexvol(&["rule", "--conical", "--d", "3", "--s", "2"]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let weights = v["weights"].as_array().unwrap();
    assert_eq!(weights.len(), 27);
    let sum: f64 = weights
        .iter()
        .map(|w| match w {
            serde_json::Value::String(s) => s.parse::<f64>().unwrap(),
            other => other.as_f64().unwrap(),
        })
        .sum();
    assert!((sum - 1.0 / 6.0).abs() < 1e-14);
}

#[test]
fn error_exit_codes() {
    assert_eq!(simplexvol(&["integrate", "--simplex", "std:2", "--f", "poly:x1 +* x2"]).0, 2);
    assert_eq!(simplexvol(&["volume", "--simplex", "interval:-1,2", "--f", "poly:x1^2"]).0, 3);
    assert_eq!(simplexvol(&["integrate", "--simplex", "file:/nonexistent/s.json", "--f", "poly:1"]).0, 5);
    assert_eq!(simplexvol(&["--version"]).0, 0);
}
