use std::process::{Command, Output};

fn semisic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semisic")).args(args).env("SEMISIC_LOG", "quiet").output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn construct_reports_weights_and_rejects_out_of_range() {
    let out = semisic(&["construct", "--B", "0.0666666666666667"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let weights: Vec<f64> =
        v["povm"]["elements"].as_array().unwrap().iter().map(|e| e["weight"].as_f64().unwrap()).collect();
    let root = (1.0f64 - 12.0 / 15.0).sqrt();
    let want = [(1.0 - root) / 4.0, (1.0 - root) / 4.0, (1.0 + root) / 4.0, (1.0 + root) / 4.0];
    for (w, t) in weights.iter().zip(want) {
        assert!((w - t).abs() < 1e-12, "{w} vs {t}");
    }
    assert_eq!(v["extremality"]["extremal"], true);

    for bad in ["0.0625", "0.09", "nan"] {
        let out = semisic(&["construct", "--B", bad]);
        assert_eq!(out.status.code(), Some(2), "B = {bad}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
}

#[test]
fn certify_passes_on_the_family() {
    let out = semisic(&["certify", "--B", "0.0833333333"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "pass");
    assert!((v["achieved_w"].as_f64().unwrap() - 6.9282032).abs() < 1e-6);

    let out = semisic(&["certify", "--B", "0.07"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn certify_fails_with_exit_one_when_tolerance_is_unreachable() {
    let out = semisic(&["certify", "--B", "0.07", "--restarts", "1", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["verdict"], "fail");
}

#[test]
fn certify_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = semisic(&["certify", "--B", "0.075", "--seed", "7", "--restarts", "5", "--out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn sweep_matches_closed_forms() {
    let out = semisic(&["sweep", "--B-min", "0.0626", "--B-max", "0.0833333333", "--steps", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let headers: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(headers, ["B", "c1", "c2", "Q_analytic", "Q_seesaw", "Q_prime", "gram_residual"]);
    let mut rows = 0;
    for rec in rdr.records() {
        let r: Vec<f64> = rec.unwrap().iter().map(|s| s.parse().unwrap()).collect();
        assert!((r[3] - r[4]).abs() <= 1e-7, "row {r:?}");
        assert!(r[3] > r[5]);
        assert!(r[6] < 1e-6);
        rows += 1;
    }
    assert_eq!(rows, 6);

    assert_eq!(semisic(&["sweep", "--B-min", "0.07", "--B-max", "0.08", "--steps", "0"]).status.code(), Some(2));
    assert_eq!(semisic(&["sweep", "--B-min", "0.08", "--B-max", "0.07", "--steps", "2"]).status.code(), Some(2));
}

#[test]
fn oracle_writes_json_and_grid() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.csv");
    let out = semisic(&[
        "oracle",
        "--B",
        "0.0666666666666667",
        "--samples",
        "200",
        "--trials",
        "500",
        "--grid",
        "5",
        "--grid-csv",
        grid.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["mean_bound"]["worst_slack"].as_f64().unwrap() >= 0.0);
    let text = std::fs::read_to_string(&grid).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("mu1,max_W"));
    assert_eq!(lines.count(), 5);

    assert_eq!(semisic(&["oracle", "--B", "0.07", "--samples", "0"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(semisic(&[]).status.code(), Some(2));
    assert_eq!(semisic(&["certify"]).status.code(), Some(2));
    assert_eq!(semisic(&["certify", "--B", "0.07", "--restarts", "0"]).status.code(), Some(2));
}
