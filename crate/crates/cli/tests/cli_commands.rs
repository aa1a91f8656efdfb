use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use topocheck::save_mask;
use topocheck_core::{label_components, BinaryMask, ConnectivityPair, Phase};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_topocheck"));
    c.env_remove("TOPOCHECK_WORKERS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

const GT: [(&str, &[&str]); 3] = [
    ("a.png", &["#....#", ".#..#.", "..##..", "......", "####.."]),
    ("b.png", &["#####", "#...#", "#.#.#", "#...#", "#####"]),
    ("c.png", &["......", ".##...", ".##..#", "......"]),
];

const PRED: [(&str, &[&str]); 3] = [
    ("a.png", &["#....#", ".#....", "..##..", "......", "###..."]),
    ("b.png", &["#####", "#...#", "#...#", "#...#", "##.##"]),
    ("c.png", &["......", ".###..", ".##...", "....#."]),
];

fn write_set(dir: &Path, set: &[(&str, &[&str])]) {
    fs::create_dir_all(dir).unwrap();
    for (name, rows) in set {
        save_mask(&BinaryMask::from_ascii(rows).unwrap(), &dir.join(name)).unwrap();
    }
}

fn fixture() -> (tempfile::TempDir, PathBuf, PathBuf) {
    let tmp = tempfile::tempdir().unwrap();
    let gt = tmp.path().join("gt");
    let pred = tmp.path().join("pred");
    write_set(&gt, &GT);
    write_set(&pred, &PRED);
    (tmp, gt, pred)
}

fn golden(name: &str) -> String {
    fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/golden")
            .join(name),
    )
    .unwrap()
}

#[test]
fn eval_identity_dataset() {
    let (tmp, gt, _) = fixture();
    let out = tmp.path().join("r.json");
    let o = run(&[
        "eval",
        "--pred",
        p(&gt),
        "--gt",
        p(&gt),
        "--connectivity",
        "D",
        "--out",
        p(&out),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let r: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["images"].as_array().unwrap().len(), 3);
    for (name, agg) in r["aggregate"].as_object().unwrap() {
        let mean = agg["mean"].as_f64().unwrap();
        let expect = if matches!(name.as_str(), "DICE" | "CLDICE" | "ARI_D" | "RI_D") {
            1.0
        } else {
            0.0
        };
        assert_eq!(mean, expect, "{name}");
    }
}

#[test]
fn eval_csv_matches_golden() {
    let (_tmp, gt, pred) = fixture();
    let o = run(&[
        "eval",
        "--pred",
        p(&pred),
        "--gt",
        p(&gt),
        "--connectivity",
        "A",
        "--metrics",
        "dice,b0,b1,bm0,bm1,voi,are,ari",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("eval_A.csv"));
}

#[test]
fn eval_golden_rows_agree_with_library() {
    let text = golden("eval_A.csv");
    let row = text.lines().find(|l| l.starts_with("b.png")).unwrap();
    let cells: Vec<&str> = row.split(',').collect();
    let gt = BinaryMask::from_ascii(GT[1].1).unwrap();
    let pred = BinaryMask::from_ascii(PRED[1].1).unwrap();
    let b1 = topocheck_core::betti_number_error(&pred, &gt, ConnectivityPair::A, 1).unwrap();
    let dice = topocheck_core::dice(&pred, &gt).unwrap();
    // the broken ring and the lost dot: two components against one
    assert_eq!(cells[2], "1");
    assert_eq!(cells[3].parse::<f64>().unwrap(), b1 as f64);
    assert_eq!(cells[1].parse::<f64>().unwrap(), dice);
}

#[test]
fn outputs_are_deterministic_across_worker_counts() {
    let (tmp, gt, pred) = fixture();
    let mut reports = Vec::new();
    for workers in ["1", "2", "7"] {
        let out = tmp.path().join(format!("r{workers}.json"));
        let o = bin()
            .env("TOPOCHECK_WORKERS", workers)
            .args([
                "eval",
                "--pred",
                p(&pred),
                "--gt",
                p(&gt),
                "--connectivity",
                "D",
                "--out",
                p(&out),
            ])
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        reports.push(fs::read(&out).unwrap());
    }
    assert!(reports.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn metric_names_state_connectivity() {
    let (tmp, gt, pred) = fixture();
    for conn in ["A", "D"] {
        let out = tmp.path().join("names.json");
        let o = run(&[
            "eval",
            "--pred",
            p(&pred),
            "--gt",
            p(&gt),
            "--connectivity",
            conn,
            "--out",
            p(&out),
        ]);
        assert_eq!(o.status.code(), Some(0));
        let r: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
        for name in r["metrics"].as_array().unwrap() {
            let name = name.as_str().unwrap();
            assert!(
                matches!(name, "DICE" | "CLDICE") || name.ends_with(&format!("_{conn}")),
                "{name}"
            );
        }
    }
}

#[test]
fn partial_failure_keeps_other_images() {
    let (tmp, gt, pred) = fixture();
    fs::write(gt.join("broken.png"), b"no png here").unwrap();
    fs::write(pred.join("broken.png"), b"no png here").unwrap();
    save_mask(
        &BinaryMask::zeros(&[2, 2]).unwrap(),
        &pred.join("orphan.png"),
    )
    .unwrap();
    let out = tmp.path().join("r.json");
    let o = run(&[
        "eval",
        "--pred",
        p(&pred),
        "--gt",
        p(&gt),
        "--connectivity",
        "A",
        "--out",
        p(&out),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let r: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let names: Vec<&str> = r["images"]
        .as_array()
        .unwrap()
        .iter()
        .map(|i| i["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["a.png", "b.png", "c.png"]);
    let errs: Vec<&str> = r["errors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["name"].as_str().unwrap())
        .collect();
    assert_eq!(errs, ["broken.png", "orphan.png"]);
}

#[test]
fn shape_mismatch_is_a_file_error() {
    let (tmp, gt, pred) = fixture();
    save_mask(&BinaryMask::zeros(&[3, 3]).unwrap(), &pred.join("c.png")).unwrap();
    let out = tmp.path().join("r.json");
    let o = run(&[
        "eval",
        "--pred",
        p(&pred),
        "--gt",
        p(&gt),
        "--connectivity",
        "A",
        "--out",
        p(&out),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let r: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r["errors"][0]["name"], "c.png");
}

#[test]
fn usage_errors_exit_2() {
    let (tmp, gt, pred) = fixture();
    let base = ["eval", "--pred", p(&pred), "--gt", p(&gt)];
    let cases: Vec<Vec<&str>> = vec![
        base.to_vec(),
        [&base[..], &["--connectivity", "8"]].concat(),
        [&base[..], &["--connectivity", "A", "--metrics", "b0+b1"]].concat(),
        [&base[..], &["--connectivity", "A", "--metrics", "bm"]].concat(),
        [&base[..], &["--connectivity", "A", "--metrics", "b0_D"]].concat(),
        [&base[..], &["--connectivity", "A", "--bogus"]].concat(),
        [&base[..], &["--connectivity", "A", "--out", "r.txt"]].concat(),
        vec![
            "eval",
            "--pred",
            "/nonexistent",
            "--gt",
            p(&gt),
            "--connectivity",
            "A",
        ],
        vec!["audit", "--data", p(&gt)],
        vec![
            "audit",
            "--data",
            p(&gt),
            "--connectivity",
            "A",
            "--removal-sizes",
            "5,2",
        ],
        vec!["susceptibility", "--data", p(&gt), "--metrics", "b0+b1"],
        vec![
            "clean",
            "--in",
            p(&gt),
            "--out",
            p(&gt),
            "--min-size",
            "1",
            "--connectivity",
            "A",
        ],
        vec![
            "clean",
            "--in",
            p(&gt),
            "--out",
            "x",
            "--min-size",
            "0",
            "--connectivity",
            "A",
        ],
        vec!["frobnicate"],
        vec![],
    ];
    for args in cases {
        let o = run(&args);
        assert_eq!(
            o.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    let _ = tmp;
}

#[test]
fn aggregate_request_explains_itself() {
    let (_tmp, gt, pred) = fixture();
    let o = run(&[
        "eval",
        "--pred",
        p(&pred),
        "--gt",
        p(&gt),
        "--connectivity",
        "A",
        "--metrics",
        "b0+b1",
    ]);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("per dimension"), "{err}");
}

#[test]
fn bad_worker_count_is_usage_error() {
    let (_tmp, gt, pred) = fixture();
    let o = bin()
        .env("TOPOCHECK_WORKERS", "0")
        .args([
            "eval",
            "--pred",
            p(&pred),
            "--gt",
            p(&gt),
            "--connectivity",
            "A",
        ])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn audit_tables() {
    let (tmp, gt, _) = fixture();
    let out = tmp.path().join("audit");
    let o = run(&[
        "audit",
        "--data",
        p(&gt),
        "--connectivity",
        "A",
        "--removal-sizes",
        "1,2,5",
        "--out",
        p(&out),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("audit_removal_A.csv"));
    assert_eq!(
        fs::read_to_string(out.join("removal_effect.csv")).unwrap(),
        stdout(&o)
    );
    assert_eq!(
        fs::read_to_string(out.join("connectivity_counts.csv")).unwrap(),
        golden("audit_counts.csv")
    );

    let mut totals = [[0usize; 2]; 2];
    for (_, rows) in GT {
        let m = BinaryMask::from_ascii(rows).unwrap();
        for (i, conn) in [ConnectivityPair::A, ConnectivityPair::D]
            .into_iter()
            .enumerate()
        {
            let l = label_components(&m, conn);
            totals[i][0] += l.count(Phase::Foreground);
            totals[i][1] += l.count(Phase::Background);
        }
    }
    let r: Value =
        serde_json::from_str(&fs::read_to_string(out.join("audit.json")).unwrap()).unwrap();
    assert_eq!(r["connectivity_counts"]["A"]["FG"], totals[0][0]);
    assert_eq!(r["connectivity_counts"]["A"]["BG"], totals[0][1]);
    assert_eq!(r["connectivity_counts"]["D"]["FG"], totals[1][0]);
    assert_eq!(r["connectivity_counts"]["D"]["BG"], totals[1][1]);
    assert_eq!(r["removal"]["rows"][0]["FG"], totals[0][0]);
    assert_eq!(r["metadata"]["removal_mode"], "simultaneous");
    assert_eq!(r["image_count"], 3);
}

#[test]
fn audit_manifest_with_missing_file() {
    let (tmp, _, _) = fixture();
    let manifest = tmp.path().join("set.json");
    fs::write(
        &manifest,
        r#"{"name":"fixture","dimensionality":2,"connectivity":"D","labels":["gt/a.png","gt/missing.png","gt/c.png"]}"#,
    )
    .unwrap();
    let out = tmp.path().join("audit");
    let o = run(&["audit", "--data", p(&manifest), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(1));
    let r: Value =
        serde_json::from_str(&fs::read_to_string(out.join("audit.json")).unwrap()).unwrap();
    assert_eq!(r["image_count"], 2);
    assert_eq!(r["removal"]["connectivity"], "D");
    assert_eq!(r["errors"][0]["name"], "missing.png");
}

#[test]
fn eval_from_manifest() {
    let (tmp, _, _) = fixture();
    let manifest = tmp.path().join("set.json");
    fs::write(
        &manifest,
        r#"{"name":"fixture","dimensionality":2,"connectivity":"A","labels":["gt/a.png","gt/b.png"],"predictions":["pred/a.png","pred/b.png"]}"#,
    )
    .unwrap();
    let o = run(&[
        "eval",
        "--data",
        p(&manifest),
        "--connectivity",
        "A",
        "--metrics",
        "dice,b0,b1,bm0,bm1,voi,are,ari",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    let gold: Vec<String> = golden("eval_A.csv").lines().map(str::to_string).collect();
    assert_eq!(lines[..3], gold[..3]);
}

#[test]
fn susceptibility_report() {
    let (tmp, gt, _) = fixture();
    let out = tmp.path().join("s.json");
    let o = run(&["susceptibility", "--data", p(&gt), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let r: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(
        r["metrics"],
        serde_json::json!(["B0_D_vs_A", "B1_D_vs_A", "VOI_D_vs_A", "ARE_D_vs_A"])
    );
    // a.png: the diagonal chain is one component under A and five under D
    assert_eq!(r["images"][0]["values"]["B0_D_vs_A"], 4.0);
    // b.png: the center dot touches nothing diagonally
    assert_eq!(r["images"][1]["values"]["B0_D_vs_A"], 0.0);
    assert_eq!(r["images"][1]["values"]["VOI_D_vs_A"], 0.0);
}

#[test]
fn rankcmp_table() {
    let fix = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let o = run(&[
        "rankcmp",
        "--scores-a",
        p(&fix.join("cremi_connectivity_D.csv")),
        "--scores-b",
        p(&fix.join("cremi_connectivity_A.csv")),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "statistic,DICE_D:DICE_A,B0_D:B0_A,B1_D:B1_A,BM0_D:BM0_A,BM1_D:BM1_A,VOI_D:VOI_A,ARE_D:ARE_A"
    );
    assert!(lines.next().unwrap().starts_with("spearman,-0.3714,"));
}

#[test]
fn rankcmp_unknown_pair_is_usage_error() {
    let fix = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let a = fix.join("cremi_connectivity_D.csv");
    let o = run(&[
        "rankcmp",
        "--scores-a",
        p(&a),
        "--scores-b",
        p(&a),
        "--pairs",
        "BM1_D:NOPE",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn clean_removes_small_components() {
    let (tmp, gt, _) = fixture();
    fs::write(gt.join("broken.png"), b"x").unwrap();
    let out = tmp.path().join("clean");
    let o = run(&[
        "clean",
        "--in",
        p(&gt),
        "--out",
        p(&out),
        "--min-size",
        "2",
        "--phase",
        "both",
        "--connectivity",
        "D",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("image,flipped_pixels\na.png,"));
    for (name, _) in GT {
        let m = topocheck::load_mask(&out.join(name), 0).unwrap();
        let l = label_components(&m, ConnectivityPair::D);
        assert!(l.components().iter().all(|c| c.size > 2), "{name}");
    }
    assert!(!out.join("broken.png").exists());
}
