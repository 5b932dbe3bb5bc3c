use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

fn lab(args: &[&str], out: &Path) -> i32 {
    let status = Command::new(env!("CARGO_BIN_EXE_exclusion-lab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs");
    status.status.code().expect("exit code")
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn col(rows: &[Vec<String>], i: usize) -> Vec<f64> {
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

fn binom(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Smallest stationary weight, by brute force over `{0..k}^N`.
fn min_stationary_mass(k: u64, n: u32, m: u64) -> f64 {
    let (mut total, mut smallest) = (0.0, f64::INFINITY);
    for mut code in 0..(k + 1).pow(n) {
        let (mut sum, mut w) = (0, 1.0);
        for _ in 0..n {
            let g = code % (k + 1);
            code /= k + 1;
            sum += g;
            w *= binom(k, g);
        }
        if sum == m {
            total += w;
            smallest = f64::min(smallest, w);
        }
    }
    smallest / total
}

#[test]
fn eigencheck_passes_and_spans_all_modes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        lab(
            &["eigencheck", "--k", "2", "--N", "3", "--m", "2"],
            dir.path()
        ),
        0
    );
    let (header, rows) = read_csv(&dir.path().join("eigencheck.csv"));
    assert_eq!(
        header,
        ["j", "lambda", "residual_particle", "residual_height"]
    );
    let js: Vec<String> = rows.iter().map(|r| r[0].clone()).collect();
    assert_eq!(js, ["0", "1", "2"]);
    for (j, row) in rows.iter().enumerate() {
        let lambda: f64 = row[1].parse().unwrap();
        let expected = 4.0 * (1.0 - (j as f64 * std::f64::consts::PI / 3.0).cos());
        assert!((lambda - expected).abs() < 1e-12);
        assert!(col(&rows, 2)[j] < 1e-9 && col(&rows, 3)[j] < 1e-9);
    }
    assert_eq!(manifest(dir.path())["passed"], Value::Bool(true));
}

#[test]
fn corrupted_generator_is_caught() {
    let dir = TempDir::new().unwrap();
    let code = lab(
        &[
            "eigencheck",
            "--k",
            "2",
            "--N",
            "3",
            "--m",
            "2",
            "--set",
            "corrupt_generator=true",
        ],
        dir.path(),
    );
    assert_eq!(code, 1);
    assert_eq!(manifest(dir.path())["passed"], Value::Bool(false));
}

#[test]
fn budget_and_usage_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    assert_eq!(
        lab(
            &[
                "eigencheck",
                "--k",
                "3",
                "--N",
                "8",
                "--set",
                "max_states=100"
            ],
            p
        ),
        2
    );
    assert_eq!(lab(&["nonsense"], p), 2);
    assert_eq!(lab(&["tvcurve", "--set", "colour=red"], p), 2);
    assert_eq!(lab(&["cutoff-scan", "--set", "n_list=8,4"], p), 2);
    assert_eq!(
        lab(
            &["cutoff-scan", "--set", "n_list=64", "--set", "mode=exact"],
            p
        ),
        2
    );
    assert_eq!(
        lab(&["areatrace", "--set", "times=0,1", "--runs", "1"], p),
        2
    );
    // a replica needs far more rings than allowed
    assert_eq!(
        lab(
            &[
                "cutoff-scan",
                "--set",
                "n_list=32",
                "--runs",
                "20",
                "--set",
                "max_events=1000"
            ],
            p
        ),
        2
    );
}

#[test]
fn tvcurve_rows_meet_the_exact_identities() {
    let dir = TempDir::new().unwrap();
    let args = [
        "tvcurve",
        "--k",
        "2",
        "--N",
        "4",
        "--m",
        "3",
        "--eps",
        "0.25",
        "--set",
        "time_grid=0:0.25:8",
    ];
    assert_eq!(lab(&args, dir.path()), 0);
    let (header, rows) = read_csv(&dir.path().join("tvcurve.csv"));
    assert_eq!(header[..2], ["t", "d_exact"]);
    let d = col(&rows, 1);
    assert!((d[0] - (1.0 - min_stationary_mass(2, 4, 3))).abs() < 1e-12);
    assert!(d.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    let t_mix = manifest(dir.path())["details"]["t_mix"].as_f64().unwrap();
    assert!(t_mix < 8.0, "grid should pass t_mix");
    assert!(*d.last().unwrap() <= 0.25);
    // the curve crosses eps between the grid points around t_mix
    for (t, dt) in col(&rows, 0).iter().zip(&d) {
        if *t < t_mix - 1e-6 {
            assert!(*dt > 0.25);
        } else if *t > t_mix + 1e-6 {
            assert!(*dt <= 0.25);
        }
    }
}

#[test]
fn reversed_inequalities_fail_every_checking_command() {
    let cases: [&[&str]; 6] = [
        &[
            "tvcurve",
            "--k",
            "1",
            "--N",
            "4",
            "--m",
            "2",
            "--set",
            "times=0.5,1",
        ],
        &[
            "censorcheck",
            "--k",
            "1",
            "--N",
            "4",
            "--set",
            "scheme=0:1;0.5:all",
            "--set",
            "times=0.3,0.8",
        ],
        &["fkgcheck", "--k", "2", "--N", "2", "--set", "pairs=5"],
        &["heatcheck", "--k", "1", "--N", "3", "--set", "times=0.5"],
        &[
            "areatrace",
            "--k",
            "1",
            "--N",
            "6",
            "--m",
            "3",
            "--runs",
            "50",
            "--set",
            "times=0,2,4",
        ],
        &["cutoff-scan", "--k", "1", "--set", "n_list=4,5"],
    ];
    for args in cases {
        let pass = TempDir::new().unwrap();
        assert_eq!(lab(args, pass.path()), 0, "{args:?}");
        let fail = TempDir::new().unwrap();
        let mut reversed = args.to_vec();
        reversed.extend(["--set", "reverse_inequality=true"]);
        assert_eq!(lab(&reversed, fail.path()), 1, "{reversed:?}");
    }
}

#[test]
fn empty_grids_are_no_ops() {
    for args in [
        &["tvcurve"][..],
        &["cutoff-scan"],
        &["censorcheck"],
        &["heatcheck"],
        &["areatrace"],
        &["fkgcheck", "--set", "pairs=0"],
    ] {
        let dir = TempDir::new().unwrap();
        let out = dir.path().join("out");
        assert_eq!(lab(args, &out), 0, "{args:?}");
        assert!(!out.exists(), "{args:?} wrote files");
    }
}

#[test]
fn censorcheck_three_phase_orders_the_distances() {
    let dir = TempDir::new().unwrap();
    let args = [
        "censorcheck",
        "--k",
        "2",
        "--N",
        "3",
        "--set",
        "delta=0.5",
        "--set",
        "time_grid=0:0.05:0.6",
    ];
    assert_eq!(lab(&args, dir.path()), 0);
    let (_, rows) = read_csv(&dir.path().join("censorcheck.csv"));
    let (free, cens) = (col(&rows, 1), col(&rows, 2));
    assert!(free.iter().zip(&cens).all(|(f, c)| *f <= c + 1e-12));
    // R = 2 censors the middle bond on the first phase
    assert!(manifest(dir.path())["details"]["scheme"]
        .as_str()
        .unwrap()
        .contains("-{2}"));
}

#[test]
fn heatcheck_exact_matches_heat_flow() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        lab(
            &[
                "heatcheck",
                "--k",
                "2",
                "--N",
                "3",
                "--set",
                "time_grid=0:0.5:2"
            ],
            dir.path()
        ),
        0
    );
    let (_, rows) = read_csv(&dir.path().join("heatcheck.csv"));
    assert_eq!(rows.len(), 5 * 7 * 4);
    for r in &rows {
        let (mean, heat): (f64, f64) = (r[3].parse().unwrap(), r[5].parse().unwrap());
        assert!((mean - heat).abs() < 1e-9);
    }
}

#[test]
fn cutoff_scan_bounds_every_estimate() {
    let dir = TempDir::new().unwrap();
    let args = [
        "cutoff-scan",
        "--k",
        "2",
        "--runs",
        "400",
        "--set",
        "n_list=4,6,12",
    ];
    assert_eq!(lab(&args, dir.path()), 0);
    let (header, rows) = read_csv(&dir.path().join("cutoff.csv"));
    let at = |name: &str| header.iter().position(|h| h == name).unwrap();
    assert_eq!(
        rows.iter()
            .map(|r| r[at("mode")].as_str())
            .collect::<Vec<_>>(),
        ["exact", "exact", "coupling"]
    );
    for r in &rows {
        for eps in ["0.75", "0.5", "0.25"] {
            let t: f64 = r[at(&format!("t_mix_{eps}"))].parse().unwrap();
            let lb: f64 = r[at(&format!("lower_bound_{eps}"))].parse().unwrap();
            assert!(lb <= t);
        }
        let t25: f64 = r[at("t_mix_0.25")].parse().unwrap();
        let t75: f64 = r[at("t_mix_0.75")].parse().unwrap();
        assert!(t75 <= t25);
    }
    assert!(dir.path().join("survival_N12.csv").exists());
}

#[test]
fn reruns_are_byte_identical_and_manifests_reproduce() {
    let cases: [(&[&str], &str); 3] = [
        (
            &[
                "cutoff-scan",
                "--k",
                "2",
                "--runs",
                "300",
                "--seed",
                "9",
                "--set",
                "n_list=10,12",
            ],
            "survival_N12.csv",
        ),
        (
            &[
                "heatcheck",
                "--k",
                "2",
                "--N",
                "6",
                "--runs",
                "200",
                "--set",
                "mode=coupling",
                "--set",
                "times=1,4",
            ],
            "heatcheck.csv",
        ),
        (
            &[
                "areatrace",
                "--k",
                "2",
                "--N",
                "8",
                "--runs",
                "100",
                "--set",
                "time_grid=0:5:40",
            ],
            "area_mean.csv",
        ),
    ];
    for (args, file) in cases {
        let a = TempDir::new().unwrap();
        let b = TempDir::new().unwrap();
        assert_eq!(lab(args, a.path()), 0, "{args:?}");
        assert_eq!(lab(args, b.path()), 0, "{args:?}");
        let first = fs::read(a.path().join(file)).unwrap();
        assert_eq!(first, fs::read(b.path().join(file)).unwrap(), "{args:?}");

        // replay from the manifest alone
        let text = manifest(a.path())["config_text"]
            .as_str()
            .unwrap()
            .to_string();
        let cfg = a.path().join("replay.cfg");
        fs::write(&cfg, text).unwrap();
        let c = TempDir::new().unwrap();
        assert_eq!(
            lab(&[args[0], "--config", cfg.to_str().unwrap()], c.path()),
            0
        );
        assert_eq!(
            first,
            fs::read(c.path().join(file)).unwrap(),
            "replay of {args:?}"
        );
    }
}

#[test]
fn config_file_values_yield_to_flags() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# small case\nk = 3\nN = 5\nm = 4\n").unwrap();
    let out = dir.path().join("out");
    assert_eq!(
        lab(
            &["eigencheck", "--config", cfg.to_str().unwrap(), "--N", "4"],
            &out
        ),
        0
    );
    let m = manifest(&out);
    assert_eq!(m["config"]["k"], "3");
    assert_eq!(m["config"]["N"], "4");
    assert_eq!(m["details"]["params"], serde_json::json!([3, 4, 4]));
    let (_, rows) = read_csv(&out.join("eigencheck.csv"));
    assert_eq!(rows.len(), 4);
}

#[test]
fn cutoff_scan_handles_unenumerable_sizes() {
    let dir = TempDir::new().unwrap();
    let args = [
        "cutoff-scan",
        "--k",
        "2",
        "--runs",
        "8",
        "--set",
        "n_list=128",
        "--set",
        "max_events=100000000",
    ];
    assert_eq!(lab(&args, dir.path()), 0);
    let (_, rows) = read_csv(&dir.path().join("cutoff.csv"));
    assert_eq!(rows[0][3], "coupling");
}
