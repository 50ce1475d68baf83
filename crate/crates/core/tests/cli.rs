use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use bs_lab::analytic::{closed_form_call, OptionContract};

fn bs_lab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bs-lab"))
        .args(args)
        .current_dir(dir)
        .env_remove("BS_LAB_CONFIG")
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
fn help_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let o = bs_lab(dir.path(), &["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("implied-vol"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["surface", "--bogus", "1"][..],
        &["surface", "--n-space", "ten"],
        &["price", "--sigma", "-0.2"],
        &["price", "--strike", "0"],
        &["frobnicate"],
        &["implied-vol"],
        &["surface", "--method", "mc"],
        &["surface", "--format", "parquet"],
    ] {
        let o = bs_lab(dir.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn explicit_stability_violation_exits_three_and_writes_nothing() {
    // dx = ln(5e6)/200 ~ 0.0771, so delta = (0.02/5)/dx^2 ~ 0.67 > 1/2
    let dir = tempfile::tempdir().unwrap();
    let o = bs_lab(
        dir.path(),
        &["surface", "--method", "explicit", "--n-time", "5", "--output", "s.csv"],
    );
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("increase M"), "{}", stderr(&o));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);

    // n_time = 10 stays inside the bound
    let o = bs_lab(
        dir.path(),
        &["surface", "--method", "explicit", "--n-time", "10", "--output", "s.csv"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn domain_errors_exit_four() {
    let dir = tempfile::tempdir().unwrap();
    // below the no-arbitrage lower bound: no volatility reproduces it
    let o = bs_lab(dir.path(), &["implied-vol", "--target-price", "1.0", "--spot", "150"]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
    // outside the surface
    let o = bs_lab(dir.path(), &["price", "--spot", "1000", "--n-time", "20"]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}

#[test]
fn surface_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let o = bs_lab(dir.path(), &["surface", "--n-space", "40", "--n-time", "30"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "surface.csv");
    let text = fs::read_to_string(dir.path().join("surface.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 30 + 2);
    assert!(lines[0].starts_with("t\\S,"));
    assert!(lines.iter().all(|l| l.split(',').count() == 40 + 2));
}

#[test]
fn closed_form_price_round_trips_through_implied_vol() {
    let dir = tempfile::tempdir().unwrap();
    let o = bs_lab(dir.path(), &["price", "--method", "closed-form"]);
    assert_eq!(o.status.code(), Some(0));
    let printed = stdout(&o).trim().to_string();
    let p: f64 = printed.parse().unwrap();
    assert!((p - 10.450583572185565).abs() < 1e-9);

    let o = bs_lab(dir.path(), &["implied-vol", "--target-price", &printed]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let sigma: f64 = stdout(&o).trim().parse().unwrap();
    assert!((sigma - 0.2).abs() < 1e-6);
}

#[test]
fn fd_and_mc_prices() {
    let dir = tempfile::tempdir().unwrap();
    let oracle = closed_form_call(100.0, 0.0, &OptionContract::new(100.0, 1.0).unwrap(), 0.05, 0.2).unwrap();
    let o = bs_lab(dir.path(), &["price"]);
    let fd: f64 = stdout(&o).trim().parse().unwrap();
    assert!((fd - oracle).abs() < 5e-3 * oracle);

    let o = bs_lab(dir.path(), &["price", "--method", "mc", "--seed", "3"]);
    let fields: Vec<f64> = stdout(&o).split_whitespace().map(|v| v.parse().unwrap()).collect();
    assert_eq!(fields.len(), 2);
    assert!((fields[0] - oracle).abs() < 3.0 * fields[1]);
}

#[test]
fn gbm_writes_one_file_per_sigma() {
    let dir = tempfile::tempdir().unwrap();
    let o = bs_lab(
        dir.path(),
        &["gbm", "--sigmas", "0.8,1.2", "--n-paths", "3", "--output", "paths.csv"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(
        stdout(&o).lines().collect::<Vec<_>>(),
        ["paths_sigma0.80.csv", "paths_sigma1.20.csv"]
    );
    let text = fs::read_to_string(dir.path().join("paths_sigma0.80.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,path_0,path_1,path_2");
    assert_eq!(lines.len(), 52);
}

#[test]
fn every_command_is_deterministic() {
    let runs: [&[&str]; 5] = [
        &["gbm", "--n-paths", "4", "--output", "out.csv"],
        &["surface", "--n-time", "200", "--output", "out.csv"],
        &["price", "--method", "mc", "--n-paths", "20000", "--output", "out.csv"],
        &["price", "--method", "explicit", "--output", "out.csv"],
        &["implied-vol", "--target-price", "12.5", "--output", "out.csv"],
    ];
    for args in runs {
        let mut snapshots = Vec::new();
        for _ in 0..2 {
            let dir = tempfile::tempdir().unwrap();
            let o = bs_lab(dir.path(), args);
            assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
            let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir.path())
                .unwrap()
                .map(|e| {
                    let e = e.unwrap();
                    (e.file_name().into_string().unwrap(), fs::read(e.path()).unwrap())
                })
                .collect();
            files.sort();
            assert!(!files.is_empty());
            snapshots.push((files, o.stdout));
        }
        assert_eq!(snapshots[0], snapshots[1], "{args:?}");
    }
}

#[test]
fn config_file_and_env_layering() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("lab.cfg");
    fs::write(&cfg, "# pricing point\nmethod = closed-form\nspot=120\nsigma = 0.3\n").unwrap();
    let want = |spot: f64, sigma: f64| {
        closed_form_call(spot, 0.0, &OptionContract::new(100.0, 1.0).unwrap(), 0.05, sigma).unwrap()
    };
    let price = |o: &Output| -> f64 { stdout(o).trim().parse().unwrap() };

    let o = bs_lab(dir.path(), &["price", "--config", "lab.cfg"]);
    assert!((price(&o) - want(120.0, 0.3)).abs() < 1e-9);

    // flags beat the file
    let o = bs_lab(dir.path(), &["price", "--config", "lab.cfg", "--sigma", "0.2"]);
    assert!((price(&o) - want(120.0, 0.2)).abs() < 1e-9);

    // the environment variable points at a file too
    let o = Command::new(env!("CARGO_BIN_EXE_bs-lab"))
        .args(["price", "--spot", "90"])
        .current_dir(dir.path())
        .env("BS_LAB_CONFIG", &cfg)
        .output()
        .unwrap();
    assert!((price(&o) - want(90.0, 0.3)).abs() < 1e-9, "{}", stderr(&o));

    fs::write(&cfg, "nonsense = 1\n").unwrap();
    let o = bs_lab(dir.path(), &["price", "--config", "lab.cfg"]);
    assert_eq!(o.status.code(), Some(2));
}
