use std::f64::consts::SQRT_2;
use std::fs;
use std::process::{Command, Output};

use birkhoff_heinz::cli::CONSTANTS_CSV_HEADER;
use birkhoff_heinz::constants::{witness_value, ConstantKind};
use birkhoff_heinz::norm::norm_from_alias;
use birkhoff_heinz::norm_spec::parse_norm_spec;

const COARSE: [&str; 4] = ["--grid-theta", "256", "--grid-psi", "128"];

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_birkhoff-heinz"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn coarse(args: &[&str]) -> Output {
    let mut all = args.to_vec();
    all.extend_from_slice(&COARSE);
    bin(&all)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn constants_euclid_row() {
    let o = coarse(&["constants", "--norm", "euclid", "--nu", "0.5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some(CONSTANTS_CSV_HEADER));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[..2], &["H", "0.5"]);
    let v: f64 = row[2].parse().unwrap();
    assert!((v - SQRT_2).abs() < 1e-3);
    assert!(stderr(&o).is_empty());
}

#[test]
fn constants_round_trip_is_bit_identical() {
    let o = coarse(&[
        "constants",
        "--norm",
        "hexagon",
        "--nu",
        "0.25,0.5",
        "--kinds",
        "H,J_B,A2_B,delta_B,rho_B,mu_B,J,S,A2",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let norm = norm_from_alias("hexagon").unwrap().unwrap();
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 10);
    for line in rows {
        let f: Vec<&str> = line.split(',').collect();
        let nu = if f[1].is_empty() {
            0.5
        } else {
            f[1].parse().unwrap()
        };
        let kind = ConstantKind::from_tag(f[0], nu).unwrap().unwrap();
        let value: f64 = f[2].parse().unwrap();
        let x = norm.sphere_point(f[3].parse().unwrap()).coords;
        let y = norm.sphere_point(f[4].parse().unwrap()).coords;
        let again = witness_value(&norm, kind, x, y).unwrap();
        assert_eq!(again.to_bits(), value.to_bits(), "{line}");
    }
}

#[test]
fn constants_json_and_file_norm() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("hexagon.txt");
    fs::write(
        &spec,
        "kind=polygon\nvertices=[(1,0),(1,1),(0,1),(-1,0),(-1,-1),(0,-1)]\n",
    )
    .unwrap();
    let out = dir.path().join("h.json");
    let o = coarse(&[
        "constants",
        "--norm",
        spec.to_str().unwrap(),
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let rows: serde_json::Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    let h = rows[0]["value"].as_f64().unwrap();
    assert!((h - 1.5).abs() < 1e-3, "{h}");
    assert_eq!(rows[0]["kind"], "H");
}

#[test]
fn sweep_is_flat_on_euclid_and_minimal_at_half_on_l4() {
    let o = coarse(&["sweep", "--norm", "euclid"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("nu,H,theta_x,theta_y\n"));
    let rows: Vec<(f64, f64)> = out
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<f64> = l.split(',').map(|v| v.parse().unwrap()).collect();
            (f[0], f[1])
        })
        .collect();
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|(_, h)| (h - SQRT_2).abs() < 1e-3));

    let o = coarse(&["sweep", "--norm", "lp:4", "--nu-steps", "5"]);
    let rows: Vec<f64> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(rows.len(), 5);
    let min = rows.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(rows[2] <= min + 1e-3, "{rows:?}");
}

#[test]
fn verify_writes_report_and_exits_zero() {
    let o = bin(&["verify", "--norm", "linf", "--nu", "0.5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let checks = report["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 10);
    let chain = checks.iter().find(|c| c["name"] == "chain").unwrap();
    assert!((chain["lhs"].as_f64().unwrap() - 2.0).abs() < 1e-3);
    assert!((chain["rhs"].as_f64().unwrap() - 2.0).abs() < 1e-3);
}

#[test]
fn radon_classifies_hexagon() {
    let o = coarse(&["radon", "--norm", "hexagon"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "hexagon");
    assert_eq!(row[2], "true");

    let o = coarse(&["radon", "--norm", "lp:4"]);
    assert!(stdout(&o).lines().nth(1).unwrap().contains(",false,"));
}

#[test]
fn sphere_svg_is_deterministic() {
    let a = bin(&["sphere", "--norm", "linf"]);
    let b = bin(&["sphere", "--norm", "linf"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let svg = stdout(&a);
    assert!(svg.starts_with("<svg"));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert!(svg.contains("class=\"sum\"") && svg.contains("class=\"diff\""));
    // l∞ sphere reaches the corner (1,1), drawn at pixel (420, 60)
    assert!(svg.contains("420.0000,60.0000"));
}

#[test]
fn hexagon_family_is_seeded() {
    let a = coarse(&["hexagon-family", "--count", "2", "--seed", "3"]);
    let b = coarse(&["hexagon-family", "--count", "2", "--seed", "3"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    for line in stdout(&a).lines().skip(1) {
        let h: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!((h - 1.5).abs() < 1e-3);
    }
}

#[test]
fn exit_code_two_on_bad_input() {
    for args in [
        &["constants", "--norm", "kind=pnorm\np=abc"][..],
        &["constants", "--norm", "nonsense"],
        &["constants", "--nu", "1.5"],
        &["constants", "--kinds", "Q"],
        &["constants", "--grid-theta", "100"],
        &["sweep", "--nu-steps", "1"],
        &["frobnicate"],
    ] {
        let o = bin(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(o.stdout.is_empty());
        assert!(!stderr(&o).is_empty());
    }
    let o = bin(&["constants", "--norm", "kind=pnorm\np=abc"]);
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn exit_code_three_when_grid_is_too_coarse() {
    let o = coarse(&["constants", "--norm", "linf"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("grid too coarse"), "{}", stderr(&o));
}

#[test]
fn exit_code_four_on_unwritable_path() {
    let o = coarse(&[
        "sphere",
        "--norm",
        "euclid",
        "--out",
        "/nonexistent-dir/figure.svg",
    ]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("/nonexistent-dir/figure.svg"));
}

#[test]
fn inline_norm_matches_alias() {
    let a = coarse(&["constants", "--norm", "kind=pnorm p=4"]);
    let b = coarse(&["constants", "--norm", "lp:4"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(parse_norm_spec("kind=pnorm p=4").is_ok());
}
