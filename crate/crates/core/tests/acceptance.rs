//! Acceptance suite. Runs without the libtest harness so that each criterion
//! prints exactly one PASS/FAIL line; exits nonzero if any criterion fails.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::process::ExitCode;
use std::time::Instant;

use birkhoff_heinz::constants::{heinz_mean, ConstantKind, Estimator, GridParams, NonSquareClass};
use birkhoff_heinz::norm::{zoo, Norm};
use birkhoff_heinz::verify::{hexagon_family_check, random_symmetric_polygon, run_checks, CATALOG};
use birkhoff_heinz::{defect, minimize_lambda, Point2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-3;

struct Outcome {
    passed: bool,
    detail: String,
    flags: Vec<String>,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
            flags: Vec::new(),
        }
    }
}

type Criterion = fn() -> Outcome;

fn grid() -> GridParams {
    GridParams::default()
}

fn heinz(est: &Estimator, nu: f64) -> f64 {
    est.estimate(ConstantKind::heinz(nu).unwrap()).unwrap().value
}

fn hilbert_value() -> Outcome {
    let norm = Norm::euclidean();
    let est = Estimator::new(&norm, grid()).unwrap();
    let vals: Vec<(f64, f64)> = [0.0, 0.25, 0.5].iter().map(|&nu| (nu, heinz(&est, nu))).collect();
    let ok = vals.iter().all(|&(_, h)| (h - SQRT_2).abs() <= TOL);
    Outcome::new(ok, format!("H = {vals:?}, target √2"))
}

fn linf_value() -> Outcome {
    let norm = Norm::linf();
    let est = Estimator::new(&norm, grid()).unwrap();
    let vals: Vec<(f64, f64)> = [0.0, 0.5].iter().map(|&nu| (nu, heinz(&est, nu))).collect();
    let ok = vals.iter().all(|&(_, h)| (h - 2.0).abs() <= TOL);
    Outcome::new(ok, format!("H = {vals:?}, target 2"))
}

fn radon_value() -> Outcome {
    let norm = Norm::linf_l1();
    let est = Estimator::new(&norm, grid()).unwrap();
    let vals: Vec<(f64, f64)> = [0.0, 0.25, 0.5].iter().map(|&nu| (nu, heinz(&est, nu))).collect();
    let rd = est.radon_defect().unwrap();
    let ok = vals.iter().all(|&(_, h)| (h - 1.5).abs() <= TOL) && rd <= 1e-6;
    Outcome::new(ok, format!("H = {vals:?}, radon defect = {rd:e}"))
}

fn hexagon_equality() -> Outcome {
    let base = heinz(&Estimator::new(&Norm::hexagon(), grid()).unwrap(), 0.5);
    let trials = hexagon_family_check(5, 2024, &grid()).unwrap();
    let mut hs = vec![base];
    hs.extend(trials.iter().map(|t| t.h));
    let ok = hs.iter().all(|h| (h - 1.5).abs() <= TOL);
    let mut out = Outcome::new(ok, format!("H_1/2 = {hs:?}"));
    for t in trials.iter().filter(|t| (t.h - 1.5).abs() > TOL) {
        out.flags.push(format!("off-target image:\n{}", t.norm_spec));
    }
    out
}

fn non_hilbert_sqrt2() -> Outcome {
    let norm = Norm::sqrt2_max();
    let x = Point2::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2);
    let y = Point2::new(-FRAC_1_SQRT_2, FRAC_1_SQRT_2);
    let d = defect(&norm, x, y).unwrap();
    let est = Estimator::new(&norm, grid()).unwrap();
    let vals: Vec<(f64, f64)> = [0.0, 0.25, 0.5].iter().map(|&nu| (nu, heinz(&est, nu))).collect();
    let ok = d <= 1e-9 && vals.iter().all(|&(_, h)| h >= SQRT_2 - TOL);
    let mut out = Outcome::new(ok, format!("H = {vals:?}, witness defect = {d:e}"));
    for &(nu, h) in &vals {
        if (h - SQRT_2).abs() > TOL {
            out.flags
                .push(format!("H_{nu} = {h} differs from the asserted √2"));
        }
    }
    out
}

fn lp_lower_bound() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for p in [4.0, 10.0] {
        let norm = Norm::p_norm(p).unwrap();
        let est = Estimator::new(&norm, grid()).unwrap();
        let h = heinz(&est, 0.5);
        let bound = 2f64.powf(1.0 - 1.0 / p);
        let class = est.classify_nonsquare(0.5, 1e-2).unwrap();
        ok &= h >= bound - TOL && class == NonSquareClass::UniformlyNonSquare;
        parts.push(format!("l{p}: H={h:.6} bound={bound:.6} {class:?}"));
    }
    Outcome::new(ok, parts.join("; "))
}

fn inequality_suite() -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    for norm in zoo() {
        let report = run_checks(&norm, &[0.0, 0.25, 0.5], &grid()).unwrap();
        count += report.checks.len();
        for c in report.failures() {
            failures.push(format!(
                "{} {} nu={} margin={:e}",
                norm.label(),
                c.name,
                c.nu,
                c.margin
            ));
        }
    }
    let mut out = Outcome::new(
        failures.is_empty(),
        format!("{count} checks, {} failed", failures.len()),
    );
    out.flags = failures;
    out
}

fn random_polygons() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = Vec::new();
    for i in 0..50 {
        let norm = random_symmetric_polygon(&mut rng, 8, 16);
        let report = run_checks(&norm, &[0.25, 0.5], &grid()).unwrap();
        let bad: Vec<_> = report
            .checks
            .iter()
            .filter(|c| CATALOG[..8].contains(&c.name.as_str()) && !c.passed)
            .collect();
        if !bad.is_empty() {
            let h = report.constant(ConstantKind::HeinzB(0.5)).unwrap();
            let names: Vec<_> = bad.iter().map(|c| format!("{}@{}", c.name, c.nu)).collect();
            failures.push(format!(
                "polygon #{i} failed {names:?}; H_1/2 witness θx={} θy={}\n{}",
                h.witness.x.angle,
                h.witness.y.angle,
                norm.to_spec_string()
            ));
        }
    }
    let mut out = Outcome::new(
        failures.is_empty(),
        format!("50 polygons, {} failed", failures.len()),
    );
    out.flags = failures;
    out
}

fn oracle_equivalence() -> Outcome {
    let norms = zoo();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let norm = &norms[rng.gen_range(0..norms.len())];
        let x = norm
            .sphere_point(rng.gen_range(0.0..std::f64::consts::TAU))
            .coords
            * rng.gen_range(0.5..1.5);
        let y = norm
            .sphere_point(rng.gen_range(0.0..std::f64::consts::TAU))
            .coords
            * rng.gen_range(0.5..1.5);
        let got = minimize_lambda(norm, x, y).unwrap();
        let r = 2.0 * norm.evaluate(x) / norm.evaluate(y);
        let steps = (2.0 * r / 1e-5).ceil() as usize;
        let grid_min = (0..=steps)
            .map(|k| norm.evaluate(x + y * (-r + k as f64 * 1e-5)))
            .fold(norm.evaluate(x), f64::min);
        worst = worst.max((got.value - grid_min).abs());
    }
    Outcome::new(worst <= 1e-4, format!("500 triples, max |Δ| = {worst:e}"))
}

fn scalar_chain() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut violations = 0;
    for _ in 0..1000 {
        let a: f64 = rng.gen_range(1e-3..10.0);
        let b: f64 = rng.gen_range(1e-3..10.0);
        let nu: f64 = rng.gen_range(0.0..=1.0);
        let h = heinz_mean(a, b, nu).unwrap();
        let g = (a * b).sqrt();
        let ok = a.min(b) <= g + 1e-12 && g <= h + 1e-12 && h <= 0.5 * (a + b) + 1e-12;
        violations += usize::from(!ok);
    }
    Outcome::new(violations == 0, format!("1000 triples, {violations} violations"))
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 10] = [
        ("Hilbert value √2", hilbert_value),
        ("l∞ value 2", linf_value),
        ("Radon l∞-l1 value 3/2", radon_value),
        ("affine hexagons give 3/2", hexagon_equality),
        ("non-Hilbert √2 norm", non_hilbert_sqrt2),
        ("lp lower bound and uniform non-squareness", lp_lower_bound),
        ("inequality catalog on the zoo", inequality_suite),
        ("random polygon checks 1-8", random_polygons),
        ("minimize_lambda vs λ-grid oracle", oracle_equivalence),
        ("scalar Heinz chain", scalar_chain),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let status = if out.passed { "PASS" } else { "FAIL" };
        println!(
            "{status} [{}] {name}: {} ({:.1}s)",
            i + 1,
            out.detail,
            start.elapsed().as_secs_f64()
        );
        for f in &out.flags {
            println!("    FLAG {f}");
        }
        all &= out.passed;
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
