//! Numerical Birkhoff orthogonality.
//!
//! `x ⊥_B y` holds when `λ = 0` minimizes the convex map `λ ↦ ‖x + λy‖`. The
//! minimum is found by golden-section search, which is exact enough on convex
//! functions and needs no derivatives (polygonal norms have kinks).
//!
//! For a fixed unit `x` the set of companion directions `y` with `x ⊥_B y` is
//! a closed interval of angles modulo π. [`companion_arcs`] locates it by a
//! scan followed by bisection on the arc boundaries.

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::geometry::Point2;
use crate::norm::{Norm, SpherePoint};

/// Default threshold on the defect for `is_orthogonal`.
pub const DEFAULT_ORTHO_TOL: f64 = 1e-9;
/// Defect threshold for pairs admitted into constrained searches.
pub const DEFAULT_ADMIT_TOL: f64 = 1e-11;
/// Final width of the λ bracket.
pub const LAMBDA_TOL: f64 = 1e-12;
pub const MAX_GOLDEN_ITERATIONS: usize = 200;
/// Width to which companion-arc boundaries are bisected.
pub const ARC_BOUNDARY_WIDTH: f64 = 1e-10;
pub const MIN_SCAN_COUNT: usize = 64;
pub const MAX_SCAN_COUNT: usize = 4096;

/// Arc boundaries are bisected against `admit_tol` scaled by this factor so
/// that endpoints stay admitted when `y` is rebuilt as a sphere point.
const BOUNDARY_HEADROOM: f64 = 0.99;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BirkhoffError {
    #[error("degenerate direction: ‖{which}‖ = 0")]
    DegenerateDirection { which: &'static str },
    #[error("no Birkhoff companion found for θ = {theta} with {scan_count} scan samples")]
    NoCompanionFound { theta: f64, scan_count: usize },
    #[error("scan count {0} is below the minimum of {MIN_SCAN_COUNT}")]
    ScanTooCoarse(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MinimizeResult {
    pub lambda_star: f64,
    pub value: f64,
    pub bracket_width: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OrthoPair {
    pub x: SpherePoint,
    pub y: SpherePoint,
    pub defect: f64,
}

/// Closed interval `[psi_lo, psi_hi]` of companion angles for one `x`.
///
/// `psi_lo` lies in `[0, π)`; `psi_hi` may exceed π when the arc wraps.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CompanionArc {
    pub psi_lo: f64,
    pub psi_hi: f64,
    pub boundary_tolerance: f64,
}

impl CompanionArc {
    pub fn width(&self) -> f64 {
        self.psi_hi - self.psi_lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.psi_lo + self.psi_hi)
    }

    /// Whether `psi` lies in the arc modulo π.
    pub fn contains(&self, psi: f64) -> bool {
        let shifted = self.psi_lo + (psi - self.psi_lo).rem_euclid(PI);
        shifted <= self.psi_hi
    }
}

/// Golden-section minimization of `f` on `[lo, hi]`. Returns `(argmin, min,
/// final width)` over all evaluated points.
pub(crate) fn golden_section<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    max_iter: usize,
) -> (f64, f64, f64) {
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    let (mut best_t, mut best) = if fc <= fd { (c, fc) } else { (d, fd) };
    let mut iter = 0;
    while hi - lo > tol && iter < max_iter {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c);
            if fc < best {
                (best_t, best) = (c, fc);
            }
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d);
            if fd < best {
                (best_t, best) = (d, fd);
            }
        }
        iter += 1;
    }
    (best_t, best, hi - lo)
}

/// Minimizes `λ ↦ ‖x + λy‖` over `[−2‖x‖/‖y‖, 2‖x‖/‖y‖]`.
///
/// Outside that bracket `‖x + λy‖ ≥ |λ|‖y‖ − ‖x‖ > ‖x‖`, so the global
/// minimizer is inside. `λ = 0` is always evaluated, so `value ≤ ‖x‖`.
pub fn minimize_lambda(norm: &Norm, x: Point2, y: Point2) -> Result<MinimizeResult, BirkhoffError> {
    let ny = norm.evaluate(y);
    if ny == 0.0 {
        return Err(BirkhoffError::DegenerateDirection { which: "y" });
    }
    let nx = norm.evaluate(x);
    let r = 2.0 * nx / ny;
    let (mut lambda_star, mut value, bracket_width) = golden_section(
        |t| norm.evaluate(x + y * t),
        -r,
        r,
        LAMBDA_TOL,
        MAX_GOLDEN_ITERATIONS,
    );
    if nx <= value {
        lambda_star = 0.0;
        value = nx;
    }
    Ok(MinimizeResult {
        lambda_star,
        value,
        bracket_width,
    })
}

/// `‖x‖ − min_λ ‖x + λy‖ ≥ 0`; zero exactly when `x ⊥_B y`.
pub fn defect(norm: &Norm, x: Point2, y: Point2) -> Result<f64, BirkhoffError> {
    let nx = norm.evaluate(x);
    if nx == 0.0 {
        return Err(BirkhoffError::DegenerateDirection { which: "x" });
    }
    let m = minimize_lambda(norm, x, y)?;
    Ok((nx - m.value).max(0.0))
}

pub fn is_orthogonal(norm: &Norm, x: Point2, y: Point2, tol: f64) -> Result<bool, BirkhoffError> {
    Ok(defect(norm, x, y)? <= tol)
}

/// Tuning for [`CompanionSolver`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CompanionSettings {
    pub scan_count: usize,
    /// Samples with defect at or below this seed an arc.
    pub scan_tol: f64,
    /// Arc boundaries are bisected on this threshold.
    pub admit_tol: f64,
}

impl Default for CompanionSettings {
    fn default() -> Self {
        Self {
            scan_count: 512,
            scan_tol: DEFAULT_ORTHO_TOL,
            admit_tol: DEFAULT_ADMIT_TOL,
        }
    }
}

/// Finds companion arcs of sphere points for one norm.
pub struct CompanionSolver<'a> {
    norm: &'a Norm,
    settings: CompanionSettings,
}

impl<'a> CompanionSolver<'a> {
    pub fn new(norm: &'a Norm, settings: CompanionSettings) -> Self {
        Self { norm, settings }
    }

    pub fn settings(&self) -> &CompanionSettings {
        &self.settings
    }

    /// Defect of `x` against the direction at angle `psi`. Scale of `y` is
    /// irrelevant, so the raw Euclidean direction is used.
    #[inline]
    fn defect_at(&self, x: Point2, psi: f64) -> f64 {
        let y = Point2::direction(psi);
        let nx = self.norm.evaluate(x);
        let r = 2.0 * nx / self.norm.evaluate(y);
        let (_, v, _) = golden_section(
            |t| self.norm.evaluate(x + y * t),
            -r,
            r,
            LAMBDA_TOL,
            MAX_GOLDEN_ITERATIONS,
        );
        (nx - v).max(0.0)
    }

    /// Companion arcs of the sphere point at angle `theta`, retrying with a
    /// doubled scan on [`BirkhoffError::NoCompanionFound`] up to
    /// [`MAX_SCAN_COUNT`] samples.
    pub fn arcs_with_retry(&self, theta: f64) -> Result<Vec<CompanionArc>, BirkhoffError> {
        let mut scan = self.settings.scan_count;
        loop {
            match self.arcs(theta, scan) {
                Err(BirkhoffError::NoCompanionFound { .. }) if scan < MAX_SCAN_COUNT => {
                    scan = (scan * 2).min(MAX_SCAN_COUNT);
                }
                other => return other,
            }
        }
    }

    pub fn arcs(&self, theta: f64, scan_count: usize) -> Result<Vec<CompanionArc>, BirkhoffError> {
        if scan_count < MIN_SCAN_COUNT {
            return Err(BirkhoffError::ScanTooCoarse(scan_count));
        }
        let x = self.norm.sphere_point(theta).coords;
        let n = scan_count;
        let step = PI / n as f64;
        let psi = |i: i64| i as f64 * step;
        let samples: Vec<f64> = (0..n).map(|i| self.defect_at(x, psi(i as i64))).collect();
        let d = |i: i64| samples[i.rem_euclid(n as i64) as usize];
        let CompanionSettings {
            scan_tol, admit_tol, ..
        } = self.settings;

        // Seeds: the minimum of every cyclic run of scan-admitted samples, or
        // the global minimum when no sample is admitted.
        let mut seeds: Vec<i64> = Vec::new();
        let admitted = |i: i64| d(i) <= scan_tol;
        if (0..n as i64).all(admitted) {
            return Err(BirkhoffError::NoCompanionFound { theta, scan_count });
        }
        for start in 0..n as i64 {
            if admitted(start) && !admitted(start - 1) {
                let mut best = start;
                let mut k = start;
                while admitted(k) {
                    if d(k) < d(best) {
                        best = k;
                    }
                    k += 1;
                }
                seeds.push(best);
            }
        }
        if seeds.is_empty() {
            let best = (0..n as i64)
                .min_by(|a, b| d(*a).total_cmp(&d(*b)))
                .expect("scan is nonempty");
            seeds.push(best);
        }

        let mut arcs = Vec::new();
        for seed in seeds {
            let (centre, centre_defect) = if d(seed) <= admit_tol {
                (psi(seed), d(seed))
            } else {
                let (t, v, _) = golden_section(
                    |p| self.defect_at(x, p),
                    psi(seed - 1),
                    psi(seed + 1),
                    1e-13,
                    MAX_GOLDEN_ITERATIONS,
                );
                (t, v)
            };
            if centre_defect > admit_tol {
                continue;
            }
            let ok = |i: i64| d(i) <= admit_tol;

            // walk left over admitted samples, then bisect the boundary
            let mut inside = centre;
            let mut j = (centre / step).ceil() as i64 - 1;
            let mut guard = 0;
            while ok(j) && guard < n {
                inside = psi(j);
                j -= 1;
                guard += 1;
            }
            let lo = self.bisect_boundary(x, psi(j), inside);

            let mut inside = centre;
            let mut j = (centre / step).floor() as i64 + 1;
            let mut guard = 0;
            while ok(j) && guard < n {
                inside = psi(j);
                j += 1;
                guard += 1;
            }
            let hi = self.bisect_boundary(x, psi(j), inside);

            let shift = (lo / PI).floor() * PI;
            arcs.push(CompanionArc {
                psi_lo: lo - shift,
                psi_hi: hi - shift,
                boundary_tolerance: ARC_BOUNDARY_WIDTH,
            });
        }
        if arcs.is_empty() {
            return Err(BirkhoffError::NoCompanionFound { theta, scan_count });
        }
        Ok(merge_arcs(arcs))
    }

    /// Bisects between a rejected angle and an admitted one; returns the
    /// admitted end once the bracket is narrower than [`ARC_BOUNDARY_WIDTH`].
    fn bisect_boundary(&self, x: Point2, mut outside: f64, mut inside: f64) -> f64 {
        let tol = self.settings.admit_tol * BOUNDARY_HEADROOM;
        while (inside - outside).abs() > ARC_BOUNDARY_WIDTH {
            let mid = 0.5 * (inside + outside);
            if self.defect_at(x, mid) <= tol {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        inside
    }
}

/// Merges arcs that overlap modulo π.
fn merge_arcs(mut arcs: Vec<CompanionArc>) -> Vec<CompanionArc> {
    arcs.sort_by(|a, b| a.psi_lo.total_cmp(&b.psi_lo));
    let mut merged: Vec<CompanionArc> = Vec::with_capacity(arcs.len());
    for arc in arcs {
        match merged.last_mut() {
            Some(last) if arc.psi_lo <= last.psi_hi => last.psi_hi = last.psi_hi.max(arc.psi_hi),
            _ => merged.push(arc),
        }
    }
    if merged.len() > 1 {
        let first_lo = merged[0].psi_lo;
        let last = *merged.last().unwrap();
        if last.psi_hi >= first_lo + PI {
            let first_hi = merged[0].psi_hi;
            merged.remove(0);
            let tail = merged.last_mut().unwrap();
            tail.psi_hi = tail.psi_hi.max(first_hi + PI);
        }
    }
    merged
}

/// Companion arcs of the sphere point at `theta` with default tolerances.
pub fn companion_arcs(
    norm: &Norm,
    theta: f64,
    scan_count: usize,
) -> Result<Vec<CompanionArc>, BirkhoffError> {
    CompanionSolver::new(
        norm,
        CompanionSettings {
            scan_count,
            ..Default::default()
        },
    )
    .arcs(theta, scan_count)
}
