//! Geometric constants as suprema/infima over pairs of unit vectors.
//!
//! Constrained constants (suffix `B`) range over Birkhoff-orthogonal pairs
//! `x ⊥_B y`; the others over all pairs of the unit sphere. Estimates are
//! grid searches with nested local refinement. A supremum estimate is the
//! objective at an explicit witness pair, hence a certified lower bound.

use std::f64::consts::PI;
use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::birkhoff::{
    self, BirkhoffError, CompanionArc, CompanionSettings, CompanionSolver, OrthoPair, DEFAULT_ADMIT_TOL,
    DEFAULT_ORTHO_TOL,
};
use crate::geometry::Point2;
use crate::norm::Norm;

/// Samples per axis in each local refinement grid.
const REFINE_SAMPLES: usize = 32;
/// Window shrink factor between refinement levels.
const REFINE_SHRINK: f64 = 10.0;
/// Largest tolerated change between refinement levels.
const STABILITY_LIMIT: f64 = 1e-2;
/// Local grid offsets in `[-half, half]`: `REFINE_SAMPLES` equispaced points
/// plus the centre itself, which an even count would otherwise skip.
fn window_offsets(half: f64) -> impl Iterator<Item = f64> {
    (0..REFINE_SAMPLES)
        .map(move |k| -half + 2.0 * half * k as f64 / (REFINE_SAMPLES - 1) as f64)
        .chain(std::iter::once(0.0))
}

/// Candidates closer than this are ties; the earlier (θ, ψ) wins.
const TIE_EPS: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstantError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Birkhoff(#[from] BirkhoffError),
    #[error("grid too coarse: refinement level {level} moved the estimate by {change:.3e}")]
    GridTooCoarse { level: usize, change: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    Supremum,
    Infimum,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum ConstantKind {
    /// `H_ν(X,B)`
    HeinzB(f64),
    /// `J(X,B)`
    JamesB,
    /// `A₂(X,B)`
    A2B,
    /// `δ_B(X)`
    DeltaB,
    /// `ρ_B(X)`
    RhoB,
    /// `μ′(X,B)`
    RectangularB,
    /// `J(X)`
    James,
    /// `S(X)`
    Schaffer,
    /// `A₂(X)`
    A2,
}

impl ConstantKind {
    pub fn heinz(nu: f64) -> Result<Self, ConstantError> {
        check_nu(nu)?;
        Ok(ConstantKind::HeinzB(nu))
    }

    pub const ALL_FIXED: [ConstantKind; 8] = [
        ConstantKind::JamesB,
        ConstantKind::A2B,
        ConstantKind::DeltaB,
        ConstantKind::RhoB,
        ConstantKind::RectangularB,
        ConstantKind::James,
        ConstantKind::Schaffer,
        ConstantKind::A2,
    ];

    pub fn direction(self) -> Direction {
        match self {
            ConstantKind::DeltaB | ConstantKind::Schaffer => Direction::Infimum,
            _ => Direction::Supremum,
        }
    }

    pub fn is_constrained(self) -> bool {
        !matches!(
            self,
            ConstantKind::James | ConstantKind::Schaffer | ConstantKind::A2
        )
    }

    /// Whether the objective is unchanged under `y ↦ −y` (which swaps
    /// `‖x+y‖` and `‖x−y‖`).
    pub fn is_sign_symmetric(self) -> bool {
        !matches!(
            self,
            ConstantKind::DeltaB | ConstantKind::RhoB | ConstantKind::RectangularB
        )
    }

    pub fn nu(self) -> Option<f64> {
        match self {
            ConstantKind::HeinzB(nu) => Some(nu),
            _ => None,
        }
    }

    /// Short tag used in tables: `H`, `J_B`, `A2_B`, `delta_B`, `rho_B`,
    /// `mu_B`, `J`, `S`, `A2`.
    pub fn tag(self) -> &'static str {
        match self {
            ConstantKind::HeinzB(_) => "H",
            ConstantKind::JamesB => "J_B",
            ConstantKind::A2B => "A2_B",
            ConstantKind::DeltaB => "delta_B",
            ConstantKind::RhoB => "rho_B",
            ConstantKind::RectangularB => "mu_B",
            ConstantKind::James => "J",
            ConstantKind::Schaffer => "S",
            ConstantKind::A2 => "A2",
        }
    }

    /// Inverse of [`ConstantKind::tag`]; `nu` is used for `H`.
    pub fn from_tag(tag: &str, nu: f64) -> Option<Result<Self, ConstantError>> {
        Some(Ok(match tag {
            "H" => return Some(Self::heinz(nu)),
            "J_B" => ConstantKind::JamesB,
            "A2_B" => ConstantKind::A2B,
            "delta_B" => ConstantKind::DeltaB,
            "rho_B" => ConstantKind::RhoB,
            "mu_B" => ConstantKind::RectangularB,
            "J" => ConstantKind::James,
            "S" => ConstantKind::Schaffer,
            "A2" => ConstantKind::A2,
            _ => return None,
        }))
    }
}

impl fmt::Display for ConstantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstantKind::HeinzB(nu) => write!(f, "H(nu={nu})"),
            other => f.write_str(other.tag()),
        }
    }
}

fn check_nu(nu: f64) -> Result<(), ConstantError> {
    if (0.0..=1.0).contains(&nu) {
        Ok(())
    } else {
        Err(ConstantError::Domain(format!("nu = {nu} is outside [0, 1]")))
    }
}

/// `(a^ν b^{1−ν} + a^{1−ν} b^ν) / 2`
pub fn heinz_mean(a: f64, b: f64, nu: f64) -> Result<f64, ConstantError> {
    if !(a > 0.0 && b > 0.0) {
        return Err(ConstantError::Domain(format!(
            "Heinz mean needs positive arguments, got ({a}, {b})"
        )));
    }
    check_nu(nu)?;
    Ok(heinz_unchecked(a, b, nu))
}

#[inline]
fn heinz_unchecked(a: f64, b: f64, nu: f64) -> f64 {
    if a == b {
        return a;
    }
    0.5 * (a.powf(nu) * b.powf(1.0 - nu) + a.powf(1.0 - nu) * b.powf(nu))
}

/// Objective of `kind` at `s = ‖x+y‖`, `d = ‖x−y‖`.
pub fn pair_objective(kind: ConstantKind, s: f64, d: f64) -> Result<f64, ConstantError> {
    if !(s > 0.0 && d > 0.0) {
        return Err(ConstantError::Domain(format!(
            "pair objective needs positive side lengths, got ({s}, {d})"
        )));
    }
    if let ConstantKind::HeinzB(nu) = kind {
        check_nu(nu)?;
    }
    Ok(objective(kind, s, d))
}

#[inline]
fn objective(kind: ConstantKind, s: f64, d: f64) -> f64 {
    match kind {
        ConstantKind::HeinzB(nu) => heinz_unchecked(s, d, nu),
        ConstantKind::JamesB | ConstantKind::James => s.min(d),
        ConstantKind::Schaffer => s.max(d),
        ConstantKind::A2B | ConstantKind::A2 => 0.5 * (s + d),
        ConstantKind::DeltaB | ConstantKind::RhoB => 1.0 - 0.5 * s,
        ConstantKind::RectangularB => 2.0 / s,
    }
}

/// Search resolution and tolerances.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridParams {
    pub theta_count: usize,
    pub psi_scan: usize,
    pub refinement_levels: usize,
    /// Defect threshold at the companion scan stage.
    pub scan_tol: f64,
    /// Defect threshold for admitted pairs.
    pub admit_tol: f64,
    /// Accuracy target for values; used by classifications.
    pub value_tol: f64,
}

impl Default for GridParams {
    fn default() -> Self {
        Self {
            theta_count: 2048,
            psi_scan: 512,
            refinement_levels: 3,
            scan_tol: DEFAULT_ORTHO_TOL,
            admit_tol: DEFAULT_ADMIT_TOL,
            value_tol: 1e-3,
        }
    }
}

impl GridParams {
    pub fn validate(&self) -> Result<(), ConstantError> {
        if self.theta_count < 256 {
            return Err(ConstantError::InvalidGrid(format!(
                "theta_count = {} is below 256",
                self.theta_count
            )));
        }
        if self.psi_scan < birkhoff::MIN_SCAN_COUNT {
            return Err(ConstantError::InvalidGrid(format!(
                "psi_scan = {} is below {}",
                self.psi_scan,
                birkhoff::MIN_SCAN_COUNT
            )));
        }
        if !(self.admit_tol > 0.0 && self.scan_tol >= self.admit_tol && self.value_tol > 0.0) {
            return Err(ConstantError::InvalidGrid(
                "tolerances must be positive with scan_tol >= admit_tol".into(),
            ));
        }
        Ok(())
    }

    fn theta_step(&self) -> f64 {
        PI / self.theta_count as f64
    }

    fn psi_step(&self) -> f64 {
        PI / self.psi_scan as f64
    }

    fn companion_settings(&self) -> CompanionSettings {
        CompanionSettings {
            scan_count: self.psi_scan,
            scan_tol: self.scan_tol,
            admit_tol: self.admit_tol,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSummary {
    pub theta_count: usize,
    pub psi_scan_count: usize,
    pub refinement_levels: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConstantEstimate {
    pub kind: ConstantKind,
    pub value: f64,
    /// For unconstrained kinds the defect is informational only.
    pub witness: OrthoPair,
    pub grid: GridSummary,
    /// Defect tolerance pairs were admitted under.
    pub tolerance: f64,
}

/// A sampled companion pair: `x` at angle `theta`, `y` at `psi` (unflipped).
#[derive(Clone, Copy, Debug)]
struct Sample {
    theta: f64,
    psi: f64,
    sum: f64,
    diff: f64,
}

#[derive(Clone, Debug)]
struct AtlasRow {
    x: Point2,
    samples: Vec<Sample>,
}

/// Best candidate so far. `psi` includes a `+π` when the pair is flipped.
#[derive(Clone, Copy, Debug)]
struct Candidate {
    score: f64,
    theta: f64,
    psi: f64,
}

impl Candidate {
    const NONE: Candidate = Candidate {
        score: f64::NEG_INFINITY,
        theta: 0.0,
        psi: 0.0,
    };

    /// Replace only on strict improvement; earlier candidates win ties.
    #[inline]
    fn offer(&mut self, score: f64, theta: f64, psi: f64) {
        if score > self.score + TIE_EPS {
            *self = Candidate { score, theta, psi };
        }
    }

    fn merge(mut self, other: Candidate) -> Candidate {
        self.offer(other.score, other.theta, other.psi);
        self
    }
}

/// Estimator for one norm and grid. The companion atlas (arcs and sampled
/// pairs on the coarse θ grid) is computed once and shared by every
/// constrained constant.
pub struct Estimator<'a> {
    norm: &'a Norm,
    grid: GridParams,
    atlas: OnceLock<Result<Vec<AtlasRow>, ConstantError>>,
    sphere: OnceLock<Vec<(f64, Point2)>>,
}

impl<'a> Estimator<'a> {
    pub fn new(norm: &'a Norm, grid: GridParams) -> Result<Self, ConstantError> {
        grid.validate()?;
        Ok(Self {
            norm,
            grid,
            atlas: OnceLock::new(),
            sphere: OnceLock::new(),
        })
    }

    pub fn norm(&self) -> &Norm {
        self.norm
    }

    pub fn grid(&self) -> &GridParams {
        &self.grid
    }

    fn solver(&self) -> CompanionSolver<'_> {
        CompanionSolver::new(self.norm, self.grid.companion_settings())
    }

    /// Admitted sample points of each arc: endpoints, `max(8, len/ψ-step)`
    /// interior points, plus the optional window `(centre, half_width)`.
    fn sample_arcs(
        &self,
        theta: f64,
        x: Point2,
        arcs: &[CompanionArc],
        window: Option<(f64, f64)>,
    ) -> Vec<Sample> {
        let step = self.grid.psi_step();
        let mut psis = Vec::new();
        for arc in arcs {
            let len = arc.width();
            let m = ((len / step).ceil() as usize).max(8);
            psis.push(arc.psi_lo);
            psis.extend((1..=m).map(|k| arc.psi_lo + len * k as f64 / (m + 1) as f64));
            psis.push(arc.psi_hi);
            if let Some((centre, half)) = window {
                // bring the centre to the representative closest to the arc
                let c = centre + ((arc.midpoint() - centre) / PI).round() * PI;
                for p in window_offsets(half).map(|o| c + o) {
                    if p >= arc.psi_lo && p <= arc.psi_hi {
                        psis.push(p);
                    }
                }
            }
        }
        psis.iter()
            .filter_map(|&psi| {
                let y = self.norm.sphere_point(psi).coords;
                let d = birkhoff::defect(self.norm, x, y).ok()?;
                (d <= self.grid.admit_tol).then(|| Sample {
                    theta,
                    psi,
                    sum: self.norm.evaluate(x + y),
                    diff: self.norm.evaluate(x - y),
                })
            })
            .collect()
    }

    fn row(&self, theta: f64, window: Option<(f64, f64)>) -> Result<AtlasRow, ConstantError> {
        let x = self.norm.sphere_point(theta).coords;
        let arcs = self.solver().arcs_with_retry(theta)?;
        let samples = self.sample_arcs(theta, x, &arcs, window);
        Ok(AtlasRow { x, samples })
    }

    fn atlas(&self) -> Result<&[AtlasRow], ConstantError> {
        let atlas = self.atlas.get_or_init(|| {
            let step = self.grid.theta_step();
            (0..self.grid.theta_count)
                .into_par_iter()
                .map(|i| self.row(i as f64 * step, None))
                .collect()
        });
        atlas.as_deref().map_err(Clone::clone)
    }

    fn sphere_grid(&self) -> &[(f64, Point2)] {
        self.sphere.get_or_init(|| {
            let step = self.grid.theta_step();
            (0..self.grid.theta_count)
                .map(|i| {
                    let a = i as f64 * step;
                    (a, self.norm.sphere_point(a).coords)
                })
                .collect()
        })
    }

    /// Score to maximize: the objective, negated for infimum kinds.
    #[inline]
    fn score(kind: ConstantKind, s: f64, d: f64) -> f64 {
        let v = objective(kind, s, d);
        match kind.direction() {
            Direction::Supremum => v,
            Direction::Infimum => -v,
        }
    }

    fn best_of(kind: ConstantKind, samples: &[Sample]) -> Candidate {
        let mut best = Candidate::NONE;
        for s in samples {
            best.offer(Self::score(kind, s.sum, s.diff), s.theta, s.psi);
            if !kind.is_sign_symmetric() {
                best.offer(Self::score(kind, s.diff, s.sum), s.theta, s.psi + PI);
            }
        }
        best
    }

    pub fn estimate(&self, kind: ConstantKind) -> Result<ConstantEstimate, ConstantError> {
        if let Some(nu) = kind.nu() {
            check_nu(nu)?;
        }
        let best = if kind.is_constrained() {
            self.search_constrained(kind)?
        } else {
            self.search_unconstrained(kind)?
        };
        self.finish(kind, best)
    }

    fn search_constrained(&self, kind: ConstantKind) -> Result<Candidate, ConstantError> {
        let atlas = self.atlas()?;
        let coarse: Vec<Candidate> = atlas
            .par_iter()
            .map(|row| Self::best_of(kind, &row.samples))
            .collect();
        let mut best = coarse.into_iter().fold(Candidate::NONE, Candidate::merge);
        if best.score == f64::NEG_INFINITY {
            return Err(BirkhoffError::NoCompanionFound {
                theta: 0.0,
                scan_count: self.grid.psi_scan,
            }
            .into());
        }

        for level in 1..=self.grid.refinement_levels {
            let shrink = REFINE_SHRINK.powi(level as i32 - 1);
            let half_theta = self.grid.theta_step() / shrink;
            let half_psi = self.grid.psi_step() / shrink;
            let centre = best;
            let thetas: Vec<f64> = window_offsets(half_theta).map(|o| centre.theta + o).collect();
            let local: Result<Vec<Candidate>, ConstantError> = thetas
                .into_par_iter()
                .map(|theta| {
                    let row = self.row(theta, Some((centre.psi, half_psi)))?;
                    Ok(Self::best_of(kind, &row.samples))
                })
                .collect();
            let previous = best.score;
            best = local?.into_iter().fold(best, Candidate::merge);
            let change = (best.score - previous).abs();
            if change > STABILITY_LIMIT {
                return Err(ConstantError::GridTooCoarse { level, change });
            }
        }
        Ok(best)
    }

    fn search_unconstrained(&self, kind: ConstantKind) -> Result<Candidate, ConstantError> {
        let sphere = self.sphere_grid();
        let coarse: Vec<Candidate> = sphere
            .par_iter()
            .map(|&(theta, x)| {
                let mut best = Candidate::NONE;
                for &(psi, y) in sphere {
                    let s = self.norm.evaluate(x + y);
                    let d = self.norm.evaluate(x - y);
                    if s > 0.0 && d > 0.0 {
                        best.offer(Self::score(kind, s, d), theta, psi);
                    }
                }
                best
            })
            .collect();
        let mut best = coarse.into_iter().fold(Candidate::NONE, Candidate::merge);

        for level in 1..=self.grid.refinement_levels {
            let shrink = REFINE_SHRINK.powi(level as i32 - 1);
            let half = self.grid.theta_step() / shrink;
            let centre = best;
            let offsets: Vec<f64> = window_offsets(half).collect();
            let ys: Vec<(f64, Point2)> = offsets
                .iter()
                .map(|o| {
                    let p = centre.psi + o;
                    (p, self.norm.sphere_point(p).coords)
                })
                .collect();
            let previous = best.score;
            for o in &offsets {
                let theta = centre.theta + o;
                let x = self.norm.sphere_point(theta).coords;
                for &(psi, y) in &ys {
                    let s = self.norm.evaluate(x + y);
                    let d = self.norm.evaluate(x - y);
                    if s > 0.0 && d > 0.0 {
                        best.offer(Self::score(kind, s, d), theta, psi);
                    }
                }
            }
            let change = (best.score - previous).abs();
            if change > STABILITY_LIMIT {
                return Err(ConstantError::GridTooCoarse { level, change });
            }
        }
        Ok(best)
    }

    /// Rebuilds the witness from its angles and reports the objective there,
    /// so `value` is reproducible from the witness alone.
    fn finish(&self, kind: ConstantKind, best: Candidate) -> Result<ConstantEstimate, ConstantError> {
        let x = self.norm.sphere_point(best.theta);
        let y = self.norm.sphere_point(best.psi);
        let value = witness_value(self.norm, kind, x.coords, y.coords)?;
        let defect = birkhoff::defect(self.norm, x.coords, y.coords)?;
        Ok(ConstantEstimate {
            kind,
            value,
            witness: OrthoPair { x, y, defect },
            grid: GridSummary {
                theta_count: self.grid.theta_count,
                psi_scan_count: self.grid.psi_scan,
                refinement_levels: self.grid.refinement_levels,
            },
            tolerance: self.grid.admit_tol,
        })
    }

    /// Sup over sampled orthogonal pairs `(x, y)` of the reverse defect
    /// `defect(y, x)`. Zero (up to tolerance) on Radon planes.
    pub fn radon_defect(&self) -> Result<f64, ConstantError> {
        let atlas = self.atlas()?;
        let per_row: Vec<f64> = atlas
            .par_iter()
            .map(|row| {
                row.samples
                    .iter()
                    .map(|s| {
                        let y = self.norm.sphere_point(s.psi).coords;
                        birkhoff::defect(self.norm, y, row.x).unwrap_or(0.0)
                    })
                    .fold(0.0, f64::max)
            })
            .collect();
        Ok(per_row.into_iter().fold(0.0, f64::max))
    }

    /// Admitted orthogonal pairs on the coarse grid, in (θ, ψ) order.
    pub fn admitted_pairs(&self) -> Result<Vec<(Point2, Point2)>, ConstantError> {
        let atlas = self.atlas()?;
        Ok(atlas
            .iter()
            .flat_map(|row| {
                row.samples
                    .iter()
                    .map(move |s| (row.x, self.norm.sphere_point(s.psi).coords))
            })
            .collect())
    }

    pub fn classify_nonsquare(&self, nu: f64, margin: f64) -> Result<NonSquareClass, ConstantError> {
        if margin.is_nan() || margin <= 0.0 {
            return Err(ConstantError::Domain(format!(
                "margin must be positive, got {margin}"
            )));
        }
        let h = self.estimate(ConstantKind::heinz(nu)?)?.value;
        Ok(classify_value(h, margin, self.grid.value_tol))
    }
}

/// Objective of `kind` at the pair `(x, y)`.
pub fn witness_value(norm: &Norm, kind: ConstantKind, x: Point2, y: Point2) -> Result<f64, ConstantError> {
    pair_objective(kind, norm.evaluate(x + y), norm.evaluate(x - y))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NonSquareClass {
    UniformlyNonSquare,
    NotUniformlyNonSquare,
    Inconclusive,
}

fn classify_value(h: f64, margin: f64, tol: f64) -> NonSquareClass {
    if h <= 2.0 - margin {
        NonSquareClass::UniformlyNonSquare
    } else if h >= 2.0 - tol {
        NonSquareClass::NotUniformlyNonSquare
    } else {
        NonSquareClass::Inconclusive
    }
}

pub fn estimate_constant(
    norm: &Norm,
    kind: ConstantKind,
    grid: &GridParams,
) -> Result<ConstantEstimate, ConstantError> {
    Estimator::new(norm, *grid)?.estimate(kind)
}

pub fn radon_defect(norm: &Norm, grid: &GridParams) -> Result<f64, ConstantError> {
    Estimator::new(norm, *grid)?.radon_defect()
}

/// Classifies via `H_ν`: `≤ 2 − margin` is uniformly non-square, within the
/// grid's value tolerance of 2 is not.
pub fn classify_nonsquare(
    norm: &Norm,
    nu: f64,
    margin: f64,
    grid: &GridParams,
) -> Result<NonSquareClass, ConstantError> {
    Estimator::new(norm, *grid)?.classify_nonsquare(nu, margin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::SQRT_2;

    fn coarse() -> GridParams {
        GridParams {
            theta_count: 256,
            psi_scan: 128,
            ..Default::default()
        }
    }

    #[test]
    fn heinz_examples() {
        assert_eq!(heinz_mean(2.0, 1.0, 0.0).unwrap(), 1.5);
        assert!((heinz_mean(4.0, 1.0, 0.5).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(heinz_mean(2.0, 2.0, 0.25).unwrap(), 2.0);
        assert!(heinz_mean(0.0, 1.0, 0.5).is_err());
        assert!(heinz_mean(1.0, 1.0, 1.5).is_err());
        assert!(heinz_mean(1.0, 1.0, -0.1).is_err());
    }

    #[test]
    fn objective_examples() {
        let h = pair_objective(ConstantKind::HeinzB(0.3), SQRT_2, SQRT_2).unwrap();
        assert_eq!(h, SQRT_2);
        assert_eq!(pair_objective(ConstantKind::JamesB, 2.0, 2.0).unwrap(), 2.0);
        assert!((pair_objective(ConstantKind::RectangularB, SQRT_2, 7.0).unwrap() - SQRT_2).abs() < 1e-15);
        assert_eq!(pair_objective(ConstantKind::Schaffer, 1.0, 3.0).unwrap(), 3.0);
        assert_eq!(pair_objective(ConstantKind::DeltaB, 1.0, 3.0).unwrap(), 0.5);
        assert!(pair_objective(ConstantKind::A2, -1.0, 1.0).is_err());
        assert!(pair_objective(ConstantKind::HeinzB(2.0), 1.0, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn heinz_sits_between_geometric_and_arithmetic(
            a in 1e-3f64..1e3, b in 1e-3f64..1e3, nu in 0.0f64..=1.0
        ) {
            let h = heinz_mean(a, b, nu).unwrap();
            let g = (a * b).sqrt();
            prop_assert!(a.min(b) <= g * (1.0 + 1e-12));
            prop_assert!(g <= h * (1.0 + 1e-12));
            prop_assert!(h <= 0.5 * (a + b) * (1.0 + 1e-12));
            prop_assert!((h - heinz_mean(b, a, nu).unwrap()).abs() <= 1e-12 * h);
            prop_assert!((h - heinz_mean(a, b, 1.0 - nu).unwrap()).abs() <= 1e-12 * h);
        }
    }

    #[test]
    fn tags_round_trip() {
        for kind in ConstantKind::ALL_FIXED
            .into_iter()
            .chain([ConstantKind::HeinzB(0.25)])
        {
            assert_eq!(ConstantKind::from_tag(kind.tag(), 0.25).unwrap().unwrap(), kind);
        }
        assert!(ConstantKind::from_tag("X", 0.5).is_none());
        assert!(ConstantKind::from_tag("H", 1.5).unwrap().is_err());
    }

    #[test]
    fn grid_validation() {
        let g = GridParams {
            theta_count: 100,
            ..Default::default()
        };
        assert!(matches!(
            estimate_constant(&Norm::euclidean(), ConstantKind::JamesB, &g),
            Err(ConstantError::InvalidGrid(_))
        ));
        assert!(matches!(
            estimate_constant(&Norm::euclidean(), ConstantKind::HeinzB(1.2), &coarse()),
            Err(ConstantError::Domain(_))
        ));
    }

    #[test]
    fn euclidean_constants_on_coarse_grid() {
        let norm = Norm::euclidean();
        let est = Estimator::new(&norm, coarse()).unwrap();
        for kind in [
            ConstantKind::HeinzB(0.25),
            ConstantKind::JamesB,
            ConstantKind::A2B,
        ] {
            let e = est.estimate(kind).unwrap();
            assert!((e.value - SQRT_2).abs() < 1e-3, "{kind}: {}", e.value);
            assert!(e.witness.defect <= 1e-11);
        }
        let delta = est.estimate(ConstantKind::DeltaB).unwrap();
        assert!((delta.value - (1.0 - SQRT_2 / 2.0)).abs() < 1e-3);
        assert!(est.radon_defect().unwrap() < 1e-8);
    }

    #[test]
    fn unconstrained_linf() {
        let norm = Norm::linf();
        let est = Estimator::new(&norm, coarse()).unwrap();
        assert!((est.estimate(ConstantKind::James).unwrap().value - 2.0).abs() < 1e-9);
        assert!((est.estimate(ConstantKind::A2).unwrap().value - 2.0).abs() < 1e-9);
        // x = (1,0), y = (0,1) gives max(‖x+y‖, ‖x−y‖) = 1
        let s = est.estimate(ConstantKind::Schaffer).unwrap().value;
        assert!((s - 1.0).abs() < 1e-9, "{s}");
    }

    #[test]
    fn classification() {
        assert_eq!(
            classify_value(SQRT_2, 1e-2, 1e-3),
            NonSquareClass::UniformlyNonSquare
        );
        assert_eq!(
            classify_value(2.0, 1e-2, 1e-3),
            NonSquareClass::NotUniformlyNonSquare
        );
        assert_eq!(classify_value(1.995, 1e-2, 1e-3), NonSquareClass::Inconclusive);
    }
}
