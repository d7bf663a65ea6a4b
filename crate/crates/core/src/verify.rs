//! Executable inequality catalog.
//!
//! [`run_checks`] estimates every constant once and evaluates the catalog for
//! each requested ν. A failed check is reported, never raised.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::constants::{
    heinz_mean, ConstantError, ConstantEstimate, ConstantKind, Estimator, GridParams, NonSquareClass,
};
use crate::geometry::{Linear2, Point2};
use crate::norm::{hexagon_vertices, Norm, NormError};

/// Slack for inequalities that hold pair by pair.
pub const PAIR_SLACK: f64 = 1e-6;
/// Slack for comparisons between two grid estimates.
pub const ESTIMATE_SLACK: f64 = 5e-3;
/// Reverse-defect threshold below which a plane is classified as Radon.
pub const RADON_TOL: f64 = 1e-6;

pub const CATALOG: [&str; 10] = [
    "bounds_1_2",
    "chain",
    "j_sandwich",
    "delta_upper",
    "rho_lower",
    "rectangular",
    "nu_symmetry",
    "nu_min_half",
    "radon_upper",
    "nonsquare_consistency",
];

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Constant(#[from] ConstantError),
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error("no nu values given")]
    NoNu,
    #[error("singular map rejected")]
    SingularMap,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Relation {
    /// `lhs ≤ rhs`
    Le,
    /// `lhs ≥ rhs`
    Ge,
    /// `|lhs − rhs| ≤ tol`
    Eq { tol: f64 },
    /// `lo ≤ lhs ≤ rhs`
    Between { lo: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub statement: String,
    pub nu: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    /// Signed: nonnegative when the relation holds exactly.
    pub margin: f64,
    pub slack: f64,
    pub applicable: bool,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, statement: &str, nu: f64, lhs: f64, rhs: f64, relation: Relation, slack: f64) -> Self {
        let margin = match relation {
            Relation::Le => rhs - lhs,
            Relation::Ge => lhs - rhs,
            Relation::Eq { tol } => tol - (lhs - rhs).abs(),
            Relation::Between { lo } => (lhs - lo).min(rhs - lhs),
        };
        Check {
            name: name.to_owned(),
            statement: statement.to_owned(),
            nu,
            lhs,
            rhs,
            relation,
            margin,
            slack,
            applicable: true,
            passed: margin >= -slack,
            detail: String::new(),
        }
    }

    fn not_applicable(mut self, why: &str) -> Self {
        self.applicable = false;
        self.passed = true;
        self.detail = why.to_owned();
        self
    }

    fn with_detail(mut self, detail: String) -> Self {
        self.detail = detail;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadonSummary {
    pub defect: f64,
    pub is_radon: bool,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub norm: String,
    pub norm_spec: String,
    pub nus: Vec<f64>,
    pub grid: GridParams,
    pub checks: Vec<Check>,
    pub constants: Vec<ConstantEstimate>,
    pub radon: RadonSummary,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str, nu: f64) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name && c.nu == nu)
    }

    pub fn constant(&self, kind: ConstantKind) -> Option<&ConstantEstimate> {
        self.constants.iter().find(|c| c.kind == kind)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    /// One row per check: `nu,name,lhs,rhs,margin,applicable,passed`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("nu,name,lhs,rhs,margin,applicable,passed\n");
        for c in &self.checks {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                c.nu, c.name, c.lhs, c.rhs, c.margin, c.applicable, c.passed
            ));
        }
        out
    }
}

/// Key for caching Heinz estimates by ν.
fn nu_key(nu: f64) -> u64 {
    nu.to_bits()
}

fn nonsquare_side(value: f64, band: f64) -> NonSquareClass {
    if value >= 2.0 - band {
        NonSquareClass::NotUniformlyNonSquare
    } else {
        NonSquareClass::UniformlyNonSquare
    }
}

/// Evaluates the full catalog for every ν in `nus`.
pub fn run_checks(norm: &Norm, nus: &[f64], grid: &GridParams) -> Result<VerificationReport, VerifyError> {
    if nus.is_empty() {
        return Err(VerifyError::NoNu);
    }
    for &nu in nus {
        ConstantKind::heinz(nu)?;
    }
    let est = Estimator::new(norm, *grid)?;

    let mut heinz: BTreeMap<u64, ConstantEstimate> = BTreeMap::new();
    let mut heinz_at = |nu: f64| -> Result<f64, ConstantError> {
        if let Some(e) = heinz.get(&nu_key(nu)) {
            return Ok(e.value);
        }
        let e = est.estimate(ConstantKind::HeinzB(nu))?;
        heinz.insert(nu_key(nu), e);
        Ok(e.value)
    };

    let mut fixed = Vec::new();
    for kind in ConstantKind::ALL_FIXED {
        fixed.push(est.estimate(kind)?);
    }
    let value_of = |kind: ConstantKind| fixed.iter().find(|e| e.kind == kind).unwrap().value;
    let j_b = value_of(ConstantKind::JamesB);
    let a2_b = value_of(ConstantKind::A2B);
    let delta_b = value_of(ConstantKind::DeltaB);
    let rho_b = value_of(ConstantKind::RhoB);
    let mu_b = value_of(ConstantKind::RectangularB);

    let radon_defect = est.radon_defect()?;
    let is_radon = radon_defect <= RADON_TOL;
    let h_half = heinz_at(0.5)?;

    let mut checks = Vec::new();
    for &nu in nus {
        let h = heinz_at(nu)?;
        let h_mirror = heinz_at(1.0 - nu)?;

        checks.push(Check::new(
            "bounds_1_2",
            "1 <= H_nu <= 2",
            nu,
            h,
            2.0,
            Relation::Between { lo: 1.0 },
            PAIR_SLACK,
        ));
        checks.push(
            Check::new(
                "chain",
                "J(X,B) <= H_nu <= A2(X,B)",
                nu,
                h,
                a2_b,
                Relation::Between { lo: j_b },
                ESTIMATE_SLACK,
            )
            .with_detail(format!("J_B = {j_b}, A2_B = {a2_b}")),
        );
        let sandwich = 2f64.powf(nu - 1.0) * j_b.powf(1.0 - nu) + 2f64.powf(-nu) * j_b.powf(nu);
        checks.push(Check::new(
            "j_sandwich",
            "H_nu <= 2^(nu-1) J^(1-nu) + 2^(-nu) J^nu",
            nu,
            h,
            sandwich,
            Relation::Le,
            ESTIMATE_SLACK,
        ));
        let one_minus_delta = 1.0 - delta_b;
        checks.push(Check::new(
            "delta_upper",
            "H_nu <= (1-delta_B)^nu + (1-delta_B)^(1-nu)",
            nu,
            h,
            one_minus_delta.powf(nu) + one_minus_delta.powf(1.0 - nu),
            Relation::Le,
            ESTIMATE_SLACK,
        ));
        checks.push(Check::new(
            "rho_lower",
            "H_nu >= sqrt(2(1-rho_B))",
            nu,
            h,
            (2.0 * (1.0 - rho_b)).sqrt(),
            Relation::Ge,
            ESTIMATE_SLACK,
        ));
        checks.push(Check::new(
            "rectangular",
            "mu'(X,B) H_nu^2 >= 2",
            nu,
            mu_b * h * h,
            2.0,
            Relation::Ge,
            ESTIMATE_SLACK,
        ));
        checks.push(Check::new(
            "nu_symmetry",
            "H_nu = H_(1-nu)",
            nu,
            h,
            h_mirror,
            Relation::Eq {
                tol: 2.0 * grid.value_tol,
            },
            ESTIMATE_SLACK,
        ));
        checks.push(Check::new(
            "nu_min_half",
            "H_(1/2) <= H_nu",
            nu,
            h_half,
            h,
            Relation::Le,
            ESTIMATE_SLACK,
        ));
        let radon = Check::new(
            "radon_upper",
            "Radon plane => H_nu <= 3/2",
            nu,
            h,
            1.5,
            Relation::Le,
            ESTIMATE_SLACK,
        );
        checks.push(if is_radon {
            radon.with_detail(format!("radon defect {radon_defect:e}"))
        } else {
            radon.not_applicable(&format!("not a Radon plane (defect {radon_defect:e})"))
        });
        let h_side = nonsquare_side(h, ESTIMATE_SLACK);
        let j_side = nonsquare_side(j_b, ESTIMATE_SLACK);
        let indicator = |c: NonSquareClass| (c == NonSquareClass::NotUniformlyNonSquare) as u8 as f64;
        checks.push(
            Check::new(
                "nonsquare_consistency",
                "H_nu = 2 <=> J(X,B) = 2",
                nu,
                indicator(h_side),
                indicator(j_side),
                Relation::Eq { tol: 0.0 },
                0.0,
            )
            .with_detail(format!("H: {h_side:?}, J_B: {j_side:?}")),
        );
    }

    let mut constants: Vec<ConstantEstimate> = heinz.into_values().collect();
    constants.sort_by(|a, b| a.kind.nu().unwrap().total_cmp(&b.kind.nu().unwrap()));
    constants.extend(fixed);

    Ok(VerificationReport {
        norm: norm.label().to_owned(),
        norm_spec: norm.to_spec_string(),
        nus: nus.to_vec(),
        grid: *grid,
        checks,
        constants,
        radon: RadonSummary {
            defect: radon_defect,
            is_radon,
            tolerance: RADON_TOL,
        },
    })
}

/// A pointwise inequality that failed on one admitted orthogonal pair.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairViolation {
    pub inequality: &'static str,
    pub nu: f64,
    pub x: Point2,
    pub y: Point2,
    pub excess: f64,
}

/// Checks the pairwise forms of the catalog on up to `count` admitted
/// orthogonal pairs, spread evenly over the coarse grid. With `s = ‖x+y‖`,
/// `d = ‖x−y‖`, `m = min(s,d)`, `h = H_ν(s,d)`:
/// `1 ≤ h ≤ 2`, `m ≤ √(sd) ≤ h ≤ (s+d)/2`,
/// `h ≤ 2^{ν−1}m^{1−ν} + 2^{−ν}m^ν`, `h ≤ (s/2)^ν + (s/2)^{1−ν}`, `h² ≥ s`.
pub fn pairwise_checks(
    norm: &Norm,
    nus: &[f64],
    grid: &GridParams,
    count: usize,
    slack: f64,
) -> Result<(usize, Vec<PairViolation>), VerifyError> {
    let est = Estimator::new(norm, *grid)?;
    let pairs = est.admitted_pairs()?;
    let stride = (pairs.len() / count.max(1)).max(1);
    let mut violations = Vec::new();
    let mut tested = 0;
    for &(x, y) in pairs.iter().step_by(stride).take(count) {
        tested += 1;
        let s = norm.evaluate(x + y);
        let d = norm.evaluate(x - y);
        for &nu in nus {
            let h = heinz_mean(s, d, nu).map_err(VerifyError::Constant)?;
            let m = s.min(d);
            let g = (s * d).sqrt();
            let mut test = |name: &'static str, excess: f64| {
                if excess > slack {
                    violations.push(PairViolation {
                        inequality: name,
                        nu,
                        x,
                        y,
                        excess,
                    });
                }
            };
            test("h >= 1", 1.0 - h);
            test("h <= 2", h - 2.0);
            test("min <= geometric", m - g);
            test("geometric <= h", g - h);
            test("h <= arithmetic", h - 0.5 * (s + d));
            test(
                "j_sandwich",
                h - (2f64.powf(nu - 1.0) * m.powf(1.0 - nu) + 2f64.powf(-nu) * m.powf(nu)),
            );
            test("delta_upper", h - ((0.5 * s).powf(nu) + (0.5 * s).powf(1.0 - nu)));
            test("rho_lower / rectangular", s - h * h);
        }
    }
    Ok((tested, violations))
}

/// A random invertible linear map with condition number at most `max_cond`.
pub fn random_linear_map<R: Rng>(rng: &mut R, max_cond: f64) -> Result<Linear2, VerifyError> {
    let a = Linear2::rotation(rng.gen_range(0.0..std::f64::consts::TAU));
    let b = Linear2::rotation(rng.gen_range(0.0..std::f64::consts::TAU));
    let sigma = rng.gen_range(1.0 / max_cond..=1.0);
    let scale = rng.gen_range(0.5..2.0);
    let m = a.compose(&Linear2::diag(scale, scale * sigma)).compose(&b);
    if m.det().abs() < 1e-12 || m.condition_number() > max_cond * (1.0 + 1e-9) {
        return Err(VerifyError::SingularMap);
    }
    Ok(m)
}

/// Polygon norm on the image of the hexagon `±u, ±v, ±(u+v)`, `u = (1,0)`,
/// `v = (0,1)`, under `map`.
pub fn hexagon_image(map: &Linear2) -> Result<Norm, VerifyError> {
    if map.det().abs() < 1e-12 {
        return Err(VerifyError::SingularMap);
    }
    let u = map.apply(Point2::new(1.0, 0.0));
    let v = map.apply(Point2::new(0.0, 1.0));
    Ok(Norm::polygon(hexagon_vertices(u, v))?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HexagonTrial {
    pub map: Linear2,
    pub h: f64,
    pub norm_spec: String,
}

pub fn hexagon_trial(map: Linear2, grid: &GridParams) -> Result<HexagonTrial, VerifyError> {
    let norm = hexagon_image(&map)?;
    let h = Estimator::new(&norm, *grid)?
        .estimate(ConstantKind::HeinzB(0.5))?
        .value;
    Ok(HexagonTrial {
        map,
        h,
        norm_spec: norm.to_spec_string(),
    })
}

/// Estimates `H_{1/2}` on `count` seeded affine images of the regular
/// hexagon. Each should equal 3/2.
pub fn hexagon_family_check(
    count: usize,
    seed: u64,
    grid: &GridParams,
) -> Result<Vec<HexagonTrial>, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trials = Vec::with_capacity(count);
    while trials.len() < count {
        let map = match random_linear_map(&mut rng, 10.0) {
            Ok(m) => m,
            Err(VerifyError::SingularMap) => continue,
            Err(e) => return Err(e),
        };
        trials.push(hexagon_trial(map, grid)?);
    }
    Ok(trials)
}

/// Strict convex hull (no collinear points), counter-clockwise.
fn convex_hull(mut points: Vec<Point2>) -> Vec<Point2> {
    points.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    points.dedup();
    if points.len() < 3 {
        return points;
    }
    let mut hull: Vec<Point2> = Vec::with_capacity(points.len() * 2);
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point2>> = if pass == 0 {
            Box::new(points.iter())
        } else {
            Box::new(points.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                if (b - a).cross(p - b) <= 1e-12 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// A random centrally symmetric convex polygon norm with a vertex count in
/// `[min_vertices, max_vertices]`.
pub fn random_symmetric_polygon<R: Rng>(rng: &mut R, min_vertices: usize, max_vertices: usize) -> Norm {
    loop {
        let half = rng.gen_range(min_vertices / 2..=max_vertices / 2);
        let mut points = Vec::with_capacity(2 * half);
        for _ in 0..half {
            let angle = rng.gen_range(0.0..std::f64::consts::PI);
            let r = rng.gen_range(0.6..1.4);
            let p = Point2::direction(angle) * r;
            points.push(p);
            points.push(-p);
        }
        let hull = convex_hull(points);
        if hull.len() < min_vertices || hull.len() > max_vertices {
            continue;
        }
        if let Ok(norm) = Norm::polygon(hull) {
            return norm;
        }
    }
}
