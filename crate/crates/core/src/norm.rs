//! Planar norms as evaluable gauges.
//!
//! Every norm is symmetric, convex and positively homogeneous. Polygonal unit
//! balls are converted once, at construction, to a max-of-functionals form so
//! that evaluation is a single max over dot products.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::geometry::Point2;

/// Relative tolerance for the symmetry and convexity predicates on polygon
/// vertices.
const VERTEX_EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormError {
    #[error("polygon needs at least 4 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex ({x}, {y}) has no antipodal partner: vertex set must be centrally symmetric")]
    NonSymmetricVertices { x: f64, y: f64 },
    #[error("vertex ({x}, {y}) is not in strictly convex position")]
    NonConvexVertices { x: f64, y: f64 },
    #[error("origin is not strictly interior to the polygon")]
    OriginNotInterior,
    #[error("functionals do not span the plane: gauge vanishes on a nonzero vector")]
    DegenerateFunctionals,
    #[error("exponent p must satisfy 1 <= p <= inf, got {0}")]
    InvalidExponent(f64),
    #[error("non-finite coordinate in input")]
    NonFinite,
}

/// The exponent of an ℓ_p norm. The extremes are explicit markers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Exponent {
    One,
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self, NormError> {
        if p.is_nan() || p < 1.0 {
            return Err(NormError::InvalidExponent(p));
        }
        Ok(if p == 1.0 {
            Exponent::One
        } else if p.is_infinite() {
            Exponent::Infinity
        } else {
            Exponent::Finite(p)
        })
    }

    pub fn value(self) -> f64 {
        match self {
            Exponent::One => 1.0,
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }
}

/// Sub-norms usable on the quadrants of a [`NormKind::PiecewiseQuadrant`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum QuadrantNorm {
    Linf,
    L1,
    L2,
}

impl QuadrantNorm {
    pub fn name(self) -> &'static str {
        match self {
            QuadrantNorm::Linf => "linf",
            QuadrantNorm::L1 => "l1",
            QuadrantNorm::L2 => "l2",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "linf" => Some(QuadrantNorm::Linf),
            "l1" => Some(QuadrantNorm::L1),
            "l2" => Some(QuadrantNorm::L2),
            _ => None,
        }
    }

    #[inline]
    fn eval(self, v: Point2) -> f64 {
        match self {
            QuadrantNorm::Linf => v.x.abs().max(v.y.abs()),
            QuadrantNorm::L1 => v.x.abs() + v.y.abs(),
            QuadrantNorm::L2 => v.x.hypot(v.y),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum NormKind {
    PNorm(Exponent),
    Euclidean,
    /// Vertices in counter-clockwise order starting from the smallest polar
    /// angle.
    Polygon {
        vertices: Vec<Point2>,
    },
    MaxOfFunctionals {
        rows: Vec<Point2>,
    },
    /// `pos` applies where `x₁x₂ ≥ 0`, `neg` where `x₁x₂ ≤ 0`.
    PiecewiseQuadrant {
        pos: QuadrantNorm,
        neg: QuadrantNorm,
    },
}

/// A validated planar norm. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Norm {
    kind: NormKind,
    label: String,
    /// Max-of-|functional| representation for polygon and functional kinds.
    #[serde(skip)]
    functionals: Vec<Point2>,
}

/// A point of the unit sphere together with its Euclidean angle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpherePoint {
    pub angle: f64,
    pub coords: Point2,
}

impl Norm {
    pub fn euclidean() -> Self {
        Self::from_parts(NormKind::Euclidean, Vec::new())
    }

    pub fn l1() -> Self {
        Self::from_parts(NormKind::PNorm(Exponent::One), Vec::new())
    }

    pub fn linf() -> Self {
        Self::from_parts(NormKind::PNorm(Exponent::Infinity), Vec::new())
    }

    pub fn p_norm(p: f64) -> Result<Self, NormError> {
        Ok(Self::from_parts(NormKind::PNorm(Exponent::new(p)?), Vec::new()))
    }

    pub fn piecewise_quadrant(pos: QuadrantNorm, neg: QuadrantNorm) -> Self {
        Self::from_parts(NormKind::PiecewiseQuadrant { pos, neg }, Vec::new())
    }

    /// The ℓ∞ norm on the first/third quadrants glued to ℓ1 on the second and
    /// fourth. A Radon plane whose unit sphere is an affine-regular hexagon.
    pub fn linf_l1() -> Self {
        Self::piecewise_quadrant(QuadrantNorm::Linf, QuadrantNorm::L1)
    }

    /// `max{|x₁|, |x₂|, (|x₁|+|x₂|)/√2}`: a non-Hilbert norm with `H_ν = √2`.
    pub fn sqrt2_max() -> Self {
        Self::max_of_functionals(vec![
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
            Point2::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2),
            Point2::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
        ])
        .expect("functionals span the plane")
        .with_label("sqrt2max")
    }

    /// The hexagon with vertices `±(1,0), ±(0,1), ±(1,1)`.
    pub fn hexagon() -> Self {
        Self::polygon(hexagon_vertices(Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)))
            .expect("hexagon is a valid polygon")
            .with_label("hexagon")
    }

    /// `max_k |⟨row_k, v⟩|`. Rows must span the plane.
    pub fn max_of_functionals(rows: Vec<Point2>) -> Result<Self, NormError> {
        if rows.iter().any(|r| !r.is_finite()) {
            return Err(NormError::NonFinite);
        }
        let scale = rows.iter().map(|r| r.euclidean_len()).fold(0.0, f64::max);
        let spans = rows.iter().enumerate().any(|(i, a)| {
            rows[i + 1..]
                .iter()
                .any(|b| a.cross(*b).abs() > VERTEX_EPS * scale * scale)
        });
        if !spans {
            return Err(NormError::DegenerateFunctionals);
        }
        let functionals = rows.clone();
        Ok(Self::from_parts(NormKind::MaxOfFunctionals { rows }, functionals))
    }

    /// Norm whose unit ball is the convex polygon with the given vertices.
    ///
    /// Vertices may be given in any order; they must be centrally symmetric,
    /// in strictly convex position, with the origin strictly inside.
    pub fn polygon(vertices: Vec<Point2>) -> Result<Self, NormError> {
        let n = vertices.len();
        if n < 4 {
            return Err(NormError::TooFewVertices(n));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(NormError::NonFinite);
        }
        let scale = vertices.iter().map(|v| v.euclidean_len()).fold(0.0, f64::max);
        if scale == 0.0 {
            return Err(NormError::OriginNotInterior);
        }
        let eps = VERTEX_EPS * scale;
        for v in &vertices {
            if v.euclidean_len() <= eps {
                return Err(NormError::OriginNotInterior);
            }
            if !vertices.iter().any(|w| (*w + *v).euclidean_len() <= eps) {
                return Err(NormError::NonSymmetricVertices { x: v.x, y: v.y });
            }
        }

        let mut sorted = vertices;
        sorted.sort_by(|a, b| a.angle().total_cmp(&b.angle()));
        for i in 0..n {
            let (a, b) = (sorted[i], sorted[(i + 1) % n]);
            if (b - a).euclidean_len() <= eps {
                return Err(NormError::NonConvexVertices { x: b.x, y: b.y });
            }
            // consecutive vertices must subtend less than a half-turn
            if a.cross(b) <= eps * scale {
                return Err(NormError::OriginNotInterior);
            }
        }
        for i in 0..n {
            let (a, b, c) = (sorted[(i + n - 1) % n], sorted[i], sorted[(i + 1) % n]);
            if (b - a).cross(c - b) <= eps * scale {
                return Err(NormError::NonConvexVertices { x: b.x, y: b.y });
            }
        }

        // Edge i runs from sorted[i] to sorted[i+1]; edges i and i + n/2 are
        // antipodal, so half of them suffice under |·|.
        let functionals = (0..n / 2)
            .map(|i| {
                let (a, b) = (sorted[i], sorted[i + 1]);
                let normal = Point2::new(b.y - a.y, a.x - b.x);
                normal * (1.0 / normal.dot(a))
            })
            .collect();
        Ok(Self::from_parts(
            NormKind::Polygon { vertices: sorted },
            functionals,
        ))
    }

    fn from_parts(kind: NormKind, functionals: Vec<Point2>) -> Self {
        let label = default_label(&kind);
        Norm {
            kind,
            label,
            functionals,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn kind(&self) -> &NormKind {
        &self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Gauge value of `v`. Total on finite inputs; zero only at the origin.
    #[inline]
    pub fn evaluate(&self, v: Point2) -> f64 {
        match &self.kind {
            NormKind::Euclidean => v.x.hypot(v.y),
            NormKind::PNorm(Exponent::One) => v.x.abs() + v.y.abs(),
            NormKind::PNorm(Exponent::Infinity) => v.x.abs().max(v.y.abs()),
            NormKind::PNorm(Exponent::Finite(p)) => finite_p_norm(v, *p),
            NormKind::Polygon { .. } | NormKind::MaxOfFunctionals { .. } => self
                .functionals
                .iter()
                .fold(0.0, |acc, f| acc.max(f.dot(v).abs())),
            NormKind::PiecewiseQuadrant { pos, neg } => {
                if v.x * v.y >= 0.0 {
                    pos.eval(v)
                } else {
                    neg.eval(v)
                }
            }
        }
    }

    /// Radial projection of the direction at `angle` onto the unit sphere.
    ///
    /// Angles in `[π, 2π)` are mapped to the exact negation of the point at
    /// `angle − π`, so antipodes are bitwise antipodal.
    pub fn sphere_point(&self, angle: f64) -> SpherePoint {
        let mut a = angle.rem_euclid(TAU);
        if a >= TAU {
            a = 0.0;
        }
        let coords = if a >= PI {
            -self.radial(a - PI)
        } else {
            self.radial(a)
        };
        SpherePoint { angle: a, coords }
    }

    #[inline]
    fn radial(&self, angle: f64) -> Point2 {
        let d = Point2::direction(angle);
        d * (1.0 / self.evaluate(d))
    }

    /// Byte-stable `key=value` serialization, one key per line.
    pub fn to_spec_string(&self) -> String {
        match &self.kind {
            NormKind::Euclidean => "kind=euclid\n".to_owned(),
            NormKind::PNorm(e) => {
                let p = match e {
                    Exponent::One => "1".to_owned(),
                    Exponent::Finite(p) => format!("{p}"),
                    Exponent::Infinity => "inf".to_owned(),
                };
                format!("kind=pnorm\np={p}\n")
            }
            NormKind::Polygon { vertices } => {
                format!("kind=polygon\nvertices={}\n", format_pairs(vertices))
            }
            NormKind::MaxOfFunctionals { rows } => {
                format!("kind=max_functionals\nrows={}\n", format_pairs(rows))
            }
            NormKind::PiecewiseQuadrant { pos, neg } => format!(
                "kind=piecewise_quadrant\npos={}\nneg={}\n",
                pos.name(),
                neg.name()
            ),
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// `±u, ±v, ±(u+v)`: an affine-regular hexagon for independent `u`, `v`.
pub fn hexagon_vertices(u: Point2, v: Point2) -> Vec<Point2> {
    vec![u, u + v, v, -u, -(u + v), -v]
}

#[inline]
fn finite_p_norm(v: Point2, p: f64) -> f64 {
    if p == 2.0 {
        return v.x.hypot(v.y);
    }
    let (a, b) = (v.x.abs(), v.y.abs());
    let m = a.max(b);
    if m == 0.0 {
        return 0.0;
    }
    m * ((a / m).powf(p) + (b / m).powf(p)).powf(1.0 / p)
}

fn format_pairs(points: &[Point2]) -> String {
    // `+ 0.0` folds −0 into 0
    let body: Vec<String> = points
        .iter()
        .map(|p| format!("({},{})", p.x + 0.0, p.y + 0.0))
        .collect();
    format!("[{}]", body.join(","))
}

fn default_label(kind: &NormKind) -> String {
    match kind {
        NormKind::Euclidean => "euclid".to_owned(),
        NormKind::PNorm(Exponent::One) => "l1".to_owned(),
        NormKind::PNorm(Exponent::Infinity) => "linf".to_owned(),
        NormKind::PNorm(Exponent::Finite(p)) => format!("l{p}"),
        NormKind::Polygon { vertices } => format!("polygon[{}]", vertices.len()),
        NormKind::MaxOfFunctionals { rows } => format!("max_functionals[{}]", rows.len()),
        NormKind::PiecewiseQuadrant { pos, neg } => format!("{}-{}", pos.name(), neg.name()),
    }
}

/// Built-in norms by alias: `euclid`, `l1`, `linf`, `lp:<p>` (or `l<p>`),
/// `linf-l1`, `sqrt2max`, `hexagon`.
pub fn norm_from_alias(alias: &str) -> Option<Result<Norm, NormError>> {
    let alias = alias.trim();
    let norm = match alias {
        "euclid" | "l2" => Norm::euclidean(),
        "l1" => Norm::l1(),
        "linf" => Norm::linf(),
        "linf-l1" => Norm::linf_l1(),
        "sqrt2max" => Norm::sqrt2_max(),
        "hexagon" => Norm::hexagon(),
        other => {
            let p = other.strip_prefix("lp:").or_else(|| other.strip_prefix('l'))?;
            let p: f64 = if p == "inf" {
                f64::INFINITY
            } else {
                p.parse().ok()?
            };
            return Some(Norm::p_norm(p));
        }
    };
    Some(Ok(norm))
}

/// The norms every example and acceptance check in this crate runs against.
pub fn zoo() -> Vec<Norm> {
    vec![
        Norm::euclidean(),
        Norm::l1(),
        Norm::linf(),
        Norm::p_norm(4.0).unwrap(),
        Norm::p_norm(10.0).unwrap(),
        Norm::linf_l1(),
        Norm::sqrt2_max(),
        Norm::hexagon(),
    ]
}
