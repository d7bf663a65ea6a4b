//! Minimal planar vector type shared by every module.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ZERO: Point2 = Point2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit Euclidean direction at `angle` radians.
    #[inline]
    pub fn direction(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self { x: c, y: s }
    }

    #[inline]
    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn euclidean_len(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Polar angle in `[0, 2π)`.
    pub fn angle(self) -> f64 {
        let a = self.y.atan2(self.x);
        if a < 0.0 {
            a + std::f64::consts::TAU
        } else {
            a
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    #[inline]
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    #[inline]
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    #[inline]
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    #[inline]
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl From<(f64, f64)> for Point2 {
    fn from((x, y): (f64, f64)) -> Self {
        Point2::new(x, y)
    }
}

/// Row-major 2×2 linear map.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Linear2(pub [[f64; 2]; 2]);

impl Linear2 {
    pub const IDENTITY: Linear2 = Linear2([[1.0, 0.0], [0.0, 1.0]]);

    pub fn diag(a: f64, b: f64) -> Self {
        Linear2([[a, 0.0], [0.0, b]])
    }

    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Linear2([[c, -s], [s, c]])
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn apply(&self, p: Point2) -> Point2 {
        let m = &self.0;
        Point2::new(m[0][0] * p.x + m[0][1] * p.y, m[1][0] * p.x + m[1][1] * p.y)
    }

    pub fn compose(&self, rhs: &Linear2) -> Linear2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[0.0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Linear2(out)
    }

    /// Ratio of singular values, `σ_max / σ_min`. Infinite for singular maps.
    pub fn condition_number(&self) -> f64 {
        let m = &self.0;
        let frob2 = m[0][0].powi(2) + m[0][1].powi(2) + m[1][0].powi(2) + m[1][1].powi(2);
        let det = self.det().abs();
        if det == 0.0 {
            return f64::INFINITY;
        }
        // σ₁² + σ₂² = ‖M‖_F², σ₁σ₂ = |det M|
        let disc = (frob2 * frob2 - 4.0 * det * det).max(0.0).sqrt();
        let s_max = ((frob2 + disc) / 2.0).sqrt();
        let s_min = det / s_max;
        s_max / s_min
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn condition_number_of_diag() {
        assert!((Linear2::diag(2.0, 1.0).condition_number() - 2.0).abs() < 1e-12);
        assert!((Linear2::rotation(0.3).condition_number() - 1.0).abs() < 1e-12);
        let m = Linear2::rotation(0.4)
            .compose(&Linear2::diag(5.0, 0.5))
            .compose(&Linear2::rotation(-1.1));
        assert!((m.condition_number() - 10.0).abs() < 1e-9);
    }

    #[test]
    fn angle_in_range() {
        assert_eq!(Point2::new(1.0, 0.0).angle(), 0.0);
        let a = Point2::new(0.0, -1.0).angle();
        assert!((a - 1.5 * std::f64::consts::PI).abs() < 1e-15);
    }
}
