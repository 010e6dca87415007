//! Linear algebra of pseudo-Galilean 3-space.
//!
//! The first coordinate is the absolute (non-isotropic) direction. The
//! metric degenerates along it: two vectors that are not both isotropic
//! only see their first components, while isotropic vectors carry the
//! indefinite form `x2 y2 - x3 y3`.
//!
//! Branch selection compares against `0.0` exactly. Callers build vectors
//! whose isotropic components are structural zeros, so no tolerance is
//! applied here.

use serde::Serialize;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct PGVec3 {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

/// Causal character of a vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CausalClass {
    NonIsotropic,
    Spacelike,
    Timelike,
    Lightlike,
}

impl CausalClass {
    pub fn as_str(self) -> &'static str {
        match self {
            CausalClass::NonIsotropic => "nonisotropic",
            CausalClass::Spacelike => "spacelike",
            CausalClass::Timelike => "timelike",
            CausalClass::Lightlike => "lightlike",
        }
    }
}

impl std::fmt::Display for CausalClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl PGVec3 {
    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        PGVec3 { x1, x2, x3 }
    }

    pub fn is_isotropic(&self) -> bool {
        self.x1 == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    pub fn dot(&self, other: &PGVec3) -> f64 {
        pg_dot(self, other)
    }

    pub fn norm(&self) -> f64 {
        pg_norm(self)
    }

    pub fn cross(&self, other: &PGVec3) -> PGVec3 {
        pg_cross(self, other)
    }

    pub fn classify(&self) -> CausalClass {
        classify(self)
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }
}

/// Pseudo-Galilean scalar product.
pub fn pg_dot(x: &PGVec3, y: &PGVec3) -> f64 {
    if x.x1 != 0.0 || y.x1 != 0.0 {
        x.x1 * y.x1
    } else {
        x.x2 * y.x2 - x.x3 * y.x3
    }
}

/// `sqrt(|<X, X>|)`; zero for lightlike isotropic vectors.
pub fn pg_norm(x: &PGVec3) -> f64 {
    pg_dot(x, x).abs().sqrt()
}

pub fn pg_distance(p: &PGVec3, q: &PGVec3) -> f64 {
    if p.x1 != q.x1 {
        (q.x1 - p.x1).abs()
    } else {
        let d2 = q.x2 - p.x2;
        let d3 = q.x3 - p.x3;
        (d2 * d2 - d3 * d3).abs().sqrt()
    }
}

/// Formal determinant with first row `(0, -e2, e3)`.
///
/// Expanding along the first row gives `(0, x1 y3 - x3 y1, x1 y2 - x2 y1)`,
/// so the result is always isotropic.
pub fn pg_cross(x: &PGVec3, y: &PGVec3) -> PGVec3 {
    PGVec3 {
        x1: 0.0,
        x2: x.x1 * y.x3 - x.x3 * y.x1,
        x3: x.x1 * y.x2 - x.x2 * y.x1,
    }
}

pub fn classify(x: &PGVec3) -> CausalClass {
    if x.x1 != 0.0 {
        return CausalClass::NonIsotropic;
    }
    let s = x.x2 * x.x2 - x.x3 * x.x3;
    if s > 0.0 {
        CausalClass::Spacelike
    } else if s < 0.0 {
        CausalClass::Timelike
    } else {
        CausalClass::Lightlike
    }
}

impl Add for PGVec3 {
    type Output = PGVec3;
    fn add(self, rhs: PGVec3) -> PGVec3 {
        PGVec3::new(self.x1 + rhs.x1, self.x2 + rhs.x2, self.x3 + rhs.x3)
    }
}

impl Sub for PGVec3 {
    type Output = PGVec3;
    fn sub(self, rhs: PGVec3) -> PGVec3 {
        PGVec3::new(self.x1 - rhs.x1, self.x2 - rhs.x2, self.x3 - rhs.x3)
    }
}

impl Neg for PGVec3 {
    type Output = PGVec3;
    fn neg(self) -> PGVec3 {
        PGVec3::new(-self.x1, -self.x2, -self.x3)
    }
}

impl Mul<f64> for PGVec3 {
    type Output = PGVec3;
    fn mul(self, s: f64) -> PGVec3 {
        PGVec3::new(self.x1 * s, self.x2 * s, self.x3 * s)
    }
}

impl Mul<PGVec3> for f64 {
    type Output = PGVec3;
    fn mul(self, v: PGVec3) -> PGVec3 {
        v * self
    }
}

impl Div<f64> for PGVec3 {
    type Output = PGVec3;
    fn div(self, s: f64) -> PGVec3 {
        PGVec3::new(self.x1 / s, self.x2 / s, self.x3 / s)
    }
}
