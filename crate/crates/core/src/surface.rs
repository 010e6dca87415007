//! Affine factorable surfaces of the second kind,
//! `phi(x, z) = (x, f(x) g(z + a x), z)`.
//!
//! Derivatives of `g` are always taken in its own argument `v = z + a x`;
//! the chain-rule factors of `a` are applied here, never inside [`C2Fn`].

use crate::error::{Error, Result};
use crate::funcs::{C2Fn, Jet};
use crate::pg_core::PGVec3;
use serde::{Deserialize, Serialize};

/// Closed parameter rectangle `[x_min, x_max] x [z_min, z_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x_min: f64,
    pub x_max: f64,
    pub z_min: f64,
    pub z_max: f64,
}

impl Rect {
    pub const fn new(x_min: f64, x_max: f64, z_min: f64, z_max: f64) -> Self {
        Rect {
            x_min,
            x_max,
            z_min,
            z_max,
        }
    }

    pub fn contains(&self, x: f64, z: f64) -> bool {
        self.x_min <= x && x <= self.x_max && self.z_min <= z && z <= self.z_max
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x_min, self.x_max, self.z_min, self.z_max]
    }

    /// Range of `z + a x` over the rectangle.
    pub fn shear_range(&self, a: f64) -> (f64, f64) {
        let corners = [
            self.z_min + a * self.x_min,
            self.z_min + a * self.x_max,
            self.z_max + a * self.x_min,
            self.z_max + a * self.x_max,
        ];
        corners
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &c| {
                (lo.min(c), hi.max(c))
            })
    }
}

/// Jets of both factors at one surface point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceJets {
    /// `f`, `f'`, `f''` at `x`.
    pub f: Jet,
    /// `g`, `g'`, `g''` at `v = z + a x`.
    pub g: Jet,
    pub a: f64,
}

impl SurfaceJets {
    /// `f g'`, the isotropic slope of the normal.
    pub fn fg1(&self) -> f64 {
        self.f.v * self.g.d1
    }

    /// `(f g')^2`.
    pub fn fg1_sq(&self) -> f64 {
        let s = self.fg1();
        s * s
    }
}

/// Partial derivatives of the parametrization at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Partials {
    pub phi_x: PGVec3,
    pub phi_z: PGVec3,
    pub phi_xx: PGVec3,
    pub phi_xz: PGVec3,
    pub phi_zz: PGVec3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorableSurface {
    pub f: C2Fn,
    pub g: C2Fn,
    /// Shear constant; `a = 0` is the plain second-kind surface.
    pub a: f64,
    pub domain: Rect,
}

impl FactorableSurface {
    pub fn new(f: C2Fn, g: C2Fn, a: f64, domain: Rect) -> Self {
        FactorableSurface { f, g, a, domain }
    }

    pub fn with_domain(mut self, domain: Rect) -> Self {
        self.domain = domain;
        self
    }

    pub fn jets(&self, x: f64, z: f64) -> Result<SurfaceJets> {
        if !self.domain.contains(x, z) {
            return Err(Error::OutOfDomain { x, z });
        }
        let f = self.f.jet(x)?;
        let g = self.g.jet(z + self.a * x)?;
        Ok(SurfaceJets { f, g, a: self.a })
    }

    /// Graph height `y = f(x) g(z + a x)`.
    pub fn height(&self, x: f64, z: f64) -> Result<f64> {
        let j = self.jets(x, z)?;
        Ok(j.f.v * j.g.v)
    }

    pub fn position(&self, x: f64, z: f64) -> Result<PGVec3> {
        Ok(PGVec3::new(x, self.height(x, z)?, z))
    }

    pub fn partials(&self, x: f64, z: f64) -> Result<Partials> {
        Ok(partials_from_jets(&self.jets(x, z)?))
    }
}

pub fn partials_from_jets(j: &SurfaceJets) -> Partials {
    let (f, g, a) = (j.f, j.g, j.a);
    Partials {
        phi_x: PGVec3::new(1.0, f.d1 * g.v + a * f.v * g.d1, 0.0),
        phi_z: PGVec3::new(0.0, f.v * g.d1, 1.0),
        phi_xx: PGVec3::new(
            0.0,
            f.d2 * g.v + 2.0 * a * f.d1 * g.d1 + a * a * f.v * g.d2,
            0.0,
        ),
        phi_xz: PGVec3::new(0.0, f.d1 * g.d1 + a * f.v * g.d2, 0.0),
        phi_zz: PGVec3::new(0.0, f.v * g.d2, 0.0),
    }
}
