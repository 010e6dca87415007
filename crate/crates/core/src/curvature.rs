//! Fundamental forms and curvatures of affine factorable surfaces.
//!
//! Two independent routes are provided:
//!
//! * the closed forms in `f, g` and their derivatives ([`gauss_closed`],
//!   [`mean_closed`], [`omega`]);
//! * the general route ([`curvature_general`]), which builds the first and
//!   second fundamental forms from the surface partials with the
//!   pseudo-Galilean scalar and cross products and applies
//!   `K = (LN - M^2)/(EG - F^2)`, `H = (EN + GL - 2FM)/(2|EG - F^2|)`.
//!
//! The normal `phi_x ^ phi_z = (0, 1, f g')` has squared norm `1 - (f g')^2`.
//! `K` stays real on both sides of the cone `(f g')^2 = 1`; `H`, `D` and the
//! second form require `(f g')^2 < 1`. Points with `|1 - (f g')^2|` below
//! [`LIGHTLIKE_EPS`] are treated as lightlike.

use crate::error::{Error, Result};
use crate::pg_core::{pg_cross, pg_dot, CausalClass, PGVec3};
use crate::surface::{partials_from_jets, FactorableSurface, SurfaceJets};
use serde::Serialize;

pub const LIGHTLIKE_EPS: f64 = 1e-12;

/// Relative size below which the `H = A K` denominator counts as zero.
const RELATION_DEGENERATE_REL: f64 = 1e-12;

/// Coefficients of both fundamental forms at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FormBundle {
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "F")]
    pub f: f64,
    #[serde(rename = "G")]
    pub g: f64,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "M")]
    pub m: f64,
    #[serde(rename = "N")]
    pub n: f64,
    #[serde(rename = "D")]
    pub d: f64,
    pub normal: PGVec3,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvaturePoint {
    #[serde(rename = "K")]
    pub k: f64,
    /// Absent where the normal is timelike.
    #[serde(rename = "H")]
    pub h: Option<f64>,
    pub omega: f64,
    pub normal_class: CausalClass,
}

/// Causal class of the surface normal, with the lightlike band applied.
pub fn normal_class(j: &SurfaceJets) -> CausalClass {
    let s = 1.0 - j.fg1_sq();
    if s.abs() < LIGHTLIKE_EPS {
        CausalClass::Lightlike
    } else if s > 0.0 {
        CausalClass::Spacelike
    } else {
        CausalClass::Timelike
    }
}

fn require_spacelike(j: &SurfaceJets, x: f64, z: f64) -> Result<()> {
    match normal_class(j) {
        CausalClass::Lightlike => Err(Error::LightlikeNormal {
            x,
            z,
            fg1_sq: j.fg1_sq(),
        }),
        CausalClass::Timelike => Err(Error::TimelikeNormal {
            x,
            z,
            fg1_sq: j.fg1_sq(),
        }),
        _ => Ok(()),
    }
}

fn require_not_lightlike(j: &SurfaceJets, x: f64, z: f64) -> Result<()> {
    if normal_class(j) == CausalClass::Lightlike {
        return Err(Error::LightlikeNormal {
            x,
            z,
            fg1_sq: j.fg1_sq(),
        });
    }
    Ok(())
}

/// Forms via partials, cross product and scalar products.
pub fn forms_from_jets(j: &SurfaceJets, x: f64, z: f64) -> Result<FormBundle> {
    require_spacelike(j, x, z)?;
    let p = partials_from_jets(j);
    let cross = pg_cross(&p.phi_x, &p.phi_z);
    let d = pg_dot(&cross, &cross).abs().sqrt();
    let normal = cross / d;
    Ok(FormBundle {
        e: pg_dot(&p.phi_x, &p.phi_x),
        f: pg_dot(&p.phi_x, &p.phi_z),
        g: pg_dot(&p.phi_z, &p.phi_z),
        l: pg_dot(&p.phi_xx, &normal),
        m: pg_dot(&p.phi_xz, &normal),
        n: pg_dot(&p.phi_zz, &normal),
        d,
        normal,
    })
}

pub fn form_bundle(s: &FactorableSurface, x: f64, z: f64) -> Result<FormBundle> {
    forms_from_jets(&s.jets(x, z)?, x, z)
}

/// `K = (f'^2 g'^2 - f'' f g'' g) / (1 - (f g')^2)^2`.
pub fn gauss_from_jets(j: &SurfaceJets, x: f64, z: f64) -> Result<f64> {
    require_not_lightlike(j, x, z)?;
    let (f, g) = (j.f, j.g);
    let num = gauss_numerator(f.d1, g.d1, f.d2, f.v, g.d2, g.v);
    let s = 1.0 - j.fg1_sq();
    Ok(num / (s * s))
}

/// Exact product as an unevaluated sum `hi + lo`.
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let hi = a * b;
    (hi, a.mul_add(b, -hi))
}

/// `(f1 g1)^2 - (f2 f0)(g2 g0)` with products carried in double-double.
/// The two terms cancel on flat surfaces, and near the light cone the
/// division by `(1 - q)^2` magnifies whatever rounding is left.
fn gauss_numerator(f1: f64, g1: f64, f2: f64, f0: f64, g2: f64, g0: f64) -> f64 {
    let (sh, sl) = two_prod(f1, g1);
    let (ah, al) = two_prod(sh, sh);
    let al = al + 2.0 * sh * sl;
    let (ph, pl) = two_prod(f2, f0);
    let (qh, ql) = two_prod(g2, g0);
    let (bh, bl) = two_prod(ph, qh);
    let bl = bl + ph * ql + pl * qh;
    (ah - bh) + (al - bl)
}

pub fn gauss_closed(s: &FactorableSurface, x: f64, z: f64) -> Result<f64> {
    gauss_from_jets(&s.jets(x, z)?, x, z)
}

/// Six-term numerator of the mean curvature.
pub fn omega_from_jets(j: &SurfaceJets) -> f64 {
    let (f, g, a) = (j.f, j.g, j.a);
    let (f0, f1, f2) = (f.v, f.d1, f.d2);
    let (g0, g1, g2) = (g.v, g.d1, g.d2);
    (1.0 - a * a) * f0 * g2 - f2 * g0 - 2.0 * a * f1 * g1
        + f0 * f0 * f2 * g1 * g1 * g0
        + 2.0 * a * f1 * f0 * f0 * g1 * g1 * g1
        + a * a * f0 * f0 * f0 * g1 * g1 * g2
}

pub fn omega(s: &FactorableSurface, x: f64, z: f64) -> Result<f64> {
    Ok(omega_from_jets(&s.jets(x, z)?))
}

/// `H = Omega / (2 D^3)`.
pub fn mean_from_jets(j: &SurfaceJets, x: f64, z: f64) -> Result<f64> {
    require_spacelike(j, x, z)?;
    let s = 1.0 - j.fg1_sq();
    Ok(omega_from_jets(j) / (2.0 * s * s.sqrt()))
}

pub fn mean_closed(s: &FactorableSurface, x: f64, z: f64) -> Result<f64> {
    mean_from_jets(&s.jets(x, z)?, x, z)
}

/// `(K, H)` from the fundamental forms.
pub fn general_from_jets(j: &SurfaceJets, x: f64, z: f64) -> Result<(f64, f64)> {
    let b = forms_from_jets(j, x, z)?;
    let det = b.e * b.g - b.f * b.f;
    let k = (b.l * b.n - b.m * b.m) / det;
    let h = (b.e * b.n + b.g * b.l - 2.0 * b.f * b.m) / (2.0 * det.abs());
    Ok((k, h))
}

pub fn curvature_general(s: &FactorableSurface, x: f64, z: f64) -> Result<(f64, f64)> {
    general_from_jets(&s.jets(x, z)?, x, z)
}

/// The factor `A(x, z)` of the relation `H = A K`:
/// `A = (D^3 (a^2 f g'' + 2a f' g' + f'' g) - f g'' D) / (f'' f g'' g - f'^2 g'^2)`.
///
/// Direct algebra gives `H / K = A / 2`; this function does not absorb the
/// factor, callers measure it.
pub fn relation_a_from_jets(j: &SurfaceJets, x: f64, z: f64) -> Result<f64> {
    require_spacelike(j, x, z)?;
    let (f, g, a) = (j.f, j.g, j.a);
    let (den, scale) = relation_denominator(j);
    if den == 0.0 || den.abs() <= RELATION_DEGENERATE_REL * scale {
        return Err(Error::DegenerateRelation {
            reason: format!(
                "at ({x}, {z}) the denominator f''f g''g - f'^2 g'^2 = {den:e} vanishes (K = 0)"
            ),
        });
    }
    let d = (1.0 - j.fg1_sq()).sqrt();
    let second = a * a * f.v * g.d2 + 2.0 * a * f.d1 * g.d1 + f.d2 * g.v;
    Ok((d * d * d * second - f.v * g.d2 * d) / den)
}

/// `f'' f g'' g - f'^2 g'^2` and the sum of the magnitudes of its two terms.
pub fn relation_denominator(j: &SurfaceJets) -> (f64, f64) {
    let (f, g) = (j.f, j.g);
    let cross_term = (f.d2 * f.v) * (g.d2 * g.v);
    let slopes = f.d1 * g.d1;
    let slope_term = slopes * slopes;
    (cross_term - slope_term, cross_term.abs() + slope_term.abs())
}

pub fn relation_a(s: &FactorableSurface, x: f64, z: f64) -> Result<f64> {
    relation_a_from_jets(&s.jets(x, z)?, x, z)
}

pub fn evaluate_jets(j: &SurfaceJets, x: f64, z: f64) -> Result<CurvaturePoint> {
    let k = gauss_from_jets(j, x, z)?;
    let class = normal_class(j);
    let h = match class {
        CausalClass::Spacelike => Some(mean_from_jets(j, x, z)?),
        _ => None,
    };
    Ok(CurvaturePoint {
        k,
        h,
        omega: omega_from_jets(j),
        normal_class: class,
    })
}

/// `K` everywhere off the cone, `H` only where the normal is spacelike.
pub fn evaluate(s: &FactorableSurface, x: f64, z: f64) -> Result<CurvaturePoint> {
    evaluate_jets(&s.jets(x, z)?, x, z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcs::C2Fn;
    use crate::surface::Rect;

    const BIG: Rect = Rect::new(-10.0, 10.0, -10.0, 10.0);

    fn surf(f: C2Fn, g: C2Fn, a: f64) -> FactorableSurface {
        FactorableSurface::new(f, g, a, BIG)
    }

    #[test]
    fn plane_forms() {
        let s = surf(C2Fn::constant(1.0), C2Fn::linear(0.0, 1.0), 1.0);
        let b = form_bundle(&s, 0.3, -0.4).unwrap();
        assert_eq!((b.e, b.f, b.g), (1.0, 0.0, -1.0));
        assert_eq!((b.l, b.m, b.n, b.d), (0.0, 0.0, 0.0, 1.0));
        assert_eq!(mean_closed(&s, 0.3, -0.4).unwrap(), 0.0);
        assert_eq!(curvature_general(&s, 0.3, -0.4).unwrap(), (0.0, 0.0));
        assert_eq!(omega(&s, 1.0, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn sqrt_slope_example_forms() {
        // f = f0, g' = sqrt(3)/(2 f0), a = 2: (f g')^2 = 3/4.
        let f0 = 1.7;
        let s = surf(
            C2Fn::constant(f0),
            C2Fn::linear(3f64.sqrt() / (2.0 * f0), 9.0 / f0),
            2.0,
        );
        let b = form_bundle(&s, 0.5, 1.0).unwrap();
        assert!((b.g - (-0.25)).abs() < 1e-15);
        assert!((b.d - 0.5).abs() < 1e-15);
        assert_eq!((b.l, b.m, b.n), (0.0, 0.0, 0.0));
    }

    #[test]
    fn tanh_example_at_origin() {
        let s = surf(C2Fn::tanh(1.0, 1.0, 0.0), C2Fn::linear(1.0, 0.0), 10.0);
        let b = form_bundle(&s, 0.0, 0.0).unwrap();
        assert_eq!(b.d, 1.0);
        assert_eq!(b.n, 0.0);
        assert_eq!(b.m, 1.0);
        // L = 2 a f' g' / D = 20, LN - M^2 = -1, EG - F^2 = -1.
        assert_eq!(b.l, 20.0);
        let (k, _) = curvature_general(&s, 0.0, 0.0).unwrap();
        assert_eq!(k, 1.0);
        assert_eq!(gauss_closed(&s, 0.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn tanh_example_constant_gauss() {
        let s = surf(C2Fn::tanh(1.0, 1.0, 0.0), C2Fn::linear(1.0, 0.0), 10.0);
        for &(x, z) in &[(-1.0, -1.0), (-0.3, 0.8), (0.9, 0.1), (1.0, 1.0)] {
            assert!((gauss_closed(&s, x, z).unwrap() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn constant_factor_is_flat() {
        let s = surf(C2Fn::constant(0.3), C2Fn::exp(1.0, 0.5), 2.0);
        assert_eq!(gauss_closed(&s, 0.1, 0.2).unwrap(), 0.0);
        let s = surf(C2Fn::tanh(2.0, 1.0, 0.0), C2Fn::constant(0.4), 2.0);
        assert_eq!(gauss_closed(&s, 0.1, 0.2).unwrap(), 0.0);
    }

    #[test]
    fn parabola_mean_is_one() {
        let s = surf(C2Fn::quadratic(-1.0, 2.0, 1.0), C2Fn::constant(1.0), 3.0);
        for &(x, z) in &[(-1.0, 0.0), (0.0, 0.0), (0.7, -0.2)] {
            assert_eq!(omega(&s, x, z).unwrap(), 2.0);
            assert_eq!(mean_closed(&s, x, z).unwrap(), 1.0);
            assert_eq!(gauss_closed(&s, x, z).unwrap(), 0.0);
        }
    }

    #[test]
    fn exponential_example_flat_on_both_sides_of_cone() {
        let s = surf(C2Fn::exp(8.0, 5.0), C2Fn::exp(1.0, 1.0), 1.0);
        // spacelike (8 e^{-6} < 1) and timelike (8 e^{2} > 1) points
        for &(x, z) in &[(-1.0, 0.0), (1.0, 2.0)] {
            assert!(gauss_closed(&s, x, z).unwrap().abs() <= 1e-9);
        }
        assert!(matches!(
            mean_closed(&s, 1.0, 2.0),
            Err(Error::TimelikeNormal { .. })
        ));
        assert!(matches!(
            form_bundle(&s, 1.0, 2.0),
            Err(Error::TimelikeNormal { .. })
        ));
        let p = evaluate(&s, 1.0, 2.0).unwrap();
        assert_eq!(p.normal_class, CausalClass::Timelike);
        assert!(p.h.is_none());
    }

    #[test]
    fn lightlike_rejected() {
        // f = 1/2, g' = 2: f g' = 1 identically
        let s = surf(C2Fn::constant(0.5), C2Fn::linear(2.0, 1.0), 1.0);
        assert!(matches!(
            gauss_closed(&s, 0.0, 0.0),
            Err(Error::LightlikeNormal { .. })
        ));
        assert!(matches!(
            mean_closed(&s, 0.0, 0.0),
            Err(Error::LightlikeNormal { .. })
        ));
        assert!(matches!(
            form_bundle(&s, 0.0, 0.0),
            Err(Error::LightlikeNormal { .. })
        ));
        assert!(matches!(
            evaluate(&s, 0.0, 0.0),
            Err(Error::LightlikeNormal { .. })
        ));
    }

    #[test]
    fn relation_degenerate_cases() {
        let flat = surf(C2Fn::constant(0.5), C2Fn::tanh(1.0, 1.0, 0.0), 1.0);
        assert!(matches!(
            relation_a(&flat, 0.2, 0.1),
            Err(Error::DegenerateRelation { .. })
        ));
        let parabola = surf(C2Fn::quadratic(-1.0, 2.0, 1.0), C2Fn::constant(1.0), 1.0);
        assert!(matches!(
            relation_a(&parabola, 0.2, 0.1),
            Err(Error::DegenerateRelation { .. })
        ));
        let exp_flat = surf(C2Fn::exp(0.1, 0.7), C2Fn::exp(1.0, 0.3), 1.0);
        assert!(matches!(
            relation_a(&exp_flat, 0.2, 0.1),
            Err(Error::DegenerateRelation { .. })
        ));
    }

    #[test]
    fn relation_ratio_is_half_on_tanh_example() {
        let s = surf(C2Fn::tanh(1.0, 1.0, 0.0), C2Fn::linear(1.0, 0.0), 10.0);
        let (x, z) = (0.4, 0.3);
        let a = relation_a(&s, x, z).unwrap();
        let k = gauss_closed(&s, x, z).unwrap();
        let h = mean_closed(&s, x, z).unwrap();
        assert!((h / (a * k) - 0.5).abs() < 1e-12);
    }
}
