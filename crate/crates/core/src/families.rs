//! Closed-form solution families of the flat, minimal, constant-`K` and
//! constant-`H` classifications, each paired with the curvature invariant
//! it is claimed to satisfy.
//!
//! Constant names: `c5, c6, c4` for the exponential family, `c7..c10` for
//! the power family. The linear-times-linear minimal family has separate
//! offsets `b12_f` and `b12_g` for its two factors.

use crate::error::{Error, Result};
use crate::funcs::C2Fn;
use crate::surface::{FactorableSurface, Rect};
use serde::{Serialize, Serializer};
use std::f64::consts::PI;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    /// `y = f0 g(z + a x)`.
    FlatFConst { f0: f64, g: C2Fn, a: f64 },
    /// `y = g0 f(x)`.
    FlatGConst { g0: f64, f: C2Fn, a: f64 },
    /// `y = c5 e^{c6 x + c4 z}` from `f = c5 e^{(c6 - a c4) x}`, `g = e^{c4 v}`.
    FlatExp { c5: f64, c6: f64, c4: f64, a: f64 },
    /// `f = [(1-k)(c7 x + c8)]^{1/(1-k)}`, `g = [((k-1)/k)(c9 v + c10)]^{k/(k-1)}`.
    FlatPower {
        k: f64,
        c7: f64,
        c8: f64,
        c9: f64,
        c10: f64,
        a: f64,
    },
    /// `y = f0 (b1 v + b2)`.
    MinLinearG { f0: f64, b1: f64, b2: f64, a: f64 },
    /// `y = f0 (sqrt((a^2-1)/(a^2 f0^2)) v + b3)`, needs `a^2 > 1`.
    MinSqrtG { f0: f64, b3: f64, a: f64 },
    /// `y = g0 (b4 x + b5)`.
    MinLinearF { g0: f64, b4: f64, b5: f64, a: f64 },
    /// `y = b8 (b6 x + b7)`.
    MinFLinGConst { b6: f64, b7: f64, b8: f64, a: f64 },
    /// `y = (b6 x + b7)(b9 v + b10)`.
    MinFLinGLin {
        b6: f64,
        b7: f64,
        b9: f64,
        b10: f64,
        a: f64,
    },
    /// `y = (b12_f x + b13)(b11 v + b12_g)`.
    MinGLinFLin {
        b11: f64,
        b12_g: f64,
        b12_f: f64,
        b13: f64,
        a: f64,
    },
    /// `y = (1/b11)(b11 v + b12)`; `f g' = 1` identically.
    MinGLinFConst { b11: f64, b12: f64, a: f64 },
    /// `g = g0 v + lambda2`, `f = sign (1/g0) tanh(sqrt(K0) x - sign g0 lambda1)`.
    ConstK {
        k0: f64,
        g0: f64,
        lambda1: f64,
        lambda2: f64,
        a: f64,
        sign: f64,
    },
    /// `f = f0`, `g = sign sqrt(9 H0^2 - a^4 f0^2 lambda3^2)/(3 f0 H0) v + lambda4`.
    ConstHA {
        h0: f64,
        f0: f64,
        lambda3: f64,
        lambda4: f64,
        a: f64,
        sign: f64,
    },
    /// `g = g0`, `f = -(H0/g0) x^2 + lambda5 x + lambda6`.
    ConstHB {
        h0: f64,
        g0: f64,
        lambda5: f64,
        lambda6: f64,
        a: f64,
    },
}

/// Curvature target a family claims.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InvariantKind {
    KZero,
    HZero,
    KConst(f64),
    HConst(f64),
}

impl InvariantKind {
    pub fn targets_gauss(&self) -> bool {
        matches!(self, InvariantKind::KZero | InvariantKind::KConst(_))
    }

    pub fn target_value(&self) -> f64 {
        match *self {
            InvariantKind::KZero | InvariantKind::HZero => 0.0,
            InvariantKind::KConst(v) | InvariantKind::HConst(v) => v,
        }
    }

    pub fn is_zero_target(&self) -> bool {
        matches!(self, InvariantKind::KZero | InvariantKind::HZero)
    }

    pub fn quantity(&self) -> &'static str {
        if self.targets_gauss() {
            "K"
        } else {
            "H"
        }
    }
}

impl fmt::Display for InvariantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantKind::KZero => f.write_str("K=0"),
            InvariantKind::HZero => f.write_str("H=0"),
            InvariantKind::KConst(v) => write!(f, "K={v}"),
            InvariantKind::HConst(v) => write!(f, "H={v}"),
        }
    }
}

impl Serialize for InvariantKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectedInvariant {
    pub kind: InvariantKind,
    /// The family's own derivation is doubtful; measure and report
    /// instead of passing or failing.
    pub disputed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ExpectedInvariant {
    fn plain(kind: InvariantKind) -> Self {
        ExpectedInvariant {
            kind,
            disputed: false,
            note: None,
        }
    }

    fn disputed(kind: InvariantKind, note: &str) -> Self {
        ExpectedInvariant {
            kind,
            disputed: true,
            note: Some(note.to_string()),
        }
    }
}

pub const FAMILY_NAMES: [&str; 14] = [
    "flat-f-const",
    "flat-g-const",
    "flat-exp",
    "flat-power",
    "min-linear-g",
    "min-sqrt-g",
    "min-linear-f",
    "min-f-lin-g-const",
    "min-f-lin-g-lin",
    "min-g-lin-f-lin",
    "min-g-lin-f-const",
    "const-k",
    "const-h-a",
    "const-h-b",
];

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        use FamilySpec::*;
        match self {
            FlatFConst { .. } => "flat-f-const",
            FlatGConst { .. } => "flat-g-const",
            FlatExp { .. } => "flat-exp",
            FlatPower { .. } => "flat-power",
            MinLinearG { .. } => "min-linear-g",
            MinSqrtG { .. } => "min-sqrt-g",
            MinLinearF { .. } => "min-linear-f",
            MinFLinGConst { .. } => "min-f-lin-g-const",
            MinFLinGLin { .. } => "min-f-lin-g-lin",
            MinGLinFLin { .. } => "min-g-lin-f-lin",
            MinGLinFConst { .. } => "min-g-lin-f-const",
            ConstK { .. } => "const-k",
            ConstHA { .. } => "const-h-a",
            ConstHB { .. } => "const-h-b",
        }
    }

    /// Named numeric constants, in declaration order.
    fn slots(&mut self) -> Vec<(&'static str, &mut f64)> {
        use FamilySpec::*;
        match self {
            FlatFConst { f0, a, .. } => vec![("f0", f0), ("a", a)],
            FlatGConst { g0, a, .. } => vec![("g0", g0), ("a", a)],
            FlatExp { c5, c6, c4, a } => vec![("c5", c5), ("c6", c6), ("c4", c4), ("a", a)],
            FlatPower {
                k,
                c7,
                c8,
                c9,
                c10,
                a,
            } => vec![
                ("k", k),
                ("c7", c7),
                ("c8", c8),
                ("c9", c9),
                ("c10", c10),
                ("a", a),
            ],
            MinLinearG { f0, b1, b2, a } => vec![("f0", f0), ("b1", b1), ("b2", b2), ("a", a)],
            MinSqrtG { f0, b3, a } => vec![("f0", f0), ("b3", b3), ("a", a)],
            MinLinearF { g0, b4, b5, a } => vec![("g0", g0), ("b4", b4), ("b5", b5), ("a", a)],
            MinFLinGConst { b6, b7, b8, a } => vec![("b6", b6), ("b7", b7), ("b8", b8), ("a", a)],
            MinFLinGLin { b6, b7, b9, b10, a } => {
                vec![("b6", b6), ("b7", b7), ("b9", b9), ("b10", b10), ("a", a)]
            }
            MinGLinFLin {
                b11,
                b12_g,
                b12_f,
                b13,
                a,
            } => vec![
                ("b11", b11),
                ("b12_g", b12_g),
                ("b12_f", b12_f),
                ("b13", b13),
                ("a", a),
            ],
            MinGLinFConst { b11, b12, a } => vec![("b11", b11), ("b12", b12), ("a", a)],
            ConstK {
                k0,
                g0,
                lambda1,
                lambda2,
                a,
                sign,
            } => vec![
                ("K0", k0),
                ("g0", g0),
                ("lambda1", lambda1),
                ("lambda2", lambda2),
                ("a", a),
                ("sign", sign),
            ],
            ConstHA {
                h0,
                f0,
                lambda3,
                lambda4,
                a,
                sign,
            } => vec![
                ("H0", h0),
                ("f0", f0),
                ("lambda3", lambda3),
                ("lambda4", lambda4),
                ("a", a),
                ("sign", sign),
            ],
            ConstHB {
                h0,
                g0,
                lambda5,
                lambda6,
                a,
            } => vec![
                ("H0", h0),
                ("g0", g0),
                ("lambda5", lambda5),
                ("lambda6", lambda6),
                ("a", a),
            ],
        }
    }

    pub fn params(&self) -> Vec<(&'static str, f64)> {
        let mut copy = self.clone();
        copy.slots().into_iter().map(|(n, v)| (n, *v)).collect()
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        let family = self.name();
        let mut slots = self.slots();
        let valid = slots.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", ");
        match slots.iter_mut().find(|(n, _)| *n == name) {
            Some((_, slot)) => {
                **slot = value;
                Ok(())
            }
            None => Err(Error::UnknownParam {
                family: family.to_string(),
                name: name.to_string(),
                valid,
            }),
        }
    }

    /// Printed closed form of the graph.
    pub fn formula(&self) -> &'static str {
        use FamilySpec::*;
        match self {
            FlatFConst { .. } => "y = f0 g(z+ax)",
            FlatGConst { .. } => "y = g0 f(x)",
            FlatExp { .. } => "y = c5 e^(c6 x + c4 z)",
            FlatPower { .. } => {
                "y = [(1-k)(c7 x+c8)]^(1/(1-k)) [((k-1)/k)(c9 (z+ax)+c10)]^(k/(k-1))"
            }
            MinLinearG { .. } => "y = f0 (b1 (z+ax) + b2)",
            MinSqrtG { .. } => "y = f0 (sqrt((a^2-1)/(a^2 f0^2)) (z+ax) + b3)",
            MinLinearF { .. } => "y = g0 (b4 x + b5)",
            MinFLinGConst { .. } => "y = b8 (b6 x + b7)",
            MinFLinGLin { .. } => "y = (b6 x + b7)(b9 (z+ax) + b10)",
            MinGLinFLin { .. } => "y = (b12_f x + b13)(b11 (z+ax) + b12_g)",
            MinGLinFConst { .. } => "y = (1/b11)(b11 (z+ax) + b12)",
            ConstK { .. } => "y = (g0 (z+ax) + lambda2) (+-1/g0) tanh(sqrt(K0) x -+ g0 lambda1)",
            ConstHA { .. } => {
                "y = f0 (+-sqrt(9 H0^2 - a^4 f0^2 lambda3^2)/(3 f0 H0) (z+ax) + lambda4)"
            }
            ConstHB { .. } => "y = (-(H0/g0) x^2 + lambda5 x + lambda6) g0",
        }
    }

    pub fn expected(&self) -> ExpectedInvariant {
        use FamilySpec::*;
        match *self {
            FlatFConst { .. } | FlatGConst { .. } | FlatExp { .. } | FlatPower { .. } => {
                ExpectedInvariant::plain(InvariantKind::KZero)
            }
            MinLinearG { .. }
            | MinSqrtG { .. }
            | MinLinearF { .. }
            | MinFLinGConst { .. }
            | MinGLinFConst { .. } => ExpectedInvariant::plain(InvariantKind::HZero),
            MinFLinGLin { .. } | MinGLinFLin { .. } => ExpectedInvariant::disputed(
                InvariantKind::HZero,
                "with f, g both linear the mean-curvature numerator reduces to \
                 -2a f' g' (1 - (f g')^2), so H = -a f' g' / D, zero only if a f' g' = 0",
            ),
            ConstK { k0, .. } => ExpectedInvariant::plain(InvariantKind::KConst(k0)),
            ConstHA { h0, .. } => ExpectedInvariant::disputed(
                InvariantKind::HConst(h0),
                "the case assumes g'' = lambda3 but derives a linear g (g'' = 0); \
                 with f constant and g linear every term of the mean-curvature numerator vanishes",
            ),
            ConstHB { h0, .. } => ExpectedInvariant::plain(InvariantKind::HConst(h0)),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name())?;
        for (i, (n, v)) in self.params().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{n}={v}")?;
        }
        f.write_str(")")
    }
}

fn violated(spec: &FamilySpec, constraint: impl Into<String>) -> Error {
    Error::Constraint {
        family: spec.name().to_string(),
        constraint: constraint.into(),
    }
}

fn check_sign(spec: &FamilySpec, sign: f64) -> Result<()> {
    if sign == 1.0 || sign == -1.0 {
        Ok(())
    } else {
        Err(violated(spec, format!("sign = +1 or -1 (got {sign})")))
    }
}

/// `m t + b > 0` for `t` in `[lo, hi]`.
fn check_positive_affine(
    spec: &FamilySpec,
    m: f64,
    b: f64,
    lo: f64,
    hi: f64,
    what: &str,
) -> Result<()> {
    let worst = (m * lo + b).min(m * hi + b);
    if worst > 0.0 {
        Ok(())
    } else {
        Err(violated(
            spec,
            format!("{what} > 0 over [{lo}, {hi}] (minimum {worst})"),
        ))
    }
}

/// Constant-`K` factor `sign (1/g0) tanh(rate x - sign g0 lambda1)`.
fn const_k_f(g0: f64, lambda1: f64, sign: f64, rate: f64) -> C2Fn {
    C2Fn::tanh(sign / g0, rate, -sign * g0 * lambda1)
}

/// Realize `spec` over `domain`.
pub fn build(spec: &FamilySpec, domain: Rect) -> Result<(FactorableSurface, ExpectedInvariant)> {
    use FamilySpec::*;
    if let Some((n, v)) = spec.params().into_iter().find(|(_, v)| !v.is_finite()) {
        return Err(violated(spec, format!("{n} finite (got {v})")));
    }
    let (f, g, a) = match *spec {
        FlatFConst { f0, ref g, a } => (C2Fn::constant(f0), g.clone(), a),
        FlatGConst { g0, ref f, a } => (f.clone(), C2Fn::constant(g0), a),
        FlatExp { c5, c6, c4, a } => (C2Fn::exp(c5, c6 - a * c4), C2Fn::exp(1.0, c4), a),
        FlatPower {
            k,
            c7,
            c8,
            c9,
            c10,
            a,
        } => {
            if k == 0.0 || k == 1.0 {
                return Err(violated(spec, format!("k not in {{0, 1}} (got {k})")));
            }
            let (fm, fb) = ((1.0 - k) * c7, (1.0 - k) * c8);
            let r = (k - 1.0) / k;
            let (gm, gb) = (r * c9, r * c10);
            check_positive_affine(spec, fm, fb, domain.x_min, domain.x_max, "(1-k)(c7 x + c8)")?;
            let (vlo, vhi) = domain.shear_range(a);
            check_positive_affine(spec, gm, gb, vlo, vhi, "((k-1)/k)(c9 v + c10)")?;
            (
                C2Fn::power(fm, fb, 1.0 / (1.0 - k)),
                C2Fn::power(gm, gb, k / (k - 1.0)),
                a,
            )
        }
        MinLinearG { f0, b1, b2, a } => (C2Fn::constant(f0), C2Fn::linear(b1, b2), a),
        MinSqrtG { f0, b3, a } => {
            if a * a <= 1.0 {
                return Err(violated(spec, format!("a^2 > 1 (got a = {a})")));
            }
            if f0 == 0.0 {
                return Err(violated(spec, "f0 != 0"));
            }
            let slope = ((a * a - 1.0) / (a * a * f0 * f0)).sqrt();
            (C2Fn::constant(f0), C2Fn::linear(slope, b3), a)
        }
        MinLinearF { g0, b4, b5, a } => (C2Fn::linear(b4, b5), C2Fn::constant(g0), a),
        MinFLinGConst { b6, b7, b8, a } => (C2Fn::linear(b6, b7), C2Fn::constant(b8), a),
        MinFLinGLin { b6, b7, b9, b10, a } => (C2Fn::linear(b6, b7), C2Fn::linear(b9, b10), a),
        MinGLinFLin {
            b11,
            b12_g,
            b12_f,
            b13,
            a,
        } => (C2Fn::linear(b12_f, b13), C2Fn::linear(b11, b12_g), a),
        MinGLinFConst { b11, b12, a } => {
            if b11 == 0.0 {
                return Err(violated(spec, "b11 != 0"));
            }
            (C2Fn::constant(1.0 / b11), C2Fn::linear(b11, b12), a)
        }
        ConstK {
            k0,
            g0,
            lambda1,
            lambda2,
            a,
            sign,
        } => {
            if k0.is_nan() || k0 <= 0.0 {
                return Err(violated(spec, format!("K0 > 0 (got {k0})")));
            }
            if g0 == 0.0 {
                return Err(violated(spec, "g0 != 0"));
            }
            check_sign(spec, sign)?;
            (
                const_k_f(g0, lambda1, sign, k0.sqrt()),
                C2Fn::linear(g0, lambda2),
                a,
            )
        }
        ConstHA {
            h0,
            f0,
            lambda3,
            lambda4,
            a,
            sign,
        } => {
            if h0 == 0.0 {
                return Err(violated(spec, "H0 != 0"));
            }
            if f0 == 0.0 {
                return Err(violated(spec, "f0 != 0"));
            }
            check_sign(spec, sign)?;
            let radicand = 9.0 * h0 * h0 - a.powi(4) * f0 * f0 * lambda3 * lambda3;
            if radicand < 0.0 {
                return Err(violated(
                    spec,
                    format!("9 H0^2 >= a^4 f0^2 lambda3^2 (difference {radicand})"),
                ));
            }
            let slope = sign * radicand.sqrt() / (3.0 * f0 * h0);
            (C2Fn::constant(f0), C2Fn::linear(slope, lambda4), a)
        }
        ConstHB {
            h0,
            g0,
            lambda5,
            lambda6,
            a,
        } => {
            if h0 == 0.0 {
                return Err(violated(spec, "H0 != 0"));
            }
            if g0 == 0.0 {
                return Err(violated(spec, "g0 != 0"));
            }
            (
                C2Fn::quadratic(-h0 / g0, lambda5, lambda6),
                C2Fn::constant(g0),
                a,
            )
        }
    };
    Ok((FactorableSurface::new(f, g, a, domain), spec.expected()))
}

/// Constant-`K` surface with the tanh argument of the derivation,
/// `g0 sqrt(K0) x`, instead of the statement's `sqrt(K0) x`.
pub fn const_k_derivation_variant(spec: &FamilySpec, domain: Rect) -> Result<FactorableSurface> {
    match *spec {
        FamilySpec::ConstK {
            k0,
            g0,
            lambda1,
            lambda2,
            a,
            sign,
        } => {
            let (statement, _) = build(spec, domain)?;
            Ok(FactorableSurface {
                f: const_k_f(g0, lambda1, sign, g0 * k0.sqrt()),
                g: C2Fn::linear(g0, lambda2),
                a,
                ..statement
            })
        }
        _ => Err(violated(spec, "derivation variant exists only for const-k")),
    }
}

/// One ready-to-verify instance of a family.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub spec: FamilySpec,
    pub domain: Rect,
    /// Index of the worked example this entry reproduces, if any.
    pub figure: Option<u8>,
}

impl CatalogEntry {
    pub fn build(&self) -> Result<(FactorableSurface, ExpectedInvariant)> {
        build(&self.spec, self.domain)
    }
}

const UNIT_SQUARE: Rect = Rect::new(-1.0, 1.0, -1.0, 1.0);

/// Default instance of every family. Entries with a `figure` number are
/// the four worked examples on their own rectangles.
pub fn catalog() -> Vec<CatalogEntry> {
    use FamilySpec::*;
    let entry = |spec: FamilySpec, domain: Rect, figure: Option<u8>| CatalogEntry {
        name: spec.name(),
        spec,
        domain,
        figure,
    };
    vec![
        entry(
            FlatFConst {
                f0: 0.5,
                g: C2Fn::tanh(1.0, 1.0, 0.0),
                a: 2.0,
            },
            UNIT_SQUARE,
            None,
        ),
        entry(
            FlatGConst {
                g0: 1.5,
                f: C2Fn::quadratic(1.0, -1.0, 0.5),
                a: 2.0,
            },
            UNIT_SQUARE,
            None,
        ),
        entry(
            FlatExp {
                c5: 8.0,
                c6: 6.0,
                c4: 1.0,
                a: 1.0,
            },
            Rect::new(-1.0, 1.0, 0.0, 2.0 * PI),
            Some(1),
        ),
        entry(
            FlatPower {
                k: 2.0,
                c7: -0.5,
                c8: -1.0,
                c9: 0.2,
                c10: 2.0,
                a: 0.5,
            },
            Rect::new(0.0, 1.0, 0.0, 0.5),
            None,
        ),
        entry(
            MinLinearG {
                f0: 0.8,
                b1: 0.5,
                b2: 1.0,
                a: 1.5,
            },
            UNIT_SQUARE,
            None,
        ),
        entry(
            MinSqrtG {
                f0: 1.0,
                b3: 9.0,
                a: 2.0,
            },
            Rect::new(0.0, 15.0, -1.0, 30.0),
            Some(2),
        ),
        entry(
            MinLinearF {
                g0: 2.0,
                b4: 0.5,
                b5: -1.0,
                a: 1.0,
            },
            UNIT_SQUARE,
            None,
        ),
        entry(
            MinFLinGConst {
                b6: 1.5,
                b7: 0.5,
                b8: 2.0,
                a: 1.0,
            },
            UNIT_SQUARE,
            None,
        ),
        entry(
            MinFLinGLin {
                b6: 0.5,
                b7: 1.0,
                b9: 0.4,
                b10: 0.2,
                a: 1.5,
            },
            UNIT_SQUARE,
            None,
        ),
        entry(
            MinGLinFLin {
                b11: 0.4,
                b12_g: 0.3,
                b12_f: 0.5,
                b13: 1.0,
                a: 1.5,
            },
            UNIT_SQUARE,
            None,
        ),
        entry(
            MinGLinFConst {
                b11: 2.0,
                b12: 1.0,
                a: 1.0,
            },
            UNIT_SQUARE,
            None,
        ),
        entry(
            ConstK {
                k0: 1.0,
                g0: 1.0,
                lambda1: 0.0,
                lambda2: 0.0,
                a: 10.0,
                sign: 1.0,
            },
            UNIT_SQUARE,
            Some(3),
        ),
        entry(
            ConstHA {
                h0: 1.0,
                f0: 1.0,
                lambda3: 1.0,
                lambda4: 0.0,
                a: 1.2,
                sign: 1.0,
            },
            UNIT_SQUARE,
            None,
        ),
        entry(
            ConstHB {
                h0: 1.0,
                g0: 1.0,
                lambda5: 2.0,
                lambda6: 1.0,
                a: 1.0,
            },
            UNIT_SQUARE,
            Some(4),
        ),
    ]
}

pub fn catalog_entry(name: &str) -> Result<CatalogEntry> {
    catalog()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownFamily {
            name: name.to_string(),
            valid: FAMILY_NAMES.join(", "),
        })
}
