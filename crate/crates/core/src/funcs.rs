//! Closed-form univariate functions with exact first and second derivatives.
//!
//! Every function is a small expression tree evaluated through [`Jet`], a
//! truncated second-order Taylor triple. Combinators propagate jets with the
//! sum, Leibniz and scaling rules, so `d1`/`d2` are exact up to roundoff.
//! Finite differences live only in [`fd_check`], used as a test oracle.

use crate::error::{Error, Result};
use std::fmt;
use std::ops::{Add, Mul};

/// Value with its first and second derivative at a point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub const fn new(v: f64, d1: f64, d2: f64) -> Self {
        Jet { v, d1, d2 }
    }

    pub const fn constant(v: f64) -> Self {
        Jet {
            v,
            d1: 0.0,
            d2: 0.0,
        }
    }

    pub fn scale(self, c: f64) -> Self {
        Jet::new(c * self.v, c * self.d1, c * self.d2)
    }

    fn is_finite(&self) -> bool {
        self.v.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        Jet::new(self.v + rhs.v, self.d1 + rhs.d1, self.d2 + rhs.d2)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        Jet::new(
            self.v * rhs.v,
            self.d1 * rhs.v + self.v * rhs.d1,
            self.d2 * rhs.v + 2.0 * self.d1 * rhs.d1 + self.v * rhs.d2,
        )
    }
}

/// Closed interval of admissible arguments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn contains(&self, t: f64) -> bool {
        self.lo <= t && t <= self.hi
    }

    pub fn is_unbounded(&self) -> bool {
        self.lo == f64::NEG_INFINITY && self.hi == f64::INFINITY
    }
}

impl Default for Interval {
    fn default() -> Self {
        Interval::REAL_LINE
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Constant {
        c: f64,
    },
    /// `m t + b`
    Linear {
        m: f64,
        b: f64,
    },
    /// `p t^2 + q t + r`
    Quadratic {
        p: f64,
        q: f64,
        r: f64,
    },
    /// `c exp(k t)`
    Exp {
        c: f64,
        k: f64,
    },
    /// `s tanh(k t + b)`
    Tanh {
        s: f64,
        k: f64,
        b: f64,
    },
    /// `(m t + b)^e`, real exponent, positive base required.
    Power {
        m: f64,
        b: f64,
        e: f64,
    },
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Scale {
        c: f64,
        arg: Box<Expr>,
    },
}

impl Expr {
    pub fn kind(&self) -> &'static str {
        match self {
            Expr::Constant { .. } => "const",
            Expr::Linear { .. } => "linear",
            Expr::Quadratic { .. } => "quadratic",
            Expr::Exp { .. } => "exp",
            Expr::Tanh { .. } => "tanh",
            Expr::Power { .. } => "power",
            Expr::Sum(_) => "sum",
            Expr::Product(_) => "product",
            Expr::Scale { .. } => "scale",
        }
    }

    pub fn jet(&self, t: f64) -> Result<Jet> {
        Ok(match *self {
            Expr::Constant { c } => Jet::constant(c),
            Expr::Linear { m, b } => Jet::new(m * t + b, m, 0.0),
            Expr::Quadratic { p, q, r } => Jet::new((p * t + q) * t + r, 2.0 * p * t + q, 2.0 * p),
            Expr::Exp { c, k } => {
                let e = (k * t).exp();
                Jet::new(c * e, (c * k) * e, (c * k * k) * e)
            }
            Expr::Tanh { s, k, b } => {
                let th = (k * t + b).tanh();
                let sech2 = 1.0 - th * th;
                Jet::new(s * th, s * k * sech2, -2.0 * s * k * k * th * sech2)
            }
            Expr::Power { m, b, e } => {
                let base = m * t + b;
                if base.is_nan() || base <= 0.0 {
                    return Err(Error::NonPositiveBase { t, base });
                }
                Jet::new(
                    base.powf(e),
                    e * m * base.powf(e - 1.0),
                    e * (e - 1.0) * m * m * base.powf(e - 2.0),
                )
            }
            Expr::Sum(ref terms) => {
                let mut acc = Jet::constant(0.0);
                for term in terms {
                    acc = acc + term.jet(t)?;
                }
                acc
            }
            Expr::Product(ref factors) => {
                let mut acc = Jet::constant(1.0);
                for factor in factors {
                    acc = acc * factor.jet(t)?;
                }
                acc
            }
            Expr::Scale { c, ref arg } => arg.jet(t)?.scale(c),
        })
    }
}

/// A C² scalar function of one real argument, restricted to a closed
/// validity interval.
#[derive(Debug, Clone, PartialEq)]
pub struct C2Fn {
    pub expr: Expr,
    pub valid: Interval,
}

impl C2Fn {
    pub fn new(expr: Expr) -> Self {
        C2Fn {
            expr,
            valid: Interval::REAL_LINE,
        }
    }

    pub fn with_validity(mut self, lo: f64, hi: f64) -> Self {
        self.valid = Interval::new(lo, hi);
        self
    }

    pub fn constant(c: f64) -> Self {
        C2Fn::new(Expr::Constant { c })
    }

    pub fn linear(m: f64, b: f64) -> Self {
        C2Fn::new(Expr::Linear { m, b })
    }

    pub fn quadratic(p: f64, q: f64, r: f64) -> Self {
        C2Fn::new(Expr::Quadratic { p, q, r })
    }

    pub fn exp(c: f64, k: f64) -> Self {
        C2Fn::new(Expr::Exp { c, k })
    }

    pub fn tanh(s: f64, k: f64, b: f64) -> Self {
        C2Fn::new(Expr::Tanh { s, k, b })
    }

    pub fn power(m: f64, b: f64, e: f64) -> Self {
        C2Fn::new(Expr::Power { m, b, e })
    }

    pub fn sum(terms: Vec<C2Fn>) -> Self {
        C2Fn::combine(terms, Expr::Sum)
    }

    pub fn product(factors: Vec<C2Fn>) -> Self {
        C2Fn::combine(factors, Expr::Product)
    }

    pub fn scale(c: f64, arg: C2Fn) -> Self {
        C2Fn {
            expr: Expr::Scale {
                c,
                arg: Box::new(arg.expr),
            },
            valid: arg.valid,
        }
    }

    /// Children's validity intervals are intersected.
    fn combine(parts: Vec<C2Fn>, wrap: fn(Vec<Expr>) -> Expr) -> Self {
        let mut valid = Interval::REAL_LINE;
        let mut exprs = Vec::with_capacity(parts.len());
        for p in parts {
            valid.lo = valid.lo.max(p.valid.lo);
            valid.hi = valid.hi.min(p.valid.hi);
            exprs.push(p.expr);
        }
        C2Fn {
            expr: wrap(exprs),
            valid,
        }
    }

    pub fn jet(&self, t: f64) -> Result<Jet> {
        if !self.valid.contains(t) {
            return Err(Error::OutsideValidity {
                t,
                lo: self.valid.lo,
                hi: self.valid.hi,
            });
        }
        let j = self.expr.jet(t)?;
        if !j.is_finite() {
            let value = [j.v, j.d1, j.d2]
                .into_iter()
                .find(|x| !x.is_finite())
                .unwrap_or(f64::NAN);
            return Err(Error::NonFinite { t, value });
        }
        Ok(j)
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        self.jet(t).map(|j| j.v)
    }

    pub fn d1(&self, t: f64) -> Result<f64> {
        self.jet(t).map(|j| j.d1)
    }

    pub fn d2(&self, t: f64) -> Result<f64> {
        self.jet(t).map(|j| j.d2)
    }
}

/// Central finite-difference estimates `(f', f'')` with step `h`.
pub fn fd_check(func: &C2Fn, t: f64, h: f64) -> Result<(f64, f64)> {
    assert!(h > 0.0, "finite-difference step must be positive");
    let fp = func.eval(t + h)?;
    let f0 = func.eval(t)?;
    let fm = func.eval(t - h)?;
    Ok(((fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h)))
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Constant { c } => write!(f, "{c}"),
            Expr::Linear { m, b } => write!(f, "({m}*t + {b})"),
            Expr::Quadratic { p, q, r } => write!(f, "({p}*t^2 + {q}*t + {r})"),
            Expr::Exp { c, k } => write!(f, "{c}*exp({k}*t)"),
            Expr::Tanh { s, k, b } => write!(f, "{s}*tanh({k}*t + {b})"),
            Expr::Power { m, b, e } => write!(f, "({m}*t + {b})^{e}"),
            Expr::Sum(terms) => join(f, terms, " + "),
            Expr::Product(factors) => join(f, factors, " * "),
            Expr::Scale { c, arg } => write!(f, "{c}*[{arg}]"),
        }
    }
}

fn join(f: &mut fmt::Formatter<'_>, parts: &[Expr], sep: &str) -> fmt::Result {
    f.write_str("[")?;
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{p}")?;
    }
    f.write_str("]")
}

impl fmt::Display for C2Fn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expr)
    }
}
