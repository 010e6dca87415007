//! JSON surface documents.
//!
//! ```json
//! { "a": 2.0,
//!   "f": { "kind": "const", "c": 1.0 },
//!   "g": { "kind": "linear", "m": 0.866, "b": 9.0 },
//!   "domain": [0, 15, -1, 30] }
//! ```
//!
//! Function nodes carry a `kind` and that kind's numeric fields; `sum` and
//! `product` take `args: [node, ...]`, `scale` takes `c` and a single-element
//! `args`. Any node may add `valid: [lo, hi]` (`null` for an open side).
//! Errors report a JSON-pointer path to the offending field.

use crate::error::{Error, Result};
use crate::funcs::{C2Fn, Expr};
use crate::surface::{FactorableSurface, Rect};
use serde_json::{json, Map, Value};

fn schema(path: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        path: if path.is_empty() {
            "/".to_string()
        } else {
            path.to_string()
        },
        message: message.into(),
    }
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| schema(path, "expected an object"))
}

fn number(obj: &Map<String, Value>, key: &str, path: &str) -> Result<f64> {
    let p = format!("{path}/{key}");
    let v = obj
        .get(key)
        .ok_or_else(|| schema(&p, "missing numeric field"))?;
    let x = v.as_f64().ok_or_else(|| schema(&p, "expected a number"))?;
    if !x.is_finite() {
        return Err(schema(&p, "number must be finite"));
    }
    Ok(x)
}

fn check_keys(obj: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<()> {
    for k in obj.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(schema(
                &format!("{path}/{k}"),
                format!("unexpected field (allowed: {})", allowed.join(", ")),
            ));
        }
    }
    Ok(())
}

const KINDS: &str = "const, linear, quadratic, exp, tanh, power, sum, product, scale";

/// Parse one function node rooted at `path`.
pub fn parse_fn(v: &Value, path: &str) -> Result<C2Fn> {
    let obj = object(v, path)?;
    let kind = obj
        .get("kind")
        .ok_or_else(|| schema(&format!("{path}/kind"), "missing"))?
        .as_str()
        .ok_or_else(|| schema(&format!("{path}/kind"), "expected a string"))?;
    let n = |k: &str| number(obj, k, path);
    let (fields, func): (&[&str], C2Fn) = match kind {
        "const" => (&["c"], C2Fn::constant(n("c")?)),
        "linear" => (&["m", "b"], C2Fn::linear(n("m")?, n("b")?)),
        "quadratic" => (&["p", "q", "r"], C2Fn::quadratic(n("p")?, n("q")?, n("r")?)),
        "exp" => (&["c", "k"], C2Fn::exp(n("c")?, n("k")?)),
        "tanh" => (&["s", "k", "b"], C2Fn::tanh(n("s")?, n("k")?, n("b")?)),
        "power" => (&["m", "b", "e"], C2Fn::power(n("m")?, n("b")?, n("e")?)),
        "sum" | "product" => {
            let args = parse_args(obj, path)?;
            if args.is_empty() {
                return Err(schema(&format!("{path}/args"), "needs at least one node"));
            }
            let f = if kind == "sum" {
                C2Fn::sum(args)
            } else {
                C2Fn::product(args)
            };
            (&["args"], f)
        }
        "scale" => {
            let c = n("c")?;
            let mut args = parse_args(obj, path)?;
            if args.len() != 1 {
                return Err(schema(
                    &format!("{path}/args"),
                    "scale takes exactly one node",
                ));
            }
            (&["c", "args"], C2Fn::scale(c, args.remove(0)))
        }
        other => {
            return Err(schema(
                &format!("{path}/kind"),
                format!("unknown kind `{other}` (valid: {KINDS})"),
            ))
        }
    };
    let mut allowed = vec!["kind", "valid"];
    allowed.extend_from_slice(fields);
    check_keys(obj, &allowed, path)?;
    match obj.get("valid") {
        None => Ok(func),
        Some(v) => {
            let (lo, hi) = parse_valid(v, &format!("{path}/valid"))?;
            // intersect with whatever the children already impose
            let (lo, hi) = (lo.max(func.valid.lo), hi.min(func.valid.hi));
            Ok(func.with_validity(lo, hi))
        }
    }
}

fn parse_args(obj: &Map<String, Value>, path: &str) -> Result<Vec<C2Fn>> {
    let p = format!("{path}/args");
    let arr = obj
        .get("args")
        .ok_or_else(|| schema(&p, "missing"))?
        .as_array()
        .ok_or_else(|| schema(&p, "expected an array"))?;
    arr.iter()
        .enumerate()
        .map(|(i, v)| parse_fn(v, &format!("{p}/{i}")))
        .collect()
}

fn parse_valid(v: &Value, path: &str) -> Result<(f64, f64)> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| schema(path, "expected [lo, hi]"))?;
    let side = |i: usize, open: f64| -> Result<f64> {
        match &arr[i] {
            Value::Null => Ok(open),
            x => x
                .as_f64()
                .filter(|x| x.is_finite())
                .ok_or_else(|| schema(&format!("{path}/{i}"), "expected a finite number or null")),
        }
    };
    let (lo, hi) = (side(0, f64::NEG_INFINITY)?, side(1, f64::INFINITY)?);
    if lo > hi {
        return Err(schema(path, format!("empty interval [{lo}, {hi}]")));
    }
    Ok((lo, hi))
}

fn parse_domain(v: &Value) -> Result<Rect> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 4)
        .ok_or_else(|| schema("/domain", "expected [x_min, x_max, z_min, z_max]"))?;
    let mut d = [0.0; 4];
    for (i, x) in arr.iter().enumerate() {
        d[i] = x
            .as_f64()
            .filter(|x| x.is_finite())
            .ok_or_else(|| schema(&format!("/domain/{i}"), "expected a finite number"))?;
    }
    if d[1] <= d[0] {
        return Err(schema("/domain", "x_max must exceed x_min"));
    }
    if d[3] <= d[2] {
        return Err(schema("/domain", "z_max must exceed z_min"));
    }
    Ok(Rect::new(d[0], d[1], d[2], d[3]))
}

/// Build a surface from a parsed document.
pub fn surface_from_value(v: &Value) -> Result<FactorableSurface> {
    let obj = object(v, "")?;
    check_keys(obj, &["a", "f", "g", "domain"], "")?;
    let a = number(obj, "a", "")?;
    let f = parse_fn(obj.get("f").ok_or_else(|| schema("/f", "missing"))?, "/f")?;
    let g = parse_fn(obj.get("g").ok_or_else(|| schema("/g", "missing"))?, "/g")?;
    let domain = parse_domain(
        obj.get("domain")
            .ok_or_else(|| schema("/domain", "missing"))?,
    )?;
    Ok(FactorableSurface::new(f, g, a, domain))
}

pub fn surface_from_str(text: &str) -> Result<FactorableSurface> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| schema("", format!("invalid JSON: {e}")))?;
    surface_from_value(&v)
}

fn expr_to_value(e: &Expr) -> Value {
    match e {
        Expr::Constant { c } => json!({"kind": "const", "c": c}),
        Expr::Linear { m, b } => json!({"kind": "linear", "m": m, "b": b}),
        Expr::Quadratic { p, q, r } => json!({"kind": "quadratic", "p": p, "q": q, "r": r}),
        Expr::Exp { c, k } => json!({"kind": "exp", "c": c, "k": k}),
        Expr::Tanh { s, k, b } => json!({"kind": "tanh", "s": s, "k": k, "b": b}),
        Expr::Power { m, b, e } => json!({"kind": "power", "m": m, "b": b, "e": e}),
        Expr::Sum(xs) => {
            json!({"kind": "sum", "args": xs.iter().map(expr_to_value).collect::<Vec<_>>()})
        }
        Expr::Product(xs) => {
            json!({"kind": "product", "args": xs.iter().map(expr_to_value).collect::<Vec<_>>()})
        }
        Expr::Scale { c, arg } => json!({"kind": "scale", "c": c, "args": [expr_to_value(arg)]}),
    }
}

pub fn fn_to_value(f: &C2Fn) -> Value {
    let mut v = expr_to_value(&f.expr);
    if !f.valid.is_unbounded() {
        let side = |x: f64| if x.is_finite() { json!(x) } else { Value::Null };
        v["valid"] = json!([side(f.valid.lo), side(f.valid.hi)]);
    }
    v
}

pub fn surface_to_value(s: &FactorableSurface) -> Value {
    json!({
        "a": s.a,
        "f": fn_to_value(&s.f),
        "g": fn_to_value(&s.g),
        "domain": s.domain.to_array(),
    })
}
