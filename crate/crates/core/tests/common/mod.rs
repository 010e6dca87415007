#![allow(dead_code)]

use pgsurf::surface::SurfaceJets;
use pgsurf::{C2Fn, FactorableSurface, Rect};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const UNIT: Rect = Rect::new(-1.0, 1.0, -1.0, 1.0);

fn primitive(rng: &mut ChaCha8Rng) -> C2Fn {
    match rng.gen_range(0..5) {
        0 => C2Fn::linear(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
        1 => C2Fn::quadratic(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ),
        2 => C2Fn::exp(rng.gen_range(0.2..2.0), rng.gen_range(-1.5..1.5)),
        3 => C2Fn::tanh(
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-1.0..1.0),
        ),
        // base stays >= 0.3 for |t| <= 4
        _ => C2Fn::power(
            rng.gen_range(-0.3..0.3),
            rng.gen_range(1.5..3.0),
            rng.gen_range(-2.0..3.0),
        ),
    }
}

/// Primitive, sum or product of two primitives.
pub fn random_fn(rng: &mut ChaCha8Rng) -> C2Fn {
    match rng.gen_range(0..4) {
        0 => C2Fn::sum(vec![primitive(rng), primitive(rng)]),
        1 => C2Fn::product(vec![primitive(rng), primitive(rng)]),
        _ => primitive(rng),
    }
}

/// Largest `|f g'|` over a 21x21 sample of the rectangle.
pub fn max_slope(s: &FactorableSurface) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..=20 {
        for j in 0..=20 {
            let x = s.domain.x_min + (s.domain.x_max - s.domain.x_min) * i as f64 / 20.0;
            let z = s.domain.z_min + (s.domain.z_max - s.domain.z_min) * j as f64 / 20.0;
            m = m.max(s.jets(x, z).map(|j| j.fg1().abs()).unwrap_or(0.0));
        }
    }
    m
}

/// Random surface on `[-1, 1]^2` with `g` rescaled so the sampled
/// `|f g'|` peaks at `peak`.
pub fn random_surface(rng: &mut ChaCha8Rng, peak: f64) -> FactorableSurface {
    loop {
        let s = FactorableSurface::new(
            random_fn(rng),
            random_fn(rng),
            rng.gen_range(-3.0..3.0),
            UNIT,
        );
        let m = max_slope(&s);
        if m > 1e-3 && m.is_finite() {
            let g = C2Fn::scale(peak / m, s.g.clone());
            return FactorableSurface::new(s.f, g, s.a, UNIT);
        }
    }
}

/// Random point of `s` with `(f g')^2 <= q_max`.
pub fn admissible_point(
    rng: &mut ChaCha8Rng,
    s: &FactorableSurface,
    q_max: f64,
) -> Option<(f64, f64, SurfaceJets)> {
    for _ in 0..1000 {
        let x = rng.gen_range(s.domain.x_min..=s.domain.x_max);
        let z = rng.gen_range(s.domain.z_min..=s.domain.z_max);
        if let Ok(j) = s.jets(x, z) {
            if j.fg1_sq() <= q_max {
                return Some((x, z, j));
            }
        }
    }
    None
}

pub fn rel_close(a: f64, b: f64, rel: f64, floor: f64) -> bool {
    (a - b).abs() <= (rel * a.abs().max(b.abs())).max(floor)
}
