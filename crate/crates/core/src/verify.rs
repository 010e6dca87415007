//! Grid residual verification of curvature claims.
//!
//! Every grid node lands in exactly one bucket: admissible (spacelike
//! normal), timelike normal, lightlike (skipped), or outside the functions'
//! validity (skipped). `K` targets are checked at admissible and timelike
//! nodes, `H` targets only at admissible ones.
//!
//! Nodes are evaluated in parallel and collected in row-major order
//! (`x` outer, `z` inner); every reduction then runs sequentially over that
//! order, so reports are bit-identical between runs and the arg-max tie
//! goes to the lowest `(i, j)`.

use crate::curvature::{
    gauss_from_jets, general_from_jets, mean_from_jets, normal_class, relation_a_from_jets,
    relation_denominator,
};
use crate::error::{Error, Result};
use crate::families::{
    build, const_k_derivation_variant, ExpectedInvariant, FamilySpec, InvariantKind,
};
use crate::pg_core::CausalClass;
use crate::surface::{FactorableSurface, Rect, SurfaceJets};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;

pub const MAX_GRID_POINTS: usize = 10_000_000;

/// Absolute tolerance for zero targets.
pub const ZERO_TARGET_TOL: f64 = 1e-9;
/// Relative tolerance (and absolute floor) for non-zero constant targets
/// and for the closed-form vs general-formula comparison.
pub const CONST_TARGET_REL: f64 = 1e-8;
pub const CONST_TARGET_FLOOR: f64 = 1e-12;
pub const ORACLE_REL: f64 = 1e-9;
pub const ORACLE_FLOOR: f64 = 1e-12;

/// Relation ratio samples need `|K|`, the `A` denominator and `|A K|`
/// above this.
pub const RELATION_FILTER: f64 = 1e-10;
/// Ratio spread regarded as constant.
pub const RELATION_CONSTANCY: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub nx: usize,
    pub nz: usize,
    pub domain: Rect,
}

impl GridSpec {
    pub fn new(nx: usize, nz: usize, domain: Rect) -> Result<Self> {
        if nx < 2 || nz < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2x2 nodes, got {nx}x{nz}"
            )));
        }
        if nx.saturating_mul(nz) > MAX_GRID_POINTS {
            return Err(Error::InvalidGrid(format!(
                "{nx}x{nz} exceeds {MAX_GRID_POINTS} nodes"
            )));
        }
        let finite = domain.to_array().iter().all(|v| v.is_finite());
        if !finite || domain.x_max <= domain.x_min || domain.z_max <= domain.z_min {
            return Err(Error::InvalidGrid(format!(
                "rectangle {:?} must have finite, strictly positive extents",
                domain.to_array()
            )));
        }
        Ok(GridSpec { nx, nz, domain })
    }

    pub fn total(&self) -> usize {
        self.nx * self.nz
    }

    /// Node abscissa; the last node is exactly `x_max`.
    pub fn x(&self, i: usize) -> f64 {
        node(self.domain.x_min, self.domain.x_max, i, self.nx)
    }

    pub fn z(&self, j: usize) -> f64 {
        node(self.domain.z_min, self.domain.z_max, j, self.nz)
    }
}

fn node(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * (i as f64) / ((n - 1) as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Counts {
    pub admissible: usize,
    pub timelike_normal: usize,
    pub lightlike_skipped: usize,
    pub domain_skipped: usize,
}

impl Counts {
    pub fn total(&self) -> usize {
        self.admissible + self.timelike_normal + self.lightlike_skipped + self.domain_skipped
    }
}

/// Bucket of one grid node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeClass {
    Admissible,
    Timelike,
    Lightlike,
    Domain,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample<T> {
    pub i: usize,
    pub j: usize,
    pub x: f64,
    pub z: f64,
    pub class: NodeClass,
    pub value: Option<T>,
}

/// Evaluate `eval` at every node of `grid` whose jets exist.
pub fn sample_grid<T, F>(s: &FactorableSurface, grid: &GridSpec, eval: F) -> Vec<Sample<T>>
where
    T: Send,
    F: Fn(&SurfaceJets, f64, f64, NodeClass) -> Option<T> + Sync,
{
    (0..grid.total())
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / grid.nz, idx % grid.nz);
            let (x, z) = (grid.x(i), grid.z(j));
            match s.jets(x, z) {
                Err(_) => Sample {
                    i,
                    j,
                    x,
                    z,
                    class: NodeClass::Domain,
                    value: None,
                },
                Ok(jets) => {
                    let class = match normal_class(&jets) {
                        CausalClass::Lightlike => NodeClass::Lightlike,
                        CausalClass::Timelike => NodeClass::Timelike,
                        _ => NodeClass::Admissible,
                    };
                    Sample {
                        i,
                        j,
                        x,
                        z,
                        class,
                        value: eval(&jets, x, z, class),
                    }
                }
            }
        })
        .collect()
}

pub fn count<T>(samples: &[Sample<T>]) -> Counts {
    let mut c = Counts::default();
    for s in samples {
        match s.class {
            NodeClass::Admissible => c.admissible += 1,
            NodeClass::Timelike => c.timelike_normal += 1,
            NodeClass::Lightlike => c.lightlike_skipped += 1,
            NodeClass::Domain => c.domain_skipped += 1,
        }
    }
    c
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualStats {
    pub target: String,
    pub count: usize,
    pub max: f64,
    pub mean: f64,
    pub argmax: Option<[f64; 2]>,
    pub argmax_index: Option<[usize; 2]>,
}

/// Sequential running max/mean; strict `>` keeps the first maximum.
#[derive(Debug, Clone)]
struct Accum {
    count: usize,
    sum: f64,
    max: f64,
    at: Option<(usize, usize, f64, f64)>,
}

impl Accum {
    fn new() -> Self {
        Accum {
            count: 0,
            sum: 0.0,
            max: 0.0,
            at: None,
        }
    }

    fn push(&mut self, r: f64, i: usize, j: usize, x: f64, z: f64) {
        let r = if r.is_nan() { f64::INFINITY } else { r };
        self.count += 1;
        self.sum += r;
        if self.at.is_none() || r > self.max {
            self.max = r;
            self.at = Some((i, j, x, z));
        }
    }

    fn finish(&self, target: impl Into<String>) -> ResidualStats {
        ResidualStats {
            target: target.into(),
            count: self.count,
            max: self.max,
            mean: if self.count == 0 {
                0.0
            } else {
                self.sum / self.count as f64
            },
            argmax: self.at.map(|(_, _, x, z)| [x, z]),
            argmax_index: self.at.map(|(i, j, _, _)| [i, j]),
        }
    }
}

/// Range of a measured scalar field.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldStats {
    pub quantity: String,
    pub count: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

impl FieldStats {
    fn from_values(quantity: &str, values: impl Iterator<Item = f64>) -> Option<Self> {
        let mut n = 0usize;
        let (mut lo, mut hi, mut sum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
        for v in values {
            n += 1;
            lo = lo.min(v);
            hi = hi.max(v);
            sum += v;
        }
        (n > 0).then(|| FieldStats {
            quantity: quantity.to_string(),
            count: n,
            min: lo,
            max: hi,
            mean: sum / n as f64,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioStats {
    pub count: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub spread: f64,
    pub constant: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tolerance {
    Absolute(f64),
    Relative { rel: f64, floor: f64 },
}

impl Tolerance {
    /// Default for a family target.
    pub fn for_invariant(kind: InvariantKind) -> Self {
        if kind.is_zero_target() {
            Tolerance::Absolute(ZERO_TARGET_TOL)
        } else {
            Tolerance::Relative {
                rel: CONST_TARGET_REL,
                floor: CONST_TARGET_FLOOR,
            }
        }
    }

    /// Largest admissible `|value - target|`.
    pub fn bound(&self, target: f64) -> f64 {
        match *self {
            Tolerance::Absolute(t) => t,
            Tolerance::Relative { rel, floor } => (rel * target.abs()).max(floor),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Degenerate,
    DisputedReport,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Degenerate => "DEGENERATE",
            Verdict::DisputedReport => "DISPUTED-REPORT",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Family,
    Oracle,
    Relation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check: CheckKind,
    pub family: String,
    pub params: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<ExpectedInvariant>,
    pub grid: GridSpec,
    pub counts: Counts,
    /// Nodes at which the target quantity was evaluated.
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<Tolerance>,
    pub residuals: Vec<ResidualStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measured: Option<FieldStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<RatioStats>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl VerificationReport {
    /// Largest residual over all targets.
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.max).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

fn params_map(spec: &FamilySpec) -> BTreeMap<String, f64> {
    spec.params()
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
}

fn covers_half(checked: usize, total: usize) -> bool {
    2 * checked >= total
}

/// Check a family instance's claimed invariant on `grid` (whose rectangle is
/// used as the surface domain). `tol` defaults per [`Tolerance::for_invariant`].
pub fn verify_family(
    spec: &FamilySpec,
    grid: &GridSpec,
    tol: Option<Tolerance>,
) -> Result<VerificationReport> {
    let (surface, expected) = build(spec, grid.domain)?;
    let mut report = verify_surface(&surface, spec.name(), &expected, grid, tol);
    report.params = params_map(spec);
    Ok(report)
}

/// Check an arbitrary surface against an expected invariant.
pub fn verify_surface(
    s: &FactorableSurface,
    name: &str,
    expected: &ExpectedInvariant,
    grid: &GridSpec,
    tol: Option<Tolerance>,
) -> VerificationReport {
    let kind = expected.kind;
    let gauss = kind.targets_gauss();
    let samples = sample_grid(s, grid, |j, x, z, class| match class {
        NodeClass::Admissible if gauss => gauss_from_jets(j, x, z).ok(),
        NodeClass::Admissible => mean_from_jets(j, x, z).ok(),
        NodeClass::Timelike if gauss => gauss_from_jets(j, x, z).ok(),
        _ => None,
    });
    let counts = count(&samples);
    let target = kind.target_value();
    let tol = tol.unwrap_or_else(|| Tolerance::for_invariant(kind));
    let bound = tol.bound(target);

    let mut acc = Accum::new();
    for smp in &samples {
        if let Some(v) = smp.value {
            acc.push((v - target).abs(), smp.i, smp.j, smp.x, smp.z);
        }
    }
    let quantity = kind.quantity();
    let residual = acc.finish(format!("|{quantity} - {target}|"));
    let checked = residual.count;
    let measured = FieldStats::from_values(quantity, samples.iter().filter_map(|s| s.value));

    let mut notes = Vec::new();
    let verdict = if expected.disputed {
        if let Some(n) = &expected.note {
            notes.push(n.clone());
        }
        if let Some(m) = &measured {
            notes.push(format!(
                "measured {quantity} in [{}, {}] (mean {}) against claimed {kind}",
                m.min, m.max, m.mean
            ));
        }
        Verdict::DisputedReport
    } else if checked == 0 && counts.lightlike_skipped > 0 {
        notes.push(format!(
            "degenerate: every evaluated node is lightlike ({} of {}), D = 0 so {quantity} is undefined",
            counts.lightlike_skipped,
            grid.total()
        ));
        Verdict::Degenerate
    } else if checked > 0 && residual.max <= bound && covers_half(checked, grid.total()) {
        Verdict::Pass
    } else {
        if !covers_half(checked, grid.total()) {
            notes.push(format!(
                "only {checked} of {} nodes evaluated (< 50%)",
                grid.total()
            ));
        }
        if residual.max > bound {
            notes.push(format!("max residual {} exceeds {bound}", residual.max));
        }
        Verdict::Fail
    };
    if !gauss && counts.timelike_normal > 0 {
        notes.push(format!(
            "{} timelike-normal nodes skipped (H undefined)",
            counts.timelike_normal
        ));
    }

    VerificationReport {
        check: CheckKind::Family,
        family: name.to_string(),
        params: BTreeMap::new(),
        expected: Some(expected.clone()),
        grid: *grid,
        counts,
        checked,
        tolerance: Some(tol),
        residuals: vec![residual],
        measured,
        ratio: None,
        verdict,
        notes,
    }
}

/// `|a - b| / max(|a|, |b|, floor/rel)`: at most `rel` exactly when
/// `|a - b| <= max(rel * max(|a|, |b|), floor)`.
pub fn scaled_discrepancy(a: f64, b: f64, rel: f64, floor: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(floor / rel)
}

/// Closed forms against the fundamental-form route at every admissible node.
pub fn oracle_compare(s: &FactorableSurface, name: &str, grid: &GridSpec) -> VerificationReport {
    let samples = sample_grid(s, grid, |j, x, z, class| {
        if class != NodeClass::Admissible {
            return None;
        }
        let k = gauss_from_jets(j, x, z).ok()?;
        let h = mean_from_jets(j, x, z).ok()?;
        let (kg, hg) = general_from_jets(j, x, z).ok()?;
        Some((
            scaled_discrepancy(k, kg, ORACLE_REL, ORACLE_FLOOR),
            scaled_discrepancy(h, hg, ORACLE_REL, ORACLE_FLOOR),
        ))
    });
    let counts = count(&samples);
    let (mut ka, mut ha) = (Accum::new(), Accum::new());
    for smp in &samples {
        if let Some((dk, dh)) = smp.value {
            ka.push(dk, smp.i, smp.j, smp.x, smp.z);
            ha.push(dh, smp.i, smp.j, smp.x, smp.z);
        }
    }
    let residuals = vec![
        ka.finish("K closed vs general (scaled)"),
        ha.finish("H closed vs general (scaled)"),
    ];
    let checked = residuals[0].count;
    let worst = residuals.iter().map(|r| r.max).fold(0.0, f64::max);
    let mut notes = Vec::new();
    let verdict = if checked == 0 && counts.lightlike_skipped > 0 {
        notes.push("no admissible node: surface is lightlike on the grid".to_string());
        Verdict::Degenerate
    } else if checked > 0 && worst <= ORACLE_REL && covers_half(checked, grid.total()) {
        Verdict::Pass
    } else {
        if !covers_half(checked, grid.total()) {
            notes.push(format!(
                "only {checked} of {} nodes admissible",
                grid.total()
            ));
        }
        Verdict::Fail
    };
    VerificationReport {
        check: CheckKind::Oracle,
        family: name.to_string(),
        params: BTreeMap::new(),
        expected: None,
        grid: *grid,
        counts,
        checked,
        tolerance: Some(Tolerance::Relative {
            rel: ORACLE_REL,
            floor: ORACLE_FLOOR,
        }),
        residuals,
        measured: None,
        ratio: None,
        verdict,
        notes,
    }
}

/// Pointwise ratio `H / (A K)` with `A` from [`relation_a_from_jets`]; the `H = A K`
/// relation. The relation is reported, never passed or failed.
pub fn relation_check(
    s: &FactorableSurface,
    name: &str,
    grid: &GridSpec,
) -> Result<VerificationReport> {
    let samples = sample_grid(s, grid, |j, x, z, class| {
        if class != NodeClass::Admissible {
            return None;
        }
        let k = gauss_from_jets(j, x, z).ok()?;
        let (den, _) = relation_denominator(j);
        if k.abs() <= RELATION_FILTER || den.abs() <= RELATION_FILTER {
            return None;
        }
        let a = relation_a_from_jets(j, x, z).ok()?;
        if (a * k).abs() <= RELATION_FILTER {
            return None;
        }
        let h = mean_from_jets(j, x, z).ok()?;
        Some(h / (a * k))
    });
    let counts = count(&samples);
    let ratios: Vec<f64> = samples.iter().filter_map(|s| s.value).collect();
    let field = FieldStats::from_values("H/(A K)", ratios.iter().copied()).ok_or_else(|| {
        Error::DegenerateRelation {
            reason: format!(
                "no node of the {}x{} grid has K, A and the A-denominator above {RELATION_FILTER}",
                grid.nx, grid.nz
            ),
        }
    })?;
    let spread = field.max - field.min;
    let constant = spread <= RELATION_CONSTANCY;
    let mut acc = Accum::new();
    for smp in &samples {
        if let Some(r) = smp.value {
            acc.push((r - field.mean).abs(), smp.i, smp.j, smp.x, smp.z);
        }
    }
    let notes = vec![
        format!(
            "measured H/(A K) = {} (spread {spread:e}, {} nodes); the relation H = A K predicts 1",
            field.mean, field.count
        ),
        if constant {
            "ratio is constant across the grid".to_string()
        } else {
            "ratio is NOT constant across the grid".to_string()
        },
    ];
    Ok(VerificationReport {
        check: CheckKind::Relation,
        family: name.to_string(),
        params: BTreeMap::new(),
        expected: None,
        grid: *grid,
        counts,
        checked: field.count,
        tolerance: None,
        residuals: vec![acc.finish("|H/(A K) - mean|")],
        measured: None,
        ratio: Some(RatioStats {
            count: field.count,
            min: field.min,
            max: field.max,
            mean: field.mean,
            spread,
            constant,
        }),
        verdict: Verdict::DisputedReport,
        notes,
    })
}

/// `K` field of one constant-`K` variant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariantField {
    pub variant: String,
    pub counts: Counts,
    pub gauss: Option<FieldStats>,
    pub max_abs_dev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub k0: f64,
    pub g0: f64,
    pub params: BTreeMap<String, f64>,
    pub grid: GridSpec,
    /// tanh argument `sqrt(K0) x`.
    pub statement: VariantField,
    /// tanh argument `g0 sqrt(K0) x`.
    pub derivation: VariantField,
    pub variants_coincide: bool,
}

fn gauss_field(s: &FactorableSurface, grid: &GridSpec, k0: f64, variant: &str) -> VariantField {
    let samples = sample_grid(s, grid, |j, x, z, class| match class {
        NodeClass::Admissible | NodeClass::Timelike => gauss_from_jets(j, x, z).ok(),
        _ => None,
    });
    let max_abs_dev = samples
        .iter()
        .filter_map(|s| s.value)
        .map(|k| (k - k0).abs())
        .fold(0.0, f64::max);
    VariantField {
        variant: variant.to_string(),
        counts: count(&samples),
        gauss: FieldStats::from_values("K", samples.iter().filter_map(|s| s.value)),
        max_abs_dev,
    }
}

/// Measure `K` for both tanh arguments of the constant-`K` family
/// (`lambda1 = lambda2 = 0`, `a = 1`, positive sign).
pub fn typo_probe_const_k(k0: f64, g0: f64, grid: &GridSpec) -> Result<ProbeReport> {
    let spec = FamilySpec::ConstK {
        k0,
        g0,
        lambda1: 0.0,
        lambda2: 0.0,
        a: 1.0,
        sign: 1.0,
    };
    typo_probe(&spec, grid)
}

pub fn typo_probe(spec: &FamilySpec, grid: &GridSpec) -> Result<ProbeReport> {
    let (k0, g0) = match *spec {
        FamilySpec::ConstK { k0, g0, .. } => (k0, g0),
        _ => {
            return Err(Error::Constraint {
                family: spec.name().to_string(),
                constraint: "typo probe applies to const-k only".to_string(),
            })
        }
    };
    let (statement, _) = build(spec, grid.domain)?;
    let derivation = const_k_derivation_variant(spec, grid.domain)?;
    Ok(ProbeReport {
        k0,
        g0,
        params: params_map(spec),
        grid: *grid,
        statement: gauss_field(
            &statement,
            grid,
            k0,
            "statement: tanh(sqrt(K0) x - g0 lambda1)",
        ),
        derivation: gauss_field(
            &derivation,
            grid,
            k0,
            "derivation: tanh(g0 sqrt(K0) x - g0 lambda1)",
        ),
        variants_coincide: statement == derivation,
    })
}
