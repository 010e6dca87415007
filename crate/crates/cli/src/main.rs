use clap::{Args, Parser, Subcommand};
use pgsurf::curvature::{evaluate, form_bundle};
use pgsurf::doc::{surface_from_str, surface_to_value};
use pgsurf::export::SurfaceMesh;
use pgsurf::families::{
    build, catalog, catalog_entry, ExpectedInvariant, FamilySpec, InvariantKind,
};
use pgsurf::verify::{
    oracle_compare, relation_check, typo_probe_const_k, verify_family, verify_surface, GridSpec,
    Tolerance, Verdict, VerificationReport,
};
use pgsurf::{Error, FactorableSurface, Rect};
use serde::Serialize;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

mod exit {
    pub const FAIL: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const DOMAIN: u8 = 3;
    pub const IO: u8 = 4;
}

#[derive(Parser)]
#[command(
    name = "pgsurf",
    version,
    about = "Curvature of affine factorable surfaces in pseudo-Galilean space"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// K, H, Omega, D and the fundamental forms at one point.
    Curvature(PointArgs),
    /// Fundamental form coefficients and unit normal at one point.
    Forms(PointArgs),
    /// Residual check of a family claim, a closed-form/oracle comparison
    /// or the H = A K relation.
    Verify(VerifyArgs),
    /// List the family catalog.
    Catalog,
    /// Write the four example surfaces as OBJ + CSV with a summary.
    Figures {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "101x101", value_parser = parse_grid)]
        grid: (usize, usize),
    },
    /// Sample a surface into an OBJ mesh and a per-vertex CSV.
    ExportMesh {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "101x101", value_parser = parse_grid)]
        grid: (usize, usize),
        #[arg(long)]
        obj: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Compare both tanh arguments of the constant-K family.
    TypoProbe {
        #[arg(long = "k0")]
        k0: f64,
        #[arg(long = "g0")]
        g0: f64,
        #[arg(long, default_value = "101x101", value_parser = parse_grid)]
        grid: (usize, usize),
        /// `x_min,x_max,z_min,z_max`
        #[arg(long, default_value = "-1,1,-1,1", value_parser = parse_domain, allow_hyphen_values = true)]
        domain: Rect,
    },
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct SourceGroup {
    /// Catalog family name.
    #[arg(long)]
    family: Option<String>,
    /// Surface document (JSON).
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct Source {
    #[command(flatten)]
    which: SourceGroup,
    /// Override a family parameter, `name=value`; repeatable.
    #[arg(long = "set", value_parser = parse_assignment)]
    set: Vec<(String, f64)>,
    /// Override the rectangle, `x_min,x_max,z_min,z_max`.
    #[arg(long, value_parser = parse_domain, allow_hyphen_values = true)]
    domain: Option<Rect>,
}

#[derive(Args)]
struct PointArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, allow_hyphen_values = true)]
    x: f64,
    #[arg(long, allow_hyphen_values = true)]
    z: f64,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, conflicts_with_all = ["family", "spec"])]
    all: bool,
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long = "set", value_parser = parse_assignment)]
    set: Vec<(String, f64)>,
    #[arg(long, value_parser = parse_domain, allow_hyphen_values = true)]
    domain: Option<Rect>,
    #[arg(long, default_value = "101x101", value_parser = parse_grid)]
    grid: (usize, usize),
    /// Absolute for zero targets, relative (1e-12 floor) otherwise.
    #[arg(long)]
    tol: Option<f64>,
    /// Claim for a `--spec` surface: `K=0`, `H=0`, `K=<v>` or `H=<v>`.
    #[arg(long, value_parser = parse_expect)]
    expect: Option<InvariantKind>,
    /// Report the ratio H / (A K) instead of checking the claim.
    #[arg(long, conflicts_with = "oracle")]
    relation: bool,
    /// Compare closed forms with the fundamental-form route.
    #[arg(long)]
    oracle: bool,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected NxM, got `{s}`"))?;
    let n = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    Ok((n(a)?, n(b)?))
}

fn parse_domain(s: &str) -> Result<Rect, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [a, b, c, d] => Ok(Rect::new(a, b, c, d)),
        _ => Err(format!("expected x_min,x_max,z_min,z_max, got `{s}`")),
    }
}

fn parse_assignment(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let v = v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"))?;
    Ok((k.trim().to_string(), v))
}

fn parse_expect(s: &str) -> Result<InvariantKind, String> {
    let (q, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected K=<v> or H=<v>, got `{s}`"))?;
    let v = v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"))?;
    match (q.trim(), v == 0.0) {
        ("K", true) => Ok(InvariantKind::KZero),
        ("H", true) => Ok(InvariantKind::HZero),
        ("K", false) => Ok(InvariantKind::KConst(v)),
        ("H", false) => Ok(InvariantKind::HConst(v)),
        _ => Err(format!("quantity must be K or H, got `{q}`")),
    }
}

/// A command failure: message for stderr and exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Schema { .. }
            | Error::UnknownFamily { .. }
            | Error::UnknownParam { .. }
            | Error::InvalidGrid(_) => exit::USAGE,
            Error::Io { .. } => exit::IO,
            _ => exit::DOMAIN,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<ExitCode, Failure>;

fn read_spec(path: &Path) -> Result<FactorableSurface, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Failure::from(Error::Io {
            path: path.display().to_string(),
            cause: e.to_string(),
        })
    })?;
    let s = surface_from_str(&text).map_err(|e| match e {
        Error::Schema { path: p, message } => Failure {
            code: exit::USAGE,
            message: format!("{}: schema error at {p}: {message}", path.display()),
        },
        other => other.into(),
    })?;
    Ok(s)
}

/// Catalog family with `--set` overrides applied, and its rectangle.
fn family_spec(
    name: &str,
    set: &[(String, f64)],
    domain: Option<Rect>,
) -> Result<(FamilySpec, Rect), Failure> {
    let entry = catalog_entry(name)?;
    let mut spec = entry.spec;
    for (k, v) in set {
        spec.set(k, *v)?;
    }
    Ok((spec, domain.unwrap_or(entry.domain)))
}

fn load_surface(src: &Source) -> Result<(String, FactorableSurface), Failure> {
    match (&src.which.family, &src.which.spec) {
        (Some(name), _) => {
            let (spec, domain) = family_spec(name, &src.set, src.domain)?;
            let (s, _) = build(&spec, domain)?;
            Ok((name.clone(), s))
        }
        (None, Some(path)) => {
            if !src.set.is_empty() {
                return Err(usage("--set applies to --family only"));
            }
            let s = read_spec(path)?;
            let s = match src.domain {
                Some(d) => s.with_domain(d),
                None => s,
            };
            Ok((path.display().to_string(), s))
        }
        (None, None) => Err(usage("one of --family or --spec is required")),
    }
}

fn usage(message: &str) -> Failure {
    Failure {
        code: exit::USAGE,
        message: message.to_string(),
    }
}

fn print_json(v: &impl Serialize) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("output serializes")
    );
}

fn grid(dims: (usize, usize), domain: Rect) -> Result<GridSpec, Failure> {
    Ok(GridSpec::new(dims.0, dims.1, domain)?)
}

fn cmd_curvature(args: &PointArgs) -> CmdResult {
    let (_, s) = load_surface(&args.source)?;
    let p = evaluate(&s, args.x, args.z)?;
    let mut out = json!({
        "x": args.x,
        "z": args.z,
        "K": p.k,
        "omega": p.omega,
        "normal_class": p.normal_class,
    });
    match form_bundle(&s, args.x, args.z) {
        Ok(fb) => {
            for (k, v) in [
                ("E", fb.e),
                ("F", fb.f),
                ("G", fb.g),
                ("L", fb.l),
                ("M", fb.m),
                ("N", fb.n),
                ("D", fb.d),
            ] {
                out[k] = json!(v);
            }
            out["H"] = json!(p.h);
        }
        Err(e) => {
            out["H_undefined"] = json!(e.to_string());
        }
    }
    print_json(&out);
    Ok(ExitCode::SUCCESS)
}

fn cmd_forms(args: &PointArgs) -> CmdResult {
    let (_, s) = load_surface(&args.source)?;
    let fb = form_bundle(&s, args.x, args.z)?;
    print_json(&json!({
        "x": args.x,
        "z": args.z,
        "forms": fb,
        "normal": fb.normal.to_array(),
        "EG-F2": fb.e * fb.g - fb.f * fb.f,
    }));
    Ok(ExitCode::SUCCESS)
}

fn tolerance_for(kind: InvariantKind, tol: Option<f64>) -> Option<Tolerance> {
    tol.map(|t| match Tolerance::for_invariant(kind) {
        Tolerance::Absolute(_) => Tolerance::Absolute(t),
        Tolerance::Relative { floor, .. } => Tolerance::Relative { rel: t, floor },
    })
}

fn verdict_code(v: Verdict) -> ExitCode {
    if v == Verdict::Fail {
        ExitCode::from(exit::FAIL)
    } else {
        ExitCode::SUCCESS
    }
}

#[derive(Serialize)]
struct SummaryRow {
    family: String,
    expected: String,
    verdict: Verdict,
    max_residual: f64,
    checked: usize,
    lightlike_skipped: usize,
}

fn summary_row(r: &VerificationReport) -> SummaryRow {
    SummaryRow {
        family: r.family.clone(),
        expected: r
            .expected
            .as_ref()
            .map(|e| e.kind.to_string())
            .unwrap_or_default(),
        verdict: r.verdict,
        max_residual: r.max_residual(),
        checked: r.checked,
        lightlike_skipped: r.counts.lightlike_skipped,
    }
}

fn cmd_verify(args: &VerifyArgs) -> CmdResult {
    if args.all {
        let mut reports = Vec::new();
        for entry in catalog() {
            let g = grid(args.grid, entry.domain)?;
            let tol = args
                .tol
                .and_then(|t| tolerance_for(entry.spec.expected().kind, Some(t)));
            reports.push(verify_family(&entry.spec, &g, tol)?);
        }
        let summary: Vec<SummaryRow> = reports.iter().map(summary_row).collect();
        eprintln!(
            "{:<20} {:<8} {:<16} {:>12}",
            "family", "claim", "verdict", "max residual"
        );
        for row in &summary {
            eprintln!(
                "{:<20} {:<8} {:<16} {:>12.3e}",
                row.family,
                row.expected,
                row.verdict.as_str(),
                row.max_residual
            );
        }
        let failed = reports.iter().any(|r| r.verdict == Verdict::Fail);
        print_json(&json!({ "reports": reports, "summary": summary }));
        return Ok(if failed {
            ExitCode::from(exit::FAIL)
        } else {
            ExitCode::SUCCESS
        });
    }

    let source = Source {
        which: SourceGroup {
            family: args.family.clone(),
            spec: args.spec.clone(),
        },
        set: args.set.clone(),
        domain: args.domain,
    };
    if args.relation || args.oracle {
        let (name, s) = load_surface(&source)?;
        let g = grid(args.grid, s.domain)?;
        let report = if args.relation {
            relation_check(&s, &name, &g)?
        } else {
            oracle_compare(&s, &name, &g)
        };
        print_json(&report);
        return Ok(verdict_code(report.verdict));
    }

    let report = match (&args.family, &args.spec) {
        (Some(name), _) => {
            if args.expect.is_some() {
                return Err(usage(
                    "--expect applies to --spec only; families carry their own claim",
                ));
            }
            let (spec, domain) = family_spec(name, &args.set, args.domain)?;
            let g = grid(args.grid, domain)?;
            verify_family(&spec, &g, tolerance_for(spec.expected().kind, args.tol))?
        }
        (None, Some(_)) => {
            let kind = args
                .expect
                .ok_or_else(|| usage("--spec needs --expect (or --oracle / --relation)"))?;
            let (name, s) = load_surface(&source)?;
            let g = grid(args.grid, s.domain)?;
            let expected = ExpectedInvariant {
                kind,
                disputed: false,
                note: None,
            };
            verify_surface(&s, &name, &expected, &g, tolerance_for(kind, args.tol))
        }
        (None, None) => return Err(usage("one of --family, --spec or --all is required")),
    };
    print_json(&report);
    Ok(verdict_code(report.verdict))
}

fn cmd_catalog() -> CmdResult {
    let mut out = Vec::new();
    for entry in catalog() {
        let (s, expected) = entry.build()?;
        let params: serde_json::Map<String, Value> = entry
            .spec
            .params()
            .into_iter()
            .map(|(k, v)| (k.to_string(), json!(v)))
            .collect();
        out.push(json!({
            "name": entry.name,
            "formula": entry.spec.formula(),
            "params": params,
            "domain": entry.domain.to_array(),
            "expected": expected,
            "figure": entry.figure,
            "surface": surface_to_value(&s),
        }));
    }
    print_json(&out);
    Ok(ExitCode::SUCCESS)
}

fn write_mesh(
    s: &FactorableSurface,
    g: &GridSpec,
    obj: Option<&Path>,
    csv: Option<&Path>,
) -> Result<(), Failure> {
    let mesh = SurfaceMesh::build(s, g, csv.is_some())?;
    if let Some(p) = obj {
        mesh.write_obj(p)?;
    }
    if let Some(p) = csv {
        mesh.write_csv(p)?;
    }
    Ok(())
}

fn cmd_figures(out: &Path, dims: (usize, usize)) -> CmdResult {
    std::fs::create_dir_all(out).map_err(|e| {
        Failure::from(Error::Io {
            path: out.display().to_string(),
            cause: e.to_string(),
        })
    })?;
    let mut figs: Vec<_> = catalog()
        .into_iter()
        .filter_map(|e| e.figure.map(|n| (n, e)))
        .collect();
    figs.sort_by_key(|(n, _)| *n);
    let mut summary = Vec::new();
    let mut failed = false;
    for (n, entry) in figs {
        let (s, _) = entry.build()?;
        let g = grid(dims, entry.domain)?;
        let (obj, csv) = (
            out.join(format!("fig{n}.obj")),
            out.join(format!("fig{n}.csv")),
        );
        write_mesh(&s, &g, Some(&obj), Some(&csv))?;
        let report = verify_family(&entry.spec, &g, None)?;
        failed |= report.verdict == Verdict::Fail;
        summary.push(json!({
            "figure": n,
            "family": entry.name,
            "domain": entry.domain.to_array(),
            "grid": [g.nx, g.nz],
            "obj": format!("fig{n}.obj"),
            "csv": format!("fig{n}.csv"),
            "claim": report.expected.as_ref().map(|e| e.kind.to_string()),
            "verdict": report.verdict,
            "max_residual": report.max_residual(),
            "counts": report.counts,
        }));
    }
    let path = out.join("summary.json");
    let text = serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n";
    std::fs::write(&path, text).map_err(|e| {
        Failure::from(Error::Io {
            path: path.display().to_string(),
            cause: e.to_string(),
        })
    })?;
    print_json(&summary);
    Ok(if failed {
        ExitCode::from(exit::FAIL)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_export(
    source: &Source,
    dims: (usize, usize),
    obj: Option<&Path>,
    csv: Option<&Path>,
) -> CmdResult {
    if obj.is_none() && csv.is_none() {
        return Err(usage("give --obj and/or --csv"));
    }
    let (name, s) = load_surface(source)?;
    let g = grid(dims, s.domain)?;
    write_mesh(&s, &g, obj, csv)?;
    print_json(&json!({
        "surface": name,
        "vertices": g.total(),
        "faces": 2 * (g.nx - 1) * (g.nz - 1),
        "obj": obj.map(|p| p.display().to_string()),
        "csv": csv.map(|p| p.display().to_string()),
    }));
    Ok(ExitCode::SUCCESS)
}

fn cmd_typo_probe(k0: f64, g0: f64, dims: (usize, usize), domain: Rect) -> CmdResult {
    let report = typo_probe_const_k(k0, g0, &grid(dims, domain)?)?;
    print_json(&report);
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Curvature(a) => cmd_curvature(&a),
        Command::Forms(a) => cmd_forms(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Catalog => cmd_catalog(),
        Command::Figures { out, grid } => cmd_figures(&out, grid),
        Command::ExportMesh {
            source,
            grid,
            obj,
            csv,
        } => cmd_export(&source, grid, obj.as_deref(), csv.as_deref()),
        Command::TypoProbe {
            k0,
            g0,
            grid,
            domain,
        } => cmd_typo_probe(k0, g0, grid, domain),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
