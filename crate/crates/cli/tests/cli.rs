use serde_json::{json, Value};
use std::path::Path;
use std::process::Command;

struct Run {
    code: i32,
    json: Value,
    stdout: String,
    stderr: String,
}

fn pgsurf(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_pgsurf"))
        .args(args)
        .output()
        .expect("run pgsurf");
    let stdout = String::from_utf8(out.stdout).unwrap();
    Run {
        code: out.status.code().unwrap_or(-1),
        json: serde_json::from_str(&stdout).unwrap_or(Value::Null),
        stdout,
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn spec_file(dir: &Path, doc: &Value) -> String {
    let p = dir.join("s.json");
    std::fs::write(&p, doc.to_string()).unwrap();
    p.display().to_string()
}

fn plane() -> Value {
    json!({"a": 1.5, "f": {"kind": "const", "c": 2.0},
           "g": {"kind": "linear", "m": 0.25, "b": 1.0}, "domain": [-1, 1, -1, 1]})
}

#[test]
fn curvature_const_h_example_at_origin() {
    let r = pgsurf(&["curvature", "--family", "const-h-b", "--x", "0", "--z", "0"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    for key in [
        "E",
        "F",
        "G",
        "L",
        "M",
        "N",
        "D",
        "K",
        "H",
        "omega",
        "normal_class",
    ] {
        assert!(!r.json[key].is_null(), "missing {key}");
    }
    assert_eq!(r.json["K"], 0.0);
    assert_eq!(r.json["H"], 1.0);
    assert!(r.stderr.is_empty());
}

#[test]
fn curvature_of_plane_has_zero_second_form() {
    let dir = tempfile::tempdir().unwrap();
    let spec = spec_file(dir.path(), &plane());
    let r = pgsurf(&["curvature", "--spec", &spec, "--x", "0.2", "--z", "-0.4"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    for key in ["L", "M", "N", "K", "H"] {
        assert_eq!(r.json[key], 0.0, "{key}");
    }
}

#[test]
fn curvature_const_k_example_at_origin() {
    let r = pgsurf(&["curvature", "--family", "const-k", "--x", "0", "--z", "0"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["K"], 1.0);
}

#[test]
fn timelike_point_omits_h_with_reason() {
    // flat-exp at (1, 6): (f g')^2 far above 1
    let r = pgsurf(&["curvature", "--family", "flat-exp", "--x", "1", "--z", "6"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json["normal_class"], "timelike");
    assert!(r.json.get("H").is_none());
    assert!(r.json["H_undefined"].as_str().unwrap().contains("timelike"));
    assert!(r.json["K"].is_number());
}

#[test]
fn lightlike_point_exits_3() {
    let r = pgsurf(&[
        "curvature",
        "--family",
        "min-g-lin-f-const",
        "--x",
        "0",
        "--z",
        "0",
    ]);
    assert_eq!(r.code, 3);
    assert!(r.stdout.is_empty());
    assert!(r.stderr.contains("lightlike"));
}

#[test]
fn out_of_domain_point_exits_3() {
    let r = pgsurf(&["curvature", "--family", "const-k", "--x", "5", "--z", "0"]);
    assert_eq!(r.code, 3);
}

#[test]
fn forms_report_identity() {
    let r = pgsurf(&["forms", "--family", "const-k", "--x", "0.3", "--z", "-0.5"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["forms"]["E"], 1.0);
    assert_eq!(r.json["forms"]["F"], 0.0);
    let d = r.json["forms"]["D"].as_f64().unwrap();
    let det = r.json["EG-F2"].as_f64().unwrap();
    assert!((det + d * d).abs() <= 1e-12);
}

#[test]
fn schema_errors_carry_pointer_path() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc = plane();
    doc["g"] = json!({"kind": "sum", "args": [{"kind": "tanh", "s": 1, "k": 1}]});
    let spec = spec_file(dir.path(), &doc);
    let r = pgsurf(&["curvature", "--spec", &spec, "--x", "0", "--z", "0"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("/g/args/0/b"), "{}", r.stderr);
    assert!(r.stdout.is_empty());
}

#[test]
fn unknown_family_lists_names() {
    let r = pgsurf(&["verify", "--family", "flat"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("flat-exp") && r.stderr.contains("const-h-b"));
}

#[test]
fn unknown_parameter_exits_2() {
    let r = pgsurf(&["verify", "--family", "const-k", "--set", "K9=1"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("K0"), "{}", r.stderr);
}

#[test]
fn constraint_violation_exits_3() {
    let r = pgsurf(&["verify", "--family", "const-k", "--set", "K0=-1"]);
    assert_eq!(r.code, 3, "{}", r.stderr);
    assert!(r.stderr.contains("K0"));
}

#[test]
fn set_overrides_parameters() {
    let r = pgsurf(&[
        "verify", "--family", "const-k", "--set", "K0=4", "--grid", "21x21",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json["params"]["K0"], 4.0);
    assert_eq!(r.json["expected"]["kind"], "K=4");
    assert_eq!(r.json["verdict"], "PASS");
}

#[test]
fn failing_claim_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let doc = json!({"a": 10.0, "f": {"kind": "tanh", "s": 1, "k": 1, "b": 0},
                     "g": {"kind": "linear", "m": 1, "b": 0}, "domain": [-1, 1, -1, 1]});
    let spec = spec_file(dir.path(), &doc);
    let r = pgsurf(&[
        "verify", "--spec", &spec, "--expect", "K=0", "--grid", "11x11",
    ]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json["verdict"], "FAIL");
    assert!(r.json["residuals"][0]["argmax"].is_array());
}

#[test]
fn disputed_family_reports_without_failing() {
    let r = pgsurf(&["verify", "--family", "const-h-a"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["verdict"], "DISPUTED-REPORT");
    assert!(!r.json["notes"].as_array().unwrap().is_empty());
}

#[test]
fn degenerate_family_exits_0() {
    let r = pgsurf(&["verify", "--family", "min-g-lin-f-const", "--grid", "11x11"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["verdict"], "DEGENERATE");
}

#[test]
fn report_schema_fields() {
    let r = pgsurf(&["verify", "--family", "flat-exp", "--grid", "21x21"]);
    for key in ["family", "grid", "counts", "residuals", "verdict", "notes"] {
        assert!(!r.json[key].is_null(), "missing {key}");
    }
    let res = &r.json["residuals"][0];
    for key in ["max", "mean", "argmax"] {
        assert!(!res[key].is_null(), "missing residuals.{key}");
    }
    let c = &r.json["counts"];
    let total: u64 = [
        "admissible",
        "timelike_normal",
        "lightlike_skipped",
        "domain_skipped",
    ]
    .iter()
    .map(|k| c[k].as_u64().unwrap())
    .sum();
    assert_eq!(total, 441);
}

#[test]
fn bad_grid_is_usage_error() {
    assert_eq!(
        pgsurf(&["verify", "--family", "flat-exp", "--grid", "1x5"]).code,
        2
    );
    assert_eq!(
        pgsurf(&["verify", "--family", "flat-exp", "--grid", "abc"]).code,
        2
    );
    assert_eq!(pgsurf(&["verify"]).code, 2);
}

#[test]
fn spec_requires_expect() {
    let dir = tempfile::tempdir().unwrap();
    let spec = spec_file(dir.path(), &plane());
    assert_eq!(pgsurf(&["verify", "--spec", &spec]).code, 2);
    let r = pgsurf(&["verify", "--spec", &spec, "--oracle", "--grid", "11x11"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json["verdict"], "PASS");
}

#[test]
fn relation_on_flat_surface_exits_3() {
    let r = pgsurf(&["verify", "--family", "flat-f-const", "--relation"]);
    assert_eq!(r.code, 3);
}

#[test]
fn catalog_documents_round_trip_through_spec() {
    let r = pgsurf(&["catalog"]);
    assert_eq!(r.code, 0);
    let entries = r.json.as_array().unwrap();
    assert_eq!(entries.len(), 14);
    let dir = tempfile::tempdir().unwrap();
    let ck = entries.iter().find(|e| e["name"] == "const-k").unwrap();
    let spec = spec_file(dir.path(), &ck["surface"]);
    let a = pgsurf(&["curvature", "--spec", &spec, "--x", "0.4", "--z", "0.1"]);
    let b = pgsurf(&[
        "curvature",
        "--family",
        "const-k",
        "--x",
        "0.4",
        "--z",
        "0.1",
    ]);
    assert_eq!(a.json, b.json);
}

#[test]
fn export_mesh_writes_obj_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let obj = dir.path().join("m.obj");
    let csv = dir.path().join("m.csv");
    let r = pgsurf(&[
        "export-mesh",
        "--family",
        "const-h-b",
        "--grid",
        "51x51",
        "--obj",
        obj.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let obj = std::fs::read_to_string(obj).unwrap();
    let verts: Vec<Vec<f64>> = obj
        .lines()
        .filter(|l| l.starts_with("v "))
        .map(|l| l[2..].split(' ').map(|t| t.parse().unwrap()).collect())
        .collect();
    assert_eq!(verts.len(), 51 * 51);
    assert_eq!(
        obj.lines().filter(|l| l.starts_with("f ")).count(),
        2 * 50 * 50
    );
    for v in &verts {
        // -x^2 + 2x + 1 in nested form
        assert_eq!(v[1], (-v[0] + 2.0) * v[0] + 1.0);
    }
    let csv = std::fs::read_to_string(csv).unwrap();
    assert!(csv.starts_with("x,z,y,K,H,Dclass\n"));
    assert_eq!(csv.lines().count(), 51 * 51 + 1);
}

#[test]
fn export_to_missing_directory_exits_4() {
    let r = pgsurf(&[
        "export-mesh",
        "--family",
        "const-k",
        "--grid",
        "5x5",
        "--obj",
        "/nonexistent-dir/out.obj",
    ]);
    assert_eq!(r.code, 4);
    assert!(r.stderr.contains("/nonexistent-dir/out.obj"));
}

#[test]
fn csv_numbers_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let r = pgsurf(&[
        "figures",
        "--out",
        dir.path().to_str().unwrap(),
        "--grid",
        "21x21",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let csv = std::fs::read_to_string(dir.path().join("fig1.csv")).unwrap();
    let mut timelike = 0;
    for line in csv.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 6);
        for f in &fields[..5] {
            if !f.is_empty() {
                let v: f64 = f.parse().unwrap();
                assert_eq!(&v.to_string(), f);
            }
        }
        if fields[5] == "timelike" {
            timelike += 1;
            assert!(fields[4].is_empty(), "H defined at a timelike node");
        }
    }
    assert!(timelike > 0);
    let summary: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary.as_array().unwrap().len(), 4);
}

#[test]
fn typo_probe_unit_g0_variants_coincide() {
    let r = pgsurf(&["typo-probe", "--k0", "4", "--g0", "1", "--grid", "21x21"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json["variants_coincide"], true);
    assert!(r.json["statement"]["max_abs_dev"].as_f64().unwrap() <= 1e-9);
    assert!(r.json["derivation"]["max_abs_dev"].as_f64().unwrap() <= 1e-9);
    assert_eq!(pgsurf(&["typo-probe", "--k0", "1", "--g0", "0"]).code, 3);
}
