use std::path::Path;

use convexity::cli::{invoke, read_points_csv};
use convexity::ConvexBody;
use serde_json::Value;
use tempfile::tempdir;

fn run(args: &[&str]) -> convexity::cli::Invocation {
    invoke(std::iter::once("convexity").chain(args.iter().copied()))
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

fn read_json(p: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn build_writes_body_and_verifies_pattern() {
    let dir = tempdir().unwrap();
    let out = path(dir.path(), "body.json");
    let inv = run(&["build", "--pattern", "1,3", "--out", &out, "--verify"]);
    assert_eq!(inv.code, 0, "{:?}", inv.message);
    let report = inv.report.unwrap();
    assert_eq!(
        report.outputs["verified_dims"],
        serde_json::json!([0, 1, 3])
    );
    let body = ConvexBody::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(body.body_dim(), 3);
}

#[test]
fn non_increasing_pattern_is_rejected() {
    assert_eq!(run(&["build", "--pattern", "3,2"]).code, 1);
    assert_eq!(run(&["build", "--pattern", "0,2"]).code, 1);
    assert_eq!(run(&["build", "--pattern", "-1"]).code, 1);
}

#[test]
fn unknown_subcommand_prints_usage() {
    let inv = run(&["triangulate"]);
    assert_eq!(inv.code, 1);
    assert!(inv.message.unwrap().contains("Usage"));
}

#[test]
fn lemma_check_counts_inclusive_range() {
    let dir = tempdir().unwrap();
    let out = path(dir.path(), "lemma.json");
    let inv = run(&[
        "lemma-check",
        "--seed-range",
        "0..10",
        "--dim",
        "3",
        "--out",
        &out,
    ]);
    assert_eq!(inv.code, 0);
    let v = read_json(&out);
    assert_eq!(v["passes"], 11);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn probe_from_file_and_fixture_agree() {
    let dir = tempdir().unwrap();
    let body = path(dir.path(), "tet.json");
    assert_eq!(
        run(&["catalog", "--name", "tetrahedron", "--out", &body]).code,
        0
    );
    let a = path(dir.path(), "a.json");
    let b = path(dir.path(), "b.json");
    assert_eq!(
        run(&[
            "probe",
            "--body",
            &body,
            "--samples",
            "500",
            "--seed",
            "3",
            "--out",
            &a
        ])
        .code,
        0
    );
    assert_eq!(
        run(&[
            "probe",
            "--fixture",
            "tetrahedron",
            "--samples",
            "500",
            "--seed",
            "3",
            "--out",
            &b
        ])
        .code,
        0
    );
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(read_json(&a)["pattern"], serde_json::json!([0, 1, 2, 3]));
}

#[test]
fn probe_requires_a_seed_and_one_body() {
    assert_eq!(
        run(&["probe", "--fixture", "disk", "--samples", "10"]).code,
        1
    );
    assert_eq!(run(&["probe", "--samples", "10", "--seed", "0"]).code, 1);
    assert_eq!(
        run(&["probe", "--fixture", "nonesuch", "--seed", "0"]).code,
        1
    );
}

#[test]
fn fractal_outputs_and_box_dimension() {
    let dir = tempdir().unwrap();
    let caps = path(dir.path(), "caps.json");
    assert_eq!(
        run(&["fractal", "--kind", "gasket", "--depth", "2", "--out", &caps]).code,
        0
    );
    assert_eq!(
        read_json(&caps)["caps"].as_array().unwrap().len(),
        4 + 2 * 8
    );

    let pts = path(dir.path(), "pts.csv");
    assert_eq!(
        run(&["fractal", "--kind", "sierpinski", "--points", "200000"]).code,
        1
    );
    let inv = run(&[
        "fractal",
        "--kind",
        "sierpinski",
        "--points",
        "200000",
        "--seed",
        "0",
        "--out",
        &pts,
    ]);
    assert_eq!(inv.code, 0);
    assert_eq!(
        read_points_csv(&std::fs::read_to_string(&pts).unwrap())
            .unwrap()
            .len(),
        200_000
    );

    let fit = path(dir.path(), "fit.json");
    assert_eq!(
        run(&["boxdim", "--in", &pts, "--scales", "3..7", "--out", &fit]).code,
        0
    );
    let v = read_json(&fit);
    assert_eq!(v["scales"].as_array().unwrap().len(), 5);
    let slope = v["slope"].as_f64().unwrap();
    assert!((slope - 1.585).abs() < 0.1, "{slope}");
    assert!(v["r2"].as_f64().unwrap() > 0.99);
    assert_eq!(run(&["boxdim", "--in", &pts, "--scales", "3..4"]).code, 1);
}

#[test]
fn gasket_residual_points_as_csv() {
    let dir = tempdir().unwrap();
    let pts = path(dir.path(), "res.csv");
    let inv = run(&[
        "fractal", "--kind", "gasket", "--depth", "3", "--points", "1000", "--seed", "1", "--out",
        &pts,
    ]);
    assert_eq!(inv.code, 0);
    assert_eq!(
        read_points_csv(&std::fs::read_to_string(&pts).unwrap())
            .unwrap()
            .len(),
        1000
    );
}

#[test]
fn mesh_export_writes_obj() {
    let dir = tempdir().unwrap();
    let obj = path(dir.path(), "tet.obj");
    let inv = run(&[
        "export-mesh",
        "--fixture",
        "tetrahedron",
        "--resolution",
        "2",
        "--out",
        &obj,
    ]);
    assert_eq!(inv.code, 0);
    assert_eq!(inv.report.unwrap().outputs["facet_planes"], 4);
    let text = std::fs::read_to_string(&obj).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 4);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 4);
    assert_eq!(run(&["export-mesh", "--fixture", "disk"]).code, 1);
}

#[test]
fn catalog_lists_patterns() {
    let inv = run(&["catalog"]);
    assert_eq!(inv.code, 0);
    let out = inv.report.unwrap().outputs;
    assert_eq!(out["ball3"], serde_json::json!([0, 3]));
    assert_eq!(out["triangle"], serde_json::json!([0, 1, 2]));
}
