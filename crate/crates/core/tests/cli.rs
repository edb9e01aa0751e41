use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use zonolat::cli::files::{ProblemFile, SolutionFile, TraceEntry};

fn zonolat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zonolat")).args(args).output().unwrap()
}

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/corpus").join(name).display().to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn solves_worked_a2() {
    let out = zonolat(&["solve", &corpus("a2_worked.json")]);
    assert!(out.status.success());
    let sol = SolutionFile::parse(&stdout(&out)).unwrap();
    assert_eq!(sol.closest, vec![1, 0, -1]);
    assert_eq!(sol.distance_sq.0.to_string(), "19/50");
    assert!(sol.certified);
    assert_eq!(sol.iterations, 1);
    assert_eq!(sol.oracle_agreement, None);
}

#[test]
fn lattice_point_target() {
    let out = zonolat(&["solve", "--oracle", &corpus("a2_lattice_point.json")]);
    assert!(out.status.success());
    let sol = SolutionFile::parse(&stdout(&out)).unwrap();
    assert_eq!(sol.closest, vec![2, -1, -1]);
    assert_eq!(sol.distance_sq.0.to_string(), "0");
    assert_eq!(sol.iterations + 1, sol.lambda_trace.len());
    assert!(sol.certified);
    assert_eq!(sol.oracle_agreement, Some(true));
}

#[test]
fn non_tu_exits_one() {
    let out = zonolat(&["solve", &corpus("non_tu.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not totally unimodular"));
}

#[test]
fn projection_can_be_disabled() {
    let path = corpus("unprojected_target.json");
    assert!(zonolat(&["solve", &path]).status.success());
    assert_eq!(zonolat(&["solve", "--no-project", &path]).status.code(), Some(1));
}

#[test]
fn trace_file_written() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.json");
    let out = zonolat(&["solve", "--trace", trace.to_str().unwrap(), &corpus("a3_weighted.json")]);
    assert!(out.status.success());
    let sol = SolutionFile::parse(&stdout(&out)).unwrap();
    let entries: Vec<TraceEntry> = serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(entries.len(), sol.iterations);
    assert!(entries.windows(2).all(|w| w[1].distance_sq.0 < w[0].distance_sq.0));
}

#[test]
fn oracle_agrees_on_corpus() {
    for name in ["a2_worked.json", "a3_weighted.json", "a2_far_target.json", "graphic_k4.json"] {
        let out = zonolat(&["solve", "--oracle", &corpus(name)]);
        assert!(out.status.success(), "{name}");
        assert_eq!(SolutionFile::parse(&stdout(&out)).unwrap().oracle_agreement, Some(true), "{name}");
    }
}

fn construct_to(dir: &Path, args: &[&str]) -> ProblemFile {
    let path = dir.join("out.json");
    let mut full: Vec<&str> = vec!["construct"];
    full.extend_from_slice(args);
    let p = path.to_str().unwrap().to_string();
    full.extend(["-o", &p]);
    let out = zonolat(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    ProblemFile::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn construct_families() {
    let dir = tempfile::tempdir().unwrap();
    let an = construct_to(dir.path(), &["an", "--n", "2"]);
    assert_eq!(an.matrix, vec![vec![1, 1, 1]]);
    let tensor = construct_to(dir.path(), &["tensor", "--m", "2", "--n", "2"]);
    assert_eq!(tensor.m, 9);
    assert_eq!(tensor.lattice().unwrap().rank(), 4);
    let graphic = construct_to(dir.path(), &["graphic", "--vertices", "3", "--arcs", "0-1,1-2,2-0"]);
    assert_eq!(graphic.lattice().unwrap().rank(), 1);
    let cographic =
        construct_to(dir.path(), &["cographic", "--vertices", "3", "--arcs", "0-1,1-2,2-0", "--weights", "1,2,1/2"]);
    assert_eq!(cographic.lattice().unwrap().rank(), 2);
    assert_eq!(cographic.weights()[2].to_string(), "1/2");
}

#[test]
fn construct_vfk_from_gram() {
    let dir = tempfile::tempdir().unwrap();
    let gram = dir.path().join("a2.json");
    std::fs::write(&gram, r#"[[1, "-1/2", "-1/2"], ["-1/2", 1, "-1/2"], ["-1/2", "-1/2", 1]]"#).unwrap();
    let p = construct_to(dir.path(), &["vfk", "--gram", gram.to_str().unwrap()]);
    let lat = p.lattice().unwrap();
    assert_eq!((lat.dim(), lat.rank()), (3, 2));
    let voronoi_in = dir.path().join("vfk.json");
    std::fs::write(&voronoi_in, p.to_json()).unwrap();
    let out = zonolat(&["voronoi", voronoi_in.to_str().unwrap()]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["count"], 6);
}

#[test]
fn invalid_gram_names_condition() {
    let dir = tempfile::tempdir().unwrap();
    let gram = dir.path().join("bad.json");
    std::fs::write(&gram, r#"[[1, 1, -2], [1, 1, -2], [-2, -2, 4]]"#).unwrap();
    let out = zonolat(&["construct", "vfk", "--gram", gram.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("(iii)"));
}

#[test]
fn construct_is_deterministic() {
    let a = zonolat(&["construct", "graphic", "--vertices", "4", "--arcs", "0-1,1-2,2-3,3-0,0-2"]);
    let b = zonolat(&["construct", "graphic", "--vertices", "4", "--arcs", "0-1,1-2,2-3,3-0,0-2"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn voronoi_and_check_reports() {
    let out = zonolat(&["voronoi", &corpus("graphic_k4.json")]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // simple cycles of K4: four triangles and three 4-cycles, two orientations each
    assert_eq!(report["count"], 14);
    assert_eq!(report["rank"], 3);

    let out = zonolat(&["check", &corpus("unprojected_target.json")]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["tu_status"], "verified");
    assert_eq!(report["target_in_span"], false);
    assert_eq!(report["projected_target"], serde_json::json!(["1", "-1"]));
    assert_eq!(zonolat(&["check", &corpus("non_tu.json")]).status.code(), Some(1));
}

#[test]
fn bad_usage_exits_one() {
    assert_eq!(zonolat(&["solve"]).status.code(), Some(1));
    assert_eq!(zonolat(&["construct", "tensor", "--m", "x", "--n", "1"]).status.code(), Some(1));
    assert_eq!(zonolat(&["--version"]).status.code(), Some(0));
}
