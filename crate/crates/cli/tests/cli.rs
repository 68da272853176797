use std::path::PathBuf;
use std::process::{Command, Output};

fn stadapt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stadapt")).args(args).output().expect("spawn stadapt")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("stadapt-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

const SQUARE: &str = "MeshVersionFormatted 2
Dimension 2
Vertices
4
0 0 0
1 0 0
1 1 0
0 1 0
Triangles
2
1 2 3 0
1 3 4 0
Edges
4
1 2 1
2 3 2
3 4 3
4 1 4
Corners
4
1
2
3
4
End
";

#[test]
fn mesh_info_on_two_triangles() {
    let d = scratch("info");
    let p = d.join("square.mesh");
    std::fs::write(&p, SQUARE).unwrap();
    let o = stadapt(&["mesh-info", p.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    for l in ["V=4", "T=2", "E=5", "E_boundary=4"] {
        assert!(s.lines().any(|x| x == l), "missing {l} in\n{s}");
    }
}

#[test]
fn mesh_info_uniform() {
    let o = stadapt(&["mesh-info", "--uniform", "4,2"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("V=15\n") && s.contains("T=16\n"), "{s}");
}

#[test]
fn fixed_point_prints_time_step_and_csv() {
    let o = stadapt(&[
        "fixed-point", "--n-i", "4", "--n-t", "2", "--n-avg", "300", "--n-fp", "2", "--init-nx", "10", "--init-ny", "5",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    assert!(s.contains("# dt = 0.125"), "{s}");
    assert!(s.contains("fp_iter,interval,N_v,complexity,N_st,E"), "{s}");
    let rows = s.lines().filter(|l| !l.starts_with('#') && !l.starts_with("fp_iter")).count();
    assert_eq!(rows, 8);
}

#[test]
fn solve_runs_one_iteration() {
    let o = stadapt(&["solve", "--n-i", "2", "--n-t", "2", "--init-nx", "8", "--init-ny", "4"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    assert!(s.contains("# fp 1:") && !s.contains("# fp 2:"), "{s}");
}

#[test]
fn study_writes_summary() {
    let d = scratch("study");
    let o = stadapt(&[
        "study", "--kind", "fixed-ni", "--sweep", "200,400,800", "--n-i", "2", "--n-t", "2", "--n-fp", "2",
        "--init-nx", "8", "--init-ny", "4", "--no-svg", "--output", d.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("fp_iter,interval,N_v,complexity,N_st,E"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("r = "));
    let summary = std::fs::read_to_string(d.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 4);
}

#[test]
fn study_with_two_points_is_rejected() {
    let o = stadapt(&["study", "--kind", "fixed-ni", "--sweep", "200,400"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn adapt_to_constant_size() {
    let d = scratch("adapt");
    let (m, out) = (d.join("in.mesh"), d.join("out.mesh"));
    std::fs::write(&m, SQUARE).unwrap();
    let o = stadapt(&["adapt", "--mesh", m.to_str().unwrap(), "--size", "0.1,0.1", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: usize = stdout(&o).lines().find_map(|l| l.strip_prefix("V_out=")).unwrap().parse().unwrap();
    assert!(v > 60, "{v}");
    let info = stadapt(&["mesh-info", out.to_str().unwrap()]);
    assert!(stdout(&info).contains(&format!("V={v}\n")));
}

#[test]
fn unknown_flag_exits_2() {
    assert_eq!(stadapt(&["fixed-point", "--bogus"]).status.code(), Some(2));
    assert_eq!(stadapt(&["mesh-info", "--uniform", "4"]).status.code(), Some(2));
}

#[test]
fn bad_config_exits_2() {
    let d = scratch("cfg");
    let p = d.join("bad.cfg");
    std::fs::write(&p, "n_i = 4\nn_t = banana\n").unwrap();
    let o = stadapt(&["fixed-point", "--config", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2"), "error should name the line");
    assert_eq!(stadapt(&["fixed-point", "--n-i", "0"]).status.code(), Some(2));
    assert_eq!(stadapt(&["mesh-info", "/nonexistent/x.mesh"]).status.code(), Some(2));
}
