use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn codesign(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_codesign")).args(args).output().expect("spawn codesign")
}

fn ok(args: &[&str]) {
    let out = codesign(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(codesign(&["--help"]).status.code(), Some(0));
    assert_eq!(codesign(&["--version"]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(codesign(&["--no-such-flag"]).status.code(), Some(1));
    assert_eq!(codesign(&["topo", "gen", "--rows", "2"]).status.code(), Some(1));
}

#[test]
fn contract_and_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    let bad = codesign(&["graph", "gen", "--nodes", "5", "--density", "1.5", "--out", s(&g)]);
    assert_eq!(bad.status.code(), Some(2));
    let missing = dir.path().join("missing.txt");
    let io = codesign(&["qaoa", "build", "--graph", s(&missing), "--out", s(&g)]);
    assert_eq!(io.status.code(), Some(3));
}

#[test]
fn topo_gen_six_by_three_has_127_qubits() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.txt");
    ok(&["topo", "gen", "--rows", "6", "--cols", "3", "--out", s(&m)]);
    let text = fs::read_to_string(&m).unwrap();
    assert_eq!(text.lines().next(), Some("qubits 127"));
    assert_eq!(text.lines().count() - 1, 144);
}

#[test]
fn pipeline_from_graph_to_runtime() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| dir.path().join(n);
    ok(&["graph", "gen", "--nodes", "6", "--density", "0.5", "--seed", "3", "--out", s(&p("g.txt"))]);
    ok(&["topo", "gen", "--rows", "1", "--cols", "1", "--out", s(&p("m.txt"))]);
    ok(&["topo", "densify", "--map", s(&p("m.txt")), "--target", "0.4", "--seed", "1", "--out", s(&p("d.txt"))]);
    ok(&["qaoa", "build", "--graph", s(&p("g.txt")), "--layers", "2", "--betas", "0.1,0.2", "--gammas", "0.3,0.4",
        "--out", s(&p("c.txt"))]);
    ok(&["transpile", "--circuit", s(&p("c.txt")), "--map", s(&p("d.txt")), "--trials", "4", "--seed", "9",
        "--report", s(&p("r.csv")), "--out", s(&p("n.txt"))]);
    let native = fs::read_to_string(p("n.txt")).unwrap();
    assert!(native.starts_with("# initial_layout "));
    let report = fs::read_to_string(p("r.csv")).unwrap();
    assert_eq!(report.lines().next(), Some("trial,depth,swaps,cx_count,sx_count,x_count,rz_count"));
    assert_eq!(report.lines().count(), 5);
    ok(&["runtime", "--native", s(&p("n.txt")), "--scenario", "soc", "--out", s(&p("rt.csv"))]);
    assert_eq!(fs::read_to_string(p("rt.csv")).unwrap().lines().count(), 2);
    ok(&["run", "--graph", s(&p("g.txt")), "--max-iter", "5", "--shots", "64", "--seed", "2",
        "--method", "cobyla-like", "--out", s(&p("res.json"))]);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(p("res.json")).unwrap()).unwrap();
    assert_eq!(json["n_iter"], 5);
    assert_eq!(json["energy_history"].as_array().unwrap().len(), 5);
}

#[test]
fn runtime_scenario_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    ok(&["runtime", "--scenario", "all", "--out", s(&out)]);
    let text = fs::read_to_string(&out).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    let totals: Vec<(&str, &str)> = rows.iter().map(|r| (r[0], r[4])).collect();
    assert_eq!(totals, [("cloud", "5.06"), ("local_bus", "3.83"), ("soc", "3.81")]);
}

#[test]
fn sweeps_and_fit() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| dir.path().join(n);
    ok(&["sweep", "density", "--nodes", "6,8,10", "--rows", "1", "--cols", "2", "--densities", "base,0.3,1.0",
        "--trials", "2", "--seed", "4", "--out", s(&p("d.csv"))]);
    assert_eq!(fs::read_to_string(p("d.csv")).unwrap().lines().count(), 1 + 3 * 3 * 2);
    ok(&["fit", "--csv", s(&p("d.csv")), "--tau", "0.5", "--degree", "2", "--out", s(&p("f.csv"))]);
    let fits = fs::read_to_string(p("f.csv")).unwrap();
    assert!(fits.starts_with("coupling_density,tau,degree,c0,c1,c2,pinball_loss,n_points"));
    assert_eq!(fits.lines().count(), 4);
    ok(&["--jobs", "1", "sweep", "size", "--nodes", "8", "--densities", "base", "--trials", "1",
        "--out", s(&p("s.csv"))]);
    assert!(fs::read_to_string(p("s.csv")).unwrap().lines().count() > 1);
}

const SMALL: &str = "seed = 11
[topology]
rows = 1
cols = 2
[transpile]
trials = 3
[sweep]
density_nodes = 6,8,10
densities = base,0.3,1.0
size_nodes = 8
size_densities = base,1.0
[runtime]
t_circ_nodes = 8
";

#[test]
fn repro_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.ini");
    fs::write(&cfg, SMALL).unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    ok(&["repro", "--config", s(&cfg), "--out", s(&a)]);
    ok(&["--jobs", "1", "repro", "--config", s(&cfg), "--out", s(&b)]);
    for f in ["density_sweep.csv", "size_sweep.csv", "runtime_table.csv", "fit_coefficients.csv"] {
        let x = fs::read(a.join(f)).unwrap();
        assert!(!x.is_empty(), "{f} empty");
        assert_eq!(x, fs::read(b.join(f)).unwrap(), "{f} differs");
    }
    let table = fs::read_to_string(a.join("runtime_table.csv")).unwrap();
    assert_eq!(table.lines().count(), 7);
    assert!(a.join("run_log.txt").exists());
}

#[test]
fn repro_rejects_unknown_config_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.ini");
    fs::write(&cfg, "[sweep]\nbogus = 1\n").unwrap();
    let out = codesign(&["repro", "--config", s(&cfg), "--out", s(&dir.path().join("o"))]);
    assert_eq!(out.status.code(), Some(1));
}
