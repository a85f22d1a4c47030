use codesign::circuit::{Circuit, Gate};
use codesign::problem::{generate_graph, ProblemGraph};
use codesign::qaoa::{build_qaoa, LayerOrder, QaoaParams};
use codesign::seed;
use codesign::topology::{heavy_hex, CouplingMap};
use codesign::transpiler::*;
use codesign::{Error, Exec};
use rand::seq::SliceRandom;
use rand::Rng;

const TOL: f64 = 1e-8;

/// Random connected map: a random spanning tree plus extra edges.
fn random_map(rng: &mut seed::Rng, n: usize) -> CouplingMap {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        edges.push((order[i].min(order[j]), order[i].max(order[j])));
    }
    for _ in 0..rng.gen_range(0..n) {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b && !edges.contains(&(a.min(b), a.max(b))) {
            edges.push((a.min(b), a.max(b)));
        }
    }
    CouplingMap::from_edges(n, &edges).unwrap()
}

fn random_circuit(rng: &mut seed::Rng, n: usize, len: usize) -> Circuit {
    let mut gates = Vec::with_capacity(len);
    for _ in 0..len {
        let q = rng.gen_range(0..n);
        let mut r = rng.gen_range(0..n - 1);
        if r >= q {
            r += 1;
        }
        let t = rng.gen_range(-4.0..4.0);
        gates.push(match rng.gen_range(0..8) {
            0 => Gate::H(q),
            1 => Gate::X(q),
            2 => Gate::SX(q),
            3 => Gate::RZ(q, t),
            4 => Gate::RX(q, t),
            5 => Gate::RZZ(q, r, t),
            6 => Gate::CX(q, r),
            _ => Gate::SWAP(q, r),
        });
    }
    Circuit::from_gates(n, gates).unwrap()
}

fn legal(native: &NativeCircuit, m: &CouplingMap) -> bool {
    check_legal(&native.circuit, m).is_ok()
}

#[test]
fn random_cases_preserve_semantics() {
    let mut rng = seed::rng(99);
    for case in 0..60u64 {
        let n = rng.gen_range(2..=6);
        let np = rng.gen_range(n..=n + 3);
        let m = random_map(&mut rng, np);
        let len = rng.gen_range(1..30);
        let c = random_circuit(&mut rng, n, len);
        let (native, report) = transpile(&c, &m, 3, case).unwrap();
        assert!(legal(&native, &m));
        assert!(native.circuit.is_native());
        assert_eq!(report.depths.len(), 3);
        assert!(equivalent_to_input(&c, &native, TOL).unwrap(), "case {case}: {c:?}");
    }
}

#[test]
fn routed_path_examples() {
    let c = Circuit::from_gates(3, vec![Gate::CX(0, 2)]).unwrap();
    let m = CouplingMap::path(3);
    let r = route(&c, &m, &Layout::trivial(3, 3).unwrap(), 4).unwrap();
    assert_eq!(r.swaps, 1);
    let native = NativeCircuit {
        circuit: optimize(&translate(&r.circuit), Some(&m)),
        initial_layout: r.initial_layout,
        final_layout: r.final_layout,
    };
    assert!(equivalent_to_input(&c, &native, TOL).unwrap());

    let clique = ProblemGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    let params = QaoaParams::new(vec![0.3], vec![0.8]).unwrap();
    let q = build_qaoa(&clique, &params, LayerOrder::GammaFirst).unwrap();
    let (native, report) = transpile(&q, &CouplingMap::path(4), 5, 1).unwrap();
    assert!(report.swap_counts.iter().all(|&s| s > 0));
    assert!(equivalent_to_input(&q, &native, TOL).unwrap());
}

#[test]
fn all_to_all_never_swaps() {
    let mut rng = seed::rng(5);
    for s in 0..10 {
        let n = rng.gen_range(2..8);
        let c = random_circuit(&mut rng, n, 40);
        let (_, report) = transpile(&c, &CouplingMap::clique(n + 1), 4, s).unwrap();
        assert!(report.swap_counts.iter().all(|&k| k == 0));
    }
    let g = generate_graph(6, 0.5, 3).unwrap();
    let q = build_qaoa(&g, &QaoaParams::new(vec![0.2], vec![0.9]).unwrap(), LayerOrder::GammaFirst).unwrap();
    let (native, report) = transpile(&q, &CouplingMap::clique(6), DEFAULT_TRIALS, 8).unwrap();
    assert_eq!(report.swap_counts, vec![0; 20]);
    assert!(equivalent_to_input(&q, &native, TOL).unwrap());
}

#[test]
fn already_mapped_native_circuit_is_stable() {
    let c = Circuit::from_gates(
        3,
        vec![Gate::SX(0), Gate::CX(0, 1), Gate::RZ(1, 0.4), Gate::CX(1, 2), Gate::X(2), Gate::CX(0, 1)],
    )
    .unwrap();
    let (native, report) = transpile(&c, &CouplingMap::path(3), 20, 3).unwrap();
    let expected = optimize(&c, None).depth();
    assert_eq!(report.mean_depth, expected as f64);
    assert_eq!(report.std_depth, 0.0);
    assert_eq!(native.depth(), expected);
}

#[test]
fn qaoa_on_small_heavy_hex_is_equivalent() {
    let m = heavy_hex(1, 1).unwrap();
    assert_eq!(m.n_qubits(), 14);
    let g = generate_graph(6, 0.5, 17).unwrap();
    let q = build_qaoa(&g, &QaoaParams::new(vec![0.4], vec![0.7]).unwrap(), LayerOrder::GammaFirst).unwrap();
    let (native, report) = transpile(&q, &m, 20, 21).unwrap();
    assert!(report.mean_depth > 0.0);
    assert!(legal(&native, &m));
    assert!(equivalent_to_input(&q, &native, TOL).unwrap());
}

#[test]
fn report_is_consistent_and_deterministic() {
    let g = generate_graph(10, 0.5, 2).unwrap();
    let q = build_qaoa(&g, &QaoaParams::new(vec![0.4], vec![0.7]).unwrap(), LayerOrder::GammaFirst).unwrap();
    let m = heavy_hex(2, 1).unwrap();
    let (a, ra) = transpile_with(&q, &m, 12, 77, Exec::Sequential).unwrap();
    let (b, rb) = transpile_with(&q, &m, 12, 77, Exec::Parallel).unwrap();
    assert_eq!(a, b);
    assert_eq!(ra, rb);
    let n = ra.depths.len() as f64;
    let mean = ra.depths.iter().sum::<usize>() as f64 / n;
    assert!((ra.mean_depth - mean).abs() < 1e-9);
    let var = ra.depths.iter().map(|&d| (d as f64 - mean).powi(2)).sum::<f64>() / n;
    assert!((ra.std_depth - var.sqrt()).abs() < 1e-9);
    assert_eq!(ra.depths[ra.best_trial_index], *ra.depths.iter().min().unwrap());
    assert_eq!(a.depth(), ra.depths[ra.best_trial_index]);

    let mut csv = Vec::new();
    ra.write_csv(&mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert!(text.starts_with("trial,depth,swaps,cx_count,sx_count,x_count,rz_count\n"));
    assert_eq!(text.lines().count(), 13);
}

#[test]
fn capacity_and_trial_errors() {
    let c = Circuit::new(5);
    assert!(matches!(
        transpile(&c, &CouplingMap::path(4), 2, 0),
        Err(Error::Capacity { needed: 5, available: 4 })
    ));
    assert!(transpile(&Circuit::new(2), &CouplingMap::path(4), 0, 0).is_err());
}

#[test]
fn placement_examples() {
    let c = Circuit::from_gates(2, vec![Gate::CX(0, 1)]).unwrap();
    let l = place(&c, &CouplingMap::clique(5), 3).unwrap();
    assert!(CouplingMap::clique(5).is_coupled(l.physical(0), l.physical(1)));
    for s in 0..10 {
        let l = place(&c, &CouplingMap::path(3), s).unwrap();
        assert!(CouplingMap::path(3).is_coupled(l.physical(0), l.physical(1)));
    }
    assert_eq!(place(&Circuit::new(3), &CouplingMap::path(5), 1).unwrap(), Layout::trivial(3, 5).unwrap());
}
