use codesign::engine::*;
use codesign::problem::{generate_graph, ProblemGraph};
use codesign::qaoa::{LayerOrder, QaoaParams};
use std::f64::consts::PI;

fn triangle() -> ProblemGraph {
    ProblemGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
}

/// Best exact energy over a 64×64 grid, β ∈ [0, π), γ ∈ [0, 2π).
fn grid_oracle(g: &ProblemGraph) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..64 {
        for j in 0..64 {
            let p = QaoaParams::new(vec![PI * i as f64 / 64.0], vec![2.0 * PI * j as f64 / 64.0]).unwrap();
            best = best.min(qaoa_energy(g, &p, LayerOrder::GammaFirst).unwrap());
        }
    }
    best
}

#[test]
fn single_edge_reaches_optimum() {
    let g = ProblemGraph::from_edges(2, &[(0, 1)]).unwrap();
    for method in [Method::NelderMead, Method::CobylaLike] {
        let r = optimize_qaoa(&g, 1, 1024, 25, 3, method).unwrap();
        assert_eq!(r.best_cut, 1);
        assert_eq!(r.approx_ratio, Some(1.0));
        assert_eq!(r.n_iter, 25);
        assert_eq!(r.energy_history.len(), r.n_iter);
    }
}

#[test]
fn triangle_matches_grid_oracle() {
    let g = triangle();
    let oracle = grid_oracle(&g);
    for method in [Method::NelderMead, Method::CobylaLike] {
        let cfg = RunConfig { shots: 8192, max_iter: 200, seed: 5, method, ..RunConfig::default() };
        let r = optimize_qaoa_with(&g, &cfg).unwrap();
        assert!(r.best_exact_energy <= oracle + 0.05, "{method:?}: {} vs {oracle}", r.best_exact_energy);
    }
}

#[test]
fn zero_angles_give_uniform_energy() {
    for (n, d, s) in [(2, 1.0, 0), (5, 0.6, 1), (8, 0.3, 2)] {
        let g = generate_graph(n, d, s).unwrap();
        for order in [LayerOrder::BetaFirst, LayerOrder::GammaFirst] {
            let e = qaoa_energy(&g, &QaoaParams::zeros(1).unwrap(), order).unwrap();
            assert!((e + g.n_edges() as f64 / 2.0).abs() < 1e-12);
        }
    }
}

#[test]
fn best_energy_is_history_minimum_and_runs_replay() {
    let g = generate_graph(7, 0.5, 4).unwrap();
    let a = optimize_qaoa(&g, 2, 256, 30, 9, Method::NelderMead).unwrap();
    let min = a.energy_history.iter().copied().fold(f64::INFINITY, f64::min);
    assert_eq!(a.best_energy, min);
    let b = optimize_qaoa(&g, 2, 256, 30, 9, Method::NelderMead).unwrap();
    assert_eq!(a.energy_history, b.energy_history);
    assert_eq!(a.best_bitstring, b.best_bitstring);
    assert!(a.approx_ratio.unwrap() <= 1.0);
    let json = serde_json::to_string(&a).unwrap();
    assert!(json.contains("\"best_params\"") && json.contains("\"energy_history\""));
}

#[test]
fn contract_errors() {
    let g = triangle();
    assert!(optimize_qaoa(&g, 1, 100, 0, 1, Method::NelderMead).is_err());
    assert!(optimize_qaoa(&generate_graph(25, 0.1, 1).unwrap(), 1, 10, 1, 1, Method::NelderMead).is_err());
    assert!("simplex".parse::<Method>().is_err());
}
