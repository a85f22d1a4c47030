//! Statevector execution and the hybrid QAOA loop.

mod optim;
mod statevector;

use std::str::FromStr;

use rand::Rng as _;
use serde::Serialize;

pub use optim::{cobyla_like, nelder_mead, Minimum};
pub use statevector::{
    energy_from_counts, exact_energy, sample, simulate, simulate_with, Counts, Statevector,
    SIMULATE_MAX_QUBITS,
};

use crate::error::{Error, Result};
use crate::par::Exec;
use crate::problem::{bits_to_assignment, cut_value_bits, max_cut_bruteforce, ProblemGraph};
use crate::qaoa::{build_qaoa, LayerOrder, QaoaParams};
use crate::seed;

/// Largest instance for which the brute-force ratio is computed.
pub const RATIO_MAX_NODES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    #[default]
    NelderMead,
    CobylaLike,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nelder-mead" | "nelder_mead" => Ok(Method::NelderMead),
            "cobyla-like" | "cobyla_like" | "cobyla" => Ok(Method::CobylaLike),
            _ => Err(Error::contract(format!("unknown optimiser '{s}'"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub layers: usize,
    pub shots: u64,
    /// Budget of objective evaluations, one QPU round trip each.
    pub max_iter: usize,
    pub seed: u64,
    pub method: Method,
    pub order: LayerOrder,
    /// Starting point; drawn uniformly from [0, π/2] when absent.
    pub initial: Option<QaoaParams>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            layers: 1,
            shots: 1024,
            max_iter: 25,
            seed: 0,
            method: Method::NelderMead,
            // Beta-first leaves the p = 1 state uniform, so the loop starts
            // with the phase layer.
            order: LayerOrder::GammaFirst,
            initial: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunResult {
    pub best_params: QaoaParams,
    pub best_energy: f64,
    /// Lowest-energy bitstring seen in any shot, node i at index i.
    pub best_bitstring: Vec<bool>,
    pub best_cut: i64,
    pub n_iter: usize,
    pub energy_history: Vec<f64>,
    /// Infinite-shot energy at `best_params`.
    pub best_exact_energy: f64,
    /// best_cut / max cut, when the graph is small enough to brute force.
    pub approx_ratio: Option<f64>,
}

/// Infinite-shot energy of the QAOA state.
pub fn qaoa_energy(g: &ProblemGraph, params: &QaoaParams, order: LayerOrder) -> Result<f64> {
    exact_energy(&simulate(&build_qaoa(g, params, order)?)?, g)
}

pub fn optimize_qaoa(
    g: &ProblemGraph,
    p: usize,
    shots: u64,
    max_iter: usize,
    seed: u64,
    method: Method,
) -> Result<RunResult> {
    optimize_qaoa_with(
        g,
        &RunConfig {
            layers: p,
            shots,
            max_iter,
            seed,
            method,
            ..RunConfig::default()
        },
    )
}

pub fn optimize_qaoa_with(g: &ProblemGraph, cfg: &RunConfig) -> Result<RunResult> {
    if cfg.max_iter == 0 {
        return Err(Error::contract("max_iter must be at least 1"));
    }
    if g.n_nodes() > SIMULATE_MAX_QUBITS {
        return Err(Error::TooLarge {
            what: "graph size",
            actual: g.n_nodes(),
            limit: SIMULATE_MAX_QUBITS,
        });
    }
    let x0 = match &cfg.initial {
        Some(p) if p.layers() != cfg.layers => {
            return Err(Error::contract("initial parameters have the wrong depth"));
        }
        Some(p) => p.to_flat(),
        None => {
            let mut rng = seed::rng(seed::derive(cfg.seed, "init", &[]));
            (0..2 * cfg.layers)
                .map(|_| rng.gen_range(0.0..=std::f64::consts::FRAC_PI_2))
                .collect()
        }
    };

    let mut history = Vec::with_capacity(cfg.max_iter);
    let mut best_x: Option<u64> = None;
    let mut failure = None;
    let objective = |x: &[f64]| -> f64 {
        let k = history.len() as u64;
        let run = || -> Result<(f64, Option<u64>)> {
            let params = QaoaParams::from_flat(x)?;
            let state = simulate_with(&build_qaoa(g, &params, cfg.order)?, Exec::default())?;
            let counts = sample(&state, cfg.shots, seed::derive(cfg.seed, "shots", &[k]))?;
            let top = counts
                .keys()
                .copied()
                .max_by_key(|&x| (cut_value_bits(g, x), std::cmp::Reverse(x)));
            Ok((energy_from_counts(&counts, g)?, top))
        };
        match run() {
            Ok((e, top)) => {
                history.push(e);
                if let Some(t) = top {
                    if best_x.is_none_or(|b| cut_value_bits(g, t) > cut_value_bits(g, b)) {
                        best_x = Some(t);
                    }
                }
                e
            }
            Err(err) => {
                failure.get_or_insert(err);
                history.push(f64::INFINITY);
                f64::INFINITY
            }
        }
    };
    let step = std::f64::consts::FRAC_PI_4;
    let min = match cfg.method {
        Method::NelderMead => nelder_mead(objective, &x0, step, cfg.max_iter),
        Method::CobylaLike => cobyla_like(objective, &x0, step, cfg.max_iter),
    };
    if let Some(err) = failure {
        return Err(err);
    }
    let best_params = QaoaParams::from_flat(&min.x)?;
    let bits = best_x.unwrap_or(0);
    let best_cut = cut_value_bits(g, bits);
    let approx_ratio = if g.n_nodes() <= RATIO_MAX_NODES {
        let (opt, _) = max_cut_bruteforce(g)?;
        Some(if opt == 0 { 1.0 } else { best_cut as f64 / opt as f64 })
    } else {
        None
    };
    Ok(RunResult {
        best_exact_energy: qaoa_energy(g, &best_params, cfg.order)?,
        best_params,
        best_energy: min.value,
        best_bitstring: bits_to_assignment(bits, g.n_nodes()),
        best_cut,
        n_iter: history.len(),
        energy_history: history,
        approx_ratio,
    })
}
