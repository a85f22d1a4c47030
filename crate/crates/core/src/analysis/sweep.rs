//! Coupling-density and backend-size sweeps.
//!
//! Each sweep point compiles one fixed problem instance with repeated
//! trials and yields one record per trial. Points run through [`Exec`] and
//! are gathered in key order, so the output never depends on worker count.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::Exec;
use crate::perfmodel::{circuit_time, GateTimes};
use crate::problem::{generate_graph, ProblemGraph};
use crate::qaoa::{build_qaoa, LayerOrder, QaoaParams};
use crate::seed;
use crate::topology::{coupling_density, densify, heavy_hex, BackendSize, CouplingMap};
use crate::transpiler::transpile_trials;

/// Fixed angles for compiled-only circuits. Depth does not depend on them
/// as long as none is a multiple of 2π.
pub const SWEEP_BETA: f64 = 0.4;
pub const SWEEP_GAMMA: f64 = 0.7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub n_nodes: usize,
    pub graph_density: f64,
    pub p_layers: usize,
    pub coupling_density: f64,
    pub backend_rows: usize,
    pub backend_cols: usize,
    pub backend_qubits: usize,
    pub trial_index: usize,
    pub depth: usize,
    pub swap_count: usize,
    pub circuit_time_ns: f64,
    pub graph_seed: u64,
    pub transpile_seed: u64,
}

/// Coupling density to compile against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityTarget {
    /// The undensified lattice.
    Base,
    Target(f64),
}

impl fmt::Display for DensityTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensityTarget::Base => f.write_str("base"),
            DensityTarget::Target(c) => write!(f, "{c}"),
        }
    }
}

impl FromStr for DensityTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "base" {
            return Ok(DensityTarget::Base);
        }
        s.parse::<f64>()
            .ok()
            .filter(|c| *c > 0.0 && *c <= 1.0)
            .map(DensityTarget::Target)
            .ok_or_else(|| Error::contract(format!("bad coupling density '{s}'")))
    }
}

/// Parse a comma-separated density list such as `base,0.1,1.0`.
pub fn parse_densities(s: &str) -> Result<Vec<DensityTarget>> {
    s.split(',').map(str::parse).collect()
}

fn apply_density(base: &CouplingMap, target: DensityTarget, seed: u64) -> Result<CouplingMap> {
    match target {
        DensityTarget::Base => Ok(base.clone()),
        // Targets below the lattice's own density fall back to the lattice.
        DensityTarget::Target(c) if c <= coupling_density(base) => Ok(base.clone()),
        DensityTarget::Target(c) => densify(base, c, seed),
    }
}

/// Shared settings for both sweeps.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub graph_density: f64,
    pub layers: usize,
    pub trials: usize,
    pub seed: u64,
    pub gate_times: GateTimes,
}

impl SweepSpec {
    pub fn new(graph_density: f64, layers: usize, trials: usize, seed: u64) -> Self {
        SweepSpec { graph_density, layers, trials, seed, gate_times: GateTimes::default() }
    }

    pub fn graph(&self, n: usize) -> Result<ProblemGraph> {
        generate_graph(n, self.graph_density, seed::derive(self.seed, "graph", &[n as u64]))
    }

    fn params(&self) -> Result<QaoaParams> {
        QaoaParams::new(vec![SWEEP_BETA; self.layers], vec![SWEEP_GAMMA; self.layers])
    }
}

struct Point<'a> {
    graph: &'a ProblemGraph,
    map: &'a CouplingMap,
    size: BackendSize,
    transpile_seed: u64,
}

fn run_point(spec: &SweepSpec, pt: &Point<'_>, exec: Exec) -> Result<Vec<SweepRecord>> {
    let circuit = build_qaoa(pt.graph, &spec.params()?, LayerOrder::GammaFirst)?;
    let trials = transpile_trials(&circuit, pt.map, spec.trials, pt.transpile_seed, exec)?;
    let c = coupling_density(pt.map);
    trials
        .iter()
        .enumerate()
        .map(|(t, trial)| {
            Ok(SweepRecord {
                n_nodes: pt.graph.n_nodes(),
                graph_density: spec.graph_density,
                p_layers: spec.layers,
                coupling_density: c,
                backend_rows: pt.size.rows,
                backend_cols: pt.size.cols,
                backend_qubits: pt.size.n_qubits,
                trial_index: t,
                depth: trial.depth(),
                swap_count: trial.swaps,
                circuit_time_ns: circuit_time(&trial.native.circuit, &spec.gate_times)?,
                graph_seed: pt.graph.seed(),
                transpile_seed: trial.seed,
            })
        })
        .collect()
}

fn flatten(chunks: Vec<Result<Vec<SweepRecord>>>) -> Result<Vec<SweepRecord>> {
    let mut out = Vec::new();
    for c in chunks {
        out.extend(c?);
    }
    Ok(out)
}

/// Every (n, density) pair on one lattice. Graphs depend only on n and
/// densified maps only on the density index, so each instance is compiled
/// against the same family of maps.
pub fn sweep_density(
    n_list: &[usize],
    spec: &SweepSpec,
    densities: &[DensityTarget],
    base: &CouplingMap,
    size: BackendSize,
    exec: Exec,
) -> Result<Vec<SweepRecord>> {
    if let Some(&n) = n_list.iter().find(|&&n| n > base.n_qubits()) {
        return Err(Error::Capacity { needed: n, available: base.n_qubits() });
    }
    let maps: Vec<CouplingMap> = exec
        .map(densities.len(), |ci| {
            apply_density(base, densities[ci], seed::derive(spec.seed, "densify", &[ci as u64]))
        })
        .into_iter()
        .collect::<Result<_>>()?;
    let graphs: Vec<ProblemGraph> = n_list.iter().map(|&n| spec.graph(n)).collect::<Result<_>>()?;
    let points: Vec<(usize, usize)> = (0..n_list.len())
        .flat_map(|ni| (0..densities.len()).map(move |ci| (ni, ci)))
        .collect();
    let chunks = exec.map_slice(&points, |&(ni, ci)| {
        let pt = Point {
            graph: &graphs[ni],
            map: &maps[ci],
            size,
            transpile_seed: seed::derive(spec.seed, "transpile", &[n_list[ni] as u64, ci as u64]),
        };
        run_point(spec, &pt, exec)
    });
    flatten(chunks)
}

/// One instance of size `n` on every lattice in `series` at every density.
pub fn sweep_backend_size(
    n: usize,
    spec: &SweepSpec,
    series: &[BackendSize],
    densities: &[DensityTarget],
    exec: Exec,
) -> Result<Vec<SweepRecord>> {
    if let Some(b) = series.iter().find(|b| b.n_qubits < n) {
        return Err(Error::Capacity { needed: n, available: b.n_qubits });
    }
    let graph = spec.graph(n)?;
    let points: Vec<(usize, usize)> = (0..series.len())
        .flat_map(|bi| (0..densities.len()).map(move |ci| (bi, ci)))
        .collect();
    let chunks = exec.map_slice(&points, |&(bi, ci)| {
        let size = series[bi];
        let base = heavy_hex(size.rows, size.cols)?;
        let key = [bi as u64, ci as u64];
        let map = apply_density(&base, densities[ci], seed::derive(spec.seed, "densify", &key))?;
        let pt = Point {
            graph: &graph,
            map: &map,
            size,
            transpile_seed: seed::derive(spec.seed, "transpile", &key),
        };
        run_point(spec, &pt, exec)
    });
    flatten(chunks)
}

pub fn write_records<W: std::io::Write>(records: &[SweepRecord], w: W) -> Result<()> {
    let mut wr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    if records.is_empty() {
        wr.write_record(RECORD_COLUMNS)?;
    }
    for r in records {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}

pub fn read_records<R: std::io::Read>(r: R) -> Result<Vec<SweepRecord>> {
    let mut rd = csv::Reader::from_reader(r);
    let header = rd.headers()?.clone();
    if header.iter().ne(RECORD_COLUMNS.iter().copied()) {
        return Err(Error::parse(1, "header does not match the sweep record schema"));
    }
    rd.deserialize()
        .enumerate()
        .map(|(i, row)| row.map_err(|e| Error::parse(i + 2, e.to_string())))
        .collect()
}

pub const RECORD_COLUMNS: [&str; 13] = [
    "n_nodes",
    "graph_density",
    "p_layers",
    "coupling_density",
    "backend_rows",
    "backend_cols",
    "backend_qubits",
    "trial_index",
    "depth",
    "swap_count",
    "circuit_time_ns",
    "graph_seed",
    "transpile_seed",
];
