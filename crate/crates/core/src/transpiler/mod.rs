//! Compilation of logical circuits onto a coupling map.
//!
//! Each trial runs: optimise, place, route, translate to {RZ, SX, X, CX},
//! optimise again. Circuits in this IR never carry gates on three or more
//! qubits, so the usual multi-qubit decomposition stage has nothing to do.

mod layout;
mod optimize;
mod route;
mod synth;
mod translate;
mod verify;

use std::collections::BTreeMap;
use std::io::Write;

pub use layout::{place, Layout};
pub use optimize::optimize;
pub use route::{route, Routed, DEFAULT_ATTEMPTS};
pub use synth::synthesize_1q;
pub use translate::translate;
pub use verify::{equivalent_to_input, native_unitary};

use crate::circuit::{gate_counts, Circuit, GateKind};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::seed;
use crate::topology::CouplingMap;

pub const DEFAULT_TRIALS: usize = 20;

/// A circuit over the physical qubits of a coupling map using native gates
/// only, with the virtual-to-physical layout before and after execution.
#[derive(Debug, Clone, PartialEq)]
pub struct NativeCircuit {
    pub circuit: Circuit,
    pub initial_layout: Layout,
    pub final_layout: Layout,
}

impl NativeCircuit {
    pub fn depth(&self) -> usize {
        self.circuit.depth()
    }
}

/// One compilation trial.
#[derive(Debug, Clone)]
pub struct Trial {
    pub native: NativeCircuit,
    pub swaps: usize,
    pub seed: u64,
}

impl Trial {
    pub fn depth(&self) -> usize {
        self.native.depth()
    }
}

/// Per-trial gate statistics, as written to the report CSV.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialStats {
    pub depth: usize,
    pub swaps: usize,
    pub cx_count: usize,
    pub sx_count: usize,
    pub x_count: usize,
    pub rz_count: usize,
}

impl TrialStats {
    fn of(t: &Trial) -> Self {
        let counts = gate_counts(&t.native.circuit);
        let get = |k| counts.get(&k).copied().unwrap_or(0);
        TrialStats {
            depth: t.depth(),
            swaps: t.swaps,
            cx_count: get(GateKind::CX),
            sx_count: get(GateKind::SX),
            x_count: get(GateKind::X),
            rz_count: get(GateKind::RZ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TranspileReport {
    pub trials: usize,
    pub depths: Vec<usize>,
    pub mean_depth: f64,
    /// Population standard deviation over trials.
    pub std_depth: f64,
    pub swap_counts: Vec<usize>,
    pub best_trial_index: usize,
    pub seed: u64,
    pub stats: Vec<TrialStats>,
}

impl TranspileReport {
    pub fn from_trials(trials: &[Trial], seed: u64) -> Result<Self> {
        if trials.is_empty() {
            return Err(Error::contract("at least one trial is required"));
        }
        let stats: Vec<TrialStats> = trials.iter().map(TrialStats::of).collect();
        let depths: Vec<usize> = stats.iter().map(|s| s.depth).collect();
        let (mean_depth, std_depth) = mean_std(depths.iter().map(|&d| d as f64));
        // First minimum wins, so ties resolve to the lowest trial index.
        let best_trial_index = (0..depths.len())
            .min_by_key(|&i| depths[i])
            .expect("non-empty");
        Ok(TranspileReport {
            trials: trials.len(),
            swap_counts: stats.iter().map(|s| s.swaps).collect(),
            depths,
            mean_depth,
            std_depth,
            best_trial_index,
            seed,
            stats,
        })
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "trial,depth,swaps,cx_count,sx_count,x_count,rz_count")?;
        for (i, s) in self.stats.iter().enumerate() {
            writeln!(
                w,
                "{i},{},{},{},{},{},{}",
                s.depth, s.swaps, s.cx_count, s.sx_count, s.x_count, s.rz_count
            )?;
        }
        Ok(())
    }
}

/// Mean and population standard deviation.
pub fn mean_std(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = xs.clone().count();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.clone().sum::<f64>() / n as f64;
    let var = xs.map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
    (mean, var.sqrt())
}

/// Compile `c` for `m` over `trials` seeded trials and return the
/// minimum-depth result together with the full report.
pub fn transpile(
    c: &Circuit,
    m: &CouplingMap,
    trials: usize,
    seed: u64,
) -> Result<(NativeCircuit, TranspileReport)> {
    transpile_with(c, m, trials, seed, Exec::default())
}

pub fn transpile_with(
    c: &Circuit,
    m: &CouplingMap,
    trials: usize,
    seed: u64,
    exec: Exec,
) -> Result<(NativeCircuit, TranspileReport)> {
    let all = transpile_trials(c, m, trials, seed, exec)?;
    let report = TranspileReport::from_trials(&all, seed)?;
    let best = all
        .into_iter()
        .nth(report.best_trial_index)
        .expect("index within trials");
    Ok((best.native, report))
}

/// Run every trial and keep all of them, in trial order.
pub fn transpile_trials(
    c: &Circuit,
    m: &CouplingMap,
    trials: usize,
    seed: u64,
    exec: Exec,
) -> Result<Vec<Trial>> {
    if trials == 0 {
        return Err(Error::contract("trials must be at least 1"));
    }
    layout::check_capacity(c, m)?;
    let pre = optimize(c, None);
    let dist = m.distances();
    let trivial = Layout::trivial(c.n_qubits(), m.n_qubits())?;
    let trivial_fits = pre.gates().iter().all(|g| match g.qubits() {
        (a, Some(b)) => m.is_coupled(trivial.physical(a), trivial.physical(b)),
        _ => true,
    });
    let results = exec.map(trials, |t| {
        let s = seed::derive(seed, "trial", &[t as u64]);
        let layout = if trivial_fits {
            trivial.clone()
        } else {
            layout::place_with(&pre, m, &dist, seed::derive(s, "place", &[]))?
        };
        let routed = route::route_with(
            &pre,
            m,
            &dist,
            &layout,
            seed::derive(s, "route", &[]),
            DEFAULT_ATTEMPTS,
        )?;
        let native = optimize(&translate(&routed.circuit), Some(m));
        check_legal(&native, m)?;
        Ok(Trial {
            native: NativeCircuit {
                circuit: native,
                initial_layout: routed.initial_layout,
                final_layout: routed.final_layout,
            },
            swaps: routed.swaps,
            seed: s,
        })
    });
    results.into_iter().collect()
}

/// Every gate native and every CX on a coupled pair.
pub fn check_legal(c: &Circuit, m: &CouplingMap) -> Result<()> {
    for g in c.gates() {
        if !g.kind().is_native() {
            return Err(Error::Internal(format!("non-native gate {g:?} after translation")));
        }
        if let (a, Some(b)) = g.qubits() {
            if !m.is_coupled(a, b) {
                return Err(Error::Internal(format!("{g:?} acts on uncoupled pair")));
            }
        }
    }
    Ok(())
}

/// Gate-kind histogram keyed by name, for reporting.
pub fn kind_histogram(c: &Circuit) -> BTreeMap<&'static str, usize> {
    gate_counts(c).into_iter().map(|(k, v)| (k.name(), v)).collect()
}
