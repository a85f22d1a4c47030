//! Dense statevector simulation (little-endian: qubit 0 is bit 0).

use std::collections::BTreeMap;

use rand::Rng as _;

use crate::circuit::{Circuit, Gate, C64};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::problem::{cut_value_bits, ProblemGraph};
use crate::seed;

pub const SIMULATE_MAX_QUBITS: usize = 24;

/// Amplitude blocks below this size are processed sequentially.
const PAR_MIN_AMPS: usize = 1 << 14;
const REDUCE_CHUNK: usize = 1 << 12;

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amps: Vec<C64>,
}

impl Statevector {
    /// |0...0>.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits > SIMULATE_MAX_QUBITS {
            return Err(Error::TooLarge {
                what: "simulation width",
                actual: n_qubits,
                limit: SIMULATE_MAX_QUBITS,
            });
        }
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n_qubits];
        *amps
            .get_mut(index)
            .ok_or_else(|| Error::contract("basis index out of range"))? = C64::new(1.0, 0.0);
        Ok(Statevector { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn apply(&mut self, g: &Gate, exec: Exec) {
        let exec = if self.amps.len() >= PAR_MIN_AMPS { exec } else { Exec::Sequential };
        match *g {
            Gate::H(q) => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                self.apply_1q(q, [[h.into(), h.into()], [h.into(), (-h).into()]], exec)
            }
            Gate::X(q) => {
                let (z, o) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
                self.apply_1q(q, [[z, o], [o, z]], exec)
            }
            Gate::SX(q) => {
                let (p, m) = (C64::new(0.5, 0.5), C64::new(0.5, -0.5));
                self.apply_1q(q, [[p, m], [m, p]], exec)
            }
            Gate::RX(q, t) => {
                let (s, c) = (t / 2.0).sin_cos();
                let (c, s) = (C64::new(c, 0.0), C64::new(0.0, -s));
                self.apply_1q(q, [[c, s], [s, c]], exec)
            }
            Gate::RZ(q, t) => {
                let e = C64::from_polar(1.0, -t / 2.0);
                let phases = [e, e.conj()];
                self.apply_diagonal(|i| phases[(i >> q) & 1], exec)
            }
            Gate::RZZ(a, b, t) => {
                let e = C64::from_polar(1.0, -t / 2.0);
                let phases = [e, e.conj()];
                self.apply_diagonal(|i| phases[((i >> a) ^ (i >> b)) & 1], exec)
            }
            Gate::CX(c, t) => {
                let (cb, tb) = (1usize << c, 1usize << t);
                for i in 0..self.amps.len() {
                    if i & cb != 0 && i & tb == 0 {
                        self.amps.swap(i, i | tb);
                    }
                }
            }
            Gate::SWAP(a, b) => {
                let (ab, bb) = (1usize << a, 1usize << b);
                for i in 0..self.amps.len() {
                    if i & ab != 0 && i & bb == 0 {
                        self.amps.swap(i, (i & !ab) | bb);
                    }
                }
            }
        }
    }

    fn apply_1q(&mut self, q: usize, m: [[C64; 2]; 2], exec: Exec) {
        let half = 1usize << q;
        let kernel = move |lo: &mut C64, hi: &mut C64| {
            let (x0, x1) = (*lo, *hi);
            *lo = m[0][0] * x0 + m[0][1] * x1;
            *hi = m[1][0] * x0 + m[1][1] * x1;
        };
        #[cfg(feature = "parallel")]
        if exec.is_parallel() {
            use rayon::prelude::*;
            let blocks = self.amps.len() / (2 * half);
            if blocks >= rayon::current_num_threads() {
                self.amps.par_chunks_mut(2 * half).for_each(|chunk| {
                    let (lo, hi) = chunk.split_at_mut(half);
                    lo.iter_mut().zip(hi).for_each(|(a, b)| kernel(a, b));
                });
            } else {
                for chunk in self.amps.chunks_mut(2 * half) {
                    let (lo, hi) = chunk.split_at_mut(half);
                    lo.par_iter_mut()
                        .zip(hi.par_iter_mut())
                        .for_each(|(a, b)| kernel(a, b));
                }
            }
            return;
        }
        let _ = exec;
        for chunk in self.amps.chunks_mut(2 * half) {
            let (lo, hi) = chunk.split_at_mut(half);
            lo.iter_mut().zip(hi).for_each(|(a, b)| kernel(a, b));
        }
    }

    fn apply_diagonal(&mut self, phase: impl Fn(usize) -> C64 + Sync, exec: Exec) {
        #[cfg(feature = "parallel")]
        if exec.is_parallel() {
            use rayon::prelude::*;
            self.amps
                .par_iter_mut()
                .enumerate()
                .for_each(|(i, a)| *a *= phase(i));
            return;
        }
        let _ = exec;
        self.amps
            .iter_mut()
            .enumerate()
            .for_each(|(i, a)| *a *= phase(i));
    }

    /// Σ_x |amp_x|² f(x), reduced in fixed-size chunks so that the result is
    /// bitwise identical for any thread count.
    pub fn expectation(&self, f: impl Fn(u64) -> f64 + Sync, exec: Exec) -> f64 {
        let partials = exec.map(self.amps.len().div_ceil(REDUCE_CHUNK), |k| {
            let start = k * REDUCE_CHUNK;
            let end = (start + REDUCE_CHUNK).min(self.amps.len());
            (start..end)
                .map(|i| self.amps[i].norm_sqr() * f(i as u64))
                .sum::<f64>()
        });
        partials.into_iter().sum()
    }
}

/// Run `c` from |0...0>.
pub fn simulate(c: &Circuit) -> Result<Statevector> {
    simulate_with(c, Exec::default())
}

pub fn simulate_with(c: &Circuit, exec: Exec) -> Result<Statevector> {
    let mut s = Statevector::zero(c.n_qubits())?;
    for g in c.gates() {
        s.apply(g, exec);
    }
    Ok(s)
}

/// Measurement outcomes: basis index (bit i = qubit i) → count.
pub type Counts = BTreeMap<u64, u64>;

/// Draw `shots` computational-basis samples by inverse-CDF lookup.
pub fn sample(s: &Statevector, shots: u64, seed: u64) -> Result<Counts> {
    if shots == 0 {
        return Err(Error::contract("shots must be at least 1"));
    }
    let mut cdf = Vec::with_capacity(s.amps.len());
    let mut acc = 0.0;
    for a in &s.amps {
        acc += a.norm_sqr();
        cdf.push(acc);
    }
    let mut rng = seed::rng(seed);
    let mut counts = Counts::new();
    for _ in 0..shots {
        let u = rng.gen::<f64>() * acc;
        let idx = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
        *counts.entry(idx as u64).or_insert(0) += 1;
    }
    Ok(counts)
}

fn check_width(counts: &Counts, g: &ProblemGraph) -> Result<()> {
    let n = g.n_nodes();
    if let Some((&max, _)) = counts.iter().next_back() {
        if n < 64 && max >> n != 0 {
            return Err(Error::contract(format!(
                "outcome {max:#b} is wider than {n} nodes"
            )));
        }
    }
    Ok(())
}

/// Mean QUBO energy over measured outcomes.
pub fn energy_from_counts(counts: &Counts, g: &ProblemGraph) -> Result<f64> {
    check_width(counts, g)?;
    let total: u64 = counts.values().sum();
    if total == 0 {
        return Err(Error::contract("no measurement outcomes"));
    }
    let weighted: i64 = counts
        .iter()
        .map(|(&x, &k)| -cut_value_bits(g, x) * k as i64)
        .sum();
    Ok(weighted as f64 / total as f64)
}

/// Infinite-shot energy Σ_x |amp_x|² H_P(x).
pub fn exact_energy(s: &Statevector, g: &ProblemGraph) -> Result<f64> {
    if s.n_qubits() != g.n_nodes() {
        return Err(Error::contract("state width differs from graph size"));
    }
    Ok(s.expectation(|x| -(cut_value_bits(g, x) as f64), Exec::default()))
}
