//! Stochastic SWAP routing.
//!
//! Gates are routed in program order. A two-qubit gate whose operands are
//! not coupled triggers `attempts` randomised trials: each draws a shortest
//! physical path with random tie-breaks and tries every meeting point along
//! it, moving both operands towards each other with SWAPs. The candidate
//! whose gate finishes earliest in the running per-qubit schedule wins; a
//! SWAP counts as three layers since it lowers to three CX.

use rand::Rng as _;

use super::layout::Layout;
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::seed::{self, Rng};
use crate::topology::{CouplingMap, DistanceMatrix};

pub const DEFAULT_ATTEMPTS: usize = 8;
const SWAP_LAYERS: u64 = 3;

/// Physical circuit produced by [`route`].
#[derive(Debug, Clone)]
pub struct Routed {
    pub circuit: Circuit,
    pub initial_layout: Layout,
    pub final_layout: Layout,
    pub swaps: usize,
}

pub fn route(c: &Circuit, m: &CouplingMap, layout: &Layout, seed: u64) -> Result<Routed> {
    route_with(c, m, &m.distances(), layout, seed, DEFAULT_ATTEMPTS)
}

struct Candidate {
    swaps: Vec<(usize, usize)>,
    finish: u64,
}

struct Router<'a> {
    m: &'a CouplingMap,
    dist: &'a DistanceMatrix,
    v2p: Vec<usize>,
    p2v: Vec<Option<usize>>,
    level: Vec<u64>,
    out: Circuit,
    swaps: usize,
}

impl Router<'_> {
    fn random_shortest_path(&self, rng: &mut Rng, from: usize, to: usize) -> Result<Vec<usize>> {
        let total = self.dist.get(from, to);
        if total == u32::MAX {
            return Err(Error::Internal(format!("no path between {from} and {to}")));
        }
        let mut path = Vec::with_capacity(total as usize + 1);
        path.push(from);
        let mut cur = from;
        while cur != to {
            let d = self.dist.get(cur, to);
            let steps: Vec<usize> = self
                .m
                .neighbors(cur)
                .iter()
                .copied()
                .filter(|&nb| self.dist.get(nb, to) + 1 == d)
                .collect();
            cur = steps[rng.gen_range(0..steps.len())];
            path.push(cur);
        }
        Ok(path)
    }

    /// Best meeting point on `path` for the current schedule.
    fn evaluate(&self, path: &[usize]) -> Candidate {
        let hops = path.len() - 1;
        let mut best: Option<Candidate> = None;
        for meet in 0..hops {
            // Operand at path[0] walks to path[meet]; the other walks back
            // to path[meet + 1]. The two walks touch disjoint qubits.
            let mut swaps = Vec::with_capacity(hops - 1);
            let lvl = |a: usize, b: usize, local: &mut Vec<(usize, u64)>| {
                let get = |q: usize, local: &Vec<(usize, u64)>| {
                    local
                        .iter()
                        .rev()
                        .find(|(p, _)| *p == q)
                        .map_or(self.level[q], |&(_, l)| l)
                };
                let l = get(a, local).max(get(b, local)) + SWAP_LAYERS;
                local.push((a, l));
                local.push((b, l));
            };
            let mut local: Vec<(usize, u64)> = Vec::new();
            for i in 0..meet {
                swaps.push((path[i], path[i + 1]));
                lvl(path[i], path[i + 1], &mut local);
            }
            for i in (meet + 1..hops).rev() {
                swaps.push((path[i + 1], path[i]));
                lvl(path[i + 1], path[i], &mut local);
            }
            let at = |q: usize| {
                local
                    .iter()
                    .rev()
                    .find(|(p, _)| *p == q)
                    .map_or(self.level[q], |&(_, l)| l)
            };
            let finish = at(path[meet]).max(at(path[meet + 1])) + 1;
            if best.as_ref().is_none_or(|b| finish < b.finish) {
                best = Some(Candidate { swaps, finish });
            }
        }
        best.expect("paths have at least two hops")
    }

    fn emit(&mut self, g: Gate) {
        let (a, b) = g.qubits();
        let l = 1 + b.map_or(self.level[a], |b| self.level[a].max(self.level[b]));
        let w = if matches!(g, Gate::SWAP(..)) { SWAP_LAYERS } else { 1 };
        let l = l - 1 + w;
        self.level[a] = l;
        if let Some(b) = b {
            self.level[b] = l;
        }
        self.out.push_unchecked(g);
    }

    fn apply_swap(&mut self, a: usize, b: usize) {
        self.emit(Gate::SWAP(a, b));
        self.swaps += 1;
        let (va, vb) = (self.p2v[a], self.p2v[b]);
        self.p2v[a] = vb;
        self.p2v[b] = va;
        if let Some(v) = va {
            self.v2p[v] = b;
        }
        if let Some(v) = vb {
            self.v2p[v] = a;
        }
    }
}

pub(crate) fn route_with(
    c: &Circuit,
    m: &CouplingMap,
    dist: &DistanceMatrix,
    layout: &Layout,
    seed: u64,
    attempts: usize,
) -> Result<Routed> {
    if layout.n_physical() != m.n_qubits() || layout.n_virtual() != c.n_qubits() {
        return Err(Error::contract("layout does not match circuit and coupling map"));
    }
    let mut rng = seed::rng(seed);
    let mut r = Router {
        m,
        dist,
        v2p: layout.as_slice().to_vec(),
        p2v: layout.inverse(),
        level: vec![0; m.n_qubits()],
        out: Circuit::new(m.n_qubits()),
        swaps: 0,
    };
    for &g in c.gates() {
        if let (a, Some(b)) = g.qubits() {
            let (pa, pb) = (r.v2p[a], r.v2p[b]);
            if !m.is_coupled(pa, pb) {
                let mut best: Option<Candidate> = None;
                for _ in 0..attempts.max(1) {
                    let path = r.random_shortest_path(&mut rng, pa, pb)?;
                    let cand = r.evaluate(&path);
                    if best.as_ref().is_none_or(|b| cand.finish < b.finish) {
                        best = Some(cand);
                    }
                }
                for (x, y) in best.expect("at least one attempt").swaps {
                    r.apply_swap(x, y);
                }
            }
        }
        let mapped = g.remap(|v| r.v2p[v]);
        debug_assert!(!mapped.is_two_qubit() || {
            let (x, y) = mapped.qubits();
            m.is_coupled(x, y.unwrap())
        });
        r.emit(mapped);
    }
    let final_layout = Layout::new(r.v2p, m.n_qubits())?;
    Ok(Routed {
        circuit: r.out,
        initial_layout: layout.clone(),
        final_layout,
        swaps: r.swaps,
    })
}
