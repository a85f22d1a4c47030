use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::seed;
use crate::topology::{CouplingMap, DistanceMatrix};

/// Injective virtual → physical qubit assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    v2p: Vec<usize>,
    n_physical: usize,
}

impl Layout {
    pub fn new(v2p: Vec<usize>, n_physical: usize) -> Result<Self> {
        let mut seen = vec![false; n_physical];
        for &p in &v2p {
            if p >= n_physical || std::mem::replace(&mut seen[p], true) {
                return Err(Error::contract(format!(
                    "layout {v2p:?} is not injective into {n_physical} qubits"
                )));
            }
        }
        Ok(Layout { v2p, n_physical })
    }

    pub fn trivial(n_virtual: usize, n_physical: usize) -> Result<Self> {
        Self::new((0..n_virtual).collect(), n_physical)
    }

    #[inline]
    pub fn physical(&self, v: usize) -> usize {
        self.v2p[v]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.v2p
    }

    pub fn n_virtual(&self) -> usize {
        self.v2p.len()
    }

    pub fn n_physical(&self) -> usize {
        self.n_physical
    }

    /// Physical → virtual inverse.
    pub fn inverse(&self) -> Vec<Option<usize>> {
        let mut p2v = vec![None; self.n_physical];
        for (v, &p) in self.v2p.iter().enumerate() {
            p2v[p] = Some(v);
        }
        p2v
    }
}

/// Distinct two-qubit partners of each virtual qubit.
pub(crate) fn interaction_partners(c: &Circuit) -> Vec<BTreeSet<usize>> {
    let mut partners = vec![BTreeSet::new(); c.n_qubits()];
    for g in c.gates() {
        if let (a, Some(b)) = g.qubits() {
            partners[a].insert(b);
            partners[b].insert(a);
        }
    }
    partners
}

pub(crate) fn check_capacity(c: &Circuit, m: &CouplingMap) -> Result<()> {
    if c.n_qubits() > m.n_qubits() {
        return Err(Error::Capacity {
            needed: c.n_qubits(),
            available: m.n_qubits(),
        });
    }
    Ok(())
}

/// Greedy interaction-aware placement.
///
/// Virtual qubits are taken in descending order of distinct partners. The
/// first goes to a highest-degree physical qubit; each later one goes to an
/// unused physical qubit on the frontier of the placed region, maximising
/// the number of already-placed partners it is coupled to. Ties prefer the
/// smaller summed distance to placed partners, then higher physical degree,
/// then fall to the seeded RNG.
pub fn place(c: &Circuit, m: &CouplingMap, seed: u64) -> Result<Layout> {
    place_with(c, m, &m.distances(), seed)
}

pub(crate) fn place_with(
    c: &Circuit,
    m: &CouplingMap,
    dist: &DistanceMatrix,
    seed: u64,
) -> Result<Layout> {
    check_capacity(c, m)?;
    let n = c.n_qubits();
    let np = m.n_qubits();
    let partners = interaction_partners(c);
    if partners.iter().all(BTreeSet::is_empty) {
        return Layout::trivial(n, np);
    }
    let mut rng = seed::rng(seed);

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    order.sort_by_key(|&v| std::cmp::Reverse(partners[v].len()));

    let mut v2p = vec![usize::MAX; n];
    let mut used = vec![false; np];
    let mut frontier = vec![false; np];
    let max_deg = m.max_degree();
    let hubs: Vec<usize> = (0..np).filter(|&p| m.degree(p) == max_deg).collect();
    let spread = |p: usize| (0..np).map(|q| dist.get(p, q) as u64).sum::<u64>();
    let tightest = hubs.iter().map(|&p| spread(p)).min().expect("non-empty map");
    let hubs: Vec<usize> = hubs.into_iter().filter(|&p| spread(p) == tightest).collect();
    let start = hubs[rng.gen_range(0..hubs.len())];

    for (i, &v) in order.iter().enumerate() {
        let p = if i == 0 {
            start
        } else {
            let mut candidates: Vec<usize> = (0..np).filter(|&p| frontier[p] && !used[p]).collect();
            if candidates.is_empty() {
                candidates = (0..np).filter(|&p| !used[p]).collect();
            }
            let placed: Vec<usize> = partners[v]
                .iter()
                .filter_map(|&w| (v2p[w] != usize::MAX).then_some(v2p[w]))
                .collect();
            let score = |p: usize| {
                let satisfied = placed.iter().filter(|&&q| m.is_coupled(p, q)).count();
                let spread: u64 = placed.iter().map(|&q| dist.get(p, q) as u64).sum();
                (satisfied, std::cmp::Reverse(spread), m.degree(p))
            };
            let best = candidates.iter().map(|&p| score(p)).max().expect("non-empty");
            let ties: Vec<usize> = candidates.into_iter().filter(|&p| score(p) == best).collect();
            ties[rng.gen_range(0..ties.len())]
        };
        v2p[v] = p;
        used[p] = true;
        for &q in m.neighbors(p) {
            frontier[q] = true;
        }
    }
    Layout::new(v2p, np)
}
