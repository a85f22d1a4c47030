//! Max-Cut instances, their QUBO and Ising encodings, and a brute-force
//! optimum used as a test oracle.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::seq::index;

use crate::error::{Error, Result};
use crate::seed;

/// Largest instance accepted by [`max_cut_bruteforce`].
pub const BRUTEFORCE_MAX_NODES: usize = 24;

/// Undirected, unweighted Max-Cut instance. Edges are stored as sorted
/// `(u, v)` pairs with `u < v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemGraph {
    n_nodes: usize,
    edges: Vec<(usize, usize)>,
    seed: u64,
}

impl ProblemGraph {
    /// Build a graph from an explicit edge list. Pairs are normalised to
    /// `u < v`; self-loops, duplicates and out-of-range nodes are rejected.
    pub fn from_edges(n_nodes: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut out = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b {
                return Err(Error::InvalidInstance(format!("self-loop on node {a}")));
            }
            if a >= n_nodes || b >= n_nodes {
                return Err(Error::InvalidInstance(format!(
                    "edge ({a}, {b}) out of range for {n_nodes} nodes"
                )));
            }
            out.push((a.min(b), a.max(b)));
        }
        out.sort_unstable();
        let before = out.len();
        out.dedup();
        if out.len() != before {
            return Err(Error::InvalidInstance("duplicate edge".into()));
        }
        Ok(ProblemGraph {
            n_nodes,
            edges: out,
            seed: 0,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Realised density |E| / (n(n-1)/2).
    pub fn density(&self) -> f64 {
        let max = max_pairs(self.n_nodes);
        if max == 0 {
            0.0
        } else {
            self.edges.len() as f64 / max as f64
        }
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n_nodes];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Serialise as `n m` followed by one `u v` line per edge.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n_nodes, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (ln, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing `n m` header"))?;
        let (n, m) = parse_pair(header, ln)?;
        let mut edges = Vec::with_capacity(m);
        for (ln, l) in lines {
            edges.push(parse_pair(l, ln)?);
        }
        if edges.len() != m {
            return Err(Error::parse(
                ln,
                format!("header announces {m} edges, found {}", edges.len()),
            ));
        }
        Self::from_edges(n, &edges)
    }
}

pub(crate) fn parse_pair(line: &str, ln: usize) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize> {
        it.next()
            .ok_or_else(|| Error::parse(ln, "expected two integers"))?
            .parse()
            .map_err(|e| Error::parse(ln, format!("{e}")))
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(Error::parse(ln, "trailing tokens"));
    }
    Ok((a, b))
}

pub(crate) fn max_pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Map a pair index in `0..n(n-1)/2` to the pair `(u, v)`, `u < v`, in
/// row-major order over the strict upper triangle.
pub(crate) fn pair_from_index(n: usize, mut k: usize) -> (usize, usize) {
    let mut u = 0;
    loop {
        let row = n - 1 - u;
        if k < row {
            return (u, u + 1 + k);
        }
        k -= row;
        u += 1;
    }
}

/// Sample a uniform G(n, m) graph with m = round(d * n(n-1)/2).
pub fn generate_graph(n: usize, density: f64, seed: u64) -> Result<ProblemGraph> {
    if n < 2 {
        return Err(Error::InvalidInstance(format!(
            "graph needs at least 2 nodes, got {n}"
        )));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidInstance(format!(
            "density {density} outside [0, 1]"
        )));
    }
    let total = max_pairs(n);
    let m = (density * total as f64).round() as usize;
    let mut rng = seed::rng(seed);
    let mut edges: Vec<(usize, usize)> = index::sample(&mut rng, total, m)
        .into_iter()
        .map(|k| pair_from_index(n, k))
        .collect();
    edges.sort_unstable();
    Ok(ProblemGraph {
        n_nodes: n,
        edges,
        seed,
    })
}

fn check_len(g: &ProblemGraph, x: &[bool]) -> Result<()> {
    if x.len() != g.n_nodes {
        return Err(Error::contract(format!(
            "assignment has length {}, graph has {} nodes",
            x.len(),
            g.n_nodes
        )));
    }
    Ok(())
}

/// Number of edges whose endpoints receive different bits.
pub fn cut_value(g: &ProblemGraph, x: &[bool]) -> Result<i64> {
    check_len(g, x)?;
    Ok(g.edges.iter().filter(|&&(u, v)| x[u] != x[v]).count() as i64)
}

/// H_P(x) = sum over edges of (2 x_i x_j - x_i - x_j).
pub fn qubo_energy(g: &ProblemGraph, x: &[bool]) -> Result<i64> {
    check_len(g, x)?;
    Ok(g.edges
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (x[u] as i64, x[v] as i64);
            2 * a * b - a - b
        })
        .sum())
}

/// Cut value of a basis-state index, bit `i` of `bits` being node `i`.
pub fn cut_value_bits(g: &ProblemGraph, bits: u64) -> i64 {
    g.edges
        .iter()
        .filter(|&&(u, v)| ((bits >> u) ^ (bits >> v)) & 1 == 1)
        .count() as i64
}

pub fn bits_to_assignment(bits: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| (bits >> i) & 1 == 1).collect()
}

pub fn assignment_to_bits(x: &[bool]) -> u64 {
    x.iter()
        .enumerate()
        .fold(0u64, |acc, (i, &b)| acc | ((b as u64) << i))
}

/// Exhaustive maximum cut. Bit 0 is pinned to 0 since a cut and its
/// complement have the same value.
pub fn max_cut_bruteforce(g: &ProblemGraph) -> Result<(i64, Vec<bool>)> {
    let n = g.n_nodes;
    if n > BRUTEFORCE_MAX_NODES {
        return Err(Error::TooLarge {
            what: "brute-force nodes",
            actual: n,
            limit: BRUTEFORCE_MAX_NODES,
        });
    }
    if n == 0 {
        return Ok((0, Vec::new()));
    }
    let mut best = (-1i64, 0u64);
    for half in 0..(1u64 << (n - 1)) {
        let bits = half << 1;
        let c = cut_value_bits(g, bits);
        if c > best.0 {
            best = (c, bits);
        }
    }
    Ok((best.0, bits_to_assignment(best.1, n)))
}

/// Spin form of a QUBO: E(z) = sum J_ij z_i z_j + sum h_i z_i + offset,
/// with z_i = 1 - 2 x_i.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingModel {
    pub n_spins: usize,
    pub couplings: BTreeMap<(usize, usize), f64>,
    pub fields: BTreeMap<usize, f64>,
    pub offset: f64,
}

impl IsingModel {
    pub fn energy_spins(&self, z: &[i8]) -> f64 {
        let quad: f64 = self
            .couplings
            .iter()
            .map(|(&(i, j), &w)| w * (z[i] * z[j]) as f64)
            .sum();
        let lin: f64 = self.fields.iter().map(|(&i, &h)| h * z[i] as f64).sum();
        quad + lin + self.offset
    }

    /// Energy of a bit assignment through the substitution z = 1 - 2x.
    pub fn energy(&self, x: &[bool]) -> f64 {
        let z: Vec<i8> = x.iter().map(|&b| if b { -1 } else { 1 }).collect();
        self.energy_spins(&z)
    }
}

/// Each edge term 2 x_i x_j - x_i - x_j becomes (z_i z_j - 1) / 2: the
/// linear parts cancel, leaving J_ij = 1/2 and a constant -1/2 per edge.
pub fn to_ising(g: &ProblemGraph) -> IsingModel {
    IsingModel {
        n_spins: g.n_nodes,
        couplings: g.edges.iter().map(|&e| (e, 0.5)).collect(),
        fields: BTreeMap::new(),
        offset: -(g.edges.len() as f64) / 2.0,
    }
}
