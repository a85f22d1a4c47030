//! Coupling maps: heavy-hex lattices, coupling density, and preferential
//! densification.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::problem::{max_pairs, parse_pair};
use crate::seed;

/// How a coupling map was produced.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Provenance {
    pub rows: Option<usize>,
    pub cols: Option<usize>,
    pub added_edges: usize,
    pub seed: Option<u64>,
}

/// Undirected, connected physical connectivity graph.
#[derive(Debug, Clone)]
pub struct CouplingMap {
    n_qubits: usize,
    couplings: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    coupled: Vec<bool>,
    provenance: Provenance,
}

impl PartialEq for CouplingMap {
    fn eq(&self, other: &Self) -> bool {
        self.n_qubits == other.n_qubits && self.couplings == other.couplings
    }
}

impl CouplingMap {
    /// Build from an edge list; rejects self-loops, duplicates, out-of-range
    /// qubits and disconnected graphs.
    pub fn from_edges(n_qubits: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::build(n_qubits, edges, Provenance::default())
    }

    fn build(n_qubits: usize, edges: &[(usize, usize)], provenance: Provenance) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidInstance("coupling map without qubits".into()));
        }
        let mut couplings: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        let mut coupled = vec![false; n_qubits * n_qubits];
        let mut adjacency = vec![Vec::new(); n_qubits];
        for &(a, b) in edges {
            if a == b || a >= n_qubits || b >= n_qubits {
                return Err(Error::InvalidInstance(format!("bad coupling ({a}, {b})")));
            }
            if coupled[a * n_qubits + b] {
                return Err(Error::InvalidInstance(format!("duplicate coupling ({a}, {b})")));
            }
            coupled[a * n_qubits + b] = true;
            coupled[b * n_qubits + a] = true;
            adjacency[a].push(b);
            adjacency[b].push(a);
            couplings.push((a.min(b), a.max(b)));
        }
        couplings.sort_unstable();
        for nb in &mut adjacency {
            nb.sort_unstable();
        }
        let map = CouplingMap {
            n_qubits,
            couplings,
            adjacency,
            coupled,
            provenance,
        };
        if !map.is_connected() {
            return Err(Error::InvalidInstance("coupling map is not connected".into()));
        }
        Ok(map)
    }

    pub fn clique(n: usize) -> Self {
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Self::from_edges(n, &edges).expect("cliques are connected")
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Self::from_edges(n, &edges).expect("paths are connected")
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn couplings(&self) -> &[(usize, usize)] {
        &self.couplings
    }

    pub fn n_couplings(&self) -> usize {
        self.couplings.len()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    pub fn degree(&self, q: usize) -> usize {
        self.adjacency[q].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    #[inline]
    pub fn is_coupled(&self, a: usize, b: usize) -> bool {
        self.coupled[a * self.n_qubits + b]
    }

    pub fn is_all_to_all(&self) -> bool {
        self.couplings.len() == max_pairs(self.n_qubits)
    }

    pub fn density(&self) -> f64 {
        coupling_density(self)
    }

    fn is_connected(&self) -> bool {
        self.bfs(0).iter().all(|&d| d != u32::MAX)
    }

    fn bfs(&self, src: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.n_qubits];
        let mut queue = VecDeque::from([src]);
        dist[src] = 0;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if dist[v] == u32::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// All-pairs hop distances.
    pub fn distances(&self) -> DistanceMatrix {
        let n = self.n_qubits;
        let mut d = Vec::with_capacity(n * n);
        for s in 0..n {
            d.extend(self.bfs(s));
        }
        DistanceMatrix { n, d }
    }

    /// `qubits n` header followed by one `u v` line per coupling.
    pub fn to_text(&self) -> String {
        let mut s = format!("qubits {}\n", self.n_qubits);
        for &(u, v) in &self.couplings {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (ln, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing `qubits n` header"))?;
        let n = header
            .strip_prefix("qubits")
            .and_then(|r| r.trim().parse::<usize>().ok())
            .ok_or_else(|| Error::parse(ln, "expected `qubits n` header"))?;
        let edges = lines
            .map(|(ln, l)| parse_pair(l, ln))
            .collect::<Result<Vec<_>>>()?;
        Self::from_edges(n, &edges)
    }
}

/// Dense all-pairs hop-distance table.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<u32>,
}

impl DistanceMatrix {
    #[inline]
    pub fn get(&self, a: usize, b: usize) -> u32 {
        self.d[a * self.n + b]
    }
}

/// Unit-cell dimensions of a heavy-hex backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BackendSize {
    pub rows: usize,
    pub cols: usize,
    pub n_qubits: usize,
}

impl BackendSize {
    pub fn new(rows: usize, cols: usize) -> Self {
        BackendSize {
            rows,
            cols,
            n_qubits: heavy_hex_qubits(rows, cols),
        }
    }
}

pub fn heavy_hex_qubits(rows: usize, cols: usize) -> usize {
    5 * rows * cols + 4 * rows + 4 * cols + 1
}

pub fn heavy_hex_couplings(rows: usize, cols: usize) -> usize {
    2 * (4 * cols + 1) + (rows - 1) * (4 * cols + 2) + 2 * rows * (cols + 1)
}

/// The backend sizes, in unit cells, of the backend-size study.
pub fn backend_series() -> Vec<BackendSize> {
    [
        (4, 2),
        (3, 3),
        (5, 2),
        (4, 3),
        (6, 2),
        (5, 3),
        (4, 4),
        (6, 3),
        (5, 4),
        (6, 4),
    ]
    .into_iter()
    .map(|(r, c)| BackendSize::new(r, c))
    .collect()
}

/// Complete heavy-hex lattice of `rows x cols` unit cells.
///
/// There are `rows + 1` horizontal qubit lines joined by `rows` lines of
/// `cols + 1` bridge qubits. Middle lines span columns `0..=4c+2`; bridge
/// `j` of gap `i` sits at column `4j + 2(i mod 2)`. Each end line drops the
/// one column its neighbouring gap never uses, so it holds `4c + 2` qubits.
/// Qubits are numbered line by line with each bridge line between its two
/// neighbours, matching the usual IBM numbering for 6 x 3 cells.
pub fn heavy_hex(rows: usize, cols: usize) -> Result<CouplingMap> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidInstance(format!(
            "heavy-hex needs at least one unit cell, got {rows} x {cols}"
        )));
    }
    let width = 4 * cols + 3;
    let bridge_col = |gap: usize, j: usize| 4 * j + 2 * (gap % 2);
    let mut next = 0usize;
    let mut edges = Vec::new();
    // index[line][col] of each row qubit
    let mut row_index: Vec<Vec<Option<usize>>> = Vec::with_capacity(rows + 1);
    let mut bridges: Vec<Vec<usize>> = Vec::with_capacity(rows);

    for line in 0..=rows {
        let skip = if line == 0 {
            Some(if bridge_col(0, 0) == 0 { width - 1 } else { 0 })
        } else if line == rows {
            Some(if bridge_col(rows - 1, 0) == 0 { width - 1 } else { 0 })
        } else {
            None
        };
        let mut idx = vec![None; width];
        let mut prev: Option<usize> = None;
        for (col, slot) in idx.iter_mut().enumerate() {
            if Some(col) == skip {
                continue;
            }
            *slot = Some(next);
            if let Some(p) = prev {
                edges.push((p, next));
            }
            prev = Some(next);
            next += 1;
        }
        row_index.push(idx);
        if line < rows {
            let b: Vec<usize> = (0..=cols).map(|_| {
                next += 1;
                next - 1
            })
            .collect();
            bridges.push(b);
        }
    }
    for (gap, line) in bridges.iter().enumerate() {
        for (j, &b) in line.iter().enumerate() {
            let col = bridge_col(gap, j);
            for r in [gap, gap + 1] {
                let q = row_index[r][col].ok_or_else(|| {
                    Error::Internal(format!("bridge {b} lands on a missing qubit"))
                })?;
                edges.push((q, b));
            }
        }
    }
    debug_assert_eq!(next, heavy_hex_qubits(rows, cols));
    CouplingMap::build(
        next,
        &edges,
        Provenance {
            rows: Some(rows),
            cols: Some(cols),
            added_edges: 0,
            seed: None,
        },
    )
}

/// c = N_C / (n(n-1)/2).
pub fn coupling_density(m: &CouplingMap) -> f64 {
    let max = max_pairs(m.n_qubits);
    if max == 0 {
        return 0.0;
    }
    m.couplings.len() as f64 / max as f64
}

/// Add random couplings until the map holds round(target_c * n(n-1)/2) of
/// them. Each new coupling is drawn from the current non-edges with weight
/// (deg(u) + 1)(deg(v) + 1), so well-connected regions grow fastest.
pub fn densify(m: &CouplingMap, target_c: f64, seed: u64) -> Result<CouplingMap> {
    let current = coupling_density(m);
    if target_c.is_nan() || target_c > 1.0 || target_c < current - 1e-12 {
        return Err(Error::contract(format!(
            "target density {target_c} must lie in [{current}, 1]"
        )));
    }
    let n = m.n_qubits;
    let total_pairs = max_pairs(n);
    let target = ((target_c * total_pairs as f64).round() as usize).max(m.couplings.len());
    let to_add = target - m.couplings.len();

    let mut degree: Vec<u64> = (0..n).map(|q| m.degree(q) as u64).collect();
    let mut edges = m.couplings.clone();
    if to_add > 0 {
        // Candidate pairs in row-major order with their live weights.
        let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(total_pairs - edges.len());
        for u in 0..n {
            for v in u + 1..n {
                if !m.is_coupled(u, v) {
                    pairs.push((u, v));
                }
            }
        }
        if to_add == pairs.len() {
            // Completing the graph: the weighted draw order cannot matter.
            edges.append(&mut pairs);
        }
        let weight = |deg: &[u64], (u, v): (usize, usize)| (deg[u] + 1) * (deg[v] + 1);
        let mut weights: Vec<u64> = pairs.iter().map(|&p| weight(&degree, p)).collect();
        let mut rng = seed::rng(seed);
        for _ in 0..to_add.min(pairs.len()) {
            let sum: u64 = weights.iter().sum();
            let mut r = rng.gen_range(0..sum);
            let k = weights
                .iter()
                .position(|&w| {
                    if r < w {
                        true
                    } else {
                        r -= w;
                        false
                    }
                })
                .expect("r < total weight");
            let (u, v) = pairs.swap_remove(k);
            weights.swap_remove(k);
            degree[u] += 1;
            degree[v] += 1;
            edges.push((u, v));
            for (w, &p) in weights.iter_mut().zip(&pairs) {
                if p.0 == u || p.1 == u || p.0 == v || p.1 == v {
                    *w = weight(&degree, p);
                }
            }
        }
    }
    let mut prov = m.provenance.clone();
    prov.added_edges += to_add;
    prov.seed = Some(seed);
    CouplingMap::build(n, &edges, prov)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heavy_hex_counts() {
        let m = heavy_hex(4, 2).unwrap();
        assert_eq!(m.n_qubits(), 65);
        assert_eq!(m.n_couplings(), 72);
        let m = heavy_hex(6, 3).unwrap();
        assert_eq!(m.n_qubits(), 127);
        assert_eq!(m.n_couplings(), 144);
        assert!((coupling_density(&m) - 144.0 / 8001.0).abs() < 1e-15);
    }

    #[test]
    fn heavy_hex_matches_washington_numbering() {
        // First line 0..=13, bridges 14..=17 hang below columns 0, 4, 8, 12.
        let m = heavy_hex(6, 3).unwrap();
        for (a, b) in [(0, 14), (14, 18), (4, 15), (15, 22), (12, 17), (17, 30)] {
            assert!(m.is_coupled(a, b), "missing ({a}, {b})");
        }
        // Second gap bridges sit under columns 2, 6, 10, 14 of line 1.
        assert!(m.is_coupled(20, 33) && m.is_coupled(33, 39));
    }

    #[test]
    fn heavy_hex_structure_small_sizes() {
        for r in 1..=8 {
            for c in 1..=8 {
                let m = heavy_hex(r, c).unwrap();
                assert_eq!(m.n_qubits(), heavy_hex_qubits(r, c));
                assert_eq!(m.n_couplings(), heavy_hex_couplings(r, c));
                assert!(m.max_degree() <= 3);
            }
        }
        assert!(heavy_hex(0, 2).is_err());
    }

    #[test]
    fn backend_series_rows() {
        let s = backend_series();
        assert_eq!(s.len(), 10);
        let q: Vec<usize> = s.iter().map(|b| b.n_qubits).collect();
        assert_eq!(q, [65, 70, 79, 89, 93, 108, 113, 127, 137, 161]);
        for b in s {
            assert_eq!(heavy_hex(b.rows, b.cols).unwrap().n_qubits(), b.n_qubits);
        }
    }

    #[test]
    fn density_examples() {
        assert_eq!(coupling_density(&CouplingMap::clique(5)), 1.0);
        assert!((coupling_density(&CouplingMap::path(3)) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn densify_examples() {
        let base = heavy_hex(6, 3).unwrap();
        let d = densify(&base, 0.1, 5).unwrap();
        assert_eq!(d.n_couplings(), 800);
        assert!(base.couplings().iter().all(|&(a, b)| d.is_coupled(a, b)));
        assert_eq!(d.provenance().added_edges, 656);

        let same = densify(&base, coupling_density(&base), 5).unwrap();
        assert_eq!(same, base);

        let small = heavy_hex(1, 1).unwrap();
        assert!(densify(&small, 1.0, 1).unwrap().is_all_to_all());
        assert!(matches!(densify(&base, 0.01, 1), Err(Error::Contract(_))));
        assert!(densify(&base, 1.5, 1).is_err());
    }

    #[test]
    fn densify_is_deterministic_and_monotone() {
        let base = heavy_hex(2, 2).unwrap();
        let a = densify(&base, 0.3, 11).unwrap();
        assert_eq!(a, densify(&base, 0.3, 11).unwrap());
        let mut last = base.n_couplings();
        for c in [0.1, 0.2, 0.4, 0.8] {
            let m = densify(&base, c, 11).unwrap();
            assert!(m.n_couplings() >= last);
            last = m.n_couplings();
        }
    }

    #[test]
    fn rejects_disconnected_maps() {
        assert!(CouplingMap::from_edges(4, &[(0, 1), (2, 3)]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let m = heavy_hex(1, 2).unwrap();
        let back = CouplingMap::from_text(&m.to_text()).unwrap();
        assert_eq!(back, m);
    }
}
