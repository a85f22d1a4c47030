//! Sweeps, trial aggregation, saturation detection and growth-model fits.

mod quantile;
mod sweep;

use std::collections::BTreeMap;
use std::io::Write;

pub use quantile::{pinball, pinball_loss, quantile_fit, QuantileFit};
pub use sweep::{
    parse_densities, read_records, sweep_backend_size, sweep_density, write_records,
    DensityTarget, SweepRecord, SweepSpec, RECORD_COLUMNS, SWEEP_BETA, SWEEP_GAMMA,
};

use crate::error::{Error, Result};
use crate::transpiler::mean_std;

pub const SATURATION_TOL: f64 = 0.05;

/// Trial statistics of one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSummary {
    pub n_nodes: usize,
    pub graph_density: f64,
    pub p_layers: usize,
    pub coupling_density: f64,
    pub backend_qubits: usize,
    pub trials: usize,
    pub mean_depth: f64,
    pub std_depth: f64,
    pub mean_swaps: f64,
    pub mean_time_ns: f64,
    pub std_time_ns: f64,
}

/// Group records by sweep point, preserving first-appearance order.
pub fn summarize(records: &[SweepRecord]) -> Vec<PointSummary> {
    let mut order: Vec<(usize, u64, usize, u64, usize)> = Vec::new();
    let mut groups: BTreeMap<(usize, u64, usize, u64, usize), Vec<&SweepRecord>> = BTreeMap::new();
    for r in records {
        let key = (
            r.n_nodes,
            r.graph_density.to_bits(),
            r.p_layers,
            r.coupling_density.to_bits(),
            r.backend_qubits,
        );
        groups.entry(key).or_insert_with(|| {
            order.push(key);
            Vec::new()
        }).push(r);
    }
    order
        .into_iter()
        .map(|key| {
            let rs = &groups[&key];
            let (mean_depth, std_depth) = mean_std(rs.iter().map(|r| r.depth as f64));
            let (mean_time_ns, std_time_ns) = mean_std(rs.iter().map(|r| r.circuit_time_ns));
            let (mean_swaps, _) = mean_std(rs.iter().map(|r| r.swap_count as f64));
            PointSummary {
                n_nodes: key.0,
                graph_density: rs[0].graph_density,
                p_layers: key.2,
                coupling_density: rs[0].coupling_density,
                backend_qubits: key.4,
                trials: rs.len(),
                mean_depth,
                std_depth,
                mean_swaps,
                mean_time_ns,
                std_time_ns,
            }
        })
        .collect()
}

/// Ranks starting at 1 with ties sharing their average rank.
fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut r = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

/// Spearman rank correlation: Pearson correlation of tie-averaged ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::contract("spearman needs two equal-length samples of size >= 2"));
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = rx.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    if vx == 0.0 || vy == 0.0 {
        return Err(Error::contract("spearman is undefined for a constant sample"));
    }
    Ok(cov / (vx * vy).sqrt())
}

/// Smallest sampled density whose mean depth is within `tol` of the depth
/// at the largest sampled density.
pub fn saturation_density(curve: &[(f64, f64)], tol: f64) -> Result<f64> {
    let mut sorted = curve.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let &(_, asymptote) = sorted.last().ok_or_else(|| Error::contract("empty curve"))?;
    Ok(sorted
        .iter()
        .find(|&&(_, d)| d <= (1.0 + tol) * asymptote)
        .expect("the last point always qualifies")
        .0)
}

/// Median pinball losses of the candidate growth models.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelLosses {
    pub linear: f64,
    pub quadratic: f64,
    /// exp(a + b·x) fitted as a median line on log y; loss is measured on
    /// the original scale. `None` when some y is not positive.
    pub exponential: Option<f64>,
}

pub fn compare_models(points: &[(f64, f64)]) -> Result<ModelLosses> {
    let linear = quantile_fit(points, 0.5, 1)?.pinball_loss;
    let quadratic = quantile_fit(points, 0.5, 2)?.pinball_loss;
    let exponential = if points.iter().all(|p| p.1 > 0.0) {
        let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x, y.ln())).collect();
        let f = quantile_fit(&logs, 0.5, 1)?;
        Some(points.iter().map(|&(x, y)| pinball(y - f.predict(x).exp(), 0.5)).sum())
    } else {
        None
    };
    Ok(ModelLosses { linear, quadratic, exponential })
}

/// Record columns usable for grouping fits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupColumn {
    GraphDensity,
    PLayers,
    CouplingDensity,
    BackendQubits,
}

impl std::str::FromStr for GroupColumn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "graph_density" => Ok(GroupColumn::GraphDensity),
            "p_layers" => Ok(GroupColumn::PLayers),
            "coupling_density" => Ok(GroupColumn::CouplingDensity),
            "backend_qubits" => Ok(GroupColumn::BackendQubits),
            other => Err(Error::contract(format!("cannot group by '{other}'"))),
        }
    }
}

impl GroupColumn {
    pub fn name(self) -> &'static str {
        match self {
            GroupColumn::GraphDensity => "graph_density",
            GroupColumn::PLayers => "p_layers",
            GroupColumn::CouplingDensity => "coupling_density",
            GroupColumn::BackendQubits => "backend_qubits",
        }
    }

    fn value(self, r: &SweepRecord) -> f64 {
        match self {
            GroupColumn::GraphDensity => r.graph_density,
            GroupColumn::PLayers => r.p_layers as f64,
            GroupColumn::CouplingDensity => r.coupling_density,
            GroupColumn::BackendQubits => r.backend_qubits as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupFit {
    pub key: Vec<f64>,
    pub n_points: usize,
    pub fit: QuantileFit,
}

/// Fit depth against n_nodes over every trial record of each group.
/// Groups appear in ascending key order.
pub fn fit_groups(
    records: &[SweepRecord],
    group_by: &[GroupColumn],
    tau: f64,
    degree: usize,
) -> Result<Vec<GroupFit>> {
    let mut groups: BTreeMap<Vec<u64>, Vec<(f64, f64)>> = BTreeMap::new();
    for r in records {
        // Nonnegative floats order like their bit patterns.
        let key = group_by.iter().map(|c| c.value(r).to_bits()).collect();
        groups.entry(key).or_default().push((r.n_nodes as f64, r.depth as f64));
    }
    groups
        .into_iter()
        .map(|(key, pts)| {
            Ok(GroupFit {
                key: key.into_iter().map(f64::from_bits).collect(),
                n_points: pts.len(),
                fit: quantile_fit(&pts, tau, degree)?,
            })
        })
        .collect()
}

pub fn write_fits<W: Write>(fits: &[GroupFit], group_by: &[GroupColumn], degree: usize, mut w: W) -> Result<()> {
    let mut header: Vec<String> = group_by.iter().map(|c| c.name().to_string()).collect();
    header.push("tau".into());
    header.push("degree".into());
    header.extend((0..=degree.max(2)).map(|k| format!("c{k}")));
    header.push("pinball_loss".into());
    header.push("n_points".into());
    writeln!(w, "{}", header.join(","))?;
    for f in fits {
        let mut row: Vec<String> = f.key.iter().map(|v| v.to_string()).collect();
        row.push(f.fit.tau.to_string());
        row.push(degree.to_string());
        row.extend((0..=degree.max(2)).map(|k| f.fit.c(k).to_string()));
        row.push(f.fit.pinball_loss.to_string());
        row.push(f.n_points.to_string());
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}
