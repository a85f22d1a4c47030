//! Polynomial quantile regression.
//!
//! Minimising the pinball loss is a linear program whose optimum sits at a
//! vertex where `degree + 1` residuals vanish. The solver starts from the
//! vertex nearest a least-squares fit and walks edges: freeing one basis
//! residual gives a one-dimensional convex piecewise-linear loss whose
//! minimum is found exactly at a breakpoint, where another point enters the
//! basis. At a vertex with no descending edge the loss is optimal.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct QuantileFit {
    pub tau: f64,
    /// Polynomial coefficients, lowest order first.
    pub coeffs: Vec<f64>,
    pub pinball_loss: f64,
}

impl QuantileFit {
    /// Coefficient of x^k, zero beyond the fitted degree.
    pub fn c(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn predict(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

pub fn pinball(u: f64, tau: f64) -> f64 {
    if u < 0.0 {
        (tau - 1.0) * u
    } else {
        tau * u
    }
}

pub fn pinball_loss(points: &[(f64, f64)], coeffs: &[f64], tau: f64) -> f64 {
    points
        .iter()
        .map(|&(x, y)| pinball(y - coeffs.iter().rev().fold(0.0, |a, c| a * x + c), tau))
        .sum()
}

fn distinct_x(points: &[(f64, f64)]) -> usize {
    let mut xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs.len()
}

pub fn quantile_fit(points: &[(f64, f64)], tau: f64, degree: usize) -> Result<QuantileFit> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::contract("tau must lie in (0, 1)"));
    }
    if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::contract("points must be finite"));
    }
    let p = degree + 1;
    let distinct = distinct_x(points);
    if distinct < p {
        return Err(Error::Rank(format!(
            "degree {degree} needs {p} distinct x values, got {distinct}"
        )));
    }

    // Work in x / scale to keep the Vandermonde system well conditioned.
    let scale = points.iter().map(|p| p.0.abs()).fold(0.0, f64::max).max(1.0);
    let n = points.len();
    let design = DMatrix::from_fn(n, p, |i, k| (points[i].0 / scale).powi(k as i32));
    let y_scale = points.iter().map(|p| p.1.abs()).fold(0.0, f64::max).max(1.0);
    // A tiny deterministic jitter removes ties between residuals so every
    // edge step is strictly improving; it is far below the reported
    // precision.
    let y = DVector::from_fn(n, |i, _| {
        let h = crate::seed::mix64(i as u64) as f64 / u64::MAX as f64 - 0.5;
        points[i].1 + y_scale * 1e-11 * h
    });

    let mut basis = initial_basis(&design, &y, p)?;
    let mut beta = solve_basis(&design, &y, &basis).ok_or_else(|| Error::Internal("singular start".into()))?;
    for _ in 0..100 * n + 100 {
        match improve(&design, &y, &basis, &beta, tau) {
            Some((new_basis, new_beta)) => {
                basis = new_basis;
                beta = new_beta;
            }
            None => break,
        }
    }
    // Interpolate the unjittered data at the optimal vertex.
    let exact = DVector::from_fn(n, |i, _| points[i].1);
    let beta = solve_basis(&design, &exact, &basis).unwrap_or(beta);
    let coeffs: Vec<f64> = (0..p).map(|k| beta[k] / scale.powi(k as i32)).collect();
    let loss = pinball_loss(points, &coeffs, tau);
    Ok(QuantileFit { tau, coeffs, pinball_loss: loss })
}

fn solve_basis(x: &DMatrix<f64>, y: &DVector<f64>, basis: &[usize]) -> Option<DVector<f64>> {
    let xb = x.select_rows(basis);
    let yb = DVector::from_iterator(basis.len(), basis.iter().map(|&i| y[i]));
    xb.lu().solve(&yb)
}

/// The `p` points closest to the least-squares fit that form a nonsingular
/// system (distinct x values).
fn initial_basis(x: &DMatrix<f64>, y: &DVector<f64>, p: usize) -> Result<Vec<usize>> {
    let ls = x
        .clone()
        .svd(true, true)
        .solve(y, 1e-14)
        .map_err(|e| Error::Internal(e.to_string()))?;
    let r = y - x * ls;
    let mut order: Vec<usize> = (0..x.nrows()).collect();
    order.sort_by(|&a, &b| r[a].abs().total_cmp(&r[b].abs()).then(a.cmp(&b)));
    let mut basis: Vec<usize> = Vec::with_capacity(p);
    for i in order {
        if basis.iter().all(|&j| x[(j, 1.min(p - 1))] != x[(i, 1.min(p - 1))]) || p == 1 {
            basis.push(i);
            if basis.len() == p {
                return Ok(basis);
            }
        }
    }
    Err(Error::Rank("not enough distinct x values".into()))
}

/// One exact edge step, or `None` at an optimal vertex.
fn improve(
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    basis: &[usize],
    beta: &DVector<f64>,
    tau: f64,
) -> Option<(Vec<usize>, DVector<f64>)> {
    let p = basis.len();
    let inv = x.select_rows(basis).try_inverse()?;
    let r = y - x * beta;
    let in_basis = |i: usize| basis.contains(&i);
    let tol = 1e-12;
    for j in 0..p {
        let d = inv.column(j).into_owned();
        let a = x * &d;
        for s in [1.0, -1.0] {
            // Moving along t·s·d keeps other basis residuals at zero and
            // sets residual j to −t·s.
            let mut slope = if s > 0.0 { 1.0 - tau } else { tau };
            let mut breaks: Vec<(f64, f64, usize)> = Vec::new();
            for i in 0..x.nrows() {
                if in_basis(i) {
                    continue;
                }
                let ai = s * a[i];
                if ai == 0.0 {
                    continue;
                }
                let ri = r[i];
                let dir = if ri > 0.0 || (ri == 0.0 && ai < 0.0) { tau } else { tau - 1.0 };
                slope -= ai * dir;
                let t = ri / ai;
                if t > 0.0 {
                    breaks.push((t, ai.abs(), i));
                }
            }
            if slope >= -tol {
                continue;
            }
            breaks.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.2.cmp(&b.2)));
            for &(t, w, i) in &breaks {
                slope += w;
                if slope >= -tol {
                    let mut nb = basis.to_vec();
                    nb[j] = i;
                    let nbeta = beta + &d * (s * t);
                    return Some((nb, nbeta));
                }
            }
        }
    }
    None
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Exhaustive oracle: best loss over every interpolating vertex.
    pub(crate) fn brute_force_loss(points: &[(f64, f64)], tau: f64, degree: usize) -> f64 {
        let p = degree + 1;
        let n = points.len();
        let mut best = f64::INFINITY;
        let mut idx: Vec<usize> = (0..p).collect();
        loop {
            let a = DMatrix::from_fn(p, p, |r, k| points[idx[r]].0.powi(k as i32));
            let b = DVector::from_fn(p, |r, _| points[idx[r]].1);
            if a.determinant().abs() > 1e-12 {
                if let Some(c) = a.lu().solve(&b) {
                    best = best.min(pinball_loss(points, c.as_slice(), tau));
                }
            }
            let mut k = p;
            while k > 0 && idx[k - 1] == n - p + k - 1 {
                k -= 1;
            }
            if k == 0 {
                return best;
            }
            idx[k - 1] += 1;
            for m in k..p {
                idx[m] = idx[m - 1] + 1;
            }
        }
    }

    #[test]
    fn exact_quadratic() {
        let pts: Vec<(f64, f64)> = (0..12).map(|i| {
            let x = i as f64 * 3.0;
            (x, 3.0 + 2.0 * x + 0.5 * x * x)
        }).collect();
        let f = quantile_fit(&pts, 0.5, 2).unwrap();
        for (k, want) in [3.0, 2.0, 0.5].into_iter().enumerate() {
            assert!((f.c(k) - want).abs() < 1e-6, "{f:?}");
        }
        assert!(f.pinball_loss < 1e-6);
    }

    #[test]
    fn median_ignores_outlier() {
        let pts: Vec<(f64, f64)> = [5.0, 5.0, 5.0, 5.0, 1000.0].iter().enumerate().map(|(i, &y)| (i as f64, y)).collect();
        let f = quantile_fit(&pts, 0.5, 0).unwrap();
        assert!((f.c(0) - 5.0).abs() < 1e-6);
    }

    #[test]
    fn symmetric_noise() {
        let eps = 0.1;
        let pts: Vec<(f64, f64)> = (0..40).map(|i| {
            let x = i as f64 / 2.0;
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            (x, 1.0 - 0.5 * x + 0.25 * x * x + sign * eps)
        }).collect();
        let f = quantile_fit(&pts, 0.5, 2).unwrap();
        for (k, want) in [1.0, -0.5, 0.25].into_iter().enumerate() {
            assert!((f.c(k) - want).abs() < 10.0 * eps, "{f:?}");
        }
    }

    #[test]
    fn rank_errors() {
        let pts = [(1.0, 2.0), (1.0, 3.0), (2.0, 1.0)];
        assert!(matches!(quantile_fit(&pts, 0.5, 2), Err(Error::Rank(_))));
        assert!(quantile_fit(&pts, 0.5, 1).is_ok());
        assert!(quantile_fit(&pts, 1.0, 1).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn matches_vertex_enumeration(
            ys in proptest::collection::vec(-50.0f64..50.0, 4..11),
            tau in 0.1f64..0.9,
            degree in 0usize..3,
            dup in any::<bool>(),
        ) {
            let pts: Vec<(f64, f64)> = ys.iter().enumerate()
                .map(|(i, &y)| ((if dup { i / 2 } else { i }) as f64, y))
                .collect();
            prop_assume!(distinct_x(&pts) > degree);
            let fit = quantile_fit(&pts, tau, degree).unwrap();
            let oracle = brute_force_loss(&pts, tau, degree);
            prop_assert!(fit.pinball_loss <= oracle * (1.0 + 1e-6) + 1e-9,
                "fit {} oracle {}", fit.pinball_loss, oracle);
        }
    }
}
