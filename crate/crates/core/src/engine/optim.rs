//! Derivative-free minimisers with a hard budget of objective evaluations.
//!
//! The objective may be noisy (shot sampling), so neither method stops on a
//! tolerance: both run until the budget is spent.

use nalgebra::{DMatrix, DVector};

/// Counts evaluations and refuses to exceed the budget.
struct Budget<F> {
    f: F,
    left: usize,
}

impl<F: FnMut(&[f64]) -> f64> Budget<F> {
    fn eval(&mut self, x: &[f64]) -> Option<f64> {
        if self.left == 0 {
            return None;
        }
        self.left -= 1;
        Some((self.f)(x))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

fn best_of(points: &[(Vec<f64>, f64)], evaluations: usize) -> Minimum {
    let (x, value) = points
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .cloned()
        .unwrap_or_default();
    Minimum { x, value, evaluations }
}

/// Nelder–Mead with the standard coefficients (reflection 1, expansion 2,
/// contraction 1/2, shrink 1/2) on an axis-aligned initial simplex.
pub fn nelder_mead(
    f: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    step: f64,
    max_evals: usize,
) -> Minimum {
    let mut b = Budget { f, left: max_evals };
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let mut vertices = vec![x0.to_vec()];
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += step;
        vertices.push(v);
    }
    for v in vertices {
        match b.eval(&v) {
            Some(y) => simplex.push((v, y)),
            None => return best_of(&simplex, max_evals),
        }
    }
    let lerp = |a: &[f64], c: &[f64], t: f64| -> Vec<f64> {
        a.iter().zip(c).map(|(a, c)| c + t * (a - c)).collect()
    };
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let worst = simplex[n].clone();
        let mut centroid = vec![0.0; n];
        for (v, _) in &simplex[..n] {
            centroid.iter_mut().zip(v).for_each(|(c, x)| *c += x / n as f64);
        }
        let xr = lerp(&worst.0, &centroid, -1.0);
        let Some(fr) = b.eval(&xr) else { break };
        if fr < simplex[0].1 {
            let xe = lerp(&worst.0, &centroid, -2.0);
            let Some(fe) = b.eval(&xe) else {
                simplex[n] = (xr, fr);
                break;
            };
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, outside) = if fr < worst.1 {
                (lerp(&xr, &centroid, 0.5), true)
            } else {
                (lerp(&worst.0, &centroid, 0.5), false)
            };
            let Some(fc) = b.eval(&xc) else { break };
            if fc < if outside { fr } else { worst.1 } {
                simplex[n] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for i in 1..=n {
                    let xs = lerp(&simplex[i].0, &best, 0.5);
                    let Some(fs) = b.eval(&xs) else {
                        return best_of(&simplex, max_evals - b.left);
                    };
                    simplex[i] = (xs, fs);
                }
            }
        }
    }
    best_of(&simplex, max_evals - b.left)
}

/// Linear-model trust-region method in the spirit of COBYLA (without
/// constraints): a linear interpolant through n+1 points gives a descent
/// direction, a step of length `rho` is taken along it, and `rho` halves
/// whenever a step fails to improve.
pub fn cobyla_like(
    f: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    rho_start: f64,
    max_evals: usize,
) -> Minimum {
    const RHO_MIN: f64 = 1e-4;
    let mut b = Budget { f, left: max_evals };
    let n = x0.len();
    let mut rho = rho_start;
    let mut pts: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let mut seen: Vec<(Vec<f64>, f64)> = Vec::new();

    let rebuild = |b: &mut Budget<_>, centre: &(Vec<f64>, f64), rho: f64, pts: &mut Vec<(Vec<f64>, f64)>| -> bool {
        pts.clear();
        pts.push(centre.clone());
        for i in 0..n {
            let mut v = centre.0.clone();
            v[i] += rho;
            match b.eval(&v) {
                Some(y) => pts.push((v, y)),
                None => return false,
            }
        }
        true
    };

    let Some(f0) = b.eval(x0) else {
        return best_of(&seen, 0);
    };
    seen.push((x0.to_vec(), f0));
    if !rebuild(&mut b, &(x0.to_vec(), f0), rho, &mut pts) {
        seen.extend(pts.iter().cloned());
        return best_of(&seen, max_evals - b.left);
    }
    seen.extend(pts[1..].iter().cloned());

    loop {
        pts.sort_by(|a, c| a.1.total_cmp(&c.1));
        let (xb, fb) = pts[0].clone();
        let d = DMatrix::from_fn(n, n, |r, c| pts[r + 1].0[c] - xb[c]);
        let rhs = DVector::from_fn(n, |r, _| pts[r + 1].1 - fb);
        let grad = d.lu().solve(&rhs).filter(|g| g.norm() > 0.0 && g.iter().all(|v| v.is_finite()));
        let Some(g) = grad else {
            rho = (rho * 0.5).max(RHO_MIN);
            if !rebuild(&mut b, &(xb.clone(), fb), rho, &mut pts) {
                seen.extend(pts[1..].iter().cloned());
                break;
            }
            seen.extend(pts[1..].iter().cloned());
            continue;
        };
        let dir = -&g / g.norm();
        let xt: Vec<f64> = xb.iter().zip(dir.iter()).map(|(x, d)| x + rho * d).collect();
        let Some(ft) = b.eval(&xt) else { break };
        seen.push((xt.clone(), ft));
        if ft < fb {
            // Drop the point farthest from the new best to keep the
            // interpolation set local.
            let far = (1..=n)
                .max_by(|&i, &j| dist2(&pts[i].0, &xt).total_cmp(&dist2(&pts[j].0, &xt)))
                .expect("n >= 1");
            pts[far] = (xt, ft);
        } else {
            if ft < pts[n].1 {
                pts[n] = (xt, ft);
            }
            rho = (rho * 0.5).max(RHO_MIN);
            if pts.iter().any(|(x, _)| dist2(x, &xb).sqrt() > 4.0 * rho) {
                if !rebuild(&mut b, &(xb.clone(), fb), rho, &mut pts) {
                    seen.extend(pts[1..].iter().cloned());
                    break;
                }
                seen.extend(pts[1..].iter().cloned());
            }
        }
    }
    best_of(&seen, max_evals - b.left)
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rosen(x: &[f64]) -> f64 {
        (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2)
    }

    fn bowl(x: &[f64]) -> f64 {
        x.iter().enumerate().map(|(i, v)| (v - i as f64).powi(2)).sum()
    }

    #[test]
    fn nelder_mead_finds_minima() {
        let m = nelder_mead(rosen, &[-1.2, 1.0], 0.5, 2000);
        assert!(m.value < 1e-8, "{m:?}");
        let m = nelder_mead(bowl, &[3.0, 3.0, 3.0], 1.0, 1000);
        assert!(m.value < 1e-10);
        assert_eq!(m.evaluations, 1000);
    }

    #[test]
    fn cobyla_like_finds_minima() {
        let m = cobyla_like(bowl, &[3.0, 3.0, 3.0], 1.0, 400);
        assert!(m.value < 1e-6, "{m:?}");
        assert_eq!(m.evaluations, 400);
    }

    #[test]
    fn budgets_are_exact() {
        for budget in 0..12 {
            let mut calls = 0;
            let m = nelder_mead(|x| { calls += 1; bowl(x) }, &[1.0, 2.0], 0.3, budget);
            assert_eq!(calls, budget);
            assert_eq!(m.evaluations, budget);
            let mut calls = 0;
            cobyla_like(|x| { calls += 1; bowl(x) }, &[1.0, 2.0], 0.3, budget);
            assert_eq!(calls, budget);
        }
    }
}
