//! Single-qubit resynthesis into the native {RZ, SX, X} basis.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::circuit::{gate_matrix, CMatrix, Gate, C64};

const EPS: f64 = 1e-12;

/// Wrap an angle into (-π, π].
pub(crate) fn wrap_angle(t: f64) -> f64 {
    let r = t.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

fn push_rz(out: &mut Vec<Gate>, q: usize, t: f64) {
    let t = wrap_angle(t);
    if t.abs() > EPS {
        out.push(Gate::RZ(q, t));
    }
}

/// 2x2 product of a run of single-qubit gates (applied in order).
pub(crate) fn run_matrix(run: &[Gate]) -> CMatrix {
    run.iter()
        .fold(CMatrix::identity(2), |acc, g| gate_matrix(g).mul(&acc))
}

/// True if `u` is a multiple of the identity.
pub(crate) fn is_identity_up_to_phase(u: &CMatrix) -> bool {
    u[(0, 1)].norm() < EPS && u[(1, 0)].norm() < EPS && (u[(0, 0)] - u[(1, 1)]).norm() < EPS
}

/// Native gate sequence on qubit `q` equal to `u` up to global phase.
///
/// Writes u ∝ RZ(φ) RY(θ) RZ(λ) and emits, in circuit order:
/// - nothing or a single RZ when u is diagonal,
/// - RZ, X when u is anti-diagonal,
/// - RZ, SX, RZ when θ = π/2,
/// - RZ(λ), SX, RZ(θ+π), SX, RZ(φ+π) otherwise.
pub fn synthesize_1q(u: &CMatrix, q: usize) -> Vec<Gate> {
    let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
    let v = u.scale(C64::new(1.0, 0.0) / det.sqrt());
    let (c, s) = (v[(0, 0)].norm(), v[(1, 0)].norm());
    let theta = 2.0 * s.atan2(c);
    let mut out = Vec::with_capacity(5);
    if s < EPS {
        push_rz(&mut out, q, 2.0 * v[(1, 1)].arg());
        return out;
    }
    let diff = 2.0 * v[(1, 0)].arg(); // φ - λ
    if c < EPS {
        push_rz(&mut out, q, PI - diff);
        out.push(Gate::X(q));
        return out;
    }
    let sum = 2.0 * v[(1, 1)].arg(); // φ + λ
    let (phi, lam) = ((sum + diff) / 2.0, (sum - diff) / 2.0);
    if (theta - FRAC_PI_2).abs() < EPS {
        push_rz(&mut out, q, lam - FRAC_PI_2);
        out.push(Gate::SX(q));
        push_rz(&mut out, q, phi + FRAC_PI_2);
        return out;
    }
    push_rz(&mut out, q, lam);
    out.push(Gate::SX(q));
    push_rz(&mut out, q, theta + PI);
    out.push(Gate::SX(q));
    push_rz(&mut out, q, phi + PI);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::equivalent_up_to_phase;
    use proptest::prelude::*;

    fn check(run: &[Gate]) -> Vec<Gate> {
        let u = run_matrix(run);
        let out = synthesize_1q(&u, 0);
        assert!(out.len() <= 5);
        assert!(out.iter().all(|g| g.kind().is_native()));
        assert!(
            equivalent_up_to_phase(&run_matrix(&out), &u, 1e-10).unwrap(),
            "{run:?} -> {out:?}"
        );
        out
    }

    #[test]
    fn special_forms() {
        assert!(check(&[Gate::RZ(0, 0.2), Gate::RZ(0, -0.2)]).is_empty());
        assert_eq!(check(&[Gate::RZ(0, 0.2), Gate::RZ(0, 0.5)]).len(), 1);
        assert_eq!(check(&[Gate::SX(0), Gate::SX(0)]), vec![Gate::X(0)]);
        assert!(check(&[Gate::X(0), Gate::X(0)]).is_empty());
        assert_eq!(check(&[Gate::H(0)]).len(), 3);
        assert_eq!(check(&[Gate::RX(0, 0.7)]).len(), 5);
        assert_eq!(check(&[Gate::RX(0, PI)]), vec![Gate::X(0)]);
    }

    proptest! {
        #[test]
        fn random_runs_resynthesise(angles in proptest::collection::vec((0u8..5, -7.0f64..7.0), 1..12)) {
            let run: Vec<Gate> = angles
                .into_iter()
                .map(|(k, t)| match k {
                    0 => Gate::H(0),
                    1 => Gate::SX(0),
                    2 => Gate::X(0),
                    3 => Gate::RZ(0, t),
                    _ => Gate::RX(0, t),
                })
                .collect();
            check(&run);
        }
    }
}
