use std::f64::consts::{FRAC_PI_2, PI};

use crate::circuit::{Circuit, Gate};

/// Rewrite every gate into the native {RZ, SX, X, CX} set:
///
/// - H → RZ(π/2) SX RZ(π/2)
/// - RX(θ) → RZ(π/2) SX RZ(θ+π) SX RZ(π/2)
/// - RZZ(θ)(a,b) → CX(a,b) RZ(θ)(b) CX(a,b)
/// - SWAP(a,b) → CX(a,b) CX(b,a) CX(a,b)
///
/// Each rewrite is exact up to global phase. `GateKind` is a closed set, so
/// there is no unknown-gate failure mode.
pub fn translate(c: &Circuit) -> Circuit {
    let mut out = Circuit::new(c.n_qubits());
    for &g in c.gates() {
        for r in translate_gate(g) {
            out.push_unchecked(r);
        }
    }
    out
}

pub(crate) fn translate_gate(g: Gate) -> impl Iterator<Item = Gate> {
    let v: Vec<Gate> = match g {
        Gate::H(q) => vec![Gate::RZ(q, FRAC_PI_2), Gate::SX(q), Gate::RZ(q, FRAC_PI_2)],
        Gate::RX(q, t) => vec![
            Gate::RZ(q, FRAC_PI_2),
            Gate::SX(q),
            Gate::RZ(q, t + PI),
            Gate::SX(q),
            Gate::RZ(q, FRAC_PI_2),
        ],
        Gate::RZZ(a, b, t) => vec![Gate::CX(a, b), Gate::RZ(b, t), Gate::CX(a, b)],
        Gate::SWAP(a, b) => vec![Gate::CX(a, b), Gate::CX(b, a), Gate::CX(a, b)],
        g @ (Gate::RZ(..) | Gate::SX(_) | Gate::X(_) | Gate::CX(..)) => vec![g],
    };
    v.into_iter()
}
