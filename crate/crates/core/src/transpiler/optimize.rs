//! Peephole optimisation to a fixed point.
//!
//! One sweep walks the gate list keeping, per wire, the pending run of
//! single-qubit gates. A run is flushed just before the next two-qubit gate
//! on its wire and replaced by its canonical native resynthesis when that is
//! no longer than the original run. Two-qubit gates cancel (`CX`, `SWAP`) or
//! merge (`RZZ`) with an identical predecessor when nothing non-trivial sits
//! between them on either wire. Per-wire chains never get longer, so depth
//! cannot increase.

use super::synth::{is_identity_up_to_phase, run_matrix, synthesize_1q, wrap_angle};
use crate::circuit::{Circuit, Gate};
use crate::topology::CouplingMap;

/// Peephole-optimise `c`. Every two-qubit gate of the output already appears
/// in the input, so coupling-map legality is preserved; the map is accepted
/// for interface symmetry with the other stages.
pub fn optimize(c: &Circuit, _map: Option<&CouplingMap>) -> Circuit {
    let mut cur = c.clone();
    loop {
        let next = sweep(&cur);
        if next.len() >= cur.len() {
            return if next.len() == cur.len() { next } else { cur };
        }
        cur = next;
    }
}

struct Sweep {
    out: Vec<Option<Gate>>,
    /// Output indices of the live gates on each wire, most recent last.
    wire: Vec<Vec<usize>>,
    pending: Vec<Vec<Gate>>,
}

impl Sweep {
    fn flush(&mut self, q: usize) {
        let run = std::mem::take(&mut self.pending[q]);
        if run.is_empty() {
            return;
        }
        let u = run_matrix(&run);
        let synth = synthesize_1q(&u, q);
        let keep = if synth.len() <= run.len() { synth } else { run };
        for g in keep {
            self.wire[q].push(self.out.len());
            self.out.push(Some(g));
        }
    }

    fn pending_is_trivial(&self, q: usize) -> bool {
        let run = &self.pending[q];
        run.is_empty() || is_identity_up_to_phase(&run_matrix(run))
    }

    /// Index of the gate that is the latest emitted one on both wires.
    fn shared_predecessor(&self, a: usize, b: usize) -> Option<usize> {
        let ia = *self.wire[a].last()?;
        let ib = *self.wire[b].last()?;
        (ia == ib && self.out[ia].is_some()).then_some(ia)
    }

    fn two_qubit(&mut self, g: Gate, a: usize, b: usize) {
        if self.pending_is_trivial(a) && self.pending_is_trivial(b) {
            if let Some(k) = self.shared_predecessor(a, b) {
                let prev = self.out[k].expect("live gate");
                let merged = match (prev, g) {
                    (Gate::CX(p, q), Gate::CX(r, s)) if (p, q) == (r, s) => Some(None),
                    (Gate::SWAP(..), Gate::SWAP(..)) => Some(None),
                    (Gate::RZZ(_, _, t1), Gate::RZZ(_, _, t2)) => {
                        let t = wrap_angle(t1 + t2);
                        Some((t.abs() > 1e-12).then_some(Gate::RZZ(a, b, t)))
                    }
                    _ => None,
                };
                if let Some(replacement) = merged {
                    self.pending[a].clear();
                    self.pending[b].clear();
                    self.out[k] = replacement;
                    if replacement.is_none() {
                        self.wire[a].pop();
                        self.wire[b].pop();
                    }
                    return;
                }
            }
        }
        self.flush(a);
        self.flush(b);
        let idx = self.out.len();
        self.out.push(Some(g));
        self.wire[a].push(idx);
        self.wire[b].push(idx);
    }
}

fn sweep(c: &Circuit) -> Circuit {
    let n = c.n_qubits();
    let mut s = Sweep {
        out: Vec::with_capacity(c.len()),
        wire: vec![Vec::new(); n],
        pending: vec![Vec::new(); n],
    };
    for &g in c.gates() {
        match g.qubits() {
            (q, None) => s.pending[q].push(g),
            (a, Some(b)) => s.two_qubit(g, a, b),
        }
    }
    for q in 0..n {
        s.flush(q);
    }
    let mut out = Circuit::new(n);
    for g in s.out.into_iter().flatten() {
        out.push_unchecked(g);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{depth, equivalent_up_to_phase, tests::arb_circuit, unitary};
    use proptest::prelude::*;

    fn opt(gates: Vec<Gate>, n: usize) -> Circuit {
        optimize(&Circuit::from_gates(n, gates).unwrap(), None)
    }

    #[test]
    fn merges_rz() {
        let c = opt(vec![Gate::RZ(0, 0.25), Gate::RZ(0, 0.5)], 1);
        assert_eq!(c.len(), 1);
        let Gate::RZ(0, t) = c.gates()[0] else { panic!() };
        assert!((t - 0.75).abs() < 1e-12);
    }

    #[test]
    fn cancels_cx_pairs() {
        assert!(opt(vec![Gate::CX(0, 1), Gate::CX(0, 1)], 2).is_empty());
        // Cancellation exposes another pair.
        assert!(opt(
            vec![Gate::CX(0, 1), Gate::CX(1, 2), Gate::CX(1, 2), Gate::CX(0, 1)],
            3
        )
        .is_empty());
        // Opposite orientation does not cancel.
        assert_eq!(opt(vec![Gate::CX(0, 1), Gate::CX(1, 0)], 2).len(), 2);
        // An RZ(0) in between is transparent.
        assert!(opt(vec![Gate::CX(0, 1), Gate::RZ(1, 0.0), Gate::CX(0, 1)], 2).is_empty());
    }

    #[test]
    fn drops_identities() {
        assert!(opt(vec![Gate::X(0), Gate::X(0)], 1).is_empty());
        assert!(opt(vec![Gate::SX(0); 4], 1).is_empty());
        assert!(opt(vec![Gate::RZ(0, 0.0)], 1).is_empty());
    }

    #[test]
    fn merges_rzz() {
        let c = opt(vec![Gate::RZZ(0, 1, 0.25), Gate::RZZ(1, 0, 0.5)], 2);
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn long_single_qubit_runs_collapse() {
        let run: Vec<Gate> = (0..10)
            .map(|i| match i % 3 {
                0 => Gate::SX(0),
                1 => Gate::RZ(0, 0.37 * i as f64),
                _ => Gate::RX(0, 1.1 - 0.2 * i as f64),
            })
            .collect();
        let c = Circuit::from_gates(1, run).unwrap();
        let o = optimize(&c, None);
        assert!(o.len() <= 5);
        assert!(equivalent_up_to_phase(&unitary(&o).unwrap(), &unitary(&c).unwrap(), 1e-10).unwrap());
    }

    proptest! {
        #[test]
        fn preserves_semantics_and_depth(c in arb_circuit(4, 60)) {
            let o = optimize(&c, None);
            prop_assert!(depth(&o) <= depth(&c));
            prop_assert!(o.len() <= c.len());
            prop_assert!(equivalent_up_to_phase(&unitary(&o).unwrap(), &unitary(&c).unwrap(), 1e-9).unwrap());
        }
    }
}
