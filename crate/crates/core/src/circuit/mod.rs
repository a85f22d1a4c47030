//! Gate-list circuit IR.
//!
//! Gate B depends on an earlier gate A iff they share a qubit; depth is the
//! longest chain in that dependency DAG, counting every gate (zero-duration
//! `RZ` included).

mod gate;
mod text;
mod unitary;

use std::collections::BTreeMap;

pub use gate::{Gate, GateKind};
pub use unitary::{
    equivalent_up_to_phase, gate_matrix, unitary, CMatrix, C64, UNITARY_MAX_QUBITS,
};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Circuit::new(n_qubits);
        c.gates.reserve(gates.len());
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    /// Append a gate after checking operand range, distinctness and angle.
    pub fn push(&mut self, g: Gate) -> Result<()> {
        let (a, b) = g.qubits();
        for q in std::iter::once(a).chain(b) {
            if q >= self.n_qubits {
                return Err(Error::contract(format!(
                    "gate {g:?} addresses qubit {q} on a {}-qubit circuit",
                    self.n_qubits
                )));
            }
        }
        if b == Some(a) {
            return Err(Error::contract(format!("gate {g:?} repeats a qubit")));
        }
        if let Some(t) = g.angle() {
            if !t.is_finite() {
                return Err(Error::contract(format!("gate {g:?} has a non-finite angle")));
            }
        }
        self.gates.push(g);
        Ok(())
    }

    /// Unchecked append for passes that only relabel validated gates.
    pub(crate) fn push_unchecked(&mut self, g: Gate) {
        debug_assert!(g.qubit_list().all(|q| q < self.n_qubits));
        self.gates.push(g);
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn into_gates(self) -> Vec<Gate> {
        self.gates
    }

    pub fn depth(&self) -> usize {
        depth(self)
    }

    pub fn is_native(&self) -> bool {
        self.gates.iter().all(|g| g.kind().is_native())
    }

    /// `self` followed by `other`; widths must match.
    pub fn compose(&self, other: &Circuit) -> Result<Circuit> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::contract("composing circuits of different width"));
        }
        let mut out = self.clone();
        out.gates.extend_from_slice(&other.gates);
        Ok(out)
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }
}

/// Longest chain in the shared-qubit dependency DAG.
pub fn depth(c: &Circuit) -> usize {
    let mut level = vec![0usize; c.n_qubits];
    let mut max = 0;
    for g in &c.gates {
        let (a, b) = g.qubits();
        let l = 1 + b.map_or(level[a], |b| level[a].max(level[b]));
        level[a] = l;
        if let Some(b) = b {
            level[b] = l;
        }
        max = max.max(l);
    }
    max
}

pub fn gate_counts(c: &Circuit) -> BTreeMap<GateKind, usize> {
    let mut counts = BTreeMap::new();
    for g in &c.gates {
        *counts.entry(g.kind()).or_insert(0) += 1;
    }
    counts
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn depth_examples() {
        assert_eq!(depth(&Circuit::new(3)), 0);
        let c = Circuit::from_gates(2, vec![Gate::H(0), Gate::CX(0, 1)]).unwrap();
        assert_eq!(depth(&c), 2);
        let c = Circuit::from_gates(2, vec![Gate::H(0), Gate::H(1)]).unwrap();
        assert_eq!(depth(&c), 1);
    }

    #[test]
    fn count_examples() {
        let c = Circuit::from_gates(2, vec![Gate::H(0), Gate::H(1), Gate::CX(0, 1)]).unwrap();
        let counts = gate_counts(&c);
        assert_eq!(counts.get(&GateKind::H), Some(&2));
        assert_eq!(counts.get(&GateKind::CX), Some(&1));
        assert_eq!(counts.len(), 2);
        assert!(gate_counts(&Circuit::new(1)).is_empty());
    }

    #[test]
    fn push_validates() {
        let mut c = Circuit::new(2);
        assert!(c.push(Gate::H(2)).is_err());
        assert!(c.push(Gate::CX(1, 1)).is_err());
        assert!(c.push(Gate::RZ(0, f64::NAN)).is_err());
        assert!(c.push(Gate::RZ(0, 0.3)).is_ok());
    }

    pub(crate) fn arb_gate(n: usize) -> impl Strategy<Value = Gate> {
        let q = 0..n;
        let pair = (0..n, 0..n - 1).prop_map(|(a, b)| (a, if b >= a { b + 1 } else { b }));
        let t = -7.0f64..7.0;
        prop_oneof![
            q.clone().prop_map(Gate::H),
            q.clone().prop_map(Gate::X),
            q.clone().prop_map(Gate::SX),
            (q.clone(), t.clone()).prop_map(|(q, t)| Gate::RZ(q, t)),
            (q, t.clone()).prop_map(|(q, t)| Gate::RX(q, t)),
            (pair.clone(), t).prop_map(|((a, b), t)| Gate::RZZ(a, b, t)),
            pair.clone().prop_map(|(a, b)| Gate::CX(a, b)),
            pair.prop_map(|(a, b)| Gate::SWAP(a, b)),
        ]
    }

    pub(crate) fn arb_circuit(n: usize, max_len: usize) -> impl Strategy<Value = Circuit> {
        proptest::collection::vec(arb_gate(n), 0..max_len)
            .prop_map(move |g| Circuit::from_gates(n, g).unwrap())
    }

    proptest! {
        #[test]
        fn depth_is_subadditive(a in arb_circuit(4, 30), b in arb_circuit(4, 30)) {
            let ab = a.compose(&b).unwrap();
            prop_assert!(depth(&ab) <= depth(&a) + depth(&b));
        }

        #[test]
        fn depth_ignores_disjoint_swaps(c in arb_circuit(5, 40), i in 0usize..40) {
            // Swapping two neighbouring gates on disjoint qubits keeps depth.
            let mut gates = c.gates().to_vec();
            if i + 1 < gates.len() {
                let (x, y) = (gates[i], gates[i + 1]);
                if x.qubit_list().all(|q| y.qubit_list().all(|r| r != q)) {
                    gates.swap(i, i + 1);
                }
            }
            let d = Circuit::from_gates(5, gates).unwrap();
            prop_assert_eq!(depth(&c), depth(&d));
        }
    }
}
