//! Semantic check of a compiled circuit against its logical input.
//!
//! The physical circuit is restricted to the qubits it touches plus those
//! holding virtual qubits. For each virtual basis input the compressed
//! circuit is simulated from the matching physical basis state and the
//! output amplitudes are read back through the final layout, which yields
//! the logical unitary (ancillas must return to |0>).

use super::NativeCircuit;
use crate::circuit::{equivalent_up_to_phase, unitary, CMatrix, Circuit, C64, UNITARY_MAX_QUBITS};
use crate::engine::Statevector;
use crate::error::{Error, Result};
use crate::par::Exec;

/// Logical unitary realised by `native` over the virtual qubits.
pub fn native_unitary(native: &NativeCircuit) -> Result<CMatrix> {
    let n = native.initial_layout.n_virtual();
    if n > UNITARY_MAX_QUBITS {
        return Err(Error::TooLarge {
            what: "unitary width",
            actual: n,
            limit: UNITARY_MAX_QUBITS,
        });
    }
    let np = native.circuit.n_qubits();
    let mut active = vec![false; np];
    for &p in native.initial_layout.as_slice().iter().chain(native.final_layout.as_slice()) {
        active[p] = true;
    }
    for g in native.circuit.gates() {
        g.qubit_list().for_each(|q| active[q] = true);
    }
    let mut index = vec![usize::MAX; np];
    let mut k = 0;
    for p in 0..np {
        if active[p] {
            index[p] = k;
            k += 1;
        }
    }
    let gates: Vec<_> = native.circuit.gates().iter().map(|g| g.remap(|q| index[q])).collect();
    let compressed = Circuit::from_gates(k, gates)?;
    let at = |layout: &super::Layout, j: usize| -> usize {
        (0..n)
            .filter(|v| j >> v & 1 == 1)
            .map(|v| 1usize << index[layout.physical(v)])
            .sum()
    };

    let dim = 1usize << n;
    let mut u = CMatrix::zeros(dim);
    for j in 0..dim {
        let mut s = Statevector::basis(k, at(&native.initial_layout, j))?;
        for g in compressed.gates() {
            s.apply(g, Exec::Sequential);
        }
        let amps = s.amplitudes();
        for i in 0..dim {
            u[(i, j)] = amps[at(&native.final_layout, i)];
        }
    }
    Ok(u)
}

/// Whether `native` implements `input` up to global phase within `tol`.
pub fn equivalent_to_input(input: &Circuit, native: &NativeCircuit, tol: f64) -> Result<bool> {
    if input.n_qubits() != native.initial_layout.n_virtual() {
        return Err(Error::contract("input width differs from layout"));
    }
    let u = native_unitary(native)?;
    let zero = C64::new(0.0, 0.0);
    if u.data().iter().all(|&a| a == zero) {
        return Ok(false);
    }
    equivalent_up_to_phase(&u, &unitary(input)?, tol)
}
