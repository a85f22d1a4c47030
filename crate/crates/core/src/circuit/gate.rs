use std::fmt;

/// Gate kinds known to the IR. `RZ`, `SX`, `X` and `CX` form the native set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    H,
    X,
    SX,
    RZ,
    RX,
    RZZ,
    CX,
    SWAP,
}

impl GateKind {
    pub const ALL: [GateKind; 8] = [
        GateKind::H,
        GateKind::X,
        GateKind::SX,
        GateKind::RZ,
        GateKind::RX,
        GateKind::RZZ,
        GateKind::CX,
        GateKind::SWAP,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::SX => "sx",
            GateKind::RZ => "rz",
            GateKind::RX => "rx",
            GateKind::RZZ => "rzz",
            GateKind::CX => "cx",
            GateKind::SWAP => "swap",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        GateKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
    }

    pub fn is_native(self) -> bool {
        matches!(
            self,
            GateKind::RZ | GateKind::SX | GateKind::X | GateKind::CX
        )
    }

    pub fn arity(self) -> usize {
        match self {
            GateKind::RZZ | GateKind::CX | GateKind::SWAP => 2,
            _ => 1,
        }
    }

    pub fn has_angle(self) -> bool {
        matches!(self, GateKind::RZ | GateKind::RX | GateKind::RZZ)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A gate applied to concrete qubit indices. For `CX` the first index is the
/// control. Rotation angles are in radians:
/// RZ(l) = exp(-i l Z/2), RX(t) = exp(-i t X/2), RZZ(t) = exp(-i t Z⊗Z/2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    SX(usize),
    RZ(usize, f64),
    RX(usize, f64),
    RZZ(usize, usize, f64),
    CX(usize, usize),
    SWAP(usize, usize),
}

impl Gate {
    pub fn kind(&self) -> GateKind {
        match self {
            Gate::H(_) => GateKind::H,
            Gate::X(_) => GateKind::X,
            Gate::SX(_) => GateKind::SX,
            Gate::RZ(..) => GateKind::RZ,
            Gate::RX(..) => GateKind::RX,
            Gate::RZZ(..) => GateKind::RZZ,
            Gate::CX(..) => GateKind::CX,
            Gate::SWAP(..) => GateKind::SWAP,
        }
    }

    /// Qubits in operand order; the second slot is `None` for 1-qubit gates.
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::H(q) | Gate::X(q) | Gate::SX(q) | Gate::RZ(q, _) | Gate::RX(q, _) => (q, None),
            Gate::RZZ(a, b, _) | Gate::CX(a, b) | Gate::SWAP(a, b) => (a, Some(b)),
        }
    }

    pub fn qubit_list(&self) -> impl Iterator<Item = usize> {
        let (a, b) = self.qubits();
        std::iter::once(a).chain(b)
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::RZ(_, t) | Gate::RX(_, t) | Gate::RZZ(_, _, t) => Some(t),
            _ => None,
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        self.qubits().1.is_some()
    }

    /// Relabel the qubits through `f`.
    pub fn remap(&self, f: impl Fn(usize) -> usize) -> Gate {
        match *self {
            Gate::H(q) => Gate::H(f(q)),
            Gate::X(q) => Gate::X(f(q)),
            Gate::SX(q) => Gate::SX(f(q)),
            Gate::RZ(q, t) => Gate::RZ(f(q), t),
            Gate::RX(q, t) => Gate::RX(f(q), t),
            Gate::RZZ(a, b, t) => Gate::RZZ(f(a), f(b), t),
            Gate::CX(a, b) => Gate::CX(f(a), f(b)),
            Gate::SWAP(a, b) => Gate::SWAP(f(a), f(b)),
        }
    }

    /// Build a gate from its kind, operands and optional angle.
    pub fn build(kind: GateKind, qubits: &[usize], angle: Option<f64>) -> Option<Gate> {
        if qubits.len() != kind.arity() || angle.is_some() != kind.has_angle() {
            return None;
        }
        let t = angle.unwrap_or(0.0);
        Some(match kind {
            GateKind::H => Gate::H(qubits[0]),
            GateKind::X => Gate::X(qubits[0]),
            GateKind::SX => Gate::SX(qubits[0]),
            GateKind::RZ => Gate::RZ(qubits[0], t),
            GateKind::RX => Gate::RX(qubits[0], t),
            GateKind::RZZ => Gate::RZZ(qubits[0], qubits[1], t),
            GateKind::CX => Gate::CX(qubits[0], qubits[1]),
            GateKind::SWAP => Gate::SWAP(qubits[0], qubits[1]),
        })
    }
}
