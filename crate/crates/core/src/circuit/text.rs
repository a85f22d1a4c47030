use std::fmt::Write as _;

use super::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};

impl Circuit {
    /// Serialise as `qubits n` followed by one gate per line, e.g.
    /// `rz 1.5707963267948966 q0` or `cx q0 q1`. Angles use the shortest
    /// representation that parses back to the same `f64`.
    pub fn to_text(&self) -> String {
        let mut s = format!("qubits {}\n", self.n_qubits());
        for g in self.gates() {
            s.push_str(g.kind().name());
            if let Some(t) = g.angle() {
                let _ = write!(s, " {t:?}");
            }
            for q in g.qubit_list() {
                let _ = write!(s, " q{q}");
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Circuit> {
        let mut circuit: Option<Circuit> = None;
        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut tok = line.split_whitespace();
            let head = tok.next().unwrap_or_default();
            let Some(c) = circuit.as_mut() else {
                if !head.eq_ignore_ascii_case("qubits") {
                    return Err(Error::parse(ln, "expected `qubits n` header"));
                }
                let n = tok
                    .next()
                    .and_then(|t| t.parse::<usize>().ok())
                    .ok_or_else(|| Error::parse(ln, "bad qubit count"))?;
                circuit = Some(Circuit::new(n));
                continue;
            };
            let kind = GateKind::from_name(head)
                .ok_or_else(|| Error::parse(ln, format!("unknown gate `{head}`")))?;
            let rest: Vec<&str> = tok.collect();
            let (angle, qubit_toks) = if kind.has_angle() {
                let (first, rest) = rest
                    .split_first()
                    .ok_or_else(|| Error::parse(ln, "missing angle"))?;
                let t: f64 = first
                    .parse()
                    .map_err(|_| Error::parse(ln, format!("bad angle `{first}`")))?;
                (Some(t), rest)
            } else {
                (None, &rest[..])
            };
            let qubits = qubit_toks
                .iter()
                .map(|t| {
                    t.strip_prefix('q')
                        .and_then(|n| n.parse::<usize>().ok())
                        .ok_or_else(|| Error::parse(ln, format!("bad qubit `{t}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            let g = Gate::build(kind, &qubits, angle)
                .ok_or_else(|| Error::parse(ln, format!("wrong operand count for `{kind}`")))?;
            c.push(g).map_err(|e| Error::parse(ln, e.to_string()))?;
        }
        circuit.ok_or_else(|| Error::parse(1, "empty circuit file"))
    }
}
