//! Dense unitary semantics for small circuits, used as the equivalence
//! oracle for the transpiler. Qubit 0 is the least significant bit of a
//! basis-state index.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::{Circuit, Gate};
use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const UNITARY_MAX_QUBITS: usize = 10;

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        CMatrix {
            dim,
            data: rows.iter().flat_map(|r| r.iter().copied()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMatrix {
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> CMatrix {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    /// Kronecker product `self ⊗ rhs`; `rhs` occupies the low bits.
    pub fn kron(&self, rhs: &CMatrix) -> CMatrix {
        let (a, b) = (self.dim, rhs.dim);
        let mut out = CMatrix::zeros(a * b);
        for i in 0..a {
            for j in 0..a {
                for k in 0..b {
                    for l in 0..b {
                        out[(i * b + k, j * b + l)] = self[(i, j)] * rhs[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Largest entrywise modulus of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &CMatrix) -> f64 {
        assert_eq!(self.dim, rhs.dim);
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Matrix of a gate in its local basis. For two-qubit gates the first
/// operand is the low bit: local index = bit(first) + 2 * bit(second).
pub fn gate_matrix(g: &Gate) -> CMatrix {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    match *g {
        Gate::H(_) => {
            let h = c(FRAC_1_SQRT_2, 0.0);
            CMatrix::from_rows(&[&[h, h], &[h, -h]])
        }
        Gate::X(_) => CMatrix::from_rows(&[&[z, o], &[o, z]]),
        Gate::SX(_) => {
            let p = c(0.5, 0.5);
            let m = c(0.5, -0.5);
            CMatrix::from_rows(&[&[p, m], &[m, p]])
        }
        Gate::RZ(_, t) => {
            let e = C64::from_polar(1.0, -t / 2.0);
            CMatrix::from_rows(&[&[e, z], &[z, e.conj()]])
        }
        Gate::RX(_, t) => {
            let (s, co) = (t / 2.0).sin_cos();
            CMatrix::from_rows(&[&[c(co, 0.0), c(0.0, -s)], &[c(0.0, -s), c(co, 0.0)]])
        }
        Gate::RZZ(_, _, t) => {
            // Phase exp(-i t/2) on even parity, exp(+i t/2) on odd parity.
            let e = C64::from_polar(1.0, -t / 2.0);
            let mut m = CMatrix::zeros(4);
            m[(0, 0)] = e;
            m[(1, 1)] = e.conj();
            m[(2, 2)] = e.conj();
            m[(3, 3)] = e;
            m
        }
        Gate::CX(..) => {
            // Control is the low bit: |c=1,t=0> (1) <-> |c=1,t=1> (3).
            let mut m = CMatrix::zeros(4);
            m[(0, 0)] = o;
            m[(3, 1)] = o;
            m[(2, 2)] = o;
            m[(1, 3)] = o;
            m
        }
        Gate::SWAP(..) => {
            let mut m = CMatrix::zeros(4);
            m[(0, 0)] = o;
            m[(2, 1)] = o;
            m[(1, 2)] = o;
            m[(3, 3)] = o;
            m
        }
    }
}

/// Left-multiply `u` by the full-width embedding of `g`.
fn apply_left(u: &mut CMatrix, g: &Gate) {
    let m = gate_matrix(g);
    let dim = u.dim;
    let (a, b) = g.qubits();
    match b {
        None => {
            let bit = 1usize << a;
            for base in (0..dim).filter(|i| i & bit == 0) {
                let (r0, r1) = (base, base | bit);
                for j in 0..dim {
                    let (x0, x1) = (u[(r0, j)], u[(r1, j)]);
                    u[(r0, j)] = m[(0, 0)] * x0 + m[(0, 1)] * x1;
                    u[(r1, j)] = m[(1, 0)] * x0 + m[(1, 1)] * x1;
                }
            }
        }
        Some(b) => {
            let (ba, bb) = (1usize << a, 1usize << b);
            for base in (0..dim).filter(|i| i & (ba | bb) == 0) {
                let rows = [base, base | ba, base | bb, base | ba | bb];
                for j in 0..dim {
                    let x = rows.map(|r| u[(r, j)]);
                    for (li, &r) in rows.iter().enumerate() {
                        u[(r, j)] = (0..4).map(|k| m[(li, k)] * x[k]).sum();
                    }
                }
            }
        }
    }
}

/// Full unitary of `c` (product of gate matrices in circuit order).
pub fn unitary(c: &Circuit) -> Result<CMatrix> {
    if c.n_qubits() > UNITARY_MAX_QUBITS {
        return Err(Error::TooLarge {
            what: "unitary width",
            actual: c.n_qubits(),
            limit: UNITARY_MAX_QUBITS,
        });
    }
    let mut u = CMatrix::identity(1 << c.n_qubits());
    for g in c.gates() {
        apply_left(&mut u, g);
    }
    Ok(u)
}

/// True iff `a ≈ φ b` for some unit-modulus φ, with φ read off the
/// largest-magnitude entry of `b`.
pub fn equivalent_up_to_phase(a: &CMatrix, b: &CMatrix, tol: f64) -> Result<bool> {
    if a.dim != b.dim {
        return Err(Error::contract("matrices differ in dimension"));
    }
    let (k, bk) = b
        .data
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .ok_or_else(|| Error::contract("empty matrix"))?;
    if bk.norm() == 0.0 {
        return Err(Error::contract("reference matrix is zero"));
    }
    let ratio = a.data[k] / bk;
    if ratio.norm() == 0.0 {
        return Ok(false);
    }
    let phase = ratio / ratio.norm();
    Ok(a.max_abs_diff(&b.scale(phase)) <= tol)
}
