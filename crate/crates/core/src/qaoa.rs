//! p-layer QAOA circuits for Max-Cut, built from the Ising encoding.
//!
//! The mixer sub-layer is RX(2β) on every qubit (exp(-iβX) = RX(2β)) and the
//! phase sub-layer is RZZ(2γJ) per coupling plus RZ(2γh) per nonzero field.
//! For unweighted Max-Cut J = 1/2, so every RZZ angle is exactly γ.

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::problem::{to_ising, IsingModel, ProblemGraph};

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct QaoaParams {
    betas: Vec<f64>,
    gammas: Vec<f64>,
}

impl QaoaParams {
    pub fn new(betas: Vec<f64>, gammas: Vec<f64>) -> Result<Self> {
        if betas.is_empty() || betas.len() != gammas.len() {
            return Err(Error::contract(format!(
                "need equally many betas and gammas (got {} and {})",
                betas.len(),
                gammas.len()
            )));
        }
        if betas.iter().chain(&gammas).any(|x| !x.is_finite()) {
            return Err(Error::contract("QAOA angles must be finite"));
        }
        Ok(QaoaParams { betas, gammas })
    }

    /// Split a flat vector laid out as `[β_1..β_p, γ_1..γ_p]`.
    pub fn from_flat(x: &[f64]) -> Result<Self> {
        if !x.len().is_multiple_of(2) {
            return Err(Error::contract("flat parameter vector must have even length"));
        }
        let p = x.len() / 2;
        Self::new(x[..p].to_vec(), x[p..].to_vec())
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.betas.iter().chain(&self.gammas).copied().collect()
    }

    pub fn zeros(p: usize) -> Result<Self> {
        Self::new(vec![0.0; p], vec![0.0; p])
    }

    pub fn layers(&self) -> usize {
        self.betas.len()
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }
}

/// Which sub-layer comes first inside each QAOA layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LayerOrder {
    /// Mixer then phase.
    #[default]
    BetaFirst,
    /// Phase then mixer (the usual QAOA convention).
    GammaFirst,
}

impl std::str::FromStr for LayerOrder {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "beta-first" | "beta_first" => Ok(LayerOrder::BetaFirst),
            "gamma-first" | "gamma_first" => Ok(LayerOrder::GammaFirst),
            _ => Err(Error::contract(format!("unknown layer order `{s}`"))),
        }
    }
}

/// QAOA circuit for a Max-Cut graph.
pub fn build_qaoa(g: &ProblemGraph, params: &QaoaParams, order: LayerOrder) -> Result<Circuit> {
    if g.n_nodes() == 0 {
        return Err(Error::InvalidInstance("empty graph".into()));
    }
    build_qaoa_ising(&to_ising(g), params, order)
}

/// QAOA circuit for a general Ising model.
pub fn build_qaoa_ising(
    model: &IsingModel,
    params: &QaoaParams,
    order: LayerOrder,
) -> Result<Circuit> {
    let n = model.n_spins;
    if n == 0 {
        return Err(Error::InvalidInstance("empty model".into()));
    }
    let mut c = Circuit::new(n);
    for q in 0..n {
        c.push(Gate::H(q))?;
    }
    for (&beta, &gamma) in params.betas.iter().zip(&params.gammas) {
        let mixer = |c: &mut Circuit| -> Result<()> {
            for q in 0..n {
                c.push(Gate::RX(q, 2.0 * beta))?;
            }
            Ok(())
        };
        let phase = |c: &mut Circuit| -> Result<()> {
            for (&(i, j), &w) in &model.couplings {
                c.push(Gate::RZZ(i, j, 2.0 * gamma * w))?;
            }
            for (&i, &h) in &model.fields {
                if h != 0.0 {
                    c.push(Gate::RZ(i, 2.0 * gamma * h))?;
                }
            }
            Ok(())
        };
        match order {
            LayerOrder::BetaFirst => {
                mixer(&mut c)?;
                phase(&mut c)?;
            }
            LayerOrder::GammaFirst => {
                phase(&mut c)?;
                mixer(&mut c)?;
            }
        }
    }
    Ok(c)
}
