//! Trotterized evolution of `N` spin-½ systems under one- and two-body
//! Pauli terms.
//!
//! Each term `c·P` is applied in place through the identity
//! `ψ ← αψ + β·Pψ`, evaluated pairwise over basis indices that `P` maps
//! onto each other. Exact steps use `α = cos θ, β = −i sin θ`; literal steps
//! use `α = 1, β = i·sign·θ`, with `θ = cΔt/ℏ`.

mod evolve;
mod pauli;

pub use evolve::{evolve_spins, trotter_step, SpinEvolution, StepperMode};
pub use pauli::{Pauli, PauliProduct};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plan::Sign;
use crate::statevec::{GateCounts, StateVector};

/// One Hamiltonian summand `coefficient · P`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub coefficient: f64,
    pub product: PauliProduct,
}

impl PauliTerm {
    pub fn new(coefficient: f64, ops: Vec<(usize, Pauli)>) -> Result<Self> {
        if !coefficient.is_finite() {
            return Err(Error::validation(format!(
                "term coefficient must be finite, got {coefficient}"
            )));
        }
        Ok(Self {
            coefficient,
            product: PauliProduct::new(ops)?,
        })
    }

    pub fn single(coefficient: f64, site: usize, pauli: Pauli) -> Result<Self> {
        Self::new(coefficient, vec![(site, pauli)])
    }

    pub fn pair(coefficient: f64, a: (usize, Pauli), b: (usize, Pauli)) -> Result<Self> {
        Self::new(coefficient, vec![a, b])
    }

    /// `θ = c·Δt/ℏ`.
    pub fn angle(&self, dt: f64, hbar: f64) -> f64 {
        self.coefficient * dt / hbar
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinSystem {
    num_spins: usize,
    terms: Vec<PauliTerm>,
    hbar: f64,
}

impl SpinSystem {
    pub fn new(num_spins: usize, terms: Vec<PauliTerm>, hbar: f64) -> Result<Self> {
        if num_spins == 0 {
            return Err(Error::validation("num_spins must be at least 1"));
        }
        if terms.is_empty() {
            return Err(Error::validation("a spin system needs at least one term"));
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::validation(format!("hbar must be positive, got {hbar}")));
        }
        for (i, t) in terms.iter().enumerate() {
            if let Some(site) = t.product.sites().find(|&s| s >= num_spins) {
                return Err(Error::validation(format!(
                    "term {i}: site {site} out of range for {num_spins} spins"
                )));
            }
        }
        Ok(Self {
            num_spins,
            terms,
            hbar,
        })
    }

    pub fn num_spins(&self) -> usize {
        self.num_spins
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// True when every pair of terms commutes.
    pub fn terms_commute(&self) -> bool {
        self.terms.iter().enumerate().all(|(i, a)| {
            self.terms[i + 1..]
                .iter()
                .all(|b| a.product.commutes_with(&b.product))
        })
    }
}

/// `exp(−iθP) = cos θ·I − i sin θ·P` on the term's own site block, with
/// `θ = c·Δt/ℏ`. Local index bit `i` is the value of the term's `i`-th site.
pub fn term_unitary_exact(term: &PauliTerm, dt: f64, hbar: f64) -> DMatrix<Complex64> {
    let theta = term.angle(dt, hbar);
    let p = term.product.local_matrix();
    let id = DMatrix::<Complex64>::identity(p.nrows(), p.ncols());
    id * Complex64::new(theta.cos(), 0.0) + p * Complex64::new(0.0, -theta.sin())
}

/// `ψ ← exp(−i·cΔt/ℏ·P) ψ`.
pub fn term_step_exact(
    state: &mut StateVector,
    term: &PauliTerm,
    dt: f64,
    hbar: f64,
) -> Result<()> {
    let theta = term.angle(dt, hbar);
    term.product.apply_affine(
        state,
        Complex64::new(theta.cos(), 0.0),
        Complex64::new(0.0, -theta.sin()),
    )
}

/// `ψ ← ψ + i·sign·(cΔt/ℏ)·Pψ`, not renormalized. For a single Pauli term the
/// norm² grows by exactly `1 + (cΔt/ℏ)²`.
pub fn term_step_literal(
    state: &mut StateVector,
    term: &PauliTerm,
    dt: f64,
    hbar: f64,
    sign: Sign,
) -> Result<()> {
    let theta = term.angle(dt, hbar);
    term.product.apply_affine(
        state,
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, sign.value() * theta),
    )
}

/// `⟨ψ|P|ψ⟩` for a normalized state; the coefficient is ignored.
pub fn expectation_pauli(state: &StateVector, term: &PauliTerm) -> Result<f64> {
    state.ensure_normalized()?;
    let value = term.product.quadratic_form(state)?;
    debug_assert!(value.im.abs() < 1e-10, "Pauli expectation has imaginary part {}", value.im);
    Ok(value.re)
}

/// `⟨ψ|P|ψ⟩ / ⟨ψ|ψ⟩`, usable on the unrenormalized literal trajectory.
pub(crate) fn normalized_expectation(state: &StateVector, product: &PauliProduct) -> Result<f64> {
    Ok(product.quadratic_form(state)?.re / state.norm_sqr())
}

pub(crate) fn record_term(counts: &mut GateCounts, literal: bool) {
    if literal {
        counts.literal_term_applications += 1;
    } else {
        counts.exact_term_applications += 1;
    }
}
