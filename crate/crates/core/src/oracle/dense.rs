use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::particle::{ParticleSystem, PotentialKind, PotentialSpec};
use crate::spin::{Pauli, SpinSystem};
use crate::statevec::{GateOp, StateVector};

/// Default cap on dense operators: 2^12 × 2^12 complex entries.
pub const DENSE_QUBIT_CAP: usize = 12;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// A `2^n × 2^n` complex matrix, indexed little-endian like [`StateVector`].
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    num_qubits: usize,
    matrix: DMatrix<Complex64>,
}

impl DenseOperator {
    pub fn new(num_qubits: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        let d = 1usize << num_qubits;
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch {
                left: matrix.nrows(),
                right: d,
            });
        }
        Ok(Self { num_qubits, matrix })
    }

    pub fn identity(num_qubits: usize) -> Self {
        let d = 1 << num_qubits;
        Self {
            num_qubits,
            matrix: DMatrix::identity(d, d),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    /// max |A − A†|.
    pub fn hermiticity_deviation(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).camax()
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: state.dim(),
                right: self.dim(),
            });
        }
        let v = DVector::from_column_slice(state.amplitudes());
        StateVector::from_amplitudes((&self.matrix * v).as_slice().to_vec())
    }

    /// `⟨ψ|A|ψ⟩`.
    pub fn expectation(&self, state: &StateVector) -> Result<Complex64> {
        let applied = self.apply(state)?;
        state.inner_product(&applied)
    }

    /// `self · other` (apply `other` first).
    pub fn compose(&self, other: &DenseOperator) -> Result<DenseOperator> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(Self {
            num_qubits: self.num_qubits,
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn scale(&self, factor: f64) -> DenseOperator {
        Self {
            num_qubits: self.num_qubits,
            matrix: &self.matrix * Complex64::new(factor, 0.0),
        }
    }
}

fn check_dense_cap(num_qubits: usize, cap: usize) -> Result<()> {
    if num_qubits > cap {
        return Err(Error::CapExceeded {
            requested: num_qubits,
            cap,
        });
    }
    Ok(())
}

fn mat2(m: [[Complex64; 2]; 2]) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(2, 2, &[m[0][0], m[0][1], m[1][0], m[1][1]])
}

/// `factors[n−1] ⊗ … ⊗ factors[0]`: the first factor acts on the fastest-varying index.
pub fn kron_little_endian(factors: &[DMatrix<Complex64>]) -> DMatrix<Complex64> {
    factors
        .iter()
        .fold(DMatrix::identity(1, 1), |acc, f| f.kronecker(&acc))
}

/// One-qubit matrices placed on their qubits, identity elsewhere.
pub fn kron_extend(ops: &[(usize, DMatrix<Complex64>)], num_qubits: usize) -> DMatrix<Complex64> {
    let factors: Vec<DMatrix<Complex64>> = (0..num_qubits)
        .map(|q| {
            ops.iter()
                .find(|(site, _)| *site == q)
                .map(|(_, m)| m.clone())
                .unwrap_or_else(|| DMatrix::identity(2, 2))
        })
        .collect();
    kron_little_endian(&factors)
}

/// Dense matrix of one gate on `n` qubits, built from the gate's definition.
pub fn dense_gate_matrix(gate: &GateOp, num_qubits: usize) -> DenseOperator {
    let d = 1usize << num_qubits;
    let matrix = match *gate {
        GateOp::SingleQubit { target, matrix } => kron_extend(&[(target, mat2(matrix))], num_qubits),
        GateOp::ControlledPhase { control, target, angle } => {
            let both = (1 << control) | (1 << target);
            DMatrix::from_fn(d, d, |r, c| match (r == c, r & both == both) {
                (true, true) => Complex64::cis(angle),
                (true, false) => one(),
                _ => zero(),
            })
        }
        GateOp::Swap { a, b } => {
            let swap_bits = |i: usize| {
                let (ba, bb) = ((i >> a) & 1, (i >> b) & 1);
                (i & !(1 << a) & !(1 << b)) | (bb << a) | (ba << b)
            };
            DMatrix::from_fn(d, d, |r, c| if swap_bits(c) == r { one() } else { zero() })
        }
    };
    DenseOperator { num_qubits, matrix }
}

/// Product of a gate list, first gate applied first.
pub fn dense_circuit_matrix(gates: &[GateOp], num_qubits: usize) -> DenseOperator {
    gates.iter().fold(DenseOperator::identity(num_qubits), |acc, g| DenseOperator {
        num_qubits,
        matrix: dense_gate_matrix(g, num_qubits).matrix * acc.matrix,
    })
}

/// `Σ_terms c · (kron-extended Pauli product)`.
pub fn dense_spin_hamiltonian(system: &SpinSystem) -> Result<DenseOperator> {
    dense_spin_hamiltonian_with_cap(system, DENSE_QUBIT_CAP)
}

pub fn dense_spin_hamiltonian_with_cap(system: &SpinSystem, cap: usize) -> Result<DenseOperator> {
    let n = system.num_spins();
    check_dense_cap(n, cap)?;
    let d = 1 << n;
    let mut h = DMatrix::<Complex64>::zeros(d, d);
    for term in system.terms() {
        let ops: Vec<(usize, DMatrix<Complex64>)> = term
            .product
            .ops()
            .iter()
            .map(|&(site, p): &(usize, Pauli)| (site, mat2(p.matrix())))
            .collect();
        h += kron_extend(&ops, n) * Complex64::new(term.coefficient, 0.0);
    }
    Ok(DenseOperator { num_qubits: n, matrix: h })
}

/// Normalized DFT matrix `F[l][j] = e^{+2πi·jl/g}/√g`.
pub fn dft_matrix(g: usize) -> DMatrix<Complex64> {
    let norm = 1.0 / (g as f64).sqrt();
    DMatrix::from_fn(g, g, |l, j| {
        Complex64::from_polar(norm, 2.0 * PI * ((j * l) % g) as f64 / g as f64)
    })
}

/// `H = Σ_i F_i† diag(p²/2m_i) F_i + diag(V_total)` on the full grid space.
pub fn dense_grid_hamiltonian(system: &ParticleSystem, potentials: &PotentialSpec) -> Result<DenseOperator> {
    dense_grid_hamiltonian_with_cap(system, potentials, DENSE_QUBIT_CAP)
}

pub fn dense_grid_hamiltonian_with_cap(
    system: &ParticleSystem,
    potentials: &PotentialSpec,
    cap: usize,
) -> Result<DenseOperator> {
    let n_qubits = system.total_qubits();
    check_dense_cap(n_qubits, cap)?;
    potentials.validate(system)?;
    let k = system.qubits_per_particle();
    let g = 1usize << k;
    let n = system.num_particles();
    let l = system.box_length();
    let hbar = system.hbar();
    let d = 1usize << n_qubits;

    let f = dft_matrix(g);
    let mut h = DMatrix::<Complex64>::zeros(d, d);
    for (i, &mass) in system.masses().iter().enumerate() {
        let energies = DVector::from_fn(g, |idx, _| {
            let s = if idx < g / 2 { idx as f64 } else { idx as f64 - g as f64 };
            let p = 2.0 * PI * hbar * s / l;
            Complex64::new(p * p / (2.0 * mass), 0.0)
        });
        let kinetic = f.adjoint() * DMatrix::from_diagonal(&energies) * &f;
        let blocks: Vec<DMatrix<Complex64>> = (0..n)
            .map(|j| if j == i { kinetic.clone() } else { DMatrix::identity(g, g) })
            .collect();
        h += kron_little_endian(&blocks);
    }

    let dx = l / g as f64;
    let coord = |b: usize, particle: usize| (b >> (particle * k)) & (g - 1);
    for b in 0..d {
        let mut v = 0.0;
        for term in &potentials.one_body {
            let j = coord(b, term.particle);
            v += term.kind.value(j as f64 * dx, j);
        }
        for term in &potentials.two_body {
            let (pa, pb) = term.particles;
            let mut r = coord(b, pa) as f64 * dx - coord(b, pb) as f64 * dx;
            if potentials.minimal_image {
                r -= l * ((r + 0.5 * l) / l).floor();
            }
            let table_index = match term.kind {
                PotentialKind::Tabulated { .. } => ((r / dx).round() as isize + g as isize - 1) as usize,
                _ => 0,
            };
            v += term.kind.value(r, table_index);
        }
        h[(b, b)] += Complex64::new(v, 0.0);
    }
    Ok(DenseOperator { num_qubits: n_qubits, matrix: h })
}
