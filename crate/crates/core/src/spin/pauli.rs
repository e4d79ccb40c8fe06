use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevec::StateVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::X => [[o, one], [one, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[one, o], [o, -one]],
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'X' | 'x' => Some(Pauli::X),
            'Y' | 'y' => Some(Pauli::Y),
            'Z' | 'z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

/// Product of Paulis on one or two distinct sites.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(usize, Pauli)>", into = "Vec<(usize, Pauli)>")]
pub struct PauliProduct {
    ops: Vec<(usize, Pauli)>,
}

impl TryFrom<Vec<(usize, Pauli)>> for PauliProduct {
    type Error = Error;

    fn try_from(ops: Vec<(usize, Pauli)>) -> Result<Self> {
        Self::new(ops)
    }
}

impl From<PauliProduct> for Vec<(usize, Pauli)> {
    fn from(p: PauliProduct) -> Self {
        p.ops
    }
}

impl PauliProduct {
    pub fn new(ops: Vec<(usize, Pauli)>) -> Result<Self> {
        match ops.len() {
            1 => {}
            2 if ops[0].0 == ops[1].0 => {
                return Err(Error::validation(format!(
                    "sites distinct: both factors act on site {}",
                    ops[0].0
                )))
            }
            2 => {}
            n => {
                return Err(Error::validation(format!(
                    "a term acts on 1 or 2 sites, got {n}"
                )))
            }
        }
        Ok(Self { ops })
    }

    /// Parses labels such as `Z0`, `X0X1`, or `Z1Z3`.
    pub fn parse(label: &str) -> Result<Self> {
        let bad = || Error::validation(format!("cannot parse Pauli label `{label}`"));
        let mut ops = Vec::new();
        let mut chars = label.trim().chars().peekable();
        while let Some(c) = chars.next() {
            let pauli = Pauli::from_char(c).ok_or_else(bad)?;
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            let site = digits.parse::<usize>().map_err(|_| bad())?;
            ops.push((site, pauli));
        }
        Self::new(ops)
    }

    pub fn ops(&self) -> &[(usize, Pauli)] {
        &self.ops
    }

    pub fn sites(&self) -> impl Iterator<Item = usize> + '_ {
        self.ops.iter().map(|&(s, _)| s)
    }

    fn masks(&self) -> (usize, usize, u32) {
        let mut flip = 0;
        let mut sign = 0;
        let mut ys = 0;
        for &(site, p) in &self.ops {
            match p {
                Pauli::X => flip |= 1 << site,
                Pauli::Y => {
                    flip |= 1 << site;
                    sign |= 1 << site;
                    ys += 1;
                }
                Pauli::Z => sign |= 1 << site,
            }
        }
        (flip, sign, ys)
    }

    pub fn commutes_with(&self, other: &PauliProduct) -> bool {
        let clashes = self
            .ops
            .iter()
            .filter(|(s, p)| other.ops.iter().any(|(t, q)| s == t && p != q))
            .count();
        clashes % 2 == 0
    }

    /// Dense `2^m × 2^m` matrix on the product's own sites, first site fastest.
    pub fn local_matrix(&self) -> DMatrix<Complex64> {
        let m = self.ops.len();
        let d = 1 << m;
        DMatrix::from_fn(d, d, |r, c| {
            self.ops
                .iter()
                .enumerate()
                .map(|(i, (_, p))| p.matrix()[(r >> i) & 1][(c >> i) & 1])
                .product()
        })
    }

    fn check(&self, state: &StateVector) -> Result<()> {
        for s in self.sites() {
            state.check_qubit(s)?;
        }
        Ok(())
    }

    /// `ψ ← α·ψ + β·Pψ`, in place.
    ///
    /// `P|b⟩ = i^{#Y}·(−1)^{popcount(b & sign_mask)}·|b ⊕ flip_mask⟩`.
    pub(crate) fn apply_affine(
        &self,
        state: &mut StateVector,
        alpha: Complex64,
        beta: Complex64,
    ) -> Result<()> {
        self.check(state)?;
        let (flip, sign, ys) = self.masks();
        let beta = beta * i_pow(ys);
        let parity = |b: usize| if (b & sign).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
        let amps = state.amplitudes_mut();
        if flip == 0 {
            for (b, a) in amps.iter_mut().enumerate() {
                *a *= alpha + beta * parity(b);
            }
            return Ok(());
        }
        let top = 1usize << (usize::BITS - 1 - flip.leading_zeros());
        for b in 0..amps.len() {
            if b & top != 0 {
                continue;
            }
            let partner = b ^ flip;
            let (x, y) = (amps[b], amps[partner]);
            amps[b] = alpha * x + beta * parity(partner) * y;
            amps[partner] = alpha * y + beta * parity(b) * x;
        }
        Ok(())
    }

    /// `⟨ψ|P|ψ⟩` without normalization.
    pub(crate) fn quadratic_form(&self, state: &StateVector) -> Result<Complex64> {
        self.check(state)?;
        let (flip, sign, ys) = self.masks();
        let amps = state.amplitudes();
        let sum: Complex64 = amps
            .iter()
            .enumerate()
            .map(|(c, a)| {
                let b = c ^ flip;
                let s = if (b & sign).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
                a.conj() * amps[b] * s
            })
            .sum();
        Ok(sum * i_pow(ys))
    }
}

fn i_pow(n: u32) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl fmt::Display for PauliProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (site, p) in &self.ops {
            write!(f, "{p}{site}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_labels() {
        let p = PauliProduct::parse("Z1Z3").unwrap();
        assert_eq!(p.ops(), &[(1, Pauli::Z), (3, Pauli::Z)]);
        assert_eq!(p.to_string(), "Z1Z3");
        assert_eq!(PauliProduct::parse("x12").unwrap().ops(), &[(12, Pauli::X)]);
        for bad in ["", "Z", "Q0", "Z0Z0", "X0Y1Z2", "0Z"] {
            assert!(PauliProduct::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn y_action_on_basis() {
        // Y|0⟩ = i|1⟩, Y|1⟩ = −i|0⟩
        let y = PauliProduct::new(vec![(0, Pauli::Y)]).unwrap();
        let mut s = StateVector::basis(1, 0).unwrap();
        y.apply_affine(&mut s, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(s.amplitudes()[1], Complex64::new(0.0, 1.0));
        let mut s = StateVector::basis(1, 1).unwrap();
        y.apply_affine(&mut s, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(s.amplitudes()[0], Complex64::new(0.0, -1.0));
    }

    #[test]
    fn local_matrix_ordering() {
        // X on the first listed site, Z on the second: local index bit 0 is X's site.
        let p = PauliProduct::new(vec![(4, Pauli::X), (1, Pauli::Z)]).unwrap();
        let m = p.local_matrix();
        assert_eq!(m[(1, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(m[(3, 2)], Complex64::new(-1.0, 0.0));
        assert_eq!(m[(2, 0)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn serde_roundtrip_validates() {
        let p = PauliProduct::parse("X0Y2").unwrap();
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<PauliProduct>(&json).unwrap(), p);
        assert!(serde_json::from_str::<PauliProduct>(r#"[[1,"Z"],[1,"X"]]"#).is_err());
    }
}
