//! Single-qubit operators and their embedding into multi-qubit registers.
//!
//! Basis convention: `|0⟩ = |↑⟩` is the +1 eigenstate of σz; qubit 0 is the
//! slowest Kronecker index.

use num_complex::Complex64 as C64;

use crate::linalg::ComplexMatrix;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[&[ZERO, -I], &[I, ZERO]])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[&[ONE, ZERO], &[ZERO, -ONE]])
}

/// σ₋ = |↓⟩⟨↑|, lowers the energy of a spin in a positive field.
pub fn sigma_minus() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[&[ZERO, ZERO], &[ONE, ZERO]])
}

pub fn sigma_plus() -> ComplexMatrix {
    sigma_minus().adjoint()
}

/// Projector |s⟩⟨s| onto a single spin state.
pub fn projector(spin: Spin) -> ComplexMatrix {
    match spin {
        Spin::Up => ComplexMatrix::from_real_diagonal(&[1.0, 0.0]),
        Spin::Down => ComplexMatrix::from_real_diagonal(&[0.0, 1.0]),
    }
}

/// Embeds a single-qubit operator on `site` of an `n`-qubit register.
pub fn on_site(op: &ComplexMatrix, site: usize, n: usize) -> ComplexMatrix {
    assert!(site < n, "site {site} out of range for {n} qubits");
    let before = ComplexMatrix::identity(1 << site);
    let after = ComplexMatrix::identity(1 << (n - site - 1));
    before.kron(op).kron(&after)
}

/// Number of qubits in a register of dimension `dim`, if it is a power of two.
pub fn qubit_count(dim: usize) -> Option<usize> {
    dim.is_power_of_two().then(|| dim.trailing_zeros() as usize)
}

/// Computational basis vector for a bitstring like `"0110"` (`0` = ↑).
pub fn basis_vector(bits: &str) -> Option<Vec<C64>> {
    let n = bits.len();
    if n == 0 || n > 20 {
        return None;
    }
    let mut index = 0usize;
    for ch in bits.chars() {
        index = (index << 1)
            | match ch {
                '0' => 0,
                '1' => 1,
                _ => return None,
            };
    }
    let mut v = vec![ZERO; 1 << n];
    v[index] = ONE;
    Some(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    /// σz eigenvalue.
    pub fn sign(self) -> f64 {
        match self {
            Spin::Up => 1.0,
            Spin::Down => -1.0,
        }
    }

    pub fn arrow(self) -> char {
        match self {
            Spin::Up => '↑',
            Spin::Down => '↓',
        }
    }

    /// Spin of qubit `site` in computational basis state `index` of an `n`-qubit register.
    pub fn of_basis_state(index: usize, site: usize, n: usize) -> Spin {
        if (index >> (n - site - 1)) & 1 == 0 {
            Spin::Up
        } else {
            Spin::Down
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_operators_decompose_sigma_x() {
        let sum = &sigma_minus() + &sigma_plus();
        assert_eq!(sum, pauli_x());
    }

    #[test]
    fn on_site_places_operator() {
        let z1 = on_site(&pauli_z(), 1, 2);
        assert_eq!(z1, ComplexMatrix::from_real_diagonal(&[1.0, -1.0, 1.0, -1.0]));
    }

    #[test]
    fn basis_vector_indexing() {
        let v = basis_vector("10").unwrap();
        assert_eq!(v[2], ONE);
        assert!(basis_vector("2").is_none());
        assert_eq!(Spin::of_basis_state(2, 0, 2), Spin::Down);
        assert_eq!(Spin::of_basis_state(2, 1, 2), Spin::Up);
    }
}
