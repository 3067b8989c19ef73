use num_complex::Complex64;

use super::{PauliAxis, PauliError, PauliString, PauliWord, QubitHamiltonian};

/// Binary-symplectic form: per term, an X bit-vector and a Z bit-vector.
/// X ↔ (1,0), Z ↔ (0,1), Y ↔ (1,1).
#[derive(Debug, Clone, PartialEq)]
pub struct BinarySymplectic {
    pub n_qubits: usize,
    pub x_bits: Vec<Vec<bool>>,
    pub z_bits: Vec<Vec<bool>>,
    pub coefficients: Vec<Complex64>,
}

impl BinarySymplectic {
    /// Encode on the implicit register of `h`.
    pub fn from_hamiltonian(h: &QubitHamiltonian) -> Self {
        Self::from_hamiltonian_on(h, h.n_qubits())
    }

    /// Encode on a register of `n_qubits` (at least `h.n_qubits()`).
    pub fn from_hamiltonian_on(h: &QubitHamiltonian, n_qubits: usize) -> Self {
        let n_qubits = n_qubits.max(h.n_qubits());
        let mut out = BinarySymplectic {
            n_qubits,
            x_bits: Vec::with_capacity(h.len()),
            z_bits: Vec::with_capacity(h.len()),
            coefficients: Vec::with_capacity(h.len()),
        };
        for t in h.terms() {
            let mut x = vec![false; n_qubits];
            let mut z = vec![false; n_qubits];
            for &(q, a) in t.word.factors() {
                x[q] = matches!(a, PauliAxis::X | PauliAxis::Y);
                z[q] = matches!(a, PauliAxis::Z | PauliAxis::Y);
            }
            out.x_bits.push(x);
            out.z_bits.push(z);
            out.coefficients.push(t.coeff);
        }
        out
    }

    pub fn to_hamiltonian(&self) -> Result<QubitHamiltonian, PauliError> {
        let n_terms = self.coefficients.len();
        for rows in [&self.x_bits, &self.z_bits] {
            if rows.len() != n_terms {
                return Err(PauliError::LengthMismatch { expected: n_terms, found: rows.len() });
            }
        }
        let mut terms = Vec::with_capacity(n_terms);
        for ((x, z), c) in self.x_bits.iter().zip(&self.z_bits).zip(&self.coefficients) {
            for bits in [x, z] {
                if bits.len() != self.n_qubits {
                    return Err(PauliError::LengthMismatch { expected: self.n_qubits, found: bits.len() });
                }
            }
            let factors = x.iter().zip(z).enumerate().filter_map(|(q, (&xb, &zb))| match (xb, zb) {
                (true, false) => Some((q, PauliAxis::X)),
                (false, true) => Some((q, PauliAxis::Z)),
                (true, true) => Some((q, PauliAxis::Y)),
                (false, false) => None,
            });
            terms.push(PauliString::new(PauliWord::new(factors)?, *c));
        }
        Ok(QubitHamiltonian::from_terms(terms))
    }
}
