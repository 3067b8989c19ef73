use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{PauliError, PauliWord, QubitHamiltonian};

/// Largest register [`to_matrix`] will build.
pub const DEFAULT_DENSE_LIMIT: usize = 12;

/// `i^n_y · (-1)^{popcount(index & phase_mask)}`: the phase of `P|index⟩`.
pub(crate) fn pauli_phase(index: usize, phase_mask: usize, n_y: u32) -> Complex64 {
    let base = match n_y % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    if (index & phase_mask).count_ones() % 2 == 1 {
        -base
    } else {
        base
    }
}

/// Column action of a word: `P|j⟩ = phase · |j ^ flip⟩`.
pub(crate) fn word_action(word: &PauliWord, n_qubits: usize) -> (usize, usize, u32) {
    word.masks(n_qubits)
}

pub fn to_matrix(h: &QubitHamiltonian, n_qubits: usize) -> Result<DMatrix<Complex64>, PauliError> {
    to_matrix_with_limit(h, n_qubits, DEFAULT_DENSE_LIMIT)
}

pub fn to_matrix_with_limit(
    h: &QubitHamiltonian,
    n_qubits: usize,
    limit: usize,
) -> Result<DMatrix<Complex64>, PauliError> {
    if n_qubits > limit {
        return Err(PauliError::DenseLimit { needed: n_qubits, limit });
    }
    if h.n_qubits() > n_qubits {
        return Err(PauliError::QubitMismatch(h.n_qubits(), n_qubits));
    }
    let dim = 1usize << n_qubits;
    let mut m = DMatrix::zeros(dim, dim);
    for t in h.terms() {
        let (flip, phase, n_y) = word_action(&t.word, n_qubits);
        for j in 0..dim {
            m[(j ^ flip, j)] += t.coeff * pauli_phase(j, phase, n_y);
        }
    }
    Ok(m)
}
