//! Pauli decompositions of dyads, projectors and dense matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{paulis_qm, paulis_qp, PauliError, PauliString, QubitHamiltonian, QubitWaveFunction};

/// `σ+ = |0⟩⟨1| = ½(X + iY)`.
pub fn sigma_plus(qubit: usize) -> QubitHamiltonian {
    (QubitHamiltonian::x(qubit) + QubitHamiltonian::y(qubit) * Complex64::i()) * 0.5
}

/// `σ- = |1⟩⟨0| = ½(X - iY)`.
pub fn sigma_minus(qubit: usize) -> QubitHamiltonian {
    (QubitHamiltonian::x(qubit) - QubitHamiltonian::y(qubit) * Complex64::i()) * 0.5
}

fn single_dyad(qubit: usize, ket: bool, bra: bool) -> QubitHamiltonian {
    match (ket, bra) {
        (false, false) => paulis_qp(qubit),
        (true, true) => paulis_qm(qubit),
        (false, true) => sigma_plus(qubit),
        (true, false) => sigma_minus(qubit),
    }
}

/// `|i⟩⟨j|` on `n` qubits as a Pauli sum.
fn dyad(i: usize, j: usize, n: usize) -> QubitHamiltonian {
    (0..n).fold(QubitHamiltonian::identity(), |acc, q| {
        let bit = n - 1 - q;
        acc.multiply(&single_dyad(q, (i >> bit) & 1 == 1, (j >> bit) & 1 == 1))
    })
}

/// `|ket⟩⟨bra|` expanded over dyads; amplitudes are used as given.
pub fn ketbra(ket: &QubitWaveFunction, bra: &QubitWaveFunction) -> Result<QubitHamiltonian, PauliError> {
    if ket.n_qubits() != bra.n_qubits() {
        return Err(PauliError::QubitMismatch(ket.n_qubits(), bra.n_qubits()));
    }
    let n = ket.n_qubits();
    let mut terms: Vec<PauliString> = Vec::new();
    for (i, a) in ket.iter() {
        for (j, b) in bra.iter() {
            let w = a * b.conj();
            if w.norm() == 0.0 {
                continue;
            }
            terms.extend(dyad(i, j, n).scale(w).terms().iter().cloned());
        }
    }
    Ok(QubitHamiltonian::from_terms(terms))
}

/// `|Ψ⟩⟨Ψ|` for the normalized input.
pub fn projector(wfn: &QubitWaveFunction) -> Result<QubitHamiltonian, PauliError> {
    let mut w = wfn.clone();
    w.normalize()?;
    ketbra(&w, &w)
}

/// Hermitian and anti-Hermitian parts: real and imaginary coefficients.
pub fn split(op: &QubitHamiltonian) -> (QubitHamiltonian, QubitHamiltonian) {
    let herm = op.terms().iter().map(|t| PauliString::new(t.word.clone(), Complex64::new(t.coeff.re, 0.0))).collect();
    let anti = op.terms().iter().map(|t| PauliString::new(t.word.clone(), Complex64::new(0.0, t.coeff.im))).collect();
    (QubitHamiltonian::from_terms(herm), QubitHamiltonian::from_terms(anti))
}

/// Binary-encode an `r×c` matrix on `⌈log2 max(r, c)⌉` qubits.
pub fn matrix_to_operator(m: &DMatrix<Complex64>) -> QubitHamiltonian {
    let dim = m.nrows().max(m.ncols()).max(1);
    let n = dim.next_power_of_two().trailing_zeros() as usize;
    let mut terms = Vec::new();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let v = m[(i, j)];
            if v.norm() != 0.0 {
                terms.extend(dyad(i, j, n).scale(v).terms().iter().cloned());
            }
        }
    }
    QubitHamiltonian::from_terms(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{to_matrix, PauliAxis, PauliWord};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn wfn(s: &str) -> QubitWaveFunction {
        QubitWaveFunction::from_string(s).unwrap()
    }

    #[test]
    fn single_qubit_projectors() {
        assert_eq!(projector(&wfn("|0>")).unwrap(), paulis_qp(0));
        let plus = projector(&wfn("|0> + |1>")).unwrap();
        let expected = (QubitHamiltonian::identity() + QubitHamiltonian::x(0)) * 0.5;
        assert!(plus.approx_eq(&expected, 1e-15));
    }

    #[test]
    fn bell_projector_expansion() {
        let p = projector(&wfn("|00> + |11>")).unwrap();
        let w = |f: &[(usize, PauliAxis)]| PauliWord::new(f.iter().copied()).unwrap();
        use PauliAxis::*;
        assert!((p.coefficient(&PauliWord::identity()) - c(0.25, 0.0)).norm() < 1e-15);
        assert!((p.coefficient(&w(&[(0, X), (1, X)])) - c(0.25, 0.0)).norm() < 1e-15);
        assert!((p.coefficient(&w(&[(0, Y), (1, Y)])) - c(-0.25, 0.0)).norm() < 1e-15);
        assert!((p.coefficient(&w(&[(0, Z), (1, Z)])) - c(0.25, 0.0)).norm() < 1e-15);
        assert_eq!(p.len(), 4);
    }

    #[test]
    fn ketbra_gives_ladder_operators() {
        let k0 = wfn("|0>");
        let k1 = wfn("|1>");
        assert!(ketbra(&k0, &k1).unwrap().approx_eq(&sigma_plus(0), 1e-15));
        assert!(ketbra(&k1, &k0).unwrap().approx_eq(&sigma_minus(0), 1e-15));
        assert!(ketbra(&k0, &k0).unwrap().approx_eq(&paulis_qp(0), 1e-15));
        assert_eq!(ketbra(&k0, &wfn("|00>")), Err(PauliError::QubitMismatch(1, 2)));
        assert!(sigma_plus(0).coefficient(&PauliWord::single(0, PauliAxis::Y)) == c(0.0, 0.5));
    }

    #[test]
    fn empty_wavefunction_has_no_projector() {
        assert_eq!(projector(&QubitWaveFunction::new(2)), Err(PauliError::EmptyWaveFunction));
    }

    #[test]
    fn split_examples() {
        let (h, a) = split(&sigma_plus(0));
        assert!(h.approx_eq(&(QubitHamiltonian::x(0) * 0.5), 1e-15));
        assert!(a.approx_eq(&(QubitHamiltonian::y(0) * c(0.0, 0.5)), 1e-15));
        let (h, a) = split(&QubitHamiltonian::z(0));
        assert_eq!(h, QubitHamiltonian::z(0));
        assert!(a.is_empty());
        let op = QubitHamiltonian::x(0) * QubitHamiltonian::y(1) * c(0.0, 1.0);
        let (h, a) = split(&op);
        assert!(h.is_empty());
        assert_eq!(a, op);
    }

    #[test]
    fn small_matrices() {
        let m = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matrix_to_operator(&m).approx_eq(&sigma_plus(0), 1e-15));
        let id = DMatrix::<Complex64>::identity(2, 2);
        assert!(matrix_to_operator(&id).approx_eq(&QubitHamiltonian::identity(), 1e-15));
    }

    #[test]
    fn rectangular_matrix_is_zero_padded() {
        let vals: Vec<Complex64> = (0..6).map(|k| c(k as f64 * 0.3 - 0.7, (k * k) as f64 * 0.1)).collect();
        let m = DMatrix::from_row_slice(3, 2, &vals);
        let dense = to_matrix(&matrix_to_operator(&m), 2).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i < 3 && j < 2 { m[(i, j)] } else { c(0.0, 0.0) };
                assert!((dense[(i, j)] - expected).norm() < 1e-12);
            }
        }
    }
}
