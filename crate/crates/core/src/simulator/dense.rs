//! Dense unitaries of gates and circuits, built by explicit embedding rather
//! than through the statevector kernel. Used as a reference.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{fixed_matrix, power_matrix, rotation_matrix, Matrix2, SimulatorError};
use crate::circuit::{Gate, GateKind, QCircuit};
use crate::expr::Assignment;
use crate::pauli::{to_matrix, PauliError, PauliString, QubitHamiltonian, DEFAULT_DENSE_LIMIT};

fn embed_local(local: &DMatrix<Complex64>, targets: &[usize], n: usize) -> DMatrix<Complex64> {
    let dim = 1usize << n;
    let bits: Vec<usize> = targets.iter().map(|&q| 1 << (n - 1 - q)).collect();
    let target_mask: usize = bits.iter().sum();
    let sub = |i: usize| bits.iter().fold(0, |acc, &b| (acc << 1) | usize::from(i & b != 0));
    DMatrix::from_fn(dim, dim, |r, c| {
        if r & !target_mask == c & !target_mask {
            local[(sub(r), sub(c))]
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

fn from2(m: Matrix2) -> DMatrix<Complex64> {
    DMatrix::from_fn(2, 2, |r, c| m[r][c])
}

fn exp_pauli_matrix(term: &PauliString, phi: f64, n: usize) -> Result<DMatrix<Complex64>, PauliError> {
    let p = to_matrix(&QubitHamiltonian::from_word(term.word.clone(), Complex64::new(1.0, 0.0)), n)?;
    let angle = term.coeff.re * phi / 2.0;
    Ok(DMatrix::identity(1 << n, 1 << n) * Complex64::new(angle.cos(), 0.0) - p * Complex64::new(0.0, angle.sin()))
}

/// Dense `2^n × 2^n` unitary of one gate, qubit 0 most significant.
pub fn gate_matrix(gate: &Gate, vars: &Assignment, n_qubits: usize) -> Result<DMatrix<Complex64>, SimulatorError> {
    let n = n_qubits.max(gate.n_qubits());
    if n > DEFAULT_DENSE_LIMIT {
        return Err(PauliError::DenseLimit { needed: n, limit: DEFAULT_DENSE_LIMIT }.into());
    }
    let theta = gate.parameter_value(vars)?;
    let targets = gate.targets();
    let base = match gate.kind() {
        k @ (GateKind::X | GateKind::Y | GateKind::Z | GateKind::H | GateKind::S | GateKind::T) => {
            embed_local(&from2(fixed_matrix(k)), targets, n)
        }
        k @ (GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::Phase) => {
            embed_local(&from2(rotation_matrix(k, theta.expect("validated parameter"))), targets, n)
        }
        GateKind::Power(b) => embed_local(&from2(power_matrix(b, theta.expect("validated parameter"))), targets, n),
        GateKind::Swap => {
            let mut local = DMatrix::zeros(4, 4);
            for (r, c) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
                local[(r, c)] = Complex64::new(1.0, 0.0);
            }
            embed_local(&local, targets, n)
        }
        GateKind::ExpPauli | GateKind::GeneralizedRotation => {
            let theta = theta.expect("validated parameter");
            let steps = gate.trotter_steps();
            let mut m = DMatrix::identity(1 << n, 1 << n);
            for _ in 0..steps {
                for term in gate.generator().expect("generator gate").terms() {
                    m = exp_pauli_matrix(term, theta / steps as f64, n)? * m;
                }
            }
            m
        }
    };
    if !gate.is_controlled() {
        return Ok(base);
    }
    let cmask: usize = gate.controls().iter().map(|&q| 1usize << (n - 1 - q)).sum();
    let dim = 1usize << n;
    Ok(DMatrix::from_fn(dim, dim, |r, c| {
        if c & cmask == cmask {
            base[(r, c)]
        } else if r == c {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// Dense unitary of a circuit; `unitary(a + b) = U_b · U_a`.
pub fn unitary(circuit: &QCircuit, vars: &Assignment, n_qubits: usize) -> Result<DMatrix<Complex64>, SimulatorError> {
    let n = n_qubits.max(circuit.n_qubits());
    let mut m = DMatrix::identity(1 << n, 1 << n);
    for gate in circuit.gates() {
        m = gate_matrix(gate, vars, n)? * m;
    }
    Ok(m)
}
