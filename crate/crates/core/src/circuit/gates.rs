//! Single-gate circuit constructors.

use num_complex::Complex64;

use super::{trotterized, CircuitError, Gate, GateKind, PowerBase, QCircuit};
use crate::expr::Expr;
use crate::pauli::{PauliAxis, PauliString, PauliWord, QubitHamiltonian};

fn fixed(kind: GateKind, target: usize) -> QCircuit {
    Gate::new(kind, vec![target], vec![], None).expect("single-target gate").into()
}

fn rotation(kind: GateKind, angle: Expr, target: usize) -> QCircuit {
    Gate::new(kind, vec![target], vec![], Some(angle)).expect("single-target gate").into()
}

pub fn x(target: usize) -> QCircuit {
    fixed(GateKind::X, target)
}

pub fn y(target: usize) -> QCircuit {
    fixed(GateKind::Y, target)
}

pub fn z(target: usize) -> QCircuit {
    fixed(GateKind::Z, target)
}

pub fn h(target: usize) -> QCircuit {
    fixed(GateKind::H, target)
}

pub fn s(target: usize) -> QCircuit {
    fixed(GateKind::S, target)
}

pub fn t(target: usize) -> QCircuit {
    fixed(GateKind::T, target)
}

pub fn rx(angle: impl Into<Expr>, target: usize) -> QCircuit {
    rotation(GateKind::Rx, angle.into(), target)
}

pub fn ry(angle: impl Into<Expr>, target: usize) -> QCircuit {
    rotation(GateKind::Ry, angle.into(), target)
}

pub fn rz(angle: impl Into<Expr>, target: usize) -> QCircuit {
    rotation(GateKind::Rz, angle.into(), target)
}

pub fn phase(angle: impl Into<Expr>, target: usize) -> QCircuit {
    rotation(GateKind::Phase, angle.into(), target)
}

/// `base^exponent` on one qubit.
pub fn power(base: PowerBase, exponent: impl Into<Expr>, target: usize) -> QCircuit {
    rotation(GateKind::Power(base), exponent.into(), target)
}

pub fn swap(a: usize, b: usize) -> Result<QCircuit, CircuitError> {
    Ok(Gate::new(GateKind::Swap, vec![a, b], vec![], None)?.into())
}

pub fn cnot(control: usize, target: usize) -> QCircuit {
    x(target).controlled_by(&[control]).expect("distinct control and target")
}

pub fn cz(control: usize, target: usize) -> QCircuit {
    z(target).controlled_by(&[control]).expect("distinct control and target")
}

pub fn toffoli(c1: usize, c2: usize, target: usize) -> Result<QCircuit, CircuitError> {
    x(target).controlled_by(&[c1, c2])
}

pub fn crx(angle: impl Into<Expr>, control: usize, target: usize) -> Result<QCircuit, CircuitError> {
    rx(angle, target).controlled_by(&[control])
}

pub fn cry(angle: impl Into<Expr>, control: usize, target: usize) -> Result<QCircuit, CircuitError> {
    ry(angle, target).controlled_by(&[control])
}

pub fn crz(angle: impl Into<Expr>, control: usize, target: usize) -> Result<QCircuit, CircuitError> {
    rz(angle, target).controlled_by(&[control])
}

/// Parse a compact Pauli word such as `X0Y1Z3`; `I` or an empty string is
/// the identity.
pub fn parse_word(text: &str) -> Result<PauliWord, CircuitError> {
    let bad = |m: &str| CircuitError::Parse { line: 0, message: format!("{m} in Pauli word '{text}'") };
    let t = text.trim();
    if t.is_empty() || t == "I" {
        return Ok(PauliWord::identity());
    }
    let bytes = t.as_bytes();
    let mut i = 0;
    let mut factors = Vec::new();
    while i < bytes.len() {
        let axis = match bytes[i] {
            b'X' => PauliAxis::X,
            b'Y' => PauliAxis::Y,
            b'Z' => PauliAxis::Z,
            _ => return Err(bad("expected X, Y or Z")),
        };
        i += 1;
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let q: usize = t[start..i].parse().map_err(|_| bad("expected qubit index"))?;
        factors.push((q, axis));
    }
    Ok(PauliWord::new(factors)?)
}

/// `exp(-i angle/2 · P)` for a compact word like `X0Y1`.
pub fn exp_pauli(word: &str, angle: impl Into<Expr>) -> Result<QCircuit, CircuitError> {
    let word = parse_word(word)?;
    Ok(Gate::exp_pauli(PauliString::new(word, Complex64::new(1.0, 0.0)), angle, vec![])?.into())
}

/// Single GeneralizedRotation gate.
pub fn generalized_rotation(
    generator: &QubitHamiltonian,
    angle: impl Into<Expr>,
    steps: usize,
) -> Result<QCircuit, CircuitError> {
    Ok(Gate::generalized_rotation(generator.clone(), angle, steps, vec![])?.into())
}

/// Trotter expansion written out as ExpPauli gates.
pub fn trotter(generator: &QubitHamiltonian, angle: impl Into<Expr>, steps: usize) -> Result<QCircuit, CircuitError> {
    trotterized(generator, angle, steps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compact_words() {
        let w = parse_word("X0Y1Z3").unwrap();
        assert_eq!(w.to_string(), "X0Y1Z3");
        assert!(parse_word("I").unwrap().is_identity());
        assert!(parse_word("X0X0").is_err());
        assert!(parse_word("Q1").is_err());
    }

    #[test]
    fn controlled_constructors() {
        let c = cnot(1, 0);
        assert_eq!(c.gates()[0].controls(), &[1]);
        assert_eq!(c.gates()[0].targets(), &[0]);
        assert!(cry(0.1, 2, 2).is_err());
        assert_eq!(toffoli(0, 1, 2).unwrap().n_qubits(), 3);
    }
}
