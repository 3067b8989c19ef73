//! Random circuits, operators and assignments for property tests and
//! benchmarks. All draws go through the caller's RNG.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::circuit::gates::*;
use crate::circuit::{Gate, PowerBase, QCircuit};
use crate::expr::{Assignment, Expr, Variable};
use crate::pauli::{PauliAxis, PauliString, PauliWord, QubitHamiltonian};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateChoice {
    Rx,
    Ry,
    Rz,
    Phase,
    CRx,
    CRy,
    CRz,
    ExpPauli,
    Power,
    GeneralizedRotation,
    H,
    X,
    S,
    T,
    Cnot,
    Toffoli,
    Swap,
}

/// Parametrized gates whose gradients the shift rule must reproduce.
pub const GRADIENT_POOL: &[GateChoice] = &[
    GateChoice::Rx,
    GateChoice::Ry,
    GateChoice::Rz,
    GateChoice::CRx,
    GateChoice::CRy,
    GateChoice::CRz,
    GateChoice::ExpPauli,
    GateChoice::Power,
    GateChoice::GeneralizedRotation,
    GateChoice::H,
    GateChoice::Cnot,
];

/// Every gate family, for compiler checks.
pub const FULL_POOL: &[GateChoice] = &[
    GateChoice::Rx,
    GateChoice::Ry,
    GateChoice::Rz,
    GateChoice::Phase,
    GateChoice::CRx,
    GateChoice::CRy,
    GateChoice::CRz,
    GateChoice::ExpPauli,
    GateChoice::Power,
    GateChoice::GeneralizedRotation,
    GateChoice::H,
    GateChoice::X,
    GateChoice::S,
    GateChoice::T,
    GateChoice::Cnot,
    GateChoice::Toffoli,
    GateChoice::Swap,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CircuitShape {
    pub n_qubits: usize,
    pub n_variables: usize,
    pub n_gates: usize,
    /// Upper bound on controls added on top of a gate's own.
    pub max_extra_controls: usize,
}

pub fn variable_names(n: usize) -> Vec<Variable> {
    (0..n).map(|k| Variable::new(format!("v{k}"))).collect()
}

/// A variable, possibly transformed: `v`, `c·v + d`, `sin v`, `v·w` or `v²`.
pub fn random_angle<R: Rng>(rng: &mut R, vars: &[Variable]) -> Expr {
    if vars.is_empty() {
        return Expr::constant(rng.gen_range(-3.0..3.0));
    }
    let v = Expr::variable(vars.choose(rng).expect("nonempty").clone());
    match rng.gen_range(0..6) {
        0 | 1 => v,
        2 => v * rng.gen_range(-2.0..2.0) + rng.gen_range(-1.0..1.0),
        3 => v.sin(),
        4 => v * Expr::variable(vars.choose(rng).expect("nonempty").clone()),
        _ => v.square(),
    }
}

fn distinct<R: Rng>(rng: &mut R, n_qubits: usize, k: usize) -> Vec<usize> {
    let mut qs: Vec<usize> = (0..n_qubits).collect();
    qs.shuffle(rng);
    qs.truncate(k);
    qs
}

fn random_axis<R: Rng>(rng: &mut R) -> PauliAxis {
    [PauliAxis::X, PauliAxis::Y, PauliAxis::Z][rng.gen_range(0..3)]
}

/// Nonidentity word on a random subset of qubits.
pub fn random_word<R: Rng>(rng: &mut R, n_qubits: usize) -> PauliWord {
    let k = rng.gen_range(1..=n_qubits.min(3));
    PauliWord::new(distinct(rng, n_qubits, k).into_iter().map(|q| (q, random_axis(rng)))).expect("distinct qubits")
}

/// Hermitian operator with at most `max_terms` terms, possibly including
/// the identity.
pub fn random_hamiltonian<R: Rng>(rng: &mut R, n_qubits: usize, max_terms: usize) -> QubitHamiltonian {
    let n_terms = rng.gen_range(1..=max_terms.max(1));
    let terms = (0..n_terms)
        .map(|_| {
            let word = if rng.gen_bool(0.1) { PauliWord::identity() } else { random_word(rng, n_qubits) };
            PauliString::new(word, Complex64::new(rng.gen_range(-1.0..1.0), 0.0))
        })
        .collect();
    QubitHamiltonian::from_terms(terms)
}

fn one_gate<R: Rng>(rng: &mut R, choice: GateChoice, n: usize, vars: &[Variable]) -> QCircuit {
    let a = |rng: &mut R| random_angle(rng, vars);
    let q = distinct(rng, n, 3.min(n));
    match choice {
        GateChoice::Rx => rx(a(rng), q[0]),
        GateChoice::Ry => ry(a(rng), q[0]),
        GateChoice::Rz => rz(a(rng), q[0]),
        GateChoice::Phase => phase(a(rng), q[0]),
        GateChoice::CRx if n > 1 => crx(a(rng), q[1], q[0]).expect("distinct qubits"),
        GateChoice::CRy if n > 1 => cry(a(rng), q[1], q[0]).expect("distinct qubits"),
        GateChoice::CRz if n > 1 => crz(a(rng), q[1], q[0]).expect("distinct qubits"),
        GateChoice::CRx => rx(a(rng), q[0]),
        GateChoice::CRy => ry(a(rng), q[0]),
        GateChoice::CRz => rz(a(rng), q[0]),
        GateChoice::ExpPauli => {
            let term = PauliString::new(random_word(rng, n), Complex64::new(rng.gen_range(-1.5..1.5), 0.0));
            Gate::exp_pauli(term, a(rng), vec![]).expect("uncontrolled").into()
        }
        GateChoice::Power => {
            let base = [PowerBase::X, PowerBase::Y, PowerBase::Z][rng.gen_range(0..3)];
            power(base, a(rng), q[0])
        }
        GateChoice::GeneralizedRotation => {
            let terms = (0..rng.gen_range(1..=3))
                .map(|_| PauliString::new(random_word(rng, n), Complex64::new(rng.gen_range(-1.0..1.0), 0.0)))
                .collect();
            let g = QubitHamiltonian::from_terms(terms);
            if g.is_empty() {
                return QCircuit::new();
            }
            generalized_rotation(&g, a(rng), rng.gen_range(1..=2)).expect("nonempty generator")
        }
        GateChoice::H => h(q[0]),
        GateChoice::X => x(q[0]),
        GateChoice::S => s(q[0]),
        GateChoice::T => t(q[0]),
        GateChoice::Cnot if n > 1 => cnot(q[1], q[0]),
        GateChoice::Toffoli if n > 2 => toffoli(q[1], q[2], q[0]).expect("distinct qubits"),
        GateChoice::Swap if n > 1 => swap(q[0], q[1]).expect("distinct qubits"),
        GateChoice::Cnot | GateChoice::Toffoli | GateChoice::Swap => x(q[0]),
    }
}

/// Random circuit over `shape.n_qubits` qubits drawing gates from `pool`.
pub fn random_circuit<R: Rng>(rng: &mut R, shape: CircuitShape, pool: &[GateChoice]) -> QCircuit {
    let vars = variable_names(shape.n_variables);
    let mut u = QCircuit::new();
    for _ in 0..shape.n_gates {
        let choice = *pool.choose(rng).expect("nonempty pool");
        let gate = one_gate(rng, choice, shape.n_qubits, &vars);
        let extra = if shape.max_extra_controls > 0 { rng.gen_range(0..=shape.max_extra_controls) } else { 0 };
        if extra == 0 {
            u += gate;
            continue;
        }
        let used: Vec<usize> = gate.gates().iter().flat_map(|g| g.qubits().collect::<Vec<_>>()).collect();
        let free: Vec<usize> = (0..shape.n_qubits).filter(|q| !used.contains(q)).collect();
        let controls: Vec<usize> = free.choose_multiple(rng, extra.min(free.len())).copied().collect();
        u += gate.controlled_by(&controls).expect("controls are free qubits");
    }
    u
}

/// Uniform values in `[-π, π)` for every variable.
pub fn random_assignment<R: Rng>(rng: &mut R, vars: impl IntoIterator<Item = Variable>) -> Assignment {
    vars.into_iter().map(|v| (v, rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))).collect()
}
