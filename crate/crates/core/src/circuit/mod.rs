//! Abstract circuits: ordered gate lists over named primitives or Hermitian
//! generators. Rotations follow `R_P(θ) = exp(-i θ/2 P)`; concatenation
//! `a + b` applies `a` first.

pub mod gates;
mod text;

use std::collections::{BTreeSet, HashMap};
use std::f64::consts::PI;
use std::ops::{Add, AddAssign};

use thiserror::Error;

use crate::expr::{Assignment, Expr, ExprError, Variable};
use crate::pauli::{PauliError, PauliString, QubitHamiltonian};

pub use text::{parse_circuit, write_circuit};

/// Tolerance on imaginary generator coefficients.
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("qubit {0} is both target and control")]
    TargetIsControl(usize),
    #[error("qubit {0} listed twice")]
    RepeatedQubit(usize),
    #[error("{0} gate needs a parameter")]
    MissingParameter(&'static str),
    #[error("{kind} gate expects {expected} targets, got {found}")]
    TargetCount { kind: &'static str, expected: usize, found: usize },
    #[error("generator is not Hermitian")]
    NonHermitianGenerator,
    #[error("exp-pauli generator must be a single Pauli string, got {0} terms")]
    NotAPauliString(usize),
    #[error("trotter steps must be positive")]
    ZeroTrotterSteps,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PowerBase {
    X,
    Y,
    Z,
    H,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    X,
    Y,
    Z,
    H,
    S,
    T,
    Rx,
    Ry,
    Rz,
    /// `diag(1, e^{iφ})`.
    Phase,
    /// `exp(-i θ/2 · c P)` for a single weighted Pauli string `c P`.
    ExpPauli,
    /// Trotterized `exp(-i θ/2 · G)` over a Hermitian generator.
    GeneralizedRotation,
    /// `A^t = e^{iπt/2} R_A(πt)`.
    Power(PowerBase),
    Swap,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::T => "T",
            GateKind::Rx => "Rx",
            GateKind::Ry => "Ry",
            GateKind::Rz => "Rz",
            GateKind::Phase => "Phase",
            GateKind::ExpPauli => "ExpPauli",
            GateKind::GeneralizedRotation => "GeneralizedRotation",
            GateKind::Power(_) => "Power",
            GateKind::Swap => "SWAP",
        }
    }

    pub fn is_parametrized(self) -> bool {
        matches!(
            self,
            GateKind::Rx
                | GateKind::Ry
                | GateKind::Rz
                | GateKind::Phase
                | GateKind::ExpPauli
                | GateKind::GeneralizedRotation
                | GateKind::Power(_)
        )
    }

    fn target_count(self) -> Option<usize> {
        match self {
            GateKind::ExpPauli | GateKind::GeneralizedRotation => None,
            GateKind::Swap => Some(2),
            _ => Some(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gate {
    kind: GateKind,
    targets: Vec<usize>,
    controls: Vec<usize>,
    parameter: Option<Expr>,
    generator: Option<QubitHamiltonian>,
    trotter_steps: usize,
}

impl Gate {
    /// Fixed-target gate (everything except ExpPauli and GeneralizedRotation).
    pub fn new(
        kind: GateKind,
        targets: Vec<usize>,
        controls: Vec<usize>,
        parameter: Option<Expr>,
    ) -> Result<Gate, CircuitError> {
        if let Some(expected) = kind.target_count() {
            if targets.len() != expected {
                return Err(CircuitError::TargetCount { kind: kind.name(), expected, found: targets.len() });
            }
        }
        let gate = Gate { kind, targets, controls, parameter, generator: None, trotter_steps: 1 };
        gate.validate()
    }

    /// `exp(-i angle/2 · P)` for a single Pauli string (an identity string is
    /// a global phase).
    pub fn exp_pauli(
        generator: PauliString,
        angle: impl Into<Expr>,
        controls: Vec<usize>,
    ) -> Result<Gate, CircuitError> {
        let generator = QubitHamiltonian::from_terms(vec![generator]);
        Self::exp_pauli_from(generator, angle.into(), controls)
    }

    fn exp_pauli_from(generator: QubitHamiltonian, angle: Expr, controls: Vec<usize>) -> Result<Gate, CircuitError> {
        if generator.len() > 1 {
            return Err(CircuitError::NotAPauliString(generator.len()));
        }
        let targets = generator.qubits();
        Gate {
            kind: GateKind::ExpPauli,
            targets,
            controls,
            parameter: Some(angle),
            generator: Some(generator),
            trotter_steps: 1,
        }
        .validate()
    }

    pub fn generalized_rotation(
        generator: QubitHamiltonian,
        angle: impl Into<Expr>,
        steps: usize,
        controls: Vec<usize>,
    ) -> Result<Gate, CircuitError> {
        if steps == 0 {
            return Err(CircuitError::ZeroTrotterSteps);
        }
        Gate {
            kind: GateKind::GeneralizedRotation,
            targets: generator.qubits(),
            controls,
            parameter: Some(angle.into()),
            generator: Some(generator),
            trotter_steps: steps,
        }
        .validate()
    }

    fn validate(self) -> Result<Gate, CircuitError> {
        let mut seen = BTreeSet::new();
        for &q in &self.targets {
            if !seen.insert(q) {
                return Err(CircuitError::RepeatedQubit(q));
            }
        }
        let mut seen_controls = BTreeSet::new();
        for &c in &self.controls {
            if seen.contains(&c) {
                return Err(CircuitError::TargetIsControl(c));
            }
            if !seen_controls.insert(c) {
                return Err(CircuitError::RepeatedQubit(c));
            }
        }
        if self.kind.is_parametrized() && self.parameter.is_none() {
            return Err(CircuitError::MissingParameter(self.kind.name()));
        }
        if let Some(g) = &self.generator {
            if !g.is_hermitian(HERMITIAN_TOLERANCE) {
                return Err(CircuitError::NonHermitianGenerator);
            }
        }
        Ok(self)
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn controls(&self) -> &[usize] {
        &self.controls
    }

    pub fn parameter(&self) -> Option<&Expr> {
        self.parameter.as_ref()
    }

    pub fn generator(&self) -> Option<&QubitHamiltonian> {
        self.generator.as_ref()
    }

    pub fn trotter_steps(&self) -> usize {
        self.trotter_steps
    }

    pub fn is_controlled(&self) -> bool {
        !self.controls.is_empty()
    }

    /// Qubits touched: targets then controls.
    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.targets.iter().chain(&self.controls).copied()
    }

    pub fn arity(&self) -> usize {
        self.targets.len() + self.controls.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.qubits().max().map_or(0, |q| q + 1)
    }

    pub fn parameter_value(&self, vars: &Assignment) -> Result<Option<f64>, ExprError> {
        self.parameter.as_ref().map(|p| p.evaluate(vars, &[])).transpose()
    }

    pub fn with_parameter(&self, parameter: Expr) -> Gate {
        Gate { parameter: Some(parameter), ..self.clone() }
    }

    /// Add controls.
    pub fn controlled_by(&self, extra: &[usize]) -> Result<Gate, CircuitError> {
        let mut g = self.clone();
        g.controls.extend_from_slice(extra);
        g.validate()
    }

    pub fn with_controls(&self, controls: Vec<usize>) -> Result<Gate, CircuitError> {
        Gate { controls, ..self.clone() }.validate()
    }

    /// Adjoint gate. S and T map to Phase; GeneralizedRotation also
    /// reverses its term order so the Trotter product inverts exactly.
    pub fn dagger(&self) -> Gate {
        let mut g = self.clone();
        match self.kind {
            GateKind::S | GateKind::T => {
                let phi = if self.kind == GateKind::S { -PI / 2.0 } else { -PI / 4.0 };
                g.kind = GateKind::Phase;
                g.parameter = Some(Expr::constant(phi));
            }
            GateKind::GeneralizedRotation => {
                g.parameter = self.parameter.as_ref().map(|p| -p);
                g.generator = self
                    .generator
                    .as_ref()
                    .map(|h| QubitHamiltonian::from_terms(h.terms().iter().rev().cloned().collect()));
            }
            k if k.is_parametrized() => {
                g.parameter = self.parameter.as_ref().map(|p| -p);
            }
            _ => {}
        }
        g
    }

    pub fn variables(&self) -> BTreeSet<Variable> {
        self.parameter.as_ref().map(|p| p.variables()).unwrap_or_default()
    }

    pub fn map_parameter(&self, f: impl FnOnce(&Expr) -> Expr) -> Gate {
        Gate { parameter: self.parameter.as_ref().map(f), ..self.clone() }
    }
}

/// Ordered gate list.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct QCircuit {
    gates: Vec<Gate>,
}

impl QCircuit {
    pub fn new() -> Self {
        QCircuit { gates: Vec::new() }
    }

    pub fn from_gates(gates: Vec<Gate>) -> Self {
        QCircuit { gates }
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn n_qubits(&self) -> usize {
        self.gates.iter().map(Gate::n_qubits).max().unwrap_or(0)
    }

    /// Gate list of `self` followed by `other`.
    pub fn concatenate(&self, other: &QCircuit) -> QCircuit {
        let mut gates = self.gates.clone();
        gates.extend(other.gates.iter().cloned());
        QCircuit { gates }
    }

    pub fn dagger(&self) -> QCircuit {
        QCircuit { gates: self.gates.iter().rev().map(Gate::dagger).collect() }
    }

    pub fn extract_variables(&self) -> BTreeSet<Variable> {
        self.gates.iter().flat_map(Gate::variables).collect()
    }

    pub fn map_variables(&self, renaming: &HashMap<Variable, Variable>) -> QCircuit {
        self.map_parameters(|p| p.map_variables(renaming))
    }

    /// Attach `label` to every variable.
    pub fn relabel(&self, label: &str) -> QCircuit {
        let renaming = self
            .extract_variables()
            .into_iter()
            .map(|v| {
                let w = v.relabeled(label);
                (v, w)
            })
            .collect();
        self.map_variables(&renaming)
    }

    /// Replace assigned variables by their values.
    pub fn fix_variables(&self, values: &Assignment) -> QCircuit {
        self.map_parameters(|p| p.fix_variables(values))
    }

    pub fn map_parameters(&self, f: impl Fn(&Expr) -> Expr) -> QCircuit {
        QCircuit { gates: self.gates.iter().map(|g| g.map_parameter(&f)).collect() }
    }

    /// Add controls to every gate.
    pub fn controlled_by(&self, controls: &[usize]) -> Result<QCircuit, CircuitError> {
        Ok(QCircuit { gates: self.gates.iter().map(|g| g.controlled_by(controls)).collect::<Result<_, _>>()? })
    }
}

impl From<Gate> for QCircuit {
    fn from(g: Gate) -> Self {
        QCircuit { gates: vec![g] }
    }
}

impl FromIterator<Gate> for QCircuit {
    fn from_iter<I: IntoIterator<Item = Gate>>(iter: I) -> Self {
        QCircuit { gates: iter.into_iter().collect() }
    }
}

impl Add for QCircuit {
    type Output = QCircuit;
    fn add(mut self, rhs: QCircuit) -> QCircuit {
        self.gates.extend(rhs.gates);
        self
    }
}

impl Add<&QCircuit> for &QCircuit {
    type Output = QCircuit;
    fn add(self, rhs: &QCircuit) -> QCircuit {
        self.concatenate(rhs)
    }
}

impl AddAssign for QCircuit {
    fn add_assign(&mut self, rhs: QCircuit) {
        self.gates.extend(rhs.gates);
    }
}

/// `Π_n Π_k exp(-i angle/2 · c_k/N · σ_k)`, terms in generator order.
pub fn trotterized(
    generator: &QubitHamiltonian,
    angle: impl Into<Expr>,
    steps: usize,
) -> Result<QCircuit, CircuitError> {
    trotterized_controlled(generator, angle.into(), steps, &[])
}

pub(crate) fn trotterized_controlled(
    generator: &QubitHamiltonian,
    angle: Expr,
    steps: usize,
    controls: &[usize],
) -> Result<QCircuit, CircuitError> {
    if steps == 0 {
        return Err(CircuitError::ZeroTrotterSteps);
    }
    if !generator.is_hermitian(HERMITIAN_TOLERANCE) {
        return Err(CircuitError::NonHermitianGenerator);
    }
    let step_angle = if steps == 1 { angle } else { angle / steps as f64 };
    let mut gates = Vec::with_capacity(steps * generator.len());
    for _ in 0..steps {
        for term in generator.terms() {
            gates.push(Gate::exp_pauli(term.clone(), step_angle.clone(), controls.to_vec())?);
        }
    }
    Ok(QCircuit { gates })
}
