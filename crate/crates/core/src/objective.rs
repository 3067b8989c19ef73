//! Expectation values bundled into differentiable objectives.
//!
//! An [`Objective`] is an [`Expr`] whose `Handle(k)` leaves refer to entry
//! `k` of its expectation table. Tables are deduplicated structurally, so
//! `O + O` still holds one entry per distinct (circuit, operator) pair.

use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::circuit::{Gate, GateKind, QCircuit};
use crate::compiler::{
    compile, is_shift_compatible, normalized_exp_pauli, unit_exp_pauli, CompileError, CompilerConfig,
};
use crate::expr::{Assignment, Expr, ExprError, Node, UnaryFn, Variable};
use crate::measurement::{estimate, group_qwc, group_singletons, MeasurementError, MeasurementGroup};
use crate::pauli::QubitHamiltonian;
use crate::simulator::{expectation, sample_in_basis, NoiseModel, SampleResult, SimulatorError};

/// Tolerance on anti-Hermitian coefficients accepted by [`make_expectation`].
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ObjectiveError {
    #[error("operator is not Hermitian")]
    NonHermitian,
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Simulator(#[from] SimulatorError),
    #[error(transparent)]
    Measurement(#[from] MeasurementError),
    #[error("gate {0} has no shift rule after compilation")]
    UnsupportedGate(&'static str),
    #[error("noise requires sampling; set a positive sample count")]
    NoiseWithoutSamples,
}

/// `⟨0|U† H U|0⟩` for one circuit and operator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExpectationValue {
    circuit: QCircuit,
    hamiltonian: QubitHamiltonian,
    optimize_measurements: bool,
}

impl ExpectationValue {
    pub fn circuit(&self) -> &QCircuit {
        &self.circuit
    }

    pub fn hamiltonian(&self) -> &QubitHamiltonian {
        &self.hamiltonian
    }

    pub fn optimize_measurements(&self) -> bool {
        self.optimize_measurements
    }

    pub fn n_qubits(&self) -> usize {
        self.circuit.n_qubits().max(self.hamiltonian.n_qubits())
    }

    fn with_circuit(&self, circuit: QCircuit) -> Self {
        ExpectationValue { circuit, ..self.clone() }
    }

    /// Groups whose joint samples estimate this expectation value.
    pub fn measurement_plan(&self) -> Vec<MeasurementGroup> {
        if self.optimize_measurements {
            group_qwc(&self.hamiltonian)
        } else {
            group_singletons(&self.hamiltonian)
        }
    }
}

/// Append-only table that returns the existing index for a repeated entry.
#[derive(Default)]
struct Table {
    entries: Vec<ExpectationValue>,
    index: HashMap<ExpectationValue, usize>,
}

impl Table {
    fn from_entries(entries: &[ExpectationValue]) -> Self {
        let mut t = Table::default();
        for e in entries {
            t.intern(e.clone());
        }
        t
    }

    fn intern(&mut self, e: ExpectationValue) -> usize {
        if let Some(&k) = self.index.get(&e) {
            return k;
        }
        let k = self.entries.len();
        self.index.insert(e.clone(), k);
        self.entries.push(e);
        k
    }
}

/// Scalar function of expectation values and variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Objective {
    expr: Expr,
    evals: Vec<ExpectationValue>,
}

/// Single-handle objective `⟨H⟩_U`.
pub fn make_expectation(
    circuit: &QCircuit,
    hamiltonian: &QubitHamiltonian,
    optimize_measurements: bool,
) -> Result<Objective, ObjectiveError> {
    if !hamiltonian.is_hermitian(HERMITIAN_TOLERANCE) {
        return Err(ObjectiveError::NonHermitian);
    }
    let mut h = hamiltonian.clone();
    h.simplify();
    Ok(Objective {
        expr: Expr::handle(0),
        evals: vec![ExpectationValue { circuit: circuit.clone(), hamiltonian: h, optimize_measurements }],
    })
}

impl Objective {
    /// Objective without expectation values.
    pub fn constant(c: f64) -> Self {
        Expr::constant(c).into()
    }

    /// Build from an expression and its table. Unreferenced entries are
    /// dropped and the remaining handles renumbered densely.
    pub fn from_parts(expr: Expr, evals: Vec<ExpectationValue>) -> Result<Self, ExprError> {
        let used = expr.handles();
        if let Some(&missing) = used.iter().find(|&&k| k >= evals.len()) {
            return Err(ExprError::MissingHandle(missing));
        }
        let mut table = Table::default();
        let mut map = HashMap::new();
        for &k in &used {
            map.insert(k, table.intern(evals[k].clone()));
        }
        Ok(Objective { expr: expr.map_handles(&|k| map[&k]), evals: table.entries })
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn expectation_values(&self) -> &[ExpectationValue] {
        &self.evals
    }

    /// Every variable of the expression and of the circuits.
    pub fn variables(&self) -> std::collections::BTreeSet<Variable> {
        let mut out = self.expr.variables();
        for e in &self.evals {
            out.extend(e.circuit.extract_variables());
        }
        out
    }

    /// Combine two objectives through `f(self_expr, other_expr)`.
    fn merge(&self, other: &Objective, f: impl FnOnce(Expr, Expr) -> Expr) -> Objective {
        let mut table = Table::from_entries(&self.evals);
        let map: Vec<usize> = other.evals.iter().map(|e| table.intern(e.clone())).collect();
        let rhs = other.expr.map_handles(&|k| map[k]);
        Objective { expr: f(self.expr.clone(), rhs), evals: table.entries }
    }

    fn map_expr(&self, f: impl FnOnce(&Expr) -> Expr) -> Objective {
        Objective { expr: f(&self.expr), evals: self.evals.clone() }
    }

    pub fn apply(&self, f: UnaryFn) -> Objective {
        self.map_expr(|e| e.apply(f))
    }

    pub fn pow(&self, exponent: impl Into<Objective>) -> Objective {
        self.merge(&exponent.into(), |a, b| a.pow(b))
    }

    pub fn exp(&self) -> Objective {
        self.map_expr(Expr::exp)
    }

    pub fn log(&self) -> Objective {
        self.map_expr(Expr::log)
    }

    pub fn sin(&self) -> Objective {
        self.map_expr(Expr::sin)
    }

    pub fn cos(&self) -> Objective {
        self.map_expr(Expr::cos)
    }

    pub fn sqrt(&self) -> Objective {
        self.map_expr(Expr::sqrt)
    }

    pub fn square(&self) -> Objective {
        self.map_expr(Expr::square)
    }

    pub fn abs(&self) -> Objective {
        self.map_expr(Expr::abs)
    }

    /// Replace `v` by `replacement` in the expression and every circuit.
    pub fn substitute(&self, v: &Variable, replacement: &Expr) -> Objective {
        let evals = self
            .evals
            .iter()
            .map(|e| e.with_circuit(e.circuit.map_parameters(|p| p.substitute(v, replacement))))
            .collect();
        let expr = self.expr.substitute(v, replacement);
        Objective::from_parts(expr, evals).expect("handles preserved")
    }

    /// Rename variables in the expression and every circuit.
    pub fn map_variables(&self, renaming: &HashMap<Variable, Variable>) -> Objective {
        let evals = self.evals.iter().map(|e| e.with_circuit(e.circuit.map_variables(renaming))).collect();
        Objective::from_parts(self.expr.map_variables(renaming), evals).expect("handles preserved")
    }

    /// Exact value by statevector simulation.
    pub fn evaluate(&self, vars: &Assignment) -> Result<f64, ObjectiveError> {
        let values = self
            .evals
            .par_iter()
            .map(|e| expectation(&e.circuit, &e.hamiltonian, vars))
            .collect::<Result<Vec<f64>, _>>()?;
        Ok(self.expr.evaluate(vars, &values)?)
    }
}

impl From<Expr> for Objective {
    fn from(expr: Expr) -> Self {
        Objective { expr, evals: Vec::new() }
    }
}

impl From<f64> for Objective {
    fn from(c: f64) -> Self {
        Objective::constant(c)
    }
}

impl From<Variable> for Objective {
    fn from(v: Variable) -> Self {
        Expr::variable(v).into()
    }
}

impl From<&Objective> for Objective {
    fn from(o: &Objective) -> Self {
        o.clone()
    }
}

macro_rules! objective_ops {
    ($($tr:ident $method:ident),*) => {$(
        impl<T: Into<Objective>> $tr<T> for Objective {
            type Output = Objective;
            fn $method(self, rhs: T) -> Objective {
                self.merge(&rhs.into(), |a, b| $tr::$method(a, b))
            }
        }
        impl<T: Into<Objective>> $tr<T> for &Objective {
            type Output = Objective;
            fn $method(self, rhs: T) -> Objective {
                self.merge(&rhs.into(), |a, b| $tr::$method(a, b))
            }
        }
        impl $tr<Objective> for f64 {
            type Output = Objective;
            fn $method(self, rhs: Objective) -> Objective {
                Objective::constant(self).merge(&rhs, |a, b| $tr::$method(a, b))
            }
        }
        impl $tr<&Objective> for f64 {
            type Output = Objective;
            fn $method(self, rhs: &Objective) -> Objective {
                Objective::constant(self).merge(rhs, |a, b| $tr::$method(a, b))
            }
        }
    )*};
}

objective_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Objective {
    type Output = Objective;
    fn neg(self) -> Objective {
        self.apply(UnaryFn::Neg)
    }
}

impl Neg for &Objective {
    type Output = Objective;
    fn neg(self) -> Objective {
        self.apply(UnaryFn::Neg)
    }
}

/// Gate `gate` of `circuit` replaced by `replacement`.
fn with_gate(circuit: &QCircuit, index: usize, replacement: Gate) -> QCircuit {
    let mut gates = circuit.gates().to_vec();
    gates[index] = replacement;
    QCircuit::from_gates(gates)
}

/// Shift-rule expression for `dE/dv` with handles interned into `table`.
fn expectation_derivative(e: &ExpectationValue, v: &Variable, table: &mut Table) -> Result<Expr, ObjectiveError> {
    let circuit = compile(&e.circuit, &CompilerConfig::gradient())?;
    let mut terms = Vec::new();
    for (i, gate) in circuit.gates().iter().enumerate() {
        let Some(theta) = gate.parameter() else { continue };
        if !theta.depends_on(v) {
            continue;
        }
        if !is_shift_compatible(gate) {
            return Err(ObjectiveError::UnsupportedGate(gate.kind().name()));
        }
        // (angle, rebuild): the gate is exp(-i angle/2 P) up to a global phase.
        let (angle, rebuild): (Expr, Box<dyn Fn(Expr) -> Gate>) = match gate.kind() {
            GateKind::ExpPauli => {
                let (word, angle) = normalized_exp_pauli(gate).expect("ExpPauli gate");
                if word.is_identity() {
                    continue;
                }
                (angle, Box::new(move |a| unit_exp_pauli(word.clone(), a).expect("uncontrolled word")))
            }
            _ => {
                let g = gate.clone();
                (theta.clone(), Box::new(move |a| g.with_parameter(a)))
            }
        };
        let dtheta = angle.differentiate(v)?;
        if dtheta.as_constant() == Some(0.0) {
            continue;
        }
        let plus = table.intern(e.with_circuit(with_gate(&circuit, i, rebuild(&angle + FRAC_PI_2))));
        let minus = table.intern(e.with_circuit(with_gate(&circuit, i, rebuild(&angle - FRAC_PI_2))));
        terms.push(dtheta * 0.5 * (Expr::handle(plus) - Expr::handle(minus)));
    }
    Ok(Expr::sum(terms))
}

/// `dO/dv` by the chain rule, with every expectation derivative expanded
/// by the parameter-shift rule on the gradient-compiled circuit. The result
/// is an ordinary objective and can be differentiated again.
pub fn grad(objective: &Objective, v: &Variable) -> Result<Objective, ObjectiveError> {
    let d = objective.expr.differentiate(v)?;
    let mut table = Table::from_entries(&objective.evals);
    let mut derivatives: HashMap<usize, Expr> = HashMap::new();
    for k in differentiated_handles(&d) {
        let dk = expectation_derivative(&objective.evals[k], v, &mut table)?;
        derivatives.insert(k, dk);
    }
    let expr = d.rewrite_leaves(&mut |n| match n {
        Node::HandleDerivative(k, _) => Some(derivatives[k].clone()),
        _ => None,
    });
    Ok(Objective::from_parts(expr, table.entries)?)
}

/// Central difference `[O(v+h) − O(v−h)] / 2h`, built by substitution.
pub fn numerical_gradient(objective: &Objective, v: &Variable, step: f64) -> Objective {
    let x = Expr::variable(v.clone());
    let plus = objective.substitute(v, &(&x + step));
    let minus = objective.substitute(v, &(&x - step));
    (plus - minus) / (2.0 * step)
}

/// How a compiled objective executes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExecutionConfig {
    /// Shots per measurement group; `None` is exact simulation.
    pub samples: Option<usize>,
    pub noise: Option<NoiseModel>,
    /// Root seed for sampling. Defaults to 0.
    pub seed: Option<u64>,
}

/// An objective prepared for repeated evaluation.
///
/// The value is a pure function of the assignment, the sample count and the
/// seed. Each expectation value samples from its own derived seed, so
/// evaluating handles in parallel gives the same result as in order.
#[derive(Debug)]
pub struct CompiledObjective {
    objective: Objective,
    plans: Vec<Vec<MeasurementGroup>>,
    config: ExecutionConfig,
    evaluations: AtomicU64,
}

/// Compile the circuits for gradients and fix the execution settings.
pub fn compile_objective(objective: &Objective, config: ExecutionConfig) -> Result<CompiledObjective, ObjectiveError> {
    if config.samples.is_none() && config.noise.as_ref().is_some_and(|m| !m.is_empty()) {
        return Err(ObjectiveError::NoiseWithoutSamples);
    }
    if let Some(noise) = &config.noise {
        noise.validate()?;
    }
    let evals = objective
        .evals
        .iter()
        .map(|e| Ok(e.with_circuit(compile(&e.circuit, &CompilerConfig::gradient())?)))
        .collect::<Result<Vec<_>, ObjectiveError>>()?;
    let plans = evals.iter().map(ExpectationValue::measurement_plan).collect();
    Ok(CompiledObjective {
        objective: Objective { expr: objective.expr.clone(), evals },
        plans,
        config,
        evaluations: AtomicU64::new(0),
    })
}

impl CompiledObjective {
    pub fn objective(&self) -> &Objective {
        &self.objective
    }

    pub fn config(&self) -> &ExecutionConfig {
        &self.config
    }

    /// Expectation values evaluated so far, counted once per table entry
    /// per call.
    pub fn evaluation_count(&self) -> u64 {
        self.evaluations.load(Ordering::Relaxed)
    }

    /// Evaluate with the configured samples and seed.
    pub fn call(&self, vars: &Assignment) -> Result<f64, ObjectiveError> {
        self.call_with(vars, self.config.samples, self.config.seed)
    }

    /// Evaluate with the sample count and seed overridden.
    pub fn call_with(
        &self,
        vars: &Assignment,
        samples: Option<usize>,
        seed: Option<u64>,
    ) -> Result<f64, ObjectiveError> {
        let noise = self.config.noise.as_ref().filter(|m| !m.is_empty());
        if samples.is_none() && noise.is_some() {
            return Err(ObjectiveError::NoiseWithoutSamples);
        }
        let seed = seed.unwrap_or(0);
        let values = (0..self.objective.evals.len())
            .into_par_iter()
            .map(|k| {
                let e = &self.objective.evals[k];
                match samples {
                    None => Ok(expectation(&e.circuit, &e.hamiltonian, vars)?),
                    Some(shots) => self.sampled(k, vars, shots, seed, noise),
                }
            })
            .collect::<Result<Vec<f64>, ObjectiveError>>()?;
        self.evaluations.fetch_add(values.len() as u64, Ordering::Relaxed);
        Ok(self.objective.expr.evaluate(vars, &values)?)
    }

    fn sampled(
        &self,
        handle: usize,
        vars: &Assignment,
        shots: usize,
        seed: u64,
        noise: Option<&NoiseModel>,
    ) -> Result<f64, ObjectiveError> {
        let e = &self.objective.evals[handle];
        let mut seeds = ChaCha8Rng::seed_from_u64(seed);
        seeds.set_stream(handle as u64);
        let mut constant = 0.0;
        let mut groups = Vec::new();
        let mut counts: Vec<SampleResult> = Vec::new();
        for group in &self.plans[handle] {
            let group_seed = seeds.next_u64();
            let terms = group.members().terms();
            if terms.iter().all(|t| t.word.is_identity()) {
                constant += terms.iter().map(|t| t.coeff.re).sum::<f64>();
                continue;
            }
            counts.push(sample_in_basis(
                &e.circuit,
                group.basis_rotation(),
                vars,
                shots,
                group_seed,
                noise,
                e.n_qubits(),
            )?);
            groups.push(group.clone());
        }
        Ok(constant + estimate(&groups, &counts)?)
    }
}

/// Handle ids appearing in `HandleDerivative` markers.
fn differentiated_handles(e: &Expr) -> Vec<usize> {
    let mut out = std::collections::BTreeSet::new();
    e.visit(&mut |n| {
        if let Node::HandleDerivative(k, _) = n {
            out.insert(*k);
        }
    });
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::gates::*;
    use crate::pauli::{all_zero_projector, parse_hamiltonian, paulis_qp};
    use std::f64::consts::PI;

    fn at(a: f64) -> Assignment {
        [("a", a)].into_iter().collect()
    }

    fn ry_z() -> Objective {
        make_expectation(&ry(Expr::var("a"), 0), &QubitHamiltonian::z(0), false).unwrap()
    }

    fn a() -> Variable {
        Variable::new("a")
    }

    #[test]
    fn expectation_examples() {
        let o = ry_z();
        assert!((o.evaluate(&at(0.0)).unwrap() - 1.0).abs() < 1e-12);
        assert!((o.evaluate(&at(PI)).unwrap() + 1.0).abs() < 1e-12);
        let plus = make_expectation(&QCircuit::new(), &paulis_qp(0), false).unwrap();
        assert!((plus.evaluate(&Assignment::new()).unwrap() - 1.0).abs() < 1e-12);
        let bell = h(0) + cnot(0, 1);
        let proj = make_expectation(&(bell.clone() + bell.dagger()), &all_zero_projector([0, 1]), false).unwrap();
        assert!((proj.evaluate(&Assignment::new()).unwrap() - 1.0).abs() < 1e-12);
        let bad = parse_hamiltonian("1.0j*X(0)");
        assert!(matches!(make_expectation(&QCircuit::new(), &bad.unwrap(), false), Err(ObjectiveError::NonHermitian)));
    }

    #[test]
    fn arithmetic_deduplicates() {
        let e = ry_z();
        let o1 = e.square();
        let o2 = (-(e.square())).exp() + 0.3;
        let o3 = &o1 + &o2;
        assert_eq!(o3.expectation_values().len(), 1);
        let x: f64 = 0.7f64.cos();
        let expected = x * x + (-x * x).exp() + 0.3;
        assert!((o3.evaluate(&at(0.7)).unwrap() - expected).abs() < 1e-12);
        let z = &e + 0.0;
        assert_eq!(z.evaluate(&at(0.4)).unwrap(), e.evaluate(&at(0.4)).unwrap());
    }

    #[test]
    fn three_handle_structure() {
        let e0 = make_expectation(&ry(Expr::var("a"), 0), &QubitHamiltonian::z(0), false).unwrap();
        let e1 = make_expectation(&rx(Expr::var("b"), 0), &QubitHamiltonian::z(0), false).unwrap();
        let e2 = make_expectation(&h(0), &QubitHamiltonian::x(0), false).unwrap();
        let o3 = (&e0 + &e1).pow(e2.square() * 0.5);
        assert_eq!(o3.expectation_values().len(), 3);
        assert_eq!(o3.expr().handles().len(), 3);
        let vars: Assignment = [("a", 0.0), ("b", 0.0)].into_iter().collect();
        // E0 = E1 = E2 = 1: 2^(1/2)
        assert!((o3.evaluate(&vars).unwrap() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn gradient_of_cosine() {
        let g = grad(&ry_z(), &a()).unwrap();
        assert!(g.evaluate(&at(0.0)).unwrap().abs() < 1e-12);
        assert!((g.evaluate(&at(FRAC_PI_2)).unwrap() + 1.0).abs() < 1e-12);
        let g2 = grad(&g, &a()).unwrap();
        assert!((g2.evaluate(&at(0.0)).unwrap() + 1.0).abs() < 1e-12);
        let absent = grad(&ry_z(), &Variable::new("b")).unwrap();
        assert!(absent.expectation_values().is_empty());
        assert_eq!(absent.evaluate(&at(0.3)).unwrap(), 0.0);
    }

    #[test]
    fn controlled_rotation_gradient_uses_two_shift_pairs() {
        let u = h(0) + cry(Expr::var("a"), 0, 1).unwrap();
        let o = make_expectation(&u, &QubitHamiltonian::z(1), false).unwrap();
        let g = grad(&o, &a()).unwrap();
        assert_eq!(g.expectation_values().len(), 4);
        for x in [0.3, 1.2, -2.0] {
            let fd = (o.evaluate(&at(x + 1e-6)).unwrap() - o.evaluate(&at(x - 1e-6)).unwrap()) / 2e-6;
            assert!((g.evaluate(&at(x)).unwrap() - fd).abs() < 1e-6);
        }
    }

    #[test]
    fn exp_pauli_with_coefficient_and_transformed_angle() {
        let gen = parse_hamiltonian("0.7*X(0)Y(1)").unwrap();
        let angle = Expr::var("a").square().sin();
        let u = h(1) + QCircuit::from_gates(vec![Gate::exp_pauli(gen.terms()[0].clone(), angle, vec![]).unwrap()]);
        let hm = parse_hamiltonian("0.4*Z(0) - 0.9*X(0)Z(1)").unwrap();
        let o = make_expectation(&u, &hm, false).unwrap().sin() * Expr::var("a");
        let g = grad(&o, &a()).unwrap();
        for x in [0.2, 0.9, 1.7] {
            let fd = (o.evaluate(&at(x + 1e-6)).unwrap() - o.evaluate(&at(x - 1e-6)).unwrap()) / 2e-6;
            assert!((g.evaluate(&at(x)).unwrap() - fd).abs() < 1e-6);
        }
    }

    #[test]
    fn compiled_matches_direct_and_counts_deduplicated_evaluations() {
        let o = ry_z();
        let c = compile_objective(&o, ExecutionConfig::default()).unwrap();
        for x in [0.1, 2.3] {
            assert_eq!(c.call(&at(x)).unwrap(), o.evaluate(&at(x)).unwrap());
        }
        let single = compile_objective(&o, ExecutionConfig::default()).unwrap();
        let double = compile_objective(&(&o + &o), ExecutionConfig::default()).unwrap();
        single.call(&at(0.5)).unwrap();
        double.call(&at(0.5)).unwrap();
        assert_eq!(single.evaluation_count(), double.evaluation_count());
    }

    #[test]
    fn sampled_estimate_within_three_sigma() {
        let c = compile_objective(&ry_z(), ExecutionConfig { samples: Some(100_000), ..Default::default() }).unwrap();
        let exact = 1f64.cos();
        let sigma = ((1.0 - exact * exact) / 100_000.0).sqrt();
        let v = c.call_with(&at(1.0), Some(100_000), Some(11)).unwrap();
        assert!((v - exact).abs() < 3.0 * sigma);
        assert_eq!(v, c.call_with(&at(1.0), Some(100_000), Some(11)).unwrap());
        assert_eq!(c.call_with(&at(1.0), None, None).unwrap(), exact);
    }

    #[test]
    fn noise_requires_samples() {
        let noise = NoiseModel::from_noises(vec![crate::simulator::QuantumNoise::bit_flip(0.1, 1).unwrap()]);
        let cfg = ExecutionConfig { noise: Some(noise.clone()), ..Default::default() };
        assert!(matches!(compile_objective(&ry_z(), cfg), Err(ObjectiveError::NoiseWithoutSamples)));
        let cfg = ExecutionConfig { samples: Some(10), noise: Some(noise), seed: None };
        let c = compile_objective(&ry_z(), cfg).unwrap();
        assert!(matches!(c.call_with(&at(0.0), None, None), Err(ObjectiveError::NoiseWithoutSamples)));
    }

    #[test]
    fn numerical_gradient_examples() {
        let g = numerical_gradient(&ry_z(), &a(), 1e-4);
        assert!((g.evaluate(&at(1.0)).unwrap() + 1f64.sin()).abs() < 1e-6);
        let c = numerical_gradient(&Objective::constant(3.0), &a(), 1e-4);
        assert!(c.evaluate(&Assignment::new()).unwrap().abs() < 1e-12);
    }
}
