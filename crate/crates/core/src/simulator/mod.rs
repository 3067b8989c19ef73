//! Dense statevector simulation: exact states, expectation values, sampling
//! and Monte-Carlo trajectories for noise.
//!
//! Basis index bit `n-1-q` holds qubit `q`, so qubit 0 is the leftmost
//! character of a bitstring.

mod dense;
mod noise;

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::circuit::{CircuitError, Gate, GateKind, PowerBase, QCircuit};
use crate::expr::{Assignment, ExprError};
use crate::pauli::dense::pauli_phase;
use crate::pauli::{bitstring, PauliError, PauliWord, QubitHamiltonian, QubitWaveFunction};

pub use dense::{gate_matrix, unitary};
pub use noise::{Kraus, NoiseKind, NoiseModel, QuantumNoise};

pub const DEFAULT_QUBIT_LIMIT: usize = 24;

/// Largest tolerated imaginary part of an expectation value.
pub const IMAGINARY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimulatorError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error("{needed} qubits exceed the simulator limit of {limit}")]
    QubitLimit { needed: usize, limit: usize },
    #[error("expectation value has imaginary part {0}; the operator is not Hermitian")]
    NonHermitian(f64),
    #[error("noise requires sampling; set a positive sample count")]
    NoiseWithoutSampling,
    #[error("sample count must be positive")]
    ZeroSamples,
    #[error("invalid noise: {0}")]
    InvalidNoise(String),
    #[error("amplitude vector length {0} is not a power of two")]
    BadLength(usize),
}

type Matrix2 = [[Complex64; 2]; 2];

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Dense state of `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(n_qubits: usize) -> Self {
        let mut amplitudes = vec![ZERO; 1 << n_qubits];
        amplitudes[0] = ONE;
        StateVector { n_qubits, amplitudes }
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self, SimulatorError> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(SimulatorError::BadLength(len));
        }
        Ok(StateVector { n_qubits: len.trailing_zeros() as usize, amplitudes })
    }

    pub fn from_wavefunction(wfn: &QubitWaveFunction) -> Self {
        StateVector { n_qubits: wfn.n_qubits(), amplitudes: wfn.to_dense() }
    }

    pub fn to_wavefunction(&self) -> QubitWaveFunction {
        QubitWaveFunction::from_dense(&self.amplitudes)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    /// Widen to `n` qubits by appending `|0⟩` qubits on the right.
    fn widened(mut self, n: usize) -> Self {
        if n > self.n_qubits {
            let shift = n - self.n_qubits;
            let mut amps = vec![ZERO; 1 << n];
            for (i, a) in self.amplitudes.iter().enumerate() {
                amps[i << shift] = *a;
            }
            self = StateVector { n_qubits: n, amplitudes: amps };
        }
        self
    }

    fn bit(&self, q: usize) -> usize {
        1 << (self.n_qubits - 1 - q)
    }

    fn control_mask(&self, controls: &[usize]) -> usize {
        controls.iter().fold(0, |m, &c| m | self.bit(c))
    }

    /// `Re⟨ψ|H|ψ⟩`; errors if the imaginary part exceeds
    /// [`IMAGINARY_TOLERANCE`].
    pub fn expectation(&self, h: &QubitHamiltonian) -> Result<f64, SimulatorError> {
        if h.n_qubits() > self.n_qubits {
            return Err(PauliError::QubitMismatch(self.n_qubits, h.n_qubits()).into());
        }
        let term_value = |word: &PauliWord, coeff: Complex64| -> Complex64 {
            let (flip, phase_mask, n_y) = word.masks(self.n_qubits);
            let amps = &self.amplitudes;
            let s: Complex64 =
                (0..amps.len()).map(|j| amps[j ^ flip].conj() * pauli_phase(j, phase_mask, n_y) * amps[j]).sum();
            coeff * s
        };
        let value: Complex64 = if self.amplitudes.len() >= 1 << 12 {
            // collected first so the sum order is independent of scheduling
            let parts: Vec<Complex64> = h.terms().par_iter().map(|t| term_value(&t.word, t.coeff)).collect();
            parts.into_iter().sum()
        } else {
            h.terms().iter().map(|t| term_value(&t.word, t.coeff)).sum()
        };
        if value.im.abs() > IMAGINARY_TOLERANCE {
            return Err(SimulatorError::NonHermitian(value.im));
        }
        Ok(value.re)
    }

    pub(crate) fn apply_matrix(&mut self, q: usize, m: &Matrix2, cmask: usize) {
        let bit = self.bit(q);
        for i in 0..self.amplitudes.len() {
            if i & bit != 0 || i & cmask != cmask {
                continue;
            }
            let j = i | bit;
            let (a, b) = (self.amplitudes[i], self.amplitudes[j]);
            self.amplitudes[i] = m[0][0] * a + m[0][1] * b;
            self.amplitudes[j] = m[1][0] * a + m[1][1] * b;
        }
    }

    /// `exp(-i phi/2 · P)` on the control-satisfied subspace.
    pub(crate) fn apply_exp_pauli(&mut self, word: &PauliWord, phi: f64, cmask: usize) {
        let (flip, phase_mask, n_y) = word.masks(self.n_qubits);
        let (c, s) = ((phi / 2.0).cos(), (phi / 2.0).sin());
        let lowest = flip & flip.wrapping_neg();
        for j in 0..self.amplitudes.len() {
            if j & cmask != cmask {
                continue;
            }
            if flip == 0 {
                self.amplitudes[j] *= c - I * s * pauli_phase(j, phase_mask, n_y);
            } else if j & lowest == 0 {
                let k = j ^ flip;
                let (a, b) = (self.amplitudes[j], self.amplitudes[k]);
                self.amplitudes[j] = c * a - I * s * pauli_phase(k, phase_mask, n_y) * b;
                self.amplitudes[k] = c * b - I * s * pauli_phase(j, phase_mask, n_y) * a;
            }
        }
    }

    fn apply_swap(&mut self, a: usize, b: usize, cmask: usize) {
        let (ba, bb) = (self.bit(a), self.bit(b));
        for i in 0..self.amplitudes.len() {
            if i & cmask == cmask && i & ba != 0 && i & bb == 0 {
                self.amplitudes.swap(i, i ^ ba ^ bb);
            }
        }
    }

    fn apply_op(&mut self, op: &Op) {
        match op {
            Op::Matrix { qubit, matrix, controls } => {
                let cmask = self.control_mask(controls);
                self.apply_matrix(*qubit, matrix, cmask)
            }
            Op::ExpPauli { word, phi, controls } => {
                let cmask = self.control_mask(controls);
                self.apply_exp_pauli(word, *phi, cmask)
            }
            Op::Swap { a, b, controls } => {
                let cmask = self.control_mask(controls);
                self.apply_swap(*a, *b, cmask)
            }
        }
    }

    /// Apply one gate in place.
    pub fn apply_gate(&mut self, gate: &Gate, vars: &Assignment) -> Result<(), SimulatorError> {
        self.check_fits(gate.n_qubits())?;
        for op in lower_gate(gate, vars)? {
            self.apply_op(&op);
        }
        Ok(())
    }

    fn check_fits(&self, needed: usize) -> Result<(), SimulatorError> {
        if needed > self.n_qubits {
            return Err(PauliError::QubitMismatch(self.n_qubits, needed).into());
        }
        Ok(())
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_wavefunction())
    }
}

/// Numeric kernel operation; a gate lowers to one or more.
#[derive(Debug, Clone)]
enum Op {
    Matrix { qubit: usize, matrix: Matrix2, controls: Vec<usize> },
    ExpPauli { word: PauliWord, phi: f64, controls: Vec<usize> },
    Swap { a: usize, b: usize, controls: Vec<usize> },
}

pub(crate) fn rotation_matrix(kind: GateKind, theta: f64) -> Matrix2 {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    match kind {
        GateKind::Rx => [[c.into(), -I * s], [-I * s, c.into()]],
        GateKind::Ry => [[c.into(), (-s).into()], [s.into(), c.into()]],
        GateKind::Rz => {
            [[Complex64::from_polar(1.0, -theta / 2.0), ZERO], [ZERO, Complex64::from_polar(1.0, theta / 2.0)]]
        }
        GateKind::Phase => [[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, theta)]],
        _ => unreachable!("not a rotation"),
    }
}

pub(crate) fn fixed_matrix(kind: GateKind) -> Matrix2 {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    match kind {
        GateKind::X => [[ZERO, ONE], [ONE, ZERO]],
        GateKind::Y => [[ZERO, -I], [I, ZERO]],
        GateKind::Z => [[ONE, ZERO], [ZERO, -ONE]],
        GateKind::H => [[r.into(), r.into()], [r.into(), (-r).into()]],
        GateKind::S => [[ONE, ZERO], [ZERO, I]],
        GateKind::T => [[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)]],
        _ => unreachable!("not a fixed single-qubit gate"),
    }
}

/// `B^t = (1+B)/2 + e^{iπt}(1-B)/2` for a Hermitian involution `B`.
pub(crate) fn power_matrix(base: PowerBase, t: f64) -> Matrix2 {
    let b = fixed_matrix(match base {
        PowerBase::X => GateKind::X,
        PowerBase::Y => GateKind::Y,
        PowerBase::Z => GateKind::Z,
        PowerBase::H => GateKind::H,
    });
    let e = Complex64::from_polar(1.0, std::f64::consts::PI * t);
    let mut m = [[ZERO; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            let id = if r == c { ONE } else { ZERO };
            m[r][c] = (id + b[r][c]) * 0.5 + e * (id - b[r][c]) * 0.5;
        }
    }
    m
}

fn lower_gate(gate: &Gate, vars: &Assignment) -> Result<Vec<Op>, SimulatorError> {
    let controls = gate.controls().to_vec();
    let theta = gate.parameter_value(vars)?;
    let t = gate.targets();
    let matrix = |matrix: Matrix2| vec![Op::Matrix { qubit: t[0], matrix, controls: controls.clone() }];
    Ok(match gate.kind() {
        k @ (GateKind::X | GateKind::Y | GateKind::Z | GateKind::H | GateKind::S | GateKind::T) => {
            matrix(fixed_matrix(k))
        }
        k @ (GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::Phase) => {
            matrix(rotation_matrix(k, theta.expect("validated parameter")))
        }
        GateKind::Power(base) => matrix(power_matrix(base, theta.expect("validated parameter"))),
        GateKind::Swap => vec![Op::Swap { a: t[0], b: t[1], controls }],
        GateKind::ExpPauli | GateKind::GeneralizedRotation => {
            let theta = theta.expect("validated parameter");
            let generator = gate.generator().expect("generator gate");
            let steps = gate.trotter_steps();
            let mut ops = Vec::with_capacity(steps * generator.len());
            for _ in 0..steps {
                for term in generator.terms() {
                    ops.push(Op::ExpPauli {
                        word: term.word.clone(),
                        phi: term.coeff.re * theta / steps as f64,
                        controls: controls.clone(),
                    });
                }
            }
            ops
        }
    })
}

fn check_limit(n: usize) -> Result<(), SimulatorError> {
    if n > DEFAULT_QUBIT_LIMIT {
        return Err(SimulatorError::QubitLimit { needed: n, limit: DEFAULT_QUBIT_LIMIT });
    }
    Ok(())
}

/// Run `circuit` on `|0…0⟩` over its own qubit count.
pub fn simulate(circuit: &QCircuit, vars: &Assignment) -> Result<StateVector, SimulatorError> {
    simulate_on(circuit, vars, circuit.n_qubits())
}

/// Run `circuit` on `|0…0⟩` over `max(n_qubits, circuit.n_qubits())` qubits.
pub fn simulate_on(circuit: &QCircuit, vars: &Assignment, n_qubits: usize) -> Result<StateVector, SimulatorError> {
    let n = n_qubits.max(circuit.n_qubits());
    check_limit(n)?;
    simulate_from(circuit, vars, StateVector::zero(n))
}

/// Run `circuit` on a given initial state, widened with `|0⟩` qubits if the
/// circuit needs more.
pub fn simulate_from(
    circuit: &QCircuit,
    vars: &Assignment,
    initial: StateVector,
) -> Result<StateVector, SimulatorError> {
    let n = initial.n_qubits.max(circuit.n_qubits());
    check_limit(n)?;
    let mut state = initial.widened(n);
    for gate in circuit.gates() {
        for op in lower_gate(gate, vars)? {
            state.apply_op(&op);
        }
    }
    Ok(state)
}

/// Exact `⟨0|U† H U|0⟩`.
pub fn expectation(circuit: &QCircuit, h: &QubitHamiltonian, vars: &Assignment) -> Result<f64, SimulatorError> {
    let state = simulate_on(circuit, vars, h.n_qubits())?;
    state.expectation(h)
}

/// Measurement counts keyed by basis index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleResult {
    n_qubits: usize,
    counts: BTreeMap<usize, u64>,
    total: u64,
}

impl SampleResult {
    pub fn new(n_qubits: usize, counts: BTreeMap<usize, u64>) -> Self {
        let total = counts.values().sum();
        SampleResult { n_qubits, counts, total }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn counts(&self) -> &BTreeMap<usize, u64> {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn count(&self, index: usize) -> u64 {
        self.counts.get(&index).copied().unwrap_or(0)
    }

    /// Counts keyed by bitstring, qubit 0 leftmost.
    pub fn bitstring_counts(&self) -> BTreeMap<String, u64> {
        self.counts.iter().map(|(&i, &c)| (bitstring(i, self.n_qubits), c)).collect()
    }

    /// `(index, relative frequency)` pairs.
    pub fn frequencies(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        let total = self.total as f64;
        self.counts.iter().map(move |(&i, &c)| (i, c as f64 / total))
    }
}

impl fmt::Display for SampleResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (bits, c)) in self.bitstring_counts().iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{bits}: {c}")?;
        }
        Ok(())
    }
}

fn draw(cumulative: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let total = *cumulative.last().expect("nonempty distribution");
    let r = rng.gen::<f64>() * total;
    cumulative.partition_point(|&c| c <= r).min(cumulative.len() - 1)
}

fn cumulative(probabilities: &[f64]) -> Vec<f64> {
    probabilities
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect()
}

/// Draw `shots` computational-basis outcomes of `circuit` on `|0…0⟩`.
pub fn sample(
    circuit: &QCircuit,
    vars: &Assignment,
    shots: usize,
    seed: u64,
    noise: Option<&NoiseModel>,
) -> Result<SampleResult, SimulatorError> {
    sample_in_basis(circuit, &QCircuit::new(), vars, shots, seed, noise, 0)
}

/// Sample `circuit + basis` over at least `n_qubits` qubits. Noise acts on
/// the gates of `circuit` only; `basis` is an ideal readout rotation.
///
/// Noiseless sampling draws all shots from one ChaCha8 stream seeded with
/// `seed`. With noise, shot `k` runs its own trajectory on stream `k` of
/// the same seed, so results do not depend on thread scheduling.
pub fn sample_in_basis(
    circuit: &QCircuit,
    basis: &QCircuit,
    vars: &Assignment,
    shots: usize,
    seed: u64,
    noise: Option<&NoiseModel>,
    n_qubits: usize,
) -> Result<SampleResult, SimulatorError> {
    if shots == 0 {
        return Err(SimulatorError::ZeroSamples);
    }
    let n = n_qubits.max(circuit.n_qubits()).max(basis.n_qubits());
    check_limit(n)?;
    let noise = noise.filter(|m| !m.is_empty());
    let mut counts = BTreeMap::new();
    match noise {
        None => {
            let state = simulate_from(basis, vars, simulate_on(circuit, vars, n)?)?;
            let cdf = cumulative(&state.probabilities());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..shots {
                *counts.entry(draw(&cdf, &mut rng)).or_insert(0) += 1;
            }
        }
        Some(model) => {
            model.validate()?;
            let body: Vec<(Vec<Op>, &Gate)> =
                circuit.gates().iter().map(|g| Ok((lower_gate(g, vars)?, g))).collect::<Result<_, SimulatorError>>()?;
            let readout: Vec<Op> = basis
                .gates()
                .iter()
                .map(|g| lower_gate(g, vars))
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .flatten()
                .collect();
            let outcomes: Vec<usize> = (0..shots)
                .into_par_iter()
                .map(|shot| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(shot as u64);
                    let mut state = StateVector::zero(n);
                    for (ops, gate) in &body {
                        for op in ops {
                            state.apply_op(op);
                        }
                        model.apply_after(gate, &mut state, &mut rng);
                    }
                    for op in &readout {
                        state.apply_op(op);
                    }
                    draw(&cumulative(&state.probabilities()), &mut rng)
                })
                .collect();
            for o in outcomes {
                *counts.entry(o).or_insert(0) += 1;
            }
        }
    }
    Ok(SampleResult::new(n, counts))
}
