//! Noise channels applied as Kraus trajectories.
//!
//! JSON form of a [`NoiseModel`]:
//!
//! ```json
//! [
//!   {"kind": "bit_flip", "probability": 0.01, "level": 1},
//!   {"kind": "amplitude_phase_damp", "probability": [0.02, 0.05], "level": 2}
//! ]
//! ```

use std::fmt;
use std::ops::Add;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{SimulatorError, StateVector};
use crate::circuit::Gate;

/// Single-qubit Kraus operator.
pub type Kraus = [[Complex64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    BitFlip,
    PhaseFlip,
    AmplitudeDamp,
    PhaseDamp,
    AmplitudePhaseDamp,
    Depolarizing,
}

impl NoiseKind {
    fn parameter_count(self) -> usize {
        if self == NoiseKind::AmplitudePhaseDamp {
            2
        } else {
            1
        }
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            NoiseKind::BitFlip => "bit_flip",
            NoiseKind::PhaseFlip => "phase_flip",
            NoiseKind::AmplitudeDamp => "amplitude_damp",
            NoiseKind::PhaseDamp => "phase_damp",
            NoiseKind::AmplitudePhaseDamp => "amplitude_phase_damp",
            NoiseKind::Depolarizing => "depolarizing",
        };
        f.write_str(name)
    }
}

/// One channel kind attached to every gate acting on `level` qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NoiseSpec", into = "NoiseSpec")]
pub struct QuantumNoise {
    kind: NoiseKind,
    probabilities: Vec<f64>,
    level: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ProbabilitySpec {
    One(f64),
    Many(Vec<f64>),
}

#[derive(Serialize, Deserialize)]
struct NoiseSpec {
    kind: NoiseKind,
    probability: ProbabilitySpec,
    level: usize,
}

impl TryFrom<NoiseSpec> for QuantumNoise {
    type Error = SimulatorError;

    fn try_from(entry: NoiseSpec) -> Result<Self, Self::Error> {
        let probabilities = match entry.probability {
            ProbabilitySpec::One(p) => vec![p],
            ProbabilitySpec::Many(ps) => ps,
        };
        QuantumNoise::new(entry.kind, probabilities, entry.level)
    }
}

impl From<QuantumNoise> for NoiseSpec {
    fn from(n: QuantumNoise) -> Self {
        let probability = match n.probabilities.as_slice() {
            [p] => ProbabilitySpec::One(*p),
            ps => ProbabilitySpec::Many(ps.to_vec()),
        };
        NoiseSpec { kind: n.kind, probability, level: n.level }
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

impl QuantumNoise {
    pub fn new(kind: NoiseKind, probabilities: Vec<f64>, level: usize) -> Result<Self, SimulatorError> {
        if probabilities.len() != kind.parameter_count() {
            return Err(SimulatorError::InvalidNoise(format!(
                "{kind} takes {} probabilities, got {}",
                kind.parameter_count(),
                probabilities.len()
            )));
        }
        if let Some(p) = probabilities.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(SimulatorError::InvalidNoise(format!("probability {p} outside [0, 1]")));
        }
        if level == 0 {
            return Err(SimulatorError::InvalidNoise("level must be at least 1".into()));
        }
        Ok(QuantumNoise { kind, probabilities, level })
    }

    pub fn bit_flip(p: f64, level: usize) -> Result<Self, SimulatorError> {
        Self::new(NoiseKind::BitFlip, vec![p], level)
    }

    pub fn phase_flip(p: f64, level: usize) -> Result<Self, SimulatorError> {
        Self::new(NoiseKind::PhaseFlip, vec![p], level)
    }

    pub fn amplitude_damp(gamma: f64, level: usize) -> Result<Self, SimulatorError> {
        Self::new(NoiseKind::AmplitudeDamp, vec![gamma], level)
    }

    pub fn phase_damp(gamma: f64, level: usize) -> Result<Self, SimulatorError> {
        Self::new(NoiseKind::PhaseDamp, vec![gamma], level)
    }

    pub fn amplitude_phase_damp(gamma_amplitude: f64, gamma_phase: f64, level: usize) -> Result<Self, SimulatorError> {
        Self::new(NoiseKind::AmplitudePhaseDamp, vec![gamma_amplitude, gamma_phase], level)
    }

    /// `p` is the total error probability, split equally over X, Y and Z.
    pub fn depolarizing(p: f64, level: usize) -> Result<Self, SimulatorError> {
        Self::new(NoiseKind::Depolarizing, vec![p], level)
    }

    pub fn kind(&self) -> NoiseKind {
        self.kind
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Kraus sets of the channels applied in sequence for one application.
    pub fn channels(&self) -> Vec<Vec<Kraus>> {
        let z = c(0.0);
        let one = c(1.0);
        let i = Complex64::new(0.0, 1.0);
        let amplitude = |g: f64| vec![[[one, z], [z, c((1.0 - g).sqrt())]], [[z, c(g.sqrt())], [z, z]]];
        let phase = |g: f64| vec![[[one, z], [z, c((1.0 - g).sqrt())]], [[z, z], [z, c(g.sqrt())]]];
        let p = self.probabilities[0];
        match self.kind {
            NoiseKind::BitFlip => {
                vec![vec![[[c((1.0 - p).sqrt()), z], [z, c((1.0 - p).sqrt())]], [[z, c(p.sqrt())], [c(p.sqrt()), z]]]]
            }
            NoiseKind::PhaseFlip => {
                vec![vec![[[c((1.0 - p).sqrt()), z], [z, c((1.0 - p).sqrt())]], [[c(p.sqrt()), z], [z, c(-p.sqrt())]]]]
            }
            NoiseKind::Depolarizing => {
                let k = (p / 3.0).sqrt();
                vec![vec![
                    [[c((1.0 - p).sqrt()), z], [z, c((1.0 - p).sqrt())]],
                    [[z, c(k)], [c(k), z]],
                    [[z, -i * k], [i * k, z]],
                    [[c(k), z], [z, c(-k)]],
                ]]
            }
            NoiseKind::AmplitudeDamp => vec![amplitude(p)],
            NoiseKind::PhaseDamp => vec![phase(p)],
            NoiseKind::AmplitudePhaseDamp => vec![amplitude(p), phase(self.probabilities[1])],
        }
    }
}

/// `‖K_k ψ‖²` for each Kraus operator acting on qubit `q`.
pub(crate) fn branch_probabilities(state: &StateVector, q: usize, channel: &[Kraus]) -> Vec<f64> {
    let bit = state.bit(q);
    let amps = state.amplitudes();
    channel
        .iter()
        .map(|k| {
            (0..amps.len())
                .filter(|i| i & bit == 0)
                .map(|i| {
                    let (a, b) = (amps[i], amps[i | bit]);
                    (k[0][0] * a + k[0][1] * b).norm_sqr() + (k[1][0] * a + k[1][1] * b).norm_sqr()
                })
                .sum()
        })
        .collect()
}

fn apply_channel(state: &mut StateVector, q: usize, channel: &[Kraus], rng: &mut ChaCha8Rng) {
    let probabilities = branch_probabilities(state, q, channel);
    let r = rng.gen::<f64>() * probabilities.iter().sum::<f64>();
    let mut acc = 0.0;
    let mut chosen = probabilities.iter().rposition(|&p| p > 0.0).unwrap_or(0);
    for (k, p) in probabilities.iter().enumerate() {
        acc += p;
        if r < acc {
            chosen = k;
            break;
        }
    }
    let scale = 1.0 / probabilities[chosen].sqrt();
    let k = channel[chosen];
    let m = [[k[0][0] * scale, k[0][1] * scale], [k[1][0] * scale, k[1][1] * scale]];
    state.apply_matrix(q, &m, 0);
}

/// A set of channels; models combine with `+`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NoiseModel {
    noises: Vec<QuantumNoise>,
}

impl NoiseModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_noises(noises: Vec<QuantumNoise>) -> Self {
        NoiseModel { noises }
    }

    pub fn noises(&self) -> &[QuantumNoise] {
        &self.noises
    }

    pub fn is_empty(&self) -> bool {
        self.noises.is_empty()
    }

    pub fn from_json(text: &str) -> Result<Self, SimulatorError> {
        serde_json::from_str(text).map_err(|e| SimulatorError::InvalidNoise(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("noise model serializes")
    }

    pub(crate) fn validate(&self) -> Result<(), SimulatorError> {
        for n in &self.noises {
            QuantumNoise::new(n.kind, n.probabilities.clone(), n.level)?;
        }
        Ok(())
    }

    /// Apply every noise whose level equals the gate arity, once per qubit
    /// the gate touches.
    pub(crate) fn apply_after(&self, gate: &Gate, state: &mut StateVector, rng: &mut ChaCha8Rng) {
        let arity = gate.arity();
        for noise in self.noises.iter().filter(|n| n.level == arity) {
            let channels = noise.channels();
            for q in gate.qubits() {
                for channel in &channels {
                    apply_channel(state, q, channel, rng);
                }
            }
        }
    }
}

impl From<QuantumNoise> for NoiseModel {
    fn from(n: QuantumNoise) -> Self {
        NoiseModel { noises: vec![n] }
    }
}

impl Add for NoiseModel {
    type Output = NoiseModel;

    fn add(mut self, rhs: NoiseModel) -> NoiseModel {
        self.noises.extend(rhs.noises);
        self
    }
}

impl Add<QuantumNoise> for NoiseModel {
    type Output = NoiseModel;

    fn add(mut self, rhs: QuantumNoise) -> NoiseModel {
        self.noises.push(rhs);
        self
    }
}

impl Add for QuantumNoise {
    type Output = NoiseModel;

    fn add(self, rhs: QuantumNoise) -> NoiseModel {
        NoiseModel { noises: vec![self, rhs] }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::gates::{h, ry, x};
    use crate::expr::Assignment;
    use crate::simulator::{sample, simulate};

    fn all_kinds() -> Vec<QuantumNoise> {
        vec![
            QuantumNoise::bit_flip(0.1, 1).unwrap(),
            QuantumNoise::phase_flip(0.2, 1).unwrap(),
            QuantumNoise::amplitude_damp(0.3, 1).unwrap(),
            QuantumNoise::phase_damp(0.4, 1).unwrap(),
            QuantumNoise::amplitude_phase_damp(0.25, 0.35, 1).unwrap(),
            QuantumNoise::depolarizing(0.15, 1).unwrap(),
        ]
    }

    #[test]
    fn kraus_sets_are_complete() {
        for noise in all_kinds() {
            for channel in noise.channels() {
                for r in 0..2 {
                    for col in 0..2 {
                        let s: Complex64 =
                            channel.iter().map(|k| k[0][r].conj() * k[0][col] + k[1][r].conj() * k[1][col]).sum();
                        let expected = if r == col { 1.0 } else { 0.0 };
                        assert!((s - c(expected)).norm() < 1e-12, "{}", noise.kind());
                    }
                }
            }
        }
    }

    #[test]
    fn branch_probabilities_sum_to_one() {
        let state = simulate(&(ry(0.7, 0) + ry(1.9, 1)), &Assignment::new()).unwrap();
        for noise in all_kinds() {
            for channel in noise.channels() {
                for q in 0..2 {
                    let total: f64 = branch_probabilities(&state, q, &channel).iter().sum();
                    assert!((total - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn validation() {
        assert!(QuantumNoise::bit_flip(1.5, 1).is_err());
        assert!(QuantumNoise::bit_flip(0.5, 0).is_err());
        assert!(QuantumNoise::new(NoiseKind::AmplitudePhaseDamp, vec![0.1], 1).is_err());
    }

    #[test]
    fn json_round_trip() {
        let model = QuantumNoise::bit_flip(0.1, 1).unwrap() + QuantumNoise::amplitude_phase_damp(0.2, 0.3, 2).unwrap();
        let text = model.to_json();
        assert_eq!(NoiseModel::from_json(&text).unwrap(), model);
        let parsed = NoiseModel::from_json(r#"[{"kind": "depolarizing", "probability": 0.05, "level": 2}]"#).unwrap();
        assert_eq!(parsed.noises()[0].kind(), NoiseKind::Depolarizing);
        assert!(NoiseModel::from_json(r#"[{"kind": "bit_flip", "probability": 2.0, "level": 1}]"#).is_err());
    }

    #[test]
    fn noise_attaches_by_arity() {
        // Level-2 noise never fires after single-qubit gates.
        let model = NoiseModel::from(QuantumNoise::bit_flip(1.0, 2).unwrap());
        let r = sample(&x(0), &Assignment::new(), 50, 3, Some(&model)).unwrap();
        assert_eq!(r.count(1), 50);
        let model = NoiseModel::from(QuantumNoise::bit_flip(1.0, 1).unwrap());
        let r = sample(&(x(0) + h(1)), &Assignment::new(), 50, 3, Some(&model)).unwrap();
        assert!(r.counts().keys().all(|k| k >> 1 == 0));
    }

    #[test]
    fn trajectories_are_reproducible() {
        let model = NoiseModel::from(QuantumNoise::depolarizing(0.3, 1).unwrap());
        let u = h(0) + x(1);
        let a = sample(&u, &Assignment::new(), 500, 11, Some(&model)).unwrap();
        let b = sample(&u, &Assignment::new(), 500, 11, Some(&model)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample(&u, &Assignment::new(), 500, 12, Some(&model)).unwrap());
    }
}
