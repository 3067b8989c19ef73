//! Single-qubit data re-uploading classifier on a disc-in-square dataset.
//!
//! Each layer applies `Ry(x₀ + θ₀)` then `Rz(x₁ + θ₁)`. A point is labelled
//! inside when `⟨Q₊⟩ > ½` with `Q₊ = |0⟩⟨0|`. Training minimizes
//! `Σ (1 − F)²` where `F` is `⟨Q₊⟩` for inside points and `⟨Q₋⟩` otherwise.

use std::fmt::Write as _;

use anyhow::{bail, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use varq::circuit::gates::{ry, rz};
use varq::circuit::QCircuit;
use varq::expr::{Assignment, Expr, Variable};
use varq::objective::{make_expectation, ExecutionConfig, ExpectationValue, Objective};
use varq::optimize::{minimize, Method, OptimizerConfig, OptimizerResult};
use varq::pauli::parse_hamiltonian;
use varq::simulator::simulate;

/// Disc radius giving equal areas inside and outside on `[−1, 1]²`.
pub fn disc_radius() -> f64 {
    (2.0 / std::f64::consts::PI).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: [f64; 2],
    pub inside: bool,
}

/// `n` points uniform on the square; the stream is fixed by `rng`.
pub fn dataset<R: Rng>(rng: &mut R, n: usize) -> Vec<Point> {
    let r2 = disc_radius().powi(2);
    (0..n)
        .map(|_| {
            let x = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            Point { x, inside: x[0] * x[0] + x[1] * x[1] < r2 }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierConfig {
    pub layers: usize,
    pub train: usize,
    pub test: usize,
    pub method: Method,
    pub lr: f64,
    pub maxiter: usize,
    pub seed: u64,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig { layers: 3, train: 400, test: 1000, method: Method::Rmsprop, lr: 0.05, maxiter: 150, seed: 0 }
    }
}

pub fn weights(layers: usize) -> Vec<[Variable; 2]> {
    (0..layers).map(|l| [Variable::new(format!("t{l}_0")), Variable::new(format!("t{l}_1"))]).collect()
}

pub fn model(x: [f64; 2], layers: usize) -> QCircuit {
    let mut u = QCircuit::new();
    for [a, b] in weights(layers) {
        u += ry(Expr::variable(a) + x[0], 0);
        u += rz(Expr::variable(b) + x[1], 0);
    }
    u
}

/// `Σ (1 − F)²` over `points`.
pub fn loss(points: &[Point], layers: usize) -> Result<Objective> {
    let q_plus = parse_hamiltonian("0.5 + 0.5*Z(0)")?;
    let q_minus = parse_hamiltonian("0.5 - 0.5*Z(0)")?;
    let mut evals: Vec<ExpectationValue> = Vec::with_capacity(points.len());
    let mut expr = Expr::constant(0.0);
    for (k, p) in points.iter().enumerate() {
        let h = if p.inside { &q_plus } else { &q_minus };
        let e = make_expectation(&model(p.x, layers), h, false)?;
        evals.push(e.expectation_values()[0].clone());
        expr = expr + (Expr::constant(1.0) - Expr::handle(k)).square();
    }
    Ok(Objective::from_parts(expr, evals)?)
}

/// `⟨Q₊⟩` of the trained model at `x`.
pub fn inside_probability(x: [f64; 2], layers: usize, theta: &Assignment) -> Result<f64> {
    let state = simulate(&model(x, layers), theta)?;
    Ok(state.probabilities()[0])
}

#[derive(Debug, Clone)]
pub struct ClassifierReport {
    pub train_accuracy: f64,
    pub test_accuracy: f64,
    pub initial_loss: f64,
    pub final_loss: f64,
    pub result: OptimizerResult,
    /// Test points with the predicted inside probability.
    pub predictions: Vec<(Point, f64)>,
}

impl ClassifierReport {
    /// Decision data: `x0,x1,label,p_inside,predicted`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x0,x1,label,p_inside,predicted\n");
        for (p, prob) in &self.predictions {
            let _ = writeln!(out, "{},{},{},{},{}", p.x[0], p.x[1], u8::from(p.inside), prob, u8::from(*prob > 0.5));
        }
        out
    }
}

fn accuracy(points: &[Point], layers: usize, theta: &Assignment) -> Result<(f64, Vec<(Point, f64)>)> {
    let predictions: Vec<(Point, f64)> =
        points.iter().map(|p| Ok((*p, inside_probability(p.x, layers, theta)?))).collect::<Result<_>>()?;
    let hits = predictions.iter().filter(|(p, prob)| (*prob > 0.5) == p.inside).count();
    Ok((hits as f64 / points.len().max(1) as f64, predictions))
}

/// Train from `θ = 0` on `config.train` points and score on `config.test`
/// fresh points, both drawn from one ChaCha8 stream seeded by `config.seed`.
pub fn classify(config: &ClassifierConfig) -> Result<ClassifierReport> {
    if config.layers < 1 {
        bail!("classifier needs at least one layer");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let train = dataset(&mut rng, config.train);
    let test = dataset(&mut rng, config.test);
    let objective = loss(&train, config.layers)?;
    let initial: Assignment = weights(config.layers).into_iter().flatten().map(|v| (v, 0.0)).collect();
    let initial_loss = objective.evaluate(&initial)?;
    let mut opt = OptimizerConfig::new(config.method, config.lr, config.maxiter);
    opt.variables = Some(weights(config.layers).into_iter().flatten().collect());
    let execution = ExecutionConfig { seed: Some(config.seed), ..Default::default() };
    let result = minimize(&objective, opt, Some(&initial), execution)?;
    let final_loss = objective.evaluate(&result.assignment)?;
    let (train_accuracy, _) = accuracy(&train, config.layers, &result.assignment)?;
    let (test_accuracy, predictions) = accuracy(&test, config.layers, &result.assignment)?;
    Ok(ClassifierReport { train_accuracy, test_accuracy, initial_loss, final_loss, result, predictions })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_are_roughly_balanced() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let points = dataset(&mut rng, 20_000);
        let inside = points.iter().filter(|p| p.inside).count() as f64 / points.len() as f64;
        assert!((inside - 0.5).abs() < 0.02);
    }

    #[test]
    fn loss_is_bounded_by_point_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let points = dataset(&mut rng, 30);
        let o = loss(&points, 2).unwrap();
        assert_eq!(o.expectation_values().len(), 30);
        let mut theta = Assignment::new();
        for v in weights(2).into_iter().flatten() {
            theta.insert(v, rng.gen_range(-3.0..3.0));
        }
        let l = o.evaluate(&theta).unwrap();
        assert!((0.0..=30.0).contains(&l));
    }

    #[test]
    fn untrained_accuracy_averages_to_chance() {
        // Shifting the last Ry angle by π maps ⟨Z⟩ to −⟨Z⟩, so the two
        // predictors disagree on every point and uniform θ scores ½ on average.
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let points = dataset(&mut rng, 500);
        let layers = 3;
        for _ in 0..10 {
            let mut theta = Assignment::new();
            for v in weights(layers).into_iter().flatten() {
                theta.insert(v, rng.gen_range(-3.0..3.0));
            }
            let mut shifted = theta.clone();
            let last = weights(layers)[layers - 1][0].clone();
            shifted.insert(last.clone(), theta.get(&last).unwrap() + std::f64::consts::PI);
            let (a, _) = accuracy(&points, layers, &theta).unwrap();
            let (b, _) = accuracy(&points, layers, &shifted).unwrap();
            assert!((a + b - 1.0).abs() < 1e-12, "{a} + {b}");
        }
    }

    #[test]
    fn zero_iterations_keep_initial_loss() {
        let report = classify(&ClassifierConfig { maxiter: 0, train: 50, test: 100, ..Default::default() }).unwrap();
        assert_eq!(report.initial_loss, report.final_loss);
    }

    #[test]
    fn zero_layers_rejected() {
        assert!(classify(&ClassifierConfig { layers: 0, ..Default::default() }).is_err());
    }
}
