//! Gradient-descent minimization of objectives.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::expr::{Assignment, Variable};
use crate::objective::{
    compile_objective, grad, numerical_gradient, CompiledObjective, ExecutionConfig, Objective, ObjectiveError,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptimizeError {
    #[error(transparent)]
    Objective(#[from] ObjectiveError),
    #[error("no variables to optimize")]
    NoVariables,
    #[error("variable {0} does not occur in the objective")]
    UnknownVariable(Variable),
    #[error("no gradient supplied for variable {0}")]
    MissingGradient(Variable),
    #[error("learning rate must be positive, got {0}")]
    InvalidLearningRate(f64),
    #[error("finite-difference step must be positive, got {0}")]
    InvalidStep(f64),
    #[error("objective is {value} at {assignment}")]
    NonFinite { value: f64, assignment: String },
    #[error("unknown method '{0}'")]
    UnknownMethod(String),
    #[error("invalid gradient mode '{0}'")]
    InvalidGradientMode(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Sgd,
    Momentum,
    Nesterov,
    Adam,
    Rmsprop,
}

impl FromStr for Method {
    type Err = OptimizeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "sgd" => Method::Sgd,
            "momentum" => Method::Momentum,
            "nesterov" => Method::Nesterov,
            "adam" => Method::Adam,
            "rmsprop" | "rms-prop" => Method::Rmsprop,
            _ => return Err(OptimizeError::UnknownMethod(s.to_string())),
        })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Sgd => "sgd",
            Method::Momentum => "momentum",
            Method::Nesterov => "nesterov",
            Method::Adam => "adam",
            Method::Rmsprop => "rmsprop",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GradientMode {
    /// Shift-rule gradients.
    Analytic,
    /// Central differences with the given step.
    Numerical(f64),
    /// Caller-provided derivative objectives.
    User(BTreeMap<Variable, Objective>),
}

impl FromStr for GradientMode {
    type Err = OptimizeError;
    /// `analytic`, `numerical` (step 1e-4) or `numerical:<step>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(':') {
            None if s == "analytic" => Ok(GradientMode::Analytic),
            None if s == "numerical" => Ok(GradientMode::Numerical(1e-4)),
            Some(("numerical", step)) => {
                step.parse().map(GradientMode::Numerical).map_err(|_| OptimizeError::InvalidGradientMode(s.to_string()))
            }
            _ => Err(OptimizeError::InvalidGradientMode(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub method: Method,
    pub lr: f64,
    pub maxiter: usize,
    pub gradient: GradientMode,
    /// Variables to optimize; `None` selects all of them.
    pub variables: Option<Vec<Variable>>,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    /// RMSprop decay of the squared-gradient average.
    pub decay: f64,
    /// Momentum and Nesterov velocity decay.
    pub momentum: f64,
    /// Stop when the gradient norm drops below this; 0 disables.
    pub gtol: f64,
}

impl OptimizerConfig {
    pub fn new(method: Method, lr: f64, maxiter: usize) -> Self {
        OptimizerConfig {
            method,
            lr,
            maxiter,
            gradient: GradientMode::Analytic,
            variables: None,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            decay: 0.9,
            momentum: 0.9,
            gtol: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HistoryEntry {
    pub iteration: usize,
    pub value: f64,
    pub assignment: Assignment,
    pub gradient_norm: f64,
}

/// One entry per visited point, in iteration order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct History {
    entries: Vec<HistoryEntry>,
}

impl History {
    pub fn entries(&self) -> &[HistoryEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.value).collect()
    }

    /// Columns `iteration,value,gradnorm` followed by one column per variable.
    pub fn to_csv(&self) -> String {
        let names: Vec<&Variable> =
            self.entries.first().map(|e| e.assignment.variables().collect()).unwrap_or_default();
        let mut out = String::from("iteration,value,gradnorm");
        for v in &names {
            write!(out, ",{v}").expect("write to string");
        }
        out.push('\n');
        for e in &self.entries {
            write!(out, "{},{},{}", e.iteration, e.value, e.gradient_norm).expect("write to string");
            for v in &names {
                write!(out, ",{}", e.assignment.get(v).unwrap_or(f64::NAN)).expect("write to string");
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    MaxIter,
    Gtol,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerResult {
    pub energy: f64,
    pub assignment: Assignment,
    pub history: History,
    pub termination: Termination,
}

/// Per-variable optimizer memory.
#[derive(Debug, Clone, Default, PartialEq)]
struct Moments {
    velocity: Vec<f64>,
    first: Vec<f64>,
    second: Vec<f64>,
    t: i32,
}

/// Step-wise optimizer holding compiled value and gradient objectives.
pub struct Optimizer {
    config: OptimizerConfig,
    execution: ExecutionConfig,
    variables: Vec<Variable>,
    value: CompiledObjective,
    gradients: Vec<CompiledObjective>,
    moments: Moments,
    history: History,
}

impl Optimizer {
    /// Compile `objective` and one gradient objective per selected variable.
    pub fn new(
        objective: &Objective,
        config: OptimizerConfig,
        execution: ExecutionConfig,
    ) -> Result<Self, OptimizeError> {
        if config.lr.is_nan() || config.lr <= 0.0 {
            return Err(OptimizeError::InvalidLearningRate(config.lr));
        }
        let all = objective.variables();
        let variables: Vec<Variable> = match &config.variables {
            None => all.iter().cloned().collect(),
            Some(subset) => {
                if let Some(v) = subset.iter().find(|v| !all.contains(v)) {
                    return Err(OptimizeError::UnknownVariable(v.clone()));
                }
                subset.clone()
            }
        };
        if variables.is_empty() {
            return Err(OptimizeError::NoVariables);
        }
        let derivatives = variables
            .par_iter()
            .map(|v| match &config.gradient {
                GradientMode::Analytic => Ok(grad(objective, v)?),
                GradientMode::Numerical(step) if *step > 0.0 => Ok(numerical_gradient(objective, v, *step)),
                GradientMode::Numerical(step) => Err(OptimizeError::InvalidStep(*step)),
                GradientMode::User(map) => map.get(v).cloned().ok_or_else(|| OptimizeError::MissingGradient(v.clone())),
            })
            .collect::<Result<Vec<Objective>, OptimizeError>>()?;
        let gradients =
            derivatives.iter().map(|d| compile_objective(d, execution.clone())).collect::<Result<Vec<_>, _>>()?;
        let value = compile_objective(objective, execution.clone())?;
        let n = variables.len();
        Ok(Optimizer {
            config,
            execution,
            variables,
            value,
            gradients,
            moments: Moments { velocity: vec![0.0; n], first: vec![0.0; n], second: vec![0.0; n], t: 0 },
            history: History::default(),
        })
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn history(&self) -> &History {
        &self.history
    }

    /// Seeds for iteration `k`: one for the value, one per gradient component.
    fn seeds(&self, k: usize) -> (Option<u64>, Vec<Option<u64>>) {
        let Some(root) = self.execution.seed.or(self.execution.samples.map(|_| 0)) else {
            return (None, vec![None; self.gradients.len()]);
        };
        let mut rng = ChaCha8Rng::seed_from_u64(root);
        rng.set_stream(k as u64);
        let value = Some(rng.next_u64());
        (value, self.gradients.iter().map(|_| Some(rng.next_u64())).collect())
    }

    fn evaluate(&self, vars: &Assignment, k: usize) -> Result<f64, OptimizeError> {
        let value = self.value.call_with(vars, self.execution.samples, self.seeds(k).0)?;
        if !value.is_finite() {
            return Err(OptimizeError::NonFinite { value, assignment: format!("{vars:?}") });
        }
        Ok(value)
    }

    fn gradient(&self, vars: &Assignment, k: usize) -> Result<Vec<f64>, OptimizeError> {
        let seeds = self.seeds(k).1;
        let g = self
            .gradients
            .par_iter()
            .zip(seeds)
            .map(|(c, s)| c.call_with(vars, self.execution.samples, s))
            .collect::<Result<Vec<f64>, _>>()?;
        if let Some(bad) = g.iter().find(|x| !x.is_finite()) {
            return Err(OptimizeError::NonFinite { value: *bad, assignment: format!("{vars:?}") });
        }
        Ok(g)
    }

    fn shifted(&self, vars: &Assignment, delta: &[f64]) -> Assignment {
        let mut out = vars.clone();
        for (v, d) in self.variables.iter().zip(delta) {
            out.insert(v.clone(), vars.get(v).unwrap_or(0.0) + d);
        }
        out
    }

    /// Record the value at `vars` and apply one update. Returns the new
    /// assignment and the recorded value.
    pub fn step(&mut self, vars: &Assignment) -> Result<(Assignment, f64), OptimizeError> {
        let (next, value, _) = self.step_inner(vars, false)?;
        Ok((next, value))
    }

    fn step_inner(&mut self, vars: &Assignment, last: bool) -> Result<(Assignment, f64, f64), OptimizeError> {
        let k = self.history.len();
        let value = self.evaluate(vars, k)?;
        let c = &self.config;
        let m = &mut self.moments;
        // Nesterov differentiates at the look-ahead point.
        let probe = if c.method == Method::Nesterov {
            let ahead: Vec<f64> = m.velocity.iter().map(|v| c.momentum * v).collect();
            self.shifted(vars, &ahead)
        } else {
            vars.clone()
        };
        let g = self.gradient(&probe, k)?;
        let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        self.history.entries.push(HistoryEntry { iteration: k, value, assignment: vars.clone(), gradient_norm: norm });
        if last {
            return Ok((vars.clone(), value, norm));
        }
        let c = &self.config;
        let m = &mut self.moments;
        let delta: Vec<f64> = match c.method {
            Method::Sgd => g.iter().map(|x| -c.lr * x).collect(),
            Method::Momentum | Method::Nesterov => {
                for (v, x) in m.velocity.iter_mut().zip(&g) {
                    *v = c.momentum * *v - c.lr * x;
                }
                m.velocity.clone()
            }
            Method::Adam => {
                m.t += 1;
                let (b1t, b2t) = (1.0 - c.beta1.powi(m.t), 1.0 - c.beta2.powi(m.t));
                g.iter()
                    .enumerate()
                    .map(|(i, x)| {
                        m.first[i] = c.beta1 * m.first[i] + (1.0 - c.beta1) * x;
                        m.second[i] = c.beta2 * m.second[i] + (1.0 - c.beta2) * x * x;
                        -c.lr * (m.first[i] / b1t) / ((m.second[i] / b2t).sqrt() + c.epsilon)
                    })
                    .collect()
            }
            Method::Rmsprop => g
                .iter()
                .enumerate()
                .map(|(i, x)| {
                    m.second[i] = c.decay * m.second[i] + (1.0 - c.decay) * x * x;
                    -c.lr * x / (m.second[i].sqrt() + c.epsilon)
                })
                .collect(),
        };
        Ok((self.shifted(vars, &delta), value, norm))
    }

    /// Iterate until `maxiter` updates or the gradient norm falls below
    /// `gtol`. The history holds the starting point and every visited point.
    pub fn run(&mut self, initial: &Assignment) -> Result<OptimizerResult, OptimizeError> {
        let mut vars = initial.clone();
        let mut termination = Termination::MaxIter;
        for k in 0..=self.config.maxiter {
            let (next, _, norm) = self.step_inner(&vars, k == self.config.maxiter)?;
            if norm < self.config.gtol {
                termination = Termination::Gtol;
                break;
            }
            vars = next;
        }
        let best = self
            .history
            .entries
            .iter()
            .min_by(|a, b| a.value.total_cmp(&b.value))
            .expect("history has the starting point");
        Ok(OptimizerResult {
            energy: best.value,
            assignment: best.assignment.clone(),
            history: self.history.clone(),
            termination,
        })
    }
}

/// Minimize from `initial` (missing variables start at 0).
pub fn minimize(
    objective: &Objective,
    config: OptimizerConfig,
    initial: Option<&Assignment>,
    execution: ExecutionConfig,
) -> Result<OptimizerResult, OptimizeError> {
    let start = initial_assignment(objective, initial);
    Optimizer::new(objective, config, execution)?.run(&start)
}

/// Every objective variable, 0 unless given in `initial`.
pub fn initial_assignment(objective: &Objective, initial: Option<&Assignment>) -> Assignment {
    let mut out: Assignment = objective.variables().into_iter().map(|v| (v, 0.0)).collect();
    if let Some(init) = initial {
        for (v, x) in init.iter() {
            out.insert(v.clone(), *x);
        }
    }
    out
}
