//! Circuit-to-circuit lowering passes.
//!
//! The gradient pipeline ([`CompilerConfig::gradient`]) leaves every
//! parametrized gate uncontrolled with a single-Pauli generator, which is
//! what the shift rule needs. Every pass preserves the dense unitary
//! including global phase, and every pass is idempotent.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::{trotterized_controlled, CircuitError, Gate, GateKind, PowerBase, QCircuit};
use crate::expr::Expr;
use crate::pauli::{PauliAxis, PauliString, PauliWord};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CompileError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("unknown compiler pass '{0}'")]
    UnknownPass(String),
}

/// Which passes to run. [`compile`] applies them in the order
/// generalized_rotation, multi_control, power, controlled_rotation,
/// exp_pauli_to_cnot_ladder.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CompilerConfig {
    pub controlled_rotation: bool,
    pub power: bool,
    pub generalized_rotation: bool,
    pub multi_control: bool,
    pub exp_pauli_to_cnot_ladder: bool,
}

impl CompilerConfig {
    /// Passes required before shift-rule differentiation.
    pub fn gradient() -> Self {
        CompilerConfig { controlled_rotation: true, power: true, generalized_rotation: true, ..Default::default() }
    }

    pub fn all() -> Self {
        CompilerConfig {
            controlled_rotation: true,
            power: true,
            generalized_rotation: true,
            multi_control: true,
            exp_pauli_to_cnot_ladder: true,
        }
    }

    /// Parse a comma-separated pass list such as `power,controlled_rotation`.
    /// `all` and `gradient` select the presets.
    pub fn from_list(list: &str) -> Result<Self, CompileError> {
        let mut config = CompilerConfig::default();
        for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match name {
                "controlled_rotation" => config.controlled_rotation = true,
                "power" => config.power = true,
                "generalized_rotation" => config.generalized_rotation = true,
                "multi_control" => config.multi_control = true,
                "exp_pauli" | "exp_pauli_to_cnot_ladder" => config.exp_pauli_to_cnot_ladder = true,
                "all" => config = CompilerConfig::all(),
                "gradient" => config = CompilerConfig::gradient(),
                other => return Err(CompileError::UnknownPass(other.to_string())),
            }
        }
        Ok(config)
    }
}

pub fn compile(circuit: &QCircuit, config: &CompilerConfig) -> Result<QCircuit, CompileError> {
    let mut u = circuit.clone();
    if config.generalized_rotation {
        u = compile_generalized_rotation(&u)?;
    }
    if config.multi_control {
        u = compile_multi_control(&u)?;
    }
    if config.power {
        u = compile_power(&u)?;
    }
    if config.controlled_rotation {
        u = compile_controlled_rotation(&u)?;
    }
    if config.exp_pauli_to_cnot_ladder {
        u = compile_exp_pauli(&u)?;
    }
    Ok(u)
}

/// True for gates the shift rule handles directly: uncontrolled Rx, Ry, Rz,
/// Phase and ExpPauli.
pub fn is_shift_compatible(gate: &Gate) -> bool {
    !gate.kind().is_parametrized()
        || (!gate.is_controlled()
            && matches!(gate.kind(), GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::Phase | GateKind::ExpPauli))
}

fn rewrite(
    circuit: &QCircuit,
    mut f: impl FnMut(&Gate) -> Result<Option<QCircuit>, CompileError>,
) -> Result<QCircuit, CompileError> {
    let mut out = QCircuit::new();
    for gate in circuit.gates() {
        match f(gate)? {
            Some(replacement) => out += replacement,
            None => out.push(gate.clone()),
        }
    }
    Ok(out)
}

fn single(
    kind: GateKind,
    target: usize,
    controls: &[usize],
    parameter: Option<Expr>,
) -> Result<QCircuit, CompileError> {
    Ok(Gate::new(kind, vec![target], controls.to_vec(), parameter)?.into())
}

fn half(e: &Expr) -> Expr {
    e * 0.5
}

/// Each GeneralizedRotation becomes its Trotter sequence of ExpPauli gates,
/// keeping its controls.
pub fn compile_generalized_rotation(circuit: &QCircuit) -> Result<QCircuit, CompileError> {
    rewrite(circuit, |g| {
        if g.kind() != GateKind::GeneralizedRotation {
            return Ok(None);
        }
        let generator = g.generator().expect("generator gate");
        let angle = g.parameter().expect("validated parameter").clone();
        Ok(Some(trotterized_controlled(generator, angle, g.trotter_steps(), g.controls())?))
    })
}

/// `A^t = e^{iπt/2} R_A(πt)` for A ∈ {X, Y, Z, H}. The phase becomes
/// `Phase(πt/2)` on the last control of a controlled gate and an
/// identity-word ExpPauli otherwise. The H axis `(X+Z)/√2` is reached by
/// conjugating Rz with uncontrolled `Ry(∓π/4)`.
pub fn compile_power(circuit: &QCircuit) -> Result<QCircuit, CompileError> {
    rewrite(circuit, |g| {
        let GateKind::Power(base) = g.kind() else {
            return Ok(None);
        };
        let kind = match base {
            PowerBase::X => GateKind::Rx,
            PowerBase::Y => GateKind::Ry,
            PowerBase::Z | PowerBase::H => GateKind::Rz,
        };
        let t = g.parameter().expect("validated parameter");
        let target = g.targets()[0];
        let mut out = QCircuit::new();
        match g.controls().split_last() {
            Some((&last, rest)) => out += single(GateKind::Phase, last, rest, Some(t * (PI / 2.0)))?,
            None => out.push(Gate::exp_pauli(PauliString::identity(1.0), -(t * PI), vec![])?),
        }
        let tilt = |sign: f64| single(GateKind::Ry, target, &[], Some(Expr::constant(sign * PI / 4.0)));
        if base == PowerBase::H {
            out += tilt(-1.0)?;
        }
        out += single(kind, target, g.controls(), Some(t * PI))?;
        if base == PowerBase::H {
            out += tilt(1.0)?;
        }
        Ok(Some(out))
    })
}

/// Lower controlled Rx, Ry, Rz, Phase and ExpPauli gates to uncontrolled
/// rotations and multi-controlled X gates.
///
/// With controls `C' ∪ {c}`, `C-Rz(θ)` becomes
/// `C'-Rz(θ/2) · C-X · C'-Rz(-θ/2) · C-X` and recurses on `C'`. Rx and Ry
/// conjugate by fixed Clifford basis changes; Phase splits into a phase on
/// `c` and a controlled Rz; ExpPauli maps onto a CNOT ladder around a
/// controlled Rz on its last qubit.
pub fn compile_controlled_rotation(circuit: &QCircuit) -> Result<QCircuit, CompileError> {
    rewrite(circuit, |g| {
        if !g.is_controlled()
            || !matches!(g.kind(), GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::Phase | GateKind::ExpPauli)
        {
            return Ok(None);
        }
        lower_controlled(g).map(Some)
    })
}

fn lower_controlled(g: &Gate) -> Result<QCircuit, CompileError> {
    let controls = g.controls();
    if controls.is_empty() {
        return Ok(g.clone().into());
    }
    let theta = g.parameter().expect("validated parameter");
    let (&c, rest) = controls.split_last().expect("nonempty controls");
    let mut out = QCircuit::new();
    match g.kind() {
        GateKind::Rz => {
            let t = g.targets()[0];
            out += lower_controlled(&Gate::new(GateKind::Rz, vec![t], rest.to_vec(), Some(half(theta)))?)?;
            out += single(GateKind::X, t, controls, None)?;
            out += lower_controlled(&Gate::new(GateKind::Rz, vec![t], rest.to_vec(), Some(-half(theta)))?)?;
            out += single(GateKind::X, t, controls, None)?;
        }
        GateKind::Rx => {
            let t = g.targets()[0];
            out += single(GateKind::H, t, &[], None)?;
            out += lower_controlled(&Gate::new(GateKind::Rz, vec![t], controls.to_vec(), Some(theta.clone()))?)?;
            out += single(GateKind::H, t, &[], None)?;
        }
        GateKind::Ry => {
            // S Rx S† = Ry
            let t = g.targets()[0];
            out += single(GateKind::Phase, t, &[], Some(Expr::constant(-PI / 2.0)))?;
            out += single(GateKind::H, t, &[], None)?;
            out += lower_controlled(&Gate::new(GateKind::Rz, vec![t], controls.to_vec(), Some(theta.clone()))?)?;
            out += single(GateKind::H, t, &[], None)?;
            out += single(GateKind::S, t, &[], None)?;
        }
        GateKind::Phase => {
            // Phase(φ) = e^{iφ/2} Rz(φ)
            let t = g.targets()[0];
            out += lower_controlled(&Gate::new(GateKind::Phase, vec![c], rest.to_vec(), Some(half(theta)))?)?;
            out += lower_controlled(&Gate::new(GateKind::Rz, vec![t], controls.to_vec(), Some(theta.clone()))?)?;
        }
        GateKind::ExpPauli => {
            let term = g.generator().expect("generator gate").terms().first().cloned();
            match term {
                None => {}
                Some(term) if term.word.is_identity() => {
                    // exp(-iθc/2) is a phase on the control register.
                    let phi = -(theta * term.coeff.re) * 0.5;
                    out += lower_controlled(&Gate::new(GateKind::Phase, vec![c], rest.to_vec(), Some(phi))?)?;
                }
                Some(term) => {
                    let angle = scaled(theta, term.coeff.re);
                    out += pauli_ladder(&term.word, |last| {
                        lower_controlled(&Gate::new(GateKind::Rz, vec![last], controls.to_vec(), Some(angle.clone()))?)
                    })?;
                }
            }
        }
        _ => unreachable!("only rotations are lowered"),
    }
    Ok(out)
}

fn scaled(theta: &Expr, c: f64) -> Expr {
    if c == 1.0 {
        theta.clone()
    } else {
        theta * c
    }
}

/// `B† · L† · middle(last) · L · B` in circuit order `B, L, middle, L†, B†`:
/// B maps every factor to Z (H for X, Rx(π/2) for Y) and L is a CNOT
/// ladder accumulating the parity on the last support qubit.
fn pauli_ladder(
    word: &PauliWord,
    middle: impl FnOnce(usize) -> Result<QCircuit, CompileError>,
) -> Result<QCircuit, CompileError> {
    let factors = word.factors();
    let mut basis = QCircuit::new();
    let mut unbasis = QCircuit::new();
    for &(q, axis) in factors {
        match axis {
            PauliAxis::X => {
                basis += single(GateKind::H, q, &[], None)?;
                unbasis += single(GateKind::H, q, &[], None)?;
            }
            PauliAxis::Y => {
                basis += single(GateKind::Rx, q, &[], Some(Expr::constant(PI / 2.0)))?;
                unbasis += single(GateKind::Rx, q, &[], Some(Expr::constant(-PI / 2.0)))?;
            }
            PauliAxis::Z => {}
        }
    }
    let mut ladder = QCircuit::new();
    for w in factors.windows(2) {
        ladder += single(GateKind::X, w[1].0, &[w[0].0], None)?;
    }
    let last = factors.last().expect("non-identity word").0;
    let mut out = basis;
    out += ladder.clone();
    out += middle(last)?;
    out += QCircuit::from_gates(ladder.gates().iter().rev().cloned().collect());
    out += unbasis;
    Ok(out)
}

/// Lower every non-identity ExpPauli to basis changes, a CNOT ladder and an
/// Rz. Controlled ones keep their controls on the Rz only.
pub fn compile_exp_pauli(circuit: &QCircuit) -> Result<QCircuit, CompileError> {
    rewrite(circuit, |g| {
        if g.kind() != GateKind::ExpPauli {
            return Ok(None);
        }
        let Some(term) = g.generator().expect("generator gate").terms().first().cloned() else {
            return Ok(None);
        };
        if term.word.is_identity() {
            return Ok(None);
        }
        let angle = scaled(g.parameter().expect("validated parameter"), term.coeff.re);
        let controls = g.controls().to_vec();
        pauli_ladder(&term.word, |last| single(GateKind::Rz, last, &controls, Some(angle))).map(Some)
    })
}

/// Lower gates with two or more controls, and controlled SWAPs, to gates
/// with at most one control, without ancillas.
///
/// `C{a,b}-U = C_b-V · C_a-X_b · C_b-V† · C_a-X_b · C_a-V` with `V² = U`,
/// applied recursively (for more controls `a` is the remaining control
/// set). Toffoli and CCZ use the standard 6-CNOT circuit. SWAP is first
/// split into three CNOTs.
pub fn compile_multi_control(circuit: &QCircuit) -> Result<QCircuit, CompileError> {
    rewrite(circuit, |g| {
        if !needs_multi_control(g) {
            return Ok(None);
        }
        lower_multi(g).map(Some)
    })
}

fn needs_multi_control(g: &Gate) -> bool {
    g.controls().len() >= 2 || (g.kind() == GateKind::Swap && g.is_controlled())
}

fn lower_multi(g: &Gate) -> Result<QCircuit, CompileError> {
    let controls = g.controls();
    if !needs_multi_control(g) {
        return Ok(g.clone().into());
    }
    if g.kind() == GateKind::GeneralizedRotation {
        let generator = g.generator().expect("generator gate");
        let steps = trotterized_controlled(
            generator,
            g.parameter().expect("validated parameter").clone(),
            g.trotter_steps(),
            controls,
        )?;
        let mut out = QCircuit::new();
        for gate in steps.gates() {
            out += lower_multi(gate)?;
        }
        return Ok(out);
    }
    if g.kind() == GateKind::Swap {
        let (a, b) = (g.targets()[0], g.targets()[1]);
        let mut out = QCircuit::new();
        for (c, t) in [(b, a), (a, b), (b, a)] {
            let mut cs = controls.to_vec();
            cs.push(c);
            out += lower_multi(&Gate::new(GateKind::X, vec![t], cs, None)?)?;
        }
        return Ok(out);
    }
    if controls.len() == 2 && matches!(g.kind(), GateKind::X | GateKind::Z) {
        return toffoli_like(g.kind(), controls[0], controls[1], g.targets()[0]);
    }
    let (&b, a) = controls.split_last().expect("two or more controls");
    let v = square_root(g)?;
    let v_dag = v.dagger();
    let mut out = QCircuit::new();
    out += lower_multi(&v.with_controls(vec![b])?)?;
    out += lower_multi(&Gate::new(GateKind::X, vec![b], a.to_vec(), None)?)?;
    out += lower_multi(&v_dag.with_controls(vec![b])?)?;
    out += lower_multi(&Gate::new(GateKind::X, vec![b], a.to_vec(), None)?)?;
    out += lower_multi(&v.with_controls(a.to_vec())?)?;
    Ok(out)
}

/// Uncontrolled-form gate `V` with `V² = U` (including phase).
fn square_root(g: &Gate) -> Result<Gate, CompileError> {
    let u = g.with_controls(vec![])?;
    let power = |base: PowerBase, t: Expr| Gate::new(GateKind::Power(base), u.targets().to_vec(), vec![], Some(t));
    Ok(match u.kind() {
        GateKind::X => power(PowerBase::X, Expr::constant(0.5))?,
        GateKind::Y => power(PowerBase::Y, Expr::constant(0.5))?,
        GateKind::Z => power(PowerBase::Z, Expr::constant(0.5))?,
        GateKind::H => power(PowerBase::H, Expr::constant(0.5))?,
        GateKind::S => Gate::new(GateKind::T, u.targets().to_vec(), vec![], None)?,
        GateKind::T => Gate::new(GateKind::Phase, u.targets().to_vec(), vec![], Some(Expr::constant(PI / 8.0)))?,
        GateKind::Power(base) => power(base, u.parameter().expect("validated parameter") * 0.5)?,
        GateKind::Rx
        | GateKind::Ry
        | GateKind::Rz
        | GateKind::Phase
        | GateKind::ExpPauli
        | GateKind::GeneralizedRotation => u.map_parameter(half),
        GateKind::Swap => unreachable!("swap is split before"),
    })
}

/// Toffoli (X) or CCZ (Z) from 6 CNOTs, T gates and Hadamards.
fn toffoli_like(kind: GateKind, a: usize, b: usize, t: usize) -> Result<QCircuit, CompileError> {
    let h = |q| single(GateKind::H, q, &[], None);
    let tt = |q| single(GateKind::T, q, &[], None);
    let tdg = |q| single(GateKind::Phase, q, &[], Some(Expr::constant(-PI / 4.0)));
    let cx = |c, q| single(GateKind::X, q, &[c], None);
    let mut out = QCircuit::new();
    if kind == GateKind::X {
        out += h(t)?;
    }
    for part in [cx(b, t)?, tdg(t)?, cx(a, t)?, tt(t)?, cx(b, t)?, tdg(t)?, cx(a, t)?, tt(b)?, tt(t)?] {
        out += part;
    }
    if kind == GateKind::X {
        out += h(t)?;
    }
    for part in [cx(a, b)?, tt(a)?, tdg(b)?, cx(a, b)?] {
        out += part;
    }
    Ok(out)
}

/// Pauli word and effective angle of an ExpPauli gate, with the
/// coefficient folded into the angle.
pub fn normalized_exp_pauli(gate: &Gate) -> Option<(PauliWord, Expr)> {
    if gate.kind() != GateKind::ExpPauli {
        return None;
    }
    let theta = gate.parameter()?;
    let term = gate.generator()?.terms().first()?.clone();
    Some((term.word, scaled(theta, term.coeff.re)))
}

pub(crate) fn unit_exp_pauli(word: PauliWord, angle: Expr) -> Result<Gate, CircuitError> {
    Gate::exp_pauli(PauliString::new(word, Complex64::new(1.0, 0.0)), angle, vec![])
}
