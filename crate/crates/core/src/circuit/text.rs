//! Line-oriented circuit text format.
//!
//! ```text
//! # comment
//! H 0
//! CNOT 1 | 0                 # target 1, control 0
//! Ry(theta) 0
//! CRz(a/2) 1 | 0
//! Power(0.5, X) 2
//! SWAP 0 1
//! ExpPauli(0.5, X0Y1)
//! GeneralizedRotation(a, 0.5*X(0)X(1) + 0.5*Y(0)Y(1)) ; steps=2
//! ```
//!
//! Each line is `NAME[(args)] targets [| controls] [; steps=N]`. Parameters
//! are infix expressions (see [`crate::expr::parse_expr`]). ExpPauli and
//! GeneralizedRotation take their targets from the generator, given either
//! as a compact word (`X0Y1`) or in Hamiltonian text form. Aliases: `CNOT`
//! and `CX` (X with controls), `CZ`, `CRx`, `CRy`, `CRz`, `Toffoli`/`CCX`,
//! `Trotterized` (GeneralizedRotation).

use num_complex::Complex64;

use super::gates::parse_word;
use super::{CircuitError, Gate, GateKind, PowerBase, QCircuit};
use crate::expr::parse_expr;
use crate::pauli::{parse_hamiltonian, PauliString, QubitHamiltonian};

pub fn parse_circuit(text: &str) -> Result<QCircuit, CircuitError> {
    let mut circuit = QCircuit::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let gate = parse_line(line).map_err(|e| match e {
            CircuitError::Parse { message, .. } => CircuitError::Parse { line: k + 1, message },
            other => CircuitError::Parse { line: k + 1, message: other.to_string() },
        })?;
        circuit.push(gate);
    }
    Ok(circuit)
}

fn err(message: impl Into<String>) -> CircuitError {
    CircuitError::Parse { line: 0, message: message.into() }
}

fn split_args(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

fn qubit_list(s: &str) -> Result<Vec<usize>, CircuitError> {
    s.split_whitespace().map(|t| t.parse().map_err(|_| err(format!("bad qubit index '{t}'")))).collect()
}

fn parse_generator(s: &str) -> Result<QubitHamiltonian, CircuitError> {
    if s.contains('(') {
        Ok(parse_hamiltonian(s)?)
    } else {
        let word = parse_word(s)?;
        Ok(QubitHamiltonian::from_word(word, Complex64::new(1.0, 0.0)))
    }
}

fn parse_line(line: &str) -> Result<Gate, CircuitError> {
    let (body, steps) = match line.split_once(';') {
        Some((b, opt)) => {
            let opt = opt.trim();
            let n = opt
                .strip_prefix("steps")
                .and_then(|r| r.trim_start().strip_prefix('='))
                .ok_or_else(|| err(format!("unknown option '{opt}'")))?;
            let n: usize = n.trim().parse().map_err(|_| err("bad steps value"))?;
            (b.trim(), Some(n))
        }
        None => (line, None),
    };
    let name_end = body.find(|c: char| c == '(' || c.is_whitespace()).unwrap_or(body.len());
    let name = &body[..name_end];
    let mut rest = body[name_end..].trim_start();
    let mut args: Vec<&str> = Vec::new();
    if rest.starts_with('(') {
        let mut depth = 0;
        let mut close = None;
        for (i, c) in rest.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        close = Some(i);
                        break;
                    }
                }
                _ => {}
            }
        }
        let close = close.ok_or_else(|| err("unbalanced parentheses"))?;
        args = split_args(&rest[1..close]);
        rest = &rest[close + 1..];
    }
    let (targets, controls) = match rest.split_once('|') {
        Some((t, c)) => (qubit_list(t)?, qubit_list(c)?),
        None => (qubit_list(rest)?, Vec::new()),
    };
    let expr_arg = |k: usize| -> Result<crate::expr::Expr, CircuitError> {
        let a = args.get(k).ok_or_else(|| err(format!("{name} needs argument {}", k + 1)))?;
        Ok(parse_expr(a)?)
    };
    let need_args = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(err(format!("{name} takes {n} argument(s), got {}", args.len())))
        }
    };
    let need_controls = |n: usize| {
        if controls.len() >= n {
            Ok(())
        } else {
            Err(err(format!("{name} needs at least {n} control(s)")))
        }
    };
    if steps.is_some() && !matches!(name, "GeneralizedRotation" | "Trotterized") {
        return Err(err(format!("steps option is not valid for {name}")));
    }
    let simple =
        |kind: GateKind, param: Option<crate::expr::Expr>| Gate::new(kind, targets.clone(), controls.clone(), param);
    let gate = match name {
        "X" | "Y" | "Z" | "H" | "S" | "T" | "SWAP" => {
            need_args(0)?;
            let kind = match name {
                "X" => GateKind::X,
                "Y" => GateKind::Y,
                "Z" => GateKind::Z,
                "H" => GateKind::H,
                "S" => GateKind::S,
                "T" => GateKind::T,
                _ => GateKind::Swap,
            };
            simple(kind, None)?
        }
        "CNOT" | "CX" | "CZ" | "Toffoli" | "CCX" => {
            need_args(0)?;
            need_controls(if matches!(name, "Toffoli" | "CCX") { 2 } else { 1 })?;
            simple(if name == "CZ" { GateKind::Z } else { GateKind::X }, None)?
        }
        "Rx" | "Ry" | "Rz" | "Phase" | "CRx" | "CRy" | "CRz" => {
            need_args(1)?;
            if name.starts_with('C') {
                need_controls(1)?;
            }
            let kind = match name.trim_start_matches('C') {
                "Rx" => GateKind::Rx,
                "Ry" => GateKind::Ry,
                "Rz" => GateKind::Rz,
                _ => GateKind::Phase,
            };
            simple(kind, Some(expr_arg(0)?))?
        }
        "Power" => {
            need_args(2)?;
            let base = match args[1] {
                "X" => PowerBase::X,
                "Y" => PowerBase::Y,
                "Z" => PowerBase::Z,
                "H" => PowerBase::H,
                other => return Err(err(format!("unsupported power base '{other}'"))),
            };
            simple(GateKind::Power(base), Some(expr_arg(0)?))?
        }
        "ExpPauli" | "GeneralizedRotation" | "Trotterized" => {
            need_args(2)?;
            if !targets.is_empty() {
                return Err(err(format!("{name} takes its targets from the generator")));
            }
            let generator = parse_generator(args[1])?;
            let angle = expr_arg(0)?;
            if name == "ExpPauli" {
                if generator.len() > 1 {
                    return Err(CircuitError::NotAPauliString(generator.len()));
                }
                let term = generator.terms().first().cloned().unwrap_or_else(|| PauliString::identity(0.0));
                Gate::exp_pauli(term, angle, controls.clone())?
            } else {
                Gate::generalized_rotation(generator, angle, steps.unwrap_or(1), controls.clone())?
            }
        }
        other => return Err(err(format!("unknown gate '{other}'"))),
    };
    Ok(gate)
}

/// Canonical text; `parse_circuit(write_circuit(u)) == u` for circuits
/// whose parameters print as parseable expressions.
pub fn write_circuit(circuit: &QCircuit) -> String {
    let mut out = String::new();
    for g in circuit.gates() {
        let head = match g.kind() {
            GateKind::Power(base) => {
                let b = match base {
                    PowerBase::X => "X",
                    PowerBase::Y => "Y",
                    PowerBase::Z => "Z",
                    PowerBase::H => "H",
                };
                format!("Power({}, {b})", g.parameter().expect("power exponent"))
            }
            GateKind::ExpPauli | GateKind::GeneralizedRotation => format!(
                "{}({}, {})",
                g.kind().name(),
                g.parameter().expect("rotation angle"),
                g.generator().expect("generator")
            ),
            k if k.is_parametrized() => format!("{}({})", k.name(), g.parameter().expect("angle")),
            k => k.name().to_string(),
        };
        out.push_str(&head);
        if !matches!(g.kind(), GateKind::ExpPauli | GateKind::GeneralizedRotation) {
            for t in g.targets() {
                out.push_str(&format!(" {t}"));
            }
        }
        if g.is_controlled() {
            out.push_str(" |");
            for c in g.controls() {
                out.push_str(&format!(" {c}"));
            }
        }
        if g.kind() == GateKind::GeneralizedRotation {
            out.push_str(&format!(" ; steps={}", g.trotter_steps()));
        }
        out.push('\n');
    }
    out
}
