//! Qubit-wise commuting measurement groups and the sampled estimator.

use std::f64::consts::PI;

use thiserror::Error;

use crate::circuit::{Gate, GateKind, QCircuit};
use crate::expr::Expr;
use crate::pauli::{PauliAxis, PauliString, PauliWord, QubitHamiltonian};
use crate::simulator::SampleResult;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasurementError {
    #[error("group {0} has no counts")]
    EmptyCounts(usize),
    #[error("{groups} groups but {counts} count sets")]
    CountMismatch { groups: usize, counts: usize },
}

/// One simultaneously measurable set of terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MeasurementGroup {
    members: QubitHamiltonian,
    rotated: QubitHamiltonian,
    rotation: QCircuit,
}

impl MeasurementGroup {
    /// Build from terms that pairwise commute qubit-wise.
    pub fn new(members: Vec<PauliString>) -> Self {
        let mut basis: Vec<(usize, PauliAxis)> = Vec::new();
        for term in &members {
            for &(q, a) in term.word.factors() {
                if !basis.iter().any(|&(p, _)| p == q) {
                    basis.push((q, a));
                }
            }
        }
        basis.sort_by_key(|&(q, _)| q);
        let mut rotation = QCircuit::new();
        for &(q, axis) in &basis {
            match axis {
                PauliAxis::X => rotation.push(Gate::new(GateKind::H, vec![q], vec![], None).expect("single target")),
                PauliAxis::Y => rotation.push(
                    Gate::new(GateKind::Rx, vec![q], vec![], Some(Expr::constant(PI / 2.0))).expect("single target"),
                ),
                PauliAxis::Z => {}
            }
        }
        let rotated = members
            .iter()
            .map(|t| {
                let word =
                    PauliWord::new(t.word.factors().iter().map(|&(q, _)| (q, PauliAxis::Z))).expect("distinct qubits");
                PauliString::new(word, t.coeff)
            })
            .collect();
        MeasurementGroup {
            members: QubitHamiltonian::from_terms(members),
            rotated: QubitHamiltonian::from_terms(rotated),
            rotation,
        }
    }

    /// Original terms of this group.
    pub fn members(&self) -> &QubitHamiltonian {
        &self.members
    }

    /// Z/I-only operator measured after the rotation.
    pub fn rotated_hamiltonian(&self) -> &QubitHamiltonian {
        &self.rotated
    }

    /// Clifford circuit mapping each member onto its rotated term.
    pub fn basis_rotation(&self) -> &QCircuit {
        &self.rotation
    }

    /// `Σ_t c_t Σ_x (-1)^{parity of x on supp(t)} p(x)` for a distribution
    /// over basis indices of an `n_qubits` register.
    pub fn estimate_from(&self, n_qubits: usize, distribution: &[(usize, f64)]) -> f64 {
        self.rotated
            .terms()
            .iter()
            .map(|t| {
                let (_, mask, _) = t.word.masks(n_qubits);
                let parity_mean: f64 =
                    distribution.iter().map(|&(x, p)| if (x & mask).count_ones() % 2 == 0 { p } else { -p }).sum();
                t.coeff.re * parity_mean
            })
            .sum()
    }
}

/// True iff the two strings agree on every qubit both act on.
pub fn qubitwise_commute(a: &PauliString, b: &PauliString) -> bool {
    a.word.factors().iter().all(|&(q, axis)| b.word.axis(q).is_none_or(|other| other == axis))
}

/// Greedy coloring of the non-commutation graph, visiting terms by
/// descending degree with ties in term order. The identity term joins the
/// first group.
pub fn group_qwc(h: &QubitHamiltonian) -> Vec<MeasurementGroup> {
    let terms: Vec<&PauliString> = h.terms().iter().filter(|t| !t.word.is_identity()).collect();
    let identity: Option<PauliString> = h.terms().iter().find(|t| t.word.is_identity()).cloned();
    let n = terms.len();
    let conflict: Vec<Vec<bool>> =
        (0..n).map(|i| (0..n).map(|j| i != j && !qubitwise_commute(terms[i], terms[j])).collect()).collect();
    let degree: Vec<usize> = conflict.iter().map(|row| row.iter().filter(|&&c| c).count()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| degree[b].cmp(&degree[a]));
    let mut color = vec![usize::MAX; n];
    let mut n_colors = 0;
    for &v in &order {
        let used: Vec<usize> = (0..n).filter(|&u| conflict[v][u] && color[u] != usize::MAX).map(|u| color[u]).collect();
        let c = (0..).find(|c| !used.contains(c)).expect("unbounded colors");
        color[v] = c;
        n_colors = n_colors.max(c + 1);
    }
    let mut buckets: Vec<Vec<PauliString>> = vec![Vec::new(); n_colors.max(usize::from(identity.is_some()))];
    if let Some(id) = identity {
        buckets[0].push(id);
    }
    for (i, term) in terms.iter().enumerate() {
        buckets[color[i]].push((*term).clone());
    }
    buckets.into_iter().map(MeasurementGroup::new).collect()
}

/// One group per term (the unoptimized plan).
pub fn group_singletons(h: &QubitHamiltonian) -> Vec<MeasurementGroup> {
    h.terms().iter().map(|t| MeasurementGroup::new(vec![t.clone()])).collect()
}

/// Joint-count estimator over per-group samples.
pub fn estimate(groups: &[MeasurementGroup], counts: &[SampleResult]) -> Result<f64, MeasurementError> {
    if groups.len() != counts.len() {
        return Err(MeasurementError::CountMismatch { groups: groups.len(), counts: counts.len() });
    }
    let mut total = 0.0;
    for (k, (g, c)) in groups.iter().zip(counts).enumerate() {
        if c.total() == 0 {
            return Err(MeasurementError::EmptyCounts(k));
        }
        total += g.estimate_from(c.n_qubits(), &c.frequencies().collect::<Vec<_>>());
    }
    Ok(total)
}
