//! Molecular Hamiltonians, UCC excitations, the UpCCGSD ansatz and
//! projected objectives for excited states.
//!
//! Spin orbitals are interleaved: spatial orbital `p` with spin up is
//! qubit `2p`, with spin down qubit `2p + 1`.

mod fermion;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use fermion::{jordan_wigner, FermionOperator, Ladder};

use crate::circuit::gates::{generalized_rotation, x};
use crate::circuit::{CircuitError, QCircuit};
use crate::expr::{Assignment, Expr, Variable};
use crate::objective::{make_expectation, ExecutionConfig, Objective, ObjectiveError};
use crate::optimize::{initial_assignment, minimize, OptimizeError, OptimizerConfig};
use crate::pauli::{all_zero_projector, QubitHamiltonian};
use crate::simulator::{expectation, SimulatorError};

/// Tolerance for the symmetry checks on integrals.
pub const SYMMETRY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum ChemistryError {
    #[error("{0}")]
    Dimension(String),
    #[error("integrals break symmetry: {0}")]
    Symmetry(String),
    #[error("invalid active space: {0}")]
    ActiveSpace(String),
    #[error("orbital {0} appears twice in an excitation")]
    RepeatedIndex(usize),
    #[error("excitation needs at least one index pair")]
    EmptyExcitation,
    #[error("ansatz needs at least {0}")]
    Ansatz(&'static str),
    #[error("circuit acts on {circuit} qubits but the register has {register}")]
    RegisterMismatch { circuit: usize, register: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Objective(#[from] ObjectiveError),
    #[error(transparent)]
    Optimize(#[from] OptimizeError),
    #[error(transparent)]
    Simulator(#[from] SimulatorError),
    #[error("molecule file: {0}")]
    Io(#[from] std::io::Error),
    #[error("molecule JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Electronic-structure input in an orthonormal spatial-orbital basis.
/// `h` is row-major `n×n`; `g` is row-major `n⁴` in Mulliken order `(pq|rs)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Molecule {
    pub n_orbitals: usize,
    pub n_electrons: usize,
    pub e_nuc: f64,
    pub h: Vec<f64>,
    pub g: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub active: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_occ: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<String>,
    /// Energies computed by the program that produced the integrals.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub reference_energies: BTreeMap<String, f64>,
}

impl Molecule {
    /// Validated molecule from dense integrals.
    pub fn new(
        n_orbitals: usize,
        n_electrons: usize,
        e_nuc: f64,
        h: Vec<f64>,
        g: Vec<f64>,
    ) -> Result<Self, ChemistryError> {
        let m = Molecule {
            n_orbitals,
            n_electrons,
            e_nuc,
            h,
            g,
            active: None,
            reference_occ: None,
            geometry: None,
            reference_energies: BTreeMap::new(),
        };
        m.validate()?;
        Ok(m)
    }

    pub fn from_json(text: &str) -> Result<Self, ChemistryError> {
        let m: Molecule = serde_json::from_str(text)?;
        m.validate()?;
        Ok(m)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ChemistryError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("molecule serializes")
    }

    pub fn h(&self, p: usize, q: usize) -> f64 {
        self.h[p * self.n_orbitals + q]
    }

    /// Mulliken `(pq|rs)`.
    pub fn g(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        let n = self.n_orbitals;
        self.g[((p * n + q) * n + r) * n + s]
    }

    /// Doubly occupied spatial orbitals of the reference determinant.
    pub fn occupied(&self) -> Vec<usize> {
        self.reference_occ.clone().unwrap_or_else(|| (0..self.n_electrons / 2).collect())
    }

    pub fn validate(&self) -> Result<(), ChemistryError> {
        let n = self.n_orbitals;
        if n == 0 {
            return Err(ChemistryError::Dimension("no orbitals".into()));
        }
        if self.h.len() != n * n {
            return Err(ChemistryError::Dimension(format!("h has {} entries, expected {}", self.h.len(), n * n)));
        }
        if self.g.len() != n.pow(4) {
            return Err(ChemistryError::Dimension(format!("g has {} entries, expected {}", self.g.len(), n.pow(4))));
        }
        if !self.n_electrons.is_multiple_of(2) || self.n_electrons > 2 * n {
            return Err(ChemistryError::Dimension(format!(
                "{} electrons in {n} orbitals (closed shell required)",
                self.n_electrons
            )));
        }
        for p in 0..n {
            for q in 0..n {
                if (self.h(p, q) - self.h(q, p)).abs() > SYMMETRY_TOLERANCE {
                    return Err(ChemistryError::Symmetry(format!("h[{p}][{q}] != h[{q}][{p}]")));
                }
                for r in 0..n {
                    for s in 0..n {
                        let x = self.g(p, q, r, s);
                        for y in [self.g(q, p, r, s), self.g(p, q, s, r), self.g(r, s, p, q)] {
                            if (x - y).abs() > SYMMETRY_TOLERANCE {
                                return Err(ChemistryError::Symmetry(format!("({p}{q}|{r}{s})")));
                            }
                        }
                    }
                }
            }
        }
        for list in [&self.active, &self.reference_occ].into_iter().flatten() {
            if let Some(&bad) = list.iter().find(|&&p| p >= n) {
                return Err(ChemistryError::ActiveSpace(format!("orbital {bad} out of range")));
            }
            if list.iter().collect::<BTreeSet<_>>().len() != list.len() {
                return Err(ChemistryError::ActiveSpace("repeated orbital".into()));
            }
        }
        if let Some(occ) = &self.reference_occ {
            if 2 * occ.len() != self.n_electrons {
                return Err(ChemistryError::ActiveSpace(format!(
                    "{} occupied orbitals for {} electrons",
                    occ.len(),
                    self.n_electrons
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Up,
    Down,
}

/// Interleaved index: spin up at `2p`, spin down at `2p + 1`.
pub fn spin_orbital(spatial: usize, spin: Spin) -> usize {
    2 * spatial + usize::from(spin == Spin::Down)
}

pub fn spatial_orbital(spin_orbital: usize) -> (usize, Spin) {
    (spin_orbital / 2, if spin_orbital.is_multiple_of(2) { Spin::Up } else { Spin::Down })
}

/// Restrict to the active orbitals, folding frozen occupied orbitals into
/// the one-electron integrals and the constant. Inactive virtuals are
/// dropped. Without an active list the molecule is returned unchanged.
pub fn fold_active(mol: &Molecule) -> Result<Molecule, ChemistryError> {
    let Some(active) = &mol.active else {
        return Ok(mol.clone());
    };
    if active.is_empty() {
        return Err(ChemistryError::ActiveSpace("empty active space".into()));
    }
    mol.validate()?;
    let occupied = mol.occupied();
    let frozen: Vec<usize> = occupied.iter().copied().filter(|i| !active.contains(i)).collect();
    let mut e_frozen = 0.0;
    for &i in &frozen {
        e_frozen += 2.0 * mol.h(i, i);
        for &j in &frozen {
            e_frozen += 2.0 * mol.g(i, i, j, j) - mol.g(i, j, j, i);
        }
    }
    let n = active.len();
    let mut h = vec![0.0; n * n];
    for (a, &t) in active.iter().enumerate() {
        for (b, &u) in active.iter().enumerate() {
            h[a * n + b] =
                mol.h(t, u) + frozen.iter().map(|&i| 2.0 * mol.g(t, u, i, i) - mol.g(t, i, i, u)).sum::<f64>();
        }
    }
    let mut g = vec![0.0; n.pow(4)];
    for (a, &p) in active.iter().enumerate() {
        for (b, &q) in active.iter().enumerate() {
            for (c, &r) in active.iter().enumerate() {
                for (d, &s) in active.iter().enumerate() {
                    g[((a * n + b) * n + c) * n + d] = mol.g(p, q, r, s);
                }
            }
        }
    }
    let reference_occ: Vec<usize> = occupied.iter().filter_map(|i| active.iter().position(|a| a == i)).collect();
    Ok(Molecule {
        n_orbitals: n,
        n_electrons: 2 * reference_occ.len(),
        e_nuc: mol.e_nuc + e_frozen,
        h,
        g,
        active: None,
        reference_occ: Some(reference_occ),
        geometry: mol.geometry.clone(),
        reference_energies: mol.reference_energies.clone(),
    })
}

/// Second-quantized Hamiltonian over interleaved spin orbitals,
/// `Σ h a†a + ½ Σ ⟨kl|mn⟩ a†_k a†_l a_n a_m + e_nuc` with `⟨kl|mn⟩ = (km|ln)`.
pub fn make_fermionic_hamiltonian(mol: &Molecule) -> Result<FermionOperator, ChemistryError> {
    let mol = fold_active(mol)?;
    mol.validate()?;
    let n = mol.n_orbitals;
    let mut f = FermionOperator::identity(mol.e_nuc);
    for p in 0..n {
        for q in 0..n {
            let hpq = mol.h(p, q);
            if hpq == 0.0 {
                continue;
            }
            for s in 0..2 {
                f = f + FermionOperator::one_body(2 * p + s, 2 * q + s, hpq);
            }
        }
    }
    for k in 0..n {
        for l in 0..n {
            for m in 0..n {
                for nn in 0..n {
                    let v = mol.g(k, m, l, nn);
                    if v == 0.0 {
                        continue;
                    }
                    for s in 0..2 {
                        for t in 0..2 {
                            let (a, b, c, d) = (2 * k + s, 2 * l + t, 2 * m + s, 2 * nn + t);
                            if a == b || c == d {
                                continue;
                            }
                            f = f + FermionOperator::two_body(a, b, d, c, 0.5 * v);
                        }
                    }
                }
            }
        }
    }
    Ok(f)
}

/// Jordan-Wigner qubit Hamiltonian of the (active-space) molecule.
pub fn make_hamiltonian(mol: &Molecule) -> Result<QubitHamiltonian, ChemistryError> {
    Ok(jordan_wigner(&make_fermionic_hamiltonian(mol)?))
}

fn check_indices(indices: &[(usize, usize)]) -> Result<(), ChemistryError> {
    if indices.is_empty() {
        return Err(ChemistryError::EmptyExcitation);
    }
    let mut seen = BTreeSet::new();
    for &(p, q) in indices {
        for i in [p, q] {
            if !seen.insert(i) {
                return Err(ChemistryError::RepeatedIndex(i));
            }
        }
    }
    Ok(())
}

/// `i(Π_n a†_{p_n} a_{q_n} − h.c.)` for spin-orbital pairs `(p, q)`.
pub fn make_excitation_generator(indices: &[(usize, usize)]) -> Result<QubitHamiltonian, ChemistryError> {
    check_indices(indices)?;
    let product =
        indices.iter().fold(FermionOperator::identity(1.0), |acc, &(p, q)| acc * FermionOperator::one_body(p, q, 1.0));
    let g = (product.clone() - product.dagger()).scale(num_complex::Complex64::new(0.0, 1.0));
    Ok(jordan_wigner(&g))
}

/// `exp(-i angle/2 G)` for the excitation generator `G`, as one Trotter
/// step. Exact because the Pauli strings of `G` commute.
pub fn make_excitation_gate(indices: &[(usize, usize)], angle: impl Into<Expr>) -> Result<QCircuit, ChemistryError> {
    let g = make_excitation_generator(indices)?;
    Ok(generalized_rotation(&g, angle, 1)?)
}

/// X gates on the spin orbitals of the reference determinant.
pub fn prepare_reference(mol: &Molecule) -> QCircuit {
    let mut u = QCircuit::new();
    for p in mol.occupied() {
        u += x(spin_orbital(p, Spin::Up));
        u += x(spin_orbital(p, Spin::Down));
    }
    u
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UpccgsdOptions {
    pub layers: usize,
    pub include_singles: bool,
    /// Spin-up and spin-down singles share one variable.
    pub spin_adapted_singles: bool,
    /// Start from the reference determinant.
    pub include_reference: bool,
}

impl Default for UpccgsdOptions {
    fn default() -> Self {
        UpccgsdOptions { layers: 1, include_singles: true, spin_adapted_singles: true, include_reference: true }
    }
}

/// Paired doubles `D_p_q_l` and generalized singles `S_p_q_l` for every
/// active pair `p < q`, doubles first, repeated for each layer `l`.
pub fn make_upccgsd_ansatz(mol: &Molecule, options: UpccgsdOptions) -> Result<QCircuit, ChemistryError> {
    let mol = fold_active(mol)?;
    if options.layers == 0 {
        return Err(ChemistryError::Ansatz("one layer"));
    }
    if mol.n_orbitals < 2 {
        return Err(ChemistryError::Ansatz("two active orbitals"));
    }
    let mut u = if options.include_reference { prepare_reference(&mol) } else { QCircuit::new() };
    for layer in 0..options.layers {
        for p in 0..mol.n_orbitals {
            for q in p + 1..mol.n_orbitals {
                let d = Expr::var(&format!("D_{p}_{q}_{layer}"));
                u += make_excitation_gate(&[(2 * q, 2 * p), (2 * q + 1, 2 * p + 1)], d)?;
                if options.include_singles {
                    let (up, down) = if options.spin_adapted_singles {
                        let s = Expr::var(&format!("S_{p}_{q}_{layer}"));
                        (s.clone(), s)
                    } else {
                        (Expr::var(&format!("Su_{p}_{q}_{layer}")), Expr::var(&format!("Sd_{p}_{q}_{layer}")))
                    };
                    u += make_excitation_gate(&[(2 * q, 2 * p)], up)?;
                    u += make_excitation_gate(&[(2 * q + 1, 2 * p + 1)], down)?;
                }
            }
        }
    }
    Ok(u)
}

/// `⟨H⟩_U − Σ_i E_i ⟨P₀⟩_{U + U_i†}` where `P₀` projects every register
/// qubit onto `|0⟩`, so each penalty is `E_i |⟨0|U_i† U|0⟩|²`.
pub fn make_projected_objective(
    h: &QubitHamiltonian,
    u: &QCircuit,
    previous: &[(f64, QCircuit)],
) -> Result<Objective, ChemistryError> {
    let register = h.n_qubits().max(u.n_qubits());
    let mut objective = make_expectation(u, h, false)?;
    let projector = all_zero_projector(0..register);
    for (energy, ui) in previous {
        if ui.n_qubits() > register {
            return Err(ChemistryError::RegisterMismatch { circuit: ui.n_qubits(), register });
        }
        objective = objective - *energy * make_expectation(&(u.clone() + ui.dagger()), &projector, false)?;
    }
    Ok(objective)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExcitedState {
    /// `⟨H⟩` at the optimized parameters.
    pub energy: f64,
    /// Value of the projected objective at the optimum.
    pub objective: f64,
    pub assignment: Assignment,
    /// The round's circuit with its variables fixed.
    pub circuit: QCircuit,
}

/// Find `n_states` low-lying states one at a time. Round `k` relabels the
/// ansatz variables with label `k` and minimizes the objective projected
/// against all earlier states. The penalty only deflates states with
/// negative energy, so the targeted eigenvalues should be negative (shift
/// `h` by a constant otherwise).
pub fn excited_states(
    h: &QubitHamiltonian,
    ansatz: &QCircuit,
    n_states: usize,
    config: &OptimizerConfig,
    initial: &Assignment,
    execution: &ExecutionConfig,
) -> Result<Vec<ExcitedState>, ChemistryError> {
    let mut found: Vec<ExcitedState> = Vec::new();
    for round in 0..n_states {
        let label = round.to_string();
        let u = ansatz.relabel(&label);
        let renaming: HashMap<Variable, Variable> =
            ansatz.extract_variables().into_iter().map(|v| (v.clone(), v.relabeled(&label))).collect();
        let start: Assignment =
            initial.iter().map(|(v, x)| (renaming.get(v).cloned().unwrap_or_else(|| v.clone()), *x)).collect();
        let previous: Vec<(f64, QCircuit)> = found.iter().map(|s| (s.energy, s.circuit.clone())).collect();
        let objective = make_projected_objective(h, &u, &previous)?;
        let start = initial_assignment(&objective, Some(&start));
        let mut cfg = config.clone();
        cfg.variables = Some(objective.variables().into_iter().collect());
        let result = minimize(&objective, cfg, Some(&start), execution.clone())?;
        let energy = expectation(&u, h, &result.assignment)?;
        found.push(ExcitedState {
            energy,
            objective: result.energy,
            circuit: u.fix_variables(&result.assignment),
            assignment: result.assignment,
        });
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Assignment;
    use crate::optimize::Method;
    use crate::pauli::{parse_hamiltonian, to_matrix};
    use crate::simulator::unitary;
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    pub(crate) fn h2() -> Molecule {
        Molecule::from_json(include_str!("../../../../fixtures/h2_sto3g.json")).unwrap()
    }

    fn spectrum(h: &QubitHamiltonian, n: usize) -> Vec<f64> {
        let m = to_matrix(h, n).unwrap();
        let mut e: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
        e.sort_by(f64::total_cmp);
        e
    }

    fn toy(eps: f64, u: f64) -> Molecule {
        Molecule::new(1, 0, 0.0, vec![eps], vec![u]).unwrap()
    }

    #[test]
    fn single_orbital_spectrum() {
        let (eps, u) = (-0.7, 0.45);
        let e = spectrum(&make_hamiltonian(&toy(eps, u)).unwrap(), 2);
        let mut expected = vec![0.0, eps, eps, 2.0 * eps + u];
        expected.sort_by(f64::total_cmp);
        for (a, b) in e.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12, "{e:?}");
        }
    }

    #[test]
    fn constant_only() {
        let mol = Molecule::new(2, 2, 0.37, vec![0.0; 4], vec![0.0; 16]).unwrap();
        let h = make_hamiltonian(&mol).unwrap();
        assert!(h.approx_eq(&QubitHamiltonian::scalar(Complex64::new(0.37, 0.0)), 1e-14));
    }

    #[test]
    fn rejects_bad_integrals() {
        assert!(matches!(Molecule::new(2, 2, 0.0, vec![0.0; 3], vec![0.0; 16]), Err(ChemistryError::Dimension(_))));
        assert!(matches!(
            Molecule::new(2, 2, 0.0, vec![0.0, 1.0, 0.0, 0.0], vec![0.0; 16]),
            Err(ChemistryError::Symmetry(_))
        ));
        let mut g = vec![0.0; 16];
        g[1] = 0.3;
        assert!(matches!(Molecule::new(2, 2, 0.0, vec![0.0; 4], g), Err(ChemistryError::Symmetry(_))));
    }

    #[test]
    fn h2_ground_state_matches_reference_fci() {
        let mol = h2();
        let e = spectrum(&make_hamiltonian(&mol).unwrap(), 4);
        assert!((e[0] - mol.reference_energies["fci"]).abs() < 1e-8, "{}", e[0]);
    }

    #[test]
    fn excitation_generators() {
        let g = make_excitation_generator(&[(0, 1)]).unwrap();
        assert!(g.approx_eq(&parse_hamiltonian("0.5*Y(0)X(1) - 0.5*X(0)Y(1)").unwrap(), 1e-14));
        assert!(g.is_hermitian(1e-14));
        assert!(matches!(make_excitation_generator(&[(0, 1), (1, 2)]), Err(ChemistryError::RepeatedIndex(1))));
        assert!(matches!(make_excitation_generator(&[]), Err(ChemistryError::EmptyExcitation)));
    }

    #[test]
    fn excitation_gates_are_exact_exponentials() {
        for indices in [vec![(0, 1)], vec![(0, 2), (1, 3)], vec![(2, 0), (3, 1)]] {
            let g = make_excitation_generator(&indices).unwrap();
            for a in [0.0, 0.37, -1.9] {
                let u = unitary(&make_excitation_gate(&indices, a).unwrap(), &Assignment::new(), 4).unwrap();
                let exact = (to_matrix(&g, 4).unwrap() * Complex64::new(0.0, -a / 2.0)).exp();
                assert!((u - exact).norm() < 1e-12);
            }
        }
        let id = unitary(&make_excitation_gate(&[(0, 1)], 0.0).unwrap(), &Assignment::new(), 2).unwrap();
        assert!((id - DMatrix::identity(4, 4)).norm() < 1e-14);
    }

    #[test]
    fn upccgsd_structure() {
        let u = make_upccgsd_ansatz(&h2(), UpccgsdOptions::default()).unwrap();
        let names: Vec<String> = u.extract_variables().iter().map(|v| v.to_string()).collect();
        assert_eq!(names, ["D_0_1_0", "S_0_1_0"]);
        let three = Molecule::new(3, 2, 0.0, vec![0.0; 9], vec![0.0; 81]).unwrap();
        let u = make_upccgsd_ansatz(&three, UpccgsdOptions { include_reference: false, ..Default::default() }).unwrap();
        assert_eq!(u.len(), 9);
        assert_eq!(u.extract_variables().len(), 6);
        let two = make_upccgsd_ansatz(&three, UpccgsdOptions { layers: 2, ..Default::default() }).unwrap();
        assert_eq!(two.extract_variables().len(), 12);
        assert!(make_upccgsd_ansatz(&toy(0.1, 0.2), UpccgsdOptions::default()).is_err());
    }

    #[test]
    fn fold_active_identity_and_errors() {
        let mut mol = h2();
        mol.active = Some(vec![0, 1]);
        let folded = fold_active(&mol).unwrap();
        assert_eq!(folded.h, mol.h);
        assert_eq!(folded.e_nuc, mol.e_nuc);
        mol.active = Some(vec![]);
        assert!(fold_active(&mol).is_err());
    }

    #[test]
    fn frozen_core_matches_projected_spectrum() {
        let mut mol = h2();
        let full = to_matrix(&make_hamiltonian(&mol).unwrap(), 4).unwrap();
        // determinants with qubits 0 and 1 occupied: indices 0b11xx
        let block = full.view((12, 12), (4, 4)).into_owned();
        let mut e_block: Vec<f64> = block.symmetric_eigen().eigenvalues.iter().copied().collect();
        e_block.sort_by(f64::total_cmp);
        mol.active = Some(vec![1]);
        let folded = fold_active(&mol).unwrap();
        assert_eq!(folded.n_electrons, 0);
        let e = spectrum(&make_hamiltonian(&folded).unwrap(), 2);
        for (a, b) in e.iter().zip(&e_block) {
            assert!((a - b).abs() < 1e-10, "{e:?} vs {e_block:?}");
        }
    }

    #[test]
    fn projected_objective_examples() {
        let h = parse_hamiltonian("-1.0*Z(0) + 0.3*X(0)").unwrap();
        let u = crate::circuit::gates::ry(Expr::var("a"), 0);
        let plain = make_projected_objective(&h, &u, &[]).unwrap();
        assert_eq!(plain.expectation_values().len(), 1);
        let vars: Assignment = [("a", 0.4)].into_iter().collect();
        let e1 = expectation(&u, &h, &vars).unwrap();
        let fixed = u.fix_variables(&vars);
        let o = make_projected_objective(&h, &u, &[(e1, fixed)]).unwrap();
        assert!(o.evaluate(&vars).unwrap().abs() < 1e-12);
        let wide = crate::circuit::gates::x(3);
        assert!(matches!(
            make_projected_objective(&h, &u, &[(e1, wide)]),
            Err(ChemistryError::RegisterMismatch { .. })
        ));
    }

    #[test]
    fn excited_states_of_toy_hamiltonian() {
        let h = parse_hamiltonian("-1.0 - 0.5*Z(0) + 0.2*Z(1) + 0.3*X(0)X(1) + 0.15*Z(0)Z(1) + 0.1*X(0)").unwrap();
        let e = spectrum(&h, 2);
        assert!(e[1] < 0.0);
        let ansatz = crate::circuit::gates::ry(Expr::var("a"), 0)
            + crate::circuit::gates::ry(Expr::var("b"), 1)
            + crate::circuit::gates::cnot(0, 1)
            + crate::circuit::gates::ry(Expr::var("c"), 0)
            + crate::circuit::gates::ry(Expr::var("d"), 1);
        let init: Assignment = [("a", 0.3), ("b", 0.2), ("c", 0.1), ("d", 0.4)].into_iter().collect();
        let cfg = OptimizerConfig::new(Method::Adam, 0.05, 1500);
        let states = excited_states(&h, &ansatz, 2, &cfg, &init, &ExecutionConfig::default()).unwrap();
        assert!((states[0].energy - e[0]).abs() < 1e-4, "{} vs {}", states[0].energy, e[0]);
        assert!((states[1].energy - e[1]).abs() < 1e-4, "{} vs {}", states[1].energy, e[1]);
        let v0: Vec<_> = states[0].assignment.variables().cloned().collect();
        assert!(states[1].assignment.variables().all(|v| !v0.contains(v)));
    }
}
