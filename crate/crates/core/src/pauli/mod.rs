//! Pauli strings and qubit Hamiltonians.
//!
//! A [`QubitHamiltonian`] is a complex-weighted sum of [`PauliString`]s. The
//! term list keeps first-appearance order: Trotter expansion and measurement
//! grouping both depend on it.

mod decompose;
pub(crate) mod dense;
mod parse;
mod symplectic;
mod wavefunction;

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

pub use decompose::{ketbra, matrix_to_operator, projector, sigma_minus, sigma_plus, split};
pub use dense::{to_matrix, to_matrix_with_limit, DEFAULT_DENSE_LIMIT};
pub use parse::parse_hamiltonian;
pub use symplectic::BinarySymplectic;
pub use wavefunction::{bitstring, QubitWaveFunction};

/// Coefficients below this magnitude are removed by [`QubitHamiltonian::simplify`].
pub const DROP_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PauliError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("qubit {0} appears twice in one term")]
    DuplicateQubit(usize),
    #[error("operator needs {needed} qubits, dense limit is {limit}")]
    DenseLimit { needed: usize, limit: usize },
    #[error("qubit count mismatch: {0} vs {1}")]
    QubitMismatch(usize, usize),
    #[error("bit-vector length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("empty wavefunction")]
    EmptyWaveFunction,
    #[error("heisenberg chain needs at least 2 qubits, got {0}")]
    ChainTooShort(usize),
}

/// Single-qubit Pauli axis. The identity is represented by absence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    /// Product `self · other` as `(phase, axis)`; `None` axis means identity.
    pub fn product(self, other: PauliAxis) -> (Complex64, Option<PauliAxis>) {
        use PauliAxis::*;
        let i = Complex64::i();
        match (self, other) {
            (a, b) if a == b => (Complex64::new(1.0, 0.0), None),
            (X, Y) => (i, Some(Z)),
            (Y, X) => (-i, Some(Z)),
            (Y, Z) => (i, Some(X)),
            (Z, Y) => (-i, Some(X)),
            (Z, X) => (i, Some(Y)),
            (X, Z) => (-i, Some(Y)),
            _ => unreachable!(),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            PauliAxis::X => 'X',
            PauliAxis::Y => 'Y',
            PauliAxis::Z => 'Z',
        }
    }
}

/// The operator part of a Pauli string: non-identity factors sorted by qubit.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliWord(Vec<(usize, PauliAxis)>);

impl PauliWord {
    pub fn identity() -> Self {
        PauliWord(Vec::new())
    }

    /// Build from `(qubit, axis)` pairs, rejecting repeated qubits.
    pub fn new(factors: impl IntoIterator<Item = (usize, PauliAxis)>) -> Result<Self, PauliError> {
        let mut v: Vec<_> = factors.into_iter().collect();
        v.sort_by_key(|(q, _)| *q);
        for w in v.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(PauliError::DuplicateQubit(w[0].0));
            }
        }
        Ok(PauliWord(v))
    }

    pub fn single(qubit: usize, axis: PauliAxis) -> Self {
        PauliWord(vec![(qubit, axis)])
    }

    pub fn factors(&self) -> &[(usize, PauliAxis)] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn axis(&self, qubit: usize) -> Option<PauliAxis> {
        self.0.binary_search_by_key(&qubit, |(q, _)| *q).ok().map(|k| self.0[k].1)
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|(q, _)| *q)
    }

    /// Highest qubit index + 1 (0 for the identity).
    pub fn n_qubits(&self) -> usize {
        self.0.last().map_or(0, |(q, _)| q + 1)
    }

    /// Product of two words as `(phase, word)`.
    pub fn product(&self, other: &PauliWord) -> (Complex64, PauliWord) {
        let mut phase = Complex64::new(1.0, 0.0);
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(b[j]);
                j += 1;
            } else {
                let (p, axis) = a[i].1.product(b[j].1);
                phase *= p;
                if let Some(axis) = axis {
                    out.push((a[i].0, axis));
                }
                i += 1;
                j += 1;
            }
        }
        (phase, PauliWord(out))
    }

    /// True when the two words commute as operators.
    pub fn commutes_with(&self, other: &PauliWord) -> bool {
        let anti = self.0.iter().filter(|(q, a)| other.axis(*q).is_some_and(|b| b != *a)).count();
        anti % 2 == 0
    }

    /// Bit masks `(flip, phase)` for a register of `n_qubits`, qubit 0 being
    /// the most significant bit. `flip` marks X/Y factors, `phase` marks Y/Z.
    pub fn masks(&self, n_qubits: usize) -> (usize, usize, u32) {
        let mut flip = 0usize;
        let mut phase = 0usize;
        let mut n_y = 0u32;
        for &(q, axis) in &self.0 {
            let bit = 1usize << (n_qubits - 1 - q);
            match axis {
                PauliAxis::X => flip |= bit,
                PauliAxis::Y => {
                    flip |= bit;
                    phase |= bit;
                    n_y += 1;
                }
                PauliAxis::Z => phase |= bit,
            }
        }
        (flip, phase, n_y)
    }
}

impl fmt::Display for PauliWord {
    /// Compact form `X0Y1`; the identity prints as `I`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "I");
        }
        for (q, a) in &self.0 {
            write!(f, "{}{}", a.symbol(), q)?;
        }
        Ok(())
    }
}

/// A complex-weighted Pauli word.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    pub word: PauliWord,
    pub coeff: Complex64,
}

impl PauliString {
    pub fn new(word: PauliWord, coeff: Complex64) -> Self {
        PauliString { word, coeff }
    }

    pub fn identity(coeff: f64) -> Self {
        PauliString::new(PauliWord::identity(), Complex64::new(coeff, 0.0))
    }

    pub fn product(&self, other: &PauliString) -> PauliString {
        let (phase, word) = self.word.product(&other.word);
        PauliString::new(word, phase * self.coeff * other.coeff)
    }
}

/// A linear combination of Pauli strings.
#[derive(Debug, Clone, Default)]
pub struct QubitHamiltonian {
    terms: Vec<PauliString>,
}

impl QubitHamiltonian {
    pub fn zero() -> Self {
        QubitHamiltonian { terms: Vec::new() }
    }

    pub fn identity() -> Self {
        Self::scalar(Complex64::new(1.0, 0.0))
    }

    pub fn scalar(c: Complex64) -> Self {
        Self::from_terms(vec![PauliString::new(PauliWord::identity(), c)])
    }

    /// Build and simplify.
    pub fn from_terms(terms: Vec<PauliString>) -> Self {
        let mut h = QubitHamiltonian { terms };
        h.simplify();
        h
    }

    pub fn x(q: usize) -> Self {
        Self::single(q, PauliAxis::X)
    }

    pub fn y(q: usize) -> Self {
        Self::single(q, PauliAxis::Y)
    }

    pub fn z(q: usize) -> Self {
        Self::single(q, PauliAxis::Z)
    }

    pub fn single(q: usize, axis: PauliAxis) -> Self {
        QubitHamiltonian { terms: vec![PauliString::new(PauliWord::single(q, axis), Complex64::new(1.0, 0.0))] }
    }

    /// Single-term operator from a word.
    pub fn from_word(word: PauliWord, coeff: Complex64) -> Self {
        Self::from_terms(vec![PauliString::new(word, coeff)])
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Implicit register size: highest qubit index + 1.
    pub fn n_qubits(&self) -> usize {
        self.terms.iter().map(|t| t.word.n_qubits()).max().unwrap_or(0)
    }

    pub fn qubits(&self) -> Vec<usize> {
        let mut qs: Vec<usize> = self.terms.iter().flat_map(|t| t.word.qubits()).collect();
        qs.sort_unstable();
        qs.dedup();
        qs
    }

    /// Merge equal words (keeping first-appearance order) and drop
    /// coefficients below [`DROP_TOLERANCE`].
    pub fn simplify(&mut self) {
        let mut index: HashMap<PauliWord, usize> = HashMap::with_capacity(self.terms.len());
        let mut merged: Vec<PauliString> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            match index.get(&t.word) {
                Some(&k) => merged[k].coeff += t.coeff,
                None => {
                    index.insert(t.word.clone(), merged.len());
                    merged.push(t);
                }
            }
        }
        merged.retain(|t| t.coeff.norm() >= DROP_TOLERANCE);
        self.terms = merged;
    }

    /// Hermitian within `tol` on every coefficient's imaginary part.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.iter().all(|t| t.coeff.im.abs() < tol)
    }

    pub fn dagger(&self) -> Self {
        QubitHamiltonian {
            terms: self.terms.iter().map(|t| PauliString::new(t.word.clone(), t.coeff.conj())).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_terms(self.terms.iter().map(|t| PauliString::new(t.word.clone(), t.coeff * c)).collect())
    }

    /// Term-wise product, simplified.
    pub fn multiply(&self, other: &QubitHamiltonian) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                out.push(a.product(b));
            }
        }
        Self::from_terms(out)
    }

    /// Coefficient of `word`, zero if absent.
    pub fn coefficient(&self, word: &PauliWord) -> Complex64 {
        self.terms.iter().find(|t| &t.word == word).map_or(Complex64::new(0.0, 0.0), |t| t.coeff)
    }

    /// Same operator up to `tol` per coefficient, independent of term order.
    pub fn approx_eq(&self, other: &QubitHamiltonian, tol: f64) -> bool {
        let diff = self.clone() - other.clone();
        diff.terms.iter().all(|t| t.coeff.norm() < tol)
    }

    /// Rename qubits through `map`.
    pub fn map_qubits(&self, map: impl Fn(usize) -> usize) -> Result<Self, PauliError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let word = PauliWord::new(t.word.factors().iter().map(|&(q, a)| (map(q), a)))?;
            terms.push(PauliString::new(word, t.coeff));
        }
        Ok(Self::from_terms(terms))
    }
}

/// `Q+ = |0⟩⟨0| = ½(1 + Z)`.
pub fn paulis_qp(qubit: usize) -> QubitHamiltonian {
    QubitHamiltonian::from_terms(vec![
        PauliString::identity(0.5),
        PauliString::new(PauliWord::single(qubit, PauliAxis::Z), Complex64::new(0.5, 0.0)),
    ])
}

/// `Q- = |1⟩⟨1| = ½(1 - Z)`.
pub fn paulis_qm(qubit: usize) -> QubitHamiltonian {
    QubitHamiltonian::from_terms(vec![
        PauliString::identity(0.5),
        PauliString::new(PauliWord::single(qubit, PauliAxis::Z), Complex64::new(-0.5, 0.0)),
    ])
}

/// Projector onto `|0…0⟩` over the given qubits.
pub fn all_zero_projector(qubits: impl IntoIterator<Item = usize>) -> QubitHamiltonian {
    qubits.into_iter().fold(QubitHamiltonian::identity(), |acc, q| acc.multiply(&paulis_qp(q)))
}

/// Heisenberg chain `Σ Jx XX + Jy YY + Jz ZZ + Σ h Z` on an open chain;
/// `periodic` adds the coupling between the last and first qubit.
pub fn heisenberg(
    n_qubits: usize,
    jx: f64,
    jy: f64,
    jz: f64,
    h: f64,
    periodic: bool,
) -> Result<QubitHamiltonian, PauliError> {
    if n_qubits < 2 {
        return Err(PauliError::ChainTooShort(n_qubits));
    }
    let mut bonds: Vec<(usize, usize)> = (0..n_qubits - 1).map(|k| (k, k + 1)).collect();
    if periodic && n_qubits > 2 {
        bonds.push((n_qubits - 1, 0));
    }
    let mut terms = Vec::new();
    for (j, axis) in [(jx, PauliAxis::X), (jy, PauliAxis::Y), (jz, PauliAxis::Z)] {
        for &(a, b) in &bonds {
            let word = PauliWord::new([(a, axis), (b, axis)])?;
            terms.push(PauliString::new(word, Complex64::new(j, 0.0)));
        }
    }
    for k in 0..n_qubits {
        terms.push(PauliString::new(PauliWord::single(k, PauliAxis::Z), Complex64::new(h, 0.0)));
    }
    Ok(QubitHamiltonian::from_terms(terms))
}

impl PartialEq for QubitHamiltonian {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for QubitHamiltonian {}

impl Hash for QubitHamiltonian {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.terms.len().hash(state);
        for t in &self.terms {
            t.word.hash(state);
            t.coeff.re.to_bits().hash(state);
            t.coeff.im.to_bits().hash(state);
        }
    }
}

impl Add for QubitHamiltonian {
    type Output = QubitHamiltonian;
    fn add(mut self, rhs: QubitHamiltonian) -> QubitHamiltonian {
        self.terms.extend(rhs.terms);
        self.simplify();
        self
    }
}

impl Sub for QubitHamiltonian {
    type Output = QubitHamiltonian;
    fn sub(self, rhs: QubitHamiltonian) -> QubitHamiltonian {
        self + (-rhs)
    }
}

impl Neg for QubitHamiltonian {
    type Output = QubitHamiltonian;
    fn neg(mut self) -> QubitHamiltonian {
        for t in &mut self.terms {
            t.coeff = -t.coeff;
        }
        self
    }
}

impl Mul for QubitHamiltonian {
    type Output = QubitHamiltonian;
    fn mul(self, rhs: QubitHamiltonian) -> QubitHamiltonian {
        self.multiply(&rhs)
    }
}

impl Mul<f64> for QubitHamiltonian {
    type Output = QubitHamiltonian;
    fn mul(self, rhs: f64) -> QubitHamiltonian {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

impl Mul<Complex64> for QubitHamiltonian {
    type Output = QubitHamiltonian;
    fn mul(self, rhs: Complex64) -> QubitHamiltonian {
        self.scale(rhs)
    }
}

impl Mul<QubitHamiltonian> for f64 {
    type Output = QubitHamiltonian;
    fn mul(self, rhs: QubitHamiltonian) -> QubitHamiltonian {
        rhs * self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_qubit_products() {
        let xy = QubitHamiltonian::x(0).multiply(&QubitHamiltonian::y(0));
        assert_eq!(xy, QubitHamiltonian::from_word(PauliWord::single(0, PauliAxis::Z), c(0.0, 1.0)));
        let xx = QubitHamiltonian::x(0).multiply(&QubitHamiltonian::x(0));
        assert_eq!(xx, QubitHamiltonian::identity());
        let yz = QubitHamiltonian::y(0) * QubitHamiltonian::z(0);
        assert_eq!(yz.coefficient(&PauliWord::single(0, PauliAxis::X)), c(0.0, 1.0));
        let zx = QubitHamiltonian::z(0) * QubitHamiltonian::x(0);
        assert_eq!(zx.coefficient(&PauliWord::single(0, PauliAxis::Y)), c(0.0, 1.0));
    }

    #[test]
    fn sum_squared_is_twice_identity() {
        let s = QubitHamiltonian::x(0) + QubitHamiltonian::z(0);
        let sq = s.multiply(&s);
        assert!(sq.approx_eq(&(2.0 * QubitHamiltonian::identity()), 1e-15));
        assert_eq!(sq.len(), 1);
    }

    #[test]
    fn projector_pair_is_complete() {
        assert_eq!(paulis_qp(0).coefficient(&PauliWord::identity()), c(0.5, 0.0));
        assert_eq!(paulis_qp(0).coefficient(&PauliWord::single(0, PauliAxis::Z)), c(0.5, 0.0));
        assert_eq!(paulis_qm(0).coefficient(&PauliWord::single(0, PauliAxis::Z)), c(-0.5, 0.0));
        assert_eq!(paulis_qp(0) + paulis_qm(0), QubitHamiltonian::identity());
    }

    #[test]
    fn heisenberg_open_chain() {
        let h = heisenberg(2, 1.0, 1.0, 1.0, 0.0, false).unwrap();
        assert_eq!(h.to_string(), "1.0*X(0)X(1) + 1.0*Y(0)Y(1) + 1.0*Z(0)Z(1)");
        let h = heisenberg(2, 0.0, 0.0, 0.0, 1.0, false).unwrap();
        assert_eq!(h.to_string(), "1.0*Z(0) + 1.0*Z(1)");
        let h = heisenberg(3, 1.0, 0.0, 0.0, 0.0, false).unwrap();
        assert_eq!(h.to_string(), "1.0*X(0)X(1) + 1.0*X(1)X(2)");
        let h = heisenberg(3, 1.0, 0.0, 0.0, 0.0, true).unwrap();
        assert_eq!(h.len(), 3);
        assert!(matches!(heisenberg(1, 1.0, 1.0, 1.0, 0.0, false), Err(PauliError::ChainTooShort(1))));
    }

    #[test]
    fn simplify_drops_tiny_terms() {
        let h = QubitHamiltonian::from_terms(vec![
            PauliString::identity(1.0),
            PauliString::new(PauliWord::single(1, PauliAxis::X), c(1e-13, 0.0)),
        ]);
        assert_eq!(h.len(), 1);
        assert_eq!(h.n_qubits(), 0);
    }

    #[test]
    fn duplicate_qubit_in_word_rejected() {
        assert_eq!(PauliWord::new([(0, PauliAxis::X), (0, PauliAxis::Y)]), Err(PauliError::DuplicateQubit(0)));
    }

    #[test]
    fn commutation_counts_anticommuting_sites() {
        let x0x1 = PauliWord::new([(0, PauliAxis::X), (1, PauliAxis::X)]).unwrap();
        let z0z1 = PauliWord::new([(0, PauliAxis::Z), (1, PauliAxis::Z)]).unwrap();
        let z0 = PauliWord::single(0, PauliAxis::Z);
        assert!(x0x1.commutes_with(&z0z1));
        assert!(!x0x1.commutes_with(&z0));
    }
}
