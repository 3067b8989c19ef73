//! Fermionic ladder-operator algebra and the Jordan-Wigner encoding.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::pauli::{PauliAxis, PauliString, PauliWord, QubitHamiltonian};

/// `a†_p` when `dagger`, else `a_p`, on spin orbital `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ladder {
    pub orbital: usize,
    pub dagger: bool,
}

impl Ladder {
    pub fn create(orbital: usize) -> Self {
        Ladder { orbital, dagger: true }
    }

    pub fn annihilate(orbital: usize) -> Self {
        Ladder { orbital, dagger: false }
    }

    fn adjoint(self) -> Self {
        Ladder { dagger: !self.dagger, ..self }
    }
}

/// Sum of coefficient times ordered products of ladder operators. An empty
/// product is the identity.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FermionOperator {
    terms: Vec<(Vec<Ladder>, Complex64)>,
}

impl FermionOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity(c: f64) -> Self {
        Self::term(Vec::new(), Complex64::new(c, 0.0))
    }

    pub fn term(ops: Vec<Ladder>, coeff: Complex64) -> Self {
        FermionOperator { terms: vec![(ops, coeff)] }
    }

    /// `c · a†_p a_q`.
    pub fn one_body(p: usize, q: usize, c: f64) -> Self {
        Self::term(vec![Ladder::create(p), Ladder::annihilate(q)], Complex64::new(c, 0.0))
    }

    /// `c · a†_p a†_q a_r a_s`.
    pub fn two_body(p: usize, q: usize, r: usize, s: usize, c: f64) -> Self {
        Self::term(
            vec![Ladder::create(p), Ladder::create(q), Ladder::annihilate(r), Ladder::annihilate(s)],
            Complex64::new(c, 0.0),
        )
    }

    pub fn terms(&self) -> &[(Vec<Ladder>, Complex64)] {
        &self.terms
    }

    /// Reversed products with conjugated coefficients.
    pub fn dagger(&self) -> Self {
        FermionOperator {
            terms: self
                .terms
                .iter()
                .map(|(ops, c)| (ops.iter().rev().map(|o| o.adjoint()).collect(), c.conj()))
                .collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        FermionOperator { terms: self.terms.iter().map(|(ops, d)| (ops.clone(), d * c)).collect() }
    }

    /// Largest spin-orbital index plus one.
    pub fn n_orbitals(&self) -> usize {
        self.terms.iter().flat_map(|(ops, _)| ops.iter().map(|o| o.orbital + 1)).max().unwrap_or(0)
    }
}

impl Add for FermionOperator {
    type Output = FermionOperator;
    fn add(mut self, rhs: FermionOperator) -> FermionOperator {
        self.terms.extend(rhs.terms);
        self
    }
}

impl Sub for FermionOperator {
    type Output = FermionOperator;
    fn sub(self, rhs: FermionOperator) -> FermionOperator {
        self + rhs.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for FermionOperator {
    type Output = FermionOperator;
    fn mul(self, rhs: FermionOperator) -> FermionOperator {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (a, c) in &self.terms {
            for (b, d) in &rhs.terms {
                terms.push((a.iter().chain(b).copied().collect(), c * d));
            }
        }
        FermionOperator { terms }
    }
}

impl fmt::Display for FermionOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (ops, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({:+}{:+}i)", c.re, c.im)?;
            for o in ops {
                write!(f, " a{}{}", o.orbital, if o.dagger { "^" } else { "" })?;
            }
        }
        Ok(())
    }
}

/// `a_p ↦ ½(X_p + iY_p) Z_{p−1}⋯Z_0`, `a†_p ↦ ½(X_p − iY_p) Z_{p−1}⋯Z_0`.
fn ladder_image(op: Ladder) -> QubitHamiltonian {
    let string = |axis: PauliAxis| {
        PauliWord::new((0..op.orbital).map(|k| (k, PauliAxis::Z)).chain([(op.orbital, axis)])).expect("distinct qubits")
    };
    let y_sign = if op.dagger { -0.5 } else { 0.5 };
    QubitHamiltonian::from_terms(vec![
        PauliString::new(string(PauliAxis::X), Complex64::new(0.5, 0.0)),
        PauliString::new(string(PauliAxis::Y), Complex64::new(0.0, y_sign)),
    ])
}

pub fn jordan_wigner(f: &FermionOperator) -> QubitHamiltonian {
    let mut out = Vec::new();
    for (ops, c) in &f.terms {
        let product = ops.iter().fold(QubitHamiltonian::scalar(*c), |acc, &op| acc.multiply(&ladder_image(op)));
        out.extend(product.terms().iter().cloned());
    }
    QubitHamiltonian::from_terms(out)
}
