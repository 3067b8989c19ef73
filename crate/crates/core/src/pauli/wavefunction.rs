use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::parse::{write_coefficient, Cursor};
use super::PauliError;

/// Sparse qubit wavefunction keyed by basis index. Qubit 0 is the most
/// significant bit, i.e. the leftmost character of `|q0 q1 …⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitWaveFunction {
    amplitudes: BTreeMap<usize, Complex64>,
    n_qubits: usize,
}

impl QubitWaveFunction {
    pub fn new(n_qubits: usize) -> Self {
        QubitWaveFunction { amplitudes: BTreeMap::new(), n_qubits }
    }

    /// Single basis state `|bits⟩`.
    pub fn basis(index: usize, n_qubits: usize) -> Self {
        let mut w = Self::new(n_qubits);
        w.amplitudes.insert(index, Complex64::new(1.0, 0.0));
        w
    }

    /// From a dense amplitude vector of length `2^n`; exact zeros are skipped.
    pub fn from_dense(amplitudes: &[Complex64]) -> Self {
        let n_qubits = amplitudes.len().next_power_of_two().trailing_zeros() as usize;
        let mut w = Self::new(n_qubits);
        for (i, a) in amplitudes.iter().enumerate() {
            if *a != Complex64::new(0.0, 0.0) {
                w.amplitudes.insert(i, *a);
            }
        }
        w
    }

    /// Parse `c|bits⟩` terms joined by `+`/`-` and normalize.
    pub fn from_string(text: &str) -> Result<Self, PauliError> {
        let mut w = Self::parse_unnormalized(text)?;
        w.normalize()?;
        Ok(w)
    }

    /// Parse without normalizing.
    pub fn parse_unnormalized(text: &str) -> Result<Self, PauliError> {
        let mut p = Cursor::new(text);
        let mut n_qubits: Option<usize> = None;
        let mut amplitudes: BTreeMap<usize, Complex64> = BTreeMap::new();
        let mut sign = if p.eat(b'-') {
            -1.0
        } else {
            p.eat(b'+');
            1.0
        };
        loop {
            let coeff = p.coefficient()?.unwrap_or(Complex64::new(1.0, 0.0)) * sign;
            p.eat(b'*');
            if !p.eat(b'|') {
                return Err(p.error("expected '|'"));
            }
            let start = p.pos();
            let bits: Vec<u8> = p.rest().iter().take_while(|b| matches!(b, b'0' | b'1')).copied().collect();
            if bits.is_empty() {
                return Err(p.error("expected a bitstring"));
            }
            if let Some(n) = n_qubits {
                if n != bits.len() {
                    return Err(PauliError::Syntax {
                        offset: start,
                        message: format!("bitstring length {} differs from {}", bits.len(), n),
                    });
                }
            }
            n_qubits = Some(bits.len());
            p.advance(bits.len());
            if !(p.eat(b'>') || p.eat_str("⟩")) {
                return Err(p.error("expected '>'"));
            }
            let index = bits.iter().fold(0usize, |acc, b| (acc << 1) | usize::from(*b == b'1'));
            *amplitudes.entry(index).or_default() += coeff;
            p.skip_ws();
            if p.at_end() {
                break;
            }
            sign = if p.eat(b'+') {
                1.0
            } else if p.eat(b'-') {
                -1.0
            } else {
                return Err(p.error("expected '+' or '-'"));
            };
        }
        Ok(QubitWaveFunction { amplitudes, n_qubits: n_qubits.unwrap_or(0) })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes.get(&index).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.amplitudes.iter().map(|(k, v)| (*k, *v))
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.values().all(|a| a.norm_sqr() == 0.0)
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) -> Result<(), PauliError> {
        let n = self.norm();
        if n == 0.0 {
            return Err(PauliError::EmptyWaveFunction);
        }
        for a in self.amplitudes.values_mut() {
            *a /= n;
        }
        Ok(())
    }

    pub fn to_dense(&self) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); 1 << self.n_qubits];
        for (k, a) in &self.amplitudes {
            v[*k] = *a;
        }
        v
    }

    /// Bitstring of a basis index on this register.
    pub fn bitstring(&self, index: usize) -> String {
        bitstring(index, self.n_qubits)
    }
}

/// `index` written as `n` bits, qubit 0 first.
pub fn bitstring(index: usize, n: usize) -> String {
    (0..n).map(|q| if (index >> (n - 1 - q)) & 1 == 1 { '1' } else { '0' }).collect()
}

impl fmt::Display for QubitWaveFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, a) in &self.amplitudes {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write_coefficient(f, *a)?;
            write!(f, "|{}>", self.bitstring(*k))?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_bell_state() {
        let w = QubitWaveFunction::from_string("1.0|00> + 1.0|11>").unwrap();
        assert_eq!(w.n_qubits(), 2);
        let s = 0.5f64.sqrt();
        assert!((w.amplitude(0) - Complex64::new(s, 0.0)).norm() < 1e-15);
        assert!((w.amplitude(3) - Complex64::new(s, 0.0)).norm() < 1e-15);
        assert!((w.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dirac_bracket_and_signs() {
        let w = QubitWaveFunction::parse_unnormalized("|0⟩ - (0.0+1.0j)|1⟩").unwrap();
        assert_eq!(w.amplitude(1), Complex64::new(0.0, -1.0));
        assert_eq!(w.amplitude(0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn rejects_ragged_bitstrings() {
        assert!(QubitWaveFunction::from_string("|00> + |1>").is_err());
        assert_eq!(QubitWaveFunction::from_string("0.0|01>"), Err(PauliError::EmptyWaveFunction));
    }

    #[test]
    fn display_round_trip() {
        let w = QubitWaveFunction::parse_unnormalized("0.5|010> + (0.25-1.0j)|111>").unwrap();
        assert_eq!(QubitWaveFunction::parse_unnormalized(&w.to_string()).unwrap(), w);
        assert_eq!(bitstring(1, 3), "001");
    }
}
