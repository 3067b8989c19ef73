//! Text form of qubit Hamiltonians.
//!
//! ```text
//! hamiltonian := term (("+" | "-") term)*
//! term        := coeff ["*" product] | product
//! coeff       := real ["j"] | "(" real ("+" | "-") real "j" ")"
//! product     := factor (["*"] factor)*
//! factor      := ("X" | "Y" | "Z" | "I") "(" qubit ")"
//! ```
//!
//! Whitespace is ignored between tokens. `Display` writes the same grammar,
//! with identity terms written as a bare coefficient.

use std::fmt;

use num_complex::Complex64;

use super::{PauliAxis, PauliError, PauliString, PauliWord, QubitHamiltonian};

pub fn parse_hamiltonian(text: &str) -> Result<QubitHamiltonian, PauliError> {
    let mut p = Cursor::new(text);
    let mut terms = Vec::new();
    p.skip_ws();
    let mut sign = 1.0;
    if p.eat(b'-') {
        sign = -1.0;
    } else {
        p.eat(b'+');
    }
    loop {
        let mut term = p.term()?;
        term.coeff *= sign;
        terms.push(term);
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
    Ok(QubitHamiltonian::from_terms(terms))
}

/// Cursor over the input bytes; shared with the wavefunction parser.
pub(crate) struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        Cursor { src: text.as_bytes(), pos: 0 }
    }

    pub(crate) fn error(&self, message: &str) -> PauliError {
        PauliError::Syntax { offset: self.pos, message: message.to_string() }
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    pub(crate) fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    pub(crate) fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    pub(crate) fn pos(&self) -> usize {
        self.pos
    }

    pub(crate) fn rest(&self) -> &'a [u8] {
        &self.src[self.pos..]
    }

    pub(crate) fn advance(&mut self, n: usize) {
        self.pos += n;
    }

    fn expect(&mut self, b: u8) -> Result<(), PauliError> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", b as char)))
        }
    }

    fn starts_number(&mut self) -> bool {
        matches!(self.peek(), Some(b'0'..=b'9') | Some(b'.'))
    }

    /// Unsigned decimal number with optional exponent.
    pub(crate) fn number(&mut self) -> Result<f64, PauliError> {
        self.skip_ws();
        let start = self.pos;
        let s = self.src;
        let mut i = self.pos;
        while i < s.len() && (s[i].is_ascii_digit() || s[i] == b'.') {
            i += 1;
        }
        if i < s.len() && (s[i] == b'e' || s[i] == b'E') {
            let mut k = i + 1;
            if k < s.len() && (s[k] == b'+' || s[k] == b'-') {
                k += 1;
            }
            if k < s.len() && s[k].is_ascii_digit() {
                while k < s.len() && s[k].is_ascii_digit() {
                    k += 1;
                }
                i = k;
            }
        }
        let text = std::str::from_utf8(&s[start..i]).unwrap_or("");
        let v = text.parse::<f64>().map_err(|_| self.error("expected a number"))?;
        self.pos = i;
        Ok(v)
    }

    fn imaginary_unit(&mut self) -> bool {
        self.eat(b'j') || self.eat(b'i')
    }

    fn signed_number(&mut self) -> Result<f64, PauliError> {
        if self.eat(b'-') {
            Ok(-self.number()?)
        } else {
            self.eat(b'+');
            self.number()
        }
    }

    /// Real, imaginary (`2.0j`) or parenthesised complex coefficient.
    pub(crate) fn coefficient(&mut self) -> Result<Option<Complex64>, PauliError> {
        if self.eat(b'(') {
            let first = self.signed_number()?;
            let value = if self.imaginary_unit() {
                Complex64::new(0.0, first)
            } else if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                let im = self.signed_number()?;
                if !self.imaginary_unit() {
                    return Err(self.error("expected 'j'"));
                }
                Complex64::new(first, im)
            } else {
                Complex64::new(first, 0.0)
            };
            self.expect(b')')?;
            return Ok(Some(value));
        }
        if self.starts_number() {
            let v = self.number()?;
            return Ok(Some(if self.imaginary_unit() { Complex64::new(0.0, v) } else { Complex64::new(v, 0.0) }));
        }
        Ok(None)
    }

    fn qubit(&mut self) -> Result<usize, PauliError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("").parse().map_err(|_| {
            self.pos = start;
            self.error("expected a qubit index")
        })
    }

    fn factor(&mut self) -> Result<Option<(usize, Option<PauliAxis>)>, PauliError> {
        let axis = match self.peek() {
            Some(b'X') => Some(PauliAxis::X),
            Some(b'Y') => Some(PauliAxis::Y),
            Some(b'Z') => Some(PauliAxis::Z),
            Some(b'I') => None,
            _ => return Ok(None),
        };
        self.pos += 1;
        self.expect(b'(')?;
        let q = self.qubit()?;
        self.expect(b')')?;
        Ok(Some((q, axis)))
    }

    fn term(&mut self) -> Result<PauliString, PauliError> {
        let coeff = self.coefficient()?;
        let has_coeff = coeff.is_some();
        if has_coeff && !self.eat(b'*') {
            return Ok(PauliString::new(PauliWord::identity(), coeff.unwrap()));
        }
        let mut seen = Vec::new();
        let mut factors = Vec::new();
        loop {
            let at = self.pos;
            match self.factor()? {
                Some((q, axis)) => {
                    if seen.contains(&q) {
                        return Err(PauliError::DuplicateQubit(q));
                    }
                    seen.push(q);
                    if let Some(a) = axis {
                        factors.push((q, a));
                    }
                }
                None if seen.is_empty() => {
                    self.pos = at;
                    return Err(self.error("expected a Pauli factor"));
                }
                None => break,
            }
            let save = self.pos;
            if self.eat(b'*') && !matches!(self.peek(), Some(b'X' | b'Y' | b'Z' | b'I')) {
                self.pos = save;
                break;
            }
        }
        let word = PauliWord::new(factors)?;
        Ok(PauliString::new(word, coeff.unwrap_or(Complex64::new(1.0, 0.0))))
    }
}

pub(crate) fn write_coefficient(f: &mut fmt::Formatter<'_>, c: Complex64) -> fmt::Result {
    if c.im == 0.0 {
        write!(f, "{:?}", c.re)
    } else if c.im < 0.0 {
        write!(f, "({:?}-{:?}j)", c.re, -c.im)
    } else {
        write!(f, "({:?}+{:?}j)", c.re, c.im)
    }
}

impl fmt::Display for QubitHamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0.0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            let mut c = t.coeff;
            if c.im == 0.0 && c.re < 0.0 {
                write!(f, "{}", if k == 0 { "-" } else { " - " })?;
                c = -c;
            } else if k > 0 {
                write!(f, " + ")?;
            }
            write_coefficient(f, c)?;
            if !t.word.is_identity() {
                write!(f, "*")?;
                for (q, a) in t.word.factors() {
                    write!(f, "{}({})", a.symbol(), q)?;
                }
            }
        }
        Ok(())
    }
}
