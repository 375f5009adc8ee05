//! Multivariate complex polynomials in `z1, ..., zk`.
//!
//! Expression grammar (whitespace ignored, no implicit multiplication):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' digits)?
//! atom   := number | 'i' | 'z' digits | '(' expr ')'
//! number := digits ('.' digits?)? | '.' digits
//! ```

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{C64, I, ONE, ZERO};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolynomialError {
    #[error("syntax error at position {position}: {message}")]
    Syntax {
        position: usize,
        message: &'static str,
    },
    #[error("exponent at position {position} must be a nonnegative integer")]
    BadExponent { position: usize },
    #[error("unknown variable `{name}` at position {position}")]
    UnknownVariable { position: usize, name: String },
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
}

/// Sparse polynomial: exponent tuple -> nonzero complex coefficient.
#[derive(Clone, PartialEq, Debug)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, C64>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C64) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    /// The coordinate function `z_{index+1}`.
    pub fn variable(nvars: usize, index: usize) -> Result<Self, PolynomialError> {
        if index >= nvars {
            return Err(PolynomialError::IndexOutOfRange { index, nvars });
        }
        let mut exps = vec![0; nvars];
        exps[index] = 1;
        Ok(Self::monomial(nvars, exps, ONE))
    }

    fn monomial(nvars: usize, exps: Vec<u32>, c: C64) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(exps, c);
        p
    }

    /// Builds from `(exponents, coefficient)` pairs, summing duplicates.
    pub fn from_terms<T>(nvars: usize, terms: T) -> Self
    where
        T: IntoIterator<Item = (Vec<u32>, C64)>,
    {
        let mut p = Self::zero(nvars);
        for (exps, c) in terms {
            assert_eq!(exps.len(), nvars, "exponent tuple length must equal nvars");
            p.add_term(exps, c);
        }
        p
    }

    fn add_term(&mut self, exps: Vec<u32>, c: C64) {
        if c == ZERO {
            return;
        }
        let sum = self.terms.get(&exps).copied().unwrap_or(ZERO) + c;
        if sum == ZERO {
            self.terms.remove(&exps);
        } else {
            self.terms.insert(exps, sum);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximum total degree; `-1` for the zero polynomial.
    pub fn degree(&self) -> i32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>() as i32)
            .max()
            .unwrap_or(-1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], C64)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), *v))
    }

    pub fn coefficient(&self, exps: &[u32]) -> C64 {
        self.terms.get(exps).copied().unwrap_or(ZERO)
    }

    pub fn parse(expr: &str, nvars: usize) -> Result<Self, PolynomialError> {
        Parser {
            src: expr.as_bytes(),
            pos: 0,
            nvars,
        }
        .parse()
    }

    /// Monomial-sum evaluation.
    pub fn eval(&self, z: &[C64]) -> C64 {
        assert_eq!(z.len(), self.nvars, "point dimension must equal nvars");
        self.terms
            .iter()
            .map(|(exps, c)| {
                exps.iter()
                    .zip(z)
                    .fold(*c, |acc, (&n, &zk)| acc * zk.powu(n))
            })
            .sum()
    }

    /// Exact partial derivative with respect to `z_{index+1}`.
    pub fn partial(&self, index: usize) -> Result<Self, PolynomialError> {
        if index >= self.nvars {
            return Err(PolynomialError::IndexOutOfRange {
                index,
                nvars: self.nvars,
            });
        }
        let mut out = Self::zero(self.nvars);
        for (exps, c) in &self.terms {
            let n = exps[index];
            if n == 0 {
                continue;
            }
            let mut e = exps.clone();
            e[index] = n - 1;
            out.add_term(e, *c * n as f64);
        }
        Ok(out)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_terms(
            self.nvars,
            self.terms.iter().map(|(k, v)| (k.clone(), *v * s)),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), *v);
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -*v)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                let e = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                out.add_term(e, *va * *vb);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::constant(self.nvars, ONE);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }
}

impl fmt::Display for Polynomial {
    /// Prints in the parser's grammar; parsing the output reproduces the term map exactly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // highest degree first
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let (da, db) = (a.iter().sum::<u32>(), b.iter().sum::<u32>());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (i, (exps, c)) in terms.into_iter().enumerate() {
            let mono = MonomialDisplay(exps);
            let is_const = exps.iter().all(|&n| n == 0);
            if c.im == 0.0 {
                let (sign, mag) = if c.re < 0.0 {
                    ("-", -c.re)
                } else {
                    ("+", c.re)
                };
                match (i, sign) {
                    (0, "-") => f.write_str("-")?,
                    (0, _) => {}
                    _ => write!(f, " {sign} ")?,
                }
                if is_const {
                    write!(f, "{mag}")?;
                } else if mag == 1.0 {
                    write!(f, "{mono}")?;
                } else {
                    write!(f, "{mag}*{mono}")?;
                }
            } else {
                if i > 0 {
                    f.write_str(" + ")?;
                }
                let (isign, imag) = if c.im < 0.0 {
                    ('-', -c.im)
                } else {
                    ('+', c.im)
                };
                write!(f, "({} {isign} {imag}*i)", c.re)?;
                if !is_const {
                    write!(f, "*{mono}")?;
                }
            }
        }
        Ok(())
    }
}

struct MonomialDisplay<'a>(&'a [u32]);

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &n) in self.0.iter().enumerate() {
            if n == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "z{}", k + 1)?;
            if n > 1 {
                write!(f, "^{n}")?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn parse(mut self) -> Result<Polynomial, PolynomialError> {
        self.skip_ws();
        if self.pos == self.src.len() {
            return Err(self.syntax("empty expression"));
        }
        let p = self.expr()?;
        self.skip_ws();
        if self.pos != self.src.len() {
            return Err(self.syntax("unexpected trailing input"));
        }
        Ok(p)
    }

    fn syntax(&self, message: &'static str) -> PolynomialError {
        PolynomialError::Syntax {
            position: self.pos,
            message,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial, PolynomialError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, PolynomialError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial, PolynomialError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial, PolynomialError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        let digits = self.take_while(|b| b.is_ascii_digit());
        let bad = PolynomialError::BadExponent { position: start };
        if digits.is_empty() || matches!(self.src.get(self.pos), Some(b'.')) {
            return Err(bad);
        }
        let n: u32 = core::str::from_utf8(digits)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(bad)?;
        Ok(base.pow(n))
    }

    fn take_while(&mut self, pred: impl Fn(u8) -> bool) -> &'a [u8] {
        let start = self.pos;
        while self.pos < self.src.len() && pred(self.src[self.pos]) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn atom(&mut self) -> Result<Polynomial, PolynomialError> {
        let nvars = self.nvars;
        match self.peek() {
            None => Err(self.syntax("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b) if b.is_ascii_digit() || b == b'.' => {
                let start = self.pos;
                let text = self.take_while(|b| b.is_ascii_digit() || b == b'.');
                let value = core::str::from_utf8(text)
                    .ok()
                    .filter(|s| s.bytes().filter(|&b| b == b'.').count() <= 1 && *s != ".")
                    .and_then(|s| s.parse::<f64>().ok())
                    .ok_or(PolynomialError::Syntax {
                        position: start,
                        message: "malformed number",
                    })?;
                if self
                    .src
                    .get(self.pos)
                    .is_some_and(|b| b.is_ascii_alphabetic())
                {
                    return Err(self.syntax("implicit multiplication is not allowed; use `*`"));
                }
                Ok(Polynomial::constant(nvars, C64::new(value, 0.0)))
            }
            Some(b) if b.is_ascii_alphabetic() => {
                let start = self.pos;
                let ident = self.take_while(|b| b.is_ascii_alphanumeric() || b == b'_');
                let name = core::str::from_utf8(ident).unwrap_or("");
                if name == "i" {
                    return Ok(Polynomial::constant(nvars, I));
                }
                let index = name
                    .strip_prefix('z')
                    .filter(|d| {
                        !d.is_empty()
                            && d.bytes().all(|b| b.is_ascii_digit())
                            && !d.starts_with('0')
                    })
                    .and_then(|d| d.parse::<usize>().ok())
                    .filter(|&k| k >= 1 && k <= nvars);
                match index {
                    Some(k) => Ok(Polynomial::variable(nvars, k - 1).expect("index checked")),
                    None => Err(PolynomialError::UnknownVariable {
                        position: start,
                        name: name.into(),
                    }),
                }
            }
            Some(_) => Err(self.syntax("unexpected character")),
        }
    }
}
