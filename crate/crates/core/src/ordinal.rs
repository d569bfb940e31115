//! Ordinals below epsilon-zero in Cantor normal form.
//!
//! An [`Ordinal`] is a finite sequence of terms `ω^e·c` with strictly
//! decreasing exponents and positive coefficients. Exponents are themselves
//! ordinals, so the representation is a tree whose height is bounded by a
//! [`DepthCap`]. All values are immutable; every operation returns a fresh
//! canonical value or an [`OrdinalError`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Nesting depth used when no cap is given explicitly.
pub const DEFAULT_DEPTH_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("coefficient overflow")]
    Overflow,
    #[error("exponent nesting depth {depth} exceeds cap {cap}")]
    DepthExceeded { depth: usize, cap: usize },
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("not in Cantor normal form: {0}")]
    NonCanonical(String),
}

/// Upper bound on the nesting depth of exponents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DepthCap(pub usize);

impl Default for DepthCap {
    fn default() -> Self {
        DepthCap(DEFAULT_DEPTH_CAP)
    }
}

impl DepthCap {
    pub fn check(self, ordinal: &Ordinal) -> Result<(), OrdinalError> {
        let depth = ordinal.depth();
        if depth > self.0 {
            Err(OrdinalError::DepthExceeded { depth, cap: self.0 })
        } else {
            Ok(())
        }
    }
}

/// One Cantor normal form term `ω^exponent · coefficient`.
///
/// Field order matters: the derived `Ord` compares exponents first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    exponent: Ordinal,
    coefficient: u64,
}

impl Term {
    pub fn exponent(&self) -> &Ordinal {
        &self.exponent
    }

    pub fn coefficient(&self) -> u64 {
        self.coefficient
    }
}

/// An ordinal in Cantor normal form. The empty term list is zero.
///
/// Because the form is canonical, structural equality is ordinal equality,
/// and the derived lexicographic order on term lists is the ordinal order.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ordinal {
    terms: Vec<Term>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::from_nat(1)
    }

    pub fn from_nat(n: u64) -> Self {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal::monomial(Ordinal::zero(), n)
        }
    }

    /// The first infinite ordinal.
    pub fn omega() -> Self {
        Ordinal::monomial(Ordinal::one(), 1)
    }

    /// `ω^exponent`.
    pub fn omega_pow(exponent: Ordinal) -> Self {
        Ordinal::monomial(exponent, 1)
    }

    /// `ω^exponent · coefficient`; a zero coefficient gives zero.
    pub fn monomial(exponent: Ordinal, coefficient: u64) -> Self {
        if coefficient == 0 {
            return Ordinal::zero();
        }
        Ordinal {
            terms: vec![Term {
                exponent,
                coefficient,
            }],
        }
    }

    /// Builds an ordinal from explicit `(exponent, coefficient)` pairs,
    /// rejecting anything that is not already in Cantor normal form.
    pub fn from_terms(terms: Vec<(Ordinal, u64)>) -> Result<Self, OrdinalError> {
        let ordinal = Ordinal {
            terms: terms
                .into_iter()
                .map(|(exponent, coefficient)| Term {
                    exponent,
                    coefficient,
                })
                .collect(),
        };
        ordinal.validate()?;
        Ok(ordinal)
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value as a natural number, if the ordinal is finite.
    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exponent.is_zero() => Some(t.coefficient),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_nat().is_some()
    }

    pub fn is_successor(&self) -> bool {
        self.terms.last().is_some_and(|t| t.exponent.is_zero())
    }

    /// Zero is neither a limit nor a successor.
    pub fn is_limit(&self) -> bool {
        !self.is_zero() && !self.is_successor()
    }

    pub fn leading_exponent(&self) -> Option<&Ordinal> {
        self.terms.first().map(|t| &t.exponent)
    }

    /// Nesting depth: zero has depth 0, anything else is one more than the
    /// deepest of its exponents.
    pub fn depth(&self) -> usize {
        self.terms
            .iter()
            .map(|t| 1 + t.exponent.depth())
            .max()
            .unwrap_or(0)
    }

    /// Checks the Cantor normal form invariants recursively.
    pub fn validate(&self) -> Result<(), OrdinalError> {
        for (i, term) in self.terms.iter().enumerate() {
            if term.coefficient == 0 {
                return Err(OrdinalError::NonCanonical(format!(
                    "term {i} has coefficient 0"
                )));
            }
            term.exponent.validate()?;
            if i > 0 && self.terms[i - 1].exponent <= term.exponent {
                return Err(OrdinalError::NonCanonical(format!(
                    "exponents do not strictly decrease at term {i}"
                )));
            }
        }
        Ok(())
    }

    /// Ordinary ordinal addition. Terms of `self` below the leading exponent
    /// of `rhs` are absorbed.
    pub fn checked_add(&self, rhs: &Ordinal) -> Result<Ordinal, OrdinalError> {
        let Some(lead) = rhs.terms.first() else {
            return Ok(self.clone());
        };
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .take_while(|t| t.exponent >= lead.exponent)
            .cloned()
            .collect();
        let mut rest = rhs.terms.iter();
        match terms.last_mut() {
            Some(last) if last.exponent == lead.exponent => {
                last.coefficient = last
                    .coefficient
                    .checked_add(lead.coefficient)
                    .ok_or(OrdinalError::Overflow)?;
                rest.next();
            }
            _ => {}
        }
        terms.extend(rest.cloned());
        Ok(Ordinal { terms })
    }

    /// Hessenberg natural sum: merge the term lists, adding coefficients of
    /// equal exponents.
    pub fn checked_natural_sum(&self, rhs: &Ordinal) -> Result<Ordinal, OrdinalError> {
        let mut terms = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let mut left = self.terms.iter().peekable();
        let mut right = rhs.terms.iter().peekable();
        loop {
            let next = match (left.peek(), right.peek()) {
                (None, None) => break,
                (Some(_), None) => left.next().unwrap().clone(),
                (None, Some(_)) => right.next().unwrap().clone(),
                (Some(l), Some(r)) => match l.exponent.cmp(&r.exponent) {
                    Ordering::Greater => left.next().unwrap().clone(),
                    Ordering::Less => right.next().unwrap().clone(),
                    Ordering::Equal => {
                        let coefficient = l
                            .coefficient
                            .checked_add(r.coefficient)
                            .ok_or(OrdinalError::Overflow)?;
                        let exponent = l.exponent.clone();
                        left.next();
                        right.next();
                        Term {
                            exponent,
                            coefficient,
                        }
                    }
                },
            };
            terms.push(next);
        }
        Ok(Ordinal { terms })
    }

    pub fn checked_succ(&self) -> Result<Ordinal, OrdinalError> {
        self.checked_add(&Ordinal::one())
    }

    /// The least `β` with `self + β = β`.
    ///
    /// Zero for zero; otherwise `ω^(e+1)` where `e` is the leading exponent.
    /// The result is re-checked against the fixpoint equation.
    pub fn least_add_fixpoint(&self) -> Result<Ordinal, OrdinalError> {
        let Some(lead) = self.leading_exponent() else {
            return Ok(Ordinal::zero());
        };
        let beta = Ordinal::omega_pow(lead.checked_succ()?);
        debug_assert_eq!(self.checked_add(&beta).as_ref(), Ok(&beta));
        Ok(beta)
    }

    /// Left subtraction: the unique `γ` with `lhs + γ = self`, provided
    /// `lhs <= self`. Returns `None` when `lhs > self`.
    pub fn left_subtract(&self, lhs: &Ordinal) -> Option<Ordinal> {
        if lhs > self {
            return None;
        }
        for (i, own) in self.terms.iter().enumerate() {
            let Some(theirs) = lhs.terms.get(i) else {
                return Some(Ordinal {
                    terms: self.terms[i..].to_vec(),
                });
            };
            if own == theirs {
                continue;
            }
            if own.exponent == theirs.exponent {
                // lhs <= self forces theirs.coefficient < own.coefficient here
                let mut terms = vec![Term {
                    exponent: own.exponent.clone(),
                    coefficient: own.coefficient - theirs.coefficient,
                }];
                terms.extend_from_slice(&self.terms[i + 1..]);
                return Some(Ordinal { terms });
            }
            return Some(Ordinal {
                terms: self.terms[i..].to_vec(),
            });
        }
        Some(Ordinal::zero())
    }

    /// Parses an ordinal expression, normalizing it to Cantor normal form.
    pub fn parse(text: &str) -> Result<Ordinal, OrdinalError> {
        Ordinal::parse_with_cap(text, DepthCap::default())
    }

    pub fn parse_with_cap(text: &str, cap: DepthCap) -> Result<Ordinal, OrdinalError> {
        let mut parser = Parser::new(text, cap);
        let value = parser.expr(0)?;
        parser.skip_ws();
        if let Some(&(position, c)) = parser.peek() {
            return Err(syntax(position, format!("unexpected '{c}'")));
        }
        cap.check(&value)?;
        Ok(value)
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::from_nat(n)
    }
}

fn syntax(position: usize, message: impl Into<String>) -> OrdinalError {
    OrdinalError::Syntax {
        position,
        message: message.into(),
    }
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
    end: usize,
    cap: DepthCap,
}

impl Parser {
    fn new(text: &str, cap: DepthCap) -> Self {
        Parser {
            chars: text.char_indices().collect(),
            pos: 0,
            end: text.len(),
            cap,
        }
    }

    fn skip_ws(&mut self) {
        while self
            .chars
            .get(self.pos)
            .is_some_and(|(_, c)| c.is_whitespace())
        {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<&(usize, char)> {
        self.chars.get(self.pos)
    }

    fn offset(&self) -> usize {
        self.peek().map_or(self.end, |&(p, _)| p)
    }

    fn eat(&mut self, want: char) -> bool {
        self.skip_ws();
        if self.peek().is_some_and(|&(_, c)| c == want) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self, level: usize) -> Result<Ordinal, OrdinalError> {
        let mut acc = self.term(level)?;
        while self.eat('+') {
            let next = self.term(level)?;
            acc = acc.checked_add(&next)?;
        }
        Ok(acc)
    }

    fn term(&mut self, level: usize) -> Result<Ordinal, OrdinalError> {
        self.skip_ws();
        match self.peek() {
            Some(&(_, 'w')) => self.omega_term(level),
            Some(&(_, c)) if c.is_ascii_digit() => Ok(Ordinal::from_nat(self.nat()?)),
            Some(&(p, c)) => Err(syntax(p, format!("expected 'w' or a number, found '{c}'"))),
            None => Err(syntax(
                self.end,
                "expected 'w' or a number, found end of input",
            )),
        }
    }

    fn atom(&mut self, level: usize) -> Result<Ordinal, OrdinalError> {
        self.skip_ws();
        if self.eat('(') {
            let inner = self.expr(level)?;
            if !self.eat(')') {
                return Err(syntax(self.offset(), "expected ')'"));
            }
            return Ok(inner);
        }
        self.term(level)
    }

    fn omega_term(&mut self, level: usize) -> Result<Ordinal, OrdinalError> {
        self.pos += 1; // 'w'
        let exponent = if self.eat('^') {
            if level >= self.cap.0 {
                return Err(OrdinalError::DepthExceeded {
                    depth: level + 1,
                    cap: self.cap.0,
                });
            }
            self.atom(level + 1)?
        } else {
            Ordinal::one()
        };
        let coefficient = if self.eat('*') { self.nat()? } else { 1 };
        Ok(Ordinal::monomial(exponent, coefficient))
    }

    fn nat(&mut self) -> Result<u64, OrdinalError> {
        self.skip_ws();
        let start = self.offset();
        let mut digits = String::new();
        while let Some(&(_, c)) = self.peek() {
            if !c.is_ascii_digit() {
                break;
            }
            digits.push(c);
            self.pos += 1;
        }
        if digits.is_empty() {
            return Err(syntax(start, "expected a number"));
        }
        digits
            .parse::<u64>()
            .map_err(|_| syntax(start, format!("number {digits} is too large")))
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ordinal::parse(s)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, term) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write_term(f, term)?;
        }
        Ok(())
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, term: &Term) -> fmt::Result {
    if term.exponent.is_zero() {
        return write!(f, "{}", term.coefficient);
    }
    f.write_str("w")?;
    if term.exponent != Ordinal::one() {
        f.write_str("^")?;
        let exp = &term.exponent;
        // A bare `w...` exponent would swallow a following `*c`, so only
        // single unit terms are left unparenthesized, and only without `*c`.
        let bare = exp.is_finite()
            || (term.coefficient == 1 && exp.terms.len() == 1 && exp.terms[0].coefficient == 1);
        if bare {
            write!(f, "{exp}")?;
        } else {
            write!(f, "({exp})")?;
        }
    }
    if term.coefficient != 1 {
        write!(f, "*{}", term.coefficient)?;
    }
    Ok(())
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Ordinal::parse(&text).map_err(serde::de::Error::custom)
    }
}
