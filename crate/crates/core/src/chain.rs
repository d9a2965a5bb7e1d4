//! Chains: finite integer (or mod-m) combinations of n-tuples of rack elements.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::int::Int;

/// Which of the three tuple complexes a chain lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Theory {
    Rack,
    Degenerate,
    Quandle,
}

impl Theory {
    pub const ALL: [Theory; 3] = [Theory::Rack, Theory::Degenerate, Theory::Quandle];

    pub fn name(self) -> &'static str {
        match self {
            Theory::Rack => "rack",
            Theory::Degenerate => "degenerate",
            Theory::Quandle => "quandle",
        }
    }

    /// Whether a tuple is a basis element of this theory's chain group.
    pub fn admits(self, tuple: &[usize]) -> bool {
        match self {
            Theory::Rack => true,
            Theory::Degenerate => is_degenerate(tuple),
            Theory::Quandle => !is_degenerate(tuple),
        }
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rack" | "r" => Ok(Theory::Rack),
            "degenerate" | "d" => Ok(Theory::Degenerate),
            "quandle" | "q" => Ok(Theory::Quandle),
            other => Err(Error::Parse(format!("unknown theory `{other}`"))),
        }
    }
}

/// Some adjacent pair of entries coincides.
pub fn is_degenerate(tuple: &[usize]) -> bool {
    tuple.windows(2).any(|w| w[0] == w[1])
}

/// Mixed-radix code of a tuple, first entry most significant.
#[inline]
pub fn encode(base: usize, tuple: &[usize]) -> u64 {
    tuple.iter().fold(0u64, |acc, &x| acc * base as u64 + x as u64)
}

#[inline]
pub fn decode_into(base: usize, mut code: u64, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = (code % base as u64) as usize;
        code /= base as u64;
    }
}

pub fn decode(base: usize, degree: usize, code: u64) -> Vec<usize> {
    let mut out = vec![0; degree];
    decode_into(base, code, &mut out);
    out
}

/// Number of tuples of the given length, if it fits a code.
pub fn tuple_count(base: usize, degree: usize) -> Option<u64> {
    (base as u64).checked_pow(degree as u32)
}

/// A chain in `C_n(X)` for one of the three theories.
///
/// Quandle-theory chains silently drop degenerate tuples on insertion, which
/// realises the quotient `C^R / C^D`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    base: usize,
    degree: usize,
    theory: Theory,
    modulus: u64,
    terms: BTreeMap<u64, Int>,
}

impl Chain {
    pub fn zero(base: usize, degree: usize, theory: Theory) -> Self {
        assert!(
            tuple_count(base, degree).is_some(),
            "{base}^{degree} tuples do not fit a 64-bit code"
        );
        Chain {
            base,
            degree,
            theory,
            modulus: 0,
            terms: BTreeMap::new(),
        }
    }

    /// Same chain with coefficients reduced into `[0, m)`; `m = 0` means
    /// integer coefficients.
    pub fn with_modulus(mut self, m: u64) -> Self {
        self.modulus = m;
        if m > 0 {
            let terms = std::mem::take(&mut self.terms);
            for (code, c) in terms {
                self.add_code(code, &c);
            }
        }
        self
    }

    pub fn from_tuple(base: usize, theory: Theory, tuple: &[usize]) -> Self {
        let mut c = Chain::zero(base, tuple.len(), theory);
        c.add_term(tuple, &Int::ONE);
        c
    }

    pub fn from_terms<'a>(
        base: usize,
        degree: usize,
        theory: Theory,
        terms: impl IntoIterator<Item = (&'a [usize], i64)>,
    ) -> Self {
        let mut c = Chain::zero(base, degree, theory);
        for (t, k) in terms {
            c.add_term(t, &Int::from(k));
        }
        c
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn theory(&self) -> Theory {
        self.theory
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, tuple: &[usize], coeff: &Int) {
        assert_eq!(tuple.len(), self.degree, "tuple length does not match chain degree");
        debug_assert!(tuple.iter().all(|&x| x < self.base), "tuple entry out of range");
        if self.theory == Theory::Quandle && is_degenerate(tuple) {
            return;
        }
        self.add_code(encode(self.base, tuple), coeff);
    }

    pub(crate) fn add_code(&mut self, code: u64, coeff: &Int) {
        if coeff.is_zero() {
            return;
        }
        let m = self.modulus;
        let entry = self.terms.entry(code).or_insert(Int::ZERO);
        *entry += coeff;
        if m > 0 {
            *entry = Int::from(entry.rem_u64(m));
        }
        if entry.is_zero() {
            self.terms.remove(&code);
        }
    }

    pub fn coefficient(&self, tuple: &[usize]) -> Int {
        self.terms.get(&encode(self.base, tuple)).cloned().unwrap_or(Int::ZERO)
    }

    pub(crate) fn coefficient_of_code(&self, code: u64) -> Int {
        self.terms.get(&code).cloned().unwrap_or(Int::ZERO)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, &Int)> + '_ {
        self.terms
            .iter()
            .map(move |(&code, c)| (decode(self.base, self.degree, code), c))
    }

    pub(crate) fn codes(&self) -> impl Iterator<Item = (u64, &Int)> + '_ {
        self.terms.iter().map(|(&k, v)| (k, v))
    }

    pub fn scale(&self, k: &Int) -> Chain {
        let mut out = Chain {
            terms: BTreeMap::new(),
            ..self.clone()
        };
        for (&code, c) in &self.terms {
            out.add_code(code, &(c * k));
        }
        out
    }

    /// Reinterpret in another theory; projecting to quandle theory drops
    /// degenerate tuples.
    pub fn project(&self, theory: Theory) -> Chain {
        let mut out = Chain {
            theory,
            terms: BTreeMap::new(),
            ..self.clone()
        };
        let mut buf = vec![0; self.degree];
        for (&code, c) in &self.terms {
            decode_into(self.base, code, &mut buf);
            if theory == Theory::Quandle && is_degenerate(&buf) {
                continue;
            }
            out.add_code(code, c);
        }
        out
    }

    /// Every term is a basis element of the chain's theory.
    pub fn respects_theory(&self) -> bool {
        let mut buf = vec![0; self.degree];
        self.terms.keys().all(|&code| {
            decode_into(self.base, code, &mut buf);
            self.theory.admits(&buf)
        })
    }

    /// Parse the literal syntax `+1*(0,1,2) -1*(0,0,2)`; a bare `(..)` term
    /// has coefficient 1. `degree` is only needed to type the literal `0`.
    pub fn parse(text: &str, base: usize, theory: Theory, degree: Option<usize>) -> Result<Chain> {
        let terms = parse_terms(text)?;
        let degree = match (terms.first(), degree) {
            (Some((_, t)), Some(d)) if t.len() != d => {
                return Err(Error::Parse(format!("expected degree {d}, found a {}-tuple", t.len())))
            }
            (Some((_, t)), _) => t.len(),
            (None, Some(d)) => d,
            (None, None) => return Err(Error::Parse("cannot infer the degree of `0`".into())),
        };
        if tuple_count(base, degree).is_none() {
            return Err(Error::Parse(format!("{base}^{degree} tuples exceed the code range")));
        }
        let mut chain = Chain::zero(base, degree, theory);
        for (c, t) in terms {
            if t.len() != degree {
                return Err(Error::Parse("terms of mixed degree".into()));
            }
            if let Some(&x) = t.iter().find(|&&x| x >= base) {
                return Err(Error::Parse(format!("element {x} outside 0..{base}")));
            }
            if theory == Theory::Degenerate && !is_degenerate(&t) {
                return Err(Error::Parse(format!("{t:?} is not a degenerate tuple")));
            }
            chain.add_term(&t, &c);
        }
        Ok(chain)
    }
}

fn parse_terms(text: &str) -> Result<Vec<(Int, Vec<usize>)>> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() || s == "0" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut rest = s.as_str();
    while !rest.is_empty() {
        let open = rest
            .find('(')
            .ok_or_else(|| Error::Parse(format!("expected `(` in `{rest}`")))?;
        let close = rest[open..]
            .find(')')
            .map(|i| i + open)
            .ok_or_else(|| Error::Parse("unbalanced parentheses".into()))?;
        let prefix = rest[..open].trim_end_matches('*');
        let coeff = match prefix {
            "" | "+" => Int::ONE,
            "-" => -Int::ONE,
            p => p
                .parse::<Int>()
                .map_err(|e| Error::Parse(format!("coefficient `{p}`: {e}")))?,
        };
        let inner = &rest[open + 1..close];
        let tuple = if inner.is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|x| x.parse::<usize>().map_err(|e| Error::Parse(format!("entry `{x}`: {e}"))))
                .collect::<Result<Vec<_>>>()?
        };
        out.push((coeff, tuple));
        rest = &rest[close + 1..];
        if !rest.is_empty() && !rest.starts_with(['+', '-']) {
            return Err(Error::Parse(format!("expected a sign before `{rest}`")));
        }
    }
    Ok(out)
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (tuple, c)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let sign = if c.is_negative() { "" } else { "+" };
            let entries: Vec<String> = tuple.iter().map(|x| x.to_string()).collect();
            write!(f, "{sign}{c}*({})", entries.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chain[{} n={} k={}]({self})", self.theory, self.degree, self.base)
    }
}

impl AddAssign<&Chain> for Chain {
    fn add_assign(&mut self, rhs: &Chain) {
        assert_eq!(
            (self.base, self.degree),
            (rhs.base, rhs.degree),
            "adding chains of different shape"
        );
        for (&code, c) in &rhs.terms {
            self.add_code(code, c);
        }
    }
}

impl SubAssign<&Chain> for Chain {
    fn sub_assign(&mut self, rhs: &Chain) {
        assert_eq!((self.base, self.degree), (rhs.base, rhs.degree));
        for (&code, c) in &rhs.terms {
            self.add_code(code, &-c);
        }
    }
}

impl Add<&Chain> for &Chain {
    type Output = Chain;
    fn add(self, rhs: &Chain) -> Chain {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Chain> for &Chain {
    type Output = Chain;
    fn sub(self, rhs: &Chain) -> Chain {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for Chain {
    type Output = Chain;
    fn add(mut self, rhs: Chain) -> Chain {
        self += &rhs;
        self
    }
}

impl Sub for Chain {
    type Output = Chain;
    fn sub(mut self, rhs: Chain) -> Chain {
        self -= &rhs;
        self
    }
}

impl Neg for &Chain {
    type Output = Chain;
    fn neg(self) -> Chain {
        self.scale(&-Int::ONE)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn codes_are_mixed_radix() {
        assert_eq!(encode(3, &[1, 0, 2]), 11);
        assert_eq!(decode(3, 3, 11), vec![1, 0, 2]);
        assert_eq!(encode(5, &[]), 0);
    }

    #[test]
    fn quandle_chains_drop_degenerate_terms() {
        let mut c = Chain::zero(3, 2, Theory::Quandle);
        c.add_term(&[1, 1], &Int::from(4));
        c.add_term(&[0, 1], &Int::from(2));
        assert_eq!(c.len(), 1);
        assert_eq!(c.coefficient(&[0, 1]), Int::from(2));
    }

    #[test]
    fn cancellation_removes_terms() {
        let a = Chain::from_terms(3, 2, Theory::Rack, [(&[0, 1][..], 2), (&[1, 2][..], 1)]);
        let b = Chain::from_terms(3, 2, Theory::Rack, [(&[0, 1][..], 2)]);
        let d = &a - &b;
        assert_eq!(d.len(), 1);
        assert!((&d - &d).is_zero());
    }

    #[test]
    fn modular_coefficients() {
        let c = Chain::from_terms(3, 1, Theory::Rack, [(&[0][..], 7), (&[1][..], -1), (&[2][..], 3)])
            .with_modulus(3);
        assert_eq!(c.coefficient(&[0]), Int::from(1));
        assert_eq!(c.coefficient(&[1]), Int::from(2));
        assert_eq!(c.coefficient(&[2]), Int::ZERO);
    }

    #[test]
    fn literal_syntax() {
        let c = Chain::parse("+1*(0,1,2) -1*(0,0,2)", 3, Theory::Rack, None).unwrap();
        assert_eq!(c.degree(), 3);
        assert_eq!(c.to_string(), "-1*(0,0,2) +1*(0,1,2)");
        let d = Chain::parse("(0,1) - (2,0) + 3*(1,2)", 3, Theory::Rack, None).unwrap();
        assert_eq!(d.coefficient(&[1, 2]), Int::from(3));
        assert_eq!(d.coefficient(&[2, 0]), Int::from(-1));
        assert_eq!(Chain::parse("0", 3, Theory::Rack, Some(2)).unwrap().degree(), 2);
        assert!(Chain::parse("0", 3, Theory::Rack, None).is_err());
        assert!(Chain::parse("(0,3)", 3, Theory::Rack, None).is_err());
        assert!(Chain::parse("(0,1)", 3, Theory::Degenerate, None).is_err());
        assert!(Chain::parse("(0,1)(1,0)", 3, Theory::Rack, None).is_err());
        assert_eq!(Chain::parse("()", 3, Theory::Rack, None).unwrap().degree(), 0);
    }

    proptest! {
        #[test]
        fn literal_round_trip(terms in proptest::collection::vec((proptest::collection::vec(0usize..5, 3), -9i64..9), 0..12)) {
            let mut c = Chain::zero(5, 3, Theory::Rack);
            for (t, k) in &terms {
                c.add_term(t, &Int::from(*k));
            }
            let back = Chain::parse(&c.to_string(), 5, Theory::Rack, Some(3)).unwrap();
            prop_assert_eq!(back, c);
        }

        #[test]
        fn encode_decode(t in proptest::collection::vec(0usize..7, 0..9)) {
            prop_assert_eq!(decode(7, t.len(), encode(7, &t)), t);
        }
    }
}
