//! Truncated elements of the universal Novikov field with rational exponents
//! and rational coefficients.
//!
//! An element is a finite sum `Σ a_i t^{λ_i}` together with a truncation
//! level `T`: every exponent is below `T`, and the element is only known
//! modulo `t^T`. `T = +∞` means the sum is exact.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{int, parse_rational, Rational};

/// A rational number or `+∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Extended {
    Finite(Rational),
    Infinity,
}

impl Extended {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Extended::Finite(r) => Some(r),
            Extended::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinity)
    }

    fn add(&self, other: &Extended) -> Extended {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a + b),
            _ => Extended::Infinity,
        }
    }

    fn min(self, other: Extended) -> Extended {
        if self <= other {
            self
        } else {
            other
        }
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Extended {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => a.cmp(b),
            (Extended::Finite(_), Extended::Infinity) => Ordering::Less,
            (Extended::Infinity, Extended::Finite(_)) => Ordering::Greater,
            (Extended::Infinity, Extended::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(r) => write!(f, "{r}"),
            Extended::Infinity => write!(f, "inf"),
        }
    }
}

impl From<Rational> for Extended {
    fn from(r: Rational) -> Self {
        Extended::Finite(r)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NovikovElement {
    // strictly increasing exponents, nonzero coefficients, all below `truncation`
    terms: Vec<(Rational, Rational)>,
    truncation: Extended,
}

impl NovikovElement {
    pub fn zero() -> Self {
        NovikovElement { terms: Vec::new(), truncation: Extended::Infinity }
    }

    pub fn one() -> Self {
        Self::monomial(Rational::one(), Rational::zero())
    }

    /// `coeff * t^exp`, exact.
    pub fn monomial(coeff: Rational, exp: Rational) -> Self {
        Self::from_terms(vec![(exp, coeff)], Extended::Infinity)
    }

    /// `t^exp`, exact.
    pub fn t_pow(exp: Rational) -> Self {
        Self::monomial(Rational::one(), exp)
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, Rational::zero())
    }

    /// Builds an element from `(exponent, coefficient)` pairs in any order.
    /// Repeated exponents are summed; zero coefficients and exponents at or
    /// above the truncation are dropped.
    pub fn from_terms(terms: Vec<(Rational, Rational)>, truncation: Extended) -> Self {
        let mut acc: BTreeMap<Rational, Rational> = BTreeMap::new();
        for (e, c) in terms {
            *acc.entry(e).or_insert_with(Rational::zero) += c;
        }
        let terms = acc
            .into_iter()
            .filter(|(e, c)| !c.is_zero() && Extended::Finite(e.clone()) < truncation)
            .collect();
        NovikovElement { terms, truncation }
    }

    pub fn terms(&self) -> &[(Rational, Rational)] {
        &self.terms
    }

    pub fn truncation(&self) -> &Extended {
        &self.truncation
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_zero() && self.terms[0].1.is_one()
    }

    /// Lowers the truncation to `min(current, level)`.
    pub fn truncate(&self, level: &Extended) -> Self {
        let t = self.truncation.clone().min(level.clone());
        Self::from_terms(self.terms.clone(), t)
    }

    pub fn truncate_at(&self, level: &Rational) -> Self {
        self.truncate(&Extended::Finite(level.clone()))
    }

    /// Minimum exponent; `+∞` for zero.
    pub fn val(&self) -> Extended {
        match self.terms.first() {
            Some((e, _)) => Extended::Finite(e.clone()),
            None => Extended::Infinity,
        }
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let t = self.truncation.clone().min(other.truncation.clone());
        let mut all = self.terms.clone();
        all.extend(other.terms.iter().cloned());
        Self::from_terms(all, t)
    }

    pub fn neg(&self) -> Self {
        NovikovElement {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
            truncation: self.truncation.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        // An error term of order t^{T_a} in `self` contributes at order
        // T_a + val(other); the plain min(T_a, T_b) is additionally kept.
        let ta = &self.truncation;
        let tb = &other.truncation;
        let t = ta
            .clone()
            .min(tb.clone())
            .min(ta.add(&other.val()))
            .min(tb.add(&self.val()))
            .min(ta.add(tb));
        let mut all = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                all.push((e1 + e2, c1 * c2));
            }
        }
        Self::from_terms(all, t)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(
            self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
            self.truncation.clone(),
        )
    }

    /// Multiplication by `t^s`; shifts the truncation along.
    pub fn shift(&self, s: &Rational) -> Self {
        let truncation = match &self.truncation {
            Extended::Finite(t) => Extended::Finite(t + s),
            Extended::Infinity => Extended::Infinity,
        };
        NovikovElement {
            terms: self.terms.iter().map(|(e, c)| (e + s, c.clone())).collect(),
            truncation,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// `b` with `a * b ≡ 1 mod t^E`.
    pub fn inv(&self, e: &Rational) -> Result<Self> {
        let (v, lead) = match self.terms.first() {
            Some((v, c)) => (v.clone(), c.clone()),
            None => return Err(Error::DivisionByZero),
        };
        // a = lead t^v (1 + r), val(r) > 0
        let r = self.shift(&-&v).scale(&lead.recip()).sub(&Self::one());
        // b must be known modulo t^{E - v} so that a b is known modulo t^E;
        // a's own truncation T_a limits b to T_a - 2v.
        let mut level = Extended::Finite(e - &v);
        if let Extended::Finite(ta) = &self.truncation {
            level = level.min(Extended::Finite(ta - &v - &v));
        }
        let series_level = match &level {
            Extended::Finite(l) => l + &v,
            Extended::Infinity => unreachable!("finite by construction"),
        };
        let neg_r = r.neg();
        let mut sum = Self::one().truncate_at(&series_level);
        match neg_r.val() {
            Extended::Infinity => {}
            Extended::Finite(step) => {
                debug_assert!(step.is_positive());
                let mut power = Self::one();
                let mut reach = Rational::zero();
                loop {
                    power = power.mul(&neg_r).truncate_at(&series_level);
                    reach += &step;
                    if reach >= series_level || power.is_zero() {
                        break;
                    }
                    sum = sum.add(&power);
                }
            }
        }
        Ok(sum.scale(&lead.recip()).shift(&-&v).truncate(&level))
    }

    /// All terms of `a - b` have exponent `>= E`.
    pub fn eq_mod(&self, other: &Self, e: &Rational) -> bool {
        let diff = self.sub(other);
        diff.terms.iter().all(|(x, _)| x >= e)
    }

    /// Whether every coefficient is an integer.
    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_integer())
    }

    /// Parses the text format `3/2*t^{1/3} + -1*t^{2}`. A bare coefficient
    /// means exponent 0, a bare `t^{e}` means coefficient 1, `0` is zero.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty Novikov element".into()));
        }
        let mut terms = Vec::new();
        for part in s.split(" + ") {
            let part = part.trim();
            let (coeff, exp) = if let Some((c, t)) = part.split_once('*') {
                (parse_rational(c)?, parse_t_power(t)?)
            } else if part.starts_with('t') {
                (Rational::one(), parse_t_power(part)?)
            } else {
                (parse_rational(part)?, Rational::zero())
            };
            terms.push((exp, coeff));
        }
        Ok(Self::from_terms(terms, Extended::Infinity))
    }

    pub fn to_json_terms(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(e, c)| TermJson { exp: e.to_string(), coeff: c.to_string() })
            .collect()
    }

    pub fn from_json_terms(terms: &[TermJson]) -> Result<Self> {
        let parsed = terms
            .iter()
            .map(|t| Ok((parse_rational(&t.exp)?, parse_rational(&t.coeff)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_terms(parsed, Extended::Infinity))
    }
}

fn parse_t_power(s: &str) -> Result<Rational> {
    let s = s.trim();
    let body = s
        .strip_prefix("t^{")
        .and_then(|b| b.strip_suffix('}'))
        .ok_or_else(|| Error::Parse(format!("expected t^{{e}}, found {s:?}")))?;
    parse_rational(body)
}

/// JSON form of one term: `{"exp": "p/q", "coeff": "p/q"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: String,
    pub coeff: String,
}

impl fmt::Display for NovikovElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*t^{{{e}}}")?;
        }
        Ok(())
    }
}

impl From<i64> for NovikovElement {
    fn from(c: i64) -> Self {
        NovikovElement::constant(int(c))
    }
}

/// Integer coefficient times a power of t; shorthand used in tests.
pub fn term(coeff: i64, exp: Rational) -> NovikovElement {
    NovikovElement::monomial(Rational::from_integer(BigInt::from(coeff)), exp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rat;
    use proptest::prelude::*;

    fn el(s: &str) -> NovikovElement {
        NovikovElement::parse(s).unwrap()
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(el("t^{1/2} + 2*t^{1}").val(), Extended::Finite(rat(1, 2)));
        assert_eq!(NovikovElement::zero().val(), Extended::Infinity);
        assert_eq!(el("3*t^{-1} + t^{2}").val(), Extended::Finite(int(-1)));
    }

    #[test]
    fn addition_examples() {
        assert_eq!(el("1 + t^{1}").add(&el("-1 + t^{1}")), el("2*t^{1}"));
        let a = el("3/2*t^{1/3} + -1*t^{2}");
        assert_eq!(a.add(&NovikovElement::zero()), a);
        assert_eq!(el("t^{1/3}").add(&el("t^{1/3}")), el("2*t^{1/3}"));
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(el("1 + t^{1}").mul(&el("1 + -1*t^{1}")), el("1 + -1*t^{2}"));
        assert_eq!(el("t^{1/2}").mul(&el("t^{1/2}")), el("t^{1}"));
        let a = el("3/2*t^{1/3} + -1*t^{2}");
        assert_eq!(a.mul(&NovikovElement::one()), a);
    }

    #[test]
    fn inverse_examples() {
        let inv = el("1 + t^{1}").inv(&int(4)).unwrap();
        assert_eq!(inv.terms(), el("1 + -1*t^{1} + t^{2} + -1*t^{3}").terms());

        let inv = el("2*t^{1/3}").inv(&int(1)).unwrap();
        assert_eq!(inv.terms(), el("1/2*t^{-1/3}").terms());

        // multiply-back oracle
        let a = el("1 + t^{1} + t^{2}");
        let b = a.inv(&int(3)).unwrap();
        assert!(a.mul(&b).eq_mod(&NovikovElement::one(), &int(3)));
        assert_eq!(b.terms(), el("1 + -1*t^{1}").terms());

        assert_eq!(NovikovElement::zero().inv(&int(1)), Err(Error::DivisionByZero));
        assert_eq!(Error::DivisionByZero.to_string(), "division by zero");
    }

    #[test]
    fn eq_mod_examples() {
        assert!(el("1 + t^{10}").eq_mod(&el("1"), &int(5)));
        assert!(!el("1 + t^{1}").eq_mod(&el("1"), &int(5)));
        let a = el("2*t^{-3} + t^{7/2}");
        for e in [-10, 0, 3, 100] {
            assert!(a.eq_mod(&a, &int(e)));
        }
    }

    #[test]
    fn text_format_round_trips() {
        let a = el("3/2*t^{1/3} + -1*t^{2}");
        assert_eq!(a.to_string(), "3/2*t^{1/3} + -1*t^{2}");
        assert_eq!(NovikovElement::parse(&a.to_string()).unwrap(), a);
        assert_eq!(NovikovElement::from_json_terms(&a.to_json_terms()).unwrap(), a);
        assert!(NovikovElement::parse("3*s^{2}").is_err());
    }

    #[test]
    fn truncation_propagates() {
        let a = el("1 + t^{1}").truncate_at(&int(3));
        let b = el("t^{2}");
        let s = a.add(&b);
        assert_eq!(s.truncation(), &Extended::Finite(int(3)));
        assert_eq!(a.mul(&a).terms(), el("1 + 2*t^{1} + t^{2}").terms());
        // t^{-1} times something known mod t^3 is only known mod t^2
        let p = el("t^{-1}").mul(&a);
        assert_eq!(p.truncation(), &Extended::Finite(int(2)));
        assert_eq!(p.terms(), el("t^{-1} + 1").terms());
    }

    fn arb_element() -> impl Strategy<Value = NovikovElement> {
        proptest::collection::vec((-6i64..12, 1i64..4, -5i64..6), 0..5).prop_map(|ts| {
            NovikovElement::from_terms(
                ts.into_iter().map(|(n, d, c)| (rat(n, d), int(c))).collect(),
                Extended::Infinity,
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn valuation_is_multiplicative(a in arb_element(), b in arb_element()) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            prop_assert_eq!(a.mul(&b).val(), a.val().add(&b.val()));
        }

        #[test]
        fn ultrametric_inequality(a in arb_element(), b in arb_element()) {
            let s = a.add(&b).val();
            let m = a.val().min(b.val());
            prop_assert!(s >= m);
            if a.val() != b.val() {
                prop_assert_eq!(s, m);
            }
        }

        #[test]
        fn inverse_multiplies_back(a in arb_element(), e in 1i64..10) {
            prop_assume!(!a.is_zero());
            let b = a.inv(&int(e)).unwrap();
            prop_assert!(a.mul(&b).eq_mod(&NovikovElement::one(), &int(e)));
        }

        #[test]
        fn ring_axioms_mod_truncation(a in arb_element(), b in arb_element(), c in arb_element(), e in 1i64..8) {
            let e = int(e);
            let (a, b, c) = (a.truncate_at(&e), b.truncate_at(&e), c.truncate_at(&e));
            prop_assert!(a.mul(&b).eq_mod(&b.mul(&a), &e));
            prop_assert!(a.add(&b).eq_mod(&b.add(&a), &e));
            prop_assert!(a.mul(&b).mul(&c).eq_mod(&a.mul(&b.mul(&c)), &e.clone().min(a.mul(&b).mul(&c).truncation().finite().cloned().unwrap_or(e.clone()))));
            prop_assert!(a.mul(&b.add(&c)).eq_mod(&a.mul(&b).add(&a.mul(&c)), &e.clone().min(a.mul(&b.add(&c)).truncation().finite().cloned().unwrap_or(e.clone()))));
        }
    }
}
