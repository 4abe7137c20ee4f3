//! Exact bivariate polynomials in `X`, `Y` over arbitrary-precision integers,
//! plus binomial coefficients and p-adic valuations.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};

use crate::digits::is_prime;
use crate::error::{Error, Result};

/// Exponent pair `(a, b)` of the monomial `X^a·Y^b`.
///
/// Ordered graded-lexicographically on `(a + b, a)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub x: u32,
    pub y: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { x: 0, y: 0 };

    pub fn new(x: u32, y: u32) -> Self {
        Monomial { x, y }
    }

    pub fn degree(self) -> u64 {
        u64::from(self.x) + u64::from(self.y)
    }

    fn times(self, other: Monomial) -> Monomial {
        Monomial {
            x: self.x + other.x,
            y: self.y + other.y,
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.degree(), self.x).cmp(&(other.degree(), other.x))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in two formal variables with big-integer coefficients.
///
/// No stored coefficient is ever zero, so derived equality is exact
/// polynomial equality.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ExactPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl ExactPoly {
    pub fn zero() -> Self {
        ExactPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn x() -> Self {
        Self::monomial(1, 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(1, 0, 1)
    }

    /// `c·X^a·Y^b`.
    pub fn monomial(c: impl Into<BigInt>, a: u32, b: u32) -> Self {
        let mut p = ExactPoly::zero();
        p.add_term(Monomial::new(a, b), c.into());
        p
    }

    /// Builds a polynomial from `(a, b, coefficient)` triples, merging repeats.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, C)>,
        C: Into<BigInt>,
    {
        let mut p = ExactPoly::zero();
        for (a, b, c) in terms {
            p.add_term(Monomial::new(a, b), c.into());
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Monomial::ONE).is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `X^a·Y^b`, zero when absent.
    pub fn coeff(&self, a: u32, b: u32) -> BigInt {
        self.terms
            .get(&Monomial::new(a, b))
            .cloned()
            .unwrap_or_default()
    }

    /// Terms in descending graded-lex order, the serialization order.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &BigInt)> {
        self.terms.iter().rev().map(|(m, c)| (*m, c))
    }

    /// Adds `c·m` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &ExactPoly) -> ExactPoly {
        let mut sum = self.clone();
        sum.add_assign_ref(other);
        sum
    }

    pub fn add_assign_ref(&mut self, other: &ExactPoly) {
        for (m, c) in &other.terms {
            self.add_term(*m, c.clone());
        }
    }

    pub fn sub(&self, other: &ExactPoly) -> ExactPoly {
        let mut diff = self.clone();
        for (m, c) in &other.terms {
            diff.add_term(*m, -c);
        }
        diff
    }

    pub fn neg(&self) -> ExactPoly {
        ExactPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &ExactPoly) -> ExactPoly {
        let mut product = ExactPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                product.add_term(ma.times(*mb), ca * cb);
            }
        }
        product
    }

    /// `self^e` by repeated squaring. `p^0` is 1 for every `p`, zero included.
    pub fn pow(&self, e: u64) -> ExactPoly {
        let mut result = ExactPoly::one();
        if e == 0 {
            return result;
        }
        let mut base = self.clone();
        let mut e = e;
        loop {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base);
        }
        result
    }

    /// Substitutes `X ← x0`, `Y ← y0`.
    pub fn eval(&self, x0: &BigInt, y0: &BigInt) -> BigInt {
        self.terms
            .iter()
            .map(|(m, c)| c * Pow::pow(x0, m.x) * Pow::pow(y0, m.y))
            .sum()
    }

    /// Human-oriented rendering with lowercase variables and implicit unit
    /// coefficients, e.g. `x^2 + 2xy + y^2`.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms().enumerate() {
            let magnitude = c.abs();
            match (i, c.is_negative()) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let mut body = String::new();
            for (var, e) in [("x", m.x), ("y", m.y)] {
                match e {
                    0 => {}
                    1 => body.push_str(var),
                    _ => body.push_str(&format!("{var}^{e}")),
                }
            }
            if body.is_empty() || !magnitude.is_one() {
                out.push_str(&magnitude.to_string());
            }
            out.push_str(&body);
        }
        out
    }
}

/// Canonical serialization: `1*X^2 + 2*X^1*Y^1 + 1*Y^2`, constant terms as
/// the bare coefficient, the zero polynomial as `0`.
impl fmt::Display for ExactPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}")?;
            if m.x > 0 {
                write!(f, "*X^{}", m.x)?;
            }
            if m.y > 0 {
                write!(f, "*Y^{}", m.y)?;
            }
        }
        Ok(())
    }
}

impl Add for &ExactPoly {
    type Output = ExactPoly;
    fn add(self, rhs: &ExactPoly) -> ExactPoly {
        ExactPoly::add(self, rhs)
    }
}

impl Sub for &ExactPoly {
    type Output = ExactPoly;
    fn sub(self, rhs: &ExactPoly) -> ExactPoly {
        ExactPoly::sub(self, rhs)
    }
}

impl Mul for &ExactPoly {
    type Output = ExactPoly;
    fn mul(self, rhs: &ExactPoly) -> ExactPoly {
        ExactPoly::mul(self, rhs)
    }
}

impl Neg for &ExactPoly {
    type Output = ExactPoly;
    fn neg(self) -> ExactPoly {
        ExactPoly::neg(self)
    }
}

/// Exact `C(n, k)`, zero when `k > n`.
///
/// Multiplicative form: after step `i` the accumulator is `C(n - k + i, i)`,
/// so every division is exact.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i;
    }
    acc
}

/// Largest `e` with `p^e | v`.
pub fn p_adic_valuation(v: &BigInt, p: u64) -> Result<u64> {
    if v.is_zero() {
        return Err(Error::invalid("valuation of zero is infinite"));
    }
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    let p = BigInt::from(p);
    let mut rest = v.abs();
    let mut e = 0;
    loop {
        if !(&rest % &p).is_zero() {
            return Ok(e);
        }
        rest /= &p;
        e += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x_plus_y() -> ExactPoly {
        &ExactPoly::x() + &ExactPoly::y()
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn addition_examples() {
        let s = x_plus_y();
        assert_eq!(s.len(), 2);
        assert_eq!(s.coeff(1, 0), big(1));
        assert_eq!(s.coeff(0, 1), big(1));
        assert_eq!(&s + &ExactPoly::zero(), s);
        let x_minus_y = &ExactPoly::x() - &ExactPoly::y();
        let sum = &s + &x_minus_y;
        assert_eq!(sum, ExactPoly::monomial(2, 1, 0));
        assert_eq!(sum.len(), 1, "cancelled Y term must not be stored");
    }

    #[test]
    fn multiplication_examples() {
        let sq = &x_plus_y() * &x_plus_y();
        assert_eq!(sq, ExactPoly::from_terms([(2, 0, 1), (1, 1, 2), (0, 2, 1)]));
        let p = ExactPoly::from_terms([(3, 1, -4), (0, 0, 7)]);
        assert_eq!(&p * &ExactPoly::one(), p);
        assert_eq!(
            &ExactPoly::x() * &ExactPoly::y(),
            ExactPoly::monomial(1, 1, 1)
        );
        assert!((&p * &ExactPoly::zero()).is_zero());
    }

    #[test]
    fn power_examples() {
        let s = x_plus_y();
        assert_eq!(
            s.pow(2),
            ExactPoly::from_terms([(2, 0, 1), (1, 1, 2), (0, 2, 1)])
        );
        assert_eq!(ExactPoly::zero().pow(0), ExactPoly::one());
        assert_eq!(s.pow(0), ExactPoly::one());
        assert!(ExactPoly::zero().pow(3).is_zero());
        let cube = &(&s * &s) * &s;
        assert_eq!(
            cube,
            ExactPoly::from_terms([(3, 0, 1), (2, 1, 3), (1, 2, 3), (0, 3, 1)])
        );
        assert_eq!(s.pow(3), cube);
    }

    #[test]
    fn power_matches_repeated_multiplication() {
        let p = ExactPoly::from_terms([(1, 0, 2), (0, 1, -3), (0, 0, 1)]);
        let mut acc = ExactPoly::one();
        for e in 0..12 {
            assert_eq!(p.pow(e), acc, "e = {e}");
            acc = &acc * &p;
        }
    }

    #[test]
    fn evaluation_examples() {
        let sq = x_plus_y().pow(2);
        assert_eq!(sq.eval(&big(1), &big(1)), big(4));
        assert_eq!(ExactPoly::zero().eval(&big(17), &big(-3)), big(0));
        let oracle = Pow::pow(&big(5), 5u32);
        assert_eq!(oracle, big(3125));
        assert_eq!(x_plus_y().pow(5).eval(&big(3), &big(2)), oracle);
    }

    #[test]
    fn serialization_is_graded_lex_descending() {
        assert_eq!(x_plus_y().pow(2).to_string(), "1*X^2 + 2*X^1*Y^1 + 1*Y^2");
        assert_eq!(ExactPoly::zero().to_string(), "0");
        assert_eq!(ExactPoly::one().to_string(), "1");
        let p = ExactPoly::from_terms([(0, 0, 5), (1, 0, -1), (0, 3, 2), (2, 0, 1)]);
        assert_eq!(p.to_string(), "2*Y^3 + 1*X^2 + -1*X^1 + 5");
    }

    #[test]
    fn pretty_printing() {
        assert_eq!(x_plus_y().pow(2).pretty(), "x^2 + 2xy + y^2");
        assert_eq!(x_plus_y().pow(3).pretty(), "x^3 + 3x^2y + 3xy^2 + y^3");
        assert_eq!(ExactPoly::one().pretty(), "1");
        assert_eq!(ExactPoly::zero().pretty(), "0");
        assert_eq!((&ExactPoly::x() - &ExactPoly::y()).pretty(), "x - y");
        assert_eq!(ExactPoly::x().neg().pretty(), "-x");
        assert_eq!(ExactPoly::constant(-3).pretty(), "-3");
    }

    fn pascal_row(n: usize) -> Vec<BigInt> {
        let mut row = vec![BigInt::one()];
        for _ in 0..n {
            let mut next = vec![BigInt::one(); row.len() + 1];
            for k in 1..row.len() {
                next[k] = &row[k - 1] + &row[k];
            }
            row = next;
        }
        row
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(7, 3), big(35));
        for n in 0..30 {
            assert_eq!(binomial(n, 0), big(1));
        }
        let oracle = pascal_row(49)[6].clone();
        assert_eq!(oracle, big(13_983_816));
        assert_eq!(binomial(49, 6), oracle);
        assert_eq!(binomial(3, 4), big(0));
        assert_eq!(binomial(0, 0), big(1));
    }

    #[test]
    fn binomial_beyond_u64() {
        let row = pascal_row(200);
        for (k, expected) in row.iter().enumerate() {
            assert_eq!(&binomial(200, k as u64), expected);
        }
        assert!(binomial(68, 34) > BigInt::from(u64::MAX));
    }

    #[test]
    fn binomial_pascal_recurrence_and_row_sums() {
        for n in 1..=200u64 {
            for k in 1..n {
                assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
            }
            let total: BigInt = (0..=n).map(|k| binomial(n, k)).sum();
            assert_eq!(total, BigInt::one() << n);
        }
    }

    fn valuation_by_trial_division(mut v: i64, p: i64) -> u64 {
        let mut e = 0;
        while v % p == 0 {
            v /= p;
            e += 1;
        }
        e
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation_by_trial_division(6, 2), 1);
        assert_eq!(p_adic_valuation(&big(6), 2).unwrap(), 1);
        for p in [2, 3, 5, 7, 101] {
            assert_eq!(p_adic_valuation(&big(1), p).unwrap(), 0);
        }
        assert_eq!(binomial(8, 4), big(70));
        assert_eq!(valuation_by_trial_division(70, 2), 1);
        assert_eq!(p_adic_valuation(&binomial(8, 4), 2).unwrap(), 1);
        assert_eq!(p_adic_valuation(&big(-48), 2).unwrap(), 4);
    }

    #[test]
    fn valuation_errors() {
        assert!(matches!(
            p_adic_valuation(&big(0), 2),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            p_adic_valuation(&big(12), 4),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            p_adic_valuation(&big(12), 1),
            Err(Error::InvalidArgument(_))
        ));
    }

    fn small_poly() -> impl Strategy<Value = ExactPoly> {
        prop::collection::vec((0u32..=8, 0u32..=8, -9i64..=9), 0..=6)
            .prop_map(ExactPoly::from_terms)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn ring_axioms(p in small_poly(), q in small_poly(), r in small_poly()) {
            prop_assert_eq!(&p + &q, &q + &p);
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
            prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
            prop_assert!((&p - &p).is_zero());
            prop_assert!(p.terms().all(|(_, c)| !c.is_zero()));
        }

        #[test]
        fn evaluation_is_a_ring_homomorphism(
            p in small_poly(),
            q in small_poly(),
            x0 in -50i64..=50,
            y0 in -50i64..=50,
        ) {
            let (x0, y0) = (big(x0), big(y0));
            prop_assert_eq!((&p * &q).eval(&x0, &y0), p.eval(&x0, &y0) * q.eval(&x0, &y0));
            prop_assert_eq!((&p + &q).eval(&x0, &y0), p.eval(&x0, &y0) + q.eval(&x0, &y0));
        }
    }

    proptest! {
        #[test]
        fn valuation_recovers_exponent(e in 0u32..=30, u in 1u64..=1_000_000, pi in 0usize..4) {
            let p = [2u64, 3, 5, 7][pi];
            prop_assume!(u % p != 0);
            let v = Pow::pow(&BigInt::from(p), e) * BigInt::from(u);
            prop_assert_eq!(p_adic_valuation(&v, p).unwrap(), u64::from(e));
        }
    }
}
