//! Digit-level primitives on machine-width integers.
//!
//! Everything here is least-significant-digit first. Big integers live in
//! [`crate::algebra`]; indices and summands never leave `u64`.

use crate::error::{Error, Result};

/// Digit expansion of a non-negative integer in a fixed base.
///
/// The canonical expansion of zero is the empty digit list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitVector {
    value: u64,
    base: u64,
    digits: Vec<u64>,
}

impl DigitVector {
    pub fn new(value: u64, base: u64) -> Result<Self> {
        check_base(base)?;
        let mut digits = Vec::new();
        let mut rest = value;
        while rest > 0 {
            digits.push(rest % base);
            rest /= base;
        }
        Ok(DigitVector {
            value,
            base,
            digits,
        })
    }

    pub fn binary(value: u64) -> Self {
        Self::new(value, 2).expect("base 2 is valid")
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    /// Digits, least significant first.
    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn digit_sum(&self) -> u64 {
        self.digits.iter().sum()
    }

    /// Positions of the nonzero digits, ascending.
    pub fn support(&self) -> Vec<u32> {
        self.digits
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(|(i, _)| i as u32)
            .collect()
    }

    /// Recomputes `Σ digits[i]·base^i`; `None` on overflow, which cannot
    /// happen for a vector produced by [`DigitVector::new`].
    pub fn reconstruct(&self) -> Option<u64> {
        self.digits
            .iter()
            .rev()
            .try_fold(0u64, |acc, &d| acc.checked_mul(self.base)?.checked_add(d))
    }
}

fn check_base(base: u64) -> Result<()> {
    if base < 2 {
        return Err(Error::invalid(format!(
            "base must be at least 2, got {base}"
        )));
    }
    Ok(())
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    Ok(())
}

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d <= n / d {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Sum of the base-`base` digits of `value`. For base 2 this is the popcount.
pub fn sum_of_digits(value: u64, base: u64) -> Result<u64> {
    check_base(base)?;
    if base == 2 {
        return Ok(u64::from(value.count_ones()));
    }
    let mut sum = 0;
    let mut rest = value;
    while rest > 0 {
        sum += rest % base;
        rest /= base;
    }
    Ok(sum)
}

/// Binary sum of digits, `s(k)`.
#[inline]
pub fn s2(value: u64) -> u32 {
    value.count_ones()
}

/// Whether binary long addition of `a` and `b` produces no carry.
///
/// Done digit by digit; [`disjoint_bits`] is the equivalent fast test.
pub fn carry_free(a: u64, b: u64) -> bool {
    let (mut a, mut b) = (a, b);
    let mut carry = 0u64;
    while a > 0 || b > 0 {
        let column = (a & 1) + (b & 1) + carry;
        carry = column >> 1;
        if carry != 0 {
            return false;
        }
        a >>= 1;
        b >>= 1;
    }
    true
}

/// `a & b == 0`; agrees with [`carry_free`] on every pair.
#[inline]
pub fn disjoint_bits(a: u64, b: u64) -> bool {
    a & b == 0
}

/// Number of carries in the base-`base` long addition of `k` and `n - k`.
pub fn carry_count(n: u64, k: u64, base: u64) -> Result<u64> {
    if k > n {
        return Err(Error::invalid(format!("k = {k} exceeds n = {n}")));
    }
    check_prime(base)?;
    let (mut a, mut b) = (k, n - k);
    let mut carry = 0u64;
    let mut carries = 0u64;
    while a > 0 || b > 0 || carry > 0 {
        let column = a % base + b % base + carry;
        carry = column / base;
        carries += carry;
        a /= base;
        b /= base;
    }
    Ok(carries)
}

/// Every `k` in `[0, m]` with `(k, m - k)` carry-free, ascending.
///
/// These are exactly the submasks of `m`: the `t`-th one is obtained by
/// spreading the bits of `t` over the set bits of `m`, which is monotone in
/// `t`, so the output comes out sorted. There are `2^s(m)` of them.
pub fn carry_free_summands(m: u64) -> Vec<u64> {
    let ones = s2(m);
    let count = 1u64 << ones;
    let positions: Vec<u32> = DigitVector::binary(m).support();
    (0..count)
        .map(|t| {
            positions
                .iter()
                .enumerate()
                .filter(|(i, _)| (t >> i) & 1 == 1)
                .fold(0u64, |k, (_, &p)| k | (1u64 << p))
        })
        .collect()
}

/// Iterator over all submasks of a mask, in descending order, ending with 0.
#[derive(Debug, Clone)]
pub struct Submasks {
    mask: u64,
    next: Option<u64>,
}

impl Submasks {
    pub fn new(mask: u64) -> Self {
        Submasks {
            mask,
            next: Some(mask),
        }
    }
}

impl Iterator for Submasks {
    type Item = u64;

    #[inline]
    fn next(&mut self) -> Option<u64> {
        let current = self.next?;
        self.next = if current == 0 {
            None
        } else {
            Some((current - 1) & self.mask)
        };
        Some(current)
    }
}
