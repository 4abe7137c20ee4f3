//! Executable checks of the sum-of-digits identities.
//!
//! Every check returns an [`IdentityReport`] carrying both sides of the
//! comparison and, on failure, the first mismatch.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::algebra::{binomial, p_adic_valuation, ExactPoly, Monomial};
use crate::digits::{carry_count, carry_free, carry_free_summands, is_prime, s2, Submasks};
use crate::error::{Error, Result};
use crate::sierpinski::{
    build_closed_form, build_recursive, first_difference, mat_mul, Limits, PolyMatrix,
};

/// Largest `m` (exclusive) scanned by [`verify_additivity_form`].
pub const ADDITIVITY_MAX_M: u64 = 1 << 20;
/// Largest `n` accepted by [`verify_classical_reduction`].
pub const CLASSICAL_MAX_N: u32 = 24;
/// Largest row count accepted by [`verify_kummer`].
pub const KUMMER_MAX_ROWS: u64 = 1024;
/// Largest row count accepted by [`pascal_mod`].
pub const PASCAL_MAX_ROWS: usize = 1 << 14;
/// Largest order accepted by [`verify_triangle_matrix_correspondence`].
pub const CORRESPONDENCE_MAX_ORDER: u32 = 10;

/// Outcome of one identity check.
///
/// Serialized as one `key: value` line per field, in the order
/// `identity`, `parameter`, `status`, `lhs`, `rhs`, `first_mismatch`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub identity: String,
    pub parameter: String,
    pub passed: bool,
    pub lhs: String,
    pub rhs: String,
    pub first_mismatch: Option<String>,
}

impl IdentityReport {
    fn new(
        identity: &str,
        parameter: impl Into<String>,
        lhs: impl Into<String>,
        rhs: impl Into<String>,
        first_mismatch: Option<String>,
    ) -> Self {
        IdentityReport {
            identity: identity.to_string(),
            parameter: parameter.into(),
            passed: first_mismatch.is_none(),
            lhs: lhs.into(),
            rhs: rhs.into(),
            first_mismatch,
        }
    }

    pub fn status(&self) -> &'static str {
        if self.passed {
            "pass"
        } else {
            "fail"
        }
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "identity: {}", self.identity)?;
        writeln!(f, "parameter: {}", self.parameter)?;
        writeln!(f, "status: {}", self.status())?;
        writeln!(f, "lhs: {}", self.lhs)?;
        writeln!(f, "rhs: {}", self.rhs)?;
        writeln!(
            f,
            "first_mismatch: {}",
            self.first_mismatch.as_deref().unwrap_or("none")
        )
    }
}

/// Runs `check` over `params` and stops at the first failure, which is
/// returned as is. If everything passes, the summary report names the range.
pub fn scan<P, F>(
    identity: &str,
    range: &str,
    params: impl IntoIterator<Item = P>,
    mut check: F,
) -> Result<IdentityReport>
where
    F: FnMut(P) -> Result<IdentityReport>,
{
    let mut checked = 0u64;
    for p in params {
        let report = check(p)?;
        if !report.passed {
            return Ok(report);
        }
        checked += 1;
    }
    Ok(IdentityReport::new(
        identity,
        range,
        format!("{checked} cases"),
        format!("{checked} cases"),
        None,
    ))
}

/// One summand `k` of a digital binomial expansion, contributing `X^a·Y^b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Term {
    pub k: u64,
    /// `s(k)`
    pub a: u32,
    /// `s(m - k)`
    pub b: u32,
}

/// The carry-free decompositions `k + (m - k) = m`, ascending in `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermList {
    pub m: u64,
    pub terms: Vec<Term>,
}

impl TermList {
    /// `Σ X^a·Y^b` over the terms, collected.
    pub fn collected(&self) -> ExactPoly {
        let mut p = ExactPoly::zero();
        for t in &self.terms {
            p.add_term(Monomial::new(t.a, t.b), BigInt::one());
        }
        p
    }
}

/// Lists every carry-free `k` for `m` with its exponent pair. The list has
/// `2^s(m)` entries.
pub fn digital_expansion(m: u64) -> TermList {
    let terms = carry_free_summands(m)
        .into_iter()
        .map(|k| Term {
            k,
            a: s2(k),
            b: s2(m - k),
        })
        .collect();
    TermList { m, terms }
}

/// `(X + Y)^s(m)` and `Σ X^s(k)·Y^s(m-k)` over carry-free `k`.
///
/// The right side is accumulated while streaming over the summands, so no
/// term list of size `2^s(m)` is materialized.
pub fn digital_binomial_sides(m: u64, limits: &Limits) -> Result<(ExactPoly, ExactPoly)> {
    let weight = s2(m);
    if weight > limits.exponent_cap {
        return Err(Error::SizeLimit {
            what: "digit sum s(m)",
            requested: u64::from(weight),
            limit: u64::from(limits.exponent_cap),
            cost: format!("the right side has 2^{weight} summands"),
        });
    }
    let lhs = (&ExactPoly::x() + &ExactPoly::y()).pow(u64::from(weight));

    // popcounts of u64 are at most 64
    const SIDE: usize = 65;
    let mut counts = vec![0u64; SIDE * SIDE];
    for k in Submasks::new(m) {
        counts[s2(k) as usize * SIDE + s2(m - k) as usize] += 1;
    }
    let mut rhs = ExactPoly::zero();
    for (i, &c) in counts.iter().enumerate() {
        if c != 0 {
            let (a, b) = ((i / SIDE) as u32, (i % SIDE) as u32);
            rhs.add_term(Monomial::new(a, b), BigInt::from(c));
        }
    }
    Ok((lhs, rhs))
}

fn first_poly_mismatch(lhs: &ExactPoly, rhs: &ExactPoly) -> Option<String> {
    if lhs == rhs {
        return None;
    }
    let diff = lhs.sub(rhs);
    let (m, _) = diff.terms().next().expect("nonzero difference");
    Some(format!(
        "X^{}*Y^{}: lhs coefficient {}, rhs coefficient {}",
        m.x,
        m.y,
        lhs.coeff(m.x, m.y),
        rhs.coeff(m.x, m.y)
    ))
}

/// Symbolic check of `(X + Y)^s(m) = Σ_{(k, m-k) carry-free} X^s(k)·Y^s(m-k)`.
pub fn verify_digital_binomial(m: u64, limits: &Limits) -> Result<IdentityReport> {
    let (lhs, rhs) = digital_binomial_sides(m, limits)?;
    let mismatch = first_poly_mismatch(&lhs, &rhs);
    Ok(IdentityReport::new(
        "digital_binomial",
        format!("m={m}"),
        lhs.to_string(),
        rhs.to_string(),
        mismatch,
    ))
}

/// Checks by exhaustive scan over `0 ≤ k ≤ m` that the carry-free `k` are
/// exactly those with `s(k) + s(m - k) = s(m)`.
pub fn verify_additivity_form(m: u64) -> Result<IdentityReport> {
    if m >= ADDITIVITY_MAX_M {
        return Err(Error::SizeLimit {
            what: "m",
            requested: m,
            limit: ADDITIVITY_MAX_M - 1,
            cost: format!("the scan visits all {} values of k", m.saturating_add(1)),
        });
    }
    let sm = s2(m);
    let carry_free_set: Vec<u64> = (0..=m).filter(|&k| carry_free(k, m - k)).collect();
    let additive_set: Vec<u64> = (0..=m).filter(|&k| s2(k) + s2(m - k) == sm).collect();
    let mismatch = (0..=m)
        .find(|&k| carry_free(k, m - k) != (s2(k) + s2(m - k) == sm))
        .map(|k| {
            format!(
                "k={k}: carry_free={}, s(k)+s(m-k)={}, s(m)={sm}",
                carry_free(k, m - k),
                s2(k) + s2(m - k)
            )
        });
    Ok(IdentityReport::new(
        "additivity",
        format!("m={m}"),
        format_set(&carry_free_set),
        format_set(&additive_set),
        mismatch,
    ))
}

fn format_set(values: &[u64]) -> String {
    let inner: Vec<String> = values.iter().map(u64::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

/// Collects `Σ_{k < 2^n} X^s(k)·Y^s(2^n-1-k)` by exponent pair and returns the
/// coefficient of `X^i·Y^(n-i)` for `i = 0..=n`, together with the full
/// collected polynomial.
pub fn collected_coefficients(n: u32) -> Result<(Vec<BigInt>, ExactPoly)> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    if n > CLASSICAL_MAX_N {
        return Err(Error::SizeLimit {
            what: "n",
            requested: u64::from(n),
            limit: u64::from(CLASSICAL_MAX_N),
            cost: format!("the expansion has 2^{n} terms"),
        });
    }
    let m = (1u64 << n) - 1;
    let mut counts = vec![0u64; (n as usize + 1) * (n as usize + 1)];
    let side = n as usize + 1;
    for k in Submasks::new(m) {
        counts[s2(k) as usize * side + s2(m - k) as usize] += 1;
    }
    let mut collected = ExactPoly::zero();
    for (i, &c) in counts.iter().enumerate() {
        if c != 0 {
            collected.add_term(
                Monomial::new((i / side) as u32, (i % side) as u32),
                BigInt::from(c),
            );
        }
    }
    let coefficients = (0..=n).map(|i| collected.coeff(i, n - i)).collect();
    Ok((coefficients, collected))
}

/// At `m = 2^n - 1` the digital expansion collapses to the classical one:
/// the collected coefficient of `X^i·Y^(n-i)` is `C(n, i)`.
pub fn verify_classical_reduction(n: u32) -> Result<IdentityReport> {
    let (_, collected) = collected_coefficients(n)?;
    let classical =
        ExactPoly::from_terms((0..=n).map(|i| (i, n - i, binomial(u64::from(n), u64::from(i)))));
    let mismatch = first_poly_mismatch(&collected, &classical);
    Ok(IdentityReport::new(
        "classical_reduction",
        format!("n={n}"),
        collected.to_string(),
        classical.to_string(),
        mismatch,
    ))
}

/// Kummer: `v_p(C(n, k))` equals the number of carries adding `k` and
/// `n - k` in base `p`, for all `0 ≤ k ≤ n < n_max`.
///
/// Binomials come row by row from the additive Pascal recurrence.
pub fn verify_kummer(n_max: u64, p: u64) -> Result<IdentityReport> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    if n_max > KUMMER_MAX_ROWS {
        return Err(Error::SizeLimit {
            what: "n_max",
            requested: n_max,
            limit: KUMMER_MAX_ROWS,
            cost: format!("{n_max} rows of big-integer binomials"),
        });
    }
    let mut row: Vec<BigInt> = vec![BigInt::one()];
    let mut mismatch = None;
    'rows: for n in 0..n_max {
        if n > 0 {
            let mut next = Vec::with_capacity(row.len() + 1);
            next.push(BigInt::one());
            next.extend(row.windows(2).map(|w| &w[0] + &w[1]));
            next.push(BigInt::one());
            row = next;
        }
        for (k, c) in row.iter().enumerate() {
            let k = k as u64;
            let valuation = p_adic_valuation(c, p)?;
            let carries = carry_count(n, k, p)?;
            if valuation != carries {
                mismatch = Some(format!(
                    "n={n} k={k}: v_{p}(C(n,k))={valuation}, carries={carries}"
                ));
                break 'rows;
            }
        }
    }
    Ok(IdentityReport::new(
        "kummer",
        format!("n<{n_max} p={p}"),
        format!("v_{p}(C(n,k))"),
        format!("carries(k + (n-k)) in base {p}"),
        mismatch,
    ))
}

/// Rows `0..rows` of Pascal's triangle reduced mod a prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleMod {
    modulus: u32,
    cells: Vec<Vec<u32>>,
}

impl TriangleMod {
    pub fn rows(&self) -> usize {
        self.cells.len()
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Residues of row `n`, `n + 1` cells.
    pub fn row(&self, n: usize) -> &[u32] {
        &self.cells[n]
    }

    pub fn get(&self, n: usize, k: usize) -> u32 {
        self.cells[n][k]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[u32]> {
        self.cells.iter().map(Vec::as_slice)
    }
}

/// `C(n, k) mod p` for `0 ≤ k ≤ n < rows` via the Pascal recurrence mod `p`.
pub fn pascal_mod(rows: usize, p: u64) -> Result<TriangleMod> {
    if rows == 0 {
        return Err(Error::invalid("row count must be positive"));
    }
    if rows > PASCAL_MAX_ROWS {
        return Err(Error::SizeLimit {
            what: "rows",
            requested: rows as u64,
            limit: PASCAL_MAX_ROWS as u64,
            cost: format!("{} cells", rows as u64 * (rows as u64 + 1) / 2),
        });
    }
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    let modulus = u32::try_from(p)
        .map_err(|_| Error::invalid(format!("modulus {p} does not fit in 32 bits")))?;
    let m = u64::from(modulus);
    let mut cells: Vec<Vec<u32>> = Vec::with_capacity(rows);
    cells.push(vec![1]);
    for n in 1..rows {
        let prev = &cells[n - 1];
        let mut row = Vec::with_capacity(n + 1);
        row.push(1);
        row.extend(
            prev.windows(2)
                .map(|w| ((u64::from(w[0]) + u64::from(w[1])) % m) as u32),
        );
        row.push(1);
        cells.push(row);
    }
    Ok(TriangleMod { modulus, cells })
}

/// Entry `(j, k)` of `S_n(1)` equals `C(j, k) mod 2` on the whole lower
/// triangle.
pub fn verify_triangle_matrix_correspondence(n: u32, limits: &Limits) -> Result<IdentityReport> {
    if n > CORRESPONDENCE_MAX_ORDER {
        return Err(Error::SizeLimit {
            what: "order",
            requested: u64::from(n),
            limit: u64::from(CORRESPONDENCE_MAX_ORDER),
            cost: format!("4^{n} / 2 triangle cells"),
        });
    }
    let matrix = build_closed_form(n, &ExactPoly::one(), limits)?.expand();
    let dim = 1usize << n;
    let triangle = pascal_mod(dim, 2)?;
    let mut mismatch = None;
    'scan: for j in 0..dim {
        for k in 0..=j {
            let entry = matrix.entry(j, k);
            let residue = triangle.get(j, k);
            if entry != ExactPoly::constant(residue) {
                mismatch = Some(format!(
                    "(j,k)=({j},{k}): matrix entry {entry}, C(j,k) mod 2 = {residue}"
                ));
                break 'scan;
            }
        }
    }
    Ok(IdentityReport::new(
        "correspondence",
        format!("n={n}"),
        format!("S_{n}(1)"),
        format!("C(j,k) mod 2, j < {dim}"),
        mismatch,
    ))
}

fn x_plus_y() -> ExactPoly {
    &ExactPoly::x() + &ExactPoly::y()
}

fn matrix_report(
    identity: &str,
    n: u32,
    lhs_name: String,
    rhs_name: String,
    lhs: &PolyMatrix,
    rhs: &PolyMatrix,
) -> IdentityReport {
    let mismatch = first_difference(lhs, rhs).map(|(j, k, a, b)| format!("({j},{k}): {a} != {b}"));
    IdentityReport::new(identity, format!("n={n}"), lhs_name, rhs_name, mismatch)
}

/// `S_n(X)·S_n(Y) = S_n(X + Y)` as exact polynomial matrices.
pub fn verify_group_law(n: u32, limits: &Limits) -> Result<IdentityReport> {
    let sx = build_recursive(n, &ExactPoly::x(), limits)?.expand();
    let sy = build_recursive(n, &ExactPoly::y(), limits)?.expand();
    let product = mat_mul(&sx, &sy, limits)?;
    let sum = build_closed_form(n, &x_plus_y(), limits)?.expand();
    Ok(matrix_report(
        "group_law",
        n,
        format!("S_{n}(X)*S_{n}(Y)"),
        format!("S_{n}(X+Y)"),
        &product,
        &sum,
    ))
}

/// `S_n(X)·S_n(-X) = I`.
pub fn verify_inverse(n: u32, limits: &Limits) -> Result<IdentityReport> {
    let sx = build_recursive(n, &ExactPoly::x(), limits)?.expand();
    let sneg = build_recursive(n, &ExactPoly::x().neg(), limits)?.expand();
    let product = mat_mul(&sx, &sneg, limits)?;
    Ok(matrix_report(
        "inverse",
        n,
        format!("S_{n}(X)*S_{n}(-X)"),
        format!("I_{n}"),
        &product,
        &PolyMatrix::identity(n),
    ))
}

/// Kronecker recursion and the closed-form rule give the same `S_n(arg)`.
pub fn verify_construction_equivalence(
    n: u32,
    arg: &ExactPoly,
    limits: &Limits,
) -> Result<IdentityReport> {
    let recursive = build_recursive(n, arg, limits)?;
    let closed = build_closed_form(n, arg, limits)?;
    let mismatch =
        first_difference(&recursive, &closed).map(|(j, k, a, b)| format!("({j},{k}): {a} != {b}"));
    Ok(IdentityReport::new(
        "construction_equivalence",
        format!("n={n} arg={arg}"),
        "kronecker",
        "closed_form",
        mismatch,
    ))
}
