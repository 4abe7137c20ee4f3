//! The finite Sierpinski family `S_n(p)`: `2^n × 2^n` lower-triangular
//! matrices whose entry `(j, k)` is `p^s(j-k)` when `k` is a submask of `j`
//! and zero otherwise.
//!
//! Two independent constructions are provided: Kronecker recursion from
//! `S_1(p) = [[1, 0], [p, 1]]` and the closed-form entry rule. Both produce a
//! [`MonomialMatrix`], which stores only exponents of the argument. Products
//! go through [`PolyMatrix`], whose entries are full polynomials.

use std::borrow::Cow;
use std::collections::BTreeMap;

use crate::algebra::ExactPoly;
use crate::digits::{carry_free_summands, s2};
use crate::error::{Error, Result};

/// Size limits on construction, multiplication and digit-sum exponents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest order built by either construction or by a Kronecker product.
    pub max_order: u32,
    /// Largest order accepted by [`mat_mul`].
    pub max_mul_order: u32,
    /// Largest `s(m)` accepted by the digital binomial check.
    pub exponent_cap: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_order: 12,
            max_mul_order: 10,
            exponent_cap: 24,
        }
    }
}

impl Limits {
    fn check_order(&self, order: u32) -> Result<()> {
        if order > self.max_order {
            return Err(Error::SizeLimit {
                what: "matrix order",
                requested: u64::from(order),
                limit: u64::from(self.max_order),
                cost: match 3u64.checked_pow(order) {
                    Some(entries) => format!("S_{order} stores 3^{order} = {entries} entries"),
                    None => format!("S_{order} stores 3^{order} entries"),
                },
            });
        }
        Ok(())
    }

    fn check_mul_order(&self, order: u32) -> Result<()> {
        if order > self.max_mul_order {
            return Err(Error::SizeLimit {
                what: "multiplication order",
                requested: u64::from(order),
                limit: u64::from(self.max_mul_order),
                cost: format!(
                    "a product of order {order} needs up to 4^{order} polynomial products"
                ),
            });
        }
        Ok(())
    }
}

/// Sparse rows: row `j` holds `(column, value)` sorted by column.
type Rows<T> = Vec<Vec<(u32, T)>>;

/// Scalar multiplication used to form Kronecker blocks.
trait BlockScalar: Clone {
    fn block_mul(&self, other: &Self) -> Self;
}

/// Exponents of a common argument multiply by adding.
impl BlockScalar for u32 {
    fn block_mul(&self, other: &Self) -> Self {
        self + other
    }
}

impl BlockScalar for ExactPoly {
    fn block_mul(&self, other: &Self) -> Self {
        self.mul(other)
    }
}

/// Kronecker product on sparse rows: block `(i, j)` of the result is
/// `a[i][j] · b`.
fn kronecker_rows<T: BlockScalar>(a: &Rows<T>, b: &Rows<T>) -> Rows<T> {
    let nb = b.len() as u32;
    let mut out = Vec::with_capacity(a.len() * b.len());
    for a_row in a {
        for b_row in b {
            let mut row = Vec::with_capacity(a_row.len() * b_row.len());
            for (ja, va) in a_row {
                for (jb, vb) in b_row {
                    row.push((ja * nb + jb, va.block_mul(vb)));
                }
            }
            out.push(row);
        }
    }
    out
}

/// `S_n(p)` stored as one `(column, exponent)` pair per nonzero entry; the
/// entry value is `argument^exponent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialMatrix {
    order: u32,
    argument: ExactPoly,
    rows: Rows<u32>,
}

impl MonomialMatrix {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dim(&self) -> usize {
        1 << self.order
    }

    pub fn argument(&self) -> &ExactPoly {
        &self.argument
    }

    /// Stored `(column, exponent)` pairs of row `j`, ascending by column.
    pub fn row(&self, j: usize) -> &[(u32, u32)] {
        &self.rows[j]
    }

    /// Total stored entries, `3^order`.
    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn exponent(&self, j: usize, k: usize) -> Option<u32> {
        let row = self.rows.get(j)?;
        row.binary_search_by_key(&(k as u32), |&(c, _)| c)
            .ok()
            .map(|i| row[i].1)
    }

    /// Entry `(j, k)` as a polynomial.
    pub fn entry(&self, j: usize, k: usize) -> ExactPoly {
        self.exponent(j, k)
            .map_or_else(ExactPoly::zero, |e| self.argument.pow(u64::from(e)))
    }

    /// Expands every entry to `argument^exponent`, dropping entries that
    /// vanish (only possible for the zero argument).
    pub fn expand(&self) -> PolyMatrix {
        let max_exp = self.order;
        let powers: Vec<ExactPoly> = (0..=max_exp)
            .map(|e| self.argument.pow(u64::from(e)))
            .collect();
        let rows = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .filter(|(_, e)| !powers[*e as usize].is_zero())
                    .map(|&(k, e)| (k, powers[e as usize].clone()))
                    .collect()
            })
            .collect();
        PolyMatrix {
            order: self.order,
            rows,
        }
    }
}

/// Lower-triangular square matrix of polynomials, size `2^order`, storing
/// nonzero entries only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    order: u32,
    rows: Rows<ExactPoly>,
}

impl PolyMatrix {
    pub fn identity(order: u32) -> Self {
        PolyMatrix {
            order,
            rows: (0..1u32 << order)
                .map(|j| vec![(j, ExactPoly::one())])
                .collect(),
        }
    }

    /// Builds a matrix from dense rows; zero cells are dropped.
    ///
    /// Fails unless the row count is a power of two, every row has that many
    /// cells, and everything above the diagonal is zero.
    pub fn from_dense(cells: Vec<Vec<ExactPoly>>) -> Result<Self> {
        let dim = cells.len();
        if !dim.is_power_of_two() {
            return Err(Error::invalid(format!(
                "dimension {dim} is not a power of two"
            )));
        }
        let order = dim.trailing_zeros();
        let mut rows = Vec::with_capacity(dim);
        for (j, row) in cells.into_iter().enumerate() {
            if row.len() != dim {
                return Err(Error::invalid(format!(
                    "row {j} has {} cells, expected {dim}",
                    row.len()
                )));
            }
            let mut sparse = Vec::new();
            for (k, value) in row.into_iter().enumerate() {
                if value.is_zero() {
                    continue;
                }
                if k > j {
                    return Err(Error::invalid(format!(
                        "entry ({j},{k}) lies above the diagonal"
                    )));
                }
                sparse.push((k as u32, value));
            }
            rows.push(sparse);
        }
        Ok(PolyMatrix { order, rows })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dim(&self) -> usize {
        1 << self.order
    }

    /// Nonzero `(column, value)` pairs of row `j`, ascending by column.
    pub fn row(&self, j: usize) -> &[(u32, ExactPoly)] {
        &self.rows[j]
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn get(&self, j: usize, k: usize) -> Option<&ExactPoly> {
        let row = self.rows.get(j)?;
        row.binary_search_by_key(&(k as u32), |(c, _)| *c)
            .ok()
            .map(|i| &row[i].1)
    }

    pub fn entry(&self, j: usize, k: usize) -> ExactPoly {
        self.get(j, k).cloned().unwrap_or_default()
    }

    pub fn is_identity(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(j, row)| row.len() == 1 && row[0].0 as usize == j && row[0].1.is_one())
    }

    /// One line per row, all `2^order` cells rendered by `cell`, zeros as
    /// `"0"`, joined by `sep`.
    pub fn render(&self, sep: &str, cell: impl Fn(&ExactPoly) -> String) -> String {
        let dim = self.dim();
        let mut out = String::new();
        for row in &self.rows {
            let mut cells = vec!["0".to_string(); dim];
            for (k, value) in row {
                cells[*k as usize] = cell(value);
            }
            out.push_str(&cells.join(sep));
            out.push('\n');
        }
        out
    }

    /// Tab-separated canonical serialization of every entry.
    pub fn to_tsv(&self) -> String {
        self.render("\t", ExactPoly::to_string)
    }
}

/// Matrices comparable entry by entry as polynomials.
pub trait AsPolyMatrix {
    fn as_poly_matrix(&self) -> Cow<'_, PolyMatrix>;
}

impl AsPolyMatrix for PolyMatrix {
    fn as_poly_matrix(&self) -> Cow<'_, PolyMatrix> {
        Cow::Borrowed(self)
    }
}

impl AsPolyMatrix for MonomialMatrix {
    fn as_poly_matrix(&self) -> Cow<'_, PolyMatrix> {
        Cow::Owned(self.expand())
    }
}

/// `S_1(arg) = [[1, 0], [arg, 1]]` in exponent form.
fn s1_rows() -> Rows<u32> {
    vec![vec![(0, 0)], vec![(0, 1), (1, 0)]]
}

/// `S_n(arg)` by Kronecker recursion: `S_0 = [1]`, `S_{n+1} = S_1 ⊗ S_n`.
pub fn build_recursive(n: u32, arg: &ExactPoly, limits: &Limits) -> Result<MonomialMatrix> {
    limits.check_order(n)?;
    let s1 = s1_rows();
    let mut rows: Rows<u32> = vec![vec![(0, 0)]];
    for _ in 0..n {
        rows = kronecker_rows(&s1, &rows);
    }
    Ok(MonomialMatrix {
        order: n,
        argument: arg.clone(),
        rows,
    })
}

/// `S_n(arg)` entry by entry: `(j, k)` holds `arg^s(j-k)` exactly when
/// `(k, j - k)` is carry-free.
pub fn build_closed_form(n: u32, arg: &ExactPoly, limits: &Limits) -> Result<MonomialMatrix> {
    limits.check_order(n)?;
    let rows = (0..1u64 << n)
        .map(|j| {
            carry_free_summands(j)
                .into_iter()
                .map(|k| (k as u32, s2(j - k)))
                .collect()
        })
        .collect();
    Ok(MonomialMatrix {
        order: n,
        argument: arg.clone(),
        rows,
    })
}

/// The 0/1 Sierpinski matrix `S_n`, from the integer seed `[[1, 0], [1, 1]]`.
pub fn binary_sierpinski(n: u32, limits: &Limits) -> Result<PolyMatrix> {
    limits.check_order(n)?;
    let one = ExactPoly::one();
    let seed = PolyMatrix {
        order: 1,
        rows: vec![vec![(0, one.clone())], vec![(0, one.clone()), (1, one)]],
    };
    let mut acc = PolyMatrix::identity(0);
    for _ in 0..n {
        acc = kronecker(&seed, &acc, limits)?;
    }
    Ok(acc)
}

/// Kronecker product `a ⊗ b`, of order `a.order + b.order`.
pub fn kronecker(a: &PolyMatrix, b: &PolyMatrix, limits: &Limits) -> Result<PolyMatrix> {
    let order = a.order + b.order;
    limits.check_order(order)?;
    Ok(PolyMatrix {
        order,
        rows: kronecker_rows(&a.rows, &b.rows),
    })
}

/// Exact product `a · b` of lower-triangular polynomial matrices.
///
/// Row `j` of the product only visits the stored entries `a[j][i]` and, for
/// each, the stored entries of row `i` of `b`; terms are accumulated in
/// column order so the result does not depend on traversal details.
pub fn mat_mul(a: &PolyMatrix, b: &PolyMatrix, limits: &Limits) -> Result<PolyMatrix> {
    if a.order != b.order {
        return Err(Error::invalid(format!(
            "order mismatch: {} vs {}",
            a.order, b.order
        )));
    }
    limits.check_mul_order(a.order)?;
    let rows = a
        .rows
        .iter()
        .map(|a_row| {
            let mut acc: BTreeMap<u32, ExactPoly> = BTreeMap::new();
            for (i, a_ji) in a_row {
                for (k, b_ik) in &b.rows[*i as usize] {
                    acc.entry(*k).or_default().add_assign_ref(&a_ji.mul(b_ik));
                }
            }
            acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
        })
        .collect();
    Ok(PolyMatrix {
        order: a.order,
        rows,
    })
}

/// Entry-by-entry polynomial equality; monomial matrices are expanded first.
pub fn matrices_equal<A, B>(a: &A, b: &B) -> bool
where
    A: AsPolyMatrix + ?Sized,
    B: AsPolyMatrix + ?Sized,
{
    a.as_poly_matrix() == b.as_poly_matrix()
}

/// First position where two matrices differ, with both entries.
pub fn first_difference<A, B>(a: &A, b: &B) -> Option<(usize, usize, ExactPoly, ExactPoly)>
where
    A: AsPolyMatrix + ?Sized,
    B: AsPolyMatrix + ?Sized,
{
    let (a, b) = (a.as_poly_matrix(), b.as_poly_matrix());
    if a.order != b.order {
        return Some((
            a.dim().min(b.dim()),
            0,
            ExactPoly::zero(),
            ExactPoly::zero(),
        ));
    }
    for j in 0..a.dim() {
        if a.rows[j] == b.rows[j] {
            continue;
        }
        for k in 0..=j {
            let (x, y) = (a.entry(j, k), b.entry(j, k));
            if x != y {
                return Some((j, k, x, y));
            }
        }
    }
    None
}
