//! Exact arithmetic for the one-parameter Sierpinski matrix family and the
//! sum-of-digits form of the binomial theorem.
//!
//! - [`digits`]: sum of digits, carries, carry-free pairs and submask enumeration
//! - [`algebra`]: bivariate polynomials over big integers, binomials, p-adic valuation
//! - [`sierpinski`]: the matrices `S_n(p)` built by Kronecker recursion and by closed form
//! - [`identities`]: executable checks of the digit identities and Kummer's theorem
//! - [`cli`]: the `digibin` command-line front end

pub mod algebra;
pub mod cli;
pub mod digits;
mod error;
pub mod identities;
pub mod sierpinski;

pub use algebra::{binomial, p_adic_valuation, ExactPoly};
pub use digits::{carry_count, carry_free, carry_free_summands, sum_of_digits, DigitVector};
pub use error::{Error, Result};
pub use identities::{IdentityReport, TermList, TriangleMod};
pub use sierpinski::{Limits, MonomialMatrix, PolyMatrix};
