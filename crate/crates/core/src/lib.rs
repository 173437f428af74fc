//! Nonnegativity decision of forms on the standard simplex.
//!
//! A form `F` (homogeneous polynomial) is positive semi-definite on the
//! nonnegative orthant iff it is nonnegative on the simplex
//! `T_n = { x >= 0, x_1 + ... + x_n = 1 }`. This crate decides that question by
//! repeatedly subdividing `T_n` with a fixed scheme of subsimplexes, pulling `F`
//! back onto every cell through the cell's vertex matrix, and pruning cells on
//! which the pulled-back form has no negative coefficient. A cell whose form is
//! negative at its barycenter yields an exact rational counterexample.
//!
//! Modules:
//!
//! - [`form`]: exact rational forms, evaluation, linear substitution and the
//!   two sign classifiers.
//! - [`parser`]: text syntax for forms.
//! - [`subdivision`]: normalized matrices, built-in schemes, validation and the
//!   convergence test.
//! - [`scheme_file`]: the plain-text scheme file format.
//! - [`engine`]: the breadth-first successive substitution search.
//! - [`oracle`]: brute-force grid sampling and closed forms used to cross-check
//!   the engine.

pub mod dense;
pub mod engine;
pub mod form;
pub mod matrix;
pub mod oracle;
pub mod parser;
pub mod scheme_file;
pub mod subdivision;

pub use engine::{decide, decide_with, witness_point, DecideOptions, Outcome, RunReport, Verdict};
pub use form::{Form, FormError, Monomial, Rational};
pub use matrix::RatMatrix;
pub use parser::{format_form, parse_form, ParseError, VariableContext};
pub use subdivision::{
    check_convergence, compose, matrix_power, ConvergenceReport, NormalizedMatrix,
    SubdivisionScheme,
};

use num_bigint::BigInt;

/// Builds the exact rational `num / den`.
///
/// Panics if `den` is zero.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses an exact rational written as an integer or `p/q`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den == BigInt::from(0) {
        return None;
    }
    Some(Rational::new(num, den))
}
