//! Exact arithmetic in ℚ(s), s = q^(1/2), plus q-combinatorics.
//!
//! [`LaurentPoly`] holds Laurent polynomials in s over ℚ; [`Scalar`] is the
//! canonical-form quotient field element used as the coefficient field by
//! every other module. The textual syntax (integers, `q`, `s`, `^`, `*`,
//! `+`, `-`, `/`, parentheses; `q` = `s^2`) is shared by all file formats.

mod laurent;
mod parse;
mod scalar;

pub use laurent::{laurent_cmp, poly_divrem, poly_gcd, poly_lcm, rat, rat_int, LaurentPoly, Rat};
pub use parse::{parse_scalar, tokenize, Parser, TokKind, Token};
pub use scalar::{
    q_binomial, q_combinatorics, q_factorial, q_int, scalar_arith, ArithOp, QCombo, Scalar,
};
