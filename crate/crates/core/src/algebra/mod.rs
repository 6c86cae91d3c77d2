//! Exact symbolic layer: expressions in `x_1..x_N`, `z_1..z_N` and the exchange-operator
//! calculus acting on them.

pub mod eval;
pub mod expression;
mod json;
pub mod numbers;
pub mod ops;
pub mod permutation;
mod poly;
pub mod term;

/// Largest particle count an [`Expression`] can hold.
pub const MAX_N: usize = 6;
/// Number of unordered index pairs at [`MAX_N`].
pub const MAX_PAIRS: usize = MAX_N * (MAX_N - 1) / 2;

pub use eval::{eval_numeric, XEvaluator};
pub use expression::Expression;
pub use numbers::ComplexRational;
pub use ops::{
    apply_dunkl, apply_exchange, apply_vandermonde_bar, apply_vandermonde_hat, derivative_x,
    divide_by_difference, parity, permute_x, swap_xz, symmetrize, Parity,
};
pub use permutation::Permutation;
pub use term::{DiffDenominator, ExponentialTag, Monomial, Term, Var};
