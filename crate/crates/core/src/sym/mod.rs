//! Symbolic expression engine over the real coordinates `x1..x4`.
//!
//! Differentiation is exact; identity testing is done by seeded evaluation
//! rather than canonical simplification.

mod diff;
mod eval;
mod expr;
mod parse;
mod print;
mod rational;
mod zero;

pub use diff::{differentiate, substitute, substitute_params, wirtinger, Differentiator};
pub use eval::{evaluate, ComplexValue, EvalError, Evaluator, Point};
pub use expr::{Coordinate, Expr, Kind};
pub use parse::{parse_expression, parse_with, ParseError, Vocabulary};
pub use rational::CRational;
pub use zero::{probable_zero, probable_zero_at, ZeroTestError, ZeroVerdict, DEFAULT_SEED, DEFAULT_ZERO_TOL};

/// `z₁ = x¹ + i x²`
pub fn z1() -> Expr {
    &Expr::x(1) + &(&Expr::imag_unit() * &Expr::x(2))
}

/// `z₂ = x³ + i x⁴`
pub fn z2() -> Expr {
    &Expr::x(3) + &(&Expr::imag_unit() * &Expr::x(4))
}

/// `v = z₁ + z̄₁ = 2x¹`
pub fn v() -> Expr {
    Expr::x(1).scale(&CRational::int(2))
}

/// `u = v − 2 z₂ z̄₂`
pub fn u() -> Expr {
    let z2 = z2();
    &v() - &(&z2 * &z2.conj()).scale(&CRational::int(2))
}
