//! Symbolic-numeric engine for a family of generalized derivatives.
//!
//! The operator with parameters `(alpha, omega)` replaces the `x - c`
//! denominator of the classical difference quotient with
//! `(x-omega)^alpha - (c-omega)^alpha`. At `alpha = 1` it coincides with
//! the ordinary derivative; with fractional `alpha` it remains finite at
//! the branch point `x = omega`, which makes functions like `sin(sqrt(x))`
//! differentiable (and series-expandable) at zero.
//!
//! The crate provides:
//!
//! * [`expr`] — a small expression language (parser, evaluator, printer);
//! * [`symbolic`] — the classical symbolic derivative and a simplifier;
//! * [`numlimit`] — numerical one- and two-sided limit estimation;
//! * [`alphaderiv`] — the operator itself: defining limit, closed form,
//!   iterated derivatives, gauge generalization, parameter change and
//!   endpoint classification;
//! * [`series`] — Puiseux-style expansion at the base point;
//! * [`corpus`], [`check`] — the seeded random corpus and the nine
//!   cross-module property suites behind `alphacalc check`.

pub mod alphaderiv;
pub mod check;
pub mod corpus;
pub mod error;
pub mod expr;
pub mod numlimit;
pub mod series;
pub mod symbolic;

pub use alphaderiv::{
    alpha_derivative_at, alpha_derivative_at_omega, alpha_derivative_expr, change_parameters,
    classify_at_omega, gauge_derivative_at, higher_alpha_derivative_expr, DerivParams,
    OmegaBehavior,
};
pub use error::Error;
pub use expr::{parse, EvalResult, Expr, ParseError};
pub use numlimit::{estimate_limit, LimitConfig, LimitEstimate, LimitStatus, Side};
pub use series::{expand, PuiseuxSeries};
pub use symbolic::{differentiate, simplify, simplify_assuming};
