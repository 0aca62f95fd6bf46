//! Expression language: a small AST over one real variable `x` with
//! arithmetic, real-literal powers and the elementary functions
//! sin/cos/exp/ln/sqrt, plus evaluation under a real-branch power policy.

mod parse;

pub use parse::{parse, ParseError};

use std::fmt;

/// Exponents within this distance of an integer are treated as that
/// integer for domain purposes, so `(x-1)^3` accepts negative bases
/// while `(x-1)^0.5` does not.
pub const INTEGER_EXPONENT_TOL: f64 = 1e-12;

/// Immutable expression tree over a single real variable.
///
/// Power exponents are real literals, not subexpressions; that is enough
/// for every function this crate manipulates. Trees are finite, acyclic
/// and structurally comparable.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, f64),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
    Ln(Box<Expr>),
    Sqrt(Box<Expr>),
}

/// Outcome of evaluating an expression at a point.
///
/// `domain_ok` is false exactly when evaluation hit a domain violation:
/// an even root of a negative number, `ln` of a non-positive number,
/// division by zero, zero raised to a non-positive power, or a fractional
/// power of a negative base. The value is NaN in that case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    pub domain_ok: bool,
}

impl EvalResult {
    pub fn ok(value: f64) -> Self {
        EvalResult { value, domain_ok: true }
    }

    pub fn violation() -> Self {
        EvalResult { value: f64::NAN, domain_ok: false }
    }

    /// The value when it is both in-domain and finite, `None` otherwise.
    /// Overflowed evaluations (e.g. `exp` of a large argument) are
    /// domain-ok but non-finite and are rejected here.
    pub fn finite(&self) -> Option<f64> {
        (self.domain_ok && self.value.is_finite()).then_some(self.value)
    }
}

/// Returns the rounded exponent when `p` is within [`INTEGER_EXPONENT_TOL`]
/// of an integer.
pub(crate) fn integer_exponent(p: f64) -> Option<f64> {
    let rounded = p.round();
    ((p - rounded).abs() <= INTEGER_EXPONENT_TOL).then_some(rounded)
}

/// Real-branch power: `base^p` for non-integer `p` is defined only for
/// `base > 0`; `base = 0` gives 0 for `p > 0` and a domain violation for
/// `p <= 0`. Integer exponents accept any base (except `0` to a
/// non-positive power).
pub(crate) fn real_pow(base: f64, p: f64) -> Option<f64> {
    match integer_exponent(p) {
        Some(n) => {
            if base == 0.0 {
                (n > 0.0).then_some(0.0)
            } else {
                // powf on an exactly integral exponent follows the IEEE
                // pow rules for negative bases.
                Some(base.powf(n))
            }
        }
        None => {
            if base > 0.0 {
                Some(base.powf(p))
            } else if base == 0.0 && p > 0.0 {
                Some(0.0)
            } else {
                None
            }
        }
    }
}

impl Expr {
    // Plain constructors; these never rearrange or fold anything, so
    // parse trees keep their exact shape.
    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }
    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }
    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }
    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }
    pub fn pow(base: Expr, exponent: f64) -> Expr {
        Expr::Pow(Box::new(base), exponent)
    }
    pub fn sin(e: Expr) -> Expr {
        Expr::Sin(Box::new(e))
    }
    pub fn cos(e: Expr) -> Expr {
        Expr::Cos(Box::new(e))
    }
    pub fn exp(e: Expr) -> Expr {
        Expr::Exp(Box::new(e))
    }
    pub fn ln(e: Expr) -> Expr {
        Expr::Ln(Box::new(e))
    }
    pub fn sqrt(e: Expr) -> Expr {
        Expr::Sqrt(Box::new(e))
    }

    /// Evaluates the expression at `x`. Domain problems are reported
    /// in-band through [`EvalResult::domain_ok`]; evaluation itself never
    /// fails.
    pub fn evaluate(&self, x: f64) -> EvalResult {
        match self {
            Expr::Const(c) => EvalResult::ok(*c),
            Expr::Var => EvalResult::ok(x),
            Expr::Add(a, b) => binary(a, b, x, |u, v| Some(u + v)),
            Expr::Sub(a, b) => binary(a, b, x, |u, v| Some(u - v)),
            Expr::Mul(a, b) => binary(a, b, x, |u, v| Some(u * v)),
            Expr::Div(a, b) => binary(a, b, x, |u, v| (v != 0.0).then(|| u / v)),
            Expr::Pow(base, p) => {
                let b = base.evaluate(x);
                if !b.domain_ok {
                    return EvalResult::violation();
                }
                match real_pow(b.value, *p) {
                    Some(v) => EvalResult::ok(v),
                    None => EvalResult::violation(),
                }
            }
            Expr::Sin(e) => unary(e, x, |u| Some(u.sin())),
            Expr::Cos(e) => unary(e, x, |u| Some(u.cos())),
            Expr::Exp(e) => unary(e, x, |u| Some(u.exp())),
            Expr::Ln(e) => unary(e, x, |u| (u > 0.0).then(|| u.ln())),
            Expr::Sqrt(e) => unary(e, x, |u| (u >= 0.0).then(|| u.sqrt())),
        }
    }

    /// Text form of the expression; `parse` returns a structurally equal
    /// tree for any printed expression.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// The value of a constant (variable-free) expression, when it
    /// evaluates to a finite number.
    pub(crate) fn const_value(&self) -> Option<f64> {
        // Probing with NaN poisons every Var-dependent path, so a finite
        // in-domain result can only come from a genuinely constant tree.
        self.evaluate(f64::NAN).finite()
    }
}

fn binary(a: &Expr, b: &Expr, x: f64, op: impl Fn(f64, f64) -> Option<f64>) -> EvalResult {
    let ra = a.evaluate(x);
    let rb = b.evaluate(x);
    if !ra.domain_ok || !rb.domain_ok {
        return EvalResult::violation();
    }
    match op(ra.value, rb.value) {
        Some(v) => EvalResult::ok(v),
        None => EvalResult::violation(),
    }
}

fn unary(e: &Expr, x: f64, op: impl Fn(f64) -> Option<f64>) -> EvalResult {
    let r = e.evaluate(x);
    if !r.domain_ok {
        return EvalResult::violation();
    }
    match op(r.value) {
        Some(v) => EvalResult::ok(v),
        None => EvalResult::violation(),
    }
}

impl std::str::FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

// Printing. Each node prints into a "slot" with a minimum binding level;
// a child whose own level is below the slot's gets parenthesized. The
// levels mirror the grammar: sums (0) < products (1) < unary minus (2)
// < powers (3) < atoms (4). `Mul(-1, e)` prints as unary minus so that
// negated results read naturally; the parser maps `-e` back to the same
// tree.
fn level(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 0,
        Expr::Mul(..) if as_negation(e).is_some() => 2,
        Expr::Mul(..) | Expr::Div(..) => 1,
        Expr::Const(c) if c.is_sign_negative() => 2,
        Expr::Pow(..) => 3,
        _ => 4,
    }
}

fn as_negation(e: &Expr) -> Option<&Expr> {
    match e {
        Expr::Mul(l, r) if **l == Expr::Const(-1.0) && !matches!(**r, Expr::Const(_)) => Some(r),
        _ => None,
    }
}

fn write_expr(e: &Expr, f: &mut fmt::Formatter<'_>, min_level: u8) -> fmt::Result {
    if level(e) < min_level {
        write!(f, "(")?;
        write_expr(e, f, 0)?;
        return write!(f, ")");
    }
    match e {
        Expr::Const(c) => write!(f, "{c}"),
        Expr::Var => write!(f, "x"),
        Expr::Add(a, b) => {
            write_expr(a, f, 0)?;
            write!(f, "+")?;
            write_expr(b, f, 1)
        }
        Expr::Sub(a, b) => {
            write_expr(a, f, 0)?;
            write!(f, "-")?;
            write_expr(b, f, 1)
        }
        Expr::Mul(a, b) => {
            if let Some(inner) = as_negation(e) {
                write!(f, "-")?;
                return write_expr(inner, f, 3);
            }
            write_expr(a, f, 1)?;
            write!(f, "*")?;
            write_expr(b, f, 2)
        }
        Expr::Div(a, b) => {
            write_expr(a, f, 1)?;
            write!(f, "/")?;
            write_expr(b, f, 2)
        }
        Expr::Pow(base, p) => {
            write_expr(base, f, 4)?;
            write!(f, "^{p}")
        }
        Expr::Sin(e) => write_func(f, "sin", e),
        Expr::Cos(e) => write_func(f, "cos", e),
        Expr::Exp(e) => write_func(f, "exp", e),
        Expr::Ln(e) => write_func(f, "ln", e),
        Expr::Sqrt(e) => write_func(f, "sqrt", e),
    }
}

fn write_func(f: &mut fmt::Formatter<'_>, name: &str, arg: &Expr) -> fmt::Result {
    write!(f, "{name}(")?;
    write_expr(arg, f, 0)?;
    write!(f, ")")
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(self, f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluate_sqrt() {
        let f = parse("sqrt(x)").unwrap();
        assert_eq!(f.evaluate(4.0), EvalResult::ok(2.0));
        assert!(!f.evaluate(-1.0).domain_ok);
    }

    #[test]
    fn evaluate_sin_sqrt() {
        // sin(0.5) frozen from an independent high-precision evaluation.
        let f = parse("sin(sqrt(x))").unwrap();
        let r = f.evaluate(0.25);
        assert!(r.domain_ok);
        assert!((r.value - 0.479425538604203).abs() < 1e-12);
    }

    #[test]
    fn integer_exponents_accept_negative_bases() {
        let f = parse("(x-1)^3").unwrap();
        assert_eq!(f.evaluate(0.0).value, -1.0);
        let g = parse("(x-1)^0.5").unwrap();
        assert!(!g.evaluate(0.0).domain_ok);
        assert!((g.evaluate(2.0).value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_base_power_policy() {
        assert_eq!(real_pow(0.0, 0.5), Some(0.0));
        assert_eq!(real_pow(0.0, 2.0), Some(0.0));
        assert_eq!(real_pow(0.0, 0.0), None);
        assert_eq!(real_pow(0.0, -1.0), None);
        assert_eq!(real_pow(0.0, -0.5), None);
    }

    #[test]
    fn near_integer_exponent_snaps() {
        // 1e-13 away from 3: treated as the integer 3 for domain purposes.
        assert!(real_pow(-2.0, 3.0 + 1e-13).is_some());
        assert!(real_pow(-2.0, 3.0 + 1e-9).is_none());
    }

    #[test]
    fn division_by_zero_is_violation() {
        let f = parse("1/x").unwrap();
        assert!(!f.evaluate(0.0).domain_ok);
        assert_eq!(f.evaluate(2.0).value, 0.5);
    }

    #[test]
    fn ln_domain() {
        let f = parse("ln(x)").unwrap();
        assert!(!f.evaluate(0.0).domain_ok);
        assert!(!f.evaluate(-1.0).domain_ok);
        assert_eq!(f.evaluate(1.0).value, 0.0);
    }

    #[test]
    fn to_text_examples() {
        assert_eq!(Expr::sqrt(Expr::Var).to_text(), "sqrt(x)");
        assert_eq!(Expr::pow(Expr::Var, 0.5).to_text(), "x^0.5");
        assert_eq!(Expr::mul(Expr::Const(2.0), Expr::Var).to_text(), "2*x");
    }

    #[test]
    fn printing_parenthesizes_structurally() {
        let e = Expr::mul(
            Expr::add(Expr::Var, Expr::Const(1.0)),
            Expr::sub(Expr::Var, Expr::Const(2.0)),
        );
        assert_eq!(e.to_text(), "(x+1)*(x-2)");
        let n = Expr::mul(Expr::Const(-1.0), Expr::sin(Expr::Var));
        assert_eq!(n.to_text(), "-sin(x)");
        let p = Expr::pow(Expr::add(Expr::Var, Expr::Const(1.0)), -2.0);
        assert_eq!(p.to_text(), "(x+1)^-2");
    }

    #[test]
    fn const_value_rejects_variables() {
        assert_eq!(parse("1+2").unwrap().const_value(), Some(3.0));
        assert_eq!(Expr::sub(Expr::Var, Expr::Var).const_value(), None);
    }
}
