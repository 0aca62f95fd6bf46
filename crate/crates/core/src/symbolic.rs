//! Classical symbolic derivative and a lightweight simplifier.
//!
//! Simplification is best-effort and terminating: a bounded bottom-up
//! rewrite pass iterated to a fixed point. Rewrites only ever widen the
//! domain (a point that evaluated fine before still does afterwards), and
//! exponent combining on a shared base is guarded: it needs either the
//! base to be provably positive under the caller's `x > bound` assumption
//! or both exponents to be integers.

use crate::expr::Expr;

const MAX_SIMPLIFY_PASSES: usize = 32;

/// Symbolic derivative with respect to `x`.
///
/// The result is pointwise equal to the classical derivative wherever the
/// input is differentiable under the real-branch power policy. Output is
/// lightly cleaned (no `0 + e` or `1 * e` noise) but not simplified;
/// see [`simplify`].
pub fn differentiate(f: &Expr) -> Expr {
    match f {
        Expr::Const(_) => Expr::Const(0.0),
        Expr::Var => Expr::Const(1.0),
        Expr::Add(a, b) => add(differentiate(a), differentiate(b)),
        Expr::Sub(a, b) => sub(differentiate(a), differentiate(b)),
        Expr::Mul(a, b) => add(
            mul(differentiate(a), (**b).clone()),
            mul((**a).clone(), differentiate(b)),
        ),
        Expr::Div(a, b) => div(
            sub(
                mul(differentiate(a), (**b).clone()),
                mul((**a).clone(), differentiate(b)),
            ),
            Expr::pow((**b).clone(), 2.0),
        ),
        Expr::Pow(base, p) => mul(
            mul(Expr::Const(*p), Expr::pow((**base).clone(), p - 1.0)),
            differentiate(base),
        ),
        Expr::Sin(e) => mul(Expr::cos((**e).clone()), differentiate(e)),
        Expr::Cos(e) => mul(
            mul(Expr::Const(-1.0), Expr::sin((**e).clone())),
            differentiate(e),
        ),
        Expr::Exp(e) => mul(Expr::exp((**e).clone()), differentiate(e)),
        Expr::Ln(e) => div(differentiate(e), (**e).clone()),
        Expr::Sqrt(e) => mul(
            mul(Expr::Const(0.5), Expr::pow((**e).clone(), -0.5)),
            differentiate(e),
        ),
    }
}

/// Simplifies without any positivity assumption on `x`.
pub fn simplify(f: &Expr) -> Expr {
    simplify_assuming(f, None)
}

/// Simplifies under the optional assumption `x > bound`.
///
/// The assumption unlocks exponent rewrites such as
/// `x^0.5 * x^-0.5 -> 1` that would otherwise be kept because the base
/// is not known to be positive.
pub fn simplify_assuming(f: &Expr, x_above: Option<f64>) -> Expr {
    let mut cur = f.clone();
    for _ in 0..MAX_SIMPLIFY_PASSES {
        let next = pass(&cur, x_above);
        if next == cur {
            break;
        }
        cur = next;
    }
    cur
}

// Light constructors used while differentiating, so intermediate trees do
// not drown in `* 1` and `+ 0` factors.

fn add(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Const(x), Expr::Const(y)) if (x + y).is_finite() => Expr::Const(x + y),
        (Expr::Const(c), _) if *c == 0.0 => b,
        (_, Expr::Const(c)) if *c == 0.0 => a,
        _ => Expr::add(a, b),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Const(x), Expr::Const(y)) if (x - y).is_finite() => Expr::Const(x - y),
        (_, Expr::Const(c)) if *c == 0.0 => a,
        (Expr::Const(c), _) if *c == 0.0 => mul(Expr::Const(-1.0), b),
        _ => Expr::sub(a, b),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Const(x), Expr::Const(y)) if (x * y).is_finite() => Expr::Const(x * y),
        (Expr::Const(c), _) if *c == 0.0 => Expr::Const(0.0),
        (_, Expr::Const(c)) if *c == 0.0 => Expr::Const(0.0),
        (Expr::Const(c), _) if *c == 1.0 => b,
        (_, Expr::Const(c)) if *c == 1.0 => a,
        _ => Expr::mul(a, b),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Const(x), Expr::Const(y)) if *y != 0.0 && (x / y).is_finite() => Expr::Const(x / y),
        (Expr::Const(c), _) if *c == 0.0 => Expr::Const(0.0),
        (_, Expr::Const(c)) if *c == 1.0 => a,
        _ => Expr::div(a, b),
    }
}

/// True when `e > 0` holds at every admissible point, given `x > bound`.
fn known_positive(e: &Expr, x_above: Option<f64>) -> bool {
    match e {
        Expr::Const(c) => *c > 0.0,
        Expr::Var => x_above.is_some_and(|w| w >= 0.0),
        Expr::Sub(a, b) => match (&**a, &**b) {
            // x - a > 0 on (bound, inf) iff a <= bound
            (Expr::Var, Expr::Const(c)) => x_above.is_some_and(|w| *c <= w),
            _ => false,
        },
        Expr::Add(a, b) => match (&**a, &**b) {
            (Expr::Var, Expr::Const(c)) | (Expr::Const(c), Expr::Var) => {
                x_above.is_some_and(|w| w + *c >= 0.0)
            }
            _ => known_positive(a, x_above) && known_positive(b, x_above),
        },
        Expr::Mul(a, b) | Expr::Div(a, b) => {
            known_positive(a, x_above) && known_positive(b, x_above)
        }
        Expr::Exp(_) => true,
        Expr::Sqrt(inner) => known_positive(inner, x_above),
        Expr::Pow(base, _) => known_positive(base, x_above),
        _ => false,
    }
}

fn is_integer(p: f64) -> bool {
    p.is_finite() && p.fract() == 0.0 && p.abs() < 1e15
}

fn pass(e: &Expr, x_above: Option<f64>) -> Expr {
    match e {
        Expr::Const(_) | Expr::Var => e.clone(),
        Expr::Add(a, b) => {
            let a = pass(a, x_above);
            let b = pass(b, x_above);
            add(a, b)
        }
        Expr::Sub(a, b) => {
            let a = pass(a, x_above);
            let b = pass(b, x_above);
            if a == b {
                return Expr::Const(0.0);
            }
            sub(a, b)
        }
        Expr::Mul(..) | Expr::Div(..) => rewrite_product(e, x_above),
        Expr::Pow(base, p) => {
            let base = pass(base, x_above);
            let p = *p;
            if p == 0.0 {
                return Expr::Const(1.0);
            }
            if p == 1.0 {
                return base;
            }
            if let Expr::Const(c) = base {
                if let Some(v) = crate::expr::real_pow(c, p) {
                    if v.is_finite() {
                        return Expr::Const(v);
                    }
                }
            }
            match base {
                // (e^q)^p -> e^(qp) under the positivity guard, or freely
                // for integer exponents.
                Expr::Pow(inner, q)
                    if known_positive(&inner, x_above) || (is_integer(q) && is_integer(p)) =>
                {
                    Expr::Pow(inner, q * p)
                }
                // sqrt(t)^p == t^(p/2) wherever the left side is defined.
                Expr::Sqrt(inner) => Expr::Pow(inner, p * 0.5),
                other => Expr::pow(other, p),
            }
        }
        Expr::Sin(a) => fold_unary(Expr::sin(pass(a, x_above))),
        Expr::Cos(a) => fold_unary(Expr::cos(pass(a, x_above))),
        Expr::Exp(a) => {
            let a = pass(a, x_above);
            if let Expr::Ln(inner) = a {
                return *inner;
            }
            fold_unary(Expr::exp(a))
        }
        Expr::Ln(a) => {
            let a = pass(a, x_above);
            if let Expr::Exp(inner) = a {
                return *inner;
            }
            fold_unary(Expr::ln(a))
        }
        Expr::Sqrt(a) => fold_unary(Expr::sqrt(pass(a, x_above))),
    }
}

fn fold_unary(e: Expr) -> Expr {
    match &e {
        Expr::Sin(a) | Expr::Cos(a) | Expr::Exp(a) | Expr::Ln(a) | Expr::Sqrt(a) => {
            if matches!(**a, Expr::Const(_)) {
                if let Some(v) = e.const_value() {
                    return Expr::Const(v);
                }
            }
            e
        }
        _ => e,
    }
}

// Multiplicative normal form: flatten nested products and quotients into
// (base, exponent) factors plus a constant coefficient, combine factors
// with equal bases when the guard allows, then rebuild deterministically
// in first-appearance order.

struct Factors {
    coef: f64,
    items: Vec<(Expr, f64)>,
    // A constant factor that could not be absorbed into `coef`, e.g. a
    // division by zero that must stay visible as a domain violation.
    opaque_const: bool,
}

fn collect(e: &Expr, exp: f64, x_above: Option<f64>, out: &mut Factors) {
    match e {
        Expr::Mul(a, b) => {
            collect(a, exp, x_above, out);
            collect(b, exp, x_above, out);
        }
        Expr::Div(a, b) => {
            collect(a, exp, x_above, out);
            collect(b, -exp, x_above, out);
        }
        Expr::Pow(..) => {
            // Run the power-specific rewrites first so nested powers and
            // sqrt bases arrive here already collapsed.
            match pass(e, x_above) {
                Expr::Pow(base, p) => push_factor(*base, p * exp, out),
                other => collect(&other, exp, x_above, out),
            }
        }
        other => push_factor(pass(other, x_above), exp, out),
    }
}

fn push_factor(base: Expr, exp: f64, out: &mut Factors) {
    if let Expr::Const(c) = base {
        if let Some(v) = crate::expr::real_pow(c, exp) {
            if v.is_finite() {
                out.coef *= v;
                return;
            }
        }
        out.opaque_const = true;
        out.items.push((Expr::Const(c), exp));
        return;
    }
    out.items.push((base, exp));
}

fn rewrite_product(e: &Expr, x_above: Option<f64>) -> Expr {
    let mut f = Factors { coef: 1.0, items: Vec::new(), opaque_const: false };
    collect(e, 1.0, x_above, &mut f);

    if f.coef == 0.0 && !f.opaque_const {
        return Expr::Const(0.0);
    }
    if !f.coef.is_finite() {
        // Constant folding overflowed; keep the original shape.
        return rebuild_unfused(e, x_above);
    }

    // Combine factors sharing a structurally equal base.
    let mut combined: Vec<(Expr, f64)> = Vec::new();
    'outer: for (base, exp) in f.items {
        for (b, p) in combined.iter_mut() {
            if *b == base {
                let allowed =
                    known_positive(b, x_above) || (is_integer(*p) && is_integer(exp));
                if allowed {
                    *p += exp;
                    continue 'outer;
                }
            }
        }
        combined.push((base, exp));
    }

    let mut numerator: Vec<Expr> = Vec::new();
    let mut denominator: Vec<Expr> = Vec::new();
    for (base, exp) in combined {
        if exp == 0.0 {
            continue;
        }
        if exp > 0.0 {
            numerator.push(apply_exponent(base, exp));
        } else {
            denominator.push(apply_exponent(base, -exp));
        }
    }

    let mut num = chain(numerator);
    if f.coef != 1.0 || num.is_none() {
        let c = Expr::Const(f.coef);
        num = Some(match num {
            Some(n) => Expr::mul(c, n),
            None => c,
        });
    }
    let num = num.expect("numerator present");
    match chain(denominator) {
        Some(d) => Expr::div(num, d),
        None => num,
    }
}

fn apply_exponent(base: Expr, exp: f64) -> Expr {
    if exp == 1.0 {
        base
    } else {
        Expr::pow(base, exp)
    }
}

fn chain(items: Vec<Expr>) -> Option<Expr> {
    let mut it = items.into_iter();
    let first = it.next()?;
    Some(it.fold(first, Expr::mul))
}

fn rebuild_unfused(e: &Expr, x_above: Option<f64>) -> Expr {
    match e {
        Expr::Mul(a, b) => Expr::mul(pass(a, x_above), pass(b, x_above)),
        Expr::Div(a, b) => Expr::div(pass(a, x_above), pass(b, x_above)),
        other => other.clone(),
    }
}
