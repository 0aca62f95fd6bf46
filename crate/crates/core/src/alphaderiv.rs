//! The generalized derivative operator suite.
//!
//! For parameters `(alpha, omega)` the derivative of `f` at `c` is the
//! limit of the quotient `(f(x) - f(c)) / ((x-omega)^alpha - (c-omega)^alpha)`.
//! At `alpha = 1` this is the classical derivative for every `omega`; for
//! fractional `alpha` it stays meaningful at the branch point `x = omega`
//! where the classical derivative fails. Alongside the defining limit the
//! module provides the closed form `(1/alpha) * (x-omega)^(1-alpha) * f'(x)`
//! (valid away from `omega`), iterated derivatives, the general gauge
//! operator with an arbitrary vanishing denominator, a parameter-change
//! identity and the endpoint classification at `omega`.

use crate::error::Error;
use crate::expr::{integer_exponent, real_pow, Expr};
use crate::numlimit::{estimate_limit, LimitConfig, LimitEstimate, LimitStatus, Side};
use crate::symbolic::{differentiate, simplify_assuming};

/// Validated operator parameters: `alpha > 0`, both finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivParams {
    alpha: f64,
    omega: f64,
}

impl DerivParams {
    pub fn new(alpha: f64, omega: f64) -> Result<Self, Error> {
        if !(alpha.is_finite() && alpha > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidParams { alpha });
        }
        Ok(DerivParams { alpha, omega })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// True when `alpha` is (within tolerance of) an integer, in which
    /// case the power `(x-omega)^alpha` is defined on both sides of
    /// `omega` and two-sided approaches make sense.
    pub fn integer_alpha(&self) -> bool {
        integer_exponent(self.alpha).is_some()
    }
}

/// How the derivative behaves at the base point `omega`: vanishing,
/// converging to a finite value, or failing to exist.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OmegaBehavior {
    Zero,
    Finite(f64),
    Undefined,
}

/// The derivative at `c` through the defining limit.
///
/// The quotient is sampled on the requested side; samples where `f` or
/// the denominator leave their domain are discarded, so for fractional
/// `alpha` the approach is effectively restricted to `x > omega` and a
/// point with `c < omega` reports `DomainExhausted`.
pub fn alpha_derivative_at(
    f: &Expr,
    p: &DerivParams,
    c: f64,
    side: Side,
    cfg: &LimitConfig,
) -> LimitEstimate {
    let fc = f.evaluate(c).finite();
    let denom_c = real_pow(c - p.omega, p.alpha);
    let quotient = move |x: f64| -> crate::expr::EvalResult {
        let (Some(fc), Some(dc)) = (fc, denom_c) else {
            return crate::expr::EvalResult::violation();
        };
        let fx = f.evaluate(x);
        if !fx.domain_ok {
            return crate::expr::EvalResult::violation();
        }
        let Some(dx) = real_pow(x - p.omega, p.alpha) else {
            return crate::expr::EvalResult::violation();
        };
        let den = dx - dc;
        if den == 0.0 {
            return crate::expr::EvalResult::violation();
        }
        crate::expr::EvalResult::ok((fx.value - fc) / den)
    };
    estimate_limit(quotient, c, side, cfg)
}

/// The closed-form derivative expression
/// `(1/alpha) * (x-omega)^(1-alpha) * f'(x)`, simplified.
///
/// The result is valid for `x != omega` (and `x > omega` when `alpha` is
/// fractional); for fractional `alpha` the simplifier runs under the
/// `x > omega` assumption, which is exactly the region where the formula
/// applies.
pub fn alpha_derivative_expr(f: &Expr, p: &DerivParams) -> Expr {
    let shift = Expr::sub(Expr::Var, Expr::Const(p.omega));
    let raw = Expr::mul(
        Expr::mul(Expr::Const(1.0 / p.alpha), Expr::pow(shift, 1.0 - p.alpha)),
        differentiate(f),
    );
    let assume = (!p.integer_alpha()).then_some(p.omega);
    simplify_assuming(&raw, assume)
}

/// The k-fold derivative expression; `k = 0` returns `f` itself.
pub fn higher_alpha_derivative_expr(f: &Expr, p: &DerivParams, k: u32) -> Expr {
    let mut g = f.clone();
    for _ in 0..k {
        g = alpha_derivative_expr(&g, p);
    }
    g
}

/// The k-th derivative at the base point `omega`, where the closed form
/// itself is invalid: the symbolic k-th derivative expression is formed
/// first and its value recovered as a one-sided limit from above. `k = 0`
/// gives the limit of `f` itself.
pub fn alpha_derivative_at_omega(
    f: &Expr,
    p: &DerivParams,
    k: u32,
    cfg: &LimitConfig,
) -> LimitEstimate {
    let dk = higher_alpha_derivative_expr(f, p, k);
    estimate_limit(|x| dk.evaluate(x), p.omega, Side::FromAbove, cfg)
}

/// The gauge derivative: the limit of `(f(x) - f(c)) / rho(x)` for an
/// arbitrary gauge `rho` that is continuous at `c` with `rho(c) = 0`.
/// The vanishing condition is checked to 1e-12.
pub fn gauge_derivative_at(
    f: &Expr,
    rho: &Expr,
    c: f64,
    side: Side,
    cfg: &LimitConfig,
) -> Result<LimitEstimate, Error> {
    let at_c = rho.evaluate(c);
    if !at_c.domain_ok || at_c.value.abs() > 1e-12 {
        return Err(Error::InvalidGauge { at: c, value: at_c.value });
    }
    let fc = f.evaluate(c).finite();
    let quotient = move |x: f64| -> crate::expr::EvalResult {
        let Some(fc) = fc else {
            return crate::expr::EvalResult::violation();
        };
        let fx = f.evaluate(x);
        let rx = rho.evaluate(x);
        if !fx.domain_ok || !rx.domain_ok || rx.value == 0.0 {
            return crate::expr::EvalResult::violation();
        }
        crate::expr::EvalResult::ok((fx.value - fc) / rx.value)
    };
    Ok(estimate_limit(quotient, c, side, cfg))
}

/// Converts a derivative measured with parameters `from = (beta, zeta)`
/// into the derivative with parameters `to = (alpha, omega)` at the same
/// point `c`, via the exact factor
/// `(beta/alpha) * (c-zeta)^(beta-1) / (c-omega)^(alpha-1)`.
///
/// Requires `c` distinct from both base points, and positive shifted
/// arguments wherever a fractional exponent arises.
pub fn change_parameters(
    d_from: f64,
    from: &DerivParams,
    to: &DerivParams,
    c: f64,
) -> Result<f64, Error> {
    if c == to.omega {
        return Err(Error::InvalidPoint { role: "omega", value: c });
    }
    if c == from.omega {
        return Err(Error::InvalidPoint { role: "zeta", value: c });
    }
    let num = real_pow(c - from.omega, from.alpha - 1.0)
        .ok_or(Error::DomainViolation { base: c - from.omega })?;
    let den = real_pow(c - to.omega, to.alpha - 1.0)
        .ok_or(Error::DomainViolation { base: c - to.omega })?;
    if den == 0.0 {
        return Err(Error::DomainViolation { base: c - to.omega });
    }
    Ok((from.alpha / to.alpha) * num / den * d_from)
}

/// Classifies the derivative of `f` at the base point: `Zero` when the
/// limit converges to zero (within its error estimate plus 1e-8),
/// `Finite` for any other converged value, `Undefined` when the limit
/// diverges or oscillates. A starved sample set is a failure of the
/// measurement, not a classification, and comes back as an error.
pub fn classify_at_omega(
    f: &Expr,
    p: &DerivParams,
    cfg: &LimitConfig,
) -> Result<OmegaBehavior, Error> {
    let est = alpha_derivative_at(f, p, p.omega, Side::FromAbove, cfg);
    match est.status {
        LimitStatus::Converged => {
            if est.value.abs() <= est.error_estimate + 1e-8 {
                Ok(OmegaBehavior::Zero)
            } else {
                Ok(OmegaBehavior::Finite(est.value))
            }
        }
        LimitStatus::Diverged | LimitStatus::Oscillating => Ok(OmegaBehavior::Undefined),
        LimitStatus::DomainExhausted => Err(Error::DomainExhausted { at: p.omega }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn params(alpha: f64, omega: f64) -> DerivParams {
        DerivParams::new(alpha, omega).unwrap()
    }

    fn cfg() -> LimitConfig {
        LimitConfig::default()
    }

    #[test]
    fn params_validation() {
        assert!(DerivParams::new(0.0, 0.0).is_err());
        assert!(DerivParams::new(-1.0, 0.0).is_err());
        assert!(DerivParams::new(f64::NAN, 0.0).is_err());
        assert!(DerivParams::new(0.5, f64::INFINITY).is_err());
        assert!(DerivParams::new(0.5, 0.0).is_ok());
    }

    #[test]
    fn branch_point_derivative_of_sin_sqrt() {
        let f = parse("sin(sqrt(x))").unwrap();
        let est = alpha_derivative_at(&f, &params(0.5, 0.0), 0.0, Side::FromAbove, &cfg());
        assert!(est.is_converged());
        assert!((est.value - 1.0).abs() < 1e-8);
    }

    #[test]
    fn fundamental_function_has_unit_derivative() {
        let f = parse("x^0.5").unwrap();
        for c in [0.0, 0.5, 2.0, 4.0] {
            let est = alpha_derivative_at(&f, &params(0.5, 0.0), c, Side::FromAbove, &cfg());
            assert!(est.is_converged(), "c = {c}");
            assert!((est.value - 1.0).abs() < 1e-7, "c = {c}: {}", est.value);
        }
    }

    #[test]
    fn alpha_one_is_the_classical_derivative() {
        let f = parse("x^2").unwrap();
        let est = alpha_derivative_at(&f, &params(1.0, 0.0), 3.0, Side::TwoSided, &cfg());
        assert!(est.is_converged());
        assert!((est.value - 6.0).abs() < 1e-8);
        // Same result for any omega.
        let est = alpha_derivative_at(&f, &params(1.0, -5.0), 3.0, Side::TwoSided, &cfg());
        assert!((est.value - 6.0).abs() < 1e-8);
    }

    #[test]
    fn left_of_omega_is_domain_exhausted() {
        let f = parse("x^0.5").unwrap();
        let est = alpha_derivative_at(&f, &params(0.5, 0.0), -1.0, Side::FromAbove, &cfg());
        assert_eq!(est.status, LimitStatus::DomainExhausted);
    }

    #[test]
    fn closed_form_examples() {
        let f = parse("sin(sqrt(x))").unwrap();
        assert_eq!(alpha_derivative_expr(&f, &params(0.5, 0.0)).to_text(), "cos(sqrt(x))");

        let f = parse("x").unwrap();
        assert_eq!(alpha_derivative_expr(&f, &params(1.0, 5.0)), Expr::Const(1.0));

        // (x-2)^3 with (alpha, omega) = (0.5, 0):
        // (3/0.5) * x^0.5 * (x-2)^2, checked pointwise.
        let f = parse("(x-2)^3").unwrap();
        let d = alpha_derivative_expr(&f, &params(0.5, 0.0));
        for i in 1..=10 {
            let x = 0.4 * i as f64;
            let want = 6.0 * x.sqrt() * (x - 2.0) * (x - 2.0);
            let got = d.evaluate(x);
            assert!(got.domain_ok);
            assert!((got.value - want).abs() <= 1e-12 * want.abs().max(1.0));
        }
    }

    #[test]
    fn iterated_derivatives_cycle() {
        let f = parse("sin(sqrt(x))").unwrap();
        let p = params(0.5, 0.0);
        assert_eq!(higher_alpha_derivative_expr(&f, &p, 0), f);
        assert_eq!(higher_alpha_derivative_expr(&f, &p, 2).to_text(), "-sin(sqrt(x))");
        assert_eq!(higher_alpha_derivative_expr(&f, &p, 4).to_text(), "sin(sqrt(x))");
    }

    #[test]
    fn derivatives_at_omega_alternate() {
        let f = parse("sin(sqrt(x))").unwrap();
        let p = params(0.5, 0.0);
        let expected = [1.0, 0.0, -1.0];
        for (k, want) in (1..=3).zip(expected) {
            let est = alpha_derivative_at_omega(&f, &p, k, &cfg());
            assert!(est.is_converged(), "k = {k}");
            assert!((est.value - want).abs() < 1e-8, "k = {k}: {}", est.value);
        }
    }

    #[test]
    fn gauge_operator_examples() {
        let f = parse("x^0.5").unwrap();
        let rho = parse("x^0.5 - 2").unwrap();
        let est = gauge_derivative_at(&f, &rho, 4.0, Side::TwoSided, &cfg()).unwrap();
        assert!(est.is_converged());
        assert!((est.value - 1.0).abs() < 1e-10);

        let f = parse("x^2").unwrap();
        let rho = parse("x-1").unwrap();
        let est = gauge_derivative_at(&f, &rho, 1.0, Side::TwoSided, &cfg()).unwrap();
        assert!((est.value - 2.0).abs() < 1e-9);

        // lim sin(x)/sin(x) = 1, frozen by brute-force sampling of the
        // quotient at x = 1e-3 * 2^-k (it is identically 1).
        let f = parse("sin(x)").unwrap();
        let rho = parse("sin(x)").unwrap();
        let est = gauge_derivative_at(&f, &rho, 0.0, Side::TwoSided, &cfg()).unwrap();
        assert!((est.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gauge_must_vanish() {
        let f = parse("x").unwrap();
        let rho = parse("x-1").unwrap();
        let err = gauge_derivative_at(&f, &rho, 0.0, Side::TwoSided, &cfg()).unwrap_err();
        assert!(matches!(err, Error::InvalidGauge { .. }));
    }

    #[test]
    fn parameter_change_examples() {
        // From the classical derivative of x^2 at 3 (= 6) to (0.5, 0):
        // the factor is 2 * 3^0 / 3^-0.5 = 2 * sqrt(3) and
        // 12 * sqrt(3) = 20.784609690826528.
        let from = params(1.0, 0.0);
        let to = params(0.5, 0.0);
        let d = change_parameters(6.0, &from, &to, 3.0).unwrap();
        assert!((d - 20.784609690826528).abs() < 1e-12);

        // Identity transformation.
        let d = change_parameters(6.0, &to, &to, 3.0).unwrap();
        assert!((d - 6.0).abs() < 1e-15);

        // From (0.5, 0) measurement 1 at c = 4 to the classical
        // derivative: 0.5 * 4^-0.5 = 0.25 = d/dx sqrt(x) at 4.
        let d = change_parameters(1.0, &params(0.5, 0.0), &params(1.0, 0.0), 4.0).unwrap();
        assert!((d - 0.25).abs() < 1e-15);
    }

    #[test]
    fn parameter_change_guards() {
        let from = params(0.5, 0.0);
        let to = params(1.5, 2.0);
        assert!(matches!(
            change_parameters(1.0, &from, &to, 2.0),
            Err(Error::InvalidPoint { role: "omega", .. })
        ));
        assert!(matches!(
            change_parameters(1.0, &from, &to, 0.0),
            Err(Error::InvalidPoint { role: "zeta", .. })
        ));
        // c - zeta < 0 with fractional beta-1 exponent.
        assert!(matches!(
            change_parameters(1.0, &from, &params(1.0, -5.0), -1.0),
            Err(Error::DomainViolation { .. })
        ));
    }

    #[test]
    fn trichotomy_examples() {
        let p = params(0.5, 0.0);
        let zero = classify_at_omega(&parse("x^0.7").unwrap(), &p, &cfg()).unwrap();
        assert_eq!(zero, OmegaBehavior::Zero);
        let undef = classify_at_omega(&parse("x^0.3").unwrap(), &p, &cfg()).unwrap();
        assert_eq!(undef, OmegaBehavior::Undefined);
        match classify_at_omega(&parse("x^0.5").unwrap(), &p, &cfg()).unwrap() {
            OmegaBehavior::Finite(v) => assert!((v - 1.0).abs() < 1e-7),
            other => panic!("expected Finite, got {other:?}"),
        }
    }

    #[test]
    fn classify_domain_failure_is_an_error() {
        // ln(x) - ln(x) is undefined right of... actually ln(x-1) is
        // undefined on (0, 1), so sampling near omega = 0 finds nothing.
        let p = params(0.5, 0.0);
        let err = classify_at_omega(&parse("ln(x-1)").unwrap(), &p, &cfg()).unwrap_err();
        assert!(matches!(err, Error::DomainExhausted { .. }));
    }
}
