//! Puiseux-style expansion at the base point: a series in powers
//! `(x-omega)^(alpha*n)` whose n-th coefficient is the n-th generalized
//! derivative at `omega` divided by `n!`. With `alpha = 1` this reduces
//! to the classical Taylor series; with fractional `alpha` it expands
//! functions at branch points where the Taylor series does not exist.

use serde::{Deserialize, Serialize};

use crate::alphaderiv::{alpha_derivative_expr, DerivParams};
use crate::error::Error;
use crate::expr::{integer_exponent, real_pow, EvalResult, Expr};
use crate::numlimit::{estimate_limit, LimitConfig, LimitStatus, Side};

/// Threshold below which a coefficient is omitted from the text form.
const DISPLAY_ZERO_TOL: f64 = 1e-12;

/// A truncated expansion around `omega` with exponent step `alpha`:
/// `sum_n coeffs[n] * (x-omega)^(alpha*n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PuiseuxSeries {
    pub omega: f64,
    pub alpha: f64,
    pub coeffs: Vec<f64>,
}

impl PuiseuxSeries {
    /// Number of computed terms.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Evaluates the partial sum at `x` under the real-branch power
    /// policy: for non-integer `alpha`, points left of `omega` are a
    /// domain violation rather than an analytic continuation.
    pub fn evaluate(&self, x: f64) -> EvalResult {
        let t = x - self.omega;
        let mut sum = 0.0;
        for (n, &coeff) in self.coeffs.iter().enumerate() {
            if n == 0 {
                sum += coeff;
                continue;
            }
            match real_pow(t, self.alpha * n as f64) {
                Some(p) => sum += coeff * p,
                None => return EvalResult::violation(),
            }
        }
        EvalResult::ok(sum)
    }

    /// Human-readable sum, omitting terms whose coefficient is below
    /// 1e-12 in magnitude; the zero series prints as "0".
    pub fn to_text(&self) -> String {
        let base = if self.omega == 0.0 {
            "x".to_string()
        } else if self.omega < 0.0 {
            format!("(x+{})", -self.omega)
        } else {
            format!("(x-{})", self.omega)
        };
        let mut out = String::new();
        for (n, &coeff) in self.coeffs.iter().enumerate() {
            if coeff.abs() < DISPLAY_ZERO_TOL {
                continue;
            }
            let magnitude = coeff.abs();
            if out.is_empty() {
                if coeff < 0.0 {
                    out.push('-');
                }
            } else if coeff < 0.0 {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(&term_text(magnitude, &base, self.alpha * n as f64));
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

fn term_text(magnitude: f64, base: &str, exponent: f64) -> String {
    if exponent == 0.0 {
        return format!("{magnitude}");
    }
    let power = if exponent == 1.0 { base.to_string() } else { format!("{base}^{exponent}") };
    if magnitude == 1.0 {
        power
    } else {
        format!("{magnitude}*{power}")
    }
}

/// Expands `f` around `omega` to `order` terms.
///
/// `coeffs[0]` is `f(omega)` (recovered as a limit from above when `f`
/// is undefined at the point itself); `coeffs[n]` is the n-th iterated
/// derivative at `omega` over `n!`, computed through the symbolic
/// closed form followed by a single numeric limit per coefficient.
pub fn expand(
    f: &Expr,
    p: &DerivParams,
    order: usize,
    cfg: &LimitConfig,
) -> Result<PuiseuxSeries, Error> {
    let mut coeffs = Vec::with_capacity(order);
    let mut derivative = f.clone();
    let mut factorial = 1.0;
    for n in 0..order {
        if n > 0 {
            derivative = alpha_derivative_expr(&derivative, p);
            factorial *= n as f64;
        }
        let value = match derivative.evaluate(p.omega()).finite() {
            Some(v) if n == 0 => v,
            _ => {
                let est = estimate_limit(
                    |x| derivative.evaluate(x),
                    p.omega(),
                    Side::FromAbove,
                    cfg,
                );
                match est.status {
                    LimitStatus::Converged => est.value,
                    LimitStatus::DomainExhausted => {
                        return Err(Error::DomainExhausted { at: p.omega() })
                    }
                    status => return Err(Error::CoefficientDiverged { index: n, status }),
                }
            }
        };
        coeffs.push(value / factorial);
    }
    Ok(PuiseuxSeries { omega: p.omega(), alpha: p.alpha(), coeffs })
}

/// True when evaluating the series at `x` requires `x >= omega`.
pub fn requires_right_side(s: &PuiseuxSeries) -> bool {
    integer_exponent(s.alpha).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn cfg() -> LimitConfig {
        LimitConfig::default()
    }

    fn half_at_zero() -> DerivParams {
        DerivParams::new(0.5, 0.0).unwrap()
    }

    #[test]
    fn sin_sqrt_coefficients() {
        let f = parse("sin(sqrt(x))").unwrap();
        let s = expand(&f, &half_at_zero(), 6, &cfg()).unwrap();
        let want = [0.0, 1.0, 0.0, -1.0 / 6.0, 0.0, 1.0 / 120.0];
        for (n, (&got, &want)) in s.coeffs.iter().zip(want.iter()).enumerate() {
            assert!((got - want).abs() < 1e-8, "coeff {n}: {got} vs {want}");
        }
    }

    #[test]
    fn fundamental_function_series() {
        let f = parse("x^0.5").unwrap();
        let s = expand(&f, &half_at_zero(), 3, &cfg()).unwrap();
        assert!(s.coeffs[0].abs() < 1e-10);
        assert!((s.coeffs[1] - 1.0).abs() < 1e-8);
        assert!(s.coeffs[2].abs() < 1e-8);
    }

    #[test]
    fn exp_reduces_to_maclaurin() {
        let f = parse("exp(x)").unwrap();
        let p = DerivParams::new(1.0, 0.0).unwrap();
        let s = expand(&f, &p, 4, &cfg()).unwrap();
        let want = [1.0, 1.0, 0.5, 1.0 / 6.0];
        for (got, want) in s.coeffs.iter().zip(want) {
            assert!((got - want).abs() < 1e-7);
        }
    }

    #[test]
    fn partial_sum_accuracy() {
        let f = parse("sin(sqrt(x))").unwrap();
        let s = expand(&f, &half_at_zero(), 8, &cfg()).unwrap();
        let r = s.evaluate(0.25);
        assert!(r.domain_ok);
        assert!((r.value - 0.479425538604203).abs() < 1e-6);
    }

    #[test]
    fn evaluation_edges() {
        let s = PuiseuxSeries { omega: 2.0, alpha: 0.5, coeffs: vec![7.0, 1.0, 3.0] };
        // At the expansion point every positive power vanishes.
        assert_eq!(s.evaluate(2.0).value, 7.0);
        // Left of the point, a fractional step is out of domain.
        assert!(!s.evaluate(1.0).domain_ok);
        assert!(requires_right_side(&s));

        let t = PuiseuxSeries { omega: 0.0, alpha: 1.0, coeffs: vec![1.0, 1.0, 0.5, 1.0 / 6.0] };
        let r = t.evaluate(1.0);
        assert!((r.value - 2.6666666666666665).abs() < 1e-15);
        assert!(!requires_right_side(&t));
    }

    #[test]
    fn text_rendering() {
        let f = parse("sin(sqrt(x))").unwrap();
        let s = expand(&f, &half_at_zero(), 4, &cfg()).unwrap();
        assert_eq!(s.to_text(), "x^0.5 - 0.16666666666666666*x^1.5");

        let zero = PuiseuxSeries { omega: 0.0, alpha: 1.0, coeffs: vec![0.0, 0.0] };
        assert_eq!(zero.to_text(), "0");

        let e = PuiseuxSeries { omega: 0.0, alpha: 1.0, coeffs: vec![1.0, 1.0] };
        assert_eq!(e.to_text(), "1 + x");

        let shifted = PuiseuxSeries { omega: -2.0, alpha: 0.5, coeffs: vec![0.0, 2.0] };
        assert_eq!(shifted.to_text(), "2*(x+2)^0.5");
    }

    #[test]
    fn diverging_coefficient_is_reported_with_its_index() {
        let f = parse("x^0.3").unwrap();
        let err = expand(&f, &half_at_zero(), 2, &cfg()).unwrap_err();
        match err {
            Error::CoefficientDiverged { index, .. } => assert_eq!(index, 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn json_shape() {
        let s = PuiseuxSeries { omega: 0.0, alpha: 0.5, coeffs: vec![0.0, 1.0] };
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"omega":0.0,"alpha":0.5,"coeffs":[0.0,1.0]}"#);
        let back: PuiseuxSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
}
