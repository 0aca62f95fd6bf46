//! Seeded random expression corpus used by the property suites and the
//! `check` command. Generation is deterministic for a given RNG state;
//! admissibility (domains, magnitudes, convergence) is the caller's
//! problem and handled by rejection.

use rand::Rng;

use crate::expr::Expr;

const EXPONENTS: &[f64] = &[2.0, 2.0, 2.0, 3.0, 3.0, 0.5, 0.5, 1.5, 1.5, -1.0, 0.7, -0.5, 2.5];

/// A random expression tree of depth at most `depth`.
pub fn random_expr<R: Rng>(rng: &mut R, depth: u32) -> Expr {
    if depth == 0 {
        return leaf(rng);
    }
    match rng.random_range(0..22u32) {
        0..=2 => Expr::add(random_expr(rng, depth - 1), random_expr(rng, depth - 1)),
        3..=5 => Expr::sub(random_expr(rng, depth - 1), random_expr(rng, depth - 1)),
        6..=8 => Expr::mul(random_expr(rng, depth - 1), random_expr(rng, depth - 1)),
        9..=10 => Expr::div(random_expr(rng, depth - 1), random_expr(rng, depth - 1)),
        11..=13 => {
            let p = EXPONENTS[rng.random_range(0..EXPONENTS.len())];
            Expr::pow(random_expr(rng, depth - 1), p)
        }
        14..=15 => Expr::sin(random_expr(rng, depth - 1)),
        16..=17 => Expr::cos(random_expr(rng, depth - 1)),
        18 => Expr::exp(random_expr(rng, depth - 1)),
        19 => Expr::ln(random_expr(rng, depth - 1)),
        20..=21 => Expr::sqrt(random_expr(rng, depth - 1)),
        _ => unreachable!(),
    }
}

fn leaf<R: Rng>(rng: &mut R) -> Expr {
    if rng.random_range(0..10u32) < 6 {
        Expr::Var
    } else {
        Expr::Const(round3(rng.random_range(-2.5..2.5)))
    }
}

fn round3(v: f64) -> f64 {
    (v * 1000.0).round() / 1000.0
}

/// Uniform draw from the half-open interval `(lo, hi]`.
pub fn open_below<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    hi - (hi - lo) * rng.random::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generation_is_deterministic() {
        let a = random_expr(&mut ChaCha8Rng::seed_from_u64(7), 3);
        let b = random_expr(&mut ChaCha8Rng::seed_from_u64(7), 3);
        assert_eq!(a, b);
    }

    #[test]
    fn generated_trees_print_and_reparse() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let e = random_expr(&mut rng, 3);
            let text = e.to_text();
            let back = crate::expr::parse(&text).unwrap();
            assert_eq!(back, e, "round trip of {text}");
        }
    }

    #[test]
    fn open_below_stays_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let v = open_below(&mut rng, 0.0, 2.0);
            assert!(v > 0.0 && v <= 2.0);
        }
    }
}
