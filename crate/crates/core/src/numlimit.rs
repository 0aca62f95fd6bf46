//! Numerical estimation of one- and two-sided limits.
//!
//! The estimator samples `g` along a geometric approach schedule
//! `c ± h0 * ratio^k`, discards out-of-domain samples, and extrapolates
//! the surviving tail to step zero. Two extrapolants run side by side:
//!
//! * Neville polynomial extrapolation in `h` (degree capped at 4), which
//!   nails quotients whose error expands in integer powers of `h`;
//! * iterated Aitken delta-squared acceleration, which handles geometric
//!   tails — exactly what fractional powers `h^p` produce on a geometric
//!   step schedule.
//!
//! Whichever stage of either extrapolant stabilizes first (smallest
//! confirmed successive difference) supplies the reported value and error
//! estimate. Divergence is detected on the raw samples before any
//! extrapolation, since acceleration of a blowing-up sequence can alias
//! to a finite value.

use crate::expr::EvalResult;

/// Which side of the point the approach sequence uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    FromAbove,
    FromBelow,
    /// Requires both one-sided estimates to converge and agree within
    /// their combined error.
    TwoSided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitStatus {
    Converged,
    Diverged,
    Oscillating,
    DomainExhausted,
}

/// Outcome of a limit estimation. `value` and `error_estimate` are
/// meaningful only when `status == Converged`; otherwise they are NaN and
/// infinity.
#[derive(Debug, Clone, Copy)]
pub struct LimitEstimate {
    pub value: f64,
    pub error_estimate: f64,
    pub status: LimitStatus,
}

impl LimitEstimate {
    pub fn is_converged(&self) -> bool {
        self.status == LimitStatus::Converged
    }

    fn failed(status: LimitStatus) -> Self {
        LimitEstimate { value: f64::NAN, error_estimate: f64::INFINITY, status }
    }
}

/// Step schedule and classification thresholds.
#[derive(Debug, Clone, Copy)]
pub struct LimitConfig {
    /// Initial offset from the limit point.
    pub h0: f64,
    /// Geometric step ratio in (0, 1).
    pub ratio: f64,
    /// Number of sample offsets per side.
    pub steps: usize,
    /// Converged when the best confirmed extrapolation difference is at
    /// most `convergence_tol * max(1, |value|)`.
    pub convergence_tol: f64,
    /// Diverged when the last magnitudes grow monotonically past this.
    pub divergence_threshold: f64,
    /// Also diverged when the last magnitudes grow monotonically by at
    /// least this factor per step; catches slow power-law blowups that
    /// cannot reach the absolute threshold within the schedule.
    pub divergence_growth: f64,
}

impl Default for LimitConfig {
    fn default() -> Self {
        LimitConfig {
            h0: 1e-2,
            ratio: 0.5,
            steps: 20,
            convergence_tol: 1e-9,
            divergence_threshold: 1e8,
            divergence_growth: 1.1,
        }
    }
}

const MIN_VALID_SAMPLES: usize = 4;
const NEVILLE_MAX_DEGREE: usize = 4;
const AITKEN_MAX_STAGES: usize = 8;

/// Estimates `lim_{x -> c} g(x)` on the requested side.
///
/// Samples where `g` reports a domain violation or a non-finite value are
/// discarded; fewer than four surviving samples on a side yields
/// `DomainExhausted`. A two-sided estimate converges only when both sides
/// do and their values differ by at most the sum of the error estimates,
/// in which case the error-weighted average is returned.
pub fn estimate_limit<F>(g: F, c: f64, side: Side, cfg: &LimitConfig) -> LimitEstimate
where
    F: Fn(f64) -> EvalResult,
{
    match side {
        Side::FromAbove => one_sided(&g, c, 1.0, cfg),
        Side::FromBelow => one_sided(&g, c, -1.0, cfg),
        Side::TwoSided => {
            let above = one_sided(&g, c, 1.0, cfg);
            let below = one_sided(&g, c, -1.0, cfg);
            combine_sides(above, below)
        }
    }
}

fn one_sided<F>(g: &F, c: f64, direction: f64, cfg: &LimitConfig) -> LimitEstimate
where
    F: Fn(f64) -> EvalResult,
{
    let mut samples: Vec<(f64, f64)> = Vec::with_capacity(cfg.steps);
    let mut h = cfg.h0;
    for _ in 0..cfg.steps {
        let x = c + direction * h;
        if x != c {
            if let Some(v) = g(x).finite() {
                samples.push((h, v));
            }
        }
        h *= cfg.ratio;
    }

    if samples.len() < MIN_VALID_SAMPLES {
        return LimitEstimate::failed(LimitStatus::DomainExhausted);
    }
    if raw_divergence(&samples, cfg) {
        return LimitEstimate::failed(LimitStatus::Diverged);
    }

    let mut best: Option<(f64, f64)> = None;
    let values: Vec<f64> = samples.iter().map(|&(_, v)| v).collect();
    scan_candidates(&values, &mut best);
    scan_candidates(&neville_diagonal(&samples), &mut best);
    for stage in aitken_stages(&values) {
        scan_candidates(&stage, &mut best);
    }

    match best {
        Some((value, err)) if err <= cfg.convergence_tol * value.abs().max(1.0) => {
            // Floor the reported error at a few ulps so "agreement within
            // combined error" never degenerates to demanding bit equality.
            let floor = 4.0 * f64::EPSILON * value.abs().max(1.0);
            LimitEstimate {
                value,
                error_estimate: err.max(floor),
                status: LimitStatus::Converged,
            }
        }
        _ => LimitEstimate::failed(LimitStatus::Oscillating),
    }
}

/// Strictly growing magnitudes over the last five samples, either past
/// the absolute threshold or at a sustained geometric rate.
fn raw_divergence(samples: &[(f64, f64)], cfg: &LimitConfig) -> bool {
    if samples.len() < 5 {
        return false;
    }
    let tail: Vec<f64> = samples[samples.len() - 5..].iter().map(|&(_, v)| v.abs()).collect();
    if !tail.windows(2).all(|w| w[1] > w[0]) {
        return false;
    }
    let last = tail[4];
    if last > cfg.divergence_threshold {
        return true;
    }
    tail.windows(2).all(|w| w[1] >= cfg.divergence_growth * w[0] && w[0] > 0.0)
}

/// Pushes every "confirmed" estimate in a stabilizing sequence: the value
/// at position i with error max(|d_i|, |d_{i-1}|) of the neighbouring
/// successive differences. Keeps the candidate with the smallest error,
/// preferring later (closer to the limit) entries on ties.
fn scan_candidates(seq: &[f64], best: &mut Option<(f64, f64)>) {
    for i in 1..seq.len() {
        let d1 = (seq[i] - seq[i - 1]).abs();
        let err = if i >= 2 { d1.max((seq[i - 1] - seq[i - 2]).abs()) } else { d1 };
        if !seq[i].is_finite() || !err.is_finite() {
            continue;
        }
        match best {
            Some((_, e)) if *e < err => {}
            _ => *best = Some((seq[i], err)),
        }
    }
}

/// Diagonal of a Neville table evaluated at h = 0, using for each entry a
/// sliding window of the most recent points, capped at degree 4.
fn neville_diagonal(samples: &[(f64, f64)]) -> Vec<f64> {
    let n = samples.len();
    let mut diag = Vec::with_capacity(n);
    for i in 0..n {
        let start = i.saturating_sub(NEVILLE_MAX_DEGREE);
        diag.push(neville_at_zero(&samples[start..=i]));
    }
    diag
}

fn neville_at_zero(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len();
    let mut t: Vec<f64> = pts.iter().map(|&(_, v)| v).collect();
    for j in 1..n {
        for i in 0..n - j {
            let (hi, hij) = (pts[i].0, pts[i + j].0);
            t[i] = (hi * t[i + 1] - hij * t[i]) / (hi - hij);
        }
    }
    t[0]
}

/// Repeated Aitken delta-squared passes. Each pass removes the dominant
/// geometric transient; near-zero second differences mean the sequence is
/// already flat there, so the element passes through unchanged.
fn aitken_stages(values: &[f64]) -> Vec<Vec<f64>> {
    let mut stages = Vec::new();
    let mut cur = values.to_vec();
    for _ in 0..AITKEN_MAX_STAGES {
        if cur.len() < 3 {
            break;
        }
        let mut next = Vec::with_capacity(cur.len() - 2);
        for w in cur.windows(3) {
            let (a, b, c) = (w[0], w[1], w[2]);
            let den = c - 2.0 * b + a;
            let scale = a.abs().max(b.abs()).max(c.abs());
            if den.abs() <= f64::EPSILON * scale {
                next.push(c);
                continue;
            }
            let accel = a - (b - a) * (b - a) / den;
            next.push(if accel.is_finite() { accel } else { c });
        }
        stages.push(next.clone());
        cur = next;
    }
    stages
}

fn combine_sides(above: LimitEstimate, below: LimitEstimate) -> LimitEstimate {
    use LimitStatus::*;
    match (above.status, below.status) {
        (Converged, Converged) => {
            let diff = (above.value - below.value).abs();
            if diff <= above.error_estimate + below.error_estimate {
                let wa = 1.0 / above.error_estimate;
                let wb = 1.0 / below.error_estimate;
                LimitEstimate {
                    value: (above.value * wa + below.value * wb) / (wa + wb),
                    error_estimate: above.error_estimate.max(below.error_estimate),
                    status: Converged,
                }
            } else {
                LimitEstimate::failed(Oscillating)
            }
        }
        (Diverged, _) | (_, Diverged) => LimitEstimate::failed(Diverged),
        (Oscillating, _) | (_, Oscillating) => LimitEstimate::failed(Oscillating),
        _ => LimitEstimate::failed(DomainExhausted),
    }
}
