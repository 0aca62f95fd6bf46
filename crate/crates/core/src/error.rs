use crate::expr::ParseError;
use crate::numlimit::LimitStatus;

/// Errors reported by the operator and series layers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("invalid parameters: alpha must be positive and finite, got {alpha}")]
    InvalidParams { alpha: f64 },

    #[error("invalid gauge: rho({at}) = {value} but a gauge must vanish at the point")]
    InvalidGauge { at: f64, value: f64 },

    #[error("invalid point: c = {value} must differ from {role}")]
    InvalidPoint { role: &'static str, value: f64 },

    #[error("domain violation: fractional power of non-positive base {base}")]
    DomainViolation { base: f64 },

    #[error("domain exhausted: no admissible samples near {at}")]
    DomainExhausted { at: f64 },

    #[error("limit did not converge ({status:?})")]
    NotConverged { status: LimitStatus },

    #[error("series coefficient {index} did not converge ({status:?})")]
    CoefficientDiverged { index: usize, status: LimitStatus },
}
