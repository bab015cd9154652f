use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid base {0}: a radix must be at least 2")]
    InvalidBase(u64),

    #[error("digit {digit} is out of range for base {base}")]
    InvalidDigit { digit: u64, base: u64 },

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("invalid product: {0}")]
    InvalidProduct(String),

    #[error("no n in [{lo}, {hi}] with u(n) != 0")]
    NoNonzeroSeed { lo: u64, hi: u64 },

    #[error("u(Bn+k) = u(n) v(k) fails at n = {n}, k = {k}")]
    HypothesisFailed { n: u64, k: u64 },

    #[error("convergence hypothesis violated: |G(B)| = {g_abs} is not below B = {base}")]
    ConvergenceHypothesisViolated { g_abs: f64, base: u64 },

    #[error("exponent sequence is not bounded by 1 in modulus (|u| ok: {u_ok}, |v| ok: {v_ok})")]
    UnboundedExponent { u_ok: bool, v_ok: bool },

    #[error("profile does not match sequence at n = {n}, k = {k}")]
    ProfileMismatch { n: u64, k: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unbalanced gamma quotient: sum(a) = {sum_a}, sum(b) = {sum_b}")]
    Balance { sum_a: f64, sum_b: f64 },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("unknown claim `{0}`")]
    UnknownClaim(String),
}

impl Error {
    /// True for the errors signalling that a product may diverge.
    pub fn is_convergence(&self) -> bool {
        matches!(
            self,
            Error::ConvergenceHypothesisViolated { .. } | Error::UnboundedExponent { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
