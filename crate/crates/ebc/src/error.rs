use thiserror::Error;

/// Errors surfaced by the library. CLI maps `Usage` to exit code 2 and
/// everything else to exit code 1.
#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid precision context: {0}")]
    InvalidPrecision(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("gamma(Omega, a, q) undefined: gcd(q, P_Omega) = {gcd} > 1 (q = {q}, P_Omega = {p_omega})")]
    UndefinedConstant { q: u64, p_omega: u64, gcd: u64 },

    #[error("no closed form for a = {a}, q = {q}: 1 < gcd(a, q) = {gcd} < q; use the direct-sum oracle route")]
    ClosedFormUnavailable { a: u64, q: u64, gcd: u64 },

    #[error("divergent: principal character (the L-series at 1 diverges)")]
    PrincipalCharacter,

    #[error("divergent sum: {0}")]
    DivergentSum(String),

    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("insufficient precision for relation search: need >= {required} digits for height 10^{log10_height} over {entries} entries, have {have}")]
    InsufficientPrecision {
        required: u32,
        have: u32,
        log10_height: u32,
        entries: usize,
    },

    #[error("internal cross-check failed: {0}")]
    CrossCheckFailed(String),

    #[error("invalid relation query: {0}")]
    InvalidQuery(String),

    #[error("invalid probe specification: {0}")]
    ProbeSpec(String),

    #[error("unknown identity: {0}")]
    UnknownIdentity(String),

    #[error("usage error: {0}")]
    Usage(String),
}
