use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown mode label `{0}`")]
    UnknownMode(String),
    #[error("unknown state label `{0}`")]
    UnknownState(String),
    #[error("mode `{0}` is not tunable and cannot carry a coupler modulation")]
    NotTunable(String),
    #[error("Hilbert-space dimension {dim} exceeds cap {cap}")]
    DimensionOverflow { dim: usize, cap: usize },
    #[error("tracking ambiguity at {context}: overlap {overlap:.3} below floor {floor:.3} for state {state}")]
    TrackingAmbiguity {
        context: String,
        state: String,
        overlap: f64,
        floor: f64,
    },
    #[error("degenerate denominator for state {state} via {partner}: gap {gap:.3e} rad/s")]
    Degenerate {
        state: String,
        partner: String,
        gap: f64,
    },
    #[error("singular expression: {0}")]
    Singularity(String),
    #[error("integrator step underflow at t = {t:.6e} s (h = {h:.3e} s)")]
    StepUnderflow { t: f64, h: f64 },
    #[error("propagator not unitary: max |U†U − I| = {deviation:.3e}; tighten the tolerance")]
    NonUnitary { deviation: f64 },
    #[error("norm drift {drift:.3e} exceeds limit at t = {t:.6e} s")]
    NormDrift { drift: f64, t: f64 },
    #[error("no interior minimum in bracket: {0}")]
    Bracket(String),
    #[error("model mismatch: {0}")]
    ModelMismatch(String),
    #[error("unsatisfiable: {0}")]
    Unsatisfiable(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
