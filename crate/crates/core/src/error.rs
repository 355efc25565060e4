use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("{what} are not normalized (squared norm {norm})")]
    NonNormalized { what: String, norm: f64 },
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("invalid pair {0}")]
    BadPair(String),
    #[error("coupling constant must be positive, got {0}")]
    NonPositiveCoupling(f64),
    #[error("hbar must be positive, got {0}")]
    NonPositiveHbar(f64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("invalid drive profile: {0}")]
    BadProfile(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("every required pair is degenerate; no finite bound exists")]
    NoFeasiblePair,
    #[error("output spectrum is identically zero")]
    ZeroSpectrum,
    #[error("pair has no interaction frequency (a_x = a_x')")]
    Degenerate,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AmplitudeError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("composite dimension {0} exceeds the brute-force limit of 4096")]
    DimensionTooLarge(usize),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SearchError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("epsilon must lie in (0, 0.5), got {0}")]
    BadEpsilon(f64),
    #[error("horizon must be positive, got {0}")]
    BadHorizon(f64),
    #[error("grid step must be positive, got {0}")]
    BadStep(f64),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DriveError {
    #[error("panel count must be even and at least 2, got {0}")]
    BadPanels(usize),
    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),
    #[error(transparent)]
    Amplitude(#[from] AmplitudeError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SchmidtError {
    #[error("state of length {len} cannot be split as {d_in} x {d_out}")]
    DimensionMismatch {
        len: usize,
        d_in: usize,
        d_out: usize,
    },
    #[error("factor dimensions are limited to 64, got {0}")]
    FactorTooLarge(usize),
    #[error("at least two sample times are required")]
    TooFewTimes,
    #[error(transparent)]
    Amplitude(#[from] AmplitudeError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SweepError {
    #[error("axis `{axis}` does not apply: {reason}")]
    AxisInapplicable { axis: String, reason: String },
    #[error("sweep values must be nonempty and strictly monotone")]
    BadValues,
    #[error("log-log fit needs positive values, got {0}")]
    NonPositiveValue(f64),
    #[error("log-log fit needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Search(#[from] SearchError),
}
