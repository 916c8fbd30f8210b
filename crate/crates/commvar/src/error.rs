use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("element is ±1, outside the domain of log")]
    DegenerateElement,
    #[error("pair is not on the level set (residual {residual:.3e})")]
    NotOnLevelSet { residual: f64 },
    #[error("element is not in Y_theta (residual {residual:.3e})")]
    NotInYTheta { residual: f64 },
    #[error("Q formula is ambiguous at P = 0; use a square-wave table")]
    AmbiguousAtPZero,
    #[error("square wave has no graph Q(phi); sample it through an arc table")]
    SquareWaveRequested,
    #[error("degenerate wave (theta = 0, |P| = 1)")]
    DegenerateWave,
    #[error("invalid wave parameters: {0}")]
    InvalidWave(String),
    #[error("point is off the wave by {deviation:.3e}")]
    NotOnWave { deviation: f64 },
    #[error("commutator is central (±1)")]
    CentralCommutator,
    #[error("inconsistent scenario: {0}")]
    InconsistentScenario(String),
    #[error("unresolved extension in degree {degree}: {detail}")]
    UnresolvedExtension { degree: usize, detail: String },
    #[error("Poincaré pairing degenerates in degree {degree}")]
    DualityFailure { degree: usize },
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
