use thiserror::Error;

/// Errors surfaced by state validation, integration and scenario setup.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Bloch vector outside the closed unit ball (beyond tolerance) or not finite.
    #[error("Bloch vector norm {norm} lies outside the unit ball")]
    UnphysicalBloch { norm: f64 },

    /// Density matrix failed the physicality checks.
    #[error(
        "invalid density matrix: hermiticity defect {hermiticity_defect:.3e}, \
         trace defect {trace_defect:.3e}, min eigenvalue {min_eigenvalue:.3e}"
    )]
    InvalidDensity {
        hermiticity_defect: f64,
        trace_defect: f64,
        min_eigenvalue: f64,
    },

    /// A scalar parameter is out of range or not finite.
    #[error("invalid parameter {name}: {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    /// No figure preset with this id.
    #[error("unknown figure preset `{0}`")]
    UnknownPreset(String),

    /// A scenario grid has no entries.
    #[error("scenario grid `{0}` must not be empty")]
    EmptyGrid(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
