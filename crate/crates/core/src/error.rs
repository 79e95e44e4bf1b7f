use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("root iteration did not converge (residual {residual:.3e} after {iterations} iterations)")]
    NonConvergence { residual: f64, iterations: usize },
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial has degree {0}; degree >= {1} is required")]
    DegreeTooLow(usize, usize),
    #[error("sampling budget too small: {0}")]
    BudgetTooSmall(String),
    #[error("resolution too coarse: {cells:.1} cells across the bounding diameter (need at least 16)")]
    ResolutionTooCoarse { cells: f64 },
    #[error("region is empty")]
    EmptyRegion,
    #[error("boundary sampling produced {found} candidates, {needed} needed")]
    DegenerateBoundary { found: usize, needed: usize },
    #[error("plate B has no interior cells at h = {h}")]
    ThinPlate { h: f64 },
    #[error("conjugate gradient failed to converge (relative residual {residual:.3e})")]
    SolveFailure { residual: f64 },
    #[error("condenser plate is not compactly contained in the field region: {0}")]
    NotNested(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error in `{field}`: {message}")]
    Parse { field: String, message: String },
}

impl Error {
    pub fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
