use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole: argument within {0:e} of a lattice singularity")]
    Pole(f64),
    #[error("value {value} outside the image [{lo}, {hi}] of the requested segment")]
    Range { value: f64, lo: f64, hi: f64 },
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("numerical inconsistency: {0}")]
    Inconsistency(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("accessory parameter sits at corner A_{0}")]
    Corner(usize),
    #[error("point is a half-period")]
    HalfPeriod,
    #[error("disk {0} degenerates to a half plane")]
    DegenerateDisk(usize),
    #[error("census incomplete: degree sum {0} after grid refinement")]
    CensusIncomplete(i32),
    #[error("degenerate record in degree sum")]
    DegenerateRecord,
}

impl Error {
    /// True for failures that indicate a numerical fault rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Convergence(_)
                | Error::Inconsistency(_)
                | Error::DegenerateDisk(_)
                | Error::CensusIncomplete(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
