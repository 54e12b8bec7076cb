use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series truncated at order {order} has tail bound {bound:e} above tolerance {tol:e}")]
    InsufficientTruncation { order: usize, bound: f64, tol: f64 },
    #[error("series order {0} exceeds the supported maximum of 512")]
    OrderTooLarge(usize),
    #[error("point {0} is not in the upper half-plane")]
    NotInUpperHalfPlane(Complex64),
    #[error("reduction did not terminate after {0} steps")]
    NonTermination(usize),
    #[error("tessellation depth {0} exceeds the maximum of {1}")]
    DepthExceeded(usize, usize),
    #[error("invalid tile word letter {0:?}")]
    InvalidWord(char),
    #[error("point {0} lies outside W")]
    OutsideW(Complex64),
    #[error("branch continuation failed: {0}")]
    ContinuationFailure(String),
    #[error("numerator and denominator both vanish at {0}")]
    Indeterminate(Complex64),
    #[error("closed form has a pole at {0}")]
    PoleAtPoint(Complex64),
    #[error("cusp truncation removes a whole side")]
    DegenerateTile,
    #[error("target vanishes on the contour near {0}")]
    OnContourZero(Complex64),
    #[error("winding integral {0} did not settle near an integer")]
    NonIntegerWinding(f64),
    #[error("Newton recovered {found} zeros but the winding count is {expected}")]
    CountMismatch { expected: i64, found: usize },
    #[error("J = {0} is too close to 0 or 1")]
    NearSingularJ(Complex64),
    #[error("u = {0} is too close to 1 or -1")]
    NearSingularU(Complex64),
    #[error("formula is singular at {0}")]
    SingularPoint(Complex64),
    #[error("start point is off the locus (|Im s| = {0:e})")]
    StartNotOnLocus(f64),
    #[error("derivative vanishes at {0}")]
    DerivativeVanishes(Complex64),
    #[error("step size collapsed below the minimum near {0}")]
    StepCollapse(Complex64),
}

impl Error {
    /// True for errors caused by the caller's input rather than by numerics.
    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::OrderTooLarge(_)
                | Error::NotInUpperHalfPlane(_)
                | Error::DepthExceeded(..)
                | Error::InvalidWord(_)
                | Error::OutsideW(_)
                | Error::DegenerateTile
                | Error::NearSingularJ(_)
                | Error::NearSingularU(_)
                | Error::SingularPoint(_)
                | Error::StartNotOnLocus(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
