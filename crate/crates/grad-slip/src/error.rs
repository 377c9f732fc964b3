use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("moment order M={0} is too small (need M >= 3)")]
    OrderTooSmall(usize),
    #[error("Couette system needs odd M, got M={0}")]
    EvenCouetteOrder(usize),
    #[error("accommodation coefficient chi={0} outside the admissible range")]
    BadAccommodation(f64),
    #[error("vector length {got} does not match basis size {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("singular system: {0}")]
    Singular(String),
    #[error("certificate failed: {0}")]
    Certificate(String),
    #[error("CFL violated: dt={dt} exceeds h/max|lambda|={limit}")]
    Cfl { dt: f64, limit: f64 },
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
