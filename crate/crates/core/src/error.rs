use core::fmt;

use alloc::string::String;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    Domain(String),
    /// An interval endpoint is not on the working grid, or a dilation left it.
    Alignment(String),
    /// A dyadic interval is shorter than the grid step.
    Resolution { scale: i32, level: i32 },
    /// A weight mass vanished where it divides.
    DegenerateWeight(String),
    /// The tail of an improper integral does not converge.
    Divergence(String),
    /// A caller-side precondition failed.
    Precondition(String),
    /// A concentric dilation escaped the window; carries the largest admissible exponent.
    Truncation { requested: u32, feasible: u32 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Alignment(msg) => write!(f, "grid alignment error: {msg}"),
            Error::Resolution { scale, level } => write!(
                f,
                "dyadic interval of scale {scale} is not resolvable at grid level {level}"
            ),
            Error::DegenerateWeight(msg) => write!(f, "degenerate weight: {msg}"),
            Error::Divergence(msg) => write!(f, "divergent integral: {msg}"),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::Truncation { requested, feasible } => write!(
                f,
                "dilation by 2^{requested} escapes the window; largest feasible exponent is {feasible}"
            ),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => { $crate::Error::Domain(alloc::format!($($arg)*)) };
}
macro_rules! precondition {
    ($($arg:tt)*) => { $crate::Error::Precondition(alloc::format!($($arg)*)) };
}
pub(crate) use domain;
pub(crate) use precondition;
