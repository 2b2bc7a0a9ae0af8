use std::fmt;

/// Crate-wide error type.
#[derive(Debug, Clone)]
pub enum Error {
    /// Gamma evaluated at a non-positive integer.
    GammaPole { z_re: f64, z_im: f64 },
    /// Argument outside the documented evaluation envelope.
    OutOfEnvelope { what: &'static str, detail: String },
    /// A quadrature did not reach the requested tolerance.
    QuadratureAccuracy {
        requested: f64,
        attained: f64,
        context: &'static str,
    },
    /// Precondition violation on an operation argument.
    InvalidArgument(String),
    /// Dataset parse or schema failure; `line` is 1-based, 0 when not line-bound.
    DataFormat { line: usize, msg: String },
    /// I/O failure while reading or writing datasets and reports.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::GammaPole { z_re, z_im } => {
                write!(f, "gamma pole at z = {z_re}+{z_im}i (non-positive integer)")
            }
            Error::OutOfEnvelope { what, detail } => {
                write!(f, "{what} outside evaluation envelope: {detail}")
            }
            Error::QuadratureAccuracy {
                requested,
                attained,
                context,
            } => write!(
                f,
                "quadrature accuracy not reached in {context}: requested {requested:.3e}, attained {attained:.3e}"
            ),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::DataFormat { line, msg } => {
                if *line == 0 {
                    write!(f, "data format error: {msg}")
                } else {
                    write!(f, "data format error at line {line}: {msg}")
                }
            }
            Error::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
