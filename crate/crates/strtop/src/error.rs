use thiserror::Error;

/// Errors raised by construction and composition of algebraic data.
///
/// Verification routines never return these: a failed check is a report
/// with a witness, not an error.
#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("cannot parse scalar `{0}`, expected `p` or `p/q`")]
    BadScalar(String),

    #[error("duplicate basis label `{label}` in degree {degree}")]
    DuplicateLabel { degree: i64, label: String },

    #[error("unknown basis label `{label}` in degree {degree}")]
    UnknownLabel { degree: i64, label: String },

    #[error("shape mismatch in degree {degree}: {detail}")]
    ShapeMismatch { degree: i64, detail: String },

    #[error("map is not invertible in degree {degree}")]
    SingularMap { degree: i64 },

    #[error("differential does not square to zero: d\u{b2}({label}) \u{2260} 0 in degree {degree}")]
    NotAComplex { degree: i64, label: String },

    #[error("map has degree {found}, expected {expected}")]
    WrongDegree { expected: i64, found: i64 },

    #[error("arity bound {bound} too small, need at least {required}")]
    ArityTooSmall { bound: usize, required: usize },

    #[error("invalid homotopy retract: {0}")]
    BadRetract(String),

    #[error("invalid input: {0}")]
    BadInput(String),
}
