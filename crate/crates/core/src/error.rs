use thiserror::Error;

use crate::exact::Parity;
use crate::expr::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("gcd undefined: both polynomials are zero")]
    GcdUndefined,
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("division by the zero map")]
    DivisionByZeroMap,
    #[error("composition is the constant map at infinity")]
    ConstantInfinity,
    #[error("Möbius map has zero determinant")]
    SingularMoebius,
    #[error("map has degree {0}, a Möbius map needs degree 1")]
    NotMoebius(usize),
    #[error("map is {found}, {operation} requires {required}")]
    WrongParity {
        found: Parity,
        operation: &'static str,
        required: Parity,
    },
    #[error("not a semigroup generator: degree {0} < 2")]
    NotAGenerator(usize),
    #[error("invalid half-plane parameters: {0}")]
    InvalidParams(String),
    #[error("lift failed its semi-conjugacy check for {0}")]
    LiftVerification(String),
    #[error("root solver did not converge (residual {residual:.3e})")]
    RootSolver { residual: f64 },
    #[error("preimage residual {residual:.3e} exceeds tolerance {tol:.1e}")]
    PreimageResidual { residual: f64, tol: f64 },
    #[error("starting point {0} is exceptional for every generator")]
    ExceptionalStart(String),
    #[error("invalid semigroup spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
