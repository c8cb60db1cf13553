use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("pole at t = {at}: denominator {denominator} vanishes there")]
    Pole { at: String, denominator: String },

    #[error("not an integer polynomial: {numerator} / {denominator} leaves remainder {remainder}")]
    NotPolynomial {
        numerator: String,
        denominator: String,
        remainder: String,
    },

    #[error("series shape mismatch: {0}")]
    Shape(String),

    #[error("bad constant term: {0}")]
    ConstantTerm(String),

    #[error("quiver error: {0}")]
    Quiver(String),

    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },

    #[error("recognition failed at v = {v:?}: {detail}")]
    Recognition { v: Vec<u32>, detail: String },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("internal consistency violated: {0}")]
    Consistency(String),

    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
