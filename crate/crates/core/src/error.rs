//! Crate-wide error type.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// `p` failed the trial-division primality check.
    NonPrime(u64),
    /// A supplied extension modulus has a proper monic divisor.
    ReducibleModulus,
    /// Modulus coefficient vector does not describe a monic degree-`d` polynomial.
    DegreeMismatch {
        expected: usize,
        got: usize,
    },
    /// `q = p^d` exceeds the table-arithmetic cap.
    FieldTooLarge {
        q: u64,
        cap: u64,
    },
    /// Requested primitive-root override does not generate the unit group.
    NotPrimitiveRoot(u16),
    DivisionByZero,
    /// Discrete log of the zero element.
    LogOfZero,
    /// Element has negative valuation, so it has no residue or digit expansion.
    NotIntegral,
    /// Index exceeds its allowed bound (e.g. `l > z` in the pairing map).
    OutOfRange {
        value: u64,
        bound: u64,
    },
    /// Cyclic polynomials of different lengths cannot be convolved.
    LengthMismatch {
        left: usize,
        right: usize,
    },
    /// Representative list violates a model invariant.
    InvalidReps(String),
    /// Model and field shapes are incompatible.
    InvalidConfig(String),
    /// Malformed element, word, or configuration literal.
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonPrime(p) => write!(f, "{p} is not prime"),
            Error::ReducibleModulus => write!(f, "extension modulus is reducible"),
            Error::DegreeMismatch { expected, got } => {
                write!(
                    f,
                    "modulus must be monic of degree {expected}, got length {got}"
                )
            }
            Error::FieldTooLarge { q, cap } => {
                write!(f, "field size q = {q} exceeds the supported cap {cap}")
            }
            Error::NotPrimitiveRoot(c) => {
                write!(f, "element code {c} does not generate the unit group")
            }
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::LogOfZero => write!(f, "discrete log of zero"),
            Error::NotIntegral => write!(f, "element has negative valuation"),
            Error::OutOfRange { value, bound } => {
                write!(f, "value {value} out of range (bound {bound})")
            }
            Error::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
            Error::InvalidReps(msg) => write!(f, "invalid representatives: {msg}"),
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
