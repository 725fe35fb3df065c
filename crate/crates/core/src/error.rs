//! Error type shared by every module of the crate.

use thiserror::Error;

use crate::half::HalfInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpinError {
    #[error("coupling path is empty")]
    EmptyPath,
    #[error("coupling path must start at S1 = 1/2, found {0}")]
    InvalidStart(HalfInt),
    #[error("invalid coupling step at position {index}: {from} -> {to} (|dS| must be 1/2)")]
    InvalidStep {
        index: usize,
        from: HalfInt,
        to: HalfInt,
    },
    #[error("negative spin {spin} at position {index}")]
    NegativeSpin { index: usize, spin: HalfInt },
    #[error("magnetic quantum number {m} out of range for total spin {spin}")]
    MOutOfRange { m: HalfInt, spin: HalfInt },
    #[error("branch j1 - 1/2 is undefined for j1 = {0}")]
    InvalidBranch(HalfInt),
    #[error("states have different qubit counts ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("basis string length {found} does not match qubit count {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("no unconsumed detector left for the descent at emitter {0}")]
    ExhaustedDetectors(usize),
    #[error("invalid explicit layout: {0}")]
    InvalidExplicitLayout(String),
    #[error("permutation-sum oracle capped at n = {cap}, requested n = {n}")]
    CapExceeded { n: usize, cap: usize },
    #[error("cannot parse {what} from token {token:?}")]
    Parse { what: &'static str, token: String },
    #[error("path of length {found} is too short, at least {need} qubits required")]
    PathTooShort { need: usize, found: usize },
    #[error("child label m = {m} is inadmissible for total spin {spin}")]
    ChildInadmissible { m: HalfInt, spin: HalfInt },
    #[error("division by a non-monomial or zero radical")]
    NonMonomialDivisor,
}

pub type Result<T> = std::result::Result<T, SpinError>;
