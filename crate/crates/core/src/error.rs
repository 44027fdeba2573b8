use thiserror::Error;

/// Errors produced by the group, ring and determinant routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid cyclic factor order {0}: orders must be at least 1")]
    InvalidOrder(i64),

    #[error("a group needs at least one cyclic factor")]
    NoFactors,

    #[error("group is too large to index: {0}")]
    GroupTooLarge(String),

    #[error("cannot parse group specification {spec:?}: {reason}")]
    ParseGroup { spec: String, reason: String },

    #[error("invalid group element {residues:?} for factor orders {orders:?}")]
    InvalidElement {
        residues: Vec<usize>,
        orders: Vec<usize>,
    },

    #[error("element index {index} out of range for a group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("split position {cut} out of range for {factors} cyclic factors")]
    CutOutOfRange { cut: usize, factors: usize },

    #[error("invalid coprime split: n={n}, r={r}, s={s}")]
    InvalidSplit { n: usize, r: usize, s: usize },

    #[error("cyclotomic level mismatch: {0} vs {1}")]
    LevelMismatch(usize, usize),

    #[error("cyclotomic integer is not a rational integer: {0}")]
    NotRational(String),

    #[error("cannot embed level {from} into level {to}: {from} does not divide {to}")]
    NotDivisibleLevel { from: usize, to: usize },

    #[error("unsupported group {0}: exponent must divide 2")]
    UnsupportedGroup(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("2-adic valuation of zero is undefined")]
    UndefinedValuation,

    #[error("no known M constant for H = {0} and none supplied")]
    UnknownM(String),

    #[error("search budget exceeded: box needs {required} evaluations, budget is {budget}")]
    BudgetExceeded { required: String, budget: u64 },

    #[error("unknown membership spec {0:?}")]
    UnknownSpec(String),

    #[error("inexact division inside fraction-free elimination")]
    InexactDivision,

    #[error("assignments live on different groups: {0} and {1}")]
    GroupMismatch(String, String),
    #[error("{u} is not a unit modulo {modulus}")]
    NotUnit { u: usize, modulus: usize },
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
