use thiserror::Error;

use crate::group::Elem;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("closure exceeded the configured cap of {cap} elements")]
    ClosureBudgetExceeded { cap: usize },

    #[error("group of order {order} exceeds the enumeration cap {cap}")]
    OrderCapExceeded { order: usize, cap: usize },

    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("map is not a homomorphism: image({a}*{b}) != image({a})*image({b})")]
    NotAHomomorphism { a: Elem, b: Elem },

    #[error("generator {0} has no image")]
    MissingGeneratorImage(usize),

    #[error("seed elements do not generate the source group ({reached} of {order} reached)")]
    SeedsDoNotGenerate { reached: usize, order: usize },

    #[error("element index {index} out of range for group of order {order}")]
    ElementOutOfRange { index: usize, order: usize },

    #[error("subgroup is not normal: conjugating {member} by {by} leaves the subgroup")]
    NotNormal { member: Elem, by: Elem },

    #[error("set is not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("action is not a homomorphism into Aut(N): action({h1}*{h2}) != action({h1})∘action({h2})")]
    ActionNotHomomorphic { h1: Elem, h2: Elem },

    #[error("action of {0} is not an automorphism of N")]
    ActionNotAutomorphism(Elem),

    #[error("subgroup is not central: {member} does not commute with {with}")]
    NotCentral { member: Elem, with: Elem },

    #[error("representatives do not form a transversal: {0}")]
    NotATransversal(String),

    #[error("automorphism does not map the subgroup onto itself")]
    NotInvariant,

    #[error("map is not an automorphism")]
    NotAnAutomorphism,

    #[error("homomorphisms do not share source and target")]
    PairMismatch,

    #[error("groups do not match: {0}")]
    ParentMismatch(String),

    #[error("pair set is empty")]
    EmptySet,

    #[error("set is not a pre-nest: ({a},{b}) and ({c},{d}) give ({e},{f}) outside the set", a = .violation.0 .0, b = .violation.0 .1, c = .violation.1 .0, d = .violation.1 .1, e = .violation.2 .0, f = .violation.2 .1)]
    NotAPreNest { violation: ((Elem, Elem), (Elem, Elem), (Elem, Elem)) },

    #[error("invalid nest datum: {0}")]
    DatumInvalid(String),

    #[error("invalid arguments: {0}")]
    InvalidArgs(String),

    #[error("action order mismatch: prime {p} does not divide {m}")]
    ActionOrderMismatch { p: u64, m: u64 },

    #[error("matrix is not unimodular (determinant {det})")]
    NotUnimodular { det: i64 },

    #[error("budget must be at least one stage")]
    BudgetZero,

    #[error("element already lies in the target set at a faithful stage")]
    ElementInTarget,

    #[error("integer overflow in {0}")]
    Overflow(String),

    #[error("certificate does not verify: {0}")]
    CertificateMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
