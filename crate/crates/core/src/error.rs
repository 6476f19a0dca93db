use thiserror::Error;

/// Why a hypothesis check rejected a fixed-space bound query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    Solvable,
    FullNormalClosure,
    Irreducible,
    NontrivialAction,
}

impl std::fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Hypothesis::Solvable => "group is not solvable",
            Hypothesis::FullNormalClosure => "normal closure of the element is a proper subgroup",
            Hypothesis::Irreducible => "module is not certified irreducible",
            Hypothesis::NontrivialAction => "action on the module is trivial",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed cycle notation: {0}")]
    MalformedCycle(String),
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("empty generator list")]
    EmptyGeneratorList,
    #[error("group too large: order {order} exceeds bound {bound}")]
    GroupTooLarge { order: u64, bound: u64 },
    #[error("subgroup is not normal in its parent")]
    NotNormal,
    #[error("group is not solvable")]
    NotSolvable,
    #[error("quotient is not solvable")]
    QuotientNotSolvable,
    #[error("operation undefined for the trivial group")]
    TrivialGroup,
    #[error("subgroup is not a minimal normal subgroup")]
    NotMinimalNormal,
    #[error("search budget exceeded: needed {needed}, budget {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("conjugacy class is empty")]
    EmptyClass,
    #[error("element order {0} is not prime")]
    NotPrimeOrder(u64),
    #[error("element order {order} violates the required condition: {condition}")]
    OrderConditionViolated { order: u64, condition: &'static str },
    #[error("element does not lie in the group")]
    ElementNotInGroup,
    #[error("zero vector")]
    ZeroVector,
    #[error("characteristic {p} divides the group order {order}")]
    ModularCharacteristic { p: u64, order: u64 },
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(Hypothesis),
    #[error("theorem violation suspected: {0}")]
    TheoremViolationSuspected(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed group file at line {line}: {msg}")]
    MalformedFile { line: usize, msg: String },
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("constructed group has order {built}, expected {expected}")]
    OrderMismatch { built: u64, expected: u64 },
    #[error("unknown group spec: {0}")]
    UnknownSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
