use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which of the three side conditions of an Evans system failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvansCondition {
    /// `sigma(i) m_i v_i = r v_rho(i)`
    Multiplier,
    /// `(m_i - 1) v_i = (r - 1) v_tau(i)`
    Difference,
    /// the product `(m_1 - r) prod (m_1 - m_i) prod (v_i^2 - v_j^2)` is nonzero
    Nonzero,
}

impl std::fmt::Display for EvansCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EvansCondition::Multiplier => "multiplier-condition",
            EvansCondition::Difference => "difference-condition",
            EvansCondition::Nonzero => "nonzero-condition",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order {q} exceeds the table limit {limit}")]
    OrderTooLarge { q: u64, limit: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("element encoding {enc} is out of range for a field of order {q}")]
    ElementOutOfRange { enc: u64, q: u32 },
    #[error("modulus {0:?} is not a monic irreducible polynomial of the field degree")]
    InvalidModulus(Vec<u32>),
    #[error("element {0} is not primitive")]
    NotPrimitive(u32),
    #[error("index {k} does not divide q-1 = {order}")]
    IndexNotDivisor { k: u64, order: u64 },
    #[error("class {class} out of range for index {k}")]
    ClassOutOfRange { class: u64, k: u64 },
    #[error("table length {got} does not match field order {q}")]
    LengthMismatch { got: usize, q: u32 },
    #[error("map is not an orthomorphism")]
    NotOrthomorphism,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("Evans system fails the {condition} at position {position}")]
    EvansViolation {
        condition: EvansCondition,
        position: usize,
    },
    #[error("construction requires odd characteristic")]
    EvenCharacteristic,
    #[error("precondition not satisfied: {0}")]
    ConstraintNotSatisfied(String),
    #[error("no orthomorphism of least index (q-1)/2 exists over the field of order {0}")]
    HalfIndexEmpty(u32),
    #[error("no witness available: {0}")]
    NoWitness(String),
    #[error("{what} = {value} exceeds the configured cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: u64,
        cap: u64,
    },
    #[error("search budget exhausted after {0} work units")]
    BudgetExceeded(u64),
    #[error("range is vacuous: q = {q} < 3d + 1 for d = {d}")]
    VacuousRange { q: u32, d: u32 },
    #[error("duplicate element {0} in constraint set")]
    DuplicateElement(u32),
    #[error("no labelling validates the claim: {0}")]
    NoLabellingFound(String),
    #[error("manifest line {line}: {msg}")]
    Manifest { line: usize, msg: String },
    #[error("malformed record: {0}")]
    MalformedRecord(String),
    #[error("records do not share one field descriptor")]
    FieldMismatch,
    #[error("maps are not pairwise orthogonal orthomorphisms")]
    NotOrthogonal,
    #[error("arithmetic overflow")]
    Overflow,
}

impl Error {
    /// Stable machine-readable code for CLI output.
    pub fn reason_code(&self) -> &'static str {
        match self {
            Error::NotPrimePower(_) => "not-a-prime-power",
            Error::OrderTooLarge { .. } => "order-too-large",
            Error::DivisionByZero => "division-by-zero",
            Error::ZeroArgument => "zero-argument",
            Error::ElementOutOfRange { .. } => "element-out-of-range",
            Error::InvalidModulus(_) => "invalid-modulus",
            Error::NotPrimitive(_) => "not-primitive",
            Error::IndexNotDivisor { .. } => "index-not-divisor",
            Error::ClassOutOfRange { .. } => "class-out-of-range",
            Error::LengthMismatch { .. } => "length-mismatch",
            Error::NotOrthomorphism => "not-an-orthomorphism",
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::EvansViolation { condition, .. } => match condition {
                EvansCondition::Multiplier => "multiplier-condition-violated",
                EvansCondition::Difference => "difference-condition-violated",
                EvansCondition::Nonzero => "nonzero-condition-violated",
            },
            Error::EvenCharacteristic => "even-characteristic",
            Error::ConstraintNotSatisfied(_) => "constraint-not-satisfied",
            Error::HalfIndexEmpty(_) => "half-index-empty",
            Error::NoWitness(_) => "no-witness",
            Error::CapExceeded { .. } => "cap-exceeded",
            Error::BudgetExceeded(_) => "budget-exceeded",
            Error::VacuousRange { .. } => "vacuous-range",
            Error::DuplicateElement(_) => "duplicate-element",
            Error::NoLabellingFound(_) => "no-labelling-found",
            Error::Manifest { .. } => "manifest-parse",
            Error::MalformedRecord(_) => "malformed-record",
            Error::FieldMismatch => "field-mismatch",
            Error::NotOrthogonal => "not-orthogonal",
            Error::Overflow => "overflow",
        }
    }
}
