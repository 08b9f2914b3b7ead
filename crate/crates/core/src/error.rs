use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("universe must contain at least one element")]
    EmptyUniverse,
    #[error("universe has {0} elements; at most {max} are supported", max = crate::space::MAX_ELEMENTS)]
    UniverseTooLarge(usize),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("image of `{0}` is empty")]
    EmptyImage(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("no image given for `{0}`")]
    MissingImage(String),
    #[error("no value given for `{0}`")]
    MissingValue(String),
    #[error("bad measure: {0}")]
    BadMeasure(String),
    #[error("events belong to universes of different size ({0} vs {1})")]
    UniverseMismatch(usize, usize),
    #[error("conditioning event has zero {0} probability")]
    ZeroConditioningMass(&'static str),
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed fraction `{0}`")]
    BadFraction(String),
    #[error("exhaustive enumeration over {0} elements exceeds the limit of {1}")]
    DomainTooLarge(usize, usize),
    #[error("unknown law `{0}`")]
    UnknownLaw(String),
    #[error("inputs do not fit law {0}: {1}")]
    BadLawInput(String, String),
}
