use crate::universe::Subset;
use thiserror::Error;

/// Errors for structurally invalid inputs.
///
/// Mathematical outcomes (a class failing to be a quasi-semi-ring, a
/// premeasure failing additivity, a set failing measurability) are not
/// errors; they come back as typed reports with witnesses. `Error` is
/// reserved for inputs that are malformed before the mathematics starts.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("universe must contain at least one atom")]
    EmptyUniverse,

    #[error("universe has {atoms} atoms, limit is {max}")]
    UniverseTooLarge { atoms: usize, max: usize },

    #[error("atom label {label:?} is invalid: {reason}")]
    BadAtomLabel { label: String, reason: &'static str },

    #[error("duplicate atom label {label:?}")]
    DuplicateAtomLabel { label: String },

    #[error("unknown atom label {label:?}")]
    UnknownAtomLabel { label: String },

    #[error("atom index {index} out of range for a universe of {atoms} atoms")]
    AtomIndexOutOfRange { index: usize, atoms: usize },

    #[error("bit pattern {bits:#b} does not fit a universe of {atoms} atoms")]
    BitsOutOfRange { bits: u32, atoms: usize },

    #[error("subsets come from universes of different sizes ({left} vs {right})")]
    UniverseMismatch { left: usize, right: usize },

    #[error("duplicate class member {member}")]
    DuplicateMember { member: Subset },

    #[error("class does not contain the empty set")]
    MissingEmptySet,

    #[error("premeasure assigns no value to class member {member}")]
    MissingMeasureValue { member: Subset },

    #[error("premeasure assigns a value to {subset}, which is not a class member")]
    ExtraMeasureValue { subset: Subset },

    #[error("measure value {text:?} is negative")]
    NegativeMeasure { text: String },

    #[error("cannot parse {text:?} as a measure value (expected p, p/q, or inf)")]
    MalformedMeasure { text: String },

    #[error("operation over all 2^{atoms} subsets exceeds the table cap of {cap} atoms")]
    CapacityExceeded { atoms: usize, cap: usize },

    #[error("{subset} is not a member of the class")]
    NotAClassMember { subset: Subset },

    #[error("class is not a quasi-semi-ring: {target} (from the pair {a}, {b}) has no disjoint decomposition into members")]
    NotQuasiSemiRing {
        a: Subset,
        b: Subset,
        target: Subset,
    },

    #[error("finite-measure members do not cover the universe")]
    NotSigmaFinite,

    #[error("no quasi-semi-ring found within {attempts} rejection attempts")]
    RejectionBudgetExhausted { attempts: u64 },

    #[error("arc from {start} to {end} is invalid: {reason}")]
    BadArc {
        start: String,
        end: String,
        reason: &'static str,
    },

    #[error("rectangle ({x1},{x2}]x({y1},{y2}] is invalid: {reason}")]
    BadRect {
        x1: String,
        x2: String,
        y1: String,
        y2: String,
        reason: &'static str,
    },
}
