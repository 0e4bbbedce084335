use crate::instance::PremeasureViolation;
use crate::structure::StructureFailure;
use crate::universe::Subset;
use std::fmt;

/// Outcome vocabulary shared by every verification report.
///
/// `Pass`/`Fail` state a decided mathematical fact. `Skipped` means a
/// precondition of the statement under test does not hold, so the test
/// says nothing. `Inconclusive` means a search budget ran out.
/// `Found`/`NoneFound` are for searches, where finding something (e.g. a
/// counterexample) is the success case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
    Inconclusive,
    Found,
    NoneFound,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Skipped => "SKIPPED",
            Verdict::Inconclusive => "INCONCLUSIVE",
            Verdict::Found => "FOUND",
            Verdict::NoneFound => "NONE",
        };
        f.write_str(s)
    }
}

/// Why a theorem check was skipped rather than decided. Skips are always
/// explicit; no operation silently assumes its preconditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SkipReason {
    NotQuasiSemiRing(StructureFailure),
    PremeasureInvalid(PremeasureViolation),
    PremeasureInconclusive { member: Subset, node_cap: u64 },
    MeasuresDisagreeOnClass { member: Subset },
    InfiniteMeasureOnClass { member: Subset },
    NotSigmaFinite,
}

impl fmt::Display for SkipReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SkipReason::NotQuasiSemiRing(failure) => {
                write!(f, "class is not a quasi-semi-ring ({failure})")
            }
            SkipReason::PremeasureInvalid(v) => write!(f, "premeasure is not additive ({v})"),
            SkipReason::PremeasureInconclusive { member, node_cap } => write!(
                f,
                "premeasure validation hit the {node_cap}-node cap on member {member}"
            ),
            SkipReason::MeasuresDisagreeOnClass { member } => {
                write!(f, "the two premeasures disagree on class member {member}")
            }
            SkipReason::InfiniteMeasureOnClass { member } => {
                write!(f, "class member {member} has infinite measure")
            }
            SkipReason::NotSigmaFinite => {
                write!(f, "finite-measure members do not cover the universe")
            }
        }
    }
}
