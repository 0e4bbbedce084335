//! One function per subcommand. Each returns a [`Report`]; errors that
//! prevent a verdict from existing at all (bad flag values, instances too
//! large for a full table) come back as diagnostics instead.
//!
//! Witness conventions: a single subset is written as its canonical key
//! (sorted labels joined with commas, empty string for the empty set), so
//! it can be fed back to `outer-measure --set`. Lists of subsets use the
//! brace form `{a,b}` and are space-separated. Measure values print as
//! `p/q`, an integer, or `inf`.

use crate::format::{canonical_json, instance_to_file, parse_set_key, Diagnostic, DiagnosticCode};
use crate::report::Report;
use qsr_core::gen::{generate_instance, GenOptions, InstanceStyle};
use qsr_core::geom::arc::wraparound_pair;
use qsr_core::geom::rect::square_overlap_pair;
use qsr_core::geom::{
    arc_difference, arc_intersect, rect_difference, rect_intersect, verify_arc_decompositions,
    verify_rect_decompositions, Arc, ArcSet, Rect, RectSet,
};
use qsr_core::instance::{PremeasureViolation, ValidationReport};
use qsr_core::report::SkipReason;
use qsr_core::search::{search_uniqueness_counterexample, AtomMeasure};
use qsr_core::uniqueness::SigmaUniquenessFailure;
use qsr_core::{
    enumerate_measurable, generate_ring, is_quasi_semi_ring, outer_measure_table,
    splitting_witness, verify_disjoint_cover_equivalence, verify_extension_theorem,
    verify_sigma_uniqueness, verify_uniqueness_on_ring, DisjointCoverReport, Error,
    ExtensionReport, Instance, SigmaUniquenessReport, Subset, TwoMeasureInstance, UniquenessReport,
    Universe, Verdict,
};

/// Samples used by the demo sweeps. Small enough to stay instant, large
/// enough that the sweeps mean something.
const DEMO_SAMPLES: u32 = 200;
const DEMO_PROBES: u32 = 24;

fn key(universe: &Universe, s: Subset) -> String {
    universe.subset_key(s)
}

fn braced_list(universe: &Universe, sets: &[Subset]) -> String {
    const CAP: usize = 24;
    let mut parts: Vec<String> = sets
        .iter()
        .take(CAP)
        .map(|&s| universe.format_subset(s))
        .collect();
    if sets.len() > CAP {
        parts.push(format!("... {} more", sets.len() - CAP));
    }
    parts.join(" ")
}

/// An instance can be structurally fine yet too large for an operation
/// that tabulates the whole power set.
fn unsupported(e: Error) -> Diagnostic {
    Diagnostic::new(DiagnosticCode::Unsupported, "instance", e)
}

pub fn check_structure(instance: &Instance) -> Report {
    let s = is_quasi_semi_ring(instance.class());
    let mut report = Report::new("check-structure", s.verdict())
        .witness("level", s.level())
        .witness("quasi_semi_ring", s.quasi_semi_ring)
        .witness("semi_ring", s.semi_ring)
        .witness("ring", s.ring)
        .witness("algebra", s.algebra);
    if let Some(failure) = &s.failure {
        report = report.witness("failure", failure);
    }
    report
}

pub fn validate_premeasure(instance: &Instance) -> Report {
    let universe = instance.universe();
    match qsr_core::validate_premeasure(instance) {
        ValidationReport::Pass => Report::new("validate-premeasure", Verdict::Pass)
            .witness("members_checked", instance.class().len()),
        ValidationReport::Fail(PremeasureViolation::EmptySetNonzero { value }) => {
            Report::new("validate-premeasure", Verdict::Fail)
                .witness("kind", "empty-set-nonzero")
                .witness("empty_set_value", value)
        }
        ValidationReport::Fail(PremeasureViolation::Additivity {
            member,
            partition,
            partition_sum,
            assigned,
        }) => Report::new("validate-premeasure", Verdict::Fail)
            .witness("kind", "additivity")
            .witness("member", key(universe, member))
            .witness("partition", braced_list(universe, &partition))
            .witness("partition_sum", partition_sum)
            .witness("assigned", assigned),
        ValidationReport::Inconclusive { member, node_cap } => {
            Report::new("validate-premeasure", Verdict::Inconclusive)
                .witness("member", key(universe, member))
                .witness("node_cap", node_cap)
        }
    }
}

pub fn outer_measure(instance: &Instance, set_key: &str) -> Result<Report, Diagnostic> {
    let universe = instance.universe();
    let set = parse_set_key(universe, set_key)?;
    let table = outer_measure_table(instance).map_err(unsupported)?;
    Ok(Report::new("outer-measure", Verdict::Pass)
        .witness("set", key(universe, set))
        .witness("value", table.value(set)))
}

/// Default mode checks the class members; `--all` sweeps the power set.
pub fn measurable(instance: &Instance, all: bool) -> Result<Report, Diagnostic> {
    let universe = instance.universe();
    let table = outer_measure_table(instance).map_err(unsupported)?;
    if all {
        let sweep = enumerate_measurable(&table);
        let mut report = Report::new("measurable", sweep.verdict())
            .witness("mode", "all")
            .witness("checked", table.len())
            .witness("measurable", sweep.measurable.len())
            .witness("algebra", sweep.algebra);
        if let Some(f) = sweep.failures.first() {
            report = report
                .witness("candidate", key(universe, f.candidate))
                .witness("witness", key(universe, f.witness))
                .witness("failures", sweep.failures.len());
        }
        Ok(report)
    } else {
        let mut first_failure = None;
        let mut failures = 0usize;
        for &member in instance.class().members() {
            if let Some(witness) = splitting_witness(&table, member) {
                failures += 1;
                first_failure.get_or_insert((member, witness));
            }
        }
        let verdict = if failures == 0 {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        let mut report = Report::new("measurable", verdict)
            .witness("mode", "class")
            .witness("checked", instance.class().len());
        if let Some((candidate, witness)) = first_failure {
            report = report
                .witness("candidate", key(universe, candidate))
                .witness("witness", key(universe, witness))
                .witness("failures", failures);
        }
        Ok(report)
    }
}

pub fn verify_extension(instance: &Instance) -> Result<Report, Diagnostic> {
    let universe = instance.universe();
    let report = match verify_extension_theorem(instance).map_err(unsupported)? {
        ExtensionReport::Pass { members_checked } => Report::new("verify-extension", Verdict::Pass)
            .witness("members_checked", members_checked),
        ExtensionReport::NotMeasurable { member, witness } => {
            Report::new("verify-extension", Verdict::Fail)
                .witness("kind", "not-measurable")
                .witness("member", key(universe, member))
                .witness("witness", key(universe, witness))
        }
        ExtensionReport::ValueMismatch {
            member,
            outer,
            assigned,
        } => Report::new("verify-extension", Verdict::Fail)
            .witness("kind", "value-mismatch")
            .witness("member", key(universe, member))
            .witness("outer", outer)
            .witness("assigned", assigned),
        ExtensionReport::Skipped(reason) => skipped("verify-extension", universe, &reason),
    };
    Ok(report)
}

/// Disjoint-cover equivalence: restricting covers to pairwise-disjoint
/// families must not change any outer measure value.
pub fn verify_prop1(instance: &Instance) -> Result<Report, Diagnostic> {
    let universe = instance.universe();
    let report = match verify_disjoint_cover_equivalence(instance).map_err(unsupported)? {
        DisjointCoverReport::Pass { sets_checked } => {
            Report::new("verify-prop1", Verdict::Pass).witness("sets_checked", sets_checked)
        }
        DisjointCoverReport::Fail {
            set,
            unrestricted,
            disjoint_only,
        } => Report::new("verify-prop1", Verdict::Fail)
            .witness("set", key(universe, set))
            .witness("unrestricted", unrestricted)
            .witness("disjoint_only", disjoint_only),
        DisjointCoverReport::Skipped(reason) => skipped("verify-prop1", universe, &reason),
    };
    Ok(report)
}

pub fn generate_ring_cmd(instance: &Instance) -> Report {
    let structure = is_quasi_semi_ring(instance.class());
    if !structure.quasi_semi_ring {
        let reason = SkipReason::NotQuasiSemiRing(
            structure
                .failure
                .expect("failed classification carries a witness"),
        );
        return skipped("generate-ring", instance.universe(), &reason);
    }
    let universe = instance.universe();
    let ring = generate_ring(instance.class());
    Report::new("generate-ring", Verdict::Pass)
        .witness("class_size", instance.class().len())
        .witness("ring_size", ring.len())
        .witness("members", braced_list(universe, ring.members()))
}

/// Both uniqueness commands need the two files to describe the same
/// measurable world: identical universes and identical classes. Anything
/// else is an input error, not a FAIL.
fn pair_up(first: &Instance, second: &Instance) -> Result<TwoMeasureInstance, Diagnostic> {
    let mismatch =
        |message: &str| Diagnostic::new(DiagnosticCode::MismatchedInputs, "--second", message);
    if first.universe().atoms() != second.universe().atoms() {
        return Err(mismatch("the two files declare different universes"));
    }
    if first.class().len() != second.class().len()
        || first
            .class()
            .members()
            .iter()
            .any(|&m| !second.class().contains(m))
    {
        return Err(mismatch("the two files declare different classes"));
    }
    TwoMeasureInstance::new(
        first.class().clone(),
        first.premeasure().clone(),
        second.premeasure().clone(),
    )
    .map_err(|e| mismatch(&e.to_string()))
}

pub fn verify_uniqueness(first: &Instance, second: &Instance) -> Result<Report, Diagnostic> {
    let universe = first.universe();
    let two = pair_up(first, second)?;
    let report = match verify_uniqueness_on_ring(&two).map_err(unsupported)? {
        UniquenessReport::Pass { ring_size } => {
            Report::new("verify-uniqueness", Verdict::Pass).witness("ring_size", ring_size)
        }
        UniquenessReport::Fail {
            member,
            first_value,
            second_value,
            decomposition_sum,
        } => Report::new("verify-uniqueness", Verdict::Fail)
            .witness("member", key(universe, member))
            .witness("first_value", first_value)
            .witness("second_value", second_value)
            .witness("decomposition_sum", decomposition_sum),
        UniquenessReport::Skipped(reason) => skipped("verify-uniqueness", universe, &reason),
    };
    Ok(report)
}

pub fn verify_sigma(first: &Instance, second: &Instance) -> Result<Report, Diagnostic> {
    let universe = first.universe();
    let two = pair_up(first, second)?;
    let name = "verify-sigma-uniqueness";
    let report = match verify_sigma_uniqueness(&two).map_err(unsupported)? {
        SigmaUniquenessReport::Pass { ring_size } => {
            Report::new(name, Verdict::Pass).witness("ring_size", ring_size)
        }
        SigmaUniquenessReport::Fail(SigmaUniquenessFailure::FullSetNotInRing) => {
            Report::new(name, Verdict::Fail).witness("kind", "full-set-not-in-ring")
        }
        SigmaUniquenessReport::Fail(SigmaUniquenessFailure::SigmaAlgebraMismatch {
            only_in_ring,
            only_in_sigma,
        }) => Report::new(name, Verdict::Fail)
            .witness("kind", "sigma-algebra-mismatch")
            .witness("only_in_ring", braced_list(universe, &only_in_ring))
            .witness("only_in_sigma", braced_list(universe, &only_in_sigma)),
        SigmaUniquenessReport::Fail(SigmaUniquenessFailure::ValueMismatch {
            member,
            first_value,
            second_value,
        }) => Report::new(name, Verdict::Fail)
            .witness("kind", "value-mismatch")
            .witness("member", key(universe, member))
            .witness("first_value", first_value)
            .witness("second_value", second_value),
        SigmaUniquenessReport::Fail(SigmaUniquenessFailure::DecompositionSumMismatch {
            member,
            decomposition_sum,
            outer_value,
        }) => Report::new(name, Verdict::Fail)
            .witness("kind", "decomposition-sum-mismatch")
            .witness("member", key(universe, member))
            .witness("decomposition_sum", decomposition_sum)
            .witness("outer_value", outer_value),
        SigmaUniquenessReport::Skipped(reason) => skipped(name, universe, &reason),
    };
    Ok(report)
}

fn atom_measure_string(m: &AtomMeasure) -> String {
    m.universe()
        .atoms()
        .iter()
        .zip(m.weights())
        .map(|(label, w)| format!("{label}={w}"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn search_counterexample(instance: &Instance, seed: u64, budget: u64) -> Report {
    let universe = instance.universe();
    match search_uniqueness_counterexample(instance, seed, budget) {
        Some(ce) => Report::new("search-counterexample", Verdict::Found)
            .with_seed(seed)
            .witness("budget", budget)
            .witness("trial", ce.trial)
            .witness("witness", key(universe, ce.witness))
            .witness("first", atom_measure_string(&ce.first))
            .witness("second", atom_measure_string(&ce.second))
            .witness("first_value", ce.first.value(ce.witness))
            .witness("second_value", ce.second.value(ce.witness)),
        None => Report::new("search-counterexample", Verdict::NoneFound)
            .with_seed(seed)
            .witness("budget", budget),
    }
}

fn arcs_string(set: &ArcSet) -> String {
    if set.is_empty() {
        return "(empty)".to_owned();
    }
    set.pieces()
        .iter()
        .map(Arc::to_string)
        .collect::<Vec<_>>()
        .join(" + ")
}

fn rects_string(set: &RectSet) -> String {
    if set.is_empty() {
        return "(empty)".to_owned();
    }
    set.pieces()
        .iter()
        .map(Rect::to_string)
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Shows the canonical wraparound example, then runs a randomized sweep.
pub fn arcs_demo(seed: u64) -> Report {
    let (a, b) = wraparound_pair();
    let intersection = arc_intersect(&a, &b);
    let difference = arc_difference(&a, &b);
    let sweep = verify_arc_decompositions(DEMO_SAMPLES, DEMO_PROBES, seed);
    let mut report = Report::new("arcs-demo", sweep.verdict())
        .with_seed(seed)
        .witness("a", &a)
        .witness("b", &b)
        .witness("intersection", arcs_string(&intersection))
        .witness("intersection_length", intersection.measure())
        .witness("difference", arcs_string(&difference))
        .witness("difference_length", difference.measure())
        .witness("samples", sweep.samples)
        .witness("max_intersection_pieces", sweep.max_intersection_pieces)
        .witness("max_difference_pieces", sweep.max_difference_pieces)
        .witness("wraparound_split_seen", sweep.wraparound_split_seen);
    if let Some(failure) = &sweep.failure {
        report = report.witness("failure", format!("{failure:?}"));
    }
    report
}

/// Shows the canonical square-overlap example, then runs a randomized
/// sweep.
pub fn rects_demo(seed: u64) -> Report {
    let (a, b) = square_overlap_pair();
    let intersection = rect_intersect(&a, &b);
    let difference = rect_difference(&a, &b);
    let sweep = verify_rect_decompositions(DEMO_SAMPLES, DEMO_PROBES, seed);
    let mut report = Report::new("rects-demo", sweep.verdict())
        .with_seed(seed)
        .witness("a", &a)
        .witness("b", &b)
        .witness("intersection", rects_string(&intersection))
        .witness("intersection_area", intersection.area())
        .witness("difference", rects_string(&difference))
        .witness("difference_area", difference.area())
        .witness("samples", sweep.samples)
        .witness("max_intersection_pieces", sweep.max_intersection_pieces)
        .witness("max_difference_pieces", sweep.max_difference_pieces)
        .witness("square_split_seen", sweep.square_split_seen);
    if let Some(failure) = &sweep.failure {
        report = report.witness("failure", format!("{failure:?}"));
    }
    report
}

/// `gen` either prints an instance file or reports INCONCLUSIVE when the
/// rejection style runs out of attempts.
#[derive(Debug)]
pub enum GenOutcome {
    Instance(String),
    Report(Report),
}

pub fn gen(seed: u64, n: usize, style: InstanceStyle) -> Result<GenOutcome, Diagnostic> {
    let opts = GenOptions::new(seed, n, style);
    match generate_instance(&opts) {
        Ok(instance) => Ok(GenOutcome::Instance(canonical_json(&instance_to_file(
            &instance,
        )))),
        Err(Error::RejectionBudgetExhausted { attempts }) => Ok(GenOutcome::Report(
            Report::new("gen", Verdict::Inconclusive)
                .with_seed(seed)
                .witness("style", style)
                .witness("attempts", attempts),
        )),
        Err(e) => Err(Diagnostic::new(DiagnosticCode::BadUniverse, "--n", e)),
    }
}

/// SKIPPED reports carry the reason; when the reason singles out a class
/// member, it is repeated as a canonical key so tooling need not parse
/// the prose.
fn skipped(command: &str, universe: &Universe, reason: &SkipReason) -> Report {
    let mut report = Report::new(command, Verdict::Skipped).witness("reason", reason);
    let member = match reason {
        SkipReason::PremeasureInconclusive { member, .. }
        | SkipReason::MeasuresDisagreeOnClass { member }
        | SkipReason::InfiniteMeasureOnClass { member } => Some(*member),
        SkipReason::NotQuasiSemiRing(_)
        | SkipReason::PremeasureInvalid(_)
        | SkipReason::NotSigmaFinite => None,
    };
    if let Some(m) = member {
        report = report.witness("member", key(universe, m));
    }
    report
}
