use crate::error::Error;
use crate::extension::{disjointify, outer_measure_table};
use crate::instance::{validate_premeasure, Instance, Premeasure, SetClass, ValidationReport};
use crate::measure::{measure_sum, MeasureValue};
use crate::report::{SkipReason, Verdict};
use crate::structure::{is_quasi_semi_ring, Decomposer};
use crate::universe::Subset;
use std::collections::BTreeSet;

/// The ring generated by a class: all finite unions of pairwise-disjoint
/// member families, with members kept in ascending canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedRing {
    members: Vec<Subset>,
}

impl GeneratedRing {
    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.members.binary_search(&s).is_ok()
    }
}

/// Computes the generated ring as a fixpoint: start from the members and
/// repeatedly add unions of *disjoint* pairs.
///
/// Sound because every added set is a disjoint union of generators
/// (concatenate the two witnessing families); complete because a disjoint
/// union of `k` generators is built up through its partial unions, each
/// step adjoining one more disjoint generator. For a quasi-semi-ring this
/// family is the smallest ring containing the class;
/// [`verify_smallest_ring`] cross-checks that claim constructively.
pub fn generate_ring(class: &SetClass) -> GeneratedRing {
    let mut set: BTreeSet<Subset> = class.members().iter().copied().collect();
    loop {
        let snapshot: Vec<Subset> = set.iter().copied().collect();
        let before = set.len();
        for (i, &a) in snapshot.iter().enumerate() {
            for &b in &snapshot[i..] {
                if a.is_disjoint(b) {
                    set.insert(a | b);
                }
            }
        }
        if set.len() == before {
            break;
        }
    }
    GeneratedRing {
        members: set.into_iter().collect(),
    }
}

/// Independent closure route: the smallest family containing the class
/// that is closed under pairwise union and difference. This is by
/// definition the smallest ring containing the class.
pub fn union_difference_closure(class: &SetClass) -> Vec<Subset> {
    let mut set: BTreeSet<Subset> = class.members().iter().copied().collect();
    loop {
        let snapshot: Vec<Subset> = set.iter().copied().collect();
        let before = set.len();
        for &a in &snapshot {
            for &b in &snapshot {
                set.insert(a | b);
                set.insert(a - b);
            }
        }
        if set.len() == before {
            break;
        }
    }
    set.into_iter().collect()
}

/// Closure of the class under complement and pairwise union: the smallest
/// algebra containing the class, which over a finite universe is also its
/// smallest sigma-algebra.
pub fn sigma_closure(class: &SetClass) -> Vec<Subset> {
    let mut set: BTreeSet<Subset> = class.members().iter().copied().collect();
    loop {
        let snapshot: Vec<Subset> = set.iter().copied().collect();
        let before = set.len();
        for &a in &snapshot {
            set.insert(!a);
            for &b in &snapshot {
                set.insert(a | b);
            }
        }
        if set.len() == before {
            break;
        }
    }
    set.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SmallestRingFailure {
    /// The generated family is not closed under union and difference.
    NotClosed {
        a: Subset,
        b: Subset,
        missing: Subset,
    },
    /// Disjoint-union route and union/difference closure route disagree.
    ClosureMismatch {
        only_in_disjoint_route: Vec<Subset>,
        only_in_closure_route: Vec<Subset>,
    },
    /// A generated member has no disjoint decomposition into generators.
    MemberUndecomposable { member: Subset },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SmallestRingReport {
    Pass { ring_size: usize },
    Fail(SmallestRingFailure),
    Skipped(SkipReason),
}

impl SmallestRingReport {
    pub fn verdict(&self) -> Verdict {
        match self {
            SmallestRingReport::Pass { .. } => Verdict::Pass,
            SmallestRingReport::Fail(_) => Verdict::Fail,
            SmallestRingReport::Skipped(_) => Verdict::Skipped,
        }
    }
}

/// Checks that the generated ring is the smallest ring containing the
/// class, by three independent routes: it must be ring-closed itself, it
/// must coincide with the union/difference closure (the smallest ring by
/// definition), and each of its members must decompose as a disjoint
/// union of generators.
pub fn verify_smallest_ring(class: &SetClass) -> SmallestRingReport {
    let structure = is_quasi_semi_ring(class);
    if !structure.quasi_semi_ring {
        return SmallestRingReport::Skipped(SkipReason::NotQuasiSemiRing(
            structure
                .failure
                .expect("failed classification carries a witness"),
        ));
    }

    let ring = generate_ring(class);

    for &a in ring.members() {
        for &b in ring.members() {
            for candidate in [a | b, a - b] {
                if !ring.contains(candidate) {
                    return SmallestRingReport::Fail(SmallestRingFailure::NotClosed {
                        a,
                        b,
                        missing: candidate,
                    });
                }
            }
        }
    }

    let closure = union_difference_closure(class);
    if closure != ring.members() {
        let ring_set: BTreeSet<Subset> = ring.members().iter().copied().collect();
        let closure_set: BTreeSet<Subset> = closure.iter().copied().collect();
        return SmallestRingReport::Fail(SmallestRingFailure::ClosureMismatch {
            only_in_disjoint_route: ring_set.difference(&closure_set).copied().collect(),
            only_in_closure_route: closure_set.difference(&ring_set).copied().collect(),
        });
    }

    let mut dec = Decomposer::new(class);
    for &m in ring.members() {
        if dec.decompose(m).is_none() {
            return SmallestRingReport::Fail(SmallestRingFailure::MemberUndecomposable {
                member: m,
            });
        }
    }

    SmallestRingReport::Pass {
        ring_size: ring.len(),
    }
}

/// One class carrying two premeasures, for extension-uniqueness checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoMeasureInstance {
    first: Instance,
    second: Instance,
}

impl TwoMeasureInstance {
    pub fn new(class: SetClass, first: Premeasure, second: Premeasure) -> Result<Self, Error> {
        let first = Instance::new(class.clone(), first)?;
        let second = Instance::new(class, second)?;
        Ok(TwoMeasureInstance { first, second })
    }

    pub fn class(&self) -> &SetClass {
        self.first.class()
    }

    pub fn first(&self) -> &Instance {
        &self.first
    }

    pub fn second(&self) -> &Instance {
        &self.second
    }

    /// First class member (in class order) on which the premeasures
    /// disagree, if any.
    pub fn class_disagreement(&self) -> Option<Subset> {
        self.class()
            .members()
            .iter()
            .copied()
            .find(|&m| self.first.value_of(m) != self.second.value_of(m))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UniquenessReport {
    Pass {
        ring_size: usize,
    },
    /// The induced outer measures, or the value forced by additivity over
    /// a disjoint decomposition into generators, disagree on a generated
    /// ring member.
    Fail {
        member: Subset,
        first_value: MeasureValue,
        second_value: MeasureValue,
        decomposition_sum: MeasureValue,
    },
    Skipped(SkipReason),
}

impl UniquenessReport {
    pub fn verdict(&self) -> Verdict {
        match self {
            UniquenessReport::Pass { .. } => Verdict::Pass,
            UniquenessReport::Fail { .. } => Verdict::Fail,
            UniquenessReport::Skipped(_) => Verdict::Skipped,
        }
    }
}

fn validation_skip(instance: &Instance) -> Option<SkipReason> {
    match validate_premeasure(instance) {
        ValidationReport::Pass => None,
        ValidationReport::Fail(v) => Some(SkipReason::PremeasureInvalid(v)),
        ValidationReport::Inconclusive { member, node_cap } => {
            Some(SkipReason::PremeasureInconclusive { member, node_cap })
        }
    }
}

/// Verifies that two finite premeasures agreeing on a quasi-semi-ring
/// induce outer measures agreeing on every generated ring member, and
/// that both values equal the sum forced by any disjoint decomposition
/// into generators. Preconditions (structure, additivity of both
/// premeasures, agreement on the class, finiteness) are gated as SKIPPED.
pub fn verify_uniqueness_on_ring(two: &TwoMeasureInstance) -> Result<UniquenessReport, Error> {
    let structure = is_quasi_semi_ring(two.class());
    if !structure.quasi_semi_ring {
        return Ok(UniquenessReport::Skipped(SkipReason::NotQuasiSemiRing(
            structure
                .failure
                .expect("failed classification carries a witness"),
        )));
    }
    for instance in [two.first(), two.second()] {
        if let Some(reason) = validation_skip(instance) {
            return Ok(UniquenessReport::Skipped(reason));
        }
    }
    if let Some(member) = two.class_disagreement() {
        return Ok(UniquenessReport::Skipped(
            SkipReason::MeasuresDisagreeOnClass { member },
        ));
    }
    for &member in two.class().members() {
        if !two.first().value_of(member).is_finite() {
            return Ok(UniquenessReport::Skipped(
                SkipReason::InfiniteMeasureOnClass { member },
            ));
        }
    }

    let first_table = outer_measure_table(two.first())?;
    let second_table = outer_measure_table(two.second())?;
    let ring = generate_ring(two.class());
    let mut dec = Decomposer::new(two.class());

    for &member in ring.members() {
        let first_value = first_table.value(member);
        let second_value = second_table.value(member);
        let decomposition = dec
            .decompose(member)
            .expect("generated ring members are disjoint unions of generators");
        let decomposition_sum = measure_sum(
            decomposition
                .pieces(two.class())
                .iter()
                .map(|p| two.first().value_of(*p)),
        );
        if first_value != second_value || *first_value != decomposition_sum {
            return Ok(UniquenessReport::Fail {
                member,
                first_value: first_value.clone(),
                second_value: second_value.clone(),
                decomposition_sum,
            });
        }
    }

    Ok(UniquenessReport::Pass {
        ring_size: ring.len(),
    })
}

/// Sigma-finiteness witness: the family of all finite-measure members, if
/// their union is the whole universe.
pub fn is_sigma_finite(instance: &Instance) -> Option<Vec<Subset>> {
    let finite: Vec<Subset> = instance
        .class()
        .members()
        .iter()
        .copied()
        .filter(|&m| instance.value_of(m).is_finite())
        .collect();
    let mut union = instance.universe().empty_set();
    for &m in &finite {
        union = union | m;
    }
    if union.is_full() {
        Some(finite)
    } else {
        None
    }
}

/// Splits a class member into pairwise-disjoint class members of finite
/// measure whose union is the member, using a sigma-finiteness witness:
/// the finite-measure cover is disjointified, and the member is then
/// decomposed inside each disjoint piece.
///
/// Each returned piece sits inside a finite-measure member, so for an
/// additive premeasure (monotone on members) every piece has finite
/// measure.
pub fn finite_measure_decomposition(instance: &Instance, a: Subset) -> Result<Vec<Subset>, Error> {
    let class = instance.class();
    if !class.contains(a) {
        return Err(Error::NotAClassMember { subset: a });
    }
    let cover = is_sigma_finite(instance).ok_or(Error::NotSigmaFinite)?;
    let disjoint_cover = disjointify(&cover, class)?;
    let mut dec = Decomposer::new(class);
    let mut pieces = Vec::new();
    for d in disjoint_cover {
        let t = a & d;
        if t.is_empty() {
            continue;
        }
        let decomposition =
            dec.decompose(t)
                .ok_or(Error::NotQuasiSemiRing { a, b: d, target: t })?;
        pieces.extend(decomposition.pieces(class));
    }
    debug_assert!(crate::instance::is_partition(&pieces, a).unwrap_or(false));
    Ok(pieces)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SigmaUniquenessFailure {
    /// Sigma-finiteness should force the full set into the generated ring.
    FullSetNotInRing,
    /// The generated ring and the complement/union closure disagree, so
    /// the ring is not the sigma-algebra generated by the class.
    SigmaAlgebraMismatch {
        only_in_ring: Vec<Subset>,
        only_in_sigma: Vec<Subset>,
    },
    /// The two induced outer measures disagree on a generated member.
    ValueMismatch {
        member: Subset,
        first_value: MeasureValue,
        second_value: MeasureValue,
    },
    /// A class member's outer measure does not match the measure sum of
    /// its finite decomposition.
    DecompositionSumMismatch {
        member: Subset,
        decomposition_sum: MeasureValue,
        outer_value: MeasureValue,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SigmaUniquenessReport {
    Pass { ring_size: usize },
    Fail(SigmaUniquenessFailure),
    Skipped(SkipReason),
}

impl SigmaUniquenessReport {
    pub fn verdict(&self) -> Verdict {
        match self {
            SigmaUniquenessReport::Pass { .. } => Verdict::Pass,
            SigmaUniquenessReport::Fail(_) => Verdict::Fail,
            SigmaUniquenessReport::Skipped(_) => Verdict::Skipped,
        }
    }
}

/// The sigma-finite uniqueness check. Gates on structure, additivity of
/// both premeasures, agreement on the class, and sigma-finiteness; then
/// verifies that
///
/// * the full set lands in the generated ring (disjointifying a
///   sigma-finite cover exhibits it as a disjoint union of members),
/// * the generated ring equals the complement/union closure, i.e. it is
///   the sigma-algebra generated by the class (finite universe), and
/// * the two induced outer measures agree on every generated member,
///   with class members additionally cross-checked against their finite
///   decompositions.
pub fn verify_sigma_uniqueness(two: &TwoMeasureInstance) -> Result<SigmaUniquenessReport, Error> {
    let structure = is_quasi_semi_ring(two.class());
    if !structure.quasi_semi_ring {
        return Ok(SigmaUniquenessReport::Skipped(
            SkipReason::NotQuasiSemiRing(
                structure
                    .failure
                    .expect("failed classification carries a witness"),
            ),
        ));
    }
    for instance in [two.first(), two.second()] {
        if let Some(reason) = validation_skip(instance) {
            return Ok(SigmaUniquenessReport::Skipped(reason));
        }
    }
    if let Some(member) = two.class_disagreement() {
        return Ok(SigmaUniquenessReport::Skipped(
            SkipReason::MeasuresDisagreeOnClass { member },
        ));
    }
    if is_sigma_finite(two.first()).is_none() {
        return Ok(SigmaUniquenessReport::Skipped(SkipReason::NotSigmaFinite));
    }

    let ring = generate_ring(two.class());
    if !ring.contains(two.class().universe().full_set()) {
        return Ok(SigmaUniquenessReport::Fail(
            SigmaUniquenessFailure::FullSetNotInRing,
        ));
    }

    let sigma = sigma_closure(two.class());
    if sigma != ring.members() {
        let ring_set: BTreeSet<Subset> = ring.members().iter().copied().collect();
        let sigma_set: BTreeSet<Subset> = sigma.iter().copied().collect();
        return Ok(SigmaUniquenessReport::Fail(
            SigmaUniquenessFailure::SigmaAlgebraMismatch {
                only_in_ring: ring_set.difference(&sigma_set).copied().collect(),
                only_in_sigma: sigma_set.difference(&ring_set).copied().collect(),
            },
        ));
    }

    let first_table = outer_measure_table(two.first())?;
    let second_table = outer_measure_table(two.second())?;
    for &member in ring.members() {
        let first_value = first_table.value(member);
        let second_value = second_table.value(member);
        if first_value != second_value {
            return Ok(SigmaUniquenessReport::Fail(
                SigmaUniquenessFailure::ValueMismatch {
                    member,
                    first_value: first_value.clone(),
                    second_value: second_value.clone(),
                },
            ));
        }
    }

    for &member in two.class().members() {
        let pieces = finite_measure_decomposition(two.first(), member)?;
        let decomposition_sum = measure_sum(pieces.iter().map(|p| two.first().value_of(*p)));
        let outer_value = first_table.value(member);
        if decomposition_sum != *outer_value {
            return Ok(SigmaUniquenessReport::Fail(
                SigmaUniquenessFailure::DecompositionSumMismatch {
                    member,
                    decomposition_sum,
                    outer_value: outer_value.clone(),
                },
            ));
        }
    }

    Ok(SigmaUniquenessReport::Pass {
        ring_size: ring.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{interval_semi_ring, venn_triple_class};
    use crate::universe::Universe;

    fn mv(text: &str) -> MeasureValue {
        text.parse().unwrap()
    }

    fn counting(class: SetClass) -> Instance {
        let pairs: Vec<_> = class
            .members()
            .iter()
            .map(|m| (*m, MeasureValue::from_integer(m.len() as u64)))
            .collect();
        Instance::new(class, Premeasure::from_pairs(pairs)).unwrap()
    }

    #[test]
    fn ring_of_two_disjoint_singletons() {
        let u = Universe::new(["1", "2"]).unwrap();
        let s = |bits| u.subset_from_bits(bits).unwrap();
        let class = SetClass::new(u.clone(), vec![u.empty_set(), s(0b01), s(0b10)]).unwrap();
        let ring = generate_ring(&class);
        assert_eq!(ring.members(), &[s(0b00), s(0b01), s(0b10), s(0b11)]);
        assert!(ring.contains(s(0b11)));
    }

    #[test]
    fn venn_ring_covers_every_union_of_cells() {
        let class = venn_triple_class();
        let ring = generate_ring(&class);
        // All unions of the six covered cells, nothing touching the two
        // cells outside A or B.
        assert_eq!(ring.len(), 64);
        let a = class.members()[1];
        let b = class.members()[2];
        assert!(ring.contains(a | b));
        assert!(!ring.contains(class.universe().full_set()));
    }

    #[test]
    fn interval_ring_is_the_whole_power_set() {
        let class = interval_semi_ring(3).unwrap();
        let ring = generate_ring(&class);
        assert_eq!(ring.len(), 8);
    }

    #[test]
    fn smallest_ring_check_passes_on_fixtures() {
        for class in [
            venn_triple_class(),
            interval_semi_ring(3).unwrap(),
            interval_semi_ring(5).unwrap(),
        ] {
            let report = verify_smallest_ring(&class);
            assert!(
                matches!(report, SmallestRingReport::Pass { .. }),
                "got {report:?}"
            );
        }
    }

    #[test]
    fn smallest_ring_check_skips_non_qsr() {
        let u = Universe::new(["1", "2"]).unwrap();
        let members: Vec<_> = [0b00, 0b01, 0b11]
            .into_iter()
            .map(|bits| u.subset_from_bits(bits).unwrap())
            .collect();
        let class = SetClass::new(u, members).unwrap();
        assert!(matches!(
            verify_smallest_ring(&class),
            SmallestRingReport::Skipped(SkipReason::NotQuasiSemiRing(_))
        ));
    }

    #[test]
    fn uniqueness_passes_for_identical_premeasures() {
        let inst = counting(interval_semi_ring(3).unwrap());
        let two = TwoMeasureInstance::new(
            inst.class().clone(),
            inst.premeasure().clone(),
            inst.premeasure().clone(),
        )
        .unwrap();
        assert_eq!(two.class_disagreement(), None);
        let report = verify_uniqueness_on_ring(&two).unwrap();
        assert_eq!(report, UniquenessReport::Pass { ring_size: 8 });
    }

    #[test]
    fn uniqueness_skips_disagreeing_premeasures() {
        let inst = counting(interval_semi_ring(3).unwrap());
        let u = inst.universe();
        let bumped = Premeasure::from_pairs(inst.premeasure().iter().map(|(s, v)| {
            if s == u.full_set() {
                (s, mv("10"))
            } else {
                (s, v.clone())
            }
        }));
        let two = TwoMeasureInstance::new(inst.class().clone(), inst.premeasure().clone(), bumped)
            .unwrap();
        let report = verify_uniqueness_on_ring(&two).unwrap();
        // The bumped premeasure is no longer additive, which gates first.
        assert!(matches!(
            report,
            UniquenessReport::Skipped(SkipReason::PremeasureInvalid(_))
        ));
    }

    #[test]
    fn uniqueness_skips_plain_value_disagreement() {
        // Two singleton generators, second measure doubles one weight:
        // both premeasures are additive but disagree on a member.
        let u = Universe::new(["1", "2"]).unwrap();
        let s = |bits| u.subset_from_bits(bits).unwrap();
        let class = SetClass::new(u.clone(), vec![u.empty_set(), s(0b01), s(0b10)]).unwrap();
        let first = Premeasure::from_pairs([
            (u.empty_set(), mv("0")),
            (s(0b01), mv("1")),
            (s(0b10), mv("1")),
        ]);
        let second = Premeasure::from_pairs([
            (u.empty_set(), mv("0")),
            (s(0b01), mv("2")),
            (s(0b10), mv("1")),
        ]);
        let two = TwoMeasureInstance::new(class, first, second).unwrap();
        let report = verify_uniqueness_on_ring(&two).unwrap();
        assert_eq!(
            report,
            UniquenessReport::Skipped(SkipReason::MeasuresDisagreeOnClass { member: s(0b01) })
        );
    }

    #[test]
    fn uniqueness_skips_infinite_premeasures() {
        let u = Universe::new(["1"]).unwrap();
        let class = SetClass::new(u.clone(), vec![u.empty_set(), u.full_set()]).unwrap();
        let pm = Premeasure::from_pairs([
            (u.empty_set(), mv("0")),
            (u.full_set(), MeasureValue::Infinite),
        ]);
        let two = TwoMeasureInstance::new(class, pm.clone(), pm).unwrap();
        let report = verify_uniqueness_on_ring(&two).unwrap();
        assert_eq!(
            report,
            UniquenessReport::Skipped(SkipReason::InfiniteMeasureOnClass {
                member: u.full_set()
            })
        );
    }

    #[test]
    fn sigma_finiteness_witnesses() {
        let inst = counting(interval_semi_ring(3).unwrap());
        let witness = is_sigma_finite(&inst).unwrap();
        assert_eq!(witness.len(), inst.class().len());

        // {a} is finite but {b} is never covered by a finite member.
        let u = Universe::new(["a", "b"]).unwrap();
        let s = |bits| u.subset_from_bits(bits).unwrap();
        let class = SetClass::new(u.clone(), vec![u.empty_set(), s(0b01), s(0b11)]).unwrap();
        let inst = Instance::new(
            class,
            Premeasure::from_pairs([
                (u.empty_set(), mv("0")),
                (s(0b01), mv("1")),
                (s(0b11), MeasureValue::Infinite),
            ]),
        )
        .unwrap();
        assert_eq!(is_sigma_finite(&inst), None);
    }

    /// Universe {1,2}, all four subsets, mu({1}) = mu({2}) = 1 but
    /// mu({1,2}) = inf. Not additive (the validator flags it), yet
    /// sigma-finite, so the finite decomposition construction applies.
    fn inconsistent_top_instance() -> Instance {
        let u = Universe::new(["1", "2"]).unwrap();
        let s = |bits| u.subset_from_bits(bits).unwrap();
        let class =
            SetClass::new(u.clone(), vec![u.empty_set(), s(0b01), s(0b10), s(0b11)]).unwrap();
        Instance::new(
            class,
            Premeasure::from_pairs([
                (u.empty_set(), mv("0")),
                (s(0b01), mv("1")),
                (s(0b10), mv("1")),
                (s(0b11), MeasureValue::Infinite),
            ]),
        )
        .unwrap()
    }

    #[test]
    fn finite_decomposition_splits_infinite_member() {
        let inst = inconsistent_top_instance();
        let u = inst.universe();
        let top = u.full_set();
        assert!(!inst.value_of(top).is_finite());
        let pieces = finite_measure_decomposition(&inst, top).unwrap();
        assert_eq!(
            pieces,
            vec![
                u.subset_from_bits(0b01).unwrap(),
                u.subset_from_bits(0b10).unwrap()
            ]
        );
        assert!(pieces.iter().all(|p| inst.value_of(*p).is_finite()));
    }

    #[test]
    fn finite_decomposition_of_empty_set_is_empty() {
        let inst = counting(interval_semi_ring(3).unwrap());
        assert_eq!(
            finite_measure_decomposition(&inst, inst.universe().empty_set()).unwrap(),
            Vec::new()
        );
    }

    #[test]
    fn finite_decomposition_on_intervals() {
        let inst = counting(interval_semi_ring(3).unwrap());
        let u = inst.universe();
        let top = u.full_set();
        let pieces = finite_measure_decomposition(&inst, top).unwrap();
        assert!(crate::instance::is_partition(&pieces, top).unwrap());
        let sum: MeasureValue = pieces.iter().map(|p| inst.value_of(*p)).sum();
        assert_eq!(sum, mv("3"));
    }

    #[test]
    fn finite_decomposition_requires_sigma_finiteness() {
        let u = Universe::new(["a", "b"]).unwrap();
        let s = |bits| u.subset_from_bits(bits).unwrap();
        let class = SetClass::new(u.clone(), vec![u.empty_set(), s(0b11)]).unwrap();
        let inst = Instance::new(
            class,
            Premeasure::from_pairs([(u.empty_set(), mv("0")), (s(0b11), MeasureValue::Infinite)]),
        )
        .unwrap();
        assert_eq!(
            finite_measure_decomposition(&inst, s(0b11)).unwrap_err(),
            Error::NotSigmaFinite
        );
        assert_eq!(
            finite_measure_decomposition(&inst, s(0b01)).unwrap_err(),
            Error::NotAClassMember { subset: s(0b01) }
        );
    }

    #[test]
    fn sigma_uniqueness_on_intervals() {
        let inst = counting(interval_semi_ring(3).unwrap());
        let two = TwoMeasureInstance::new(
            inst.class().clone(),
            inst.premeasure().clone(),
            inst.premeasure().clone(),
        )
        .unwrap();
        let report = verify_sigma_uniqueness(&two).unwrap();
        assert_eq!(report, SigmaUniquenessReport::Pass { ring_size: 8 });
    }

    #[test]
    fn sigma_uniqueness_requires_sigma_finiteness() {
        // {empty, {a}} over {a, b}: additive and a quasi-semi-ring, but
        // atom b is never covered.
        let u = Universe::new(["a", "b"]).unwrap();
        let a = u.subset_from_bits(0b01).unwrap();
        let class = SetClass::new(u.clone(), vec![u.empty_set(), a]).unwrap();
        let pm = Premeasure::from_pairs([(u.empty_set(), mv("0")), (a, mv("1"))]);
        let two = TwoMeasureInstance::new(class, pm.clone(), pm).unwrap();
        let report = verify_sigma_uniqueness(&two).unwrap();
        assert_eq!(
            report,
            SigmaUniquenessReport::Skipped(SkipReason::NotSigmaFinite)
        );
        assert_eq!(report.verdict(), Verdict::Skipped);
    }

    #[test]
    fn closure_routes_agree_on_venn() {
        let class = venn_triple_class();
        let ring = generate_ring(&class);
        assert_eq!(union_difference_closure(&class), ring.members());
        // The sigma closure additionally contains complements, which pull
        // in the two cells outside A or B.
        let sigma = sigma_closure(&class);
        assert!(sigma.len() > ring.len());
        assert!(sigma.contains(&class.universe().full_set()));
    }
}
