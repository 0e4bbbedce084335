use crate::error::Error;
use crate::instance::{validate_premeasure, Instance, SetClass, ValidationReport};
use crate::measure::MeasureValue;
use crate::report::{SkipReason, Verdict};
use crate::structure::{is_quasi_semi_ring, Decomposer};
use crate::universe::{Subset, Universe};
use rayon::prelude::*;

/// Cap on universe size for operations that materialise all `2^n` subsets.
pub const DEFAULT_TABLE_CAP: usize = 16;

/// The outer measure induced by an instance, tabulated over every subset
/// of the universe.
///
/// `value(E)` is the exact infimum of `sum mu(A_j)` over finite covers
/// `E subset of union A_j` by class members; subsets with no cover get
/// `Infinite` (the infimum over an empty set of covers).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OuterMeasureTable {
    universe: Universe,
    values: Vec<MeasureValue>,
    instance_digest: u64,
}

impl OuterMeasureTable {
    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn value(&self, s: Subset) -> &MeasureValue {
        assert_eq!(s.universe_size(), self.universe.len());
        &self.values[s.bits() as usize]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // always holds 2^n >= 1 entries
    }

    /// Digest of the instance this table was computed from; zero for
    /// tables assembled directly via [`OuterMeasureTable::from_raw_values`].
    pub fn instance_digest(&self) -> u64 {
        self.instance_digest
    }

    pub fn entries(&self) -> impl Iterator<Item = (Subset, &MeasureValue)> {
        self.universe.subsets().zip(self.values.iter())
    }

    /// Assembles a table from explicit values, one per subset in ascending
    /// bit-pattern order. No outer-measure property is checked; this exists
    /// so that axiom checks can be pointed at arbitrary (including broken)
    /// tables. Panics unless `values.len() == 2^n`.
    pub fn from_raw_values(universe: Universe, values: Vec<MeasureValue>) -> Self {
        assert_eq!(
            values.len(),
            1usize << universe.len(),
            "need one value per subset"
        );
        OuterMeasureTable {
            universe,
            values,
            instance_digest: 0,
        }
    }
}

fn check_cap(universe: &Universe, cap: usize) -> Result<(), Error> {
    if universe.len() > cap {
        Err(Error::CapacityExceeded {
            atoms: universe.len(),
            cap,
        })
    } else {
        Ok(())
    }
}

/// Tabulates the induced outer measure for every subset of the universe.
///
/// This is an exact minimum-cost set-cover dynamic program: with
/// `f(empty) = 0`,
///
/// ```text
/// f(E) = min over members m with m and E nonoverlapping excluded:
///            mu(m) + f(E minus m)
/// ```
///
/// Any finite cover of `E` must contain a member meeting `E`; removing it
/// leaves a cover of the remainder, and members may overshoot `E` freely,
/// so the recurrence ranges over exactly the finite covers. Masks are
/// filled in ascending order (`E minus m` is always a smaller mask).
///
/// The premeasure is used as given; callers wanting the Caratheodory
/// guarantees must have [`validate_premeasure`] PASS first (the theorem
/// checks below gate on it).
pub fn outer_measure_table(instance: &Instance) -> Result<OuterMeasureTable, Error> {
    outer_measure_table_with_cap(instance, DEFAULT_TABLE_CAP)
}

pub fn outer_measure_table_with_cap(
    instance: &Instance,
    cap: usize,
) -> Result<OuterMeasureTable, Error> {
    let universe = instance.universe();
    check_cap(universe, cap)?;
    let n = universe.len();
    let full = (universe.full_set().bits()) as usize;

    // Nonempty members only: the empty set never meets a nonempty target,
    // and mask 0 is the base case.
    let members: Vec<(u32, &MeasureValue)> = instance
        .class()
        .members()
        .iter()
        .filter(|m| !m.is_empty())
        .map(|m| (m.bits(), instance.value_of(*m)))
        .collect();

    let mut values = Vec::with_capacity(full + 1);
    values.push(MeasureValue::zero());
    for mask in 1..=(full as u32) {
        let mut best: Option<MeasureValue> = None;
        for &(mb, mu) in &members {
            if mb & mask == 0 {
                continue;
            }
            let rest = &values[(mask & !mb) as usize];
            let candidate = rest + mu;
            if best.as_ref().is_none_or(|b| candidate < *b) {
                best = Some(candidate);
            }
        }
        values.push(best.unwrap_or(MeasureValue::Infinite));
    }

    debug_assert_eq!(values.len(), 1usize << n);
    Ok(OuterMeasureTable {
        universe: universe.clone(),
        values,
        instance_digest: instance.digest(),
    })
}

/// Rewrites a cover by class members into a pairwise-disjoint family of
/// class members with the same union, never increasing total measure.
///
/// Element `k` of the cover is replaced by a disjoint decomposition of
/// `A_k minus (A_0 or ... or A_{k-1})`, obtained by iteratively carving
/// earlier elements out of `A_k` and re-decomposing every piece that
/// shrinks. Every intermediate piece is a class member, which is exactly
/// the quasi-semi-ring closure property; if some carving step cannot be
/// decomposed the class is not a quasi-semi-ring and that witness is
/// returned as an error.
///
/// Pieces that survive untouched are kept as they are, so an already
/// pairwise-disjoint cover comes back unchanged (empty elements aside).
pub fn disjointify(cover: &[Subset], class: &SetClass) -> Result<Vec<Subset>, Error> {
    for a in cover {
        if !class.contains(*a) {
            return Err(Error::NotAClassMember { subset: *a });
        }
    }
    let mut dec = Decomposer::new(class);
    let mut result: Vec<Subset> = Vec::new();
    for (k, &ak) in cover.iter().enumerate() {
        if ak.is_empty() {
            continue;
        }
        let mut pieces = vec![ak];
        for j in (0..k).rev() {
            let aj = cover[j];
            let mut next = Vec::with_capacity(pieces.len());
            for p in pieces {
                let t = p - aj;
                if t == p {
                    next.push(p);
                } else if t.is_empty() {
                    // p lies inside an earlier element; drop it.
                } else {
                    match dec.decompose(t) {
                        Some(d) => next.extend(d.pieces(class)),
                        None => {
                            return Err(Error::NotQuasiSemiRing {
                                a: p,
                                b: aj,
                                target: t,
                            })
                        }
                    }
                }
            }
            pieces = next;
        }
        result.extend(pieces);
    }
    Ok(result)
}

/// The outer measure of `e` computed from pairwise-disjoint covers only:
/// the infimum of `sum mu(B_j)` over disjoint families of members whose
/// union contains `e`.
///
/// Restricting to disjoint covers can only raise the infimum, so the
/// unrestricted table value is an admissible lower bound; the search is a
/// branch and bound on the lowest uncovered atom, trying members in class
/// order and pruning branches whose committed cost plus bound cannot beat
/// the best disjoint cover found so far.
pub fn disjoint_outer_measure(instance: &Instance, e: Subset) -> Result<MeasureValue, Error> {
    let table = outer_measure_table(instance)?;
    Ok(disjoint_outer_measure_with_table(instance, &table, e))
}

pub fn disjoint_outer_measure_with_table(
    instance: &Instance,
    table: &OuterMeasureTable,
    e: Subset,
) -> MeasureValue {
    debug_assert_eq!(table.instance_digest(), instance.digest());
    let members: Vec<(u32, &MeasureValue)> = instance
        .class()
        .members()
        .iter()
        .filter(|m| !m.is_empty())
        .map(|m| (m.bits(), instance.value_of(*m)))
        .collect();
    let mut best = MeasureValue::Infinite;
    disjoint_dfs(
        &members,
        table,
        e.bits(),
        0,
        MeasureValue::zero(),
        &mut best,
    );
    best
}

fn disjoint_dfs(
    members: &[(u32, &MeasureValue)],
    table: &OuterMeasureTable,
    uncovered: u32,
    used: u32,
    partial: MeasureValue,
    best: &mut MeasureValue,
) {
    // Admissible bound: finishing the job costs at least the unrestricted
    // outer measure of what is still uncovered.
    let bound = &partial + &table.values[uncovered as usize];
    if bound >= *best {
        return;
    }
    if uncovered == 0 {
        *best = partial;
        return;
    }
    let atom_bit = uncovered & uncovered.wrapping_neg();
    for &(mb, mu) in members {
        if mb & atom_bit != 0 && mb & used == 0 {
            disjoint_dfs(
                members,
                table,
                uncovered & !mb,
                used | mb,
                &partial + mu,
                best,
            );
        }
    }
}

/// Report for the disjoint-cover equivalence check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DisjointCoverReport {
    /// Both outer measures agree on every subset of the universe.
    Pass {
        sets_checked: usize,
    },
    Fail {
        set: Subset,
        unrestricted: MeasureValue,
        disjoint_only: MeasureValue,
    },
    Skipped(SkipReason),
}

impl DisjointCoverReport {
    pub fn verdict(&self) -> Verdict {
        match self {
            DisjointCoverReport::Pass { .. } => Verdict::Pass,
            DisjointCoverReport::Fail { .. } => Verdict::Fail,
            DisjointCoverReport::Skipped(_) => Verdict::Skipped,
        }
    }
}

#[allow(clippy::result_large_err)] // skip reasons keep their violation payloads
pub(crate) fn theorem_gate(instance: &Instance) -> Result<(), SkipReason> {
    let structure = is_quasi_semi_ring(instance.class());
    if !structure.quasi_semi_ring {
        return Err(SkipReason::NotQuasiSemiRing(
            structure
                .failure
                .expect("failed classification carries a witness"),
        ));
    }
    match validate_premeasure(instance) {
        ValidationReport::Pass => Ok(()),
        ValidationReport::Fail(v) => Err(SkipReason::PremeasureInvalid(v)),
        ValidationReport::Inconclusive { member, node_cap } => {
            Err(SkipReason::PremeasureInconclusive { member, node_cap })
        }
    }
}

/// Checks that restricting covers to pairwise-disjoint families changes
/// no outer measure value, on every one of the `2^n` subsets. Witnesses
/// the first disagreement in ascending subset order.
pub fn verify_disjoint_cover_equivalence(
    instance: &Instance,
) -> Result<DisjointCoverReport, Error> {
    if let Err(reason) = theorem_gate(instance) {
        return Ok(DisjointCoverReport::Skipped(reason));
    }
    let table = outer_measure_table(instance)?;
    for e in instance.universe().subsets() {
        let disjoint = disjoint_outer_measure_with_table(instance, &table, e);
        let unrestricted = table.value(e);
        if disjoint != *unrestricted {
            return Ok(DisjointCoverReport::Fail {
                set: e,
                unrestricted: unrestricted.clone(),
                disjoint_only: disjoint,
            });
        }
    }
    Ok(DisjointCoverReport::Pass {
        sets_checked: table.len(),
    })
}

/// First subset `E` (ascending bit order) violating the Caratheodory
/// splitting condition for `a`:
///
/// ```text
/// mu*(E) = mu*(E and a) + mu*(E minus a)
/// ```
///
/// `None` means `a` is measurable.
pub fn splitting_witness(table: &OuterMeasureTable, a: Subset) -> Option<Subset> {
    table.universe().subsets().find(|&e| {
        let split = table.value(e & a) + table.value(e - a);
        split != *table.value(e)
    })
}

pub fn is_measurable(table: &OuterMeasureTable, a: Subset) -> bool {
    splitting_witness(table, a).is_none()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurabilityFailure {
    pub candidate: Subset,
    pub witness: Subset,
}

/// Full measurability sweep over the power set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurabilityReport {
    /// Measurable subsets in ascending bit order.
    pub measurable: Vec<Subset>,
    /// Non-measurable subsets with their first splitting witnesses.
    pub failures: Vec<MeasurabilityFailure>,
    /// Whether the measurable family contains the empty set and the full
    /// set and is closed under complement and pairwise union. True for
    /// every genuine outer measure; reported so broken tables surface.
    pub algebra: bool,
}

impl MeasurabilityReport {
    pub fn verdict(&self) -> Verdict {
        if self.failures.is_empty() && self.algebra {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// Tests every subset of the universe for measurability. Cost is
/// `O(4^n)` exact additions; candidates are checked in parallel but the
/// report order is the canonical ascending one.
pub fn enumerate_measurable(table: &OuterMeasureTable) -> MeasurabilityReport {
    let universe = table.universe();
    let candidates: Vec<Subset> = universe.subsets().collect();
    let outcomes: Vec<Option<Subset>> = candidates
        .par_iter()
        .map(|&a| splitting_witness(table, a))
        .collect();

    let mut measurable = Vec::new();
    let mut failures = Vec::new();
    for (a, outcome) in candidates.iter().zip(outcomes) {
        match outcome {
            None => measurable.push(*a),
            Some(witness) => failures.push(MeasurabilityFailure {
                candidate: *a,
                witness,
            }),
        }
    }

    let in_m = |s: Subset| measurable.binary_search(&s).is_ok();
    let mut algebra = in_m(universe.empty_set()) && in_m(universe.full_set());
    if algebra {
        'closure: for &a in &measurable {
            if !in_m(!a) {
                algebra = false;
                break;
            }
            for &b in &measurable {
                if !in_m(a | b) {
                    algebra = false;
                    break 'closure;
                }
            }
        }
    }

    MeasurabilityReport {
        measurable,
        failures,
        algebra,
    }
}

/// Outcome of the extension check: every class member must be measurable
/// for the induced outer measure and must keep its premeasure value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtensionReport {
    Pass {
        members_checked: usize,
    },
    NotMeasurable {
        member: Subset,
        witness: Subset,
    },
    ValueMismatch {
        member: Subset,
        outer: MeasureValue,
        assigned: MeasureValue,
    },
    Skipped(SkipReason),
}

impl ExtensionReport {
    pub fn verdict(&self) -> Verdict {
        match self {
            ExtensionReport::Pass { .. } => Verdict::Pass,
            ExtensionReport::NotMeasurable { .. } | ExtensionReport::ValueMismatch { .. } => {
                Verdict::Fail
            }
            ExtensionReport::Skipped(_) => Verdict::Skipped,
        }
    }
}

/// Verifies the extension property on an instance: after gating on the
/// structure and premeasure preconditions, every class member must pass
/// the splitting condition against all `2^n` test sets and the outer
/// measure must restrict to the premeasure on the class.
pub fn verify_extension_theorem(instance: &Instance) -> Result<ExtensionReport, Error> {
    if let Err(reason) = theorem_gate(instance) {
        return Ok(ExtensionReport::Skipped(reason));
    }
    let table = outer_measure_table(instance)?;
    for &member in instance.class().members() {
        if let Some(witness) = splitting_witness(&table, member) {
            return Ok(ExtensionReport::NotMeasurable { member, witness });
        }
        let outer = table.value(member);
        let assigned = instance.value_of(member);
        if outer != assigned {
            return Ok(ExtensionReport::ValueMismatch {
                member,
                outer: outer.clone(),
                assigned: assigned.clone(),
            });
        }
    }
    Ok(ExtensionReport::Pass {
        members_checked: instance.class().len(),
    })
}

/// How a table fails the outer measure axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    EmptySetNonzero {
        value: MeasureValue,
    },
    Monotonicity {
        smaller: Subset,
        larger: Subset,
        smaller_value: MeasureValue,
        larger_value: MeasureValue,
    },
    Subadditivity {
        left: Subset,
        right: Subset,
        union_value: MeasureValue,
        sum: MeasureValue,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomsReport {
    Pass { sets_checked: usize },
    Fail(AxiomViolation),
}

impl AxiomsReport {
    pub fn verdict(&self) -> Verdict {
        match self {
            AxiomsReport::Pass { .. } => Verdict::Pass,
            AxiomsReport::Fail(_) => Verdict::Fail,
        }
    }
}

/// Checks the outer measure axioms on a table by exhaustion:
/// `value(empty) = 0`, monotonicity over all `3^n` nested pairs (via
/// submask enumeration), and finite subadditivity over all `4^n` pairs.
/// Exact and exhaustive, so meant for small universes.
pub fn verify_outer_measure_axioms(table: &OuterMeasureTable) -> AxiomsReport {
    let universe = table.universe();
    let empty_value = table.value(universe.empty_set());
    if !empty_value.is_zero() {
        return AxiomsReport::Fail(AxiomViolation::EmptySetNonzero {
            value: empty_value.clone(),
        });
    }

    let full = universe.full_set().bits();
    for f_bits in 0..=full {
        let f = universe.subset_from_bits(f_bits).expect("in range");
        let f_value = table.value(f);
        // Proper submasks of f, descending.
        let mut e_bits = f_bits.wrapping_sub(1) & f_bits;
        loop {
            let e = universe.subset_from_bits(e_bits).expect("in range");
            if table.value(e) > f_value {
                return AxiomsReport::Fail(AxiomViolation::Monotonicity {
                    smaller: e,
                    larger: f,
                    smaller_value: table.value(e).clone(),
                    larger_value: f_value.clone(),
                });
            }
            if e_bits == 0 {
                break;
            }
            e_bits = e_bits.wrapping_sub(1) & f_bits;
        }
    }

    for a in universe.subsets() {
        for b in universe.subsets() {
            let sum = table.value(a) + table.value(b);
            if *table.value(a | b) > sum {
                return AxiomsReport::Fail(AxiomViolation::Subadditivity {
                    left: a,
                    right: b,
                    union_value: table.value(a | b).clone(),
                    sum,
                });
            }
        }
    }

    AxiomsReport::Pass {
        sets_checked: table.len(),
    }
}
