use crate::error::Error;
use crate::measure::{measure_sum, MeasureValue};
use crate::report::Verdict;
use crate::universe::{Subset, Universe};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// A finite class of subsets over one universe, in a fixed member order.
///
/// Member order is semantically irrelevant but operationally meaningful:
/// every deterministic search tries members in class order, so witnesses
/// and decompositions are reproducible for a given ordering. Duplicates
/// are rejected; the empty set is allowed but not required here (the
/// structure predicates demand it, construction does not).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetClass {
    universe: Universe,
    members: Vec<Subset>,
    index: HashMap<u32, usize>,
}

impl SetClass {
    pub fn new(universe: Universe, members: Vec<Subset>) -> Result<Self, Error> {
        let n = universe.len();
        let mut index = HashMap::with_capacity(members.len());
        for (i, m) in members.iter().enumerate() {
            if m.universe_size() != n {
                return Err(Error::UniverseMismatch {
                    left: m.universe_size(),
                    right: n,
                });
            }
            if index.insert(m.bits(), i).is_some() {
                return Err(Error::DuplicateMember { member: *m });
            }
        }
        Ok(SetClass {
            universe,
            members,
            index,
        })
    }

    /// Convenience constructor from atom-label lists.
    pub fn from_labels<S: AsRef<str>>(
        universe: Universe,
        members: &[Vec<S>],
    ) -> Result<Self, Error> {
        let subsets = members
            .iter()
            .map(|labels| universe.subset_from_labels(labels))
            .collect::<Result<Vec<_>, _>>()?;
        SetClass::new(universe, subsets)
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

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
        debug_assert_eq!(s.universe_size(), self.universe.len());
        self.index.contains_key(&s.bits())
    }

    pub fn member_index(&self, s: Subset) -> Option<usize> {
        self.index.get(&s.bits()).copied()
    }

    pub fn has_empty_set(&self) -> bool {
        self.index.contains_key(&0)
    }
}

/// A measure assignment on the members of some class.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Premeasure {
    values: BTreeMap<Subset, MeasureValue>,
}

impl Premeasure {
    pub fn new(values: BTreeMap<Subset, MeasureValue>) -> Self {
        Premeasure { values }
    }

    pub fn from_pairs<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (Subset, MeasureValue)>,
    {
        Premeasure {
            values: pairs.into_iter().collect(),
        }
    }

    /// Builds the additive premeasure induced by per-atom weights:
    /// `mu(A) = sum of weights of the atoms of A`. Such premeasures are
    /// additive by construction.
    pub fn from_atom_weights(class: &SetClass, weights: &[MeasureValue]) -> Result<Self, Error> {
        let n = class.universe().len();
        if weights.len() != n {
            return Err(Error::UniverseMismatch {
                left: weights.len(),
                right: n,
            });
        }
        let values = class
            .members()
            .iter()
            .map(|m| (*m, measure_sum(m.iter_atoms().map(|i| &weights[i]))))
            .collect();
        Ok(Premeasure { values })
    }

    pub fn value(&self, s: Subset) -> Option<&MeasureValue> {
        self.values.get(&s)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Subset, &MeasureValue)> {
        self.values.iter().map(|(s, v)| (*s, v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A set class plus a premeasure covering exactly its members.
///
/// Construction checks only domain shape: the class contains the empty
/// set and the premeasure assigns exactly one value per member. It does
/// not check `mu(empty) = 0` or additivity; that is the job of
/// [`validate_premeasure`], which must be able to report such failures
/// rather than refuse to construct them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    class: SetClass,
    premeasure: Premeasure,
}

impl Instance {
    pub fn new(class: SetClass, premeasure: Premeasure) -> Result<Self, Error> {
        if !class.has_empty_set() {
            return Err(Error::MissingEmptySet);
        }
        for m in class.members() {
            if premeasure.value(*m).is_none() {
                return Err(Error::MissingMeasureValue { member: *m });
            }
        }
        for (s, _) in premeasure.iter() {
            if !class.contains(s) {
                return Err(Error::ExtraMeasureValue { subset: s });
            }
        }
        Ok(Instance { class, premeasure })
    }

    pub fn universe(&self) -> &Universe {
        self.class.universe()
    }

    pub fn class(&self) -> &SetClass {
        &self.class
    }

    pub fn premeasure(&self) -> &Premeasure {
        &self.premeasure
    }

    /// Measure of a class member. Panics on non-members; construction
    /// guarantees every member has a value.
    pub fn value_of(&self, member: Subset) -> &MeasureValue {
        self.premeasure
            .value(member)
            .expect("premeasure covers every class member")
    }

    /// FNV-1a digest of the full instance content (atom labels, member
    /// bit patterns, measure values). Stable across runs; used to tie
    /// derived tables back to the instance they were built from.
    pub fn digest(&self) -> u64 {
        let mut h = Fnv::new();
        for label in self.universe().atoms() {
            h.write(label.as_bytes());
            h.write(b";");
        }
        for m in self.class.members() {
            h.write(&m.bits().to_le_bytes());
            h.write(self.value_of(*m).to_string().as_bytes());
        }
        h.finish()
    }
}

struct Fnv(u64);

impl Fnv {
    fn new() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    fn finish(&self) -> u64 {
        self.0
    }
}

/// True iff `pieces` are pairwise disjoint with union exactly `target`.
/// Empty pieces never break disjointness, so `([], empty)` is true.
pub fn is_partition(pieces: &[Subset], target: Subset) -> Result<bool, Error> {
    let n = target.universe_size();
    let mut acc = 0u32;
    for p in pieces {
        if p.universe_size() != n {
            return Err(Error::UniverseMismatch {
                left: p.universe_size(),
                right: n,
            });
        }
        if p.bits() & acc != 0 {
            return Ok(false);
        }
        acc |= p.bits();
    }
    Ok(acc == target.bits())
}

/// Per-member node budget for partition enumeration in
/// [`validate_premeasure`]; hitting it yields `Inconclusive`.
pub const DEFAULT_PARTITION_NODE_CAP: u64 = 1_000_000;

/// How a premeasure fails finite additivity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PremeasureViolation {
    EmptySetNonzero {
        value: MeasureValue,
    },
    /// A member splits into class members whose measures sum to something
    /// other than the member's assigned value.
    Additivity {
        member: Subset,
        partition: Vec<Subset>,
        partition_sum: MeasureValue,
        assigned: MeasureValue,
    },
}

impl fmt::Display for PremeasureViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PremeasureViolation::EmptySetNonzero { value } => {
                write!(f, "mu(empty set) = {value}, expected 0")
            }
            PremeasureViolation::Additivity {
                member,
                partition,
                partition_sum,
                assigned,
            } => {
                write!(
                    f,
                    "member {member} partitions into {partition:?} with measure sum {partition_sum}, but is assigned {assigned}"
                )
            }
        }
    }
}

/// Outcome of premeasure validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationReport {
    Pass,
    Fail(PremeasureViolation),
    /// Partition enumeration for `member` exceeded `node_cap` search
    /// nodes; additivity was neither confirmed nor refuted.
    Inconclusive {
        member: Subset,
        node_cap: u64,
    },
}

impl ValidationReport {
    pub fn verdict(&self) -> Verdict {
        match self {
            ValidationReport::Pass => Verdict::Pass,
            ValidationReport::Fail(_) => Verdict::Fail,
            ValidationReport::Inconclusive { .. } => Verdict::Inconclusive,
        }
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, ValidationReport::Pass)
    }
}

/// Checks `mu(empty) = 0` and finite additivity: for every member `T` and
/// every way of partitioning `T` into class members, the measures of the
/// pieces must sum exactly to `mu(T)`.
///
/// Partitions are enumerated by a first-atom search (branch on the lowest
/// uncovered atom, candidates in class order), so the reported witness is
/// the first violating partition in that deterministic order.
pub fn validate_premeasure(instance: &Instance) -> ValidationReport {
    validate_premeasure_with_cap(instance, DEFAULT_PARTITION_NODE_CAP)
}

pub fn validate_premeasure_with_cap(instance: &Instance, node_cap: u64) -> ValidationReport {
    let class = instance.class();
    let empty = class.universe().empty_set();
    let assigned_empty = instance.value_of(empty);
    if !assigned_empty.is_zero() {
        return ValidationReport::Fail(PremeasureViolation::EmptySetNonzero {
            value: assigned_empty.clone(),
        });
    }

    for &member in class.members() {
        let assigned = instance.value_of(member);
        let mut violation = None;
        let mut stack = Vec::new();
        let mut nodes = 0u64;
        let completed = walk_partitions(
            class,
            member,
            &mut stack,
            &mut nodes,
            node_cap,
            &mut |piece_indices| {
                let pieces: Vec<Subset> =
                    piece_indices.iter().map(|&i| class.members()[i]).collect();
                let sum = measure_sum(pieces.iter().map(|p| instance.value_of(*p)));
                if sum != *assigned {
                    violation = Some(PremeasureViolation::Additivity {
                        member,
                        partition: pieces,
                        partition_sum: sum,
                        assigned: assigned.clone(),
                    });
                    false
                } else {
                    true
                }
            },
        );
        match completed {
            None => return ValidationReport::Inconclusive { member, node_cap },
            Some(_) => {
                if let Some(v) = violation {
                    return ValidationReport::Fail(v);
                }
            }
        }
    }
    ValidationReport::Pass
}

/// Enumerates partitions of `remaining` into nonempty class members.
/// Returns `None` on cap exhaustion, `Some(false)` if the visitor stopped
/// the walk, `Some(true)` if the subtree was exhausted.
fn walk_partitions(
    class: &SetClass,
    remaining: Subset,
    stack: &mut Vec<usize>,
    nodes: &mut u64,
    cap: u64,
    visit: &mut impl FnMut(&[usize]) -> bool,
) -> Option<bool> {
    *nodes += 1;
    if *nodes > cap {
        return None;
    }
    let Some(atom) = remaining.first_atom() else {
        return Some(visit(stack));
    };
    for (i, &m) in class.members().iter().enumerate() {
        if !m.is_empty() && m.contains_atom(atom) && m.is_subset_of(remaining) {
            stack.push(i);
            let sub = walk_partitions(class, remaining - m, stack, nodes, cap, visit);
            stack.pop();
            match sub {
                Some(true) => {}
                other => return other,
            }
        }
    }
    Some(true)
}
