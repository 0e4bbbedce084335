use crate::error::Error;
use crate::instance::SetClass;
use crate::report::Verdict;
use crate::universe::{Subset, Universe};
use std::collections::HashMap;
use std::fmt;

/// A witnessed disjoint decomposition: `target` equals the disjoint union
/// of the class members at `piece_indices`. Pieces are nonempty and the
/// empty target decomposes into no pieces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    target: Subset,
    piece_indices: Vec<usize>,
}

impl Decomposition {
    pub fn target(&self) -> Subset {
        self.target
    }

    pub fn piece_indices(&self) -> &[usize] {
        &self.piece_indices
    }

    pub fn pieces(&self, class: &SetClass) -> Vec<Subset> {
        self.piece_indices
            .iter()
            .map(|&i| class.members()[i])
            .collect()
    }
}

/// Memoized search for disjoint decompositions of targets into members of
/// one class. Reuse one `Decomposer` across many targets; results for
/// intermediate remainders are shared.
///
/// The search branches on the lowest uncovered atom and tries candidate
/// members in class order, so for a fixed class ordering the decomposition
/// found is deterministic. Completeness: any cover of the lowest atom must
/// use some member containing it, so the branching loses no solutions.
pub struct Decomposer<'a> {
    class: &'a SetClass,
    memo: HashMap<u32, Option<Vec<usize>>>,
}

impl<'a> Decomposer<'a> {
    pub fn new(class: &'a SetClass) -> Self {
        Decomposer {
            class,
            memo: HashMap::new(),
        }
    }

    pub fn class(&self) -> &'a SetClass {
        self.class
    }

    pub fn decompose(&mut self, target: Subset) -> Option<Decomposition> {
        assert_eq!(
            target.universe_size(),
            self.class.universe().len(),
            "target from a different universe"
        );
        self.solve(target.bits())
            .map(|piece_indices| Decomposition {
                target,
                piece_indices,
            })
    }

    fn solve(&mut self, bits: u32) -> Option<Vec<usize>> {
        if bits == 0 {
            return Some(Vec::new());
        }
        if let Some(hit) = self.memo.get(&bits) {
            return hit.clone();
        }
        let atom_bit = bits & bits.wrapping_neg();
        let mut result = None;
        for (i, &m) in self.class.members().iter().enumerate() {
            let mb = m.bits();
            if mb & atom_bit != 0 && mb & !bits == 0 {
                if let Some(rest) = self.solve(bits & !mb) {
                    let mut pieces = Vec::with_capacity(rest.len() + 1);
                    pieces.push(i);
                    pieces.extend(rest);
                    result = Some(pieces);
                    break;
                }
            }
        }
        self.memo.insert(bits, result.clone());
        result
    }
}

/// One-shot decomposition of `target` into pairwise-disjoint members of
/// `class`, or `None` when no such decomposition exists.
pub fn decompose_as_disjoint_union(target: Subset, class: &SetClass) -> Option<Decomposition> {
    Decomposer::new(class).decompose(target)
}

/// Why a class misses the quasi-semi-ring property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructureFailure {
    MissingEmptySet,
    /// For members `a`, `b`, either `a and b` or `a minus b` (recorded as
    /// `target`) has no disjoint decomposition into members.
    Undecomposable {
        a: Subset,
        b: Subset,
        target: Subset,
    },
}

impl fmt::Display for StructureFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureFailure::MissingEmptySet => write!(f, "the empty set is not a member"),
            StructureFailure::Undecomposable { a, b, target } => write!(
                f,
                "{target} (from the member pair {a}, {b}) has no disjoint decomposition"
            ),
        }
    }
}

/// Strongest structure level a class satisfies. The levels are nested:
/// every algebra is a ring, every ring a semi-ring, every semi-ring a
/// quasi-semi-ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum StructureLevel {
    None,
    QuasiSemiRing,
    SemiRing,
    Ring,
    Algebra,
}

impl fmt::Display for StructureLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StructureLevel::None => "NONE",
            StructureLevel::QuasiSemiRing => "QUASI_SEMI_RING",
            StructureLevel::SemiRing => "SEMI_RING",
            StructureLevel::Ring => "RING",
            StructureLevel::Algebra => "ALGEBRA",
        };
        f.write_str(s)
    }
}

/// Full structure classification of a class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub quasi_semi_ring: bool,
    pub semi_ring: bool,
    pub ring: bool,
    pub algebra: bool,
    /// First quasi-semi-ring failure in deterministic pair order, if any.
    pub failure: Option<StructureFailure>,
}

impl StructureReport {
    pub fn level(&self) -> StructureLevel {
        if self.algebra {
            StructureLevel::Algebra
        } else if self.ring {
            StructureLevel::Ring
        } else if self.semi_ring {
            StructureLevel::SemiRing
        } else if self.quasi_semi_ring {
            StructureLevel::QuasiSemiRing
        } else {
            StructureLevel::None
        }
    }

    /// PASS means quasi-semi-ring; the stronger flags are informational.
    pub fn verdict(&self) -> Verdict {
        if self.quasi_semi_ring {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// Classifies a class: quasi-semi-ring (both `a and b` and `a minus b`
/// decompose into disjoint members, for every member pair), plus the
/// stronger semi-ring / ring / algebra flags.
///
/// The quasi-semi-ring witness scans pairs in class order, checking the
/// intersection before the difference, and reports the first failure.
pub fn is_quasi_semi_ring(class: &SetClass) -> StructureReport {
    if !class.has_empty_set() {
        return StructureReport {
            quasi_semi_ring: false,
            semi_ring: false,
            ring: false,
            algebra: false,
            failure: Some(StructureFailure::MissingEmptySet),
        };
    }

    let mut failure = None;
    let mut dec = Decomposer::new(class);
    'scan: for &a in class.members() {
        for &b in class.members() {
            for target in [a & b, a - b] {
                if dec.decompose(target).is_none() {
                    failure = Some(StructureFailure::Undecomposable { a, b, target });
                    break 'scan;
                }
            }
        }
    }

    let quasi_semi_ring = failure.is_none();
    let semi_ring = quasi_semi_ring && is_semi_ring(class);
    let ring = semi_ring && is_ring(class);
    let algebra = ring && class.contains(class.universe().full_set());
    StructureReport {
        quasi_semi_ring,
        semi_ring,
        ring,
        algebra,
        failure,
    }
}

/// True iff the class contains the empty set, every pairwise intersection
/// is itself a member, and every difference of members decomposes as a
/// finite disjoint union of members.
pub fn is_semi_ring(class: &SetClass) -> bool {
    if !class.has_empty_set() {
        return false;
    }
    let mut dec = Decomposer::new(class);
    for &a in class.members() {
        for &b in class.members() {
            if !class.contains(a & b) || dec.decompose(a - b).is_none() {
                return false;
            }
        }
    }
    true
}

/// True iff the class is nonempty, contains the empty set, and is closed
/// under pairwise union and difference. Closure under intersection then
/// follows (`a and b = a minus (a minus b)`) and is asserted.
pub fn is_ring(class: &SetClass) -> bool {
    if class.is_empty() || !class.has_empty_set() {
        return false;
    }
    for &a in class.members() {
        for &b in class.members() {
            if !class.contains(a | b) || !class.contains(a - b) {
                return false;
            }
        }
    }
    for &a in class.members() {
        for &b in class.members() {
            assert!(
                class.contains(a & b),
                "union/difference closure must imply intersection closure"
            );
        }
    }
    true
}

/// The triple-intersection class: two overlapping sets `A`, `B` plus the
/// six cells that `A`, `B`, and a third set `C` carve out of `A or B`,
/// and the empty set. Atoms are the eight cells of the three-set Venn
/// diagram, labelled by membership (capital letter = inside).
///
/// This class is a quasi-semi-ring but not a semi-ring: `A and B` is not
/// a member, yet splits into the two cells `{ABC}`, `{ABc}`.
pub fn venn_triple_class() -> SetClass {
    build_venn_class(0xff).expect("the full cell set is always valid")
}

/// [`venn_triple_class`] restricted to the Venn cells whose bit is set in
/// `cells` (bit order matches the canonical cell order). Member sets are
/// intersected with the surviving cells and deduplicated, so degenerate
/// configurations (collapsed or newly equal members) are representable.
pub fn venn_triple_class_with_cells(cells: u8) -> Result<SetClass, Error> {
    build_venn_class(cells)
}

const VENN_CELLS: [&str; 8] = ["ABC", "ABc", "AbC", "Abc", "aBC", "aBc", "abC", "abc"];

fn build_venn_class(cells: u8) -> Result<SetClass, Error> {
    let alive: Vec<usize> = (0..8).filter(|&i| cells & (1 << i) != 0).collect();
    if alive.is_empty() {
        return Err(Error::EmptyUniverse);
    }
    let universe = Universe::new(alive.iter().map(|&i| VENN_CELLS[i]))?;

    // Members in their defining order: empty set, A, B, then the six
    // cells of A and B split by C.
    let member_cells: [&[usize]; 9] = [
        &[],
        &[0, 1, 2, 3], // A
        &[0, 1, 4, 5], // B
        &[0],          // A and B and C
        &[1],          // A and B, outside C
        &[2],          // A and C, outside B
        &[3],          // A, outside B and C
        &[4],          // B and C, outside A
        &[5],          // B, outside A and C
    ];

    let mut members = Vec::new();
    for cell_list in member_cells {
        let indices: Vec<usize> = cell_list
            .iter()
            .filter_map(|c| alive.iter().position(|a| a == c))
            .collect();
        let subset = universe.subset_from_indices(&indices)?;
        if !members.contains(&subset) {
            members.push(subset);
        }
    }
    SetClass::new(universe, members)
}

/// The class of "discrete intervals" `{i, i+1, ..., j}` over `n` ordered
/// atoms, plus the empty set. Always a semi-ring: intersections of
/// intervals are intervals, and a difference of intervals is a disjoint
/// union of at most two intervals.
pub fn interval_semi_ring(n: usize) -> Result<SetClass, Error> {
    let universe = Universe::new((1..=n).map(|i| i.to_string()))?;
    let mut members = vec![universe.empty_set()];
    for i in 0..n {
        for j in i..n {
            let bits = (((1u64 << (j + 1)) - 1) as u32) & !(((1u64 << i) - 1) as u32);
            members.push(universe.subset_from_bits(bits)?);
        }
    }
    SetClass::new(universe, members)
}
