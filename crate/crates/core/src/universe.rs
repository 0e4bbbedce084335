use crate::error::Error;
use std::collections::HashSet;
use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};

/// Hard ceiling on universe size, fixed by the `u32` bitmask representation.
pub const MAX_ATOMS: usize = 32;

/// Default ceiling. Operations that walk all `2^n` subsets apply their own,
/// smaller cap (see [`crate::extension::DEFAULT_TABLE_CAP`]).
pub const DEFAULT_MAX_ATOMS: usize = 20;

/// A finite universe of named atoms.
///
/// Atom order is the order labels were given in; it fixes the bit layout of
/// every [`Subset`] and therefore the canonical subset order. Labels must be
/// nonempty, unique, and comma-free (commas separate labels in canonical
/// subset keys).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    atoms: Vec<String>,
}

impl Universe {
    pub fn new<I, S>(labels: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::with_max(labels, DEFAULT_MAX_ATOMS)
    }

    /// Like [`Universe::new`] with a caller-chosen atom limit. The limit is
    /// still clamped to [`MAX_ATOMS`].
    pub fn with_max<I, S>(labels: I, max: usize) -> Result<Self, Error>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let atoms: Vec<String> = labels.into_iter().map(Into::into).collect();
        if atoms.is_empty() {
            return Err(Error::EmptyUniverse);
        }
        let max = max.min(MAX_ATOMS);
        if atoms.len() > max {
            return Err(Error::UniverseTooLarge {
                atoms: atoms.len(),
                max,
            });
        }
        let mut seen = HashSet::new();
        for label in &atoms {
            if label.is_empty() {
                return Err(Error::BadAtomLabel {
                    label: label.clone(),
                    reason: "empty label",
                });
            }
            if label.contains(',') {
                return Err(Error::BadAtomLabel {
                    label: label.clone(),
                    reason: "commas are reserved as the key separator",
                });
            }
            if !seen.insert(label.clone()) {
                return Err(Error::DuplicateAtomLabel {
                    label: label.clone(),
                });
            }
        }
        Ok(Universe { atoms })
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction requires at least one atom
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn atom_index(&self, label: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == label)
    }

    pub fn empty_set(&self) -> Subset {
        Subset {
            size: self.atoms.len() as u8,
            bits: 0,
        }
    }

    pub fn full_set(&self) -> Subset {
        let n = self.atoms.len();
        Subset {
            size: n as u8,
            bits: mask_of(n),
        }
    }

    pub fn singleton(&self, index: usize) -> Result<Subset, Error> {
        self.subset_from_indices(&[index])
    }

    pub fn subset_from_indices(&self, indices: &[usize]) -> Result<Subset, Error> {
        let n = self.atoms.len();
        let mut bits = 0u32;
        for &i in indices {
            if i >= n {
                return Err(Error::AtomIndexOutOfRange { index: i, atoms: n });
            }
            bits |= 1 << i;
        }
        Ok(Subset {
            size: n as u8,
            bits,
        })
    }

    pub fn subset_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Subset, Error> {
        let mut bits = 0u32;
        for label in labels {
            let label = label.as_ref();
            let i = self
                .atom_index(label)
                .ok_or_else(|| Error::UnknownAtomLabel {
                    label: label.to_owned(),
                })?;
            bits |= 1 << i;
        }
        Ok(Subset {
            size: self.atoms.len() as u8,
            bits,
        })
    }

    pub fn subset_from_bits(&self, bits: u32) -> Result<Subset, Error> {
        let n = self.atoms.len();
        if bits & !mask_of(n) != 0 {
            return Err(Error::BitsOutOfRange { bits, atoms: n });
        }
        Ok(Subset {
            size: n as u8,
            bits,
        })
    }

    /// All `2^n` subsets in canonical (ascending bit pattern) order.
    pub fn subsets(&self) -> impl Iterator<Item = Subset> + '_ {
        let n = self.atoms.len();
        (0..=mask_of(n)).map(move |bits| Subset {
            size: n as u8,
            bits,
        })
    }

    /// Canonical textual key: member labels sorted lexicographically and
    /// joined with commas. The empty set has the empty key.
    pub fn subset_key(&self, s: Subset) -> String {
        debug_assert_eq!(s.size as usize, self.atoms.len());
        let mut labels: Vec<&str> = s.iter_atoms().map(|i| self.atoms[i].as_str()).collect();
        labels.sort_unstable();
        labels.join(",")
    }

    /// Human-facing rendering with labels in atom order, e.g. `{a,c}`.
    pub fn format_subset(&self, s: Subset) -> String {
        debug_assert_eq!(s.size as usize, self.atoms.len());
        let labels: Vec<&str> = s.iter_atoms().map(|i| self.atoms[i].as_str()).collect();
        format!("{{{}}}", labels.join(","))
    }
}

/// A subset of a universe, stored as a bitmask.
///
/// `Subset` is `Copy` and remembers only the universe *size*, not the
/// universe itself; mixing subsets of different-sized universes in the set
/// operations below is a caller bug and panics. The derived order (size,
/// then bit pattern) is the canonical order used whenever a "first"
/// witness is promised: within one universe it is ascending numeric order
/// of bit patterns.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    size: u8,
    bits: u32,
}

fn mask_of(n: usize) -> u32 {
    debug_assert!(n <= MAX_ATOMS);
    if n == MAX_ATOMS {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

impl Subset {
    pub fn bits(self) -> u32 {
        self.bits
    }

    /// Size of the ambient universe, not of the subset.
    pub fn universe_size(self) -> usize {
        self.size as usize
    }

    /// Number of atoms in the subset.
    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn is_full(self) -> bool {
        self.bits == mask_of(self.size as usize)
    }

    pub fn contains_atom(self, index: usize) -> bool {
        index < self.size as usize && self.bits & (1 << index) != 0
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        assert_eq!(self.size, other.size, "subsets from different universes");
        self.bits & !other.bits == 0
    }

    pub fn is_disjoint(self, other: Subset) -> bool {
        assert_eq!(self.size, other.size, "subsets from different universes");
        self.bits & other.bits == 0
    }

    /// Lowest atom index, if any. Drives every deterministic search below:
    /// branching always splits on the lowest uncovered atom.
    pub fn first_atom(self) -> Option<usize> {
        if self.bits == 0 {
            None
        } else {
            Some(self.bits.trailing_zeros() as usize)
        }
    }

    pub fn iter_atoms(self) -> impl Iterator<Item = usize> {
        let bits = self.bits;
        (0..self.size as usize).filter(move |i| bits & (1 << i) != 0)
    }
}

impl BitAnd for Subset {
    type Output = Subset;
    fn bitand(self, rhs: Subset) -> Subset {
        assert_eq!(self.size, rhs.size, "subsets from different universes");
        Subset {
            size: self.size,
            bits: self.bits & rhs.bits,
        }
    }
}

impl BitOr for Subset {
    type Output = Subset;
    fn bitor(self, rhs: Subset) -> Subset {
        assert_eq!(self.size, rhs.size, "subsets from different universes");
        Subset {
            size: self.size,
            bits: self.bits | rhs.bits,
        }
    }
}

/// Set difference, `self` minus `rhs`.
impl Sub for Subset {
    type Output = Subset;
    fn sub(self, rhs: Subset) -> Subset {
        assert_eq!(self.size, rhs.size, "subsets from different universes");
        Subset {
            size: self.size,
            bits: self.bits & !rhs.bits,
        }
    }
}

impl Not for Subset {
    type Output = Subset;
    fn not(self) -> Subset {
        Subset {
            size: self.size,
            bits: !self.bits & mask_of(self.size as usize),
        }
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for i in self.iter_atoms() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
            first = false;
        }
        write!(f, "}}")
    }
}
