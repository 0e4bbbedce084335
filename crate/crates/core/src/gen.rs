use crate::error::Error;
use crate::instance::{Instance, Premeasure, SetClass};
use crate::measure::{MeasureValue, Rational};
use crate::structure::is_quasi_semi_ring;
use crate::universe::{Subset, Universe};
use num::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::str::FromStr;

/// Families of random instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceStyle {
    /// A laminar partition forest: recursively split blocks of atoms and
    /// take all blocks as members. Such classes are always semi-rings.
    SemiRing,
    /// A random partition of the atoms plus random unions of its blocks.
    /// Every member decomposes into blocks, so these are always
    /// quasi-semi-rings (usually not semi-rings).
    Venn,
    /// Uniformly random small classes filtered by the quasi-semi-ring
    /// predicate, giving structure the other styles never produce. May
    /// exhaust its attempt budget.
    Rejection,
}

impl fmt::Display for InstanceStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InstanceStyle::SemiRing => "semiring",
            InstanceStyle::Venn => "venn",
            InstanceStyle::Rejection => "rejection",
        };
        f.write_str(s)
    }
}

impl FromStr for InstanceStyle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "semiring" => Ok(InstanceStyle::SemiRing),
            "venn" => Ok(InstanceStyle::Venn),
            "rejection" => Ok(InstanceStyle::Rejection),
            other => Err(format!(
                "unknown style {other:?} (expected semiring, venn, or rejection)"
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GenOptions {
    pub seed: u64,
    pub universe_size: usize,
    pub style: InstanceStyle,
    /// Upper bound on class size (including the empty set).
    pub max_members: usize,
    /// Rejection-style attempt budget before giving up.
    pub rejection_attempts: u64,
}

impl GenOptions {
    pub fn new(seed: u64, universe_size: usize, style: InstanceStyle) -> Self {
        GenOptions {
            seed,
            universe_size,
            style,
            max_members: 20,
            rejection_attempts: 2000,
        }
    }
}

/// Generates a random instance, deterministically from the options. The
/// premeasure is built from random positive rational atom weights, so it
/// is additive (and every member has finite measure) by construction;
/// the interesting variation is in the class structure.
pub fn generate_instance(opts: &GenOptions) -> Result<Instance, Error> {
    let universe = Universe::new(atom_labels(opts.universe_size)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let class = match opts.style {
        InstanceStyle::SemiRing => laminar_class(&universe, opts.max_members, &mut rng)?,
        InstanceStyle::Venn => block_union_class(&universe, opts.max_members, &mut rng)?,
        InstanceStyle::Rejection => rejection_class(&universe, opts.rejection_attempts, &mut rng)?,
    };

    let weights: Vec<MeasureValue> = (0..universe.len())
        .map(|_| random_positive_weight(&mut rng))
        .collect();
    let premeasure = Premeasure::from_atom_weights(&class, &weights)?;
    Instance::new(class, premeasure)
}

fn atom_labels(n: usize) -> Result<Vec<String>, Error> {
    if n == 0 {
        return Err(Error::EmptyUniverse);
    }
    if n > 20 {
        return Err(Error::UniverseTooLarge { atoms: n, max: 20 });
    }
    Ok((0..n)
        .map(|i| ((b'a' + i as u8) as char).to_string())
        .collect())
}

fn random_positive_weight(rng: &mut ChaCha8Rng) -> MeasureValue {
    let numer = rng.random_range(1..=8i64);
    let denom = rng.random_range(1..=4i64);
    MeasureValue::Finite(Rational::new(BigInt::from(numer), BigInt::from(denom)))
}

/// Splits `atoms` into `k` nonempty chunks after shuffling.
fn random_blocks(atoms: &[usize], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    debug_assert!(k >= 1 && k <= atoms.len());
    let mut shuffled = atoms.to_vec();
    shuffled.shuffle(rng);
    // k - 1 distinct cut positions in 1..len.
    let mut cuts: Vec<usize> = (1..atoms.len()).collect();
    cuts.shuffle(rng);
    cuts.truncate(k - 1);
    cuts.sort_unstable();
    cuts.push(atoms.len());
    let mut blocks = Vec::with_capacity(k);
    let mut start = 0;
    for cut in cuts {
        blocks.push(shuffled[start..cut].to_vec());
        start = cut;
    }
    blocks
}

fn laminar_class(
    universe: &Universe,
    max_members: usize,
    rng: &mut ChaCha8Rng,
) -> Result<SetClass, Error> {
    let atoms: Vec<usize> = (0..universe.len()).collect();
    let mut node_atom_sets: Vec<Vec<usize>> = Vec::new();

    // Top level: partition the universe into 1..=3 blocks (one block
    // means the full set itself is a member), then recursively split.
    let k_top = rng.random_range(1..=3.min(atoms.len()));
    let mut queue: Vec<Vec<usize>> = random_blocks(&atoms, k_top, rng);
    while let Some(node) = queue.pop() {
        node_atom_sets.push(node.clone());
        // Reserve one slot for the empty set.
        let room = max_members.saturating_sub(1 + node_atom_sets.len() + queue.len());
        if node.len() >= 2 && room >= 2 && rng.random_ratio(4, 5) {
            let k = rng.random_range(2..=3.min(node.len()).min(room));
            queue.extend(random_blocks(&node, k, rng));
        }
    }

    let mut members = vec![universe.empty_set()];
    for node in node_atom_sets {
        members.push(universe.subset_from_indices(&node)?);
    }
    // Laminar nodes are distinct by construction: each split produces at
    // least two proper sub-blocks.
    SetClass::new(universe.clone(), members)
}

fn block_union_class(
    universe: &Universe,
    max_members: usize,
    rng: &mut ChaCha8Rng,
) -> Result<SetClass, Error> {
    let atoms: Vec<usize> = (0..universe.len()).collect();
    let k = rng.random_range(1..=5.min(atoms.len()));
    let blocks: Vec<Subset> = random_blocks(&atoms, k, rng)
        .iter()
        .map(|b| universe.subset_from_indices(b))
        .collect::<Result<_, _>>()?;

    let mut members = vec![universe.empty_set()];
    members.extend(blocks.iter().copied());

    let extra = rng.random_range(0..=max_members.saturating_sub(members.len()).min(8));
    for _ in 0..extra {
        let selector = rng.random_range(1..(1u32 << k));
        let mut union = universe.empty_set();
        for (i, &b) in blocks.iter().enumerate() {
            if selector & (1 << i) != 0 {
                union = union | b;
            }
        }
        if !members.contains(&union) {
            members.push(union);
        }
    }
    SetClass::new(universe.clone(), members)
}

fn rejection_class(
    universe: &Universe,
    attempts: u64,
    rng: &mut ChaCha8Rng,
) -> Result<SetClass, Error> {
    let full = universe.full_set().bits();
    for _ in 0..attempts {
        let wanted = (rng.random_range(1..=4u32) as usize).min(full as usize);
        let mut members = vec![universe.empty_set()];
        while members.len() < 1 + wanted {
            let s = universe.subset_from_bits(rng.random_range(1..=full))?;
            if !members.contains(&s) {
                members.push(s);
            }
        }
        let class = SetClass::new(universe.clone(), members)?;
        if is_quasi_semi_ring(&class).quasi_semi_ring {
            return Ok(class);
        }
    }
    Err(Error::RejectionBudgetExhausted { attempts })
}
