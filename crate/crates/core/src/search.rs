use crate::instance::Instance;
use crate::measure::{measure_sum, MeasureValue, Rational};
use crate::structure::decompose_as_disjoint_union;
use crate::universe::{Subset, Universe};
use num::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// A measure on the full power set, represented by its atom weights.
/// Finitely additive by construction (the value of a set is the sum of
/// its atoms' weights), hence also countably additive on a finite
/// universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomMeasure {
    universe: Universe,
    weights: Vec<MeasureValue>,
}

impl AtomMeasure {
    pub fn new(universe: Universe, weights: Vec<MeasureValue>) -> Self {
        assert_eq!(weights.len(), universe.len(), "one weight per atom");
        AtomMeasure { universe, weights }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn weights(&self) -> &[MeasureValue] {
        &self.weights
    }

    pub fn value(&self, s: Subset) -> MeasureValue {
        measure_sum(s.iter_atoms().map(|i| &self.weights[i]))
    }

    /// True iff this measure restricts to the instance's premeasure on
    /// every class member.
    pub fn extends(&self, instance: &Instance) -> bool {
        instance
            .class()
            .members()
            .iter()
            .all(|&m| self.value(m) == *instance.value_of(m))
    }
}

/// Two full measures that agree with the premeasure on every class member
/// yet disagree on `witness`, so the extension of the premeasure beyond
/// the generated ring is not unique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniquenessCounterexample {
    pub first: AtomMeasure,
    pub second: AtomMeasure,
    /// A singleton set on which the two measures differ. Necessarily
    /// outside the generated ring: both measures are additive and agree
    /// on the class, so they agree on every disjoint union of members.
    pub witness: Subset,
    /// Trial index that produced the hit (for reproducing with the same
    /// seed).
    pub trial: u64,
}

impl UniquenessCounterexample {
    /// Re-checks everything the counterexample claims, from scratch.
    pub fn verify(&self, instance: &Instance) -> bool {
        self.first.extends(instance)
            && self.second.extends(instance)
            && self.first.value(self.witness) != self.second.value(self.witness)
            && decompose_as_disjoint_union(self.witness, instance.class()).is_none()
    }
}

/// Searches for two distinct full-measure extensions of the premeasure.
///
/// Each trial draws random atom weights twice, with member constraints
/// enforced by propagation (a member with one undetermined atom forces
/// that atom's weight; fully determined members are checked exactly), and
/// succeeds if the two resulting extensions differ on some atom. Trials
/// are deterministic functions of `(seed, trial index)`; the sweep runs
/// in parallel but always reports the lowest-index hit, so results are
/// reproducible. Returns `None` when `budget` trials all fail, e.g. when
/// the premeasure pins every atom (extension actually unique) or when no
/// full extension exists at all.
pub fn search_uniqueness_counterexample(
    instance: &Instance,
    seed: u64,
    budget: u64,
) -> Option<UniquenessCounterexample> {
    (0..budget)
        .into_par_iter()
        .find_map_first(|trial| run_trial(instance, seed, trial))
}

fn run_trial(instance: &Instance, seed: u64, trial: u64) -> Option<UniquenessCounterexample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);

    let first = solve_random_extension(instance, &mut rng)?;
    let second = solve_random_extension(instance, &mut rng)?;
    let atom = (0..first.len()).find(|&i| first[i] != second[i])?;
    let witness = instance
        .universe()
        .singleton(atom)
        .expect("atom index from the same universe");

    let counterexample = UniquenessCounterexample {
        first: AtomMeasure::new(instance.universe().clone(), first),
        second: AtomMeasure::new(instance.universe().clone(), second),
        witness,
        trial,
    };
    // Differing extensions force the witness out of the generated ring;
    // anything else is a solver bug.
    assert!(
        counterexample.verify(instance),
        "counterexample failed re-validation"
    );
    Some(counterexample)
}

/// Draws atom weights consistent with every member constraint, or `None`
/// when the draw paints itself into an infeasible corner.
///
/// Alternates constraint propagation with random assignments: members
/// with a single undetermined atom force it (`mu(A)` minus the pinned
/// part; infinite `mu(A)` over a finite pinned part forces an infinite
/// weight), fully determined members are verified, and when nothing is
/// forced a random undetermined atom gets a random weight. A final pass
/// re-checks every member, so a returned vector is always a genuine
/// extension.
fn solve_random_extension(instance: &Instance, rng: &mut ChaCha8Rng) -> Option<Vec<MeasureValue>> {
    let n = instance.universe().len();
    let members: Vec<(Subset, &MeasureValue)> = instance
        .class()
        .members()
        .iter()
        .map(|&m| (m, instance.value_of(m)))
        .collect();
    let mut weights: Vec<Option<MeasureValue>> = vec![None; n];

    loop {
        let mut progress = false;
        for &(m, mu) in &members {
            let undetermined: Vec<usize> =
                m.iter_atoms().filter(|&i| weights[i].is_none()).collect();
            let pinned = measure_sum(m.iter_atoms().filter_map(|i| weights[i].as_ref()));
            match mu {
                MeasureValue::Finite(_) => {
                    if pinned > *mu {
                        return None;
                    }
                    if undetermined.is_empty() {
                        if pinned != *mu {
                            return None;
                        }
                    } else if undetermined.len() == 1 {
                        let forced = mu.checked_sub(&pinned)?;
                        weights[undetermined[0]] = Some(forced);
                        progress = true;
                    }
                }
                MeasureValue::Infinite => {
                    if !pinned.is_finite() {
                        continue; // already satisfied, nothing is forced
                    }
                    if undetermined.is_empty() {
                        return None;
                    }
                    if undetermined.len() == 1 {
                        weights[undetermined[0]] = Some(MeasureValue::Infinite);
                        progress = true;
                    }
                }
            }
        }
        if progress {
            continue;
        }
        let free: Vec<usize> = (0..n).filter(|&i| weights[i].is_none()).collect();
        if free.is_empty() {
            break;
        }
        let pick = free[rng.random_range(0..free.len())];
        weights[pick] = Some(random_weight(rng));
    }

    let weights: Vec<MeasureValue> = weights.into_iter().map(Option::unwrap).collect();
    for &(m, mu) in &members {
        if measure_sum(m.iter_atoms().map(|i| &weights[i])) != *mu {
            return None;
        }
    }
    Some(weights)
}

/// Small palette of weights: mostly modest nonnegative fractions, with an
/// occasional infinity so infinite-measure instances stay reachable.
fn random_weight(rng: &mut ChaCha8Rng) -> MeasureValue {
    if rng.random_ratio(1, 8) {
        MeasureValue::Infinite
    } else {
        let numer = rng.random_range(0..=9i64);
        let denom = rng.random_range(1..=4i64);
        MeasureValue::Finite(Rational::new(BigInt::from(numer), BigInt::from(denom)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{Premeasure, SetClass};
    use crate::structure::interval_semi_ring;

    fn mv(text: &str) -> MeasureValue {
        text.parse().unwrap()
    }

    /// {empty, {a}} over {a, b}: atom b is unconstrained, so extensions
    /// abound.
    fn gap_instance() -> Instance {
        let u = Universe::new(["a", "b"]).unwrap();
        let a = u.subset_from_bits(0b01).unwrap();
        let class = SetClass::new(u.clone(), vec![u.empty_set(), a]).unwrap();
        Instance::new(
            class,
            Premeasure::from_pairs([(u.empty_set(), mv("0")), (a, mv("1"))]),
        )
        .unwrap()
    }

    #[test]
    fn gap_instance_has_counterexamples() {
        let inst = gap_instance();
        let hit = search_uniqueness_counterexample(&inst, 7, 10_000).expect("should find one");
        assert_eq!(hit.witness, inst.universe().subset_from_bits(0b10).unwrap());
        assert!(hit.verify(&inst));
        // The constrained atom is pinned in both extensions.
        assert_eq!(hit.first.weights()[0], mv("1"));
        assert_eq!(hit.second.weights()[0], mv("1"));
    }

    #[test]
    fn search_is_deterministic() {
        let inst = gap_instance();
        let a = search_uniqueness_counterexample(&inst, 42, 1000);
        let b = search_uniqueness_counterexample(&inst, 42, 1000);
        assert_eq!(a, b);
        // A larger budget still reports the same lowest-index hit.
        let c = search_uniqueness_counterexample(&inst, 42, 2000);
        assert_eq!(a, c);
        let other_seed = search_uniqueness_counterexample(&inst, 43, 1000).unwrap();
        assert!(other_seed.verify(&inst));
    }

    #[test]
    fn fully_pinned_instances_yield_nothing() {
        // Counting measure on all intervals pins every atom weight.
        let class = interval_semi_ring(3).unwrap();
        let pairs: Vec<_> = class
            .members()
            .iter()
            .map(|m| (*m, MeasureValue::from_integer(m.len() as u64)))
            .collect();
        let inst = Instance::new(class, Premeasure::from_pairs(pairs)).unwrap();
        assert_eq!(search_uniqueness_counterexample(&inst, 1, 500), None);
    }

    #[test]
    fn infinite_members_propagate() {
        // mu({a}) = inf forces the weight of atom a to be infinite.
        let u = Universe::new(["a", "b"]).unwrap();
        let a = u.subset_from_bits(0b01).unwrap();
        let class = SetClass::new(u.clone(), vec![u.empty_set(), a]).unwrap();
        let inst = Instance::new(
            class,
            Premeasure::from_pairs([(u.empty_set(), mv("0")), (a, MeasureValue::Infinite)]),
        )
        .unwrap();
        let hit = search_uniqueness_counterexample(&inst, 5, 10_000).expect("b is free");
        assert_eq!(hit.first.weights()[0], MeasureValue::Infinite);
        assert!(hit.verify(&inst));
    }
}
