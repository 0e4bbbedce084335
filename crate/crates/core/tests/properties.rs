//! Randomized cross-checks: algebraic laws of the basic types, stability
//! of the structure classification, and agreement between the fast
//! algorithms and the brute-force oracles in `common`.

mod common;

use common::{naive_decomposition_exists, naive_outer_measures};
use num::{BigInt, Zero};
use proptest::prelude::*;
use qsr_core::gen::{generate_instance, GenOptions, InstanceStyle};
use qsr_core::geom::{arc_difference, arc_intersect, rect_difference, rect_intersect, Arc, Rect};
use qsr_core::{
    decompose_as_disjoint_union, disjointify, enumerate_measurable, is_partition,
    is_quasi_semi_ring, is_ring, is_semi_ring, measure_sum, outer_measure_table,
    verify_outer_measure_axioms, Instance, MeasureValue, Premeasure, Rational, SetClass, Subset,
    Universe, Verdict,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_universe(n: usize) -> Universe {
    let labels: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    Universe::new(labels).unwrap()
}

/// A class of random subsets, no structure imposed beyond containing the
/// empty set.
fn random_class(u: &Universe, max_extra: usize, rng: &mut ChaCha8Rng) -> SetClass {
    let full = (1u32 << u.len()) - 1;
    let mut seen = std::collections::BTreeSet::from([0u32]);
    let mut members = vec![u.empty_set()];
    for _ in 0..rng.random_range(0..=max_extra) {
        let bits = rng.random_range(0..=full);
        if seen.insert(bits) {
            members.push(u.subset_from_bits(bits).unwrap());
        }
    }
    SetClass::new(u.clone(), members).unwrap()
}

fn random_weights(u: &Universe, rng: &mut ChaCha8Rng) -> Vec<MeasureValue> {
    (0..u.len())
        .map(|_| {
            if rng.random_ratio(1, 10) {
                MeasureValue::Infinite
            } else {
                let numer = rng.random_range(0..=9i64);
                let denom = rng.random_range(1..=4i64);
                MeasureValue::Finite(Rational::new(BigInt::from(numer), BigInt::from(denom)))
            }
        })
        .collect()
}

fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

proptest! {
    #[test]
    fn subset_operations_agree_with_bit_arithmetic(
        n in 1usize..=8,
        a_bits in any::<u32>(),
        b_bits in any::<u32>(),
    ) {
        let u = small_universe(n);
        let mask = (1u32 << n) - 1;
        let a = u.subset_from_bits(a_bits & mask).unwrap();
        let b = u.subset_from_bits(b_bits & mask).unwrap();

        // Intersection and difference split a in two.
        prop_assert!((a & b).is_disjoint(a - b));
        prop_assert_eq!((a & b) | (a - b), a);
        // De Morgan, double complement, difference as intersection.
        prop_assert_eq!(!(!a), a);
        prop_assert_eq!(!(a | b), !a & !b);
        prop_assert_eq!(a - b, a & !b);
        // Containment matches union absorption.
        prop_assert_eq!(a.is_subset_of(b), (a | b) == b);
        prop_assert_eq!(a.len() + b.len(), (a | b).len() + (a & b).len());
    }

    #[test]
    fn fraction_text_round_trips(numer in 0u64..=1_000_000, denom in 1u64..=1_000_000) {
        let parsed: MeasureValue = format!("{numer}/{denom}").parse().unwrap();
        let text = parsed.to_string();
        let back: MeasureValue = text.parse().unwrap();
        prop_assert_eq!(&parsed, &back);
        // Canonical text never spells a denominator of one.
        prop_assert!(!text.ends_with("/1"));
    }

    #[test]
    fn measure_sum_ignores_order(
        entries in prop::collection::vec((0i64..=40, 1i64..=9, prop::bool::ANY), 0..8),
    ) {
        let values: Vec<MeasureValue> = entries
            .iter()
            .map(|&(n, d, inf)| {
                if inf {
                    MeasureValue::Infinite
                } else {
                    MeasureValue::Finite(rational(n, d))
                }
            })
            .collect();
        let forward = measure_sum(&values);
        let backward = measure_sum(values.iter().rev());
        prop_assert_eq!(&forward, &backward);
        if entries.iter().any(|&(_, _, inf)| inf) {
            prop_assert_eq!(&forward, &MeasureValue::Infinite);
        } else {
            prop_assert!(matches!(forward, MeasureValue::Finite(_)));
        }
    }
}

#[test]
fn structure_levels_are_nested() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut qsr_seen = 0;
    for round in 0..250 {
        let u = small_universe(rng.random_range(1..=5));
        let class = random_class(&u, 8, &mut rng);
        let report = is_quasi_semi_ring(&class);

        assert_eq!(report.semi_ring, is_semi_ring(&class), "round {round}");
        assert_eq!(report.ring, is_ring(&class), "round {round}");
        if report.algebra {
            assert!(report.ring);
        }
        if report.ring {
            assert!(report.semi_ring);
        }
        if report.semi_ring {
            assert!(report.quasi_semi_ring);
        }
        assert_eq!(report.quasi_semi_ring, report.failure.is_none());
        if report.quasi_semi_ring {
            qsr_seen += 1;
        }
    }
    // The sample must exercise both sides of the classification.
    assert!(qsr_seen > 10 && qsr_seen < 240, "qsr_seen = {qsr_seen}");
}

#[test]
fn classification_is_member_order_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for _ in 0..120 {
        let u = small_universe(rng.random_range(1..=5));
        let class = random_class(&u, 7, &mut rng);
        let report = is_quasi_semi_ring(&class);

        let mut shuffled = class.members().to_vec();
        shuffled.shuffle(&mut rng);
        let reordered = SetClass::new(u.clone(), shuffled).unwrap();
        let other = is_quasi_semi_ring(&reordered);

        assert_eq!(report.quasi_semi_ring, other.quasi_semi_ring);
        assert_eq!(report.semi_ring, other.semi_ring);
        assert_eq!(report.ring, other.ring);
        assert_eq!(report.algebra, other.algebra);
    }
}

#[test]
fn decomposition_agrees_with_subfamily_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut found = 0;
    for _ in 0..300 {
        let u = small_universe(rng.random_range(1..=5));
        let class = random_class(&u, 9, &mut rng);
        let target = u
            .subset_from_bits(rng.random_range(0..1u32 << u.len()))
            .unwrap();

        let fast = decompose_as_disjoint_union(target, &class);
        assert_eq!(fast.is_some(), naive_decomposition_exists(&class, target));

        if let Some(dec) = fast {
            found += 1;
            let pieces = dec.pieces(&class);
            assert!(pieces.iter().all(|p| class.contains(*p)));
            assert!(is_partition(&pieces, target).unwrap());
        }
    }
    assert!(found > 30, "found = {found}");
}

#[test]
fn disjointify_preserves_union_and_never_costs_more() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for seed in 0..60u64 {
        let style = match seed % 2 {
            0 => InstanceStyle::SemiRing,
            _ => InstanceStyle::Venn,
        };
        let opts = GenOptions::new(seed, 2 + (seed as usize % 6), style);
        let instance = generate_instance(&opts).unwrap();
        let class = instance.class();

        let cover: Vec<Subset> = class
            .members()
            .iter()
            .copied()
            .filter(|_| rng.random_ratio(1, 2))
            .collect();
        let pieces = disjointify(&cover, class).unwrap();

        let union = |sets: &[Subset]| {
            sets.iter()
                .copied()
                .fold(instance.universe().empty_set(), |acc, s| acc | s)
        };
        assert_eq!(union(&pieces), union(&cover));
        for (i, a) in pieces.iter().enumerate() {
            assert!(class.contains(*a));
            for b in &pieces[i + 1..] {
                assert!(a.is_disjoint(*b), "{a} overlaps {b}");
            }
        }

        let cost = |sets: &[Subset]| measure_sum(sets.iter().map(|&s| instance.value_of(s)));
        assert!(cost(&pieces) <= cost(&cover));

        // A cover that is already disjoint comes back unchanged.
        let again = disjointify(&pieces, class).unwrap();
        assert_eq!(again, pieces);
    }
}

#[test]
fn induced_table_is_always_an_outer_measure() {
    // No structure gate here on purpose: the min-cost cover construction
    // yields a genuine outer measure for any class containing the empty
    // set, and its measurable family is always an algebra.
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    for round in 0..80 {
        let u = small_universe(rng.random_range(1..=5));
        let class = random_class(&u, 8, &mut rng);
        let weights = random_weights(&u, &mut rng);
        let premeasure = Premeasure::from_atom_weights(&class, &weights).unwrap();
        let instance = Instance::new(class, premeasure).unwrap();

        let table = outer_measure_table(&instance).unwrap();
        let axioms = verify_outer_measure_axioms(&table);
        assert_eq!(axioms.verdict(), Verdict::Pass, "round {round}: {axioms:?}");

        // Covering a member by itself bounds the outer measure.
        for &m in instance.class().members() {
            assert!(table.value(m) <= instance.value_of(m), "round {round}");
        }

        let sweep = enumerate_measurable(&table);
        assert!(sweep.algebra, "round {round}");
    }
}

proptest! {
    #[test]
    fn arc_operations_conserve_length(
        start_num in -24i64..=48,
        len_a in 1i64..=24,
        shift in -24i64..=48,
        len_b in 1i64..=24,
    ) {
        let a = {
            let s = rational(start_num, 12);
            Arc::new(s.clone(), s + rational(len_a, 12)).unwrap()
        };
        let b = {
            let s = rational(shift, 12);
            Arc::new(s.clone(), s + rational(len_b, 12)).unwrap()
        };

        prop_assert!(*a.start() >= Rational::zero() && *a.start() < rational(2, 1));
        if !a.is_full_circle() {
            prop_assert!(a.contains(&a.end()));
            prop_assert!(!a.contains(a.start()));
        }

        let inter = arc_intersect(&a, &b);
        let diff = arc_difference(&a, &b);
        prop_assert!(inter.pieces().len() <= 2);
        prop_assert!(diff.pieces().len() <= 2);
        prop_assert_eq!(
            &inter.measure() + &diff.measure(),
            MeasureValue::Finite(a.len().clone())
        );

        // Spot-check membership at every output boundary.
        for piece in inter.pieces() {
            prop_assert!(a.contains(&piece.end()) && b.contains(&piece.end()));
        }
        for piece in diff.pieces() {
            prop_assert!(a.contains(&piece.end()) && !b.contains(&piece.end()));
        }
    }

    #[test]
    fn rect_operations_conserve_area(
        x1 in -12i64..=12,
        y1 in -12i64..=12,
        base_a in 1i64..=18,
        height_a in 1i64..=18,
        x2 in -12i64..=12,
        y2 in -12i64..=12,
        base_b in 1i64..=18,
        height_b in 1i64..=18,
    ) {
        let build = |x: i64, y: i64, w: i64, h: i64| {
            let h = if h == w { h + 1 } else { h };
            Rect::new(
                rational(x, 6),
                rational(x + w, 6),
                rational(y, 6),
                rational(y + h, 6),
            )
            .unwrap()
        };
        let a = build(x1, y1, base_a, height_a);
        let b = build(x2, y2, base_b, height_b);

        let inter = rect_intersect(&a, &b);
        let diff = rect_difference(&a, &b);
        prop_assert!(inter.pieces().len() <= 2);
        prop_assert!(diff.pieces().len() <= 8);
        prop_assert_eq!(
            &inter.area() + &diff.area(),
            MeasureValue::Finite(a.area())
        );
        for piece in inter.pieces().iter().chain(diff.pieces()) {
            prop_assert!(piece.base() != piece.height());
        }
    }
}

#[test]
fn table_matches_subfamily_enumeration_on_small_instances() {
    for seed in 0..12u64 {
        let style = match seed % 3 {
            0 => InstanceStyle::SemiRing,
            1 => InstanceStyle::Venn,
            _ => InstanceStyle::Rejection,
        };
        let mut opts = GenOptions::new(seed, 2 + (seed as usize % 4), style);
        opts.max_members = 12;
        let instance = generate_instance(&opts).unwrap();
        assert!(instance.class().len() <= 12);

        let table = outer_measure_table(&instance).unwrap();
        let oracle = naive_outer_measures(&instance);
        for (e, value) in table.entries() {
            assert_eq!(*value, oracle[e.bits() as usize], "seed {seed}, set {e}");
        }
    }
}
