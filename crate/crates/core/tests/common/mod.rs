//! Brute-force oracles shared by the integration suites. Everything here
//! recomputes library results by slower, independent means, so the two
//! sides of each comparison share no code.

#![allow(dead_code)]

use num::Zero;
use qsr_core::{Instance, MeasureValue, Rational, SetClass, Subset};

/// Outer measures by subfamily enumeration: walk every subfamily of the
/// class, record its total premeasure against its union, then give each
/// target the cheapest subfamily whose union covers it. Exponential in
/// the class size.
pub fn naive_outer_measures(instance: &Instance) -> Vec<MeasureValue> {
    let members = instance.class().members();
    assert!(members.len() <= 20, "oracle is exponential in class size");
    let n = instance.universe().len();

    let mut cheapest: Vec<Option<MeasureValue>> = vec![None; 1usize << n];
    for family in 0u32..(1u32 << members.len()) {
        let mut union = 0u32;
        let mut cost = MeasureValue::Finite(Rational::zero());
        for (i, &m) in members.iter().enumerate() {
            if family & (1 << i) != 0 {
                union |= m.bits();
                cost = &cost + instance.value_of(m);
            }
        }
        let slot = &mut cheapest[union as usize];
        if slot.as_ref().is_none_or(|c| cost < *c) {
            *slot = Some(cost);
        }
    }

    (0..1u32 << n)
        .map(|target| {
            let mut best: Option<&MeasureValue> = None;
            for (union, cost) in cheapest.iter().enumerate() {
                let Some(cost) = cost else { continue };
                if union as u32 & target == target && best.is_none_or(|b| cost < b) {
                    best = Some(cost);
                }
            }
            best.cloned().unwrap_or(MeasureValue::Infinite)
        })
        .collect()
}

/// Whether some pairwise-disjoint subfamily of the class has union
/// exactly `target`, by trying all subfamilies.
pub fn naive_decomposition_exists(class: &SetClass, target: Subset) -> bool {
    let members = class.members();
    assert!(members.len() <= 16, "oracle is exponential in class size");
    'family: for family in 0u32..(1u32 << members.len()) {
        let mut union = 0u32;
        for (i, &m) in members.iter().enumerate() {
            if family & (1 << i) != 0 {
                if union & m.bits() != 0 {
                    continue 'family;
                }
                union |= m.bits();
            }
        }
        if union == target.bits() {
            return true;
        }
    }
    false
}

pub fn mv(text: &str) -> MeasureValue {
    text.parse().expect("test literal parses")
}
