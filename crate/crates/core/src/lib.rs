//! Exact-arithmetic workbench for quasi-semi-rings of sets and the
//! Caratheodory extension machinery over finite universes.
//!
//! Everything here is computed in exact rational arithmetic; there are no
//! floating-point tolerances anywhere. Set classes live over a finite
//! universe of at most 32 named atoms, subsets are bitmasks, and measures
//! take values in the nonnegative rationals extended with infinity.
//!
//! The crate is organised around a handful of questions one can ask about
//! a finite set class `A` equipped with a premeasure:
//!
//! * does `A` form a quasi-semi-ring / semi-ring / ring? ([`structure`])
//! * is the premeasure finitely additive on `A`? ([`instance`])
//! * what outer measure does it induce, is every member Caratheodory
//!   measurable, and does restricting covers to disjoint ones change
//!   anything? ([`extension`])
//! * what ring does `A` generate, and is the extension unique on it?
//!   ([`uniqueness`], [`search`])
//!
//! Two symbolic geometric domains (semi-closed circle arcs and semi-closed
//! rectangles with unequal sides) exercise the same closure laws without a
//! finite atom model; see [`geom`].

pub mod error;
pub mod extension;
pub mod gen;
pub mod geom;
pub mod instance;
pub mod measure;
pub mod report;
pub mod search;
pub mod structure;
pub mod uniqueness;
pub mod universe;

pub use error::Error;
pub use extension::{
    disjoint_outer_measure, disjointify, enumerate_measurable, is_measurable, outer_measure_table,
    splitting_witness, verify_disjoint_cover_equivalence, verify_extension_theorem,
    verify_outer_measure_axioms, AxiomsReport, DisjointCoverReport, ExtensionReport,
    MeasurabilityReport, OuterMeasureTable,
};
pub use instance::{
    is_partition, validate_premeasure, Instance, Premeasure, SetClass, ValidationReport,
};
pub use measure::{measure_sum, MeasureValue, Rational};
pub use report::Verdict;
pub use structure::{
    decompose_as_disjoint_union, interval_semi_ring, is_quasi_semi_ring, is_ring, is_semi_ring,
    venn_triple_class, Decomposer, Decomposition, StructureLevel, StructureReport,
};
pub use uniqueness::{
    finite_measure_decomposition, generate_ring, is_sigma_finite, verify_sigma_uniqueness,
    verify_smallest_ring, verify_uniqueness_on_ring, GeneratedRing, SigmaUniquenessReport,
    SmallestRingReport, TwoMeasureInstance, UniquenessReport,
};
pub use universe::{Subset, Universe};
