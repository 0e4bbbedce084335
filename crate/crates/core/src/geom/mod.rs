//! Symbolic geometric domains with exact rational coordinates.
//!
//! Both domains exercise the same closure laws as the finite-universe
//! machinery, but on classes with infinitely many members, so instead of
//! predicates over all pairs there are constructive decomposition
//! operations plus randomized verification:
//!
//! * [`arc`]: semi-closed arcs `(a, b]` on a circle of circumference 2
//!   (angles measured in half-turns, i.e. in units of pi radians).
//! * [`rect`]: semi-closed planar rectangles `(x1, x2] x (y1, y2]` whose
//!   base and height differ, squares being repaired by a fixed split.

pub mod arc;
pub mod rect;

pub use arc::{
    arc_difference, arc_intersect, verify_arc_decompositions, Arc, ArcCheckFailure,
    ArcDecompositionReport, ArcSet,
};
pub use rect::{
    rect_difference, rect_intersect, verify_rect_decompositions, Rect, RectCheckFailure,
    RectDecompositionReport, RectSet,
};
