use crate::error::Error;
use crate::measure::{ratio as rat, MeasureValue, Rational};
use crate::report::Verdict;
use num::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::fmt;

/// A semi-closed rectangle `(x1, x2] x (y1, y2]` whose base and height
/// differ. Squares are excluded from the class by construction; the
/// closure operations below restore them as unions of two such
/// rectangles, which is what makes this family a quasi-semi-ring
/// instead of a semi-ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rect {
    x1: Rational,
    x2: Rational,
    y1: Rational,
    y2: Rational,
}

impl Rect {
    pub fn new(x1: Rational, x2: Rational, y1: Rational, y2: Rational) -> Result<Rect, Error> {
        let bad = |reason: &'static str| Error::BadRect {
            x1: x1.to_string(),
            x2: x2.to_string(),
            y1: y1.to_string(),
            y2: y2.to_string(),
            reason,
        };
        if x1 >= x2 {
            return Err(bad("x interval must be nonempty"));
        }
        if y1 >= y2 {
            return Err(bad("y interval must be nonempty"));
        }
        if &x2 - &x1 == &y2 - &y1 {
            return Err(bad("base and height must differ"));
        }
        Ok(Rect { x1, x2, y1, y2 })
    }

    pub fn base(&self) -> Rational {
        &self.x2 - &self.x1
    }

    pub fn height(&self) -> Rational {
        &self.y2 - &self.y1
    }

    pub fn area(&self) -> Rational {
        self.base() * self.height()
    }

    pub fn contains(&self, x: &Rational, y: &Rational) -> bool {
        &self.x1 < x && x <= &self.x2 && &self.y1 < y && y <= &self.y2
    }

    pub fn corners(&self) -> [(Rational, Rational); 4] {
        [
            (self.x1.clone(), self.y1.clone()),
            (self.x1.clone(), self.y2.clone()),
            (self.x2.clone(), self.y1.clone()),
            (self.x2.clone(), self.y2.clone()),
        ]
    }

    fn overlaps(&self, other: &Rect) -> bool {
        self.x1 < other.x2 && other.x1 < self.x2 && self.y1 < other.y2 && other.y1 < self.y2
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}] x ({}, {}]", self.x1, self.x2, self.y1, self.y2)
    }
}

/// Cuts the box `(x1, x2] x (y1, y2]` into class members. A non-square
/// box is one member; a square of side `s` is sliced horizontally at
/// height `s/3` into a 1:3 bottom strip and a 2:3 top strip, neither of
/// which is square. An empty box yields nothing.
fn split_box(x1: Rational, x2: Rational, y1: Rational, y2: Rational) -> Vec<Rect> {
    if x1 >= x2 || y1 >= y2 {
        return Vec::new();
    }
    let side = &x2 - &x1;
    if side != &y2 - &y1 {
        return vec![Rect { x1, x2, y1, y2 }];
    }
    let cut = &y1 + side / rat(3, 1);
    vec![
        Rect {
            x1: x1.clone(),
            x2: x2.clone(),
            y1: y1.clone(),
            y2: cut.clone(),
        },
        Rect {
            x1,
            x2,
            y1: cut,
            y2,
        },
    ]
}

/// A finite union of pairwise-disjoint rectangles, sorted by lower-left
/// corner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RectSet {
    pieces: Vec<Rect>,
}

impl RectSet {
    pub fn empty() -> RectSet {
        RectSet { pieces: Vec::new() }
    }

    fn from_pieces(mut pieces: Vec<Rect>) -> RectSet {
        pieces.sort_by(|a, b| (&a.x1, &a.y1, &a.x2, &a.y2).cmp(&(&b.x1, &b.y1, &b.x2, &b.y2)));
        RectSet { pieces }
    }

    pub fn pieces(&self) -> &[Rect] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn contains(&self, x: &Rational, y: &Rational) -> bool {
        self.pieces.iter().any(|r| r.contains(x, y))
    }

    /// Total area, as an exact measure value.
    pub fn area(&self) -> MeasureValue {
        let total = self
            .pieces
            .iter()
            .fold(Rational::zero(), |acc, r| acc + r.area());
        MeasureValue::from_ratio(total).expect("areas are positive")
    }
}

/// Exact intersection of two rectangles: the overlap box, split if it
/// happens to be square. At most two pieces.
pub fn rect_intersect(a: &Rect, b: &Rect) -> RectSet {
    let x1 = a.x1.clone().max(b.x1.clone());
    let x2 = a.x2.clone().min(b.x2.clone());
    let y1 = a.y1.clone().max(b.y1.clone());
    let y2 = a.y2.clone().min(b.y2.clone());
    RectSet::from_pieces(split_box(x1, x2, y1, y2))
}

/// Exact difference `a minus b` by guillotine cuts: a full-height strip
/// on each side of the overlap, plus middle strips below and above it,
/// each split if square. At most eight pieces.
pub fn rect_difference(a: &Rect, b: &Rect) -> RectSet {
    if !a.overlaps(b) {
        return RectSet::from_pieces(vec![a.clone()]);
    }
    let ox1 = a.x1.clone().max(b.x1.clone());
    let ox2 = a.x2.clone().min(b.x2.clone());
    let oy1 = a.y1.clone().max(b.y1.clone());
    let oy2 = a.y2.clone().min(b.y2.clone());

    let mut pieces = Vec::new();
    pieces.extend(split_box(
        a.x1.clone(),
        ox1.clone(),
        a.y1.clone(),
        a.y2.clone(),
    ));
    pieces.extend(split_box(
        ox2.clone(),
        a.x2.clone(),
        a.y1.clone(),
        a.y2.clone(),
    ));
    pieces.extend(split_box(ox1.clone(), ox2.clone(), a.y1.clone(), oy1));
    pieces.extend(split_box(ox1, ox2, oy2, a.y2.clone()));
    RectSet::from_pieces(pieces)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RectCheckFailure {
    /// An operation produced more pieces than its bound allows.
    PieceCount {
        operation: &'static str,
        a: Rect,
        b: Rect,
        pieces: usize,
    },
    /// Two output pieces overlap.
    PieceOverlap {
        operation: &'static str,
        first: Rect,
        second: Rect,
    },
    /// `area(a)` differs from `area(a and b) + area(a minus b)`.
    AreaConservation {
        a: Rect,
        b: Rect,
        intersection_area: MeasureValue,
        difference_area: MeasureValue,
    },
    /// Membership of a probe point disagrees with the pointwise oracle.
    ProbeDisagreement {
        operation: &'static str,
        a: Rect,
        b: Rect,
        x: Rational,
        y: Rational,
    },
}

/// Randomized verification report for the rectangle operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RectDecompositionReport {
    pub samples: u32,
    pub probes_per_sample: u32,
    pub max_intersection_pieces: usize,
    pub max_difference_pieces: usize,
    /// Whether some sampled overlap was genuinely square and had to be
    /// split (the first sample forces one).
    pub square_split_seen: bool,
    pub failure: Option<RectCheckFailure>,
}

impl RectDecompositionReport {
    pub fn verdict(&self) -> Verdict {
        if self.failure.is_none() {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// The overlapping pair whose intersection is the square `(0, 2]^2`:
/// `(0, 2] x (0, 3]` and `(0, 3] x (0, 2]`.
pub fn square_overlap_pair() -> (Rect, Rect) {
    (
        Rect::new(rat(0, 1), rat(2, 1), rat(0, 1), rat(3, 1)).unwrap(),
        Rect::new(rat(0, 1), rat(3, 1), rat(0, 1), rat(2, 1)).unwrap(),
    )
}

fn random_coord(rng: &mut ChaCha8Rng, max_denom: i64) -> Rational {
    let denom = rng.random_range(1..=max_denom);
    rat(rng.random_range(0..=3 * denom), denom)
}

fn random_rect(rng: &mut ChaCha8Rng) -> Rect {
    let x1 = random_coord(rng, 6);
    let y1 = random_coord(rng, 6);
    let base_denom = rng.random_range(1..=6);
    let base = rat(rng.random_range(1..=3 * base_denom), base_denom);
    let height = loop {
        let denom = rng.random_range(1..=6);
        let h = rat(rng.random_range(1..=3 * denom), denom);
        if h != base {
            break h;
        }
    };
    Rect::new(x1.clone(), &x1 + base, y1.clone(), &y1 + height)
        .expect("sampled base and height differ")
}

#[allow(clippy::result_large_err)] // failures are rare and carry full context
fn check_pair(
    a: &Rect,
    b: &Rect,
    probes: &[(Rational, Rational)],
) -> Result<(usize, usize), RectCheckFailure> {
    let intersection = rect_intersect(a, b);
    let difference = rect_difference(a, b);

    let bounds = [
        ("intersect", &intersection, 2),
        ("difference", &difference, 8),
    ];
    for (operation, set, bound) in bounds {
        if set.pieces().len() > bound {
            return Err(RectCheckFailure::PieceCount {
                operation,
                a: a.clone(),
                b: b.clone(),
                pieces: set.pieces().len(),
            });
        }
        for (i, x) in set.pieces().iter().enumerate() {
            for y in &set.pieces()[i + 1..] {
                if x.overlaps(y) {
                    return Err(RectCheckFailure::PieceOverlap {
                        operation,
                        first: x.clone(),
                        second: y.clone(),
                    });
                }
            }
        }
    }

    let conserved = &intersection.area() + &difference.area();
    if conserved != MeasureValue::Finite(a.area()) {
        return Err(RectCheckFailure::AreaConservation {
            a: a.clone(),
            b: b.clone(),
            intersection_area: intersection.area(),
            difference_area: difference.area(),
        });
    }

    let mut boundary: Vec<(Rational, Rational)> = Vec::new();
    for rect in [a, b].into_iter().chain(
        intersection
            .pieces()
            .iter()
            .chain(difference.pieces().iter()),
    ) {
        boundary.extend(rect.corners());
    }
    for (x, y) in probes.iter().chain(boundary.iter()) {
        let in_a = a.contains(x, y);
        let in_b = b.contains(x, y);
        if intersection.contains(x, y) != (in_a && in_b) {
            return Err(RectCheckFailure::ProbeDisagreement {
                operation: "intersect",
                a: a.clone(),
                b: b.clone(),
                x: x.clone(),
                y: y.clone(),
            });
        }
        if difference.contains(x, y) != (in_a && !in_b) {
            return Err(RectCheckFailure::ProbeDisagreement {
                operation: "difference",
                a: a.clone(),
                b: b.clone(),
                x: x.clone(),
                y: y.clone(),
            });
        }
    }

    Ok((intersection.pieces().len(), difference.pieces().len()))
}

/// Randomized verification of the rectangle operations: for `samples`
/// seeded pairs (sample 0 overlaps in a genuine square), checks the
/// piece bounds, pairwise disjointness of outputs, exact area
/// conservation `area(a) = area(a and b) + area(a minus b)`, and
/// agreement with the pointwise membership oracle on
/// `probes_per_sample` random points plus every corner in sight.
/// Samples are deterministic in `seed` and independent, so the sweep
/// runs in parallel.
#[allow(clippy::result_large_err)] // per-sample results inherit the failure payload
pub fn verify_rect_decompositions(
    samples: u32,
    probes_per_sample: u32,
    seed: u64,
) -> RectDecompositionReport {
    let outcomes: Vec<Result<(usize, usize), RectCheckFailure>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(u64::from(i));
            let (a, b) = if i == 0 {
                square_overlap_pair()
            } else {
                (random_rect(&mut rng), random_rect(&mut rng))
            };
            let probes: Vec<(Rational, Rational)> = (0..probes_per_sample)
                .map(|_| (random_coord(&mut rng, 41), random_coord(&mut rng, 41)))
                .collect();
            check_pair(&a, &b, &probes)
        })
        .collect();

    let mut report = RectDecompositionReport {
        samples,
        probes_per_sample,
        max_intersection_pieces: 0,
        max_difference_pieces: 0,
        square_split_seen: false,
        failure: None,
    };
    for outcome in outcomes {
        match outcome {
            Ok((ni, nd)) => {
                report.max_intersection_pieces = report.max_intersection_pieces.max(ni);
                report.max_difference_pieces = report.max_difference_pieces.max(nd);
                if ni == 2 {
                    report.square_split_seen = true;
                }
            }
            Err(failure) => {
                report.failure = Some(failure);
                break;
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rect(x1: (i64, i64), x2: (i64, i64), y1: (i64, i64), y2: (i64, i64)) -> Rect {
        Rect::new(
            rat(x1.0, x1.1),
            rat(x2.0, x2.1),
            rat(y1.0, y1.1),
            rat(y2.0, y2.1),
        )
        .unwrap()
    }

    #[test]
    fn squares_and_empty_boxes_rejected() {
        assert!(matches!(
            Rect::new(rat(0, 1), rat(1, 1), rat(0, 1), rat(1, 1)),
            Err(Error::BadRect { .. })
        ));
        assert!(matches!(
            Rect::new(rat(1, 1), rat(1, 1), rat(0, 1), rat(2, 1)),
            Err(Error::BadRect { .. })
        ));
        assert!(matches!(
            Rect::new(rat(0, 1), rat(2, 1), rat(5, 1), rat(3, 1)),
            Err(Error::BadRect { .. })
        ));
        // Translated squares are still squares.
        assert!(matches!(
            Rect::new(rat(1, 2), rat(7, 2), rat(-1, 1), rat(2, 1)),
            Err(Error::BadRect { .. })
        ));
    }

    #[test]
    fn membership_is_semi_closed() {
        let r = rect((0, 1), (2, 1), (0, 1), (1, 1));
        assert!(r.contains(&rat(2, 1), &rat(1, 1)));
        assert!(r.contains(&rat(1, 1), &rat(1, 2)));
        assert!(!r.contains(&rat(0, 1), &rat(1, 2)));
        assert!(!r.contains(&rat(1, 1), &rat(0, 1)));
        assert!(!r.contains(&rat(5, 2), &rat(1, 2)));
    }

    #[test]
    fn square_overlap_splits_one_to_two() {
        let (a, b) = square_overlap_pair();
        let i = rect_intersect(&a, &b);
        assert_eq!(
            i.pieces(),
            &[
                rect((0, 1), (2, 1), (0, 1), (2, 3)),
                rect((0, 1), (2, 1), (2, 3), (2, 1)),
            ]
        );
        assert_eq!(i.pieces()[0].area(), rat(4, 3));
        assert_eq!(i.pieces()[1].area(), rat(8, 3));
        assert_eq!(i.area(), "4".parse().unwrap());

        let d = rect_difference(&a, &b);
        assert_eq!(d.pieces(), &[rect((0, 1), (2, 1), (2, 1), (3, 1))]);
        assert_eq!(d.area(), "2".parse().unwrap());
    }

    #[test]
    fn non_square_overlap_stays_whole() {
        let a = rect((0, 1), (3, 1), (0, 1), (1, 1));
        let b = rect((1, 1), (4, 1), (1, 2), (2, 1));
        let i = rect_intersect(&a, &b);
        assert_eq!(i.pieces(), &[rect((1, 1), (3, 1), (1, 2), (1, 1))]);
    }

    #[test]
    fn disjoint_rects() {
        let a = rect((0, 1), (1, 1), (0, 1), (2, 1));
        let b = rect((5, 1), (6, 1), (0, 1), (2, 1));
        assert!(rect_intersect(&a, &b).is_empty());
        assert_eq!(rect_difference(&a, &b).pieces(), std::slice::from_ref(&a));
        // Sharing only an edge is still disjoint: the strips are
        // half-open on the low side.
        let c = rect((1, 1), (2, 1), (0, 1), (3, 1));
        assert!(rect_intersect(&a, &c).is_empty());
    }

    #[test]
    fn difference_carves_a_frame() {
        // Removing an interior rectangle leaves four strips.
        let outer = rect((0, 1), (4, 1), (0, 1), (3, 1));
        let inner = rect((1, 1), (3, 1), (1, 1), (3, 2));
        let d = rect_difference(&outer, &inner);
        assert_eq!(
            d.pieces(),
            &[
                rect((0, 1), (1, 1), (0, 1), (3, 1)),
                rect((1, 1), (3, 1), (0, 1), (1, 1)),
                rect((1, 1), (3, 1), (3, 2), (3, 1)),
                rect((3, 1), (4, 1), (0, 1), (3, 1)),
            ]
        );
        let total = d.area();
        let removed = MeasureValue::Finite(inner.area());
        assert_eq!(&total + &removed, MeasureValue::Finite(outer.area()));
    }

    #[test]
    fn difference_splits_square_strips() {
        // The strip left of the removed part is the square (0,1]^2 and
        // must come back as two rectangles.
        let a = rect((0, 1), (3, 1), (0, 1), (1, 1));
        let b = rect((1, 1), (3, 1), (0, 1), (1, 1));
        let d = rect_difference(&a, &b);
        assert_eq!(
            d.pieces(),
            &[
                rect((0, 1), (1, 1), (0, 1), (1, 3)),
                rect((0, 1), (1, 1), (1, 3), (1, 1)),
            ]
        );
        assert_eq!(d.area(), "1".parse().unwrap());
    }

    #[test]
    fn randomized_verification_passes() {
        let report = verify_rect_decompositions(150, 40, 19);
        assert_eq!(report.failure, None);
        assert!(report.square_split_seen);
        assert!(report.max_intersection_pieces <= 2);
        assert!(report.max_difference_pieces <= 8);
        assert_eq!(report.verdict(), Verdict::Pass);
    }
}
