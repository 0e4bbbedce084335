use crate::error::Error;
use crate::measure::{ratio as rat, MeasureValue, Rational};
use crate::report::Verdict;
use num::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::fmt;

fn two() -> Rational {
    rat(2, 1)
}

/// `r` reduced modulo 2 into `[0, 2)`.
fn mod_two(r: &Rational) -> Rational {
    let q = (r / two()).floor();
    r - q * two()
}

/// A semi-closed arc `(start, end]` on the circle of circumference 2,
/// with angles in half-turns (units of pi radians, so the full circle is
/// `2` and a right angle is `1/2`).
///
/// Canonical form: `start` lies in `[0, 2)`, the length lies in `(0, 2]`,
/// and the full circle is pinned to `start = 0`. Equality of canonical
/// forms is equality of point sets. Degenerate inputs (empty or
/// overlong) are rejected at construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arc {
    start: Rational,
    len: Rational,
}

impl Arc {
    pub fn new(start: Rational, end: Rational) -> Result<Arc, Error> {
        let len = &end - &start;
        if len <= Rational::zero() || len > two() {
            return Err(Error::BadArc {
                start: start.to_string(),
                end: end.to_string(),
                reason: "arc length must lie in (0, 2]",
            });
        }
        if len == two() {
            return Ok(Arc {
                start: Rational::zero(),
                len,
            });
        }
        Ok(Arc {
            start: mod_two(&start),
            len,
        })
    }

    pub fn full_circle() -> Arc {
        Arc {
            start: Rational::zero(),
            len: two(),
        }
    }

    pub fn start(&self) -> &Rational {
        &self.start
    }

    pub fn len(&self) -> &Rational {
        &self.len
    }

    /// `start + len`; exceeds 2 exactly when the arc wraps through 0.
    pub fn end(&self) -> Rational {
        &self.start + &self.len
    }

    pub fn is_full_circle(&self) -> bool {
        self.len == two()
    }

    pub fn wraps(&self) -> bool {
        self.end() > two()
    }

    /// Membership of the angle `p` (any rational; reduced mod 2): shift
    /// `p` into the window `(start, start + 2]` and compare with the
    /// length.
    pub fn contains(&self, p: &Rational) -> bool {
        let offset = mod_two(&(p - &self.start));
        let offset = if offset.is_zero() { two() } else { offset };
        offset <= self.len
    }

    /// The arc cut at angle 0: one or two half-open linear segments
    /// `(lo, hi]` inside `(0, 2]`.
    fn linear_segments(&self) -> Vec<(Rational, Rational)> {
        let end = self.end();
        if end <= two() {
            vec![(self.start.clone(), end)]
        } else {
            vec![(self.start.clone(), two()), (Rational::zero(), end - two())]
        }
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}]", self.start, self.end())
    }
}

/// A finite union of pairwise-disjoint arcs, kept sorted by start angle
/// with adjacent pieces merged (including across angle 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcSet {
    pieces: Vec<Arc>,
}

impl ArcSet {
    pub fn empty() -> ArcSet {
        ArcSet { pieces: Vec::new() }
    }

    pub fn pieces(&self) -> &[Arc] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn contains(&self, p: &Rational) -> bool {
        self.pieces.iter().any(|a| a.contains(p))
    }

    /// Total arc length, as an exact measure value.
    pub fn measure(&self) -> MeasureValue {
        let total = self
            .pieces
            .iter()
            .fold(Rational::zero(), |acc, a| acc + a.len());
        MeasureValue::from_ratio(total).expect("arc lengths are positive")
    }

    /// Assembles a canonical arc set from half-open linear segments in
    /// `(0, 2]` coordinates. Segments must be pairwise disjoint; empty
    /// ones are dropped, touching ones are merged, and a run reaching 2
    /// fuses with a run starting at 0 into a single wrapped arc.
    fn from_linear_segments(mut segments: Vec<(Rational, Rational)>) -> ArcSet {
        segments.retain(|(lo, hi)| lo < hi);
        if segments.is_empty() {
            return ArcSet::empty();
        }
        segments.sort_by(|a, b| a.0.cmp(&b.0));

        let mut merged: Vec<(Rational, Rational)> = Vec::with_capacity(segments.len());
        for (lo, hi) in segments {
            match merged.last_mut() {
                Some((_, prev_hi)) if *prev_hi == lo => *prev_hi = hi,
                Some((_, prev_hi)) => {
                    debug_assert!(*prev_hi < lo, "segments must not overlap");
                    merged.push((lo, hi));
                }
                None => merged.push((lo, hi)),
            }
        }

        // Full cover collapses to the full circle.
        if merged.len() == 1 && merged[0].0.is_zero() && merged[0].1 == two() {
            return ArcSet {
                pieces: vec![Arc::full_circle()],
            };
        }

        // A run ending at 2 continues into a run starting at 0.
        let mut wrapped: Option<Arc> = None;
        if merged.len() >= 2 {
            let starts_at_zero = merged.first().unwrap().0.is_zero();
            let ends_at_two = merged.last().unwrap().1 == two();
            if starts_at_zero && ends_at_two {
                let (_, first_hi) = merged.remove(0);
                let (last_lo, _) = merged.pop().unwrap();
                let end = two() + first_hi;
                wrapped = Some(Arc::new(last_lo, end).expect("wrapped run is nonempty and short"));
            }
        }

        let mut pieces: Vec<Arc> = merged
            .into_iter()
            .map(|(lo, hi)| Arc::new(lo, hi).expect("nonempty segment within (0, 2]"))
            .collect();
        if let Some(arc) = wrapped {
            pieces.push(arc);
        }
        pieces.sort_by(|a, b| a.start.cmp(&b.start));
        ArcSet { pieces }
    }
}

/// Exact intersection of two arcs: at most two disjoint arcs (each arc's
/// complement is again an arc, so the boundary count caps the pieces).
pub fn arc_intersect(a: &Arc, b: &Arc) -> ArcSet {
    let mut segments = Vec::new();
    for (al, ah) in a.linear_segments() {
        for (bl, bh) in b.linear_segments() {
            let lo = al.clone().max(bl);
            let hi = ah.clone().min(bh);
            segments.push((lo, hi));
        }
    }
    let result = ArcSet::from_linear_segments(segments);
    debug_assert!(result.pieces.len() <= 2);
    result
}

/// Exact difference `a minus b`, i.e. the intersection of `a` with the
/// complement of `b`: again at most two disjoint arcs.
pub fn arc_difference(a: &Arc, b: &Arc) -> ArcSet {
    // Complement of b inside (0, 2] coordinates.
    let mut b_segments = b.linear_segments();
    b_segments.sort_by(|x, y| x.0.cmp(&y.0));
    let mut complement = Vec::new();
    let mut cursor = Rational::zero();
    for (lo, hi) in b_segments {
        if cursor < lo {
            complement.push((cursor.clone(), lo));
        }
        cursor = hi;
    }
    if cursor < two() {
        complement.push((cursor, two()));
    }

    let mut segments = Vec::new();
    for (al, ah) in a.linear_segments() {
        for (cl, ch) in &complement {
            let lo = al.clone().max(cl.clone());
            let hi = ah.clone().min(ch.clone());
            segments.push((lo, hi));
        }
    }
    let result = ArcSet::from_linear_segments(segments);
    debug_assert!(result.pieces.len() <= 2);
    result
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArcCheckFailure {
    /// An intersection or difference produced more pieces than the
    /// two-arc bound allows.
    PieceCount {
        operation: &'static str,
        a: Arc,
        b: Arc,
        pieces: usize,
    },
    /// Two output pieces overlap.
    PieceOverlap {
        operation: &'static str,
        first: Arc,
        second: Arc,
    },
    /// `len(a)` differs from `len(a and b) + len(a minus b)`.
    LengthConservation {
        a: Arc,
        b: Arc,
        intersection_len: MeasureValue,
        difference_len: MeasureValue,
    },
    /// Membership of a probe point disagrees with the pointwise oracle.
    ProbeDisagreement {
        operation: &'static str,
        a: Arc,
        b: Arc,
        point: Rational,
    },
}

/// Randomized verification report for the arc operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcDecompositionReport {
    pub samples: u32,
    pub probes_per_sample: u32,
    pub max_intersection_pieces: usize,
    pub max_difference_pieces: usize,
    /// Whether some sampled intersection genuinely split into two arcs
    /// (the wraparound phenomenon; the first sample forces one).
    pub wraparound_split_seen: bool,
    pub failure: Option<ArcCheckFailure>,
}

impl ArcDecompositionReport {
    pub fn verdict(&self) -> Verdict {
        if self.failure.is_none() {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

fn random_angle(rng: &mut ChaCha8Rng, max_denom: i64) -> Rational {
    let denom = rng.random_range(1..=max_denom);
    let numer = rng.random_range(0..2 * denom);
    rat(numer, denom)
}

fn random_arc(rng: &mut ChaCha8Rng) -> Arc {
    let start = random_angle(rng, 12);
    let denom = rng.random_range(1..=12);
    let len = rat(rng.random_range(1..=2 * denom), denom);
    Arc::new(start.clone(), start + len).expect("sampled length is in (0, 2]")
}

/// The overlapping pair with a wrapped intersection: `(0, 3/2]` and
/// `(1, 5/2]` meet in the two arcs `(0, 1/2]` and `(1, 3/2]`.
pub fn wraparound_pair() -> (Arc, Arc) {
    (
        Arc::new(rat(0, 1), rat(3, 2)).unwrap(),
        Arc::new(rat(1, 1), rat(5, 2)).unwrap(),
    )
}

fn segments_overlap(x: &Arc, y: &Arc) -> bool {
    for (al, ah) in x.linear_segments() {
        for (bl, bh) in y.linear_segments() {
            if al.clone().max(bl) < ah.clone().min(bh) {
                return true;
            }
        }
    }
    false
}

#[allow(clippy::result_large_err)] // failures are rare and carry full context
fn check_pair(a: &Arc, b: &Arc, probes: &[Rational]) -> Result<(usize, usize), ArcCheckFailure> {
    let intersection = arc_intersect(a, b);
    let difference = arc_difference(a, b);

    for (operation, set) in [("intersect", &intersection), ("difference", &difference)] {
        if set.pieces().len() > 2 {
            return Err(ArcCheckFailure::PieceCount {
                operation,
                a: a.clone(),
                b: b.clone(),
                pieces: set.pieces().len(),
            });
        }
        for (i, x) in set.pieces().iter().enumerate() {
            for y in &set.pieces()[i + 1..] {
                if segments_overlap(x, y) {
                    return Err(ArcCheckFailure::PieceOverlap {
                        operation,
                        first: x.clone(),
                        second: y.clone(),
                    });
                }
            }
        }
    }

    let conserved = &intersection.measure() + &difference.measure();
    if conserved != MeasureValue::Finite(a.len().clone()) {
        return Err(ArcCheckFailure::LengthConservation {
            a: a.clone(),
            b: b.clone(),
            intersection_len: intersection.measure(),
            difference_len: difference.measure(),
        });
    }

    let mut boundary = vec![a.start.clone(), a.end(), b.start.clone(), b.end()];
    for piece in intersection.pieces().iter().chain(difference.pieces()) {
        boundary.push(piece.start.clone());
        boundary.push(piece.end());
    }
    for p in probes.iter().chain(boundary.iter()) {
        let in_a = a.contains(p);
        let in_b = b.contains(p);
        if intersection.contains(p) != (in_a && in_b) {
            return Err(ArcCheckFailure::ProbeDisagreement {
                operation: "intersect",
                a: a.clone(),
                b: b.clone(),
                point: p.clone(),
            });
        }
        if difference.contains(p) != (in_a && !in_b) {
            return Err(ArcCheckFailure::ProbeDisagreement {
                operation: "difference",
                a: a.clone(),
                b: b.clone(),
                point: p.clone(),
            });
        }
    }

    Ok((intersection.pieces().len(), difference.pieces().len()))
}

/// Randomized verification of the arc operations: for `samples` seeded
/// pairs of arcs (sample 0 is the canonical wraparound pair), checks the
/// two-piece bound, pairwise disjointness of outputs, exact length
/// conservation `len(a) = len(a and b) + len(a minus b)`, and agreement
/// with the pointwise membership oracle on `probes_per_sample` random
/// angles plus all boundary angles. Samples are deterministic in `seed`
/// and independent of each other, so the sweep runs in parallel.
#[allow(clippy::result_large_err)] // per-sample results inherit the failure payload
pub fn verify_arc_decompositions(
    samples: u32,
    probes_per_sample: u32,
    seed: u64,
) -> ArcDecompositionReport {
    let outcomes: Vec<Result<(usize, usize), ArcCheckFailure>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(u64::from(i));
            let (a, b) = if i == 0 {
                wraparound_pair()
            } else {
                (random_arc(&mut rng), random_arc(&mut rng))
            };
            let probes: Vec<Rational> = (0..probes_per_sample)
                .map(|_| random_angle(&mut rng, 97))
                .collect();
            check_pair(&a, &b, &probes)
        })
        .collect();

    let mut report = ArcDecompositionReport {
        samples,
        probes_per_sample,
        max_intersection_pieces: 0,
        max_difference_pieces: 0,
        wraparound_split_seen: false,
        failure: None,
    };
    for outcome in outcomes {
        match outcome {
            Ok((ni, nd)) => {
                report.max_intersection_pieces = report.max_intersection_pieces.max(ni);
                report.max_difference_pieces = report.max_difference_pieces.max(nd);
                if ni == 2 {
                    report.wraparound_split_seen = true;
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
