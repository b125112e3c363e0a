//! Local moves of divides with cusps that preserve the link type.
//!
//! * [`MoveId::CuspSlide`]: an end cusp of a strip curve passes through the
//!   neighbouring line (the cusp tip pokes through a branch, or retracts).
//! * [`MoveId::CuspCancel`]: an end cusp and the upward cusp in the same gap
//!   merge into a round cap (a planar isotopy followed by cancelling the
//!   resulting zigzag), or the reverse.
//! * [`MoveId::CuspBigon`]: a segment passes across the double point of two
//!   other branches (the triangle move).

use crate::arrangement::Point;
use crate::divide::{
    segment_contact, strip_curve, validate_divide, Cap, Curve, CurveKind, DivideWithCusps,
    Feature, SegmentContact,
};
use crate::rational::{int, Rat};
use num_traits::Zero;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveId {
    CuspSlide,
    CuspCancel,
    CuspBigon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Slide: the cusp moves toward the middle of the curve. Cancel: cusps
    /// disappear. Bigon: a vertex is inserted past the double point.
    Forward,
    Backward,
}

/// Where a move applies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveSpec {
    pub id: MoveId,
    pub curve: usize,
    pub side: Side,
    /// Segment index, used by the bigon move only.
    pub segment: usize,
    pub direction: Direction,
}

impl MoveSpec {
    pub fn slide(curve: usize, side: Side, direction: Direction) -> Self {
        MoveSpec {
            id: MoveId::CuspSlide,
            curve,
            side,
            segment: 0,
            direction,
        }
    }

    pub fn cancel(curve: usize, side: Side, direction: Direction) -> Self {
        MoveSpec {
            id: MoveId::CuspCancel,
            curve,
            side,
            segment: 0,
            direction,
        }
    }

    pub fn bigon(curve: usize, segment: usize, direction: Direction) -> Self {
        MoveSpec {
            id: MoveId::CuspBigon,
            curve,
            side: Side::Left,
            segment,
            direction,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MoveError {
    #[error("no curve {0}")]
    NoSuchCurve(usize),
    #[error("move pattern not found: {0}")]
    PatternMismatch(String),
    #[error("move would create an invalid divide: {0}")]
    OverlapDetected(String),
}

impl fmt::Display for MoveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} {:?} curve {} ", self.id, self.direction, self.curve)?;
        match self.id {
            MoveId::CuspBigon => write!(f, "segment {}", self.segment),
            _ => write!(f, "{:?}", self.side),
        }
    }
}

fn mismatch(s: impl Into<String>) -> MoveError {
    MoveError::PatternMismatch(s.into())
}

/// Applies one move and checks that the result is still a divide.
pub fn apply_move(d: &DivideWithCusps, m: &MoveSpec) -> Result<DivideWithCusps, MoveError> {
    let curve = d.curves.get(m.curve).ok_or(MoveError::NoSuchCurve(m.curve))?;
    let mut out = d.clone();
    match m.id {
        MoveId::CuspSlide | MoveId::CuspCancel => {
            let mut w = curve
                .strip
                .clone()
                .ok_or_else(|| mismatch("not a strip curve"))?;
            let norm = d.arrangement.as_ref().ok_or_else(|| mismatch("no arrangement"))?;
            let n = norm.lines.len();
            let last = w.features.len() - 1;
            match (m.id, m.side, m.direction) {
                (MoveId::CuspSlide, Side::Left, Direction::Forward) => {
                    if w.left_cap != Cap::Cusp || w.features[0] != Feature::Straight || w.lo >= w.hi {
                        return Err(mismatch("left end is not a free cusp"));
                    }
                    w.lo += 1;
                    w.features.remove(0);
                }
                (MoveId::CuspSlide, Side::Left, Direction::Backward) => {
                    if w.left_cap != Cap::Cusp || w.lo <= 1 {
                        return Err(mismatch("left cusp cannot pass outward"));
                    }
                    w.lo -= 1;
                    w.features.insert(0, Feature::Straight);
                }
                (MoveId::CuspSlide, Side::Right, Direction::Forward) => {
                    if w.right_cap != Cap::Cusp || w.features[last] != Feature::Straight || w.lo >= w.hi {
                        return Err(mismatch("right end is not a free cusp"));
                    }
                    w.hi -= 1;
                    w.features.pop();
                }
                (MoveId::CuspSlide, Side::Right, Direction::Backward) => {
                    if w.right_cap != Cap::Cusp || w.hi >= n {
                        return Err(mismatch("right cusp cannot pass outward"));
                    }
                    w.hi += 1;
                    w.features.push(Feature::Straight);
                }
                (MoveId::CuspCancel, side, dir) => {
                    let (cap, feat) = match side {
                        Side::Left => (&mut w.left_cap, 0),
                        Side::Right => (&mut w.right_cap, last),
                    };
                    match dir {
                        Direction::Forward => {
                            if *cap != Cap::Cusp || w.features[feat] != Feature::CuspUp {
                                return Err(mismatch("no end cusp next to an upward cusp"));
                            }
                            *cap = Cap::Round;
                            w.features[feat] = Feature::Straight;
                        }
                        Direction::Backward => {
                            if *cap != Cap::Round || w.features[feat] != Feature::Straight {
                                return Err(mismatch("no round cap with a clear gap"));
                            }
                            *cap = Cap::Cusp;
                            w.features[feat] = Feature::CuspUp;
                        }
                    }
                }
                (MoveId::CuspBigon, ..) => unreachable!(),
            }
            let fresh = strip_curve(w, norm).map_err(|e| MoveError::OverlapDetected(e.to_string()))?;
            out.curves[m.curve] = Curve {
                role: curve.role,
                ..fresh
            };
        }
        MoveId::CuspBigon => {
            out.curves[m.curve] = bigon(d, m)?;
        }
    }
    let rep = validate_divide(&out);
    if let Some(v) = rep.violations.first() {
        return Err(MoveError::OverlapDetected(v.to_string()));
    }
    Ok(out)
}

/// Segments of other branches crossed by the open segment `p q`.
fn crossed(d: &DivideWithCusps, p: &Point, q: &Point, skip: (usize, &[usize])) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (ci, c) in d.curves.iter().enumerate() {
        for k in 0..c.segment_count() {
            if ci == skip.0 && skip.1.contains(&k) {
                continue;
            }
            let (r, s) = c.segment(k);
            if let SegmentContact::Cross(_) | SegmentContact::Touch(_) = segment_contact(p, q, r, s) {
                out.push((ci, k));
            }
        }
    }
    out.sort();
    out
}

fn bigon(d: &DivideWithCusps, m: &MoveSpec) -> Result<Curve, MoveError> {
    let c = &d.curves[m.curve];
    let nv = c.vertices.len();
    let ns = c.segment_count();
    if m.segment >= ns {
        return Err(mismatch("segment index out of range"));
    }
    let closed = c.kind == CurveKind::Closed;
    match m.direction {
        Direction::Forward => {
            let (p, q) = c.segment(m.segment);
            let skip: Vec<usize> = neighbours(m.segment, ns, closed);
            let hits = crossed(d, p, q, (m.curve, &skip));
            if hits.len() != 2 {
                return Err(mismatch(format!("segment crosses {} branches, need 2", hits.len())));
            }
            let (a, b) = (d.curves[hits[0].0].segment(hits[0].1), d.curves[hits[1].0].segment(hits[1].1));
            let cross = match segment_contact(a.0, a.1, b.0, b.1) {
                SegmentContact::Cross(x) => x,
                _ => return Err(mismatch("the two branches do not cross")),
            };
            // reflect the segment's foot of the double point through it
            let (dx, dy) = (&q.x - &p.x, &q.y - &p.y);
            let t = ((&cross.x - &p.x) * &dx + (&cross.y - &p.y) * &dy) / (&dx * &dx + &dy * &dy);
            if t <= Rat::zero() || t >= int(1) {
                return Err(mismatch("double point not beside the segment"));
            }
            let foot = Point::new(&p.x + &t * &dx, &p.y + &t * &dy);
            let w = Point::new(int(2) * &cross.x - &foot.x, int(2) * &cross.y - &foot.y);
            let mut nc = c.clone();
            nc.vertices.insert(m.segment + 1, w);
            nc.cusps = c.cusps.iter().map(|&v| if v > m.segment { v + 1 } else { v }).collect();
            nc.strip = None;
            let new_skip = neighbours(m.segment, ns + 1, closed)
                .into_iter()
                .chain(neighbours(m.segment + 1, ns + 1, closed))
                .collect::<Vec<_>>();
            let mut d2 = d.clone();
            d2.curves[m.curve] = nc.clone();
            let (p2, w2) = nc.segment(m.segment);
            let (_, q2) = nc.segment(m.segment + 1);
            let mut h1 = crossed(&d2, p2, w2, (m.curve, &new_skip));
            h1.extend(crossed(&d2, w2, q2, (m.curve, &new_skip)));
            h1.sort();
            if h1 != hits {
                return Err(MoveError::OverlapDetected("bigon region is not empty".into()));
            }
            Ok(nc)
        }
        Direction::Backward => {
            // remove the vertex after `segment`, merging two segments
            let v = (m.segment + 1) % nv;
            if !closed && (v == 0 || v == nv - 1) {
                return Err(mismatch("cannot remove an endpoint"));
            }
            if c.is_cusp(v) || nv <= 3 {
                return Err(mismatch("vertex cannot be removed"));
            }
            let u = m.segment;
            let w = (v + 1) % nv;
            let skip_old = neighbours(u, ns, closed)
                .into_iter()
                .chain(neighbours(v % ns, ns, closed))
                .collect::<Vec<_>>();
            let mut hits = crossed(d, &c.vertices[u], &c.vertices[v], (m.curve, &skip_old));
            hits.extend(crossed(d, &c.vertices[v], &c.vertices[w], (m.curve, &skip_old)));
            hits.sort();
            if hits.len() != 2 {
                return Err(mismatch("corner does not straddle one double point"));
            }
            let mut nc = c.clone();
            nc.vertices.remove(v);
            nc.cusps = c.cusps.iter().map(|&x| if x > v { x - 1 } else { x }).collect();
            nc.strip = None;
            let seg = if v == 0 { nc.vertices.len() - 1 } else { v - 1 };
            let mut d2 = d.clone();
            d2.curves[m.curve] = nc.clone();
            let skip_new = neighbours(seg, nc.segment_count(), closed);
            let (p, q) = nc.segment(seg);
            let now = crossed(&d2, p, q, (m.curve, &skip_new));
            if now != hits {
                return Err(MoveError::OverlapDetected("bigon region is not empty".into()));
            }
            Ok(nc)
        }
    }
}

/// The segment itself and its neighbours on the same curve.
fn neighbours(k: usize, ns: usize, closed: bool) -> Vec<usize> {
    let mut v = vec![k];
    if k > 0 {
        v.push(k - 1);
    } else if closed {
        v.push(ns - 1);
    }
    if k + 1 < ns {
        v.push(k + 1);
    } else if closed {
        v.push(0);
    }
    v
}

/// Moves taking the full strip curve of a chamber to its reduced curve:
/// slide each end cusp inward through its run of lines, then cancel it
/// against the upward cusp it meets.
pub fn reduction_sequence(d: &DivideWithCusps, curve: usize) -> Result<Vec<MoveSpec>, MoveError> {
    let w = d.curves[curve]
        .strip
        .as_ref()
        .ok_or_else(|| mismatch("not a strip curve"))?;
    let mut seq = Vec::new();
    if w.left_cap == Cap::Cusp {
        let mut j = 1;
        while j < w.features.len() && w.features[j] == Feature::Straight {
            seq.push(MoveSpec::slide(curve, Side::Left, Direction::Forward));
            j += 1;
        }
        seq.push(MoveSpec::slide(curve, Side::Left, Direction::Forward));
        seq.push(MoveSpec::cancel(curve, Side::Left, Direction::Forward));
    }
    if w.right_cap == Cap::Cusp {
        let last = w.features.len() - 1;
        let mut j = last - 1;
        while j > 0 && w.features[j] == Feature::Straight {
            seq.push(MoveSpec::slide(curve, Side::Right, Direction::Forward));
            j -= 1;
        }
        seq.push(MoveSpec::slide(curve, Side::Right, Direction::Forward));
        seq.push(MoveSpec::cancel(curve, Side::Right, Direction::Forward));
    }
    Ok(seq)
}

pub fn apply_all(d: &DivideWithCusps, seq: &[MoveSpec]) -> Result<DivideWithCusps, MoveError> {
    let mut cur = d.clone();
    for m in seq {
        cur = apply_move(&cur, m)?;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{fiber_chambers, normalize, Arrangement};
    use crate::divide::{assemble_kirby_divide, AssembleOptions, Domain, Role};
    use crate::rational::rat;

    fn generic4() -> DivideWithCusps {
        let a = Arrangement::from_ints("g4", &[[5, -10, 12], [38, -20, 51], [38, 20, -51], [5, 10, -12]]).unwrap();
        let n = normalize(&a).unwrap();
        let f = fiber_chambers(&n).unwrap();
        assemble_kirby_divide(&n, &f, AssembleOptions::default()).unwrap()
    }

    #[test]
    fn reduction_reaches_the_reduced_curve() {
        let full = generic4();
        let n = full.arrangement.clone().unwrap();
        let f = fiber_chambers(&n).unwrap();
        let reduced = assemble_kirby_divide(&n, &f, AssembleOptions { reduced: true, ..Default::default() }).unwrap();
        let mut cur = full.clone();
        for (ci, _) in full.attaching() {
            let seq = reduction_sequence(&cur, ci).unwrap();
            cur = apply_all(&cur, &seq).unwrap();
        }
        assert_eq!(cur, reduced);
    }

    #[test]
    fn reduced_word_is_constant_along_the_reduction() {
        let full = generic4();
        for (ci, c) in full.attaching() {
            let target = c.strip.as_ref().unwrap().reduced();
            let mut cur = full.clone();
            for m in reduction_sequence(&full, ci).unwrap() {
                cur = apply_move(&cur, &m).unwrap();
                assert_eq!(cur.curves[ci].strip.as_ref().unwrap().reduced(), target, "after {m}");
            }
            assert_eq!(cur.curves[ci].strip.as_ref().unwrap(), &target);
        }
    }

    #[test]
    fn cancel_then_uncancel_is_identity() {
        let d = generic4();
        let (ci, _) = d.attaching().next().unwrap();
        let side = Side::Left;
        let m = MoveSpec::cancel(ci, side, Direction::Backward);
        let there = match apply_move(&d, &m) {
            Ok(x) => x,
            Err(_) => apply_move(&d, &MoveSpec::cancel(ci, Side::Right, Direction::Backward)).unwrap(),
        };
        let back_side = if there.curves[ci].strip.as_ref().unwrap().left_cap
            != d.curves[ci].strip.as_ref().unwrap().left_cap
        {
            Side::Left
        } else {
            Side::Right
        };
        let back = apply_move(&there, &MoveSpec::cancel(ci, back_side, Direction::Forward)).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn plain_circle_has_no_cancel_pattern() {
        let p = |x: i64, y: i64| Point::new(rat(x, 10), rat(y, 10));
        let c = Curve::closed(Role::Plain, vec![p(0, -5), p(3, 0), p(0, 3), p(-3, 0)], vec![0]);
        let d = DivideWithCusps { domain: Domain::Disk, curves: vec![c], arrangement: None };
        let e = apply_move(&d, &MoveSpec::cancel(0, Side::Left, Direction::Forward)).unwrap_err();
        assert!(matches!(e, MoveError::PatternMismatch(_)));
    }

    #[test]
    fn triangle_move_and_back() {
        let p = |x: i64, y: i64| Point::new(rat(x, 10), rat(y, 10));
        // two crossing branches and a third segment passing below their crossing
        let a = Curve::interval(Role::Plain, vec![p(-6, -8), p(6, 8)]);
        let b = Curve::interval(Role::Plain, vec![p(6, -8), p(-6, 8)]);
        let c = Curve::interval(Role::Plain, vec![p(-8, -6), p(-5, -1), p(5, -1), p(8, -6)]);
        let d = DivideWithCusps { domain: Domain::Disk, curves: vec![a, b, c], arrangement: None };
        assert!(validate_divide(&d).is_valid());
        let moved = apply_move(&d, &MoveSpec::bigon(2, 1, Direction::Forward)).unwrap();
        assert_eq!(moved.curves[2].vertices.len(), 5);
        let back = apply_move(&moved, &MoveSpec::bigon(2, 1, Direction::Backward)).unwrap();
        assert_eq!(back, d);
    }
}
