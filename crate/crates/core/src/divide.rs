//! Divides with cusps: PL curves in a rectangle or the unit disk, and the
//! Kirby divide built from a normalized arrangement.
//!
//! Attaching curves are described combinatorially by a [`StripWord`] and
//! realized exactly inside a thin horizontal strip, so the same word always
//! produces the same vertices.

use crate::arrangement::{fmt_signs, FiberChamber, Line, NormalizedArrangement, Point};
use crate::rational::{fmt_rat, int, rat, serde_rat, to_f64, Rat};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Domain {
    /// `[-R, R] x [-1, 1]`.
    Rect(Rat),
    /// The closed unit disk.
    Disk,
}

impl Domain {
    fn strictly_inside(&self, p: &Point) -> bool {
        match self {
            Domain::Rect(r) => p.x.abs() < *r && p.y.abs() < Rat::one(),
            Domain::Disk => &p.x * &p.x + &p.y * &p.y < Rat::one(),
        }
    }

    fn on_boundary(&self, p: &Point) -> bool {
        match self {
            Domain::Rect(r) => {
                let inside = p.x.abs() <= *r && p.y.abs() <= Rat::one();
                inside && (p.x.abs() == *r || p.y.abs() == Rat::one())
            }
            Domain::Disk => &p.x * &p.x + &p.y * &p.y == Rat::one(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CurveKind {
    Closed,
    Interval,
}

/// What a curve stands for in the Kirby picture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    /// The segment of line `i` (0-based) inside the rectangle.
    Dotted(usize),
    /// The curve of fiber chamber `s` (1-based).
    Attaching(usize),
    Plain,
}

impl Role {
    pub fn label(&self, curve_index: usize) -> String {
        match self {
            Role::Dotted(i) => format!("dotted:{}", i + 1),
            Role::Attaching(s) => format!("attaching:{s}"),
            Role::Plain => format!("curve:{curve_index}"),
        }
    }
}

/// End of an attaching curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cap {
    Cusp,
    Round,
}

/// What the lower strand does inside one gap between consecutive lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Feature {
    Straight,
    CuspUp,
    CuspDown,
}

/// Combinatorial description of a strip curve.
///
/// The curve is a thin loop around the horizontal level `level`: an upper
/// strand that is straight, a lower strand carrying features, and a cap at
/// each end. It crosses lines `lo..=hi` (1-based, normalized order). Its
/// left cap sits in gap `lo - 1` and the right cap in gap `hi`, where gap
/// `g` lies between lines `g` and `g + 1`. `features[j]` belongs to gap
/// `lo - 1 + j`, so the first and last entries describe the lower strand
/// between a cap and the nearest line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StripWord {
    pub index: usize,
    #[serde(with = "serde_rat")]
    pub level: Rat,
    #[serde(with = "serde_rat")]
    pub half_width: Rat,
    pub lo: usize,
    pub hi: usize,
    pub left_cap: Cap,
    pub right_cap: Cap,
    pub features: Vec<Feature>,
}

impl StripWord {
    /// The curve for a chamber on the full window, or on its reduced
    /// window `[first -, last +]`.
    pub fn from_signs(index: usize, level: Rat, half_width: Rat, signs: &[i8], reduced: bool) -> Self {
        let n = signs.len();
        let (lo, hi) = if reduced {
            let m1 = signs.iter().position(|&s| s < 0).map(|i| i + 1).unwrap_or(1);
            let m2 = signs.iter().rposition(|&s| s > 0).map(|i| i + 1).unwrap_or(n);
            (m1, m2)
        } else {
            (1, n)
        };
        let d = &signs[lo - 1..hi];
        let left_cap = if d[0] > 0 { Cap::Cusp } else { Cap::Round };
        let right_cap = if d[d.len() - 1] < 0 { Cap::Cusp } else { Cap::Round };
        let mut features = vec![Feature::Straight];
        for w in d.windows(2) {
            features.push(match (w[0], w[1]) {
                (1, -1) => Feature::CuspUp,
                (-1, 1) => Feature::CuspDown,
                _ => Feature::Straight,
            });
        }
        features.push(Feature::Straight);
        StripWord {
            index,
            level,
            half_width,
            lo,
            hi,
            left_cap,
            right_cap,
            features,
        }
    }

    /// Chamber signs over the window `lo..=hi`, read back from the caps and
    /// features. A left cusp cap counts as `+` in its gap and a round one as
    /// `-`, so words midway through a slide read back correctly too.
    pub fn signs(&self) -> Vec<i8> {
        let mut cur: i8 = if self.left_cap == Cap::Cusp { 1 } else { -1 };
        let mut out = Vec::with_capacity(self.features.len() - 1);
        for f in &self.features[..self.features.len() - 1] {
            cur = match f {
                Feature::CuspUp => -1,
                Feature::CuspDown => 1,
                Feature::Straight => cur,
            };
            out.push(cur);
        }
        out
    }

    /// The word on the reduced window of the same chamber.
    pub fn reduced(&self) -> StripWord {
        let mut w = StripWord::from_signs(self.index, self.level.clone(), self.half_width.clone(), &self.signs(), true);
        w.lo += self.lo - 1;
        w.hi += self.lo - 1;
        w
    }

    pub fn cusp_count(&self) -> usize {
        let caps = [self.left_cap, self.right_cap].iter().filter(|&&c| c == Cap::Cusp).count();
        caps + self.features.iter().filter(|&&f| f != Feature::Straight).count()
    }

    pub fn check_shape(&self, n_lines: usize) -> Result<(), DivideError> {
        if self.lo == 0 || self.lo > self.hi || self.hi > n_lines {
            return Err(DivideError::BadWord(format!(
                "window [{}, {}] for {n_lines} lines",
                self.lo, self.hi
            )));
        }
        if self.features.len() != self.hi - self.lo + 2 {
            return Err(DivideError::BadWord("feature count does not match window".into()));
        }
        Ok(())
    }
}

impl fmt::Display for StripWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cap = |c: Cap, left: bool| match (c, left) {
            (Cap::Cusp, true) => "<",
            (Cap::Cusp, false) => ">",
            (Cap::Round, true) => "(",
            (Cap::Round, false) => ")",
        };
        write!(f, "{}", cap(self.left_cap, true))?;
        for (j, ft) in self.features.iter().enumerate() {
            let c = match ft {
                Feature::Straight => "-",
                Feature::CuspUp => "^",
                Feature::CuspDown => "v",
            };
            write!(f, "{c}")?;
            if j + 1 < self.features.len() {
                write!(f, "|{}", self.lo + j)?;
            }
        }
        write!(f, "{}", cap(self.right_cap, false))
    }
}

/// A PL curve. For closed curves the last vertex connects to the first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curve {
    pub kind: CurveKind,
    pub role: Role,
    pub vertices: Vec<Point>,
    /// Sorted indices of cusp vertices.
    pub cusps: Vec<usize>,
    /// Present for strip curves, so moves can rewrite them.
    pub strip: Option<StripWord>,
}

impl Curve {
    pub fn closed(role: Role, vertices: Vec<Point>, cusps: Vec<usize>) -> Self {
        Curve {
            kind: CurveKind::Closed,
            role,
            vertices,
            cusps,
            strip: None,
        }
    }

    pub fn interval(role: Role, vertices: Vec<Point>) -> Self {
        Curve {
            kind: CurveKind::Interval,
            role,
            vertices,
            cusps: Vec::new(),
            strip: None,
        }
    }

    pub fn segment_count(&self) -> usize {
        match self.kind {
            CurveKind::Closed => self.vertices.len(),
            CurveKind::Interval => self.vertices.len().saturating_sub(1),
        }
    }

    pub fn segment(&self, k: usize) -> (&Point, &Point) {
        let n = self.vertices.len();
        (&self.vertices[k], &self.vertices[(k + 1) % n])
    }

    pub fn is_cusp(&self, v: usize) -> bool {
        self.cusps.binary_search(&v).is_ok()
    }

    pub fn translated(&self, dx: &Rat, dy: &Rat) -> Curve {
        let mut c = self.clone();
        for v in &mut c.vertices {
            v.x += dx;
            v.y += dy;
        }
        c
    }

    pub fn to_f64(&self) -> Vec<[f64; 2]> {
        self.vertices.iter().map(|p| p.to_f64()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivideWithCusps {
    pub domain: Domain,
    pub curves: Vec<Curve>,
    /// The arrangement strip curves are realized against.
    pub arrangement: Option<NormalizedArrangement>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DivideError {
    #[error("invalid divide JSON: {0}")]
    Json(String),
    #[error("malformed strip word: {0}")]
    BadWord(String),
    #[error("curve does not fit its strip: {0}")]
    Layout(String),
    #[error("no arrangement attached to the divide")]
    NoArrangement,
}

/// One way a divide fails the definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    TooFewVertices { curve: usize },
    RepeatedVertex { curve: usize, vertex: usize },
    VertexOutside { curve: usize, vertex: usize },
    EndpointOffBoundary { curve: usize, vertex: usize },
    EndpointNotTransverse { curve: usize, vertex: usize },
    SharedEndpoint { first: usize, second: usize },
    CuspAtEndpoint { curve: usize, vertex: usize },
    CuspNotSharp { curve: usize, vertex: usize },
    CornerTooSharp { curve: usize, vertex: usize },
    /// Two branches touch without crossing transversally.
    Tangency { at: Point },
    /// A cusp lies on another branch.
    CuspOnBranch { curve: usize, vertex: usize },
    TriplePoint { at: Point },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            TooFewVertices { curve } => write!(f, "curve {curve}: too few vertices"),
            RepeatedVertex { curve, vertex } => write!(f, "curve {curve}: vertex {vertex} repeats its predecessor"),
            VertexOutside { curve, vertex } => write!(f, "curve {curve}: vertex {vertex} not in the interior"),
            EndpointOffBoundary { curve, vertex } => write!(f, "curve {curve}: endpoint {vertex} not on the boundary"),
            EndpointNotTransverse { curve, vertex } => {
                write!(f, "curve {curve}: endpoint {vertex} meets the boundary tangentially")
            }
            SharedEndpoint { first, second } => write!(f, "curves {first} and {second} share a boundary point"),
            CuspAtEndpoint { curve, vertex } => write!(f, "curve {curve}: cusp at endpoint {vertex}"),
            CuspNotSharp { curve, vertex } => write!(f, "curve {curve}: cusp {vertex} is not a reversal"),
            CornerTooSharp { curve, vertex } => {
                write!(f, "curve {curve}: smooth vertex {vertex} turns by 90 degrees or more")
            }
            Tangency { at } => write!(f, "non-transversal double point at {at}"),
            CuspOnBranch { curve, vertex } => write!(f, "curve {curve}: cusp {vertex} lies on a branch"),
            TriplePoint { at } => write!(f, "triple point at {at}"),
        }
    }
}

/// A crossing point with the (curve, segment) pair of each branch.
pub type DoublePoint = (Point, (usize, usize), (usize, usize));

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Transversal double points, each with the two (curve, segment) pairs.
    pub double_points: Vec<DoublePoint>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn sub(a: &Point, b: &Point) -> (Rat, Rat) {
    (&a.x - &b.x, &a.y - &b.y)
}

fn cross(u: &(Rat, Rat), v: &(Rat, Rat)) -> Rat {
    &u.0 * &v.1 - &u.1 * &v.0
}

fn dot(u: &(Rat, Rat), v: &(Rat, Rat)) -> Rat {
    &u.0 * &v.0 + &u.1 * &v.1
}

fn orient(a: &Point, b: &Point, c: &Point) -> i8 {
    crate::rational::sign(&cross(&sub(b, a), &sub(c, a)))
}

fn on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    orient(a, b, p) == 0
        && crate::rational::min_rat(&a.x, &b.x) <= &p.x
        && &p.x <= crate::rational::max_rat(&a.x, &b.x)
        && crate::rational::min_rat(&a.y, &b.y) <= &p.y
        && &p.y <= crate::rational::max_rat(&a.y, &b.y)
}

/// How two closed segments meet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SegmentContact {
    Disjoint,
    /// Interiors cross at one point.
    Cross(Point),
    /// Any other contact; the point is one place where they touch.
    Touch(Point),
}

pub fn segment_contact(a: &Point, b: &Point, c: &Point, d: &Point) -> SegmentContact {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 {
        if o1 != o2 && o3 != o4 {
            let r = sub(b, a);
            let s = sub(d, c);
            let t = cross(&sub(c, a), &s) / cross(&r, &s);
            return SegmentContact::Cross(Point::new(&a.x + &t * &r.0, &a.y + &t * &r.1));
        }
        return SegmentContact::Disjoint;
    }
    for (p, q, r) in [(c, a, b), (d, a, b), (a, c, d), (b, c, d)] {
        if on_segment(p, q, r) {
            return SegmentContact::Touch(p.clone());
        }
    }
    SegmentContact::Disjoint
}

#[derive(Clone)]
struct SegBox {
    curve: usize,
    seg: usize,
    lo: [f64; 2],
    hi: [f64; 2],
}

/// Checks every condition of the definition of a divide with cusps.
pub fn validate_divide(d: &DivideWithCusps) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let mut endpoints: Vec<(Point, usize)> = Vec::new();
    for (ci, c) in d.curves.iter().enumerate() {
        let n = c.vertices.len();
        let min = if c.kind == CurveKind::Closed { 3 } else { 2 };
        if n < min {
            rep.violations.push(Violation::TooFewVertices { curve: ci });
            continue;
        }
        for k in 0..c.segment_count() {
            let (p, q) = c.segment(k);
            if p == q {
                rep.violations.push(Violation::RepeatedVertex { curve: ci, vertex: (k + 1) % n });
            }
        }
        for (vi, v) in c.vertices.iter().enumerate() {
            let is_end = c.kind == CurveKind::Interval && (vi == 0 || vi == n - 1);
            if is_end {
                if !d.domain.on_boundary(v) {
                    rep.violations.push(Violation::EndpointOffBoundary { curve: ci, vertex: vi });
                } else {
                    let inner = if vi == 0 { &c.vertices[1] } else { &c.vertices[n - 2] };
                    let transverse = match &d.domain {
                        Domain::Disk => !dot(&sub(inner, v), &(v.x.clone(), v.y.clone())).is_zero(),
                        Domain::Rect(r) => {
                            let corner = v.x.abs() == *r && v.y.abs() == Rat::one();
                            let mid = pt((&v.x + &inner.x) / int(2), (&v.y + &inner.y) / int(2));
                            !corner && d.domain.strictly_inside(&mid)
                        }
                    };
                    if !transverse {
                        rep.violations.push(Violation::EndpointNotTransverse { curve: ci, vertex: vi });
                    }
                    endpoints.push((v.clone(), ci));
                }
                if c.is_cusp(vi) {
                    rep.violations.push(Violation::CuspAtEndpoint { curve: ci, vertex: vi });
                }
                continue;
            }
            if !d.domain.strictly_inside(v) {
                rep.violations.push(Violation::VertexOutside { curve: ci, vertex: vi });
            }
            let prev = &c.vertices[(vi + n - 1) % n];
            let next = &c.vertices[(vi + 1) % n];
            let turn = dot(&sub(v, prev), &sub(next, v));
            if c.is_cusp(vi) {
                if !turn.is_negative() {
                    rep.violations.push(Violation::CuspNotSharp { curve: ci, vertex: vi });
                }
            } else if !turn.is_positive() {
                rep.violations.push(Violation::CornerTooSharp { curve: ci, vertex: vi });
            }
        }
    }
    for i in 0..endpoints.len() {
        for j in i + 1..endpoints.len() {
            if endpoints[i].0 == endpoints[j].0 {
                rep.violations.push(Violation::SharedEndpoint {
                    first: endpoints[i].1,
                    second: endpoints[j].1,
                });
            }
        }
    }

    // pairwise segment contacts, float boxes as a prefilter
    let mut boxes = Vec::new();
    for (ci, c) in d.curves.iter().enumerate() {
        if c.vertices.len() < 2 {
            continue;
        }
        for k in 0..c.segment_count() {
            let (p, q) = c.segment(k);
            let (p, q) = (p.to_f64(), q.to_f64());
            let pad = 1e-9 * (1.0 + p[0].abs().max(p[1].abs()).max(q[0].abs()).max(q[1].abs()));
            boxes.push(SegBox {
                curve: ci,
                seg: k,
                lo: [p[0].min(q[0]) - pad, p[1].min(q[1]) - pad],
                hi: [p[0].max(q[0]) + pad, p[1].max(q[1]) + pad],
            });
        }
    }
    boxes.sort_by(|a, b| a.lo[0].total_cmp(&b.lo[0]));
    let mut crossings: BTreeMap<Point, usize> = BTreeMap::new();
    for i in 0..boxes.len() {
        for j in i + 1..boxes.len() {
            let (a, b) = (&boxes[i], &boxes[j]);
            if b.lo[0] > a.hi[0] {
                break;
            }
            if b.lo[1] > a.hi[1] || a.lo[1] > b.hi[1] {
                continue;
            }
            let ca = &d.curves[a.curve];
            let cb = &d.curves[b.curve];
            let (p, q) = ca.segment(a.seg);
            let (r, s) = cb.segment(b.seg);
            let contact = segment_contact(p, q, r, s);
            let adjacent = a.curve == b.curve && {
                let m = ca.segment_count();
                let n = ca.vertices.len();
                let closed = ca.kind == CurveKind::Closed;
                let (x, y) = (a.seg.min(b.seg), a.seg.max(b.seg));
                y == x + 1 || (closed && x == 0 && y == m - 1 && m == n)
            };
            match contact {
                SegmentContact::Disjoint => {}
                SegmentContact::Cross(pt) => {
                    *crossings.entry(pt.clone()).or_default() += 1;
                    rep.double_points.push((pt, (a.curve, a.seg), (b.curve, b.seg)));
                }
                SegmentContact::Touch(pt) => {
                    if adjacent {
                        // only the shared vertex is allowed
                        let shared = if a.seg.min(b.seg) + 1 == a.seg.max(b.seg) {
                            a.seg.max(b.seg)
                        } else {
                            0
                        };
                        let v = &ca.vertices[shared];
                        let (other_a, other_b) = (
                            if p == v { q } else { p },
                            if r == v { s } else { r },
                        );
                        let overlap = on_segment(other_a, r, s) || on_segment(other_b, p, q);
                        if &pt == v && !overlap {
                            continue;
                        }
                    }
                    let cusp = [(a.curve, p, a.seg), (a.curve, q, a.seg + 1), (b.curve, r, b.seg), (b.curve, s, b.seg + 1)]
                        .into_iter()
                        .find_map(|(ci, v, vi)| {
                            let c = &d.curves[ci];
                            let vi = vi % c.vertices.len();
                            (v == &pt && c.is_cusp(vi)).then_some((ci, vi))
                        });
                    match cusp {
                        Some((curve, vertex)) => rep.violations.push(Violation::CuspOnBranch { curve, vertex }),
                        None => rep.violations.push(Violation::Tangency { at: pt }),
                    }
                }
            }
        }
    }
    for (pt, k) in crossings {
        if k > 1 {
            rep.violations.push(Violation::TriplePoint { at: pt });
        }
    }
    rep
}

/// The extent of gap `g` (between lines `g` and `g + 1`) across the strip
/// `level - eps < x2 < level + eps`, as an open interval of `x1`.
fn gap_interval(lines: &[Line], g: usize, level: &Rat, eps: &Rat) -> (Rat, Rat) {
    let lo_y = level - eps;
    let hi_y = level + eps;
    let span = |i: usize| {
        let a = lines[i].x_at(&lo_y).unwrap();
        let b = lines[i].x_at(&hi_y).unwrap();
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    };
    let outer = rat(1, 2);
    match (g, lines.len()) {
        (0, _) => {
            let u = span(0).0;
            (&u - &outer, u)
        }
        (g, n) if g == n => {
            let l = span(n - 1).1;
            (l.clone(), l + outer)
        }
        (g, _) => (span(g - 1).1, span(g).0),
    }
}

fn pt(x: Rat, y: Rat) -> Point {
    Point::new(x, y)
}

/// Whether a strip word is drawn as the curve itself or as its framing
/// companion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    Curve,
    Companion,
}

/// Exact vertices of a strip word. The loop starts at the left cap, runs
/// right along the lower strand and back along the upper strand.
pub fn realize_word(
    word: &StripWord,
    norm: &NormalizedArrangement,
    placement: Placement,
) -> Result<(Vec<Point>, Vec<usize>), DivideError> {
    word.check_shape(norm.lines.len())?;
    let lines = &norm.lines;
    let h = &word.level;
    let eps = &word.half_width;
    let gaps: Vec<(Rat, Rat)> = (word.lo - 1..=word.hi)
        .map(|g| gap_interval(lines, g, h, eps))
        .collect();
    let mut t = eps / int(2);
    for (l, u) in &gaps {
        if l >= u {
            return Err(DivideError::Layout(format!("empty gap in strip {}", word.index)));
        }
        let w = (u - l) / int(8);
        if w < t {
            t = w;
        }
    }
    if gaps[0].0 <= -norm.r.clone() || gaps[gaps.len() - 1].1 >= norm.r {
        return Err(DivideError::Layout("strip curve leaves the rectangle".into()));
    }
    let up = h + &t;
    let low = h - &t;
    let half = |v: &Rat| v / int(2);

    // lower-strand vertices of a feature centred at c, left to right
    let feature_pts = |f: Feature, c: &Rat, out: &mut Vec<Point>, cusps: &mut Vec<usize>| {
        let (sx, sy) = match f {
            Feature::Straight => return,
            Feature::CuspUp => (half(&t), &t * rat(3, 2)),
            Feature::CuspDown => (half(&t), half(&t)),
        };
        let dir = if f == Feature::CuspUp { int(1) } else { int(-1) };
        // branch x = -s^3, y = -s^2 relative to the tip, s = 1, 1/2, 1/4
        let tip_y = &low + &dir * &sy;
        let arm = [(int(1), int(1)), (rat(1, 8), rat(1, 4)), (rat(1, 64), rat(1, 16))];
        for (ax, ay) in arm.iter() {
            out.push(pt(c - ax * &sx, &tip_y - &dir * ay * &sy));
        }
        cusps.push(out.len());
        out.push(pt(c.clone(), tip_y.clone()));
        for (ax, ay) in arm.iter().rev() {
            out.push(pt(c + ax * &sx, &tip_y - &dir * ay * &sy));
        }
    };

    let mut vs: Vec<Point> = Vec::new();
    let mut cusps: Vec<usize> = Vec::new();
    // a companion has its caps pushed outward and is lifted by much less,
    // so each cusp tip stays outside the other curve's wedge
    let (spread, lift) = match placement {
        Placement::Curve => (Rat::zero(), Rat::zero()),
        Placement::Companion => {
            let spread = &t / int(2);
            let lift = &t / int(16);
            (spread, lift)
        }
    };
    let (l0, u0) = &gaps[0];
    let left_x = l0 + (u0 - l0) / int(4) - &spread;
    let g_last = gaps.len() - 1;
    let (ln, un) = &gaps[g_last];
    let right_x = un - (un - ln) / int(4) + &spread;
    // cap arms x = s^2, y = s^3 from the tip, s = 1/4, 1/2, 1
    let arm = [(rat(1, 16), rat(1, 64)), (rat(1, 4), rat(1, 8)), (int(1), int(1))];

    match word.left_cap {
        Cap::Cusp => {
            cusps.push(0);
            vs.push(pt(left_x.clone(), h.clone()));
            for (ax, ay) in &arm {
                vs.push(pt(&left_x + ax * &t, h - ay * &t));
            }
        }
        Cap::Round => {
            vs.push(pt(left_x.clone(), h + half(&t)));
            vs.push(pt(left_x.clone(), h - half(&t)));
            vs.push(pt(&left_x + half(&t), low.clone()));
            vs.push(pt(&left_x + &t, low.clone()));
        }
    }
    for (j, f) in word.features.iter().enumerate() {
        let (l, u) = &gaps[j];
        let w = u - l;
        let c = if j == 0 {
            l + &w * rat(5, 8)
        } else if j == g_last {
            l + &w * rat(3, 8)
        } else {
            (l + u) / int(2)
        };
        feature_pts(*f, &c, &mut vs, &mut cusps);
    }
    match word.right_cap {
        Cap::Cusp => {
            for (ax, ay) in arm.iter().rev() {
                vs.push(pt(&right_x - ax * &t, h - ay * &t));
            }
            cusps.push(vs.len());
            vs.push(pt(right_x.clone(), h.clone()));
            for (ax, ay) in &arm {
                vs.push(pt(&right_x - ax * &t, h + ay * &t));
            }
        }
        Cap::Round => {
            vs.push(pt(&right_x - &t, low.clone()));
            vs.push(pt(&right_x - half(&t), low.clone()));
            vs.push(pt(right_x.clone(), h - half(&t)));
            vs.push(pt(right_x.clone(), h + half(&t)));
            vs.push(pt(&right_x - half(&t), up.clone()));
            vs.push(pt(&right_x - &t, up.clone()));
        }
    }
    // upper strand back to the left cap
    match word.left_cap {
        Cap::Cusp => {
            for (ax, ay) in arm.iter().rev() {
                vs.push(pt(&left_x + ax * &t, h + ay * &t));
            }
        }
        Cap::Round => {
            vs.push(pt(&left_x + &t, up.clone()));
            vs.push(pt(&left_x + half(&t), up.clone()));
        }
    }
    for v in &mut vs {
        v.y += &lift;
    }
    // drop collinear repeats along the strands
    let mut clean: Vec<Point> = Vec::with_capacity(vs.len());
    let mut clean_cusps = Vec::new();
    let n = vs.len();
    for i in 0..n {
        let is_cusp = cusps.contains(&i);
        let prev = &vs[(i + n - 1) % n];
        let next = &vs[(i + 1) % n];
        if !is_cusp && orient(prev, &vs[i], next) == 0 && dot(&sub(&vs[i], prev), &sub(next, &vs[i])).is_positive() {
            continue;
        }
        if is_cusp {
            clean_cusps.push(clean.len());
        }
        clean.push(vs[i].clone());
    }
    Ok((clean, clean_cusps))
}

/// Strip level and half width for chamber `s` of `b`.
pub fn strip_params(s: usize, b: usize) -> (Rat, Rat) {
    let b1 = (b + 1) as i64;
    (Rat::one() - rat(s as i64, b1), rat(1, 4 * b1))
}

/// Which strip each chamber gets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StripOrder {
    /// Lowest base point gets the highest strip.
    #[default]
    ByHeight,
    Reversed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AssembleOptions {
    pub reduced: bool,
    pub order: StripOrder,
}

/// The dotted segment of line `i` across the rectangle.
pub fn dotted_segment(norm: &NormalizedArrangement, i: usize) -> Curve {
    let l = &norm.lines[i];
    let bottom = pt(l.x_at(&int(-1)).unwrap(), int(-1));
    let top = pt(l.x_at(&int(1)).unwrap(), int(1));
    Curve::interval(Role::Dotted(i), vec![bottom, top])
}

pub fn strip_curve(word: StripWord, norm: &NormalizedArrangement) -> Result<Curve, DivideError> {
    let (vertices, cusps) = realize_word(&word, norm, Placement::Curve)?;
    Ok(Curve {
        kind: CurveKind::Closed,
        role: Role::Attaching(word.index),
        vertices,
        cusps,
        strip: Some(word),
    })
}

/// Dotted segments followed by one strip curve per fiber chamber.
pub fn assemble_kirby_divide(
    norm: &NormalizedArrangement,
    fibers: &[FiberChamber],
    opts: AssembleOptions,
) -> Result<DivideWithCusps, DivideError> {
    let mut curves: Vec<Curve> = (0..norm.lines.len()).map(|i| dotted_segment(norm, i)).collect();
    let b = fibers.len();
    for fc in fibers {
        let slot = match opts.order {
            StripOrder::ByHeight => fc.index,
            StripOrder::Reversed => b + 1 - fc.index,
        };
        let (level, eps) = strip_params(slot, b);
        let word = StripWord::from_signs(fc.index, level, eps, &fc.sign_vector, opts.reduced);
        curves.push(strip_curve(word, norm)?);
    }
    Ok(DivideWithCusps {
        domain: Domain::Rect(norm.r.clone()),
        curves,
        arrangement: Some(norm.clone()),
    })
}

/// Framing companion of a strip curve: the same word drawn with its caps
/// pushed slightly outward and raised by a much smaller amount. The two
/// curves cross once near each cap, on the lower strand, whatever the cap
/// types; a rigid translate would instead put a cusp tip inside the other
/// curve's wedge at one end.
pub fn pushoff_curve(c: &Curve, norm: &NormalizedArrangement) -> Result<Curve, DivideError> {
    let word = c
        .strip
        .as_ref()
        .ok_or_else(|| DivideError::BadWord("pushoff needs a strip curve".into()))?;
    let (vertices, cusps) = realize_word(word, norm, Placement::Companion)?;
    Ok(Curve {
        kind: CurveKind::Closed,
        role: c.role,
        vertices,
        cusps,
        strip: None,
    })
}

impl DivideWithCusps {
    pub fn attaching(&self) -> impl Iterator<Item = (usize, &Curve)> {
        self.curves
            .iter()
            .enumerate()
            .filter(|(_, c)| matches!(c.role, Role::Attaching(_)))
    }

    /// Rebuilds strip curves from their words.
    pub fn rerealize(&mut self) -> Result<(), DivideError> {
        let norm = self.arrangement.as_ref().ok_or(DivideError::NoArrangement)?.clone();
        for c in &mut self.curves {
            if let Some(w) = &c.strip {
                let fresh = strip_curve(w.clone(), &norm)?;
                c.vertices = fresh.vertices;
                c.cusps = fresh.cusps;
            }
        }
        Ok(())
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let domain = match &self.domain {
            Domain::Rect(r) => serde_json::json!({ "rect": fmt_rat(r) }),
            Domain::Disk => serde_json::json!("disk"),
        };
        let curves: Vec<serde_json::Value> = self
            .curves
            .iter()
            .map(|c| {
                let role = match c.role {
                    Role::Dotted(i) => serde_json::json!({ "dotted": i }),
                    Role::Attaching(s) => serde_json::json!({ "attaching": s }),
                    Role::Plain => serde_json::json!("plain"),
                };
                let verts: Vec<[String; 2]> =
                    c.vertices.iter().map(|p| [fmt_rat(&p.x), fmt_rat(&p.y)]).collect();
                let mut obj = serde_json::Map::new();
                obj.insert(
                    "kind".into(),
                    match c.kind {
                        CurveKind::Closed => "closed",
                        CurveKind::Interval => "interval",
                    }
                    .into(),
                );
                obj.insert("role".into(), role);
                obj.insert("vertices".into(), serde_json::to_value(verts).unwrap());
                obj.insert("cusps".into(), serde_json::to_value(&c.cusps).unwrap());
                if let Some(w) = &c.strip {
                    obj.insert("strip".into(), serde_json::to_value(w).unwrap());
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        let mut obj = serde_json::Map::new();
        obj.insert("domain".into(), domain);
        obj.insert("curves".into(), curves.into());
        if let Some(a) = &self.arrangement {
            obj.insert("arrangement".into(), a.to_json_value());
        }
        serde_json::Value::Object(obj)
    }

    pub fn from_json(text: &str) -> Result<Self, DivideError> {
        let raw: RawDivide = serde_json::from_str(text).map_err(|e| DivideError::Json(e.to_string()))?;
        let domain = match raw.domain {
            RawDomain::Named(s) if s == "disk" => Domain::Disk,
            RawDomain::Named(s) => return Err(DivideError::Json(format!("unknown domain {s:?}"))),
            RawDomain::Rect { rect } => Domain::Rect(
                serde_rat::value_to_rat(&rect).map_err(|e| DivideError::Json(e.to_string()))?,
            ),
        };
        let mut curves = Vec::new();
        for rc in raw.curves {
            let kind = match rc.kind.as_str() {
                "closed" => CurveKind::Closed,
                "interval" => CurveKind::Interval,
                k => return Err(DivideError::Json(format!("unknown curve kind {k:?}"))),
            };
            let role = match rc.role {
                RawRole::Named(s) if s == "plain" => Role::Plain,
                RawRole::Named(s) => return Err(DivideError::Json(format!("unknown role {s:?}"))),
                RawRole::Dotted { dotted } => Role::Dotted(dotted),
                RawRole::Attaching { attaching } => Role::Attaching(attaching),
            };
            let mut vertices = Vec::new();
            for v in rc.vertices {
                if v.len() != 2 {
                    return Err(DivideError::Json("vertex needs two coordinates".into()));
                }
                let q = |x: &serde_json::Value| serde_rat::value_to_rat(x).map_err(|e| DivideError::Json(e.to_string()));
                vertices.push(pt(q(&v[0])?, q(&v[1])?));
            }
            let mut cusps = rc.cusps;
            cusps.sort_unstable();
            cusps.dedup();
            curves.push(Curve {
                kind,
                role,
                vertices,
                cusps,
                strip: rc.strip,
            });
        }
        let arrangement = match raw.arrangement {
            Some(v) => Some(
                NormalizedArrangement::from_json(&v.to_string()).map_err(|e| DivideError::Json(e.to_string()))?,
            ),
            None => None,
        };
        Ok(DivideWithCusps {
            domain,
            curves,
            arrangement,
        })
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawDomain {
    Named(String),
    Rect { rect: serde_json::Value },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawRole {
    Named(String),
    Dotted { dotted: usize },
    Attaching { attaching: usize },
}

#[derive(Deserialize)]
struct RawCurve {
    kind: String,
    role: RawRole,
    vertices: Vec<Vec<serde_json::Value>>,
    #[serde(default)]
    cusps: Vec<usize>,
    #[serde(default)]
    strip: Option<StripWord>,
}

#[derive(Deserialize)]
struct RawDivide {
    domain: RawDomain,
    curves: Vec<RawCurve>,
    #[serde(default)]
    arrangement: Option<serde_json::Value>,
}

/// Plain-text summary of the strip curves, one line per chamber.
pub fn describe_words(d: &DivideWithCusps) -> String {
    let mut s = String::new();
    for (_, c) in d.attaching() {
        if let Some(w) = &c.strip {
            s.push_str(&format!(
                "s={:<2} level={:<8} window=[{},{}] cusps={} {}\n",
                w.index,
                fmt_rat(&w.level),
                w.lo,
                w.hi,
                w.cusp_count(),
                w
            ));
        }
    }
    s
}

/// Sign pattern string used in tables.
pub fn signs_label(v: &[i8]) -> String {
    fmt_signs(v)
}

/// Float copy of the divide's curves, used by renderers.
pub fn curves_f64(d: &DivideWithCusps) -> Vec<Vec<[f64; 2]>> {
    d.curves.iter().map(|c| c.to_f64()).collect()
}

/// The rectangle half width, if any.
pub fn rect_half_width(d: &DivideWithCusps) -> Option<f64> {
    match &d.domain {
        Domain::Rect(r) => Some(to_f64(r)),
        Domain::Disk => None,
    }
}
