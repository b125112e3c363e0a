//! Lifting divides to links in the 3-sphere, the complement test and the
//! retraction of the rectangle model, and the four-edge attaching circles.
//!
//! Rectangle-domain divides are lifted into the boundary of
//! `Rect(R,1) x [-1,1]^2` (sup-norm fibers of radius
//! `delta(x) = dist(x, boundary)`), which keeps the lift exact and piecewise
//! linear. The result is carried to the round sphere by radial projection.
//! Disk-domain divides use the round fiber `sqrt(1 - |x|^2)` directly.

use crate::arrangement::{Arrangement, FiberChamber, NormalizedArrangement, Point};
use crate::divide::{pushoff_curve, Curve, CurveKind, DivideError, DivideWithCusps, Domain, Role};
use crate::rational::{int, rat, to_f64, Rat};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};

/// A point of `R^4 = C^2` written `(x1, x2, y1, y2)`.
pub type Exact4 = [Rat; 4];

/// `(x, y)` lies in the complement: whenever `x` is on line `i`,
/// `y` is not parallel to it.
pub fn complement_membership(arr: &Arrangement, x: &Point, y: (&Rat, &Rat)) -> bool {
    arr.lines.iter().all(|l| !l.eval(x).is_zero() || !(&l.a * y.0 + &l.b * y.1).is_zero())
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LiftError {
    #[error("point outside the retraction domain: {0}")]
    DomainViolation(String),
    #[error(transparent)]
    Divide(#[from] DivideError),
    #[error("lift is not embedded: separation {separation:e} below {threshold:e}")]
    NotEmbedded { separation: f64, threshold: f64 },
    #[error("lift failed: {0}")]
    Other(String),
}

/// The deformation retraction of the thickened rectangle onto the region
/// `x2 <= 1 - |y|_inf`.
#[derive(Debug, Clone)]
pub struct Retraction {
    pub r: Rat,
}

impl Retraction {
    pub fn new(norm: &NormalizedArrangement) -> Self {
        Retraction { r: norm.r.clone() }
    }

    /// `|y|_inf <= 1`, and above height 1 the point lies under both
    /// diagonals `x2 = R -+ x1` with `y != 0` (otherwise the slide has no
    /// direction).
    pub fn in_domain(&self, x: &Point, y: (&Rat, &Rat)) -> bool {
        let m = y.0.abs().max(y.1.abs());
        let one = Rat::one();
        if m > one {
            return false;
        }
        if x.y >= one && (x.y > &x.x + &self.r || x.y > -&x.x + &self.r) {
            return false;
        }
        !(x.y > one && m.is_zero())
    }

    /// `sigma(p)`: slide `x` along `y` down to height `1 - |y|_inf`.
    pub fn retract(&self, x: &Point, y: (&Rat, &Rat)) -> Result<Point, LiftError> {
        if !self.in_domain(x, y) {
            return Err(LiftError::DomainViolation(format!("{x}")));
        }
        let m = y.0.abs().max(y.1.abs());
        let floor = Rat::one() - &m;
        if x.y <= floor {
            return Ok(x.clone());
        }
        let excess = &x.y - &floor;
        let shift = if y.0.abs() <= y.1.abs() {
            y.0 / y.1 * &excess
        } else {
            y.1 / y.0 * &excess
        };
        Ok(Point::new(&x.x - shift, floor))
    }

    /// `(1 - t) p + t sigma(p)`.
    pub fn homotopy(&self, x: &Point, y: (&Rat, &Rat), t: &Rat) -> Result<Point, LiftError> {
        let s = self.retract(x, y)?;
        let one = Rat::one();
        Ok(Point::new(
            (&one - t) * &x.x + t * &s.x,
            (&one - t) * &x.y + t * &s.y,
        ))
    }
}

/// `dist(x, boundary of [-R,R] x [-1,1])`.
pub fn rect_depth(r: &Rat, x: &Point) -> Rat {
    let one = Rat::one();
    let c = [&x.x + r, r - &x.x, &x.y + &one, &one - &x.y];
    c.into_iter().min().unwrap()
}

/// The attaching circle of the rectangle model between `a1` and `a2`
/// (same height `b`): four straight edges, one per side of the parameter
/// square, with `y` running once around the square of radius `1 - b`.
pub fn fs_circle(a1: &Point, a2: &Point) -> Vec<Exact4> {
    assert_eq!(a1.y, a2.y, "endpoints must share a height");
    let b = &a1.y;
    let c = Rat::one() - b;
    let m = -c.clone();
    vec![
        [a1.x.clone(), b.clone(), m.clone(), m.clone()],
        [a2.x.clone(), b.clone(), c.clone(), m.clone()],
        [a1.x.clone(), b.clone(), c.clone(), c.clone()],
        [a2.x.clone(), b.clone(), m.clone(), c.clone()],
    ]
}

/// Points of the open segment strictly between consecutive vertices where
/// the depth function changes which side it measures.
fn depth_breaks(r: &Rat, p: &Point, q: &Point) -> Vec<Rat> {
    let one = Rat::one();
    // forms f(x) = c + g . x, evaluated along p + t (q - p)
    let forms = [
        (r.clone(), int(1), int(0)),
        (r.clone(), int(-1), int(0)),
        (one.clone(), int(0), int(1)),
        (one.clone(), int(0), int(-1)),
    ];
    let d = (&q.x - &p.x, &q.y - &p.y);
    let val = |f: &(Rat, Rat, Rat)| (&f.0 + &f.1 * &p.x + &f.2 * &p.y, &f.1 * &d.0 + &f.2 * &d.1);
    let mut ts = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            let (a0, a1) = val(&forms[i]);
            let (b0, b1) = val(&forms[j]);
            let den = &a1 - &b1;
            if den.is_zero() {
                continue;
            }
            let t = (&b0 - &a0) / den;
            if t > Rat::zero() && t < one {
                ts.push(t);
            }
        }
    }
    ts.sort();
    ts.dedup();
    ts
}

fn sup_unit(v: (Rat, Rat)) -> (Rat, Rat) {
    let m = v.0.abs().max(v.1.abs());
    (v.0 / &m, v.1 / m)
}

/// One step of the tangent-line lift of a curve: move along a segment with
/// constant unit direction, or rotate the direction in place.
#[derive(Debug, Clone)]
enum LiftStep {
    Segment { from: Point, to: Point, dir: (Rat, Rat) },
    Turn { at: Point, from: (Rat, Rat), to: (Rat, Rat) },
}

fn cross2(a: &(Rat, Rat), b: &(Rat, Rat)) -> Rat {
    &a.0 * &b.1 - &a.1 * &b.0
}

/// The path of one strand of the lift, plus whether returning to the start
/// lands on the opposite strand.
fn lift_steps(c: &Curve) -> (Vec<LiftStep>, bool) {
    let n = c.vertices.len();
    let ns = c.segment_count();
    let dirs: Vec<(Rat, Rat)> = (0..ns)
        .map(|k| {
            let (p, q) = c.segment(k);
            sup_unit((&q.x - &p.x, &q.y - &p.y))
        })
        .collect();
    let neg = |v: &(Rat, Rat)| (-v.0.clone(), -v.1.clone());
    let mut sign = true;
    let mut steps = Vec::new();
    let oriented = |k: usize, s: bool| if s { dirs[k].clone() } else { neg(&dirs[k]) };
    for k in 0..ns {
        let (p, q) = c.segment(k);
        steps.push(LiftStep::Segment {
            from: p.clone(),
            to: q.clone(),
            dir: oriented(k, sign),
        });
        let v = (k + 1) % n;
        let last = k + 1 == ns;
        if c.kind == CurveKind::Interval && last {
            break;
        }
        let before = oriented(k, sign);
        if c.is_cusp(v) {
            sign = !sign;
        }
        let next = if last { 0 } else { k + 1 };
        let after = oriented(next, sign);
        if before != after {
            steps.push(LiftStep::Turn {
                at: q.clone(),
                from: before,
                to: after,
            });
        }
    }
    (steps, !sign)
}

fn corners() -> [(Rat, Rat); 4] {
    [(int(1), int(1)), (int(-1), int(1)), (int(-1), int(-1)), (int(1), int(-1))]
}

/// Exact square-fiber strand of a curve in a rectangle of half width `r`.
fn square_strand(c: &Curve, r: &Rat) -> (Vec<Exact4>, bool) {
    let (steps, flips) = lift_steps(c);
    let mut pts: Vec<Exact4> = Vec::new();
    let push = |pts: &mut Vec<Exact4>, p: Exact4| {
        if pts.last() != Some(&p) {
            pts.push(p);
        }
    };
    let at = |x: &Point, u: &(Rat, Rat), depth: &Rat| -> Exact4 {
        [x.x.clone(), x.y.clone(), depth * &u.0, depth * &u.1]
    };
    for st in &steps {
        match st {
            LiftStep::Segment { from, to, dir } => {
                let d = (&to.x - &from.x, &to.y - &from.y);
                push(&mut pts, at(from, dir, &rect_depth(r, from)));
                for t in depth_breaks(r, from, to) {
                    let x = Point::new(&from.x + &t * &d.0, &from.y + &t * &d.1);
                    push(&mut pts, at(&x, dir, &rect_depth(r, &x)));
                }
                push(&mut pts, at(to, dir, &rect_depth(r, to)));
            }
            LiftStep::Turn { at: x, from, to } => {
                let depth = rect_depth(r, x);
                let ccw = cross2(from, to).is_positive();
                for k in corners() {
                    let inside = if ccw {
                        cross2(from, &k).is_positive() && cross2(&k, to).is_positive()
                    } else {
                        cross2(from, &k).is_negative() && cross2(&k, to).is_negative()
                    };
                    if inside {
                        push(&mut pts, at(x, &k, &depth));
                    }
                }
                push(&mut pts, at(x, to, &depth));
            }
        }
    }
    (pts, flips)
}

fn negate_fiber(p: &Exact4) -> Exact4 {
    [p[0].clone(), p[1].clone(), -p[2].clone(), -p[3].clone()]
}

/// Loops of the exact rectangle-model lift of one curve.
pub fn square_lift(c: &Curve, r: &Rat) -> Vec<Vec<Exact4>> {
    let (mut strand, flips) = square_strand(c, r);
    match c.kind {
        CurveKind::Interval => {
            // both strands meet where the depth vanishes
            let back: Vec<Exact4> = strand[1..strand.len() - 1].iter().rev().map(negate_fiber).collect();
            strand.extend(back);
            vec![strand]
        }
        CurveKind::Closed => {
            // the strand ends where it began, or at the negated start
            strand.pop();
            if flips {
                let other: Vec<Exact4> = strand.iter().map(negate_fiber).collect();
                strand.extend(other);
                vec![strand]
            } else {
                let other = strand.iter().map(negate_fiber).collect();
                vec![strand, other]
            }
        }
    }
}

/// A loop on the round unit sphere in `R^4`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PLLoop {
    pub label: String,
    pub points: Vec<[f64; 4]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PLLink {
    pub model: String,
    pub loops: Vec<PLLoop>,
}

impl PLLink {
    pub fn new(loops: Vec<PLLoop>) -> Self {
        PLLink {
            model: "round".into(),
            loops,
        }
    }

    pub fn labels(&self) -> Vec<&str> {
        self.loops.iter().map(|l| l.label.as_str()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).unwrap()
    }

    pub fn from_json(text: &str) -> Result<Self, LiftError> {
        serde_json::from_str(text).map_err(|e| LiftError::Other(e.to_string()))
    }

    pub fn with_loops(&self, keep: impl Fn(&str) -> bool) -> PLLink {
        PLLink::new(self.loops.iter().filter(|l| keep(&l.label)).cloned().collect())
    }
}

fn norm4(p: &[f64; 4]) -> f64 {
    p.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn unit4(p: [f64; 4]) -> [f64; 4] {
    let n = norm4(&p);
    [p[0] / n, p[1] / n, p[2] / n, p[3] / n]
}

/// Radial projection of an exact closed polygon to the round sphere, with
/// each edge subdivided so that no piece spans more than `pi / resolution`.
pub fn project_round(points: &[Exact4], resolution: usize) -> Vec<[f64; 4]> {
    let f: Vec<[f64; 4]> = points
        .iter()
        .map(|p| [to_f64(&p[0]), to_f64(&p[1]), to_f64(&p[2]), to_f64(&p[3])])
        .collect();
    let n = f.len();
    let mut out = Vec::with_capacity(n * 2);
    for i in 0..n {
        let p = f[i];
        let q = f[(i + 1) % n];
        let (up, uq) = (unit4(p), unit4(q));
        let cosang = (0..4).map(|k| up[k] * uq[k]).sum::<f64>().clamp(-1.0, 1.0);
        let ang = cosang.acos();
        let pieces = ((ang * resolution as f64 / std::f64::consts::PI).ceil() as usize).max(1);
        for j in 0..pieces {
            let t = j as f64 / pieces as f64;
            out.push(unit4([
                p[0] + t * (q[0] - p[0]),
                p[1] + t * (q[1] - p[1]),
                p[2] + t * (q[2] - p[2]),
                p[3] + t * (q[3] - p[3]),
            ]));
        }
    }
    out
}

fn round_strand(c: &Curve, resolution: usize) -> (Vec<[f64; 4]>, bool) {
    let (steps, flips) = lift_steps(c);
    let mut pts: Vec<[f64; 4]> = Vec::new();
    let fiber = |x: [f64; 2]| (1.0 - x[0] * x[0] - x[1] * x[1]).max(0.0).sqrt();
    let dir = |u: &(Rat, Rat)| {
        let (a, b) = (to_f64(&u.0), to_f64(&u.1));
        let n = a.hypot(b);
        [a / n, b / n]
    };
    let steps_per_turn = (resolution as f64 / std::f64::consts::PI).max(1.0);
    for st in &steps {
        match st {
            LiftStep::Segment { from, to, dir: u } => {
                let (p, q) = (from.to_f64(), to.to_f64());
                let u = dir(u);
                let len = (q[0] - p[0]).hypot(q[1] - p[1]);
                let pieces = ((len * resolution as f64).ceil() as usize).max(2);
                for j in 0..pieces {
                    let t = j as f64 / pieces as f64;
                    let x = [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])];
                    let l = fiber(x);
                    pts.push([x[0], x[1], l * u[0], l * u[1]]);
                }
                let l = fiber(q);
                pts.push([q[0], q[1], l * u[0], l * u[1]]);
            }
            LiftStep::Turn { at, from, to } => {
                let x = at.to_f64();
                let (a, b) = (dir(from), dir(to));
                let a0 = a[1].atan2(a[0]);
                let mut delta = b[1].atan2(b[0]) - a0;
                while delta > std::f64::consts::PI {
                    delta -= 2.0 * std::f64::consts::PI;
                }
                while delta < -std::f64::consts::PI {
                    delta += 2.0 * std::f64::consts::PI;
                }
                let pieces = ((delta.abs() * steps_per_turn).ceil() as usize).max(1);
                let l = fiber(x);
                for j in 1..pieces {
                    let th = a0 + delta * j as f64 / pieces as f64;
                    pts.push([x[0], x[1], l * th.cos(), l * th.sin()]);
                }
                pts.push([x[0], x[1], l * b[0], l * b[1]]);
            }
        }
    }
    pts.dedup();
    (pts, flips)
}

fn round_lift(c: &Curve, resolution: usize) -> Vec<Vec<[f64; 4]>> {
    let (mut strand, flips) = round_strand(c, resolution);
    let neg = |p: &[f64; 4]| [p[0], p[1], -p[2], -p[3]];
    match c.kind {
        CurveKind::Interval => {
            let back: Vec<[f64; 4]> = strand[1..strand.len() - 1].iter().rev().map(neg).collect();
            strand.extend(back);
            vec![strand]
        }
        CurveKind::Closed => {
            strand.pop();
            if flips {
                let other: Vec<[f64; 4]> = strand.iter().map(neg).collect();
                strand.extend(other);
                vec![strand]
            } else {
                vec![strand.clone(), strand.iter().map(neg).collect()]
            }
        }
    }
}

fn loop_labels(c: &Curve, index: usize, count: usize) -> Vec<String> {
    let base = c.role.label(index);
    if count == 1 {
        vec![base]
    } else {
        (0..count).map(|k| format!("{base}/{}", (b'a' + k as u8) as char)).collect()
    }
}

/// Loops of one curve on the round sphere.
pub fn lift_curve(d: &DivideWithCusps, index: usize, resolution: usize) -> Vec<PLLoop> {
    let c = &d.curves[index];
    let loops: Vec<Vec<[f64; 4]>> = match &d.domain {
        Domain::Rect(r) => square_lift(c, r)
            .into_iter()
            .map(|l| project_round(&l, resolution))
            .collect(),
        Domain::Disk => round_lift(c, resolution),
    };
    let labels = loop_labels(c, index, loops.len());
    loops
        .into_iter()
        .zip(labels)
        .map(|(points, label)| PLLoop { label, points })
        .collect()
}

/// Smallest distance between non-adjacent edges of a closed PL link, with
/// a uniform grid to find nearby pairs. Pairs farther apart than `cap` are
/// not measured; the result is then `cap`.
pub fn min_separation(loops: &[Vec<[f64; 4]>], cap: f64) -> f64 {
    struct Seg {
        a: [f64; 4],
        b: [f64; 4],
        comp: usize,
        idx: usize,
        len: usize,
    }
    let mut segs = Vec::new();
    for (ci, l) in loops.iter().enumerate() {
        let n = l.len();
        for i in 0..n {
            segs.push(Seg {
                a: l[i],
                b: l[(i + 1) % n],
                comp: ci,
                idx: i,
                len: n,
            });
        }
    }
    let longest = segs
        .iter()
        .map(|s| (0..4).map(|k| (s.a[k] - s.b[k]).powi(2)).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let cell = longest.max(cap).max(1e-6);
    let key = |p: &[f64; 4]| -> [i64; 4] { [0, 1, 2, 3].map(|k| (p[k] / cell).floor() as i64) };
    let mut grid: HashMap<[i64; 4], Vec<usize>> = HashMap::new();
    for (si, s) in segs.iter().enumerate() {
        let (ka, kb) = (key(&s.a), key(&s.b));
        let lo = [0, 1, 2, 3].map(|k| ka[k].min(kb[k]));
        let hi = [0, 1, 2, 3].map(|k| ka[k].max(kb[k]));
        for i0 in lo[0]..=hi[0] {
            for i1 in lo[1]..=hi[1] {
                for i2 in lo[2]..=hi[2] {
                    for i3 in lo[3]..=hi[3] {
                        grid.entry([i0, i1, i2, i3]).or_default().push(si);
                    }
                }
            }
        }
    }
    let mut best = cap;
    let mut done: HashSet<(usize, usize)> = HashSet::new();
    let keys: Vec<[i64; 4]> = grid.keys().copied().collect();
    for k in keys {
        // neighbouring cells, so pairs straddling a cell wall are seen
        let mut near: Vec<usize> = Vec::new();
        for d0 in 0..=1 {
            for d1 in -1..=1 {
                for d2 in -1..=1 {
                    for d3 in -1..=1 {
                        if d0 == 0 && (d1, d2, d3) < (0, 0, 0) {
                            continue;
                        }
                        if let Some(v) = grid.get(&[k[0] + d0, k[1] + d1, k[2] + d2, k[3] + d3]) {
                            near.extend(v);
                        }
                    }
                }
            }
        }
        let own = &grid[&k];
        for &i in own {
            for &j in &near {
                if i >= j && own.contains(&j) || i == j {
                    continue;
                }
                let (a, b) = (&segs[i.min(j)], &segs[i.max(j)]);
                if a.comp == b.comp {
                    let gap = (a.idx as i64 - b.idx as i64).rem_euclid(a.len as i64) as usize;
                    if gap <= 1 || gap >= a.len - 1 {
                        continue;
                    }
                }
                if !done.insert((i.min(j), i.max(j))) {
                    continue;
                }
                let dist = segment_distance(&a.a, &a.b, &b.a, &b.b);
                if dist < best {
                    best = dist;
                }
            }
        }
    }
    best
}

/// Distance between segments `p0 p1` and `q0 q1` in any dimension.
pub fn segment_distance<const N: usize>(p0: &[f64; N], p1: &[f64; N], q0: &[f64; N], q1: &[f64; N]) -> f64 {
    let sub = |a: &[f64; N], b: &[f64; N]| {
        let mut r = [0.0; N];
        for k in 0..N {
            r[k] = a[k] - b[k];
        }
        r
    };
    let dotp = |a: &[f64; N], b: &[f64; N]| (0..N).map(|k| a[k] * b[k]).sum::<f64>();
    let d1 = sub(p1, p0);
    let d2 = sub(q1, q0);
    let r = sub(p0, q0);
    let a = dotp(&d1, &d1);
    let e = dotp(&d2, &d2);
    let f = dotp(&d2, &r);
    let (s, t);
    if a <= 1e-300 && e <= 1e-300 {
        return dotp(&r, &r).sqrt();
    }
    if a <= 1e-300 {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else {
        let c = dotp(&d1, &r);
        if e <= 1e-300 {
            t = 0.0;
            s = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = dotp(&d1, &d2);
            let den = a * e - b * b;
            let mut s0 = if den > 1e-300 { ((b * f - c * e) / den).clamp(0.0, 1.0) } else { 0.0 };
            let mut t0 = (b * s0 + f) / e;
            if t0 < 0.0 {
                t0 = 0.0;
                s0 = (-c / a).clamp(0.0, 1.0);
            } else if t0 > 1.0 {
                t0 = 1.0;
                s0 = ((b - c) / a).clamp(0.0, 1.0);
            }
            s = s0;
            t = t0;
        }
    }
    let mut diff = [0.0; N];
    for k in 0..N {
        diff[k] = p0[k] + s * d1[k] - q0[k] - t * d2[k];
    }
    dotp(&diff, &diff).sqrt()
}

/// Options of [`geometrize_and_lift`].
#[derive(Debug, Clone, Copy)]
pub struct LiftOptions {
    pub resolution: usize,
    /// Times the resolution may double when the separation check fails.
    pub max_doublings: usize,
}

impl Default for LiftOptions {
    fn default() -> Self {
        LiftOptions {
            resolution: 64,
            max_doublings: 4,
        }
    }
}

/// Separation threshold: `1e-6` times the diameter.
pub const SEPARATION_FACTOR: f64 = 1e-6;

fn lift_all(d: &DivideWithCusps, resolution: usize) -> Vec<PLLoop> {
    (0..d.curves.len()).flat_map(|i| lift_curve(d, i, resolution)).collect()
}

/// Lifts every curve, checking that the result is embedded; the
/// resolution doubles (up to `max_doublings` times) when the check fails.
pub fn geometrize_and_lift(d: &DivideWithCusps, opts: LiftOptions) -> Result<PLLink, LiftError> {
    let mut res = opts.resolution.max(4);
    let mut last = (0.0, 0.0);
    for _ in 0..=opts.max_doublings {
        let loops = lift_all(d, res);
        let tau = SEPARATION_FACTOR * diameter(&loops);
        let pts: Vec<Vec<[f64; 4]>> = loops.iter().map(|l| l.points.clone()).collect();
        let sep = min_separation(&pts, tau * 16.0);
        if sep > tau {
            return Ok(PLLink::new(loops));
        }
        last = (sep, tau);
        res *= 2;
    }
    Err(LiftError::NotEmbedded {
        separation: last.0,
        threshold: last.1,
    })
}

fn diameter(loops: &[PLLoop]) -> f64 {
    // points lie on the unit sphere; use the bounding box diagonal
    let mut lo = [f64::MAX; 4];
    let mut hi = [f64::MIN; 4];
    for l in loops {
        for p in &l.points {
            for k in 0..4 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
    }
    (0..4).map(|k| (hi[k] - lo[k]).powi(2)).sum::<f64>().sqrt()
}

/// Label of the framing companion of a component.
pub fn companion_label(label: &str) -> String {
    format!("{label}'")
}

pub fn is_companion(label: &str) -> bool {
    label.ends_with('\'')
}

/// The lift of a divide together with a parallel companion for every
/// attaching curve.
pub fn lift_with_pushoffs(d: &DivideWithCusps, opts: LiftOptions) -> Result<PLLink, LiftError> {
    let norm = d.arrangement.as_ref().ok_or(DivideError::NoArrangement)?;
    let mut aug = d.clone();
    let mut extra = Vec::new();
    for (i, c) in d.attaching() {
        if c.strip.is_some() {
            extra.push((i, pushoff_curve(c, norm)?));
        }
    }
    let base_count = aug.curves.len();
    for (_, c) in &extra {
        aug.curves.push(c.clone());
    }
    let mut link = geometrize_and_lift(&aug, opts)?;
    // rename companion loops after their originals
    let mut k = 0;
    let mut idx = 0;
    for ci in 0..aug.curves.len() {
        let count = if aug.curves[ci].kind == CurveKind::Closed && aug.curves[ci].cusps.len().is_multiple_of(2) { 2 } else { 1 };
        for _ in 0..count {
            if ci >= base_count {
                let orig = extra[k].0;
                let base = d.curves[orig].role.label(orig);
                link.loops[idx].label = companion_label(&base);
            }
            idx += 1;
        }
        if ci >= base_count {
            k += 1;
        }
    }
    Ok(link)
}

/// Attaching circles of the rectangle model, one per fiber chamber.
pub fn fs_loops(fibers: &[FiberChamber]) -> Vec<(String, Vec<Exact4>)> {
    fibers
        .iter()
        .map(|f| (format!("attaching:{}", f.index), fs_circle(&f.attach_left, &f.attach_right)))
        .collect()
}

/// Base point nudged upward for the framing companion, halving the step
/// until it stays in its chamber and below the next base point.
pub fn nudged_base(norm: &NormalizedArrangement, fibers: &[FiberChamber], s: usize) -> Point {
    let arr = norm.arrangement();
    let f = &fibers[s];
    let ceiling = fibers
        .iter()
        .map(|g| g.base.y.clone())
        .filter(|h| *h > f.base.y)
        .min()
        .unwrap_or_else(|| norm.r0.clone());
    let mut step = (&ceiling - &f.base.y) / int(4);
    loop {
        let p = Point::new(f.base.x.clone(), &f.base.y + &step);
        if arr.sign_vector(&p) == f.sign_vector {
            return p;
        }
        step /= int(2);
    }
}

/// The Kirby link built from attaching circles of the rectangle model and
/// the dotted lifts, optionally with framing companions.
pub fn fs_link(
    norm: &NormalizedArrangement,
    fibers: &[FiberChamber],
    with_companions: bool,
    resolution: usize,
) -> PLLink {
    let r = &norm.r;
    let mut loops = Vec::new();
    for i in 0..norm.lines.len() {
        let seg = crate::divide::dotted_segment(norm, i);
        for l in square_lift(&seg, r) {
            loops.push(PLLoop {
                label: Role::Dotted(i).label(i),
                points: project_round(&l, resolution),
            });
        }
    }
    for (label, pts) in fs_loops(fibers) {
        loops.push(PLLoop {
            label,
            points: project_round(&pts, resolution),
        });
    }
    if with_companions {
        for (s, f) in fibers.iter().enumerate() {
            let p = nudged_base(norm, fibers, s);
            let (a1, a2, _) = crate::arrangement::attaching_points(norm, &p);
            loops.push(PLLoop {
                label: companion_label(&format!("attaching:{}", f.index)),
                points: project_round(&fs_circle(&a1, &a2), resolution),
            });
        }
    }
    PLLink::new(loops)
}

/// Checks an exact loop lies on the boundary of the thickened rectangle:
/// `|y|_inf = delta(x)` at every vertex (edges are straight in both).
pub fn on_square_sphere(r: &Rat, pts: &[Exact4]) -> bool {
    pts.iter().all(|p| {
        let x = Point::new(p[0].clone(), p[1].clone());
        p[2].abs().max(p[3].abs()) == rect_depth(r, &x)
    })
}

/// Small exact sample points for property tests of the retraction.
pub fn sample_grid(k: i64) -> Vec<Rat> {
    (-k..=k).map(|i| rat(i, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{fiber_chambers, normalize};
    use crate::divide::{assemble_kirby_divide, AssembleOptions};

    fn cross_lines() -> NormalizedArrangement {
        normalize(&Arrangement::from_ints("x", &[[1, 0, 0], [0, 1, 0]]).unwrap()).unwrap()
    }

    #[test]
    fn retraction_example() {
        let s = Retraction { r: int(5) };
        let x = Point::new(int(0), int(2));
        let y = (rat(0, 1), rat(1, 2));
        let p = s.retract(&x, (&y.0, &y.1)).unwrap();
        assert_eq!(p, Point::new(int(0), rat(1, 2)));
        let bad = Point::new(int(4), int(2));
        assert!(s.retract(&bad, (&y.0, &y.1)).is_err());
    }

    #[test]
    fn fs_circle_lies_on_the_square_sphere() {
        let n = cross_lines();
        let f = fiber_chambers(&n).unwrap();
        let c = fs_circle(&f[0].attach_left, &f[0].attach_right);
        assert_eq!(c.len(), 4);
        assert!(on_square_sphere(&n.r, &c));
    }

    #[test]
    fn strip_lifts_are_exact_and_single() {
        let n = cross_lines();
        let f = fiber_chambers(&n).unwrap();
        let d = assemble_kirby_divide(&n, &f, AssembleOptions::default()).unwrap();
        for (i, c) in d.curves.iter().enumerate() {
            let loops = square_lift(c, &n.r);
            assert_eq!(loops.len(), 1, "curve {i}");
            assert!(on_square_sphere(&n.r, &loops[0]));
        }
    }

    #[test]
    fn segment_distance_basics() {
        let d = segment_distance(&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &[0.5, 1.0, -1.0], &[0.5, 1.0, 1.0]);
        assert!((d - 1.0).abs() < 1e-12);
        let d = segment_distance(&[0.0, 0.0], &[1.0, 0.0], &[2.0, 0.0], &[3.0, 0.0]);
        assert!((d - 1.0).abs() < 1e-12);
    }
}
