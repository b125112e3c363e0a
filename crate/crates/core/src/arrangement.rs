//! Real line arrangements: parsing, normalization, intersections and
//! chambers.
//!
//! A line is stored as the affine form `a*x1 + b*x2 + c`. After
//! [`normalize`] the reference line `F` is the horizontal axis `x2 = 0`,
//! every intersection point sits strictly above `x2 = 1`, all lines are
//! steep (`|a| >= |b|`), have `a > 0`, and are ordered left to right along
//! `F`.

use crate::rational::{fmt_rat, int, parse_rat, rat, serde_rat, sign, Rat};
use num_traits::{One, Signed, Zero};
use serde::Deserialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Rat,
    pub y: Rat,
}

impl Point {
    pub fn new(x: Rat, y: Rat) -> Self {
        Point { x, y }
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [crate::rational::to_f64(&self.x), crate::rational::to_f64(&self.y)]
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", fmt_rat(&self.x), fmt_rat(&self.y))
    }
}

/// The affine form `a*x1 + b*x2 + c`; the line is its zero set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
}

impl Line {
    pub fn new(a: Rat, b: Rat, c: Rat) -> Self {
        Line { a, b, c }
    }

    pub fn eval(&self, p: &Point) -> Rat {
        &self.a * &p.x + &self.b * &p.y + &self.c
    }

    pub fn is_horizontal(&self) -> bool {
        self.a.is_zero()
    }

    pub fn is_vertical(&self) -> bool {
        self.b.is_zero()
    }

    /// `x1` where the line crosses height `x2 = y`.
    pub fn x_at(&self, y: &Rat) -> Option<Rat> {
        if self.a.is_zero() {
            None
        } else {
            Some(-(&self.b * y + &self.c) / &self.a)
        }
    }

    /// Height of the line above abscissa `x1 = x`.
    pub fn y_at(&self, x: &Rat) -> Option<Rat> {
        if self.b.is_zero() {
            None
        } else {
            Some(-(&self.a * x + &self.c) / &self.b)
        }
    }

    pub fn meet(&self, other: &Line) -> Option<Point> {
        let det = &self.a * &other.b - &self.b * &other.a;
        if det.is_zero() {
            return None;
        }
        let x = (&self.b * &other.c - &self.c * &other.b) / &det;
        let y = (&self.c * &other.a - &self.a * &other.c) / &det;
        Some(Point { x, y })
    }

    /// Same zero set (proportional coefficient triples).
    pub fn same_as(&self, other: &Line) -> bool {
        &self.a * &other.b == &self.b * &other.a
            && &self.a * &other.c == &self.c * &other.a
            && &self.b * &other.c == &self.c * &other.b
    }

    /// The line expressed in coordinates `x' = m x + v`.
    pub fn pushforward(&self, map: &AffineMap) -> Line {
        let inv = map.inverse();
        // alpha(x) = n . (inv.m x' + inv.v) + c
        let m = &inv.m;
        let a = &self.a * &m[0][0] + &self.b * &m[1][0];
        let b = &self.a * &m[0][1] + &self.b * &m[1][1];
        let c = &self.a * &inv.v[0] + &self.b * &inv.v[1] + &self.c;
        Line { a, b, c }
    }

    pub fn scaled(&self, k: &Rat) -> Line {
        Line {
            a: &self.a * k,
            b: &self.b * k,
            c: &self.c * k,
        }
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}*x1 + {}*x2 + {}",
            fmt_rat(&self.a),
            fmt_rat(&self.b),
            fmt_rat(&self.c)
        )
    }
}

/// `x' = m x + v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMap {
    pub m: [[Rat; 2]; 2],
    pub v: [Rat; 2],
}

impl AffineMap {
    pub fn identity() -> Self {
        AffineMap {
            m: [[int(1), int(0)], [int(0), int(1)]],
            v: [int(0), int(0)],
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == AffineMap::identity()
    }

    pub fn apply(&self, p: &Point) -> Point {
        Point {
            x: &self.m[0][0] * &p.x + &self.m[0][1] * &p.y + &self.v[0],
            y: &self.m[1][0] * &p.x + &self.m[1][1] * &p.y + &self.v[1],
        }
    }

    /// `other` after `self`.
    pub fn then(&self, other: &AffineMap) -> AffineMap {
        let a = &other.m;
        let b = &self.m;
        let m = [
            [
                &a[0][0] * &b[0][0] + &a[0][1] * &b[1][0],
                &a[0][0] * &b[0][1] + &a[0][1] * &b[1][1],
            ],
            [
                &a[1][0] * &b[0][0] + &a[1][1] * &b[1][0],
                &a[1][0] * &b[0][1] + &a[1][1] * &b[1][1],
            ],
        ];
        let v = [
            &a[0][0] * &self.v[0] + &a[0][1] * &self.v[1] + &other.v[0],
            &a[1][0] * &self.v[0] + &a[1][1] * &self.v[1] + &other.v[1],
        ];
        AffineMap { m, v }
    }

    pub fn inverse(&self) -> AffineMap {
        let m = &self.m;
        let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
        assert!(!det.is_zero(), "singular affine map");
        let im = [
            [&m[1][1] / &det, -&m[0][1] / &det],
            [-&m[1][0] / &det, &m[0][0] / &det],
        ];
        let v = [
            -(&im[0][0] * &self.v[0] + &im[0][1] * &self.v[1]),
            -(&im[1][0] * &self.v[0] + &im[1][1] * &self.v[1]),
        ];
        AffineMap { m: im, v }
    }

    /// Rotation with tangent of the half angle `t`, which keeps it rational.
    pub fn rotation(t: &Rat) -> AffineMap {
        let one = Rat::one();
        let d = &one + t * t;
        let c = (&one - t * t) / &d;
        let s = (int(2) * t) / &d;
        AffineMap {
            m: [[c.clone(), -s.clone()], [s, c]],
            v: [int(0), int(0)],
        }
    }

    pub fn translation(dx: Rat, dy: Rat) -> AffineMap {
        AffineMap {
            m: [[int(1), int(0)], [int(0), int(1)]],
            v: [dx, dy],
        }
    }

    pub fn scale_x(k: Rat) -> AffineMap {
        AffineMap {
            m: [[k, int(0)], [int(0), int(1)]],
            v: [int(0), int(0)],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArrangementError {
    #[error("invalid arrangement JSON: {0}")]
    Json(String),
    #[error("line {line}: malformed rational {text:?}")]
    MalformedRational { line: usize, text: String },
    #[error("line {line}: expected three coefficients [a, b, c]")]
    WrongArity { line: usize },
    #[error("line {line}: zero normal vector")]
    ZeroNormal { line: usize },
    #[error("lines {first} and {second} coincide")]
    DuplicateLine { first: usize, second: usize },
    #[error("an arrangement needs at least one line")]
    Empty,
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

/// A finite set of distinct affine lines in the real plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    pub name: Option<String>,
    pub lines: Vec<Line>,
}

impl Arrangement {
    /// Validates: no empty set, no zero normals, no repeated lines.
    pub fn new(name: Option<String>, lines: Vec<Line>) -> Result<Self, ArrangementError> {
        if lines.is_empty() {
            return Err(ArrangementError::Empty);
        }
        for (i, l) in lines.iter().enumerate() {
            if l.a.is_zero() && l.b.is_zero() {
                return Err(ArrangementError::ZeroNormal { line: i });
            }
        }
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                if lines[i].same_as(&lines[j]) {
                    return Err(ArrangementError::DuplicateLine { first: i, second: j });
                }
            }
        }
        Ok(Arrangement { name, lines })
    }

    /// Convenience for integer coefficients.
    pub fn from_ints(name: &str, lines: &[[i64; 3]]) -> Result<Self, ArrangementError> {
        let lines = lines
            .iter()
            .map(|&[a, b, c]| Line::new(int(a), int(b), int(c)))
            .collect();
        Arrangement::new(Some(name.to_string()), lines)
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn sign_vector(&self, p: &Point) -> Vec<i8> {
        self.lines.iter().map(|l| sign(&l.eval(p))).collect()
    }

    pub fn from_json(text: &str) -> Result<Self, ArrangementError> {
        let raw: RawArrangement =
            serde_json::from_str(text).map_err(|e| ArrangementError::Json(e.to_string()))?;
        let mut lines = Vec::with_capacity(raw.lines.len());
        for (i, coeffs) in raw.lines.iter().enumerate() {
            if coeffs.len() != 3 {
                return Err(ArrangementError::WrongArity { line: i });
            }
            let mut v = Vec::with_capacity(3);
            for c in coeffs {
                let r = serde_rat::value_to_rat(c).map_err(|_| ArrangementError::MalformedRational {
                    line: i,
                    text: match c {
                        serde_json::Value::String(s) => s.clone(),
                        other => other.to_string(),
                    },
                })?;
                v.push(r);
            }
            let c = v.pop().unwrap();
            let b = v.pop().unwrap();
            let a = v.pop().unwrap();
            lines.push(Line::new(a, b, c));
        }
        Arrangement::new(raw.name, lines)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let lines: Vec<Vec<String>> = self
            .lines
            .iter()
            .map(|l| vec![fmt_rat(&l.a), fmt_rat(&l.b), fmt_rat(&l.c)])
            .collect();
        let mut obj = serde_json::Map::new();
        if let Some(n) = &self.name {
            obj.insert("name".into(), n.clone().into());
        }
        obj.insert("lines".into(), serde_json::to_value(lines).unwrap());
        serde_json::Value::Object(obj)
    }

    /// Parses a bare rational triple list such as `[["1","0","0"], ...]`.
    pub fn parse_line(text: [&str; 3], line: usize) -> Result<Line, ArrangementError> {
        let p = |s: &str| {
            parse_rat(s).map_err(|_| ArrangementError::MalformedRational {
                line,
                text: s.to_string(),
            })
        };
        Ok(Line::new(p(text[0])?, p(text[1])?, p(text[2])?))
    }
}

#[derive(Deserialize)]
struct RawArrangement {
    #[serde(default)]
    name: Option<String>,
    lines: Vec<Vec<serde_json::Value>>,
}

/// An arrangement in normalized position, together with the map from the
/// original coordinates and the box parameters used downstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedArrangement {
    pub name: Option<String>,
    /// Ordered by the abscissa where they cross `F`.
    pub lines: Vec<Line>,
    /// Original coordinates to normalized coordinates.
    pub transform: AffineMap,
    /// Height bounding all intersection points from above.
    pub r0: Rat,
    /// Half width of the rectangle `[-R, R] x [-1, 1]`.
    pub r: Rat,
    /// `order[i]` is the original index of normalized line `i`.
    pub order: Vec<usize>,
}

impl NormalizedArrangement {
    pub fn arrangement(&self) -> Arrangement {
        Arrangement {
            name: self.name.clone(),
            lines: self.lines.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Abscissa of line `i` on `F`.
    pub fn foot(&self, i: usize) -> Rat {
        self.lines[i].x_at(&Rat::zero()).expect("normalized lines are never horizontal")
    }

    /// `rho(h) = (h - 1) / (R0 - 1)`.
    pub fn rho(&self, h: &Rat) -> Rat {
        (h - Rat::one()) / (&self.r0 - Rat::one())
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let lines: Vec<Vec<String>> = self
            .lines
            .iter()
            .map(|l| vec![fmt_rat(&l.a), fmt_rat(&l.b), fmt_rat(&l.c)])
            .collect();
        let m = &self.transform.m;
        let mut obj = serde_json::Map::new();
        if let Some(n) = &self.name {
            obj.insert("name".into(), n.clone().into());
        }
        obj.insert("lines".into(), serde_json::to_value(lines).unwrap());
        obj.insert(
            "transform".into(),
            serde_json::json!({
                "matrix": [[fmt_rat(&m[0][0]), fmt_rat(&m[0][1])], [fmt_rat(&m[1][0]), fmt_rat(&m[1][1])]],
                "translation": [fmt_rat(&self.transform.v[0]), fmt_rat(&self.transform.v[1])],
            }),
        );
        obj.insert("R0".into(), fmt_rat(&self.r0).into());
        obj.insert("R".into(), fmt_rat(&self.r).into());
        obj.insert("order".into(), serde_json::to_value(&self.order).unwrap());
        serde_json::Value::Object(obj)
    }

    /// Reads back the output of [`Self::to_json_value`].
    pub fn from_json(text: &str) -> Result<Self, ArrangementError> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| ArrangementError::Json(e.to_string()))?;
        let arr = Arrangement::from_json(text)?;
        let get = |key: &str| -> Result<Rat, ArrangementError> {
            let x = v.get(key).ok_or_else(|| ArrangementError::Json(format!("missing {key}")))?;
            serde_rat::value_to_rat(x).map_err(|e| ArrangementError::Json(e.to_string()))
        };
        let r0 = get("R0")?;
        let r = get("R")?;
        let t = v
            .get("transform")
            .ok_or_else(|| ArrangementError::Json("missing transform".into()))?;
        let q = |x: &serde_json::Value| {
            serde_rat::value_to_rat(x).map_err(|e| ArrangementError::Json(e.to_string()))
        };
        let bad = || ArrangementError::Json("bad transform".into());
        let mm = t.get("matrix").and_then(|m| m.as_array()).ok_or_else(bad)?;
        let tv = t.get("translation").and_then(|m| m.as_array()).ok_or_else(bad)?;
        let row = |i: usize| -> Result<[Rat; 2], ArrangementError> {
            let r = mm.get(i).and_then(|r| r.as_array()).ok_or_else(bad)?;
            Ok([q(r.first().ok_or_else(bad)?)?, q(r.get(1).ok_or_else(bad)?)?])
        };
        let transform = AffineMap {
            m: [row(0)?, row(1)?],
            v: [q(tv.first().ok_or_else(bad)?)?, q(tv.get(1).ok_or_else(bad)?)?],
        };
        let order: Vec<usize> = serde_json::from_value(
            v.get("order").cloned().ok_or_else(|| ArrangementError::Json("missing order".into()))?,
        )
        .map_err(|e| ArrangementError::Json(e.to_string()))?;
        Ok(NormalizedArrangement {
            name: arr.name,
            lines: arr.lines,
            transform,
            r0,
            r,
            order,
        })
    }
}

/// Candidate half-angle tangents for the rotation step: `0, 1/7, -1/7, 1/8, ...`.
fn rotation_candidates() -> impl Iterator<Item = Rat> {
    std::iter::once(int(0)).chain((7..).flat_map(|k| [rat(1, k), rat(-1, k)]))
}

fn intersection_points(lines: &[Line]) -> Vec<Point> {
    let mut pts = Vec::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if let Some(p) = lines[i].meet(&lines[j]) {
                pts.push(p);
            }
        }
    }
    pts
}

/// Puts the arrangement in normalized position.
///
/// The steps are: the smallest admissible rotation making no line
/// horizontal, a vertical translation lifting every intersection point
/// above `x2 = 1` (to height at least 2), a horizontal contraction making
/// every line steep, then sign fixing and re-indexing of the forms. An
/// arrangement that is already normalized gets the identity transform.
pub fn normalize(arr: &Arrangement) -> Result<NormalizedArrangement, ArrangementError> {
    if arr.lines.is_empty() {
        return Err(ArrangementError::Empty);
    }
    // rotation: normal n maps to rot*n, horizontal iff first component is 0
    let mut transform = AffineMap::identity();
    for t in rotation_candidates() {
        let rot = AffineMap::rotation(&t);
        if arr.lines.iter().all(|l| !l.pushforward(&rot).is_horizontal()) {
            transform = rot;
            break;
        }
    }
    let rotated: Vec<Line> = arr.lines.iter().map(|l| l.pushforward(&transform)).collect();

    let lowest = intersection_points(&rotated).into_iter().map(|p| p.y).min();
    if let Some(m) = lowest {
        if m <= Rat::one() {
            transform = transform.then(&AffineMap::translation(int(0), int(2) - m));
        }
    }

    let mut lambda = Rat::one();
    for l in &rotated {
        if !l.b.is_zero() {
            let q = l.a.abs() / l.b.abs();
            if q < lambda {
                lambda = q;
            }
        }
    }
    if !lambda.is_one() {
        transform = transform.then(&AffineMap::scale_x(lambda));
    }

    let mut moved: Vec<(usize, Line)> = arr
        .lines
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let l = l.pushforward(&transform);
            let l = if l.a.is_negative() { l.scaled(&int(-1)) } else { l };
            (i, l)
        })
        .collect();
    moved.sort_by(|(_, p), (_, q)| {
        p.x_at(&Rat::zero()).unwrap().cmp(&q.x_at(&Rat::zero()).unwrap())
    });
    let order: Vec<usize> = moved.iter().map(|(i, _)| *i).collect();
    let lines: Vec<Line> = moved.into_iter().map(|(_, l)| l).collect();

    let top = intersection_points(&lines).into_iter().map(|p| p.y).max();
    let r0 = match top {
        Some(y) => y + Rat::one(),
        None => int(2),
    };
    let reach = lines
        .iter()
        .map(|l| l.x_at(&r0).unwrap().abs())
        .max()
        .unwrap_or_else(Rat::zero);
    let r = int(2) * (reach + &r0);

    Ok(NormalizedArrangement {
        name: arr.name.clone(),
        lines,
        transform,
        r0,
        r,
        order,
    })
}

/// Checks the defining properties of normalized position.
pub fn is_normalized(lines: &[Line]) -> bool {
    if lines.iter().any(|l| l.is_horizontal() || l.a.is_negative() || l.a.abs() < l.b.abs()) {
        return false;
    }
    let feet: Vec<Rat> = lines.iter().map(|l| l.x_at(&Rat::zero()).unwrap()).collect();
    if feet.windows(2).any(|w| w[0] >= w[1]) {
        return false;
    }
    intersection_points(lines).iter().all(|p| p.y > Rat::one())
}

/// A point where at least two lines meet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionPoint {
    pub point: Point,
    /// Sorted indices of the lines through the point.
    pub lines: Vec<usize>,
}

impl IntersectionPoint {
    pub fn multiplicity(&self) -> usize {
        self.lines.len()
    }
}

/// Intersection points with multiplicities, sorted by height then abscissa.
pub fn intersection_summary(arr: &Arrangement) -> Vec<IntersectionPoint> {
    let mut map: BTreeMap<(Rat, Rat), BTreeSet<usize>> = BTreeMap::new();
    for i in 0..arr.lines.len() {
        for j in i + 1..arr.lines.len() {
            if let Some(p) = arr.lines[i].meet(&arr.lines[j]) {
                let e = map.entry((p.y, p.x)).or_default();
                e.insert(i);
                e.insert(j);
            }
        }
    }
    map.into_iter()
        .map(|((y, x), ls)| IntersectionPoint {
            point: Point { x, y },
            lines: ls.into_iter().collect(),
        })
        .collect()
}

/// `sum over intersection points of (multiplicity - 1)`.
pub fn bounded_chamber_count(arr: &Arrangement) -> usize {
    intersection_summary(arr)
        .iter()
        .map(|p| p.multiplicity() - 1)
        .sum()
}

/// Betti numbers `(1, n, b)` of the complexified complement.
pub fn betti(arr: &Arrangement) -> (usize, usize, usize) {
    (1, arr.lines.len(), bounded_chamber_count(arr))
}

/// A connected component of the complement of the real lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chamber {
    /// `+1` or `-1` per line: the sign of its form on the chamber.
    pub sign_vector: Vec<i8>,
    /// An exact interior point.
    pub witness: Point,
    /// Whether the chamber meets the reference line `x2 = 0`.
    pub meets_f: bool,
}

/// Renders a sign vector as `(-,+,+)`.
pub fn fmt_signs(v: &[i8]) -> String {
    let s: Vec<&str> = v.iter().map(|&x| if x > 0 { "+" } else { "-" }).collect();
    format!("({})", s.join(","))
}

/// `(+,...,+,-,...,-)`: the sign vectors of chambers that meet `F`.
pub fn is_staircase(v: &[i8]) -> bool {
    v.windows(2).all(|w| !(w[0] < 0 && w[1] > 0))
}

fn midpoint_samples(cuts: &[Rat]) -> Vec<Rat> {
    if cuts.is_empty() {
        return vec![Rat::zero()];
    }
    let mut out = Vec::with_capacity(cuts.len() + 1);
    out.push(&cuts[0] - Rat::one());
    for w in cuts.windows(2) {
        out.push((&w[0] + &w[1]) / int(2));
    }
    out.push(cuts.last().unwrap() + Rat::one());
    out
}

fn sorted_distinct(mut v: Vec<Rat>) -> Vec<Rat> {
    v.sort();
    v.dedup();
    v
}

/// Sign vectors realized on the reference line `x2 = 0`.
fn signs_on_f(arr: &Arrangement) -> BTreeSet<Vec<i8>> {
    let zero = Rat::zero();
    let feet = sorted_distinct(arr.lines.iter().filter_map(|l| l.x_at(&zero)).collect());
    midpoint_samples(&feet)
        .into_iter()
        .map(|x| Point::new(x, zero.clone()))
        .map(|p| arr.sign_vector(&p))
        .filter(|v| v.iter().all(|&s| s != 0))
        .collect()
}

/// All chambers, by vertical-slab decomposition.
///
/// Slab walls are the abscissae of intersection points and of vertical
/// lines. Inside an open slab the remaining lines are totally ordered by
/// height, so one sample per gap and per slab meets every chamber.
pub fn enumerate_chambers(arr: &Arrangement) -> Vec<Chamber> {
    let mut walls: Vec<Rat> = intersection_summary(arr).into_iter().map(|p| p.point.x).collect();
    walls.extend(arr.lines.iter().filter(|l| l.is_vertical()).map(|l| -&l.c / &l.a));
    let walls = sorted_distinct(walls);
    let on_f = signs_on_f(arr);

    let mut seen: BTreeSet<Vec<i8>> = BTreeSet::new();
    let mut out = Vec::new();
    for x in midpoint_samples(&walls) {
        let heights = sorted_distinct(arr.lines.iter().filter_map(|l| l.y_at(&x)).collect());
        for y in midpoint_samples(&heights) {
            let p = Point::new(x.clone(), y);
            let sv = arr.sign_vector(&p);
            debug_assert!(sv.iter().all(|&s| s != 0));
            if seen.insert(sv.clone()) {
                let meets_f = on_f.contains(&sv);
                out.push(Chamber {
                    sign_vector: sv,
                    witness: p,
                    meets_f,
                });
            }
        }
    }
    out
}

/// A bounded-type chamber (one not meeting `F`) with its chosen base point
/// and the endpoints of its attaching segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberChamber {
    /// 1-based rank by base point height.
    pub index: usize,
    pub sign_vector: Vec<i8>,
    /// Base point `P = (k, h)` with `1 < h < R0`.
    pub base: Point,
    /// `rho(h)`.
    pub rho: Rat,
    /// Left endpoint `(k - h + 1 - rho, 1 - rho)`.
    pub attach_left: Point,
    /// Right endpoint `(k + h - 1 + rho, 1 - rho)`.
    pub attach_right: Point,
}

impl FiberChamber {
    pub fn height(&self) -> &Rat {
        &self.base.y
    }
}

/// Left and right endpoints of the attaching segment for base point `p`.
pub fn attaching_points(norm: &NormalizedArrangement, p: &Point) -> (Point, Point, Rat) {
    let rho = norm.rho(&p.y);
    let one = Rat::one();
    let level = &one - &rho;
    let left = Point::new(&p.x - &p.y + &one - &rho, level.clone());
    let right = Point::new(&p.x + &p.y - &one + &rho, level);
    (left, right, rho)
}

/// The chambers that miss `F`, ordered by a base point height.
///
/// Base points come from sampling horizontal bands between consecutive
/// intersection heights (and the top band below `R0`): every chamber that
/// misses `F` has its lowest point at an intersection and so crosses the
/// band just above it. Chambers sharing a band get evenly spaced heights
/// inside it, which keeps all heights distinct.
pub fn fiber_chambers(norm: &NormalizedArrangement) -> Result<Vec<FiberChamber>, ArrangementError> {
    let arr = norm.arrangement();
    let ys = sorted_distinct(
        intersection_summary(&arr)
            .into_iter()
            .map(|p| p.point.y)
            .collect(),
    );
    let mut bands: Vec<(Rat, Rat)> = ys.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
    if let Some(top) = ys.last() {
        bands.push((top.clone(), norm.r0.clone()));
    }

    // (band, left line, right line, sign vector), in discovery order
    let mut found: Vec<(usize, usize, usize, Vec<i8>)> = Vec::new();
    let mut seen: BTreeSet<Vec<i8>> = BTreeSet::new();
    for (bi, (lo, hi)) in bands.iter().enumerate() {
        let y = (lo + hi) / int(2);
        let mut xs: Vec<(Rat, usize)> = norm
            .lines
            .iter()
            .enumerate()
            .map(|(i, l)| (l.x_at(&y).unwrap(), i))
            .collect();
        xs.sort();
        for w in xs.windows(2) {
            let p = Point::new((&w[0].0 + &w[1].0) / int(2), y.clone());
            let sv = arr.sign_vector(&p);
            if is_staircase(&sv) || seen.contains(&sv) {
                continue;
            }
            seen.insert(sv.clone());
            found.push((bi, w[0].1, w[1].1, sv));
        }
    }

    let mut out = Vec::new();
    for (bi, (lo, hi)) in bands.iter().enumerate() {
        let here: Vec<_> = found.iter().filter(|f| f.0 == bi).collect();
        let cnt = here.len() as i64;
        for (r, (_, left, right, sv)) in here.into_iter().enumerate() {
            let h = lo + (hi - lo) * rat(r as i64 + 1, cnt + 1);
            let xl = norm.lines[*left].x_at(&h).unwrap();
            let xr = norm.lines[*right].x_at(&h).unwrap();
            let base = Point::new((xl + xr) / int(2), h);
            if &arr.sign_vector(&base) != sv {
                return Err(ArrangementError::Internal(format!(
                    "base point {base} left its chamber {}",
                    fmt_signs(sv)
                )));
            }
            let (attach_left, attach_right, rho) = attaching_points(norm, &base);
            out.push(FiberChamber {
                index: 0,
                sign_vector: sv.clone(),
                base,
                rho,
                attach_left,
                attach_right,
            });
        }
    }
    out.sort_by(|a, b| a.base.y.cmp(&b.base.y));
    for (i, fc) in out.iter_mut().enumerate() {
        fc.index = i + 1;
        // containment in the rectangle model's retraction domain
        let slack = &norm.r - &fc.base.y - fc.base.x.abs();
        if !slack.is_positive() {
            return Err(ArrangementError::Internal(format!(
                "base point {} outside |k| < R - h",
                fc.base
            )));
        }
    }
    let expected = bounded_chamber_count(&arr);
    if out.len() != expected {
        return Err(ArrangementError::Internal(format!(
            "found {} chambers missing F, expected {expected}",
            out.len()
        )));
    }
    Ok(out)
}

/// A convenience bundle of the normalized arrangement and its chambers.
#[derive(Debug, Clone)]
pub struct ChamberTable {
    pub chambers: Vec<Chamber>,
    pub fiber: Vec<FiberChamber>,
}

impl ChamberTable {
    pub fn build(norm: &NormalizedArrangement) -> Result<Self, ArrangementError> {
        Ok(ChamberTable {
            chambers: enumerate_chambers(&norm.arrangement()),
            fiber: fiber_chambers(norm)?,
        })
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let chambers: Vec<_> = self
            .chambers
            .iter()
            .map(|c| {
                serde_json::json!({
                    "signs": fmt_signs(&c.sign_vector),
                    "witness": [fmt_rat(&c.witness.x), fmt_rat(&c.witness.y)],
                    "meetsF": c.meets_f,
                })
            })
            .collect();
        let fiber: Vec<_> = self
            .fiber
            .iter()
            .map(|f| {
                serde_json::json!({
                    "index": f.index,
                    "signs": fmt_signs(&f.sign_vector),
                    "base": [fmt_rat(&f.base.x), fmt_rat(&f.base.y)],
                    "rho": fmt_rat(&f.rho),
                    "a1": [fmt_rat(&f.attach_left.x), fmt_rat(&f.attach_left.y)],
                    "a2": [fmt_rat(&f.attach_right.x), fmt_rat(&f.attach_right.y)],
                })
            })
            .collect();
        serde_json::json!({ "chambers": chambers, "fiber": fiber })
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        s.push_str("signs          meetsF  witness\n");
        for c in &self.chambers {
            s.push_str(&format!(
                "{:<14} {:<7} {}\n",
                fmt_signs(&c.sign_vector),
                c.meets_f,
                c.witness
            ));
        }
        s.push_str("\n s  signs          base\n");
        for f in &self.fiber {
            s.push_str(&format!(
                "{:>2}  {:<14} {}\n",
                f.index,
                fmt_signs(&f.sign_vector),
                f.base
            ));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generic4() -> Arrangement {
        // four lines symmetric about x1 = 0, all crossings above F
        Arrangement::from_ints("generic4", &[[5, -10, 12], [38, -20, 51], [38, 20, -51], [5, 10, -12]])
            .unwrap()
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(Arrangement::from_ints("e", &[]).unwrap_err(), ArrangementError::Empty);
        assert_eq!(
            Arrangement::from_ints("z", &[[0, 0, 1]]).unwrap_err(),
            ArrangementError::ZeroNormal { line: 0 }
        );
        assert_eq!(
            Arrangement::from_ints("d", &[[1, 1, 1], [2, 2, 2]]).unwrap_err(),
            ArrangementError::DuplicateLine { first: 0, second: 1 }
        );
        let e = Arrangement::from_json(r#"{"lines": [["1", "x/2", "0"]]}"#).unwrap_err();
        assert!(matches!(e, ArrangementError::MalformedRational { line: 0, .. }));
    }

    #[test]
    fn json_roundtrip() {
        let a = Arrangement::from_json(r#"{"name": "t", "lines": [["1/2", "-1", 3], ["1", "0", "0"]]}"#)
            .unwrap();
        let back = Arrangement::from_json(&a.to_json_value().to_string()).unwrap();
        assert_eq!(a, back);
    }

    #[test]
    fn normalizing_twice_is_identity() {
        let n1 = normalize(&generic4()).unwrap();
        assert!(is_normalized(&n1.lines));
        let n2 = normalize(&n1.arrangement()).unwrap();
        assert!(n2.transform.is_identity());
        assert_eq!(n1.lines, n2.lines);
        assert_eq!(n2.order, vec![0, 1, 2, 3]);
    }

    #[test]
    fn horizontal_lines_get_rotated() {
        let a = Arrangement::from_ints("cross", &[[1, 0, 0], [0, 1, 0]]).unwrap();
        let n = normalize(&a).unwrap();
        assert!(is_normalized(&n.lines));
        assert!(!n.transform.is_identity());
    }

    #[test]
    fn normalized_json_roundtrip() {
        let n = normalize(&generic4()).unwrap();
        let back = NormalizedArrangement::from_json(&n.to_json_value().to_string()).unwrap();
        assert_eq!(n, back);
    }

    #[test]
    fn affine_inverse() {
        let m = AffineMap::rotation(&rat(1, 7))
            .then(&AffineMap::translation(rat(1, 3), int(2)))
            .then(&AffineMap::scale_x(rat(1, 2)));
        let p = Point::new(rat(3, 5), rat(-7, 2));
        assert_eq!(m.inverse().apply(&m.apply(&p)), p);
    }

    #[test]
    fn pencil_has_one_point_of_multiplicity_four() {
        let a = Arrangement::from_ints("pencil", &[[1, 0, 0], [0, 1, 0], [1, -1, 0], [1, 1, 0]]).unwrap();
        let s = intersection_summary(&a);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].multiplicity(), 4);
        assert_eq!(enumerate_chambers(&a).len(), 8);
        assert_eq!(bounded_chamber_count(&a), 3);
    }

    #[test]
    fn staircase_signs() {
        assert!(is_staircase(&[1, 1, -1]));
        assert!(is_staircase(&[-1, -1]));
        assert!(!is_staircase(&[-1, 1]));
    }
}
