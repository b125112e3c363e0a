//! Planar diagrams of links on the round sphere.
//!
//! A link is sent to `R^3` by stereographic projection from a pole on the
//! circle `y = 0`, then orthogonally onto a plane. Crossings are found on
//! floating-point data and accepted only when every crossing is transversal
//! with margin; otherwise the next pole or direction is tried.
//!
//! PD quadruples list edge labels counterclockwise starting from the
//! incoming under-strand.

use crate::lift::{companion_label, PLLink};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DiagramError {
    #[error("no generic projection found after {attempts} attempts: {reason}")]
    NoGenericProjection { attempts: usize, reason: String },
    #[error("no pushoff companion for {0}")]
    MissingCompanion(String),
    #[error("unknown component {0}")]
    UnknownComponent(String),
    #[error("odd signed crossing sum between {0} and {1}")]
    OddLinking(String, String),
    #[error("malformed diagram: {0}")]
    Malformed(String),
}

/// Number of pole candidates `(cos(k pi/17), sin(k pi/17), 0, 0)`.
pub const POLE_COUNT: usize = 34;
/// Poles this close (in angle) to an interval endpoint are skipped.
pub const POLE_ENDPOINT_GAP: f64 = 1.0 / 50.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionConfig {
    /// Preferred pole index; `None` picks the pole farthest from the link.
    pub pole: Option<usize>,
    /// First direction candidate.
    pub direction: usize,
    pub max_poles: usize,
    pub directions_per_pole: usize,
    /// Relative margin (times the diagram size) for transversality tests.
    pub margin: f64,
}

impl Default for ProjectionConfig {
    fn default() -> Self {
        ProjectionConfig {
            pole: None,
            direction: 0,
            max_poles: 6,
            directions_per_pole: 8,
            margin: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionMeta {
    pub pole: usize,
    pub direction_index: usize,
    pub direction: [f64; 3],
    pub margin: f64,
    pub retries: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pass {
    pub crossing: usize,
    pub over: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub sign: i8,
    pub over: usize,
    pub under: usize,
}

/// Projected curves and crossing locations, kept for drawing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Planar {
    pub curves: Vec<Vec<[f64; 2]>>,
    pub crossings: Vec<CrossingPlace>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossingPlace {
    pub at: [f64; 2],
    /// Direction of the under strand, for drawing its gap.
    pub under_dir: [f64; 2],
    pub under: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagram {
    pub labels: Vec<String>,
    pub passes: Vec<Vec<Pass>>,
    pub crossings: Vec<Crossing>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<ProjectionMeta>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub planar: Option<Planar>,
}

/// One PD quadruple with its sign and components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PdCrossing {
    pub edges: [usize; 4],
    pub sign: i8,
    pub over: usize,
    pub under: usize,
}

#[derive(Serialize)]
struct DiagramFileOut<'a> {
    #[serde(flatten)]
    diagram: &'a Diagram,
    pd: Vec<PdCrossing>,
    free: Vec<&'a str>,
}

impl Diagram {
    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn component_count(&self) -> usize {
        self.labels.len()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Labels of components without crossings.
    pub fn free_components(&self) -> Vec<usize> {
        (0..self.labels.len()).filter(|&c| self.passes[c].is_empty()).collect()
    }

    /// Edges run from one pass to the next along a component; edge ids
    /// start at 1.
    fn edge_ids(&self) -> Vec<Vec<usize>> {
        let mut next = 1;
        self.passes
            .iter()
            .map(|ps| {
                let ids: Vec<usize> = (0..ps.len()).map(|k| next + k).collect();
                next += ps.len();
                ids
            })
            .collect()
    }

    pub fn pd(&self) -> Vec<PdCrossing> {
        let edges = self.edge_ids();
        let mut slots = vec![[0usize; 4]; self.crossings.len()];
        for (c, ps) in self.passes.iter().enumerate() {
            let m = ps.len();
            for (k, p) in ps.iter().enumerate() {
                let incoming = edges[c][(k + m - 1) % m];
                let outgoing = edges[c][k];
                let s = &mut slots[p.crossing];
                if p.over {
                    s[2] = incoming;
                    s[3] = outgoing;
                } else {
                    s[0] = incoming;
                    s[1] = outgoing;
                }
            }
        }
        self.crossings
            .iter()
            .zip(&slots)
            .map(|(x, &[ui, uo, oi, oo])| PdCrossing {
                edges: if x.sign > 0 { [ui, oo, uo, oi] } else { [ui, oi, uo, oo] },
                sign: x.sign,
                over: x.over,
                under: x.under,
            })
            .collect()
    }

    pub fn pd_text(&self) -> String {
        let mut out = String::from("# PD: edges counterclockwise from the incoming under-strand\n");
        for x in self.pd() {
            let [i, j, k, l] = x.edges;
            let _ = writeln!(
                out,
                "X[{i},{j},{k},{l}] sign={} over={} under={}",
                if x.sign > 0 { "+1" } else { "-1" },
                self.labels[x.over],
                self.labels[x.under]
            );
        }
        for c in self.free_components() {
            let _ = writeln!(out, "# crossingless {}", self.labels[c]);
        }
        out
    }

    /// One line per component: `label: O1+ U2- ...` (crossings numbered
    /// from 1).
    pub fn gauss_text(&self) -> String {
        let mut out = String::new();
        for (c, ps) in self.passes.iter().enumerate() {
            let _ = write!(out, "{}:", self.labels[c]);
            if ps.is_empty() {
                out.push_str(" (none)");
            }
            for p in ps {
                let s = if self.crossings[p.crossing].sign > 0 { '+' } else { '-' };
                let _ = write!(out, " {}{}{s}", if p.over { 'O' } else { 'U' }, p.crossing + 1);
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let labels: Vec<&str> = self.free_components().into_iter().map(|c| self.labels[c].as_str()).collect();
        serde_json::to_string_pretty(&DiagramFileOut {
            diagram: self,
            pd: self.pd(),
            free: labels,
        })
        .unwrap()
    }

    pub fn from_json(text: &str) -> Result<Self, DiagramError> {
        let d: Diagram = serde_json::from_str(text).map_err(|e| DiagramError::Malformed(e.to_string()))?;
        d.check()?;
        Ok(d)
    }

    /// Every crossing is passed exactly once over and once under, by the
    /// components it names.
    pub fn check(&self) -> Result<(), DiagramError> {
        if self.passes.len() != self.labels.len() {
            return Err(DiagramError::Malformed("passes and labels differ in length".into()));
        }
        let mut seen = vec![[false; 2]; self.crossings.len()];
        for (c, ps) in self.passes.iter().enumerate() {
            for p in ps {
                let x = self
                    .crossings
                    .get(p.crossing)
                    .ok_or_else(|| DiagramError::Malformed(format!("crossing {} out of range", p.crossing)))?;
                let (want, slot) = if p.over { (x.over, 0) } else { (x.under, 1) };
                if want != c || seen[p.crossing][slot] {
                    return Err(DiagramError::Malformed(format!("crossing {} passes are inconsistent", p.crossing)));
                }
                seen[p.crossing][slot] = true;
            }
        }
        if seen.iter().any(|s| !(s[0] && s[1])) {
            return Err(DiagramError::Malformed("crossing missing a pass".into()));
        }
        if self.crossings.iter().any(|x| x.sign.abs() != 1) {
            return Err(DiagramError::Malformed("sign must be +1 or -1".into()));
        }
        Ok(())
    }

    /// Keeps the components whose label passes `keep`, with the crossings
    /// among them.
    pub fn restrict(&self, keep: impl Fn(&str) -> bool) -> Diagram {
        let kept: Vec<usize> = (0..self.labels.len()).filter(|&c| keep(&self.labels[c])).collect();
        let mut new_comp = vec![usize::MAX; self.labels.len()];
        for (i, &c) in kept.iter().enumerate() {
            new_comp[c] = i;
        }
        let mut new_id = vec![usize::MAX; self.crossings.len()];
        let mut crossings = Vec::new();
        for (i, x) in self.crossings.iter().enumerate() {
            if new_comp[x.over] != usize::MAX && new_comp[x.under] != usize::MAX {
                new_id[i] = crossings.len();
                crossings.push(Crossing {
                    sign: x.sign,
                    over: new_comp[x.over],
                    under: new_comp[x.under],
                });
            }
        }
        let passes = kept
            .iter()
            .map(|&c| {
                self.passes[c]
                    .iter()
                    .filter(|p| new_id[p.crossing] != usize::MAX)
                    .map(|p| Pass {
                        crossing: new_id[p.crossing],
                        over: p.over,
                    })
                    .collect()
            })
            .collect();
        Diagram {
            labels: kept.iter().map(|&c| self.labels[c].clone()).collect(),
            passes,
            crossings,
            meta: self.meta.clone(),
            planar: None,
        }
    }

    /// Drops the crossings in `gone` and renumbers the rest.
    fn remove_crossings(&mut self, gone: &[usize]) {
        let mut new_id = vec![usize::MAX; self.crossings.len()];
        let mut crossings = Vec::new();
        for (i, x) in self.crossings.iter().enumerate() {
            if !gone.contains(&i) {
                new_id[i] = crossings.len();
                crossings.push(*x);
            }
        }
        for ps in &mut self.passes {
            ps.retain(|p| new_id[p.crossing] != usize::MAX);
            for p in ps.iter_mut() {
                p.crossing = new_id[p.crossing];
            }
        }
        self.crossings = crossings;
        self.planar = None;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkingMatrix {
    pub labels: Vec<String>,
    /// `entries[i][j] = lk(K_i, K_j)` off the diagonal, writhe on it.
    pub entries: Vec<Vec<i64>>,
}

impl LinkingMatrix {
    pub fn get(&self, a: &str, b: &str) -> Option<i64> {
        let i = self.labels.iter().position(|l| l == a)?;
        let j = self.labels.iter().position(|l| l == b)?;
        Some(self.entries[i][j])
    }

    /// Off-diagonal entries between components whose labels satisfy the
    /// two predicates.
    pub fn block(&self, rows: impl Fn(&str) -> bool, cols: impl Fn(&str) -> bool) -> Vec<i64> {
        let mut out = Vec::new();
        for (i, a) in self.labels.iter().enumerate() {
            for (j, b) in self.labels.iter().enumerate() {
                if i != j && rows(a) && cols(b) {
                    out.push(self.entries[i][j]);
                }
            }
        }
        out
    }
}

pub fn linking_matrix(dg: &Diagram) -> Result<LinkingMatrix, DiagramError> {
    let n = dg.labels.len();
    let mut twice = vec![vec![0i64; n]; n];
    for x in &dg.crossings {
        let s = x.sign as i64;
        if x.over == x.under {
            twice[x.over][x.over] += 2 * s;
        } else {
            twice[x.over][x.under] += s;
            twice[x.under][x.over] += s;
        }
    }
    let mut entries = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            if twice[i][j] % 2 != 0 {
                return Err(DiagramError::OddLinking(dg.labels[i].clone(), dg.labels[j].clone()));
            }
            entries[i][j] = twice[i][j] / 2;
        }
    }
    Ok(LinkingMatrix {
        labels: dg.labels.clone(),
        entries,
    })
}

/// `lk(K, K')` for the component labelled `label` and its companion.
pub fn framing_of(label: &str, dg: &Diagram) -> Result<i64, DiagramError> {
    let comp = companion_label(label);
    let i = dg.index_of(label).ok_or_else(|| DiagramError::UnknownComponent(label.into()))?;
    let j = dg.index_of(&comp).ok_or(DiagramError::MissingCompanion(label.into()))?;
    let mut twice = 0i64;
    for x in &dg.crossings {
        if (x.over == i && x.under == j) || (x.over == j && x.under == i) {
            twice += x.sign as i64;
        }
    }
    if twice % 2 != 0 {
        return Err(DiagramError::OddLinking(label.into(), comp));
    }
    Ok(twice / 2)
}

/// Greedy Reidemeister I and II reductions on the passes.
pub fn simplify_diagram(dg: &Diagram) -> Diagram {
    let mut d = dg.clone();
    loop {
        if let Some(x) = find_kink(&d) {
            d.remove_crossings(&[x]);
            continue;
        }
        if let Some((x, y)) = find_bigon(&d) {
            d.remove_crossings(&[x, y]);
            continue;
        }
        break;
    }
    d
}

fn cyclic_pairs(ps: &[Pass]) -> impl Iterator<Item = (Pass, Pass)> + '_ {
    let m = ps.len();
    (0..if m >= 2 { m } else { 0 }).map(move |k| (ps[k], ps[(k + 1) % m]))
}

fn find_kink(d: &Diagram) -> Option<usize> {
    d.passes
        .iter()
        .flat_map(|ps| cyclic_pairs(ps))
        .find(|(a, b)| a.crossing == b.crossing)
        .map(|(a, _)| a.crossing)
}

fn find_bigon(d: &Diagram) -> Option<(usize, usize)> {
    let mut under_pairs = std::collections::HashSet::new();
    for ps in &d.passes {
        for (a, b) in cyclic_pairs(ps) {
            if !a.over && !b.over && a.crossing != b.crossing {
                under_pairs.insert((a.crossing.min(b.crossing), a.crossing.max(b.crossing)));
            }
        }
    }
    for ps in &d.passes {
        for (a, b) in cyclic_pairs(ps) {
            if a.over && b.over && a.crossing != b.crossing {
                let key = (a.crossing.min(b.crossing), a.crossing.max(b.crossing));
                if under_pairs.contains(&key) && d.crossings[key.0].sign == -d.crossings[key.1].sign {
                    return Some(key);
                }
            }
        }
    }
    None
}

/// Pole `k` on the circle `y = 0`.
pub fn pole(k: usize) -> [f64; 4] {
    let th = k as f64 * PI / 17.0;
    [th.cos(), th.sin(), 0.0, 0.0]
}

/// Stereographic projection from pole `k`.
pub fn stereographic(p: &[f64; 4], k: usize) -> [f64; 3] {
    let th = k as f64 * PI / 17.0;
    let (c, s) = (th.cos(), th.sin());
    let along = p[0] * c + p[1] * s;
    let side = -p[0] * s + p[1] * c;
    let den = 1.0 - along;
    [side / den, p[2] / den, p[3] / den]
}

/// Direction candidate `k`, spread over the sphere and away from the axes.
pub fn direction(k: usize) -> [f64; 3] {
    let frac = |x: f64| x - x.floor();
    let j = k as f64 + 1.0;
    let z = 1.0 - 2.0 * frac(0.381_966_011_250_105 * j + 0.123_4);
    let phi = 2.0 * PI * frac(0.754_877_666_246_693 * j + 0.569_840_3);
    let r = (1.0 - z * z).sqrt();
    [r * phi.cos(), r * phi.sin(), z]
}

fn frame(n: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let pick = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let d = pick[0] * n[0] + pick[1] * n[1] + pick[2] * n[2];
    let mut u = [pick[0] - d * n[0], pick[1] - d * n[1], pick[2] - d * n[2]];
    let l = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
    u = [u[0] / l, u[1] / l, u[2] / l];
    // v = n x u, so (u, v, n) is right handed
    let v = [
        n[1] * u[2] - n[2] * u[1],
        n[2] * u[0] - n[0] * u[2],
        n[0] * u[1] - n[1] * u[0],
    ];
    (u, v)
}

/// Admissible poles, best first: far from interval endpoints, then by
/// distance to the link.
pub fn pole_order(link: &PLLink) -> Vec<usize> {
    let ends: Vec<f64> = link
        .loops
        .iter()
        .flat_map(|l| l.points.iter())
        .filter(|p| p[2].abs() + p[3].abs() < 1e-12)
        .map(|p| p[1].atan2(p[0]))
        .collect();
    let mut cands: Vec<(usize, f64)> = (0..POLE_COUNT)
        .filter(|&k| {
            let th = k as f64 * PI / 17.0;
            ends.iter().all(|&e| {
                let d = (th - e).rem_euclid(2.0 * PI);
                d.min(2.0 * PI - d) >= POLE_ENDPOINT_GAP
            })
        })
        .map(|k| {
            let n = pole(k);
            let clearance = link
                .loops
                .iter()
                .flat_map(|l| l.points.iter())
                .map(|p| (0..4).map(|i| (p[i] - n[i]).powi(2)).sum::<f64>())
                .fold(f64::MAX, f64::min);
            (k, clearance)
        })
        .collect();
    cands.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    cands.into_iter().map(|c| c.0).collect()
}

struct Seg2 {
    comp: usize,
    idx: usize,
    a: [f64; 2],
    b: [f64; 2],
    da: f64,
    db: f64,
    xmin: f64,
    xmax: f64,
}

struct Hit {
    over: (usize, usize, f64),
    under: (usize, usize, f64),
    at: [f64; 2],
    under_dir: [f64; 2],
    sign: i8,
}

fn try_projection(curves3: &[Vec<[f64; 3]>], n: [f64; 3], margin: f64) -> Result<(Vec<Vec<[f64; 2]>>, Vec<Hit>), String> {
    let (u, v) = frame(n);
    let dot = |p: &[f64; 3], q: &[f64; 3]| p[0] * q[0] + p[1] * q[1] + p[2] * q[2];
    let curves: Vec<Vec<[f64; 2]>> = curves3
        .iter()
        .map(|c| c.iter().map(|p| [dot(p, &u), dot(p, &v)]).collect())
        .collect();
    let depth: Vec<Vec<f64>> = curves3.iter().map(|c| c.iter().map(|p| dot(p, &n)).collect()).collect();
    let (mut lo, mut hi) = ([f64::MAX; 2], [f64::MIN; 2]);
    for p in curves.iter().flatten() {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let size = ((hi[0] - lo[0]).powi(2) + (hi[1] - lo[1]).powi(2)).sqrt().max(1e-300);
    let tol = margin * size;
    let mut segs = Vec::new();
    for (c, pts) in curves.iter().enumerate() {
        let m = pts.len();
        for i in 0..m {
            let (a, b) = (pts[i], pts[(i + 1) % m]);
            segs.push(Seg2 {
                comp: c,
                idx: i,
                a,
                b,
                da: depth[c][i],
                db: depth[c][(i + 1) % m],
                xmin: a[0].min(b[0]),
                xmax: a[0].max(b[0]),
            });
        }
    }
    segs.sort_by(|s, t| s.xmin.partial_cmp(&t.xmin).unwrap());
    let lens: Vec<usize> = curves.iter().map(|c| c.len()).collect();
    let mut hits = Vec::new();
    for i in 0..segs.len() {
        let s = &segs[i];
        for t in &segs[i + 1..] {
            if t.xmin > s.xmax + tol {
                break;
            }
            if s.a[1].max(s.b[1]) + tol < t.a[1].min(t.b[1]) || t.a[1].max(t.b[1]) + tol < s.a[1].min(s.b[1]) {
                continue;
            }
            if s.comp == t.comp {
                let m = lens[s.comp];
                let gap = (s.idx + m - t.idx) % m;
                if gap == 1 || gap == m - 1 || m <= 2 {
                    continue;
                }
            }
            let r = s.b.sub(s.a);
            let q = t.b.sub(t.a);
            let den = r.cross(q);
            let w = t.a.sub(s.a);
            let lr = r.len();
            let lq = q.len();
            if den.abs() > 1e-7 * lr * lq {
                let ts = w.cross(q) / den;
                let tt = w.cross(r) / den;
                let in_s = ts * lr > -tol && (1.0 - ts) * lr > -tol;
                let in_t = tt * lq > -tol && (1.0 - tt) * lq > -tol;
                if in_s && in_t {
                    let clear = ts * lr > tol && (1.0 - ts) * lr > tol && tt * lq > tol && (1.0 - tt) * lq > tol;
                    if !clear {
                        return Err("crossing too close to a vertex".into());
                    }
                    let ds = s.da + ts * (s.db - s.da);
                    let dt = t.da + tt * (t.db - t.da);
                    if (ds - dt).abs() <= tol {
                        return Err("strands meet in depth".into());
                    }
                    let (over, under, o, un) = if ds > dt {
                        ((s.comp, s.idx, ts), (t.comp, t.idx, tt), r, q)
                    } else {
                        ((t.comp, t.idx, tt), (s.comp, s.idx, ts), q, r)
                    };
                    let sign = if o.cross(un) > 0.0 { 1 } else { -1 };
                    hits.push(Hit {
                        over,
                        under,
                        at: [s.a[0] + ts * r[0], s.a[1] + ts * r[1]],
                        under_dir: [un[0] / un.len(), un[1] / un.len()],
                        sign,
                    });
                    continue;
                }
            }
            // no proper crossing: reject near misses
            if segment_distance2(&s.a, &s.b, &t.a, &t.b) <= tol {
                return Err("near tangency in projection".into());
            }
        }
    }
    // two crossings at one point would be a triple point
    let mut pts: Vec<[f64; 2]> = hits.iter().map(|h| h.at).collect();
    pts.sort_by(|a, b| a[0].partial_cmp(&b[0]).unwrap());
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if pts[j][0] - pts[i][0] > tol {
                break;
            }
            if (pts[j][1] - pts[i][1]).abs() <= tol {
                return Err("triple point".into());
            }
        }
    }
    Ok((curves, hits))
}

trait Vec2 {
    fn sub(self, o: Self) -> Self;
    fn cross(self, o: Self) -> f64;
    fn len(self) -> f64;
}

impl Vec2 for [f64; 2] {
    fn sub(self, o: Self) -> Self {
        [self[0] - o[0], self[1] - o[1]]
    }
    fn cross(self, o: Self) -> f64 {
        self[0] * o[1] - self[1] * o[0]
    }
    fn len(self) -> f64 {
        self[0].hypot(self[1])
    }
}

fn segment_distance2(a: &[f64; 2], b: &[f64; 2], c: &[f64; 2], d: &[f64; 2]) -> f64 {
    crate::lift::segment_distance(a, b, c, d)
}

fn assemble(labels: Vec<String>, curves: Vec<Vec<[f64; 2]>>, hits: Vec<Hit>, meta: ProjectionMeta) -> Diagram {
    let n = labels.len();
    let mut events: Vec<Vec<(usize, f64, Pass)>> = vec![Vec::new(); n];
    let mut crossings = Vec::with_capacity(hits.len());
    let mut places = Vec::with_capacity(hits.len());
    for (id, h) in hits.iter().enumerate() {
        crossings.push(Crossing {
            sign: h.sign,
            over: h.over.0,
            under: h.under.0,
        });
        places.push(CrossingPlace {
            at: h.at,
            under_dir: h.under_dir,
            under: h.under.0,
        });
        events[h.over.0].push((h.over.1, h.over.2, Pass { crossing: id, over: true }));
        events[h.under.0].push((h.under.1, h.under.2, Pass { crossing: id, over: false }));
    }
    let passes = events
        .into_iter()
        .map(|mut ev| {
            ev.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.partial_cmp(&b.1).unwrap()));
            ev.into_iter().map(|e| e.2).collect()
        })
        .collect();
    Diagram {
        labels,
        passes,
        crossings,
        meta: Some(meta),
        planar: Some(Planar { curves, crossings: places }),
    }
}

/// Projects a link to a planar diagram, retrying poles and directions
/// until every crossing is transversal with margin.
pub fn project_link(link: &PLLink, cfg: &ProjectionConfig) -> Result<Diagram, DiagramError> {
    let mut poles = pole_order(link);
    if let Some(k) = cfg.pole {
        poles.retain(|&p| p != k);
        poles.insert(0, k % POLE_COUNT);
    }
    poles.truncate(cfg.max_poles.max(1));
    let labels: Vec<String> = link.loops.iter().map(|l| l.label.clone()).collect();
    let mut attempts = 0;
    let mut reason = String::from("no admissible pole");
    for &k in &poles {
        let curves3: Vec<Vec<[f64; 3]>> = link
            .loops
            .iter()
            .map(|l| l.points.iter().map(|p| stereographic(p, k)).collect())
            .collect();
        for d in cfg.direction..cfg.direction + cfg.directions_per_pole.max(1) {
            let n = direction(d);
            match try_projection(&curves3, n, cfg.margin) {
                Ok((curves, hits)) => {
                    let meta = ProjectionMeta {
                        pole: k,
                        direction_index: d,
                        direction: n,
                        margin: cfg.margin,
                        retries: attempts,
                    };
                    return Ok(assemble(labels, curves, hits, meta));
                }
                Err(e) => reason = e,
            }
            attempts += 1;
        }
    }
    Err(DiagramError::NoGenericProjection { attempts, reason })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lift::PLLoop;

    fn circle(f: impl Fn(f64) -> [f64; 4], n: usize, label: &str) -> PLLoop {
        PLLoop {
            label: label.into(),
            points: (0..n).map(|i| f(2.0 * PI * i as f64 / n as f64)).collect(),
        }
    }

    /// Great circles in the orthogonal planes `(x1, y1)` and `(x2, y2)`.
    fn hopf() -> PLLink {
        PLLink::new(vec![
            circle(|t| [t.cos(), 0.0, t.sin(), 0.0], 64, "a"),
            circle(|t| [0.0, t.cos(), 0.0, t.sin()], 64, "b"),
        ])
    }

    #[test]
    fn hopf_fibres_link_once() {
        let d = project_link(&hopf(), &ProjectionConfig::default()).unwrap();
        d.check().unwrap();
        let s = simplify_diagram(&d);
        assert_eq!(s.crossing_count(), 2);
        let lk = linking_matrix(&d).unwrap();
        assert_eq!(lk.get("a", "b").unwrap().abs(), 1);
    }

    #[test]
    fn linking_is_stable_across_poles() {
        let link = hopf();
        let mut seen = Vec::new();
        for k in pole_order(&link).into_iter().take(3) {
            let cfg = ProjectionConfig {
                pole: Some(k),
                ..Default::default()
            };
            let d = project_link(&link, &cfg).unwrap();
            seen.push(linking_matrix(&d).unwrap().get("a", "b").unwrap());
        }
        assert!(seen.windows(2).all(|w| w[0] == w[1]), "{seen:?}");
    }

    #[test]
    fn kink_and_bigon_vanish() {
        // one component with a kink, plus a pair passing over twice
        let d = Diagram {
            labels: vec!["k".into(), "m".into()],
            passes: vec![
                vec![
                    Pass { crossing: 0, over: true },
                    Pass { crossing: 0, over: false },
                    Pass { crossing: 1, over: true },
                    Pass { crossing: 2, over: true },
                ],
                vec![Pass { crossing: 2, over: false }, Pass { crossing: 1, over: false }],
            ],
            crossings: vec![
                Crossing { sign: 1, over: 0, under: 0 },
                Crossing { sign: 1, over: 0, under: 1 },
                Crossing { sign: -1, over: 0, under: 1 },
            ],
            meta: None,
            planar: None,
        };
        d.check().unwrap();
        let s = simplify_diagram(&d);
        assert_eq!(s.crossing_count(), 0);
        assert_eq!(s.free_components().len(), 2);
    }

    #[test]
    fn pd_edges_form_cycles() {
        let d = project_link(&hopf(), &ProjectionConfig::default()).unwrap();
        let pd = d.pd();
        let mut count = std::collections::HashMap::new();
        for x in &pd {
            for e in x.edges {
                *count.entry(e).or_insert(0) += 1;
            }
        }
        assert!(count.values().all(|&c| c == 2));
        assert_eq!(count.len(), 2 * pd.len());
        let back = Diagram::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
    }
}
