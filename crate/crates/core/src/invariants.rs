//! Link invariants used to compare diagrams, and the homology of the
//! 4-manifold a Kirby diagram describes.

use crate::diagram::{framing_of, linking_matrix, simplify_diagram, Diagram, DiagramError};
use crate::lift::is_companion;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

pub const DEFAULT_BRACKET_CAP: usize = 24;
pub const DEFAULT_PRIMES: [u64; 3] = [3, 5, 7];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InvariantError {
    #[error("{crossings} crossings exceed the bracket cap {cap}")]
    TooManyCrossings { crossings: usize, cap: usize },
    #[error("{0} is not an odd prime")]
    BadPrime(u64),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Arc of each pass: arcs start right after under-passes.
struct Arcs {
    count: usize,
    /// per crossing: (over arc, under arc in, under arc out)
    at: Vec<(usize, usize, usize)>,
}

fn arcs(dg: &Diagram) -> Arcs {
    let mut at = vec![(0, 0, 0); dg.crossings.len()];
    let mut count = 0;
    for ps in &dg.passes {
        let unders: Vec<usize> = (0..ps.len()).filter(|&k| !ps[k].over).collect();
        if unders.is_empty() {
            for p in ps {
                at[p.crossing].0 = count;
            }
            count += 1;
            continue;
        }
        let base = count;
        let m = unders.len();
        // arc j runs from under pass j to under pass j+1
        let mut arc = m - 1;
        for p in ps {
            if p.over {
                at[p.crossing].0 = base + arc;
            } else {
                let incoming = base + arc;
                arc = (arc + 1) % m;
                at[p.crossing].1 = incoming;
                at[p.crossing].2 = base + arc;
            }
        }
        count += m;
    }
    Arcs { count, at }
}

fn is_odd_prime(p: u64) -> bool {
    p >= 3 && !p.is_multiple_of(2) && (3..).step_by(2).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Rank over `F_p` by Gaussian elimination.
fn rank_mod_p(mut rows: Vec<Vec<u64>>, cols: usize, p: u64) -> usize {
    let inv = |a: u64| {
        let (mut r, mut b, mut e) = (1u64, a % p, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let f = inv(rows[rank][c]);
        for x in rows[rank].iter_mut() {
            *x = *x * f % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let k = rows[r][c];
                for j in 0..cols {
                    rows[r][j] = (rows[r][j] + p * p - k * rows[rank][j] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// The coloring matrix over `F_p`: one row per crossing.
fn coloring_rows(dg: &Diagram, p: u64) -> (Vec<Vec<u64>>, usize) {
    let a = arcs(dg);
    let rows = a
        .at
        .iter()
        .map(|&(o, ui, uo)| {
            let mut row = vec![0u64; a.count];
            row[o] = (row[o] + 2) % p;
            row[ui] = (row[ui] + p - 1) % p;
            row[uo] = (row[uo] + p - 1) % p;
            row
        })
        .collect();
    (rows, a.count)
}

/// Number of Fox `p`-colorings, trivial ones included.
pub fn fox_colorings(dg: &Diagram, p: u64) -> Result<BigUint, InvariantError> {
    if !is_odd_prime(p) {
        return Err(InvariantError::BadPrime(p));
    }
    let (rows, cols) = coloring_rows(dg, p);
    let nullity = cols - rank_mod_p(rows, cols, p);
    Ok(BigUint::from(p).pow(nullity as u32))
}

/// Brute force count for small diagrams, as a check of [`fox_colorings`].
pub fn fox_colorings_brute(dg: &Diagram, p: u64) -> u64 {
    let (rows, cols) = coloring_rows(dg, p);
    let total = p.pow(cols as u32);
    (0..total)
        .filter(|&code| {
            let mut c = code;
            let colors: Vec<u64> = (0..cols)
                .map(|_| {
                    let v = c % p;
                    c /= p;
                    v
                })
                .collect();
            rows.iter()
                .all(|r| r.iter().zip(&colors).map(|(a, b)| a * b).sum::<u64>() % p == 0)
        })
        .count() as u64
}

/// Laurent polynomial in one variable with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Laurent {
    lo: i32,
    coeffs: Vec<i128>,
}

impl Laurent {
    pub fn monomial(exp: i32, c: i128) -> Self {
        Laurent { lo: exp, coeffs: vec![c] }.trimmed()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|&&c| c == 0).count();
        self.coeffs.drain(..lead);
        self.lo += lead as i32;
        if self.coeffs.is_empty() {
            self.lo = 0;
        }
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i128)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(i, &c)| (self.lo + i as i32, c))
    }

    pub fn add_assign(&mut self, o: &Laurent) {
        if o.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = o.clone();
            return;
        }
        let lo = self.lo.min(o.lo);
        let hi = (self.lo + self.coeffs.len() as i32).max(o.lo + o.coeffs.len() as i32);
        let mut c = vec![0i128; (hi - lo) as usize];
        for (e, v) in self.terms().chain(o.terms()) {
            c[(e - lo) as usize] += v;
        }
        *self = Laurent { lo, coeffs: c }.trimmed();
    }

    pub fn shift(&self, k: i32, sign: i128) -> Laurent {
        Laurent {
            lo: self.lo + k,
            coeffs: self.coeffs.iter().map(|c| c * sign).collect(),
        }
        .trimmed()
    }

    /// Times the loop value `d = -A^2 - A^-2`.
    pub fn times_loop(&self) -> Laurent {
        let mut r = self.shift(2, -1);
        r.add_assign(&self.shift(-2, -1));
        r
    }

    /// Exact division by `d = -A^2 - A^-2`.
    pub fn div_loop(&self) -> Option<Laurent> {
        let mut rem = self.clone();
        let mut q = Laurent::default();
        while !rem.is_zero() {
            let top = rem.lo + rem.coeffs.len() as i32 - 1;
            let c = *rem.coeffs.last().unwrap();
            let t = Laurent::monomial(top - 2, -c);
            if top - 2 < self.lo + 2 {
                return None;
            }
            rem.add_assign(&t.times_loop().shift(0, -1));
            q.add_assign(&t);
        }
        Some(q)
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self.terms().collect(), |e| format!("A^{e}"))
    }
}

fn write_poly(f: &mut fmt::Formatter<'_>, terms: Vec<(i32, i128)>, mono: impl Fn(i32) -> String) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (i, (e, c)) in terms.iter().rev().enumerate() {
        let (neg, a) = (*c < 0, c.abs());
        match (i, neg) {
            (0, true) => write!(f, "-")?,
            (0, false) => {}
            (_, true) => write!(f, " - ")?,
            (_, false) => write!(f, " + ")?,
        }
        if *e == 0 {
            write!(f, "{a}")?;
        } else if a == 1 {
            write!(f, "{}", mono(*e))?;
        } else {
            write!(f, "{a}*{}", mono(*e))?;
        }
    }
    Ok(())
}

/// Jones polynomial; keys are twice the exponent of `t`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Jones(pub BTreeMap<i32, i128>);

impl Jones {
    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0.get(&0) == Some(&1)
    }

    pub fn coefficients(&self) -> Vec<i128> {
        self.0.values().copied().collect()
    }
}

impl fmt::Display for Jones {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self.0.iter().map(|(&e, &c)| (e, c)).collect(), |e| {
            if e == 2 {
                "t".to_string()
            } else if e % 2 == 0 {
                format!("t^{}", e / 2)
            } else {
                format!("t^({e}/2)")
            }
        })
    }
}

/// PD quadruples as smoothing data: A joins `(i,j)(k,l)`, B joins
/// `(i,l)(j,k)`.
fn smoothings(dg: &Diagram) -> Vec<[u32; 4]> {
    dg.pd().iter().map(|x| x.edges.map(|e| e as u32)).collect()
}

/// Bracket by summing over all `2^c` states.
pub fn bracket_state_sum(dg: &Diagram) -> Laurent {
    let xs = smoothings(dg);
    let free = dg.free_components().len();
    let c = xs.len();
    let edges = 2 * c;
    let mut total = Laurent::default();
    for state in 0u64..(1u64 << c) {
        let mut parent: Vec<usize> = (0..=edges).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let n = p[y];
                p[y] = r;
                y = n;
            }
            r
        }
        let mut a = 0i32;
        for (k, x) in xs.iter().enumerate() {
            let [i, j, kk, l] = x.map(|e| e as usize);
            let pairs = if state >> k & 1 == 0 {
                a += 1;
                [(i, j), (kk, l)]
            } else {
                a -= 1;
                [(i, l), (j, kk)]
            };
            for (u, v) in pairs {
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                parent[ru] = rv;
            }
        }
        let loops = (1..=edges).filter(|&e| find(&mut parent, e) == e).count() + free;
        let mut term = Laurent::monomial(a, 1);
        for _ in 1..loops {
            term = term.times_loop();
        }
        total.add_assign(&term);
    }
    if c == 0 {
        let mut t = Laurent::one();
        for _ in 1..free.max(1) {
            t = t.times_loop();
        }
        return t;
    }
    total
}

/// Bracket by contracting crossings one at a time while tracking how the
/// open edges are joined.
pub fn bracket_frontier(dg: &Diagram) -> Laurent {
    let xs = smoothings(dg);
    let free = dg.free_components().len();
    if xs.is_empty() {
        let mut t = Laurent::one();
        for _ in 1..free.max(1) {
            t = t.times_loop();
        }
        return t;
    }
    // order crossings greedily so that few edges stay open
    let mut order = Vec::with_capacity(xs.len());
    let mut used = vec![false; xs.len()];
    let mut open_count: HashMap<u32, u8> = HashMap::new();
    for _ in 0..xs.len() {
        let best = (0..xs.len())
            .filter(|&k| !used[k])
            .max_by_key(|&k| {
                let touching = xs[k].iter().filter(|e| open_count.get(e).copied().unwrap_or(0) == 1).count();
                (touching, std::cmp::Reverse(k))
            })
            .unwrap();
        used[best] = true;
        order.push(best);
        for e in xs[best] {
            *open_count.entry(e).or_insert(0) += 1;
        }
    }
    type State = Vec<(u32, u32)>;
    let mut states: HashMap<State, Laurent> = HashMap::new();
    states.insert(Vec::new(), Laurent::one());
    for &k in &order {
        let [i, j, kk, l] = xs[k];
        let mut next: HashMap<State, Laurent> = HashMap::with_capacity(states.len() * 2);
        for (st, poly) in &states {
            for (a, pairs) in [(1, [(i, j), (kk, l)]), (-1, [(i, l), (j, kk)])] {
                let mut m: HashMap<u32, u32> = st.iter().flat_map(|&(u, v)| [(u, v), (v, u)]).collect();
                let mut loops = 0;
                for (p, q) in pairs {
                    join(&mut m, p, q, &mut loops);
                }
                let mut key: State = m.iter().filter(|(u, v)| u < v).map(|(&u, &v)| (u, v)).collect();
                key.sort_unstable();
                let mut term = poly.shift(a, 1);
                for _ in 0..loops {
                    term = term.times_loop();
                }
                next.entry(key).or_default().add_assign(&term);
            }
        }
        next.retain(|_, p| !p.is_zero());
        states = next;
    }
    let mut total = states.remove(&Vec::new()).unwrap_or_default();
    total = total.div_loop().expect("a closed diagram has at least one loop");
    for _ in 0..free {
        total = total.times_loop();
    }
    total
}

fn join(m: &mut HashMap<u32, u32>, p: u32, q: u32, loops: &mut usize) {
    if p == q {
        *loops += 1;
        return;
    }
    match (m.remove(&p), m.remove(&q)) {
        (None, None) => {
            m.insert(p, q);
            m.insert(q, p);
        }
        (Some(u), None) => {
            m.insert(u, q);
            m.insert(q, u);
        }
        (None, Some(v)) => {
            m.insert(v, p);
            m.insert(p, v);
        }
        (Some(u), Some(v)) => {
            if u == q {
                *loops += 1;
            } else {
                m.insert(u, v);
                m.insert(v, u);
            }
        }
    }
}

/// Bracket of a diagram, refusing diagrams above `cap` crossings.
pub fn kauffman_bracket(dg: &Diagram, cap: usize) -> Result<(Laurent, Jones), InvariantError> {
    if dg.crossing_count() > cap {
        return Err(InvariantError::TooManyCrossings {
            crossings: dg.crossing_count(),
            cap,
        });
    }
    let b = bracket_frontier(dg);
    let j = jones_from_bracket(&b, writhe(dg));
    Ok((b, j))
}

pub fn writhe(dg: &Diagram) -> i64 {
    dg.crossings.iter().map(|x| x.sign as i64).sum()
}

/// `V(t) = (-A^3)^(-w) <D>` at `A = t^(-1/4)`.
pub fn jones_from_bracket(b: &Laurent, w: i64) -> Jones {
    let sign = if w % 2 == 0 { 1 } else { -1 };
    let scaled = b.shift(-3 * w as i32, sign);
    let mut out = BTreeMap::new();
    for (e, c) in scaled.terms() {
        debug_assert!(e % 2 == 0, "odd power of A in a normalized bracket");
        out.insert(-e / 2, c);
    }
    Jones(out)
}

/// Per-component knot invariants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentStats {
    pub colorings: BTreeMap<u64, String>,
    pub jones: Option<Jones>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkEntry {
    pub a: String,
    pub b: String,
    pub lk: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub dotted: usize,
    pub attaching: usize,
    pub other: usize,
}

/// Invariants of a diagram, with components ordered by label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub counts: Counts,
    pub components: BTreeMap<String, ComponentStats>,
    /// Off-diagonal linking numbers, `a < b`.
    pub linking: Vec<LinkEntry>,
    pub framings: BTreeMap<String, i64>,
    pub colorings: BTreeMap<u64, String>,
    /// Jones polynomials of sublinks small enough for the bracket.
    pub jones: BTreeMap<String, Jones>,
}

#[derive(Debug, Clone, Copy)]
pub struct ReportOptions<'a> {
    pub primes: &'a [u64],
    pub bracket_cap: usize,
}

impl Default for ReportOptions<'_> {
    fn default() -> Self {
        ReportOptions {
            primes: &DEFAULT_PRIMES,
            bracket_cap: DEFAULT_BRACKET_CAP,
        }
    }
}

fn colorings_map(dg: &Diagram, primes: &[u64]) -> Result<BTreeMap<u64, String>, InvariantError> {
    primes.iter().map(|&p| Ok((p, fox_colorings(dg, p)?.to_string()))).collect()
}

fn small_jones(dg: &Diagram, cap: usize) -> Option<Jones> {
    let s = simplify_diagram(dg);
    kauffman_bracket(&s, cap).ok().map(|(_, j)| j)
}

fn role_of(label: &str) -> &str {
    label.split(':').next().unwrap_or("")
}

/// The report of a diagram. Companions (labels ending in `'`) are used for
/// framings and otherwise ignored.
pub fn invariant_report(dg: &Diagram, opts: ReportOptions) -> Result<InvariantReport, InvariantError> {
    let main = simplify_diagram(&dg.restrict(|l| !is_companion(l)));
    let mut counts = Counts {
        dotted: 0,
        attaching: 0,
        other: 0,
    };
    for l in &main.labels {
        match role_of(l) {
            "dotted" => counts.dotted += 1,
            "attaching" => counts.attaching += 1,
            _ => counts.other += 1,
        }
    }
    let mut components = BTreeMap::new();
    for l in &main.labels {
        let k = simplify_diagram(&main.restrict(|m| m == l));
        components.insert(
            l.clone(),
            ComponentStats {
                colorings: colorings_map(&k, opts.primes)?,
                jones: small_jones(&k, opts.bracket_cap),
            },
        );
    }
    let lm = linking_matrix(&main)?;
    let mut linking = Vec::new();
    for i in 0..lm.labels.len() {
        for j in 0..lm.labels.len() {
            if lm.labels[i] < lm.labels[j] {
                linking.push(LinkEntry {
                    a: lm.labels[i].clone(),
                    b: lm.labels[j].clone(),
                    lk: lm.entries[i][j],
                });
            }
        }
    }
    linking.sort_by(|x, y| (&x.a, &x.b).cmp(&(&y.a, &y.b)));
    let mut framings = BTreeMap::new();
    for l in &main.labels {
        if role_of(l) == "attaching" && dg.index_of(&crate::lift::companion_label(l)).is_some() {
            framings.insert(l.clone(), framing_of(l, dg)?);
        }
    }
    let mut jones = BTreeMap::new();
    let groups: [(&str, Box<dyn Fn(&str) -> bool>); 3] = [
        ("all", Box::new(|_: &str| true)),
        ("attaching", Box::new(|l: &str| role_of(l) == "attaching")),
        ("dotted", Box::new(|l: &str| role_of(l) == "dotted")),
    ];
    for (name, keep) in groups {
        let sub = main.restrict(|l| keep(l));
        if sub.labels.is_empty() {
            continue;
        }
        if let Some(j) = small_jones(&sub, opts.bracket_cap) {
            jones.insert(name.to_string(), j);
        }
    }
    Ok(InvariantReport {
        counts,
        components,
        linking,
        framings,
        colorings: colorings_map(&main, opts.primes)?,
        jones,
    })
}

impl InvariantReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).unwrap()
    }

    pub fn all_framings_zero(&self) -> bool {
        self.framings.values().all(|&f| f == 0)
    }

    /// Linking numbers with at least one attaching component.
    pub fn attaching_linking(&self) -> impl Iterator<Item = &LinkEntry> {
        self.linking
            .iter()
            .filter(|e| role_of(&e.a) == "attaching" || role_of(&e.b) == "attaching")
    }
}

/// One differing field of two reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportDiff {
    pub field: String,
    pub left: String,
    pub right: String,
}

impl fmt::Display for ReportDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} vs {}", self.field, self.left, self.right)
    }
}

/// Differences between reports. Jones polynomials are compared only where
/// both sides have them.
pub fn compare_reports(r1: &InvariantReport, r2: &InvariantReport) -> Vec<ReportDiff> {
    let mut out = Vec::new();
    let mut diff = |field: String, a: String, b: String| {
        if a != b {
            out.push(ReportDiff { field, left: a, right: b });
        }
    };
    diff("counts".into(), format!("{:?}", r1.counts), format!("{:?}", r2.counts));
    let labels: std::collections::BTreeSet<&String> = r1.components.keys().chain(r2.components.keys()).collect();
    for l in labels {
        match (r1.components.get(l), r2.components.get(l)) {
            (Some(a), Some(b)) => {
                diff(format!("components.{l}.colorings"), format!("{:?}", a.colorings), format!("{:?}", b.colorings));
                if let (Some(ja), Some(jb)) = (&a.jones, &b.jones) {
                    diff(format!("components.{l}.jones"), ja.to_string(), jb.to_string());
                }
            }
            (a, b) => diff(format!("components.{l}"), format!("{}", a.is_some()), format!("{}", b.is_some())),
        }
    }
    diff("linking".into(), format!("{:?}", r1.linking), format!("{:?}", r2.linking));
    diff("framings".into(), format!("{:?}", r1.framings), format!("{:?}", r2.framings));
    diff("colorings".into(), format!("{:?}", r1.colorings), format!("{:?}", r2.colorings));
    for (k, a) in &r1.jones {
        if let Some(b) = r2.jones.get(k) {
            diff(format!("jones.{k}"), a.to_string(), b.to_string());
        }
    }
    out
}

/// Homology of the 4-manifold of a Kirby diagram with `n` dotted circles and
/// `b` 2-handles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KirbyHomology {
    pub h1_rank: usize,
    /// Invariant factors greater than 1.
    pub h1_torsion: Vec<i64>,
    pub h2_rank: usize,
    pub chi: i64,
}

impl fmt::Display for KirbyHomology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H1=Z^{}", self.h1_rank)?;
        for t in &self.h1_torsion {
            write!(f, "+Z/{t}")?;
        }
        write!(f, " H2=Z^{} chi={}", self.h2_rank, self.chi)
    }
}

/// Diagonal of the Smith normal form (nonzero entries, in order).
pub fn smith_diagonal(mut m: Vec<Vec<i64>>) -> Vec<i64> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let Some((pr, pc)) = (t..rows)
            .flat_map(|r| (t..cols).map(move |c| (r, c)))
            .filter(|&(r, c)| m[r][c] != 0)
            .min_by_key(|&(r, c)| m[r][c].abs())
        else {
            break;
        };
        m.swap(t, pr);
        for row in m.iter_mut() {
            row.swap(t, pc);
        }
        let mut clean = true;
        for r in t + 1..rows {
            let q = m[r][t] / m[t][t];
            for c in t..cols {
                m[r][c] -= q * m[t][c];
            }
            clean &= m[r][t] == 0;
        }
        for c in t + 1..cols {
            let q = m[t][c] / m[t][t];
            for r in t..rows {
                m[r][c] -= q * m[r][t];
            }
            clean &= m[t][c] == 0;
        }
        if !clean {
            continue;
        }
        // divisibility: fold in any entry the pivot does not divide
        if let Some(r) = (t + 1..rows).find(|&r| (t + 1..cols).any(|c| m[r][c] % m[t][t] != 0)) {
            for c in t..cols {
                m[t][c] += m[r][c];
            }
            continue;
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    diag
}

/// Homology from the attaching-by-dotted linking block (`b` rows, `n`
/// columns).
pub fn kirby_homology(block: &[Vec<i64>], n: usize) -> KirbyHomology {
    let b = block.len();
    let d = smith_diagonal(block.to_vec());
    let rank = d.len();
    KirbyHomology {
        h1_rank: n - rank,
        h1_torsion: d.into_iter().filter(|&x| x > 1).collect(),
        h2_rank: b - rank,
        chi: 1 - n as i64 + b as i64,
    }
}

/// The attaching-by-dotted block of a report, rows and columns by label.
pub fn homology_of_report(r: &InvariantReport) -> KirbyHomology {
    let mut dotted: Vec<&String> = r.components.keys().filter(|l| role_of(l) == "dotted").collect();
    let mut attaching: Vec<&String> = r.components.keys().filter(|l| role_of(l) == "attaching").collect();
    dotted.sort();
    attaching.sort();
    let lk = |a: &str, b: &str| {
        r.linking
            .iter()
            .find(|e| (e.a == a && e.b == b) || (e.a == b && e.b == a))
            .map_or(0, |e| e.lk)
    };
    let block: Vec<Vec<i64>> = attaching
        .iter()
        .map(|a| dotted.iter().map(|d| lk(a, d)).collect())
        .collect();
    kirby_homology(&block, dotted.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{Crossing, Pass};

    fn knot(passes: Vec<(usize, bool)>, signs: Vec<i8>) -> Diagram {
        Diagram {
            labels: vec!["k".into()],
            passes: vec![passes.into_iter().map(|(c, o)| Pass { crossing: c, over: o }).collect()],
            crossings: signs.into_iter().map(|s| Crossing { sign: s, over: 0, under: 0 }).collect(),
            meta: None,
            planar: None,
        }
    }

    /// Standard trefoil Gauss code O1 U2 O3 U1 O2 U3, all signs equal.
    fn trefoil(s: i8) -> Diagram {
        knot(
            vec![(0, true), (1, false), (2, true), (0, false), (1, true), (2, false)],
            vec![s; 3],
        )
    }

    fn hopf(s: i8) -> Diagram {
        Diagram {
            labels: vec!["a".into(), "b".into()],
            passes: vec![
                vec![Pass { crossing: 0, over: true }, Pass { crossing: 1, over: false }],
                vec![Pass { crossing: 0, over: false }, Pass { crossing: 1, over: true }],
            ],
            crossings: vec![Crossing { sign: s, over: 0, under: 1 }, Crossing { sign: s, over: 1, under: 0 }],
            meta: None,
            planar: None,
        }
    }

    #[test]
    fn kinks_have_trivial_jones() {
        for s in [1, -1] {
            let k = knot(vec![(0, true), (0, false)], vec![s]);
            let (_, j) = kauffman_bracket(&k, 24).unwrap();
            assert!(j.is_one(), "{j}");
        }
    }

    #[test]
    fn trefoil_jones_and_colorings() {
        let (_, j) = kauffman_bracket(&trefoil(1), 24).unwrap();
        assert_eq!(j.to_string(), "-t^4 + t^3 + t");
        let (_, m) = kauffman_bracket(&trefoil(-1), 24).unwrap();
        assert_eq!(m.to_string(), "t^-1 + t^-3 - t^-4");
        assert_eq!(fox_colorings(&trefoil(1), 3).unwrap(), BigUint::from(9u32));
        assert_eq!(fox_colorings_brute(&trefoil(1), 3), 9);
        assert_eq!(fox_colorings(&trefoil(1), 5).unwrap(), BigUint::from(5u32));
    }

    #[test]
    fn hopf_jones_has_two_terms() {
        let (_, j) = kauffman_bracket(&hopf(1), 24).unwrap();
        assert_eq!(j.to_string(), "-t^(5/2) - t^(1/2)");
        assert_eq!(fox_colorings(&hopf(1), 3).unwrap(), BigUint::from(3u32));
    }

    #[test]
    fn frontier_matches_state_sum() {
        for d in [trefoil(1), trefoil(-1), hopf(1), hopf(-1)] {
            assert_eq!(bracket_frontier(&d), bracket_state_sum(&d));
        }
    }

    #[test]
    fn loop_division_inverts_multiplication() {
        let p = Laurent::monomial(3, 2).times_loop().times_loop();
        assert_eq!(p.div_loop().unwrap().div_loop().unwrap(), Laurent::monomial(3, 2));
        assert!(Laurent::monomial(0, 1).div_loop().is_none());
    }

    #[test]
    fn smith_form_examples() {
        assert_eq!(smith_diagonal(vec![vec![2, 4], vec![6, 8]]), vec![2, 4]);
        assert_eq!(smith_diagonal(vec![vec![0, 0, 0]]), Vec::<i64>::new());
        let h = kirby_homology(&vec![vec![0, 0]; 3], 2);
        assert_eq!(h.to_string(), "H1=Z^2 H2=Z^3 chi=2");
        let h = kirby_homology(&[vec![2]], 1);
        assert_eq!((h.h1_rank, h.h1_torsion.clone(), h.h2_rank), (0, vec![2], 0));
    }
}
