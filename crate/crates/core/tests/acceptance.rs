//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the lines show up in plain `cargo test` output.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use arr2kirby::arrangement::{enumerate_chambers, fiber_chambers, normalize, Arrangement, Line, Point};
use arr2kirby::corpus::{builtin_corpus, check_calibration, entry_reports, EntryReports};
use arr2kirby::diagram::{linking_matrix, project_link, simplify_diagram, POLE_COUNT};
use arr2kirby::invariants::{compare_reports, homology_of_report, InvariantReport, KirbyHomology};
use arr2kirby::lift::{
    complement_membership, fs_circle, lift_with_pushoffs, on_square_sphere, project_round, PLLink, PLLoop,
    Retraction, SEPARATION_FACTOR,
};
use arr2kirby::moves::{apply_move, reduction_sequence};
use arr2kirby::pipeline::{kirby_divide, prepare, PipelineConfig};
use arr2kirby::rational::{int, rat, Rat};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_rat(r: &mut ChaCha8Rng, num: i64, den: i64) -> Rat {
    rat(r.gen_range(-num..=num), r.gen_range(1..=den))
}

/// Up to six distinct lines with small integer coefficients, so parallel
/// and concurrent lines come up often.
fn random_arrangement(r: &mut ChaCha8Rng) -> Arrangement {
    let n = r.gen_range(1..=6);
    let mut lines: Vec<Line> = Vec::new();
    while lines.len() < n {
        let (a, b, c) = (r.gen_range(-3..=3), r.gen_range(-3..=3), r.gen_range(-3..=3));
        if a == 0 && b == 0 {
            continue;
        }
        let l = Line::new(int(a), int(b), int(c));
        if lines.iter().all(|m| !m.same_as(&l)) {
            lines.push(l);
        }
    }
    Arrangement::new(None, lines).unwrap()
}

/// `sum (m_p - 1)` from pairwise intersections by Cramer's rule, grouped
/// by exact point.
fn multiplicity_excess(arr: &Arrangement) -> usize {
    let mut points: BTreeMap<(Rat, Rat), usize> = BTreeMap::new();
    let ls = &arr.lines;
    for i in 0..ls.len() {
        for j in i + 1..ls.len() {
            let det = &ls[i].a * &ls[j].b - &ls[j].a * &ls[i].b;
            if det.is_zero() {
                continue;
            }
            let x = (&ls[j].c * &ls[i].b - &ls[i].c * &ls[j].b) / &det;
            let y = (&ls[i].c * &ls[j].a - &ls[j].c * &ls[i].a) / &det;
            points.entry((x, y)).or_insert(0);
        }
    }
    points
        .keys()
        .map(|(x, y)| {
            let p = Point::new(x.clone(), y.clone());
            ls.iter().filter(|l| l.eval(&p).is_zero()).count() - 1
        })
        .sum()
}

fn c1_calibration(cfg: &PipelineConfig) -> Verdict {
    let corpus = builtin_corpus();
    let outcomes = check_calibration(&corpus.calibration, cfg);
    let rows: Vec<String> = outcomes.iter().map(|o| o.row()).collect();
    verdict(outcomes.iter().all(|o| o.passed()) && outcomes.len() == 3, rows.join("; "))
}

struct CorpusRun {
    names: Vec<String>,
    reports: Vec<Result<EntryReports, String>>,
}

fn run_corpus(cfg: &PipelineConfig) -> CorpusRun {
    let corpus = builtin_corpus();
    CorpusRun {
        names: corpus.entries.iter().map(|e| e.name.clone()).collect(),
        reports: corpus
            .entries
            .iter()
            .map(|e| entry_reports(&e.arrangement, cfg).map_err(|err| err.to_string()))
            .collect(),
    }
}

fn c2_handles(run: &CorpusRun) -> Verdict {
    let corpus = builtin_corpus();
    let mut bad = Vec::new();
    for ((name, rep), entry) in run.names.iter().zip(&run.reports).zip(&corpus.entries) {
        let Ok(rep) = rep else {
            bad.push(format!("{name}: {}", rep.as_ref().err().unwrap()));
            continue;
        };
        for (how, r) in [("circles", &rep.circles), ("divide", &rep.divide)] {
            if r.framings.len() != entry.expected.b || !r.all_framings_zero() {
                bad.push(format!("{name}/{how}: framings {:?}", r.framings));
            }
            if let Some(e) = r.attaching_linking().find(|e| e.lk != 0) {
                bad.push(format!("{name}/{how}: lk({}, {}) = {}", e.a, e.b, e.lk));
            }
            if r.counts.attaching != entry.expected.b {
                bad.push(format!("{name}/{how}: {} attaching components", r.counts.attaching));
            }
        }
        if rep.split != 0 {
            bad.push(format!("{name}: {} attaching curves lifted to two loops", rep.split));
        }
    }
    let n = run.names.len();
    verdict(bad.is_empty() && n == 9, if bad.is_empty() { format!("{n} arrangements, all framings 0, attaching blocks 0") } else { bad.join("; ") })
}

fn c3_equivalence(run: &CorpusRun, cfg: &PipelineConfig) -> Verdict {
    let corpus = builtin_corpus();
    let mut bad = Vec::new();
    let mut states = 0;
    for (entry, rep) in corpus.entries.iter().zip(&run.reports) {
        let Ok(rep) = rep else {
            bad.push(format!("{}: no reports", entry.name));
            continue;
        };
        for (how, r) in [("divide", &rep.divide), ("reduced", &rep.reduced), ("moved", &rep.moved)] {
            if let Some(d) = compare_reports(&rep.circles, r).first() {
                bad.push(format!("{}: circles vs {how}: {d}", entry.name));
            }
        }
        // every state along the reduction of every curve, one move at a time
        let p = prepare(&entry.arrangement).unwrap();
        let mut cur = kirby_divide(&p, false).unwrap();
        let curves: Vec<usize> = cur.attaching().map(|(i, _)| i).collect();
        for ci in curves {
            for m in reduction_sequence(&cur, ci).unwrap() {
                cur = match apply_move(&cur, &m) {
                    Ok(d) => d,
                    Err(e) => {
                        bad.push(format!("{}: {m}: {e}", entry.name));
                        break;
                    }
                };
                states += 1;
                let r = lift_with_pushoffs(&cur, cfg.lift_options())
                    .map_err(|e| e.to_string())
                    .and_then(|l| arr2kirby::pipeline::link_report(&l, cfg).map_err(|e| e.to_string()));
                match r {
                    Ok((_, r)) => {
                        if let Some(d) = compare_reports(&rep.circles, &r).first() {
                            bad.push(format!("{}: after {m}: {d}", entry.name));
                        }
                    }
                    Err(e) => bad.push(format!("{}: after {m}: {e}", entry.name)),
                }
            }
        }
    }
    verdict(
        bad.is_empty(),
        if bad.is_empty() { format!("4 constructions agree on 9 arrangements; {states} intermediate divides agree") } else { bad.join("; ") },
    )
}

fn c4_combinatorics() -> Verdict {
    let mut bad = Vec::new();
    let seeds = 150;
    for seed in 0..seeds {
        let arr = random_arrangement(&mut rng(seed));
        let excess = multiplicity_excess(&arr);
        let total = enumerate_chambers(&arr).len();
        if total != 1 + arr.len() + excess {
            bad.push(format!("seed {seed}: {total} chambers, expected {}", 1 + arr.len() + excess));
        }
        match normalize(&arr).and_then(|n| fiber_chambers(&n)) {
            Ok(f) if f.len() == excess => {}
            Ok(f) => bad.push(format!("seed {seed}: |ch_F| = {}, expected {excess}", f.len())),
            Err(e) => bad.push(format!("seed {seed}: {e}")),
        }
    }
    let corpus = builtin_corpus();
    for (name, b, total) in [("generic4", 6, 11), ("pencil4", 3, 8)] {
        let arr = &corpus.entry(name).unwrap().arrangement;
        let got = (multiplicity_excess(arr), enumerate_chambers(arr).len());
        if got != (b, total) {
            bad.push(format!("{name}: b, chambers = {got:?}"));
        }
    }
    verdict(bad.is_empty(), if bad.is_empty() { format!("{seeds} random arrangements; generic4 b=6 total=11; pencil4 b=3 total=8") } else { bad.join("; ") })
}

fn homology_of(rep: &InvariantReport) -> KirbyHomology {
    homology_of_report(rep)
}

fn c5_homology(run: &CorpusRun) -> Verdict {
    let corpus = builtin_corpus();
    let mut bad = Vec::new();
    let mut profiles = BTreeMap::new();
    for (entry, rep) in corpus.entries.iter().zip(&run.reports) {
        let Ok(rep) = rep else {
            bad.push(format!("{}: no reports", entry.name));
            continue;
        };
        let n = entry.arrangement.len();
        let b = multiplicity_excess(&entry.arrangement);
        let want = KirbyHomology {
            h1_rank: n,
            h1_torsion: vec![],
            h2_rank: b,
            chi: 1 - n as i64 + b as i64,
        };
        for (how, r) in [("circles", &rep.circles), ("divide", &rep.divide)] {
            let h = homology_of(r);
            if h != want {
                bad.push(format!("{}/{how}: {h}, expected {want}", entry.name));
            }
        }
        profiles.insert(entry.name.clone(), homology_of(&rep.circles));
    }
    if profiles.get("pencil4") != profiles.get("bundle4") {
        bad.push(format!("pencil4 {:?} vs bundle4 {:?}", profiles.get("pencil4"), profiles.get("bundle4")));
    }
    verdict(bad.is_empty(), if bad.is_empty() { "H1 free of rank n, H2 rank b, chi = 1-n+b; pencil4 and bundle4 agree".to_string() } else { bad.join("; ") })
}

/// The domain of the retraction: `|y|_inf <= 1`, and above height 1 the
/// real part lies under both diagonals with `rho(x2) <= |y|_inf`.
fn in_sigma_domain(r: &Rat, r0: &Rat, x: &Point, y: (&Rat, &Rat)) -> bool {
    let one = Rat::one();
    let m = y.0.abs().max(y.1.abs());
    if m > one {
        return false;
    }
    if x.y >= one {
        let rho = (&x.y - &one) / (r0 - &one);
        return x.y <= &x.x + r && x.y <= r - &x.x && rho <= m;
    }
    true
}

fn c6_retraction() -> Verdict {
    let corpus = builtin_corpus();
    let norm = normalize(&corpus.entry("generic4").unwrap().arrangement).unwrap();
    let sigma = Retraction::new(&norm);
    let (r, r0) = (norm.r.clone(), norm.r0.clone());
    let mut g = rng(6);
    let ts = [int(0), rat(1, 4), rat(1, 2), rat(3, 4), int(1)];
    let mut bad = Vec::new();
    let (mut samples, mut moved) = (0, 0);
    while samples < 1000 {
        let x = Point::new(
            &r * rat(g.gen_range(-1000..=1000), 1000),
            rat(g.gen_range(-1000..=1000), 1000) * (&r0 + int(1)) / int(2) + (&r0 - int(1)) / int(2),
        );
        let y = (rat(g.gen_range(-1000..=1000), 1000), rat(g.gen_range(-1000..=1000), 1000));
        if !in_sigma_domain(&r, &r0, &x, (&y.0, &y.1)) {
            continue;
        }
        samples += 1;
        let yy = (&y.0, &y.1);
        let s = match sigma.retract(&x, yy) {
            Ok(s) => s,
            Err(e) => {
                bad.push(format!("{x}: {e}"));
                continue;
            }
        };
        if s != x {
            moved += 1;
        }
        let m = y.0.abs().max(y.1.abs());
        if s.y > Rat::one() - &m {
            bad.push(format!("{x}: image height {}", s.y));
        }
        if sigma.retract(&s, yy).ok().as_ref() != Some(&s) {
            bad.push(format!("{x}: not idempotent"));
        }
        for t in &ts {
            let p = sigma.homotopy(&x, yy, t).unwrap();
            if t.is_zero() && p != x {
                bad.push(format!("{x}: sigma_0 moved it"));
            }
            if !in_sigma_domain(&r, &r0, &p, yy) {
                bad.push(format!("{x}: sigma_{t} leaves the region"));
            }
        }
    }
    verdict(bad.is_empty(), if bad.is_empty() { format!("{samples} samples, {moved} moved by sigma, t in 0,1/4,1/2,3/4,1") } else { bad.into_iter().take(5).collect::<Vec<_>>().join("; ") })
}

/// A random attaching circle at height `b`, with endpoints deep enough
/// inside the rectangle to sit on the square sphere.
fn random_circle(g: &mut ChaCha8Rng, r: &Rat, b: &Rat, bad: &mut Vec<String>) -> Vec<[Rat; 4]> {
    let room = r - (Rat::one() - b);
    let mut frac = || &room * rat(g.gen_range(-99..=99), 100);
    let a = frac();
    let mut c = frac();
    while c == a {
        c = frac();
    }
    let (lo, hi) = if a < c { (a, c) } else { (c, a) };
    let pts = fs_circle(&Point::new(lo, b.clone()), &Point::new(hi, b.clone()));
    if !on_square_sphere(r, &pts) {
        bad.push(format!("circle at height {b} off the square sphere"));
    }
    pts
}

fn c7_attaching_circles(cfg: &PipelineConfig) -> Verdict {
    let mut g = rng(7);
    let r = int(5);
    let mut bad = Vec::new();
    for k in 0..20 {
        let b = rat(g.gen_range(1..=99), 100);
        let pts = random_circle(&mut g, &r, &b, &mut bad);
        let link = PLLink::new(vec![PLLoop { label: "attaching:1".into(), points: project_round(&pts, cfg.resolution) }]);
        match project_link(&link, &cfg.projection) {
            Ok(dg) => {
                let s = simplify_diagram(&dg);
                if s.crossing_count() != 0 {
                    bad.push(format!("set {k}: {} crossings left", s.crossing_count()));
                }
            }
            Err(e) => bad.push(format!("set {k}: {e}")),
        }
    }
    for k in 0..20 {
        let b1 = rat(g.gen_range(1..=49), 100);
        let b2 = rat(g.gen_range(51..=99), 100);
        let p1 = random_circle(&mut g, &r, &b1, &mut bad);
        let p2 = random_circle(&mut g, &r, &b2, &mut bad);
        // the real parts lie in the planes x2 = b1 and x2 = b2, so the
        // sphere x2 = (b1 + b2) / 2 separates the circles
        let mid = (&b1 + &b2) / int(2);
        if !(p1.iter().all(|p| p[1] < mid) && p2.iter().all(|p| p[1] > mid)) {
            bad.push(format!("pair {k}: no separating level"));
        }
        let link = PLLink::new(vec![
            PLLoop { label: "attaching:1".into(), points: project_round(&p1, cfg.resolution) },
            PLLoop { label: "attaching:2".into(), points: project_round(&p2, cfg.resolution) },
        ]);
        match project_link(&link, &cfg.projection).map_err(|e| e.to_string()).and_then(|dg| linking_matrix(&dg).map_err(|e| e.to_string())) {
            Ok(lm) if lm.entries[0][1] == 0 => {}
            Ok(lm) => bad.push(format!("pair {k}: lk {}", lm.entries[0][1])),
            Err(e) => bad.push(format!("pair {k}: {e}")),
        }
    }
    verdict(bad.is_empty(), if bad.is_empty() { "20 circles simplify to 0 crossings; 20 pairs lk 0 with separating level".to_string() } else { bad.join("; ") })
}

/// What criteria 1, 2, 3 and 5 look at, for one configuration.
struct Fingerprint {
    /// Calibration rows, then homology and split counts per arrangement.
    exact: Vec<String>,
    /// Four reports per arrangement.
    reports: Vec<(String, InvariantReport)>,
}

fn fingerprint(cfg: &PipelineConfig) -> Result<Fingerprint, String> {
    let corpus = builtin_corpus();
    let mut exact: Vec<String> = check_calibration(&corpus.calibration, cfg).iter().map(|o| o.row()).collect();
    let mut reports = Vec::new();
    for e in &corpus.entries {
        let r = entry_reports(&e.arrangement, cfg).map_err(|err| format!("{}: {err}", e.name))?;
        exact.push(format!("{}: {} split={}", e.name, homology_of(&r.circles), r.split));
        for (how, rep) in [("circles", r.circles), ("divide", r.divide), ("reduced", r.reduced), ("moved", r.moved)] {
            reports.push((format!("{}/{how}", e.name), rep));
        }
    }
    Ok(Fingerprint { exact, reports })
}

/// Jones polynomials present in both reports.
fn shared_jones(a: &InvariantReport, b: &InvariantReport) -> usize {
    let comps = a
        .components
        .iter()
        .filter(|(l, s)| s.jones.is_some() && b.components.get(*l).is_some_and(|t| t.jones.is_some()))
        .count();
    comps + a.jones.keys().filter(|k| b.jones.contains_key(*k)).count()
}

fn c8_robustness(base_cfg: &PipelineConfig) -> Verdict {
    let base = match fingerprint(base_cfg) {
        Ok(b) => b,
        Err(e) => return verdict(false, e),
    };
    let mut variants: Vec<(String, PipelineConfig)> = vec![("resolution 128".into(), PipelineConfig { resolution: 2 * base_cfg.resolution, ..base_cfg.clone() })];
    for (pole, dir) in [(3, 1), (11, 2), (25, 5)] {
        let mut c = base_cfg.clone();
        c.projection.pole = Some(pole % POLE_COUNT);
        c.projection.direction = dir;
        variants.push((format!("pole {pole} direction {dir}"), c));
    }
    let mut bad = Vec::new();
    let mut jones = 0;
    for (name, cfg) in &variants {
        let f = match fingerprint(cfg) {
            Ok(f) => f,
            Err(e) => {
                bad.push(format!("{name}: {e}"));
                continue;
            }
        };
        if let Some((a, b)) = base.exact.iter().zip(&f.exact).find(|(a, b)| a != b) {
            bad.push(format!("{name}: {a} became {b}"));
        }
        for ((what, a), (_, b)) in base.reports.iter().zip(&f.reports) {
            if let Some(d) = compare_reports(a, b).first() {
                bad.push(format!("{name}: {what}: {d}"));
            }
            jones += shared_jones(a, b);
        }
    }
    let names: Vec<&str> = variants.iter().map(|(n, _)| n.as_str()).collect();
    verdict(
        bad.is_empty(),
        if bad.is_empty() { format!("unchanged under {} ({jones} Jones polynomials compared)", names.join(", ")) } else { bad.join("; ") },
    )
}

fn c9_membership() -> Verdict {
    let mut g = rng(9);
    let mut bad = Vec::new();
    let mut on_line = 0;
    for k in 0..1000 {
        let arr = random_arrangement(&mut g);
        // half the samples sit exactly on a line
        let x = if g.gen_bool(0.5) {
            on_line += 1;
            let l = &arr.lines[g.gen_range(0..arr.len())];
            let s = small_rat(&mut g, 20, 7);
            if l.b.is_zero() {
                Point::new(-&l.c / &l.a, s)
            } else {
                Point::new(s.clone(), -(&l.c + &l.a * &s) / &l.b)
            }
        } else {
            Point::new(small_rat(&mut g, 20, 7), small_rat(&mut g, 20, 7))
        };
        // a third of the directions are parallel to a line
        let y = if g.gen_range(0..3) == 0 {
            let l = &arr.lines[g.gen_range(0..arr.len())];
            let s = small_rat(&mut g, 5, 3);
            (-&l.b * &s, &l.a * &s)
        } else {
            (small_rat(&mut g, 5, 3), small_rat(&mut g, 5, 3))
        };
        let member = complement_membership(&arr, &x, (&y.0, &y.1));
        // independent route: the complexified form (a, b, c) at x + iy
        let oracle = arr.lines.iter().all(|l| {
            let re = &l.a * &x.x + &l.b * &x.y + &l.c;
            let im = &l.a * &y.0 + &l.b * &y.1;
            !(re.is_zero() && im.is_zero())
        });
        if member != oracle {
            bad.push(format!("sample {k}: membership {member}, complex evaluation {oracle}"));
        }
        if member {
            let s = small_rat(&mut g, 20, 7);
            let moved = Point::new(&x.x + &s * &y.0, &x.y + &s * &y.1);
            if !complement_membership(&arr, &moved, (&y.0, &y.1)) {
                bad.push(format!("sample {k}: translation along y left the complement"));
            }
        }
        let parallel = arr.lines.iter().any(|l| (&l.a * &y.0 + &l.b * &y.1).is_zero());
        if !parallel && !member {
            bad.push(format!("sample {k}: non-parallel y outside the complement"));
        }
    }
    verdict(bad.is_empty(), if bad.is_empty() { format!("1000 samples, {on_line} on a line") } else { bad.into_iter().take(5).collect::<Vec<_>>().join("; ") })
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

fn main() -> ExitCode {
    let cfg = PipelineConfig::default();
    println!(
        "acceptance: resolution {}, projection margin {:e} x size, embedding threshold {:e} x diameter; all invariant comparisons exact",
        cfg.resolution, cfg.projection.margin, SEPARATION_FACTOR
    );
    let start = Instant::now();
    let run = run_corpus(&cfg);
    let criteria: Vec<Criterion> = vec![
        ("1 circle, outward cusp, inward cusp", Box::new(|| c1_calibration(&cfg))),
        ("2 handles: one component, framing 0, attaching blocks 0", Box::new(|| c2_handles(&run))),
        ("3 construction equivalence", Box::new(|| c3_equivalence(&run, &cfg))),
        ("4 chamber counts", Box::new(c4_combinatorics)),
        ("5 homology", Box::new(|| c5_homology(&run))),
        ("6 retraction", Box::new(c6_retraction)),
        ("7 attaching circles", Box::new(|| c7_attaching_circles(&cfg))),
        ("8 robustness", Box::new(|| c8_robustness(&cfg))),
        ("9 complement membership", Box::new(c9_membership)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let t = Instant::now();
        let v = check();
        if !v.pass {
            failed += 1;
        }
        println!(
            "criterion {name}: {} ({:.1}s) {}",
            if v.pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            v.detail
        );
    }
    println!("acceptance: {} of {} criteria pass in {:.1}s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
