//! The built-in arrangement corpus and its end-to-end checks.

use std::collections::BTreeMap;
use std::fmt;

use serde::Deserialize;

use crate::arrangement::{bounded_chamber_count, enumerate_chambers, Arrangement, ArrangementError};
use crate::diagram::{linking_matrix, project_link, simplify_diagram};
use crate::divide::DivideWithCusps;
use crate::invariants::{compare_reports, fox_colorings, homology_of_report, kauffman_bracket, InvariantReport};
use crate::lift::{geometrize_and_lift, is_companion, PLLink};
use crate::moves::{apply_all, reduction_sequence, MoveError};
use crate::pipeline::{disk_divides, kirby_divide, kirby_link, link_report, prepare, Construction, PipelineConfig, PipelineError};

const BUILTIN: &str = include_str!("../data/corpus.json");

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Expected {
    pub n: usize,
    pub b: usize,
    pub chamber_total: usize,
    pub framings_zero: bool,
    pub homology: String,
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub arrangement: Arrangement,
    pub expected: Expected,
    /// Where each expectation comes from, keyed by field.
    pub basis: BTreeMap<String, String>,
}

/// Expected outcome of lifting one of the three disk divides.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Calibration {
    pub name: String,
    pub components: usize,
    #[serde(default)]
    pub abs_linking: Option<i64>,
    #[serde(default)]
    pub three_colorings: Option<u64>,
    #[serde(default)]
    pub jones_trivial: Option<bool>,
    pub basis: String,
}

#[derive(Debug, Clone)]
pub struct Corpus {
    pub basis_key: BTreeMap<String, String>,
    pub entries: Vec<CorpusEntry>,
    pub calibration: Vec<Calibration>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct RawEntry {
    name: String,
    lines: serde_json::Value,
    expected: Expected,
    basis: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct RawCorpus {
    basis_key: BTreeMap<String, String>,
    arrangements: Vec<RawEntry>,
    calibration: Vec<Calibration>,
}

impl Corpus {
    pub fn from_json(text: &str) -> Result<Self, ArrangementError> {
        let raw: RawCorpus = serde_json::from_str(text).map_err(|e| ArrangementError::Json(e.to_string()))?;
        let entries = raw
            .arrangements
            .into_iter()
            .map(|e| {
                let doc = serde_json::json!({ "name": e.name, "lines": e.lines });
                Ok(CorpusEntry {
                    arrangement: Arrangement::from_json(&doc.to_string())?,
                    name: e.name,
                    expected: e.expected,
                    basis: e.basis,
                })
            })
            .collect::<Result<_, ArrangementError>>()?;
        Ok(Corpus {
            basis_key: raw.basis_key,
            entries,
            calibration: raw.calibration,
        })
    }

    pub fn entry(&self, name: &str) -> Option<&CorpusEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

pub fn builtin_corpus() -> Corpus {
    Corpus::from_json(BUILTIN).expect("built-in corpus parses")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    /// What was found, as shown in the table.
    pub shown: String,
    pub pass: bool,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={} {}", self.name, self.shown, if self.pass { "PASS" } else { "FAIL" })
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub name: String,
    pub checks: Vec<Check>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn row(&self) -> String {
        let cells: Vec<String> = self.checks.iter().map(|c| c.to_string()).collect();
        format!("{}: {}", self.name, cells.join(", "))
    }

    /// Moves the named checks to the front, in the given order.
    fn lead(&mut self, names: &[&str]) {
        self.checks.sort_by_key(|c| names.iter().position(|n| *n == c.name).unwrap_or(names.len()));
    }

    fn push(&mut self, name: &str, shown: impl ToString, pass: bool) {
        self.checks.push(Check {
            name: name.to_string(),
            shown: shown.to_string(),
            pass,
        });
    }
}

/// Attaching curves that lifted to more than one loop.
fn split_attaching(link: &PLLink) -> usize {
    link.loops
        .iter()
        .filter(|l| l.label.starts_with("attaching:") && !is_companion(&l.label) && l.label.contains('/'))
        .count()
}

fn attaching_blocks_vanish(r: &InvariantReport) -> bool {
    r.attaching_linking().all(|e| e.lk == 0)
}

/// The divide after the first move of each attaching curve's reduction,
/// so curves are caught midway between full and reduced.
pub fn partially_moved(d: &DivideWithCusps) -> Result<DivideWithCusps, MoveError> {
    let mut cur = d.clone();
    let indices: Vec<usize> = d.attaching().map(|(i, _)| i).collect();
    for i in indices {
        let seq = reduction_sequence(&cur, i)?;
        if let Some(first) = seq.first() {
            cur = apply_all(&cur, std::slice::from_ref(first))?;
        }
    }
    Ok(cur)
}

/// All reports for one arrangement, by construction.
pub struct EntryReports {
    pub circles: InvariantReport,
    pub divide: InvariantReport,
    pub reduced: InvariantReport,
    pub moved: InvariantReport,
    /// Attaching curves that lifted to two loops, summed over constructions.
    pub split: usize,
}

pub fn entry_reports(arr: &Arrangement, cfg: &PipelineConfig) -> Result<EntryReports, PipelineError> {
    let p = prepare(arr)?;
    let mut split = 0;
    let mut report = |link: PLLink| -> Result<InvariantReport, PipelineError> {
        split += split_attaching(&link);
        Ok(link_report(&link, cfg)?.1)
    };
    let circles = report(kirby_link(&p, Construction::Circles, cfg)?)?;
    let divide = report(kirby_link(&p, Construction::Divide, cfg)?)?;
    let reduced = report(kirby_link(&p, Construction::Reduced, cfg)?)?;
    let moved_divide = partially_moved(&kirby_divide(&p, false)?)?;
    let moved = report(crate::lift::lift_with_pushoffs(&moved_divide, cfg.lift_options())?)?;
    Ok(EntryReports {
        circles,
        divide,
        reduced,
        moved,
        split,
    })
}

/// Runs every check for one corpus entry.
pub fn check_entry(e: &CorpusEntry, cfg: &PipelineConfig) -> Outcome {
    let mut out = Outcome {
        name: e.name.clone(),
        checks: Vec::new(),
    };
    let arr = &e.arrangement;
    let x = &e.expected;
    out.push("n", arr.len(), arr.len() == x.n);
    let b = bounded_chamber_count(arr);
    out.push("b", b, b == x.b);
    let total = enumerate_chambers(arr).len();
    out.push("chambers", total, total == x.chamber_total);
    match prepare(arr) {
        Ok(p) => out.push("ch_F", p.fibers.len(), p.fibers.len() == x.b),
        Err(err) => {
            out.push("ch_F", err, false);
            return out;
        }
    }
    let reps = match entry_reports(arr, cfg) {
        Ok(r) => r,
        Err(err) => {
            out.push("pipeline", err, false);
            return out;
        }
    };
    let all = [&reps.circles, &reps.divide, &reps.reduced, &reps.moved];
    let zero = all.iter().all(|r| r.all_framings_zero() && r.framings.len() == x.b);
    out.push("framings", if zero { "0".to_string() } else { format!("{:?}", reps.divide.framings) }, zero == x.framings_zero);
    let blocks = all.iter().all(|r| attaching_blocks_vanish(r));
    out.push("attaching lk", if blocks { "0" } else { "nonzero" }, blocks);
    out.push("components", if reps.split == 0 { "1" } else { "split" }, reps.split == 0);
    for (name, other) in [("divide", &reps.divide), ("reduced", &reps.reduced), ("moved", &reps.moved)] {
        let diffs = compare_reports(&reps.circles, other);
        let shown = if diffs.is_empty() { "same".to_string() } else { diffs[0].to_string() };
        out.push(&format!("circles~{name}"), shown, diffs.is_empty());
    }
    let h = homology_of_report(&reps.circles).to_string();
    let ok = h == x.homology;
    out.push("homology", h, ok);
    out.lead(&["b", "framings"]);
    out
}

/// Lifts the three disk divides and checks them against the calibration.
pub fn check_calibration(cal: &[Calibration], cfg: &PipelineConfig) -> Vec<Outcome> {
    let divides = disk_divides();
    cal.iter()
        .zip(divides.iter())
        .map(|(c, d)| {
            let mut out = Outcome {
                name: c.name.clone(),
                checks: Vec::new(),
            };
            if let Err(err) = calibrate(c, d, cfg, &mut out) {
                out.push("pipeline", err, false);
            }
            out
        })
        .collect()
}

fn calibrate(c: &Calibration, d: &DivideWithCusps, cfg: &PipelineConfig, out: &mut Outcome) -> Result<(), PipelineError> {
    let link = geometrize_and_lift(d, cfg.lift_options())?;
    out.push("components", link.loops.len(), link.loops.len() == c.components);
    let dg = project_link(&link, &cfg.projection)?;
    if let Some(want) = c.abs_linking {
        let lm = linking_matrix(&dg)?;
        let lk = if lm.labels.len() == 2 { lm.entries[0][1].abs() } else { 0 };
        out.push("|lk|", lk, lk == want);
    }
    let simple = simplify_diagram(&dg);
    if let Some(want) = c.three_colorings {
        let k = fox_colorings(&simple, 3)?;
        out.push("3-colorings", &k, k == want.into());
    }
    if let Some(want) = c.jones_trivial {
        let (_, v) = kauffman_bracket(&simple, cfg.bracket_cap)?;
        out.push("jones", &v, v.is_one() == want);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_corpus_parses() {
        let c = builtin_corpus();
        assert_eq!(c.entries.len(), 9);
        assert_eq!(c.calibration.len(), 3);
        for e in &c.entries {
            for field in ["n", "b", "chamberTotal", "framingsZero", "homology"] {
                let basis = &e.basis[field];
                assert!(c.basis_key.contains_key(basis), "{}: {basis}", e.name);
            }
        }
        assert_eq!(c.entry("generic4").unwrap().expected.chamber_total, 11);
    }

    #[test]
    fn small_entries_pass() {
        let c = builtin_corpus();
        let cfg = PipelineConfig::default();
        for name in ["one-line", "cross", "parallel"] {
            let o = check_entry(c.entry(name).unwrap(), &cfg);
            assert!(o.passed(), "{}", o.row());
        }
    }
}
