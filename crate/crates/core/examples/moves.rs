//! Reduces each strip curve of a divide one move at a time and checks that
//! the lifted link keeps its invariants.
//!
//! `cargo run --release --example moves [corpus-name]`

use arr2kirby::corpus::builtin_corpus;
use arr2kirby::invariants::compare_reports;
use arr2kirby::moves::{apply_move, reduction_sequence};
use arr2kirby::pipeline::{divide_report, kirby_divide, prepare, PipelineConfig};

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "generic3".into());
    let corpus = builtin_corpus();
    let cfg = PipelineConfig::default();
    let p = prepare(&corpus.entry(&name).expect("corpus entry").arrangement).unwrap();
    let full = kirby_divide(&p, false).unwrap();
    let start = divide_report(&full, &cfg).unwrap();

    let mut cur = full.clone();
    let curves: Vec<usize> = full.attaching().map(|(i, _)| i).collect();
    for ci in curves {
        let seq = reduction_sequence(&cur, ci).unwrap();
        println!("curve {ci}: {} at the start, {} moves", cur.curves[ci].strip.as_ref().unwrap(), seq.len());
        for m in &seq {
            cur = apply_move(&cur, m).unwrap();
            let same = compare_reports(&start, &divide_report(&cur, &cfg).unwrap()).is_empty();
            println!("  {m:<28} -> {}  report unchanged: {same}", cur.curves[ci].strip.as_ref().unwrap());
        }
    }
    let reduced = kirby_divide(&p, true).unwrap();
    println!("matches the reduced divide: {}", reduced.to_json_value() == cur.to_json_value());
}
