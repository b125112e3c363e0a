//! Invariant report and homology of the 4-manifold for one arrangement,
//! built from attaching circles and from the divide.
//!
//! `cargo run --release --example invariants [corpus-name]`

use arr2kirby::corpus::builtin_corpus;
use arr2kirby::invariants::{compare_reports, homology_of_report};
use arr2kirby::pipeline::{arrangement_report, Construction, PipelineConfig};

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "pencil3".into());
    let corpus = builtin_corpus();
    let arr = &corpus.entry(&name).expect("corpus entry").arrangement;
    let cfg = PipelineConfig::default();
    let circles = arrangement_report(arr, Construction::Circles, &cfg).unwrap();
    let divide = arrangement_report(arr, Construction::Divide, &cfg).unwrap();
    println!("{}", circles.to_json());
    println!("framings {:?}", circles.framings);
    println!("homology {}", homology_of_report(&circles));
    let diffs = compare_reports(&circles, &divide);
    println!("divide report differs in {} fields", diffs.len());
    for d in diffs {
        println!("  {d}");
    }
}
