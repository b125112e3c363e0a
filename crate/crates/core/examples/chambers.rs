//! Chambers of a line arrangement and the ones that meet no far-away line.
//!
//! `cargo run --example chambers [corpus-name]`

use arr2kirby::arrangement::{betti, intersection_summary, normalize, ChamberTable};
use arr2kirby::corpus::builtin_corpus;
use arr2kirby::rational::fmt_rat;

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "generic4".into());
    let corpus = builtin_corpus();
    let Some(entry) = corpus.entry(&name) else {
        eprintln!("no corpus entry {name:?}");
        std::process::exit(2);
    };
    let arr = &entry.arrangement;
    for l in &arr.lines {
        println!("line {l}");
    }
    for p in intersection_summary(arr) {
        println!("meet {} of multiplicity {}", p.point, p.multiplicity());
    }
    let (b0, b1, b2) = betti(arr);
    println!("betti numbers {b0} {b1} {b2}");

    let norm = normalize(arr).expect("normalizes");
    println!("normalized: R = {}, R0 = {}", fmt_rat(&norm.r), fmt_rat(&norm.r0));
    let table = ChamberTable::build(&norm).unwrap();
    print!("{}", table.to_table());
    println!("{} chambers, {} of them bounded", table.chambers.len(), table.fiber.len());
}
