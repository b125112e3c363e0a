//! Runs every check on the built-in corpus, like `arr2kirby selftest`.

use arr2kirby::corpus::{builtin_corpus, check_calibration, check_entry};
use arr2kirby::pipeline::PipelineConfig;

fn main() {
    let corpus = builtin_corpus();
    let cfg = PipelineConfig::default();
    let mut ok = true;
    for o in check_calibration(&corpus.calibration, &cfg) {
        println!("{}", o.row());
        ok &= o.passed();
    }
    for e in &corpus.entries {
        let o = check_entry(e, &cfg);
        println!("{}", o.row());
        ok &= o.passed();
    }
    if !ok {
        std::process::exit(1);
    }
}
