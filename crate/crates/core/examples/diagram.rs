//! Projects the Kirby link of an arrangement to a planar diagram and
//! prints its PD and Gauss codes.
//!
//! `cargo run --release --example diagram [corpus-name] [out.svg]`

use arr2kirby::corpus::builtin_corpus;
use arr2kirby::diagram::{project_link, simplify_diagram};
use arr2kirby::pipeline::{kirby_link, prepare, Construction, PipelineConfig};
use arr2kirby::render::{render_diagram_svg, RenderStyle};

fn main() {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "cross".into());
    let out = args.next().map(std::path::PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join(format!("{name}-diagram.svg")));
    let corpus = builtin_corpus();
    let cfg = PipelineConfig::default();
    let p = prepare(&corpus.entry(&name).expect("corpus entry").arrangement).unwrap();
    let link = kirby_link(&p, Construction::Reduced, &cfg).unwrap();
    let dg = project_link(&link, &cfg.projection).unwrap();
    println!("components {:?}", dg.labels);
    let small = simplify_diagram(&dg);
    println!("{} crossings, {} after simplification", dg.crossing_count(), small.crossing_count());
    print!("{}", small.pd_text());
    print!("{}", small.gauss_text());
    std::fs::write(&out, render_diagram_svg(&dg, &RenderStyle::default()).unwrap()).unwrap();
    println!("wrote {}", out.display());
}
