//! The divide with cusps of an arrangement, in full and reduced form, as
//! strip words and as SVG.
//!
//! `cargo run --example divide [corpus-name] [out-dir]`

use std::path::PathBuf;

use arr2kirby::corpus::builtin_corpus;
use arr2kirby::divide::{describe_words, validate_divide};
use arr2kirby::pipeline::{kirby_divide, prepare};
use arr2kirby::render::{render_divide_svg, RenderStyle};

fn main() {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "generic3".into());
    let out: PathBuf = args.next().map(Into::into).unwrap_or_else(std::env::temp_dir);
    let corpus = builtin_corpus();
    let arr = &corpus.entry(&name).expect("corpus entry").arrangement;
    let p = prepare(arr).unwrap();

    for reduced in [false, true] {
        let d = kirby_divide(&p, reduced).unwrap();
        let v = validate_divide(&d);
        let kind = if reduced { "reduced" } else { "full" };
        println!("{kind}: {} curves, {} double points, valid {}", d.curves.len(), v.double_points.len(), v.is_valid());
        print!("{}", describe_words(&d));
        let path = out.join(format!("{name}-{kind}.svg"));
        std::fs::write(&path, render_divide_svg(&d, &RenderStyle::default()).unwrap()).unwrap();
        println!("wrote {}", path.display());
    }
}
