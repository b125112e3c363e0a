//! Lifts of three small divides in the disk: a circle gives the Hopf link,
//! an outward cusp an unknot, an inward cusp a trefoil.

use arr2kirby::diagram::{linking_matrix, project_link, simplify_diagram};
use arr2kirby::invariants::{fox_colorings, kauffman_bracket, DEFAULT_BRACKET_CAP};
use arr2kirby::lift::geometrize_and_lift;
use arr2kirby::pipeline::{disk_divides, PipelineConfig};

fn main() {
    let cfg = PipelineConfig::default();
    for (name, d) in ["circle", "outward cusp", "inward cusp"].iter().zip(disk_divides()) {
        let link = geometrize_and_lift(&d, cfg.lift_options()).unwrap();
        let dg = simplify_diagram(&project_link(&link, &cfg.projection).unwrap());
        let lm = linking_matrix(&dg).unwrap();
        println!("{name}: components {}, crossings after simplification {}", link.loops.len(), dg.crossing_count());
        if lm.labels.len() == 2 {
            println!("  lk = {}", lm.entries[0][1]);
        } else {
            let (_, jones) = kauffman_bracket(&dg, DEFAULT_BRACKET_CAP).unwrap();
            println!("  3-colorings {}, jones {jones}", fox_colorings(&dg, 3).unwrap());
        }
    }
}
