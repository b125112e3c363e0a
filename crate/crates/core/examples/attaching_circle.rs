//! A single attaching circle on the boundary of the thickened rectangle,
//! and a second one at another height that it does not link.

use arr2kirby::arrangement::Point;
use arr2kirby::diagram::{linking_matrix, project_link, simplify_diagram, ProjectionConfig};
use arr2kirby::lift::{fs_circle, on_square_sphere, project_round, PLLink, PLLoop};
use arr2kirby::rational::{fmt_rat, int, rat};

fn main() {
    let r = int(5);
    let low = fs_circle(&Point::new(int(-1), rat(3, 10)), &Point::new(int(2), rat(3, 10)));
    let high = fs_circle(&Point::new(int(0), rat(7, 10)), &Point::new(int(3), rat(7, 10)));
    for p in &low {
        println!("({}, {}; {}, {})", fmt_rat(&p[0]), fmt_rat(&p[1]), fmt_rat(&p[2]), fmt_rat(&p[3]));
    }
    println!("on the square sphere: {} {}", on_square_sphere(&r, &low), on_square_sphere(&r, &high));

    let lp = |label: &str, pts| PLLoop { label: label.into(), points: project_round(pts, 32) };
    let cfg = ProjectionConfig::default();
    let one = project_link(&PLLink::new(vec![lp("attaching:1", &low)]), &cfg).unwrap();
    println!("crossings {} -> {}", one.crossing_count(), simplify_diagram(&one).crossing_count());

    let pair = project_link(&PLLink::new(vec![lp("attaching:1", &low), lp("attaching:2", &high)]), &cfg).unwrap();
    println!("lk of the two circles: {}", linking_matrix(&pair).unwrap().entries[0][1]);
}
