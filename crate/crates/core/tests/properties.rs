use arr2kirby::arrangement::{enumerate_chambers, fiber_chambers, intersection_summary, normalize, Arrangement, Line, Point};
use arr2kirby::corpus::builtin_corpus;
use arr2kirby::diagram::{linking_matrix, project_link, simplify_diagram, Diagram, ProjectionConfig};
use arr2kirby::divide::DivideWithCusps;
use arr2kirby::invariants::{compare_reports, fox_colorings};
use arr2kirby::lift::{complement_membership, fs_circle, on_square_sphere, project_round, PLLink, PLLoop, Retraction};
use arr2kirby::moves::{apply_move, reduction_sequence};
use arr2kirby::pipeline::{divide_report, disk_divides, kirby_divide, prepare, PipelineConfig};
use arr2kirby::rational::{fmt_rat, int, parse_rat, rat, Rat};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rat> {
    (-40i64..=40, 1i64..=9).prop_map(|(p, q)| rat(p, q))
}

fn unit_rat() -> impl Strategy<Value = Rat> {
    (-64i64..=64).prop_map(|p| rat(p, 64))
}

fn arrangement() -> impl Strategy<Value = Arrangement> {
    prop::collection::vec((-3i64..=3, -3i64..=3, -3i64..=3), 1..=6).prop_filter_map("degenerate", |raw| {
        let mut lines: Vec<Line> = Vec::new();
        for (a, b, c) in raw {
            let l = Line::new(int(a), int(b), int(c));
            if !(a == 0 && b == 0) && lines.iter().all(|m| !m.same_as(&l)) {
                lines.push(l);
            }
        }
        Arrangement::new(None, lines).ok()
    })
}

proptest! {
    #[test]
    fn rationals_print_and_parse_back(p in -10_000i64..10_000, q in 1i64..500) {
        let r = rat(p, q);
        prop_assert_eq!(parse_rat(&fmt_rat(&r)).unwrap(), r);
    }

    #[test]
    fn chamber_count_follows_multiplicities(arr in arrangement()) {
        let excess: usize = intersection_summary(&arr).iter().map(|p| p.multiplicity() - 1).sum();
        prop_assert_eq!(enumerate_chambers(&arr).len(), 1 + arr.len() + excess);
        let norm = normalize(&arr).unwrap();
        prop_assert_eq!(fiber_chambers(&norm).unwrap().len(), excess);
    }

    #[test]
    fn arrangement_json_round_trips(arr in arrangement()) {
        let back = Arrangement::from_json(&arr.to_json_value().to_string()).unwrap();
        prop_assert_eq!(back, arr);
    }

    #[test]
    fn sigma_retracts(x1 in unit_rat(), x2 in (-64i64..=256).prop_map(|p| rat(p, 64)), y1 in unit_rat(), y2 in unit_rat(), t in (0i64..=8).prop_map(|k| rat(k, 8))) {
        let sigma = Retraction { r: int(5) };
        let x = Point::new(x1 * int(4), x2);
        let y = (&y1, &y2);
        prop_assume!(sigma.in_domain(&x, y));
        let s = sigma.retract(&x, y).unwrap();
        let m = y1.abs().max(y2.abs());
        prop_assert!(s.y <= Rat::one() - &m);
        prop_assert_eq!(sigma.retract(&s, y).unwrap(), s.clone());
        prop_assert_eq!(sigma.homotopy(&x, y, &int(0)).unwrap(), x.clone());
        prop_assert_eq!(sigma.homotopy(&x, y, &int(1)).unwrap(), s);
        prop_assert!(sigma.in_domain(&sigma.homotopy(&x, y, &t).unwrap(), y));
    }

    #[test]
    fn sliding_along_y_stays_in_the_complement(arr in arrangement(), x1 in small_rat(), x2 in small_rat(), y1 in small_rat(), y2 in small_rat(), s in small_rat()) {
        let x = Point::new(x1, x2);
        let y = (&y1, &y2);
        if complement_membership(&arr, &x, y) {
            let moved = Point::new(&x.x + &s * &y1, &x.y + &s * &y2);
            prop_assert!(complement_membership(&arr, &moved, y));
        }
        let parallel = arr.lines.iter().any(|l| (&l.a * &y1 + &l.b * &y2).is_zero());
        if !parallel {
            prop_assert!(complement_membership(&arr, &x, y));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fs_circles_are_unknots(a in -300i64..=300, c in -300i64..=300, b in 1i64..100, pole in 0usize..34) {
        prop_assume!(a != c);
        let (lo, hi) = (a.min(c), a.max(c));
        let h = rat(b, 100);
        let pts = fs_circle(&Point::new(rat(lo, 100), h.clone()), &Point::new(rat(hi, 100), h));
        prop_assert!(on_square_sphere(&int(5), &pts));
        let link = PLLink::new(vec![PLLoop { label: "attaching:1".into(), points: project_round(&pts, 32) }]);
        let cfg = ProjectionConfig { pole: Some(pole), ..ProjectionConfig::default() };
        let dg = project_link(&link, &cfg).unwrap();
        prop_assert_eq!(simplify_diagram(&dg).crossing_count(), 0);
    }

    #[test]
    fn simplification_keeps_colorings_and_linking(which in 0usize..3, pole in 0usize..34, direction in 0usize..8) {
        let cfg = PipelineConfig::default();
        let link = arr2kirby::lift::geometrize_and_lift(&disk_divides()[which], cfg.lift_options()).unwrap();
        let proj = ProjectionConfig { pole: Some(pole), direction, ..ProjectionConfig::default() };
        let dg = project_link(&link, &proj).unwrap();
        let s = simplify_diagram(&dg);
        prop_assert!(s.crossing_count() <= dg.crossing_count());
        // the diagonal is the writhe, which simplification may change
        let off = |lm: arr2kirby::diagram::LinkingMatrix| {
            let n = lm.labels.len();
            (0..n).flat_map(|i| (0..n).filter(move |j| *j != i).map(move |j| (i, j))).map(|(i, j)| lm.entries[i][j]).collect::<Vec<_>>()
        };
        prop_assert_eq!(off(linking_matrix(&s).unwrap()), off(linking_matrix(&dg).unwrap()));
        for p in [3, 5] {
            prop_assert_eq!(fox_colorings(&s, p).unwrap(), fox_colorings(&dg, p).unwrap());
        }
        let back = Diagram::from_json(&dg.to_json()).unwrap();
        prop_assert_eq!(back, dg);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn moves_keep_the_report(entry in prop::sample::select(vec!["cross", "generic3", "pencil3"]), curve_pick in 0usize..8, steps in 1usize..4) {
        let corpus = builtin_corpus();
        let cfg = PipelineConfig::default();
        let p = prepare(&corpus.entry(entry).unwrap().arrangement).unwrap();
        let d = kirby_divide(&p, false).unwrap();
        let curves: Vec<usize> = d.attaching().map(|(i, _)| i).collect();
        let ci = curves[curve_pick % curves.len()];
        let mut cur = d.clone();
        for m in reduction_sequence(&d, ci).unwrap().iter().take(steps) {
            cur = apply_move(&cur, m).unwrap();
        }
        let back = DivideWithCusps::from_json(&cur.to_json_value().to_string()).unwrap();
        prop_assert_eq!(back.to_json_value(), cur.to_json_value());
        let before = divide_report(&d, &cfg).unwrap();
        let after = divide_report(&cur, &cfg).unwrap();
        prop_assert!(compare_reports(&before, &after).is_empty());
    }
}
