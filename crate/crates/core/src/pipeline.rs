//! End-to-end constructions: arrangement to Kirby link to invariants.

use crate::arrangement::{fiber_chambers, normalize, Arrangement, ArrangementError, FiberChamber, NormalizedArrangement, Point};
use crate::diagram::{project_link, Diagram, DiagramError, ProjectionConfig};
use crate::divide::{assemble_kirby_divide, AssembleOptions, Curve, DivideError, DivideWithCusps, Domain, Role};
use crate::invariants::{invariant_report, InvariantError, InvariantReport, ReportOptions, DEFAULT_BRACKET_CAP};
use crate::moves::MoveError;
use crate::lift::{fs_link, geometrize_and_lift, lift_with_pushoffs, LiftError, LiftOptions, PLLink};
use crate::rational::rat;

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error(transparent)]
    Divide(#[from] DivideError),
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Move(#[from] MoveError),
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub resolution: usize,
    pub projection: ProjectionConfig,
    pub primes: Vec<u64>,
    pub bracket_cap: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            resolution: 64,
            projection: ProjectionConfig::default(),
            primes: vec![3, 5, 7],
            bracket_cap: DEFAULT_BRACKET_CAP,
        }
    }
}

impl PipelineConfig {
    pub fn lift_options(&self) -> LiftOptions {
        LiftOptions {
            resolution: self.resolution,
            ..LiftOptions::default()
        }
    }

    pub fn report_options(&self) -> ReportOptions<'_> {
        ReportOptions {
            primes: &self.primes,
            bracket_cap: self.bracket_cap,
        }
    }
}

/// Normalized arrangement with its fiber chambers.
pub struct Prepared {
    pub norm: NormalizedArrangement,
    pub fibers: Vec<FiberChamber>,
}

pub fn prepare(arr: &Arrangement) -> Result<Prepared, PipelineError> {
    let norm = normalize(arr)?;
    let fibers = fiber_chambers(&norm)?;
    Ok(Prepared { norm, fibers })
}

/// Which Kirby link to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    /// Four-edge attaching circles over each fiber chamber.
    Circles,
    /// Lift of the divide with cusps, full strip curves.
    Divide,
    /// Lift of the divide with reduced strip curves.
    Reduced,
}

impl Construction {
    pub fn name(self) -> &'static str {
        match self {
            Construction::Circles => "circles",
            Construction::Divide => "divide",
            Construction::Reduced => "reduced",
        }
    }
}

pub fn kirby_divide(p: &Prepared, reduced: bool) -> Result<DivideWithCusps, PipelineError> {
    Ok(assemble_kirby_divide(
        &p.norm,
        &p.fibers,
        AssembleOptions {
            reduced,
            ..Default::default()
        },
    )?)
}

/// The Kirby link with a framing companion for every attaching circle.
pub fn kirby_link(p: &Prepared, how: Construction, cfg: &PipelineConfig) -> Result<PLLink, PipelineError> {
    match how {
        Construction::Circles => Ok(fs_link(&p.norm, &p.fibers, true, cfg.resolution)),
        Construction::Divide | Construction::Reduced => {
            let d = kirby_divide(p, how == Construction::Reduced)?;
            Ok(lift_with_pushoffs(&d, cfg.lift_options())?)
        }
    }
}

pub fn link_report(link: &PLLink, cfg: &PipelineConfig) -> Result<(Diagram, InvariantReport), PipelineError> {
    let dg = project_link(link, &cfg.projection)?;
    let r = invariant_report(&dg, cfg.report_options())?;
    Ok((dg, r))
}

/// Report of a divide lifted with companions for its attaching curves.
pub fn divide_report(d: &DivideWithCusps, cfg: &PipelineConfig) -> Result<InvariantReport, PipelineError> {
    let link = if d.arrangement.is_some() {
        lift_with_pushoffs(d, cfg.lift_options())?
    } else {
        geometrize_and_lift(d, cfg.lift_options())?
    };
    Ok(link_report(&link, cfg)?.1)
}

pub fn arrangement_report(arr: &Arrangement, how: Construction, cfg: &PipelineConfig) -> Result<InvariantReport, PipelineError> {
    let p = prepare(arr)?;
    let link = kirby_link(&p, how, cfg)?;
    Ok(link_report(&link, cfg)?.1)
}

fn ring(n: usize, r: (i64, i64), from: f64, to: f64) -> Vec<(f64, f64)> {
    // rational points near a circle of radius r.0/r.1, from angle `from` to `to`
    let rad = r.0 as f64 / r.1 as f64;
    (0..n)
        .map(|i| {
            let t = from + (to - from) * i as f64 / (n - 1) as f64;
            (rad * t.cos(), rad * t.sin())
        })
        .collect()
}

fn exact(pts: &[(f64, f64)]) -> Vec<Point> {
    // snap to a grid of 1/1000
    pts.iter()
        .map(|&(x, y)| Point::new(rat((x * 1000.0).round() as i64, 1000), rat((y * 1000.0).round() as i64, 1000)))
        .collect()
}

/// The smooth circle, the circle with an outward cusp and the circle with
/// an inward cusp, in the unit disk.
pub fn disk_divides() -> [DivideWithCusps; 3] {
    use std::f64::consts::PI;
    let single = |c: Curve| DivideWithCusps {
        domain: Domain::Disk,
        curves: vec![c],
        arrangement: None,
    };
    let smooth = exact(&ring(24, (1, 2), 0.0, 2.0 * PI * 23.0 / 24.0));
    // the bottom of the circle is replaced by a spike through (0, -4/5)
    let mut outward = exact(&ring(22, (1, 2), -PI / 2.0 + 0.2, 1.5 * PI - 0.2));
    outward.push(Point::new(rat(0, 1), rat(-4, 5)));
    let n = outward.len();
    // the spike reaches up to (0, -1/10) inside the circle
    let mut inward = exact(&ring(22, (1, 2), -PI / 2.0 + 0.5, 1.5 * PI - 0.5));
    inward.extend([
        Point::new(rat(-2, 25), rat(-9, 25)),
        Point::new(rat(0, 1), rat(-1, 10)),
        Point::new(rat(2, 25), rat(-9, 25)),
    ]);
    let m = inward.len();
    [
        single(Curve::closed(Role::Plain, smooth, vec![])),
        single(Curve::closed(Role::Plain, outward, vec![n - 1])),
        single(Curve::closed(Role::Plain, inward, vec![m - 2])),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{linking_matrix, simplify_diagram};
    use crate::divide::validate_divide;
    use crate::invariants::{fox_colorings, kauffman_bracket};

    #[test]
    fn disk_divides_lift_as_expected() {
        let cfg = PipelineConfig::default();
        let [c1, c2, c3] = disk_divides();
        for d in [&c1, &c2, &c3] {
            let rep = validate_divide(d);
            assert!(rep.is_valid(), "{:?}", rep.violations);
        }
        let l1 = geometrize_and_lift(&c1, cfg.lift_options()).unwrap();
        assert_eq!(l1.loops.len(), 2);
        let d1 = project_link(&l1, &cfg.projection).unwrap();
        assert_eq!(linking_matrix(&d1).unwrap().entries[0][1].abs(), 1);

        let l2 = geometrize_and_lift(&c2, cfg.lift_options()).unwrap();
        assert_eq!(l2.loops.len(), 1);
        let d2 = simplify_diagram(&project_link(&l2, &cfg.projection).unwrap());
        assert_eq!(fox_colorings(&d2, 3).unwrap(), 3u32.into());
        assert!(kauffman_bracket(&d2, 24).unwrap().1.is_one());

        let l3 = geometrize_and_lift(&c3, cfg.lift_options()).unwrap();
        assert_eq!(l3.loops.len(), 1);
        let d3 = simplify_diagram(&project_link(&l3, &cfg.projection).unwrap());
        assert_eq!(fox_colorings(&d3, 3).unwrap(), 9u32.into());
    }

    #[test]
    fn strip_order_does_not_change_the_report() {
        use crate::divide::StripOrder;
        use crate::invariants::compare_reports;
        let cfg = PipelineConfig::default();
        for lines in [[[1, 0, 0], [0, 1, 0], [1, 1, -1]], [[1, 0, 0], [0, 1, 0], [1, 1, 0]]] {
            let p = prepare(&Arrangement::from_ints("t", &lines).unwrap()).unwrap();
            let by_height = kirby_divide(&p, false).unwrap();
            let opts = AssembleOptions { order: StripOrder::Reversed, ..Default::default() };
            let reversed = assemble_kirby_divide(&p.norm, &p.fibers, opts).unwrap();
            assert!(validate_divide(&reversed).is_valid());
            let a = divide_report(&by_height, &cfg).unwrap();
            let b = divide_report(&reversed, &cfg).unwrap();
            let diffs = compare_reports(&a, &b);
            assert!(diffs.is_empty(), "{}", diffs[0]);
        }
    }
}
