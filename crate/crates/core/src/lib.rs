//! Kirby diagrams for complements of complexified real line arrangements.
//!
//! An [`arrangement::Arrangement`] is normalized, its bounded chambers become
//! 2-handles and its lines dotted circles. The handles are drawn either as
//! four-edge attaching circles or as a divide with cusps ([`divide`]), lifted
//! to PL links in the 3-sphere ([`lift`]), projected to planar diagrams
//! ([`diagram`]) and compared through exact invariants ([`invariants`]).
//!
//! ```
//! use arr2kirby::arrangement::Arrangement;
//! use arr2kirby::invariants::homology_of_report;
//! use arr2kirby::pipeline::{arrangement_report, Construction, PipelineConfig};
//!
//! let cross = Arrangement::from_ints("cross", &[[1, 0, 0], [0, 1, 0]]).unwrap();
//! let report = arrangement_report(&cross, Construction::Divide, &PipelineConfig::default()).unwrap();
//! assert!(report.all_framings_zero());
//! assert_eq!(homology_of_report(&report).to_string(), "H1=Z^2 H2=Z^1 chi=0");
//! ```

#![allow(clippy::needless_range_loop, clippy::type_complexity)]

pub mod arrangement;
pub mod rational;
pub mod divide;
pub mod moves;
pub mod lift;
pub mod diagram;
pub mod invariants;
pub mod pipeline;
pub mod render;
pub mod corpus;
pub mod cli;
