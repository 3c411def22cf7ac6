//! Tropical mirror construction for toric Calabi-Yau threefolds and their
//! lower-dimensional analogues.
//!
//! Input is a smooth tropical curve (or point configuration on a line),
//! either given directly or produced from a charge matrix and Kähler
//! parameters. From it the crate builds the dual subdivision, the integral
//! affine base with its cuts, the monodromy of loops around the discriminant,
//! the mirror conic bundle equation over the Novikov field, and the wall
//! transformations that glue local analytic charts.

pub mod error;
pub mod lattice;
pub mod novikov;
pub mod smith;
pub mod tropical;
pub mod monodromy;
pub mod affine_base;
pub mod mirror;
pub mod analytic;

pub use error::{Error, Result};
pub use lattice::{
    det2, int, intersect_shifted_cones, lattice_triangle_area, parse_rational, primitive, rat, ConeKind, IntegralCone, LatticeVec, Rational,
    RationalBox, RationalPoint,
};
pub use novikov::{Extended, NovikovElement};
pub use tropical::{
    diagram_from_charges, dual_subdivision, is_smooth, render, validate, web_from_heights,
    ChargeInput, ChargeMatrix, DualSubdivision, EdgeId, Ray, RenderFormat, TropicalDiagram,
    ValidationReport,
};
pub use monodromy::{
    build_dual_graph, edge_covector, is_contractible, loop_monodromy, standard_form_matrix,
    vertex_loop, Crossing, DualGraphEmbedding, Loop, Sign, UnipotentMatrix,
};
pub use affine_base::{build_cut_presentation, ChamberId, CutPresentation};
pub use mirror::{
    face_distance, normalize_presentation, presentation, superpotential, CorrectionMap,
    MirrorPresentation, Superpotential,
};
pub use analytic::{
    cone_family_converges, flux_monomial, focus_focus_demo, monomial_val_on_box, wall_cross,
    AnalyticSeries, DemoReport, Monomial, WallMode, WallTransformation,
};
