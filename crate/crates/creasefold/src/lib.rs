//! Curved folds of a flat sheet along prescribed planar foldlines.
//!
//! The library builds a proper fold of a planar sheet onto a space ridge,
//! transports the fold across further foldlines with closed-form stepping
//! rules, certifies each resulting developable strip against its regression
//! curve, and emits embedded/developed geometry for inspection.

pub mod curve;
pub mod export;
pub mod field;
pub mod fold;
pub mod jet;
pub mod propagate;
pub mod ridge;
pub mod strip;

mod banded;
mod numeric;
mod spline;

pub use curve::{
    alpha_from_descriptor, arclength_reparametrize_planar, arclength_reparametrize_space,
    darboux_from_alpha, CurveError, DarbouxData, FrenetFrame, PlanarCurve, SpaceCurve,
};
pub use export::{write_developed_svg, write_obj};
pub use field::{FieldError, ScalarField};
pub use fold::{
    flip_fields, flip_side, fold_along, fold_along_with_margin, principal_curvature,
    regression_distance, ruling_angle, ruling_direction, ruling_field, write_fold_csv,
    FoldDescriptor, FoldError, RulingField, Side,
};
pub use propagate::{
    circle_step, next_side_descriptor, next_side_descriptor_compact, perturb_torsion_bump,
    propagate_chain, regularity_check, ruling_intersect_general, step_velocity,
    transport_descriptor, transport_via_regression, write_strip_csv, ChainResult, CircleStep,
    CorrespondenceMap, PropagateError, PropagatedStrip, RegularityReport, RulingVerdict,
};
pub use ridge::{sphere_paraboloid_curve, sphere_ridge, torus_curve, total_curvature, RidgeError};
pub use strip::{
    annulus_assembly, chain_strips, develop_strip, development_isometry_defect,
    development_isometry_defect_sampled, embed_strip, gaussian_curvature_audit,
    normal_constancy_defect, AnnulusScene, CurvatureAudit, DevelopableStrip, DevelopedStrip,
    StripError, StripMesh, Symmetry,
};
