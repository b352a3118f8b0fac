//! Exact polarization feasibility and moduli invariants for depth-one
//! sheaves glued from rank-`r` bundles on a nodal curve with two smooth
//! components meeting in a single node.
//!
//! All arithmetic is exact: weights, slopes and interval endpoints are
//! arbitrary-precision rationals.

pub mod cli;
pub mod curve;
pub mod error;
pub mod exact;
pub mod feasibility;
pub mod gluing;
pub mod moduli;
pub mod par;
pub mod stability;

pub use curve::{
    arithmetic_genus, chi_to_degree, degree_to_chi, dim_moduli_smooth, mk_slope, polarized_slope,
    NodalCurve, Polarization, SheafClass,
};
pub use error::{Error, Result};
pub use exact::{rat_arith, ArithOp, ArithOutcome, Rational, RationalInterval};
pub use feasibility::{
    feasible_interval, in_region, in_region_all_k, necessary_conditions, region_scan,
    region_scan_with, violated_condition, AllRanksReport, FeasibilityReport, IntRange,
    NecessaryCondition, RegionRow,
};
pub use gluing::{
    canonical_subsheaves, glued_class, matrix_rank, GluedSheaf, GluingDatum, RationalMatrix,
    StalkType,
};
pub use moduli::{
    component_dimension, enumerate_components, fixed_det_fiber_dimension,
    projective_bundle_dimension, ComponentEnumeration, ComponentRecord,
};
pub use par::Execution;
pub use stability::{
    check_sufficiency, check_sufficiency_under, check_sufficiency_window, max_degree_bounds,
    mk_semistable_test, nonstable_locus_codim_bound, open_stable_locus_hypothesis, subsheaf_slope,
    Assumption, DegreeBounds, Shape, StabilityHypotheses, SubsheafInvariant, SufficiencyVerdict,
};
