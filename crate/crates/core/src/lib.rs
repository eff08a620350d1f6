//! Extreme `L_p` discrepancy of weighted point sets and its dual
//! integration problem.
//!
//! The crate computes the extreme discrepancy (over all sub-boxes `[a,b)` of
//! the unit cube) exactly for `p = 2`, even `p` and `p = inf`, and by Monte
//! Carlo for any finite `p`; evaluates the worst-case functions and
//! representers of the dual integration problem; and produces the constants
//! and bounds showing that the problem suffers from the curse of
//! dimensionality for `1 < p < inf`.

pub mod curse;
pub mod duality;
pub mod engine;
pub mod error;
pub mod generators;
pub mod io;
pub mod model;
pub mod optimize;
pub mod quadrature;
pub mod rng;
pub mod sum;

pub use curse::{
    a_const, aggregate_error_lower, appendix_b_diagnostics, b_const, c_const, certificate_lower_bound,
    curse_constants, f_profile, gnewuch_linf_upper, min_points_lower, nw10_l2_lower, AppendixDiagnostics,
    BMethod, Certificate, CurseConstants,
};
pub use duality::{
    duality_check, h1, hd, initial_error, representer_cstar, spline_eval, spline_integral, spline_norm,
    t1_apply_numeric, DualityReport, PExponent, SplineProfile,
};
pub use engine::{
    extreme_l2_exact, extreme_linf_exact, extreme_linf_lower_mc, extreme_lp_exact_even_p, extreme_lp_mc,
    McConfig,
};
pub use error::{Error, Result};
pub use generators::{generate, GeneratorKind, GeneratorSpec};
pub use io::{load_points, save_points};
pub use model::{
    local_discrepancy, sample_box_pair, BoxPair, DiscrepancyResult, Method, PointSet, WeightKind, WeightSet,
};
