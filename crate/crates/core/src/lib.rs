//! Higher-order digital nets over prime fields Z_b, the weighted Sobolev
//! reproducing kernel of integer smoothness, and exact / randomized
//! worst-case integration error computation with explicit bound constants.
//!
//! The main pieces:
//!
//! - [`gf`]: exact linear algebra over Z_b.
//! - [`net`]: generating matrices (Faure, Sobol', file), point generation,
//!   digit interlacing.
//! - [`quality`]: Dick metric functions, dual nets, brute-force order-alpha
//!   (t,m,s)-net verification.
//! - [`kernel`]: Bernoulli polynomials, the weighted Sobolev kernel and the
//!   exact worst-case error of equal-weight rules.
//! - [`shift`]: random digital shifts and RMS worst-case error estimation.
//! - [`bounds`]: the explicit error-bound constants and the dual-sum
//!   mean-square bound.
//!
//! All values are immutable after construction and safe to share across
//! threads; the shift sweeps parallelize internally with deterministic
//! reduction order.

pub mod bernoulli;
pub mod bounds;
pub mod error;
pub mod gf;
pub mod kernel;
pub mod net;
pub mod quality;
pub mod shift;
mod sobol_tables;

pub use bernoulli::BernoulliTable;
pub use bounds::{
    binom_sum_bound, bound_constants, constant_c_tau, constant_d, constant_g, mse_upper_bound_bd,
    theoretical_bound, BoundConstants, CtauMode, MseBound,
};
pub use error::{Error, Result};
pub use gf::{rows_independent, GfMatrix};
pub use kernel::{
    bernoulli, error_on_representer, kernel, kernel_1d, worst_case_error,
    worst_case_error_floats, KernelParams, Weights,
};
pub use net::{
    exact_float_digits, faure_matrices, generate_points, interlace, interlaced_t_bound,
    read_matrices, sequence_to_net, sobol_matrices, write_matrices, Coordinate,
    GeneratingMatrices, PointSet,
};
pub use quality::{
    enumerate_dual, exact_t_value, interpolation_coeffs, min_dick_metric, mu, mu_vec, propagate_t,
    verify_order_t, DualNetElement, InterpolationCoeffs, MinDickMetric, DEFAULT_NODE_LIMIT,
};
pub use shift::{
    apply_shift, best_shift_search, default_shift_depth, rms_wce_mc, sample_shift,
    sample_shift_indexed, shift_errors, DigitalShift, RmsEstimate,
};
pub use sobol_tables::MAX_SOBOL_DIMENSION;
