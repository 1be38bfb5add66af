//! Certified computation and verification toolkit for the overpartition
//! counting function p̄(n).
//!
//! The crate provides exact counting, a certified evaluation of the
//! Hardy–Ramanujan-type explicit series for p̄(n), interval-certified finite
//! log-differences with their asymptotic two-sided bounds, reproduction of
//! the explicit thresholds and constants those bounds depend on, and a
//! verifier that turns the inequalities into per-index certified verdicts.

pub mod constants;
pub mod counts;
pub mod differences;
pub mod formula;
pub mod interval;
pub mod verifier;

pub use constants::{
    constants_for, leading_constant, lower_offset_constant, n0_bound, n1_threshold,
    pochhammer_half, rising_factorial, upper_offset_constant, ConstantSet, ConstantsError,
};
pub use counts::{brute_force_count, build_table, CountError, OverpartitionTable};
pub use differences::{
    correction_difference, first_order_bounds, higher_order_bounds, signed_log_difference,
    smooth_difference, DifferenceError, DifferenceRequest,
};
pub use formula::{
    growth_parameter, leading_term, relative_remainder, sinh_ratio_derivative, truncated_series,
    truncation_error_bound, FormulaError, MultiplierPhase, SeriesParams,
};
pub use interval::{
    certified_ceiling, certified_compare, certified_compare_rational, cos_pi_rational,
    log_of_big_integer, sin_pi_rational, CertifiedOrder, Interval, IntervalError, PrecisionPolicy,
};
pub use verifier::{
    convergence_probe, set_worker_threads, verify_corollaries, verify_lemmas, verify_main1,
    verify_main2, ProbePoint, ProbeReport, Verdict, VerificationReport, VerificationStatus,
    VerifierError,
};
