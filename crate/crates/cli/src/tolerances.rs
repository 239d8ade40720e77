// Copyright 2026 The dampath Authors
// SPDX-License-Identifier: Apache-2.0

//! Pass/fail thresholds shared by `dampath check` and the acceptance suite.
//! Printed values (4.475413, 1.53251, ...) are compared at half a unit in
//! their last printed digit.

/// Recursion iterates vs hyperbolic closed forms of `(a_k, b_k)`, `k <= 10^4`.
pub const CLOSED_FORM_AB: f64 = 1e-10;
/// `|a_k^2 - b_k^2 - (a_0^2 - b_0^2)| / a_0^2`.
pub const CONSISTENCY: f64 = 1e-12;
/// `R_N`, `S_N` against `kappa lambda tanh(kappa T / 2)` at `N = 10^5`.
pub const SOURCE_LIMIT: f64 = 1e-4;
/// Fitted order of the vanishing of `sum Omega`.
pub const OMEGA_ORDER: f64 = 2.0;
pub const OMEGA_ORDER_BAND: f64 = 0.2;
/// `|K_N - K_closed| / |K_closed|` at `N = 10^4`.
pub const KERNEL_CONVERGENCE: f64 = 1e-3;
pub const KERNEL_MIN_ORDER: f64 = 1.0;
/// Closed kernel at `kappa = 1e-8` against the free propagator.
pub const FREE_REDUCTION: f64 = 1e-6;
pub const FREE_REDUCTION_KAPPA: f64 = 1e-8;
/// Free slicing reproduces the free propagator exactly.
pub const FREE_SLICING: f64 = 1e-12;
/// Quadratic-form reconstruction and endpoint-independent modulus.
pub const ROUND_TRIP: f64 = 1e-13;
pub const MODULUS: f64 = 1e-13;

pub const FIGURE_MEAN_X: f64 = 4.475_413;
pub const FIGURE_MEAN_X_TOL: f64 = 5e-7;
pub const FIGURE_MEAN_V: f64 = 1.532_51;
pub const FIGURE_MEAN_V_TOL: f64 = 5e-6;
pub const FIGURE_ASYMPTOTE: f64 = 8.333_33;
pub const FIGURE_ASYMPTOTE_KOCHAN: f64 = 16.666_7;
pub const ASYMPTOTE_TOL: f64 = 1e-4;
pub const FIGURE_ZERO_CROSSING: f64 = 1.468_956_0;
/// Against `ln(1 + sqrt 2)/kappa`. The printed seven decimals are themselves
/// 2.2e-8 off that, so they only get half a unit of their last digit.
pub const ZERO_CROSSING_TOL: f64 = 1e-8;
pub const FIGURE_ZERO_CROSSING_TOL: f64 = 5e-8;

/// Quadrature oracle against the completed square, relative.
pub const ORACLE: f64 = 1e-6;
/// Relative L2 misfit of `|psi_T|^2` against its least-squares Gaussian.
pub const GAUSSIAN_CLOSURE: f64 = 1e-6;
/// Finite-difference `d<x>/dT` at `T = 1e-6` against `v0`.
pub const INITIAL_SLOPE: f64 = 1e-6;
/// `<x>(h)/h` at `h = 1e-6` against `v0` for every scheme; the
/// one-sided quotient carries an `O(kappa h)` bias.
pub const COMPARATOR_SLOPE: f64 = 1e-5;

/// Wall-clock budgets, seconds.
pub const BUDGET_CLOSED_FORMS_S: f64 = 1.0;
pub const BUDGET_KERNEL_S: f64 = 5.0;
pub const BUDGET_CHECK_S: f64 = 60.0;
