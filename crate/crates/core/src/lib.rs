// Copyright 2026 The dampath Authors
// SPDX-License-Identifier: Apache-2.0

//! Path-integral quantisation of the damped particle `x'' + kappa x' = 0`:
//! classical companion system, time-sliced recursion, closed kernel, Gaussian
//! packet evolution and the rival schemes' observables.
// `!(x > 0.0)` is the NaN-rejecting form used for argument checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod comparators;
pub mod convergence;
pub mod error;
pub mod hyper;
pub mod kernel;
pub mod quadrature;
pub mod slicing;
pub mod wavepacket;

pub use classical::{BoundarySpec, CompanionParams, DampedParams, InitialCondition, PhasePoint};
pub use comparators::{MethodId, ObservableSet};
pub use error::{Error, Result};
pub use kernel::KernelQuadraticForm;
pub use num_complex::Complex64;
pub use wavepacket::{EvolvedPacket, GaussianPacket};
