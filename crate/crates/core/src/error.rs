// Copyright 2026 The dampath Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("companion system is undefined for kappa = 0; use the free-particle path")]
    ZeroFriction,

    #[error("recursion degenerate at step {step}: pivot a0 + a_(k-1) = {pivot:e}")]
    DegenerateRecursion { step: usize, pivot: f64 },

    #[error("Gaussian integral does not converge: Re(quadratic coefficient) = {re:e}")]
    NonConvergent { re: f64 },

    #[error(
        "quadrature grid under-resolved: phase advance {phase_per_step:.3} rad per step \
         exceeds {limit:.3} rad; increase panels to at least {suggested_panels}"
    )]
    UnderResolved {
        phase_per_step: f64,
        limit: f64,
        suggested_panels: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
