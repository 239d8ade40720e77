// Copyright 2026 The dampath Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact motion of the damped particle `x'' + kappa x' = 0` (unit mass) and
//! the conservative companion system `x'' = kappa^2 (x - lambda)` that shares
//! its phase curve.
//!
//! Along a damped trajectory the velocity obeys `x' = -kappa (x - lambda)`,
//! so the friction force can be traded for the linear force
//! `-kappa^2 (x - lambda)`. The companion depends on the trajectory through
//! `lambda`, the asymptotic rest position.

use crate::error::{invalid, Error, Result};
use crate::hyper::damping_gap;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampedParams {
    /// Friction coefficient, 1/time. Zero selects the free particle.
    pub kappa: f64,
    /// Action scale.
    pub hbar: f64,
}

impl DampedParams {
    pub fn new(kappa: f64, hbar: f64) -> Result<Self> {
        if !kappa.is_finite() || kappa < 0.0 {
            return Err(invalid("kappa", format!("must be finite and >= 0, got {kappa}")));
        }
        if !hbar.is_finite() || hbar <= 0.0 {
            return Err(invalid("hbar", format!("must be finite and > 0, got {hbar}")));
        }
        Ok(Self { kappa, hbar })
    }

    /// `hbar = 1`.
    pub fn with_kappa(kappa: f64) -> Result<Self> {
        Self::new(kappa, 1.0)
    }

    pub fn free(hbar: f64) -> Result<Self> {
        Self::new(0.0, hbar)
    }

    #[inline]
    pub fn is_free(&self) -> bool {
        self.kappa == 0.0
    }

    /// Stiffness of the companion system, `-kappa^2`. Never positive.
    #[inline]
    pub fn companion_stiffness(&self) -> f64 {
        -self.kappa * self.kappa
    }
}

impl Default for DampedParams {
    fn default() -> Self {
        Self {
            kappa: 0.6,
            hbar: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialCondition {
    pub x0: f64,
    pub v0: f64,
}

impl InitialCondition {
    pub fn new(x0: f64, v0: f64) -> Self {
        Self { x0, v0 }
    }
}

/// Endpoints `x(0) = xa`, `x(T) = xb` of a transition amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySpec {
    pub xa: f64,
    pub xb: f64,
    pub duration: f64,
}

impl BoundarySpec {
    pub fn new(xa: f64, xb: f64, duration: f64) -> Result<Self> {
        if !xa.is_finite() || !xb.is_finite() {
            return Err(invalid("x", "endpoints must be finite"));
        }
        if !duration.is_finite() || duration <= 0.0 {
            return Err(invalid(
                "T",
                format!("duration must be finite and > 0, got {duration}"),
            ));
        }
        Ok(Self { xa, xb, duration })
    }
}

/// Constants of `x(t) = lambda + eta e^(-kappa t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompanionParams {
    pub lambda: f64,
    pub eta: f64,
}

impl CompanionParams {
    /// From `x(0) = x0`, `x'(0) = v0`.
    pub fn from_initial(ic: InitialCondition, p: &DampedParams) -> Result<Self> {
        if p.is_free() {
            return Err(Error::ZeroFriction);
        }
        let eta = -ic.v0 / p.kappa;
        Ok(Self {
            lambda: ic.x0 - eta,
            eta,
        })
    }

    /// From the endpoint pair of a boundary-value problem.
    pub fn from_boundary(bc: &BoundarySpec, p: &DampedParams) -> Result<Self> {
        if p.is_free() {
            return Err(Error::ZeroFriction);
        }
        let eta = (bc.xb - bc.xa) / damping_gap(p.kappa * bc.duration);
        Ok(Self {
            lambda: bc.xa - eta,
            eta,
        })
    }

    /// Position on the damped trajectory at time `t`.
    #[inline]
    pub fn position(&self, p: &DampedParams, t: f64) -> f64 {
        self.lambda + self.eta * (-p.kappa * t).exp()
    }

    #[inline]
    pub fn velocity(&self, p: &DampedParams, t: f64) -> f64 {
        -p.kappa * self.eta * (-p.kappa * t).exp()
    }

    #[inline]
    pub fn acceleration(&self, p: &DampedParams, t: f64) -> f64 {
        p.kappa * p.kappa * self.eta * (-p.kappa * t).exp()
    }

    /// Conserved energy of the companion, `v^2/2 - kappa^2 (x - lambda)^2 / 2`.
    pub fn energy(&self, pp: PhasePoint, p: &DampedParams) -> f64 {
        let d = pp.x - self.lambda;
        0.5 * pp.v * pp.v - 0.5 * p.kappa * p.kappa * d * d
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub x: f64,
    pub v: f64,
}

pub fn solve_damped(ic: InitialCondition, p: &DampedParams, t: f64) -> PhasePoint {
    if p.is_free() {
        return PhasePoint {
            x: ic.x0 + ic.v0 * t,
            v: ic.v0,
        };
    }
    let decay = (-p.kappa * t).exp();
    let eta = -ic.v0 / p.kappa;
    // x0 + v0 (1 - e^-kt) / k, written so that large kt does not cancel.
    let travelled = -ic.v0 * (-p.kappa * t).exp_m1() / p.kappa;
    PhasePoint {
        x: ic.x0 + travelled,
        v: -p.kappa * eta * decay,
    }
}

/// Force of the companion system, `-kappa^2 (x - lambda)`.
pub fn conservative_force(x: f64, c: &CompanionParams, p: &DampedParams) -> f64 {
    -p.kappa * p.kappa * (x - c.lambda)
}

/// Companion Lagrangian `v^2/2 + kappa^2 x^2 / 2 - kappa^2 lambda x`,
/// used per trajectory as the integrand of the modified action.
pub fn lagrangian_density(pp: PhasePoint, c: &CompanionParams, p: &DampedParams) -> f64 {
    let k2 = p.kappa * p.kappa;
    0.5 * pp.v * pp.v + 0.5 * k2 * pp.x * pp.x - k2 * c.lambda * pp.x
}

/// Largest `|x'' - kappa^2 (x - lambda)|` over `times` for a trajectory given
/// as `t -> (x, x'')`.
pub fn residual_along<F>(trajectory: F, c: &CompanionParams, p: &DampedParams, times: &[f64]) -> f64
where
    F: Fn(f64) -> (f64, f64),
{
    let k2 = p.kappa * p.kappa;
    times
        .iter()
        .map(|&t| {
            let (x, acc) = trajectory(t);
            (acc - k2 * (x - c.lambda)).abs()
        })
        .fold(0.0, f64::max)
}

/// Euler–Lagrange residual of the companion Lagrangian along the exact damped
/// trajectory starting at `ic`. Analytic second derivatives throughout.
pub fn stationarity_residual(
    ic: InitialCondition,
    p: &DampedParams,
    times: &[f64],
) -> Result<f64> {
    let c = CompanionParams::from_initial(ic, p)?;
    Ok(residual_along(
        |t| (c.position(p, t), c.acceleration(p, t)),
        &c,
        p,
        times,
    ))
}
