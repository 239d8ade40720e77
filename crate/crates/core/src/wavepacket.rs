// Copyright 2026 The dampath Authors
// SPDX-License-Identifier: Apache-2.0

//! Gaussian packets carried by the closed kernel.
//!
//! The initial packet `psi0(q) = N exp(-theta q^2 + (i/hbar) v0 q)` sits at
//! the origin. Propagation is a single complex Gaussian integral against
//! [`quadratic_form`], which returns
//!
//! ```text
//! psi_T(x) = C exp{ -theta1 (x - <x>)^2 + (i/hbar) (p x - c_bb <x>^2) }
//! ```
//!
//! `theta1` here is the full complex width. The split that keeps the kernel's
//! `(i/hbar) c_bb x^2` term apart, `theta1_split = c_ab^2 / (4 hbar^2 A)` with
//! `A = theta - (i/hbar) c_aa`, lives in [`ResidualPhase`].

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::classical::DampedParams;
use crate::error::{invalid, Error, Result};
use crate::hyper::{damping_gap, tanhc};
use crate::kernel::{quadratic_form, KernelQuadraticForm};

/// Initial Gaussian packet centred at `q = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket {
    pub theta: Complex64,
    pub center: f64,
    pub v0: f64,
    pub norm_factor: Complex64,
}

impl GaussianPacket {
    /// Unit-normalised packet. `Re theta` must be positive.
    pub fn new(theta: Complex64, v0: f64) -> Result<Self> {
        if !(theta.re > 0.0) || !theta.im.is_finite() {
            return Err(invalid("theta0", format!("Re(theta0) must be > 0, got {theta}")));
        }
        if !v0.is_finite() {
            return Err(invalid("v0", "must be finite"));
        }
        Ok(Self {
            theta,
            center: 0.0,
            v0,
            norm_factor: Complex64::from((2.0 * theta.re / PI).powf(0.25)),
        })
    }

    pub fn real(theta: f64, v0: f64) -> Result<Self> {
        Self::new(Complex64::from(theta), v0)
    }

    pub fn psi0(&self, q: f64, hbar: f64) -> Complex64 {
        self.norm_factor * (-self.theta * q * q + Complex64::new(0.0, self.v0 * q / hbar)).exp()
    }

    /// Standard deviation of the amplitude envelope `exp(-Re(theta) q^2)`,
    /// i.e. `1 / sqrt(2 Re theta)`.
    pub fn envelope_sigma(&self) -> f64 {
        1.0 / (2.0 * self.theta.re).sqrt()
    }
}

impl Default for GaussianPacket {
    fn default() -> Self {
        Self::real(0.5, 5.0).expect("default packet is valid")
    }
}

/// Pure-phase leftovers of the completed square.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualPhase {
    /// Width with the kernel's `c_bb x^2` phase kept outside.
    pub theta1_split: Complex64,
    /// Coefficient of `(i/hbar) x^2` left over by the kernel, i.e. `c_bb`.
    pub theta2: f64,
    /// Constant phase `-c_bb <x>^2 / hbar`.
    pub constant: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolvedPacket {
    pub duration: f64,
    pub hbar: f64,
    pub theta1: Complex64,
    pub mean_x: f64,
    /// Mean momentum (unit mass) of the propagated packet.
    pub momentum: f64,
    pub residual_phase: ResidualPhase,
    /// `int |psi_T|^2 dx` for a unit-normalised initial packet.
    pub norm: f64,
    pub amplitude: Complex64,
}

impl EvolvedPacket {
    pub fn psi(&self, x: f64) -> Complex64 {
        let d = x - self.mean_x;
        let phase = self.momentum * x / self.hbar + self.residual_phase.constant;
        self.amplitude * (-self.theta1 * d * d + Complex64::new(0.0, phase)).exp()
    }
}

/// Completes the square of `int K(x, T; q, 0) psi0(q) dq` in `q`.
pub fn evolve_with_form(
    pkt: &GaussianPacket,
    duration: f64,
    form: &KernelQuadraticForm,
) -> Result<EvolvedPacket> {
    let hbar = form.hbar;
    let a = pkt.theta - Complex64::new(0.0, form.c_aa / hbar);
    // Re(A) = Re(theta0) > 0 always holds for a real kernel exponent
    if !(a.re > 0.0) {
        return Err(Error::NonConvergent { re: a.re });
    }
    let split = Complex64::from(form.c_ab * form.c_ab) / (4.0 * hbar * hbar * a);
    let theta1 = split - Complex64::new(0.0, form.c_bb / hbar);
    debug_assert!(theta1.re > 0.0);
    let mean_x = -pkt.v0 / form.c_ab;
    let momentum = 2.0 * form.c_bb * mean_x;
    let amplitude = pkt.norm_factor * form.prefactor * (Complex64::from(PI) / a).sqrt();
    Ok(EvolvedPacket {
        duration,
        hbar,
        theta1,
        mean_x,
        momentum,
        residual_phase: ResidualPhase {
            theta1_split: split,
            theta2: form.c_bb,
            constant: -form.c_bb * mean_x * mean_x / hbar,
        },
        norm: amplitude.norm_sqr() * (PI / (2.0 * theta1.re)).sqrt(),
        amplitude,
    })
}

/// Propagates `pkt` for time `duration` under the closed kernel.
pub fn evolve_analytic(pkt: &GaussianPacket, duration: f64, p: &DampedParams) -> Result<EvolvedPacket> {
    evolve_with_form(pkt, duration, &quadratic_form(duration, p)?)
}

/// `<x> = v0 tanh(kappa T) / kappa`; `v0 T` at `kappa = 0`.
pub fn mean_position(duration: f64, p: &DampedParams, v0: f64) -> f64 {
    v0 * duration * tanhc(p.kappa * duration)
}

/// `<v> = [2 kappa tanh(kappa T/2) / (e^-kT - 1)] <x> + v0`, as written.
/// Equal to `v0 [1 - 2 tanh(kT) / (1 + e^-kT)]`.
pub fn mean_velocity(duration: f64, p: &DampedParams, v0: f64) -> f64 {
    if duration == 0.0 || p.is_free() {
        return v0;
    }
    let x = p.kappa * duration;
    let coeff = 2.0 * p.kappa * (0.5 * x).tanh() / damping_gap(x);
    coeff * mean_position(duration, p, v0) + v0
}

/// Width coefficient exactly as printed alongside the mean values:
///
/// ```text
/// theta1 = [tanh^2(kT) / (hbar^2 kappa^2)]
///        / (4 [alpha0 - (i/hbar)(kappa/(2 tanh kT) - kappa tanh(kT/2) - kappa tanh(kT/2)/(e^-kT - 1))])
/// ```
///
/// Its numerator is the reciprocal of what the completed square gives
/// (`kappa^2 / (hbar^2 tanh^2 kT)`); compare against
/// [`ResidualPhase::theta1_split`].
pub fn theta1_verbatim(duration: f64, p: &DampedParams, alpha0: Complex64) -> Result<Complex64> {
    if !(duration > 0.0) {
        return Err(invalid("T", "duration must be > 0"));
    }
    if !(alpha0.re > 0.0) {
        return Err(invalid("alpha0", "Re(alpha0) must be > 0"));
    }
    let (k, h) = (p.kappa, p.hbar);
    let x = k * duration;
    // tanh(kT)/kappa stays finite as kappa -> 0
    let tk = duration * tanhc(x);
    let half = 0.5 * k * x * tanhc(0.5 * x);
    let bracket = 0.5 / tk - half + k / (1.0 + (-x).exp());
    let denom = 4.0 * (alpha0 - Complex64::new(0.0, bracket / h));
    Ok(Complex64::from(tk * tk / (h * h)) / denom)
}

/// First `T > 0` where [`mean_velocity`] changes sign, by bisection.
pub fn velocity_zero_crossing(p: &DampedParams) -> Result<f64> {
    if !(p.kappa > 0.0) {
        return Err(invalid("kappa", "velocity never vanishes for kappa = 0"));
    }
    let f = |t: f64| mean_velocity(t, p, 1.0);
    let mut lo = 0.0;
    let mut hi = 1.0 / p.kappa;
    while f(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
