// Copyright 2026 The dampath Authors
// SPDX-License-Identifier: Apache-2.0

//! Closed-form propagator of the damped particle.
//!
//! ```text
//! K(xb, T; xa, 0) = sqrt(kappa / (2 pi i hbar sinh kappa T))
//!     * exp{ (i/hbar) [ kappa/(2 tanh kappa T) (xb^2 + xa^2) - kappa xb xa / sinh kappa T
//!                       - kappa lambda tanh(kappa T / 2) (xb + xa) ] }
//! ```
//!
//! with `lambda = xa - (xb - xa)/(e^(-kappa T) - 1)` fixed by the endpoints.
//! Square roots take the principal branch, so the prefactor carries
//! `e^(-i pi/4)` and matches the free propagator as `kappa -> 0`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::classical::{BoundarySpec, CompanionParams, DampedParams};
use crate::error::{invalid, Result};
use crate::hyper::{sinhc, tanhc};
use crate::slicing::omega_limit;

/// `sqrt(1 / (2 pi i hbar L))` on the principal branch.
fn fresnel_prefactor(hbar: f64, length: f64) -> Complex64 {
    Complex64::new(0.0, -1.0 / (2.0 * PI * hbar * length)).sqrt()
}

/// Duration-dependent pieces of the closed kernel, evaluated once.
#[derive(Debug, Clone, Copy)]
pub struct ClosedKernel {
    params: DampedParams,
    duration: f64,
    prefactor: Complex64,
    /// kappa / (2 tanh kappa T)
    diag: f64,
    /// kappa / sinh kappa T
    cross: f64,
    /// kappa tanh(kappa T / 2)
    drift: f64,
}

impl ClosedKernel {
    pub fn new(duration: f64, p: &DampedParams) -> Result<Self> {
        if !duration.is_finite() || duration <= 0.0 {
            return Err(invalid("T", format!("duration must be > 0, got {duration}")));
        }
        let x = p.kappa * duration;
        // series-safe forms: kappa/sinh(kT) = 1/(T sinhc(kT)), etc.
        let cross = 1.0 / (duration * sinhc(x));
        Ok(Self {
            params: *p,
            duration,
            prefactor: fresnel_prefactor(p.hbar, duration * sinhc(x)),
            diag: 0.5 * cross * x.cosh(),
            cross,
            drift: 0.5 * p.kappa * x * tanhc(0.5 * x),
        })
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    /// Exponent of the kernel (without the `i/hbar`), with `lambda` taken
    /// from the endpoints.
    fn action(&self, xa: f64, xb: f64) -> f64 {
        let quadratic = self.diag * (xb * xb + xa * xa) - self.cross * xb * xa;
        if self.params.is_free() {
            return quadratic;
        }
        let lambda = self.lambda(xa, xb);
        quadratic - self.drift * lambda * (xb + xa)
    }

    fn lambda(&self, xa: f64, xb: f64) -> f64 {
        let bc = BoundarySpec {
            xa,
            xb,
            duration: self.duration,
        };
        CompanionParams::from_boundary(&bc, &self.params)
            .map(|c| c.lambda)
            .unwrap_or(0.0)
    }

    pub fn eval(&self, xa: f64, xb: f64) -> Complex64 {
        self.prefactor * Complex64::from_polar(1.0, self.action(xa, xb) / self.params.hbar)
    }

    /// `(K, dK/dxb)`, differentiating the exponent through `lambda(xa, xb)`.
    pub fn eval_with_derivative(&self, xa: f64, xb: f64) -> (Complex64, Complex64) {
        let k = self.eval(xa, xb);
        let mut slope = 2.0 * self.diag * xb - self.cross * xa;
        if !self.params.is_free() {
            let gap = crate::hyper::damping_gap(self.params.kappa * self.duration);
            let dlambda = -1.0 / gap;
            slope -= self.drift * (dlambda * (xb + xa) + self.lambda(xa, xb));
        }
        (k, k * Complex64::new(0.0, slope / self.params.hbar))
    }
}

/// Closed-form kernel; `kappa = 0` dispatches to [`free_kernel`].
pub fn closed_kernel(bc: &BoundarySpec, p: &DampedParams) -> Result<Complex64> {
    if p.is_free() {
        return free_kernel(bc, p.hbar);
    }
    Ok(ClosedKernel::new(bc.duration, p)?.eval(bc.xa, bc.xb))
}

pub fn free_kernel(bc: &BoundarySpec, hbar: f64) -> Result<Complex64> {
    if !(bc.duration > 0.0) {
        return Err(invalid("T", "duration must be > 0"));
    }
    let d = bc.xb - bc.xa;
    Ok(fresnel_prefactor(hbar, bc.duration)
        * Complex64::from_polar(1.0, d * d / (2.0 * hbar * bc.duration)))
}

/// Kernel as `prefactor * exp{(i/hbar)(c_bb xb^2 + c_aa xa^2 + c_ab xa xb + c_b xb + c_a xa)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelQuadraticForm {
    pub prefactor: Complex64,
    pub c_aa: f64,
    pub c_bb: f64,
    pub c_ab: f64,
    pub c_a: f64,
    pub c_b: f64,
    pub hbar: f64,
}

impl KernelQuadraticForm {
    pub fn exponent(&self, xa: f64, xb: f64) -> f64 {
        self.c_bb * xb * xb + self.c_aa * xa * xa + self.c_ab * xa * xb + self.c_b * xb + self.c_a * xa
    }

    pub fn eval(&self, xa: f64, xb: f64) -> Complex64 {
        self.prefactor * Complex64::from_polar(1.0, self.exponent(xa, xb) / self.hbar)
    }
}

/// Quadratic form of the closed kernel with `lambda(xa, xb)` substituted.
///
/// `lambda (xb + xa)` is itself quadratic in the endpoints, so the linear
/// coefficients vanish identically:
///
/// ```text
/// c_aa = kappa/(2 tanh kT) - kappa tanh(kT/2) (1 + 1/(e^-kT - 1))
/// c_bb = kappa/(2 tanh kT) + kappa tanh(kT/2) / (e^-kT - 1)
/// c_ab = -kappa/sinh kT - kappa tanh(kT/2)
/// ```
///
/// `kappa = 0` yields the free form `(1/2T, 1/2T, -1/T)`.
pub fn quadratic_form(duration: f64, p: &DampedParams) -> Result<KernelQuadraticForm> {
    let ck = ClosedKernel::new(duration, p)?;
    // kappa tanh(kT/2) / (e^-kT - 1) = -kappa / (1 + e^-kT)
    let drift_over_gap = -p.kappa / (1.0 + (-p.kappa * duration).exp());
    Ok(KernelQuadraticForm {
        prefactor: ck.prefactor,
        c_aa: ck.diag - ck.drift - drift_over_gap,
        c_bb: ck.diag + drift_over_gap,
        c_ab: -ck.cross - ck.drift,
        c_a: 0.0,
        c_b: 0.0,
        hbar: p.hbar,
    })
}

/// Quadratic form at a fixed, externally supplied `lambda`. Here the linear
/// coefficients are `-kappa lambda tanh(kT/2)` and vanish only with the
/// `tanh` factor or `lambda`.
pub fn quadratic_form_fixed_lambda(
    duration: f64,
    p: &DampedParams,
    lambda: f64,
) -> Result<KernelQuadraticForm> {
    let ck = ClosedKernel::new(duration, p)?;
    let linear = -ck.drift * lambda;
    Ok(KernelQuadraticForm {
        prefactor: ck.prefactor,
        c_aa: ck.diag,
        c_bb: ck.diag,
        c_ab: -ck.cross,
        c_a: linear,
        c_b: linear,
        hbar: p.hbar,
    })
}

/// Continuum limit of the time-sliced kernel: the closed kernel times the
/// phase `exp(-(i/hbar) lambda^2 (kappa^2 T/2 - kappa tanh(kappa T/2)))`
/// accumulated by the completed squares.
pub fn continuum_kernel(bc: &BoundarySpec, p: &DampedParams) -> Result<Complex64> {
    let closed = closed_kernel(bc, p)?;
    if p.is_free() {
        return Ok(closed);
    }
    let lambda = CompanionParams::from_boundary(bc, p)?.lambda;
    let omega = omega_limit(bc.duration, p, lambda);
    Ok(closed * Complex64::from_polar(1.0, -omega / p.hbar))
}

/// Relative mismatch between `K(T1 + T2)` and the composition
/// `int K(xb, T2; y) K(y, T1; xa) dy`, the latter done as a Fresnel integral
/// over the two quadratic forms. Zero for a semigroup; reported, not enforced.
pub fn composition_defect(
    xa: f64,
    xb: f64,
    t1: f64,
    t2: f64,
    p: &DampedParams,
) -> Result<f64> {
    let first = quadratic_form(t1, p)?;
    let second = quadratic_form(t2, p)?;
    let hbar = p.hbar;
    // exponent in y: (c_bb1 + c_aa2) y^2 + (c_ab1 xa + c_ab2 xb) y + rest
    let quad = first.c_bb + second.c_aa;
    let lin = first.c_ab * xa + second.c_ab * xb;
    let rest = first.c_aa * xa * xa + second.c_bb * xb * xb;
    let fresnel = Complex64::new(0.0, PI * hbar / quad).sqrt();
    let composed = first.prefactor
        * second.prefactor
        * fresnel
        * Complex64::from_polar(1.0, (rest - lin * lin / (4.0 * quad)) / hbar);
    let direct = closed_kernel(&BoundarySpec::new(xa, xb, t1 + t2)?, p)?;
    Ok((composed - direct).norm() / direct.norm())
}
