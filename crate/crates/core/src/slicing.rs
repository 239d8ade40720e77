// Copyright 2026 The dampath Authors
// SPDX-License-Identifier: Apache-2.0

//! Time-sliced evaluation of the companion path integral.
//!
//! The short-time action on a slice of length `eps` is the quadratic form
//! `a0 (x'^2 + x^2) - 2 b0 x' x - r0 x' - s0 x`. Integrating out the interior
//! points one at a time keeps that shape, with coefficients updated by
//!
//! ```text
//! c_k     = a0 + a_(k-1)
//! a_k     = a0 - b0^2 / c_k
//! b_k     = b0 b_(k-1) / c_k
//! r_k     = r0 + (r_(k-1) + s0) b0 / c_k
//! s_k     = s_(k-1) + (r_(k-1) + s0) b_(k-1) / c_k
//! omega_k = (r_(k-1) + s0)^2 / (4 c_k)
//! ```
//!
//! and `a_k^2 - b_k^2 = a0^2 - b0^2` for every `k`. With the hyperbolic seed
//! `a0 = b0 cosh(kappa eps)` the iterates have exact closed forms in
//! `u = kappa eps`:
//!
//! ```text
//! b_k = sinh(u) / (2 eps sinh((k+1) u))
//! a_k = sinh(u) coth((k+1) u) / (2 eps)
//! c_k = sinh((k+1) u) / (2 eps sinh(k u))
//! ```

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::classical::{BoundarySpec, CompanionParams, DampedParams};
use crate::error::{invalid, Error, Result};
use crate::hyper::{coth, sinh_ratio_multiple, tanhc};

/// How `a0` is seeded from `b0 = 1/(2 eps)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Seed {
    /// `a0 = b0 cosh(kappa eps)`; the closed forms are exact at finite `eps`.
    #[default]
    Hyperbolic,
    /// `a0 = b0 (1 + 2 (kappa eps / 2)^2)`, the midpoint-rule short-time action.
    Polynomial,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceGrid {
    pub slices: usize,
    pub epsilon: f64,
}

impl SliceGrid {
    pub fn new(duration: f64, slices: usize) -> Result<Self> {
        if slices < 2 {
            return Err(invalid("N", format!("need at least 2 slices, got {slices}")));
        }
        if !duration.is_finite() || duration <= 0.0 {
            return Err(invalid("T", format!("duration must be > 0, got {duration}")));
        }
        Ok(Self {
            slices,
            epsilon: duration / slices as f64,
        })
    }

    pub fn duration(&self) -> f64 {
        self.epsilon * self.slices as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceCoefficients {
    pub a: f64,
    pub b: f64,
    pub r: f64,
    pub s: f64,
    /// Constant left behind by the completed square of this step.
    pub omega: f64,
    /// `a - b`, carried separately: `a` and `b` agree to `O((kappa eps)^2)`
    /// and their rounded difference loses the friction information.
    pub excess: f64,
}

impl SliceCoefficients {
    /// `(a^2 - b^2 - (a0^2 - b0^2)) / a0^2` against the seed coefficients.
    pub fn invariant_defect(&self, base: &SliceCoefficients) -> f64 {
        let lhs = (self.a - self.b) * (self.a + self.b);
        (lhs - base.determinant()) / (base.a * base.a)
    }

    /// `a^2 - b^2` from the carried excess.
    #[inline]
    pub fn determinant(&self) -> f64 {
        self.excess * (self.a + self.b)
    }
}

/// Coefficients of one short-time factor.
pub fn short_time_coeffs(p: &DampedParams, eps: f64, lambda: f64, seed: Seed) -> SliceCoefficients {
    let b = 0.5 / eps;
    let u = p.kappa * eps;
    let half = 0.5 * u;
    let excess = match seed {
        // cosh(u) - 1 = 2 sinh^2(u/2)
        Seed::Hyperbolic => 2.0 * b * half.sinh() * half.sinh(),
        Seed::Polynomial => 2.0 * b * half * half,
    };
    let r = 0.5 * p.kappa * p.kappa * lambda * eps;
    SliceCoefficients {
        a: b + excess,
        b,
        r,
        s: r,
        omega: 0.0,
        excess,
    }
}

/// Integrates out one interior point. `step` is the index `k` of the
/// coefficients produced and only feeds diagnostics.
pub fn recursion_step(
    prev: &SliceCoefficients,
    base: &SliceCoefficients,
    step: usize,
) -> Result<SliceCoefficients> {
    let pivot = base.a + prev.a;
    if !(pivot.is_finite() && pivot > f64::MIN_POSITIVE) {
        return Err(Error::DegenerateRecursion { step, pivot });
    }
    let source = prev.r + base.s;
    let det = base.determinant();
    // a0 - b0^2 / c rearranged as (a0^2 - b0^2 + a0 a_(k-1)) / c: no cancellation.
    let a = (det + base.a * prev.a) / pivot;
    let b = base.b * prev.b / pivot;
    let next = SliceCoefficients {
        a,
        b,
        r: base.r + source * base.b / pivot,
        s: prev.s + source * prev.b / pivot,
        omega: source * source / (4.0 * pivot),
        excess: det / (a + b),
    };
    debug_assert!(
        next.invariant_defect(base).abs() < 1e-12,
        "a_k^2 - b_k^2 drifted at step {step}"
    );
    Ok(next)
}

/// Iterator over `(a_k, b_k, r_k, s_k, omega_k)` for `k = 0, 1, 2, ...`,
/// starting from the seed itself.
#[derive(Debug, Clone)]
pub struct Recursion {
    base: SliceCoefficients,
    current: Option<SliceCoefficients>,
    step: usize,
}

impl Recursion {
    pub fn new(base: SliceCoefficients) -> Self {
        Self {
            base,
            current: None,
            step: 0,
        }
    }

    pub fn base(&self) -> &SliceCoefficients {
        &self.base
    }
}

impl Iterator for Recursion {
    type Item = SliceCoefficients;

    fn next(&mut self) -> Option<Self::Item> {
        let next = match &self.current {
            None => self.base,
            Some(prev) => recursion_step(prev, &self.base, self.step).ok()?,
        };
        self.current = Some(next);
        self.step += 1;
        Some(next)
    }
}

/// Hyperbolic closed forms of `(a_k, b_k)`, overflow-safe for large `(k+1) u`.
pub fn closed_form_ab(k: usize, p: &DampedParams, eps: f64) -> (f64, f64) {
    let half_inv = 0.5 / eps;
    let n = (k + 1) as f64;
    if p.is_free() {
        return (half_inv / n, half_inv / n);
    }
    let u = p.kappa * eps;
    let b = half_inv * sinh_ratio_multiple(1.0, n, u);
    let a = half_inv * u.sinh() * coth(n * u);
    (a, b)
}

/// `a_k - b_k = sinh(u) tanh((k+1) u / 2) / (2 eps)`.
pub fn closed_form_excess(k: usize, p: &DampedParams, eps: f64) -> f64 {
    let u = p.kappa * eps;
    0.5 / eps * u.sinh() * (0.5 * (k + 1) as f64 * u).tanh()
}

/// `a0 + a_(k-1)` in closed form, `k >= 1`.
pub fn pivot(k: usize, p: &DampedParams, eps: f64) -> f64 {
    debug_assert!(k >= 1);
    let half_inv = 0.5 / eps;
    let (n1, n) = ((k + 1) as f64, k as f64);
    if p.is_free() {
        return half_inv * n1 / n;
    }
    half_inv / sinh_ratio_multiple(n, n1, p.kappa * eps)
}

/// Closed forms of `(r_k, s_k)` with nested sinh sums carried as running
/// prefix sums, `O(k)`.
pub fn closed_form_rs(k: usize, p: &DampedParams, eps: f64, lambda: f64) -> (f64, f64) {
    let mut sums = SourceSums::new(p, eps, lambda);
    let mut out = sums.current();
    for _ in 0..k {
        out = sums.advance();
    }
    out
}

/// Running state for the source-term closed forms.
///
/// `inner_j = sum_(l=1..j) sinh(l u) / sinh(j u)` and
/// `r_k = r0 (1 + 2 inner_k sinh(k u)/sinh((k+1) u))`,
/// `s_k = r0 (1 + sum_(j=1..k) 2 inner_j sinh(u)/sinh((j+1) u))`.
struct SourceSums {
    r0: f64,
    u: f64,
    k: usize,
    inner: f64,
    outer: f64,
}

impl SourceSums {
    fn new(p: &DampedParams, eps: f64, lambda: f64) -> Self {
        Self {
            r0: 0.5 * p.kappa * p.kappa * lambda * eps,
            u: p.kappa * eps,
            k: 0,
            inner: 0.0,
            outer: 0.0,
        }
    }

    fn current(&self) -> (f64, f64) {
        let j = self.k as f64;
        let r = if self.k == 0 {
            self.r0
        } else {
            self.r0 * (1.0 + 2.0 * self.inner * sinh_ratio_multiple(j, j + 1.0, self.u))
        };
        (r, self.r0 * (1.0 + self.outer))
    }

    fn advance(&mut self) -> (f64, f64) {
        self.k += 1;
        let j = self.k as f64;
        self.inner = if self.k == 1 {
            1.0
        } else {
            self.inner * sinh_ratio_multiple(j - 1.0, j, self.u) + 1.0
        };
        self.outer += 2.0 * self.inner * sinh_ratio_multiple(1.0, j + 1.0, self.u);
        self.current()
    }
}

/// Closed-form coefficients for `k = 0..=k_max` in one `O(k_max)` sweep.
pub fn closed_form_table(
    k_max: usize,
    p: &DampedParams,
    eps: f64,
    lambda: f64,
) -> Vec<SliceCoefficients> {
    let mut sums = SourceSums::new(p, eps, lambda);
    let s0 = sums.r0;
    let mut out = Vec::with_capacity(k_max + 1);
    let (a, b) = closed_form_ab(0, p, eps);
    let (r, s) = sums.current();
    out.push(SliceCoefficients { a, b, r, s, omega: 0.0, excess: closed_form_excess(0, p, eps) });
    for k in 1..=k_max {
        let r_prev = out[k - 1].r;
        let (a, b) = closed_form_ab(k, p, eps);
        let (r, s) = sums.advance();
        let source = r_prev + s0;
        out.push(SliceCoefficients {
            a,
            b,
            r,
            s,
            omega: source * source / (4.0 * pivot(k, p, eps)),
            excess: closed_form_excess(k, p, eps),
        });
    }
    out
}

/// `sum_(k=1..N-1) omega_k`, the constant accumulated by the `N - 1`
/// interior integrations (closed forms, hyperbolic seed). Empty for `N = 1`.
pub fn omega_sum(slices: usize, p: &DampedParams, eps: f64, lambda: f64) -> f64 {
    if slices < 2 || p.is_free() || lambda == 0.0 {
        return 0.0;
    }
    let mut sums = SourceSums::new(p, eps, lambda);
    let s0 = sums.r0;
    let mut total = 0.0;
    let mut r_prev = s0;
    for k in 1..slices {
        let source = r_prev + s0;
        total += source * source / (4.0 * pivot(k, p, eps));
        r_prev = sums.advance().0;
    }
    total
}

/// Continuum value of [`omega_sum`] at fixed duration:
/// `lambda^2 (kappa^2 T / 2 - kappa tanh(kappa T / 2))`.
pub fn omega_limit(duration: f64, p: &DampedParams, lambda: f64) -> f64 {
    let x = p.kappa * duration;
    // kappa^2 T/2 - kappa tanh(x/2) = kappa^2 T/2 (1 - tanhc(x/2))
    0.5 * p.kappa * p.kappa * duration * (1.0 - tanhc(0.5 * x)) * lambda * lambda
}

/// Discrete kernel together with the pieces it was assembled from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteKernel {
    pub amplitude: Complex64,
    pub last: SliceCoefficients,
    pub omega_sum: f64,
    pub lambda: f64,
}

/// `N`-slice approximation of the propagator, default (hyperbolic) seed.
pub fn discrete_kernel(bc: &BoundarySpec, p: &DampedParams, slices: usize) -> Result<Complex64> {
    discrete_kernel_with(bc, p, slices, Seed::default()).map(|k| k.amplitude)
}

pub fn discrete_kernel_with(
    bc: &BoundarySpec,
    p: &DampedParams,
    slices: usize,
    seed: Seed,
) -> Result<DiscreteKernel> {
    let grid = SliceGrid::new(bc.duration, slices)?;
    let eps = grid.epsilon;
    let lambda = if p.is_free() {
        0.0
    } else {
        CompanionParams::from_boundary(bc, p)?.lambda
    };
    let base = short_time_coeffs(p, eps, lambda, seed);

    let mut prev = base;
    let mut log_modulus = 0.0;
    let mut omega = 0.0;
    for k in 1..slices {
        let pivot = base.a + prev.a;
        log_modulus -= (2.0 * eps * pivot).ln();
        prev = recursion_step(&prev, &base, k)?;
        omega += prev.omega;
    }

    let (xa, xb) = (bc.xa, bc.xb);
    let phase = prev.a * (xb * xb + xa * xa) - 2.0 * prev.b * xb * xa - prev.r * xb - prev.s * xa;
    let lead = Complex64::new(0.0, -1.0 / (2.0 * PI * p.hbar * eps)).sqrt();
    let amplitude =
        lead * (0.5 * log_modulus).exp() * Complex64::from_polar(1.0, (phase - omega) / p.hbar);
    Ok(DiscreteKernel {
        amplitude,
        last: prev,
        omega_sum: omega,
        lambda,
    })
}

/// Largest relative deviation of the recursion iterates from the closed
/// forms over `k <= k_max`, as `(ab, rs)`.
pub fn closed_form_deviation(
    k_max: usize,
    p: &DampedParams,
    eps: f64,
    lambda: f64,
    seed: Seed,
) -> (f64, f64) {
    let table = closed_form_table(k_max, p, eps, lambda);
    let rel = |x: f64, y: f64| if y == 0.0 { x.abs() } else { ((x - y) / y).abs() };
    let mut ab: f64 = 0.0;
    let mut rs: f64 = 0.0;
    for (it, cf) in Recursion::new(short_time_coeffs(p, eps, lambda, seed)).zip(&table) {
        ab = ab.max(rel(it.a, cf.a)).max(rel(it.b, cf.b));
        rs = rs.max(rel(it.r, cf.r)).max(rel(it.s, cf.s));
    }
    (ab, rs)
}
