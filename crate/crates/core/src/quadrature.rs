// Copyright 2026 The dampath Authors
// SPDX-License-Identifier: Apache-2.0

//! Brute-force propagation `psi_T(x) = int K(x, T; q, 0) psi0(q) dq` by
//! composite Gauss–Legendre quadrature, kept independent of the completed
//! square in [`crate::wavepacket`] so the two can check each other.
//!
//! The `q` window is `+-window_sigmas` envelope standard deviations. Each
//! output sample sums its nodes in fixed order, so results are bitwise
//! reproducible regardless of thread count.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::classical::DampedParams;
use crate::error::{invalid, Error, Result};
use crate::kernel::{quadratic_form, ClosedKernel};
use crate::wavepacket::GaussianPacket;

/// Largest tolerated phase advance of the integrand between adjacent nodes.
pub const MAX_PHASE_PER_STEP: f64 = PI / 4.0;

/// Phase advance [`QuadratureGrid::auto`] aims for.
pub const TARGET_PHASE_PER_STEP: f64 = PI / 8.0;

/// Output samples plus the integration rule over `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
    pub panels: usize,
    pub nodes_per_panel: usize,
    pub window_sigmas: f64,
}

impl QuadratureGrid {
    pub fn new(x_min: f64, x_max: f64, points: usize, panels: usize) -> Result<Self> {
        let g = Self {
            x_min,
            x_max,
            points,
            panels,
            nodes_per_panel: 16,
            window_sigmas: 8.0,
        };
        g.validate()?;
        Ok(g)
    }

    /// Smallest panel count meeting [`TARGET_PHASE_PER_STEP`] (at least 16).
    pub fn auto(
        x_min: f64,
        x_max: f64,
        points: usize,
        pkt: &GaussianPacket,
        duration: f64,
        p: &DampedParams,
    ) -> Result<Self> {
        let mut g = Self::new(x_min, x_max, points, 1)?;
        let per_panel = g.phase_per_step(pkt, duration, p)?;
        g.panels = ((per_panel / TARGET_PHASE_PER_STEP).ceil() as usize).max(16);
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        if !(self.x_min.is_finite() && self.x_max.is_finite() && self.x_min < self.x_max) {
            return Err(invalid("x-range", format!("need x_min < x_max, got [{}, {}]", self.x_min, self.x_max)));
        }
        if self.points < 2 {
            return Err(invalid("points", "need at least 2 output samples"));
        }
        if self.panels == 0 || self.nodes_per_panel == 0 {
            return Err(invalid("panels", "panel and node counts must be >= 1"));
        }
        if !(self.window_sigmas > 0.0) {
            return Err(invalid("window_sigmas", "must be > 0"));
        }
        Ok(())
    }

    pub fn half_window(&self, pkt: &GaussianPacket) -> f64 {
        self.window_sigmas * pkt.envelope_sigma()
    }

    /// Output sample positions.
    pub fn xs(&self) -> Vec<f64> {
        let h = (self.x_max - self.x_min) / (self.points - 1) as f64;
        (0..self.points).map(|i| self.x_min + h * i as f64).collect()
    }

    /// Worst-case phase advance between neighbouring nodes: the largest
    /// `|d phase / dq|` over window and outputs, from the kernel's quadratic
    /// form, times the widest Gauss–Legendre gap `h pi / (2n + 1)`.
    pub fn phase_per_step(&self, pkt: &GaussianPacket, duration: f64, p: &DampedParams) -> Result<f64> {
        let form = quadratic_form(duration, p)?;
        let w = self.half_window(pkt);
        let x_far = self.x_min.abs().max(self.x_max.abs());
        let gradient = 2.0 * (form.c_aa / p.hbar - pkt.theta.im).abs() * w
            + (form.c_ab.abs() * x_far + pkt.v0.abs()) / p.hbar;
        let panel = 2.0 * w / self.panels as f64;
        Ok(gradient * panel * PI / (2 * self.nodes_per_panel + 1) as f64)
    }
}

/// `psi_T` and `d psi_T / dx` on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledWavefunction {
    pub xs: Vec<f64>,
    pub psi: Vec<Complex64>,
    pub dpsi: Vec<Complex64>,
    pub hbar: f64,
}

pub fn evolve_quadrature(
    pkt: &GaussianPacket,
    duration: f64,
    p: &DampedParams,
    grid: &QuadratureGrid,
) -> Result<SampledWavefunction> {
    grid.validate()?;
    let phase = grid.phase_per_step(pkt, duration, p)?;
    if !(phase <= MAX_PHASE_PER_STEP) {
        let suggested = (grid.panels as f64 * phase / TARGET_PHASE_PER_STEP).ceil() as usize;
        return Err(Error::UnderResolved {
            phase_per_step: phase,
            limit: MAX_PHASE_PER_STEP,
            suggested_panels: suggested,
        });
    }
    let kernel = ClosedKernel::new(duration, p)?;
    let nodes = integration_nodes(pkt, grid, p.hbar);
    let xs = grid.xs();
    let (psi, dpsi): (Vec<_>, Vec<_>) = xs
        .par_iter()
        .map(|&x| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut dacc = Complex64::new(0.0, 0.0);
            for &(q, weighted) in &nodes {
                let (k, dk) = kernel.eval_with_derivative(q, x);
                acc += k * weighted;
                dacc += dk * weighted;
            }
            (acc, dacc)
        })
        .unzip();
    Ok(SampledWavefunction {
        xs,
        psi,
        dpsi,
        hbar: p.hbar,
    })
}

/// `(q_j, w_j psi0(q_j))` over all panels, in ascending `q`.
fn integration_nodes(pkt: &GaussianPacket, grid: &QuadratureGrid, hbar: f64) -> Vec<(f64, Complex64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(grid.nodes_per_panel).expect("validated"));
    let mut pairs = rule.as_node_weight_pairs().to_vec();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let w = grid.half_window(pkt);
    let h = 2.0 * w / grid.panels as f64;
    let mut out = Vec::with_capacity(grid.panels * pairs.len());
    for j in 0..grid.panels {
        let mid = -w + h * (j as f64 + 0.5);
        for &(t, wt) in &pairs {
            let q = mid + 0.5 * h * t;
            out.push((q, pkt.psi0(q, hbar) * (0.5 * h * wt)));
        }
    }
    out
}

/// Least-squares Gaussian `exp(-theta (x - center)^2 + (i/hbar) momentum x + const)`
/// through sampled data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianFit {
    pub center: f64,
    pub theta: Complex64,
    pub momentum: f64,
    /// Relative L2 misfit of `|psi|^2` against the fitted density.
    pub density_residual: f64,
    /// RMS phase misfit (radians), weighted by density.
    pub phase_residual: f64,
}

impl SampledWavefunction {
    fn spacing(&self) -> f64 {
        self.xs[1] - self.xs[0]
    }

    pub fn density(&self) -> Vec<f64> {
        self.psi.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Trapezoid estimate of `int |psi|^2 dx`.
    pub fn norm(&self) -> f64 {
        let rho = self.density();
        let inner: f64 = rho.iter().sum();
        (inner - 0.5 * (rho[0] + rho[rho.len() - 1])) * self.spacing()
    }

    pub fn mean_x(&self) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for (x, z) in self.xs.iter().zip(&self.psi) {
            num += x * z.norm_sqr();
            den += z.norm_sqr();
        }
        num / den
    }

    /// `hbar Im(psi* psi') / |psi|^2`, averaged with `|psi|^2`.
    pub fn mean_momentum(&self) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for (z, dz) in self.psi.iter().zip(&self.dpsi) {
            num += (z.conj() * dz).im;
            den += z.norm_sqr();
        }
        self.hbar * num / den
    }

    /// `||psi - f|| / ||f||` over the samples.
    pub fn relative_l2_difference<F: Fn(f64) -> Complex64>(&self, f: F) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for (&x, z) in self.xs.iter().zip(&self.psi) {
            let r = f(x);
            num += (z - r).norm_sqr();
            den += r.norm_sqr();
        }
        (num / den).sqrt()
    }

    pub fn fit_gaussian(&self) -> Result<GaussianFit> {
        let rho = self.density();
        let peak_idx = (0..rho.len())
            .max_by(|&i, &j| rho[i].total_cmp(&rho[j]))
            .expect("at least two samples");
        let peak = rho[peak_idx];
        if !(peak > 0.0) {
            return Err(invalid("wavefunction", "vanishes on the sample grid"));
        }
        let keep: Vec<usize> = (0..rho.len()).filter(|&i| rho[i] > 1e-12 * peak).collect();
        if keep.len() < 5 {
            return Err(invalid("wavefunction", "too few samples above the noise floor to fit"));
        }
        let x_ref = self.mean_x();
        let ts: Vec<f64> = keep.iter().map(|&i| self.xs[i] - x_ref).collect();
        let ws: Vec<f64> = keep.iter().map(|&i| rho[i] / peak).collect();

        let log_rho: Vec<f64> = keep.iter().map(|&i| rho[i].ln()).collect();
        let c = weighted_quadratic(&ts, &log_rho, &ws)?;
        if !(c[2] < 0.0) {
            return Err(invalid("wavefunction", "density is not confined"));
        }
        let re_theta = -0.5 * c[2];
        let center = x_ref - c[1] / (2.0 * c[2]);

        let phases = unwrap_from(&keep.iter().map(|&i| self.psi[i].arg()).collect::<Vec<_>>(), peak_idx_in(&keep, peak_idx));
        let d = weighted_quadratic(&ts, &phases, &ws)?;
        let im_theta = -d[2];
        let momentum = self.hbar * (d[1] + 2.0 * im_theta * (x_ref - center));

        let (mut num, mut den) = (0.0, 0.0);
        for (i, &r) in rho.iter().enumerate() {
            let t = self.xs[i] - x_ref;
            let g = (c[0] + c[1] * t + c[2] * t * t).exp();
            num += (r - g) * (r - g);
            den += r * r;
        }
        let (mut pnum, mut pden) = (0.0, 0.0);
        for ((t, ph), w) in ts.iter().zip(&phases).zip(&ws) {
            let m = d[0] + d[1] * t + d[2] * t * t;
            pnum += w * (ph - m) * (ph - m);
            pden += w;
        }
        Ok(GaussianFit {
            center,
            theta: Complex64::new(re_theta, im_theta),
            momentum,
            density_residual: (num / den).sqrt(),
            phase_residual: (pnum / pden).sqrt(),
        })
    }
}

fn peak_idx_in(keep: &[usize], peak: usize) -> usize {
    keep.iter().position(|&i| i == peak).expect("peak is above the floor")
}

/// Unwraps a phase sequence outward from `anchor`, keeping its value there.
fn unwrap_from(raw: &[f64], anchor: usize) -> Vec<f64> {
    let wrap = |d: f64| d - 2.0 * PI * (d / (2.0 * PI)).round();
    let mut out = raw.to_vec();
    for i in anchor + 1..raw.len() {
        out[i] = out[i - 1] + wrap(raw[i] - raw[i - 1]);
    }
    for i in (0..anchor).rev() {
        out[i] = out[i + 1] + wrap(raw[i] - raw[i + 1]);
    }
    out
}

/// Weighted least squares for `y ~ c0 + c1 t + c2 t^2`.
fn weighted_quadratic(t: &[f64], y: &[f64], w: &[f64]) -> Result<[f64; 3]> {
    let n = t.len();
    let a = DMatrix::from_fn(n, 3, |i, j| w[i] * t[i].powi(j as i32));
    let b = DVector::from_fn(n, |i, _| w[i] * y[i]);
    let sol = a
        .svd(true, true)
        .solve(&b, 1e-15)
        .map_err(|e| invalid("fit", e.to_string()))?;
    Ok([sol[0], sol[1], sol[2]])
}
