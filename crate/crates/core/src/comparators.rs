// Copyright 2026 The dampath Authors
// SPDX-License-Identifier: Apache-2.0

//! Final observables of the rival quantisations — Kochan, Caldirola–Kanai
//! (CK) and Das et al. (DGST) — next to this crate's own (LG), for
//! side-by-side tables.
//!
//! Only the closed formulas are implemented; nothing here re-derives those
//! schemes. DGST's width is typeset identically to CK's and is kept that way.
//! Kochan's width carries a mismatched brace around `0.5 kappa T`, read as
//! `tanh^2(kappa T / 2)`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::classical::DampedParams;
use crate::error::{invalid, Error, Result};
use crate::hyper::tanhc;
use crate::wavepacket::{evolve_analytic, mean_position, mean_velocity, GaussianPacket};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MethodId {
    Lg,
    Kochan,
    Ck,
    Dgst,
}

impl MethodId {
    pub const ALL: [MethodId; 4] = [MethodId::Lg, MethodId::Kochan, MethodId::Ck, MethodId::Dgst];

    pub fn label(self) -> &'static str {
        match self {
            MethodId::Lg => "LG",
            MethodId::Kochan => "KOCH",
            MethodId::Ck => "CK",
            MethodId::Dgst => "DGST",
        }
    }
}

impl fmt::Display for MethodId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for MethodId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lg" => Ok(MethodId::Lg),
            "koch" | "kochan" => Ok(MethodId::Kochan),
            "ck" => Ok(MethodId::Ck),
            "dgst" | "das" => Ok(MethodId::Dgst),
            _ => Err(invalid("method", format!("unknown method `{s}` (expected lg, kochan, ck, dgst)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableSet {
    pub mean_x: f64,
    pub mean_v: f64,
    /// Propagated width; undefined at `T = 0`.
    pub theta1: Option<Complex64>,
}

/// `(1 - e^-kT) / kappa`, tending to `T`.
fn relaxed_length(duration: f64, kappa: f64) -> f64 {
    let x = kappa * duration;
    if x == 0.0 {
        duration
    } else {
        -(-x).exp_m1() / kappa
    }
}

pub fn observables(
    m: MethodId,
    duration: f64,
    p: &DampedParams,
    v0: f64,
    alpha0: Complex64,
) -> Result<ObservableSet> {
    if !(duration >= 0.0) || !duration.is_finite() {
        return Err(invalid("T", format!("duration must be >= 0, got {duration}")));
    }
    if !(alpha0.re > 0.0) {
        return Err(invalid("alpha0", "Re(alpha0) must be > 0"));
    }
    let (k, h) = (p.kappa, p.hbar);
    let x = k * duration;
    let started = duration > 0.0;
    let set = match m {
        MethodId::Lg => {
            let theta1 = if started {
                let pkt = GaussianPacket::new(alpha0, v0)?;
                Some(evolve_analytic(&pkt, duration, p)?.residual_phase.theta1_split)
            } else {
                None
            };
            ObservableSet {
                mean_x: mean_position(duration, p, v0),
                mean_v: mean_velocity(duration, p, v0),
                theta1,
            }
        }
        MethodId::Kochan => {
            // 2 tanh(kT/2) / kappa = T tanhc(kT/2)
            let span = duration * tanhc(0.5 * x);
            let mean_x = v0 * span;
            let theta1 = started.then(|| {
                let num = 1.0 / (4.0 * h * h * span * span);
                // kappa / (1 - e^kT) = -1 / (T expm1(kT)/(kT))
                let growth = if x == 0.0 { duration } else { x.exp_m1() / k };
                let drift = -(3.0 - (-x).exp()) / (4.0 * h * growth);
                Complex64::from(num) / (alpha0 - Complex64::new(0.0, drift))
            });
            ObservableSet {
                mean_x,
                mean_v: 2.0 * v0 / (1.0 + (-x).exp()) - 1.5 * k * mean_x,
                theta1,
            }
        }
        MethodId::Ck | MethodId::Dgst => {
            let g = relaxed_length(duration, k);
            let theta1 = started.then(|| {
                let num = 1.0 / (4.0 * h * h * g * g);
                Complex64::from(num) / (alpha0 - Complex64::new(0.0, 1.0 / (2.0 * h * g)))
            });
            let mean_v = if m == MethodId::Ck { v0 } else { v0 * x.exp() };
            ObservableSet {
                mean_x: v0 * g,
                mean_v,
                theta1,
            }
        }
    };
    Ok(set)
}

/// Time range on which a scheme's mean velocity stays non-negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReliabilityInterval {
    pub start: f64,
    /// `f64::INFINITY` when unbounded.
    pub end: f64,
}

impl ReliabilityInterval {
    pub fn is_bounded(&self) -> bool {
        self.end.is_finite()
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.start && t <= self.end
    }
}

fn require_damping(p: &DampedParams) -> Result<()> {
    if p.kappa > 0.0 {
        Ok(())
    } else {
        Err(invalid("kappa", "must be > 0"))
    }
}

pub fn reliability_interval(m: MethodId, p: &DampedParams) -> Result<ReliabilityInterval> {
    require_damping(p)?;
    let end = match m {
        MethodId::Lg => std::f64::consts::SQRT_2.ln_1p() / p.kappa,
        MethodId::Kochan => 3f64.ln() / p.kappa,
        MethodId::Ck | MethodId::Dgst => f64::INFINITY,
    };
    Ok(ReliabilityInterval { start: 0.0, end })
}

/// `T -> infinity` limit of the mean position.
pub fn asymptote(m: MethodId, p: &DampedParams, v0: f64) -> Result<f64> {
    require_damping(p)?;
    Ok(match m {
        MethodId::Kochan => 2.0 * v0 / p.kappa,
        _ => v0 / p.kappa,
    })
}
