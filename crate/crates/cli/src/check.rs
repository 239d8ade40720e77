// Copyright 2026 The dampath Authors
// SPDX-License-Identifier: Apache-2.0

//! `dampath check`: every module's invariants at the standard parameters
//! (`kappa = 0.6`, `hbar = 1`, `T = 1`, `theta0 = 1/2`, `v0 = 5`), one row
//! each. Rows marked `report` are measured and published without a verdict.

use std::f64::consts::SQRT_2;
use std::time::Instant;

use dampath::classical::stationarity_residual;
use dampath::comparators::{asymptote, observables, reliability_interval, MethodId};
use dampath::convergence::fit_order;
use dampath::kernel::{
    closed_kernel, composition_defect, continuum_kernel, free_kernel, quadratic_form,
};
use dampath::quadrature::{evolve_quadrature, QuadratureGrid};
use dampath::slicing::{
    closed_form_table, discrete_kernel, discrete_kernel_with, omega_limit, short_time_coeffs,
    Recursion, Seed,
};
use dampath::wavepacket::{
    evolve_analytic, mean_position, mean_velocity, theta1_verbatim, velocity_zero_crossing,
    GaussianPacket,
};
use dampath::{BoundarySpec, CompanionParams, Complex64, DampedParams, InitialCondition};
use serde_json::json;

use crate::config::{Injection, RunConfig};
use crate::error::CliResult;
use crate::runners::{base_metadata, standard_params};
use crate::table::{Cell, ResultTable};
use crate::tolerances as tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Report,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Report => "report",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub invariant: &'static str,
    pub module: &'static str,
    pub status: Status,
    pub measured: f64,
    pub relation: &'static str,
    pub tolerance: Option<f64>,
}

struct Suite {
    rows: Vec<CheckRow>,
}

impl Suite {
    fn below(&mut self, module: &'static str, invariant: &'static str, measured: f64, tolerance: f64) {
        let ok = measured < tolerance;
        self.push(module, invariant, measured, "<", Some(tolerance), ok);
    }

    fn at_least(&mut self, module: &'static str, invariant: &'static str, measured: f64, tolerance: f64) {
        let ok = measured >= tolerance;
        self.push(module, invariant, measured, ">=", Some(tolerance), ok);
    }

    fn report(&mut self, module: &'static str, invariant: &'static str, measured: f64) {
        self.rows.push(CheckRow {
            invariant,
            module,
            status: Status::Report,
            measured,
            relation: "report",
            tolerance: None,
        });
    }

    fn push(&mut self, module: &'static str, invariant: &'static str, measured: f64, relation: &'static str, tolerance: Option<f64>, ok: bool) {
        // NaN never passes
        let status = if ok && !measured.is_nan() { Status::Pass } else { Status::Fail };
        self.rows.push(CheckRow { invariant, module, status, measured, relation, tolerance });
    }
}

const ENDPOINTS: [f64; 5] = [-2.0, -1.0, 0.0, 1.0, 2.0];

fn rel(x: f64, reference: f64) -> f64 {
    ((x - reference) / reference).abs()
}

fn classical(s: &mut Suite, p: &DampedParams) -> dampath::Result<()> {
    let ic = InitialCondition::new(0.0, 5.0);
    let c = CompanionParams::from_initial(ic, p)?;
    let times: Vec<f64> = (0..=100).map(|i| 0.1 * i as f64).collect();
    let scale = p.kappa * p.kappa * (c.lambda.abs() + c.eta.abs());
    s.below("classical", "exact trajectory is stationary for the companion action", stationarity_residual(ic, p, &times)? / scale, 1e-12);
    let bc = BoundarySpec::new(0.0, 1.0, 1.0)?;
    let cb = CompanionParams::from_boundary(&bc, p)?;
    let miss = (cb.position(p, 0.0) - bc.xa).abs().max((cb.position(p, 1.0) - bc.xb).abs());
    s.below("classical", "boundary companion meets both endpoints", miss, 1e-12);
    Ok(())
}

fn slicing(s: &mut Suite, p: &DampedParams, inject: Option<Injection>) -> dampath::Result<()> {
    let eps = 1e-4;
    let nominal = short_time_coeffs(p, eps, 1.0, Seed::Hyperbolic);
    let mut start = nominal;
    if inject == Some(Injection::Seed) {
        // a0 off by one part in 1e9, excess kept consistent with it
        let shift = 1e-9 * start.a;
        start.a += shift;
        start.excess += shift;
    }
    let defect = Recursion::new(start).take(10_001).map(|c| c.invariant_defect(&nominal).abs()).fold(0.0, f64::max);
    s.below("slicing", "consistency identity a_k^2 - b_k^2 = a_0^2 - b_0^2, k <= 1e4", defect, tol::CONSISTENCY);
    let table = closed_form_table(10_000, p, eps, 1.0);
    let ab = Recursion::new(start)
        .zip(&table)
        .map(|(it, cf)| rel(it.a, cf.a).max(rel(it.b, cf.b)))
        .fold(0.0, f64::max);
    s.below("slicing", "recursion matches hyperbolic closed forms, k <= 1e4", ab, tol::CLOSED_FORM_AB);

    let n = 100_000;
    let target = p.kappa * (0.5 * p.kappa).tanh();
    let last = Recursion::new(short_time_coeffs(p, 1.0 / n as f64, 1.0, Seed::Hyperbolic))
        .nth(n)
        .expect("recursion is non-degenerate for kappa > 0");
    s.below("slicing", "R_N, S_N reach kappa lambda tanh(kappa T/2) at N = 1e5", rel(last.r, target).max(rel(last.s, target)), tol::SOURCE_LIMIT);

    let free = DampedParams::free(p.hbar)?;
    let bc = BoundarySpec::new(0.3, -0.7, 1.0)?;
    let exact = free_kernel(&bc, p.hbar)?;
    s.below("slicing", "free slicing is exact at N = 1000", (discrete_kernel(&bc, &free, 1000)? - exact).norm() / exact.norm(), tol::FREE_SLICING);

    let bc = BoundarySpec::new(0.0, 1.0, 1.0)?;
    let lambda = CompanionParams::from_boundary(&bc, p)?.lambda;
    let limit = omega_limit(1.0, p, lambda);
    let slices = [250usize, 500, 1000, 2000, 4000];
    let mut sums = Vec::new();
    for &n in &slices {
        sums.push(discrete_kernel_with(&bc, p, n, Seed::Hyperbolic)?.omega_sum);
    }
    let steps: Vec<f64> = slices.iter().map(|&n| 1.0 / n as f64).collect();
    let gaps: Vec<f64> = sums.iter().map(|x| (x - limit).abs()).collect();
    s.at_least("slicing", "sum Omega converges to its continuum limit, fitted order", fit_order(&steps, &gaps).unwrap_or(f64::NAN), tol::OMEGA_ORDER - tol::OMEGA_ORDER_BAND);
    s.report("slicing", "sum Omega at N = 4000 (does not vanish)", sums[sums.len() - 1]);
    Ok(())
}

fn kernel(s: &mut Suite, p: &DampedParams, inject: Option<Injection>) -> dampath::Result<()> {
    let t = 1.0;
    let expect = (p.kappa / (2.0 * std::f64::consts::PI * p.hbar * (p.kappa * t).sinh())).sqrt();
    let mut q = quadratic_form(t, p)?;
    if inject == Some(Injection::KernelPhase) {
        q.c_ab *= 1.0 + 1e-9;
    }
    let (mut modulus, mut round_trip, mut free_dev): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let tiny = DampedParams::new(tol::FREE_REDUCTION_KAPPA, p.hbar)?;
    for &xa in &ENDPOINTS {
        for &xb in &ENDPOINTS {
            let bc = BoundarySpec::new(xa, xb, t)?;
            let k = closed_kernel(&bc, p)?;
            modulus = modulus.max(rel(k.norm(), expect));
            round_trip = round_trip.max((q.eval(xa, xb) - k).norm() / k.norm());
            for &tt in &[0.5, 1.0, 2.0] {
                let bt = BoundarySpec::new(xa, xb, tt)?;
                let f = free_kernel(&bt, p.hbar)?;
                free_dev = free_dev.max((closed_kernel(&bt, &tiny)? - f).norm() / f.norm());
            }
        }
    }
    s.below("kernel", "modulus sqrt(kappa/(2 pi hbar sinh kappa T)) at every endpoint", modulus, tol::MODULUS);
    s.below("kernel", "quadratic form reconstructs the kernel", round_trip, tol::ROUND_TRIP);
    s.below("kernel", "kappa = 1e-8 reduces to the free propagator", free_dev, tol::FREE_REDUCTION);

    let bc = BoundarySpec::new(0.0, 1.0, t)?;
    let limit = continuum_kernel(&bc, p)?;
    let closed = closed_kernel(&bc, p)?;
    let slices = [500usize, 1000, 2000, 4000, 8000];
    let mut errs = Vec::new();
    let mut last = Complex64::new(0.0, 0.0);
    for &n in &slices {
        last = discrete_kernel(&bc, p, n)?;
        errs.push((last - limit).norm() / limit.norm());
    }
    let steps: Vec<f64> = slices.iter().map(|&n| t / n as f64).collect();
    s.at_least("kernel", "sliced kernel converges to the continuum kernel, fitted order", fit_order(&steps, &errs).unwrap_or(f64::NAN), tol::KERNEL_MIN_ORDER);
    s.report("kernel", "|K_8000 - K_closed| / |K_closed| (phase-defect plateau)", (last - closed).norm() / closed.norm());
    s.report("kernel", "composition defect K(T1+T2) vs K(T2) * K(T1), T1 = 0.4, T2 = 0.6", composition_defect(0.0, 1.0, 0.4, 0.6, p)?);
    Ok(())
}

fn wavepacket(s: &mut Suite, p: &DampedParams, inject: Option<Injection>) -> dampath::Result<()> {
    let pkt = GaussianPacket::default();
    let t = 1.0;
    let ev = evolve_analytic(&pkt, t, p)?;
    let span = 12.0 / (2.0 * ev.theta1.re).sqrt();
    let mut grid = QuadratureGrid::auto(ev.mean_x - span, ev.mean_x + span, 2001, &pkt, t, p)?;
    if inject == Some(Injection::Window) {
        grid.window_sigmas = 3.0;
    }
    let sampled = evolve_quadrature(&pkt, t, p, &grid)?;
    let fit = sampled.fit_gaussian()?;
    s.below("wavepacket", "completed square matches quadrature, relative L2", sampled.relative_l2_difference(|x| ev.psi(x)), tol::ORACLE);
    s.below("wavepacket", "propagated |psi|^2 is Gaussian, fit residual", fit.density_residual, tol::GAUSSIAN_CLOSURE);
    s.below("wavepacket", "fitted width matches theta1", (fit.theta - ev.theta1).norm() / ev.theta1.norm(), tol::ORACLE);
    s.below("wavepacket", "fitted centre matches <x>", rel(fit.center, ev.mean_x), tol::ORACLE);
    s.below("wavepacket", "quadrature mean momentum matches <v>", rel(sampled.mean_momentum(), mean_velocity(t, p, pkt.v0)), tol::ORACLE);

    let crossing = if inject == Some(Injection::Crossing) { 3f64.ln() / p.kappa } else { velocity_zero_crossing(p)? };
    s.below("wavepacket", "mean velocity vanishes at ln(1 + sqrt 2)/kappa", (crossing - SQRT_2.ln_1p() / p.kappa).abs(), 1e-10);
    let h = 1e-6;
    s.below("wavepacket", "d<x>/dT at T = 0+ equals v0", rel(mean_position(h, p, pkt.v0) / h, pkt.v0), tol::INITIAL_SLOPE);
    let vs: Vec<f64> = (0..=300).map(|i| mean_velocity(crossing * i as f64 / 300.0, p, pkt.v0)).collect();
    let rise = vs.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
    s.below("wavepacket", "<v> strictly decreasing on [0, T*], largest step", rise, 0.0);
    s.report("wavepacket", "norm drift |int |psi_T|^2 - 1| at T = 1", (ev.norm - 1.0).abs());
    let split = ev.residual_phase.theta1_split;
    s.report("wavepacket", "printed theta1 vs completed square, relative", (theta1_verbatim(t, p, pkt.theta)? - split).norm() / split.norm());
    Ok(())
}

fn comparators(s: &mut Suite, p: &DampedParams) -> dampath::Result<()> {
    let (v0, a0) = (5.0, Complex64::new(0.5, 0.0));
    let mut ck_dgst: f64 = 0.0;
    for i in 0..=200 {
        let t = 0.1 * i as f64;
        let ck = observables(MethodId::Ck, t, p, v0, a0)?.mean_x;
        let dg = observables(MethodId::Dgst, t, p, v0, a0)?.mean_x;
        ck_dgst = ck_dgst.max((ck - dg).abs());
    }
    s.below("comparators", "<x>_CK and <x>_DGST coincide", ck_dgst, f64::EPSILON);
    let mut tail: f64 = 0.0;
    let mut slope: f64 = 0.0;
    for m in MethodId::ALL {
        let a = asymptote(m, p, v0)?;
        tail = tail.max(rel(observables(m, 40.0 / p.kappa, p, v0, a0)?.mean_x, a));
        slope = slope.max(rel(observables(m, 1e-6, p, v0, a0)?.mean_x / 1e-6, v0));
    }
    s.below("comparators", "<x> reaches its asymptote by T = 40/kappa, relative", tail, tol::ASYMPTOTE_TOL);
    s.below("comparators", "all <x> curves start with slope v0", slope, tol::COMPARATOR_SLOPE);
    let mut end_v: f64 = 0.0;
    for m in [MethodId::Lg, MethodId::Kochan] {
        let end = reliability_interval(m, p)?.end;
        end_v = end_v.max(observables(m, end, p, v0, a0)?.mean_v.abs());
    }
    s.below("comparators", "LG and KOCH velocities vanish at their interval ends", end_v, 1e-12);
    Ok(())
}

/// Runs the suite; the caller maps failures to the exit status.
pub fn run_check(cfg: &RunConfig) -> CliResult<ResultTable> {
    let started = Instant::now();
    let p = standard_params();
    let mut suite = Suite { rows: Vec::new() };
    classical(&mut suite, &p)?;
    slicing(&mut suite, &p, cfg.inject)?;
    kernel(&mut suite, &p, cfg.inject)?;
    wavepacket(&mut suite, &p, cfg.inject)?;
    comparators(&mut suite, &p)?;
    let elapsed = started.elapsed().as_secs_f64();

    let mut table = ResultTable::new(&["module", "invariant", "status", "measured", "relation", "tolerance"]);
    base_metadata(&mut table, cfg, json!({ "runtime_budget_s": tol::BUDGET_CHECK_S }));
    table.meta("standard_parameters", json!({ "kappa": p.kappa, "hbar": p.hbar, "T": 1.0, "theta0": 0.5, "v0": 5.0 }));
    let count = |st: Status| suite.rows.iter().filter(|r| r.status == st).count();
    table.meta("passed", count(Status::Pass));
    table.meta("failed", count(Status::Fail));
    table.meta("reported", count(Status::Report));
    table.meta("runtime_within_budget", elapsed < tol::BUDGET_CHECK_S);
    for r in &suite.rows {
        table.push(vec![
            r.module.into(),
            r.invariant.into(),
            r.status.label().into(),
            r.measured.into(),
            r.relation.into(),
            r.tolerance.map_or(Cell::Missing, Cell::Num),
        ]);
    }
    Ok(table)
}

/// Number of failed rows in a `check` table.
pub fn failures(table: &ResultTable) -> usize {
    let j = table.column("status").expect("check table");
    table.rows.iter().filter(|r| r[j] == Cell::Text("fail".into())).count()
}
