// Copyright 2026 The dampath Authors
// SPDX-License-Identifier: Apache-2.0

//! Experiment runners. Grid points are evaluated on the rayon pool and
//! gathered in input order, so output never depends on scheduling.

use dampath::comparators::{asymptote, observables, reliability_interval, MethodId};
use dampath::convergence::{fit_order, is_strictly_decreasing};
use dampath::kernel::{closed_kernel, continuum_kernel};
use dampath::quadrature::{evolve_quadrature, QuadratureGrid};
use dampath::slicing::{closed_form_deviation, discrete_kernel_with, omega_limit, Seed};
use dampath::wavepacket::{
    evolve_analytic, mean_position, mean_velocity, theta1_verbatim, velocity_zero_crossing,
    GaussianPacket,
};
use dampath::{BoundarySpec, CompanionParams, Complex64, DampedParams};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::table::{real_json, Cell, ResultTable, FORMAT_VERSION};
use crate::tolerances as tol;

pub const SEED_FREE: &str =
    "seed-free: no randomness; identical configuration yields byte-identical output";

/// Metadata common to every table: schema version, software, config echo.
pub fn base_metadata(t: &mut ResultTable, cfg: &RunConfig, tolerances: Value) {
    t.meta("format_version", FORMAT_VERSION);
    t.meta("software", format!("dampath {}", env!("CARGO_PKG_VERSION")));
    t.meta("determinism", SEED_FREE);
    t.meta("config", Value::Object(cfg.echo()));
    t.meta("tolerances", tolerances);
}

fn rel(x: f64, reference: f64) -> f64 {
    if reference == 0.0 {
        x.abs()
    } else {
        ((x - reference) / reference).abs()
    }
}

fn endpoint_grid(cfg: &RunConfig) -> Vec<(f64, f64, f64)> {
    let mut pts = Vec::new();
    for &t in &cfg.times.values() {
        for &xa in &cfg.xa.values() {
            for &xb in &cfg.xb.values() {
                pts.push((t, xa, xb));
            }
        }
    }
    pts
}

/// `Re K`, `Im K`, `|K|` of the closed kernel over the `(T, xa, xb)` grid.
pub fn run_kernel(cfg: &RunConfig) -> CliResult<ResultTable> {
    let p = cfg.params;
    let pts = endpoint_grid(cfg);
    let values: Vec<dampath::Result<Complex64>> = pts
        .par_iter()
        .map(|&(t, xa, xb)| closed_kernel(&BoundarySpec::new(xa, xb, t)?, &p))
        .collect();

    let mut table = ResultTable::new(&["T", "xa", "xb", "re_K", "im_K", "abs_K", "arg_K"]);
    base_metadata(&mut table, cfg, json!({}));
    table.meta("branch", "principal square root; prefactor carries exp(-i pi/4)");
    table.meta("free_dispatch", p.is_free());
    for (&(t, xa, xb), k) in pts.iter().zip(values) {
        let k = k?;
        table.push(vec![t.into(), xa.into(), xb.into(), k.re.into(), k.im.into(), k.norm().into(), k.arg().into()]);
    }
    Ok(table)
}

/// Below this every error is rounding; order fits are meaningless.
const ROUNDOFF_FLOOR: f64 = 1e-12;

/// Sliced kernel against the closed and continuum kernels for each `N`.
pub fn run_converge(cfg: &RunConfig) -> CliResult<ResultTable> {
    let p = cfg.params;
    let combos = endpoint_grid(cfg);
    let jobs: Vec<(usize, usize)> = (0..combos.len())
        .flat_map(|c| (0..cfg.slices.len()).map(move |j| (c, j)))
        .collect();
    let rows: Vec<dampath::Result<Vec<f64>>> = jobs
        .par_iter()
        .map(|&(c, j)| {
            let (t, xa, xb) = combos[c];
            let n = cfg.slices[j];
            let bc = BoundarySpec::new(xa, xb, t)?;
            let closed = closed_kernel(&bc, &p)?;
            let limit = continuum_kernel(&bc, &p)?;
            let dk = discrete_kernel_with(&bc, &p, n, Seed::Hyperbolic)?;
            let eps = t / n as f64;
            let (ab, rs) = closed_form_deviation(n - 1, &p, eps, dk.lambda, Seed::Hyperbolic);
            let k = dk.amplitude;
            Ok(vec![
                t,
                xa,
                xb,
                n as f64,
                eps,
                k.re,
                k.im,
                (k - closed).norm() / closed.norm(),
                (k - limit).norm() / limit.norm(),
                ab,
                rs,
                dk.omega_sum,
                omega_limit(t, &p, dk.lambda),
            ])
        })
        .collect();

    let cols = [
        "T", "xa", "xb", "N", "epsilon", "re_KN", "im_KN", "rel_error_closed", "rel_error_continuum",
        "coeff_dev_ab", "coeff_dev_rs", "omega_sum", "omega_limit",
    ];
    let mut table = ResultTable::new(&cols);
    base_metadata(
        &mut table,
        cfg,
        json!({ "kernel_convergence": tol::KERNEL_CONVERGENCE, "min_order": tol::KERNEL_MIN_ORDER }),
    );
    table.meta("seed", "hyperbolic");
    table.meta(
        "continuum_kernel",
        "closed kernel times exp(-(i/hbar) lambda^2 (kappa^2 T/2 - kappa tanh(kappa T/2))), the N -> infinity limit of the slicing",
    );

    let mut summaries = Vec::new();
    let mut min_closed: Option<f64> = None;
    let mut min_continuum: Option<f64> = None;
    let m = cfg.slices.len();
    let rows: Vec<Vec<f64>> = rows.into_iter().collect::<Result<_, _>>()?;
    for (c, chunk) in rows.chunks(m).enumerate() {
        let (t, xa, xb) = combos[c];
        let steps: Vec<f64> = chunk.iter().map(|r| r[4]).collect();
        let closed: Vec<f64> = chunk.iter().map(|r| r[7]).collect();
        let cont: Vec<f64> = chunk.iter().map(|r| r[8]).collect();
        let order = |errs: &[f64]| -> Option<f64> {
            if errs.iter().cloned().fold(0.0, f64::max) < ROUNDOFF_FLOOR {
                None
            } else {
                fit_order(&steps, errs)
            }
        };
        let (oc, ok) = (order(&closed), order(&cont));
        if let Some(o) = oc {
            min_closed = Some(min_closed.map_or(o, |m: f64| m.min(o)));
        }
        if let Some(o) = ok {
            min_continuum = Some(min_continuum.map_or(o, |m: f64| m.min(o)));
        }
        let lambda = if p.is_free() { 0.0 } else { CompanionParams::from_boundary(&BoundarySpec::new(xa, xb, t)?, &p)?.lambda };
        summaries.push(json!({
            "T": t, "xa": xa, "xb": xb,
            "fitted_order_closed": oc.map(real_json),
            "fitted_order_continuum": ok.map(real_json),
            "closed_error_strictly_decreasing": is_strictly_decreasing(&closed),
            "continuum_error_strictly_decreasing": is_strictly_decreasing(&cont),
            "phase_defect": real_json(omega_limit(t, &p, lambda) / p.hbar),
        }));
        for r in chunk {
            let mut row: Vec<Cell> = r.iter().map(|&x| Cell::Num(x)).collect();
            row[3] = Cell::Int(r[3] as i64);
            table.push(row);
        }
    }
    table.meta("min_fitted_order_closed", min_closed.map_or(Value::Null, real_json));
    table.meta("min_fitted_order_continuum", min_continuum.map_or(Value::Null, real_json));
    table.meta("per_endpoint", Value::Array(summaries));
    Ok(table)
}

/// Oracle sample span: 12 amplitude standard deviations either side.
fn oracle_grid(cfg: &RunConfig, pkt: &GaussianPacket, t: f64, mean_x: f64, theta1: Complex64) -> CliResult<QuadratureGrid> {
    let span = 12.0 / (2.0 * theta1.re).sqrt();
    let (lo, hi) = (mean_x - span, mean_x + span);
    Ok(match cfg.panels {
        Some(n) => QuadratureGrid::new(lo, hi, cfg.samples, n)?,
        None => QuadratureGrid::auto(lo, hi, cfg.samples, pkt, t, &cfg.params)?,
    })
}

const EVOLVE_COLUMNS: [&str; 15] = [
    "T", "mean_x", "mean_v", "dmean_x_dT", "re_theta1", "im_theta1", "re_theta1_split",
    "im_theta1_split", "theta2", "momentum", "norm", "norm_drift", "re_theta1_verbatim",
    "im_theta1_verbatim", "theta1_verbatim_rel_diff",
];
const ORACLE_COLUMNS: [&str; 6] = [
    "oracle_l2_diff", "oracle_fit_residual", "oracle_mean_x_rel_delta", "oracle_mean_v_rel_delta",
    "oracle_theta1_rel_delta", "oracle_norm_delta",
];

fn evolve_row(cfg: &RunConfig, pkt: &GaussianPacket, t: f64) -> CliResult<Vec<Cell>> {
    let p = &cfg.params;
    let v0 = pkt.v0;
    let mean_x = mean_position(t, p, v0);
    let mean_v = mean_velocity(t, p, v0);
    let slope = v0 / (p.kappa * t).cosh().powi(2);
    if t == 0.0 {
        let mut row: Vec<Cell> = vec![
            t.into(), mean_x.into(), mean_v.into(), slope.into(),
            pkt.theta.re.into(), pkt.theta.im.into(), Cell::Missing, Cell::Missing, Cell::Missing,
            v0.into(), 1.0.into(), 0.0.into(), Cell::Missing, Cell::Missing, Cell::Missing,
        ];
        if cfg.oracle {
            row.extend(std::iter::repeat(Cell::Missing).take(ORACLE_COLUMNS.len()));
        }
        return Ok(row);
    }
    let ev = evolve_analytic(pkt, t, p)?;
    let split = ev.residual_phase.theta1_split;
    let printed = theta1_verbatim(t, p, pkt.theta)?;
    let mut row: Vec<Cell> = vec![
        t.into(), mean_x.into(), mean_v.into(), slope.into(),
        ev.theta1.re.into(), ev.theta1.im.into(), split.re.into(), split.im.into(),
        ev.residual_phase.theta2.into(), ev.momentum.into(), ev.norm.into(), (ev.norm - 1.0).abs().into(),
        printed.re.into(), printed.im.into(), ((printed - split).norm() / split.norm()).into(),
    ];
    if cfg.oracle {
        let grid = oracle_grid(cfg, pkt, t, ev.mean_x, ev.theta1)?;
        let sampled = evolve_quadrature(pkt, t, p, &grid)?;
        let fit = sampled.fit_gaussian()?;
        row.extend([
            sampled.relative_l2_difference(|x| ev.psi(x)).into(),
            fit.density_residual.into(),
            rel(fit.center, mean_x).into(),
            rel(sampled.mean_momentum(), mean_v).into(),
            ((fit.theta - ev.theta1).norm() / ev.theta1.norm()).into(),
            (sampled.norm() - ev.norm).into(),
        ]);
    }
    Ok(row)
}

/// Time series of the packet observables, with the zero crossing of the
/// mean velocity inserted into the `T` column.
pub fn run_evolve(cfg: &RunConfig) -> CliResult<ResultTable> {
    let p = cfg.params;
    let pkt = GaussianPacket::new(cfg.packet.theta0, cfg.packet.v0)?;
    let mut times = cfg.times.values();
    let crossing = if p.kappa > 0.0 { Some(velocity_zero_crossing(&p)?) } else { None };
    if let Some(ts) = crossing {
        if cfg.times.count > 1 && ts > cfg.times.start && ts < cfg.times.end && !times.contains(&ts) {
            times.push(ts);
            times.sort_by(f64::total_cmp);
        }
    }
    let rows: Vec<CliResult<Vec<Cell>>> = times.par_iter().map(|&t| evolve_row(cfg, &pkt, t)).collect();

    let mut cols: Vec<&str> = EVOLVE_COLUMNS.to_vec();
    if cfg.oracle {
        cols.extend(ORACLE_COLUMNS);
    }
    let mut table = ResultTable::new(&cols);
    base_metadata(
        &mut table,
        cfg,
        json!({ "oracle": tol::ORACLE, "gaussian_closure": tol::GAUSSIAN_CLOSURE }),
    );
    for r in rows {
        table.push(r?);
    }
    table.meta("mean_v", "printed form [2 kappa tanh(kappa T/2)/(exp(-kappa T) - 1)] <x> + v0; equals the packet's mean momentum");
    table.meta("dmean_x_dT", "v0 sech^2(kappa T), the time derivative of <x>, shown beside mean_v");
    table.meta("theta1", "full complex width of psi_T about <x>");
    table.meta("theta1_split", "width with the kernel's (i/hbar) theta2 x^2 phase kept apart; compare theta1_verbatim");
    table.meta("norm", "integral of |psi_T|^2 for a unit-normalised initial packet; not conserved");

    let vs = table.numbers("mean_v");
    let ts = table.numbers("T");
    let bracket = (1..vs.len()).find_map(|i| match (vs[i - 1], vs[i]) {
        (Some(a), Some(b)) if a > 0.0 && b <= 0.0 => Some((ts[i - 1].unwrap(), ts[i].unwrap())),
        _ => None,
    });
    table.meta("velocity_zero_crossing", crossing.map_or(Value::Null, real_json));
    table.meta("v_sign_change_bracket", bracket.map_or(Value::Null, |(a, b)| json!([real_json(a), real_json(b)])));
    table.meta(
        "crossing_bracketed",
        matches!((crossing, bracket), (Some(c), Some((a, b))) if a <= c && c <= b),
    );
    let max_col = |t: &ResultTable, name: &str| t.numbers(name).into_iter().flatten().fold(0.0, f64::max);
    let drift = max_col(&table, "norm_drift");
    table.meta("max_norm_drift", real_json(drift));
    let width_diff = max_col(&table, "theta1_verbatim_rel_diff");
    table.meta("max_theta1_verbatim_rel_diff", real_json(width_diff));
    if cfg.oracle {
        let l2 = max_col(&table, "oracle_l2_diff");
        table.meta("max_oracle_l2_diff", real_json(l2));
        let fit = max_col(&table, "oracle_fit_residual");
        table.meta("max_oracle_fit_residual", real_json(fit));
        table.meta(
            "quadrature",
            json!({ "rule": "composite Gauss-Legendre, 16 nodes per panel", "window_sigmas": 8.0,
                    "max_phase_per_step": real_json(dampath::quadrature::MAX_PHASE_PER_STEP) }),
        );
    }
    Ok(table)
}

/// `<x>` and `<v>` for each method over the `T` grid.
pub fn run_compare(cfg: &RunConfig) -> CliResult<ResultTable> {
    let p = cfg.params;
    let (v0, alpha0) = (cfg.packet.v0, cfg.packet.theta0);
    let times = cfg.times.values();
    let rows: Vec<dampath::Result<Vec<f64>>> = times
        .par_iter()
        .map(|&t| {
            let mut row = vec![t];
            for &m in &cfg.methods {
                let o = observables(m, t, &p, v0, alpha0)?;
                row.push(o.mean_x);
                row.push(o.mean_v);
            }
            Ok(row)
        })
        .collect();

    let mut cols = vec!["T".to_string()];
    for m in &cfg.methods {
        cols.push(format!("x_{}", m.label()));
        cols.push(format!("v_{}", m.label()));
    }
    let mut table = ResultTable::new(&cols);
    base_metadata(&mut table, cfg, json!({ "asymptote": tol::ASYMPTOTE_TOL }));
    for r in rows {
        table.push(r?.into_iter().map(Cell::Num).collect());
    }

    let mut asym = Map::new();
    let mut intervals = Map::new();
    for &m in &cfg.methods {
        asym.insert(m.label().into(), asymptote(m, &p, v0).map_or(Value::Null, real_json));
        intervals.insert(
            m.label().into(),
            reliability_interval(m, &p).map_or(Value::Null, |iv| json!([real_json(iv.start), real_json(iv.end)])),
        );
    }
    table.meta("asymptotes", Value::Object(asym));
    table.meta("reliability_intervals", Value::Object(intervals));
    if cfg.methods.contains(&MethodId::Lg) && cfg.methods.contains(&MethodId::Kochan) {
        let (lg, ko) = (table.numbers("v_LG"), table.numbers("v_KOCH"));
        let lg_end = reliability_interval(MethodId::Lg, &p).map(|iv| iv.end).unwrap_or(f64::INFINITY);
        let mut all: f64 = 0.0;
        let mut inside: f64 = 0.0;
        for ((a, b), &t) in lg.iter().zip(&ko).zip(&times) {
            let d = (a.unwrap() - b.unwrap()).abs();
            all = all.max(d);
            if t <= lg_end {
                inside = inside.max(d);
            }
        }
        table.meta("max_abs_v_diff_lg_kochan", real_json(all));
        table.meta("max_abs_v_diff_lg_kochan_within_lg_interval", real_json(inside));
    }
    Ok(table)
}

/// Standard parameters of the invariant suite and the acceptance criteria.
pub fn standard_params() -> DampedParams {
    DampedParams::default()
}
