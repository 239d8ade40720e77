// Copyright 2026 The dampath Authors
// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite: one PASS/FAIL line per criterion, thresholds from
//! `dampath_cli::tolerances`. Exits non-zero if any criterion fails.

use std::f64::consts::SQRT_2;
use std::process::ExitCode;
use std::time::Instant;

use dampath::comparators::{observables, MethodId};
use dampath::convergence::fit_order;
use dampath::kernel::{closed_kernel, continuum_kernel, free_kernel};
use dampath::quadrature::{evolve_quadrature, QuadratureGrid, SampledWavefunction};
use dampath::slicing::{
    closed_form_deviation, discrete_kernel, discrete_kernel_with, short_time_coeffs, Recursion,
    Seed,
};
use dampath::wavepacket::{
    evolve_analytic, mean_position, mean_velocity, theta1_verbatim, velocity_zero_crossing,
    EvolvedPacket, GaussianPacket,
};
use dampath::{BoundarySpec, Complex64, DampedParams};
use dampath_cli::cli::{emit, run};
use dampath_cli::config::{Command, RunConfig, Settings};
use dampath_cli::tolerances as tol;

struct Verdict {
    id: &'static str,
    title: &'static str,
    pass: bool,
    detail: String,
}

fn kappa(k: f64) -> DampedParams {
    DampedParams::with_kappa(k).unwrap()
}

fn rel(x: f64, r: f64) -> f64 {
    ((x - r) / r).abs()
}

fn c1_closed_forms() -> Verdict {
    let start = Instant::now();
    let (ab, _) = closed_form_deviation(10_000, &kappa(0.6), 1e-4, 1.0, Seed::Hyperbolic);
    let secs = start.elapsed().as_secs_f64();
    Verdict {
        id: "1",
        title: "closed forms of (a_k, b_k) match the recursion, k <= 1e4",
        pass: ab < tol::CLOSED_FORM_AB && secs < tol::BUDGET_CLOSED_FORMS_S,
        detail: format!("max rel dev {ab:.2e} (< {:.0e}); {secs:.3} s (< {} s)", tol::CLOSED_FORM_AB, tol::BUDGET_CLOSED_FORMS_S),
    }
}

fn c2_consistency() -> Verdict {
    let base = short_time_coeffs(&kappa(0.6), 1e-4, 1.0, Seed::Hyperbolic);
    let worst = Recursion::new(base).take(10_001).map(|c| c.invariant_defect(&base).abs()).fold(0.0, f64::max);
    Verdict {
        id: "2",
        title: "consistency identity a_k^2 - b_k^2 = a_0^2 - b_0^2, k <= 1e4",
        pass: worst < tol::CONSISTENCY,
        detail: format!("max defect / a_0^2 = {worst:.2e} (< {:.0e})", tol::CONSISTENCY),
    }
}

fn c3_source_limits() -> Verdict {
    let p = kappa(0.6);
    let n = 100_000;
    let target = p.kappa * (p.kappa.exp() - 1.0) / (p.kappa.exp() + 1.0);
    let last = Recursion::new(short_time_coeffs(&p, 1.0 / n as f64, 1.0, Seed::Hyperbolic)).nth(n).unwrap();
    let source_dev = rel(last.r, target).max(rel(last.s, target));

    // sum Omega is meant to vanish as O(eps^2)
    let bc = BoundarySpec::new(0.0, 1.0, 1.0).unwrap();
    let slices = [500usize, 1000, 2000, 4000, 8000];
    let sums: Vec<f64> = slices
        .iter()
        .map(|&n| discrete_kernel_with(&bc, &p, n, Seed::Hyperbolic).unwrap().omega_sum.abs())
        .collect();
    let steps: Vec<f64> = slices.iter().map(|&n| 1.0 / n as f64).collect();
    let order = fit_order(&steps, &sums).unwrap_or(f64::NAN);
    let order_ok = (order - tol::OMEGA_ORDER).abs() <= tol::OMEGA_ORDER_BAND;
    Verdict {
        id: "3",
        title: "source terms R_N, S_N reach their limit; sum Omega vanishes as O(eps^2)",
        pass: source_dev < tol::SOURCE_LIMIT && order_ok,
        detail: format!(
            "R_N/S_N rel dev {source_dev:.2e} (< {:.0e}); sum Omega fitted order {order:.3} (want {} +- {}), sum Omega(N=8000) = {:.6e}",
            tol::SOURCE_LIMIT, tol::OMEGA_ORDER, tol::OMEGA_ORDER_BAND, sums[sums.len() - 1]
        ),
    }
}

fn c4_kernel_convergence() -> Verdict {
    let p = kappa(0.6);
    let bc = BoundarySpec::new(0.0, 1.0, 1.0).unwrap();
    let start = Instant::now();
    let closed = closed_kernel(&bc, &p).unwrap();
    let slices = [1250usize, 2500, 5000, 10_000];
    let kn: Vec<Complex64> = slices.iter().map(|&n| discrete_kernel(&bc, &p, n).unwrap()).collect();
    let secs = start.elapsed().as_secs_f64();
    let errs: Vec<f64> = kn.iter().map(|k| (k - closed).norm() / closed.norm()).collect();
    let steps: Vec<f64> = slices.iter().map(|&n| 1.0 / n as f64).collect();
    let order = fit_order(&steps, &errs).unwrap_or(f64::NAN);
    let err = errs[errs.len() - 1];
    let limit = continuum_kernel(&bc, &p).unwrap();
    let to_limit = (kn[kn.len() - 1] - limit).norm() / limit.norm();
    Verdict {
        id: "4",
        title: "sliced kernel converges to the closed kernel",
        pass: err < tol::KERNEL_CONVERGENCE && order >= tol::KERNEL_MIN_ORDER && secs < tol::BUDGET_KERNEL_S,
        detail: format!(
            "|K_1e4 - K|/|K| = {err:.4e} (< {:.0e}); fitted order {order:.3} (>= {}); {secs:.3} s (< {} s); distance to continuum kernel {to_limit:.2e}",
            tol::KERNEL_CONVERGENCE, tol::KERNEL_MIN_ORDER, tol::BUDGET_KERNEL_S
        ),
    }
}

fn c5_free_reduction() -> Verdict {
    let p = kappa(tol::FREE_REDUCTION_KAPPA);
    let mut worst: f64 = 0.0;
    for &t in &[0.5, 1.0, 2.0] {
        for i in 0..=40 {
            for j in 0..=40 {
                let bc = BoundarySpec::new(-2.0 + 0.1 * i as f64, -2.0 + 0.1 * j as f64, t).unwrap();
                let f = free_kernel(&bc, 1.0).unwrap();
                worst = worst.max((closed_kernel(&bc, &p).unwrap() - f).norm() / f.norm());
            }
        }
    }
    Verdict {
        id: "5",
        title: "kappa = 1e-8 reduces to the free propagator on [-2,2]^2 x {0.5,1,2}",
        pass: worst < tol::FREE_REDUCTION,
        detail: format!("sup rel dev {worst:.2e} (< {:.0e})", tol::FREE_REDUCTION),
    }
}

struct OracleRun {
    t: f64,
    ev: EvolvedPacket,
    sampled: SampledWavefunction,
}

fn oracle_run(t: f64) -> OracleRun {
    let p = kappa(0.6);
    let pkt = GaussianPacket::real(0.5, 5.0).unwrap();
    let ev = evolve_analytic(&pkt, t, &p).unwrap();
    let span = 12.0 / (2.0 * ev.theta1.re).sqrt();
    let grid = QuadratureGrid::auto(ev.mean_x - span, ev.mean_x + span, 2001, &pkt, t, &p).unwrap();
    OracleRun { t, ev, sampled: evolve_quadrature(&pkt, t, &p, &grid).unwrap() }
}

fn c6_figure_regime(at_one: &OracleRun) -> Verdict {
    let p = kappa(0.6);
    let x1 = mean_position(1.0, &p, 5.0);
    let v1 = mean_velocity(1.0, &p, 5.0);
    let fit = at_one.sampled.fit_gaussian().unwrap();
    let qx = rel(fit.center, x1).max(rel(at_one.sampled.mean_x(), x1));
    let qv = rel(at_one.sampled.mean_momentum(), v1);
    let mut asym: f64 = 0.0;
    for m in MethodId::ALL {
        let target = if m == MethodId::Kochan { tol::FIGURE_ASYMPTOTE_KOCHAN } else { tol::FIGURE_ASYMPTOTE };
        let x = observables(m, 40.0, &p, 5.0, Complex64::new(0.5, 0.0)).unwrap().mean_x;
        asym = asym.max((x - target).abs());
    }
    let pass = (x1 - tol::FIGURE_MEAN_X).abs() < tol::FIGURE_MEAN_X_TOL
        && (v1 - tol::FIGURE_MEAN_V).abs() < tol::FIGURE_MEAN_V_TOL
        && qx < tol::ORACLE
        && qv < tol::ORACLE
        && asym < tol::ASYMPTOTE_TOL;
    Verdict {
        id: "6",
        title: "figure regime: <x>(1), <v>(1), quadrature confirmation, asymptotes at T = 40",
        pass,
        detail: format!(
            "<x>(1) = {x1:.9} (printed {}), <v>(1) = {v1:.9} (printed {}); quadrature rel dev x {qx:.1e}, v {qv:.1e}; max asymptote dev {asym:.2e} (< {:.0e})",
            tol::FIGURE_MEAN_X, tol::FIGURE_MEAN_V, tol::ASYMPTOTE_TOL
        ),
    }
}

fn c7_zero_crossing() -> Verdict {
    let t = velocity_zero_crossing(&kappa(0.6)).unwrap();
    let exact = SQRT_2.ln_1p() / 0.6;
    let printed = (t - tol::FIGURE_ZERO_CROSSING).abs();
    Verdict {
        id: "7",
        title: "velocity zero crossing at ln(1 + sqrt 2)/kappa",
        pass: (t - exact).abs() < tol::ZERO_CROSSING_TOL && printed < tol::FIGURE_ZERO_CROSSING_TOL,
        detail: format!("T* = {t:.12} vs {exact:.12} (dev {:.1e} < {:.0e}); printed 1.4689560", (t - exact).abs(), tol::ZERO_CROSSING_TOL),
    }
}

fn c8_gaussian_closure(runs: &[OracleRun]) -> Verdict {
    let residuals: Vec<(f64, f64)> = runs.iter().map(|r| (r.t, r.sampled.fit_gaussian().unwrap().density_residual)).collect();
    let worst = residuals.iter().map(|r| r.1).fold(0.0, f64::max);
    Verdict {
        id: "8",
        title: "propagated packet stays Gaussian, T in {0.5, 1, 1.469}",
        pass: worst < tol::GAUSSIAN_CLOSURE,
        detail: format!(
            "fit residuals {} (< {:.0e})",
            residuals.iter().map(|(t, r)| format!("T={t}: {r:.1e}")).collect::<Vec<_>>().join(", "),
            tol::GAUSSIAN_CLOSURE
        ),
    }
}

fn c9_oracle(runs: &[OracleRun]) -> Verdict {
    let p = kappa(0.6);
    let mut worst: f64 = 0.0;
    println!("       width table: T | theta1 (completed square, split) | theta1 (printed form) | rel diff");
    for r in runs {
        worst = worst.max(r.sampled.relative_l2_difference(|x| r.ev.psi(x)));
        let split = r.ev.residual_phase.theta1_split;
        let printed = theta1_verbatim(r.t, &p, Complex64::new(0.5, 0.0)).unwrap();
        println!(
            "       {:5} | {:.6} {:+.6}i | {:.6} {:+.6}i | {:.3e}",
            r.t, split.re, split.im, printed.re, printed.im, (printed - split).norm() / split.norm()
        );
    }
    Verdict {
        id: "9",
        title: "completed square agrees with quadrature, T in {0.5, 1, 1.469}",
        pass: worst < tol::ORACLE,
        detail: format!("max relative L2 difference {worst:.1e} (< {:.0e}); width table above is informational", tol::ORACLE),
    }
}

fn c10_determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let render = |name: &str| -> Vec<u8> {
        let mut s = Settings::default();
        s.set("out", dir.path().join(name).display().to_string(), "test").unwrap();
        let cfg = RunConfig::resolve(Command::Compare, &s, None).unwrap();
        emit(&cfg, &run(&cfg).unwrap()).unwrap();
        std::fs::read(dir.path().join(name)).unwrap()
    };
    let (a, b) = (render("first.csv"), render("second.csv"));
    Verdict {
        id: "10",
        title: "compare with the figure config is byte-identical across runs",
        pass: a == b && !a.is_empty(),
        detail: format!("{} bytes, identical: {}", a.len(), a == b),
    }
}

fn main() -> ExitCode {
    let runs: Vec<OracleRun> = [0.5, 1.0, 1.469].into_iter().map(oracle_run).collect();
    let verdicts = vec![
        c1_closed_forms(),
        c2_consistency(),
        c3_source_limits(),
        c4_kernel_convergence(),
        c5_free_reduction(),
        c6_figure_regime(&runs[1]),
        c7_zero_crossing(),
        c8_gaussian_closure(&runs),
        c9_oracle(&runs),
        c10_determinism(),
    ];
    let passed = verdicts.iter().filter(|v| v.pass).count();
    for v in &verdicts {
        println!("[{}] {:>2} {}: {}", if v.pass { "PASS" } else { "FAIL" }, v.id, v.title, v.detail);
    }
    println!("acceptance: {passed}/{} criteria passed", verdicts.len());
    if passed == verdicts.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
