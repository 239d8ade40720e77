// Copyright 2026 The dampath Authors
// SPDX-License-Identifier: Apache-2.0

use dampath::classical::{
    solve_damped, BoundarySpec, CompanionParams, DampedParams, InitialCondition,
};
use proptest::prelude::*;

proptest! {
    #[test]
    fn damped_solution_satisfies_companion_equation(
        x0 in -10.0..10.0f64,
        v0 in -10.0..10.0f64,
        kappa in 0.01..3.0f64,
        t in 0.0..20.0f64,
    ) {
        let p = DampedParams::with_kappa(kappa).unwrap();
        let ic = InitialCondition::new(x0, v0);
        let c = CompanionParams::from_initial(ic, &p).unwrap();
        let pp = solve_damped(ic, &p, t);
        let acc = c.acceleration(&p, t);
        let scale = kappa * kappa * (c.lambda.abs() + c.eta.abs() + x0.abs());
        prop_assert!((acc - kappa * kappa * (pp.x - c.lambda)).abs() <= 1e-12 * scale.max(1e-300));
        // velocity also lies on the phase curve x' = -kappa (x - lambda)
        prop_assert!((pp.v + kappa * (pp.x - c.lambda)).abs() <= 1e-12 * kappa * scale / (kappa * kappa));
    }

    #[test]
    fn companion_energy_is_conserved(
        x0 in -10.0..10.0f64,
        v0 in -10.0..10.0f64,
        kappa in 0.01..3.0f64,
        t in 0.0..10.0f64,
    ) {
        let p = DampedParams::with_kappa(kappa).unwrap();
        let ic = InitialCondition::new(x0, v0);
        let c = CompanionParams::from_initial(ic, &p).unwrap();
        let e0 = c.energy(solve_damped(ic, &p, 0.0), &p);
        let e1 = c.energy(solve_damped(ic, &p, t), &p);
        let scale = 0.5 * v0 * v0 + 0.5 * kappa * kappa * (c.lambda.abs() + x0.abs()).powi(2);
        prop_assert!((e1 - e0).abs() <= 1e-10 * scale.max(1e-300));
    }

    #[test]
    fn boundary_companion_interpolates_endpoints(
        xa in -5.0..5.0f64,
        xb in -5.0..5.0f64,
        kappa in 0.01..3.0f64,
        duration in 0.05..10.0f64,
    ) {
        let p = DampedParams::with_kappa(kappa).unwrap();
        let bc = BoundarySpec::new(xa, xb, duration).unwrap();
        let c = CompanionParams::from_boundary(&bc, &p).unwrap();
        let scale = c.lambda.abs() + c.eta.abs();
        prop_assert!((c.position(&p, 0.0) - xa).abs() <= 1e-12 * scale.max(1.0));
        prop_assert!((c.position(&p, duration) - xb).abs() <= 1e-12 * scale.max(1.0));
        // both constructors describe the same trajectory
        let via_ic = CompanionParams::from_initial(
            InitialCondition::new(xa, c.velocity(&p, 0.0)), &p).unwrap();
        prop_assert!((via_ic.lambda - c.lambda).abs() <= 1e-9 * scale.max(1.0));
        prop_assert!((via_ic.eta - c.eta).abs() <= 1e-9 * scale.max(1.0));
    }
}
