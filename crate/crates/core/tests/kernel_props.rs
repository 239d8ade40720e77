// Copyright 2026 The dampath Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use dampath::kernel::{
    closed_kernel, free_kernel, quadratic_form, quadratic_form_fixed_lambda,
};
use dampath::{BoundarySpec, DampedParams};
use proptest::prelude::*;

proptest! {
    #[test]
    fn modulus_is_endpoint_independent(
        xa in -5.0..5.0f64,
        xb in -5.0..5.0f64,
        kappa in 0.01..3.0f64,
        t in 0.01..5.0f64,
        hbar in 0.1..2.0f64,
    ) {
        let p = DampedParams::new(kappa, hbar).unwrap();
        let k = closed_kernel(&BoundarySpec::new(xa, xb, t).unwrap(), &p).unwrap();
        let expect = (kappa / (2.0 * PI * hbar * (kappa * t).sinh())).sqrt();
        prop_assert!((k.norm() - expect).abs() < 1e-13 * expect);
    }

    #[test]
    fn quadratic_form_round_trip(
        xa in -2.0..2.0f64,
        xb in -2.0..2.0f64,
        kappa in 0.01..3.0f64,
        t in 0.05..5.0f64,
    ) {
        let p = DampedParams::with_kappa(kappa).unwrap();
        let q = quadratic_form(t, &p).unwrap();
        let k = closed_kernel(&BoundarySpec::new(xa, xb, t).unwrap(), &p).unwrap();
        prop_assert!((q.eval(xa, xb) - k).norm() < 1e-13 * k.norm());
        prop_assert_eq!((q.c_a, q.c_b), (0.0, 0.0));
    }

    #[test]
    fn tiny_damping_is_free(
        xa in -2.0..2.0f64,
        xb in -2.0..2.0f64,
        t in 0.5..2.0f64,
    ) {
        let bc = BoundarySpec::new(xa, xb, t).unwrap();
        let k = closed_kernel(&bc, &DampedParams::with_kappa(1e-8).unwrap()).unwrap();
        let f = free_kernel(&bc, 1.0).unwrap();
        prop_assert!((k - f).norm() < 1e-6 * f.norm());
    }

    #[test]
    fn fixed_lambda_linear_terms_track_tanh(
        kappa in 0.01..3.0f64,
        t in 0.01..5.0f64,
        lambda in 0.1..3.0f64,
    ) {
        let p = DampedParams::with_kappa(kappa).unwrap();
        let q = quadratic_form_fixed_lambda(t, &p, lambda).unwrap();
        let expect = -kappa * lambda * (0.5 * kappa * t).tanh();
        prop_assert!((q.c_a - expect).abs() < 1e-14 * expect.abs());
        prop_assert!(q.c_a != 0.0);
    }
}
