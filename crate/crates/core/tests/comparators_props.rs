// Copyright 2026 The dampath Authors
// SPDX-License-Identifier: Apache-2.0

use dampath::comparators::{observables, reliability_interval, MethodId};
use dampath::{Complex64, DampedParams};
use proptest::prelude::*;

fn at(m: MethodId, t: f64, kappa: f64) -> dampath::ObservableSet {
    let p = DampedParams::with_kappa(kappa).unwrap();
    observables(m, t, &p, 5.0, Complex64::from(0.5)).unwrap()
}

proptest! {
    #[test]
    fn ck_and_dgst_share_position(t in 0.0..50.0f64, kappa in 0.01..3.0f64) {
        prop_assert_eq!(at(MethodId::Ck, t, kappa).mean_x, at(MethodId::Dgst, t, kappa).mean_x);
        prop_assert_eq!(at(MethodId::Ck, t, kappa).mean_v, 5.0);
    }

    #[test]
    fn dgst_velocity_grows(t in 0.0..20.0f64, dt in 1e-3..1.0f64, kappa in 0.01..3.0f64) {
        prop_assert!(at(MethodId::Dgst, t + dt, kappa).mean_v > at(MethodId::Dgst, t, kappa).mean_v);
    }

    #[test]
    fn decaying_velocities_cross_inside_interval(kappa in 0.05..3.0f64) {
        let p = DampedParams::with_kappa(kappa).unwrap();
        for m in [MethodId::Lg, MethodId::Kochan] {
            let end = reliability_interval(m, &p).unwrap().end;
            let vs: Vec<f64> = (0..=100).map(|i| at(m, 1.5 * end * i as f64 / 100.0, kappa).mean_v).collect();
            prop_assert!(vs.windows(2).all(|w| w[1] < w[0]));
            prop_assert!(at(m, 0.999 * end, kappa).mean_v > 0.0);
            prop_assert!(at(m, 1.001 * end, kappa).mean_v < 0.0);
        }
    }
}

#[test]
fn positions_agree_to_first_order() {
    let h = 1e-6;
    for m in MethodId::ALL {
        let slope = at(m, h, 0.6).mean_x / h;
        assert!((slope - 5.0).abs() < 1e-5, "{m}: {slope}");
    }
}
