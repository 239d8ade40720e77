// Copyright 2026 The dampath Authors
// SPDX-License-Identifier: Apache-2.0

//! Hyperbolic ratios that stay finite when their arguments run past the
//! `f64` overflow point of `sinh` (about 710).

/// `sinh(x) / sinh(y)` for `0 <= x` and `y > 0`, evaluated as
/// `e^(x-y) * expm1(-2x) / expm1(-2y)`.
#[inline]
pub fn sinh_ratio(x: f64, y: f64) -> f64 {
    debug_assert!(x >= 0.0 && y > 0.0);
    (x - y).exp() * (-2.0 * x).exp_m1() / (-2.0 * y).exp_m1()
}

/// `sinh(m u) / sinh(n u)` with the `u -> 0` limit `m / n`.
#[inline]
pub fn sinh_ratio_multiple(m: f64, n: f64, u: f64) -> f64 {
    if u == 0.0 {
        m / n
    } else {
        sinh_ratio(m * u, n * u)
    }
}

#[inline]
pub fn coth(x: f64) -> f64 {
    1.0 / x.tanh()
}

/// `e^(-x) - 1`, accurate for small `x`.
#[inline]
pub fn damping_gap(x: f64) -> f64 {
    (-x).exp_m1()
}

/// `sinh(x) / x` with its removable singularity filled.
#[inline]
pub fn sinhc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 + x2 / 6.0 * (1.0 + x2 / 20.0)
    } else {
        x.sinh() / x
    }
}

/// `tanh(x) / x` with its removable singularity filled.
#[inline]
pub fn tanhc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 3.0 * (1.0 - 0.4 * x2)
    } else {
        x.tanh() / x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ratio_matches_direct_in_safe_range() {
        for &(x, y) in &[(0.1, 0.2), (1.0, 3.0), (5.0, 5.0), (0.0, 1.0), (1e-9, 3e-9)] {
            let direct = f64::sinh(x) / f64::sinh(y);
            assert_relative_eq!(sinh_ratio(x, y), direct, max_relative = 1e-14);
        }
    }

    #[test]
    fn ratio_survives_overflow_region() {
        // sinh(1000) overflows; the ratio is e^-1 * (1 - e^-2000) / (1 - e^-2002).
        let r = sinh_ratio(1000.0, 1001.0);
        assert!(r.is_finite());
        assert_relative_eq!(r, (-1.0f64).exp(), max_relative = 1e-15);
    }

    #[test]
    fn multiple_has_free_limit() {
        assert_eq!(sinh_ratio_multiple(3.0, 7.0, 0.0), 3.0 / 7.0);
        assert_relative_eq!(sinh_ratio_multiple(3.0, 7.0, 1e-12), 3.0 / 7.0, max_relative = 1e-12);
    }

    #[test]
    fn small_argument_helpers() {
        for &x in &[1e-12, 1e-6, 5e-5, 1e-3, 0.5] {
            assert_relative_eq!(sinhc(x), f64::sinh(x) / x, max_relative = 1e-15);
            assert_relative_eq!(tanhc(x), f64::tanh(x) / x, max_relative = 1e-15);
        }
        assert_relative_eq!(damping_gap(1e-10), -1e-10 * (1.0 - 5e-11), max_relative = 1e-15);
    }
}
