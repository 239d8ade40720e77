// Copyright 2026 The dampath Authors
// SPDX-License-Identifier: Apache-2.0

//! Convergence bookkeeping: log-log order fits and Richardson extrapolation.

use std::ops::{Add, Div, Sub};

use num_complex::Complex64;

/// Least-squares slope of `ln err` against `ln h`. Non-positive or
/// non-finite pairs are skipped; `None` with fewer than two usable points.
pub fn fit_order(steps: &[f64], errors: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = steps
        .iter()
        .zip(errors)
        .filter(|(h, e)| **h > 0.0 && **e > 0.0 && h.is_finite() && e.is_finite())
        .map(|(h, e)| (h.ln(), e.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// One Richardson step: `fine + (fine - coarse) / (ratio^order - 1)`, where
/// `fine` used a step `ratio` times smaller than `coarse`.
pub fn richardson<T>(coarse: T, fine: T, ratio: f64, order: f64) -> T
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Div<f64, Output = T>,
{
    fine + (fine - coarse) / (ratio.powf(order) - 1.0)
}

/// Order observed from three successive refinements by a constant `ratio`,
/// without knowing the limit.
pub fn observed_order(a: Complex64, b: Complex64, c: Complex64, ratio: f64) -> f64 {
    ((a - b).norm() / (b - c).norm()).ln() / ratio.ln()
}

pub fn is_strictly_decreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] < w[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn recovers_known_orders() {
        let hs: Vec<f64> = (0..6).map(|i| 0.5f64.powi(i)).collect();
        let errs: Vec<f64> = hs.iter().map(|h| 3.0 * h * h).collect();
        assert_relative_eq!(fit_order(&hs, &errs).unwrap(), 2.0, max_relative = 1e-12);
        assert!(fit_order(&[1.0], &[1.0]).is_none());
        assert!(fit_order(&[1.0, 0.5], &[0.0, 0.0]).is_none());
    }

    #[test]
    fn richardson_cancels_leading_term() {
        let f = |h: f64| 1.0 + 2.0 * h * h + h.powi(4);
        let r = richardson(f(0.1), f(0.05), 2.0, 2.0);
        // surviving h^4 term: h_f^4 + (h_f^4 - 16 h_f^4) / 3 = -4 h_f^4
        assert_relative_eq!(r - 1.0, -4.0 * 0.05f64.powi(4), max_relative = 1e-9);
        let z = richardson(Complex64::new(1.0, 0.4), Complex64::new(1.0, 0.1), 2.0, 2.0);
        assert_relative_eq!(z.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn three_point_order() {
        let f = |h: f64| Complex64::new(2.0 + h.powf(1.5), -h.powf(1.5));
        assert_relative_eq!(observed_order(f(0.4), f(0.2), f(0.1), 2.0), 1.5, max_relative = 1e-12);
    }

    #[test]
    fn monotonicity() {
        assert!(is_strictly_decreasing(&[3.0, 2.0, 1.0]));
        assert!(!is_strictly_decreasing(&[3.0, 3.0]));
        assert!(is_strictly_decreasing(&[]));
    }
}
