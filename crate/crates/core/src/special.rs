//! The Mills-ratio-type function `Y(x) = e^{x²/2} ∫_x^∞ e^{-t²/2} dt`.

use crate::error::{invalid, Result};

/// `√(π/2) = Y(0)`.
pub const SQRT_PI_OVER_2: f64 = 1.253_314_137_315_500_3;

const CF_SWITCH: f64 = 5.0;
const CF_TERMS: u32 = 80;

/// Scaled complementary error function `e^{z²} erfc(z)` for `z ≥ 0`.
pub fn erfcx(z: f64) -> f64 {
    debug_assert!(z >= 0.0);
    if z < CF_SWITCH {
        (z * z).exp() * libm::erfc(z)
    } else {
        // Laplace continued fraction: √π e^{z²} erfc z = 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + …))))
        let mut t = z;
        for k in (1..=CF_TERMS).rev() {
            t = z + 0.5 * k as f64 / t;
        }
        1.0 / (std::f64::consts::PI.sqrt() * t)
    }
}

pub fn y_function(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(invalid("x", format!("Y is defined on x >= 0, got {x}")));
    }
    Ok(SQRT_PI_OVER_2 * erfcx(x / std::f64::consts::SQRT_2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature;

    // Independent route: integrate e^{x²/2 - t²/2} directly over [x, x + 40].
    fn y_by_quadrature(x: f64) -> f64 {
        quadrature::integrate(|t| (0.5 * (x * x - t * t)).exp(), x, x + 40.0, 1e-13).unwrap()
    }

    #[test]
    fn value_at_zero_and_one() {
        assert!((y_function(0.0).unwrap() - SQRT_PI_OVER_2).abs() < 1e-15);
        let y1 = y_function(1.0).unwrap();
        assert!((y1 - y_by_quadrature(1.0)).abs() < 1e-12);
        assert!((y1 - 0.6557).abs() < 1e-4);
    }

    #[test]
    fn agrees_with_quadrature_across_branch_switch() {
        for &x in &[0.1, 0.5, 2.0, 5.0, 7.0, 7.07, 7.08, 7.1, 9.0, 12.0] {
            let y = y_function(x).unwrap();
            let q = y_by_quadrature(x);
            assert!((y - q).abs() < 1e-12 * q, "x={x}: {y} vs {q}");
        }
    }

    #[test]
    fn mills_bounds_and_monotonicity() {
        let mut prev = f64::INFINITY;
        for i in 1..=1000 {
            let x = i as f64 * 0.01;
            let y = y_function(x).unwrap();
            assert!(x / (1.0 + x * x) <= y && y <= 1.0 / x, "x={x}");
            assert!(y < prev);
            prev = y;
        }
        let big = 1e6;
        assert!((y_function(big).unwrap() * big - 1.0).abs() < 1e-11);
        assert!(y_function(-1.0).is_err());
    }
}
