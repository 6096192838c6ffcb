//! Closed-form reference values used by the verification suite.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Thue–Morse autocorrelation coefficients from the two-scale recursion
/// `eta(2k) = eta(k)`, `eta(2k+1) = -(eta(k) + eta(k+1)) / 2`, `eta(0) = 1`,
/// `eta(1) = -1/3`; even in `t`.
pub fn thue_morse_eta(t: i64) -> f64 {
    match t.unsigned_abs() {
        0 => 1.0,
        1 => -1.0 / 3.0,
        m if m % 2 == 0 => thue_morse_eta((m / 2) as i64),
        m => {
            let k = (m / 2) as i64;
            -(thue_morse_eta(k) + thue_morse_eta(k + 1)) / 2.0
        }
    }
}

/// Coefficient of `1_{[0, beta)}({n alpha})` at `theta = k alpha mod 1`:
/// `int_0^beta e^{-2 pi i k x} dx`.
pub fn rotation_coefficient(beta: f64, k: i64) -> Complex64 {
    if k == 0 {
        return Complex64::new(beta, 0.0);
    }
    let w = 2.0 * PI * k as f64;
    (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -w * beta)) / Complex64::new(0.0, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_small_values() {
        let v: Vec<f64> = (0..4).map(thue_morse_eta).collect();
        let want = [1.0, -1.0 / 3.0, -1.0 / 3.0, 1.0 / 3.0];
        for (a, b) in v.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(thue_morse_eta(-5), thue_morse_eta(5));
    }

    #[test]
    fn rotation_coefficient_by_quadrature() {
        let beta = 0.3;
        for k in [-3i64, 1, 4] {
            let m = 200_000;
            let h = beta / m as f64;
            let q: Complex64 = (0..m)
                .map(|j| Complex64::from_polar(h, -2.0 * PI * k as f64 * (j as f64 + 0.5) * h))
                .sum();
            assert!((q - rotation_coefficient(beta, k)).norm() < 1e-9);
        }
    }
}
