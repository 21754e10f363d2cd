//! Hermite polynomials and Hermite functions.

use std::f64::consts::PI;

/// Physicists' Hermite polynomial `H_n(x)` by the three-term recurrence
/// `H_{k+1} = 2x H_k - 2k H_{k-1}`.
///
/// Grows like `2^n n!`-ish; use [`hermite_function`] for normalised work.
pub fn hermite(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Normalised Hermite function
/// `h_n(x) = H_n(x) e^{-x²/2} / √(2^n n! √π)`.
///
/// Computed by the scaled recurrence
/// `h_{k+1} = √(2/(k+1)) x h_k - √(k/(k+1)) h_{k-1}`, which never forms
/// `H_n` or `n!` and so stays finite for large `n`.
pub fn hermite_function(n: usize, x: f64) -> f64 {
    let mut prev = PI.powf(-0.25) * (-0.5 * x * x).exp();
    if n == 0 {
        return prev;
    }
    let mut cur = 2f64.sqrt() * x * prev;
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `h_0(x), ..., h_{n_max}(x)` in one pass.
pub fn hermite_functions(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(PI.powf(-0.25) * (-0.5 * x * x).exp());
    if n_max >= 1 {
        out.push(2f64.sqrt() * x * out[0]);
    }
    for k in 1..n_max {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_orders_match_explicit_polynomials() {
        for &x in &[-1.7, -0.2, 0.0, 0.5, 2.3] {
            assert_eq!(hermite(0, x), 1.0);
            assert!((hermite(1, x) - 2.0 * x).abs() < 1e-14);
            assert!((hermite(2, x) - (4.0 * x * x - 2.0)).abs() < 1e-13);
            assert!((hermite(3, x) - (8.0 * x.powi(3) - 12.0 * x)).abs() < 1e-12);
            let h5 = 32.0 * x.powi(5) - 160.0 * x.powi(3) + 120.0 * x;
            assert!((hermite(5, x) - h5).abs() < 1e-10 * h5.abs().max(1.0));
        }
    }

    #[test]
    fn function_matches_polynomial_form() {
        let fact = |n: usize| (1..=n).map(|k| k as f64).product::<f64>();
        for n in 0..12 {
            for &x in &[-2.5, -0.3, 0.9, 3.1] {
                let direct = hermite(n, x) * (-0.5 * x * x).exp()
                    / (2f64.powi(n as i32) * fact(n) * PI.sqrt()).sqrt();
                assert!(
                    (hermite_function(n, x) - direct).abs() < 1e-12,
                    "n={n} x={x}"
                );
            }
        }
    }

    #[test]
    fn batch_agrees_with_single() {
        let all = hermite_functions(50, 1.37);
        for (n, v) in all.iter().enumerate() {
            assert_eq!(*v, hermite_function(n, 1.37));
        }
    }

    #[test]
    fn large_order_stays_finite() {
        for &x in &[0.0, 5.0, 10.0, 14.0] {
            let v = hermite_function(200, x);
            assert!(v.is_finite() && v.abs() < 1.0);
        }
    }
}
