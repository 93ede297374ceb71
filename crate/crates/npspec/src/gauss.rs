//! Gauss–Legendre rules and Legendre polynomial evaluation on [-1, 1].

use std::f64::consts::PI;

/// Nodes and weights of the q-point Gauss–Legendre rule on [-1, 1].
///
/// Newton iteration on P_q from the Chebyshev-based initial guess; converges
/// to machine precision in a handful of steps for the small orders used here.
pub fn gauss_legendre(q: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(q >= 1);
    let mut nodes = vec![0.0; q];
    let mut weights = vec![0.0; q];
    for i in 0..q {
        let mut x = -(PI * (i as f64 + 0.75) / (q as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(q, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(q, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// P_q(x) and P_q'(x) by the three-term recurrence.
pub fn legendre_with_derivative(q: usize, x: f64) -> (f64, f64) {
    if q == 0 {
        return (1.0, 0.0);
    }
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 1..q {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = p_next;
    }
    let dp = q as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// P_0(x), ..., P_{kmax}(x).
pub fn legendre_all(kmax: usize, x: f64) -> Vec<f64> {
    let mut p = Vec::with_capacity(kmax + 1);
    p.push(1.0);
    if kmax == 0 {
        return p;
    }
    p.push(x);
    for k in 1..kmax {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * p[k] - kf * p[k - 1]) / (kf + 1.0);
        p.push(next);
    }
    p
}
