//! Gauss–Legendre rules and composite quadrature of complex integrands.

use crate::error::Result;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Nodes and weights of the n-point Gauss–Legendre rule on [−1, 1].
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1, "a quadrature rule needs at least one node");
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        // Tricomi initial guess, then Newton on P_n
        let mut x = (PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out.reverse();
    out
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
}

/// ∫_a^b f over `panels` equal panels with the given rule.
pub fn composite<F>(f: &F, a: f64, b: f64, rule: &[(f64, f64)], panels: usize) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let h = (b - a) / panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let mid = a + h * (p as f64 + 0.5);
        for &(x, w) in rule {
            total += f(mid + 0.5 * h * x)? * (0.5 * h * w);
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let rule = gauss_legendre(8);
        let s: f64 = rule.iter().map(|&(_, w)| w).sum();
        assert!((s - 2.0).abs() < 1e-14);
        let m14: f64 = rule.iter().map(|&(x, w)| w * x.powi(14)).sum();
        assert!((m14 - 2.0 / 15.0).abs() < 1e-14);
    }

    #[test]
    fn composite_integral_of_exponential() {
        let rule = gauss_legendre(10);
        let v = composite(&|t| Ok(Complex64::new(0.0, t).exp()), 0.0, 2.0 * PI, &rule, 4).unwrap();
        assert!(v.norm() < 1e-13);
    }
}
