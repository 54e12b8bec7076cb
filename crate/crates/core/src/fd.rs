//! Centered finite differences for holomorphic functions of one variable.

use crate::error::Result;
use num_complex::Complex64;

/// Step policy for first-derivative cross-checks.
pub fn first_step(z: Complex64) -> f64 {
    1e-5 * z.norm().max(1.0)
}

/// Step policy for third-order (Schwarzian) stencils.
pub fn schwarzian_step(z: Complex64) -> f64 {
    1e-3 * (1.0 + z.norm())
}

fn stencil<F>(f: &F, z: Complex64, h: f64) -> Result<[Complex64; 5]>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    Ok([f(z - 2.0 * h)?, f(z - h)?, f(z)?, f(z + h)?, f(z + 2.0 * h)?])
}

fn d1(v: &[Complex64; 5], h: f64) -> Complex64 {
    (v[0] - v[1] * 8.0 + v[3] * 8.0 - v[4]) / (12.0 * h)
}

fn d2(v: &[Complex64; 5], h: f64) -> Complex64 {
    (-v[0] + v[1] * 16.0 - v[2] * 30.0 + v[3] * 16.0 - v[4]) / (12.0 * h * h)
}

fn d3(v: &[Complex64; 5], h: f64) -> Complex64 {
    (-v[0] + v[1] * 2.0 - v[3] * 2.0 + v[4]) / (2.0 * h * h * h)
}

/// Five-point centered first derivative.
pub fn derivative<F>(f: F, z: Complex64, h: f64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    Ok(d1(&stencil(&f, z, h)?, h))
}

/// Five-point first derivative at h and 2h, Richardson-extrapolated once.
pub fn derivative_richardson<F>(f: F, z: Complex64, h: f64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let a = stencil(&f, z, h)?;
    let b = stencil(&f, z, 2.0 * h)?;
    Ok((d1(&a, h) * 16.0 - d1(&b, 2.0 * h)) / 15.0)
}

/// f', f'', f''' from five-point stencils at h and 2h, Richardson-extrapolated once.
pub fn derivatives3<F>(f: F, z: Complex64, h: f64) -> Result<[Complex64; 3]>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let a = stencil(&f, z, h)?;
    let b = stencil(&f, z, 2.0 * h)?;
    Ok([
        (d1(&a, h) * 16.0 - d1(&b, 2.0 * h)) / 15.0,
        (d2(&a, h) * 16.0 - d2(&b, 2.0 * h)) / 15.0,
        (d3(&a, h) * 4.0 - d3(&b, 2.0 * h)) / 3.0,
    ])
}

/// {f, z} = f'''/f' − (3/2)(f''/f')² from finite differences.
pub fn schwarzian<F>(f: F, z: Complex64, h: f64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let [f1, f2, f3] = derivatives3(f, z, h)?;
    let r = f2 / f1;
    Ok(f3 / f1 - r * r * 1.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_derivatives() {
        let z = Complex64::new(0.3, 0.2);
        let [a, b, c] = derivatives3(|w| Ok((w * 2.0).exp()), z, 1e-3).unwrap();
        let e = (z * 2.0).exp();
        assert!((a - e * 2.0).norm() < 1e-9);
        assert!((b - e * 4.0).norm() < 1e-7);
        assert!((c - e * 8.0).norm() < 1e-5);
    }

    #[test]
    fn schwarzian_of_mobius_and_exponential() {
        let z = Complex64::new(0.7, 1.1);
        let m = schwarzian(|w| Ok((w * 2.0 + 1.0) / (w - 3.0)), z, schwarzian_step(z)).unwrap();
        assert!(m.norm() < 1e-4, "{m}");
        // {e^(aw), w} = -a^2/2
        let s = schwarzian(|w| Ok((w * 1.5).exp()), z, schwarzian_step(z)).unwrap();
        assert!((s + 1.125).norm() < 1e-5, "{s}");
    }
}
