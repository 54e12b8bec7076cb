//! Continuation of logarithms (hence of fractional powers) of zero-free
//! functions along polylines.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

const MIN_SUBSTEPS: usize = 16;
const MAX_BISECTIONS: u32 = 40;

/// log f at the end of `path`, with imaginary part continued from the
/// principal argument of f at `path[0]`.
pub fn continue_log<F>(f: F, path: &[Complex64]) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let start = *path.first().ok_or_else(|| Error::ContinuationFailure("empty path".into()))?;
    let f0 = f(start)?;
    if f0 == Complex64::new(0.0, 0.0) {
        return Err(Error::ContinuationFailure(format!("function vanishes at {start}")));
    }
    let mut arg = f0.arg();
    let mut last = f0;
    for pair in path.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if a == b {
            continue;
        }
        let mut fa = last;
        for k in 0..MIN_SUBSTEPS {
            let za = a + (b - a) * (k as f64 / MIN_SUBSTEPS as f64);
            let zb = a + (b - a) * ((k + 1) as f64 / MIN_SUBSTEPS as f64);
            let (d, fb) = arg_increment(&f, za, fa, zb, 0)?;
            arg += d;
            fa = fb;
        }
        last = fa;
    }
    if last == Complex64::new(0.0, 0.0) {
        return Err(Error::ContinuationFailure("function vanishes at the end point".into()));
    }
    Ok(Complex64::new(last.norm().ln(), arg))
}

fn arg_increment<F>(f: &F, za: Complex64, fa: Complex64, zb: Complex64, depth: u32) -> Result<(f64, Complex64)>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let fb = f(zb)?;
    if fb == Complex64::new(0.0, 0.0) && depth == 0 {
        // exact zero at the end point only: keep the argument of the approach
        return Ok((0.0, fb));
    }
    let zm = (za + zb) * 0.5;
    let fm = f(zm)?;
    let d = (fb / fa).arg();
    let d1 = (fm / fa).arg();
    let d2 = (fb / fm).arg();
    if d.abs() < FRAC_PI_2 && d1.abs() < FRAC_PI_4 && d2.abs() < FRAC_PI_4 && (d1 + d2 - d).abs() < 1e-9 {
        return Ok((d, fb));
    }
    if depth >= MAX_BISECTIONS {
        return Err(Error::ContinuationFailure(format!("argument jumps near {zm}")));
    }
    let (x, fm2) = arg_increment(f, za, fa, zm, depth + 1)?;
    let (y, fb2) = arg_increment(f, zm, fm2, zb, depth + 1)?;
    Ok((x + y, fb2))
}

/// The square root of `value` closest to `reference`.
pub fn root_near(value: Complex64, reference: Complex64) -> Complex64 {
    let r = value.sqrt();
    if (r - reference).norm() <= (r + reference).norm() {
        r
    } else {
        -r
    }
}
