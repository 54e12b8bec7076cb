//! Truncated q-expansions of E2, E4, E6 and Δ, the operator D = q d/dq,
//! and Horner evaluation with a rigorous tail bound.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const DEFAULT_ORDER: usize = 64;
pub const MAX_ORDER: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NamedForm {
    E2,
    E4,
    E6,
    Delta,
}

/// Power series Σ c_n q^n for lowest_exponent ≤ n ≤ truncation_order.
///
/// The neglected tail at |q| = r is bounded by
/// `tail_bound_constant · r^(N+1) / (1 − r·((N+2)/(N+1))^7)`, which follows from
/// the growth bound |c_n| ≤ K n^7 with `tail_bound_constant = K (N+1)^7`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QSeries {
    pub coefficients: Vec<Complex64>,
    pub lowest_exponent: i64,
    pub truncation_order: i64,
    pub tail_bound_constant: f64,
}

pub fn divisor_sum(k: u32, n: u64) -> u64 {
    assert!(n >= 1, "divisor_sum needs n >= 1");
    let mut s = 0u64;
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += d.pow(k);
            let e = n / d;
            if e != d {
                s += e.pow(k);
            }
        }
        d += 1;
    }
    s
}

/// Integer coefficients of the named form through q^order.
pub fn integer_coefficients(form: NamedForm, order: usize) -> Result<Vec<i128>> {
    if order > MAX_ORDER {
        return Err(Error::OrderTooLarge(order));
    }
    let eisenstein = |k: u32, scale: i128| {
        let mut c = vec![1i128];
        c.extend((1..=order as u64).map(|n| scale * divisor_sum(k, n) as i128));
        c
    };
    Ok(match form {
        NamedForm::E2 => eisenstein(1, -24),
        NamedForm::E4 => eisenstein(3, 240),
        NamedForm::E6 => eisenstein(5, -504),
        NamedForm::Delta => {
            // coefficients of q^1..q^order, stored from exponent 1
            if order == 0 {
                return Ok(Vec::new());
            }
            let len = order; // ∏(1-q^m)^24 through q^(order-1)
            let mut p = vec![0i128; len];
            p[0] = 1;
            for m in 1..len {
                for _ in 0..24 {
                    for n in (m..len).rev() {
                        p[n] -= p[n - m];
                    }
                }
            }
            p
        }
    })
}

pub fn named_series(form: NamedForm, order: usize) -> Result<QSeries> {
    let ints = integer_coefficients(form, order)?;
    let coefficients: Vec<Complex64> = ints.iter().map(|&c| Complex64::new(c as f64, 0.0)).collect();
    let lowest = if form == NamedForm::Delta { 1 } else { 0 };
    if form == NamedForm::Delta && order == 0 {
        return Ok(QSeries::zero(0));
    }
    Ok(QSeries::from_coefficients(coefficients, lowest))
}

impl QSeries {
    /// Builds a series and derives its tail constant from the stored coefficients.
    pub fn from_coefficients(coefficients: Vec<Complex64>, lowest_exponent: i64) -> QSeries {
        let truncation_order = lowest_exponent + coefficients.len() as i64 - 1;
        let mut k = 0.0f64;
        for (i, c) in coefficients.iter().enumerate() {
            let n = lowest_exponent + i as i64;
            if n >= 1 {
                k = k.max(c.norm() / (n as f64).powi(7));
            }
        }
        let n1 = (truncation_order.max(0) + 1) as f64;
        QSeries {
            coefficients,
            lowest_exponent,
            truncation_order,
            tail_bound_constant: k * n1.powi(7),
        }
    }

    pub fn zero(order: i64) -> QSeries {
        QSeries::from_coefficients(vec![Complex64::new(0.0, 0.0); (order + 1) as usize], 0)
    }

    pub fn coefficient(&self, n: i64) -> Complex64 {
        if n < self.lowest_exponent || n > self.truncation_order {
            return Complex64::new(0.0, 0.0);
        }
        self.coefficients[(n - self.lowest_exponent) as usize]
    }

    pub fn scale(&self, s: f64) -> QSeries {
        QSeries::from_coefficients(self.coefficients.iter().map(|c| c * s).collect(), self.lowest_exponent)
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let lo = self.lowest_exponent.min(other.lowest_exponent);
        let hi = self.truncation_order.min(other.truncation_order);
        let coeffs = (lo..=hi).map(|n| self.coefficient(n) + other.coefficient(n)).collect();
        QSeries::from_coefficients(coeffs, lo)
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        self.add(&other.scale(-1.0))
    }

    /// Cauchy product, truncated where both factors are still known.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let lo = self.lowest_exponent + other.lowest_exponent;
        let hi = (self.truncation_order + other.lowest_exponent).min(other.truncation_order + self.lowest_exponent);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (hi - lo + 1).max(0) as usize];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate() {
                let idx = i + j;
                if idx < coeffs.len() {
                    coeffs[idx] += a * b;
                }
            }
        }
        QSeries::from_coefficients(coeffs, lo)
    }

    /// Rigorous bound on the neglected tail at |q| = r, or ∞ when the
    /// majorant series does not converge geometrically.
    pub fn tail_bound(&self, r: f64) -> f64 {
        let n1 = (self.truncation_order.max(0) + 1) as f64;
        let ratio = r * ((n1 + 1.0) / n1).powi(7);
        if ratio >= 1.0 {
            return f64::INFINITY;
        }
        if self.tail_bound_constant == 0.0 {
            return 0.0;
        }
        self.tail_bound_constant * r.powf(n1) / (1.0 - ratio)
    }

    /// Horner evaluation at q = e^{2πiτ}; the error estimate is the tail bound.
    pub fn eval_q(&self, q: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coefficients.iter().rev() {
            acc = acc * q + c;
        }
        if self.lowest_exponent != 0 {
            acc *= q.powi(self.lowest_exponent as i32);
        }
        acc
    }
}

pub fn q_of(tau: Complex64) -> Complex64 {
    (Complex64::new(0.0, 2.0 * PI) * tau).exp()
}

/// D acts as q d/dq: the coefficient of q^n is multiplied by n.
pub fn d_operator(s: &QSeries) -> QSeries {
    let coeffs = s
        .coefficients
        .iter()
        .enumerate()
        .map(|(i, c)| c * (s.lowest_exponent + i as i64) as f64)
        .collect();
    let mut out = QSeries::from_coefficients(coeffs, s.lowest_exponent);
    out.truncation_order = s.truncation_order;
    out
}

pub fn eval_series(s: &QSeries, tau: Complex64, tol: f64) -> Result<(Complex64, f64)> {
    if !(tau.im > 0.0) {
        return Err(Error::NotInUpperHalfPlane(tau));
    }
    let q = q_of(tau);
    let bound = s.tail_bound(q.norm());
    if bound > tol {
        return Err(Error::InsufficientTruncation {
            order: s.truncation_order.max(0) as usize,
            bound,
            tol,
        });
    }
    Ok((s.eval_q(q), bound))
}
