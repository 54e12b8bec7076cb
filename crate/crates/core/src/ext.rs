//! Points of the Riemann sphere.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExtComplex {
    Finite(Complex64),
    Infinity,
}

pub use ExtComplex::{Finite, Infinity};

impl ExtComplex {
    pub fn new(re: f64, im: f64) -> Self {
        Finite(Complex64::new(re, im))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Infinity)
    }

    pub fn finite(&self) -> Option<Complex64> {
        match *self {
            Finite(z) => Some(z),
            Infinity => None,
        }
    }

    pub fn conj(&self) -> Self {
        match *self {
            Finite(z) => Finite(z.conj()),
            Infinity => Infinity,
        }
    }

    pub fn recip(&self) -> Self {
        match *self {
            Infinity => Finite(Complex64::new(0.0, 0.0)),
            Finite(z) if z == Complex64::new(0.0, 0.0) => Infinity,
            Finite(z) => Finite(z.inv()),
        }
    }

    /// Stereographic image on the unit sphere, with ∞ at the north pole.
    pub fn to_sphere(&self) -> [f64; 3] {
        match *self {
            Infinity => [0.0, 0.0, 1.0],
            Finite(z) => {
                let n = z.norm_sqr();
                if !n.is_finite() {
                    return [0.0, 0.0, 1.0];
                }
                let d = 1.0 + n;
                [2.0 * z.re / d, 2.0 * z.im / d, (n - 1.0) / d]
            }
        }
    }

    /// Chordal distance on the unit sphere (at most 2).
    pub fn chordal(&self, other: &ExtComplex) -> f64 {
        match (*self, *other) {
            (Infinity, Infinity) => 0.0,
            (Finite(z), Infinity) | (Infinity, Finite(z)) => 2.0 / (1.0 + z.norm_sqr()).sqrt(),
            (Finite(z), Finite(w)) => {
                let num = 2.0 * (z - w).norm();
                let den = ((1.0 + z.norm_sqr()) * (1.0 + w.norm_sqr())).sqrt();
                if den.is_finite() {
                    num / den
                } else {
                    let a = self.to_sphere();
                    let b = other.to_sphere();
                    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
                }
            }
        }
    }
}

impl From<Complex64> for ExtComplex {
    fn from(z: Complex64) -> Self {
        Finite(z)
    }
}

impl std::fmt::Display for ExtComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Finite(z) => write!(f, "{z}"),
            Infinity => write!(f, "∞"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chordal_to_infinity_shrinks() {
        let far = ExtComplex::new(1e9, 0.0);
        assert!(far.chordal(&Infinity) < 3e-9);
        assert_eq!(Infinity.chordal(&Infinity), 0.0);
    }

    #[test]
    fn chordal_is_symmetric_and_bounded() {
        let a = ExtComplex::new(0.3, -2.0);
        let b = ExtComplex::new(-1.0, 0.5);
        assert!((a.chordal(&b) - b.chordal(&a)).abs() < 1e-15);
        assert!(a.chordal(&b) <= 2.0);
        let zero = ExtComplex::new(0.0, 0.0);
        assert!((zero.chordal(&Infinity) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn recip_swaps_zero_and_infinity() {
        assert_eq!(Infinity.recip(), ExtComplex::new(0.0, 0.0));
        assert_eq!(ExtComplex::new(0.0, 0.0).recip(), Infinity);
    }
}
