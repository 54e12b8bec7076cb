//! The polymorphic maps s2±, s4, s6 and the generic s_f, with closed-form
//! derivatives and Schwarzians.
//!
//! Every map has the shape s(τ) = τ − (6i/π)·N/Den. Near poles and cusps the
//! quotient is rearranged so that the small factor comes from its own q-series
//! (P2, P4, P6, Δ) instead of a difference of large terms.

use crate::branch::{continue_log, root_near};
use crate::error::{Error, Result};
use crate::ext::{ExtComplex, Finite, Infinity};
use crate::geometry::{canonical, Canonical};
use crate::modular::{reduce, Eisenstein};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

const W_SLACK: f64 = 1e-12;
const ANCHOR: Complex64 = Complex64::new(0.0, 2.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MapKey {
    S2Plus,
    S2Minus,
    S4,
    S6,
}

impl MapKey {
    pub const ALL: [MapKey; 4] = [MapKey::S2Plus, MapKey::S2Minus, MapKey::S4, MapKey::S6];

    pub fn name(&self) -> &'static str {
        match self {
            MapKey::S2Plus => "s2+",
            MapKey::S2Minus => "s2-",
            MapKey::S4 => "s4",
            MapKey::S6 => "s6",
        }
    }

    /// The branch sign for s2±, `None` for s4 and s6.
    pub fn branch(&self) -> Option<Branch> {
        match self {
            MapKey::S2Plus => Some(Branch::Plus),
            MapKey::S2Minus => Some(Branch::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for MapKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MapKey {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<MapKey, String> {
        match s.trim_start_matches('s') {
            "2+" => Ok(MapKey::S2Plus),
            "2-" => Ok(MapKey::S2Minus),
            "4" => Ok(MapKey::S4),
            "6" => Ok(MapKey::S6),
            _ => Err(format!("unknown map {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(&self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// A value of s2± together with the root of E4 it was computed from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchedValue {
    pub value: ExtComplex,
    pub branch: Branch,
    pub sqrt_e4: Complex64,
}

fn region_w() -> &'static crate::geometry::ArcTriangle {
    static W: OnceLock<crate::geometry::ArcTriangle> = OnceLock::new();
    W.get_or_init(|| canonical(Canonical::W))
}

pub fn in_w(tau: Complex64) -> bool {
    tau.im > 0.0 && region_w().contains(Finite(tau), W_SLACK)
}

/// The branch of √E4 on W that is positive on the imaginary axis.
pub fn sqrt_e4_on_w(tau: Complex64, tol: f64) -> Result<Complex64> {
    if !in_w(tau) {
        return Err(Error::OutsideW(tau));
    }
    let e = Eisenstein::checked(tau, tol)?;
    sqrt_e4_at(&e, tol)
}

fn sqrt_e4_at(e: &Eisenstein, tol: f64) -> Result<Complex64> {
    let tau = e.tau;
    if e.e4.norm() < tol {
        return Ok(Complex64::new(0.0, 0.0));
    }
    // vertical, horizontal, vertical: each leg stays in W
    let y = tau.im.max(ANCHOR.im);
    let path = [ANCHOR, Complex64::new(0.0, y), Complex64::new(tau.re, y), tau];
    let log = continue_log(|z| Ok(Eisenstein::at(z)?.e4), &path)?;
    Ok(root_near(e.e4, (log * 0.5).exp()))
}

/// τ − (6i/π)·num/den, with ∞ when the denominator is negligible.
fn assemble(tau: Complex64, num: Complex64, den: Complex64, tol: f64) -> Result<ExtComplex> {
    if num.norm() < tol && den.norm() < tol {
        return Err(Error::Indeterminate(tau));
    }
    let w = tau - Complex64::new(0.0, 6.0 / PI) * num / den;
    Ok(if w.re.is_finite() && w.im.is_finite() { Finite(w) } else { Infinity })
}

/// s2 for the root `r` of E4 and branch sign σ: τ − 6i/(π(E2 + σr)).
pub fn s2_with_root(e: &Eisenstein, r: Complex64, sigma: f64, tol: f64) -> Result<ExtComplex> {
    let plus = e.e2 + r * sigma;
    let minus = e.e2 - r * sigma;
    if plus.norm() < minus.norm() {
        // E2 + σr = P2 / (E2 − σr)
        assemble(e.tau, minus, e.p2, tol)
    } else {
        assemble(e.tau, Complex64::new(1.0, 0.0), plus, tol)
    }
}

/// (s2σ)' = 2(r³ + σE6) / (r (E2 + σr)²) with the small factors rebuilt from Δ and P2.
pub fn s2_derivative_with_root(e: &Eisenstein, r: Complex64, sigma: f64) -> Result<Complex64> {
    if r == Complex64::new(0.0, 0.0) {
        return Err(Error::PoleAtPoint(e.tau));
    }
    let r3 = r * r * r;
    let (up, down) = (r3 + e.e6 * sigma, r3 - e.e6 * sigma);
    // (r³ + E6)(r³ − E6) = 1728Δ
    let num = if up.norm() < down.norm() { e.discriminant() / down } else { up };
    let (plus, minus) = (e.e2 + r * sigma, e.e2 - r * sigma);
    let (top, bottom) = if plus.norm() < minus.norm() { (minus * minus, e.p2 * e.p2) } else { (Complex64::new(1.0, 0.0), plus * plus) };
    if bottom == Complex64::new(0.0, 0.0) {
        return Err(Error::PoleAtPoint(e.tau));
    }
    Ok(num * top * 2.0 / (r * bottom))
}

fn w_root(k: MapKey, e: &Eisenstein, tol: f64) -> Result<(Complex64, f64)> {
    let sigma = k.branch().map(|b| b.sign()).unwrap_or(1.0);
    if !in_w(e.tau) {
        return Err(Error::OutsideW(e.tau));
    }
    Ok((sqrt_e4_at(e, tol)?, sigma))
}

/// s = A/D with s' = K/D² at a point of the fundamental domain, for s2+
/// with the root `r0`.
fn reduced_fraction(map: MapKey, e: &Eisenstein, r0: Complex64) -> Result<(Complex64, Complex64, Complex64)> {
    let ci = Complex64::new(0.0, 6.0 / PI);
    let (n, d, k) = match map {
        MapKey::S4 => (e.e4, e.p4, e.discriminant() * -5.0),
        MapKey::S6 => (e.e6, e.p6, e.e4 * e.discriminant() * 7.0),
        MapKey::S2Plus | MapKey::S2Minus => {
            if r0.norm() == 0.0 {
                // branch point: s = τ − 6i/(πE2), s' unbounded
                (Complex64::new(1.0, 0.0), e.e2, Complex64::new(f64::NAN, f64::NAN))
            } else {
                reduced_s2(e, r0)
            }
        }
    };
    Ok((e.tau * d - ci * n, d, k))
}

fn reduced_s2(e: &Eisenstein, r0: Complex64) -> (Complex64, Complex64, Complex64) {
    let r3 = r0 * r0 * r0;
    let (up, down) = (r3 + e.e6, r3 - e.e6);
    let num = if up.norm() < down.norm() { e.discriminant() / down } else { up } * 2.0 / r0;
    let (plus, minus) = (e.e2 + r0, e.e2 - r0);
    if plus.norm() < minus.norm() {
        (minus, e.p2, num * minus * minus)
    } else {
        (Complex64::new(1.0, 0.0), plus, num)
    }
}

/// s = A/D together with s'/s, evaluated at the reduced point τr and
/// transported by the element h with τ = h(τr). Keeps full relative accuracy
/// near cusps, where the direct formula cancels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapFraction {
    pub num: Complex64,
    pub den: Complex64,
    pub log_derivative: Complex64,
}

impl MapFraction {
    pub fn value(&self) -> ExtComplex {
        if self.den == Complex64::new(0.0, 0.0) {
            Infinity
        } else {
            Finite(self.num / self.den)
        }
    }
}

pub fn map_fraction(map: MapKey, tau: Complex64, tol: f64) -> Result<MapFraction> {
    let (tr, g) = reduce(tau)?;
    let h = g.inverse();
    let e = Eisenstein::checked(tr, tol)?;
    let x = h.cocycle(tr);
    let mut r0 = Complex64::new(0.0, 0.0);
    if let Some(b) = map.branch() {
        let r = sqrt_e4_on_w(tau, tol)?;
        if e.e4.norm() >= tol {
            r0 = e.e4.sqrt();
            if (r / (x * x * r0)).re * b.sign() < 0.0 {
                r0 = -r0;
            }
        }
    }
    let (a0, d0, k0) = reduced_fraction(map, &e, r0)?;
    let num = a0 * h.a as f64 + d0 * h.b as f64;
    let den = a0 * h.c as f64 + d0 * h.d as f64;
    Ok(MapFraction { num, den, log_derivative: k0 * x * x / (num * den) })
}

/// s_k(τ) from precomputed forms; s2± needs τ ∈ W.
pub fn s_map_at(k: MapKey, e: &Eisenstein, tol: f64) -> Result<ExtComplex> {
    match k {
        MapKey::S4 => assemble(e.tau, e.e4, e.p4, tol),
        MapKey::S6 => assemble(e.tau, e.e6, e.p6, tol),
        MapKey::S2Plus | MapKey::S2Minus => {
            let (r, sigma) = w_root(k, e, tol)?;
            s2_with_root(e, r, sigma, tol)
        }
    }
}

pub fn s_map(k: MapKey, tau: Complex64, tol: f64) -> Result<ExtComplex> {
    s_map_at(k, &Eisenstein::checked(tau, tol)?, tol)
}

/// s2± on W, tagged with the root used.
pub fn s2_branched(branch: Branch, tau: Complex64, tol: f64) -> Result<BranchedValue> {
    let key = if branch == Branch::Plus { MapKey::S2Plus } else { MapKey::S2Minus };
    let e = Eisenstein::checked(tau, tol)?;
    let (r, sigma) = w_root(key, &e, tol)?;
    Ok(BranchedValue { value: s2_with_root(&e, r, sigma, tol)?, branch, sqrt_e4: r })
}

/// The set {s2+(τ), s2−(τ)} from the principal root; a singleton when |E4| < tol.
pub fn s2_pair(tau: Complex64, tol: f64) -> Result<Vec<ExtComplex>> {
    let e = Eisenstein::checked(tau, tol)?;
    if e.e4.norm() < tol {
        return Ok(vec![s2_with_root(&e, Complex64::new(0.0, 0.0), 1.0, tol)?]);
    }
    let r = e.e4.sqrt();
    Ok(vec![s2_with_root(&e, r, 1.0, tol)?, s2_with_root(&e, r, -1.0, tol)?])
}

/// s_k'(τ) from precomputed forms.
pub fn s_derivative_at(k: MapKey, e: &Eisenstein, tol: f64) -> Result<Complex64> {
    let pole = |den: Complex64| den == Complex64::new(0.0, 0.0);
    match k {
        MapKey::S4 => {
            if pole(e.p4) {
                return Err(Error::PoleAtPoint(e.tau));
            }
            Ok(e.discriminant() * -5.0 / (e.p4 * e.p4))
        }
        MapKey::S6 => {
            if pole(e.p6) {
                return Err(Error::PoleAtPoint(e.tau));
            }
            Ok(e.e4 * e.discriminant() * 7.0 / (e.p6 * e.p6))
        }
        MapKey::S2Plus | MapKey::S2Minus => {
            let (r, sigma) = w_root(k, e, tol)?;
            s2_derivative_with_root(e, r, sigma)
        }
    }
}

pub fn s_derivative(k: MapKey, tau: Complex64, tol: f64) -> Result<Complex64> {
    s_derivative_at(k, &Eisenstein::checked(tau, tol)?, tol)
}

/// Closed-form {s_k, τ}.
pub fn schwarzian(k: MapKey, tau: Complex64, tol: f64) -> Result<Complex64> {
    let e = Eisenstein::checked(tau, tol)?;
    let pi2 = PI * PI;
    if k == MapKey::S4 {
        return Ok(e.e4 * 2.0 * pi2);
    }
    if e.e4.norm() < tol {
        return Err(Error::PoleAtPoint(tau));
    }
    let e4sq = e.e4 * e.e4;
    match k {
        MapKey::S6 => Ok((e.e6 * e.e6 + e4sq * e.e4 * 2.0) * (2.0 * pi2 / 3.0) / e4sq),
        _ => {
            let (r, sigma) = w_root(k, &e, tol)?;
            let r3 = r * r * r;
            Ok((r3 - e.e6 * sigma) * (r3 * 7.0 + e.e6 * sigma) * (pi2 / 6.0) / e4sq)
        }
    }
}

/// s_f(τ) = τ + weight·f/f' with f' = df/dτ.
pub fn generic_s(weight: u32, f: Complex64, f_prime: Complex64, tau: Complex64) -> Result<ExtComplex> {
    let zero = Complex64::new(0.0, 0.0);
    match (f == zero, f_prime == zero) {
        (true, true) => Err(Error::Indeterminate(tau)),
        (false, true) => Ok(Infinity),
        _ => Ok(Finite(tau + f * weight as f64 / f_prime)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd;
    use crate::modular::rho;

    const TOL: f64 = 1e-12;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn val(k: MapKey, t: Complex64) -> Complex64 {
        s_map(k, t, TOL).unwrap().finite().unwrap()
    }

    #[test]
    fn vertex_values() {
        let r = rho();
        assert!((val(MapKey::S4, c(0.0, 1.0)) - c(0.0, -1.0)).norm() < 1e-10);
        assert!((val(MapKey::S4, r) - r).norm() < 1e-10);
        assert!((val(MapKey::S6, c(0.0, 1.0)) - c(0.0, 1.0)).norm() < 1e-10);
        assert!((val(MapKey::S6, r) - r.conj()).norm() < 1e-10);
        assert!((val(MapKey::S2Plus, r) - r.conj()).norm() < 1e-10);
        assert!((val(MapKey::S2Minus, r) - r.conj()).norm() < 1e-10);
    }

    #[test]
    fn sqrt_e4_normalization_and_laws() {
        let e = Eisenstein::at(c(0.0, 2.0)).unwrap();
        let r = sqrt_e4_on_w(c(0.0, 2.0), TOL).unwrap();
        assert!(r.re > 0.0 && r.im.abs() < 1e-15);
        assert!((r * r - e.e4).norm() < 1e-12);
        let t = c(0.2, 1.5);
        let lhs = sqrt_e4_on_w(-t.inv(), TOL).unwrap();
        assert!((lhs + t * t * sqrt_e4_on_w(t, TOL).unwrap()).norm() < 1e-9);
        let t = c(0.3, 2.0);
        let lhs = sqrt_e4_on_w(-t.conj(), TOL).unwrap();
        assert!((lhs - sqrt_e4_on_w(t, TOL).unwrap().conj()).norm() < 1e-10);
        assert_eq!(sqrt_e4_on_w(c(0.8, 0.5), TOL), Err(Error::OutsideW(c(0.8, 0.5))));
    }

    #[test]
    fn q_asymptotics_at_four_i() {
        let t = c(0.0, 4.0);
        let qinv = (8.0 * PI).exp();
        let lead4 = c(0.0, -1.0 / (120.0 * PI)) * qinv;
        assert!(((val(MapKey::S4, t) - t) - lead4).norm() < 0.01 * lead4.norm());
        let lead6 = c(0.0, 1.0 / (168.0 * PI)) * qinv;
        assert!(((val(MapKey::S6, t) - t) - lead6).norm() < 0.01 * lead6.norm());
        assert!((val(MapKey::S2Plus, t) - (t - c(0.0, 3.0 / PI))).norm() < 1e-8);
    }

    #[test]
    fn pair_behaviour() {
        assert_eq!(s2_pair(rho(), TOL).unwrap().len(), 1);
        let p = s2_pair(c(0.0, 2.0), TOL).unwrap();
        assert_eq!(p.len(), 2);
        assert!(p[0].chordal(&p[1]) > 1e-3);
        let plus = s_map(MapKey::S2Plus, c(0.0, 2.0), TOL).unwrap();
        assert!(p.iter().any(|v| v.chordal(&plus) < 1e-12));
        let t = c(0.3, 1.2);
        let a = s2_pair(t, TOL).unwrap();
        let b = s2_pair(t + 1.0, TOL).unwrap();
        for v in a {
            let shifted = Finite(v.finite().unwrap() + 1.0);
            assert!(b.iter().any(|w| w.chordal(&shifted) < 1e-10));
        }
    }

    #[test]
    fn derivative_values() {
        let r = rho();
        assert!((s_derivative(MapKey::S4, r, TOL).unwrap() - 5.0).norm() < 1e-9);
        assert!((s_derivative(MapKey::S6, c(0.0, 1.0), TOL).unwrap() - 7.0).norm() < 1e-9);
        assert!(s_derivative(MapKey::S6, r, TOL).unwrap().norm() < 1e-9);
        assert!(matches!(s_derivative(MapKey::S2Plus, r, TOL), Err(Error::PoleAtPoint(_))));
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for (k, t) in [(MapKey::S4, c(0.25, 2.0)), (MapKey::S6, c(0.1, 1.1)), (MapKey::S2Plus, c(0.2, 0.9)), (MapKey::S2Minus, c(-0.1, 1.3))] {
            let fd = fd::derivative(|z| Ok(val(k, z)), t, fd::first_step(t) * 0.1).unwrap();
            let cf = s_derivative(k, t, TOL).unwrap();
            assert!((fd - cf).norm() < 1e-6 * cf.norm(), "{k}: {fd} vs {cf}");
        }
    }

    #[test]
    fn schwarzians() {
        let t = c(0.0, 2.0);
        let e4 = Eisenstein::at(t).unwrap().e4;
        assert!((schwarzian(MapKey::S4, t, TOL).unwrap() - e4 * 2.0 * PI * PI).norm() < 1e-12);
        let e4i = Eisenstein::at(c(0.0, 1.0)).unwrap().e4;
        let s6 = schwarzian(MapKey::S6, c(0.0, 1.0), TOL).unwrap();
        assert!((s6 - e4i * 4.0 * PI * PI / 3.0).norm() < 1e-10);
        for (k, t) in [(MapKey::S4, c(1.0 / 3.0, 1.4)), (MapKey::S6, c(0.2, 1.2)), (MapKey::S2Plus, c(0.1, 1.1)), (MapKey::S2Minus, c(-0.2, 1.4))] {
            let h = fd::schwarzian_step(t);
            let num = fd::schwarzian(|z| Ok(val(k, z)), t, h).unwrap();
            let cf = schwarzian(k, t, TOL).unwrap();
            assert!((num - cf).norm() < 1e-5 * cf.norm(), "{k}: {num} vs {cf}");
        }
    }

    #[test]
    fn generic_map_reduces_to_s4_and_s6() {
        let t = c(0.2, 1.3);
        let e = Eisenstein::at(t).unwrap();
        let tpi = c(0.0, 2.0 * PI);
        let g4 = generic_s(4, e.e4, tpi * e.p4 / 3.0, t).unwrap();
        assert!(g4.chordal(&s_map(MapKey::S4, t, TOL).unwrap()) < 1e-10);
        let t = c(0.4, 0.9);
        let e = Eisenstein::at(t).unwrap();
        let g6 = generic_s(6, e.e6, tpi * e.p6 / 2.0, t).unwrap();
        assert!(g6.chordal(&s_map(MapKey::S6, t, TOL).unwrap()) < 1e-10);
        assert_eq!(generic_s(4, c(1.0, 0.0), c(0.0, 0.0), t), Ok(Infinity));
        assert!(generic_s(4, c(0.0, 0.0), c(0.0, 0.0), t).is_err());
    }

    #[test]
    fn map_key_parsing() {
        for k in MapKey::ALL {
            assert_eq!(k.name().parse::<MapKey>().unwrap(), k);
        }
        assert!("s3".parse::<MapKey>().is_err());
    }
}
