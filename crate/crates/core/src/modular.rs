//! Group elements of Γ and Γ̄, reduction to the fundamental domain, and
//! evaluation of E2, E4, E6, Δ, J and their D-derivatives anywhere in ℍ.

use crate::error::{Error, Result};
use crate::ext::{ExtComplex, Finite, Infinity};
use crate::qseries::{d_operator, named_series, q_of, NamedForm, QSeries, DEFAULT_ORDER};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::OnceLock;

const REDUCE_SLACK: f64 = 1e-14;
const MAX_REDUCE_STEPS: usize = 10_000;

/// τ ↦ (aτ+b)/(cτ+d), or τ ↦ (aτ̄+b)/(cτ̄+d) when `conjugate_first`.
///
/// Orientation-preserving elements have determinant 1; conjugating elements
/// have determinant −1 so that they preserve ℍ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub conjugate_first: bool,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement { a: 1, b: 0, c: 0, d: 1, conjugate_first: false };
    pub const S: GroupElement = GroupElement { a: 0, b: -1, c: 1, d: 0, conjugate_first: false };
    pub const T: GroupElement = GroupElement { a: 1, b: 1, c: 0, d: 1, conjugate_first: false };

    pub fn new(a: i64, b: i64, c: i64, d: i64, conjugate_first: bool) -> Option<GroupElement> {
        let g = GroupElement { a, b, c, d, conjugate_first };
        (g.det() == g.expected_det()).then_some(g)
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    fn expected_det(&self) -> i64 {
        if self.conjugate_first {
            -1
        } else {
            1
        }
    }

    pub fn translation(n: i64) -> GroupElement {
        GroupElement { a: 1, b: n, c: 0, d: 1, conjugate_first: false }
    }

    pub fn apply(&self, tau: ExtComplex) -> ExtComplex {
        let z = if self.conjugate_first { tau.conj() } else { tau };
        let (a, b, c, d) = (self.a as f64, self.b as f64, self.c as f64, self.d as f64);
        match z {
            Infinity => {
                if self.c == 0 {
                    Infinity
                } else {
                    Finite(Complex64::new(a / c, 0.0))
                }
            }
            Finite(w) => {
                let den = w * c + d;
                if den == Complex64::new(0.0, 0.0) {
                    Infinity
                } else {
                    Finite((w * a + b) / den)
                }
            }
        }
    }

    pub fn apply_c(&self, tau: Complex64) -> ExtComplex {
        self.apply(Finite(tau))
    }

    /// The composite map `self ∘ other`.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
            conjugate_first: self.conjugate_first ^ other.conjugate_first,
        }
    }

    fn checked_compose(&self, other: &GroupElement) -> Option<GroupElement> {
        let m = |x: i64, y: i64, z: i64, w: i64| x.checked_mul(y)?.checked_add(z.checked_mul(w)?);
        Some(GroupElement {
            a: m(self.a, other.a, self.b, other.c)?,
            b: m(self.a, other.b, self.b, other.d)?,
            c: m(self.c, other.a, self.d, other.c)?,
            d: m(self.c, other.b, self.d, other.d)?,
            conjugate_first: self.conjugate_first ^ other.conjugate_first,
        })
    }

    pub fn inverse(&self) -> GroupElement {
        let s = self.expected_det();
        GroupElement {
            a: s * self.d,
            b: -s * self.b,
            c: -s * self.c,
            d: s * self.a,
            conjugate_first: self.conjugate_first,
        }
    }

    /// Representative with the first nonzero entry positive (PSL2 identification).
    pub fn normalized(&self) -> GroupElement {
        let first = [self.a, self.b, self.c, self.d].into_iter().find(|&x| x != 0).unwrap_or(1);
        if first < 0 {
            GroupElement { a: -self.a, b: -self.b, c: -self.c, d: -self.d, conjugate_first: self.conjugate_first }
        } else {
            *self
        }
    }

    /// The automorphy factor cτ+d, evaluated at the (possibly conjugated) argument.
    pub fn cocycle(&self, tau: Complex64) -> Complex64 {
        let z = if self.conjugate_first { tau.conj() } else { tau };
        z * self.c as f64 + self.d as f64
    }
}

/// Returns (τ', g) with τ' = g(τ) in the symmetric fundamental domain.
pub fn reduce(tau: Complex64) -> Result<(Complex64, GroupElement)> {
    if !(tau.im > 0.0) || !tau.re.is_finite() {
        return Err(Error::NotInUpperHalfPlane(tau));
    }
    let mut z = tau;
    let mut g = GroupElement::IDENTITY;
    for _ in 0..MAX_REDUCE_STEPS {
        if z.re.abs() > 0.5 + REDUCE_SLACK {
            let n = z.re.round();
            z.re -= n;
            g = GroupElement::translation(-(n as i64)).checked_compose(&g).ok_or(Error::NonTermination(MAX_REDUCE_STEPS))?;
        }
        if z.norm_sqr() < 1.0 - 2.0 * REDUCE_SLACK {
            z = -z.inv();
            g = GroupElement::S.checked_compose(&g).ok_or(Error::NonTermination(MAX_REDUCE_STEPS))?;
        } else if z.re.abs() <= 0.5 + REDUCE_SLACK {
            return Ok((z, g));
        }
    }
    Err(Error::NonTermination(MAX_REDUCE_STEPS))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Form {
    E2,
    E4,
    E6,
    Delta,
    J,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FormValue {
    pub form: Form,
    pub value: Complex64,
    pub error_estimate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DExpr {
    DE2,
    DE4,
    DE6,
    /// D(E2² − E4)
    D2E2Combo,
    /// D(E2E4 − E6)
    D2E4Combo,
    /// D(E2E6 − E4²)
    D2E6Combo,
    DDelta,
}

struct Tables {
    e2: QSeries,
    e4: QSeries,
    e6: QSeries,
    delta: QSeries,
    p2: QSeries,
    p4: QSeries,
    p6: QSeries,
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| {
        let s = |f| named_series(f, DEFAULT_ORDER).expect("default order is supported");
        let (e2, e4, e6) = (s(NamedForm::E2), s(NamedForm::E4), s(NamedForm::E6));
        Tables {
            p2: d_operator(&e2).scale(12.0),
            p4: d_operator(&e4).scale(3.0),
            p6: d_operator(&e6).scale(2.0),
            delta: s(NamedForm::Delta),
            e2,
            e4,
            e6,
        }
    })
}

/// E2, E4, E6, Δ and the combinations P2 = E2²−E4, P4 = E2E4−E6,
/// P6 = E2E6−E4² at one point.
///
/// The combinations are summed from their own q-series at the reduced point
/// and transported back, so they keep full relative accuracy near cusps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eisenstein {
    pub tau: Complex64,
    pub e2: Complex64,
    pub e4: Complex64,
    pub e6: Complex64,
    pub delta: Complex64,
    pub p2: Complex64,
    pub p4: Complex64,
    pub p6: Complex64,
    /// Truncation bound at the reduced point, before transport.
    pub reduced_tail: f64,
    /// |cτ+d| for the reducing element.
    pub cocycle_norm: f64,
}

impl Eisenstein {
    pub fn at(tau: Complex64) -> Result<Eisenstein> {
        let (tr, g) = reduce(tau)?;
        let t = tables();
        let q = q_of(tr);
        let r = q.norm();
        let reduced_tail = t.e6.tail_bound(r).max(t.p6.tail_bound(r)).max(t.delta.tail_bound(r));
        let (e2r, e4r, e6r) = (t.e2.eval_q(q), t.e4.eval_q(q), t.e6.eval_q(q));
        let (dr, p2r, p4r, p6r) = (t.delta.eval_q(q), t.p2.eval_q(q), t.p4.eval_q(q), t.p6.eval_q(q));
        if g.c == 0 {
            return Ok(Eisenstein {
                tau,
                e2: e2r,
                e4: e4r,
                e6: e6r,
                delta: dr,
                p2: p2r,
                p4: p4r,
                p6: p6r,
                reduced_tail,
                cocycle_norm: 1.0,
            });
        }
        let x = g.cocycle(tau);
        let xi = x.inv();
        let xi2 = xi * xi;
        let xi4 = xi2 * xi2;
        let xi6 = xi4 * xi2;
        let kappa = Complex64::new(0.0, 6.0 / PI) * (x * g.c as f64);
        Ok(Eisenstein {
            tau,
            e2: (e2r + kappa) * xi2,
            e4: e4r * xi4,
            e6: e6r * xi6,
            delta: dr * xi6 * xi6,
            p2: (p2r + kappa * e2r * 2.0 + kappa * kappa) * xi4,
            p4: (p4r + kappa * e4r) * xi6,
            p6: (p6r + kappa * e6r) * xi6 * xi2,
            reduced_tail,
            cocycle_norm: x.norm(),
        })
    }

    /// As `at`, failing when the truncation bound at the reduced point exceeds `tol`.
    pub fn checked(tau: Complex64, tol: f64) -> Result<Eisenstein> {
        let e = Eisenstein::at(tau)?;
        if e.reduced_tail > tol {
            return Err(Error::InsufficientTruncation { order: DEFAULT_ORDER, bound: e.reduced_tail, tol });
        }
        Ok(e)
    }

    pub fn j(&self) -> Complex64 {
        self.e4 * self.e4 * self.e4 / (self.delta * 1728.0)
    }

    /// D(E2² − E4) = (E2 P2 − 2 P4)/6.
    pub fn dp2(&self) -> Complex64 {
        (self.e2 * self.p2 - self.p4 * 2.0) / 6.0
    }

    /// D(E2E4 − E6) = 5(E4 P2 − 2 P6)/12.
    pub fn dp4(&self) -> Complex64 {
        (self.e4 * self.p2 - self.p6 * 2.0) * (5.0 / 12.0)
    }

    /// D(E2E6 − E4²) = 7(E6 P2 − 2 E4 P4)/12.
    pub fn dp6(&self) -> Complex64 {
        (self.e6 * self.p2 - self.e4 * self.p4 * 2.0) * (7.0 / 12.0)
    }

    /// E4³ − E6² computed as 1728Δ.
    pub fn discriminant(&self) -> Complex64 {
        self.delta * 1728.0
    }

    pub fn error_for(&self, form: Form) -> f64 {
        let w = match form {
            Form::E2 => 2,
            Form::E4 => 4,
            Form::E6 => 6,
            Form::Delta => 12,
            Form::J => 0,
        };
        let base = self.reduced_tail / self.cocycle_norm.powi(w);
        if form == Form::J {
            // relative perturbation of E4³/Δ
            let j = self.j().norm();
            let e4 = self.e4.norm().max(f64::MIN_POSITIVE);
            let rel = 3.0 * self.reduced_tail / (e4 * self.cocycle_norm.powi(4)) + self.reduced_tail / (self.delta.norm() * self.cocycle_norm.powi(12));
            return j * rel;
        }
        base
    }
}

pub fn eval_form(form: Form, tau: Complex64, tol: f64) -> Result<FormValue> {
    let e = Eisenstein::at(tau)?;
    let value = match form {
        Form::E2 => e.e2,
        Form::E4 => e.e4,
        Form::E6 => e.e6,
        Form::Delta => e.delta,
        Form::J => e.j(),
    };
    let error_estimate = e.error_for(form);
    if error_estimate > tol {
        return Err(Error::InsufficientTruncation { order: DEFAULT_ORDER, bound: error_estimate, tol });
    }
    Ok(FormValue { form, value, error_estimate })
}

pub fn eval_d(expr: DExpr, tau: Complex64, tol: f64) -> Result<Complex64> {
    let e = Eisenstein::at(tau)?;
    let err = e.error_for(Form::E6).max(e.error_for(Form::E2));
    if err > tol {
        return Err(Error::InsufficientTruncation { order: DEFAULT_ORDER, bound: err, tol });
    }
    Ok(match expr {
        DExpr::DE2 => e.p2 / 12.0,
        DExpr::DE4 => e.p4 / 3.0,
        DExpr::DE6 => e.p6 / 2.0,
        DExpr::D2E2Combo => e.dp2(),
        DExpr::D2E4Combo => e.dp4(),
        DExpr::D2E6Combo => e.dp6(),
        DExpr::DDelta => e.e2 * e.delta,
    })
}

pub fn rho() -> Complex64 {
    Complex64::new(0.5, 3f64.sqrt() / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn apply_examples() {
        assert_eq!(GroupElement::IDENTITY.apply_c(c(0.0, 2.0)), Finite(c(0.0, 2.0)));
        assert_eq!(GroupElement::S.apply_c(c(0.0, 1.0)), Finite(c(0.0, 1.0)));
        let alpha = GroupElement::new(-1, 0, 0, 1, true).unwrap();
        assert_eq!(alpha.apply_c(c(0.3, 2.0)), Finite(c(-0.3, 2.0)));
        assert_eq!(GroupElement::S.apply(Infinity), Finite(c(0.0, 0.0)));
        assert_eq!(GroupElement::S.apply_c(c(0.0, 0.0)), Infinity);
    }

    #[test]
    fn determinant_convention() {
        assert!(GroupElement::new(-1, 0, 0, 1, false).is_none());
        assert!(GroupElement::new(1, 1, 0, 1, true).is_none());
    }

    #[test]
    fn inverse_and_compose() {
        let g = GroupElement::new(2, 1, 5, 3, false).unwrap();
        let beta = GroupElement::new(0, 1, 1, 0, true).unwrap();
        for h in [g, beta, g.compose(&beta)] {
            assert_eq!(h.compose(&h.inverse()).normalized(), GroupElement::IDENTITY);
            let z = c(0.2, 0.7);
            let back = h.inverse().apply(h.apply_c(z)).finite().unwrap();
            assert!((back - z).norm() < 1e-14);
        }
    }

    #[test]
    fn reduce_examples() {
        let (z, g) = reduce(c(6.0, 2.0)).unwrap();
        assert_eq!(z, c(0.0, 2.0));
        assert_eq!(g, GroupElement::translation(-6));
        let (z, g) = reduce(c(0.0, 0.5)).unwrap();
        assert!((z - c(0.0, 2.0)).norm() < 1e-15);
        assert_eq!(g, GroupElement::S);
        let t = c(0.1, 0.1);
        let (z, g) = reduce(t).unwrap();
        assert!(z.im >= 3f64.sqrt() / 2.0 - 1e-14);
        assert!((g.apply_c(t).finite().unwrap() - z).norm() < 1e-13);
        assert!(!g.conjugate_first);
    }

    #[test]
    fn reduce_is_stable_on_the_boundary() {
        let (z, g) = reduce(rho()).unwrap();
        assert!((z - rho()).norm() < 1e-15 || (z - rho() + 1.0).norm() < 1e-15);
        assert!(g.c == 0);
        assert!(matches!(reduce(c(0.3, -1.0)), Err(Error::NotInUpperHalfPlane(_))));
    }

    #[test]
    fn special_values() {
        let tol = 1e-12;
        let i = c(0.0, 1.0);
        assert!((eval_form(Form::E2, i, tol).unwrap().value - 3.0 / PI).norm() < 1e-12);
        assert!(eval_form(Form::E4, rho(), tol).unwrap().value.norm() < 1e-12);
        assert!((eval_form(Form::J, i, tol).unwrap().value - 1.0).norm() < 1e-12);
        assert!(eval_form(Form::J, rho(), tol).unwrap().value.norm() < 1e-12);
        let e2r = eval_form(Form::E2, rho(), tol).unwrap().value;
        assert!((e2r - 2.0 * 3f64.sqrt() / PI).norm() < 1e-12);
    }

    #[test]
    fn j_at_two_i_matches_direct_summation() {
        // direct summation at 2i with order 60, no reduction involved
        let t = c(0.0, 2.0);
        let q = q_of(t);
        let s = |f| named_series(f, 60).unwrap().eval_q(q);
        let (e4, e6) = (s(NamedForm::E4), s(NamedForm::E6));
        let oracle = e4 * e4 * e4 / (e4 * e4 * e4 - e6 * e6);
        let v = eval_form(Form::J, t, 1e-12).unwrap().value;
        assert!((v - oracle).norm() < 1e-9);
        assert!((v.re - 166.375).abs() < 1e-9);
    }

    #[test]
    fn d_values() {
        let tol = 1e-12;
        let i = c(0.0, 1.0);
        let e6r = eval_form(Form::E6, rho(), tol).unwrap().value;
        assert!((eval_d(DExpr::DE4, rho(), tol).unwrap() + e6r / 3.0).norm() < 1e-12);
        let e4i = eval_form(Form::E4, i, tol).unwrap().value;
        assert!((eval_d(DExpr::DE6, i, tol).unwrap() + e4i * e4i / 2.0).norm() < 1e-12);
    }

    #[test]
    fn de2_matches_finite_difference() {
        let t = c(0.3, 1.1);
        let h = 1e-5 * t.norm().max(1.0);
        let f = |z: Complex64| eval_form(Form::E2, z, 1e-12).unwrap().value;
        let fd = (f(t + h) - f(t - h)) / (2.0 * h) / Complex64::new(0.0, 2.0 * PI);
        assert!((fd - eval_d(DExpr::DE2, t, 1e-12).unwrap()).norm() < 1e-7);
    }

    #[test]
    fn combos_match_products_away_from_cusps() {
        let t = c(-0.37, 0.41);
        let e = Eisenstein::at(t).unwrap();
        let scale = e.e2.norm() * e.e4.norm() + e.e6.norm();
        assert!((e.p4 - (e.e2 * e.e4 - e.e6)).norm() < 1e-12 * scale);
        assert!((e.p6 - (e.e2 * e.e6 - e.e4 * e.e4)).norm() < 1e-12 * (e.e4.norm_sqr() + scale * e.e4.norm()));
        assert!((e.discriminant() - (e.e4.powi(3) - e.e6.powi(2))).norm() < 1e-10 * e.e4.norm().powi(3));
    }
}
