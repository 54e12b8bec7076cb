//! Fractional powers of Δ, the auxiliary systems (a1, a2), (b1, b2),
//! (c1, c2, f1, f2), their differential equations in τ, J and u, and the
//! Schwarzians in the J- and u-variables.

use crate::branch::root_near;
use crate::error::{Error, Result};
use crate::fd;
use crate::modular::Eisenstein;
use crate::polymorphic::{in_w, sqrt_e4_on_w};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Below this height the product for log Δ needs too many factors.
pub const MIN_LOG_DELTA_IM: f64 = 1e-3;
const SINGULAR_GUARD: f64 = 1e-3;
const SQRT3: f64 = 1.732_050_807_568_877_2;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn two_pi_i() -> Complex64 {
    c(0.0, TAU)
}

fn six_i_over_pi() -> Complex64 {
    c(0.0, 6.0 / PI)
}

/// log Δ = 2πiτ + 24 Σ Log(1 − qⁿ), the logarithm that is real on the
/// imaginary axis.
pub fn log_delta(tau: Complex64) -> Result<Complex64> {
    if !(tau.im > 0.0) {
        return Err(Error::NotInUpperHalfPlane(tau));
    }
    if tau.im < MIN_LOG_DELTA_IM {
        return Err(Error::ContinuationFailure(format!("product for log Δ too slow at Im τ = {}", tau.im)));
    }
    let mut sum = c(0.0, 0.0);
    let mut n = 1u32;
    loop {
        let qn = (two_pi_i() * tau * n as f64).exp();
        if qn.norm() < 1e-18 {
            break;
        }
        sum += (c(1.0, 0.0) - qn).ln();
        n += 1;
    }
    Ok(two_pi_i() * tau + sum * 24.0)
}

/// Δ^α, positive on the imaginary axis.
pub fn delta_power(alpha: f64, tau: Complex64) -> Result<Complex64> {
    Ok((log_delta(tau)? * alpha).exp())
}

/// J^{1/3} = E4/(12Δ^{1/3}) and (J−1)^{1/2} = E6/(24√3 Δ^{1/2}).
pub fn j_roots(tau: Complex64, tol: f64) -> Result<(Complex64, Complex64)> {
    let e = Eisenstein::checked(tau, tol)?;
    let l = log_delta(tau)?;
    Ok((e.e4 / (12.0 * (l / 3.0).exp()), e.e6 / (24.0 * SQRT3 * (l / 2.0).exp())))
}

/// DJ = −E4²E6/(1728Δ).
pub fn dj(e: &Eisenstein) -> Complex64 {
    -(e.e4 * e.e4 * e.e6) / e.discriminant()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AuxFamily {
    A,
    B,
    C,
}

/// (w1, w2) with w1/w2 equal to s4, s6 or s2+, plus (f1, f2) for family C.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuxVector {
    pub family: AuxFamily,
    pub w1: Complex64,
    pub w2: Complex64,
    pub f: Option<(Complex64, Complex64)>,
    pub tau: Complex64,
    pub normalization_note: &'static str,
}

const NOTE: &str = "Δ^α positive on the imaginary axis; √E4 from the W branch";

fn aux_with(family: AuxFamily, e: &Eisenstein, l: Complex64, root: Option<Complex64>) -> AuxVector {
    let tau = e.tau;
    let dp = |alpha: f64| (l * alpha).exp();
    let (w1, w2, f) = match family {
        AuxFamily::A => {
            let k = dp(-5.0 / 12.0);
            let a2 = k * e.p4;
            (tau * a2 - six_i_over_pi() * e.e4 * k, a2, None)
        }
        AuxFamily::B => {
            let k = dp(-7.0 / 12.0);
            let b2 = k * e.p6;
            (tau * b2 - six_i_over_pi() * e.e6 * k, b2, None)
        }
        AuxFamily::C => {
            let r = root.expect("family C needs a root of E4");
            let k1 = dp(-1.0 / 12.0);
            let k5 = dp(-5.0 / 12.0);
            let c2 = k1 * (e.e2 + r);
            let f2 = k5 * (e.e2 * e.e4 - r * r * r - e.e6 * 2.0);
            let c1 = tau * c2 - six_i_over_pi() * k1;
            let f1 = tau * f2 - six_i_over_pi() * k5 * e.e4;
            (c1, c2, Some((f1, f2)))
        }
    };
    AuxVector { family, w1, w2, f, tau, normalization_note: NOTE }
}

pub fn aux_vector(family: AuxFamily, tau: Complex64, tol: f64) -> Result<AuxVector> {
    let e = Eisenstein::checked(tau, tol)?;
    let root = if family == AuxFamily::C { Some(sqrt_e4_on_w(tau, tol)?) } else { None };
    Ok(aux_with(family, &e, log_delta(tau)?, root))
}

/// Family C near τ0 with the root continued locally from `anchor`.
fn aux_c_local(z: Complex64, anchor: Complex64, tol: f64) -> Result<AuxVector> {
    let e = Eisenstein::checked(z, tol)?;
    let r = root_near(e.e4, anchor);
    Ok(aux_with(AuxFamily::C, &e, log_delta(z)?, Some(r)))
}

fn d_fd<F>(f: F, tau: Complex64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    Ok(fd::derivative_richardson(f, tau, fd::schwarzian_step(tau))? / two_pi_i())
}

fn rel(lhs: Complex64, rhs: Complex64) -> f64 {
    (lhs - rhs).norm() / rhs.norm().max(lhs.norm()).max(1.0)
}

/// Worst relative mismatch of the first-order system at τ, with D taken by
/// finite differences. `perturbation` is added to the second component of
/// the partner family (b2 for the a/b system, f2 for the c system).
pub fn system_residual_perturbed(family: AuxFamily, tau: Complex64, tol: f64, perturbation: Complex64) -> Result<f64> {
    match family {
        AuxFamily::A | AuxFamily::B => {
            let e = Eisenstein::checked(tau, tol)?;
            let l = log_delta(tau)?;
            let a = aux_with(AuxFamily::A, &e, l, None);
            let b = aux_with(AuxFamily::B, &e, l, None);
            let (b1, b2) = (b.w1, b.w2 + perturbation);
            let d16 = (l / 6.0).exp();
            let comp = |fam: AuxFamily, first: bool| {
                move |z: Complex64| -> Result<Complex64> {
                    let v = aux_vector(fam, z, tol)?;
                    Ok(if first { v.w1 } else { v.w2 })
                }
            };
            let da1 = d_fd(comp(AuxFamily::A, true), tau)?;
            let da2 = d_fd(comp(AuxFamily::A, false), tau)?;
            let db1 = d_fd(comp(AuxFamily::B, true), tau)?;
            let db2 = d_fd(comp(AuxFamily::B, false), tau)?;
            let ka = -5.0 / 12.0 * d16;
            let kb = -7.0 / 12.0 * e.e4 / d16;
            Ok([rel(da2, ka * b2), rel(db2, kb * a.w2), rel(da1, ka * b1), rel(db1, kb * a.w1)].into_iter().fold(0.0, f64::max))
        }
        AuxFamily::C => {
            let e = Eisenstein::checked(tau, tol)?;
            let r = sqrt_e4_on_w(tau, tol)?;
            let l = log_delta(tau)?;
            let v = aux_with(AuxFamily::C, &e, l, Some(r));
            let (f1, f2) = v.f.expect("family C carries f");
            let f2 = f2 + perturbation;
            let pick = |k: usize| {
                move |z: Complex64| -> Result<Complex64> {
                    let w = aux_c_local(z, r, tol)?;
                    let (g1, g2) = w.f.expect("family C carries f");
                    Ok([w.w1, w.w2, g1, g2][k])
                }
            };
            let (dc1, dc2, df1, df2) = (d_fd(pick(0), tau)?, d_fd(pick(1), tau)?, d_fd(pick(2), tau)?, d_fd(pick(3), tau)?);
            let d13 = (l / 3.0).exp();
            let kc = d13 / (r * 12.0);
            let mix = (r * r * r * (5.0 / 12.0) - e.e6 * 0.5) / d13;
            Ok([
                rel(dc2, kc * f2),
                rel(df2, -r * 0.5 * f2 + mix * v.w2),
                rel(dc1, kc * f1),
                rel(df1, -r * 0.5 * f1 + mix * v.w1),
            ]
            .into_iter()
            .fold(0.0, f64::max))
        }
    }
}

pub fn system_residual(family: AuxFamily, tau: Complex64, tol: f64) -> Result<f64> {
    system_residual_perturbed(family, tau, tol, c(0.0, 0.0))
}

/// Coefficients p, q of w'' + p w' + q w = 0 in the variable J.
pub fn hypergeometric_coefficients(family: AuxFamily, j: Complex64) -> (Complex64, Complex64) {
    let jj = j * (j - 1.0);
    let p = match family {
        AuxFamily::B => (j * 5.0 - 2.0) / (jj * 6.0),
        _ => (j * 7.0 - 4.0) / (jj * 6.0),
    };
    (p, -35.0 / (jj * 144.0))
}

/// dw1/dJ and dw2/dJ from the exact system: Da = −(5/12)Δ^{1/6} b and
/// Db = −(7/12)E4Δ^{−1/6} a.
fn j_first_derivatives(family: AuxFamily, z: Complex64, tol: f64) -> Result<(AuxVector, Complex64, Complex64, Complex64)> {
    let e = Eisenstein::checked(z, tol)?;
    let l = log_delta(z)?;
    let a = aux_with(AuxFamily::A, &e, l, None);
    let b = aux_with(AuxFamily::B, &e, l, None);
    let d16 = (l / 6.0).exp();
    let djv = dj(&e);
    let (own, d1, d2) = match family {
        AuxFamily::A => (a, b.w1 * (-5.0 / 12.0) * d16, b.w2 * (-5.0 / 12.0) * d16),
        _ => (b, a.w1 * (-7.0 / 12.0) * e.e4 / d16, a.w2 * (-7.0 / 12.0) * e.e4 / d16),
    };
    Ok((own, d1 / djv, d2 / djv, e.j()))
}

fn guard_j(j: Complex64) -> Result<()> {
    if j.norm() < SINGULAR_GUARD || (j - 1.0).norm() < SINGULAR_GUARD {
        return Err(Error::NearSingularJ(j));
    }
    Ok(())
}

fn guard_u(u: Complex64) -> Result<()> {
    if (u - 1.0).norm() < SINGULAR_GUARD || (u + 1.0).norm() < SINGULAR_GUARD {
        return Err(Error::NearSingularU(u));
    }
    Ok(())
}

/// Relative residual of the hypergeometric equation for family a or b,
/// the worse of w1 and w2.
pub fn hypergeometric_residual(family: AuxFamily, tau: Complex64, tol: f64) -> Result<f64> {
    if family == AuxFamily::C {
        return fuchsian_residual(tau, tol);
    }
    let (own, dw1, dw2, j) = j_first_derivatives(family, tau, tol)?;
    guard_j(j)?;
    let e = Eisenstein::checked(tau, tol)?;
    let djv = dj(&e);
    let second = |k: usize| -> Result<Complex64> {
        let dd = d_fd(|z| j_first_derivatives(family, z, tol).map(|t| if k == 1 { t.1 } else { t.2 }), tau)?;
        Ok(dd / djv)
    };
    let (p, q) = hypergeometric_coefficients(family, j);
    let mut worst = 0.0f64;
    for (k, w, dw) in [(1, own.w1, dw1), (2, own.w2, dw2)] {
        let w2 = second(k)?;
        let terms = [w2, p * dw, q * w];
        let scale = terms.iter().map(|t| t.norm()).sum::<f64>();
        worst = worst.max((terms[0] + terms[1] + terms[2]).norm() / scale);
    }
    Ok(worst)
}

/// u = E6/E4^{3/2} and Du = −864Δ/E4^{5/2} for a given root of E4.
fn u_and_du(e: &Eisenstein, r: Complex64) -> (Complex64, Complex64) {
    let r2 = r * r;
    let r3 = r2 * r;
    (e.e6 / r3, -(e.delta * 864.0) / (r3 * r2))
}

fn u_first_derivatives(z: Complex64, anchor: Complex64, tol: f64) -> Result<(AuxVector, Complex64, Complex64, Complex64)> {
    let e = Eisenstein::checked(z, tol)?;
    let r = root_near(e.e4, anchor);
    let l = log_delta(z)?;
    let v = aux_with(AuxFamily::C, &e, l, Some(r));
    let (f1, f2) = v.f.expect("family C carries f");
    let (u, du) = u_and_du(&e, r);
    let k = (l / 3.0).exp() / (r * 12.0) / du;
    Ok((v, f1 * k, f2 * k, u))
}

/// Relative residual of the Fuchsian equation for c1, c2 in the variable u.
pub fn fuchsian_residual(tau: Complex64, tol: f64) -> Result<f64> {
    if !in_w(tau) {
        return Err(Error::OutsideW(tau));
    }
    let r = sqrt_e4_on_w(tau, tol)?;
    let (v, dc1, dc2, u) = u_first_derivatives(tau, r, tol)?;
    guard_u(u)?;
    let e = Eisenstein::checked(tau, tol)?;
    let (_, du) = u_and_du(&e, r);
    let one = c(1.0, 0.0) - u * u;
    let p = -(u * 4.0 + 3.0) / (one * 3.0);
    let q = (u * 6.0 - 5.0) / (one * one * 36.0);
    let mut worst = 0.0f64;
    for (k, w, dw) in [(1, v.w1, dc1), (2, v.w2, dc2)] {
        let dd = d_fd(|z| u_first_derivatives(z, r, tol).map(|t| if k == 1 { t.1 } else { t.2 }), tau)?;
        let terms = [dd / du, p * dw, q * w];
        let scale = terms.iter().map(|t| t.norm()).sum::<f64>();
        worst = worst.max((terms[0] + terms[1] + terms[2]).norm() / scale);
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SchwarzianVariable {
    /// {s4, J}
    S4J,
    /// {s6, J}
    S6J,
    /// {τ, J}
    TauJ,
    /// {s2+, u}
    S2U,
    /// {τ, u}
    TauU,
}

/// Closed-form Schwarzian in the J- or u-variable at the given point.
pub fn schwarzian_in_variable(which: SchwarzianVariable, point: Complex64) -> Result<Complex64> {
    let x = point;
    match which {
        SchwarzianVariable::S4J | SchwarzianVariable::S6J | SchwarzianVariable::TauJ => {
            if x.norm() == 0.0 || (x - 1.0).norm() == 0.0 {
                return Err(Error::SingularPoint(x));
            }
            let (a, cc) = match which {
                SchwarzianVariable::S4J => (4.0 / 9.0, 59.0 / 72.0),
                SchwarzianVariable::S6J => (5.0 / 18.0, 47.0 / 72.0),
                _ => (4.0 / 9.0, 23.0 / 72.0),
            };
            let one = c(1.0, 0.0) - x;
            Ok(a / (x * x) + 3.0 / (one * one * 8.0) + cc / (x * one))
        }
        SchwarzianVariable::S2U | SchwarzianVariable::TauU => {
            let one = c(1.0, 0.0) - x * x;
            if one.norm() == 0.0 {
                return Err(Error::SingularPoint(x));
            }
            Ok(match which {
                SchwarzianVariable::S2U => (x * x * 4.0 + x * 9.0 + 5.0) / (one * one * 9.0),
                _ => (x * x * 5.0 + 31.0) / (one * one * 18.0),
            })
        }
    }
}

/// {s_k, τ} assembled as ({s_k, J} − {τ, J})·J'² for k = 4 or 6.
pub fn schwarzian_via_j(which: SchwarzianVariable, tau: Complex64, tol: f64) -> Result<Complex64> {
    let e = Eisenstein::checked(tau, tol)?;
    let j = e.j();
    guard_j(j)?;
    let jp = two_pi_i() * dj(&e);
    Ok((schwarzian_in_variable(which, j)? - schwarzian_in_variable(SchwarzianVariable::TauJ, j)?) * jp * jp)
}

/// {s2+, τ} assembled as ({s2+, u} − {τ, u})·u'² on W.
pub fn schwarzian_via_u(tau: Complex64, tol: f64) -> Result<Complex64> {
    let r = sqrt_e4_on_w(tau, tol)?;
    let e = Eisenstein::checked(tau, tol)?;
    let (u, du) = u_and_du(&e, r);
    guard_u(u)?;
    let up = two_pi_i() * du;
    Ok((schwarzian_in_variable(SchwarzianVariable::S2U, u)? - schwarzian_in_variable(SchwarzianVariable::TauU, u)?) * up * up)
}

/// |w1·dw2/dJ − w2·dw1/dJ| for family a or b.
pub fn wronskian_j(family: AuxFamily, tau: Complex64, tol: f64) -> Result<f64> {
    let (own, d1, d2, _) = j_first_derivatives(family, tau, tol)?;
    Ok((own.w1 * d2 - own.w2 * d1).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branch::continue_log;
    use crate::modular::rho;
    use crate::polymorphic::{s_map, MapKey};

    const TOL: f64 = 1e-12;

    #[test]
    fn delta_powers() {
        for t in [c(0.0, 2.0), c(0.3, 0.4), c(-2.7, 0.05), c(0.49, 0.9)] {
            let d = Eisenstein::at(t).unwrap().delta;
            assert!((delta_power(1.0, t).unwrap() - d).norm() < 1e-12 * d.norm(), "{t}");
        }
        let v = delta_power(1.0 / 12.0, c(0.0, 2.0)).unwrap();
        assert!(v.re > 0.0 && v.im.abs() < 1e-15);
        assert!(matches!(log_delta(c(0.1, 1e-4)), Err(Error::ContinuationFailure(_))));
    }

    #[test]
    fn log_delta_agrees_with_path_continuation() {
        let target = c(0.37, 0.21);
        let path = [c(0.0, 2.0), c(0.0, 1.0), c(0.37, 1.0), target];
        let l = continue_log(|z| Ok(Eisenstein::at(z)?.delta), &path).unwrap();
        let l0 = log_delta(c(0.0, 2.0)).unwrap();
        assert!(l0.im.abs() < 1e-14);
        assert!((l - log_delta(target).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn logarithmic_derivative_of_delta_power() {
        let t = c(0.3, 1.5);
        let d = d_fd(|z| delta_power(1.0 / 6.0, z), t).unwrap();
        let e2 = Eisenstein::at(t).unwrap().e2;
        assert!((d / delta_power(1.0 / 6.0, t).unwrap() - e2 / 6.0).norm() < 1e-9);
    }

    #[test]
    fn ratios_are_the_maps() {
        let s = |k, t| s_map(k, t, TOL).unwrap().finite().unwrap();
        let a = aux_vector(AuxFamily::A, c(0.0, 2.0), TOL).unwrap();
        assert!((a.w1 / a.w2 - s(MapKey::S4, c(0.0, 2.0))).norm() < 1e-10);
        let t = c(1.0 / 3.0, 1.2);
        let b = aux_vector(AuxFamily::B, t, TOL).unwrap();
        assert!((b.w1 / b.w2 - s(MapKey::S6, t)).norm() < 1e-10);
        let cc = aux_vector(AuxFamily::C, c(0.0, 2.0), TOL).unwrap();
        assert!((cc.w1 / cc.w2 - s(MapKey::S2Plus, c(0.0, 2.0))).norm() < 1e-10);
    }

    #[test]
    fn first_order_systems() {
        let t = c(0.0, 2.0);
        assert!(system_residual(AuxFamily::A, t, TOL).unwrap() < 1e-6);
        assert!(system_residual(AuxFamily::C, t, TOL).unwrap() < 1e-6);
        let b2 = aux_vector(AuxFamily::B, t, TOL).unwrap().w2;
        let bumped = system_residual_perturbed(AuxFamily::A, t, TOL, b2 * 1e-3).unwrap();
        assert!(bumped > 1e-4, "{bumped}");
    }

    #[test]
    fn second_order_equations() {
        assert!(hypergeometric_residual(AuxFamily::A, c(0.0, 2.0), TOL).unwrap() < 1e-5);
        assert!(hypergeometric_residual(AuxFamily::B, c(0.25, 1.3), TOL).unwrap() < 1e-5);
        assert!(fuchsian_residual(c(0.0, 2.0), TOL).unwrap() < 1e-5);
        let (p, _) = hypergeometric_coefficients(AuxFamily::A, c(2.0, 0.0));
        assert!((p - 5.0 / 6.0).norm() < 1e-15);
        assert!(matches!(hypergeometric_residual(AuxFamily::A, c(0.0, 1.0), TOL), Err(Error::NearSingularJ(_))));
        assert!(matches!(hypergeometric_residual(AuxFamily::B, rho() + c(1e-5, 0.0), TOL), Err(Error::NearSingularJ(_))));
    }

    #[test]
    fn u_variable_identities() {
        let t = c(0.2, 1.6);
        let e = Eisenstein::at(t).unwrap();
        let r = sqrt_e4_on_w(t, TOL).unwrap();
        let (u, _) = u_and_du(&e, r);
        let rhs = e.delta * 1728.0 / (e.e4 * e.e4 * e.e4);
        assert!((c(1.0, 0.0) - u * u - rhs).norm() < 1e-10);
        let t = c(0.0, 2.0);
        let e = Eisenstein::at(t).unwrap();
        let r = sqrt_e4_on_w(t, TOL).unwrap();
        let (u, _) = u_and_du(&e, r);
        let e4 = (c(1.0, 0.0) - u * u).powf(-1.0 / 3.0) * delta_power(1.0 / 3.0, t).unwrap() * 12.0;
        assert!((e4 - e.e4).norm() < 1e-10);
    }

    #[test]
    fn schwarzian_chain_rules() {
        let v = schwarzian_in_variable(SchwarzianVariable::S4J, c(-1.0, 0.0)).unwrap();
        assert!((v - c(4.0 / 9.0 + 3.0 / 32.0 - 59.0 / 144.0, 0.0)).norm() < 1e-15);
        let t = c(0.0, 2.0);
        let e4 = Eisenstein::at(t).unwrap().e4;
        let s4 = schwarzian_via_j(SchwarzianVariable::S4J, t, TOL).unwrap();
        assert!((s4 - e4 * 2.0 * PI * PI).norm() < 1e-5 * s4.norm());
        let t = c(1.0 / 3.0, 1.5);
        let e = Eisenstein::at(t).unwrap();
        let s6 = schwarzian_via_j(SchwarzianVariable::S6J, t, TOL).unwrap();
        let cf = (e.e6 * e.e6 + e.e4 * e.e4 * e.e4 * 2.0) * (2.0 * PI * PI / 3.0) / (e.e4 * e.e4);
        assert!((s6 - cf).norm() < 1e-5 * cf.norm());
        let t = c(0.1, 1.3);
        let s2 = schwarzian_via_u(t, TOL).unwrap();
        let cf = crate::polymorphic::schwarzian(MapKey::S2Plus, t, TOL).unwrap();
        assert!((s2 - cf).norm() < 1e-9 * cf.norm());
        assert!(schwarzian_in_variable(SchwarzianVariable::TauJ, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn j_root_branches() {
        for t in [c(0.0, 2.0), c(0.3, 1.1), c(-0.4, 0.7)] {
            let e = Eisenstein::at(t).unwrap();
            let (j3, j1) = j_roots(t, TOL).unwrap();
            let j = e.j();
            assert!((j3 * j3 * j3 - j).norm() < 1e-9 * j.norm());
            assert!((j1 * j1 - (j - 1.0)).norm() < 1e-9 * j.norm());
            let e6 = j1 * delta_power(0.5, t).unwrap() * 24.0 * SQRT3;
            assert!((e6 - e.e6).norm() < 1e-9 * e.e6.norm().max(1.0));
        }
        let (j3, j1) = j_roots(c(0.0, 3.0), TOL).unwrap();
        assert!(j3.re > 0.0 && j1.re > 0.0);
    }

    #[test]
    fn wronskians_are_nonzero() {
        for t in [c(0.0, 2.0), c(0.2, 1.1)] {
            assert!(wronskian_j(AuxFamily::A, t, TOL).unwrap() > 1e-8);
            assert!(wronskian_j(AuxFamily::B, t, TOL).unwrap() > 1e-8);
        }
    }
}
