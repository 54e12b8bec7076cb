//! Verification suites: identities at seeded random samples, the boundary
//! behaviour of s4, s6, s2± on T0 and U0, and critical-point counts over 𝒱.

use crate::critical::{truncated_boundary, winding, CriticalForm, Target, DEFAULT_QUAD_POINTS, DEFAULT_TRUNCATION};
use crate::error::Result;
use crate::ext::{ExtComplex, Finite, Infinity};
use crate::fd;
use crate::geometry::{canonical, tessellate, ArcTriangle, Canonical, Family, SideArc};
use crate::modular::{rho, Eisenstein, GroupElement};
use crate::ode::{self, AuxFamily, SchwarzianVariable};
use crate::polymorphic::{in_w, map_fraction, s2_pair, s_derivative, s_map, schwarzian, MapKey};
use crate::qseries::{d_operator, eval_series, integer_coefficients, named_series, NamedForm};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_3, PI, TAU};
use std::fmt;
use std::str::FromStr;

const EVAL_TOL: f64 = 1e-12;
/// Arc-length distance kept between boundary samples and vertices.
pub const VERTEX_MARGIN: f64 = 1e-3;
/// Samples on sides ending at the cusp 0 stop at this distance, where the
/// images are still above the floating-point underflow threshold.
pub const CUSP_ZERO_MARGIN: f64 = 0.02;
/// Height where samples on sides through ∞ stop.
pub const FAR: f64 = 8.0;
pub const MAX_COUNT_DEPTH: usize = 3;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub status: Status,
    pub worst_residual: f64,
    pub tolerance: f64,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl Check {
    /// Passes iff `worst <= tol`; NaN fails.
    pub fn bound(id: impl Into<String>, worst: f64, tol: f64, samples: usize) -> Check {
        let status = if worst <= tol { Status::Pass } else { Status::Fail };
        Check { id: id.into(), status, worst_residual: worst, tolerance: tol, samples, note: None }
    }

    fn errored(id: impl Into<String>, tol: f64, err: impl fmt::Display) -> Check {
        Check { id: id.into(), status: Status::Fail, worst_residual: f64::INFINITY, tolerance: tol, samples: 0, note: Some(err.to_string()) }
    }

    fn from_result(id: &str, tol: f64, r: Result<(f64, usize)>) -> Check {
        match r {
            Ok((worst, n)) => Check::bound(id, worst, tol, n),
            Err(e) => Check::errored(id, tol, e),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub overall: Status,
}

impl CheckReport {
    pub fn new(suite: impl Into<String>, checks: Vec<Check>) -> CheckReport {
        let failed = checks.iter().any(|c| c.status == Status::Fail);
        CheckReport { suite: suite.into(), checks, overall: if failed { Status::Fail } else { Status::Pass } }
    }

    pub fn passed(&self) -> bool {
        self.overall == Status::Pass
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// Concatenates reports, prefixing check ids with their suite names.
    pub fn merge(suite: impl Into<String>, parts: Vec<CheckReport>) -> CheckReport {
        let checks = parts
            .into_iter()
            .flat_map(|r| {
                let name = r.suite;
                r.checks.into_iter().map(move |mut c| {
                    c.id = format!("{name}/{}", c.id);
                    c
                })
            })
            .collect();
        CheckReport::new(suite, checks)
    }
}

/// Multiplier applied to every tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolProfile {
    pub factor: f64,
}

impl TolProfile {
    pub const DEFAULT: TolProfile = TolProfile { factor: 1.0 };
    pub const STRICT: TolProfile = TolProfile { factor: 0.5 };

    fn tol(&self, t: f64) -> f64 {
        t * self.factor
    }
}

/// Deliberate defects for checking that the suites detect them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Mutation {
    #[default]
    None,
    /// The closed-form s4' with its sign flipped.
    FlipS4Derivative,
}

fn derivative_under(m: Mutation, k: MapKey, tau: Complex64) -> Result<Complex64> {
    let d = s_derivative(k, tau, EVAL_TOL)?;
    Ok(if m == Mutation::FlipS4Derivative && k == MapKey::S4 { -d } else { d })
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn random_tau(r: &mut ChaCha8Rng, re: (f64, f64), im: (f64, f64)) -> Complex64 {
    c(r.gen_range(re.0..re.1), r.gen_range(im.0..im.1))
}

/// Uniform over SL2(ℤ) matrices with entries in [−4, 4].
fn random_element(r: &mut ChaCha8Rng) -> GroupElement {
    loop {
        let mut e = [0i64; 4];
        for x in &mut e {
            *x = r.gen_range(-4..=4);
        }
        if e[0] * e[3] - e[1] * e[2] == 1 {
            return GroupElement::new(e[0], e[1], e[2], e[3], false).expect("determinant one");
        }
    }
}

/// Random points of W away from its vertices.
fn random_w(r: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let z = random_tau(r, (-0.5, 0.5), (0.1, 2.5));
        if in_w(z) && (z - rho()).norm() > 0.05 && (z - rho() + 1.0).norm() > 0.05 && z.norm() > 0.05 {
            return z;
        }
    }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

fn max_of(it: impl IntoIterator<Item = Result<f64>>) -> Result<(f64, usize)> {
    let mut worst = 0.0f64;
    let mut n = 0;
    for v in it {
        let v = v?;
        worst = if v.is_nan() { f64::NAN } else { worst.max(v) };
        n += 1;
    }
    Ok((worst, n))
}

fn finite(v: ExtComplex) -> Result<Complex64> {
    v.finite().ok_or(crate::Error::PoleAtPoint(c(f64::NAN, f64::NAN)))
}

type CheckFn = Box<dyn Fn() -> Check + Send + Sync>;

fn run(suite: &str, checks: Vec<CheckFn>) -> CheckReport {
    let results: Vec<Check> = checks.par_iter().map(|f| f()).collect();
    CheckReport::new(suite, results)
}

// ---------------------------------------------------------------- identities

fn special_values() -> Result<(f64, usize)> {
    let i = c(0.0, 1.0);
    let ei = Eisenstein::at(i)?;
    let er = Eisenstein::at(rho())?;
    let vals = [
        (ei.e2 - 3.0 / PI).norm(),
        (er.e2 - 2.0 * 3f64.sqrt() / PI).norm(),
        er.e4.norm(),
        ei.e6.norm(),
        (ei.j() - 1.0).norm(),
        er.j().norm(),
    ];
    Ok((vals.into_iter().fold(0.0, f64::max), vals.len()))
}

fn direct(form: NamedForm, tau: Complex64) -> Result<Complex64> {
    Ok(eval_series(&named_series(form, 64)?, tau, 1e-15)?.0)
}

fn transformation(seed: u64, weight: u32) -> Result<(f64, usize)> {
    let mut r = rng(seed, 10 + weight as u64);
    let form = match weight {
        2 => NamedForm::E2,
        4 => NamedForm::E4,
        _ => NamedForm::E6,
    };
    max_of((0..100).map(|_| {
        let tau = random_tau(&mut r, (-0.5, 0.5), (0.6, 2.0));
        let g = random_element(&mut r);
        let gt = finite(g.apply(Finite(tau)))?;
        let x = g.cocycle(tau);
        let lhs = Eisenstein::at(gt)?;
        let lhs = match weight {
            2 => lhs.e2,
            4 => lhs.e4,
            _ => lhs.e6,
        };
        let base = direct(form, tau)? * x.powu(weight);
        if weight == 2 {
            let corr = c(0.0, -6.0 / PI) * (x * g.c as f64);
            Ok((lhs - base - corr).norm() / (base.norm() + corr.norm()))
        } else {
            Ok(rel(lhs, base))
        }
    }))
}

/// Coefficient mismatches in 12DE2 = E2² − E4, 3DE4 = E2E4 − E6,
/// 2DE6 = E2E6 − E4² and DΔ = E2Δ through order 32.
fn ramanujan_series() -> Result<(f64, usize)> {
    const N: usize = 32;
    let e2 = integer_coefficients(NamedForm::E2, N)?;
    let e4 = integer_coefficients(NamedForm::E4, N)?;
    let e6 = integer_coefficients(NamedForm::E6, N)?;
    // Δ is stored from q¹
    let mut dl = vec![0i128];
    dl.extend(integer_coefficients(NamedForm::Delta, N)?);
    let mul = |a: &[i128], b: &[i128], n: usize| (0..=n).map(|k| a[k] * b[n - k]).sum::<i128>();
    let mut bad = 0usize;
    for n in 0..=N {
        let ni = n as i128;
        bad += (12 * ni * e2[n] != mul(&e2, &e2, n) - e4[n]) as usize;
        bad += (3 * ni * e4[n] != mul(&e2, &e4, n) - e6[n]) as usize;
        bad += (2 * ni * e6[n] != mul(&e2, &e6, n) - mul(&e4, &e4, n)) as usize;
        bad += (ni * dl[n] != mul(&e2, &dl, n)) as usize;
    }
    Ok((bad as f64, 4 * (N + 1)))
}

fn ramanujan_sampled(seed: u64) -> Result<(f64, usize)> {
    let mut r = rng(seed, 20);
    let d = |f: NamedForm| -> Result<_> { Ok(d_operator(&named_series(f, 64)?)) };
    let (d2, d4, d6, dd) = (d(NamedForm::E2)?, d(NamedForm::E4)?, d(NamedForm::E6)?, d(NamedForm::Delta)?);
    max_of((0..50).map(|_| {
        let tau = random_tau(&mut r, (-0.5, 0.5), (0.8, 2.0));
        let e = Eisenstein::at(tau)?;
        let ev = |s| -> Result<Complex64> { Ok(eval_series(s, tau, 1e-15)?.0) };
        let parts = [
            (ev(&d2)? * 12.0, e.e2 * e.e2 - e.e4, e.e2.norm_sqr() + e.e4.norm()),
            (ev(&d4)? * 3.0, e.e2 * e.e4 - e.e6, (e.e2 * e.e4).norm() + e.e6.norm()),
            (ev(&d6)? * 2.0, e.e2 * e.e6 - e.e4 * e.e4, (e.e2 * e.e6).norm() + e.e4.norm_sqr()),
            (ev(&dd)?, e.e2 * e.delta, (e.e2 * e.delta).norm()),
        ];
        Ok(parts.iter().map(|(a, b, m)| (a - b).norm() / m).fold(0.0, f64::max))
    }))
}

fn map_values() -> Result<(f64, usize)> {
    let i = c(0.0, 1.0);
    let r = rho();
    let cases = [(MapKey::S4, i, -i), (MapKey::S4, r, r), (MapKey::S6, i, i), (MapKey::S6, r, r.conj()), (MapKey::S2Plus, r, r.conj()), (MapKey::S2Minus, r, r.conj())];
    max_of(cases.iter().map(|&(k, t, w)| Ok(s_map(k, t, EVAL_TOL)?.chordal(&Finite(w)))))
}

/// Relative mismatch of s(4i) − 4i with its leading q-term.
fn q_asymptotics() -> Result<(f64, usize)> {
    let tau = c(0.0, 4.0);
    let qinv = (c(0.0, -TAU) * tau).exp();
    let cases = [
        (MapKey::S4, c(0.0, -1.0 / (120.0 * PI)) * qinv),
        (MapKey::S6, c(0.0, 1.0 / (168.0 * PI)) * qinv),
        (MapKey::S2Plus, c(0.0, -3.0 / PI)),
        (MapKey::S2Minus, c(0.0, 1.0 / (24.0 * PI)) * qinv),
    ];
    max_of(cases.iter().map(|&(k, lead)| Ok(rel(finite(s_map(k, tau, EVAL_TOL)?)? - tau, lead))))
}

fn derivative_values(m: Mutation) -> Result<(f64, usize)> {
    let i = c(0.0, 1.0);
    let cases = [(MapKey::S4, rho(), c(5.0, 0.0)), (MapKey::S6, i, c(7.0, 0.0)), (MapKey::S6, rho(), c(0.0, 0.0))];
    max_of(cases.iter().map(|&(k, t, v)| Ok((derivative_under(m, k, t)? - v).norm())))
}

fn sample_points(k: MapKey, r: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    let mut out = Vec::new();
    while out.len() < n {
        let z = if k.branch().is_some() { random_w(r) } else { random_tau(r, (-0.5, 0.5), (0.7, 2.0)) };
        // stay clear of poles and of the zeros of s'
        let ok = s_map(k, z, EVAL_TOL).ok().and_then(|v| v.finite()).is_some_and(|v| v.norm() < 1e3)
            && s_derivative(k, z, EVAL_TOL).is_ok_and(|d| d.norm() > 1e-3 && d.norm() < 1e3);
        if ok {
            out.push(z);
        }
    }
    out
}

/// Largest |f''/f'| tolerated at a Schwarzian sample, for f = s or 1/s.
const SCHWARZIAN_KAPPA: f64 = 3.0;

/// |s''/s'| and |(1/s)''/(1/s)'| = |s''/s' − 2s'/s|, with s'' by central
/// differences of the closed-form s'.
fn curvature_scales(k: MapKey, z: Complex64) -> Result<(f64, f64)> {
    let h = fd::first_step(z);
    let d = |w| s_derivative(k, w, EVAL_TOL);
    let (d0, s0) = (d(z)?, finite(s_map(k, z, EVAL_TOL)?)?);
    let ratio = (d(z + h)? - d(z - h)?) / (2.0 * h) / d0;
    Ok((ratio.norm(), (ratio - d0 * 2.0 / s0).norm()))
}

/// Sample points for the FD Schwarzian, each with the Möbius image (s or
/// 1/s) that varies on the larger length scale. Points where neither is
/// smooth on the stencil scale are skipped, and s2+ stencils stay inside W.
fn schwarzian_points(k: MapKey, r: &mut ChaCha8Rng, n: usize) -> Result<Vec<(Complex64, bool)>> {
    let mut out = Vec::new();
    while out.len() < n {
        let z = sample_points(k, r, 1)[0];
        // one Richardson level reaches z ± 4h
        let h = 4.5 * fd::schwarzian_step(z);
        if k.branch().is_some() && !(in_w(z - h) && in_w(z + h)) {
            continue;
        }
        let (plain, flipped) = curvature_scales(k, z)?;
        if plain.min(flipped) <= SCHWARZIAN_KAPPA {
            out.push((z, flipped < plain));
        }
    }
    Ok(out)
}

fn derivative_fd(seed: u64, m: Mutation) -> Result<(f64, usize)> {
    let mut worst = 0.0f64;
    let mut n = 0;
    for (j, k) in MapKey::ALL.into_iter().enumerate() {
        let mut r = rng(seed, 30 + j as u64);
        for z in sample_points(k, &mut r, 20) {
            let num = fd::derivative(|w| finite(s_map(k, w, EVAL_TOL)?), z, fd::first_step(z))?;
            worst = worst.max(rel(derivative_under(m, k, z)?, num));
            n += 1;
        }
    }
    Ok((worst, n))
}

fn schwarzian_fd(seed: u64) -> Result<(f64, usize)> {
    let mut worst = 0.0f64;
    let mut n = 0;
    for (j, k) in [MapKey::S4, MapKey::S6, MapKey::S2Plus].into_iter().enumerate() {
        let mut r = rng(seed, 40 + j as u64);
        for (z, flip) in schwarzian_points(k, &mut r, 10)? {
            // {1/s, τ} = {s, τ}
            let f = |w| finite(s_map(k, w, EVAL_TOL)?).map(|v| if flip { v.inv() } else { v });
            let num = fd::schwarzian(f, z, fd::schwarzian_step(z))?;
            // the Schwarzian of s2+ decays like q toward i∞
            let exact = schwarzian(k, z, EVAL_TOL)?;
            worst = worst.max((exact - num).norm() / exact.norm().max(1.0));
            n += 1;
        }
    }
    Ok((worst, n))
}

fn schwarzian_chain(seed: u64) -> Result<(f64, usize)> {
    let mut r = rng(seed, 50);
    let mut worst = 0.0f64;
    let mut n = 0;
    while n < 10 {
        let z = random_tau(&mut r, (-0.5, 0.5), (0.9, 2.0));
        let e = Eisenstein::at(z)?;
        let j = e.j();
        if j.norm() < 0.05 || (j - 1.0).norm() < 0.05 || e.e4.norm() < 0.05 {
            continue;
        }
        worst = worst.max(rel(ode::schwarzian_via_j(SchwarzianVariable::S4J, z, EVAL_TOL)?, schwarzian(MapKey::S4, z, EVAL_TOL)?));
        worst = worst.max(rel(ode::schwarzian_via_j(SchwarzianVariable::S6J, z, EVAL_TOL)?, schwarzian(MapKey::S6, z, EVAL_TOL)?));
        if in_w(z) {
            worst = worst.max(rel(ode::schwarzian_via_u(z, EVAL_TOL)?, schwarzian(MapKey::S2Plus, z, EVAL_TOL)?));
        }
        n += 1;
    }
    Ok((worst, n))
}

fn equivariance_46(seed: u64) -> Result<(f64, usize)> {
    let mut r = rng(seed, 60);
    max_of((0..50).map(|_| {
        let tau = random_tau(&mut r, (-0.5, 0.5), (0.7, 2.0));
        let g = random_element(&mut r);
        let gt = finite(g.apply(Finite(tau)))?;
        let mut w = 0.0f64;
        for k in [MapKey::S4, MapKey::S6] {
            w = w.max(s_map(k, gt, EVAL_TOL)?.chordal(&g.apply(s_map(k, tau, EVAL_TOL)?)));
        }
        Ok(w)
    }))
}

fn set_distance(a: &[ExtComplex], b: &[ExtComplex]) -> f64 {
    let one = |x: &ExtComplex, ys: &[ExtComplex]| ys.iter().map(|y| x.chordal(y)).fold(f64::INFINITY, f64::min);
    let ab = a.iter().map(|x| one(x, b)).fold(0.0, f64::max);
    let ba = b.iter().map(|y| one(y, a)).fold(0.0, f64::max);
    ab.max(ba)
}

fn equivariance_s2_set(seed: u64) -> Result<(f64, usize)> {
    let mut r = rng(seed, 61);
    max_of((0..50).map(|_| {
        let tau = random_tau(&mut r, (-0.5, 0.5), (0.7, 2.0));
        let g = random_element(&mut r);
        let gt = finite(g.apply(Finite(tau)))?;
        let lhs = s2_pair(gt, EVAL_TOL)?;
        let rhs: Vec<ExtComplex> = s2_pair(tau, EVAL_TOL)?.into_iter().map(|v| g.apply(v)).collect();
        Ok(set_distance(&lhs, &rhs))
    }))
}

fn branch_swap(seed: u64) -> Result<(f64, usize)> {
    let mut r = rng(seed, 62);
    let mut worst = 0.0f64;
    let mut n = 0;
    while n < 50 {
        let tau = random_w(&mut r);
        let st = -tau.inv();
        if !in_w(st) {
            continue;
        }
        let lhs = s_map(MapKey::S2Plus, st, EVAL_TOL)?;
        let rhs = GroupElement::S.apply(s_map(MapKey::S2Minus, tau, EVAL_TOL)?);
        worst = worst.max(lhs.chordal(&rhs));
        n += 1;
    }
    Ok((worst, n))
}

fn reflection_46(seed: u64) -> Result<(f64, usize)> {
    let mut r = rng(seed, 63);
    max_of((0..50).map(|_| {
        let tau = random_tau(&mut r, (-0.5, 0.5), (0.7, 2.0));
        let mut w = 0.0f64;
        for k in [MapKey::S4, MapKey::S6] {
            w = w.max(s_map(k, -tau.conj(), EVAL_TOL)?.chordal(&s_map(k, tau, EVAL_TOL)?.conj().negated()));
        }
        Ok(w)
    }))
}

trait Negate {
    fn negated(self) -> Self;
}

impl Negate for ExtComplex {
    fn negated(self) -> Self {
        match self {
            Finite(z) => Finite(-z),
            Infinity => Infinity,
        }
    }
}

/// Interior sample points of a hyperbolic triangle, on a deterministic grid
/// clipped at Im ≤ `top`, kept `margin` away from the boundary.
fn interior_grid(tri: &ArcTriangle, n: usize, top: f64, margin: f64) -> Vec<Complex64> {
    let (x0, x1, y0, y1) = tri.bounding_box(top);
    let mut m = (n as f64).sqrt().ceil() as usize;
    loop {
        let mut out = Vec::new();
        for i in 0..m {
            for j in 0..m {
                let z = c(x0 + (x1 - x0) * (i as f64 + 0.5) / m as f64, y0 + (y1 - y0) * (j as f64 + 0.5) / m as f64);
                if tri.contains_strictly(z, margin) {
                    out.push(z);
                }
            }
        }
        if out.len() >= n {
            let stride = out.len() as f64 / n as f64;
            return (0..n).map(|k| out[(k as f64 * stride) as usize]).collect();
        }
        m += m / 2 + 1;
    }
}

/// Re(1/(τ − s4)) on T0, Re(1/(s6 − τ)) on T0 and Im((iπ/6)(E2 + √E4)) on U0,
/// reported as the number of samples where positivity fails.
fn positivity(which: MapKey) -> Result<(f64, usize)> {
    let (tri, n) = match which {
        MapKey::S2Plus => (canonical(Canonical::U0), 500),
        _ => (canonical(Canonical::T0), 500),
    };
    let pts = interior_grid(&tri, n, 3.0, 1e-6);
    let mut bad = 0usize;
    for z in &pts {
        let e = Eisenstein::checked(*z, EVAL_TOL)?;
        // τ − s = (6i/π)·N/D, so 1/(τ − s) = πD/(6iN)
        let g = |num: Complex64, den: Complex64| den * PI / (c(0.0, 6.0) * num);
        let v = match which {
            MapKey::S4 => g(e.e4, e.p4).re,
            MapKey::S6 => -g(e.e6, e.p6).re,
            _ => (c(0.0, PI / 6.0) * (e.e2 + crate::polymorphic::sqrt_e4_on_w(*z, EVAL_TOL)?)).im,
        };
        bad += (!(v > 0.0)) as usize;
    }
    Ok((bad as f64, pts.len()))
}

fn ode_ratios(seed: u64) -> Result<(f64, usize)> {
    let mut worst = 0.0f64;
    let mut n = 0;
    for (j, (fam, key)) in [(AuxFamily::A, MapKey::S4), (AuxFamily::B, MapKey::S6), (AuxFamily::C, MapKey::S2Plus)].into_iter().enumerate() {
        let mut r = rng(seed, 70 + j as u64);
        for z in sample_points(key, &mut r, 50) {
            let v = ode::aux_vector(fam, z, EVAL_TOL)?;
            worst = worst.max(rel(v.w1 / v.w2, finite(s_map(key, z, EVAL_TOL)?)?));
            n += 1;
        }
    }
    Ok((worst, n))
}

fn ode_points(seed: u64, stream: u64, n: usize, on_w: bool) -> Result<Vec<Complex64>> {
    let mut r = rng(seed, stream);
    let mut out = Vec::new();
    while out.len() < n {
        let z = if on_w { random_w(&mut r) } else { random_tau(&mut r, (-0.5, 0.5), (0.8, 2.0)) };
        let e = Eisenstein::at(z)?;
        let j = e.j();
        // u² = 1 − 1/J, so a bound on |J| keeps u away from ±1
        if j.norm() < 0.05 || (j - 1.0).norm() < 0.05 || j.norm() > 20.0 {
            continue;
        }
        out.push(z);
    }
    Ok(out)
}

fn ode_systems(seed: u64) -> Result<(f64, usize)> {
    let mut pts: Vec<(AuxFamily, Complex64)> = ode_points(seed, 80, 20, false)?.into_iter().map(|z| (AuxFamily::A, z)).collect();
    pts.extend(ode_points(seed, 81, 20, true)?.into_iter().map(|z| (AuxFamily::C, z)));
    max_of(pts.into_iter().map(|(f, z)| ode::system_residual(f, z, EVAL_TOL)))
}

fn ode_hypergeometric(seed: u64) -> Result<(f64, usize)> {
    let mut pts: Vec<(AuxFamily, Complex64)> = ode_points(seed, 82, 10, false)?.into_iter().map(|z| (AuxFamily::A, z)).collect();
    pts.extend(ode_points(seed, 83, 10, false)?.into_iter().map(|z| (AuxFamily::B, z)));
    max_of(pts.into_iter().map(|(f, z)| ode::hypergeometric_residual(f, z, EVAL_TOL)))
}

fn ode_fuchsian(seed: u64) -> Result<(f64, usize)> {
    let pts = ode_points(seed, 84, 10, true)?;
    max_of(pts.into_iter().map(|z| ode::fuchsian_residual(z, EVAL_TOL)))
}

/// Checks of the auxiliary systems and of their differential equations.
pub fn ode_suite(seed: u64, profile: TolProfile) -> CheckReport {
    let p = profile;
    let checks: Vec<CheckFn> = vec![
        Box::new(move || Check::from_result("ratios", p.tol(1e-9), ode_ratios(seed))),
        Box::new(move || Check::from_result("first-order-systems", p.tol(1e-6), ode_systems(seed))),
        Box::new(move || Check::from_result("hypergeometric", p.tol(1e-5), ode_hypergeometric(seed))),
        Box::new(move || Check::from_result("fuchsian", p.tol(1e-5), ode_fuchsian(seed))),
    ];
    run("ode", checks)
}

/// Every identity at seeded samples, with an optional injected defect.
pub fn identity_suite_with(seed: u64, profile: TolProfile, mutation: Mutation) -> CheckReport {
    let p = profile;
    let m = mutation;
    let checks: Vec<CheckFn> = vec![
        Box::new(move || Check::from_result("special-values", p.tol(1e-12), special_values())),
        Box::new(move || Check::from_result("transformation-E2", p.tol(1e-10), transformation(seed, 2))),
        Box::new(move || Check::from_result("transformation-E4", p.tol(1e-10), transformation(seed, 4))),
        Box::new(move || Check::from_result("transformation-E6", p.tol(1e-10), transformation(seed, 6))),
        Box::new(move || Check::from_result("ramanujan-series", 0.0, ramanujan_series())),
        Box::new(move || Check::from_result("ramanujan-sampled", p.tol(1e-10), ramanujan_sampled(seed))),
        Box::new(move || Check::from_result("map-values", p.tol(1e-10), map_values())),
        Box::new(move || Check::from_result("q-asymptotics", p.tol(1e-2), q_asymptotics())),
        Box::new(move || Check::from_result("derivative-values", p.tol(1e-9), derivative_values(m))),
        Box::new(move || Check::from_result("derivative-fd", p.tol(1e-6), derivative_fd(seed, m))),
        Box::new(move || Check::from_result("schwarzian-fd", p.tol(1e-5), schwarzian_fd(seed))),
        Box::new(move || Check::from_result("schwarzian-chain-rule", p.tol(1e-5), schwarzian_chain(seed))),
        Box::new(move || Check::from_result("equivariance-s4-s6", p.tol(1e-9), equivariance_46(seed))),
        Box::new(move || Check::from_result("equivariance-s2-set", p.tol(1e-9), equivariance_s2_set(seed))),
        Box::new(move || Check::from_result("branch-swap", p.tol(1e-9), branch_swap(seed))),
        Box::new(move || Check::from_result("reflection-s4-s6", p.tol(1e-9), reflection_46(seed))),
        Box::new(move || Check::from_result("positivity-s4", 0.0, positivity(MapKey::S4))),
        Box::new(move || Check::from_result("positivity-s6", 0.0, positivity(MapKey::S6))),
        Box::new(move || Check::from_result("positivity-s2+", 0.0, positivity(MapKey::S2Plus))),
    ];
    let mut report = run("identities", checks);
    let ode = ode_suite(seed, profile);
    report.checks.extend(ode.checks.into_iter().map(|mut c| {
        c.id = format!("ode-{}", c.id);
        c
    }));
    CheckReport::new("identities", report.checks)
}

pub fn identity_suite(seed: u64, profile: TolProfile) -> CheckReport {
    identity_suite_with(seed, profile, Mutation::None)
}

// ------------------------------------------------------------------ mapping

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Theorem {
    S4,
    S6,
    S2Plus,
    S2Minus,
}

impl Theorem {
    pub const ALL: [Theorem; 4] = [Theorem::S4, Theorem::S6, Theorem::S2Plus, Theorem::S2Minus];

    pub fn name(&self) -> &'static str {
        match self {
            Theorem::S4 => "s4",
            Theorem::S6 => "s6",
            Theorem::S2Plus => "s2plus",
            Theorem::S2Minus => "s2minus",
        }
    }

    pub fn map(&self) -> MapKey {
        match self {
            Theorem::S4 => MapKey::S4,
            Theorem::S6 => MapKey::S6,
            Theorem::S2Plus => MapKey::S2Plus,
            Theorem::S2Minus => MapKey::S2Minus,
        }
    }

    /// (source, target) triangles with side k of the source mapped into side k of the target.
    pub fn triangles(&self) -> (ArcTriangle, ArcTriangle) {
        match self {
            Theorem::S4 => (canonical(Canonical::T0), canonical(Canonical::X0)),
            Theorem::S6 => (canonical(Canonical::T0), canonical(Canonical::Y0)),
            Theorem::S2Plus => (canonical(Canonical::U0), canonical(Canonical::Z0)),
            Theorem::S2Minus => (canonical(Canonical::U0), canonical(Canonical::Z0p)),
        }
    }
}

impl FromStr for Theorem {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Theorem::ALL.into_iter().find(|t| t.name() == s).ok_or_else(|| format!("unknown theorem {s:?}"))
    }
}

fn image(k: MapKey, tau: Complex64) -> Result<ExtComplex> {
    Ok(map_fraction(k, tau, EVAL_TOL)?.value())
}

fn is_zero_cusp(v: ExtComplex) -> bool {
    matches!(v, Finite(z) if z.norm() < 1e-12)
}

/// Boundary samples of side k, start to end.
fn side_samples(tri: &ArcTriangle, k: usize, n: usize) -> Vec<Complex64> {
    let side = &tri.sides[k];
    let n_v = tri.vertices.len();
    let (a, b) = (tri.vertices[k], tri.vertices[(k + 1) % n_v]);
    let pts = side.sample(n, VERTEX_MARGIN, FAR);
    // thin out near the cusp 0, where images underflow
    if is_zero_cusp(a) || is_zero_cusp(b) {
        let extra = side.sample(4 * n, CUSP_ZERO_MARGIN, FAR);
        let kept: Vec<Complex64> = extra.into_iter().filter(|z| z.norm() >= CUSP_ZERO_MARGIN).collect();
        let stride = kept.len() as f64 / n as f64;
        return (0..n).map(|j| kept[((j as f64 + 0.5) * stride) as usize]).collect();
    }
    pts
}

/// Natural parameter of a point on the carrier of `side`; for arcs, the
/// angle swept from the start point.
fn side_parameter(side: &SideArc, w: Complex64, prev: Option<f64>) -> f64 {
    match *side {
        SideArc::Segment { point, direction, .. } => (direction.conj() * (w - point)).re,
        SideArc::Arc { center, theta0, .. } => {
            // angle from the start point, exact when w is tiny next to a start vertex
            let snap = |x: f64| if x.abs() < 1e-15 { 0.0 } else { x };
            let u = Complex64::from_polar(1.0, theta0);
            let u = c(snap(u.re), snap(u.im));
            let a = ((w - center) * u.conj()).arg();
            let reference = prev.unwrap_or(0.0);
            a + TAU * ((reference - a) / TAU).round()
        }
    }
}

fn orientation(side: &SideArc) -> f64 {
    match *side {
        SideArc::Segment { s0, s1, .. } => (s1 - s0).signum(),
        SideArc::Arc { theta0, theta1, .. } => (theta1 - theta0).signum(),
    }
}

/// Limit point used for a vertex: the vertex itself, or a point far along the
/// adjacent side for cusps.
fn vertex_probe(v: ExtComplex) -> Complex64 {
    match v {
        Infinity => c(0.0, 1e10),
        Finite(z) if z.im.abs() < 1e-12 => z + c(0.0, 1e-10),
        Finite(z) => z,
    }
}

/// Boundary correspondence of one of the four mapping theorems.
pub fn mapping_check(theorem: Theorem, samples_per_side: usize, tol: f64) -> CheckReport {
    let k = theorem.map();
    let (src, dst) = theorem.triangles();
    let name = theorem.name();
    let mut checks = Vec::new();
    for side in 0..3 {
        let pts = side_samples(&src, side, samples_per_side);
        let target = dst.sides[side];
        let images: Result<Vec<ExtComplex>> = pts.iter().map(|&z| image(k, z)).collect();
        let images = match images {
            Ok(v) => v,
            Err(e) => {
                checks.push(Check::errored(format!("{name}-side{side}-carrier"), tol, e));
                continue;
            }
        };
        let dist = images.iter().map(|w| target.carrier().chordal_distance(*w)).fold(0.0, f64::max);
        checks.push(Check::bound(format!("{name}-side{side}-carrier"), dist, tol, images.len()));
        let mut prev = None;
        let mut params = Vec::new();
        for w in &images {
            match w.finite() {
                Some(w) => {
                    let p = side_parameter(&target, w, prev);
                    prev = Some(p);
                    params.push(p);
                }
                None => params.push(f64::NAN),
            }
        }
        let sense = orientation(&target);
        let violations = params.windows(2).filter(|p| !((p[1] - p[0]) * sense > 0.0)).count();
        checks.push(Check::bound(format!("{name}-side{side}-monotone"), violations as f64, 0.0, params.len()));
    }
    let vertex = (0..3)
        .map(|j| Ok(image(k, vertex_probe(src.vertices[j]))?.chordal(&dst.vertices[j])))
        .collect::<Result<Vec<f64>>>();
    checks.push(match vertex {
        Ok(v) => Check::bound(format!("{name}-vertices"), v.into_iter().fold(0.0, f64::max), tol, 3),
        Err(e) => Check::errored(format!("{name}-vertices"), tol, e),
    });
    let interior = interior_grid(&src, 20, 2.5, 1e-3);
    let outside: Result<usize> = interior.iter().try_fold(0usize, |acc, &z| {
        let inside = match image(k, z)? {
            Finite(w) => dst.contains_strictly(w, 1e-9),
            Infinity => false,
        };
        Ok(acc + (!inside) as usize)
    });
    checks.push(Check::from_result(&format!("{name}-interior"), 0.0, outside.map(|b| (b as f64, interior.len()))));
    checks.push(inequality_check(theorem, samples_per_side));
    CheckReport::new(format!("mapping-{name}"), checks)
}

/// The strict inequalities along B or the imaginary axis, as a count of
/// violating samples.
fn inequality_check(theorem: Theorem, n: usize) -> Check {
    let (src, _) = theorem.triangles();
    let k = theorem.map();
    let name = theorem.name();
    let r: Result<(f64, usize)> = (|| {
        let mut bad = 0usize;
        let pts = match theorem {
            Theorem::S4 | Theorem::S6 => side_samples(&src, 1, n),
            _ => side_samples(&src, 0, n),
        };
        for z in &pts {
            let w = finite(image(k, *z)?)?;
            let ok = match theorem {
                Theorem::S4 => {
                    let t = z.arg();
                    let mut phi = w.arg();
                    if phi < FRAC_PI_3 - 1e-9 {
                        phi += TAU;
                    }
                    phi > t && phi <= 1.5 * PI + 1e-12
                }
                Theorem::S6 => {
                    let t = z.arg();
                    let phi = w.arg();
                    phi < t && phi >= -FRAC_PI_3 - 1e-12
                }
                Theorem::S2Plus => w.im > 0.0 && w.im < z.im,
                Theorem::S2Minus => w.im > 0.0,
            };
            bad += (!ok) as usize;
        }
        Ok((bad as f64, pts.len()))
    })();
    let id = match theorem {
        Theorem::S4 => format!("{name}-angle-exceeds"),
        Theorem::S6 => format!("{name}-angle-below"),
        Theorem::S2Plus => format!("{name}-axis-between"),
        Theorem::S2Minus => format!("{name}-axis-positive"),
    };
    Check::from_result(&id, 0.0, r)
}

pub fn mapping_suite(samples_per_side: usize, tol: f64) -> CheckReport {
    let parts: Vec<CheckReport> = Theorem::ALL.par_iter().map(|&t| mapping_check(t, samples_per_side, tol)).collect();
    let checks = parts.into_iter().flat_map(|r| r.checks).collect();
    CheckReport::new("mapping", checks)
}

// ------------------------------------------------------------------- counts

/// Expected numbers of critical points of (E2, E4, E6) in a 𝒱-tile.
pub fn expected_counts(cusp_at_infinity: bool) -> [i64; 3] {
    if cusp_at_infinity {
        [0, 0, 1]
    } else {
        [1, 1, 2]
    }
}

/// Preimage value used by the degree spot checks.
pub const PREIMAGE_VALUE: Complex64 = Complex64::new(5.0, 5.0);

/// Winding counts over every 𝒱-tile up to `depth`, for each truncation
/// height, against the expected counts; plus preimage degrees over V0.
pub fn count_suite_with(depth: usize, heights: &[f64], profile: TolProfile) -> CheckReport {
    if depth > MAX_COUNT_DEPTH {
        let mut check = Check::bound("depth", depth as f64, MAX_COUNT_DEPTH as f64, 0);
        check.note = Some(format!("count suite supports depth ≤ {MAX_COUNT_DEPTH}"));
        return CheckReport::new("counts", vec![check]);
    }
    let tiles = match tessellate(Family::V, depth) {
        Ok(t) => t,
        Err(e) => return CheckReport::new("counts", vec![Check::errored("tessellate", 0.0, e)]),
    };
    let tol = profile.tol(0.1);
    let mut jobs: Vec<(String, Target, ArcTriangle, i64)> = Vec::new();
    for t in &tiles {
        let expected = expected_counts(t.has_cusp_at_infinity());
        let word = if t.word.is_empty() { "V0".to_string() } else { t.word.to_string() };
        for (f, e) in CriticalForm::ALL.into_iter().zip(expected) {
            jobs.push((format!("{f}-{word}"), f.target(), t.triangle.clone(), e));
        }
    }
    let v0 = canonical(Canonical::V0);
    jobs.push(("preimage-s6".into(), Target::S6Preimage(PREIMAGE_VALUE), v0.clone(), 2));
    jobs.push(("preimage-s2".into(), Target::S2Preimage(PREIMAGE_VALUE), v0, 1));
    let heights = heights.to_vec();
    let checks = jobs
        .par_iter()
        .map(|(id, target, tri, expected)| {
            let r: Result<(f64, usize)> = (|| {
                let mut worst = 0.0f64;
                for &h in &heights {
                    let contour = truncated_boundary(tri, h)?;
                    let w = winding(target, &contour, DEFAULT_QUAD_POINTS, EVAL_TOL)?;
                    worst = worst.max((w.value - *expected as f64).abs());
                }
                Ok((worst, heights.len()))
            })();
            Check::from_result(id, tol, r)
        })
        .collect();
    CheckReport::new("counts", checks)
}

pub fn count_suite(depth: usize) -> CheckReport {
    count_suite_with(depth, &[DEFAULT_TRUNCATION], TolProfile::DEFAULT)
}

/// The suites behind `verify --suite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Suite {
    All,
    Identities,
    Mapping,
    Counts,
    Ode,
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "all" => Ok(Suite::All),
            "identities" => Ok(Suite::Identities),
            "mapping" => Ok(Suite::Mapping),
            "counts" => Ok(Suite::Counts),
            "ode" => Ok(Suite::Ode),
            _ => Err(format!("unknown suite {s:?}; expected all, identities, mapping, counts or ode")),
        }
    }
}

pub const MAPPING_SAMPLES: usize = 100;
pub const MAPPING_TOL: f64 = 1e-8;
pub const COUNT_DEPTH: usize = 2;

pub fn run_suite(suite: Suite, seed: u64, profile: TolProfile) -> CheckReport {
    let mapping = || mapping_suite(MAPPING_SAMPLES, profile.tol(MAPPING_TOL));
    let counts = || count_suite_with(COUNT_DEPTH, &[DEFAULT_TRUNCATION], profile);
    match suite {
        Suite::Identities => identity_suite(seed, profile),
        Suite::Mapping => mapping(),
        Suite::Counts => counts(),
        Suite::Ode => ode_suite(seed, profile),
        Suite::All => CheckReport::merge("all", vec![identity_suite(seed, profile), mapping(), counts()]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_status_logic() {
        let r = CheckReport::new("x", vec![Check::bound("a", 1.0, 2.0, 1), Check { status: Status::Skipped, ..Check::bound("b", 5.0, 1.0, 0) }]);
        assert!(r.passed());
        let r = CheckReport::new("x", vec![Check::bound("a", f64::NAN, 2.0, 1)]);
        assert!(!r.passed());
    }

    #[test]
    fn random_elements_have_unit_determinant() {
        let mut r = rng(3, 0);
        for _ in 0..20 {
            let g = random_element(&mut r);
            assert_eq!(g.a * g.d - g.b * g.c, 1);
            assert!([g.a, g.b, g.c, g.d].iter().all(|x| x.abs() <= 4));
        }
    }

    #[test]
    fn series_identities_hold_exactly() {
        assert_eq!(ramanujan_series().unwrap().0, 0.0);
    }

    #[test]
    fn mapping_s4_passes() {
        let r = mapping_check(Theorem::S4, 100, 1e-8);
        assert!(r.passed(), "{:#?}", r.checks.iter().filter(|c| c.status == Status::Fail).collect::<Vec<_>>());
    }

    #[test]
    fn flipped_derivative_is_detected() {
        assert!(derivative_values(Mutation::FlipS4Derivative).unwrap().0 > 1.0);
        assert!(derivative_values(Mutation::None).unwrap().0 < 1e-9);
    }

    #[test]
    fn count_depth_guard() {
        assert!(!count_suite(4).passed());
    }
}
