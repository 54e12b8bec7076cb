//! Zero counting by the argument principle over cusp-truncated tiles, and
//! Newton location of the critical points of E2, E4, E6.
//!
//! Critical points of E_k are the zeros of P2 = E2² − E4, P4 = E2E4 − E6 and
//! P6 = E2E6 − E4², which are holomorphic on ℍ and equal 12·DE2, 3·DE4, 2·DE6.

use crate::branch::root_near;
use crate::error::{Error, Result};
use crate::ext::{ExtComplex, Finite, Infinity};
use crate::geometry::{ArcTriangle, SideArc, Tile};
use crate::modular::Eisenstein;
use crate::polymorphic::{s2_with_root, s_map_at, MapKey};
use crate::quadrature::{composite, gauss_legendre};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::str::FromStr;

pub const DEFAULT_TRUNCATION: f64 = 3.0;
pub const DEFAULT_GRID: usize = 40;
pub const DEFAULT_QUAD_POINTS: usize = 16;

const INITIAL_PANELS: usize = 4;
const MAX_DOUBLINGS: usize = 10;
const INTEGER_SLACK: f64 = 0.1;
const NEWTON_ITERATIONS: usize = 60;
const DISTINCT: f64 = 1e-6;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CriticalForm {
    E2,
    E4,
    E6,
}

impl CriticalForm {
    pub const ALL: [CriticalForm; 3] = [CriticalForm::E2, CriticalForm::E4, CriticalForm::E6];

    pub fn target(&self) -> Target {
        match self {
            CriticalForm::E2 => Target::DE2,
            CriticalForm::E4 => Target::DE4,
            CriticalForm::E6 => Target::DE6,
        }
    }

    /// The map whose poles are the critical points of this form.
    pub fn dual_map(&self) -> MapKey {
        match self {
            CriticalForm::E2 => MapKey::S2Plus,
            CriticalForm::E4 => MapKey::S4,
            CriticalForm::E6 => MapKey::S6,
        }
    }
}

impl fmt::Display for CriticalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CriticalForm::E2 => "E2",
            CriticalForm::E4 => "E4",
            CriticalForm::E6 => "E6",
        })
    }
}

impl FromStr for CriticalForm {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<CriticalForm, String> {
        match s {
            "E2" => Ok(CriticalForm::E2),
            "E4" => Ok(CriticalForm::E4),
            "E6" => Ok(CriticalForm::E6),
            _ => Err(format!("unknown form {s:?}")),
        }
    }
}

/// Holomorphic functions whose zeros are counted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Target {
    /// E2² − E4
    DE2,
    /// E2E4 − E6
    DE4,
    /// E2E6 − E4²
    DE6,
    /// π(τ−w)P4 − 6iE4, vanishing exactly where s4 = w
    S4Preimage(Complex64),
    /// π(τ−w)P6 − 6iE6, vanishing exactly where s6 = w
    S6Preimage(Complex64),
    /// (π(τ−w)E2 − 6i)² − π²(τ−w)²E4, vanishing exactly where w ∈ s2(τ)
    S2Preimage(Complex64),
}

/// Value, τ-derivative and the magnitude of the terms making up the value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetValue {
    pub value: Complex64,
    pub derivative: Complex64,
    pub scale: f64,
}

impl Target {
    pub fn eval(&self, tau: Complex64, tol: f64) -> Result<TargetValue> {
        let e = Eisenstein::checked(tau, tol)?;
        Ok(self.eval_at(&e))
    }

    pub fn eval_at(&self, e: &Eisenstein) -> TargetValue {
        let tpi = c(0.0, TAU);
        let six_i = c(0.0, 6.0);
        let tv = |value, derivative, scale| TargetValue { value, derivative, scale };
        match *self {
            Target::DE2 => tv(e.p2, tpi * e.dp2(), e.e2.norm_sqr() + e.e4.norm()),
            Target::DE4 => tv(e.p4, tpi * e.dp4(), e.e2.norm() * e.e4.norm() + e.e6.norm()),
            Target::DE6 => tv(e.p6, tpi * e.dp6(), e.e2.norm() * e.e6.norm() + e.e4.norm_sqr()),
            Target::S4Preimage(w) => {
                let d = (e.tau - w) * PI;
                let value = d * e.p4 - six_i * e.e4;
                let derivative = e.p4 * PI + d * tpi * e.dp4() - six_i * tpi * e.p4 / 3.0;
                tv(value, derivative, d.norm() * e.p4.norm() + 6.0 * e.e4.norm())
            }
            Target::S6Preimage(w) => {
                let d = (e.tau - w) * PI;
                let value = d * e.p6 - six_i * e.e6;
                let derivative = e.p6 * PI + d * tpi * e.dp6() - six_i * tpi * e.p6 / 2.0;
                tv(value, derivative, d.norm() * e.p6.norm() + 6.0 * e.e6.norm())
            }
            Target::S2Preimage(w) => {
                let d = (e.tau - w) * PI;
                let de2 = tpi * e.p2 / 12.0;
                let de4 = tpi * e.p4 / 3.0;
                let a = d * e.e2 - six_i;
                let value = a * a - d * d * e.e4;
                let derivative = a * 2.0 * (e.e2 * PI + d * de2) - (d * e.e4 * 2.0 * PI + d * d * de4);
                let scale = (d.norm() * e.e2.norm() + 6.0).powi(2) + d.norm_sqr() * e.e4.norm();
                tv(value, derivative, scale)
            }
        }
    }
}

/// Closed piecewise-smooth curve in ℍ built from finite sides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedContour {
    pub segments: Vec<SideArc>,
    pub cusp_truncation_height: f64,
}

impl TruncatedContour {
    /// Largest gap between the end of one segment and the start of the next.
    pub fn closure_gap(&self) -> f64 {
        let n = self.segments.len();
        (0..n)
            .map(|k| {
                let a = self.segments[k].end().finite().expect("finite contour");
                let b = self.segments[(k + 1) % n].start().finite().expect("finite contour");
                (a - b).norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn min_im(&self) -> f64 {
        self.segments
            .iter()
            .flat_map(|s| (0..=64).filter_map(move |k| s.point(k as f64 / 64.0).finite()))
            .map(|z| z.im)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Reduced fraction p/q equal to x within 1e−9.
pub fn cusp_rational(x: f64) -> Option<(i64, i64)> {
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut y = x;
    for _ in 0..40 {
        let a = y.floor();
        let ai = a as i64;
        let h2 = ai.checked_mul(h1)?.checked_add(h0)?;
        let k2 = ai.checked_mul(k1)?.checked_add(k0)?;
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() < 1e-9 {
            return Some((h1, k1));
        }
        let frac = y - a;
        if frac.abs() < 1e-12 {
            break;
        }
        y = 1.0 / frac;
    }
    None
}

/// Horocycle of height h at a cusp: the line Im = h at ∞, otherwise the
/// circle tangent to ℝ at p/q with diameter 1/(q²h).
#[derive(Debug, Clone, Copy, PartialEq)]
enum Horocycle {
    Line(f64),
    Circle { center: Complex64, radius: f64, foot: Complex64 },
}

impl Horocycle {
    fn at(v: ExtComplex, h: f64) -> Result<Horocycle> {
        match v {
            Infinity => Ok(Horocycle::Line(h)),
            Finite(z) => {
                let (_, q) = cusp_rational(z.re).ok_or(Error::DegenerateTile)?;
                let radius = 1.0 / (2.0 * (q * q) as f64 * h);
                let foot = c(z.re, 0.0);
                Ok(Horocycle::Circle { center: foot + c(0.0, radius), radius, foot })
            }
        }
    }

    fn inside(&self, z: Complex64) -> bool {
        match *self {
            Horocycle::Line(h) => z.im > h,
            Horocycle::Circle { center, radius, .. } => (z - center).norm() < radius,
        }
    }

    /// Natural parameter on `side` of its second meeting point with the horocycle.
    fn cut(&self, side: &SideArc) -> Result<(f64, Complex64)> {
        let z = match (*self, *side) {
            (Horocycle::Line(h), SideArc::Segment { point, direction, .. }) => {
                if direction.im.abs() < 1e-14 {
                    return Err(Error::DegenerateTile);
                }
                point + direction * ((h - point.im) / direction.im)
            }
            (Horocycle::Line(_), SideArc::Arc { .. }) => return Err(Error::DegenerateTile),
            (Horocycle::Circle { center, foot, radius }, SideArc::Segment { .. }) => {
                let _ = center;
                foot + c(0.0, 2.0 * radius)
            }
            (Horocycle::Circle { center, foot, .. }, SideArc::Arc { center: c2, .. }) => {
                // reflect the common point across the line of centers
                let u = (c2 - center) / (c2 - center).norm();
                center + u * u * (foot - center).conj()
            }
        };
        let p = match *side {
            SideArc::Segment { point, direction, .. } => (direction.conj() * (z - point)).re,
            SideArc::Arc { center, theta0, theta1, .. } => {
                let (lo, hi) = (theta0.min(theta1), theta0.max(theta1));
                let mut t = (z - center).arg();
                while t < lo - 1e-12 {
                    t += TAU;
                }
                while t > hi + 1e-12 {
                    t -= TAU;
                }
                t
            }
        };
        Ok((p, z))
    }

    fn connector(&self, a: Complex64, b: Complex64) -> SideArc {
        match *self {
            Horocycle::Line(_) => {
                let d = b - a;
                SideArc::Segment { point: a, direction: d / d.norm(), s0: 0.0, s1: d.norm() }
            }
            Horocycle::Circle { center, radius, .. } => {
                let ta = (a - center).arg();
                let tb = (b - center).arg();
                let ccw = (tb - ta).rem_euclid(TAU);
                let foot = (-FRAC_PI_2 - ta).rem_euclid(TAU);
                // the arc inside the tile avoids the point of tangency
                let theta1 = if foot < ccw { ta - (TAU - ccw) } else { ta + ccw };
                SideArc::Arc { center, radius, theta0: ta, theta1 }
            }
        }
    }
}

fn param_range(side: &SideArc) -> (f64, f64) {
    match *side {
        SideArc::Segment { s0, s1, .. } => (s0, s1),
        SideArc::Arc { theta0, theta1, .. } => (theta0, theta1),
    }
}

fn with_range(side: &SideArc, p0: f64, p1: f64) -> SideArc {
    match *side {
        SideArc::Segment { point, direction, .. } => SideArc::Segment { point, direction, s0: p0, s1: p1 },
        SideArc::Arc { center, radius, .. } => SideArc::Arc { center, radius, theta0: p0, theta1: p1 },
    }
}

/// Boundary of the tile traversed with the interior on the left, each cusp
/// cut off along its horocycle of height h.
pub fn truncated_boundary(tile: &ArcTriangle, h: f64) -> Result<TruncatedContour> {
    let tri = tile.positively_oriented();
    let n = tri.vertices.len();
    let cusps = tri.cusps();
    let horo: Vec<Option<Horocycle>> =
        (0..n).map(|k| if cusps.contains(&k) { Horocycle::at(tri.vertices[k], h).map(Some) } else { Ok(None) }).collect::<Result<_>>()?;
    let mut sides = Vec::with_capacity(n);
    for k in 0..n {
        let side = tri.sides[k];
        let (mut p0, mut p1) = param_range(&side);
        let dir = if p1 >= p0 { 1.0 } else { -1.0 };
        if let Some(hc) = horo[k] {
            p0 = hc.cut(&side)?.0;
        }
        if let Some(hc) = horo[(k + 1) % n] {
            p1 = hc.cut(&side)?.0;
        }
        if !p0.is_finite() || !p1.is_finite() || (p1 - p0) * dir <= 0.0 {
            return Err(Error::DegenerateTile);
        }
        sides.push(with_range(&side, p0, p1));
    }
    let mut segments = Vec::with_capacity(2 * n);
    for k in 0..n {
        segments.push(sides[k]);
        if let Some(hc) = horo[(k + 1) % n] {
            let a = sides[k].end().finite().ok_or(Error::DegenerateTile)?;
            let b = sides[(k + 1) % n].start().finite().ok_or(Error::DegenerateTile)?;
            segments.push(hc.connector(a, b));
        }
    }
    Ok(TruncatedContour { segments, cusp_truncation_height: h })
}

/// True when z lies in one of the horodisks cut off at the tile's cusps.
pub fn in_cusp_window(tile: &ArcTriangle, h: f64, z: Complex64) -> bool {
    tile.cusps().into_iter().any(|k| Horocycle::at(tile.vertices[k], h).map(|hc| hc.inside(z)).unwrap_or(false))
}

fn piece(side: &SideArc, p: f64) -> (Complex64, Complex64) {
    match *side {
        SideArc::Segment { point, direction, .. } => (point + direction * p, direction),
        SideArc::Arc { center, radius, .. } => {
            let e = Complex64::from_polar(radius, p);
            (center + e, c(0.0, 1.0) * e)
        }
    }
}

/// Raw winding value and the integer accepted from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Winding {
    pub value: f64,
    pub count: i64,
    pub panels: usize,
}

/// (1/2πi)∮ f'/f along the contour, refined until two successive panel
/// doublings agree and sit within 0.1 of an integer.
pub fn winding(target: &Target, contour: &TruncatedContour, quad_points: usize, tol: f64) -> Result<Winding> {
    let rule = gauss_legendre(quad_points.max(2));
    let integrate = |panels: usize| -> Result<f64> {
        let mut total = c(0.0, 0.0);
        for seg in &contour.segments {
            let (a, b) = param_range(seg);
            let f = |p: f64| -> Result<Complex64> {
                let (z, dz) = piece(seg, p);
                let v = target.eval(z, tol)?;
                if v.value.norm() <= 1e-10 * v.derivative.norm() * z.im.min(1.0) || v.value == c(0.0, 0.0) {
                    return Err(Error::OnContourZero(z));
                }
                Ok(v.derivative / v.value * dz)
            };
            total += composite(&f, a, b, &rule, panels)?;
        }
        Ok((total / c(0.0, TAU)).re)
    };
    let mut panels = INITIAL_PANELS;
    let mut prev = integrate(panels)?;
    for _ in 0..MAX_DOUBLINGS {
        panels *= 2;
        let cur = integrate(panels)?;
        let near = cur.round();
        if (cur - near).abs() < INTEGER_SLACK && (prev - near).abs() < INTEGER_SLACK && (cur - prev).abs() < 0.05 {
            return Ok(Winding { value: cur, count: near as i64, panels });
        }
        prev = cur;
    }
    Err(Error::NonIntegerWinding(prev))
}

pub fn count_zeros(target: &Target, contour: &TruncatedContour, quad_points: usize) -> Result<i64> {
    Ok(winding(target, contour, quad_points, 1e-12)?.count)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocateMethod {
    pub grid: usize,
    pub newton_iterations: usize,
}

/// A located critical point.
///
/// `residual` is |P|/M and `simplicity_witness` is |P'|·Im τ/M, where P is
/// the target combination and M the sum of the magnitudes of its terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalRecord {
    pub form: CriticalForm,
    pub location: Complex64,
    pub residual: f64,
    pub simplicity_witness: f64,
    pub tile_word: String,
    pub method: LocateMethod,
}

fn newton(target: &Target, seed: Complex64, tol: f64) -> Option<(Complex64, usize)> {
    let mut z = seed;
    let mut last = f64::INFINITY;
    for it in 1..=NEWTON_ITERATIONS {
        let v = target.eval(z, tol).ok()?;
        if v.derivative == c(0.0, 0.0) {
            return None;
        }
        let mut step = v.value / v.derivative;
        let cap = 0.25 * z.im;
        if step.norm() > cap {
            step *= cap / step.norm();
        }
        z -= step;
        if !(z.im > 0.0) {
            return None;
        }
        last = step.norm();
        if last <= 1e-14 * (1.0 + z.norm()) {
            return Some((z, it));
        }
    }
    (last <= 1e-11 * (1.0 + z.norm())).then_some((z, NEWTON_ITERATIONS))
}

/// Zeros of `target` inside the tile, seeded from grid minima and polished
/// by Newton; fails unless exactly `expected` distinct zeros are found.
pub fn locate_zeros(target: &Target, tile: &ArcTriangle, h: f64, grid: usize, expected: i64, tol: f64) -> Result<Vec<(Complex64, TargetValue, usize)>> {
    let (x0, x1, y0, y1) = tile.bounding_box(h);
    let g = grid.max(2);
    let mut cells: Vec<Option<(Complex64, f64)>> = vec![None; g * g];
    for i in 0..g {
        for j in 0..g {
            let z = c(x0 + (x1 - x0) * (i as f64 + 0.5) / g as f64, y0 + (y1 - y0) * (j as f64 + 0.5) / g as f64);
            if z.im <= 0.0 || !tile.contains_strictly(z, 0.0) || in_cusp_window(tile, h, z) {
                continue;
            }
            if let Ok(v) = target.eval(z, tol) {
                cells[i * g + j] = Some((z, v.value.norm() / v.scale));
            }
        }
    }
    let mut minima = Vec::new();
    let mut rest = Vec::new();
    for i in 0..g {
        for j in 0..g {
            let Some((z, r)) = cells[i * g + j] else { continue };
            let lower = [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)].iter().any(|&(di, dj)| {
                let (a, b) = (i as i64 + di, j as i64 + dj);
                a >= 0 && b >= 0 && (a as usize) < g && (b as usize) < g && cells[a as usize * g + b as usize].is_some_and(|(_, s)| s < r)
            });
            if lower {
                rest.push((z, r));
            } else {
                minima.push((z, r));
            }
        }
    }
    let by_residual = |a: &(Complex64, f64), b: &(Complex64, f64)| a.1.total_cmp(&b.1);
    minima.sort_by(by_residual);
    rest.sort_by(by_residual);
    let mut found: Vec<(Complex64, TargetValue, usize)> = Vec::new();
    for (seed, _) in minima.into_iter().chain(rest.into_iter().take(4 * g)) {
        if found.len() as i64 >= expected && expected >= 0 {
            break;
        }
        let Some((z, its)) = newton(target, seed, tol) else { continue };
        if !tile.contains_strictly(z, 1e-9) || in_cusp_window(tile, h, z) {
            continue;
        }
        if found.iter().any(|(w, _, _)| (*w - z).norm() <= DISTINCT) {
            continue;
        }
        found.push((z, target.eval(z, tol)?, its));
    }
    if found.len() as i64 != expected {
        return Err(Error::CountMismatch { expected, found: found.len() });
    }
    found.sort_by(|a, b| a.0.im.total_cmp(&b.0.im).then(a.0.re.total_cmp(&b.0.re)));
    Ok(found)
}

/// Critical points of the form inside the tile, one record per zero counted
/// by the winding integral over the truncated boundary.
pub fn locate(form: CriticalForm, tile: &Tile, grid: usize, h: f64, tol: f64) -> Result<Vec<CriticalRecord>> {
    let target = form.target();
    let contour = truncated_boundary(&tile.triangle, h)?;
    let count = winding(&target, &contour, DEFAULT_QUAD_POINTS, tol)?.count;
    let zeros = locate_zeros(&target, &tile.triangle, h, grid, count, tol)?;
    Ok(zeros
        .into_iter()
        .map(|(z, v, its)| CriticalRecord {
            form,
            location: z,
            residual: v.value.norm() / v.scale,
            simplicity_witness: v.derivative.norm() * z.im / v.scale,
            tile_word: tile.word.to_string(),
            method: LocateMethod { grid, newton_iterations: its },
        })
        .collect())
}

/// |1/s| at a critical point, minimized over both values for E2.
pub fn dual_reciprocal(form: CriticalForm, tau: Complex64, tol: f64) -> Result<f64> {
    let e = Eisenstein::checked(tau, tol)?;
    let recip = |v: ExtComplex| match v {
        Infinity => 0.0,
        Finite(z) => 1.0 / z.norm(),
    };
    match form {
        CriticalForm::E4 => Ok(recip(s_map_at(MapKey::S4, &e, tol)?)),
        CriticalForm::E6 => Ok(recip(s_map_at(MapKey::S6, &e, tol)?)),
        CriticalForm::E2 => {
            let r = e.e4.sqrt();
            let a = recip(s2_with_root(&e, r, 1.0, tol)?);
            let b = recip(s2_with_root(&e, r, -1.0, tol)?);
            Ok(a.min(b))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimplicityReport {
    pub radii: (f64, f64),
    pub moduli: (f64, f64),
    pub ratio: f64,
}

/// m(r1)/m(r2) with m(r) = max over |τ−p| = r of |(τ−p)f(τ)|. A simple pole
/// gives a ratio near 1; a double pole gives r2/r1.
pub fn laurent_ratio<F>(f: F, pole: Complex64, radii: (f64, f64)) -> Result<SimplicityReport>
where
    F: Fn(Complex64) -> Result<ExtComplex>,
{
    const SAMPLES: usize = 64;
    let m = |r: f64| -> Result<f64> {
        let mut best = 0.0f64;
        for k in 0..SAMPLES {
            let d = Complex64::from_polar(r, TAU * (k as f64 + 0.5) / SAMPLES as f64);
            let v = f(pole + d)?.finite().ok_or(Error::PoleAtPoint(pole + d))?;
            best = best.max((v * d).norm());
        }
        Ok(best)
    };
    let (m1, m2) = (m(radii.0)?, m(radii.1)?);
    Ok(SimplicityReport { radii, moduli: (m1, m2), ratio: m1 / m2 })
}

/// Laurent ratio test for s_k at a pole. For s2± the germ used near the pole
/// is the one whose denominator E2 + √E4 vanishes there.
pub fn pole_simplicity(k: MapKey, pole: Complex64, radii: (f64, f64), tol: f64) -> Result<SimplicityReport> {
    match k {
        MapKey::S4 | MapKey::S6 => laurent_ratio(|z| s_map_at(k, &Eisenstein::checked(z, tol)?, tol), pole, radii),
        MapKey::S2Plus | MapKey::S2Minus => {
            let anchor = -Eisenstein::checked(pole, tol)?.e2;
            laurent_ratio(
                |z| {
                    let e = Eisenstein::checked(z, tol)?;
                    s2_with_root(&e, root_near(e.e4, anchor), 1.0, tol)
                },
                pole,
                radii,
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{canonical, Canonical, Family, TileWord};

    const TOL: f64 = 1e-12;

    fn non_cusp_tile() -> Tile {
        Tile::from_word(Family::V, TileWord::parse("ad").unwrap())
    }

    #[test]
    fn rational_cusps() {
        assert_eq!(cusp_rational(0.0), Some((0, 1)));
        assert_eq!(cusp_rational(1.0 / 3.0), Some((1, 3)));
        assert_eq!(cusp_rational(-0.5), Some((-1, 2)));
        assert_eq!(cusp_rational(2.0 / 5.0 + 1e-13), Some((2, 5)));
    }

    #[test]
    fn truncated_v0_and_t0() {
        let v0 = truncated_boundary(&canonical(Canonical::V0), 3.0).unwrap();
        assert_eq!(v0.segments.len(), 6);
        assert!(v0.closure_gap() < 1e-12);
        assert!(v0.min_im() > 0.0);
        let horizontal = v0.segments.iter().filter(|s| matches!(s, SideArc::Segment { direction, .. } if direction.im.abs() < 1e-15)).count();
        assert_eq!(horizontal, 1);
        let t0 = truncated_boundary(&canonical(Canonical::T0), 3.0).unwrap();
        assert_eq!(t0.segments.len(), 4);
        assert!(t0.closure_gap() < 1e-12);
    }

    #[test]
    fn cut_points_lie_on_the_sides() {
        let tile = non_cusp_tile();
        let contour = truncated_boundary(&tile.triangle, 3.0).unwrap();
        assert!(contour.closure_gap() < 1e-12);
        for s in &contour.segments {
            for end in [s.start(), s.end()] {
                let z = end.finite().unwrap();
                assert!(tile.triangle.boundary_distance(z) < 1e-12 || in_cusp_window(&tile.triangle, 2.999, z));
            }
        }
    }

    #[test]
    fn counts_on_v0_and_a_non_cusp_tile() {
        let v0 = truncated_boundary(&canonical(Canonical::V0), 3.0).unwrap();
        assert_eq!(count_zeros(&Target::DE4, &v0, 16).unwrap(), 0);
        assert_eq!(count_zeros(&Target::DE6, &v0, 16).unwrap(), 1);
        assert_eq!(count_zeros(&Target::DE2, &v0, 16).unwrap(), 0);
        let nc = truncated_boundary(&non_cusp_tile().triangle, 3.0).unwrap();
        assert_eq!(count_zeros(&Target::DE4, &nc, 16).unwrap(), 1);
        assert_eq!(count_zeros(&Target::DE6, &nc, 16).unwrap(), 2);
        assert_eq!(count_zeros(&Target::DE2, &nc, 16).unwrap(), 1);
    }

    #[test]
    fn located_points_are_poles_of_the_dual_maps() {
        let tile = non_cusp_tile();
        let e4 = locate(CriticalForm::E4, &tile, DEFAULT_GRID, 3.0, TOL).unwrap();
        assert_eq!(e4.len(), 1);
        assert!(dual_reciprocal(CriticalForm::E4, e4[0].location, TOL).unwrap() < 1e-8);
        let e6 = locate(CriticalForm::E6, &tile, DEFAULT_GRID, 3.0, TOL).unwrap();
        assert_eq!(e6.len(), 2);
        assert!(e6.iter().all(|r| r.simplicity_witness > 1e-6 && r.residual < 1e-10));
        let v0 = Tile::from_word(Family::V, TileWord::default());
        assert!(locate(CriticalForm::E4, &v0, DEFAULT_GRID, 3.0, TOL).unwrap().is_empty());
    }

    #[test]
    fn synthetic_laurent_ratios() {
        let p = c(0.3, 0.8);
        let simple = laurent_ratio(|z| Ok(Finite((z - p).inv())), p, (1e-4, 1e-3)).unwrap();
        assert!((simple.ratio - 1.0).abs() < 1e-12);
        let double = laurent_ratio(|z| Ok(Finite((z - p).inv().powi(2))), p, (1e-4, 1e-3)).unwrap();
        assert!((double.ratio - 10.0).abs() < 1e-9);
    }

    #[test]
    fn s4_pole_is_simple() {
        let tile = non_cusp_tile();
        let p = locate(CriticalForm::E4, &tile, DEFAULT_GRID, 3.0, TOL).unwrap()[0].location;
        let r = pole_simplicity(MapKey::S4, p, (1e-3, 1e-4), TOL).unwrap();
        assert!((0.8..=1.25).contains(&r.ratio), "{}", r.ratio);
    }
}
