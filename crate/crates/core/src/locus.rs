//! Predictor-corrector tracing of the real locus of s2±, s4, s6: curves on
//! which s_k is real with value in (−∞, 0), (0, 1) or (1, ∞).

use crate::error::{Error, Result};
use crate::geometry::ArcTriangle;
use crate::ext::ExtComplex;
use crate::polymorphic::{in_w, map_fraction, MapKey};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

pub const MIN_STEP: f64 = 1e-4;
pub const MAX_STEP: f64 = 0.05;
pub const MIN_IM: f64 = 0.05;
pub const MAX_IM: f64 = 20.0;
/// Largest residual |Im s|/|s| accepted at the start point.
pub const START_TOL: f64 = 1e-6;
const ACCEPT_TOL: f64 = 1e-11;
const EVAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Interval {
    /// (−∞, 0)
    Neg,
    /// (0, 1)
    Unit,
    /// (1, ∞)
    Pos,
}

impl Interval {
    pub fn name(&self) -> &'static str {
        match self {
            Interval::Neg => "neg",
            Interval::Unit => "unit",
            Interval::Pos => "pos",
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        match self {
            Interval::Neg => x < 0.0,
            Interval::Unit => x > 0.0 && x < 1.0,
            Interval::Pos => x > 1.0,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Interval {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "neg" => Ok(Interval::Neg),
            "unit" => Ok(Interval::Unit),
            "pos" => Ok(Interval::Pos),
            _ => Err(format!("unknown interval {s:?}; expected neg, unit or pos")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopReason {
    MaxPoints,
    LowCusp,
    HighCusp,
    LeftRegion,
    LeftInterval,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocusPoint {
    pub tau: Complex64,
    pub value: ExtComplex,
    /// |Im s| / |s|, the sine of the angle between s(τ) and the real line.
    pub residual: f64,
    /// Step length that produced this point (0 for the start).
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocusCurve {
    pub map: MapKey,
    pub interval: Interval,
    pub points: Vec<LocusPoint>,
    pub step: f64,
    /// Why each end stopped: (backward end, forward end).
    pub stops: (StopReason, StopReason),
}

impl LocusCurve {
    pub fn max_residual(&self) -> f64 {
        self.points.iter().map(|p| p.residual).fold(0.0, f64::max)
    }
}

/// s = A/D at a point, with the logarithmic derivative s'/s.
#[derive(Debug, Clone, Copy)]
struct Local {
    a: Complex64,
    d: Complex64,
    dlog: Complex64,
}

impl Local {
    fn value(&self) -> ExtComplex {
        if self.d.norm() == 0.0 {
            ExtComplex::Infinity
        } else {
            ExtComplex::Finite(self.a / self.d)
        }
    }

    /// A·conj(D), a positive multiple of s.
    fn direction(&self) -> Complex64 {
        self.a * self.d.conj()
    }

    /// arg s reduced to (−π/2, π/2], zero exactly on the real locus.
    fn phase(&self) -> f64 {
        let w = self.direction();
        (w.im / w.re).atan()
    }

    /// |Im s| / |s|.
    fn residual(&self) -> f64 {
        let w = self.direction();
        w.im.abs() / w.norm()
    }

    fn in_interval(&self, interval: Interval) -> bool {
        if self.residual() > START_TOL {
            return false;
        }
        let positive = self.direction().re > 0.0;
        let (na, nd) = (self.a.norm(), self.d.norm());
        match interval {
            Interval::Neg => !positive,
            Interval::Unit => positive && na < nd,
            Interval::Pos => positive && na > nd,
        }
    }
}

fn local(map: MapKey, tau: Complex64) -> Result<Local> {
    let f = map_fraction(map, tau, EVAL_TOL)?;
    if f.num.norm() == 0.0 {
        return Err(Error::DerivativeVanishes(tau));
    }
    Ok(Local { a: f.num, d: f.den, dlog: f.log_derivative })
}

/// Newton on arg s along the normal of the level set, at most four steps.
fn correct(map: MapKey, mut tau: Complex64, region: Option<&ArcTriangle>) -> Result<Option<(Complex64, Local)>> {
    for _ in 0..4 {
        if !(tau.im > 0.0) || !admissible(map, tau, region) {
            return Ok(None);
        }
        let l = local(map, tau)?;
        if l.residual() < ACCEPT_TOL {
            return Ok(Some((tau, l)));
        }
        let m = l.dlog.norm();
        if m == 0.0 {
            return Err(Error::DerivativeVanishes(tau));
        }
        let normal = Complex64::i() * l.dlog.conj() / m;
        tau -= normal * (l.phase() / m);
    }
    if !(tau.im > 0.0) || !admissible(map, tau, region) {
        return Ok(None);
    }
    let l = local(map, tau)?;
    Ok(if l.residual() < ACCEPT_TOL { Some((tau, l)) } else { None })
}

fn admissible(map: MapKey, tau: Complex64, region: Option<&ArcTriangle>) -> bool {
    if matches!(map, MapKey::S2Plus | MapKey::S2Minus) && !in_w(tau) {
        return false;
    }
    region.is_none_or(|r| r.contains(ExtComplex::Finite(tau), 0.0))
}

fn unit_tangent(l: &Local, tau: Complex64) -> Result<Complex64> {
    let m = l.dlog.norm();
    if m < 1e-300 {
        return Err(Error::DerivativeVanishes(tau));
    }
    Ok(l.dlog.conj() / m)
}

/// One direction of the trace from an accepted start.
fn march(
    map: MapKey,
    interval: Interval,
    start: (Complex64, Local),
    sense: f64,
    step: f64,
    budget: usize,
    region: Option<&ArcTriangle>,
) -> Result<(Vec<LocusPoint>, StopReason)> {
    let (mut tau, mut l) = start;
    let mut out = Vec::new();
    let mut h = step.clamp(MIN_STEP, MAX_STEP);
    let mut clean = 0;
    let mut prev_dir = unit_tangent(&l, tau)? * sense;
    while out.len() < budget {
        let mut dir = unit_tangent(&l, tau)?;
        if (dir * prev_dir.conj()).re < 0.0 {
            dir = -dir;
        }
        let trial = tau + dir * h;
        if trial.im < MIN_IM {
            return Ok((out, StopReason::LowCusp));
        }
        if trial.im > MAX_IM {
            return Ok((out, StopReason::HighCusp));
        }
        if !admissible(map, trial, region) {
            return Ok((out, StopReason::LeftRegion));
        }
        let corrected = match correct(map, trial, region) {
            Ok(c) => c,
            Err(Error::DerivativeVanishes(z)) => return Err(Error::DerivativeVanishes(z)),
            Err(_) => None,
        };
        let accepted = corrected.filter(|(z, _)| {
            let d = (*z - tau).norm();
            d > 0.2 * h && d < 2.0 * h && ((*z - tau) * dir.conj()).re > 0.0
        });
        match accepted {
            Some((z, nl)) => {
                if !nl.in_interval(interval) {
                    return Ok((out, StopReason::LeftInterval));
                }
                prev_dir = dir;
                out.push(LocusPoint { tau: z, value: nl.value(), residual: nl.residual(), step: h });
                tau = z;
                l = nl;
                clean += 1;
                if clean >= 5 {
                    h = (h * 2.0).min(MAX_STEP);
                    clean = 0;
                }
            }
            None => {
                clean = 0;
                h *= 0.5;
                if h < MIN_STEP {
                    return Err(Error::StepCollapse(tau));
                }
            }
        }
    }
    Ok((out, StopReason::MaxPoints))
}

/// Traces the component of the real locus of `map` through `start`, in both
/// directions, returning points ordered along the curve. At most `max_points`
/// points are produced in total. With `region`, the trace stops on leaving it.
pub fn trace(map: MapKey, interval: Interval, start: Complex64, step: f64, max_points: usize, region: Option<&ArcTriangle>) -> Result<LocusCurve> {
    if !(start.im > 0.0) {
        return Err(Error::NotInUpperHalfPlane(start));
    }
    if !(step > 0.0) || max_points == 0 {
        return Err(Error::StepCollapse(start));
    }
    let l0 = local(map, start)?;
    let r0 = l0.residual();
    if r0 >= START_TOL || !l0.in_interval(interval) {
        return Err(Error::StartNotOnLocus(r0.max(START_TOL)));
    }
    let s0 = correct(map, start, region)?.ok_or(Error::StartNotOnLocus(r0))?;
    if !s0.1.in_interval(interval) {
        return Err(Error::StartNotOnLocus(r0));
    }
    unit_tangent(&s0.1, s0.0)?;
    let first = LocusPoint { tau: s0.0, value: s0.1.value(), residual: s0.1.residual(), step: 0.0 };
    let budget = max_points - 1;
    let (fwd, stop_f) = march(map, interval, s0, 1.0, step, budget - budget / 2, region)?;
    let (bwd, stop_b) = march(map, interval, s0, -1.0, step, budget / 2, region)?;
    let mut points: Vec<LocusPoint> = bwd.into_iter().rev().collect();
    points.push(first);
    points.extend(fwd);
    Ok(LocusCurve { map, interval, points, step, stops: (stop_b, stop_f) })
}

/// A point of the locus on the segment [a, b], found by bisection of Im t
/// over sign changes of arg s on `pieces` subsegments.
pub fn find_start_on_segment(map: MapKey, interval: Interval, a: Complex64, b: Complex64, pieces: usize) -> Result<Option<Complex64>> {
    let g = |z: Complex64| -> Result<Local> { local(map, z) };
    let mut prev = (a, g(a)?);
    for k in 1..=pieces {
        let z = a + (b - a) * (k as f64 / pieces as f64);
        let cur = (z, g(z)?);
        if prev.1.phase().signum() != cur.1.phase().signum() {
            let (mut lo, mut hi) = (prev.0, cur.0);
            let slo = prev.1.phase().signum();
            for _ in 0..200 {
                let mid = (lo + hi) * 0.5;
                let lm = g(mid)?;
                if lm.phase().signum() == slo {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if (hi - lo).norm() < 1e-15 {
                    break;
                }
            }
            let z = (lo + hi) * 0.5;
            let lz = g(z)?;
            if lz.residual() < START_TOL && lz.in_interval(interval) {
                return Ok(Some(z));
            }
        }
        prev = cur;
    }
    Ok(None)
}

/// Start points from horizontal probes across T0 ∪ T1, kept inside W for s2±.
pub fn canned_start(map: MapKey, interval: Interval) -> Result<Option<Complex64>> {
    for y in [1.5, 1.2, 2.0, 0.9, 0.7] {
        let a = Complex64::new(0.01, y);
        // W ends at the circle |τ − 1| = 1 below height 1
        let right = if map.branch().is_some() && y < 1.0 { (1.0 - (1.0 - y * y).sqrt() - 0.01).min(0.49) } else { 0.49 };
        let b = Complex64::new(right, y);
        if let Some(z) = find_start_on_segment(map, interval, a, b, 48)? {
            return Ok(Some(z));
        }
    }
    Ok(None)
}

/// CSV rows re, im, s_re, s_im, residual with 17 significant digits; ∞ is
/// written as "inf".
pub fn csv_rows(curve: &LocusCurve) -> Vec<[String; 5]> {
    let f = |x: f64| format!("{x:.16e}");
    curve
        .points
        .iter()
        .map(|p| {
            let (sr, si) = match p.value {
                ExtComplex::Finite(s) => (f(s.re), f(s.im)),
                ExtComplex::Infinity => ("inf".to_string(), "inf".to_string()),
            };
            [f(p.tau.re), f(p.tau.im), sr, si, f(p.residual)]
        })
        .collect()
}
