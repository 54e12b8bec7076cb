//! Circular-arc triangles, the reflections α, β, γ, δ generating Γ̄, and the
//! tessellations 𝒯 (copies of T0) and 𝒱 (copies of V0).

use crate::error::{Error, Result};
use crate::ext::{ExtComplex, Finite, Infinity};
use crate::modular::{rho, GroupElement};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::{HashSet, VecDeque};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI, TAU};
use std::fmt;

pub const MAX_DEPTH: usize = 8;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Circline {
    Circle { center: Complex64, radius: f64 },
    /// Points `point + s·direction`, s ∈ ℝ, together with ∞.
    Line { point: Complex64, direction: Complex64 },
}

impl Circline {
    /// Signed distance: negative inside a circle, positive left of a line.
    pub fn side_value(&self, z: Complex64) -> f64 {
        match *self {
            Circline::Circle { center, radius } => (z - center).norm() - radius,
            Circline::Line { point, direction } => (direction.conj() * (z - point)).im,
        }
    }

    pub fn distance(&self, z: Complex64) -> f64 {
        self.side_value(z).abs()
    }

    /// Reflection (inversion) in the circline.
    pub fn reflect(&self, z: ExtComplex) -> ExtComplex {
        match (*self, z) {
            (Circline::Circle { center, .. }, Infinity) => Finite(center),
            (Circline::Circle { center, radius }, Finite(w)) => {
                let d = w - center;
                if d == c(0.0, 0.0) {
                    Infinity
                } else {
                    Finite(center + radius * radius / d.conj())
                }
            }
            (Circline::Line { .. }, Infinity) => Infinity,
            (Circline::Line { point, direction }, Finite(w)) => Finite(point + direction * (direction.conj() * (w - point)).conj()),
        }
    }

    /// Plane n·X = h cutting the unit sphere in the stereographic image.
    fn sphere_plane(&self) -> ([f64; 3], f64) {
        let (n, h) = match *self {
            Circline::Circle { center, radius } => {
                let k = center.norm_sqr() - radius * radius;
                ([-2.0 * center.re, -2.0 * center.im, 1.0 - k], -(1.0 + k))
            }
            Circline::Line { point, direction } => {
                let (a, b) = (-direction.im, direction.re);
                let e = a * point.re + b * point.im;
                ([a, b, e], e)
            }
        };
        let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        ([n[0] / len, n[1] / len, n[2] / len], h / len)
    }

    /// Chordal distance on the unit sphere from `w` to the circline.
    pub fn chordal_distance(&self, w: ExtComplex) -> f64 {
        let p = w.to_sphere();
        let (n, h) = self.sphere_plane();
        let rad = (1.0 - h * h).max(0.0).sqrt();
        let np = n[0] * p[0] + n[1] * p[1] + n[2] * p[2];
        let v = [p[0] - np * n[0], p[1] - np * n[1], p[2] - np * n[2]];
        let vl = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if vl < 1e-300 {
            return (rad * rad + (np - h).powi(2)).sqrt();
        }
        let q = [h * n[0] + rad * v[0] / vl, h * n[1] + rad * v[1] / vl, h * n[2] + rad * v[2] / vl];
        ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt()
    }
}

/// One side of an arc polygon, traversed from its start to its end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SideArc {
    /// `point + s·direction` for s from s0 to s1 (either may be ±∞).
    Segment { point: Complex64, direction: Complex64, s0: f64, s1: f64 },
    /// `center + radius·e^{iθ}` for θ from theta0 to theta1 (either sense).
    Arc { center: Complex64, radius: f64, theta0: f64, theta1: f64 },
}

fn wrap_positive(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r == 0.0 {
        TAU
    } else {
        r
    }
}

impl SideArc {
    pub fn carrier(&self) -> Circline {
        match *self {
            SideArc::Segment { point, direction, .. } => Circline::Line { point, direction },
            SideArc::Arc { center, radius, .. } => Circline::Circle { center, radius },
        }
    }

    fn seg_point(point: Complex64, direction: Complex64, s: f64) -> ExtComplex {
        if s.is_infinite() {
            Infinity
        } else {
            Finite(point + direction * s)
        }
    }

    pub fn start(&self) -> ExtComplex {
        match *self {
            SideArc::Segment { point, direction, s0, .. } => Self::seg_point(point, direction, s0),
            SideArc::Arc { center, radius, theta0, .. } => Finite(center + Complex64::from_polar(radius, theta0)),
        }
    }

    pub fn end(&self) -> ExtComplex {
        match *self {
            SideArc::Segment { point, direction, s1, .. } => Self::seg_point(point, direction, s1),
            SideArc::Arc { center, radius, theta1, .. } => Finite(center + Complex64::from_polar(radius, theta1)),
        }
    }

    /// Natural parameter value of t ∈ [0, 1]: s on segments, θ on arcs.
    /// Infinite ends are reached through s = s0 + t/(1−t) or s1 − (1−t)/t.
    pub fn parameter(&self, t: f64) -> f64 {
        match *self {
            SideArc::Segment { s0, s1, .. } => match (s0.is_infinite(), s1.is_infinite()) {
                (false, false) => s0 + t * (s1 - s0),
                (false, true) => s0 + t / (1.0 - t),
                (true, false) => s1 - (1.0 - t) / t,
                (true, true) => (t - 0.5) / (t * (1.0 - t)),
            },
            SideArc::Arc { theta0, theta1, .. } => theta0 + t * (theta1 - theta0),
        }
    }

    pub fn point_at_parameter(&self, p: f64) -> ExtComplex {
        match *self {
            SideArc::Segment { point, direction, .. } => Self::seg_point(point, direction, p),
            SideArc::Arc { center, radius, .. } => Finite(center + Complex64::from_polar(radius, p)),
        }
    }

    pub fn point(&self, t: f64) -> ExtComplex {
        self.point_at_parameter(self.parameter(t))
    }

    /// A finite point strictly inside the side.
    pub fn midpoint(&self) -> Complex64 {
        match *self {
            SideArc::Segment { point, direction, s0, s1 } => {
                let s = match (s0.is_infinite(), s1.is_infinite()) {
                    (false, false) => 0.5 * (s0 + s1),
                    (false, true) => s0 + 1.0,
                    (true, false) => s1 - 1.0,
                    (true, true) => 0.0,
                };
                point + direction * s
            }
            SideArc::Arc { center, radius, theta0, theta1 } => center + Complex64::from_polar(radius, 0.5 * (theta0 + theta1)),
        }
    }

    pub fn is_circle(&self) -> bool {
        matches!(self, SideArc::Arc { .. })
    }

    /// Side from `a` through `m` to `b`.
    pub fn through(a: ExtComplex, m: Complex64, b: ExtComplex) -> SideArc {
        match (a, b) {
            (Infinity, Infinity) => SideArc::Segment { point: m, direction: c(1.0, 0.0), s0: f64::NEG_INFINITY, s1: f64::INFINITY },
            (Infinity, Finite(bb)) => {
                let u = (bb - m) / (bb - m).norm();
                SideArc::Segment { point: bb, direction: u, s0: f64::NEG_INFINITY, s1: 0.0 }
            }
            (Finite(aa), Infinity) => {
                let u = (m - aa) / (m - aa).norm();
                SideArc::Segment { point: aa, direction: u, s0: 0.0, s1: f64::INFINITY }
            }
            (Finite(aa), Finite(bb)) => {
                let (p, q) = (m - aa, bb - aa);
                let cross = (p.conj() * q).im;
                if cross.abs() <= 1e-13 * p.norm() * q.norm() {
                    let u = q / q.norm();
                    return SideArc::Segment { point: aa, direction: u, s0: 0.0, s1: q.norm() };
                }
                // circumcenter of a, m, b
                let center = aa + Complex64::i() * (p * q.norm_sqr() - q * p.norm_sqr()) / (2.0 * cross);
                let radius = (aa - center).norm();
                let ta = (aa - center).arg();
                let tb = (bb - center).arg();
                let tm = (m - center).arg();
                let dab = wrap_positive(tb - ta);
                let dam = wrap_positive(tm - ta);
                let theta1 = if dam < dab { ta + dab } else { ta - (TAU - dab) };
                SideArc::Arc { center, radius, theta0: ta, theta1 }
            }
        }
    }

    /// Image of the side under a group element.
    pub fn transform(&self, g: &GroupElement) -> SideArc {
        self.transform_between(g, g.apply(self.start()), g.apply(self.end()))
    }

    /// Image of the side with its endpoint images supplied exactly.
    pub fn transform_between(&self, g: &GroupElement, a: ExtComplex, b: ExtComplex) -> SideArc {
        let m = g.apply_c(self.midpoint()).finite().expect("group elements keep side interiors finite");
        SideArc::through(a, m, b)
    }

    pub fn reversed(&self) -> SideArc {
        match *self {
            SideArc::Segment { point, direction, s0, s1 } => SideArc::Segment { point, direction: -direction, s0: -s1, s1: -s0 },
            SideArc::Arc { center, radius, theta0, theta1 } => SideArc::Arc { center, radius, theta0: theta1, theta1: theta0 },
        }
    }

    /// Euclidean distance from z to the closed side.
    pub fn distance(&self, z: Complex64) -> f64 {
        match *self {
            SideArc::Segment { point, direction, s0, s1 } => {
                let s = (direction.conj() * (z - point)).re;
                let (lo, hi) = if s0 <= s1 { (s0, s1) } else { (s1, s0) };
                let sc = s.clamp(lo, hi);
                (z - (point + direction * sc)).norm()
            }
            SideArc::Arc { center, radius, theta0, theta1 } => {
                let (lo, hi) = if theta0 <= theta1 { (theta0, theta1) } else { (theta1, theta0) };
                let t = (z - center).arg();
                let inside = (0..3).any(|k| {
                    let tt = t + (k as f64 - 1.0) * TAU;
                    tt >= lo && tt <= hi
                });
                if inside {
                    ((z - center).norm() - radius).abs()
                } else {
                    let pa = center + Complex64::from_polar(radius, theta0);
                    let pb = center + Complex64::from_polar(radius, theta1);
                    (z - pa).norm().min((z - pb).norm())
                }
            }
        }
    }

    fn arc_length_param_range(&self) -> (f64, f64) {
        match *self {
            SideArc::Segment { s0, s1, .. } => (s0, s1),
            SideArc::Arc { theta0, theta1, .. } => (theta0, theta1),
        }
    }

    /// `n` points inside the side keeping arc-length `margin` from both ends.
    /// Infinite ends are replaced by the cutoff |s| ≤ `far`, with samples
    /// uniform in 1/(1+|s|) so that density grows towards the finite end.
    pub fn sample(&self, n: usize, margin: f64, far: f64) -> Vec<Complex64> {
        let (p0, p1) = self.arc_length_param_range();
        let scale = match *self {
            SideArc::Arc { radius, .. } => radius,
            SideArc::Segment { .. } => 1.0,
        };
        let m = margin / scale;
        let params: Vec<f64> = match (p0.is_infinite(), p1.is_infinite()) {
            (false, false) => {
                let dir = (p1 - p0).signum();
                let a = p0 + dir * m;
                let b = p1 - dir * m;
                (0..n).map(|k| a + (b - a) * (k as f64 + 0.5) / n as f64).collect()
            }
            (false, true) | (true, false) => {
                let (fin, sgn) = if p0.is_infinite() { (p1, -1.0) } else { (p0, 1.0) };
                let ua = 1.0 / (1.0 + m);
                let ub = 1.0 / (1.0 + far);
                (0..n)
                    .map(|k| {
                        let u = ua + (ub - ua) * (k as f64 + 0.5) / n as f64;
                        fin + sgn * (1.0 / u - 1.0)
                    })
                    .collect()
            }
            (true, true) => (0..n).map(|k| -far + 2.0 * far * (k as f64 + 0.5) / n as f64).collect(),
        };
        let mut order = params;
        if p0.is_infinite() && !p1.is_infinite() {
            order.reverse();
        }
        order.into_iter().filter_map(|p| self.point_at_parameter(p).finite()).collect()
    }
}

/// Circular-arc polygon with sides `sides[k]` from `vertices[k]` to
/// `vertices[k+1]`. Triangles have three vertices; W has four.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcTriangle {
    pub vertices: Vec<ExtComplex>,
    pub sides: Vec<SideArc>,
    /// True when the interior lies on the left of the listed boundary cycle.
    pub interior_orientation: bool,
    /// A point of the interior.
    pub interior_point: Complex64,
    /// Bounded by geodesics of ℍ, hence an intersection of half-regions.
    pub hyperbolic: bool,
}

impl ArcTriangle {
    pub fn transform(&self, g: &GroupElement) -> ArcTriangle {
        let vertices: Vec<ExtComplex> = self.vertices.iter().map(|v| g.apply(*v)).collect();
        let n = vertices.len();
        ArcTriangle {
            sides: self.sides.iter().enumerate().map(|(k, s)| s.transform_between(g, vertices[k], vertices[(k + 1) % n])).collect(),
            vertices,
            interior_orientation: self.interior_orientation ^ g.conjugate_first,
            interior_point: g.apply_c(self.interior_point).finite().expect("interior stays finite"),
            hyperbolic: self.hyperbolic,
        }
    }

    /// The same region with the boundary listed so that the interior is on the left.
    pub fn positively_oriented(&self) -> ArcTriangle {
        if self.interior_orientation {
            return self.clone();
        }
        let n = self.vertices.len();
        let vertices = (0..n).map(|k| self.vertices[(n - k) % n]).collect();
        let sides = (0..n).map(|k| self.sides[n - 1 - k].reversed()).collect();
        ArcTriangle { vertices, sides, interior_orientation: true, ..self.clone() }
    }

    pub fn has_vertex(&self, v: ExtComplex, tol: f64) -> bool {
        self.vertices.iter().any(|w| w.chordal(&v) <= tol)
    }

    pub fn cusps(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&k| match self.vertices[k] {
                Infinity => true,
                Finite(z) => z.im.abs() < 1e-12,
            })
            .collect()
    }

    pub fn boundary_distance(&self, z: Complex64) -> f64 {
        self.sides.iter().map(|s| s.distance(z)).fold(f64::INFINITY, f64::min)
    }

    fn strictly_inside(&self, z: Complex64) -> bool {
        if self.hyperbolic {
            if z.im <= 0.0 {
                return false;
            }
            self.sides.iter().all(|s| {
                let cl = s.carrier();
                let sign = cl.side_value(self.interior_point).signum();
                cl.side_value(z) * sign > 0.0
            })
        } else {
            self.winding_inside(z)
        }
    }

    /// Winding test after moving the interior point to ∞.
    fn winding_inside(&self, z: Complex64) -> bool {
        let p0 = self.interior_point;
        let m = |w: ExtComplex| match w {
            Infinity => c(0.0, 0.0),
            Finite(w) => (w - p0).inv(),
        };
        if z == p0 {
            return true;
        }
        let target = m(Finite(z));
        const N: usize = 2048;
        let mut total = 0.0;
        for side in &self.sides {
            let mut prev = m(side.start()) - target;
            for k in 1..=N {
                let cur = m(side.point(k as f64 / N as f64)) - target;
                total += (cur / prev).arg();
                prev = cur;
            }
        }
        (total / TAU).round() == 0.0
    }

    /// True iff τ lies within `slack` of the closed region.
    pub fn contains(&self, tau: ExtComplex, slack: f64) -> bool {
        let z = match tau {
            Infinity => return self.has_vertex(Infinity, 0.0),
            Finite(z) => z,
        };
        if self.hyperbolic {
            if z.im < -slack {
                return false;
            }
            return self.sides.iter().all(|s| {
                let cl = s.carrier();
                let sign = cl.side_value(self.interior_point).signum();
                cl.side_value(z) * sign >= -slack
            });
        }
        if self.boundary_distance(z) <= slack {
            return true;
        }
        self.winding_inside(z)
    }

    /// True iff τ is interior with distance greater than `margin` from the boundary.
    pub fn contains_strictly(&self, tau: Complex64, margin: f64) -> bool {
        self.strictly_inside(tau) && self.boundary_distance(tau) > margin
    }

    /// Bounding box of the region clipped at Im ≤ `top`.
    pub fn bounding_box(&self, top: f64) -> (f64, f64, f64, f64) {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for s in &self.sides {
            for k in 0..=256 {
                if let Some(p) = s.point(k as f64 / 256.0).finite() {
                    if p.im <= top {
                        xs.push(p.re);
                        ys.push(p.im);
                    }
                }
            }
            if s.start().is_infinite() || s.end().is_infinite() {
                if let SideArc::Segment { point, direction, .. } = *s {
                    if direction.im.abs() > 0.0 {
                        let sp = (top - point.im) / direction.im;
                        let p = point + direction * sp;
                        xs.push(p.re);
                        ys.push(top);
                    }
                }
            }
        }
        let f = |v: &Vec<f64>, mx: bool| v.iter().copied().fold(if mx { f64::NEG_INFINITY } else { f64::INFINITY }, |a, b| if mx { a.max(b) } else { a.min(b) });
        (f(&xs, false), f(&xs, true), f(&ys, false).max(0.0), f(&ys, true))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    Alpha,
    Beta,
    Gamma,
    Delta,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::Alpha, Letter::Beta, Letter::Gamma, Letter::Delta];

    pub fn element(&self) -> GroupElement {
        let (a, b, c, d) = match self {
            Letter::Alpha => (-1, 0, 0, 1),
            Letter::Beta => (0, 1, 1, 0),
            Letter::Gamma => (-1, 1, 0, 1),
            Letter::Delta => (1, 0, 1, -1),
        };
        GroupElement { a, b, c, d, conjugate_first: true }
    }

    pub fn symbol(&self) -> char {
        match self {
            Letter::Alpha => 'a',
            Letter::Beta => 'b',
            Letter::Gamma => 'g',
            Letter::Delta => 'd',
        }
    }

    pub fn from_char(ch: char) -> Result<Letter> {
        match ch {
            'a' | 'α' => Ok(Letter::Alpha),
            'b' | 'β' => Ok(Letter::Beta),
            'g' | 'γ' => Ok(Letter::Gamma),
            'd' | 'δ' => Ok(Letter::Delta),
            other => Err(Error::InvalidWord(other)),
        }
    }

    /// The fixed circline of the reflection.
    pub fn mirror(&self) -> Circline {
        match self {
            Letter::Alpha => Circline::Line { point: c(0.0, 0.0), direction: c(0.0, 1.0) },
            Letter::Beta => Circline::Circle { center: c(0.0, 0.0), radius: 1.0 },
            Letter::Gamma => Circline::Line { point: c(0.5, 0.0), direction: c(0.0, 1.0) },
            Letter::Delta => Circline::Circle { center: c(1.0, 0.0), radius: 1.0 },
        }
    }
}

pub fn reflect(letter: Letter, tau: ExtComplex) -> ExtComplex {
    letter.element().apply(tau)
}

/// Letters applied left to right: the word `l1 l2 … ln` is the map ln ∘ … ∘ l1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct TileWord(pub Vec<Letter>);

impl TileWord {
    pub fn parse(s: &str) -> Result<TileWord> {
        s.chars().filter(|ch| !ch.is_whitespace()).map(Letter::from_char).collect::<Result<Vec<_>>>().map(TileWord)
    }

    pub fn element(&self) -> GroupElement {
        self.0.iter().fold(GroupElement::IDENTITY, |g, l| l.element().compose(&g))
    }

    pub fn then(&self, other: &TileWord) -> TileWord {
        TileWord(self.0.iter().chain(other.0.iter()).copied().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for TileWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.symbol())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Canonical {
    T0,
    V0,
    U0,
    W,
    X0,
    Y0,
    Z0,
    Z0p,
}

fn down_to(p: Complex64) -> SideArc {
    SideArc::Segment { point: p, direction: c(0.0, -1.0), s0: f64::NEG_INFINITY, s1: 0.0 }
}

fn up_from(p: Complex64) -> SideArc {
    SideArc::Segment { point: p, direction: c(0.0, 1.0), s0: 0.0, s1: f64::INFINITY }
}

fn up_to(p: Complex64) -> SideArc {
    SideArc::Segment { point: p, direction: c(0.0, 1.0), s0: f64::NEG_INFINITY, s1: 0.0 }
}

fn down_from(p: Complex64) -> SideArc {
    SideArc::Segment { point: p, direction: c(0.0, -1.0), s0: 0.0, s1: f64::INFINITY }
}

fn arc(center: f64, radius: f64, theta0: f64, theta1: f64) -> SideArc {
    SideArc::Arc { center: c(center, 0.0), radius, theta0, theta1 }
}

pub fn canonical(name: Canonical) -> ArcTriangle {
    let i = c(0.0, 1.0);
    let r = rho();
    let rb = r.conj();
    let (vertices, sides, interior_point, hyperbolic) = match name {
        Canonical::T0 => (vec![Infinity, Finite(i), Finite(r)], vec![down_to(i), arc(0.0, 1.0, FRAC_PI_2, FRAC_PI_3), up_from(r)], c(0.25, 1.5), true),
        Canonical::V0 => (
            vec![Finite(c(0.0, 0.0)), Finite(c(1.0, 0.0)), Infinity],
            vec![arc(0.5, 0.5, PI, 0.0), up_from(c(1.0, 0.0)), down_to(c(0.0, 0.0))],
            c(0.5, 1.0),
            true,
        ),
        Canonical::U0 => (
            vec![Infinity, Finite(c(0.0, 0.0)), Finite(r)],
            vec![down_to(c(0.0, 0.0)), arc(1.0, 1.0, PI, 2.0 * FRAC_PI_3), up_from(r)],
            c(0.25, 1.0),
            true,
        ),
        Canonical::W => (
            vec![Infinity, Finite(r - 1.0), Finite(c(0.0, 0.0)), Finite(r)],
            vec![down_to(r - 1.0), arc(-1.0, 1.0, FRAC_PI_3, 0.0), arc(1.0, 1.0, PI, 2.0 * FRAC_PI_3), up_from(r)],
            c(0.0, 2.0),
            true,
        ),
        Canonical::X0 => (
            vec![Infinity, Finite(-i), Finite(r)],
            vec![up_to(-i), arc(0.0, 1.0, -FRAC_PI_2, -5.0 * FRAC_PI_3), up_from(r)],
            c(-2.0, 0.0),
            false,
        ),
        Canonical::Y0 => (
            vec![Infinity, Finite(i), Finite(rb)],
            vec![down_to(i), arc(0.0, 1.0, FRAC_PI_2, -FRAC_PI_3), down_from(rb)],
            c(2.0, 0.0),
            false,
        ),
        Canonical::Z0 => (
            vec![Infinity, Finite(c(0.0, 0.0)), Finite(rb)],
            vec![down_to(c(0.0, 0.0)), arc(1.0, 1.0, PI, 4.0 * FRAC_PI_3), up_from(rb)],
            c(0.25, 0.5),
            false,
        ),
        Canonical::Z0p => (
            vec![Infinity, Finite(c(0.0, 0.0)), Finite(rb)],
            vec![down_to(c(0.0, 0.0)), arc(1.0, 1.0, PI, -2.0 * FRAC_PI_3), down_from(rb)],
            c(3.0, 0.0),
            false,
        ),
    };
    ArcTriangle { vertices, sides, interior_orientation: true, interior_point, hyperbolic }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    T,
    V,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tile {
    pub word: TileWord,
    pub triangle: ArcTriangle,
    pub element: GroupElement,
}

impl Tile {
    pub fn from_word(family: Family, word: TileWord) -> Tile {
        let element = word.element();
        Tile { triangle: base_tile(family).transform(&element), word, element }
    }

    /// True when ∞ is a vertex of the tile.
    pub fn has_cusp_at_infinity(&self) -> bool {
        self.triangle.has_vertex(Infinity, 0.0)
    }
}

pub fn base_tile(family: Family) -> ArcTriangle {
    match family {
        Family::T => canonical(Canonical::T0),
        Family::V => canonical(Canonical::V0),
    }
}

/// Reflections in the sides of the base tile, as words over α, β, γ, δ.
///
/// For 𝒱 the order is (side opposite 0, side opposite 1, side opposite ∞):
/// τ ↦ 2 − τ̄ = γαγ, α, and inversion in |τ − 1/2| = 1/2, which is βγαγβ.
pub fn side_reflections(family: Family) -> Vec<TileWord> {
    use Letter::*;
    match family {
        Family::T => vec![TileWord(vec![Alpha]), TileWord(vec![Beta]), TileWord(vec![Gamma])],
        Family::V => vec![
            TileWord(vec![Gamma, Alpha, Gamma]),
            TileWord(vec![Alpha]),
            TileWord(vec![Beta, Gamma, Alpha, Gamma, Beta]),
        ],
    }
}

/// Breadth-first closure of the base tile under side reflections.
pub fn tessellate(family: Family, depth: usize) -> Result<Vec<Tile>> {
    if depth > MAX_DEPTH {
        return Err(Error::DepthExceeded(depth, MAX_DEPTH));
    }
    let gens: Vec<(TileWord, GroupElement)> = side_reflections(family).into_iter().map(|w| {
        let g = w.element();
        (w, g)
    }).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(GroupElement::IDENTITY.normalized());
    queue.push_back((TileWord::default(), GroupElement::IDENTITY, 0usize));
    while let Some((word, g, level)) = queue.pop_front() {
        out.push((word.clone(), g));
        if level == depth {
            continue;
        }
        for (w, r) in &gens {
            let h = g.compose(r);
            if seen.insert(h.normalized()) {
                queue.push_back((w.then(&word), h, level + 1));
            }
        }
    }
    let base = base_tile(family);
    Ok(out.into_iter().map(|(word, element)| Tile { triangle: base.transform(&element), word, element }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflection_examples() {
        let i = Finite(c(0.0, 1.0));
        let close = |a: ExtComplex, b: ExtComplex| a.chordal(&b) < 1e-14;
        assert!(close(reflect(Letter::Beta, i), i));
        assert!(close(reflect(Letter::Gamma, ExtComplex::new(0.5, 2.0)), ExtComplex::new(0.5, 2.0)));
        assert!(close(reflect(Letter::Delta, ExtComplex::new(0.0, 0.0)), ExtComplex::new(0.0, 0.0)));
        assert!(close(reflect(Letter::Delta, ExtComplex::new(2.0, 0.0)), ExtComplex::new(2.0, 0.0)));
        assert_eq!(reflect(Letter::Beta, Infinity), ExtComplex::new(0.0, 0.0));
    }

    #[test]
    fn mirrors_agree_with_elements() {
        for l in Letter::ALL {
            let z = ExtComplex::new(0.31, 0.77);
            assert!(reflect(l, z).chordal(&l.mirror().reflect(z)) < 1e-14);
        }
    }

    #[test]
    fn generators_of_translations_and_inversion() {
        let sigma = Letter::Gamma.element().compose(&Letter::Alpha.element());
        let chi = Letter::Alpha.element().compose(&Letter::Beta.element());
        let z = c(0.37, 0.9);
        assert!((sigma.apply_c(z).finite().unwrap() - (z + 1.0)).norm() < 1e-14);
        assert!((chi.apply_c(z).finite().unwrap() + z.inv()).norm() < 1e-14);
    }

    #[test]
    fn canonical_vertices() {
        let t0 = canonical(Canonical::T0);
        assert_eq!(t0.vertices, vec![Infinity, ExtComplex::new(0.0, 1.0), Finite(rho())]);
        for tri in [Canonical::T0, Canonical::V0, Canonical::U0, Canonical::W, Canonical::X0, Canonical::Y0, Canonical::Z0, Canonical::Z0p] {
            let t = canonical(tri);
            let n = t.vertices.len();
            for k in 0..n {
                assert!(t.sides[k].start().chordal(&t.vertices[k]) < 1e-12, "{tri:?} side {k} start");
                assert!(t.sides[k].end().chordal(&t.vertices[(k + 1) % n]) < 1e-12, "{tri:?} side {k} end");
            }
            assert!(t.contains(Finite(t.interior_point), 0.0));
        }
    }

    #[test]
    fn x0_has_the_long_unit_arc() {
        let x0 = canonical(Canonical::X0);
        let b = x0.sides[1];
        assert!(b.start().chordal(&ExtComplex::new(0.0, -1.0)) < 1e-12);
        assert!(b.end().chordal(&Finite(rho())) < 1e-12);
        assert!(b.distance(c(-1.0, 0.0)) < 1e-12);
        assert!(b.distance(c(0.0, 1.0)) < 1e-12);
        assert!(b.distance(c(1.0, 0.0)) > 0.1);
    }

    #[test]
    fn membership_examples() {
        let t0 = canonical(Canonical::T0);
        assert!(t0.contains(ExtComplex::new(0.0, 2.0), 0.0));
        assert!(t0.contains(ExtComplex::new(0.0, 1.0), 1e-12));
        assert!(!t0.contains(ExtComplex::new(0.4, 0.2), 0.0));
        let x0 = canonical(Canonical::X0);
        assert!(x0.contains(ExtComplex::new(0.25, 2.0), 0.0));
        assert!(!x0.contains(ExtComplex::new(0.25, -2.0), 0.0));
        assert!(!x0.contains(ExtComplex::new(0.1, 0.1), 0.0));
        assert!(!x0.contains(ExtComplex::new(0.8, 0.1), 0.0));
        let z0 = canonical(Canonical::Z0);
        assert!(z0.contains(ExtComplex::new(0.25, 5.0), 0.0));
        assert!(z0.contains(ExtComplex::new(0.25, -0.5), 0.0));
        assert!(!z0.contains(ExtComplex::new(0.25, -0.8), 0.0));
        let y0 = canonical(Canonical::Y0);
        assert!(y0.contains(ExtComplex::new(0.25, 2.0), 0.0));
        assert!(y0.contains(ExtComplex::new(0.75, -3.0), 0.0));
        assert!(!y0.contains(ExtComplex::new(0.25, -3.0), 0.0));
    }

    #[test]
    fn v0_angles_are_zero() {
        let v0 = canonical(Canonical::V0);
        // tangent directions at 0: the arc leaves vertically, as does the line
        if let SideArc::Arc { center, theta0, .. } = v0.sides[0] {
            let tangent = Complex64::from_polar(1.0, theta0) * Complex64::i() * -1.0;
            assert!((center - c(0.5, 0.0)).norm() < 1e-15);
            assert!(tangent.re.abs() < 1e-12);
        } else {
            panic!("V0 bottom side should be an arc");
        }
        assert_eq!(v0.cusps(), vec![0, 1, 2]);
    }

    #[test]
    fn tessellation_sizes() {
        assert_eq!(tessellate(Family::V, 0).unwrap().len(), 1);
        assert_eq!(tessellate(Family::V, 1).unwrap().len(), 4);
        assert_eq!(tessellate(Family::V, 2).unwrap().len(), 10);
        assert!(matches!(tessellate(Family::T, 9), Err(Error::DepthExceeded(9, 8))));
    }

    #[test]
    fn t_chain_appears_in_the_tessellation() {
        use Letter::*;
        let tiles = tessellate(Family::T, 5).unwrap();
        let elements: HashSet<GroupElement> = tiles.iter().map(|t| t.element.normalized()).collect();
        let chain = [Beta, Delta, Gamma, Beta, Delta];
        let mut word = TileWord::default();
        for l in chain {
            word = word.then(&TileWord(vec![l]));
            assert!(elements.contains(&word.element().normalized()), "missing {word}");
        }
    }

    #[test]
    fn image_tiles_keep_their_sides_consistent() {
        for tile in tessellate(Family::V, 2).unwrap() {
            let t = &tile.triangle;
            for k in 0..3 {
                assert!(t.sides[k].start().chordal(&t.vertices[k]) < 1e-9);
                assert!(t.sides[k].end().chordal(&t.vertices[(k + 1) % 3]) < 1e-9);
            }
            assert!(t.contains(Finite(t.interior_point), 0.0));
        }
    }
}
