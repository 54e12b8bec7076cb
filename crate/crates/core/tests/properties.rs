//! Property tests for the structural invariants of the library.

use modatlas::critical::{locate, truncated_boundary, winding, CriticalForm, DEFAULT_GRID, DEFAULT_QUAD_POINTS, DEFAULT_TRUNCATION};
use modatlas::ext::{ExtComplex, Finite};
use modatlas::geometry::{reflect, tessellate, Family, Letter, Tile, TileWord};
use modatlas::locus::{canned_start, trace, Interval};
use modatlas::modular::{Eisenstein, GroupElement};
use modatlas::ode::{aux_vector, delta_power, j_roots, AuxFamily};
use modatlas::polymorphic::{in_w, s_derivative, s_map, sqrt_e4_on_w, MapKey};
use modatlas::qseries::QSeries;
use modatlas::verify::{run_suite, Suite, TolProfile};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

const TOL: f64 = 1e-12;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

fn upper() -> impl Strategy<Value = Complex64> {
    (-1.5f64..1.5, 0.4f64..2.5).prop_map(|(x, y)| c(x, y))
}

/// Elements of SL2(Z) as short words in S and T^±1.
fn element() -> impl Strategy<Value = GroupElement> {
    prop::collection::vec(0u8..3, 0..7).prop_map(|w| {
        let t_inv = GroupElement::T.inverse();
        w.into_iter().fold(GroupElement::IDENTITY, |g, k| {
            let step = match k {
                0 => GroupElement::S,
                1 => GroupElement::T,
                _ => t_inv,
            };
            step.compose(&g)
        })
    })
}

fn letter() -> impl Strategy<Value = Letter> {
    prop::sample::select(Letter::ALL.to_vec())
}

fn apply(g: &GroupElement, z: Complex64) -> Complex64 {
    g.apply(Finite(z)).finite().expect("ℍ maps to ℍ")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn composition_is_associative_with_unit_determinant(f in element(), g in element(), h in element()) {
        prop_assert_eq!(f.compose(&g).compose(&h), f.compose(&g.compose(&h)));
        prop_assert_eq!(f.compose(&g).det(), 1);
        prop_assert_eq!(f.compose(&GroupElement::IDENTITY), f);
    }

    #[test]
    fn reflections_are_involutions(l in letter(), z in upper()) {
        let back = reflect(l, reflect(l, Finite(z)));
        prop_assert!(back.chordal(&Finite(z)) < 1e-14);
    }

    #[test]
    fn reflections_generate_translation_and_inversion(z in upper()) {
        let sigma = Letter::Gamma.element().compose(&Letter::Alpha.element());
        let chi = Letter::Alpha.element().compose(&Letter::Beta.element());
        prop_assert!((apply(&sigma, z) - (z + 1.0)).norm() < 1e-14);
        prop_assert!((apply(&chi, z) + z.inv()).norm() < 1e-14 * (1.0 + z.inv().norm()));
    }

    #[test]
    fn eisenstein_series_are_periodic_and_real_symmetric(z in upper()) {
        let e = Eisenstein::at(z).unwrap();
        let shifted = Eisenstein::at(z + 1.0).unwrap();
        let mirrored = Eisenstein::at(-z.conj()).unwrap();
        for (a, b, m) in [(e.e2, shifted.e2, mirrored.e2), (e.e4, shifted.e4, mirrored.e4), (e.e6, shifted.e6, mirrored.e6)] {
            let scale = a.norm().max(1.0);
            prop_assert!((a - b).norm() < 1e-12 * scale);
            prop_assert!((a.conj() - m).norm() < 1e-12 * scale);
        }
    }

    #[test]
    fn discriminant_is_the_cubic_combination_and_nonzero(z in upper()) {
        let e = Eisenstein::at(z).unwrap();
        let cubic = (e.e4 * e.e4 * e.e4 - e.e6 * e.e6) / 1728.0;
        prop_assert!(e.delta.norm() > 0.0);
        // relative to the size of the cancelling terms
        prop_assert!((e.delta - cubic).norm() < 1e-10 * (e.e4.norm().powi(3) + e.e6.norm_sqr()) / 1728.0);
    }

    #[test]
    fn weight_laws_hold_under_the_group(z in upper(), g in element()) {
        let w = apply(&g, z);
        let x = g.cocycle(z);
        let (e, f) = (Eisenstein::at(z).unwrap(), Eisenstein::at(w).unwrap());
        prop_assert!(rel(f.e4, e.e4 * x.powi(4)) < 1e-10);
        prop_assert!(rel(f.e6, e.e6 * x.powi(6)) < 1e-10);
        prop_assert!(rel(f.delta, e.delta * x.powi(12)) < 1e-10);
        prop_assert!(rel(f.j(), e.j()) < 1e-10);
        let quasi = e.e2 * x * x - c(0.0, 6.0 / PI) * (g.c as f64) * x;
        prop_assert!(rel(f.e2, quasi) < 1e-10);
    }

    #[test]
    fn s4_and_s6_commute_with_the_group(z in upper(), g in element()) {
        for k in [MapKey::S4, MapKey::S6] {
            let lhs = s_map(k, apply(&g, z), TOL).unwrap();
            let rhs = g.apply(s_map(k, z, TOL).unwrap());
            prop_assert!(lhs.chordal(&rhs) < 1e-9, "{} at {}", k, z);
        }
    }

    #[test]
    fn s4_and_s6_respect_the_imaginary_axis_reflection(z in upper()) {
        for k in [MapKey::S4, MapKey::S6] {
            let lhs = s_map(k, -z.conj(), TOL).unwrap();
            let rhs = match s_map(k, z, TOL).unwrap() {
                Finite(w) => Finite(-w.conj()),
                inf => inf,
            };
            prop_assert!(lhs.chordal(&rhs) < 1e-9);
        }
    }

    #[test]
    fn s4_has_no_critical_points(x in 0.0f64..1.0, y in 0.1f64..3.0) {
        let d = s_derivative(MapKey::S4, c(x, y), TOL);
        prop_assert!(d.map(|d| d.norm() > 0.0).unwrap_or(true));
    }

    #[test]
    fn root_of_e4_on_w_squares_back(x in -0.5f64..0.5, y in 0.3f64..2.5) {
        let z = c(x, y);
        prop_assume!(in_w(z));
        let e4 = Eisenstein::at(z).unwrap().e4;
        prop_assume!(e4.norm() > 1e-6);
        let r = sqrt_e4_on_w(z, TOL).unwrap();
        prop_assert!(rel(r * r, e4) < 1e-10);
    }

    #[test]
    fn auxiliary_ratios_reproduce_the_maps(x in -0.45f64..0.45, y in 0.8f64..2.0) {
        let z = c(x, y);
        let e = Eisenstein::at(z).unwrap();
        let j = e.j();
        prop_assume!(j.norm() > 0.05 && (j - 1.0).norm() > 0.05);
        for (fam, k) in [(AuxFamily::A, MapKey::S4), (AuxFamily::B, MapKey::S6), (AuxFamily::C, MapKey::S2Plus)] {
            let v = aux_vector(fam, z, TOL).unwrap();
            let s = s_map(k, z, TOL).unwrap();
            prop_assert!(Finite(v.w1 / v.w2).chordal(&s) < 1e-9, "{:?} at {}", fam, z);
        }
    }

    #[test]
    fn e6_factors_through_j_and_delta(x in -0.4f64..0.4, y in 1.0f64..2.5) {
        let z = c(x, y);
        let e = Eisenstein::at(z).unwrap();
        let (_, jm1) = j_roots(z, TOL).unwrap();
        let rebuilt = jm1 * delta_power(0.5, z).unwrap() * (24.0 * 3f64.sqrt());
        prop_assert!(rel(e.e6, rebuilt) < 1e-9);
    }

    #[test]
    fn series_product_commutes_and_associates(
        a in prop::collection::vec(-5i32..5, 6),
        b in prop::collection::vec(-5i32..5, 6),
        d in prop::collection::vec(-5i32..5, 6),
    ) {
        let mk = |v: &[i32]| QSeries::from_coefficients(v.iter().map(|&x| c(x as f64, 0.0)).collect(), 0);
        let (a, b, d) = (mk(&a), mk(&b), mk(&d));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&d), a.mul(&b.mul(&d)));
    }
}

#[test]
fn tiles_at_depth_two_have_disjoint_interiors() {
    let tiles = tessellate(Family::V, 2).unwrap();
    for (i, t) in tiles.iter().enumerate() {
        let p = t.triangle.interior_point;
        for (j, u) in tiles.iter().enumerate() {
            if i != j {
                assert!(!u.triangle.contains_strictly(p, 1e-9), "{} meets {}", t.word, u.word);
            }
        }
    }
}

#[test]
fn critical_points_move_with_translated_tiles() {
    let base = Tile::from_word(Family::V, TileWord::default());
    let shifted = Tile::from_word(Family::V, TileWord::parse("ag").unwrap());
    for form in CriticalForm::ALL {
        let a = locate(form, &base, DEFAULT_GRID, DEFAULT_TRUNCATION, TOL).unwrap();
        let b = locate(form, &shifted, DEFAULT_GRID, DEFAULT_TRUNCATION, TOL).unwrap();
        assert_eq!(a.len(), b.len());
        for r in &a {
            let target = r.location + 1.0;
            assert!(b.iter().any(|s| (s.location - target).norm() < 1e-10), "{form} at {}", r.location);
        }
    }
}

#[test]
fn winding_is_stable_under_refinement_and_height() {
    for word in ["", "ad", "bgagb", "gag"] {
        let tile = Tile::from_word(Family::V, TileWord::parse(word).unwrap());
        for form in CriticalForm::ALL {
            let mut counts = Vec::new();
            for h in [3.0, 4.0, 5.0] {
                let contour = truncated_boundary(&tile.triangle, h).unwrap();
                for q in [DEFAULT_QUAD_POINTS, 2 * DEFAULT_QUAD_POINTS] {
                    counts.push(winding(&form.target(), &contour, q, TOL).unwrap().count);
                }
            }
            assert!(counts.windows(2).all(|w| w[0] == w[1]), "{word:?} {form}: {counts:?}");
        }
    }
}

#[test]
fn traced_points_are_evenly_spaced() {
    let start = canned_start(MapKey::S4, Interval::Neg).unwrap().unwrap();
    let curve = trace(MapKey::S4, Interval::Neg, start, 0.01, 600, None).unwrap();
    for (p, q) in curve.points.iter().zip(&curve.points[1..]) {
        let d = (q.tau - p.tau).norm();
        let h = if q.step > 0.0 { q.step } else { p.step };
        assert!(d > 0.2 * h && d < 2.0 * h, "gap {d} for step {h}");
        assert!(matches!(q.value, ExtComplex::Finite(w) if w.re < 0.0));
    }
}

#[test]
fn suites_are_deterministic_for_a_seed() {
    for suite in [Suite::Identities, Suite::Ode] {
        assert_eq!(run_suite(suite, 11, TolProfile::DEFAULT), run_suite(suite, 11, TolProfile::DEFAULT));
    }
}
