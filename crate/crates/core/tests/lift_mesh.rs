use std::f64::consts::PI;

use cmc1_core::algebra::{hermitian_to_ball, Mat2C, SU2Element, ONE};
use cmc1_core::expr::{circle_path, BranchState};
use cmc1_core::families::{make_catenoid_cousin, make_horosphere, make_warped_catenoid, WeierstrassData, BASE_POINT};
use cmc1_core::lift::{
    closed_form_along, gauss_maps_from_lift, immerse, integrate_lift, integrate_lift_from, IntegratorOptions, LiftSource,
};
use cmc1_core::mesh::{sample_mesh, GridSpec, SurfaceMesh};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn spiral(n: usize) -> Vec<Complex64> {
    (0..n).map(|k| Complex64::from_polar(1.0 + 0.015 * k as f64, 0.06 * k as f64)).collect()
}

#[test]
fn warped_lift_matches_closed_form_at_100_points() {
    let d = make_warped_catenoid(2, 1, 0.5).unwrap();
    let path = spiral(100);
    let exact = closed_form_along(&d, &path, &BranchState::new(path[0])).unwrap();
    let numeric = integrate_lift(&d, &path, exact[0].f, &IntegratorOptions::default()).unwrap();
    let worst = exact.iter().zip(&numeric).map(|(a, b)| (a.f - b.f).frobenius_norm()).fold(0.0, f64::max);
    assert!(worst <= 1e-6, "{worst}");
}

#[test]
fn determinant_drift_without_renormalization() {
    let d = make_catenoid_cousin(0.8).unwrap();
    let opts = IntegratorOptions { renormalize: false, fixed_steps: Some(10_000), ..Default::default() };
    let path = [ONE, c(0.2, 1.5)];
    let (s, stats) = integrate_lift_from(&d, &path, Mat2C::identity(), &BranchState::new(ONE), &opts).unwrap();
    assert_eq!(stats.steps, 10_000);
    assert!((s[1].f.det() - ONE).norm() <= 1e-9);
    assert!(stats.det_drift <= 1e-9);
}

#[test]
fn homotopic_paths_agree() {
    let d = make_catenoid_cousin(0.37).unwrap();
    let opts = IntegratorOptions::default();
    let a = integrate_lift(&d, &[ONE, c(1.0, 1.0), c(2.0, 1.0)], Mat2C::identity(), &opts).unwrap();
    let b = integrate_lift(&d, &[ONE, c(2.0, 0.0), c(2.0, 1.0)], Mat2C::identity(), &opts).unwrap();
    assert!((a[2].f - b[2].f).frobenius_norm() < 1e-7);
}

#[test]
fn right_gauge_leaves_immersion_unchanged() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..50 {
        let f = Mat2C::new(
            c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)),
            c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)),
            c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)),
            c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)),
        )
        .normalize_det();
        let u = SU2Element::random(&mut rng);
        let a = immerse(&f).unwrap();
        let b = immerse(&(f * *u.matrix())).unwrap();
        assert!((*a.matrix() - *b.matrix()).frobenius_norm() <= 1e-12 * a.matrix().frobenius_norm());
    }
}

#[test]
fn loop_continuation_is_single_valued_on_the_surface() {
    // closed form has z^{+-1/2}: F changes by a right SU(2) factor around 0
    let d = make_warped_catenoid(2, 1, 0.5).unwrap();
    let mut path = vec![BASE_POINT];
    path.extend(circle_path(c(0.0, 0.0), 1.0, 0.0, 1.0, 256));
    let s = closed_form_along(&d, &path, &BranchState::new(BASE_POINT)).unwrap();
    let (f0, f1) = (s[0].f, s.last().unwrap().f);
    assert!((f0 - f1).frobenius_norm() > 0.1);
    let u = f0.inverse().unwrap() * f1;
    assert!(SU2Element::try_from(u).is_ok());
    let (a, b) = (immerse(&f0).unwrap(), immerse(&f1).unwrap());
    assert!((*a.matrix() - *b.matrix()).frobenius_norm() < 1e-8);

    let n = integrate_lift(&d, &path, f0, &IntegratorOptions::default()).unwrap();
    let b = immerse(&n.last().unwrap().f).unwrap();
    assert!((*a.matrix() - *b.matrix()).frobenius_norm() < 1e-8);
}

#[test]
fn gauss_maps_recovered_from_the_lift() {
    let d = make_warped_catenoid(2, 1, 0.5).unwrap();
    let path = spiral(100);
    let s = integrate_lift(&d, &path, Mat2C::identity(), &IntegratorOptions::default()).unwrap();
    let maps = gauss_maps_from_lift(&s).unwrap();
    for m in &maps {
        let exact = 0.75 * m.z + 0.5;
        assert!((m.g.unwrap() - exact).norm() <= 1e-5, "{:?}", m);
    }

    let h = make_horosphere();
    let s = integrate_lift(&h, &spiral(20), Mat2C::identity(), &IntegratorOptions::default()).unwrap();
    for m in gauss_maps_from_lift(&s).unwrap() {
        assert_eq!(m.g.unwrap(), c(0.0, 0.0));
    }
    assert!(gauss_maps_from_lift(&s[..2]).is_err());
}

fn chordal(a: Complex64, b: Complex64) -> f64 {
    2.0 * (a - b).norm() / ((1.0 + a.norm_sqr()).sqrt() * (1.0 + b.norm_sqr()).sqrt())
}

#[test]
fn hyperbolic_gauss_map_extends_to_regular_end() {
    let d = make_catenoid_cousin(0.8).unwrap();
    for phi in [0.3, 2.0] {
        let ray: Vec<Complex64> = (0..=400).map(|k| Complex64::from_polar((-0.025 * k as f64).exp(), phi)).collect();
        let mut path = vec![ONE];
        path.extend(circle_path(c(0.0, 0.0), 1.0, 0.0, phi / (2.0 * PI), 32));
        let spine = integrate_lift(&d, &path, Mat2C::identity(), &IntegratorOptions::default()).unwrap();
        let last = spine.last().unwrap();
        let (s, _) = integrate_lift_from(&d, &ray, last.f, &last.branch, &IntegratorOptions::default()).unwrap();
        let big: Vec<Complex64> = gauss_maps_from_lift(&s).unwrap().iter().map(|m| m.big_g.unwrap()).collect();
        // |z| drops from e^-7.5 to e^-10: G moves by a vanishing chordal amount
        let tail = &big[big.len() - 100..];
        let spread = tail.iter().map(|&x| chordal(x, *tail.last().unwrap())).fold(0.0, f64::max);
        assert!(spread < 1e-3, "{spread}");
    }
}

fn mesh_h_errors(data: &WeierstrassData, source: LiftSource) -> (usize, f64, f64) {
    let grid = GridSpec { r_min: 0.4, r_max: 2.5, nr: 9, ntheta: 16, theta: None };
    let m = sample_mesh(data, source, &grid).unwrap();
    let survey = m.curvature_survey(data, source, 60, 0.02).unwrap();
    let err = survey.iter().map(|r| (r.value - 1.0).abs()).fold(0.0, f64::max);
    let min_order = survey.iter().filter_map(|r| r.order).fold(f64::INFINITY, f64::min);
    (survey.len(), err, min_order)
}

#[test]
fn meshes_have_mean_curvature_one() {
    let numeric = LiftSource::Numeric(IntegratorOptions { tol: 1e-13, ..Default::default() });
    for (d, src) in [
        (make_horosphere(), numeric),
        (make_catenoid_cousin(0.8).unwrap(), numeric),
        (make_warped_catenoid(2, 1, 0.5).unwrap(), numeric),
        (make_warped_catenoid(2, 1, 0.5).unwrap(), LiftSource::ClosedForm),
    ] {
        let (n, err, order) = mesh_h_errors(&d, src);
        assert!(n >= 50, "{}: {n} points", d.name);
        assert!(err <= 1e-3, "{}: {err}", d.name);
        assert!(order >= 1.5, "{}: order {order}", d.name);
    }
}

/// Hyperbolic distance between vertices `(k1, i1)` and `(k2, i2)`, angles taken cyclically.
fn dist(m: &SurfaceMesh, k1: usize, i1: usize, k2: usize, i2: usize) -> f64 {
    let n = m.grid.ntheta;
    m.vertex(k1 % n, i1).distance(m.vertex(k2 % n, i2))
}

#[test]
fn catenoid_mesh_is_rotationally_symmetric() {
    let d = make_catenoid_cousin(0.8).unwrap();
    let grid = GridSpec { r_min: 0.3, r_max: 3.0, nr: 7, ntheta: 24, theta: None };
    let m = sample_mesh(&d, LiftSource::Numeric(IntegratorOptions::default()), &grid).unwrap();
    // every angular shift is an isometry of the vertex set
    let mut worst: f64 = 0.0;
    for shift in [1, 5, 11] {
        for k in 0..24 {
            for (i, j) in [(0, 6), (2, 3), (4, 4), (1, 5)] {
                worst = worst.max((dist(&m, k, i, k + 3, j) - dist(&m, k + shift, i, k + shift + 3, j)).abs());
            }
        }
    }
    assert!(worst < 1e-6, "{worst}");
    // rings are round: each lies on the Euclidean circle through three of its points
    for i in 0..grid.nr {
        let ring: Vec<[f64; 3]> = (0..24).map(|k| m.vertex(k, i).to_array()).collect();
        let (center, radius, normal) = circumcircle(ring[0], ring[8], ring[16]);
        for p in &ring {
            let d = sub(*p, center);
            assert!((norm(d) - radius).abs() < 1e-6, "ring {i}");
            assert!(dot(d, normal).abs() < 1e-6, "ring {i}");
        }
    }
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Center, radius and unit normal of the circle through three points.
fn circumcircle(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> ([f64; 3], f64, [f64; 3]) {
    let (u, v) = (sub(b, a), sub(c, a));
    let w = cross(u, v);
    let ww = dot(w, w);
    let t1 = cross(w, u);
    let t2 = cross(v, w);
    let (vv, uu) = (dot(v, v), dot(u, u));
    let off =
        [(t1[0] * vv + t2[0] * uu) / (2.0 * ww), (t1[1] * vv + t2[1] * uu) / (2.0 * ww), (t1[2] * vv + t2[2] * uu) / (2.0 * ww)];
    let center = [a[0] + off[0], a[1] + off[1], a[2] + off[2]];
    let n = norm(w);
    (center, norm(off), [w[0] / n, w[1] / n, w[2] / n])
}

#[test]
fn warped_l4_mesh_has_quarter_turn_symmetry() {
    let d = make_warped_catenoid(2, 4, 0.5).unwrap();
    let grid = GridSpec { r_min: 0.5, r_max: 2.0, nr: 5, ntheta: 48, theta: None };
    let m = sample_mesh(&d, LiftSource::ClosedForm, &grid).unwrap();
    let q = 12;
    let mut worst: f64 = 0.0;
    for k in 0..48 {
        for (i, j) in [(0, 4), (1, 2), (3, 3)] {
            for off in [0, 5, 17] {
                worst = worst.max((dist(&m, k, i, k + off, j) - dist(&m, k + q, i, k + q + off, j)).abs());
            }
        }
    }
    assert!(worst < 1e-6, "{worst}");
    // an eighth turn is not a symmetry
    let (a, b) = (dist(&m, 0, 0, 3, 4), dist(&m, 6, 0, 9, 4));
    assert!((a - b).abs() > 1e-3);
}

#[test]
fn cut_away_and_ball_containment() {
    let d = make_catenoid_cousin(0.8).unwrap();
    let grid = GridSpec { theta: Some((0.0, PI)), ..Default::default() };
    let m = sample_mesh(&d, LiftSource::Numeric(IntegratorOptions::default()), &grid).unwrap();
    assert_eq!(m.theta_range, (0.0, PI));
    assert!(m.vertices.iter().all(|v| v.norm() < 1.0));
    assert!(m.det_drift < 1e-12);
    let origin = hermitian_to_ball(&immerse(&Mat2C::identity()).unwrap());
    assert_eq!(origin.norm(), 0.0);
}
