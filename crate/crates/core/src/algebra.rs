//! 2x2 complex matrices, SU(2), Möbius actions, and the models of
//! hyperbolic 3-space used by the rest of the crate.
//!
//! Hyperbolic space is realized as positive Hermitian matrices of
//! determinant one (`f = F F*`).  The hyperboloid coordinates of such an
//! `f` are `x0 = (f11 + f22)/2`, `x1 + i x2 = f12`, `x3 = (f11 - f22)/2`,
//! and the Poincaré ball point is `(x1, x2, x3) / (1 + x0)`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{BranchState, MeroExpr};

pub const I: Complex64 = Complex64::new(0.0, 1.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A point of the Riemann sphere.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ExtComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtComplex {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            ExtComplex::Finite(z) => Some(z),
            ExtComplex::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtComplex::Infinity)
    }
}

impl From<Complex64> for ExtComplex {
    fn from(z: Complex64) -> Self {
        ExtComplex::Finite(z)
    }
}

impl fmt::Display for ExtComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtComplex::Finite(z) => write!(f, "{z}"),
            ExtComplex::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mat2C {
    pub a11: Complex64,
    pub a12: Complex64,
    pub a21: Complex64,
    pub a22: Complex64,
}

impl Mat2C {
    pub const fn new(a11: Complex64, a12: Complex64, a21: Complex64, a22: Complex64) -> Self {
        Self { a11, a12, a21, a22 }
    }

    pub fn from_real(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Self::new(a11.into(), a12.into(), a21.into(), a22.into())
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub fn diag(d1: Complex64, d2: Complex64) -> Self {
        Self::new(d1, ZERO, ZERO, d2)
    }

    pub fn det(&self) -> Complex64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn trace(&self) -> Complex64 {
        self.a11 + self.a22
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.a11 * s, self.a12 * s, self.a21 * s, self.a22 * s)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::new(self.a11.conj(), self.a21.conj(), self.a12.conj(), self.a22.conj())
    }

    pub fn adjugate(&self) -> Self {
        Self::new(self.a22, -self.a12, -self.a21, self.a11)
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() == 0.0 || !d.is_finite() {
            return None;
        }
        Some(self.adjugate().scale(d.inv()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        (self.a11.norm_sqr() + self.a12.norm_sqr() + self.a21.norm_sqr() + self.a22.norm_sqr()).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.a11.is_finite() && self.a12.is_finite() && self.a21.is_finite() && self.a22.is_finite()
    }

    /// Rescales to unit determinant by dividing through by `sqrt(det)`.
    pub fn normalize_det(&self) -> Self {
        let s = self.det().sqrt();
        self.scale(s.inv())
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }
}

impl Add for Mat2C {
    type Output = Mat2C;
    fn add(self, o: Mat2C) -> Mat2C {
        Mat2C::new(self.a11 + o.a11, self.a12 + o.a12, self.a21 + o.a21, self.a22 + o.a22)
    }
}

impl Sub for Mat2C {
    type Output = Mat2C;
    fn sub(self, o: Mat2C) -> Mat2C {
        Mat2C::new(self.a11 - o.a11, self.a12 - o.a12, self.a21 - o.a21, self.a22 - o.a22)
    }
}

impl Neg for Mat2C {
    type Output = Mat2C;
    fn neg(self) -> Mat2C {
        self.scale(-ONE)
    }
}

impl Mul for Mat2C {
    type Output = Mat2C;
    fn mul(self, o: Mat2C) -> Mat2C {
        Mat2C::new(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )
    }
}

impl Mul<Complex64> for Mat2C {
    type Output = Mat2C;
    fn mul(self, s: Complex64) -> Mat2C {
        self.scale(s)
    }
}

impl Mul<f64> for Mat2C {
    type Output = Mat2C;
    fn mul(self, s: f64) -> Mat2C {
        self.scale(s.into())
    }
}

/// `(a11 w + a12) / (a21 w + a22)` on the Riemann sphere.
pub fn mobius_act(a: &Mat2C, w: ExtComplex) -> ExtComplex {
    match w {
        ExtComplex::Finite(w) => {
            let num = a.a11 * w + a.a12;
            let den = a.a21 * w + a.a22;
            if den.norm() == 0.0 {
                ExtComplex::Infinity
            } else {
                ExtComplex::Finite(num / den)
            }
        }
        ExtComplex::Infinity => {
            if a.a21.norm() == 0.0 {
                ExtComplex::Infinity
            } else {
                ExtComplex::Finite(a.a11 / a.a21)
            }
        }
    }
}

/// Finite-valued Möbius action; returns a non-finite value at the pole.
pub fn mobius(a: &Mat2C, w: Complex64) -> Complex64 {
    (a.a11 * w + a.a12) / (a.a21 * w + a.a22)
}

const SU2_TOL: f64 = 1e-12;

/// Element of SU(2): `[[a, b], [-conj(b), conj(a)]]` with `|a|^2 + |b|^2 = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SU2Element(Mat2C);

impl SU2Element {
    pub fn identity() -> Self {
        SU2Element(Mat2C::identity())
    }

    pub fn minus_identity() -> Self {
        SU2Element(-Mat2C::identity())
    }

    /// Builds `[[a, b], [-conj(b), conj(a)]]` after normalizing `(a, b)`.
    pub fn from_pair(a: Complex64, b: Complex64) -> Self {
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let (a, b) = (a / n, b / n);
        SU2Element(Mat2C::new(a, b, -b.conj(), a.conj()))
    }

    /// Unit quaternion `w + x i + y j + z k`.
    pub fn from_quaternion(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self::from_pair(Complex64::new(w, x), Complex64::new(y, z))
    }

    /// Diagonal element `diag(e^{i phi}, e^{-i phi})`.
    pub fn diagonal(phi: f64) -> Self {
        let e = Complex64::from_polar(1.0, phi);
        SU2Element(Mat2C::diag(e, e.conj()))
    }

    /// Haar-random element: a normalized 4-dimensional Gaussian.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let q: [f64; 4] =
                [rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)];
            let n = q.iter().map(|v| v * v).sum::<f64>().sqrt();
            if n > 1e-8 {
                return Self::from_quaternion(q[0] / n, q[1] / n, q[2] / n, q[3] / n);
            }
        }
    }

    pub fn matrix(&self) -> &Mat2C {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        SU2Element(self.0.adjoint())
    }

    pub fn rotation_angle(&self) -> f64 {
        rotation_angle(self)
    }
}

impl TryFrom<Mat2C> for SU2Element {
    type Error = Error;

    fn try_from(m: Mat2C) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NotSu2("non-finite entries".into()));
        }
        let unit = m.a11.norm_sqr() + m.a12.norm_sqr();
        let dev = [(m.a22 - m.a11.conj()).norm(), (m.a21 + m.a12.conj()).norm(), (unit - 1.0).abs()];
        if dev.iter().any(|d| *d > SU2_TOL) {
            return Err(Error::NotSu2(format!("structure deviation {:.3e}", dev.iter().cloned().fold(0.0, f64::max))));
        }
        Ok(SU2Element(m))
    }
}

impl Mul for SU2Element {
    type Output = SU2Element;
    fn mul(self, o: SU2Element) -> SU2Element {
        SU2Element(self.0 * o.0)
    }
}

impl From<SU2Element> for Mat2C {
    fn from(a: SU2Element) -> Mat2C {
        a.0
    }
}

/// `theta(a) = 2C` where the eigenvalues of `a` are `{-e^{+iC}, -e^{-iC}}`, `C in [0, pi]`.
///
/// Computed as `2(pi - atan2(|Im part|, Re a11))`, which equals
/// `2(pi - arccos(tr(a)/2))` without the loss of precision arccos has near
/// `+-id`.  Note `theta(-id) = 0` and `theta(id) = 2 pi`.
pub fn rotation_angle(a: &SU2Element) -> f64 {
    let m = a.matrix();
    let w = m.a11.re;
    let v = (m.a11.im * m.a11.im + m.a12.norm_sqr()).sqrt();
    2.0 * (PI - v.atan2(w))
}

/// Rotation angle of an arbitrary matrix, rejecting anything outside SU(2).
pub fn rotation_angle_of(m: &Mat2C) -> Result<f64> {
    let a = SU2Element::try_from(*m)?;
    Ok(rotation_angle(&a))
}

/// Positive Hermitian matrix of determinant one: a point of H^3.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HermitianPoint(Mat2C);

impl HermitianPoint {
    pub fn new(m: Mat2C) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NotHermitianPoint("non-finite entries".into()));
        }
        let scale = m.a11.norm().max(m.a22.norm()).max(1.0);
        let herm = (m.a11.im.abs() + m.a22.im.abs() + (m.a12 - m.a21.conj()).norm()) / scale;
        if herm > 1e-9 {
            return Err(Error::NotHermitianPoint(format!("not Hermitian ({herm:.3e})")));
        }
        let tr = m.a11.re + m.a22.re;
        if tr <= 0.0 || m.a11.re <= 0.0 {
            return Err(Error::NotHermitianPoint("not positive definite".into()));
        }
        let det = m.det().re;
        if (det - 1.0).abs() > 1e-9 * scale * scale {
            return Err(Error::NotHermitianPoint(format!("det = {det}")));
        }
        Ok(HermitianPoint(m))
    }

    pub fn identity() -> Self {
        HermitianPoint(Mat2C::identity())
    }

    pub fn matrix(&self) -> &Mat2C {
        &self.0
    }

    /// Hyperboloid coordinates `(x0, x1, x2, x3)` with `-x0^2 + |x|^2 = -1`.
    pub fn minkowski(&self) -> [f64; 4] {
        let m = &self.0;
        [0.5 * (m.a11.re + m.a22.re), m.a12.re, m.a12.im, 0.5 * (m.a11.re - m.a22.re)]
    }

    /// Hyperbolic distance, `cosh d = tr(f adj(h)) / 2`.
    pub fn distance(&self, other: &HermitianPoint) -> f64 {
        let c = 0.5 * (self.0 * other.0.adjugate()).trace().re;
        c.max(1.0).acosh()
    }

    /// Upper half-space coordinates `(xi, t)`, with `f = (1/t) [[t^2 + |xi|^2, xi], [conj(xi), 1]]`.
    pub fn to_upper_half_space(&self) -> (Complex64, f64) {
        let t = 1.0 / self.0.a22.re;
        (self.0.a12 * t, t)
    }

    /// Isometric action `f -> a f a*`.
    pub fn transform(&self, a: &Mat2C) -> Result<HermitianPoint> {
        HermitianPoint::new(*a * self.0 * a.adjoint())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BallPoint {
    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Hyperbolic distance in the ball model.
    pub fn distance(&self, o: &BallPoint) -> f64 {
        let d2 = (self.x - o.x).powi(2) + (self.y - o.y).powi(2) + (self.z - o.z).powi(2);
        let n1 = 1.0 - self.norm().powi(2);
        let n2 = 1.0 - o.norm().powi(2);
        (1.0 + 2.0 * d2 / (n1 * n2)).acosh()
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

pub fn hermitian_to_ball(f: &HermitianPoint) -> BallPoint {
    let [x0, x1, x2, x3] = f.minkowski();
    let d = 1.0 + x0;
    BallPoint { x: x1 / d, y: x2 / d, z: x3 / d }
}

/// Schwarzian derivative `h'''/h' - (3/2)(h''/h')^2`, the `dz^2` coefficient of `S(h)`.
pub fn schwarzian(h: &MeroExpr, z: Complex64) -> Result<Complex64> {
    schwarzian_on_branch(h, z, &BranchState::new(z))
}

pub fn schwarzian_on_branch(h: &MeroExpr, z: Complex64, branch: &BranchState) -> Result<Complex64> {
    let d1 = h.differentiate();
    let d2 = d1.differentiate();
    let d3 = d2.differentiate();
    let v1 = d1.eval_on(z, branch);
    let v2 = d2.eval_on(z, branch);
    let v3 = d3.eval_on(z, branch);
    if !v1.is_finite() || !v2.is_finite() || !v3.is_finite() || v1.norm() < 1e-300 {
        return Err(Error::CriticalPoint(z));
    }
    let r = v2 / v1;
    let s = v3 / v1 - 1.5 * r * r;
    if !s.is_finite() {
        return Err(Error::CriticalPoint(z));
    }
    Ok(s)
}

/// Möbius image `a * h` as an expression.
pub fn mobius_expr(a: &Mat2C, h: &MeroExpr) -> MeroExpr {
    let num = MeroExpr::constant(a.a11) * h.clone() + MeroExpr::constant(a.a12);
    let den = MeroExpr::constant(a.a21) * h.clone() + MeroExpr::constant(a.a22);
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn mobius_identity_and_pole() {
        let w = c(5.0, 2.0);
        assert_eq!(mobius_act(&Mat2C::identity(), w.into()), ExtComplex::Finite(w));
        let j = Mat2C::from_real(0.0, 1.0, -1.0, 0.0);
        assert_eq!(mobius_act(&j, c(0.0, 0.0).into()), ExtComplex::Infinity);
        assert_eq!(mobius_act(&j, ExtComplex::Infinity), ExtComplex::Finite(c(0.0, 0.0)));
        assert_eq!(mobius_act(&Mat2C::identity(), ExtComplex::Infinity), ExtComplex::Infinity);
    }

    #[test]
    fn mobius_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let a = SU2Element::random(&mut rng);
            let b = SU2Element::random(&mut rng);
            let w = c(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let two_step = mobius_act(a.matrix(), mobius_act(b.matrix(), w.into()));
            let once = mobius_act(&(a * b).0, w.into());
            match (two_step, once) {
                (ExtComplex::Finite(u), ExtComplex::Finite(v)) => {
                    assert!((u - v).norm() <= 1e-9 * (1.0 + u.norm()))
                }
                (x, y) => assert_eq!(x, y),
            }
        }
    }

    #[test]
    fn rotation_angles() {
        assert_eq!(rotation_angle(&SU2Element::minus_identity()), 0.0);
        assert_relative_eq!(rotation_angle(&SU2Element::identity()), 2.0 * PI);
        let d = SU2Element::try_from(Mat2C::diag(I, -I)).unwrap();
        assert_relative_eq!(rotation_angle(&d), PI, epsilon = 1e-15);
        assert!(rotation_angle_of(&Mat2C::from_real(2.0, 0.0, 0.0, 0.5)).is_err());
    }

    #[test]
    fn rotation_angle_matches_eigenvalues() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let a = SU2Element::random(&mut rng);
            let theta = rotation_angle(&a);
            let cc = theta / 2.0;
            // eigenvalues -e^{+-iC} have trace -2 cos C
            assert_relative_eq!(a.matrix().trace().re, -2.0 * cc.cos(), epsilon = 1e-12);
            // agrees with the arccos form away from the boundary
            let alt = 2.0 * (PI - (a.matrix().trace().re / 2.0).clamp(-1.0, 1.0).acos());
            assert!((alt - theta).abs() < 1e-7);
        }
    }

    #[test]
    fn rotation_angle_conjugation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let a = SU2Element::random(&mut rng);
            let u = SU2Element::random(&mut rng);
            let b = u * a * u.inverse();
            assert!((rotation_angle(&a) - rotation_angle(&b)).abs() <= 1e-12);
        }
    }

    #[test]
    fn determinant_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let mut m = || {
                Mat2C::new(
                    c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)),
                    c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)),
                    c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)),
                    c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)),
                )
            };
            let (a, b) = (m(), m());
            assert!(((a * b).det() - a.det() * b.det()).norm() <= 1e-12 * (1.0 + (a.det() * b.det()).norm()));
        }
    }

    #[test]
    fn ball_coordinates() {
        let o = hermitian_to_ball(&HermitianPoint::identity());
        assert_eq!(o.to_array(), [0.0, 0.0, 0.0]);
        let e = std::f64::consts::E;
        let f = HermitianPoint::new(Mat2C::from_real(e, 0.0, 0.0, 1.0 / e)).unwrap();
        let b = hermitian_to_ball(&f);
        assert_relative_eq!(b.z, 0.5f64.tanh(), epsilon = 1e-15);
        assert_relative_eq!(b.z, 0.46211715726000974, epsilon = 1e-15);
        assert!(HermitianPoint::new(Mat2C::from_real(-1.0, 0.0, 0.0, -1.0)).is_err());
    }

    #[test]
    fn su2_action_is_ball_isometry() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let random_point = |rng: &mut ChaCha8Rng| {
            let f = Mat2C::new(
                c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            )
            .normalize_det();
            HermitianPoint::new(f * f.adjoint()).unwrap()
        };
        for _ in 0..200 {
            let p = random_point(&mut rng);
            let q = random_point(&mut rng);
            let u = SU2Element::random(&mut rng);
            let (bp, bq) = (hermitian_to_ball(&p), hermitian_to_ball(&q));
            assert!(bp.norm() < 1.0 && bq.norm() < 1.0);
            let d0 = bp.distance(&bq);
            let d1 = hermitian_to_ball(&p.transform(u.matrix()).unwrap())
                .distance(&hermitian_to_ball(&q.transform(u.matrix()).unwrap()));
            assert!((d0 - d1).abs() <= 1e-9 * (1.0 + d0));
            assert!((d0 - p.distance(&q)).abs() <= 1e-8 * (1.0 + d0));
            // upper half-space distance agrees too
            let ((xi1, t1), (xi2, t2)) = (p.to_upper_half_space(), q.to_upper_half_space());
            let uhs = (1.0 + ((xi1 - xi2).norm_sqr() + (t1 - t2).powi(2)) / (2.0 * t1 * t2)).acosh();
            assert!((d0 - uhs).abs() <= 1e-8 * (1.0 + d0));
        }
    }

    #[test]
    fn schwarzian_examples() {
        let z = MeroExpr::var();
        assert!(schwarzian(&z, c(0.3, 0.7)).unwrap().norm() < 1e-15);
        let m = Mat2C::new(c(1.0, 1.0), c(2.0, 0.0), c(0.5, 0.0), c(3.0, -1.0));
        let h = mobius_expr(&m, &z);
        assert!(schwarzian(&h, c(0.4, -0.2)).unwrap().norm() < 1e-12);
        let sq = MeroExpr::power(ZERO, 2.0);
        assert_relative_eq!(schwarzian(&sq, ONE).unwrap().re, -1.5, epsilon = 1e-14);
        assert!(matches!(schwarzian(&sq, ZERO), Err(Error::CriticalPoint(_))));
    }

    #[test]
    fn schwarzian_closed_form_and_finite_differences() {
        // S(z^mu) = (1 - mu^2) / (2 z^2)
        for &mu in &[0.3, 0.8, 2.0, -1.7] {
            let h = MeroExpr::power(ZERO, mu);
            let z = c(0.9, 0.4);
            let s = schwarzian(&h, z).unwrap();
            let exact = (1.0 - mu * mu) / (2.0 * z * z);
            assert!((s - exact).norm() < 1e-12 * exact.norm());
            // independent check with finite differences of the principal branch
            let f = |w: Complex64| w.powf(mu);
            let hh = 1e-3;
            let d1 = (f(z + hh) - f(z - hh)) / (2.0 * hh);
            let d2 = (f(z + hh) - 2.0 * f(z) + f(z - hh)) / (hh * hh);
            let d3 = (f(z + 2.0 * hh) - 2.0 * f(z + hh) + 2.0 * f(z - hh) - f(z - 2.0 * hh)) / (2.0 * hh * hh * hh);
            let s_fd = d3 / d1 - 1.5 * (d2 / d1) * (d2 / d1);
            assert!((s_fd - exact).norm() < 1e-4 * exact.norm());
        }
    }

    #[test]
    fn schwarzian_mobius_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let h = MeroExpr::power(ZERO, 0.8) * MeroExpr::power(ONE, 1.0) + MeroExpr::constant(c(0.5, 0.0));
        for _ in 0..50 {
            let a = SU2Element::random(&mut rng);
            let ah = mobius_expr(a.matrix(), &h);
            let z = c(rng.random_range(0.5..2.0), rng.random_range(0.1..2.0));
            let s0 = schwarzian(&h, z).unwrap();
            let s1 = schwarzian(&ah, z).unwrap();
            assert!((s0 - s1).norm() <= 1e-9 * (1.0 + s0.norm()));
        }
    }
}
