//! Explicit surface families given by Weierstrass-type data `(g, omega = w dz)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{mobius, ExtComplex, Mat2C, SU2Element, I, ONE, ZERO};
use crate::classifier::{EndData, MuSharp, SurfaceTypeSpec};
use crate::error::{Error, Result};
use crate::expr::{leading_order, BranchState, MeroExpr};
use crate::monodromy::DivisorSpec;

/// Base point of path integration; the default lift is `F(BASE_POINT) = id`.
pub const BASE_POINT: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilyParams {
    Horosphere,
    EnneperCousin,
    CatenoidCousin { mu: f64 },
    CatenoidCover { mu: f64, delta: u32 },
    WarpedCatenoid { delta: u32, l: u32, b: f64 },
    PropA2Metric { c: Complex64, mu: f64 },
}

impl FamilyParams {
    pub fn build(&self) -> Result<WeierstrassData> {
        match *self {
            FamilyParams::Horosphere => Ok(make_horosphere()),
            FamilyParams::EnneperCousin => Ok(make_enneper_cousin()),
            FamilyParams::CatenoidCousin { mu } => make_catenoid_cousin(mu),
            FamilyParams::CatenoidCover { mu, delta } => make_catenoid_cover(mu, delta),
            FamilyParams::WarpedCatenoid { delta, l, b } => make_warped_catenoid(delta, l, b),
            FamilyParams::PropA2Metric { .. } => Err(Error::InvalidParams(
                "the three-point metric family is a developing map, not surface data; use make_prop_a2_map".into(),
            )),
        }
    }
}

/// Lift given in closed form: `F(z) = E(z) * right` with expression entries `E`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormLift {
    pub entries: [MeroExpr; 4],
    pub right: Mat2C,
}

impl ClosedFormLift {
    pub fn eval(&self, z: Complex64, branch: &BranchState) -> Mat2C {
        let [a, b, c, d] = &self.entries;
        Mat2C::new(a.eval_on(z, branch), b.eval_on(z, branch), c.eval_on(z, branch), d.eval_on(z, branch)) * self.right
    }

    pub fn centers(&self) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = Vec::new();
        for e in &self.entries {
            for c in e.centers() {
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeierstrassData {
    pub name: String,
    pub params: FamilyParams,
    /// Secondary Gauss map.
    pub g: MeroExpr,
    /// `omega = w dz`.  In the flat case `omega = Q/dg` is not formed and `w` is chosen directly.
    pub w: MeroExpr,
    pub punctures: Vec<ExtComplex>,
    pub genus: u32,
    pub ends: Vec<EndData>,
    pub umbilics: Vec<u32>,
    /// The angular fundamental domain is `[0, 2 pi cover_degree)`.
    pub cover_degree: u32,
    pub flat: bool,
    pub closed_form: Option<ClosedFormLift>,
}

impl WeierstrassData {
    pub fn type_spec(&self) -> SurfaceTypeSpec {
        SurfaceTypeSpec { genus: self.genus, ends: self.ends.clone(), umbilics: self.umbilics.clone(), flat: self.flat }
    }

    /// Hopf differential coefficient `q = w g'`.
    pub fn hopf(&self) -> MeroExpr {
        if self.flat {
            return MeroExpr::zero();
        }
        self.w.clone() * self.g.differentiate()
    }

    /// Singular points of `g` and `w` in the finite plane.
    pub fn centers(&self) -> Vec<Complex64> {
        let mut out = self.g.centers();
        for c in self.w.centers() {
            if !out.contains(&c) {
                out.push(c);
            }
        }
        if let Some(cf) = &self.closed_form {
            for c in cf.centers() {
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        out
    }

    /// Order of `Q` at `p`, read in the chart `1/z` at infinity.
    pub fn hopf_order(&self, p: ExtComplex) -> Result<f64> {
        let lead = leading_order(&self.hopf(), p)?;
        Ok(match p {
            ExtComplex::Finite(_) => lead,
            // dz^2 = dt^2 / t^4
            ExtComplex::Infinity => lead - 4.0,
        })
    }
}

fn check_mu(mu: f64) -> Result<()> {
    if !mu.is_finite() || [0.0, 1.0, -1.0].iter().any(|x| (mu - x).abs() < 1e-12) {
        return Err(Error::InvalidParams(format!("mu = {mu} must avoid 0 and +-1")));
    }
    Ok(())
}

fn two_ends() -> Vec<ExtComplex> {
    vec![ExtComplex::Finite(ZERO), ExtComplex::Infinity]
}

/// `g = z^mu`, `omega = (1 - mu^2) z^{-mu-1} dz / (4 mu)`.
pub fn make_catenoid_cousin(mu: f64) -> Result<WeierstrassData> {
    make_catenoid_cover(mu, 1).map(|mut d| {
        d.name = "catenoid cousin".into();
        d.params = FamilyParams::CatenoidCousin { mu };
        d
    })
}

/// The `delta`-fold cover of the catenoid cousin: same `(g, omega)`,
/// angular domain `[0, 2 pi delta)`.  End data is read in the cover
/// coordinate `zeta^delta = z`, where `g = zeta^{delta mu}`.
pub fn make_catenoid_cover(mu: f64, delta: u32) -> Result<WeierstrassData> {
    check_mu(mu)?;
    if delta == 0 {
        return Err(Error::InvalidParams("cover degree must be positive".into()));
    }
    let g = MeroExpr::z_pow(mu);
    let w = MeroExpr::real((1.0 - mu * mu) / (4.0 * mu)) * MeroExpr::z_pow(-mu - 1.0);
    let end = EndData { d: -2, mu: delta as f64 * mu.abs() - 1.0, mu_sharp: MuSharp::Finite(delta - 1) };
    Ok(WeierstrassData {
        name: format!("{delta}-fold cover of the catenoid cousin"),
        params: FamilyParams::CatenoidCover { mu, delta },
        g,
        w,
        punctures: two_ends(),
        genus: 0,
        ends: vec![end, end],
        umbilics: vec![],
        cover_degree: delta,
        flat: false,
        closed_form: None,
    })
}

/// `g = ((delta^2 - l^2)/(4l)) z^l + b`, `omega = z^{-l-1} dz`, with the closed-form lift `F0 B`.
pub fn make_warped_catenoid(delta: u32, l: u32, b: f64) -> Result<WeierstrassData> {
    if delta == 0 || l == 0 {
        return Err(Error::InvalidParams("delta and l must be positive integers".into()));
    }
    if delta == l {
        return Err(Error::InvalidParams(format!("l = delta = {l} degenerates (omega = Q/dg with Q = 0)")));
    }
    if !(b >= 0.0 && b.is_finite()) {
        return Err(Error::InvalidParams(format!("b = {b} must be a finite nonnegative real")));
    }
    let (df, lf) = (delta as f64, l as f64);
    let k = (df * df - lf * lf) / (4.0 * lf);
    let g = MeroExpr::real(k) * MeroExpr::z_pow(lf) + MeroExpr::real(b);
    let w = MeroExpr::z_pow(-lf - 1.0);
    let s = Complex64::new((df * df - lf * lf) / df, 0.0).sqrt();
    let entries = [
        MeroExpr::constant(s / (lf - df)) * MeroExpr::z_pow((df - lf) / 2.0),
        MeroExpr::constant(s * (df - lf) / (4.0 * lf)) * MeroExpr::z_pow((lf + df) / 2.0),
        MeroExpr::constant(s / (lf + df)) * MeroExpr::z_pow(-(lf + df) / 2.0),
        MeroExpr::constant(-s * (lf + df) / (4.0 * lf)) * MeroExpr::z_pow((lf - df) / 2.0),
    ];
    let right = Mat2C::new(ONE, (-b).into(), ZERO, ONE);
    let end = EndData { d: -2, mu: lf - 1.0, mu_sharp: MuSharp::Finite(delta - 1) };
    let name =
        if b > 0.0 { "warped catenoid cousin".to_string() } else { format!("{delta}-fold cover of the catenoid cousin (b = 0)") };
    Ok(WeierstrassData {
        name,
        params: FamilyParams::WarpedCatenoid { delta, l, b },
        g,
        w,
        punctures: two_ends(),
        genus: 0,
        ends: vec![end, end],
        umbilics: vec![],
        cover_degree: 1,
        flat: false,
        closed_form: Some(ClosedFormLift { entries, right }),
    })
}

/// `g = z`, `Q = dz^2 / 2`, hence `omega = Q/dg = dz / 2`.
pub fn make_enneper_cousin() -> WeierstrassData {
    WeierstrassData {
        name: "Enneper cousin".into(),
        params: FamilyParams::EnneperCousin,
        g: MeroExpr::var(),
        w: MeroExpr::real(0.5),
        punctures: vec![ExtComplex::Infinity],
        genus: 0,
        ends: vec![EndData { d: -4, mu: 0.0, mu_sharp: MuSharp::Infinite }],
        umbilics: vec![],
        cover_degree: 1,
        flat: false,
        closed_form: None,
    }
}

/// Flat and totally umbilic: `g = 0`, `omega = dz`, `Q = 0`, `F = [[1, 0], [z, 1]]`.
pub fn make_horosphere() -> WeierstrassData {
    let entries = [MeroExpr::one(), MeroExpr::zero(), MeroExpr::var(), MeroExpr::one()];
    WeierstrassData {
        name: "horosphere".into(),
        params: FamilyParams::Horosphere,
        g: MeroExpr::zero(),
        w: MeroExpr::one(),
        punctures: vec![ExtComplex::Infinity],
        genus: 0,
        ends: vec![EndData { d: 0, mu: 0.0, mu_sharp: MuSharp::Finite(0) }],
        umbilics: vec![],
        cover_degree: 1,
        flat: true,
        closed_form: Some(ClosedFormLift { entries, right: Mat2C::identity() }),
    }
}

/// Developing map `g = c z^mu (z - (mu+1)/mu)` of the three-point metric
/// with orders `|mu| - 1` at 0, `|mu + 1| - 1` at infinity and 1 at z = 1.
pub fn make_prop_a2_map(c: Complex64, mu: f64) -> Result<(MeroExpr, DivisorSpec)> {
    check_mu(mu)?;
    if c.norm() == 0.0 {
        return Err(Error::InvalidParams("c must be nonzero".into()));
    }
    let g = MeroExpr::constant(c) * MeroExpr::z_pow(mu) * (MeroExpr::var() - MeroExpr::real((mu + 1.0) / mu));
    let divisor = DivisorSpec::new(
        vec![(ExtComplex::Finite(ZERO), mu.abs() - 1.0), (ExtComplex::Infinity, (mu + 1.0).abs() - 1.0)],
        vec![(ExtComplex::Finite(ONE), 1)],
    )?;
    Ok((g, divisor))
}

/// Anti-holomorphic symmetries of a warped catenoid cousin with `b > 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WarpedSymmetries {
    pub l: u32,
    /// `phi(z) = radius / conj(z)`.
    pub radius: f64,
    pub a: SU2Element,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SymmetryResiduals {
    pub q_rotation: f64,
    pub g_rotation: f64,
    pub q_inversion: f64,
    pub g_inversion: f64,
}

impl SymmetryResiduals {
    pub fn max(&self) -> f64 {
        self.q_rotation.max(self.g_rotation).max(self.q_inversion).max(self.g_inversion)
    }
}

impl WarpedSymmetries {
    /// `phi_rho(z) = e^{2 pi i rho / l} conj(z)`.
    pub fn phi_rho(&self, rho: u32, z: Complex64) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI * rho as f64 / self.l as f64) * z.conj()
    }

    pub fn phi(&self, z: Complex64) -> Complex64 {
        self.radius / z.conj()
    }

    /// Checks `conj(Q o phi_rho) = Q`, `conj(g o phi_rho) = g`,
    /// `conj(Q o phi) = Q` and `conj(g o phi) = A * g` at the given points,
    /// for every `rho = 0..l-1`.  Pullbacks of `Q` include the derivative of
    /// the anti-holomorphic map.
    pub fn verify(&self, data: &WeierstrassData, points: &[Complex64]) -> SymmetryResiduals {
        let q = data.hopf();
        let g = &data.g;
        let rel = |a: Complex64, b: Complex64| (a - b).norm() / b.norm().max(1e-300);
        let mut r = SymmetryResiduals::default();
        for &z in points {
            let qz = q.eval(z);
            let gz = g.eval(z);
            for rho in 0..self.l {
                let u = Complex64::from_polar(1.0, 2.0 * PI * rho as f64 / self.l as f64);
                let w = self.phi_rho(rho, z);
                // phi_rho(z) = h(conj z) with h(s) = u s, h' = u
                let pull = (q.eval(w) * u * u).conj();
                r.q_rotation = r.q_rotation.max(rel(pull, qz));
                r.g_rotation = r.g_rotation.max(rel(g.eval(w).conj(), gz));
            }
            let w = self.phi(z);
            // phi(z) = h(conj z) with h(s) = R/s, h' = -R/s^2
            let hp = -self.radius / (z.conj() * z.conj());
            let pull = (q.eval(w) * hp * hp).conj();
            r.q_inversion = r.q_inversion.max(rel(pull, qz));
            r.g_inversion = r.g_inversion.max(rel(g.eval(w).conj(), mobius(self.a.matrix(), gz)));
        }
        r
    }
}

pub fn warped_symmetries(delta: u32, l: u32, b: f64) -> Result<WarpedSymmetries> {
    if !(b > 0.0) {
        return Err(Error::InvalidParams("symmetries are stated for b > 0".into()));
    }
    make_warped_catenoid(delta, l, b)?;
    let (df, lf) = (delta as f64, l as f64);
    let radius = (16.0 * lf * lf * (1.0 + b * b) / (df * df - lf * lf).powi(2)).powf(1.0 / lf);
    let s = I / (1.0 + b * b).sqrt();
    let a = Mat2C::new(s * b, s, s, -s * b);
    Ok(WarpedSymmetries { l, radius, a: SU2Element::try_from(a)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn points() -> Vec<Complex64> {
        (0..20).map(|k| Complex64::from_polar(0.3 + 0.17 * k as f64, 0.41 * k as f64 + 0.2)).collect()
    }

    #[test]
    fn catenoid_cousin_data() {
        let d = make_catenoid_cousin(0.8).unwrap();
        let z = c(1.3, 0.4);
        assert_relative_eq!((d.w.eval(z) / z.powf(-1.8)).re, 0.1125, epsilon = 1e-14);
        let q = d.hopf();
        for z in points() {
            let exact = (1.0 - 0.64) / 4.0 / (z * z);
            assert!((q.eval(z) - exact).norm() <= 1e-13 * exact.norm());
        }
        assert_eq!(d.hopf_order(ExtComplex::Finite(ZERO)).unwrap(), -2.0);
        assert_eq!(d.hopf_order(ExtComplex::Infinity).unwrap(), -2.0);
        assert!(make_catenoid_cousin(1.0).is_err());
        assert!(make_catenoid_cousin(0.0).is_err());
        assert!(make_catenoid_cousin(-1.0).is_err());
    }

    #[test]
    fn cover_shares_expressions() {
        let a = make_catenoid_cousin(0.3).unwrap();
        let b = make_catenoid_cover(0.3, 3).unwrap();
        assert_eq!(a.g, b.g);
        assert_eq!(a.w, b.w);
        assert_eq!(b.cover_degree, 3);
    }

    #[test]
    fn warped_data_and_determinant() {
        let d = make_warped_catenoid(2, 1, 0.5).unwrap();
        let z = c(2.0, 0.0);
        assert_relative_eq!(d.g.eval(z).re, 0.75 * 2.0 + 0.5, epsilon = 1e-15);
        assert_relative_eq!(d.w.eval(z).re, 0.25, epsilon = 1e-15);
        let cf = d.closed_form.clone().unwrap();
        let f = cf.eval(ONE, &BranchState::new(ONE));
        assert!((f.det() - ONE).norm() < 1e-14);
        for (delta, l) in [(2, 1), (1, 2), (3, 1), (2, 5)] {
            let d = make_warped_catenoid(delta, l, 0.7).unwrap();
            let cf = d.closed_form.clone().unwrap();
            for z in points() {
                let det = cf.eval(z, &BranchState::new(z)).det();
                assert!((det - ONE).norm() < 1e-12, "{delta} {l} {det}");
            }
            assert_eq!(d.hopf_order(ExtComplex::Finite(ZERO)).unwrap(), -2.0);
            assert_eq!(d.hopf_order(ExtComplex::Infinity).unwrap(), -2.0);
        }
        assert!(make_warped_catenoid(2, 2, 0.5).is_err());
    }

    #[test]
    fn closed_form_lift_solves_the_lift_equation() {
        // oracle: central differences of the closed form against F (g,-g^2;1,-g) w
        for (delta, l, b) in [(2u32, 1u32, 0.5), (3, 2, 1.5), (1, 3, 0.2)] {
            let d = make_warped_catenoid(delta, l, b).unwrap();
            let cf = d.closed_form.clone().unwrap();
            for z in points() {
                let st = BranchState::new(z);
                let h = 1e-5 * z.norm();
                let df = (cf.eval(z + h, &st) - cf.eval(z - h, &st)) * (0.5 / h);
                let g = d.g.eval(z);
                let phi = Mat2C::new(g, -g * g, ONE, -g) * d.w.eval(z);
                let rhs = cf.eval(z, &st) * phi;
                assert!((df - rhs).frobenius_norm() <= 1e-8 * (1.0 + rhs.frobenius_norm()));
            }
        }
    }

    #[test]
    fn enneper_and_horosphere() {
        let e = make_enneper_cousin();
        assert_eq!(e.hopf(), MeroExpr::real(0.5));
        assert_eq!(e.hopf_order(ExtComplex::Infinity).unwrap(), -4.0);
        let h = make_horosphere();
        assert!(h.flat && h.hopf().is_zero());
        let f = h.closed_form.unwrap().eval(c(2.0, 1.0), &BranchState::new(ONE));
        assert_eq!(f, Mat2C::new(ONE, ZERO, c(2.0, 1.0), ONE));
    }

    #[test]
    fn prop_a2_map() {
        let (g, div) = make_prop_a2_map(c(1.0, 0.5), -0.6).unwrap();
        let dg = g.differentiate();
        let closed = MeroExpr::constant(c(1.0, 0.5) * 0.4) * MeroExpr::z_pow(-1.6) * (MeroExpr::var() - MeroExpr::one());
        for z in points() {
            assert!((dg.eval(z) - closed.eval(z)).norm() < 1e-12 * closed.eval(z).norm());
        }
        assert_relative_eq!(div.cone_points[0].1, -0.4, epsilon = 1e-15);
        assert_relative_eq!(div.cone_points[1].1, -0.6, epsilon = 1e-15);
        assert!(make_prop_a2_map(ONE, 1.0).is_err());
    }

    #[test]
    fn symmetries() {
        for b in [0.1, 0.5, 2.0, 7.0] {
            let s = warped_symmetries(2, 1, b).unwrap();
            let a = *s.a.matrix();
            assert!(((a * a) + Mat2C::identity()).frobenius_norm() < 1e-14);
            assert!((a.det() - ONE).norm() < 1e-14);
        }
        for (delta, l, b) in [(2, 1, 0.5), (1, 4, 0.3), (5, 3, 1.2)] {
            let d = make_warped_catenoid(delta, l, b).unwrap();
            let s = warped_symmetries(delta, l, b).unwrap();
            let r = s.verify(&d, &points());
            assert!(r.max() <= 1e-10, "{r:?}");
        }
        assert!(warped_symmetries(2, 1, 0.0).is_err());
    }
}
