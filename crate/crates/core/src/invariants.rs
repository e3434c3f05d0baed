//! Pseudometric density, total absolute curvature, and pointwise checks of
//! the metric product and Schwarzian identities.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{mobius, schwarzian_on_branch, Mat2C, ONE};
use crate::error::{Error, Result};
use crate::expr::{BranchState, MeroExpr};
use crate::families::WeierstrassData;
use crate::lift::{closed_form_along, integrate_segment, IntegratorOptions, LiftSource};
use crate::quadrature::{integrate, AdaptiveOptions};

/// `g`, `g'`, `1/g` and `(1/g)'`, evaluated together.
#[derive(Clone, Debug)]
pub struct DensityExpr {
    g: MeroExpr,
    dg: MeroExpr,
    h: MeroExpr,
    dh: MeroExpr,
}

impl DensityExpr {
    pub fn new(g: &MeroExpr) -> Self {
        let h = (MeroExpr::one() / g.clone()).simplify();
        Self { g: g.clone(), dg: g.differentiate(), dh: h.differentiate(), h }
    }

    /// `4 |g'|^2 / (1 + |g|^2)^2`, switching to the chart `1/g` where `|g| > 1`.
    pub fn eval_on(&self, z: Complex64, branch: &BranchState) -> f64 {
        let g = self.g.eval_on(z, branch);
        let (v, d) = if g.is_finite() && g.norm() <= 1.0 {
            (g, self.dg.eval_on(z, branch))
        } else {
            (self.h.eval_on(z, branch), self.dh.eval_on(z, branch))
        };
        let s = 1.0 + v.norm_sqr();
        4.0 * d.norm_sqr() / (s * s)
    }
}

/// Density of `d sigma^2 = 4 dg dg* / (1 + |g|^2)^2` at `z`, principal branch.
pub fn pseudometric_density(g: &MeroExpr, z: Complex64) -> f64 {
    DensityExpr::new(g).eval_on(z, &BranchState::new(z))
}

/// Compactification of the radial half-line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "map", rename_all = "kebab-case")]
pub enum RadialMap {
    /// `r = tan(pi s / 2)` with `s = u^p / (u^p + (1 - u)^p)`, `u in (0, 1)`;
    /// the grading `p` makes polynomially decaying tails at `r -> 0` and
    /// `r -> infinity` smooth in `u`.
    Tangent { grading: u32 },
}

impl RadialMap {
    /// `(r, dr/du)`.
    pub fn eval(&self, u: f64) -> (f64, f64) {
        match *self {
            RadialMap::Tangent { grading } => {
                let p = grading as i32;
                let (a, b) = (u.powi(p), (1.0 - u).powi(p));
                let den = a + b;
                let ds = p as f64 * u.powi(p - 1) * (1.0 - u).powi(p - 1) / (den * den);
                let (s, t) = (a / den, b / den);
                let r = if s <= 0.5 { (0.5 * PI * s).tan() } else { 1.0 / (0.5 * PI * t).tan() };
                (r, 0.5 * PI * (1.0 + r * r) * ds)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub radial: RadialMap,
    /// Adaptive Gauss-Kronrod targets for the radial integral.
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_cells: usize,
    /// Periodic trapezoid in `theta`: node count doubles from `theta_min_nodes`
    /// until successive sums agree to `theta_rel_tol`.
    pub theta_min_nodes: usize,
    pub theta_max_nodes: usize,
    pub theta_rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            radial: RadialMap::Tangent { grading: 3 },
            abs_tol: 1e-9,
            rel_tol: 1e-8,
            max_cells: 2000,
            theta_min_nodes: 16,
            theta_max_nodes: 1 << 14,
            theta_rel_tol: 1e-11,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaReport {
    pub ta: f64,
    pub ta_over_4pi: f64,
    pub err_estimate: f64,
    pub cells: usize,
}

fn ring_integral(dens: &DensityExpr, centers: &[Complex64], r: f64, span: f64, spec: &QuadratureSpec) -> f64 {
    let ring = |n: usize| -> f64 {
        let mut br = BranchState::new(Complex64::new(r, 0.0));
        let mut sum = 0.0;
        for k in 0..n {
            let z = Complex64::from_polar(r, span * k as f64 / n as f64);
            if br.advance_to(z, centers).is_err() {
                return f64::NAN;
            }
            sum += dens.eval_on(z, &br);
        }
        sum * span / n as f64
    };
    let mut n = spec.theta_min_nodes.max(4);
    let mut prev = ring(n);
    while n < spec.theta_max_nodes {
        n *= 2;
        let next = ring(n);
        if (next - prev).abs() <= spec.theta_rel_tol * next.abs() {
            return next;
        }
        prev = next;
    }
    prev
}

/// `TA = int (-K) dA`, the spherical area swept by `g` over the angular
/// domain `[0, 2 pi cover_degree)`.
pub fn total_absolute_curvature(data: &WeierstrassData, spec: &QuadratureSpec) -> Result<TaReport> {
    if data.flat || data.g.simplify().is_constant() {
        return Ok(TaReport { ta: 0.0, ta_over_4pi: 0.0, err_estimate: 0.0, cells: 0 });
    }
    let dens = DensityExpr::new(&data.g);
    let centers = data.g.centers();
    let span = 2.0 * PI * data.cover_degree as f64;
    let integrand = |u: f64| {
        let (r, dr) = spec.radial.eval(u);
        if r == 0.0 || !r.is_finite() || dr == 0.0 {
            return 0.0;
        }
        r * dr * ring_integral(&dens, &centers, r, span, spec)
    };
    let opts = AdaptiveOptions { abs_tol: spec.abs_tol, rel_tol: spec.rel_tol, max_cells: spec.max_cells };
    let q = integrate(&integrand, 0.0, 1.0, &opts)?;
    Ok(TaReport { ta: q.value, ta_over_4pi: q.value / (4.0 * PI), err_estimate: q.error, cells: q.cells })
}

/// Coefficient of `dz^2` in `Q = omega dg`.
pub fn hopf_differential(data: &WeierstrassData) -> MeroExpr {
    data.hopf().simplify()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricProductReport {
    pub z: Complex64,
    pub sigma_density: f64,
    /// `4 |Q|^2 / d sigma^2`.
    pub ds2_from_identity: f64,
    /// `(1 + |g|^2)^2 |w|^2`.
    pub ds2_weierstrass: f64,
    pub q_abs2: f64,
    /// `|d sigma^2 ds^2 - 4 |Q|^2| / (4 |Q|^2)`, with `ds^2` from the Weierstrass formula.
    pub residual: f64,
    pub positive: bool,
    /// `Q(z) = 0`: the identity holds trivially and the residual is reported as 0.
    pub umbilic: bool,
}

/// Checks `ds^2 d sigma^2 = 4 Q Q*` at `z` on the principal branch.
pub fn metric_product_check(data: &WeierstrassData, z: Complex64) -> Result<MetricProductReport> {
    let br = BranchState::new(z);
    let q = hopf_differential(data).eval_on(z, &br);
    let q_abs2 = q.norm_sqr();
    let sigma = DensityExpr::new(&data.g).eval_on(z, &br);
    let g = data.g.eval_on(z, &br);
    let w = data.w.eval_on(z, &br);
    let ds2_w = (1.0 + g.norm_sqr()).powi(2) * w.norm_sqr();
    if !q.is_finite() || !ds2_w.is_finite() || !sigma.is_finite() {
        return Err(Error::Degenerate(format!("{z} is not a regular point")));
    }
    if data.flat || q_abs2 == 0.0 {
        return Ok(MetricProductReport {
            z,
            sigma_density: sigma,
            ds2_from_identity: f64::NAN,
            ds2_weierstrass: ds2_w,
            q_abs2,
            residual: 0.0,
            positive: ds2_w > 0.0,
            umbilic: true,
        });
    }
    let four_q = 4.0 * q_abs2;
    Ok(MetricProductReport {
        z,
        sigma_density: sigma,
        ds2_from_identity: four_q / sigma,
        ds2_weierstrass: ds2_w,
        q_abs2,
        residual: (sigma * ds2_w - four_q).abs() / four_q,
        positive: sigma > 0.0 && ds2_w > 0.0,
        umbilic: false,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchwarzianReport {
    pub z: Complex64,
    pub s_g: Complex64,
    pub s_big_g: Complex64,
    pub q: Complex64,
    /// Radius of the Cauchy circle used for the derivatives of `G`.
    pub radius: f64,
    /// `|S(g) - S(G) - 2Q| / |Q|`.
    pub residual: f64,
}

const CAUCHY_NODES: usize = 64;

/// Checks `S(g) - S(G) = 2Q` at `z`, with `G = F * g` (`= dF11/dF21`) taken
/// from the lift and its derivatives from Cauchy integrals on a circle.
///
/// `branch` fixes the branch at `z`; the numeric route solves the lift with
/// `F(z) = id`, which changes `G` by a Möbius map and leaves `S(G)` unchanged.
pub fn schwarzian_identity_check(data: &WeierstrassData, source: LiftSource, branch: &BranchState) -> Result<SchwarzianReport> {
    let z = branch.point();
    let mut dist = f64::INFINITY;
    for c in data.centers() {
        dist = dist.min((z - c).norm());
    }
    if dist == 0.0 {
        return Err(Error::Degenerate(format!("{z} is a singular point")));
    }
    let radius = if dist.is_finite() { 0.25 * dist } else { 0.25 * z.norm().max(1.0) };
    let s_g = schwarzian_on_branch(&data.g, z, branch)?;
    let q = hopf_differential(data).eval_on(z, branch);

    let local = |zeta: Complex64| -> Result<Mat2C> {
        match source {
            LiftSource::Numeric(opts) => {
                let opts = IntegratorOptions { tol: opts.tol.min(1e-13), ..opts };
                Ok(integrate_segment(data, branch, zeta, Mat2C::identity(), &opts)?.0)
            }
            LiftSource::ClosedForm => {
                let at_z = closed_form_along(data, &[z], branch)?[0].f;
                let at = closed_form_along(data, &[zeta], branch)?[0].f;
                at_z.inverse().map(|inv| inv * at).ok_or_else(|| Error::Degenerate("singular lift".into()))
            }
        }
    };
    // unitary map sending g(z) to 0 keeps G bounded on the circle
    let v = data.g.eval_on(z, branch);
    let s = (1.0 + v.norm_sqr()).sqrt();
    let u = Mat2C::new(ONE, -v, v.conj(), ONE).scale(Complex64::from(1.0 / s));

    let mut c = [Complex64::new(0.0, 0.0); 4];
    for j in 0..CAUCHY_NODES {
        let phi = 2.0 * PI * j as f64 / CAUCHY_NODES as f64;
        let zeta = z + Complex64::from_polar(radius, phi);
        let l = local(zeta)?;
        let gz = data.g.eval_on(zeta, branch);
        let big = mobius(&(u * l), gz);
        if !big.is_finite() {
            return Err(Error::Degenerate(format!("G has a pole on the Cauchy circle at {zeta}")));
        }
        for (k, ck) in c.iter_mut().enumerate() {
            *ck += big * Complex64::from_polar(1.0, -(k as f64) * phi);
        }
    }
    let m = CAUCHY_NODES as f64;
    let d1 = c[1] / (m * radius);
    let d2 = c[2] * 2.0 / (m * radius * radius);
    let d3 = c[3] * 6.0 / (m * radius.powi(3));
    if d1.norm() == 0.0 {
        return Err(Error::CriticalPoint(z));
    }
    let r = d2 / d1;
    let s_big_g = d3 / d1 - 1.5 * r * r;
    let residual = (s_g - s_big_g - 2.0 * q).norm() / q.norm();
    Ok(SchwarzianReport { z, s_g, s_big_g, q, radius, residual })
}
