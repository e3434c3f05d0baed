//! Numerical integration of the lift `dF = F [[g, -g^2], [1, -g]] omega`,
//! the immersion `f = F F*`, and a finite-difference mean-curvature checker.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{HermitianPoint, Mat2C, ONE};
use crate::error::{Error, Result};
use crate::expr::{segment_distance, BranchState};
use crate::families::WeierstrassData;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegratorOptions {
    /// Local error target per step, relative to `max(1, |F|)`.
    pub tol: f64,
    /// Initial step as a fraction of the segment.
    pub h_init: f64,
    pub h_min: f64,
    pub max_steps: usize,
    /// Divide by `sqrt(det F)` after each step.
    pub renormalize: bool,
    /// Plain RK4 with this many equal steps per segment, without error control.
    pub fixed_steps: Option<usize>,
    /// Minimum distance from a segment to a singular point.
    pub margin: f64,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            h_init: 0.125,
            h_min: 1e-12,
            max_steps: 1_000_000,
            renormalize: true,
            fixed_steps: None,
            margin: 1e-10,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LiftSource {
    Numeric(IntegratorOptions),
    /// Requires `WeierstrassData::closed_form`.
    ClosedForm,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftSample {
    pub z: Complex64,
    pub f: Mat2C,
    /// Branch at `z`, continued from the start of the path.
    pub branch: BranchState,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SegmentStats {
    pub steps: usize,
    /// Largest `|det F - 1|` seen before renormalization.
    pub det_drift: f64,
}

/// Coefficient `[[g, -g^2], [1, -g]] w` on the given branch.
pub fn lift_coefficient(data: &WeierstrassData, z: Complex64, branch: &BranchState) -> Mat2C {
    let g = data.g.eval_on(z, branch);
    let w = data.w.eval_on(z, branch);
    Mat2C::new(g * w, -g * g * w, w, -g * w)
}

fn rk4_step(data: &WeierstrassData, br: &BranchState, a: Complex64, dz: Complex64, y: Mat2C, s: f64, h: f64) -> Mat2C {
    let at = |t: f64| lift_coefficient(data, a + dz * t, br) * dz;
    let hc = Complex64::from(h);
    let (m0, mh, m1) = (at(s), at(s + 0.5 * h), at(s + h));
    let k1 = y * m0;
    let k2 = (y + k1 * (0.5 * hc)) * mh;
    let k3 = (y + k2 * (0.5 * hc)) * mh;
    let k4 = (y + k3 * hc) * m1;
    y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

fn finish(y: Mat2C, opts: &IntegratorOptions, stats: &mut SegmentStats) -> Result<Mat2C> {
    if !y.is_finite() {
        return Err(Error::Integration("non-finite lift".into()));
    }
    stats.det_drift = stats.det_drift.max((y.det() - ONE).norm());
    Ok(if opts.renormalize { y.normalize_det() } else { y })
}

/// Integrates along the straight segment `branch.point() -> b`, starting from `f`.
pub fn integrate_segment(
    data: &WeierstrassData,
    branch: &BranchState,
    b: Complex64,
    f: Mat2C,
    opts: &IntegratorOptions,
) -> Result<(Mat2C, SegmentStats)> {
    let a = branch.point();
    let mut stats = SegmentStats::default();
    if a == b {
        return Ok((f, stats));
    }
    for c in data.centers() {
        let d = segment_distance(a, b, c);
        if d < opts.margin {
            return Err(Error::Integration(format!("segment {a} -> {b} passes within {d:.3e} of singular point {c}")));
        }
    }
    let dz = b - a;
    if let Some(n) = opts.fixed_steps {
        let h = 1.0 / n as f64;
        let mut y = f;
        for k in 0..n {
            y = finish(rk4_step(data, branch, a, dz, y, k as f64 * h, h), opts, &mut stats)?;
        }
        stats.steps = n;
        return Ok((y, stats));
    }
    let (mut s, mut h, mut y) = (0.0, opts.h_init, f);
    while s < 1.0 {
        if stats.steps >= opts.max_steps {
            return Err(Error::Integration(format!("step limit {} reached on {a} -> {b}", opts.max_steps)));
        }
        h = h.min(1.0 - s);
        let big = rk4_step(data, branch, a, dz, y, s, h);
        let mid = rk4_step(data, branch, a, dz, y, s, 0.5 * h);
        let two = rk4_step(data, branch, a, dz, mid, s + 0.5 * h, 0.5 * h);
        let err = (two - big).frobenius_norm() / 15.0;
        let scale = two.frobenius_norm().max(1.0);
        if !err.is_finite() {
            return Err(Error::Integration(format!("non-finite lift near {}", a + dz * s)));
        }
        stats.steps += 1;
        if err <= opts.tol * scale {
            y = finish(two + (two - big) * (1.0 / 15.0), opts, &mut stats)?;
            s += h;
        }
        let factor = if err == 0.0 { 2.0 } else { (0.9 * (opts.tol * scale / err).powf(0.2)).clamp(0.2, 2.0) };
        h *= factor;
        if h < opts.h_min && s < 1.0 {
            return Err(Error::Integration(format!("step size underflow near {}", a + dz * s)));
        }
    }
    Ok((y, stats))
}

/// Integrates along the polyline `path`, which starts at `branch.point()`.
/// The first sample is `(path[0], f_init)`.
pub fn integrate_lift_from(
    data: &WeierstrassData,
    path: &[Complex64],
    f_init: Mat2C,
    branch: &BranchState,
    opts: &IntegratorOptions,
) -> Result<(Vec<LiftSample>, SegmentStats)> {
    let Some(&z0) = path.first() else {
        return Ok((Vec::new(), SegmentStats::default()));
    };
    if z0 != branch.point() {
        return Err(Error::InvalidParams(format!("path starts at {z0}, branch at {}", branch.point())));
    }
    let centers = data.centers();
    let mut total = SegmentStats::default();
    let mut out = vec![LiftSample { z: z0, f: f_init, branch: branch.clone() }];
    for &z in &path[1..] {
        let last = out.last().expect("nonempty");
        let (f, st) = integrate_segment(data, &last.branch, z, last.f, opts)?;
        let mut br = last.branch.clone();
        br.advance_to(z, &centers)?;
        total.steps += st.steps;
        total.det_drift = total.det_drift.max(st.det_drift);
        out.push(LiftSample { z, f, branch: br });
    }
    Ok((out, total))
}

/// Numeric lift along `path`, on the principal branch at `path[0]`.
pub fn integrate_lift(
    data: &WeierstrassData,
    path: &[Complex64],
    f_init: Mat2C,
    opts: &IntegratorOptions,
) -> Result<Vec<LiftSample>> {
    let Some(&z0) = path.first() else {
        return Ok(Vec::new());
    };
    integrate_lift_from(data, path, f_init, &BranchState::new(z0), opts).map(|(s, _)| s)
}

/// Closed-form lift along `path`, branches continued from `branch`.
pub fn closed_form_along(data: &WeierstrassData, path: &[Complex64], branch: &BranchState) -> Result<Vec<LiftSample>> {
    let cf = data.closed_form.as_ref().ok_or_else(|| Error::InvalidParams(format!("{} has no closed-form lift", data.name)))?;
    let centers = data.centers();
    let mut br = branch.clone();
    let mut out = Vec::with_capacity(path.len());
    for &z in path {
        br.advance_to(z, &centers)?;
        let f = cf.eval(z, &br);
        if !f.is_finite() {
            return Err(Error::Integration(format!("closed form singular at {z}")));
        }
        out.push(LiftSample { z, f, branch: br.clone() });
    }
    Ok(out)
}

/// `f = F F*`.
pub fn immerse(f: &Mat2C) -> Result<HermitianPoint> {
    let m = *f * f.adjoint();
    // exact Hermitian symmetry; rounding only enters the diagonal's imaginary part
    let m = Mat2C::new(m.a11.re.into(), m.a12, m.a12.conj(), m.a22.re.into());
    HermitianPoint::new(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussMapSample {
    pub index: usize,
    pub z: Complex64,
    /// `-dF12/dF11 = -dF22/dF21`; `None` where both denominators vanish.
    pub g: Option<Complex64>,
    /// `dF11/dF21 = dF12/dF22`; `None` where both denominators vanish.
    pub big_g: Option<Complex64>,
}

/// Fourth-order difference quotients with respect to the sample index (one-sided
/// next to the ends); the path must be smooth in that parameter.
pub fn gauss_maps_from_lift(samples: &[LiftSample]) -> Result<Vec<GaussMapSample>> {
    let n = samples.len();
    if n < 3 {
        return Err(Error::InvalidParams(format!("{n} samples; at least 3 are needed for differencing")));
    }
    let f = |i: usize| samples[i].f;
    let mut out = Vec::with_capacity(n - 2);
    for i in 1..n - 1 {
        let d = if n < 5 {
            (f(i + 1) - f(i - 1)) * 0.5
        } else if i >= 2 && i + 2 < n {
            (f(i - 2) - f(i + 2) + (f(i + 1) - f(i - 1)) * 8.0) * (1.0 / 12.0)
        } else if i == 1 {
            (f(4) - f(0) * 3.0 - f(1) * 10.0 + f(2) * 18.0 - f(3) * 6.0) * (1.0 / 12.0)
        } else {
            (f(n - 1) * 3.0 + f(n - 2) * 10.0 - f(n - 3) * 18.0 + f(n - 4) * 6.0 - f(n - 5)) * (1.0 / 12.0)
        };
        let tiny = 1e-13 * d.frobenius_norm();
        // both rows give g and both columns give G; use the larger denominator
        let (gn, gd) = if d.a11.norm() >= d.a21.norm() { (d.a12, d.a11) } else { (d.a22, d.a21) };
        let (bn, bd) = if d.a21.norm() >= d.a22.norm() { (d.a11, d.a21) } else { (d.a12, d.a22) };
        let g = (gd.norm() > tiny).then(|| -gn / gd);
        let big_g = (bd.norm() > tiny).then(|| bn / bd);
        out.push(GaussMapSample { index: i, z: samples[i].z, g, big_g });
    }
    Ok(out)
}

/// Hyperboloid-model samples `x(z)` of an immersion.
pub type Sampler<'a> = dyn Fn(Complex64) -> Result<[f64; 4]> + Sync + 'a;

/// Sampler anchored at a lift sample: points near `anchor.z` are reached by
/// one straight segment (numeric) or by continuing the closed form.
pub fn lift_sampler<'a>(data: &'a WeierstrassData, source: LiftSource, anchor: LiftSample) -> Box<Sampler<'a>> {
    Box::new(move |z: Complex64| {
        let f = match source {
            LiftSource::Numeric(opts) => integrate_segment(data, &anchor.branch, z, anchor.f, &opts)?.0,
            LiftSource::ClosedForm => closed_form_along(data, &[z], &anchor.branch)?[0].f,
        };
        Ok(immerse(&f)?.minkowski())
    })
}

fn mdot(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Vector Minkowski-orthogonal to `a`, `b`, `c`.
fn minkowski_cross(a: &[f64; 4], b: &[f64; 4], c: &[f64; 4]) -> [f64; 4] {
    let mut y = [0.0; 4];
    for (i, yi) in y.iter_mut().enumerate() {
        let cols: Vec<usize> = (0..4).filter(|&j| j != i).collect();
        let m =
            [[a[cols[0]], a[cols[1]], a[cols[2]]], [b[cols[0]], b[cols[1]], b[cols[2]]], [c[cols[0]], c[cols[1]], c[cols[2]]]];
        *yi = if i % 2 == 0 { det3(m) } else { -det3(m) };
    }
    // y is Euclidean-orthogonal to a, b, c; raise the index with diag(-1, 1, 1, 1)
    [-y[0], y[1], y[2], y[3]]
}

fn combine(terms: &[(f64, &[f64; 4])]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (c, v) in terms {
        for k in 0..4 {
            out[k] += c * v[k];
        }
    }
    out
}

/// Signed mean curvature from central differences with step `h` in `z = u + iv`.
pub fn mean_curvature_single(sampler: &Sampler, z: Complex64, h: f64) -> Result<f64> {
    let at = |du: f64, dv: f64| sampler(z + Complex64::new(du * h, dv * h));
    let x = at(0.0, 0.0)?;
    let (xp, xm, yp, ym) = (at(1.0, 0.0)?, at(-1.0, 0.0)?, at(0.0, 1.0)?, at(0.0, -1.0)?);
    let (pp, pm, mp, mm) = (at(1.0, 1.0)?, at(1.0, -1.0)?, at(-1.0, 1.0)?, at(-1.0, -1.0)?);
    let i2 = 0.5 / h;
    let ih2 = 1.0 / (h * h);
    let xu = combine(&[(i2, &xp), (-i2, &xm)]);
    let xv = combine(&[(i2, &yp), (-i2, &ym)]);
    let xuu = combine(&[(ih2, &xp), (-2.0 * ih2, &x), (ih2, &xm)]);
    let xvv = combine(&[(ih2, &yp), (-2.0 * ih2, &x), (ih2, &ym)]);
    let q = 0.25 * ih2;
    let xuv = combine(&[(q, &pp), (-q, &pm), (-q, &mp), (q, &mm)]);
    let (e, f, g) = (mdot(&xu, &xu), mdot(&xu, &xv), mdot(&xv, &xv));
    let area2 = e * g - f * f;
    if !(area2 > 1e-14 * e.abs() * g.abs()) || !area2.is_finite() {
        return Err(Error::Degenerate(format!("first fundamental form degenerate at {z} (EG - F^2 = {area2:.3e})")));
    }
    let n = minkowski_cross(&x, &xu, &xv);
    let nn = mdot(&n, &n);
    if !(nn > 0.0) {
        return Err(Error::Degenerate(format!("normal is not spacelike at {z}")));
    }
    let n = combine(&[(1.0 / nn.sqrt(), &n)]);
    let (l, m, nv) = (mdot(&xuu, &n), mdot(&xuv, &n), mdot(&xvv, &n));
    Ok((e * nv - 2.0 * f * m + g * l) / (2.0 * area2))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanCurvatureReport {
    pub z: Complex64,
    /// Steps `h, h/2, h/4`.
    pub steps: [f64; 3],
    /// Signed estimates at those steps.
    pub estimates: [f64; 3],
    /// Richardson extrapolation assuming second-order error, signed.
    pub signed: f64,
    /// Value after orienting the normal along the mean curvature vector.
    pub value: f64,
    /// Observed convergence order; `None` when the estimates agree to rounding.
    pub order: Option<f64>,
}

/// Mean curvature of the sampled immersion into the hyperboloid model.
pub fn mean_curvature_at(sampler: &Sampler, z: Complex64, h: f64) -> Result<MeanCurvatureReport> {
    let steps = [h, 0.5 * h, 0.25 * h];
    let mut est = [0.0; 3];
    for (e, &s) in est.iter_mut().zip(&steps) {
        *e = mean_curvature_single(sampler, z, s)?;
    }
    let (d1, d2) = ((est[0] - est[1]).abs(), (est[1] - est[2]).abs());
    // second differences carry rounding of order eps / h^2
    let noise = 1e-9 * est[2].abs().max(1.0);
    let order = (d1.max(d2) > noise).then(|| (d1 / d2.max(noise)).log2());
    let signed = est[2] + (est[2] - est[1]) / 3.0;
    Ok(MeanCurvatureReport { z, steps, estimates: est, signed, value: signed.abs(), order })
}
