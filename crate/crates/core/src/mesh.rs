//! Polar-grid meshes of the immersion in the ball model.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{hermitian_to_ball, BallPoint, Mat2C};
use crate::error::{Error, Result};
use crate::expr::BranchState;
use crate::families::{WeierstrassData, BASE_POINT};
use crate::lift::{
    closed_form_along, immerse, integrate_lift_from, lift_sampler, mean_curvature_at, LiftSample, LiftSource, MeanCurvatureReport,
};

/// Chords of the spine arc subtend at most this angle.
const MAX_CHORD_ANGLE: f64 = PI / 64.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub r_min: f64,
    pub r_max: f64,
    /// Radii per column, geometrically spaced.
    pub nr: usize,
    /// Angular intervals; there are `ntheta + 1` columns including both ends.
    pub ntheta: usize,
    /// Angular range; `None` means the full domain `[0, 2 pi cover_degree]`.
    /// A sub-range gives a cut-away view.
    pub theta: Option<(f64, f64)>,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { r_min: 0.25, r_max: 4.0, nr: 24, ntheta: 48, theta: None }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_min > 0.0 && self.r_max > self.r_min && self.r_max.is_finite()) {
            return Err(Error::InvalidParams(format!("need 0 < r_min < r_max < inf, got [{}, {}]", self.r_min, self.r_max)));
        }
        if self.nr < 2 || self.ntheta < 1 {
            return Err(Error::InvalidParams("need nr >= 2 and ntheta >= 1".into()));
        }
        if let Some((a, b)) = self.theta {
            if !(b > a && a.is_finite() && b.is_finite()) {
                return Err(Error::InvalidParams(format!("empty angular range [{a}, {b}]")));
            }
        }
        Ok(())
    }

    pub fn theta_range(&self, cover_degree: u32) -> (f64, f64) {
        self.theta.unwrap_or((0.0, 2.0 * PI * cover_degree as f64))
    }

    pub fn radii(&self) -> Vec<f64> {
        let q = (self.r_max / self.r_min).ln() / (self.nr - 1) as f64;
        (0..self.nr).map(|i| if i + 1 == self.nr { self.r_max } else { self.r_min * (q * i as f64).exp() }).collect()
    }

    pub fn thetas(&self, cover_degree: u32) -> Vec<f64> {
        let (a, b) = self.theta_range(cover_degree);
        (0..=self.ntheta).map(|k| a + (b - a) * k as f64 / self.ntheta as f64).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceMesh {
    /// Column-major: vertex `(k, i)` (angle `k`, radius `i`) is at `k * nr + i`.
    pub vertices: Vec<BallPoint>,
    /// Zero-based quads.
    pub faces: Vec<[usize; 4]>,
    pub grid: GridSpec,
    pub theta_range: (f64, f64),
    pub cover_degree: u32,
    /// Largest `|det F - 1|` over the stored lift.
    pub det_drift: f64,
    #[serde(skip)]
    pub lift: Vec<LiftSample>,
}

fn lift_path(
    data: &WeierstrassData,
    source: LiftSource,
    path: &[Complex64],
    f0: Mat2C,
    branch: &BranchState,
) -> Result<Vec<LiftSample>> {
    match source {
        LiftSource::Numeric(opts) => integrate_lift_from(data, path, f0, branch, &opts).map(|(s, _)| s),
        LiftSource::ClosedForm => closed_form_along(data, path, branch),
    }
}

/// Samples the surface on a polar grid.
///
/// The lift starts at `F(1) = id` (numeric) or the closed form, runs along
/// the unit-circle spine to every column angle, then along each ray; the
/// branch at every vertex is the one reached by that path.
pub fn sample_mesh(data: &WeierstrassData, source: LiftSource, grid: &GridSpec) -> Result<SurfaceMesh> {
    grid.validate()?;
    let thetas = grid.thetas(data.cover_degree);
    let radii = grid.radii();
    let start = BranchState::new(BASE_POINT);

    let mut spine_path = vec![BASE_POINT];
    let mut column_at = Vec::with_capacity(thetas.len());
    let mut prev = 0.0;
    for &t in &thetas {
        let pieces = ((t - prev).abs() / MAX_CHORD_ANGLE).ceil().max(1.0) as usize;
        for j in 1..=pieces {
            spine_path.push(Complex64::from_polar(1.0, prev + (t - prev) * j as f64 / pieces as f64));
        }
        column_at.push(spine_path.len() - 1);
        prev = t;
    }
    let spine = lift_path(data, source, &spine_path, Mat2C::identity(), &start)?;

    let columns: Vec<Vec<LiftSample>> = column_at
        .par_iter()
        .zip(thetas.par_iter())
        .map(|(&idx, &t)| -> Result<Vec<LiftSample>> {
            let anchor = &spine[idx];
            let dir = Complex64::from_polar(1.0, t);
            let inner: Vec<Complex64> =
                std::iter::once(anchor.z).chain(radii.iter().rev().filter(|&&r| r < 1.0).map(|&r| dir * r)).collect();
            let outer: Vec<Complex64> =
                std::iter::once(anchor.z).chain(radii.iter().filter(|&&r| r >= 1.0).map(|&r| dir * r)).collect();
            let mut a = lift_path(data, source, &inner, anchor.f, &anchor.branch)?;
            let b = lift_path(data, source, &outer, anchor.f, &anchor.branch)?;
            a.remove(0);
            a.reverse();
            a.extend(b.into_iter().skip(1));
            Ok(a)
        })
        .collect::<Result<_>>()?;

    let lift: Vec<LiftSample> = columns.into_iter().flatten().collect();
    let mut vertices = Vec::with_capacity(lift.len());
    let mut det_drift: f64 = 0.0;
    for s in &lift {
        det_drift = det_drift.max((s.f.det() - crate::algebra::ONE).norm());
        let p = hermitian_to_ball(&immerse(&s.f)?);
        if !(p.norm() < 1.0) {
            return Err(Error::Degenerate(format!(
                "vertex at z = {} rounds onto the sphere at infinity; shrink the radial range",
                s.z
            )));
        }
        vertices.push(p);
    }
    let nr = grid.nr;
    let mut faces = Vec::with_capacity(grid.ntheta * (nr - 1));
    for k in 0..grid.ntheta {
        for i in 0..nr - 1 {
            let v = |kk: usize, ii: usize| kk * nr + ii;
            faces.push([v(k, i), v(k, i + 1), v(k + 1, i + 1), v(k + 1, i)]);
        }
    }
    Ok(SurfaceMesh {
        vertices,
        faces,
        grid: *grid,
        theta_range: grid.theta_range(data.cover_degree),
        cover_degree: data.cover_degree,
        det_drift,
        lift,
    })
}

impl SurfaceMesh {
    pub fn vertex(&self, k: usize, i: usize) -> &BallPoint {
        &self.vertices[k * self.grid.nr + i]
    }

    /// `v x y z` lines with 17 significant digits, then 1-indexed `f i j k l` lines.
    pub fn write_obj<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for v in &self.vertices {
            writeln!(out, "v {:.16e} {:.16e} {:.16e}", v.x, v.y, v.z)?;
        }
        for f in &self.faces {
            writeln!(out, "f {} {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1, f[3] + 1)?;
        }
        Ok(())
    }

    /// Mean curvature at about `count` grid vertices spread over the mesh,
    /// with steps `h_rel |z|`, `h_rel |z| / 2`, `h_rel |z| / 4`.
    pub fn curvature_survey(
        &self,
        data: &WeierstrassData,
        source: LiftSource,
        count: usize,
        h_rel: f64,
    ) -> Result<Vec<MeanCurvatureReport>> {
        let nr = self.grid.nr;
        let cols = self.grid.ntheta + 1;
        let interior: Vec<usize> = (0..cols).flat_map(|k| (1..nr - 1).map(move |i| k * nr + i)).collect();
        if interior.is_empty() {
            return Ok(Vec::new());
        }
        let stride = (interior.len() / count.max(1)).max(1);
        interior
            .par_iter()
            .step_by(stride)
            .map(|&idx| {
                let anchor = self.lift[idx].clone();
                let z = anchor.z;
                let sampler = lift_sampler(data, source, anchor);
                mean_curvature_at(&*sampler, z, h_rel * z.norm())
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshDiagnostics {
    pub det_drift: f64,
    pub mean_curvature_max_err: f64,
    pub grid: GridSpec,
}

impl MeshDiagnostics {
    pub fn new(mesh: &SurfaceMesh, survey: &[MeanCurvatureReport]) -> Self {
        let err = survey.iter().map(|r| (r.value - 1.0).abs()).fold(0.0, f64::max);
        Self { det_drift: mesh.det_drift, mean_curvature_max_err: err, grid: mesh.grid }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_catenoid_cover, make_horosphere, make_warped_catenoid};
    use crate::lift::IntegratorOptions;

    #[test]
    fn faces_reference_vertices_and_obj_format() {
        let d = make_horosphere();
        let grid = GridSpec { nr: 4, ntheta: 6, ..Default::default() };
        let m = sample_mesh(&d, LiftSource::ClosedForm, &grid).unwrap();
        assert_eq!(m.vertices.len(), 4 * 7);
        assert!(m.faces.iter().flatten().all(|&i| i < m.vertices.len()));
        let mut buf = Vec::new();
        m.write_obj(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let first = text.lines().next().unwrap();
        assert!(first.starts_with("v ") && first.split(' ').nth(1).unwrap().contains('e'));
        assert!(text.lines().any(|l| l == "f 1 2 6 5"));
    }

    #[test]
    fn cover_closes_up() {
        let d = make_catenoid_cover(0.3, 2).unwrap();
        let grid = GridSpec { nr: 5, ntheta: 32, ..Default::default() };
        let m = sample_mesh(&d, LiftSource::Numeric(IntegratorOptions::default()), &grid).unwrap();
        for i in 0..grid.nr {
            let (a, b) = (m.vertex(0, i), m.vertex(grid.ntheta, i));
            assert!(a.distance(b) < 1e-8, "{i}: {}", a.distance(b));
        }
    }

    #[test]
    fn closed_form_and_numeric_meshes_agree() {
        let d = make_warped_catenoid(2, 1, 0.5).unwrap();
        let grid = GridSpec { nr: 6, ntheta: 12, ..Default::default() };
        let a = sample_mesh(&d, LiftSource::ClosedForm, &grid).unwrap();
        // the numeric lift starts at id, the closed form at F0 B(1): compare the isometry-invariant distances
        let b = sample_mesh(&d, LiftSource::Numeric(IntegratorOptions::default()), &grid).unwrap();
        let p = &a.vertices;
        let q = &b.vertices;
        for i in (0..p.len()).step_by(7) {
            for j in (0..p.len()).step_by(11) {
                assert!((p[i].distance(&p[j]) - q[i].distance(&q[j])).abs() < 1e-7);
            }
        }
    }
}
