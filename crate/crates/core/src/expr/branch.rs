use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{is_integer, principal_power, MeroExpr};
use crate::error::{Error, Result};

/// Branch bookkeeping for analytic continuation.
///
/// For each tracked center `p` the continuous argument of `z - p` at
/// `point` is `Arg(point - p) + 2 pi k` with the stored integer `k`.
/// Windings are keyed by center rather than by tree node, so every factor
/// sharing a center shares one continuous logarithm; this is the same
/// continuation and keeps the state independent of tree shape.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchState {
    point: Complex64,
    windings: Vec<(Complex64, i64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuationOptions {
    /// Minimum distance to a singular point, as a fraction of the path's bounding-box diameter.
    pub margin_fraction: f64,
    /// Absolute floor on the margin.
    pub margin_floor: f64,
}

impl Default for ContinuationOptions {
    fn default() -> Self {
        Self { margin_fraction: 1e-3, margin_floor: 1e-12 }
    }
}

impl BranchState {
    /// Principal branch at `point`.
    pub fn new(point: Complex64) -> Self {
        Self { point, windings: Vec::new() }
    }

    pub fn point(&self) -> Complex64 {
        self.point
    }

    pub fn winding(&self, center: Complex64) -> i64 {
        self.windings.iter().find(|(c, _)| *c == center).map(|(_, k)| *k).unwrap_or(0)
    }

    pub fn windings(&self) -> &[(Complex64, i64)] {
        &self.windings
    }

    fn set_winding(&mut self, center: Complex64, k: i64) {
        if let Some(slot) = self.windings.iter_mut().find(|(c, _)| *c == center) {
            slot.1 = k;
        } else if k != 0 {
            self.windings.push((center, k));
        }
    }

    /// Continuous argument of `z - center`, continued from `point` along the straight segment.
    pub fn continuous_arg(&self, z: Complex64, center: Complex64) -> f64 {
        let base = self.point - center;
        let here = base.arg() + 2.0 * PI * self.winding(center) as f64;
        if z == self.point {
            return here;
        }
        here + ((z - center) / base).arg()
    }

    /// Value of `(z - center)^exponent` on this branch.
    pub fn power_at(&self, z: Complex64, center: Complex64, exponent: f64) -> Complex64 {
        let d = z - center;
        if is_integer(exponent) || d.norm() == 0.0 || self.point == center {
            return principal_power(d, exponent);
        }
        let log = Complex64::new(d.norm().ln(), self.continuous_arg(z, center));
        (exponent * log).exp()
    }

    /// Moves the base point to `z` along a straight segment, updating the windings of `centers`.
    pub fn advance_to(&mut self, z: Complex64, centers: &[Complex64]) -> Result<()> {
        for &c in centers {
            if self.point == c || z == c {
                return Err(Error::Continuation(format!("path touches singular point {c}")));
            }
        }
        if z == self.point {
            return Ok(());
        }
        for &c in centers {
            let cont = self.continuous_arg(z, c);
            let k = ((cont - (z - c).arg()) / (2.0 * PI)).round() as i64;
            self.set_winding(c, k);
        }
        self.point = z;
        Ok(())
    }

    /// Continues along a polyline starting at the current point.  Every
    /// segment must keep `margin` away from each center.
    pub fn advance_along(&mut self, path: &[Complex64], centers: &[Complex64], margin: f64) -> Result<()> {
        for &z in path {
            let a = self.point;
            for &c in centers {
                let d = segment_distance(a, z, c);
                if d < margin {
                    return Err(Error::Continuation(format!(
                        "segment {a} -> {z} passes within {d:.3e} of singular point {c} (margin {margin:.3e})"
                    )));
                }
            }
            self.advance_to(z, centers)?;
        }
        Ok(())
    }
}

/// Euclidean distance from `p` to the segment `[a, b]`.
pub fn segment_distance(a: Complex64, b: Complex64, p: Complex64) -> f64 {
    let ab = b - a;
    let l2 = ab.norm_sqr();
    if l2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * ab.conj()).re / l2).clamp(0.0, 1.0);
    (a + ab * t - p).norm()
}

/// Analytic continuation of `e` along `path`, starting on the branch fixed by `state`.
///
/// If the path does not start at `state.point()`, the initial segment from
/// the state's point to `path[0]` is part of the continuation.
pub fn evaluate_continued(
    e: &MeroExpr,
    path: &[Complex64],
    state: &BranchState,
    opts: &ContinuationOptions,
) -> Result<(Complex64, BranchState)> {
    let mut st = state.clone();
    if path.is_empty() {
        return Ok((e.eval_on(st.point(), &st), st));
    }
    let (mut lo, mut hi) = (st.point(), st.point());
    for z in path {
        lo = Complex64::new(lo.re.min(z.re), lo.im.min(z.im));
        hi = Complex64::new(hi.re.max(z.re), hi.im.max(z.im));
    }
    let margin = (opts.margin_fraction * (hi - lo).norm()).max(opts.margin_floor);
    let centers = e.centers();
    st.advance_along(path, &centers, margin)?;
    for z in path {
        let v = e.eval_on(*z, &st);
        if !v.is_finite() {
            return Err(Error::Continuation(format!("pole of the expression on the path at {z}")));
        }
    }
    let v = e.eval_on(st.point(), &st);
    Ok((v, st))
}

/// Closed polygon approximating the circle `|z - center| = radius`, starting
/// and ending at `center + radius * e^{i start}`; negative `turns` go clockwise.
pub fn circle_path(center: Complex64, radius: f64, start: f64, turns: f64, segments: usize) -> Vec<Complex64> {
    (1..=segments)
        .map(|k| center + Complex64::from_polar(radius, start + 2.0 * PI * turns * k as f64 / segments as f64))
        .collect()
}
