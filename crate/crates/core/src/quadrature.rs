//! Adaptive Gauss-Kronrod (7/15) quadrature with global worst-cell refinement.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
/// Gauss weights at `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_cells: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 1e-10, max_cells: 4000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub cells: usize,
}

#[derive(Clone, Copy, Debug)]
struct Cell {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn nodes(a: f64, b: f64) -> [f64; 15] {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let mut x = [0.0; 15];
    for i in 0..7 {
        x[2 * i] = c - h * XGK[i];
        x[2 * i + 1] = c + h * XGK[i];
    }
    x[14] = c;
    x
}

/// QUADPACK error scaling: `resasc * min(1, (200 |K - G| / resasc)^1.5)`,
/// floored by the rounding level of `resabs`.
fn gk15<F: Fn(f64) -> f64 + Sync>(f: &F, a: f64, b: f64) -> Cell {
    let x = nodes(a, b);
    let fx: Vec<f64> = x.par_iter().map(|&t| f(t)).collect();
    let h = 0.5 * (b - a);
    let mut k = WGK[7] * fx[14];
    let mut g = WG[3] * fx[14];
    let mut resabs = WGK[7] * fx[14].abs();
    for i in 0..7 {
        let s = fx[2 * i] + fx[2 * i + 1];
        k += WGK[i] * s;
        resabs += WGK[i] * (fx[2 * i].abs() + fx[2 * i + 1].abs());
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    let mean = 0.5 * k;
    let mut resasc = WGK[7] * (fx[14] - mean).abs();
    for i in 0..7 {
        resasc += WGK[i] * ((fx[2 * i] - mean).abs() + (fx[2 * i + 1] - mean).abs());
    }
    let (resabs, resasc) = (resabs * h.abs(), resasc * h.abs());
    let mut error = ((k - g) * h).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Cell { a, b, value: k * h, error }
}

fn splittable(c: &Cell) -> bool {
    let m = 0.5 * (c.a + c.b);
    let lo = c.a.min(c.b);
    let hi = c.a.max(c.b);
    // the GK nodes of both halves must stay distinct from the endpoints
    m > lo && m < hi && (hi - lo) > 4.0 * f64::EPSILON * m.abs().max(f64::MIN_POSITIVE)
}

/// Integrates `f` over `[a, b]`; `f` may be evaluated from several threads.
///
/// The cell with the largest error estimate is bisected until the summed
/// estimate meets `max(abs_tol, rel_tol |I|)`.  Sums are taken in cell
/// order, so the result is independent of scheduling.
pub fn integrate<F: Fn(f64) -> f64 + Sync>(f: &F, a: f64, b: f64, opts: &AdaptiveOptions) -> Result<QuadResult> {
    let mut cells = vec![gk15(f, a, b)];
    loop {
        let value: f64 = cells.iter().map(|c| c.value).sum();
        let error: f64 = cells.iter().map(|c| c.error).sum();
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::QuadratureDivergence { estimate: value, error });
        }
        if error <= opts.abs_tol.max(opts.rel_tol * value.abs()) {
            return Ok(QuadResult { value, error, cells: cells.len() });
        }
        let worst = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| splittable(c))
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i);
        let Some(i) = worst else {
            return Ok(QuadResult { value, error, cells: cells.len() });
        };
        if cells.len() >= opts.max_cells {
            return Err(Error::QuadratureDivergence { estimate: value, error });
        }
        let c = cells[i];
        let m = 0.5 * (c.a + c.b);
        let (l, r) = rayon::join(|| gk15(f, c.a, m), || gk15(f, m, c.b));
        cells[i] = l;
        cells.insert(i + 1, r);
    }
}
