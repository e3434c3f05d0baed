//! Frobenius analysis of `X'' + a X' + b X = 0` with `a = -w'/w`, `b = -q`
//! at a regular singular point.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{ExtComplex, ZERO};
use crate::error::{Error, Result};
use crate::expr::{LocalSeries, MeroExpr};

/// Integrality tolerance for `m`.
pub const M_INT_TOL: f64 = 1e-10;
/// Within this distance of an integer (but outside [`M_INT_TOL`]) a warning is raised.
pub const M_WARN_TOL: f64 = 1e-6;

/// `a(z) = (1/t) sum a_j t^j`, `b(z) = (1/t^2) sum b_j t^j` with `t = z - p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesODE {
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
}

impl SeriesODE {
    pub fn new(a: Vec<Complex64>, b: Vec<Complex64>) -> Result<Self> {
        if a.len() != b.len() || a.is_empty() {
            return Err(Error::InvalidParams("a and b need the same nonzero length".into()));
        }
        Ok(Self { a, b })
    }

    /// Truncation order `N`: coefficients `0..=N` are stored.
    pub fn n(&self) -> usize {
        self.a.len() - 1
    }

    fn a(&self, j: usize) -> Complex64 {
        self.a.get(j).copied().unwrap_or(ZERO)
    }

    fn b(&self, j: usize) -> Complex64 {
        self.b.get(j).copied().unwrap_or(ZERO)
    }
}

/// Coefficients of `a = -w'/w` at `p`, exactly for power products:
/// `w'/w = sum_k e_k / (z - p_k)`.
fn log_derivative_coeffs(w: &MeroExpr, p: Complex64, n: usize) -> Result<Vec<Complex64>> {
    if let Some((_, factors)) = w.as_power_product() {
        let mut a = vec![ZERO; n + 1];
        for (c, e) in factors {
            if c == p {
                a[0] -= e;
            } else {
                // e/(z - c) = -e/(c - p) * sum (t/(c - p))^j
                let d = c - p;
                let mut pw = d;
                for aj in a.iter_mut().skip(1) {
                    *aj += e / pw;
                    pw *= d;
                }
            }
        }
        return Ok(a);
    }
    let ratio = w.differentiate() / w.clone();
    let (start, coeffs) = LocalSeries::expand(&ratio, ExtComplex::Finite(p), n + 2)?.integer_laurent()?;
    if start < -1 {
        return Err(Error::IrregularSingularity(format!("w'/w has a pole of order {} at {p}", -start)));
    }
    Ok((0..=n)
        .map(|j| {
            let k = j as i64 - 1 - start;
            if k < 0 {
                ZERO
            } else {
                -coeffs.get(k as usize).copied().unwrap_or(ZERO)
            }
        })
        .collect())
}

/// Builds the truncated series ODE at the finite point `p`.
pub fn ode_from_data(w: &MeroExpr, q: &MeroExpr, p: ExtComplex, n: usize) -> Result<SeriesODE> {
    let ExtComplex::Finite(p) = p else {
        return Err(Error::InvalidParams("move the point to the finite plane before expanding".into()));
    };
    if w.is_zero() {
        return Err(Error::InvalidParams("w must not vanish identically".into()));
    }
    let a = log_derivative_coeffs(w, p, n)?;
    let b = if q.is_zero() {
        vec![ZERO; n + 1]
    } else {
        let (start, coeffs) = LocalSeries::expand(q, ExtComplex::Finite(p), n + 3)?.integer_laurent()?;
        if start < -2 {
            return Err(Error::IrregularSingularity(format!("q has a pole of order {} at {p}", -start)));
        }
        (0..=n)
            .map(|j| {
                let k = j as i64 - 2 - start;
                if k < 0 {
                    ZERO
                } else {
                    -coeffs.get(k as usize).copied().unwrap_or(ZERO)
                }
            })
            .collect()
    };
    SeriesODE::new(a, b)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MKind {
    PositiveInteger(u32),
    /// Double root.
    Zero,
    NonInteger,
    Complex,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndicialData {
    pub lambda: Complex64,
    /// `lambda + m`.
    pub lambda_plus_m: Complex64,
    pub m: Complex64,
    pub kind: MKind,
    /// `m` is real and within [`M_WARN_TOL`] of an integer without being classified as one.
    pub near_integer_warning: bool,
}

/// Roots of `t(t - 1) + a0 t + b0 = 0`, ordered so that `m` has nonnegative real part.
pub fn indicial_roots(a0: Complex64, b0: Complex64) -> IndicialData {
    let s = a0 - 1.0;
    let mut m = (s * s - 4.0 * b0).sqrt();
    if m.re < 0.0 || (m.re == 0.0 && m.im < 0.0) {
        m = -m;
    }
    let lambda = (-s - m) / 2.0;
    let (kind, warn) = if m.im.abs() > M_INT_TOL * (1.0 + m.re.abs()) {
        (MKind::Complex, false)
    } else {
        let r = m.re.round();
        let d = (m.re - r).abs();
        if d <= M_INT_TOL {
            if r == 0.0 {
                (MKind::Zero, false)
            } else {
                (MKind::PositiveInteger(r as u32), false)
            }
        } else {
            (MKind::NonInteger, d <= M_WARN_TOL)
        }
    };
    IndicialData { lambda, lambda_plus_m: lambda + m, m, kind, near_integer_warning: warn }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogTermReport {
    pub m: u32,
    pub lambda: Complex64,
    /// `eta_0 = 1, ..., eta_{m-1}`.
    pub eta: Vec<Complex64>,
    /// Vanishes iff the solution at the smaller root has no logarithm.
    pub coefficient: Complex64,
    /// Largest residual of the defining relations `j (m - j) eta_j = sum ...`.
    pub recursion_residual: f64,
}

fn shift_term(ode: &SeriesODE, lambda: Complex64, k: usize, i: usize) -> Complex64 {
    (lambda + k as f64) * ode.a(i) + ode.b(i)
}

/// `sum_{k<m} ((lambda + k) a_{m-k} + b_{m-k}) eta_k` with
/// `eta_j = (1/(j(m-j))) sum_{k<j} ((lambda + k) a_{j-k} + b_{j-k}) eta_k`.
pub fn log_term_coefficient(ode: &SeriesODE, lambda: Complex64, m: u32) -> Result<LogTermReport> {
    if m == 0 {
        return Err(Error::InvalidParams("m must be a positive integer".into()));
    }
    let mu = m as usize;
    if ode.n() < mu {
        return Err(Error::InvalidParams(format!("truncation {} below m = {m}", ode.n())));
    }
    let sum = |eta: &[Complex64], j: usize| -> Complex64 { (0..j).map(|k| shift_term(ode, lambda, k, j - k) * eta[k]).sum() };
    let mut eta = vec![Complex64::new(1.0, 0.0)];
    for j in 1..mu {
        let v = sum(&eta, j) / (j * (mu - j)) as f64;
        eta.push(v);
    }
    let mut residual = 0.0f64;
    for j in 1..mu {
        let lhs = eta[j] * (j * (mu - j)) as f64;
        residual = residual.max((lhs - sum(&eta, j)).norm());
    }
    Ok(LogTermReport { m, lambda, coefficient: sum(&eta, mu), eta, recursion_residual: residual })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesOracleReport {
    /// `c_0 = 1, c_1, ..., c_N` of `X = z^lambda sum c_k z^k`; `c_m` is set to 0 at a resonance.
    pub coeffs: Vec<Complex64>,
    /// Index where `P(lambda + k) = 0`, if any in `1..=N`.
    pub resonance: Option<usize>,
    /// Residual of the operator at the resonant power; 0 without resonance.
    pub obstruction: Complex64,
}

/// Coefficient of `z^{lambda + j}` in `z^{2 - lambda} L[z^{lambda + k}]`.
fn operator_entry(ode: &SeriesODE, lambda: Complex64, j: usize, k: usize) -> Complex64 {
    if j < k {
        return ZERO;
    }
    let s = lambda + k as f64;
    let i = j - k;
    let mut v = s * ode.a(i) + ode.b(i);
    if i == 0 {
        v += s * (s - 1.0);
    }
    v
}

/// Dense Gaussian elimination with partial pivoting.
fn solve_dense(mut m: Vec<Vec<Complex64>>, mut rhs: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = rhs.len();
    for col in 0..n {
        let piv = (col..n).max_by(|a, b| m[*a][col].norm().total_cmp(&m[*b][col].norm()))?;
        if m[piv][col].norm() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            if f != ZERO {
                for c in col..n {
                    let t = m[col][c];
                    m[r][c] -= f * t;
                }
                let t = rhs[col];
                rhs[r] -= f * t;
            }
        }
    }
    let mut x = vec![ZERO; n];
    for r in (0..n).rev() {
        let s: Complex64 = (r + 1..n).map(|c| m[r][c] * x[c]).sum();
        x[r] = (rhs[r] - s) / m[r][r];
    }
    Some(x)
}

/// Independent term-by-term solve of `L[X] = 0` for `X = z^lambda sum c_k z^k`.
///
/// The operator is applied column by column to `z^{lambda + k}`, the non-resonant
/// equations are solved as one dense system with `c_0 = 1`, and the equation
/// at the resonant power is evaluated as the obstruction.  Its normalization
/// matches [`log_term_coefficient`] exactly.
pub fn series_oracle(ode: &SeriesODE, lambda: Complex64, n: usize) -> SeriesOracleReport {
    let p = |j: usize| operator_entry(ode, lambda, j, j);
    let resonance = (1..=n).find(|&j| p(j).norm() <= 1e-12 * (1.0 + (lambda + j as f64).norm_sqr()));
    // unknowns c_k, k in 1..=n, k != resonance
    let unknowns: Vec<usize> = (1..=n).filter(|k| Some(*k) != resonance).collect();
    let rows: Vec<usize> = unknowns.clone();
    let mat: Vec<Vec<Complex64>> =
        rows.iter().map(|&j| unknowns.iter().map(|&k| operator_entry(ode, lambda, j, k)).collect()).collect();
    let rhs: Vec<Complex64> = rows.iter().map(|&j| -operator_entry(ode, lambda, j, 0)).collect();
    let sol = solve_dense(mat, rhs).unwrap_or_else(|| vec![ZERO; unknowns.len()]);
    let mut coeffs = vec![ZERO; n + 1];
    coeffs[0] = Complex64::new(1.0, 0.0);
    for (k, v) in unknowns.iter().zip(sol) {
        coeffs[*k] = v;
    }
    let obstruction = match resonance {
        Some(m) => (0..m).map(|k| operator_entry(ode, lambda, m, k) * coeffs[k]).sum(),
        None => ZERO,
    };
    SeriesOracleReport { coeffs, resonance, obstruction }
}

/// Data of type `O(-2,-3)` at the end `z = 0`: `q = theta (z - 1)/z^2`,
/// `w = (theta/c) z^{-mu-1}/(mu + 1)` with `c = 1`.
pub fn o23_data(mu: f64, theta: Complex64) -> Result<(MeroExpr, MeroExpr)> {
    if (mu + 1.0).abs() < 1e-12 || theta.norm() == 0.0 {
        return Err(Error::InvalidParams("need mu != -1 and theta != 0".into()));
    }
    let q = MeroExpr::constant(theta) * (MeroExpr::var() - MeroExpr::one()) * MeroExpr::z_pow(-2.0);
    let w = MeroExpr::constant(theta / (mu + 1.0)) * MeroExpr::z_pow(-mu - 1.0);
    Ok((w, q))
}

/// Log-term report for `O(-2,-3)` data at `z = 0`, or `None` if `m` is not a positive integer.
pub fn o23_log_term(mu: f64, theta: f64) -> Result<Option<LogTermReport>> {
    let (w, q) = o23_data(mu, Complex64::new(theta, 0.0))?;
    let ode = ode_from_data(&w, &q, ExtComplex::Finite(ZERO), 8)?;
    let ind = indicial_roots(ode.a[0], ode.b[0]);
    match ind.kind {
        MKind::PositiveInteger(m) if m as usize <= ode.n() => log_term_coefficient(&ode, ind.lambda, m).map(Some),
        _ => Ok(None),
    }
}
