//! Local generalized Laurent expansions `sum_k c_k t^{alpha + k}` of
//! expressions, with `t = z - p` at a finite point and `t = 1/z` at infinity.
//!
//! A [`LocalSeries`] is a list of classes whose exponents differ by
//! non-integers; classes whose exponents differ by an integer are merged.
//! Constant factors of powers centered elsewhere use the principal branch.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{principal_power, MeroExpr};
use crate::algebra::ExtComplex;
use crate::error::{Error, Result};

/// Alphas within this distance of differing by an integer are treated as congruent.
const ALPHA_SNAP: f64 = 1e-9;
/// Coefficients below this multiple of their input scale count as cancelled.
const ZERO_TOL: f64 = 1e-11;
/// Extra terms carried through quotient and leading-zero stripping.
const PAD: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesClass {
    pub alpha: f64,
    pub coeffs: Vec<Complex64>,
    /// Magnitude of the terms that were combined into these coefficients.
    pub scale: f64,
}

impl SeriesClass {
    fn is_negligible(&self, k: usize) -> bool {
        self.coeffs[k].norm() <= ZERO_TOL * self.scale.max(f64::MIN_POSITIVE)
    }

    fn strip(&mut self) {
        let lead = (0..self.coeffs.len()).find(|&k| !self.is_negligible(k)).unwrap_or(self.coeffs.len());
        self.coeffs.drain(..lead);
        self.alpha += lead as f64;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalSeries {
    pub center: ExtComplex,
    pub classes: Vec<SeriesClass>,
}

fn congruent_shift(a: f64, b: f64) -> Option<i64> {
    let d = b - a;
    let r = d.round();
    ((d - r).abs() <= ALPHA_SNAP).then_some(r as i64)
}

fn binomial_series(e: f64, x: Complex64, n: usize) -> Vec<Complex64> {
    // (1 + x t)^e
    let mut out = Vec::with_capacity(n);
    let mut b = Complex64::new(1.0, 0.0);
    for k in 0..n {
        out.push(b);
        b = b * (e - k as f64) / (k as f64 + 1.0) * x;
    }
    out
}

impl LocalSeries {
    fn zero(center: ExtComplex) -> Self {
        Self { center, classes: vec![] }
    }

    fn single(center: ExtComplex, alpha: f64, coeffs: Vec<Complex64>) -> Self {
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        Self { center, classes: vec![SeriesClass { alpha, coeffs, scale }] }
    }

    /// Expands `e` about `center` keeping `n` terms per class.
    pub fn expand(e: &MeroExpr, center: ExtComplex, n: usize) -> Result<Self> {
        let mut s = Self::expand_raw(e, center, n + PAD)?;
        for c in &mut s.classes {
            c.coeffs.truncate(n);
        }
        Ok(s)
    }

    fn expand_raw(e: &MeroExpr, center: ExtComplex, n: usize) -> Result<Self> {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        Ok(match e {
            MeroExpr::Const(c) => {
                if c.norm() == 0.0 {
                    Self::zero(center)
                } else {
                    let mut v = vec![zero; n];
                    v[0] = *c;
                    Self::single(center, 0.0, v)
                }
            }
            MeroExpr::Var => match center {
                ExtComplex::Finite(p) => {
                    let mut v = vec![zero; n.max(2)];
                    v[0] = p;
                    v[1] = one;
                    let scale = p.norm().max(1.0);
                    let mut s = Self::single(center, 0.0, v);
                    s.classes[0].scale = scale;
                    s
                }
                ExtComplex::Infinity => {
                    let mut v = vec![zero; n];
                    v[0] = one;
                    Self::single(center, -1.0, v)
                }
            },
            MeroExpr::Power { center: p, exponent } => match center {
                ExtComplex::Finite(c) if c == *p => {
                    let mut v = vec![zero; n];
                    v[0] = one;
                    Self::single(center, *exponent, v)
                }
                ExtComplex::Finite(c) => {
                    let d = c - p;
                    let lead = principal_power(d, *exponent);
                    let v = binomial_series(*exponent, d.inv(), n).into_iter().map(|b| b * lead).collect();
                    Self::single(center, 0.0, v)
                }
                ExtComplex::Infinity => {
                    let v = binomial_series(*exponent, -p, n);
                    Self::single(center, -exponent, v)
                }
            },
            MeroExpr::Sum(v) => {
                let mut acc = Self::zero(center);
                for t in v {
                    acc = acc.add(&Self::expand_raw(t, center, n)?);
                }
                acc
            }
            MeroExpr::Product(v) => {
                let mut acc = Self::expand_raw(&MeroExpr::one(), center, n)?;
                for t in v {
                    acc = acc.mul(&Self::expand_raw(t, center, n)?);
                }
                acc
            }
            MeroExpr::Quotient(a, b) => {
                let num = Self::expand_raw(a, center, n)?;
                let den = Self::expand_raw(b, center, n)?;
                num.mul(&den.inverse()?)
            }
            MeroExpr::IntPow(b, k) => {
                let base = Self::expand_raw(b, center, n)?;
                let base = if *k < 0 { base.inverse()? } else { base };
                let mut acc = Self::expand_raw(&MeroExpr::one(), center, n)?;
                for _ in 0..k.unsigned_abs() {
                    acc = acc.mul(&base);
                }
                acc
            }
        })
    }

    fn push_class(classes: &mut Vec<SeriesClass>, c: SeriesClass) {
        for existing in classes.iter_mut() {
            if let Some(k) = congruent_shift(existing.alpha, c.alpha) {
                let (lo, hi, shift) =
                    if k >= 0 { (existing.clone(), c, k as usize) } else { (c, existing.clone(), (-k) as usize) };
                let len = lo.coeffs.len().min(hi.coeffs.len() + shift);
                let mut coeffs = lo.coeffs[..len].to_vec();
                for (j, v) in hi.coeffs.iter().enumerate() {
                    if j + shift < len {
                        coeffs[j + shift] += v;
                    }
                }
                *existing = SeriesClass { alpha: lo.alpha, coeffs, scale: lo.scale.max(hi.scale) };
                return;
            }
        }
        classes.push(c);
        classes.sort_by(|a, b| a.alpha.total_cmp(&b.alpha));
    }

    fn add(&self, o: &Self) -> Self {
        let mut classes = self.classes.clone();
        for c in &o.classes {
            Self::push_class(&mut classes, c.clone());
        }
        Self { center: self.center, classes }
    }

    fn mul(&self, o: &Self) -> Self {
        let mut classes = Vec::new();
        for a in &self.classes {
            for b in &o.classes {
                let len = a.coeffs.len().min(b.coeffs.len());
                let mut coeffs = vec![Complex64::new(0.0, 0.0); len];
                for (i, x) in a.coeffs.iter().take(len).enumerate() {
                    for (j, y) in b.coeffs.iter().take(len - i).enumerate() {
                        coeffs[i + j] += x * y;
                    }
                }
                Self::push_class(&mut classes, SeriesClass { alpha: a.alpha + b.alpha, coeffs, scale: a.scale * b.scale });
            }
        }
        Self { center: self.center, classes }
    }

    fn inverse(&self) -> Result<Self> {
        let mut classes = self.classes.clone();
        classes.iter_mut().for_each(|c| c.strip());
        classes.retain(|c| !c.coeffs.is_empty());
        if classes.len() != 1 {
            return Err(Error::Series(format!("cannot invert a series with {} exponent classes", classes.len())));
        }
        let c = &classes[0];
        let c0 = c.coeffs[0];
        let n = c.coeffs.len();
        let mut inv = vec![Complex64::new(0.0, 0.0); n];
        inv[0] = c0.inv();
        for k in 1..n {
            let mut s = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                s += c.coeffs[j] * inv[k - j];
            }
            inv[k] = -s / c0;
        }
        let scale = inv[0].norm() * (c.scale / c0.norm()).max(1.0);
        Ok(Self { center: self.center, classes: vec![SeriesClass { alpha: -c.alpha, coeffs: inv, scale }] })
    }

    /// Smallest exponent with a non-cancelled coefficient.
    pub fn leading_order(&self) -> Option<f64> {
        self.classes
            .iter()
            .filter_map(|c| (0..c.coeffs.len()).find(|&k| !c.is_negligible(k)).map(|k| c.alpha + k as f64))
            .min_by(|a, b| a.total_cmp(b))
    }

    /// Single-class form `(alpha, coeffs)` with leading cancellations removed.
    pub fn single_class(&self) -> Result<(f64, Vec<Complex64>)> {
        let mut classes = self.classes.clone();
        classes.iter_mut().for_each(|c| c.strip());
        classes.retain(|c| !c.coeffs.is_empty());
        match classes.len() {
            0 => Ok((0.0, vec![])),
            1 => Ok((classes[0].alpha, classes[0].coeffs.clone())),
            k => Err(Error::NotPowerProduct(format!("{k} exponent classes at {} are not congruent mod 1", self.center))),
        }
    }

    /// Integer Laurent form `sum_k c_k t^{start + k}`; cancelled terms are set to exactly zero.
    pub fn integer_laurent(&self) -> Result<(i64, Vec<Complex64>)> {
        let mut classes = self.classes.clone();
        classes.retain(|c| !c.coeffs.is_empty());
        match classes.len() {
            0 => Ok((0, vec![])),
            1 => {
                let c = &classes[0];
                let r = c.alpha.round();
                if (c.alpha - r).abs() > ALPHA_SNAP {
                    return Err(Error::Series(format!("non-integer exponent {} at {}", c.alpha, self.center)));
                }
                let coeffs = (0..c.coeffs.len())
                    .map(|k| if c.is_negligible(k) { Complex64::new(0.0, 0.0) } else { c.coeffs[k] })
                    .collect();
                Ok((r as i64, coeffs))
            }
            _ => Err(Error::Series(format!("multivalued expansion at {}", self.center))),
        }
    }
}

/// Single-class Laurent expansion about a point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaurentExpansion {
    pub center: ExtComplex,
    pub leading_exponent: f64,
    pub coeffs: Vec<Complex64>,
    pub order: usize,
}

impl LaurentExpansion {
    pub fn expand(e: &MeroExpr, center: ExtComplex, order: usize) -> Result<Self> {
        let (alpha, coeffs) = LocalSeries::expand(e, center, order)?.single_class()?;
        Ok(Self { center, leading_exponent: alpha, order: coeffs.len(), coeffs })
    }

    /// Local coordinate `t` of `z`.
    pub fn local_coordinate(&self, z: Complex64) -> Complex64 {
        match self.center {
            ExtComplex::Finite(p) => z - p,
            ExtComplex::Infinity => z.inv(),
        }
    }

    /// Truncated sum at `z`, principal branch of `t^alpha`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let t = self.local_coordinate(z);
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc * principal_power(t, self.leading_exponent)
    }
}

/// Leading exponent of `e` in the local coordinate at `p`.
pub fn leading_order(e: &MeroExpr, p: ExtComplex) -> Result<f64> {
    LocalSeries::expand(e, p, 12)?
        .leading_order()
        .ok_or_else(|| Error::Series(format!("expression vanishes identically near {p}")))
}

/// Multiplicative monodromy `e^{2 pi i tau}` of `e` along a small positive
/// loop about `p` in the local coordinate (`t = 1/z` at infinity, so the
/// loop is clockwise in `z`).
pub fn monodromy_factor(e: &MeroExpr, p: ExtComplex) -> Result<Complex64> {
    let (alpha, coeffs) = LocalSeries::expand(e, p, 6)?.single_class()?;
    if coeffs.is_empty() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let frac = alpha - alpha.round();
    if frac.abs() <= ALPHA_SNAP {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok(Complex64::from_polar(1.0, 2.0 * PI * frac))
}

/// Exponent of `dg` at `p` in the local coordinate (`w = 1/z` at infinity).
pub fn dg_exponent(g: &MeroExpr, p: ExtComplex) -> Result<f64> {
    let dg = g.differentiate();
    let lead = leading_order(&dg, p)?;
    Ok(match p {
        ExtComplex::Finite(_) => lead,
        // dz = -dw / w^2
        ExtComplex::Infinity => lead - 2.0,
    })
}

/// Order of the pseudometric from the exponent `beta` of `dg`: `beta` if
/// `beta > -1`, `-beta - 2` if `beta < -1`.
pub fn conical_order_from_dg_exponent(beta: f64) -> Result<f64> {
    if (beta + 1.0).abs() <= 1e-12 {
        return Err(Error::LogarithmicOrder(format!("dg exponent {beta}")));
    }
    Ok(if beta > -1.0 { beta } else { -beta - 2.0 })
}

pub fn conical_order(g: &MeroExpr, p: ExtComplex) -> Result<f64> {
    conical_order_from_dg_exponent(dg_exponent(g, p)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::branch::circle_path;
    use crate::expr::{evaluate_continued, parse, BranchState, ContinuationOptions};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }
    const ORIGIN: ExtComplex = ExtComplex::Finite(Complex64::new(0.0, 0.0));

    #[test]
    fn conical_orders() {
        let g = MeroExpr::z_pow(0.8);
        assert!((conical_order(&g, ORIGIN).unwrap() + 0.2).abs() < 1e-14);
        assert!((conical_order(&g, ExtComplex::Infinity).unwrap() + 0.2).abs() < 1e-14);
        assert_eq!(conical_order_from_dg_exponent(-3.0).unwrap(), 1.0);
        assert_eq!(conical_order(&MeroExpr::var(), ORIGIN).unwrap(), 0.0);
        assert!(matches!(conical_order_from_dg_exponent(-1.0), Err(Error::LogarithmicOrder(_))));
    }

    #[test]
    fn prop_a2_map_orders() {
        for &mu in &[-0.6, 2.0, 0.4, -1.7] {
            let cc = c(0.8, 0.3);
            let g = MeroExpr::constant(cc) * MeroExpr::z_pow(mu) * (MeroExpr::var() - MeroExpr::real((mu + 1.0) / mu));
            let b0 = conical_order(&g, ORIGIN).unwrap();
            let binf = conical_order(&g, ExtComplex::Infinity).unwrap();
            let b1 = conical_order(&g, ExtComplex::Finite(c(1.0, 0.0))).unwrap();
            assert!((b0 - (mu.abs() - 1.0)).abs() < 1e-12, "{mu}: {b0}");
            assert!((binf - ((mu + 1.0).abs() - 1.0)).abs() < 1e-12, "{mu}: {binf}");
            assert!((b1 - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn monodromy_factors() {
        let mu = 0.3;
        let f = monodromy_factor(&MeroExpr::z_pow(mu), ORIGIN).unwrap();
        assert!((f - Complex64::from_polar(1.0, 2.0 * PI * mu)).norm() < 1e-14);
        let r = parse("(z^2+1)/(z-3)").unwrap();
        assert_eq!(monodromy_factor(&r, ExtComplex::Finite(c(3.0, 0.0))).unwrap(), c(1.0, 0.0));
        // total exponent mu + 1 at infinity
        let mu = -0.6;
        let g = MeroExpr::constant(c(1.3, 0.0)) * MeroExpr::z_pow(mu) * (MeroExpr::var() - MeroExpr::real((mu + 1.0) / mu));
        let f = monodromy_factor(&g, ExtComplex::Infinity).unwrap();
        assert!((f - Complex64::from_polar(1.0, -2.0 * PI * (mu + 1.0))).norm() < 1e-12);
        // oracle: continuation along a large clockwise circle
        let st = BranchState::new(c(5.0, 0.0));
        let path = circle_path(c(0.0, 0.0), 5.0, 0.0, -1.0, 400);
        let (v, _) = evaluate_continued(&g, &path, &st, &ContinuationOptions::default()).unwrap();
        let v0 = g.eval_on(c(5.0, 0.0), &st);
        assert!((v / v0 - f).norm() < 1e-10);
        assert!(monodromy_factor(&parse("z^0.5 + z^0.25").unwrap(), ORIGIN).is_err());
    }

    #[test]
    fn laurent_round_trip() {
        let e = parse("3*z^(-0.4)*(z-1)^1.5/(z+2)").unwrap();
        let ex = LaurentExpansion::expand(&e, ORIGIN, 30).unwrap();
        assert!((ex.leading_exponent + 0.4).abs() < 1e-12);
        // convergence radius 1; at half of it the truncation error is ~ (1/2)^30
        // constants of factors centered elsewhere follow the branch continued from the center
        let st = BranchState::new(c(0.0, 0.0));
        for k in 0..8 {
            let z = Complex64::from_polar(0.5, 0.3 + 0.7 * k as f64);
            let (a, b) = (ex.eval(z), e.eval_on(z, &st));
            assert!((a - b).norm() <= 1e-7 * b.norm(), "{a} {b}");
        }
        let at_inf = LaurentExpansion::expand(&parse("(z-1)^2/(z+3)").unwrap(), ExtComplex::Infinity, 30).unwrap();
        assert_eq!(at_inf.leading_exponent, -1.0);
        let z = c(8.0, 3.0);
        assert!((at_inf.eval(z) - (z - 1.0) * (z - 1.0) / (z + 3.0)).norm() < 1e-9);
    }

    #[test]
    fn integer_laurent_exact_zeros() {
        let mu = 0.37;
        let theta = c(0.2, -0.5);
        let w = MeroExpr::constant(theta / (mu + 1.0)) * MeroExpr::z_pow(-mu - 1.0);
        let a = -(w.differentiate() / w);
        let (start, co) = LocalSeries::expand(&a, ORIGIN, 8).unwrap().integer_laurent().unwrap();
        assert_eq!(start, -1);
        assert!((co[0] - c(mu + 1.0, 0.0)).norm() < 1e-15);
        assert!(co[1..].iter().all(|x| *x == c(0.0, 0.0)));
    }

    proptest! {
        #[test]
        fn round_trip_random_power_products(p1 in 1.5f64..3.0, e1 in -2.0f64..2.0, e0 in -2.0f64..2.0, t in 0.0f64..6.2) {
            let e = MeroExpr::z_pow(e0) * MeroExpr::power(c(p1, 0.5), e1);
            let radius = (c(p1, 0.5)).norm();
            let ex = LaurentExpansion::expand(&e, ORIGIN, 40).unwrap();
            let z = Complex64::from_polar(radius / 2.0, t);
            let (a, b) = (ex.eval(z), e.eval_on(z, &BranchState::new(c(0.0, 0.0))));
            prop_assert!((a - b).norm() <= 1e-6 * b.norm());
        }
    }
}
