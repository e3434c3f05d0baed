//! Rotation-angle inequalities in SU(2), lifted monodromy of reducible
//! spherical metrics, and the divisor bound that follows from them.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{rotation_angle, ExtComplex, Mat2C, SU2Element};
use crate::error::{Error, Result};
use crate::expr::{circle_path, conical_order, evaluate_continued, BranchState, ContinuationOptions, LocalSeries, MeroExpr};

/// Slack used by every inequality verdict in this module.
pub const VERDICT_TOL: f64 = 1e-9;

/// Divisor `sum beta_j p_j + sum xi_k q_k` of a spherical cone metric.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivisorSpec {
    /// Points with real orders `beta_j > -1`.
    pub cone_points: Vec<(ExtComplex, f64)>,
    /// Points with positive integer orders `xi_k`.
    pub integer_points: Vec<(ExtComplex, u32)>,
}

impl DivisorSpec {
    pub fn new(cone_points: Vec<(ExtComplex, f64)>, integer_points: Vec<(ExtComplex, u32)>) -> Result<Self> {
        for (p, b) in &cone_points {
            if !(b.is_finite() && *b > -1.0) {
                return Err(Error::InvalidParams(format!("order {b} at {p} must exceed -1")));
            }
        }
        if let Some((p, _)) = integer_points.iter().find(|(_, x)| *x == 0) {
            return Err(Error::InvalidParams(format!("integer order at {p} must be positive")));
        }
        let pts: Vec<ExtComplex> = cone_points.iter().map(|(p, _)| *p).chain(integer_points.iter().map(|(p, _)| *p)).collect();
        for (i, p) in pts.iter().enumerate() {
            if pts[..i].contains(p) {
                return Err(Error::InvalidParams(format!("point {p} listed twice")));
            }
        }
        Ok(Self { cone_points, integer_points })
    }

    pub fn s(&self) -> usize {
        self.cone_points.len()
    }

    pub fn xi_sum(&self) -> u64 {
        self.integer_points.iter().map(|(_, x)| *x as u64).sum()
    }

    pub fn beta_sum(&self) -> f64 {
        self.cone_points.iter().map(|(_, b)| b).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigLemmaCheck {
    /// `cos^2 t1 + cos^2 t2 + cos^2 t3 + 2 cos t1 cos t2 cos t3 - 1`.
    pub e: f64,
    pub applicable: bool,
    /// `t1 + t2 + t3 >= pi`.
    pub ineq1: bool,
    /// `t2 - t1 <= pi - t3`.
    pub ineq2: bool,
    pub margin1: f64,
    pub margin2: f64,
}

impl TrigLemmaCheck {
    pub fn holds(&self) -> bool {
        !self.applicable || (self.ineq1 && self.ineq2)
    }

    pub fn margin(&self) -> f64 {
        self.margin1.min(self.margin2)
    }
}

/// For angles in `[0, pi]` with `E <= 0`: `t1 + t2 + t3 >= pi` and `t2 - t1 <= pi - t3`.
pub fn check_trig_lemma(t1: f64, t2: f64, t3: f64) -> TrigLemmaCheck {
    let (c1, c2, c3) = (t1.cos(), t2.cos(), t3.cos());
    let e = c1 * c1 + c2 * c2 + c3 * c3 + 2.0 * c1 * c2 * c3 - 1.0;
    let margin1 = t1 + t2 + t3 - PI;
    let margin2 = (PI - t3) - (t2 - t1);
    TrigLemmaCheck { e, applicable: e <= 0.0, ineq1: margin1 >= -VERDICT_TOL, ineq2: margin2 >= -VERDICT_TOL, margin1, margin2 }
}

/// `theta(a1) + theta(a2) + theta(a3) - theta(a1 a2 a3)`.
pub fn product_lemma_margin(a1: &SU2Element, a2: &SU2Element, a3: &SU2Element) -> f64 {
    let a0 = *a1 * *a2 * *a3;
    rotation_angle(a1) + rotation_angle(a2) + rotation_angle(a3) - rotation_angle(&a0)
}

pub fn check_product_lemma(a1: &SU2Element, a2: &SU2Element, a3: &SU2Element) -> bool {
    product_lemma_margin(a1, a2, a3) >= -VERDICT_TOL
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OddProductCheck {
    pub len: usize,
    pub angle_sum: f64,
    pub holds: bool,
    /// `angle_sum - 2 pi`.
    pub margin: f64,
}

fn product_of(list: &[SU2Element]) -> Mat2C {
    list.iter().fold(Mat2C::identity(), |acc, a| acc * *a.matrix())
}

/// An odd-length product equal to `id` has total rotation angle at least `2 pi`.
pub fn check_odd_product(list: &[SU2Element]) -> Result<OddProductCheck> {
    if list.len().is_multiple_of(2) {
        return Err(Error::Hypothesis(format!("length {} is even", list.len())));
    }
    let dev = (product_of(list) - Mat2C::identity()).frobenius_norm();
    if dev > VERDICT_TOL {
        return Err(Error::Hypothesis(format!("product differs from id by {dev:.3e}")));
    }
    let angle_sum: f64 = list.iter().map(rotation_angle).sum();
    let margin = angle_sum - 2.0 * PI;
    Ok(OddProductCheck { len: list.len(), angle_sum, holds: margin >= -VERDICT_TOL, margin })
}

/// Total rotation angle of a list whose product is `+-id`, any length.
pub fn angle_sum_of_closed_product(list: &[SU2Element]) -> Result<f64> {
    let p = product_of(list);
    let dev = (p - Mat2C::identity()).frobenius_norm().min((p + Mat2C::identity()).frobenius_norm());
    if dev > VERDICT_TOL {
        return Err(Error::Hypothesis(format!("product differs from +-id by {dev:.3e}")));
    }
    Ok(list.iter().map(rotation_angle).sum())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonodromyGenerator {
    pub point: ExtComplex,
    pub order: f64,
    /// Leading exponent of `g` in the local chart (`1/z` at infinity); 0 for integer points where `g` is unramified.
    pub tau: f64,
    pub integer_point: bool,
    /// `-diag(e^{i pi tau}, e^{-i pi tau})`, or `(-1)^xi id` at integer points.
    pub lift: SU2Element,
    pub rotation_angle: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftedMonodromy {
    pub generators: Vec<MonodromyGenerator>,
    /// Frobenius distance of the ordered product of all lifts from `id`.
    pub product_residual: f64,
    /// Largest mismatch between `e^{2 pi i tau}` and the ratio obtained by continuing `g` numerically around each cone point.
    pub continuation_residual: f64,
}

/// Local exponent class of `g` at `p`: the exponent `tau` with `g ~ t^tau * (unit)`.
fn local_tau(g: &MeroExpr, p: ExtComplex) -> Result<f64> {
    let s = LocalSeries::expand(g, p, 8)?;
    let (alpha, coeffs) = s.single_class().map_err(|_| {
        Error::NotPowerProduct(format!("monodromy of g at {p} is not diagonal; the metric is not reducible in this chart"))
    })?;
    if coeffs.is_empty() {
        return Err(Error::Degenerate(format!("g vanishes identically near {p}")));
    }
    Ok(alpha)
}

/// Ratio `g(end)/g(start)` after continuing `g` once around `p` (clockwise in `z` at infinity).
fn continued_ratio(g: &MeroExpr, p: ExtComplex, others: &[Complex64]) -> Result<Complex64> {
    let (center, radius, turns) = match p {
        ExtComplex::Finite(c) => {
            let d = others.iter().filter(|o| **o != c).map(|o| (o - c).norm()).fold(1.0f64, f64::min);
            (c, 0.3 * d, 1.0)
        }
        ExtComplex::Infinity => {
            let r = others.iter().map(|o| o.norm()).fold(1.0f64, f64::max);
            (Complex64::new(0.0, 0.0), 3.0 * r, -1.0)
        }
    };
    let start = center + Complex64::new(radius, 0.0);
    let st = BranchState::new(start);
    let v0 = g.eval_on(start, &st);
    let path = circle_path(center, radius, 0.0, turns, 256);
    let (v1, _) = evaluate_continued(g, &path, &st, &ContinuationOptions::default())?;
    Ok(v1 / v0)
}

/// Lifts the monodromy of a reducible metric with developing map `g` to SU(2).
///
/// Each cone point `p_j` gets `-diag(e^{i pi tau_j}, e^{-i pi tau_j})` where
/// `tau_j` is the local exponent of `g`; its eigenvalues are
/// `{-e^{+-i pi (beta_j + 1)}}`.  Integer points get `(-1)^xi id`.  The
/// ordered product over all points is reported, and is `id` when `g` is a
/// power product whose exponents sum to zero over the sphere.
pub fn lifted_monodromy(g: &MeroExpr, divisor: &DivisorSpec) -> Result<LiftedMonodromy> {
    let others: Vec<Complex64> = divisor
        .cone_points
        .iter()
        .map(|(p, _)| *p)
        .chain(divisor.integer_points.iter().map(|(p, _)| *p))
        .filter_map(|p| p.finite())
        .chain(g.centers())
        .collect();
    let mut generators = Vec::new();
    let mut continuation_residual = 0.0f64;
    for &(p, beta) in &divisor.cone_points {
        let tau = local_tau(g, p)?;
        let order = conical_order(g, p)?;
        if (order - beta).abs() > 1e-9 || (tau.abs() - 1.0 - beta).abs() > 1e-9 {
            return Err(Error::Hypothesis(format!("g has order {order} (exponent {tau}) at {p}, divisor says {beta}")));
        }
        let expected = Complex64::from_polar(1.0, 2.0 * PI * tau);
        let ratio = continued_ratio(g, p, &others)?;
        continuation_residual = continuation_residual.max((ratio - expected).norm());
        let lift = SU2Element::try_from(-*SU2Element::diagonal(PI * tau).matrix())?;
        generators.push(MonodromyGenerator {
            point: p,
            order: beta,
            tau,
            integer_point: false,
            rotation_angle: rotation_angle(&lift),
            lift,
        });
    }
    for &(p, xi) in &divisor.integer_points {
        let lift = if xi % 2 == 0 { SU2Element::identity() } else { SU2Element::minus_identity() };
        generators.push(MonodromyGenerator {
            point: p,
            order: xi as f64,
            tau: 0.0,
            integer_point: true,
            rotation_angle: rotation_angle(&lift),
            lift,
        });
    }
    let product = generators.iter().fold(Mat2C::identity(), |acc, gen| acc * *gen.lift.matrix());
    let product_residual = (product - Mat2C::identity()).frobenius_norm();
    Ok(LiftedMonodromy { generators, product_residual, continuation_residual })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorollaryVerdict {
    /// `s + sum xi` is odd.
    pub applicable: bool,
    pub s: usize,
    pub xi_sum: u64,
    pub beta_sum: f64,
    /// `1 - s`.
    pub bound: f64,
    pub holds: Option<bool>,
    pub margin: f64,
}

/// `sum beta_j >= 1 - s` whenever `s + sum xi_k` is odd.
pub fn check_corollary_bound(divisor: &DivisorSpec) -> CorollaryVerdict {
    let s = divisor.s();
    let xi_sum = divisor.xi_sum();
    let beta_sum = divisor.beta_sum();
    let bound = 1.0 - s as f64;
    let applicable = (s as u64 + xi_sum) % 2 == 1;
    let margin = beta_sum - bound;
    CorollaryVerdict { applicable, s, xi_sum, beta_sum, bound, holds: applicable.then_some(margin >= -VERDICT_TOL), margin }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FuzzKind {
    Trig,
    Product,
    OddProduct,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub angles: Vec<f64>,
    pub matrices: Vec<Mat2C>,
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub kind: FuzzKind,
    pub seed: u64,
    pub trials: u64,
    /// Candidates drawn but discarded because the hypothesis failed (trig lemma only).
    pub rejected: u64,
    pub violations: u64,
    pub worst_margin: f64,
    pub counterexample: Option<Counterexample>,
}

const CHUNK: u64 = 4096;

struct ChunkResult {
    rejected: u64,
    violations: u64,
    worst: f64,
    first: Option<Counterexample>,
}

impl ChunkResult {
    fn new() -> Self {
        Self { rejected: 0, violations: 0, worst: f64::INFINITY, first: None }
    }

    fn record(&mut self, margin: f64, ok: bool, ce: impl FnOnce() -> Counterexample) {
        self.worst = self.worst.min(margin);
        if !ok {
            self.violations += 1;
            if self.first.is_none() {
                self.first = Some(ce());
            }
        }
    }
}

fn run_chunk(kind: FuzzKind, seed: u64, chunk: u64, start: u64, len: u64, m_max: usize) -> ChunkResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    let mut out = ChunkResult::new();
    for i in start..start + len {
        match kind {
            FuzzKind::Trig => loop {
                let t: [f64; 3] = [rng.random_range(0.0..=PI), rng.random_range(0.0..=PI), rng.random_range(0.0..=PI)];
                let c = check_trig_lemma(t[0], t[1], t[2]);
                if !c.applicable {
                    out.rejected += 1;
                    continue;
                }
                out.record(c.margin(), c.holds(), || Counterexample { angles: t.to_vec(), matrices: vec![], margin: c.margin() });
                break;
            },
            FuzzKind::Product => {
                let a: [SU2Element; 3] = std::array::from_fn(|_| SU2Element::random(&mut rng));
                let margin = product_lemma_margin(&a[0], &a[1], &a[2]);
                out.record(margin, margin >= -VERDICT_TOL, || Counterexample {
                    angles: a.iter().map(rotation_angle).collect(),
                    matrices: a.iter().map(|x| *x.matrix()).collect(),
                    margin,
                });
            }
            FuzzKind::OddProduct => {
                let m = 1 + (i as usize % m_max.max(1));
                let mut list: Vec<SU2Element> = (0..2 * m).map(|_| SU2Element::random(&mut rng)).collect();
                let p = list.iter().fold(SU2Element::identity(), |acc, a| acc * *a);
                list.push(p.inverse());
                let (margin, ok) = match check_odd_product(&list) {
                    Ok(c) => (c.margin, c.holds),
                    Err(_) => (f64::NEG_INFINITY, false),
                };
                out.record(margin, ok, || Counterexample {
                    angles: list.iter().map(rotation_angle).collect(),
                    matrices: list.iter().map(|x| *x.matrix()).collect(),
                    margin,
                });
            }
        }
    }
    out
}

/// Seeded parallel fuzzing of one inequality.
///
/// Trials are split into fixed chunks, each with its own ChaCha stream
/// derived from `(seed, chunk index)`, and the chunk results are reduced in
/// chunk order, so the report does not depend on the thread count.
/// `m_max` bounds the half-length of odd products.
pub fn fuzz(kind: FuzzKind, count: u64, seed: u64, m_max: usize) -> FuzzReport {
    let chunks = count.div_ceil(CHUNK);
    let results: Vec<ChunkResult> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            run_chunk(kind, seed, c, start, CHUNK.min(count - start), m_max)
        })
        .collect();
    let mut rep =
        FuzzReport { kind, seed, trials: count, rejected: 0, violations: 0, worst_margin: f64::INFINITY, counterexample: None };
    for r in results {
        rep.rejected += r.rejected;
        rep.violations += r.violations;
        rep.worst_margin = rep.worst_margin.min(r.worst);
        if rep.counterexample.is_none() {
            rep.counterexample = r.first;
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ZERO;
    use crate::families::make_prop_a2_map;
    use approx::assert_abs_diff_eq;

    #[test]
    fn trig_lemma_examples() {
        let h = PI / 2.0;
        let c = check_trig_lemma(h, h, h);
        assert_abs_diff_eq!(c.e, -1.0, epsilon = 1e-15);
        assert!(c.applicable && c.ineq1 && c.ineq2);
        let t = PI / 3.0;
        let c = check_trig_lemma(t, t, t);
        assert_abs_diff_eq!(c.e, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.margin1, 0.0, epsilon = 1e-15);
        let c = check_trig_lemma(PI, 0.0, 0.0);
        assert_abs_diff_eq!(c.e, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.margin1, 0.0, epsilon = 1e-15);
        assert!(c.holds());
    }

    #[test]
    fn product_lemma_examples() {
        let m = SU2Element::minus_identity();
        assert!(check_product_lemma(&m, &m, &m));
        assert_abs_diff_eq!(product_lemma_margin(&m, &m, &m), 0.0, epsilon = 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let (b, c) = (SU2Element::random(&mut rng), SU2Element::random(&mut rng));
            assert!(product_lemma_margin(&SU2Element::identity(), &b, &c) >= -1e-12);
        }
    }

    #[test]
    fn odd_and_even_products() {
        let (m, id) = (SU2Element::minus_identity(), SU2Element::identity());
        let c = check_odd_product(&[m, m, id]).unwrap();
        assert_abs_diff_eq!(c.angle_sum, 2.0 * PI, epsilon = 1e-15);
        assert!(c.holds);
        assert_eq!(angle_sum_of_closed_product(&[m; 6]).unwrap(), 0.0);
        assert!(check_odd_product(&[m, m]).is_err());
        assert!(check_odd_product(&[m, m, m]).is_err());
    }

    #[test]
    fn even_products_approach_zero_angle() {
        // -exp(eps X) and its inverse: the sum shrinks with eps
        let mut prev = f64::INFINITY;
        for k in 1..6 {
            let eps = 10f64.powi(-k);
            let a = SU2Element::try_from(-*SU2Element::from_quaternion(eps.cos(), eps.sin(), 0.0, 0.0).matrix()).unwrap();
            let s = angle_sum_of_closed_product(&[a, a.inverse()]).unwrap();
            assert!(s < prev && s <= 4.0 * eps + 1e-12);
            prev = s;
        }
    }

    #[test]
    fn sqrt_lift_has_rotation_pi() {
        let g = MeroExpr::z_pow(0.5);
        let div = DivisorSpec::new(vec![(ExtComplex::Finite(ZERO), -0.5), (ExtComplex::Infinity, -0.5)], vec![]).unwrap();
        let lm = lifted_monodromy(&g, &div).unwrap();
        let t0 = &lm.generators[0];
        assert_abs_diff_eq!(t0.rotation_angle, PI, epsilon = 1e-12);
        // eigenvalues -e^{+-i pi/2}
        let m = t0.lift.matrix();
        assert_abs_diff_eq!((m.a11 - Complex64::new(0.0, -1.0)).norm(), 0.0, epsilon = 1e-15);
        assert!(lm.product_residual < 1e-12);
        assert!(lm.continuation_residual < 1e-10);
    }

    #[test]
    fn integer_points_lift_to_signs() {
        let g = MeroExpr::z_pow(0.5);
        let div = DivisorSpec::new(
            vec![(ExtComplex::Finite(ZERO), -0.5), (ExtComplex::Infinity, -0.5)],
            vec![(ExtComplex::Finite(Complex64::new(3.0, 0.0)), 2), (ExtComplex::Finite(Complex64::new(5.0, 0.0)), 1)],
        )
        .unwrap();
        let lm = lifted_monodromy(&g, &div).unwrap();
        assert_eq!(*lm.generators[2].lift.matrix(), Mat2C::identity());
        assert_eq!(*lm.generators[3].lift.matrix(), -Mat2C::identity());
    }

    #[test]
    fn three_point_metric_product_is_identity() {
        for mu in [-0.6, -0.35, 0.4, 1.7, -2.3] {
            let (g, div) = make_prop_a2_map(Complex64::new(0.8, 0.3), mu).unwrap();
            let lm = lifted_monodromy(&g, &div).unwrap();
            assert!(lm.product_residual < 1e-10, "mu={mu}: {}", lm.product_residual);
            assert!(lm.continuation_residual < 1e-9, "mu={mu}: {}", lm.continuation_residual);
            for gen in &lm.generators {
                if !gen.integer_point {
                    // phases pi (beta + 1) mod 2 pi up to conjugation
                    let ph = gen.lift.matrix().a11.arg().rem_euclid(2.0 * PI);
                    let want = (PI * (gen.order + 1.0) + PI).rem_euclid(2.0 * PI);
                    let alt = (-PI * (gen.order + 1.0) + PI).rem_euclid(2.0 * PI);
                    let d = |a: f64, b: f64| ((a - b + PI).rem_euclid(2.0 * PI) - PI).abs();
                    assert!(d(ph, want).min(d(ph, alt)) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn mismatched_divisor_is_rejected() {
        let g = MeroExpr::z_pow(0.5);
        let div = DivisorSpec::new(vec![(ExtComplex::Finite(ZERO), -0.3)], vec![]).unwrap();
        assert!(lifted_monodromy(&g, &div).is_err());
    }

    #[test]
    fn non_diagonal_monodromy_is_rejected() {
        let g = MeroExpr::z_pow(0.5) + MeroExpr::z_pow(0.25);
        let div = DivisorSpec::new(vec![(ExtComplex::Finite(ZERO), -0.75)], vec![]).unwrap();
        assert!(lifted_monodromy(&g, &div).is_err());
    }

    #[test]
    fn divisor_validation() {
        assert!(DivisorSpec::new(vec![(ExtComplex::Infinity, -1.0)], vec![]).is_err());
        assert!(DivisorSpec::new(vec![(ExtComplex::Infinity, 0.5)], vec![(ExtComplex::Infinity, 1)]).is_err());
        assert!(DivisorSpec::new(vec![], vec![(ExtComplex::Infinity, 0)]).is_err());
    }

    #[test]
    fn corollary_examples() {
        let pts = |b: &[f64]| -> Vec<(ExtComplex, f64)> {
            b.iter().enumerate().map(|(i, b)| (ExtComplex::Finite(Complex64::new(i as f64, 0.0)), *b)).collect()
        };
        let q = |xi: &[u32]| -> Vec<(ExtComplex, u32)> {
            xi.iter().enumerate().map(|(i, x)| (ExtComplex::Finite(Complex64::new(0.0, 1.0 + i as f64)), *x)).collect()
        };
        let v = check_corollary_bound(&DivisorSpec::new(pts(&[-0.6, -0.7, -0.7]), q(&[1, 1])).unwrap());
        assert!(v.applicable && v.holds == Some(true));
        assert_abs_diff_eq!(v.margin, 0.0, epsilon = 1e-12);
        let v = check_corollary_bound(&DivisorSpec::new(pts(&[0.3]), vec![]).unwrap());
        assert_eq!(v.bound, 0.0);
        assert_eq!(v.holds, Some(true));
        let v = check_corollary_bound(&DivisorSpec::new(pts(&[-0.3]), vec![]).unwrap());
        assert_eq!(v.holds, Some(false));
        let v = check_corollary_bound(&DivisorSpec::new(pts(&[-0.8; 5]), q(&[2])).unwrap());
        assert_abs_diff_eq!(v.margin, 0.0, epsilon = 1e-12);
        let v = check_corollary_bound(&DivisorSpec::new(pts(&[-0.5, -0.5]), vec![]).unwrap());
        assert!(!v.applicable && v.holds.is_none());
    }

    #[test]
    fn fuzz_is_deterministic_and_clean() {
        for kind in [FuzzKind::Trig, FuzzKind::Product, FuzzKind::OddProduct] {
            let a = fuzz(kind, 5000, 42, 3);
            let b = fuzz(kind, 5000, 42, 3);
            assert_eq!(a, b);
            assert_eq!(a.violations, 0, "{kind:?}: {:?}", a.counterexample);
            assert!(a.worst_margin >= -VERDICT_TOL);
        }
        assert_ne!(fuzz(FuzzKind::Product, 100, 1, 3).worst_margin, fuzz(FuzzKind::Product, 100, 2, 3).worst_margin);
    }
}
