//! Genus-zero surfaces with three ends: the `TA = 4 pi` contradiction and the odd-ends bound.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{end_coefficient, near_integer};
use crate::error::{Error, Result};

/// Tolerance on `mu_1 + mu_2 + mu_3 = -2`.
const SUM_TOL: f64 = 1e-9;
/// Largest `r` (number of double poles of `dg`) examined by the form filter.
const MAX_R: u32 = 4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThreenoidReport {
    /// Orders after relabelling so that `mu_1, mu_2 < -1/2`.
    pub mu: [f64; 3],
    pub mu_sharp: [u32; 3],
    /// Position in the input of each relabelled end.
    pub permutation: [usize; 3],
    /// Leading coefficients: `Q ~ (c_j / 2) z^{-2} dz^2` at each end.
    pub c: [f64; 3],
    /// `q_1 q_2 = c_1 / c_3` from the Hopf differential.
    pub q1q2: f64,
    /// `q_1 + q_2 = c_1/c_3 + 1 - c_2/c_3` from the Hopf differential.
    pub q1_plus_q2: f64,
    /// `a_0 / a_1 = (c_1/c_3)(1 + mu_3)/(1 + mu_1)`, from matching `q_1 q_2`.
    pub a0_over_a1: f64,
    /// `q_1 + q_2 = -(mu_3 a_0/a_1 + mu_1)/(1 + mu_3)` read off `dg`.
    pub q1_plus_q2_from_g: f64,
    /// `-(1 + mu_2)/(1 + mu_3) (a_0/a_1 + 1)`.
    pub implied_c2_over_c3: f64,
    pub contradiction: bool,
    /// The quantity whose sign is inconsistent.
    pub failed_sign: Option<String>,
}

/// Relabels so that the two entries below `-1/2` come first, keeping the input order otherwise.
fn arrange(mu: [f64; 3]) -> Result<[usize; 3]> {
    let big: Vec<usize> = (0..3).filter(|&j| mu[j] >= -0.5).collect();
    match big.as_slice() {
        [] => Ok([0, 1, 2]),
        [k] => {
            let mut p = [0, 1, 2];
            p.swap(*k, 2);
            Ok(p)
        }
        _ => Err(Error::Hypothesis(format!("at most one order can be >= -1/2 when the sum is -2: {mu:?}"))),
    }
}

fn check_hypotheses(mu: [f64; 3]) -> Result<()> {
    if let Some(m) = mu.iter().find(|m| near_integer(**m)) {
        return Err(Error::Hypothesis(format!("integer branch order {m}: the reduced case needs all orders non-integral")));
    }
    if let Some(m) = mu.iter().find(|m| !(**m > -1.0 && **m < 0.0)) {
        return Err(Error::Hypothesis(format!("order {m} outside (-1, 0)")));
    }
    let s: f64 = mu.iter().sum();
    if (s + 2.0).abs() > SUM_TOL {
        return Err(Error::Hypothesis(format!("orders sum to {s}, TA = 4 pi needs -2")));
    }
    Ok(())
}

/// Runs the final step of the `TA = 4 pi` argument for three regular ends.
///
/// With `g = z^{-mu_1-1}(z-1)^{-mu_2-1}(a_1 z + a_0)`, the two zeros of `dg`
/// are also the roots of `c_3 z^2 + (c_2 - c_1 - c_3) z + c_1`.  Matching
/// the product of the roots gives `a_0/a_1 > 0`; matching the sum then forces
/// `c_2/c_3 < 0`, while every `c_j` is positive.
pub fn threenoid_contradiction(mu: [f64; 3], mu_sharp: [u32; 3]) -> Result<ThreenoidReport> {
    check_hypotheses(mu)?;
    let p = arrange(mu)?;
    let m = [mu[p[0]], mu[p[1]], mu[p[2]]];
    let s = [mu_sharp[p[0]], mu_sharp[p[1]], mu_sharp[p[2]]];
    let c = [end_coefficient(m[0], s[0]), end_coefficient(m[1], s[1]), end_coefficient(m[2], s[2])];
    if let Some(cj) = c.iter().find(|cj| **cj <= 0.0) {
        return Err(Error::Hypothesis(format!("leading coefficient {cj} is not positive")));
    }
    let q1q2 = c[0] / c[2];
    let q1_plus_q2 = c[0] / c[2] + 1.0 - c[1] / c[2];
    let r = q1q2 * (1.0 + m[2]) / (1.0 + m[0]);
    let q1_plus_q2_from_g = -(m[2] * r + m[0]) / (1.0 + m[2]);
    let implied = -(1.0 + m[1]) / (1.0 + m[2]) * (r + 1.0);
    let contradiction = r > 0.0 && implied < 0.0 && c[1] > 0.0;
    Ok(ThreenoidReport {
        mu: m,
        mu_sharp: s,
        permutation: p,
        c,
        q1q2,
        q1_plus_q2,
        a0_over_a1: r,
        q1_plus_q2_from_g,
        implied_c2_over_c3: implied,
        contradiction,
        failed_sign: contradiction.then(|| "c2/c3".to_string()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DgCandidate {
    /// 1: `(z-q1)(z-q2)` in the numerator; 2: `(z-q1)/(z-q2)^3`; 3: `1/((z-q1)^3 (z-q2)^3)`; 4: `1/(z-q)^4`.
    pub form: u8,
    /// Number of extra double poles.
    pub r: u32,
    /// Exponent of `dg` at infinity in the chart `1/z`.
    pub order_at_infinity: f64,
    pub survives: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DgFormReport {
    pub candidates: Vec<DgCandidate>,
    pub survivors: Vec<(u8, u32)>,
    pub surviving_order: Option<f64>,
}

/// Screens the candidate shapes of `dg = C z^{-mu_1-2}(z-1)^{-mu_2-2} P/R dz`
/// by the only exponents allowed at infinity, `mu_3` and `-mu_3 - 2`.
pub fn dg_form_filter(mu: [f64; 3]) -> DgFormReport {
    // (numerator degree, denominator degree before the 2r extra poles)
    let shapes: [(u8, i32, i32); 4] = [(1, 2, 0), (2, 1, 3), (3, 0, 6), (4, 0, 4)];
    let allowed = [mu[2], -mu[2] - 2.0];
    let mut candidates = Vec::new();
    for (form, num, den) in shapes {
        for r in 0..=MAX_R {
            let deg = -mu[0] - 2.0 - mu[1] - 2.0 + num as f64 - (den + 2 * r as i32) as f64;
            // dz = -dt / t^2
            let order = -deg - 2.0;
            let survives = allowed.iter().any(|a| (order - a).abs() <= SUM_TOL);
            candidates.push(DgCandidate { form, r, order_at_infinity: order, survives });
        }
    }
    let survivors: Vec<(u8, u32)> = candidates.iter().filter(|c| c.survives).map(|c| (c.form, c.r)).collect();
    let surviving_order = match survivors.as_slice() {
        [(f, r)] => candidates.iter().find(|c| c.form == *f && c.r == *r).map(|c| c.order_at_infinity),
        _ => None,
    };
    DgFormReport { candidates, survivors, surviving_order }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub cases: u64,
    pub contradictions: u64,
    /// Cases where the form filter left exactly form 1 with `r = 0`.
    pub filter_ok: u64,
    /// Smallest `a_0/a_1` seen (must stay positive).
    pub min_a0_over_a1: f64,
    /// Largest implied `c_2/c_3` seen (must stay negative).
    pub max_implied_c2_over_c3: f64,
    pub first_failure: Option<ThreenoidReport>,
}

/// Samples admissible orders (`-1 < mu_j < 0`, sum `-2`, two below `-1/2`)
/// and cycles `mu#` through `{0, 1, 2}^3`.
pub fn threenoid_sweep(count: u64, seed: u64) -> SweepReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = SweepReport {
        cases: 0,
        contradictions: 0,
        filter_ok: 0,
        min_a0_over_a1: f64::INFINITY,
        max_implied_c2_over_c3: f64::NEG_INFINITY,
        first_failure: None,
    };
    let mut i = 0u64;
    while rep.cases < count {
        let a: f64 = rng.random_range(-1.0..-0.5);
        let b: f64 = rng.random_range(-1.0..-0.5);
        let c = -2.0 - a - b;
        if !(c > -1.0 && c < 0.0) || [a, b, c].iter().any(|m| near_integer(*m) || *m <= -1.0 + 1e-12) {
            continue;
        }
        let k = (i % 27) as u32;
        i += 1;
        let sharp = [k % 3, (k / 3) % 3, k / 9];
        rep.cases += 1;
        let Ok(r) = threenoid_contradiction([a, b, c], sharp) else {
            continue;
        };
        let f = dg_form_filter(r.mu);
        if f.survivors == [(1, 0)] {
            rep.filter_ok += 1;
        }
        rep.min_a0_over_a1 = rep.min_a0_over_a1.min(r.a0_over_a1);
        rep.max_implied_c2_over_c3 = rep.max_implied_c2_over_c3.max(r.implied_c2_over_c3);
        if r.contradiction {
            rep.contradictions += 1;
        } else if rep.first_failure.is_none() {
            rep.first_failure = Some(r);
        }
    }
    rep
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OddEndsBound {
    pub n: u32,
    /// Lower bound on TA.
    pub bound: f64,
    /// True when TA must exceed the bound strictly.
    pub strict: bool,
}

/// Lower bound on TA for genus zero with `n` ends: `4 pi l` for `n = 2l + 1`,
/// and the strict `2 pi (n - 2)` for even `n`.
pub fn odd_ends_bound(n: u32) -> Result<OddEndsBound> {
    if n < 1 {
        return Err(Error::InvalidParams("at least one end is required".into()));
    }
    Ok(if n % 2 == 1 {
        OddEndsBound { n, bound: 4.0 * PI * ((n - 1) / 2) as f64, strict: false }
    } else {
        OddEndsBound { n, bound: 2.0 * PI * (n as f64 - 2.0), strict: true }
    })
}
