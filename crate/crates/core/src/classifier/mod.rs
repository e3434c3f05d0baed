//! End-data bookkeeping and the low total curvature classification.

mod enumerate;
mod threenoid;

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frobenius;

pub use enumerate::{enumerate_low_ta, minimal_surface_table, render_table, Branch, Classification, TableRow};
pub use threenoid::{
    dg_form_filter, odd_ends_bound, threenoid_contradiction, threenoid_sweep, DgCandidate, DgFormReport, OddEndsBound,
    SweepReport, ThreenoidReport,
};

/// Integer tolerance for branch orders.
const INT_TOL: f64 = 1e-9;
/// Slack on total-curvature comparisons, in units of `2 pi`.
const TA_TOL: f64 = 1e-9;

pub(crate) fn near_integer(x: f64) -> bool {
    (x - x.round()).abs() <= INT_TOL
}

/// Branch order of the hyperbolic Gauss map `G` at an end.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MuSharp {
    Finite(u32),
    /// Irregular end.
    Infinite,
    /// Not determined by the data at hand.
    Unknown,
}

impl fmt::Display for MuSharp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MuSharp::Finite(k) => write!(f, "{k}"),
            MuSharp::Infinite => write!(f, "inf"),
            MuSharp::Unknown => write!(f, "?"),
        }
    }
}

/// `mu# = -1 + sqrt(1 + 2c + mu(mu + 2))`, inverting `c = -mu(mu+2)/2 + mu#(mu#+2)/2`.
pub fn mu_sharp_from_coefficient(mu: f64, c: f64) -> Result<f64> {
    let disc = 1.0 + 2.0 * c + mu * (mu + 2.0);
    if disc < 0.0 {
        return Err(Error::InvalidParams(format!("no real mu# for mu = {mu}, c = {c}")));
    }
    Ok(disc.sqrt() - 1.0)
}

/// `c = -mu(mu + 2)/2 + mu#(mu# + 2)/2`, where `Q ~ (c/2) z^{-2} dz^2` at a regular end.
pub fn end_coefficient(mu: f64, mu_sharp: u32) -> f64 {
    let s = mu_sharp as f64;
    -0.5 * mu * (mu + 2.0) + 0.5 * s * (s + 2.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EndData {
    /// Order of the Hopf differential at the end.
    pub d: i32,
    /// Branch order of `g`.
    pub mu: f64,
    pub mu_sharp: MuSharp,
}

impl EndData {
    /// Fills `mu#` from what `d` and `mu` force: infinite at irregular ends,
    /// equal to `mu` when `d >= -1`, unknown otherwise.
    pub fn new(d: i32, mu: f64) -> Self {
        let mu_sharp = if d <= -3 {
            MuSharp::Infinite
        } else if d >= -1 && near_integer(mu) && mu > -0.5 {
            MuSharp::Finite(mu.round() as u32)
        } else {
            MuSharp::Unknown
        };
        Self { d, mu, mu_sharp }
    }

    /// Solves `mu#` from the leading coefficient `q_{-2}` of `Q = (q_{-2} z^{-2} + ...) dz^2`.
    pub fn from_hopf_leading(d: i32, mu: f64, q_minus2: f64) -> Result<Self> {
        if d < -2 {
            return Err(Error::InvalidParams(format!("irregular end (d = {d}) has no finite mu#")));
        }
        let s = mu_sharp_from_coefficient(mu, 2.0 * q_minus2)?;
        if !near_integer(s) || s < -0.5 {
            return Err(Error::Hypothesis(format!("mu# = {s} is not a nonnegative integer")));
        }
        Ok(Self { d, mu, mu_sharp: MuSharp::Finite(s.round() as u32) })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceTypeSpec {
    pub genus: u32,
    pub ends: Vec<EndData>,
    /// Orders of the umbilic points.
    pub umbilics: Vec<u32>,
    /// `g` constant, `Q = 0`; end invariants are not applicable.
    pub flat: bool,
}

impl SurfaceTypeSpec {
    pub fn new(genus: u32, ends: Vec<EndData>, umbilics: Vec<u32>) -> Self {
        Self { genus, ends, umbilics, flat: false }
    }

    pub fn n(&self) -> usize {
        self.ends.len()
    }

    /// `Gamma(d_1, ..., d_n)` label, `O` for genus zero.
    pub fn type_label(&self) -> String {
        let ds: Vec<String> = self.ends.iter().map(|e| e.d.to_string()).collect();
        let head = if self.genus == 0 { "O".to_string() } else { format!("M{}", self.genus) };
        format!("{head}({})", ds.join(","))
    }

    /// `TA / 2 pi = 2 gamma - 2 + sum (mu_j - d_j)`, unchecked.
    fn ta_over_2pi(&self) -> f64 {
        if self.flat {
            return 0.0;
        }
        2.0 * self.genus as f64 - 2.0 + self.ends.iter().map(|e| e.mu - e.d as f64).sum::<f64>()
    }
}

/// Total absolute curvature from the end data: `2 pi (2 gamma - 2 + sum (mu_j - d_j))`.
///
/// Data violating the basic end invariants is rejected rather than evaluated.
pub fn gauss_bonnet_ta(spec: &SurfaceTypeSpec) -> Result<f64> {
    if spec.flat {
        return Ok(0.0);
    }
    let basic: Vec<Violation> = check_facts(spec)
        .into_iter()
        .filter(|v| matches!(v.rule, Rule::SumOfOrders | Rule::BranchOrderLowerBound | Rule::EndOrderGap))
        .collect();
    if let Some(v) = basic.first() {
        return Err(Error::Hypothesis(format!("{}: {}", v.citation, v.detail)));
    }
    Ok(2.0 * PI * spec.ta_over_2pi())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    SumOfOrders,
    BranchOrderLowerBound,
    EndOrderGap,
    RegularEndIntegrality,
    SimplePoleIntegrality,
    ThreeBranchPoints,
    Teardrop,
    CohnVossen,
    OddEndsBound,
    FluxObstruction,
    DualTypeExclusion,
    LogTerm,
    Threenoid,
}

impl Rule {
    pub fn citation(self) -> &'static str {
        match self {
            Rule::SumOfOrders => "orders of Q: sum d_j + sum xi_k = 4 gamma - 4",
            Rule::BranchOrderLowerBound => "developing map at an end: mu_j > -1",
            Rule::EndOrderGap => "completeness at an end: mu_j - d_j > 1, and >= 2 when mu_j is an integer",
            Rule::RegularEndIntegrality => {
                "G is meromorphic exactly at regular ends (d_j >= -2): mu#_j finite there, infinite otherwise"
            }
            Rule::SimplePoleIntegrality => "at an end with d_j >= -1: mu_j = mu#_j is an integer",
            Rule::ThreeBranchPoints => {
                "Riemann-Hurwitz: a meromorphic function on a surface of genus >= 1 has at least three branch points"
            }
            Rule::Teardrop => "no spherical cone metric on the sphere has exactly one non-integer order (no teardrop)",
            Rule::CohnVossen => "Cohn-Vossen inequality is strict: TA > 2 pi (n - 2 + 2 gamma)",
            Rule::OddEndsBound => "genus zero with n = 2l + 1 ends: TA >= 4 pi l (rotation angles of the lifted monodromy)",
            Rule::FluxObstruction => "external result: the single end of a genus-one surface with d = -2 has non-vanishing flux",
            Rule::DualTypeExclusion => {
                "external result: the dual surface would be of type O(-1,-3) with dual total curvature 4 pi, which does not occur"
            }
            Rule::LogTerm => "regular singular point of the lift ODE: log-term coefficient must vanish for the metric to close",
            Rule::Threenoid => "genus zero with three ends: TA > 4 pi (reducible developing map forces a sign contradiction)",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: Rule,
    pub citation: String,
    pub detail: String,
}

impl Violation {
    fn new(rule: Rule, detail: String) -> Self {
        Self { rule, citation: rule.citation().to_string(), detail }
    }
}

/// Every violated constraint on `spec`, in a fixed rule order.
pub fn check_facts(spec: &SurfaceTypeSpec) -> Vec<Violation> {
    let mut out = Vec::new();
    if spec.flat {
        return out;
    }
    let gamma = spec.genus as i64;
    let n = spec.n();

    let dsum: i64 = spec.ends.iter().map(|e| e.d as i64).sum::<i64>() + spec.umbilics.iter().map(|x| *x as i64).sum::<i64>();
    if dsum != 4 * gamma - 4 {
        out.push(Violation::new(Rule::SumOfOrders, format!("sum = {dsum}, expected {}", 4 * gamma - 4)));
    }
    for (j, e) in spec.ends.iter().enumerate() {
        if !(e.mu > -1.0) {
            out.push(Violation::new(Rule::BranchOrderLowerBound, format!("end {j}: mu = {}", e.mu)));
        }
    }
    for (j, e) in spec.ends.iter().enumerate() {
        let gap = e.mu - e.d as f64;
        let need = if near_integer(e.mu) { 2.0 } else { 1.0 };
        let bad = if near_integer(e.mu) { gap < need - INT_TOL } else { gap <= need };
        if bad {
            out.push(Violation::new(Rule::EndOrderGap, format!("end {j}: mu - d = {gap}")));
        }
    }
    for (j, e) in spec.ends.iter().enumerate() {
        let bad = matches!((e.d >= -2, e.mu_sharp), (true, MuSharp::Infinite) | (false, MuSharp::Finite(_)));
        if bad {
            out.push(Violation::new(Rule::RegularEndIntegrality, format!("end {j}: d = {}, mu# = {}", e.d, e.mu_sharp)));
        }
    }
    for (j, e) in spec.ends.iter().enumerate() {
        if e.d >= -1 {
            let sharp_ok = match e.mu_sharp {
                MuSharp::Finite(k) => (k as f64 - e.mu).abs() <= INT_TOL,
                MuSharp::Infinite => false,
                MuSharp::Unknown => true,
            };
            if !near_integer(e.mu) || !sharp_ok {
                out.push(Violation::new(
                    Rule::SimplePoleIntegrality,
                    format!("end {j}: d = {}, mu = {}, mu# = {}", e.d, e.mu, e.mu_sharp),
                ));
            }
        }
    }
    if gamma >= 1 && n + spec.umbilics.len() < 3 {
        out.push(Violation::new(
            Rule::ThreeBranchPoints,
            format!("only {} ends and {} umbilics can carry branch points of G", n, spec.umbilics.len()),
        ));
    }
    if gamma == 0 {
        let non_int = spec.ends.iter().filter(|e| !near_integer(e.mu)).count();
        if non_int == 1 {
            out.push(Violation::new(Rule::Teardrop, "exactly one end has a non-integer branch order".into()));
        }
    }

    let t = spec.ta_over_2pi();
    let cv = n as f64 - 2.0 + 2.0 * gamma as f64;
    if t <= cv + TA_TOL {
        out.push(Violation::new(Rule::CohnVossen, format!("TA/2pi = {t}, needs > {cv}")));
    }
    if gamma == 0 && n % 2 == 1 && n >= 3 {
        let l = (n - 1) / 2;
        if t < 2.0 * l as f64 - TA_TOL {
            out.push(Violation::new(Rule::OddEndsBound, format!("TA/4pi = {}, needs >= {l}", t / 2.0)));
        }
    }
    if gamma == 1 && n == 1 && spec.ends[0].d == -2 {
        out.push(Violation::new(Rule::FluxObstruction, "type M1(-2)".into()));
    }
    if gamma == 0 && n == 2 {
        let (d1, d2) = (spec.ends[0].d.max(spec.ends[1].d), spec.ends[0].d.min(spec.ends[1].d));
        let all_int = spec.ends.iter().all(|e| near_integer(e.mu));
        if d1 + d2 == -4 && d1 >= -1 && d2 <= -3 && all_int {
            out.push(Violation::new(Rule::DualTypeExclusion, format!("type O({d1},{d2})")));
        }
        if let Some(detail) = o23_log_term_detail(spec) {
            out.push(Violation::new(Rule::LogTerm, detail));
        }
    }
    if gamma == 0 && n == 3 && t <= 2.0 + TA_TOL {
        let detail = threenoid_detail(spec);
        out.push(Violation::new(Rule::Threenoid, detail));
    }
    out
}

/// Type `O(-2,-3)` with one simple umbilic: the developing map is forced to
/// the three-point form, and the log-term never vanishes at the `d = -2` end.
fn o23_log_term_detail(spec: &SurfaceTypeSpec) -> Option<String> {
    let (e2, e3) = match (spec.ends[0].d, spec.ends[1].d) {
        (-2, -3) => (spec.ends[0], spec.ends[1]),
        (-3, -2) => (spec.ends[1], spec.ends[0]),
        _ => return None,
    };
    if spec.umbilics != [1] || near_integer(e2.mu) || near_integer(e3.mu) {
        return None;
    }
    // g = c z^mu (z - (mu+1)/mu) has orders |mu| - 1 at 0 and |mu + 1| - 1 at infinity
    let candidates = [e2.mu + 1.0, -(e2.mu + 1.0)];
    let Some(&mu) = candidates.iter().find(|m| ((*m + 1.0).abs() - 1.0 - e3.mu).abs() <= INT_TOL) else {
        return Some(format!("no developing map g = c z^mu (z - (mu+1)/mu) has orders ({}, {})", e2.mu, e3.mu));
    };
    let mut coefs = Vec::new();
    for m in 1..=3u32 {
        let theta = (mu * mu - (m * m) as f64) / 4.0;
        match frobenius::o23_log_term(mu, theta) {
            Ok(Some(rep)) if rep.coefficient.norm() > 0.0 => coefs.push(format!("m={m}: {:.6e}", rep.coefficient.re)),
            Ok(Some(_)) => return None,
            _ => return None,
        }
    }
    Some(format!("log-term coefficient = −θ ≠ 0 ({})", coefs.join(", ")))
}

fn threenoid_detail(spec: &SurfaceTypeSpec) -> String {
    let mu: Vec<f64> = spec.ends.iter().map(|e| e.mu).collect();
    let sharp: Vec<Option<u32>> = spec
        .ends
        .iter()
        .map(|e| match e.mu_sharp {
            MuSharp::Finite(k) => Some(k),
            _ => None,
        })
        .collect();
    if let (Some(a), Some(b), Some(c)) = (sharp[0], sharp[1], sharp[2]) {
        if let Ok(r) = threenoid_contradiction([mu[0], mu[1], mu[2]], [a, b, c]) {
            return format!(
                "a0/a1 = {:.6} > 0 forces c2/c3 = {:.6} < 0, but c2/c3 = {:.6}",
                r.a0_over_a1,
                r.implied_c2_over_c3,
                r.c[1] / r.c[2]
            );
        }
    }
    format!("TA/4pi = {} <= 1", spec.ta_over_2pi() / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_catenoid_cover, make_enneper_cousin, make_horosphere, make_warped_catenoid};

    fn rules(spec: &SurfaceTypeSpec) -> Vec<Rule> {
        check_facts(spec).into_iter().map(|v| v.rule).collect()
    }

    fn end(d: i32, mu: f64, s: MuSharp) -> EndData {
        EndData { d, mu, mu_sharp: s }
    }

    #[test]
    fn gauss_bonnet_on_families() {
        for mu in [0.3, 0.5, 0.8] {
            let cc = make_catenoid_cover(mu, 1).unwrap();
            assert!((gauss_bonnet_ta(&cc.type_spec()).unwrap() - 4.0 * PI * mu).abs() < 1e-12);
            let cov = make_catenoid_cover(mu, 3).unwrap();
            assert!((gauss_bonnet_ta(&cov.type_spec()).unwrap() - 12.0 * PI * mu).abs() < 1e-12);
        }
        assert!((gauss_bonnet_ta(&make_enneper_cousin().type_spec()).unwrap() - 4.0 * PI).abs() < 1e-12);
        assert_eq!(gauss_bonnet_ta(&make_horosphere().type_spec()).unwrap(), 0.0);
        let w = make_warped_catenoid(2, 1, 0.5).unwrap();
        assert!((gauss_bonnet_ta(&w.type_spec()).unwrap() - 4.0 * PI).abs() < 1e-12);
        let w = make_warped_catenoid(3, 4, 0.5).unwrap();
        assert!((gauss_bonnet_ta(&w.type_spec()).unwrap() - 16.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn families_satisfy_all_facts() {
        let mut specs = vec![make_enneper_cousin().type_spec(), make_horosphere().type_spec()];
        for (mu, d) in [(0.3, 1), (0.8, 1), (0.3, 3), (1.7, 2)] {
            specs.push(make_catenoid_cover(mu, d).unwrap().type_spec());
        }
        for (d, l, b) in [(2, 1, 0.5), (3, 2, 0.0), (5, 4, 1.0)] {
            specs.push(make_warped_catenoid(d, l, b).unwrap().type_spec());
        }
        for s in specs {
            assert_eq!(check_facts(&s), vec![], "{s:?}");
        }
    }

    #[test]
    fn rejected_branches_carry_one_reason() {
        let flux = SurfaceTypeSpec::new(1, vec![end(-2, 0.0, MuSharp::Finite(0))], vec![1, 1]);
        assert_eq!(rules(&flux), vec![Rule::FluxObstruction]);
        let bp0 = SurfaceTypeSpec::new(1, vec![end(0, 2.0, MuSharp::Finite(2))], vec![]);
        assert_eq!(rules(&bp0), vec![Rule::ThreeBranchPoints]);
        let bp1 = SurfaceTypeSpec::new(1, vec![end(-1, 1.0, MuSharp::Finite(1))], vec![1]);
        assert_eq!(rules(&bp1), vec![Rule::ThreeBranchPoints]);
        let three = SurfaceTypeSpec::new(
            0,
            vec![end(-2, -0.6, MuSharp::Finite(0)), end(-2, -0.7, MuSharp::Finite(0)), end(-2, -0.7, MuSharp::Finite(0))],
            vec![1, 1],
        );
        assert_eq!(rules(&three), vec![Rule::Threenoid]);
        let o23 = SurfaceTypeSpec::new(0, vec![end(-2, -0.4, MuSharp::Finite(0)), end(-3, -0.6, MuSharp::Infinite)], vec![1]);
        let v = check_facts(&o23);
        assert_eq!(v.iter().map(|v| v.rule).collect::<Vec<_>>(), vec![Rule::LogTerm]);
        assert!(v[0].detail.starts_with("log-term coefficient = −θ ≠ 0"));
        let o13 = SurfaceTypeSpec::new(0, vec![end(-1, 1.0, MuSharp::Finite(1)), end(-3, 0.0, MuSharp::Infinite)], vec![]);
        assert_eq!(rules(&o13), vec![Rule::DualTypeExclusion]);
        let tear = SurfaceTypeSpec::new(0, vec![end(-2, 0.5, MuSharp::Unknown), end(-2, 1.0, MuSharp::Finite(1))], vec![]);
        assert_eq!(rules(&tear), vec![Rule::Teardrop]);
    }

    #[test]
    fn basic_fact_violations() {
        let s = SurfaceTypeSpec::new(0, vec![end(-2, -1.5, MuSharp::Unknown), end(-2, 0.2, MuSharp::Infinite)], vec![]);
        let r = rules(&s);
        assert!(r.contains(&Rule::BranchOrderLowerBound));
        assert!(r.contains(&Rule::RegularEndIntegrality));
        assert!(gauss_bonnet_ta(&s).is_err());
        let s = SurfaceTypeSpec::new(0, vec![end(-1, 0.5, MuSharp::Unknown), end(-3, 1.0, MuSharp::Finite(0))], vec![]);
        let r = rules(&s);
        assert!(r.contains(&Rule::SimplePoleIntegrality) && r.contains(&Rule::RegularEndIntegrality));
        let s = SurfaceTypeSpec::new(0, vec![end(-1, 0.0, MuSharp::Finite(0)), end(-3, 0.5, MuSharp::Infinite)], vec![]);
        assert!(rules(&s).contains(&Rule::EndOrderGap));
    }

    #[test]
    fn mu_sharp_round_trip() {
        for mu in [-0.7, -0.2, 0.4, 1.0, 2.5] {
            for s in 0..4u32 {
                let c = end_coefficient(mu, s);
                assert!((mu_sharp_from_coefficient(mu, c).unwrap() - s as f64).abs() < 1e-12);
            }
        }
        // catenoid cousin: Q = (1 - mu^2)/4 z^-2 with end order mu - 1 gives mu# = 0
        let mu = 0.8;
        let e = EndData::from_hopf_leading(-2, mu - 1.0, (1.0 - mu * mu) / 4.0).unwrap();
        assert_eq!(e.mu_sharp, MuSharp::Finite(0));
        assert!(EndData::from_hopf_leading(-2, 0.3, 0.1).is_err());
        assert_eq!(EndData::new(-4, 0.0).mu_sharp, MuSharp::Infinite);
        assert_eq!(EndData::new(-1, 2.0).mu_sharp, MuSharp::Finite(2));
        assert_eq!(EndData::new(-2, 0.3).mu_sharp, MuSharp::Unknown);
    }

    #[test]
    fn type_labels() {
        let w = make_warped_catenoid(2, 1, 0.5).unwrap();
        assert_eq!(w.type_spec().type_label(), "O(-2,-2)");
        assert_eq!(make_enneper_cousin().type_spec().type_label(), "O(-4)");
    }
}
