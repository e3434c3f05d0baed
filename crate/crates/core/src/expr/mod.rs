//! Expression trees for multivalued meromorphic functions of one variable:
//! sums, products and quotients of constants, `z`, and real powers of
//! linear factors `(z - p)^e`.
//!
//! Every non-integer power is continued analytically; see [`BranchState`]
//! for how the branch is carried along paths.

mod branch;
mod parse;
mod series;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use branch::{circle_path, evaluate_continued, segment_distance, BranchState, ContinuationOptions};
pub use parse::parse;
pub use series::{
    conical_order, conical_order_from_dg_exponent, dg_exponent, leading_order, monodromy_factor, LaurentExpansion, LocalSeries,
    SeriesClass,
};

/// Exponents within this distance of an integer are snapped to it.
pub(crate) const EXPONENT_SNAP: f64 = 1e-12;

pub(crate) fn snap_exponent(e: f64) -> f64 {
    let r = e.round();
    if (e - r).abs() <= EXPONENT_SNAP {
        r
    } else {
        e
    }
}

pub(crate) fn is_integer(e: f64) -> bool {
    e == e.round()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum MeroExpr {
    Const(Complex64),
    Var,
    Sum(Vec<MeroExpr>),
    Product(Vec<MeroExpr>),
    Quotient(Box<MeroExpr>, Box<MeroExpr>),
    /// `(z - center)^exponent`, continued along paths for non-integer exponents.
    Power {
        center: Complex64,
        exponent: f64,
    },
    /// Integer power of an arbitrary subexpression.
    IntPow(Box<MeroExpr>, i32),
}

impl Default for MeroExpr {
    fn default() -> Self {
        MeroExpr::zero()
    }
}

impl MeroExpr {
    pub fn constant(c: Complex64) -> Self {
        MeroExpr::Const(c)
    }

    pub fn real(c: f64) -> Self {
        MeroExpr::Const(Complex64::new(c, 0.0))
    }

    pub fn zero() -> Self {
        Self::real(0.0)
    }

    pub fn one() -> Self {
        Self::real(1.0)
    }

    pub fn var() -> Self {
        MeroExpr::Var
    }

    /// `(z - center)^exponent`.
    pub fn power(center: Complex64, exponent: f64) -> Self {
        MeroExpr::Power { center, exponent }.simplify()
    }

    /// `z^exponent`.
    pub fn z_pow(exponent: f64) -> Self {
        Self::power(Complex64::new(0.0, 0.0), exponent)
    }

    pub fn int_pow(self, n: i32) -> Self {
        MeroExpr::IntPow(Box::new(self), n).simplify()
    }

    pub fn as_const(&self) -> Option<Complex64> {
        match self {
            MeroExpr::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, MeroExpr::Const(c) if c.norm() == 0.0)
    }

    pub fn is_constant(&self) -> bool {
        self.as_const().is_some()
    }

    /// Distinct centers `p` of all `(z - p)^e` factors, including `0` for bare `z^e`.
    pub fn centers(&self) -> Vec<Complex64> {
        let mut out = Vec::new();
        self.collect_centers(&mut out, false);
        out
    }

    /// Centers of factors with non-integer exponent: the branch points.
    pub fn branch_centers(&self) -> Vec<Complex64> {
        let mut out = Vec::new();
        self.collect_centers(&mut out, true);
        out
    }

    fn collect_centers(&self, out: &mut Vec<Complex64>, only_branching: bool) {
        match self {
            MeroExpr::Power { center, exponent } => {
                if (!only_branching || !is_integer(*exponent)) && !out.iter().any(|c| c == center) {
                    out.push(*center);
                }
            }
            MeroExpr::Sum(v) | MeroExpr::Product(v) => v.iter().for_each(|e| e.collect_centers(out, only_branching)),
            MeroExpr::Quotient(n, d) => {
                n.collect_centers(out, only_branching);
                d.collect_centers(out, only_branching);
            }
            MeroExpr::IntPow(b, _) => b.collect_centers(out, only_branching),
            MeroExpr::Const(_) | MeroExpr::Var => {}
        }
    }

    pub fn differentiate(&self) -> MeroExpr {
        self.derivative_raw().simplify()
    }

    fn derivative_raw(&self) -> MeroExpr {
        match self {
            MeroExpr::Const(_) => MeroExpr::zero(),
            MeroExpr::Var => MeroExpr::one(),
            MeroExpr::Sum(v) => MeroExpr::Sum(v.iter().map(|e| e.derivative_raw()).collect()),
            MeroExpr::Product(v) => {
                let mut terms = Vec::with_capacity(v.len());
                for i in 0..v.len() {
                    let mut factors = v.clone();
                    factors[i] = v[i].derivative_raw();
                    terms.push(MeroExpr::Product(factors));
                }
                MeroExpr::Sum(terms)
            }
            MeroExpr::Quotient(n, d) => {
                let num = MeroExpr::Sum(vec![
                    MeroExpr::Product(vec![n.derivative_raw(), (**d).clone()]),
                    MeroExpr::Product(vec![MeroExpr::real(-1.0), (**n).clone(), d.derivative_raw()]),
                ]);
                MeroExpr::Quotient(Box::new(num), Box::new(MeroExpr::IntPow(d.clone(), 2)))
            }
            MeroExpr::Power { center, exponent } => {
                if *exponent == 0.0 {
                    MeroExpr::zero()
                } else {
                    MeroExpr::Product(vec![
                        MeroExpr::real(*exponent),
                        MeroExpr::Power { center: *center, exponent: snap_exponent(exponent - 1.0) },
                    ])
                }
            }
            MeroExpr::IntPow(b, n) => {
                if *n == 0 {
                    MeroExpr::zero()
                } else {
                    MeroExpr::Product(vec![MeroExpr::real(*n as f64), MeroExpr::IntPow(b.clone(), n - 1), b.derivative_raw()])
                }
            }
        }
    }

    /// Light canonicalization: flattening, constant folding, dropping
    /// zero/unit terms, and merging powers with a common center.
    pub fn simplify(&self) -> MeroExpr {
        match self {
            MeroExpr::Const(_) | MeroExpr::Var => self.clone(),
            MeroExpr::Power { center, exponent } => {
                let e = snap_exponent(*exponent);
                if e == 0.0 {
                    MeroExpr::one()
                } else if e == 1.0 && center.norm() == 0.0 {
                    MeroExpr::Var
                } else {
                    MeroExpr::Power { center: *center, exponent: e }
                }
            }
            MeroExpr::Sum(v) => simplify_sum(v.iter().map(|e| e.simplify()).collect()),
            MeroExpr::Product(v) => simplify_product(v.iter().map(|e| e.simplify()).collect()),
            MeroExpr::Quotient(n, d) => simplify_quotient(n.simplify(), d.simplify()),
            MeroExpr::IntPow(b, n) => simplify_int_pow(b.simplify(), *n),
        }
    }

    /// Principal-branch evaluation (each power uses the principal argument).
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_with(z, &|center, exponent| principal_power(z - center, exponent))
    }

    /// Evaluation on the branch selected by `branch`, continued from
    /// `branch.point()` to `z` along a straight segment.
    pub fn eval_on(&self, z: Complex64, branch: &BranchState) -> Complex64 {
        self.eval_with(z, &|center, exponent| branch.power_at(z, center, exponent))
    }

    fn eval_with(&self, z: Complex64, pow: &dyn Fn(Complex64, f64) -> Complex64) -> Complex64 {
        match self {
            MeroExpr::Const(c) => *c,
            MeroExpr::Var => z,
            MeroExpr::Sum(v) => v.iter().map(|e| e.eval_with(z, pow)).sum(),
            MeroExpr::Product(v) => v.iter().map(|e| e.eval_with(z, pow)).product(),
            MeroExpr::Quotient(n, d) => n.eval_with(z, pow) / d.eval_with(z, pow),
            MeroExpr::Power { center, exponent } => pow(*center, *exponent),
            MeroExpr::IntPow(b, n) => b.eval_with(z, pow).powi(*n),
        }
    }

    /// Parses the textual syntax described in [`parse`].
    pub fn parse(s: &str) -> crate::error::Result<MeroExpr> {
        parse::parse(s)
    }

    /// If the expression is `c * prod (z - p_j)^{e_j}`, returns `(c, [(p_j, e_j)])`.
    pub fn as_power_product(&self) -> Option<(Complex64, Vec<(Complex64, f64)>)> {
        match self {
            MeroExpr::Const(c) => Some((*c, vec![])),
            MeroExpr::Var => Some((Complex64::new(1.0, 0.0), vec![(Complex64::new(0.0, 0.0), 1.0)])),
            MeroExpr::Power { center, exponent } => Some((Complex64::new(1.0, 0.0), vec![(*center, *exponent)])),
            MeroExpr::Product(v) => {
                let mut c = Complex64::new(1.0, 0.0);
                let mut pw = Vec::new();
                for f in v {
                    let (c1, p1) = f.as_power_product()?;
                    c *= c1;
                    pw.extend(p1);
                }
                Some((c, pw))
            }
            _ => None,
        }
    }
}

pub(crate) fn principal_power(base: Complex64, exponent: f64) -> Complex64 {
    if is_integer(exponent) && exponent.abs() < 2.0e9 {
        return base.powi(exponent as i32);
    }
    if base.norm() == 0.0 {
        return if exponent > 0.0 { Complex64::new(0.0, 0.0) } else { Complex64::new(f64::INFINITY, 0.0) };
    }
    (exponent * base.ln()).exp()
}

fn simplify_sum(terms: Vec<MeroExpr>) -> MeroExpr {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut out = Vec::new();
    for t in terms {
        match t {
            MeroExpr::Const(c) => acc += c,
            MeroExpr::Sum(inner) => {
                for u in inner {
                    match u {
                        MeroExpr::Const(c) => acc += c,
                        other => out.push(other),
                    }
                }
            }
            other => out.push(other),
        }
    }
    if acc.norm() != 0.0 || out.is_empty() {
        out.push(MeroExpr::Const(acc));
    }
    if out.len() == 1 {
        out.pop().unwrap()
    } else {
        MeroExpr::Sum(out)
    }
}

fn simplify_product(factors: Vec<MeroExpr>) -> MeroExpr {
    let mut coeff = Complex64::new(1.0, 0.0);
    let mut powers: Vec<(Complex64, f64)> = Vec::new();
    let mut others = Vec::new();
    let push_power = |powers: &mut Vec<(Complex64, f64)>, c: Complex64, e: f64| {
        if let Some(slot) = powers.iter_mut().find(|(p, _)| *p == c) {
            slot.1 = snap_exponent(slot.1 + e);
        } else {
            powers.push((c, e));
        }
    };
    let mut stack: Vec<MeroExpr> = factors;
    stack.reverse();
    while let Some(f) = stack.pop() {
        match f {
            MeroExpr::Const(c) => coeff *= c,
            MeroExpr::Var => push_power(&mut powers, Complex64::new(0.0, 0.0), 1.0),
            MeroExpr::Power { center, exponent } => push_power(&mut powers, center, exponent),
            MeroExpr::Product(inner) => {
                for u in inner.into_iter().rev() {
                    stack.push(u);
                }
            }
            other => others.push(other),
        }
    }
    if coeff.norm() == 0.0 {
        return MeroExpr::zero();
    }
    let mut out = Vec::new();
    if coeff != Complex64::new(1.0, 0.0) {
        out.push(MeroExpr::Const(coeff));
    }
    for (c, e) in powers {
        let p = MeroExpr::Power { center: c, exponent: e }.simplify();
        if p != MeroExpr::one() {
            out.push(p);
        }
    }
    out.extend(others);
    match out.len() {
        0 => MeroExpr::one(),
        1 => out.pop().unwrap(),
        _ => MeroExpr::Product(out),
    }
}

fn invert_power_product(d: &MeroExpr) -> Option<MeroExpr> {
    let (c, pw) = d.as_power_product()?;
    if c.norm() == 0.0 {
        return None;
    }
    let mut factors = vec![MeroExpr::Const(c.inv())];
    factors.extend(pw.into_iter().map(|(p, e)| MeroExpr::Power { center: p, exponent: -e }));
    Some(simplify_product(factors))
}

fn simplify_quotient(n: MeroExpr, d: MeroExpr) -> MeroExpr {
    if n.is_zero() {
        return MeroExpr::zero();
    }
    if n == d {
        return MeroExpr::one();
    }
    if let Some(inv) = invert_power_product(&d) {
        return simplify_product(vec![n, inv]);
    }
    // a/(b/c) = a c / b, (a/b)/c = a/(b c)
    match (n, d) {
        (n, MeroExpr::Quotient(dn, dd)) => simplify_quotient(simplify_product(vec![n, *dd]), *dn),
        (MeroExpr::Quotient(nn, nd), d) => simplify_quotient(*nn, simplify_product(vec![*nd, d])),
        (n, d) => MeroExpr::Quotient(Box::new(n), Box::new(d)),
    }
}

fn simplify_int_pow(b: MeroExpr, n: i32) -> MeroExpr {
    if n == 0 {
        return MeroExpr::one();
    }
    if n == 1 {
        return b;
    }
    if let Some((c, pw)) = b.as_power_product() {
        if c.norm() != 0.0 || n > 0 {
            let mut factors = vec![MeroExpr::Const(c.powi(n))];
            factors.extend(pw.into_iter().map(|(p, e)| MeroExpr::Power { center: p, exponent: snap_exponent(e * n as f64) }));
            return simplify_product(factors);
        }
    }
    match b {
        MeroExpr::IntPow(inner, m) => simplify_int_pow(*inner, m * n),
        b => MeroExpr::IntPow(Box::new(b), n),
    }
}

impl Add for MeroExpr {
    type Output = MeroExpr;
    fn add(self, o: MeroExpr) -> MeroExpr {
        simplify_sum(vec![self, o])
    }
}

impl Sub for MeroExpr {
    type Output = MeroExpr;
    fn sub(self, o: MeroExpr) -> MeroExpr {
        simplify_sum(vec![self, -o])
    }
}

impl Mul for MeroExpr {
    type Output = MeroExpr;
    fn mul(self, o: MeroExpr) -> MeroExpr {
        simplify_product(vec![self, o])
    }
}

impl Div for MeroExpr {
    type Output = MeroExpr;
    fn div(self, o: MeroExpr) -> MeroExpr {
        simplify_quotient(self, o)
    }
}

impl Neg for MeroExpr {
    type Output = MeroExpr;
    fn neg(self) -> MeroExpr {
        simplify_product(vec![MeroExpr::real(-1.0), self])
    }
}

fn fmt_real(x: f64) -> String {
    if x < 0.0 {
        format!("({x:?})")
    } else {
        format!("{x:?}")
    }
}

fn fmt_complex(c: Complex64) -> String {
    if c.im == 0.0 {
        fmt_real(c.re)
    } else if c.re == 0.0 {
        format!("({:?}*i)", c.im)
    } else {
        format!("({:?}+{:?}*i)", c.re, c.im)
    }
}

fn fmt_exponent(e: f64) -> String {
    if e < 0.0 {
        format!("({e:?})")
    } else {
        format!("{e:?}")
    }
}

/// Output is accepted by [`parse`] and reparses to an equal tree up to simplification.
impl fmt::Display for MeroExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeroExpr::Const(c) => write!(f, "{}", fmt_complex(*c)),
            MeroExpr::Var => write!(f, "z"),
            MeroExpr::Sum(v) => {
                write!(f, "(")?;
                for (i, t) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
            MeroExpr::Product(v) => {
                for (i, t) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            MeroExpr::Quotient(n, d) => write!(f, "({n})/({d})"),
            MeroExpr::Power { center, exponent } => {
                if center.norm() == 0.0 {
                    write!(f, "z^{}", fmt_exponent(*exponent))
                } else {
                    write!(f, "(z-{})^{}", fmt_complex(*center), fmt_exponent(*exponent))
                }
            }
            MeroExpr::IntPow(b, n) => write!(f, "({b})^{}", fmt_exponent(*n as f64)),
        }
    }
}
