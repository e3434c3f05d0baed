//! Case analysis of surfaces with `TA <= 4 pi`, rendered as a table.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{check_facts, EndData, MuSharp, Rule, SurfaceTypeSpec};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub type_label: String,
    pub ta: String,
    pub surface: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub genus: u32,
    pub ends: u32,
    pub case: String,
    /// Indices into the table rows produced by this branch.
    pub rows: Vec<usize>,
    pub rule: Option<Rule>,
    pub reason: Option<String>,
    /// A second, independent reason the branch is empty, when one exists.
    pub also: Option<String>,
    /// End data exhibiting the rejection; `check_facts` reports `rule` on it.
    pub witness: Option<SurfaceTypeSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub bound: f64,
    pub rows: Vec<TableRow>,
    pub branches: Vec<Branch>,
}

fn row(t: &str, ta: &str, s: &str) -> TableRow {
    TableRow { type_label: t.into(), ta: ta.into(), surface: s.into() }
}

/// The minimal-surface counterpart: complete minimal surfaces in R^3 with `TA <= 4 pi`.
pub fn minimal_surface_table() -> Vec<TableRow> {
    vec![row("O(0)", "0", "Plane"), row("O(-4)", "4π", "Enneper surface"), row("O(-2,-2)", "4π", "Catenoid")]
}

fn end(d: i32, mu: f64, s: MuSharp) -> EndData {
    EndData { d, mu, mu_sharp: s }
}

fn rejected(genus: u32, ends: u32, case: &str, rule: Rule, witness: SurfaceTypeSpec) -> Result<Branch> {
    let v = check_facts(&witness);
    let hit = v
        .iter()
        .find(|v| v.rule == rule)
        .ok_or_else(|| Error::Hypothesis(format!("witness for {case} does not trigger {rule:?}")))?;
    let reason = match rule {
        Rule::LogTerm => "log-term coefficient = −θ ≠ 0".to_string(),
        _ => hit.citation.clone(),
    };
    Ok(Branch {
        genus,
        ends,
        case: case.into(),
        rows: vec![],
        rule: Some(rule),
        reason: Some(reason),
        also: None,
        witness: Some(witness),
    })
}

fn fmt_pi(x: f64) -> String {
    let k = x / PI;
    if k == 0.0 {
        "0".into()
    } else if k == 1.0 {
        "π".into()
    } else {
        format!("{}π", (k * 1e9).round() / 1e9)
    }
}

/// Runs the case analysis for `TA <= bound` (`0 < bound <= 4 pi`).
///
/// The pairs `(gamma, n)` come from `2 gamma - 2 + n < TA / 2 pi`; each
/// branch is either attached to table rows or rejected by a rule of
/// [`check_facts`] evaluated on a witness.
pub fn enumerate_low_ta(bound: f64) -> Result<Classification> {
    let four_pi = 4.0 * PI;
    if !(bound > 0.0) || bound > four_pi * (1.0 + 1e-12) {
        return Err(Error::InvalidParams(format!("bound {bound} unsupported: the case analysis covers 0 < TA <= 4 pi")));
    }
    let bound = bound.min(four_pi);
    let at_four_pi = bound >= four_pi * (1.0 - 1e-12);
    let t = bound / (2.0 * PI);

    // each end contributes mu_j - d_j > 1
    let mut pairs = Vec::new();
    for gamma in 0u32.. {
        if 2.0 * gamma as f64 - 2.0 >= t {
            break;
        }
        for n in 1u32.. {
            if 2.0 * gamma as f64 - 2.0 + n as f64 >= t {
                break;
            }
            pairs.push((gamma, n));
        }
    }

    let mut rows = Vec::new();
    let mut branches = Vec::new();
    for (gamma, n) in pairs {
        match (gamma, n) {
            (0, 1) => {
                // simply connected: same TA as the minimal counterpart (plane or Enneper surface)
                let mut idx = vec![rows.len()];
                rows.push(row("O(0)", "0", "Horosphere"));
                if at_four_pi {
                    idx.push(rows.len());
                    rows.push(row("O(-4)", "4π", "Enneper cousins"));
                }
                branches.push(Branch {
                    genus: 0,
                    ends: 1,
                    case: "simply connected; minimal counterpart has the same TA".into(),
                    rows: idx,
                    rule: None,
                    reason: None,
                    also: None,
                    witness: None,
                });
            }
            (0, 2) => {
                // sum d in {-4, -5}: sum d <= -4 from the order count, > -6 from TA and mu > -1
                let mut idx = vec![rows.len()];
                rows.push(row("O(-2,-2)", &format!("(0,{}]", fmt_pi(bound)), "Catenoid cousins and their δ-fold covers"));
                if at_four_pi {
                    idx.push(rows.len());
                    rows.push(row("O(-2,-2)", "4π", "Warped catenoid cousins with l=1"));
                }
                branches.push(Branch {
                    genus: 0,
                    ends: 2,
                    case: "d1 + d2 = -4, both ends regular".into(),
                    rows: idx,
                    rule: None,
                    reason: None,
                    also: None,
                    witness: None,
                });
                let mut b = rejected(
                    0,
                    2,
                    "d1 + d2 = -4, d1 >= -1, d2 <= -3: type O(-1,-3)",
                    Rule::DualTypeExclusion,
                    SurfaceTypeSpec::new(0, vec![end(-1, 1.0, MuSharp::Finite(1)), end(-3, 0.0, MuSharp::Infinite)], vec![]),
                )?;
                b.also = Some("mu_1 - d_1 >= 2 and mu_2 - d_2 > 1 already give TA > 4π when d_2 <= -3".into());
                branches.push(b);
                branches.push(rejected(
                    0,
                    2,
                    "d1 + d2 = -5: type O(-2,-3) with one simple umbilic",
                    Rule::LogTerm,
                    SurfaceTypeSpec::new(0, vec![end(-2, -0.4, MuSharp::Finite(0)), end(-3, -0.6, MuSharp::Infinite)], vec![1]),
                )?);
            }
            (0, 3) => branches.push(rejected(
                0,
                3,
                "three ends",
                Rule::Threenoid,
                SurfaceTypeSpec::new(
                    0,
                    vec![end(-2, -0.6, MuSharp::Finite(0)), end(-2, -0.7, MuSharp::Finite(0)), end(-2, -0.7, MuSharp::Finite(0))],
                    vec![1, 1],
                ),
            )?),
            (1, 1) => {
                branches.push(rejected(
                    1,
                    1,
                    "d1 = -2",
                    Rule::FluxObstruction,
                    SurfaceTypeSpec::new(1, vec![end(-2, 0.0, MuSharp::Finite(0))], vec![1, 1]),
                )?);
                branches.push(rejected(
                    1,
                    1,
                    "d1 = -1: at most one umbilic",
                    Rule::ThreeBranchPoints,
                    SurfaceTypeSpec::new(1, vec![end(-1, 1.0, MuSharp::Finite(1))], vec![1]),
                )?);
                branches.push(rejected(
                    1,
                    1,
                    "d1 = 0: no umbilics",
                    Rule::ThreeBranchPoints,
                    SurfaceTypeSpec::new(1, vec![end(0, 2.0, MuSharp::Finite(2))], vec![]),
                )?);
            }
            (g, k) => {
                return Err(Error::Hypothesis(format!("no case analysis for (gamma, n) = ({g}, {k})")));
            }
        }
    }
    Ok(Classification { bound, rows, branches })
}

/// Plain-text table with columns padded to the widest cell.
pub fn render_table(rows: &[TableRow]) -> String {
    let header = row("Type", "TA", "Surface");
    let all: Vec<&TableRow> = std::iter::once(&header).chain(rows.iter()).collect();
    let w1 = all.iter().map(|r| r.type_label.chars().count()).max().unwrap_or(0);
    let w2 = all.iter().map(|r| r.ta.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for r in all {
        let p1 = w1 - r.type_label.chars().count();
        let p2 = w2 - r.ta.chars().count();
        let _ = writeln!(out, "{}{}  {}{}  {}", r.type_label, " ".repeat(p1), r.ta, " ".repeat(p2), r.surface);
    }
    out
}

impl Classification {
    pub fn render_table(&self) -> String {
        render_table(&self.rows)
    }

    /// One line per rejected branch.
    pub fn render_rejections(&self) -> String {
        let mut out = String::new();
        for b in self.branches.iter().filter(|b| b.rule.is_some()) {
            let _ =
                writeln!(out, "(gamma,n)=({},{}) {}: rejected: {}", b.genus, b.ends, b.case, b.reason.as_deref().unwrap_or(""));
        }
        out
    }
}
