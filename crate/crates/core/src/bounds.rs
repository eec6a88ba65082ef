//! Finiteness bounds for minimal pairs in the fundamental set, and the
//! structural inequalities they rest on.

use serde::Serialize;

use crate::classification::{analyze_fundamental, AdeType, FundamentalAnalysis, GraphClass};
use crate::enumerate::ClassificationRow;
use crate::error::Result;
use crate::forms::expected_dimension;
use crate::quiver::QuiverPair;

/// Theorem-level envelope for a given `d = 1 - <alpha,alpha>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TheoremBounds {
    pub vertices: i128,
    pub arrows: i128,
    pub max_entry: i128,
}

/// `|Q0| <= 2(d-1) + 36(d-1)^2(12d-11)`, `|Q1| <= that + 12(d-1)^2`,
/// `max alpha <= 18(d-1)`.
pub fn theorem_bounds(d: i64) -> TheoremBounds {
    let e = i128::from(d) - 1;
    let vertices = 2 * e + 36 * e * e * (12 * i128::from(d) - 11);
    TheoremBounds { vertices, arrows: vertices + 12 * e * e, max_entry: 18 * e }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub name: &'static str,
    pub holds: bool,
    pub detail: String,
}

fn check(name: &'static str, lhs: i128, rhs: i128) -> BoundCheck {
    BoundCheck { name, holds: lhs <= rhs, detail: format!("{lhs} <= {rhs}") }
}

pub fn theorem_checks(pair: &QuiverPair, d: i64) -> Vec<BoundCheck> {
    let b = theorem_bounds(d);
    let q = pair.quiver();
    vec![
        check("theorem:vertices", q.vertex_count() as i128, b.vertices),
        check("theorem:arrows", q.arrow_count() as i128, b.arrows),
        check("theorem:max-entry", i128::from(pair.alpha().max_entry()), b.max_entry),
    ]
}

/// The structural inequalities for a connected wild sincere pair in the
/// fundamental set, labelled by the statement they come from.
pub fn lemma_checks(pair: &QuiverPair) -> Result<Vec<BoundCheck>> {
    let a = analyze_fundamental(pair)?;
    Ok(lemma_checks_for(pair, &a))
}

pub fn lemma_checks_for(pair: &QuiverPair, a: &FundamentalAnalysis) -> Vec<BoundCheck> {
    let q = pair.quiver();
    let alpha = &pair.alpha().0;
    let t = i128::from(a.tits);
    let q_plus = a.q_plus();
    let in_plus = |v: usize| q_plus.binary_search(&v).is_ok();
    let mut out = Vec::new();

    out.push(check("bounds(i):|Q-|", a.q_minus.len() as i128, -2 * t));
    for &v in &a.q_minus {
        out.push(check("bounds(ii):alpha on Q-", i128::from(alpha[v]), -2 * t));
        out.push(check("bounds(iii):deg on Q-", q.degree(v) as i128, -6 * t));
    }
    out.push(check("bounds(iv):tied", a.tied.len() as i128, 12 * t * t));
    for &w in &a.tied {
        out.push(check("bounds(v):alpha on tied", i128::from(alpha[w]), -6 * t));
    }
    for arrow in q.arrows() {
        for (v, w) in [(arrow.source, arrow.target), (arrow.target, arrow.source)] {
            if in_plus(v) {
                out.push(check("bounds(vi):neighbour", i128::from(alpha[w]), 2 * i128::from(alpha[v])));
            }
        }
    }
    let plus_arrows = q.arrows().iter().filter(|x| in_plus(x.source) && in_plus(x.target)).count() as i128;
    out.push(check("bounds(vii):vertices", q.vertex_count() as i128, q_plus.len() as i128 - 2 * t));
    let middle = plus_arrows - 6 * t * a.q_minus.len() as i128;
    out.push(check("bounds(vii):arrows", q.arrow_count() as i128, middle));
    out.push(check("bounds(vii):arrows-outer", middle, plus_arrows + 12 * t * t));

    for (comp, class) in &a.q_plus_components {
        out.push(BoundCheck {
            name: "dynkin:Q+ component",
            holds: class.is_dynkin(),
            detail: format!("{} vertices classify {class}", comp.len()),
        });
    }

    // arithmetic progressions along degree-2 chains and doubling at leaves
    for &v in &q_plus {
        if q.loops_at(v) > 0 {
            continue;
        }
        let nbrs: Vec<usize> = q
            .arrows()
            .iter()
            .filter_map(|x| match (x.source == v, x.target == v) {
                (true, false) => Some(x.target),
                (false, true) => Some(x.source),
                _ => None,
            })
            .collect();
        if !nbrs.iter().all(|&w| in_plus(w)) {
            continue;
        }
        match nbrs.as_slice() {
            [w1, w2] if w1 != w2 => out.push(BoundCheck {
                name: "arithmetic:progression",
                holds: 2 * alpha[v] == alpha[*w1] + alpha[*w2],
                detail: format!("2*{} vs {}+{}", alpha[v], alpha[*w1], alpha[*w2]),
            }),
            [w] => out.push(BoundCheck {
                name: "arithmetic:leaf",
                holds: alpha[*w] == 2 * alpha[v],
                detail: format!("{} vs 2*{}", alpha[*w], alpha[v]),
            }),
            _ => {}
        }
    }

    out.push(check("kappa", a.kappa as i128, 36 * t * t));

    for delta in &a.delta_subgraphs {
        let Some(mu) = delta.mu else { continue };
        let mu = i128::from(mu);
        let cap = match delta.class {
            GraphClass::Dynkin(AdeType::A(_)) => mu,
            GraphClass::Dynkin(AdeType::D(_)) => 2 * mu - 1,
            GraphClass::Dynkin(_) => 3 * mu,
            _ => {
                out.push(BoundCheck {
                    name: "maxdim:delta",
                    holds: false,
                    detail: format!("piece classifies {}", delta.class),
                });
                continue;
            }
        };
        let top = delta.vertices.iter().map(|&v| i128::from(alpha[v])).max().unwrap_or(0);
        out.push(check("maxdim:delta", top, cap));
    }
    if let Some(mu) = a.mu {
        for &w in &q_plus {
            out.push(check("maxdim:Q+", i128::from(alpha[w]), 3 * i128::from(mu)));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub canonical_key: String,
    pub pair: String,
    pub check: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub rows: usize,
    pub minimal_rows: usize,
    pub checks: usize,
    pub violations: Vec<Violation>,
}

impl BoundsReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A compact text description of a pair: `alpha; s->t, ...`.
pub fn describe(pair: &QuiverPair) -> String {
    let q = pair.quiver();
    let arrows: Vec<String> = q.arrows().iter().map(|a| format!("{}->{}", q.name(a.source), q.name(a.target))).collect();
    format!("alpha={}; {}", pair.alpha(), arrows.join(","))
}

/// The data `verify_bounds` needs from a row.
#[derive(Debug, Clone)]
pub struct BoundsEntry {
    pub canonical_key: String,
    pub pair: QuiverPair,
    pub d: i64,
    pub minimal: bool,
}

impl From<&ClassificationRow> for BoundsEntry {
    fn from(row: &ClassificationRow) -> Self {
        BoundsEntry {
            canonical_key: row.canonical_key.to_base64(),
            pair: row.pair.clone(),
            d: row.d,
            minimal: row.minimal_verdict.is_minimal(),
        }
    }
}

/// Checks the structural inequalities on every row, and the theorem envelope on
/// the rows reported minimal.
pub fn verify_bounds(rows: &[ClassificationRow]) -> BoundsReport {
    let entries: Vec<BoundsEntry> = rows.iter().map(BoundsEntry::from).collect();
    verify_entries(&entries)
}

pub fn verify_entries(entries: &[BoundsEntry]) -> BoundsReport {
    let mut report = BoundsReport { rows: entries.len(), ..BoundsReport::default() };
    for row in entries {
        let mut checks = match lemma_checks(&row.pair) {
            Ok(c) => c,
            Err(e) => vec![BoundCheck { name: "analysis", holds: false, detail: e.to_string() }],
        };
        let actual = expected_dimension(&row.pair);
        checks.push(BoundCheck {
            name: "d",
            holds: actual.as_ref().is_ok_and(|&x| x == row.d),
            detail: format!("recorded {} vs computed {:?}", row.d, actual),
        });
        if row.minimal {
            report.minimal_rows += 1;
            checks.extend(theorem_checks(&row.pair, row.d));
        }
        report.checks += checks.len();
        for c in checks.into_iter().filter(|c| !c.holds) {
            report.violations.push(Violation {
                canonical_key: row.canonical_key.clone(),
                pair: describe(&row.pair),
                check: c.name,
                detail: c.detail,
            });
        }
    }
    report
}
