//! The contraction `tau_u` at a large vertex and the reflection `sigma_u` at a
//! small source or sink, with the matching weight transport.
//!
//! `tau_u` deletes `u` and composes every incoming arrow `b` with every
//! outgoing arrow `c` into a new arrow `d(b,c)`. `sigma_u` reverses the arrows
//! at `u` and replaces `alpha(u)` by the complementary value.
//!
//! Weights are transported only when supplied. For `tau_u` the case is chosen
//! by the sign of `theta(u)`:
//!
//! | case | condition | new weight at `v != u` |
//! |------|-----------|------------------------|
//! | a | `theta(u) > 0`, `alpha(u)` = incoming sum | `theta(v) + #(v -> u) theta(u)` |
//! | b | `theta(u) < 0`, `alpha(u)` = outgoing sum | `theta(v) + #(u -> v) theta(u)` |
//! | c | `theta(u) = 0` | `theta(v)` |
//!
//! A nonzero `theta(u)` without the matching equality cannot come from a
//! semistable `alpha` and is rejected.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::error::{QuiverError, Result};
use crate::quiver::{Arrow, DimVector, Quiver, QuiverPair, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ReductionKind {
    #[serde(rename = "tau")]
    TauLarge,
    #[serde(rename = "sigma-source")]
    SigmaSource,
    #[serde(rename = "sigma-sink")]
    SigmaSink,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TauCase {
    A,
    B,
    C,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ReductionStep {
    pub kind: ReductionKind,
    pub vertex: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_case: Option<TauCase>,
}

impl fmt::Display for ReductionStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ReductionKind::TauLarge => write!(f, "tau:{}", self.vertex),
            ReductionKind::SigmaSource | ReductionKind::SigmaSink => write!(f, "sigma:{}", self.vertex),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionResult {
    pub pair: QuiverPair,
    pub weight: Option<Weight>,
    pub step: ReductionStep,
    /// The transported weight vanishes although the input weight did not.
    pub degenerate_weight: bool,
}

/// A move named by operation and vertex index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    Tau(usize),
    Sigma(usize),
}

/// `deg(u) > 0`, no loop at `u`, and `alpha(u)` dominates both the incoming and
/// the outgoing dimension sums.
pub fn is_large(pair: &QuiverPair, u: usize) -> bool {
    let q = pair.quiver();
    if q.degree(u) == 0 || q.loops_at(u) > 0 {
        return false;
    }
    let a = pair.alpha().0[u];
    a >= pair.in_sum(u) && a >= pair.out_sum(u)
}

/// `u` is a source whose outgoing dimension sum exceeds `alpha(u)`.
pub fn is_small_source(pair: &QuiverPair, u: usize) -> bool {
    pair.quiver().is_source(u) && pair.out_sum(u) > pair.alpha().0[u]
}

/// `u` is a sink whose incoming dimension sum exceeds `alpha(u)`.
pub fn is_small_sink(pair: &QuiverPair, u: usize) -> bool {
    pair.quiver().is_sink(u) && pair.in_sum(u) > pair.alpha().0[u]
}

/// Every applicable move, in vertex order, `tau` before `sigma`.
pub fn admissible_moves(pair: &QuiverPair) -> Vec<Move> {
    let mut moves = Vec::new();
    for u in 0..pair.quiver().vertex_count() {
        if is_large(pair, u) {
            moves.push(Move::Tau(u));
        }
        if is_small_source(pair, u) || is_small_sink(pair, u) {
            moves.push(Move::Sigma(u));
        }
    }
    moves
}

pub fn apply_move(pair: &QuiverPair, mv: Move, theta: Option<&Weight>) -> Result<ReductionResult> {
    match mv {
        Move::Tau(u) => apply_tau(pair, u, theta),
        Move::Sigma(u) => apply_sigma(pair, u, theta),
    }
}

fn degenerate(before: Option<&Weight>, after: Option<&Weight>) -> bool {
    matches!((before, after), (Some(b), Some(a)) if a.is_zero() && !b.is_zero())
}

/// Contracts the large vertex `u`.
pub fn apply_tau(pair: &QuiverPair, u: usize, theta: Option<&Weight>) -> Result<ReductionResult> {
    let q = pair.quiver();
    if u >= q.vertex_count() {
        return Err(QuiverError::Precondition(format!("vertex index {u} out of range")));
    }
    if let Some(t) = theta {
        pair.check_weight(t)?;
    }
    let name = q.name(u).to_string();
    if !is_large(pair, u) {
        return Err(QuiverError::NotLarge(name));
    }

    let alpha_u = pair.alpha().0[u];
    let (in_sum, out_sum) = (pair.in_sum(u), pair.out_sum(u));
    let tau_case = match theta {
        None => None,
        Some(t) => Some(match t.0[u] {
            x if x > 0 && alpha_u == in_sum => TauCase::A,
            x if x < 0 && alpha_u == out_sum => TauCase::B,
            0 => TauCase::C,
            x => {
                return Err(QuiverError::WeightIncompatible { vertex: name, theta: x, alpha: alpha_u, in_sum, out_sum });
            }
        }),
    };

    let remap: Vec<usize> = (0..q.vertex_count()).map(|v| if v < u { v } else { v.wrapping_sub(1) }).collect();
    let incoming: Vec<&Arrow> = q.arrows().iter().filter(|a| a.target == u).collect();
    let outgoing: Vec<&Arrow> = q.arrows().iter().filter(|a| a.source == u).collect();

    let mut arrows: Vec<Arrow> = q
        .arrows()
        .iter()
        .filter(|a| a.source != u && a.target != u)
        .map(|a| Arrow { id: a.id.clone(), source: remap[a.source], target: remap[a.target] })
        .collect();
    let mut taken: HashSet<String> = arrows.iter().map(|a| a.id.clone()).collect();
    let mut composed: Vec<(&Arrow, &Arrow)> = incoming.iter().flat_map(|&b| outgoing.iter().map(move |&c| (b, c))).collect();
    composed.sort_by(|x, y| (&x.0.id, &x.1.id).cmp(&(&y.0.id, &y.1.id)));
    for (b, c) in composed {
        let mut id = format!("d({},{})", b.id, c.id);
        while taken.contains(&id) {
            id.push('\'');
        }
        taken.insert(id.clone());
        arrows.push(Arrow { id, source: remap[b.source], target: remap[c.target] });
    }

    let keep: Vec<usize> = (0..q.vertex_count()).filter(|&v| v != u).collect();
    let vertices = keep.iter().map(|&v| q.name(v).to_string()).collect();
    let alpha = DimVector(keep.iter().map(|&v| pair.alpha().0[v]).collect());
    let new_pair = QuiverPair::new(Quiver::from_arrows(vertices, arrows)?, alpha)?;

    let weight = match (theta, tau_case) {
        (Some(t), Some(case)) => {
            let tu = t.0[u];
            let values = keep
                .iter()
                .map(|&v| {
                    let m = match case {
                        TauCase::A => q.multiplicity(v, u),
                        TauCase::B => q.multiplicity(u, v),
                        TauCase::C => 0,
                    } as i64;
                    m.checked_mul(tu).and_then(|x| x.checked_add(t.0[v])).ok_or(QuiverError::Overflow)
                })
                .collect::<Result<Vec<_>>>()?;
            Some(Weight(values))
        }
        _ => None,
    };

    Ok(ReductionResult {
        degenerate_weight: degenerate(theta, weight.as_ref()),
        pair: new_pair,
        weight,
        step: ReductionStep { kind: ReductionKind::TauLarge, vertex: q.name(u).to_string(), tau_case },
    })
}

/// Reflects at the small source or sink `u`.
pub fn apply_sigma(pair: &QuiverPair, u: usize, theta: Option<&Weight>) -> Result<ReductionResult> {
    let q = pair.quiver();
    if u >= q.vertex_count() {
        return Err(QuiverError::Precondition(format!("vertex index {u} out of range")));
    }
    if let Some(t) = theta {
        pair.check_weight(t)?;
    }
    let (kind, sum) = if is_small_source(pair, u) {
        (ReductionKind::SigmaSource, pair.out_sum(u))
    } else if is_small_sink(pair, u) {
        (ReductionKind::SigmaSink, pair.in_sum(u))
    } else {
        return Err(QuiverError::NotSmall(q.name(u).to_string()));
    };

    let arrows: Vec<Arrow> = q
        .arrows()
        .iter()
        .map(|a| {
            if a.source == u || a.target == u {
                Arrow { id: a.id.clone(), source: a.target, target: a.source }
            } else {
                a.clone()
            }
        })
        .collect();
    let mut alpha = pair.alpha().clone();
    alpha.0[u] = sum - alpha.0[u];
    let new_pair = QuiverPair::new(Quiver::from_arrows(q.vertices().to_vec(), arrows)?, alpha)?;

    let weight = match theta {
        None => None,
        Some(t) => {
            let tu = t.0[u];
            let values = (0..q.vertex_count())
                .map(|v| {
                    if v == u {
                        return tu.checked_neg().ok_or(QuiverError::Overflow);
                    }
                    let m = match kind {
                        ReductionKind::SigmaSink => q.multiplicity(v, u),
                        _ => q.multiplicity(u, v),
                    } as i64;
                    m.checked_mul(tu).and_then(|x| x.checked_add(t.0[v])).ok_or(QuiverError::Overflow)
                })
                .collect::<Result<Vec<_>>>()?;
            Some(Weight(values))
        }
    };

    Ok(ReductionResult {
        degenerate_weight: degenerate(theta, weight.as_ref()),
        pair: new_pair,
        weight,
        step: ReductionStep { kind, vertex: q.name(u).to_string(), tau_case: None },
    })
}

/// Parses `tau:<vertex>` or `sigma:<vertex>` against the pair's vertex names.
pub fn parse_move(pair: &QuiverPair, text: &str) -> Result<Move> {
    let (op, vertex) = text
        .split_once(':')
        .ok_or_else(|| QuiverError::Parse(format!("expected `tau:<vertex>` or `sigma:<vertex>`, got `{text}`")))?;
    let u = pair.quiver().index_of(vertex)?;
    match op {
        "tau" => Ok(Move::Tau(u)),
        "sigma" => Ok(Move::Sigma(u)),
        other => Err(QuiverError::Parse(format!("unknown operation `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(vertices: &[&str], edges: &[(&str, &str)], alpha: &[u64]) -> QuiverPair {
        QuiverPair::new(Quiver::from_edges(vertices, edges).unwrap(), DimVector(alpha.to_vec())).unwrap()
    }

    fn line() -> QuiverPair {
        pair(&["p", "u", "q"], &[("p", "u"), ("u", "q")], &[1, 1, 1])
    }

    fn fig1() -> QuiverPair {
        pair(&["v1", "v2", "v3"], &[("v1", "v3"), ("v1", "v3"), ("v1", "v2"), ("v3", "v2")], &[2, 1, 3])
    }

    #[test]
    fn largeness() {
        assert!(is_large(&line(), 1));
        let f = fig1();
        assert!((0..3).all(|v| !is_large(&f, v)));
        let looped = pair(&["x", "y"], &[("x", "x"), ("x", "y")], &[9, 1]);
        assert!(!is_large(&looped, 0));
        let isolated = pair(&["x"], &[], &[3]);
        assert!(!is_large(&isolated, 0));
    }

    #[test]
    fn smallness() {
        let f = fig1();
        assert!(is_small_source(&f, 0));
        assert!(is_small_sink(&f, 1));
        assert!(!is_small_sink(&f, 0) && !is_small_source(&f, 2));
        let k2 = pair(&["v1", "v2"], &[("v1", "v2"), ("v1", "v2")], &[3, 1]);
        assert!(!is_small_source(&k2, 0));
        let looped = pair(&["x"], &[("x", "x")], &[1]);
        assert!(!is_small_source(&looped, 0) && !is_small_sink(&looped, 0));
    }

    #[test]
    fn tau_case_c() {
        let r = apply_tau(&line(), 1, Some(&Weight(vec![1, 0, -1]))).unwrap();
        assert_eq!(r.pair.quiver().vertices(), ["p", "q"]);
        assert_eq!(r.pair.quiver().arrows()[0].id, "d(a1,a2)");
        assert_eq!(r.pair.alpha(), &DimVector(vec![1, 1]));
        assert_eq!(r.weight, Some(Weight(vec![1, -1])));
        assert_eq!(r.step.tau_case, Some(TauCase::C));
        assert!(!r.degenerate_weight);
    }

    #[test]
    fn tau_case_a_degenerates() {
        let r = apply_tau(&line(), 1, Some(&Weight(vec![-1, 1, 0]))).unwrap();
        assert_eq!(r.weight, Some(Weight(vec![0, 0])));
        assert_eq!(r.step.tau_case, Some(TauCase::A));
        assert!(r.degenerate_weight);
    }

    #[test]
    fn tau_case_b() {
        let r = apply_tau(&line(), 1, Some(&Weight(vec![0, -1, 1]))).unwrap();
        assert_eq!(r.step.tau_case, Some(TauCase::B));
        assert_eq!(r.weight, Some(Weight(vec![0, 0])));
    }

    #[test]
    fn tau_rejects_incompatible_weight() {
        let p = pair(&["p", "u", "q"], &[("p", "u"), ("u", "q")], &[1, 2, 1]);
        let err = apply_tau(&p, 1, Some(&Weight(vec![-2, 1, 0]))).unwrap_err();
        assert!(matches!(err, QuiverError::WeightIncompatible { .. }));
        assert!(matches!(apply_tau(&fig1(), 2, None), Err(QuiverError::NotLarge(_))));
    }

    #[test]
    fn tau_at_source_just_deletes() {
        let p = pair(&["u", "x", "y"], &[("u", "x"), ("u", "y"), ("x", "y")], &[5, 1, 2]);
        let r = apply_tau(&p, 0, None).unwrap();
        assert_eq!(r.pair.quiver().arrow_count(), 1);
        assert_eq!(r.pair.quiver().arrows()[0].id, "a3");
    }

    #[test]
    fn tau_arrow_count() {
        // two in, three out
        let p = pair(
            &["a", "b", "u", "x", "y"],
            &[("a", "u"), ("b", "u"), ("u", "x"), ("u", "y"), ("u", "y"), ("a", "b")],
            &[1, 1, 3, 1, 1],
        );
        let r = apply_tau(&p, 2, None).unwrap();
        assert_eq!(r.pair.quiver().arrow_count(), 6 - 5 + 6);
    }

    #[test]
    fn sigma_on_fig1() {
        let theta = Weight(vec![-2, 1, 1]);
        let r = apply_sigma(&fig1(), 0, Some(&theta)).unwrap();
        assert_eq!(r.pair.alpha(), &DimVector(vec![5, 1, 3]));
        assert_eq!(r.step.kind, ReductionKind::SigmaSource);
        assert!(r.pair.quiver().arrows()[..3].iter().all(|a| a.target == 0));
        // 2 arrows v1 -> v3, 1 arrow v1 -> v2
        assert_eq!(r.weight, Some(Weight(vec![2, -1, -3])));
        let back = apply_sigma(&r.pair, 0, r.weight.as_ref()).unwrap();
        assert_eq!(back.pair, fig1());
        assert_eq!(back.weight, Some(theta));
        assert_eq!(back.step.kind, ReductionKind::SigmaSink);
    }

    #[test]
    fn sigma_rejects_non_small() {
        let err = apply_sigma(&fig1(), 2, None).unwrap_err();
        assert_eq!(err, QuiverError::NotSmall("v3".into()));
    }

    #[test]
    fn move_parsing() {
        let f = fig1();
        assert_eq!(parse_move(&f, "sigma:v1").unwrap(), Move::Sigma(0));
        assert_eq!(parse_move(&f, "tau:v3").unwrap(), Move::Tau(2));
        assert!(parse_move(&f, "flip:v3").is_err());
        assert!(parse_move(&f, "tau:v9").is_err());
        assert!(parse_move(&f, "tau").is_err());
    }
}
