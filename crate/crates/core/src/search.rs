//! Bounded breadth-first search for τσ-minimality.
//!
//! A pair is not minimal in a class when some chain of `tau`/`sigma` moves ends
//! at a member of the class with fewer vertices, or with as many vertices and
//! smaller total dimension. Intermediate pairs may lie outside the class.
//! Reduction chains can grow without bound, so the search stops at a depth
//! and a total-dimension cap, and the negative verdict is qualified by them.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::canon::{canonical_key, CanonicalKey};
use crate::classification::classify_graph;
use crate::error::{QuiverError, Result};
use crate::forms::{in_fundamental_set, ringel_alpha_unit, ringel_unit_alpha};
use crate::quiver::QuiverPair;
use crate::reductions::{admissible_moves, apply_move, parse_move, ReductionStep};

pub const DEFAULT_MAX_DEPTH: usize = 8;

/// Default total-dimension cap: eight times `|alpha|`.
pub fn default_max_total_dim(pair: &QuiverPair) -> u64 {
    pair.alpha().total().saturating_mul(8)
}

/// The class `C` in which minimality is decided. Every class consists of
/// sincere pairs.
#[derive(Clone)]
pub enum ClassPredicate {
    /// Connected wild quiver, alpha sincere and in the fundamental set.
    FundamentalWildSincere,
    /// Every sincere pair.
    AllSincere,
    /// `alpha(v) <= 2` everywhere.
    Dim2Bounded,
    /// `alpha(v) = n` everywhere.
    ConstantN(u64),
    /// Strongly connected, not the one-loop quiver, with
    /// `<alpha, e_v> < 0` and `<e_v, alpha> < 0` at every vertex.
    AffineIrreducible,
    Custom(Arc<dyn Fn(&QuiverPair) -> bool + Send + Sync>),
}

impl fmt::Debug for ClassPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassPredicate::FundamentalWildSincere => write!(f, "FundamentalWildSincere"),
            ClassPredicate::AllSincere => write!(f, "AllSincere"),
            ClassPredicate::Dim2Bounded => write!(f, "Dim2Bounded"),
            ClassPredicate::ConstantN(n) => write!(f, "ConstantN({n})"),
            ClassPredicate::AffineIrreducible => write!(f, "AffineIrreducible"),
            ClassPredicate::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl ClassPredicate {
    pub fn custom(f: impl Fn(&QuiverPair) -> bool + Send + Sync + 'static) -> Self {
        ClassPredicate::Custom(Arc::new(f))
    }

    /// Parses `fundamental`, `all`, `dim2`, `affine` or `constant:<n>`.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "fundamental" => Ok(ClassPredicate::FundamentalWildSincere),
            "all" => Ok(ClassPredicate::AllSincere),
            "dim2" => Ok(ClassPredicate::Dim2Bounded),
            "affine" => Ok(ClassPredicate::AffineIrreducible),
            _ => {
                let n = s
                    .strip_prefix("constant:")
                    .and_then(|n| n.parse::<u64>().ok())
                    .filter(|&n| n > 0)
                    .ok_or_else(|| QuiverError::Parse(format!("unknown class `{s}`")))?;
                Ok(ClassPredicate::ConstantN(n))
            }
        }
    }

    pub fn contains(&self, pair: &QuiverPair) -> bool {
        if !pair.is_sincere() {
            return false;
        }
        let alpha = &pair.alpha().0;
        match self {
            ClassPredicate::FundamentalWildSincere => {
                pair.quiver().is_connected()
                    && in_fundamental_set(pair)
                    && classify_graph(pair.quiver()).is_ok_and(|c| c.is_wild())
            }
            ClassPredicate::AllSincere => true,
            ClassPredicate::Dim2Bounded => alpha.iter().all(|&a| a <= 2),
            ClassPredicate::ConstantN(n) => alpha.iter().all(|a| a == n),
            ClassPredicate::AffineIrreducible => is_affine_irreducible(pair),
            ClassPredicate::Custom(f) => f(pair),
        }
    }
}

pub(crate) fn is_affine_irreducible(pair: &QuiverPair) -> bool {
    let q = pair.quiver();
    let one_loop = q.vertex_count() == 1 && q.arrow_count() == 1;
    pair.is_sincere()
        && !one_loop
        && q.is_strongly_connected()
        && (0..q.vertex_count()).all(|v| ringel_alpha_unit(pair, v) < 0 && ringel_unit_alpha(pair, v) < 0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    NotMinimal { witness: Vec<ReductionStep> },
    MinimalUpToBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchBounds {
    pub max_depth: usize,
    pub max_total_dim: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    #[serde(flatten)]
    pub verdict: Verdict,
    /// Number of isomorphism classes visited.
    pub explored: usize,
    pub bounds_used: SearchBounds,
}

impl SearchReport {
    pub fn is_minimal(&self) -> bool {
        self.verdict == Verdict::MinimalUpToBound
    }

    pub fn witness(&self) -> Option<&[ReductionStep]> {
        match &self.verdict {
            Verdict::NotMinimal { witness } => Some(witness),
            Verdict::MinimalUpToBound => None,
        }
    }
}

/// A pair reached by the search.
#[derive(Debug, Clone)]
pub struct Reached {
    pub pair: QuiverPair,
    pub depth: usize,
}

struct Node {
    pair: QuiverPair,
    depth: usize,
    parent: Option<(usize, ReductionStep)>,
}

fn check_start(pair: &QuiverPair, bounds: SearchBounds) -> Result<()> {
    if !pair.is_sincere() {
        return Err(QuiverError::Precondition("alpha is not sincere".into()));
    }
    if bounds.max_depth == 0 || bounds.max_total_dim == 0 {
        return Err(QuiverError::Precondition("search bounds must be positive".into()));
    }
    Ok(())
}

fn improves(start: &QuiverPair, end: &QuiverPair) -> bool {
    let (n0, n1) = (start.quiver().vertex_count(), end.quiver().vertex_count());
    n1 < n0 || (n1 == n0 && end.alpha().total() < start.alpha().total())
}

/// Breadth-first search over isomorphism classes. `visit` sees every newly
/// reached class and stops the search by returning `true`; the returned index
/// points into the node list.
fn bfs(
    start: &QuiverPair,
    bounds: SearchBounds,
    mut visit: impl FnMut(&QuiverPair, usize) -> bool,
) -> Result<(Vec<Node>, Option<usize>)> {
    let mut nodes = vec![Node { pair: start.clone(), depth: 0, parent: None }];
    let mut seen: HashSet<CanonicalKey> = HashSet::from([canonical_key(start)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if nodes[i].depth >= bounds.max_depth {
            continue;
        }
        for mv in admissible_moves(&nodes[i].pair) {
            let result = apply_move(&nodes[i].pair, mv, None)?;
            if result.pair.alpha().total() > bounds.max_total_dim {
                continue;
            }
            if !seen.insert(canonical_key(&result.pair)) {
                continue;
            }
            let depth = nodes[i].depth + 1;
            nodes.push(Node { pair: result.pair, depth, parent: Some((i, result.step)) });
            let j = nodes.len() - 1;
            if visit(&nodes[j].pair, depth) {
                return Ok((nodes, Some(j)));
            }
            queue.push_back(j);
        }
    }
    Ok((nodes, None))
}

fn path_to(nodes: &[Node], mut i: usize) -> Vec<ReductionStep> {
    let mut steps = Vec::new();
    while let Some((parent, step)) = &nodes[i].parent {
        steps.push(step.clone());
        i = *parent;
    }
    steps.reverse();
    steps
}

pub fn is_tau_sigma_minimal(
    pair: &QuiverPair,
    class: &ClassPredicate,
    max_depth: usize,
    max_total_dim: u64,
) -> Result<SearchReport> {
    let bounds = SearchBounds { max_depth, max_total_dim };
    check_start(pair, bounds)?;
    let (nodes, hit) = bfs(pair, bounds, |p, _| class.contains(p) && improves(pair, p))?;
    let verdict = match hit {
        Some(i) => Verdict::NotMinimal { witness: path_to(&nodes, i) },
        None => Verdict::MinimalUpToBound,
    };
    Ok(SearchReport { verdict, explored: nodes.len(), bounds_used: bounds })
}

/// Minimality at the default bounds.
pub fn is_tau_sigma_minimal_default(pair: &QuiverPair, class: &ClassPredicate) -> Result<SearchReport> {
    is_tau_sigma_minimal(pair, class, DEFAULT_MAX_DEPTH, default_max_total_dim(pair))
}

/// Every isomorphism class reachable within the bounds, the start included,
/// each with its BFS depth.
pub fn reachable_pairs(pair: &QuiverPair, max_depth: usize, max_total_dim: u64) -> Result<Vec<Reached>> {
    let bounds = SearchBounds { max_depth, max_total_dim };
    check_start(pair, bounds)?;
    let (nodes, _) = bfs(pair, bounds, |_, _| false)?;
    Ok(nodes.into_iter().map(|n| Reached { pair: n.pair, depth: n.depth }).collect())
}

/// Applies a witness sequence move by move, resolving vertices by name.
pub fn replay(pair: &QuiverPair, steps: &[ReductionStep]) -> Result<QuiverPair> {
    let mut cur = pair.clone();
    for step in steps {
        let mv = parse_move(&cur, &step.to_string())?;
        let next = apply_move(&cur, mv, None)?;
        if next.step.kind != step.kind {
            return Err(QuiverError::Precondition(format!("step {step} does not replay")));
        }
        cur = next.pair;
    }
    Ok(cur)
}

/// Whether `end` satisfies the endpoint conditions relative to `start`.
pub fn witnesses_non_minimality(start: &QuiverPair, end: &QuiverPair, class: &ClassPredicate) -> bool {
    class.contains(end) && improves(start, end)
}
