//! Enumeration of connected wild sincere pairs in the fundamental set with a
//! fixed value of `d = 1 - <alpha,alpha>`.
//!
//! Quivers are generated as arrow-multiplicity matrices (loops included) up to
//! the arrow limit. Since every relabeling of a matrix is generated too, the
//! dimension vectors can be restricted to nonincreasing sequences. Survivors of
//! the filters are deduplicated by canonical key before the minimality search.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::canon::{canonical_form, CanonicalKey};
use crate::classification::{analyze_fundamental, classify_graph, FundamentalAnalysis};
use crate::error::{QuiverError, Result};
use crate::forms::{expected_dimension, in_fundamental_set};
use crate::quiver::{DimVector, Quiver, QuiverPair};
use crate::search::{default_max_total_dim, is_tau_sigma_minimal, ClassPredicate, SearchReport, DEFAULT_MAX_DEPTH};

/// Largest number of (matrix, dimension vector) candidates generated without `force`.
pub const CANDIDATE_LIMIT: u128 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EnumerationLimits {
    pub max_vertices: usize,
    pub max_arrows: usize,
    pub max_entry: u64,
}

/// Bounds for the per-row minimality search. `None` fields take the defaults
/// (depth 8, total dimension `8|alpha|`).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchOptions {
    pub max_depth: Option<usize>,
    pub max_total_dim: Option<u64>,
    pub force: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalysisSummary {
    pub tits: i64,
    pub q_minus: usize,
    pub tied: usize,
    pub free: usize,
    pub kappa: usize,
    pub mu: Option<u64>,
}

impl From<&FundamentalAnalysis> for AnalysisSummary {
    fn from(a: &FundamentalAnalysis) -> Self {
        AnalysisSummary {
            tits: a.tits,
            q_minus: a.q_minus.len(),
            tied: a.tied.len(),
            free: a.free.len(),
            kappa: a.kappa,
            mu: a.mu,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ClassificationRow {
    pub canonical_key: CanonicalKey,
    /// The canonical representative, vertices named `v1, v2, ...`.
    pub pair: QuiverPair,
    pub d: i64,
    pub minimal_verdict: SearchReport,
    pub analysis: AnalysisSummary,
}

/// Number of `n x n` nonnegative integer matrices with entry sum at most `m`.
fn matrix_count(n: usize, m: usize) -> u128 {
    binomial((n * n + m) as u128, m as u128)
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k.min(n));
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Upper estimate of the candidates generated for `limits`.
pub fn candidate_estimate(limits: &EnumerationLimits) -> u128 {
    (1..=limits.max_vertices)
        .map(|n| {
            let vectors = binomial(limits.max_entry as u128 + n as u128 - 1, n as u128);
            matrix_count(n, limits.max_arrows).saturating_mul(vectors)
        })
        .fold(0u128, u128::saturating_add)
}

pub(crate) fn check_limits(limits: &EnumerationLimits, force: bool) -> Result<()> {
    if limits.max_vertices == 0 || limits.max_entry == 0 {
        return Err(QuiverError::Precondition("limits must be positive".into()));
    }
    let estimate = candidate_estimate(limits);
    if estimate > CANDIDATE_LIMIT && !force {
        return Err(QuiverError::ComplexityGuard(format!(
            "about {estimate} candidates exceed the limit of {CANDIDATE_LIMIT}; narrow the limits or pass --force"
        )));
    }
    Ok(())
}

/// All `n x n` multiplicity matrices with at most `max_arrows` arrows whose
/// underlying graph is connected.
pub fn connected_matrices(n: usize, max_arrows: usize) -> Vec<Vec<Vec<usize>>> {
    let cells = n * n;
    let mut out = Vec::new();
    let mut flat = vec![0usize; cells];
    fn go(i: usize, left: usize, n: usize, flat: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == flat.len() {
            let m: Vec<Vec<usize>> = flat.chunks(n).map(<[usize]>::to_vec).collect();
            if connected(&m) {
                out.push(m);
            }
            return;
        }
        for k in 0..=left {
            flat[i] = k;
            go(i + 1, left - k, n, flat, out);
        }
        flat[i] = 0;
    }
    go(0, max_arrows, n, &mut flat, &mut out);
    out
}

fn connected(m: &[Vec<usize>]) -> bool {
    let n = m.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for w in 0..n {
            if !seen[w] && (m[v][w] > 0 || m[w][v] > 0) {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Nonincreasing sequences of length `n` with entries in `1..=max_entry`.
pub fn nonincreasing_vectors(n: usize, max_entry: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn go(n: usize, cap: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for x in (1..=cap).rev() {
            cur.push(x);
            go(n, x, cur, out);
            cur.pop();
        }
    }
    go(n, max_entry, &mut cur, &mut out);
    out
}

/// `(alpha, e_v) <= 0` at every vertex and `1 - <alpha,alpha> = d`, computed
/// from a multiplicity matrix.
pub fn matrix_prefilter(m: &[Vec<usize>], alpha: &[u64], d: i64) -> bool {
    let n = m.len();
    let mut tits: i64 = 0;
    for v in 0..n {
        let a = alpha[v] as i64;
        let mut adjacent = 0i64;
        for w in 0..n {
            adjacent += (m[v][w] + m[w][v]) as i64 * alpha[w] as i64;
            tits -= m[v][w] as i64 * a * alpha[w] as i64;
        }
        if 2 * a > adjacent {
            return false;
        }
        tits += a * a;
    }
    1 - tits == d
}

/// The defining filters: connected, wild, sincere, in the fundamental set, with the given `d`.
pub fn is_fundamental_candidate(pair: &QuiverPair, d: i64) -> bool {
    pair.is_sincere()
        && pair.quiver().is_connected()
        && in_fundamental_set(pair)
        && (expected_dimension(pair) == Ok(d))
        && classify_graph(pair.quiver()).is_ok_and(|c| c.is_wild())
}

fn numbered_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("v{i}")).collect()
}

/// The pair with vertices `v1..vn` built from a multiplicity matrix.
pub fn pair_from_matrix(m: &[Vec<usize>], alpha: Vec<u64>) -> Result<QuiverPair> {
    let q = Quiver::from_multiplicities(m)?;
    let arrows = q.arrows().to_vec();
    QuiverPair::new(Quiver::from_arrows(numbered_names(m.len()), arrows)?, DimVector(alpha))
}

/// Relabels `pair` into its canonical vertex order.
pub fn canonical_representative(pair: &QuiverPair) -> Result<(CanonicalKey, QuiverPair)> {
    let form = canonical_form(pair);
    let n = pair.quiver().vertex_count();
    let mut matrix = vec![vec![0usize; n]; n];
    let mult = pair.quiver().multiplicity_matrix();
    for (i, &oi) in form.order.iter().enumerate() {
        for (j, &oj) in form.order.iter().enumerate() {
            matrix[i][j] = mult[oi][oj];
        }
    }
    let alpha = form.order.iter().map(|&v| pair.alpha().0[v]).collect();
    Ok((form.key(), pair_from_matrix(&matrix, alpha)?))
}

/// Candidate pairs of the window that pass `keep`, one per isomorphism class,
/// in canonical-key order. Generation runs in parallel on the current rayon
/// pool; each vertex count is handled independently and merged by key.
pub fn distinct_pairs(
    limits: &EnumerationLimits,
    force: bool,
    keep: impl Fn(&QuiverPair) -> bool + Sync,
) -> Result<Vec<(CanonicalKey, QuiverPair)>> {
    distinct_pairs_prefiltered(limits, force, |_, _| true, keep)
}

/// As [`distinct_pairs`], with a cheap test on the multiplicity matrix and
/// dimension vector that runs before any pair is built.
pub fn distinct_pairs_prefiltered(
    limits: &EnumerationLimits,
    force: bool,
    pre: impl Fn(&[Vec<usize>], &[u64]) -> bool + Sync,
    keep: impl Fn(&QuiverPair) -> bool + Sync,
) -> Result<Vec<(CanonicalKey, QuiverPair)>> {
    check_limits(limits, force)?;
    let per_size: Vec<Result<BTreeMap<CanonicalKey, QuiverPair>>> = (1..=limits.max_vertices)
        .into_par_iter()
        .map(|n| {
            let vectors = nonincreasing_vectors(n, limits.max_entry);
            connected_matrices(n, limits.max_arrows)
                .par_iter()
                .map(|m| {
                    let mut local = BTreeMap::new();
                    for alpha in vectors.iter().filter(|a| pre(m, a)) {
                        let pair = pair_from_matrix(m, alpha.clone())?;
                        if keep(&pair) {
                            let (key, rep) = canonical_representative(&pair)?;
                            local.entry(key).or_insert(rep);
                        }
                    }
                    Ok(local)
                })
                .try_reduce(BTreeMap::new, |mut a, b| {
                    a.extend(b);
                    Ok(a)
                })
        })
        .collect();
    let mut merged = BTreeMap::new();
    for part in per_size {
        merged.extend(part?);
    }
    Ok(merged.into_iter().collect())
}

pub fn enumerate_fundamental(d: i64, limits: &EnumerationLimits) -> Result<Vec<ClassificationRow>> {
    enumerate_fundamental_with(d, limits, &SearchOptions::default())
}

pub fn enumerate_fundamental_with(
    d: i64,
    limits: &EnumerationLimits,
    options: &SearchOptions,
) -> Result<Vec<ClassificationRow>> {
    if d < 2 {
        return Err(QuiverError::Precondition("d must be at least 2".into()));
    }
    let pairs = distinct_pairs_prefiltered(
        limits,
        options.force,
        |m, a| matrix_prefilter(m, a, d),
        |p| is_fundamental_candidate(p, d),
    )?;
    let class = ClassPredicate::FundamentalWildSincere;
    pairs
        .into_par_iter()
        .map(|(key, pair)| {
            let depth = options.max_depth.unwrap_or(DEFAULT_MAX_DEPTH);
            let cap = options.max_total_dim.unwrap_or_else(|| default_max_total_dim(&pair));
            let minimal_verdict = is_tau_sigma_minimal(&pair, &class, depth, cap)?;
            let analysis = AnalysisSummary::from(&analyze_fundamental(&pair)?);
            Ok(ClassificationRow { canonical_key: key, d, pair, minimal_verdict, analysis })
        })
        .collect()
}
