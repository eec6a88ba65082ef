//! Stability of dimension vectors.
//!
//! `beta ↪ alpha` ("every alpha-dimensional representation has a
//! beta-dimensional subrepresentation") is decided by Schofield's recursion:
//! `beta ↪ alpha` iff `<beta', alpha - beta> >= 0` for every `beta' ↪ beta`,
//! with `0 ↪ gamma` and `gamma ↪ gamma` as base cases. The recursion only
//! descends to strictly smaller vectors, so it terminates.
//!
//! King's criterion then reads: alpha is theta-semistable iff `theta·alpha = 0`
//! and `theta·beta >= 0` for every `beta ↪ alpha`; stable iff additionally
//! `theta·beta > 0` for every such `beta` other than `0` and `alpha`.
//! Characteristic zero is assumed throughout.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use serde::Serialize;

use crate::error::{QuiverError, Result};
use crate::forms::expected_dimension;
use crate::quiver::{DimVector, Quiver, QuiverPair, Weight};

/// Maximum number of candidate subdimension vectors `prod (alpha(v) + 1)`
/// examined without `force`.
pub const CANDIDATE_LIMIT: u128 = 10_000_000;

/// Memoized generic-embedding decisions for one quiver.
///
/// Entries are keyed by `(beta, alpha - beta)`. The tables are guarded by
/// read-write locks, so one oracle can serve concurrent queries; locks are
/// never held across recursive calls.
#[derive(Debug)]
pub struct EmbeddingOracle {
    quiver: Quiver,
    memo: RwLock<HashMap<(Vec<u64>, Vec<u64>), bool>>,
    subs: RwLock<HashMap<Vec<u64>, Arc<Vec<Vec<u64>>>>>,
}

impl EmbeddingOracle {
    pub fn new(quiver: &Quiver) -> Self {
        EmbeddingOracle { quiver: quiver.clone(), memo: RwLock::default(), subs: RwLock::default() }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    /// Number of cached `(beta, alpha - beta)` decisions.
    pub fn cache_len(&self) -> usize {
        self.memo.read().expect("lock").len()
    }

    /// Does every `alpha`-dimensional representation have a `beta`-dimensional
    /// subrepresentation?
    pub fn embeds(&self, beta: &DimVector, alpha: &DimVector) -> Result<bool> {
        let n = self.quiver.vertex_count();
        for v in [beta, alpha] {
            if v.0.len() != n {
                return Err(QuiverError::VertexMismatch { expected: n, got: v.0.len() });
            }
        }
        if !beta.le(alpha) {
            return Err(QuiverError::NotBelow);
        }
        Ok(self.embeds_raw(&beta.0, &alpha.0))
    }

    fn embeds_raw(&self, beta: &[u64], alpha: &[u64]) -> bool {
        if beta.iter().all(|&x| x == 0) || beta == alpha {
            return true;
        }
        let gamma: Vec<u64> = alpha.iter().zip(beta).map(|(a, b)| a - b).collect();
        let key = (beta.to_vec(), gamma);
        if let Some(&hit) = self.memo.read().expect("lock").get(&key) {
            return hit;
        }
        let subs = self.embeddable_subs(beta);
        let result = subs.iter().all(|sub| ringel(&self.quiver, sub, &key.1) >= 0);
        self.memo.write().expect("lock").insert(key, result);
        result
    }

    /// Every `beta' <= gamma` with `beta' ↪ gamma`.
    fn embeddable_subs(&self, gamma: &[u64]) -> Arc<Vec<Vec<u64>>> {
        if let Some(hit) = self.subs.read().expect("lock").get(gamma) {
            return Arc::clone(hit);
        }
        let list: Vec<Vec<u64>> = below(gamma).filter(|sub| self.embeds_raw(sub, gamma)).collect();
        let list = Arc::new(list);
        self.subs.write().expect("lock").insert(gamma.to_vec(), Arc::clone(&list));
        list
    }
}

/// Decides `beta ↪ alpha` with a fresh oracle.
pub fn generically_embeds(q: &Quiver, beta: &DimVector, alpha: &DimVector) -> Result<bool> {
    EmbeddingOracle::new(q).embeds(beta, alpha)
}

/// The same recursion without any memoization; exponential, for small inputs.
pub fn generically_embeds_unmemoized(q: &Quiver, beta: &DimVector, alpha: &DimVector) -> Result<bool> {
    if !beta.le(alpha) {
        return Err(QuiverError::NotBelow);
    }
    fn go(q: &Quiver, beta: &[u64], alpha: &[u64]) -> bool {
        if beta.iter().all(|&x| x == 0) || beta == alpha {
            return true;
        }
        let gamma: Vec<u64> = alpha.iter().zip(beta).map(|(a, b)| a - b).collect();
        below(beta).all(|sub| !go(q, &sub, beta) || ringel(q, &sub, &gamma) >= 0)
    }
    Ok(go(q, &beta.0, &alpha.0))
}

fn ringel(q: &Quiver, a: &[u64], b: &[u64]) -> i64 {
    let diag: i64 = a.iter().zip(b).map(|(x, y)| (x * y) as i64).sum();
    let off: i64 = q.arrows().iter().map(|arr| (a[arr.source] * b[arr.target]) as i64).sum();
    diag - off
}

/// All vectors componentwise below `bound`, in mixed-radix order.
fn below(bound: &[u64]) -> impl Iterator<Item = Vec<u64>> + '_ {
    let mut cur: Option<Vec<u64>> = Some(vec![0; bound.len()]);
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let mut next = out.clone();
        let mut i = 0;
        loop {
            if i == next.len() {
                cur = None;
                break;
            }
            if next[i] < bound[i] {
                next[i] += 1;
                cur = Some(next);
                break;
            }
            next[i] = 0;
            i += 1;
        }
        Some(out)
    })
}

/// Every `beta <= alpha`, ordered by total dimension and then lexicographically.
pub fn subdimension_vectors(alpha: &DimVector) -> Vec<DimVector> {
    let mut all: Vec<DimVector> = below(&alpha.0).map(DimVector).collect();
    all.sort_by(|x, y| (x.total(), &x.0).cmp(&(y.total(), &y.0)));
    all
}

/// Number of vectors `beta <= alpha`.
pub fn candidate_count(alpha: &DimVector) -> u128 {
    alpha.0.iter().map(|&x| u128::from(x) + 1).product()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VerdictTag {
    NotSemistable,
    SemistableNotStable,
    Stable,
}

/// Stability of a dimension vector with respect to a weight.
///
/// `witness` is the first violating `beta` in (total, lexicographic) order:
/// a generic subdimension vector with `theta·beta < 0` for `NotSemistable` and
/// `theta·beta = 0` for `SemistableNotStable`. When `theta·alpha != 0` and no
/// proper subdimension vector violates, `NotSemistable` carries no witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityVerdict {
    pub tag: VerdictTag,
    pub witness: Option<DimVector>,
}

impl StabilityVerdict {
    pub fn is_stable(&self) -> bool {
        self.tag == VerdictTag::Stable
    }

    pub fn is_semistable(&self) -> bool {
        self.tag != VerdictTag::NotSemistable
    }
}

pub fn stability_verdict(pair: &QuiverPair, theta: &Weight) -> Result<StabilityVerdict> {
    stability_verdict_with(&EmbeddingOracle::new(pair.quiver()), pair, theta, false)
}

/// Stability verdict using a caller-owned oracle; `force` lifts the candidate limit.
pub fn stability_verdict_with(
    oracle: &EmbeddingOracle,
    pair: &QuiverPair,
    theta: &Weight,
    force: bool,
) -> Result<StabilityVerdict> {
    pair.check_weight(theta)?;
    if oracle.quiver() != pair.quiver() {
        return Err(QuiverError::Precondition("oracle was built for a different quiver".into()));
    }
    let alpha = pair.alpha();
    if alpha.is_zero() {
        return Err(QuiverError::EmptySupport);
    }
    let count = candidate_count(alpha);
    if count > CANDIDATE_LIMIT && !force {
        return Err(QuiverError::ComplexityGuard(format!(
            "{count} candidate subdimension vectors exceed the limit of {CANDIDATE_LIMIT}; pass --force to override"
        )));
    }
    let balanced = theta.pair(alpha)? == 0;
    let mut zero_witness: Option<DimVector> = None;
    for beta in subdimension_vectors(alpha) {
        if beta.is_zero() || &beta == alpha {
            continue;
        }
        let value = theta.pair(&beta)?;
        if value > 0 || (value == 0 && (zero_witness.is_some() || !balanced)) {
            continue;
        }
        if !oracle.embeds(&beta, alpha)? {
            continue;
        }
        if value < 0 {
            return Ok(StabilityVerdict { tag: VerdictTag::NotSemistable, witness: Some(beta) });
        }
        zero_witness = Some(beta);
    }
    Ok(match (balanced, zero_witness) {
        (false, _) => StabilityVerdict { tag: VerdictTag::NotSemistable, witness: None },
        (true, Some(w)) => StabilityVerdict { tag: VerdictTag::SemistableNotStable, witness: Some(w) },
        (true, None) => StabilityVerdict { tag: VerdictTag::Stable, witness: None },
    })
}

/// `1 - <alpha,alpha>` for a theta-stable alpha.
pub fn moduli_dimension(pair: &QuiverPair, theta: &Weight) -> Result<u64> {
    let verdict = stability_verdict(pair, theta)?;
    moduli_dimension_for(pair, &verdict)
}

/// Moduli dimension from an already computed verdict.
pub fn moduli_dimension_for(pair: &QuiverPair, verdict: &StabilityVerdict) -> Result<u64> {
    if !verdict.is_stable() {
        return Err(QuiverError::Precondition("alpha is not theta-stable".into()));
    }
    u64::try_from(expected_dimension(pair)?).map_err(|_| QuiverError::Overflow)
}

/// The canonical weight `theta(v) = <e_v, alpha> - <alpha, e_v>`; it satisfies
/// `theta·alpha = 0`, and alpha is stable for it exactly when alpha is a Schur root.
pub fn canonical_weight(pair: &QuiverPair) -> Weight {
    let n = pair.quiver().vertex_count();
    Weight(
        (0..n)
            .map(|v| {
                // <e_v,alpha> - <alpha,e_v> = (alpha(v) - out) - (alpha(v) - in)
                pair.in_sum(v) as i64 - pair.out_sum(v) as i64
            })
            .collect(),
    )
}
