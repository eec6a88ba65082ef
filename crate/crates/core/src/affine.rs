//! Pairs relevant to affine quotients (weight zero).

use crate::canon::CanonicalKey;
use crate::enumerate::{distinct_pairs, EnumerationLimits};
use crate::error::{QuiverError, Result};
use crate::forms::{expected_dimension, ringel_alpha_unit, ringel_unit_alpha};
use crate::quiver::QuiverPair;
use crate::search::is_affine_irreducible;

/// Whether the general representation of dimension `alpha` is simple.
///
/// On the support of `alpha`: a single vertex without loops needs `alpha = 1`;
/// an oriented cycle (the one-loop quiver included) needs `alpha` constant 1;
/// otherwise the support must be strongly connected with `<alpha, e_v> <= 0`
/// and `<e_v, alpha> <= 0` at every vertex.
pub fn is_simple_dimvector(pair: &QuiverPair) -> bool {
    let Ok((support, _)) = pair.support_restrict(None) else { return false };
    let q = support.quiver();
    let alpha = &support.alpha().0;
    if !q.is_strongly_connected() {
        return false;
    }
    if q.arrow_count() == 0 {
        return q.vertex_count() == 1 && alpha[0] == 1;
    }
    let is_cycle = q.arrow_count() == q.vertex_count() && (0..q.vertex_count()).all(|v| q.in_degree(v) == 1 && q.out_degree(v) == 1);
    if is_cycle {
        return alpha.iter().all(|&a| a == 1);
    }
    (0..q.vertex_count()).all(|v| ringel_alpha_unit(&support, v) <= 0 && ringel_unit_alpha(&support, v) <= 0)
}

/// The vertex-removing reduction applies at `v` when `<alpha, e_v> >= 0` or
/// `<e_v, alpha> >= 0`.
pub fn affine_reduction_applicable(pair: &QuiverPair, v: usize) -> Result<bool> {
    if v >= pair.quiver().vertex_count() {
        return Err(QuiverError::Precondition(format!("vertex index {v} out of range")));
    }
    Ok(ringel_alpha_unit(pair, v) >= 0 || ringel_unit_alpha(pair, v) >= 0)
}

/// Window implied by `d`: `|Q0| <= d - 1`, `|alpha| <= d - 1`, `|Q1| <= 2(d - 1)`.
pub fn affine_envelope(d: i64) -> Option<EnumerationLimits> {
    let e = usize::try_from(d - 1).ok().filter(|&e| e > 0)?;
    Some(EnumerationLimits { max_vertices: e, max_arrows: 2 * e, max_entry: e as u64 })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineRow {
    pub canonical_key: CanonicalKey,
    pub pair: QuiverPair,
    pub d: i64,
}

/// Strongly connected sincere pairs other than the one-loop quiver, with
/// `<alpha, e_v> < 0` and `<e_v, alpha> < 0` everywhere and `1 - <alpha,alpha> = d`,
/// inside the envelope for `d` intersected with `limits`.
pub fn enumerate_affine(d: i64, limits: Option<&EnumerationLimits>, force: bool) -> Result<Vec<AffineRow>> {
    if d < 1 {
        return Err(QuiverError::Precondition("d must be positive".into()));
    }
    let Some(env) = affine_envelope(d) else { return Ok(Vec::new()) };
    let window = match limits {
        Some(l) => EnumerationLimits {
            max_vertices: env.max_vertices.min(l.max_vertices),
            max_arrows: env.max_arrows.min(l.max_arrows),
            max_entry: env.max_entry.min(l.max_entry),
        },
        None => env,
    };
    if window.max_vertices == 0 || window.max_entry == 0 {
        return Ok(Vec::new());
    }
    let total_cap = env.max_entry;
    let pairs = distinct_pairs(&window, force, |p| {
        p.alpha().total() <= total_cap && is_affine_irreducible(p) && (expected_dimension(p) == Ok(d))
    })?;
    Ok(pairs.into_iter().map(|(canonical_key, pair)| AffineRow { canonical_key, pair, d }).collect())
}
