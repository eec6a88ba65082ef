//! Independent check of generic embedding by random points over a prime field.
//!
//! For `gamma = alpha - beta`, a random `beta`-representation `S` and a random
//! `gamma`-representation `T` give the linear map
//! `(phi_v)_v -> (phi_{ta} S_a - T_a phi_{sa})_a` from
//! `⊕_v Hom(S_v, T_v)` to `⊕_a Hom(S_{sa}, T_{ta})`, whose cokernel is
//! `Ext(S, T)`. `beta ↪ alpha` iff this map is surjective at a generic point.
//! A surjective sample certifies the answer; failures on every sample answer
//! `false` with error probability bounded by the degree over the field size.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{QuiverError, Result};
use crate::quiver::{DimVector, Quiver};

/// The prime `2^31 - 1`.
pub const PRIME: u64 = 2_147_483_647;

/// Largest `|alpha|` accepted by [`brute_force_embeds`].
pub const BRUTE_FORCE_MAX_TOTAL: u64 = 8;

const SAMPLES: usize = 3;

pub fn brute_force_embeds(q: &Quiver, beta: &DimVector, alpha: &DimVector) -> Result<bool> {
    if alpha.total() > BRUTE_FORCE_MAX_TOTAL {
        return Err(QuiverError::ComplexityGuard(format!(
            "brute-force oracle accepts |alpha| <= {BRUTE_FORCE_MAX_TOTAL}"
        )));
    }
    brute_force_embeds_with(q, beta, alpha, SAMPLES, 0x5eed)
}

pub fn brute_force_embeds_with(
    q: &Quiver,
    beta: &DimVector,
    alpha: &DimVector,
    samples: usize,
    seed: u64,
) -> Result<bool> {
    let n = q.vertex_count();
    for v in [beta, alpha] {
        if v.0.len() != n {
            return Err(QuiverError::VertexMismatch { expected: n, got: v.0.len() });
        }
    }
    let gamma = alpha.checked_sub(beta).ok_or(QuiverError::NotBelow)?;
    if beta.is_zero() || gamma.is_zero() {
        return Ok(true);
    }
    let b: Vec<usize> = beta.0.iter().map(|&x| x as usize).collect();
    let g: Vec<usize> = gamma.0.iter().map(|&x| x as usize).collect();
    let rows: usize = q.arrows().iter().map(|a| b[a.source] * g[a.target]).sum();
    if rows == 0 {
        return Ok(true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples.max(1) {
        let m = ext_map(q, &b, &g, &mut rng);
        if rank_mod_p(m) == rows {
            return Ok(true);
        }
    }
    Ok(false)
}

type Matrix = Vec<Vec<u64>>;

fn random_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix {
    (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(0..PRIME)).collect()).collect()
}

/// Matrix of the map, rows indexed by `(arrow, i, k)` with `i < gamma(ta)`,
/// `k < beta(sa)`, columns by `(v, i, j)` with `i < gamma(v)`, `j < beta(v)`.
fn ext_map(q: &Quiver, b: &[usize], g: &[usize], rng: &mut ChaCha8Rng) -> Matrix {
    let arrows = q.arrows();
    // S_a: beta(ta) x beta(sa), T_a: gamma(ta) x gamma(sa)
    let s: Vec<Matrix> = arrows.iter().map(|a| random_matrix(b[a.target], b[a.source], rng)).collect();
    let t: Vec<Matrix> = arrows.iter().map(|a| random_matrix(g[a.target], g[a.source], rng)).collect();

    let mut col_offset = Vec::with_capacity(b.len());
    let mut cols = 0;
    for v in 0..b.len() {
        col_offset.push(cols);
        cols += g[v] * b[v];
    }
    let mut row_offset = Vec::with_capacity(arrows.len());
    let mut rows = 0;
    for a in arrows {
        row_offset.push(rows);
        rows += g[a.target] * b[a.source];
    }

    let mut m = vec![vec![0u64; cols]; rows];
    for (ai, a) in arrows.iter().enumerate() {
        let (sa, ta) = (a.source, a.target);
        let width = b[sa];
        // phi_{ta} S_a: entry (i, k) gets phi_ta[i][j] * S_a[j][k]
        for i in 0..g[ta] {
            for j in 0..b[ta] {
                let col = col_offset[ta] + i * b[ta] + j;
                for k in 0..width {
                    let row = row_offset[ai] + i * width + k;
                    m[row][col] = (m[row][col] + s[ai][j][k]) % PRIME;
                }
            }
        }
        // -T_a phi_{sa}: entry (r, j) gets -T_a[r][i] * phi_sa[i][j]
        for i in 0..g[sa] {
            for j in 0..b[sa] {
                let col = col_offset[sa] + i * b[sa] + j;
                for r in 0..g[ta] {
                    let row = row_offset[ai] + r * width + j;
                    m[row][col] = (m[row][col] + PRIME - t[ai][r][i]) % PRIME;
                }
            }
        }
    }
    m
}

fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1u64;
    base %= PRIME;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % PRIME;
        }
        base = base * base % PRIME;
        exp >>= 1;
    }
    acc
}

fn rank_mod_p(mut m: Matrix) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, p);
        let inv = pow_mod(m[rank][c], PRIME - 2);
        for x in m[rank][c..].iter_mut() {
            *x = *x * inv % PRIME;
        }
        let pivot = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == rank || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, &y) in row[c..].iter_mut().zip(&pivot[c..]) {
                *x = (*x + PRIME - f * y % PRIME) % PRIME;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}
