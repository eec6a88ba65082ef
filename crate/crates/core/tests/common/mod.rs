#![allow(dead_code)]

use std::path::PathBuf;

use quivermod_core::io::{read_pair_file, PairFile};
use quivermod_core::{DimVector, Quiver, QuiverPair, Weight};
use rand::seq::SliceRandom;
use rand::Rng;

pub const FIXTURES: [&str; 5] = ["fig1", "defn23", "kronecker", "k3", "dtilde4plus"];

pub fn fixture(name: &str) -> PairFile {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", &format!("{name}.json")].iter().collect();
    read_pair_file(&path).unwrap()
}

pub fn quiver(n: usize, edges: &[(usize, usize)]) -> Quiver {
    let names: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    let arrows = edges.iter().enumerate().map(|(k, &(s, t))| (format!("a{}", k + 1), names[s].clone(), names[t].clone()));
    Quiver::new(names.clone(), arrows).unwrap()
}

pub fn kronecker(m: usize) -> Quiver {
    quiver(2, &vec![(0, 1); m])
}

pub fn fig1_quiver() -> Quiver {
    quiver(3, &[(0, 2), (0, 2), (0, 1), (2, 1)])
}

pub fn dv(x: &[u64]) -> DimVector {
    DimVector(x.to_vec())
}

/// Every vector of length `n` with total at most `total`.
pub fn vectors_up_to_total(n: usize, total: u64) -> Vec<DimVector> {
    fn go(n: usize, left: u64, cur: &mut Vec<u64>, out: &mut Vec<DimVector>) {
        if cur.len() == n {
            out.push(DimVector(cur.clone()));
            return;
        }
        for x in 0..=left {
            cur.push(x);
            go(n, left - x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, total, &mut Vec::new(), &mut out);
    out
}

/// Every vector componentwise below `alpha`.
pub fn below(alpha: &DimVector) -> Vec<DimVector> {
    let mut out = vec![Vec::new()];
    for &a in &alpha.0 {
        out = out.into_iter().flat_map(|p: Vec<u64>| (0..=a).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    out.into_iter().map(DimVector).collect()
}

/// A random quiver on `2..=max_vertices` vertices with up to `max_arrows`
/// arrows, loops allowed when `loops`, and a sincere dimension vector.
pub fn random_pair<R: Rng>(rng: &mut R, max_vertices: usize, max_arrows: usize, max_entry: u64, loops: bool) -> QuiverPair {
    let n = rng.gen_range(2..=max_vertices);
    let m = rng.gen_range(1..=max_arrows);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let s = rng.gen_range(0..n);
        let t = rng.gen_range(0..n);
        if s != t || loops {
            edges.push((s, t));
        }
    }
    let alpha = (0..n).map(|_| rng.gen_range(1..=max_entry)).collect();
    QuiverPair::new(quiver(n, &edges), DimVector(alpha)).unwrap()
}

/// A random weight with `theta . alpha = 0`.
pub fn balanced_weight<R: Rng>(rng: &mut R, alpha: &DimVector) -> Weight {
    let n = alpha.0.len();
    let mut theta = vec![0i64; n];
    for _ in 0..rng.gen_range(1..=3) {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        let k = rng.gen_range(-2i64..=2);
        theta[i] += k * alpha.0[j] as i64;
        theta[j] -= k * alpha.0[i] as i64;
    }
    Weight(theta)
}

/// A uniformly random vertex permutation and arrow order applied to `pair`.
pub fn random_relabel<R: Rng>(rng: &mut R, pair: &QuiverPair) -> QuiverPair {
    let mut perm: Vec<usize> = (0..pair.quiver().vertex_count()).collect();
    perm.shuffle(rng);
    let mut order: Vec<usize> = (0..pair.quiver().arrow_count()).collect();
    order.shuffle(rng);
    pair.permuted(&perm, Some(&order)).unwrap()
}

pub mod strategies {
    use proptest::prelude::*;
    use quivermod_core::{DimVector, QuiverPair, Weight};

    use super::quiver;

    /// Pairs on `2..=max_vertices` vertices with up to `max_arrows` arrows.
    pub fn pair(max_vertices: usize, max_arrows: usize, max_entry: u64, loops: bool) -> impl Strategy<Value = QuiverPair> {
        (2..=max_vertices)
            .prop_flat_map(move |n| {
                (
                    proptest::collection::vec((0..n, 0..n), 0..=max_arrows),
                    proptest::collection::vec(1..=max_entry, n),
                    Just(n),
                )
            })
            .prop_map(move |(edges, alpha, n)| {
                let edges: Vec<(usize, usize)> = edges.into_iter().filter(|(s, t)| loops || s != t).collect();
                QuiverPair::new(quiver(n, &edges), DimVector(alpha)).unwrap()
            })
    }

    /// A pair together with a weight `theta` balanced against its alpha.
    pub fn balanced(max_vertices: usize, max_arrows: usize, max_entry: u64) -> impl Strategy<Value = (QuiverPair, Weight)> {
        pair(max_vertices, max_arrows, max_entry, false).prop_flat_map(|p| {
            let n = p.quiver().vertex_count();
            let moves = proptest::collection::vec((0..n, 0..n, -2i64..=2), 1..=3);
            (Just(p), moves).prop_map(|(p, moves)| {
                let a = &p.alpha().0;
                let mut t = vec![0i64; a.len()];
                for (i, j, k) in moves {
                    t[i] += k * a[j] as i64;
                    t[j] -= k * a[i] as i64;
                }
                (p, Weight(t))
            })
        })
    }

    pub fn vector(n: usize, max: i64) -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::vec(-max..=max, n)
    }
}
