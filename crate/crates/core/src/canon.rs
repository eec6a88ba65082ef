//! Canonical forms for quiver-dimension vector pairs.
//!
//! Two pairs are isomorphic when some vertex bijection preserves `alpha` and
//! the number of arrows between every ordered pair of vertices. The canonical
//! key is the lexicographically smallest encoding `(n, alpha, multiplicity
//! matrix)` over all relabelings reachable by individualization-refinement.
//!
//! Refinement starts from `(alpha(v), loops, in-degree, out-degree)` and
//! iterates on neighbour colour multisets until stable. The search branches on
//! the first non-singleton cell; vertices that are interchangeable twins are
//! explored once.

use base64::engine::general_purpose::STANDARD;
use base64::Engine;

use crate::quiver::QuiverPair;

/// Opaque identifier of an isomorphism class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_base64(&self) -> String {
        STANDARD.encode(&self.0)
    }

    pub fn from_base64(s: &str) -> Option<CanonicalKey> {
        STANDARD.decode(s).ok().map(CanonicalKey)
    }
}

/// The canonical relabeling and its encoding.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    /// `order[k]` is the original vertex placed at canonical position `k`.
    pub order: Vec<usize>,
    pub encoding: Vec<u64>,
}

impl CanonicalForm {
    pub fn key(&self) -> CanonicalKey {
        let mut bytes = Vec::with_capacity(self.encoding.len() * 8);
        for x in &self.encoding {
            bytes.extend_from_slice(&x.to_be_bytes());
        }
        CanonicalKey(bytes)
    }
}

pub fn canonical_key(pair: &QuiverPair) -> CanonicalKey {
    canonical_form(pair).key()
}

pub fn canonical_form(pair: &QuiverPair) -> CanonicalForm {
    let graph = Graph::new(pair);
    let colors = graph.initial_colors();
    let mut best: Option<CanonicalForm> = None;
    graph.search(colors, &mut best);
    best.expect("search always reaches a leaf")
}

struct Graph {
    n: usize,
    alpha: Vec<u64>,
    mult: Vec<Vec<u64>>,
}

impl Graph {
    fn new(pair: &QuiverPair) -> Self {
        let q = pair.quiver();
        let mult = q
            .multiplicity_matrix()
            .into_iter()
            .map(|row| row.into_iter().map(|m| m as u64).collect())
            .collect();
        Graph { n: q.vertex_count(), alpha: pair.alpha().0.clone(), mult }
    }

    fn initial_colors(&self) -> Vec<usize> {
        let sigs: Vec<(u64, u64, u64, u64)> = (0..self.n)
            .map(|v| {
                let loops = self.mult[v][v];
                let out: u64 = (0..self.n).filter(|&w| w != v).map(|w| self.mult[v][w]).sum();
                let inc: u64 = (0..self.n).filter(|&w| w != v).map(|w| self.mult[w][v]).sum();
                (self.alpha[v], loops, inc, out)
            })
            .collect();
        rank(&sigs)
    }

    fn refine(&self, mut colors: Vec<usize>) -> Vec<usize> {
        let mut cells = count_distinct(&colors);
        loop {
            let sigs: Vec<(usize, Vec<(usize, u64)>, Vec<(usize, u64)>)> = (0..self.n)
                .map(|v| {
                    let mut out: Vec<(usize, u64)> = (0..self.n)
                        .filter(|&w| w != v && self.mult[v][w] > 0)
                        .map(|w| (colors[w], self.mult[v][w]))
                        .collect();
                    let mut inc: Vec<(usize, u64)> = (0..self.n)
                        .filter(|&w| w != v && self.mult[w][v] > 0)
                        .map(|w| (colors[w], self.mult[w][v]))
                        .collect();
                    out.sort_unstable();
                    inc.sort_unstable();
                    (colors[v], out, inc)
                })
                .collect();
            colors = rank(&sigs);
            let now = count_distinct(&colors);
            if now == cells {
                return colors;
            }
            cells = now;
        }
    }

    fn twins(&self, u: usize, v: usize) -> bool {
        if self.alpha[u] != self.alpha[v] || self.mult[u][u] != self.mult[v][v] || self.mult[u][v] != self.mult[v][u] {
            return false;
        }
        (0..self.n)
            .filter(|&w| w != u && w != v)
            .all(|w| self.mult[u][w] == self.mult[v][w] && self.mult[w][u] == self.mult[w][v])
    }

    fn search(&self, colors: Vec<usize>, best: &mut Option<CanonicalForm>) {
        let colors = self.refine(colors);
        let mut counts = vec![0usize; self.n];
        for &c in &colors {
            counts[c] += 1;
        }
        let target = match (0..self.n).find(|&c| counts[c] > 1) {
            None => {
                self.leaf(&colors, best);
                return;
            }
            Some(c) => c,
        };
        let cell: Vec<usize> = (0..self.n).filter(|&v| colors[v] == target).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            if explored.iter().any(|&u| self.twins(u, v)) {
                continue;
            }
            explored.push(v);
            let next: Vec<usize> = colors
                .iter()
                .enumerate()
                .map(|(u, &c)| 2 * c + usize::from(c == target && u != v))
                .collect();
            self.search(next, best);
        }
    }

    fn leaf(&self, colors: &[usize], best: &mut Option<CanonicalForm>) {
        let mut order = vec![0; self.n];
        for (v, &c) in colors.iter().enumerate() {
            order[c] = v;
        }
        let mut encoding = Vec::with_capacity(1 + self.n + self.n * self.n);
        encoding.push(self.n as u64);
        encoding.extend(order.iter().map(|&v| self.alpha[v]));
        for &i in &order {
            for &j in &order {
                encoding.push(self.mult[i][j]);
            }
        }
        if best.as_ref().is_none_or(|b| encoding < b.encoding) {
            *best = Some(CanonicalForm { order, encoding });
        }
    }
}

/// Replaces each item by the rank of its value among the distinct values.
fn rank<T: Ord + Clone>(items: &[T]) -> Vec<usize> {
    let mut distinct: Vec<T> = items.to_vec();
    distinct.sort();
    distinct.dedup();
    items.iter().map(|x| distinct.binary_search(x).expect("present")).collect()
}

fn count_distinct(colors: &[usize]) -> usize {
    let mut seen = colors.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}
