//! Graph types (Dynkin, extended Dynkin, wild), fundamental-set structure and
//! root-type dispatch.
//!
//! Graph recognition is structural: loops and multiplicities first, then the
//! tree / single-cycle shape and the arm lengths at branch vertices. Nothing
//! is decided through eigenvalues.
//!
//! Loop convention: the one-vertex one-loop quiver is the extended Dynkin
//! graph `A~0` (its Tits form vanishes identically); any other loop makes the
//! graph wild.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{QuiverError, Result};
use crate::forms::{cartan_with_unit, in_fundamental_set, pair_tits};
use crate::quiver::{Quiver, QuiverPair};

/// ADE label with its rank (number of vertices for Dynkin, one less for extended).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AdeType {
    A(usize),
    D(usize),
    E6,
    E7,
    E8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphClass {
    Dynkin(AdeType),
    ExtendedDynkin(AdeType),
    Wild,
}

impl GraphClass {
    pub fn is_dynkin(&self) -> bool {
        matches!(self, GraphClass::Dynkin(_))
    }

    pub fn is_wild(&self) -> bool {
        matches!(self, GraphClass::Wild)
    }
}

impl fmt::Display for AdeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdeType::A(n) => write!(f, "A{n}"),
            AdeType::D(n) => write!(f, "D{n}"),
            AdeType::E6 => write!(f, "E6"),
            AdeType::E7 => write!(f, "E7"),
            AdeType::E8 => write!(f, "E8"),
        }
    }
}

/// Dynkin types print as `A3`, `E6`; extended ones as `A~1`, `D~4`.
impl fmt::Display for GraphClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphClass::Dynkin(t) => write!(f, "{t}"),
            GraphClass::ExtendedDynkin(t) => {
                let s = t.to_string();
                write!(f, "{}~{}", &s[..1], &s[1..])
            }
            GraphClass::Wild => write!(f, "Wild"),
        }
    }
}

impl Serialize for GraphClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Classifies the underlying graph of a connected quiver.
pub fn classify_graph(q: &Quiver) -> Result<GraphClass> {
    if !q.is_connected() {
        return Err(QuiverError::Disconnected);
    }
    let n = q.vertex_count();
    let loops: usize = (0..n).map(|v| q.loops_at(v)).sum();
    if loops > 0 {
        return Ok(if n == 1 && loops == 1 { GraphClass::ExtendedDynkin(AdeType::A(0)) } else { GraphClass::Wild });
    }
    let m = q.multiplicity_matrix();
    let mut edges = 0;
    let mut max_mult = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            let u = m[i][j] + m[j][i];
            edges += u;
            max_mult = max_mult.max(u);
        }
    }
    if max_mult >= 2 {
        return Ok(if n == 2 && edges == 2 { GraphClass::ExtendedDynkin(AdeType::A(1)) } else { GraphClass::Wild });
    }
    if n == 1 {
        return Ok(GraphClass::Dynkin(AdeType::A(1)));
    }
    let adj = q.undirected_adjacency();
    let deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    if edges == n {
        // connected with exactly one cycle
        return Ok(if deg.iter().all(|&d| d == 2) { GraphClass::ExtendedDynkin(AdeType::A(n - 1)) } else { GraphClass::Wild });
    }
    if edges != n - 1 {
        return Ok(GraphClass::Wild);
    }
    classify_tree(&adj, &deg)
}

fn classify_tree(adj: &[Vec<usize>], deg: &[usize]) -> Result<GraphClass> {
    let n = adj.len();
    let branch: Vec<usize> = (0..n).filter(|&v| deg[v] >= 3).collect();
    if branch.is_empty() {
        return Ok(GraphClass::Dynkin(AdeType::A(n)));
    }
    if branch.len() == 1 {
        let c = branch[0];
        if deg[c] == 4 {
            return Ok(if n == 5 { GraphClass::ExtendedDynkin(AdeType::D(4)) } else { GraphClass::Wild });
        }
        if deg[c] > 4 {
            return Ok(GraphClass::Wild);
        }
        let mut arms: Vec<usize> = adj[c].iter().map(|&w| arm_length(adj, c, w)).collect();
        arms.sort_unstable();
        let class = match (arms[0], arms[1], arms[2]) {
            (1, 1, r) => GraphClass::Dynkin(AdeType::D(r + 3)),
            (1, 2, 2) => GraphClass::Dynkin(AdeType::E6),
            (1, 2, 3) => GraphClass::Dynkin(AdeType::E7),
            (1, 2, 4) => GraphClass::Dynkin(AdeType::E8),
            (2, 2, 2) => GraphClass::ExtendedDynkin(AdeType::E6),
            (1, 3, 3) => GraphClass::ExtendedDynkin(AdeType::E7),
            (1, 2, 5) => GraphClass::ExtendedDynkin(AdeType::E8),
            _ => GraphClass::Wild,
        };
        return Ok(class);
    }
    if branch.len() == 2 && branch.iter().all(|&c| deg[c] == 3) {
        let forks = branch.iter().all(|&c| adj[c].iter().filter(|&&w| deg[w] == 1).count() >= 2);
        if forks {
            return Ok(GraphClass::ExtendedDynkin(AdeType::D(n - 1)));
        }
    }
    Ok(GraphClass::Wild)
}

/// Number of vertices on the arm leaving `from` through `first`, in a tree
/// whose only branch vertex is `from`.
fn arm_length(adj: &[Vec<usize>], from: usize, first: usize) -> usize {
    let (mut prev, mut cur, mut len) = (from, first, 1);
    loop {
        match adj[cur].iter().find(|&&w| w != prev) {
            Some(&next) => {
                prev = cur;
                cur = next;
                len += 1;
            }
            None => return len,
        }
    }
}

/// One piece `Delta` of the tied-vertex decomposition of the zero-Cartan part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaSubgraph {
    pub vertices: Vec<usize>,
    pub class: GraphClass,
    /// Largest `alpha` over the tied vertices of this piece.
    pub mu: Option<u64>,
}

/// Structure of a wild connected sincere pair with alpha in the fundamental set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalAnalysis {
    /// `(alpha, e_v)` for every vertex.
    pub cartan_values: Vec<i64>,
    pub tits: i64,
    /// Vertices with `(alpha, e_v) < 0`.
    pub q_minus: Vec<usize>,
    /// Components of the full subgraph on vertices with `(alpha, e_v) = 0`.
    pub q_plus_components: Vec<(Vec<usize>, GraphClass)>,
    pub tied: Vec<usize>,
    pub free: Vec<usize>,
    pub delta_subgraphs: Vec<DeltaSubgraph>,
    pub kappa: usize,
    pub mu: Option<u64>,
}

impl FundamentalAnalysis {
    pub fn q_plus(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.q_plus_components.iter().flat_map(|(c, _)| c.iter().copied()).collect();
        all.sort_unstable();
        all
    }
}

/// Computes the fundamental-set structure of `pair`.
///
/// Requires a connected wild quiver, a sincere alpha and alpha in the
/// fundamental set; the error names the first failed condition.
pub fn analyze_fundamental(pair: &QuiverPair) -> Result<FundamentalAnalysis> {
    let q = pair.quiver();
    if !q.is_connected() {
        return Err(QuiverError::Precondition("quiver is not connected".into()));
    }
    if !classify_graph(q)?.is_wild() {
        return Err(QuiverError::Precondition("quiver is not wild".into()));
    }
    if !pair.is_sincere() {
        return Err(QuiverError::Precondition("alpha is not sincere".into()));
    }
    if !in_fundamental_set(pair) {
        return Err(QuiverError::Precondition("alpha is not in the fundamental set".into()));
    }
    Ok(structure(pair))
}

/// The decomposition itself, without precondition checks.
fn structure(pair: &QuiverPair) -> FundamentalAnalysis {
    let q = pair.quiver();
    let n = q.vertex_count();
    let alpha = &pair.alpha().0;
    let cartan_values: Vec<i64> = (0..n).map(|v| cartan_with_unit(pair, v)).collect();
    let q_minus: Vec<usize> = (0..n).filter(|&v| cartan_values[v] < 0).collect();
    let plus: Vec<usize> = (0..n).filter(|&v| cartan_values[v] >= 0).collect();
    let in_minus: Vec<bool> = (0..n).map(|v| cartan_values[v] < 0).collect();

    let adj = q.undirected_adjacency();
    let tied: Vec<usize> = plus.iter().copied().filter(|&v| adj[v].iter().any(|&w| in_minus[w])).collect();
    let is_tied: Vec<bool> = (0..n).map(|v| tied.contains(&v)).collect();
    let free: Vec<usize> = plus.iter().copied().filter(|&v| !is_tied[v]).collect();

    let mut q_plus_components = Vec::new();
    let mut delta_sets: BTreeSet<Vec<usize>> = BTreeSet::new();
    if !plus.is_empty() {
        let sub = q.induced(&plus).expect("subset of vertices");
        for comp in sub.component_vertex_sets() {
            let vertices: Vec<usize> = comp.iter().map(|&i| plus[i]).collect();
            let class = classify_graph(&q.induced(&vertices).expect("subset")).expect("component is connected");
            q_plus_components.push((vertices, class));
        }

        let plus_adj: Vec<Vec<usize>> =
            (0..n).map(|v| if in_minus[v] { Vec::new() } else { adj[v].iter().copied().filter(|&w| !in_minus[w]).collect() }).collect();

        // free pieces together with the tied vertices bounding them
        let mut seen = vec![false; n];
        for &start in &free {
            if seen[start] {
                continue;
            }
            let mut piece = BTreeSet::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                piece.insert(v);
                for &w in &plus_adj[v] {
                    if is_tied[w] {
                        piece.insert(w);
                    } else if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            delta_sets.insert(piece.into_iter().collect());
        }
        for &t in &tied {
            let tied_neighbours: Vec<usize> = plus_adj[t].iter().copied().filter(|&w| is_tied[w] && w != t).collect();
            for w in tied_neighbours {
                delta_sets.insert(vec![t.min(w), t.max(w)]);
            }
            if plus_adj[t].iter().all(|&w| w == t) {
                delta_sets.insert(vec![t]);
            }
        }
    }

    let delta_subgraphs: Vec<DeltaSubgraph> = delta_sets
        .into_iter()
        .map(|vertices| {
            let class = classify_graph(&q.induced(&vertices).expect("subset")).unwrap_or(GraphClass::Wild);
            let mu = vertices.iter().filter(|&&v| is_tied[v]).map(|&v| alpha[v]).max();
            DeltaSubgraph { vertices, class, mu }
        })
        .collect();
    let mu = tied.iter().map(|&v| alpha[v]).max();
    FundamentalAnalysis {
        cartan_values,
        tits: pair_tits(pair).unwrap_or(i64::MIN),
        q_minus,
        q_plus_components,
        tied,
        free,
        kappa: delta_subgraphs.len(),
        delta_subgraphs,
        mu,
    }
}

/// A full `A4` subgraph `v1 - v2 - v3 - v4` with `deg(v2) = deg(v3) = 2` in the
/// whole quiver and `alpha` constant on the four vertices.
pub fn find_constant_a4(pair: &QuiverPair) -> Option<[usize; 4]> {
    let q = pair.quiver();
    let n = q.vertex_count();
    let alpha = &pair.alpha().0;
    let m = q.multiplicity_matrix();
    let und = |i: usize, j: usize| m[i][j] + if i == j { 0 } else { m[j][i] };
    let adj = q.undirected_adjacency();
    let inner = |v: usize| q.degree(v) == 2 && m[v][v] == 0;
    for v2 in 0..n {
        if !inner(v2) {
            continue;
        }
        for &v3 in &adj[v2] {
            if v3 == v2 || !inner(v3) || und(v2, v3) != 1 {
                continue;
            }
            let Some(&v1) = adj[v2].iter().find(|&&w| w != v3) else { continue };
            let Some(&v4) = adj[v3].iter().find(|&&w| w != v2) else { continue };
            let quad = [v1, v2, v3, v4];
            let distinct = (0..4).all(|i| (i + 1..4).all(|j| quad[i] != quad[j]));
            if !distinct || m[v1][v1] != 0 || m[v4][v4] != 0 {
                continue;
            }
            let path_ok = und(v1, v2) == 1 && und(v3, v4) == 1 && und(v1, v3) == 0 && und(v1, v4) == 0 && und(v2, v4) == 0;
            if path_ok && quad.iter().all(|&v| alpha[v] == alpha[v1]) {
                return Some(quad);
            }
        }
    }
    None
}

/// Dispatch on the Tits value `<alpha,alpha>`. Root-ness itself is not checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootType {
    /// `<alpha,alpha> = 1`
    RealCandidate,
    /// `<alpha,alpha> = 0`
    Isotropic,
    /// `<alpha,alpha> < 0`
    Nonisotropic,
    /// `<alpha,alpha> > 1`: none of the three
    Unclassified,
}

pub fn root_type(pair: &QuiverPair) -> Result<RootType> {
    Ok(match pair_tits(pair)? {
        1 => RootType::RealCandidate,
        0 => RootType::Isotropic,
        t if t < 0 => RootType::Nonisotropic,
        _ => RootType::Unclassified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::DimVector;

    fn quiver(n: usize, edges: &[(usize, usize)]) -> Quiver {
        let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let e: Vec<(&str, &str)> = edges.iter().map(|&(s, t)| (refs[s], refs[t])).collect();
        Quiver::from_edges(&refs, &e).unwrap()
    }

    fn path(n: usize) -> Vec<(usize, usize)> {
        (1..n).map(|i| (i - 1, i)).collect()
    }

    /// Tree with a branch vertex 0 and arms of the given lengths.
    fn star(arms: &[usize]) -> Quiver {
        let mut edges = Vec::new();
        let mut next = 1;
        for &len in arms {
            let mut prev = 0;
            for _ in 0..len {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
        }
        quiver(next, &edges)
    }

    #[test]
    fn dynkin_types() {
        use AdeType::*;
        assert_eq!(classify_graph(&quiver(3, &path(3))).unwrap(), GraphClass::Dynkin(A(3)));
        assert_eq!(classify_graph(&quiver(1, &[])).unwrap(), GraphClass::Dynkin(A(1)));
        assert_eq!(classify_graph(&star(&[1, 1, 1])).unwrap(), GraphClass::Dynkin(D(4)));
        assert_eq!(classify_graph(&star(&[1, 1, 4])).unwrap(), GraphClass::Dynkin(D(7)));
        assert_eq!(classify_graph(&star(&[1, 2, 2])).unwrap(), GraphClass::Dynkin(E6));
        assert_eq!(classify_graph(&star(&[2, 1, 3])).unwrap(), GraphClass::Dynkin(E7));
        assert_eq!(classify_graph(&star(&[4, 2, 1])).unwrap(), GraphClass::Dynkin(E8));
    }

    #[test]
    fn extended_types() {
        use AdeType::*;
        let ext = GraphClass::ExtendedDynkin;
        assert_eq!(classify_graph(&quiver(1, &[(0, 0)])).unwrap(), ext(A(0)));
        assert_eq!(classify_graph(&quiver(2, &[(0, 1), (1, 0)])).unwrap(), ext(A(1)));
        assert_eq!(classify_graph(&quiver(4, &[(0, 1), (1, 2), (2, 3), (0, 3)])).unwrap(), ext(A(3)));
        assert_eq!(classify_graph(&star(&[1, 1, 1, 1])).unwrap(), ext(D(4)));
        let d6 = quiver(7, &[(0, 1), (0, 2), (0, 3), (3, 4), (4, 5), (4, 6)]);
        assert_eq!(classify_graph(&d6).unwrap(), ext(D(6)));
        assert_eq!(classify_graph(&star(&[2, 2, 2])).unwrap(), ext(E6));
        assert_eq!(classify_graph(&star(&[1, 3, 3])).unwrap(), ext(E7));
        assert_eq!(classify_graph(&star(&[1, 2, 5])).unwrap(), ext(E8));
        assert_eq!(ext(D(4)).to_string(), "D~4");
    }

    #[test]
    fn wild_types() {
        let w = GraphClass::Wild;
        assert_eq!(classify_graph(&quiver(2, &[(0, 1), (0, 1), (0, 1)])).unwrap(), w);
        assert_eq!(classify_graph(&quiver(1, &[(0, 0), (0, 0)])).unwrap(), w);
        assert_eq!(classify_graph(&quiver(2, &[(0, 0), (0, 1)])).unwrap(), w);
        assert_eq!(classify_graph(&star(&[2, 2, 3])).unwrap(), w);
        assert_eq!(classify_graph(&star(&[1, 1, 1, 2])).unwrap(), w);
        assert_eq!(classify_graph(&star(&[1, 1, 1, 1, 1])).unwrap(), w);
        assert_eq!(classify_graph(&quiver(3, &[(0, 1), (1, 2), (2, 0), (0, 2)])).unwrap(), w);
        assert_eq!(classify_graph(&quiver(3, &[(0, 1), (0, 1), (1, 2)])).unwrap(), w);
        assert_eq!(classify_graph(&quiver(2, &[])), Err(QuiverError::Disconnected));
    }

    #[test]
    fn k3_analysis() {
        let k3 = QuiverPair::new(quiver(2, &[(0, 1), (0, 1), (0, 1)]), DimVector(vec![1, 1])).unwrap();
        let a = analyze_fundamental(&k3).unwrap();
        assert_eq!(a.q_minus, vec![0, 1]);
        assert!(a.q_plus_components.is_empty());
        assert_eq!(a.kappa, 0);
        assert_eq!(a.mu, None);
        assert_eq!(find_constant_a4(&k3), None);
    }

    #[test]
    fn dtilde4_plus_analysis() {
        // l1, l2, l3, l4 -> c with l1 doubled
        let q = quiver(5, &[(0, 4), (0, 4), (1, 4), (2, 4), (3, 4)]);
        let pair = QuiverPair::new(q, DimVector(vec![1, 1, 1, 1, 2])).unwrap();
        let a = analyze_fundamental(&pair).unwrap();
        assert_eq!(a.q_minus, vec![0, 4]);
        assert_eq!(a.q_plus_components.len(), 3);
        assert!(a.q_plus_components.iter().all(|(c, g)| c.len() == 1 && *g == GraphClass::Dynkin(AdeType::A(1))));
        assert_eq!(a.tied, vec![1, 2, 3]);
        assert!(a.free.is_empty());
        assert_eq!(a.kappa, 3);
        assert_eq!(a.mu, Some(1));
        assert_eq!(find_constant_a4(&pair), None);
    }

    #[test]
    fn analysis_preconditions() {
        let fig1 = QuiverPair::new(quiver(3, &[(0, 2), (0, 2), (0, 1), (2, 1)]), DimVector(vec![2, 1, 3])).unwrap();
        assert!(matches!(analyze_fundamental(&fig1), Err(QuiverError::Precondition(m)) if m.contains("fundamental")));
        let a3 = QuiverPair::new(quiver(3, &path(3)), DimVector(vec![1, 1, 1])).unwrap();
        assert!(matches!(analyze_fundamental(&a3), Err(QuiverError::Precondition(m)) if m.contains("wild")));
    }

    #[test]
    fn delta_pieces_split_at_tied_vertices() {
        // K3 core (0,1) with a tail 1 - 2 - 3 - 4 hanging off vertex 1
        let q = quiver(5, &[(0, 1), (0, 1), (0, 1), (1, 2), (2, 3), (3, 4)]);
        let pair = QuiverPair::new(q, DimVector(vec![2, 4, 3, 2, 1])).unwrap();
        let a = analyze_fundamental(&pair).unwrap();
        assert_eq!(a.q_minus, vec![0, 1]);
        assert_eq!(a.tied, vec![2]);
        assert_eq!(a.delta_subgraphs.len(), 1);
        assert_eq!(a.delta_subgraphs[0].vertices, vec![2, 3, 4]);
        assert_eq!(a.delta_subgraphs[0].mu, Some(3));
    }

    #[test]
    fn constant_a4_on_a5_path() {
        let pair = QuiverPair::new(quiver(5, &path(5)), DimVector(vec![1; 5])).unwrap();
        let quad = find_constant_a4(&pair).unwrap();
        assert_eq!(pair.quiver().degree(quad[1]), 2);
        assert_eq!(pair.quiver().degree(quad[2]), 2);
    }

    #[test]
    fn root_types() {
        let k2 = quiver(2, &[(0, 1), (0, 1)]);
        let k3 = quiver(2, &[(0, 1), (0, 1), (0, 1)]);
        let e = QuiverPair::new(k2.clone(), DimVector(vec![1, 0])).unwrap();
        assert_eq!(root_type(&e).unwrap(), RootType::RealCandidate);
        for n in 1..5 {
            let p = QuiverPair::new(k2.clone(), DimVector(vec![n, n])).unwrap();
            assert_eq!(root_type(&p).unwrap(), RootType::Isotropic);
        }
        let p = QuiverPair::new(k3, DimVector(vec![1, 1])).unwrap();
        assert_eq!(root_type(&p).unwrap(), RootType::Nonisotropic);
        let two = QuiverPair::new(quiver(2, &[]), DimVector(vec![1, 1])).unwrap();
        assert_eq!(root_type(&two).unwrap(), RootType::Unclassified);
    }
}
