//! Quivers, dimension vectors, weights and quiver-dimension vector pairs.
//!
//! A [`Quiver`] is a finite directed multigraph whose arrows carry their own
//! identity, so loops and parallel arrows are distinct objects. Vertex-indexed
//! data ([`DimVector`], [`Weight`]) is stored positionally: entry `i` belongs to
//! the vertex at index `i` of the quiver it is paired with.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::error::{QuiverError, Result};

/// An arrow `source -> target`, identified by `id`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub id: String,
    pub source: usize,
    pub target: usize,
}

impl Arrow {
    pub fn is_loop(&self) -> bool {
        self.source == self.target
    }
}

/// A finite quiver with a non-empty ordered vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    index: HashMap<String, usize>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// Builds a quiver from vertex names and `(arrow id, source, target)` triples.
    pub fn new<V, A>(vertices: V, arrows: A) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        A: IntoIterator<Item = (String, String, String)>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let index = build_index(&vertices)?;
        let mut built = Vec::new();
        for (id, s, t) in arrows {
            let source = *index.get(&s).ok_or(QuiverError::UnknownVertex(s))?;
            let target = *index.get(&t).ok_or(QuiverError::UnknownVertex(t))?;
            built.push(Arrow { id, source, target });
        }
        Self::from_parts(vertices, index, built)
    }

    /// Builds a quiver whose arrows are given by vertex indices.
    pub fn from_arrows(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self> {
        let index = build_index(&vertices)?;
        Self::from_parts(vertices, index, arrows)
    }

    /// Convenience constructor: arrows are named `a1, a2, ...` in order.
    pub fn from_edges(vertices: &[&str], edges: &[(&str, &str)]) -> Result<Self> {
        let arrows = edges
            .iter()
            .enumerate()
            .map(|(k, (s, t))| (format!("a{}", k + 1), s.to_string(), t.to_string()));
        Self::new(vertices.iter().copied(), arrows)
    }

    /// Builds a quiver on vertices `v0..v{n-1}` from an `n x n` arrow multiplicity
    /// matrix (`matrix[i][j]` arrows `i -> j`), naming arrows `a1, a2, ...`.
    pub fn from_multiplicities(matrix: &[Vec<usize>]) -> Result<Self> {
        let n = matrix.len();
        let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let mut arrows = Vec::new();
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(QuiverError::InvalidQuiver("multiplicity matrix is not square".into()));
            }
            for (j, &m) in row.iter().enumerate() {
                for _ in 0..m {
                    arrows.push(Arrow { id: format!("a{}", arrows.len() + 1), source: i, target: j });
                }
            }
        }
        Self::from_arrows(vertices, arrows)
    }

    fn from_parts(vertices: Vec<String>, index: HashMap<String, usize>, arrows: Vec<Arrow>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(QuiverError::InvalidQuiver("vertex set is empty".into()));
        }
        let mut ids = HashSet::new();
        for a in &arrows {
            if a.source >= vertices.len() || a.target >= vertices.len() {
                return Err(QuiverError::InvalidQuiver(format!("arrow `{}` has an endpoint out of range", a.id)));
            }
            if !ids.insert(a.id.as_str()) {
                return Err(QuiverError::InvalidQuiver(format!("duplicate arrow id `{}`", a.id)));
            }
        }
        Ok(Quiver { vertices, index, arrows })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index.get(name).copied().ok_or_else(|| QuiverError::UnknownVertex(name.to_string()))
    }

    /// `|{a : s a = v}| + |{a : t a = v}|`; a loop counts twice.
    pub fn degree(&self, v: usize) -> usize {
        self.arrows.iter().map(|a| usize::from(a.source == v) + usize::from(a.target == v)).sum()
    }

    /// Degree of a vertex given by name.
    pub fn degree_of(&self, name: &str) -> Result<usize> {
        Ok(self.degree(self.index_of(name)?))
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.arrows.iter().filter(|a| a.target == v).count()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.arrows.iter().filter(|a| a.source == v).count()
    }

    pub fn loops_at(&self, v: usize) -> usize {
        self.arrows.iter().filter(|a| a.source == v && a.target == v).count()
    }

    /// Number of arrows `v -> w`.
    pub fn multiplicity(&self, v: usize, w: usize) -> usize {
        self.arrows.iter().filter(|a| a.source == v && a.target == w).count()
    }

    /// `m[i][j]` = number of arrows `i -> j`.
    pub fn multiplicity_matrix(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut m = vec![vec![0; n]; n];
        for a in &self.arrows {
            m[a.source][a.target] += 1;
        }
        m
    }

    /// No arrow ends at `v` (loops count as incoming).
    pub fn is_source(&self, v: usize) -> bool {
        self.arrows.iter().all(|a| a.target != v)
    }

    /// No arrow starts at `v`.
    pub fn is_sink(&self, v: usize) -> bool {
        self.arrows.iter().all(|a| a.source != v)
    }

    /// Undirected adjacency lists, one entry per arrow end (so parallel arrows repeat).
    pub(crate) fn undirected_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for a in &self.arrows {
            adj[a.source].push(a.target);
            if a.source != a.target {
                adj[a.target].push(a.source);
            }
        }
        adj
    }

    /// Vertex sets of the connected components of the underlying graph, each
    /// sorted, listed in order of their smallest vertex.
    pub fn component_vertex_sets(&self) -> Vec<Vec<usize>> {
        let adj = self.undirected_adjacency();
        let mut seen = vec![false; self.vertex_count()];
        let mut out = Vec::new();
        for start in 0..self.vertex_count() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.component_vertex_sets().len() == 1
    }

    /// Every vertex reaches every other vertex by a directed path.
    pub fn is_strongly_connected(&self) -> bool {
        let n = self.vertex_count();
        let reach_all = |forward: bool| {
            let mut seen = vec![false; n];
            seen[0] = true;
            let mut stack = vec![0];
            while let Some(v) = stack.pop() {
                for a in &self.arrows {
                    let (from, to) = if forward { (a.source, a.target) } else { (a.target, a.source) };
                    if from == v && !seen[to] {
                        seen[to] = true;
                        stack.push(to);
                    }
                }
            }
            seen.into_iter().all(|s| s)
        };
        reach_all(true) && reach_all(false)
    }

    /// The full subquiver on `keep` (in the given order), with all arrows
    /// between kept vertices.
    pub fn induced(&self, keep: &[usize]) -> Result<Quiver> {
        let mut position = vec![usize::MAX; self.vertex_count()];
        for (new, &old) in keep.iter().enumerate() {
            position[old] = new;
        }
        let vertices = keep.iter().map(|&v| self.vertices[v].clone()).collect();
        let arrows = self
            .arrows
            .iter()
            .filter(|a| position[a.source] != usize::MAX && position[a.target] != usize::MAX)
            .map(|a| Arrow { id: a.id.clone(), source: position[a.source], target: position[a.target] })
            .collect();
        Quiver::from_arrows(vertices, arrows)
    }

    /// Same quiver with every arrow reversed.
    pub fn reversed(&self) -> Quiver {
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow { id: a.id.clone(), source: a.target, target: a.source })
            .collect();
        Quiver { vertices: self.vertices.clone(), index: self.index.clone(), arrows }
    }
}

fn build_index(vertices: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(vertices.len());
    for (i, v) in vertices.iter().enumerate() {
        if index.insert(v.clone(), i).is_some() {
            return Err(QuiverError::InvalidQuiver(format!("duplicate vertex `{v}`")));
        }
    }
    Ok(index)
}

/// Read access to integer data indexed by vertex position.
pub trait VertexValues {
    fn len(&self) -> usize;
    fn at(&self, v: usize) -> i128;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A dimension vector: one nonnegative integer per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimVector(pub Vec<u64>);

/// A weight: one integer per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weight(pub Vec<i64>);

impl VertexValues for DimVector {
    fn len(&self) -> usize {
        self.0.len()
    }
    fn at(&self, v: usize) -> i128 {
        i128::from(self.0[v])
    }
}

impl VertexValues for Weight {
    fn len(&self) -> usize {
        self.0.len()
    }
    fn at(&self, v: usize) -> i128 {
        i128::from(self.0[v])
    }
}

impl VertexValues for [i64] {
    fn len(&self) -> usize {
        <[i64]>::len(self)
    }
    fn at(&self, v: usize) -> i128 {
        i128::from(self[v])
    }
}

impl VertexValues for [u64] {
    fn len(&self) -> usize {
        <[u64]>::len(self)
    }
    fn at(&self, v: usize) -> i128 {
        i128::from(self[v])
    }
}

impl DimVector {
    pub fn zero(n: usize) -> Self {
        DimVector(vec![0; n])
    }

    /// The unit vector `e_v`.
    pub fn unit(n: usize, v: usize) -> Self {
        let mut d = Self::zero(n);
        d.0[v] = 1;
        d
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn is_sincere(&self) -> bool {
        self.0.iter().all(|&x| x > 0)
    }

    pub fn max_entry(&self) -> u64 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &DimVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self - other`, requiring `other <= self`.
    pub fn checked_sub(&self, other: &DimVector) -> Option<DimVector> {
        if !other.le(self) {
            return None;
        }
        Some(DimVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&v| self.0[v] > 0).collect()
    }

    pub fn as_weight(&self) -> Result<Weight> {
        self.0
            .iter()
            .map(|&x| i64::try_from(x).map_err(|_| QuiverError::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(Weight)
    }
}

impl Weight {
    pub fn zero(n: usize) -> Self {
        Weight(vec![0; n])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// `sum_v theta(v) beta(v)`.
    pub fn pair(&self, beta: &DimVector) -> Result<i64> {
        if self.0.len() != beta.0.len() {
            return Err(QuiverError::VertexMismatch { expected: self.0.len(), got: beta.0.len() });
        }
        let mut acc: i128 = 0;
        for (t, b) in self.0.iter().zip(&beta.0) {
            acc = acc.checked_add(i128::from(*t) * i128::from(*b)).ok_or(QuiverError::Overflow)?;
        }
        i64::try_from(acc).map_err(|_| QuiverError::Overflow)
    }

    /// Multiplies every entry by `k`.
    pub fn scaled(&self, k: i64) -> Result<Weight> {
        self.0
            .iter()
            .map(|&x| x.checked_mul(k).ok_or(QuiverError::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(Weight)
    }

    pub fn restrict(&self, keep: &[usize]) -> Weight {
        Weight(keep.iter().map(|&v| self.0[v]).collect())
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Largest admissible dimension-vector entry; keeps every form evaluation
/// inside 64-bit arithmetic.
pub const MAX_ENTRY: u64 = 1 << 31;

/// A quiver together with a dimension vector on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuiverPair {
    quiver: Quiver,
    alpha: DimVector,
}

impl QuiverPair {
    pub fn new(quiver: Quiver, alpha: DimVector) -> Result<Self> {
        if alpha.0.len() != quiver.vertex_count() {
            return Err(QuiverError::VertexMismatch { expected: quiver.vertex_count(), got: alpha.0.len() });
        }
        if alpha.0.iter().any(|&x| x > MAX_ENTRY) {
            return Err(QuiverError::Overflow);
        }
        Ok(QuiverPair { quiver, alpha })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn alpha(&self) -> &DimVector {
        &self.alpha
    }

    pub fn into_parts(self) -> (Quiver, DimVector) {
        (self.quiver, self.alpha)
    }

    pub fn is_sincere(&self) -> bool {
        self.alpha.is_sincere()
    }

    pub fn check_weight(&self, theta: &Weight) -> Result<()> {
        if theta.0.len() != self.quiver.vertex_count() {
            return Err(QuiverError::VertexMismatch { expected: self.quiver.vertex_count(), got: theta.0.len() });
        }
        Ok(())
    }

    /// Sum of `alpha(w)` over the sources of arrows ending at `v` (loops included).
    pub fn in_sum(&self, v: usize) -> u64 {
        self.quiver.arrows().iter().filter(|a| a.target == v).map(|a| self.alpha.0[a.source]).sum()
    }

    /// Sum of `alpha(w)` over the targets of arrows starting at `v` (loops included).
    pub fn out_sum(&self, v: usize) -> u64 {
        self.quiver.arrows().iter().filter(|a| a.source == v).map(|a| self.alpha.0[a.target]).sum()
    }

    /// Restricts to the support of `alpha`: drops zero vertices and every arrow
    /// touching one, restricting `theta` alongside.
    pub fn support_restrict(&self, theta: Option<&Weight>) -> Result<(QuiverPair, Option<Weight>)> {
        if let Some(t) = theta {
            self.check_weight(t)?;
        }
        let keep = self.alpha.support();
        if keep.is_empty() {
            return Err(QuiverError::EmptySupport);
        }
        let quiver = self.quiver.induced(&keep)?;
        let alpha = DimVector(keep.iter().map(|&v| self.alpha.0[v]).collect());
        Ok((QuiverPair { quiver, alpha }, theta.map(|t| t.restrict(&keep))))
    }

    /// Splits into the connected components of the underlying graph.
    pub fn connected_components(&self, theta: Option<&Weight>) -> Result<Vec<(QuiverPair, Option<Weight>)>> {
        if let Some(t) = theta {
            self.check_weight(t)?;
        }
        self.quiver
            .component_vertex_sets()
            .into_iter()
            .map(|keep| {
                let quiver = self.quiver.induced(&keep)?;
                let alpha = DimVector(keep.iter().map(|&v| self.alpha.0[v]).collect());
                Ok((QuiverPair { quiver, alpha }, theta.map(|t| t.restrict(&keep))))
            })
            .collect()
    }

    /// Applies a vertex relabeling: vertex `v` moves to position `perm[v]`.
    /// Arrow ids are kept; arrows are reordered by `order` if given.
    pub fn permuted(&self, perm: &[usize], arrow_order: Option<&[usize]>) -> Result<QuiverPair> {
        let n = self.quiver.vertex_count();
        if perm.len() != n {
            return Err(QuiverError::VertexMismatch { expected: n, got: perm.len() });
        }
        let mut vertices = vec![String::new(); n];
        let mut alpha = vec![0; n];
        for v in 0..n {
            vertices[perm[v]] = self.quiver.vertices[v].clone();
            alpha[perm[v]] = self.alpha.0[v];
        }
        let base: Vec<usize> = (0..self.quiver.arrow_count()).collect();
        let order = arrow_order.unwrap_or(&base);
        let arrows = order
            .iter()
            .map(|&k| {
                let a = &self.quiver.arrows[k];
                Arrow { id: a.id.clone(), source: perm[a.source], target: perm[a.target] }
            })
            .collect();
        QuiverPair::new(Quiver::from_arrows(vertices, arrows)?, DimVector(alpha))
    }
}
