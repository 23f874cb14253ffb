//! Vertex-weighted simple graphs and the combinatorial primitives the bounds
//! are built from.

mod cliques;
mod graph6;
mod iso;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub use cliques::{enumerate_maximal_cliques, maximal_stable_sets};
pub use graph6::{encode_graph6, parse_graph6};
pub use iso::{is_isomorphic, ISOMORPHISM_CAP};

/// Subset of `0..n` with bitset semantics.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct VertexSet {
    words: Vec<u64>,
    universe: usize,
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        VertexSet {
            words: vec![0; universe.div_ceil(64)],
            universe,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for v in 0..universe {
            s.insert(v);
        }
        s
    }

    pub fn from_members(universe: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Self::empty(universe);
        for v in members {
            if v >= universe {
                return Err(Error::VertexOutOfRange { vertex: v, n: universe });
            }
            s.insert(v);
        }
        Ok(s)
    }

    /// Low `universe` bits of `mask`; `universe` must be at most 64.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        debug_assert!(universe <= 64);
        let mut s = Self::empty(universe);
        if universe > 0 {
            s.words[0] = if universe == 64 { mask } else { mask & ((1u64 << universe) - 1) };
        }
        s
    }

    /// Bitmask view for universes of at most 64 vertices.
    pub fn mask(&self) -> u64 {
        debug_assert!(self.universe <= 64);
        self.words.first().copied().unwrap_or(0)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, v: usize) {
        assert!(v < self.universe, "vertex {v} outside universe {}", self.universe);
        self.words[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        if v < self.universe {
            self.words[v / 64] &= !(1 << (v % 64));
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.universe && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn intersection_len(&self, other: &Self) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        debug_assert_eq!(self.universe, other.universe);
        VertexSet {
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect(),
            universe: self.universe,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(64 * k + b)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

/// Simple undirected graph with strictly positive rational vertex weights.
///
/// Immutable once built; every constructor validates symmetry, irreflexivity
/// and positivity.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<VertexSet>,
    weights: Vec<Rational>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.order())
            .field("edges", &self.edges())
            .field(
                "weights",
                &self.weights.iter().map(rational::format).collect::<Vec<_>>(),
            )
            .finish()
    }
}

impl Graph {
    /// Unit-weight graph on `n` vertices without edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            adjacency: vec![VertexSet::empty(n); n],
            weights: vec![rational::one(); n],
        }
    }

    pub fn from_edge_list(
        n: usize,
        edges: &[(usize, usize)],
        weights: Option<Vec<Rational>>,
    ) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(i, j) in edges {
            for v in [i, j] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            g.adjacency[i].insert(j);
            g.adjacency[j].insert(i);
        }
        if let Some(w) = weights {
            g = g.with_weights(w)?;
        }
        Ok(g)
    }

    pub fn with_weights(mut self, weights: Vec<Rational>) -> Result<Self> {
        if weights.len() != self.order() {
            return Err(Error::WeightCount {
                expected: self.order(),
                got: weights.len(),
            });
        }
        if let Some((vertex, w)) = weights.iter().enumerate().find(|(_, w)| !rational::is_positive(w)) {
            return Err(Error::NonPositiveWeight {
                vertex,
                weight: rational::format(w),
            });
        }
        self.weights = weights;
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.adjacency.len()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].contains(j)
    }

    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, v: usize) -> &Rational {
        &self.weights[v]
    }

    pub fn weights_f64(&self) -> Vec<f64> {
        self.weights.iter().map(rational::to_f64).collect()
    }

    pub fn has_unit_weights(&self) -> bool {
        self.weights.iter().all(|w| *w == rational::one())
    }

    /// Edges `(i, j)` with `i < j`, ordered by `i` then `j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.order())
            .flat_map(|i| self.adjacency[i].iter().filter(move |&j| j > i).map(move |j| (i, j)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    pub fn is_stable(&self, set: &VertexSet) -> bool {
        set.iter().all(|v| self.adjacency[v].intersection_len(set) == 0)
    }

    pub fn is_clique(&self, set: &VertexSet) -> bool {
        set.iter()
            .all(|v| self.adjacency[v].intersection_len(set) == set.len() - 1)
    }

    pub fn set_weight(&self, set: &VertexSet) -> Rational {
        set.iter().map(|v| &self.weights[v]).sum()
    }

    /// Same order and weights; distinct vertices adjacent iff they were not.
    pub fn complement(&self) -> Graph {
        let n = self.order();
        let adjacency = (0..n)
            .map(|i| {
                let mut row = VertexSet::full(n).difference(&self.adjacency[i]);
                row.remove(i);
                row
            })
            .collect();
        Graph {
            adjacency,
            weights: self.weights.clone(),
        }
    }

    /// Subgraph induced on `keep`, reindexed densely in increasing order.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> Result<Graph> {
        if let Some(v) = keep.iter().find(|&v| v >= self.order()) {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.order() });
        }
        if keep.universe() != self.order() {
            return Err(Error::Dimension(format!(
                "vertex set over {} vertices used with graph of order {}",
                keep.universe(),
                self.order()
            )));
        }
        let kept = keep.to_vec();
        self.induced_on(&kept)
    }

    /// Subgraph induced on the listed vertices, in the listed order.
    pub fn induced_on(&self, vertices: &[usize]) -> Result<Graph> {
        let m = vertices.len();
        let mut out = Graph::empty(m);
        for (a, &u) in vertices.iter().enumerate() {
            if u >= self.order() {
                return Err(Error::VertexOutOfRange { vertex: u, n: self.order() });
            }
            out.weights[a] = self.weights[u].clone();
            for (b, &v) in vertices.iter().enumerate() {
                if a != b && self.adjacent(u, v) {
                    out.adjacency[a].insert(b);
                }
            }
        }
        Ok(out)
    }

    /// Vertex `v` relabelled to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        let n = self.order();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Dimension("relabelling is not a permutation".into()));
        }
        let edges: Vec<_> = self.edges().iter().map(|&(i, j)| (perm[i], perm[j])).collect();
        let mut weights = vec![rational::one(); n];
        for (v, &p) in perm.iter().enumerate() {
            weights[p] = self.weights[v].clone();
        }
        Graph::from_edge_list(n, &edges, Some(weights))
    }

    /// Circulant graph: `i ~ j` iff `(j - i) mod n` or `(i - j) mod n` is a jump.
    pub fn circulant(n: usize, jumps: &[usize]) -> Result<Graph> {
        if n < 3 {
            return Err(Error::Generator(format!("circulant needs n >= 3, got {n}")));
        }
        if jumps.is_empty() {
            return Err(Error::Generator("circulant needs at least one jump".into()));
        }
        if let Some(j) = jumps.iter().find(|&&j| j == 0 || j > n / 2) {
            return Err(Error::Generator(format!("jump {j} outside 1..={}", n / 2)));
        }
        let mut edges = Vec::new();
        for i in 0..n {
            for &j in jumps {
                edges.push((i, (i + j) % n));
            }
        }
        Graph::from_edge_list(n, &edges, None)
    }

    pub fn cycle(n: usize) -> Result<Graph> {
        Graph::circulant(n, &[1])
    }

    pub fn complete(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Graph::from_edge_list(n, &edges, None).expect("complete graph edges are valid")
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edge_list(n, &edges, None).expect("path edges are valid")
    }
}

/// JSON edge-list form: `{"n": 5, "edges": [[0,1],...], "weights": ["1/2",...]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EdgeListJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<String>>,
}

impl EdgeListJson {
    pub fn from_graph(g: &Graph) -> Self {
        EdgeListJson {
            n: g.order(),
            edges: g.edges().into_iter().map(|(i, j)| [i, j]).collect(),
            weights: (!g.has_unit_weights())
                .then(|| g.weights().iter().map(rational::format).collect()),
        }
    }

    pub fn to_graph(&self) -> Result<Graph> {
        let edges: Vec<_> = self.edges.iter().map(|&[i, j]| (i, j)).collect();
        let weights = match &self.weights {
            Some(ws) => Some(ws.iter().map(|w| rational::parse(w)).collect::<Result<Vec<_>>>()?),
            None => None,
        };
        Graph::from_edge_list(self.n, &edges, weights)
    }
}

impl Graph {
    pub fn from_json(text: &str) -> Result<Graph> {
        let parsed: EdgeListJson = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
        parsed.to_graph()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&EdgeListJson::from_graph(self)).expect("edge list serializes")
    }
}
