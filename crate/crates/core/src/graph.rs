//! Weighted undirected graphs with nonnegative real weights.
//!
//! A [`Graph`] is an immutable value. Pairs are stored once in canonical
//! `(min, max)` order, so `weight(u, v) == weight(v, u)` holds by
//! construction. Zero-weight pairs are never stored and parallel edges are
//! merged by summation when the graph is built.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// Opaque vertex label. The total order on labels drives every place where
/// a vertex set is identified with `0..len`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex(pub u32);

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for Vertex {
    fn from(v: u32) -> Self {
        Vertex(v)
    }
}

pub type VertexSet = BTreeSet<Vertex>;

/// Builds a vertex set from raw labels.
pub fn vset<I: IntoIterator<Item = u32>>(labels: I) -> VertexSet {
    labels.into_iter().map(Vertex).collect()
}

fn canonical(u: Vertex, v: Vertex) -> (Vertex, Vertex) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Accumulates vertices and weighted pairs, then freezes them into a [`Graph`].
#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    vertices: VertexSet,
    weights: BTreeMap<(Vertex, Vertex), f64>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices<I: IntoIterator<Item = Vertex>>(vertices: I) -> Self {
        Self {
            vertices: vertices.into_iter().collect(),
            weights: BTreeMap::new(),
        }
    }

    pub fn add_vertex(&mut self, v: Vertex) -> &mut Self {
        self.vertices.insert(v);
        self
    }

    /// Adds `weight` onto the pair `{u, v}`, inserting both endpoints.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex, weight: f64) -> Result<&mut Self> {
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if !weight.is_finite() || weight < 0.0 {
            return Err(Error::InvalidWeight { u, v, weight });
        }
        self.vertices.insert(u);
        self.vertices.insert(v);
        *self.weights.entry(canonical(u, v)).or_insert(0.0) += weight;
        Ok(self)
    }

    pub fn build(self) -> Graph {
        let mut adjacency: BTreeMap<Vertex, BTreeMap<Vertex, f64>> =
            self.vertices.iter().map(|&v| (v, BTreeMap::new())).collect();
        let mut weights = BTreeMap::new();
        for ((u, v), w) in self.weights {
            if w > 0.0 {
                weights.insert((u, v), w);
                adjacency.get_mut(&u).expect("endpoint").insert(v, w);
                adjacency.get_mut(&v).expect("endpoint").insert(u, w);
            }
        }
        Graph {
            vertices: self.vertices.into_iter().collect(),
            weights,
            adjacency,
        }
    }
}

/// Weighted undirected graph. Cheap to clone relative to the flow work done
/// on it, and never mutated after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    vertices: Vec<Vertex>,
    weights: BTreeMap<(Vertex, Vertex), f64>,
    adjacency: BTreeMap<Vertex, BTreeMap<Vertex, f64>>,
}

impl Graph {
    /// Convenience constructor from `(u, v, w)` triples.
    pub fn from_edges<I>(edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (u32, u32, f64)>,
    {
        let mut b = GraphBuilder::new();
        for (u, v, w) in edges {
            b.add_edge(Vertex(u), Vertex(v), w)?;
        }
        Ok(b.build())
    }

    /// Vertices in ascending label order.
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices.iter().copied().collect()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.weights.len()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// Position of `v` in [`Graph::vertices`].
    pub fn index_of(&self, v: Vertex) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    pub fn weight(&self, u: Vertex, v: Vertex) -> f64 {
        self.weights.get(&canonical(u, v)).copied().unwrap_or(0.0)
    }

    /// Edges as `(u, v, w)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex, f64)> + '_ {
        self.weights.iter().map(|(&(u, v), &w)| (u, v, w))
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = (Vertex, f64)> + '_ {
        self.adjacency
            .get(&v)
            .into_iter()
            .flat_map(|m| m.iter().map(|(&u, &w)| (u, w)))
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.values().sum()
    }

    /// Smallest label strictly greater than every vertex in the graph.
    pub fn fresh_label(&self) -> Vertex {
        self.vertices
            .last()
            .map(|v| Vertex(v.0 + 1))
            .unwrap_or(Vertex(0))
    }

    pub fn check_vertices<'a, I>(&self, vs: I) -> Result<()>
    where
        I: IntoIterator<Item = &'a Vertex>,
    {
        for &v in vs {
            if !self.contains(v) {
                return Err(Error::UnknownVertex(v));
            }
        }
        Ok(())
    }

    /// `w(∂S)`: total weight of pairs with exactly one endpoint in `side`.
    /// Returns 0 for the empty set and for the whole vertex set.
    pub fn cut_weight(&self, side: &VertexSet) -> Result<f64> {
        self.check_vertices(side)?;
        Ok(self.cut_weight_unchecked(side))
    }

    pub(crate) fn cut_weight_unchecked(&self, side: &VertexSet) -> f64 {
        let mut total = 0.0;
        for &u in side {
            for (v, w) in self.neighbors(u) {
                if !side.contains(&v) {
                    total += w;
                }
            }
        }
        total
    }

    pub fn complement(&self, side: &VertexSet) -> VertexSet {
        self.vertices
            .iter()
            .filter(|v| !side.contains(v))
            .copied()
            .collect()
    }

    /// Contracts `set` into the single vertex `label`.
    ///
    /// The new vertex is joined to every outside vertex `v` with weight
    /// `Σ_{x ∈ set} w(x, v)`; pairs inside `set` disappear. `label` may reuse a
    /// label from inside `set` but not one from outside it.
    pub fn contract(&self, set: &VertexSet, label: Vertex) -> Result<(Graph, ContractionMap)> {
        let (g, maps) = self.contract_disjoint(&[(set.clone(), label)])?;
        Ok((g, maps.into_iter().next().expect("one contraction")))
    }

    /// Contracts several pairwise disjoint sets at once, each to its own label.
    pub fn contract_disjoint(
        &self,
        groups: &[(VertexSet, Vertex)],
    ) -> Result<(Graph, Vec<ContractionMap>)> {
        let mut forward: BTreeMap<Vertex, Vertex> = BTreeMap::new();
        for (set, label) in groups {
            if set.is_empty() {
                return Err(Error::EmptySet);
            }
            self.check_vertices(set)?;
            for &x in set {
                if forward.insert(x, *label).is_some() {
                    return Err(Error::Overlapping(x));
                }
            }
        }
        let mut labels = BTreeSet::new();
        for (_, label) in groups {
            if !labels.insert(*label) {
                return Err(Error::LabelInUse(*label));
            }
        }
        for &v in &self.vertices {
            if let std::collections::btree_map::Entry::Vacant(slot) = forward.entry(v) {
                if labels.contains(&v) {
                    return Err(Error::LabelInUse(v));
                }
                slot.insert(v);
            }
        }

        let mut b = GraphBuilder::with_vertices(forward.values().copied());
        for (u, v, w) in self.edges() {
            let (cu, cv) = (forward[&u], forward[&v]);
            if cu != cv {
                b.add_edge(cu, cv, w)?;
            }
        }
        let graph = b.build();
        let maps = groups
            .iter()
            .map(|(_, label)| ContractionMap {
                forward: forward.clone(),
                label: *label,
            })
            .collect();
        Ok((graph, maps))
    }

    /// Edge-neighboring relation: same vertices, weights differing on at most
    /// one pair and there by at most 1.
    pub fn is_neighboring(&self, other: &Graph) -> Result<bool> {
        if self.vertices != other.vertices {
            return Err(Error::VertexSetMismatch);
        }
        let pairs: BTreeSet<_> = self.weights.keys().chain(other.weights.keys()).collect();
        let mut differing = 0;
        for &(u, v) in pairs {
            let d = (self.weight(u, v) - other.weight(u, v)).abs();
            if d > 0.0 {
                differing += 1;
                if differing > 1 || d > 1.0 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Free-function form of [`Graph::cut_weight`].
pub fn cut_weight(g: &Graph, side: &VertexSet) -> Result<f64> {
    g.cut_weight(side)
}

/// Free-function form of [`Graph::is_neighboring`].
pub fn are_neighboring(g: &Graph, h: &Graph) -> Result<bool> {
    g.is_neighboring(h)
}

/// Where each vertex of the original graph went after a contraction.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractionMap {
    forward: BTreeMap<Vertex, Vertex>,
    label: Vertex,
}

impl ContractionMap {
    /// The vertex that replaced the contracted set.
    pub fn label(&self) -> Vertex {
        self.label
    }

    pub fn map(&self, v: Vertex) -> Option<Vertex> {
        self.forward.get(&v).copied()
    }

    /// Vertices of the original graph that map to `label`.
    pub fn preimage(&self, label: Vertex) -> VertexSet {
        self.forward
            .iter()
            .filter(|(_, &c)| c == label)
            .map(|(&v, _)| v)
            .collect()
    }

    /// Pulls a vertex set of the contracted graph back to the original.
    pub fn lift(&self, side: &VertexSet) -> VertexSet {
        self.forward
            .iter()
            .filter(|(_, c)| side.contains(c))
            .map(|(&v, _)| v)
            .collect()
    }
}

/// One side `S` of a cut together with `w(∂S)`, recomputed from the graph
/// it was built on.
#[derive(Debug, Clone, PartialEq)]
pub struct CutSide {
    side: VertexSet,
    value: f64,
}

impl CutSide {
    /// Requires `∅ ⊊ side ⊊ V(g)`.
    pub fn new(g: &Graph, side: VertexSet) -> Result<Self> {
        g.check_vertices(&side)?;
        if side.is_empty() {
            return Err(Error::EmptySet);
        }
        if side.len() == g.num_vertices() {
            return Err(Error::InvalidParameter(
                "cut side covers every vertex".into(),
            ));
        }
        let value = g.cut_weight_unchecked(&side);
        Ok(Self { side, value })
    }

    pub fn side(&self) -> &VertexSet {
        &self.side
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.side.contains(&v)
    }

    pub fn into_side(self) -> VertexSet {
        self.side
    }
}
