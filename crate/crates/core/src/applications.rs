//! Queries answered from a (private or exact) Gomory-Hu Steiner tree.
//!
//! All values reported here are the tree's own edge weights, which is what
//! the private release guarantees. The returned [`CutSide`] carries the
//! cut's true weight in `G`; that number is diagnostic and is not private.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{CutSide, Graph, Vertex, VertexSet};
use crate::tree::SteinerTree;

/// Answer to a pairwise or global query.
#[derive(Debug, Clone, PartialEq)]
pub struct CutAnswer {
    /// Weight of the minimum tree edge found.
    pub value: f64,
    /// `f⁻¹` of the component on the query's side of that edge.
    pub cut: CutSide,
    /// Index of the edge in [`SteinerTree::edges`].
    pub edge: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KCutSolution {
    pub partition: Vec<VertexSet>,
    /// Total weight of `G`'s edges between different parts.
    pub value: f64,
}

fn answer(tree: &SteinerTree, g: &Graph, edge: usize, from: Vertex) -> Result<CutAnswer> {
    let side = tree.induced_side(edge, from);
    Ok(CutAnswer {
        value: tree.edges()[edge].weight,
        cut: CutSide::new(g, side)?,
        edge,
    })
}

/// Minimum-weight edge on the `u`-`v` tree path and the cut it induces on
/// `u`'s side. Ties go to the edge nearest `u`.
pub fn tree_query(tree: &SteinerTree, g: &Graph, u: Vertex, v: Vertex) -> Result<CutAnswer> {
    if u == v {
        return Err(Error::SameEndpoints(u));
    }
    let path = tree.path(u, v)?;
    let mut best = path[0];
    for &i in &path[1..] {
        if tree.edges()[i].weight < tree.edges()[best].weight {
            best = i;
        }
    }
    answer(tree, g, best, u)
}

/// Lightest tree edge overall and its induced cut (side of the edge's first
/// endpoint). Ties go to the lowest edge index.
pub fn global_min_cut(tree: &SteinerTree, g: &Graph) -> Result<CutAnswer> {
    let edges = tree.edges();
    if edges.is_empty() {
        return Err(Error::TooFewTerminals {
            needed: 2,
            got: tree.num_nodes(),
        });
    }
    let best = (1..edges.len()).fold(0, |b, i| if edges[i].weight < edges[b].weight { i } else { b });
    answer(tree, g, best, edges[best].u)
}

/// Removes the `k-1` lightest tree edges and returns the preimages of the
/// `k` remaining components as the partition.
pub fn min_k_cut(tree: &SteinerTree, g: &Graph, k: usize) -> Result<KCutSolution> {
    let nodes = tree.num_nodes();
    if k < 2 || k > nodes {
        return Err(Error::InvalidParameter(format!(
            "k = {k} outside 2..={nodes}"
        )));
    }
    let mut order: Vec<usize> = (0..tree.edges().len()).collect();
    order.sort_by(|&a, &b| tree.edges()[a].weight.total_cmp(&tree.edges()[b].weight));
    let removed: Vec<usize> = order[..k - 1].to_vec();

    // Union-find over terminals using the kept edges.
    let index: BTreeMap<Vertex, usize> = tree.terminals().iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..nodes).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, e) in tree.edges().iter().enumerate() {
        if !removed.contains(&i) {
            let (a, b) = (find(&mut parent, index[&e.u]), find(&mut parent, index[&e.v]));
            parent[a] = b;
        }
    }
    let mut groups: BTreeMap<usize, VertexSet> = BTreeMap::new();
    for (&t, &i) in &index {
        groups.entry(find(&mut parent, i)).or_default().insert(t);
    }
    let mut partition: Vec<VertexSet> = groups.values().map(|c| tree.preimage(c)).collect();
    partition.sort();
    let value = partition_weight(g, &partition)?;
    Ok(KCutSolution { partition, value })
}

/// Weight of the edges of `g` whose endpoints lie in different parts. Every
/// vertex must belong to exactly one part.
pub fn partition_weight(g: &Graph, partition: &[VertexSet]) -> Result<f64> {
    let mut part_of = BTreeMap::new();
    for (i, p) in partition.iter().enumerate() {
        for &v in p {
            if part_of.insert(v, i).is_some() {
                return Err(Error::Overlapping(v));
            }
        }
    }
    if part_of.len() != g.num_vertices() || g.vertices().iter().any(|v| !part_of.contains_key(v)) {
        return Err(Error::VertexSetMismatch);
    }
    Ok(g.edges()
        .filter(|(u, v, _)| part_of[u] != part_of[v])
        .map(|(_, _, w)| w)
        .sum())
}
