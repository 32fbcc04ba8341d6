//! Gomory-Hu Steiner trees: a weighted tree on a terminal set `U` plus an
//! assignment `f: V → U` of every graph vertex to a terminal.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Vertex, VertexSet};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeEdge {
    pub u: Vertex,
    pub v: Vertex,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteinerTree {
    terminals: VertexSet,
    edges: Vec<TreeEdge>,
    assignment: BTreeMap<Vertex, Vertex>,
}

/// One recursive child handed to [`SteinerTree::combine`].
#[derive(Debug, Clone)]
pub struct Branch {
    /// Tree computed on the graph where everything outside `side` was
    /// contracted to `contracted`.
    pub tree: SteinerTree,
    pub side: VertexSet,
    pub contracted: Vertex,
    /// Label `side` received in the graph of the large branch.
    pub large_label: Vertex,
    pub weight: f64,
}

impl SteinerTree {
    /// Tree with the single terminal `terminal`, which every vertex maps to.
    pub fn singleton<I: IntoIterator<Item = Vertex>>(terminal: Vertex, vertices: I) -> Self {
        let mut assignment: BTreeMap<_, _> = vertices.into_iter().map(|v| (v, terminal)).collect();
        assignment.insert(terminal, terminal);
        Self {
            terminals: [terminal].into_iter().collect(),
            edges: Vec::new(),
            assignment,
        }
    }

    /// Assembles a tree from parts and validates it.
    pub fn from_parts(
        terminals: VertexSet,
        edges: Vec<TreeEdge>,
        assignment: BTreeMap<Vertex, Vertex>,
    ) -> Result<Self> {
        let t = Self {
            terminals,
            edges,
            assignment,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn terminals(&self) -> &VertexSet {
        &self.terminals
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    pub fn assignment(&self) -> &BTreeMap<Vertex, Vertex> {
        &self.assignment
    }

    pub fn num_nodes(&self) -> usize {
        self.terminals.len()
    }

    /// `f(v)`.
    pub fn terminal_of(&self, v: Vertex) -> Option<Vertex> {
        self.assignment.get(&v).copied()
    }

    /// Replaces every edge weight through `map`; topology is unchanged.
    pub fn map_weights<F: FnMut(usize, f64) -> f64>(&mut self, mut map: F) {
        for (i, e) in self.edges.iter_mut().enumerate() {
            e.weight = map(i, e.weight);
        }
    }

    /// Checks that the edges span the terminals acyclically, every edge
    /// endpoint is a terminal, weights are nonnegative and `f|_U` is the
    /// identity.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.terminals.is_empty() {
            return bad("tree has no terminals".into());
        }
        if self.edges.len() + 1 != self.terminals.len() {
            return bad(format!(
                "{} edges cannot span {} terminals",
                self.edges.len(),
                self.terminals.len()
            ));
        }
        let index: BTreeMap<Vertex, usize> = self
            .terminals
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let mut parent: Vec<usize> = (0..index.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &self.edges {
            let (Some(&a), Some(&b)) = (index.get(&e.u), index.get(&e.v)) else {
                return bad(format!("edge ({}, {}) leaves the terminal set", e.u, e.v));
            };
            if !(e.weight >= 0.0) {
                return bad(format!("edge ({}, {}) has weight {}", e.u, e.v, e.weight));
            }
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return bad(format!("edge ({}, {}) closes a cycle", e.u, e.v));
            }
            parent[ra] = rb;
        }
        for &u in &self.terminals {
            if self.assignment.get(&u) != Some(&u) {
                return bad(format!("terminal {u} is not mapped to itself"));
            }
        }
        for (&v, t) in &self.assignment {
            if !self.terminals.contains(t) {
                return bad(format!("vertex {v} maps to non-terminal {t}"));
            }
        }
        Ok(())
    }

    fn adjacency(&self) -> BTreeMap<Vertex, Vec<(Vertex, usize)>> {
        let mut adj: BTreeMap<Vertex, Vec<(Vertex, usize)>> =
            self.terminals.iter().map(|&u| (u, Vec::new())).collect();
        for (i, e) in self.edges.iter().enumerate() {
            adj.entry(e.u).or_default().push((e.v, i));
            adj.entry(e.v).or_default().push((e.u, i));
        }
        adj
    }

    /// Indices of the edges on the `a`-`b` path, ordered from `a`.
    pub fn path(&self, a: Vertex, b: Vertex) -> Result<Vec<usize>> {
        for x in [a, b] {
            if !self.terminals.contains(&x) {
                return Err(Error::UnknownVertex(x));
            }
        }
        let adj = self.adjacency();
        let mut via: BTreeMap<Vertex, (Vertex, usize)> = BTreeMap::new();
        let mut queue = VecDeque::from([a]);
        let mut seen: VertexSet = [a].into_iter().collect();
        while let Some(x) = queue.pop_front() {
            if x == b {
                break;
            }
            for &(y, i) in &adj[&x] {
                if seen.insert(y) {
                    via.insert(y, (x, i));
                    queue.push_back(y);
                }
            }
        }
        if !seen.contains(&b) {
            return Err(Error::InvalidParameter(format!("{a} and {b} are not connected")));
        }
        let mut path = Vec::new();
        let mut x = b;
        while x != a {
            let (p, i) = via[&x];
            path.push(i);
            x = p;
        }
        path.reverse();
        Ok(path)
    }

    /// Terminals in the component of `from` once edge `edge` is removed.
    pub fn component_without(&self, edge: usize, from: Vertex) -> VertexSet {
        let adj = self.adjacency();
        let mut seen: VertexSet = [from].into_iter().collect();
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            for &(y, i) in &adj[&x] {
                if i != edge && seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// `f⁻¹(terminals)`.
    pub fn preimage(&self, terminals: &VertexSet) -> VertexSet {
        self.assignment
            .iter()
            .filter(|(_, t)| terminals.contains(t))
            .map(|(&v, _)| v)
            .collect()
    }

    /// Vertex side induced by removing `edge`, on the side of `from`.
    pub fn induced_side(&self, edge: usize, from: Vertex) -> VertexSet {
        self.preimage(&self.component_without(edge, from))
    }

    /// Stitches recursive results together: disjoint union of all trees plus
    /// an edge `(f_v(x_v), f_large(y_v))` of weight `w(Ŝ_v)` per branch. The
    /// assignment sends vertices of `Ŝ_v` through `f_v` and everything else
    /// through `f_large`.
    pub fn combine(large: SteinerTree, branches: Vec<Branch>) -> SteinerTree {
        if branches.is_empty() {
            return large;
        }
        let mut terminals = large.terminals.clone();
        let mut edges = large.edges.clone();
        let mut assignment: BTreeMap<Vertex, Vertex> = BTreeMap::new();
        let in_branch: VertexSet = branches.iter().flat_map(|b| b.side.iter().copied()).collect();
        let large_labels: VertexSet = branches.iter().map(|b| b.large_label).collect();
        for (&v, &t) in &large.assignment {
            if !in_branch.contains(&v) && !large_labels.contains(&v) {
                assignment.insert(v, t);
            }
        }
        for b in branches {
            let anchor_child = b.tree.assignment[&b.contracted];
            let anchor_large = large.assignment[&b.large_label];
            terminals.extend(b.tree.terminals.iter().copied());
            edges.extend(b.tree.edges.iter().copied());
            edges.push(TreeEdge {
                u: anchor_child,
                v: anchor_large,
                weight: b.weight,
            });
            for &v in &b.side {
                assignment.insert(v, b.tree.assignment[&v]);
            }
        }
        SteinerTree {
            terminals,
            edges,
            assignment,
        }
    }
}
