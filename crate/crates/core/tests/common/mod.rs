//! Brute-force oracles and random instances shared by the integration tests.
#![allow(dead_code)]

use dpgh::{Graph, GraphBuilder, Vertex, VertexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TOL: f64 = 1e-9;

/// Random graph on `0..n` with integer weights in `1..=max_w`.
pub fn random_graph(n: usize, p: f64, max_w: u32, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::with_vertices((0..n as u32).map(Vertex));
    for i in 0..n as u32 {
        for j in i + 1..n as u32 {
            if rng.gen_bool(p) {
                b.add_edge(Vertex(i), Vertex(j), rng.gen_range(1..=max_w) as f64).unwrap();
            }
        }
    }
    b.build()
}

/// Random graph with a random size in `lo..=hi` and density.
pub fn random_small_graph(lo: usize, hi: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let n = rng.gen_range(lo..=hi);
    let p = rng.gen_range(0.25..0.8);
    random_graph(n, p, 9, seed)
}

/// Dense representation for enumeration over bitmasks of `g.vertices()`.
pub struct Dense {
    pub vertices: Vec<Vertex>,
    edges: Vec<(usize, usize, f64)>,
}

impl Dense {
    pub fn new(g: &Graph) -> Self {
        assert!(g.num_vertices() <= 20, "brute force on {} vertices", g.num_vertices());
        let vertices = g.vertices().to_vec();
        let idx = |v: Vertex| vertices.iter().position(|&x| x == v).unwrap();
        let edges = g.edges().map(|(u, v, w)| (idx(u), idx(v), w)).collect();
        Self { vertices, edges }
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn index(&self, v: Vertex) -> usize {
        self.vertices.iter().position(|&x| x == v).unwrap()
    }

    pub fn cut(&self, mask: u32) -> f64 {
        self.edges
            .iter()
            .filter(|&&(a, b, _)| (mask >> a & 1) != (mask >> b & 1))
            .map(|&(_, _, w)| w)
            .sum()
    }

    pub fn set(&self, mask: u32) -> VertexSet {
        (0..self.n()).filter(|&i| mask >> i & 1 == 1).map(|i| self.vertices[i]).collect()
    }

    /// Every proper nonempty side, each cut once (vertex 0 always outside).
    pub fn sides(&self) -> impl Iterator<Item = u32> {
        let n = self.n();
        (1u32..1 << n).filter(|m| m & 1 == 0)
    }

    /// `λ(a, b)` for all index pairs, from one enumeration.
    pub fn all_pairs_lambda(&self) -> Vec<Vec<f64>> {
        let n = self.n();
        let mut lam = vec![vec![f64::INFINITY; n]; n];
        for m in self.sides() {
            let w = self.cut(m);
            for a in 0..n {
                for b in a + 1..n {
                    if (m >> a & 1) != (m >> b & 1) && w < lam[a][b] {
                        lam[a][b] = w;
                        lam[b][a] = w;
                    }
                }
            }
        }
        lam
    }

    /// Minimum isolating cut values: for each terminal `r`, the lightest
    /// side containing `r` and no other terminal.
    pub fn isolating_values(&self, terminals: &[usize]) -> Vec<f64> {
        let n = self.n();
        let tmask: u32 = terminals.iter().map(|&t| 1u32 << t).sum();
        terminals
            .iter()
            .map(|&r| {
                (1u32..1 << n)
                    .filter(|m| m & tmask == 1 << r && *m != (1u32 << n) - 1)
                    .map(|m| self.cut(m))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect()
    }

    pub fn global_min_cut(&self) -> f64 {
        self.sides().map(|m| self.cut(m)).fold(f64::INFINITY, f64::min)
    }

    /// Optimal `k`-cut over all partitions into `k` nonempty parts.
    pub fn k_cut_opt(&self, k: usize) -> f64 {
        let n = self.n();
        let mut labels = vec![0usize; n];
        let mut best = f64::INFINITY;
        loop {
            let mut used = vec![false; k];
            labels.iter().for_each(|&l| used[l] = true);
            if used.iter().all(|&u| u) {
                let w: f64 = self
                    .edges
                    .iter()
                    .filter(|&&(a, b, _)| labels[a] != labels[b])
                    .map(|&(_, _, w)| w)
                    .sum();
                best = best.min(w);
            }
            let mut i = 0;
            loop {
                if i == n {
                    return best;
                }
                labels[i] += 1;
                if labels[i] < k {
                    break;
                }
                labels[i] = 0;
                i += 1;
            }
        }
    }
}
