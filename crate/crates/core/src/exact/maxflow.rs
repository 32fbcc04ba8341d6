//! Dinic's blocking-flow max-flow on real capacities.
//!
//! Every phase routes flow along shortest residual paths, so the number of
//! phases is bounded by the vertex count even with irrational capacities.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: f64,
    rev: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct FlowNetwork {
    arcs: Vec<Vec<Arc>>,
    level: Vec<i64>,
    iter: Vec<usize>,
    total_capacity: f64,
}

impl FlowNetwork {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            arcs: vec![Vec::new(); n],
            level: vec![-1; n],
            iter: vec![0; n],
            total_capacity: 0.0,
        }
    }

    /// Undirected edge: capacity `cap` in both directions.
    pub(crate) fn add_undirected(&mut self, u: usize, v: usize, cap: f64) {
        let ru = self.arcs[v].len();
        let rv = self.arcs[u].len();
        self.arcs[u].push(Arc { to: v, cap, rev: ru });
        self.arcs[v].push(Arc { to: u, cap, rev: rv });
        self.total_capacity += cap;
    }

    /// Residual capacities at or below this are treated as saturated.
    fn tolerance(&self) -> f64 {
        self.total_capacity * 1e-12
    }

    fn bfs(&mut self, s: usize, tol: f64) {
        self.level.iter_mut().for_each(|l| *l = -1);
        let mut queue = VecDeque::new();
        self.level[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for a in &self.arcs[u] {
                if a.cap > tol && self.level[a.to] < 0 {
                    self.level[a.to] = self.level[u] + 1;
                    queue.push_back(a.to);
                }
            }
        }
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: f64, tol: f64) -> f64 {
        if u == t {
            return pushed;
        }
        while self.iter[u] < self.arcs[u].len() {
            let i = self.iter[u];
            let Arc { to, cap, rev } = self.arcs[u][i];
            if cap > tol && self.level[to] == self.level[u] + 1 {
                let d = self.dfs(to, t, pushed.min(cap), tol);
                if d > 0.0 {
                    self.arcs[u][i].cap -= d;
                    self.arcs[to][rev].cap += d;
                    return d;
                }
            }
            self.iter[u] += 1;
        }
        0.0
    }

    /// Runs max-flow from `s` to `t` and returns the flow value.
    pub(crate) fn max_flow(&mut self, s: usize, t: usize) -> f64 {
        let tol = self.tolerance();
        let mut flow = 0.0;
        loop {
            self.bfs(s, tol);
            if self.level[t] < 0 {
                return flow;
            }
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, f64::INFINITY, tol);
                if f <= 0.0 {
                    break;
                }
                flow += f;
            }
        }
    }

    /// Vertices reachable from `s` in the residual network.
    pub(crate) fn source_side(&self, s: usize) -> Vec<bool> {
        let tol = self.tolerance();
        let mut seen = vec![false; self.arcs.len()];
        let mut queue = VecDeque::new();
        seen[s] = true;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for a in &self.arcs[u] {
                if a.cap > tol && !seen[a.to] {
                    seen[a.to] = true;
                    queue.push_back(a.to);
                }
            }
        }
        seen
    }
}
