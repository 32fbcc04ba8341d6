//! Private approximate Gomory-Hu trees.
//!
//! [`gh_tree_step`] picks, from a source `s`, a family of disjoint
//! approximate isolating cuts that are also approximate minimum `s`-`v`
//! cuts. [`gh_tree`] recurses into each selected cut (with everything else
//! contracted and the contracted vertex's edges masked by Laplace noise) and
//! into the remainder (with each selected cut contracted), then stitches the
//! results with [`combine_steiner`]. [`final_gh_tree`] runs the recursion on
//! all vertices with half the budget and spends the other half on noisy tree
//! edge weights.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::exact::min_st_cut_exact;
use crate::graph::{CutSide, Graph, GraphBuilder, Vertex, VertexSet};
use crate::privacy::{
    sample_laplace, Charge, Epsilon, LedgerEntry, NoiseRng, NoiseScale, PrivacyLedger,
};
use crate::private_cuts::{private_isolating_cuts, IsoCutParams, DEFAULT_PENALTY_CONST};
use crate::tree::{Branch, SteinerTree};

/// Tunable constants of the construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    /// Scale of the isolating-cut error allowance.
    pub c1: f64,
    /// Scale of the cut-value error allowance.
    pub c2: f64,
    /// Depth limit factor: `t_max = ⌈c_depth · lg² n⌉`.
    pub c_depth: f64,
    /// Penalty constant of the private isolating cuts.
    pub penalty_const: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Self {
            c1: 4.0,
            c2: 4.0,
            c_depth: 4.0,
            penalty_const: DEFAULT_PENALTY_CONST,
        }
    }
}

impl Constants {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("c1", self.c1),
            ("c2", self.c2),
            ("c_depth", self.c_depth),
            ("penalty_const", self.penalty_const),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

fn floor_lg(x: usize) -> usize {
    (usize::BITS - 1 - x.leading_zeros()) as usize
}

/// Parameters of one [`gh_tree_step`] call.
#[derive(Debug, Clone, PartialEq)]
pub struct StepParams {
    pub eps: Epsilon,
    pub beta: f64,
    pub c1: f64,
    pub c2: f64,
    pub penalty_const: f64,
}

impl StepParams {
    pub fn new(eps: Epsilon, beta: f64, constants: &Constants) -> Self {
        Self {
            eps,
            beta,
            c1: constants.c1,
            c2: constants.c2,
            penalty_const: constants.penalty_const,
        }
    }

    /// `C1 · (n + lg(1/β)) · lg³|U| / ε`.
    pub fn err_iso(&self, n: usize, num_terminals: usize) -> f64 {
        let lg_u = (num_terminals as f64).log2();
        self.eps
            .inverse_times(self.c1 * (n as f64 + (1.0 / self.beta).log2()) * lg_u.powi(3))
    }

    /// `C2 · |U| · lg(|U|/β) / ε`.
    pub fn err_values(&self, num_terminals: usize) -> f64 {
        let u = num_terminals as f64;
        self.eps.inverse_times(self.c2 * u * (u / self.beta).log2())
    }
}

/// Result of [`gh_tree_step`].
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutput {
    /// `D`: terminals covered by the selected cuts.
    pub covered: VertexSet,
    /// `R*`: terminals whose cut was selected, ascending.
    pub selected: Vec<Vertex>,
    /// `Ŝ_v` for each selected terminal; `value()` is the true weight.
    pub sets: BTreeMap<Vertex, CutSide>,
    /// Sampling level the output came from, if anything was selected.
    pub level: Option<usize>,
    pub ledger: PrivacyLedger,
}

/// One round of cut selection from source `s` over terminals `terminals`.
///
/// Noisy single-source values `λ̂(s, v)` are computed once; then for each
/// sampling level `i` the private isolating cuts of a terminal sample are
/// kept when their noisy weight is within a level-dependent allowance of
/// `λ̂(s, v)` and they hold at most 9/10 of the terminals. The level with the
/// most covered terminals wins (earliest on ties).
pub fn gh_tree_step(
    g: &Graph,
    s: Vertex,
    terminals: &VertexSet,
    params: &StepParams,
    rng: &mut NoiseRng,
) -> Result<StepOutput> {
    let k = terminals.len();
    if k < 2 {
        return Err(Error::TooFewTerminals { needed: 2, got: k });
    }
    if !terminals.contains(&s) {
        return Err(Error::InvalidParameter(format!(
            "source {s} is not a terminal"
        )));
    }
    g.check_vertices(terminals)?;
    let eps = params.eps;
    let top = floor_lg(k);
    let levels = top + 1;
    let mut ledger = PrivacyLedger::new(eps);

    let lambda_scale = eps.scale(4.0 * (k - 1) as f64);
    ledger.charge_laplace("lambda_hat", 1.0, lambda_scale, k - 1);
    let mut lambda_hat = BTreeMap::new();
    for &v in terminals.iter().filter(|&&v| v != s) {
        let exact = min_st_cut_exact(g, s, v)?.value;
        lambda_hat.insert(v, exact + sample_laplace(lambda_scale, rng)?);
    }

    let err_iso = params.err_iso(g.num_vertices(), k);
    let err_values = params.err_values(k);
    let value_scale = eps.scale(8.0 * levels as f64);
    let iso_params = IsoCutParams {
        eps: eps.split(2.0 * levels as f64),
        beta: params.beta / levels as f64,
        penalized: terminals.clone(),
        penalty_const: params.penalty_const,
    };

    let mut best: Option<(usize, VertexSet, BTreeMap<Vertex, CutSide>)> = None;
    let mut sample = terminals.clone();
    for i in 0..levels {
        if sample.len() >= 2 {
            let mut iso_ledger = PrivacyLedger::new(iso_params.eps);
            let iso = private_isolating_cuts(g, &sample, &iso_params, rng, &mut iso_ledger)?;
            ledger.absorb(&format!("level{i}/"), &iso_ledger);
            ledger.charge_laplace(format!("level{i}/cut_values"), 2.0, value_scale, 1);

            let slack = (2 * (top - i) + 1) as f64 * err_iso + err_values;
            let mut covered = VertexSet::new();
            let mut sets = BTreeMap::new();
            for (&v, cut) in iso.cuts.iter().filter(|(&v, _)| v != s) {
                let noisy = cut.value() + sample_laplace(value_scale, rng)?;
                let inside: VertexSet = cut.side().intersection(terminals).copied().collect();
                if noisy <= lambda_hat[&v] + slack && 10 * inside.len() <= 9 * k {
                    covered.extend(inside);
                    sets.insert(v, cut.clone());
                }
            }
            if best.as_ref().is_none_or(|(_, d, _)| covered.len() > d.len()) {
                best = Some((i, covered, sets));
            }
        }
        if i + 1 < levels {
            let p = 0.5f64.powi(i as i32 + 1);
            sample = terminals
                .iter()
                .copied()
                .filter(|&u| u == s || rng.uniform() < p)
                .collect();
        }
    }

    let (level, covered, sets) = match best {
        Some((i, d, sets)) if !d.is_empty() => (Some(i), d, sets),
        _ => (None, VertexSet::new(), BTreeMap::new()),
    };
    Ok(StepOutput {
        covered,
        selected: sets.keys().copied().collect(),
        sets,
        level,
        ledger,
    })
}

impl StepOutput {
    /// `w_G(Ŝ_v)` for each selected terminal.
    pub fn true_weights(&self) -> BTreeMap<Vertex, f64> {
        self.sets.iter().map(|(&v, c)| (v, c.value())).collect()
    }
}

/// Parameters threaded through [`gh_tree`].
#[derive(Debug, Clone, PartialEq)]
pub struct RecursionParams {
    pub eps: Epsilon,
    pub depth: usize,
    pub n_max: usize,
    pub t_max: usize,
    pub constants: Constants,
}

impl RecursionParams {
    pub fn new(eps: Epsilon, n_max: usize, constants: Constants) -> Self {
        let lg_n = (n_max.max(2) as f64).log2();
        let t_max = (constants.c_depth * lg_n * lg_n).ceil().max(1.0) as usize;
        Self {
            eps,
            depth: 0,
            n_max,
            t_max,
            constants,
        }
    }

    fn deeper(&self) -> Self {
        Self {
            depth: self.depth + 1,
            ..self.clone()
        }
    }
}

/// Privacy record of one [`gh_tree`] call and its recursive children.
#[derive(Debug, Clone, PartialEq)]
pub struct RecursionAudit {
    pub depth: usize,
    pub num_terminals: usize,
    /// Charges of this call's [`gh_tree_step`].
    pub step: PrivacyLedger,
    /// Laplace masking of one contracted vertex's edges (Δ = 1).
    pub edge_noise: Option<LedgerEntry>,
    /// Recursive calls on the selected cuts, in terminal order.
    pub children: Vec<RecursionAudit>,
    pub large: Option<Box<RecursionAudit>>,
}

impl RecursionAudit {
    fn leaf(depth: usize) -> Self {
        Self {
            depth,
            num_terminals: 1,
            step: PrivacyLedger::new(Epsilon::Infinite),
            edge_noise: None,
            children: Vec::new(),
            large: None,
        }
    }

    pub fn max_depth(&self) -> usize {
        self.children
            .iter()
            .chain(self.large.as_deref())
            .map(RecursionAudit::max_depth)
            .max()
            .unwrap_or(self.depth)
    }

    /// Number of [`gh_tree_step`] invocations in this subtree.
    pub fn steps(&self) -> usize {
        let own = usize::from(!self.step.entries().is_empty());
        own + self
            .children
            .iter()
            .chain(self.large.as_deref())
            .map(RecursionAudit::steps)
            .sum::<usize>()
    }

    /// Every call in the subtree, preorder.
    pub fn nodes(&self) -> Vec<&RecursionAudit> {
        let mut out = vec![self];
        for c in self.children.iter().chain(self.large.as_deref()) {
            out.extend(c.nodes());
        }
        out
    }

    /// Charges along the costliest path a single edge can take through the
    /// recursion. An edge affects this call's step, then either lies inside
    /// one selected cut (and follows that child), or crosses into the
    /// remainder, paying for masking noise of at most two children on the
    /// way.
    pub fn worst_path(&self) -> Vec<LedgerEntry> {
        let prefix = format!("depth{}/", self.depth);
        let mut own = PrivacyLedger::new(Epsilon::Infinite);
        own.absorb(&prefix, &self.step);
        let mut path: Vec<LedgerEntry> = own.entries().to_vec();

        let inside = self
            .children
            .iter()
            .map(RecursionAudit::worst_path)
            .max_by(|a, b| path_cost(a).total_cmp(&path_cost(b)))
            .unwrap_or_default();

        let mut crossing = Vec::new();
        if let Some(e) = &self.edge_noise {
            let masked = self.children.len().min(2);
            if masked > 0 {
                let mut e = e.clone();
                e.mechanism = format!("{prefix}{}", e.mechanism);
                if let Charge::Laplace { count, .. } = &mut e.charge {
                    *count = masked;
                }
                crossing.push(e);
            }
        }
        if let Some(large) = &self.large {
            crossing.extend(large.worst_path());
        }

        if path_cost(&inside) > path_cost(&crossing) {
            path.extend(inside);
        } else {
            path.extend(crossing);
        }
        path
    }

    pub fn worst_path_cost(&self) -> f64 {
        path_cost(&self.worst_path())
    }
}

fn path_cost(entries: &[LedgerEntry]) -> f64 {
    entries.iter().map(LedgerEntry::cost).sum()
}

/// Replaces every edge at `hub` by `max(0, w + Lap(b))`, creating edges to
/// all other vertices.
fn mask_hub(g: &Graph, hub: Vertex, scale: NoiseScale, rng: &mut NoiseRng) -> Result<Graph> {
    if matches!(scale, NoiseScale::Noiseless) {
        return Ok(g.clone());
    }
    let mut b = GraphBuilder::with_vertices(g.vertices().iter().copied());
    for (u, v, w) in g.edges() {
        if u != hub && v != hub {
            b.add_edge(u, v, w)?;
        }
    }
    for &u in g.vertices() {
        if u != hub {
            let w = (g.weight(hub, u) + sample_laplace(scale, rng)?).max(0.0);
            b.add_edge(hub, u, w)?;
        }
    }
    Ok(b.build())
}

/// Stitches the remainder tree and the per-cut trees; each cut contributes
/// an edge of weight `w_G(Ŝ_v)` between `f_v(x_v)` and `f_large(y_v)`.
pub fn combine_steiner(large: SteinerTree, branches: Vec<Branch>) -> SteinerTree {
    SteinerTree::combine(large, branches)
}

/// Recursive private Steiner tree construction for terminals `terminals`.
///
/// Aborts with [`Error::Aborted`] when the depth exceeds `t_max`.
pub fn gh_tree(
    g: &Graph,
    terminals: &VertexSet,
    rp: &RecursionParams,
    rng: &mut NoiseRng,
) -> Result<(SteinerTree, RecursionAudit)> {
    if rp.depth > rp.t_max {
        return Err(Error::Aborted {
            depth: rp.depth,
            t_max: rp.t_max,
            seed: rng.seed(),
        });
    }
    g.check_vertices(terminals)?;
    let order: Vec<Vertex> = terminals.iter().copied().collect();
    match order.len() {
        0 => return Err(Error::EmptySet),
        1 => {
            return Ok((
                SteinerTree::singleton(order[0], g.vertices().iter().copied()),
                RecursionAudit::leaf(rp.depth),
            ))
        }
        _ => {}
    }

    let s = order[rng.gen_range(0..order.len())];
    let step_params = StepParams::new(
        rp.eps.split(4.0 * rp.t_max as f64),
        1.0 / (rp.n_max as f64).powi(3),
        &rp.constants,
    );
    let step = gh_tree_step(g, s, terminals, &step_params, &mut rng.child("step"))?;

    let mask_scale = rp.eps.scale(8.0 * rp.t_max as f64);
    let x = g.fresh_label();
    let y0 = g.fresh_label().0;
    let mut branches = Vec::with_capacity(step.selected.len());
    let mut children = Vec::new();
    for (i, &v) in step.selected.iter().enumerate() {
        let cut = &step.sets[&v];
        let side = cut.side().clone();
        let sub_terminals: VertexSet = side.intersection(terminals).copied().collect();
        let tree = if sub_terminals.len() > 1 {
            let (contracted, _) = g.contract(&g.complement(&side), x)?;
            let masked = mask_hub(&contracted, x, mask_scale, &mut rng.child(&format!("mask/{v}")))?;
            let (tree, audit) = gh_tree(
                &masked,
                &sub_terminals,
                &rp.deeper(),
                &mut rng.child(&format!("branch/{v}")),
            )?;
            children.push(audit);
            tree
        } else {
            SteinerTree::singleton(v, side.iter().copied().chain([x]))
        };
        branches.push(Branch {
            tree,
            side,
            contracted: x,
            large_label: Vertex(y0 + i as u32),
            weight: cut.value(),
        });
    }

    let groups: Vec<(VertexSet, Vertex)> = branches
        .iter()
        .map(|b| (b.side.clone(), b.large_label))
        .collect();
    let g_large = if groups.is_empty() {
        g.clone()
    } else {
        g.contract_disjoint(&groups)?.0
    };
    let rest: VertexSet = terminals.difference(&step.covered).copied().collect();
    let (large_tree, large_audit) = if rest.len() > 1 {
        let (t, a) = gh_tree(&g_large, &rest, &rp.deeper(), &mut rng.child("large"))?;
        (t, Some(Box::new(a)))
    } else {
        let only = *rest.iter().next().expect("source is never covered");
        (
            SteinerTree::singleton(only, g_large.vertices().iter().copied()),
            None,
        )
    };

    let audit = RecursionAudit {
        depth: rp.depth,
        num_terminals: order.len(),
        step: step.ledger,
        edge_noise: Some(LedgerEntry {
            mechanism: "edge_mask".into(),
            charge: Charge::Laplace {
                sensitivity: 1.0,
                scale: mask_scale,
                count: 1,
            },
        }),
        children,
        large: large_audit,
    };
    Ok((combine_steiner(large_tree, branches), audit))
}

/// Output of [`final_gh_tree`].
#[derive(Debug, Clone, PartialEq)]
pub struct PrivateTree {
    /// Tree on all vertices with noisy, clamped edge weights.
    pub tree: SteinerTree,
    /// Worst-case path through the recursion plus the weight release.
    pub ledger: PrivacyLedger,
    pub audit: RecursionAudit,
    pub t_max: usize,
}

/// Private approximate Gomory-Hu tree of `g`: the recursion runs with `ε/2`
/// and each of the `n-1` tree weights receives `Lap(2(n-1)/ε)` noise,
/// clamped at 0.
pub fn final_gh_tree(
    g: &Graph,
    eps: Epsilon,
    constants: &Constants,
    rng: &mut NoiseRng,
) -> Result<PrivateTree> {
    constants.validate()?;
    let n = g.num_vertices();
    if n < 2 {
        return Err(Error::TooFewTerminals { needed: 2, got: n });
    }
    let rp = RecursionParams::new(eps.split(2.0), n, *constants);
    let (mut tree, audit) = gh_tree(g, &g.vertex_set(), &rp, &mut rng.child("tree"))?;

    let mut ledger = PrivacyLedger::new(eps);
    for e in audit.worst_path() {
        ledger.push(LedgerEntry {
            mechanism: format!("topology/{}", e.mechanism),
            charge: e.charge,
        });
    }
    let weight_scale = eps.scale(2.0 * (n - 1) as f64);
    ledger.charge_laplace("tree_weights", 1.0, weight_scale, n - 1);
    let mut weight_rng = rng.child("weights");
    let mut noise = Vec::with_capacity(n - 1);
    for _ in 0..n - 1 {
        noise.push(sample_laplace(weight_scale, &mut weight_rng)?);
    }
    tree.map_weights(|i, w| (w + noise[i]).max(0.0));

    Ok(PrivateTree {
        tree,
        ledger,
        t_max: rp.t_max,
        audit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::gomory_hu_exact;
    use crate::graph::vset;

    fn cycle4() -> Graph {
        Graph::from_edges([(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)]).unwrap()
    }

    #[test]
    fn step_noiseless_selects_exact_min_cuts() {
        let g = Graph::from_edges([
            (0, 1, 3.0),
            (1, 2, 1.0),
            (2, 3, 2.0),
            (3, 4, 5.0),
            (4, 0, 1.0),
            (1, 3, 2.0),
        ])
        .unwrap();
        let u = g.vertex_set();
        let params = StepParams::new(Epsilon::Infinite, 0.01, &Constants::default());
        for seed in 0..20 {
            let out = gh_tree_step(&g, Vertex(0), &u, &params, &mut NoiseRng::new(seed)).unwrap();
            for (&v, cut) in &out.sets {
                let lambda = min_st_cut_exact(&g, Vertex(0), v).unwrap().value;
                assert_eq!(cut.value(), lambda);
                assert!(!cut.contains(Vertex(0)));
            }
            assert_eq!(out.ledger.total(), 0.0);
        }
    }

    #[test]
    fn step_rejects_bad_input() {
        let g = cycle4();
        let params = StepParams::new(Epsilon::Finite(1.0), 0.1, &Constants::default());
        let mut rng = NoiseRng::new(0);
        assert!(gh_tree_step(&g, Vertex(0), &vset([0]), &params, &mut rng).is_err());
        assert!(gh_tree_step(&g, Vertex(0), &vset([1, 2]), &params, &mut rng).is_err());
    }

    #[test]
    fn step_ledger_spends_exactly_epsilon_when_all_levels_run() {
        // With |U| = 2 every level samples s plus possibly the other
        // terminal; force a full run through U = all of a small graph and
        // compare the charged total to the closed form.
        let g = cycle4();
        let eps = Epsilon::Finite(1.0);
        let params = StepParams::new(eps, 0.1, &Constants::default());
        let u = g.vertex_set();
        let out = gh_tree_step(&g, Vertex(0), &u, &params, &mut NoiseRng::new(3)).unwrap();
        assert!(out.ledger.within_budget());
        let levels = 3.0; // ⌊lg 4⌋ + 1
        let lam = 0.25;
        let per_level_iso_max = 0.5 / levels;
        let per_level_values = 0.25 / levels;
        assert!(out.ledger.total() <= lam + levels * (per_level_iso_max + per_level_values) + 1e-12);
    }

    #[test]
    fn singleton_terminals_base_case() {
        let g = cycle4();
        let rp = RecursionParams::new(Epsilon::Finite(1.0), 4, Constants::default());
        let (t, audit) = gh_tree(&g, &vset([2]), &rp, &mut NoiseRng::new(0)).unwrap();
        assert_eq!(t.num_nodes(), 1);
        assert!(t.assignment().values().all(|&x| x == Vertex(2)));
        assert_eq!(t.assignment().len(), 4);
        assert_eq!(audit.worst_path_cost(), 0.0);
    }

    #[test]
    fn noiseless_cycle_tree_has_weight_two() {
        let g = cycle4();
        for seed in 0..10 {
            let out = final_gh_tree(&g, Epsilon::Infinite, &Constants::default(), &mut NoiseRng::new(seed))
                .unwrap();
            out.tree.validate().unwrap();
            assert!(out.tree.edges().iter().all(|e| e.weight == 2.0));
        }
    }

    #[test]
    fn two_vertex_graph() {
        let g = Graph::from_edges([(0, 1, 5.0)]).unwrap();
        let out = final_gh_tree(&g, Epsilon::Infinite, &Constants::default(), &mut NoiseRng::new(0)).unwrap();
        assert_eq!(out.tree.edges().len(), 1);
        assert_eq!(out.tree.edges()[0].weight, 5.0);
        let exact = gomory_hu_exact(&g).unwrap();
        assert_eq!(exact.edges()[0].weight, 5.0);
    }

    #[test]
    fn abort_when_depth_exhausted() {
        let g = cycle4();
        let mut rp = RecursionParams::new(Epsilon::Finite(1.0), 4, Constants::default());
        rp.depth = rp.t_max + 1;
        let err = gh_tree(&g, &g.vertex_set(), &rp, &mut NoiseRng::new(17)).unwrap_err();
        assert!(matches!(err, Error::Aborted { seed: 17, .. }));
    }

    #[test]
    fn t_max_formula() {
        let rp = RecursionParams::new(Epsilon::Finite(1.0), 100, Constants::default());
        assert_eq!(rp.t_max, (4.0 * 100f64.log2().powi(2)).ceil() as usize);
        assert_eq!(RecursionParams::new(Epsilon::Infinite, 2, Constants::default()).t_max, 4);
    }

    #[test]
    fn private_run_is_within_budget() {
        let g = Graph::from_edges((0..10).flat_map(|i| [(i, (i + 1) % 10, 2.0), (i, (i + 4) % 10, 1.0)]))
            .unwrap();
        let eps = Epsilon::Finite(1.0);
        for seed in 0..5 {
            let out = final_gh_tree(&g, eps, &Constants::default(), &mut NoiseRng::new(seed)).unwrap();
            out.tree.validate().unwrap();
            assert!(out.ledger.within_budget(), "{}", out.ledger.total());
        }
    }
}
