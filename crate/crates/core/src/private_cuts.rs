//! Private minimum cuts.
//!
//! [`private_min_st_cut`] perturbs the graph with exponentially distributed
//! edges from every non-terminal to both `s` and `t` and releases the exact
//! minimum cut of the perturbed graph. [`private_isolating_cuts`] runs the
//! bit-partition isolating-cuts scheme on top of it, with an extra penalty
//! that discourages returned cuts from swallowing many vertices of a chosen
//! set `U`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact::{bit_partition_regions, contract_terminal_sets, min_st_cut_exact};
use crate::graph::{CutSide, Graph, GraphBuilder, Vertex, VertexSet};
use crate::privacy::{sample_exponential, Epsilon, NoiseRng, PrivacyLedger};

/// Private minimum `s`-`t` cut. The reported value is the true weight of the
/// returned side in `g`.
pub fn private_min_st_cut(
    g: &Graph,
    s: Vertex,
    t: Vertex,
    eps: Epsilon,
    rng: &mut NoiseRng,
    ledger: &mut PrivacyLedger,
) -> Result<CutSide> {
    g.check_vertices([&s, &t])?;
    if s == t {
        return Err(Error::SameEndpoints(s));
    }
    ledger.charge_pure("private_min_st_cut", eps, 1);
    if eps.is_noiseless() {
        return Ok(min_st_cut_exact(g, s, t)?.cut);
    }
    let mean = eps.scale(1.0);
    let mut b = GraphBuilder::with_vertices(g.vertices().iter().copied());
    for (u, v, w) in g.edges() {
        b.add_edge(u, v, w)?;
    }
    for &v in g.vertices() {
        if v == s || v == t {
            continue;
        }
        b.add_edge(v, s, sample_exponential(mean, rng)?)?;
        b.add_edge(v, t, sample_exponential(mean, rng)?)?;
    }
    let noisy = b.build();
    let side = min_st_cut_exact(&noisy, s, t)?.cut.into_side();
    CutSide::new(g, side)
}

/// Private minimum cut separating `sources` from `sinks`: both sets are
/// contracted to single vertices and [`private_min_st_cut`] is run on the
/// result. Singleton sets are used as-is.
#[allow(non_snake_case)]
pub fn private_min_ST_cut(
    g: &Graph,
    sources: &VertexSet,
    sinks: &VertexSet,
    eps: Epsilon,
    rng: &mut NoiseRng,
    ledger: &mut PrivacyLedger,
) -> Result<CutSide> {
    let (h, s, t, map) = contract_terminal_sets(g, sources, sinks)?;
    let inner = private_min_st_cut(&h, s, t, eps, rng, ledger)?;
    CutSide::new(g, map.lift(inner.side()))
}

/// Parameters of [`private_isolating_cuts`].
#[derive(Debug, Clone, PartialEq)]
pub struct IsoCutParams {
    pub eps: Epsilon,
    /// Failure probability in `(0, 1)`.
    pub beta: f64,
    /// Vertices whose count inside each returned cut is penalized.
    pub penalized: VertexSet,
    pub penalty_const: f64,
}

pub const DEFAULT_PENALTY_CONST: f64 = 4.0;

impl IsoCutParams {
    pub fn new(eps: Epsilon, beta: f64, penalized: VertexSet) -> Self {
        Self {
            eps,
            beta,
            penalized,
            penalty_const: DEFAULT_PENALTY_CONST,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "beta must lie in (0, 1), got {}",
                self.beta
            )));
        }
        if !(self.penalty_const > 0.0) || !self.penalty_const.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "penalty constant must be positive, got {}",
                self.penalty_const
            )));
        }
        Ok(())
    }

    /// Weight added between each penalized vertex of `W_r` and `t_r`:
    /// `C · (n + lg(1/β)) · lg²|R| / (ε |U|)`. Zero when `U` is empty or in
    /// noiseless mode.
    pub fn penalty_weight(&self, n: usize, num_terminals: usize) -> f64 {
        if self.penalized.is_empty() {
            return 0.0;
        }
        let lg_r = (num_terminals as f64).log2();
        let numerator =
            self.penalty_const * (n as f64 + (1.0 / self.beta).log2()) * lg_r * lg_r;
        self.eps
            .inverse_times(numerator / self.penalized.len() as f64)
    }
}

/// Output of [`private_isolating_cuts`].
#[derive(Debug, Clone, PartialEq)]
pub struct IsoCutsResult {
    pub cuts: BTreeMap<Vertex, CutSide>,
    /// `Σ_v w_G(Ŝ_v)`.
    pub total_value: f64,
    /// The sets `W_r` left by the bit-partition rounds.
    pub regions: BTreeMap<Vertex, VertexSet>,
}

/// Number of private min-cut calls made for `k` terminals, and the budget
/// each call receives.
pub fn isolating_cut_calls(k: usize, eps: Epsilon) -> (usize, Epsilon) {
    let rounds = (usize::BITS - 1 - (k - 1).leading_zeros()) as usize + 1;
    (rounds + 1, eps.split((k as f64).log2() + 2.0))
}

/// Private minimum isolating cuts for the terminals `terminals`.
///
/// Runs `⌊lg(|R|-1)⌋ + 1` rounds of private `A_i`-vs-rest cuts to shrink
/// each region `W_r`, then solves all `r`-vs-`t_r` problems in one combined
/// graph with a single private cut. Each call gets `ε / (lg|R| + 2)`.
pub fn private_isolating_cuts(
    g: &Graph,
    terminals: &VertexSet,
    params: &IsoCutParams,
    rng: &mut NoiseRng,
    ledger: &mut PrivacyLedger,
) -> Result<IsoCutsResult> {
    let k = terminals.len();
    if k < 2 {
        return Err(Error::TooFewTerminals { needed: 2, got: k });
    }
    params.validate()?;
    g.check_vertices(terminals)?;
    let (_, eps_call) = isolating_cut_calls(k, params.eps);
    let order: Vec<Vertex> = terminals.iter().copied().collect();

    let regions = bit_partition_regions(g, &order, |_, a, b| {
        Ok(private_min_ST_cut(g, a, b, eps_call, rng, ledger)?.into_side())
    })?;

    let penalty = params.penalty_weight(g.num_vertices(), k);
    let combined = CombinedInstance::build(g, &order, &regions, &params.penalized, penalty)?;
    let side = private_min_ST_cut(
        &combined.graph,
        &combined.sources,
        &combined.sinks,
        eps_call,
        rng,
        ledger,
    )?;

    let mut cuts = BTreeMap::new();
    let mut total_value = 0.0;
    for (idx, &r) in order.iter().enumerate() {
        let chosen: VertexSet = combined.members[idx]
            .iter()
            .filter(|(h, _)| side.contains(*h))
            .map(|&(_, v)| v)
            .collect();
        let cut = CutSide::new(g, chosen)?;
        total_value += cut.value();
        cuts.insert(r, cut);
    }
    Ok(IsoCutsResult {
        cuts,
        total_value,
        regions: order.into_iter().zip(regions).collect(),
    })
}

/// Disjoint union of the graphs `H_r`: `G` restricted to `W_r` with the
/// rest contracted to a sink `t_r`, plus penalty edges.
struct CombinedInstance {
    graph: Graph,
    sources: VertexSet,
    sinks: VertexSet,
    /// Per terminal, `(label in H, original vertex)` for each vertex of `W_r`.
    members: Vec<Vec<(Vertex, Vertex)>>,
}

impl CombinedInstance {
    fn build(
        g: &Graph,
        order: &[Vertex],
        regions: &[VertexSet],
        penalized: &VertexSet,
        penalty: f64,
    ) -> Result<Self> {
        let mut next = 0u32;
        let mut label: BTreeMap<Vertex, (usize, Vertex)> = BTreeMap::new();
        let mut members = Vec::with_capacity(order.len());
        let mut sink_of = Vec::with_capacity(order.len());
        let mut b = GraphBuilder::new();
        for (idx, region) in regions.iter().enumerate() {
            let mut m = Vec::with_capacity(region.len());
            for &v in region {
                let h = Vertex(next);
                next += 1;
                label.insert(v, (idx, h));
                m.push((h, v));
                b.add_vertex(h);
            }
            let sink = Vertex(next);
            next += 1;
            b.add_vertex(sink);
            sink_of.push(sink);
            members.push(m);
        }
        for (u, v, w) in g.edges() {
            match (label.get(&u), label.get(&v)) {
                (Some(&(ru, hu)), Some(&(rv, hv))) if ru == rv => {
                    b.add_edge(hu, hv, w)?;
                }
                (lu, lv) => {
                    for &(r, h) in lu.into_iter().chain(lv) {
                        b.add_edge(h, sink_of[r], w)?;
                    }
                }
            }
        }
        if penalty > 0.0 {
            for (idx, m) in members.iter().enumerate() {
                for &(h, v) in m {
                    if penalized.contains(&v) {
                        b.add_edge(h, sink_of[idx], penalty)?;
                    }
                }
            }
        }
        let sources = order.iter().map(|r| label[r].1).collect();
        let sinks = sink_of.into_iter().collect();
        Ok(Self {
            graph: b.build(),
            sources,
            sinks,
            members,
        })
    }
}
