//! Exact (non-private) cut algorithms and brute-force oracles.
//!
//! Everything here is deterministic. Minimum cut sides are always the set of
//! vertices reachable from the source in the final residual network, i.e.
//! the inclusion-wise smallest minimum cut containing the source.

mod maxflow;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{ContractionMap, CutSide, Graph, Vertex, VertexSet};
use crate::tree::{Branch, SteinerTree};

pub(crate) use maxflow::FlowNetwork;

/// Minimum `s`-`t` cut: the source side and `λ_G(s, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxFlowResult {
    pub cut: CutSide,
    pub value: f64,
}

/// Largest graph [`brute_force_min_cut`] will enumerate.
pub const BRUTE_FORCE_LIMIT: usize = 20;

pub(crate) fn network_of(g: &Graph) -> FlowNetwork {
    let mut net = FlowNetwork::new(g.num_vertices());
    for (u, v, w) in g.edges() {
        let (iu, iv) = (g.index_of(u).expect("vertex"), g.index_of(v).expect("vertex"));
        net.add_undirected(iu, iv, w);
    }
    net
}

/// Exact minimum `s`-`t` cut by max-flow.
pub fn min_st_cut_exact(g: &Graph, s: Vertex, t: Vertex) -> Result<MaxFlowResult> {
    let is = g.index_of(s).ok_or(Error::UnknownVertex(s))?;
    let it = g.index_of(t).ok_or(Error::UnknownVertex(t))?;
    if s == t {
        return Err(Error::SameEndpoints(s));
    }
    let mut net = network_of(g);
    net.max_flow(is, it);
    let reach = net.source_side(is);
    let side: VertexSet = g
        .vertices()
        .iter()
        .zip(&reach)
        .filter(|(_, &r)| r)
        .map(|(&v, _)| v)
        .collect();
    let cut = CutSide::new(g, side)?;
    Ok(MaxFlowResult {
        value: cut.value(),
        cut,
    })
}

/// Contracts `sources` and `sinks` to one vertex each. Singletons keep their
/// own label; larger sets get fresh labels. Returns the contracted graph,
/// the two representatives and the map back.
pub(crate) fn contract_terminal_sets(
    g: &Graph,
    sources: &VertexSet,
    sinks: &VertexSet,
) -> Result<(Graph, Vertex, Vertex, ContractionMap)> {
    if sources.is_empty() || sinks.is_empty() {
        return Err(Error::EmptySet);
    }
    g.check_vertices(sources.iter().chain(sinks))?;
    if let Some(&x) = sources.intersection(sinks).next() {
        return Err(Error::Overlapping(x));
    }
    let fresh = g.fresh_label();
    let pick = |set: &VertexSet, offset: u32| {
        if set.len() == 1 {
            *set.iter().next().expect("singleton")
        } else {
            Vertex(fresh.0 + offset)
        }
    };
    let (s, t) = (pick(sources, 0), pick(sinks, 1));
    let (h, maps) = g.contract_disjoint(&[(sources.clone(), s), (sinks.clone(), t)])?;
    let map = maps.into_iter().next().expect("two contractions");
    Ok((h, s, t, map))
}

/// Exact minimum cut separating the vertex set `sources` from `sinks`. The
/// returned side contains all of `sources` and none of `sinks`.
#[allow(non_snake_case)]
pub fn min_ST_cut_exact(g: &Graph, sources: &VertexSet, sinks: &VertexSet) -> Result<MaxFlowResult> {
    let (h, s, t, map) = contract_terminal_sets(g, sources, sinks)?;
    let inner = min_st_cut_exact(&h, s, t)?;
    let cut = CutSide::new(g, map.lift(inner.cut.side()))?;
    Ok(MaxFlowResult {
        value: cut.value(),
        cut,
    })
}

fn lg(x: usize) -> u32 {
    usize::BITS - 1 - x.leading_zeros()
}

/// Sets `W_r` after the bit-partition rounds: round `i` separates terminals
/// whose index has bit `i` clear from those where it is set, and every `W_r`
/// keeps the side its terminal landed on. `cut` returns the side containing
/// its first argument.
pub(crate) fn bit_partition_regions<F>(
    g: &Graph,
    terminals: &[Vertex],
    mut cut: F,
) -> Result<Vec<VertexSet>>
where
    F: FnMut(usize, &VertexSet, &VertexSet) -> Result<VertexSet>,
{
    let k = terminals.len();
    let mut regions = vec![g.vertex_set(); k];
    for i in 0..=lg(k - 1) {
        let in_a = |r: usize| r % (1 << (i + 1)) < (1 << i);
        let a: VertexSet = (0..k).filter(|&r| in_a(r)).map(|r| terminals[r]).collect();
        let b: VertexSet = (0..k).filter(|&r| !in_a(r)).map(|r| terminals[r]).collect();
        let side = cut(i as usize, &a, &b)?;
        for (r, region) in regions.iter_mut().enumerate() {
            if in_a(r) {
                region.retain(|v| side.contains(v));
            } else {
                region.retain(|v| !side.contains(v));
            }
        }
    }
    Ok(regions)
}

/// Minimum isolating cuts: for each terminal `r`, a minimum-weight set
/// containing `r` and no other terminal. The sets are pairwise disjoint.
pub fn isolating_cuts_exact(g: &Graph, terminals: &VertexSet) -> Result<BTreeMap<Vertex, CutSide>> {
    if terminals.len() < 2 {
        return Err(Error::TooFewTerminals {
            needed: 2,
            got: terminals.len(),
        });
    }
    g.check_vertices(terminals)?;
    let order: Vec<Vertex> = terminals.iter().copied().collect();
    let regions = bit_partition_regions(g, &order, |_, a, b| {
        Ok(min_ST_cut_exact(g, a, b)?.cut.into_side())
    })?;

    let mut out = BTreeMap::new();
    for (&r, region) in order.iter().zip(&regions) {
        // Everything outside W_r collapses into a sink; the minimum cut
        // between r and that sink, restricted to W_r, is the isolating cut.
        let outside = g.complement(region);
        let (h, map) = g.contract(&outside, g.fresh_label())?;
        let inner = min_st_cut_exact(&h, r, map.label())?;
        out.insert(r, CutSide::new(g, map.lift(inner.cut.side()))?);
    }
    Ok(out)
}

/// Exact Gomory-Hu tree on all of `V(G)` by the classic recursive
/// contraction scheme.
pub fn gomory_hu_exact(g: &Graph) -> Result<SteinerTree> {
    let Some(&first) = g.vertices().first() else {
        return Err(Error::EmptySet);
    };
    if g.num_vertices() < 2 {
        return Ok(SteinerTree::singleton(first, g.vertices().iter().copied()));
    }
    gomory_hu_steiner_exact(g, &g.vertex_set())
}

/// Exact Gomory-Hu Steiner tree for terminals `terminals ⊆ V(G)`.
///
/// Splits on a minimum cut between the two smallest terminals, contracts
/// the far side of each half, recurses, and joins the halves with the cut
/// edge.
pub fn gomory_hu_steiner_exact(g: &Graph, terminals: &VertexSet) -> Result<SteinerTree> {
    g.check_vertices(terminals)?;
    let mut it = terminals.iter().copied();
    let Some(s) = it.next() else {
        return Err(Error::EmptySet);
    };
    let Some(t) = it.next() else {
        return Ok(SteinerTree::singleton(s, g.vertices().iter().copied()));
    };
    let cut = min_st_cut_exact(g, s, t)?.cut;
    let side = cut.side().clone();
    let rest = g.complement(&side);

    let inner_terminals: VertexSet = terminals.intersection(&side).copied().collect();
    let outer_terminals: VertexSet = terminals.difference(&side).copied().collect();

    let x = g.fresh_label();
    let (g_side, _) = g.contract(&rest, x)?;
    let side_tree = gomory_hu_steiner_exact(&g_side, &inner_terminals)?;

    let y = g.fresh_label();
    let (g_rest, _) = g.contract(&side, y)?;
    let rest_tree = gomory_hu_steiner_exact(&g_rest, &outer_terminals)?;

    Ok(SteinerTree::combine(
        rest_tree,
        vec![Branch {
            tree: side_tree,
            side,
            contracted: x,
            large_label: y,
            weight: cut.value(),
        }],
    ))
}

/// Enumerates every side containing `s`; returns the minimum separating `s`
/// from `t`, ties broken toward the lexicographically smallest side.
pub fn brute_force_min_cut(g: &Graph, s: Vertex, t: Vertex) -> Result<MaxFlowResult> {
    let n = g.num_vertices();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    g.check_vertices([&s, &t])?;
    if s == t {
        return Err(Error::SameEndpoints(s));
    }
    let others: Vec<Vertex> = g
        .vertices()
        .iter()
        .copied()
        .filter(|&v| v != s && v != t)
        .collect();
    let mut best: Option<(f64, VertexSet)> = None;
    for mask in 0u64..(1 << others.len()) {
        let mut side: VertexSet = [s].into_iter().collect();
        side.extend(
            others
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v),
        );
        let w = g.cut_weight_unchecked(&side);
        let better = match &best {
            None => true,
            Some((bw, bs)) => w < *bw || (w == *bw && side < *bs),
        };
        if better {
            best = Some((w, side));
        }
    }
    let (_, side) = best.expect("at least one side");
    let cut = CutSide::new(g, side)?;
    Ok(MaxFlowResult {
        value: cut.value(),
        cut,
    })
}
