//! Seeded random and structured instances. All generators produce graphs on
//! vertices `0..n`.

use rand::Rng;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, Vertex};
use crate::privacy::NoiseRng;

fn default_max_weight() -> u32 {
    10
}
fn default_p_in() -> f64 {
    0.5
}
fn default_bridge() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "generator", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Generator {
    /// `G(n, p)` with integer weights uniform in `1..=max_weight`.
    ErdosRenyiWeighted {
        n: usize,
        p: f64,
        #[serde(default = "default_max_weight")]
        max_weight: u32,
    },
    Cycle { n: usize },
    Path { n: usize },
    /// Two `k`-cliques joined by one edge `(k-1, k)`.
    Dumbbell { k: usize, intra: f64, bridge: f64 },
    Grid { rows: usize, cols: usize },
    /// Two blocks of `block` vertices, each a unit cycle plus unit chords
    /// with probability `p_in`, joined by one edge of weight `bridge`.
    PlantedCommunity {
        block: usize,
        #[serde(default = "default_p_in")]
        p_in: f64,
        #[serde(default = "default_bridge")]
        bridge: f64,
    },
}

fn invalid(msg: String) -> Error {
    Error::InvalidParameter(msg)
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}

fn check_weight(w: f64) -> Result<()> {
    if !(w > 0.0) || !w.is_finite() {
        return Err(invalid(format!("weight must be positive, got {w}")));
    }
    Ok(())
}

fn v(i: usize) -> Vertex {
    Vertex(i as u32)
}

/// Deterministic in `(generator, seed)`.
pub fn generate(generator: &Generator, seed: u64) -> Result<Graph> {
    let mut rng = NoiseRng::new(seed).child("generator");
    let g = match *generator {
        Generator::ErdosRenyiWeighted { n, p, max_weight } => {
            check_probability(p)?;
            if max_weight == 0 {
                return Err(invalid("max_weight must be at least 1".into()));
            }
            let mut b = GraphBuilder::with_vertices((0..n).map(v));
            for i in 0..n {
                for j in i + 1..n {
                    if rng.uniform() < p {
                        b.add_edge(v(i), v(j), rng.gen_range(1..=max_weight) as f64)?;
                    }
                }
            }
            b.build()
        }
        Generator::Cycle { n } => {
            if n < 3 {
                return Err(invalid(format!("cycle needs n >= 3, got {n}")));
            }
            Graph::from_edges((0..n).map(|i| (i as u32, ((i + 1) % n) as u32, 1.0)))?
        }
        Generator::Path { n } => {
            if n < 2 {
                return Err(invalid(format!("path needs n >= 2, got {n}")));
            }
            Graph::from_edges((1..n).map(|i| (i as u32 - 1, i as u32, 1.0)))?
        }
        Generator::Dumbbell { k, intra, bridge } => {
            if k < 2 {
                return Err(invalid(format!("dumbbell needs k >= 2, got {k}")));
            }
            check_weight(intra)?;
            check_weight(bridge)?;
            let mut b = GraphBuilder::new();
            for off in [0, k] {
                for i in 0..k {
                    for j in i + 1..k {
                        b.add_edge(v(off + i), v(off + j), intra)?;
                    }
                }
            }
            b.add_edge(v(k - 1), v(k), bridge)?;
            b.build()
        }
        Generator::Grid { rows, cols } => {
            if rows * cols < 2 {
                return Err(invalid(format!("grid {rows}x{cols} has fewer than 2 vertices")));
            }
            let mut b = GraphBuilder::with_vertices((0..rows * cols).map(v));
            for r in 0..rows {
                for c in 0..cols {
                    let i = r * cols + c;
                    if c + 1 < cols {
                        b.add_edge(v(i), v(i + 1), 1.0)?;
                    }
                    if r + 1 < rows {
                        b.add_edge(v(i), v(i + cols), 1.0)?;
                    }
                }
            }
            b.build()
        }
        Generator::PlantedCommunity { block, p_in, bridge } => {
            if block < 3 {
                return Err(invalid(format!("planted-community needs block >= 3, got {block}")));
            }
            check_probability(p_in)?;
            check_weight(bridge)?;
            let mut b = GraphBuilder::new();
            for off in [0, block] {
                for i in 0..block {
                    for j in i + 1..block {
                        let ring = j == i + 1 || (i == 0 && j == block - 1);
                        if ring || rng.uniform() < p_in {
                            b.add_edge(v(off + i), v(off + j), 1.0)?;
                        }
                    }
                }
            }
            b.add_edge(v(block - 1), v(block), bridge)?;
            b.build()
        }
    };
    Ok(g)
}
