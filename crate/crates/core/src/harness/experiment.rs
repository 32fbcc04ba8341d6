//! Seeded error sweeps. For each `(seed, eps)` cell a tree is built and every
//! vertex pair is queried against exact `λ` values.

use std::fmt::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::config::{ExperimentConfig, Mode};
use super::{HarnessError, HarnessResult};
use crate::applications::tree_query;
use crate::exact::gomory_hu_exact;
use crate::gh_private::final_gh_tree;
use crate::graph::{Graph, Vertex};
use crate::privacy::{Epsilon, NoiseRng};
use crate::tree::SteinerTree;

pub const CSV_HEADER: &str =
    "pair_s,pair_t,seed,eps,lambda_exact,tree_value,side_true_weight,side_error,value_error";

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub pair_s: Vertex,
    pub pair_t: Vertex,
    pub seed: u64,
    pub eps: Epsilon,
    pub lambda_exact: f64,
    /// The released (noisy) tree weight.
    pub tree_value: f64,
    /// True weight of the returned side; not private.
    pub side_true_weight: f64,
    /// `side_true_weight - lambda_exact`.
    pub side_error: f64,
    /// `|tree_value - lambda_exact|`.
    pub value_error: f64,
}

/// Per-`eps` aggregates over seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsSummary {
    pub eps: Epsilon,
    pub cells: usize,
    pub aborts: Vec<u64>,
    /// Median over seeds of the largest side error in the cell.
    pub median_max_side_error: f64,
    pub median_max_value_error: f64,
    pub max_depth: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub max_side_error: f64,
    pub median_side_error: f64,
    pub max_value_error: f64,
    pub median_value_error: f64,
    pub aborts: usize,
    pub per_eps: Vec<EpsSummary>,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub rows: Vec<ReportRow>,
    pub summary: Summary,
}

struct Cell {
    eps_index: usize,
    seed: u64,
    outcome: Result<(Vec<ReportRow>, usize), ()>,
}

fn median(mut xs: Vec<f64>) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        (xs[m - 1] + xs[m]) / 2.0
    }
}

fn max(xs: impl Iterator<Item = f64>) -> f64 {
    xs.fold(0.0, f64::max)
}

/// `(s, t, λ(s, t))` for every pair `s < t`.
fn exact_pairs(g: &Graph, exact: &SteinerTree) -> HarnessResult<Vec<(Vertex, Vertex, f64)>> {
    let vs = g.vertices();
    let mut out = Vec::with_capacity(vs.len() * vs.len().saturating_sub(1) / 2);
    for (i, &s) in vs.iter().enumerate() {
        for &t in &vs[i + 1..] {
            out.push((s, t, tree_query(exact, g, s, t)?.value));
        }
    }
    Ok(out)
}

fn cell_rows(
    g: &Graph,
    lambdas: &[(Vertex, Vertex, f64)],
    tree: &SteinerTree,
    seed: u64,
    eps: Epsilon,
) -> HarnessResult<Vec<ReportRow>> {
    let mut rows = Vec::with_capacity(lambdas.len());
    for &(s, t, lambda) in lambdas {
        let q = tree_query(tree, g, s, t)?;
        rows.push(ReportRow {
            pair_s: s,
            pair_t: t,
            seed,
            eps,
            lambda_exact: lambda,
            tree_value: q.value,
            side_true_weight: q.cut.value(),
            side_error: q.cut.value() - lambda,
            value_error: (q.value - lambda).abs(),
        });
    }
    Ok(rows)
}

/// Runs every `(seed, eps)` cell, in parallel. Aborted cells are counted and
/// contribute no rows; other errors stop the sweep.
pub fn run_experiment(config: &ExperimentConfig) -> HarnessResult<ExperimentReport> {
    let start = Instant::now();
    let g = config.instance.load()?;
    let exact = gomory_hu_exact(&g)?;
    let lambdas = exact_pairs(&g, &exact)?;

    let jobs: Vec<(usize, u64)> = (0..config.eps.len())
        .flat_map(|e| config.seeds.iter().map(move |&s| (e, s)))
        .collect();
    let cells = jobs
        .par_iter()
        .map(|&(eps_index, seed)| -> HarnessResult<Cell> {
            let eps = config.eps[eps_index];
            let built = match config.mode {
                Mode::ExactBaseline => Ok((exact.clone(), 0)),
                Mode::Private | Mode::Noiseless => {
                    final_gh_tree(&g, eps, &config.constants, &mut NoiseRng::new(seed))
                        .map(|p| (p.tree, p.audit.max_depth()))
                }
            };
            let outcome = match built {
                Ok((tree, depth)) => Ok((cell_rows(&g, &lambdas, &tree, seed, eps)?, depth)),
                Err(crate::Error::Aborted { .. }) => Err(()),
                Err(e) => return Err(HarnessError::Core(e)),
            };
            Ok(Cell {
                eps_index,
                seed,
                outcome,
            })
        })
        .collect::<HarnessResult<Vec<Cell>>>()?;

    let mut per_eps = Vec::new();
    for (e, &eps) in config.eps.iter().enumerate() {
        let mine: Vec<&Cell> = cells.iter().filter(|c| c.eps_index == e).collect();
        let done: Vec<&(Vec<ReportRow>, usize)> = mine.iter().filter_map(|c| c.outcome.as_ref().ok()).collect();
        per_eps.push(EpsSummary {
            eps,
            cells: mine.len(),
            aborts: mine.iter().filter(|c| c.outcome.is_err()).map(|c| c.seed).collect(),
            median_max_side_error: median(done.iter().map(|(r, _)| max(r.iter().map(|x| x.side_error))).collect()),
            median_max_value_error: median(done.iter().map(|(r, _)| max(r.iter().map(|x| x.value_error))).collect()),
            max_depth: done.iter().map(|(_, d)| *d).max().unwrap_or(0),
        });
    }

    let mut rows: Vec<(usize, ReportRow)> = cells
        .into_iter()
        .filter_map(|c| c.outcome.ok().map(|(r, _)| (c.eps_index, r)))
        .flat_map(|(e, r)| r.into_iter().map(move |row| (e, row)))
        .collect();
    rows.sort_by(|(ea, a), (eb, b)| {
        (a.pair_s, a.pair_t, a.seed, ea).cmp(&(b.pair_s, b.pair_t, b.seed, eb))
    });
    let rows: Vec<ReportRow> = rows.into_iter().map(|(_, r)| r).collect();

    let summary = Summary {
        max_side_error: max(rows.iter().map(|r| r.side_error)),
        median_side_error: median(rows.iter().map(|r| r.side_error).collect()),
        max_value_error: max(rows.iter().map(|r| r.value_error)),
        median_value_error: median(rows.iter().map(|r| r.value_error).collect()),
        aborts: per_eps.iter().map(|p| p.aborts.len()).sum(),
        per_eps,
        wall_time: start.elapsed(),
    };
    Ok(ExperimentReport { rows, summary })
}

pub fn csv_string(rows: &[ReportRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.pair_s,
            r.pair_t,
            r.seed,
            r.eps,
            r.lambda_exact,
            r.tree_value,
            r.side_true_weight,
            r.side_error,
            r.value_error
        )
        .unwrap();
    }
    out
}

pub fn write_csv(rows: &[ReportRow], path: impl AsRef<Path>) -> HarnessResult<()> {
    let path = path.as_ref();
    std::fs::write(path, csv_string(rows)).map_err(|e| HarnessError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{Generator, InstanceSource};

    fn config(mode: Mode, eps: Vec<Epsilon>) -> ExperimentConfig {
        ExperimentConfig {
            instance: InstanceSource::Generated {
                generator: Generator::ErdosRenyiWeighted { n: 8, p: 0.5, max_weight: 5 },
                seed: 1,
            },
            eps,
            seeds: vec![0, 1, 2],
            mode,
            constants: Default::default(),
            output: None,
        }
    }

    #[test]
    fn noiseless_has_zero_error() {
        let r = run_experiment(&config(Mode::Noiseless, vec![Epsilon::Infinite])).unwrap();
        assert_eq!(r.rows.len(), 28 * 3);
        assert_eq!(r.summary.max_side_error, 0.0);
        assert_eq!(r.summary.max_value_error, 0.0);
    }

    #[test]
    fn exact_baseline_reproduces_exact_values() {
        let r = run_experiment(&config(Mode::ExactBaseline, vec![Epsilon::Infinite])).unwrap();
        assert!(r.rows.iter().all(|x| x.tree_value == x.lambda_exact));
    }

    #[test]
    fn private_rows_sorted_and_deterministic() {
        let c = config(Mode::Private, vec![Epsilon::Finite(2.0), Epsilon::Finite(1.0)]);
        let a = run_experiment(&c).unwrap();
        let b = run_experiment(&c).unwrap();
        assert_eq!(csv_string(&a.rows), csv_string(&b.rows));
        assert_eq!(a.rows.len(), 28 * 3 * 2);
        assert!(a.rows.iter().all(|r| r.side_error >= 0.0));
        assert_eq!(a.rows[0].eps, Epsilon::Finite(2.0));
        assert_eq!(a.rows[1].eps, Epsilon::Finite(1.0));
        assert!(csv_string(&a.rows).starts_with(CSV_HEADER));
    }
}
