use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dpgh::applications::{min_k_cut, tree_query};
use dpgh::exact::gomory_hu_exact;
use dpgh::gh_private::final_gh_tree;
use dpgh::harness::{
    constants_with_overrides, load_graph, load_tree, run_experiment, save_tree, write_csv, ExperimentConfig,
    HarnessError,
};
use dpgh::{Epsilon, NoiseRng, Vertex, VertexSet};

/// Private approximate Gomory-Hu trees.
///
/// Constants can be overridden with GHTREE_C1, GHTREE_C2, GHTREE_C_DEPTH and
/// GHTREE_PENALTY. Exit status is 1 on invalid input and 2 when the
/// recursion hits its depth limit.
#[derive(Parser)]
#[command(name = "ghtree", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a private tree.
    Build {
        #[arg(long)]
        input: PathBuf,
        /// Privacy budget, or `inf` for the noiseless mode.
        #[arg(long)]
        eps: Epsilon,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Minimum cut between two vertices, read off a tree.
    Query {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        #[arg(short)]
        s: u32,
        #[arg(short)]
        t: u32,
        /// Also print the side's weight in the graph (not private).
        #[arg(long)]
        true_weight: bool,
    },
    /// Approximate minimum k-cut from a tree.
    Kcut {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        #[arg(short)]
        k: usize,
    },
    /// Build the exact tree (not private).
    Exact {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run an error sweep and write the CSV report.
    Bench {
        #[arg(long)]
        config: PathBuf,
        /// Defaults to `output` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn fmt_set(s: &VertexSet) -> String {
    s.iter().map(Vertex::to_string).collect::<Vec<_>>().join(" ")
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    let constants = constants_with_overrides(|k| std::env::var(k).ok())?;
    match cli.command {
        Command::Build { input, eps, seed, out } => {
            let g = load_graph(&input)?;
            let built = final_gh_tree(&g, eps, &constants, &mut NoiseRng::new(seed))?;
            save_tree(&built.tree, &out)?;
            eprintln!(
                "wrote {} nodes to {}; charged {:.6} of eps = {eps}; depth {} of t_max {}",
                built.tree.num_nodes(),
                out.display(),
                built.ledger.total(),
                built.audit.max_depth(),
                built.t_max
            );
        }
        Command::Query { tree, graph, s, t, true_weight } => {
            let (tree, g) = (load_tree(&tree)?, load_graph(&graph)?);
            let a = tree_query(&tree, &g, Vertex(s), Vertex(t))?;
            println!("value {}", a.value);
            println!("side {}", fmt_set(a.cut.side()));
            if true_weight {
                println!("true_weight {} (not private)", a.cut.value());
            }
        }
        Command::Kcut { tree, graph, k } => {
            let (tree, g) = (load_tree(&tree)?, load_graph(&graph)?);
            let sol = min_k_cut(&tree, &g, k)?;
            println!("value {}", sol.value);
            for p in &sol.partition {
                println!("part {}", fmt_set(p));
            }
        }
        Command::Exact { input, out } => {
            let tree = gomory_hu_exact(&load_graph(&input)?)?;
            save_tree(&tree, &out)?;
            eprintln!("wrote {} nodes to {}", tree.num_nodes(), out.display());
        }
        Command::Bench { config, out } => {
            let config = ExperimentConfig::load(&config, constants)?;
            let out = out
                .or_else(|| config.output.clone())
                .ok_or_else(|| HarnessError::Config("no output path: pass --out or set `output`".into()))?;
            let report = run_experiment(&config)?;
            write_csv(&report.rows, &out)?;
            let s = &report.summary;
            eprintln!(
                "{} rows to {}; max side error {}, max value error {}, {} aborted cells, {:.2?}",
                report.rows.len(),
                out.display(),
                s.max_side_error,
                s.max_value_error,
                s.aborts,
                s.wall_time
            );
            for p in &s.per_eps {
                eprintln!(
                    "  eps {}: median max side error {}, median max value error {}, aborted seeds {:?}",
                    p.eps, p.median_max_side_error, p.median_max_value_error, p.aborts
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_abort() { 2 } else { 1 })
        }
    }
}
