use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mcst::bench::{run_bench, BenchConfig, Scenario};
use mcst::io::{format_mapping, gen_random_tree, gen_star, parse_tree, serialize_tree};
use mcst::reductions::{assignment_to_mcst, recover_mwpm, AssignmentInstance, ReductionError};
use mcst::solver::{solve_with, SolveOptions, SwapPolicy};
use mcst::{enumerate_all, EnumerateError, Tree, WeightModel, WeightTable};

const DEFAULT_SEED: u64 = 1;

#[derive(Parser)]
#[command(name = "mcst", version, about = "Maximum common subtree isomorphism between unrooted trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one maximum common subtree isomorphism.
    Solve {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        weights: WeightArgs,
        /// `auto` solves with the lower-degree tree as the rooted side.
        #[arg(long, value_enum, default_value = "never")]
        swap: Swap,
        #[arg(long, value_enum, default_value = "mapping")]
        output: Output,
    },
    /// List every maximum common subtree isomorphism.
    Enumerate {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        weights: WeightArgs,
        /// Stop after this many mappings.
        #[arg(long)]
        limit: Option<usize>,
        /// Print only the number of mappings.
        #[arg(long)]
        count_only: bool,
    },
    /// Write a generated tree.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Time the solver on generated instances and print CSV.
    Bench {
        #[arg(long)]
        scenario: Scenario,
        /// Comma-separated orders (label counts for the `labels` scenario).
        #[arg(long, value_delimiter = ',', required = true)]
        orders: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Solve trials concurrently (throughput only; timings are not comparable).
        #[arg(long)]
        parallel: bool,
    },
    /// Solve an assignment matrix through the star reduction.
    ReduceAssignment {
        matrix: PathBuf,
        /// Also write the two stars and the weight table into this directory.
        #[arg(long)]
        emit_trees: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// Uniform attachment tree.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Star with center 0.
    Star {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(multiple = false)]
struct WeightArgs {
    /// Weight table file.
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Count mapped vertices (the default).
    #[arg(long)]
    size: bool,
    /// Equal labels only; vertex pairs count 1.
    #[arg(long)]
    label_strict: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Swap {
    Never,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Mapping,
    Weight,
}

/// Failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

fn input_error(context: impl Display, err: impl Display) -> Failure {
    Failure { code: 2, message: format!("{context}: {err}") }
}

fn no_solution() -> Failure {
    Failure { code: 1, message: "no common subtree has finite weight".into() }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input_error(path.display(), e))
}

fn load_tree(path: &Path) -> Result<Tree, Failure> {
    parse_tree(&read(path)?).map_err(|e| input_error(path.display(), e))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| input_error(path.display(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn seed_or_default(seed: Option<u64>) -> Result<u64, Failure> {
    if let Some(s) = seed {
        return Ok(s);
    }
    match std::env::var("MCST_SEED") {
        Ok(v) => v.trim().parse().map_err(|e| input_error("MCST_SEED", e)),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

impl WeightArgs {
    fn model(&self) -> Result<WeightModel, Failure> {
        if let Some(path) = &self.weights {
            let table = WeightTable::parse(&read(path)?).map_err(|e| input_error(path.display(), e))?;
            Ok(WeightModel::Table(table))
        } else if self.label_strict {
            Ok(WeightModel::LabelStrict)
        } else {
            Ok(WeightModel::Size)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve { first, second, weights, swap, output } => {
            let (g, h, model) = (load_tree(&first)?, load_tree(&second)?, weights.model()?);
            let swap = match swap {
                Swap::Never => SwapPolicy::Never,
                Swap::Auto => SwapPolicy::Auto,
            };
            let result = solve_with(&g, &h, &model, SolveOptions { swap, ..Default::default() });
            if !result.weight.is_finite() {
                return Err(no_solution());
            }
            match output {
                Output::Weight => println!("{}", result.weight),
                Output::Mapping => print!("{}", format_mapping(&result.witness)),
            }
        }
        Command::Enumerate { first, second, weights, limit, count_only } => {
            let (g, h, model) = (load_tree(&first)?, load_tree(&second)?, weights.model()?);
            let stream = enumerate_all(&g, &h, &model, limit).map_err(|EnumerateError::NoSolution| no_solution())?;
            if count_only {
                println!("{}", stream.count());
            } else {
                for (i, iso) in stream.enumerate() {
                    if i > 0 {
                        println!();
                    }
                    print!("{}", format_mapping(&iso));
                }
            }
        }
        Command::Gen { kind } => {
            let (tree, out) = match kind {
                GenKind::Random { n, seed, out } => {
                    if n == 0 {
                        return Err(input_error("--n", "a tree needs at least one vertex"));
                    }
                    (gen_random_tree(n, seed_or_default(seed)?), out)
                }
                GenKind::Star { n, out } => {
                    if n == 0 {
                        return Err(input_error("--n", "a tree needs at least one vertex"));
                    }
                    (gen_star(n), out)
                }
            };
            write_or_print(out.as_deref(), &serialize_tree(&tree))?;
        }
        Command::Bench { scenario, mut orders, trials, seed, csv, parallel } => {
            if trials == 0 || orders.contains(&0) {
                return Err(input_error("bench", "orders and trials must be positive"));
            }
            orders.sort_unstable();
            orders.dedup();
            let config = BenchConfig { scenario, orders, trials, seed: seed_or_default(seed)?, parallel };
            write_or_print(csv.as_deref(), &run_bench(&config).to_csv())?;
        }
        Command::ReduceAssignment { matrix, emit_trees } => {
            let instance = AssignmentInstance::parse(&read(&matrix)?).map_err(|e| input_error(matrix.display(), e))?;
            let reduction = assignment_to_mcst(&instance).map_err(|e| input_error(matrix.display(), e))?;
            if let Some(dir) = emit_trees {
                fs::create_dir_all(&dir).map_err(|e| input_error(dir.display(), e))?;
                let WeightModel::Table(table) = &reduction.model else { unreachable!("reductions use tables") };
                for (name, text) in [
                    ("first.tree", serialize_tree(&reduction.g)),
                    ("second.tree", serialize_tree(&reduction.h)),
                    ("weights.txt", table.to_text()),
                ] {
                    let path = dir.join(name);
                    fs::write(&path, text).map_err(|e| input_error(path.display(), e))?;
                }
            }
            let result = solve_with(&reduction.g, &reduction.h, &reduction.model, SolveOptions::default());
            let assignment = recover_mwpm(&result.witness, &reduction).map_err(|e| match e {
                ReductionError::NoPerfectMatching { .. } => Failure { code: 1, message: e.to_string() },
                other => input_error(matrix.display(), other),
            })?;
            println!("weight {}", mcst::ExtendedWeight::finite(assignment.weight));
            for (i, j) in assignment.pairs {
                println!("{i} -> {j}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("mcst: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
