use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use pathrdf::bench::{chain, grid, time_all_pairs};
use pathrdf::closure::{closure, ClosureConfig};
use pathrdf::ntriples::{parse_ntriples_with, write_ntriples};
use pathrdf::path::{eval_pair, parse_path, Dialect};
use pathrdf::query::{parse_query, Query};
use pathrdf::rewrite::{rewrite_query, RewriteMode};
use pathrdf::{answer, render_rows, EntailmentMode, Graph, Prefixes, Term};

#[derive(Parser)]
#[command(name = "pathrdf", version, about = "Query RDF graphs under RDFS semantics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a query file against an N-Triples data file.
    Query {
        data: PathBuf,
        query: PathBuf,
        #[arg(long, default_value = "simple")]
        semantics: String,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Saturate a graph with the RDFS rules.
    Closure {
        data: PathBuf,
        /// Also make sc and sp reflexive.
        #[arg(long)]
        reflexive: bool,
        /// Use the extended rule set.
        #[arg(long)]
        extended: bool,
        /// Write the graph here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a SPARQL query rewritten into a path dialect.
    Rewrite {
        query: PathBuf,
        #[arg(long)]
        mode: String,
    },
    /// Time path evaluation on synthetic graphs and print CSV.
    Bench {
        #[arg(long, value_enum)]
        shape: Shape,
        /// Comma-separated sizes: triples for a chain, side length for a grid.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long)]
        expr: String,
        /// Time one first-to-last pair test instead of all pairs.
        #[arg(long)]
        endpoints: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Shape {
    Chain,
    Grid,
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_graph(path: &Path, prefixes: &mut Prefixes) -> anyhow::Result<Graph> {
    let text = read(path)?;
    parse_ntriples_with(&text, prefixes).with_context(|| format!("in {}", path.display()))
}

fn load_query(path: &Path) -> anyhow::Result<Query> {
    let text = read(path)?;
    parse_query(&text).with_context(|| format!("in {}", path.display()))
}

fn cmd_query(data: &Path, query: &Path, semantics: &str, format: Format) -> anyhow::Result<()> {
    let mode: EntailmentMode = semantics.parse()?;
    let mut prefixes = Prefixes::default();
    let g = load_graph(data, &mut prefixes)?;
    let q = load_query(query)?;
    for (p, iri) in q.prefixes.entries() {
        prefixes.insert(p, iri);
    }
    let answers = answer(&q, &g, mode)?;
    let vars = q.projection();
    let rows = render_rows(&answers, &vars, &prefixes);
    match format {
        Format::Tsv => {
            let header: Vec<String> = vars.iter().map(|v| format!("?{v}")).collect();
            println!("{}", header.join("\t"));
            for row in rows {
                let cells: Vec<String> = row.into_iter().map(Option::unwrap_or_default).collect();
                println!("{}", cells.join("\t"));
            }
        }
        Format::Json => {
            let json = serde_json::json!({
                "vars": vars.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "rows": rows,
            });
            println!("{}", serde_json::to_string_pretty(&json)?);
        }
    }
    Ok(())
}

fn cmd_closure(data: &Path, reflexive: bool, extended: bool, out: Option<&Path>) -> anyhow::Result<()> {
    let mut prefixes = Prefixes::default();
    let g = load_graph(data, &mut prefixes)?;
    let cfg = ClosureConfig {
        reflexive,
        extended,
        ..ClosureConfig::default()
    };
    let closed = closure(&g, &cfg)?;
    let text = write_ntriples(&closed, &prefixes);
    let derived = closed.len() - g.len();
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
            println!("{derived} derived triples");
        }
        None => {
            print!("{text}");
            eprintln!("{derived} derived triples");
        }
    }
    Ok(())
}

fn cmd_rewrite(query: &Path, mode: &str) -> anyhow::Result<()> {
    let mode: RewriteMode = mode.parse()?;
    let q = load_query(query)?;
    println!("{}", rewrite_query(&q, mode)?.render());
    Ok(())
}

fn cmd_bench(shape: Shape, sizes: &[usize], expr: &str, endpoints: bool) -> anyhow::Result<()> {
    let e = parse_path(expr, Dialect::Mixed)?;
    if !e.is_closed() {
        bail!("benchmark expressions must not export variables");
    }
    println!("size,triples,pairs,millis");
    for &n in sizes {
        let (g, first, last) = match shape {
            Shape::Chain => (chain(n), Term::iri("n0"), Term::iri(format!("n{n}"))),
            Shape::Grid => {
                let far = n.saturating_sub(1);
                (grid(n, n), Term::iri("g0_0"), Term::iri(format!("g{far}_{far}")))
            }
        };
        let (pairs, elapsed) = if endpoints {
            let start = std::time::Instant::now();
            let hit = eval_pair(&g, &e, &first, &last);
            (usize::from(hit), start.elapsed())
        } else {
            time_all_pairs(&g, &e)
        };
        println!("{n},{},{pairs},{:.3}", g.len(), elapsed.as_secs_f64() * 1e3);
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Query {
            data,
            query,
            semantics,
            format,
        } => cmd_query(&data, &query, &semantics, format),
        Command::Closure {
            data,
            reflexive,
            extended,
            out,
        } => cmd_closure(&data, reflexive, extended, out.as_deref()),
        Command::Rewrite { query, mode } => cmd_rewrite(&query, &mode),
        Command::Bench {
            shape,
            sizes,
            expr,
            endpoints,
        } => cmd_bench(shape, &sizes, &expr, endpoints),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            match err.downcast_ref::<pathrdf::Error>() {
                Some(pathrdf::Error::Dialect(_)) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
