use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use metatop::artin::Convention;
use metatop::homology::{SearchOptions, DEFAULT_UNKNOWN_BUDGET};
use metatop_cli::commands::{self, InputError, EXIT_INPUT};
use metatop_cli::report::Report;

#[derive(Parser)]
#[command(
    name = "metatop",
    version,
    about = "Abelianized derived groups and metabelian tops of Artin and one-relator groups"
)]
struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Support window [-D, D] for membership search.
    #[arg(long, global = true, default_value_t = 6)]
    window: i64,
    /// Read non-edges as "no relation" instead of "commute".
    #[arg(long, global = true)]
    free_product_convention: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Finite-type recognition and abelianization rank of a labelled graph.
    Classify {
        graph: Option<PathBuf>,
        /// Run on every *.json file in a directory.
        #[arg(long, conflicts_with = "graph")]
        all: Option<PathBuf>,
    },
    /// Γ'_ab and the verdict on the metabelian top of an Artin system.
    Homology {
        graph: Option<PathBuf>,
        #[arg(long, conflicts_with = "graph")]
        all: Option<PathBuf>,
    },
    /// Two-generator one-relator group.
    Onerel {
        /// Comma-separated generator names.
        #[arg(long, value_delimiter = ',')]
        gens: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        relator: String,
    },
    /// Alexander polynomial of a knot.
    Alexander {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Print the graph JSON of a finite type such as A4 or I2(6).
    Graph { tag: String },
}

fn graph_files(dir: &Path) -> Result<Vec<PathBuf>, InputError> {
    let rd = std::fs::read_dir(dir).map_err(|e| InputError(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> =
        rd.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.extension().is_some_and(|x| x == "json")).collect();
    files.sort();
    Ok(files)
}

fn run_graphs(
    graph: Option<PathBuf>,
    all: Option<PathBuf>,
    f: &dyn Fn(&metatop::artin::LabeledGraph, &str) -> Report,
) -> Result<Vec<Report>, InputError> {
    let files = match (graph, all) {
        (Some(g), _) => vec![g],
        (None, Some(d)) => graph_files(&d)?,
        (None, None) => return Err(InputError("a graph file or --all <dir> is required".into())),
    };
    files.iter().map(|p| commands::load_graph(p).map(|g| f(&g, &p.display().to_string()))).collect()
}

fn emit(reports: &[Report], json: bool, batch: bool) {
    let out = if json {
        let body = if batch {
            serde_json::to_string_pretty(reports).expect("reports serialize")
        } else {
            reports[0].to_json()
        };
        body + "\n"
    } else {
        reports.iter().map(Report::to_text).collect::<Vec<_>>().join("\n")
    };
    // A closed pipe is not an error worth reporting.
    let _ = std::io::stdout().write_all(out.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let conv = if cli.free_product_convention { Convention::FreeProduct } else { Convention::Complete };
    let opts = SearchOptions { window: cli.window, budget: DEFAULT_UNKNOWN_BUDGET };
    let result: Result<(Vec<Report>, bool), InputError> = match cli.command {
        Command::Classify { graph, all } => {
            let batch = all.is_some();
            run_graphs(graph, all, &|g, s| commands::classify(g, s)).map(|r| (r, batch))
        }
        Command::Homology { graph, all } => {
            let batch = all.is_some();
            if cli.window < 0 {
                Err(InputError("--window must be non-negative".into()))
            } else {
                run_graphs(graph, all, &|g, s| commands::homology(g, s, opts, conv)).map(|r| (r, batch))
            }
        }
        Command::Onerel { gens, relator } => commands::onerel(&gens, &relator).map(|r| (vec![r], false)),
        Command::Alexander { poly } => commands::alexander(&poly).map(|r| (vec![r], false)),
        Command::Graph { tag } => match commands::graph_of_type(&tag) {
            Ok(json) => {
                let _ = writeln!(std::io::stdout(), "{json}");
                return ExitCode::SUCCESS;
            }
            Err(e) => Err(e),
        },
    };
    match result {
        Ok((reports, batch)) => {
            emit(&reports, cli.json, batch);
            let code = reports.iter().map(|r| r.exit_code).max().unwrap_or(0);
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
