//! Command-line front end: thin orchestration over the library pipelines.
//!
//! Matrices travel in the shared text format (order on the first line,
//! then one whitespace-separated row per line); reports leave as pretty
//! JSON on stdout.  Index sets are one-based on the command line and in
//! every report.  Failures print a JSON error object to stderr and exit
//! with 2 (precondition violated), 3 (numerically inconclusive), or
//! 4 (i/o or parse trouble).

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use copface_core::report::{
    self, bounds_report, catalog_report, certificate_report, face_report, graph_report,
    lift_report,
};
use copface_core::{
    build_circulant, build_graph, build_lift, certify_exposed, enumerate_minimal_zeros,
    face_dimension, maximal_cliques, Error, Result, SymMatrix, TolerancePolicy,
};

#[derive(Parser)]
#[command(
    name = "copface",
    about = "Extremal copositive matrices, their zeros, and the faces they expose",
    version
)]
struct Cli {
    /// Absolute tolerance below which quadratic forms count as zero
    /// (falls back to the COPFACE_TOL_ZERO environment variable).
    #[arg(long, global = true, value_name = "F")]
    tol_zero: Option<f64>,

    /// Relative singular-value threshold for rank and kernel decisions.
    #[arg(long, global = true, value_name = "F")]
    tol_rank: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the odd-order extremal circulant in the matrix text format.
    Hildebrand {
        /// Matrix order (odd, at least 5).
        #[arg(long)]
        n: usize,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate the minimal zeros of a matrix file.
    Zeros { path: PathBuf },
    /// Minimal-zeros graph and maximal cliques of a matrix file.
    Graph { path: PathBuf },
    /// Dimension of the face of the completely positive cone orthogonal
    /// to a matrix file.
    Facedim { path: PathBuf },
    /// Extreme and exposed ray certificates for a matrix file.
    Certify { path: PathBuf },
    /// Raise the order of a matrix file by one through the bordered lift.
    Lift {
        path: PathBuf,
        /// Lifting index set, one-based, comma separated (e.g. "1,2,3").
        #[arg(long, value_name = "LIST")]
        index_set: String,
        /// File to write the lifted matrix to, in the text format.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dimension bounds row for one order: lower bound, constructed
    /// upper bound, and the prior bound it is measured against.
    Bounds {
        /// Order, between 5 and 12.
        #[arg(long)]
        n: usize,
        /// Emit the row as JSON instead of text.
        #[arg(long)]
        json: bool,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        let obj = serde_json::json!({ "error": e.to_string(), "code": e.exit_code() });
        eprintln!("{obj}");
        std::process::exit(e.exit_code());
    }
}

fn run(cli: Cli) -> Result<()> {
    let tol = tolerance(&cli)?;
    match cli.command {
        Command::Hildebrand { n, out } => {
            let (a, _) = build_circulant(n)?;
            let text = a.to_text();
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => write_stdout(&text),
            }
        }
        Command::Zeros { path } => {
            let a = read_matrix(&path, &tol)?;
            let catalog = enumerate_minimal_zeros(&a, &tol)?;
            emit(&catalog_report(&catalog))?;
        }
        Command::Graph { path } => {
            let a = read_matrix(&path, &tol)?;
            let catalog = enumerate_minimal_zeros(&a, &tol)?;
            let graph = build_graph(&a, &catalog, &tol)?;
            let cover = maximal_cliques(&graph, &catalog)?;
            emit(&graph_report(&graph, &cover))?;
        }
        Command::Facedim { path } => {
            let a = read_matrix(&path, &tol)?;
            let catalog = enumerate_minimal_zeros(&a, &tol)?;
            let graph = build_graph(&a, &catalog, &tol)?;
            let cover = maximal_cliques(&graph, &catalog)?;
            let face = face_dimension(&a, &catalog, &cover, &tol)?;
            emit(&face_report(&face))?;
        }
        Command::Certify { path } => {
            let a = read_matrix(&path, &tol)?;
            let catalog = enumerate_minimal_zeros(&a, &tol)?;
            let graph = build_graph(&a, &catalog, &tol)?;
            let cover = maximal_cliques(&graph, &catalog)?;
            let cert = certify_exposed(&a, &catalog, &cover, &tol)?;
            emit(&certificate_report(&cert))?;
        }
        Command::Lift {
            path,
            index_set,
            out,
        } => {
            let a = read_matrix(&path, &tol)?;
            let i_set = parse_index_set(&index_set, a.order())?;
            let catalog = enumerate_minimal_zeros(&a, &tol)?;
            let lift = build_lift(&a, &catalog, &i_set, &tol)?;
            if let Some(path) = out {
                std::fs::write(path, lift.lifted.to_text())?;
            }
            emit(&lift_report(&lift))?;
        }
        Command::Bounds { n, json } => {
            let row = bounds_report(n, &tol)?;
            if json {
                emit(&row)?;
            } else {
                print_bounds_row(&row);
            }
        }
    }
    Ok(())
}

/// Tolerance resolution: flags first, then COPFACE_TOL_ZERO for the zero
/// tolerance, then the library defaults.
fn tolerance(cli: &Cli) -> Result<TolerancePolicy> {
    let default = TolerancePolicy::default();
    let zero = match cli.tol_zero {
        Some(z) => z,
        None => match std::env::var("COPFACE_TOL_ZERO") {
            Ok(s) => s
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("COPFACE_TOL_ZERO is not a number: {s:?}")))?,
            Err(_) => default.zero_tol,
        },
    };
    let rank = cli.tol_rank.unwrap_or(default.rank_tol_rel);
    TolerancePolicy::new(zero, rank)
}

fn read_matrix(path: &Path, tol: &TolerancePolicy) -> Result<SymMatrix> {
    let text = std::fs::read_to_string(path)?;
    SymMatrix::from_text(&text, tol)
}

/// Parse a one-based, comma-separated index list into zero-based indices.
fn parse_index_set(list: &str, order: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in list.split(',') {
        let part = part.trim();
        let k: usize = part
            .parse()
            .map_err(|_| Error::InvalidIndexSet(format!("not an index: {part:?}")))?;
        if k == 0 || k > order {
            return Err(Error::InvalidIndexSet(format!(
                "index {k} outside 1..={order}"
            )));
        }
        out.push(k - 1);
    }
    Ok(out)
}

fn emit<T: serde::Serialize>(report: &T) -> Result<()> {
    let mut json = serde_json::to_string_pretty(report)
        .map_err(|e| Error::Parse(format!("report serialization failed: {e}")))?;
    json.push('\n');
    write_stdout(&json);
    Ok(())
}

/// Write to stdout, exiting quietly when the reader has closed the pipe
/// (the conventional behavior under `copface ... | head`).
fn write_stdout(s: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if out.write_all(s.as_bytes()).is_err() || out.flush().is_err() {
        std::process::exit(0);
    }
}

fn print_bounds_row(row: &report::BoundsReport) {
    let mut text = String::new();
    text.push_str(&format!("n = {} ({})\n", row.n, row.parity));
    text.push_str(&format!(
        "  lower bound on maximal face dimensions: {}\n",
        row.lower_bound
    ));
    let construction = match &row.construction.index_set {
        Some(i) => format!(
            "lift of the order-{} circulant by I = {:?}",
            row.construction.base_order, i
        ),
        None => format!("order-{} circulant", row.construction.base_order),
    };
    text.push_str(&format!(
        "  constructed upper bound: {} ({construction})\n",
        row.upper_bound_constructed
    ));
    match row.prior_upper {
        Some(p) => text.push_str(&format!("  prior upper bound: {p}\n")),
        None => text.push_str("  prior upper bound: none at this order\n"),
    }
    let method = row.certificates.method.as_deref().unwrap_or("none");
    text.push_str(&format!(
        "  certificates: extreme = {}, exposed = {} ({}), equality nullity = {}\n",
        row.certificates.extreme,
        row.certificates.exposed,
        method,
        row.certificates.equality_nullity
    ));
    write_stdout(&text);
}
