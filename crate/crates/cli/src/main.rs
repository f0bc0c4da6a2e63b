//! `greenseq`: mutate exchange matrices, verify and search for maximal green
//! sequences, and run the explorer service.
//!
//! Exit status is 0 on success (or when a search finds a sequence), 2 when a
//! search ends without a sequence, and 1 on errors.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, IsTerminal, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use greenseq_core::coherence::DEFAULT_COHERENCE_DEPTH;
use greenseq_core::green::{DEFAULT_MAX_STATES, DEFAULT_SEARCH_DEPTH};
use greenseq_core::{
    check_uniform_sign_coherence, decompose, emit_dot, find_sequence, frame, is_irreducible,
    parse_int_matrix, parse_matrix, reduce_and_search, uniform_coherence_certificate,
    verify_sequence, ColumnSign, IrreducibilityMethod, MatrixDocument, MutationSequence,
    QuiverGraph, SearchConfig, SearchOutcome, SearchResult, SearchTarget, Strategy,
};
use greenseq_service::ServiceConfig;
use serde_json::json;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },

    #[error("{}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },

    #[error("{context}: {source}")]
    Core {
        context: String,
        source: greenseq_core::Error,
    },

    #[error("{0}")]
    Usage(String),

    #[error("server: {0}")]
    Serve(io::Error),
}

type Result<T> = std::result::Result<T, CliError>;

trait Context<T> {
    fn context(self, what: impl Into<String>) -> Result<T>;
}

impl<T> Context<T> for greenseq_core::Result<T> {
    fn context(self, what: impl Into<String>) -> Result<T> {
        self.map_err(|source| CliError::Core {
            context: what.into(),
            source,
        })
    }
}

#[derive(Parser)]
#[command(name = "greenseq", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the framed matrix after each step of a mutation sequence.
    Mutate {
        #[arg(long)]
        seq: MutationSequence,
        #[command(flatten)]
        input: Input,
    },
    /// Check whether a sequence is green, green-to-red or maximal green.
    Verify {
        #[arg(long)]
        seq: MutationSequence,
        #[command(flatten)]
        input: Input,
    },
    /// Search for a maximal green or green-to-red sequence.
    Find(FindArgs),
    /// Split the matrix into irreducible blocks.
    Decompose {
        #[command(flatten)]
        input: Input,
    },
    /// Check uniform column sign-coherence of attached rows up to a depth.
    Coherence {
        /// Rows to attach below B. Defaults to the attached rows of the
        /// matrix document.
        #[arg(long)]
        attached: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_COHERENCE_DEPTH)]
        depth: usize,
        #[command(flatten)]
        input: Input,
    },
    /// Describe the quiver of B, or print it as a Graphviz digraph.
    Quiver {
        #[arg(long)]
        dot: bool,
        /// Mutate first and color vertices green or red by the C-matrix.
        #[arg(long)]
        seq: Option<MutationSequence>,
        /// Write the output here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        input: Input,
    },
    /// Run the HTTP explorer service.
    Serve(ServeArgs),
}

#[derive(Args)]
struct Input {
    /// Matrix document (JSON or text grid); `-` reads stdin.
    file: PathBuf,
}

#[derive(Args)]
struct FindArgs {
    #[arg(long, default_value = "mgs")]
    target: SearchTarget,
    #[arg(long, env = "GREENSEQ_DEPTH", default_value_t = DEFAULT_SEARCH_DEPTH)]
    max_depth: usize,
    #[arg(long, default_value = "bfs")]
    strategy: Strategy,
    #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
    max_states: usize,
    /// Give up after this many seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// Search each irreducible block separately and compose the results.
    #[arg(long)]
    reduce: bool,
    #[command(flatten)]
    input: Input,
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    host: String,
    /// Directory holding the browser bundle.
    #[arg(long)]
    static_dir: Option<PathBuf>,
    /// Per-request search limit in seconds.
    #[arg(long, default_value_t = 30)]
    search_timeout: u64,
    /// Drop sessions idle for this many seconds.
    #[arg(long, default_value_t = 3600)]
    idle_timeout: u64,
}

fn read_text(path: &Path) -> Result<String> {
    let mut text = String::new();
    let res = if path == Path::new("-") {
        io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })?;
    Ok(text)
}

fn load(input: &Input) -> Result<MatrixDocument> {
    parse_matrix(&read_text(&input.file)?).context(input.file.display().to_string())
}

fn print_json(value: &impl serde::Serialize) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("values serialize")
    );
}

fn mutate(seq: &MutationSequence, input: &Input) -> Result<ExitCode> {
    let doc = load(input)?;
    let start = doc.extended();
    let trace = start.trace(seq).context("mutate")?;
    println!("start\n{}", trace[0]);
    for (step, (k, state)) in seq.indices().iter().zip(&trace[1..]).enumerate() {
        println!("step {}: mu_{k}\n{state}", step + 1);
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(seq: &MutationSequence, input: &Input) -> Result<ExitCode> {
    let doc = load(input)?;
    let verdict = verify_sequence(&doc.exchange, seq).context("verify")?;
    print_json(&verdict);
    Ok(ExitCode::SUCCESS)
}

fn search_exit(outcome: &SearchOutcome) -> ExitCode {
    match outcome.result {
        SearchResult::Found { .. } => ExitCode::SUCCESS,
        _ => ExitCode::from(2),
    }
}

fn find(args: &FindArgs) -> Result<ExitCode> {
    let doc = load(&args.input)?;
    let timeout = match args.timeout {
        Some(secs) => Some(
            Duration::try_from_secs_f64(secs)
                .map_err(|e| CliError::Usage(format!("--timeout {secs}: {e}")))?,
        ),
        None => None,
    };
    let config = SearchConfig {
        max_depth: args.max_depth,
        strategy: args.strategy,
        max_states: args.max_states,
        timeout,
    };
    if args.reduce {
        let reduced = reduce_and_search(&doc.exchange, args.target, &config).context("search")?;
        print_json(&reduced);
        Ok(search_exit(&reduced.outcome))
    } else {
        let outcome = find_sequence(&doc.exchange, args.target, &config).context("search")?;
        print_json(&outcome);
        Ok(search_exit(&outcome))
    }
}

fn decompose_cmd(input: &Input) -> Result<ExitCode> {
    let doc = load(input)?;
    let d = decompose(&doc.exchange);
    let irreducible =
        is_irreducible(&doc.exchange, IrreducibilityMethod::Cycle).context("irreducibility")?;
    print_json(&json!({
        "blocks": d.blocks,
        "order": d.order,
        "blockSizes": d.block_sizes(),
        "irreducible": irreducible,
    }));
    Ok(ExitCode::SUCCESS)
}

fn coherence(attached: Option<&Path>, depth: usize, input: &Input) -> Result<ExitCode> {
    let doc = load(input)?;
    let rows = match (attached, doc.attached) {
        (Some(path), _) => {
            parse_int_matrix(&read_text(path)?).context(path.display().to_string())?
        }
        (None, Some(rows)) => rows,
        (None, None) => {
            return Err(CliError::Usage(
                "no attached rows: pass --attached or include them in the document".into(),
            ))
        }
    };
    let verdict = check_uniform_sign_coherence(&doc.exchange, &rows, depth).context("coherence")?;
    let certificate = uniform_coherence_certificate(&rows).context("coherence")?;
    print_json(&json!({ "verdict": verdict, "certificate": certificate }));
    Ok(ExitCode::SUCCESS)
}

fn describe(q: &QuiverGraph) -> String {
    let class = q.classify();
    let mut out = format!(
        "{} vertices, {} arrows, connected={}, acyclic={}\n",
        q.vertex_count(),
        q.arrows().len(),
        class.connected,
        class.acyclic
    );
    for a in q.arrows() {
        out.push_str(&format!("{} -> {} ({})\n", a.source, a.target, a.weight));
    }
    out
}

fn quiver(
    dot: bool,
    seq: Option<&MutationSequence>,
    out: Option<&Path>,
    input: &Input,
) -> Result<ExitCode> {
    let doc = load(input)?;
    let (q, colors) = match seq {
        Some(seq) => {
            let ext = frame(&doc.exchange)
                .mutate_sequence(seq)
                .context("mutate")?;
            let c = ext.attached();
            let colors: BTreeMap<usize, ColumnSign> = (1..=ext.n())
                .map(|j| (j, ColumnSign::of(c.column(j - 1))))
                .collect();
            (QuiverGraph::from_matrix(&ext.principal()), Some(colors))
        }
        None => (QuiverGraph::from_matrix(doc.exchange.matrix()), None),
    };
    let text = if dot {
        emit_dot(&q, colors.as_ref())
    } else {
        describe(&q)
    };
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Write {
            path: path.to_owned(),
            source,
        })?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn serve(args: &ServeArgs) -> Result<ExitCode> {
    tracing_subscriber::fmt()
        .with_writer(io::stderr)
        .with_ansi(io::stderr().is_terminal())
        .init();
    let config = ServiceConfig {
        idle_timeout: Duration::from_secs(args.idle_timeout),
        search_timeout: Duration::from_secs(args.search_timeout),
        static_dir: args.static_dir.clone(),
        ..ServiceConfig::default()
    };
    let runtime = tokio::runtime::Runtime::new().map_err(CliError::Serve)?;
    runtime
        .block_on(async {
            let listener = tokio::net::TcpListener::bind((args.host.as_str(), args.port)).await?;
            greenseq_service::serve(listener, config).await
        })
        .map_err(CliError::Serve)?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Mutate { seq, input } => mutate(seq, input),
        Command::Verify { seq, input } => verify(seq, input),
        Command::Find(args) => find(args),
        Command::Decompose { input } => decompose_cmd(input),
        Command::Coherence {
            attached,
            depth,
            input,
        } => coherence(attached.as_deref(), *depth, input),
        Command::Quiver {
            dot,
            seq,
            out,
            input,
        } => quiver(*dot, seq.as_ref(), out.as_deref(), input),
        Command::Serve(args) => serve(args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("greenseq: {e}");
            ExitCode::FAILURE
        }
    }
}
