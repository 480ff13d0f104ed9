use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qmapper::{
    compile, emit_qasm, parse_qasm, ArchError, Architecture, CompileError, CompileOptions,
    LayoutStrategy, MapError, Method,
};

#[derive(Parser)]
#[command(
    name = "qmapper",
    version,
    about = "Map quantum circuits onto restricted device connectivity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Map an OpenQASM 2.0 circuit onto a device.
    Compile(CompileArgs),
}

#[derive(Args)]
struct CompileArgs {
    /// naive, heuristic or exact.
    #[arg(long, default_value = "heuristic")]
    method: Method,
    /// identity, static or dynamic. Ignored by the exact method.
    #[arg(long, default_value = "dynamic")]
    layout: LayoutStrategy,
    /// Upcoming layers considered by the heuristic.
    #[arg(long, default_value_t = 1)]
    lookahead: usize,
    /// Emit inserted SWAPs as three CX gates.
    #[arg(long)]
    decompose_swaps: bool,
    /// Builtin device name (oslo7, line_N, ring_N, grid_RxC) or coupling-map file.
    #[arg(long, default_value = "oslo7")]
    arch: String,
    /// Treat every pair in a coupling-map file as bidirectional.
    #[arg(long)]
    undirected: bool,
    /// Check the mapped circuit against the input by simulation.
    #[arg(long)]
    verify: bool,
    /// Mapped circuit destination; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Statistics record (JSON) destination.
    #[arg(long)]
    stats: Option<PathBuf>,
    input: PathBuf,
}

/// A failure with its exit status and a short machine-readable category.
struct Failure {
    status: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn config(kind: &'static str, message: impl ToString) -> Failure {
        Failure {
            status: 2,
            kind,
            message: message.to_string(),
        }
    }
}

impl From<CompileError> for Failure {
    fn from(e: CompileError) -> Failure {
        let (status, kind) = match &e {
            CompileError::Map(MapError::ExactTooLarge(_)) => (2, "config"),
            CompileError::Map(MapError::InvalidLayout(_) | MapError::Arch(_)) => (2, "config"),
            CompileError::Map(_) => (1, "mapping"),
            CompileError::Verify(_) => (2, "config"),
            CompileError::NotEquivalent(_) => (1, "verify"),
        };
        Failure {
            status,
            kind,
            message: e.to_string(),
        }
    }
}

fn load_arch(source: &str, undirected: bool) -> Result<Architecture, Failure> {
    let path = Path::new(source);
    if path.is_file() {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::config("io", format!("{source}: {e}")))?;
        return Architecture::parse(&text, undirected)
            .map_err(|e| Failure::config("arch", format!("{source}: {e}")));
    }
    Architecture::builtin(source).map_err(|e| match e {
        ArchError::UnknownBuiltin(_) => Failure::config(
            "arch",
            format!("`{source}` is neither a builtin device nor a readable file"),
        ),
        e => Failure::config("arch", e),
    })
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::config("io", format!("{}: {e}", path.display())))
}

fn run(args: CompileArgs) -> Result<(), Failure> {
    let input = args.input.display().to_string();
    let text = fs::read_to_string(&args.input)
        .map_err(|e| Failure::config("io", format!("{input}: {e}")))?;
    let circuit =
        parse_qasm(&text).map_err(|e| Failure::config("parse", format!("{input}:{e}")))?;
    let arch = load_arch(&args.arch, args.undirected)?;
    let options = CompileOptions {
        method: args.method,
        layout: args.layout,
        lookahead: args.lookahead,
        decompose_swaps: args.decompose_swaps,
        verify: args.verify,
    };
    let out = compile(&circuit, &arch, &options)?;

    let qasm = emit_qasm(&out.result.mapped_circuit);
    match &args.output {
        Some(path) => write(path, &qasm)?,
        None => print!("{qasm}"),
    }
    if let Some(path) = &args.stats {
        let json = serde_json::to_string_pretty(&out.stats).expect("statistics serialize");
        write(path, &(json + "\n"))?;
    }
    eprintln!("Additional SWAPs: {}", out.stats.swaps_added);
    eprintln!("Runtime: {:.6} s", out.stats.runtime_seconds);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let first = e.to_string();
            let first = first.lines().next().unwrap_or("invalid arguments");
            eprintln!("qmapper: usage: {}", first.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    let Command::Compile(args) = cli.command;
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("qmapper: {}: {}", f.kind, f.message.replace('\n', " "));
            ExitCode::from(f.status)
        }
    }
}
