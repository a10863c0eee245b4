//! `ratml`: generator matrices, structural analysis, truncated decoding
//! maps, single-shot decoding, and seeded BER sweeps over a binary
//! symmetric channel.

mod codefile;
mod commands;
mod error;
mod specfile;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "ratml", version, about = "Linear-code decoding maps and BSC experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generator matrix file for a built-in or seeded random code
    GenCode {
        /// Built-in code: rep3, hamming7_4, hermitian16, bch63_7
        #[arg(long, conflicts_with_all = ["k", "blocks", "w"])]
        builtin: Option<String>,
        /// Message length of a random systematic circulant code
        #[arg(long)]
        k: Option<usize>,
        /// Number of circulant parity blocks (n = k * (blocks + 1))
        #[arg(long)]
        blocks: Option<usize>,
        /// Column weight inside each circulant block
        #[arg(long)]
        w: Option<usize>,
        /// Seed for the random draw
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output matrix file
        #[arg(long)]
        out: PathBuf,
    },
    /// Print structural facts about a code
    Analyze {
        /// Built-in name or matrix file path
        code: String,
    },
    /// Write a truncated decoding map as a term-list file
    Taylor {
        /// Built-in name or matrix file path
        code: String,
        /// Truncation order
        #[arg(long)]
        order: usize,
        /// clean: column-combinatorics route, requires independent columns;
        /// general: hypothesis-free coefficients up to order 3
        #[arg(long, value_parser = ["clean", "general"])]
        mode: String,
        /// Output term-list file
        #[arg(long)]
        out: PathBuf,
    },
    /// Decode one received word
    Decode {
        /// Built-in name or matrix file path
        code: String,
        /// Received word as a 0/1 string
        #[arg(long)]
        y: String,
        /// Channel transition probability
        #[arg(long)]
        epsilon: f64,
        /// ml, approx:L[:clean|general], bm, or identity
        #[arg(long)]
        method: String,
    },
    /// Run a BER sweep from a key = value spec file
    Ber {
        /// Experiment spec file
        spec: PathBuf,
        /// Worker threads (default: RATML_WORKERS, then all cores)
        #[arg(long)]
        workers: Option<usize>,
        /// Override the spec's trial count
        #[arg(long)]
        trials: Option<u64>,
        /// Override the spec's CSV output path
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report real wall times in the CSV instead of the 0.000
        /// placeholder (breaks byte-for-byte reproducibility)
        #[arg(long)]
        timing: bool,
    },
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::GenCode {
            builtin,
            k,
            blocks,
            w,
            seed,
            out,
        } => commands::gen_code(builtin.as_deref(), *k, *blocks, *w, *seed, out),
        Command::Analyze { code } => commands::analyze(code),
        Command::Taylor {
            code,
            order,
            mode,
            out,
        } => commands::taylor(code, *order, mode == "clean", out),
        Command::Decode {
            code,
            y,
            epsilon,
            method,
        } => commands::decode(code, y, *epsilon, method),
        Command::Ber {
            spec,
            workers,
            trials,
            out,
            timing,
        } => commands::ber(spec, *workers, *trials, out.as_deref(), *timing),
    };
    if let Err(err) = result {
        eprintln!("error: {}", err.message());
        std::process::exit(err.exit_code());
    }
}
