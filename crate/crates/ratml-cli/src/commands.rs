//! Subcommand bodies. Everything here prints to stdout and maps library
//! errors onto the exit-code classes in `error`.

use std::fs;
use std::path::{Path, PathBuf};

use ratml::algebra::BitVector;
use ratml::channel_sim::{self, CodeInstance, DecoderSpec, PreparedDecoder, SweepRow};
use ratml::code::{self, RandomCodeSpec};
use ratml::rational_map;
use ratml::taylor;

use crate::codefile;
use crate::error::CliError;

pub fn gen_code(
    builtin: Option<&str>,
    k: Option<usize>,
    blocks: Option<usize>,
    w: Option<usize>,
    seed: u64,
    out: &Path,
) -> Result<(), CliError> {
    let instance = match (builtin, k, blocks, w) {
        (Some(name), None, None, None) => codefile::builtin(name).ok_or_else(|| {
            CliError::Usage(format!(
                "unknown builtin '{name}' (have {})",
                codefile::BUILTIN_NAMES.join(", ")
            ))
        })?,
        (None, Some(k), Some(blocks), Some(w)) => {
            let spec = RandomCodeSpec {
                k,
                blocks,
                weight: w,
                seed,
            };
            CodeInstance::Plain(code::random_systematic_circulant(&spec)?)
        }
        _ => {
            return Err(CliError::Usage(
                "give --builtin NAME, or all of --k, --blocks, --w".to_string(),
            ))
        }
    };
    let code = instance.linear();
    fs::write(out, codefile::matrix_to_text(code)).map_err(|e| CliError::io(out, e))?;
    println!("n: {}", code.n());
    println!("k: {}", code.k());
    println!("max_clean_order: {}", clean_order_text(code));
    Ok(())
}

pub fn analyze(code_arg: &str) -> Result<(), CliError> {
    let instance = codefile::load(code_arg)?;
    let code = instance.linear();
    println!("code: {}", code.name());
    println!("n: {}", code.n());
    println!("k: {}", code.k());
    println!("rate: {:.6}", code.rate());
    if code.k() <= 28 {
        println!("d: {}", code.min_distance()?);
    } else {
        println!("d: skipped (k > 28)");
    }
    if code.n() - code.k() <= 28 {
        println!("dual_d: {}", code.dual()?.min_distance()?);
    } else {
        println!("dual_d: skipped (n - k > 28)");
    }
    let self_dual =
        2 * code.k() == code.n() && code.generator().same_row_space(code.parity_check());
    println!("self_dual: {self_dual}");
    println!("max_clean_order: {}", clean_order_text(code));

    let eig = rational_map::eigen_structure(code);
    let mut sizes: Vec<usize> = eig.classes().iter().map(|c| c.len()).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    println!("components: {}", run_lengths(&sizes));
    let mut spectrum = eig.spectrum();
    spectrum.sort_unstable_by(|a, b| b.cmp(a));
    println!("eigenvalues: {}", run_lengths(&spectrum));
    if sizes.iter().all(|&s| s == 1) {
        println!("J: identity");
    } else {
        println!("J: block diagonal (largest block {})", sizes[0]);
    }
    if code.rate() > 0.5 {
        println!(
            "note: rate {:.6} > 1/2, outside the hyperbolic fixed-point regime",
            code.rate()
        );
    }
    Ok(())
}

pub fn taylor(code_arg: &str, order: usize, clean: bool, out: &Path) -> Result<(), CliError> {
    let instance = codefile::load(code_arg)?;
    let code = instance.linear();
    let map = if clean {
        taylor::clean_truncated_map(code, order)?
    } else {
        taylor::general_taylor(code, order)?
    };
    fs::write(out, map.to_text()).map_err(|e| CliError::io(out, e))?;
    println!("n: {}", map.n());
    println!("order: {}", map.order());
    println!("terms: {}", map.term_count());
    println!("out: {}", out.display());
    Ok(())
}

pub fn decode(code_arg: &str, y: &str, epsilon: f64, method: &str) -> Result<(), CliError> {
    let instance = codefile::load(code_arg)?;
    let spec = DecoderSpec::parse(method).map_err(|e| CliError::Usage(e.to_string()))?;
    let y = BitVector::parse_compact(y).map_err(|e| CliError::Usage(format!("--y: {e}")))?;
    let dec = PreparedDecoder::new(&spec, &instance)?;
    let outcome = dec.decode(&y, epsilon)?;
    println!("method: {}", outcome.method.as_str());
    println!("decoded: {}", outcome.decoded);
    println!("failure: {}", outcome.failure);
    let soft: Vec<String> = outcome.soft.iter().map(|v| format!("{v:.6}")).collect();
    println!("soft: {}", soft.join(" "));
    Ok(())
}

pub fn ber(
    spec_path: &Path,
    workers: Option<usize>,
    trials: Option<u64>,
    out: Option<&Path>,
    timing: bool,
) -> Result<(), CliError> {
    let text = fs::read_to_string(spec_path).map_err(|e| CliError::io(spec_path, e))?;
    let entries = specfile_entries(spec_path, &text)?;
    let mut exp = crate::specfile::build(&entries)
        .map_err(|e| prefix_spec_path(spec_path, e))?;
    if let Some(t) = trials {
        if t == 0 {
            return Err(CliError::Usage("--trials must be >= 1".to_string()));
        }
        exp.sweep.trials = t;
    }
    exp.sweep.workers = resolve_workers(workers)?;
    let rows = channel_sim::sweep(&exp.sweep)?;
    let csv = channel_sim::to_csv(&rows, timing);
    let target: Option<PathBuf> = out.map(Path::to_path_buf).or(exp.out);
    match target {
        Some(path) => {
            fs::write(&path, &csv).map_err(|e| CliError::io(&path, e))?;
            print_summary(&rows);
            println!("wrote: {}", path.display());
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn specfile_entries(
    path: &Path,
    text: &str,
) -> Result<Vec<(usize, String, String)>, CliError> {
    crate::specfile::parse(text).map_err(|e| prefix_spec_path(path, e))
}

fn prefix_spec_path(path: &Path, err: CliError) -> CliError {
    match err {
        CliError::Usage(m) => CliError::Usage(format!("{}: {m}", path.display())),
        other => other,
    }
}

/// --workers beats RATML_WORKERS beats the machine's parallelism.
fn resolve_workers(flag: Option<usize>) -> Result<usize, CliError> {
    let workers = match flag {
        Some(w) => w,
        None => match std::env::var("RATML_WORKERS") {
            Ok(text) => text.parse().map_err(|_| {
                CliError::Usage(format!("RATML_WORKERS: cannot parse '{text}'"))
            })?,
            Err(_) => std::thread::available_parallelism().map(|p| p.get()).unwrap_or(1),
        },
    };
    if workers == 0 {
        return Err(CliError::Usage("workers must be >= 1".to_string()));
    }
    Ok(workers)
}

fn print_summary(rows: &[SweepRow]) {
    println!(
        "{:<22} {:<18} {:<9} {:<12} {:<12} {:<26} worst_bit",
        "code", "decoder", "epsilon", "realization", "pe_bit", "95% interval"
    );
    for row in rows {
        let realization = row
            .realization
            .map_or_else(|| "best".to_string(), |r| r.to_string());
        println!(
            "{:<22} {:<18} {:<9} {:<12} {:<12} {:<26} {}",
            row.code,
            row.decoder,
            row.epsilon,
            realization,
            format!("{:.4e}", row.pe_bit),
            format!("[{:.4e}, {:.4e}]", row.pe_bit_lo, row.pe_bit_hi),
            row.worst_bit_index,
        );
    }
}

fn clean_order_text(code: &ratml::code::LinearCode) -> String {
    let clean = code.max_clean_order();
    if clean.capped {
        format!("{}+", clean.order)
    } else {
        clean.order.to_string()
    }
}

/// Run-length view of a sorted list, e.g. "3 x1, 0 x2".
fn run_lengths(values: &[usize]) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < values.len() {
        let mut j = i;
        while j < values.len() && values[j] == values[i] {
            j += 1;
        }
        parts.push(format!("{} x{}", values[i], j - i));
        i = j;
    }
    parts.join(", ")
}
