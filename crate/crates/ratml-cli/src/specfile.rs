//! Experiment spec files: flat `key = value` lines, '#' comments, repeated
//! keys forming lists. Errors cite 1-based line numbers.

use std::collections::HashMap;
use std::path::PathBuf;

use ratml::channel_sim::{CodeSource, DecoderSpec, SweepSpec};

use crate::codefile;
use crate::error::CliError;

/// A parsed experiment: the sweep to run (workers left at 1 for the caller
/// to fill) and where the CSV should go.
pub struct Experiment {
    pub sweep: SweepSpec,
    pub out: Option<PathBuf>,
}

const SCALAR_KEYS: [&str; 7] = ["builtin", "matrix", "k", "w", "realizations", "trials", "seed"];
const LIST_KEYS: [&str; 3] = ["decoder", "epsilon", "blocks"];

pub fn parse(text: &str) -> Result<Vec<(usize, String, String)>, CliError> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            return Err(CliError::Usage(format!(
                "line {line}: expected 'key = value', got '{trimmed}'"
            )));
        };
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() || value.is_empty() {
            return Err(CliError::Usage(format!(
                "line {line}: empty key or value in '{trimmed}'"
            )));
        }
        entries.push((line, key.to_string(), value.to_string()));
    }
    Ok(entries)
}

pub fn build(entries: &[(usize, String, String)]) -> Result<Experiment, CliError> {
    let usage = |line: usize, msg: String| CliError::Usage(format!("line {line}: {msg}"));

    let mut scalars: HashMap<&str, (usize, &str)> = HashMap::new();
    let mut decoders: Vec<(usize, &str)> = Vec::new();
    let mut epsilons: Vec<(usize, &str)> = Vec::new();
    let mut blocks: Vec<(usize, &str)> = Vec::new();
    let mut out: Option<(usize, &str)> = None;
    for (line, key, value) in entries {
        match key.as_str() {
            "decoder" => decoders.push((*line, value)),
            "epsilon" => epsilons.push((*line, value)),
            "blocks" => blocks.push((*line, value)),
            "out" => {
                if let Some((prev, _)) = out {
                    return Err(usage(*line, format!("'out' already set on line {prev}")));
                }
                out = Some((*line, value));
            }
            k if SCALAR_KEYS.contains(&k) => {
                if let Some((prev, _)) = scalars.get(k) {
                    return Err(usage(*line, format!("'{key}' already set on line {prev}")));
                }
                scalars.insert(k, (*line, value));
            }
            _ => {
                return Err(usage(
                    *line,
                    format!(
                        "unknown key '{key}' (scalars: {}, out; lists: {})",
                        SCALAR_KEYS.join(", "),
                        LIST_KEYS.join(", ")
                    ),
                ));
            }
        }
    }

    let source = build_source(&scalars, &blocks)?;
    let random = matches!(source, CodeSource::Random { .. });
    if !random {
        for key in ["k", "w", "realizations"] {
            if let Some((line, _)) = scalars.get(key) {
                return Err(usage(*line, format!("'{key}' only applies to random codes")));
            }
        }
        if let Some((line, _)) = blocks.first() {
            return Err(usage(*line, "'blocks' only applies to random codes".to_string()));
        }
    }

    if decoders.is_empty() {
        return Err(CliError::Usage("no 'decoder' lines".to_string()));
    }
    if epsilons.is_empty() {
        return Err(CliError::Usage("no 'epsilon' lines".to_string()));
    }
    // One sweep axis at a time keeps every row interpretable.
    if epsilons.len() > 1 && blocks.len() > 1 {
        return Err(usage(
            blocks[1].0,
            "choose one grid: several epsilon values or several blocks values".to_string(),
        ));
    }

    let decoders = decoders
        .iter()
        .map(|(line, text)| {
            DecoderSpec::parse(text).map_err(|e| usage(*line, e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let epsilons = epsilons
        .iter()
        .map(|(line, text)| parse_num::<f64>(*line, "epsilon", text))
        .collect::<Result<Vec<_>, _>>()?;
    let block_values = blocks
        .iter()
        .map(|(line, text)| parse_num::<usize>(*line, "blocks", text))
        .collect::<Result<Vec<_>, _>>()?;

    let trials = match scalars.get("trials") {
        Some(&(line, text)) => {
            let t = parse_num::<u64>(line, "trials", text)?;
            if t == 0 {
                return Err(usage(line, "trials must be >= 1".to_string()));
            }
            t
        }
        None => 100_000,
    };
    let seed = match scalars.get("seed") {
        Some(&(line, text)) => parse_num::<u64>(line, "seed", text)?,
        None => 0,
    };
    let realizations = match scalars.get("realizations") {
        Some(&(line, text)) => {
            let r = parse_num::<u64>(line, "realizations", text)?;
            if r == 0 {
                return Err(usage(line, "realizations must be >= 1".to_string()));
            }
            r
        }
        None => 1,
    };

    Ok(Experiment {
        sweep: SweepSpec {
            source,
            decoders,
            epsilons,
            blocks: block_values,
            realizations,
            trials,
            seed,
            workers: 1,
        },
        out: out.map(|(_, path)| PathBuf::from(path)),
    })
}

fn build_source(
    scalars: &HashMap<&str, (usize, &str)>,
    blocks: &[(usize, &str)],
) -> Result<CodeSource, CliError> {
    let builtin = scalars.get("builtin");
    let matrix = scalars.get("matrix");
    let k = scalars.get("k");
    let w = scalars.get("w");
    match (builtin, matrix, k.or(w)) {
        (Some(&(line, name)), None, None) => {
            let instance = codefile::builtin(name).ok_or_else(|| {
                CliError::Usage(format!(
                    "line {line}: unknown builtin '{name}' (have {})",
                    codefile::BUILTIN_NAMES.join(", ")
                ))
            })?;
            Ok(CodeSource::Fixed(Box::new(instance)))
        }
        (None, Some(&(_, path)), None) => {
            let instance = codefile::load(path)?;
            Ok(CodeSource::Fixed(Box::new(instance)))
        }
        (None, None, Some(_)) => {
            let need = |key: &str| -> Result<(usize, &str), CliError> {
                scalars
                    .get(key)
                    .copied()
                    .ok_or_else(|| CliError::Usage(format!("random codes need '{key}'")))
            };
            let (k_line, k_text) = need("k")?;
            let (w_line, w_text) = need("w")?;
            if blocks.is_empty() {
                return Err(CliError::Usage(
                    "random codes need at least one 'blocks' line".to_string(),
                ));
            }
            Ok(CodeSource::Random {
                k: parse_num(k_line, "k", k_text)?,
                weight: parse_num(w_line, "w", w_text)?,
            })
        }
        (None, None, None) => Err(CliError::Usage(
            "no code source: give 'builtin', 'matrix', or 'k' and 'w'".to_string(),
        )),
        _ => Err(CliError::Usage(
            "give exactly one code source: 'builtin', 'matrix', or 'k'/'w'".to_string(),
        )),
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, key: &str, text: &str) -> Result<T, CliError> {
    text.parse().map_err(|_| {
        CliError::Usage(format!("line {line}: {key}: cannot parse '{text}'"))
    })
}
