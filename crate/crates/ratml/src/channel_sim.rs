//! Seeded binary-symmetric-channel Monte Carlo harness: per-bit error
//! estimates for any decoder, deterministic under any worker count.

use std::fmt;
use std::time::Instant;

use rand::RngCore;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::BitVector;
use crate::code::{self, BchCode, CodeError, LinearCode, RandomCodeSpec};
use crate::decode::{self, DecodeError, DecodeMethod, DecodeOutcome};
use crate::rng;
use crate::taylor::{self, TaylorError, TruncatedMap};

/// Trials per work unit. Fixed so the split into partial counts does not
/// depend on the worker count; partials merge in chunk-index order.
const CHUNK_TRIALS: u64 = 4096;

/// Two-sided 95% normal quantile, for Wilson score intervals.
const WILSON_Z: f64 = 1.959963984540054;

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("channel transition probability must lie in (0, 1/2), got {0}")]
    InvalidEpsilon(f64),
    #[error("trials must be >= 1")]
    NoTrials,
    #[error("bad decoder spec '{spec}': {msg}")]
    DecoderSpec { spec: String, msg: String },
    #[error("decoder '{0}' needs a BCH code")]
    NeedsBch(String),
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
    #[error("worker pool: {0}")]
    Workers(String),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Taylor(#[from] TaylorError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Binary symmetric channel parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    epsilon: f64,
}

impl ChannelConfig {
    pub fn new(epsilon: f64) -> Result<Self, SimError> {
        if !(epsilon > 0.0 && epsilon < 0.5) {
            return Err(SimError::InvalidEpsilon(epsilon));
        }
        Ok(ChannelConfig { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// Flips each bit of `x` independently with probability epsilon, consuming
/// one uniform draw per bit from the caller's stream.
pub fn bsc_transmit(x: &BitVector, cfg: &ChannelConfig, rng: &mut ChaCha8Rng) -> BitVector {
    let mut y = x.clone();
    for i in 0..y.len() {
        if rng::unit_f64(rng) < cfg.epsilon {
            y.flip(i);
        }
    }
    y
}

/// Truncation route for the approximate decoder. `Auto` takes the clean
/// route when the code's clean order covers the requested order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TruncationMode {
    Auto,
    Clean,
    General,
}

/// A decoder named by text: `ml`, `bm`, `identity`, or
/// `approx:L[:clean|general]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecoderSpec {
    Ml,
    Approx { order: usize, mode: TruncationMode },
    Bm,
    /// Hard decision on the channel output; the no-coding baseline.
    Identity,
}

impl DecoderSpec {
    pub fn parse(text: &str) -> Result<DecoderSpec, SimError> {
        let fail = |msg: &str| SimError::DecoderSpec {
            spec: text.to_string(),
            msg: msg.to_string(),
        };
        let parts: Vec<&str> = text.split(':').collect();
        match parts.as_slice() {
            ["ml"] => Ok(DecoderSpec::Ml),
            ["bm"] => Ok(DecoderSpec::Bm),
            ["identity"] => Ok(DecoderSpec::Identity),
            ["approx", rest @ ..] => {
                let [order, mode @ ..] = rest else {
                    return Err(fail("approx needs an order, e.g. approx:3"));
                };
                let order: usize = order
                    .parse()
                    .map_err(|_| fail("order must be a positive integer"))?;
                if order == 0 {
                    return Err(fail("order must be >= 1"));
                }
                let mode = match mode {
                    [] => TruncationMode::Auto,
                    ["clean"] => TruncationMode::Clean,
                    ["general"] => TruncationMode::General,
                    _ => return Err(fail("mode must be 'clean' or 'general'")),
                };
                Ok(DecoderSpec::Approx { order, mode })
            }
            _ => Err(fail("expected ml, bm, identity, or approx:L[:mode]")),
        }
    }
}

impl fmt::Display for DecoderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecoderSpec::Ml => write!(f, "ml"),
            DecoderSpec::Bm => write!(f, "bm"),
            DecoderSpec::Identity => write!(f, "identity"),
            DecoderSpec::Approx { order, mode } => match mode {
                TruncationMode::Auto => write!(f, "approx:{order}"),
                TruncationMode::Clean => write!(f, "approx:{order}:clean"),
                TruncationMode::General => write!(f, "approx:{order}:general"),
            },
        }
    }
}

/// A code plus whatever algebraic extras a decoder may need.
pub enum CodeInstance {
    Plain(LinearCode),
    Bch(BchCode),
}

impl CodeInstance {
    pub fn linear(&self) -> &LinearCode {
        match self {
            CodeInstance::Plain(c) => c,
            CodeInstance::Bch(b) => b.linear(),
        }
    }
}

enum Prepared {
    Ml,
    Approx(TruncatedMap),
    Bm,
    Identity,
}

/// A decoder bound to its code, with any truncated map built up front so
/// per-trial work is evaluation only.
pub struct PreparedDecoder<'a> {
    code: &'a CodeInstance,
    spec: DecoderSpec,
    kind: Prepared,
}

impl<'a> PreparedDecoder<'a> {
    pub fn new(spec: &DecoderSpec, code: &'a CodeInstance) -> Result<Self, SimError> {
        let kind = match spec {
            DecoderSpec::Ml => Prepared::Ml,
            DecoderSpec::Identity => Prepared::Identity,
            DecoderSpec::Bm => match code {
                CodeInstance::Bch(_) => Prepared::Bm,
                CodeInstance::Plain(_) => return Err(SimError::NeedsBch(spec.to_string())),
            },
            DecoderSpec::Approx { order, mode } => {
                let linear = code.linear();
                let map = match mode {
                    TruncationMode::Clean => taylor::clean_truncated_map(linear, *order)?,
                    TruncationMode::General => taylor::general_taylor(linear, *order)?,
                    TruncationMode::Auto => {
                        if linear.max_clean_order().order >= *order {
                            taylor::clean_truncated_map(linear, *order)?
                        } else {
                            taylor::general_taylor(linear, *order)?
                        }
                    }
                };
                Prepared::Approx(map)
            }
        };
        Ok(PreparedDecoder {
            code,
            spec: spec.clone(),
            kind,
        })
    }

    pub fn code(&self) -> &CodeInstance {
        self.code
    }

    pub fn spec(&self) -> &DecoderSpec {
        &self.spec
    }

    /// Truncation order actually in use, for reporting. None outside approx.
    pub fn order(&self) -> Option<usize> {
        match &self.kind {
            Prepared::Approx(map) => Some(map.order()),
            _ => None,
        }
    }

    pub fn truncated_map(&self) -> Option<&TruncatedMap> {
        match &self.kind {
            Prepared::Approx(map) => Some(map),
            _ => None,
        }
    }

    pub fn decode(&self, y: &BitVector, epsilon: f64) -> Result<DecodeOutcome, DecodeError> {
        match &self.kind {
            Prepared::Ml => decode::ml_decode(self.code.linear(), y, epsilon),
            Prepared::Approx(map) => decode::approx_ml_decode(map, y, epsilon),
            Prepared::Bm => match self.code {
                CodeInstance::Bch(b) => decode::bm_decode(b, y),
                CodeInstance::Plain(_) => unreachable!("constructor rejects bm on plain codes"),
            },
            Prepared::Identity => {
                let soft = (0..y.len()).map(|i| f64::from(y.get(i) as u8)).collect();
                Ok(DecodeOutcome {
                    decoded: y.clone(),
                    soft,
                    failure: false,
                    method: DecodeMethod::Identity,
                })
            }
        }
    }
}

/// Per-bit Monte Carlo error estimates for one (code, decoder, channel)
/// cell.
#[derive(Debug, Clone, PartialEq)]
pub struct BerResult {
    pub decoder: String,
    pub seed: u64,
    pub trials: u64,
    /// `errors[i]` counts trials whose decoded bit `i` differed from the
    /// sent bit.
    pub errors: Vec<u64>,
    /// Wall time of the estimation run, seconds.
    pub elapsed_s: f64,
}

impl BerResult {
    pub fn estimate(&self, i: usize) -> f64 {
        self.errors[i] as f64 / self.trials as f64
    }

    /// Index of the worst bit; ties go to the smallest index.
    pub fn worst_bit_index(&self) -> usize {
        let mut worst = 0;
        for (i, &count) in self.errors.iter().enumerate() {
            if count > self.errors[worst] {
                worst = i;
            }
        }
        worst
    }

    /// Maximum per-bit error estimate.
    pub fn pe_bit(&self) -> f64 {
        self.estimate(self.worst_bit_index())
    }

    /// 95% Wilson interval around the worst-bit estimate.
    pub fn pe_bit_interval(&self) -> (f64, f64) {
        wilson_interval(self.errors[self.worst_bit_index()], self.trials)
    }
}

/// 95% Wilson score interval for `count` hits in `trials`, clamped to
/// [0, 1].
pub fn wilson_interval(count: u64, trials: u64) -> (f64, f64) {
    let n = trials as f64;
    let p = count as f64 / n;
    let z2 = WILSON_Z * WILSON_Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = WILSON_Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Estimates per-bit error probabilities over `trials` channel uses. Trial
/// `t` draws its message and noise from `stream(seed, "trial", [t])`, so
/// the counts are a pure function of the inputs no matter how trials are
/// scheduled across workers.
pub fn estimate_ber(
    dec: &PreparedDecoder,
    cfg: &ChannelConfig,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<BerResult, SimError> {
    if trials == 0 {
        return Err(SimError::NoTrials);
    }
    let start = Instant::now();
    let n = dec.code.linear().n();
    let chunks = trials.div_ceil(CHUNK_TRIALS);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| SimError::Workers(e.to_string()))?;
    let partials: Vec<Result<Vec<u64>, SimError>> = pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let lo = c * CHUNK_TRIALS;
                let hi = trials.min(lo + CHUNK_TRIALS);
                let mut counts = vec![0u64; n];
                for t in lo..hi {
                    run_trial(dec, cfg, seed, t, &mut counts)?;
                }
                Ok(counts)
            })
            .collect()
    });
    let mut errors = vec![0u64; n];
    // Chunk order is fixed, so the merge (and any surfaced error) is too.
    for partial in partials {
        for (total, count) in errors.iter_mut().zip(&partial?) {
            *total += count;
        }
    }
    Ok(BerResult {
        decoder: dec.spec.to_string(),
        seed,
        trials,
        errors,
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}

/// One channel use: uniform message, encode, transmit, decode, count
/// disagreements against the sent codeword.
fn run_trial(
    dec: &PreparedDecoder,
    cfg: &ChannelConfig,
    seed: u64,
    t: u64,
    counts: &mut [u64],
) -> Result<(), SimError> {
    let code = dec.code.linear();
    let mut rng = rng::stream(seed, "trial", &[t]);
    let mut message = BitVector::zeros(code.k());
    for j in 0..code.k() {
        if rng::unit_f64(&mut rng) < 0.5 {
            message.set(j, true);
        }
    }
    let x = code.encode(&message)?;
    let y = bsc_transmit(&x, cfg, &mut rng);
    let out = dec.decode(&y, cfg.epsilon)?;
    for (i, count) in counts.iter_mut().enumerate() {
        if out.decoded.get(i) != x.get(i) {
            *count += 1;
        }
    }
    Ok(())
}

/// Code axis of an experiment: one fixed code, or seeded random systematic
/// circulants drawn per (blocks, realization) cell.
pub enum CodeSource {
    Fixed(Box<CodeInstance>),
    Random { k: usize, weight: usize },
}

/// Full experiment description; `sweep` runs the cross product of its axes.
pub struct SweepSpec {
    pub source: CodeSource,
    pub decoders: Vec<DecoderSpec>,
    pub epsilons: Vec<f64>,
    /// Random source only: each entry adds `k * blocks` parity columns, so
    /// the rate is 1 / (blocks + 1).
    pub blocks: Vec<usize>,
    /// Random source only: independent code draws per blocks value.
    pub realizations: u64,
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
}

/// One result row. `realization` is None on a best-of-realizations row.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub code: String,
    pub decoder: String,
    pub n: usize,
    pub k: usize,
    pub epsilon: f64,
    pub order: Option<usize>,
    pub realization: Option<u64>,
    pub seed: u64,
    pub trials: u64,
    pub pe_bit: f64,
    pub pe_bit_lo: f64,
    pub pe_bit_hi: f64,
    pub worst_bit_index: usize,
    pub elapsed_s: f64,
}

/// Runs every cell of the experiment. Fixed-code specs emit one row per
/// (decoder, epsilon); random-code specs emit one row per realization plus
/// a best row (minimum pe_bit, ties to the smallest realization index) per
/// (blocks, decoder, epsilon) cell.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>, SimError> {
    if spec.trials == 0 {
        return Err(SimError::NoTrials);
    }
    if spec.decoders.is_empty() {
        return Err(SimError::InvalidSweep("no decoders listed".to_string()));
    }
    if spec.epsilons.is_empty() {
        return Err(SimError::InvalidSweep("no epsilon values listed".to_string()));
    }
    let mut rows = Vec::new();
    match &spec.source {
        CodeSource::Fixed(instance) => {
            for dspec in &spec.decoders {
                let dec = PreparedDecoder::new(dspec, instance)?;
                for &epsilon in &spec.epsilons {
                    let cfg = ChannelConfig::new(epsilon)?;
                    let result = estimate_ber(&dec, &cfg, spec.trials, spec.seed, spec.workers)?;
                    rows.push(make_row(&dec, epsilon, Some(0), &result));
                }
            }
        }
        CodeSource::Random { k, weight } => {
            if spec.blocks.is_empty() {
                return Err(SimError::InvalidSweep("no blocks values listed".to_string()));
            }
            if spec.realizations == 0 {
                return Err(SimError::InvalidSweep("realizations must be >= 1".to_string()));
            }
            for &blocks in &spec.blocks {
                let instances = draw_realizations(*k, *weight, blocks, spec.realizations, spec.seed)?;
                for dspec in &spec.decoders {
                    for &epsilon in &spec.epsilons {
                        let cfg = ChannelConfig::new(epsilon)?;
                        let mut cell = Vec::new();
                        for (r, instance) in instances.iter().enumerate() {
                            let dec = PreparedDecoder::new(dspec, instance)?;
                            let result =
                                estimate_ber(&dec, &cfg, spec.trials, spec.seed, spec.workers)?;
                            cell.push(make_row(&dec, epsilon, Some(r as u64), &result));
                        }
                        let mut best = 0;
                        for (r, row) in cell.iter().enumerate().skip(1) {
                            if row.pe_bit < cell[best].pe_bit {
                                best = r;
                            }
                        }
                        let mut best_row = cell[best].clone();
                        best_row.realization = None;
                        rows.extend(cell);
                        rows.push(best_row);
                    }
                }
            }
        }
    }
    Ok(rows)
}

/// Seeded code draws for one blocks value. Realization `r` gets a sub-seed
/// from the "matrix" stream, so code draws never share randomness with
/// trial noise.
fn draw_realizations(
    k: usize,
    weight: usize,
    blocks: usize,
    realizations: u64,
    seed: u64,
) -> Result<Vec<CodeInstance>, SimError> {
    (0..realizations)
        .map(|r| {
            let sub = rng::stream(seed, "matrix", &[blocks as u64, r]).next_u64();
            let code = code::random_systematic_circulant(&RandomCodeSpec {
                k,
                blocks,
                weight,
                seed: sub,
            })?;
            Ok(CodeInstance::Plain(code))
        })
        .collect()
}

fn make_row(dec: &PreparedDecoder, epsilon: f64, realization: Option<u64>, result: &BerResult) -> SweepRow {
    let code = dec.code.linear();
    let (lo, hi) = result.pe_bit_interval();
    SweepRow {
        code: code.name().to_string(),
        decoder: result.decoder.clone(),
        n: code.n(),
        k: code.k(),
        epsilon,
        order: dec.order(),
        realization,
        seed: result.seed,
        trials: result.trials,
        pe_bit: result.pe_bit(),
        pe_bit_lo: lo,
        pe_bit_hi: hi,
        worst_bit_index: result.worst_bit_index(),
        elapsed_s: result.elapsed_s,
    }
}

pub const CSV_HEADER: &str = "code,decoder,n,k,rate,epsilon,order,realization,seed,trials,pe_bit,pe_bit_lo,pe_bit_hi,worst_bit_index,elapsed_s";

/// Renders rows as CSV with LF line endings. Wall times go out as a fixed
/// 0.000 unless `timing` is set; the placeholder keeps the bytes identical
/// across runs and worker counts.
pub fn to_csv(rows: &[SweepRow], timing: bool) -> String {
    let mut out = String::with_capacity(128 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let order = row.order.map_or(String::new(), |o| o.to_string());
        let realization = row
            .realization
            .map_or_else(|| "best".to_string(), |r| r.to_string());
        let elapsed = if timing {
            format!("{:.3}", row.elapsed_s)
        } else {
            "0.000".to_string()
        };
        let rate = row.k as f64 / row.n as f64;
        out.push_str(&format!(
            "{},{},{},{},{:.6},{},{},{},{},{},{},{},{},{},{}\n",
            row.code,
            row.decoder,
            row.n,
            row.k,
            rate,
            row.epsilon,
            order,
            realization,
            row.seed,
            row.trials,
            row.pe_bit,
            row.pe_bit_lo,
            row.pe_bit_hi,
            row.worst_bit_index,
            elapsed,
        ));
    }
    out
}
