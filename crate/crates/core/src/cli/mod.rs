//! Command-line front end: one subcommand per operation, JSON on stdout,
//! diagnostics on stderr.
//!
//! Exit codes: 0 success, 1 domain or usage error, 2 resource cap exceeded,
//! 3 verification failure.

use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::embedding::{self, DyadicVector, IndependenceWitness, LimitKind};
use crate::error::{Error, Result};
use crate::family;
use crate::measure::{self, SamplerConfig};
use crate::rational::Rat;
use crate::verify::{self, Scale};
use crate::{json as big, Context, Limits, DEFAULT_BIT_CEILING, DEFAULT_DEPTH_CAP};

pub const EXIT_OK: u8 = 0;
pub const EXIT_DOMAIN: u8 = 1;
pub const EXIT_RESOURCE: u8 = 2;
pub const EXIT_VERIFICATION: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    JsonLines,
}

#[derive(Debug, Parser)]
#[command(name = "primefam", version, about = "Prime-indexed almost-disjoint families and their dyadic embedding")]
pub struct Cli {
    /// Maximum family depth and certificate search depth.
    #[arg(long, global = true, env = "PRIMEFAM_DEPTH_CAP", default_value_t = DEFAULT_DEPTH_CAP)]
    pub depth_cap: usize,
    /// Maximum bit length of any product f_j.
    #[arg(long, global = true, env = "PRIMEFAM_BIT_CEILING", default_value_t = DEFAULT_BIT_CEILING)]
    pub bit_ceiling: u64,
    /// Largest integer answered by sieving rather than primality testing.
    #[arg(long, global = true, env = "PRIMEFAM_SIEVE_CEILING", default_value_t = crate::primes::DEFAULT_SIEVE_CEILING)]
    pub sieve_ceiling: u64,
    #[arg(long, global = true, env = "PRIMEFAM_OUTPUT", value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Primes e_j(t) and products f_j(t) for j <= depth.
    Family {
        #[arg(long)]
        t: Rat,
        #[arg(long)]
        depth: usize,
    },
    /// Certificate for the finite intersection of N_t and N_t'.
    Intersect {
        #[arg(long)]
        t: Rat,
        #[arg(long)]
        tp: Rat,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Membership of t in the exceptional set {p^(-1/i)}.
    #[command(name = "inS")]
    InS {
        #[arg(long)]
        t: Rat,
    },
    /// Truncated embedding x_t (or the binary-digit baseline).
    Embed {
        #[arg(long)]
        t: Rat,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        baseline: bool,
    },
    /// One-sided limits: zero, one, left:A/B, right:p,i.
    Limits {
        #[arg(long)]
        kind: LimitKind,
        #[arg(long)]
        depth: usize,
    },
    /// Build a linear-independence witness, or check one.
    Witness(WitnessArgs),
    /// Sampled embeddings, one JSON object per line.
    Sample {
        #[command(flatten)]
        sampler: SamplerArgs,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Hit-test sampled points against the span of a basis.
    Annihilate {
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        basis: Vec<Rat>,
        #[command(flatten)]
        sampler: SamplerArgs,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Certify pairwise distinctness of sampled embeddings.
    Atoms {
        #[command(flatten)]
        sampler: SamplerArgs,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Maximum relative prime gap over [lo, hi].
    Gapstats {
        #[arg(long)]
        lo: u64,
        #[arg(long)]
        hi: u64,
    },
    /// Run a named property suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "small")]
        scale: Scale,
    },
}

#[derive(Debug, Args)]
pub struct SamplerArgs {
    #[arg(long, default_value_t = 64)]
    pub bits: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[arg(long, value_delimiter = ',', required_unless_present = "check")]
    pub points: Vec<Rat>,
    #[arg(long)]
    pub cap: Option<usize>,
    /// Witness JSON to check (`-` for stdin) instead of building one.
    #[arg(long, conflicts_with = "points")]
    pub check: Option<PathBuf>,
    /// JSON lines from `embed` or `sample` to check the witness against.
    #[arg(long, requires = "check")]
    pub embeddings: Option<PathBuf>,
}

/// Entry point used by the binary.
pub fn run() -> u8 {
    let args: Vec<String> = std::env::args().collect();
    run_with(args, &mut io::stdout().lock(), &mut io::stderr().lock())
}

/// Parses `args` (including the program name) and executes the command.
pub fn run_with<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_DOMAIN } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "primefam: {e}");
            e.exit_code()
        }
    }
}

fn emit(out: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    let s = serde_json::to_string(value).map_err(|e| Error::domain(e.to_string()))?;
    writeln!(out, "{s}").map_err(|e| Error::resource(format!("write failed: {e}")))
}

#[derive(Serialize)]
struct EmbedRecord<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    index: Option<usize>,
    t: &'a Rat,
    depth: usize,
    baseline: bool,
    #[serde(flatten)]
    vector: &'a DyadicVector,
}

/// Any record carrying `t` and an embedded vector (output of `embed` or `sample`).
#[derive(Deserialize)]
struct EmbeddingInput {
    t: Rat,
    #[serde(flatten)]
    vector: DyadicVector,
}

#[derive(Serialize)]
struct InSRecord<'a> {
    t: &'a Rat,
    in_s: bool,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "prime_opt")]
    p: Option<BigUint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    i: Option<u32>,
}

fn prime_opt<S: serde::Serializer>(p: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match p {
        Some(p) => big::prime::serialize(p, s),
        None => s.serialize_none(),
    }
}

fn read_source(path: &PathBuf) -> Result<String> {
    let mut buf = String::new();
    if path.as_os_str() == "-" {
        io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::domain(format!("reading stdin: {e}")))?;
    } else {
        buf = std::fs::read_to_string(path)
            .map_err(|e| Error::domain(format!("reading {}: {e}", path.display())))?;
    }
    Ok(buf)
}

/// Accepts JSON lines, a JSON array, or a single JSON object.
fn parse_embeddings(text: &str) -> Result<Vec<EmbeddingInput>> {
    let trimmed = text.trim_start();
    let bad = |e: serde_json::Error| Error::domain(format!("bad embedding JSON: {e}"));
    if trimmed.starts_with('[') {
        return serde_json::from_str(trimmed).map_err(bad);
    }
    serde_json::Deserializer::from_str(text)
        .into_iter::<EmbeddingInput>()
        .map(|r| r.map_err(bad))
        .collect()
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<u8> {
    let ctx = Context::new(Limits {
        depth_cap: cli.depth_cap,
        bit_ceiling: cli.bit_ceiling,
        sieve_ceiling: cli.sieve_ceiling,
    });
    let cap = |c: Option<usize>| c.unwrap_or(cli.depth_cap);
    match &cli.command {
        Command::Family { t, depth } => {
            emit(out, &family::family_prefix(&ctx, t, *depth)?)?;
        }
        Command::Intersect { t, tp, cap: c } => {
            emit(out, &family::intersection_certificate(&ctx, t, tp, cap(*c))?)?;
        }
        Command::InS { t } => {
            let pt = family::in_s(t);
            emit(
                out,
                &InSRecord {
                    t,
                    in_s: pt.is_some(),
                    p: pt.as_ref().map(|p| p.p().clone()),
                    i: pt.as_ref().map(|p| p.i()),
                },
            )?;
        }
        Command::Embed { t, depth, baseline } => {
            let vector = if *baseline {
                embedding::baseline_embed(t, *depth)?
            } else {
                embedding::embed(&ctx, t, *depth)?
            };
            emit(
                out,
                &EmbedRecord {
                    index: None,
                    t,
                    depth: *depth,
                    baseline: *baseline,
                    vector: &vector,
                },
            )?;
        }
        Command::Limits { kind, depth } => {
            let vector = embedding::limit_point(&ctx, kind, *depth)?;
            let mut record = serde_json::to_value(&vector).expect("serializable");
            record["kind"] = json!(kind.to_string());
            record["depth"] = json!(depth);
            emit(out, &record)?;
        }
        Command::Witness(args) => return witness(&ctx, args, cap(args.cap), out),
        Command::Sample { sampler, depth } => {
            let cfg = sampler.config(*depth);
            let samples = measure::draw_samples(&cfg)?;
            let vectors = samples
                .iter()
                .map(|t| embedding::embed(&ctx, t, *depth))
                .collect::<Result<Vec<_>>>()?;
            let records: Vec<EmbedRecord> = samples
                .iter()
                .zip(&vectors)
                .enumerate()
                .map(|(i, (t, v))| EmbedRecord {
                    index: Some(i),
                    t,
                    depth: *depth,
                    baseline: false,
                    vector: v,
                })
                .collect();
            match cli.output {
                OutputFormat::JsonLines => {
                    for r in &records {
                        emit(out, r)?;
                    }
                }
                OutputFormat::Json => emit(out, &records)?,
            }
        }
        Command::Annihilate { basis, sampler, cap: c } => {
            let cfg = sampler.config(8);
            let report = measure::annihilation_experiment(&ctx, &cfg, basis, cap(*c))?;
            emit(out, &report)?;
            if !report.errors.is_empty() {
                return Ok(EXIT_RESOURCE);
            }
        }
        Command::Atoms { sampler, cap: c } => {
            let cfg = sampler.config(8);
            let report = measure::atomlessness_experiment(&ctx, &cfg, cap(*c))?;
            emit(out, &report)?;
            if !report.failures.is_empty() || !report.errors.is_empty() {
                return Ok(EXIT_RESOURCE);
            }
        }
        Command::Gapstats { lo, hi } => {
            emit(out, &ctx.oracle().gap_stats(*lo, *hi)?)?;
        }
        Command::Verify { suite, seed, scale } => {
            let result = verify::run_suite(suite, *seed, *scale)?;
            emit(out, &result)?;
            if !result.passed() {
                return Ok(EXIT_VERIFICATION);
            }
        }
    }
    Ok(EXIT_OK)
}

impl SamplerArgs {
    fn config(&self, depth: usize) -> SamplerConfig {
        SamplerConfig {
            bits: self.bits,
            seed: self.seed,
            depth,
            n_samples: self.n,
        }
    }
}

fn witness(ctx: &Context, args: &WitnessArgs, cap: usize, out: &mut dyn Write) -> Result<u8> {
    let Some(path) = &args.check else {
        emit(out, &embedding::independence_witness(ctx, &args.points, cap)?)?;
        return Ok(EXIT_OK);
    };
    let w: IndependenceWitness = serde_json::from_str(&read_source(path)?)
        .map_err(|e| Error::domain(format!("bad witness JSON: {e}")))?;
    let outcome = match &args.embeddings {
        None => w.verify(ctx),
        Some(p) => {
            let inputs = parse_embeddings(&read_source(p)?)?;
            w.points
                .iter()
                .map(|t| {
                    inputs
                        .iter()
                        .find(|e| &e.t == t)
                        .map(|e| e.vector.clone())
                        .ok_or_else(|| Error::domain(format!("no embedding supplied for {t}")))
                })
                .collect::<Result<Vec<_>>>()
                .and_then(|vectors| w.check_against(&vectors))
        }
    };
    let record: Value = match &outcome {
        Ok(()) => json!({"verified": true, "points": w.points.len(), "depth_used": w.depth_used}),
        Err(e) => json!({"verified": false, "error": e.to_string()}),
    };
    emit(out, &record)?;
    match outcome {
        Ok(()) => Ok(EXIT_OK),
        Err(Error::Verification(_)) => Ok(EXIT_VERIFICATION),
        Err(e) => Err(e),
    }
}
