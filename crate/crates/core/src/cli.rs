//! The `nekrasov` command line.
//!
//! Settings resolve in the order flag, `NEKRASOV_*` environment variable,
//! TOML file given by `--config`, built-in default. Exit codes: 0 when
//! every check passes, 1 when one fails, 2 on a usage error, 3 on a data
//! error such as a corrupt cache entry.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::Value;

use crate::exactalg::{EqMode, RationalFunctionJson};
use crate::localization::{
    alpha_fingerprint, alpha_n, beta_fingerprint, sha256_hex, AlphaCache, CacheKey, Context, Integrand,
    LocalizationError, Workers, MAX_RANK,
};
use crate::wallcross::{CheckError, CheckReport, Sub, Verifier};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;

const DEFAULT_POINTS: usize = 20;
const DEFAULT_SEED: u64 = 0;

#[derive(Parser, Debug)]
#[command(name = "nekrasov", version, about = "Exact Nekrasov partition functions and wall-crossing checks")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print α_n as canonical JSON, or its fingerprint in randomized mode.
    Alpha {
        /// Also print β_n.
        #[arg(long)]
        beta: bool,
    },
    /// Run a check and print one JSON report per line.
    Verify {
        #[arg(value_enum, id = "check_name", value_name = "CHECK")]
        check: Option<CheckName>,
    },
    /// Time α_n for each worker count and print CSV.
    Bench,
}

#[derive(Args, Debug)]
struct Opts {
    #[arg(long, global = true, env = "NEKRASOV_R", allow_hyphen_values = true)]
    r: Option<usize>,
    #[arg(long, global = true, env = "NEKRASOV_NF", allow_hyphen_values = true)]
    nf: Option<usize>,
    #[arg(long, global = true, env = "NEKRASOV_N", allow_hyphen_values = true)]
    n: Option<usize>,
    #[arg(long, global = true, env = "NEKRASOV_ORDER", allow_hyphen_values = true)]
    order: Option<usize>,
    #[arg(long, global = true, env = "NEKRASOV_MODE", value_enum)]
    mode: Option<ModeName>,
    #[arg(long, global = true, env = "NEKRASOV_POINTS", allow_hyphen_values = true)]
    points: Option<usize>,
    #[arg(long, global = true, env = "NEKRASOV_SEED", allow_hyphen_values = true)]
    seed: Option<u64>,
    /// One count, or a comma-separated list for `bench`.
    #[arg(long, global = true, env = "NEKRASOV_WORKERS", value_delimiter = ',')]
    workers: Option<Vec<usize>>,
    #[arg(long, global = true, env = "NEKRASOV_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, env = "NEKRASOV_FORMAT", value_enum)]
    format: Option<Format>,
    #[arg(long, global = true, env = "NEKRASOV_CHECK", value_enum)]
    check: Option<CheckName>,
    #[arg(long, global = true, env = "NEKRASOV_P", allow_hyphen_values = true)]
    p: Option<usize>,
    #[arg(long, global = true, env = "NEKRASOV_K", allow_hyphen_values = true)]
    k: Option<usize>,
    /// Include wall-clock durations in reports.
    #[arg(long, global = true, env = "NEKRASOV_TIMINGS")]
    timings: bool,
    #[arg(long, global = true, env = "NEKRASOV_CONFIG")]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ModeName {
    Symbolic,
    Randomized,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
enum CheckName {
    Main,
    Even,
    Odd,
    Reduce,
    Hilbert,
    Residue,
    Goal,
    Counting,
    Rank1,
    #[value(name = "parity_unit", alias = "parity-unit")]
    ParityUnit,
    Symmetry,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    r: Option<usize>,
    nf: Option<usize>,
    n: Option<usize>,
    order: Option<usize>,
    mode: Option<ModeName>,
    points: Option<usize>,
    seed: Option<u64>,
    workers: Option<WorkerSpec>,
    cache_dir: Option<PathBuf>,
    format: Option<Format>,
    check: Option<CheckName>,
    p: Option<usize>,
    k: Option<usize>,
    timings: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum WorkerSpec {
    One(usize),
    Many(Vec<usize>),
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
    Failed(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
            CliError::Failed(_) => EXIT_FAIL,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Failed(m) => m,
        }
    }
}

impl From<CheckError> for CliError {
    fn from(e: CheckError) -> Self {
        if e.is_data_error() {
            CliError::Data(e.to_string())
        } else if matches!(e, CheckError::InvalidParameter(_)) {
            CliError::Usage(e.to_string())
        } else {
            CliError::Failed(e.to_string())
        }
    }
}

impl From<LocalizationError> for CliError {
    fn from(e: LocalizationError) -> Self {
        CliError::from(CheckError::from(e))
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failed(format!("write failed: {e}"))
    }
}

/// Validated settings for one invocation.
#[derive(Debug)]
struct RunConfig {
    r: Option<usize>,
    nf: Option<usize>,
    n: Option<usize>,
    order: Option<usize>,
    mode: EqMode,
    workers: Vec<usize>,
    cache_dir: Option<PathBuf>,
    format: Format,
    check: Option<CheckName>,
    p: Option<usize>,
    k: Option<usize>,
    timings: bool,
}

impl RunConfig {
    fn resolve(opts: Opts) -> Result<Self, CliError> {
        let file = match &opts.config {
            Some(path) => load_config(path)?,
            None => FileConfig::default(),
        };
        let mode = opts.mode.or(file.mode).unwrap_or(ModeName::Symbolic);
        let points = opts.points.or(file.points).unwrap_or(DEFAULT_POINTS);
        let seed = opts.seed.or(file.seed).unwrap_or(DEFAULT_SEED);
        let mode = match mode {
            ModeName::Symbolic => EqMode::Symbolic,
            ModeName::Randomized => {
                if points == 0 {
                    return Err(CliError::Usage("--points must be at least 1".into()));
                }
                EqMode::Randomized { points, seed }
            }
        };
        let workers = match (opts.workers, file.workers) {
            (Some(w), _) => w,
            (None, Some(WorkerSpec::One(w))) => vec![w],
            (None, Some(WorkerSpec::Many(w))) => w,
            (None, None) => Vec::new(),
        };
        if workers.contains(&0) {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        let cfg = RunConfig {
            r: opts.r.or(file.r),
            nf: opts.nf.or(file.nf),
            n: opts.n.or(file.n),
            order: opts.order.or(file.order),
            mode,
            workers,
            cache_dir: opts.cache_dir.or(file.cache_dir),
            format: opts.format.or(file.format).unwrap_or(Format::Json),
            check: opts.check.or(file.check),
            p: opts.p.or(file.p),
            k: opts.k.or(file.k),
            timings: opts.timings || file.timings.unwrap_or(false),
        };
        if let Some(r) = cfg.r {
            if r == 0 || r > MAX_RANK {
                return Err(CliError::Usage(format!("--r must be between 1 and {MAX_RANK}, got {r}")));
            }
        }
        if let Some(nf) = cfg.nf {
            let r = cfg.rank();
            if nf > 2 * r {
                return Err(CliError::Usage(format!("--nf must be at most 2r = {}, got {nf}", 2 * r)));
            }
        }
        Ok(cfg)
    }

    fn rank(&self) -> usize {
        self.r.unwrap_or(1)
    }

    fn flavors(&self) -> usize {
        self.nf.unwrap_or(2 * self.rank())
    }

    fn need(&self, value: Option<usize>, flag: &str) -> Result<usize, CliError> {
        value.ok_or_else(|| CliError::Usage(format!("{flag} is required here")))
    }

    fn need_positive(&self, value: Option<usize>, flag: &str) -> Result<usize, CliError> {
        match self.need(value, flag)? {
            0 => Err(CliError::Usage(format!("{flag} must be at least 1"))),
            v => Ok(v),
        }
    }

    fn single_workers(&self) -> Result<Workers, CliError> {
        match self.workers.as_slice() {
            [] => Ok(Workers::default()),
            [w] => Ok(Workers::new(*w)),
            _ => Err(CliError::Usage("--workers takes a list only for bench".into())),
        }
    }

    fn cache(&self) -> Option<AlphaCache> {
        self.cache_dir.as_ref().map(AlphaCache::new)
    }
}

fn load_config(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("--config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("--config {}: {e}", path.display())))
}

/// Parses `args` and runs the command, writing results to `out` and
/// diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_PASS;
        }
    };
    let result = RunConfig::resolve(cli.opts).and_then(|cfg| match cli.command {
        Command::Alpha { beta } => cmd_alpha(&cfg, beta, out),
        Command::Verify { check } => cmd_verify(&cfg, check, out),
        Command::Bench => cmd_bench(&cfg, out),
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
    }
}

fn cmd_alpha(cfg: &RunConfig, beta: bool, out: &mut dyn Write) -> Result<i32, CliError> {
    let n = cfg.need(cfg.n, "--n")?;
    let r = cfg.rank();
    let nf = cfg.flavors();
    let ctx = Context::new(r)?;
    let workers = cfg.single_workers()?;
    match cfg.mode {
        EqMode::Symbolic => {
            let verifier = Verifier::new(workers, cfg.cache());
            let eval = verifier.symbolic(&ctx);
            let integrand = Integrand::Matter { flavors: nf };
            let mut subs = vec![Sub::Id];
            if beta {
                subs.push(Sub::NegAM);
            }
            for sub in subs {
                let value = eval.get(n, &integrand, &sub)?;
                match cfg.format {
                    Format::Json => {
                        writeln!(out, "{}", RationalFunctionJson::from_rf(&value, ctx.vars()).to_string_canonical())?
                    }
                    Format::Table => {
                        let name = if sub == Sub::Id { "alpha" } else { "beta" };
                        writeln!(out, "{name}_{n} = {}", value.display(ctx.vars()))?
                    }
                }
            }
        }
        EqMode::Randomized { points, seed } => {
            let mut quantities = vec![false];
            if beta {
                quantities.push(true);
            }
            for is_beta in quantities {
                let value = cached_fingerprint(cfg, &ctx, n, nf, points, seed, &workers, is_beta)?;
                match cfg.format {
                    Format::Json => writeln!(out, "{value}")?,
                    Format::Table => write_fingerprint_table(&value, out)?,
                }
            }
        }
    }
    Ok(EXIT_PASS)
}

#[allow(clippy::too_many_arguments)]
fn cached_fingerprint(
    cfg: &RunConfig,
    ctx: &Context,
    n: usize,
    nf: usize,
    points: usize,
    seed: u64,
    workers: &Workers,
    beta: bool,
) -> Result<Value, CliError> {
    let prefix = if beta { "randomized-beta" } else { "randomized" };
    let key = CacheKey { r: ctx.rank(), nf, n, mode: format!("{prefix}-{points}-{seed}") };
    let cache = cfg.cache();
    if let Some(cache) = &cache {
        if let Some(v) = cache.load(&key)? {
            return Ok(v);
        }
    }
    let value = if beta {
        beta_fingerprint(ctx, n, nf, points, seed, workers)?
    } else {
        alpha_fingerprint(ctx, n, nf, points, seed, workers)?
    };
    if let Some(cache) = &cache {
        cache.store(&key, &value)?;
    }
    Ok(value)
}

fn write_fingerprint_table(value: &Value, out: &mut dyn Write) -> Result<(), CliError> {
    let name = value["quantity"].as_str().unwrap_or("alpha");
    writeln!(out, "{name}_{} at {} seeded points (seed {})", value["n"], value["certificate"]["points"], value["certificate"]["seed"])?;
    for v in value["values"].as_array().into_iter().flatten() {
        let coords: Vec<&str> = v["point"]["values"].as_array().into_iter().flatten().filter_map(Value::as_str).collect();
        writeln!(out, "  ({}) -> {}", coords.join(", "), v["value"].as_str().unwrap_or(""))?;
    }
    Ok(())
}

fn cmd_verify(cfg: &RunConfig, check: Option<CheckName>, out: &mut dyn Write) -> Result<i32, CliError> {
    let check = check
        .or(cfg.check)
        .ok_or_else(|| CliError::Usage("name a check, positionally or with --check".into()))?;
    let verifier = Verifier::new(cfg.single_workers()?, cfg.cache());
    let r = cfg.rank();
    let mode = cfg.mode;
    let mut failed = false;
    let mut emit = |report: CheckReport, out: &mut dyn Write| -> Result<(), CliError> {
        failed |= !report.passed();
        match cfg.format {
            Format::Json => writeln!(out, "{}", report.to_json(cfg.timings))?,
            Format::Table => writeln!(out, "{}", table_row(&report, cfg.timings))?,
        }
        out.flush()?;
        Ok(())
    };
    match check {
        CheckName::Main => {
            for n in 1..=cfg.need_positive(cfg.n, "--n")? {
                emit(verifier.main(r, n, mode)?, out)?;
            }
        }
        CheckName::Even => emit(verifier.even(r, cfg.need(cfg.order, "--order")?, mode)?, out)?,
        CheckName::Odd => {
            let order = cfg.need(cfg.order, "--order")?;
            let flavors: Vec<usize> = match cfg.nf {
                Some(nf) => vec![nf],
                None => (0..2 * r).collect(),
            };
            for nf in flavors {
                emit(verifier.odd(r, nf, order, mode)?, out)?;
            }
        }
        CheckName::Reduce => {
            let nf = cfg.flavors();
            for n in 1..=cfg.need_positive(cfg.n, "--n")? {
                emit(verifier.reduce(r, n, nf)?, out)?;
            }
        }
        CheckName::Hilbert => emit(verifier.hilbert(cfg.need(cfg.n, "--n")?, mode)?, out)?,
        CheckName::Residue => {
            for p in 1..=cfg.need_positive(cfg.p, "--p")? {
                emit(verifier.residue(p)?, out)?;
            }
        }
        CheckName::Goal => {
            for k in 1..=cfg.need_positive(cfg.k, "--k")? {
                emit(verifier.goal(k)?, out)?;
            }
        }
        CheckName::Counting => emit(verifier.counting(cfg.need(cfg.n, "--n")?)?, out)?,
        CheckName::Rank1 => {
            let order = cfg.need(cfg.order, "--order")?;
            emit(verifier.rank1_hilbert(order, mode)?, out)?;
            emit(verifier.rank1_binomial(order, mode)?, out)?;
            emit(verifier.rank1_co(order, mode)?, out)?;
        }
        CheckName::ParityUnit => emit(verifier.parity_unit(r, cfg.need(cfg.order, "--order")?, mode)?, out)?,
        CheckName::Symmetry => {
            let n = cfg.need(cfg.n.or(cfg.order), "--n")?;
            let order = cfg.order.unwrap_or(n);
            emit(verifier.flavor_symmetry(r, n, mode)?, out)?;
            emit(verifier.exchange_symmetry(r, n, mode)?, out)?;
            emit(verifier.sign_symmetry(r, order, mode)?, out)?;
        }
    }
    Ok(if failed { EXIT_FAIL } else { EXIT_PASS })
}

fn table_row(report: &CheckReport, timings: bool) -> String {
    let params: Vec<String> = report.params.iter().map(|(k, v)| match v.as_str() {
            Some(s) => format!("{k}={s}"),
            None => format!("{k}={v}"),
        })
        .collect();
    let verdict = serde_json::to_value(report.verdict).ok().and_then(|v| v.as_str().map(str::to_string));
    let mut row = format!("{:<22} {:<6} {}", report.check, verdict.unwrap_or_default(), params.join(" "));
    if let Some(note) = &report.note {
        row.push_str(&format!("  # {note}"));
    }
    if timings {
        row.push_str(&format!("  {} ms", report.duration.as_millis()));
    }
    row
}

fn cmd_bench(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let (Some(r), Some(n)) = (cfg.r, cfg.n) else {
        return Err(CliError::Usage("bench needs --r and --n".into()));
    };
    let nf = cfg.flavors();
    let ctx = Context::new(r)?;
    let workers = if cfg.workers.is_empty() {
        let all = std::thread::available_parallelism().map_or(1, usize::from);
        if all > 1 { vec![1, all] } else { vec![1] }
    } else {
        cfg.workers.clone()
    };
    let mut csv = csv::Writer::from_writer(out);
    csv.write_record(["r", "n", "nf", "mode", "points", "seed", "workers", "millis", "hash"])
        .map_err(|e| CliError::Failed(e.to_string()))?;
    for w in workers {
        let pool = Workers::new(w);
        let start = Instant::now();
        let (serialized, points, seed) = match cfg.mode {
            EqMode::Symbolic => {
                let value = alpha_n(&ctx, n, nf, &pool)?;
                (RationalFunctionJson::from_rf(&value, ctx.vars()).to_string_canonical(), String::new(), String::new())
            }
            EqMode::Randomized { points, seed } => {
                let value = alpha_fingerprint(&ctx, n, nf, points, seed, &pool)?;
                (value.to_string(), points.to_string(), seed.to_string())
            }
        };
        let millis = start.elapsed().as_millis().to_string();
        let mode = match cfg.mode {
            EqMode::Symbolic => "symbolic",
            EqMode::Randomized { .. } => "randomized",
        };
        let hash = sha256_hex(serialized.as_bytes());
        csv.write_record([
            r.to_string(),
            n.to_string(),
            nf.to_string(),
            mode.to_string(),
            points,
            seed,
            w.to_string(),
            millis,
            hash,
        ])
        .map_err(|e| CliError::Failed(e.to_string()))?;
        csv.flush()?;
    }
    Ok(EXIT_PASS)
}
