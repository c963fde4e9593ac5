//! Command-line front end: argument parsing, output rendering, and exit
//! codes around the `berg` library.
//!
//! Exit codes: 0 success, 1 validation or check failure, 2 inconclusive
//! verdicts, 64 usage errors. Output is a pure function of the argument
//! vector: every random draw is seeded explicitly, JSON objects serialize
//! with sorted keys, and CSV doubles carry 17 significant digits. JSON
//! payloads embed the formulas behind their numeric columns so a saved file
//! is auditable on its own.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde_json::{json, Value};

use berg::catalog::{catalog_map, CatalogName};
use berg::dist::{parse_distribution, CountDistribution};
use berg::inar::{
    build_stationary_berg, build_stationary_compnb, build_stationary_zmg, innovation_decompose,
    InarSpec,
};
use berg::monotone::{
    alpha_monotone_check, convolution_params, fixed_m_monotone_check, fixed_r_monotone_check,
    marginal_convolution_params, mr_monotone_check, mr_monotone_synthesize, MarginalKind,
    MonotoneParams, MonotonicityVerdict,
};
use berg::params::ThinningParams;
use berg::quad::{IntegralOutcome, QuadratureOptions};
use berg::thinning::{thin_conditional_pmf, thin_marginal_pmf, thin_sample};
use berg::verify::{
    run_mc_verify_with_threshold, OutputFormat, RunConfig, VerificationReport, RNG_ALGORITHM,
};
use berg::{Error, PmfVector, Result};

/// Exit status for usage errors (bad flags, malformed descriptors).
pub const EXIT_USAGE: i32 = 64;
/// Exit status when a check or verdict is inconclusive.
pub const EXIT_INCONCLUSIVE: i32 = 2;
/// Exit status for validation and check failures.
pub const EXIT_FAILURE: i32 = 1;

/// What a finished invocation produced: the rendered text, where it should
/// go, and the process exit code.
#[derive(Debug, Clone)]
pub struct CliOutcome {
    pub exit_code: i32,
    pub output: String,
    pub use_stderr: bool,
    pub wrote_file: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "berg",
    about = "Linear-fractional thinning semigroup, BerG distributions, \
             integer autoregressions, and monotonicity diagnostics",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for every random draw (64-bit)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Series and pmf truncation length
    #[arg(long = "K", global = true, default_value_t = 128)]
    truncation: usize,

    /// Requested estimate precision: a verify statistic whose standard
    /// error exceeds this is flagged underpowered [default: 0.05]
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Output encoding; each subcommand has a natural default
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Distribution tables, moments, and draws
    #[command(subcommand)]
    Dist(DistCommand),
    /// Parameter-pair composition, powers, and validation
    #[command(subcommand)]
    Semigroup(SemigroupCommand),
    /// Apply the thinning operator to a count or a law
    Thin(ThinArgs),
    /// Integer-valued autoregression tools
    #[command(subcommand)]
    Inar(InarCommand),
    /// Monotonicity checks and synthesis
    #[command(subcommand)]
    Mono(MonoCommand),
}

#[derive(Debug, Subcommand)]
enum DistCommand {
    /// Probability mass table on 0..=K
    Pmf {
        /// Descriptor: berg:m,r | compnb:m,r,a | zmg:pi,mu | nb:p,a | pointmass:k
        #[arg(long)]
        name: String,
    },
    /// Mean, variance, and dispersion index
    Moments {
        #[arg(long)]
        name: String,
    },
    /// Seeded independent draws
    Sample {
        #[arg(long)]
        name: String,
        /// Number of draws
        #[arg(long, default_value_t = 1000)]
        n: usize,
    },
}

#[derive(Debug, Subcommand)]
enum SemigroupCommand {
    /// Parameters of the composition: first applied, then the second
    Compose {
        /// First pair as m,r
        #[arg(long)]
        p: String,
        /// Second pair as m,r
        #[arg(long)]
        q: String,
    },
    /// Parameters of the n-fold self-composition
    Power {
        #[arg(long)]
        p: String,
        #[arg(long)]
        n: u32,
    },
    /// Membership and boundary classification of a pair
    Validate {
        #[arg(long)]
        p: String,
    },
}

#[derive(Debug, Args)]
struct ThinArgs {
    /// Operator: m,r or a catalog descriptor like negbin:0.5
    #[arg(long)]
    op: String,
    /// Input: an integer count or a distribution descriptor
    #[arg(long)]
    x: String,
    /// Emit the exact law (default)
    #[arg(long, conflicts_with = "sample")]
    exact: bool,
    /// Emit this many seeded draws instead
    #[arg(long)]
    sample: Option<usize>,
}

#[derive(Debug, Args)]
struct StationaryArgs {
    /// Mean factor of the operator
    #[arg(long)]
    m: f64,
    /// Geometric shift of the operator
    #[arg(long)]
    r: f64,
    /// Stationary marginal: berg:m,r | compnb:m,r,a | zmg:pi,mu | nb:p,a
    #[arg(long)]
    marginal: String,
    /// Compounding shape; lifts a berg marginal to compnb
    #[arg(long)]
    a: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum InarCommand {
    /// Simulate a stationary path; columns t, x, thinned, innovation
    Simulate {
        #[command(flatten)]
        stationary: StationaryArgs,
        /// Number of transitions
        #[arg(long = "T", default_value_t = 1000)]
        t_len: usize,
    },
    /// Factor the stationary innovation law into its two components
    Decompose {
        #[arg(long)]
        m: f64,
        #[arg(long)]
        r: f64,
        /// Marginal mean factor
        #[arg(long)]
        mprime: f64,
        /// Marginal geometric shift
        #[arg(long)]
        rprime: f64,
    },
    /// Stationarity criteria for a process given as inline JSON
    Check {
        /// JSON object {"m":..,"r":..,"marginal":"berg:..",("a":..)}
        #[arg(long)]
        spec: String,
    },
    /// Monte Carlo verification of the closed-form statistics
    Verify {
        #[command(flatten)]
        stationary: StationaryArgs,
        /// Series length per replicate
        #[arg(long = "T", default_value_t = 100_000)]
        t_len: usize,
        /// Independent replicates (streams of the seed)
        #[arg(long, default_value_t = 1)]
        replicates: usize,
        /// Pass threshold on |z|
        #[arg(long, default_value_t = 4.0)]
        z_threshold: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Joint,
    FixedR,
    FixedM,
}

#[derive(Debug, Subcommand)]
enum MonoCommand {
    /// Monotonicity verdict for a pmf read from CSV
    Check {
        /// CSV file with an index,probability header
        #[arg(long)]
        pmf: PathBuf,
        /// Power exponent; alone it selects the plain alpha check
        #[arg(long)]
        alpha: Option<f64>,
        /// Exponential mean; with alpha selects the joint check
        #[arg(long)]
        theta: Option<f64>,
        /// Fixed geometric shift; with alpha selects that marginal check
        #[arg(long)]
        r: Option<f64>,
        /// Fixed thinning fraction; with theta selects that marginal check
        #[arg(long)]
        m: Option<f64>,
    },
    /// Synthesize the mixture law of a member of the joint class
    Synth {
        /// Base distribution descriptor
        #[arg(long)]
        dist: String,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        theta: f64,
    },
    /// Parameters under which a convolution stays in its class
    ConvolveParams {
        #[arg(long, value_enum, default_value_t = KindArg::Joint)]
        kind: KindArg,
        /// First pair: alpha,theta (joint), alpha,r (fixed-r), theta,m (fixed-m)
        #[arg(long)]
        first: String,
        /// Second pair, same shape as --first
        #[arg(long)]
        second: String,
    },
}

/// Parses and runs an argument vector, returning the rendered output and
/// exit code without touching the process. `argv[0]` is the program name.
pub fn execute<I, T>(argv: I) -> CliOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let benign = matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            );
            return CliOutcome {
                exit_code: if benign { 0 } else { EXIT_USAGE },
                output: err.to_string(),
                use_stderr: !benign,
                wrote_file: false,
            };
        }
    };
    match run_command(&cli) {
        Ok((output, exit_code)) => {
            if let Some(path) = &cli.out {
                if let Err(io) = std::fs::write(path, &output) {
                    return CliOutcome {
                        exit_code: EXIT_FAILURE,
                        output: format!("error: cannot write {}: {io}\n", path.display()),
                        use_stderr: true,
                        wrote_file: false,
                    };
                }
                return CliOutcome {
                    exit_code,
                    output,
                    use_stderr: false,
                    wrote_file: true,
                };
            }
            CliOutcome {
                exit_code,
                output,
                use_stderr: false,
                wrote_file: false,
            }
        }
        Err(err) => CliOutcome {
            exit_code: classify_error(&err),
            output: format!("error: {err}\n"),
            use_stderr: true,
            wrote_file: false,
        },
    }
}

/// Maps library errors onto the exit-code contract: malformed input text is
/// a usage error, a quadrature that cannot decide is inconclusive, and
/// everything else is a validation failure.
fn classify_error(err: &Error) -> i32 {
    match err {
        Error::Parse(_) => EXIT_USAGE,
        Error::Quadrature(_) => EXIT_INCONCLUSIVE,
        _ => EXIT_FAILURE,
    }
}

fn run_command(cli: &Cli) -> Result<(String, i32)> {
    match &cli.command {
        Command::Dist(cmd) => run_dist(cli, cmd),
        Command::Semigroup(cmd) => run_semigroup(cli, cmd),
        Command::Thin(args) => run_thin(cli, args),
        Command::Inar(cmd) => run_inar(cli, cmd),
        Command::Mono(cmd) => run_mono(cli, cmd),
    }
}

// ---------------------------------------------------------------------------
// rendering helpers
// ---------------------------------------------------------------------------

fn chosen(format: Option<FormatArg>, natural: FormatArg) -> FormatArg {
    format.unwrap_or(natural)
}

/// 17 significant digits, enough to round-trip any double exactly.
fn csv_num(v: f64) -> String {
    format!("{v:.16e}")
}

/// RFC-4180 field quoting: fields containing commas, quotes, or line
/// breaks are wrapped in quotes with inner quotes doubled.
fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\r', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

fn json_pretty(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON rendering cannot fail");
    text.push('\n');
    text
}

/// Fallback CSV for structured results: the JSON object flattened into
/// field,value rows in key order.
fn json_to_csv(value: &Value) -> String {
    fn walk(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
        match v {
            Value::Object(map) => {
                for (k, inner) in map {
                    let path = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    walk(&path, inner, rows);
                }
            }
            Value::Array(items) => {
                for (i, inner) in items.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), inner, rows);
                }
            }
            Value::Number(n) => {
                let rendered = match n.as_f64() {
                    Some(f) if !n.is_i64() && !n.is_u64() => csv_num(f),
                    _ => n.to_string(),
                };
                rows.push((prefix.to_string(), rendered));
            }
            Value::Bool(b) => rows.push((prefix.to_string(), b.to_string())),
            Value::String(s) => rows.push((prefix.to_string(), s.clone())),
            Value::Null => rows.push((prefix.to_string(), String::new())),
        }
    }
    let mut rows = Vec::new();
    walk("", value, &mut rows);
    let mut out = String::from("field,value\r\n");
    for (field, val) in rows {
        let _ = write!(out, "{},{}\r\n", csv_field(&field), csv_field(&val));
    }
    out
}

fn render_value(value: &Value, format: FormatArg) -> String {
    match format {
        FormatArg::Json => json_pretty(value),
        FormatArg::Csv => json_to_csv(value),
    }
}

fn pmf_json(pmf: &PmfVector, formulas: &[&str]) -> Value {
    json!({
        "formulas": formulas,
        "probs": pmf.probs(),
        "tail_bound": pmf.tail_bound(),
    })
}

fn render_pmf(pmf: &PmfVector, format: FormatArg, formulas: &[&str]) -> String {
    match format {
        FormatArg::Csv => pmf.to_csv_string(),
        FormatArg::Json => json_pretty(&pmf_json(pmf, formulas)),
    }
}

fn render_draws(draws: &[u64], format: FormatArg, seed: u64) -> String {
    match format {
        FormatArg::Csv => {
            let mut out = String::from("index,value\r\n");
            for (i, &v) in draws.iter().enumerate() {
                let _ = write!(out, "{i},{v}\r\n");
            }
            out
        }
        FormatArg::Json => json_pretty(&json!({
            "draws": draws,
            "rng_algorithm": RNG_ALGORITHM,
            "seed": seed,
        })),
    }
}

// ---------------------------------------------------------------------------
// argument parsing helpers
// ---------------------------------------------------------------------------

fn parse_f64_field(text: &str, what: &str) -> Result<f64> {
    text.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("{what}: expected a number, got {text:?}")))
}

/// Comma pair "a,b" as two reals.
fn parse_pair(text: &str, what: &str) -> Result<(f64, f64)> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("{what}: expected a,b, got {text:?}")))?;
    Ok((parse_f64_field(a, what)?, parse_f64_field(b, what)?))
}

fn parse_params(text: &str, what: &str) -> Result<ThinningParams> {
    let (m, r) = parse_pair(text, what)?;
    ThinningParams::new(m, r)
}

/// Operator descriptor: a raw `m,r` pair or a catalog family
/// `name:comma-separated-params` mapped into the parameter plane.
fn parse_operator(text: &str) -> Result<ThinningParams> {
    if let Some((name, rest)) = text.split_once(':') {
        let name = CatalogName::parse(name)?;
        let values = rest
            .split(',')
            .map(|v| parse_f64_field(v, "operator parameter"))
            .collect::<Result<Vec<f64>>>()?;
        return Ok(catalog_map(name, &values)?.mapped);
    }
    parse_params(text, "--op")
}

/// Builds a stationary autoregression from operator parameters and a
/// marginal descriptor. A `berg` marginal with `--a` is promoted to the
/// compound family with that shape.
fn build_spec(m: f64, r: f64, marginal: &str, shape: Option<f64>) -> Result<InarSpec> {
    let p = ThinningParams::new(m, r)?;
    let (family, rest) = marginal.split_once(':').ok_or_else(|| {
        Error::Parse(format!(
            "marginal {marginal:?} is not of the form name:params"
        ))
    })?;
    let values = rest
        .split(',')
        .map(|v| parse_f64_field(v, "marginal parameter"))
        .collect::<Result<Vec<f64>>>()?;
    let expect = |n: usize| -> Result<()> {
        if values.len() == n {
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "marginal family {family} takes {n} parameters, got {}",
                values.len()
            )))
        }
    };
    match family {
        "berg" => {
            expect(2)?;
            let mp = ThinningParams::new(values[0], values[1])?;
            match shape {
                None => build_stationary_berg(p, mp),
                Some(a) => build_stationary_compnb(p, mp, a),
            }
        }
        "compnb" => {
            expect(3)?;
            let mp = ThinningParams::new(values[0], values[1])?;
            if let Some(a) = shape {
                if (a - values[2]).abs() > 0.0 {
                    return Err(Error::Parse(format!(
                        "--a {a} disagrees with the descriptor shape {}",
                        values[2]
                    )));
                }
            }
            build_stationary_compnb(p, mp, values[2])
        }
        "nb" => {
            expect(2)?;
            let (prob, a) = (values[0], values[1]);
            if !(prob > 0.0 && prob < 1.0) {
                return Err(Error::Constraint(format!(
                    "negative binomial success probability {prob} outside (0, 1)"
                )));
            }
            let odds = (1.0 - prob) / prob;
            build_stationary_compnb(p, ThinningParams::new(odds, odds)?, a)
        }
        "zmg" => {
            expect(2)?;
            build_stationary_zmg(p, values[0], values[1])
        }
        other => Err(Error::Parse(format!(
            "unsupported stationary marginal family {other:?} \
             (expected berg, compnb, nb, or zmg)"
        ))),
    }
}

// ---------------------------------------------------------------------------
// dist
// ---------------------------------------------------------------------------

fn pmf_formula(d: &CountDistribution) -> &'static str {
    match d {
        CountDistribution::Berg(_) => {
            "p0 = 1 - m/(1+r); pk = m r^(k-1) / (1+r)^(k+1) for k >= 1"
        }
        CountDistribution::CompNb { .. } => {
            "pgf = (1 - m(1-s)/(1+r(1-s)))^a, expanded through the compounding sum"
        }
        CountDistribution::PointMass(_) => "pk = 1 at the fixed count, 0 elsewhere",
    }
}

fn moment_formulas(d: &CountDistribution) -> [&'static str; 2] {
    match d {
        CountDistribution::Berg(_) => ["mean = m", "var = m (2r + 1 - m)"],
        CountDistribution::CompNb { .. } => ["mean = a m", "var = a m (2r + 1 - m)"],
        CountDistribution::PointMass(_) => ["mean = k", "var = 0"],
    }
}

fn run_dist(cli: &Cli, cmd: &DistCommand) -> Result<(String, i32)> {
    match cmd {
        DistCommand::Pmf { name } => {
            let d = parse_distribution(name)?;
            let pmf = d.pmf(cli.truncation)?;
            let format = chosen(cli.format, FormatArg::Csv);
            Ok((render_pmf(&pmf, format, &[pmf_formula(&d)]), 0))
        }
        DistCommand::Moments { name } => {
            let d = parse_distribution(name)?;
            let [mean_f, var_f] = moment_formulas(&d);
            let mean = d.mean();
            let variance = d.variance();
            let value = json!({
                "descriptor": d.descriptor(),
                "dispersion": if mean > 0.0 { variance / mean } else { f64::NAN },
                "formulas": [mean_f, var_f, "dispersion = var / mean"],
                "mean": mean,
                "variance": variance,
            });
            Ok((render_value(&value, chosen(cli.format, FormatArg::Json)), 0))
        }
        DistCommand::Sample { name, n } => {
            let d = parse_distribution(name)?;
            let mut rng = ChaCha12Rng::seed_from_u64(cli.seed);
            let draws = d.sample_many(&mut rng, *n);
            let format = chosen(cli.format, FormatArg::Csv);
            Ok((render_draws(&draws, format, cli.seed), 0))
        }
    }
}

// ---------------------------------------------------------------------------
// semigroup
// ---------------------------------------------------------------------------

fn run_semigroup(cli: &Cli, cmd: &SemigroupCommand) -> Result<(String, i32)> {
    let format = chosen(cli.format, FormatArg::Json);
    match cmd {
        SemigroupCommand::Compose { p, q } => {
            let first = parse_params(p, "--p")?;
            let second = parse_params(q, "--q")?;
            let composed = first.compose(second);
            let value = json!({
                "formulas": ["compose((m1,r1),(m2,r2)) = (m1 m2, r1 + r2 m1)"],
                "m": composed.m,
                "r": composed.r,
            });
            Ok((render_value(&value, format), 0))
        }
        SemigroupCommand::Power { p, n } => {
            let base = parse_params(p, "--p")?;
            let powered = base.power(*n);
            let value = json!({
                "formulas": ["power(n) = (m^n, r (1 + m + ... + m^(n-1)))"],
                "m": powered.m,
                "n": n,
                "r": powered.r,
            });
            Ok((render_value(&value, format), 0))
        }
        SemigroupCommand::Validate { p } => {
            let (m, r) = parse_pair(p, "--p")?;
            match ThinningParams::new(m, r) {
                Ok(params) => {
                    let class = params.classify();
                    let value = json!({
                        "binomial_edge": class.binomial_edge,
                        "expectation_thinning": class.expectation_thinning,
                        "formulas": ["admissible iff r >= 0 and 0 < m <= r + 1"],
                        "m": params.m,
                        "r": params.r,
                        "shifted_geometric_edge": class.shifted_geometric_edge,
                        "unit_mean_edge": class.unit_mean_edge,
                        "valid": true,
                    });
                    Ok((render_value(&value, format), 0))
                }
                Err(err) => {
                    let value = json!({
                        "error": err.to_string(),
                        "formulas": ["admissible iff r >= 0 and 0 < m <= r + 1"],
                        "valid": false,
                    });
                    Ok((render_value(&value, format), EXIT_FAILURE))
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// thin
// ---------------------------------------------------------------------------

fn run_thin(cli: &Cli, args: &ThinArgs) -> Result<(String, i32)> {
    let op = parse_operator(&args.op)?;
    let as_count: Option<u64> = args.x.trim().parse().ok();
    match args.sample {
        None => {
            let pmf = match as_count {
                Some(x) => thin_conditional_pmf(op, x, cli.truncation)?,
                None => {
                    let law = parse_distribution(&args.x)?.pmf(cli.truncation)?;
                    thin_marginal_pmf(op, &law, cli.truncation)?
                }
            };
            let format = chosen(cli.format, FormatArg::Csv);
            Ok((
                render_pmf(
                    &pmf,
                    format,
                    &["thinned pgf = pgf_X(1 - m(1-s)/(1+r(1-s)))"],
                ),
                0,
            ))
        }
        Some(n) => {
            let mut rng = ChaCha12Rng::seed_from_u64(cli.seed);
            let draws: Vec<u64> = match as_count {
                Some(x) => (0..n).map(|_| thin_sample(op, x, &mut rng)).collect(),
                None => {
                    let d = parse_distribution(&args.x)?;
                    (0..n)
                        .map(|_| {
                            let x = d.sample(&mut rng);
                            thin_sample(op, x, &mut rng)
                        })
                        .collect()
                }
            };
            let format = chosen(cli.format, FormatArg::Csv);
            Ok((render_draws(&draws, format, cli.seed), 0))
        }
    }
}

// ---------------------------------------------------------------------------
// inar
// ---------------------------------------------------------------------------

fn render_path_csv(path: &berg::inar::SimulatedPath) -> String {
    let mut out = String::from("t,x,thinned,innovation\r\n");
    for (t, &x) in path.x.iter().enumerate() {
        if t == 0 {
            let _ = write!(out, "0,{x},,\r\n");
        } else {
            let _ = write!(
                out,
                "{t},{x},{},{}\r\n",
                path.thinned[t - 1],
                path.innovations[t - 1]
            );
        }
    }
    out
}

fn spec_from_json(text: &str) -> Result<InarSpec> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("spec JSON: {e}")))?;
    let field = |name: &str| -> Result<f64> {
        value
            .get(name)
            .and_then(Value::as_f64)
            .ok_or_else(|| Error::Parse(format!("spec JSON is missing numeric field {name:?}")))
    };
    let marginal = value
        .get("marginal")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse("spec JSON is missing string field \"marginal\"".into()))?;
    let shape = value.get("a").and_then(Value::as_f64);
    build_spec(field("m")?, field("r")?, marginal, shape)
}

fn verify_reports_csv(reports: &[VerificationReport], seed: u64) -> String {
    let mut out = String::from(
        "statistic,theoretical,formula,empirical,std_error,z_score,pass,underpowered,\
         rng_algorithm,seed\r\n",
    );
    for r in reports {
        let _ = write!(
            out,
            "{},{},{},{},{},{},{},{},{RNG_ALGORITHM},{seed}\r\n",
            csv_field(&r.statistic),
            csv_num(r.theoretical),
            csv_field(&r.formula),
            csv_num(r.empirical),
            csv_num(r.std_error),
            csv_num(r.z_score),
            r.pass,
            r.underpowered,
        );
    }
    out
}

fn verify_reports_json(reports: &[VerificationReport], seed: u64, t_len: usize) -> Value {
    let rows: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "empirical": r.empirical,
                "formula": r.formula,
                "pass": r.pass,
                "statistic": r.statistic,
                "std_error": r.std_error,
                "theoretical": r.theoretical,
                "underpowered": r.underpowered,
                "z_score": r.z_score,
            })
        })
        .collect();
    json!({
        "reports": rows,
        "rng_algorithm": RNG_ALGORITHM,
        "seed": seed,
        "t_len": t_len,
    })
}

fn run_inar(cli: &Cli, cmd: &InarCommand) -> Result<(String, i32)> {
    match cmd {
        InarCommand::Simulate { stationary, t_len } => {
            let spec = build_spec(
                stationary.m,
                stationary.r,
                &stationary.marginal,
                stationary.a,
            )?;
            let mut rng = ChaCha12Rng::seed_from_u64(cli.seed);
            let path = spec.simulate(*t_len, &mut rng);
            match chosen(cli.format, FormatArg::Csv) {
                FormatArg::Csv => Ok((render_path_csv(&path), 0)),
                FormatArg::Json => Ok((
                    json_pretty(&json!({
                        "innovations": path.innovations,
                        "rng_algorithm": RNG_ALGORITHM,
                        "seed": cli.seed,
                        "thinned": path.thinned,
                        "x": path.x,
                    })),
                    0,
                )),
            }
        }
        InarCommand::Decompose {
            m,
            r,
            mprime,
            rprime,
        } => {
            let p = ThinningParams::new(*m, *r)?;
            let marginal = ThinningParams::new(*mprime, *rprime)?;
            let parts = innovation_decompose(p, marginal)?;
            let second = match parts.second {
                Some(s) => json!({"m": s.m, "r": s.r}),
                None => Value::Null,
            };
            let value = json!({
                "first": {"m": parts.first.m, "r": parts.first.r},
                "formulas": [
                    "first = (r + (r'-m')(m-1), r + (r'-m') m)",
                    "second = (r'(1-m) - r, r'), degenerate when r'(1-m) = r",
                ],
                "second": second,
            });
            Ok((render_value(&value, chosen(cli.format, FormatArg::Json)), 0))
        }
        InarCommand::Check { spec } => {
            let spec = spec_from_json(spec)?;
            let report = spec.stationarity_check(&QuadratureOptions::default())?;
            let integral = match report.integral {
                IntegralOutcome::Finite(v) => json!({"outcome": "finite", "value": v}),
                IntegralOutcome::Divergent => json!({"outcome": "divergent"}),
            };
            let value = json!({
                "formulas": [
                    "limit exists iff int_0^1 (1 - pgf_eps(s)) / (psi(s) - s) ds < infinity",
                    "log_moment = E[max(ln eps, 0)]",
                ],
                "integral": integral,
                "limit_exists": report.limit_exists(),
                "log_moment": report.log_moment,
                "mean_positive_finite": report.mean_positive_finite,
            });
            Ok((render_value(&value, chosen(cli.format, FormatArg::Json)), 0))
        }
        InarCommand::Verify {
            stationary,
            t_len,
            replicates,
            z_threshold,
        } => {
            let spec = build_spec(
                stationary.m,
                stationary.r,
                &stationary.marginal,
                stationary.a,
            )?;
            let format = chosen(cli.format, FormatArg::Csv);
            let config = RunConfig::new(
                cli.seed,
                cli.truncation,
                cli.tol.unwrap_or(0.05),
                match format {
                    FormatArg::Csv => OutputFormat::Csv,
                    FormatArg::Json => OutputFormat::Json,
                },
                *replicates,
            )?;
            let reports = run_mc_verify_with_threshold(&spec, *t_len, &config, *z_threshold)?;
            let all_pass = reports.iter().all(|r| r.pass);
            let rendered = match format {
                FormatArg::Csv => verify_reports_csv(&reports, cli.seed),
                FormatArg::Json => json_pretty(&verify_reports_json(&reports, cli.seed, *t_len)),
            };
            Ok((rendered, if all_pass { 0 } else { EXIT_FAILURE }))
        }
    }
}

// ---------------------------------------------------------------------------
// mono
// ---------------------------------------------------------------------------

fn verdict_json(verdict: &MonotonicityVerdict, check: &str, formulas: &[&str]) -> Value {
    let witness = match verdict.witness {
        Some(n) => json!(n),
        None => Value::Null,
    };
    let violated = match verdict.violated_value {
        Some(v) => json!(v),
        None => Value::Null,
    };
    let q_sequence = match &verdict.q_sequence {
        Some(q) => json!({"probs": q.probs(), "tail_bound": q.tail_bound()}),
        None => Value::Null,
    };
    json!({
        "check": check,
        "formulas": formulas,
        "holds": verdict.holds,
        "inconclusive": verdict.inconclusive,
        "min_slack": verdict.min_slack,
        "q_sequence": q_sequence,
        "violated_value": violated,
        "witness": witness,
    })
}

fn verdict_exit(verdict: &MonotonicityVerdict) -> i32 {
    if verdict.holds {
        0
    } else if verdict.inconclusive {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_FAILURE
    }
}

fn run_mono(cli: &Cli, cmd: &MonoCommand) -> Result<(String, i32)> {
    let format = chosen(cli.format, FormatArg::Json);
    match cmd {
        MonoCommand::Check {
            pmf,
            alpha,
            theta,
            r,
            m,
        } => {
            let text = std::fs::read_to_string(pmf)
                .map_err(|io| Error::Parse(format!("cannot read {}: {io}", pmf.display())))?;
            let law = PmfVector::from_csv_str(&text)?;
            let (verdict, check, formulas): (_, _, &[&str]) = match (alpha, theta, r, m) {
                (Some(a), None, None, None) => (
                    alpha_monotone_check(&law, *a)?,
                    "alpha",
                    &["(n + alpha) p_n >= (n + 1) p_{n+1} for all n"],
                ),
                (Some(a), Some(t), None, None) => (
                    mr_monotone_check(&law, MonotoneParams::new(*a, *t)?)?,
                    "joint",
                    &[
                        "q_n = (2 theta n + 1) p_n - theta ((n+1) p_{n+1} + (n-1) p_{n-1}) >= 0",
                        "q alpha-monotone: (n + alpha) q_n >= (n + 1) q_{n+1}",
                    ],
                ),
                (Some(a), None, Some(rr), None) => (
                    fixed_r_monotone_check(&law, *a, *rr)?,
                    "fixed-r",
                    &["de-thinned law through s -> 1 - (1-s)/(1 + r(1-s)) is alpha-monotone"],
                ),
                (None, Some(t), None, Some(mm)) => (
                    fixed_m_monotone_check(&law, *mm, *t)?,
                    "fixed-m",
                    &["q sequence nonnegative and its (1/m)-scaled de-thinning is a pmf"],
                ),
                _ => {
                    return Err(Error::Parse(
                        "choose one check: --alpha; --alpha --theta; --alpha --r; \
                         or --m --theta"
                            .into(),
                    ))
                }
            };
            let value = verdict_json(&verdict, check, formulas);
            Ok((render_value(&value, format), verdict_exit(&verdict)))
        }
        MonoCommand::Synth { dist, alpha, theta } => {
            let w = parse_distribution(dist)?.pmf(cli.truncation)?;
            let mixed =
                mr_monotone_synthesize(&w, MonotoneParams::new(*alpha, *theta)?, cli.truncation)?;
            let format = chosen(cli.format, FormatArg::Csv);
            Ok((
                render_pmf(
                    &mixed,
                    format,
                    &["mixture of (m, r)-thinned base laws, m ~ power(alpha), r ~ exp(theta)"],
                ),
                0,
            ))
        }
        MonoCommand::ConvolveParams {
            kind,
            first,
            second,
        } => {
            let a = parse_pair(first, "--first")?;
            let b = parse_pair(second, "--second")?;
            let value = match kind {
                KindArg::Joint => {
                    let combined = convolution_params(
                        MonotoneParams::new(a.0, a.1)?,
                        MonotoneParams::new(b.0, b.1)?,
                    );
                    json!({
                        "alpha": combined.alpha,
                        "formulas": [
                            "alpha = alpha1 + alpha2 + 1/theta1 + 1/theta2",
                            "theta = theta1 theta2 / (theta1 + theta2)",
                        ],
                        "theta": combined.theta,
                    })
                }
                KindArg::FixedR => {
                    let (alpha, r) = marginal_convolution_params(MarginalKind::FixedR, a, b)?;
                    json!({
                        "alpha": alpha,
                        "formulas": ["alpha = alpha1 + alpha2, shared r"],
                        "r": r,
                    })
                }
                KindArg::FixedM => {
                    let (theta, m) = marginal_convolution_params(MarginalKind::FixedM, a, b)?;
                    json!({
                        "formulas": ["theta = theta1 theta2 / (theta1 + theta2), shared m"],
                        "m": m,
                        "theta": theta,
                    })
                }
            };
            Ok((render_value(&value, format), 0))
        }
    }
}
