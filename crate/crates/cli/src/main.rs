use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use extdisc_core::engine::{DEFAULT_BOX_BUDGET, DEFAULT_CELL_BUDGET};
use extdisc_core::io::write_points;
use extdisc_core::{
    certificate_lower_bound, curse_constants, duality_check, extreme_l2_exact, extreme_linf_exact,
    extreme_linf_lower_mc, extreme_lp_exact_even_p, extreme_lp_mc, generate, gnewuch_linf_upper, load_points,
    min_points_lower, nw10_l2_lower, Error, GeneratorKind, GeneratorSpec, McConfig, PointSet, WeightSet,
};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "extdisc", version, about = "Extreme L_p discrepancy, duality checks and curse-of-dimensionality bounds")]
struct Cli {
    /// Worker threads (0 = all cores). Affects speed only.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extreme discrepancy of a weighted point set.
    Disc(DiscArgs),
    /// Table of A_p, B_p, C_p over a range of p.
    Constants(ConstantsArgs),
    /// Lower and upper bounds on the number of points, one row per dimension.
    Bounds(BoundsArgs),
    /// Certified lower bound valid for any non-negative weights on the nodes.
    Certify(CertifyArgs),
    /// Monte Carlo check of the discrepancy/integration duality.
    DualityCheck(DualityArgs),
    /// Write a point set to CSV.
    Generate(GenerateArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ExponentArgs {
    /// Exponent p in [1, inf]; `inf` for the sup norm.
    #[arg(long, value_parser = parse_exponent)]
    p: Option<f64>,
    /// Conjugate exponent q, converted to p = q/(q-1).
    #[arg(long, value_parser = parse_exponent)]
    q: Option<f64>,
}

impl ExponentArgs {
    fn resolve(&self) -> f64 {
        match (self.p, self.q) {
            (Some(p), _) => p,
            (None, Some(q)) if q.is_infinite() => 1.0,
            (None, Some(1.0)) => f64::INFINITY,
            (None, Some(q)) => q / (q - 1.0),
            (None, None) => unreachable!("clap enforces one of --p/--q"),
        }
    }
}

#[derive(Args)]
struct InputArgs {
    /// CSV of points, optionally with a `weight` column.
    #[arg(long)]
    input: PathBuf,
    /// Dimension; required when the file has no header and no rows.
    #[arg(long)]
    d: Option<usize>,
    /// Use the file's weights or force equal weights 1/n.
    #[arg(long, value_enum, default_value_t = WeightChoice::File)]
    weights: WeightChoice,
}

impl InputArgs {
    fn load(&self) -> Result<(PointSet, WeightSet), Error> {
        let (ps, ws) = load_points(&self.input, self.d)?;
        let ws = match self.weights {
            WeightChoice::File => ws,
            WeightChoice::Qmc => WeightSet::qmc(ps.len()),
        };
        Ok((ps, ws))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightChoice {
    Qmc,
    File,
}

#[derive(Clone, Copy, ValueEnum)]
enum DiscMethod {
    L2Exact,
    EvenExact,
    Mc,
    LinfExact,
    LinfMc,
}

#[derive(Args)]
struct DiscArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    exponent: ExponentArgs,
    #[arg(long, value_enum)]
    method: DiscMethod,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    /// Seed; required by the sampled methods.
    #[arg(long)]
    seed: Option<u64>,
    /// Maximum number of cells (even-exact) or boxes (linf-exact).
    #[arg(long)]
    budget: Option<f64>,
}

#[derive(Args)]
struct ConstantsArgs {
    #[arg(long, default_value_t = 1.05)]
    p_min: f64,
    #[arg(long, default_value_t = 20.0)]
    p_max: f64,
    #[arg(long, default_value_t = 0.05)]
    step: f64,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    exponent: ExponentArgs,
    #[arg(long)]
    d_max: usize,
    #[arg(long, default_value_t = 0.0)]
    eps: f64,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    d: Option<usize>,
    #[command(flatten)]
    exponent: ExponentArgs,
}

#[derive(Args)]
struct DualityArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    exponent: ExponentArgs,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long)]
    seed: u64,
    /// Cell budget for the exact norm.
    #[arg(long, default_value_t = DEFAULT_CELL_BUDGET)]
    budget: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Random,
    Grid,
    Vdc,
    Lattice,
    Centered,
}

impl From<KindArg> for GeneratorKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Random => GeneratorKind::Random,
            KindArg::Grid => GeneratorKind::Grid,
            KindArg::Vdc => GeneratorKind::VdcHammersley,
            KindArg::Lattice => GeneratorKind::Lattice,
            KindArg::Centered => GeneratorKind::Centered,
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Lattice generating vector, comma separated.
    #[arg(long = "gen", value_delimiter = ',')]
    generating_vector: Option<Vec<u64>>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_exponent(s: &str) -> Result<f64, String> {
    let v = match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" => f64::INFINITY,
        t => t.parse::<f64>().map_err(|e| e.to_string())?,
    };
    if v.is_nan() || v < 1.0 {
        return Err(format!("exponent must lie in [1, inf], got {s}"));
    }
    Ok(v)
}

enum Failure {
    Core(Error),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Core(e.into())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.workers).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    match pool.install(|| run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::InvalidInput(_) | Error::Parse { .. } | Error::Io(_) => 2,
                Error::BudgetExceeded { .. } => 3,
                Error::Internal(_) => 1,
            })
        }
    }
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::Disc(a) => disc(a),
        Command::Constants(a) => constants(a),
        Command::Bounds(a) => bounds(a),
        Command::Certify(a) => certify(a),
        Command::DualityCheck(a) => duality(a),
        Command::Generate(a) => generate_cmd(a),
    }
}

fn print_json(task: &str, input: Option<&Path>, body: impl Serialize) -> CmdResult {
    let mut obj = serde_json::Map::new();
    obj.insert("task".into(), json!(task));
    if let Some(path) = input {
        obj.insert("input".into(), json!(path.display().to_string()));
    }
    match serde_json::to_value(body).map_err(|e| Error::Internal(e.to_string()))? {
        Value::Object(fields) => obj.extend(fields),
        other => {
            obj.insert("result".into(), other);
        }
    }
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, &Value::Object(obj)).map_err(|e| Error::Internal(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn fmt_p(p: f64) -> String {
    if p.is_infinite() {
        "inf".to_string()
    } else {
        format!("{p}")
    }
}

fn require_seed(seed: Option<u64>, what: &str) -> Result<u64, Error> {
    seed.ok_or_else(|| Error::invalid(format!("{what} requires --seed")))
}

fn disc(a: DiscArgs) -> CmdResult {
    let p = a.exponent.resolve();
    let (ps, ws) = a.input.load()?;
    let result = match a.method {
        DiscMethod::L2Exact => {
            if p != 2.0 {
                return Err(Error::invalid("l2-exact requires p = 2").into());
            }
            extreme_l2_exact(&ps, &ws)?
        }
        DiscMethod::EvenExact => {
            if !(p.is_finite() && p >= 2.0 && p.fract() == 0.0 && p % 2.0 == 0.0 && p <= u32::MAX as f64) {
                return Err(Error::invalid(format!("even-exact requires an even integer p, got {}", fmt_p(p))).into());
            }
            extreme_lp_exact_even_p(&ps, &ws, p as u32, a.budget.unwrap_or(DEFAULT_CELL_BUDGET))?
        }
        DiscMethod::Mc => {
            if p.is_infinite() {
                return Err(Error::invalid("mc requires finite p; use linf-mc for p = inf").into());
            }
            extreme_lp_mc(&ps, &ws, p, McConfig::new(a.samples, require_seed(a.seed, "mc")?))?
        }
        DiscMethod::LinfExact => {
            if p.is_finite() {
                return Err(Error::invalid("linf-exact requires p = inf").into());
            }
            extreme_linf_exact(&ps, &ws, a.budget.unwrap_or(DEFAULT_BOX_BUDGET))?
        }
        DiscMethod::LinfMc => {
            if p.is_finite() {
                return Err(Error::invalid("linf-mc requires p = inf").into());
            }
            extreme_linf_lower_mc(&ps, &ws, McConfig::new(a.samples, require_seed(a.seed, "linf-mc")?))?
        }
    };
    print_json("disc", Some(&a.input.input), result)
}

fn constants(a: ConstantsArgs) -> CmdResult {
    if !(a.p_min > 1.0 && a.p_min < a.p_max && a.p_max.is_finite() && a.step > 0.0) {
        return Err(Error::invalid(format!(
            "need 1 < p_min < p_max < inf and step > 0 (got {}, {}, {})",
            a.p_min, a.p_max, a.step
        ))
        .into());
    }
    let mut out = BufWriter::new(io::stdout().lock());
    writeln!(out, "# constants p_min={} p_max={} step={}", a.p_min, a.p_max, a.step)?;
    writeln!(out, "p,a_p,b_p,c_p,y_star,b_method")?;
    let count = ((a.p_max - a.p_min) / a.step + 1e-9).floor() as usize;
    for k in 0..=count {
        let p = a.p_min + k as f64 * a.step;
        let c = curse_constants(p)?;
        writeln!(out, "{},{},{},{},{},{}", p, c.a_p, c.b_p, c.c_p, c.y_star, c.b_method.as_str())?;
    }
    out.flush()?;
    Ok(())
}

fn bounds(a: BoundsArgs) -> CmdResult {
    let p = a.exponent.resolve();
    if a.d_max == 0 {
        return Err(Error::invalid("d-max must be at least 1").into());
    }
    if !(0.0..1.0).contains(&a.eps) {
        return Err(Error::invalid(format!("eps = {} outside [0,1)", a.eps)).into());
    }
    if p.is_finite() && p <= 1.0 {
        return Err(Error::invalid("bounds need 1 < p <= inf").into());
    }
    let mut out = BufWriter::new(io::stdout().lock());
    writeln!(out, "# bounds p={} d_max={} eps={}", fmt_p(p), a.d_max, a.eps)?;
    writeln!(out, "p,d,eps,thm2_lower,nw10_lower,gnewuch_upper")?;
    for d in 1..=a.d_max {
        let thm2 = if p.is_finite() { min_points_lower(p, d, a.eps)?.to_string() } else { String::new() };
        let nw10 = if p == 2.0 { nw10_l2_lower(a.eps, d)?.to_string() } else { String::new() };
        let gnewuch = if p.is_infinite() && d >= 2 && a.eps > 0.0 {
            gnewuch_linf_upper(a.eps, d)?.to_string()
        } else {
            String::new()
        };
        writeln!(out, "{},{},{},{},{},{}", fmt_p(p), d, a.eps, thm2, nw10, gnewuch)?;
    }
    out.flush()?;
    Ok(())
}

fn certify(a: CertifyArgs) -> CmdResult {
    let p = a.exponent.resolve();
    let (ps, _) = load_points(&a.input, a.d)?;
    let cert = certificate_lower_bound(&ps, p)?;
    #[derive(Serialize)]
    struct Out {
        #[serde(with = "extdisc_core::io::exponent")]
        p: f64,
        d: usize,
        n: usize,
        #[serde(flatten)]
        cert: extdisc_core::Certificate,
    }
    print_json("certify", Some(&a.input), Out { p, d: ps.dim(), n: ps.len(), cert })
}

fn duality(a: DualityArgs) -> CmdResult {
    let p = a.exponent.resolve();
    let (ps, ws) = a.input.load()?;
    let report = duality_check(&ps, &ws, p, McConfig::new(a.samples, a.seed), a.budget)?;
    let pass = report.passes(4.0);
    #[derive(Serialize)]
    struct Out {
        d: usize,
        n: usize,
        #[serde(flatten)]
        report: extdisc_core::DualityReport,
        pass: bool,
    }
    print_json("duality-check", Some(&a.input.input), Out { d: ps.dim(), n: ps.len(), report, pass })?;
    if pass {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn generate_cmd(a: GenerateArgs) -> CmdResult {
    let kind = GeneratorKind::from(a.kind);
    let mut spec = GeneratorSpec::new(kind, a.n, a.d);
    if kind == GeneratorKind::Random {
        spec = spec.with_seed(require_seed(a.seed, "random generation")?);
    }
    if let Some(g) = a.generating_vector {
        spec = spec.with_generating_vector(g);
    }
    let ps = generate(&spec)?;
    let ws = WeightSet::qmc(ps.len());
    match a.out {
        Some(path) => {
            let mut f = BufWriter::new(File::create(&path)?);
            write_points(&mut f, &ps, &ws)?;
            f.flush()?;
        }
        None => write_points(io::stdout().lock(), &ps, &ws)?,
    }
    Ok(())
}
