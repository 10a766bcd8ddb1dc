//! Command-line front end over the library pipelines.
//!
//! Five subcommands: `iterate` (fixed-point iterates on grids, written
//! to a directory), `bounds` (closed-form constants and error bounds),
//! `simulate` (Monte-Carlo batches), `distance` (metrics between stored
//! distributions), and `moments` (exact moment tables).
//!
//! Every `iterate` run writes a `certificates.json` beside the grids: a
//! list of [`BoundReport`]s pairing each artifact with the error bound
//! that certifies it, so downstream plots can carry error bars without
//! rerunning the math. The process exits 0 only when every certificate
//! it emitted is valid, or when `--allow-invalid` is given; hard
//! failures (bad arguments, I/O, resource caps) exit 2.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bounds::{self, BoundReport};
use crate::constants::Constants;
use crate::error::{Error, Result};
use crate::grid::{GridFunction, GridKind};
use crate::metrics;
use crate::moments::{apply_s_moments, limit_moments, shared_table, MomentVector};
use crate::montecarlo::{empirical_cdf, SampleBatch};
use crate::start::StartLaw;
use crate::transform::{iterate, IterateConfig, IterationState, Representation};

/// Limiting distribution of the Quicksort cost: fixed-point iterates,
/// certified error bounds, and Monte-Carlo cross-checks.
#[derive(Debug, Parser)]
#[command(name = "qslimit", version, max_term_width = 100)]
pub struct Cli {
    /// Exit 0 even when an emitted certificate is flagged invalid
    #[arg(long, global = true)]
    pub allow_invalid: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply the fixed-point map n times and write the grids
    Iterate(IterateArgs),
    /// Evaluate one closed-form bound, or the published reference set
    Bounds(BoundsArgs),
    /// Draw Monte-Carlo samples of the cost recursions
    Simulate(SimulateArgs),
    /// Distance between two stored distributions
    Distance(DistanceArgs),
    /// Exact moments of the iterates and of the limit law
    Moments(MomentsArgs),
}

#[derive(Debug, Args)]
pub struct IterateArgs {
    /// Start law: delta0 | normal:VAR | uniform:LO:HI | grid:PATH
    #[arg(long, default_value = "delta0")]
    pub start: String,

    /// Number of applications of the map
    #[arg(long)]
    pub n: u32,

    /// Representations to carry: density, cf, mgf (comma-separated)
    #[arg(long, value_delimiter = ',', required = true)]
    pub repr: Vec<String>,

    /// Density grid as LO,HI,POINTS
    #[arg(long, default_value = "-3,12,4096")]
    pub x_grid: String,

    /// Characteristic-function grid as T_MAX,POINTS
    #[arg(long, default_value = "2000,65536")]
    pub t_grid: String,

    /// Moment-generating-function grid as LO,HI,POINTS
    #[arg(long, default_value = "-4,4,161")]
    pub l_grid: String,

    /// Output directory (created if missing)
    #[arg(long, short, default_value = "qslimit-out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// One of: fn1 fn2 fn3 fn1a cp tail kl mgfconv mgflower cflog trunc
    /// d2 rates
    #[arg(long, required_unless_present = "reproduce_paper")]
    pub formula: Option<String>,

    /// Iteration count n
    #[arg(long)]
    pub n: Option<u32>,

    /// Start constant A = sqrt(Var Z0 + sigma^2); "sigma" or a number
    #[arg(long = "A")]
    pub a: Option<String>,

    /// Tail exponent p
    #[arg(long)]
    pub p: Option<f64>,

    /// Tail abscissa y
    #[arg(long)]
    pub y: Option<f64>,

    /// MGF window half-width L
    #[arg(long = "L")]
    pub l: Option<f64>,

    /// MGF argument lambda
    #[arg(long)]
    pub lambda: Option<f64>,

    /// CF argument (cflog) or truncation point t_max (trunc)
    #[arg(long)]
    pub t: Option<f64>,

    /// Growth constant gamma < 2/e for mgflower
    #[arg(long)]
    pub gamma: Option<f64>,

    /// Start-law variance for d2 and mgfconv
    #[arg(long)]
    pub var0: Option<f64>,

    /// Print the four published density sup-error reference values
    /// (rounded start constant A = 0.65)
    #[arg(long)]
    pub reproduce_paper: bool,

    /// Emit the full report as JSON
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Sample kind: xn | yn | zn
    #[arg(long)]
    pub kind: String,

    /// Key count n (xn, yn)
    #[arg(long)]
    pub n: Option<u64>,

    /// Recursion depth (zn)
    #[arg(long)]
    pub depth: Option<u32>,

    /// Start law at the zn leaves
    #[arg(long, default_value = "delta0")]
    pub start: String,

    /// Number of draws
    #[arg(long)]
    pub count: usize,

    /// RNG seed (ChaCha8; one substream per 1024-draw chunk)
    #[arg(long)]
    pub seed: u64,

    /// Write STEM.csv and STEM.meta.json
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Reference CDF (grid JSON) for a Kolmogorov-distance line
    #[arg(long)]
    pub reference: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DistanceArgs {
    /// Metric: d1 | d2 | dp | ks | tv | sup
    #[arg(long)]
    pub metric: String,

    /// First distribution: grid JSON file or an iterate directory
    pub a: PathBuf,

    /// Second distribution
    pub b: PathBuf,

    /// Minimal-L^p exponent (with --metric dp)
    #[arg(long)]
    pub p: Option<f64>,

    /// Quantile count for the coupling integral
    #[arg(long, default_value_t = 1_000_000)]
    pub quantiles: usize,

    /// Representation picked out of an iterate directory
    #[arg(long, default_value = "density")]
    pub repr: String,
}

#[derive(Debug, Args)]
pub struct MomentsArgs {
    /// Highest moment order
    #[arg(long, default_value_t = 10)]
    pub order: usize,

    /// Start law for the iterated column
    #[arg(long, default_value = "delta0")]
    pub start: String,

    /// Iteration count for the iterated column; omit for the limit only
    #[arg(long)]
    pub n: Option<u32>,

    /// Emit JSON instead of a table
    #[arg(long)]
    pub json: bool,
}

/// Parse argv and dispatch; returns the process exit code. 0: success
/// and every certificate valid; 1: some certificate flagged and
/// `--allow-invalid` absent; 2: hard error.
pub fn run() -> i32 {
    let cli = Cli::parse();
    configure_threads();
    let outcome = match &cli.command {
        Command::Iterate(a) => cmd_iterate(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Distance(a) => cmd_distance(a),
        Command::Moments(a) => cmd_moments(a),
    };
    match outcome {
        Ok(true) => 0,
        Ok(false) if cli.allow_invalid => {
            eprintln!("note: some certificates are not valid (accepted by --allow-invalid)");
            0
        }
        Ok(false) => {
            eprintln!("error: a certificate is not valid; pass --allow-invalid to accept it");
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

/// Honor QSLIMIT_THREADS; silently keeps the default pool if it was
/// already initialized or the value is unusable.
fn configure_threads() {
    if let Ok(s) = std::env::var("QSLIMIT_THREADS") {
        if let Ok(k) = s.trim().parse::<usize>() {
            if k >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
            }
        }
    }
}

fn cmd_iterate(args: &IterateArgs) -> Result<bool> {
    let start = StartLaw::parse(&args.start)?;
    let reps = args
        .repr
        .iter()
        .map(|r| r.parse::<Representation>())
        .collect::<Result<Vec<_>>>()?;
    let cfg = IterateConfig {
        density_grid: parse_triple(&args.x_grid, "--x-grid")?,
        cf_grid: parse_pair(&args.t_grid, "--t-grid")?,
        mgf_grid: parse_triple(&args.l_grid, "--l-grid")?,
    };
    let clock = std::time::Instant::now();
    let state = iterate(&start, args.n, &reps, &cfg)?;
    std::fs::create_dir_all(&args.out)?;
    state.save(&args.out)?;
    let certs = certificates(&state);
    std::fs::write(
        args.out.join("certificates.json"),
        serde_json::to_string_pretty(&certs)?,
    )?;

    println!(
        "n = {}, start = {}, elapsed {:.2?}",
        state.n,
        start.descriptor(),
        clock.elapsed()
    );
    if let Some(d) = &state.density {
        println!(
            "density  [{}, {}] x {}  mass {:.6}  mean {:+.3e}  variance {:.6}",
            d.lo,
            d.hi,
            d.len(),
            d.trapezoid(),
            d.mean(),
            d.variance()
        );
    }
    if let Some(c) = &state.cf {
        println!("cf       [0, {}] x {}  budget {:.3e}", c.hi, c.len(), c.tol_mass);
    }
    if let Some(m) = &state.mgf {
        println!(
            "mgf      [{}, {}] x {}  budget {:.3e}",
            m.lo,
            m.hi,
            m.len(),
            m.tol_mass
        );
    }
    let mut all_valid = true;
    for rep in &certs {
        println!(
            "certificate {:<8} {:.6e}  {}",
            rep.name,
            rep.value,
            if rep.valid { "valid" } else { "NOT VALID" }
        );
        all_valid &= rep.valid;
    }
    println!("wrote {}", args.out.display());
    Ok(all_valid)
}

/// The bound reports that certify the artifacts of one run.
fn certificates(state: &IterationState) -> Vec<BoundReport> {
    let c = Constants::get();
    let a = (state.start.variance() + c.sigma2).sqrt();
    let mut certs = Vec::new();
    if state.density.is_some() {
        certs.push(bounds::density_sup_error(state.n, a, 3.5));
        certs.push(bounds::tv_error(state.n, a));
    }
    if let Some(cf) = &state.cf {
        let min_n = bounds::cp_min_n(3.5);
        if let Ok(mut rep) = bounds::cp_report(3.5) {
            if state.n < min_n {
                rep.valid = false;
                rep.reason = Some(format!("tail envelope needs n >= {min_n}, have {}", state.n));
            }
            certs.push(rep);
        }
        if let Ok(trunc) = bounds::cf_truncation_error(cf.hi, 3.5) {
            let mut rep = report(
                "trunc",
                trunc,
                &[("t_max", cf.hi), ("p", 3.5), ("n", f64::from(state.n))],
            );
            if state.n < min_n {
                rep.valid = false;
                rep.reason = Some(format!("tail envelope needs n >= {min_n}, have {}", state.n));
            }
            certs.push(rep);
        }
    }
    if state.mgf.is_some() {
        // domination envelope exp(K λ²) on |λ| <= L with K = 1, L = 0.42
        let (l, k) = (0.42, 1.0);
        let dominated = match &state.start {
            StartLaw::PointMassZero => true,
            StartLaw::Normal { variance } => *variance <= 2.0 * k,
            StartLaw::Uniform { lo, hi } => (hi - lo) * (hi - lo) / 24.0 <= k,
            StartLaw::Grid(_) => false,
        };
        let mut rep = bounds::mgf_conv_error(state.n, 0.5 * l, state.start.variance(), k, l);
        if !dominated {
            rep.valid = false;
            rep.reason =
                Some("start law not verified against the exp(K λ²) envelope on |λ| <= L".into());
        }
        certs.push(rep);
    }
    certs
}

fn cmd_bounds(args: &BoundsArgs) -> Result<bool> {
    if args.reproduce_paper {
        // the published table evaluates the mid-range route at n = 100
        // and the asymptotic route at the rest, all with A rounded to 0.65
        println!("density sup-error reference values at A = 0.65:");
        for (n, route) in [(100u32, "fn2"), (177, "fn3"), (180, "fn3"), (200, "fn3")] {
            let rep = bounds::density_sup_error(n, 0.65, 3.5);
            println!(
                "  n = {n:<3}  sup|f_n - f| <= {:.2e}  ({route})",
                rep.inputs[route]
            );
        }
        return Ok(true);
    }
    let formula = args.formula.as_deref().expect("clap enforces presence");
    let rep = build_report(formula, args)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&rep)?);
    } else {
        let status = if rep.valid { "valid" } else { "NOT VALID" };
        println!("{} = {:.9e}  [{status}]", rep.name, rep.value);
        for (key, v) in &rep.inputs {
            println!("    {key} = {v}");
        }
        if let Some(reason) = &rep.reason {
            println!("    note: {reason}");
        }
    }
    Ok(rep.valid)
}

fn build_report(formula: &str, args: &BoundsArgs) -> Result<BoundReport> {
    let c = Constants::get();
    let need_n =
        || args.n.ok_or_else(|| Error::Parse(format!("--formula {formula} needs --n")));
    let a_value = || -> Result<f64> {
        match args.a.as_deref() {
            None | Some("sigma") => Ok(c.sigma()),
            Some(s) => s
                .parse()
                .map_err(|e| Error::Parse(format!("--A expects a number or \"sigma\": {e}"))),
        }
    };
    match formula {
        "fn1" | "fn2" | "fn3" => {
            let n = need_n()?;
            let p = args.p.unwrap_or(3.5);
            let full = bounds::density_sup_error(n, a_value()?, p);
            if full.name == formula {
                return Ok(full);
            }
            // a specific route was requested; surface that one
            let value = *full.inputs.get(formula).ok_or_else(|| {
                Error::Domain(format!("route {formula} is undefined at p = {p}"))
            })?;
            let ok = match formula {
                "fn1" => p > 1.0 && f64::from(n) > p + 1.0,
                "fn2" => n >= 5,
                _ => n >= 3,
            };
            let mut rep = full;
            rep.name = formula.to_string();
            rep.value = value;
            rep.valid = ok;
            rep.reason =
                (!ok).then(|| format!("hypotheses of {formula} fail at n = {n}, p = {p}"));
            Ok(rep)
        }
        "fn1a" | "tv" => Ok(bounds::tv_error(need_n()?, a_value()?)),
        "cp" => {
            let p = args.p.ok_or_else(|| Error::Parse("--formula cp needs --p".into()))?;
            bounds::cp_report(p)
        }
        "tail" => {
            let y = args.y.ok_or_else(|| Error::Parse("--formula tail needs --y".into()))?;
            Ok(bounds::tail_upper(y))
        }
        "kl" => {
            let l = args.l.ok_or_else(|| Error::Parse("--formula kl needs --L".into()))?;
            let k_pos = bounds::mgf_kl(l, false)?;
            let k_neg = bounds::mgf_kl(l, true)?;
            Ok(report("KL", k_pos, &[("L", l), ("K_negative_side", k_neg)]))
        }
        "mgfconv" => {
            let n = need_n()?;
            let lambda = args
                .lambda
                .ok_or_else(|| Error::Parse("--formula mgfconv needs --lambda".into()))?;
            let l = args.l.unwrap_or(0.42);
            Ok(bounds::mgf_conv_error(
                n,
                lambda,
                args.var0.unwrap_or(0.0),
                bounds::mgf_kl(l, false)?,
                l,
            ))
        }
        "mgflower" => {
            let lambda = args
                .lambda
                .ok_or_else(|| Error::Parse("--formula mgflower needs --lambda".into()))?;
            bounds::mgf_lower(lambda, args.gamma.unwrap_or(0.7))
        }
        "cflog" => {
            let t = args.t.ok_or_else(|| Error::Parse("--formula cflog needs --t".into()))?;
            Ok(bounds::cf_log_bound(t))
        }
        "trunc" => {
            let t = args.t.ok_or_else(|| Error::Parse("--formula trunc needs --t".into()))?;
            let p = args.p.unwrap_or(3.5);
            Ok(report(
                "trunc",
                bounds::cf_truncation_error(t, p)?,
                &[("t_max", t), ("p", p), ("cp", bounds::cp(p)?)],
            ))
        }
        "d2" => {
            let n = need_n()?;
            let var0 = args.var0.unwrap_or(0.0);
            Ok(report(
                "d2",
                bounds::d2_upper(n, var0),
                &[("n", f64::from(n)), ("var0", var0), ("rho", c.rho)],
            ))
        }
        "rates" => {
            let p = args.p.ok_or_else(|| Error::Parse("--formula rates needs --p".into()))?;
            if p < 1.0 || p.fract() != 0.0 {
                return Err(Error::Domain("rates: p must be an integer >= 1".into()));
            }
            let lower = bounds::lower_rates(p as u32)?;
            let mut inputs = vec![
                ("p", p),
                ("dp_lower_rate", lower.dp_rate),
                ("d2_rate_sup", lower.d2_rate_sup),
                ("ks_rate_sup", lower.ks_rate_sup),
            ];
            if let Some(rp) = lower.rp {
                inputs.push(("rp", rp));
            }
            Ok(report("rates", bounds::dp_upper_rate(p, 1e-2), &inputs)
                .with_note("value is the geometric upper rate; lower rates in inputs"))
        }
        other => Err(Error::Parse(format!(
            "unknown formula '{other}' (fn1 fn2 fn3 fn1a cp tail kl mgfconv mgflower \
             cflog trunc d2 rates)"
        ))),
    }
}

fn cmd_simulate(args: &SimulateArgs) -> Result<bool> {
    let need_n = || {
        args.n
            .ok_or_else(|| Error::Parse(format!("--kind {} needs --n", args.kind)))
    };
    let batch = match args.kind.as_str() {
        "xn" => SampleBatch::xn(need_n()?, args.count, args.seed)?,
        "yn" => SampleBatch::yn(need_n()?, args.count, args.seed)?,
        "zn" => {
            let depth = args
                .depth
                .ok_or_else(|| Error::Parse("--kind zn needs --depth".into()))?;
            let start = StartLaw::parse(&args.start)?;
            SampleBatch::zn(depth, &start, args.count, args.seed)?
        }
        other => {
            return Err(Error::Parse(format!(
                "unknown sample kind '{other}' (xn | yn | zn)"
            )))
        }
    };
    println!("kind {}  count {}  seed {}", args.kind, batch.len(), batch.seed);
    println!("mean      {:.9}", batch.mean());
    println!("variance  {:.9}", batch.variance());
    println!(
        "min {:.9}  max {:.9}",
        batch.values[0],
        batch.values[batch.len() - 1]
    );
    if let Some(path) = &args.reference {
        let cdf = GridFunction::read_json(path)?;
        if cdf.kind != GridKind::Cdf {
            return Err(Error::Domain("reference grid must be a cdf".into()));
        }
        let emp = empirical_cdf(&batch, cdf.lo, cdf.hi, cdf.len())?;
        println!("ks vs reference  {:.6}", metrics::ks_distance(&emp, &cdf)?);
    }
    if let Some(stem) = &args.out {
        batch.save(stem)?;
        println!("wrote {0}.csv and {0}.meta.json", stem.display());
    }
    Ok(true)
}

fn cmd_distance(args: &DistanceArgs) -> Result<bool> {
    let fa = load_grid(&args.a, &args.repr)?;
    let fb = load_grid(&args.b, &args.repr)?;
    let value = match args.metric.as_str() {
        "d1" => metrics::wasserstein_from_cdfs(&as_cdf(&fa)?, &as_cdf(&fb)?, 1.0, args.quantiles)?,
        "d2" => metrics::wasserstein_from_cdfs(&as_cdf(&fa)?, &as_cdf(&fb)?, 2.0, args.quantiles)?,
        "dp" => {
            let p = args.p.ok_or_else(|| Error::Parse("--metric dp needs --p".into()))?;
            metrics::wasserstein_from_cdfs(&as_cdf(&fa)?, &as_cdf(&fb)?, p, args.quantiles)?
        }
        "ks" => metrics::ks_distance(&as_cdf(&fa)?, &as_cdf(&fb)?)?,
        "tv" => metrics::tv_distance(&fa, &fb)?,
        "sup" => metrics::sup_distance(&fa, &fb)?,
        other => {
            return Err(Error::Parse(format!(
                "unknown metric '{other}' (d1 | d2 | dp | ks | tv | sup)"
            )))
        }
    };
    let slack = fa.spacing() + fb.spacing() + fa.tol_mass + fb.tol_mass;
    println!("{} = {:.9e}", args.metric, value);
    println!("grid slack <= {slack:.3e} (spacings plus mass budgets)");
    Ok(true)
}

fn cmd_moments(args: &MomentsArgs) -> Result<bool> {
    let table = shared_table();
    let limit = limit_moments(args.order, table)?;
    let iterated = match args.n {
        Some(n) => {
            let start = StartLaw::parse(&args.start)?;
            let mut m = MomentVector::from_start(&start, args.order)?;
            for _ in 0..n {
                m = apply_s_moments(&m, table)?;
            }
            Some(m)
        }
        None => None,
    };
    if args.json {
        #[derive(serde::Serialize)]
        struct Out<'a> {
            order: usize,
            limit: &'a [f64],
            #[serde(skip_serializing_if = "Option::is_none")]
            n: Option<u32>,
            #[serde(skip_serializing_if = "Option::is_none")]
            iterate: Option<&'a [f64]>,
        }
        println!(
            "{}",
            serde_json::to_string_pretty(&Out {
                order: args.order,
                limit: &limit.values,
                n: args.n,
                iterate: iterated.as_ref().map(|m| m.values.as_slice()),
            })?
        );
        return Ok(true);
    }
    match &iterated {
        Some(m) => {
            println!(
                "{:>2}  {:>24}  {:>24}  {:>12}",
                "k",
                format!("E Z_{}^k", args.n.unwrap()),
                "E Y^k",
                "difference"
            );
            for k in 0..=args.order {
                println!(
                    "{k:>2}  {:>24.16e}  {:>24.16e}  {:>12.3e}",
                    m.values[k],
                    limit.values[k],
                    m.values[k] - limit.values[k]
                );
            }
        }
        None => {
            println!("{:>2}  {:>24}", "k", "E Y^k");
            for k in 0..=args.order {
                println!("{k:>2}  {:>24.16e}", limit.values[k]);
            }
        }
    }
    Ok(true)
}

/// A distribution from disk: a grid JSON file, or one representation
/// out of an `iterate` output directory.
fn load_grid(path: &Path, repr: &str) -> Result<GridFunction> {
    if path.is_dir() {
        let state = IterationState::load(path)?;
        let rep: Representation = repr.parse()?;
        return match rep {
            Representation::Density => state.density,
            Representation::Cf => state.cf,
            Representation::Mgf => state.mgf,
        }
        .ok_or_else(|| {
            Error::Domain(format!("{} carries no {repr} representation", path.display()))
        });
    }
    GridFunction::read_json(path)
}

fn as_cdf(g: &GridFunction) -> Result<GridFunction> {
    match g.kind {
        GridKind::Cdf => Ok(g.clone()),
        GridKind::Density => g.cumulative(),
        _ => Err(Error::Domain(
            "this metric needs a density or cdf grid".into(),
        )),
    }
}

fn report(name: &str, value: f64, inputs: &[(&str, f64)]) -> BoundReport {
    BoundReport {
        name: name.to_string(),
        value,
        inputs: inputs.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        valid: true,
        reason: None,
    }
}

trait WithNote {
    fn with_note(self, note: &str) -> Self;
}

impl WithNote for BoundReport {
    fn with_note(mut self, note: &str) -> Self {
        self.reason = Some(note.to_string());
        self
    }
}

fn parse_triple(s: &str, flag: &str) -> Result<(f64, f64, usize)> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!("{flag}: expected LO,HI,POINTS, got '{s}'")));
    }
    let bad = |e: std::num::ParseFloatError| Error::Parse(format!("{flag}: {e}"));
    let badi = |e: std::num::ParseIntError| Error::Parse(format!("{flag}: {e}"));
    Ok((
        parts[0].trim().parse().map_err(bad)?,
        parts[1].trim().parse().map_err(bad)?,
        parts[2].trim().parse().map_err(badi)?,
    ))
}

fn parse_pair(s: &str, flag: &str) -> Result<(f64, usize)> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::Parse(format!("{flag}: expected T_MAX,POINTS, got '{s}'")));
    }
    Ok((
        parts[0]
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("{flag}: {e}")))?,
        parts[1]
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("{flag}: {e}")))?,
    ))
}
