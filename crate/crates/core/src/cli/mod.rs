//! Command-line front end.

mod config;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use crate::boundary::BoundaryCondition;
use crate::configuration::Configuration;
use crate::dynamics::{coupling_chain_run, Algorithm, CouplingOptions, TrajectoryWriter};
use crate::error::{Error, Result};
use crate::exact::{self, conditioned_distribution, Event, EventSpec, RcParams, EDGE_CAP};
use crate::experiments::{self, CriticalRow, CrossingRow, WindowRow};
use crate::lattice::{build_region, Direction, LatticeSpec, Region};
use crate::verify::{self, builtin_grid, GgOptions, Suite};

pub use config::{parse_bc, ExperimentConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "rcmodel", version, about = "Random-cluster model experiments, exact checks and samplers")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// JSON experiment configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// square, triangular, hexagonal or custom:<unit-cell.json>.
    #[arg(long, global = true)]
    pub lattice: Option<String>,
    #[arg(long, global = true)]
    pub q: Option<f64>,
    /// Edge weight(s), comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
    /// Inverse temperature(s), comma separated; weighted mode.
    #[arg(long, global = true, value_delimiter = ',')]
    pub beta: Option<Vec<f64>>,
    /// Couplings J_e, repeated cyclically over the edges.
    #[arg(long, global = true, value_delimiter = ',')]
    pub couplings: Option<Vec<f64>>,
    /// free or wired.
    #[arg(long, global = true)]
    pub bc: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub sweeps: Option<u64>,
    #[arg(long = "burn-in", global = true)]
    pub burn_in: Option<u64>,
    #[arg(long, global = true)]
    pub replicas: Option<usize>,
    /// heatbath or es.
    #[arg(long, global = true)]
    pub algo: Option<String>,
    /// Region sizes n, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Crossing probabilities of aspect·n × n and (n+1) × n rectangles.
    CrossingSweep {
        #[arg(long, default_value_t = 2.0)]
        aspect: f64,
    },
    /// Exponential decay rate of the one-arm probability.
    DecayFit {
        /// Padding of the ambient box beyond the largest n.
        #[arg(long, default_value_t = 24)]
        margin: usize,
    },
    /// Critical points of the built-in lattices.
    CriticalPoints {
        /// Values of q, comma separated (default: --q, or 1,2,3,4).
        #[arg(long, value_delimiter = ',')]
        qs: Option<Vec<f64>>,
    },
    /// Width of the window where the long crossing goes from 0.25 to 0.75.
    ThresholdWindow {
        #[arg(long, default_value_t = 2.0)]
        aspect: f64,
        #[arg(long = "p-range", value_delimiter = ',', default_values_t = [0.05, 0.95])]
        p_range: Vec<f64>,
        #[arg(long, default_value_t = 0.002)]
        tolerance: f64,
    },
    /// Run a verification suite on the built-in grid.
    Verify {
        /// fkg, orderings, duality, hamming, sharp-threshold, gg-corollary, es or all.
        suite: String,
    },
    /// Run the pivot-edge coupling chain and audit its invariants.
    Couple {
        #[command(flatten)]
        region: RegionArgs,
        #[arg(long, default_value_t = 0)]
        pivot: usize,
        #[arg(long = "t-max", default_value_t = 1000.0)]
        t_max: f64,
        #[arg(long = "burn-in-time", default_value_t = 10.0)]
        burn_in_time: f64,
        /// Write (π, ω) frames to this binary trajectory file.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Exact queries by enumeration.
    Enumerate {
        #[command(flatten)]
        region: RegionArgs,
        #[command(flatten)]
        event: EventArgs,
    },
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    /// Rectangle a,b,c,d cut from --lattice.
    #[arg(long, value_delimiter = ',', conflicts_with = "graph")]
    pub region: Option<Vec<f64>>,
    /// Edge-list file with lines "i j x_i y_i x_j y_j".
    #[arg(long)]
    pub graph: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EventArgs {
    /// Event tree as JSON, or @file.
    #[arg(long)]
    pub event: Option<String>,
    /// Edge-open event.
    #[arg(long)]
    pub open: Option<usize>,
    /// Crossing event: h or v.
    #[arg(long)]
    pub crossing: Option<String>,
    /// Connection event u,v.
    #[arg(long, value_delimiter = ',')]
    pub connected: Option<Vec<usize>>,
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn merged_config(global: &GlobalArgs) -> Result<ExperimentConfig> {
    let mut cfg = match &global.config {
        Some(path) => ExperimentConfig::from_json_file(path)?,
        None => ExperimentConfig::default(),
    };
    macro_rules! set {
        ($($field:ident),*) => {$(
            if let Some(v) = &global.$field {
                cfg.$field = v.clone().into();
            }
        )*};
    }
    set!(lattice, q, bc, seed, sweeps, burn_in, replicas, sizes);
    if let Some(p) = &global.p {
        cfg.p = Some(p.clone());
        cfg.beta = None;
    }
    if let Some(beta) = &global.beta {
        cfg.beta = Some(beta.clone());
        cfg.p = None;
    }
    if let Some(j) = &global.couplings {
        cfg.couplings = Some(j.clone());
    }
    if let Some(out) = &global.out {
        cfg.out = Some(out.clone());
    }
    if let Some(algo) = &global.algo {
        cfg.algo = Some(algo.parse::<Algorithm>()?);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn output(cfg: &ExperimentConfig) -> Result<Box<dyn Write>> {
    Ok(match &cfg.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn metadata(command: &str, cfg: &ExperimentConfig) -> Result<Vec<(String, String)>> {
    Ok(vec![
        ("rcmodel".into(), env!("CARGO_PKG_VERSION").into()),
        ("command".into(), command.into()),
        ("seed".into(), cfg.seed.to_string()),
        ("config".into(), serde_json::to_string(cfg)?),
    ])
}

fn write_header(out: &mut dyn Write, meta: &[(String, String)]) -> Result<()> {
    for (k, v) in meta {
        writeln!(out, "# {k}: {v}")?;
    }
    Ok(())
}

fn expect_len<T>(flag: &str, values: &[T], n: usize) -> Result<()> {
    if values.len() != n {
        return Err(Error::InvalidParameter(format!("{flag} takes {n} comma-separated values, got {}", values.len())));
    }
    Ok(())
}

fn require_sizes(cfg: &ExperimentConfig, min: usize) -> Result<()> {
    if cfg.sizes.len() < min {
        return Err(Error::InvalidParameter(format!("need at least {min} sizes (--sizes)")));
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<i32> {
    let cfg = merged_config(&cli.global)?;
    match &cli.command {
        Command::CrossingSweep { aspect } => {
            require_sizes(&cfg, 1)?;
            let rows = experiments::crossing_sweep(&cfg.lattice()?, cfg.q, &cfg.weights()?, cfg.bc()?, &cfg.sizes, *aspect, &cfg.sampler())?;
            let mut out = output(&cfg)?;
            write_header(&mut out, &metadata("crossing-sweep", &cfg)?)?;
            writeln!(out, "{}", CrossingRow::HEADER)?;
            for r in rows {
                writeln!(out, "{}", r.to_csv())?;
            }
            out.flush()?;
            Ok(EXIT_OK)
        }
        Command::DecayFit { margin } => {
            require_sizes(&cfg, 4)?;
            let weights = cfg.weights()?;
            if weights.len() != 1 {
                return Err(Error::InvalidParameter("decay-fit takes exactly one p (or beta)".into()));
            }
            let fit = experiments::decay_fit(
                &cfg.lattice()?,
                |region| Ok(weights.params(0, cfg.q, region)?.1),
                cfg.bc()?,
                &cfg.sizes,
                *margin,
                &cfg.sampler(),
            )?;
            let mut out = output(&cfg)?;
            write_header(&mut out, &metadata("decay-fit", &cfg)?)?;
            writeln!(out, "n,estimate,stderr")?;
            for p in &fit.points {
                writeln!(out, "{},{:e},{:e}", p.n, p.estimate, p.stderr)?;
            }
            writeln!(out, "# rate: {}", fit.rate)?;
            writeln!(out, "# rate_stderr: {}", fit.rate_stderr)?;
            writeln!(out, "# intercept: {}", fit.intercept)?;
            writeln!(out, "# r_squared: {}", fit.r_squared)?;
            writeln!(out, "# dropped: {:?}", fit.dropped)?;
            writeln!(out, "# decaying: {}", fit.decaying)?;
            out.flush()?;
            if !fit.decaying {
                eprintln!("fit rejected: no significant decay (rate {:.4} +- {:.4})", fit.rate, fit.rate_stderr);
            }
            Ok(EXIT_OK)
        }
        Command::CriticalPoints { qs } => {
            let qs = qs.clone().unwrap_or_else(|| cli.global.q.map_or(vec![1.0, 2.0, 3.0, 4.0], |q| vec![q]));
            let rows = experiments::critical_points(&qs)?;
            let mut out = output(&cfg)?;
            writeln!(out, "# rcmodel: {}", env!("CARGO_PKG_VERSION"))?;
            writeln!(out, "{}", CriticalRow::HEADER)?;
            for r in &rows {
                writeln!(out, "{}", r.to_csv())?;
            }
            out.flush()?;
            Ok(if rows.iter().all(|r| r.duality_gap < 1e-10) { EXIT_OK } else { EXIT_ASSERTION })
        }
        Command::ThresholdWindow { aspect, p_range, tolerance } => {
            require_sizes(&cfg, 2)?;
            expect_len("--p-range", p_range, 2)?;
            let rows = experiments::threshold_window(
                &cfg.lattice()?,
                cfg.q,
                cfg.bc()?,
                &cfg.sizes,
                *aspect,
                (p_range[0], p_range[1]),
                *tolerance,
                &cfg.sampler(),
            )?;
            let mut out = output(&cfg)?;
            write_header(&mut out, &metadata("threshold-window", &cfg)?)?;
            writeln!(out, "{}", WindowRow::HEADER)?;
            for r in rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{}",
                    cfg.lattice,
                    cfg.q,
                    cfg.bc,
                    r.n,
                    r.p_lo,
                    r.p_hi,
                    r.width,
                    r.center,
                    cfg.replicas,
                    cfg.seed
                )?;
            }
            out.flush()?;
            Ok(EXIT_OK)
        }
        Command::Verify { suite } => {
            let suite: Suite = suite.parse()?;
            let mut gg = GgOptions::defaults(cfg.seed);
            for g in &mut gg {
                if let Some(s) = cli.global.sweeps {
                    g.sweeps = s;
                }
                if let Some(r) = cli.global.replicas {
                    g.replicas = r;
                }
            }
            let reports = verify::run_suite(suite, &builtin_grid(), &gg)?;
            let failed = reports.iter().filter(|r| r.failed()).count();
            let mut meta = metadata("verify", &cfg)?;
            meta.push(("suite".into(), format!("{suite:?}")));
            meta.push(("rows".into(), reports.len().to_string()));
            meta.push(("failed".into(), failed.to_string()));
            meta.push(("note".into(), "one-arm exponent uses finite-volume measures".into()));
            let mut out = output(&cfg)?;
            verify::write_csv(&reports, &meta, &mut out)?;
            out.flush()?;
            eprintln!("{} checks, {failed} failed", reports.len());
            Ok(if failed == 0 { EXIT_OK } else { EXIT_ASSERTION })
        }
        Command::Couple { region, pivot, t_max, burn_in_time, dump } => {
            let (label, region) = load_region(region, &cfg)?;
            let region = Arc::new(region);
            let params = single_params(&cfg, &region)?;
            let bc = cfg.bc()?.build(&region);
            couple(&cfg, &label, region, params, bc, *pivot, *t_max, *burn_in_time, dump.as_deref())
        }
        Command::Enumerate { region, event } => {
            let (label, region) = load_region(region, &cfg)?;
            let params = single_params(&cfg, &region)?;
            let event = parse_event(event)?;
            enumerate(&cfg, &label, &region, &params, &event)
        }
    }
}

fn single_params(cfg: &ExperimentConfig, region: &Region) -> Result<RcParams> {
    let weights = cfg.weights()?;
    if weights.len() != 1 {
        return Err(Error::InvalidParameter("this command takes exactly one p (or beta)".into()));
    }
    Ok(weights.params(0, cfg.q, region)?.1)
}

fn load_region(args: &RegionArgs, cfg: &ExperimentConfig) -> Result<(String, Region)> {
    match (&args.region, &args.graph) {
        (Some(r), None) => {
            expect_len("--region", r, 4)?;
            let lattice: LatticeSpec = cfg.lattice()?;
            let label = format!("{}[{}:{}]x[{}:{}]", lattice.name(), r[0], r[1], r[2], r[3]);
            Ok((label, build_region(&lattice, r[0], r[1], r[2], r[3])?))
        }
        (None, Some(path)) => {
            let label = path.file_stem().map_or("graph".into(), |s| s.to_string_lossy().into_owned());
            Ok((label, read_edge_list(path)?))
        }
        _ => Err(Error::InvalidParameter("give --region a,b,c,d or --graph FILE".into())),
    }
}

/// Reads a region from lines `i j x_i y_i x_j y_j`; every vertex is a
/// boundary vertex.
pub fn read_edge_list(path: &Path) -> Result<Region> {
    let text = std::fs::read_to_string(path)?;
    let mut positions: Vec<Option<[f64; 2]>> = Vec::new();
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || Error::InvalidParameter(format!("{}:{}: expected 'i j x_i y_i x_j y_j'", path.display(), lineno + 1));
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(bad());
        }
        let i: usize = fields[0].parse().map_err(|_| bad())?;
        let j: usize = fields[1].parse().map_err(|_| bad())?;
        let xs: Vec<f64> = fields[2..].iter().map(|f| f.parse()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
        if positions.len() <= i.max(j) {
            positions.resize(i.max(j) + 1, None);
        }
        positions[i] = Some([xs[0], xs[1]]);
        positions[j] = Some([xs[2], xs[3]]);
        edges.push((i, j));
    }
    let vertices = positions
        .into_iter()
        .enumerate()
        .map(|(v, p)| p.ok_or_else(|| Error::InvalidParameter(format!("vertex {v} has no position"))))
        .collect::<Result<Vec<_>>>()?;
    Region::from_graph(vertices, edges)
}

fn parse_event(args: &EventArgs) -> Result<EventSpec> {
    let mut picked = Vec::new();
    if let Some(text) = &args.event {
        let json = match text.strip_prefix('@') {
            Some(path) => std::fs::read_to_string(path)?,
            None => text.clone(),
        };
        let tree: Event = serde_json::from_str(&json)?;
        picked.push(EventSpec::new(tree));
    }
    if let Some(e) = args.open {
        picked.push(EventSpec::edge_open(e));
    }
    if let Some(d) = &args.crossing {
        let dir = match d.as_str() {
            "h" | "horizontal" => Direction::Horizontal,
            "v" | "vertical" => Direction::Vertical,
            other => return Err(Error::InvalidParameter(format!("crossing direction '{other}' (h, v)"))),
        };
        picked.push(EventSpec::crossing(dir));
    }
    if let Some(uv) = &args.connected {
        expect_len("--connected", uv, 2)?;
        picked.push(EventSpec::connected(uv[0], uv[1]));
    }
    match picked.len() {
        1 => Ok(picked.pop().expect("one event")),
        0 => Err(Error::InvalidParameter("give an event: --event, --open, --crossing or --connected".into())),
        _ => Err(Error::InvalidParameter("give exactly one event".into())),
    }
}

pub const ENUMERATE_HEADER: &str = "region,bc,p,q,event,value,derivative,influence_edge,influence";

fn enumerate(cfg: &ExperimentConfig, label: &str, region: &Region, params: &RcParams, event: &EventSpec) -> Result<i32> {
    let bc = cfg.bc()?.build(region);
    let value = exact::probability(event, region, params, &bc)?;
    let derivative = match params.p() {
        Some(p) if p > 0.0 && p < 1.0 => format!("{}", exact::derivative_dp(event, region, params, &bc)?),
        _ => String::new(),
    };
    let (edge, infl) = if event.is_increasing() {
        let (e, m) = exact::influence(event, region, params, &bc)?;
        (e.to_string(), m.to_string())
    } else {
        (String::new(), String::new())
    };
    let p_label = match params.p() {
        Some(p) => p.to_string(),
        None => format!("beta={}", cfg.beta.as_ref().map_or(0.0, |b| b[0])),
    };
    let mut out = output(cfg)?;
    write_header(&mut out, &metadata("enumerate", cfg)?)?;
    writeln!(out, "{ENUMERATE_HEADER}")?;
    writeln!(out, "{label},{},{p_label},{},{},{value},{derivative},{edge},{infl}", cfg.bc, params.q, quote(&event.label()))?;
    out.flush()?;
    Ok(EXIT_OK)
}

fn quote(s: &str) -> String {
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[allow(clippy::too_many_arguments)]
fn couple(
    cfg: &ExperimentConfig,
    label: &str,
    region: Arc<Region>,
    params: RcParams,
    bc: BoundaryCondition,
    pivot: usize,
    t_max: f64,
    burn_in: f64,
    dump: Option<&Path>,
) -> Result<i32> {
    let options = CouplingOptions { t_max, burn_in, audit: true };
    let summary = coupling_chain_run(region.clone(), params.clone(), bc.clone(), pivot, &options, cfg.seed)?;
    if let Some(path) = dump {
        write_coupling_dump(path, region.clone(), params.clone(), bc.clone(), pivot, t_max, cfg.seed)?;
    }
    let m = region.num_edges();
    let mut out = output(cfg)?;
    write_header(&mut out, &metadata("couple", cfg)?)?;
    writeln!(out, "# region: {label}")?;
    writeln!(out, "quantity,value")?;
    let v = &summary.violations;
    let rows: Vec<(String, String)> = vec![
        ("events".into(), summary.events.to_string()),
        ("final_time".into(), summary.final_time.to_string()),
        ("open_events".into(), summary.kinds[0].to_string()),
        ("close_both_events".into(), summary.kinds[1].to_string()),
        ("close_pi_events".into(), summary.kinds[2].to_string()),
        ("violations_monotone".into(), v.monotone.to_string()),
        ("violations_pivot".into(), v.pivot.to_string()),
        ("violations_off_cluster".into(), v.off_cluster.to_string()),
    ];
    for (k, val) in rows {
        writeln!(out, "{k},{val}")?;
    }
    if let (Some(occ_pi), Some(occ_omega)) = (&summary.occupation_pi, &summary.occupation_omega) {
        for (name, occ) in [("pi", occ_pi), ("omega", occ_omega)] {
            for e in 0..m {
                let marginal: f64 = occ.iter().enumerate().filter(|(mask, _)| mask >> e & 1 == 1).map(|(_, x)| x).sum();
                writeln!(out, "{name}_marginal_{e},{marginal}")?;
            }
        }
        if m <= EDGE_CAP.min(20) {
            let closed = conditioned_distribution(&region, &params, &bc, pivot, false)?;
            let open = conditioned_distribution(&region, &params, &bc, pivot, true)?;
            writeln!(out, "tv_pi,{}", total_variation(occ_pi, &closed))?;
            writeln!(out, "tv_omega,{}", total_variation(occ_omega, &open))?;
        }
    }
    out.flush()?;
    let clean = v.monotone == 0 && v.pivot == 0 && v.off_cluster == 0;
    if !clean {
        eprintln!("invariant violations: monotone {}, pivot {}, off-cluster {}", v.monotone, v.pivot, v.off_cluster);
    }
    Ok(if clean { EXIT_OK } else { EXIT_ASSERTION })
}

fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>() / 2.0
}

fn write_coupling_dump(
    path: &Path,
    region: Arc<Region>,
    params: RcParams,
    bc: BoundaryCondition,
    pivot: usize,
    t_max: f64,
    seed: u64,
) -> Result<()> {
    let m = region.num_edges();
    let mut chain = crate::dynamics::CouplingChain::new(region, params, bc, pivot, seed)?;
    let mut writer = TrajectoryWriter::new(BufWriter::new(File::create(path)?), 2 * m)?;
    let frame = |pi: &Configuration, omega: &Configuration| {
        Configuration::from_bools(&(0..m).map(|e| pi.get(e)).chain((0..m).map(|e| omega.get(e))).collect::<Vec<_>>())
    };
    writer.push(&frame(&chain.state().pi, &chain.state().omega))?;
    while let Some(t) = chain.step()? {
        if t.time > t_max {
            break;
        }
        writer.push(&frame(&chain.state().pi, &chain.state().omega))?;
    }
    writer.finish()?;
    Ok(())
}
