//! Command-line driver: builds weight-matrix dumps, runs focused checks or
//! the full verification suite, and tabulates the root-order parity scan.
//!
//! Exit codes: 0 on success, 1 when checks ran but some failed (the report
//! is still written), 2 for unusable arguments or configuration.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ybkit_cli::checks;
use ybkit_cli::config::SuiteConfig;
use ybkit_cli::suite::run_suite;
use ybkit_core::chiral_potts::{build_four_point_vertex, cp_weight_tables, FourPointRoute};
use ybkit_core::dump::{dump_cp_weights, dump_rmatrix, to_json_text};
use ybkit_core::report::fmt_cplx;
use ybkit_core::sample::Sampler;
use ybkit_core::six_vertex::{
    build_six_vertex, resolve_q1, Parity, RootOfUnitySpec, SixVertexGauge, SixVertexParams,
};
use ybkit_core::slmn::{build_slmn_multiplicative, SlmnParams};
use ybkit_core::Cplx;

#[derive(Parser)]
#[command(
    name = "ybkit",
    version,
    about = "Build integrable-lattice weight matrices and verify their defining identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a weight matrix or weight-table dump
    Build(BuildArgs),
    /// Run the vertex-relation residual checks
    YbeCheck(FocusArgs),
    /// Run the gauge-bridge equivalence checks
    GaugeCheck(FocusArgs),
    /// Run the star-triangle ratio-constancy checks
    StarTriangle(FocusArgs),
    /// Run the full verification suite
    Suite(SuiteArgs),
    /// Tabulate the square-root-of-q bookkeeping over a range of root orders
    ScanParity(ScanParityArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    SixVertex,
    Slmn,
    CpWeights,
    R4cp,
}

#[derive(Clone, Copy, ValueEnum)]
enum GaugeArg {
    Sym,
    Bs,
    Bbp,
}

impl From<GaugeArg> for SixVertexGauge {
    fn from(g: GaugeArg) -> Self {
        match g {
            GaugeArg::Sym => SixVertexGauge::Sym,
            GaugeArg::Bs => SixVertexGauge::Bs,
            GaugeArg::Bbp => SixVertexGauge::Bbp,
        }
    }
}

fn parse_cplx(s: &str) -> Result<Cplx, String> {
    Cplx::from_str(s).map_err(|e| format!("bad complex number {s:?}: {e}"))
}

fn parse_root(s: &str) -> Result<RootOfUnitySpec, String> {
    let (n, j) = s
        .split_once(',')
        .ok_or_else(|| format!("expected N,j, got {s:?}"))?;
    let n: u32 = n.trim().parse().map_err(|e| format!("bad N: {e}"))?;
    let j: u32 = j.trim().parse().map_err(|e| format!("bad j: {e}"))?;
    RootOfUnitySpec::new(n, j).map_err(|e| e.to_string())
}

#[derive(Args)]
struct BuildArgs {
    /// Model family to build
    #[arg(value_enum)]
    model: ModelArg,
    /// 2-state gauge
    #[arg(long, value_enum, default_value = "bbp")]
    gauge: GaugeArg,
    /// Root of unity q = exp(2*pi*i*j/N), written as N,j
    #[arg(long, value_name = "N,j", value_parser = parse_root, conflicts_with = "q")]
    q_root: Option<RootOfUnitySpec>,
    /// Generic q, as a complex number like 0.5+0.25i
    #[arg(long, value_parser = parse_cplx)]
    q: Option<Cplx>,
    /// Left rapidity parameter
    #[arg(long, value_parser = parse_cplx)]
    x: Option<Cplx>,
    /// Right rapidity parameter
    #[arg(long, value_parser = parse_cplx)]
    y: Option<Cplx>,
    /// First grading size (slmn)
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Second grading size for slmn, or the cyclic order for cp-weights and
    /// r4cp (repeatable; the first value is used)
    #[arg(long = "n", value_name = "N")]
    n: Vec<u32>,
    /// Anisotropy parameter (slmn)
    #[arg(long, value_parser = parse_cplx)]
    eta: Option<Cplx>,
    /// Seed for the sampled curve points
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Composition route for r4cp: star, star-swapped-control, diamond-wkw,
    /// or diamond-corners
    #[arg(long, default_value = "star")]
    route: String,
    /// Output path; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FocusArgs {
    /// Master seed for the random draws
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Tolerance override applied to every check this command runs
    #[arg(long)]
    tolerance: Option<f64>,
    /// Sample-count override applied to every check this command runs
    #[arg(long)]
    samples: Option<usize>,
    /// Root orders mixed into the q draws (repeatable)
    #[arg(long = "n", value_name = "N")]
    n: Vec<u32>,
    /// Restrict the 2-state vertex checks to one gauge
    #[arg(long, value_enum)]
    gauge: Option<GaugeArg>,
    /// Also write the reports as JSON to this path
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SuiteArgs {
    /// Config file (JSON); built-in defaults when absent
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the config seed
    #[arg(long)]
    seed: Option<u64>,
    /// Report path; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScanParityArgs {
    /// Smallest root order (at least 2)
    n_min: u32,
    /// Largest root order
    n_max: u32,
    /// Output path; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Build(args) => cmd_build(args).map(|()| true),
        Command::YbeCheck(args) => cmd_focus(args, FocusKind::Ybe),
        Command::GaugeCheck(args) => cmd_focus(args, FocusKind::Gauge),
        Command::StarTriangle(args) => cmd_focus(args, FocusKind::StarTriangle),
        Command::Suite(args) => cmd_suite(args),
        Command::ScanParity(args) => cmd_scan_parity(args).map(|()| true),
    }
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn meta_from(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn cmd_build(args: BuildArgs) -> Result<(), String> {
    let text = match args.model {
        ModelArg::SixVertex => {
            let q = match (args.q_root, args.q) {
                (Some(root), _) => root.q(),
                (None, Some(q)) => q,
                (None, None) => return Err("six-vertex needs --q-root N,j or --q".into()),
            };
            let x = args.x.ok_or("six-vertex needs --x")?;
            let y = args.y.ok_or("six-vertex needs --y")?;
            let gauge = SixVertexGauge::from(args.gauge);
            let params = SixVertexParams::new(gauge, q, x, y).map_err(|e| e.to_string())?;
            let r = build_six_vertex(&params).map_err(|e| e.to_string())?;
            let meta = meta_from(&[
                ("degenerate", params.is_degenerate().to_string()),
                ("gauge", gauge.tag().to_string()),
                ("model", "six-vertex".to_string()),
                ("q", fmt_cplx(q)),
                ("support", "multiset".to_string()),
                ("x", fmt_cplx(x)),
                ("y", fmt_cplx(y)),
            ]);
            to_json_text(&dump_rmatrix(&r, meta)).map_err(|e| e.to_string())?
        }
        ModelArg::Slmn => {
            let n = args.n.first().copied().unwrap_or(1) as usize;
            let eta = args.eta.ok_or("slmn needs --eta")?;
            let x = args.x.ok_or("slmn needs --x")?;
            let y = args.y.ok_or("slmn needs --y")?;
            let params = SlmnParams::new(args.m, n, eta).map_err(|e| e.to_string())?;
            let r = build_slmn_multiplicative(&params, x, y).map_err(|e| e.to_string())?;
            let meta = meta_from(&[
                ("degenerate", (x == y).to_string()),
                ("eta", fmt_cplx(eta)),
                ("m", args.m.to_string()),
                ("model", "slmn".to_string()),
                ("n", n.to_string()),
                ("support", "multiset".to_string()),
                ("x", fmt_cplx(x)),
                ("y", fmt_cplx(y)),
            ]);
            to_json_text(&dump_rmatrix(&r, meta)).map_err(|e| e.to_string())?
        }
        ModelArg::CpWeights => {
            let n = args.n.first().copied().unwrap_or(3);
            let mut sampler = Sampler::new(args.seed);
            let modulus = sampler.modulus();
            let p = sampler.curve_point(modulus, n).map_err(|e| e.to_string())?;
            let q = sampler.curve_point(modulus, n).map_err(|e| e.to_string())?;
            let tables = cp_weight_tables(&p, &q).map_err(|e| e.to_string())?;
            let meta = meta_from(&[
                ("model", "cp-weights".to_string()),
                ("n", n.to_string()),
                ("seed", args.seed.to_string()),
            ]);
            to_json_text(&dump_cp_weights(&p, &q, &tables, meta)).map_err(|e| e.to_string())?
        }
        ModelArg::R4cp => {
            let n = args.n.first().copied().unwrap_or(3);
            let route = FourPointRoute::from_str(&args.route).map_err(|e| e.to_string())?;
            let mut sampler = Sampler::new(args.seed);
            let modulus = sampler.modulus();
            let p = sampler.curve_point(modulus, n).map_err(|e| e.to_string())?;
            let p2 = sampler.curve_point(modulus, n).map_err(|e| e.to_string())?;
            let q = sampler.curve_point(modulus, n).map_err(|e| e.to_string())?;
            let q2 = sampler.curve_point(modulus, n).map_err(|e| e.to_string())?;
            let r = build_four_point_vertex(route, (&p, &p2), (&q, &q2))
                .map_err(|e| e.to_string())?;
            let support = match route {
                FourPointRoute::DiamondCorners => "unrestricted",
                _ => "zn-charge",
            };
            let meta = meta_from(&[
                ("model", "r4cp".to_string()),
                ("n", n.to_string()),
                ("route", route.tag().to_string()),
                ("seed", args.seed.to_string()),
                ("support", support.to_string()),
            ]);
            to_json_text(&dump_rmatrix(&r, meta)).map_err(|e| e.to_string())?
        }
    };
    write_output(&args.out, &text)
}

enum FocusKind {
    Ybe,
    Gauge,
    StarTriangle,
}

fn cmd_focus(args: FocusArgs, kind: FocusKind) -> Result<bool, String> {
    let mut cfg = SuiteConfig {
        seed: args.seed,
        ..SuiteConfig::default()
    };
    if !args.n.is_empty() {
        cfg.n_list = args.n.clone();
    }
    if let Some(tolerance) = args.tolerance {
        cfg.tolerances.insert(String::new(), tolerance);
    }
    if let Some(samples) = args.samples {
        cfg.sample_counts.insert(String::new(), samples);
    }
    cfg.validate().map_err(|e| e.to_string())?;

    let reports = match kind {
        FocusKind::Ybe => {
            let mut reports = checks::six_vertex_ybe(&cfg);
            match args.gauge {
                Some(gauge) => {
                    let suffix = SixVertexGauge::from(gauge).tag();
                    reports.retain(|r| r.name.ends_with(suffix));
                }
                None => reports.extend(checks::slmn_ybe(&cfg)),
            }
            reports
        }
        FocusKind::Gauge => checks::gauge_bridges(&cfg),
        FocusKind::StarTriangle => checks::cp_star_triangle(&cfg),
    };

    for report in &reports {
        println!("{}", report.line());
    }
    if args.out.is_some() {
        let text = to_json_text(&reports).map_err(|e| e.to_string())?;
        write_output(&args.out, &text)?;
    }
    Ok(reports.iter().all(|r| r.pass))
}

fn cmd_suite(args: SuiteArgs) -> Result<bool, String> {
    let mut config = match &args.config {
        Some(path) => SuiteConfig::load(path).map_err(|e| e.to_string())?,
        None => SuiteConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let report = run_suite(&config);
    let text = to_json_text(&report).map_err(|e| e.to_string())?;
    match &args.out {
        Some(_) => {
            write_output(&args.out, &text)?;
            for check in &report.checks {
                println!("{}", check.line());
            }
            println!(
                "passed {} failed {}",
                report.summary.passed, report.summary.failed
            );
        }
        None => print!("{text}"),
    }
    Ok(report.all_pass())
}

fn cmd_scan_parity(args: ScanParityArgs) -> Result<(), String> {
    if args.n_min < 2 || args.n_min > args.n_max {
        return Err(format!(
            "need 2 <= N_MIN <= N_MAX, got {} and {}",
            args.n_min, args.n_max
        ));
    }
    let mut text = String::new();
    for n in args.n_min..=args.n_max {
        let spec = RootOfUnitySpec::new(n, 1).map_err(|e| e.to_string())?;
        let res = resolve_q1(&spec);
        let (parity, verdict, target) = match res.parity_verdict {
            Parity::Odd => ("odd", "+1", Cplx::new(1.0, 0.0)),
            Parity::Even => ("even", "-1", Cplx::new(-1.0, 0.0)),
        };
        let defect = (res.q1_pow_n - target).norm();
        let values = res
            .q1_values
            .iter()
            .map(|v| fmt_cplx(*v))
            .collect::<Vec<_>>()
            .join(" ");
        text.push_str(&format!(
            "N={n} parity={parity} q1^N={verdict} defect={defect:.3e} q1=[{values}]\n"
        ));
    }
    write_output(&args.out, &text)
}
