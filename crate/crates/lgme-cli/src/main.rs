//! `lgme` — figure sweeps, validation suites, and single-point computations
//! for localizable genuine multimode entanglement of four-mode squeezed
//! vacuum states.
//!
//! Exit codes: 0 success, 2 validation failure, 3 convergence failure,
//! 64 bad usage.

mod io;
mod sweep;
mod validate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lgme_core::fock::PhotonOpKind;
use lgme_core::gaussian::{lgme_gaussian, GridSearch};

use sweep::{Series, SweepConfig, SweepRow};

const EXIT_VALIDATION: u8 = 2;
const EXIT_CONVERGENCE: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "lgme", version, about = "Localizable genuine multimode entanglement of four-mode squeezed vacuum states")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Gaussian vs photon-counting localization over a λ grid
    Fig1(Fig1Args),
    /// Single-mode photon addition/subtraction curves
    Fig2(Fig2Args),
    /// Fixed-total photon splits m_i + m_j = total along mode pairs
    Fig3(Fig3Args),
    /// Equal-count photon operations m_i = m_j along mode pairs
    Fig4(Fig4Args),
    /// Run every invariant suite and print a pass/fail table
    Validate,
    /// Evaluate one configuration and print the results
    Compute(ComputeArgs),
}

#[derive(Args)]
struct Common {
    /// Comma-separated λ = tanh r values in [0, 1)
    #[arg(long, value_delimiter = ',')]
    lambda_grid: Vec<f64>,
    /// Fock truncation tail tolerance
    #[arg(long, default_value_t = 1e-10)]
    epsilon: f64,
    /// Unenumerated outcome probability cap
    #[arg(long, default_value_t = 1e-8)]
    residual_cap: f64,
    /// Measured mode (1-based)
    #[arg(long, default_value_t = 4)]
    measured_mode: usize,
    /// Output CSV path (default: <experiment>.csv)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also emit an SVG line chart
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct Fig1Args {
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Fig2Args {
    #[command(flatten)]
    common: Common,
    /// Modes carrying the photon operation (1-based)
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2, 3, 4])]
    modes: Vec<usize>,
    /// Largest per-mode photon count
    #[arg(long, default_value_t = 4)]
    photons: u32,
}

#[derive(Args)]
struct Fig3Args {
    #[command(flatten)]
    common: Common,
    /// Mode pair i,j (1-based); may repeat. Defaults to (1,3),(1,2),(2,4)
    #[arg(long, value_delimiter = ',')]
    pair: Vec<usize>,
    /// Fixed total m_i + m_j
    #[arg(long, default_value_t = 6)]
    total: u32,
}

#[derive(Args)]
struct Fig4Args {
    #[command(flatten)]
    common: Common,
    /// Mode pair i,j (1-based); may repeat. Defaults to (1,3),(1,2),(2,4)
    #[arg(long, value_delimiter = ',')]
    pair: Vec<usize>,
    /// Largest equal count m = m_i = m_j
    #[arg(long, default_value_t = 3)]
    photons: u32,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    None,
    Add,
    Sub,
}

#[derive(Args)]
struct ComputeArgs {
    /// λ = tanh r
    #[arg(long, default_value_t = 0.5)]
    lambda: f64,
    /// Photon operation applied to the state
    #[arg(long, value_enum, default_value_t = KindArg::None)]
    kind: KindArg,
    /// Per-mode photon counts m1,m2,m3,m4
    #[arg(long, value_delimiter = ',', default_values_t = [0u32, 0, 0, 0])]
    photons: Vec<u32>,
    #[arg(long, default_value_t = 1e-10)]
    epsilon: f64,
    #[arg(long, default_value_t = 1e-8)]
    residual_cap: f64,
    /// Measured mode (1-based)
    #[arg(long, default_value_t = 4)]
    measured_mode: usize,
    /// Write the single result row as CSV
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the parent state, one "n1 n2 n3 n4 amplitude" line per entry
    #[arg(long)]
    dump_state: Option<PathBuf>,
}

struct Usage(String);

fn build_config(exp: &'static str, c: &Common, default_grid: Vec<f64>) -> Result<SweepConfig, Usage> {
    let lambda_grid = if c.lambda_grid.is_empty() { default_grid } else { c.lambda_grid.clone() };
    if !(1..=4).contains(&c.measured_mode) {
        return Err(Usage("--measured-mode must be 1..=4".into()));
    }
    let cfg = SweepConfig {
        experiment: exp,
        lambda_grid,
        measured_mode: c.measured_mode - 1,
        epsilon: c.epsilon,
        residual_cap: c.residual_cap,
    };
    cfg.validate().map_err(Usage)?;
    Ok(cfg)
}

fn default_lambda_grid() -> Vec<f64> {
    (1..=18).map(|i| 0.05 * i as f64).collect()
}

fn parse_pairs(raw: &[usize]) -> Result<Vec<(usize, usize)>, Usage> {
    if raw.is_empty() {
        return Ok(vec![(0, 2), (0, 1), (1, 3)]);
    }
    if !raw.len().is_multiple_of(2) {
        return Err(Usage("--pair expects i,j mode pairs".into()));
    }
    raw.chunks(2)
        .map(|c| {
            if !(1..=4).contains(&c[0]) || !(1..=4).contains(&c[1]) || c[0] == c[1] {
                Err(Usage(format!("invalid mode pair ({},{})", c[0], c[1])))
            } else {
                Ok((c[0] - 1, c[1] - 1))
            }
        })
        .collect()
}

fn finish(
    common: &Common,
    exp: &str,
    rows: Vec<SweepRow>,
    series: Series,
    axis: (&str, &str),
) -> Result<ExitCode, String> {
    let out = common
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{exp}.csv")));
    io::write_csv(&out, &rows).map_err(|e| format!("writing {}: {e}", out.display()))?;
    println!("wrote {} ({} rows)", out.display(), rows.len());
    if let Some(svg) = &common.svg {
        io::write_svg(svg, exp, axis.0, axis.1, &series)
            .map_err(|e| format!("writing {}: {e}", svg.display()))?;
        println!("wrote {}", svg.display());
    }
    let flagged = rows.iter().filter(|r| r.flagged).count();
    if flagged > 0 {
        eprintln!("{flagged} row(s) flagged: residual above cap at maximum truncation");
        return Ok(ExitCode::from(EXIT_CONVERGENCE));
    }
    Ok(ExitCode::SUCCESS)
}

fn run_compute(args: &ComputeArgs) -> Result<ExitCode, String> {
    if args.photons.len() != 4 {
        return Err("--photons expects four comma-separated counts".to_string())
            .map_err(|e| format!("usage: {e}"));
    }
    if !(1..=4).contains(&args.measured_mode) {
        return Err("usage: --measured-mode must be 1..=4".into());
    }
    let m = [args.photons[0], args.photons[1], args.photons[2], args.photons[3]];
    let kind = match args.kind {
        KindArg::None => None,
        KindArg::Add => Some(PhotonOpKind::Add),
        KindArg::Sub => Some(PhotonOpKind::Subtract),
    };
    let cfg = SweepConfig {
        experiment: "compute",
        lambda_grid: vec![args.lambda],
        measured_mode: args.measured_mode - 1,
        epsilon: args.epsilon,
        residual_cap: args.residual_cap,
    };
    cfg.validate().map_err(|e| format!("usage: {e}"))?;

    let parent = sweep::build_parent(args.lambda, kind, m, args.epsilon)
        .map_err(|e| e.to_string())?;
    if let Some(path) = &args.dump_state {
        io::dump_state(path, &parent).map_err(|e| format!("writing {}: {e}", path.display()))?;
        println!("wrote {} ({} entries)", path.display(), parent.len());
    }
    let with_gaussian = kind.is_none();
    let row = sweep::counting_point(&cfg, args.lambda, kind, m, with_gaussian)
        .map_err(|e| e.to_string())?;

    println!(
        "λ = {}  kind = {}  m = {:?}  measured mode = {}",
        args.lambda, sweep::kind_name(kind), m, args.measured_mode
    );
    println!("truncation: n_max = {}, tail ≤ {}", parent.n_max(), io::fmt_f64(parent.tail_bound()));
    println!(
        "photon-counting LGME ∈ [{}, {}]  (residual {})",
        io::fmt_f64(row.lgme_lower),
        io::fmt_f64(row.lgme_upper),
        io::fmt_f64(row.residual)
    );
    if with_gaussian {
        let g = lgme_gaussian(args.lambda.atanh(), &GridSearch::default())
            .map_err(|e| e.to_string())?;
        println!(
            "gaussian LGME: optimized {}  closed form {}",
            io::fmt_f64(g.optimal_value),
            io::fmt_f64(g.closed_form)
        );
    }
    if let Some(out) = &args.out {
        io::write_csv(out, std::slice::from_ref(&row))
            .map_err(|e| format!("writing {}: {e}", out.display()))?;
        println!("wrote {}", out.display());
    }
    if row.flagged {
        eprintln!("residual above cap at maximum truncation");
        return Ok(ExitCode::from(EXIT_CONVERGENCE));
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Fig1(a) => {
            let cfg = build_config("fig1", &a.common, default_lambda_grid())
                .map_err(|u| format!("usage: {}", u.0))?;
            let (rows, series) = sweep::run_fig1(&cfg).map_err(|e| e.to_string())?;
            finish(&a.common, "fig1", rows, series, ("lambda", "LGME"))
        }
        Cmd::Fig2(a) => {
            let cfg = build_config("fig2", &a.common, vec![0.5])
                .map_err(|u| format!("usage: {}", u.0))?;
            let mut modes = Vec::new();
            for &m in &a.modes {
                if !(1..=4).contains(&m) {
                    return Err(format!("usage: invalid mode {m}"));
                }
                modes.push(m - 1);
            }
            let (rows, series) =
                sweep::run_fig2(&cfg, &modes, a.photons).map_err(|e| e.to_string())?;
            finish(&a.common, "fig2", rows, series, ("photons m", "LGME"))
        }
        Cmd::Fig3(a) => {
            let cfg = build_config("fig3", &a.common, vec![0.5])
                .map_err(|u| format!("usage: {}", u.0))?;
            let pairs = parse_pairs(&a.pair).map_err(|u| format!("usage: {}", u.0))?;
            if a.total > 8 {
                eprintln!(
                    "warning: total {} photons — expect long runtimes (truncated basis grows fast)",
                    a.total
                );
            }
            let (rows, series) =
                sweep::run_fig3(&cfg, &pairs, a.total).map_err(|e| e.to_string())?;
            finish(&a.common, "fig3", rows, series, ("photons m_i", "LGME"))
        }
        Cmd::Fig4(a) => {
            let cfg = build_config("fig4", &a.common, vec![0.5])
                .map_err(|u| format!("usage: {}", u.0))?;
            let pairs = parse_pairs(&a.pair).map_err(|u| format!("usage: {}", u.0))?;
            if a.photons > 4 {
                eprintln!(
                    "warning: {} photons per mode — expect long runtimes (truncated basis grows fast)",
                    a.photons
                );
            }
            let (rows, series) =
                sweep::run_fig4(&cfg, &pairs, a.photons).map_err(|e| e.to_string())?;
            finish(&a.common, "fig4", rows, series, ("photons m", "LGME"))
        }
        Cmd::Validate => Ok(if validate::run_validate() {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(EXIT_VALIDATION)
        }),
        Cmd::Compute(a) => run_compute(&a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            if msg.starts_with("usage:") {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::from(EXIT_CONVERGENCE)
            }
        }
    }
}
