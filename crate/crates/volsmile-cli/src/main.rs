//! `volsmile` — smile diagnostics, transform tables and volatility-swap
//! reports as reproducible CSV.
//!
//! Exit codes: 0 success, 1 usage/IO/numerics errors, 2 when `diagnose`
//! finds an arbitrage violation. Data files carry no timestamps; when
//! writing to `--out PATH`, run metadata goes to the `PATH.meta` sidecar.

use std::fs;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use volsmile::arbitrage;
use volsmile::grid::Grid;
use volsmile::pricing::{self, QuadratureConfig};
use volsmile::report;
use volsmile::smile::{sampled_smile_from_csv, ssvi_surface, Smile, SsviParams, SviParams};

#[derive(Parser)]
#[command(
    name = "volsmile",
    version,
    about = "Smile diagnostics, normalizing-transform tables and volatility-swap reports"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Static no-arbitrage diagnostics for one smile (exit code 2 on failure)
    Diagnose(DiagnoseArgs),
    /// `k,v,h` table for one smile (`z,v_half` with --coords z)
    Figure1(Figure1Args),
    /// Rescaled short-maturity table for an SSVI surface
    Figure2(Figure2Args),
    /// Volatility-swap quadrature vs closed form over theta
    Volswap(VolswapArgs),
    /// Price a single claim from a smile
    Price(PriceArgs),
}

#[derive(Args)]
#[command(group = ArgGroup::new("smile").required(true).multiple(false))]
struct SmileSource {
    /// SVI parameters a,b,rho,m,sigma
    #[arg(long, value_name = "a,b,rho,m,sigma", value_parser = parse_f64_array::<5>,
          allow_hyphen_values = true, group = "smile")]
    svi: Option<[f64; 5]>,
    /// SSVI parameters theta,phi,rho
    #[arg(long, value_name = "theta,phi,rho", value_parser = parse_f64_array::<3>,
          allow_hyphen_values = true, group = "smile")]
    ssvi: Option<[f64; 3]>,
    /// CSV file with header `k,v` (sampled smile; no extrapolation)
    #[arg(long, value_name = "PATH", group = "smile")]
    smile_csv: Option<PathBuf>,
}

#[derive(Args)]
struct OutArg {
    /// Output path; stdout when omitted. A `PATH.meta` sidecar records the run.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DiagnoseArgs {
    #[command(flatten)]
    smile: SmileSource,
    /// Evaluation grid min,max,n
    #[arg(long, value_name = "min,max,n", value_parser = parse_grid,
          allow_hyphen_values = true, default_value = "-3,3,2001")]
    grid: Grid,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum Coords {
    /// log-moneyness table `k,v,h`
    K,
    /// normalized-coordinate table `z,v_half`
    Z,
}

#[derive(Args)]
struct Figure1Args {
    #[command(flatten)]
    smile: SmileSource,
    /// Evaluation grid min,max,n
    #[arg(long, value_name = "min,max,n", value_parser = parse_grid,
          allow_hyphen_values = true, default_value = "-1,1,401")]
    grid: Grid,
    /// Output coordinate
    #[arg(long, value_enum, default_value_t = Coords::K)]
    coords: Coords,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Args)]
struct Figure2Args {
    /// SSVI surface parameters theta_rate,phi,rho (ATM total variance theta_rate * T)
    #[arg(long, value_name = "theta_rate,phi,rho", value_parser = parse_f64_array::<3>,
          allow_hyphen_values = true)]
    surface: [f64; 3],
    /// Grid min,max,n in the rescaled coordinate z
    #[arg(long, value_name = "min,max,n", value_parser = parse_grid,
          allow_hyphen_values = true, default_value = "-2,2,41")]
    grid: Grid,
    /// Maturities of the table rows
    #[arg(
        long,
        value_name = "t1,t2,...",
        value_delimiter = ',',
        allow_hyphen_values = true,
        default_value = "0.25,0.1,0.04,0.01"
    )]
    maturities: Vec<f64>,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Args)]
struct VolswapArgs {
    /// SSVI parameters theta,phi,rho
    #[arg(long, value_name = "theta,phi,rho", value_parser = parse_f64_array::<3>,
          allow_hyphen_values = true)]
    ssvi: [f64; 3],
    /// Theta values replacing the triple's theta, one report row each
    #[arg(
        long,
        value_name = "t1,t2,...",
        value_delimiter = ',',
        allow_hyphen_values = true
    )]
    theta_sweep: Option<Vec<f64>>,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum Payoff {
    /// E[sqrt X] (volatility swap when X is realized variance)
    Sqrt,
    /// E[-2 ln X] (log contract)
    Log,
    /// E[X^p]
    Moment,
    /// European call (X - strike)^+
    Vanilla,
}

#[derive(Args)]
struct PriceArgs {
    #[command(flatten)]
    smile: SmileSource,
    #[arg(long, value_enum)]
    payoff: Payoff,
    /// Moment order for --payoff moment
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Strike in forward units for --payoff vanilla
    #[arg(long, allow_hyphen_values = true)]
    strike: Option<f64>,
    #[command(flatten)]
    out: OutArg,
}

fn parse_f64_array<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != N {
        return Err(format!(
            "expected {N} comma-separated numbers, got {}",
            parts.len()
        ));
    }
    let mut out = [0.0; N];
    for (slot, part) in out.iter_mut().zip(parts) {
        *slot = part
            .trim()
            .parse::<f64>()
            .map_err(|_| format!("bad number '{part}'"))?;
    }
    Ok(out)
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected min,max,n, got '{s}'"));
    }
    let min = parts[0]
        .trim()
        .parse::<f64>()
        .map_err(|_| format!("bad number '{}'", parts[0]))?;
    let max = parts[1]
        .trim()
        .parse::<f64>()
        .map_err(|_| format!("bad number '{}'", parts[1]))?;
    let n = parts[2]
        .trim()
        .parse::<usize>()
        .map_err(|_| format!("bad count '{}'", parts[2]))?;
    Grid::new(min, max, n).map_err(|e| e.to_string())
}

fn build_smile(src: &SmileSource) -> Result<Smile> {
    if let Some([a, b, rho, m, sigma]) = src.svi {
        Ok(Smile::svi(SviParams::new(a, b, rho, m, sigma)?))
    } else if let Some([theta, phi, rho]) = src.ssvi {
        Ok(Smile::ssvi(SsviParams::new(theta, phi, rho)?))
    } else if let Some(path) = &src.smile_csv {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Ok(sampled_smile_from_csv(&text)?)
    } else {
        unreachable!("clap enforces exactly one smile source")
    }
}

fn emit(out: &Option<PathBuf>, data: &str) -> Result<()> {
    let Some(path) = out else {
        print!("{data}");
        return Ok(());
    };
    fs::write(path, data).with_context(|| format!("writing {}", path.display()))?;
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let stamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let meta = format!(
        "tool: volsmile {}\nargs: {}\nwritten_unix: {stamp}\n",
        env!("CARGO_PKG_VERSION"),
        argv.join(" ")
    );
    let meta_path = PathBuf::from(format!("{}.meta", path.display()));
    fs::write(&meta_path, meta).with_context(|| format!("writing {}", meta_path.display()))?;
    Ok(())
}

fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Diagnose(args) => {
            let smile = build_smile(&args.smile)?;
            let rep = arbitrage::diagnose(&smile, &args.grid)?;
            emit(&args.out.out, &report::diagnostics_csv(&rep))?;
            Ok(if rep.passed { 0 } else { 2 })
        }
        Command::Figure1(args) => {
            let smile = build_smile(&args.smile)?;
            let points = args.grid.points();
            let table = match args.coords {
                Coords::K => report::smile_table(&smile, &points)?,
                Coords::Z => report::vhalf_table(&smile, &points)?,
            };
            emit(&args.out.out, &table)?;
            Ok(0)
        }
        Command::Figure2(args) => {
            let [theta_rate, phi, rho] = args.surface;
            let surface = ssvi_surface(theta_rate, phi, rho)?;
            let table = report::shorttime_table(&surface, &args.maturities, &args.grid.points())?;
            emit(&args.out.out, &table)?;
            Ok(0)
        }
        Command::Volswap(args) => {
            let [theta, phi, rho] = args.ssvi;
            let thetas = args.theta_sweep.unwrap_or_else(|| vec![theta]);
            let rows = pricing::theta_sweep(&thetas, phi, rho, &QuadratureConfig::default())?;
            emit(&args.out.out, &report::volswap_table(&rows))?;
            Ok(0)
        }
        Command::Price(args) => {
            let smile = build_smile(&args.smile)?;
            let config = QuadratureConfig::default();
            let (label, value) = match args.payoff {
                Payoff::Sqrt => ("sqrt".to_string(), pricing::sqrt_price(&smile, &config)?),
                Payoff::Log => ("log".to_string(), pricing::log_contract(&smile, &config)?),
                Payoff::Moment => (
                    format!("moment_{}", args.p),
                    pricing::moment_p(&smile, args.p, &config)?,
                ),
                Payoff::Vanilla => {
                    let Some(strike) = args.strike else {
                        bail!("--payoff vanilla requires --strike");
                    };
                    if !strike.is_finite() || strike <= 0.0 {
                        bail!("--strike must be > 0, got {strike}");
                    }
                    let value = pricing::price_claim(|x| (x - strike).max(0.0), &smile, &config)?;
                    (format!("vanilla_{strike}"), value)
                }
            };
            emit(&args.out.out, &report::price_table(&[(label, value)]))?;
            Ok(0)
        }
    }
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let is_help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if is_help { 0 } else { 1 };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            1
        }
    }
}
