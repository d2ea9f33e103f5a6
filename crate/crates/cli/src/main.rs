mod commands;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use torusgreen::stability::{Axis, SWEEP_POINTS};
use torusgreen::Complex64 as C64;

use commands::StabilityArgs;
use output::{render, Format};

#[derive(Parser)]
#[command(name = "torusgreen", version, about = "Critical points of two-point Green functions on rectangular tori")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct OutputOpts {
    /// Output format
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Shorthand for --format json
    #[arg(long, global = true)]
    json: bool,
    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Override the subcommand's classification tolerance
    #[arg(long, global = true, value_parser = positive)]
    tol: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    Real,
    Imag,
}

#[derive(Subcommand)]
enum Cmd {
    /// Lattice invariants e_k, g2, g3, eta1, eta2 of tau = i b
    Invariants {
        #[arg(long, value_parser = positive, allow_hyphen_values = true)]
        b: f64,
    },
    /// p, p' and zeta at a point z
    Eval {
        #[arg(long, value_parser = positive, allow_hyphen_values = true)]
        b: f64,
        /// z as "re,im"
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        z: C64,
    },
    /// All critical points of G_p
    Census {
        #[arg(long, value_parser = positive, allow_hyphen_values = true)]
        b: f64,
        /// p as "re,im"
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        p: C64,
        #[arg(long, default_value_t = torusgreen::green::DEFAULT_GRID, value_parser = grid_size)]
        grid: usize,
    },
    /// The eight real thresholds and the landmark values
    Thresholds {
        #[arg(long, value_parser = positive, allow_hyphen_values = true)]
        b: f64,
    },
    /// Circles, threshold ticks and landmark ticks of the p(p)-plane picture
    Figure1 {
        #[arg(long, value_parser = positive, allow_hyphen_values = true)]
        b: f64,
    },
    /// Discriminant sweep along the real or imaginary A-axis
    Stability {
        #[arg(long, value_parser = positive, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        p: C64,
        #[arg(long, value_enum, default_value_t = AxisArg::Real)]
        axis: AxisArg,
        #[arg(long, default_value_t = SWEEP_POINTS, value_parser = sample_count)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        tmin: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        tmax: Option<f64>,
    },
    /// Accessory corners A_0..A_3 and their discriminant values
    Corners {
        #[arg(long, value_parser = positive, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        p: C64,
    },
    /// p(p) for monodromy data (r, s)
    Hitchin {
        #[arg(long, value_parser = positive, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
    },
    /// Hitchin values on interior and boundary grids of the (r, s) squares
    Signsurvey {
        #[arg(long, value_parser = positive, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, default_value_t = 9, value_parser = grid_size)]
        n: usize,
    },
    /// Candidates ranked by the smallest nontrivial Hessian determinant
    Degscan {
        #[arg(long, value_parser = positive, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, default_value_t = 16, value_parser = grid_size)]
        grid: usize,
    },
    /// Run the acceptance checks and print a pass/fail table
    Verify {
        /// Run a single criterion
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=12))]
        only: Option<u8>,
    },
}

fn positive(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        Ok(_) => Err(format!("{s} is not a positive finite number")),
        Err(e) => Err(e.to_string()),
    }
}

fn count_at_least(s: &str, min: usize) -> Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(v) if v >= min => Ok(v),
        Ok(_) => Err(format!("must be at least {min}")),
        Err(e) => Err(e.to_string()),
    }
}

fn grid_size(s: &str) -> Result<usize, String> {
    count_at_least(s, 1)
}

fn sample_count(s: &str) -> Result<usize, String> {
    count_at_least(s, 3)
}

fn complex(s: &str) -> Result<C64, String> {
    let (re, im) = s.split_once(',').ok_or_else(|| format!("expected \"re,im\", got {s:?}"))?;
    let re: f64 = re.trim().parse().map_err(|e| format!("real part: {e}"))?;
    let im: f64 = im.trim().parse().map_err(|e| format!("imaginary part: {e}"))?;
    if !re.is_finite() || !im.is_finite() {
        return Err("complex input must be finite".into());
    }
    Ok(C64::new(re, im))
}

enum Failure {
    Lib(torusgreen::Error),
    Io(std::io::Error),
    Checks,
}

fn configure_threads() {
    if let Some(n) = std::env::var("TORUSGREEN_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let format = if cli.out.json { Format::Json } else { cli.out.format };
    let tol = cli.out.tol;
    let lib = Failure::Lib;
    let mut checks_failed = false;
    let text = match cli.cmd {
        Cmd::Invariants { b } => render(&commands::invariants(b).map_err(lib)?, format),
        Cmd::Eval { b, z } => render(&commands::eval(b, z).map_err(lib)?, format),
        Cmd::Census { b, p, grid } => render(&commands::census_cmd(b, p, grid, tol).map_err(lib)?, format),
        Cmd::Thresholds { b } => render(&commands::thresholds_cmd(b, tol).map_err(lib)?, format),
        Cmd::Figure1 { b } => render(&commands::figure1(b, tol).map_err(lib)?, format),
        Cmd::Stability { b, p, axis, n, tmin, tmax } => {
            let axis = match axis {
                AxisArg::Real => Axis::Real,
                AxisArg::Imag => Axis::Imag,
            };
            let args = StabilityArgs { b, p, axis, n, range: (tmin, tmax), tol };
            render(&commands::stability(args).map_err(lib)?, format)
        }
        Cmd::Corners { b, p } => render(&commands::corners(b, p).map_err(lib)?, format),
        Cmd::Hitchin { b, r, s } => render(&commands::hitchin(b, r, s).map_err(lib)?, format),
        Cmd::Signsurvey { b, n } => render(&commands::signsurvey(b, n).map_err(lib)?, format),
        Cmd::Degscan { b, grid } => render(&commands::degscan(b, grid).map_err(lib)?, format),
        Cmd::Verify { only } => {
            let v = commands::verify(only);
            checks_failed = !v.all_passed();
            render(&v, format)
        }
    };
    match &cli.out.out {
        Some(path) => std::fs::write(path, text).map_err(Failure::Io)?,
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(Failure::Io(e)),
                _ => {}
            }
        }
    }
    if checks_failed {
        return Err(Failure::Checks);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    configure_threads();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: cannot write output: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Checks) => {
            eprintln!("error: acceptance checks failed");
            ExitCode::from(3)
        }
    }
}
