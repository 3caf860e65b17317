use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use phasefluct_cli::config::{ConfigError, Overrides, RawConfig};
use phasefluct_cli::{record, run, taylor, verify};

const EXIT_VERIFY: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

/// Phase fluctuations and antibunching in coherently pumped multi-wave mixing.
#[derive(Parser)]
#[command(name = "phasefluct", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one parameter point and print its CSV row.
    Point(Common),
    /// Evaluate the full (|alpha|^2, theta, t) grid and write a CSV.
    Sweep(Common),
    /// Run the verification suite; exit 1 if any check fails.
    Verify(Common),
    /// Compare the automated order-2 Heisenberg expansion with the literal operators.
    TaylorCheck(Common),
}

#[derive(Args)]
struct Common {
    /// TOML scenario file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// fwm, swm or shg.
    #[arg(long)]
    process: Option<String>,
    /// sg or bp.
    #[arg(long)]
    formalism: Option<String>,
    /// Mean pump photon numbers, comma separated.
    #[arg(long = "alpha-sq", value_delimiter = ',', allow_hyphen_values = true)]
    alpha_sq: Option<Vec<f64>>,
    /// Pump phases in radians, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    theta: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    g: Option<f64>,
    /// Single interaction time.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["t_min", "t_max", "t_count", "t_scale"])]
    t: Option<f64>,
    #[arg(long = "t-min", allow_hyphen_values = true)]
    t_min: Option<f64>,
    #[arg(long = "t-max", allow_hyphen_values = true)]
    t_max: Option<f64>,
    #[arg(long = "t-count", allow_hyphen_values = true)]
    t_count: Option<i64>,
    /// lin or log.
    #[arg(long = "t-scale")]
    t_scale: Option<String>,
    /// Per-mode Fock cutoffs, pump first.
    #[arg(long, value_delimiter = ',')]
    cutoffs: Option<Vec<usize>>,
    /// Exact-evolution accuracy target.
    #[arg(long)]
    tol: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

impl Common {
    fn load(self) -> Result<RawConfig, ConfigError> {
        let raw = match &self.config {
            Some(path) => RawConfig::from_file(path)?,
            None => RawConfig::default(),
        };
        Ok(raw.merge(Overrides {
            process: self.process,
            formalism: self.formalism,
            alpha_sq: self.alpha_sq,
            theta: self.theta,
            g: self.g,
            t: self.t,
            t_min: self.t_min,
            t_max: self.t_max,
            t_count: self.t_count,
            t_scale: self.t_scale,
            cutoffs: self.cutoffs,
            tol: self.tol,
            output: self.output,
        }))
    }
}

enum Failure {
    Config(String),
    Numerical(String),
    Verification,
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

fn io_failure(path: Option<&Path>, e: impl std::fmt::Display) -> Failure {
    let target = path.map_or_else(|| "standard output".to_string(), |p| p.display().to_string());
    Failure::Config(format!("cannot write {target}: {e}"))
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| io_failure(Some(p), e))?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn single<T: Copy>(field: &str, v: &[T]) -> Result<T, ConfigError> {
    match v {
        [x] => Ok(*x),
        _ => Err(ConfigError::invalid(field, format!("point takes exactly one value, got {}", v.len()))),
    }
}

fn cmd_point(args: Common) -> Result<(), Failure> {
    let config = args.load()?.into_sweep_config()?;
    let times = config.t.points();
    let input = run::PointInput {
        kind: config.process,
        alpha_sq: single("alpha_sq", &config.alpha_sq)?,
        theta: single("theta", &config.theta)?,
        g: config.g,
        t: single("t", &times)?,
    };
    let settings = run::PointSettings::from_config(&config);
    let rec = run::run_point(&input, config.formalism, &settings).map_err(|e| Failure::Numerical(e.to_string()))?;
    let path = config.output.as_deref();
    record::write_csv(sink(path)?, &[rec]).map_err(|e| io_failure(path, e))
}

fn cmd_sweep(args: Common) -> Result<(), Failure> {
    let config = args.load()?.into_sweep_config()?;
    let pool = run::thread_pool()?;
    let rows = run::run_sweep(&config, &pool);
    let path = config.output.as_deref();
    record::write_csv(sink(path)?, &rows).map_err(|e| io_failure(path, e))?;
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    if path.is_some() {
        eprintln!("{} rows written, {failed} failed", rows.len());
    }
    if failed > 0 {
        return Err(Failure::Numerical(format!("{failed} of {} points failed; see the error column", rows.len())));
    }
    Ok(())
}

fn cmd_verify(args: Common) -> Result<(), Failure> {
    let config = args.load()?.into_verify_config()?;
    let pool = run::thread_pool()?;
    let report = verify::verify(&config, &pool);
    println!("{report}");
    if let Some(path) = &config.output {
        report.write_csv(sink(Some(path))?).map_err(|e| io_failure(Some(path), e))?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn cmd_taylor_check(args: Common) -> Result<(), Failure> {
    let config = args.load()?.into_verify_config()?;
    let mut all_ok = true;
    let mut out = sink(config.output.as_deref())?;
    let path = config.output.as_deref();
    writeln!(out, "process,cutoffs,interior_states,max_diff,threshold,status").map_err(|e| io_failure(path, e))?;
    for kind in &config.processes {
        let r = taylor::taylor_check(*kind).map_err(|e| Failure::Numerical(format!("{kind}: {e}")))?;
        all_ok &= r.passed();
        let cutoffs: Vec<String> = r.cutoffs.iter().map(usize::to_string).collect();
        writeln!(
            out,
            "{},{},{},{},{},{}",
            kind.name(),
            cutoffs.join(";"),
            r.interior_states,
            record::format_number(r.max_diff),
            record::format_number(r.threshold),
            if r.passed() { "pass" } else { "fail" }
        )
        .map_err(|e| io_failure(path, e))?;
    }
    out.flush().map_err(|e| io_failure(path, e))?;
    if all_ok {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Point(a) => cmd_point(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Verify(a) => cmd_verify(a),
        Command::TaylorCheck(a) => cmd_taylor_check(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("configuration error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(EXIT_NUMERICAL)
        }
        Err(Failure::Verification) => ExitCode::from(EXIT_VERIFY),
    }
}
