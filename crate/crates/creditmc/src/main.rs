//! Command-line entry point: load or synthesize a portfolio, run the
//! selected scenario methods, and write convergence CSVs plus a summary.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use creditmc::engine::Method;
use creditmc::error::Error;
use creditmc::experiments::{
    generate_portfolio, run_experiment, ExperimentConfig, Showcase, SyntheticPortfolioSpec,
};
use creditmc::gauss::CorrelationMatrix;
use creditmc::model::{ForwardCurveSet, MarketData, RecoveryMode, RecoveryTable, TransitionMatrix};
use creditmc::portfolio::Portfolio;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Mc,
    Qmc,
    Hybrid,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProfileArg {
    Homogeneous,
    Inhomogeneous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RecoveryModeArg {
    Fixed,
    Stochastic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ShowcaseArg {
    Sc1,
    Sc2,
    Sc3,
}

/// Credit portfolio risk simulation with Monte Carlo, quasi-Monte Carlo
/// and hybrid scenario generators.
#[derive(Debug, Parser)]
#[command(name = "creditmc", version)]
struct Cli {
    /// Scenario method(s) to run.
    #[arg(long, value_enum, default_value_t = MethodArg::All)]
    method: MethodArg,

    /// Portfolio CSV (id,face_value,coupon_pct,maturity_years,rating,seniority).
    #[arg(long, conflicts_with = "generate")]
    portfolio: Option<PathBuf>,

    /// Generate a synthetic portfolio instead of loading one.
    #[arg(long, value_enum)]
    generate: Option<ProfileArg>,

    /// Synthetic portfolio size (defaults to the showcase size).
    #[arg(long)]
    size: Option<usize>,

    /// Forced high-risk credits for inhomogeneous generation
    /// (default: the hybrid digital dimension).
    #[arg(long)]
    high_risk: Option<usize>,

    /// Scenario count N (defaults to the showcase budget).
    #[arg(long)]
    scenarios: Option<u64>,

    /// Digital coordinates s' of the hybrid method (defaults to the
    /// showcase value, else N/200 clamped to the portfolio size).
    #[arg(long)]
    qmc_dims: Option<usize>,

    /// Seed for scenario generation and portfolio synthesis.
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Forward curve CSV (rating,maturity,rate_pct); bundled default.
    #[arg(long)]
    curves: Option<PathBuf>,

    /// Transition matrix CSV; bundled default.
    #[arg(long)]
    transitions: Option<PathBuf>,

    /// Recovery table CSV (seniority,mean_pct,std_pct); bundled default.
    #[arg(long)]
    recovery: Option<PathBuf>,

    /// Recovery treatment on default.
    #[arg(long, value_enum, default_value_t = RecoveryModeArg::Fixed)]
    recovery_mode: RecoveryModeArg,

    /// Correlation matrix CSV (square, header row of credit ids);
    /// default identity.
    #[arg(long)]
    correlation: Option<PathBuf>,

    /// Scenario count of the reference percentile run.
    #[arg(long, default_value_t = 50_000)]
    reference_scenarios: u64,

    /// Output directory for convergence CSVs, reference and summary files.
    #[arg(long, default_value = "creditmc-out")]
    out: PathBuf,

    /// Run a predefined showcase (sets size, scenarios and qmc dims).
    #[arg(long, value_enum)]
    showcase: Option<ShowcaseArg>,

    /// Checkpoint interval of the convergence series (default N/500).
    #[arg(long)]
    record_stride: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{err}");
                    return ExitCode::SUCCESS;
                }
                _ => 1,
            };
            eprint!("{err}");
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

/// 1 for invalid configuration, 2 for data problems.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Domain(_) | Error::Validation(_) | Error::NotPositiveSemiDefinite { .. } => 1,
        Error::MissingCurvePoint { .. }
        | Error::Capacity { .. }
        | Error::IndexOverflow { .. }
        | Error::DimensionMismatch { .. }
        | Error::Io(_)
        | Error::Csv(_) => 2,
    }
}

fn run(cli: Cli) -> creditmc::Result<()> {
    let curves = match &cli.curves {
        Some(path) => ForwardCurveSet::from_path(path)?,
        None => ForwardCurveSet::bundled().clone(),
    };
    let transitions = match &cli.transitions {
        Some(path) => TransitionMatrix::from_path(path)?,
        None => TransitionMatrix::bundled().clone(),
    };
    let recovery = match &cli.recovery {
        Some(path) => RecoveryTable::from_path(path)?,
        None => RecoveryTable::bundled().clone(),
    };
    let market = MarketData {
        curves: &curves,
        transitions: &transitions,
        recovery: &recovery,
    };

    let showcase = cli.showcase.map(|s| match s {
        ShowcaseArg::Sc1 => Showcase::Sc1,
        ShowcaseArg::Sc2 => Showcase::Sc2,
        ShowcaseArg::Sc3 => Showcase::Sc3,
    });
    let showcase_params = showcase.map(Showcase::params);

    let scenarios = cli
        .scenarios
        .or(showcase_params.map(|p| p.scenarios))
        .ok_or_else(|| Error::Validation("--scenarios is required without --showcase".into()))?;

    // Portfolio: explicit file, explicit generation, or the showcase
    // default of a generated homogeneous portfolio.
    let generate = cli
        .generate
        .or(if cli.portfolio.is_none() && showcase.is_some() {
            Some(ProfileArg::Homogeneous)
        } else {
            None
        });
    let portfolio = match (&cli.portfolio, generate) {
        (Some(path), _) => Portfolio::from_path(path)?,
        (None, Some(profile)) => {
            let size = cli
                .size
                .or(showcase_params.map(|p| p.size))
                .ok_or_else(|| {
                    Error::Validation("--size is required for --generate without --showcase".into())
                })?;
            let qmc_default = cli
                .qmc_dims
                .or(showcase_params.map(|p| p.qmc_dims))
                .unwrap_or(((scenarios / 200) as usize).clamp(1, size));
            let spec = match profile {
                ProfileArg::Homogeneous => SyntheticPortfolioSpec::homogeneous(size, cli.seed),
                ProfileArg::Inhomogeneous => {
                    let d = cli.high_risk.unwrap_or(qmc_default.max(1));
                    SyntheticPortfolioSpec::inhomogeneous(size, d, cli.seed)
                }
            };
            generate_portfolio(&spec, &market)?
        }
        (None, None) => {
            return Err(Error::Validation(
                "either --portfolio FILE or --generate PROFILE is required".into(),
            ))
        }
    };

    if let Some(params) = showcase_params {
        if portfolio.len() != params.size {
            return Err(Error::Validation(format!(
                "showcase expects a portfolio of size {}, got {}",
                params.size,
                portfolio.len()
            )));
        }
    }

    let qmc_dims = cli
        .qmc_dims
        .or(showcase_params.map(|p| p.qmc_dims))
        .unwrap_or(((scenarios / 200) as usize).clamp(1, portfolio.len()));
    if qmc_dims > portfolio.len() {
        return Err(Error::Validation(format!(
            "--qmc-dims {qmc_dims} exceeds the portfolio size {}",
            portfolio.len()
        )));
    }
    if let (Some(ProfileArg::Inhomogeneous), Some(d)) = (generate, cli.high_risk) {
        if d > qmc_dims {
            return Err(Error::Validation(format!(
                "--high-risk {d} exceeds the digital dimension {qmc_dims}"
            )));
        }
    }

    let correlation = match &cli.correlation {
        Some(path) => {
            let m = CorrelationMatrix::from_path(path)?;
            if m.dim() != portfolio.len() {
                return Err(Error::DimensionMismatch {
                    expected: portfolio.len(),
                    got: m.dim(),
                });
            }
            m
        }
        None => CorrelationMatrix::identity(portfolio.len()),
    };

    let mut config = ExperimentConfig::new(scenarios, qmc_dims, cli.seed);
    config.methods = match cli.method {
        MethodArg::Mc => vec![Method::Mc],
        MethodArg::Qmc => vec![Method::Qmc],
        MethodArg::Hybrid => vec![Method::Hybrid],
        MethodArg::All => Method::ALL.to_vec(),
    };
    config.recovery_mode = match cli.recovery_mode {
        RecoveryModeArg::Fixed => RecoveryMode::Fixed,
        RecoveryModeArg::Stochastic => RecoveryMode::Stochastic,
    };
    config.reference_scenarios = cli.reference_scenarios;
    config.record_stride = cli.record_stride;

    fs::create_dir_all(&cli.out)?;
    portfolio.write_to_path(&cli.out.join("portfolio.csv"))?;
    write_run_config(&cli, &portfolio, &config, scenarios, qmc_dims)?;

    let report = run_experiment(&portfolio, &market, &correlation, &config, Some(&cli.out))?;

    println!("exact mean (normed):       {:.6}", report.exact_mean);
    if let Some(std) = report.exact_std {
        println!("exact std (normed):        {std:.6}");
    }
    println!(
        "reference 1st percentile:  {:.6}  ({} MC scenarios, seed {})",
        report.reference_percentile, report.reference_scenarios, report.reference_seed
    );
    println!();
    println!("method   N        mean          std         percentile   |mean err|   |std err|    |pct err|");
    for m in &report.methods {
        let fmt = |v: Option<f64>| v.map(|x| format!("{x:<12.6}")).unwrap_or("-".into());
        println!(
            "{:<8} {:<8} {:<13.6} {:<12.6} {} {:<12.6} {} {}",
            m.method,
            m.scenarios,
            m.final_mean,
            m.final_std,
            fmt(m.final_percentile),
            m.mean_abs_error,
            fmt(m.std_abs_error),
            fmt(m.percentile_abs_error),
        );
    }
    println!();
    println!("outputs written to {}", cli.out.display());
    Ok(())
}

fn write_run_config(
    cli: &Cli,
    portfolio: &Portfolio,
    config: &ExperimentConfig,
    scenarios: u64,
    qmc_dims: usize,
) -> creditmc::Result<()> {
    use std::io::Write;
    let mut f = fs::File::create(cli.out.join("run_config.txt"))?;
    writeln!(f, "portfolio_size {}", portfolio.len())?;
    writeln!(f, "scenarios {scenarios}")?;
    writeln!(f, "qmc_dims {qmc_dims}")?;
    writeln!(f, "seed {}", cli.seed)?;
    writeln!(f, "reference_seed {}", config.reference_seed())?;
    writeln!(f, "reference_scenarios {}", cli.reference_scenarios)?;
    writeln!(f, "recovery_mode {:?}", config.recovery_mode)?;
    writeln!(
        f,
        "methods {}",
        config
            .methods
            .iter()
            .map(|m| m.as_str())
            .collect::<Vec<_>>()
            .join(",")
    )?;
    if let Some(s) = cli.showcase {
        let name = match s {
            ShowcaseArg::Sc1 => Showcase::Sc1.name(),
            ShowcaseArg::Sc2 => Showcase::Sc2.name(),
            ShowcaseArg::Sc3 => Showcase::Sc3.name(),
        };
        writeln!(f, "showcase {name}")?;
    }
    if let Some(p) = &cli.portfolio {
        writeln!(f, "portfolio_file {}", p.display())?;
    }
    if let Some(g) = &cli.generate {
        writeln!(f, "generated_profile {g:?}")?;
    }
    Ok(())
}
