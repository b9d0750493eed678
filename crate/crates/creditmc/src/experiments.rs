//! Showcase experiments: synthetic test portfolios, multi-method runs over
//! one portfolio, and the convergence/summary file outputs.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use crate::analytics::{portfolio_moments, risk_profile, VarianceFormula};
use crate::engine::{
    percentile_estimate, run_simulation, Method, SimulationConfig, DEFAULT_REFERENCE_SCENARIOS,
};
use crate::error::{Error, Result};
use crate::gauss::CorrelationMatrix;
use crate::model::{MarketData, Rating, RecoveryMode, Seniority};
use crate::portfolio::Portfolio;
use crate::seq::{unit_from_bits, PseudoRandomStream};

/// The three standard experiment sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Showcase {
    Sc1,
    Sc2,
    Sc3,
}

/// Portfolio size, scenario budget and hybrid digital dimension of a
/// showcase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShowcaseParams {
    pub size: usize,
    pub scenarios: u64,
    pub qmc_dims: usize,
}

impl Showcase {
    pub const ALL: [Showcase; 3] = [Showcase::Sc1, Showcase::Sc2, Showcase::Sc3];

    pub fn params(self) -> ShowcaseParams {
        match self {
            Showcase::Sc1 => ShowcaseParams {
                size: 100,
                scenarios: 1_000,
                qmc_dims: 5,
            },
            Showcase::Sc2 => ShowcaseParams {
                size: 500,
                scenarios: 5_000,
                qmc_dims: 25,
            },
            Showcase::Sc3 => ShowcaseParams {
                size: 1_000,
                scenarios: 10_000,
                qmc_dims: 50,
            },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Showcase::Sc1 => "sc1",
            Showcase::Sc2 => "sc2",
            Showcase::Sc3 => "sc3",
        }
    }
}

/// Synthetic portfolio shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PortfolioProfile {
    /// Realistically mixed risk profiles.
    Homogeneous,
    /// Same mix plus a few dominating high-risk credits.
    Inhomogeneous,
}

/// Recipe for a reproducible synthetic portfolio.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticPortfolioSpec {
    pub size: usize,
    pub profile: PortfolioProfile,
    /// Number of forced high-risk credits (inhomogeneous only).
    pub high_risk_count: usize,
    pub seed: u64,
    pub maturity_range: (u32, u32),
    pub coupon_range: (f64, f64),
    pub face_range: (f64, f64),
}

impl SyntheticPortfolioSpec {
    pub fn homogeneous(size: usize, seed: u64) -> Self {
        Self {
            size,
            profile: PortfolioProfile::Homogeneous,
            high_risk_count: 0,
            seed,
            maturity_range: (1, 10),
            coupon_range: (3.0, 8.0),
            face_range: (500.0, 1500.0),
        }
    }

    pub fn inhomogeneous(size: usize, high_risk_count: usize, seed: u64) -> Self {
        Self {
            high_risk_count,
            profile: PortfolioProfile::Inhomogeneous,
            ..Self::homogeneous(size, seed)
        }
    }
}

/// Rating mix of the synthetic portfolios: mostly investment grade with a
/// thin speculative tail.
const RATING_MIX: [(Rating, f64); 7] = [
    (Rating::AAA, 0.10),
    (Rating::AA, 0.20),
    (Rating::A, 0.25),
    (Rating::BBB, 0.25),
    (Rating::BB, 0.12),
    (Rating::B, 0.06),
    (Rating::CCC, 0.02),
];

const SENIORITY_MIX: [(Seniority, f64); 5] = [
    (Seniority::SeniorSecured, 0.25),
    (Seniority::SeniorUnsecured, 0.35),
    (Seniority::SeniorSubordinated, 0.20),
    (Seniority::Subordinated, 0.12),
    (Seniority::JuniorSubordinated, 0.08),
];

/// ChaCha stream id reserved for portfolio generation, disjoint from the
/// scenario stream (id 0) of the same seed.
const GENERATOR_STREAM: u64 = 1;

/// High-risk face values sit between these multiples of the median face.
const HIGH_RISK_FACE_MULTIPLIER: (f64, f64) = (5.0, 10.0);

/// Safety margin by which the weakest forced credit must out-risk the
/// strongest regular credit.
const SEPARATION_MARGIN: f64 = 1.05;

struct Draws {
    stream: PseudoRandomStream,
}

impl Draws {
    fn new(seed: u64) -> Self {
        Self {
            stream: PseudoRandomStream::with_stream(seed, 1, GENERATOR_STREAM)
                .expect("dimension 1 is valid"),
        }
    }

    fn uniform(&mut self) -> f64 {
        unit_from_bits(self.stream.next_bits())
    }

    fn uniform_int(&mut self, lo: u64, hi: u64) -> u64 {
        debug_assert!(lo <= hi);
        let span = hi - lo + 1;
        lo + ((self.uniform() * span as f64) as u64).min(span - 1)
    }

    fn pick<T: Copy>(&mut self, weighted: &[(T, f64)]) -> T {
        let u = self.uniform();
        let mut acc = 0.0;
        for &(item, w) in weighted {
            acc += w;
            if u < acc {
                return item;
            }
        }
        weighted.last().expect("non-empty mix").0
    }
}

/// Deterministically generates a synthetic portfolio. Inhomogeneous
/// portfolios append `high_risk_count` deep-speculative, junior
/// subordinated credits with face values 5-10x the median, sized so their
/// risk profiles strictly dominate every regular credit.
pub fn generate_portfolio(spec: &SyntheticPortfolioSpec, market: &MarketData) -> Result<Portfolio> {
    if spec.size == 0 {
        return Err(Error::Validation("portfolio size must be >= 1".into()));
    }
    let high_risk = match spec.profile {
        PortfolioProfile::Homogeneous => 0,
        PortfolioProfile::Inhomogeneous => spec.high_risk_count,
    };
    if high_risk > spec.size {
        return Err(Error::Validation(format!(
            "{high_risk} high-risk credits do not fit a portfolio of size {}",
            spec.size
        )));
    }
    let (mat_lo, mat_hi) = spec.maturity_range;
    if mat_lo < 1 || mat_lo > mat_hi {
        return Err(Error::Validation(format!(
            "bad maturity range {mat_lo}..{mat_hi}"
        )));
    }

    let mut draws = Draws::new(spec.seed);
    let mut credits = Vec::with_capacity(spec.size);
    for i in 0..spec.size - high_risk {
        let rating = draws.pick(&RATING_MIX);
        let seniority = draws.pick(&SENIORITY_MIX);
        let maturity = draws.uniform_int(mat_lo as u64, mat_hi as u64) as u32;
        let coupon = round2(
            spec.coupon_range.0 + draws.uniform() * (spec.coupon_range.1 - spec.coupon_range.0),
        );
        let face = draws.uniform_int(spec.face_range.0 as u64, spec.face_range.1 as u64) as f64;
        credits.push(crate::model::Credit {
            id: format!("c{:05}", i + 1),
            face_value: face,
            coupon_pct: coupon,
            maturity_years: maturity,
            rating,
            seniority,
        });
    }

    if high_risk > 0 {
        if credits.is_empty() {
            return Err(Error::Validation(
                "an inhomogeneous portfolio needs at least one regular credit".into(),
            ));
        }
        let mut faces: Vec<f64> = credits.iter().map(|c| c.face_value).collect();
        faces.sort_by(f64::total_cmp);
        let median_face = faces[faces.len() / 2];
        let max_regular_profile = credits
            .iter()
            .map(|c| risk_profile(c, market))
            .fold(0.0, f64::max);
        let loss_fraction = 1.0 - market.recovery.mean_pct(Seniority::JuniorSubordinated) / 100.0;
        let min_face_for = |rating: Rating| {
            SEPARATION_MARGIN * max_regular_profile
                / (loss_fraction * market.transitions.default_probability(rating))
        };
        let face_lo = HIGH_RISK_FACE_MULTIPLIER.0 * median_face;
        let face_hi = HIGH_RISK_FACE_MULTIPLIER.1 * median_face;
        if min_face_for(Rating::CCC) > face_lo {
            return Err(Error::Validation(
                "face-value ranges cannot give the forced credits a dominating risk profile".into(),
            ));
        }
        let b_eligible = min_face_for(Rating::B) <= face_lo;
        for k in 0..high_risk {
            let rating = if b_eligible && draws.uniform() < 0.5 {
                Rating::B
            } else {
                Rating::CCC
            };
            let face = draws.uniform_int(face_lo as u64, face_hi as u64) as f64;
            let maturity = draws.uniform_int(mat_lo as u64, mat_hi as u64) as u32;
            let coupon = round2(
                spec.coupon_range.0 + draws.uniform() * (spec.coupon_range.1 - spec.coupon_range.0),
            );
            credits.push(crate::model::Credit {
                id: format!("hr{:03}", k + 1),
                face_value: face,
                coupon_pct: coupon,
                maturity_years: maturity,
                rating,
                seniority: Seniority::JuniorSubordinated,
            });
        }
        let min_forced = credits[spec.size - high_risk..]
            .iter()
            .map(|c| risk_profile(c, market))
            .fold(f64::INFINITY, f64::min);
        if min_forced <= max_regular_profile {
            return Err(Error::Validation(format!(
                "forced risk profiles ({min_forced}) fail to dominate the regular credits \
                 ({max_regular_profile})"
            )));
        }
    }

    Portfolio::new(credits)
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

/// One multi-method experiment over a fixed portfolio.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub methods: Vec<Method>,
    pub scenarios: u64,
    pub qmc_dims: usize,
    pub seed: u64,
    pub recovery_mode: RecoveryMode,
    pub reference_scenarios: u64,
    pub record_stride: Option<u64>,
}

impl ExperimentConfig {
    pub fn new(scenarios: u64, qmc_dims: usize, seed: u64) -> Self {
        Self {
            methods: Method::ALL.to_vec(),
            scenarios,
            qmc_dims,
            seed,
            recovery_mode: RecoveryMode::Fixed,
            reference_scenarios: DEFAULT_REFERENCE_SCENARIOS,
            record_stride: None,
        }
    }

    pub fn for_showcase(showcase: Showcase, seed: u64) -> Self {
        let params = showcase.params();
        Self::new(params.scenarios, params.qmc_dims, seed)
    }

    /// Seed of the dedicated reference run, derived from the run seed.
    pub fn reference_seed(&self) -> u64 {
        self.seed.wrapping_add(0x9e37_79b9)
    }
}

/// Final state and absolute errors of one method run.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodSummary {
    pub method: Method,
    pub scenarios: u64,
    pub final_mean: f64,
    pub final_std: f64,
    pub final_percentile: Option<f64>,
    pub mean_abs_error: f64,
    pub std_abs_error: Option<f64>,
    pub percentile_abs_error: Option<f64>,
}

/// Exact references plus the per-method summaries of one experiment.
#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub exact_mean: f64,
    pub exact_std: Option<f64>,
    pub reference_percentile: f64,
    pub reference_scenarios: u64,
    pub reference_seed: u64,
    pub methods: Vec<MethodSummary>,
}

/// Runs every configured method over the portfolio, and writes
/// convergence CSVs, the reference file and the summary CSV into
/// `out_dir` when given.
pub fn run_experiment(
    portfolio: &Portfolio,
    market: &MarketData,
    correlation: &CorrelationMatrix,
    config: &ExperimentConfig,
    out_dir: Option<&Path>,
) -> Result<ExperimentReport> {
    if config.methods.is_empty() {
        return Err(Error::Validation("no methods selected".into()));
    }
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir)?;
    }

    // The expected value is correlation-free; the closed-form standard
    // deviation exists only for uncorrelated portfolios.
    let identity = CorrelationMatrix::identity(portfolio.len());
    let moments = portfolio_moments(
        portfolio,
        market,
        &identity,
        config.recovery_mode,
        VarianceFormula::ExactLaw,
    )?;
    let exact_mean = moments.expected_value;
    let exact_std = correlation.is_identity().then_some(moments.std_dev);

    let reference_seed = config.reference_seed();
    let reference_run = run_simulation(
        portfolio,
        market,
        correlation,
        &SimulationConfig {
            method: Method::Mc,
            scenarios: config.reference_scenarios,
            qmc_dims: 0,
            seed: reference_seed,
            recovery_mode: config.recovery_mode,
            bit_precision: 52,
            record_stride: Some(config.reference_scenarios),
        },
    )?;
    let reference_percentile = percentile_estimate(&reference_run.values)?;

    let mut methods = Vec::with_capacity(config.methods.len());
    for &method in &config.methods {
        let run_config = SimulationConfig {
            method,
            scenarios: config.scenarios,
            qmc_dims: config.qmc_dims,
            seed: config.seed,
            recovery_mode: config.recovery_mode,
            bit_precision: 52,
            record_stride: config.record_stride,
        };
        let run = run_simulation(portfolio, market, correlation, &run_config)?;
        if let Some(dir) = out_dir {
            let file = fs::File::create(dir.join(format!("convergence_{method}.csv")))?;
            run.series.write_csv(file)?;
        }
        let last = run.series.final_checkpoint();
        methods.push(MethodSummary {
            method,
            scenarios: config.scenarios,
            final_mean: last.mean,
            final_std: last.std_dev,
            final_percentile: last.percentile,
            mean_abs_error: (last.mean - exact_mean).abs(),
            std_abs_error: exact_std.map(|s| (last.std_dev - s).abs()),
            percentile_abs_error: last.percentile.map(|p| (p - reference_percentile).abs()),
        });
    }

    let report = ExperimentReport {
        exact_mean,
        exact_std,
        reference_percentile,
        reference_scenarios: config.reference_scenarios,
        reference_seed,
        methods,
    };
    if let Some(dir) = out_dir {
        write_reference_file(&report, fs::File::create(dir.join("reference.txt"))?)?;
        write_summary_csv(&report, fs::File::create(dir.join("summary.csv"))?)?;
    }
    Ok(report)
}

fn write_reference_file<W: Write>(report: &ExperimentReport, mut w: W) -> Result<()> {
    writeln!(w, "exact_mean {:.12}", report.exact_mean)?;
    if let Some(std) = report.exact_std {
        writeln!(w, "exact_std {std:.12}")?;
    }
    writeln!(
        w,
        "reference_percentile {:.12}",
        report.reference_percentile
    )?;
    writeln!(w, "reference_scenarios {}", report.reference_scenarios)?;
    writeln!(w, "reference_seed {}", report.reference_seed)?;
    Ok(())
}

/// Summary CSV: one row per method with final statistics and absolute
/// errors against the exact/reference values.
pub fn write_summary_csv<W: Write>(report: &ExperimentReport, mut w: W) -> Result<()> {
    writeln!(
        w,
        "method,scenarios,final_mean,final_std,final_percentile,\
         mean_abs_error,std_abs_error,percentile_abs_error"
    )?;
    for m in &report.methods {
        let fmt_opt = |v: Option<f64>| v.map(|x| format!("{x:.12}")).unwrap_or_default();
        writeln!(
            w,
            "{},{},{:.12},{:.12},{},{:.12},{},{}",
            m.method,
            m.scenarios,
            m.final_mean,
            m.final_std,
            fmt_opt(m.final_percentile),
            m.mean_abs_error,
            fmt_opt(m.std_abs_error),
            fmt_opt(m.percentile_abs_error),
        )?;
    }
    Ok(())
}

/// Parses the CSV written by [`write_summary_csv`].
pub fn read_summary_csv<R: Read>(reader: R) -> Result<Vec<MethodSummary>> {
    let mut csv = csv::Reader::from_reader(reader);
    let mut out = Vec::new();
    for record in csv.records() {
        let record = record?;
        let method = match &record[0] {
            "mc" => Method::Mc,
            "qmc" => Method::Qmc,
            "hybrid" => Method::Hybrid,
            other => {
                return Err(Error::Validation(format!("unknown method '{other}'")));
            }
        };
        let num = |s: &str| -> Result<f64> {
            s.parse()
                .map_err(|_| Error::Validation(format!("bad summary number '{s}'")))
        };
        let opt = |s: &str| -> Result<Option<f64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                num(s).map(Some)
            }
        };
        out.push(MethodSummary {
            method,
            scenarios: record[1]
                .parse()
                .map_err(|_| Error::Validation("bad scenario count".into()))?,
            final_mean: num(&record[2])?,
            final_std: num(&record[3])?,
            final_percentile: opt(&record[4])?,
            mean_abs_error: num(&record[5])?,
            std_abs_error: opt(&record[6])?,
            percentile_abs_error: opt(&record[7])?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::rank_by_risk;

    #[test]
    fn homogeneous_generation_is_valid_and_deterministic() {
        let market = MarketData::bundled();
        let spec = SyntheticPortfolioSpec::homogeneous(100, 1);
        let a = generate_portfolio(&spec, &market).unwrap();
        let b = generate_portfolio(&spec, &market).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 100);
        let mut bytes_a = Vec::new();
        let mut bytes_b = Vec::new();
        a.write_csv(&mut bytes_a).unwrap();
        b.write_csv(&mut bytes_b).unwrap();
        assert_eq!(bytes_a, bytes_b);
        for credit in a.credits() {
            assert!(credit.validate().is_ok());
            assert!((1..=10).contains(&credit.maturity_years));
            assert!((3.0..=8.0).contains(&credit.coupon_pct));
            assert!((500.0..=1500.0).contains(&credit.face_value));
        }
        let c = generate_portfolio(&SyntheticPortfolioSpec::homogeneous(100, 2), &market).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn rating_mix_weights_are_a_distribution() {
        let total: f64 = RATING_MIX.iter().map(|(_, w)| w).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let total: f64 = SENIORITY_MIX.iter().map(|(_, w)| w).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn forced_credits_dominate_the_risk_ranking() {
        let market = MarketData::bundled();
        let spec = SyntheticPortfolioSpec::inhomogeneous(100, 5, 3);
        let portfolio = generate_portfolio(&spec, &market).unwrap();
        assert_eq!(portfolio.len(), 100);
        let ranking = rank_by_risk(&portfolio, &market, 5).unwrap();
        let mut prefix = ranking.prefix().to_vec();
        prefix.sort_unstable();
        // The forced credits are appended last.
        assert_eq!(prefix, vec![95, 96, 97, 98, 99]);
        for &idx in ranking.prefix() {
            assert_eq!(
                portfolio.credits()[idx].seniority,
                Seniority::JuniorSubordinated
            );
            assert!(matches!(
                portfolio.credits()[idx].rating,
                Rating::B | Rating::CCC
            ));
        }
    }

    #[test]
    fn infeasible_high_risk_count_is_rejected() {
        let market = MarketData::bundled();
        let spec = SyntheticPortfolioSpec::inhomogeneous(5, 6, 1);
        assert!(generate_portfolio(&spec, &market).is_err());
    }

    #[test]
    fn experiment_writes_all_outputs_and_reruns_identically() {
        let market = MarketData::bundled();
        let portfolio =
            generate_portfolio(&SyntheticPortfolioSpec::homogeneous(20, 11), &market).unwrap();
        let identity = CorrelationMatrix::identity(portfolio.len());
        let mut config = ExperimentConfig::new(300, 2, 5);
        config.reference_scenarios = 2_000;

        let dir = tempfile::tempdir().unwrap();
        let report =
            run_experiment(&portfolio, &market, &identity, &config, Some(dir.path())).unwrap();

        assert_eq!(report.methods.len(), 3);
        let names: Vec<&str> = report.methods.iter().map(|m| m.method.as_str()).collect();
        assert_eq!(names, vec!["mc", "qmc", "hybrid"]);
        for m in &report.methods {
            assert!(m.mean_abs_error.is_finite() && m.mean_abs_error >= 0.0);
            assert!(m.std_abs_error.unwrap() >= 0.0);
            assert!(m.percentile_abs_error.unwrap() >= 0.0);
        }

        for file in [
            "convergence_mc.csv",
            "convergence_qmc.csv",
            "convergence_hybrid.csv",
            "reference.txt",
            "summary.csv",
        ] {
            assert!(dir.path().join(file).exists(), "{file} missing");
        }

        // Emitted CSVs parse with the crate's own loaders.
        let series = crate::engine::ConvergenceSeries::from_reader(
            fs::File::open(dir.path().join("convergence_qmc.csv")).unwrap(),
        )
        .unwrap();
        assert_eq!(series.final_checkpoint().scenarios, 300);
        let summaries =
            read_summary_csv(fs::File::open(dir.path().join("summary.csv")).unwrap()).unwrap();
        assert_eq!(summaries.len(), 3);
        // Written with 12 decimals, so compare within that resolution.
        for (a, b) in summaries.iter().zip(&report.methods) {
            assert_eq!(a.method, b.method);
            assert_eq!(a.scenarios, b.scenarios);
            assert!((a.final_mean - b.final_mean).abs() < 1e-9);
            assert!((a.final_std - b.final_std).abs() < 1e-9);
            assert!((a.mean_abs_error - b.mean_abs_error).abs() < 1e-9);
        }

        // Re-running with the same configuration is byte-identical.
        let dir2 = tempfile::tempdir().unwrap();
        run_experiment(&portfolio, &market, &identity, &config, Some(dir2.path())).unwrap();
        for file in ["convergence_mc.csv", "summary.csv", "reference.txt"] {
            let a = fs::read(dir.path().join(file)).unwrap();
            let b = fs::read(dir2.path().join(file)).unwrap();
            assert_eq!(a, b, "{file} differs between reruns");
        }
    }

    #[test]
    fn showcase_parameters_are_pinned() {
        assert_eq!(
            Showcase::Sc1.params(),
            ShowcaseParams {
                size: 100,
                scenarios: 1_000,
                qmc_dims: 5
            }
        );
        assert_eq!(
            Showcase::Sc2.params(),
            ShowcaseParams {
                size: 500,
                scenarios: 5_000,
                qmc_dims: 25
            }
        );
        assert_eq!(
            Showcase::Sc3.params(),
            ShowcaseParams {
                size: 1_000,
                scenarios: 10_000,
                qmc_dims: 50
            }
        );
    }
}
