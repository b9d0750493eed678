//! Rating-transition probabilities, recovery rates by seniority and
//! per-rating forward zero curves, with CSV loaders and bundled defaults.

use std::io::Read;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::beta;
use super::{Rating, Seniority};
use crate::error::{Error, Result};

const BUNDLED_TRANSITIONS: &str = include_str!("../../data/transitions.csv");
const BUNDLED_RECOVERY: &str = include_str!("../../data/recovery.csv");
const BUNDLED_CURVES: &str = include_str!("../../data/curves.csv");

/// Annual rating-migration probabilities, 7 initial ratings x 8 year-end
/// states, stored in percent as printed plus row-normalized probabilities.
///
/// Printed rows carry rounding slack (they are accepted when they sum to
/// 100 +/- 0.01), so consumers work with the normalized probabilities,
/// which form an exact partition per row.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    percent: [[f64; 8]; 7],
    probability: [[f64; 8]; 7],
}

impl TransitionMatrix {
    pub fn from_percent_rows(percent: [[f64; 8]; 7]) -> Result<Self> {
        let mut probability = [[0.0; 8]; 7];
        for (i, row) in percent.iter().enumerate() {
            let initial = Rating::INITIAL[i];
            if let Some(&bad) = row.iter().find(|p| !p.is_finite() || **p < 0.0) {
                return Err(Error::Validation(format!(
                    "transition row {initial}: negative or non-finite entry {bad}"
                )));
            }
            let sum: f64 = row.iter().sum();
            // 0.01 of printing slack, plus a hair for the f64 sum itself
            // (the printed B row sits exactly on the boundary).
            if (sum - 100.0).abs() > 0.01 + 1e-9 {
                return Err(Error::Validation(format!(
                    "transition row {initial} sums to {sum}, outside 100 +/- 0.01"
                )));
            }
            for (j, &p) in row.iter().enumerate() {
                probability[i][j] = p / sum;
            }
        }
        Ok(Self {
            percent,
            probability,
        })
    }

    /// The transition matrix bundled with the crate.
    pub fn bundled() -> &'static TransitionMatrix {
        static TABLE: OnceLock<TransitionMatrix> = OnceLock::new();
        TABLE.get_or_init(|| {
            TransitionMatrix::from_reader(BUNDLED_TRANSITIONS.as_bytes())
                .expect("bundled transition matrix must parse")
        })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_reader(std::fs::File::open(path)?)
    }

    /// CSV layout: header `rating,AAA,AA,A,BBB,BB,B,CCC,D`, one row per
    /// initial rating; row order is free, labels are authoritative.
    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut csv = csv::Reader::from_reader(reader);
        let headers = csv.headers()?.clone();
        if headers.len() != 9 {
            return Err(Error::Validation(format!(
                "transition CSV needs 9 columns, found {}",
                headers.len()
            )));
        }
        let columns: Vec<Rating> = headers
            .iter()
            .skip(1)
            .map(Rating::from_label)
            .collect::<Result<_>>()?;
        let mut percent = [[f64::NAN; 8]; 7];
        let mut seen = [false; 7];
        for record in csv.records() {
            let record = record?;
            let initial = Rating::from_label(&record[0])?;
            if initial.is_default() {
                return Err(Error::Validation(
                    "transition CSV has a row for initial rating D".into(),
                ));
            }
            let i = initial.index();
            if seen[i] {
                return Err(Error::Validation(format!(
                    "transition CSV repeats row {initial}"
                )));
            }
            seen[i] = true;
            for (k, target) in columns.iter().enumerate() {
                let value: f64 = record[k + 1].trim().parse().map_err(|_| {
                    Error::Validation(format!(
                        "transition CSV row {initial}: bad number '{}'",
                        &record[k + 1]
                    ))
                })?;
                percent[i][target.index()] = value;
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::Validation(format!(
                "transition CSV is missing row {}",
                Rating::INITIAL[i]
            )));
        }
        Self::from_percent_rows(percent)
    }

    /// Printed percent entry.
    pub fn percent(&self, from: Rating, to: Rating) -> f64 {
        self.percent[from.index()][to.index()]
    }

    /// Row-normalized migration probability.
    pub fn probability(&self, from: Rating, to: Rating) -> f64 {
        self.probability[from.index()][to.index()]
    }

    pub fn default_probability(&self, from: Rating) -> f64 {
        self.probability(from, Rating::D)
    }
}

/// Recovery mode used when revaluing defaulted credits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecoveryMode {
    /// Always the seniority-class mean.
    Fixed,
    /// Quantile of a Beta distribution on [0, 100] moment-matched to the
    /// seniority-class mean and standard deviation.
    Stochastic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct RecoveryParams {
    mean_pct: f64,
    std_pct: f64,
    /// Matched Beta shape parameters on the [0, 1] scale.
    beta: (f64, f64),
}

/// Mean and standard deviation of the recovery rate per seniority class.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryTable {
    params: [RecoveryParams; 5],
}

#[derive(Debug, Deserialize)]
struct RecoveryRecord {
    seniority: Seniority,
    mean_pct: f64,
    std_pct: f64,
}

impl RecoveryTable {
    pub fn bundled() -> &'static RecoveryTable {
        static TABLE: OnceLock<RecoveryTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            RecoveryTable::from_reader(BUNDLED_RECOVERY.as_bytes())
                .expect("bundled recovery table must parse")
        })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_reader(std::fs::File::open(path)?)
    }

    /// CSV layout: `seniority,mean_pct,std_pct`, one row per class.
    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut csv = csv::Reader::from_reader(reader);
        let mut entries: [Option<RecoveryParams>; 5] = [None; 5];
        for record in csv.deserialize::<RecoveryRecord>() {
            let record = record?;
            let params = Self::match_moments(record.seniority, record.mean_pct, record.std_pct)?;
            if entries[record.seniority.index()].is_some() {
                return Err(Error::Validation(format!(
                    "recovery CSV repeats {}",
                    record.seniority
                )));
            }
            entries[record.seniority.index()] = Some(params);
        }
        let mut params = [RecoveryParams {
            mean_pct: 0.0,
            std_pct: 0.0,
            beta: (1.0, 1.0),
        }; 5];
        for (i, entry) in entries.into_iter().enumerate() {
            params[i] = entry.ok_or_else(|| {
                Error::Validation(format!("recovery CSV is missing {}", Seniority::ALL[i]))
            })?;
        }
        Ok(Self { params })
    }

    /// Beta moment matching on the [0, 1] scale; infeasible moments are a
    /// configuration error caught at load.
    fn match_moments(seniority: Seniority, mean_pct: f64, std_pct: f64) -> Result<RecoveryParams> {
        if !(0.0..=100.0).contains(&mean_pct) {
            return Err(Error::Validation(format!(
                "recovery mean for {seniority} is {mean_pct}, outside [0, 100]"
            )));
        }
        if !(std_pct >= 0.0 && std_pct.is_finite()) {
            return Err(Error::Validation(format!(
                "recovery std for {seniority} is {std_pct}, must be >= 0"
            )));
        }
        let m = mean_pct / 100.0;
        let v = (std_pct / 100.0).powi(2);
        let beta = if v == 0.0 {
            (1.0, 1.0) // unused: zero variance degenerates to the mean
        } else {
            if !(m > 0.0 && m < 1.0) || v >= m * (1.0 - m) {
                return Err(Error::Validation(format!(
                    "recovery moments for {seniority} (mean {mean_pct}, std {std_pct}) \
                     cannot be matched by a Beta distribution"
                )));
            }
            let k = m * (1.0 - m) / v - 1.0;
            (m * k, (1.0 - m) * k)
        };
        Ok(RecoveryParams {
            mean_pct,
            std_pct,
            beta,
        })
    }

    pub fn mean_pct(&self, seniority: Seniority) -> f64 {
        self.params[seniority.index()].mean_pct
    }

    pub fn std_pct(&self, seniority: Seniority) -> f64 {
        self.params[seniority.index()].std_pct
    }

    /// Matched Beta shape parameters (alpha, beta) on the [0, 1] scale.
    pub fn beta_shape(&self, seniority: Seniority) -> (f64, f64) {
        self.params[seniority.index()].beta
    }

    /// Recovery draw in percent of face value. `Fixed` returns the class
    /// mean; `Stochastic` maps the uniform `u` through the matched Beta
    /// quantile.
    pub fn draw(&self, seniority: Seniority, u: f64, mode: RecoveryMode) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::Domain(format!(
                "recovery draw requires u in (0, 1), got {u}"
            )));
        }
        let params = &self.params[seniority.index()];
        match mode {
            RecoveryMode::Fixed => Ok(params.mean_pct),
            RecoveryMode::Stochastic => {
                if params.std_pct == 0.0 {
                    return Ok(params.mean_pct);
                }
                let (a, b) = params.beta;
                Ok(100.0 * beta::betainc_inv(a, b, u))
            }
        }
    }
}

/// Forward zero rates per rating and integer maturity, held as decimal
/// fractions (loaders take percent, conversion happens once here).
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardCurveSet {
    /// rates[rating][maturity - 1]
    rates: [Vec<Option<f64>>; 7],
    max_maturity: u32,
}

#[derive(Debug, Deserialize)]
struct CurveRecord {
    rating: Rating,
    maturity: u32,
    rate_pct: f64,
}

impl ForwardCurveSet {
    /// Illustrative bundled curve set (upward-sloping, rating-ordered);
    /// production use supplies a curve file.
    pub fn bundled() -> &'static ForwardCurveSet {
        static TABLE: OnceLock<ForwardCurveSet> = OnceLock::new();
        TABLE.get_or_init(|| {
            ForwardCurveSet::from_reader(BUNDLED_CURVES.as_bytes())
                .expect("bundled curve set must parse")
        })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_reader(std::fs::File::open(path)?)
    }

    /// CSV layout: `rating,maturity,rate_pct`.
    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut csv = csv::Reader::from_reader(reader);
        let mut points = Vec::new();
        for record in csv.deserialize::<CurveRecord>() {
            let record = record?;
            points.push((record.rating, record.maturity, record.rate_pct));
        }
        Self::from_percent_points(&points)
    }

    pub fn from_percent_points(points: &[(Rating, u32, f64)]) -> Result<Self> {
        let max_maturity = points.iter().map(|p| p.1).max().unwrap_or(0);
        if max_maturity == 0 {
            return Err(Error::Validation("curve set has no points".into()));
        }
        let mut rates: [Vec<Option<f64>>; 7] = Default::default();
        for row in rates.iter_mut() {
            row.resize(max_maturity as usize, None);
        }
        for &(rating, maturity, rate_pct) in points {
            if rating.is_default() {
                return Err(Error::Validation("curve set has a row for rating D".into()));
            }
            if maturity == 0 {
                return Err(Error::Validation("curve maturities start at 1 year".into()));
            }
            if rate_pct <= -100.0 || !rate_pct.is_finite() {
                return Err(Error::Validation(format!(
                    "curve rate {rate_pct}% for {rating} maturity {maturity} must exceed -100"
                )));
            }
            rates[rating.index()][maturity as usize - 1] = Some(rate_pct / 100.0);
        }
        Ok(Self {
            rates,
            max_maturity,
        })
    }

    /// Flat curve at `rate_pct` for every rating out to `max_maturity`;
    /// handy in tests and synthetic setups.
    pub fn flat(rate_pct: f64, max_maturity: u32) -> Self {
        let points: Vec<(Rating, u32, f64)> = Rating::INITIAL
            .iter()
            .flat_map(|&r| (1..=max_maturity).map(move |t| (r, t, rate_pct)))
            .collect();
        Self::from_percent_points(&points).expect("flat curve construction")
    }

    pub fn max_maturity(&self) -> u32 {
        self.max_maturity
    }

    /// Spot forward zero rate as a decimal fraction.
    pub fn rate_decimal(&self, rating: Rating, maturity: u32) -> Result<f64> {
        if rating.is_default() {
            return Err(Error::Domain("no curve exists for rating D".into()));
        }
        self.rates[rating.index()]
            .get(maturity.wrapping_sub(1) as usize)
            .copied()
            .flatten()
            .ok_or(Error::MissingCurvePoint { rating, maturity })
    }
}
