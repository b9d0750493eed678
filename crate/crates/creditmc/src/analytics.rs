//! Exact portfolio statistics for the uncorrelated case, risk-profile
//! ranking for the hybrid coordinate assignment, and value norming.

use crate::error::{Error, Result};
use crate::gauss::CorrelationMatrix;
use crate::model::{default_value, year_end_value, Credit, MarketData, Rating, RecoveryMode};
use crate::portfolio::Portfolio;

/// Which per-credit variance formula to use for the exact reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VarianceFormula {
    /// Law of total variance: the default branch contributes both its
    /// squared deviation from the mean and the recovery variance.
    #[default]
    ExactLaw,
    /// Shorter form that drops the squared deviation of the default branch
    /// and keeps only the recovery variance; exposed for comparison with
    /// references that use it. Biased low for defaultable credits.
    RecoveryVarianceOnly,
}

/// Exact portfolio statistics (normed units) with per-credit expectations
/// on the absolute value scale.
#[derive(Debug, Clone, PartialEq)]
pub struct PortfolioMoments {
    pub expected_value: f64,
    pub std_dev: f64,
    pub per_credit_expectations: Vec<f64>,
}

/// Year-end value of a credit for each of the eight outcomes, with the
/// default entry valued at the seniority-class mean recovery.
pub fn outcome_values(credit: &Credit, market: &MarketData) -> Result<[f64; 8]> {
    let mut values = [0.0; 8];
    for rating in Rating::INITIAL {
        values[rating.index()] = year_end_value(credit, rating, market.curves)?;
    }
    values[Rating::D.index()] = default_value(credit, market.recovery.mean_pct(credit.seniority))?;
    Ok(values)
}

/// Probability-weighted year-end value over all eight outcomes.
pub fn expected_credit_value(credit: &Credit, market: &MarketData) -> Result<f64> {
    let values = outcome_values(credit, market)?;
    Ok(Rating::ALL
        .iter()
        .map(|&y| market.transitions.probability(credit.rating, y) * values[y.index()])
        .sum())
}

/// Per-credit variance of the year-end value (absolute scale).
pub fn credit_variance(
    credit: &Credit,
    market: &MarketData,
    recovery_mode: RecoveryMode,
    formula: VarianceFormula,
) -> Result<f64> {
    let values = outcome_values(credit, market)?;
    let mean: f64 = Rating::ALL
        .iter()
        .map(|&y| market.transitions.probability(credit.rating, y) * values[y.index()])
        .sum();
    let mut variance = 0.0;
    for y in Rating::INITIAL {
        let p = market.transitions.probability(credit.rating, y);
        variance += p * (values[y.index()] - mean).powi(2);
    }
    let p_default = market.transitions.default_probability(credit.rating);
    if formula == VarianceFormula::ExactLaw {
        variance += p_default * (values[Rating::D.index()] - mean).powi(2);
    }
    if recovery_mode == RecoveryMode::Stochastic {
        // Table std is in percent of face; on the value scale that is
        // std/100 * M.
        let sigma = market.recovery.std_pct(credit.seniority) / 100.0 * credit.face_value;
        variance += p_default * sigma * sigma;
    }
    Ok(variance)
}

/// Normed expected portfolio value: 100 * sum E(A_i) / sum M_i.
pub fn portfolio_expected_value(portfolio: &Portfolio, market: &MarketData) -> Result<f64> {
    let moments = portfolio_moments(
        portfolio,
        market,
        &CorrelationMatrix::identity(portfolio.len()),
        RecoveryMode::Fixed,
        VarianceFormula::ExactLaw,
    )?;
    Ok(moments.expected_value)
}

/// Normed exact standard deviation; only defined for uncorrelated
/// portfolios, where the portfolio variance is the sum of the per-credit
/// variances.
pub fn portfolio_exact_std(
    portfolio: &Portfolio,
    market: &MarketData,
    correlation: &CorrelationMatrix,
    recovery_mode: RecoveryMode,
    formula: VarianceFormula,
) -> Result<f64> {
    Ok(portfolio_moments(portfolio, market, correlation, recovery_mode, formula)?.std_dev)
}

/// Expected value and exact standard deviation in one pass.
pub fn portfolio_moments(
    portfolio: &Portfolio,
    market: &MarketData,
    correlation: &CorrelationMatrix,
    recovery_mode: RecoveryMode,
    formula: VarianceFormula,
) -> Result<PortfolioMoments> {
    if portfolio.is_empty() {
        return Err(Error::Domain("portfolio is empty".into()));
    }
    if !correlation.is_identity() {
        return Err(Error::Domain(
            "exact portfolio statistics are only defined for the identity correlation".into(),
        ));
    }
    let mut per_credit = Vec::with_capacity(portfolio.len());
    let mut variance_sum = 0.0;
    for credit in portfolio.credits() {
        per_credit.push(expected_credit_value(credit, market)?);
        variance_sum += credit_variance(credit, market, recovery_mode, formula)?;
    }
    let scale = 100.0 / portfolio.total_face();
    Ok(PortfolioMoments {
        expected_value: scale * per_credit.iter().sum::<f64>(),
        std_dev: scale * variance_sum.sqrt(),
        per_credit_expectations: per_credit,
    })
}

/// Risk profile P = (1 - RR/100) * M * p_default: expected loss severity
/// weighted by default probability.
pub fn risk_profile(credit: &Credit, market: &MarketData) -> f64 {
    let loss_fraction = 1.0 - market.recovery.mean_pct(credit.seniority) / 100.0;
    loss_fraction * credit.face_value * market.transitions.default_probability(credit.rating)
}

/// Credits ordered by descending risk profile with the designated prefix.
#[derive(Debug, Clone, PartialEq)]
pub struct RiskRanking {
    order: Vec<usize>,
    prefix_len: usize,
    profiles: Vec<f64>,
}

impl RiskRanking {
    /// All credit indices, highest risk profile first (ties by ascending
    /// index).
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// The s' highest-risk credit indices, in ranking order.
    pub fn prefix(&self) -> &[usize] {
        &self.order[..self.prefix_len]
    }

    /// Risk profile of credit `i` (input order).
    pub fn profile(&self, credit_index: usize) -> f64 {
        self.profiles[credit_index]
    }
}

/// Stable descending sort by risk profile; `prefix_len` must satisfy
/// 1 <= prefix_len <= s.
pub fn rank_by_risk(
    portfolio: &Portfolio,
    market: &MarketData,
    prefix_len: usize,
) -> Result<RiskRanking> {
    if prefix_len == 0 || prefix_len > portfolio.len() {
        return Err(Error::Domain(format!(
            "ranking prefix {prefix_len} outside 1..={}",
            portfolio.len()
        )));
    }
    let profiles: Vec<f64> = portfolio
        .credits()
        .iter()
        .map(|c| risk_profile(c, market))
        .collect();
    let mut order: Vec<usize> = (0..portfolio.len()).collect();
    order.sort_by(|&a, &b| {
        profiles[b]
            .partial_cmp(&profiles[a])
            .expect("risk profiles are finite")
            .then(a.cmp(&b))
    });
    Ok(RiskRanking {
        order,
        prefix_len,
        profiles,
    })
}
