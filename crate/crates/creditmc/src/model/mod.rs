//! Credit-model domain types: ratings, seniorities, credits, the data
//! tables they reference, bond revaluation and the rating-threshold map.

mod beta;
mod pricing;
mod tables;
mod thresholds;

pub use pricing::{default_value, forward_one_year, present_value, year_end_value};
pub use tables::{ForwardCurveSet, RecoveryMode, RecoveryTable, TransitionMatrix};
pub use thresholds::{compute_thresholds, rating_from_z, ThresholdRow, ThresholdTable};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The three data tables every valuation needs, borrowed together.
#[derive(Debug, Clone, Copy)]
pub struct MarketData<'a> {
    pub curves: &'a ForwardCurveSet,
    pub transitions: &'a TransitionMatrix,
    pub recovery: &'a RecoveryTable,
}

impl MarketData<'static> {
    /// The bundled default tables.
    pub fn bundled() -> Self {
        Self {
            curves: ForwardCurveSet::bundled(),
            transitions: TransitionMatrix::bundled(),
            recovery: RecoveryTable::bundled(),
        }
    }
}

/// Credit rating classes; `D` (default) occurs only as a year-end state.
#[allow(clippy::upper_case_acronyms)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rating {
    AAA,
    AA,
    A,
    BBB,
    BB,
    B,
    CCC,
    D,
}

impl Rating {
    /// All eight year-end states, best to worst.
    pub const ALL: [Rating; 8] = [
        Rating::AAA,
        Rating::AA,
        Rating::A,
        Rating::BBB,
        Rating::BB,
        Rating::B,
        Rating::CCC,
        Rating::D,
    ];

    /// The seven admissible initial ratings.
    pub const INITIAL: [Rating; 7] = [
        Rating::AAA,
        Rating::AA,
        Rating::A,
        Rating::BBB,
        Rating::BB,
        Rating::B,
        Rating::CCC,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_default(self) -> bool {
        self == Rating::D
    }

    pub fn from_label(label: &str) -> Result<Self> {
        match label.trim() {
            "AAA" => Ok(Rating::AAA),
            "AA" => Ok(Rating::AA),
            "A" => Ok(Rating::A),
            "BBB" => Ok(Rating::BBB),
            "BB" => Ok(Rating::BB),
            "B" => Ok(Rating::B),
            "CCC" => Ok(Rating::CCC),
            "D" => Ok(Rating::D),
            other => Err(Error::Validation(format!("unknown rating label '{other}'"))),
        }
    }
}

impl std::fmt::Display for Rating {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Rating::AAA => "AAA",
            Rating::AA => "AA",
            Rating::A => "A",
            Rating::BBB => "BBB",
            Rating::BB => "BB",
            Rating::B => "B",
            Rating::CCC => "CCC",
            Rating::D => "D",
        })
    }
}

/// Seniority class of a bond; determines the recovery rate on default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Seniority {
    SeniorSecured,
    SeniorUnsecured,
    SeniorSubordinated,
    Subordinated,
    JuniorSubordinated,
}

impl Seniority {
    pub const ALL: [Seniority; 5] = [
        Seniority::SeniorSecured,
        Seniority::SeniorUnsecured,
        Seniority::SeniorSubordinated,
        Seniority::Subordinated,
        Seniority::JuniorSubordinated,
    ];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl std::fmt::Display for Seniority {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Seniority::SeniorSecured => "senior_secured",
            Seniority::SeniorUnsecured => "senior_unsecured",
            Seniority::SeniorSubordinated => "senior_subordinated",
            Seniority::Subordinated => "subordinated",
            Seniority::JuniorSubordinated => "junior_subordinated",
        })
    }
}

/// One bond position: annual coupon, integer maturity, priced off the
/// forward curve of its rating class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Credit {
    pub id: String,
    pub face_value: f64,
    pub coupon_pct: f64,
    pub maturity_years: u32,
    pub rating: Rating,
    pub seniority: Seniority,
}

impl Credit {
    pub fn validate(&self) -> Result<()> {
        if !(self.face_value > 0.0 && self.face_value.is_finite()) {
            return Err(Error::Validation(format!(
                "credit {}: face value must be positive, got {}",
                self.id, self.face_value
            )));
        }
        if !(self.coupon_pct >= 0.0 && self.coupon_pct.is_finite()) {
            return Err(Error::Validation(format!(
                "credit {}: coupon must be non-negative, got {}",
                self.id, self.coupon_pct
            )));
        }
        if self.maturity_years < 1 {
            return Err(Error::Validation(format!(
                "credit {}: maturity must be >= 1 year",
                self.id
            )));
        }
        if self.rating.is_default() {
            return Err(Error::Validation(format!(
                "credit {}: initial rating cannot be D",
                self.id
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod enum_tests {
    use super::*;

    #[test]
    fn rating_indices_follow_declaration_order() {
        for (i, r) in Rating::ALL.iter().enumerate() {
            assert_eq!(r.index(), i);
        }
        assert_eq!(Rating::INITIAL.len(), 7);
        assert!(!Rating::INITIAL.contains(&Rating::D));
    }

    #[test]
    fn rating_labels_round_trip() {
        for r in Rating::ALL {
            assert_eq!(Rating::from_label(&r.to_string()).unwrap(), r);
        }
        assert!(Rating::from_label("AA+").is_err());
    }

    #[test]
    fn credit_validation_catches_bad_fields() {
        let good = Credit {
            id: "c1".into(),
            face_value: 100.0,
            coupon_pct: 5.0,
            maturity_years: 3,
            rating: Rating::BBB,
            seniority: Seniority::SeniorUnsecured,
        };
        assert!(good.validate().is_ok());
        let mut bad = good.clone();
        bad.face_value = 0.0;
        assert!(bad.validate().is_err());
        let mut bad = good.clone();
        bad.coupon_pct = -1.0;
        assert!(bad.validate().is_err());
        let mut bad = good.clone();
        bad.maturity_years = 0;
        assert!(bad.validate().is_err());
        let mut bad = good;
        bad.rating = Rating::D;
        assert!(bad.validate().is_err());
    }
}
