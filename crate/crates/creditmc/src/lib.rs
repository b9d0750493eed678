//! Credit-portfolio risk simulation over a one-year horizon.
//!
//! The model revalues a portfolio of annual-coupon bonds at year-end under
//! rating migration and default, and estimates the distribution of the
//! normed portfolio value by simulation. Scenario points come from
//! interchangeable sources: seeded pseudo-random streams, a base-2 digital
//! low-discrepancy sequence, or hybrid streams that spend the
//! low-discrepancy coordinates on the highest-risk credits.
//!
//! The crate ships default data tables (rating-transition matrix, recovery
//! rates by seniority, an illustrative forward curve set), exact moment
//! references for uncorrelated portfolios, and an experiment layer that
//! emits convergence series as CSV.

pub mod analytics;
pub mod engine;
pub mod error;
pub mod experiments;
pub mod gauss;
pub mod model;
pub mod portfolio;
pub mod seq;

pub use error::{Error, Result};
