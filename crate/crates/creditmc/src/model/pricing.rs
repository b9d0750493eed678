//! Bond revaluation: present value, one-year forward rates, year-end value
//! per rating outcome, and the default value from the recovery rate.

use super::{Credit, ForwardCurveSet, Rating};
use crate::error::{Error, Result};

/// Present value of the credit off its own rating's forward zero curve:
/// coupons at years 1..T-1 plus redemption and final coupon at T.
pub fn present_value(credit: &Credit, curves: &ForwardCurveSet) -> Result<f64> {
    let coupon = credit.coupon_pct / 100.0 * credit.face_value;
    let t = credit.maturity_years;
    let mut value = 0.0;
    for l in 1..t {
        let r = curves.rate_decimal(credit.rating, l)?;
        value += coupon / (1.0 + r).powi(l as i32);
    }
    let r_final = curves.rate_decimal(credit.rating, t)?;
    value += (credit.face_value + coupon) / (1.0 + r_final).powi(t as i32);
    Ok(value)
}

/// One-year forward zero rate for horizon `maturity`, as a decimal:
/// ((1 + r_T)^T / (1 + r_1))^(1/(T-1)) - 1.
pub fn forward_one_year(curves: &ForwardCurveSet, rating: Rating, maturity: u32) -> Result<f64> {
    if maturity < 2 {
        return Err(Error::Domain(format!(
            "one-year forward rate needs maturity >= 2, got {maturity}"
        )));
    }
    let r1 = curves.rate_decimal(rating, 1)?;
    let rt = curves.rate_decimal(rating, maturity)?;
    let ratio = (1.0 + rt).powi(maturity as i32) / (1.0 + r1);
    Ok(ratio.powf(1.0 / (maturity - 1) as f64) - 1.0)
}

/// Value at next year-end if the credit migrates to non-default rating
/// `year_end`: the remaining cash flows discounted at that rating's
/// one-year forward rates. A one-year bond has no cash flows left to
/// discount and is worth face plus final coupon under every non-default
/// outcome.
pub fn year_end_value(credit: &Credit, year_end: Rating, curves: &ForwardCurveSet) -> Result<f64> {
    if year_end.is_default() {
        return Err(Error::Domain(
            "year_end_value is undefined for rating D; use default_value".into(),
        ));
    }
    let coupon = credit.coupon_pct / 100.0 * credit.face_value;
    let t = credit.maturity_years;
    if t == 1 {
        return Ok(credit.face_value + coupon);
    }
    let mut value = 0.0;
    for l in 2..t {
        let f = forward_one_year(curves, year_end, l)?;
        value += coupon / (1.0 + f).powi(l as i32 - 1);
    }
    let f_final = forward_one_year(curves, year_end, t)?;
    value += (credit.face_value + coupon) / (1.0 + f_final).powi(t as i32 - 1);
    Ok(value)
}

/// Value on default: recovery_pct / 100 * face value.
pub fn default_value(credit: &Credit, recovery_pct: f64) -> Result<f64> {
    if !(0.0..=100.0).contains(&recovery_pct) {
        return Err(Error::Domain(format!(
            "recovery {recovery_pct}% outside [0, 100]"
        )));
    }
    Ok(recovery_pct / 100.0 * credit.face_value)
}
