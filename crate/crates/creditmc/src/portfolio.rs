//! A portfolio is an ordered list of credits; scenario dimension equals
//! portfolio size (one normalized asset return per credit).

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::Credit;

#[derive(Debug, Clone, PartialEq)]
pub struct Portfolio {
    credits: Vec<Credit>,
}

impl Portfolio {
    pub fn new(credits: Vec<Credit>) -> Result<Self> {
        if credits.is_empty() {
            return Err(Error::Validation("portfolio is empty".into()));
        }
        for credit in &credits {
            credit.validate()?;
        }
        Ok(Self { credits })
    }

    pub fn credits(&self) -> &[Credit] {
        &self.credits
    }

    pub fn len(&self) -> usize {
        self.credits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.credits.is_empty()
    }

    /// Total face value M = sum of M_i.
    pub fn total_face(&self) -> f64 {
        self.credits.iter().map(|c| c.face_value).sum()
    }

    /// 100 * value / total face value.
    pub fn normed(&self, value: f64) -> f64 {
        100.0 * value / self.total_face()
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_reader(std::fs::File::open(path)?)
    }

    /// CSV layout: `id,face_value,coupon_pct,maturity_years,rating,seniority`.
    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut csv = csv::Reader::from_reader(reader);
        let mut credits = Vec::new();
        for record in csv.deserialize::<Credit>() {
            credits.push(record?);
        }
        Self::new(credits)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut csv = csv::Writer::from_writer(writer);
        for credit in &self.credits {
            csv.serialize(credit)?;
        }
        csv.flush()?;
        Ok(())
    }

    pub fn write_to_path(&self, path: &Path) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Rating, Seniority};

    fn sample() -> Portfolio {
        Portfolio::new(vec![
            Credit {
                id: "c1".into(),
                face_value: 1000.0,
                coupon_pct: 5.25,
                maturity_years: 3,
                rating: Rating::BBB,
                seniority: Seniority::SeniorSecured,
            },
            Credit {
                id: "c2".into(),
                face_value: 500.0,
                coupon_pct: 7.0,
                maturity_years: 1,
                rating: Rating::B,
                seniority: Seniority::JuniorSubordinated,
            },
        ])
        .unwrap()
    }

    #[test]
    fn total_face_and_norming() {
        let p = sample();
        assert_eq!(p.total_face(), 1500.0);
        assert!((p.normed(1500.0) - 100.0).abs() < 1e-12);
    }

    #[test]
    fn csv_round_trip_preserves_credits() {
        let p = sample();
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("id,face_value,coupon_pct,maturity_years,rating,seniority"));
        let back = Portfolio::from_reader(buf.as_slice()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn rejects_empty_and_invalid_portfolios() {
        assert!(Portfolio::new(vec![]).is_err());
        let mut bad = sample().credits().to_vec();
        bad[0].maturity_years = 0;
        assert!(Portfolio::new(bad).is_err());
    }
}
