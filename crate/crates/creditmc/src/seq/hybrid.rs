//! Hybrid point stream: a digital low-discrepancy sequence drives a
//! designated subset of coordinates, a pseudo-random stream drives the
//! rest, and both advance in lockstep.

use super::{NiederreiterSequence, PseudoRandomStream, SequenceSource};
use crate::error::{Error, Result};

/// Where a credit's coordinate comes from: slot `k` of the digital part or
/// slot `k` of the pseudo-random part.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordinateSource {
    Qmc(usize),
    Mc(usize),
}

/// An s-dimensional stream whose designated coordinates come from an
/// s'-dimensional digital sequence and whose remaining s-s' coordinates
/// come from a pseudo-random stream.
///
/// Digital slots are assigned to the designated credit indices in
/// ascending order, pseudo-random slots to the rest in ascending order, so
/// the degenerate splits s' = 0 and s' = s reproduce the pure streams
/// coordinate for coordinate.
#[derive(Debug, Clone)]
pub struct HybridScheme {
    qmc: Option<NiederreiterSequence>,
    mc: Option<PseudoRandomStream>,
    assignment: Vec<CoordinateSource>,
    qmc_buf: Vec<f64>,
    mc_buf: Vec<f64>,
}

impl HybridScheme {
    /// `designated` lists the credit indices (0-based, unique, < s) served
    /// by the digital part; its length is the digital dimension s'.
    pub fn new(
        total_dimension: usize,
        qmc_dimension: usize,
        seed: u64,
        bit_precision: u32,
        designated: &[usize],
    ) -> Result<Self> {
        if total_dimension == 0 {
            return Err(Error::Domain("hybrid dimension must be >= 1".into()));
        }
        if qmc_dimension > total_dimension {
            return Err(Error::Domain(format!(
                "qmc dimension {qmc_dimension} exceeds total dimension {total_dimension}"
            )));
        }
        if designated.len() != qmc_dimension {
            return Err(Error::Domain(format!(
                "{} designated credits for qmc dimension {qmc_dimension}",
                designated.len()
            )));
        }
        let mut flags = vec![false; total_dimension];
        for &idx in designated {
            if idx >= total_dimension {
                return Err(Error::Domain(format!(
                    "designated credit index {idx} out of range (s = {total_dimension})"
                )));
            }
            if flags[idx] {
                return Err(Error::Domain(format!(
                    "designated credit index {idx} repeated"
                )));
            }
            flags[idx] = true;
        }

        let mut assignment = Vec::with_capacity(total_dimension);
        let (mut next_qmc, mut next_mc) = (0usize, 0usize);
        for &is_qmc in &flags {
            if is_qmc {
                assignment.push(CoordinateSource::Qmc(next_qmc));
                next_qmc += 1;
            } else {
                assignment.push(CoordinateSource::Mc(next_mc));
                next_mc += 1;
            }
        }

        let qmc = if qmc_dimension > 0 {
            Some(NiederreiterSequence::new(qmc_dimension, bit_precision)?)
        } else {
            None
        };
        let mc_dimension = total_dimension - qmc_dimension;
        let mc = if mc_dimension > 0 {
            Some(PseudoRandomStream::new(seed, mc_dimension)?)
        } else {
            None
        };
        Ok(Self {
            qmc,
            mc,
            assignment,
            qmc_buf: vec![0.0; qmc_dimension],
            mc_buf: vec![0.0; mc_dimension],
        })
    }

    pub fn qmc_dimension(&self) -> usize {
        self.qmc_buf.len()
    }

    /// Per-credit coordinate assignment (a bijection onto the component
    /// slots).
    pub fn assignment(&self) -> &[CoordinateSource] {
        &self.assignment
    }
}

impl SequenceSource for HybridScheme {
    fn dimension(&self) -> usize {
        self.assignment.len()
    }

    fn fill_next(&mut self, out: &mut [f64]) -> Result<()> {
        if out.len() != self.assignment.len() {
            return Err(Error::DimensionMismatch {
                expected: self.assignment.len(),
                got: out.len(),
            });
        }
        if let Some(qmc) = self.qmc.as_mut() {
            qmc.fill_next(&mut self.qmc_buf)?;
        }
        if let Some(mc) = self.mc.as_mut() {
            mc.fill_next(&mut self.mc_buf)?;
        }
        for (slot, source) in out.iter_mut().zip(&self.assignment) {
            *slot = match *source {
                CoordinateSource::Qmc(k) => self.qmc_buf[k],
                CoordinateSource::Mc(k) => self.mc_buf[k],
            };
        }
        Ok(())
    }

    fn seek(&mut self, index: u64) -> Result<()> {
        if let Some(qmc) = self.qmc.as_mut() {
            qmc.seek(index)?;
        }
        if let Some(mc) = self.mc.as_mut() {
            mc.seek(index)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::SequenceSource;

    #[test]
    fn designated_credit_gets_the_digital_coordinate() {
        // s = 3, s' = 1, designated credit #2 (index 1): layout mc, qmc, mc.
        let mut hybrid = HybridScheme::new(3, 1, 11, 52, &[1]).unwrap();
        let mut qmc = NiederreiterSequence::new(1, 52).unwrap();
        let mut mc = PseudoRandomStream::new(11, 2).unwrap();
        assert_eq!(
            hybrid.assignment(),
            &[
                CoordinateSource::Mc(0),
                CoordinateSource::Qmc(0),
                CoordinateSource::Mc(1)
            ]
        );
        for _ in 0..32 {
            let h = hybrid.next_point().unwrap();
            let q = qmc.next_point().unwrap();
            let m = mc.next_point().unwrap();
            assert_eq!(h.coords(), &[m.coords()[0], q.coords()[0], m.coords()[1]]);
        }
    }

    #[test]
    fn full_qmc_split_is_the_pure_digital_stream() {
        let designated: Vec<usize> = (0..5).collect();
        let mut hybrid = HybridScheme::new(5, 5, 99, 52, &designated).unwrap();
        let mut pure = NiederreiterSequence::new(5, 52).unwrap();
        for _ in 0..64 {
            assert_eq!(hybrid.next_point().unwrap(), pure.next_point().unwrap());
        }
    }

    #[test]
    fn zero_qmc_split_is_the_pure_pseudo_stream() {
        let mut hybrid = HybridScheme::new(5, 0, 123, 52, &[]).unwrap();
        let mut pure = PseudoRandomStream::new(123, 5).unwrap();
        for _ in 0..64 {
            assert_eq!(hybrid.next_point().unwrap(), pure.next_point().unwrap());
        }
    }

    #[test]
    fn projections_recover_component_streams() {
        let designated = [0usize, 2, 5];
        let mut hybrid = HybridScheme::new(7, 3, 5, 52, &designated).unwrap();
        let mut qmc = NiederreiterSequence::new(3, 52).unwrap();
        let mut mc = PseudoRandomStream::new(5, 4).unwrap();
        for _ in 0..128 {
            let h = hybrid.next_point().unwrap();
            let q = qmc.next_point().unwrap();
            let m = mc.next_point().unwrap();
            let qmc_proj: Vec<f64> = designated.iter().map(|&i| h.coords()[i]).collect();
            let mc_proj: Vec<f64> = (0..7)
                .filter(|i| !designated.contains(i))
                .map(|i| h.coords()[i])
                .collect();
            assert_eq!(qmc_proj, q.coords());
            assert_eq!(mc_proj, m.coords());
        }
    }

    #[test]
    fn assignment_is_a_bijection() {
        let hybrid = HybridScheme::new(10, 4, 1, 52, &[9, 0, 4, 2]).unwrap();
        let mut qmc_seen = [false; 4];
        let mut mc_seen = [false; 6];
        for source in hybrid.assignment() {
            match *source {
                CoordinateSource::Qmc(k) => {
                    assert!(!qmc_seen[k]);
                    qmc_seen[k] = true;
                }
                CoordinateSource::Mc(k) => {
                    assert!(!mc_seen[k]);
                    mc_seen[k] = true;
                }
            }
        }
        assert!(qmc_seen.iter().all(|&b| b) && mc_seen.iter().all(|&b| b));
    }

    #[test]
    fn rejects_bad_designations() {
        assert!(HybridScheme::new(3, 2, 1, 52, &[0]).is_err());
        assert!(HybridScheme::new(3, 2, 1, 52, &[0, 3]).is_err());
        assert!(HybridScheme::new(3, 2, 1, 52, &[1, 1]).is_err());
        assert!(HybridScheme::new(3, 4, 1, 52, &[0, 1, 2, 2]).is_err());
    }

    #[test]
    fn seek_keeps_components_in_lockstep() {
        let mut hybrid = HybridScheme::new(6, 2, 77, 52, &[1, 4]).unwrap();
        let points: Vec<_> = (0..40).map(|_| hybrid.next_point().unwrap()).collect();
        let mut jumper = HybridScheme::new(6, 2, 77, 52, &[1, 4]).unwrap();
        for idx in [13u64, 39, 0] {
            jumper.seek(idx).unwrap();
            assert_eq!(jumper.next_point().unwrap(), points[idx as usize]);
        }
    }
}
