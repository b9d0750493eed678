//! Scenario point sources: pseudo-random, digital low-discrepancy and
//! hybrid streams of s-dimensional points in the unit cube.
//!
//! All sources are index-addressable: the point at index `n` is a pure
//! function of the source configuration, so workers fast-forwarded to
//! disjoint index ranges reproduce exactly the serial stream.

mod hybrid;
mod niederreiter;
mod pseudo;

pub use hybrid::{CoordinateSource, HybridScheme};
pub use niederreiter::{
    build_generator_matrices, GeneratorMatrix, NiederreiterSequence, PolynomialTable,
};
pub use pseudo::{splitmix64, unit_from_bits, PseudoRandomStream};

use crate::error::{Error, Result};

/// A point in `[0,1)^s`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitPoint {
    coords: Vec<f64>,
}

impl UnitPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if let Some(&c) = coords.iter().find(|c| !(0.0..1.0).contains(*c)) {
            return Err(Error::Domain(format!(
                "unit point coordinate {c} outside [0, 1)"
            )));
        }
        Ok(Self { coords })
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }
}

/// Common interface of all scenario point sources.
pub trait SequenceSource {
    fn dimension(&self) -> usize;

    /// Writes the next point into `out` and advances the source.
    fn fill_next(&mut self, out: &mut [f64]) -> Result<()>;

    /// Positions the source so the next emitted point is point `index`.
    fn seek(&mut self, index: u64) -> Result<()>;

    fn next_point(&mut self) -> Result<UnitPoint> {
        let mut coords = vec![0.0; self.dimension()];
        self.fill_next(&mut coords)?;
        Ok(UnitPoint { coords })
    }
}

/// Concrete source selected by the simulation configuration.
#[derive(Debug, Clone)]
pub enum Source {
    Pseudo(PseudoRandomStream),
    Digital(NiederreiterSequence),
    Hybrid(HybridScheme),
}

impl SequenceSource for Source {
    fn dimension(&self) -> usize {
        match self {
            Source::Pseudo(s) => s.dimension(),
            Source::Digital(s) => s.dimension(),
            Source::Hybrid(s) => s.dimension(),
        }
    }

    fn fill_next(&mut self, out: &mut [f64]) -> Result<()> {
        match self {
            Source::Pseudo(s) => s.fill_next(out),
            Source::Digital(s) => s.fill_next(out),
            Source::Hybrid(s) => s.fill_next(out),
        }
    }

    fn seek(&mut self, index: u64) -> Result<()> {
        match self {
            Source::Pseudo(s) => s.seek(index),
            Source::Digital(s) => s.seek(index),
            Source::Hybrid(s) => s.seek(index),
        }
    }
}
