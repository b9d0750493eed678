//! Base-2 digital sequence built from Niederreiter generator matrices.
//!
//! Dimension k is driven by the k-th monic irreducible polynomial over
//! GF(2) (ordered by degree, then by coefficient value; the table ships as
//! a data file). Row j of the matrix for polynomial p of degree e holds
//! the Laurent coefficients of x^(e-1-u) / p(x)^(q+1) with
//! j - 1 = q*e + u, which makes every matrix unit upper-triangular; in
//! particular dimension 1 (p = x) is the identity and reproduces the
//! base-2 radical-inverse sequence.

use std::sync::OnceLock;

use super::SequenceSource;
use crate::error::{Error, Result};

const BUNDLED_POLYNOMIALS: &str = include_str!("../../data/niederreiter_polynomials.txt");

/// Monic irreducible polynomials over GF(2), one per sequence dimension.
#[derive(Debug, Clone)]
pub struct PolynomialTable {
    /// (degree, coefficient bits), ordered by degree then value.
    entries: Vec<(u32, u64)>,
}

impl PolynomialTable {
    /// The table bundled with the crate (dimensions 1..=1377).
    pub fn bundled() -> &'static PolynomialTable {
        static TABLE: OnceLock<PolynomialTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            PolynomialTable::parse(BUNDLED_POLYNOMIALS)
                .expect("bundled polynomial table must parse")
        })
    }

    /// Parses the `<degree> <coefficient bits>` line format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (deg, bits) = match (parts.next(), parts.next()) {
                (Some(d), Some(b)) => (d, b),
                _ => {
                    return Err(Error::Validation(format!(
                        "polynomial table line {}: expected '<degree> <bits>'",
                        lineno + 1
                    )))
                }
            };
            let degree: u32 = deg.parse().map_err(|_| {
                Error::Validation(format!("polynomial table line {}: bad degree", lineno + 1))
            })?;
            let bits: u64 = bits.parse().map_err(|_| {
                Error::Validation(format!("polynomial table line {}: bad bits", lineno + 1))
            })?;
            if bits >> degree != 1 {
                return Err(Error::Validation(format!(
                    "polynomial table line {}: {bits} is not monic of degree {degree}",
                    lineno + 1
                )));
            }
            entries.push((degree, bits));
        }
        if entries.is_empty() {
            return Err(Error::Validation("polynomial table is empty".into()));
        }
        Ok(Self { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<(u32, u64)> {
        self.entries.get(index).copied()
    }
}

/// One binary generator matrix, stored column-major: bit `m-1-j` of
/// `cols[r]` is the entry in row `j` (0-based), column `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorMatrix {
    bit_precision: u32,
    cols: Vec<u64>,
}

impl GeneratorMatrix {
    pub fn bit_precision(&self) -> u32 {
        self.bit_precision
    }

    /// Entry in row `row`, column `col` (both 0-based).
    pub fn entry(&self, row: u32, col: u32) -> bool {
        (self.cols[col as usize] >> (self.bit_precision - 1 - row)) & 1 == 1
    }

    pub fn is_identity(&self) -> bool {
        (0..self.bit_precision)
            .all(|r| self.cols[r as usize] == 1u64 << (self.bit_precision - 1 - r))
    }

    /// Rank check by Gaussian elimination over GF(2).
    pub fn is_nonsingular(&self) -> bool {
        let mut pivots = [0u64; 64];
        for &col in &self.cols {
            let mut v = col;
            loop {
                if v == 0 {
                    return false;
                }
                let high = 63 - v.leading_zeros() as usize;
                if pivots[high] == 0 {
                    pivots[high] = v;
                    break;
                }
                v ^= pivots[high];
            }
        }
        true
    }
}

/// Carry-less polynomial product over GF(2).
fn gf2_mul(a: u128, b: u128) -> u128 {
    let mut acc = 0u128;
    let mut a = a;
    let mut shift = 0;
    while a != 0 {
        let tz = a.trailing_zeros();
        shift += tz;
        acc ^= b << shift;
        a >>= tz + 1;
        shift += 1;
    }
    acc
}

/// Builds the generator matrices for `dimension` dimensions at the given
/// bit precision (valid range 16..=64). Deterministic for fixed inputs.
pub fn build_generator_matrices(
    dimension: usize,
    bit_precision: u32,
) -> Result<Vec<GeneratorMatrix>> {
    build_with_table(PolynomialTable::bundled(), dimension, bit_precision)
}

pub(crate) fn build_with_table(
    table: &PolynomialTable,
    dimension: usize,
    bit_precision: u32,
) -> Result<Vec<GeneratorMatrix>> {
    if dimension == 0 {
        return Err(Error::Domain("dimension must be >= 1".into()));
    }
    if !(16..=64).contains(&bit_precision) {
        return Err(Error::Domain(format!(
            "bit precision {bit_precision} outside [16, 64]"
        )));
    }
    if dimension > table.len() {
        return Err(Error::Capacity {
            requested: dimension,
            available: table.len(),
        });
    }
    Ok((0..dimension)
        .map(|d| {
            let (degree, bits) = table.get(d).expect("bounds checked above");
            build_matrix(bits, degree, bit_precision)
        })
        .collect())
}

fn build_matrix(poly_bits: u64, degree: u32, m: u32) -> GeneratorMatrix {
    // Powers of the polynomial, p^1 .. p^(q_max + 1).
    let q_max = (m - 1) / degree;
    let mut powers = Vec::with_capacity(q_max as usize + 2);
    powers.push(1u128);
    for i in 0..=q_max {
        powers.push(gf2_mul(powers[i as usize], poly_bits as u128));
    }

    let mut rows = Vec::with_capacity(m as usize);
    for j0 in 0..m {
        let q = j0 / degree;
        let u = j0 % degree;
        let den = powers[q as usize + 1];
        let den_deg = degree * (q + 1);
        // Formal Laurent division of x^(degree-1-u) by p^(q+1): column k of
        // row j0 is the coefficient of x^(-k-1).
        let mut rem: u128 = 1u128 << (degree - 1 - u);
        let mut row = 0u64;
        for k in 0..m {
            rem <<= 1;
            if (rem >> den_deg) & 1 == 1 {
                rem ^= den;
                row |= 1u64 << k;
            }
        }
        rows.push(row);
    }

    // Transpose to column-major for fast point evaluation.
    let cols = (0..m)
        .map(|r| {
            let mut col = 0u64;
            for (j0, &row) in rows.iter().enumerate() {
                if (row >> r) & 1 == 1 {
                    col |= 1u64 << (m - 1 - j0 as u32);
                }
            }
            col
        })
        .collect();
    GeneratorMatrix {
        bit_precision: m,
        cols,
    }
}

/// Digital low-discrepancy sequence in base 2.
#[derive(Debug, Clone)]
pub struct NiederreiterSequence {
    matrices: Vec<GeneratorMatrix>,
    bit_precision: u32,
    index: u64,
}

impl NiederreiterSequence {
    pub const DEFAULT_BIT_PRECISION: u32 = 52;

    pub fn new(dimension: usize, bit_precision: u32) -> Result<Self> {
        let matrices = build_generator_matrices(dimension, bit_precision)?;
        Ok(Self {
            matrices,
            bit_precision,
            index: 0,
        })
    }

    pub fn with_default_precision(dimension: usize) -> Result<Self> {
        Self::new(dimension, Self::DEFAULT_BIT_PRECISION)
    }

    pub fn bit_precision(&self) -> u32 {
        self.bit_precision
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn matrices(&self) -> &[GeneratorMatrix] {
        &self.matrices
    }

    fn max_index(&self) -> u64 {
        if self.bit_precision >= 64 {
            u64::MAX
        } else {
            (1u64 << self.bit_precision) - 1
        }
    }

    /// Digits of the point at `index` in dimension `dim` (0-based), as the
    /// top `bit_precision` bits of the binary expansion.
    fn point_bits(&self, index: u64, dim: usize) -> u64 {
        let cols = &self.matrices[dim].cols;
        let mut bits = 0u64;
        let mut n = index;
        while n != 0 {
            let r = n.trailing_zeros() as usize;
            bits ^= cols[r];
            n &= n - 1;
        }
        bits
    }

    fn coordinate(&self, index: u64, dim: usize) -> f64 {
        let bits = self.point_bits(index, dim);
        // f64 carries 53 mantissa bits; truncate deeper digits rather than
        // rounding up into 1.0.
        if self.bit_precision > 53 {
            (bits >> (self.bit_precision - 53)) as f64 * 2f64.powi(-53)
        } else {
            bits as f64 * 2f64.powi(-(self.bit_precision as i32))
        }
    }
}

impl SequenceSource for NiederreiterSequence {
    fn dimension(&self) -> usize {
        self.matrices.len()
    }

    fn fill_next(&mut self, out: &mut [f64]) -> Result<()> {
        if out.len() != self.matrices.len() {
            return Err(Error::DimensionMismatch {
                expected: self.matrices.len(),
                got: out.len(),
            });
        }
        if self.index > self.max_index() {
            return Err(Error::IndexOverflow {
                index: self.index,
                bit_precision: self.bit_precision,
            });
        }
        let n = self.index;
        for (dim, slot) in out.iter_mut().enumerate() {
            *slot = self.coordinate(n, dim);
        }
        self.index += 1;
        Ok(())
    }

    fn seek(&mut self, index: u64) -> Result<()> {
        if index > self.max_index() {
            return Err(Error::IndexOverflow {
                index,
                bit_precision: self.bit_precision,
            });
        }
        self.index = index;
        Ok(())
    }
}
