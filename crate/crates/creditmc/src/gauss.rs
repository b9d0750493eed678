//! Standard normal CDF/quantile and the Cholesky correlation step.
//!
//! Scenario points are uniform in the unit cube; the engine maps them to
//! standard normal vectors by inversion and applies the correlation
//! structure as `xi = W * z` where `W` is the lower Cholesky factor of the
//! asset correlation matrix.

use crate::error::{Error, Result};

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Largest f64 strictly below 1.
const ONE_MINUS_ULP: f64 = 1.0 - f64::EPSILON / 2.0;

/// Standard normal density.
pub fn std_normal_pdf(z: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * z * z).exp()
}

/// Standard normal CDF, accurate to better than 1e-12 absolute everywhere
/// and to near machine precision *relative* in the lower tail (needed for
/// quantile refinement). Output is clamped to the open interval (0, 1).
pub fn normal_cdf(z: f64) -> f64 {
    let p = if z <= 0.0 {
        0.5 * erfc(-z / SQRT_2)
    } else {
        1.0 - 0.5 * erfc(z / SQRT_2)
    };
    p.clamp(f64::MIN_POSITIVE, ONE_MINUS_ULP)
}

/// Inverse standard normal CDF.
///
/// Rational initial estimate refined by two Newton steps against
/// [`normal_cdf`]; absolute error stays below 1e-8 for
/// `u` in `[1e-300, 1 - 1e-16]`. The upper half is evaluated by symmetry
/// (`1 - u` is exact in f64 for `u >= 0.5`), so
/// `inverse_normal_cdf(1 - u) == -inverse_normal_cdf(u)` holds exactly.
pub fn inverse_normal_cdf(u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::Domain(format!(
            "inverse_normal_cdf requires 0 < u < 1, got {u}"
        )));
    }
    if u > 0.5 {
        Ok(-quantile_lower_half(1.0 - u))
    } else {
        Ok(quantile_lower_half(u))
    }
}

/// Clamp a unit-cube coordinate ahead of inversion.
///
/// The first point of a digital sequence is the origin; coordinate 0 is
/// mapped to half the smallest representable point spacing,
/// `2^-(bit_precision + 1)`, which keeps the ordering of the sequence
/// while avoiding the `u = 0` singularity.
pub fn clamp_unit_sample(u: f64, bit_precision: u32) -> f64 {
    let floor = 2f64.powi(-(bit_precision as i32 + 1));
    if u < floor {
        floor
    } else {
        u.min(ONE_MINUS_ULP)
    }
}

/// Quantile on (0, 0.5]; result is <= 0.
fn quantile_lower_half(u: f64) -> f64 {
    debug_assert!(u > 0.0 && u <= 0.5);
    if u == 0.5 {
        return 0.0;
    }
    let mut z = acklam_estimate(u);
    // Two Newton steps; the CDF is relatively accurate in the lower tail,
    // so the correction stays meaningful even at u ~ 1e-300.
    for _ in 0..2 {
        let density = std_normal_pdf(z);
        if density < f64::MIN_POSITIVE {
            break;
        }
        let residual = 0.5 * erfc(-z / SQRT_2) - u;
        z -= residual / density;
    }
    z
}

/// Peter Acklam's rational approximation to the normal quantile
/// (relative error < 1.15e-9 over the full open interval).
fn acklam_estimate(p: f64) -> f64 {
    const A: [f64; 6] = [
        -39.696_830_286_653_76,
        220.946_098_424_520_98,
        -275.928_510_446_968_84,
        138.357_751_867_269_03,
        -30.664_798_066_147_16,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -54.476_098_798_224_06,
        161.585_836_858_040_94,
        -155.698_979_859_886_66,
        66.801_311_887_719_72,
        -13.280_681_552_885_72,
    ];
    const C: [f64; 6] = [
        -0.007_784_894_002_430_293,
        -0.322_396_458_041_136_5,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        0.007_784_695_709_041_462,
        0.322_467_129_070_039_8,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.024_25;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else {
        // Central region; callers only pass p <= 0.5.
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    }
}

/// Complementary error function after W. J. Cody's rational approximations
/// (SPECFUN `calerf`); relative accuracy ~1e-16 down to the underflow limit.
pub fn erfc(x: f64) -> f64 {
    const THRESH: f64 = 0.468_75;
    const XBIG: f64 = 26.543;
    const SQRPI: f64 = 0.564_189_583_547_756_3;

    let y = x.abs();
    let result = if y <= THRESH {
        return 1.0 - erf_small(x);
    } else if y <= 4.0 {
        const C: [f64; 9] = [
            5.641_884_969_886_701e-1,
            8.883_149_794_388_375,
            6.611_919_063_714_163e1,
            2.986_351_381_974_001e2,
            8.819_522_212_417_69e2,
            1.712_047_612_634_070_6e3,
            2.051_078_377_826_071_5e3,
            1.230_339_354_797_997_2e3,
            2.153_115_354_744_038_5e-8,
        ];
        const D: [f64; 8] = [
            1.574_492_611_070_983_5e1,
            1.176_939_508_913_125e2,
            5.371_811_018_620_099e2,
            1.621_389_574_566_690_2e3,
            3.290_799_235_733_459_7e3,
            4.362_619_090_143_247e3,
            3.439_367_674_143_721_6e3,
            1.230_339_354_803_749_4e3,
        ];
        let mut xnum = C[8] * y;
        let mut xden = y;
        for i in 0..7 {
            xnum = (xnum + C[i]) * y;
            xden = (xden + D[i]) * y;
        }
        scale_by_exp((xnum + C[7]) / (xden + D[7]), y)
    } else if y < XBIG {
        const P: [f64; 6] = [
            3.053_266_349_612_323_4e-1,
            3.603_448_999_498_044_4e-1,
            1.257_817_261_112_292_5e-1,
            1.608_378_514_874_228e-2,
            6.587_491_615_298_378e-4,
            1.631_538_713_730_209_8e-2,
        ];
        const Q: [f64; 5] = [
            2.568_520_192_289_822,
            1.872_952_849_923_460_4,
            5.279_051_029_514_285e-1,
            6.051_834_131_244_132e-2,
            2.335_204_976_268_691_8e-3,
        ];
        let z = 1.0 / (y * y);
        let mut xnum = P[5] * z;
        let mut xden = z;
        for i in 0..4 {
            xnum = (xnum + P[i]) * z;
            xden = (xden + Q[i]) * z;
        }
        let r = z * (xnum + P[4]) / (xden + Q[4]);
        scale_by_exp((SQRPI - r) / y, y)
    } else {
        0.0
    };

    if x < 0.0 {
        2.0 - result
    } else {
        result
    }
}

/// erf on |x| <= 0.46875 (central rational approximation).
fn erf_small(x: f64) -> f64 {
    const A: [f64; 5] = [
        3.161_123_743_870_565_6,
        1.138_641_541_510_501_6e2,
        3.774_852_376_853_02e2,
        3.209_377_589_138_469_5e3,
        1.857_777_061_846_031_5e-1,
    ];
    const B: [f64; 4] = [
        2.360_129_095_234_412_1e1,
        2.440_246_379_344_441_7e2,
        1.282_616_526_077_372_3e3,
        2.844_236_833_439_171e3,
    ];
    let z = x * x;
    let mut xnum = A[4] * z;
    let mut xden = z;
    for i in 0..3 {
        xnum = (xnum + A[i]) * z;
        xden = (xden + B[i]) * z;
    }
    x * (xnum + A[3]) / (xden + B[3])
}

/// Multiply by exp(-y^2) with the split-argument trick that preserves
/// relative accuracy for large y.
fn scale_by_exp(value: f64, y: f64) -> f64 {
    let ysq = (y * 16.0).trunc() / 16.0;
    let del = (y - ysq) * (y + ysq);
    (-ysq * ysq).exp() * (-del).exp() * value
}

/// Asset-value correlation matrix (symmetric, unit diagonal).
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl CorrelationMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0.0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1.0;
        }
        Self { dim, entries }
    }

    /// Validates symmetry, unit diagonal and |rho| <= 1; positive
    /// semi-definiteness is checked later during factorization.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::Validation("correlation matrix is empty".into()));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Validation(format!(
                    "correlation row {i} has {} entries, expected {dim}",
                    row.len()
                )));
            }
            entries.extend_from_slice(row);
        }
        let m = Self { dim, entries };
        for i in 0..dim {
            if (m.get(i, i) - 1.0).abs() > 1e-12 {
                return Err(Error::Validation(format!(
                    "correlation diagonal entry {i} is {} (must be 1)",
                    m.get(i, i)
                )));
            }
            for j in 0..i {
                let a = m.get(i, j);
                let b = m.get(j, i);
                if (a - b).abs() > 1e-12 {
                    return Err(Error::Validation(format!(
                        "correlation matrix not symmetric at ({i},{j}): {a} vs {b}"
                    )));
                }
                if a.abs() > 1.0 + 1e-12 {
                    return Err(Error::Validation(format!(
                        "correlation entry ({i},{j}) = {a} outside [-1, 1]"
                    )));
                }
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    /// Loads a square numeric CSV whose header row carries the credit
    /// identifiers.
    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        Self::from_csv_reader(std::fs::File::open(path)?)
    }

    pub fn from_csv_reader<R: std::io::Read>(reader: R) -> Result<Self> {
        let mut csv = csv::Reader::from_reader(reader);
        let dim = csv.headers()?.len();
        let mut rows = Vec::with_capacity(dim);
        for record in csv.records() {
            let record = record?;
            let row: Vec<f64> = record
                .iter()
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| Error::Validation(format!("bad correlation entry '{s}'")))
                })
                .collect::<Result<_>>()?;
            rows.push(row);
        }
        if rows.len() != dim {
            return Err(Error::Validation(format!(
                "correlation CSV is {}x{dim}, expected square",
                rows.len()
            )));
        }
        Self::from_rows(rows)
    }

    pub fn is_identity(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                let want = if i == j { 1.0 } else { 0.0 };
                self.get(i, j) == want
            })
        })
    }
}

/// Lower-triangular Cholesky factor W with A = W * W^T.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    dim: usize,
    lower: Vec<f64>,
}

impl CholeskyFactor {
    pub fn identity(dim: usize) -> Self {
        let mut lower = vec![0.0; dim * dim];
        for i in 0..dim {
            lower[i * dim + i] = 1.0;
        }
        Self { dim, lower }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.lower[i * self.dim + j]
    }
}

/// Cholesky factorization tolerating pivots down to -1e-12 (rounding in
/// user-supplied matrices); a more negative pivot is a PSD failure and
/// reports the offending index.
pub fn cholesky(a: &CorrelationMatrix) -> Result<CholeskyFactor> {
    const PIVOT_TOL: f64 = -1e-12;
    let n = a.dim();
    let mut lower = vec![0.0; n * n];
    for j in 0..n {
        let mut d = a.get(j, j);
        for k in 0..j {
            d -= lower[j * n + k] * lower[j * n + k];
        }
        if d < PIVOT_TOL {
            return Err(Error::NotPositiveSemiDefinite { pivot: j });
        }
        let ljj = d.max(0.0).sqrt();
        lower[j * n + j] = ljj;
        for i in (j + 1)..n {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= lower[i * n + k] * lower[j * n + k];
            }
            // A zero pivot on a PSD matrix forces the whole column to zero.
            lower[i * n + j] = if ljj > 0.0 { s / ljj } else { 0.0 };
        }
    }
    Ok(CholeskyFactor { dim: n, lower })
}

/// xi = W * z.
pub fn correlate(w: &CholeskyFactor, z: &[f64]) -> Result<Vec<f64>> {
    let mut out = vec![0.0; z.len()];
    correlate_into(w, z, &mut out)?;
    Ok(out)
}

/// xi = W * z written into a caller-provided buffer.
pub fn correlate_into(w: &CholeskyFactor, z: &[f64], out: &mut [f64]) -> Result<()> {
    let n = w.dim();
    if z.len() != n || out.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: z.len(),
        });
    }
    for (i, slot) in out.iter_mut().enumerate() {
        let row = &w.lower[i * n..i * n + i + 1];
        *slot = row.iter().zip(z).map(|(l, zj)| l * zj).sum();
    }
    Ok(())
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_of_half_is_zero() {
        assert_eq!(inverse_normal_cdf(0.5).unwrap(), 0.0);
    }

    #[test]
    fn quantile_matches_reference_point() {
        let z = inverse_normal_cdf(0.975).unwrap();
        assert!((z - 1.959_963_98).abs() <= 1e-8, "got {z}");
    }

    #[test]
    fn quantile_symmetry() {
        for u in [0.01, 0.1, 0.3] {
            let lo = inverse_normal_cdf(u).unwrap();
            let hi = inverse_normal_cdf(1.0 - u).unwrap();
            assert!((lo + hi).abs() <= 1e-12, "u={u}: {lo} vs {hi}");
        }
    }

    #[test]
    fn quantile_rejects_out_of_domain() {
        for u in [0.0, 1.0, -0.5, 1.5, f64::NAN] {
            assert!(inverse_normal_cdf(u).is_err(), "u={u} should be rejected");
        }
    }

    #[test]
    fn quantile_matches_bisection_oracle() {
        let grid = [
            1e-300,
            1e-100,
            1e-30,
            1e-16,
            1e-10,
            1e-6,
            1e-4,
            0.001,
            0.01,
            0.024,
            0.025,
            0.05,
            0.1,
            0.25,
            0.4,
            0.5,
            0.6,
            0.75,
            0.9,
            0.95,
            0.975,
            0.99,
            0.999,
            1.0 - 1e-6,
            1.0 - 1e-10,
            1.0 - 1e-16,
        ];
        for &u in &grid {
            let z = inverse_normal_cdf(u).unwrap();
            let z_ref = oracle::quantile_by_bisection(u);
            assert!(
                (z - z_ref).abs() <= 1e-8,
                "u={u}: got {z}, oracle {z_ref}, diff {}",
                (z - z_ref).abs()
            );
        }
    }

    #[test]
    fn quantile_is_strictly_increasing() {
        let n = 10_000;
        let mut prev = f64::NEG_INFINITY;
        for i in 1..=n {
            let u = i as f64 / (n as f64 + 1.0);
            let z = inverse_normal_cdf(u).unwrap();
            assert!(z > prev, "not increasing at u={u}");
            prev = z;
        }
    }

    #[test]
    fn cdf_of_zero_is_half() {
        assert_eq!(normal_cdf(0.0), 0.5);
    }

    #[test]
    fn cdf_matches_oracle() {
        let mut z = -37.0;
        while z <= 8.0 {
            let got = normal_cdf(z);
            let want = oracle::normal_cdf(z);
            assert!(
                (got - want).abs() <= 1e-12,
                "z={z}: got {got}, oracle {want}"
            );
            z += 0.37;
        }
    }

    #[test]
    fn cdf_reference_point() {
        assert!((normal_cdf(1.959_963_98) - 0.975).abs() <= 1e-8);
    }

    #[test]
    fn cdf_quantile_round_trip() {
        for i in 1..200 {
            let u = i as f64 / 200.0;
            let back = normal_cdf(inverse_normal_cdf(u).unwrap());
            assert!((back - u).abs() <= 1e-8, "u={u} -> {back}");
        }
    }

    #[test]
    fn clamp_maps_zero_to_half_spacing() {
        let floor = clamp_unit_sample(0.0, 52);
        assert_eq!(floor, 2f64.powi(-53));
        assert_eq!(clamp_unit_sample(0.25, 52), 0.25);
        assert!(clamp_unit_sample(1.0, 52) < 1.0);
    }

    #[test]
    fn cholesky_of_identity_is_identity() {
        let a = CorrelationMatrix::identity(4);
        let w = cholesky(&a).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert_eq!(w.get(i, j), want);
            }
        }
    }

    #[test]
    fn cholesky_two_by_two_closed_form() {
        let a = CorrelationMatrix::from_rows(vec![vec![1.0, 0.5], vec![0.5, 1.0]]).unwrap();
        let w = cholesky(&a).unwrap();
        assert!((w.get(0, 0) - 1.0).abs() < 1e-15);
        assert_eq!(w.get(0, 1), 0.0);
        assert!((w.get(1, 0) - 0.5).abs() < 1e-15);
        assert!((w.get(1, 1) - 0.75f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn cholesky_reconstructs_random_spd_matrix() {
        // Build a random SPD correlation matrix as normalized B * B^T.
        let n = 10;
        let mut state = 0x9e37_79b9_7f4a_7c15u64;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let b: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| next()).collect()).collect();
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                a[i][j] = (0..n).map(|k| b[i][k] * b[j][k]).sum();
            }
        }
        let d: Vec<f64> = (0..n).map(|i| a[i][i].sqrt()).collect();
        for (i, row) in a.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell /= d[i] * d[j];
            }
        }
        let m = CorrelationMatrix::from_rows(a.clone()).unwrap();
        let w = cholesky(&m).unwrap();
        for (i, row) in a.iter().enumerate() {
            for (j, &want) in row.iter().enumerate() {
                let rebuilt: f64 = (0..n).map(|k| w.get(i, k) * w.get(j, k)).sum();
                assert!(
                    (rebuilt - want).abs() <= 1e-10,
                    "entry ({i},{j}): {rebuilt} vs {want}"
                );
            }
        }
    }

    #[test]
    fn cholesky_rejects_indefinite_matrix() {
        // rho = 1 off one pair, -1 off another makes this indefinite.
        let a = CorrelationMatrix::from_rows(vec![
            vec![1.0, 0.9, -0.9],
            vec![0.9, 1.0, 0.9],
            vec![-0.9, 0.9, 1.0],
        ])
        .unwrap();
        match cholesky(&a) {
            Err(Error::NotPositiveSemiDefinite { pivot }) => assert_eq!(pivot, 2),
            other => panic!("expected PSD failure, got {other:?}"),
        }
    }

    #[test]
    fn correlate_identity_passes_through() {
        let w = CholeskyFactor::identity(3);
        let z = vec![0.3, -1.2, 2.5];
        assert_eq!(correlate(&w, &z).unwrap(), z);
    }

    #[test]
    fn correlate_two_by_two() {
        let a = CorrelationMatrix::from_rows(vec![vec![1.0, 0.5], vec![0.5, 1.0]]).unwrap();
        let w = cholesky(&a).unwrap();
        let xi = correlate(&w, &[1.0, 0.0]).unwrap();
        assert!((xi[0] - 1.0).abs() < 1e-15);
        assert!((xi[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn correlate_rejects_dimension_mismatch() {
        let w = CholeskyFactor::identity(3);
        assert!(correlate(&w, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn correlated_sample_reproduces_rho() {
        use crate::seq::{PseudoRandomStream, SequenceSource};

        let a = CorrelationMatrix::from_rows(vec![vec![1.0, 0.5], vec![0.5, 1.0]]).unwrap();
        let w = cholesky(&a).unwrap();
        let mut stream = PseudoRandomStream::new(5, 2).unwrap();
        let n = 100_000;
        let mut sum = 0.0;
        let mut buf = [0.0; 2];
        let mut xi = [0.0; 2];
        for _ in 0..n {
            stream.fill_next(&mut buf).unwrap();
            let z = [
                inverse_normal_cdf(clamp_unit_sample(buf[0], 52)).unwrap(),
                inverse_normal_cdf(clamp_unit_sample(buf[1], 52)).unwrap(),
            ];
            correlate_into(&w, &z, &mut xi).unwrap();
            sum += xi[0] * xi[1];
        }
        let sample_cov = sum / n as f64;
        assert!(
            (sample_cov - 0.5).abs() <= 0.02,
            "sample covariance {sample_cov}"
        );
    }

    #[test]
    fn inverse_transformed_draws_have_standard_moments() {
        use crate::seq::{PseudoRandomStream, SequenceSource};

        let mut stream = PseudoRandomStream::new(17, 1).unwrap();
        let n = 100_000;
        let mut buf = [0.0];
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..n {
            stream.fill_next(&mut buf).unwrap();
            let z = inverse_normal_cdf(clamp_unit_sample(buf[0], 52)).unwrap();
            sum += z;
            sum_sq += z * z;
        }
        let mean = sum / n as f64;
        let variance = sum_sq / n as f64 - mean * mean;
        assert!(mean.abs() <= 0.01, "sample mean {mean}");
        assert!((variance - 1.0).abs() <= 0.02, "sample variance {variance}");
    }

    #[test]
    fn digital_sequence_inversion_tracks_the_normal_cdf() {
        use crate::seq::{NiederreiterSequence, SequenceSource};

        // Kolmogorov distance of the transformed first 2^10 digital points
        // against Phi stays below 2^-9.
        let mut seq = NiederreiterSequence::new(1, 52).unwrap();
        let n = 1 << 10;
        let mut zs: Vec<f64> = (0..n)
            .map(|_| {
                let u = seq.next_point().unwrap().coords()[0];
                inverse_normal_cdf(clamp_unit_sample(u, 52)).unwrap()
            })
            .collect();
        zs.sort_by(f64::total_cmp);
        let mut ks: f64 = 0.0;
        for (i, &z) in zs.iter().enumerate() {
            let phi = normal_cdf(z);
            let below = i as f64 / n as f64;
            let above = (i + 1) as f64 / n as f64;
            ks = ks.max((phi - below).abs()).max((phi - above).abs());
        }
        assert!(ks <= 2f64.powi(-9), "Kolmogorov distance {ks}");
    }
}
