//! Gaussian rating thresholds: cut points Z on the normalized asset-return
//! line such that the band between consecutive cuts carries exactly the
//! migration probability of the corresponding year-end rating.

use super::{Rating, TransitionMatrix};
use crate::error::Result;
use crate::gauss::inverse_normal_cdf;

/// Year-end states from worst to best, the order in which probability mass
/// accumulates along the real line.
const OUTCOMES_ASCENDING: [Rating; 8] = [
    Rating::D,
    Rating::CCC,
    Rating::B,
    Rating::BB,
    Rating::BBB,
    Rating::A,
    Rating::AA,
    Rating::AAA,
];

/// Cut points for one initial rating: `cuts[k]` is the upper bound of the
/// band of `OUTCOMES_ASCENDING[k]`, with -inf/+inf sentinels for empty and
/// exhausted cumulative mass. Monotone non-decreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdRow {
    cuts: [f64; 7],
}

impl ThresholdRow {
    /// Upper cut of the band for `outcome` (`None` for AAA, which is
    /// unbounded above).
    pub fn cut(&self, outcome: Rating) -> Option<f64> {
        OUTCOMES_ASCENDING
            .iter()
            .position(|&r| r == outcome)
            .filter(|&k| k < 7)
            .map(|k| self.cuts[k])
    }

    pub fn cuts(&self) -> &[f64; 7] {
        &self.cuts
    }
}

/// Threshold rows for the seven initial ratings.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdTable {
    rows: [ThresholdRow; 7],
}

impl ThresholdTable {
    pub fn row(&self, initial: Rating) -> &ThresholdRow {
        &self.rows[initial.index()]
    }
}

/// Builds the threshold table from a validated transition matrix:
/// Z for outcome Y is the normal quantile of the cumulative migration
/// probability from D up through Y.
pub fn compute_thresholds(transitions: &TransitionMatrix) -> Result<ThresholdTable> {
    let mut rows: Vec<ThresholdRow> = Vec::with_capacity(7);
    for initial in Rating::INITIAL {
        let mut cuts = [0.0; 7];
        let mut cumulative = 0.0;
        for (k, &outcome) in OUTCOMES_ASCENDING.iter().take(7).enumerate() {
            cumulative += transitions.probability(initial, outcome);
            // Sentinels are decided from exact zero masses, not from the
            // rounded cumulative sum.
            let mass_above_is_zero = OUTCOMES_ASCENDING[k + 1..]
                .iter()
                .all(|&y| transitions.probability(initial, y) == 0.0);
            cuts[k] = if cumulative == 0.0 {
                f64::NEG_INFINITY
            } else if mass_above_is_zero {
                f64::INFINITY
            } else {
                inverse_normal_cdf(cumulative)?
            };
        }
        rows.push(ThresholdRow { cuts });
    }
    let rows: [ThresholdRow; 7] = rows.try_into().expect("seven initial ratings");
    Ok(ThresholdTable { rows })
}

/// Maps a normalized asset return to the year-end rating via the half-open
/// bands of the threshold row: z <= Z_D is default, Z_D < z <= Z_CCC is
/// CCC, and so on; anything above Z_AA is AAA.
pub fn rating_from_z(z: f64, row: &ThresholdRow) -> Rating {
    for (k, &cut) in row.cuts.iter().enumerate() {
        if z <= cut {
            return OUTCOMES_ASCENDING[k];
        }
    }
    Rating::AAA
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::{normal_cdf, oracle};

    #[test]
    fn aaa_row_has_minus_infinity_default_cut() {
        let table = compute_thresholds(TransitionMatrix::bundled()).unwrap();
        let row = table.row(Rating::AAA);
        // AAA has zero mass on D, CCC and B.
        assert_eq!(row.cut(Rating::D), Some(f64::NEG_INFINITY));
        assert_eq!(row.cut(Rating::CCC), Some(f64::NEG_INFINITY));
        assert_eq!(row.cut(Rating::B), Some(f64::NEG_INFINITY));
        assert!(row.cut(Rating::BB).unwrap().is_finite());
        assert_eq!(row.cut(Rating::AAA), None);
    }

    #[test]
    fn bb_default_cut_matches_quantile_oracle() {
        let table = compute_thresholds(TransitionMatrix::bundled()).unwrap();
        let z = table.row(Rating::BB).cut(Rating::D).unwrap();
        let p = TransitionMatrix::bundled().probability(Rating::BB, Rating::D);
        let z_ref = oracle::quantile_by_bisection(p);
        assert!((z - z_ref).abs() < 1e-8, "{z} vs {z_ref}");
        assert!((z - (-2.304)).abs() < 2e-3, "{z}");
    }

    #[test]
    fn exhausted_mass_gives_plus_infinity_cut() {
        // Row B has zero printed mass on AAA, so the AA cut absorbs all
        // remaining probability.
        let table = compute_thresholds(TransitionMatrix::bundled()).unwrap();
        assert_eq!(table.row(Rating::B).cut(Rating::AA), Some(f64::INFINITY));
    }

    #[test]
    fn rows_are_monotone_non_decreasing() {
        let table = compute_thresholds(TransitionMatrix::bundled()).unwrap();
        for initial in Rating::INITIAL {
            let cuts = table.row(initial).cuts();
            for k in 1..cuts.len() {
                assert!(
                    cuts[k] >= cuts[k - 1],
                    "row {initial}: cut {k} decreases ({} -> {})",
                    cuts[k - 1],
                    cuts[k]
                );
            }
        }
    }

    #[test]
    fn band_masses_reproduce_the_transition_probabilities() {
        let transitions = TransitionMatrix::bundled();
        let table = compute_thresholds(transitions).unwrap();
        for initial in Rating::INITIAL {
            let cuts = table.row(initial).cuts();
            let mut lower_cdf = 0.0;
            for (k, &outcome) in OUTCOMES_ASCENDING.iter().enumerate() {
                let upper_cdf = if k < 7 {
                    match cuts[k] {
                        c if c == f64::NEG_INFINITY => 0.0,
                        c if c == f64::INFINITY => 1.0,
                        c => normal_cdf(c),
                    }
                } else {
                    1.0
                };
                let band = upper_cdf - lower_cdf;
                let want = transitions.probability(initial, outcome);
                assert!(
                    (band - want).abs() <= 1e-6,
                    "{initial} -> {outcome}: band {band} vs probability {want}"
                );
                lower_cdf = upper_cdf;
            }
        }
    }

    #[test]
    fn extreme_z_maps_to_the_extreme_ratings() {
        let transitions = TransitionMatrix::bundled();
        let table = compute_thresholds(transitions).unwrap();
        assert_eq!(rating_from_z(-10.0, table.row(Rating::BB)), Rating::D);
        for initial in Rating::INITIAL {
            // A zero-probability top outcome is unreachable: its band is
            // empty because the cut below it is the +inf sentinel. In the
            // bundled table that affects only row B (AAA mass 0), where a
            // huge return lands in AA instead.
            let want = if transitions.probability(initial, Rating::AAA) > 0.0 {
                Rating::AAA
            } else {
                Rating::AA
            };
            assert_eq!(rating_from_z(10.0, table.row(initial)), want, "{initial}");
        }
        assert_eq!(rating_from_z(10.0, table.row(Rating::B)), Rating::AA);
    }

    #[test]
    fn zero_return_keeps_the_current_rating() {
        // Every diagonal mass in the bundled table is large enough that the
        // band containing z = 0 is the initial rating itself.
        let table = compute_thresholds(TransitionMatrix::bundled()).unwrap();
        for initial in Rating::INITIAL {
            assert_eq!(rating_from_z(0.0, table.row(initial)), initial);
        }
    }

    #[test]
    fn simulated_default_frequency_matches_row_b() {
        use crate::seq::{PseudoRandomStream, SequenceSource};

        let table = compute_thresholds(TransitionMatrix::bundled()).unwrap();
        let row = table.row(Rating::B);
        let mut stream = PseudoRandomStream::new(2024, 1).unwrap();
        let n = 1_000_000;
        let mut defaults = 0usize;
        let mut buf = [0.0];
        for _ in 0..n {
            stream.fill_next(&mut buf).unwrap();
            let z = inverse_normal_cdf(buf[0].max(f64::MIN_POSITIVE)).unwrap();
            if rating_from_z(z, row) == Rating::D {
                defaults += 1;
            }
        }
        let freq = 100.0 * defaults as f64 / n as f64;
        assert!(
            (freq - 5.20).abs() <= 0.07,
            "B default frequency {freq}% not within 5.20 +/- 0.07"
        );
    }

    #[test]
    fn stratified_quantiles_reproduce_every_band() {
        // Deterministic duality check: 10^6 stratified normal quantiles
        // through each row hit every band with frequency within 2e-3 of the
        // printed probability.
        let transitions = TransitionMatrix::bundled();
        let table = compute_thresholds(transitions).unwrap();
        let n = 1_000_000u32;
        for initial in Rating::INITIAL {
            let row = table.row(initial);
            let mut counts = [0u32; 8];
            for i in 0..n {
                let u = (i as f64 + 0.5) / n as f64;
                let z = inverse_normal_cdf(u).unwrap();
                counts[rating_from_z(z, row).index()] += 1;
            }
            for outcome in Rating::ALL {
                let freq = counts[outcome.index()] as f64 / n as f64;
                let want = transitions.percent(initial, outcome) / 100.0;
                assert!(
                    (freq - want).abs() <= 2e-3,
                    "{initial} -> {outcome}: {freq} vs {want}"
                );
            }
        }
    }
}
