//! Leggett's bounds on pair averages,
//!
//! ```text
//! 1 − |av(A) − av(B)|  ≥  av(AB)  ≥  −1 + |av(A) + av(B)|
//! ```
//!
//! together with the ±1 identities they follow from, and sweeps that feed
//! quantum averages of the canonical states into the check.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canonical::{closed_form_correlation, CanonicalState, PairSetting};
use crate::error::{Error, Result};
use crate::qcore::{expectation, joint_expectation, observable_for, MeasurementSetting, Subsystem};
use crate::EPS;

/// Satisfaction tolerance for analytically exact inputs.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// `(av(A), av(B), av(AB))`, each in `[−1, 1]` up to [`EPS`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AverageTriple {
    pub av_a: f64,
    pub av_b: f64,
    pub av_ab: f64,
}

impl AverageTriple {
    pub fn new(av_a: f64, av_b: f64, av_ab: f64) -> Result<Self> {
        for (name, v) in [("av_a", av_a), ("av_b", av_b), ("av_ab", av_ab)] {
            check_unit_range(name, v)?;
        }
        Ok(Self { av_a, av_b, av_ab })
    }
}

fn check_unit_range(name: &str, v: f64) -> Result<()> {
    if v.is_nan() || v.abs() > 1.0 + EPS {
        return Err(Error::Domain(format!("{name} = {v} is outside [-1, 1]")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub lower: f64,
    pub upper: f64,
    pub value: f64,
    pub margin_lower: f64,
    pub margin_upper: f64,
    pub satisfied: bool,
    pub tolerance: f64,
}

impl InequalityReport {
    pub fn min_margin(&self) -> f64 {
        self.margin_lower.min(self.margin_upper)
    }
}

/// `1 − |A − B| = AB = −1 + |A + B|` for `A, B ∈ {−1, +1}`, in integers.
pub fn pm_identity_check(a: i32, b: i32) -> Result<bool> {
    for v in [a, b] {
        if v != 1 && v != -1 {
            return Err(Error::Domain(format!("{v} is not ±1")));
        }
    }
    let product = a * b;
    Ok(1 - (a - b).abs() == product && product == -1 + (a + b).abs())
}

/// Returns `(lower, upper)`.
pub fn leggett_bounds(av_a: f64, av_b: f64) -> Result<(f64, f64)> {
    check_unit_range("av_a", av_a)?;
    check_unit_range("av_b", av_b)?;
    Ok((-1.0 + (av_a + av_b).abs(), 1.0 - (av_a - av_b).abs()))
}

pub fn leggett_check(t: &AverageTriple, tolerance: f64) -> Result<InequalityReport> {
    if tolerance.is_nan() || tolerance < 0.0 {
        return Err(Error::Domain(format!(
            "tolerance {tolerance} must be non-negative"
        )));
    }
    check_unit_range("av_ab", t.av_ab)?;
    let (lower, upper) = leggett_bounds(t.av_a, t.av_b)?;
    let margin_upper = upper - t.av_ab;
    let margin_lower = t.av_ab - lower;
    Ok(InequalityReport {
        lower,
        upper,
        value: t.av_ab,
        margin_lower,
        margin_upper,
        satisfied: margin_upper >= -tolerance && margin_lower >= -tolerance,
        tolerance,
    })
}

/// `1.5 ≥ (a·b)² ≥ −0.5` for two photon angles.
///
/// With vanishing single-side averages the Leggett check on `±½(2(a·b)² − 1)`
/// reduces to this; the equivalence is asserted on every call.
pub fn quadratic_form_check(theta_a: f64, theta_b: f64) -> bool {
    let c = (theta_a - theta_b).cos();
    let sq = c * c;
    let holds = (-0.5..=1.5).contains(&sq);
    let v = 0.5 * (2.0 * sq - 1.0);
    for value in [v, -v] {
        let report = leggett_check(
            &AverageTriple {
                av_a: 0.0,
                av_b: 0.0,
                av_ab: value,
            },
            DEFAULT_TOLERANCE,
        )
        .expect("|value| ≤ ½");
        assert_eq!(
            report.satisfied, holds,
            "quadratic form and Leggett check disagree"
        );
    }
    holds
}

/// One point of a relative-angle sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    /// Relative analyzer angle in `[0, 2π)`.
    pub delta: f64,
    pub av_a: f64,
    pub av_b: f64,
    /// Closed-form pair correlation.
    pub av_ab_paper: f64,
    /// Full-trace `Tr(ρ (O_a ⊗ O_b))`.
    pub av_ab_oracle: f64,
    pub report_paper: InequalityReport,
    pub report_oracle: InequalityReport,
}

impl SweepRow {
    pub fn satisfied(&self) -> bool {
        self.report_paper.satisfied && self.report_oracle.satisfied
    }
}

/// Settings at relative angle `delta`, with side B at `offset`.
///
/// Photon analyzers sit at `offset + delta` and `offset`. Spin analyzers
/// lie in the xz-plane at the same polar angles, so `a·b = cos delta`.
pub fn sweep_settings(kind: CanonicalState, delta: f64, offset: f64) -> PairSetting {
    if kind.is_photon() {
        PairSetting::photons(offset + delta, offset)
    } else {
        PairSetting {
            a: MeasurementSetting::bloch_spherical(offset + delta, 0.0),
            b: MeasurementSetting::bloch_spherical(offset, 0.0),
        }
    }
}

/// Evaluates one setting pair through the full density-matrix pipeline.
pub fn quantum_row(kind: CanonicalState, delta: f64, pair: &PairSetting) -> Result<SweepRow> {
    let rho = kind.density();
    let obs_a = observable_for(&pair.a)?;
    let obs_b = observable_for(&pair.b)?;
    let av_a = expectation(&rho.partial_trace(Subsystem::First)?, &obs_a)?;
    let av_b = expectation(&rho.partial_trace(Subsystem::Second)?, &obs_b)?;
    let av_ab_paper = closed_form_correlation(kind, pair)?;
    let av_ab_oracle = joint_expectation(&rho, &obs_a, &obs_b)?;
    let report_paper = leggett_check(
        &AverageTriple::new(av_a, av_b, av_ab_paper)?,
        DEFAULT_TOLERANCE,
    )?;
    let report_oracle = leggett_check(
        &AverageTriple::new(av_a, av_b, av_ab_oracle)?,
        DEFAULT_TOLERANCE,
    )?;
    Ok(SweepRow {
        delta,
        av_a,
        av_b,
        av_ab_paper,
        av_ab_oracle,
        report_paper,
        report_oracle,
    })
}

/// Sweeps `grid_points` relative angles `delta = 2πk/grid_points`.
pub fn quantum_sweep(kind: CanonicalState, grid_points: usize) -> Result<Vec<SweepRow>> {
    quantum_sweep_with_offset(kind, grid_points, 0.0)
}

pub fn quantum_sweep_with_offset(
    kind: CanonicalState,
    grid_points: usize,
    offset: f64,
) -> Result<Vec<SweepRow>> {
    let deltas = delta_grid(grid_points)?;
    deltas
        .into_par_iter()
        .map(|delta| quantum_row(kind, delta, &sweep_settings(kind, delta, offset)))
        .collect()
}

/// `n` uniformly spaced angles over `[0, 2π)`, starting at 0.
pub fn delta_grid(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "grid needs at least 2 points, got {n}"
        )));
    }
    Ok((0..n)
        .map(|k| {
            // exact at k = n/2 for even n
            if 2 * k == n {
                PI
            } else {
                TAU * k as f64 / n as f64
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn triple(a: f64, b: f64, ab: f64) -> AverageTriple {
        AverageTriple::new(a, b, ab).unwrap()
    }

    #[test]
    fn pm_identities_exhaustive() {
        for a in [-1, 1] {
            for b in [-1, 1] {
                assert!(pm_identity_check(a, b).unwrap(), "({a}, {b})");
            }
        }
        assert!(matches!(pm_identity_check(0, 1), Err(Error::Domain(_))));
        assert!(pm_identity_check(1, 2).is_err());
    }

    #[test]
    fn bounds_examples() {
        assert_eq!(leggett_bounds(0.0, 0.0).unwrap(), (-1.0, 1.0));
        assert_eq!(leggett_bounds(1.0, 1.0).unwrap(), (1.0, 1.0));
        // lower = −1 + |0| , upper = 1 − |1|
        assert_eq!(leggett_bounds(0.5, -0.5).unwrap(), (-1.0, 0.0));
        assert!(leggett_bounds(1.5, 0.0).is_err());
        assert!(leggett_bounds(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn constructed_violation() {
        let r = leggett_check(&triple(1.0, -1.0, 1.0), DEFAULT_TOLERANCE).unwrap();
        assert_eq!(r.upper, -1.0);
        assert_eq!(r.margin_upper, -2.0);
        assert!(!r.satisfied);
    }

    #[test]
    fn quantum_triples_pass() {
        for k in 0..100 {
            let delta = k as f64 * 0.0628;
            let c = delta.cos();
            let photon = 0.5 * (2.0 * c * c - 1.0);
            assert!(
                leggett_check(&triple(0.0, 0.0, photon), DEFAULT_TOLERANCE)
                    .unwrap()
                    .satisfied
            );
            assert!(
                leggett_check(&triple(0.0, 0.0, -c), DEFAULT_TOLERANCE)
                    .unwrap()
                    .satisfied
            );
        }
    }

    #[test]
    fn negative_tolerance_is_rejected() {
        assert!(leggett_check(&triple(0.0, 0.0, 0.0), -1.0).is_err());
        assert!(AverageTriple::new(0.0, 0.0, 1.1).is_err());
    }

    #[test]
    fn quadratic_form_examples() {
        assert!(quadratic_form_check(0.0, 0.0));
        assert!(quadratic_form_check(std::f64::consts::FRAC_PI_2, 0.0));
    }

    #[test]
    fn sweep_grid_sizes() {
        assert!(quantum_sweep(CanonicalState::PsiPlus, 1).is_err());
        let rows = quantum_sweep(CanonicalState::PsiMinus, 2).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].delta, 0.0);
        assert_eq!(rows[1].delta, PI);
        for row in &rows {
            // −½(2cos²δ − 1) at δ ∈ {0, π}
            assert!((row.av_ab_paper + 0.5).abs() < EPS);
        }
    }

    #[test]
    fn sweep_rows_are_sorted() {
        let rows = quantum_sweep(CanonicalState::Singlet, 37).unwrap();
        assert!(rows.windows(2).all(|w| w[0].delta < w[1].delta));
        assert!(rows.iter().all(|r| (0.0..TAU).contains(&r.delta)));
        assert!((rows[0].av_ab_paper + 1.0).abs() < EPS);
    }

    proptest! {
        #[test]
        fn bounds_are_consistent(a in -1.0f64..=1.0, b in -1.0f64..=1.0) {
            let (lo, hi) = leggett_bounds(a, b).unwrap();
            prop_assert!(lo <= hi + 2.0 * EPS);
        }

        #[test]
        fn margins_shift_linearly(
            a in -1.0f64..=1.0,
            b in -1.0f64..=1.0,
            v in -0.5f64..=0.0,
            d in 0.0f64..=0.5,
        ) {
            let r0 = leggett_check(&triple(a, b, v), DEFAULT_TOLERANCE).unwrap();
            let r1 = leggett_check(&triple(a, b, v + d), DEFAULT_TOLERANCE).unwrap();
            prop_assert!(((r0.margin_upper - r1.margin_upper) - d).abs() <= 4.0 * f64::EPSILON);
            prop_assert!(((r1.margin_lower - r0.margin_lower) - d).abs() <= 4.0 * f64::EPSILON);
        }

        #[test]
        fn satisfied_iff_margins(a in -1.0f64..=1.0, b in -1.0f64..=1.0, v in -1.0f64..=1.0) {
            let r = leggett_check(&triple(a, b, v), 1e-9).unwrap();
            prop_assert_eq!(r.satisfied, r.margin_upper >= -1e-9 && r.margin_lower >= -1e-9);
        }
    }
}
