//! The three entangled pair states and their closed-form statistics.
//!
//! Photon pairs come in two parity states built on linear polarizations
//! `|x⟩`, `|y⟩`; the spin pair is the singlet in the `|↑⟩`, `|↓⟩` basis.
//! Closed forms live next to density-matrix routes so the two can be
//! checked against each other.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{density_from_pure, DensityOperator, Ket, MeasurementSetting};
use crate::NORM_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CanonicalState {
    /// `(|xx⟩ + |yy⟩)/√2`, the positive-parity cascade pair.
    PsiPlus,
    /// `(|xy⟩ − |yx⟩)/√2`, the negative-parity annihilation pair.
    PsiMinus,
    /// `(|↑↓⟩ − |↓↑⟩)/√2`.
    Singlet,
}

impl CanonicalState {
    pub const ALL: [CanonicalState; 3] = [Self::PsiPlus, Self::PsiMinus, Self::Singlet];

    pub fn name(self) -> &'static str {
        match self {
            Self::PsiPlus => "psi-plus",
            Self::PsiMinus => "psi-minus",
            Self::Singlet => "singlet",
        }
    }

    pub fn is_photon(self) -> bool {
        !matches!(self, Self::Singlet)
    }

    /// Density operator of the pure state, tagged as a 2×2 bipartite system.
    pub fn density(self) -> DensityOperator {
        density_from_pure(&make_state(self)).expect("canonical states are normalized")
    }
}

impl fmt::Display for CanonicalState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CanonicalState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "psi-plus" | "psi+" => Ok(Self::PsiPlus),
            "psi-minus" | "psi-" => Ok(Self::PsiMinus),
            "singlet" => Ok(Self::Singlet),
            other => Err(Error::Domain(format!("unknown state '{other}'"))),
        }
    }
}

/// A pair of analyzer settings for sides A and B.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairSetting {
    pub a: MeasurementSetting,
    pub b: MeasurementSetting,
}

impl PairSetting {
    /// Fails unless both settings have the same kind.
    pub fn new(a: MeasurementSetting, b: MeasurementSetting) -> Result<Self> {
        a.dot(&b)?;
        Ok(Self { a, b })
    }

    pub fn photons(theta_a: f64, theta_b: f64) -> Self {
        Self {
            a: MeasurementSetting::photon(theta_a),
            b: MeasurementSetting::photon(theta_b),
        }
    }

    /// Checks that the settings suit `state`: photon angles for the parity
    /// states, Bloch vectors for the singlet.
    pub fn check_for(&self, state: CanonicalState) -> Result<()> {
        let expected = if state.is_photon() {
            "photon angle"
        } else {
            "Bloch vector"
        };
        for s in [&self.a, &self.b] {
            if s.kind_name() != expected {
                return Err(Error::Kind {
                    expected,
                    got: s.kind_name(),
                });
            }
        }
        Ok(())
    }
}

pub fn make_state(kind: CanonicalState) -> Ket {
    let r = FRAC_1_SQRT_2;
    let amps = match kind {
        CanonicalState::PsiPlus => [r, 0.0, 0.0, r],
        CanonicalState::PsiMinus | CanonicalState::Singlet => [0.0, r, -r, 0.0],
    };
    Ket::from_real(&amps)
        .and_then(|k| k.with_factors(2, 2))
        .expect("canonical amplitudes are normalized")
}

fn photon_cos(kind: CanonicalState, a: &MeasurementSetting, b: &MeasurementSetting) -> Result<f64> {
    if !kind.is_photon() {
        return Err(Error::Kind {
            expected: "photon parity state",
            got: "singlet",
        });
    }
    a.angle()?;
    b.angle()?;
    a.dot(b)
}

/// Coincidence probability that both photons pass their analyzers:
/// `½(a·b)²` for ψ₊ and `½(1 − (a·b)²)` for ψ₋.
pub fn joint_probability(
    kind: CanonicalState,
    a: &MeasurementSetting,
    b: &MeasurementSetting,
) -> Result<f64> {
    let c = photon_cos(kind, a, b)?;
    Ok(match kind {
        CanonicalState::PsiPlus => 0.5 * c * c,
        _ => 0.5 * (1.0 - c * c),
    })
}

/// Pair correlation in the closed form `±½(2(a·b)² − 1)`.
///
/// This equals `P₊(a,b) − P₋(a,b)` and is half the four-outcome trace
/// `Tr(ρ (O_a ⊗ O_b))`; both are exposed so callers can compare.
pub fn paper_pair_correlation(
    kind: CanonicalState,
    a: &MeasurementSetting,
    b: &MeasurementSetting,
) -> Result<f64> {
    let c = photon_cos(kind, a, b)?;
    let v = 0.5 * (2.0 * c * c - 1.0);
    Ok(match kind {
        CanonicalState::PsiPlus => v,
        _ => -v,
    })
}

/// Singlet spin correlation `−a·b`.
pub fn singlet_correlation(a: &MeasurementSetting, b: &MeasurementSetting) -> Result<f64> {
    for s in [a, b] {
        let d = s.direction()?;
        let norm = d.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Normalization(format!(
                "Bloch vector has norm {norm}"
            )));
        }
    }
    Ok(-a.dot(b)?)
}

/// Closed-form correlation for any canonical state and matching settings.
pub fn closed_form_correlation(kind: CanonicalState, pair: &PairSetting) -> Result<f64> {
    pair.check_for(kind)?;
    match kind {
        CanonicalState::Singlet => singlet_correlation(&pair.a, &pair.b),
        _ => paper_pair_correlation(kind, &pair.a, &pair.b),
    }
}
