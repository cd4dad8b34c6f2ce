use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::NORM_TOL;

/// An analyzer orientation: a polarizer angle in the transverse plane, or a
/// Stern-Gerlach direction on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MeasurementSetting {
    /// Polarizer angle in radians, normalized to `[0, 2π)`.
    PhotonAngle(f64),
    /// Unit Bloch vector.
    BlochVector([f64; 3]),
}

impl MeasurementSetting {
    pub fn photon(theta: f64) -> Self {
        Self::PhotonAngle(normalize_angle(theta))
    }

    pub fn photon_degrees(deg: f64) -> Self {
        Self::photon(deg.to_radians())
    }

    /// Normalizes `dir` to unit length; fails if it has zero (or non-finite) norm.
    pub fn bloch(dir: [f64; 3]) -> Result<Self> {
        let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || norm < NORM_TOL {
            return Err(Error::Normalization(format!(
                "Bloch direction {dir:?} has norm {norm}"
            )));
        }
        Ok(Self::BlochVector(dir.map(|x| x / norm)))
    }

    /// Bloch vector from polar and azimuthal angles.
    pub fn bloch_spherical(polar: f64, azimuth: f64) -> Self {
        let (st, ct) = polar.sin_cos();
        let (sp, cp) = azimuth.sin_cos();
        Self::BlochVector([st * cp, st * sp, ct])
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::PhotonAngle(_) => "photon angle",
            Self::BlochVector(_) => "Bloch vector",
        }
    }

    pub fn angle(&self) -> Result<f64> {
        match *self {
            Self::PhotonAngle(t) => Ok(t),
            other => Err(Error::Kind {
                expected: "photon angle",
                got: other.kind_name(),
            }),
        }
    }

    pub fn direction(&self) -> Result<[f64; 3]> {
        match *self {
            Self::BlochVector(d) => Ok(d),
            other => Err(Error::Kind {
                expected: "Bloch vector",
                got: other.kind_name(),
            }),
        }
    }

    /// The orthogonal complement: `θ + π/2` for photons, `−a` for spins.
    pub fn complement(&self) -> Self {
        match *self {
            Self::PhotonAngle(t) => Self::photon(t + FRAC_PI_2),
            Self::BlochVector(d) => Self::BlochVector(d.map(|x| -x)),
        }
    }

    /// Euclidean dot product of the two unit vectors. For photons this is
    /// `cos(θa − θb)` of the in-plane polarization vectors.
    pub fn dot(&self, other: &Self) -> Result<f64> {
        match (*self, *other) {
            (Self::PhotonAngle(a), Self::PhotonAngle(b)) => Ok(normalize_angle(a - b).cos()),
            (Self::BlochVector(a), Self::BlochVector(b)) => {
                Ok(a[0] * b[0] + a[1] * b[1] + a[2] * b[2])
            }
            (a, b) => Err(Error::Kind {
                expected: a.kind_name(),
                got: b.kind_name(),
            }),
        }
    }

    /// Rotates a photon setting by `phi`; rotates a Bloch vector about z.
    pub fn rotated(&self, phi: f64) -> Self {
        match *self {
            Self::PhotonAngle(t) => Self::photon(t + phi),
            Self::BlochVector([x, y, z]) => {
                let (s, c) = phi.sin_cos();
                Self::BlochVector([c * x - s * y, s * x + c * y, z])
            }
        }
    }
}

/// Reduces an angle into `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}
