use num_complex::Complex64;

use super::matrix::CplxMatrix;
use super::setting::MeasurementSetting;
use super::state::{DensityOperator, Ket};
use crate::error::{Error, Result};
use crate::{EPS, NORM_TOL};

/// Hermitian operator; the ones built by this module have spectrum {+1, −1}.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: CplxMatrix,
}

impl Observable {
    pub fn new(matrix: CplxMatrix) -> Result<Self> {
        if !matrix.is_hermitian(EPS) {
            return Err(Error::Structure("observable must be Hermitian".into()));
        }
        Ok(Self { matrix })
    }

    /// `|pass⟩⟨pass| − |block⟩⟨block|` for two orthonormal kets.
    pub fn from_outcomes(pass: &Ket, block: &Ket) -> Result<Self> {
        if pass.dim() != block.dim() {
            return Err(Error::Structure("outcome kets differ in dimension".into()));
        }
        if pass.inner(block).norm() > NORM_TOL {
            return Err(Error::Structure("outcome kets are not orthogonal".into()));
        }
        Self::new(pass.projector().sub(&block.projector())?)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CplxMatrix {
        &self.matrix
    }

    /// `O² = I` within `tol`.
    pub fn is_involution(&self, tol: f64) -> bool {
        self.matrix
            .matmul(&self.matrix)
            .map(|sq| sq.approx_eq(&CplxMatrix::identity(self.dim()), tol))
            .unwrap_or(false)
    }
}

/// Linear polarization ket `cos θ |x⟩ + sin θ |y⟩`.
pub fn photon_ket(theta: f64) -> Ket {
    let (s, c) = theta.sin_cos();
    Ket::normalized(vec![Complex64::new(c, 0.0), Complex64::new(s, 0.0)]).expect("unit vector")
}

/// Spin-½ ket pointing along the unit Bloch vector `dir`, in the ↑/↓ basis.
pub fn spin_ket(dir: [f64; 3]) -> Ket {
    let polar = dir[2].clamp(-1.0, 1.0).acos();
    let azimuth = dir[1].atan2(dir[0]);
    let (s, c) = (0.5 * polar).sin_cos();
    Ket::normalized(vec![
        Complex64::new(c, 0.0),
        Complex64::from_polar(s, azimuth),
    ])
    .expect("unit vector")
}

/// Analyzer observable `|a⟩⟨a| − |a⊥⟩⟨a⊥|`, with `a⊥` at `θ + π/2`.
pub fn photon_observable(setting: &MeasurementSetting) -> Result<Observable> {
    let theta = setting.angle()?;
    let perp = setting.complement().angle()?;
    Observable::from_outcomes(&photon_ket(theta), &photon_ket(perp))
}

/// Stern-Gerlach observable `|a⟩⟨a| − |−a⟩⟨−a|`, equal to `a·σ`.
pub fn spin_observable(setting: &MeasurementSetting) -> Result<Observable> {
    let dir = setting.direction()?;
    let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::Normalization(format!(
            "Bloch direction has norm {norm}"
        )));
    }
    Observable::from_outcomes(&spin_ket(dir), &spin_ket(dir.map(|x| -x)))
}

/// Builds the photon or spin observable matching the setting's kind.
pub fn observable_for(setting: &MeasurementSetting) -> Result<Observable> {
    match setting {
        MeasurementSetting::PhotonAngle(_) => photon_observable(setting),
        MeasurementSetting::BlochVector(_) => spin_observable(setting),
    }
}

/// `Tr(ρ O)`.
pub fn expectation(rho: &DensityOperator, obs: &Observable) -> Result<f64> {
    if rho.dim() != obs.dim() {
        return Err(Error::Structure(format!(
            "state of dimension {} vs observable of dimension {}",
            rho.dim(),
            obs.dim()
        )));
    }
    let tr = rho.matrix().trace_of_product(obs.matrix())?;
    assert!(
        tr.im.abs() < EPS,
        "expectation has imaginary part {}",
        tr.im
    );
    Ok(tr.re)
}

/// `Tr(ρ (O_A ⊗ O_B))` on a bipartite state.
pub fn joint_expectation(
    rho: &DensityOperator,
    obs_a: &Observable,
    obs_b: &Observable,
) -> Result<f64> {
    let (d_a, d_b) = rho
        .factor_dims()
        .ok_or_else(|| Error::Structure("joint expectation needs a bipartite state".into()))?;
    if d_a != obs_a.dim() || d_b != obs_b.dim() {
        return Err(Error::Structure(format!(
            "factor dims {d_a}x{d_b} vs observables {}x{}",
            obs_a.dim(),
            obs_b.dim()
        )));
    }
    let joint = obs_a.matrix().kron(obs_b.matrix());
    let tr = rho.matrix().trace_of_product(&joint)?;
    assert!(
        tr.im.abs() < EPS,
        "joint expectation has imaginary part {}",
        tr.im
    );
    Ok(tr.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::state::density_from_pure;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6};

    fn ph(theta: f64) -> Observable {
        photon_observable(&MeasurementSetting::photon(theta)).unwrap()
    }

    fn sp(dir: [f64; 3]) -> Observable {
        spin_observable(&MeasurementSetting::bloch(dir).unwrap()).unwrap()
    }

    #[test]
    fn photon_observable_axes() {
        let z = CplxMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]);
        assert!(ph(0.0).matrix().approx_eq(&z, EPS));
        assert!(ph(FRAC_PI_2)
            .matrix()
            .approx_eq(&z.scale((-1.0).into()), EPS));
        // cos²−sin² = 0 and 2 sin cos = 1 at π/4
        let x = CplxMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert!(ph(FRAC_PI_4).matrix().approx_eq(&x, EPS));
    }

    #[test]
    fn spin_observable_axes() {
        let z = CplxMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]);
        let x = CplxMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert!(sp([0.0, 0.0, 1.0]).matrix().approx_eq(&z, EPS));
        assert!(sp([1.0, 0.0, 0.0]).matrix().approx_eq(&x, EPS));

        // y-axis: |+y⟩ = (1, i)/√2, |−y⟩ = (1, −i)/√2
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let up = [Complex64::new(r, 0.0), Complex64::new(0.0, r)];
        let down = [Complex64::new(r, 0.0), Complex64::new(0.0, -r)];
        let oracle = CplxMatrix::outer(&up, &up)
            .sub(&CplxMatrix::outer(&down, &down))
            .unwrap();
        let y = CplxMatrix::from_vec(
            2,
            2,
            vec![
                0.0.into(),
                Complex64::new(0.0, -1.0),
                Complex64::new(0.0, 1.0),
                0.0.into(),
            ],
        )
        .unwrap();
        assert!(oracle.approx_eq(&y, EPS));
        assert!(sp([0.0, 1.0, 0.0]).matrix().approx_eq(&y, EPS));
    }

    #[test]
    fn wrong_kind_is_rejected() {
        let photon = MeasurementSetting::photon(0.0);
        let spin = MeasurementSetting::bloch([0.0, 0.0, 1.0]).unwrap();
        assert!(matches!(spin_observable(&photon), Err(Error::Kind { .. })));
        assert!(matches!(photon_observable(&spin), Err(Error::Kind { .. })));
    }

    #[test]
    fn unnormalized_raw_bloch_vector_is_rejected() {
        let raw = MeasurementSetting::BlochVector([0.0, 0.0, 2.0]);
        assert!(matches!(
            spin_observable(&raw),
            Err(Error::Normalization(_))
        ));
    }

    #[test]
    fn single_side_expectations() {
        let mixed = DensityOperator::maximally_mixed(2);
        for k in 0..16 {
            let theta = k as f64 * 0.4;
            assert!(expectation(&mixed, &ph(theta)).unwrap().abs() < EPS);
        }
        let x = density_from_pure(&Ket::basis(2, 0)).unwrap();
        assert!((expectation(&x, &ph(0.0)).unwrap() - 1.0).abs() < EPS);
        // Malus: P(pass) − P(block) = cos²(π/6) − sin²(π/6) = 0.75 − 0.25
        assert!((expectation(&x, &ph(FRAC_PI_6)).unwrap() - 0.5).abs() < EPS);
    }

    #[test]
    fn expectation_dimension_mismatch() {
        let rho = DensityOperator::maximally_mixed(4);
        assert!(matches!(
            expectation(&rho, &ph(0.0)),
            Err(Error::Structure(_))
        ));
    }

    #[test]
    fn joint_expectation_requires_bipartite_state() {
        let rho = DensityOperator::maximally_mixed(4);
        assert!(joint_expectation(&rho, &ph(0.0), &ph(0.0)).is_err());
        let tagged = density_from_pure(&Ket::basis(2, 0).tensor(&Ket::basis(2, 1))).unwrap();
        let big = Observable::new(CplxMatrix::identity(4)).unwrap();
        assert!(joint_expectation(&tagged, &big, &ph(0.0)).is_err());
    }

    #[test]
    fn outcomes_must_be_orthogonal() {
        assert!(Observable::from_outcomes(&photon_ket(0.0), &photon_ket(0.1)).is_err());
    }
}
