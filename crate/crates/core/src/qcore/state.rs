use num_complex::Complex64;

use super::matrix::CplxMatrix;
use crate::error::{Error, Result};
use crate::EPS;

/// Which factor of a bipartite space to keep when tracing out the other.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// A normalized state vector, optionally tagged with a bipartite split.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    amplitudes: Vec<Complex64>,
    factor_dims: Option<(usize, usize)>,
}

impl Ket {
    /// Fails unless the squared norm is 1 within [`EPS`].
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        check_normalized(&amplitudes)?;
        Ok(Self {
            amplitudes,
            factor_dims: None,
        })
    }

    /// Rescales to unit norm; fails on the zero vector.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = squared_norm(&amplitudes).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::Normalization(
                "cannot normalize a zero vector".into(),
            ));
        }
        for z in &mut amplitudes {
            *z /= norm;
        }
        Self::new(amplitudes)
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Computational basis vector `|i⟩` of dimension `dim`.
    pub fn basis(dim: usize, i: usize) -> Self {
        assert!(i < dim, "basis index {i} out of range for dimension {dim}");
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[i] = Complex64::new(1.0, 0.0);
        Self {
            amplitudes,
            factor_dims: None,
        }
    }

    /// `self ⊗ other`, remembering the split.
    pub fn tensor(&self, other: &Ket) -> Ket {
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Ket {
            amplitudes,
            factor_dims: Some((self.dim(), other.dim())),
        }
    }

    pub fn with_factors(mut self, d_a: usize, d_b: usize) -> Result<Self> {
        if d_a * d_b != self.dim() {
            return Err(Error::Structure(format!(
                "factor dims {d_a}x{d_b} do not match dimension {}",
                self.dim()
            )));
        }
        self.factor_dims = Some((d_a, d_b));
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn factor_dims(&self) -> Option<(usize, usize)> {
        self.factor_dims
    }

    pub fn norm(&self) -> f64 {
        squared_norm(&self.amplitudes).sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Ket) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Rank-one projector `|self⟩⟨self|`.
    pub fn projector(&self) -> CplxMatrix {
        CplxMatrix::outer(&self.amplitudes, &self.amplitudes)
    }
}

fn squared_norm(amps: &[Complex64]) -> f64 {
    amps.iter().map(|z| z.norm_sqr()).sum()
}

fn check_normalized(amps: &[Complex64]) -> Result<()> {
    if amps.is_empty() {
        return Err(Error::Structure(
            "a ket needs at least one amplitude".into(),
        ));
    }
    let n2 = squared_norm(amps);
    if n2.is_nan() || (n2 - 1.0).abs() > EPS {
        return Err(Error::Normalization(format!(
            "squared norm {n2} deviates from 1"
        )));
    }
    Ok(())
}

/// Hermitian, unit-trace, positive semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: CplxMatrix,
    factor_dims: Option<(usize, usize)>,
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positivity before accepting `matrix`.
    ///
    /// Positivity is checked with closed-form eigenvalues in dimension 2. In
    /// higher dimensions the check is `Tr(ρ²) ≤ 1` together with a
    /// non-negative diagonal and `|ρ_ij|² ≤ ρ_ii ρ_jj` on every 2×2 principal
    /// minor, which is exact for the outer-product mixtures built here but
    /// not a full eigensolver.
    pub fn new(matrix: CplxMatrix, factor_dims: Option<(usize, usize)>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Structure("density operator must be square".into()));
        }
        let dim = matrix.rows();
        if let Some((a, b)) = factor_dims {
            if a * b != dim {
                return Err(Error::Structure(format!(
                    "factor dims {a}x{b} do not match dimension {dim}"
                )));
            }
        }
        if !matrix.is_hermitian(EPS) {
            return Err(Error::InvalidDensity("not Hermitian".into()));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > EPS || tr.im.abs() > EPS {
            return Err(Error::InvalidDensity(format!("trace {tr} is not 1")));
        }
        for i in 0..dim {
            if matrix[(i, i)].re < -EPS {
                return Err(Error::InvalidDensity(format!(
                    "negative diagonal entry at {i}"
                )));
            }
        }
        let rho = Self {
            matrix,
            factor_dims,
        };
        if rho.purity() > 1.0 + EPS {
            return Err(Error::InvalidDensity("purity exceeds 1".into()));
        }
        if dim == 2 {
            let (lo, _) = rho.eigenvalues_2x2();
            if lo < -EPS {
                return Err(Error::InvalidDensity(format!("negative eigenvalue {lo}")));
            }
        } else {
            for i in 0..dim {
                for j in (i + 1)..dim {
                    let lhs = rho.matrix[(i, j)].norm_sqr();
                    let rhs = rho.matrix[(i, i)].re * rho.matrix[(j, j)].re;
                    if lhs > rhs + EPS {
                        return Err(Error::InvalidDensity(format!(
                            "principal minor ({i},{j}) is negative"
                        )));
                    }
                }
            }
        }
        Ok(rho)
    }

    /// `|ψ⟩⟨ψ|` from raw amplitudes; fails if they are not normalized.
    pub fn from_amplitudes(
        amps: &[Complex64],
        factor_dims: Option<(usize, usize)>,
    ) -> Result<Self> {
        check_normalized(amps)?;
        Self::new(CplxMatrix::outer(amps, amps), factor_dims)
    }

    /// Convex mixture `Σ p_k |ψ_k⟩⟨ψ_k|`. Weights must be non-negative and sum to 1.
    pub fn mixture(components: &[(f64, Ket)]) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::Structure("empty mixture".into()))?;
        let dim = first.1.dim();
        let factor_dims = first.1.factor_dims();
        let total: f64 = components.iter().map(|(p, _)| p).sum();
        if components.iter().any(|(p, _)| *p < 0.0) || (total - 1.0).abs() > EPS {
            return Err(Error::Normalization(format!(
                "mixture weights must be non-negative and sum to 1 (sum {total})"
            )));
        }
        let mut m = CplxMatrix::zeros(dim, dim);
        for (p, k) in components {
            if k.dim() != dim {
                return Err(Error::Structure(
                    "mixture components differ in dimension".into(),
                ));
            }
            m = m.add(&k.projector().scale(Complex64::new(*p, 0.0)))?;
        }
        Self::new(m, factor_dims)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let m = CplxMatrix::identity(dim).scale(Complex64::new(1.0 / dim as f64, 0.0));
        Self::new(m, None).expect("I/d is a valid density operator")
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CplxMatrix {
        &self.matrix
    }

    pub fn factor_dims(&self) -> Option<(usize, usize)> {
        self.factor_dims
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        self.matrix
            .trace_of_product(&self.matrix)
            .expect("square matrix")
            .re
    }

    /// Ascending eigenvalues of a 2×2 Hermitian operator.
    fn eigenvalues_2x2(&self) -> (f64, f64) {
        let a = self.matrix[(0, 0)].re;
        let d = self.matrix[(1, 1)].re;
        let b = self.matrix[(0, 1)];
        let mean = 0.5 * (a + d);
        let r = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        (mean - r, mean + r)
    }

    /// Reduced operator on `keep`, tracing out the other factor.
    pub fn partial_trace(&self, keep: Subsystem) -> Result<DensityOperator> {
        let (d_a, d_b) = self.factor_dims.ok_or_else(|| {
            Error::Structure("partial trace needs a bipartite density operator".into())
        })?;
        let rho = &self.matrix;
        let reduced = match keep {
            Subsystem::First => {
                let mut m = CplxMatrix::zeros(d_a, d_a);
                for i in 0..d_a {
                    for k in 0..d_a {
                        m[(i, k)] = (0..d_b).map(|j| rho[(i * d_b + j, k * d_b + j)]).sum();
                    }
                }
                m
            }
            Subsystem::Second => {
                let mut m = CplxMatrix::zeros(d_b, d_b);
                for j in 0..d_b {
                    for l in 0..d_b {
                        m[(j, l)] = (0..d_a).map(|i| rho[(i * d_b + j, i * d_b + l)]).sum();
                    }
                }
                m
            }
        };
        DensityOperator::new(reduced, None)
    }
}

/// `|k⟩⟨k|`, carrying over the ket's bipartite split.
pub fn density_from_pure(k: &Ket) -> Result<DensityOperator> {
    DensityOperator::from_amplitudes(k.amplitudes(), k.factor_dims())
}

pub fn partial_trace(rho: &DensityOperator, keep: Subsystem) -> Result<DensityOperator> {
    rho.partial_trace(keep)
}

pub fn purity(rho: &DensityOperator) -> f64 {
    rho.purity()
}
