//! Hidden-variable subensemble models.
//!
//! A subensemble with polarization labels `(u, v)` carries a distribution
//! over a hidden variable λ and two response functions that map the
//! analyzer settings and λ to ±1. Response A may read setting `b` and vice
//! versa, so non-local models are allowed.
//!
//! Averages come from two estimators:
//!
//! - [`exact_averages`] sums over a finite weighted λ set ([`DiscreteModel`]).
//! - [`mc_averages`] draws λ from a [`SubensembleModel`] with a seeded
//!   generator. Samples are split into fixed-size chunks; chunk `c` uses a
//!   ChaCha8 stream keyed by `(seed, c)`. Sums are kept as integers, so the
//!   result does not depend on how chunks are scheduled across threads.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canonical::PairSetting;
use crate::error::{Error, Result};
use crate::inequality::{
    delta_grid, leggett_check, AverageTriple, InequalityReport, DEFAULT_TOLERANCE,
};
use crate::qcore::MeasurementSetting;
use crate::{EPS, NORM_TOL};

/// Samples drawn per generator stream.
pub const CHUNK_SIZE: u64 = 4096;

/// Smallest sample count accepted by [`mc_averages`].
pub const MIN_SAMPLES: u64 = 100;

/// A single ±1 measurement outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_bool(plus: bool) -> Self {
        if plus {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// A subensemble with polarization labels, a λ sampler and ±1 responses.
pub trait SubensembleModel: Sync {
    type Lambda;

    /// Polarization labels `(u, v)` of the subensemble.
    fn polarizations(&self) -> (MeasurementSetting, MeasurementSetting);

    fn sample_lambda<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Lambda;

    /// Outcome on side A for analyzer `a`, given the far analyzer `b`.
    fn response_a(
        &self,
        a: &MeasurementSetting,
        b: &MeasurementSetting,
        lambda: &Self::Lambda,
    ) -> Sign;

    /// Outcome on side B for analyzer `b`, given the far analyzer `a`.
    fn response_b(
        &self,
        b: &MeasurementSetting,
        a: &MeasurementSetting,
        lambda: &Self::Lambda,
    ) -> Sign;

    /// Closed-form subensemble averages, when the model has them.
    fn exact_triple(
        &self,
        _a: &MeasurementSetting,
        _b: &MeasurementSetting,
    ) -> Option<AverageTriple> {
        None
    }
}

/// Both sides always answer with fixed outcomes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantModel {
    pub a: Sign,
    pub b: Sign,
}

impl SubensembleModel for ConstantModel {
    type Lambda = ();

    fn polarizations(&self) -> (MeasurementSetting, MeasurementSetting) {
        (
            MeasurementSetting::photon(0.0),
            MeasurementSetting::photon(0.0),
        )
    }

    fn sample_lambda<R: Rng + ?Sized>(&self, _rng: &mut R) {}

    fn response_a(&self, _: &MeasurementSetting, _: &MeasurementSetting, _: &()) -> Sign {
        self.a
    }

    fn response_b(&self, _: &MeasurementSetting, _: &MeasurementSetting, _: &()) -> Sign {
        self.b
    }

    fn exact_triple(
        &self,
        _: &MeasurementSetting,
        _: &MeasurementSetting,
    ) -> Option<AverageTriple> {
        let (a, b) = (self.a.value() as f64, self.b.value() as f64);
        Some(AverageTriple {
            av_a: a,
            av_b: b,
            av_ab: a * b,
        })
    }
}

/// Each photon passes its analyzer independently with Malus probability
/// `(u·a)²` (resp. `(v·b)²`).
///
/// λ = (λ₁, λ₂) is uniform on `[0, 1)²`; A = +1 iff λ₁ < (u·a)² and
/// B = +1 iff λ₂ < (v·b)². Hence `av(A) = 2(u·a)² − 1`,
/// `av(B) = 2(v·b)² − 1` and `av(AB) = av(A) av(B)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MalusProductModel {
    u: MeasurementSetting,
    v: MeasurementSetting,
}

pub fn malus_product_model(u: f64, v: f64) -> MalusProductModel {
    MalusProductModel {
        u: MeasurementSetting::photon(u),
        v: MeasurementSetting::photon(v),
    }
}

impl MalusProductModel {
    fn pass_probability(pol: &MeasurementSetting, analyzer: &MeasurementSetting) -> f64 {
        // non-photon analyzers never pass
        pol.dot(analyzer).map(|c| c * c).unwrap_or(0.0)
    }
}

impl SubensembleModel for MalusProductModel {
    type Lambda = (f64, f64);

    fn polarizations(&self) -> (MeasurementSetting, MeasurementSetting) {
        (self.u, self.v)
    }

    fn sample_lambda<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        (rng.random::<f64>(), rng.random::<f64>())
    }

    fn response_a(
        &self,
        a: &MeasurementSetting,
        _b: &MeasurementSetting,
        lambda: &(f64, f64),
    ) -> Sign {
        Sign::from_bool(lambda.0 < Self::pass_probability(&self.u, a))
    }

    fn response_b(
        &self,
        b: &MeasurementSetting,
        _a: &MeasurementSetting,
        lambda: &(f64, f64),
    ) -> Sign {
        Sign::from_bool(lambda.1 < Self::pass_probability(&self.v, b))
    }

    fn exact_triple(
        &self,
        a: &MeasurementSetting,
        b: &MeasurementSetting,
    ) -> Option<AverageTriple> {
        let av_a = 2.0 * Self::pass_probability(&self.u, a) - 1.0;
        let av_b = 2.0 * Self::pass_probability(&self.v, b) - 1.0;
        Some(AverageTriple {
            av_a,
            av_b,
            av_ab: av_a * av_b,
        })
    }
}

/// Responses of every λ point for one setting pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseTable {
    pub a: Vec<Sign>,
    pub b: Vec<Sign>,
}

/// A finite λ set with normalized weights and per-setting response tables.
///
/// Tables are looked up by setting pair (within [`NORM_TOL`]); a default
/// table, if set, answers for settings with no explicit entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteModel {
    weights: Vec<f64>,
    tables: Vec<(PairSetting, ResponseTable)>,
    default: Option<ResponseTable>,
}

impl DiscreteModel {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        check_weights(&weights)?;
        Ok(Self {
            weights,
            tables: Vec::new(),
            default: None,
        })
    }

    /// One λ point answering `(a, b)` for every setting.
    pub fn constant(a: Sign, b: Sign) -> Self {
        Self::new(vec![1.0])
            .and_then(|m| m.with_default(vec![a], vec![b]))
            .expect("single unit weight")
    }

    pub fn with_default(mut self, a: Vec<Sign>, b: Vec<Sign>) -> Result<Self> {
        self.default = Some(self.table(a, b)?);
        Ok(self)
    }

    pub fn with_table(mut self, pair: PairSetting, a: Vec<Sign>, b: Vec<Sign>) -> Result<Self> {
        let table = self.table(a, b)?;
        self.tables.push((pair, table));
        Ok(self)
    }

    fn table(&self, a: Vec<Sign>, b: Vec<Sign>) -> Result<ResponseTable> {
        let n = self.weights.len();
        if a.len() != n || b.len() != n {
            return Err(Error::Structure(format!(
                "response tables need {n} entries, got {} and {}",
                a.len(),
                b.len()
            )));
        }
        Ok(ResponseTable { a, b })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn responses(
        &self,
        a: &MeasurementSetting,
        b: &MeasurementSetting,
    ) -> Result<&ResponseTable> {
        self.tables
            .iter()
            .find(|(pair, _)| same_setting(&pair.a, a) && same_setting(&pair.b, b))
            .map(|(_, t)| t)
            .or(self.default.as_ref())
            .ok_or_else(|| Error::Domain(format!("no response table for settings {a:?}, {b:?}")))
    }

    /// `Σ wᵢ f(i)`.
    pub fn weighted_sum(&self, f: impl Fn(usize) -> f64) -> f64 {
        self.weights.iter().enumerate().map(|(i, w)| w * f(i)).sum()
    }
}

fn same_setting(x: &MeasurementSetting, y: &MeasurementSetting) -> bool {
    match (*x, *y) {
        (MeasurementSetting::PhotonAngle(p), MeasurementSetting::PhotonAngle(q)) => {
            let d = (p - q).abs();
            d <= NORM_TOL || (std::f64::consts::TAU - d) <= NORM_TOL
        }
        (MeasurementSetting::BlochVector(p), MeasurementSetting::BlochVector(q)) => {
            p.iter().zip(&q).all(|(s, t)| (s - t).abs() <= NORM_TOL)
        }
        _ => false,
    }
}

fn check_weights(weights: &[f64]) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::Normalization(
            "a model needs at least one λ point".into(),
        ));
    }
    if weights.iter().any(|w| w.is_nan() || *w < 0.0) {
        return Err(Error::Normalization("weights must be non-negative".into()));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > EPS {
        return Err(Error::Normalization(format!(
            "weights sum to {total}, not 1"
        )));
    }
    Ok(())
}

/// Weighted sums `Σ wᵢ Aᵢ`, `Σ wᵢ Bᵢ`, `Σ wᵢ AᵢBᵢ`.
pub fn exact_averages(
    m: &DiscreteModel,
    a: &MeasurementSetting,
    b: &MeasurementSetting,
) -> Result<AverageTriple> {
    check_weights(&m.weights)?;
    let t = m.responses(a, b)?;
    let av_a = m.weighted_sum(|i| t.a[i].value() as f64);
    let av_b = m.weighted_sum(|i| t.b[i].value() as f64);
    let av_ab = m.weighted_sum(|i| (t.a[i].value() * t.b[i].value()) as f64);
    Ok(AverageTriple { av_a, av_b, av_ab })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub triple: AverageTriple,
    pub stderr_a: f64,
    pub stderr_b: f64,
    pub stderr_ab: f64,
    pub samples: u64,
    pub seed: u64,
}

impl EstimateReport {
    pub fn max_stderr(&self) -> f64 {
        self.stderr_a.max(self.stderr_b).max(self.stderr_ab)
    }
}

#[derive(Debug, Default, Clone, Copy)]
struct Tally {
    a: i64,
    b: i64,
    ab: i64,
}

impl std::ops::Add for Tally {
    type Output = Tally;

    fn add(self, o: Tally) -> Tally {
        Tally {
            a: self.a + o.a,
            b: self.b + o.b,
            ab: self.ab + o.ab,
        }
    }
}

/// Generator for chunk `chunk` of a run seeded with `seed`.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Mean and standard error of a ±1 variable from its sum over `n` draws.
fn mean_and_stderr(sum: i64, n: u64) -> (f64, f64) {
    let nf = n as f64;
    let mean = sum as f64 / nf;
    // Σx² = n for x = ±1, so the unbiased variance is n(1 − m²)/(n − 1).
    let var = (nf * (1.0 - mean * mean) / (nf - 1.0)).max(0.0);
    (mean, (var / nf).sqrt())
}

/// Monte Carlo estimates of `av(A)`, `av(B)` and `av(AB)` over `samples` draws.
pub fn mc_averages<M: SubensembleModel>(
    m: &M,
    a: &MeasurementSetting,
    b: &MeasurementSetting,
    samples: u64,
    seed: u64,
) -> Result<EstimateReport> {
    if samples < MIN_SAMPLES {
        return Err(Error::Domain(format!(
            "need at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    let chunks = samples.div_ceil(CHUNK_SIZE);
    let tally = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c);
            let n = CHUNK_SIZE.min(samples - c * CHUNK_SIZE);
            let mut t = Tally::default();
            for _ in 0..n {
                let lambda = m.sample_lambda(&mut rng);
                let ra = m.response_a(a, b, &lambda).value();
                let rb = m.response_b(b, a, &lambda).value();
                t.a += ra;
                t.b += rb;
                t.ab += ra * rb;
            }
            t
        })
        .reduce(Tally::default, |x, y| x + y);

    let (av_a, stderr_a) = mean_and_stderr(tally.a, samples);
    let (av_b, stderr_b) = mean_and_stderr(tally.b, samples);
    let (av_ab, stderr_ab) = mean_and_stderr(tally.ab, samples);
    Ok(EstimateReport {
        triple: AverageTriple { av_a, av_b, av_ab },
        stderr_a,
        stderr_b,
        stderr_ab,
        samples,
        seed,
    })
}

/// Something that yields a triple (and its uncertainty) per setting pair.
pub trait AverageSource: Sync {
    /// Returns the triple and the largest standard error among its components.
    fn averages(&self, pair: &PairSetting, samples: u64, seed: u64)
        -> Result<(AverageTriple, f64)>;
}

impl AverageSource for DiscreteModel {
    fn averages(
        &self,
        pair: &PairSetting,
        _samples: u64,
        _seed: u64,
    ) -> Result<(AverageTriple, f64)> {
        Ok((exact_averages(self, &pair.a, &pair.b)?, 0.0))
    }
}

/// Adapts a [`SubensembleModel`] to the Monte Carlo estimator.
#[derive(Debug, Clone, Copy)]
pub struct MonteCarlo<'a, M>(pub &'a M);

impl<M: SubensembleModel> AverageSource for MonteCarlo<'_, M> {
    fn averages(
        &self,
        pair: &PairSetting,
        samples: u64,
        seed: u64,
    ) -> Result<(AverageTriple, f64)> {
        let r = mc_averages(self.0, &pair.a, &pair.b, samples, seed)?;
        Ok((r.triple, r.max_stderr()))
    }
}

/// Leggett tolerance for an estimate with the given standard error.
pub fn statistical_tolerance(max_stderr: f64) -> f64 {
    DEFAULT_TOLERANCE.max(3.0 * max_stderr)
}

/// Runs the Leggett check for every setting pair, in input order.
pub fn model_leggett_check<S: AverageSource>(
    source: &S,
    settings: &[PairSetting],
    samples: u64,
    seed: u64,
) -> Result<Vec<InequalityReport>> {
    settings
        .par_iter()
        .map(|pair| {
            let (triple, stderr) = source.averages(pair, samples, seed)?;
            leggett_check(&triple, statistical_tolerance(stderr))
        })
        .collect()
}

/// One row of a Monte Carlo sweep over relative analyzer angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HvtRow {
    pub delta: f64,
    pub estimate: EstimateReport,
    pub exact: Option<AverageTriple>,
    pub report: InequalityReport,
}

/// Photon analyzers at `offset + delta` (A) and `offset` (B) over a uniform
/// delta grid; each row is estimated with the same seed.
pub fn hvt_sweep<M: SubensembleModel>(
    m: &M,
    grid_points: usize,
    offset: f64,
    samples: u64,
    seed: u64,
) -> Result<Vec<HvtRow>> {
    delta_grid(grid_points)?
        .into_par_iter()
        .map(|delta| {
            let pair = PairSetting::photons(offset + delta, offset);
            let estimate = mc_averages(m, &pair.a, &pair.b, samples, seed)?;
            let report = leggett_check(
                &estimate.triple,
                statistical_tolerance(estimate.max_stderr()),
            )?;
            Ok(HvtRow {
                delta,
                estimate,
                exact: m.exact_triple(&pair.a, &pair.b),
                report,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6};

    fn ph(t: f64) -> MeasurementSetting {
        MeasurementSetting::photon(t)
    }

    #[test]
    fn single_point_constant() {
        let m = DiscreteModel::constant(Sign::Plus, Sign::Plus);
        let t = exact_averages(&m, &ph(0.0), &ph(1.0)).unwrap();
        assert_eq!((t.av_a, t.av_b, t.av_ab), (1.0, 1.0, 1.0));
    }

    #[test]
    fn two_point_hand_sum() {
        // ½(+1) + ½(−1) = 0, ½ + ½ = 1, ½(+1) + ½(−1) = 0
        let m = DiscreteModel::new(vec![0.5, 0.5])
            .unwrap()
            .with_default(vec![Sign::Plus, Sign::Minus], vec![Sign::Plus, Sign::Plus])
            .unwrap();
        let t = exact_averages(&m, &ph(0.0), &ph(0.0)).unwrap();
        assert_eq!((t.av_a, t.av_b, t.av_ab), (0.0, 1.0, 0.0));
    }

    #[test]
    fn weights_must_be_normalized() {
        assert!(matches!(
            DiscreteModel::new(vec![0.5, 0.4]),
            Err(Error::Normalization(_))
        ));
        assert!(DiscreteModel::new(vec![1.5, -0.5]).is_err());
        assert!(DiscreteModel::new(vec![]).is_err());
        assert!(DiscreteModel::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn table_lookup() {
        let pair = PairSetting::photons(0.3, 0.1);
        let m = DiscreteModel::new(vec![1.0])
            .unwrap()
            .with_table(pair, vec![Sign::Minus], vec![Sign::Plus])
            .unwrap();
        let t = exact_averages(&m, &pair.a, &pair.b).unwrap();
        assert_eq!(t.av_ab, -1.0);
        assert!(exact_averages(&m, &ph(0.0), &ph(0.0)).is_err());
        assert!(DiscreteModel::new(vec![1.0])
            .unwrap()
            .with_table(pair, vec![], vec![Sign::Plus])
            .is_err());
    }

    #[test]
    fn mc_constant_model() {
        let m = ConstantModel {
            a: Sign::Plus,
            b: Sign::Plus,
        };
        let r = mc_averages(&m, &ph(0.0), &ph(0.0), 1000, 3).unwrap();
        assert_eq!(
            (r.triple.av_a, r.triple.av_b, r.triple.av_ab),
            (1.0, 1.0, 1.0)
        );
        assert_eq!(r.max_stderr(), 0.0);
    }

    #[test]
    fn mc_rejects_small_sample_counts() {
        let m = ConstantModel {
            a: Sign::Plus,
            b: Sign::Plus,
        };
        assert!(matches!(
            mc_averages(&m, &ph(0.0), &ph(0.0), 99, 0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn malus_closed_forms() {
        let m = malus_product_model(0.0, 0.0);
        assert_eq!(m.exact_triple(&ph(0.0), &ph(0.0)).unwrap().av_a, 1.0);
        // cos²(π/6) = 0.75 → 2·0.75 − 1
        let t = m.exact_triple(&ph(FRAC_PI_6), &ph(0.0)).unwrap();
        assert!((t.av_a - 0.5).abs() < EPS);
    }

    #[test]
    fn malus_mc_aligned_and_diagonal() {
        let m = malus_product_model(0.0, 0.0);
        let r = mc_averages(&m, &ph(0.0), &ph(0.0), 100_000, 11).unwrap();
        assert!((r.triple.av_a - 1.0).abs() <= 3.0 * r.stderr_a);

        let r = mc_averages(&m, &ph(FRAC_PI_4), &ph(FRAC_PI_4), 100_000, 11).unwrap();
        assert!(r.stderr_a > 0.0);
        assert!(r.triple.av_a.abs() <= 3.0 * r.stderr_a, "{r:?}");
    }

    #[test]
    fn partial_chunks_are_counted() {
        let m = malus_product_model(0.2, 0.9);
        let r = mc_averages(&m, &ph(1.0), &ph(0.4), CHUNK_SIZE + 17, 5).unwrap();
        assert_eq!(r.samples, CHUNK_SIZE + 17);
    }

    #[test]
    fn boundary_touching_discrete_model() {
        let m = DiscreteModel::constant(Sign::Plus, Sign::Minus);
        let reports = model_leggett_check(&m, &[PairSetting::photons(0.0, 0.0)], 100, 0).unwrap();
        let r = reports[0];
        assert_eq!(r.value, -1.0);
        assert_eq!(r.lower, -1.0);
        assert_eq!(r.margin_lower, 0.0);
        assert!(r.satisfied);
    }

    #[test]
    fn statistical_tolerance_floor() {
        assert_eq!(statistical_tolerance(0.0), 1e-9);
        assert_eq!(statistical_tolerance(0.01), 0.03);
    }
}
