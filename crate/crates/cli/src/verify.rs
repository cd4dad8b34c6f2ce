//! Exact-identity suite behind `leggett verify`.

use std::f64::consts::TAU;

use leggett_core::canonical::{
    joint_probability, paper_pair_correlation, singlet_correlation, CanonicalState,
};
use leggett_core::hvt::{exact_averages, DiscreteModel, Sign};
use leggett_core::inequality::{
    leggett_check, pm_identity_check, quadratic_form_check, quantum_sweep,
};
use leggett_core::qcore::{
    expectation, joint_expectation, observable_for, photon_ket, spin_observable, CplxMatrix,
    MeasurementSetting, Subsystem,
};
use leggett_core::{Result, EPS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GRID: usize = 1000;
const SWEEP_GRID: usize = 3600;

type Check = fn() -> Result<(bool, String)>;

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Runs every identity; never short-circuits.
pub fn run_suite() -> Vec<CheckOutcome> {
    let checks: [(&'static str, Check); 9] = [
        (
            "reduced density matrices equal I/2",
            reduced_is_half_identity,
        ),
        ("reduced purity equals 1/2", reduced_purity),
        ("single-side averages vanish", single_side_vanish),
        ("joint probabilities match full trace", joint_probabilities),
        ("closed-form correlation identities", correlation_identities),
        ("singlet correlation equals -a.b", singlet_minus_dot),
        ("sweeps satisfy the Leggett bounds", sweeps_satisfied),
        ("quadratic form holds", quadratic_form),
        ("appendix identities and discrete models", appendix),
    ];
    checks
        .iter()
        .map(|(name, f)| match f() {
            Ok((passed, detail)) => CheckOutcome {
                name,
                passed,
                detail,
            },
            Err(e) => CheckOutcome {
                name,
                passed: false,
                detail: format!("error: {e}"),
            },
        })
        .collect()
}

fn deltas(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| TAU * k as f64 / n as f64)
}

fn half_identity() -> CplxMatrix {
    CplxMatrix::identity(2).scale(0.5.into())
}

fn reduced_is_half_identity() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for s in CanonicalState::ALL {
        let rho = s.density();
        for keep in [Subsystem::First, Subsystem::Second] {
            worst = worst.max(
                rho.partial_trace(keep)?
                    .matrix()
                    .max_abs_diff(&half_identity()),
            );
        }
    }
    Ok((worst <= EPS, format!("max deviation {worst:e}")))
}

fn reduced_purity() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for s in CanonicalState::ALL {
        let rho = s.density();
        for keep in [Subsystem::First, Subsystem::Second] {
            worst = worst.max((rho.partial_trace(keep)?.purity() - 0.5).abs());
        }
    }
    Ok((worst <= EPS, format!("max deviation {worst:e}")))
}

fn single_side_vanish() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for s in CanonicalState::ALL {
        let rho = s.density();
        let first = rho.partial_trace(Subsystem::First)?;
        let second = rho.partial_trace(Subsystem::Second)?;
        for _ in 0..GRID {
            let setting = random_setting(&mut rng, s.is_photon());
            let obs = observable_for(&setting)?;
            worst = worst
                .max(expectation(&first, &obs)?.abs())
                .max(expectation(&second, &obs)?.abs());
        }
    }
    Ok((worst < EPS, format!("max |av| {worst:e}")))
}

fn random_setting(rng: &mut ChaCha8Rng, photon: bool) -> MeasurementSetting {
    if photon {
        MeasurementSetting::photon(rng.random_range(0.0..TAU))
    } else {
        let z: f64 = rng.random_range(-1.0..=1.0);
        MeasurementSetting::bloch_spherical(z.acos(), rng.random_range(0.0..TAU))
    }
}

fn joint_probabilities() -> Result<(bool, String)> {
    let b = MeasurementSetting::photon(0.0);
    let proj_b = photon_ket(0.0).projector();
    let plus = CanonicalState::PsiPlus.density();
    let minus = CanonicalState::PsiMinus.density();
    let mut worst = 0.0f64;
    for d in deltas(GRID) {
        let a = MeasurementSetting::photon(d);
        let joint = photon_ket(d).projector().kron(&proj_b);
        let oracle_p = plus.matrix().trace_of_product(&joint)?.re;
        let oracle_m = minus.matrix().trace_of_product(&joint)?.re;
        worst = worst
            .max((joint_probability(CanonicalState::PsiPlus, &a, &b)? - oracle_p).abs())
            .max((joint_probability(CanonicalState::PsiMinus, &a, &b)? - oracle_m).abs());
    }
    Ok((worst <= EPS, format!("max deviation {worst:e}")))
}

fn correlation_identities() -> Result<(bool, String)> {
    let b = MeasurementSetting::photon(0.0);
    let ob = observable_for(&b)?;
    let rho = CanonicalState::PsiPlus.density();
    let (mut diff_id, mut factor_two) = (0.0f64, 0.0f64);
    for d in deltas(GRID) {
        let a = MeasurementSetting::photon(d);
        let c = paper_pair_correlation(CanonicalState::PsiPlus, &a, &b)?;
        let p = joint_probability(CanonicalState::PsiPlus, &a, &b)?;
        let m = joint_probability(CanonicalState::PsiMinus, &a, &b)?;
        diff_id = diff_id.max((c - (p - m)).abs());
        let full = joint_expectation(&rho, &observable_for(&a)?, &ob)?;
        factor_two = factor_two.max((full - 2.0 * c).abs());
    }
    Ok((
        diff_id <= EPS && factor_two <= EPS,
        format!("P+ - P- deviation {diff_id:e}; full trace vs 2x closed form {factor_two:e}"),
    ))
}

fn singlet_minus_dot() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let rho = CanonicalState::Singlet.density();
    let mut worst = 0.0f64;
    for _ in 0..GRID {
        let a = random_setting(&mut rng, false);
        let b = random_setting(&mut rng, false);
        let full = joint_expectation(&rho, &spin_observable(&a)?, &spin_observable(&b)?)?;
        worst = worst
            .max((full + a.dot(&b)?).abs())
            .max((full - singlet_correlation(&a, &b)?).abs());
    }
    Ok((worst <= EPS, format!("max deviation {worst:e}")))
}

fn sweeps_satisfied() -> Result<(bool, String)> {
    let mut ok = true;
    let mut min_margin = f64::INFINITY;
    for s in CanonicalState::ALL {
        for row in quantum_sweep(s, SWEEP_GRID)? {
            ok &= row.satisfied();
            min_margin = min_margin
                .min(row.report_paper.min_margin())
                .min(row.report_oracle.min_margin());
        }
    }
    Ok((
        ok && min_margin >= -1e-9,
        format!("min margin {min_margin:e}"),
    ))
}

fn quadratic_form() -> Result<(bool, String)> {
    let n = 1000;
    let mut all = true;
    for i in 0..n {
        for j in 0..n {
            all &= quadratic_form_check(TAU * i as f64 / n as f64, TAU * j as f64 / n as f64);
        }
    }
    Ok((all, format!("{} angle pairs", n * n)))
}

fn appendix() -> Result<(bool, String)> {
    let mut ok = true;
    for a in [-1, 1] {
        for b in [-1, 1] {
            ok &= pm_identity_check(a, b)?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let setting = MeasurementSetting::photon(0.0);
    let mut min_margin = f64::INFINITY;
    for _ in 0..GRID {
        let n = rng.random_range(1..=32);
        let raw: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-3).collect();
        let total: f64 = raw.iter().sum();
        let mut weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let head: f64 = weights[..n - 1].iter().sum();
        weights[n - 1] = 1.0 - head;
        let signs = |rng: &mut ChaCha8Rng| -> Vec<Sign> {
            (0..n).map(|_| Sign::from_bool(rng.random())).collect()
        };
        let (sa, sb) = (signs(&mut rng), signs(&mut rng));
        let model = DiscreteModel::new(weights)?.with_default(sa, sb)?;
        let report = leggett_check(&exact_averages(&model, &setting, &setting)?, EPS)?;
        ok &= report.satisfied;
        min_margin = min_margin.min(report.min_margin());
    }
    Ok((ok, format!("min margin over {GRID} models {min_margin:e}")))
}
