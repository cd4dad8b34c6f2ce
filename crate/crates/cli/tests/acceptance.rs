//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p leggett-cli --test acceptance`.

use std::f64::consts::TAU;
use std::process::Command;
use std::time::Instant;

use leggett_core::canonical::{joint_probability, paper_pair_correlation, CanonicalState};
use leggett_core::hvt::{
    exact_averages, malus_product_model, mc_averages, DiscreteModel, Sign, SubensembleModel,
};
use leggett_core::inequality::{
    leggett_check, pm_identity_check, quadratic_form_check, quantum_sweep,
};
use leggett_core::qcore::{
    expectation, joint_expectation, photon_ket, photon_observable, spin_observable, CplxMatrix,
    MeasurementSetting, Subsystem,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL_EXACT: f64 = 1e-12;
const TOL_MARGIN: f64 = 1e-9;
const SWEEP_GRID: usize = 3600;
const SWEEP_BUDGET_SECS: f64 = 10.0;
const MC_SAMPLES: u64 = 100_000;
const MC_SIGMAS: f64 = 4.0;

type Outcome = Result<String, String>;
type Criterion = fn() -> Outcome;

fn ensure(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random_bloch(rng: &mut ChaCha8Rng) -> MeasurementSetting {
    loop {
        let v = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        let n2: f64 = v.iter().map(|x: &f64| x * x).sum();
        if n2 > 1e-4 && n2 <= 1.0 {
            return MeasurementSetting::bloch(v).unwrap();
        }
    }
}

fn half_identity() -> CplxMatrix {
    CplxMatrix::identity(2).scale(0.5.into())
}

fn c1_reduced_density() -> Outcome {
    let mut worst = 0.0f64;
    for s in CanonicalState::ALL {
        for keep in [Subsystem::First, Subsystem::Second] {
            let red = s.density().partial_trace(keep).map_err(|e| e.to_string())?;
            worst = worst.max(red.matrix().max_abs_diff(&half_identity()));
        }
    }
    ensure(
        worst <= TOL_EXACT,
        format!("max |ρ_red − I/2| = {worst:.3e}"),
    )
}

fn c2_mixedness() -> Outcome {
    let mut worst = 0.0f64;
    for s in CanonicalState::ALL {
        for keep in [Subsystem::First, Subsystem::Second] {
            let red = s.density().partial_trace(keep).map_err(|e| e.to_string())?;
            worst = worst.max((red.purity() - 0.5).abs());
        }
    }
    ensure(
        worst <= TOL_EXACT,
        format!("max |Tr ρ_red² − 0.5| = {worst:.3e}"),
    )
}

fn c3_vanishing_averages() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut worst = 0.0f64;
    for s in CanonicalState::ALL {
        let rho = s.density();
        let first = rho.partial_trace(Subsystem::First).unwrap();
        let second = rho.partial_trace(Subsystem::Second).unwrap();
        for _ in 0..1000 {
            let (oa, ob) = if s.is_photon() {
                (
                    photon_observable(&MeasurementSetting::photon(rng.random_range(0.0..TAU)))
                        .unwrap(),
                    photon_observable(&MeasurementSetting::photon(rng.random_range(0.0..TAU)))
                        .unwrap(),
                )
            } else {
                (
                    spin_observable(&random_bloch(&mut rng)).unwrap(),
                    spin_observable(&random_bloch(&mut rng)).unwrap(),
                )
            };
            worst = worst
                .max(expectation(&first, &oa).unwrap().abs())
                .max(expectation(&second, &ob).unwrap().abs());
        }
    }
    ensure(
        worst < TOL_EXACT,
        format!("max |Tr(ρ_red O)| = {worst:.3e} over 3×1000 settings"),
    )
}

fn delta_grid_1000() -> impl Iterator<Item = f64> {
    (0..1000).map(|k| TAU * k as f64 / 1000.0)
}

fn c4_closed_forms() -> Outcome {
    let plus = CanonicalState::PsiPlus.density();
    let minus = CanonicalState::PsiMinus.density();
    let b = MeasurementSetting::photon(0.0);
    let proj_b = photon_ket(0.0).projector();
    let mut worst = 0.0f64;
    for d in delta_grid_1000() {
        let a = MeasurementSetting::photon(d);
        let joint = photon_ket(d).projector().kron(&proj_b);
        let oracle_p = plus.matrix().trace_of_product(&joint).unwrap().re;
        let oracle_m = minus.matrix().trace_of_product(&joint).unwrap().re;
        let p = joint_probability(CanonicalState::PsiPlus, &a, &b).unwrap();
        let m = joint_probability(CanonicalState::PsiMinus, &a, &b).unwrap();
        let (c, s) = (d.cos(), d.sin());
        worst = worst
            .max((p - oracle_p).abs())
            .max((m - oracle_m).abs())
            .max((p - 0.5 * c * c).abs())
            .max((m - 0.5 * s * s).abs());
    }
    ensure(
        worst <= TOL_EXACT,
        format!("max deviation from full-trace oracle {worst:.3e}"),
    )
}

fn c5_correlation_identity() -> Outcome {
    let rho = CanonicalState::PsiPlus.density();
    let b = MeasurementSetting::photon(0.0);
    let ob = photon_observable(&b).unwrap();
    let (mut diff, mut twice) = (0.0f64, 0.0f64);
    for d in delta_grid_1000() {
        let a = MeasurementSetting::photon(d);
        let c = paper_pair_correlation(CanonicalState::PsiPlus, &a, &b).unwrap();
        let p = joint_probability(CanonicalState::PsiPlus, &a, &b).unwrap();
        let m = joint_probability(CanonicalState::PsiMinus, &a, &b).unwrap();
        diff = diff.max((c - (p - m)).abs());
        let full = joint_expectation(&rho, &photon_observable(&a).unwrap(), &ob).unwrap();
        twice = twice.max((full - 2.0 * c).abs());
    }
    ensure(
        diff <= TOL_EXACT && twice <= TOL_EXACT,
        format!("|C − (P₊ − P₋)| ≤ {diff:.3e}, |Tr − 2C| ≤ {twice:.3e}"),
    )
}

fn c6_singlet() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let rho = CanonicalState::Singlet.density();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let a = random_bloch(&mut rng);
        let b = random_bloch(&mut rng);
        let j = joint_expectation(
            &rho,
            &spin_observable(&a).unwrap(),
            &spin_observable(&b).unwrap(),
        )
        .unwrap();
        let [ax, ay, az] = a.direction().unwrap();
        let [bx, by, bz] = b.direction().unwrap();
        worst = worst.max((j + (ax * bx + ay * by + az * bz)).abs());
    }
    ensure(
        worst <= TOL_EXACT,
        format!("max |Tr + a·b| = {worst:.3e} over 1000 pairs"),
    )
}

fn c7_inequality_satisfaction() -> Outcome {
    let start = Instant::now();
    let mut all = true;
    let mut min_margin = f64::INFINITY;
    let mut rows = 0;
    for s in CanonicalState::ALL {
        for row in quantum_sweep(s, SWEEP_GRID).map_err(|e| e.to_string())? {
            rows += 1;
            all &= row.report_paper.satisfied && row.report_oracle.satisfied;
            min_margin = min_margin
                .min(row.report_paper.min_margin())
                .min(row.report_oracle.min_margin());
        }
    }
    let n = 1000;
    let mut quad = true;
    for i in 0..n {
        for j in 0..n {
            quad &= quadratic_form_check(TAU * i as f64 / n as f64, TAU * j as f64 / n as f64);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(
        all && quad && rows == 3 * SWEEP_GRID && min_margin >= -TOL_MARGIN && secs < SWEEP_BUDGET_SECS,
        format!("{rows} rows, min margin {min_margin:.3e}, quadratic form on 10^6 pairs = {quad}, {secs:.2}s"),
    )
}

fn c8_appendix() -> Outcome {
    let mut ids = true;
    for a in [-1, 1] {
        for b in [-1, 1] {
            ids &= pm_identity_check(a, b).unwrap();
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(81);
    let s = MeasurementSetting::photon(0.0);
    let mut all = true;
    let mut min_margin = f64::INFINITY;
    for _ in 0..1000 {
        let n = rng.random_range(1..=32usize);
        let raw: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-6).collect();
        let total: f64 = raw.iter().sum();
        let mut w: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let head: f64 = w[..n - 1].iter().sum();
        w[n - 1] = 1.0 - head;
        let sa: Vec<Sign> = (0..n).map(|_| Sign::from_bool(rng.random())).collect();
        let sb: Vec<Sign> = (0..n).map(|_| Sign::from_bool(rng.random())).collect();
        let m = DiscreteModel::new(w).unwrap().with_default(sa, sb).unwrap();
        let r = leggett_check(&exact_averages(&m, &s, &s).unwrap(), TOL_EXACT).unwrap();
        all &= r.satisfied;
        min_margin = min_margin.min(r.min_margin());
    }
    ensure(
        ids && all,
        format!("±1 identities = {ids}, 1000 models, min margin {min_margin:.3e}"),
    )
}

fn c9_monte_carlo() -> Outcome {
    let model = malus_product_model(0.3, 1.1);
    let offset = 0.5;
    let mut worst_z = 0.0f64;
    let mut failures = 0;
    for seed in 1..=20u64 {
        for k in 0..36 {
            let delta = TAU * k as f64 / 36.0;
            let a = MeasurementSetting::photon(offset + delta);
            let b = MeasurementSetting::photon(offset);
            let r = mc_averages(&model, &a, &b, MC_SAMPLES, seed).unwrap();
            let exact = model.exact_triple(&a, &b).unwrap();
            for (est, truth, se) in [
                (r.triple.av_a, exact.av_a, r.stderr_a),
                (r.triple.av_b, exact.av_b, r.stderr_b),
                (r.triple.av_ab, exact.av_ab, r.stderr_ab),
            ] {
                let dev = (est - truth).abs();
                if dev > MC_SIGMAS * se {
                    failures += 1;
                }
                if se > 0.0 {
                    worst_z = worst_z.max(dev / se);
                }
            }
        }
    }
    let a = MeasurementSetting::photon(1.2);
    let b = MeasurementSetting::photon(0.5);
    let r1 = mc_averages(&model, &a, &b, MC_SAMPLES, 7).unwrap();
    let r2 = mc_averages(&model, &a, &b, MC_SAMPLES, 7).unwrap();
    let identical = serde_json::to_string(&r1).unwrap() == serde_json::to_string(&r2).unwrap()
        && r1.triple.av_ab.to_bits() == r2.triple.av_ab.to_bits();
    ensure(
        failures == 0 && identical,
        format!("{failures} of 2160 estimates outside 4σ (max z {worst_z:.2}), reproducible = {identical}"),
    )
}

fn c10_cli() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_leggett");
    let code = |args: &[&str]| {
        Command::new(bin)
            .args(args)
            .output()
            .map(|o| (o.status.code(), o.stdout))
            .map_err(|e| e.to_string())
    };
    let (verify, _) = code(&["verify"])?;
    let (check, _) = code(&["check", "--av-a", "1", "--av-b", "-1", "--av-ab", "1"])?;
    let (bad, _) = code(&["sweep", "--state", "psi-plus", "--grid", "abc"])?;
    let (unknown, _) = code(&["sweep", "--bogus"])?;
    let (sweep, out) = code(&["sweep", "--state", "psi-plus", "--grid", "360"])?;
    let text = String::from_utf8_lossy(&out);
    let header = text.lines().next().unwrap_or_default().to_string();
    let header_ok =
        header == "delta,av_a,av_b,av_ab_paper,av_ab_oracle,lower,upper,margin_lower,margin_upper,satisfied";
    let rows = text.lines().count().saturating_sub(1);
    ensure(
        verify == Some(0) && check == Some(1) && bad == Some(2) && unknown == Some(2) && sweep == Some(0) && header_ok && rows == 360,
        format!(
            "verify={verify:?} check={check:?} malformed={bad:?}/{unknown:?} sweep={sweep:?} rows={rows} header_ok={header_ok}"
        ),
    )
}

fn main() {
    let criteria: [(&str, Criterion); 10] = [
        ("1 reduced density matrices = I/2", c1_reduced_density),
        ("2 reduced purity = 1/2", c2_mixedness),
        ("3 single-side averages vanish", c3_vanishing_averages),
        ("4 joint probabilities match full trace", c4_closed_forms),
        (
            "5 closed-form correlation identities",
            c5_correlation_identity,
        ),
        ("6 singlet correlation = -a.b", c6_singlet),
        ("7 sweeps satisfy the bounds", c7_inequality_satisfaction),
        ("8 appendix identities and discrete models", c8_appendix),
        (
            "9 Monte Carlo agreement and reproducibility",
            c9_monte_carlo,
        ),
        ("10 CLI exit codes and header", c10_cli),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!(
        "{}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
