//! Acceptance gate: one PASS/FAIL line per criterion. Exits nonzero if any
//! criterion fails.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qecvar::analytics::{self, MomentSet};
use qecvar::code5::CodeTables;
use qecvar::errormodel::{build_w, AngleTriple, ErrorDistribution};
use qecvar::montecarlo::{self, FullReport, QubitMode, RunConfig, CONFIDENCE};
use qecvar::statevec::{self, PureState};
use qecvar::symbolic::{self, extract_generators, symbolic_wb};

const SEED: u64 = 20_240_611;
const MC_SAMPLES: u64 = 1_000_000;

struct Outcome {
    passed: bool,
    lines: Vec<String>,
}

impl Outcome {
    fn new() -> Outcome {
        Outcome {
            passed: true,
            lines: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if !ok {
            self.passed = false;
            self.lines.push(format!("FAILED: {what}"));
        } else {
            self.lines.push(what);
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.lines.push(what.into());
    }

    fn within(&mut self, start: Instant, limit: Duration) {
        let spent = start.elapsed();
        self.require(spent < limit, format!("runtime {:.2?} under {:?}", spent, limit));
    }
}

/// Full Monte Carlo reports, shared between criteria that use the same run.
struct Runs(HashMap<(u8, u64), FullReport>);

impl Runs {
    fn get(&mut self, dist: ErrorDistribution, key: u64, qubits: QubitMode) -> &FullReport {
        let tag = qubits.count() as u8;
        self.0.entry((tag, key)).or_insert_with(|| {
            let cfg = RunConfig::new(dist, MC_SAMPLES, SEED).with_qubits(qubits);
            montecarlo::run_full(&cfg).expect("valid config")
        })
    }

    fn normal(&mut self, sigma: f64, qubits: QubitMode) -> &FullReport {
        self.get(ErrorDistribution::normal(sigma).unwrap(), sigma.to_bits(), qubits)
    }
}

fn fmt_est(e: &montecarlo::EstimateReport) -> String {
    format!("{:.6} +- {:.2e}", e.value, e.std_error)
}

fn criterion_1() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let t = AngleTriple::new(rng.random::<f64>() * PI, rng.random::<f64>() * PI, rng.random::<f64>() * TAU)
            .unwrap();
        let re: [f64; 4] = std::array::from_fn(|_| rng.random::<f64>() - 0.5);
        let phi = PureState::normalized(vec![Complex64::new(re[0], re[1]), Complex64::new(re[2], re[3])]).unwrap();
        let psi = statevec::apply(&build_w(&t), &phi).unwrap();
        let gap = (statevec::dist_sq(&psi, &phi) - 2.0 * (1.0 - t.theta0().cos())).abs();
        worst = worst.max(gap);
    }
    out.require(worst <= 1e-12, format!("max deviation {worst:.2e} over 10^4 draws"));
    out.within(start, Duration::from_secs(1));
    out
}

fn criterion_2(runs: &mut Runs) -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    for sigma in [0.1, 0.5, 0.9] {
        let one = runs.normal(sigma, QubitMode::One).v_psi.clone();
        let five = runs.normal(sigma, QubitMode::Five).v_psi.clone();
        let (t1, t5) = (2.0 - 2.0 * sigma, 2.0 - 2.0 * sigma.powi(5));
        out.require(one.agrees_with(t1, CONFIDENCE), format!("sigma {sigma} n=1: {} vs {t1:.6}", fmt_est(&one)));
        out.require(five.agrees_with(t5, CONFIDENCE), format!("sigma {sigma} n=5: {} vs {t5:.6}", fmt_est(&five)));
    }
    out.within(start, Duration::from_secs(120));
    out
}

fn criterion_3(runs: &mut Runs, gens: &[symbolic::Generators]) -> Outcome {
    let mut out = Outcome::new();
    for sigma in [0.3, 0.9] {
        let d = ErrorDistribution::normal(sigma).unwrap();
        let moments = MomentSet::from_distribution(&d).unwrap();
        let (p0, ps) = analytics::syndrome_probs_analytic(&moments);
        let sym = symbolic::expected_p(gens, &moments);
        let s8 = sigma.powi(8);
        let (c0, cs) = ((1.0 + 15.0 * s8) / 16.0, (1.0 - s8) / 16.0);
        out.require(
            (p0 - c0).abs() < 1e-9 && (ps - cs).abs() < 1e-9,
            format!("sigma {sigma}: analytic ({p0:.9}, {ps:.9}) vs closed form"),
        );
        let sym_gap = (sym[0] - p0).abs().max(sym[1..].iter().map(|v| (v - ps).abs()).fold(0.0, f64::max));
        out.require(sym_gap < 1e-9, format!("sigma {sigma}: symbolic vs analytic gap {sym_gap:.1e}"));
        let mc = runs.normal(sigma, QubitMode::Five).five.clone().unwrap().syndrome_probs;
        out.require(
            mc[0].agrees_with(p0, CONFIDENCE) && mc[0].agrees_with(sym[0], CONFIDENCE),
            format!("sigma {sigma}: MC P0 {} vs {c0:.6}", fmt_est(&mc[0])),
        );
        let bad: Vec<usize> = (1..16)
            .filter(|&s| !(mc[s].agrees_with(ps, CONFIDENCE) && mc[s].agrees_with(sym[s], CONFIDENCE)))
            .collect();
        let worst = mc[1..].iter().map(|e| (e.value - cs).abs() / e.std_error).fold(0.0, f64::max);
        out.require(
            bad.is_empty(),
            format!("sigma {sigma}: MC P_s for s=1..15 vs {cs:.6}, worst {worst:.2} s.e., outside: {bad:?}"),
        );
    }
    out
}

fn criterion_4(report: &symbolic::VerificationReport, elapsed: Duration) -> Outcome {
    let mut out = Outcome::new();
    for name in ["wb_entry_counts", "generator_shape", "a_count_table", "printed_generators", "w_unitary"] {
        let c = report.check(name).expect("check exists");
        out.require(c.passed, format!("{name}: {}", c.detail));
    }
    out.note(format!("A-count row s=0 {:?}, s=1 {:?}", report.a_counts[0], report.a_counts[1]));
    out.require(elapsed < Duration::from_secs(30), format!("runtime {elapsed:.2?} under 30s"));
    out
}

fn criterion_5(report: &symbolic::VerificationReport) -> Outcome {
    let mut out = Outcome::new();
    for name in ["printed_flip_sets", "flip_sets_feasible"] {
        let c = report.check(name).expect("check exists");
        out.require(c.passed, format!("{name}: {}", c.detail));
    }
    let cfg = RunConfig::new(ErrorDistribution::normal(0.7).unwrap(), 4096, SEED);
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for &(s, set) in &report.flip_sets {
        let Some(set) = set else {
            failures.push(format!("s={s}: no flip set"));
            continue;
        };
        if !set.is_a_free() {
            failures.push(format!("s={s}: set {set} contains an A variable"));
        }
        let r = montecarlo::central_symmetry_check(&cfg, s, set).unwrap();
        worst = worst.max(r.max_state_deviation);
        if !r.deterministic_pass() || r.pairs_checked != montecarlo::SYMMETRY_PAIRS {
            failures.push(format!("s={s}: paired test failed ({} pairs)", r.pairs_checked));
        }
    }
    out.require(
        report.flip_sets.len() == 15 && failures.is_empty(),
        format!(
            "{} syndromes with A-free flip sets, 10^3 paired draws each, max deviation {worst:.1e} {failures:?}",
            report.flip_sets.len()
        ),
    );
    out
}

fn criterion_6(runs: &mut Runs) -> Outcome {
    let mut out = Outcome::new();
    for sigma in [0.5, 0.9] {
        let f = runs.normal(sigma, QubitMode::Five).five.clone().unwrap();
        let mut bad = Vec::new();
        let mut worst = 0.0f64;
        for s in 1..16 {
            match &f.v_conditional[s] {
                Some(v) => {
                    worst = worst.max((v.value - 2.0).abs() / v.std_error);
                    if !v.agrees_with(2.0, CONFIDENCE) {
                        bad.push(s);
                    }
                }
                None => bad.push(s),
            }
        }
        out.require(
            bad.is_empty(),
            format!("sigma {sigma}: V(Phi~_s) = 2 for s=1..15, worst {worst:.2} s.e., outside: {bad:?}"),
        );
    }
    out
}

fn criterion_7(runs: &mut Runs) -> Outcome {
    let mut out = Outcome::new();
    for sigma in [0.5, 0.9] {
        let r = runs.normal(sigma, QubitMode::Five).clone();
        let f = r.five.unwrap();
        out.note(format!(
            "sigma {sigma}: V(Psi) {}, V(Phi~) {}",
            fmt_est(&r.v_psi),
            fmt_est(&f.v_corrected)
        ));
        out.require(
            f.identity_gap.agrees_with(0.0, CONFIDENCE),
            format!(
                "sigma {sigma}: V(Phi~) - V(Psi) - 2 E[a0 term] = {}",
                fmt_est(&f.identity_gap)
            ),
        );
        out.require(
            f.a0_term.value > CONFIDENCE * f.a0_term.std_error,
            format!("sigma {sigma}: E[a0 (1 - sqrt P0)] = {}", fmt_est(&f.a0_term)),
        );
    }
    out
}

fn criterion_8(runs: &mut Runs) -> Outcome {
    let mut out = Outcome::new();
    let u = ErrorDistribution::uniform();
    let vq = analytics::quantum_variance_one_qubit(&u).unwrap();
    out.require((vq - 2.0 / 3.0).abs() <= 1e-6, format!("quadrature V_q = {vq:.12}"));
    let r = runs.get(u, u64::MAX, QubitMode::One);
    out.require(r.vq.agrees_with(2.0 / 3.0, CONFIDENCE), format!("MC V_q = {}", fmt_est(&r.vq)));
    let s = r.sandwich;
    out.require(
        s.holds(),
        format!("{:.6} <= F = {:.6} <= {:.6}", s.lower, s.fidelity, s.upper),
    );
    out.note(format!("F = {} vs sqrt(1/2)", fmt_est(&r.fidelity)));
    out
}

fn criterion_9() -> Outcome {
    let mut out = Outcome::new();
    let mut worst = 0.0f64;
    for k in 0..10 {
        let sigma = k as f64 / 10.0;
        for i in analytics::appendix_integrals(sigma).unwrap() {
            worst = worst.max((i.closed_form - i.quadrature).abs());
        }
    }
    out.require(worst <= 1e-9, format!("max |closed form - quadrature| = {worst:.1e} over 40 integrals"));
    out
}

fn bits(r: &FullReport) -> Vec<(String, u64, u64)> {
    r.estimates()
        .into_iter()
        .map(|e| (e.name, e.value.to_bits(), e.std_error.to_bits()))
        .collect()
}

fn criterion_10() -> Outcome {
    let mut out = Outcome::new();
    let cfg = RunConfig::new(ErrorDistribution::normal(0.7).unwrap(), 200_000, SEED);
    let a = montecarlo::run_full(&cfg).unwrap();
    let b = montecarlo::run_full(&cfg).unwrap();
    let c = montecarlo::run_full(&cfg.clone().with_workers(4)).unwrap();
    out.require(bits(&a) == bits(&b), "same seed twice: bit-identical estimates");
    out.require(bits(&a) == bits(&c), "workers 1 and 4: bit-identical estimates");
    let d = montecarlo::run_full(&RunConfig { seed: SEED + 1, ..cfg }).unwrap();
    out.require(bits(&a) != bits(&d), "a different seed changes the estimates");
    out
}

fn main() {
    let mut runs = Runs(HashMap::new());
    let sym_start = Instant::now();
    let report = symbolic::run_verification(&CodeTables::build());
    let sym_elapsed = sym_start.elapsed();
    let gens = extract_generators(&symbolic_wb(&CodeTables::build()));

    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "one-qubit norm identity", criterion_1()),
        (2, "variance closed forms", criterion_2(&mut runs)),
        (3, "syndrome probabilities", criterion_3(&mut runs, &gens)),
        (4, "symbolic suite", criterion_4(&report, sym_elapsed)),
        (5, "central symmetry", criterion_5(&report)),
        (6, "maximum conditional variance", criterion_6(&mut runs)),
        (7, "non-correction inequality", criterion_7(&mut runs)),
        (8, "quantum variance and fidelity", criterion_8(&mut runs)),
        (9, "appendix integrals", criterion_9()),
        (10, "reproducibility", criterion_10()),
    ];

    let mut all = true;
    for (n, title, o) in &results {
        all &= o.passed;
        println!("{} criterion {n}: {title}", if o.passed { "PASS" } else { "FAIL" });
        for line in &o.lines {
            println!("    {line}");
        }
    }
    if !all {
        std::process::exit(1);
    }
}
