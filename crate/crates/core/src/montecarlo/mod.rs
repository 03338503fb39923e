//! Seeded, parallel Monte Carlo estimators.
//!
//! Every estimator averages over the error measure only. Instead of
//! sampling a syndrome, each error draw contributes all 16 outcomes weighted
//! by their probabilities `P_s`. Each draw also uses a fresh logical state,
//! uniform on the unit sphere.
//!
//! Runs are bit-reproducible. Samples are split into fixed chunks of
//! [`CHUNK_SIZE`](rng::CHUNK_SIZE), each chunk draws from its own ChaCha
//! stream keyed by `(seed, chunk)`, and chunk accumulators are merged in
//! chunk order. The worker count therefore changes only the wall time.

mod accumulate;
mod kernel;
pub mod rng;

use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use crate::code5::{CodeTables, LogicalCoords, N_SYNDROMES};
use crate::errormodel::{apply_signflip, AngleSample, ErrorDistribution};
use crate::symbolic::FlipSet;
use crate::{Error, Result};

pub use kernel::{CONSERVATION_TOL, W_INDEPENDENCE_TOL};
pub use rng::{CheckTally, CHUNK_SIZE};

use kernel::{five, one};

/// Number of paired draws in the deterministic part of
/// [`central_symmetry_check`].
pub const SYMMETRY_PAIRS: usize = 1000;
/// Tolerance of the paired negation test on corrected states.
pub const SYMMETRY_STATE_TOL: f64 = 1e-10;
/// Tolerance of the paired test on syndrome probabilities.
pub const SYMMETRY_PROB_TOL: f64 = 1e-12;
/// Confidence radius in standard errors used by every statistical check.
pub const CONFIDENCE: f64 = 3.0;

const SYMMETRY_STREAM_BASE: u64 = 1 << 48;
const ROUNDING_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QubitMode {
    /// A single `W` on one unencoded qubit.
    One,
    /// The product error on the encoded five-qubit state.
    Five,
}

impl QubitMode {
    pub fn count(self) -> u32 {
        match self {
            QubitMode::One => 1,
            QubitMode::Five => 5,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub distribution: Arc<ErrorDistribution>,
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
    pub qubits: QubitMode,
}

impl RunConfig {
    /// Five-qubit mode on one worker.
    pub fn new(distribution: ErrorDistribution, samples: u64, seed: u64) -> RunConfig {
        RunConfig {
            distribution: Arc::new(distribution),
            samples,
            seed,
            workers: 1,
            qubits: QubitMode::Five,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> RunConfig {
        self.workers = workers;
        self
    }

    pub fn with_qubits(mut self, qubits: QubitMode) -> RunConfig {
        self.qubits = qubits;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidParameter("sample count must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::InvalidParameter("worker count must be at least 1".into()));
        }
        Ok(())
    }

    fn require_five(&self, what: &str) -> Result<()> {
        if self.qubits != QubitMode::Five {
            return Err(Error::InvalidParameter(format!("{what} needs the five-qubit mode")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateReport {
    pub name: String,
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
    /// Seconds spent in the pass that produced the estimate. Not persisted,
    /// so that saved records are reproducible byte for byte.
    #[serde(skip)]
    pub wall_time: f64,
}

impl EstimateReport {
    /// Whether `target` lies within `k` standard errors of the estimate.
    pub fn agrees_with(&self, target: f64, k: f64) -> bool {
        (self.value - target).abs() <= k * self.std_error
    }
}

/// `1 - V_q/2 <= F <= sqrt(1 - V_q/2)`, each side allowed
/// [`CONFIDENCE`] combined standard errors of slack plus a little room for
/// rounding when the error bars vanish.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SandwichCheck {
    pub lower: f64,
    pub fidelity: f64,
    pub upper: f64,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

impl SandwichCheck {
    pub fn holds(&self) -> bool {
        self.lower_holds && self.upper_holds
    }

    fn new(vq: &EstimateReport, f: &EstimateReport) -> SandwichCheck {
        let x = 1.0 - vq.value / 2.0;
        let se_x = vq.std_error / 2.0;
        let lower_se = se_x.hypot(f.std_error);
        let upper = x.max(0.0).sqrt();
        let upper_se = if x > 0.0 { f.std_error.hypot(se_x / (2.0 * upper)) } else { f64::INFINITY };
        SandwichCheck {
            lower: x,
            fidelity: f.value,
            upper,
            lower_holds: x - f.value <= CONFIDENCE * lower_se + ROUNDING_SLACK,
            upper_holds: f.value - upper <= CONFIDENCE * upper_se + ROUNDING_SLACK,
        }
    }
}

/// Estimates that only exist for the encoded five-qubit state.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiveQubitEstimates {
    pub syndrome_probs: Vec<EstimateReport>,
    pub v_corrected: EstimateReport,
    /// `V(Phi~_s) = E[P_s dist^2] / E[P_s]`, absent when no sample reached `s`.
    pub v_conditional: Vec<Option<EstimateReport>>,
    pub a0: EstimateReport,
    pub a0_term: EstimateReport,
    /// Paired estimate of `V(Phi~) - V(Psi) - 2 E[a_0 (1 - sqrt(P_0))]`.
    pub identity_gap: EstimateReport,
    /// Paired estimate of `V(Phi~) - V(Psi)`.
    pub excess: EstimateReport,
    pub conservation: CheckTally,
    pub w_independence: CheckTally,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FullReport {
    pub qubits: QubitMode,
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
    pub v_psi: EstimateReport,
    pub vq: EstimateReport,
    pub fidelity: EstimateReport,
    pub sandwich: SandwichCheck,
    pub five: Option<FiveQubitEstimates>,
    #[serde(skip)]
    pub wall_time: f64,
}

impl FullReport {
    /// Per-sample assertions: probability conservation, w-independence of
    /// the syndrome probabilities, and the fidelity sandwich.
    pub fn assertions_passed(&self) -> bool {
        let five_ok = self
            .five
            .as_ref()
            .is_none_or(|f| f.conservation.violations == 0 && f.w_independence.violations == 0);
        five_ok && self.sandwich.holds()
    }

    /// Every estimate in a flat list, in a stable order.
    pub fn estimates(&self) -> Vec<EstimateReport> {
        let mut out = vec![self.v_psi.clone(), self.vq.clone(), self.fidelity.clone()];
        if let Some(f) = &self.five {
            out.extend(f.syndrome_probs.iter().cloned());
            out.push(f.v_corrected.clone());
            out.extend(f.v_conditional.iter().flatten().cloned());
            out.push(f.a0.clone());
            out.push(f.a0_term.clone());
            out.push(f.identity_gap.clone());
            out.push(f.excess.clone());
        }
        out
    }
}

struct Reporter {
    samples: u64,
    seed: u64,
    wall_time: f64,
}

impl Reporter {
    fn report(&self, name: impl Into<String>, value: f64, std_error: f64) -> EstimateReport {
        EstimateReport {
            name: name.into(),
            value,
            std_error,
            samples: self.samples,
            seed: self.seed,
            wall_time: self.wall_time,
        }
    }
}

/// One pass computing every estimator at once.
pub fn run_full(cfg: &RunConfig) -> Result<FullReport> {
    cfg.validate()?;
    let start = Instant::now();
    let dist = cfg.distribution.as_ref();
    let (moments, five_checks) = match cfg.qubits {
        QubitMode::One => {
            let pass = rng::run_pass(cfg.samples, cfg.seed, cfg.workers, 0, one::WIDTH, &[], [], |rng, out| {
                kernel::one_qubit_kernel(dist, rng, out);
                []
            })?;
            (pass.moments, None)
        }
        QubitMode::Five => {
            let tables = CodeTables::build();
            let pass = rng::run_pass(
                cfg.samples,
                cfg.seed,
                cfg.workers,
                0,
                five::WIDTH,
                &five::ratio_pairs(),
                [CONSERVATION_TOL, W_INDEPENDENCE_TOL],
                |rng, out| kernel::five_qubit_kernel(&tables, dist, rng, out),
            )?;
            (pass.moments, Some(pass.checks))
        }
    };
    debug_assert_eq!(moments.count(), cfg.samples);
    let r = Reporter {
        samples: cfg.samples,
        seed: cfg.seed,
        wall_time: start.elapsed().as_secs_f64(),
    };
    let m = &moments;
    let col = |name: &str, k: usize| r.report(name, m.mean(k), m.std_error(k));
    let (dist_col, ov, ov2) = match cfg.qubits {
        QubitMode::One => (one::DIST, one::OV, one::OV2),
        QubitMode::Five => (five::DIST, five::OV, five::OV2),
    };
    let v_psi = col("v_psi", dist_col);
    let vq = r.report("vq", 2.0 - 2.0 * m.mean(ov), 2.0 * m.std_error(ov));
    let f = m.mean(ov2).max(0.0).sqrt();
    let f_se = if f > 0.0 { m.std_error(ov2) / (2.0 * f) } else { 0.0 };
    let fidelity = r.report("fidelity", f, f_se);
    let sandwich = SandwichCheck::new(&vq, &fidelity);
    let five = five_checks.map(|checks| FiveQubitEstimates {
        syndrome_probs: (0..N_SYNDROMES).map(|s| col(&format!("p_s{s}"), five::P + s)).collect(),
        v_corrected: col("v_corrected", five::V_CORR),
        v_conditional: (0..N_SYNDROMES)
            .map(|s| {
                m.ratio(five::PD + s, five::P + s)
                    .map(|(v, se)| r.report(format!("v_corrected_s{s}"), v, se))
            })
            .collect(),
        a0: col("a0", five::A0),
        a0_term: col("a0_term", five::A0_TERM),
        identity_gap: col("identity_gap", five::DIFF),
        excess: col("v_corrected_minus_v_psi", five::EXCESS),
        conservation: checks[0],
        w_independence: checks[1],
    });
    Ok(FullReport {
        qubits: cfg.qubits,
        samples: cfg.samples,
        seed: cfg.seed,
        workers: cfg.workers,
        v_psi,
        vq,
        fidelity,
        sandwich,
        five,
        wall_time: r.wall_time,
    })
}

/// `E[||Psi - Phi||^2]` in the configured qubit mode.
pub fn estimate_v_psi(cfg: &RunConfig) -> Result<EstimateReport> {
    Ok(run_full(cfg)?.v_psi)
}

/// `E[P_s]` for all 16 syndromes.
pub fn estimate_syndrome_probs(cfg: &RunConfig) -> Result<Vec<EstimateReport>> {
    cfg.require_five("syndrome probabilities")?;
    Ok(run_full(cfg)?.five.expect("five-qubit mode").syndrome_probs)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrectedVariance {
    pub total: EstimateReport,
    pub conditional: Vec<Option<EstimateReport>>,
    pub syndrome_probs: Vec<EstimateReport>,
}

/// `V(Phi~)` together with the conditional variances `V(Phi~_s)`.
pub fn estimate_v_corrected(cfg: &RunConfig) -> Result<CorrectedVariance> {
    cfg.require_five("the corrected variance")?;
    let f = run_full(cfg)?.five.expect("five-qubit mode");
    Ok(CorrectedVariance {
        total: f.v_corrected,
        conditional: f.v_conditional,
        syndrome_probs: f.syndrome_probs,
    })
}

/// `E[a_0 (1 - sqrt(P_0))]`.
pub fn estimate_a0_term(cfg: &RunConfig) -> Result<EstimateReport> {
    cfg.require_five("the a0 term")?;
    Ok(run_full(cfg)?.five.expect("five-qubit mode").a0_term)
}

/// Quantum variance `2 - 2 E|<Phi|Psi>|` and fidelity `sqrt(E|<Phi|Psi>|^2)`.
pub fn estimate_vq_fidelity(cfg: &RunConfig) -> Result<(EstimateReport, EstimateReport, SandwichCheck)> {
    let r = run_full(cfg)?;
    Ok((r.vq, r.fidelity, r.sandwich))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CentralSymmetryReport {
    pub syndrome: usize,
    pub flip_set: FlipSet,
    /// Pairs where syndrome `s` was reachable and the comparison was made.
    pub pairs_checked: usize,
    pub max_state_deviation: f64,
    pub max_prob_deviation: f64,
    /// The fifteen angles of the first draw breaking the paired test.
    pub first_failure: Option<Vec<f64>>,
    /// Mean of `Phi~_s` given syndrome `s`, in the frame
    /// `(Phi, i Phi, Phi_perp, i Phi_perp)`.
    pub frame_means: Vec<EstimateReport>,
}

impl CentralSymmetryReport {
    pub fn deterministic_pass(&self) -> bool {
        self.first_failure.is_none()
    }

    pub fn statistical_pass(&self) -> bool {
        self.frame_means.iter().all(|e| e.agrees_with(0.0, CONFIDENCE))
    }
}

fn angles_of(sample: &AngleSample) -> Vec<f64> {
    sample
        .triples()
        .iter()
        .flat_map(|t| [t.theta0(), t.theta1(), t.theta2()])
        .collect()
}

/// Checks that flipping the signs of `flips` negates the corrected state
/// of syndrome `s` while keeping `P_s`. The paired test runs on
/// [`SYMMETRY_PAIRS`] draws and the conditional mean on `cfg.samples`.
pub fn central_symmetry_check(cfg: &RunConfig, s: usize, flips: FlipSet) -> Result<CentralSymmetryReport> {
    cfg.validate()?;
    cfg.require_five("the central symmetry check")?;
    if s >= N_SYNDROMES {
        return Err(Error::SyndromeOutOfRange(s));
    }
    let start = Instant::now();
    let tables = CodeTables::build();
    let dist = cfg.distribution.as_ref();

    let stream = SYMMETRY_STREAM_BASE * (s as u64 + 1);
    let mut rng = rng::chunk_rng(cfg.seed, stream - 1);
    let mut report = CentralSymmetryReport {
        syndrome: s,
        flip_set: flips,
        pairs_checked: 0,
        max_state_deviation: 0.0,
        max_prob_deviation: 0.0,
        first_failure: None,
        frame_means: Vec::new(),
    };
    for _ in 0..SYMMETRY_PAIRS {
        let d = kernel::draw_five(&tables, dist, &mut rng);
        let flipped = kernel::evaluate_five(&tables, apply_signflip(&d.sample, &flips), d.w);
        let dp = (d.probs[s] - flipped.probs[s]).abs();
        let corrected = |x: &kernel::FiveQubitDraw| -> Option<[Complex64; 2]> {
            let p = x.probs[s];
            (p > 1e-300).then(|| {
                let k = 1.0 / p.sqrt();
                [x.betas[2 * s] * k, x.betas[2 * s + 1] * k]
            })
        };
        let (Some(a), Some(b)) = (corrected(&d), corrected(&flipped)) else {
            continue;
        };
        report.pairs_checked += 1;
        let dev = (a[0] + b[0]).norm().max((a[1] + b[1]).norm());
        report.max_state_deviation = report.max_state_deviation.max(dev);
        report.max_prob_deviation = report.max_prob_deviation.max(dp);
        if (dev > SYMMETRY_STATE_TOL || dp > SYMMETRY_PROB_TOL) && report.first_failure.is_none() {
            report.first_failure = Some(angles_of(&d.sample));
        }
    }

    // Conditional mean of Phi~_s: E[P_s Phi~_s] / E[P_s] with
    // P_s Phi~_s = sqrt(P_s) (beta_2s, beta_2s+1).
    let pairs: Vec<(usize, usize)> = (0..4).map(|k| (k, 4)).collect();
    let pass = rng::run_pass(cfg.samples, cfg.seed, cfg.workers, stream, 5, &pairs, [], |rng, out| {
        let d = kernel::draw_five(&tables, dist, rng);
        let (alpha, gamma) = (d.w.alpha(), d.w.gamma());
        let root = d.probs[s].sqrt();
        let (x, y) = (d.betas[2 * s] * root, d.betas[2 * s + 1] * root);
        let along = alpha.conj() * x + gamma.conj() * y;
        let across = -gamma * x + alpha * y;
        out[0] = along.re;
        out[1] = along.im;
        out[2] = across.re;
        out[3] = across.im;
        out[4] = d.probs[s];
        []
    })?;
    let r = Reporter {
        samples: cfg.samples,
        seed: cfg.seed,
        wall_time: start.elapsed().as_secs_f64(),
    };
    report.frame_means = ["phi_re", "phi_im", "perp_re", "perp_im"]
        .iter()
        .enumerate()
        .map(|(k, label)| {
            let (v, se) = pass.moments.ratio(k, 4).unwrap_or((0.0, 0.0));
            r.report(format!("symmetry_s{s}_{label}"), v, se)
        })
        .collect();
    Ok(report)
}

/// Deterministic evaluation of the corrected state for one draw, exposed
/// for tests and diagnostics.
pub fn corrected_pair(sample: &AngleSample, w: &LogicalCoords, s: usize) -> Result<[Complex64; 2]> {
    let tables = CodeTables::build();
    let d = kernel::evaluate_five(&tables, *sample, *w);
    crate::code5::SyndromeDecomposition::from_betas(d.betas).corrected_state(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(d: ErrorDistribution, n: u64) -> RunConfig {
        RunConfig::new(d, n, 7)
    }

    #[test]
    fn error_free_is_exact() {
        let r = run_full(&cfg(ErrorDistribution::error_free(), 3000)).unwrap();
        assert_eq!(r.v_psi.value, 0.0);
        let f = r.five.as_ref().unwrap();
        assert_eq!(f.v_corrected.value, 0.0);
        assert_eq!(f.a0_term.value, 0.0);
        assert_eq!(f.syndrome_probs[0].value, 1.0);
        assert!(f.v_conditional[1].is_none());
        assert!(r.vq.value.abs() < 1e-15 && (r.fidelity.value - 1.0).abs() < 1e-15);
        let one = run_full(&cfg(ErrorDistribution::error_free(), 100).with_qubits(QubitMode::One)).unwrap();
        assert_eq!(one.v_psi.value, 0.0);
        assert!(one.five.is_none());
    }

    #[test]
    fn consistency_of_the_corrected_variance() {
        let r = run_full(&cfg(ErrorDistribution::normal(0.6).unwrap(), 5000)).unwrap();
        let f = r.five.unwrap();
        let rebuilt: f64 = (0..N_SYNDROMES)
            .map(|s| f.syndrome_probs[s].value * f.v_conditional[s].as_ref().unwrap().value)
            .sum();
        assert!((rebuilt - f.v_corrected.value).abs() < 1e-12);
        let total: f64 = f.syndrome_probs.iter().map(|p| p.value).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert_eq!(f.conservation.violations, 0);
        assert_eq!(f.w_independence.violations, 0);
    }

    #[test]
    fn single_qubit_mode_rejects_five_qubit_estimators() {
        let c = cfg(ErrorDistribution::uniform(), 10).with_qubits(QubitMode::One);
        assert!(estimate_syndrome_probs(&c).is_err());
        assert!(estimate_v_psi(&c).is_ok());
        assert!(cfg(ErrorDistribution::uniform(), 0).validate().is_err());
        assert!(cfg(ErrorDistribution::uniform(), 1).with_workers(0).validate().is_err());
    }

    #[test]
    fn single_sample_has_zero_error_bar() {
        let r = estimate_v_psi(&cfg(ErrorDistribution::uniform(), 1)).unwrap();
        assert_eq!(r.std_error, 0.0);
        assert_eq!(r.samples, 1);
    }
}
