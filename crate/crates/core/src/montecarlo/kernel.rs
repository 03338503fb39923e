//! Per-sample quantities. Each kernel draws one error and one logical
//! state and writes a fixed layout of reals.

use num_complex::Complex64;
use rand::Rng;

use crate::code5::{CodeTables, LogicalCoords, N_SYNDROMES};
use crate::errormodel::{w_gate, AngleSample, ErrorDistribution};

/// Column layout of the five-qubit kernel.
pub(crate) mod five {
    use crate::code5::N_SYNDROMES;

    /// `||Psi - Phi||^2`.
    pub const DIST: usize = 0;
    /// `P_s` at `P + s`.
    pub const P: usize = 1;
    /// `P_s ||Phi~_s - Phi||^2` at `PD + s`.
    pub const PD: usize = P + N_SYNDROMES;
    /// Sum over `s` of the previous block.
    pub const V_CORR: usize = PD + N_SYNDROMES;
    /// `a_0 (1 - sqrt(P_0))`.
    pub const A0_TERM: usize = V_CORR + 1;
    /// `V_CORR - DIST - 2 A0_TERM`, sample by sample.
    pub const DIFF: usize = A0_TERM + 1;
    /// `|<Phi|Psi>|`.
    pub const OV: usize = DIFF + 1;
    /// `|<Phi|Psi>|^2`.
    pub const OV2: usize = OV + 1;
    pub const A0: usize = OV2 + 1;
    /// `V_CORR - DIST`, the paired excess of the corrected variance.
    pub const EXCESS: usize = A0 + 1;
    pub const WIDTH: usize = EXCESS + 1;

    pub fn ratio_pairs() -> Vec<(usize, usize)> {
        (0..N_SYNDROMES).map(|s| (PD + s, P + s)).collect()
    }
}

/// Column layout of the single-qubit kernel.
pub(crate) mod one {
    pub const DIST: usize = 0;
    pub const OV: usize = 1;
    pub const OV2: usize = 2;
    pub const WIDTH: usize = 3;
}

/// Threshold on `|sum_s P_s - 1|`.
pub const CONSERVATION_TOL: f64 = 1e-12;
/// Threshold on the gap between `P_s` from the full decomposition and from
/// the generators alone.
pub const W_INDEPENDENCE_TOL: f64 = 1e-10;

/// Everything the five-qubit estimators need from one draw.
pub(crate) struct FiveQubitDraw {
    pub sample: AngleSample,
    pub w: LogicalCoords,
    pub betas: [Complex64; 32],
    pub probs: [f64; N_SYNDROMES],
    pub a0: f64,
    /// Largest `|P_s(beta) - P_s(generators)|`.
    pub w_gap: f64,
}

pub(crate) fn draw_five<R: Rng + ?Sized>(
    tables: &CodeTables,
    dist: &ErrorDistribution,
    rng: &mut R,
) -> FiveQubitDraw {
    let sample = AngleSample::random(dist, rng);
    let w = LogicalCoords::random(rng);
    evaluate_five(tables, sample, w)
}

pub(crate) fn evaluate_five(tables: &CodeTables, sample: AngleSample, w: LogicalCoords) -> FiveQubitDraw {
    let (b0, b1) = tables.evolved_logical_betas(&sample);
    let (alpha, gamma) = (w.alpha(), w.gamma());
    let betas: [Complex64; 32] = std::array::from_fn(|k| alpha * b0[k] + gamma * b1[k]);
    // P_s = a_s^2 + b_s^2 + c_s^2 + d_s^2 does not involve w, and is exact
    // for the identity error.
    let probs: [f64; N_SYNDROMES] = std::array::from_fn(|s| b0[2 * s].norm_sqr() + b1[2 * s].norm_sqr());
    let w_gap = (0..N_SYNDROMES)
        .map(|s| (betas[2 * s].norm_sqr() + betas[2 * s + 1].norm_sqr() - probs[s]).abs())
        .fold(0.0, f64::max);
    FiveQubitDraw {
        sample,
        w,
        betas,
        probs,
        a0: b0[0].re,
        w_gap,
    }
}

/// Fills the five-qubit layout. Returns the conservation and
/// w-independence deviations.
pub(crate) fn five_qubit_kernel<R: Rng + ?Sized>(
    tables: &CodeTables,
    dist: &ErrorDistribution,
    rng: &mut R,
    out: &mut [f64],
) -> [f64; 2] {
    let d = draw_five(tables, dist, rng);
    let (alpha, gamma) = (d.w.alpha(), d.w.gamma());
    out[five::DIST] = (d.betas[0] - alpha).norm_sqr()
        + (d.betas[1] - gamma).norm_sqr()
        + d.betas[2..].iter().map(|b| b.norm_sqr()).sum::<f64>();
    let mut v_corr = 0.0;
    for s in 0..N_SYNDROMES {
        let p = d.probs[s];
        let root = p.sqrt();
        // P_s ||Phi~_s - Phi||^2 = ||(beta_2s, beta_2s+1) - sqrt(P_s) Phi||^2
        let pd = (d.betas[2 * s] - alpha * root).norm_sqr() + (d.betas[2 * s + 1] - gamma * root).norm_sqr();
        out[five::P + s] = p;
        out[five::PD + s] = pd;
        v_corr += pd;
    }
    let a0_term = d.a0 * (1.0 - d.probs[0].sqrt());
    let ov = alpha.conj() * d.betas[0] + gamma.conj() * d.betas[1];
    out[five::V_CORR] = v_corr;
    out[five::A0_TERM] = a0_term;
    out[five::DIFF] = v_corr - out[five::DIST] - 2.0 * a0_term;
    out[five::OV] = ov.norm();
    out[five::OV2] = ov.norm_sqr();
    out[five::A0] = d.a0;
    out[five::EXCESS] = v_corr - out[five::DIST];
    [(d.probs.iter().sum::<f64>() - 1.0).abs(), d.w_gap]
}

/// Fills the single-qubit layout: one `W` acting on a random qubit state.
pub(crate) fn one_qubit_kernel<R: Rng + ?Sized>(dist: &ErrorDistribution, rng: &mut R, out: &mut [f64]) {
    let g = w_gate(&dist.sample_angles(rng));
    let w = LogicalCoords::random(rng);
    let phi = [w.alpha(), w.gamma()];
    let psi = [g[0][0] * phi[0] + g[0][1] * phi[1], g[1][0] * phi[0] + g[1][1] * phi[1]];
    let ov = phi[0].conj() * psi[0] + phi[1].conj() * psi[1];
    out[one::DIST] = (psi[0] - phi[0]).norm_sqr() + (psi[1] - phi[1]).norm_sqr();
    out[one::OV] = ov.norm();
    out[one::OV2] = ov.norm_sqr();
}
