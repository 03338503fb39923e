//! Closed forms for the variances, syndrome probabilities and quantum
//! variance, expressed through a handful of moments of the error density.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::errormodel::{DistributionKind, ErrorDistribution};
use crate::quadrature;
use crate::{Error, Result};

const FOUR_PI: f64 = 4.0 * PI;

/// Moments `E[g] = integral_0^pi f(t) g(t) dt` of an error density.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MomentSet {
    pub m_cos_sin2: f64,
    pub m_cos2_sin2: f64,
    pub m_sin4: f64,
    pub m_sin2: f64,
}

impl MomentSet {
    /// Moments by quadrature. In the error-free limit, which has no
    /// density, the same numbers come from the point mass at zero.
    pub fn from_distribution(d: &ErrorDistribution) -> Result<MomentSet> {
        if *d.kind() == DistributionKind::ErrorFree {
            let e = |h: fn(f64) -> f64| d.marginal_expectation(h).map(|v| v / FOUR_PI);
            return Ok(MomentSet {
                m_cos_sin2: e(f64::cos)?,
                m_cos2_sin2: e(|t| t.cos().powi(2))?,
                m_sin4: e(|t| t.sin().powi(2))?,
                m_sin2: e(|_| 1.0)?,
            });
        }
        let m = MomentSet {
            m_cos_sin2: d.moment(|t| t.cos() * t.sin().powi(2))?,
            m_cos2_sin2: d.moment(|t| (t.cos() * t.sin()).powi(2))?,
            m_sin4: d.moment(|t| t.sin().powi(4))?,
            m_sin2: d.moment(|t| t.sin().powi(2))?,
        };
        if (FOUR_PI * m.m_sin2 - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalizedDensity(FOUR_PI * m.m_sin2));
        }
        Ok(m)
    }

    /// Exact moments of the normal family.
    pub fn normal_closed_form(sigma: f64) -> MomentSet {
        let s2 = sigma * sigma;
        MomentSet {
            m_cos_sin2: sigma / FOUR_PI,
            m_cos2_sin2: (1.0 + 3.0 * s2) / (16.0 * PI),
            m_sin4: 3.0 * (1.0 - s2) / (16.0 * PI),
            m_sin2: 1.0 / FOUR_PI,
        }
    }

    /// `E[A_u]` for the first angle's cosine.
    pub fn e_a(&self) -> f64 {
        FOUR_PI * self.m_cos_sin2
    }

    /// `E[A_u^2]`.
    pub fn e_a2(&self) -> f64 {
        FOUR_PI * self.m_cos2_sin2
    }

    /// `E[B_u^2] = E[C_u^2] = E[D_u^2]`.
    pub fn e_b2(&self) -> f64 {
        FOUR_PI / 3.0 * self.m_sin4
    }
}

pub fn variance_one_qubit(m: &MomentSet) -> f64 {
    2.0 - 2.0 * FOUR_PI * m.m_cos_sin2
}

pub fn variance_n_qubit(m: &MomentSet, n: u32) -> f64 {
    2.0 - 2.0 * (FOUR_PI * m.m_cos_sin2).powi(n as i32)
}

/// Variance of `n` independent errors each of variance `tau`.
pub fn variance_sum(tau: f64, n: u32) -> f64 {
    2.0 - 2.0 * (1.0 - tau / 2.0).powi(n as i32)
}

/// `(E[P_0], E[P_s])` for `s > 0`.
pub fn syndrome_probs_analytic(m: &MomentSet) -> (f64, f64) {
    let (a, b) = (m.m_cos2_sin2, m.m_sin4);
    let pre = FOUR_PI.powi(5);
    let p0 = pre
        * (a.powi(5) + 30.0 / 27.0 * a.powi(2) * b.powi(3) + 15.0 / 81.0 * a * b.powi(4) + 18.0 / 243.0 * b.powi(5));
    let ps = pre
        * (a.powi(4) * b / 3.0
            + 6.0 / 9.0 * a.powi(3) * b.powi(2)
            + 16.0 / 27.0 * a.powi(2) * b.powi(3)
            + 26.0 / 81.0 * a * b.powi(4)
            + 15.0 / 243.0 * b.powi(5));
    (p0, ps)
}

/// `E[a_0]`: only the all-`A` monomial has a nonzero mean.
pub fn expected_a0(m: &MomentSet) -> f64 {
    (FOUR_PI * m.m_cos_sin2).powi(5)
}

/// `V(corrected) = V(Psi) + 2 E[a_0 (1 - sqrt(P_0))]`.
pub fn corrected_variance_identity(v_psi: f64, e_term: f64) -> f64 {
    v_psi + 2.0 * e_term
}

/// Variance of the corrected state conditioned on syndrome zero.
pub fn corrected_variance_s0(e_a0: f64, e_p0: f64, e_a0_term: f64) -> Result<f64> {
    if !(e_p0 > 0.0) {
        return Err(Error::InvalidParameter(format!("E[P_0] = {e_p0} must be positive")));
    }
    Ok(2.0 - 2.0 * e_a0 / e_p0 + 2.0 * e_a0_term / e_p0)
}

/// Combines the syndrome-zero variance with variance 2 on every other
/// syndrome.
pub fn corrected_variance_from_parts(e_p0: f64, v_s0: f64) -> f64 {
    e_p0 * v_s0 + 2.0 * (1.0 - e_p0)
}

/// Weight of the quantum variance, `1 + cos^2(t) atanh(sin t) / sin t`.
/// It tends to 2 at both ends of `[0, pi]` and equals 1 at `pi / 2`.
pub fn quantum_variance_weight(theta0: f64) -> f64 {
    let (s, c) = theta0.sin_cos();
    let s = s.abs();
    if c == 0.0 {
        return 1.0;
    }
    let ratio = if s < 1e-4 {
        // atanh(s)/s = 1 + s^2/3 + s^4/5 + ...
        let s2 = s * s;
        1.0 + s2 / 3.0 + s2 * s2 / 5.0
    } else {
        // atanh(s) = ln((1+s)/|cos t|) avoids cancellation near pi/2
        ((1.0 + s) / c.abs()).ln() / s
    };
    1.0 + c * c * ratio
}

pub fn variance_weight(theta0: f64) -> f64 {
    2.0 * theta0.cos()
}

/// `V_q = 2 - E[w_q(t0)]` under the marginal of the first angle.
pub fn quantum_variance_one_qubit(d: &ErrorDistribution) -> Result<f64> {
    let e = d.marginal_expectation_with_knots(quantum_variance_weight, &[FRAC_PI_2])?;
    Ok(2.0 - e)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AppendixIntegral {
    pub name: &'static str,
    pub closed_form: f64,
    pub quadrature: f64,
}

/// The four integrals of `g(t) / (1 + s^2 - 2 s cos t)^2` over `[0, pi]` for
/// `g = sin^2, cos sin^2, sin^4, cos^2 sin^2`, in closed form and by
/// quadrature.
pub fn appendix_integrals(sigma: f64) -> Result<[AppendixIntegral; 4]> {
    if !(0.0..1.0).contains(&sigma) {
        return Err(Error::InvalidParameter(format!("sigma = {sigma} must lie in [0, 1)")));
    }
    let s2 = sigma * sigma;
    let denom = move |t: f64| (1.0 + s2 - 2.0 * sigma * t.cos()).powi(2);
    let quad = |g: &dyn Fn(f64) -> f64| quadrature::integrate(|t| g(t) / denom(t), 0.0, PI, 1e-12);
    Ok([
        AppendixIntegral {
            name: "sin2",
            closed_form: PI / (2.0 * (1.0 - s2)),
            quadrature: quad(&|t: f64| t.sin().powi(2))?,
        },
        AppendixIntegral {
            name: "cos_sin2",
            closed_form: PI * sigma / (2.0 * (1.0 - s2)),
            quadrature: quad(&|t: f64| t.cos() * t.sin().powi(2))?,
        },
        AppendixIntegral {
            name: "sin4",
            closed_form: 3.0 * PI / 8.0,
            quadrature: quad(&|t: f64| t.sin().powi(4))?,
        },
        AppendixIntegral {
            name: "cos2_sin2",
            closed_form: PI / 8.0 * (1.0 + 3.0 * s2) / (1.0 - s2),
            quadrature: quad(&|t: f64| (t.cos() * t.sin()).powi(2))?,
        },
    ])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeightPoint {
    pub theta0: f64,
    pub w_quantum: f64,
    pub w_variance: f64,
}

/// Both weights on `grid` equally spaced points covering `[0, pi]`.
pub fn weight_curves(grid: usize) -> Result<Vec<WeightPoint>> {
    if grid < 2 {
        return Err(Error::InvalidParameter(format!("grid = {grid} must be at least 2")));
    }
    Ok((0..grid)
        .map(|i| {
            let theta0 = if i + 1 == grid { PI } else { i as f64 * PI / (grid - 1) as f64 };
            WeightPoint {
                theta0,
                w_quantum: quantum_variance_weight(theta0),
                w_variance: variance_weight(theta0),
            }
        })
        .collect())
}
