//! The continuous single-qubit error operator, its five-fold tensor product,
//! and densities on the 3-sphere that depend only on the first angle.
//!
//! A density `f(t0)` is taken with respect to the volume element
//! `sin^2(t0) sin(t1) dt0 dt1 dt2`, so the marginal of `t0` is
//! `4 pi f(t0) sin^2(t0)` on `[0, pi]`. Every expectation over the sphere
//! reduces to a one-dimensional integral of that marginal.

use std::f64::consts::{PI, TAU};
use std::path::Path;

use num_complex::Complex64;
use rand::Rng;

use crate::quadrature::{self, DEFAULT_ABS_TOL};
use crate::statevec::{self, Gate2, Unitary};
use crate::symbolic::{FlipSet, VarId, VarKind, NUM_VARS};
use crate::{Error, Result};

/// Largest accepted `sigma` for the normal family; the density becomes a
/// point mass at 1.
pub const SIGMA_MAX: f64 = 1.0 - 1e-12;

const CDF_CELLS: usize = 4096;
const NORMALIZATION_TOL: f64 = 1e-9;
const TABULATED_NORMALIZATION_TOL: f64 = 1e-6;

/// Angles `(t0, t1, t2)` of one single-qubit error, with `t0, t1` in
/// `[0, pi]` and `t2` in `[0, 2 pi)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleTriple {
    theta0: f64,
    theta1: f64,
    theta2: f64,
}

impl AngleTriple {
    pub fn new(theta0: f64, theta1: f64, theta2: f64) -> Result<AngleTriple> {
        check_range("theta0", theta0, 0.0..=PI, "[0, pi]")?;
        check_range("theta1", theta1, 0.0..=PI, "[0, pi]")?;
        if !(0.0..TAU).contains(&theta2) {
            return Err(Error::AngleOutOfRange {
                name: "theta2",
                value: theta2,
                range: "[0, 2pi)",
            });
        }
        Ok(AngleTriple {
            theta0,
            theta1,
            theta2,
        })
    }

    /// The error-free triple, `W = I`.
    pub fn identity() -> AngleTriple {
        AngleTriple {
            theta0: 0.0,
            theta1: 0.0,
            theta2: 0.0,
        }
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn theta1(&self) -> f64 {
        self.theta1
    }

    pub fn theta2(&self) -> f64 {
        self.theta2
    }

    /// `[A, B, C, D]`.
    pub fn variables(&self) -> [f64; 4] {
        let (s0, c0) = self.theta0.sin_cos();
        let (s1, c1) = self.theta1.sin_cos();
        let (s2, c2) = self.theta2.sin_cos();
        [c0, s0 * c1, s0 * s1 * c2, s0 * s1 * s2]
    }
}

fn check_range(
    name: &'static str,
    value: f64,
    range: std::ops::RangeInclusive<f64>,
    label: &'static str,
) -> Result<()> {
    if range.contains(&value) {
        Ok(())
    } else {
        Err(Error::AngleOutOfRange {
            name,
            value,
            range: label,
        })
    }
}

fn wrap_two_pi(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// `[[A + iB, -C + iD], [C + iD, A - iB]]`.
pub fn w_gate(t: &AngleTriple) -> Gate2 {
    let [a, b, c, d] = t.variables();
    [
        [Complex64::new(a, b), Complex64::new(-c, d)],
        [Complex64::new(c, d), Complex64::new(a, -b)],
    ]
}

pub fn build_w(t: &AngleTriple) -> Unitary {
    Unitary::from_gate(&w_gate(t))
}

/// Angles for all five qubits of the code block.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleSample {
    triples: [AngleTriple; 5],
}

impl AngleSample {
    pub fn new(triples: [AngleTriple; 5]) -> AngleSample {
        AngleSample { triples }
    }

    pub fn identity() -> AngleSample {
        AngleSample {
            triples: [AngleTriple::identity(); 5],
        }
    }

    pub fn triples(&self) -> &[AngleTriple; 5] {
        &self.triples
    }

    /// All 20 variable values, indexed by [`VarId::index`].
    pub fn variables(&self) -> [f64; NUM_VARS] {
        let mut out = [0.0; NUM_VARS];
        for (u, t) in self.triples.iter().enumerate() {
            for (k, v) in t.variables().into_iter().enumerate() {
                out[VarId::new(VarKind::from_index(k), u).index()] = v;
            }
        }
        out
    }

    pub fn gates(&self) -> [Gate2; 5] {
        std::array::from_fn(|u| w_gate(&self.triples[u]))
    }

    pub fn random<R: Rng + ?Sized>(dist: &ErrorDistribution, rng: &mut R) -> AngleSample {
        AngleSample {
            triples: std::array::from_fn(|_| dist.sample_angles(rng)),
        }
    }
}

/// `W_0 (x) W_1 (x) ... (x) W_4` as a dense 32x32 matrix.
pub fn build_product_error(s: &AngleSample) -> Unitary {
    let mut u = build_w(&s.triples[0]);
    for t in &s.triples[1..] {
        u = statevec::tensor(&u, &build_w(t)).expect("five qubits fit");
    }
    u
}

/// Applies the product error to a 32-amplitude vector without forming the
/// dense matrix.
pub fn apply_product_in_place(gates: &[Gate2; 5], amps: &mut [Complex64]) {
    for (u, g) in gates.iter().enumerate() {
        statevec::apply_gate_in_place(amps, 5, u, g);
    }
}

/// Changes angles so that exactly the variables in `flips` change sign.
pub fn apply_signflip(s: &AngleSample, flips: &FlipSet) -> AngleSample {
    let triples = std::array::from_fn(|u| {
        let t = s.triples[u];
        let has = |k| flips.contains(VarId::new(k, u));
        let theta0 = if has(VarKind::A) { PI - t.theta0 } else { t.theta0 };
        let theta1 = if has(VarKind::B) { PI - t.theta1 } else { t.theta1 };
        let theta2 = match (has(VarKind::C), has(VarKind::D)) {
            (false, false) => t.theta2,
            (true, false) => wrap_two_pi(PI - t.theta2),
            (false, true) => wrap_two_pi(TAU - t.theta2),
            (true, true) => wrap_two_pi(t.theta2 + PI),
        };
        AngleTriple {
            theta0,
            theta1,
            theta2,
        }
    });
    AngleSample { triples }
}

/// Which family a distribution belongs to.
#[derive(Clone, Debug, PartialEq)]
pub enum DistributionKind {
    /// `f(t0) = (1 - s^2) / (2 pi^2 (1 + s^2 - 2 s cos t0)^2)`.
    Normal { sigma: f64 },
    /// `f = 1 / (2 pi^2)`.
    Uniform,
    /// Piecewise-linear interpolation of user-supplied `(t0, f)` points.
    Tabulated { theta: Vec<f64>, density: Vec<f64> },
    /// The error-free limit: a point mass at `t0 = 0`. It has no density, so
    /// only expectations of the marginal are defined.
    ErrorFree,
}

/// A single-qubit error density together with its sampling table.
#[derive(Clone, Debug)]
pub struct ErrorDistribution {
    kind: DistributionKind,
    sampler: Option<InverseCdf>,
}

impl ErrorDistribution {
    pub fn normal(sigma: f64) -> Result<ErrorDistribution> {
        if !(0.0..SIGMA_MAX).contains(&sigma) {
            return Err(Error::InvalidParameter(format!(
                "sigma = {sigma} must lie in [0, 1)"
            )));
        }
        Self::build(DistributionKind::Normal { sigma }, NORMALIZATION_TOL)
    }

    pub fn uniform() -> ErrorDistribution {
        Self::build(DistributionKind::Uniform, NORMALIZATION_TOL).expect("uniform density is normalized")
    }

    pub fn error_free() -> ErrorDistribution {
        ErrorDistribution {
            kind: DistributionKind::ErrorFree,
            sampler: None,
        }
    }

    /// A density given at increasing `theta` covering `[0, pi]`, linearly
    /// interpolated in between.
    pub fn tabulated(points: Vec<(f64, f64)>) -> Result<ErrorDistribution> {
        if points.len() < 2 {
            return Err(Error::InvalidParameter("a table needs at least two rows".into()));
        }
        let (mut theta, density): (Vec<f64>, Vec<f64>) = points.into_iter().unzip();
        if theta[0].abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "table must start at theta0 = 0, found {}",
                theta[0]
            )));
        }
        let last = theta.len() - 1;
        if (theta[last] - PI).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "table must end at theta0 = pi, found {}",
                theta[last]
            )));
        }
        theta[0] = 0.0;
        theta[last] = PI;
        if theta.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("theta0 must be strictly increasing".into()));
        }
        if let Some(bad) = density.iter().find(|f| !f.is_finite() || **f < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "density values must be finite and non-negative, found {bad}"
            )));
        }
        Self::build(
            DistributionKind::Tabulated { theta, density },
            TABULATED_NORMALIZATION_TOL,
        )
    }

    /// Parses a `theta0,f` table (see [`parse_density_table`]) and builds the
    /// distribution.
    pub fn from_table_str(text: &str) -> Result<ErrorDistribution> {
        Self::tabulated(parse_density_table(text)?)
    }

    pub fn from_table_file(path: impl AsRef<Path>) -> Result<ErrorDistribution> {
        Self::from_table_str(&std::fs::read_to_string(path)?)
    }

    fn build(kind: DistributionKind, tol: f64) -> Result<ErrorDistribution> {
        let mut dist = ErrorDistribution { kind, sampler: None };
        let mass = dist.marginal_expectation(|_| 1.0)?;
        if (mass - 1.0).abs() > tol || !mass.is_finite() {
            return Err(Error::NotNormalizedDensity(mass));
        }
        dist.sampler = Some(InverseCdf::build(&dist)?);
        Ok(dist)
    }

    pub fn kind(&self) -> &DistributionKind {
        &self.kind
    }

    /// `sigma` for the normal family, 0 for the uniform density.
    pub fn sigma(&self) -> Option<f64> {
        match self.kind {
            DistributionKind::Normal { sigma } => Some(sigma),
            DistributionKind::Uniform => Some(0.0),
            _ => None,
        }
    }

    /// `f(t0)`. The error-free limit reports zero away from the origin.
    pub fn density(&self, theta0: f64) -> f64 {
        match &self.kind {
            DistributionKind::Normal { sigma } => normal_density(*sigma, theta0),
            DistributionKind::Uniform => 1.0 / (2.0 * PI * PI),
            DistributionKind::Tabulated { theta, density } => interpolate(theta, density, theta0),
            DistributionKind::ErrorFree => {
                if theta0 == 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        match &self.kind {
            DistributionKind::Tabulated { theta, .. } => theta.clone(),
            _ => vec![0.0, PI],
        }
    }

    /// `integral_0^pi f(t0) g(t0) dt0` to absolute tolerance `1e-10`.
    pub fn moment<G: Fn(f64) -> f64>(&self, g: G) -> Result<f64> {
        if self.kind == DistributionKind::ErrorFree {
            return Err(Error::NoDensity("moment"));
        }
        quadrature::integrate_with_breakpoints(
            |t| self.density(t) * g(t),
            &self.breakpoints(),
            DEFAULT_ABS_TOL,
        )
    }

    /// `E[h(t0)]` under the marginal `4 pi f(t0) sin^2(t0)`. Unlike
    /// [`moment`](Self::moment) this is defined in the error-free limit,
    /// where it is `h(0)`.
    pub fn marginal_expectation<H: Fn(f64) -> f64>(&self, h: H) -> Result<f64> {
        self.marginal_expectation_with_knots(h, &[])
    }

    /// As [`marginal_expectation`](Self::marginal_expectation), also
    /// splitting the range at `knots` where `h` is not smooth.
    pub fn marginal_expectation_with_knots<H: Fn(f64) -> f64>(
        &self,
        h: H,
        knots: &[f64],
    ) -> Result<f64> {
        if self.kind == DistributionKind::ErrorFree {
            return Ok(h(0.0));
        }
        let mut pts = self.breakpoints();
        pts.extend(knots.iter().copied().filter(|k| (0.0..=PI).contains(k)));
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        quadrature::integrate_with_breakpoints(
            |t| 4.0 * PI * self.density(t) * t.sin().powi(2) * h(t),
            &pts,
            DEFAULT_ABS_TOL,
        )
    }

    /// Maps a uniform deviate in `[0, 1)` to `t0` through the tabulated
    /// inverse CDF of the marginal.
    pub fn theta0_from_uniform(&self, u: f64) -> f64 {
        match &self.sampler {
            Some(table) => table.invert(u),
            None => 0.0,
        }
    }

    /// Draws `(t0, t1, t2)`: `t0` from the marginal, `t1 = arccos(1 - 2u)`
    /// and `t2` uniform on `[0, 2 pi)`.
    pub fn sample_angles<R: Rng + ?Sized>(&self, rng: &mut R) -> AngleTriple {
        let u0: f64 = rng.random();
        let u1: f64 = rng.random();
        let u2: f64 = rng.random();
        let theta0 = self.theta0_from_uniform(u0);
        let theta1 = (1.0 - 2.0 * u1).clamp(-1.0, 1.0).acos();
        let theta2 = wrap_two_pi(TAU * u2);
        AngleTriple {
            theta0,
            theta1,
            theta2,
        }
    }
}

pub fn normal_density(sigma: f64, theta0: f64) -> f64 {
    let denom = 1.0 + sigma * sigma - 2.0 * sigma * theta0.cos();
    (1.0 - sigma * sigma) / (2.0 * PI * PI * denom * denom)
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if x <= xs[0] {
        return ys[0];
    }
    let last = xs.len() - 1;
    if x >= xs[last] {
        return ys[last];
    }
    let i = xs.partition_point(|&t| t <= x) - 1;
    let w = (x - xs[i]) / (xs[i + 1] - xs[i]);
    ys[i] + w * (ys[i + 1] - ys[i])
}

/// Parses the text form of a tabulated density: a `theta0,f` header followed
/// by one `theta0,f` pair per line. Blank lines are ignored.
pub fn parse_density_table(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, header)) if header.trim().replace(' ', "") == "theta0,f" => {}
        Some((i, _)) => {
            return Err(Error::Parse {
                line: i + 1,
                message: "expected header `theta0,f`".into(),
            })
        }
        None => {
            return Err(Error::Parse {
                line: 1,
                message: "empty table".into(),
            })
        }
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let parse_err = |message: String| Error::Parse {
            line: i + 1,
            message,
        };
        let mut fields = line.split(',');
        let (Some(t), Some(f), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(parse_err("expected two comma-separated values".into()));
        };
        let t: f64 = t
            .trim()
            .parse()
            .map_err(|_| parse_err(format!("bad theta0 `{}`", t.trim())))?;
        let f: f64 = f
            .trim()
            .parse()
            .map_err(|_| parse_err(format!("bad density `{}`", f.trim())))?;
        rows.push((t, f));
    }
    Ok(rows)
}

/// Inverse CDF of the `t0` marginal on a uniform 4096-cell grid. Each cell
/// holds a monotone cubic Hermite segment built from the exact cell
/// integrals and the marginal density at the nodes.
#[derive(Clone, Debug)]
struct InverseCdf {
    theta: Vec<f64>,
    cdf: Vec<f64>,
    slope: Vec<f64>,
}

impl InverseCdf {
    fn build(dist: &ErrorDistribution) -> Result<InverseCdf> {
        let h = PI / CDF_CELLS as f64;
        let theta: Vec<f64> = (0..=CDF_CELLS).map(|i| i as f64 * h).collect();
        let marginal = |t: f64| 4.0 * PI * dist.density(t) * t.sin().powi(2);
        let knots = dist.breakpoints();

        let mut cdf = Vec::with_capacity(CDF_CELLS + 1);
        cdf.push(0.0);
        let mut acc = 0.0;
        for w in theta.windows(2) {
            let mut pts = vec![w[0]];
            pts.extend(knots.iter().copied().filter(|&k| k > w[0] && k < w[1]));
            pts.push(w[1]);
            acc += quadrature::integrate_with_breakpoints(marginal, &pts, 1e-14)?;
            cdf.push(acc);
        }
        let total = acc;
        cdf.iter_mut().for_each(|c| *c /= total);
        let mut slope: Vec<f64> = theta.iter().map(|&t| marginal(t) / total).collect();

        // Fritsch-Carlson limiting keeps every segment monotone.
        for i in 0..CDF_CELLS {
            let delta = (cdf[i + 1] - cdf[i]) / h;
            if delta <= 0.0 {
                slope[i] = 0.0;
                slope[i + 1] = 0.0;
                continue;
            }
            let (alpha, beta) = (slope[i] / delta, slope[i + 1] / delta);
            let r = alpha * alpha + beta * beta;
            if r > 9.0 {
                let tau = 3.0 / r.sqrt();
                slope[i] = tau * alpha * delta;
                slope[i + 1] = tau * beta * delta;
            }
        }
        Ok(InverseCdf { theta, cdf, slope })
    }

    fn segment(&self, i: usize, t: f64) -> (f64, f64) {
        let h = self.theta[i + 1] - self.theta[i];
        let (c0, c1, m0, m1) = (self.cdf[i], self.cdf[i + 1], self.slope[i], self.slope[i + 1]);
        let t2 = t * t;
        let t3 = t2 * t;
        let value = (2.0 * t3 - 3.0 * t2 + 1.0) * c0
            + (t3 - 2.0 * t2 + t) * h * m0
            + (-2.0 * t3 + 3.0 * t2) * c1
            + (t3 - t2) * h * m1;
        let deriv = (6.0 * t2 - 6.0 * t) * c0
            + (3.0 * t2 - 4.0 * t + 1.0) * h * m0
            + (-6.0 * t2 + 6.0 * t) * c1
            + (3.0 * t2 - 2.0 * t) * h * m1;
        (value, deriv)
    }

    fn invert(&self, u: f64) -> f64 {
        let cells = self.theta.len() - 1;
        let i = self.cdf.partition_point(|&c| c <= u).clamp(1, cells) - 1;
        let (c0, c1) = (self.cdf[i], self.cdf[i + 1]);
        if c1 <= c0 {
            return self.theta[i];
        }
        // Safeguarded Newton on the monotone segment.
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let mut t = ((u - c0) / (c1 - c0)).clamp(0.0, 1.0);
        for _ in 0..60 {
            let (value, deriv) = self.segment(i, t);
            let r = value - u;
            if r.abs() <= 1e-16 {
                break;
            }
            if r > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let step = if deriv > 0.0 { t - r / deriv } else { f64::NAN };
            t = if step.is_finite() && step > lo && step < hi {
                step
            } else {
                0.5 * (lo + hi)
            };
            if hi - lo < 1e-15 {
                break;
            }
        }
        self.theta[i] + t * (self.theta[i + 1] - self.theta[i])
    }
}
