//! Adaptive Gauss-Kronrod (7/15) integration on finite intervals.
//!
//! Global adaptive bisection: the subinterval with the largest error estimate
//! is split until the summed estimate drops below the absolute tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::{Error, Result};

/// Absolute tolerance used for every moment of an error density.
pub const DEFAULT_ABS_TOL: f64 = 1e-10;

const MAX_SUBINTERVALS: usize = 4000;

// Published 15-point Kronrod tables, kept at full printed precision.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the Kronrod nodes with odd index (1, 3, 5, 7).
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One 15-point Kronrod evaluation on `[a, b]`: the estimate and `|K15 - G7|`.
pub fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// `integral_a^b f` to absolute tolerance `abs_tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
    integrate_pieces(&f, &[a, b], abs_tol)
}

/// Like [`integrate`], but never lets a Kronrod panel straddle one of the
/// `breakpoints` (which must be sorted and include both endpoints). Use it
/// for integrands with kinks, such as piecewise-linear tabulated densities.
pub fn integrate_with_breakpoints<F: Fn(f64) -> f64>(
    f: F,
    breakpoints: &[f64],
    abs_tol: f64,
) -> Result<f64> {
    integrate_pieces(&f, breakpoints, abs_tol)
}

fn integrate_pieces<F: Fn(f64) -> f64>(f: &F, points: &[f64], abs_tol: f64) -> Result<f64> {
    assert!(points.len() >= 2, "need at least one interval");
    let mut heap = BinaryHeap::new();
    let mut total_err = 0.0;
    for w in points.windows(2) {
        let (value, error) = gauss_kronrod_15(f, w[0], w[1]);
        total_err += error;
        heap.push(Piece {
            a: w[0],
            b: w[1],
            value,
            error,
        });
    }
    while total_err > abs_tol {
        if heap.len() >= MAX_SUBINTERVALS {
            return Err(non_convergence(points, total_err));
        }
        let worst = heap.pop().expect("heap is never empty");
        if !worst.error.is_finite() || (worst.b - worst.a).abs() < 1e-15 * worst.a.abs().max(1.0) {
            return Err(non_convergence(points, total_err));
        }
        let mid = 0.5 * (worst.a + worst.b);
        let left = gauss_kronrod_15(f, worst.a, mid);
        let right = gauss_kronrod_15(f, mid, worst.b);
        total_err += left.1 + right.1 - worst.error;
        heap.push(Piece {
            a: worst.a,
            b: mid,
            value: left.0,
            error: left.1,
        });
        heap.push(Piece {
            a: mid,
            b: worst.b,
            value: right.0,
            error: right.1,
        });
        // Running sums drift; recompute now and then so cancellation
        // cannot stall the loop just above the tolerance.
        if heap.len() % 64 == 0 {
            total_err = heap.iter().map(|p| p.error).sum();
        }
    }
    let mut pieces = heap.into_vec();
    pieces.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value: f64 = pieces.iter().map(|p| p.value).sum();
    if !value.is_finite() {
        return Err(non_convergence(points, f64::INFINITY));
    }
    Ok(value)
}

fn non_convergence(points: &[f64], estimate: f64) -> Error {
    Error::QuadratureFailed {
        a: points[0],
        b: points[points.len() - 1],
        estimate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomials_are_exact_on_one_panel() {
        // K15 integrates degree 22 exactly.
        let (v, _) = gauss_kronrod_15(&|x: f64| x.powi(10), 0.0, 1.0);
        assert!((v - 1.0 / 11.0).abs() < 1e-15);
    }

    #[test]
    fn smooth_trig_integrals() {
        let v = integrate(|x: f64| x.sin().powi(2), 0.0, PI, 1e-12).unwrap();
        assert!((v - PI / 2.0).abs() < 1e-12);
        let v = integrate(|x: f64| x.sin().powi(4), 0.0, PI, 1e-12).unwrap();
        assert!((v - 3.0 * PI / 8.0).abs() < 1e-12);
    }

    #[test]
    fn peaked_integrand_converges() {
        // Lorentzian of width 1e-3 centered inside the interval.
        let w = 1e-3;
        let v = integrate(|x: f64| w / (x * x + w * w), -1.0, 1.0, 1e-10).unwrap();
        let exact = 2.0 * (1.0 / w).atan();
        assert!((v - exact).abs() < 1e-9);
    }

    #[test]
    fn breakpoints_handle_kinks() {
        let v = integrate_with_breakpoints(|x: f64| (x - 0.3).abs(), &[0.0, 0.3, 1.0], 1e-13).unwrap();
        assert!((v - (0.045 + 0.245)).abs() < 1e-13);
    }

    #[test]
    fn non_integrable_singularity_is_reported() {
        let e = integrate(|x: f64| 1.0 / x, 0.0, 1.0, 1e-10);
        assert!(matches!(e, Err(Error::QuadratureFailed { .. })));
    }
}
