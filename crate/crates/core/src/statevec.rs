//! Dense state vectors and small unitaries for registers of up to five qubits.
//!
//! Basis indices are qubit-0-major: qubit `u` of an `n`-qubit register is bit
//! `n - 1 - u` of the index, so `|k0 k1 ... k(n-1)>` reads left to right as a
//! binary number and `tensor(a, b)` lets `a` act on the leading qubits.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::{Error, Result};

pub const MAX_QUBITS: usize = 5;

const NORM_TOL: f64 = 1e-12;
const UNITARY_TOL: f64 = 1e-12;

/// A 2x2 complex matrix in row-major order, the form single-qubit gates take
/// on the hot paths.
pub type Gate2 = [[Complex64; 2]; 2];

fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::InvalidDimension(dim));
    }
    let n = dim.trailing_zeros() as usize;
    if n > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            qubits: n,
            max: MAX_QUBITS,
        });
    }
    Ok(n)
}

/// A unit vector of `2^n` complex amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amps: Vec<Complex64>,
    n: usize,
}

impl PureState {
    /// Wraps `amps`, checking the length and that the squared norm is one
    /// within `1e-12`.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        let n = qubits_for_dim(amps.len())?;
        let norm = norm_sqr(&amps);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amps, n })
    }

    /// Rescales `amps` to unit norm.
    pub fn normalized(mut amps: Vec<Complex64>) -> Result<Self> {
        let n = qubits_for_dim(amps.len())?;
        let norm = norm_sqr(&amps).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm * norm));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { amps, n })
    }

    pub(crate) fn from_parts_unchecked(amps: Vec<Complex64>) -> Self {
        let n = amps.len().trailing_zeros() as usize;
        Self { amps, n }
    }

    /// The computational basis vector `|k>` on `n` qubits.
    pub fn basis(n: usize, k: usize) -> Result<Self> {
        let dim = 1usize << n.min(usize::BITS as usize - 1);
        qubits_for_dim(dim)?;
        if k >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: k,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[k] = Complex64::new(1.0, 0.0);
        Ok(Self { amps, n })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amps)
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &PureState) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "inner product of mismatched states");
        inner(&self.amps, &other.amps)
    }

    pub fn scaled(&self, factor: Complex64) -> PureState {
        PureState {
            amps: self.amps.iter().map(|a| a * factor).collect(),
            n: self.n,
        }
    }
}

/// A square complex matrix of dimension `2^n`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary {
    dim: usize,
    entries: Vec<Complex64>,
}

impl Unitary {
    /// Builds a unitary from row-major entries. In debug and test builds the
    /// matrix is checked against `U^dagger U = I` within `1e-12`.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        let u = Self::new_unchecked(dim, entries)?;
        if cfg!(debug_assertions) {
            let dev = u.unitarity_deviation();
            if dev > UNITARY_TOL {
                return Err(Error::NotUnitary(dev));
            }
        }
        Ok(u)
    }

    /// Shape checks only. Used for deliberately corrupted matrices in
    /// negative-control tests.
    pub fn new_unchecked(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        qubits_for_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn from_gate(g: &Gate2) -> Self {
        Self {
            dim: 2,
            entries: vec![g[0][0], g[0][1], g[1][0], g[1][1]],
        }
    }

    pub fn identity(n: usize) -> Result<Self> {
        let dim = 1usize << n.min(usize::BITS as usize - 1);
        qubits_for_dim(dim)?;
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.dim).map(|r| self.get(r, col)).collect()
    }

    pub fn adjoint(&self) -> Unitary {
        let d = self.dim;
        let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for c in 0..d {
                entries[c * d + r] = self.entries[r * d + c].conj();
            }
        }
        Unitary { dim: d, entries }
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Unitary) -> Result<Unitary> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: other.dim,
            });
        }
        let d = self.dim;
        let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.entries[r * d + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..d {
                    entries[r * d + c] += a * other.entries[k * d + c];
                }
            }
        }
        Ok(Unitary { dim: d, entries })
    }

    /// Largest entrywise deviation of `U^dagger U` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..d {
                    acc += self.entries[k * d + i].conj() * self.entries[k * d + j];
                }
                if i == j {
                    acc -= 1.0;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Unitary) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `U v` for a raw amplitude slice.
    pub fn apply_raw(&self, v: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim;
        (0..d)
            .map(|r| {
                self.entries[r * d..(r + 1) * d]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }
}

/// Kronecker product `a (x) b`; `a` acts on the leading (most significant)
/// qubits.
pub fn tensor(a: &Unitary, b: &Unitary) -> Result<Unitary> {
    let (da, db) = (a.dim, b.dim);
    let dim = da * db;
    let qubits = a.n_qubits() + b.n_qubits();
    if qubits > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            qubits,
            max: MAX_QUBITS,
        });
    }
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    for ia in 0..da {
        for ja in 0..da {
            let x = a.entries[ia * da + ja];
            for ib in 0..db {
                for jb in 0..db {
                    entries[(ia * db + ib) * dim + ja * db + jb] = x * b.entries[ib * db + jb];
                }
            }
        }
    }
    Ok(Unitary { dim, entries })
}

pub fn apply(u: &Unitary, s: &PureState) -> Result<PureState> {
    if u.dim != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim,
            actual: s.dim(),
        });
    }
    let out = PureState::from_parts_unchecked(u.apply_raw(&s.amps));
    debug_assert!((out.norm_sqr() - 1.0).abs() < 1e-10);
    Ok(out)
}

/// `||a - b||^2`.
pub fn dist_sq(a: &PureState, b: &PureState) -> f64 {
    assert_eq!(a.dim(), b.dim(), "distance between mismatched states");
    dist_sq_raw(&a.amps, &b.amps)
}

pub fn dist_sq_raw(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum()
}

pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sqr(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

/// Applies a single-qubit gate to qubit `qubit` of an `n`-qubit amplitude
/// vector in place.
pub fn apply_gate_in_place(amps: &mut [Complex64], n: usize, qubit: usize, g: &Gate2) {
    debug_assert_eq!(amps.len(), 1 << n);
    debug_assert!(qubit < n);
    let stride = 1usize << (n - 1 - qubit);
    let dim = amps.len();
    let mut base = 0;
    while base < dim {
        for i0 in base..base + stride {
            let i1 = i0 + stride;
            let (x, y) = (amps[i0], amps[i1]);
            amps[i0] = g[0][0] * x + g[0][1] * y;
            amps[i1] = g[1][0] * x + g[1][1] * y;
        }
        base += 2 * stride;
    }
}

/// A point drawn uniformly from the real unit 3-sphere, `(w0, w1, w2, w3)`.
pub fn random_logical_coords<R: Rng + ?Sized>(rng: &mut R) -> [f64; 4] {
    loop {
        let v: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-150 {
            return v.map(|x| x / norm);
        }
    }
}

pub fn pauli_x() -> Gate2 {
    let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    [[o, l], [l, o]]
}

pub fn pauli_y() -> Gate2 {
    let o = Complex64::new(0.0, 0.0);
    [[o, Complex64::new(0.0, -1.0)], [Complex64::new(0.0, 1.0), o]]
}

pub fn pauli_z() -> Gate2 {
    let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    [[l, o], [o, -l]]
}

pub fn identity_gate() -> Gate2 {
    let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    [[l, o], [o, l]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_state(rng: &mut ChaCha8Rng, n: usize) -> PureState {
        let amps = (0..1 << n)
            .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        PureState::normalized(amps).unwrap()
    }

    fn random_unitary_1q(rng: &mut ChaCha8Rng) -> Unitary {
        // phase * exp(i t n.sigma) for a random axis n
        let t: f64 = rng.random::<f64>() * 6.0;
        let n: [f64; 3] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let norm = n.iter().map(|x| x * x).sum::<f64>().sqrt();
        let (x, y, z) = (n[0] / norm, n[1] / norm, n[2] / norm);
        let (cos, sin) = (t.cos(), t.sin());
        let ph = c(0.0, rng.random::<f64>() * 6.0).exp();
        let g = [
            [c(cos, sin * z) * ph, c(sin * y, sin * x) * ph],
            [c(-sin * y, sin * x) * ph, c(cos, -sin * z) * ph],
        ];
        Unitary::new(2, vec![g[0][0], g[0][1], g[1][0], g[1][1]]).unwrap()
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let i1 = Unitary::identity(1).unwrap();
        let i2 = tensor(&i1, &i1).unwrap();
        assert_eq!(i2, Unitary::identity(2).unwrap());
    }

    #[test]
    fn leading_factor_acts_on_most_significant_bit() {
        let x = Unitary::from_gate(&pauli_x());
        let i1 = Unitary::identity(1).unwrap();
        let xi = tensor(&x, &i1).unwrap();
        let s = apply(&xi, &PureState::basis(2, 0b00).unwrap()).unwrap();
        assert_eq!(s, PureState::basis(2, 0b10).unwrap());
    }

    #[test]
    fn tensor_rejects_more_than_five_qubits() {
        let i3 = Unitary::identity(3).unwrap();
        assert!(matches!(
            tensor(&i3, &i3),
            Err(Error::TooManyQubits { qubits: 6, .. })
        ));
    }

    #[test]
    fn apply_rejects_dimension_mismatch() {
        let i2 = Unitary::identity(2).unwrap();
        let s = PureState::basis(1, 0).unwrap();
        assert!(matches!(apply(&i2, &s), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn state_constructor_checks_norm() {
        assert!(matches!(
            PureState::new(vec![c(1.0, 0.0), c(0.1, 0.0)]),
            Err(Error::NotNormalized(_))
        ));
        assert!(matches!(
            PureState::new(vec![c(1.0, 0.0); 3]),
            Err(Error::InvalidDimension(3))
        ));
    }

    #[test]
    fn unitary_constructor_rejects_non_unitary() {
        let e = Unitary::new(2, vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(e, Err(Error::NotUnitary(_))));
    }

    #[test]
    fn distances_of_trivial_pairs() {
        let zero = PureState::basis(1, 0).unwrap();
        assert_eq!(dist_sq(&zero, &zero), 0.0);
        assert_eq!(dist_sq(&zero, &zero.scaled(c(-1.0, 0.0))), 4.0);
    }

    #[test]
    fn gate_in_place_matches_dense_tensor() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_unitary_1q(&mut rng);
        let gate: Gate2 = [[g.get(0, 0), g.get(0, 1)], [g.get(1, 0), g.get(1, 1)]];
        let s = random_state(&mut rng, 3);
        let id = Unitary::identity(1).unwrap();
        let dense = tensor(&tensor(&id, &g).unwrap(), &id).unwrap();
        let expected = apply(&dense, &s).unwrap();
        let mut amps = s.amplitudes().to_vec();
        apply_gate_in_place(&mut amps, 3, 1, &gate);
        assert!(dist_sq_raw(&amps, expected.amplitudes()) < 1e-28);
    }

    #[test]
    fn sphere_coordinates_are_unit_and_centered() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 100_000;
        let mut mean = [0.0; 4];
        let mut mean_sq = [0.0; 4];
        for _ in 0..n {
            let w = random_logical_coords(&mut rng);
            let norm: f64 = w.iter().map(|x| x * x).sum();
            assert!((norm - 1.0).abs() < 1e-12);
            for i in 0..4 {
                mean[i] += w[i] / n as f64;
                mean_sq[i] += w[i] * w[i] / n as f64;
            }
        }
        for i in 0..4 {
            assert!(mean[i].abs() < 0.02, "mean {i} = {}", mean[i]);
            assert!((mean_sq[i] - 0.25).abs() < 0.02, "mean sq {i} = {}", mean_sq[i]);
        }
    }

    proptest! {
        #[test]
        fn unitaries_preserve_norm(seed in any::<u64>(), n in 1usize..=5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut u = random_unitary_1q(&mut rng);
            for _ in 1..n {
                u = tensor(&u, &random_unitary_1q(&mut rng)).unwrap();
            }
            let s = random_state(&mut rng, n);
            let out = apply(&u, &s).unwrap();
            prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn tensor_is_associative(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (a, b) = (random_unitary_1q(&mut rng), random_unitary_1q(&mut rng));
            let c = tensor(&random_unitary_1q(&mut rng), &random_unitary_1q(&mut rng)).unwrap();
            let left = tensor(&tensor(&a, &b).unwrap(), &c).unwrap();
            let right = tensor(&a, &tensor(&b, &c).unwrap()).unwrap();
            prop_assert!(left.max_abs_diff(&right) < 1e-14);
        }

        #[test]
        fn distance_matches_overlap_form(seed in any::<u64>(), n in 1usize..=5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (a, b) = (random_state(&mut rng, n), random_state(&mut rng, n));
            let direct = dist_sq(&a, &b);
            let via_overlap = 2.0 - 2.0 * b.inner(&a).re;
            prop_assert!((direct - via_overlap).abs() < 1e-12);
            prop_assert!((0.0..=4.0 + 1e-12).contains(&direct));
        }
    }
}
