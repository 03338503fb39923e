//! The five-qubit perfect code: logical codewords, the sixteen discrete
//! errors, the change of basis `M` onto `{E_s|0_L>, E_s|1_L>}`, syndrome
//! probabilities and ideal correction.

use num_complex::{Complex, Complex64};
use rand::Rng;

use crate::errormodel::{self, AngleSample};
use crate::statevec::{self, PureState, Unitary};
use crate::{Error, Result};

pub const N_QUBITS: usize = 5;
pub const DIM: usize = 32;
pub const N_SYNDROMES: usize = 16;

/// Signed basis indices of `4 |0_L>`.
const LOGICAL0: [(i8, u8); 16] = [
    (1, 0b00000),
    (-1, 0b00011),
    (1, 0b00101),
    (-1, 0b00110),
    (1, 0b01001),
    (1, 0b01010),
    (-1, 0b01100),
    (-1, 0b01111),
    (-1, 0b10001),
    (1, 0b10010),
    (1, 0b10100),
    (-1, 0b10111),
    (-1, 0b11000),
    (-1, 0b11011),
    (-1, 0b11101),
    (-1, 0b11110),
];

/// Signed basis indices of `4 |1_L>`.
const LOGICAL1: [(i8, u8); 16] = [
    (-1, 0b00001),
    (-1, 0b00010),
    (-1, 0b00100),
    (-1, 0b00111),
    (-1, 0b01000),
    (1, 0b01011),
    (1, 0b01101),
    (-1, 0b01110),
    (-1, 0b10000),
    (-1, 0b10011),
    (1, 0b10101),
    (1, 0b10110),
    (-1, 0b11001),
    (1, 0b11010),
    (-1, 0b11100),
    (1, 0b11111),
];

/// A Gaussian integer; exact entries of `4 M`.
pub type GaussInt = Complex<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// The discrete error with syndrome index `s`: `I`, then `X_0..X_4`,
/// `Y_0..Y_4`, `Z_0..Z_4`. The qubit is meaningless for `s = 0`.
pub fn error_of_syndrome(s: usize) -> Result<(Pauli, usize)> {
    match s {
        0 => Ok((Pauli::I, 0)),
        1..=5 => Ok((Pauli::X, s - 1)),
        6..=10 => Ok((Pauli::Y, s - 6)),
        11..=15 => Ok((Pauli::Z, s - 11)),
        _ => Err(Error::SyndromeOutOfRange(s)),
    }
}

pub fn syndrome_of_error(p: Pauli, qubit: usize) -> usize {
    assert!(qubit < N_QUBITS);
    match p {
        Pauli::I => 0,
        Pauli::X => 1 + qubit,
        Pauli::Y => 6 + qubit,
        Pauli::Z => 11 + qubit,
    }
}

pub fn syndrome_label(s: usize) -> String {
    match error_of_syndrome(s) {
        Ok((Pauli::I, _)) => "I".to_string(),
        Ok((p, u)) => format!("{p:?}{u}"),
        Err(_) => format!("?{s}"),
    }
}

/// Applies a single-qubit Pauli to the basis state `|k>`, returning the
/// image index and its phase. Qubit `u` is bit `4 - u`.
fn pauli_on_basis(p: Pauli, qubit: usize, k: usize) -> (usize, GaussInt) {
    let bit = 1 << (N_QUBITS - 1 - qubit);
    let set = k & bit != 0;
    match p {
        Pauli::I => (k, GaussInt::new(1, 0)),
        Pauli::X => (k ^ bit, GaussInt::new(1, 0)),
        Pauli::Z => (k, GaussInt::new(if set { -1 } else { 1 }, 0)),
        // Y|0> = i|1>, Y|1> = -i|0>
        Pauli::Y => (k ^ bit, GaussInt::new(0, if set { -1 } else { 1 })),
    }
}

/// Immutable code data shared by every route of the library.
#[derive(Clone, Debug)]
pub struct CodeTables {
    logical0: PureState,
    logical1: PureState,
    errors: Vec<Unitary>,
    m: Unitary,
    m_exact4: Vec<GaussInt>,
    /// Row `r` of `M^dagger` as its 16 nonzero `(column, value)` pairs.
    m_dag_rows: Vec<[(u8, Complex64); 16]>,
}

impl CodeTables {
    pub fn build() -> CodeTables {
        Self::from_exact(Self::exact_m())
    }

    /// Like [`build`](Self::build) but with the sign of one entry of `M`
    /// flipped. Used as a negative control for the verification suite.
    pub fn corrupted(row: usize, col: usize) -> CodeTables {
        let mut m4 = Self::exact_m();
        m4[row * DIM + col] = -m4[row * DIM + col];
        Self::from_exact(m4)
    }

    fn exact_m() -> Vec<GaussInt> {
        let mut m4 = vec![GaussInt::new(0, 0); DIM * DIM];
        for s in 0..N_SYNDROMES {
            let (p, u) = error_of_syndrome(s).expect("in range");
            for (col, word) in [(2 * s, &LOGICAL0), (2 * s + 1, &LOGICAL1)] {
                for &(sign, k) in word.iter() {
                    let (row, phase) = pauli_on_basis(p, u, k as usize);
                    m4[row * DIM + col] += phase * sign as i64;
                }
            }
        }
        m4
    }

    fn from_exact(m4: Vec<GaussInt>) -> CodeTables {
        let to_f = |z: GaussInt| Complex64::new(z.re as f64 / 4.0, z.im as f64 / 4.0);
        let word = |w: &[(i8, u8); 16]| {
            let mut amps = vec![Complex64::new(0.0, 0.0); DIM];
            for &(sign, k) in w {
                amps[k as usize] = Complex64::new(sign as f64 / 4.0, 0.0);
            }
            PureState::new(amps).expect("codewords are normalized")
        };
        let logical0 = word(&LOGICAL0);
        let logical1 = word(&LOGICAL1);
        let errors = (0..N_SYNDROMES).map(|s| discrete_error(s).expect("in range")).collect();
        let m = Unitary::new_unchecked(DIM, m4.iter().copied().map(to_f).collect())
            .expect("32 is a power of two");
        let m_dag_rows = (0..DIM)
            .map(|r| {
                let mut row = [(0u8, Complex64::new(0.0, 0.0)); 16];
                let mut n = 0;
                for i in 0..DIM {
                    let z = m4[i * DIM + r];
                    if z != GaussInt::new(0, 0) && n < 16 {
                        row[n] = (i as u8, to_f(z).conj());
                        n += 1;
                    }
                }
                row
            })
            .collect();
        CodeTables {
            logical0,
            logical1,
            errors,
            m,
            m_exact4: m4,
            m_dag_rows,
        }
    }

    pub fn logical0(&self) -> &PureState {
        &self.logical0
    }

    pub fn logical1(&self) -> &PureState {
        &self.logical1
    }

    /// `[I, X_0..X_4, Y_0..Y_4, Z_0..Z_4]` as dense 32x32 matrices.
    pub fn discrete_errors(&self) -> &[Unitary] {
        &self.errors
    }

    pub fn m_matrix(&self) -> &Unitary {
        &self.m
    }

    /// `4 M` as exact Gaussian integers, row-major.
    pub fn m_exact_times4(&self) -> &[GaussInt] {
        &self.m_exact4
    }

    /// `(alpha |0_L> + gamma |1_L>)` with `alpha = w0 + i w1`, `gamma = w2 + i w3`.
    pub fn encode(&self, w: &LogicalCoords) -> PureState {
        let (alpha, gamma) = (w.alpha(), w.gamma());
        let amps = self
            .logical0
            .amplitudes()
            .iter()
            .zip(self.logical1.amplitudes())
            .map(|(a, b)| alpha * a + gamma * b)
            .collect();
        PureState::from_parts_unchecked(amps)
    }

    /// `M^dagger v` through the sparse rows.
    pub fn to_code_basis(&self, v: &[Complex64]) -> [Complex64; DIM] {
        debug_assert_eq!(v.len(), DIM);
        std::array::from_fn(|r| {
            self.m_dag_rows[r]
                .iter()
                .map(|&(i, c)| c * v[i as usize])
                .sum()
        })
    }

    pub fn decompose(&self, state: &PureState) -> Result<SyndromeDecomposition> {
        if state.dim() != DIM {
            return Err(Error::DimensionMismatch {
                expected: DIM,
                actual: state.dim(),
            });
        }
        Ok(SyndromeDecomposition::from_betas(
            self.to_code_basis(state.amplitudes()),
        ))
    }

    /// `(a_s, b_s, c_s, d_s)` for every syndrome: the real and imaginary
    /// parts of `beta_{2s}` for the images of `|0_L>` and `|1_L>`.
    pub fn beta_generators(&self, sample: &AngleSample) -> [[f64; 4]; N_SYNDROMES] {
        let (b0, b1) = self.evolved_logical_betas(sample);
        generators_from_betas(&b0, &b1)
    }

    /// Code-basis coordinates of `W|0_L>` and `W|1_L>`.
    pub fn evolved_logical_betas(&self, sample: &AngleSample) -> ([Complex64; DIM], [Complex64; DIM]) {
        let gates = sample.gates();
        let mut v0 = self.logical0.amplitudes().to_vec();
        let mut v1 = self.logical1.amplitudes().to_vec();
        errormodel::apply_product_in_place(&gates, &mut v0);
        errormodel::apply_product_in_place(&gates, &mut v1);
        (self.to_code_basis(&v0), self.to_code_basis(&v1))
    }
}

impl Default for CodeTables {
    fn default() -> Self {
        Self::build()
    }
}

/// `E_s` as a dense matrix built from tensor products of Pauli gates.
pub fn discrete_error(s: usize) -> Result<Unitary> {
    let (p, u) = error_of_syndrome(s)?;
    let gate = match p {
        Pauli::I => statevec::identity_gate(),
        Pauli::X => statevec::pauli_x(),
        Pauli::Y => statevec::pauli_y(),
        Pauli::Z => statevec::pauli_z(),
    };
    let factor = |q: usize| if q == u { gate } else { statevec::identity_gate() };
    let mut out = Unitary::from_gate(&factor(0));
    for q in 1..N_QUBITS {
        let g = factor(q);
        out = statevec::tensor(&out, &Unitary::from_gate(&g))?;
    }
    Ok(out)
}

pub(crate) fn generators_from_betas(b0: &[Complex64; DIM], b1: &[Complex64; DIM]) -> [[f64; 4]; N_SYNDROMES] {
    std::array::from_fn(|s| [b0[2 * s].re, b0[2 * s].im, b1[2 * s].re, b1[2 * s].im])
}

/// The full code-basis vector of `W(alpha|0_L> + gamma|1_L>)` written in
/// terms of the generators alone. The odd coordinate of `s = 0` carries
/// the opposite sign pattern from every other syndrome.
pub fn reconstruct_betas(gens: &[[f64; 4]; N_SYNDROMES], w: &LogicalCoords) -> [Complex64; DIM] {
    let (alpha, gamma) = (w.alpha(), w.gamma());
    let mut out = [Complex64::new(0.0, 0.0); DIM];
    for (s, &[a, b, c, d]) in gens.iter().enumerate() {
        let p = Complex64::new(a, b);
        let q = Complex64::new(c, d);
        out[2 * s] = alpha * p + gamma * q;
        out[2 * s + 1] = if s == 0 {
            -alpha * q.conj() + gamma * p.conj()
        } else {
            alpha * q.conj() - gamma * p.conj()
        };
    }
    out
}

/// Real coordinates of a logical state, `w0^2 + w1^2 + w2^2 + w3^2 = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogicalCoords {
    w: [f64; 4],
}

impl LogicalCoords {
    pub fn new(w: [f64; 4]) -> Result<LogicalCoords> {
        let n: f64 = w.iter().map(|x| x * x).sum();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(n));
        }
        Ok(LogicalCoords { w })
    }

    /// Uniform on the 3-sphere.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> LogicalCoords {
        LogicalCoords {
            w: statevec::random_logical_coords(rng),
        }
    }

    pub fn coords(&self) -> [f64; 4] {
        self.w
    }

    pub fn alpha(&self) -> Complex64 {
        Complex64::new(self.w[0], self.w[1])
    }

    pub fn gamma(&self) -> Complex64 {
        Complex64::new(self.w[2], self.w[3])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SyndromeDecomposition {
    pub betas: [Complex64; DIM],
    pub probs: [f64; N_SYNDROMES],
}

impl SyndromeDecomposition {
    pub fn from_betas(betas: [Complex64; DIM]) -> SyndromeDecomposition {
        let probs = std::array::from_fn(|s| betas[2 * s].norm_sqr() + betas[2 * s + 1].norm_sqr());
        SyndromeDecomposition { betas, probs }
    }

    /// The logical pair left after measuring syndrome `s` and undoing `E_s`.
    pub fn corrected_state(&self, s: usize) -> Result<[Complex64; 2]> {
        if s >= N_SYNDROMES {
            return Err(Error::SyndromeOutOfRange(s));
        }
        let p = self.probs[s];
        if p <= 1e-300 {
            return Err(Error::UnreachableSyndrome {
                syndrome: s,
                probability: p,
            });
        }
        let k = 1.0 / p.sqrt();
        Ok([self.betas[2 * s] * k, self.betas[2 * s + 1] * k])
    }
}
