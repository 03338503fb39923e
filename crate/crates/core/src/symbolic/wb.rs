use num_complex::Complex64;
use num_rational::Rational64;

use super::poly::{coeff, Coeff, Monomial, Polynomial};
use super::vars::{VarId, VarKind, NUM_VARS, QUBITS};
use crate::code5::{CodeTables, GaussInt, DIM, N_SYNDROMES};

/// `W_u = [[A+iB, -C+iD], [C+iD, A-iB]]` in the variables of qubit `u`.
pub fn symbolic_w(qubit: usize) -> [[Polynomial; 2]; 2] {
    let v = |k| Polynomial::var(VarId::new(k, qubit));
    let (a, b, c, d) = (v(VarKind::A), v(VarKind::B), v(VarKind::C), v(VarKind::D));
    let i = coeff(0, 1);
    [
        [&a + &b.scale(i), &(-&c) + &d.scale(i)],
        [&c + &d.scale(i), &a - &b.scale(i)],
    ]
}

/// A square matrix of polynomials, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicMatrix {
    dim: usize,
    entries: Vec<Polynomial>,
}

impl SymbolicMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &Polynomial {
        &self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    /// Numeric value at the given variable assignment, row-major.
    pub fn eval(&self, x: &[f64; NUM_VARS]) -> Vec<Complex64> {
        self.entries.iter().map(|p| p.eval(x)).collect()
    }
}

/// The factor that `W_u[row_bit][col_bit]` contributes to the variable of
/// the given kind, or zero when that kind does not occur in the entry.
fn w_factor(row_bit: usize, col_bit: usize, kind: VarKind) -> GaussInt {
    use VarKind::*;
    let (re, im) = match (row_bit, col_bit, kind) {
        (0, 0, A) | (1, 1, A) => (1, 0),
        (0, 0, B) => (0, 1),
        (1, 1, B) => (0, -1),
        (0, 1, C) => (-1, 0),
        (1, 0, C) => (1, 0),
        (0, 1, D) | (1, 0, D) => (0, 1),
        _ => (0, 0),
    };
    GaussInt::new(re, im)
}

/// `W_B = M^dagger (W_0 (x) ... (x) W_4) M` with exact coefficients.
///
/// The ambient entry `<i|W|j>` holds a monomial with kinds `k_u` only when
/// `j = i XOR mask(k)`, where the mask marks the qubits carrying `C` or `D`.
/// So for each of the 1024 kind patterns the coefficient of an entry of
/// `W_B` is a sum over the 16 nonzero rows of one column of `M`.
pub fn symbolic_wb(tables: &CodeTables) -> SymbolicMatrix {
    let m4 = tables.m_exact_times4();
    let columns: Vec<Vec<(usize, GaussInt)>> = (0..DIM)
        .map(|c| {
            (0..DIM)
                .filter_map(|i| {
                    let z = m4[i * DIM + c];
                    (z != GaussInt::new(0, 0)).then_some((i, z))
                })
                .collect()
        })
        .collect();
    let patterns: Vec<([VarKind; QUBITS], usize)> = (0..1usize << (2 * QUBITS))
        .map(|code| {
            let kinds: [VarKind; QUBITS] =
                std::array::from_fn(|u| VarKind::from_index((code >> (2 * u)) & 3));
            let mask = kinds
                .iter()
                .enumerate()
                .filter(|(_, k)| matches!(k, VarKind::C | VarKind::D))
                .fold(0, |m, (u, _)| m | 1 << (QUBITS - 1 - u));
            (kinds, mask)
        })
        .collect();

    let sixteenth = Rational64::new(1, 16);
    let mut entries = Vec::with_capacity(DIM * DIM);
    for r in 0..DIM {
        for c in 0..DIM {
            let mut poly = Polynomial::zero();
            for &(kinds, mask) in &patterns {
                let mut acc = GaussInt::new(0, 0);
                for &(i, mi) in &columns[r] {
                    let j = i ^ mask;
                    let mj = m4[j * DIM + c];
                    if mj == GaussInt::new(0, 0) {
                        continue;
                    }
                    let mut f = mi.conj() * mj;
                    for (u, &k) in kinds.iter().enumerate() {
                        let shift = QUBITS - 1 - u;
                        f *= w_factor((i >> shift) & 1, (j >> shift) & 1, k);
                    }
                    acc += f;
                }
                if acc != GaussInt::new(0, 0) {
                    let c = Coeff::new(
                        Rational64::from_integer(acc.re) * sixteenth,
                        Rational64::from_integer(acc.im) * sixteenth,
                    );
                    poly.add_term(Monomial::from_kinds(kinds), c);
                }
            }
            entries.push(poly);
        }
    }
    SymbolicMatrix { dim: DIM, entries }
}

/// The same entry computed by brute-force polynomial products, summing
/// `conj(M[i,r]) W[i,j] M[j,c]` over every pair of nonzero `M` entries.
/// Slow; used as an independent check of [`symbolic_wb`].
pub fn symbolic_wb_entry_by_products(tables: &CodeTables, r: usize, c: usize) -> Polynomial {
    let m4 = tables.m_exact_times4();
    let ws: Vec<_> = (0..QUBITS).map(symbolic_w).collect();
    let to_coeff = |z: GaussInt| {
        Coeff::new(
            Rational64::new(z.re, 4),
            Rational64::new(z.im, 4),
        )
    };
    let mut out = Polynomial::zero();
    for i in 0..DIM {
        let mi = m4[i * DIM + r];
        if mi == GaussInt::new(0, 0) {
            continue;
        }
        for j in 0..DIM {
            let mj = m4[j * DIM + c];
            if mj == GaussInt::new(0, 0) {
                continue;
            }
            let mut prod = Polynomial::constant(to_coeff(mi).conj() * to_coeff(mj));
            for (u, w) in ws.iter().enumerate() {
                let shift = QUBITS - 1 - u;
                prod = &prod * &w[(i >> shift) & 1][(j >> shift) & 1];
            }
            out = &out + &prod;
        }
    }
    out
}

/// The four real polynomials whose values fix the code-basis coordinates of
/// syndrome `s`: `a + ib` is entry `(2s, 0)` and `c + id` is entry `(2s, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Generators {
    pub a: Polynomial,
    pub b: Polynomial,
    pub c: Polynomial,
    pub d: Polynomial,
}

impl Generators {
    pub fn as_array(&self) -> [&Polynomial; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn eval(&self, x: &[f64; NUM_VARS]) -> [f64; 4] {
        self.as_array().map(|p| p.eval(x).re)
    }

    /// `a^2 + b^2 + c^2 + d^2`.
    pub fn probability(&self) -> Polynomial {
        self.as_array()
            .iter()
            .fold(Polynomial::zero(), |acc, p| &acc + &(*p * *p))
    }
}

pub fn extract_generators(wb: &SymbolicMatrix) -> Vec<Generators> {
    (0..N_SYNDROMES)
        .map(|s| {
            let e0 = wb.get(2 * s, 0);
            let e1 = wb.get(2 * s, 1);
            Generators {
                a: e0.real_part(),
                b: e0.imag_part(),
                c: e1.real_part(),
                d: e1.imag_part(),
            }
        })
        .collect()
}
