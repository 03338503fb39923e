use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{Monomial, Polynomial};
use super::vars::{VarKind, QUBITS};
use super::wb::{Generators, SymbolicMatrix};
use crate::analytics::MomentSet;
use crate::code5::N_SYNDROMES;

/// Row of the A-count table for syndrome zero, indexed by `5 - #A`.
pub const A_COUNT_S0: [usize; 6] = [1, 0, 0, 30, 15, 18];
/// Common row of the A-count table for every other syndrome.
pub const A_COUNT_OTHER: [usize; 6] = [0, 1, 6, 16, 26, 15];

const NAMES: [char; 4] = ['a', 'b', 'c', 'd'];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShapeFailure {
    WrongTermCount {
        s: usize,
        poly: char,
        count: usize,
    },
    NotMultilinear {
        s: usize,
        poly: char,
        monomial: Monomial,
    },
    NonUnitCoefficient {
        s: usize,
        poly: char,
        monomial: Monomial,
    },
    Repeated {
        s: usize,
        monomial: Monomial,
    },
    SharedVariables {
        s: usize,
        poly: char,
        first: Monomial,
        second: Monomial,
        shared: u32,
    },
}

impl fmt::Display for ShapeFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeFailure::WrongTermCount { s, poly, count } => {
                write!(f, "s={s}: {poly}_{s} has {count} monomials, expected 16")
            }
            ShapeFailure::NotMultilinear { s, poly, monomial } => {
                write!(f, "s={s}: {poly}_{s} has non-multilinear monomial {monomial}")
            }
            ShapeFailure::NonUnitCoefficient { s, poly, monomial } => {
                write!(f, "s={s}: {poly}_{s} coefficient of {monomial} is not +-1")
            }
            ShapeFailure::Repeated { s, monomial } => {
                write!(f, "s={s}: monomial {monomial} occurs in more than one generator")
            }
            ShapeFailure::SharedVariables {
                s,
                poly,
                first,
                second,
                shared,
            } => write!(
                f,
                "s={s}: {poly}_{s} monomials {first} and {second} share {shared} variables"
            ),
        }
    }
}

/// Checks the structure of each quadruple: 16 multilinear monomials per
/// polynomial with unit coefficients, 64 distinct monomials per syndrome,
/// and every pair inside one polynomial sharing exactly one variable.
pub fn verify_shape(gens: &[Generators]) -> Vec<ShapeFailure> {
    let mut out = Vec::new();
    for (s, g) in gens.iter().enumerate() {
        let mut seen = std::collections::BTreeSet::new();
        for (poly, p) in NAMES.into_iter().zip(g.as_array()) {
            if p.len() != 16 {
                out.push(ShapeFailure::WrongTermCount { s, poly, count: p.len() });
            }
            for (m, c) in p.terms() {
                if m.kinds().is_none() {
                    out.push(ShapeFailure::NotMultilinear { s, poly, monomial: m });
                }
                let unit = c.im.is_zero() && c.re.abs().is_one();
                if !unit {
                    out.push(ShapeFailure::NonUnitCoefficient { s, poly, monomial: m });
                }
                if !seen.insert(m) {
                    out.push(ShapeFailure::Repeated { s, monomial: m });
                }
            }
            let ms: Vec<Monomial> = p.monomials().collect();
            for (i, &m1) in ms.iter().enumerate() {
                for &m2 in &ms[i + 1..] {
                    let shared = (m1.support() & m2.support()).count_ones();
                    if shared != 1 {
                        out.push(ShapeFailure::SharedVariables {
                            s,
                            poly,
                            first: m1,
                            second: m2,
                            shared,
                        });
                    }
                }
            }
        }
    }
    out
}

/// Per-qubit product of kinds that has a nonzero expectation under any
/// density of the first angle: nothing, `A`, or the square of one variable.
fn qubit_factor_survives(exps: [u32; 4]) -> bool {
    matches!(
        exps,
        [0, 0, 0, 0] | [1, 0, 0, 0] | [2, 0, 0, 0] | [0, 2, 0, 0] | [0, 0, 2, 0] | [0, 0, 0, 2]
    )
}

fn qubit_exponents(m: Monomial, u: usize) -> [u32; 4] {
    VarKind::ALL.map(|k| m.exponent(super::vars::VarId::new(k, u)))
}

/// Monomials of `p` whose expectation is not identically zero. Odd powers
/// of `B`, `C`, `D` and products of two different kinds on the same qubit
/// average to zero because the second and third angles are symmetric.
pub fn surviving_monomials(p: &Polynomial) -> Vec<Monomial> {
    p.monomials()
        .filter(|&m| (0..QUBITS).all(|u| qubit_factor_survives(qubit_exponents(m, u))))
        .collect()
}

/// `E[p]` for a polynomial of per-qubit degree at most two, assuming the
/// five qubits are independent and identically distributed.
///
/// # Panics
/// If a monomial has a per-qubit degree above two.
pub fn expectation(p: &Polynomial, m: &MomentSet) -> f64 {
    let (ea, ea2, eb2) = (m.e_a(), m.e_a2(), m.e_b2());
    p.terms()
        .map(|(mono, c)| {
            let value: f64 = (0..QUBITS)
                .map(|u| match qubit_exponents(mono, u) {
                    [0, 0, 0, 0] => 1.0,
                    [1, 0, 0, 0] => ea,
                    [2, 0, 0, 0] => ea2,
                    [0, 2, 0, 0] | [0, 0, 2, 0] | [0, 0, 0, 2] => eb2,
                    e if e.iter().sum::<u32>() <= 2 => 0.0,
                    e => panic!("per-qubit degree {} unsupported", e.iter().sum::<u32>()),
                })
                .product();
            c.re.to_f64().unwrap_or(f64::NAN) * value
        })
        .sum()
}

/// `E[P_s] = E[a_s^2 + b_s^2 + c_s^2 + d_s^2]` for every syndrome, summing
/// the squared monomials of each generator.
pub fn expected_p(gens: &[Generators], m: &MomentSet) -> Vec<f64> {
    gens.iter()
        .map(|g| {
            g.as_array()
                .iter()
                .flat_map(|p| p.terms())
                .map(|(mono, c)| {
                    let sq = Polynomial::term(mono * mono, c * c);
                    expectation(&sq, m)
                })
                .sum()
        })
        .collect()
}

/// For each syndrome, the even monomials of the expanded `P_s` bucketed by
/// their number of distinct `A` variables, from five (index 0) down to
/// none (index 5).
pub fn a_count_table(gens: &[Generators]) -> Vec<[usize; 6]> {
    gens.iter()
        .map(|g| {
            let mut row = [0usize; 6];
            for m in surviving_monomials(&g.probability()) {
                if m.is_even() {
                    row[5 - (m.count_kind(VarKind::A) / 2) as usize] += 1;
                }
            }
            row
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableMismatch {
    pub s: usize,
    pub bucket: usize,
    pub expected: usize,
    pub actual: usize,
}

pub fn check_a_count_table(table: &[[usize; 6]]) -> Vec<TableMismatch> {
    let mut out = Vec::new();
    for (s, row) in table.iter().enumerate() {
        let expected = if s == 0 { A_COUNT_S0 } else { A_COUNT_OTHER };
        for bucket in 0..6 {
            if row[bucket] != expected[bucket] {
                out.push(TableMismatch {
                    s,
                    bucket,
                    expected: expected[bucket],
                    actual: row[bucket],
                });
            }
        }
    }
    if table.len() != N_SYNDROMES {
        out.push(TableMismatch {
            s: table.len(),
            bucket: 0,
            expected: N_SYNDROMES,
            actual: table.len(),
        });
    }
    out
}

/// Checks that the odd rows of the first two columns of `W_B` are fixed by
/// the even rows: for `s > 0`, entry `(2s+1, 0)` is `conj((2s, 1))` and
/// `(2s+1, 1)` is `-conj((2s, 0))`; for `s = 0` both signs are reversed.
/// Since `beta = alpha col_0 + gamma col_1` for independent `alpha`,
/// `gamma`, this is the full coordinate reconstruction from the generators.
/// Returns the syndromes that fail.
pub fn verify_odd_rows(wb: &SymbolicMatrix) -> Vec<usize> {
    (0..N_SYNDROMES)
        .filter(|&s| {
            let (even0, even1) = (wb.get(2 * s, 0), wb.get(2 * s, 1));
            let (odd0, odd1) = (wb.get(2 * s + 1, 0), wb.get(2 * s + 1, 1));
            let ok = if s == 0 {
                *odd0 == -even1.conj() && *odd1 == even0.conj()
            } else {
                *odd0 == even1.conj() && *odd1 == -even0.conj()
            };
            !ok
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code5::CodeTables;
    use crate::symbolic::wb::{extract_generators, symbolic_wb};
    use std::sync::OnceLock;

    fn tables() -> &'static (SymbolicMatrix, Vec<Generators>) {
        static T: OnceLock<(SymbolicMatrix, Vec<Generators>)> = OnceLock::new();
        T.get_or_init(|| {
            let wb = symbolic_wb(&CodeTables::build());
            let g = extract_generators(&wb);
            (wb, g)
        })
    }

    #[test]
    fn shape_holds_and_mutation_is_caught() {
        let gens = &tables().1;
        assert!(verify_shape(gens).is_empty());
        let mut broken = gens.clone();
        let first = broken[1].a.monomials().next().unwrap();
        let c = broken[1].a.coeff(first);
        broken[1].a.add_term(first, -c);
        let failures = verify_shape(&broken);
        assert!(failures.contains(&ShapeFailure::WrongTermCount { s: 1, poly: 'a', count: 15 }));
    }

    #[test]
    fn a_count_rows() {
        let table = a_count_table(&tables().1);
        assert_eq!(table[0], A_COUNT_S0);
        assert_eq!(table[7], A_COUNT_OTHER);
        assert!(table.iter().all(|r| r.iter().sum::<usize>() == 64));
        assert!(check_a_count_table(&table).is_empty());
    }

    #[test]
    fn odd_rows_follow_from_even_rows() {
        assert!(verify_odd_rows(&tables().0).is_empty());
    }

    #[test]
    fn first_generator_has_one_surviving_monomial() {
        let a0 = &tables().1[0].a;
        let kept = surviving_monomials(a0);
        assert_eq!(kept, vec![Monomial::from_kinds([VarKind::A; 5])]);
    }

    #[test]
    fn expected_probabilities_for_the_normal_family() {
        for sigma in [0.0, 0.3, 0.9] {
            let m = MomentSet::normal_closed_form(sigma);
            let p = expected_p(&tables().1, &m);
            let s8 = sigma.powi(8);
            assert!((p[0] - (1.0 + 15.0 * s8) / 16.0).abs() < 1e-12, "sigma {sigma}");
            for &ps in &p[1..] {
                assert!((ps - (1.0 - s8) / 16.0).abs() < 1e-12);
            }
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            let ea0 = expectation(&tables().1[0].a, &m);
            assert!((ea0 - sigma.powi(5)).abs() < 1e-12);
        }
    }
}
