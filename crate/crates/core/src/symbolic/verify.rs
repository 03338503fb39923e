use std::fmt::Write as _;

use num_rational::Rational64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gf2::find_flip_set;
use super::structure::{
    a_count_table, check_a_count_table, expected_p, surviving_monomials, verify_odd_rows, verify_shape,
};
use super::poly::{Coeff, Monomial, Polynomial};
use super::reference::{a_free_constraints, printed_flip_sets, printed_generators};
use super::vars::{FlipSet, VarId, VarKind, NUM_VARS, QUBITS};
use super::wb::{extract_generators, symbolic_w, symbolic_wb, Generators, SymbolicMatrix};
use crate::analytics::MomentSet;
use crate::code5::{CodeTables, DIM, N_SYNDROMES};
use crate::errormodel::{build_product_error, AngleSample, AngleTriple};

const ORACLE_SEED: u64 = 0x005e_ed0f_c0de;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    /// The solver's A-free flip set for each syndrome `1..16`.
    pub flip_sets: Vec<(usize, Option<FlipSet>)>,
    pub a_counts: Vec<[usize; 6]>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "[{tag}] {:<26} {}", c.name, c.detail);
        }
        out.push_str("\nA-count table (monomials of P_s with 5, 4, 3, 2, 1, 0 A variables):\n");
        for (s, row) in self.a_counts.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|n| format!("{n:>3}")).collect();
            let _ = writeln!(out, "  s={s:<2} {}", cells.join(" "));
        }
        out.push_str("\nA-free flip sets:\n");
        for (s, f) in &self.flip_sets {
            match f {
                Some(f) => {
                    let _ = writeln!(out, "  s={s:<2} {f}");
                }
                None => {
                    let _ = writeln!(out, "  s={s:<2} infeasible");
                }
            }
        }
        let _ = writeln!(
            out,
            "\n{}",
            if self.passed() { "all checks passed" } else { "verification FAILED" }
        );
        out
    }

    /// Flat `key=value` lines.
    pub fn to_key_value(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(out, "check.{}={}", c.name, if c.passed { "pass" } else { "fail" });
            let _ = writeln!(out, "check.{}.detail={}", c.name, c.detail.replace('\n', " "));
        }
        for (s, row) in self.a_counts.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "a_count.s{s}={}", cells.join(","));
        }
        for (s, f) in &self.flip_sets {
            let v = f.map_or("infeasible".to_string(), |f| f.to_string());
            let _ = writeln!(out, "flip_set.s{s}={v}");
        }
        let _ = writeln!(out, "all_passed={}", self.passed());
        out
    }
}

fn check(name: &'static str, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name,
        passed,
        detail: detail.into(),
    }
}

fn random_sample(rng: &mut ChaCha8Rng) -> AngleSample {
    use std::f64::consts::{PI, TAU};
    AngleSample::new(std::array::from_fn(|_| {
        AngleTriple::new(rng.random::<f64>() * PI, rng.random::<f64>() * PI, rng.random::<f64>() * TAU)
            .expect("angles in range")
    }))
}

fn check_w_unitary() -> Check {
    let mut bad = Vec::new();
    for u in 0..QUBITS {
        let w = symbolic_w(u);
        let norm = VarKind::ALL
            .iter()
            .map(|&k| Polynomial::var(VarId::new(k, u)))
            .fold(Polynomial::zero(), |acc, p| &acc + &(&p * &p));
        for r in 0..2 {
            for c in 0..2 {
                let e = &(&w[0][r].conj() * &w[0][c]) + &(&w[1][r].conj() * &w[1][c]);
                let expected = if r == c { norm.clone() } else { Polynomial::zero() };
                if e != expected {
                    bad.push(format!("W_{u}[{r},{c}]"));
                }
            }
        }
    }
    check(
        "w_unitary",
        bad.is_empty(),
        if bad.is_empty() {
            "W^dagger W = (A^2+B^2+C^2+D^2) I on all five qubits".to_string()
        } else {
            format!("mismatch at {}", bad.join(", "))
        },
    )
}

fn check_entry_counts(wb: &SymbolicMatrix) -> Check {
    let bad: Vec<String> = wb
        .entries()
        .iter()
        .enumerate()
        .filter(|(_, p)| p.len() != 32 || !p.is_multilinear_homogeneous())
        .map(|(k, p)| format!("({}, {}) has {} monomials", k / DIM, k % DIM, p.len()))
        .collect();
    let detail = if bad.is_empty() {
        "all 1024 entries: 32 monomials, one variable per qubit".to_string()
    } else {
        format!("{} bad entries, first: {}", bad.len(), bad[0])
    };
    check("wb_entry_counts", bad.is_empty(), detail)
}

fn check_wb_numeric(wb: &SymbolicMatrix, tables: &CodeTables) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(ORACLE_SEED);
    let m = tables.m_matrix();
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let s = random_sample(&mut rng);
        let numeric = m
            .adjoint()
            .mul(&build_product_error(&s))
            .and_then(|x| x.mul(m))
            .expect("32x32 products");
        for (a, b) in wb.eval(&s.variables()).iter().zip(numeric.entries()) {
            worst = worst.max((a - b).norm());
        }
    }
    check(
        "wb_numeric_oracle",
        worst <= 1e-10,
        format!("max |W_B(x) - M^dagger W M| over 20 samples = {worst:.2e}"),
    )
}

fn check_identity(wb: &SymbolicMatrix) -> Check {
    let mut x = [Rational64::zero(); NUM_VARS];
    for v in x.iter_mut().take(QUBITS) {
        *v = Rational64::one();
    }
    let mut bad = 0;
    for r in 0..DIM {
        for c in 0..DIM {
            let expected = if r == c { Coeff::one() } else { Coeff::zero() };
            if wb.get(r, c).eval_exact(&x) != expected {
                bad += 1;
            }
        }
    }
    check(
        "wb_identity",
        bad == 0,
        format!("A_u = 1, others 0: {bad} entries differ from the identity"),
    )
}

fn check_shape(gens: &[Generators]) -> Check {
    let failures = verify_shape(gens);
    let detail = match failures.first() {
        None => "16 monomials each, 64 distinct per syndrome, pairs share one variable".to_string(),
        Some(f) => format!("{} violations, first: {f}", failures.len()),
    };
    check("generator_shape", failures.is_empty(), detail)
}

fn check_a_counts(table: &[[usize; 6]]) -> Check {
    let bad = check_a_count_table(table);
    let detail = match bad.first() {
        None => "s=0 row (1,0,0,30,15,18); every other row (0,1,6,16,26,15)".to_string(),
        Some(m) => format!(
            "{} mismatches, first: s={} bucket {} expected {} got {}",
            bad.len(),
            m.s,
            m.bucket,
            m.expected,
            m.actual
        ),
    };
    check("a_count_table", bad.is_empty(), detail)
}

fn check_printed(gens: &[Generators]) -> Check {
    let mut bad = Vec::new();
    for s in 0..2 {
        let printed = printed_generators(s).expect("tabulated");
        for (name, (ours, theirs)) in ['a', 'b', 'c', 'd']
            .iter()
            .zip(gens[s].as_array().into_iter().zip(printed.as_array()))
        {
            if ours != theirs {
                let diff = ours - theirs;
                bad.push(format!("{name}_{s} differs in {} terms", diff.len()));
            }
        }
    }
    check(
        "printed_generators",
        bad.is_empty(),
        if bad.is_empty() {
            "a..d for s=0 and s=1 match term by term, signs included".to_string()
        } else {
            bad.join("; ")
        },
    )
}

fn check_odd_rows(wb: &SymbolicMatrix) -> Check {
    let bad = verify_odd_rows(wb);
    check(
        "odd_rows_from_generators",
        bad.is_empty(),
        if bad.is_empty() {
            "every coordinate of the disturbed state is a linear form in (a_s,b_s,c_s,d_s)".to_string()
        } else {
            format!("fails for s in {bad:?}")
        },
    )
}

fn check_generator_numeric(gens: &[Generators], tables: &CodeTables) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(ORACLE_SEED + 1);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let s = random_sample(&mut rng);
        let numeric = tables.beta_generators(&s);
        let x = s.variables();
        for (g, n) in gens.iter().zip(numeric.iter()) {
            for (a, b) in g.eval(&x).iter().zip(n) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    check(
        "generator_numeric_oracle",
        worst <= 1e-10,
        format!("max deviation from numeric generators over 50 samples = {worst:.2e}"),
    )
}

fn check_printed_sets(gens: &[Generators]) -> Check {
    let bad: Vec<String> = printed_flip_sets(&gens[0], &gens[1])
        .into_iter()
        .filter_map(|p| {
            let v = p.constraints.check(p.set);
            (!v.is_empty()).then(|| format!("{} {} violates {} constraints", p.name, p.set, v.len()))
        })
        .collect();
    check(
        "printed_flip_sets",
        bad.is_empty(),
        if bad.is_empty() {
            "7 reference sets satisfy their constraints on the computed generators".to_string()
        } else {
            bad.join("; ")
        },
    )
}

fn solve_flip_sets(gens: &[Generators]) -> Vec<(usize, Option<FlipSet>)> {
    (1..N_SYNDROMES)
        .map(|s| (s, find_flip_set(&a_free_constraints(&gens[s]))))
        .collect()
}

fn check_flip_sets(gens: &[Generators], sets: &[(usize, Option<FlipSet>)]) -> Check {
    let mut bad = Vec::new();
    for &(s, f) in sets {
        match f {
            None => bad.push(format!("s={s} infeasible")),
            Some(f) => {
                if !a_free_constraints(&gens[s]).check(f).is_empty() {
                    bad.push(format!("s={s} solution {f} fails its constraints"));
                }
            }
        }
    }
    check(
        "flip_sets_feasible",
        bad.is_empty(),
        if bad.is_empty() {
            "A-free sets found and verified for s=1..15".to_string()
        } else {
            bad.join("; ")
        },
    )
}

fn check_s0_control(gens: &[Generators]) -> Check {
    let f = find_flip_set(&a_free_constraints(&gens[0]));
    check(
        "s0_has_no_a_free_set",
        f.is_none(),
        match f {
            None => "no A-free set negates all s=0 generator monomials".to_string(),
            Some(f) => format!("unexpected A-free set {f}"),
        },
    )
}

fn check_first_moment(gens: &[Generators]) -> Check {
    let kept = surviving_monomials(&gens[0].a);
    let expected = vec![Monomial::from_kinds([VarKind::A; QUBITS])];
    let names: Vec<String> = kept.iter().map(Monomial::to_string).collect();
    check(
        "a0_first_moment",
        kept == expected,
        format!("monomials of a_0 with nonzero mean: [{}]", names.join(", ")),
    )
}

fn check_expected_p(gens: &[Generators]) -> Check {
    let mut worst = 0.0f64;
    for sigma in [0.0, 0.3, 0.5, 0.7, 0.9] {
        let p = expected_p(gens, &MomentSet::normal_closed_form(sigma));
        let s8 = sigma.powi(8);
        worst = worst.max((p[0] - (1.0 + 15.0 * s8) / 16.0).abs());
        for &ps in &p[1..] {
            worst = worst.max((ps - (1.0 - s8) / 16.0).abs());
        }
    }
    check(
        "expected_p_normal",
        worst <= 1e-9,
        format!("max deviation from (1+15s^8)/16, (1-s^8)/16 = {worst:.2e}"),
    )
}

/// Runs every check against the given code tables.
pub fn run_verification(tables: &CodeTables) -> VerificationReport {
    let wb = symbolic_wb(tables);
    let gens = extract_generators(&wb);
    let a_counts = a_count_table(&gens);
    let flip_sets = solve_flip_sets(&gens);
    let checks = vec![
        check_w_unitary(),
        check_entry_counts(&wb),
        check_wb_numeric(&wb, tables),
        check_identity(&wb),
        check_shape(&gens),
        check_a_counts(&a_counts),
        check_printed(&gens),
        check_odd_rows(&wb),
        check_generator_numeric(&gens, tables),
        check_printed_sets(&gens),
        check_flip_sets(&gens, &flip_sets),
        check_s0_control(&gens),
        check_first_moment(&gens),
        check_expected_p(&gens),
    ];
    VerificationReport {
        checks,
        flip_sets,
        a_counts,
    }
}
