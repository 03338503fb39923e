//! Reference values the computed algebra is checked against: the explicit
//! generator polynomials of syndromes 0 and 1, and the sign-flip sets used
//! for the symmetry arguments.

use super::gf2::FlipConstraints;
use super::poly::Polynomial;
use super::vars::{FlipSet, VarId, VarKind};
use super::wb::Generators;

pub const A1: &str = "+A0A1A3B2D4 +A0A2A4B3D1 +A0B1C3C4D2 +A0B4C1C2D3 -A1A2B0B4C3 +A1A4C0D2D3 \
    -A1B3C2C4D0 +A2A3C0C1C4 -A2B1D0D3D4 -A3A4B0B1C2 -A3B4D0D1D2 -A4B2C1C3D0 -B0B2C4D1D3 \
    -B0B3C1D2D4 +B1B2B3B4C0 +C0C2C3D1D4";
pub const B1: &str = "-A0A1B3B4D2 -A0A2C1C3D4 -A0A3C2C4D1 -A0A4B1B2D3 +A1A2A3A4D0 +A1B0C2D3D4 \
    -A1B2C0C3C4 +A2B0B1B3C4 -A2B4C0D1D3 +A3B0B2B4C1 -A3B1C0D2D4 +A4B0C3D1D2 -A4B3C0C1C2 \
    +B1B4C2C3D0 +B2B3D0D1D4 +C1C4D0D2D3";
pub const C1: &str = "+A0A1A4C2C3 +A0A2A3B1B4 +A0B2B3C1C4 +A0D1D2D3D4 +A1A2B3C0D4 -A1A3B0C4D2 \
    -A1B2B4D0D3 -A2A4B0C1D3 -A2C3C4D0D1 +A3A4B2C0D1 -A3C1C2D0D4 -A4B1B3D0D2 -B0B1B2C3D4 \
    -B0B3B4C2D1 +B1C0C2C4D3 +B4C0C1C3D2";
pub const D1: &str = "+A0A1A2C4D3 +A0A3A4C1D2 +A0B1B3C2D4 +A0B2B4C3D1 +A1A3B4C0C2 -A1A4B0B2B3 \
    -A1C3D0D2D4 -A2A3B0D1D4 +A2A4B1C0C3 -A2B3B4C1D0 -A3B1B2C4D0 -A4C2D0D1D3 -B0B1B4D2D3 \
    -B0C1C2C3C4 +B2C0C1D3D4 +B3C0C4D1D2";

pub const A0: &str = "+A0A1A2A3A4 +A0B1B4C2C3 +A0B2B3D1D4 +A0C1C4D2D3 +A1B0B2C3C4 +A1B3B4D0D2 \
    +A1C0C2D3D4 +A2B0B4D1D3 +A2B1B3C0C4 +A2C1C3D0D4 +A3B0B1D2D4 +A3B2B4C0C1 +A3C2C4D0D1 \
    +A4B0B3C1C2 +A4B1B2D0D3 +A4C0C3D1D2";
pub const B0: &str = "+A0A1B3C2C4 +A0A2B1D3D4 +A0A3B4D1D2 +A0A4B2C1C3 +A1A2B4C0C3 +A1A3B2D0D4 \
    +A1A4B0D2D3 +A2A3B0C1C4 +A2A4B3D0D1 +A3A4B1C0C2 +B0B1B2B3B4 +B0C2C3D1D4 +B1C3C4D0D2 \
    +B2C0C4D1D3 +B3C0C1D2D4 +B4C1C2D0D3";
pub const C0: &str = "-A0A1C3D2D4 -A0A2B3B4C1 -A0A3B1B2C4 -A0A4C2D1D3 -A1A2C4D0D3 -A1A3B0B4C2 \
    -A1A4B2B3C0 -A2A3C0D1D4 -A2A4B0B1C3 -A3A4C1D0D2 -B0B2C1D3D4 -B0B3C4D1D2 -B1B3C2D0D4 \
    -B1B4C0D2D3 -B2B4C3D0D1 -C0C1C2C3C4";
pub const D0: &str = "+A0A1B2B4D3 +A0A2C3C4D1 +A0A3C1C2D4 +A0A4B1B3D2 +A1A2B0B3D4 +A1A3C0C4D2 \
    +A1A4C2C3D0 +A2A3B1B4D0 +A2A4C0C1D3 +A3A4B0B2D1 +B0B1C2C4D3 +B0B4C1C3D2 +B1B2C0C3D4 \
    +B2B3C1C4D0 +B3B4C0C2D1 +D0D1D2D3D4";

/// Reference generators of syndrome `s` (only 0 and 1 are tabulated).
pub fn printed_generators(s: usize) -> Option<Generators> {
    let parse = |t: &str| Polynomial::parse(t).expect("reference polynomial parses");
    match s {
        0 => Some(Generators {
            a: parse(A0),
            b: parse(B0),
            c: parse(C0),
            d: parse(D0),
        }),
        1 => Some(Generators {
            a: parse(A1),
            b: parse(B1),
            c: parse(C1),
            d: parse(D1),
        }),
        _ => None,
    }
}

/// The A-free set negating every generator monomial of syndrome 1.
pub const FLIP_S1: &str = "B3, B4, C0, C2, D0, D2, D3, D4";

/// Sets negating every generator monomial of syndrome 0 while containing
/// exactly one `A` variable, `A_u` for the `u`-th entry.
pub const FLIP_S0_SINGLE_A: [&str; 5] = [
    "A0, B0, B3, B4, C2, D2, D3, D4",
    "A1, B1, B2, B3, C4, D2, D3, D4",
    "A2, B0, C0, C3, C4, D2, D3, D4",
    "A3, B1, B2, B4, C2, D1, D3, D4",
    "A4, B1, C1, C2, C3, D2, D3, D4",
];

/// A set negating every generator monomial of syndrome 0 whose overlap with
/// [`FLIP_S0_PINNED_MONOMIAL`] is exactly `{B1}`.
pub const FLIP_S0_PINNED: &str = "A1, B1, B2, B3, C4, D2, D3, D4";
pub const FLIP_S0_PINNED_MONOMIAL: &str = "A0B1B4C2C3";

/// A named flip set together with the constraints it must satisfy.
#[derive(Clone, Debug)]
pub struct PrintedFlipSet {
    pub name: String,
    pub set: FlipSet,
    pub constraints: FlipConstraints,
}

/// Negate all 64 generator monomials of syndrome `s`, with no `A`.
pub fn a_free_constraints(gens: &Generators) -> FlipConstraints {
    let mut c = FlipConstraints::new();
    for p in gens.as_array() {
        c.negate_all(p);
    }
    c.exclude_kind(VarKind::A);
    c
}

/// Negate all 64 generator monomials of syndrome 0, include `A_u`, exclude
/// every other `A`.
pub fn single_a_constraints(gens0: &Generators, u: usize) -> FlipConstraints {
    let mut c = FlipConstraints::new();
    for p in gens0.as_array() {
        c.negate_all(p);
    }
    for q in 0..5 {
        let v = VarId::new(VarKind::A, q);
        if q == u {
            c.include(v);
        } else {
            c.exclude(v);
        }
    }
    c
}

/// Negate all 64 generator monomials of syndrome 0 and meet the pinned
/// monomial in exactly `{B1}`.
pub fn pinned_constraints(gens0: &Generators) -> FlipConstraints {
    let mut c = FlipConstraints::new();
    for p in gens0.as_array() {
        c.negate_all(p);
    }
    let support = Polynomial::parse(FLIP_S0_PINNED_MONOMIAL)
        .expect("valid monomial")
        .monomials()
        .next()
        .expect("one monomial")
        .support();
    c.exact_overlap(support, FlipSet::parse("B1").expect("valid set"));
    c
}

/// Every reference flip set with its constraint system, built from the
/// supplied generators of syndromes 0 and 1.
pub fn printed_flip_sets(gens0: &Generators, gens1: &Generators) -> Vec<PrintedFlipSet> {
    let parse = |t: &str| FlipSet::parse(t).expect("valid set");
    let mut out = vec![PrintedFlipSet {
        name: "s1".into(),
        set: parse(FLIP_S1),
        constraints: a_free_constraints(gens1),
    }];
    for (u, text) in FLIP_S0_SINGLE_A.iter().enumerate() {
        out.push(PrintedFlipSet {
            name: format!("s0_single_a{u}"),
            set: parse(text),
            constraints: single_a_constraints(gens0, u),
        });
    }
    out.push(PrintedFlipSet {
        name: "s0_pinned".into(),
        set: parse(FLIP_S0_PINNED),
        constraints: pinned_constraints(gens0),
    });
    out
}
