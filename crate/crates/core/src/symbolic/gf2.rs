//! Sign-flip sets as solutions of a linear system over GF(2).
//!
//! Flipping the signs of a variable set `F` multiplies a monomial `m` by
//! `(-1)^|odd(m) & F|`, so asking for a given sign on each monomial is one
//! parity equation per monomial in the 20 indicator bits of `F`.

use super::poly::Polynomial;
use super::vars::{FlipSet, VarId, VarKind, NUM_VARS};

const RHS: u32 = 1 << NUM_VARS;

/// A parity system plus variables forced into or out of the solution.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FlipConstraints {
    parities: Vec<(u32, bool)>,
    include: u32,
    exclude: u32,
}

/// One constraint a candidate set fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Parity { support: u32, odd_required: bool },
    MissingVariable(VarId),
    ForbiddenVariable(VarId),
}

impl FlipConstraints {
    pub fn new() -> FlipConstraints {
        FlipConstraints::default()
    }

    /// `|support & F|` must be odd (or even).
    pub fn parity(&mut self, support: u32, odd: bool) -> &mut Self {
        self.parities.push((support, odd));
        self
    }

    /// Every monomial of `p` must change sign.
    pub fn negate_all(&mut self, p: &Polynomial) -> &mut Self {
        for m in p.monomials() {
            self.parity(m.odd_support(), true);
        }
        self
    }

    pub fn include(&mut self, v: VarId) -> &mut Self {
        self.include |= 1 << v.index();
        self
    }

    pub fn exclude(&mut self, v: VarId) -> &mut Self {
        self.exclude |= 1 << v.index();
        self
    }

    pub fn exclude_kind(&mut self, kind: VarKind) -> &mut Self {
        for u in 0..5 {
            self.exclude(VarId::new(kind, u));
        }
        self
    }

    /// `F` must meet the support of a monomial in exactly `wanted`.
    pub fn exact_overlap(&mut self, support: u32, wanted: FlipSet) -> &mut Self {
        for i in 0..NUM_VARS {
            if support >> i & 1 == 1 {
                let v = VarId::from_index(i);
                if wanted.contains(v) {
                    self.include(v);
                } else {
                    self.exclude(v);
                }
            }
        }
        self
    }

    pub fn len(&self) -> usize {
        self.parities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parities.is_empty() && self.include == 0 && self.exclude == 0
    }

    fn rows(&self) -> Vec<u32> {
        let mut rows: Vec<u32> = self
            .parities
            .iter()
            .map(|&(mask, odd)| mask | if odd { RHS } else { 0 })
            .collect();
        for i in 0..NUM_VARS {
            let bit = 1 << i;
            if self.include & bit != 0 {
                rows.push(bit | RHS);
            }
            if self.exclude & bit != 0 {
                rows.push(bit);
            }
        }
        rows
    }

    pub fn check(&self, set: FlipSet) -> Vec<Violation> {
        let f = set.bits();
        let mut out: Vec<Violation> = self
            .parities
            .iter()
            .filter(|&&(mask, odd)| ((mask & f).count_ones() % 2 == 1) != odd)
            .map(|&(support, odd_required)| Violation::Parity {
                support,
                odd_required,
            })
            .collect();
        for v in VarId::all() {
            let bit = 1 << v.index();
            if self.include & bit != 0 && f & bit == 0 {
                out.push(Violation::MissingVariable(v));
            }
            if self.exclude & bit != 0 && f & bit != 0 {
                out.push(Violation::ForbiddenVariable(v));
            }
        }
        out
    }
}

/// A solution of the system with every free variable set to zero, or
/// `None` when the system is inconsistent.
pub fn find_flip_set(c: &FlipConstraints) -> Option<FlipSet> {
    let mut rows = c.rows();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..NUM_VARS {
        let bit = 1 << col;
        let Some(p) = (rank..rows.len()).find(|&r| rows[r] & bit != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && *row & bit != 0 {
                *row ^= pivot;
            }
        }
        pivots.push(col);
        rank += 1;
    }
    // A row reduced to `0 = 1` means no solution.
    if rows[rank..].contains(&RHS) {
        return None;
    }
    let bits = pivots
        .iter()
        .enumerate()
        .filter(|&(r, _)| rows[r] & RHS != 0)
        .fold(0, |acc, (_, &col)| acc | 1 << col);
    Some(FlipSet::from_bits(bits))
}
