use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Number of per-qubit variable groups.
pub const QUBITS: usize = 5;
/// Total number of real variables `A_u, B_u, C_u, D_u`.
pub const NUM_VARS: usize = 20;

/// The four real coordinates of a single-qubit error,
/// `A = cos t0`, `B = sin t0 cos t1`, `C = sin t0 sin t1 cos t2`,
/// `D = sin t0 sin t1 sin t2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VarKind {
    A = 0,
    B = 1,
    C = 2,
    D = 3,
}

impl VarKind {
    pub const ALL: [VarKind; 4] = [VarKind::A, VarKind::B, VarKind::C, VarKind::D];

    pub fn from_index(i: usize) -> VarKind {
        Self::ALL[i]
    }

    pub fn letter(self) -> char {
        ['A', 'B', 'C', 'D'][self as usize]
    }
}

/// One of the 20 variables, e.g. `B_3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VarId {
    pub kind: VarKind,
    pub qubit: u8,
}

impl VarId {
    pub fn new(kind: VarKind, qubit: usize) -> VarId {
        assert!(qubit < QUBITS, "qubit {qubit} out of range");
        VarId {
            kind,
            qubit: qubit as u8,
        }
    }

    /// Dense index in `0..20`, kind-major so that sorting by index reproduces
    /// the conventional `A.. B.. C.. D..` display order.
    pub fn index(self) -> usize {
        self.kind as usize * QUBITS + self.qubit as usize
    }

    pub fn from_index(i: usize) -> VarId {
        assert!(i < NUM_VARS);
        VarId::new(VarKind::from_index(i / QUBITS), i % QUBITS)
    }

    pub fn all() -> impl Iterator<Item = VarId> {
        (0..NUM_VARS).map(VarId::from_index)
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.letter(), self.qubit)
    }
}

impl FromStr for VarId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut chars = s.chars();
        let kind = match chars.next() {
            Some('A') => VarKind::A,
            Some('B') => VarKind::B,
            Some('C') => VarKind::C,
            Some('D') => VarKind::D,
            _ => return Err(format!("bad variable `{s}`")),
        };
        let rest = chars.as_str().trim_start_matches('_');
        let qubit: usize = rest.parse().map_err(|_| format!("bad qubit in `{s}`"))?;
        if qubit >= QUBITS {
            return Err(format!("qubit out of range in `{s}`"));
        }
        Ok(VarId::new(kind, qubit))
    }
}

/// A subset of the 20 variables whose signs are flipped together.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FlipSet {
    bits: u32,
}

impl FlipSet {
    pub fn empty() -> FlipSet {
        FlipSet { bits: 0 }
    }

    pub fn from_bits(bits: u32) -> FlipSet {
        FlipSet {
            bits: bits & ((1 << NUM_VARS) - 1),
        }
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn contains(self, v: VarId) -> bool {
        self.bits >> v.index() & 1 == 1
    }

    pub fn insert(&mut self, v: VarId) {
        self.bits |= 1 << v.index();
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn iter(self) -> impl Iterator<Item = VarId> {
        (0..NUM_VARS)
            .filter(move |i| self.bits >> i & 1 == 1)
            .map(VarId::from_index)
    }

    /// True when no `A_u` is in the set.
    pub fn is_a_free(self) -> bool {
        self.iter().all(|v| v.kind != VarKind::A)
    }

    /// Parses a list such as `B3, B4, C0` (braces optional).
    pub fn parse(s: &str) -> Result<FlipSet, String> {
        let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
        let mut set = FlipSet::empty();
        for tok in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            set.insert(tok.parse()?);
        }
        Ok(set)
    }
}

impl FromIterator<VarId> for FlipSet {
    fn from_iter<I: IntoIterator<Item = VarId>>(iter: I) -> Self {
        let mut set = FlipSet::empty();
        for v in iter {
            set.insert(v);
        }
        set
    }
}

impl fmt::Display for FlipSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trips() {
        for i in 0..NUM_VARS {
            assert_eq!(VarId::from_index(i).index(), i);
        }
        assert_eq!("D_4".parse::<VarId>().unwrap(), VarId::new(VarKind::D, 4));
        assert!("E1".parse::<VarId>().is_err());
        assert!("A5".parse::<VarId>().is_err());
    }

    #[test]
    fn flip_set_display_and_parse() {
        let s = FlipSet::parse("{B3, B4, C0, C2, D0, D2, D3, D4}").unwrap();
        assert_eq!(s.len(), 8);
        assert!(s.is_a_free());
        assert_eq!(s.to_string(), "{B3, B4, C0, C2, D0, D2, D3, D4}");
        assert_eq!(FlipSet::parse(&s.to_string()).unwrap(), s);
    }
}
