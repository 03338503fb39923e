use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::{Complex, Complex64};
use num_rational::Rational64;
use num_traits::{CheckedAdd, CheckedMul, One, Signed, ToPrimitive, Zero};

use super::vars::{VarId, VarKind, NUM_VARS, QUBITS};

/// Exact complex rational coefficient.
pub type Coeff = Complex<Rational64>;

const EXP_BITS: u32 = 3;
const EXP_MAX: u32 = (1 << EXP_BITS) - 1;

pub fn coeff(re: i64, im: i64) -> Coeff {
    Complex::new(Rational64::from_integer(re), Rational64::from_integer(im))
}

/// A product of the 20 variables with small exponents, packed as 3 bits per
/// variable in a `u64`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(u64);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(0)
    }

    pub fn var(v: VarId) -> Monomial {
        Monomial(1 << (EXP_BITS as usize * v.index()))
    }

    /// One variable per qubit, the shape of every entry of the encoded error.
    pub fn from_kinds(kinds: [VarKind; QUBITS]) -> Monomial {
        kinds
            .iter()
            .enumerate()
            .map(|(u, &k)| Monomial::var(VarId::new(k, u)))
            .fold(Monomial::one(), |a, b| a * b)
    }

    pub fn exponent(self, v: VarId) -> u32 {
        ((self.0 >> (EXP_BITS as usize * v.index())) & EXP_MAX as u64) as u32
    }

    pub fn checked_mul(self, other: Monomial) -> Option<Monomial> {
        let mut out = 0u64;
        for i in 0..NUM_VARS {
            let v = VarId::from_index(i);
            let e = self.exponent(v) + other.exponent(v);
            if e > EXP_MAX {
                return None;
            }
            out |= (e as u64) << (EXP_BITS as usize * i);
        }
        Some(Monomial(out))
    }

    pub fn degree(self) -> u32 {
        VarId::all().map(|v| self.exponent(v)).sum()
    }

    /// `(variable, exponent)` pairs with nonzero exponent, in index order.
    pub fn factors(self) -> impl Iterator<Item = (VarId, u32)> {
        VarId::all()
            .map(move |v| (v, self.exponent(v)))
            .filter(|&(_, e)| e > 0)
    }

    /// Bit `i` set when variable `i` occurs.
    pub fn support(self) -> u32 {
        self.factors().fold(0, |m, (v, _)| m | 1 << v.index())
    }

    /// Bit `i` set when variable `i` has an odd exponent. Flipping the signs
    /// of a set `F` multiplies the monomial by `(-1)^|odd_support & F|`.
    pub fn odd_support(self) -> u32 {
        self.factors()
            .filter(|&(_, e)| e % 2 == 1)
            .fold(0, |m, (v, _)| m | 1 << v.index())
    }

    /// The per-qubit kinds when the monomial has exactly one degree-one
    /// variable on each qubit.
    pub fn kinds(self) -> Option<[VarKind; QUBITS]> {
        let mut out = [None; QUBITS];
        for (v, e) in self.factors() {
            let slot = &mut out[v.qubit as usize];
            if e != 1 || slot.is_some() {
                return None;
            }
            *slot = Some(v.kind);
        }
        let mut kinds = [VarKind::A; QUBITS];
        for (k, o) in kinds.iter_mut().zip(out) {
            *k = o?;
        }
        Some(kinds)
    }

    pub fn count_kind(self, kind: VarKind) -> u32 {
        self.factors()
            .filter(|(v, _)| v.kind == kind)
            .map(|(_, e)| e)
            .sum()
    }

    pub fn is_even(self) -> bool {
        self.odd_support() == 0
    }

    pub fn eval(self, x: &[f64; NUM_VARS]) -> f64 {
        self.factors().map(|(v, e)| x[v.index()].powi(e as i32)).product()
    }
}

impl Mul for Monomial {
    type Output = Monomial;

    fn mul(self, rhs: Monomial) -> Monomial {
        self.checked_mul(rhs).expect("monomial exponent overflow")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        for (v, e) in self.factors() {
            write!(f, "{v}")?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// A sparse polynomial in the 20 real variables with exact complex rational
/// coefficients. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Coeff>,
}

impl Polynomial {
    pub fn zero() -> Polynomial {
        Polynomial::default()
    }

    pub fn constant(c: Coeff) -> Polynomial {
        Self::term(Monomial::one(), c)
    }

    pub fn var(v: VarId) -> Polynomial {
        Self::term(Monomial::var(v), Coeff::one())
    }

    pub fn term(m: Monomial, c: Coeff) -> Polynomial {
        let mut p = Polynomial::zero();
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Coeff::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &Coeff)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn monomials(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms.keys().copied()
    }

    pub fn coeff(&self, m: Monomial) -> Coeff {
        self.terms.get(&m).copied().unwrap_or_else(Coeff::zero)
    }

    pub fn scale(&self, c: Coeff) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, k) in self.terms() {
            out.add_term(m, k * c);
        }
        out
    }

    /// Conjugates the coefficients. Since the variables are real this is the
    /// complex conjugate of the polynomial's value.
    pub fn conj(&self) -> Polynomial {
        self.map_coeffs(|c| c.conj())
    }

    pub fn real_part(&self) -> Polynomial {
        self.map_coeffs(|c| Complex::new(c.re, Rational64::zero()))
    }

    pub fn imag_part(&self) -> Polynomial {
        self.map_coeffs(|c| Complex::new(c.im, Rational64::zero()))
    }

    fn map_coeffs(&self, f: impl Fn(Coeff) -> Coeff) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in self.terms() {
            out.add_term(m, f(*c));
        }
        out
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im.is_zero())
    }

    /// True when every monomial has one degree-one variable per qubit.
    pub fn is_multilinear_homogeneous(&self) -> bool {
        self.monomials().all(|m| m.kinds().is_some())
    }

    pub fn eval(&self, x: &[f64; NUM_VARS]) -> Complex64 {
        self.terms()
            .map(|(m, c)| {
                let v = m.eval(x);
                Complex64::new(ratio_f64(c.re) * v, ratio_f64(c.im) * v)
            })
            .sum()
    }

    /// Substitutes constants for variables and returns the exact value.
    pub fn eval_exact(&self, x: &[Rational64; NUM_VARS]) -> Coeff {
        let mut acc = Coeff::zero();
        for (m, c) in self.terms() {
            let mut v = Rational64::one();
            for (var, e) in m.factors() {
                for _ in 0..e {
                    v *= x[var.index()];
                }
            }
            acc += c * v;
        }
        acc
    }

    /// Parses text such as `+A0A1A3B2D4 -3/4*i*B0C1 + 2`. A term is an
    /// optional sign followed by factors (rationals, `i`, variables with an
    /// optional `^k`), optionally separated by `*`. Arithmetic overflow and
    /// exponents above 7 are reported as errors.
    pub fn parse(text: &str) -> Result<Polynomial, PolyParseError> {
        Parser::new(text).parse()
    }
}

fn ratio_f64(r: Rational64) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        self.map_coeffs(|c| -c)
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        -&self
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in rhs.terms() {
            out.add_term(m, *c);
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in rhs.terms() {
            out.add_term(m, -c);
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, c1) in self.terms() {
            for (m2, c2) in rhs.terms() {
                out.add_term(m1 * m2, c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;

            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

fn fmt_rational(r: Rational64) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Polynomial {
    /// Real and imaginary parts of a coefficient are written as separate
    /// terms, so the output always parses back with [`Polynomial::parse`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            for (part, imag) in [(c.re, false), (c.im, true)] {
                if part.is_zero() {
                    continue;
                }
                if !first {
                    write!(f, " ")?;
                }
                first = false;
                write!(f, "{}", if part.is_negative() { '-' } else { '+' })?;
                let mag = part.abs();
                let mut factors = Vec::new();
                if !mag.is_one() || (m == Monomial::one() && !imag) {
                    factors.push(fmt_rational(mag));
                }
                if imag {
                    factors.push("i".to_string());
                }
                if m != Monomial::one() {
                    factors.push(m.to_string());
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("polynomial parse error at byte {offset}: {message}")]
pub struct PolyParseError {
    pub offset: usize,
    pub message: String,
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, PolyParseError> {
        Err(PolyParseError {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn integer(&mut self) -> Result<i64, PolyParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        match digits.parse::<i64>() {
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos = start;
                self.err("integer expected or out of range")
            }
        }
    }

    fn parse(mut self) -> Result<Polynomial, PolyParseError> {
        let mut terms: BTreeMap<Monomial, Coeff> = BTreeMap::new();
        self.skip_ws();
        if self.peek().is_none() {
            return self.err("empty input");
        }
        while {
            self.skip_ws();
            self.peek().is_some()
        } {
            let (m, c) = self.term()?;
            let slot = terms.entry(m).or_insert_with(Coeff::zero);
            let (Some(re), Some(im)) = (slot.re.checked_add(&c.re), slot.im.checked_add(&c.im)) else {
                return self.err("coefficient overflow");
            };
            *slot = Complex::new(re, im);
        }
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        Ok(p)
    }

    fn term(&mut self) -> Result<(Monomial, Coeff), PolyParseError> {
        let mut negative = false;
        match self.peek() {
            Some(b'+') => self.pos += 1,
            Some(b'-') => {
                negative = true;
                self.pos += 1;
            }
            _ => {}
        }
        let mut scalar = Rational64::one();
        let mut i_power = 0u32;
        let mut mono = Monomial::one();
        let mut n_factors = 0;
        loop {
            self.skip_ws();
            if n_factors > 0 && self.peek() == Some(b'*') {
                self.pos += 1;
                self.skip_ws();
            }
            match self.peek() {
                Some(b) if b.is_ascii_digit() => {
                    let num = self.integer()?;
                    let mut r = Rational64::from_integer(num);
                    if self.peek() == Some(b'/') {
                        self.pos += 1;
                        let den = self.integer()?;
                        if den == 0 {
                            return self.err("zero denominator");
                        }
                        r = Rational64::new(num, den);
                    }
                    scalar = match scalar.checked_mul(&r) {
                        Some(v) => v,
                        None => return self.err("coefficient overflow"),
                    };
                }
                Some(b'i') => {
                    self.pos += 1;
                    i_power += 1;
                }
                Some(b @ b'A'..=b'D') => {
                    self.pos += 1;
                    let kind = VarKind::from_index((b - b'A') as usize);
                    if self.peek() == Some(b'_') {
                        self.pos += 1;
                    }
                    let qubit = match self.peek() {
                        Some(q @ b'0'..=b'4') => (q - b'0') as usize,
                        _ => return self.err("qubit index 0..4 expected"),
                    };
                    self.pos += 1;
                    let mut exp = 1;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        let e = self.integer()?;
                        if !(0..=EXP_MAX as i64).contains(&e) {
                            return self.err("exponent must be at most 7");
                        }
                        exp = e as u32;
                    }
                    for _ in 0..exp {
                        mono = match mono.checked_mul(Monomial::var(VarId::new(kind, qubit))) {
                            Some(m) => m,
                            None => return self.err("exponent must be at most 7"),
                        };
                    }
                }
                _ if n_factors == 0 => return self.err("term expected"),
                _ => break,
            }
            n_factors += 1;
        }
        if negative {
            scalar = -scalar;
        }
        let c = match i_power % 4 {
            0 => Complex::new(scalar, Rational64::zero()),
            1 => Complex::new(Rational64::zero(), scalar),
            2 => Complex::new(-scalar, Rational64::zero()),
            _ => Complex::new(Rational64::zero(), -scalar),
        };
        Ok((mono, c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(s: &str) -> Polynomial {
        Polynomial::var(s.parse().unwrap())
    }

    #[test]
    fn monomial_display_is_kind_major() {
        let m = Monomial::from_kinds([VarKind::A, VarKind::A, VarKind::B, VarKind::A, VarKind::D]);
        assert_eq!(m.to_string(), "A0A1A3B2D4");
        assert_eq!(m.degree(), 5);
        assert_eq!(m.count_kind(VarKind::A), 3);
        assert_eq!(m.kinds().unwrap()[2], VarKind::B);
        assert!((m * m).kinds().is_none());
        assert!((m * m).is_even());
        assert_eq!((m * m).to_string(), "A0^2A1^2A3^2B2^2D4^2");
    }

    #[test]
    fn arithmetic_cancels_and_drops_zeros() {
        let p = &v("A0") + &v("B1");
        let q = &p - &v("B1");
        assert_eq!(q, v("A0"));
        assert!((&q - &q).is_zero());
        let sq = &p * &p;
        assert_eq!(sq.len(), 3);
        assert_eq!(sq.coeff(Monomial::var("A0".parse().unwrap()) * Monomial::var("B1".parse().unwrap())), coeff(2, 0));
    }

    #[test]
    fn real_and_imaginary_parts() {
        let p = Polynomial::parse("+A0 +i*B0 -3/4*i*C1").unwrap();
        assert_eq!(p.real_part(), v("A0"));
        assert_eq!(p.imag_part(), Polynomial::parse("B0 - 3/4*C1").unwrap());
        assert_eq!(p.conj(), Polynomial::parse("A0 - i*B0 + 3/4 i C1").unwrap());
        assert!(!p.is_real());
    }

    #[test]
    fn parse_accepts_printed_forms() {
        let p = Polynomial::parse("+A0A1A3B2D4 +A0A2A4B3D1 -A1A2B0B4C3").unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.is_multilinear_homogeneous());
        assert_eq!(Polynomial::parse("A_0*A_1").unwrap(), &v("A0") * &v("A1"));
        assert_eq!(Polynomial::parse("2 - 2").unwrap(), Polynomial::zero());
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in ["", "A5", "E0", "1/0", "A0^9", "A0^4A0^4", "99999999999999999999", "+", "A0 ?"] {
            assert!(Polynomial::parse(bad).is_err(), "{bad}");
        }
        assert!(Polynomial::parse("9223372036854775807*A0 + 9223372036854775807*A0").is_err());
    }

    #[test]
    fn eval_matches_exact_evaluation() {
        let p = Polynomial::parse("1/2*A0^2B1 - i*C3D4 + 7").unwrap();
        let mut x = [0.0; NUM_VARS];
        let mut xr = [Rational64::zero(); NUM_VARS];
        for (i, (a, b)) in x.iter_mut().zip(xr.iter_mut()).enumerate() {
            *b = Rational64::new(i as i64 + 1, 3);
            *a = (i as f64 + 1.0) / 3.0;
        }
        let exact = p.eval_exact(&xr);
        let approx = p.eval(&x);
        assert!((approx.re - ratio_f64(exact.re)).abs() < 1e-12);
        assert!((approx.im - ratio_f64(exact.im)).abs() < 1e-12);
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial> {
        let term = (
            prop::collection::vec((0usize..NUM_VARS, 1u32..3), 0..4),
            -5i64..6,
            -5i64..6,
            1i64..5,
        );
        prop::collection::vec(term, 0..6).prop_map(|ts| {
            let mut p = Polynomial::zero();
            for (vars, re, im, den) in ts {
                // Exponents stay at most 2 so that triple products fit.
                let m = vars.iter().fold(Monomial::one(), |m, &(i, e)| {
                    let v = VarId::from_index(i);
                    (0..e).fold(m, |m, _| if m.exponent(v) < 2 { m * Monomial::var(v) } else { m })
                });
                p.add_term(m, Complex::new(Rational64::new(re, den), Rational64::new(im, den)));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn display_round_trips(p in arb_poly()) {
            prop_assert_eq!(Polynomial::parse(&p.to_string()).unwrap(), p);
        }

        #[test]
        fn ring_laws(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert_eq!(&(&p + &q) * &r, &(&p * &r) + &(&q * &r));
            prop_assert_eq!(&(&p * &q).conj(), &(p.conj() * q.conj()));
            prop_assert_eq!(&p.real_part() + &p.imag_part().scale(coeff(0, 1)), p);
        }

        #[test]
        fn parser_never_panics(s in "[-+*/^ iA-E0-9_]{0,40}") {
            let _ = Polynomial::parse(&s);
        }
    }
}
