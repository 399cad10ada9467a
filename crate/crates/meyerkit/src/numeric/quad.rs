//! Exact arithmetic in a real quadratic field `Q(sqrt(D))`.
//!
//! A [`QuadExt`] is `a + b*sqrt(D)` with `a`, `b` arbitrary-precision
//! rationals and `D >= 1` squarefree. Values are kept canonical:
//!
//! * `D = 1` forces `b = 0` (the rational is folded into `a`), so plain
//!   rationals are exactly the values with `disc() == 1`.
//! * `b = 0` forces `D = 1`, so equality is structural.
//!
//! Each scheme fixes one `D`; mixing two genuinely irrational discs in a
//! single operation is a programming error and panics. Rationals (`D = 1`)
//! combine freely with any disc, which is what makes literals like `0` and
//! `1` usable everywhere.
//!
//! Sign determination ([`QuadExt::sign`]) is exact: a case split on the signs
//! of `a` and `b` plus one comparison of `a^2` against `b^2 * D`. Every
//! comparison, floor and ceiling below reduces to that.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use super::NumericError;

/// An element `a + b*sqrt(disc)` of the real quadratic field `Q(sqrt(disc))`.
#[derive(Clone, Debug)]
pub struct QuadExt {
    a: BigRational,
    b: BigRational,
    disc: u64,
}

/// True iff `d` has no repeated prime factor. `d = 1` is squarefree.
pub fn is_squarefree(d: u64) -> bool {
    if d == 0 {
        return false;
    }
    let mut n = d;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

impl QuadExt {
    /// Builds `a + b*sqrt(disc)`, canonicalizing as described in the module
    /// docs. Fails if `disc` is zero or not squarefree.
    pub fn new(a: BigRational, b: BigRational, disc: u64) -> Result<Self, NumericError> {
        if !is_squarefree(disc) {
            return Err(NumericError::BadDiscriminant(disc));
        }
        Ok(Self::new_unchecked(a, b, disc))
    }

    /// As [`QuadExt::new`] but assumes `disc` is already known squarefree.
    pub(crate) fn new_unchecked(a: BigRational, b: BigRational, disc: u64) -> Self {
        if disc == 1 {
            // sqrt(1) = 1: fold b into the rational part.
            QuadExt { a: a + b, b: BigRational::zero(), disc: 1 }
        } else if b.is_zero() {
            QuadExt { a, b, disc: 1 }
        } else {
            QuadExt { a, b, disc }
        }
    }

    pub fn from_rational(a: BigRational) -> Self {
        QuadExt { a, b: BigRational::zero(), disc: 1 }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(n))
    }

    /// `p/q` as a rational value.
    pub fn from_frac(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Self::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// `sqrt(disc)` itself.
    pub fn sqrt_disc(disc: u64) -> Result<Self, NumericError> {
        Self::new(BigRational::zero(), BigRational::one(), disc)
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.b
    }

    /// The discriminant this value actually carries (1 for rationals).
    pub fn disc(&self) -> u64 {
        self.disc
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// True iff the value is a rational integer.
    pub fn is_integer(&self) -> bool {
        self.b.is_zero() && self.a.is_integer()
    }

    /// Exact integer value, if the element is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        if self.is_integer() {
            Some(self.a.to_integer())
        } else {
            None
        }
    }

    /// Resolves the disc two operands must share; panics on a genuine mix.
    fn joint_disc(&self, rhs: &QuadExt) -> u64 {
        if self.disc == rhs.disc {
            self.disc
        } else if self.disc == 1 {
            rhs.disc
        } else if rhs.disc == 1 {
            self.disc
        } else {
            panic!(
                "mixed quadratic fields: sqrt({}) vs sqrt({})",
                self.disc, rhs.disc
            );
        }
    }

    /// Exact sign: -1, 0, or +1.
    ///
    /// With `s = a + b*sqrt(D)` and `D > 1` the only nontrivial cases are
    /// `a`, `b` of opposite signs, where the sign is decided by comparing
    /// `a^2` with `b^2 * D` (both comparands positive, so squaring is
    /// faithful).
    pub fn sign(&self) -> i8 {
        let sa = rat_sign(&self.a);
        let sb = rat_sign(&self.b);
        if sb == 0 {
            return sa;
        }
        debug_assert!(self.disc > 1);
        if sa == 0 {
            return sb;
        }
        if sa == sb {
            return sa;
        }
        // Opposite signs: |a| vs |b|*sqrt(D) decides.
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * BigRational::from_integer(BigInt::from(self.disc));
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0, // impossible for D > 1 squarefree unless a = b = 0
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    pub fn abs(&self) -> QuadExt {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Galois conjugate `a - b*sqrt(D)`.
    pub fn conjugate(&self) -> QuadExt {
        QuadExt::new_unchecked(self.a.clone(), -self.b.clone(), self.disc)
    }

    /// Field norm `a^2 - b^2 D` (a rational).
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(BigInt::from(self.disc))
    }

    /// Multiplicative inverse. `None` for zero.
    pub fn inverse(&self) -> Option<QuadExt> {
        if self.is_zero() {
            return None;
        }
        // (a + b s)^(-1) = (a - b s) / (a^2 - b^2 D); the norm is nonzero for
        // nonzero elements because sqrt(D) is irrational (or b = 0).
        let n = self.norm();
        debug_assert!(!n.is_zero());
        Some(QuadExt::new_unchecked(&self.a / &n, -&self.b / &n, self.disc))
    }

    fn cmp_impl(&self, rhs: &QuadExt) -> Ordering {
        match (self - rhs).sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    /// Approximate double value; used only for seeding searches and for
    /// drawing, never for decisions.
    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(0.0);
        let b = self.b.to_f64().unwrap_or(0.0);
        a + b * (self.disc as f64).sqrt()
    }

    /// Exact floor as an integer.
    pub fn floor_int(&self) -> BigInt {
        if self.b.is_zero() {
            return self.a.floor().to_integer();
        }
        // Seed from the double approximation, then bracket exactly.
        let seed = match self.to_f64() {
            x if x.is_finite() => BigInt::from_f64(x.floor()).unwrap_or_else(BigInt::zero),
            _ => BigInt::zero(),
        };
        // Establish lo <= self by exponential descent.
        let mut lo = seed.clone();
        let mut step = BigInt::one();
        while self.cmp_bigint(&lo) == Ordering::Less {
            lo -= &step;
            step *= 2;
        }
        // Establish self < hi by exponential ascent.
        let mut hi = &lo + 1;
        let mut step = BigInt::one();
        while self.cmp_bigint(&hi) != Ordering::Less {
            hi = &hi + &step;
            step *= 2;
        }
        // Binary search for floor: invariant lo <= self < hi.
        while &hi - &lo > BigInt::one() {
            let mid = (&lo + &hi) / 2;
            if self.cmp_bigint(&mid) == Ordering::Less {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        lo
    }

    /// Exact ceiling as an integer.
    pub fn ceil_int(&self) -> BigInt {
        let f = self.floor_int();
        if self.cmp_bigint(&f) == Ordering::Equal {
            f
        } else {
            f + 1
        }
    }

    fn cmp_bigint(&self, n: &BigInt) -> Ordering {
        let diff = self - &QuadExt::from_bigint(n.clone());
        match diff.sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    /// Midpoint of `self` and `rhs`.
    pub fn midpoint(&self, rhs: &QuadExt) -> QuadExt {
        (self + rhs) / QuadExt::from_int(2)
    }

    pub fn min_of(&self, rhs: &QuadExt) -> QuadExt {
        if self <= rhs {
            self.clone()
        } else {
            rhs.clone()
        }
    }

    pub fn max_of(&self, rhs: &QuadExt) -> QuadExt {
        if self >= rhs {
            self.clone()
        } else {
            rhs.clone()
        }
    }
}

fn rat_sign(r: &BigRational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl PartialEq for QuadExt {
    fn eq(&self, other: &Self) -> bool {
        // Canonical form makes structural equality semantic.
        self.a == other.a && self.b == other.b && (self.b.is_zero() || self.disc == other.disc)
    }
}

impl Eq for QuadExt {}

impl Hash for QuadExt {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
        if !self.b.is_zero() {
            self.disc.hash(state);
        }
    }
}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadExt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_impl(other)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, |$x:ident, $y:ident| $body:expr) => {
        impl $trait for &QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: &QuadExt) -> QuadExt {
                let $x = self;
                let $y = rhs;
                $body
            }
        }
        impl $trait for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                $trait::$method(&self, &rhs)
            }
        }
        impl $trait<&QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: &QuadExt) -> QuadExt {
                $trait::$method(&self, rhs)
            }
        }
        impl $trait<QuadExt> for &QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                $trait::$method(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |x, y| {
    let d = x.joint_disc(y);
    QuadExt::new_unchecked(&x.a + &y.a, &x.b + &y.b, d)
});

forward_binop!(Sub, sub, |x, y| {
    let d = x.joint_disc(y);
    QuadExt::new_unchecked(&x.a - &y.a, &x.b - &y.b, d)
});

forward_binop!(Mul, mul, |x, y| {
    let d = x.joint_disc(y);
    let dd = BigRational::from_integer(BigInt::from(d));
    QuadExt::new_unchecked(
        &x.a * &y.a + &x.b * &y.b * dd,
        &x.a * &y.b + &x.b * &y.a,
        d,
    )
});

forward_binop!(Div, div, |x, y| {
    let inv = y.inverse().expect("division by zero");
    x * &inv
});

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt::new_unchecked(-self.a.clone(), -self.b.clone(), self.disc)
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        -&self
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QuadExt {
    /// Exact text form: `p/q` for rationals, `p/q+r/s√D` otherwise (with a
    /// `-` joining sign when the surd part is negative). Round-trips through
    /// [`QuadExt::from_str`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", fmt_rat(&self.a));
        }
        let joiner = if self.b.is_negative() { "-" } else { "+" };
        write!(
            f,
            "{}{}{}\u{221a}{}",
            fmt_rat(&self.a),
            joiner,
            fmt_rat(&self.b.abs()),
            self.disc
        )
    }
}

fn parse_rat(s: &str) -> Result<BigRational, NumericError> {
    let bad = || NumericError::ParseScalar(s.to_string());
    if let Some((p, q)) = s.split_once('/') {
        let num = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(num, den))
    } else {
        let n = BigInt::from_str(s.trim()).map_err(|_| bad())?;
        Ok(BigRational::from_integer(n))
    }
}

/// Wire form: `{"a": "p/q", "b": "r/s", "D": n}` with exact rational strings.
#[derive(serde::Serialize, serde::Deserialize)]
struct QuadExtRepr {
    a: String,
    b: String,
    #[serde(rename = "D")]
    disc: u64,
}

impl serde::Serialize for QuadExt {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        QuadExtRepr { a: fmt_rat(&self.a), b: fmt_rat(&self.b), disc: self.disc }.serialize(ser)
    }
}

/// Accepted input forms: the canonical object, the display string
/// (`"3/2-1/2√5"`), or a bare integer.
#[derive(serde::Deserialize)]
#[serde(untagged)]
enum QuadExtInput {
    Int(i64),
    Text(String),
    Repr(QuadExtRepr),
}

impl<'de> serde::Deserialize<'de> for QuadExt {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        match QuadExtInput::deserialize(de)? {
            QuadExtInput::Int(n) => Ok(QuadExt::from_int(n)),
            QuadExtInput::Text(s) => s.parse().map_err(D::Error::custom),
            QuadExtInput::Repr(repr) => {
                let a = parse_rat(&repr.a).map_err(D::Error::custom)?;
                let b = parse_rat(&repr.b).map_err(D::Error::custom)?;
                QuadExt::new(a, b, repr.disc).map_err(D::Error::custom)
            }
        }
    }
}

impl FromStr for QuadExt {
    type Err = NumericError;

    /// Parses the [`fmt::Display`] form. Also accepts a bare surd term like
    /// `1/2√5` (rational part zero).
    fn from_str(s: &str) -> Result<Self, NumericError> {
        let s = s.trim();
        let bad = || NumericError::ParseScalar(s.to_string());
        match s.find('\u{221a}') {
            None => Ok(QuadExt::from_rational(parse_rat(s)?)),
            Some(pos) => {
                let disc: u64 = s[pos + '\u{221a}'.len_utf8()..]
                    .trim()
                    .parse()
                    .map_err(|_| bad())?;
                let head = &s[..pos];
                // Split off the surd coefficient at the last sign that is not
                // a leading sign: "-1/2-3/4√5" -> ("-1/2", "-3/4").
                let mut split = None;
                for (i, ch) in head.char_indices().skip(1) {
                    if (ch == '+' || ch == '-') && !head[..i].ends_with('/') {
                        split = Some(i);
                    }
                }
                let (a_str, b_str) = match split {
                    Some(i) => (&head[..i], &head[i..]),
                    None => ("0", head),
                };
                let a = parse_rat(a_str)?;
                let b_str = b_str.trim();
                let b = match b_str.strip_prefix('+') {
                    Some(rest) => parse_rat(rest)?,
                    None => parse_rat(b_str)?,
                };
                QuadExt::new(a, b, disc)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: (i64, i64), b: (i64, i64), d: u64) -> QuadExt {
        QuadExt::new(
            BigRational::new(BigInt::from(a.0), BigInt::from(a.1)),
            BigRational::new(BigInt::from(b.0), BigInt::from(b.1)),
            d,
        )
        .unwrap()
    }

    #[test]
    fn disc_one_folds_surd_part() {
        let x = q((1, 2), (3, 2), 1);
        assert!(x.is_rational());
        assert_eq!(x, QuadExt::from_int(2));
        assert_eq!(x.disc(), 1);
    }

    #[test]
    fn zero_surd_normalizes_disc() {
        let x = q((5, 3), (0, 1), 7);
        assert_eq!(x.disc(), 1);
        assert_eq!(x, QuadExt::from_frac(5, 3));
    }

    #[test]
    fn rejects_non_squarefree() {
        assert!(QuadExt::new(BigRational::zero(), BigRational::one(), 12).is_err());
        assert!(QuadExt::new(BigRational::zero(), BigRational::one(), 9).is_err());
        assert!(QuadExt::new(BigRational::zero(), BigRational::one(), 0).is_err());
        assert!(QuadExt::new(BigRational::zero(), BigRational::one(), 10).is_ok());
    }

    #[test]
    fn sign_case_split() {
        // 3 - sqrt(5) > 0 because 9 > 5.
        assert_eq!(q((3, 1), (-1, 1), 5).sign(), 1);
        // 2 - sqrt(5) < 0 because 4 < 5.
        assert_eq!(q((2, 1), (-1, 1), 5).sign(), -1);
        // -3 + sqrt(5) < 0.
        assert_eq!(q((-3, 1), (1, 1), 5).sign(), -1);
        // -2 + sqrt(5) > 0.
        assert_eq!(q((-2, 1), (1, 1), 5).sign(), 1);
        assert_eq!(QuadExt::zero().sign(), 0);
        // Golden ratio minus its conjugate: sqrt(5) > 0.
        let phi = q((1, 2), (1, 2), 5);
        assert_eq!((&phi - &phi.conjugate()).sign(), 1);
    }

    #[test]
    fn field_identities() {
        let phi = q((1, 2), (1, 2), 5);
        // phi^2 = phi + 1.
        assert_eq!(&phi * &phi, &phi + &QuadExt::one());
        // phi * (-1/phibar) ... via inverse: phi^(-1) = phi - 1.
        assert_eq!(phi.inverse().unwrap(), &phi - &QuadExt::one());
        // Norm of phi is -1.
        assert_eq!(phi.norm(), BigRational::from_integer(BigInt::from(-1)));
    }

    #[test]
    fn rational_mixes_with_any_disc() {
        let x = q((0, 1), (1, 1), 5);
        let y = QuadExt::from_frac(1, 2);
        assert_eq!((&x + &y).disc(), 5);
        assert_eq!((&y + &x).disc(), 5);
    }

    #[test]
    #[should_panic(expected = "mixed quadratic fields")]
    fn mixing_discs_panics() {
        let x = q((0, 1), (1, 1), 5);
        let y = q((0, 1), (1, 1), 2);
        let _ = x + y;
    }

    #[test]
    fn floor_and_ceil() {
        let phi = q((1, 2), (1, 2), 5); // 1.618...
        assert_eq!(phi.floor_int(), BigInt::from(1));
        assert_eq!(phi.ceil_int(), BigInt::from(2));
        let neg = -&phi; // -1.618...
        assert_eq!(neg.floor_int(), BigInt::from(-2));
        assert_eq!(neg.ceil_int(), BigInt::from(-1));
        assert_eq!(QuadExt::from_int(3).floor_int(), BigInt::from(3));
        assert_eq!(QuadExt::from_int(3).ceil_int(), BigInt::from(3));
        assert_eq!(QuadExt::from_frac(-7, 2).floor_int(), BigInt::from(-4));
        // Large magnitude still exact.
        let big = &phi * &QuadExt::from_int(1_000_000);
        assert_eq!(big.floor_int(), BigInt::from(1_618_033));
    }

    #[test]
    fn ordering_is_total_and_exact() {
        let phi = q((1, 2), (1, 2), 5);
        let phibar = phi.conjugate(); // -0.618...
        assert!(phibar < QuadExt::zero());
        assert!(QuadExt::zero() < phi);
        // 1/2 + 1/2 sqrt(5) vs 8/5 (phi ~ 1.618 > 1.6).
        assert!(phi > QuadExt::from_frac(8, 5));
        assert!(phi < QuadExt::from_frac(13, 8));
    }

    #[test]
    fn display_parse_round_trip() {
        let cases = [
            q((1, 2), (1, 2), 5),
            q((-1, 2), (-3, 4), 5),
            q((0, 1), (1, 1), 2),
            QuadExt::from_int(-7),
            QuadExt::from_frac(22, 7),
            QuadExt::zero(),
        ];
        for x in &cases {
            let s = x.to_string();
            let back: QuadExt = s.parse().unwrap();
            assert_eq!(&back, x, "round trip through {s:?}");
        }
        // Bare surd term.
        let y: QuadExt = "1/2\u{221a}5".parse().unwrap();
        assert_eq!(y, q((0, 1), (1, 2), 5));
        let z: QuadExt = "-2+3\u{221a}2".parse().unwrap();
        assert_eq!(z, q((-2, 1), (3, 1), 2));
    }
}
