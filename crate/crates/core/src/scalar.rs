//! Exact arithmetic in `Q_p` at a capped relative precision.
//!
//! A nonzero scalar is `p^v * u` where `u` is a unit known modulo
//! `p^precision`. Multiplication and inversion never lose digits; addition
//! loses exactly the digits that cancel, so `precision` is tracked per value
//! and never exceeds the working precision it was created with. Zero is a
//! distinguished canonical value whose valuation is `+inf`.
//!
//! Equality is equality at working precision: two nonzero scalars are equal
//! when they have the same valuation and their units agree modulo
//! `p^min(precision)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_PRIME: u32 = 5;
pub const DEFAULT_PRECISION: u32 = 16;

/// Largest supported `p^precision`; residues are multiplied in `u128`.
const MODULUS_LIMIT: u64 = 1 << 62;

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Checks that `p` is prime and that `p^precision` fits the residue arithmetic.
pub fn validate_field(prime: u32, precision: u32) -> Result<()> {
    if !is_prime(prime) {
        return Err(Error::InvalidPrime(prime));
    }
    let ok = precision >= 1
        && (prime as u64)
            .checked_pow(precision)
            .is_some_and(|m| m <= MODULUS_LIMIT);
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidPrecision { prime, precision })
    }
}

fn pow(p: u32, k: u32) -> u64 {
    (p as u64).pow(k)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Inverse of `a` modulo `m`, for `a` coprime to `m`.
fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "inv_mod called on a non-unit");
    t0.rem_euclid(m as i128) as u64
}

/// Splits `n != 0` into `(v, w)` with `n = p^v * w` and `p` not dividing `w`.
fn split_valuation(mut n: i128, p: u32) -> (i64, i128) {
    let p = p as i128;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    (v, n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Value {
    Zero,
    Nonzero { valuation: i64, unit: u64 },
}

/// An element of `Q_p` at capped relative precision.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(try_from = "ScalarWire", into = "ScalarWire")]
pub struct PadicScalar {
    prime: u32,
    precision: u32,
    value: Value,
}

impl PadicScalar {
    /// Builds a nonzero value from already-validated parts, reducing `unit`.
    fn nonzero(prime: u32, precision: u32, valuation: i64, unit: u64) -> Self {
        debug_assert!(!unit.is_multiple_of(prime as u64));
        PadicScalar {
            prime,
            precision,
            value: Value::Nonzero {
                valuation,
                unit: unit % pow(prime, precision),
            },
        }
    }

    fn zero_unchecked(prime: u32, precision: u32) -> Self {
        PadicScalar {
            prime,
            precision,
            value: Value::Zero,
        }
    }

    pub fn zero(prime: u32, precision: u32) -> Result<Self> {
        validate_field(prime, precision)?;
        Ok(Self::zero_unchecked(prime, precision))
    }

    pub fn one(prime: u32, precision: u32) -> Result<Self> {
        validate_field(prime, precision)?;
        Ok(Self::nonzero(prime, precision, 0, 1))
    }

    pub fn from_i64(prime: u32, precision: u32, n: i64) -> Result<Self> {
        Self::from_rational(prime, precision, n, 1)
    }

    /// The rational `num / den` as a p-adic scalar.
    pub fn from_rational(prime: u32, precision: u32, num: i64, den: i64) -> Result<Self> {
        validate_field(prime, precision)?;
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        if num == 0 {
            return Ok(Self::zero_unchecked(prime, precision));
        }
        let m = pow(prime, precision);
        let (vn, wn) = split_valuation(num as i128, prime);
        let (vd, wd) = split_valuation(den as i128, prime);
        let wn = wn.rem_euclid(m as i128) as u64;
        let wd = wd.rem_euclid(m as i128) as u64;
        let unit = mul_mod(wn, inv_mod(wd, m), m);
        Ok(Self::nonzero(prime, precision, vn - vd, unit))
    }

    /// `p^valuation * unit`; `unit` must not be divisible by `p` and is reduced
    /// modulo `p^precision`.
    pub fn from_parts(prime: u32, precision: u32, valuation: i64, unit: u64) -> Result<Self> {
        validate_field(prime, precision)?;
        if unit.is_multiple_of(prime as u64) {
            return Err(Error::InvalidInput(format!(
                "unit {unit} is divisible by p = {prime}"
            )));
        }
        Ok(Self::nonzero(prime, precision, valuation, unit))
    }

    /// `p^k`.
    pub fn prime_power(prime: u32, precision: u32, k: i64) -> Result<Self> {
        Self::from_parts(prime, precision, k, 1)
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    /// Number of significant base-p digits carried by this value.
    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// `None` encodes the `+inf` valuation of zero.
    pub fn valuation(&self) -> Option<i64> {
        match self.value {
            Value::Zero => None,
            Value::Nonzero { valuation, .. } => Some(valuation),
        }
    }

    pub fn unit(&self) -> Option<u64> {
        match self.value {
            Value::Zero => None,
            Value::Nonzero { unit, .. } => Some(unit),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value == Value::Zero
    }

    /// `|x| = p^(-v)`, exactly.
    pub fn abs(&self) -> LogNorm {
        match self.value {
            Value::Zero => LogNorm::ZERO,
            Value::Nonzero { valuation, .. } => LogNorm::from_exponent(valuation),
        }
    }

    /// Deterministic ordering by `(valuation, unit)`, zero last.
    pub fn sort_key(&self) -> (i64, u64) {
        match self.value {
            Value::Zero => (i64::MAX, 0),
            Value::Nonzero { valuation, unit } => (valuation, unit),
        }
    }

    fn check_prime(&self, other: &Self) -> Result<()> {
        if self.prime == other.prime {
            Ok(())
        } else {
            Err(Error::PrimeMismatch(self.prime, other.prime))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let (vx, ux, px, vy, uy, py) = match (self.value, other.value) {
            (Value::Zero, _) => return Ok(*other),
            (_, Value::Zero) => return Ok(*self),
            (
                Value::Nonzero {
                    valuation: vx,
                    unit: ux,
                },
                Value::Nonzero {
                    valuation: vy,
                    unit: uy,
                },
            ) => (vx, ux, self.precision, vy, uy, other.precision),
        };
        let p = self.prime;
        let v = vx.min(vy);
        let absolute = (vx + px as i64).min(vy + py as i64);
        let digits = (absolute - v) as u32;
        let m = pow(p, digits);
        let term = |val: i64, unit: u64| -> u64 {
            let shift = val - v;
            if shift >= digits as i64 {
                0
            } else {
                mul_mod(unit % m, pow(p, shift as u32), m)
            }
        };
        let mut s = ((term(vx, ux) as u128 + term(vy, uy) as u128) % m as u128) as u64;
        if s == 0 {
            return Ok(Self::zero_unchecked(p, px.max(py)));
        }
        let mut k = 0u32;
        while s.is_multiple_of(p as u64) {
            s /= p as u64;
            k += 1;
        }
        Ok(Self::nonzero(p, digits - k, v + k as i64, s))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let precision = self.precision.min(other.precision);
        match (self.value, other.value) {
            (
                Value::Nonzero {
                    valuation: vx,
                    unit: ux,
                },
                Value::Nonzero {
                    valuation: vy,
                    unit: uy,
                },
            ) => {
                let m = pow(self.prime, precision);
                Ok(Self::nonzero(
                    self.prime,
                    precision,
                    vx + vy,
                    mul_mod(ux % m, uy % m, m),
                ))
            }
            _ => Ok(Self::zero_unchecked(self.prime, precision)),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        match self.value {
            Value::Zero => Err(Error::DivisionByZero),
            Value::Nonzero { valuation, unit } => {
                let m = pow(self.prime, self.precision);
                Ok(Self::nonzero(
                    self.prime,
                    self.precision,
                    -valuation,
                    inv_mod(unit, m),
                ))
            }
        }
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.inv()?)
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { *self };
        let mut acc = Self::nonzero(self.prime, self.precision, 0, 1);
        let mut b = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&b)?;
            }
            b = b.try_mul(&b)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Square root by Hensel lifting, for odd `p`.
    ///
    /// The residue seed is the smallest `r` in `1..p` with `r^2 = a (mod p)`
    /// and the returned root is the unique lift congruent to it.
    pub fn hensel_sqrt(&self) -> Result<Self> {
        let p = self.prime;
        if p == 2 {
            return Err(Error::Unsupported(
                "square roots are only lifted for odd primes".into(),
            ));
        }
        let (valuation, a) = match self.value {
            Value::Zero => return Ok(*self),
            Value::Nonzero { valuation, unit } => (valuation, unit),
        };
        if valuation % 2 != 0 {
            return Err(Error::NoSquareRoot(format!("valuation {valuation} is odd")));
        }
        let pp = p as u64;
        let seed = (1..pp)
            .find(|r| (r * r) % pp == a % pp)
            .ok_or_else(|| Error::NoSquareRoot(format!("{} is not a square mod {p}", a % pp)))?;
        let m = pow(p, self.precision);
        let mut r = seed;
        // Newton steps double the number of correct digits.
        for _ in 0..64 {
            let sq = mul_mod(r, r, m);
            if sq == a % m {
                return Ok(Self::nonzero(p, self.precision, valuation / 2, r));
            }
            let diff = (sq + m - a % m) % m;
            let step = mul_mod(diff, inv_mod(mul_mod(2, r, m), m), m);
            r = (r + m - step) % m;
        }
        unreachable!("Hensel iteration did not converge")
    }
}

impl PartialEq for PadicScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.prime != other.prime {
            return false;
        }
        match (self.value, other.value) {
            (Value::Zero, Value::Zero) => true,
            (
                Value::Nonzero {
                    valuation: vx,
                    unit: ux,
                },
                Value::Nonzero {
                    valuation: vy,
                    unit: uy,
                },
            ) => {
                let m = pow(self.prime, self.precision.min(other.precision));
                vx == vy && ux % m == uy % m
            }
            _ => false,
        }
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value {
            Value::Zero => write!(f, "0"),
            Value::Nonzero { valuation: 0, unit } => write!(f, "{unit}"),
            Value::Nonzero { valuation, unit } => write!(f, "{unit}*{}^{valuation}", self.prime),
        }
    }
}

impl Neg for PadicScalar {
    type Output = PadicScalar;

    fn neg(self) -> PadicScalar {
        match self.value {
            Value::Zero => self,
            Value::Nonzero { valuation, unit } => {
                let m = pow(self.prime, self.precision);
                Self::nonzero(self.prime, self.precision, valuation, m - unit % m)
            }
        }
    }
}

impl Neg for &PadicScalar {
    type Output = PadicScalar;

    fn neg(self) -> PadicScalar {
        -*self
    }
}

// Operator impls panic on a prime mismatch; the `try_*` methods report it.
macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&PadicScalar> for &PadicScalar {
            type Output = PadicScalar;
            fn $method(self, rhs: &PadicScalar) -> PadicScalar {
                self.$checked(rhs)
                    .expect(concat!("PadicScalar::", stringify!($method)))
            }
        }
        impl $tr<PadicScalar> for PadicScalar {
            type Output = PadicScalar;
            fn $method(self, rhs: PadicScalar) -> PadicScalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&PadicScalar> for PadicScalar {
            type Output = PadicScalar;
            fn $method(self, rhs: &PadicScalar) -> PadicScalar {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

/// Wire form: `{"p","precision","valuation","unit"}` or `{"p","precision","zero":true}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScalarWire {
    p: u32,
    precision: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    valuation: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    unit: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    zero: Option<bool>,
}

impl From<PadicScalar> for ScalarWire {
    fn from(x: PadicScalar) -> Self {
        match x.value {
            Value::Zero => ScalarWire {
                p: x.prime,
                precision: x.precision,
                valuation: None,
                unit: None,
                zero: Some(true),
            },
            Value::Nonzero { valuation, unit } => ScalarWire {
                p: x.prime,
                precision: x.precision,
                valuation: Some(valuation),
                unit: Some(unit.to_string()),
                zero: None,
            },
        }
    }
}

impl TryFrom<ScalarWire> for PadicScalar {
    type Error = Error;

    fn try_from(w: ScalarWire) -> Result<Self> {
        match (w.zero, w.valuation, w.unit) {
            (Some(true), None, None) => PadicScalar::zero(w.p, w.precision),
            (None | Some(false), Some(valuation), Some(unit)) => {
                let unit: u64 = unit.parse().map_err(|_| {
                    Error::InvalidInput(format!("unit {unit:?} is not a decimal integer"))
                })?;
                PadicScalar::from_parts(w.p, w.precision, valuation, unit)
            }
            _ => Err(Error::InvalidInput(
                "a scalar needs either \"zero\": true or both \"valuation\" and \"unit\"".into(),
            )),
        }
    }
}

/// A norm value `p^(-q)` with `q` in `(1/2)Z` or `q = +inf` (the norm 0).
///
/// Stored as twice the exponent so that square-root weights stay exact.
/// Ordering is by norm value: `ZERO` is the least element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "LogNormWire", into = "LogNormWire")]
pub enum LogNorm {
    Zero,
    Power { halves: i64 },
}

impl LogNorm {
    pub const ZERO: LogNorm = LogNorm::Zero;
    pub const ONE: LogNorm = LogNorm::Power { halves: 0 };

    /// `p^(-q)` for an integer exponent `q`.
    pub fn from_exponent(q: i64) -> Self {
        LogNorm::Power { halves: 2 * q }
    }

    /// `p^(-h/2)`.
    pub fn from_half_exponent(h: i64) -> Self {
        LogNorm::Power { halves: h }
    }

    /// Twice the exponent, `None` for the zero norm.
    pub fn half_exponent(&self) -> Option<i64> {
        match *self {
            LogNorm::Zero => None,
            LogNorm::Power { halves } => Some(halves),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, LogNorm::Zero)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: LogNorm) -> LogNorm {
        match (self, other) {
            (LogNorm::Power { halves: a }, LogNorm::Power { halves: b }) => {
                LogNorm::Power { halves: a + b }
            }
            _ => LogNorm::Zero,
        }
    }

    /// `self / other`; `None` when `other` is zero.
    #[allow(clippy::should_implement_trait)]
    pub fn div(self, other: LogNorm) -> Option<LogNorm> {
        match (self, other) {
            (_, LogNorm::Zero) => None,
            (LogNorm::Zero, _) => Some(LogNorm::Zero),
            (LogNorm::Power { halves: a }, LogNorm::Power { halves: b }) => {
                Some(LogNorm::Power { halves: a - b })
            }
        }
    }

    pub fn square(self) -> LogNorm {
        self.mul(self)
    }

    pub fn powi(self, k: u32) -> LogNorm {
        match self {
            LogNorm::Zero if k == 0 => LogNorm::ONE,
            LogNorm::Zero => LogNorm::Zero,
            LogNorm::Power { halves } => LogNorm::Power {
                halves: halves * k as i64,
            },
        }
    }

    /// Maximum of an iterator of norms; the empty maximum is zero.
    pub fn max_of<I: IntoIterator<Item = LogNorm>>(it: I) -> LogNorm {
        it.into_iter().fold(LogNorm::ZERO, Ord::max)
    }
}

impl Ord for LogNorm {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (LogNorm::Zero, LogNorm::Zero) => Ordering::Equal,
            (LogNorm::Zero, _) => Ordering::Less,
            (_, LogNorm::Zero) => Ordering::Greater,
            (LogNorm::Power { halves: a }, LogNorm::Power { halves: b }) => b.cmp(a),
        }
    }
}

impl PartialOrd for LogNorm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LogNorm {
    /// The exponent `q`: `inf`, an integer, or `k/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            LogNorm::Zero => write!(f, "inf"),
            LogNorm::Power { halves } if halves % 2 == 0 => write!(f, "{}", halves / 2),
            LogNorm::Power { halves } => write!(f, "{halves}/2"),
        }
    }
}

impl std::str::FromStr for LogNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("bad norm exponent {s:?}"));
        if s == "inf" {
            return Ok(LogNorm::Zero);
        }
        match s.split_once('/') {
            Some((num, "2")) => {
                let h: i64 = num.parse().map_err(|_| bad())?;
                Ok(LogNorm::from_half_exponent(h))
            }
            Some(_) => Err(bad()),
            None => Ok(LogNorm::from_exponent(s.parse().map_err(|_| bad())?)),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LogNormWire {
    exponent: String,
}

impl From<LogNorm> for LogNormWire {
    fn from(n: LogNorm) -> Self {
        LogNormWire {
            exponent: n.to_string(),
        }
    }
}

impl TryFrom<LogNormWire> for LogNorm {
    type Error = Error;

    fn try_from(w: LogNormWire) -> Result<Self> {
        w.exponent.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q5(n: i64) -> PadicScalar {
        PadicScalar::from_i64(5, DEFAULT_PRECISION, n).unwrap()
    }

    #[test]
    fn add_raises_valuation_on_carry() {
        let s = q5(5) + q5(20);
        assert_eq!(s, q5(25));
        assert_eq!(s.valuation(), Some(2));

        let s = q5(2) + q5(3);
        assert_eq!(s.valuation(), Some(1));
        assert_eq!(s, q5(5));
    }

    #[test]
    fn add_zero_is_identity() {
        let x = q5(123);
        assert_eq!(x + q5(0), x);
        assert_eq!(q5(0) + x, x);
    }

    #[test]
    fn prime_mismatch_is_an_error() {
        let y = PadicScalar::from_i64(7, 8, 1).unwrap();
        assert_eq!(q5(1).try_add(&y), Err(Error::PrimeMismatch(5, 7)));
        assert_eq!(q5(1).try_mul(&y), Err(Error::PrimeMismatch(5, 7)));
    }

    #[test]
    fn mul_and_inv_valuations() {
        let x = q5(50);
        assert_eq!(x.valuation(), Some(2));
        assert_eq!(x.abs(), LogNorm::from_exponent(2));
        assert_eq!(x * q5(1), x);
        let i5 = q5(5).inv().unwrap();
        assert_eq!(i5.valuation(), Some(-1));
        assert_eq!(i5.abs(), LogNorm::from_exponent(-1));
        assert_eq!(q5(0).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn abs_of_zero_is_zero_norm() {
        assert_eq!(q5(0).abs(), LogNorm::ZERO);
        assert_eq!(q5(0).abs().to_string(), "inf");
    }

    #[test]
    fn cancellation_lowers_precision() {
        // 1 + 4 = 5 keeps only the digits that were known.
        let s = q5(1) + q5(4);
        assert_eq!(s.valuation(), Some(1));
        assert_eq!(s.precision(), DEFAULT_PRECISION - 1);
        assert_eq!(q5(7) - q5(7), q5(0));
    }

    #[test]
    fn sqrt_of_minus_one_mod_125() {
        let a = PadicScalar::from_i64(5, 3, -1).unwrap();
        let r = a.hensel_sqrt().unwrap();
        assert_eq!(r.unit(), Some(57));
        // Oracle: square the residue directly.
        assert_eq!((57u64 * 57) % 125, 124);
        assert_eq!(r * r, a);
    }

    #[test]
    fn sqrt_of_one_is_one() {
        assert_eq!(q5(1).hensel_sqrt().unwrap(), q5(1));
    }

    #[test]
    fn minus_one_has_no_root_mod_7() {
        // Oracle: the squares mod 7 are {0, 1, 2, 4}.
        let squares: Vec<u64> = (0..7u64).map(|r| r * r % 7).collect();
        assert!(!squares.contains(&6));
        let a = PadicScalar::from_i64(7, 8, -1).unwrap();
        assert!(matches!(a.hensel_sqrt(), Err(Error::NoSquareRoot(_))));
    }

    #[test]
    fn sqrt_edge_cases() {
        assert!(matches!(q5(5).hensel_sqrt(), Err(Error::NoSquareRoot(_))));
        assert_eq!(q5(0).hensel_sqrt().unwrap(), q5(0));
        let r = q5(-25).hensel_sqrt().unwrap();
        assert_eq!(r.valuation(), Some(1));
        assert_eq!(r * r, q5(-25));
        let two = PadicScalar::from_i64(2, 8, 1).unwrap();
        assert!(matches!(two.hensel_sqrt(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn rational_construction() {
        let third = PadicScalar::from_rational(5, 16, 1, 3).unwrap();
        assert_eq!(third * q5(3), q5(1));
        let x = PadicScalar::from_rational(5, 16, 3, 10).unwrap();
        assert_eq!(x.valuation(), Some(-1));
    }

    #[test]
    fn field_validation() {
        assert_eq!(PadicScalar::zero(6, 4), Err(Error::InvalidPrime(6)));
        assert!(matches!(
            PadicScalar::zero(5, 0),
            Err(Error::InvalidPrecision { .. })
        ));
        assert!(matches!(
            PadicScalar::zero(5, 40),
            Err(Error::InvalidPrecision { .. })
        ));
        assert!(PadicScalar::from_parts(5, 4, 0, 10).is_err());
    }

    #[test]
    fn json_encoding() {
        let x = q5(50);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"p":5,"precision":16,"valuation":2,"unit":"2"}"#);
        let z = serde_json::to_string(&q5(0)).unwrap();
        assert_eq!(z, r#"{"p":5,"precision":16,"zero":true}"#);
        let back: PadicScalar = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<PadicScalar>(r#"{"p":5,"precision":16}"#).is_err());
        assert!(serde_json::from_str::<PadicScalar>(
            r#"{"p":5,"precision":16,"valuation":0,"unit":"5"}"#
        )
        .is_err());
    }

    #[test]
    fn lognorm_display_and_order() {
        assert_eq!(LogNorm::from_half_exponent(1).to_string(), "1/2");
        assert_eq!(LogNorm::from_half_exponent(-1).to_string(), "-1/2");
        assert_eq!(
            "-1/2".parse::<LogNorm>().unwrap(),
            LogNorm::from_half_exponent(-1)
        );
        assert_eq!("3".parse::<LogNorm>().unwrap(), LogNorm::from_exponent(3));
        assert!(LogNorm::ZERO < LogNorm::from_exponent(100));
        assert!(LogNorm::from_exponent(1) < LogNorm::ONE);
        assert_eq!(LogNorm::ZERO.mul(LogNorm::ONE), LogNorm::ZERO);
        assert_eq!(
            LogNorm::max_of([LogNorm::ZERO, LogNorm::from_exponent(2)]),
            LogNorm::from_exponent(2)
        );
        assert_eq!(
            serde_json::to_string(&LogNorm::ZERO).unwrap(),
            r#"{"exponent":"inf"}"#
        );
    }

    fn scalar() -> impl Strategy<Value = PadicScalar> {
        prop_oneof![
            1 => Just(q5(0)),
            8 => (-3i64..4, 1u64..pow(5, 16)).prop_filter_map("unit", |(v, u)| {
                PadicScalar::from_parts(5, 16, v, u).ok()
            }),
        ]
    }

    proptest! {
        #[test]
        fn strong_triangle(x in scalar(), y in scalar()) {
            let s = x + y;
            prop_assert!(s.abs() <= x.abs().max(y.abs()));
            if x.abs() != y.abs() {
                prop_assert_eq!(s.abs(), x.abs().max(y.abs()));
            }
        }

        #[test]
        fn multiplicative_norm(x in scalar(), y in scalar()) {
            prop_assert_eq!((x * y).abs(), x.abs().mul(y.abs()));
        }

        #[test]
        fn inverse_is_exact(x in scalar()) {
            prop_assume!(!x.is_zero());
            prop_assert_eq!(x * x.inv().unwrap(), q5(1));
        }

        #[test]
        fn distributive_at_working_precision(x in scalar(), y in scalar(), c in scalar()) {
            prop_assert_eq!(c * (x + y), c * x + c * y);
        }

        #[test]
        fn sqrt_of_squares(u in 1u64..pow(5, 16)) {
            prop_assume!(u % 5 != 0);
            let x = PadicScalar::from_parts(5, 16, 0, u).unwrap();
            let a = x * x;
            let r = a.hensel_sqrt().unwrap();
            prop_assert_eq!(r * r, a);
        }

        #[test]
        fn json_round_trip(x in scalar()) {
            let s = serde_json::to_string(&x).unwrap();
            let back: PadicScalar = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(serde_json::to_string(&back).unwrap(), s);
        }
    }
}
