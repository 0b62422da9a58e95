//! Configurable-precision real arithmetic.
//!
//! A thin layer over `astro_float_num::BigFloat` that carries its working
//! precision with each value and converts exactly from the crate's big
//! integers and rationals. Decimal rendering is deterministic for a fixed
//! precision.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float_num::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Signed;

const RM: RoundingMode = RoundingMode::ToEven;
const GUARD_BITS: usize = 64;

thread_local! {
    static CONSTS: RefCell<Consts> =
        RefCell::new(Consts::new().expect("failed to initialise constant cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Working precision, expressed in significant decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub const DEFAULT_DIGITS: u32 = 50;

    pub fn digits(digits: u32) -> Self {
        Precision {
            digits: digits.max(1),
        }
    }

    pub fn decimal_digits(&self) -> u32 {
        self.digits
    }

    /// Binary mantissa width used for intermediate results.
    pub fn bits(&self) -> usize {
        // log2(10) < 3.322
        let b = (self.digits as usize * 3322).div_ceil(1000) + GUARD_BITS;
        b.div_ceil(64) * 64
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::digits(Self::DEFAULT_DIGITS)
    }
}

/// A real number held at a fixed working precision.
#[derive(Clone, Debug)]
pub struct Real {
    value: BigFloat,
    prec: Precision,
}

impl Real {
    fn wrap(value: BigFloat, prec: Precision) -> Self {
        debug_assert!(!value.is_nan(), "NaN produced: {:?}", value.err());
        Real { value, prec }
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn zero(prec: Precision) -> Self {
        Real::wrap(BigFloat::new(prec.bits()), prec)
    }

    pub fn one(prec: Precision) -> Self {
        Real::from_u64(1, prec)
    }

    pub fn from_u64(v: u64, prec: Precision) -> Self {
        Real::wrap(BigFloat::from_u64(v, prec.bits()), prec)
    }

    pub fn from_i64(v: i64, prec: Precision) -> Self {
        Real::wrap(BigFloat::from_i64(v, prec.bits()), prec)
    }

    pub fn from_biguint(v: &BigUint, prec: Precision) -> Self {
        let words = v.to_u64_digits();
        if words.is_empty() {
            return Real::zero(prec);
        }
        let e = (words.len() * 64) as i32;
        let mut f = BigFloat::from_words(&words, Sign::Pos, e);
        // Rounds down to the working precision; exact when it already fits.
        f.set_precision(prec.bits().max(64), RM)
            .expect("precision change");
        Real::wrap(f, prec)
    }

    pub fn from_bigint(v: &BigInt, prec: Precision) -> Self {
        let mag = Real::from_biguint(v.magnitude(), prec);
        if v.is_negative() {
            -mag
        } else {
            mag
        }
    }

    pub fn from_ratio(r: &BigRational, prec: Precision) -> Self {
        let n = Real::from_bigint(r.numer(), prec);
        let d = Real::from_bigint(r.denom(), prec);
        &n / &d
    }

    /// Euler's number.
    pub fn e(prec: Precision) -> Self {
        Real::wrap(with_consts(|cc| cc.e(prec.bits(), RM)), prec)
    }

    pub fn exp(&self) -> Self {
        let p = self.prec.bits();
        Real::wrap(with_consts(|cc| self.value.exp(p, RM, cc)), self.prec)
    }

    pub fn ln(&self) -> Self {
        let p = self.prec.bits();
        Real::wrap(with_consts(|cc| self.value.ln(p, RM, cc)), self.prec)
    }

    pub fn powi(&self, n: usize) -> Self {
        Real::wrap(self.value.powi(n, self.prec.bits(), RM), self.prec)
    }

    /// `self^(1/n)` for positive `self`.
    pub fn root(&self, n: u64) -> Self {
        let n = Real::from_u64(n, self.prec);
        (&self.ln() / &n).exp()
    }

    pub fn recip(&self) -> Self {
        Real::wrap(self.value.reciprocal(self.prec.bits(), RM), self.prec)
    }

    pub fn abs(&self) -> Self {
        Real::wrap(self.value.abs(), self.prec)
    }

    pub fn is_positive(&self) -> bool {
        self.value.is_positive() && !self.value.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !self.value.is_nan() && !self.value.is_inf()
    }

    /// Nearest `f64`, for diagnostics and loose comparisons.
    pub fn to_f64(&self) -> f64 {
        self.to_decimal_string(20).parse().unwrap_or(f64::NAN)
    }

    /// Scientific notation with exactly `digits` significant digits,
    /// e.g. `2.71828e0`. Rounds half away from zero on the decimal string.
    pub fn to_decimal_string(&self, digits: u32) -> String {
        if self.value.is_zero() {
            return "0".to_string();
        }
        if self.value.is_nan() {
            return "NaN".to_string();
        }
        if self.value.is_inf() {
            return if self.value.is_positive() { "inf" } else { "-inf" }.to_string();
        }
        let raw = with_consts(|cc| self.value.format(Radix::Dec, RM, cc))
            .expect("decimal formatting");
        round_scientific(&raw, digits.max(1) as usize)
    }
}

fn round_scientific(raw: &str, digits: usize) -> String {
    let (neg, body) = match raw.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, raw),
    };
    let (mantissa, exp) = body.split_once('e').unwrap_or((body, "0"));
    let mut exp: i64 = exp.trim_start_matches('+').parse().expect("exponent");
    let mut ds: Vec<u8> = mantissa
        .bytes()
        .filter(u8::is_ascii_digit)
        .map(|b| b - b'0')
        .collect();
    // Leading zeros can only appear for a zero mantissa, excluded by caller.
    while ds.first() == Some(&0) && ds.len() > 1 {
        ds.remove(0);
        exp -= 1;
    }
    if ds.len() > digits {
        let round_up = ds[digits] >= 5;
        ds.truncate(digits);
        if round_up {
            let mut i = digits;
            loop {
                if i == 0 {
                    ds.insert(0, 1);
                    ds.truncate(digits);
                    exp += 1;
                    break;
                }
                i -= 1;
                if ds[i] == 9 {
                    ds[i] = 0;
                } else {
                    ds[i] += 1;
                    break;
                }
            }
        }
    }
    ds.resize(digits, 0);
    let mut out = String::with_capacity(digits + 8);
    if neg {
        out.push('-');
    }
    out.push((b'0' + ds[0]) as char);
    if digits > 1 {
        out.push('.');
        out.extend(ds[1..].iter().map(|d| (b'0' + d) as char));
    }
    out.push('e');
    out.push_str(&exp.to_string());
    out
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string(self.prec.decimal_digits()))
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.cmp(&other.value).map(|c| c.cmp(&0))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                let prec = self.prec.max(rhs.prec);
                Real::wrap(self.value.$method(&rhs.value, prec.bits(), RM), prec)
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(self.value.neg(), self.prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e_to_fifty_digits() {
        let e = Real::e(Precision::default());
        assert_eq!(
            e.to_decimal_string(50),
            "2.7182818284590452353602874713526624977572470937000e0"
        );
    }

    #[test]
    fn integer_conversion_is_exact() {
        let p = Precision::digits(60);
        let big: BigUint = "123456789012345678901234567890123".parse().unwrap();
        let r = Real::from_biguint(&big, p);
        assert_eq!(
            r.to_decimal_string(33),
            "1.23456789012345678901234567890123e32"
        );
        assert_eq!(Real::from_u64(5, p).to_decimal_string(3), "5.00e0");
        assert_eq!(
            Real::from_bigint(&BigInt::from(-12), p).to_decimal_string(2),
            "-1.2e1"
        );
    }

    #[test]
    fn rational_conversion() {
        let p = Precision::default();
        let r = BigRational::new(1.into(), 3.into());
        assert_eq!(Real::from_ratio(&r, p).to_decimal_string(5), "3.3333e-1");
    }

    #[test]
    fn rounding_carries() {
        assert_eq!(round_scientific("9.9996e+2", 4), "1.000e3");
        assert_eq!(round_scientific("1.23449e-3", 4), "1.234e-3");
        assert_eq!(round_scientific("-1.5e+0", 1), "-2e0");
    }

    #[test]
    fn exp_ln_and_roots() {
        let p = Precision::default();
        let two = Real::from_u64(2, p);
        let back = two.ln().exp();
        assert!((&back - &two).abs().to_f64() < 1e-40);
        let r = Real::from_u64(1024, p).root(10);
        assert!((&r - &two).abs().to_f64() < 1e-40);
    }
}
