//! Exact products of rational powers, `prod_i base_i ^ exp_i` with positive rational bases
//! and rational exponents.
//!
//! Values such as `n^v * (c * n^(-a/b))^e` are represented symbolically. Comparison first
//! evaluates the difference of logarithms in floating point and only falls back to exact
//! integer arithmetic (raising both sides to the lcm of the exponent denominators) when the
//! float estimate is too close to call.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A positive real of the form `prod base^exp`.
#[derive(Clone, Default)]
pub struct PowerProduct {
    factors: BTreeMap<BigRational, Rational64>,
}

fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift;
    top.to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive rational.
pub fn ln_rational(x: &BigRational) -> f64 {
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}

impl PowerProduct {
    pub fn one() -> Self {
        PowerProduct::default()
    }

    /// `base ^ exp`; the base must be positive.
    pub fn power(base: BigRational, exp: Rational64) -> Result<Self> {
        if !base.is_positive() {
            return Err(Error::InvalidParameter(format!("base {base} must be positive")));
        }
        let mut out = PowerProduct::one();
        out.push(base, exp);
        Ok(out)
    }

    pub fn rational(value: BigRational) -> Result<Self> {
        Self::power(value, Rational64::one())
    }

    pub fn integer(value: u64) -> Result<Self> {
        Self::rational(BigRational::from_integer(BigInt::from(value)))
    }

    fn push(&mut self, base: BigRational, exp: Rational64) {
        if base.is_one() || exp.is_zero() {
            return;
        }
        let slot = self.factors.entry(base).or_insert_with(Rational64::zero);
        *slot += exp;
        if slot.is_zero() {
            self.factors.retain(|_, e| !e.is_zero());
        }
    }

    pub fn mul(&self, other: &PowerProduct) -> PowerProduct {
        let mut out = self.clone();
        for (b, e) in &other.factors {
            out.push(b.clone(), *e);
        }
        out
    }

    /// Raises the whole product to a rational power.
    pub fn pow(&self, exp: Rational64) -> PowerProduct {
        let mut out = PowerProduct::one();
        for (b, e) in &self.factors {
            out.push(b.clone(), *e * exp);
        }
        out
    }

    pub fn powi(&self, exp: i64) -> PowerProduct {
        self.pow(Rational64::from_integer(exp))
    }

    pub fn recip(&self) -> PowerProduct {
        self.powi(-1)
    }

    pub fn div(&self, other: &PowerProduct) -> PowerProduct {
        self.mul(&other.recip())
    }

    pub fn ln(&self) -> f64 {
        self.factors
            .iter()
            .map(|(b, e)| ln_rational(b) * (*e.numer() as f64 / *e.denom() as f64))
            .sum()
    }

    pub fn to_f64(&self) -> f64 {
        self.ln().exp()
    }

    /// `Some(value)` when every exponent is an integer.
    pub fn to_rational(&self) -> Option<BigRational> {
        let mut acc = BigRational::one();
        for (b, e) in &self.factors {
            if !e.is_integer() {
                return None;
            }
            acc *= b.pow(i32::try_from(e.to_integer()).ok()?);
        }
        Some(acc)
    }

    /// Compares the represented real numbers exactly.
    pub fn cmp_value(&self, other: &PowerProduct) -> Ordering {
        let ratio = self.div(other);
        if ratio.factors.is_empty() {
            return Ordering::Equal;
        }
        let mut est = 0.0;
        let mut scale: f64 = 1.0;
        for (b, e) in &ratio.factors {
            let term = ln_rational(b) * (*e.numer() as f64 / *e.denom() as f64);
            est += term;
            scale += term.abs();
        }
        if est.abs() > 1e-9 * scale {
            return if est > 0.0 { Ordering::Greater } else { Ordering::Less };
        }
        ratio.cmp_one_exact()
    }

    fn cmp_one_exact(&self) -> Ordering {
        let lcm = self
            .factors
            .values()
            .fold(1i64, |acc, e| acc.lcm(e.denom()));
        let mut above = BigRational::one();
        let mut below = BigRational::one();
        for (b, e) in &self.factors {
            let t = (*e * lcm).to_integer();
            let t32 = i32::try_from(t.abs()).expect("exponent too large for exact comparison");
            if t > 0 {
                above *= b.pow(t32);
            } else {
                below *= b.pow(t32);
            }
        }
        above.cmp(&below)
    }

    pub fn min_of(a: PowerProduct, b: PowerProduct) -> PowerProduct {
        if b.cmp_value(&a) == Ordering::Less {
            b
        } else {
            a
        }
    }

    pub fn factors(&self) -> impl Iterator<Item = (&BigRational, &Rational64)> {
        self.factors.iter()
    }
}

impl PartialEq for PowerProduct {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl Eq for PowerProduct {}

impl PartialOrd for PowerProduct {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PowerProduct {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_value(other)
    }
}

impl fmt::Debug for PowerProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PowerProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(b, e)| {
                if e.is_one() {
                    format!("{b}")
                } else {
                    format!("({b})^({e})")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// Parses `"a"` or `"a/b"` into a rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::InvalidParameter(format!("not a rational number: {text:?}"));
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (text, "1"),
    };
    if let (Ok(a), Ok(b)) = (num.parse::<BigInt>(), den.parse::<BigInt>()) {
        if b.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(a, b));
    }
    // decimal literal such as 0.25
    if den == "1" {
        if let Some((int, frac)) = num.split_once('.') {
            let digits = format!("{int}{frac}");
            let a: BigInt = digits.parse().map_err(|_| bad())?;
            let b = num_traits::pow(BigInt::from(10), frac.len());
            return Ok(BigRational::new(a, b));
        }
    }
    Err(bad())
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or_else(|| ln_rational(x).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn r(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    #[test]
    fn equal_values_with_different_bases() {
        // 4^(1/2) == 2
        let a = PowerProduct::power(q(4, 1), r(1, 2)).unwrap();
        let b = PowerProduct::integer(2).unwrap();
        assert_eq!(a.cmp_value(&b), Ordering::Equal);
        // 8^(1/3) * 3 == 6
        let c = a.mul(&PowerProduct::integer(3).unwrap());
        assert_eq!(c, PowerProduct::integer(6).unwrap());
        let d = PowerProduct::power(q(8, 1), r(1, 3)).unwrap().mul(&PowerProduct::integer(3).unwrap());
        assert_eq!(c, d);
    }

    #[test]
    fn close_values_are_ordered_exactly() {
        // 2^(1/2) vs 1414213562373095/10^15
        let root = PowerProduct::power(q(2, 1), r(1, 2)).unwrap();
        let below = PowerProduct::rational(q(1_414_213_562_373_095, 1_000_000_000_000_000)).unwrap();
        let above = PowerProduct::rational(q(1_414_213_562_373_096, 1_000_000_000_000_000)).unwrap();
        assert_eq!(root.cmp_value(&below), Ordering::Greater);
        assert_eq!(root.cmp_value(&above), Ordering::Less);
    }

    #[test]
    fn powers_and_reciprocals() {
        let x = PowerProduct::power(q(3, 2), r(2, 3)).unwrap();
        assert_eq!(x.pow(r(3, 2)).to_rational(), Some(q(3, 2)));
        assert_eq!(x.mul(&x.recip()), PowerProduct::one());
        assert!((x.to_f64() - 1.5f64.powf(2.0 / 3.0)).abs() < 1e-12);
        assert!(PowerProduct::power(q(0, 1), r(1, 1)).is_err());
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("3/4").unwrap(), q(3, 4));
        assert_eq!(parse_rational("0.25").unwrap(), q(1, 4));
        assert_eq!(parse_rational("7").unwrap(), q(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn ln_of_huge_integers() {
        let big = num_traits::pow(BigInt::from(10), 400);
        let ln = ln_bigint(&big);
        assert!((ln - 400.0 * std::f64::consts::LN_10).abs() < 1e-9);
    }
}
