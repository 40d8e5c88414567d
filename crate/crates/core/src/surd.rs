//! Numbers of the form `r + s*sqrt(5)` with rational `r`, `s`.
//!
//! Every threshold in the oracle is either rational or lives in `Q(sqrt 5)`
//! (the golden ratio and its powers), so pass/fail decisions are made by
//! exact sign tests here and never touch floating point.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rat::Rat;
use crate::{Error, Result};

/// Digits used for every decimal convenience field in reports.
pub const REPORT_DIGITS: usize = 50;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Surd {
    rational: Rat,
    radical: Rat,
}

impl Surd {
    pub fn new(rational: Rat, radical: Rat) -> Self {
        Surd { rational, radical }
    }

    pub fn rational_part(&self) -> &Rat {
        &self.rational
    }

    pub fn radical_part(&self) -> &Rat {
        &self.radical
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        self.radical.is_zero().then_some(&self.rational)
    }

    /// `phi = (1 + sqrt5) / 2`.
    pub fn phi() -> Self {
        Surd::new(Rat::frac(1, 2), Rat::frac(1, 2))
    }

    /// `phi^2 = (3 + sqrt5) / 2`.
    pub fn phi_squared() -> Self {
        Surd::new(Rat::frac(3, 2), Rat::frac(1, 2))
    }

    /// `2 / (3 + sqrt5) = phi^-2 = (3 - sqrt5) / 2 = 0.381966...`.
    pub fn inv_phi_squared() -> Self {
        Surd::new(Rat::frac(3, 2), Rat::frac(-1, 2))
    }

    pub fn signum(&self) -> Ordering {
        let a = self.rational.cmp(&Rat::zero());
        let b = self.radical.cmp(&Rat::zero());
        match (a, b) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            // opposite signs: compare r^2 against 5 s^2
            (x, _) => {
                let r2 = &self.rational * &self.rational;
                let s2 = &self.radical * &self.radical * Rat::from_int(5);
                match r2.cmp(&s2) {
                    Ordering::Greater => x,
                    Ordering::Less => x.reverse(),
                    // r^2 = 5 s^2 has no nonzero rational solution
                    Ordering::Equal => unreachable!("sqrt5 is irrational"),
                }
            }
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.signum() != Ordering::Less
    }

    /// Multiplicative inverse via the conjugate.
    pub fn recip(&self) -> Result<Surd> {
        let norm = &self.rational * &self.rational - &self.radical * &self.radical * Rat::from_int(5);
        if norm.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Surd::new(&self.rational / &norm, -(&self.radical / &norm)))
    }

    /// Decimal rendering with `digits` fractional digits, round-half-even.
    ///
    /// Irrational values cannot sit exactly on a rounding boundary, so
    /// truncating `sqrt5` with guard digits gives the correctly rounded
    /// result unless the value is within `10^-(digits+guard)` of one.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.radical.is_zero() {
            return self.rational.to_decimal(digits);
        }
        const GUARD: usize = 30;
        let prec = digits + GUARD;
        let scale = BigInt::from(10u32).pow(prec as u32);
        // floor(sqrt5 * 10^prec)
        let root5 = (BigInt::from(5u32) * &scale * &scale).sqrt();
        let approx = &self.rational * Rat::from_int(scale.clone()) + &self.radical * Rat::from_int(root5);
        let approx = approx / Rat::from_int(scale);
        approx.to_decimal(digits)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_decimal(20).parse().unwrap_or(f64::NAN)
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl From<Rat> for Surd {
    fn from(r: Rat) -> Self {
        Surd::new(r, Rat::zero())
    }
}

impl Add<&Surd> for &Surd {
    type Output = Surd;
    fn add(self, rhs: &Surd) -> Surd {
        Surd::new(&self.rational + &rhs.rational, &self.radical + &rhs.radical)
    }
}

impl Sub<&Surd> for &Surd {
    type Output = Surd;
    fn sub(self, rhs: &Surd) -> Surd {
        Surd::new(&self.rational - &rhs.rational, &self.radical - &rhs.radical)
    }
}

impl Mul<&Surd> for &Surd {
    type Output = Surd;
    fn mul(self, rhs: &Surd) -> Surd {
        let five = Rat::from_int(5);
        Surd::new(
            &self.rational * &rhs.rational + &self.radical * &rhs.radical * five,
            &self.rational * &rhs.radical + &self.radical * &rhs.rational,
        )
    }
}

impl Mul<&Rat> for &Surd {
    type Output = Surd;
    fn mul(self, rhs: &Rat) -> Surd {
        Surd::new(&self.rational * rhs, &self.radical * rhs)
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd::new(-&self.rational, -&self.radical)
    }
}

impl fmt::Display for Surd {
    /// `p/q` when rational, otherwise `p/q+r/s*sqrt5` (or `-r/s*sqrt5`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radical.is_zero() {
            return write!(f, "{}", self.rational);
        }
        let sign = if self.radical.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}*sqrt5", self.rational, sign, self.radical.abs())
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Surd {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let Some(body) = s.strip_suffix("*sqrt5") else {
            return Ok(Surd::from(s.parse::<Rat>()?));
        };
        // split at the sign that separates the two parts (not a leading sign)
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last()
            .ok_or_else(|| Error::Parse(format!("not a surd: {s:?}")))?;
        let (rational, radical) = body.split_at(split);
        let radical = radical.strip_prefix('+').unwrap_or(radical);
        Ok(Surd::new(rational.parse()?, radical.parse()?))
    }
}

impl Serialize for Surd {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Surd {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn theorem_constant() {
        let c = Surd::inv_phi_squared();
        assert_eq!(c.to_decimal(10), "0.3819660113");
        assert_eq!(c.to_decimal(REPORT_DIGITS), "0.38196601125010515179541316563436188227969082019424");
        // 2/(3+sqrt5) computed through the reciprocal agrees
        let three_plus = Surd::new(r("3"), r("1"));
        let via_recip = &three_plus.recip().unwrap() * &r("2");
        assert_eq!(via_recip, c);
        assert_eq!(&Surd::phi() * &Surd::phi(), Surd::phi_squared());
        assert_eq!(&Surd::phi_squared() * &c, Surd::from(Rat::one()));
    }

    #[test]
    fn comparisons_against_constant() {
        let c = Surd::inv_phi_squared();
        assert!(Surd::from(r("5/13")) > c);
        assert!(Surd::from(r("3/8")) < c);
        assert!(Surd::from(r("8/21")) < c);
        assert!(Surd::from(r("37/100")) < c);
        assert!(Surd::from(r("1/2")) > c);
    }

    #[test]
    fn display_parse() {
        let c = Surd::inv_phi_squared();
        assert_eq!(c.to_string(), "3/2-1/2*sqrt5");
        assert_eq!("3/2-1/2*sqrt5".parse::<Surd>().unwrap(), c);
        assert_eq!("-3/2+1/2*sqrt5".parse::<Surd>().unwrap(), -&c);
        assert_eq!("5/13".parse::<Surd>().unwrap(), Surd::from(r("5/13")));
        assert!("1/2+*sqrt5".parse::<Surd>().is_err());
    }

    proptest! {
        #[test]
        fn sign_matches_float(p in -1000i64..1000, q in 1i64..100, s in -1000i64..1000, t in 1i64..100) {
            let x = Surd::new(Rat::frac(p, q), Rat::frac(s, t));
            let f = p as f64 / q as f64 + (s as f64 / t as f64) * 5f64.sqrt();
            if f.abs() > 1e-9 {
                prop_assert_eq!(x.signum(), f.partial_cmp(&0.0).unwrap());
            }
            prop_assert_eq!(x.to_string().parse::<Surd>().unwrap(), x);
        }
    }
}
