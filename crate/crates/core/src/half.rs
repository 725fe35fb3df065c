//! Half-integer quantum numbers stored as doubled integers.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::SpinError;

/// A value in `Z/2`, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);

    pub const fn from_doubled(doubled: i64) -> Self {
        HalfInt(doubled)
    }

    pub const fn from_int(v: i64) -> Self {
        HalfInt(2 * v)
    }

    pub const fn doubled(self) -> i64 {
        self.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }

    pub fn to_ratio(self) -> Ratio<i64> {
        Ratio::new(self.0, 2)
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// `x(x+1)` as an exact rational.
    pub fn casimir(self) -> Ratio<i64> {
        // (d/2)(d/2 + 1) = d(d+2)/4
        Ratio::new(self.0 * (self.0 + 2), 4)
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for HalfInt {
    type Err = SpinError;

    /// Accepts `"3/2"`, `"-1/2"`, `"1"` and the Unicode minus sign.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || SpinError::Parse {
            what: "half-integer",
            token: s.to_string(),
        };
        let t = s.trim().replace('\u{2212}', "-");
        match t.split_once('/') {
            Some((num, den)) => {
                let num: i64 = num.trim().parse().map_err(|_| err())?;
                let den: i64 = den.trim().parse().map_err(|_| err())?;
                match den {
                    1 => Ok(HalfInt::from_int(num)),
                    2 => Ok(HalfInt(num)),
                    _ => Err(err()),
                }
            }
            None => t.parse::<i64>().map(HalfInt::from_int).map_err(|_| err()),
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for HalfInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse() {
        assert_eq!(HalfInt::from_doubled(3).to_string(), "3/2");
        assert_eq!(HalfInt::from_doubled(-1).to_string(), "-1/2");
        assert_eq!(HalfInt::from_doubled(-2).to_string(), "-1");
        assert_eq!("1/2".parse::<HalfInt>().unwrap(), HalfInt::HALF);
        assert_eq!("\u{2212}1".parse::<HalfInt>().unwrap(), HalfInt::from_int(-1));
        assert_eq!("4/2".parse::<HalfInt>().unwrap(), HalfInt::from_int(2));
        assert!("1/3".parse::<HalfInt>().is_err());
        assert!("x".parse::<HalfInt>().is_err());
    }

    #[test]
    fn casimir_values() {
        assert_eq!(HalfInt::HALF.casimir(), Ratio::new(3, 4));
        assert_eq!(HalfInt::ONE.casimir(), Ratio::from_integer(2));
        assert_eq!(HalfInt::ZERO.casimir(), Ratio::from_integer(0));
    }
}
