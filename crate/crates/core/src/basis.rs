//! Product-basis strings over `{+, -}`, emitter 1 leftmost.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::SpinError;
use crate::half::HalfInt;

/// Single-qubit basis state. `Plus < Minus` gives the canonical key order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BasisString(Vec<Sign>);

impl BasisString {
    pub fn new(signs: Vec<Sign>) -> Self {
        BasisString(signs)
    }

    pub fn empty() -> Self {
        BasisString(Vec::new())
    }

    pub fn uniform(n: usize, sign: Sign) -> Self {
        BasisString(vec![sign; n])
    }

    /// Decodes a bit mask where bit `i` set means position `i` (0-based from
    /// the left) is `-`.
    pub fn from_minus_mask(n: usize, mask: u64) -> Self {
        BasisString(
            (0..n)
                .map(|i| if mask >> i & 1 == 1 { Sign::Minus } else { Sign::Plus })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    pub fn count(&self, sign: Sign) -> usize {
        self.0.iter().filter(|s| **s == sign).count()
    }

    /// Copy with `sign` appended on the right.
    pub fn pushed(&self, sign: Sign) -> Self {
        let mut v = self.0.clone();
        v.push(sign);
        BasisString(v)
    }

    /// Copy with position `i` flipped.
    pub fn flipped_at(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v[i] = v[i].flip();
        BasisString(v)
    }

    /// Global `+ <-> -` exchange.
    pub fn mirrored(&self) -> Self {
        BasisString(self.0.iter().map(|s| s.flip()).collect())
    }
}

/// `(count(+) - count(-)) / 2`.
pub fn magnetization(b: &BasisString) -> HalfInt {
    HalfInt::from_doubled(b.count(Sign::Plus) as i64 - b.count(Sign::Minus) as i64)
}

impl fmt::Display for BasisString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for BasisString {
    type Err = SpinError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '+' => Ok(Sign::Plus),
                '-' | '\u{2212}' => Ok(Sign::Minus),
                _ => Err(SpinError::Parse {
                    what: "basis string",
                    token: s.to_string(),
                }),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BasisString)
    }
}

impl Serialize for BasisString {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BasisString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
