//! Exact real numbers of the form `sum_i q_i * sqrt(r_i)`.
//!
//! `q_i` are rationals and `r_i` distinct squarefree positive integers. Square
//! roots of distinct squarefree integers are linearly independent over the
//! rationals, so the canonical map representation makes structural equality
//! coincide with numeric equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Result, SpinError};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RadicalAmplitude {
    terms: BTreeMap<u64, BigRational>,
}

/// Splits `n > 0` as `t^2 * s` with `s` squarefree.
pub fn squarefree_split(mut n: u64) -> (u64, u64) {
    assert!(n > 0, "squarefree_split of zero");
    let mut t = 1u64;
    let mut s = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        t *= p.pow(e / 2);
        if e % 2 == 1 {
            s *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (t, s * n)
}

pub fn is_squarefree(n: u64) -> bool {
    n > 0 && squarefree_split(n).0 == 1
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl RadicalAmplitude {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self::monomial(q, 1)
    }

    /// `coefficient * sqrt(radicand)` for any positive radicand.
    pub fn monomial(coefficient: BigRational, radicand: u64) -> Self {
        Self::from_terms([(radicand, coefficient)])
    }

    /// Canonicalizes arbitrary `(radicand, coefficient)` pairs.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u64, BigRational)>,
    {
        let mut out = RadicalAmplitude::zero();
        for (r, q) in terms {
            if q.is_zero() {
                continue;
            }
            let (t, s) = squarefree_split(r);
            out.add_term(s, q * BigRational::from_integer(BigInt::from(t)));
        }
        out
    }

    /// `sqrt(num / den)` for `num >= 0`, `den > 0`, normalized as
    /// `(1/den) * sqrt(num * den)`.
    pub fn sqrt_ratio(num: i64, den: i64) -> Self {
        assert!(num >= 0 && den > 0, "sqrt of negative or ill-formed ratio");
        if num == 0 {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (num, den) = (num / g, den / g);
        Self::monomial(ratio(1, den), (num * den) as u64)
    }

    fn add_term(&mut self, radicand: u64, q: BigRational) {
        if q.is_zero() {
            return;
        }
        let entry = self.terms.entry(radicand).or_insert_with(BigRational::zero);
        *entry += q;
        if entry.is_zero() {
            self.terms.remove(&radicand);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<u64, BigRational> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `(coefficient, radicand)` if exactly one term is present.
    pub fn as_monomial(&self) -> Option<(&BigRational, u64)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(r, q)| (q, *r))
        } else {
            None
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&1).cloned(),
            _ => None,
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        RadicalAmplitude {
            terms: self.terms.iter().map(|(r, c)| (*r, c * q)).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&BigRational::from_integer(BigInt::from(k)))
    }

    /// Re-runs canonicalization on the stored terms.
    pub fn renormalized(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(r, q)| (*r, q.clone())))
    }

    /// Whether the representation satisfies every canonical-form invariant.
    pub fn is_canonical(&self) -> bool {
        self.terms.iter().all(|(r, q)| is_squarefree(*r) && !q.is_zero())
    }

    /// Exact sign for zero and single-term values.
    pub fn monomial_signum(&self) -> Option<i32> {
        if self.is_zero() {
            return Some(0);
        }
        self.as_monomial()
            .map(|(q, _)| if q.is_positive() { 1 } else { -1 })
    }

    /// Division by a single-term nonzero divisor:
    /// `x / (q sqrt(r)) = x * sqrt(r) / (q r)`.
    pub fn div_monomial(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = divisor.as_monomial().ok_or(SpinError::NonMonomialDivisor)?;
        let inv = BigRational::one() / (q * BigRational::from_integer(BigInt::from(r)));
        Ok((self * &Self::monomial(inv, r)).renormalized())
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one().div_monomial(self)
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(r, q)| q.to_f64().unwrap_or(f64::NAN) * (*r as f64).sqrt())
            .sum()
    }
}

impl Add for &RadicalAmplitude {
    type Output = RadicalAmplitude;
    fn add(self, rhs: &RadicalAmplitude) -> RadicalAmplitude {
        let mut out = self.clone();
        for (r, q) in &rhs.terms {
            out.add_term(*r, q.clone());
        }
        out
    }
}

impl Add for RadicalAmplitude {
    type Output = RadicalAmplitude;
    fn add(self, rhs: RadicalAmplitude) -> RadicalAmplitude {
        &self + &rhs
    }
}

impl Neg for &RadicalAmplitude {
    type Output = RadicalAmplitude;
    fn neg(self) -> RadicalAmplitude {
        RadicalAmplitude {
            terms: self.terms.iter().map(|(r, q)| (*r, -q)).collect(),
        }
    }
}

impl Neg for RadicalAmplitude {
    type Output = RadicalAmplitude;
    fn neg(self) -> RadicalAmplitude {
        -&self
    }
}

impl Sub for &RadicalAmplitude {
    type Output = RadicalAmplitude;
    fn sub(self, rhs: &RadicalAmplitude) -> RadicalAmplitude {
        self + &(-rhs)
    }
}

impl Sub for RadicalAmplitude {
    type Output = RadicalAmplitude;
    fn sub(self, rhs: RadicalAmplitude) -> RadicalAmplitude {
        &self - &rhs
    }
}

impl Mul for &RadicalAmplitude {
    type Output = RadicalAmplitude;
    fn mul(self, rhs: &RadicalAmplitude) -> RadicalAmplitude {
        let mut out = RadicalAmplitude::zero();
        for (r1, q1) in &self.terms {
            for (r2, q2) in &rhs.terms {
                // both squarefree: r1 r2 = g^2 (r1/g)(r2/g), the cofactor is squarefree
                let g = r1.gcd(r2);
                let s = (r1 / g)
                    .checked_mul(r2 / g)
                    .expect("radicand overflow");
                let c = q1 * q2 * BigRational::from_integer(BigInt::from(g));
                out.add_term(s, c);
            }
        }
        out
    }
}

impl Mul for RadicalAmplitude {
    type Output = RadicalAmplitude;
    fn mul(self, rhs: RadicalAmplitude) -> RadicalAmplitude {
        &self * &rhs
    }
}

pub fn radical_add(a: &RadicalAmplitude, b: &RadicalAmplitude) -> RadicalAmplitude {
    a + b
}

pub fn radical_mul(a: &RadicalAmplitude, b: &RadicalAmplitude) -> RadicalAmplitude {
    a * b
}

impl fmt::Display for RadicalAmplitude {
    /// Human-readable form such as `1/2*sqrt(2)` or `2 - sqrt(3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (r, q)) in self.terms.iter().enumerate() {
            let mag = q.abs();
            if i == 0 {
                if q.is_negative() {
                    write!(f, "-")?;
                }
            } else if q.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match (*r, mag.is_one()) {
                (1, _) => write!(f, "{mag}")?,
                (r, true) => write!(f, "sqrt({r})")?,
                (r, false) => write!(f, "{mag}*sqrt({r})")?,
            }
        }
        Ok(())
    }
}

impl Serialize for RadicalAmplitude {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.terms.len()))?;
        for (r, q) in &self.terms {
            map.serialize_entry(&r.to_string(), &q.to_string())?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for RadicalAmplitude {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = RadicalAmplitude;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "a map from radicand to rational coefficient")
            }
            fn visit_map<A: MapAccess<'de>>(
                self,
                mut access: A,
            ) -> std::result::Result<RadicalAmplitude, A::Error> {
                let mut terms = Vec::new();
                while let Some((k, v)) = access.next_entry::<String, String>()? {
                    let r: u64 = k
                        .parse()
                        .ok()
                        .filter(|r| *r > 0)
                        .ok_or_else(|| serde::de::Error::custom(format!("bad radicand {k:?}")))?;
                    let q: BigRational = v
                        .parse()
                        .map_err(|_| serde::de::Error::custom(format!("bad rational {v:?}")))?;
                    terms.push((r, q));
                }
                Ok(RadicalAmplitude::from_terms(terms))
            }
        }
        d.deserialize_map(V)
    }
}
