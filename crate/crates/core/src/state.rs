//! Sparse state vectors over the product basis with exact amplitudes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::basis::{magnetization, BasisString, Sign};
use crate::error::{Result, SpinError};
use crate::half::HalfInt;
use crate::radical::RadicalAmplitude;

/// `n`-qubit state. Zero amplitudes are never stored; keys iterate in the
/// canonical `+ < -` lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "StateRepr", into = "StateRepr")]
pub struct SparseState {
    n: usize,
    amplitudes: BTreeMap<BasisString, RadicalAmplitude>,
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    n: usize,
    amplitudes: BTreeMap<BasisString, RadicalAmplitude>,
}

impl TryFrom<StateRepr> for SparseState {
    type Error = SpinError;
    fn try_from(r: StateRepr) -> Result<Self> {
        SparseState::from_amplitudes(r.n, r.amplitudes)
    }
}

impl From<SparseState> for StateRepr {
    fn from(s: SparseState) -> Self {
        StateRepr {
            n: s.n,
            amplitudes: s.amplitudes,
        }
    }
}

impl SparseState {
    pub fn zero(n: usize) -> Self {
        SparseState {
            n,
            amplitudes: BTreeMap::new(),
        }
    }

    pub fn basis(b: BasisString) -> Self {
        let mut s = Self::zero(b.len());
        s.amplitudes.insert(b, RadicalAmplitude::one());
        s
    }

    pub fn from_amplitudes<I>(n: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BasisString, RadicalAmplitude)>,
    {
        let mut s = Self::zero(n);
        for (k, v) in entries {
            s.add_at(k, &v)?;
        }
        Ok(s)
    }

    /// Builds an integer-amplitude state; panics on length mismatch.
    pub fn from_integers<'a, I>(n: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (&'a str, i64)>,
    {
        Self::from_amplitudes(
            n,
            entries.into_iter().map(|(k, v)| {
                (
                    k.parse().expect("valid basis string"),
                    RadicalAmplitude::from_integer(v),
                )
            }),
        )
        .expect("consistent lengths")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_zero(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn get(&self, b: &BasisString) -> Option<&RadicalAmplitude> {
        self.amplitudes.get(b)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisString, &RadicalAmplitude)> {
        self.amplitudes.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &BasisString> {
        self.amplitudes.keys()
    }

    /// Adds `v` to the amplitude of `b`, dropping the entry if it cancels.
    pub fn add_at(&mut self, b: BasisString, v: &RadicalAmplitude) -> Result<()> {
        if b.len() != self.n {
            return Err(SpinError::LengthMismatch {
                expected: self.n,
                found: b.len(),
            });
        }
        if v.is_zero() {
            return Ok(());
        }
        let updated = match self.amplitudes.get(&b) {
            Some(old) => old + v,
            None => v.clone(),
        };
        if updated.is_zero() {
            self.amplitudes.remove(&b);
        } else {
            self.amplitudes.insert(b, updated);
        }
        Ok(())
    }

    pub fn add(&self, other: &SparseState) -> Result<SparseState> {
        if self.n != other.n {
            return Err(SpinError::DimensionMismatch(self.n, other.n));
        }
        let mut out = self.clone();
        for (k, v) in &other.amplitudes {
            out.add_at(k.clone(), v)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &RadicalAmplitude) -> SparseState {
        let mut out = Self::zero(self.n);
        if c.is_zero() {
            return out;
        }
        for (k, v) in &self.amplitudes {
            let p = v * c;
            if !p.is_zero() {
                out.amplitudes.insert(k.clone(), p);
            }
        }
        out
    }

    /// `self ⊗ |sign>`, the new qubit appended on the right.
    pub fn tensor_sign(&self, sign: Sign) -> SparseState {
        SparseState {
            n: self.n + 1,
            amplitudes: self
                .amplitudes
                .iter()
                .map(|(k, v)| (k.pushed(sign), v.clone()))
                .collect(),
        }
    }

    /// Global `+ <-> -` exchange of every key.
    pub fn mirrored(&self) -> SparseState {
        SparseState {
            n: self.n,
            amplitudes: self
                .amplitudes
                .iter()
                .map(|(k, v)| (k.mirrored(), v.clone()))
                .collect(),
        }
    }

    pub fn norm_squared(&self) -> RadicalAmplitude {
        inner_product(self, self).expect("same dimension")
    }

    /// The magnetization shared by every key, if any.
    pub fn sector(&self) -> Option<HalfInt> {
        let mut ms = self.amplitudes.keys().map(magnetization);
        let first = ms.next()?;
        ms.all(|m| m == first).then_some(first)
    }

    /// True when every amplitude is an integer.
    pub fn is_integral(&self) -> bool {
        self.amplitudes.values().all(|v| v.as_integer().is_some())
    }
}

/// `<a|b>` for real amplitudes.
pub fn inner_product(a: &SparseState, b: &SparseState) -> Result<RadicalAmplitude> {
    if a.n != b.n {
        return Err(SpinError::DimensionMismatch(a.n, b.n));
    }
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut acc = RadicalAmplitude::zero();
    for (k, v) in &small.amplitudes {
        if let Some(w) = large.amplitudes.get(k) {
            acc = &acc + &(v * w);
        }
    }
    Ok(acc)
}
