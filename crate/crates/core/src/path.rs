//! Coupling histories `S1, ..., SN`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Result, SpinError};
use crate::half::HalfInt;

/// Whether a coupling step raises or lowers the intermediate total spin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step {
    Ascent,
    Descent,
}

/// A validated coupling history. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CouplingPath {
    spins: Vec<HalfInt>,
}

/// Checks the coupling rules and wraps the sequence.
pub fn validate_path(spins: &[HalfInt]) -> Result<CouplingPath> {
    let first = *spins.first().ok_or(SpinError::EmptyPath)?;
    if first != HalfInt::HALF {
        return Err(SpinError::InvalidStart(first));
    }
    for (i, w) in spins.windows(2).enumerate() {
        let index = i + 2;
        if w[1] < HalfInt::ZERO {
            return Err(SpinError::NegativeSpin { index, spin: w[1] });
        }
        if (w[1] - w[0]).abs() != HalfInt::HALF {
            return Err(SpinError::InvalidStep {
                index,
                from: w[0],
                to: w[1],
            });
        }
    }
    Ok(CouplingPath {
        spins: spins.to_vec(),
    })
}

/// All valid paths of length `n`, ordered lexicographically by doubled spins.
pub fn enumerate_paths(n: usize) -> Vec<CouplingPath> {
    if n == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut current = vec![HalfInt::HALF];
    extend_paths(n, &mut current, &mut out);
    out
}

fn extend_paths(n: usize, current: &mut Vec<HalfInt>, out: &mut Vec<CouplingPath>) {
    if current.len() == n {
        out.push(CouplingPath {
            spins: current.clone(),
        });
        return;
    }
    let last = *current.last().expect("nonempty");
    // lower branch first keeps the output sorted
    for next in [last - HalfInt::HALF, last + HalfInt::HALF] {
        if next >= HalfInt::ZERO {
            current.push(next);
            extend_paths(n, current, out);
            current.pop();
        }
    }
}

impl CouplingPath {
    /// The stretched path `1/2, 1, ..., n/2`.
    pub fn stretched(n: usize) -> Self {
        CouplingPath {
            spins: (1..=n as i64).map(HalfInt::from_doubled).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    pub fn spins(&self) -> &[HalfInt] {
        &self.spins
    }

    /// `S_k` with 1-based `k`.
    pub fn spin(&self, k: usize) -> HalfInt {
        self.spins[k - 1]
    }

    pub fn total_spin(&self) -> HalfInt {
        *self.spins.last().expect("paths are nonempty")
    }

    /// Step into emitter `k` (1-based, `k >= 2`).
    pub fn step(&self, k: usize) -> Step {
        if self.spin(k) > self.spin(k - 1) {
            Step::Ascent
        } else {
            Step::Descent
        }
    }

    /// The path truncated to its first `len` entries.
    pub fn prefix(&self, len: usize) -> CouplingPath {
        assert!(len >= 1 && len <= self.len());
        CouplingPath {
            spins: self.spins[..len].to_vec(),
        }
    }

    /// Admissible magnetic quantum numbers `-S_N, ..., S_N`.
    pub fn magnetizations(&self) -> Vec<HalfInt> {
        let s = self.total_spin().doubled();
        (-s..=s).step_by(2).map(HalfInt::from_doubled).collect()
    }

    pub fn admits(&self, m: HalfInt) -> bool {
        m.abs() <= self.total_spin() && (m.doubled() - self.total_spin().doubled()) % 2 == 0
    }

    pub fn check_m(&self, m: HalfInt) -> Result<()> {
        if self.admits(m) {
            Ok(())
        } else {
            Err(SpinError::MOutOfRange {
                m,
                spin: self.total_spin(),
            })
        }
    }

    /// Comma-separated doubled integers, e.g. `1,2,1`.
    pub fn to_doubled_string(&self) -> String {
        self.spins
            .iter()
            .map(|s| s.doubled().to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for CouplingPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.spins.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for CouplingPath {
    type Err = SpinError;

    /// Fraction form `1/2,1,1/2` or doubled form `1,2,1`. The fraction form
    /// always contains a `/` because `S1 = 1/2`.
    fn from_str(s: &str) -> Result<Self> {
        let doubled_form = !s.contains('/');
        let mut spins = Vec::new();
        for tok in s.split(',') {
            let tok = tok.trim();
            let v = if doubled_form {
                tok.replace('\u{2212}', "-")
                    .parse::<i64>()
                    .map(HalfInt::from_doubled)
                    .map_err(|_| SpinError::Parse {
                        what: "doubled spin",
                        token: tok.to_string(),
                    })?
            } else {
                tok.parse::<HalfInt>()?
            };
            spins.push(v);
        }
        validate_path(&spins)
    }
}

impl Serialize for CouplingPath {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CouplingPath {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(d: i64) -> HalfInt {
        HalfInt::from_doubled(d)
    }

    #[test]
    fn validate_examples() {
        assert!(validate_path(&[h(1), h(2), h(1)]).is_ok());
        assert!(validate_path(&[h(1)]).is_ok());
        assert!(validate_path(&[h(1), h(0), h(1)]).is_ok());
        assert!(matches!(
            validate_path(&[h(1), h(3)]),
            Err(SpinError::InvalidStep { index: 2, .. })
        ));
        assert!(matches!(
            validate_path(&[h(2)]),
            Err(SpinError::InvalidStart(_))
        ));
        assert!(matches!(
            validate_path(&[h(1), h(0), h(-1)]),
            Err(SpinError::NegativeSpin { index: 3, .. })
        ));
        assert_eq!(validate_path(&[]), Err(SpinError::EmptyPath));
    }

    #[test]
    fn enumerate_small() {
        let p2: Vec<String> = enumerate_paths(2).iter().map(|p| p.to_string()).collect();
        assert_eq!(p2, vec!["1/2,0", "1/2,1"]);
        assert_eq!(enumerate_paths(1).len(), 1);
        let ends: Vec<HalfInt> = enumerate_paths(3).iter().map(|p| p.total_spin()).collect();
        assert!(ends.iter().all(|s| *s == h(1) || *s == h(3)));
        assert_eq!(enumerate_paths(3).len(), 3);
    }

    #[test]
    fn enumeration_is_sorted_and_unique() {
        for n in 1..=10 {
            let paths = enumerate_paths(n);
            assert!(paths.windows(2).all(|w| w[0].spins < w[1].spins));
        }
    }

    #[test]
    fn parse_both_forms() {
        let a: CouplingPath = "1/2,1,1/2".parse().unwrap();
        let b: CouplingPath = "1,2,1".parse().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "1/2,1,1/2");
        assert_eq!(a.to_doubled_string(), "1,2,1");
        assert!("1/2,3/2".parse::<CouplingPath>().is_err());
        assert!(matches!(
            "1/2,x".parse::<CouplingPath>(),
            Err(SpinError::Parse { .. })
        ));
    }

    #[test]
    fn magnetizations_range() {
        let p: CouplingPath = "1/2,1".parse().unwrap();
        assert_eq!(p.magnetizations(), vec![h(-2), h(0), h(2)]);
        assert!(!p.admits(h(1)));
        assert!(p.check_m(h(4)).is_err());
    }
}
