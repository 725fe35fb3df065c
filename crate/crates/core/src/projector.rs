//! Post-measurement atomic states for a detector setup.
//!
//! Two independent evaluators:
//! * [`apply_projection_sequence`] applies the per-emitter projectors one at
//!   a time, tracking which detectors have already clicked;
//! * [`permutation_sum_oracle`] expands the literal double sum over detector
//!   and emitter permutations.

use std::collections::HashMap;

use itertools::Itertools;

use crate::basis::BasisString;
use crate::error::{Result, SpinError};
use crate::half::HalfInt;
use crate::radical::RadicalAmplitude;
use crate::setup::SetupConfig;
use crate::state::SparseState;

pub const DEFAULT_ORACLE_CAP: usize = 7;

/// Partial result after the first `k` emitters have been projected.
///
/// Keys are `(minus_mask, occupied)`: bit `i` of `minus_mask` is set when
/// emitter `i + 1` went to `|->`, bit `j` of `occupied` when detector `j + 1`
/// has registered its photon. Both have exactly `k` relevant bits / set bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointState {
    k: usize,
    entries: HashMap<(u64, u64), i64>,
}

impl Default for JointState {
    fn default() -> Self {
        Self::initial()
    }
}

impl JointState {
    /// All emitters excited, no detector clicked.
    pub fn initial() -> Self {
        JointState {
            k: 0,
            entries: HashMap::from([((0, 0), 1)]),
        }
    }

    pub fn emitters_done(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Projects emitter `k + 1`: its photon lands on any free detector `j`
    /// with `χ_{j,k+1} != 0`, contributing `β_j χ` to `|+>` and `α_j χ` to `|->`.
    pub fn step(&self, cfg: &SetupConfig) -> JointState {
        let emitter = self.k + 1;
        assert!(emitter <= cfg.n(), "all emitters already projected");
        let alpha = cfg.alpha();
        let beta = cfg.beta();
        let mut next: HashMap<(u64, u64), i64> = HashMap::new();
        for (&(minus, occupied), &amp) in &self.entries {
            for j in 0..cfg.n() {
                if occupied >> j & 1 == 1 {
                    continue;
                }
                let chi = cfg.chi(j + 1, emitter) as i64;
                if chi == 0 {
                    continue;
                }
                let occ = occupied | 1 << j;
                for (weight, m) in [(beta[j], minus), (alpha[j], minus | 1 << self.k)] {
                    if weight != 0 {
                        *next.entry((m, occ)).or_insert(0) += amp * weight * chi;
                    }
                }
            }
        }
        next.retain(|_, v| *v != 0);
        JointState {
            k: emitter,
            entries: next,
        }
    }

    /// Keeps entries in which every one of the `n` detectors clicked.
    pub fn into_atomic_state(self, n: usize) -> SparseState {
        assert_eq!(self.k, n, "not all emitters projected");
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut out = SparseState::zero(n);
        for ((minus, occ), amp) in self.entries {
            if occ == full {
                out.add_at(
                    BasisString::from_minus_mask(n, minus),
                    &RadicalAmplitude::from_integer(amp),
                )
                .expect("length n");
            }
        }
        out
    }
}

/// Result of the sequential fold together with the number of joint entries
/// materialized over all levels.
#[derive(Debug, Clone)]
pub struct FoldOutcome {
    pub state: SparseState,
    pub entries_visited: usize,
}

pub fn apply_projection_sequence_counted(cfg: &SetupConfig) -> FoldOutcome {
    let mut joint = JointState::initial();
    let mut visited = joint.len();
    for _ in 0..cfg.n() {
        joint = joint.step(cfg);
        visited += joint.len();
    }
    FoldOutcome {
        state: joint.into_atomic_state(cfg.n()),
        entries_visited: visited,
    }
}

/// `P_N ... P_1 |e...e>` with the photonic factor dropped. Integer amplitudes.
pub fn apply_projection_sequence(cfg: &SetupConfig) -> SparseState {
    apply_projection_sequence_counted(cfg).state
}

/// Literal permutation double sum with the default cap.
pub fn permutation_sum_oracle(cfg: &SetupConfig, m: HalfInt) -> Result<SparseState> {
    permutation_sum_oracle_capped(cfg, m, DEFAULT_ORACLE_CAP)
}

/// For `k = n/2 + m`:
/// `1/(k!(n-k)!) Σ_τ Σ_σ β_σ(1)..β_σ(k) α_σ(k+1)..α_σ(n) χ_σ(1)τ(1)..χ_σ(n)τ(n)`
/// times the string with `+` at emitters `τ(1..k)` and `-` elsewhere.
pub fn permutation_sum_oracle_capped(
    cfg: &SetupConfig,
    m: HalfInt,
    cap: usize,
) -> Result<SparseState> {
    let n = cfg.n();
    if n > cap {
        return Err(SpinError::CapExceeded { n, cap });
    }
    let twice_k = n as i64 + m.doubled();
    if m.abs().doubled() > n as i64 || twice_k % 2 != 0 {
        return Err(SpinError::MOutOfRange {
            m,
            spin: HalfInt::from_doubled(n as i64),
        });
    }
    let k = (twice_k / 2) as usize;
    let alpha = cfg.alpha();
    let beta = cfg.beta();
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();

    let mut acc: HashMap<u64, i64> = HashMap::new();
    for sigma in &perms {
        let polar: i64 = sigma[..k].iter().map(|&d| beta[d]).product::<i64>()
            * sigma[k..].iter().map(|&d| alpha[d]).product::<i64>();
        if polar == 0 {
            continue;
        }
        for tau in &perms {
            let mut term = polar;
            for i in 0..n {
                term *= cfg.chi(sigma[i] + 1, tau[i] + 1) as i64;
                if term == 0 {
                    break;
                }
            }
            if term == 0 {
                continue;
            }
            let minus = tau[k..].iter().fold(0u64, |mask, &e| mask | 1 << e);
            *acc.entry(minus).or_insert(0) += term;
        }
    }

    let multiplicity = factorial(k) * factorial(n - k);
    let mut out = SparseState::zero(n);
    let mut keys: Vec<_> = acc.into_iter().collect();
    keys.sort_unstable();
    for (minus, total) in keys {
        assert_eq!(
            total % multiplicity,
            0,
            "permutation sum not divisible by k!(n-k)!"
        );
        out.add_at(
            BasisString::from_minus_mask(n, minus),
            &RadicalAmplitude::from_integer(total / multiplicity),
        )?;
    }
    Ok(out)
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}
