//! Reference eigenstates of total `S^2` and `S_z` built by adding one spin-1/2
//! at a time, plus the operators used to check them.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::basis::{magnetization, BasisString, Sign};
use crate::error::{Result, SpinError};
use crate::half::HalfInt;
use crate::path::{CouplingPath, Step};
use crate::radical::RadicalAmplitude;
use crate::state::SparseState;

/// Which of the two couplings `J = j1 ± 1/2` is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CgcBranch {
    Up,
    Down,
}

impl From<Step> for CgcBranch {
    fn from(s: Step) -> Self {
        match s {
            Step::Ascent => CgcBranch::Up,
            Step::Descent => CgcBranch::Down,
        }
    }
}

/// `<j1, 1/2; M - m2, m2 | j1 ± 1/2, M>` in the Condon-Shortley convention.
///
/// Entries forbidden by the selection rules come back as zero.
pub fn cgc(j1: HalfInt, big_m: HalfInt, branch: CgcBranch, m2: Sign) -> Result<RadicalAmplitude> {
    let a = j1.doubled();
    if a < 0 {
        return Err(SpinError::InvalidBranch(j1));
    }
    if branch == CgcBranch::Down && a == 0 {
        return Err(SpinError::InvalidBranch(j1));
    }
    let b = big_m.doubled();
    let j = match branch {
        CgcBranch::Up => a + 1,
        CgcBranch::Down => a - 1,
    };
    let m1 = match m2 {
        Sign::Plus => b - 1,
        Sign::Minus => b + 1,
    };
    if b.abs() > j || m1.abs() > a || (m1 - a) % 2 != 0 {
        return Ok(RadicalAmplitude::zero());
    }
    // with j1 = a/2, M = b/2: (j1 ± M + 1/2) / (2 j1 + 1) = (a ± b + 1) / (2a + 2)
    let plus = RadicalAmplitude::sqrt_ratio(a + b + 1, 2 * a + 2);
    let minus = RadicalAmplitude::sqrt_ratio(a - b + 1, 2 * a + 2);
    Ok(match (branch, m2) {
        (CgcBranch::Up, Sign::Plus) => plus,
        (CgcBranch::Up, Sign::Minus) => minus,
        (CgcBranch::Down, Sign::Plus) => -minus,
        (CgcBranch::Down, Sign::Minus) => plus,
    })
}

/// `|S1, ..., SN; m>` expanded in the product basis. Normalized exactly.
pub fn build_coupled_state(path: &CouplingPath, m: HalfInt) -> Result<SparseState> {
    path.check_m(m)?;
    let mut memo = HashMap::new();
    Ok(coupled_prefix(path, path.len(), m, &mut memo))
}

fn coupled_prefix(
    path: &CouplingPath,
    len: usize,
    m: HalfInt,
    memo: &mut HashMap<(usize, i64), SparseState>,
) -> SparseState {
    if m.abs() > path.spin(len) {
        return SparseState::zero(len);
    }
    if let Some(s) = memo.get(&(len, m.doubled())) {
        return s.clone();
    }
    let state = if len == 1 {
        let sign = if m > HalfInt::ZERO { Sign::Plus } else { Sign::Minus };
        SparseState::basis(BasisString::uniform(1, sign))
    } else {
        let j1 = path.spin(len - 1);
        let branch = CgcBranch::from(path.step(len));
        let mut out = SparseState::zero(len);
        for (sign, child_m) in [(Sign::Plus, m - HalfInt::HALF), (Sign::Minus, m + HalfInt::HALF)] {
            let c = cgc(j1, m, branch, sign).expect("path steps are valid branches");
            if c.is_zero() {
                continue;
            }
            let child = coupled_prefix(path, len - 1, child_m, memo);
            out = out
                .add(&child.scale(&c).tensor_sign(sign))
                .expect("same dimension");
        }
        out
    };
    memo.insert((len, m.doubled()), state.clone());
    state
}

fn half_int_amp(v: HalfInt) -> RadicalAmplitude {
    RadicalAmplitude::from_rational(BigRational::new(BigInt::from(v.doubled()), BigInt::from(2)))
}

/// Total `S_z`.
pub fn apply_sz(s: &SparseState) -> SparseState {
    let mut out = SparseState::zero(s.n());
    for (k, v) in s.iter() {
        let m = magnetization(k);
        out.add_at(k.clone(), &(v * &half_int_amp(m)))
            .expect("same length");
    }
    out
}

fn apply_ladder(s: &SparseState, from: Sign) -> SparseState {
    let mut out = SparseState::zero(s.n());
    for (k, v) in s.iter() {
        for (i, sign) in k.signs().iter().enumerate() {
            if *sign == from {
                out.add_at(k.flipped_at(i), v).expect("same length");
            }
        }
    }
    out
}

/// Total raising operator `S+`.
pub fn apply_raise(s: &SparseState) -> SparseState {
    apply_ladder(s, Sign::Minus)
}

/// Total lowering operator `S-`.
pub fn apply_lower(s: &SparseState) -> SparseState {
    apply_ladder(s, Sign::Plus)
}

/// `S^2 = Sz^2 + (S+ S- + S- S+) / 2`.
pub fn apply_s2(s: &SparseState) -> SparseState {
    let zz = apply_sz(&apply_sz(s));
    let ladders = apply_raise(&apply_lower(s))
        .add(&apply_lower(&apply_raise(s)))
        .expect("same dimension")
        .scale(&RadicalAmplitude::from_rational(BigRational::new(1.into(), 2.into())));
    zz.add(&ladders).expect("same dimension")
}
