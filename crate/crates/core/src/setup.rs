//! Compiles a target label `(S1..SN; m)` into a detector setup: one polarizer
//! per detector and an emitter-to-detector connection matrix with entries in
//! `{-1, 0, +1}`.
//!
//! Rules, with emitters processed in order:
//! * `n/2 + m` detectors carry a σ⁻ filter (coefficient β = 1, projects the
//!   emitter onto `|+>`), the rest a σ⁺ filter (α = 1, onto `|->`).
//! * Emitter 1 is wired to every detector.
//! * An ascent emitter is wired to every detector not yet claimed by the
//!   descent pair of an earlier emitter.
//! * A descent emitter claims one fresh σ⁻ detector, wired with a π phase
//!   (χ = -1), and one fresh σ⁺ detector (χ = +1). Claimed detectors receive no
//!   later connections.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpinError};
use crate::half::HalfInt;
use crate::path::{CouplingPath, Step};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarizer {
    /// σ⁻ filter: `(α, β) = (0, 1)`.
    SigmaMinus,
    /// σ⁺ filter: `(α, β) = (1, 0)`.
    SigmaPlus,
}

impl Polarizer {
    pub fn alpha(self) -> i64 {
        match self {
            Polarizer::SigmaMinus => 0,
            Polarizer::SigmaPlus => 1,
        }
    }

    pub fn beta(self) -> i64 {
        1 - self.alpha()
    }

    fn as_char(self) -> char {
        match self {
            Polarizer::SigmaMinus => '-',
            Polarizer::SigmaPlus => '+',
        }
    }
}

/// Parses a layout string such as `"-+-"` (`-` = σ⁻, `+` = σ⁺).
pub fn parse_polarizers(s: &str) -> Result<Vec<Polarizer>> {
    s.chars()
        .map(|c| match c {
            '-' | '\u{2212}' => Ok(Polarizer::SigmaMinus),
            '+' => Ok(Polarizer::SigmaPlus),
            _ => Err(SpinError::Parse {
                what: "polarizer layout",
                token: s.to_string(),
            }),
        })
        .collect()
}

fn polarizer_string(p: &[Polarizer]) -> String {
    p.iter().map(|p| p.as_char()).collect()
}

/// A user-supplied placement. Descent emitters without an entry in
/// `descent_pairs` fall back to the canonical pair choice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LayoutRepr", into = "LayoutRepr")]
pub struct ExplicitLayout {
    pub polarizers: Vec<Polarizer>,
    /// emitter (1-based) -> (σ⁻ detector, σ⁺ detector), 1-based
    pub descent_pairs: BTreeMap<usize, (usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct LayoutRepr {
    polarizers: String,
    #[serde(default)]
    descent_pairs: BTreeMap<usize, [usize; 2]>,
}

impl TryFrom<LayoutRepr> for ExplicitLayout {
    type Error = SpinError;
    fn try_from(r: LayoutRepr) -> Result<Self> {
        Ok(ExplicitLayout {
            polarizers: parse_polarizers(&r.polarizers)?,
            descent_pairs: r
                .descent_pairs
                .into_iter()
                .map(|(k, [a, b])| (k, (a, b)))
                .collect(),
        })
    }
}

impl From<ExplicitLayout> for LayoutRepr {
    fn from(l: ExplicitLayout) -> Self {
        LayoutRepr {
            polarizers: polarizer_string(&l.polarizers),
            descent_pairs: l
                .descent_pairs
                .into_iter()
                .map(|(k, (a, b))| (k, [a, b]))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AssignmentPolicy {
    /// σ⁻ on detectors `1..=n/2+m`; descents take the lowest free σ⁻ and σ⁺.
    Canonical,
    Explicit(ExplicitLayout),
    /// Uniformly random polarizer placement and descent pairs.
    SeededRandom(u64),
}

impl fmt::Display for AssignmentPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AssignmentPolicy::Canonical => write!(f, "canonical"),
            AssignmentPolicy::Explicit(l) => write!(f, "explicit:{}", polarizer_string(&l.polarizers)),
            AssignmentPolicy::SeededRandom(s) => write!(f, "random:{s}"),
        }
    }
}

impl FromStr for AssignmentPolicy {
    type Err = SpinError;

    /// `canonical`, `random:<seed>` or `file:<layout.json>`.
    fn from_str(s: &str) -> Result<Self> {
        let err = || SpinError::Parse {
            what: "policy",
            token: s.to_string(),
        };
        if s == "canonical" {
            return Ok(AssignmentPolicy::Canonical);
        }
        if let Some(seed) = s.strip_prefix("random:") {
            return seed.parse().map(AssignmentPolicy::SeededRandom).map_err(|_| err());
        }
        if let Some(file) = s.strip_prefix("file:") {
            let text = std::fs::read_to_string(file).map_err(|e| {
                SpinError::InvalidExplicitLayout(format!("cannot read {file}: {e}"))
            })?;
            let layout: ExplicitLayout = serde_json::from_str(&text)
                .map_err(|e| SpinError::InvalidExplicitLayout(format!("{file}: {e}")))?;
            return Ok(AssignmentPolicy::Explicit(layout));
        }
        Err(err())
    }
}

/// A complete setup. Indices in the public accessors are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SetupRepr", into = "SetupRepr")]
pub struct SetupConfig {
    n: usize,
    polarizers: Vec<Polarizer>,
    /// `chi[j][k]`: detector `j`, emitter `k`, both 0-based
    chi: Vec<Vec<i8>>,
    descent_pairs: BTreeMap<usize, (usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct SetupRepr {
    n: usize,
    polarizers: String,
    chi: Vec<Vec<i8>>,
    descent_pairs: BTreeMap<usize, [usize; 2]>,
}

impl TryFrom<SetupRepr> for SetupConfig {
    type Error = SpinError;
    fn try_from(r: SetupRepr) -> Result<Self> {
        let cfg = SetupConfig {
            n: r.n,
            polarizers: parse_polarizers(&r.polarizers)?,
            chi: r.chi,
            descent_pairs: r
                .descent_pairs
                .into_iter()
                .map(|(k, [a, b])| (k, (a, b)))
                .collect(),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl From<SetupConfig> for SetupRepr {
    fn from(c: SetupConfig) -> Self {
        SetupRepr {
            n: c.n,
            polarizers: polarizer_string(&c.polarizers),
            chi: c.chi,
            descent_pairs: c
                .descent_pairs
                .into_iter()
                .map(|(k, (a, b))| (k, [a, b]))
                .collect(),
        }
    }
}

impl SetupConfig {
    /// Assembles a config from raw parts and checks its structural invariants.
    pub fn from_parts(
        polarizers: Vec<Polarizer>,
        chi: Vec<Vec<i8>>,
        descent_pairs: BTreeMap<usize, (usize, usize)>,
    ) -> Result<Self> {
        let cfg = SetupConfig {
            n: polarizers.len(),
            polarizers,
            chi,
            descent_pairs,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn polarizers(&self) -> &[Polarizer] {
        &self.polarizers
    }

    pub fn alpha(&self) -> Vec<i64> {
        self.polarizers.iter().map(|p| p.alpha()).collect()
    }

    pub fn beta(&self) -> Vec<i64> {
        self.polarizers.iter().map(|p| p.beta()).collect()
    }

    /// `χ_{jk}` for detector `j`, emitter `k` (1-based).
    pub fn chi(&self, j: usize, k: usize) -> i8 {
        self.chi[j - 1][k - 1]
    }

    pub fn chi_matrix(&self) -> &[Vec<i8>] {
        &self.chi
    }

    pub fn descent_pairs(&self) -> &BTreeMap<usize, (usize, usize)> {
        &self.descent_pairs
    }

    pub fn count_sigma_minus(&self) -> usize {
        self.polarizers
            .iter()
            .filter(|p| **p == Polarizer::SigmaMinus)
            .count()
    }

    /// The magnetic quantum number implied by the polarizer counts.
    pub fn implied_m(&self) -> HalfInt {
        HalfInt::from_doubled(2 * self.count_sigma_minus() as i64 - self.n as i64)
    }

    /// Structural invariants that hold for every compiled config.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(SpinError::InvalidExplicitLayout(msg));
        let n = self.n;
        if self.polarizers.len() != n || self.chi.len() != n || self.chi.iter().any(|r| r.len() != n) {
            return bad(format!("dimensions do not match n = {n}"));
        }
        if self.chi.iter().flatten().any(|c| !(-1..=1).contains(c)) {
            return bad("chi entries must be -1, 0 or 1".into());
        }
        let mut claimed = vec![false; n];
        for (&k, &(jm, jp)) in &self.descent_pairs {
            if !(2..=n).contains(&k) || !(1..=n).contains(&jm) || !(1..=n).contains(&jp) {
                return bad(format!("descent pair for emitter {k} out of range"));
            }
            if self.polarizers[jm - 1] != Polarizer::SigmaMinus
                || self.polarizers[jp - 1] != Polarizer::SigmaPlus
            {
                return bad(format!("descent pair for emitter {k} has wrong polarizers"));
            }
            if claimed[jm - 1] || claimed[jp - 1] {
                return bad(format!("descent pair for emitter {k} reuses a detector"));
            }
            claimed[jm - 1] = true;
            claimed[jp - 1] = true;
            for kk in k + 1..=n {
                if self.chi(jm, kk) != 0 || self.chi(jp, kk) != 0 {
                    return bad(format!("detector of descent pair {k} linked to later emitter {kk}"));
                }
            }
        }
        for j in 1..=n {
            for k in 1..=n {
                if self.chi(j, k) == -1 && self.descent_pairs.get(&k).map(|p| p.0) != Some(j) {
                    return bad(format!("chi[{j}][{k}] = -1 outside a descent pair"));
                }
            }
        }
        Ok(())
    }
}

/// Builds the setup for `|path; m>` under the given policy.
pub fn compile_setup(
    path: &CouplingPath,
    m: HalfInt,
    policy: &AssignmentPolicy,
) -> Result<SetupConfig> {
    path.check_m(m)?;
    let n = path.len();
    let n_minus = ((n as i64 + m.doubled()) / 2) as usize;
    let mut rng = match policy {
        AssignmentPolicy::SeededRandom(seed) => Some(ChaCha8Rng::seed_from_u64(*seed)),
        _ => None,
    };

    let polarizers = match policy {
        AssignmentPolicy::Canonical => (0..n)
            .map(|j| {
                if j < n_minus {
                    Polarizer::SigmaMinus
                } else {
                    Polarizer::SigmaPlus
                }
            })
            .collect(),
        AssignmentPolicy::Explicit(layout) => {
            if layout.polarizers.len() != n {
                return Err(SpinError::InvalidExplicitLayout(format!(
                    "{} polarizers given for {n} detectors",
                    layout.polarizers.len()
                )));
            }
            let count = layout
                .polarizers
                .iter()
                .filter(|p| **p == Polarizer::SigmaMinus)
                .count();
            if count != n_minus {
                return Err(SpinError::InvalidExplicitLayout(format!(
                    "{count} sigma-minus polarizers given, m = {m} needs {n_minus}"
                )));
            }
            for &k in layout.descent_pairs.keys() {
                if k < 2 || k > n || path.step(k) != Step::Descent {
                    return Err(SpinError::InvalidExplicitLayout(format!(
                        "emitter {k} is not a descent"
                    )));
                }
            }
            layout.polarizers.clone()
        }
        AssignmentPolicy::SeededRandom(_) => {
            let rng = rng.as_mut().expect("seeded");
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(rng);
            let mut p = vec![Polarizer::SigmaPlus; n];
            for &j in &order[..n_minus] {
                p[j] = Polarizer::SigmaMinus;
            }
            p
        }
    };

    let mut chi = vec![vec![0i8; n]; n];
    let mut claimed = vec![false; n];
    let mut descent_pairs = BTreeMap::new();
    for row in chi.iter_mut() {
        row[0] = 1;
    }
    for k in 2..=n {
        match path.step(k) {
            Step::Ascent => {
                for j in 0..n {
                    if !claimed[j] {
                        chi[j][k - 1] = 1;
                    }
                }
            }
            Step::Descent => {
                let free = |want: Polarizer| -> Vec<usize> {
                    (0..n)
                        .filter(|&j| !claimed[j] && polarizers[j] == want)
                        .collect()
                };
                let minus = free(Polarizer::SigmaMinus);
                let plus = free(Polarizer::SigmaPlus);
                if minus.is_empty() || plus.is_empty() {
                    return Err(SpinError::ExhaustedDetectors(k));
                }
                let (jm, jp) = match (policy, rng.as_mut()) {
                    (AssignmentPolicy::Explicit(layout), _) if layout.descent_pairs.contains_key(&k) => {
                        let (a, b) = layout.descent_pairs[&k];
                        if a == 0 || b == 0 || !minus.contains(&(a - 1)) || !plus.contains(&(b - 1)) {
                            return Err(SpinError::InvalidExplicitLayout(format!(
                                "descent pair ({a}, {b}) for emitter {k} is not a free σ⁻/σ⁺ pair"
                            )));
                        }
                        (a - 1, b - 1)
                    }
                    (_, Some(rng)) => (
                        minus[rng.gen_range(0..minus.len())],
                        plus[rng.gen_range(0..plus.len())],
                    ),
                    _ => (minus[0], plus[0]),
                };
                chi[jm][k - 1] = -1;
                chi[jp][k - 1] = 1;
                claimed[jm] = true;
                claimed[jp] = true;
                descent_pairs.insert(k, (jm + 1, jp + 1));
            }
        }
    }

    let cfg = SetupConfig {
        n,
        polarizers,
        chi,
        descent_pairs,
    };
    debug_assert!(cfg.validate().is_ok());
    Ok(cfg)
}

/// `(Σ_j β_j χ_jk, Σ_j α_j χ_jk)` for emitter `k` (1-based).
pub fn column_sums(cfg: &SetupConfig, k: usize) -> Result<(i64, i64)> {
    if k == 0 || k > cfg.n {
        return Err(SpinError::IndexOutOfRange { index: k, max: cfg.n });
    }
    let mut beta_sum = 0;
    let mut alpha_sum = 0;
    for (j, p) in cfg.polarizers.iter().enumerate() {
        let c = cfg.chi[j][k - 1] as i64;
        beta_sum += p.beta() * c;
        alpha_sum += p.alpha() * c;
    }
    Ok((beta_sum, alpha_sum))
}

/// The column sums the last emitter must produce: `(S_{n-1} + m + 1/2,
/// S_{n-1} - m + 1/2)` after an ascent and `(-1, +1)` after a descent.
pub fn expected_last_column_sums(path: &CouplingPath, m: HalfInt) -> (i64, i64) {
    let n = path.len();
    match path.step(n) {
        Step::Ascent => {
            let s = path.spin(n - 1).doubled();
            ((s + m.doubled() + 1) / 2, (s - m.doubled() + 1) / 2)
        }
        Step::Descent => (-1, 1),
    }
}

/// The explicit layout of the three-emitter example `|1/2, 1, 1/2; 1/2>`:
/// σ⁻ on detectors 1 and 3, σ⁺ on detector 2, descent pair (3, 2).
pub fn three_qubit_example_layout() -> ExplicitLayout {
    ExplicitLayout {
        polarizers: vec![
            Polarizer::SigmaMinus,
            Polarizer::SigmaPlus,
            Polarizer::SigmaMinus,
        ],
        descent_pairs: BTreeMap::from([(3, (3, 2))]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::enumerate_paths;

    fn p(s: &str) -> CouplingPath {
        s.parse().unwrap()
    }

    fn h(d: i64) -> HalfInt {
        HalfInt::from_doubled(d)
    }

    #[test]
    fn three_qubit_example() {
        let cfg = compile_setup(
            &p("1/2,1,1/2"),
            h(1),
            &AssignmentPolicy::Explicit(three_qubit_example_layout()),
        )
        .unwrap();
        assert_eq!(cfg.alpha(), vec![0, 1, 0]);
        assert_eq!(cfg.beta(), vec![1, 0, 1]);
        assert_eq!(
            cfg.chi_matrix(),
            &[vec![1, 1, 0], vec![1, 1, 1], vec![1, 1, -1]]
        );
        assert_eq!(column_sums(&cfg, 3).unwrap(), (-1, 1));
        assert_eq!(column_sums(&cfg, 1).unwrap(), (2, 1));
    }

    #[test]
    fn symmetric_pair() {
        let cfg = compile_setup(&p("1/2,1"), h(2), &AssignmentPolicy::Canonical).unwrap();
        assert_eq!(cfg.beta(), vec![1, 1]);
        assert_eq!(cfg.alpha(), vec![0, 0]);
        assert!(cfg.chi_matrix().iter().flatten().all(|c| *c == 1));
        assert_eq!(column_sums(&cfg, 2).unwrap(), (2, 0));
    }

    #[test]
    fn singlet_setup() {
        let cfg = compile_setup(&p("1/2,0"), h(0), &AssignmentPolicy::Canonical).unwrap();
        assert_eq!(cfg.polarizers(), &[Polarizer::SigmaMinus, Polarizer::SigmaPlus]);
        assert_eq!(cfg.descent_pairs()[&2], (1, 2));
        assert_eq!(cfg.chi(1, 2), -1);
        assert_eq!(cfg.chi(2, 2), 1);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            compile_setup(&p("1/2,0"), h(2), &AssignmentPolicy::Canonical),
            Err(SpinError::MOutOfRange { .. })
        ));
        let mut layout = three_qubit_example_layout();
        layout.polarizers[1] = Polarizer::SigmaMinus;
        assert!(matches!(
            compile_setup(&p("1/2,1,1/2"), h(1), &AssignmentPolicy::Explicit(layout)),
            Err(SpinError::InvalidExplicitLayout(_))
        ));
        let mut layout = three_qubit_example_layout();
        layout.descent_pairs.insert(3, (2, 3));
        assert!(compile_setup(&p("1/2,1,1/2"), h(1), &AssignmentPolicy::Explicit(layout)).is_err());
        let cfg = compile_setup(&p("1/2,1"), h(0), &AssignmentPolicy::Canonical).unwrap();
        assert!(matches!(column_sums(&cfg, 3), Err(SpinError::IndexOutOfRange { .. })));
    }

    #[test]
    fn compiled_configs_satisfy_invariants() {
        for n in 1..=8 {
            for path in enumerate_paths(n) {
                for m in path.magnetizations() {
                    for policy in [
                        AssignmentPolicy::Canonical,
                        AssignmentPolicy::SeededRandom(7),
                        AssignmentPolicy::SeededRandom(n as u64 * 31),
                    ] {
                        let cfg = compile_setup(&path, m, &policy).unwrap();
                        cfg.validate().unwrap();
                        assert_eq!(cfg.implied_m(), m);
                        let (b1, a1) = column_sums(&cfg, 1).unwrap();
                        assert_eq!(2 * b1, n as i64 + m.doubled());
                        assert_eq!(2 * a1, n as i64 - m.doubled());
                        if n >= 2 {
                            assert_eq!(
                                column_sums(&cfg, n).unwrap(),
                                expected_last_column_sums(&path, m)
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn canonical_is_deterministic() {
        let path = p("1/2,1,1/2,0,1/2");
        let a = compile_setup(&path, h(1), &AssignmentPolicy::Canonical).unwrap();
        let b = compile_setup(&path, h(1), &AssignmentPolicy::Canonical).unwrap();
        assert_eq!(a, b);
        let r1 = compile_setup(&path, h(1), &AssignmentPolicy::SeededRandom(3)).unwrap();
        let r2 = compile_setup(&path, h(1), &AssignmentPolicy::SeededRandom(3)).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn json_round_trip() {
        let cfg = compile_setup(
            &p("1/2,1,1/2"),
            h(1),
            &AssignmentPolicy::Explicit(three_qubit_example_layout()),
        )
        .unwrap();
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(
            text,
            r#"{"n":3,"polarizers":"-+-","chi":[[1,1,0],[1,1,1],[1,1,-1]],"descent_pairs":{"3":[3,2]}}"#
        );
        let back: SetupConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
        let broken = r#"{"n":2,"polarizers":"-+","chi":[[1,-1],[1,1]],"descent_pairs":{}}"#;
        assert!(serde_json::from_str::<SetupConfig>(broken).is_err());
    }

    #[test]
    fn policy_parsing() {
        assert_eq!("canonical".parse::<AssignmentPolicy>().unwrap(), AssignmentPolicy::Canonical);
        assert_eq!(
            "random:42".parse::<AssignmentPolicy>().unwrap(),
            AssignmentPolicy::SeededRandom(42)
        );
        assert!("random:x".parse::<AssignmentPolicy>().is_err());
        assert!("file:/nonexistent/layout.json".parse::<AssignmentPolicy>().is_err());
        let layout: ExplicitLayout =
            serde_json::from_str(r#"{"polarizers":"-+-","descent_pairs":{"3":[3,2]}}"#).unwrap();
        assert_eq!(layout, three_qubit_example_layout());
    }
}
