//! Exit criteria. Each test prints one `[PASS]`/`[FAIL]` line; run with
//! `cargo test -p spinweave --test acceptance -- --nocapture` to see them.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spinweave::coupled::{apply_s2, apply_sz};
use spinweave::projector::{apply_projection_sequence, permutation_sum_oracle_capped};
use spinweave::setup::{column_sums, expected_last_column_sums, three_qubit_example_layout};
use spinweave::verify::{check_ratio_constraint, trial_seeds};
use spinweave::{
    build_coupled_state, check_algorithm_recursion, check_proportionality, compile_setup,
    enumerate_paths, inner_product, AssignmentPolicy, CouplingPath, HalfInt, RadicalAmplitude,
    SparseState, SpinError,
};

type Outcome = Result<String, String>;

fn report(id: &str, title: &str, outcome: Outcome) {
    match outcome {
        Ok(detail) => println!("[PASS] AC{id} {title}: {detail}"),
        Err(detail) => {
            println!("[FAIL] AC{id} {title}: {detail}");
            panic!("acceptance criterion {id} failed: {detail}");
        }
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let took = start.elapsed();
    if took <= limit {
        Ok(took)
    } else {
        Err(format!("took {took:?}, limit {limit:?}"))
    }
}

fn h(d: i64) -> HalfInt {
    HalfInt::from_doubled(d)
}

fn p(s: &str) -> CouplingPath {
    s.parse().unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_labels(n_lo: usize, n_hi: usize) -> Vec<(CouplingPath, HalfInt)> {
    (n_lo..=n_hi)
        .flat_map(enumerate_paths)
        .flat_map(|path| {
            path.magnetizations()
                .into_iter()
                .map(move |m| (path.clone(), m))
        })
        .collect()
}

#[test]
fn ac01_two_qubit_table() {
    let run = || -> Outcome {
        let start = Instant::now();
        let half_root2 = RadicalAmplitude::sqrt_ratio(1, 2);
        let quarter = RadicalAmplitude::from_rational(BigRational::new(BigInt::from(1), BigInt::from(2)));
        let rows = [
            ("1/2,1", h(2), SparseState::from_integers(2, [("++", 2)]), quarter.clone()),
            ("1/2,1", h(0), SparseState::from_integers(2, [("+-", 1), ("-+", 1)]), half_root2.clone()),
            ("1/2,1", h(-2), SparseState::from_integers(2, [("--", 2)]), quarter),
            ("1/2,0", h(0), SparseState::from_integers(2, [("+-", 1), ("-+", -1)]), half_root2),
        ];
        for (path, m, want_state, want_a) in rows {
            let path = p(path);
            let cfg = compile_setup(&path, m, &AssignmentPolicy::Canonical).map_err(|e| e.to_string())?;
            let got = apply_projection_sequence(&cfg);
            ensure(got == want_state, || format!("{path};{m}: output {got:?}"))?;
            let r = check_proportionality(&path, m, &AssignmentPolicy::Canonical).map_err(|e| e.to_string())?;
            ensure(r.holds, || format!("{path};{m}: not proportional"))?;
            ensure(r.inverse_ratio == want_a, || {
                format!("{path};{m}: A = {} (expected {want_a})", r.inverse_ratio)
            })?;
        }
        let took = within(start, Duration::from_secs(1))?;
        Ok(format!("4 rows exact, {took:?}"))
    };
    report("1", "two-qubit table", run());
}

#[test]
fn ac02_three_qubit_example() {
    let run = || -> Outcome {
        let start = Instant::now();
        let path = p("1/2,1,1/2");
        let policy = AssignmentPolicy::Explicit(three_qubit_example_layout());
        let cfg = compile_setup(&path, h(1), &policy).map_err(|e| e.to_string())?;
        let got = apply_projection_sequence(&cfg);
        let want = SparseState::from_integers(3, [("++-", 2), ("+-+", -1), ("-++", -1)]);
        ensure(got == want, || format!("output {got:?}"))?;
        let r6 = RadicalAmplitude::sqrt_ratio(1, 6);
        let reference = SparseState::from_amplitudes(
            3,
            [
                ("++-".parse().unwrap(), r6.scale_int(2)),
                ("+-+".parse().unwrap(), -r6.clone()),
                ("-++".parse().unwrap(), -r6),
            ],
        )
        .unwrap();
        ensure(build_coupled_state(&path, h(1)).unwrap() == reference, || "reference state differs".into())?;
        let r = check_proportionality(&path, h(1), &policy).map_err(|e| e.to_string())?;
        let sqrt6 = RadicalAmplitude::monomial(BigRational::from_integer(1.into()), 6);
        ensure(r.holds && r.ratio == sqrt6, || format!("ratio {}", r.ratio))?;
        let took = within(start, Duration::from_secs(1))?;
        Ok(format!("2|++-> - |+-+> - |-++> = sqrt(6) x reference, {took:?}"))
    };
    report("2", "three-qubit example", run());
}

#[test]
fn ac03_proportionality_sweep() {
    let run = || -> Outcome {
        let start = Instant::now();
        let labels = all_labels(2, 8);
        ensure(labels.len() == 508, || format!("{} labels", labels.len()))?;
        let mut negative = 0;
        for (path, m) in &labels {
            let r = check_proportionality(path, *m, &AssignmentPolicy::Canonical).map_err(|e| e.to_string())?;
            ensure(r.holds, || format!("{path};{m} fails: {:?}", r.mismatch_keys))?;
            if r.ratio.monomial_signum() != Some(1) {
                negative += 1;
            }
            let ref_norm = build_coupled_state(path, *m).unwrap().norm_squared();
            ensure(&(&r.ratio * &r.ratio) * &ref_norm == r.alg_norm2, || format!("{path};{m}: A^2 != norm"))?;
        }
        let took = within(start, Duration::from_secs(60))?;
        Ok(format!("508/508 hold, {negative} negative A, {took:?}"))
    };
    report("3", "proportionality sweep n <= 8", run());
}

#[test]
fn ac04_oracle_equivalence() {
    let run = || -> Outcome {
        let start = Instant::now();
        let mut checked = 0;
        for (path, m) in all_labels(1, 6) {
            let cfg = compile_setup(&path, m, &AssignmentPolicy::Canonical).unwrap();
            let oracle = permutation_sum_oracle_capped(&cfg, m, 7).map_err(|e| e.to_string())?;
            ensure(oracle == apply_projection_sequence(&cfg), || format!("{path};{m} canonical"))?;
            checked += 1;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in 1..=6 {
            let labels = all_labels(n, n);
            for _ in 0..50 {
                let (path, m) = &labels[rng.gen_range(0..labels.len())];
                let policy = AssignmentPolicy::SeededRandom(rng.gen());
                let cfg = compile_setup(path, *m, &policy).unwrap();
                let oracle = permutation_sum_oracle_capped(&cfg, *m, 7).map_err(|e| e.to_string())?;
                ensure(oracle == apply_projection_sequence(&cfg), || format!("{path};{m} {policy}"))?;
                checked += 1;
            }
        }
        let took = within(start, Duration::from_secs(300))?;
        Ok(format!("{checked} configs identical, {took:?}"))
    };
    report("4", "oracle equivalence n <= 6", run());
}

#[test]
fn ac05_column_sums() {
    let run = || -> Outcome {
        let labels = all_labels(2, 8);
        for (path, m) in &labels {
            let cfg = compile_setup(path, *m, &AssignmentPolicy::Canonical).unwrap();
            let got = column_sums(&cfg, path.len()).map_err(|e| e.to_string())?;
            ensure(got == expected_last_column_sums(path, *m), || format!("{path};{m}: {got:?}"))?;
        }
        Ok(format!("{} configs", labels.len()))
    };
    report("5", "last-emitter coefficient sums", run());
}

#[test]
fn ac06_algorithm_recursion() {
    let run = || -> Outcome {
        let labels = all_labels(2, 8);
        for (path, m) in &labels {
            let ok = check_algorithm_recursion(path, *m).map_err(|e| e.to_string())?;
            ensure(ok, || format!("{path};{m}"))?;
        }
        Ok(format!("{} labels", labels.len()))
    };
    report("6", "algorithm recursion", run());
}

#[test]
fn ac07_ratio_constraint() {
    let run = || -> Outcome {
        let (mut pass, mut skipped) = (0, 0);
        for (path, m) in all_labels(2, 8) {
            match check_ratio_constraint(&path, m) {
                Ok(true) => pass += 1,
                Ok(false) => return Err(format!("{path};{m}")),
                Err(SpinError::ChildInadmissible { .. }) => skipped += 1,
                Err(e) => return Err(e.to_string()),
            }
        }
        Ok(format!("{pass} hold, {skipped} boundary cases skipped"))
    };
    report("7", "child ratio constraint", run());
}

#[test]
fn ac08_eigenvalues() {
    let run = || -> Outcome {
        let labels = all_labels(1, 8);
        for (path, m) in &labels {
            let psi = build_coupled_state(path, *m).unwrap();
            let c = path.total_spin().casimir();
            let c = RadicalAmplitude::from_rational(BigRational::new((*c.numer()).into(), (*c.denom()).into()));
            let mz = RadicalAmplitude::from_rational(BigRational::new(m.doubled().into(), 2.into()));
            ensure(apply_s2(&psi) == psi.scale(&c), || format!("S^2 on {path};{m}"))?;
            ensure(apply_sz(&psi) == psi.scale(&mz), || format!("Sz on {path};{m}"))?;
        }
        Ok(format!("{} states", labels.len()))
    };
    report("8", "S^2 and Sz eigenvalues", run());
}

#[test]
fn ac09_completeness_orthonormality() {
    let run = || -> Outcome {
        for n in 1..=12usize {
            let dim: i64 = enumerate_paths(n).iter().map(|p| p.total_spin().doubled() + 1).sum();
            ensure(dim == 1 << n, || format!("n={n}: dimension {dim}"))?;
        }
        for n in 1..=6 {
            let states: Vec<SparseState> = all_labels(n, n)
                .iter()
                .map(|(path, m)| build_coupled_state(path, *m).unwrap())
                .collect();
            ensure(states.len() == 1 << n, || format!("n={n}: {} states", states.len()))?;
            for (i, a) in states.iter().enumerate() {
                for (j, b) in states.iter().enumerate().skip(i) {
                    let ip = inner_product(a, b).unwrap();
                    let want = if i == j { RadicalAmplitude::one() } else { RadicalAmplitude::zero() };
                    ensure(ip == want, || format!("n={n}: <{i}|{j}> = {ip}"))?;
                }
            }
        }
        Ok("dimension 2^n for n <= 12, orthonormal for n <= 6".into())
    };
    report("9", "completeness and orthonormality", run());
}

#[test]
fn ac10_assignment_invariance() {
    let run = || -> Outcome {
        let labels = all_labels(1, 6);
        let mut trials = 0;
        for (idx, (path, m)) in labels.iter().enumerate() {
            let canonical = apply_projection_sequence(&compile_setup(path, *m, &AssignmentPolicy::Canonical).unwrap());
            for seed in trial_seeds(1000 + idx as u64, 100) {
                let policy = AssignmentPolicy::SeededRandom(seed);
                let other = apply_projection_sequence(&compile_setup(path, *m, &policy).unwrap());
                ensure(other == canonical, || format!("{path};{m} {policy}: {other:?} vs {canonical:?}"))?;
                trials += 1;
            }
        }
        Ok(format!("{trials} random layouts identical to canonical"))
    };
    report("10", "detector assignment invariance", run());
}
