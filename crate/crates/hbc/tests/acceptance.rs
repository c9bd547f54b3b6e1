//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line with its runtime (visible with `--nocapture`).
//!
//! Run with `cargo test -p hbc --test acceptance`.

use std::time::{Duration, Instant};

use hbc::channel::{basis_povm, random_unit_vector, HadamardChannelSpec};
use hbc::entropic::{cc_rates, cq_rates, eac_rates, InputEnsemble, Task};
use hbc::linalg::{basis_vector, pure_state_reduction, SystemDims};
use hbc::region::{classical_oracle_frontier, optimize_frontier, Frontier, OptimizationConfig};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(criterion: &str, elapsed: Duration, budget: Duration) {
    let status = if elapsed <= budget {
        "PASS"
    } else {
        "OVER BUDGET"
    };
    println!(
        "criterion {criterion}: {status} in {:.2}s (budget {:.0}s)",
        elapsed.as_secs_f64(),
        budget.as_secs_f64()
    );
    assert!(
        elapsed <= budget,
        "criterion {criterion} exceeded its runtime budget: {:.2}s > {:.0}s",
        elapsed.as_secs_f64(),
        budget.as_secs_f64()
    );
}

fn random_small_spec<R: Rng + ?Sized>(rng: &mut R) -> HadamardChannelSpec {
    let d_a = rng.random_range(2..=3);
    let n = rng.random_range(d_a..=4);
    let d_c = rng.random_range(2..=3);
    HadamardChannelSpec::random(rng, d_a, n, d_c)
}

/// 200 random valid specs: isometry residual and degradability Choi
/// residual both at most 1e-10.
#[test]
fn criterion_1_structural_identities() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA1);
    for i in 0..200 {
        let spec = random_small_spec(&mut rng);
        let iso = spec.isometry_residual();
        assert!(iso <= 1e-10, "spec {i}: isometry residual {iso:.3e}");
        let deg = spec.verify_degradability().unwrap();
        assert!(deg <= 1e-10, "spec {i}: degradability residual {deg:.3e}");
    }
    report(
        "1 (structural identities)",
        start.elapsed(),
        Duration::from_secs(10),
    );
}

/// 200 random (spec, cc-ensemble) pairs: the sum-rate bound is redundant
/// and Charlie's rate is data-processed below Bob's.
#[test]
fn criterion_2_sum_rate_redundancy() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA2);
    for i in 0..200 {
        let spec = random_small_spec(&mut rng);
        let num_w = rng.random_range(1..=3);
        let num_z = rng.random_range(1..=3);
        let ens = InputEnsemble::random_cc(&mut rng, spec.d_a(), num_w, num_z);
        let r = cc_rates(&spec, &ens).unwrap();
        let sum = r.sum_rate.unwrap();
        assert!(
            r.primary_rate + r.charlie_rate_c <= sum + 1e-8,
            "pair {i}: I(Z;B|W)+I(W;C) = {} > I(Z;B) = {sum}",
            r.primary_rate + r.charlie_rate_c
        );
        assert!(
            r.charlie_rate_c <= r.charlie_rate_b + 1e-8,
            "pair {i}: I(W;C) = {} > I(W;B) = {}",
            r.charlie_rate_c,
            r.charlie_rate_b
        );
    }
    report(
        "2 (sum-rate redundancy)",
        start.elapsed(),
        Duration::from_secs(30),
    );
}

/// 100 random assisted-ensemble entries: entropy of the explicit R⊗B
/// reduced state equals H(ρ_C).
#[test]
fn criterion_3_purity_shortcut() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA3);
    for i in 0..100 {
        let d_a = rng.random_range(2..=3);
        let n = rng.random_range(d_a..=4);
        let d_c = rng.random_range(2..=3);
        let spec = HadamardChannelSpec::random(&mut rng, d_a, n, d_c);
        let state = random_unit_vector(&mut rng, d_a * d_a);
        let amps = spec.apply_isometry_bipartite(&state, d_a).unwrap();
        let dims = SystemDims::new(vec![d_a, n, d_c]).unwrap();
        let rho_rb = pure_state_reduction(&amps, &dims, &[0, 1]).unwrap();
        let rho_c = pure_state_reduction(&amps, &dims, &[2]).unwrap();
        let h_rb = hbc::entropic::von_neumann_entropy(&rho_rb).unwrap();
        let h_c = hbc::entropic::von_neumann_entropy(&rho_c).unwrap();
        assert!(
            (h_rb - h_c).abs() < 1e-8,
            "entry {i}: H(RB) = {h_rb} vs H(C) = {h_c}"
        );
    }
    report(
        "3 (purity shortcut)",
        start.elapsed(),
        Duration::from_secs(10),
    );
}

fn trivial_spec() -> HadamardChannelSpec {
    HadamardChannelSpec::new(basis_povm(2), vec![basis_vector(2, 0), basis_vector(2, 0)]).unwrap()
}

fn assert_endpoint(frontier: &Frontier, rate_b: f64, rate_c: f64, label: &str) {
    assert!(!frontier.is_empty(), "{label}: empty frontier");
    let best_b = frontier
        .points()
        .iter()
        .map(|p| p.rate_b)
        .fold(f64::MIN, f64::max);
    assert!(
        (best_b - rate_b).abs() <= 0.02,
        "{label}: best rate_b {best_b} vs expected {rate_b}"
    );
    for p in frontier.points() {
        assert!(
            (p.rate_c - rate_c).abs() <= 0.02,
            "{label}: rate_c {} vs expected {rate_c}",
            p.rate_c
        );
    }
}

/// Identical-ψ channel endpoints: (1,0) for cc and cq, (2,0) for eac,
/// with the default configuration.
#[test]
fn criterion_4_trivial_channel_endpoints() {
    let spec = trivial_spec();
    let config = OptimizationConfig::default_for(2);
    let budget = Duration::from_secs(120);

    let start = Instant::now();
    let cc = optimize_frontier(&spec, Task::Cc, &config).unwrap();
    assert_endpoint(&cc, 1.0, 0.0, "cc");
    report("4a (cc endpoint)", start.elapsed(), budget);

    let start = Instant::now();
    let cq = optimize_frontier(&spec, Task::Cq, &config).unwrap();
    assert_endpoint(&cq, 1.0, 0.0, "cq");
    report("4b (cq endpoint)", start.elapsed(), budget);

    let start = Instant::now();
    let eac = optimize_frontier(&spec, Task::Eac, &config).unwrap();
    assert_endpoint(&eac, 2.0, 0.0, "eac");
    report("4c (eac endpoint)", start.elapsed(), budget);
}

/// `point` is matched-or-dominated by `frontier` within `tol` per coordinate,
/// allowing time sharing along the frontier's concave envelope.
fn matched_within(frontier: &Frontier, rate_b: f64, rate_c: f64, tol: f64) -> bool {
    let Some(max_c) = frontier.max_rate_c() else {
        return false;
    };
    if rate_c > max_c + tol {
        return false;
    }
    let probe = rate_c.min(max_c).max(0.0);
    match frontier.envelope_rate_b(probe) {
        Some(env) => env >= rate_b - tol,
        None => false,
    }
}

/// On classically-embedded binary specs the optimizer and the brute-force
/// oracle trace the same region to within 0.02 bits per coordinate.
#[test]
fn criterion_5_oracle_equivalence() {
    let start = Instant::now();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let specs: Vec<(&str, HadamardChannelSpec)> = vec![
        (
            "noiseless-to-both",
            HadamardChannelSpec::new(basis_povm(2), vec![basis_vector(2, 0), basis_vector(2, 1)])
                .unwrap(),
        ),
        ("charlie-constant", trivial_spec()),
        (
            "charlie-stochastic",
            HadamardChannelSpec::new(
                vec![
                    basis_vector(2, 0),
                    vec![Complex64::ZERO, Complex64::new(s, 0.0)],
                    vec![Complex64::ZERO, Complex64::new(s, 0.0)],
                ],
                vec![basis_vector(2, 0), basis_vector(2, 0), basis_vector(2, 1)],
            )
            .unwrap(),
        ),
    ];
    // Binary channels need no more than |W| = d_A + 1 and |Z| = d_A
    // letters; the smaller parameter space converges much tighter.
    let config = OptimizationConfig {
        num_w: 3,
        num_z: 2,
        ..OptimizationConfig::default_for(2)
    };
    for (name, spec) in &specs {
        let oracle = classical_oracle_frontier(spec, 16).unwrap();
        let quantum = optimize_frontier(spec, Task::Cc, &config).unwrap();
        for p in oracle.points() {
            assert!(
                matched_within(&quantum, p.rate_b, p.rate_c, 0.02),
                "{name}: oracle point ({}, {}) not matched by optimizer",
                p.rate_b,
                p.rate_c
            );
        }
        for p in quantum.points() {
            assert!(
                matched_within(&oracle, p.rate_b, p.rate_c, 0.02),
                "{name}: optimizer point ({}, {}) exceeds the classical region",
                p.rate_b,
                p.rate_c
            );
        }
    }
    report(
        "5 (oracle equivalence)",
        start.elapsed(),
        Duration::from_secs(300),
    );
}

/// I(R;B|W) − I(R⟩BW) equals Σ_w p_w H(ρ_R^w) and is nonnegative.
#[test]
fn criterion_6_assisted_rate_gap() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA6);
    for i in 0..100 {
        let d_a = rng.random_range(2..=3);
        let n = rng.random_range(d_a..=3);
        let spec = HadamardChannelSpec::random(&mut rng, d_a, n, 2);
        let num_w = rng.random_range(1..=3);
        let cq = InputEnsemble::random_assisted(&mut rng, Task::Cq, d_a, num_w);
        let eac = InputEnsemble::new(Task::Eac, cq.entries.clone());
        let q = cq_rates(&spec, &cq).unwrap();
        let e = eac_rates(&spec, &eac).unwrap();
        let gap = e.primary_rate - q.primary_rate;
        assert!(gap >= -1e-8, "ensemble {i}: gap {gap}");

        let dims = SystemDims::new(vec![d_a, n, 2]).unwrap();
        let mut reference_entropy = 0.0;
        for entry in &cq.entries {
            let amps = spec.apply_isometry_bipartite(&entry.state, d_a).unwrap();
            let rho_r = pure_state_reduction(&amps, &dims, &[0]).unwrap();
            reference_entropy +=
                entry.probability * hbc::entropic::von_neumann_entropy(&rho_r).unwrap();
        }
        assert!(
            (gap - reference_entropy).abs() < 1e-8,
            "ensemble {i}: gap {gap} vs Σ p_w H(R)_w = {reference_entropy}"
        );
    }
    report(
        "6 (assisted rate gap)",
        start.elapsed(),
        Duration::from_secs(10),
    );
}

/// Identical (spec, task, config, seed) produce byte-identical frontier
/// CSV under worker counts 1 and 4.
#[test]
fn criterion_7_determinism() {
    let start = Instant::now();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let spec = HadamardChannelSpec::new(
        basis_povm(2),
        vec![
            basis_vector(2, 0),
            vec![Complex64::new(s, 0.0), Complex64::new(s, 0.0)],
        ],
    )
    .unwrap();
    let mut config = OptimizationConfig {
        lambda_grid: 7,
        restarts: 5,
        max_iters: 2000,
        seed: 0xA7,
        workers: 1,
        ..OptimizationConfig::default_for(2)
    };
    for task in [Task::Cc, Task::Cq] {
        config.workers = 1;
        let serial = optimize_frontier(&spec, task, &config)
            .unwrap()
            .to_csv_string();
        config.workers = 4;
        let parallel = optimize_frontier(&spec, task, &config)
            .unwrap()
            .to_csv_string();
        assert_eq!(
            serial,
            parallel,
            "{} frontier differs across worker counts",
            task.as_str()
        );
        config.workers = 4;
        let again = optimize_frontier(&spec, task, &config)
            .unwrap()
            .to_csv_string();
        assert_eq!(
            parallel,
            again,
            "{} frontier differs across repeated runs",
            task.as_str()
        );
    }
    report("7 (determinism)", start.elapsed(), Duration::from_secs(240));
}
