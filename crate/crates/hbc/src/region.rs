//! Capacity-region frontier tracing.
//!
//! The boundary is swept with supporting hyperplanes: for each weight λ in
//! a grid the scalarization λ·(Bob rate) + (1−λ)·(Charlie rate) is
//! maximized over parameterized input ensembles by restarted Nelder-Mead,
//! and the per-λ winners are filtered to their nondominated set. Every
//! restart draws its randomness from a stream derived only from
//! (seed, λ-index, restart-index), so results are identical under any
//! worker count.

mod nelder_mead;
mod oracle;

pub use oracle::{classical_oracle_frontier, is_classical_embedded};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::HadamardChannelSpec;
use crate::entropic::{rates, EnsembleEntry, InputEnsemble, Task};
use crate::{Error, Result};

/// Knobs for the frontier sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationConfig {
    /// Auxiliary alphabet size |W|.
    pub num_w: usize,
    /// Per-w alphabet size |Z| (cc task only).
    pub num_z: usize,
    /// Number of scalarization weights in [0, 1]; endpoints always included.
    pub lambda_grid: usize,
    /// Random restarts per weight.
    pub restarts: usize,
    pub seed: u64,
    /// Objective-evaluation budget per local search.
    pub max_iters: usize,
    /// Convergence threshold on the simplex value spread, in bits.
    pub obj_tol: f64,
    /// Worker threads; results are identical for any value.
    pub workers: usize,
}

impl OptimizationConfig {
    /// Defaults for a given input dimension: |W| = d_A²+1, |Z| = d_A²
    /// (Carathéodory-style heuristics, overridable).
    pub fn default_for(d_a: usize) -> Self {
        Self {
            num_w: d_a * d_a + 1,
            num_z: d_a * d_a,
            lambda_grid: 33,
            restarts: 20,
            seed: 7,
            max_iters: 5000,
            obj_tol: 1e-7,
            workers: default_workers(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.num_w < 1 || self.num_z < 1 {
            return Err(Error::InvalidParameters(
                "alphabet sizes must be at least 1".into(),
            ));
        }
        if self.lambda_grid < 2 {
            return Err(Error::InvalidParameters(
                "lambda grid needs at least the two endpoints".into(),
            ));
        }
        if self.restarts < 1 || self.max_iters < 1 {
            return Err(Error::InvalidParameters(
                "restarts and max_iters must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

fn default_workers() -> usize {
    if cfg!(target_family = "wasm") {
        1
    } else {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    }
}

/// One achievable rate pair and the ensemble that achieves it.
#[derive(Debug, Clone)]
pub struct RatePoint {
    pub rate_b: f64,
    pub rate_c: f64,
    /// Scalarization weight that produced the point; -1 for oracle points.
    pub lambda: f64,
    pub achieving_ensemble: InputEnsemble,
}

/// Nondominated rate points, ascending in `rate_c` with `rate_b`
/// nonincreasing.
#[derive(Debug, Clone, Default)]
pub struct Frontier {
    points: Vec<RatePoint>,
}

impl Frontier {
    pub(crate) fn from_sorted(points: Vec<RatePoint>) -> Self {
        Self { points }
    }

    pub fn points(&self) -> &[RatePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_rate_c(&self) -> Option<f64> {
        self.points.last().map(|p| p.rate_c)
    }

    /// Best Bob rate available at Charlie rate `rate_c`, allowing time
    /// sharing between frontier points (the region is convex, so the
    /// reachable boundary is the upper concave hull of the points).
    /// `None` when `rate_c` exceeds the frontier's reach.
    pub fn envelope_rate_b(&self, rate_c: f64) -> Option<f64> {
        if self.points.is_empty() {
            return None;
        }
        let hull = self.upper_hull();
        let first = hull[0];
        if rate_c <= first.1 {
            return Some(first.0);
        }
        for pair in hull.windows(2) {
            let ((lo_b, lo_c), (hi_b, hi_c)) = (pair[0], pair[1]);
            if rate_c <= hi_c {
                let span = hi_c - lo_c;
                if span <= 1e-15 {
                    return Some(lo_b.max(hi_b));
                }
                let t = (rate_c - lo_c) / span;
                return Some(lo_b + t * (hi_b - lo_b));
            }
        }
        None
    }

    /// Upper concave hull of the (rate_b, rate_c) points, ascending rate_c.
    fn upper_hull(&self) -> Vec<(f64, f64)> {
        let mut hull: Vec<(f64, f64)> = Vec::with_capacity(self.points.len());
        for p in &self.points {
            let q = (p.rate_b, p.rate_c);
            while hull.len() >= 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                // Drop b when it lies on or below the chord a—q.
                let cross = (b.1 - a.1) * (q.0 - a.0) - (b.0 - a.0) * (q.1 - a.1);
                if cross >= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(q);
        }
        hull
    }

    /// CSV rendering: header `lambda,rate_b,rate_c`, nine decimal digits,
    /// rows ascending in rate_c. Byte-stable for identical frontiers.
    pub fn to_csv_string(&self) -> String {
        use std::fmt::Write;
        let mut out = String::from("lambda,rate_b,rate_c\n");
        for p in &self.points {
            writeln!(out, "{:.9},{:.9},{:.9}", p.lambda, p.rate_b, p.rate_c).expect("string write");
        }
        out
    }
}

/// Filter candidates to the nondominated set, sorted ascending in rate_c.
pub(crate) fn pareto_frontier(mut candidates: Vec<RatePoint>) -> Vec<RatePoint> {
    candidates.retain(|p| p.rate_b.is_finite() && p.rate_c.is_finite());
    candidates.sort_by(|a, b| {
        b.rate_c
            .partial_cmp(&a.rate_c)
            .expect("finite")
            .then(b.rate_b.partial_cmp(&a.rate_b).expect("finite"))
            .then(a.lambda.partial_cmp(&b.lambda).expect("finite"))
    });
    let mut kept: Vec<RatePoint> = Vec::new();
    let mut best_b = f64::NEG_INFINITY;
    for p in candidates {
        if p.rate_b > best_b + 1e-9 {
            // Points already kept at essentially the same rate_c are
            // dominated by this one (its rate_b is strictly larger).
            while kept
                .last()
                .is_some_and(|q: &RatePoint| q.rate_c - p.rate_c <= 1e-9)
            {
                kept.pop();
            }
            best_b = p.rate_b;
            kept.push(p);
        }
    }
    kept.reverse();
    kept
}

/// Number of reals the parameter vector must carry.
pub fn param_count(task: Task, d_a: usize, config: &OptimizationConfig) -> usize {
    match task {
        Task::Cc => config.num_w * config.num_z * (1 + 2 * d_a),
        Task::Cq | Task::Eac => config.num_w * (1 + 2 * d_a * d_a),
    }
}

/// Decode an unconstrained parameter vector into a valid ensemble:
/// probabilities through exponential normalization, states through plain
/// normalization of 2·dim reals (global phase is redundant but harmless).
pub fn decode_parameters(
    task: Task,
    d_a: usize,
    config: &OptimizationConfig,
    params: &[f64],
) -> Result<InputEnsemble> {
    let expected = param_count(task, d_a, config);
    if params.len() != expected {
        return Err(Error::InvalidParameters(format!(
            "got {} parameters, expected {expected}",
            params.len()
        )));
    }
    let (labels, state_dim) = match task {
        Task::Cc => (config.num_w * config.num_z, d_a),
        Task::Cq | Task::Eac => (config.num_w, d_a * d_a),
    };
    let logits = &params[..labels];
    let max_logit = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = logits.iter().map(|l| (l - max_logit).exp()).collect();
    let total: f64 = weights.iter().sum();

    let mut entries = Vec::with_capacity(labels);
    for e in 0..labels {
        let raw = &params[labels + e * 2 * state_dim..labels + (e + 1) * 2 * state_dim];
        let mut state: Vec<Complex64> = raw
            .chunks_exact(2)
            .map(|c| Complex64::new(c[0], c[1]))
            .collect();
        let norm = state.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-150 {
            for a in state.iter_mut() {
                *a /= norm;
            }
        } else {
            state[0] = Complex64::ONE;
            for a in state.iter_mut().skip(1) {
                *a = Complex64::ZERO;
            }
        }
        let (w, z) = match task {
            Task::Cc => (e / config.num_z, Some(e % config.num_z)),
            Task::Cq | Task::Eac => (e, None),
        };
        entries.push(EnsembleEntry {
            w,
            z,
            probability: weights[e] / total,
            state,
        });
    }
    Ok(InputEnsemble::new(task, entries))
}

/// λ·primary_rate + (1−λ)·charlie_rate_c of the decoded ensemble.
pub fn scalarized_objective(
    spec: &HadamardChannelSpec,
    task: Task,
    config: &OptimizationConfig,
    lambda: f64,
    params: &[f64],
) -> Result<f64> {
    let ensemble = decode_parameters(task, spec.d_a(), config, params)?;
    let triple = rates(spec, &ensemble)?;
    Ok(lambda * triple.primary_rate + (1.0 - lambda) * triple.charlie_rate_c)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent stream per (seed, λ-index, restart-index) cell.
fn cell_rng(seed: u64, lambda_idx: usize, restart_idx: usize) -> ChaCha8Rng {
    let mut s =
        splitmix64(seed.wrapping_add((lambda_idx as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)));
    s = splitmix64(s.wrapping_add((restart_idx as u64).wrapping_mul(0xD1B5_4A32_D192_ED03)));
    ChaCha8Rng::seed_from_u64(s)
}

/// Start point biased toward the structured ensembles that extreme points
/// tend to use, jittered so restarts stay distinct.
fn structured_start<R: Rng + ?Sized>(
    rng: &mut R,
    task: Task,
    d_a: usize,
    config: &OptimizationConfig,
    dim: usize,
) -> Vec<f64> {
    let mut x: Vec<f64> = (0..dim).map(|_| rng.random_range(-0.25..0.25)).collect();
    match task {
        Task::Cc => {
            let labels = config.num_w * config.num_z;
            for e in 0..labels {
                let w = e / config.num_z;
                let z = e % config.num_z;
                // Correlate W with the letter choice and point each z at a
                // basis direction.
                if z == w % config.num_z {
                    x[e] += 1.5;
                }
                let base = labels + e * 2 * d_a;
                x[base + 2 * ((z + w) % d_a)] += 1.5;
            }
        }
        Task::Cq | Task::Eac => {
            let labels = config.num_w;
            let amp = 1.5 / (d_a as f64).sqrt();
            for e in 0..labels {
                let base = labels + e * 2 * d_a * d_a;
                for i in 0..d_a {
                    x[base + 2 * (i * d_a + i)] += amp;
                }
            }
        }
    }
    x
}

/// Deterministic indexed map over `0..n`, optionally spread across threads.
/// The output only depends on `f`, never on the worker count.
fn run_indexed<T: Send, F: Fn(usize) -> T + Sync>(n: usize, workers: usize, f: F) -> Vec<T> {
    if workers <= 1 || n <= 1 || cfg!(target_family = "wasm") {
        return (0..n).map(f).collect();
    }
    let mut slots: Vec<Option<T>> = (0..n).map(|_| None).collect();
    let chunk = n.div_ceil(workers);
    std::thread::scope(|scope| {
        for (k, piece) in slots.chunks_mut(chunk).enumerate() {
            let f = &f;
            scope.spawn(move || {
                for (off, slot) in piece.iter_mut().enumerate() {
                    *slot = Some(f(k * chunk + off));
                }
            });
        }
    });
    slots.into_iter().map(|s| s.expect("filled")).collect()
}

/// Trace the frontier of the selected task's rate region.
///
/// Deterministic for fixed (spec, task, config); restarts and λ cells run
/// concurrently when `config.workers > 1`. Failed restarts are skipped —
/// the all-zero parameter vector always evaluates as a fallback.
pub fn optimize_frontier(
    spec: &HadamardChannelSpec,
    task: Task,
    config: &OptimizationConfig,
) -> Result<Frontier> {
    config.validate()?;
    if spec.d_a() > 4 {
        return Err(Error::SizeLimit(format!(
            "optimizer supports d_A <= 4, got {}",
            spec.d_a()
        )));
    }
    if spec.n_outcomes() * spec.d_c() > 64 {
        return Err(Error::SizeLimit(format!(
            "optimizer supports N·d_C <= 64, got {}",
            spec.n_outcomes() * spec.d_c()
        )));
    }

    let d_a = spec.d_a();
    let dim = param_count(task, d_a, config);
    let grid = config.lambda_grid;
    let lambdas: Vec<f64> = (0..grid).map(|j| j as f64 / (grid - 1) as f64).collect();

    let cells = grid * config.restarts;
    let results = run_indexed(cells, config.workers, |cell| {
        let j = cell / config.restarts;
        let r = cell % config.restarts;
        let lambda = lambdas[j];
        let mut rng = cell_rng(config.seed, j, r);
        // Odd restarts start near label-correlated basis-letter (cc) or
        // maximally entangled (cq/eac) ensembles; even ones are uniform.
        let x0 = if r % 2 == 1 {
            structured_start(&mut rng, task, d_a, config, dim)
        } else {
            (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect()
        };
        let objective = |x: &[f64]| {
            scalarized_objective(spec, task, config, lambda, x).unwrap_or(f64::NEG_INFINITY)
        };
        let found = nelder_mead::maximize(objective, &x0, 1.0, config.max_iters, config.obj_tol);
        (found.value, found.x)
    });

    let zero_params = vec![0.0f64; dim];
    let mut candidates = Vec::with_capacity(grid);
    for (j, &lambda) in lambdas.iter().enumerate() {
        let mut best_value = scalarized_objective(spec, task, config, lambda, &zero_params)
            .unwrap_or(f64::NEG_INFINITY);
        let mut best_x = &zero_params;
        for r in 0..config.restarts {
            let (value, x) = &results[j * config.restarts + r];
            if *value > best_value {
                best_value = *value;
                best_x = x;
            }
        }
        if !best_value.is_finite() {
            continue;
        }
        let ensemble = decode_parameters(task, d_a, config, best_x)?;
        let triple = rates(spec, &ensemble)?;
        let rate_b = match task {
            Task::Cq => triple.primary_rate.max(0.0),
            _ => triple.primary_rate,
        };
        candidates.push(RatePoint {
            rate_b,
            rate_c: triple.charlie_rate_c,
            lambda,
            achieving_ensemble: ensemble,
        });
    }
    Ok(Frontier::from_sorted(pareto_frontier(candidates)))
}
