//! Brute-force classical reference for channels whose POVM and prepared
//! states embed a classical broadcast channel.
//!
//! A spec is classically embedded when every POVM vector is (up to phase)
//! a nonnegative multiple of a member of one orthonormal basis and every
//! prepared state is (up to phase) a computational basis vector. Both
//! reduced channels are then classical stochastic maps on the basis
//! letters, and the rate region can be swept by an exhaustive grid over
//! the auxiliary and input distributions using Shannon quantities only.
//! This path shares no entropy code with the quantum rate evaluation
//! beyond the scalar entropy formula.

use num_complex::Complex64;

use crate::channel::HadamardChannelSpec;
use crate::entropic::{EnsembleEntry, InputEnsemble, Task};
use crate::linalg::{vec_inner, vec_norm};
use crate::region::{pareto_frontier, Frontier, RatePoint};
use crate::{Error, Result};

const PARALLEL_TOL: f64 = 1e-9;
/// Cap on grid combinations before the per-letter grids are coarsened.
const COMBINATION_BUDGET: usize = 20_000_000;

/// Classical stochastic maps extracted from an embedded spec.
#[derive(Debug, Clone)]
pub(crate) struct ClassicalEmbedding {
    /// Input letters: one representative unit vector per parallel class.
    pub letters: Vec<Vec<Complex64>>,
    /// p(y_b = x | input letter i), indexed [i][x].
    pub bob: Vec<Vec<f64>>,
    /// p(y_c | input letter i), indexed [i][y_c].
    pub charlie: Vec<Vec<f64>>,
}

/// True when both reduced channels act as classical stochastic maps on a
/// common orthonormal input basis.
pub fn is_classical_embedded(spec: &HadamardChannelSpec) -> bool {
    embedding(spec).is_ok()
}

pub(crate) fn embedding(spec: &HadamardChannelSpec) -> Result<ClassicalEmbedding> {
    let d_a = spec.d_a();
    let d_c = spec.d_c();
    let n = spec.n_outcomes();

    // Each prepared state must be a basis vector up to phase.
    let mut charlie_letter = Vec::with_capacity(n);
    for (x, psi) in spec.output_states().iter().enumerate() {
        let (best, mag) = psi
            .iter()
            .enumerate()
            .map(|(c, a)| (c, a.norm()))
            .max_by(|a, b| a.1.partial_cmp(&b.1).expect("finite"))
            .expect("non-empty state");
        let off = psi
            .iter()
            .enumerate()
            .filter(|(c, _)| *c != best)
            .map(|(_, a)| a.norm())
            .fold(0.0f64, f64::max);
        if (mag - 1.0).abs() > PARALLEL_TOL || off > PARALLEL_TOL {
            return Err(Error::NotClassical(format!(
                "output state {x} is not a basis vector up to phase"
            )));
        }
        charlie_letter.push(best);
    }

    // Group POVM vectors into mutually orthogonal parallel classes.
    let norms: Vec<f64> = spec.povm_vectors().iter().map(|v| vec_norm(v)).collect();
    let mut classes: Vec<(Vec<Complex64>, Vec<usize>)> = Vec::new();
    for (x, phi) in spec.povm_vectors().iter().enumerate() {
        if norms[x] <= PARALLEL_TOL {
            continue; // outcome never fires
        }
        let unit: Vec<Complex64> = phi.iter().map(|a| a / norms[x]).collect();
        let mut assigned = false;
        for (rep, members) in classes.iter_mut() {
            let overlap = vec_inner(rep, &unit).norm();
            if overlap >= 1.0 - PARALLEL_TOL {
                members.push(x);
                assigned = true;
                break;
            } else if overlap > PARALLEL_TOL {
                return Err(Error::NotClassical(format!(
                    "POVM vectors are neither parallel nor orthogonal (overlap {overlap:.3e})"
                )));
            }
        }
        if !assigned {
            classes.push((unit, vec![x]));
        }
    }
    if classes.len() != d_a {
        return Err(Error::NotClassical(format!(
            "{} orthogonal POVM directions for input dimension {d_a}",
            classes.len()
        )));
    }

    let mut letters = Vec::with_capacity(d_a);
    let mut bob = vec![vec![0.0; n]; d_a];
    let mut charlie = vec![vec![0.0; d_c]; d_a];
    for (i, (rep, members)) in classes.into_iter().enumerate() {
        for &x in &members {
            let weight = norms[x] * norms[x];
            bob[i][x] = weight;
            charlie[i][charlie_letter[x]] += weight;
        }
        letters.push(rep);
    }
    Ok(ClassicalEmbedding {
        letters,
        bob,
        charlie,
    })
}

fn shannon_entropy(p: &[f64]) -> f64 {
    let mut h = 0.0;
    for &q in p {
        if q > 1e-15 {
            h -= q * q.log2();
        }
    }
    h
}

/// All length-`parts` probability vectors with entries k/grid.
fn simplex_grid(parts: usize, grid: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let mut current = vec![0usize; parts];
    fn recurse(
        slot: usize,
        remaining: usize,
        current: &mut Vec<usize>,
        grid: usize,
        out: &mut Vec<Vec<f64>>,
    ) {
        if slot + 1 == current.len() {
            current[slot] = remaining;
            out.push(current.iter().map(|&k| k as f64 / grid as f64).collect());
            return;
        }
        for k in 0..=remaining {
            current[slot] = k;
            recurse(slot + 1, remaining - k, current, grid, out);
        }
    }
    recurse(0, grid, &mut current, grid, &mut out);
    out
}

/// Exhaustive grid sweep of the classical rate region of an embedded spec.
///
/// The auxiliary alphabet has d_A + 1 letters; the per-letter input layer
/// uses the deterministic basis letters with a gridded conditional
/// distribution. Returns the nondominated grid points, each with a `Cc`
/// ensemble achieving it (lambda is the sentinel -1).
pub fn classical_oracle_frontier(spec: &HadamardChannelSpec, grid: usize) -> Result<Frontier> {
    if grid < 1 {
        return Err(Error::InvalidParameters(
            "grid resolution must be >= 1".into(),
        ));
    }
    let emb = embedding(spec)?;
    let d_a = spec.d_a();
    if d_a > 3 {
        return Err(Error::SizeLimit(format!(
            "classical oracle supports d_A <= 3, got {d_a}"
        )));
    }
    let num_w = d_a + 1;
    let w_grid = simplex_grid(num_w, grid);

    // Coarsen the per-letter input grids if the sweep would explode.
    let mut letter_grid = grid;
    let mut x_grid = simplex_grid(d_a, letter_grid);
    while w_grid.len() * x_grid.len().pow(num_w as u32) > COMBINATION_BUDGET && letter_grid > 1 {
        letter_grid -= 1;
        x_grid = simplex_grid(d_a, letter_grid);
    }

    // Per input distribution: Bob's mutual information and Charlie's
    // output distribution with its entropy.
    let per_dist: Vec<(f64, Vec<f64>, f64)> = x_grid
        .iter()
        .map(|px| {
            let mut y_b = vec![0.0; emb.bob[0].len()];
            let mut h_b_given_x = 0.0;
            for (i, &p) in px.iter().enumerate() {
                if p == 0.0 {
                    continue;
                }
                for (x, &q) in emb.bob[i].iter().enumerate() {
                    y_b[x] += p * q;
                }
                h_b_given_x += p * shannon_entropy(&emb.bob[i]);
            }
            let info_b = shannon_entropy(&y_b) - h_b_given_x;
            let mut y_c = vec![0.0; emb.charlie[0].len()];
            for (i, &p) in px.iter().enumerate() {
                if p == 0.0 {
                    continue;
                }
                for (y, &q) in emb.charlie[i].iter().enumerate() {
                    y_c[y] += p * q;
                }
            }
            let h_c = shannon_entropy(&y_c);
            (info_b, y_c, h_c)
        })
        .collect();

    let d_c = emb.charlie[0].len();
    let mut candidates: Vec<(f64, f64, usize, Vec<usize>)> = Vec::new();
    let mut assignment = vec![0usize; num_w];
    for (wi, pw) in w_grid.iter().enumerate() {
        assignment.iter_mut().for_each(|a| *a = 0);
        loop {
            let mut rate_b = 0.0;
            let mut mixed_c = vec![0.0; d_c];
            let mut h_c_given_w = 0.0;
            for (w, &di) in assignment.iter().enumerate() {
                let p = pw[w];
                if p == 0.0 {
                    continue;
                }
                let (info_b, y_c, h_c) = &per_dist[di];
                rate_b += p * info_b;
                for (y, &q) in y_c.iter().enumerate() {
                    mixed_c[y] += p * q;
                }
                h_c_given_w += p * h_c;
            }
            let rate_c = shannon_entropy(&mixed_c) - h_c_given_w;
            candidates.push((rate_b, rate_c, wi, assignment.clone()));

            // advance the mixed-radix assignment counter
            let mut slot = 0;
            loop {
                if slot == num_w {
                    break;
                }
                assignment[slot] += 1;
                if assignment[slot] < per_dist.len() {
                    break;
                }
                assignment[slot] = 0;
                slot += 1;
            }
            if slot == num_w {
                break;
            }
        }
    }

    // Keep only nondominated candidates, then materialize their ensembles.
    let slim: Vec<RatePoint> = candidates
        .iter()
        .enumerate()
        .map(|(k, &(rb, rc, _, _))| RatePoint {
            rate_b: rb,
            rate_c: rc,
            lambda: -1.0,
            achieving_ensemble: placeholder_ensemble(k),
        })
        .collect();
    let surviving = pareto_frontier(slim);
    let points = surviving
        .into_iter()
        .map(|p| {
            let k = p.achieving_ensemble.entries[0].w;
            let (_, _, wi, ref assignment) = candidates[k];
            RatePoint {
                rate_b: p.rate_b,
                rate_c: p.rate_c,
                lambda: -1.0,
                achieving_ensemble: build_ensemble(&emb, &w_grid[wi], assignment, &x_grid),
            }
        })
        .collect();
    Ok(Frontier::from_sorted(points))
}

/// Stand-in carrying a candidate index through the Pareto filter.
fn placeholder_ensemble(index: usize) -> InputEnsemble {
    InputEnsemble::new(
        Task::Cc,
        vec![EnsembleEntry {
            w: index,
            z: Some(0),
            probability: 1.0,
            state: vec![Complex64::ONE],
        }],
    )
}

fn build_ensemble(
    emb: &ClassicalEmbedding,
    pw: &[f64],
    assignment: &[usize],
    x_grid: &[Vec<f64>],
) -> InputEnsemble {
    let mut entries = Vec::new();
    for (w, &di) in assignment.iter().enumerate() {
        if pw[w] == 0.0 {
            continue;
        }
        for (i, &p) in x_grid[di].iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            entries.push(EnsembleEntry {
                w,
                z: Some(i),
                probability: pw[w] * p,
                state: emb.letters[i].clone(),
            });
        }
    }
    InputEnsemble::new(Task::Cc, entries)
}
