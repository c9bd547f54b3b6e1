//! Entropic rate functionals for the three communication tasks.
//!
//! All rates are in bits per channel use (logarithms base 2). Quantities
//! conditioned on the classical labels are computed as probability-weighted
//! sums over labels rather than on block-diagonal joint operators, and the
//! per-label purity of the isometric channel output is used to trade
//! H(RB) for H(C).

use num_complex::Complex64;
use rand::Rng;

use crate::channel::{random_unit_vector, HadamardChannelSpec};
use crate::linalg::{
    hermitian_eigenvalues, pure_state_reduction, vec_norm, ComplexMatrix, SystemDims,
};
use crate::{Error, Result};

/// Eigenvalues this close to zero contribute 0·log 0 = 0.
const EIG_CLAMP: f64 = 1e-12;
/// Eigenvalues below this are treated as a broken state.
const EIG_NEG_TOL: f64 = 1e-9;

/// Communication task selecting which rate pair an ensemble targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    /// Classical messages to both receivers.
    Cc,
    /// Quantum to Bob, classical to Charlie.
    Cq,
    /// Entanglement-assisted classical to Bob, classical to Charlie.
    Eac,
}

impl Task {
    pub fn as_str(&self) -> &'static str {
        match self {
            Task::Cc => "cc",
            Task::Cq => "cq",
            Task::Eac => "eac",
        }
    }

    pub fn parse(s: &str) -> Option<Task> {
        match s {
            "cc" => Some(Task::Cc),
            "cq" => Some(Task::Cq),
            "eac" => Some(Task::Eac),
            _ => None,
        }
    }
}

/// One classical label with its probability and pure input state.
///
/// For `Cc` the state lives on A and carries a `z` label; for `Cq`/`Eac`
/// it lives on R ⊗ A (d_R = d_A) and has no `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleEntry {
    pub w: usize,
    pub z: Option<usize>,
    pub probability: f64,
    pub state: Vec<Complex64>,
}

/// Classical-label ensemble of pure input states.
#[derive(Debug, Clone, PartialEq)]
pub struct InputEnsemble {
    pub task: Task,
    pub entries: Vec<EnsembleEntry>,
}

impl InputEnsemble {
    pub fn new(task: Task, entries: Vec<EnsembleEntry>) -> Self {
        Self { task, entries }
    }

    /// Expected state length for one entry given the channel input dim.
    pub fn state_dim(task: Task, d_a: usize) -> usize {
        match task {
            Task::Cc => d_a,
            Task::Cq | Task::Eac => d_a * d_a,
        }
    }

    /// Check the ensemble invariants against a channel input dimension.
    pub fn validate(&self, d_a: usize) -> Result<()> {
        if self.entries.is_empty() {
            return Err(Error::InvalidEnsemble("ensemble has no entries".into()));
        }
        let want = Self::state_dim(self.task, d_a);
        let mut total = 0.0f64;
        for (i, e) in self.entries.iter().enumerate() {
            if e.probability < 0.0 {
                return Err(Error::InvalidEnsemble(format!(
                    "entry {i} has negative probability {}",
                    e.probability
                )));
            }
            total += e.probability;
            if e.state.len() != want {
                return Err(Error::InvalidEnsemble(format!(
                    "entry {i} state has length {}, expected {want}",
                    e.state.len()
                )));
            }
            let norm = vec_norm(&e.state);
            if (norm - 1.0).abs() > 1e-10 {
                return Err(Error::InvalidEnsemble(format!(
                    "entry {i} state norm {norm} is not 1"
                )));
            }
            match self.task {
                Task::Cc if e.z.is_none() => {
                    return Err(Error::InvalidEnsemble(format!(
                        "entry {i} is missing its z label (cc task)"
                    )));
                }
                Task::Cq | Task::Eac if e.z.is_some() => {
                    return Err(Error::InvalidEnsemble(format!(
                        "entry {i} carries a z label ({} task)",
                        self.task.as_str()
                    )));
                }
                _ => {}
            }
        }
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidEnsemble(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        Ok(())
    }

    /// Random `Cc` ensemble in which the state attached to a label depends
    /// only on z, shared across w.
    pub fn random_cc<R: Rng + ?Sized>(rng: &mut R, d_a: usize, num_w: usize, num_z: usize) -> Self {
        let states: Vec<Vec<Complex64>> =
            (0..num_z).map(|_| random_unit_vector(rng, d_a)).collect();
        let weights: Vec<f64> = (0..num_w * num_z)
            .map(|_| -(1.0 - rng.random::<f64>()).ln())
            .collect();
        let total: f64 = weights.iter().sum();
        let mut entries = Vec::with_capacity(num_w * num_z);
        for w in 0..num_w {
            for z in 0..num_z {
                entries.push(EnsembleEntry {
                    w,
                    z: Some(z),
                    probability: weights[w * num_z + z] / total,
                    state: states[z].clone(),
                });
            }
        }
        Self::new(Task::Cc, entries)
    }

    /// Random `Cq` or `Eac` ensemble of pure states on R ⊗ A.
    pub fn random_assisted<R: Rng + ?Sized>(
        rng: &mut R,
        task: Task,
        d_a: usize,
        num_w: usize,
    ) -> Self {
        assert!(matches!(task, Task::Cq | Task::Eac));
        let weights: Vec<f64> = (0..num_w)
            .map(|_| -(1.0 - rng.random::<f64>()).ln())
            .collect();
        let total: f64 = weights.iter().sum();
        let entries = (0..num_w)
            .map(|w| EnsembleEntry {
                w,
                z: None,
                probability: weights[w] / total,
                state: random_unit_vector(rng, d_a * d_a),
            })
            .collect();
        Self::new(task, entries)
    }
}

/// Rate values of one ensemble under one channel.
#[derive(Debug, Clone, PartialEq)]
pub struct RateTriple {
    /// I(Z;B|W) for cc, I(R⟩BW) for cq (may be negative), I(R;B|W) for eac.
    pub primary_rate: f64,
    /// I(W;C) — Charlie's rate bound.
    pub charlie_rate_c: f64,
    /// I(W;B) — diagnostic; dominates charlie_rate_c by degradability.
    pub charlie_rate_b: f64,
    /// I(Z;B) — diagnostic, cc only.
    pub sum_rate: Option<f64>,
}

/// Von Neumann entropy −Σ λ log₂ λ in bits. Zero for pure states.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-8 || tr.im.abs() > 1e-8 {
        return Err(Error::InvalidState(format!(
            "trace is {:.10}+{:.3e}i, expected 1",
            tr.re, tr.im
        )));
    }
    let eigs = hermitian_eigenvalues(rho).map_err(|e| match e {
        Error::NotHermitian { residual } => {
            Error::InvalidState(format!("not Hermitian (residual {residual:.3e})"))
        }
        other => other,
    })?;
    entropy_of_spectrum(&eigs)
}

fn entropy_of_spectrum(eigs: &[f64]) -> Result<f64> {
    let mut h = 0.0f64;
    for &l in eigs {
        if l < -EIG_NEG_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {l:.3e}")));
        }
        if l > EIG_CLAMP {
            h -= l * l.log2();
        }
    }
    Ok(h.max(0.0))
}

/// Holevo information H(Σ p ρ) − Σ p H(ρ) of a labelled state family.
pub fn holevo_information(probabilities: &[f64], states: &[ComplexMatrix]) -> Result<f64> {
    if probabilities.len() != states.len() || states.is_empty() {
        return Err(Error::InvalidEnsemble(format!(
            "{} probabilities for {} states",
            probabilities.len(),
            states.len()
        )));
    }
    let dim = states[0].rows();
    if states.iter().any(|s| !s.is_square() || s.rows() != dim) {
        return Err(Error::InvalidDims("states have mixed dimensions".into()));
    }
    let total: f64 = probabilities.iter().sum();
    if probabilities.iter().any(|&p| p < 0.0) || (total - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidEnsemble(format!(
            "not a probability distribution (sum {total})"
        )));
    }
    let mut avg = ComplexMatrix::zeros(dim, dim);
    let mut conditional = 0.0f64;
    for (&p, rho) in probabilities.iter().zip(states) {
        if p == 0.0 {
            continue;
        }
        avg = avg.add(&rho.scale(Complex64::new(p, 0.0)));
        conditional += p * von_neumann_entropy(rho)?;
    }
    Ok(von_neumann_entropy(&avg)? - conditional)
}

/// Entropy, skipping the trace precondition (internal averages are exact).
fn entropy_unchecked(rho: &ComplexMatrix) -> Result<f64> {
    entropy_of_spectrum(&hermitian_eigenvalues(rho)?)
}

/// Weighted average of a family of equal-sized matrices.
fn average(weights: &[f64], states: &[ComplexMatrix]) -> ComplexMatrix {
    let dim = states[0].rows();
    let mut avg = ComplexMatrix::zeros(dim, dim);
    for (&p, rho) in weights.iter().zip(states) {
        if p != 0.0 {
            avg = avg.add(&rho.scale(Complex64::new(p, 0.0)));
        }
    }
    avg
}

/// Group entry indices by a label function, skipping zero-probability groups.
fn group_by<F: Fn(&EnsembleEntry) -> usize>(
    entries: &[EnsembleEntry],
    label: F,
) -> Vec<(f64, Vec<usize>)> {
    let mut groups: Vec<(usize, f64, Vec<usize>)> = Vec::new();
    for (i, e) in entries.iter().enumerate() {
        let l = label(e);
        match groups.iter_mut().find(|(gl, _, _)| *gl == l) {
            Some((_, p, idx)) => {
                *p += e.probability;
                idx.push(i);
            }
            None => groups.push((l, e.probability, vec![i])),
        }
    }
    groups
        .into_iter()
        .filter(|(_, p, _)| *p > 0.0)
        .map(|(_, p, idx)| (p, idx))
        .collect()
}

/// Rates of a classical-classical ensemble: I(Z;B|W), I(W;C), and the
/// diagnostics I(W;B) and I(Z;B).
pub fn cc_rates(spec: &HadamardChannelSpec, ensemble: &InputEnsemble) -> Result<RateTriple> {
    if ensemble.task != Task::Cc {
        return Err(Error::InvalidEnsemble(format!(
            "cc rates need a cc ensemble, got {}",
            ensemble.task.as_str()
        )));
    }
    ensemble.validate(spec.d_a())?;

    let bob: Vec<ComplexMatrix> = ensemble
        .entries
        .iter()
        .map(|e| spec.bob_output_pure(&e.state))
        .collect();
    let charlie: Vec<ComplexMatrix> = ensemble
        .entries
        .iter()
        .map(|e| spec.charlie_output_pure(&e.state))
        .collect();
    let entry_bob_entropy: Vec<f64> = bob.iter().map(entropy_unchecked).collect::<Result<_>>()?;

    let w_groups = group_by(&ensemble.entries, |e| e.w);
    let mut primary = 0.0f64;
    let mut w_probs = Vec::with_capacity(w_groups.len());
    let mut w_bob = Vec::with_capacity(w_groups.len());
    let mut w_charlie = Vec::with_capacity(w_groups.len());
    for (p_w, idx) in &w_groups {
        let cond: Vec<f64> = idx
            .iter()
            .map(|&i| ensemble.entries[i].probability / p_w)
            .collect();
        let bob_states: Vec<ComplexMatrix> = idx.iter().map(|&i| bob[i].clone()).collect();
        let rho_bw = average(&cond, &bob_states);
        let inner: f64 = idx
            .iter()
            .zip(&cond)
            .map(|(&i, &pc)| pc * entry_bob_entropy[i])
            .sum();
        primary += p_w * (entropy_unchecked(&rho_bw)? - inner);
        let charlie_states: Vec<ComplexMatrix> = idx.iter().map(|&i| charlie[i].clone()).collect();
        w_probs.push(*p_w);
        w_bob.push(rho_bw);
        w_charlie.push(average(&cond, &charlie_states));
    }

    let avg_bob = average(&w_probs, &w_bob);
    let avg_charlie = average(&w_probs, &w_charlie);
    let mut charlie_rate_b = entropy_unchecked(&avg_bob)?;
    let mut charlie_rate_c = entropy_unchecked(&avg_charlie)?;
    for ((&p, rb), rc) in w_probs.iter().zip(&w_bob).zip(&w_charlie) {
        charlie_rate_b -= p * entropy_unchecked(rb)?;
        charlie_rate_c -= p * entropy_unchecked(rc)?;
    }

    // I(Z;B) over the z-marginal ensemble.
    let z_groups = group_by(&ensemble.entries, |e| e.z.expect("validated cc entry"));
    let mut sum_rate = entropy_unchecked(&avg_bob)?;
    for (p_z, idx) in &z_groups {
        let cond: Vec<f64> = idx
            .iter()
            .map(|&i| ensemble.entries[i].probability / p_z)
            .collect();
        let bob_states: Vec<ComplexMatrix> = idx.iter().map(|&i| bob[i].clone()).collect();
        sum_rate -= p_z * entropy_unchecked(&average(&cond, &bob_states))?;
    }

    Ok(RateTriple {
        primary_rate: primary,
        charlie_rate_c,
        charlie_rate_b,
        sum_rate: Some(sum_rate),
    })
}

/// Per-label reduced states of an assisted (cq/eac) ensemble on R, B, C.
fn assisted_reductions(
    spec: &HadamardChannelSpec,
    ensemble: &InputEnsemble,
) -> Result<Vec<(f64, ComplexMatrix, ComplexMatrix, ComplexMatrix)>> {
    let d_r = spec.d_a();
    let dims = SystemDims::new(vec![d_r, spec.n_outcomes(), spec.d_c()])?;
    ensemble
        .entries
        .iter()
        .filter(|e| e.probability > 0.0)
        .map(|e| {
            let amps = spec.apply_isometry_bipartite(&e.state, d_r)?;
            let rho_r = pure_state_reduction(&amps, &dims, &[0])?;
            let rho_b = pure_state_reduction(&amps, &dims, &[1])?;
            let rho_c = pure_state_reduction(&amps, &dims, &[2])?;
            Ok((e.probability, rho_r, rho_b, rho_c))
        })
        .collect()
}

fn assisted_rates(
    spec: &HadamardChannelSpec,
    ensemble: &InputEnsemble,
    with_reference: bool,
) -> Result<RateTriple> {
    ensemble.validate(spec.d_a())?;
    let reduced = assisted_reductions(spec, ensemble)?;

    let mut primary = 0.0f64;
    let mut probs = Vec::with_capacity(reduced.len());
    let mut bob = Vec::with_capacity(reduced.len());
    let mut charlie = Vec::with_capacity(reduced.len());
    for (p, rho_r, rho_b, rho_c) in &reduced {
        // H(RB) = H(C) per label: the isometric output is pure given w.
        let mut term = entropy_unchecked(rho_b)? - entropy_unchecked(rho_c)?;
        if with_reference {
            term += entropy_unchecked(rho_r)?;
        }
        primary += p * term;
        probs.push(*p);
        bob.push(rho_b.clone());
        charlie.push(rho_c.clone());
    }

    let mut charlie_rate_b = entropy_unchecked(&average(&probs, &bob))?;
    let mut charlie_rate_c = entropy_unchecked(&average(&probs, &charlie))?;
    for ((&p, rb), rc) in probs.iter().zip(&bob).zip(&charlie) {
        charlie_rate_b -= p * entropy_unchecked(rb)?;
        charlie_rate_c -= p * entropy_unchecked(rc)?;
    }

    Ok(RateTriple {
        primary_rate: primary,
        charlie_rate_c,
        charlie_rate_b,
        sum_rate: None,
    })
}

/// Rates of a classical-quantum ensemble: I(R⟩BW) (may be negative) and
/// Charlie's bounds.
pub fn cq_rates(spec: &HadamardChannelSpec, ensemble: &InputEnsemble) -> Result<RateTriple> {
    if ensemble.task != Task::Cq {
        return Err(Error::InvalidEnsemble(format!(
            "cq rates need a cq ensemble, got {}",
            ensemble.task.as_str()
        )));
    }
    assisted_rates(spec, ensemble, false)
}

/// Rates of an entanglement-assisted ensemble: I(R;B|W) and Charlie's bounds.
pub fn eac_rates(spec: &HadamardChannelSpec, ensemble: &InputEnsemble) -> Result<RateTriple> {
    if ensemble.task != Task::Eac {
        return Err(Error::InvalidEnsemble(format!(
            "eac rates need an eac ensemble, got {}",
            ensemble.task.as_str()
        )));
    }
    assisted_rates(spec, ensemble, true)
}

/// Dispatch on the ensemble's task.
pub fn rates(spec: &HadamardChannelSpec, ensemble: &InputEnsemble) -> Result<RateTriple> {
    match ensemble.task {
        Task::Cc => cc_rates(spec, ensemble),
        Task::Cq => cq_rates(spec, ensemble),
        Task::Eac => eac_rates(spec, ensemble),
    }
}
