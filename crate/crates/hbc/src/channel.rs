//! Hadamard broadcast channels: construction from a rank-one POVM and a set
//! of prepared states, application to inputs, reductions to each receiver,
//! and the measure-then-prepare degrading channel.
//!
//! The channel acts on an input σ_A as
//!
//! ```text
//! N(σ) = Σ_{x,y} ⟨φˣ|σ|φʸ⟩ |x⟩⟨y|_B ⊗ |ψˣ⟩⟨ψʸ|_C
//! ```
//!
//! where Σ_x |φˣ⟩⟨φˣ| = I. Bob's output dimension equals the POVM
//! cardinality even when the vectors are linearly dependent; the POVM
//! vectors are stored raw (possibly sub-normalized), never as projectors.

use num_complex::Complex64;
use rand::Rng;

use crate::linalg::{
    basis_vector, hermitian_eigenvalues, pure_state_reduction, sandwich, trace_distance, vec_inner,
    vec_norm, vec_outer, ComplexMatrix, SystemDims,
};
use crate::{Error, Result};

/// Completeness residual allowed on Σ|φˣ⟩⟨φˣ| − I.
pub const COMPLETENESS_TOL: f64 = 1e-9;
/// Allowed deviation of each prepared state from unit norm.
pub const STATE_NORM_TOL: f64 = 1e-10;
/// Choi-distance threshold for channel equality.
pub const CHANNEL_EQUALITY_TOL: f64 = 1e-10;
/// Most negative eigenvalue tolerated when checking positive semidefiniteness.
pub const PSD_TOL: f64 = 1e-9;

/// Defining data of a Hadamard broadcast channel.
#[derive(Debug, Clone, PartialEq)]
pub struct HadamardChannelSpec {
    d_a: usize,
    d_c: usize,
    povm_vectors: Vec<Vec<Complex64>>,
    output_states: Vec<Vec<Complex64>>,
}

/// Per-invariant outcome of [`HadamardChannelSpec::validate`].
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub d_a: usize,
    pub d_c: usize,
    pub n_outcomes: usize,
    /// max |(Σ φφ† − I)[i][j]| and the entry attaining it.
    pub completeness_residual: f64,
    pub worst_completeness_entry: (usize, usize),
    /// Norm of each prepared state.
    pub state_norms: Vec<f64>,
}

impl ValidationReport {
    pub fn completeness_ok(&self) -> bool {
        self.completeness_residual <= COMPLETENESS_TOL
    }

    pub fn state_norms_ok(&self) -> bool {
        self.state_norms
            .iter()
            .all(|n| (n - 1.0).abs() <= STATE_NORM_TOL)
    }

    pub fn passed(&self) -> bool {
        self.completeness_ok() && self.state_norms_ok()
    }

    /// Indices of prepared states whose norm is off, with the norms.
    pub fn bad_state_norms(&self) -> Vec<(usize, f64)> {
        self.state_norms
            .iter()
            .enumerate()
            .filter(|(_, n)| (*n - 1.0).abs() > STATE_NORM_TOL)
            .map(|(i, n)| (i, *n))
            .collect()
    }
}

/// Which channel a Choi matrix describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    ToBob,
    ToCharlie,
    /// prepare ∘ measure ∘ to_bob.
    Degraded,
}

/// Normalized Choi state of a channel (trace one).
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    pub matrix: ComplexMatrix,
    pub in_dim: usize,
    pub out_dim: usize,
}

impl HadamardChannelSpec {
    /// Build a spec from its POVM vectors and prepared states.
    ///
    /// Only structural consistency is enforced here (non-empty, matching
    /// lengths); numeric invariants are reported by [`Self::validate`].
    pub fn new(
        povm_vectors: Vec<Vec<Complex64>>,
        output_states: Vec<Vec<Complex64>>,
    ) -> Result<Self> {
        if povm_vectors.is_empty() {
            return Err(Error::InvalidSpec(
                "POVM must have at least one vector".into(),
            ));
        }
        if povm_vectors.len() != output_states.len() {
            return Err(Error::InvalidSpec(format!(
                "{} POVM vectors but {} output states",
                povm_vectors.len(),
                output_states.len()
            )));
        }
        let d_a = povm_vectors[0].len();
        let d_c = output_states[0].len();
        if d_a == 0 || d_c == 0 {
            return Err(Error::InvalidSpec("zero-dimensional system".into()));
        }
        if povm_vectors.iter().any(|v| v.len() != d_a) {
            return Err(Error::InvalidSpec("POVM vectors have mixed lengths".into()));
        }
        if output_states.iter().any(|v| v.len() != d_c) {
            return Err(Error::InvalidSpec(
                "output states have mixed lengths".into(),
            ));
        }
        Ok(Self {
            d_a,
            d_c,
            povm_vectors,
            output_states,
        })
    }

    /// Input dimension d_A.
    pub fn d_a(&self) -> usize {
        self.d_a
    }

    /// Charlie's output dimension d_C.
    pub fn d_c(&self) -> usize {
        self.d_c
    }

    /// Bob's output dimension: the POVM cardinality N.
    pub fn n_outcomes(&self) -> usize {
        self.povm_vectors.len()
    }

    pub fn povm_vectors(&self) -> &[Vec<Complex64>] {
        &self.povm_vectors
    }

    pub fn output_states(&self) -> &[Vec<Complex64>] {
        &self.output_states
    }

    /// Check the defining invariants and report each residual.
    pub fn validate(&self) -> ValidationReport {
        let n = self.d_a;
        let mut completeness = ComplexMatrix::zeros(n, n);
        for phi in &self.povm_vectors {
            completeness = completeness.add(&vec_outer(phi, phi));
        }
        let mut residual = 0.0f64;
        let mut worst = (0, 0);
        for i in 0..n {
            for j in 0..n {
                let target = if i == j {
                    Complex64::ONE
                } else {
                    Complex64::ZERO
                };
                let dev = (completeness.get(i, j) - target).norm();
                if dev > residual {
                    residual = dev;
                    worst = (i, j);
                }
            }
        }
        ValidationReport {
            d_a: self.d_a,
            d_c: self.d_c,
            n_outcomes: self.n_outcomes(),
            completeness_residual: residual,
            worst_completeness_entry: worst,
            state_norms: self.output_states.iter().map(|v| vec_norm(v)).collect(),
        }
    }

    /// Isometric extension W = Σ_x |x⟩_B ⊗ |ψˣ⟩_C ⟨φˣ|_A as an
    /// (N·d_C) × d_A matrix.
    pub fn isometry(&self) -> ComplexMatrix {
        let n = self.n_outcomes();
        let mut w = ComplexMatrix::zeros(n * self.d_c, self.d_a);
        for (x, (phi, psi)) in self
            .povm_vectors
            .iter()
            .zip(&self.output_states)
            .enumerate()
        {
            for (c, &psi_c) in psi.iter().enumerate() {
                for (a, &phi_a) in phi.iter().enumerate() {
                    w.set(x * self.d_c + c, a, psi_c * phi_a.conj());
                }
            }
        }
        w
    }

    /// max |(W†W − I)[i][j]| for the isometric extension.
    pub fn isometry_residual(&self) -> f64 {
        let w = self.isometry();
        let gram = w.adjoint().matmul(&w);
        gram.max_abs_diff(&ComplexMatrix::identity(self.d_a))
    }

    /// Apply the broadcast channel to a density matrix on A; the output
    /// lives on B ⊗ C with dims (N, d_C).
    pub fn apply_broadcast(&self, sigma: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_input_state(sigma)?;
        let n = self.n_outcomes();
        let side = n * self.d_c;
        let mut out = ComplexMatrix::zeros(side, side);
        for x in 0..n {
            for y in 0..n {
                let amp = sandwich(sigma, &self.povm_vectors[x], &self.povm_vectors[y]);
                if amp == Complex64::ZERO {
                    continue;
                }
                for (c, &pc) in self.output_states[x].iter().enumerate() {
                    for (cp, &pcp) in self.output_states[y].iter().enumerate() {
                        out.set(x * self.d_c + c, y * self.d_c + cp, amp * pc * pcp.conj());
                    }
                }
            }
        }
        Ok(out)
    }

    /// Isometric action on a pure input: |α⟩_A ↦ Σ_x ⟨φˣ|α⟩ |x⟩_B|ψˣ⟩_C.
    pub fn apply_isometry(&self, state_a: &[Complex64]) -> Result<Vec<Complex64>> {
        if state_a.len() != self.d_a {
            return Err(Error::InvalidDims(format!(
                "input state has length {}, expected {}",
                state_a.len(),
                self.d_a
            )));
        }
        let mut out = vec![Complex64::ZERO; self.n_outcomes() * self.d_c];
        for (x, (phi, psi)) in self
            .povm_vectors
            .iter()
            .zip(&self.output_states)
            .enumerate()
        {
            let amp = vec_inner(phi, state_a);
            for (c, &pc) in psi.iter().enumerate() {
                out[x * self.d_c + c] = amp * pc;
            }
        }
        Ok(out)
    }

    /// Isometric action on the A factor of a pure state on R ⊗ A, yielding
    /// a pure state on R ⊗ B ⊗ C with dims (d_R, N, d_C).
    pub fn apply_isometry_bipartite(
        &self,
        state_ra: &[Complex64],
        d_r: usize,
    ) -> Result<Vec<Complex64>> {
        if d_r == 0 || state_ra.len() != d_r * self.d_a {
            return Err(Error::InvalidDims(format!(
                "input state has length {}, expected d_R*d_A = {}",
                state_ra.len(),
                d_r * self.d_a
            )));
        }
        let n = self.n_outcomes();
        let mut out = vec![Complex64::ZERO; d_r * n * self.d_c];
        for r in 0..d_r {
            let block = &state_ra[r * self.d_a..(r + 1) * self.d_a];
            for (x, (phi, psi)) in self
                .povm_vectors
                .iter()
                .zip(&self.output_states)
                .enumerate()
            {
                let amp = vec_inner(phi, block);
                for (c, &pc) in psi.iter().enumerate() {
                    out[(r * n + x) * self.d_c + c] = amp * pc;
                }
            }
        }
        Ok(out)
    }

    /// Reduced channel to Bob: entries ⟨φˣ|σ|φʸ⟩⟨ψʸ|ψˣ⟩.
    pub fn reduce_to_bob(&self, sigma: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_input_state(sigma)?;
        Ok(self.bob_output_unchecked(sigma))
    }

    fn bob_output_unchecked(&self, sigma: &ComplexMatrix) -> ComplexMatrix {
        let n = self.n_outcomes();
        let mut out = ComplexMatrix::zeros(n, n);
        for x in 0..n {
            for y in 0..n {
                let overlap = vec_inner(&self.output_states[y], &self.output_states[x]);
                if overlap == Complex64::ZERO {
                    continue;
                }
                let amp = sandwich(sigma, &self.povm_vectors[x], &self.povm_vectors[y]);
                out.set(x, y, amp * overlap);
            }
        }
        out
    }

    /// Reduced channel to Charlie: measure the POVM, prepare |ψˣ⟩.
    pub fn reduce_to_charlie(&self, sigma: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_input_state(sigma)?;
        Ok(self.charlie_output_unchecked(sigma))
    }

    fn charlie_output_unchecked(&self, sigma: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.d_c, self.d_c);
        for (phi, psi) in self.povm_vectors.iter().zip(&self.output_states) {
            let p = sandwich(sigma, phi, phi).re;
            out = out.add(&vec_outer(psi, psi).scale(Complex64::new(p, 0.0)));
        }
        out
    }

    /// Measurement channel on Bob's system: dephase in the {|x⟩} basis.
    pub fn apply_measure(&self, rho_b: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.n_outcomes();
        if !rho_b.is_square() || rho_b.rows() != n {
            return Err(Error::InvalidDims(format!(
                "measurement expects a {n}x{n} matrix, got {}x{}",
                rho_b.rows(),
                rho_b.cols()
            )));
        }
        let mut out = ComplexMatrix::zeros(n, n);
        for x in 0..n {
            out.set(x, x, Complex64::new(rho_b.get(x, x).re, 0.0));
        }
        Ok(out)
    }

    /// Preparation channel: read the diagonal of ρ_Y and emit Σ_x ⟨x|ρ|x⟩ |ψˣ⟩⟨ψˣ|.
    pub fn apply_prepare(&self, rho_y: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.n_outcomes();
        if !rho_y.is_square() || rho_y.rows() != n {
            return Err(Error::InvalidDims(format!(
                "preparation expects a {n}x{n} matrix, got {}x{}",
                rho_y.rows(),
                rho_y.cols()
            )));
        }
        let mut off_diag = 0.0f64;
        for x in 0..n {
            for y in 0..n {
                if x != y {
                    off_diag = off_diag.max(rho_y.get(x, y).norm());
                }
            }
        }
        if off_diag > 1e-10 {
            return Err(Error::InvalidState(format!(
                "preparation input must be diagonal; max off-diagonal {off_diag:.3e}"
            )));
        }
        let mut out = ComplexMatrix::zeros(self.d_c, self.d_c);
        for (x, psi) in self.output_states.iter().enumerate() {
            let p = rho_y.get(x, x).re;
            out = out.add(&vec_outer(psi, psi).scale(Complex64::new(p, 0.0)));
        }
        Ok(out)
    }

    /// Normalized Choi state of the designated channel, obtained by sending
    /// half of the maximally entangled state on C^{d_A}⊗C^{d_A} through it.
    pub fn choi_of(&self, kind: ChannelKind) -> ChoiMatrix {
        let d = self.d_a;
        let n = self.n_outcomes();
        // (I ⊗ W)|Φ⟩ on reference ⊗ B ⊗ C.
        let scale = 1.0 / (d as f64).sqrt();
        let mut amps = vec![Complex64::ZERO; d * n * self.d_c];
        for i in 0..d {
            for (x, (phi, psi)) in self
                .povm_vectors
                .iter()
                .zip(&self.output_states)
                .enumerate()
            {
                let amp = phi[i].conj() * scale;
                for (c, &pc) in psi.iter().enumerate() {
                    amps[(i * n + x) * self.d_c + c] = amp * pc;
                }
            }
        }
        let dims = SystemDims::new(vec![d, n, self.d_c]).expect("positive dims");
        match kind {
            ChannelKind::ToBob => ChoiMatrix {
                matrix: pure_state_reduction(&amps, &dims, &[0, 1]).expect("consistent dims"),
                in_dim: d,
                out_dim: n,
            },
            ChannelKind::ToCharlie => ChoiMatrix {
                matrix: pure_state_reduction(&amps, &dims, &[0, 2]).expect("consistent dims"),
                in_dim: d,
                out_dim: self.d_c,
            },
            ChannelKind::Degraded => {
                let bob = pure_state_reduction(&amps, &dims, &[0, 1]).expect("consistent dims");
                ChoiMatrix {
                    matrix: degrade_second_factor(&bob, d, n, self.d_c, &self.output_states),
                    in_dim: d,
                    out_dim: self.d_c,
                }
            }
        }
    }

    /// Trace distance between the Choi states of the direct channel to
    /// Charlie and of prepare ∘ measure ∘ to_bob. Exactly zero (up to
    /// round-off) for every valid spec.
    pub fn verify_degradability(&self) -> Result<f64> {
        let direct = self.choi_of(ChannelKind::ToCharlie);
        let simulated = self.choi_of(ChannelKind::Degraded);
        trace_distance(&direct.matrix, &simulated.matrix)
    }

    /// Bob's output for a pure input vector, skipping the density check.
    pub(crate) fn bob_output_pure(&self, state_a: &[Complex64]) -> ComplexMatrix {
        let n = self.n_outcomes();
        let amps: Vec<Complex64> = self
            .povm_vectors
            .iter()
            .map(|phi| vec_inner(phi, state_a))
            .collect();
        let mut out = ComplexMatrix::zeros(n, n);
        for x in 0..n {
            for y in 0..n {
                let overlap = vec_inner(&self.output_states[y], &self.output_states[x]);
                out.set(x, y, amps[x] * amps[y].conj() * overlap);
            }
        }
        out
    }

    /// Charlie's output for a pure input vector, skipping the density check.
    pub(crate) fn charlie_output_pure(&self, state_a: &[Complex64]) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.d_c, self.d_c);
        for (phi, psi) in self.povm_vectors.iter().zip(&self.output_states) {
            let p = vec_inner(phi, state_a).norm_sqr();
            if p == 0.0 {
                continue;
            }
            out = out.add(&vec_outer(psi, psi).scale(Complex64::new(p, 0.0)));
        }
        out
    }

    /// Random valid spec: POVM vectors from a Haar-ish random isometry,
    /// prepared states uniformly random unit vectors. Needs n ≥ d_a.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, d_a: usize, n: usize, d_c: usize) -> Self {
        assert!(n >= d_a, "completeness needs at least d_a POVM vectors");
        // Columns of an n×d_a Gaussian matrix, orthonormalized; row x,
        // conjugated, is ⟨φˣ| so that Σ|φˣ⟩⟨φˣ| = I.
        let mut cols: Vec<Vec<Complex64>> = (0..d_a)
            .map(|_| (0..n).map(|_| gaussian_complex(rng)).collect())
            .collect();
        orthonormalize(&mut cols);
        orthonormalize(&mut cols);
        let povm_vectors: Vec<Vec<Complex64>> = (0..n)
            .map(|x| (0..d_a).map(|i| cols[i][x].conj()).collect())
            .collect();
        let output_states = (0..n).map(|_| random_unit_vector(rng, d_c)).collect();
        Self {
            d_a,
            d_c,
            povm_vectors,
            output_states,
        }
    }

    fn check_input_state(&self, sigma: &ComplexMatrix) -> Result<()> {
        if !sigma.is_square() || sigma.rows() != self.d_a {
            return Err(Error::InvalidDims(format!(
                "input state is {}x{}, channel expects {}x{}",
                sigma.rows(),
                sigma.cols(),
                self.d_a,
                self.d_a
            )));
        }
        check_density_matrix(sigma)
    }
}

/// Hermitian within tolerance, PSD within eigenvalue tolerance, unit trace.
pub fn check_density_matrix(rho: &ComplexMatrix) -> Result<()> {
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
        return Err(Error::InvalidState(format!(
            "trace is {:.12}+{:.3e}i, expected 1",
            tr.re, tr.im
        )));
    }
    let eigs = hermitian_eigenvalues(rho)?;
    if let Some(min) = eigs.first() {
        if *min < -PSD_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
    }
    Ok(())
}

/// Apply measure-then-prepare to the second factor of a bipartite operator
/// on A ⊗ B, producing an operator on A ⊗ C'.
fn degrade_second_factor(
    rho_ab: &ComplexMatrix,
    d_a: usize,
    n: usize,
    d_c: usize,
    prepare_states: &[Vec<Complex64>],
) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(d_a * d_c, d_a * d_c);
    for i in 0..d_a {
        for j in 0..d_a {
            for (x, psi) in prepare_states.iter().enumerate() {
                let v = rho_ab.get(i * n + x, j * n + x);
                if v == Complex64::ZERO {
                    continue;
                }
                for (c, &pc) in psi.iter().enumerate() {
                    for (cp, &pcp) in psi.iter().enumerate() {
                        let cur = out.get(i * d_c + c, j * d_c + cp);
                        out.set(i * d_c + c, j * d_c + cp, cur + v * pc * pcp.conj());
                    }
                }
            }
        }
    }
    out
}

pub(crate) fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub(crate) fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(gaussian(rng), gaussian(rng))
}

/// Uniformly random unit vector on C^dim.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..dim).map(|_| gaussian_complex(rng)).collect();
        let norm = vec_norm(&v);
        if norm > 1e-6 {
            return v.iter().map(|x| x / norm).collect();
        }
    }
}

/// Modified Gram-Schmidt over a set of vectors, in place.
fn orthonormalize(cols: &mut [Vec<Complex64>]) {
    for k in 0..cols.len() {
        for j in 0..k {
            let proj = vec_inner(&cols[j], &cols[k]);
            let prev = cols[j].clone();
            for (t, p) in cols[k].iter_mut().zip(prev) {
                *t -= proj * p;
            }
        }
        let norm = vec_norm(&cols[k]);
        assert!(norm > 1e-9, "degenerate random matrix");
        for t in cols[k].iter_mut() {
            *t /= norm;
        }
    }
}

/// Computational-basis POVM vectors for dimension d.
pub fn basis_povm(d: usize) -> Vec<Vec<Complex64>> {
    (0..d).map(|i| basis_vector(d, i)).collect()
}
