//! Dense complex-matrix kernel: products, tensor products, partial traces,
//! and Hermitian eigendecomposition.
//!
//! Everything here is sized for desk-scale problems (sides well under ~100);
//! matrices are dense row-major `Vec<Complex64>` with no sparse path.

pub use num_complex::Complex64;

use crate::{Error, Result};

/// Tolerance below which a matrix counts as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-10;

const MAX_JACOBI_SWEEPS: usize = 60;

/// Dense complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Create a matrix from row-major entries.
    ///
    /// Panics if `entries.len() != rows * cols`.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::ONE);
        }
        m
    }

    /// Diagonal matrix from real values.
    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, Complex64::new(d, 0.0));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.cols + col] = value;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must match");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == Complex64::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + aik * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Self::new(self.rows, self.cols, entries)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Self::new(self.rows, self.cols, entries)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let entries = self.entries.iter().map(|e| e * factor).collect();
        Self::new(self.rows, self.cols, entries)
    }

    /// Largest entrywise deviation from Hermitian symmetry.
    pub fn hermiticity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in 0..=i {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    /// (A + A†)/2, absorbing round-off before eigendecomposition.
    pub fn symmetrized(&self) -> Self {
        assert!(self.is_square());
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.rows {
                let v = (self.get(i, j) + self.get(j, i).conj()) * 0.5;
                out.set(i, j, v);
            }
        }
        out
    }

    /// max |a_ij - b_ij| over all entries.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Ordered subsystem dimensions annotating a tensor-product matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemDims(Vec<usize>);

impl SystemDims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidDims(
                "subsystem dimensions must be positive".into(),
            ));
        }
        Ok(Self(dims))
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }
}

/// Kronecker product a ⊗ b. Factor `a` is the most significant index.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows() * b.rows();
    let cols = a.cols() * b.cols();
    let mut out = ComplexMatrix::zeros(rows, cols);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let aij = a.get(i, j);
            if aij == Complex64::ZERO {
                continue;
            }
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    out.set(i * b.rows() + k, j * b.cols() + l, aij * b.get(k, l));
                }
            }
        }
    }
    out
}

/// ⟨a|b⟩ with the conjugation on the left argument.
pub fn vec_inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vec_norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// |a⟩⟨b| as a matrix.
pub fn vec_outer(a: &[Complex64], b: &[Complex64]) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.len(), b.len());
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out.set(i, j, ai * bj.conj());
        }
    }
    out
}

/// |a⟩ ⊗ |b⟩.
pub fn vec_kron(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &ai in a {
        for &bj in b {
            out.push(ai * bj);
        }
    }
    out
}

/// ⟨x| m |y⟩.
pub fn sandwich(m: &ComplexMatrix, x: &[Complex64], y: &[Complex64]) -> Complex64 {
    assert_eq!(m.rows(), x.len());
    assert_eq!(m.cols(), y.len());
    let mut acc = Complex64::ZERO;
    for (i, &xi) in x.iter().enumerate() {
        let mut row = Complex64::ZERO;
        for (j, &yj) in y.iter().enumerate() {
            row += m.get(i, j) * yj;
        }
        acc += xi.conj() * row;
    }
    acc
}

/// Computational basis vector |index⟩ in dimension `dim`.
pub fn basis_vector(dim: usize, index: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::ZERO; dim];
    v[index] = Complex64::ONE;
    v
}

/// Offsets of every multi-index combination of the chosen factors, holding
/// the other factors at zero. Used to walk tensor-product indices.
fn factor_offsets(dims: &[usize], chosen: &[usize]) -> Vec<usize> {
    let mut strides = vec![1usize; dims.len()];
    for f in (0..dims.len().saturating_sub(1)).rev() {
        strides[f] = strides[f + 1] * dims[f + 1];
    }
    let mut offsets = vec![0usize];
    for &f in chosen {
        let mut next = Vec::with_capacity(offsets.len() * dims[f]);
        for &base in &offsets {
            for v in 0..dims[f] {
                next.push(base + v * strides[f]);
            }
        }
        offsets = next;
    }
    offsets
}

/// Partial trace of `rho` over the factors *not* listed in `keep`.
///
/// `keep` holds factor indices into `dims`; the reduced operator keeps those
/// factors in their original order.
pub fn partial_trace(
    rho: &ComplexMatrix,
    dims: &SystemDims,
    keep: &[usize],
) -> Result<ComplexMatrix> {
    if !rho.is_square() || rho.rows() != dims.total() {
        return Err(Error::InvalidDims(format!(
            "matrix side {} does not match factor dimensions {:?}",
            rho.rows(),
            dims.dims()
        )));
    }
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.iter().any(|&f| f >= dims.len()) {
        return Err(Error::InvalidDims(format!(
            "keep set {:?} exceeds factor count {}",
            keep,
            dims.len()
        )));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|f| !keep.contains(f)).collect();
    let keep_offsets = factor_offsets(dims.dims(), &keep);
    let trace_offsets = factor_offsets(dims.dims(), &traced);
    let m = keep_offsets.len();
    let side = rho.rows();

    let mut out = ComplexMatrix::zeros(m, m);
    for (i, &oi) in keep_offsets.iter().enumerate() {
        for (j, &oj) in keep_offsets.iter().enumerate() {
            let mut acc = Complex64::ZERO;
            for &ot in &trace_offsets {
                acc += rho.entries[(oi + ot) * side + (oj + ot)];
            }
            out.set(i, j, acc);
        }
    }
    Ok(out)
}

/// Reduced density matrix of the pure state `amps` on the kept factors,
/// computed without materializing the full outer product.
pub fn pure_state_reduction(
    amps: &[Complex64],
    dims: &SystemDims,
    keep: &[usize],
) -> Result<ComplexMatrix> {
    if amps.len() != dims.total() {
        return Err(Error::InvalidDims(format!(
            "state length {} does not match factor dimensions {:?}",
            amps.len(),
            dims.dims()
        )));
    }
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.iter().any(|&f| f >= dims.len()) {
        return Err(Error::InvalidDims(format!(
            "keep set {:?} exceeds factor count {}",
            keep,
            dims.len()
        )));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|f| !keep.contains(f)).collect();
    let keep_offsets = factor_offsets(dims.dims(), &keep);
    let trace_offsets = factor_offsets(dims.dims(), &traced);
    let m = keep_offsets.len();

    let mut out = ComplexMatrix::zeros(m, m);
    for (i, &oi) in keep_offsets.iter().enumerate() {
        for (j, &oj) in keep_offsets.iter().enumerate() {
            let mut acc = Complex64::ZERO;
            for &ot in &trace_offsets {
                acc += amps[oi + ot] * amps[oj + ot].conj();
            }
            out.set(i, j, acc);
        }
    }
    Ok(out)
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// The input is symmetrized before decomposition; sizes 1 and 2 use closed
/// forms, larger matrices go through cyclic Jacobi rotations on the
/// real-symmetric embedding [[Re, -Im], [Im, Re]].
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    if !a.is_square() {
        return Err(Error::InvalidDims(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let residual = a.hermiticity_residual();
    if residual > HERMITICITY_TOL {
        return Err(Error::NotHermitian { residual });
    }
    let m = a.symmetrized();
    let n = m.rows();
    match n {
        0 => Ok(vec![]),
        1 => Ok(vec![m.get(0, 0).re]),
        2 => {
            let p = m.get(0, 0).re;
            let q = m.get(1, 1).re;
            let c = m.get(0, 1).norm_sqr();
            let mean = 0.5 * (p + q);
            let r = (0.25 * (p - q) * (p - q) + c).sqrt();
            Ok(vec![mean - r, mean + r])
        }
        _ => {
            // Real-symmetric embedding doubles every eigenvalue; averaging
            // each sorted pair keeps the result exactly antisymmetric under
            // negation of the input (trace_distance relies on that).
            let nn = 2 * n;
            let mut s = vec![0.0f64; nn * nn];
            for i in 0..n {
                for j in 0..n {
                    let v = m.get(i, j);
                    s[i * nn + j] = v.re;
                    s[(i + n) * nn + (j + n)] = v.re;
                    s[i * nn + (j + n)] = -v.im;
                    s[(i + n) * nn + j] = v.im;
                }
            }
            let mut doubled = jacobi_symmetric_eigenvalues(s, nn)?;
            doubled.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
            Ok(doubled
                .chunks(2)
                .map(|pair| 0.5 * (pair[0] + pair[1]))
                .collect())
        }
    }
}

/// Cyclic Jacobi sweeps on a real symmetric matrix (row-major, side `n`).
fn jacobi_symmetric_eigenvalues(mut a: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    let stop = 1e-14 * scale;

    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off.sqrt() <= stop {
            return Ok((0..n).map(|i| a[i * n + i]).collect());
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[p * n + k] = a[k * n + p];
                    a[k * n + q] = s * akp + c * akq;
                    a[q * n + k] = a[k * n + q];
                }
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
    }
    Err(Error::NoConvergence(format!(
        "Jacobi eigensolver did not converge in {MAX_JACOBI_SWEEPS} sweeps (side {n})"
    )))
}

/// Trace distance ½‖a − b‖₁ between Hermitian operators.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if !a.is_square() || (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return Err(Error::InvalidDims(format!(
            "trace distance needs equal square matrices, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    // Summing in a canonical order keeps the distance exactly symmetric
    // in its arguments (the eigenvalues of b−a arrive reversed).
    let mut magnitudes: Vec<f64> = hermitian_eigenvalues(&a.sub(b))?
        .into_iter()
        .map(f64::abs)
        .collect();
    magnitudes.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
    Ok(0.5 * magnitudes.iter().sum::<f64>())
}
