//! Dense complex linear algebra: Hermitian matrices, frame operators, and a
//! cyclic Jacobi eigensolver.
//!
//! Everything here is sized for the dimensions this problem lives at (a few
//! hundred at most), so storage is a plain row-major `Vec<Complex64>` and the
//! eigensolver is dependency-free Jacobi iteration, which is deterministic
//! and accurate to near machine precision on Hermitian input.

use num_complex::Complex64;
use rand::Rng;

use crate::error::Error;

/// Per-entry absolute tolerance for the Hermitian symmetry check.
pub const HERMITIAN_ENTRY_TOL: f64 = 1e-12;

/// Jacobi stops once the off-diagonal Frobenius mass drops below this factor
/// times the Frobenius norm of the input.
const JACOBI_OFF_TOL: f64 = 1e-14;

/// Hard cap on Jacobi sweeps; convergence is quadratic, so this is generous.
const JACOBI_MAX_SWEEPS: usize = 100;

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Square matrix with the given real diagonal.
    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m.set(i, i, Complex64::new(v, 0.0));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self, Error> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if nrows == 0 || ncols == 0 {
            return Err(Error::DimensionMismatch(
                "matrix must have at least one row and one column".into(),
            ));
        }
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in &rows {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch(format!(
                    "ragged rows: expected {} columns, found {}",
                    ncols,
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    /// Convenience for tests and real-valued constructions.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, Error> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, Error> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + aik * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
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

    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>, Error> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} columns but vector has length {}",
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..self.cols {
                acc += self.get(i, j) * v[j];
            }
            out[i] = acc;
        }
        Ok(out)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest per-entry deviation from self-adjointness; `None` if not square.
    pub fn hermitian_deviation(&self) -> Option<f64> {
        if self.rows != self.cols {
            return None;
        }
        let mut max_dev = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                let dev = (self.get(i, j) - self.get(j, i).conj()).norm();
                max_dev = max_dev.max(dev);
            }
        }
        Some(max_dev)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), Error> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {}x{}, found {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

/// Frobenius norm of the commutator `AB - BA`.
pub fn commutator_norm(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64, Error> {
    let ab = a.matmul(b)?;
    let ba = b.matmul(a)?;
    Ok(ab.sub(&ba)?.frobenius_norm())
}

/// Dense self-adjoint matrix; the constructor enforces the symmetry tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    inner: ComplexMatrix,
}

impl HermitianMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self, Error> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::DimensionMismatch(format!(
                "Hermitian matrix must be square, found {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !matrix.is_finite() {
            return Err(Error::InvalidProblem(
                "matrix entries must be finite".into(),
            ));
        }
        let max_deviation = matrix.hermitian_deviation().unwrap();
        if max_deviation > HERMITIAN_ENTRY_TOL {
            return Err(Error::NonHermitianInput {
                max_deviation,
                tolerance: HERMITIAN_ENTRY_TOL,
            });
        }
        Ok(Self { inner: matrix })
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        Self {
            inner: ComplexMatrix::from_real_diag(diag),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            inner: ComplexMatrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.inner.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.inner
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.inner
    }
}

/// Finite vector family in `C^d`; the raw material of frame operators.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorFamily {
    dim: usize,
    vectors: Vec<Vec<Complex64>>,
}

impl VectorFamily {
    pub fn new(dim: usize, vectors: Vec<Vec<Complex64>>) -> Result<Self, Error> {
        if dim == 0 {
            return Err(Error::DimensionMismatch(
                "vector family dimension must be positive".into(),
            ));
        }
        if vectors.is_empty() {
            return Err(Error::DimensionMismatch(
                "vector family must contain at least one vector".into(),
            ));
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "vector {} has length {}, expected {}",
                    i,
                    v.len(),
                    dim
                )));
            }
            if !v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::InvalidProblem(format!(
                    "vector {} has non-finite entries",
                    i
                )));
            }
        }
        Ok(Self { dim, vectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn norms_squared(&self) -> Vec<f64> {
        self.vectors
            .iter()
            .map(|v| v.iter().map(|z| z.norm_sqr()).sum())
            .collect()
    }
}

/// Eigendecomposition of a Hermitian matrix: `A = V diag(values) V*` with
/// `values` sorted non-increasing and column i of `V` paired with value i.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// Rebuilds `V diag(values) V*`; used by round-trip checks.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let dim = self.values.len();
        let mut out = ComplexMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, &lam) in self.values.iter().enumerate() {
                    acc += self.vectors.get(i, k) * lam * self.vectors.get(j, k).conj();
                }
                out.set(i, j, acc);
            }
        }
        out
    }
}

/// Frame operator `S_F = sum_i f_i (x) f_i` of a vector family.
pub fn frame_operator(family: &VectorFamily) -> HermitianMatrix {
    let d = family.dim();
    let mut m = ComplexMatrix::zeros(d, d);
    for f in family.vectors() {
        for a in 0..d {
            for b in 0..d {
                let v = m.get(a, b) + f[a] * f[b].conj();
                m.set(a, b, v);
            }
        }
    }
    // Rank-one sums are Hermitian by construction; symmetrize the roundoff
    // so the typed constructor never trips on accumulated 1e-16 noise.
    for a in 0..d {
        let va = m.get(a, a);
        m.set(a, a, Complex64::new(va.re, 0.0));
        for b in (a + 1)..d {
            let avg = (m.get(a, b) + m.get(b, a).conj()) * 0.5;
            m.set(a, b, avg);
            m.set(b, a, avg.conj());
        }
    }
    HermitianMatrix::new(m).expect("rank-one sums are Hermitian")
}

/// Squared joint frame operator distance `sum_j ||A_j - B_j||_F^2`.
pub fn jfod_squared(a: &[HermitianMatrix], b: &[HermitianMatrix]) -> Result<f64, Error> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "operator lists have lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    let mut total = 0.0;
    for (j, (x, y)) in a.iter().zip(b).enumerate() {
        if x.dim() != y.dim() {
            return Err(Error::DimensionMismatch(format!(
                "operators at index {} have dims {} and {}",
                j,
                x.dim(),
                y.dim()
            )));
        }
        let diff = x.matrix().sub(y.matrix())?;
        total += diff.frobenius_norm().powi(2);
    }
    Ok(total)
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Sweeps annihilate each off-diagonal entry in turn until the off-diagonal
/// Frobenius mass falls below `1e-14 * ||A||_F`. Eigenvalues come out sorted
/// non-increasing (stable order on ties) and each eigenvector's phase is
/// fixed by making its largest-magnitude entry real positive, so the output
/// is reproducible.
pub fn eig_hermitian(a: &HermitianMatrix) -> EigenDecomposition {
    let n = a.dim();
    // Work on the exact Hermitian part: upper triangle mirrored, real diagonal.
    let mut w = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        w.set(i, i, Complex64::new(a.matrix().get(i, i).re, 0.0));
        for j in (i + 1)..n {
            let avg = (a.matrix().get(i, j) + a.matrix().get(j, i).conj()) * 0.5;
            w.set(i, j, avg);
            w.set(j, i, avg.conj());
        }
    }
    let norm_a = w.frobenius_norm();
    let mut v = ComplexMatrix::identity(n);

    if norm_a > 0.0 {
        let target = JACOBI_OFF_TOL * norm_a;
        for _sweep in 0..JACOBI_MAX_SWEEPS {
            if off_diagonal_norm(&w) <= target {
                break;
            }
            for p in 0..n.saturating_sub(1) {
                for q in (p + 1)..n {
                    jacobi_rotate(&mut w, &mut v, p, q);
                }
            }
        }
    }

    // Stable sort of eigenvalues in non-increasing order.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| w.get(j, j).re.partial_cmp(&w.get(i, i).re).unwrap());

    let mut values = Vec::with_capacity(n);
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (slot, &src) in order.iter().enumerate() {
        values.push(w.get(src, src).re);
        // Phase convention: largest-magnitude entry made real positive.
        let mut best_row = 0;
        let mut best_mag = 0.0f64;
        for r in 0..n {
            let mag = v.get(r, src).norm();
            if mag > best_mag {
                best_mag = mag;
                best_row = r;
            }
        }
        let pivot = v.get(best_row, src);
        let phase = if best_mag > 0.0 {
            pivot.conj() / best_mag
        } else {
            Complex64::new(1.0, 0.0)
        };
        for r in 0..n {
            vectors.set(r, slot, v.get(r, src) * phase);
        }
    }

    EigenDecomposition { values, vectors }
}

fn off_diagonal_norm(w: &ComplexMatrix) -> f64 {
    let n = w.rows();
    let mut acc = 0.0;
    for p in 0..n {
        for q in (p + 1)..n {
            acc += 2.0 * w.get(p, q).norm_sqr();
        }
    }
    acc.sqrt()
}

/// One complex Jacobi rotation annihilating `w[p][q]`, accumulated into `v`.
fn jacobi_rotate(w: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let beta = w.get(p, q);
    let abs_b = beta.norm();
    if abs_b == 0.0 {
        return;
    }
    let alpha = w.get(p, p).re;
    let gamma = w.get(q, q).re;
    let theta = (gamma - alpha) / (2.0 * abs_b);
    // Smaller-magnitude root of t^2 - 2 theta t - 1 = 0.
    let t = if theta.abs() > 1e150 {
        -0.5 / theta
    } else {
        -theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let sigma = t * c;
    let phase = beta / abs_b;
    let s = phase.conj() * sigma;

    let n = w.rows();
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let wkp = w.get(k, p);
        let wkq = w.get(k, q);
        let new_kp = wkp * c + wkq * s;
        let new_kq = wkp * (-s.conj()) + wkq * c;
        w.set(k, p, new_kp);
        w.set(k, q, new_kq);
        w.set(p, k, new_kp.conj());
        w.set(q, k, new_kq.conj());
    }
    w.set(p, p, Complex64::new(alpha + t * abs_b, 0.0));
    w.set(q, q, Complex64::new(gamma - t * abs_b, 0.0));
    w.set(p, q, Complex64::new(0.0, 0.0));
    w.set(q, p, Complex64::new(0.0, 0.0));

    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * c + vkq * s);
        v.set(k, q, vkp * (-s.conj()) + vkq * c);
    }
}

/// Haar-like random unitary: Gram-Schmidt on a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    use rand_distr_standard_normal as normal;
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    for _ in 0..dim {
        loop {
            let mut col: Vec<Complex64> = (0..dim)
                .map(|_| Complex64::new(normal(rng), normal(rng)))
                .collect();
            // Orthogonalize against previous columns (twice, for stability).
            for _ in 0..2 {
                for prev in &cols {
                    let inner: Complex64 = col
                        .iter()
                        .zip(prev)
                        .map(|(a, b)| a * b.conj())
                        .sum();
                    for (c, p) in col.iter_mut().zip(prev) {
                        *c -= inner * p;
                    }
                }
            }
            let norm: f64 = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-8 {
                for c in col.iter_mut() {
                    *c /= norm;
                }
                cols.push(col);
                break;
            }
        }
    }
    let mut m = ComplexMatrix::zeros(dim, dim);
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            m.set(i, j, z);
        }
    }
    m
}

// Standard normal via Box-Muller; keeps the rand_distr dependency out.
fn rand_distr_standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.gen::<f64>();
        let v: f64 = rng.gen::<f64>();
        if u > f64::MIN_POSITIVE {
            return (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos();
        }
    }
}

/// Random Hermitian matrix with entries of magnitude O(scale); test support.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, scale: f64, rng: &mut R) -> HermitianMatrix {
    let mut m = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        m.set(
            i,
            i,
            Complex64::new(scale * (2.0 * rng.gen::<f64>() - 1.0), 0.0),
        );
        for j in (i + 1)..dim {
            let z = Complex64::new(
                scale * (2.0 * rng.gen::<f64>() - 1.0),
                scale * (2.0 * rng.gen::<f64>() - 1.0),
            );
            m.set(i, j, z);
            m.set(j, i, z.conj());
        }
    }
    HermitianMatrix::new(m).expect("constructed Hermitian")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn frame_operator_of_orthonormal_basis_is_identity() {
        let family = VectorFamily::new(
            2,
            vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]],
        )
        .unwrap();
        let s = frame_operator(&family);
        let diff = s.matrix().sub(&ComplexMatrix::identity(2)).unwrap();
        assert!(diff.frobenius_norm() < 1e-15);
    }

    #[test]
    fn frame_operator_of_repeated_vector() {
        let family = VectorFamily::new(
            2,
            vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]],
        )
        .unwrap();
        let s = frame_operator(&family);
        let expected = ComplexMatrix::from_real_rows(&[&[2.0, 0.0], &[0.0, 0.0]]).unwrap();
        assert!(s.matrix().sub(&expected).unwrap().frobenius_norm() < 1e-15);
    }

    #[test]
    fn frame_operator_matches_naive_double_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let vectors: Vec<Vec<Complex64>> = (0..3)
            .map(|_| {
                (0..2)
                    .map(|_| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                    .collect()
            })
            .collect();
        let family = VectorFamily::new(2, vectors.clone()).unwrap();
        let s = frame_operator(&family);
        // Naive oracle: entry (a, b) = sum_i f_i[a] * conj(f_i[b]).
        for a in 0..2 {
            for b in 0..2 {
                let mut expect = c(0.0, 0.0);
                for f in &vectors {
                    expect += f[a] * f[b].conj();
                }
                assert!((s.matrix().get(a, b) - expect).norm() < 1e-14);
            }
        }
        // Trace identity.
        let trace = s.matrix().trace().re;
        let norms: f64 = family.norms_squared().iter().sum();
        assert!((trace - norms).abs() <= 1e-12 * norms.abs().max(1.0));
    }

    #[test]
    fn eig_of_diagonal_sorts_non_increasing() {
        let a = HermitianMatrix::from_real_diag(&[3.0, 1.0, 2.0]);
        let e = eig_hermitian(&a);
        assert_eq!(e.values, vec![3.0, 2.0, 1.0]);
        // Eigenvectors are permuted identity columns.
        for (slot, src) in [(0usize, 0usize), (1, 2), (2, 1)] {
            for r in 0..3 {
                let expect = if r == src { 1.0 } else { 0.0 };
                assert!((e.vectors.get(r, slot) - c(expect, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn eig_of_symmetric_two_by_two() {
        let a = HermitianMatrix::new(
            ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap(),
        )
        .unwrap();
        let e = eig_hermitian(&a);
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn eig_of_complex_hermitian() {
        let mut m = ComplexMatrix::zeros(2, 2);
        m.set(0, 0, c(2.0, 0.0));
        m.set(0, 1, c(0.0, 1.0));
        m.set(1, 0, c(0.0, -1.0));
        m.set(1, 1, c(2.0, 0.0));
        let a = HermitianMatrix::new(m).unwrap();
        let e = eig_hermitian(&a);
        assert!((e.values[0] - 3.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        let recon = e.reconstruct();
        assert!(recon.sub(a.matrix()).unwrap().frobenius_norm() < 1e-13);
    }

    /// Independent eigenvalue oracle: bisection on the inertia count of
    /// `A - x I` (number of negative pivots of an LDL-style elimination).
    fn count_eigs_below(a: &HermitianMatrix, x: f64) -> Option<usize> {
        let n = a.dim();
        let mut m = a.matrix().clone();
        for i in 0..n {
            let v = m.get(i, i);
            m.set(i, i, v - c(x, 0.0));
        }
        let mut negatives = 0;
        for k in 0..n {
            let pivot = m.get(k, k).re;
            if pivot.abs() < 1e-13 {
                return None; // shift too close to an eigenvalue of a minor
            }
            if pivot < 0.0 {
                negatives += 1;
            }
            for i in (k + 1)..n {
                let factor = m.get(i, k) / m.get(k, k);
                for j in k..n {
                    let v = m.get(i, j) - factor * m.get(k, j);
                    m.set(i, j, v);
                }
            }
        }
        Some(negatives)
    }

    #[test]
    fn eig_matches_inertia_bisection_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let a = random_hermitian(5, 1.0, &mut rng);
        let e = eig_hermitian(&a);

        // Gershgorin bound on the spectrum.
        let bound: f64 = (0..5)
            .map(|i| (0..5).map(|j| a.matrix().get(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max);

        // k-th smallest eigenvalue via bisection on the counting function.
        let mut oracle = Vec::new();
        for k in 0..5usize {
            let mut lo = -bound - 1.0;
            let mut hi = bound + 1.0;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let count = match count_eigs_below(&a, mid) {
                    Some(cnt) => cnt,
                    None => {
                        // Nudge off the degenerate shift.
                        let count = count_eigs_below(&a, mid + 1e-11).unwrap();
                        count
                    }
                };
                if count <= k {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            oracle.push(0.5 * (lo + hi));
        }
        oracle.reverse(); // non-increasing

        for (ours, theirs) in e.values.iter().zip(&oracle) {
            assert!(
                (ours - theirs).abs() < 1e-8,
                "eigenvalue mismatch: {} vs oracle {}",
                ours,
                theirs
            );
        }
    }

    #[test]
    fn eig_round_trip_and_unitarity_random_dims() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for &dim in &[1usize, 2, 3, 7, 16, 33, 50] {
            let a = random_hermitian(dim, 2.0, &mut rng);
            let e = eig_hermitian(&a);
            let recon = e.reconstruct();
            let scale = a.matrix().frobenius_norm().max(1.0);
            assert!(
                recon.sub(a.matrix()).unwrap().frobenius_norm() <= 1e-10 * scale,
                "round-trip failed at dim {}",
                dim
            );
            let vhv = e.vectors.adjoint().matmul(&e.vectors).unwrap();
            let id = ComplexMatrix::identity(dim);
            let mut max_entry = 0.0f64;
            for i in 0..dim {
                for j in 0..dim {
                    max_entry = max_entry.max((vhv.get(i, j) - id.get(i, j)).norm());
                }
            }
            assert!(max_entry <= 1e-10, "V*V != I at dim {}", dim);
            // Sorted non-increasing.
            for w in e.values.windows(2) {
                assert!(w[0] >= w[1]);
            }
        }
    }

    #[test]
    fn frame_operator_is_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let dim = rng.gen_range(1..5);
            let count = rng.gen_range(1..7);
            let vectors: Vec<Vec<Complex64>> = (0..count)
                .map(|_| {
                    (0..dim)
                        .map(|_| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                        .collect()
                })
                .collect();
            let family = VectorFamily::new(dim, vectors).unwrap();
            let s = frame_operator(&family);
            let e = eig_hermitian(&s);
            assert!(e.values.iter().all(|&v| v >= -1e-10));
        }
    }

    #[test]
    fn jfod_squared_basics() {
        let a = HermitianMatrix::from_real_diag(&[1.0, 0.0]);
        let b = HermitianMatrix::from_real_diag(&[0.0, 0.0]);
        assert_eq!(jfod_squared(&[a.clone()], &[a.clone()]).unwrap(), 0.0);
        assert!((jfod_squared(&[a.clone()], &[b.clone()]).unwrap() - 1.0).abs() < 1e-15);
        // Symmetry.
        let v1 = jfod_squared(&[a.clone(), b.clone()], &[b.clone(), a.clone()]).unwrap();
        let v2 = jfod_squared(&[b.clone(), a.clone()], &[a, b]).unwrap();
        assert!((v1 - v2).abs() < 1e-15 && v1 >= 0.0);
    }

    #[test]
    fn jfod_squared_dimension_mismatch() {
        let a = HermitianMatrix::from_real_diag(&[1.0, 0.0]);
        let b = HermitianMatrix::from_real_diag(&[1.0]);
        assert!(matches!(
            jfod_squared(&[a.clone()], &[b]),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            jfod_squared(&[a], &[]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn hermitian_constructor_rejects_asymmetry() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 0.5], &[0.0, 1.0]]).unwrap();
        assert!(matches!(
            HermitianMatrix::new(m),
            Err(Error::NonHermitianInput { .. })
        ));
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = random_unitary(6, &mut rng);
        let uhu = u.adjoint().matmul(&u).unwrap();
        let id = ComplexMatrix::identity(6);
        assert!(uhu.sub(&id).unwrap().frobenius_norm() < 1e-12);
    }
}
