//! Dense complex linear algebra for dimension at most four.
//!
//! Everything here is immutable after construction. The only algorithm of
//! note is [`hermitian_eigen`], a cyclic complex Jacobi sweep.

use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

pub use num_complex::Complex64 as Complex;

use crate::error::{Error, Result};

/// Largest supported dimension.
pub const MAX_DIM: usize = 4;

/// Tolerance for construction-time checks (Hermiticity, normalization).
pub const CONSTRUCTION_TOL: f64 = 1e-12;

/// Tolerance promised for solver outputs.
pub const SOLVER_TOL: f64 = 1e-10;

/// Eigenvalues closer than this are treated as one degenerate cluster.
pub const DEGENERACY_GAP: f64 = 1e-9;

const MAX_SWEEPS: usize = 64;

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::InvalidInput(format!(
            "dimension {dim} outside 1..={MAX_DIM}"
        )));
    }
    Ok(())
}

/// A complex column vector.
#[derive(Clone, PartialEq)]
pub struct CVector {
    entries: Vec<Complex>,
}

impl CVector {
    pub fn new(entries: Vec<Complex>) -> Result<Self> {
        check_dim(entries.len())?;
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        Ok(Self { entries })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(vec![Complex::new(0.0, 0.0); dim])
    }

    /// The `index`-th standard basis vector.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidInput(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut v = Self::zeros(dim)?;
        v.entries[index] = Complex::new(1.0, 0.0);
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = &Complex> {
        self.entries.iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, factor: Complex) -> Self {
        Self {
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    /// Returns the vector divided by its norm.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(self.scale(Complex::new(1.0 / n, 0.0)))
    }

    /// Multiplies by a global phase so the first entry with magnitude above
    /// `threshold` becomes real and positive.
    pub fn with_canonical_phase(&self, threshold: f64) -> Self {
        match self.entries.iter().find(|z| z.norm() > threshold) {
            Some(z) => self.scale(z.conj() / z.norm()),
            None => self.clone(),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<usize> for CVector {
    type Output = Complex;
    fn index(&self, i: usize) -> &Complex {
        &self.entries[i]
    }
}

impl fmt::Debug for CVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.iter()).finish()
    }
}

impl Add for &CVector {
    type Output = CVector;
    fn add(self, rhs: &CVector) -> CVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in add");
        CVector {
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CVector {
    type Output = CVector;
    fn sub(self, rhs: &CVector) -> CVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in sub");
        CVector {
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// `⟨u|v⟩`, conjugate-linear in `u`.
pub fn inner(u: &CVector, v: &CVector) -> Result<Complex> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            got: v.dim(),
        });
    }
    Ok(u.entries
        .iter()
        .zip(&v.entries)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// Tensor product of two single-qubit vectors, ordered (0,0),(0,1),(1,0),(1,1).
pub fn kron(u: &CVector, v: &CVector) -> Result<CVector> {
    for w in [u, v] {
        if w.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: w.dim(),
            });
        }
    }
    let entries = u
        .entries
        .iter()
        .flat_map(|a| v.entries.iter().map(move |b| a * b))
        .collect();
    Ok(CVector { entries })
}

/// Square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    entries: Vec<Complex>,
}

impl CMatrix {
    pub fn new(dim: usize, entries: Vec<Complex>) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, entries })
    }

    pub fn from_rows(rows: &[Vec<Complex>]) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: bad.len(),
            });
        }
        Self::new(dim, rows.concat())
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(dim, vec![Complex::new(0.0, 0.0); dim * dim])
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::diag(&vec![1.0; dim])
    }

    pub fn diag(values: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(values.len())?;
        for (i, &x) in values.iter().enumerate() {
            m.entries[i * m.dim + i] = Complex::new(x, 0.0);
        }
        Ok(m)
    }

    /// Outer product `|u⟩⟨v|`.
    pub fn outer(u: &CVector, v: &CVector) -> Result<Self> {
        if u.dim() != v.dim() {
            return Err(Error::DimensionMismatch {
                expected: u.dim(),
                got: v.dim(),
            });
        }
        let dim = u.dim();
        let entries = (0..dim * dim)
            .map(|k| u[k / dim] * v[k % dim].conj())
            .collect();
        Self::new(dim, entries)
    }

    /// Rank-one projector `|u⟩⟨u|`.
    pub fn projector(u: &CVector) -> Result<Self> {
        Self::outer(u, u)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.entries[row * self.dim + col]
    }

    pub fn trace(&self) -> Complex {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, factor: Complex) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn mul_vec(&self, v: &CVector) -> Result<CVector> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.dim(),
            });
        }
        let entries = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum())
            .collect();
        Ok(CVector { entries })
    }

    /// `⟨v|M|v⟩`.
    pub fn expectation(&self, v: &CVector) -> Result<Complex> {
        inner(v, &self.mul_vec(v)?)
    }

    /// Largest entrywise deviation from Hermitian symmetry.
    pub fn hermitian_deviation(&self) -> (usize, usize, f64) {
        let mut worst = (0, 0, 0.0);
        for i in 0..self.dim {
            for j in i..self.dim {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                if d > worst.2 {
                    worst = (i, j, d);
                }
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation().2 <= tol
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in add");
        CMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in mul");
        let n = self.dim;
        let entries = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                (0..n).map(|l| self.get(i, l) * rhs.get(l, j)).sum()
            })
            .collect();
        CMatrix { dim: n, entries }
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<_> = self.entries.chunks(self.dim).collect();
        f.debug_list().entries(rows).finish()
    }
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<CVector>,
}

impl SpectralDecomposition {
    /// `Σ λᵢ |vᵢ⟩⟨vᵢ|`.
    pub fn reconstruct(&self) -> CMatrix {
        let dim = self.eigenvectors[0].dim();
        let mut acc = CMatrix::zeros(dim).expect("valid dimension");
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            let p = CMatrix::projector(v).expect("same dimension");
            acc = &acc + &p.scale(Complex::new(*lambda, 0.0));
        }
        acc
    }
}

/// Cyclic Jacobi eigensolver for a Hermitian matrix.
///
/// Each rotation first removes the phase of the pivot `a[p][q]` with a
/// diagonal unitary and then applies the real symmetric Jacobi rotation
/// that annihilates it. Eigenvectors inside a degenerate cluster are
/// re-orthonormalized with Gram–Schmidt; each eigenvector is reported with
/// its first significant entry real and positive.
#[allow(clippy::needless_range_loop)]
pub fn hermitian_eigen(m: &CMatrix) -> Result<SpectralDecomposition> {
    let (row, col, deviation) = m.hermitian_deviation();
    if deviation > CONSTRUCTION_TOL {
        return Err(Error::NotHermitian {
            row,
            col,
            deviation,
        });
    }
    let n = m.dim();
    // exact Hermitian copy
    let mut a = vec![vec![Complex::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in 0..n {
            a[i][j] = (m.get(i, j) + m.get(j, i).conj()) * 0.5;
        }
        a[i][i].im = 0.0;
    }
    let mut v = vec![vec![Complex::new(0.0, 0.0); n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = Complex::new(1.0, 0.0);
    }

    let scale = m.frobenius_norm();
    let threshold = (f64::EPSILON * scale).powi(2);
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j].norm_sqr())
            .sum();
        if off <= threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].re.total_cmp(&a[j][j].re));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| a[k][k].re).collect();
    let mut eigenvectors: Vec<CVector> = order
        .iter()
        .map(|&k| CVector {
            entries: (0..n).map(|i| v[i][k]).collect(),
        })
        .collect();

    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eigenvalues[end] - eigenvalues[end - 1] < DEGENERACY_GAP {
            end += 1;
        }
        if end - start > 1 {
            gram_schmidt(&mut eigenvectors[start..end])?;
        }
        start = end;
    }

    let eigenvectors = eigenvectors
        .into_iter()
        .map(|e| e.with_canonical_phase(1e-8))
        .collect();
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

#[allow(clippy::needless_range_loop)]
fn rotate(a: &mut [Vec<Complex>], v: &mut [Vec<Complex>], p: usize, q: usize) {
    let apq = a[p][q];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let n = a.len();
    let phase = apq.conj() / g; // e^{-iφ}
    let tau = (a[q][q].re - a[p][p].re) / (2.0 * g);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // plane unitary: columns p and q of D·R
    let upp = Complex::new(c, 0.0);
    let uqp = -phase * s;
    let upq = Complex::new(s, 0.0);
    let uqq = phase * c;

    for row in a.iter_mut() {
        let (xp, xq) = (row[p], row[q]);
        row[p] = xp * upp + xq * uqp;
        row[q] = xp * upq + xq * uqq;
    }
    for k in 0..n {
        let (xp, xq) = (a[p][k], a[q][k]);
        a[p][k] = upp.conj() * xp + uqp.conj() * xq;
        a[q][k] = upq.conj() * xp + uqq.conj() * xq;
    }
    a[p][q] = Complex::new(0.0, 0.0);
    a[q][p] = Complex::new(0.0, 0.0);
    a[p][p].im = 0.0;
    a[q][q].im = 0.0;

    for row in v.iter_mut() {
        let (xp, xq) = (row[p], row[q]);
        row[p] = xp * upp + xq * uqp;
        row[q] = xp * upq + xq * uqq;
    }
}

fn gram_schmidt(vectors: &mut [CVector]) -> Result<()> {
    for i in 0..vectors.len() {
        let mut w = vectors[i].clone();
        for done in &vectors[..i] {
            let overlap = inner(done, &w)?;
            w = &w - &done.scale(overlap);
        }
        vectors[i] = w.normalized()?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn inner_of_basis_vectors() {
        let e0 = CVector::basis(4, 0).unwrap();
        let e1 = CVector::basis(4, 1).unwrap();
        assert_eq!(inner(&e0, &e0).unwrap(), c(1.0, 0.0));
        assert_eq!(inner(&e0, &e1).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn inner_is_conjugate_linear_in_first_argument() {
        let u = CVector::new(vec![c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        let v = CVector::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(inner(&u, &v).unwrap(), c(0.0, -1.0));
    }

    #[test]
    fn inner_rejects_dimension_mismatch() {
        let u = CVector::basis(2, 0).unwrap();
        let v = CVector::basis(4, 0).unwrap();
        assert!(matches!(
            inner(&u, &v),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn kron_orders_product_basis() {
        let zero = CVector::basis(2, 0).unwrap();
        let one = CVector::basis(2, 1).unwrap();
        assert_eq!(kron(&zero, &one).unwrap(), CVector::basis(4, 1).unwrap());
        assert_eq!(kron(&one, &zero).unwrap(), CVector::basis(4, 2).unwrap());
    }

    #[test]
    fn kron_rejects_wrong_dimensions() {
        let e = CVector::basis(4, 0).unwrap();
        let q = CVector::basis(2, 0).unwrap();
        assert!(kron(&e, &q).is_err());
        assert!(kron(&q, &e).is_err());
    }

    #[test]
    fn constructors_reject_bad_input() {
        assert!(CVector::new(vec![]).is_err());
        assert!(CVector::new(vec![c(0.0, 0.0); 5]).is_err());
        assert_eq!(
            CVector::new(vec![c(f64::NAN, 0.0)]).unwrap_err(),
            Error::NonFinite
        );
        assert!(CMatrix::new(2, vec![c(0.0, 0.0); 3]).is_err());
        assert_eq!(
            CVector::zeros(2).unwrap().normalized().unwrap_err(),
            Error::ZeroVector
        );
    }

    #[test]
    fn eigen_of_identity() {
        let d = hermitian_eigen(&CMatrix::identity(4).unwrap()).unwrap();
        assert_eq!(d.eigenvalues, vec![1.0; 4]);
    }

    #[test]
    fn eigen_of_diagonal_returns_basis() {
        let d = hermitian_eigen(&CMatrix::diag(&[2.0, 0.0, 3.0, 1.0]).unwrap()).unwrap();
        assert_eq!(d.eigenvalues, vec![0.0, 1.0, 2.0, 3.0]);
        let expected = [1, 3, 0, 2];
        for (v, &k) in d.eigenvectors.iter().zip(&expected) {
            assert!(v.max_abs_diff(&CVector::basis(4, k).unwrap()) < 1e-15);
        }
    }

    #[test]
    fn eigen_of_complex_two_by_two() {
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2
        let m = CMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 1.0)],
            vec![c(0.0, -1.0), c(1.0, 0.0)],
        ])
        .unwrap();
        let d = hermitian_eigen(&m).unwrap();
        assert!((d.eigenvalues[0] - 0.0).abs() < 1e-14);
        assert!((d.eigenvalues[1] - 2.0).abs() < 1e-14);
        assert!(d.reconstruct().max_abs_diff(&m) < 1e-14);
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let m = CMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(
            hermitian_eigen(&m),
            Err(Error::NotHermitian { row: 0, col: 1, .. })
        ));
    }

    #[test]
    fn degenerate_cluster_is_orthonormal() {
        // projector onto a 2d subspace, eigenvalues (0, 0, 1, 1)
        let u = CVector::new(vec![c(0.5, 0.0), c(0.5, 0.0), c(0.0, 0.5), c(0.0, -0.5)]).unwrap();
        let w = CVector::new(vec![c(0.5, 0.0), c(-0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0)]).unwrap();
        let m = &CMatrix::projector(&u).unwrap() + &CMatrix::projector(&w).unwrap();
        let d = hermitian_eigen(&m).unwrap();
        for (got, want) in d.eigenvalues.iter().zip([0.0, 0.0, 1.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        for i in 0..4 {
            for j in 0..4 {
                let g = inner(&d.eigenvectors[i], &d.eigenvectors[j]).unwrap();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g - c(want, 0.0)).norm() < 1e-12);
            }
        }
    }
}
