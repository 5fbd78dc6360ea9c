//! Dense complex matrices and the eigensolvers every other module sits on.
//!
//! Sizes are desk-scale (dimension at most [`MAX_DIM`]); the solvers favour
//! robustness and determinism over asymptotics. All operations are pure
//! functions of their inputs.

mod hermitian;
mod spectrum;

pub use hermitian::{herm_eig, is_positive_semidefinite, op_norm, HermEig};
pub use spectrum::eigenvalues;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::config::MAX_DIM;

/// Complex scalar used throughout the crate.
pub type Cplx = Complex64;

/// Shorthand constructor.
#[inline]
pub fn c64(re: f64, im: f64) -> Cplx {
    Complex64::new(re, im)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix is not Hermitian: relative defect {defect:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { defect: f64, tol: f64 },
    #[error("{solver} failed to converge within the iteration budget")]
    NoConvergence { solver: &'static str },
    #[error("operation requires a nonempty input")]
    EmptyInput,
    #[error("dimension {n} exceeds the supported limit {MAX_DIM}")]
    DimensionLimit { n: usize },
    #[error("matrix rows have inconsistent lengths or the matrix is not square")]
    NotSquare,
    #[error("matrix entry at ({row},{col}) is not finite")]
    NonFinite { row: usize, col: usize },
}

/// Dense square complex matrix, row-major.
///
/// Serializes as nested rows of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    entries: Vec<Cplx>,
}

impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<(f64, f64)>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| (self[(i, j)].re, self[(i, j)].im)).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<(f64, f64)>> = Vec::deserialize(d)?;
        let rows: Vec<Vec<Cplx>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(|(re, im)| c64(re, im)).collect())
            .collect();
        CMatrix::from_rows(rows).map_err(|e| D::Error::custom(e.to_string()))
    }
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "CMatrix dimension must be positive");
        CMatrix {
            n,
            entries: vec![Cplx::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Cplx::new(1.0, 0.0);
        }
        m
    }

    pub fn diag(values: &[Cplx]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    /// Builds a matrix from rows, validating squareness and finiteness.
    pub fn from_rows(rows: Vec<Vec<Cplx>>) -> Result<Self, LinalgError> {
        let n = rows.len();
        if n == 0 {
            return Err(LinalgError::EmptyInput);
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(LinalgError::NotSquare);
            }
            for (j, z) in row.iter().enumerate() {
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(LinalgError::NonFinite { row: i, col: j });
                }
                entries.push(*z);
            }
        }
        Ok(CMatrix { n, entries })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Cplx) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> Vec<Vec<Cplx>> {
        (0..self.n)
            .map(|i| self.entries[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }

    pub fn adjoint(&self) -> CMatrix {
        let n = self.n;
        CMatrix::from_fn(n, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, a: Cplx) -> CMatrix {
        CMatrix {
            n: self.n,
            entries: self.entries.iter().map(|z| a * z).collect(),
        }
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        CMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        CMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, x: &[Cplx]) -> Vec<Cplx> {
        assert_eq!(x.len(), self.n);
        let n = self.n;
        let mut y = vec![Cplx::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = Cplx::new(0.0, 0.0);
            for j in 0..n {
                acc += self[(i, j)] * x[j];
            }
            y[i] = acc;
        }
        y
    }

    /// Rayleigh quotient `x* T x` for a unit vector `x`.
    pub fn rayleigh(&self, x: &[Cplx]) -> Cplx {
        let tx = self.apply(x);
        x.iter().zip(&tx).map(|(xi, ti)| xi.conj() * ti).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Frobenius distance to the adjoint, as a Hermiticity defect.
    pub fn herm_defect(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt() / 2.0_f64.sqrt()
    }

    /// Hermitian part `(A + A*)/2`.
    pub fn hermitize(&self) -> CMatrix {
        let n = self.n;
        CMatrix::from_fn(n, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let (n, m) = (self.n, other.n);
        let mut out = CMatrix::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self[(i, j)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out[(i * m + k, j * m + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Extracts the square submatrix with the given row/column indices.
    pub fn submatrix(&self, idx: &[usize]) -> CMatrix {
        let k = idx.len();
        assert!(k >= 1);
        CMatrix::from_fn(k, |i, j| self[(idx[i], idx[j])])
    }

    pub fn check_dim_limit(&self) -> Result<(), LinalgError> {
        if self.n > MAX_DIM {
            Err(LinalgError::DimensionLimit { n: self.n })
        } else {
            Ok(())
        }
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Cplx;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Cplx {
        &self.entries[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cplx {
        &mut self.entries[i * self.n + j]
    }
}

/// Self-commutator `T*T - TT*`, symmetrized so the result is exactly
/// Hermitian despite rounding.
pub fn self_commutator(t: &CMatrix) -> CMatrix {
    let ad = t.adjoint();
    ad.mul(t).sub(&t.mul(&ad)).hermitize()
}

/// Block-diagonal direct sum, block order preserved.
pub fn direct_sum(blocks: &[CMatrix]) -> Result<CMatrix, LinalgError> {
    if blocks.is_empty() {
        return Err(LinalgError::EmptyInput);
    }
    let n: usize = blocks.iter().map(|b| b.dim()).sum();
    let mut out = CMatrix::zeros(n);
    let mut off = 0;
    for b in blocks {
        for i in 0..b.dim() {
            for j in 0..b.dim() {
                out[(off + i, off + j)] = b[(i, j)];
            }
        }
        off += b.dim();
    }
    Ok(out)
}
