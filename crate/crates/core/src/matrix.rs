//! Dense complex matrices.
//!
//! [`HermitianMatrix`] is the self-adjoint workhorse; unitaries and
//! contractions are plain [`ComplexMatrix`] values. Both share the JSON
//! form `{"dim": n, "entries": [[[re, im], ...], ...]}` (row-major).

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type ComplexMatrix = DMatrix<C64>;

/// Maximum allowed `|a_ij - conj(a_ji)|`.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

/// Eigendecomposition with eigenvalues sorted in decreasing order; column
/// `k` of `vectors` belongs to `values[k]`.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianMatrix {
    /// Validate and wrap. The stored matrix is symmetrized so later
    /// arithmetic sees an exactly self-adjoint operand.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::invalid(format!(
                "matrix must be square and nonempty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid("matrix has non-finite entries"));
        }
        let n = m.nrows();
        for i in 0..n {
            for j in i..n {
                let d = (m[(i, j)] - m[(j, i)].conj()).norm();
                if d > HERMITIAN_TOLERANCE {
                    return Err(Error::invalid(format!(
                        "entry ({i},{j}) breaks self-adjointness by {d:e}"
                    )));
                }
            }
        }
        Ok(Self::symmetrized(m))
    }

    /// Hermitian part `(M + M*)/2` without validation.
    pub(crate) fn symmetrized(m: ComplexMatrix) -> Self {
        let adj = m.adjoint();
        HermitianMatrix((m + adj).scale(0.5))
    }

    pub fn from_real_diagonal(d: &[f64]) -> Self {
        let v = DVector::from_iterator(d.len(), d.iter().map(|&x| C64::new(x, 0.0)));
        HermitianMatrix(DMatrix::from_diagonal(&v))
    }

    /// Build from real row-major entries, e.g. `[[0, 1], [1, 0]]`.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("rows must form a square array"));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| C64::new(rows[i][j], 0.0)))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| self.0[(k, k)].re).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diagonal().iter().sum()
    }

    pub fn eigh(&self) -> Eigh {
        eigh(&self.0)
    }

    /// Decreasing eigenvalue list.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eigh().values
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *self.eigenvalues().last().expect("nonempty matrix")
    }

    /// `U A U*`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> HermitianMatrix {
        Self::symmetrized(u * &self.0 * u.adjoint())
    }

    /// Spectral calculus: `V f(Λ) V*`.
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let e = self.eigh();
        from_spectrum(
            &e.vectors,
            &e.values.iter().map(|&x| f(x)).collect::<Vec<_>>(),
        )
    }

    pub fn sub(&self, other: &HermitianMatrix) -> Result<HermitianMatrix> {
        if self.dim() != other.dim() {
            return Err(Error::invalid("dimension mismatch"));
        }
        Ok(HermitianMatrix(&self.0 - &other.0))
    }

    /// `(1/n) trace(A^k)` by repeated multiplication.
    pub fn normalized_trace_power(&self, k: u32) -> f64 {
        let n = self.dim();
        let mut acc = ComplexMatrix::identity(n, n);
        for _ in 0..k {
            acc = &acc * &self.0;
        }
        acc.trace().re / n as f64
    }
}

/// `V diag(values) V*` for a unitary `V`.
pub fn from_spectrum(vectors: &ComplexMatrix, values: &[f64]) -> HermitianMatrix {
    let mut scaled = vectors.clone();
    for (k, &v) in values.iter().enumerate() {
        scaled.column_mut(k).scale_mut(v);
    }
    HermitianMatrix::symmetrized(scaled * vectors.adjoint())
}

/// Eigendecomposition of the Hermitian part of `m`, decreasing order.
pub fn eigh(m: &ComplexMatrix) -> Eigh {
    let se = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..se.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| se.eigenvalues[b].total_cmp(&se.eigenvalues[a]));
    let values = order.iter().map(|&k| se.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(m.nrows(), order.len(), |i, j| {
        se.eigenvectors[(i, order[j])]
    });
    Eigh { values, vectors }
}

/// Largest singular value.
pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .fold(0.0, |a: f64, &b| a.max(b))
}

/// Sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    m.clone().svd(false, false).singular_values.iter().sum()
}

/// `max |U U* - I|` entrywise.
pub fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    let n = u.nrows();
    let prod = u * u.adjoint();
    (prod - ComplexMatrix::identity(n, n))
        .iter()
        .fold(0.0, |a: f64, z| a.max(z.norm()))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        MatrixJson {
            dim: m.nrows(),
            entries: (0..m.nrows())
                .map(|i| {
                    (0..m.ncols())
                        .map(|j| [m[(i, j)].re, m[(i, j)].im])
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let n = self.dim;
        if n == 0 || self.entries.len() != n || self.entries.iter().any(|r| r.len() != n) {
            return Err(Error::invalid(format!(
                "matrix JSON must hold {n} rows of {n} entries"
            )));
        }
        Ok(DMatrix::from_fn(n, n, |i, j| {
            let [re, im] = self.entries[i][j];
            C64::new(re, im)
        }))
    }
}

impl Serialize for HermitianMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from_matrix(&self.0).serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermitianMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        raw.to_matrix()
            .and_then(HermitianMatrix::new)
            .map_err(serde::de::Error::custom)
    }
}
