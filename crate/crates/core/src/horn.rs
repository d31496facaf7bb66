//! Constructive Horn theorem.
//!
//! Starting from `diag(λ)`, a chain of T-transforms
//! `x ↦ t·x + (1 - t)·(x ∘ τ)` carries the diagonal from `λ` to `p`. Each
//! step is realized by a unitary that differs from the identity only on the
//! `{i, j}` block
//!
//! ```text
//! [  z cos θ   sin θ ]
//! [ -z sin θ   cos θ ]      |z| = 1,  z·a_ij purely imaginary,  cos²θ = t
//! ```
//!
//! which moves the diagonal exactly as the T-transform does while keeping
//! the spectrum fixed.

use serde::{Deserialize, Serialize};

use crate::eigenlist::{check_majorization, EigenList, MajorizationMode};
use crate::error::{Error, Result};
use crate::matrix::{operator_norm, ComplexMatrix, HermitianMatrix, C64};

/// Transposition `(i j)` (0-based, `i < j`) with mixing weight `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTransform {
    pub i: usize,
    pub j: usize,
    pub t: f64,
}

impl TTransform {
    pub fn new(i: usize, j: usize, t: f64) -> Result<Self> {
        if i == j {
            return Err(Error::invalid("transposition needs two distinct indices"));
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::invalid(format!("weight {t} outside [0, 1]")));
        }
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        Ok(TTransform { i, j, t })
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if self.j >= n || self.i == self.j || !(0.0..=1.0).contains(&self.t) {
            return Err(Error::invalid(format!(
                "transform ({}, {}, {}) invalid for dimension {n}",
                self.i, self.j, self.t
            )));
        }
        Ok(())
    }

    /// `t·x + (1 - t)·(x ∘ τ)`; only coordinates `i` and `j` move.
    pub fn apply_to(&self, x: &mut [f64]) {
        let (xi, xj) = (x[self.i], x[self.j]);
        x[self.i] = self.t * xi + (1.0 - self.t) * xj;
        x[self.j] = self.t * xj + (1.0 - self.t) * xi;
    }
}

/// Majorization tolerance for chain and construction preconditions, scaled
/// by the largest magnitude in either list.
const PRECONDITION_TOL: f64 = 1e-10;

fn list_scale(a: &[f64], b: &[f64]) -> f64 {
    a.iter().chain(b).fold(1.0, |m: f64, x| m.max(x.abs()))
}

/// Chain of T-transforms taking `lambda` to `p`.
///
/// Pivot rule: take the first coordinate with an excess `x_i > p_i` and the
/// first later coordinate with a deficit `x_j < p_j`, then move
/// `δ = min(x_i - p_i, p_j - x_j)` from `i` to `j`. Every step settles at
/// least one coordinate, so the chain has at most `n - 1` steps.
pub fn t_transform_chain(lambda: &EigenList, p: &EigenList) -> Result<Vec<TTransform>> {
    let n = lambda.len();
    if p.len() != n {
        return Err(Error::invalid(format!(
            "lists must have equal length ({} vs {})",
            n,
            p.len()
        )));
    }
    let target = p.values();
    let scale = list_scale(lambda.values(), target);
    let tol = PRECONDITION_TOL * scale;
    let report = check_majorization(p, lambda, MajorizationMode::Equality, tol);
    if !report.holds {
        return Err(Error::MajorizationViolation(format!(
            "p is not majorized by lambda (prefix {})",
            report.first_violation.unwrap_or(n)
        )));
    }

    let settle = 16.0 * f64::EPSILON * scale;
    let mut x = lambda.values().to_vec();
    let mut chain = Vec::new();
    let mut start = 0;
    // Leading coordinates are settled; small deficits within the
    // precondition tolerance are accepted as settled too.
    while let Some(i) = (start..n).find(|&k| x[k] - target[k] > settle) {
        start = i;
        let Some(j) = (i + 1..n).find(|&k| target[k] - x[k] > settle) else {
            break;
        };
        let delta = (x[i] - target[i]).min(target[j] - x[j]);
        let t = (1.0 - delta / (x[i] - x[j])).clamp(0.0, 1.0);
        let step = TTransform { i, j, t };
        step.apply_to(&mut x);
        chain.push(step);
        if chain.len() > n {
            // cannot happen for majorizing input; guards against NaN drift
            return Err(Error::MajorizationViolation(
                "chain failed to converge".into(),
            ));
        }
    }
    Ok(chain)
}

/// The 2x2 block `(u_ii, u_ij, u_ji, u_jj)` for a transform acting on a
/// matrix whose `(i, j)` entry is `a_ij`.
fn rotation_block(a_ij: C64, t: f64) -> [C64; 4] {
    // θ = arccos(√t) ∈ [0, π/2]
    let c = t.sqrt();
    let s = (1.0 - t).max(0.0).sqrt();
    let r = a_ij.norm();
    // with sin θ = 0 the cross terms vanish for any z
    let z = if r == 0.0 || s == 0.0 {
        C64::new(1.0, 0.0)
    } else {
        C64::new(0.0, 1.0) * a_ij.conj() / r
    };
    [z * c, C64::new(s, 0.0), -z * s, C64::new(c, 0.0)]
}

/// In-place `A ← U A U*` for a block unitary on rows/columns `{i, j}`.
fn rotate_in_place(a: &mut ComplexMatrix, i: usize, j: usize, u: &[C64; 4]) {
    let n = a.nrows();
    let [uii, uij, uji, ujj] = *u;
    for k in 0..n {
        let (ri, rj) = (a[(i, k)], a[(j, k)]);
        a[(i, k)] = uii * ri + uij * rj;
        a[(j, k)] = uji * ri + ujj * rj;
    }
    for k in 0..n {
        let (ci, cj) = (a[(k, i)], a[(k, j)]);
        a[(k, i)] = ci * uii.conj() + cj * uij.conj();
        a[(k, j)] = ci * uji.conj() + cj * ujj.conj();
    }
    a[(i, i)].im = 0.0;
    a[(j, j)].im = 0.0;
}

/// In-place `W ← U W`.
fn left_multiply(w: &mut ComplexMatrix, i: usize, j: usize, u: &[C64; 4]) {
    let [uii, uij, uji, ujj] = *u;
    for k in 0..w.ncols() {
        let (ri, rj) = (w[(i, k)], w[(j, k)]);
        w[(i, k)] = uii * ri + uij * rj;
        w[(j, k)] = uji * ri + ujj * rj;
    }
}

/// Realize one T-transform on the diagonal of `a`.
///
/// Returns `(U, U A U*)` where `U` is unitary, equal to the identity off the
/// `{i, j}` block, and `diag(U A U*) = t·diag(A) + (1 - t)·diag(A) ∘ τ`.
pub fn apply_t_transform(
    a: &HermitianMatrix,
    tau: &TTransform,
) -> Result<(ComplexMatrix, HermitianMatrix)> {
    let n = a.dim();
    tau.check_dim(n)?;
    let block = rotation_block(a.as_matrix()[(tau.i, tau.j)], tau.t);
    let mut u = ComplexMatrix::identity(n, n);
    u[(tau.i, tau.i)] = block[0];
    u[(tau.i, tau.j)] = block[1];
    u[(tau.j, tau.i)] = block[2];
    u[(tau.j, tau.j)] = block[3];
    let mut result = a.as_matrix().clone();
    rotate_in_place(&mut result, tau.i, tau.j, &block);
    Ok((u, HermitianMatrix::symmetrized(result)))
}

/// Horn construction together with the accumulated unitary `W`, so that the
/// result equals `W diag(λ) W*`.
pub(crate) fn horn_construct_with_unitary(
    lambda: &EigenList,
    p: &EigenList,
) -> Result<(HermitianMatrix, ComplexMatrix)> {
    let chain = t_transform_chain(lambda, p)?;
    let n = lambda.len();
    let mut a = HermitianMatrix::from_real_diagonal(lambda.values()).into_matrix();
    let mut w = ComplexMatrix::identity(n, n);
    for step in &chain {
        let block = rotation_block(a[(step.i, step.j)], step.t);
        rotate_in_place(&mut a, step.i, step.j, &block);
        left_multiply(&mut w, step.i, step.j, &block);
    }
    Ok((HermitianMatrix::symmetrized(a), w))
}

/// A Hermitian matrix with eigenvalue list `lambda` and diagonal `p`.
pub fn horn_construct(lambda: &EigenList, p: &EigenList) -> Result<HermitianMatrix> {
    horn_construct_with_unitary(lambda, p).map(|(a, _)| a)
}

/// `λ_1 + ... + λ_k`, the maximum of `trace(A P)` over rank-`k` projections.
pub fn ky_fan_sum(a: &HermitianMatrix, k: usize) -> Result<f64> {
    if k == 0 || k > a.dim() {
        return Err(Error::invalid(format!("k = {k} outside 1..={}", a.dim())));
    }
    Ok(a.eigenvalues()[..k].iter().sum())
}

/// Unitary `W` with `‖W A W* - B‖ <= 2ε`, provided the sorted spectra of
/// `A` and `B` agree to within `ε` entrywise.
///
/// `W = V_B V_A*` with both eigenbases in decreasing eigenvalue order, so
/// each spectral projection of `A` lands on the matching one of `B`.
pub fn approx_conjugate(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    eps: f64,
) -> Result<ComplexMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::invalid("dimension mismatch"));
    }
    if !(eps > 0.0) {
        return Err(Error::invalid("epsilon must be positive"));
    }
    let ea = a.eigh();
    let eb = b.eigh();
    // round-off allowance on the matching test only
    let slack = 1e-12 * list_scale(&ea.values, &eb.values);
    if let Some(k) = (0..a.dim()).find(|&k| (ea.values[k] - eb.values[k]).abs() > eps + slack) {
        return Err(Error::DistributionMismatch(format!(
            "sorted eigenvalue {k} differs by {} > {eps}",
            (ea.values[k] - eb.values[k]).abs()
        )));
    }
    Ok(&eb.vectors * ea.vectors.adjoint())
}

/// `‖W A W* - B‖` in operator norm.
pub fn conjugation_error(w: &ComplexMatrix, a: &HermitianMatrix, b: &HermitianMatrix) -> f64 {
    operator_norm(&(w * a.as_matrix() * w.adjoint() - b.as_matrix()))
}
