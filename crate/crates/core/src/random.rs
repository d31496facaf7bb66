//! Seeded generators for randomized experiments.
//!
//! Every generator draws from a ChaCha8 stream. `trial_rng(seed, k)` selects
//! stream `k` of the key derived from `seed` by `SeedableRng::seed_from_u64`,
//! so trial `k` of a run is reproducible on its own and independent of how
//! trials are scheduled across threads.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::eigenlist::{normalize_list, EigenList};
use crate::matrix::{from_spectrum, ComplexMatrix, HermitianMatrix, C64};

pub type ExperimentRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> ExperimentRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn trial_rng(seed: u64, trial: u64) -> ExperimentRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn normal<R: Rng>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Complex Gaussian matrix with independent `N(0, 1)` real and imaginary
/// parts.
pub fn gaussian_matrix<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    DMatrix::from_fn(n, n, |_, _| C64::new(normal(rng), normal(rng)))
}

/// Hermitian matrix `(G + G*) / (2 √(2n))`; the spectrum concentrates in
/// roughly `[-2, 2]`.
pub fn hermitian<R: Rng>(rng: &mut R, n: usize) -> HermitianMatrix {
    let g = gaussian_matrix(rng, n);
    let scale = 1.0 / (2.0 * (2.0 * n as f64).sqrt());
    HermitianMatrix::new((&g + g.adjoint()).scale(scale)).expect("hermitian by construction")
}

/// Haar-distributed unitary: QR of a Gaussian matrix with the phases of
/// `R`'s diagonal moved into `Q`.
pub fn unitary<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let qr = gaussian_matrix(rng, n).qr();
    let (mut q, r) = qr.unpack();
    for k in 0..n {
        let d = r[(k, k)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            q.column_mut(k).iter_mut().for_each(|x| *x *= phase);
        }
    }
    q
}

/// Decreasing list with entries uniform in `[lo, hi)`. With probability
/// 1/5 values are snapped to a coarse grid so ties occur.
pub fn decreasing_list<R: Rng>(rng: &mut R, n: usize, lo: f64, hi: f64) -> EigenList {
    let snap = rng.random_bool(0.2);
    let raw: Vec<f64> = (0..n)
        .map(|_| {
            let x = rng.random_range(lo..hi);
            if snap {
                x.round()
            } else {
                x
            }
        })
        .collect();
    normalize_list(&raw).expect("finite nonempty")
}

/// `(λ, p)` with `p` majorized by `λ`: `p` is the sorted diagonal of a
/// random unitary conjugate of `diag(λ)`.
pub fn majorizing_pair<R: Rng>(rng: &mut R, n: usize) -> (EigenList, EigenList) {
    let lambda = decreasing_list(rng, n, -5.0, 5.0);
    let p = diagonal_of_conjugate(rng, &lambda);
    (lambda, p)
}

pub fn diagonal_of_conjugate<R: Rng>(rng: &mut R, lambda: &EigenList) -> EigenList {
    let u = unitary(rng, lambda.len());
    let a = from_spectrum(&u, lambda.values());
    normalize_list(&a.diagonal()).expect("finite nonempty")
}

/// `(λ, p)` with nonnegative entries and `p` dominated by `λ` without equal
/// totals: a majorized diagonal shrunk by a random factor in `(0, 1]`.
pub fn dominance_pair<R: Rng>(rng: &mut R, n: usize) -> (EigenList, EigenList) {
    let lambda = decreasing_list(rng, n, 0.0, 5.0);
    let p = diagonal_of_conjugate(rng, &lambda);
    let shrink = if rng.random_bool(0.2) {
        1.0
    } else {
        rng.random_range(0.05..1.0)
    };
    let p = p
        .values()
        .iter()
        .map(|&x| (x * shrink).max(0.0))
        .collect::<Vec<_>>();
    (lambda, normalize_list(&p).expect("finite nonempty"))
}

/// Positive semidefinite matrix with spectrum uniform in `[0, 5)`; one draw
/// in four pins a random number of eigenvalues to zero.
pub fn psd_matrix<R: Rng>(rng: &mut R, n: usize) -> HermitianMatrix {
    let mut spec: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..5.0)).collect();
    if rng.random_bool(0.25) {
        let zeros = rng.random_range(0..n);
        spec.iter_mut().take(zeros).for_each(|x| *x = 0.0);
    }
    from_spectrum(&unitary(rng, n), &spec)
}
