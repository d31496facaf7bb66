//! Conditional expectation onto the diagonal MASA of `M_n`.
//!
//! `M_n` with the normalized trace stands in for a finite factor and the
//! diagonal matrices for a MASA; `E` zeroes the off-diagonal entries. The
//! operator inequalities `E(A)_+ <= E(A_+)` and `f(E(A)) <= E(f(A))` for
//! convex `f`, and the distributional Schur inequality `m_{E(A)} ⪯ m_A`,
//! are checked here by spectral calculus. Step functions on `[0, 1]` model
//! the continuous MASA `L^∞[0, 1]` for the alignment construction.
//!
//! Whether `E` of the norm-closed orbit of `A` fills out every `B` in the
//! MASA with `m_B ⪯ m_A` in a type II₁ factor is an open problem; nothing
//! here attempts it.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convex::ConvexFn;
use crate::eigenlist::{check_majorization, normalize_list, MajorizationMode};
use crate::error::{Error, Result};
use crate::matrix::{HermitianMatrix, C64};
use crate::measure::{majorize_measure, CompactMeasure, MeasureMethod, StepFunction};
use crate::random::{hermitian, trial_rng};

/// Slack for positive-semidefiniteness tests (minimum eigenvalue).
pub const PSD_SLACK: f64 = 1e-9;

/// `E(A) = diag(a_11, ..., a_nn)`.
pub fn pinch_diag(a: &HermitianMatrix) -> HermitianMatrix {
    HermitianMatrix::from_real_diagonal(&a.diagonal())
}

/// `A_+`: spectral calculus with negative eigenvalues set to zero.
pub fn positive_part(a: &HermitianMatrix) -> HermitianMatrix {
    a.apply_fn(|x| x.max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PinchCheck {
    pub holds: bool,
    /// Minimum eigenvalue of `E(f(A)) - f(E(A))`.
    pub witness: f64,
}

/// Check `f(E(A)) <= E(f(A))`.
///
/// Both sides are diagonal, so the difference's minimum eigenvalue is the
/// smallest entry of `(f(A))_kk - f(a_kk)`.
pub fn convex_pinch_check(a: &HermitianMatrix, f: &ConvexFn) -> Result<PinchCheck> {
    let spec = a.eigenvalues();
    let (lo, hi) = (spec[spec.len() - 1], spec[0]);
    f.check_domain(lo, hi, 1e-12)?;
    let (dlo, dhi) = f.domain();
    let fa = a.apply_fn(|x| f.eval(x.clamp(dlo, dhi)));
    let witness = a
        .diagonal()
        .iter()
        .zip(fa.diagonal())
        .map(|(&akk, fkk)| fkk - f.eval(akk.clamp(dlo, dhi)))
        .fold(f64::INFINITY, f64::min);
    Ok(PinchCheck {
        holds: witness >= -PSD_SLACK,
        witness,
    })
}

/// `m_{E(A)} ⪯ m_A`, decided by the hinge test. Always true; the function
/// exists to exercise the claim.
pub fn schur_distribution_check(a: &HermitianMatrix) -> Result<bool> {
    let diag = CompactMeasure::from_matrix(&pinch_diag(a))?;
    let full = CompactMeasure::from_matrix(a)?;
    majorize_measure(&diag, &full, MeasureMethod::Hinge)
}

/// Classical Schur verdict for the same matrix: sorted diagonal majorized by
/// the eigenvalue list with equal totals.
pub fn schur_classical_check(a: &HermitianMatrix, tol: f64) -> Result<bool> {
    let p = normalize_list(&a.diagonal())?;
    let lambda = normalize_list(&a.eigenvalues())?;
    Ok(check_majorization(&p, &lambda, MajorizationMode::Equality, tol).holds)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Alignment {
    /// `permutation[k]` is the cell of `f` placed on cell `k` of `g`.
    pub permutation: Vec<usize>,
    /// `max_k |f(π(k)) - g(k)|`.
    pub achieved: f64,
}

fn sorted_cells(v: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]).then(a.cmp(&b)));
    idx
}

/// Measure-preserving cell permutation `π` carrying `f` close to `g`.
///
/// Sort-and-match: the `k`-th smallest cell of `f` goes to the `k`-th
/// smallest cell of `g`, ties broken by index. The result satisfies
/// `achieved <= ε` whenever the sorted values are `ε`-matched, well inside
/// the `2ε` bound of the quantized construction.
pub fn align_step_functions(f: &StepFunction, g: &StepFunction, eps: f64) -> Result<Alignment> {
    if f.cells() != g.cells() {
        return Err(Error::invalid(format!(
            "cell counts differ ({} vs {})",
            f.cells(),
            g.cells()
        )));
    }
    if !(eps > 0.0) {
        return Err(Error::invalid("epsilon must be positive"));
    }
    let (fv, gv) = (f.values(), g.values());
    let fo = sorted_cells(fv);
    let go = sorted_cells(gv);
    let slack = 1e-12 * fv.iter().chain(gv).fold(1.0, |m: f64, x| m.max(x.abs()));
    for (k, (&a, &b)) in fo.iter().zip(&go).enumerate() {
        let d = (fv[a] - gv[b]).abs();
        if d > eps + slack {
            return Err(Error::DistributionMismatch(format!(
                "{k}-th smallest values differ by {d} > {eps}"
            )));
        }
    }
    let mut permutation = vec![0; fv.len()];
    for (&a, &b) in fo.iter().zip(&go) {
        permutation[b] = a;
    }
    let achieved = permutation
        .iter()
        .enumerate()
        .map(|(k, &src)| (fv[src] - gv[k]).abs())
        .fold(0.0, f64::max);
    Ok(Alignment {
        permutation,
        achieved,
    })
}

/// The convex test family used by the experiments: `x²`, `|x|`, `e^x`,
/// twenty hinges at random thresholds in `[-2, 2]`, and five random cone
/// elements `a + bx + Σ c_k g_{r_k}` with three hinge terms each.
pub fn convex_test_family<R: Rng>(rng: &mut R) -> Vec<ConvexFn> {
    let mut family = vec![ConvexFn::Square, ConvexFn::Abs, ConvexFn::Exp];
    family.extend((0..20).map(|_| ConvexFn::Hinge(rng.random_range(-2.0..2.0))));
    for _ in 0..5 {
        let a = rng.random_range(-1.0..1.0);
        let b = rng.random_range(-1.0..1.0);
        let terms = (0..3)
            .map(|_| (rng.random_range(0.0..2.0), rng.random_range(-2.0..2.0)))
            .collect();
        family.push(ConvexFn::cone(a, b, terms).expect("nonnegative weights"));
    }
    family
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PinchExperimentReport {
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    /// Convex test functions evaluated per trial.
    pub family_size: usize,
    /// Minimum over trials of `λ_min(E(A_+) - E(A)_+)`.
    pub min_witness_positive_part: f64,
    /// Minimum over trials and family members of `λ_min(E(f(A)) - f(E(A)))`.
    pub min_witness_convex: f64,
    pub min_witness: f64,
    /// `max(0, -min_witness)`.
    pub max_violation: f64,
    pub schur_failures: u64,
    /// Trials where the distributional and classical Schur verdicts differ.
    pub schur_disagreements: u64,
}

impl PinchExperimentReport {
    pub fn passed(&self) -> bool {
        self.min_witness >= -PSD_SLACK && self.schur_failures == 0 && self.schur_disagreements == 0
    }
}

struct TrialOutcome {
    positive: f64,
    convex: f64,
    schur: bool,
    agree: bool,
    family_size: usize,
}

fn run_trial(n: usize, seed: u64, trial: u64) -> Result<TrialOutcome> {
    let mut rng = trial_rng(seed, trial);
    let a = hermitian(&mut rng, n);
    let family = convex_test_family(&mut rng);
    let positive = positive_pinch_witness(&a);
    let mut convex = f64::INFINITY;
    for f in &family {
        convex = convex.min(convex_pinch_check(&a, f)?.witness);
    }
    let schur = schur_distribution_check(&a)?;
    let classical = schur_classical_check(&a, 1e-9)?;
    Ok(TrialOutcome {
        positive,
        convex,
        schur,
        agree: schur == classical,
        family_size: family.len(),
    })
}

/// `λ_min(E(A_+) - E(A)_+)`, computed from the two matrices directly.
pub fn positive_pinch_witness(a: &HermitianMatrix) -> f64 {
    let lhs = pinch_diag(&positive_part(a));
    let rhs = positive_part(&pinch_diag(a));
    lhs.sub(&rhs).expect("same dimension").min_eigenvalue()
}

/// Randomized check of the pinching inequalities and the Schur theorem on
/// `trials` Hermitian `n × n` matrices. Trials run in parallel, each on its
/// own ChaCha stream; the reduction is order-independent so the report is
/// deterministic for a given seed.
pub fn pinch_experiment(n: usize, trials: u64, seed: u64) -> Result<PinchExperimentReport> {
    if n == 0 {
        return Err(Error::invalid("dimension must be positive"));
    }
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|k| run_trial(n, seed, k))
        .collect::<Result<_>>()?;
    let mut report = PinchExperimentReport {
        n,
        trials,
        seed,
        family_size: outcomes.first().map_or(0, |o| o.family_size),
        min_witness_positive_part: f64::INFINITY,
        min_witness_convex: f64::INFINITY,
        min_witness: f64::INFINITY,
        max_violation: 0.0,
        schur_failures: 0,
        schur_disagreements: 0,
    };
    for o in &outcomes {
        report.min_witness_positive_part = report.min_witness_positive_part.min(o.positive);
        report.min_witness_convex = report.min_witness_convex.min(o.convex);
        report.schur_failures += u64::from(!o.schur);
        report.schur_disagreements += u64::from(!o.agree);
    }
    report.min_witness = report
        .min_witness_positive_part
        .min(report.min_witness_convex);
    report.max_violation = (-report.min_witness).max(0.0);
    Ok(report)
}

/// `D1 A D2` for real diagonal `D1`, `D2`; used to test the bimodule
/// property of `E`.
pub fn sandwich(d1: &[f64], a: &HermitianMatrix, d2: &[f64]) -> nalgebra::DMatrix<C64> {
    let m = a.as_matrix();
    nalgebra::DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * (d1[i] * d2[j]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::seeded;

    #[test]
    fn pinch_examples() {
        let x = HermitianMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(
            pinch_diag(&x),
            HermitianMatrix::from_real_diagonal(&[0.0, 0.0])
        );
        let d = HermitianMatrix::from_real_diagonal(&[3.0, -1.0]);
        assert_eq!(pinch_diag(&d), d);
        let a = HermitianMatrix::from_real_rows(&[vec![2.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let e = pinch_diag(&a);
        assert_eq!(e, HermitianMatrix::from_real_diagonal(&[2.0, 0.0]));
        assert_eq!(e.trace(), a.trace());
    }

    #[test]
    fn positive_part_examples() {
        let d = HermitianMatrix::from_real_diagonal(&[1.0, -1.0]);
        let p = positive_part(&d);
        assert!(
            (p.as_matrix() - HermitianMatrix::from_real_diagonal(&[1.0, 0.0]).as_matrix()).norm()
                < 1e-15
        );

        let psd = HermitianMatrix::from_real_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        assert!((positive_part(&psd).as_matrix() - psd.as_matrix()).norm() < 1e-14);

        let x = HermitianMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let p = positive_part(&x);
        for i in 0..2 {
            for j in 0..2 {
                assert!((p.as_matrix()[(i, j)] - C64::new(0.5, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn positive_part_dominates() {
        let mut rng = seeded(3);
        for _ in 0..20 {
            let a = hermitian(&mut rng, 6);
            let ap = positive_part(&a);
            assert!(ap.min_eigenvalue() >= -1e-10);
            assert!(ap.sub(&a).unwrap().min_eigenvalue() >= -1e-10);
        }
    }

    #[test]
    fn convex_examples() {
        let x = HermitianMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let c = convex_pinch_check(&x, &ConvexFn::Square).unwrap();
        assert!(c.holds);
        assert!((c.witness - 1.0).abs() < 1e-14);

        let d = HermitianMatrix::from_real_diagonal(&[1.0, -0.5, 2.0]);
        for f in [
            ConvexFn::Square,
            ConvexFn::Exp,
            ConvexFn::Abs,
            ConvexFn::Hinge(0.3),
        ] {
            let c = convex_pinch_check(&d, &f).unwrap();
            assert!(c.holds && c.witness.abs() < 1e-13, "{f:?}");
        }
    }

    #[test]
    fn convex_domain_error() {
        let d = HermitianMatrix::from_real_diagonal(&[1.0, -0.5]);
        assert!(matches!(
            convex_pinch_check(&d, &ConvexFn::XLogX),
            Err(Error::InvalidInput(_))
        ));
        let psd = HermitianMatrix::from_real_rows(&[vec![1.0, 0.5], vec![0.5, 1.0]]).unwrap();
        assert!(convex_pinch_check(&psd, &ConvexFn::XLogX).unwrap().holds);
    }

    #[test]
    fn schur_examples() {
        let x = HermitianMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(schur_distribution_check(&x).unwrap());
        let d = HermitianMatrix::from_real_diagonal(&[1.0, 2.0, 2.0]);
        assert!(schur_distribution_check(&d).unwrap());
    }

    #[test]
    fn conditional_expectation_bimodule() {
        let mut rng = seeded(11);
        for _ in 0..20 {
            let a = hermitian(&mut rng, 5);
            let d1: Vec<f64> = (0..5).map(|_| rng.random_range(-2.0..2.0)).collect();
            let d2: Vec<f64> = (0..5).map(|_| rng.random_range(-2.0..2.0)).collect();
            let lhs = sandwich(&d1, &a, &d2);
            let e = a.diagonal();
            for k in 0..5 {
                assert!((lhs[(k, k)].re - d1[k] * e[k] * d2[k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn align_examples() {
        let f = StepFunction::new(vec![1.0, 0.0, 1.0, 0.0]).unwrap();
        let g = StepFunction::new(vec![1.0, 1.0, 0.0, 0.0]).unwrap();
        let al = align_step_functions(&f, &g, 0.1).unwrap();
        assert_eq!(al.achieved, 0.0);
        assert_eq!(al.permutation, vec![0, 2, 1, 3]);

        let al = align_step_functions(&f, &f, 0.1).unwrap();
        assert_eq!(al.permutation, vec![0, 1, 2, 3]);
        assert_eq!(al.achieved, 0.0);

        let eps = 0.125;
        let f = StepFunction::new(vec![1.0, 0.0]).unwrap();
        let g = StepFunction::new(vec![1.0 + eps, 0.0]).unwrap();
        let al = align_step_functions(&f, &g, eps).unwrap();
        assert_eq!(al.achieved, eps);
        assert!(al.achieved <= 2.0 * eps);
    }

    #[test]
    fn align_rejects() {
        let f = StepFunction::new(vec![1.0, 0.0]).unwrap();
        let g = StepFunction::new(vec![2.0, 0.0]).unwrap();
        assert!(matches!(
            align_step_functions(&f, &g, 0.5),
            Err(Error::DistributionMismatch(_))
        ));
        let h = StepFunction::new(vec![1.0]).unwrap();
        assert!(matches!(
            align_step_functions(&f, &h, 0.5),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn experiment_is_deterministic() {
        let a = pinch_experiment(6, 24, 7).unwrap();
        let b = pinch_experiment(6, 24, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.passed());
        assert_eq!(a.family_size, 28);
    }
}
