//! Finite truncations of the trace-class results.
//!
//! An `ℓ¹` eigenvalue list is represented by its finitely supported part and
//! every construction runs at a caller-chosen truncation `N`. For a list with
//! infinitely many nonzero terms the remainder beyond `N` has trace norm
//! `Σ_{k>N} λ_k`, which tends to zero; that tail is not modeled here.

use crate::eigenlist::{
    check_majorization, normalize_list, reduce_to_equality, EigenList, MajorizationMode,
    DEFAULT_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::horn::{horn_construct, horn_construct_with_unitary};
use crate::matrix::{ComplexMatrix, HermitianMatrix, C64};

/// Tolerance for `|Σp - m|` when asking for a rank-`m` projection.
pub const PROJECTION_SUM_TOL: f64 = 1e-10;

fn require_nonnegative(list: &EigenList, name: &str) -> Result<()> {
    if let Some(x) = list.values().iter().find(|&&x| x < 0.0) {
        return Err(Error::invalid(format!("{name} has negative entry {x}")));
    }
    Ok(())
}

/// Whether `p` is the diagonal of some positive trace-class operator with
/// eigenvalue list `lambda`: prefix inequalities plus equal totals.
pub fn feasible_diagonal(p: &EigenList, lambda: &EigenList, tol: f64) -> Result<bool> {
    require_nonnegative(p, "p")?;
    require_nonnegative(lambda, "lambda")?;
    Ok(check_majorization(p, lambda, MajorizationMode::Equality, tol).holds)
}

fn support_len(list: &EigenList) -> usize {
    list.values()
        .iter()
        .rposition(|&x| x != 0.0)
        .map_or(0, |k| k + 1)
}

fn pad_to(list: &EigenList, n: usize) -> Result<EigenList> {
    EigenList::with_tolerance(list.padded(n), list.tolerance())
}

/// Exact `N × N` positive matrix with diagonal `p` and eigenvalues `lambda`
/// (both zero-padded to `N`). For finitely supported `lambda` the closed
/// orbit is a single unitary orbit, so no approximation is involved.
pub fn realize_finite_rank(lambda: &EigenList, p: &EigenList, n: usize) -> Result<HermitianMatrix> {
    if n == 0 {
        return Err(Error::invalid("truncation must be positive"));
    }
    let (sp, sl) = (support_len(p), support_len(lambda));
    if sp > n || sl > n {
        return Err(Error::invalid(format!(
            "truncation {n} cannot hold supports of sizes {sp} and {sl}"
        )));
    }
    let pp = pad_to(p, n)?;
    let lp = pad_to(lambda, n)?;
    let scale = lp.values().iter().fold(1.0, |m: f64, x| m.max(x.abs()));
    if !feasible_diagonal(&pp, &lp, 1e-10 * scale)? {
        return Err(Error::MajorizationViolation(
            "p is not a feasible diagonal for lambda".into(),
        ));
    }
    horn_construct(&lp, &pp)
}

/// A contraction `L` with `diag(L* A L) = (p, 0, ..., 0)`.
///
/// Pipeline: reduce the top-`r` eigenvalues of `A` to an equality-majorant
/// `μ` of `p`, Horn-construct an orthonormal family `v_k` in the top-`r`
/// eigenspace with `<B v_k, v_k> = p_k` for `B = Σ μ_k ξ_k ξ_k*`, then scale
/// column `k` by `√t_k` where `t_k = p_k / <A v_k, v_k>` (zero when the
/// denominator vanishes). `B <= A` on that subspace, so every `t_k <= 1`.
pub fn contraction_diagonal(a: &HermitianMatrix, p: &EigenList) -> Result<ComplexMatrix> {
    let d = a.dim();
    let r = p.len();
    if r > d {
        return Err(Error::invalid(format!(
            "p has {r} entries but A is {d}x{d}"
        )));
    }
    require_nonnegative(p, "p")?;
    let eig = a.eigh();
    let scale = eig.values.iter().fold(1.0, |m: f64, x| m.max(x.abs()));
    if eig.values[d - 1] < -1e-10 * scale {
        return Err(Error::invalid("A must be positive semidefinite"));
    }
    let top: Vec<f64> = eig.values[..r].iter().map(|&x| x.max(0.0)).collect();
    let top = EigenList::new(top)?;
    if !check_majorization(
        p,
        &top,
        MajorizationMode::Dominance,
        DEFAULT_TOLERANCE * scale,
    )
    .holds
    {
        return Err(Error::MajorizationViolation(
            "p is not dominated by the top eigenvalues of A".into(),
        ));
    }
    let mu = reduce_to_equality(p, &top)?;
    // H = W diag(μ) W*, so <diag(μ) W* e_k, W* e_k> = p_k
    let (_, w) = horn_construct_with_unitary(&mu, p)?;
    let frame = eig.vectors.columns(0, r).into_owned();
    let family = frame * w.adjoint();

    let mut l = ComplexMatrix::zeros(d, d);
    let a_m = a.as_matrix();
    for k in 0..r {
        let v = family.column(k);
        let energy = (v.adjoint() * a_m * v)[(0, 0)].re;
        let t = if energy > 0.0 {
            (p.values()[k] / energy).clamp(0.0, 1.0)
        } else {
            0.0
        };
        l.set_column(k, &(v * C64::new(t.sqrt(), 0.0)));
    }
    Ok(l)
}

/// Rank-`m` orthogonal projection in `M_N` whose diagonal is `p` (in the
/// given order, not necessarily sorted).
pub fn projection_with_diagonal(p: &[f64], m: usize, n: usize) -> Result<HermitianMatrix> {
    if m == 0 || m > n {
        return Err(Error::invalid(format!("rank {m} must lie in 1..={n}")));
    }
    if let Some(x) = p.iter().find(|&&x| !(0.0..=1.0).contains(&x)) {
        return Err(Error::invalid(format!("entry {x} outside [0, 1]")));
    }
    if p.iter().skip(n).any(|&x| x != 0.0) {
        return Err(Error::invalid(format!(
            "p is supported beyond truncation {n}"
        )));
    }
    let mut padded = p.to_vec();
    padded.resize(n, 0.0);
    let total: f64 = padded.iter().sum();
    if (total - m as f64).abs() > PROJECTION_SUM_TOL {
        return Err(Error::TraceMismatch(format!("Σp = {total}, expected {m}")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| padded[b].total_cmp(&padded[a]).then(a.cmp(&b)));
    let sorted = normalize_list(&padded)?;
    let mut lambda = vec![0.0; n];
    lambda[..m].fill(1.0);
    let lambda = EigenList::new(lambda)?;
    let q = horn_construct(&lambda, &sorted)?;
    // undo the sort: position order[k] receives sorted entry k
    let qm = q.as_matrix();
    let mut out = ComplexMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            out[(order[a], order[b])] = qm[(a, b)];
        }
    }
    Ok(HermitianMatrix::symmetrized(out))
}

/// `Σ |λ_k - μ_k|` after zero-padding. Lower bound for `‖A - B‖₁` whenever
/// `A` and `B` carry these eigenvalue lists.
pub fn eigenlist_l1_distance(lambda: &EigenList, mu: &EigenList) -> f64 {
    let n = lambda.len().max(mu.len());
    lambda
        .padded(n)
        .iter()
        .zip(mu.padded(n))
        .map(|(a, b)| (a - b).abs())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::operator_norm;

    fn list(v: &[f64]) -> EigenList {
        EigenList::new(v.to_vec()).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn feasibility_examples() {
        let p = list(&[0.5, 0.25, 0.125, 0.0625, 0.0625]);
        let l = list(&[1.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(feasible_diagonal(&p, &l, 1e-12).unwrap());
        assert!(feasible_diagonal(&l, &l, 1e-12).unwrap());
        assert!(!feasible_diagonal(&list(&[0.6, 0.6]), &list(&[1.0, 0.0]), 1e-12).unwrap());
        assert!(matches!(
            feasible_diagonal(&list(&[0.5, -0.5]), &l, 1e-12),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn finite_rank_examples() {
        let l = list(&[1.0, 0.0, 0.0, 0.0]);
        let p = list(&[0.5, 0.25, 0.125, 0.125]);
        let a = realize_finite_rank(&l, &p, 4).unwrap();
        assert!(close(&a.diagonal(), p.values(), 1e-10));
        assert!(close(&a.eigenvalues(), l.values(), 1e-8));
        assert!(a.min_eigenvalue() > -1e-12);

        let same = realize_finite_rank(&l, &l, 4).unwrap();
        assert_eq!(same, HermitianMatrix::from_real_diagonal(l.values()));

        let l3 = list(&[2.0, 1.0, 0.0]);
        let p3 = list(&[1.0, 1.0, 1.0]);
        let a = realize_finite_rank(&l3, &p3, 3).unwrap();
        assert_eq!(a, horn_construct(&l3, &p3).unwrap());
    }

    #[test]
    fn finite_rank_pads_and_rejects() {
        let a = realize_finite_rank(&list(&[1.0]), &list(&[0.5, 0.5]), 3).unwrap();
        assert!(close(&a.diagonal(), &[0.5, 0.5, 0.0], 1e-10));
        assert!(matches!(
            realize_finite_rank(&list(&[1.0]), &list(&[0.25; 4]), 3),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            realize_finite_rank(&list(&[0.5, 0.5]), &list(&[0.9, 0.1]), 2),
            Err(Error::MajorizationViolation(_))
        ));
    }

    fn check_contraction(a: &HermitianMatrix, p: &[f64]) {
        let l = contraction_diagonal(a, &list(p)).unwrap();
        assert!(operator_norm(&l) <= 1.0 + 1e-12);
        let lal = l.adjoint() * a.as_matrix() * &l;
        for k in 0..a.dim() {
            let want = p.get(k).copied().unwrap_or(0.0);
            assert!((lal[(k, k)].re - want).abs() < 1e-10, "entry {k}");
        }
    }

    #[test]
    fn contraction_examples() {
        let a = HermitianMatrix::from_real_diagonal(&[1.0, 0.0]);
        let l = contraction_diagonal(&a, &list(&[0.5])).unwrap();
        assert!((l[(0, 0)].norm() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(l[(1, 0)].norm() < 1e-15);
        check_contraction(&a, &[0.5]);

        let b = HermitianMatrix::from_real_rows(&[
            vec![2.0, 0.5, 0.0],
            vec![0.5, 1.0, 0.2],
            vec![0.0, 0.2, 0.5],
        ])
        .unwrap();
        let mut d = b.diagonal();
        d.sort_by(|x, y| y.total_cmp(x));
        check_contraction(&b, &d);

        check_contraction(
            &HermitianMatrix::from_real_diagonal(&[3.0, 1.0]),
            &[2.0, 2.0],
        );
    }

    #[test]
    fn contraction_rejects() {
        let a = HermitianMatrix::from_real_diagonal(&[1.0, 0.0]);
        assert!(matches!(
            contraction_diagonal(&a, &list(&[1.5])),
            Err(Error::MajorizationViolation(_))
        ));
        assert!(matches!(
            contraction_diagonal(&a, &list(&[0.1, 0.1, 0.1])),
            Err(Error::InvalidInput(_))
        ));
        let neg = HermitianMatrix::from_real_diagonal(&[1.0, -1.0]);
        assert!(matches!(
            contraction_diagonal(&neg, &list(&[0.5])),
            Err(Error::InvalidInput(_))
        ));
    }

    fn assert_projection(q: &HermitianMatrix, p: &[f64], m: usize) {
        let qm = q.as_matrix();
        let idem = operator_norm(&(qm * qm - qm));
        assert!(idem <= 1e-8, "‖P² - P‖ = {idem}");
        assert!((q.trace() - m as f64).abs() <= 1e-8);
        assert!(close(&q.diagonal()[..p.len()], p, 1e-10));
    }

    #[test]
    fn projection_examples() {
        let q = projection_with_diagonal(&[0.5, 0.5], 1, 2).unwrap();
        assert_projection(&q, &[0.5, 0.5], 1);
        assert!((q.as_matrix()[(0, 1)].norm() - 0.5).abs() < 1e-14);

        let q = projection_with_diagonal(&[1.0, 1.0, 0.0], 2, 3).unwrap();
        assert_eq!(q, HermitianMatrix::from_real_diagonal(&[1.0, 1.0, 0.0]));

        let p = [0.75, 0.75, 0.25, 0.25];
        assert_projection(&projection_with_diagonal(&p, 2, 4).unwrap(), &p, 2);

        // unsorted input keeps its order
        let p = [0.25, 0.75, 0.25, 0.75];
        assert_projection(&projection_with_diagonal(&p, 2, 4).unwrap(), &p, 2);
    }

    #[test]
    fn projection_rejects() {
        assert!(matches!(
            projection_with_diagonal(&[1.5, 0.5], 2, 2),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            projection_with_diagonal(&[0.5, 0.4], 1, 2),
            Err(Error::TraceMismatch(_))
        ));
        assert!(matches!(
            projection_with_diagonal(&[0.5, 0.5, 0.5, 0.5], 2, 3),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn l1_distance_examples() {
        assert_eq!(
            eigenlist_l1_distance(&list(&[1.0, 0.0]), &list(&[0.5, 0.5])),
            1.0
        );
        let l = list(&[3.0, 1.0]);
        assert_eq!(eigenlist_l1_distance(&l, &l), 0.0);
        assert_eq!(
            eigenlist_l1_distance(&list(&[1.0]), &list(&[0.5, 0.5])),
            1.0
        );
    }
}
