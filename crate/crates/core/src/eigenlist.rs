//! Decreasing real sequences and prefix-sum majorization.
//!
//! An [`EigenList`] holds either an eigenvalue list `λ` or a diagonal list
//! `p`. Lists of different lengths are compared after zero-padding, which is
//! exact for the eigenvalue lists of positive compact operators.

use serde::{Deserialize, Serialize};

use crate::convex::ConvexFn;
use crate::error::{Error, Result};

/// Default slack for the decreasing-order invariant.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// A finite, decreasing (within `tolerance`) sequence of reals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawList", into = "RawList")]
pub struct EigenList {
    values: Vec<f64>,
    tolerance: f64,
}

#[derive(Serialize, Deserialize)]
struct RawList {
    values: Vec<f64>,
}

impl TryFrom<RawList> for EigenList {
    type Error = Error;

    fn try_from(raw: RawList) -> Result<Self> {
        EigenList::new(raw.values)
    }
}

impl From<EigenList> for RawList {
    fn from(list: EigenList) -> Self {
        RawList {
            values: list.values,
        }
    }
}

impl EigenList {
    /// Wrap an already-decreasing sequence.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(values, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(values: Vec<f64>, tolerance: f64) -> Result<Self> {
        if !(tolerance >= 0.0) {
            return Err(Error::invalid("tolerance must be nonnegative"));
        }
        check_entries(&values)?;
        if let Some(k) = values.windows(2).position(|w| w[0] < w[1] - tolerance) {
            return Err(Error::invalid(format!(
                "list is not decreasing at position {k}: {} < {}",
                values[k],
                values[k + 1]
            )));
        }
        Ok(EigenList { values, tolerance })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Copy padded with zeros (or truncated) to length `n`.
    pub fn padded(&self, n: usize) -> Vec<f64> {
        let mut v = self.values.clone();
        v.resize(n, 0.0);
        v
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&x| x >= 0.0)
    }

    /// Parse a CSV list: one value per line, blank lines ignored.
    pub fn from_csv(text: &str) -> Result<Self> {
        let raw = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.parse::<f64>()
                    .map_err(|e| Error::invalid(format!("bad CSV value {l:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        normalize_list(&raw)
    }

    pub fn to_csv(&self) -> String {
        self.values.iter().map(|v| format!("{v:.16e}\n")).collect()
    }
}

fn check_entries(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::invalid("list must be nonempty"));
    }
    if let Some(x) = values.iter().find(|x| !x.is_finite()) {
        return Err(Error::invalid(format!("non-finite entry {x}")));
    }
    Ok(())
}

/// Sort a raw sequence into decreasing order.
pub fn normalize_list(raw: &[f64]) -> Result<EigenList> {
    check_entries(raw)?;
    let mut values = raw.to_vec();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(EigenList {
        values,
        tolerance: DEFAULT_TOLERANCE,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MajorizationMode {
    /// Prefix inequalities plus equal totals.
    Equality,
    /// Prefix inequalities only.
    Dominance,
}

impl std::str::FromStr for MajorizationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "equality" => Ok(MajorizationMode::Equality),
            "dominance" => Ok(MajorizationMode::Dominance),
            other => Err(Error::invalid(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorizationReport {
    pub holds: bool,
    /// Length `k` (1-based) of the first prefix whose inequality fails. In
    /// equality mode a trace mismatch alone reports `k = n`.
    pub first_violation: Option<usize>,
    /// `Λ_k - P_k` for each prefix length `k = 1..=n`.
    pub slack: Vec<f64>,
    /// `Σλ - Σp`.
    pub trace_gap: f64,
}

/// Compare prefix sums of `p` against those of `lambda`.
pub fn check_majorization(
    p: &EigenList,
    lambda: &EigenList,
    mode: MajorizationMode,
    tol: f64,
) -> MajorizationReport {
    let n = p.len().max(lambda.len());
    let pv = p.padded(n);
    let lv = lambda.padded(n);
    let mut slack = Vec::with_capacity(n);
    let (mut big_p, mut big_l) = (0.0, 0.0);
    for k in 0..n {
        big_p += pv[k];
        big_l += lv[k];
        slack.push(big_l - big_p);
    }
    let trace_gap = slack[n - 1];
    let mut first_violation = slack.iter().position(|&s| s < -tol).map(|k| k + 1);
    if first_violation.is_none() && mode == MajorizationMode::Equality && trace_gap.abs() > tol {
        first_violation = Some(n);
    }
    MajorizationReport {
        holds: first_violation.is_none(),
        first_violation,
        slack,
        trace_gap,
    }
}

/// Shrink `lambda` to a decreasing `μ` with `0 <= μ_k <= λ_k`, prefix sums
/// still dominating those of `p`, and `Σμ = Σp`.
///
/// Follows the induction: solve the length `n - 1` problem to get `μ'`, then
/// slide along the segment from `x = (μ', 0)` to `y = λ` until the total
/// matches `Σp`. Both endpoints satisfy the first `n - 1` constraints and the
/// constraint set is convex, so every point of the segment does too.
pub fn reduce_to_equality(p: &EigenList, lambda: &EigenList) -> Result<EigenList> {
    if !p.is_nonnegative() || !lambda.is_nonnegative() {
        return Err(Error::invalid("reduction requires nonnegative lists"));
    }
    let n = p.len();
    let lv = lambda.padded(n);
    let l_list = EigenList::with_tolerance(lv.clone(), lambda.tolerance())?;
    let report = check_majorization(p, &l_list, MajorizationMode::Dominance, DEFAULT_TOLERANCE);
    if !report.holds {
        return Err(Error::MajorizationViolation(format!(
            "p is not dominated by lambda at prefix {}",
            report.first_violation.unwrap_or(0)
        )));
    }
    let mu = reduce_recursive(p.values(), &lv);
    Ok(EigenList {
        values: mu,
        tolerance: p.tolerance().max(lambda.tolerance()),
    })
}

fn reduce_recursive(p: &[f64], lambda: &[f64]) -> Vec<f64> {
    let n = p.len();
    if n == 1 {
        // prefix dominance guarantees p_1 <= λ_1
        return vec![p[0].min(lambda[0])];
    }
    let mut x = reduce_recursive(&p[..n - 1], &lambda[..n - 1]);
    x.push(0.0);
    let target: f64 = p.iter().sum();
    let fx: f64 = x.iter().sum();
    let fy: f64 = lambda.iter().sum();
    let s = if fy == fx {
        0.0
    } else {
        ((target - fx) / (fy - fx)).clamp(0.0, 1.0)
    };
    x.iter()
        .zip(lambda)
        .map(|(&xk, &yk)| ((1.0 - s) * xk + s * yk).min(yk).max(0.0))
        .collect()
}

/// Hardy-Littlewood-Pólya corroboration: `Σ f(p_k) <= Σ f(λ_k) + tol` for
/// every `f` in `family`. Requires equal totals.
pub fn hlp_convex_check(
    p: &EigenList,
    lambda: &EigenList,
    family: &[ConvexFn],
    tol: f64,
) -> Result<bool> {
    if family.is_empty() {
        return Err(Error::invalid("convex family must be nonempty"));
    }
    let n = p.len().max(lambda.len());
    let pv = p.padded(n);
    let lv = lambda.padded(n);
    let gap = pv.iter().sum::<f64>() - lv.iter().sum::<f64>();
    if gap.abs() > tol {
        return Err(Error::TraceMismatch(format!("Σp - Σλ = {gap}")));
    }
    Ok(family.iter().all(|f| {
        let lhs: f64 = pv.iter().map(|&x| f.eval(x)).sum();
        let rhs: f64 = lv.iter().map(|&x| f.eval(x)).sum();
        lhs <= rhs + tol
    }))
}

/// Hinge functions at every entry of either list. Against this family the
/// HLP test is equivalent to prefix-sum majorization.
pub fn hinge_family(p: &EigenList, lambda: &EigenList) -> Vec<ConvexFn> {
    p.values()
        .iter()
        .chain(lambda.values())
        .map(|&t| ConvexFn::Hinge(t))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn list(v: &[f64]) -> EigenList {
        EigenList::new(v.to_vec()).unwrap()
    }

    /// The four constraints of the reduction: decreasing, `0 <= μ_k <= λ_k`,
    /// prefix domination of `p`, equal totals.
    fn lemma_constraints_hold(p: &[f64], lambda: &[f64], mu: &[f64], tol: f64) -> bool {
        let decreasing = mu.windows(2).all(|w| w[0] >= w[1] - tol);
        let boxed = mu
            .iter()
            .zip(lambda)
            .all(|(&m, &l)| m >= -tol && m <= l + tol);
        let mut ok_prefix = true;
        let (mut sp, mut sm) = (0.0, 0.0);
        for k in 0..p.len() {
            sp += p[k];
            sm += mu[k];
            ok_prefix &= sp <= sm + tol;
        }
        decreasing && boxed && ok_prefix && (sp - sm).abs() <= tol
    }

    #[test]
    fn normalize_sorts_decreasing() {
        assert_eq!(
            normalize_list(&[1.0, 3.0, 2.0]).unwrap().values(),
            &[3.0, 2.0, 1.0]
        );
        assert_eq!(normalize_list(&[5.0]).unwrap().values(), &[5.0]);
        assert_eq!(normalize_list(&[0.5; 3]).unwrap().values(), &[0.5; 3]);
    }

    #[test]
    fn normalize_rejects_bad_input() {
        assert!(matches!(normalize_list(&[]), Err(Error::InvalidInput(_))));
        assert!(matches!(
            normalize_list(&[1.0, f64::NAN]),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            normalize_list(&[f64::INFINITY]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn new_rejects_increasing() {
        assert!(EigenList::new(vec![1.0, 2.0]).is_err());
        assert!(EigenList::new(vec![1.0, 1.0 + 1e-13]).is_ok());
    }

    #[test]
    fn majorization_examples() {
        let r = check_majorization(
            &list(&[2.0, 2.0]),
            &list(&[3.0, 1.0]),
            MajorizationMode::Equality,
            1e-12,
        );
        assert!(r.holds);
        assert_eq!(r.slack, vec![1.0, 0.0]);
        assert_eq!(r.trace_gap, 0.0);

        let ones = list(&[1.0, 1.0, 1.0]);
        assert!(check_majorization(&ones, &ones, MajorizationMode::Equality, 0.0).holds);

        let r = check_majorization(
            &list(&[3.0, 1.0]),
            &list(&[2.0, 2.0]),
            MajorizationMode::Dominance,
            1e-12,
        );
        assert!(!r.holds);
        assert_eq!(r.first_violation, Some(1));
    }

    #[test]
    fn equality_mode_flags_trace_gap() {
        let r = check_majorization(
            &list(&[1.0, 0.5]),
            &list(&[2.0, 1.0]),
            MajorizationMode::Equality,
            1e-12,
        );
        assert!(!r.holds);
        assert_eq!(r.first_violation, Some(2));
        assert!(
            check_majorization(
                &list(&[1.0, 0.5]),
                &list(&[2.0, 1.0]),
                MajorizationMode::Dominance,
                1e-12
            )
            .holds
        );
    }

    #[test]
    fn unequal_lengths_are_zero_padded() {
        let r = check_majorization(
            &list(&[0.5, 0.25, 0.25]),
            &list(&[1.0]),
            MajorizationMode::Equality,
            1e-12,
        );
        assert!(r.holds);
        assert_eq!(r.slack.len(), 3);
    }

    #[test]
    fn reduce_examples() {
        // (2, 1) under (3, 1): the segment rule lands on (2.5, 0.5); the
        // feasible set also contains (2, 1) and both pass the validator.
        let mu = reduce_to_equality(&list(&[2.0, 1.0]), &list(&[3.0, 1.0])).unwrap();
        assert!(lemma_constraints_hold(
            &[2.0, 1.0],
            &[3.0, 1.0],
            mu.values(),
            1e-12
        ));
        assert!((mu.values()[0] - 2.5).abs() < 1e-15);
        assert!(lemma_constraints_hold(
            &[2.0, 1.0],
            &[3.0, 1.0],
            &[2.0, 1.0],
            1e-12
        ));

        let mu = reduce_to_equality(&list(&[1.0, 1.0]), &list(&[3.0, 2.0])).unwrap();
        assert!((mu.values()[0] - 1.5).abs() < 1e-15);
        assert!((mu.values()[1] - 0.5).abs() < 1e-15);

        let l = list(&[4.0, 2.0, 1.0, 0.0]);
        assert_eq!(reduce_to_equality(&l, &l).unwrap().values(), l.values());
    }

    #[test]
    fn reduce_rejects_violation() {
        assert!(matches!(
            reduce_to_equality(&list(&[3.0, 1.0]), &list(&[2.0, 2.0])),
            Err(Error::MajorizationViolation(_))
        ));
        assert!(matches!(
            reduce_to_equality(&list(&[1.0, -1.0]), &list(&[2.0, 2.0])),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn reduce_pads_short_lambda() {
        let mu = reduce_to_equality(&list(&[0.5, 0.3, 0.1]), &list(&[1.0])).unwrap();
        assert_eq!(mu.len(), 3);
        assert!(lemma_constraints_hold(
            &[0.5, 0.3, 0.1],
            &[1.0, 0.0, 0.0],
            mu.values(),
            1e-12
        ));
    }

    #[test]
    fn hlp_examples() {
        let sq = [ConvexFn::Square];
        assert!(hlp_convex_check(&list(&[2.0, 2.0]), &list(&[3.0, 1.0]), &sq, 1e-12).unwrap());
        assert!(hlp_convex_check(
            &list(&[1.0, 1.0]),
            &list(&[1.0, 1.0]),
            &[ConvexFn::Exp, ConvexFn::Abs],
            1e-12
        )
        .unwrap());
        assert!(!hlp_convex_check(&list(&[3.0, 1.0]), &list(&[2.0, 2.0]), &sq, 1e-12).unwrap());
        assert!(matches!(
            hlp_convex_check(&list(&[3.0]), &list(&[2.0]), &sq, 1e-12),
            Err(Error::TraceMismatch(_))
        ));
    }

    #[test]
    fn json_and_csv_forms() {
        let l: EigenList = serde_json::from_str(r#"{"values": [3, 2, 1]}"#).unwrap();
        assert_eq!(l.values(), &[3.0, 2.0, 1.0]);
        assert!(serde_json::from_str::<EigenList>(r#"{"values": [1, 2]}"#).is_err());
        let c = EigenList::from_csv("1\n3\n\n2\n").unwrap();
        assert_eq!(c.values(), &[3.0, 2.0, 1.0]);
        assert_eq!(EigenList::from_csv(&c.to_csv()).unwrap(), c);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn decreasing(n: usize) -> impl Strategy<Value = Vec<f64>> {
            prop::collection::vec(0.0..10.0f64, n).prop_map(|mut v| {
                v.sort_by(|a, b| b.total_cmp(a));
                v
            })
        }

        proptest! {
            #[test]
            fn reduction_satisfies_constraints(
                (p, lambda) in (1usize..12).prop_flat_map(|n| (decreasing(n), decreasing(n)))
            ) {
                // force dominance by scaling p under λ's prefix sums
                let mut ratio = f64::INFINITY;
                let (mut sp, mut sl) = (0.0, 0.0);
                for k in 0..p.len() {
                    sp += p[k];
                    sl += lambda[k];
                    if sp > 0.0 { ratio = ratio.min(sl / sp); }
                }
                let scale = if ratio.is_finite() { ratio.min(1.0) } else { 1.0 };
                let p: Vec<f64> = p.iter().map(|x| x * scale).collect();
                let pl = EigenList::new(p.clone()).unwrap();
                let ll = EigenList::new(lambda.clone()).unwrap();
                let mu = reduce_to_equality(&pl, &ll).unwrap();
                prop_assert!(lemma_constraints_hold(&p, &lambda, mu.values(), 1e-9));
                prop_assert!(check_majorization(&pl, &mu, MajorizationMode::Equality, 1e-9).holds);
            }

            #[test]
            fn prefix_and_hinge_tests_agree(
                (p, lambda) in (1usize..10).prop_flat_map(|n| (decreasing(n), decreasing(n)))
            ) {
                // shift p so the totals agree
                let shift = (lambda.iter().sum::<f64>() - p.iter().sum::<f64>()) / p.len() as f64;
                let p: Vec<f64> = p.iter().map(|x| x + shift).collect();
                let pl = EigenList::new(p).unwrap();
                let ll = EigenList::new(lambda).unwrap();
                let tol = 1e-9;
                let classical = check_majorization(&pl, &ll, MajorizationMode::Equality, tol).holds;
                let hlp = hlp_convex_check(&pl, &ll, &hinge_family(&pl, &ll), tol).unwrap();
                prop_assert_eq!(classical, hlp);
            }
        }
    }
}
