//! Convex test functions on the real line.
//!
//! The hinge `g_t(x) = max(x - t, 0)` together with affine functions
//! generates (under uniform limits) every continuous convex function on a
//! compact interval, so [`ConvexFn::Cone`] is the workhorse; the smooth
//! members exist to exercise the inequalities on non-piecewise-linear input.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum ConvexFn {
    /// `a + b x`
    Affine { a: f64, b: f64 },
    /// `x^2`
    Square,
    /// `|x|`
    Abs,
    /// `e^x`
    Exp,
    /// `x ln x` on `[0, inf)`, with `0 ln 0 = 0`.
    XLogX,
    /// `max(x - t, 0)`
    Hinge(f64),
    /// `a + b x + sum_k c_k max(x - r_k, 0)` with every `c_k >= 0`.
    /// Terms are stored as `(c_k, r_k)`.
    Cone {
        a: f64,
        b: f64,
        terms: Vec<(f64, f64)>,
    },
}

impl ConvexFn {
    /// Build a cone element, rejecting negative hinge weights (which would
    /// break convexity).
    pub fn cone(a: f64, b: f64, terms: Vec<(f64, f64)>) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::invalid("cone affine part must be finite"));
        }
        for &(c, r) in &terms {
            if !(c >= 0.0) || !c.is_finite() || !r.is_finite() {
                return Err(Error::invalid(format!(
                    "cone term ({c}, {r}) must have a finite nonnegative weight"
                )));
            }
        }
        Ok(ConvexFn::Cone { a, b, terms })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            ConvexFn::Affine { a, b } => a + b * x,
            ConvexFn::Square => x * x,
            ConvexFn::Abs => x.abs(),
            ConvexFn::Exp => x.exp(),
            ConvexFn::XLogX => {
                if x == 0.0 {
                    0.0
                } else {
                    x * x.ln()
                }
            }
            ConvexFn::Hinge(t) => (x - t).max(0.0),
            ConvexFn::Cone { a, b, terms } => {
                a + b * x
                    + terms
                        .iter()
                        .map(|&(c, r)| c * (x - r).max(0.0))
                        .sum::<f64>()
            }
        }
    }

    /// Closed interval on which the function is defined.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            ConvexFn::XLogX => (0.0, f64::INFINITY),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// Check that `[lo, hi]` sits inside the domain, allowing `slack` of
    /// round-off at the boundary.
    pub fn check_domain(&self, lo: f64, hi: f64, slack: f64) -> Result<()> {
        let (dlo, dhi) = self.domain();
        if lo < dlo - slack || hi > dhi + slack {
            return Err(Error::invalid(format!(
                "{self:?} is not defined on [{lo}, {hi}]"
            )));
        }
        Ok(())
    }

    /// Kink locations when the function is piecewise linear, `None` otherwise.
    pub fn kinks(&self) -> Option<Vec<f64>> {
        match self {
            ConvexFn::Affine { .. } => Some(Vec::new()),
            ConvexFn::Abs => Some(vec![0.0]),
            ConvexFn::Hinge(t) => Some(vec![*t]),
            ConvexFn::Cone { terms, .. } => Some(terms.iter().map(|&(_, r)| r).collect()),
            _ => None,
        }
    }

    /// Integral of the function against the uniform probability density on
    /// `[a, b]`. Exact for piecewise-linear members (midpoint rule between
    /// kinks); Gauss-Legendre with 8 nodes per panel and 64 panels otherwise.
    pub fn uniform_average(&self, a: f64, b: f64) -> f64 {
        debug_assert!(a < b);
        let width = b - a;
        if let Some(mut cuts) = self.kinks() {
            cuts.retain(|&k| k > a && k < b);
            cuts.sort_by(f64::total_cmp);
            let mut total = 0.0;
            let mut left = a;
            for right in cuts.into_iter().chain(std::iter::once(b)) {
                if right > left {
                    total += (right - left) * self.eval(0.5 * (left + right));
                }
                left = right;
            }
            return total / width;
        }
        const PANELS: usize = 64;
        let h = width / PANELS as f64;
        let mut total = 0.0;
        for k in 0..PANELS {
            let lo = a + k as f64 * h;
            let mid = lo + 0.5 * h;
            for (node, weight) in GAUSS8 {
                total += weight * self.eval(mid + 0.5 * h * node);
            }
        }
        total * 0.5 * h / width
    }
}

const GAUSS8: [(f64, f64); 8] = [
    (-0.960_289_856_497_536_3, 0.101_228_536_290_376_26),
    (-0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (-0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (-0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (0.960_289_856_497_536_3, 0.101_228_536_290_376_26),
];
