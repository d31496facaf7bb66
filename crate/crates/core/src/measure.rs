//! Compactly supported probability measures on the line.
//!
//! A [`CompactMeasure`] is a finite sum of point masses and uniform pieces.
//! That class is closed under everything needed here and admits closed forms
//! for moments, tail integrals and quantiles, so no quadrature error enters
//! the comparisons.
//!
//! The order `m ⪯ n` means equal first moments and
//! `∫_t^∞ m([s, ∞)) ds <= ∫_t^∞ n([s, ∞)) ds` for every `t`. The left side
//! equals the hinge integral `∫ max(λ - t, 0) dm(λ)` by integration by parts;
//! [`tail_integral`] computes both routes independently.

use serde::{Deserialize, Serialize};

use crate::convex::ConvexFn;
use crate::error::{Error, Result};
use crate::matrix::HermitianMatrix;

/// Allowed deviation of total mass from 1.
pub const MASS_TOLERANCE: f64 = 1e-12;
/// Tolerance for equal first moments and the hinge comparison in `⪯`.
pub const ORDER_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub x: f64,
    pub mass: f64,
}

/// Uniform density `mass / (b - a)` on `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub a: f64,
    pub b: f64,
    pub mass: f64,
}

impl Piece {
    /// Mass of `[a, s]` (equivalently `[a, s)`; the piece has no atoms).
    fn mass_below(&self, s: f64) -> f64 {
        self.mass * ((s - self.a) / (self.b - self.a)).clamp(0.0, 1.0)
    }

    fn mass_above(&self, s: f64) -> f64 {
        self.mass * ((self.b - s) / (self.b - self.a)).clamp(0.0, 1.0)
    }

    /// `∫ max(λ - t, 0)` against this piece.
    fn hinge(&self, t: f64) -> f64 {
        if t <= self.a {
            self.mass * (0.5 * (self.a + self.b) - t)
        } else if t >= self.b {
            0.0
        } else {
            self.mass * (self.b - t) * (self.b - t) / (2.0 * (self.b - self.a))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure", into = "RawMeasure")]
pub struct CompactMeasure {
    atoms: Vec<Atom>,
    pieces: Vec<Piece>,
}

#[derive(Serialize, Deserialize)]
struct RawMeasure {
    #[serde(default)]
    atoms: Vec<Atom>,
    #[serde(default)]
    pieces: Vec<Piece>,
}

impl TryFrom<RawMeasure> for CompactMeasure {
    type Error = Error;

    fn try_from(raw: RawMeasure) -> Result<Self> {
        CompactMeasure::new(raw.atoms, raw.pieces)
    }
}

impl From<CompactMeasure> for RawMeasure {
    fn from(m: CompactMeasure) -> Self {
        RawMeasure {
            atoms: m.atoms,
            pieces: m.pieces,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailMode {
    /// Integrate the survivor function `s ↦ m([s, ∞))` over `[t, ∞)`.
    Survivor,
    /// Integrate `λ ↦ max(λ - t, 0)` against `m`.
    Hinge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureMethod {
    Hinge,
    Survivor,
    ConvexFamily,
}

impl MeasureMethod {
    pub const ALL: [MeasureMethod; 3] = [
        MeasureMethod::Hinge,
        MeasureMethod::Survivor,
        MeasureMethod::ConvexFamily,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeasureMethod::Hinge => "hinge",
            MeasureMethod::Survivor => "survivor",
            MeasureMethod::ConvexFamily => "convex_family",
        }
    }
}

impl CompactMeasure {
    pub fn new(atoms: Vec<Atom>, pieces: Vec<Piece>) -> Result<Self> {
        let m = CompactMeasure { atoms, pieces };
        m.validate()?;
        Ok(m)
    }

    /// Check positivity, finiteness and unit total mass.
    pub fn validate(&self) -> Result<()> {
        for at in &self.atoms {
            if !at.x.is_finite() || !at.mass.is_finite() || !(at.mass > 0.0) {
                return Err(Error::invalid(format!("bad atom {at:?}")));
            }
        }
        for pc in &self.pieces {
            if !pc.a.is_finite() || !pc.b.is_finite() || !(pc.a < pc.b) || !(pc.mass > 0.0) {
                return Err(Error::invalid(format!("bad piece {pc:?}")));
            }
        }
        let total = self.total_mass();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::invalid(format!("total mass {total} is not 1")));
        }
        Ok(())
    }

    pub fn dirac(x: f64) -> Result<Self> {
        Self::new(vec![Atom { x, mass: 1.0 }], Vec::new())
    }

    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        Self::new(Vec::new(), vec![Piece { a, b, mass: 1.0 }])
    }

    /// `(1/n) Σ δ_{x_k}` with coincident points merged.
    pub fn from_points(points: &[f64]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("need at least one point"));
        }
        let mut xs = points.to_vec();
        xs.sort_by(f64::total_cmp);
        let w = 1.0 / xs.len() as f64;
        let mut atoms: Vec<Atom> = Vec::new();
        let mut group: Vec<f64> = Vec::new();
        let flush = |group: &mut Vec<f64>, atoms: &mut Vec<Atom>| {
            if !group.is_empty() {
                let x = group.iter().sum::<f64>() / group.len() as f64;
                atoms.push(Atom {
                    x,
                    mass: w * group.len() as f64,
                });
                group.clear();
            }
        };
        for x in xs {
            if let Some(&first) = group.first() {
                if (x - first).abs() > 1e-12 * first.abs().max(1.0) {
                    flush(&mut group, &mut atoms);
                }
            }
            group.push(x);
        }
        flush(&mut group, &mut atoms);
        Self::new(atoms, Vec::new())
    }

    /// Spectral distribution: mass `1/n` at each eigenvalue, multiplicities
    /// merged.
    pub fn from_matrix(a: &HermitianMatrix) -> Result<Self> {
        Self::from_points(&a.eigenvalues())
    }

    /// Distribution of a step function under Lebesgue measure on `[0, 1]`.
    pub fn from_step_function(f: &StepFunction) -> Result<Self> {
        Self::from_points(&f.values)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum::<f64>()
            + self.pieces.iter().map(|p| p.mass).sum::<f64>()
    }

    pub fn mean(&self) -> f64 {
        moment(self, 1)
    }

    /// Smallest interval containing the support.
    pub fn support(&self) -> (f64, f64) {
        let bp = self.breakpoints();
        (bp[0], bp[bp.len() - 1])
    }

    /// Sorted, deduplicated atom locations and piece endpoints.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut bp: Vec<f64> = self
            .atoms
            .iter()
            .map(|a| a.x)
            .chain(self.pieces.iter().flat_map(|p| [p.a, p.b]))
            .collect();
        bp.sort_by(f64::total_cmp);
        bp.dedup();
        bp
    }

    /// `m([s, ∞))`
    pub fn survivor(&self, s: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|a| a.x >= s)
            .map(|a| a.mass)
            .sum::<f64>()
            + self.pieces.iter().map(|p| p.mass_above(s)).sum::<f64>()
    }

    /// `m((s, ∞))`
    pub fn survivor_open(&self, s: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|a| a.x > s)
            .map(|a| a.mass)
            .sum::<f64>()
            + self.pieces.iter().map(|p| p.mass_above(s)).sum::<f64>()
    }

    /// `m((-∞, s])`
    pub fn cdf(&self, s: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|a| a.x <= s)
            .map(|a| a.mass)
            .sum::<f64>()
            + self.pieces.iter().map(|p| p.mass_below(s)).sum::<f64>()
    }

    /// `m((-∞, s))`
    pub fn cdf_left(&self, s: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|a| a.x < s)
            .map(|a| a.mass)
            .sum::<f64>()
            + self.pieces.iter().map(|p| p.mass_below(s)).sum::<f64>()
    }

    /// `∫ f dm`, exact for piecewise-linear `f`.
    pub fn integrate(&self, f: &ConvexFn) -> f64 {
        self.atoms.iter().map(|a| a.mass * f.eval(a.x)).sum::<f64>()
            + self
                .pieces
                .iter()
                .map(|p| p.mass * f.uniform_average(p.a, p.b))
                .sum::<f64>()
    }

    /// Left-continuous generalized inverse of the distribution function,
    /// `Q(u) = inf { x : m((-∞, x]) >= u }` for `u ∈ (0, 1]`.
    pub fn quantile(&self, u: f64) -> f64 {
        let bp = self.breakpoints();
        for (k, &x) in bp.iter().enumerate() {
            if k > 0 {
                let prev = bp[k - 1];
                let lo = self.cdf(prev);
                let hi = self.cdf_left(x);
                if u > lo && u <= hi {
                    return prev + (u - lo) / (hi - lo) * (x - prev);
                }
            }
            if u <= self.cdf(x) {
                return x;
            }
        }
        bp[bp.len() - 1]
    }
}

/// `∫ λ^k dm(λ)` in closed form.
pub fn moment(m: &CompactMeasure, k: u32) -> f64 {
    let atoms: f64 = m.atoms.iter().map(|a| a.mass * a.x.powi(k as i32)).sum();
    let pieces: f64 = m
        .pieces
        .iter()
        .map(|p| {
            let e = k as i32 + 1;
            p.mass * (p.b.powi(e) - p.a.powi(e)) / (e as f64 * (p.b - p.a))
        })
        .sum();
    atoms + pieces
}

fn hinge_integral(m: &CompactMeasure, t: f64) -> f64 {
    m.atoms
        .iter()
        .map(|a| a.mass * (a.x - t).max(0.0))
        .sum::<f64>()
        + m.pieces.iter().map(|p| p.hinge(t)).sum::<f64>()
}

/// Survivor route: between consecutive breakpoints `s ↦ m([s, ∞))` is
/// linear, so the trapezoid rule on each segment is exact.
fn survivor_integral(m: &CompactMeasure, t: f64) -> f64 {
    let mut nodes = vec![t];
    nodes.extend(m.breakpoints().into_iter().filter(|&x| x > t));
    nodes
        .windows(2)
        .map(|w| {
            let (u, v) = (w[0], w[1]);
            0.5 * (v - u) * (m.survivor_open(u) + m.survivor(v))
        })
        .sum()
}

/// `∫_t^∞ m([s, ∞)) ds`, computed by the route selected by `mode`. The two
/// routes agree to round-off for every input.
pub fn tail_integral(m: &CompactMeasure, t: f64, mode: TailMode) -> f64 {
    match mode {
        TailMode::Survivor => survivor_integral(m, t),
        TailMode::Hinge => hinge_integral(m, t),
    }
}

/// Thresholds at which `H_n - H_m` must be checked: every breakpoint of
/// either measure plus every interior critical point. Between breakpoints
/// the difference is quadratic with derivative `S_m - S_n` (both survivor
/// functions linear there), so its extremum sits where those lines cross.
fn critical_thresholds(m: &CompactMeasure, n: &CompactMeasure) -> Vec<f64> {
    let mut bp: Vec<f64> = m.breakpoints();
    bp.extend(n.breakpoints());
    bp.sort_by(f64::total_cmp);
    bp.dedup();
    let mut out = bp.clone();
    for w in bp.windows(2) {
        let (u, v) = (w[0], w[1]);
        let d0 = m.survivor_open(u) - n.survivor_open(u);
        let d1 = m.survivor(v) - n.survivor(v);
        if d0 * d1 < 0.0 {
            out.push(u + (v - u) * d0 / (d0 - d1));
        }
    }
    out
}

/// Decide `m ⪯ n`.
///
/// All three methods use the same threshold set and the same tolerance
/// ([`ORDER_TOLERANCE`]); they differ in how the integrals are evaluated.
/// `Hinge` is the reference; `Survivor` integrates the survivor function;
/// `ConvexFamily` integrates affine and hinge test functions generically.
pub fn majorize_measure(
    m: &CompactMeasure,
    n: &CompactMeasure,
    method: MeasureMethod,
) -> Result<bool> {
    m.validate()?;
    n.validate()?;
    let tol = ORDER_TOLERANCE;
    let (mean_m, mean_n) = match method {
        MeasureMethod::ConvexFamily => {
            let id = ConvexFn::Affine { a: 0.0, b: 1.0 };
            (m.integrate(&id), n.integrate(&id))
        }
        _ => (moment(m, 1), moment(n, 1)),
    };
    if (mean_m - mean_n).abs() > tol {
        return Ok(false);
    }
    let tail = |mu: &CompactMeasure, t: f64| match method {
        MeasureMethod::Hinge => hinge_integral(mu, t),
        MeasureMethod::Survivor => survivor_integral(mu, t),
        MeasureMethod::ConvexFamily => mu.integrate(&ConvexFn::Hinge(t)),
    };
    Ok(critical_thresholds(m, n)
        .into_iter()
        .all(|t| tail(m, t) <= tail(n, t) + tol))
}

/// Step function on `N` equal cells of `[0, 1)`; `values[k]` is the value on
/// `[k/N, (k+1)/N)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStep", into = "RawStep")]
pub struct StepFunction {
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawStep {
    #[serde(rename = "N")]
    n: usize,
    values: Vec<f64>,
}

impl TryFrom<RawStep> for StepFunction {
    type Error = Error;

    fn try_from(raw: RawStep) -> Result<Self> {
        if raw.n != raw.values.len() {
            return Err(Error::invalid(format!(
                "N = {} but {} values given",
                raw.n,
                raw.values.len()
            )));
        }
        StepFunction::new(raw.values)
    }
}

impl From<StepFunction> for RawStep {
    fn from(f: StepFunction) -> Self {
        RawStep {
            n: f.values.len(),
            values: f.values,
        }
    }
}

impl StepFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("step function needs at least one cell"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("step function values must be finite"));
        }
        Ok(StepFunction { values })
    }

    pub fn cells(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `∫_0^1 f(x)^k dx`.
    pub fn moment(&self, k: u32) -> f64 {
        self.values.iter().map(|v| v.powi(k as i32)).sum::<f64>() / self.values.len() as f64
    }
}

/// Realize `m` as the distribution of a nondecreasing step function:
/// cell `k` takes the quantile at its midpoint `(k + 1/2) / N`.
pub fn quantile_transport(m: &CompactMeasure, cells: usize) -> Result<StepFunction> {
    if cells == 0 {
        return Err(Error::invalid("need at least one cell"));
    }
    m.validate()?;
    let nf = cells as f64;
    StepFunction::new(
        (0..cells)
            .map(|k| m.quantile((k as f64 + 0.5) / nf))
            .collect(),
    )
}
