//! Difference quotients of set-valued metric projections and the witness
//! paths that certify a candidate is not in the Fréchet coderivative.
//!
//! For a graph point `(x, y)` and dual pair `(x*, y*)` the quotient is
//!
//! ```text
//! (⟨x*, u - x⟩ - ⟨y*, v - y⟩) / (‖u - x‖ + ‖v - y‖),   v ∈ P(u).
//! ```
//!
//! A single path `(u_t, v_t) → (x, y)` along which the quotient stays above a
//! positive level shows that the limsup is positive, hence `x*` is excluded
//! from `D̂*P(x, y)(y*)`. The converse direction is only ever sampled: a
//! [`Verdict::Consistent`] report means no tried direction refuted membership.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::c0::c0_membership;
use crate::chebyshev::{sup_norm, AtomicMeasure, BestApprox, Func, Poly, DEFAULT_GRID};
use crate::duality::kstar;
use crate::error::{Error, Result};
use crate::l1ball::MEMBER_TOL;
use crate::sequence::{
    positive_negative_parts, split_limit, truncated_negative_part, CStarFunctional, EvConstSeq, FiniteSeq,
    GeoTailSeq,
};

/// Number of points `t₀·2⁻ᵏ, k = 0..GRID_STEPS` on every path.
pub const GRID_STEPS: usize = 15;
/// Points used by the linear extrapolation.
pub const FIT_POINTS: usize = 5;
/// Default size of a consistency battery.
pub const DEFAULT_BATTERY: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Space {
    L1Ball,
    CToC0,
    C01ToPn,
}

/// A point `(x, y)` of the graph of a projection.
#[derive(Clone)]
pub enum GraphPoint {
    L1Ball { x: GeoTailSeq, y: GeoTailSeq, r: f64 },
    CToC0 { x: EvConstSeq, y: EvConstSeq },
    /// `y = p`, the best approximation recorded in `cert`.
    C01ToPn { f: Func, cert: BestApprox, n: usize, residual_norm: f64 },
}

impl fmt::Debug for GraphPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphPoint::L1Ball { x, y, r } => f.debug_struct("L1Ball").field("x", x).field("y", y).field("r", r).finish(),
            GraphPoint::CToC0 { x, y } => f.debug_struct("CToC0").field("x", x).field("y", y).finish(),
            GraphPoint::C01ToPn { cert, n, residual_norm, .. } => f
                .debug_struct("C01ToPn")
                .field("cert", cert)
                .field("n", n)
                .field("residual_norm", residual_norm)
                .finish(),
        }
    }
}

/// `‖f - p‖` on the default grid.
pub fn residual_norm(f: &Func, cert: &BestApprox) -> f64 {
    let p = cert.p.clone();
    let f = f.clone();
    sup_norm(&move |t| f(t) - p.eval(t), DEFAULT_GRID).0
}

/// `v ∈ P_{rB}(u)`: `‖v‖₁ <= r` and `‖u - v‖₁ = dist(u, rB)`, up to rounding
/// proportional to the length of the stored heads.
fn l1_member(u: &GeoTailSeq, v: &GeoTailSeq, r: f64) -> std::result::Result<(), String> {
    let a = u.l1_norm();
    if a <= r {
        return if u == v { Ok(()) } else { Err("u lies in the ball, so P(u) = {u}".into()) };
    }
    let len = u.head().len().max(v.head().len()) as f64;
    let tol = MEMBER_TOL.max(4.0 * len * f64::EPSILON) * a.max(1.0);
    let norm = v.l1_norm();
    let gap = u.sub(v).l1_norm() - (a - r);
    if norm > r + tol {
        Err(format!("‖v‖₁ = {norm} exceeds r = {r}"))
    } else if gap.abs() > tol {
        Err(format!("‖u - v‖₁ misses dist(u, rB) by {gap:e}"))
    } else {
        Ok(())
    }
}

impl GraphPoint {
    /// `(x, r/‖x‖₁·x)` outside the ball, `(x, x)` inside.
    pub fn l1_ball(x: GeoTailSeq, r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::Precondition(format!("radius r = {r} must be positive")));
        }
        let a = x.l1_norm();
        let y = if a > r { x.scale(r / a) } else { x.clone() };
        Ok(GraphPoint::L1Ball { x, y, r })
    }

    pub fn l1_ball_with(x: GeoTailSeq, y: GeoTailSeq, r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::Precondition(format!("radius r = {r} must be positive")));
        }
        l1_member(&x, &y, r).map_err(Error::Precondition)?;
        Ok(GraphPoint::L1Ball { x, y, r })
    }

    /// `(x, h(x))`.
    pub fn c_to_c0(x: EvConstSeq) -> Self {
        let y = split_limit(&x).1;
        GraphPoint::CToC0 { x, y }
    }

    pub fn c_to_c0_with(x: EvConstSeq, y: EvConstSeq) -> Result<Self> {
        if !c0_membership(&x, &y, 0.0) {
            return Err(Error::Precondition("y is not a member of P_c₀(x)".into()));
        }
        Ok(GraphPoint::CToC0 { x, y })
    }

    /// `(f, p)` with `p` taken from the certificate.
    pub fn c01(f: Func, cert: BestApprox, n: usize) -> Result<Self> {
        if cert.p.degree() > n {
            return Err(Error::Precondition(format!("certificate polynomial has degree {} > n = {n}", cert.p.degree())));
        }
        let residual_norm = residual_norm(&f, &cert);
        Ok(GraphPoint::C01ToPn { f, cert, n, residual_norm })
    }

    pub fn space(&self) -> Space {
        match self {
            GraphPoint::L1Ball { .. } => Space::L1Ball,
            GraphPoint::CToC0 { .. } => Space::CToC0,
            GraphPoint::C01ToPn { .. } => Space::C01ToPn,
        }
    }

    /// Checks `v ∈ P(u)` for a sample of this space.
    pub fn check_selection(&self, sample: &Sample) -> std::result::Result<(), String> {
        match (self, sample) {
            (GraphPoint::L1Ball { r, .. }, Sample::L1 { u, v }) => l1_member(u, v, *r),
            (GraphPoint::CToC0 { .. }, Sample::C { u, v }) => {
                if c0_membership(u, v, 0.0) {
                    Ok(())
                } else {
                    Err("v is not a member of P_c₀(u)".into())
                }
            }
            (GraphPoint::C01ToPn { n, .. }, Sample::C01 { s, q }) => {
                // p + q is the best approximation of (1 + s)f - sp + q whenever
                // 1 + s > 0 and deg q <= n
                if !(*s > -1.0) {
                    Err(format!("s = {s} must exceed -1"))
                } else if q.degree() > *n {
                    Err(format!("shift has degree {} > n = {n}", q.degree()))
                } else {
                    Ok(())
                }
            }
            _ => Err(format!("sample does not belong to space {:?}", self.space())),
        }
    }

    /// `‖u - x‖ + ‖v - y‖`.
    pub fn distance(&self, sample: &Sample) -> Result<f64> {
        Ok(self.displacement(sample)?.norm)
    }

    fn displacement(&self, sample: &Sample) -> Result<Displacement> {
        match (self, sample) {
            (GraphPoint::L1Ball { x, y, .. }, Sample::L1 { u, v }) => {
                let (du, dv) = (u.sub(x), v.sub(y));
                let norm = du.l1_norm() + dv.l1_norm();
                Ok(Displacement { norm, kind: DispKind::L1(du, dv) })
            }
            (GraphPoint::CToC0 { x, y }, Sample::C { u, v }) => {
                let (du, dv) = (u.sub(x), v.sub(y));
                let norm = du.sup_norm() + dv.sup_norm();
                Ok(Displacement { norm, kind: DispKind::C(du, dv) })
            }
            (GraphPoint::C01ToPn { f, cert, residual_norm, .. }, Sample::C01 { s, q }) => {
                let du_norm = if q.is_zero() {
                    s.abs() * residual_norm
                } else if *s == 0.0 {
                    poly_sup(q)
                } else {
                    let (f, p, q, s) = (f.clone(), cert.p.clone(), q.clone(), *s);
                    sup_norm(&move |t| s * (f(t) - p.eval(t)) + q.eval(t), DEFAULT_GRID).0
                };
                Ok(Displacement { norm: du_norm + poly_sup(q), kind: DispKind::C01(*s, q.clone()) })
            }
            _ => Err(Error::Unsupported(format!("sample does not belong to space {:?}", self.space()))),
        }
    }
}

fn poly_sup(q: &Poly) -> f64 {
    if q.degree() == 0 {
        q.eval(0.0).abs()
    } else {
        let q = q.clone();
        sup_norm(&move |t| q.eval(t), DEFAULT_GRID).0
    }
}

struct Displacement {
    norm: f64,
    kind: DispKind,
}

enum DispKind {
    L1(GeoTailSeq, GeoTailSeq),
    C(EvConstSeq, EvConstSeq),
    C01(f64, Poly),
}

/// A pair `(u, v)` with `v` a selection of `P(u)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Sample {
    L1 { u: GeoTailSeq, v: GeoTailSeq },
    C { u: EvConstSeq, v: EvConstSeq },
    /// `u = f + s·(f - p) + q` and `v = p + q`.
    C01 { s: f64, q: Poly },
}

/// Dual elements: `l∞` for `l₁`, `l₁ = c*` for `c`, atomic measures for `C[0,1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Dual {
    L1(EvConstSeq),
    C(CStarFunctional),
    C01(AtomicMeasure),
}

impl Dual {
    pub fn zero(space: Space) -> Self {
        match space {
            Space::L1Ball => Dual::L1(EvConstSeq::zero()),
            Space::CToC0 => Dual::C(CStarFunctional::zero()),
            Space::C01ToPn => Dual::C01(AtomicMeasure::zero()),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        match self {
            Dual::L1(x) => Dual::L1(x.scale(c)),
            Dual::C(x) => Dual::C(x.scale(c)),
            Dual::C01(x) => Dual::C01(x.scale(c)),
        }
    }
}

/// The difference quotient at one sample.
pub fn quotient(xstar: &Dual, ystar: &Dual, point: &GraphPoint, sample: &Sample) -> Result<f64> {
    let Displacement { norm, kind } = point.displacement(sample)?;
    let num = match (kind, xstar, ystar, point) {
        (DispKind::L1(du, dv), Dual::L1(xs), Dual::L1(ys), _) => xs.pair_geo(&du) - ys.pair_geo(&dv),
        (DispKind::C(du, dv), Dual::C(xs), Dual::C(ys), _) => xs.pair(&du) - ys.pair(&dv),
        (DispKind::C01(s, q), Dual::C01(g), Dual::C01(m), GraphPoint::C01ToPn { f, cert, .. }) => {
            let p = &cert.p;
            g.pair(&|t| s * (f(t) - p.eval(t)) + q.eval(t)) - m.pair(&|t| q.eval(t))
        }
        _ => return Err(Error::Unsupported(format!("dual elements do not match space {:?}", point.space()))),
    };
    if norm == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(num / norm)
}

pub type Generator = Arc<dyn Fn(f64) -> Result<Sample> + Send + Sync>;

/// A parametrised family `t ↦ (u_t, v_t)` approaching the base point.
#[derive(Clone)]
pub struct WitnessPath {
    pub label: String,
    /// Decreasing positive parameters.
    pub t_grid: Vec<f64>,
    /// Exact limit of the quotient along the path.
    pub expected_limit: Option<f64>,
    /// The value the construction was designed to attain; a lower bound of
    /// `expected_limit` when the two differ.
    pub claimed_limit: Option<f64>,
    generator: Generator,
}

impl fmt::Debug for WitnessPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WitnessPath")
            .field("label", &self.label)
            .field("t_grid", &self.t_grid)
            .field("expected_limit", &self.expected_limit)
            .field("claimed_limit", &self.claimed_limit)
            .finish_non_exhaustive()
    }
}

impl WitnessPath {
    pub fn new(label: impl Into<String>, t_grid: Vec<f64>, expected_limit: Option<f64>, generator: Generator) -> Self {
        Self { label: label.into(), t_grid, expected_limit, claimed_limit: expected_limit, generator }
    }

    pub fn with_claimed(mut self, claimed: f64) -> Self {
        self.claimed_limit = Some(claimed);
        self
    }

    pub fn sample(&self, t: f64) -> Result<Sample> {
        (self.generator)(t)
    }
}

/// `t₀·2⁻ᵏ` for `k = 0..GRID_STEPS`.
pub fn geometric_grid(t0: f64) -> Vec<f64> {
    (0..GRID_STEPS).map(|k| t0 * 2f64.powi(-(k as i32))).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuotientTrace {
    pub t: Vec<f64>,
    pub values: Vec<f64>,
    /// Intercept of the least-squares line through the last points.
    pub extrapolated: f64,
    pub monotone: bool,
    /// `max - min` over the fitted points.
    pub oscillation: f64,
    /// The fitted points agree with the intercept to within 5 %.
    pub converged: bool,
}

/// Intercept at `t = 0` of the least-squares line through `(t, v)`. Values are
/// centred on the last one, so a constant sequence is reproduced exactly.
pub fn extrapolate(t: &[f64], v: &[f64]) -> f64 {
    let k = t.len().min(v.len()).min(FIT_POINTS);
    if k == 0 {
        return f64::NAN;
    }
    let (t, v) = (&t[t.len() - k..], &v[v.len() - k..]);
    let base = v[k - 1];
    if k == 1 {
        return base;
    }
    let tm = t.iter().sum::<f64>() / k as f64;
    let dm = v.iter().map(|x| x - base).sum::<f64>() / k as f64;
    let sxx: f64 = t.iter().map(|x| (x - tm) * (x - tm)).sum();
    let sxy: f64 = t.iter().zip(v).map(|(x, y)| (x - tm) * (y - base - dm)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    base + (dm - slope * tm)
}

/// Evaluates the quotient along `path`, enforcing selection validity and
/// convergence of `(u_t, v_t)` to the base point.
pub fn evaluate_along(path: &WitnessPath, xstar: &Dual, ystar: &Dual, point: &GraphPoint) -> Result<QuotientTrace> {
    let invalid = |t: f64, reason: String| Error::InvalidSelection { label: path.label.clone(), t, reason };
    let mut values = Vec::with_capacity(path.t_grid.len());
    let mut distances: Vec<f64> = Vec::with_capacity(path.t_grid.len());
    for &t in &path.t_grid {
        let sample = path.sample(t)?;
        point.check_selection(&sample).map_err(|reason| invalid(t, reason))?;
        let d = point.distance(&sample)?;
        if let Some(&prev) = distances.last() {
            if d > prev * (1.0 + 1e-9) {
                return Err(invalid(t, format!("distance to the base point grew from {prev:e} to {d:e}")));
            }
        }
        distances.push(d);
        values.push(quotient(xstar, ystar, point, &sample)?);
    }
    if let (Some(&first), Some(&last)) = (distances.first(), distances.last()) {
        if distances.len() > FIT_POINTS && last > first / 64.0 {
            return Err(invalid(path.t_grid[path.t_grid.len() - 1], "path does not approach the base point".into()));
        }
    }
    let extrapolated = extrapolate(&path.t_grid, &values);
    let tail = &values[values.len().saturating_sub(FIT_POINTS)..];
    let (lo, hi) = tail.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let monotone = values.windows(2).all(|w| w[1] >= w[0]) || values.windows(2).all(|w| w[1] <= w[0]);
    let scale = extrapolated.abs().max(1e-8);
    let converged = tail.iter().all(|v| (v - extrapolated).abs() <= 0.05 * scale);
    Ok(QuotientTrace { t: path.t_grid.clone(), values, extrapolated, monotone, oscillation: hi - lo, converged })
}

// ---------------------------------------------------------------------------
// l₁ ball

/// Target functional `y*` for the ball witnesses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "d")]
pub enum L1Target {
    ThetaStar,
    /// The constant functional `β_d`, `d > 0`.
    BetaD(f64),
}

impl L1Target {
    pub fn dual(self) -> EvConstSeq {
        match self {
            L1Target::ThetaStar => EvConstSeq::zero(),
            L1Target::BetaD(d) => EvConstSeq::constant(d),
        }
    }
}

/// Exact limit of the quotient along `u = x + tw`, `v = r·u/‖u‖₁`, for
/// `x ∈ K₁⁺` and `w` keeping `x + tw` in the open positive cone for small `t`.
pub fn l1_segment_limit(x: &GeoTailSeq, r: f64, xstar: &EvConstSeq, ystar: &EvConstSeq, w: &GeoTailSeq) -> f64 {
    let a = x.l1_norm();
    let sigma = w.sum();
    let z = w.sub(&x.scale(sigma / a));
    let num = xstar.pair_geo(w) - (r / a) * ystar.pair_geo(&z);
    let den = w.l1_norm() + (r / a) * z.l1_norm();
    num / den
}

fn l1_segment(label: &str, x: &GeoTailSeq, r: f64, w: GeoTailSeq, t0: f64, expected: f64) -> WitnessPath {
    let x = x.clone();
    let generator: Generator = Arc::new(move |t| {
        let u = x.add(&w.scale(t));
        let a = u.l1_norm();
        let v = if a > r { u.scale(r / a) } else { u.clone() };
        Ok(Sample::L1 { u, v })
    });
    WitnessPath::new(label, geometric_grid(t0), Some(expected), generator)
}

fn first_index(psi: &EvConstSeq, pred: impl Fn(f64) -> bool) -> Option<usize> {
    (1..=psi.head().len() + 1).find(|&n| pred(psi.get(n)))
}

/// Witness paths at `(x, r/‖x‖₁·x)` for `x ∈ K₁⁺`, `‖x‖₁ > r`, against the
/// candidate `ψ` and the target functional.
///
/// * `ThetaStar`: `u = x + t·k*(ψ⁺)` when `ψ⁺ ≠ θ*` and `u = x + t·ψ_m⁻`
///   (smallest admissible `m`) when `ψ⁻ ≠ θ*`.
/// * `BetaD(d)`: for `ψ = θ*` the spike sequence
///   `u_n = x + s(n, -(tₙ + 1/n))` indexed by `t = 1/n`; otherwise the axis
///   segment `u = x + s(m, tλ_m)` at the first nonzero `λ_m`.
pub fn witnesses_l1(x: &GeoTailSeq, r: f64, psi: &EvConstSeq, target: L1Target) -> Result<Vec<WitnessPath>> {
    if !x.is_strictly_positive() {
        return Err(Error::Precondition("x must lie in K₁⁺ (all entries positive)".into()));
    }
    let a = x.l1_norm();
    if !(r > 0.0) || a <= r {
        return Err(Error::Precondition(format!("need ‖x‖₁ = {a} > r = {r} > 0")));
    }
    let p = (a - r) / 2.0;
    let ystar = target.dual();
    let lower = 1.0 + 2.0 * r / a;
    let mut out = Vec::new();
    match target {
        L1Target::ThetaStar => {
            if psi.is_zero() {
                return Err(Error::Precondition("the candidate must differ from θ*".into()));
            }
            let (pos, _) = positive_negative_parts(psi);
            if !pos.is_zero() {
                let w = kstar(&pos);
                let norm = w.l1_norm();
                let expected = l1_segment_limit(x, r, psi, &ystar, &w);
                let claimed = pos.pair_geo(&w) / (norm * lower);
                out.push(l1_segment("positive-part-kstar", x, r, w, 0.5 * p / norm, expected).with_claimed(claimed));
            }
            if let Some(m) = first_index(psi, |v| v < 0.0) {
                let neg = truncated_negative_part(psi, m)?;
                let b = (1..=m).map(|n| x.get(n)).fold(p, f64::min);
                let w = GeoTailSeq::from(&neg);
                let norm = w.l1_norm();
                let expected = l1_segment_limit(x, r, psi, &ystar, &w);
                let claimed = neg.iter().map(|(_, v)| v * v).sum::<f64>() / (norm * lower);
                let t0 = 0.5 * b / (m as f64 * psi.sup_norm());
                out.push(l1_segment("truncated-negative-part", x, r, w, t0, expected).with_claimed(claimed));
            }
        }
        L1Target::BetaD(d) => {
            if !(d > 0.0) {
                return Err(Error::Precondition(format!("d = {d} must be positive")));
            }
            if psi.is_zero() {
                out.push(spike_sequence(x, r, d, p));
            } else {
                let m = first_index(psi, |v| v != 0.0).expect("nonzero candidate");
                let lambda = psi.get(m);
                let w = GeoTailSeq::from(&FiniteSeq::axis(m, lambda)?);
                let expected = l1_segment_limit(x, r, psi, &ystar, &w);
                let t0 = 0.5 * x.get(m).min(p) / lambda.abs();
                out.push(l1_segment("axis-segment", x, r, w, t0, expected).with_claimed(lambda.abs() / lower));
            }
        }
    }
    Ok(out)
}

/// `u_n = x + s(n, -(tₙ + 1/n))` with `v_n = r·u_n/‖u_n‖₁`, parametrised by
/// `t = 1/n` along `n = n₀·2ᵏ`. The quotient against `(θ*, β_d)` tends to
/// `2dr/(‖x‖₁ + 2r)`.
fn spike_sequence(x: &GeoTailSeq, r: f64, d: f64, p: f64) -> WitnessPath {
    let a = x.l1_norm();
    let mut n0 = (x.head().len() + 1).max(8).next_power_of_two();
    while 1.0 / n0 as f64 + x.get(n0) >= p {
        n0 *= 2;
    }
    let t_grid = (0..GRID_STEPS).map(|k| 1.0 / (n0 << k) as f64).collect();
    let x = x.clone();
    let generator: Generator = Arc::new(move |t| {
        let n = (1.0 / t).round() as usize;
        let mut head: Vec<f64> = (1..=n).map(|k| x.get(k)).collect();
        head[n - 1] = -1.0 / n as f64;
        let u = GeoTailSeq::new(head, x.geo())?;
        let v = u.scale(r / u.l1_norm());
        Ok(Sample::L1 { u, v })
    });
    WitnessPath::new("spike-sequence", t_grid, Some(2.0 * d * r / (a + 2.0 * r)), generator).with_claimed(d)
}

// ---------------------------------------------------------------------------
// c → c₀

/// Exact quotient along `u = x + tw`, `v = h(u)`; `h` is linear so the value
/// does not depend on `t`.
pub fn c_segment_limit(psi: &CStarFunctional, phi: &CStarFunctional, w: &EvConstSeq) -> f64 {
    let hw = split_limit(w).1;
    (psi.pair(w) - phi.pair(&hw)) / (w.sup_norm() + hw.sup_norm())
}

fn c_segment(label: String, x: &EvConstSeq, psi: &CStarFunctional, phi: &CStarFunctional, w: EvConstSeq) -> WitnessPath {
    let expected = c_segment_limit(psi, phi, &w);
    let x = x.clone();
    let generator: Generator = Arc::new(move |t| {
        let u = x.add(&w.scale(t));
        let v = split_limit(&u).1;
        Ok(Sample::C { u, v })
    });
    WitnessPath::new(label, geometric_grid(1.0), Some(expected), generator)
}

/// Witness paths at `(x, h(x))` for the candidate `ψ` against the target `φ`.
///
/// For `φ = s(0, q₀)`: `u = x + t·s(m, p_m)` at each `p_m ≠ 0`, otherwise the
/// constant shift `u = x + β_{tp₀}`. For `φ` with some `q_m ≠ 0`: against
/// `θ*` the segments `u = x + t·s(m, -q_m)`; against `ψ` with `Σpₙ = p ≠ 0`
/// the shift `β_{tp}`; otherwise `u = x + t·s(m, ±1)` at the first `m` with
/// `p_m ≠ q_m`. With `ψ = θ*` and `φ = s(0, q₀)` the unit directions of both
/// families are returned; their limits are zero.
pub fn witnesses_c(x: &EvConstSeq, phi: &CStarFunctional, psi: &CStarFunctional) -> Result<Vec<WitnessPath>> {
    let axis = |m: usize, b: f64| EvConstSeq::axis(m, b);
    let mut out = Vec::new();
    if phi.is_limit_only() {
        if psi.is_zero() {
            out.push(c_segment("axis-spike(m=1)".into(), x, psi, phi, axis(1, 1.0)?));
            out.push(c_segment("constant-shift".into(), x, psi, phi, EvConstSeq::constant(1.0)));
        } else if psi.rest.is_zero() {
            out.push(c_segment("constant-shift".into(), x, psi, phi, EvConstSeq::constant(psi.q0)));
        } else {
            for (m, pm) in psi.rest.iter() {
                out.push(c_segment(format!("axis-spike(m={m})"), x, psi, phi, axis(m, pm)?));
            }
        }
    } else if psi.is_zero() {
        for (m, qm) in phi.rest.iter() {
            out.push(c_segment(format!("axis-against-target(m={m})"), x, psi, phi, axis(m, -qm)?));
        }
    } else if psi.total() != 0.0 {
        out.push(c_segment("constant-shift".into(), x, psi, phi, EvConstSeq::constant(psi.total())));
    } else {
        let last = psi.rest.max_index().max(phi.rest.max_index());
        let Some(m) = (1..=last).find(|&m| psi.rest.get(m) != phi.rest.get(m)) else {
            return Err(Error::CaseSelection(
                "ψ has zero total and agrees with φ at every index n >= 1; the axis and shift families do not apply"
                    .into(),
            ));
        };
        out.push(c_segment(format!("axis-unit-up(m={m})"), x, psi, phi, axis(m, 1.0)?));
        out.push(c_segment(format!("axis-unit-down(m={m})"), x, psi, phi, axis(m, -1.0)?));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// C[0,1] → 𝒫ₙ

/// Witness paths at `(f, p)` for candidate `γ` against target `μ`: the
/// constant shifts `f ± λ` (with `v = p ± λ`) and, when `⟨γ, f - p⟩ < 0`, the
/// segment `(1 - α)f + αp` towards `p` (with `v = p`).
pub fn witnesses_c01(f: &Func, cert: &BestApprox, gamma: &AtomicMeasure, mu: &AtomicMeasure) -> Result<Vec<WitnessPath>> {
    let gap = gamma.mass() - mu.mass();
    let shift = |sign: f64| -> Generator { Arc::new(move |t| Ok(Sample::C01 { s: 0.0, q: Poly::new(vec![sign * t]) })) };
    let mut out = vec![
        WitnessPath::new("constant-up", geometric_grid(1.0), Some(gap / 2.0), shift(1.0)),
        WitnessPath::new("constant-down", geometric_grid(1.0), Some(-gap / 2.0), shift(-1.0)),
    ];
    let a = residual_norm(f, cert);
    if cert.applicable && a > 0.0 {
        let p = cert.p.clone();
        let pairing = gamma.pair(&|t| f(t) - p.eval(t));
        if pairing < 0.0 {
            let generator: Generator = Arc::new(|t| Ok(Sample::C01 { s: -t, q: Poly::zero() }));
            out.push(WitnessPath::new("convex-toward-p", geometric_grid(0.5), Some(-pairing / a), generator));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Reports

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Excluded,
    Consistent,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExclusionReport {
    pub space: Space,
    pub target: Dual,
    pub candidate: Dual,
    pub verdict: Verdict,
    pub trace: Vec<f64>,
    pub expected: Option<f64>,
    pub extrapolated: Option<f64>,
    pub path: Option<String>,
    pub claimed: Option<f64>,
    pub t: Vec<f64>,
}

/// `extrapolated >= max(10·tol, expected/2)`.
pub fn excludes(extrapolated: f64, expected: Option<f64>, tol: f64) -> bool {
    extrapolated >= (10.0 * tol).max(expected.unwrap_or(0.0) / 2.0)
}

/// Evaluates every path and reports the strongest one. A single excluding
/// path suffices; otherwise the verdict is inconclusive.
pub fn exclusion_certificate(
    point: &GraphPoint,
    xstar: &Dual,
    ystar: &Dual,
    paths: &[WitnessPath],
    tol: f64,
) -> Result<ExclusionReport> {
    let mut best: Option<(bool, f64, &WitnessPath, QuotientTrace)> = None;
    for path in paths {
        let trace = evaluate_along(path, xstar, ystar, point)?;
        let ex = excludes(trace.extrapolated, path.expected_limit, tol);
        let better = match &best {
            None => true,
            Some((bex, bval, ..)) => (ex, trace.extrapolated) > (*bex, *bval),
        };
        if better {
            best = Some((ex, trace.extrapolated, path, trace));
        }
    }
    let mut report = ExclusionReport {
        space: point.space(),
        target: ystar.clone(),
        candidate: xstar.clone(),
        verdict: Verdict::Inconclusive,
        trace: Vec::new(),
        expected: None,
        extrapolated: None,
        path: None,
        claimed: None,
        t: Vec::new(),
    };
    if let Some((ex, value, path, trace)) = best {
        report.verdict = if ex { Verdict::Excluded } else { Verdict::Inconclusive };
        report.expected = path.expected_limit;
        report.claimed = path.claimed_limit;
        report.extrapolated = Some(value);
        report.path = Some(path.label.clone());
        report.trace = trace.values;
        report.t = trace.t;
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub space: Space,
    pub target: Dual,
    pub candidate: Dual,
    pub verdict: Verdict,
    /// Largest quotient seen over the last grid points of every direction.
    pub max_quotient: f64,
    pub worst_direction: String,
    pub directions: usize,
    pub note: &'static str,
}

const CONSISTENCY_NOTE: &str = "sampled directions only: CONSISTENT means no refutation was found, not membership";

/// Catalog witnesses applicable at this point, if any.
pub fn catalog_paths(point: &GraphPoint, xstar: &Dual, ystar: &Dual) -> Vec<WitnessPath> {
    let found = match (point, xstar, ystar) {
        (GraphPoint::L1Ball { x, r, .. }, Dual::L1(xs), Dual::L1(ys)) => {
            if ys.is_zero() {
                witnesses_l1(x, *r, xs, L1Target::ThetaStar)
            } else if ys.head().is_empty() {
                witnesses_l1(x, *r, xs, L1Target::BetaD(ys.tail()))
            } else {
                Ok(Vec::new())
            }
        }
        (GraphPoint::CToC0 { x, .. }, Dual::C(xs), Dual::C(ys)) => witnesses_c(x, ys, xs),
        (GraphPoint::C01ToPn { f, cert, .. }, Dual::C01(g), Dual::C01(m)) => witnesses_c01(f, cert, g, m),
        _ => Ok(Vec::new()),
    };
    found.unwrap_or_default()
}

fn random_head(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Random segment directions for the battery, with `v` chosen by the
/// canonical selection of each space.
fn random_paths(point: &GraphPoint, count: usize, rng: &mut ChaCha8Rng) -> Result<Vec<WitnessPath>> {
    let mut out = Vec::with_capacity(count);
    match point {
        GraphPoint::L1Ball { x, r, .. } => {
            let dim = x.head().len().max(3) + 1;
            let a = x.l1_norm();
            for i in 0..count {
                let (label, w) = match i % 4 {
                    0 => {
                        let m = rng.gen_range(1..=dim);
                        let b = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                        (format!("axis({m},{b})"), GeoTailSeq::from(&FiniteSeq::axis(m, b)?))
                    }
                    1 => ("radial".to_string(), x.scale(if rng.gen_bool(0.5) { 1.0 } else { -1.0 })),
                    _ => ("random".to_string(), GeoTailSeq::new(random_head(rng, dim), 0.0)?),
                };
                let norm = w.l1_norm();
                if norm == 0.0 {
                    continue;
                }
                let gap = (a - r).abs();
                let t0 = if gap > 0.0 { (0.5 * gap / norm).min(1.0) } else { 1.0 / norm };
                let expected = None;
                let mut path = l1_segment(&label, x, *r, w, t0, 0.0);
                path.expected_limit = expected;
                path.claimed_limit = expected;
                out.push(path);
            }
        }
        GraphPoint::CToC0 { x, .. } => {
            for i in 0..count {
                let (label, w) = match i % 4 {
                    0 => {
                        let m = rng.gen_range(1..=x.head().len() + 3);
                        let b = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                        (format!("axis({m},{b})"), EvConstSeq::axis(m, b)?)
                    }
                    1 => ("constant".to_string(), EvConstSeq::constant(if rng.gen_bool(0.5) { 1.0 } else { -1.0 })),
                    _ => {
                        let len = rng.gen_range(1..=4);
                        ("random".to_string(), EvConstSeq::new(random_head(rng, len), rng.gen_range(-1.0..1.0))?)
                    }
                };
                if w.is_zero() {
                    continue;
                }
                let x = x.clone();
                let generator: Generator = Arc::new(move |t| {
                    let u = x.add(&w.scale(t));
                    let v = split_limit(&u).1;
                    Ok(Sample::C { u, v })
                });
                out.push(WitnessPath::new(label, geometric_grid(1.0), None, generator));
            }
        }
        GraphPoint::C01ToPn { n, .. } => {
            for i in 0..count {
                let (label, s, q) = match i % 4 {
                    0 => {
                        let c = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                        ("constant".to_string(), 0.0, Poly::new(vec![c]))
                    }
                    1 => {
                        let s = if rng.gen_bool(0.5) { 1.0 } else { -0.5 };
                        ("residual".to_string(), s, Poly::zero())
                    }
                    2 => ("polynomial".to_string(), 0.0, Poly::new(random_head(rng, n + 1))),
                    _ => ("mixed".to_string(), rng.gen_range(-0.5..1.0), Poly::new(random_head(rng, n + 1))),
                };
                if s == 0.0 && q.is_zero() {
                    continue;
                }
                let generator: Generator = Arc::new(move |t| Ok(Sample::C01 { s: t * s, q: q.scale(t) }));
                out.push(WitnessPath::new(label, geometric_grid(1.0), None, generator));
            }
        }
    }
    Ok(out)
}

/// Evaluates the quotient over catalog witnesses plus random directions and
/// reports the largest value seen on the fine end of every grid.
pub fn membership_consistency(
    point: &GraphPoint,
    xstar: &Dual,
    ystar: &Dual,
    battery_size: usize,
    seed: u64,
    tol: f64,
) -> Result<ConsistencyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut paths = catalog_paths(point, xstar, ystar);
    paths.truncate(battery_size);
    let rest = battery_size - paths.len();
    paths.extend(random_paths(point, rest, &mut rng)?);
    let mut max_quotient = f64::NEG_INFINITY;
    let mut worst = String::new();
    for path in &paths {
        let trace = evaluate_along(path, xstar, ystar, point)?;
        let tail = &trace.values[trace.values.len().saturating_sub(FIT_POINTS)..];
        let value = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if value > max_quotient {
            max_quotient = value;
            worst = path.label.clone();
        }
    }
    if paths.is_empty() {
        max_quotient = 0.0;
    }
    Ok(ConsistencyReport {
        space: point.space(),
        target: ystar.clone(),
        candidate: xstar.clone(),
        verdict: if max_quotient <= tol { Verdict::Consistent } else { Verdict::Inconclusive },
        max_quotient,
        worst_direction: worst,
        directions: paths.len(),
        note: CONSISTENCY_NOTE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chebyshev::remez;
    use crate::DEFAULT_TOL;

    fn geo3() -> GeoTailSeq {
        GeoTailSeq::new(vec![], 3.0).unwrap()
    }

    fn l1(v: EvConstSeq) -> Dual {
        Dual::L1(v)
    }

    #[test]
    fn zero_duals_give_zero() {
        let point = GraphPoint::l1_ball(geo3(), 1.0).unwrap();
        let u = geo3().add(&GeoTailSeq::new(vec![0.1], 0.0).unwrap());
        let v = u.scale(1.0 / u.l1_norm());
        let z = Dual::zero(Space::L1Ball);
        assert_eq!(quotient(&z, &z, &point, &Sample::L1 { u, v }).unwrap(), 0.0);
    }

    #[test]
    fn zero_denominator_rejected() {
        let point = GraphPoint::c_to_c0(EvConstSeq::constant(2.0));
        let (x, y) = match &point {
            GraphPoint::CToC0 { x, y } => (x.clone(), y.clone()),
            _ => unreachable!(),
        };
        let z = Dual::zero(Space::CToC0);
        assert_eq!(quotient(&z, &z, &point, &Sample::C { u: x, v: y }), Err(Error::ZeroDenominator));
    }

    #[test]
    fn positive_part_path_on_geometric_point() {
        // ψ = β₁ gives w = k*(β₁) parallel to x, so v - y vanishes and the
        // quotient is exactly ⟨β₁, w⟩/‖w‖₁ = 1
        let x = geo3();
        let psi = EvConstSeq::constant(1.0);
        let paths = witnesses_l1(&x, 1.0, &psi, L1Target::ThetaStar).unwrap();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].label, "positive-part-kstar");
        assert!((paths[0].claimed_limit.unwrap() - 0.6).abs() < 1e-15);
        let point = GraphPoint::l1_ball(x, 1.0).unwrap();
        let trace = evaluate_along(&paths[0], &l1(psi), &Dual::zero(Space::L1Ball), &point).unwrap();
        assert!((trace.extrapolated - 1.0).abs() < 1e-9);
        assert!((paths[0].expected_limit.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn negative_part_path() {
        let x = geo3();
        let psi = EvConstSeq::constant(-1.0);
        let paths = witnesses_l1(&x, 1.0, &psi, L1Target::ThetaStar).unwrap();
        assert_eq!(paths.len(), 1);
        let point = GraphPoint::l1_ball(x, 1.0).unwrap();
        let trace = evaluate_along(&paths[0], &l1(psi), &Dual::zero(Space::L1Ball), &point).unwrap();
        let expected = paths[0].expected_limit.unwrap();
        assert!(expected >= paths[0].claimed_limit.unwrap());
        assert!((trace.extrapolated - expected).abs() < 0.05 * expected);
    }

    #[test]
    fn spike_sequence_limit() {
        let x = geo3();
        let paths = witnesses_l1(&x, 1.0, &EvConstSeq::zero(), L1Target::BetaD(1.0)).unwrap();
        let path = &paths[0];
        assert_eq!(path.label, "spike-sequence");
        assert_eq!(path.claimed_limit, Some(1.0));
        let point = GraphPoint::l1_ball(x, 1.0).unwrap();
        let trace = evaluate_along(path, &Dual::zero(Space::L1Ball), &l1(EvConstSeq::constant(1.0)), &point).unwrap();
        // 2dr/(a + 2r) with a = 3, r = 1, d = 1
        assert!((trace.extrapolated - 0.4).abs() < 1e-6, "{}", trace.extrapolated);
    }

    #[test]
    fn c_space_cases() {
        let x = EvConstSeq::new(vec![0.5, -1.0], 2.0).unwrap();
        let phi = CStarFunctional::limit_only(3.0);
        let psi = CStarFunctional::from_dense(0.0, &[0.0, 4.0]).unwrap();
        let paths = witnesses_c(&x, &phi, &psi).unwrap();
        assert_eq!(paths[0].expected_limit, Some(2.0));

        let phi = CStarFunctional::from_dense(0.0, &[0.0, 0.0, 2.0]).unwrap();
        let paths = witnesses_c(&x, &phi, &CStarFunctional::zero()).unwrap();
        assert_eq!(paths[0].label, "axis-against-target(m=3)");
        assert_eq!(paths[0].expected_limit, Some(1.0));

        let psi = CStarFunctional::from_dense(1.0, &[0.5]).unwrap();
        let paths = witnesses_c(&x, &phi, &psi).unwrap();
        assert_eq!(paths[0].expected_limit, Some(1.5));

        // agrees with φ off the limit coordinate and has zero total
        let psi = CStarFunctional::from_dense(-2.0, &[0.0, 0.0, 2.0]).unwrap();
        assert!(matches!(witnesses_c(&x, &phi, &psi), Err(Error::CaseSelection(_))));
    }

    #[test]
    fn c01_constant_path_is_exact() {
        let f: Func = Arc::new(|t: f64| t * t * t - t);
        let cert = remez(&*f, 2, 1e-10, 4096).unwrap();
        let gamma = AtomicMeasure::point(0.3, 1.0).unwrap();
        let point = GraphPoint::c01(f.clone(), cert.clone(), 2).unwrap();
        let paths = witnesses_c01(&f, &cert, &gamma, &AtomicMeasure::zero()).unwrap();
        let trace =
            evaluate_along(&paths[0], &Dual::C01(gamma), &Dual::C01(AtomicMeasure::zero()), &point).unwrap();
        assert_eq!(trace.extrapolated, 0.5);
        assert!(trace.values.iter().all(|&v| v == 0.5));
    }

    #[test]
    fn extrapolation_of_affine_data() {
        let t = geometric_grid(1.0);
        let v: Vec<f64> = t.iter().map(|t| 2.0 - 3.0 * t).collect();
        assert!((extrapolate(&t, &v) - 2.0).abs() < 1e-12);
        assert_eq!(extrapolate(&t, &vec![0.1; t.len()]), 0.1);
    }

    #[test]
    fn invalid_selection_detected() {
        let point = GraphPoint::c_to_c0(EvConstSeq::constant(2.0));
        let generator: Generator = Arc::new(|t| {
            let u = EvConstSeq::constant(2.0 + t);
            Ok(Sample::C { u, v: EvConstSeq::axis(1, 5.0).unwrap() })
        });
        let path = WitnessPath::new("bad", geometric_grid(1.0), None, generator);
        let z = Dual::zero(Space::CToC0);
        assert!(matches!(evaluate_along(&path, &z, &z, &point), Err(Error::InvalidSelection { .. })));
    }

    #[test]
    fn consistency_examples() {
        let point = GraphPoint::c_to_c0(EvConstSeq::new(vec![1.0, 0.25], -0.5).unwrap());
        let z = Dual::zero(Space::CToC0);
        let rep = membership_consistency(&point, &z, &Dual::C(CStarFunctional::limit_only(5.0)), 64, 7, DEFAULT_TOL)
            .unwrap();
        assert_eq!((rep.verdict, rep.directions), (Verdict::Consistent, 64));
        let phi = CStarFunctional::from_dense(0.0, &[0.0, 0.0, 2.0]).unwrap();
        let rep = membership_consistency(&point, &z, &Dual::C(phi), 64, 7, DEFAULT_TOL).unwrap();
        assert_eq!(rep.verdict, Verdict::Inconclusive);
        assert!(rep.max_quotient >= 1.0 - 1e-12);
    }

    #[test]
    fn report_json_shape() {
        let point = GraphPoint::c_to_c0(EvConstSeq::constant(1.0));
        let psi = Dual::C(CStarFunctional::from_dense(0.0, &[1.0]).unwrap());
        let phi = Dual::C(CStarFunctional::limit_only(2.0));
        let paths = match (&psi, &phi) {
            (Dual::C(a), Dual::C(b)) => witnesses_c(&EvConstSeq::constant(1.0), b, a).unwrap(),
            _ => unreachable!(),
        };
        let rep = exclusion_certificate(&point, &psi, &phi, &paths, DEFAULT_TOL).unwrap();
        assert_eq!(rep.verdict, Verdict::Excluded);
        let json = serde_json::to_value(&rep).unwrap();
        for key in ["space", "target", "candidate", "verdict", "trace", "expected", "extrapolated"] {
            assert!(json.get(key).is_some(), "{key}");
        }
        assert_eq!(json["verdict"], "EXCLUDED");
        assert_eq!(json["space"], "c-to-c0");
    }
}
