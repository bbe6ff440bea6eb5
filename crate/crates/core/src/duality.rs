//! Normalized duality mappings `J` on `l₁`, `c` and `C[0,1]`.
//!
//! Membership is always tested two-sided: `⟨φ, x⟩ = ‖x‖²` and `‖φ‖ = ‖x‖`.
//! Searches over `J(x)` are restricted to the sign-pattern family: entries
//! `a·sign(xₙ)` on the union of supports and one shared free value
//! `τ ∈ [-a, a]` everywhere else. A negative search result therefore means
//! "not found in the family", never a proof of absence.

use serde::Serialize;

use crate::chebyshev::{sup_norm, AtomicMeasure};
use crate::error::{Error, Result};
use crate::sequence::{CStarFunctional, EvConstSeq, FiniteSeq, GeoTailSeq};

const TAU_GRID: usize = 101;
const GOLDEN_ITERS: usize = 60;

/// `k*(φ) = (φ₁/2, φ₂/2², …)`.
pub fn kstar(phi: &EvConstSeq) -> GeoTailSeq {
    let head = phi.head().iter().enumerate().map(|(i, &v)| v * crate::sequence::pow2_neg(i + 1)).collect();
    GeoTailSeq::new(head, phi.tail()).expect("scaling by powers of two keeps values finite")
}

/// The level-`a` simplex `Δ_a`, or its strictly positive part `Δ_a⁺`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimplexDescriptor {
    pub a: f64,
    pub strict: bool,
}

impl SimplexDescriptor {
    pub fn contains(&self, x: &GeoTailSeq, tol: f64) -> bool {
        let cone = if self.strict { x.is_strictly_positive() } else { x.is_nonnegative() };
        cone && (x.l1_norm() - self.a).abs() <= tol
    }
}

/// `φ ∈ J(x)` for `x ∈ l₁`, `φ ∈ l∞`.
pub fn j_l1_membership(x: &GeoTailSeq, phi: &EvConstSeq, tol: f64) -> bool {
    let nx = x.l1_norm();
    (phi.pair_geo(x) - nx * nx).abs() <= tol && (phi.sup_norm() - nx).abs() <= tol
}

/// `φ ∈ J(x)` for `x ∈ c`, `φ ∈ c*`.
pub fn j_c_membership(x: &EvConstSeq, phi: &CStarFunctional, tol: f64) -> bool {
    let nx = x.sup_norm();
    (phi.pair(x) - nx * nx).abs() <= tol && (phi.dual_norm() - nx).abs() <= tol
}

/// `μ ∈ J(f)` for an atomic measure on `[0,1]`: atoms sit on the maximizing
/// set of `|f|`, carry the sign of `f`, and the total variation and pairing
/// match `‖f‖` and `‖f‖²`.
pub fn j_c01_membership(mu: &AtomicMeasure, f: &dyn Fn(f64) -> f64, tol: f64, grid: usize) -> Result<bool> {
    let (norm, _) = sup_norm(f, grid);
    if norm == 0.0 {
        return Err(Error::Precondition("‖f‖ = 0 has no normalized dual to test".into()));
    }
    let on_max = mu.atoms.iter().all(|a| (f(a.t).abs() - norm).abs() <= tol);
    let signs = mu.atoms.iter().all(|a| a.w * f(a.t) >= 0.0);
    let (pairing, tv) = mu.pair_and_tv(f);
    Ok(on_max && signs && (tv - norm).abs() <= tol && (pairing - norm * norm).abs() <= tol)
}

/// Result of evaluating `J` on a simplex point.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum JValue {
    /// `J(y) = {β_a}`.
    Single { value: EvConstSeq },
    /// `J(y)` has more than one element; `witness ∈ J(y)` differs from `β_a`
    /// by vanishing at the zero entry `index`.
    NonSingleton { index: usize, witness: EvConstSeq },
}

/// `J(y)` for `y ∈ Δ_a`, `a = ‖y‖₁`.
pub fn j_value_on_strict_simplex(y: &GeoTailSeq, tol: f64) -> Result<JValue> {
    if !y.is_nonnegative() {
        return Err(Error::Precondition("y must lie in the positive cone K₁".into()));
    }
    let a = y.l1_norm();
    if a <= tol {
        return Err(Error::Precondition("y must have positive norm".into()));
    }
    match y.zero_index() {
        None => Ok(JValue::Single { value: EvConstSeq::constant(a) }),
        Some(m) => {
            let mut head = vec![a; m];
            head[m - 1] = 0.0;
            Ok(JValue::NonSingleton { index: m, witness: EvConstSeq::new(head, a)? })
        }
    }
}

/// Sign pattern shared by a set of points: `Some(v)` where the entry is forced,
/// `None` where it is free. Returns `None` on a sign conflict.
struct SignPattern {
    head: Vec<Option<f64>>,
    tail: Option<f64>,
}

impl SignPattern {
    fn build(points: &[&GeoTailSeq], a: f64) -> Option<Self> {
        fn merge(slot: &mut Option<f64>, v: f64, a: f64) -> bool {
            if v == 0.0 {
                return true;
            }
            let want = a * v.signum();
            match *slot {
                None => {
                    *slot = Some(want);
                    true
                }
                Some(prev) => prev == want,
            }
        }
        let len = points.iter().map(|p| p.head().len()).max().unwrap_or(0);
        let mut head = vec![None; len];
        let mut tail = None;
        for p in points {
            for (n, slot) in head.iter_mut().enumerate() {
                if !merge(slot, p.get(n + 1), a) {
                    return None;
                }
            }
            if !merge(&mut tail, p.geo(), a) {
                return None;
            }
        }
        Some(Self { head, tail })
    }

    fn has_free(&self) -> bool {
        self.tail.is_none() || self.head.iter().any(Option::is_none)
    }

    fn instantiate(&self, tau: f64) -> EvConstSeq {
        let head = self.head.iter().map(|v| v.unwrap_or(tau)).collect();
        EvConstSeq::new(head, self.tail.unwrap_or(tau)).expect("finite pattern")
    }
}

/// Maximizes `objective(τ)` over `[-a, a]`: a uniform grid followed by one
/// golden-section pass around the best grid point. Ties prefer small `|τ|`.
fn best_tau(a: f64, objective: impl Fn(f64) -> f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let step = 2.0 * a / (TAU_GRID - 1) as f64;
    let mut best = (0.0f64, objective(0.0));
    for i in 0..TAU_GRID {
        let tau = -a + step * i as f64;
        let val = objective(tau);
        if val > best.1 || (val == best.1 && tau.abs() < best.0.abs()) {
            best = (tau, val);
        }
    }
    let (mut lo, mut hi) = ((best.0 - step).max(-a), (best.0 + step).min(a));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..GOLDEN_ITERS {
        let m1 = hi - g * (hi - lo);
        let m2 = lo + g * (hi - lo);
        if objective(m1) >= objective(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let mid = 0.5 * (lo + hi);
    let val = objective(mid);
    if val > best.1 {
        mid
    } else {
        best.0
    }
}

/// Finds `φ` in the sign-pattern family with `φ ∈ J(x)` for every given point.
/// All points must share the norm `a`.
pub fn find_common_dual(points: &[&GeoTailSeq], tol: f64) -> Option<EvConstSeq> {
    let a = points.first()?.l1_norm();
    if points.iter().any(|p| (p.l1_norm() - a).abs() > tol) {
        return None;
    }
    let pattern = SignPattern::build(points, a)?;
    let phi = pattern.instantiate(0.0);
    points.iter().all(|p| j_l1_membership(p, &phi, tol)).then_some(phi)
}

/// Outcome of a search for a shared dual element.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelatedReport {
    pub related: bool,
    pub dual: Option<EvConstSeq>,
    /// Set when `related` is false: the search family was exhausted, which does
    /// not prove that `J(y) ∩ J(z)` is empty.
    pub not_found_in_family: bool,
}

/// Generalized identity: is `J(y) ∩ J(z) ≠ ∅`?
pub fn generalized_identity_related(y: &GeoTailSeq, z: &GeoTailSeq, tol: f64) -> RelatedReport {
    let dual = find_common_dual(&[y, z], tol);
    RelatedReport { related: dual.is_some(), not_found_in_family: dual.is_none(), dual }
}

/// For `φ ≠ β_a`, an axis point `s(m, a) ∈ Δ_a` with `φ ∉ J(s(m, a))`.
pub fn separating_axis_point(phi: &EvConstSeq, a: f64) -> Option<FiniteSeq> {
    let m = (1..=phi.head().len() + 1).find(|&n| phi.get(n) != a)?;
    FiniteSeq::axis(m, a).ok()
}

/// A point related to `y ∈ Δ_a \ Δ_a⁺` that lies outside `Δ_a`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutsideSimplexWitness {
    /// Equal to `y/2` except for `-a/2` at the zero entry of `y`.
    pub x: GeoTailSeq,
    /// `a` everywhere except `-a` at the zero entry; lies in `J(x) ∩ J(y)`.
    pub gamma: EvConstSeq,
    pub index: usize,
    /// The textbook form of this construction uses `-1/2` at the zero entry,
    /// which coincides with `-a/2` only for `a = 1`.
    pub matches_unit_form: bool,
}

pub fn outside_simplex_witness(y: &GeoTailSeq, tol: f64) -> Result<OutsideSimplexWitness> {
    let m = match j_value_on_strict_simplex(y, tol)? {
        JValue::NonSingleton { index, .. } => index,
        JValue::Single { .. } => {
            return Err(Error::Precondition("y has no zero entry (y ∈ Δ_a⁺)".into()));
        }
    };
    let a = y.l1_norm();
    let len = y.head().len().max(m);
    let mut head: Vec<f64> = (1..=len).map(|n| y.get(n) / 2.0).collect();
    head[m - 1] = -a / 2.0;
    let x = GeoTailSeq::new(head, y.geo() / 2.0)?;
    let mut ghead = vec![a; m];
    ghead[m - 1] = -a;
    let gamma = EvConstSeq::new(ghead, a)?;
    Ok(OutsideSimplexWitness { x, gamma, index: m, matches_unit_form: a == 1.0 })
}

/// Sampled check of the variational characterization of `u ∈ P_C(x)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariationalReport {
    /// The dual element `j(x - u)` used.
    pub j: EvConstSeq,
    /// `min ⟨j, u - y⟩` over the samples.
    pub min_value: f64,
    pub worst_sample: Option<usize>,
    pub holds: bool,
}

/// Checks `⟨j(x - u), u - y⟩ >= -tol` for all sampled `y ∈ C`.
///
/// `j` is the sign functional of `x - u` scaled to `‖x - u‖`, with its free
/// value chosen to maximize the minimum over the sample. The verdict is only as
/// strong as the sample.
pub fn variational_inequality_check(
    x: &GeoTailSeq,
    u: &GeoTailSeq,
    samples: &[GeoTailSeq],
    tol: f64,
) -> VariationalReport {
    let d = x.sub(u);
    let a = d.l1_norm();
    let diffs: Vec<GeoTailSeq> = samples.iter().map(|y| u.sub(y)).collect();
    let eval = |j: &EvConstSeq| -> (f64, Option<usize>) {
        diffs.iter().enumerate().fold((f64::INFINITY, None), |(m, arg), (i, w)| {
            let v = j.pair_geo(w);
            if v < m {
                (v, Some(i))
            } else {
                (m, arg)
            }
        })
    };
    let pattern = SignPattern::build(&[&d], a).expect("a single point has no sign conflict");
    let tau = if pattern.has_free() && a > 0.0 { best_tau(a, |t| eval(&pattern.instantiate(t)).0) } else { 0.0 };
    let j = pattern.instantiate(tau);
    let (min_value, worst_sample) = if diffs.is_empty() { (0.0, None) } else { eval(&j) };
    VariationalReport { holds: min_value >= -tol, j, min_value, worst_sample }
}
