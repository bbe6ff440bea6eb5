//! Best uniform polynomial approximation on `[0,1]`.
//!
//! [`remez`] runs a multi-point exchange in the Chebyshev basis `T_k(2t - 1)`
//! and returns a [`BestApprox`]: the minimax polynomial together with its
//! equioscillation certificate `(A, S, ε)`. The remaining helpers work with the
//! atomic measures that represent dual elements of `C[0,1]`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A shareable real function on `[0,1]`.
pub type Func = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

pub const DEFAULT_GRID: usize = 4096;
pub const DEFAULT_REMEZ_TOL: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 50;

/// Polynomial `c₀ + c₁t + … + cₙtⁿ`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly {
    pub coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    /// Index of the highest nonzero coefficient (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(f64, f64) -> f64) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Self, i: usize| p.coeffs.get(i).copied().unwrap_or(0.0);
        Self::new((0..len).map(|i| op(get(self, i), get(other, i))).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, a: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| a * c).collect())
    }

    /// Largest coefficient difference, padding the shorter list with zeros.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        self.sub(other).coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn to_func(&self) -> Func {
        let p = self.clone();
        Arc::new(move |t| p.eval(t))
    }
}

/// A single atom `w·δ_t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub t: f64,
    pub w: f64,
}

/// A finite signed combination of point masses on `[0,1]`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "AtomicMeasureWire")]
pub struct AtomicMeasure {
    pub atoms: Vec<Atom>,
}

#[derive(Deserialize)]
struct AtomicMeasureWire {
    atoms: Vec<Atom>,
}

impl TryFrom<AtomicMeasureWire> for AtomicMeasure {
    type Error = Error;
    fn try_from(w: AtomicMeasureWire) -> Result<Self> {
        AtomicMeasure::new(w.atoms)
    }
}

impl AtomicMeasure {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        for a in &atoms {
            if !(0.0..=1.0).contains(&a.t) || !a.w.is_finite() {
                return Err(Error::InvalidInput(format!("atom ({}, {}) outside [0,1] or non-finite", a.t, a.w)));
            }
        }
        Ok(Self { atoms })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn point(t: f64, w: f64) -> Result<Self> {
        Self::new(vec![Atom { t, w }])
    }

    /// `v(μ, [0,1]) = Σ |wᵢ|`.
    pub fn total_variation(&self) -> f64 {
        self.atoms.iter().map(|a| a.w.abs()).sum()
    }

    /// `μ([0,1]) = Σ wᵢ`.
    pub fn mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.w).sum()
    }

    pub fn pair(&self, f: &dyn Fn(f64) -> f64) -> f64 {
        self.atoms.iter().map(|a| a.w * f(a.t)).sum()
    }

    pub fn pair_and_tv(&self, f: &dyn Fn(f64) -> f64) -> (f64, f64) {
        (self.pair(f), self.total_variation())
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { atoms: self.atoms.iter().map(|a| Atom { t: a.t, w: c * a.w }).collect() }
    }
}

/// `(⟨μ, f⟩, v(μ, [0,1]))`.
pub fn measure_pair_and_tv(mu: &AtomicMeasure, f: &dyn Fn(f64) -> f64) -> (f64, f64) {
    mu.pair_and_tv(f)
}

/// Minimax approximation with its equioscillation certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestApprox {
    #[serde(rename = "coeffs")]
    pub p: Poly,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "S")]
    pub s: Vec<f64>,
    pub eps: i32,
    /// Relative gap between the sup of the error and the levelled error.
    pub defect: f64,
    /// False when `f` is itself a polynomial of degree `<= n`: then `A = 0` and
    /// no alternation set exists.
    #[serde(default = "yes")]
    pub applicable: bool,
    #[serde(default)]
    pub iterations: usize,
}

fn yes() -> bool {
    true
}

impl BestApprox {
    pub fn degree_bound(&self) -> usize {
        self.s.len().saturating_sub(2)
    }

    /// `f - p` as a shareable function.
    pub fn residual(&self, f: Func) -> Func {
        let p = self.p.clone();
        Arc::new(move |t| f(t) - p.eval(t))
    }
}

/// Starting reference for the exchange.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitialReference {
    /// `tᵢ = (1 - cos(iπ/(n+1)))/2`.
    #[default]
    Chebyshev,
    /// `tᵢ = i/(n+1)`.
    Equispaced,
}

impl InitialReference {
    fn points(self, n: usize) -> Vec<f64> {
        let m = (n + 1) as f64;
        (0..n + 2)
            .map(|i| match self {
                InitialReference::Chebyshev => 0.5 * (1.0 - (i as f64 * std::f64::consts::PI / m).cos()),
                InitialReference::Equispaced => i as f64 / m,
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemezOptions {
    pub tol: f64,
    pub grid: usize,
    pub max_iterations: usize,
    pub init: InitialReference,
}

impl Default for RemezOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_REMEZ_TOL, grid: DEFAULT_GRID, max_iterations: MAX_ITERATIONS, init: InitialReference::Chebyshev }
    }
}

/// Maximizes `g` on `[lo, hi]` by golden section, also trying both ends.
fn golden_max(g: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let (a0, b0) = (lo, hi);
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut g1, mut g2) = (g(x1), g(x2));
    for _ in 0..200 {
        if hi - lo <= 1e-15 {
            break;
        }
        if g1 >= g2 {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - r * (hi - lo);
            g1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + r * (hi - lo);
            g2 = g(x2);
        }
    }
    let mid = 0.5 * (lo + hi);
    [(a0, g(a0)), (b0, g(b0)), (mid, g(mid))].into_iter().fold((mid, f64::NEG_INFINITY), |best, c| {
        if c.1 > best.1 {
            c
        } else {
            best
        }
    })
}

fn uniform_grid(size: usize) -> Vec<f64> {
    let size = size.max(2);
    (0..size).map(|i| i as f64 / (size - 1) as f64).collect()
}

/// Refined local maxima of `|f|`: `(t, |f(t)|)` for each grid-local maximum.
fn local_maxima(f: &dyn Fn(f64) -> f64, grid: usize) -> Vec<(f64, f64)> {
    let ts = uniform_grid(grid);
    let vals: Vec<f64> = ts.iter().map(|&t| f(t).abs()).collect();
    let last = ts.len() - 1;
    let mut out = Vec::new();
    for i in 0..=last {
        let left = if i > 0 { vals[i - 1] } else { f64::NEG_INFINITY };
        let right = if i < last { vals[i + 1] } else { f64::NEG_INFINITY };
        if vals[i] >= left && vals[i] >= right {
            let lo = ts[i.saturating_sub(1)];
            let hi = ts[(i + 1).min(last)];
            let abs_f = |t: f64| f(t).abs();
            out.push(golden_max(&abs_f, lo, hi));
        }
    }
    out
}

/// `(‖f‖, argmax)` on `[0,1]`: grid scan plus golden-section refinement.
pub fn sup_norm(f: &dyn Fn(f64) -> f64, grid: usize) -> (f64, f64) {
    local_maxima(f, grid).into_iter().fold((0.0, 0.0), |best, (t, v)| if v > best.0 { (v, t) } else { best })
}

/// The maximizing set `M(f)` of `|f|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "points", rename_all = "snake_case")]
pub enum MaximizingSet {
    Points(Vec<f64>),
    /// `|f|` is constant on `[0,1]` up to the tolerance.
    WholeInterval,
}

pub fn maximizing_set(f: &dyn Fn(f64) -> f64, grid: usize, tol: f64) -> MaximizingSet {
    let (norm, _) = sup_norm(f, grid);
    if uniform_grid(grid).iter().all(|&t| (f(t).abs() - norm).abs() <= tol) {
        return MaximizingSet::WholeInterval;
    }
    let spacing = 1.0 / (grid.max(2) - 1) as f64;
    let mut pts: Vec<(f64, f64)> = local_maxima(f, grid).into_iter().filter(|&(_, v)| (v - norm).abs() <= tol).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (t, v) in pts {
        match out.last_mut() {
            Some(last) if t - last.0 <= 2.0 * spacing => {
                if v > last.1 {
                    *last = (t, v);
                }
            }
            _ => out.push((t, v)),
        }
    }
    MaximizingSet::Points(out.into_iter().map(|p| p.0).collect())
}

/// Chebyshev-basis coefficients `b_k` of a polynomial in `T_k(2t - 1)`.
struct ChebPoly(Vec<f64>);

impl ChebPoly {
    fn eval(&self, t: f64) -> f64 {
        // Clenshaw recurrence
        let x = 2.0 * t - 1.0;
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.0.iter().skip(1).rev() {
            let b0 = 2.0 * x * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        self.0.first().copied().unwrap_or(0.0) + x * b1 - b2
    }

    fn to_monomial(&self) -> Poly {
        let n = self.0.len();
        let mut out = vec![0.0; n.max(1)];
        let mut prev = vec![1.0];
        let mut cur = vec![-1.0, 2.0];
        for (k, &b) in self.0.iter().enumerate() {
            let basis = if k == 0 { &prev } else { &cur };
            for (i, &c) in basis.iter().enumerate() {
                out[i] += b * c;
            }
            if k >= 1 {
                // T_{k+1} = 2(2t - 1)T_k - T_{k-1}
                let mut next = vec![0.0; cur.len() + 1];
                for (i, &c) in cur.iter().enumerate() {
                    next[i + 1] += 4.0 * c;
                    next[i] -= 2.0 * c;
                }
                for (i, &c) in prev.iter().enumerate() {
                    next[i] -= c;
                }
                prev = std::mem::replace(&mut cur, next);
            }
        }
        Poly::new(out)
    }
}

fn cheb_basis(t: f64, n: usize) -> Vec<f64> {
    let x = 2.0 * t - 1.0;
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n >= 1 {
        out.push(x);
    }
    for k in 2..=n {
        out.push(2.0 * x * out[k - 1] - out[k - 2]);
    }
    out
}

/// Solves `p(tᵢ) + (-1)ⁱE = f(tᵢ)` on the reference.
fn level_solve(f: &dyn Fn(f64) -> f64, n: usize, reference: &[f64]) -> Result<(ChebPoly, f64)> {
    let dim = n + 2;
    let mut m = DMatrix::zeros(dim, dim);
    let mut rhs = DVector::zeros(dim);
    for (i, &t) in reference.iter().enumerate() {
        for (k, b) in cheb_basis(t, n).into_iter().enumerate() {
            m[(i, k)] = b;
        }
        m[(i, n + 1)] = if i % 2 == 0 { 1.0 } else { -1.0 };
        rhs[i] = f(t);
    }
    let sol = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Precondition("singular reference system (coincident points)".into()))?;
    Ok((ChebPoly(sol.iter().take(n + 1).copied().collect()), sol[n + 1]))
}

/// Signed extrema of `e`, one per maximal sign run on the sampled points.
fn alternating_extrema(e: &dyn Fn(f64) -> f64, ts: &[f64]) -> Vec<(f64, f64)> {
    let vals: Vec<f64> = ts.iter().map(|&t| e(t)).collect();
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut i = 0;
    while i < ts.len() {
        if vals[i] == 0.0 {
            i += 1;
            continue;
        }
        let sign = vals[i].signum();
        let mut best = i;
        let mut j = i;
        while j < ts.len() && vals[j] * sign >= 0.0 {
            if vals[j] * sign > vals[best] * sign {
                best = j;
            }
            j += 1;
        }
        let lo = ts[best.saturating_sub(1)];
        let hi = ts[(best + 1).min(ts.len() - 1)];
        let signed = |t: f64| sign * e(t);
        let (t, _) = golden_max(&signed, lo, hi);
        let (t, v) = if sign * e(t) >= sign * vals[best] { (t, e(t)) } else { (ts[best], vals[best]) };
        out.push((t, v));
        i = j;
    }
    out
}

/// Trims an alternating list of extrema down to `keep` points, always keeping
/// sign alternation and the largest `|e|`.
fn trim_extrema(mut ext: Vec<(f64, f64)>, keep: usize) -> Vec<(f64, f64)> {
    while ext.len() > keep {
        if ext.len() == keep + 1 {
            let last = ext.len() - 1;
            if ext[0].1.abs() <= ext[last].1.abs() {
                ext.remove(0);
            } else {
                ext.remove(last);
            }
            continue;
        }
        let (imin, _) = ext.iter().enumerate().fold((0, f64::INFINITY), |b, (i, p)| {
            if p.1.abs() < b.1 {
                (i, p.1.abs())
            } else {
                b
            }
        });
        if imin == 0 || imin == ext.len() - 1 {
            ext.remove(imin);
        } else {
            // neighbours now share a sign; keep the larger of the two
            let drop = if ext[imin - 1].1.abs() <= ext[imin + 1].1.abs() { imin - 1 } else { imin + 1 };
            ext.remove(imin.max(drop));
            ext.remove(imin.min(drop));
        }
    }
    ext
}

/// Classical single-point exchange of `t*` into the reference.
fn single_exchange(reference: &mut [f64], e: &dyn Fn(f64) -> f64, t_star: f64) {
    let s_star = e(t_star).signum();
    let same = |t: f64| e(t).signum() == s_star;
    let last = reference.len() - 1;
    if t_star < reference[0] {
        if same(reference[0]) {
            reference[0] = t_star;
        } else {
            reference.copy_within(0..last, 1);
            reference[0] = t_star;
        }
    } else if t_star > reference[last] {
        if same(reference[last]) {
            reference[last] = t_star;
        } else {
            reference.copy_within(1..=last, 0);
            reference[last] = t_star;
        }
    } else {
        let i = reference.iter().rposition(|&r| r <= t_star).unwrap_or(0);
        let j = (i + 1).min(last);
        if same(reference[i]) {
            reference[i] = t_star;
        } else {
            reference[j] = t_star;
        }
    }
}

/// Best uniform approximation of `f` from polynomials of degree `<= n`.
pub fn remez(f: &dyn Fn(f64) -> f64, n: usize, tol: f64, grid: usize) -> Result<BestApprox> {
    remez_with(f, n, &RemezOptions { tol, grid, ..RemezOptions::default() })
}

pub fn remez_with(f: &dyn Fn(f64) -> f64, n: usize, opts: &RemezOptions) -> Result<BestApprox> {
    let base_grid = uniform_grid(opts.grid);
    let (f_norm, _) = sup_norm(f, opts.grid);
    let zero_level = 1e-13 * f_norm.max(1.0);
    let mut reference = opts.init.points(n);
    let mut best: Option<BestApprox> = None;

    for iteration in 1..=opts.max_iterations {
        let (cheb, level) = level_solve(f, n, &reference)?;
        let e = |t: f64| f(t) - cheb.eval(t);

        let mut ts: Vec<f64> = base_grid.iter().chain(reference.iter()).copied().collect();
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        let ext = alternating_extrema(&e, &ts);
        let max_err = ext.iter().fold(0.0f64, |m, p| m.max(p.1.abs()));
        let p = cheb.to_monomial();

        if max_err <= zero_level {
            return Ok(BestApprox { p, a: 0.0, s: Vec::new(), eps: 1, defect: max_err, applicable: false, iterations: iteration });
        }

        let defect = (max_err - level.abs()) / level.abs().max(1.0);
        let next = if ext.len() >= n + 2 { Some(trim_extrema(ext.clone(), n + 2)) } else { None };
        let candidate = next.as_ref().map(|pts| BestApprox {
            p: p.clone(),
            a: max_err,
            s: pts.iter().map(|q| q.0).collect(),
            eps: pts[0].1.signum() as i32,
            defect,
            applicable: true,
            iterations: iteration,
        });
        if let Some(c) = &candidate {
            if best.as_ref().map_or(true, |b| c.defect < b.defect) {
                best = Some(c.clone());
            }
            if defect <= opts.tol {
                return Ok(c.clone());
            }
        }

        match next {
            Some(pts) => reference = pts.into_iter().map(|q| q.0).collect(),
            None => {
                let (t_star, _) = ext.iter().fold((0.0, 0.0), |b, q| if q.1.abs() > b.1 { (q.0, q.1.abs()) } else { b });
                single_exchange(&mut reference, &e, t_star);
            }
        }
        if reference.windows(2).any(|w| w[1] <= w[0]) {
            break;
        }
    }

    let best = best.unwrap_or_else(|| BestApprox {
        p: Poly::zero(),
        a: f64::NAN,
        s: Vec::new(),
        eps: 1,
        defect: f64::INFINITY,
        applicable: true,
        iterations: opts.max_iterations,
    });
    Err(Error::NonConvergence { iterations: opts.max_iterations, defect: best.defect, best: Box::new(best) })
}

/// Detailed outcome of [`verify_equioscillation`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquioscillationCheck {
    pub ok: bool,
    /// `max |(f - p)(tᵢ) - ε·A·(-1)ⁱ|`.
    pub alternation_defect: f64,
    /// `|max|f - p| - A|` on the refined grid.
    pub level_defect: f64,
    pub ordered: bool,
    pub cardinality_ok: bool,
}

/// Rechecks a certificate: strictly increasing `S ⊆ [0,1]` with `n + 2` points,
/// alternating residuals `ε·A·(-1)ⁱ`, and `A` equal to the sup of `|f - p|`.
pub fn verify_equioscillation(f: &dyn Fn(f64) -> f64, cert: &BestApprox, n: usize, tol: f64) -> EquioscillationCheck {
    let e = |t: f64| f(t) - cert.p.eval(t);
    let (sup, _) = sup_norm(&e, 2 * DEFAULT_GRID);
    if !cert.applicable {
        return EquioscillationCheck { ok: sup <= tol, alternation_defect: 0.0, level_defect: sup, ordered: true, cardinality_ok: true };
    }
    let ordered = cert.s.windows(2).all(|w| w[0] < w[1]) && cert.s.iter().all(|t| (0.0..=1.0).contains(t));
    let cardinality_ok = cert.s.len() == n + 2 && cert.p.coeffs.len() <= n + 1 && cert.eps.abs() == 1;
    let alternation_defect = cert
        .s
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            (e(t) - cert.eps as f64 * cert.a * sign).abs()
        })
        .fold(0.0, f64::max);
    let level_defect = (sup - cert.a).abs();
    EquioscillationCheck {
        ok: ordered && cardinality_ok && alternation_defect <= tol && level_defect <= tol,
        alternation_defect,
        level_defect,
        ordered,
        cardinality_ok,
    }
}

/// `μ_p^f`: atoms at `S` with weights `(f - p)(tᵢ)/(n + 2)`. Lies in `J(f - p)`.
pub fn mu_pf(f: &dyn Fn(f64) -> f64, cert: &BestApprox) -> Result<AtomicMeasure> {
    if !cert.applicable || cert.a == 0.0 {
        return Err(Error::Precondition("A(f, p) = 0: f - p has no normalized dual".into()));
    }
    let k = cert.s.len() as f64;
    AtomicMeasure::new(cert.s.iter().map(|&t| Atom { t, w: (f(t) - cert.p.eval(t)) / k }).collect())
}

/// Difference quotients of the projection onto polynomials in direction `p`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateauxReport {
    pub limit: Poly,
    pub steps: Vec<f64>,
    pub quotients: Vec<Poly>,
    pub max_deviation: f64,
    /// False when some quotient strays from `p` by more than the tolerance.
    pub consistent: bool,
}

pub const GATEAUX_TOL: f64 = 1e-6;

/// `(P(f + tp) - P(f))/t` for `t = 2⁻ᵏ`, `k = 0..=6`.
pub fn gateaux_directional(f: &dyn Fn(f64) -> f64, n: usize, p: &Poly, opts: &RemezOptions) -> Result<GateauxReport> {
    if p.is_zero() {
        return Err(Error::Precondition("direction p must be nonzero".into()));
    }
    if p.degree() > n {
        return Err(Error::Precondition(format!("direction has degree {} > {n}", p.degree())));
    }
    let base = remez_with(f, n, opts)?.p;
    let steps: Vec<f64> = (0..=6).map(|k| 2f64.powi(-k)).collect();
    let mut quotients = Vec::with_capacity(steps.len());
    for &t in &steps {
        let g = |s: f64| f(s) + t * p.eval(s);
        let moved = remez_with(&g, n, opts)?.p;
        quotients.push(moved.sub(&base).scale(1.0 / t));
    }
    let max_deviation = quotients.iter().map(|q| q.max_coeff_diff(p)).fold(0.0, f64::max);
    let limit = quotients.last().cloned().unwrap_or_default();
    Ok(GateauxReport { limit, steps, quotients, max_deviation, consistent: max_deviation <= GATEAUX_TOL })
}

/// `g(t) = sin(2mπt) + q(t)`, whose best approximation of any degree
/// `deg q <= n < m` is `q` itself with level 1.
pub fn make_sine_fixture(q: &Poly, m: usize) -> Result<Func> {
    if m <= q.degree() {
        return Err(Error::Precondition(format!("m = {m} must exceed deg q = {}", q.degree())));
    }
    let q = q.clone();
    let k = 2.0 * m as f64 * std::f64::consts::PI;
    Ok(Arc::new(move |t| (k * t).sin() + q.eval(t)))
}
