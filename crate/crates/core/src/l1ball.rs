//! Set-valued metric projection onto the closed ball `rB` of `l₁`.
//!
//! For `x` in the positive cone with `‖x‖₁ > r` the projection set is the
//! order interval `[θ, x]` intersected with the level-`r` simplex. Outside the
//! cone only the scaled point `(r/‖x‖₁)·x` is known to be a member; the
//! brute-force oracle is the only tool offered there.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sequence::{FiniteSeq, GeoTailSeq};

/// Membership tolerance used for generated members.
pub const MEMBER_TOL: f64 = 1e-12;

const LAMBDA_STEPS: usize = 5;

/// `(r/‖x‖₁)·x`, a member of the projection set for every `x` outside `rB`.
pub fn canonical_selection(x: &GeoTailSeq, r: f64) -> Result<GeoTailSeq> {
    let a = x.l1_norm();
    if !(r > 0.0) || a <= r {
        return Err(Error::Precondition(format!("need ‖x‖₁ = {a} > r = {r} > 0")));
    }
    Ok(x.scale(r / a))
}

/// Descriptor `[θ, x] ∩ Δ_r` of the projection set of `x ∈ K₁` onto `rB`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct L1BallProjectionSet {
    pub upper: GeoTailSeq,
    pub r: f64,
}

/// Builds the descriptor; `x` must lie in `K₁` with `‖x‖₁ > r > 0`.
pub fn projection_set(x: &GeoTailSeq, r: f64) -> Result<L1BallProjectionSet> {
    if !x.is_nonnegative() {
        return Err(Error::Precondition("x must lie in the positive cone K₁".into()));
    }
    let a = x.l1_norm();
    if !(r > 0.0) || a <= r {
        return Err(Error::Precondition(format!("need ‖x‖₁ = {a} > r = {r} > 0")));
    }
    Ok(L1BallProjectionSet { upper: x.clone(), r })
}

impl L1BallProjectionSet {
    /// `θ ⪯ y ⪯ x` entrywise and `|‖y‖₁ - r| <= tol`.
    pub fn contains(&self, y: &GeoTailSeq, tol: f64) -> bool {
        let len = y.head().len().max(self.upper.head().len());
        let ordered = y.is_nonnegative()
            && (1..=len).all(|n| y.get(n) <= self.upper.get(n))
            && y.geo() <= self.upper.geo();
        ordered && (y.l1_norm() - self.r).abs() <= tol
    }

    /// `|‖y‖₁ - r| + 2·Σ dist(yₙ, [0, xₙ])`, zero exactly on the set. For `y`
    /// in the ball this equals `‖x - y‖₁ - (‖x‖₁ - r)`.
    pub fn defect(&self, y: &[f64]) -> f64 {
        let norm: f64 = y.iter().map(|v| v.abs()).sum();
        let outside: f64 = y
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let hi = self.upper.get(i + 1);
                if v < 0.0 {
                    -v
                } else if v > hi {
                    v - hi
                } else {
                    0.0
                }
            })
            .sum();
        (norm - self.r).abs() + 2.0 * outside
    }

    pub fn canonical(&self) -> GeoTailSeq {
        self.upper.scale(self.r / self.upper.l1_norm())
    }
}

/// `Some(s(m, r))` when `x` is an axis point, `None` otherwise.
pub fn is_singleton(x: &GeoTailSeq, r: f64) -> Result<Option<FiniteSeq>> {
    projection_set(x, r)?;
    let Some(fin) = x.to_finite() else { return Ok(None) };
    if fin.support_len() != 1 {
        return Ok(None);
    }
    Ok(Some(FiniteSeq::axis(fin.max_index(), r)?))
}

/// Members drawn from a projection set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MemberSample {
    pub members: Vec<GeoTailSeq>,
    /// The set is a singleton, so fewer members than requested were returned.
    pub singleton: bool,
}

/// Indices `1..=limit` where `x` is nonzero; the geometric tail contributes
/// up to two indices past the head.
fn nonzero_indices(x: &GeoTailSeq) -> Vec<usize> {
    let limit = x.head().len() + if x.geo() != 0.0 { 2 } else { 0 };
    (1..=limit).filter(|&n| x.get(n) != 0.0).collect()
}

/// The deterministic family `y_λ`: for a pair `tₖ >= tₘ > 0`, move mass
/// `ρtₘ - λ` from index `m` to index `k` of the scaled point, with
/// `λ ∈ [(1 - c)ρtₘ, ρtₘ]` and `ρ = r/‖x‖₁`.
fn lambda_family(set: &L1BallProjectionSet) -> Vec<GeoTailSeq> {
    let x = &set.upper;
    let rho = set.r / x.l1_norm();
    let c = if 1.5 * rho < 1.0 { 0.5 } else { 0.5 * (1.0 / rho - 1.0) };
    let idx = nonzero_indices(x);
    let base = set.canonical();
    let len = idx.last().copied().unwrap_or(0).max(base.head().len());
    let mut out = Vec::new();
    for (i, &a) in idx.iter().enumerate() {
        for &b in &idx[i + 1..] {
            let (m, k) = if x.get(a) <= x.get(b) { (a, b) } else { (b, a) };
            let (tm, tk) = (x.get(m), x.get(k));
            let lo = (1.0 - c) * rho * tm;
            let hi = rho * tm;
            for j in 0..LAMBDA_STEPS - 1 {
                let lambda = lo + (hi - lo) * j as f64 / (LAMBDA_STEPS - 1) as f64;
                let mut head: Vec<f64> = (1..=len).map(|n| base.get(n)).collect();
                head[m - 1] = lambda;
                head[k - 1] = rho * (tm + tk) - lambda;
                if let Ok(y) = GeoTailSeq::new(head, base.geo()) {
                    out.push(y);
                }
            }
        }
    }
    out
}

fn key(y: &GeoTailSeq) -> (Vec<u64>, u64) {
    (y.head().iter().map(|v| v.to_bits()).collect(), y.geo().to_bits())
}

/// `k` distinct members: the scaled point, then the `y_λ` family, then random
/// convex combinations of those.
pub fn sample_members(set: &L1BallProjectionSet, k: usize, seed: u64) -> MemberSample {
    let canonical = set.canonical();
    if nonzero_indices(&set.upper).len() <= 1 && set.upper.geo() == 0.0 {
        return MemberSample { members: vec![canonical], singleton: true };
    }
    let mut seen = BTreeSet::new();
    let mut members = Vec::with_capacity(k);
    let mut push = |y: GeoTailSeq, members: &mut Vec<GeoTailSeq>| {
        if members.len() < k && set.contains(&y, MEMBER_TOL * set.r.max(1.0)) && seen.insert(key(&y)) {
            members.push(y);
        }
    };
    push(canonical.clone(), &mut members);
    let family = lambda_family(set);
    for y in &family {
        push(y.clone(), &mut members);
    }
    let mut pool = family;
    pool.push(canonical);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = 0;
    while members.len() < k && attempts < 100 * k {
        attempts += 1;
        let i = rng.gen_range(0..pool.len());
        let j = rng.gen_range(0..pool.len());
        let w: f64 = rng.gen_range(0.0..1.0);
        let y = pool[i].scale(w).add(&pool[j].scale(1.0 - w));
        push(y, &mut members);
    }
    MemberSample { members, singleton: false }
}

/// Checks `P(z) ⊆ P(x)` on sampled members of `P(z)`, for `θ ⪯ z ⪯ x`.
pub fn monotone_inclusion_check(z: &GeoTailSeq, x: &GeoTailSeq, r: f64, samples: usize, seed: u64) -> Result<bool> {
    let inner = projection_set(z, r)?;
    let outer = projection_set(x, r)?;
    let len = z.head().len().max(x.head().len());
    if (1..=len).any(|n| z.get(n) > x.get(n)) || z.geo() > x.geo() {
        return Err(Error::Precondition("need z ⪯ x entrywise".into()));
    }
    let tol = MEMBER_TOL * r.max(1.0);
    Ok(sample_members(&inner, samples, seed).members.iter().all(|y| outer.contains(y, tol)))
}

/// Random points of the `dim`-dimensional ball `rB`, starting with the `2·dim`
/// vertices `±r·eᵢ`.
pub fn sample_ball(r: f64, dim: usize, k: usize, seed: u64) -> Vec<GeoTailSeq> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(k);
    for i in 0..dim {
        for s in [1.0, -1.0] {
            let mut head = vec![0.0; dim];
            head[i] = s * r;
            out.push(GeoTailSeq::new(head, 0.0).expect("finite"));
        }
    }
    while out.len() < k {
        let raw: Vec<f64> = (0..dim)
            .map(|_| {
                let e: f64 = -rng.gen_range(f64::EPSILON..1.0f64).ln();
                if rng.gen_bool(0.5) {
                    e
                } else {
                    -e
                }
            })
            .collect();
        let norm: f64 = raw.iter().map(|v| v.abs()).sum();
        let radius = r * rng.gen_range(0.0..1.0f64).powf(1.0 / dim as f64);
        out.push(GeoTailSeq::new(raw.iter().map(|v| v * radius / norm).collect(), 0.0).expect("finite"));
    }
    out.truncate(k.max(2 * dim));
    out
}

/// Grid-search result for `min ‖x - y‖₁` over the lattice points of `rB`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    /// Minimum after a local refinement at an eighth of the resolution.
    pub min_distance: f64,
    /// Minimum over the lattice `resolution·ℤ^dim`.
    pub lattice_min: f64,
    /// Lattice points within `resolution/2` of `lattice_min`, as integer
    /// multiples of `resolution`, sorted.
    pub argmin: Vec<Vec<i64>>,
    pub resolution: f64,
}

impl OracleResult {
    pub fn argmin_points(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        self.argmin.iter().map(|k| k.iter().map(|&v| v as f64 * self.resolution).collect())
    }
}

pub const MAX_ORACLE_DIM: usize = 4;

/// Number of lattice steps that fit in radius `r`.
pub fn lattice_radius(r: f64, h: f64) -> i64 {
    (r / h + 1e-9).floor() as i64
}

pub fn lattice_distance(x: &[f64], k: &[i64], h: f64) -> f64 {
    x.iter().zip(k).map(|(&xi, &ki)| (xi - ki as f64 * h).abs()).sum()
}

struct Search<'a> {
    x: &'a [f64],
    h: f64,
    radius: i64,
    band: f64,
    best: f64,
    hits: Vec<(f64, Vec<i64>)>,
}

impl Search<'_> {
    fn lower_bound(&self, lo: &[i64], hi: &[i64]) -> f64 {
        self.x
            .iter()
            .zip(lo.iter().zip(hi))
            .map(|(&xi, (&l, &u))| {
                let (a, b) = (l as f64 * self.h, u as f64 * self.h);
                if xi < a {
                    a - xi
                } else if xi > b {
                    xi - b
                } else {
                    0.0
                }
            })
            .sum()
    }

    fn min_l1(lo: &[i64], hi: &[i64]) -> i64 {
        lo.iter().zip(hi).map(|(&l, &u)| if l <= 0 && u >= 0 { 0 } else { l.abs().min(u.abs()) }).sum()
    }

    fn visit(&mut self, lo: Vec<i64>, hi: Vec<i64>) {
        if Self::min_l1(&lo, &hi) > self.radius || self.lower_bound(&lo, &hi) > self.best + self.band {
            return;
        }
        if lo == hi {
            let d = lattice_distance(self.x, &lo, self.h);
            if d < self.best {
                self.best = d;
            }
            if d <= self.best + self.band {
                self.hits.push((d, lo));
            }
            return;
        }
        let dim = lo.len();
        let mut children = Vec::with_capacity(1 << dim);
        for mask in 0..(1usize << dim) {
            let mut clo = lo.clone();
            let mut chi = hi.clone();
            let mut valid = true;
            for i in 0..dim {
                let mid = lo[i] + (hi[i] - lo[i]).div_euclid(2);
                if mask >> i & 1 == 0 {
                    chi[i] = mid;
                } else if mid < hi[i] {
                    clo[i] = mid + 1;
                } else {
                    valid = false;
                }
            }
            if valid {
                let lb = self.lower_bound(&clo, &chi);
                children.push((lb, clo, chi));
            }
        }
        children.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (_, clo, chi) in children {
            self.visit(clo, chi);
        }
    }
}

/// Exhaustive branch-and-bound minimization of `‖x - y‖₁` over lattice points
/// `y ∈ resolution·ℤ^dim` with `‖y‖₁ <= r`.
pub fn brute_force_oracle(x: &FiniteSeq, r: f64, dim: usize, resolution: f64) -> Result<OracleResult> {
    if dim == 0 || dim > MAX_ORACLE_DIM {
        return Err(Error::Precondition(format!("oracle dimension must be in 1..={MAX_ORACLE_DIM}, got {dim}")));
    }
    if x.max_index() > dim {
        return Err(Error::Precondition(format!("x has support beyond the first {dim} coordinates")));
    }
    if !(r > 0.0) || !(resolution > 0.0) {
        return Err(Error::Precondition("r and resolution must be positive".into()));
    }
    let xs: Vec<f64> = (1..=dim).map(|n| x.get(n)).collect();
    let radius = lattice_radius(r, resolution);
    let mut search = Search { x: &xs, h: resolution, radius, band: 0.5 * resolution, best: f64::INFINITY, hits: Vec::new() };
    search.visit(vec![-radius; dim], vec![radius; dim]);
    let lattice_min = search.best;
    let band = search.band;
    let mut argmin: Vec<Vec<i64>> =
        search.hits.into_iter().filter(|(d, _)| *d <= lattice_min + band).map(|(_, k)| k).collect();
    argmin.sort();
    argmin.dedup();

    // local refinement around the first minimizer
    let fine = resolution / 8.0;
    let center: Vec<f64> = argmin
        .iter()
        .map(|k| (lattice_distance(&xs, k, resolution), k))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, k)| k.iter().map(|&v| v as f64 * resolution).collect())
        .unwrap_or_else(|| vec![0.0; dim]);
    let mut min_distance = lattice_min;
    let steps = 8i64;
    let total = (2 * steps + 1).pow(dim as u32);
    for code in 0..total {
        let mut c = code;
        let mut y = Vec::with_capacity(dim);
        for &ci in &center {
            let off = c % (2 * steps + 1) - steps;
            c /= 2 * steps + 1;
            y.push(ci + off as f64 * fine);
        }
        if y.iter().map(|v| v.abs()).sum::<f64>() <= r {
            let d: f64 = xs.iter().zip(&y).map(|(a, b)| (a - b).abs()).sum();
            min_distance = min_distance.min(d);
        }
    }
    Ok(OracleResult { min_distance, lattice_min, argmin, resolution })
}

/// Lattice points of `rB` that the descriptor places within `slack` of the
/// projection set (`defect <= slack`), enumerated directly from the descriptor
/// bounds. Sorted, as integer multiples of `h`.
pub fn descriptor_lattice_members(set: &L1BallProjectionSet, dim: usize, h: f64, slack: f64) -> Vec<Vec<i64>> {
    let radius = lattice_radius(set.r, h);
    let ranges: Vec<(i64, i64)> = (1..=dim)
        .map(|n| {
            let hi = set.upper.get(n);
            (((-slack / 2.0) / h).floor() as i64, ((hi + slack / 2.0) / h).ceil() as i64)
        })
        .collect();
    let mut out = Vec::new();
    let mut k = vec![0i64; dim];
    fn rec(
        depth: usize,
        k: &mut Vec<i64>,
        ranges: &[(i64, i64)],
        set: &L1BallProjectionSet,
        h: f64,
        slack: f64,
        radius: i64,
        out: &mut Vec<Vec<i64>>,
    ) {
        let dim = k.len();
        if depth == dim - 1 {
            // the last coordinate is pinned near r - Σ others
            let partial: f64 = k[..depth].iter().map(|&v| v as f64 * h).sum();
            let lo = (((set.r - slack - partial) / h).floor() as i64).max(ranges[depth].0);
            let hi = (((set.r + slack - partial) / h).ceil() as i64).min(ranges[depth].1);
            for v in lo..=hi {
                k[depth] = v;
                let l1: i64 = k.iter().map(|v| v.abs()).sum();
                if l1 > radius {
                    continue;
                }
                let y: Vec<f64> = k.iter().map(|&v| v as f64 * h).collect();
                if set.defect(&y) <= slack {
                    out.push(k.clone());
                }
            }
            return;
        }
        for v in ranges[depth].0..=ranges[depth].1 {
            k[depth] = v;
            rec(depth + 1, k, ranges, set, h, slack, radius, out);
        }
    }
    rec(0, &mut k, &ranges, set, h, slack, radius, &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin(v: &[f64]) -> GeoTailSeq {
        GeoTailSeq::new(v.to_vec(), 0.0).unwrap()
    }

    #[test]
    fn canonical_selection_examples() {
        assert_eq!(canonical_selection(&fin(&[2.0, 1.0]), 1.0).unwrap(), fin(&[2.0 / 3.0, 1.0 / 3.0]));
        assert_eq!(canonical_selection(&fin(&[0.0, 0.0, 5.0]), 2.0).unwrap(), fin(&[0.0, 0.0, 2.0]));
        let y = canonical_selection(&fin(&[-2.0, 1.0]), 1.0).unwrap();
        assert_eq!(y, fin(&[-2.0 / 3.0, 1.0 / 3.0]));
        assert!((fin(&[-2.0, 1.0]).sub(&y).l1_norm() - 2.0).abs() < 1e-15);
        assert!(canonical_selection(&fin(&[0.5]), 1.0).is_err());
    }

    #[test]
    fn descriptor_examples() {
        let set = projection_set(&fin(&[2.0, 1.0]), 1.0).unwrap();
        for y in [fin(&[1.0]), fin(&[0.5, 0.5]), fin(&[0.0, 1.0])] {
            assert!(set.contains(&y, 0.0));
        }
        assert!(!set.contains(&fin(&[1.1]), 1e-9));
        assert!(set.contains(&set.canonical(), MEMBER_TOL));
        assert!(projection_set(&fin(&[2.0, -1.0]), 1.0).is_err());
    }

    #[test]
    fn singleton_examples() {
        assert_eq!(is_singleton(&fin(&[0.0, 0.0, 5.0]), 2.0).unwrap(), Some(FiniteSeq::axis(3, 2.0).unwrap()));
        assert_eq!(is_singleton(&fin(&[2.0, 1.0]), 1.0).unwrap(), None);
        assert_eq!(is_singleton(&fin(&[2.0, 0.0, 0.0]), 1.0).unwrap(), Some(FiniteSeq::axis(1, 1.0).unwrap()));
        assert_eq!(is_singleton(&GeoTailSeq::new(vec![], 4.0).unwrap(), 1.0).unwrap(), None);
    }

    #[test]
    fn member_sampling() {
        let set = projection_set(&fin(&[2.0, 1.0]), 1.0).unwrap();
        let s = sample_members(&set, 3, 7);
        assert!(!s.singleton);
        assert_eq!(s.members.len(), 3);
        assert_eq!(s.members[0], fin(&[2.0 / 3.0, 1.0 / 3.0]));
        for y in &s.members {
            assert!(set.contains(y, MEMBER_TOL));
            assert!((fin(&[2.0, 1.0]).sub(y).l1_norm() - 2.0).abs() < 1e-12);
        }
        let s = sample_members(&set, 40, 7);
        assert_eq!(s.members.len(), 40);

        let set = projection_set(&fin(&[2.0]), 1.0).unwrap();
        let s = sample_members(&set, 3, 7);
        assert!(s.singleton);
        assert_eq!(s.members, vec![fin(&[1.0])]);

        let set = projection_set(&GeoTailSeq::new(vec![], 3.0).unwrap(), 1.0).unwrap();
        let s = sample_members(&set, 10, 1);
        assert_eq!(s.members.len(), 10);
        assert!(s.members.iter().all(|y| set.contains(y, MEMBER_TOL)));
    }

    #[test]
    fn monotone_inclusion_examples() {
        let x = fin(&[2.0, 1.0]);
        assert!(monotone_inclusion_check(&fin(&[1.5, 0.5]), &x, 1.0, 50, 3).unwrap());
        assert!(monotone_inclusion_check(&x, &x, 1.0, 50, 3).unwrap());
        assert!(monotone_inclusion_check(&x, &fin(&[1.5, 0.5]), 1.0, 50, 3).is_err());
    }

    #[test]
    fn ball_sampler_stays_in_ball() {
        let pts = sample_ball(2.0, 3, 50, 11);
        assert_eq!(pts.len(), 50);
        assert!(pts.iter().all(|p| p.l1_norm() <= 2.0 + 1e-12));
    }

    #[test]
    fn oracle_examples() {
        let res = brute_force_oracle(&FiniteSeq::from_dense(&[2.0, 1.0]).unwrap(), 1.0, 2, 1e-3).unwrap();
        assert!((res.min_distance - 2.0).abs() < 1e-3);
        assert!(res.argmin.contains(&vec![1000, 0]) && res.argmin.contains(&vec![500, 500]));

        let res = brute_force_oracle(&FiniteSeq::from_dense(&[0.3, 0.1]).unwrap(), 1.0, 2, 1e-3).unwrap();
        assert!(res.min_distance < 1e-12);
        assert!(res.argmin.contains(&vec![300, 100]));

        let res = brute_force_oracle(&FiniteSeq::from_dense(&[-2.0, 1.0]).unwrap(), 1.0, 2, 1e-3).unwrap();
        assert!((res.min_distance - 2.0).abs() < 1e-3);
        assert!(res.argmin.iter().any(|k| k[0] < 0 && k[1] > 0));

        assert!(brute_force_oracle(&FiniteSeq::zero(), 1.0, 5, 1e-3).is_err());
    }

    #[test]
    fn descriptor_grid_matches_oracle_small() {
        let x = FiniteSeq::from_dense(&[0.7, 0.55]).unwrap();
        let res = brute_force_oracle(&x, 1.0, 2, 1e-2).unwrap();
        let set = projection_set(&GeoTailSeq::from(&x), 1.0).unwrap();
        let slack = res.lattice_min - (x.l1_norm() - 1.0) + 0.5 * res.resolution;
        assert_eq!(descriptor_lattice_members(&set, 2, 1e-2, slack), res.argmin);
    }
}
