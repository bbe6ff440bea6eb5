//! Set-valued metric projection from `c` onto `c₀`.
//!
//! The distance from `x` to `c₀` is `|L(x)|` and the projection set is
//! `{y ∈ c₀ : ‖x - y‖ = |L(x)|}`. Distances are compared with error-free
//! transformations so that membership at zero tolerance is decided exactly.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sequence::{split_limit, two_sum, EvConstSeq};

/// Perturbation budget as a fraction of `|L(x)|`.
pub const PERTURBATION_FRACTION: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct C0Projection {
    pub distance: f64,
    /// `h(x) = x - β_{L(x)}`.
    pub canonical: EvConstSeq,
}

pub fn project_c0(x: &EvConstSeq) -> C0Projection {
    let (l, h) = split_limit(x);
    C0Projection { distance: l.abs(), canonical: h }
}

/// Compares the exact value `|a - b|` with `c >= 0`.
pub fn cmp_abs_diff(a: f64, b: f64, c: f64) -> Ordering {
    let (s, e) = two_sum(a, -b);
    match s.abs().partial_cmp(&c).expect("finite operands") {
        // |s + e| against |s|: larger exactly when e points away from zero
        Ordering::Equal if e == 0.0 => Ordering::Equal,
        Ordering::Equal if s == 0.0 || e * s.signum() > 0.0 => Ordering::Greater,
        Ordering::Equal => Ordering::Less,
        other => other,
    }
}

/// `y ∈ c₀` and `‖x - y‖ = |L(x)|` (to within `tol`; `tol = 0` is exact).
pub fn c0_membership(x: &EvConstSeq, y: &EvConstSeq, tol: f64) -> bool {
    if !y.is_null() {
        return false;
    }
    let l = x.tail().abs();
    let len = x.head().len().max(y.head().len());
    // The tail contributes exactly |L|, so the norm equals |L| iff no head
    // entry exceeds it.
    let exact = (1..=len).all(|n| cmp_abs_diff(x.get(n), y.get(n), l) != Ordering::Greater);
    exact || (x.sub(y).sup_norm() - l).abs() <= tol
}

/// `h(x)` followed by `k - 1` members obtained by nudging one to three head
/// coordinates of `h(x)` towards `x`, each by at most `|L(x)|/2`.
pub fn sample_projection_members(x: &EvConstSeq, k: usize, seed: u64) -> Result<Vec<EvConstSeq>> {
    let C0Projection { distance, canonical } = project_c0(x);
    if distance == 0.0 {
        return Err(Error::Singleton("L(x) = 0, so P(x) = {x}".into()));
    }
    let l = x.tail();
    let span = x.head().len() + 3;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![canonical.clone()];
    let mut attempts = 0;
    while out.len() < k && attempts < 100 * k.max(1) {
        attempts += 1;
        let mut head: Vec<f64> = (1..=span).map(|n| canonical.get(n)).collect();
        for _ in 0..rng.gen_range(1..=3usize) {
            let n = rng.gen_range(0..span);
            // (0, δ|L|], pointed along sign(L) so that |xₙ - yₙ| shrinks
            let amount = PERTURBATION_FRACTION * distance * (1.0 - rng.gen_range(0.0..1.0f64));
            head[n] += l.signum() * amount;
        }
        let y = EvConstSeq::new(head, 0.0)?;
        if c0_membership(x, &y, 0.0) && !out.contains(&y) {
            out.push(y);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(head: &[f64], tail: f64) -> EvConstSeq {
        EvConstSeq::new(head.to_vec(), tail).unwrap()
    }

    #[test]
    fn projection_examples() {
        let p = project_c0(&EvConstSeq::constant(3.0));
        assert_eq!((p.distance, p.canonical.is_zero()), (3.0, true));
        let x = ev(&[4.0, -1.0], 0.0);
        assert_eq!(project_c0(&x), C0Projection { distance: 0.0, canonical: x.clone() });
        let p = project_c0(&ev(&[3.0, 2.0], 2.0));
        assert_eq!(p, C0Projection { distance: 2.0, canonical: ev(&[1.0], 0.0) });
    }

    #[test]
    fn membership_examples() {
        let b2 = EvConstSeq::constant(2.0);
        assert!(c0_membership(&b2, &EvConstSeq::zero(), 0.0));
        assert!(c0_membership(&b2, &ev(&[1.0], 0.0), 0.0));
        assert!(!c0_membership(&b2, &ev(&[5.0], 0.0), 1e-9));
        assert!(!c0_membership(&b2, &b2, 1e-9));
    }

    #[test]
    fn exact_abs_diff_comparison() {
        assert_eq!(cmp_abs_diff(1.0, 0.0, 1.0), Ordering::Equal);
        // the doubles nearest 0.3 and 0.1 differ by exactly 0.19999999999999998
        assert_eq!(cmp_abs_diff(0.3, 0.1, 0.2), Ordering::Less);
        assert_eq!(cmp_abs_diff(0.3, 0.1, 0.19999999999999998), Ordering::Equal);
        assert_eq!(cmp_abs_diff(0.3, 0.1, 0.19999999999999996), Ordering::Greater);
        assert_eq!(cmp_abs_diff(1e16, -1.0, 1e16), Ordering::Greater);
    }

    #[test]
    fn sampling_examples() {
        let members = sample_projection_members(&EvConstSeq::constant(2.0), 3, 1).unwrap();
        assert_eq!(members.len(), 3);
        assert!(members[0].is_zero());
        assert!(members.iter().all(|y| c0_membership(&EvConstSeq::constant(2.0), y, 0.0)));

        let x = ev(&[3.0, 2.0], 2.0);
        let members = sample_projection_members(&x, 2, 1).unwrap();
        assert_eq!(members[0], ev(&[1.0], 0.0));
        assert_eq!(members.len(), 2);

        let x = ev(&[0.1, -0.7], -0.3);
        let members = sample_projection_members(&x, 20, 5).unwrap();
        assert_eq!(members.len(), 20);
        assert!(members.iter().all(|y| c0_membership(&x, y, 0.0)));

        assert!(matches!(sample_projection_members(&ev(&[1.0], 0.0), 3, 1), Err(Error::Singleton(_))));
    }
}
