//! Exact finite models of the sequence-space elements used by the projection
//! and coderivative routines.
//!
//! Every infinite sequence is described by a finite head plus one of three tail
//! disciplines: zero ([`FiniteSeq`]), constant ([`EvConstSeq`], elements of `c`
//! and `l∞`) or geometric `d / 2ⁿ` ([`GeoTailSeq`], summable elements of `l₁`).
//! Norms and pairings close analytically on these shapes, so no routine in
//! this module truncates a series.
//!
//! Indices are 1-based throughout, matching the usual `(t₁, t₂, …)` notation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `2⁻ⁿ`, flushing to zero well past the subnormal range.
pub(crate) fn pow2_neg(n: usize) -> f64 {
    if n > 1100 {
        0.0
    } else {
        2f64.powi(-(n as i32))
    }
}

fn check_finite(values: &[f64], what: &str) -> Result<()> {
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(format!("{what} contains non-finite value {v}")));
    }
    Ok(())
}

/// Error-free transformation: `a + b = s + e` exactly.
pub(crate) fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// `x - l` rounded so that the exact residual `x - result` has the sign of `l`
/// and magnitude at most `|l|`.
pub(crate) fn sub_toward(x: f64, l: f64) -> f64 {
    let (s, e) = two_sum(x, -l);
    // exact x - s = l + e
    if l > 0.0 && e > 0.0 {
        s.next_up()
    } else if l < 0.0 && e < 0.0 {
        s.next_down()
    } else {
        s
    }
}

/// A finitely supported real sequence (an element of `l₁` with finite support).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "SeqWire", into = "SeqWire")]
pub struct FiniteSeq {
    entries: BTreeMap<usize, f64>,
}

impl FiniteSeq {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds a sequence from `(index, value)` pairs; zero values are dropped.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (n, v) in pairs {
            if n == 0 {
                return Err(Error::InvalidInput("sequence indices start at 1".into()));
            }
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!("non-finite entry {v} at index {n}")));
            }
            if v != 0.0 {
                entries.insert(n, v);
            } else {
                entries.remove(&n);
            }
        }
        Ok(Self { entries })
    }

    /// Builds `(values[0], values[1], …, 0, 0, …)`.
    pub fn from_dense(values: &[f64]) -> Result<Self> {
        Self::from_pairs(values.iter().enumerate().map(|(i, &v)| (i + 1, v)))
    }

    /// The axis point `s(m, b)`.
    pub fn axis(m: usize, b: f64) -> Result<Self> {
        Self::from_pairs([(m, b)])
    }

    pub fn get(&self, n: usize) -> f64 {
        self.entries.get(&n).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries.iter().map(|(&n, &v)| (n, v))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    /// Largest index carrying a nonzero value, 0 for the zero sequence.
    pub fn max_index(&self) -> usize {
        self.entries.keys().next_back().copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn l1_norm(&self) -> f64 {
        self.entries.values().map(|v| v.abs()).sum()
    }

    pub fn sum(&self) -> f64 {
        self.entries.values().sum()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        (1..=self.max_index()).map(|n| self.get(n)).collect()
    }

    pub fn scale(&self, a: f64) -> Self {
        Self::from_pairs(self.iter().map(|(n, v)| (n, a * v))).expect("finite scaling")
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.entries.clone();
        for (n, v) in other.iter() {
            *out.entry(n).or_insert(0.0) += v;
        }
        out.retain(|_, v| *v != 0.0);
        Self { entries: out }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// Every entry is `>= 0` (membership in the cone `K₁`).
    pub fn is_nonnegative(&self) -> bool {
        self.entries.values().all(|&v| v >= 0.0)
    }
}

/// A sequence whose entries are eventually constant: `head` for indices
/// `1..=head.len()`, then `tail` forever. Models elements of `c` (with limit
/// `tail`) and the `l∞` functionals `β_d` used in the `l₁` analysis.
///
/// Stored canonically: the last head entry always differs from the tail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeqWire", into = "SeqWire")]
pub struct EvConstSeq {
    head: Vec<f64>,
    tail: f64,
}

impl EvConstSeq {
    pub fn new(head: Vec<f64>, tail: f64) -> Result<Self> {
        check_finite(&head, "head")?;
        check_finite(&[tail], "tail")?;
        Ok(Self::canonical(head, tail))
    }

    fn canonical(mut head: Vec<f64>, tail: f64) -> Self {
        while head.last() == Some(&tail) {
            head.pop();
        }
        Self { head, tail }
    }

    /// The constant sequence `β_d = (d, d, …)`.
    pub fn constant(d: f64) -> Self {
        Self::canonical(Vec::new(), d)
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    /// The axis point `s(m, b)` viewed as an element of `c₀ ⊂ c ⊂ l∞`.
    pub fn axis(m: usize, b: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("sequence indices start at 1".into()));
        }
        let mut head = vec![0.0; m];
        head[m - 1] = b;
        Self::new(head, 0.0)
    }

    pub fn head(&self) -> &[f64] {
        &self.head
    }

    pub fn tail(&self) -> f64 {
        self.tail
    }

    pub fn get(&self, n: usize) -> f64 {
        debug_assert!(n >= 1);
        self.head.get(n - 1).copied().unwrap_or(self.tail)
    }

    pub fn sup_norm(&self) -> f64 {
        self.head.iter().fold(self.tail.abs(), |m, v| m.max(v.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.head.is_empty() && self.tail == 0.0
    }

    /// Tail is zero, i.e. the element lies in `c₀`.
    pub fn is_null(&self) -> bool {
        self.tail == 0.0
    }

    fn zip_with(&self, other: &Self, op: impl Fn(f64, f64) -> f64) -> Self {
        let len = self.head.len().max(other.head.len());
        let head = (1..=len).map(|n| op(self.get(n), other.get(n))).collect();
        Self::canonical(head, op(self.tail, other.tail))
    }

    pub fn map(&self, op: impl Fn(f64) -> f64) -> Self {
        Self::canonical(self.head.iter().map(|&v| op(v)).collect(), op(self.tail))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, a: f64) -> Self {
        self.map(|v| a * v)
    }

    /// Standard `l∞ × l₁` pairing against a finitely supported sequence.
    pub fn pair_finite(&self, x: &FiniteSeq) -> f64 {
        x.iter().map(|(n, v)| self.get(n) * v).sum()
    }

    /// Standard `l∞ × l₁` pairing; the geometric tail is summed in closed form.
    pub fn pair_geo(&self, x: &GeoTailSeq) -> f64 {
        let m = self.head.len().max(x.head.len());
        let head: f64 = (1..=m).map(|n| self.get(n) * x.get(n)).sum();
        head + self.tail * x.geo * pow2_neg(m)
    }
}

/// An `l₁` sequence with a geometric tail: `head` for indices `1..=N`, then
/// `geo / 2ⁿ` for `n > N`. This is the shape of `k*`-images and of the strictly
/// positive simplex members used as base points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeqWire", into = "SeqWire")]
pub struct GeoTailSeq {
    head: Vec<f64>,
    geo: f64,
}

impl GeoTailSeq {
    pub fn new(head: Vec<f64>, geo: f64) -> Result<Self> {
        check_finite(&head, "head")?;
        check_finite(&[geo], "geo")?;
        Ok(Self::canonical(head, geo))
    }

    fn canonical(mut head: Vec<f64>, geo: f64) -> Self {
        while let Some(&last) = head.last() {
            if last == geo * pow2_neg(head.len()) {
                head.pop();
            } else {
                break;
            }
        }
        Self { head, geo }
    }

    pub fn zero() -> Self {
        Self::canonical(Vec::new(), 0.0)
    }

    pub fn head(&self) -> &[f64] {
        &self.head
    }

    pub fn geo(&self) -> f64 {
        self.geo
    }

    pub fn get(&self, n: usize) -> f64 {
        debug_assert!(n >= 1);
        match self.head.get(n - 1) {
            Some(&v) => v,
            None => self.geo * pow2_neg(n),
        }
    }

    pub fn l1_norm(&self) -> f64 {
        let head: f64 = self.head.iter().map(|v| v.abs()).sum();
        head + self.geo.abs() * pow2_neg(self.head.len())
    }

    /// `Σ tₙ` (equals the norm on the positive cone).
    pub fn sum(&self) -> f64 {
        let head: f64 = self.head.iter().sum();
        head + self.geo * pow2_neg(self.head.len())
    }

    pub fn is_zero(&self) -> bool {
        self.head.is_empty() && self.geo == 0.0
    }

    /// All entries `>= 0`.
    pub fn is_nonnegative(&self) -> bool {
        self.geo >= 0.0 && self.head.iter().all(|&v| v >= 0.0)
    }

    /// All entries `> 0` (membership in `K₁⁺`).
    pub fn is_strictly_positive(&self) -> bool {
        self.geo > 0.0 && self.head.iter().all(|&v| v > 0.0)
    }

    /// Indices in `1..=limit` where the entry is zero (finite witness of `∉ K₁⁺`).
    pub fn zero_index(&self) -> Option<usize> {
        if let Some(i) = self.head.iter().position(|&v| v == 0.0) {
            return Some(i + 1);
        }
        if self.geo == 0.0 {
            return Some(self.head.len() + 1);
        }
        None
    }

    fn zip_with(&self, other: &Self, op: impl Fn(f64, f64) -> f64) -> Self {
        let len = self.head.len().max(other.head.len());
        let head = (1..=len).map(|n| op(self.get(n), other.get(n))).collect();
        Self::canonical(head, op(self.geo, other.geo))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, a: f64) -> Self {
        Self::canonical(self.head.iter().map(|&v| a * v).collect(), a * self.geo)
    }

    /// `Some` when the tail vanishes.
    pub fn to_finite(&self) -> Option<FiniteSeq> {
        (self.geo == 0.0).then(|| FiniteSeq::from_dense(&self.head).expect("finite head"))
    }
}

impl From<&FiniteSeq> for GeoTailSeq {
    fn from(x: &FiniteSeq) -> Self {
        GeoTailSeq::canonical(x.to_dense(), 0.0)
    }
}

impl From<FiniteSeq> for GeoTailSeq {
    fn from(x: FiniteSeq) -> Self {
        GeoTailSeq::from(&x)
    }
}

/// A functional on `c`: `⟨φ, x⟩ = q₀·lim xₙ + Σ qₙ xₙ`, with dual norm
/// `|q₀| + Σ |qₙ|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeqWire", into = "SeqWire")]
pub struct CStarFunctional {
    pub q0: f64,
    pub rest: FiniteSeq,
}

impl CStarFunctional {
    pub fn new(q0: f64, rest: FiniteSeq) -> Result<Self> {
        check_finite(&[q0], "q0")?;
        Ok(Self { q0, rest })
    }

    /// `(q₀, q₁, q₂, …)` from a dense slice of `q₁, q₂, …`.
    pub fn from_dense(q0: f64, rest: &[f64]) -> Result<Self> {
        Self::new(q0, FiniteSeq::from_dense(rest)?)
    }

    /// The axis point `s(0, q₀)`: a multiple of the limit functional.
    pub fn limit_only(q0: f64) -> Self {
        Self { q0, rest: FiniteSeq::zero() }
    }

    pub fn zero() -> Self {
        Self::limit_only(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.q0 == 0.0 && self.rest.is_zero()
    }

    /// True for functionals of the form `s(0, q₀)`.
    pub fn is_limit_only(&self) -> bool {
        self.rest.is_zero()
    }

    pub fn dual_norm(&self) -> f64 {
        self.q0.abs() + self.rest.l1_norm()
    }

    /// `Σ_{n>=0} qₙ`, the value on the constant sequence `β₁`.
    pub fn total(&self) -> f64 {
        self.q0 + self.rest.sum()
    }

    pub fn pair(&self, x: &EvConstSeq) -> f64 {
        self.q0 * x.tail() + self.rest.iter().map(|(n, q)| q * x.get(n)).sum::<f64>()
    }

    pub fn scale(&self, a: f64) -> Self {
        Self { q0: a * self.q0, rest: self.rest.scale(a) }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { q0: self.q0 + other.q0, rest: self.rest.add(&other.rest) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }
}

/// Any of the four modelled element kinds; the unit of JSON exchange.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeqWire", into = "SeqWire")]
pub enum Seq {
    Finite(FiniteSeq),
    EvConst(EvConstSeq),
    GeoTail(GeoTailSeq),
    CStar(CStarFunctional),
}

impl Seq {
    /// The norm appropriate to the element's space: `l₁` for finite and
    /// geometric-tail sequences, sup for eventually constant ones, and the
    /// `c*` dual norm for functionals.
    pub fn norm(&self) -> f64 {
        match self {
            Seq::Finite(x) => x.l1_norm(),
            Seq::EvConst(x) => x.sup_norm(),
            Seq::GeoTail(x) => x.l1_norm(),
            Seq::CStar(x) => x.dual_norm(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Seq::Finite(_) => "finite",
            Seq::EvConst(_) => "evconst",
            Seq::GeoTail(_) => "geotail",
            Seq::CStar(_) => "cstar",
        }
    }

    /// Best-effort view as an `l₁` element.
    pub fn as_l1(&self) -> Option<GeoTailSeq> {
        match self {
            Seq::Finite(x) => Some(GeoTailSeq::from(x)),
            Seq::GeoTail(x) => Some(x.clone()),
            _ => None,
        }
    }
}

impl From<FiniteSeq> for Seq {
    fn from(x: FiniteSeq) -> Self {
        Seq::Finite(x)
    }
}
impl From<EvConstSeq> for Seq {
    fn from(x: EvConstSeq) -> Self {
        Seq::EvConst(x)
    }
}
impl From<GeoTailSeq> for Seq {
    fn from(x: GeoTailSeq) -> Self {
        Seq::GeoTail(x)
    }
}
impl From<CStarFunctional> for Seq {
    fn from(x: CStarFunctional) -> Self {
        Seq::CStar(x)
    }
}

/// Dual pairing `⟨φ, x⟩` for the supported combinations:
/// `(evconst, finite)`, `(evconst, geotail)` and `(cstar, evconst)`.
pub fn pair(phi: &Seq, x: &Seq) -> Result<f64> {
    match (phi, x) {
        (Seq::EvConst(p), Seq::Finite(x)) => Ok(p.pair_finite(x)),
        (Seq::EvConst(p), Seq::GeoTail(x)) => Ok(p.pair_geo(x)),
        (Seq::CStar(p), Seq::EvConst(x)) => Ok(p.pair(x)),
        (p, x) => Err(Error::Unsupported(format!("pairing {} with {}", p.kind(), x.kind()))),
    }
}

/// Splits `x ∈ c` into its limit `L(x)` and `h(x) = x - β_{L(x)} ∈ c₀`.
///
/// Head entries of `h` are rounded so that `|xₙ - h(x)ₙ| <= |L(x)|` holds in
/// exact arithmetic, which keeps `‖x - h(x)‖ = |L(x)|` exact.
pub fn split_limit(x: &EvConstSeq) -> (f64, EvConstSeq) {
    let l = x.tail();
    let head = x.head().iter().map(|&v| sub_toward(v, l)).collect();
    (l, EvConstSeq::canonical(head, 0.0))
}

/// `(ψ⁺, ψ⁻)` with `ψ⁺ = max(ψ, 0)` and `ψ⁻ = min(ψ, 0)` entrywise.
pub fn positive_negative_parts(psi: &EvConstSeq) -> (EvConstSeq, EvConstSeq) {
    (psi.map(|v| v.max(0.0)), psi.map(|v| v.min(0.0)))
}

/// `ψ_m⁻`: the negative entries of `ψ` among indices `1..=m`, zero elsewhere.
pub fn truncated_negative_part(psi: &EvConstSeq, m: usize) -> Result<FiniteSeq> {
    let out = FiniteSeq::from_pairs((1..=m).map(|n| (n, psi.get(n).min(0.0))))?;
    if out.is_zero() {
        return Err(Error::EmptySelection(format!("no negative entry among indices 1..={m}")));
    }
    Ok(out)
}

/// Wire format shared by all element kinds.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SeqWire {
    Finite { head: Vec<f64> },
    Evconst { head: Vec<f64>, tail: f64 },
    Geotail { head: Vec<f64>, geo: f64 },
    Cstar { head: Vec<f64>, q0: f64 },
}

impl TryFrom<SeqWire> for Seq {
    type Error = Error;

    fn try_from(w: SeqWire) -> Result<Self> {
        Ok(match w {
            SeqWire::Finite { head } => Seq::Finite(FiniteSeq::from_dense(&head)?),
            SeqWire::Evconst { head, tail } => Seq::EvConst(EvConstSeq::new(head, tail)?),
            SeqWire::Geotail { head, geo } => Seq::GeoTail(GeoTailSeq::new(head, geo)?),
            SeqWire::Cstar { head, q0 } => Seq::CStar(CStarFunctional::from_dense(q0, &head)?),
        })
    }
}

impl From<Seq> for SeqWire {
    fn from(s: Seq) -> Self {
        match s {
            Seq::Finite(x) => SeqWire::Finite { head: x.to_dense() },
            Seq::EvConst(x) => SeqWire::Evconst { head: x.head, tail: x.tail },
            Seq::GeoTail(x) => SeqWire::Geotail { head: x.head, geo: x.geo },
            Seq::CStar(x) => SeqWire::Cstar { head: x.rest.to_dense(), q0: x.q0 },
        }
    }
}

macro_rules! wire_variant {
    ($ty:ident, $variant:ident) => {
        impl TryFrom<SeqWire> for $ty {
            type Error = Error;
            fn try_from(w: SeqWire) -> Result<Self> {
                match Seq::try_from(w)? {
                    Seq::$variant(x) => Ok(x),
                    other => Err(Error::InvalidInput(format!(
                        "expected kind {}, found {}",
                        stringify!($variant).to_lowercase(),
                        other.kind()
                    ))),
                }
            }
        }
        impl From<$ty> for SeqWire {
            fn from(x: $ty) -> Self {
                SeqWire::from(Seq::$variant(x))
            }
        }
    };
}

wire_variant!(FiniteSeq, Finite);
wire_variant!(EvConstSeq, EvConst);
wire_variant!(GeoTailSeq, GeoTail);
wire_variant!(CStarFunctional, CStar);

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(head: &[f64], tail: f64) -> EvConstSeq {
        EvConstSeq::new(head.to_vec(), tail).unwrap()
    }

    #[test]
    fn norms_by_kind() {
        assert_eq!(Seq::from(FiniteSeq::from_dense(&[1.0, -2.0, 3.0]).unwrap()).norm(), 6.0);
        assert_eq!(Seq::from(ev(&[5.0, -1.0], 2.0)).norm(), 5.0);
        assert_eq!(Seq::from(GeoTailSeq::new(vec![], 1.0).unwrap()).norm(), 1.0);
        let phi = CStarFunctional::from_dense(-1.5, &[1.0, 0.0, -2.0]).unwrap();
        assert_eq!(Seq::from(phi).norm(), 4.5);
    }

    #[test]
    fn pairings() {
        let beta3 = Seq::from(EvConstSeq::constant(3.0));
        let x = Seq::from(FiniteSeq::from_dense(&[1.0, 2.0]).unwrap());
        assert_eq!(pair(&beta3, &x).unwrap(), 9.0);

        let phi = Seq::from(CStarFunctional::from_dense(1.0, &[1.0]).unwrap());
        assert_eq!(pair(&phi, &Seq::from(EvConstSeq::constant(2.0))).unwrap(), 4.0);

        let geo = Seq::from(GeoTailSeq::new(vec![], 1.0).unwrap());
        assert_eq!(pair(&Seq::from(EvConstSeq::constant(1.0)), &geo).unwrap(), 1.0);

        assert!(matches!(pair(&x, &beta3), Err(Error::Unsupported(_))));
    }

    #[test]
    fn canonical_forms_absorb_tail() {
        let a = ev(&[1.0, 2.0, 2.0], 2.0);
        assert_eq!(a.head(), &[1.0]);
        assert_eq!(a, ev(&[1.0], 2.0));
        let g = GeoTailSeq::new(vec![0.5, 0.25, 0.125], 1.0).unwrap();
        assert!(g.head().is_empty());
        assert_eq!(FiniteSeq::from_dense(&[0.0, 3.0, 0.0]).unwrap().support_len(), 1);
    }

    #[test]
    fn split_limit_examples() {
        let (l, h) = split_limit(&ev(&[3.0, 2.0], 2.0));
        assert_eq!(l, 2.0);
        assert_eq!(h, ev(&[1.0], 0.0));

        let x0 = ev(&[4.0, -1.0], 0.0);
        assert_eq!(split_limit(&x0), (0.0, x0.clone()));

        let x = ev(&[0.25, -3.0, 1.0], -1.5);
        let shifted = x.add(&EvConstSeq::constant(7.0));
        assert_eq!(split_limit(&shifted).1, split_limit(&x).1);
    }

    #[test]
    fn split_limit_keeps_distance_exact() {
        // 0.1 - 0.3 is inexact; the residual must still not exceed |L|.
        let x = ev(&[0.1, 0.7, -0.2], 0.3);
        let (l, h) = split_limit(&x);
        for n in 1..=3 {
            let (s, e) = two_sum(x.get(n), -h.get(n));
            assert!(s < l || (s == l && e <= 0.0));
        }
    }

    #[test]
    fn positive_negative_parts_examples() {
        let (p, m) = positive_negative_parts(&ev(&[2.0, -3.0], 0.0));
        assert_eq!(p, ev(&[2.0, 0.0], 0.0));
        assert_eq!(m, ev(&[0.0, -3.0], 0.0));

        let (p, m) = positive_negative_parts(&EvConstSeq::constant(-1.0));
        assert!(p.is_zero());
        assert_eq!(m, EvConstSeq::constant(-1.0));

        let (_, m) = positive_negative_parts(&ev(&[1.0, 0.0, 4.0], 2.0));
        assert!(m.is_zero());
    }

    #[test]
    fn truncated_negative_part_examples() {
        let psi = ev(&[1.0, -2.0, -3.0], 0.0);
        assert_eq!(truncated_negative_part(&psi, 2).unwrap(), FiniteSeq::axis(2, -2.0).unwrap());
        assert_eq!(
            truncated_negative_part(&psi, 3).unwrap(),
            FiniteSeq::from_dense(&[0.0, -2.0, -3.0]).unwrap()
        );
        let err = truncated_negative_part(&ev(&[1.0, 2.0], 2.0), 5).unwrap_err();
        assert!(matches!(err, Error::EmptySelection(_)));
    }

    #[test]
    fn geometric_pairing_matches_truncation() {
        let phi = ev(&[0.5, -2.0, 1.0, 3.0], -0.75);
        let x = GeoTailSeq::new(vec![1.0, -1.0], 3.0).unwrap();
        for n in [10usize, 20, 40] {
            let truncated: f64 = (1..=n).map(|k| phi.get(k) * x.get(k)).sum();
            // remainder Σ_{k>n} tail·geo/2^k
            let remainder = phi.tail() * x.geo() * pow2_neg(n);
            assert!((phi.pair_geo(&x) - (truncated + remainder)).abs() < 1e-12);
        }
    }

    #[test]
    fn json_wire_format() {
        let s: Seq = serde_json::from_str(r#"{"kind":"evconst","head":[3,2],"tail":2}"#).unwrap();
        assert_eq!(s, Seq::EvConst(ev(&[3.0], 2.0)));
        let text = serde_json::to_string(&Seq::from(GeoTailSeq::new(vec![1.0], 0.5).unwrap())).unwrap();
        assert_eq!(text, r#"{"kind":"geotail","head":[1.0],"geo":0.5}"#);
        let c: CStarFunctional = serde_json::from_str(r#"{"kind":"cstar","head":[1],"q0":1}"#).unwrap();
        assert_eq!(c.dual_norm(), 2.0);
        assert!(serde_json::from_str::<FiniteSeq>(r#"{"kind":"evconst","head":[],"tail":1}"#).is_err());
        assert!(serde_json::from_str::<Seq>(r#"{"kind":"finite","head":[1],"extra":2}"#).is_err());
    }
}
