//! Fixed-length partitions and the strip/order bookkeeping built on them.
//!
//! A [`Partition`] always stores exactly `n` parts, trailing zeros included,
//! so pair products over `1 <= j < k <= n` see the zero rows too.
//!
//! Collections indexed by partitions use the canonical order implemented by
//! [`Ord`]: ascending weight, then lexicographically *descending* parts.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Non-increasing vector of non-negative integers with fixed length `n`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(parts.iter().map(|&x| x as i64).collect()));
        }
        Ok(Partition { parts })
    }

    pub fn zero(n: usize) -> Self {
        Partition { parts: vec![0; n] }
    }

    /// `1^r` padded with zeros to length `n`.
    pub fn column(n: usize, r: usize) -> Self {
        assert!(r <= n, "column height {r} exceeds n = {n}");
        Partition {
            parts: (0..n).map(|j| u32::from(j < r)).collect(),
        }
    }

    /// `m^r` padded with zeros to length `n`.
    pub fn rectangle(n: usize, r: usize, m: u32) -> Self {
        assert!(r <= n);
        Partition {
            parts: (0..n).map(|j| if j < r { m } else { 0 }).collect(),
        }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of parts `n` (zeros included).
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|&x| x == 0)
    }

    /// `|λ|`.
    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// `d_λ = λ_1 - λ_n`.
    pub fn span(&self) -> u32 {
        self.parts[0] - self.parts[self.parts.len() - 1]
    }

    pub fn last(&self) -> u32 {
        self.parts[self.parts.len() - 1]
    }

    /// `λ_j - λ_k` with 0-based indices.
    pub fn diff(&self, j: usize, k: usize) -> i64 {
        self.parts[j] as i64 - self.parts[k] as i64
    }

    /// `λ ⊂ μ` (componentwise).
    pub fn is_contained_in(&self, other: &Partition) -> bool {
        self.len() == other.len() && self.parts.iter().zip(&other.parts).all(|(a, b)| a <= b)
    }

    /// Componentwise sum, the exponent rule `e_κ e_κ' = e_{κ+κ'}`.
    pub fn add(&self, other: &Partition) -> Partition {
        assert_eq!(self.len(), other.len());
        Partition {
            parts: self.parts.iter().zip(&other.parts).map(|(a, b)| a + b).collect(),
        }
    }

    /// `λ + 1^r`.
    pub fn add_column(&self, r: usize) -> Partition {
        let mut parts = self.parts.clone();
        for x in parts.iter_mut().take(r) {
            *x += 1;
        }
        Partition { parts }
    }

    /// `λ - 1^r`, or `None` if a part would go negative or the result is not a partition.
    pub fn remove_column(&self, r: usize) -> Option<Partition> {
        let mut parts = self.parts.clone();
        for x in parts.iter_mut().take(r) {
            *x = x.checked_sub(1)?;
        }
        Partition::new(parts).ok()
    }

    /// Monomial exponents `a_j = λ_j - λ_{j+1}` (with `λ_{n+1} = 0`) of `e_λ`.
    pub fn e_exponents(&self) -> Vec<u32> {
        let n = self.len();
        (0..n)
            .map(|j| self.parts[j] - if j + 1 < n { self.parts[j + 1] } else { 0 })
            .collect()
    }

    /// Inverse of [`Partition::e_exponents`].
    pub fn from_e_exponents(exps: &[u32]) -> Partition {
        let n = exps.len();
        let mut parts = vec![0; n];
        let mut acc = 0;
        for j in (0..n).rev() {
            acc += exps[j];
            parts[j] = acc;
        }
        Partition { parts }
    }

    /// Conjugate partition as a plain vector (length `λ_1`).
    pub fn conjugate(&self) -> Vec<u32> {
        let top = self.parts[0] as usize;
        (0..top)
            .map(|i| self.parts.iter().filter(|&&x| x as usize > i).count() as u32)
            .collect()
    }
}

impl TryFrom<Vec<i64>> for Partition {
    type Error = Error;

    fn try_from(raw: Vec<i64>) -> Result<Self> {
        if raw.iter().any(|&x| x < 0 || x > u32::MAX as i64) {
            return Err(Error::InvalidPartition(raw));
        }
        Partition::new(raw.into_iter().map(|x| x as u32).collect())
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.parts
    }
}

impl std::str::FromStr for Partition {
    type Err = Error;

    /// Parses `"2,1,0"`.
    fn from_str(s: &str) -> Result<Self> {
        let raw: std::result::Result<Vec<i64>, _> =
            s.split(',').map(|t| t.trim().parse::<i64>()).collect();
        match raw {
            Ok(v) => Partition::try_from(v),
            Err(_) => Err(Error::InvalidPartition(Vec::new())),
        }
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| other.parts.cmp(&self.parts))
            .then_with(|| self.len().cmp(&other.len()))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// 0/1 increment `θ = ν - λ` of a vertical strip.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Strip {
    theta: Vec<u8>,
}

impl Strip {
    pub fn new(theta: Vec<u8>) -> Result<Self> {
        if theta.iter().any(|&t| t > 1) {
            return Err(Error::InvalidParams(format!("strip entries must be 0/1, got {theta:?}")));
        }
        Ok(Strip { theta })
    }

    /// Strip between `λ` and `ν`, failing unless `λ ⊂ ν ⊂ λ + 1^n`.
    pub fn between(lam: &Partition, nu: &Partition) -> Result<Self> {
        let not_strip = || Error::NotAStrip {
            lam: lam.parts().to_vec(),
            nu: nu.parts().to_vec(),
        };
        if lam.len() != nu.len() {
            return Err(not_strip());
        }
        let theta = lam
            .parts()
            .iter()
            .zip(nu.parts())
            .map(|(&a, &b)| match b.checked_sub(a) {
                Some(0) => Ok(0u8),
                Some(1) => Ok(1u8),
                _ => Err(not_strip()),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Strip { theta })
    }

    pub fn theta(&self) -> &[u8] {
        &self.theta
    }

    /// Strip size `r`.
    pub fn size(&self) -> usize {
        self.theta.iter().map(|&t| t as usize).sum()
    }

    /// `λ + θ`, failing with `NotAStrip` if the result is not a partition.
    pub fn apply(&self, lam: &Partition) -> Result<Partition> {
        let raw: Vec<u32> = lam
            .parts()
            .iter()
            .zip(&self.theta)
            .map(|(&a, &t)| a + t as u32)
            .collect();
        Partition::new(raw.clone()).map_err(|_| Error::NotAStrip {
            lam: lam.parts().to_vec(),
            nu: raw,
        })
    }
}

/// All `λ ∈ Λ₀^(n,m)` (`λ_n = 0`, `d_λ ≤ m`) in canonical order.
pub fn enumerate_level(n: usize, m: u32) -> Vec<Partition> {
    assert!(n >= 1);
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(j: usize, bound: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        let n = cur.len();
        if j + 1 == n {
            cur[j] = 0;
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for v in 0..=bound {
            cur[j] = v;
            rec(j + 1, v, cur, out);
        }
    }
    rec(0, m, &mut cur, &mut out);
    out.sort();
    out
}

/// All partitions with `n` parts and total weight `w`, canonical order.
pub fn partitions_of_weight(n: usize, w: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(j: usize, bound: u32, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        let n = cur.len();
        if j == n {
            if left == 0 {
                out.push(Partition { parts: cur.clone() });
            }
            return;
        }
        let slots = (n - j) as u32;
        if bound.saturating_mul(slots) < left {
            return;
        }
        for v in (0..=bound.min(left)).rev() {
            cur[j] = v;
            rec(j + 1, v, left - v, cur, out);
        }
        cur[j] = 0;
    }
    rec(0, w, w, &mut cur, &mut out);
    out.sort();
    out
}

/// `r_μ = min{j : μ_j - μ_{j+1} > 0}` with `μ_{n+1} = 0`; `n` for `μ = 0`.
pub fn r_index(mu: &Partition) -> usize {
    let n = mu.len();
    let p = mu.parts();
    (0..n)
        .find(|&j| p[j] > if j + 1 < n { p[j + 1] } else { 0 })
        .map(|j| j + 1)
        .unwrap_or(n)
}

/// Every partition `ν` with `λ ⊂ ν ⊂ λ + 1^n` and `|ν| = |λ| + r`, canonical order.
pub fn vertical_strips(lam: &Partition, r: usize) -> Vec<Partition> {
    let n = lam.len();
    if r > n {
        return Vec::new();
    }
    let p = lam.parts();
    let mut out = Vec::new();
    let mut theta = vec![0u32; n];
    // A box may be added to row j only if row j-1 stays weakly longer.
    fn rec(
        j: usize,
        left: usize,
        p: &[u32],
        theta: &mut Vec<u32>,
        out: &mut Vec<Partition>,
    ) {
        let n = p.len();
        if j == n {
            if left == 0 {
                out.push(Partition {
                    parts: p.iter().zip(theta.iter()).map(|(a, t)| a + t).collect(),
                });
            }
            return;
        }
        if n - j < left {
            return;
        }
        if left > 0 && (j == 0 || p[j - 1] + theta[j - 1] > p[j]) {
            theta[j] = 1;
            rec(j + 1, left - 1, p, theta, out);
        }
        theta[j] = 0;
        rec(j + 1, left, p, theta, out);
    }
    rec(0, r, p, &mut theta, &mut out);
    out.sort();
    out
}

/// Every partition `λ` with `λ ⊂ ν ⊂ λ + 1^n` and `|λ| = |ν| - r` (inverse of [`vertical_strips`]).
pub fn strips_below(nu: &Partition, r: usize) -> Vec<Partition> {
    let n = nu.len();
    if r > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut mask = vec![0u32; n];
    fn rec(j: usize, left: usize, nu: &[u32], mask: &mut Vec<u32>, out: &mut Vec<Partition>) {
        let n = nu.len();
        if j == n {
            if left == 0 {
                let raw: Option<Vec<u32>> =
                    nu.iter().zip(mask.iter()).map(|(a, t)| a.checked_sub(*t)).collect();
                if let Some(raw) = raw {
                    if let Ok(p) = Partition::new(raw) {
                        out.push(p);
                    }
                }
            }
            return;
        }
        if n - j < left {
            return;
        }
        if left > 0 {
            mask[j] = 1;
            rec(j + 1, left - 1, nu, mask, out);
        }
        mask[j] = 0;
        rec(j + 1, left, nu, mask, out);
    }
    rec(0, r, nu.parts(), &mut mask, &mut out);
    out.sort();
    out
}

/// Dominance order `λ ⪯ μ`: equal weight and all partial sums of `λ` bounded by those of `μ`.
pub fn dominance_leq(lam: &Partition, mu: &Partition) -> bool {
    if lam.len() != mu.len() || lam.weight() != mu.weight() {
        return false;
    }
    let (mut a, mut b) = (0u32, 0u32);
    for (x, y) in lam.parts().iter().zip(mu.parts()) {
        a += x;
        b += y;
        if a > b {
            return false;
        }
    }
    true
}

/// `ν ↦ (ν_1 - ν_n, …, ν_{n-1} - ν_n, 0)`.
pub fn underline(nu: &Partition) -> Partition {
    let last = nu.last();
    Partition {
        parts: nu.parts().iter().map(|x| x - last).collect(),
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `|Λ₀^(n,m)| = C(n-1+m, m)`.
pub fn level_count(n: usize, m: u32) -> usize {
    binomial((n - 1) as u64 + m as u64, m as u64) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn enumerate_level_examples() {
        assert_eq!(enumerate_level(2, 1), vec![p(&[0, 0]), p(&[1, 0])]);
        assert_eq!(enumerate_level(3, 0), vec![p(&[0, 0, 0])]);
        assert_eq!(enumerate_level(2, 2), vec![p(&[0, 0]), p(&[1, 0]), p(&[2, 0])]);
    }

    #[test]
    fn enumerate_level_counts_match_binomial() {
        for n in 1..=4 {
            for m in 0..=4 {
                let brute = partitions_up_to(n, m * n as u32)
                    .into_iter()
                    .filter(|l| l.last() == 0 && l.span() <= m)
                    .count();
                assert_eq!(enumerate_level(n, m).len(), level_count(n, m));
                assert_eq!(brute, level_count(n, m), "n={n} m={m}");
            }
        }
    }

    fn partitions_up_to(n: usize, w: u32) -> Vec<Partition> {
        (0..=w).flat_map(|k| partitions_of_weight(n, k)).collect()
    }

    #[test]
    fn r_index_examples() {
        assert_eq!(r_index(&p(&[2, 1, 0])), 1);
        assert_eq!(r_index(&p(&[1, 1, 0])), 2);
        assert_eq!(r_index(&p(&[3, 3, 3])), 3);
        assert_eq!(r_index(&p(&[0, 0, 0])), 3);
    }

    #[test]
    fn vertical_strip_examples() {
        assert_eq!(vertical_strips(&p(&[1, 0]), 1), vec![p(&[2, 0]), p(&[1, 1])]);
        assert_eq!(vertical_strips(&p(&[0, 0]), 2), vec![p(&[1, 1])]);
        assert_eq!(vertical_strips(&p(&[2, 1, 0]), 3), vec![p(&[3, 2, 1])]);
    }

    #[test]
    fn full_strip_is_unique() {
        for w in 0..6 {
            for lam in partitions_of_weight(3, w) {
                assert_eq!(vertical_strips(&lam, 3), vec![lam.add_column(3)]);
            }
        }
    }

    #[test]
    fn strips_below_inverts_vertical_strips() {
        for w in 0..6 {
            for lam in partitions_of_weight(3, w) {
                for r in 1..=3 {
                    for nu in vertical_strips(&lam, r) {
                        assert!(strips_below(&nu, r).contains(&lam));
                    }
                }
            }
        }
    }

    #[test]
    fn dominance_examples() {
        assert!(dominance_leq(&p(&[1, 1, 0]), &p(&[2, 0, 0])));
        assert!(!dominance_leq(&p(&[2, 0, 0]), &p(&[1, 1, 0])));
        assert!(!dominance_leq(&p(&[1, 0]), &p(&[1, 1])));
    }

    #[test]
    fn dominance_is_a_partial_order() {
        let all: Vec<_> = (0..=6).flat_map(|w| partitions_of_weight(3, w)).collect();
        for a in &all {
            assert!(dominance_leq(a, a));
            for b in &all {
                if dominance_leq(a, b) && dominance_leq(b, a) {
                    assert_eq!(a, b);
                }
                for c in &all {
                    if dominance_leq(a, b) && dominance_leq(b, c) {
                        assert!(dominance_leq(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn underline_examples() {
        assert_eq!(underline(&p(&[3, 2, 1])), p(&[2, 1, 0]));
        assert_eq!(underline(&p(&[1, 1])), p(&[0, 0]));
        assert_eq!(underline(&p(&[2, 0])), p(&[2, 0]));
    }

    #[test]
    fn strip_rejects_non_partition_result() {
        let s = Strip::new(vec![0, 1]).unwrap();
        assert!(matches!(s.apply(&p(&[0, 0])), Err(Error::NotAStrip { .. })));
        assert!(matches!(
            Strip::between(&p(&[0, 0]), &p(&[2, 0])),
            Err(Error::NotAStrip { .. })
        ));
    }

    #[test]
    fn canonical_order_and_json() {
        let mut v = vec![p(&[1, 1, 1]), p(&[2, 1, 0]), p(&[1, 0, 0])];
        v.sort();
        assert_eq!(v, vec![p(&[1, 0, 0]), p(&[2, 1, 0]), p(&[1, 1, 1])]);
        assert_eq!(serde_json_like(&p(&[2, 1, 0])), "[2,1,0]");
        assert!("1,2".parse::<Partition>().is_err());
        assert_eq!("2, 1,0".parse::<Partition>().unwrap(), p(&[2, 1, 0]));
    }

    fn serde_json_like(p: &Partition) -> String {
        let v: Vec<u32> = p.clone().into();
        format!("{v:?}").replace(' ', "")
    }

    #[test]
    fn e_exponent_round_trip() {
        let lam = p(&[4, 2, 2, 1]);
        assert_eq!(lam.e_exponents(), vec![2, 0, 1, 1]);
        assert_eq!(Partition::from_e_exponents(&lam.e_exponents()), lam);
        assert_eq!(lam.conjugate(), vec![4, 3, 1, 1]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_partition() -> impl Strategy<Value = Partition> {
            proptest::collection::vec(0u32..6, 1..5).prop_map(|mut v| {
                v.sort_unstable_by(|a, b| b.cmp(a));
                Partition::new(v).unwrap()
            })
        }

        proptest! {
            #[test]
            fn underline_is_idempotent(nu in arb_partition()) {
                let once = underline(&nu);
                prop_assert_eq!(underline(&once), once.clone());
                prop_assert_eq!(once.span(), nu.span());
            }

            #[test]
            fn strips_have_requested_size(lam in arb_partition(), r in 1usize..5) {
                prop_assume!(r <= lam.len());
                for nu in vertical_strips(&lam, r) {
                    let s = Strip::between(&lam, &nu).unwrap();
                    prop_assert_eq!(s.size(), r);
                    prop_assert_eq!(s.apply(&lam).unwrap(), nu);
                }
            }
        }
    }
}
