//! Closed-form coefficients of the discrete operators and their eigenpolynomials:
//! hopping weights `B_{ν/λ}`, Pieri weights `ψ'_{ν/λ}`, normalizations `c_μ`
//! and orthogonality weights `Δ_λ`.
//!
//! For real `z`, `α` and `-1 < p < 1` the bracket is real, so everything here is
//! evaluated in the real field.

use std::collections::HashMap;
use std::sync::RwLock;

use crate::error::{Error, Result};
use crate::kernel::ModelParams;
use crate::partition::{Partition, Strip};
use crate::scalar::Scalar;

fn checked_den<T: Scalar>(value: T, what: impl FnOnce() -> String) -> Result<T> {
    if !value.is_finite() {
        return Err(Error::NonFinite(what()));
    }
    if value.abs() < T::singular_threshold() {
        return Err(Error::SingularDenominator {
            context: what(),
            value: value.abs().to_f64_lossy(),
        });
    }
    Ok(value)
}

fn pair_gap<T: Scalar>(k: usize, j: usize) -> T {
    T::from_usize_lossy(k - j)
}

fn int<T: Scalar>(x: i64) -> T {
    T::from_i64(x).unwrap()
}

/// `B_{ν/λ} = Π_{j<k} [λ_j-λ_k + g(k-j+θ_j-θ_k)] / [λ_j-λ_k + g(k-j)]`.
pub fn hop_b<T: Scalar>(lam: &Partition, nu: &Partition, prm: &ModelParams<T>) -> Result<T> {
    let theta = Strip::between(lam, nu)?;
    let th = theta.theta();
    let g = prm.g();
    let n = lam.len();
    let mut acc = T::one();
    for j in 0..n {
        for k in j + 1..n {
            let shift = th[j] as i64 - th[k] as i64;
            if shift == 0 {
                continue;
            }
            let d: T = int(lam.diff(j, k));
            let gap = pair_gap::<T>(k, j);
            let den = checked_den(prm.bracket(d + g * gap), || {
                format!("B_{{{nu}/{lam}}} pair ({}, {})", j + 1, k + 1)
            })?;
            acc = acc * prm.bracket(d + g * (gap + int(shift))) / den;
        }
    }
    Ok(acc)
}

/// `ψ'_{ν/λ}`: product over pairs `j<k` with `θ_j - θ_k = -1` of
/// `[ν_j-ν_k+g(k-j+1)] / [ν_j-ν_k+g(k-j)] · [λ_j-λ_k+g(k-j-1)] / [λ_j-λ_k+g(k-j)]`.
pub fn psi_prime<T: Scalar>(lam: &Partition, nu: &Partition, prm: &ModelParams<T>) -> Result<T> {
    psi_prime_with(lam, nu, prm.g(), |z| prm.bracket(z))
}

/// Same product with an arbitrary bracket, shared with the trigonometric oracle.
pub(crate) fn psi_prime_with<T: Scalar>(
    lam: &Partition,
    nu: &Partition,
    g: T,
    bracket: impl Fn(T) -> T,
) -> Result<T> {
    let theta = Strip::between(lam, nu)?;
    let th = theta.theta();
    let n = lam.len();
    let mut acc = T::one();
    for j in 0..n {
        for k in j + 1..n {
            if !(th[j] == 0 && th[k] == 1) {
                continue;
            }
            let gap = pair_gap::<T>(k, j);
            let dn: T = int(nu.diff(j, k));
            let dl: T = int(lam.diff(j, k));
            let ctx = || format!("ψ'_{{{nu}/{lam}}} pair ({}, {})", j + 1, k + 1);
            let den_nu = checked_den(bracket(dn + g * gap), ctx)?;
            let den_lam = checked_den(bracket(dl + g * gap), ctx)?;
            acc = acc * bracket(dn + g * (gap + T::one())) / den_nu * bracket(dl + g * (gap - T::one()))
                / den_lam;
        }
    }
    Ok(acc)
}

/// `c_μ = Π_{j<k} [(k-j)g]_{μ_j-μ_k} / [(k-j+1)g]_{μ_j-μ_k}`.
pub fn c_norm<T: Scalar>(mu: &Partition, prm: &ModelParams<T>) -> Result<T> {
    let g = prm.g();
    let n = mu.len();
    let mut acc = T::one();
    for j in 0..n {
        for k in j + 1..n {
            let gap = pair_gap::<T>(k, j);
            let d = mu.diff(j, k) as u32;
            for l in 0..d {
                let shift = T::from_u32(l).unwrap();
                let den = checked_den(prm.bracket(g * (gap + T::one()) + shift), || {
                    format!("c_{mu} factor [{}g + {l}]", k - j + 1)
                })?;
                acc = acc * prm.bracket(g * gap + shift) / den;
            }
        }
    }
    Ok(acc)
}

/// `Δ_λ = Π_{j<k} ([λ_j-λ_k+(k-j)g]/[(k-j)g]) · ([(k-j+1)g]_{λ_j-λ_k} / [1+(k-j-1)g]_{λ_j-λ_k})`.
pub fn delta_weight<T: Scalar>(lam: &Partition, prm: &ModelParams<T>) -> Result<T> {
    let g = prm.g();
    let n = lam.len();
    let mut acc = T::one();
    for j in 0..n {
        for k in j + 1..n {
            let gap = pair_gap::<T>(k, j);
            let d = lam.diff(j, k);
            let den = checked_den(prm.bracket(g * gap), || format!("Δ_{lam} factor [{}g]", k - j))?;
            acc = acc * prm.bracket(int::<T>(d) + g * gap) / den;
            for l in 0..d as u32 {
                let shift = T::from_u32(l).unwrap();
                let den = checked_den(prm.bracket(T::one() + g * (gap - T::one()) + shift), || {
                    format!("Δ_{lam} factor [1 + {}g + {l}]", k - j - 1)
                })?;
                acc = acc * prm.bracket(g * (gap + T::one()) + shift) / den;
            }
        }
    }
    Ok(acc)
}

type PairKey = (Partition, Partition);

/// Memoized coefficients for one fixed parameter set.
///
/// Entries are written once and never change; concurrent writers for the same
/// key store identical values.
#[derive(Debug)]
pub struct CoeffCache<T: Scalar> {
    params: ModelParams<T>,
    fingerprint: u64,
    psi: RwLock<HashMap<PairKey, T>>,
    hop: RwLock<HashMap<PairKey, T>>,
    c: RwLock<HashMap<Partition, T>>,
    delta: RwLock<HashMap<Partition, T>>,
}

fn memo<K, T, F>(table: &RwLock<HashMap<K, T>>, key: K, f: F) -> Result<T>
where
    K: std::hash::Hash + Eq,
    T: Copy,
    F: FnOnce() -> Result<T>,
{
    if let Some(v) = table.read().unwrap().get(&key) {
        return Ok(*v);
    }
    let v = f()?;
    table.write().unwrap().entry(key).or_insert(v);
    Ok(v)
}

impl<T: Scalar> CoeffCache<T> {
    pub fn new(params: ModelParams<T>) -> Self {
        CoeffCache {
            fingerprint: params.fingerprint(),
            params,
            psi: RwLock::default(),
            hop: RwLock::default(),
            c: RwLock::default(),
            delta: RwLock::default(),
        }
    }

    pub fn params(&self) -> &ModelParams<T> {
        &self.params
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn psi_prime(&self, lam: &Partition, nu: &Partition) -> Result<T> {
        memo(&self.psi, (lam.clone(), nu.clone()), || psi_prime(lam, nu, &self.params))
    }

    pub fn hop_b(&self, lam: &Partition, nu: &Partition) -> Result<T> {
        memo(&self.hop, (lam.clone(), nu.clone()), || hop_b(lam, nu, &self.params))
    }

    pub fn c_norm(&self, mu: &Partition) -> Result<T> {
        memo(&self.c, mu.clone(), || c_norm(mu, &self.params))
    }

    pub fn delta_weight(&self, lam: &Partition) -> Result<T> {
        memo(&self.delta, lam.clone(), || delta_weight(lam, &self.params))
    }
}
