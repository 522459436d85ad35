//! The level-m fusion ring: reduction modulo the fusion ideal, structure
//! constants by the Verlinde formula and by Littlewood–Richardson expansion,
//! and the elliptic S-matrix.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::ModelParams;
use crate::lattice::{joint_spectrum, SpectrumResult};
use crate::limits::limit_map;
use crate::linalg::CMatrix;
use crate::lr::lr_coefficients;
use crate::partition::{enumerate_level, underline, Partition};
use crate::poly::{EllipticTable, PolyTable};
use crate::scalar::Scalar;

/// How structure constants were obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// `Σ_ν S_{λν} S_{μν} S⁻¹_{νκ} / S_{0ν}`.
    Verlinde,
    /// `c_κ² Δ_κ ⟨P_λ P_μ, P_κ⟩_Δ̂`.
    Projection,
    /// Littlewood–Richardson expansion reduced modulo the fusion ideal.
    Lr,
}

/// Drops keys with `d_ν > m` and re-keys the rest to `underline ν`.
pub fn reduce_mod_ideal<T: Scalar>(expansion: &BTreeMap<Partition, T>, m: u32) -> BTreeMap<Partition, T> {
    let mut out = BTreeMap::new();
    for (nu, v) in expansion {
        if nu.span() > m {
            continue;
        }
        let slot = out.entry(underline(nu)).or_insert_with(T::zero);
        *slot = *slot + *v;
    }
    out
}

/// `S_{λν} = P_λ(e_ν) / c_ν`, its inverse and the normalization `Σ_λ Δ_λ`.
#[derive(Clone, Debug)]
pub struct SMatrix<T: Scalar> {
    pub labels: Vec<Partition>,
    pub s: CMatrix<T>,
    /// `S⁻¹_{νκ} = c_ν² Δ̂_ν conj(S_{κν}) c_κ² Δ_κ` (first index spectral).
    pub sinv: CMatrix<T>,
    pub n_value: T,
    pub c: Vec<T>,
    pub delta: Vec<T>,
    pub dual: Vec<T>,
}

impl<T: Scalar> SMatrix<T> {
    /// Largest entry of `S S⁻¹ - I`.
    pub fn identity_defect(&self) -> T {
        let n = self.labels.len();
        self.s.mul(&self.sinv).sub(&CMatrix::identity(n)).max_abs()
    }

    /// `(|det S|, (Π_λ c_λ² √(Δ_λ Δ̂_λ))⁻¹)`.
    pub fn determinant_check(&self) -> (T, T) {
        let det = self.s.determinant().norm();
        let predicted = (0..self.labels.len())
            .map(|i| self.c[i] * self.c[i] * (self.delta[i] * self.dual[i]).sqrt())
            .fold(T::one(), |a, x| a * x);
        (det, T::one() / predicted)
    }

    pub fn index_of(&self, label: &Partition) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// Builds the S-matrix from a labeled spectrum.
pub fn s_matrix<T: Scalar>(spec: &SpectrumResult<T>, table: &EllipticTable<T>) -> Result<SMatrix<T>> {
    let labels = spec.labels.clone();
    let size = labels.len();
    let coeffs = table.coeffs();
    let c: Vec<T> = labels.iter().map(|l| coeffs.c_norm(l)).collect::<Result<_>>()?;
    let delta = spec.delta.clone();
    let dual: Vec<T> = spec.points.iter().map(|p| p.dual_norm).collect();
    let mut s = CMatrix::zeros(size, size);
    for (i, lam) in labels.iter().enumerate() {
        let p = table.get(lam)?;
        for (j, pt) in spec.points.iter().enumerate() {
            s[(i, j)] = p.evaluate(&pt.e) / c[j];
        }
    }
    let sinv = CMatrix::from_fn(size, size, |nu, kappa| {
        s[(kappa, nu)].conj() * (c[nu] * c[nu] * dual[nu] * c[kappa] * c[kappa] * delta[kappa])
    });
    let n_value = delta.iter().copied().sum();
    Ok(SMatrix { labels, s, sinv, n_value, c, delta, dual })
}

/// Structure constants `N^κ_{λμ}` for all `κ`, with the largest discarded imaginary part.
pub fn structure_constants_verlinde<T: Scalar>(
    lam: &Partition,
    mu: &Partition,
    sm: &SMatrix<T>,
) -> Result<(BTreeMap<Partition, T>, T)> {
    let missing = |p: &Partition| Error::InvalidPartition(p.parts().iter().map(|&x| x as i64).collect());
    let i = sm.index_of(lam).ok_or_else(|| missing(lam))?;
    let j = sm.index_of(mu).ok_or_else(|| missing(mu))?;
    let zero = sm.index_of(&Partition::zero(lam.len())).expect("empty partition is a label");
    let size = sm.labels.len();
    let mut out = BTreeMap::new();
    let mut imag = T::zero();
    for k in 0..size {
        let mut acc = Complex::new(T::zero(), T::zero());
        for nu in 0..size {
            acc = acc + sm.s[(i, nu)] * sm.s[(j, nu)] * sm.sinv[(nu, k)] / sm.s[(zero, nu)];
        }
        imag = imag.max(acc.im.abs());
        out.insert(sm.labels[k].clone(), acc.re);
    }
    Ok((out, imag))
}

/// `N^κ_{λμ} = c_κ² Δ_κ Σ_ν P_λ(e_ν) P_μ(e_ν) conj(P_κ(e_ν)) Δ̂_ν`.
pub fn structure_constants_projection<T: Scalar>(
    lam: &Partition,
    mu: &Partition,
    spec: &SpectrumResult<T>,
    table: &EllipticTable<T>,
) -> Result<(BTreeMap<Partition, T>, T)> {
    let pl = table.get(lam)?;
    let pm = table.get(mu)?;
    let mut out = BTreeMap::new();
    let mut imag = T::zero();
    for (k, kappa) in spec.labels.iter().enumerate() {
        let pk = table.get(kappa)?;
        let c = table.coeffs().c_norm(kappa)?;
        let mut acc = Complex::new(T::zero(), T::zero());
        for pt in &spec.points {
            acc = acc + pl.evaluate(&pt.e) * pm.evaluate(&pt.e) * pk.evaluate(&pt.e).conj() * pt.dual_norm;
        }
        acc = acc * (c * c * spec.delta[k]);
        imag = imag.max(acc.im.abs());
        out.insert(kappa.clone(), acc.re);
    }
    Ok((out, imag))
}

fn lr_route_all<T: Scalar>(
    prm: &ModelParams<T>,
    labels: &[Partition],
) -> Result<BTreeMap<(Partition, Partition, Partition), T>> {
    let table = PolyTable::elliptic(prm.clone());
    let mut out = BTreeMap::new();
    for lam in labels {
        for mu in labels {
            let reduced = reduce_mod_ideal(&lr_coefficients(lam, mu, &table)?, prm.m());
            for (kappa, v) in reduced {
                out.insert((lam.clone(), mu.clone(), kappa), v);
            }
        }
    }
    Ok(out)
}

/// Complete table of structure constants over `Λ₀^(n,m)`.
#[derive(Clone, Debug)]
pub struct FusionTable<T: Scalar> {
    pub params: ModelParams<T>,
    pub route: Route,
    pub labels: Vec<Partition>,
    pub entries: BTreeMap<(Partition, Partition, Partition), T>,
    /// Largest imaginary part dropped from a spectral-route entry.
    pub max_imag: T,
    /// Whether the values came from the rational-coupling limit protocol.
    pub extrapolated: bool,
    /// Entries whose two limit estimates disagreed.
    pub flagged: Vec<(Partition, Partition, Partition)>,
    pub seed: Option<u64>,
}

impl<T: Scalar> FusionTable<T> {
    pub fn get(&self, lam: &Partition, mu: &Partition, kappa: &Partition) -> T {
        self.entries
            .get(&(lam.clone(), mu.clone(), kappa.clone()))
            .copied()
            .unwrap_or_else(T::zero)
    }

    /// Largest entrywise difference against another table over the same labels.
    pub fn max_difference(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for key in self.entries.keys().chain(other.entries.keys()) {
            worst = worst.max((self.get(&key.0, &key.1, &key.2) - other.get(&key.0, &key.1, &key.2)).abs());
        }
        worst
    }
}

fn require_level_locked<T: Scalar>(prm: &ModelParams<T>) -> Result<()> {
    if !prm.is_level_locked() {
        return Err(Error::InvalidParams("the fusion ring needs level-locked parameters".into()));
    }
    Ok(())
}

/// Fusion table by the LR route. Falls back to the limit protocol when a
/// denominator vanishes at the given coupling.
pub fn fusion_table_lr<T: Scalar>(prm: &ModelParams<T>) -> Result<FusionTable<T>> {
    require_level_locked(prm)?;
    let labels = enumerate_level(prm.n(), prm.m());
    let (entries, extrapolated, flagged) = match lr_route_all(prm, &labels) {
        Ok(entries) => (entries, false, Vec::new()),
        Err(Error::SingularDenominator { .. }) | Err(Error::NonTerminating(_)) => {
            let lv = limit_map(prm, |p| lr_route_all(p, &labels))?;
            (lv.values, true, lv.flagged)
        }
        Err(e) => return Err(e),
    };
    Ok(FusionTable {
        params: prm.clone(),
        route: Route::Lr,
        labels,
        entries,
        max_imag: T::zero(),
        extrapolated,
        flagged,
        seed: None,
    })
}

/// Fusion table by a spectral route (`Verlinde` or `Projection`).
pub fn fusion_table_spectral<T: Scalar>(
    spec: &SpectrumResult<T>,
    table: &EllipticTable<T>,
    route: Route,
) -> Result<FusionTable<T>> {
    let labels = spec.labels.clone();
    let sm = match route {
        Route::Verlinde => Some(s_matrix(spec, table)?),
        Route::Projection => None,
        Route::Lr => return Err(Error::InvalidParams("LR route is not spectral".into())),
    };
    let mut entries = BTreeMap::new();
    let mut max_imag = T::zero();
    for lam in &labels {
        for mu in &labels {
            let (row, imag) = match &sm {
                Some(sm) => structure_constants_verlinde(lam, mu, sm)?,
                None => structure_constants_projection(lam, mu, spec, table)?,
            };
            max_imag = max_imag.max(imag);
            for (kappa, v) in row {
                entries.insert((lam.clone(), mu.clone(), kappa), v);
            }
        }
    }
    Ok(FusionTable {
        params: spec.params.clone(),
        route,
        labels,
        entries,
        max_imag,
        extrapolated: false,
        flagged: Vec::new(),
        seed: Some(spec.seed),
    })
}

/// Fusion table at the given parameters by the requested route.
pub fn fusion_table<T: Scalar>(prm: &ModelParams<T>, route: Route, seed: u64) -> Result<FusionTable<T>> {
    require_level_locked(prm)?;
    if route == Route::Lr {
        return fusion_table_lr(prm);
    }
    let spec = joint_spectrum(prm, seed)?;
    let table = PolyTable::elliptic(prm.clone());
    fusion_table_spectral(&spec, &table, route)
}
