//! Discrete difference operators `D_r` on lattice functions, their level-m
//! truncations, and the joint spectrum of the truncated family.

use std::collections::BTreeMap;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeffs::CoeffCache;
use crate::error::{Error, Result};
use crate::kernel::ModelParams;
use crate::linalg::CMatrix;
use crate::partition::{enumerate_level, strips_below, underline, vertical_strips, Partition};
use crate::poly::{elementary_symmetric, PieriSource, PolyTable};
use crate::scalar::Scalar;

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x5eed;
/// Initial homotopy step in `p`.
pub const HOMOTOPY_STEP: f64 = 0.05;
/// Smallest homotopy step before giving up.
pub const HOMOTOPY_FLOOR: f64 = 1e-4;
/// Number of random combinations tried before reporting a degenerate spectrum.
pub const COMBINATION_ATTEMPTS: usize = 8;

const SEPARATION_REL: f64 = 1e-6;

/// Finitely supported complex function on partitions of fixed length.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct LatticeFunction<T: Scalar> {
    pub values: BTreeMap<Partition, Complex<T>>,
}

impl<T: Scalar> LatticeFunction<T> {
    pub fn new() -> Self {
        LatticeFunction { values: BTreeMap::new() }
    }

    pub fn get(&self, lam: &Partition) -> Complex<T> {
        self.values.get(lam).copied().unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    pub fn set(&mut self, lam: Partition, v: Complex<T>) {
        self.values.insert(lam, v);
    }

    pub fn max_abs(&self) -> T {
        self.values.values().fold(T::zero(), |a, z| a.max(z.norm()))
    }
}

/// `(D_r f)(λ) = Σ_{ν} B_{ν/λ} f(ν)` over vertical `r`-strips `ν` of `λ`.
pub fn apply_d<T: Scalar>(
    r: usize,
    f: &LatticeFunction<T>,
    lam: &Partition,
    coeffs: &CoeffCache<T>,
) -> Result<Complex<T>> {
    let n = lam.len();
    if r == 0 || r > n {
        return Err(Error::InvalidParams(format!("operator index r = {r} outside 1..={n}")));
    }
    let mut acc = Complex::new(T::zero(), T::zero());
    for nu in vertical_strips(lam, r) {
        if let Some(v) = f.values.get(&nu) {
            acc = acc + *v * coeffs.hop_b(lam, &nu)?;
        }
    }
    Ok(acc)
}

/// `D_r f` on its full (finite) support.
pub fn apply_d_all<T: Scalar>(
    r: usize,
    f: &LatticeFunction<T>,
    coeffs: &CoeffCache<T>,
) -> Result<LatticeFunction<T>> {
    let mut sites = std::collections::BTreeSet::new();
    for nu in f.values.keys() {
        sites.extend(strips_below(nu, r));
    }
    let mut out = LatticeFunction::new();
    for lam in sites {
        let v = apply_d(r, f, &lam, coeffs)?;
        out.set(lam, v);
    }
    Ok(out)
}

/// `D_r` truncated to `Λ₀^(n,m)`, rows and columns in canonical label order.
#[derive(Clone, Debug)]
pub struct TruncatedOperator<T: Scalar> {
    pub r: usize,
    pub labels: Vec<Partition>,
    pub matrix: CMatrix<T>,
}

impl<T: Scalar> TruncatedOperator<T> {
    /// `W D W⁻¹` with `W = diag(√Δ_λ)`.
    pub fn weighted(&self, delta: &[T]) -> CMatrix<T> {
        let root: Vec<T> = delta.iter().map(|d| d.sqrt()).collect();
        let n = self.labels.len();
        CMatrix::from_fn(n, n, |i, j| self.matrix[(i, j)] * (root[i] / root[j]))
    }
}

/// `‖M M* - M* M‖_F / ‖M‖_F²`.
pub fn normality_defect<T: Scalar>(m: &CMatrix<T>) -> T {
    let a = m.adjoint();
    let f = m.frobenius();
    if f == T::zero() {
        return T::zero();
    }
    m.mul(&a).sub(&a.mul(m)).frobenius() / (f * f)
}

fn require_level_locked<T: Scalar>(prm: &ModelParams<T>) -> Result<()> {
    if !prm.is_level_locked() {
        return Err(Error::InvalidParams("truncated operators need level-locked parameters".into()));
    }
    Ok(())
}

/// Entry `(λ, underline ν) = B_{ν/λ}` for every `r`-strip `ν` of `λ` with `d_ν ≤ m`.
pub fn build_truncated<T: Scalar>(r: usize, coeffs: &CoeffCache<T>) -> Result<TruncatedOperator<T>> {
    let prm = coeffs.params();
    require_level_locked(prm)?;
    let n = prm.n();
    if r == 0 || r >= n.max(2) {
        return Err(Error::InvalidParams(format!("truncated operator index r = {r} outside 1..{n}")));
    }
    let labels = enumerate_level(n, prm.m());
    let index: BTreeMap<&Partition, usize> = labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let mut matrix = CMatrix::zeros(labels.len(), labels.len());
    for (i, lam) in labels.iter().enumerate() {
        for nu in vertical_strips(lam, r) {
            if nu.span() > prm.m() {
                continue;
            }
            let j = index[&underline(&nu)];
            matrix[(i, j)] = Complex::new(coeffs.hop_b(lam, &nu)?, T::zero());
        }
    }
    Ok(TruncatedOperator { r, labels, matrix })
}

/// `q^a = e^{iαa}`.
fn q_pow<T: Scalar>(prm: &ModelParams<T>, a: T) -> Complex<T> {
    prm.q_pow(a)
}

/// Trigonometric spectral point
/// `e_{r,ν} = q^{-r(|ν|/n + (n-1)g/2)} e_r(q^{ν_1+(n-1)g}, …, q^{ν_{n-1}+g}, 1)`.
pub fn trigonometric_point<T: Scalar>(nu: &Partition, prm: &ModelParams<T>) -> Vec<Complex<T>> {
    let n = nu.len();
    let g = prm.g();
    let nn = T::from_usize_lossy(n);
    let x: Vec<Complex<T>> = (0..n)
        .map(|j| q_pow(prm, T::from_u32(nu.parts()[j]).unwrap() + g * T::from_usize_lossy(n - 1 - j)))
        .collect();
    let e = elementary_symmetric(&x);
    let shift = T::from_u32(nu.weight()).unwrap() / nn + (nn - T::one()) * g * T::lit(0.5);
    e.iter()
        .enumerate()
        .map(|(k, ek)| *ek * q_pow(prm, -T::from_usize_lossy(k + 1) * shift))
        .collect()
}

/// One joint eigenvector of the truncated family.
#[derive(Clone, Debug)]
pub struct SpectralPoint<T: Scalar> {
    pub label: Partition,
    /// `(e_{1,ν}, …, e_{n-1,ν}, 1)`.
    pub e: Vec<Complex<T>>,
    /// Eigenvector entries in label order, scaled so the entry at `λ = 0` is 1.
    pub eigenvector: Vec<Complex<T>>,
    /// `Δ̂_ν = 1 / ⟨f, f⟩_Δ`.
    pub dual_norm: T,
}

/// Labeled joint spectrum together with the bookkeeping needed to reproduce it.
#[derive(Clone, Debug)]
pub struct SpectrumResult<T: Scalar> {
    pub params: ModelParams<T>,
    pub seed: u64,
    pub labels: Vec<Partition>,
    pub points: Vec<SpectralPoint<T>>,
    pub delta: Vec<T>,
    /// Nome values visited by the continuation from `p = 0`.
    pub steps: Vec<T>,
}

impl<T: Scalar> SpectrumResult<T> {
    pub fn point(&self, label: &Partition) -> Option<&SpectralPoint<T>> {
        self.points.iter().find(|pt| &pt.label == label)
    }
}

struct RawPoint<T: Scalar> {
    coords: Vec<Complex<T>>,
    eigenvector: Vec<Complex<T>>,
}

fn distance<T: Scalar>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    a.iter().zip(b).map(|(x, y)| (*x - *y).norm_sqr()).sum::<T>().sqrt()
}

fn min_gap<T: Scalar>(pts: &[Vec<Complex<T>>]) -> T {
    let mut best = T::infinity();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            best = best.min(distance(&pts[i], &pts[j]));
        }
    }
    best
}

/// Assigns each new point to the nearest reference point; fails unless the
/// assignment is a bijection with every move below half the reference gap.
fn match_points<T: Scalar>(reference: &[Vec<Complex<T>>], new: &[Vec<Complex<T>>], p: T) -> Result<Vec<usize>> {
    let half_gap = min_gap(reference) * T::lit(0.5);
    let mut taken = vec![false; reference.len()];
    let mut out = Vec::with_capacity(new.len());
    for (j, pt) in new.iter().enumerate() {
        let (best, dist) = reference
            .iter()
            .enumerate()
            .map(|(i, r)| (i, distance(r, pt)))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        if !(dist < half_gap) {
            return Err(Error::TrackingAmbiguity {
                p: p.to_f64_lossy(),
                reason: format!(
                    "point {j} moved {:e}, half gap is {:e}",
                    dist.to_f64_lossy(),
                    half_gap.to_f64_lossy()
                ),
            });
        }
        if taken[best] {
            return Err(Error::TrackingAmbiguity {
                p: p.to_f64_lossy(),
                reason: format!("two points matched reference {best}"),
            });
        }
        taken[best] = true;
        out.push(best);
    }
    Ok(out)
}

/// Unlabeled eigen-decomposition of the truncated family at fixed parameters.
fn diagonalize<T: Scalar>(prm: &ModelParams<T>, rng: &mut ChaCha8Rng) -> Result<(Vec<RawPoint<T>>, Vec<T>)> {
    let coeffs = CoeffCache::new(prm.clone());
    let n = prm.n();
    let labels = enumerate_level(n, prm.m());
    let size = labels.len();
    let delta: Vec<T> = labels.iter().map(|l| coeffs.delta_weight(l)).collect::<Result<_>>()?;
    if n == 1 || size == 1 {
        let mut coords = vec![Complex::new(T::zero(), T::zero()); n.saturating_sub(1)];
        for (r, c) in coords.iter_mut().enumerate() {
            *c = build_truncated(r + 1, &coeffs)?.matrix[(0, 0)];
        }
        let raw = RawPoint { coords, eigenvector: vec![Complex::new(T::one(), T::zero())] };
        return Ok((vec![raw], delta));
    }
    let weighted: Vec<CMatrix<T>> = (1..n)
        .map(|r| Ok(build_truncated(r, &coeffs)?.weighted(&delta)))
        .collect::<Result<_>>()?;
    let half = T::lit(0.5);
    let i_half = Complex::new(T::zero(), -half);
    for _ in 0..COMBINATION_ATTEMPTS {
        let mut comb = CMatrix::zeros(size, size);
        for m in &weighted {
            let t = T::lit(rng.gen_range(-1.0..1.0));
            let s = T::lit(rng.gen_range(-1.0..1.0));
            let herm = m.add(&m.adjoint()).scale(Complex::new(half * t, T::zero()));
            let anti = m.sub(&m.adjoint()).scale(i_half * s);
            comb = comb.add(&herm).add(&anti);
        }
        let (vals, vecs) = comb.hermitian_eigen()?;
        let scale = vals.iter().fold(T::one(), |a, v| a.max(v.abs()));
        let sep = vals.windows(2).map(|w| w[1] - w[0]).fold(T::infinity(), T::min);
        if sep <= scale * T::lit(SEPARATION_REL) {
            continue;
        }
        let zero_idx = 0; // canonical order puts the empty partition first
        let mut points = Vec::with_capacity(size);
        for col in 0..size {
            let v: Vec<Complex<T>> = (0..size).map(|i| vecs[(i, col)]).collect();
            let coords = weighted
                .iter()
                .map(|m| {
                    let mv = m.mul_vec(&v);
                    v.iter().zip(&mv).fold(Complex::new(T::zero(), T::zero()), |a, (x, y)| a + x.conj() * *y)
                })
                .collect();
            let f: Vec<Complex<T>> = v.iter().zip(&delta).map(|(x, d)| *x / d.sqrt()).collect();
            let f0 = f[zero_idx];
            if f0.norm() <= T::epsilon() * f.iter().fold(T::zero(), |a, z| a.max(z.norm())) {
                return Err(Error::NonFinite("eigenvector has a vanishing ground-state entry".into()));
            }
            let eigenvector = f.iter().map(|x| *x / f0).collect();
            points.push(RawPoint { coords, eigenvector });
        }
        return Ok((points, delta));
    }
    Err(Error::DegenerateCombination { attempts: COMBINATION_ATTEMPTS })
}

fn finish<T: Scalar>(
    prm: &ModelParams<T>,
    seed: u64,
    labels: Vec<Partition>,
    raw: Vec<RawPoint<T>>,
    assignment: &[usize],
    delta: Vec<T>,
    steps: Vec<T>,
) -> SpectrumResult<T> {
    let mut slots: Vec<Option<SpectralPoint<T>>> = vec![None; labels.len()];
    for (raw, &slot) in raw.into_iter().zip(assignment) {
        let norm: T = raw.eigenvector.iter().zip(&delta).map(|(f, d)| f.norm_sqr() * *d).sum();
        let mut e = raw.coords;
        e.push(Complex::new(T::one(), T::zero()));
        slots[slot] = Some(SpectralPoint {
            label: labels[slot].clone(),
            e,
            eigenvector: raw.eigenvector,
            dual_norm: T::one() / norm,
        });
    }
    SpectrumResult {
        params: prm.clone(),
        seed,
        labels,
        points: slots.into_iter().map(|s| s.expect("bijective assignment")).collect(),
        delta,
        steps,
    }
}

/// Joint spectrum of `D_1, …, D_{n-1}` on `Λ₀^(n,m)`, labeled by continuation from `p = 0`.
pub fn joint_spectrum<T: Scalar>(prm: &ModelParams<T>, seed: u64) -> Result<SpectrumResult<T>> {
    require_level_locked(prm)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels = enumerate_level(prm.n(), prm.m());
    let start = prm.with_p(T::zero())?;
    let (raw, delta0) = diagonalize(&start, &mut rng)?;
    let closed: Vec<Vec<Complex<T>>> = labels
        .iter()
        .map(|l| {
            let mut e = trigonometric_point(l, &start);
            e.truncate(prm.n() - 1);
            e
        })
        .collect();
    let coords: Vec<Vec<Complex<T>>> = raw.iter().map(|r| r.coords.clone()).collect();
    let mut assignment = match_points(&closed, &coords, T::zero())?;
    let mut steps = vec![T::zero()];
    let target = prm.p();
    if target == T::zero() {
        return Ok(finish(prm, seed, labels, raw, &assignment, delta0, steps));
    }

    // Labeled coordinates in label order.
    let mut current = vec![Vec::new(); labels.len()];
    for (c, &slot) in coords.into_iter().zip(&assignment) {
        current[slot] = c;
    }
    let dir = target.signum();
    let max_step = T::lit(HOMOTOPY_STEP);
    let mut h = max_step;
    let mut p = T::zero();
    loop {
        let next = if (target - p).abs() <= h { target } else { p + dir * h };
        let here = prm.with_p(next)?;
        let attempt = diagonalize(&here, &mut rng).and_then(|(raw, delta)| {
            let coords: Vec<Vec<Complex<T>>> = raw.iter().map(|r| r.coords.clone()).collect();
            let asg = match_points(&current, &coords, next)?;
            Ok((raw, delta, coords, asg))
        });
        match attempt {
            Ok((raw, delta, coords, asg)) => {
                p = next;
                steps.push(p);
                for (c, &slot) in coords.into_iter().zip(&asg) {
                    current[slot] = c;
                }
                assignment = asg;
                if p == target {
                    return Ok(finish(prm, seed, labels, raw, &assignment, delta, steps));
                }
                h = (h + h).min(max_step);
            }
            Err(Error::TrackingAmbiguity { .. }) if h * T::lit(0.5) >= T::lit(HOMOTOPY_FLOOR) => {
                h = h * T::lit(0.5);
            }
            Err(e) => return Err(e),
        }
    }
}

/// `⟨f, g⟩_Δ̂ = Σ_ν f(e_ν) conj(g(e_ν)) Δ̂_ν` for the polynomials `P_λ`.
///
/// Returns the largest deviation from `δ_{λμ} / (c_λ² Δ_λ)`: off-diagonal
/// entries are measured against the geometric mean of the two diagonal norms,
/// diagonal entries relative to the predicted norm.
pub fn dual_orthogonality_check<T: Scalar, S: PieriSource<T>>(
    spec: &SpectrumResult<T>,
    table: &PolyTable<T, S>,
    coeffs: &CoeffCache<T>,
) -> Result<T> {
    let size = spec.labels.len();
    let mut values = vec![vec![Complex::new(T::zero(), T::zero()); size]; size];
    for (i, lam) in spec.labels.iter().enumerate() {
        let p = table.get(lam)?;
        for (k, pt) in spec.points.iter().enumerate() {
            values[i][k] = p.evaluate(&pt.e);
        }
    }
    let gram = |i: usize, j: usize| {
        spec.points.iter().enumerate().fold(Complex::new(T::zero(), T::zero()), |acc, (k, pt)| {
            acc + values[i][k] * values[j][k].conj() * pt.dual_norm
        })
    };
    let mut worst = T::zero();
    let diag: Vec<T> = (0..size).map(|i| gram(i, i).re).collect();
    for i in 0..size {
        let c = coeffs.c_norm(&spec.labels[i])?;
        let expect = T::one() / (c * c * spec.delta[i]);
        worst = worst.max((gram(i, i) - Complex::new(expect, T::zero())).norm() / expect);
        for j in 0..size {
            if i != j {
                worst = worst.max(gram(i, j).norm() / (diag[i] * diag[j]).abs().sqrt());
            }
        }
    }
    Ok(worst)
}
