//! Eigenpolynomials `P_μ(e)` in the elementary variables `e_1, …, e_n`.
//!
//! A polynomial is a sparse map from exponent keys to coefficients: the key
//! `ν` stands for the monomial `e_ν = Π_j e_j^{ν_j - ν_{j+1}}`, so products of
//! monomials add keys componentwise.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, RwLock};

use num_complex::Complex;

use crate::coeffs::CoeffCache;
use crate::error::{Error, Result};
use crate::kernel::ModelParams;
use crate::partition::{r_index, vertical_strips, Partition};
use crate::scalar::Scalar;

/// Relative magnitude below which recurrence output is treated as roundoff.
pub fn prune_threshold<T: Scalar>() -> T {
    T::lit(1e-13).max(T::epsilon() * T::lit(8.0))
}

/// Sparse polynomial in `e_1, …, e_n` keyed by exponent partitions.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialInE<T: Scalar> {
    n: usize,
    coeffs: BTreeMap<Partition, T>,
}

impl<T: Scalar> PolynomialInE<T> {
    pub fn zero(n: usize) -> Self {
        PolynomialInE { n, coeffs: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(Partition::zero(n), T::one())
    }

    pub fn monomial(key: Partition, coeff: T) -> Self {
        let n = key.len();
        let mut coeffs = BTreeMap::new();
        if coeff != T::zero() {
            coeffs.insert(key, coeff);
        }
        PolynomialInE { n, coeffs }
    }

    /// The elementary variable `e_r` (key `1^r`).
    pub fn e(n: usize, r: usize) -> Self {
        Self::monomial(Partition::column(n, r), T::one())
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Partition, T)>) -> Self {
        let mut out = Self::zero(n);
        for (k, v) in terms {
            out.add_term(k, v);
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &BTreeMap<Partition, T> {
        &self.coeffs
    }

    pub fn coeff(&self, key: &Partition) -> T {
        self.coeffs.get(key).copied().unwrap_or_else(T::zero)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_abs(&self) -> T {
        self.coeffs.values().fold(T::zero(), |a, v| a.max(v.abs()))
    }

    pub fn add_term(&mut self, key: Partition, value: T) {
        assert_eq!(key.len(), self.n, "key length must equal n");
        let slot = self.coeffs.entry(key).or_insert_with(T::zero);
        *slot = *slot + value;
    }

    /// `self += s · other`.
    pub fn add_scaled(&mut self, other: &Self, s: T) {
        for (k, v) in &other.coeffs {
            self.add_term(k.clone(), *v * s);
        }
    }

    pub fn scaled(&self, s: T) -> Self {
        PolynomialInE {
            n: self.n,
            coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), *v * s)).collect(),
        }
    }

    /// Multiplies by the monomial with key `shift`.
    pub fn shifted(&self, shift: &Partition) -> Self {
        PolynomialInE {
            n: self.n,
            coeffs: self.coeffs.iter().map(|(k, v)| (k.add(shift), *v)).collect(),
        }
    }

    /// Product under key addition.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = Self::zero(self.n);
        for (a, x) in &self.coeffs {
            for (b, y) in &other.coeffs {
                out.add_term(a.add(b), *x * *y);
            }
        }
        out
    }

    /// Drops entries with magnitude at most `rel` times the largest one.
    pub fn prune(&mut self, rel: T) {
        let cut = self.max_abs() * rel;
        self.coeffs.retain(|_, v| v.abs() > cut);
    }

    /// `Σ_ν u_ν e_ν` at a point `e ∈ ℂ^n`.
    pub fn evaluate(&self, e: &[Complex<T>]) -> Complex<T> {
        assert_eq!(e.len(), self.n, "evaluation point must have length n");
        let mut powers: Vec<Vec<Complex<T>>> = vec![vec![Complex::new(T::one(), T::zero())]; self.n];
        let mut acc = Complex::new(T::zero(), T::zero());
        for (key, u) in &self.coeffs {
            let mut term = Complex::new(*u, T::zero());
            for (j, &a) in key.e_exponents().iter().enumerate() {
                let row = &mut powers[j];
                while row.len() <= a as usize {
                    let next = row[row.len() - 1] * e[j];
                    row.push(next);
                }
                term = term * row[a as usize];
            }
            acc = acc + term;
        }
        acc
    }

    /// Sum of `|u_ν · e_ν|`, the scale against which cancellation in `evaluate` is judged.
    pub fn evaluation_scale(&self, e: &[Complex<T>]) -> T {
        self.coeffs
            .iter()
            .map(|(key, u)| {
                key.e_exponents()
                    .iter()
                    .enumerate()
                    .fold(u.abs(), |acc, (j, &a)| acc * e[j].norm().powi(a as i32))
            })
            .sum()
    }
}

/// Supplier of the Pieri weights driving the recurrence.
pub trait PieriSource<T: Scalar>: Send + Sync {
    fn pieri(&self, lam: &Partition, nu: &Partition) -> Result<T>;
}

impl<T: Scalar> PieriSource<T> for CoeffCache<T> {
    fn pieri(&self, lam: &Partition, nu: &Partition) -> Result<T> {
        self.psi_prime(lam, nu)
    }
}

/// Append-only table of polynomials built by the Pieri recurrence
/// `P_μ = e_r P_λ - Σ_{ν ≠ μ} ψ'_{ν/λ} P_ν`, `r = r_μ`, `λ = μ - 1^r`.
pub struct PolyTable<T: Scalar, S: PieriSource<T>> {
    n: usize,
    source: S,
    table: RwLock<HashMap<Partition, Arc<PolynomialInE<T>>>>,
}

/// Polynomial table driven by the elliptic coefficients.
pub type EllipticTable<T> = PolyTable<T, CoeffCache<T>>;

impl<T: Scalar> PolyTable<T, CoeffCache<T>> {
    pub fn elliptic(params: ModelParams<T>) -> Self {
        let n = params.n();
        PolyTable::new(n, CoeffCache::new(params))
    }

    pub fn params(&self) -> &ModelParams<T> {
        self.source.params()
    }

    pub fn coeffs(&self) -> &CoeffCache<T> {
        &self.source
    }

    /// `p_μ(e) = c_μ P_μ(e)`.
    pub fn normalized_p(&self, mu: &Partition, e: &[Complex<T>]) -> Result<Complex<T>> {
        let c = self.source.c_norm(mu)?;
        Ok(self.get(mu)?.evaluate(e) * c)
    }

    /// `R_μ(x)`: `P_μ` with `e_r` replaced by the elementary symmetric polynomials of `x`.
    pub fn evaluate_r(&self, mu: &Partition, x: &[Complex<T>]) -> Result<Complex<T>> {
        evaluate_r(&*self.get(mu)?, x)
    }
}

impl<T: Scalar, S: PieriSource<T>> PolyTable<T, S> {
    pub fn new(n: usize, source: S) -> Self {
        PolyTable { n, source, table: RwLock::default() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn source(&self) -> &S {
        &self.source
    }

    /// Pieri weight from the underlying source.
    pub fn pieri(&self, lam: &Partition, nu: &Partition) -> Result<T> {
        self.source.pieri(lam, nu)
    }

    fn cached(&self, mu: &Partition) -> Option<Arc<PolynomialInE<T>>> {
        self.table.read().unwrap().get(mu).cloned()
    }

    fn recurrence_inputs(mu: &Partition) -> Option<(usize, Partition, Vec<Partition>)> {
        if mu.is_zero() {
            return None;
        }
        let r = r_index(mu);
        let lam = mu.remove_column(r).expect("r_μ column is removable");
        let others = vertical_strips(&lam, r).into_iter().filter(|nu| nu != mu).collect();
        Some((r, lam, others))
    }

    /// `P_μ`, building and memoizing every polynomial it depends on.
    pub fn get(&self, mu: &Partition) -> Result<Arc<PolynomialInE<T>>> {
        if mu.len() != self.n {
            return Err(Error::InvalidPartition(mu.parts().iter().map(|&x| x as i64).collect()));
        }
        if let Some(p) = self.cached(mu) {
            return Ok(p);
        }
        // Collect the missing part of the dependency cone.
        let mut cone = Vec::new();
        let mut seen = HashSet::new();
        let mut stack = vec![mu.clone()];
        while let Some(nu) = stack.pop() {
            if !seen.insert(nu.clone()) || self.cached(&nu).is_some() {
                continue;
            }
            if let Some((_, lam, others)) = Self::recurrence_inputs(&nu) {
                stack.push(lam);
                stack.extend(others);
            }
            cone.push(nu);
        }
        // Induction order of the triangularity argument.
        cone.sort_by_key(|nu| (nu.span(), r_index(nu), nu.weight()));
        for nu in cone {
            let poly = self.compute(&nu)?;
            self.table.write().unwrap().entry(nu).or_insert_with(|| Arc::new(poly));
        }
        Ok(self.cached(mu).expect("inserted above"))
    }

    fn compute(&self, mu: &Partition) -> Result<PolynomialInE<T>> {
        let Some((r, lam, others)) = Self::recurrence_inputs(mu) else {
            return Ok(PolynomialInE::one(self.n));
        };
        let dep = |nu: &Partition| {
            self.cached(nu)
                .unwrap_or_else(|| panic!("recurrence for {mu} reached {nu} before it was built"))
        };
        let mut out = dep(&lam).shifted(&Partition::column(self.n, r));
        for nu in &others {
            let w = self.source.pieri(&lam, nu)?;
            if w != T::zero() {
                out.add_scaled(&dep(nu), -w);
            }
        }
        out.prune(prune_threshold());
        out.coeffs.insert(mu.clone(), T::one());
        if out.coeffs.values().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("recurrence for P_{mu}")));
        }
        Ok(out)
    }

    /// Number of polynomials currently memoized.
    pub fn len(&self) -> usize {
        self.table.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Elementary symmetric polynomials `(e_1(x), …, e_n(x))`.
pub fn elementary_symmetric<T: Scalar>(x: &[Complex<T>]) -> Vec<Complex<T>> {
    let n = x.len();
    let zero = Complex::new(T::zero(), T::zero());
    let mut e = vec![zero; n + 1];
    e[0] = Complex::new(T::one(), T::zero());
    for &xi in x {
        for r in (1..=n).rev() {
            e[r] = e[r] + e[r - 1] * xi;
        }
    }
    e.remove(0);
    e
}

/// Evaluates a polynomial in `e` at `e_r = e_r(x)`.
pub fn evaluate_r<T: Scalar>(poly: &PolynomialInE<T>, x: &[Complex<T>]) -> Result<Complex<T>> {
    if x.len() != poly.n() {
        return Err(Error::InvalidParams(format!(
            "point has {} coordinates, expected {}",
            x.len(),
            poly.n()
        )));
    }
    Ok(poly.evaluate(&elementary_symmetric(x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{dominance_leq, partitions_of_weight};

    type P = ModelParams<f64>;

    fn pt(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn c(x: f64) -> Complex<f64> {
        Complex::new(x, 0.0)
    }

    #[test]
    fn base_cases() {
        let t = PolyTable::elliptic(P::free(3, 1.1, 0.4, 0.3).unwrap());
        assert_eq!(*t.get(&pt(&[0, 0, 0])).unwrap(), PolynomialInE::one(3));
        for r in 1..=3 {
            assert_eq!(*t.get(&Partition::column(3, r)).unwrap(), PolynomialInE::e(3, r));
        }
        let rect = t.get(&pt(&[2, 2, 2])).unwrap();
        assert_eq!(*rect, PolynomialInE::monomial(pt(&[2, 2, 2]), 1.0));
    }

    #[test]
    fn two_row_square_unrolled() {
        let prm = P::free(2, 1.1, 0.4, 0.3).unwrap();
        let t = PolyTable::elliptic(prm.clone());
        let p = t.get(&pt(&[2, 0])).unwrap();
        let g = prm.g();
        let psi = prm.bracket(2.0 * g) * prm.bracket(1.0) / (prm.bracket(g) * prm.bracket(1.0 + g));
        assert_eq!(p.len(), 2);
        assert_eq!(p.coeff(&pt(&[2, 0])), 1.0);
        assert!((p.coeff(&pt(&[1, 1])) + psi).abs() < 1e-14);
    }

    #[test]
    fn unit_coupling_square_is_schur() {
        let t = PolyTable::elliptic(P::free(2, 2.399827, 1.0, 0.0).unwrap());
        let p = t.get(&pt(&[2, 0])).unwrap();
        assert!((p.coeff(&pt(&[1, 1])) + 1.0).abs() < 1e-12);
        let v = p.evaluate(&[c(2.0), c(1.0)]);
        assert!((v - c(3.0)).norm() < 1e-12);
    }

    #[test]
    fn evaluate_examples() {
        let one = PolynomialInE::<f64>::one(3);
        assert_eq!(one.evaluate(&[c(0.3), c(2.0), c(-1.0)]), c(1.0));
        let e2 = PolynomialInE::<f64>::e(3, 2);
        assert_eq!(e2.evaluate(&[c(0.3), c(2.0), c(-1.0)]), c(2.0));
        // e_(2,1,0) = e_1 e_2
        let m = PolynomialInE::monomial(pt(&[2, 1, 0]), 2.0);
        let v = m.evaluate(&[Complex::new(0.0, 1.0), c(3.0), c(5.0)]);
        assert!((v - Complex::new(0.0, 6.0)).norm() < 1e-15);
    }

    #[test]
    fn unitriangular_and_homogeneous() {
        let t = PolyTable::elliptic(P::free(3, 1.1, 0.63, 0.35).unwrap());
        for w in 0..=6 {
            for mu in partitions_of_weight(3, w) {
                let p = t.get(&mu).unwrap();
                assert_eq!(p.coeff(&mu), 1.0);
                for key in p.coeffs().keys() {
                    assert_eq!(key.weight(), w);
                    assert!(dominance_leq(key, &mu), "{key} not below {mu}");
                }
            }
        }
    }

    #[test]
    fn pieri_identity_in_ring() {
        for n in [2usize, 3] {
            let prm = P::free(n, 0.93, 0.41, -0.3).unwrap();
            let t = PolyTable::elliptic(prm);
            for w in 0..=4 {
                for mu in partitions_of_weight(n, w) {
                    for s in 1..=n {
                        let lhs = t.get(&mu).unwrap().shifted(&Partition::column(n, s));
                        let mut rhs = PolynomialInE::zero(n);
                        for nu in vertical_strips(&mu, s) {
                            rhs.add_scaled(&t.get(&nu).unwrap(), t.pieri(&mu, &nu).unwrap());
                        }
                        let mut diff = lhs.clone();
                        diff.add_scaled(&rhs, -1.0);
                        assert!(diff.max_abs() <= 1e-10 * lhs.max_abs(), "{mu} s={s}");
                    }
                }
            }
        }
    }

    #[test]
    fn column_translation() {
        let t = PolyTable::elliptic(P::free(3, 1.1, 0.63, 0.35).unwrap());
        let mu = pt(&[2, 1, 0]);
        let lifted = t.get(&mu.add_column(3)).unwrap();
        let expect = t.get(&mu).unwrap().shifted(&Partition::column(3, 3));
        assert_eq!(*lifted, expect);
    }

    #[test]
    fn evaluate_r_first_examples() {
        let t = PolyTable::elliptic(P::free(3, 1.1, 0.63, 0.35).unwrap());
        let x = [c(0.5), c(-2.0), Complex::new(1.0, 1.0)];
        assert_eq!(t.evaluate_r(&pt(&[0, 0, 0]), &x).unwrap(), c(1.0));
        let v = t.evaluate_r(&pt(&[1, 0, 0]), &x).unwrap();
        assert!((v - (x[0] + x[1] + x[2])).norm() < 1e-15);
    }

    #[test]
    fn normalized_p_first_example() {
        let prm = P::free(2, 1.1, 0.4, 0.3).unwrap();
        let t = PolyTable::elliptic(prm.clone());
        let e = [Complex::new(0.7, -0.2), c(1.0)];
        let g = prm.g();
        let v = t.normalized_p(&pt(&[1, 0]), &e).unwrap();
        let expect = e[0] * (prm.bracket(g) / prm.bracket(2.0 * g));
        assert!((v - expect).norm() < 1e-14);
        assert_eq!(t.normalized_p(&pt(&[0, 0]), &e).unwrap(), c(1.0));
    }

    #[test]
    fn level_locked_boundary_builds() {
        let t = PolyTable::elliptic(P::level_locked(3, 2, 1.0, 0.0).unwrap());
        for mu in crate::partition::enumerate_level(3, 2) {
            assert!(t.get(&mu).is_ok());
        }
    }
}
