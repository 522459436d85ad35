//! Independent reference implementations at the degenerate endpoints:
//! Schur polynomials from tableaux, trigonometric Pieri products, and the
//! classical `su(n)_m` Verlinde fusion rules.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::trig_bracket;
use crate::linalg::CMatrix;
use crate::partition::{enumerate_level, Partition, Strip};
pub use crate::verify::limit_suite;
use crate::poly::{PieriSource, PolynomialInE};

/// Outcome of one oracle comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleReport {
    pub id: String,
    pub max_abs: f64,
    pub max_rel: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl OracleReport {
    /// Report judged on relative deviation.
    pub fn relative(id: impl Into<String>, max_abs: f64, max_rel: f64, tolerance: f64) -> Self {
        OracleReport {
            id: id.into(),
            max_abs,
            max_rel,
            tolerance,
            pass: max_rel.is_finite() && max_rel < tolerance,
            note: None,
        }
    }

    /// Report judged on absolute deviation.
    pub fn absolute(id: impl Into<String>, max_abs: f64, tolerance: f64) -> Self {
        OracleReport {
            id: id.into(),
            max_abs,
            max_rel: max_abs,
            tolerance,
            pass: max_abs.is_finite() && max_abs < tolerance,
            note: None,
        }
    }

    /// Pass/fail report for an exact (non-tolerance) check.
    pub fn exact(id: impl Into<String>, ok: bool, note: Option<String>) -> Self {
        OracleReport {
            id: id.into(),
            max_abs: if ok { 0.0 } else { 1.0 },
            max_rel: if ok { 0.0 } else { 1.0 },
            tolerance: 0.0,
            pass: ok,
            note,
        }
    }

    /// Failed comparison caused by an evaluator error.
    pub fn errored(id: impl Into<String>, err: &Error) -> Self {
        OracleReport {
            id: id.into(),
            max_abs: f64::NAN,
            max_rel: f64::NAN,
            tolerance: 0.0,
            pass: false,
            note: Some(format!("{}: {err}", err.name())),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Running maximum of absolute and relative deviations.
#[derive(Clone, Copy, Debug, Default)]
pub struct Deviation {
    pub abs: f64,
    pub rel: f64,
}

impl Deviation {
    pub fn record(&mut self, got: f64, want: f64) {
        let d = (got - want).abs();
        self.abs = self.abs.max(d);
        self.rel = self.rel.max(d / want.abs().max(f64::MIN_POSITIVE));
    }

    pub fn record_complex(&mut self, got: Complex<f64>, want: Complex<f64>) {
        let d = (got - want).norm();
        self.abs = self.abs.max(d);
        self.rel = self.rel.max(d / want.norm().max(f64::MIN_POSITIVE));
    }

    /// Records a deviation already measured against its own scale.
    pub fn record_scaled(&mut self, diff: f64, scale: f64) {
        self.abs = self.abs.max(diff);
        self.rel = self.rel.max(diff / scale.max(f64::MIN_POSITIVE));
    }

    pub fn merge(&mut self, other: Deviation) {
        self.abs = self.abs.max(other.abs);
        self.rel = self.rel.max(other.rel);
    }
}

/// Schur polynomial `s_μ(x)` summed over semistandard tableaux with entries `≤ n`.
pub fn schur_eval(mu: &Partition, x: &[Complex<f64>]) -> Complex<f64> {
    let shape: Vec<usize> = mu.parts().iter().map(|&v| v as usize).filter(|&v| v > 0).collect();
    let n = x.len();
    if shape.len() > n {
        return Complex::new(0.0, 0.0);
    }
    let mut rows: Vec<Vec<usize>> = shape.iter().map(|&len| vec![0; len]).collect();
    fn fill(
        cell: usize,
        cells: &[(usize, usize)],
        rows: &mut Vec<Vec<usize>>,
        x: &[Complex<f64>],
        weight: Complex<f64>,
    ) -> Complex<f64> {
        if cell == cells.len() {
            return weight;
        }
        let (i, j) = cells[cell];
        let left = if j > 0 { rows[i][j - 1] } else { 1 };
        let above = if i > 0 { rows[i - 1][j] + 1 } else { 1 };
        let lo = left.max(above);
        let mut acc = Complex::new(0.0, 0.0);
        for v in lo..=x.len() {
            rows[i][j] = v;
            acc += fill(cell + 1, cells, rows, x, weight * x[v - 1]);
        }
        acc
    }
    let cells: Vec<(usize, usize)> =
        shape.iter().enumerate().flat_map(|(i, &len)| (0..len).map(move |j| (i, j))).collect();
    fill(0, &cells, &mut rows, x, Complex::new(1.0, 0.0))
}

fn e_poly(n: usize, k: i64) -> PolynomialInE<f64> {
    match k {
        0 => PolynomialInE::one(n),
        k if k < 0 || k as usize > n => PolynomialInE::zero(n),
        k => PolynomialInE::e(n, k as usize),
    }
}

fn permutations(k: usize) -> Vec<(Vec<usize>, f64)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, sign: f64, out: &mut Vec<(Vec<usize>, f64)>) {
        let k = used.len();
        if prefix.len() == k {
            out.push((prefix.clone(), sign));
            return;
        }
        for v in 0..k {
            if used[v] {
                continue;
            }
            // inversions created by placing v after the current prefix
            let inv = prefix.iter().filter(|&&p| p > v).count();
            used[v] = true;
            prefix.push(v);
            rec(prefix, used, if inv % 2 == 0 { sign } else { -sign }, out);
            prefix.pop();
            used[v] = false;
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], 1.0, &mut out);
    out
}

/// `s_μ` written in the elementary variables via `det[e_{μ'_i - i + j}]`.
pub fn schur_in_e(mu: &Partition) -> PolynomialInE<f64> {
    let n = mu.len();
    let conj = mu.conjugate();
    let k = conj.len();
    if k == 0 {
        return PolynomialInE::one(n);
    }
    let mut total = PolynomialInE::zero(n);
    for (perm, sign) in permutations(k) {
        let mut term = PolynomialInE::one(n);
        for (i, &j) in perm.iter().enumerate() {
            let idx = conj[i] as i64 - i as i64 + j as i64;
            term = term.mul(&e_poly(n, idx));
            if term.is_empty() {
                break;
            }
        }
        total.add_scaled(&term, sign);
    }
    total.prune(1e-15);
    total
}

/// Trigonometric Pieri weight
/// `Π_{j<k, θ_j-θ_k=-1} [ν_j-ν_k+g(k-j+1)]_q [λ_j-λ_k+g(k-j-1)]_q / ([ν_j-ν_k+g(k-j)]_q [λ_j-λ_k+g(k-j)]_q)`.
pub fn macdonald_pieri_p0(lam: &Partition, nu: &Partition, alpha: f64, g: f64) -> Result<f64> {
    let theta = Strip::between(lam, nu)?;
    let th = theta.theta();
    let n = lam.len();
    let mut num = 1.0;
    let mut den = 1.0;
    for j in 0..n {
        for k in j + 1..n {
            if !(th[j] == 0 && th[k] == 1) {
                continue;
            }
            let gap = (k - j) as f64;
            let dn = nu.parts()[j] as f64 - nu.parts()[k] as f64;
            let dl = lam.parts()[j] as f64 - lam.parts()[k] as f64;
            num *= trig_bracket(dn + g * (gap + 1.0), alpha)? * trig_bracket(dl + g * (gap - 1.0), alpha)?;
            den *= trig_bracket(dn + g * gap, alpha)? * trig_bracket(dl + g * gap, alpha)?;
        }
    }
    if den.abs() < 1e-12 {
        return Err(Error::SingularDenominator {
            context: format!("trigonometric Pieri weight {lam} -> {nu}"),
            value: den.abs(),
        });
    }
    Ok(num / den)
}

/// Trigonometric Pieri weights as a recurrence source (Macdonald polynomials at `t = q^g`).
#[derive(Clone, Copy, Debug)]
pub struct MacdonaldPieri {
    pub alpha: f64,
    pub g: f64,
}

impl PieriSource<f64> for MacdonaldPieri {
    fn pieri(&self, lam: &Partition, nu: &Partition) -> Result<f64> {
        macdonald_pieri_p0(lam, nu, self.alpha, self.g)
    }
}

fn q_power(level: usize, a: f64) -> Complex<f64> {
    Complex::from_polar(1.0, 2.0 * PI * a / level as f64)
}

/// Classical S-matrix at `q = e^{2πi/(m+n)}`:
/// `q^{-|λ||ν|/n - (n-1)(|λ|+|ν|)/2} s_λ(q^{ν_1+n-1}, …, q^{ν_{n-1}+1}, 1) s_ν(q^{n-1}, …, q, 1)`.
pub fn kac_peterson_s(n: usize, m: u32) -> (Vec<Partition>, CMatrix<f64>) {
    let labels = enumerate_level(n, m);
    let level = m as usize + n;
    let rho: Vec<Complex<f64>> = (0..n).map(|j| q_power(level, (n - 1 - j) as f64)).collect();
    let size = labels.len();
    let mut s = CMatrix::zeros(size, size);
    for (i, lam) in labels.iter().enumerate() {
        for (j, nu) in labels.iter().enumerate() {
            let shifted: Vec<Complex<f64>> = (0..n)
                .map(|k| q_power(level, nu.parts()[k] as f64 + (n - 1 - k) as f64))
                .collect();
            let (a, b) = (lam.weight() as f64, nu.weight() as f64);
            let phase = q_power(level, -a * b / n as f64 - (n as f64 - 1.0) * (a + b) / 2.0);
            s[(i, j)] = phase * schur_eval(lam, &shifted) * schur_eval(nu, &rho);
        }
    }
    (labels, s)
}

/// Classical Verlinde sum `Σ_ν S_{λν} S_{μν} S⁻¹_{νκ} / S_{0ν}` before rounding.
pub fn classical_fusion_real(lam: &Partition, mu: &Partition, n: usize, m: u32) -> Result<BTreeMap<Partition, Complex<f64>>> {
    let (labels, s) = kac_peterson_s(n, m);
    let sinv = s.inverse()?;
    let find = |p: &Partition| {
        labels
            .iter()
            .position(|l| l == p)
            .ok_or_else(|| Error::InvalidPartition(p.parts().iter().map(|&x| x as i64).collect()))
    };
    let (i, j) = (find(lam)?, find(mu)?);
    let zero = find(&Partition::zero(n))?;
    let mut out = BTreeMap::new();
    for (k, kappa) in labels.iter().enumerate() {
        let mut acc = Complex::new(0.0, 0.0);
        for nu in 0..labels.len() {
            acc += s[(i, nu)] * s[(j, nu)] * sinv[(nu, k)] / s[(zero, nu)];
        }
        out.insert(kappa.clone(), acc);
    }
    Ok(out)
}

/// `su(n)_m` fusion coefficients, rounded to integers; zero entries omitted.
pub fn classical_fusion(lam: &Partition, mu: &Partition, n: usize, m: u32) -> Result<BTreeMap<Partition, i64>> {
    let mut out = BTreeMap::new();
    for (kappa, v) in classical_fusion_real(lam, mu, n, m)? {
        let r = v.re.round();
        let residue = (v - Complex::new(r, 0.0)).norm();
        if residue > 1e-6 {
            return Err(Error::NonIntegral { value: v.re, residue });
        }
        if r != 0.0 {
            out.insert(kappa, r as i64);
        }
    }
    Ok(out)
}

/// `Π_{j<k} [(k-j+1)g]_{q,d} / [(k-j)g]_{q,d}` with `d = ν_j - ν_k`, the principal
/// specialization of the Macdonald polynomial.
pub fn principal_specialization(nu: &Partition, alpha: f64, g: f64) -> Result<f64> {
    let n = nu.len();
    let mut acc = 1.0;
    for j in 0..n {
        for k in j + 1..n {
            let gap = (k - j) as f64;
            for l in 0..(nu.parts()[j] - nu.parts()[k]) {
                acc *= trig_bracket((gap + 1.0) * g + l as f64, alpha)?;
                acc /= trig_bracket(gap * g + l as f64, alpha)?;
            }
        }
    }
    Ok(acc)
}

/// `(2 sin π/(m+n))^{-n(n-1)} n (n+m)^{n-1} / Π_{j<k} [k-j]_q²`.
pub fn classical_normalization(n: usize, m: u32) -> Result<f64> {
    let level = (m as usize + n) as f64;
    let alpha = 2.0 * PI / level;
    let mut den = 1.0;
    for j in 0..n {
        for k in j + 1..n {
            let b = trig_bracket((k - j) as f64, alpha)?;
            den *= b * b;
        }
    }
    let pre = (2.0 * (PI / level).sin()).powi(-((n * (n - 1)) as i32));
    Ok(pre * n as f64 * level.powi(n as i32 - 1) / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::partitions_of_weight;

    fn pt(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn ones(n: usize) -> Vec<Complex<f64>> {
        vec![Complex::new(1.0, 0.0); n]
    }

    #[test]
    fn schur_examples() {
        let x: Vec<Complex<f64>> = [0.3, -1.2, 2.0].iter().map(|&v| Complex::new(v, 0.0)).collect();
        let s1 = schur_eval(&pt(&[1, 0, 0]), &x);
        assert!((s1.re - (0.3 - 1.2 + 2.0)).abs() < 1e-15);
        assert_eq!(schur_eval(&pt(&[2, 1, 0]), &ones(3)).re, 8.0);
        let e2 = schur_eval(&pt(&[1, 1, 0]), &x).re;
        assert!((e2 - (0.3 * -1.2 + 0.3 * 2.0 + -1.2 * 2.0)).abs() < 1e-15);
        // Number of SSYT of shape (2,2) with entries ≤ 3 is 6.
        assert_eq!(schur_eval(&pt(&[2, 2, 0]), &ones(3)).re, 6.0);
        assert_eq!(schur_eval(&pt(&[1, 1, 1]), &ones(2)).re, 0.0);
    }

    #[test]
    fn schur_in_e_matches_tableaux() {
        let x: Vec<Complex<f64>> =
            vec![Complex::new(0.4, 0.1), Complex::new(-0.7, 0.3), Complex::new(1.1, -0.5)];
        let e = crate::poly::elementary_symmetric(&x);
        for w in 0..=5 {
            for mu in partitions_of_weight(3, w) {
                let a = schur_in_e(&mu).evaluate(&e);
                let b = schur_eval(&mu, &x);
                assert!((a - b).norm() < 1e-12 * b.norm().max(1.0), "{mu}");
            }
        }
        let sq = schur_in_e(&pt(&[2, 0]));
        assert_eq!(sq.coeff(&pt(&[2, 0])), 1.0);
        assert_eq!(sq.coeff(&pt(&[1, 1])), -1.0);
    }

    #[test]
    fn trigonometric_pieri_examples() {
        let (alpha, g) = (0.9, 0.35);
        let lam = pt(&[1, 0]);
        assert_eq!(macdonald_pieri_p0(&lam, &pt(&[2, 1]), alpha, g).unwrap(), 1.0);
        let b = |z: f64| trig_bracket(z, alpha).unwrap();
        let expect = b(2.0 * g) * b(1.0) / (b(g) * b(1.0 + g));
        assert!((macdonald_pieri_p0(&lam, &pt(&[1, 1]), alpha, g).unwrap() - expect).abs() < 1e-15);
    }

    #[test]
    fn classical_fusion_examples() {
        let phi = pt(&[1, 0]);
        assert_eq!(classical_fusion(&phi, &phi, 2, 1).unwrap(), BTreeMap::from([(pt(&[0, 0]), 1)]));
        assert_eq!(
            classical_fusion(&phi, &phi, 2, 2).unwrap(),
            BTreeMap::from([(pt(&[0, 0]), 1), (pt(&[2, 0]), 1)])
        );
        let mu = pt(&[2, 1, 0]);
        assert_eq!(classical_fusion(&pt(&[0, 0, 0]), &mu, 3, 2).unwrap(), BTreeMap::from([(mu, 1)]));
        // su(3)_1: the two nontrivial simple currents multiply to the identity.
        let f = classical_fusion(&pt(&[1, 0, 0]), &pt(&[1, 1, 0]), 3, 1).unwrap();
        assert_eq!(f, BTreeMap::from([(pt(&[0, 0, 0]), 1)]));
    }

    #[test]
    fn classical_fusion_ring_axioms() {
        for (n, m) in [(2usize, 3u32), (3, 2)] {
            let labels = enumerate_level(n, m);
            let table: BTreeMap<(Partition, Partition), BTreeMap<Partition, i64>> = labels
                .iter()
                .flat_map(|a| labels.iter().map(move |b| (a.clone(), b.clone())))
                .map(|(a, b)| {
                    let f = classical_fusion(&a, &b, n, m).unwrap();
                    ((a, b), f)
                })
                .collect();
            for a in &labels {
                for b in &labels {
                    assert_eq!(table[&(a.clone(), b.clone())], table[&(b.clone(), a.clone())]);
                    assert!(table[&(a.clone(), b.clone())].values().all(|&v| v > 0));
                    for c in &labels {
                        let mut left: BTreeMap<Partition, i64> = BTreeMap::new();
                        for (k, x) in &table[&(a.clone(), b.clone())] {
                            for (nu, y) in &table[&(k.clone(), c.clone())] {
                                *left.entry(nu.clone()).or_default() += x * y;
                            }
                        }
                        let mut right: BTreeMap<Partition, i64> = BTreeMap::new();
                        for (k, x) in &table[&(b.clone(), c.clone())] {
                            for (nu, y) in &table[&(a.clone(), k.clone())] {
                                *right.entry(nu.clone()).or_default() += x * y;
                            }
                        }
                        assert_eq!(left, right);
                    }
                }
            }
        }
    }

    #[test]
    fn kac_peterson_is_unitary_after_normalization() {
        for (n, m) in [(2usize, 1u32), (2, 3), (3, 2)] {
            let (_, s) = kac_peterson_s(n, m);
            let norm = classical_normalization(n, m).unwrap();
            let u = s.scale(Complex::new(norm.sqrt().recip(), 0.0));
            let defect = u.mul(&u.adjoint()).sub(&CMatrix::identity(u.rows())).max_abs();
            assert!(defect < 1e-12, "n={n} m={m}: {defect:e}");
        }
    }

    #[test]
    fn su2_kac_peterson_sine_form() {
        // For su(2)_m the normalized matrix is sqrt(2/(m+2)) sin(π(a+1)(b+1)/(m+2)) up to phases.
        let m = 3u32;
        let (labels, s) = kac_peterson_s(2, m);
        let norm = classical_normalization(2, m).unwrap().sqrt();
        let level = (m + 2) as f64;
        for (i, a) in labels.iter().enumerate() {
            for (j, b) in labels.iter().enumerate() {
                let (a1, b1) = (a.parts()[0] as f64 + 1.0, b.parts()[0] as f64 + 1.0);
                let want = (2.0 / level).sqrt() * (PI * a1 * b1 / level).sin();
                assert!(((s[(i, j)] / norm).norm() - want.abs()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn normalization_closed_form_small_case() {
        assert!((classical_normalization(2, 1).unwrap() - 2.0).abs() < 1e-12);
    }
}
