//! Property and oracle comparisons, grouped into suites for the CLI and the
//! acceptance tests. Every check returns an [`OracleReport`]; evaluator errors
//! become failed reports instead of aborting the suite.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coeffs::{hop_b, psi_prime, CoeffCache};
use crate::error::{Error, Result};
use crate::fusion::{
    fusion_table, fusion_table_lr, fusion_table_spectral, s_matrix, FusionTable, Route,
};
use crate::kernel::ModelParams;
use crate::lattice::{build_truncated, dual_orthogonality_check, joint_spectrum, DEFAULT_SEED};
use crate::limits::limit_map;
use crate::lr::{in_lr_support, lr_coefficients};
use crate::oracles::{
    classical_fusion, classical_normalization, kac_peterson_s, macdonald_pieri_p0,
    principal_specialization, schur_eval, Deviation, MacdonaldPieri, OracleReport,
};
use crate::partition::{
    dominance_leq, enumerate_level, partitions_of_weight, underline, vertical_strips, Partition,
};
use crate::poly::{evaluate_r, EllipticTable, PolyTable, PolynomialInE};

type P = ModelParams<f64>;

/// Named groups of checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Limits,
    Ring,
    Spectrum,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "limits" => Ok(Suite::Limits),
            "ring" => Ok(Suite::Ring),
            "spectrum" => Ok(Suite::Spectrum),
            "all" => Ok(Suite::All),
            other => Err(Error::InvalidParams(format!("unknown suite {other:?}"))),
        }
    }
}

/// Ranks, levels and seed a suite runs over. The `(g, p)` samples are fixed per check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub ns: Vec<usize>,
    pub ms: Vec<u32>,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { ns: vec![2, 3], ms: vec![1, 2], seed: DEFAULT_SEED }
    }
}

/// Free-mode `α` used wherever a generic, non-level-locked model is needed.
pub const FREE_ALPHA: f64 = 1.1;
/// `{0.3, 1, 1.7} × {-0.5, 0, 0.5}`.
pub const WIDE_GRID: [(f64, f64); 9] = [
    (0.3, -0.5),
    (0.3, 0.0),
    (0.3, 0.5),
    (1.0, -0.5),
    (1.0, 0.0),
    (1.0, 0.5),
    (1.7, -0.5),
    (1.7, 0.0),
    (1.7, 0.5),
];
/// `{0.7, 1.3} × {0, 0.4}`.
pub const GENERIC_GRID: [(f64, f64); 4] = [(0.7, 0.0), (0.7, 0.4), (1.3, 0.0), (1.3, 0.4)];

fn report_rel(id: &str, tol: f64, run: impl FnOnce() -> Result<Deviation>) -> OracleReport {
    match run() {
        Ok(d) => OracleReport::relative(id, d.abs, d.rel, tol),
        Err(e) => OracleReport::errored(id, &e),
    }
}

fn report_abs(id: &str, tol: f64, run: impl FnOnce() -> Result<Deviation>) -> OracleReport {
    match run() {
        Ok(d) => OracleReport::absolute(id, d.abs, tol),
        Err(e) => OracleReport::errored(id, &e),
    }
}

fn report_exact(id: &str, run: impl FnOnce() -> Result<Vec<String>>) -> OracleReport {
    match run() {
        Ok(problems) if problems.is_empty() => OracleReport::exact(id, true, None),
        Ok(problems) => {
            let shown: Vec<String> = problems.iter().take(5).cloned().collect();
            OracleReport::exact(id, false, Some(format!("{} violations: {}", problems.len(), shown.join("; "))))
        }
        Err(e) => OracleReport::errored(id, &e),
    }
}

fn cplx(re: f64) -> Complex<f64> {
    Complex::new(re, 0.0)
}

fn column(n: usize, r: usize) -> Partition {
    Partition::column(n, r)
}

fn binomial(a: u64, b: u64) -> u64 {
    (1..=b).fold(1, |acc, k| acc * (a - b + k) / k)
}

/// `‖[D_r, D_s]‖_F / (‖D_r‖_F ‖D_s‖_F)` over all `r < s`.
pub fn check_commutativity(ns: &[usize], ms: &[u32], grid: &[(f64, f64)]) -> OracleReport {
    report_abs("commutativity", 1e-9, || {
        let mut dev = Deviation::default();
        for &n in ns {
            for &m in ms {
                for &(g, p) in grid {
                    let coeffs = CoeffCache::new(P::level_locked(n, m, g, p)?);
                    let ops: Vec<_> = (1..n).map(|r| build_truncated(r, &coeffs)).collect::<Result<_>>()?;
                    for r in 0..ops.len() {
                        for s in r + 1..ops.len() {
                            let (a, b) = (&ops[r].matrix, &ops[s].matrix);
                            let scale = a.frobenius() * b.frobenius();
                            dev.record_scaled(a.commutator(b).frobenius() / scale.max(f64::MIN_POSITIVE), 1.0);
                        }
                    }
                }
            }
        }
        Ok(dev)
    })
}

fn gauge_deviation(prm: &P, mu: &Partition, nu: &Partition, dev: &mut Deviation) -> Result<()> {
    let coeffs = CoeffCache::new(prm.clone());
    let a = coeffs.psi_prime(mu, nu)? * coeffs.c_norm(mu)?;
    let b = coeffs.hop_b(mu, nu)? * coeffs.c_norm(nu)?;
    dev.record_scaled((a - b).abs(), a.abs().max(b.abs()));
    Ok(())
}

/// `ψ′_{ν/μ} c_μ = B_{ν/μ} c_ν` over all strips from `Λ₀^(n,m)`.
///
/// Level-locked strips leaving the level are skipped there (`c_ν` has a pole
/// exactly where `B` and `ψ′` vanish); the same strips are covered in free mode.
pub fn check_gauge(n: usize, m: u32, grid: &[(f64, f64)]) -> OracleReport {
    report_rel("gauge-identity", 1e-11, || {
        let mut dev = Deviation::default();
        for &(g, p) in grid {
            let locked = P::level_locked(n, m, g, p)?;
            let free = P::free(n, FREE_ALPHA, g, p)?;
            for mu in enumerate_level(n, m) {
                for r in 1..=n {
                    for nu in vertical_strips(&mu, r) {
                        if nu.span() <= m {
                            gauge_deviation(&locked, &mu, &nu, &mut dev)?;
                        }
                        gauge_deviation(&free, &mu, &nu, &mut dev)?;
                    }
                }
            }
        }
        Ok(dev)
    })
}

/// `e_s P_μ = Σ_ν ψ′_{ν/μ} P_ν` coefficientwise, relative to the largest coefficient.
pub fn check_pieri_ring(ns: &[usize], max_weight: u32, grid: &[(f64, f64)]) -> OracleReport {
    report_rel("pieri-ring", 1e-10, || {
        let mut dev = Deviation::default();
        for &n in ns {
            for &(g, p) in grid {
                let table = PolyTable::elliptic(P::free(n, FREE_ALPHA, g, p)?);
                for w in 0..=max_weight {
                    for mu in partitions_of_weight(n, w) {
                        let pm = table.get(&mu)?;
                        for s in 1..=n {
                            let lhs = PolynomialInE::e(n, s).mul(&pm);
                            let mut rhs = PolynomialInE::zero(n);
                            for nu in vertical_strips(&mu, s) {
                                rhs.add_scaled(&*table.get(&nu)?, table.coeffs().psi_prime(&mu, &nu)?);
                            }
                            let mut diff = lhs.clone();
                            diff.add_scaled(&rhs, -1.0);
                            dev.record_scaled(diff.max_abs(), lhs.max_abs());
                        }
                    }
                }
            }
        }
        Ok(dev)
    })
}

/// Leading coefficient exactly 1, all keys of weight `|μ|` and dominated by `μ`.
pub fn check_triangularity(n: usize, max_weight: u32, grid: &[(f64, f64)]) -> OracleReport {
    report_exact("unitriangularity", || {
        let mut problems = Vec::new();
        for &(g, p) in grid {
            let table = PolyTable::elliptic(P::free(n, FREE_ALPHA, g, p)?);
            for w in 0..=max_weight {
                for mu in partitions_of_weight(n, w) {
                    let pm = table.get(&mu)?;
                    if pm.coeff(&mu) != 1.0 {
                        problems.push(format!("P_{mu} leading coefficient {}", pm.coeff(&mu)));
                    }
                    for key in pm.coeffs().keys() {
                        if key.weight() != mu.weight() {
                            problems.push(format!("P_{mu} key {key} has weight {}", key.weight()));
                        } else if !dominance_leq(key, &mu) {
                            problems.push(format!("P_{mu} key {key} not dominated"));
                        }
                    }
                }
            }
        }
        Ok(problems)
    })
}

/// Every LR key lies in the support `λ, μ ⊂ ν`, `|ν| = |λ| + |μ|`; for `μ = 1^r`
/// the key set is exactly the set of vertical strips.
pub fn check_lr_support(n: usize, max_weight: u32, grid: &[(f64, f64)]) -> OracleReport {
    report_exact("lr-vanishing", || {
        let mut problems = Vec::new();
        for &(g, p) in grid {
            let table = PolyTable::elliptic(P::free(n, FREE_ALPHA, g, p)?);
            let labels: Vec<Partition> = (0..=max_weight).flat_map(|w| partitions_of_weight(n, w)).collect();
            for lam in &labels {
                for mu in &labels {
                    let c = lr_coefficients(lam, mu, &table)?;
                    for nu in c.keys() {
                        if !in_lr_support(lam, mu, nu) {
                            problems.push(format!("{lam}·{mu} -> {nu}"));
                        }
                    }
                }
                for r in 1..=n {
                    let keys: Vec<Partition> = lr_coefficients(lam, &column(n, r), &table)?.into_keys().collect();
                    let mut strips = vertical_strips(lam, r);
                    strips.sort();
                    if keys != strips {
                        problems.push(format!("{lam}·1^{r}: keys {keys:?} vs strips {strips:?}"));
                    }
                }
            }
        }
        Ok(problems)
    })
}

/// Number of spectral points against `binomial(n-1+m, m)`.
pub fn check_spectrum_count(ns: &[usize], ms: &[u32], grid: &[(f64, f64)], seed: u64) -> OracleReport {
    report_exact("spectrum-count", || {
        let mut problems = Vec::new();
        for &n in ns {
            for &m in ms {
                for &(g, p) in grid {
                    let spec = joint_spectrum(&P::level_locked(n, m, g, p)?, seed)?;
                    let want = binomial((n - 1) as u64 + m as u64, m as u64) as usize;
                    if spec.points.len() != want || spec.labels.len() != want {
                        problems.push(format!("n={n} m={m} g={g} p={p}: {} points, want {want}", spec.points.len()));
                    }
                }
            }
        }
        Ok(problems)
    })
}

/// `e_{r,ν}(p=0) = q^{-r(|ν|/n + (n-1)g/2)} s_{1^r}(q^{ν_1+(n-1)g}, …, q^{ν_n})`.
pub fn trigonometric_oracle(nu: &Partition, n: usize, alpha: f64, g: f64) -> Vec<Complex<f64>> {
    let q = |a: f64| Complex::from_polar(1.0, alpha * a);
    let x: Vec<Complex<f64>> = (0..n).map(|j| q(nu.parts()[j] as f64 + g * (n - 1 - j) as f64)).collect();
    let shift = nu.weight() as f64 / n as f64 + (n as f64 - 1.0) * g / 2.0;
    (1..=n).map(|r| schur_eval(&column(n, r), &x) * q(-(r as f64) * shift)).collect()
}

/// Labeled `p = 0` spectrum against the closed form.
pub fn check_spectrum_p0(ns: &[usize], ms: &[u32], gs: &[f64], seed: u64) -> OracleReport {
    report_abs("spectrum-p0", 1e-10, || {
        let mut dev = Deviation::default();
        for &n in ns {
            for &m in ms {
                for &g in gs {
                    let prm = P::level_locked(n, m, g, 0.0)?;
                    let spec = joint_spectrum(&prm, seed)?;
                    for pt in &spec.points {
                        let want = trigonometric_oracle(&pt.label, n, prm.alpha(), g);
                        for (a, b) in pt.e.iter().zip(&want) {
                            dev.record_complex(*a, *b);
                        }
                    }
                }
            }
        }
        Ok(dev)
    })
}

/// `|P_μ(e_ν)| / max(1, Σ|u e|)` for every `μ` with `d_μ = m + 1` at every spectral point.
pub fn check_spectral_variety(ns: &[usize], ms: &[u32], grid: &[(f64, f64)], seed: u64) -> OracleReport {
    report_abs("spectral-variety", 1e-7, || {
        let mut dev = Deviation::default();
        for &n in ns {
            for &m in ms {
                for &(g, p) in grid {
                    let prm = P::level_locked(n, m, g, p)?;
                    let spec = joint_spectrum(&prm, seed)?;
                    let table = PolyTable::elliptic(prm);
                    for mu in enumerate_level(n, m + 1).into_iter().filter(|mu| mu.span() == m + 1) {
                        let pm = table.get(&mu)?;
                        for pt in &spec.points {
                            // Floored at 1: where every monomial is tiny the ratio measures nothing.
                            let scale = pm.evaluation_scale(&pt.e).max(1.0);
                            dev.record_scaled(pm.evaluate(&pt.e).norm() / scale, 1.0);
                        }
                    }
                }
            }
        }
        Ok(dev)
    })
}

/// `⟨P_λ, P_μ⟩_Δ̂ = δ_{λμ} / (c_λ² Δ_λ)`.
pub fn check_dual_orthogonality(ns: &[usize], ms: &[u32], grid: &[(f64, f64)], seed: u64) -> OracleReport {
    report_abs("dual-orthogonality", 1e-8, || {
        let mut dev = Deviation::default();
        for &n in ns {
            for &m in ms {
                for &(g, p) in grid {
                    let prm = P::level_locked(n, m, g, p)?;
                    let spec = joint_spectrum(&prm, seed)?;
                    let table = PolyTable::elliptic(prm);
                    dev.record_scaled(dual_orthogonality_check(&spec, &table, table.coeffs())?, 1.0);
                }
            }
        }
        Ok(dev)
    })
}

/// Verlinde sum against projection, `S S⁻¹ = I`, and `|det S|` against its product formula.
pub fn check_verlinde(ns: &[usize], ms: &[u32], grid: &[(f64, f64)], seed: u64) -> Vec<OracleReport> {
    let mut routes = Deviation::default();
    let mut inverse = Deviation::default();
    let mut det = Deviation::default();
    let outcome = (|| -> Result<()> {
        for &n in ns {
            for &m in ms {
                for &(g, p) in grid {
                    let prm = P::level_locked(n, m, g, p)?;
                    let spec = joint_spectrum(&prm, seed)?;
                    let table = PolyTable::elliptic(prm);
                    let v = fusion_table_spectral(&spec, &table, Route::Verlinde)?;
                    let pr = fusion_table_spectral(&spec, &table, Route::Projection)?;
                    routes.record_scaled(v.max_difference(&pr), 1.0);
                    let sm = s_matrix(&spec, &table)?;
                    inverse.record_scaled(sm.identity_defect(), 1.0);
                    let (got, want) = sm.determinant_check();
                    det.record(got, want);
                }
            }
        }
        Ok(())
    })();
    let ids = ["verlinde-vs-projection", "s-inverse", "s-determinant"];
    match outcome {
        Ok(()) => vec![
            OracleReport::absolute(ids[0], routes.abs, 1e-8),
            OracleReport::absolute(ids[1], inverse.abs, 1e-8),
            OracleReport::relative(ids[2], det.abs, det.rel, 1e-6),
        ],
        Err(e) => ids.iter().map(|id| OracleReport::errored(*id, &e)).collect(),
    }
}

/// LR-route against Verlinde-route fusion tables.
pub fn check_route_agreement(ns: &[usize], ms: &[u32], grid: &[(f64, f64)], seed: u64) -> OracleReport {
    report_abs("route-agreement", 1e-7, || {
        let mut dev = Deviation::default();
        for &n in ns {
            for &m in ms {
                for &(g, p) in grid {
                    let prm = P::level_locked(n, m, g, p)?;
                    let lr = fusion_table_lr(&prm)?;
                    let v = fusion_table(&prm, Route::Verlinde, seed)?;
                    dev.record_scaled(lr.max_difference(&v), 1.0);
                }
            }
        }
        Ok(dev)
    })
}

fn rounded(table: &FusionTable<f64>, lam: &Partition, mu: &Partition) -> BTreeMap<Partition, i64> {
    table
        .labels
        .iter()
        .map(|k| (k.clone(), table.get(lam, mu, k).round() as i64))
        .filter(|(_, v)| *v != 0)
        .collect()
}

/// `g = 1` tables: integrality, agreement with classical fusion, nome independence, anchors.
pub fn check_classical_endpoint(ns: &[usize], ms: &[u32], ps: &[f64], seed: u64) -> Vec<OracleReport> {
    let integrality = report_abs("classical-integrality", 1e-5, || {
        let mut dev = Deviation::default();
        for &n in ns {
            for &m in ms {
                for &p in ps {
                    let t = fusion_table(&P::level_locked(n, m, 1.0, p)?, Route::Verlinde, seed)?;
                    for v in t.entries.values() {
                        dev.record_scaled((v - v.round()).abs() + (-v.round()).max(0.0), 1.0);
                    }
                }
            }
        }
        Ok(dev)
    });
    let matches = report_exact("classical-fusion", || {
        let mut problems = Vec::new();
        for &n in ns {
            for &m in ms {
                for &p in ps {
                    let t = fusion_table(&P::level_locked(n, m, 1.0, p)?, Route::Verlinde, seed)?;
                    for lam in &t.labels {
                        for mu in &t.labels {
                            let want = classical_fusion(lam, mu, n, m)?;
                            let got = rounded(&t, lam, mu);
                            if got != want {
                                problems.push(format!("n={n} m={m} p={p}: {lam}×{mu} gives {got:?}, want {want:?}"));
                            }
                        }
                    }
                }
            }
        }
        Ok(problems)
    });
    let nome = report_abs("classical-nome-independence", 1e-9, || {
        let mut dev = Deviation::default();
        for &n in ns {
            for &m in ms {
                let base = fusion_table(&P::level_locked(n, m, 1.0, 0.0)?, Route::Verlinde, seed)?;
                for &p in ps {
                    let t = fusion_table(&P::level_locked(n, m, 1.0, p)?, Route::Verlinde, seed)?;
                    dev.record_scaled(t.max_difference(&base), 1.0);
                }
            }
        }
        Ok(dev)
    });
    let anchors = report_exact("classical-anchors", || {
        let mut problems = Vec::new();
        let phi = Partition::new(vec![1, 0])?;
        let t1 = fusion_table(&P::level_locked(2, 1, 1.0, 0.0)?, Route::Verlinde, seed)?;
        let got = rounded(&t1, &phi, &phi);
        if got != BTreeMap::from([(Partition::zero(2), 1)]) {
            problems.push(format!("su(2)_1 φ×φ = {got:?}"));
        }
        let t2 = fusion_table(&P::level_locked(2, 2, 1.0, 0.0)?, Route::Verlinde, seed)?;
        let got = rounded(&t2, &phi, &phi);
        if got != BTreeMap::from([(Partition::zero(2), 1), (Partition::new(vec![2, 0])?, 1)]) {
            problems.push(format!("su(2)_2 (1,0)×(1,0) = {got:?}"));
        }
        Ok(problems)
    });
    vec![integrality, matches, nome, anchors]
}

fn refined_pieri_deviation(table: &FusionTable<f64>, prm: &P, dev: &mut Deviation) -> Result<()> {
    let n = prm.n();
    for lam in &table.labels {
        for r in 1..n {
            let col = column(n, r);
            let mut want: BTreeMap<Partition, f64> = BTreeMap::new();
            for nu in vertical_strips(lam, r) {
                if nu.span() <= prm.m() {
                    want.insert(underline(&nu), macdonald_pieri_p0(lam, &nu, prm.alpha(), prm.g())?);
                }
            }
            for kappa in &table.labels {
                let w = want.get(kappa).copied().unwrap_or(0.0);
                let got = table.get(lam, &col, kappa);
                dev.record_scaled((got - w).abs(), w.abs().max(1.0));
            }
        }
    }
    Ok(())
}

/// `N^κ_{λ,1^r}` at `p = 0` by the given route against the trigonometric Pieri products.
pub fn check_refined_pieri(ns: &[usize], ms: &[u32], gs: &[f64], route: Route, seed: u64) -> OracleReport {
    let (id, tol) = match route {
        Route::Lr => ("refined-pieri", 1e-12),
        _ => ("refined-pieri-verlinde", 1e-8),
    };
    report_abs(id, tol, || {
        let mut dev = Deviation::default();
        for &n in ns {
            for &m in ms {
                for &g in gs {
                    let prm = P::level_locked(n, m, g, 0.0)?;
                    let table = fusion_table(&prm, route, seed)?;
                    refined_pieri_deviation(&table, &prm, &mut dev)?;
                }
            }
        }
        Ok(dev)
    })
}

/// S-matrix at `(g, p) = (1, 0)` against the classical S-matrix, the gauge
/// relation `S(1;p) c(p) = S(1;0) c(0)` at `p ≠ 0`, and the normalization `Σ Δ`.
pub fn check_kac_peterson(ns: &[usize], ms: &[u32], ps: &[f64], seed: u64) -> Vec<OracleReport> {
    let entries = report_abs("kac-peterson", 1e-8, || {
        let mut dev = Deviation::default();
        for &n in ns {
            for &m in ms {
                let (labels, want) = kac_peterson_s(n, m);
                for &p in ps {
                    let prm = P::level_locked(n, m, 1.0, p)?;
                    let spec = joint_spectrum(&prm, seed)?;
                    let table = PolyTable::elliptic(prm.clone());
                    let sm = s_matrix(&spec, &table)?;
                    if sm.labels != labels {
                        return Err(Error::InvalidParams("label order differs from the oracle".into()));
                    }
                    let at0 = CoeffCache::new(prm.with_p(0.0)?);
                    for j in 0..labels.len() {
                        let gauge = sm.c[j] / at0.c_norm(&labels[j])?;
                        for i in 0..labels.len() {
                            dev.record_complex(sm.s[(i, j)] * gauge, want[(i, j)]);
                        }
                    }
                }
            }
        }
        Ok(dev)
    });
    let norm = report_rel("normalization-n", 1e-8, || {
        let mut dev = Deviation::default();
        for &n in ns {
            for &m in ms {
                let spec = joint_spectrum(&P::level_locked(n, m, 1.0, 0.0)?, seed)?;
                let got: f64 = spec.delta.iter().sum();
                dev.record(got, classical_normalization(n, m)?);
            }
        }
        Ok(dev)
    });
    vec![entries, norm]
}

/// S-matrix at `p = 0` and generic `g` against
/// `q^{-|λ||ν|/n - (n-1)(|λ|+|ν|)g/2} P_λ(q^{ν_j+(n-j)g}) P_ν(q^{(n-j)g})`, with the
/// Macdonald polynomials generated from the trigonometric Pieri weights.
pub fn check_refined_s(ns: &[usize], ms: &[u32], gs: &[f64], seed: u64) -> OracleReport {
    report_abs("refined-s-matrix", 1e-8, || {
        let mut dev = Deviation::default();
        for &n in ns {
            for &m in ms {
                for &g in gs {
                    let prm = P::level_locked(n, m, g, 0.0)?;
                    let spec = joint_spectrum(&prm, seed)?;
                    let sm = s_matrix(&spec, &PolyTable::elliptic(prm.clone()))?;
                    let oracle = PolyTable::new(n, MacdonaldPieri { alpha: prm.alpha(), g });
                    let point = |nu: &Partition| -> Vec<Complex<f64>> {
                        (0..n).map(|j| prm.q_pow(nu.parts()[j] as f64 + g * (n - 1 - j) as f64)).collect()
                    };
                    let rho = point(&Partition::zero(n));
                    for (i, lam) in sm.labels.iter().enumerate() {
                        for (j, nu) in sm.labels.iter().enumerate() {
                            let (a, b) = (lam.weight() as f64, nu.weight() as f64);
                            let phase = prm.q_pow(-a * b / n as f64 - (n as f64 - 1.0) * (a + b) * g / 2.0);
                            let want = phase
                                * evaluate_r(&*oracle.get(lam)?, &point(nu))?
                                * evaluate_r(&*oracle.get(nu)?, &rho)?;
                            dev.record_complex(sm.s[(i, j)], want);
                        }
                    }
                }
            }
        }
        Ok(dev)
    })
}

fn random_points(n: usize, count: usize, seed: u64) -> Vec<Vec<Complex<f64>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..n)
                .map(|_| Complex::from_polar(rng.gen_range(0.5..1.5), rng.gen_range(0.0..2.0 * PI)))
                .collect()
        })
        .collect()
}

/// `R_μ(x)` at `g → 1` by symmetric extrapolation against `s_μ(x)`.
pub fn check_schur_limit(ns: &[usize], max_weight: u32, ps: &[f64], seed: u64) -> OracleReport {
    report_rel("schur-limit", 1e-4, || {
        let mut dev = Deviation::default();
        for &n in ns {
            let points = random_points(n, 2, seed);
            for &p in ps {
                let at_one = P::free_unchecked(n, FREE_ALPHA, 1.0, p)?;
                for w in 0..=max_weight {
                    for mu in partitions_of_weight(n, w) {
                        let lv = limit_map(&at_one, |prm| {
                            let table = PolyTable::elliptic(prm.clone());
                            let mut out = BTreeMap::new();
                            for (i, x) in points.iter().enumerate() {
                                let v = table.evaluate_r(&mu, x)?;
                                out.insert((i, 0), v.re);
                                out.insert((i, 1), v.im);
                            }
                            Ok(out)
                        })?;
                        for (i, x) in points.iter().enumerate() {
                            let got = Complex::new(lv.values[&(i, 0)], lv.values[&(i, 1)]);
                            let want = schur_eval(&mu, x);
                            dev.record_scaled((got - want).norm(), want.norm().max(1.0));
                        }
                    }
                }
            }
        }
        Ok(dev)
    })
}

/// Elliptic `ψ′` at `p = 0` against the trigonometric product, all strips with `|λ| ≤ max_weight`.
pub fn check_macdonald_pieri(ns: &[usize], max_weight: u32, gs: &[f64]) -> OracleReport {
    report_rel("macdonald-pieri", 1e-12, || {
        let mut dev = Deviation::default();
        for &n in ns {
            for &g in gs {
                let prm = P::free(n, FREE_ALPHA, g, 0.0)?;
                for w in 0..=max_weight {
                    for lam in partitions_of_weight(n, w) {
                        for r in 1..=n {
                            for nu in vertical_strips(&lam, r) {
                                let got = psi_prime(&lam, &nu, &prm)?;
                                let want = macdonald_pieri_p0(&lam, &nu, FREE_ALPHA, g)?;
                                dev.record_scaled((got - want).abs(), want.abs().max(f64::MIN_POSITIVE));
                            }
                        }
                    }
                }
            }
        }
        Ok(dev)
    })
}

/// `q^{-|ν|(n-1)g/2} P_ν(q^{(n-1)g}, …, 1)` at `p = 0` against the principal specialization product and `1/c_ν`.
pub fn check_principal_specialization(ns: &[usize], max_weight: u32, gs: &[f64]) -> OracleReport {
    report_rel("principal-specialization", 1e-9, || {
        let mut dev = Deviation::default();
        for &n in ns {
            for &g in gs {
                let prm = P::free(n, FREE_ALPHA, g, 0.0)?;
                let table: EllipticTable<f64> = PolyTable::elliptic(prm.clone());
                let x: Vec<Complex<f64>> = (0..n).map(|j| prm.q_pow(g * (n - 1 - j) as f64)).collect();
                for w in 0..=max_weight {
                    for nu in partitions_of_weight(n, w) {
                        let phase = prm.q_pow(-(nu.weight() as f64) * (n as f64 - 1.0) * g / 2.0);
                        let got = table.evaluate_r(&nu, &x)? * phase;
                        let want = principal_specialization(&nu, FREE_ALPHA, g)?;
                        dev.record_complex(got, cplx(want));
                        dev.record(1.0 / table.coeffs().c_norm(&nu)?, want);
                    }
                }
            }
        }
        Ok(dev)
    })
}

/// Elliptic LR coefficients at `p = 0` against products of Macdonald polynomials
/// generated from the trigonometric Pieri weights.
pub fn check_lr_macdonald(ns: &[usize], max_weight: u32, gs: &[f64]) -> OracleReport {
    report_abs("lr-macdonald", 1e-9, || {
        let mut dev = Deviation::default();
        for &n in ns {
            for &g in gs {
                let elliptic = PolyTable::elliptic(P::free(n, FREE_ALPHA, g, 0.0)?);
                let oracle = PolyTable::new(n, MacdonaldPieri { alpha: FREE_ALPHA, g });
                let labels: Vec<Partition> = (0..=max_weight).flat_map(|w| partitions_of_weight(n, w)).collect();
                for lam in &labels {
                    for mu in &labels {
                        let a = lr_coefficients(lam, mu, &elliptic)?;
                        let b = lr_coefficients(lam, mu, &oracle)?;
                        for key in a.keys().chain(b.keys()) {
                            let x = a.get(key).copied().unwrap_or(0.0);
                            let y = b.get(key).copied().unwrap_or(0.0);
                            dev.record_scaled((x - y).abs(), y.abs().max(1.0));
                        }
                    }
                }
            }
        }
        Ok(dev)
    })
}

/// `ψ′` at `p = 0` read off the hop coefficients and `c`, compared with the product formula.
pub fn check_hop_degeneration(ns: &[usize], ms: &[u32], gs: &[f64]) -> OracleReport {
    report_rel("hop-degeneration", 1e-11, || {
        let mut dev = Deviation::default();
        for &n in ns {
            for &m in ms {
                for &g in gs {
                    let prm = P::level_locked(n, m, g, 0.0)?;
                    let coeffs = CoeffCache::new(prm.clone());
                    for lam in enumerate_level(n, m) {
                        for r in 1..n {
                            for nu in vertical_strips(&lam, r).into_iter().filter(|nu| nu.span() <= m) {
                                let got = hop_b(&lam, &nu, &prm)? * coeffs.c_norm(&nu)? / coeffs.c_norm(&lam)?;
                                let want = macdonald_pieri_p0(&lam, &nu, prm.alpha(), g)?;
                                dev.record(got, want);
                            }
                        }
                    }
                }
            }
        }
        Ok(dev)
    })
}

/// Degenerations to the trigonometric and classical endpoints.
pub fn limit_suite(cfg: &VerifyConfig) -> Vec<OracleReport> {
    let (ns, ms, seed) = (&cfg.ns[..], &cfg.ms[..], cfg.seed);
    let mut out = vec![
        check_schur_limit(ns, 3, &[0.0, 0.4], seed),
        check_macdonald_pieri(ns, 4, &[0.7, 1.3]),
        check_principal_specialization(ns, 4, &[0.7, 1.3]),
        check_hop_degeneration(ns, ms, &[0.7, 1.3]),
        check_spectrum_p0(ns, ms, &[0.7, 1.0, 1.3], seed),
        check_refined_pieri(ns, ms, &[0.7, 1.3], Route::Lr, seed),
        check_refined_pieri(ns, ms, &[0.7, 1.3], Route::Verlinde, seed),
    ];
    out.extend(check_classical_endpoint(ns, ms, &[0.0, 0.5], seed));
    out.extend(check_kac_peterson(ns, ms, &[0.0, 0.4], seed));
    out.push(check_refined_s(ns, ms, &[0.7, 1.3], seed));
    out
}

/// Polynomial ring, LR expansion and fusion ring properties.
pub fn ring_suite(cfg: &VerifyConfig) -> Vec<OracleReport> {
    let (ns, ms, seed) = (&cfg.ns[..], &cfg.ms[..], cfg.seed);
    let top_n = ns.iter().copied().max().unwrap_or(2);
    let top_m = ms.iter().copied().max().unwrap_or(1);
    let mut out = vec![
        check_gauge(top_n, top_m, &WIDE_GRID),
        check_pieri_ring(ns, 4, &GENERIC_GRID),
        check_triangularity(top_n, 5, &GENERIC_GRID),
        check_lr_support(top_n, 3, &GENERIC_GRID[..2]),
        check_lr_macdonald(ns, 3, &[0.7]),
        check_route_agreement(ns, ms, &GENERIC_GRID, seed),
    ];
    out.extend(check_verlinde(ns, ms, &GENERIC_GRID, seed));
    out
}

/// Truncated operators and their joint spectrum.
pub fn spectrum_suite(cfg: &VerifyConfig) -> Vec<OracleReport> {
    let (ns, ms, seed) = (&cfg.ns[..], &cfg.ms[..], cfg.seed);
    vec![
        check_commutativity(ns, ms, &WIDE_GRID),
        check_spectrum_count(ns, ms, &GENERIC_GRID, seed),
        check_spectrum_p0(ns, ms, &[0.7, 1.0, 1.3], seed),
        check_spectral_variety(ns, ms, &GENERIC_GRID, seed),
        check_dual_orthogonality(ns, ms, &GENERIC_GRID, seed),
    ]
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Vec<OracleReport> {
    match suite {
        Suite::Limits => limit_suite(cfg),
        Suite::Ring => ring_suite(cfg),
        Suite::Spectrum => spectrum_suite(cfg),
        Suite::All => {
            let mut out = spectrum_suite(cfg);
            out.extend(ring_suite(cfg));
            out.extend(limit_suite(cfg));
            out
        }
    }
}
