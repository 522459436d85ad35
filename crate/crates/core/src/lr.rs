//! Products in the `P`-basis and the elliptic Littlewood–Richardson coefficients
//! `P_λ P_μ = Σ_ν c^ν_{λμ} P_ν`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::poly::{PieriSource, PolyTable, PolynomialInE};
use crate::scalar::Scalar;

/// Keys whose magnitude falls below this fraction of the input's largest
/// coefficient are dropped during peeling.
pub const PEEL_DROP_REL: f64 = 1e-12;
/// Largest tolerated dropped mass, relative to the input's largest coefficient.
pub const PEEL_RESIDUAL_REL: f64 = 1e-9;

const MAX_PEEL_STEPS: usize = 1_000_000;

/// Product of two polynomials in `e` (exponent keys add).
pub fn multiply_monomial<T: Scalar>(a: &PolynomialInE<T>, b: &PolynomialInE<T>) -> PolynomialInE<T> {
    a.mul(b)
}

/// Highest remaining key: largest weight, then lexicographically largest parts.
/// Lexicographic order refines dominance, so this key is dominance-maximal.
fn top_key<T>(work: &BTreeMap<Partition, T>) -> Option<Partition> {
    work.keys()
        .max_by(|a, b| a.weight().cmp(&b.weight()).then_with(|| a.parts().cmp(b.parts())))
        .cloned()
}

/// Coordinates of `f` in the `P`-basis by repeatedly peeling off the top key.
pub fn expand_in_p<T: Scalar, S: PieriSource<T>>(
    f: &PolynomialInE<T>,
    table: &PolyTable<T, S>,
) -> Result<BTreeMap<Partition, T>> {
    let mut out = BTreeMap::new();
    let scale = f.max_abs();
    if scale == T::zero() {
        return Ok(out);
    }
    let drop = scale * T::lit(PEEL_DROP_REL);
    let mut residual = T::zero();
    let mut work: BTreeMap<Partition, T> = f.coeffs().clone();
    let mut steps = 0;
    while let Some(kappa) = top_key(&work) {
        steps += 1;
        if steps > MAX_PEEL_STEPS {
            return Err(Error::NonTerminating(format!("{} keys left after {MAX_PEEL_STEPS} steps", work.len())));
        }
        let c = work.remove(&kappa).unwrap();
        if c.abs() <= drop {
            residual = residual.max(c.abs());
            continue;
        }
        if !c.is_finite() {
            return Err(Error::NonFinite(format!("basis expansion at {kappa}")));
        }
        let p = table.get(&kappa)?;
        for (key, u) in p.coeffs() {
            if *key == kappa {
                continue;
            }
            let slot = work.entry(key.clone()).or_insert_with(T::zero);
            *slot = *slot - c * *u;
        }
        out.insert(kappa, c);
    }
    if residual > scale * T::lit(PEEL_RESIDUAL_REL) {
        return Err(Error::NonTerminating(format!(
            "dropped residual {residual} exceeds tolerance against scale {scale}"
        )));
    }
    Ok(out)
}

/// `c^ν_{λμ}` for all `ν`, from `P_λ P_μ` expanded in the `P`-basis.
pub fn lr_coefficients<T: Scalar, S: PieriSource<T>>(
    lam: &Partition,
    mu: &Partition,
    table: &PolyTable<T, S>,
) -> Result<BTreeMap<Partition, T>> {
    let prod = multiply_monomial(&*table.get(lam)?, &*table.get(mu)?);
    expand_in_p(&prod, table)
}

/// `λ ⊂ ν`, `μ ⊂ ν` and `|ν| = |λ| + |μ|`.
pub fn in_lr_support(lam: &Partition, mu: &Partition, nu: &Partition) -> bool {
    lam.is_contained_in(nu) && mu.is_contained_in(nu) && nu.weight() == lam.weight() + mu.weight()
}

/// Memoized LR coefficients for one parameter set.
#[derive(Clone, Debug, Default)]
pub struct LrTable<T> {
    pub fingerprint: u64,
    pub entries: BTreeMap<(Partition, Partition, Partition), T>,
}

impl<T: Scalar> LrTable<T> {
    /// Fills the table for every ordered pair drawn from `labels`.
    pub fn build<S: PieriSource<T>>(
        labels: &[Partition],
        table: &PolyTable<T, S>,
        fingerprint: u64,
    ) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for lam in labels {
            for mu in labels {
                for (nu, v) in lr_coefficients(lam, mu, table)? {
                    entries.insert((lam.clone(), mu.clone(), nu), v);
                }
            }
        }
        Ok(LrTable { fingerprint, entries })
    }

    pub fn get(&self, lam: &Partition, mu: &Partition, nu: &Partition) -> T {
        self.entries
            .get(&(lam.clone(), mu.clone(), nu.clone()))
            .copied()
            .unwrap_or_else(T::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::ModelParams;
    use crate::partition::{partitions_of_weight, vertical_strips};

    type P = ModelParams<f64>;

    fn pt(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn table(n: usize) -> PolyTable<f64, crate::coeffs::CoeffCache<f64>> {
        PolyTable::elliptic(P::free(n, 1.07, 0.58, 0.27).unwrap())
    }

    #[test]
    fn multiply_examples() {
        let one = PolynomialInE::<f64>::one(2);
        let q = PolynomialInE::from_terms(2, [(pt(&[2, 0]), 1.5), (pt(&[1, 1]), -0.5)]);
        assert_eq!(multiply_monomial(&one, &q), q);
        let e1 = PolynomialInE::<f64>::e(2, 1);
        assert_eq!(multiply_monomial(&e1, &e1), PolynomialInE::monomial(pt(&[2, 0]), 1.0));
        let e2 = PolynomialInE::<f64>::e(2, 2);
        assert_eq!(multiply_monomial(&e1, &e2), PolynomialInE::monomial(pt(&[2, 1]), 1.0));
    }

    #[test]
    fn expand_examples() {
        let t = table(2);
        assert!(expand_in_p(&PolynomialInE::zero(2), &t).unwrap().is_empty());
        let p = t.get(&pt(&[3, 1])).unwrap();
        let ex = expand_in_p(&p, &t).unwrap();
        assert_eq!(ex.len(), 1);
        assert_eq!(ex[&pt(&[3, 1])], 1.0);
        let sq = PolynomialInE::monomial(pt(&[2, 0]), 1.0);
        let ex = expand_in_p(&sq, &t).unwrap();
        let psi = t.pieri(&pt(&[1, 0]), &pt(&[1, 1])).unwrap();
        assert_eq!(ex.len(), 2);
        assert!((ex[&pt(&[2, 0])] - 1.0).abs() < 1e-15);
        assert!((ex[&pt(&[1, 1])] - psi).abs() < 1e-14);
    }

    #[test]
    fn unit_and_pieri() {
        let t = table(3);
        let zero = pt(&[0, 0, 0]);
        let mu = pt(&[2, 1, 0]);
        let ex = lr_coefficients(&zero, &mu, &t).unwrap();
        assert_eq!(ex.len(), 1);
        assert!((ex[&mu] - 1.0).abs() < 1e-14);
        for r in 1..=3 {
            let col = Partition::column(3, r);
            let ex = lr_coefficients(&mu, &col, &t).unwrap();
            let strips = vertical_strips(&mu, r);
            assert_eq!(ex.len(), strips.len());
            for nu in strips {
                let psi = t.pieri(&mu, &nu).unwrap();
                assert!((ex[&nu] - psi).abs() < 1e-12 * psi.abs().max(1.0));
            }
        }
    }

    #[test]
    fn unit_coupling_is_classical() {
        let t = PolyTable::elliptic(P::free(3, 2.399827, 1.0, 0.4).unwrap());
        let ex = lr_coefficients(&pt(&[1, 0, 0]), &pt(&[1, 1, 0]), &t).unwrap();
        assert_eq!(ex.len(), 2);
        assert!((ex[&pt(&[2, 1, 0])] - 1.0).abs() < 1e-10);
        assert!((ex[&pt(&[1, 1, 1])] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn support_and_commutativity() {
        let t = table(3);
        let labels: Vec<Partition> = (0..=3).flat_map(|w| partitions_of_weight(3, w)).collect();
        for lam in &labels {
            for mu in &labels {
                let a = lr_coefficients(lam, mu, &t).unwrap();
                let b = lr_coefficients(mu, lam, &t).unwrap();
                for nu in a.keys() {
                    assert!(in_lr_support(lam, mu, nu), "{lam}·{mu} -> {nu}");
                }
                assert_eq!(a.len(), b.len());
                for (nu, v) in &a {
                    assert!((v - b[nu]).abs() < 1e-10 * v.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn associativity_sample() {
        let t = table(3);
        let (l, m, s) = (pt(&[1, 0, 0]), pt(&[2, 1, 0]), pt(&[1, 1, 0]));
        let left = {
            let mut acc: BTreeMap<Partition, f64> = BTreeMap::new();
            for (k, c1) in lr_coefficients(&l, &m, &t).unwrap() {
                for (nu, c2) in lr_coefficients(&k, &s, &t).unwrap() {
                    *acc.entry(nu).or_default() += c1 * c2;
                }
            }
            acc
        };
        let right = {
            let mut acc: BTreeMap<Partition, f64> = BTreeMap::new();
            for (k, c1) in lr_coefficients(&m, &s, &t).unwrap() {
                for (nu, c2) in lr_coefficients(&l, &k, &t).unwrap() {
                    *acc.entry(nu).or_default() += c1 * c2;
                }
            }
            acc
        };
        for nu in left.keys().chain(right.keys()) {
            let a = left.get(nu).copied().unwrap_or(0.0);
            let b = right.get(nu).copied().unwrap_or(0.0);
            assert!((a - b).abs() < 1e-9 * a.abs().max(1.0));
        }
    }

    #[test]
    fn lr_table_lookup() {
        let t = table(2);
        let labels = vec![pt(&[0, 0]), pt(&[1, 0])];
        let lr = LrTable::build(&labels, &t, 7).unwrap();
        assert_eq!(lr.get(&pt(&[0, 0]), &pt(&[1, 0]), &pt(&[1, 0])), 1.0);
        assert_eq!(lr.get(&pt(&[1, 0]), &pt(&[1, 0]), &pt(&[0, 0])), 0.0);
        assert!(lr.get(&pt(&[1, 0]), &pt(&[1, 0]), &pt(&[1, 1])) > 0.0);
    }
}
