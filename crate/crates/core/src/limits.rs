//! Values at non-generic couplings obtained as limits `g' → g`.
//!
//! Each quantity is sampled symmetrically at `g ± δ` for two step sizes; the
//! even error term is removed by Richardson extrapolation in `δ²`.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::kernel::ModelParams;
use crate::scalar::Scalar;

/// Step sizes of the symmetric samples.
pub const LIMIT_STEPS: [f64; 2] = [1e-5, 1e-6];
/// Entries whose two estimates differ by more than this are flagged.
pub const LIMIT_FLAG_TOL: f64 = 1e-4;

/// Extrapolated map with the keys whose estimates disagreed.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitValue<K: Ord, T> {
    pub values: BTreeMap<K, T>,
    pub flagged: Vec<K>,
}

fn symmetric_estimate<K, T, F>(prm: &ModelParams<T>, delta: T, f: &F) -> Result<BTreeMap<K, T>>
where
    K: Ord + Clone,
    T: Scalar,
    F: Fn(&ModelParams<T>) -> Result<BTreeMap<K, T>>,
{
    let g = prm.g();
    let up = f(&prm.with_g(g + delta)?)?;
    let down = f(&prm.with_g(g - delta)?)?;
    let mut out: BTreeMap<K, T> = BTreeMap::new();
    let half = T::lit(0.5);
    for (k, v) in up.into_iter().chain(down) {
        let slot = out.entry(k).or_insert_with(T::zero);
        *slot = *slot + v * half;
    }
    Ok(out)
}

/// `lim_{g'→g} f(g')` for a map-valued `f`, with level-locked `α` following `g'`.
pub fn limit_map<K, T, F>(prm: &ModelParams<T>, f: F) -> Result<LimitValue<K, T>>
where
    K: Ord + Clone,
    T: Scalar,
    F: Fn(&ModelParams<T>) -> Result<BTreeMap<K, T>>,
{
    let [d1, d2] = LIMIT_STEPS.map(T::lit);
    let e1 = symmetric_estimate(prm, d1, &f)?;
    let e2 = symmetric_estimate(prm, d2, &f)?;
    let (w1, w2) = (d1 * d1, d2 * d2);
    let mut values = BTreeMap::new();
    let mut flagged = Vec::new();
    let keys: std::collections::BTreeSet<K> = e1.keys().chain(e2.keys()).cloned().collect();
    for k in keys {
        let a = e1.get(&k).copied().unwrap_or_else(T::zero);
        let b = e2.get(&k).copied().unwrap_or_else(T::zero);
        if (a - b).abs() > T::lit(LIMIT_FLAG_TOL) {
            flagged.push(k.clone());
        }
        values.insert(k, (w1 * b - w2 * a) / (w1 - w2));
    }
    Ok(LimitValue { values, flagged })
}

/// Scalar version of [`limit_map`].
pub fn limit_scalar<T, F>(prm: &ModelParams<T>, f: F) -> Result<(T, bool)>
where
    T: Scalar,
    F: Fn(&ModelParams<T>) -> Result<T>,
{
    let lv = limit_map(prm, |p| Ok(BTreeMap::from([((), f(p)?)])))?;
    Ok((lv.values[&()], !lv.flagged.is_empty()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_smooth_function_at_removable_point() {
        // sin(π(g-1)) / (g-1) has a removable singularity at g = 1 with value π.
        let prm = ModelParams::<f64>::free_unchecked(2, 1.0, 1.0, 0.0).unwrap();
        let (v, flagged) = limit_scalar(&prm, |p| {
            let x = p.g() - 1.0;
            Ok((std::f64::consts::PI * x).sin() / x)
        })
        .unwrap();
        assert!(!flagged);
        assert!((v - std::f64::consts::PI).abs() < 1e-9);
    }

    #[test]
    fn flags_divergent_entries() {
        let prm = ModelParams::<f64>::free_unchecked(2, 1.0, 1.0, 0.0).unwrap();
        let lv = limit_map(&prm, |p| {
            let x = p.g() - 1.0;
            Ok(BTreeMap::from([(0, 1.0 + x), (1, 1.0 / (x * x))]))
        })
        .unwrap();
        assert_eq!(lv.flagged, vec![1]);
        assert!((lv.values[&0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn level_locked_alpha_follows_coupling() {
        let prm = ModelParams::<f64>::level_locked(2, 1, 1.0, 0.0).unwrap();
        let (v, _) = limit_scalar(&prm, |p| Ok(p.alpha())).unwrap();
        assert!((v - prm.alpha()).abs() < 1e-9);
    }
}
