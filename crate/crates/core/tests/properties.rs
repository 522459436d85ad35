use proptest::prelude::*;
use ruijsenaars_fusion::lattice::joint_spectrum;
use ruijsenaars_fusion::lr::lr_coefficients;
use ruijsenaars_fusion::partition::{partitions_of_weight, vertical_strips};
use ruijsenaars_fusion::{CoeffCache, ModelParams, Params, Partition, PolyTable};

fn arb_partition(n: usize, top: u32) -> impl Strategy<Value = Partition> {
    proptest::collection::vec(0..=top, n).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(v).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bracket_is_odd_and_antiperiodic(z in -5.0f64..5.0, alpha in 0.3f64..2.0, p in -0.9f64..0.9) {
        let prm = Params::free_unchecked(2, alpha, 0.5, p).unwrap();
        let b = prm.bracket(z);
        prop_assert!((prm.bracket(-z) + b).abs() <= 1e-12 * b.abs().max(1.0));
        let shifted = prm.bracket(z + prm.period());
        prop_assert!((shifted + b).abs() <= 1e-10 * b.abs().max(1.0));
    }

    #[test]
    fn e_exponents_round_trip(mu in arb_partition(4, 7)) {
        prop_assert_eq!(Partition::from_e_exponents(&mu.e_exponents()), mu.clone());
        prop_assert_eq!(mu.add_column(4).remove_column(4), Some(mu));
    }

    #[test]
    fn gauge_identity_holds_off_grid(
        mu in arb_partition(3, 4),
        r in 1usize..=3,
        g in 0.2f64..2.0,
        p in -0.6f64..0.6,
    ) {
        let prm = Params::free(3, 1.1, g, p);
        prop_assume!(prm.is_ok());
        let coeffs = CoeffCache::new(prm.unwrap());
        for nu in vertical_strips(&mu, r) {
            let a = coeffs.psi_prime(&mu, &nu).unwrap() * coeffs.c_norm(&mu).unwrap();
            let b = coeffs.hop_b(&mu, &nu).unwrap() * coeffs.c_norm(&nu).unwrap();
            prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(b.abs()));
        }
    }

    #[test]
    fn lr_coefficients_commute(g in 0.3f64..1.8, p in -0.5f64..0.5, i in 0usize..6, j in 0usize..6) {
        let prm = Params::free(2, 1.1, g, p);
        prop_assume!(prm.is_ok());
        let table = PolyTable::elliptic(prm.unwrap());
        let labels: Vec<Partition> = (0..=3).flat_map(|w| partitions_of_weight(2, w)).collect();
        let (lam, mu) = (&labels[i], &labels[j]);
        let a = lr_coefficients(lam, mu, &table).unwrap();
        let b = lr_coefficients(mu, lam, &table).unwrap();
        prop_assert_eq!(a.len(), b.len());
        for (nu, v) in &a {
            prop_assert!((v - b[nu]).abs() <= 1e-9 * v.abs().max(1.0));
        }
    }

    #[test]
    fn spectrum_does_not_depend_on_seed(seed in any::<u64>(), g in 0.4f64..1.6) {
        let prm = Params::level_locked(3, 2, g, 0.3).unwrap();
        let a = joint_spectrum(&prm, seed).unwrap();
        let b = joint_spectrum(&prm, seed.wrapping_add(1)).unwrap();
        prop_assert_eq!(&a.labels, &b.labels);
        for (x, y) in a.points.iter().zip(&b.points) {
            for (u, v) in x.e.iter().zip(&y.e) {
                prop_assert!((u - v).norm() < 1e-9);
            }
        }
    }
}

#[test]
fn single_precision_tracks_double() {
    let lo = ModelParams::<f32>::level_locked(3, 2, 0.7, 0.4).unwrap();
    let hi = Params::level_locked(3, 2, 0.7, 0.4).unwrap();
    let (c32, c64) = (CoeffCache::new(lo), CoeffCache::new(hi));
    for mu in ruijsenaars_fusion::enumerate_level(3, 2) {
        for nu in vertical_strips(&mu, 1).into_iter().filter(|nu| nu.span() <= 2) {
            let a = c32.psi_prime(&mu, &nu).unwrap() as f64;
            let b = c64.psi_prime(&mu, &nu).unwrap();
            assert!((a - b).abs() < 1e-5 * b.abs().max(1.0), "{mu} -> {nu}: {a} vs {b}");
        }
    }
    let s32 = joint_spectrum(&ModelParams::<f32>::level_locked(2, 2, 0.7, 0.4).unwrap(), 1).unwrap();
    let s64 = joint_spectrum(&Params::level_locked(2, 2, 0.7, 0.4).unwrap(), 1).unwrap();
    for (x, y) in s32.points.iter().zip(&s64.points) {
        assert_eq!(x.label, y.label);
        assert!((x.e[0].re as f64 - y.e[0].re).abs() < 1e-4);
    }
}

#[test]
fn spectrum_is_deterministic_for_a_seed() {
    let prm = Params::level_locked(3, 2, 1.3, -0.4).unwrap();
    let a = joint_spectrum(&prm, 42).unwrap();
    let b = joint_spectrum(&prm, 42).unwrap();
    assert_eq!(a.steps, b.steps);
    for (x, y) in a.points.iter().zip(&b.points) {
        assert_eq!(x.e, y.e);
        assert_eq!(x.dual_norm, y.dual_norm);
    }
}
