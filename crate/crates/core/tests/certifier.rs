mod common;

use common::{random_network, random_reversible_network, rng, select_rows, stoichiometric_matrix, svd_rank};
use crn_core::certify::{
    check_discrete, check_empty_all_classes, is_extreme_point, negative_direction, separating_conservation_law,
    verify_kernel_witness, EmptinessCheck,
};
use crn_core::linalg::{combine, dot, int_to_rational, rational, Rational};
use crn_core::siphon::all_semi_locking_sets;
use crn_core::structure::stoichiometric_basis;
use crn_core::{certify, SpeciesSet};
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn kernel_test_matches_svd(seed in any::<u64>()) {
        let net = random_network(&mut rng(seed), 6, 8);
        let basis = stoichiometric_basis(&net);
        let n = stoichiometric_matrix(&net);
        let full = svd_rank(&n, 1e-9);
        for w in all_semi_locking_sets(&net).unwrap() {
            let rows: Vec<usize> = w.members().collect();
            let restricted = svd_rank(&select_rows(&n, &rows), 1e-9);
            let d = check_discrete(&basis, w);
            prop_assert_eq!(d.discrete, restricted == full);
            match d.witness {
                Some(z) => prop_assert!(verify_kernel_witness(&basis, w, &z)),
                None => prop_assert!(d.discrete),
            }
        }
    }

    #[test]
    fn farkas_alternatives_are_exclusive(seed in any::<u64>()) {
        let net = random_network(&mut rng(seed), 6, 8);
        let basis = stoichiometric_basis(&net);
        let vecs = basis.rational_vectors();
        for mask in 1u64..1 << net.species_count() {
            let w = SpeciesSet::from_mask(mask);
            let primal = negative_direction(&basis, w);
            let dual = separating_conservation_law(&basis, w);
            prop_assert!(primal.is_some() != dual.is_some(), "{:?}", w.names(&net));
            if let Some(s) = primal {
                prop_assert!(basis.contains(&s));
                prop_assert!(w.members().all(|i| s[i] <= rational(-1)));
            }
            if let Some(l) = dual {
                prop_assert!(l.iter().all(|x| !x.is_negative()));
                prop_assert!((0..l.len()).all(|i| w.contains(i) || l[i].is_zero()));
                prop_assert!(vecs.iter().all(|b| dot(b, &l).is_zero()));
            }
        }
    }

    /// Any sampled element of `S` that is negative on `W` forbids emptiness.
    #[test]
    fn sampled_negative_directions_are_respected(seed in any::<u64>()) {
        let mut g = rng(seed);
        let net = random_network(&mut g, 6, 8);
        let basis = stoichiometric_basis(&net);
        let vecs = basis.rational_vectors();
        let m = net.species_count();
        for _ in 0..64 {
            let coeffs: Vec<Rational> = (0..vecs.len()).map(|_| rational(g.gen_range(-3..=3))).collect();
            let s = combine(&coeffs, &vecs, m);
            let w = SpeciesSet::from_indices((0..m).filter(|&i| s[i].is_negative()));
            if w.is_empty() {
                continue;
            }
            let check = check_empty_all_classes(&basis, w).unwrap();
            prop_assert!(!check.is_empty());
            if let EmptinessCheck::Reachable { direction } = check {
                let d = int_to_rational(&direction);
                prop_assert!(basis.contains(&d));
                prop_assert!(w.members().all(|i| d[i].is_negative()));
            }
        }
    }

    #[test]
    fn extreme_points_match_svd(seed in any::<u64>()) {
        let mut g = rng(seed);
        let net = random_network(&mut g, 6, 8);
        let n = stoichiometric_matrix(&net);
        let full = svd_rank(&n, 1e-9);
        for _ in 0..16 {
            let y: Vec<f64> = (0..net.species_count())
                .map(|_| if g.gen_bool(0.5) { 0.0 } else { g.gen_range(0.1..3.0) })
                .collect();
            let zeros: Vec<usize> = (0..y.len()).filter(|&i| y[i] == 0.0).collect();
            let expect = svd_rank(&select_rows(&n, &zeros), 1e-9) == full;
            prop_assert_eq!(is_extreme_point(&net, &y).unwrap(), expect);
        }
    }

    #[test]
    fn certificate_ignores_species_order(seed in any::<u64>()) {
        let mut g = rng(seed);
        let net = random_reversible_network(&mut g, 6, 4);
        let m = net.species_count();
        let mut perm: Vec<usize> = (0..m).collect();
        perm.shuffle(&mut g);
        let other = net.permute_species(&perm).unwrap();
        let a = certify(&net).unwrap();
        let b = certify(&other).unwrap();
        prop_assert_eq!(a.overall, b.overall);
        prop_assert_eq!(a.reasons.len(), b.reasons.len());
        prop_assert_eq!(a.verdicts.len(), b.verdicts.len());
        for v in &a.verdicts {
            let names = v.set.names(&net);
            let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
            let mapped = SpeciesSet::from_names(&other, &refs).unwrap();
            let u = b.verdict(mapped).unwrap();
            prop_assert_eq!(u.status, v.status);
            prop_assert_eq!(u.minimal, v.minimal);
        }
    }
}
