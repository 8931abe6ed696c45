mod common;

use common::{random_network, rng, stoichiometric_matrix, svd_rank};
use crn_core::linalg::{dot, rational, Rational};
use crn_core::structure::{conservation_basis, linkage_classes, stoichiometric_basis};
use crn_core::{parse_network, structure_report};
use num_traits::Zero;
use proptest::prelude::*;
use rand::seq::SliceRandom;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn printed_network_parses_back(seed in any::<u64>()) {
        let net = random_network(&mut rng(seed), 6, 8);
        let text = net.to_string();
        let back = parse_network(&text).unwrap();
        let names = net.species_names();
        let order: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        prop_assert_eq!(back.reorder_species(&order).unwrap(), net);
    }

    #[test]
    fn exact_rank_matches_svd(seed in any::<u64>()) {
        let net = random_network(&mut rng(seed), 6, 8);
        let s = stoichiometric_basis(&net).rank();
        prop_assert_eq!(s, svd_rank(&stoichiometric_matrix(&net), 1e-9));
    }

    #[test]
    fn subspace_and_complement_split_species_space(seed in any::<u64>()) {
        let net = random_network(&mut rng(seed), 6, 8);
        let s = stoichiometric_basis(&net);
        let c = conservation_basis(&net);
        prop_assert_eq!(s.rank() + c.rank(), net.species_count());
        for a in s.rational_vectors() {
            for b in c.rational_vectors() {
                prop_assert!(dot(&a, &b).is_zero());
            }
        }
        for r in 0..net.reactions().len() {
            let v: Vec<Rational> = net.reaction_vector(r).into_iter().map(rational).collect();
            prop_assert!(s.contains(&v));
        }
    }

    #[test]
    fn deficiency_is_nonnegative(seed in any::<u64>()) {
        let rep = structure_report(&random_network(&mut rng(seed), 6, 8));
        prop_assert!(rep.deficiency >= 0);
        prop_assert!(!rep.inconsistent);
        prop_assert_eq!(rep.deficiency, rep.n as i64 - rep.l as i64 - rep.s as i64);
    }

    #[test]
    fn linkage_classes_ignore_reaction_order(seed in any::<u64>()) {
        let mut g = rng(seed);
        let net = random_network(&mut g, 6, 8);
        let mut order: Vec<usize> = (0..net.reactions().len()).collect();
        order.shuffle(&mut g);
        let shuffled = net.reorder_reactions(&order).unwrap();
        let as_complexes = |n: &crn_core::ReactionNetwork| {
            let cx = n.distinct_complexes();
            let mut classes: Vec<Vec<_>> = linkage_classes(n)
                .into_iter()
                .map(|cl| {
                    let mut v: Vec<_> = cl.into_iter().map(|i| cx[i].clone()).collect();
                    v.sort();
                    v
                })
                .collect();
            classes.sort();
            classes
        };
        prop_assert_eq!(as_complexes(&net), as_complexes(&shuffled));
        prop_assert_eq!(structure_report(&net).weakly_reversible, structure_report(&shuffled).weakly_reversible);
    }
}
