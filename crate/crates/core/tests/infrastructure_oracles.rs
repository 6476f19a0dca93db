//! Chain-based infrastructure against exhaustive brute-force recomputation on
//! the corpus: orders, membership, conjugacy classes, commutator subgroups,
//! and normal closures.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use solrad_core::catalog::default_corpus;
use solrad_core::group::{conjugacy_classes, normal_closure, Subgroup};
use solrad_core::naive;
use solrad_core::perm::Permutation;
use solrad_core::series::commutator_subgroup;

const ORACLE_ORDER_BOUND: u64 = 2000;

#[test]
fn chain_order_matches_exhaustive_closure() {
    for spec in default_corpus() {
        let g = spec.build().unwrap();
        if g.order() > 5000 {
            continue;
        }
        let closure = naive::elements_by_closure(g.degree(), g.generators());
        assert_eq!(closure.len() as u64, g.order(), "{spec}");
    }
}

#[test]
fn sift_membership_matches_exhaustive_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for spec in default_corpus() {
        let g = spec.build().unwrap();
        if g.order() > 5000 {
            continue;
        }
        let elems = naive::elements_by_closure(g.degree(), g.generators());
        // Random permutations of matching degree, half of them forced members.
        for trial in 0..1000 {
            let p = if trial % 2 == 0 {
                random_permutation(g.degree(), &mut rng)
            } else {
                g.random_element(&mut rng)
            };
            let by_chain = g.contains(&p).unwrap();
            let by_list = elems.binary_search(&p).is_ok();
            assert_eq!(by_chain, by_list, "{spec}: {p}");
        }
    }
}

fn random_permutation(degree: usize, rng: &mut ChaCha8Rng) -> Permutation {
    use rand::seq::SliceRandom;
    let mut images: Vec<u16> = (0..degree as u16).collect();
    images.shuffle(rng);
    Permutation::from_images(images).unwrap()
}

#[test]
fn classes_match_pairwise_conjugation_oracle() {
    for spec in default_corpus() {
        let g = spec.build().unwrap();
        if g.order() > ORACLE_ORDER_BOUND {
            continue;
        }
        let fast = conjugacy_classes(&g, ORACLE_ORDER_BOUND).unwrap();
        let slow = naive::conjugacy_classes_by_enumeration(g.degree(), g.generators());
        assert_eq!(fast.len(), slow.len(), "{spec}");
        let mut fast_sets: Vec<Vec<Permutation>> =
            fast.iter().map(|c| c.elements().to_vec()).collect();
        let mut slow_sets = slow;
        fast_sets.sort();
        slow_sets.sort();
        assert_eq!(fast_sets, slow_sets, "{spec}");
    }
}

#[test]
fn commutator_subgroups_match_all_pairs_oracle() {
    for spec in default_corpus() {
        let g = spec.build().unwrap();
        if g.order() > ORACLE_ORDER_BOUND {
            continue;
        }
        let full = Subgroup::full(&g);
        let derived = commutator_subgroup(&g, &full, &full);
        let oracle = naive::commutator_subgroup_all_pairs(g.degree(), g.generators(), g.generators());
        assert_eq!(derived.order(), oracle.len() as u64, "{spec}");
        assert!(oracle.iter().all(|e| derived.contains(e)), "{spec}");
    }
}

#[test]
fn normal_closures_match_one_shot_conjugation_oracle() {
    for spec in default_corpus() {
        let g = spec.build().unwrap();
        if g.order() > ORACLE_ORDER_BOUND {
            continue;
        }
        for class in conjugacy_classes(&g, ORACLE_ORDER_BOUND).unwrap() {
            let rep = class.representative();
            let fast = normal_closure(&g, std::slice::from_ref(rep));
            let slow = naive::normal_closure(g.degree(), g.generators(), std::slice::from_ref(rep));
            assert_eq!(fast.order(), slow.len() as u64, "{spec}, rep {rep}");
            assert!(slow.iter().all(|e| fast.contains(e)), "{spec}, rep {rep}");
        }
    }
}

#[test]
fn normal_closure_is_normal_minimal_and_contains_seed() {
    for spec in default_corpus() {
        let g = spec.build().unwrap();
        if g.order() > ORACLE_ORDER_BOUND {
            continue;
        }
        for class in conjugacy_classes(&g, ORACLE_ORDER_BOUND).unwrap() {
            let rep = class.representative();
            let n = normal_closure(&g, std::slice::from_ref(rep));
            assert!(n.is_normal(), "{spec}");
            assert!(n.contains(rep), "{spec}");
            // Minimality: any normal subgroup containing the seed contains
            // the whole closure.
            for m in solrad_core::height::enumerate_normal_subgroups(&g, ORACLE_ORDER_BOUND)
                .unwrap()
            {
                if m.contains(rep) {
                    assert!(n.contained_in(&m), "{spec}: closure not minimal");
                }
            }
        }
    }
}

#[test]
fn class_partition_and_representative_invariants() {
    for spec in default_corpus() {
        let g = spec.build().unwrap();
        if g.order() > ORACLE_ORDER_BOUND {
            continue;
        }
        let classes = conjugacy_classes(&g, ORACLE_ORDER_BOUND).unwrap();
        let total: usize = classes.iter().map(|c| c.size()).sum();
        assert_eq!(total as u64, g.order(), "{spec}");
        for c in &classes {
            assert_eq!(c.representative(), &c.elements()[0], "{spec}");
            assert!(
                c.elements().windows(2).all(|w| w[0] < w[1]),
                "{spec}: class elements not sorted"
            );
        }
    }
}
