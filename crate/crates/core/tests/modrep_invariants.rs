//! Module-splitting invariants over the corpus: dimension bookkeeping,
//! certified constituents, homomorphism checks, and cross-constituent
//! separation.

use solrad_core::catalog::default_corpus;
use solrad_core::modrep::{
    fixed_space_dim, is_irreducible, permutation_module_constituents, spin, GModule,
    IrreducibilityVerdict,
};
use solrad_core::series::is_solvable;
use solrad_core::{PermGroup, Permutation};

fn coprime_cases() -> Vec<(String, PermGroup, u64)> {
    let mut out = Vec::new();
    for spec in default_corpus() {
        let g = spec.build().unwrap();
        if !is_solvable(&g) {
            continue;
        }
        for p in [5u64, 7, 11, 13] {
            if g.order() % p != 0 {
                out.push((spec.to_string(), g.clone(), p));
            }
        }
    }
    out
}

#[test]
fn constituent_dimensions_sum_to_the_degree() {
    for (name, g, p) in coprime_cases() {
        let parts = permutation_module_constituents(&g, p).unwrap();
        let total: usize = parts.iter().map(GModule::dim).sum();
        assert_eq!(total, g.degree(), "{name} over GF({p})");
        for m in &parts {
            assert!(
                m.irreducible_certificate().is_some(),
                "{name} over GF({p}): uncertified constituent"
            );
        }
    }
}

#[test]
fn constituents_verify_as_representations() {
    for (name, g, p) in coprime_cases() {
        // Words up to length 6 exhaustively on small groups, plus 1000
        // random words everywhere.
        let exhaustive_len = if g.order() <= 500 { 6 } else { 4 };
        for m in permutation_module_constituents(&g, p).unwrap() {
            assert!(
                m.verify_homomorphism(exhaustive_len, 1000, 0),
                "{name} over GF({p}): generator matrices break a relation"
            );
        }
    }
}

#[test]
fn spinning_inside_a_constituent_never_leaves_it() {
    // Spinning any nonzero vector of a certified irreducible constituent
    // recovers the full constituent, never a mix with another one.
    for (name, g, p) in coprime_cases() {
        for m in permutation_module_constituents(&g, p).unwrap() {
            if m.dim() == 1 {
                continue;
            }
            let mut v = vec![0u64; m.dim()];
            v[0] = 1;
            let spun = spin(&m, &v).unwrap();
            assert_eq!(spun.rows(), m.dim(), "{name} over GF({p})");
        }
    }
}

#[test]
fn ambient_spinning_never_mixes_constituents() {
    // Spinning a constituent's basis vector inside the ambient natural module
    // recovers exactly that constituent, so the decomposition is genuinely
    // direct.
    for (name, g, p) in coprime_cases() {
        let natural = GModule::natural(&g, p);
        for m in permutation_module_constituents(&g, p).unwrap() {
            let basis = m.ambient_basis().expect("split constituents carry a basis");
            let spun = spin(&natural, basis.row(0)).unwrap();
            assert_eq!(spun.rows(), m.dim(), "{name} over GF({p})");
        }
    }
}

#[test]
fn identity_fixes_everything() {
    for (name, g, p) in coprime_cases().into_iter().take(12) {
        let id = Permutation::identity(g.degree());
        for m in permutation_module_constituents(&g, p).unwrap() {
            assert_eq!(fixed_space_dim(&m, &id).unwrap(), m.dim(), "{name}");
        }
    }
}

#[test]
fn large_cyclic_constituents_carry_sampled_certificates() {
    // The regular module of C11 over GF(7) has a 10-dimensional irreducible
    // constituent (the multiplicative order of 7 mod 11 is 10); 7^10 exceeds
    // the exhaustive spin bound, so its certificate must be the sampled one.
    let c11 = solrad_core::catalog::GroupSpec::Cyclic(11).build().unwrap();
    let parts = permutation_module_constituents(&c11, 7).unwrap();
    let dims: Vec<usize> = parts.iter().map(GModule::dim).collect();
    assert_eq!(dims, vec![1, 10]);
    use solrad_core::modrep::IrreducibilityCertificate;
    assert_eq!(
        parts[1].irreducible_certificate(),
        Some(IrreducibilityCertificate::Sampled)
    );
    // The fixed line still certifies exhaustively.
    assert_eq!(
        parts[0].irreducible_certificate(),
        Some(IrreducibilityCertificate::Exhaustive)
    );
}

#[test]
fn natural_module_of_a_transitive_group_is_reducible() {
    // The all-ones line is always fixed, so the full natural module of any
    // nontrivial group must test reducible.
    for spec in default_corpus().into_iter().take(8) {
        let g = spec.build().unwrap();
        if g.degree() < 2 || g.order() % 7 == 0 {
            continue;
        }
        let m = GModule::natural(&g, 7);
        assert!(
            matches!(is_irreducible(&m).unwrap(), IrreducibilityVerdict::Reducible(_)),
            "{spec}"
        );
    }
}
