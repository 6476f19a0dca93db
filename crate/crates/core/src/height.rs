//! Fitting height and the lower Fitting series, both absolute and relative to
//! a normal subgroup, together with the supporting lattice machinery: normal
//! subgroup enumeration, centers, and complements to a minimal normal
//! subgroup.
//!
//! All quotient statements are computed relative to a normal subgroup inside
//! the parent; quotient groups are never materialized.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{conjugacy_classes, normal_closure, PermGroup, Subgroup};
use crate::perm::Permutation;
use crate::series::{is_solvable, join, nilpotent_residual, SeriesKind, SeriesReport};

/// Default cap for normal-subgroup enumeration.
pub const DEFAULT_NORMAL_ENUM_BOUND: u64 = 2000;

/// Default cap on `|V|^t` complement candidates.
pub const DEFAULT_COMPLEMENT_BUDGET: u64 = 1_000_000;

/// Lower Fitting series of a solvable group relative to a normal subgroup:
/// `X₀ = G`, and `X_{i+1}` is the stable term of
/// `K₁ = X_i, K_{j+1} = ⟨[K_j, X_i] ∪ N⟩`, descending until `X_i = N`.
/// Fails with `QuotientNotSolvable` when the chain stabilizes above `N`.
pub fn mod_lower_fitting_series(group: &PermGroup, n: &Subgroup) -> Result<SeriesReport> {
    if !n.is_normal() {
        return Err(Error::NotNormal);
    }
    let mut terms = vec![Subgroup::full(group)];
    loop {
        let last = terms.last().unwrap();
        if last.order() == n.order() {
            break;
        }
        let base_in_last = Subgroup::from_group(last.group(), n.group().clone());
        let residual = nilpotent_residual(last.group(), &base_in_last)?;
        if residual.order() == last.order() {
            return Err(Error::QuotientNotSolvable);
        }
        let as_subgroup_of_g = Subgroup::from_group(group, residual.group().clone());
        terms.push(as_subgroup_of_g);
    }
    Ok(SeriesReport {
        kind: SeriesKind::ModNLowerFitting,
        terms,
        stabilized: true,
    })
}

/// Absolute lower Fitting series `D₀ = G, D_{i+1} = γ_∞(D_i)` down to the
/// trivial group. Fails with `NotSolvable` on nonsolvable input.
pub fn lower_fitting_series(group: &PermGroup) -> Result<SeriesReport> {
    let trivial = Subgroup::trivial(group);
    let mut report = mod_lower_fitting_series(group, &trivial).map_err(|e| match e {
        Error::QuotientNotSolvable => Error::NotSolvable,
        other => other,
    })?;
    report.kind = SeriesKind::LowerFitting;
    Ok(report)
}

/// Number of strict descents of the lower Fitting series: 0 for the trivial
/// group, 1 for nontrivial nilpotent groups.
pub fn fitting_height(group: &PermGroup) -> Result<u32> {
    Ok(lower_fitting_series(group)?.terms.len() as u32 - 1)
}

/// Fitting height of `G/N`, computed relative to `N` inside `G`.
pub fn fitting_height_mod(group: &PermGroup, n: &Subgroup) -> Result<u32> {
    Ok(mod_lower_fitting_series(group, n)?.terms.len() as u32 - 1)
}

/// `sfit(G)`: the last nontrivial lower Fitting term, i.e. the smallest normal
/// subgroup whose quotient has Fitting height `fh(G) − 1`. The defining
/// intersection over normal subgroups is exercised as a test oracle.
pub fn sfit(group: &PermGroup) -> Result<Subgroup> {
    if group.is_trivial() {
        return Err(Error::TrivialGroup);
    }
    let series = lower_fitting_series(group)?;
    Ok(series.terms[series.terms.len() - 2].clone())
}

/// Fitting height, lower Fitting terms, and sfit in one report.
#[derive(Debug, Clone)]
pub struct FittingProfile {
    pub height: u32,
    pub terms: Vec<Subgroup>,
    /// Last nontrivial term; `None` only for the trivial group.
    pub sfit: Option<Subgroup>,
}

#[derive(Serialize)]
struct FittingProfileJson {
    height: u32,
    term_orders: Vec<u64>,
    sfit_generators: Vec<String>,
}

impl FittingProfile {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(FittingProfileJson {
            height: self.height,
            term_orders: self.terms.iter().map(|t| t.order()).collect(),
            sfit_generators: self
                .sfit
                .as_ref()
                .map(|s| s.generators().iter().map(|g| g.to_string()).collect())
                .unwrap_or_default(),
        })
        .expect("fitting profile serializes")
    }
}

pub fn fitting_profile(group: &PermGroup) -> Result<FittingProfile> {
    let series = lower_fitting_series(group)?;
    let height = series.terms.len() as u32 - 1;
    let sfit = (height > 0).then(|| series.terms[series.terms.len() - 2].clone());
    Ok(FittingProfile {
        height,
        terms: series.terms,
        sfit,
    })
}

fn element_key(sub: &Subgroup) -> Vec<Permutation> {
    sub.group()
        .elements(u64::MAX)
        .expect("bounded by caller")
        .as_ref()
        .clone()
}

/// All normal subgroups, as the join-closure of the single-class normal
/// closures. Every normal subgroup is the join of the closures of the classes
/// it contains, so iterating pairwise joins to a fixpoint is complete; the
/// subgroup-by-subgroup scan in `naive` double-checks this on small groups.
pub fn enumerate_normal_subgroups(group: &PermGroup, bound: u64) -> Result<Vec<Subgroup>> {
    let order = group.order();
    if order > bound {
        return Err(Error::GroupTooLarge { order, bound });
    }
    let classes = conjugacy_classes(group, bound)?;
    let mut found: Vec<Subgroup> = vec![Subgroup::trivial(group)];
    let mut seen: HashSet<Vec<Permutation>> = HashSet::from([element_key(&found[0])]);
    for class in &classes {
        let rep = class.representative();
        if rep.is_identity() {
            continue;
        }
        let closure = normal_closure(group, std::slice::from_ref(rep));
        if seen.insert(element_key(&closure)) {
            found.push(closure);
        }
    }
    // Close under pairwise joins.
    let mut frontier: Vec<usize> = (0..found.len()).collect();
    while !frontier.is_empty() {
        let mut next_frontier = Vec::new();
        for &i in &frontier {
            for j in 0..found.len() {
                let a = &found[i];
                let b = &found[j];
                if a.contained_in(b) || b.contained_in(a) {
                    continue;
                }
                let joined = join(group, a, b);
                if seen.insert(element_key(&joined)) {
                    found.push(joined);
                    next_frontier.push(found.len() - 1);
                }
            }
        }
        frontier = next_frontier;
    }
    found.sort_by_key(element_key);
    found.sort_by_key(|s| s.order());
    Ok(found)
}

/// Nontrivial normal subgroups minimal in the normal-subgroup lattice.
pub fn minimal_normal_subgroups(group: &PermGroup, bound: u64) -> Result<Vec<Subgroup>> {
    let normals = enumerate_normal_subgroups(group, bound)?;
    let minimal: Vec<Subgroup> = normals
        .iter()
        .filter(|n| !n.is_trivial())
        .filter(|n| {
            normals
                .iter()
                .all(|m| m.is_trivial() || !m.contained_in(n) || m.order() == n.order())
        })
        .cloned()
        .collect();
    Ok(minimal)
}

/// Center of the group, computed elementwise: an element is central exactly
/// when it commutes with every generator.
pub fn center(group: &PermGroup, bound: u64) -> Result<Subgroup> {
    let elems = group.elements(bound)?;
    let central: Vec<Permutation> = elems
        .iter()
        .filter(|e| {
            !e.is_identity()
                && group
                    .generators()
                    .iter()
                    .all(|g| e.compose(g) == g.compose(e))
        })
        .cloned()
        .collect();
    Subgroup::new(group, central)
}

fn is_minimal_normal(group: &PermGroup, v: &Subgroup) -> Result<bool> {
    if v.is_trivial() || !v.is_normal() {
        return Ok(false);
    }
    let elems = v.group().elements(group.order())?;
    Ok(elems
        .iter()
        .filter(|e| !e.is_identity())
        .all(|e| normal_closure(group, std::slice::from_ref(e)).order() == v.order()))
}

/// All complements to a minimal normal subgroup `V` of the solvable group `G`:
/// subgroups `A` with `A ∩ V = 1` and `⟨A ∪ V⟩ = G`. Candidates come from
/// lifting each member of a reduced generating set of `G` modulo `V` across
/// every coset representative choice; the list may be empty.
pub fn find_complements(
    group: &PermGroup,
    v: &Subgroup,
    candidate_budget: u64,
) -> Result<Vec<Subgroup>> {
    if !is_solvable(group) {
        return Err(Error::NotSolvable);
    }
    if !is_minimal_normal(group, v)? {
        return Err(Error::NotMinimalNormal);
    }
    // Greedily drop generators already in the closure of the others with V:
    // complements are determined modulo V, so the reduction is lossless.
    let mut kept: Vec<Permutation> = group.generators().to_vec();
    let mut i = 0;
    while i < kept.len() {
        let mut others: Vec<Permutation> = kept
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, g)| g.clone())
            .collect();
        others.extend(v.generators().iter().cloned());
        let span = if others.is_empty() {
            PermGroup::trivial(group.degree())
        } else {
            PermGroup::from_generators(others)?
        };
        if span.contains_unchecked(&kept[i]) {
            kept.remove(i);
        } else {
            i += 1;
        }
    }

    let v_elems = v.group().elements(group.order())?;
    let v_size = v_elems.len() as u64;
    let needed = v_size.checked_pow(kept.len() as u32).unwrap_or(u64::MAX);
    if needed > candidate_budget {
        return Err(Error::BudgetExceeded {
            needed,
            budget: candidate_budget,
        });
    }

    let complement_order = group.order() / v.order();
    let mut complements: Vec<Subgroup> = Vec::new();
    let mut seen: HashSet<Vec<Permutation>> = HashSet::new();
    let t = kept.len();
    let mut odometer = vec![0usize; t];
    loop {
        let cand_gens: Vec<Permutation> = kept
            .iter()
            .zip(&odometer)
            .map(|(g, &vi)| g.compose(&v_elems[vi]))
            .collect();
        let candidate = if cand_gens.is_empty() {
            PermGroup::trivial(group.degree())
        } else {
            PermGroup::from_generators(cand_gens)?
        };
        if candidate.order() == complement_order {
            let elems = candidate.elements(complement_order)?;
            let meets_v_trivially = elems
                .iter()
                .all(|e| e.is_identity() || !v.contains(e));
            if meets_v_trivially && seen.insert(elems.as_ref().clone()) {
                complements.push(Subgroup::from_group(group, candidate));
            }
        }
        // Advance the odometer.
        let mut pos = 0;
        loop {
            if pos == t {
                let mut out = complements;
                out.sort_by_key(element_key);
                return Ok(out);
            }
            odometer[pos] += 1;
            if odometer[pos] < v_elems.len() {
                break;
            }
            odometer[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str, degree: usize) -> Permutation {
        Permutation::parse(text, degree).unwrap()
    }

    fn group(gens: &[&str], degree: usize) -> PermGroup {
        PermGroup::from_generators(gens.iter().map(|s| p(s, degree)).collect()).unwrap()
    }

    fn s4() -> PermGroup {
        group(&["(1 2)", "(1 2 3 4)"], 4)
    }

    #[test]
    fn fitting_heights() {
        assert_eq!(fitting_height(&s4()).unwrap(), 3);
        let d4 = group(&["(1 2 3 4)", "(2 4)"], 4);
        assert_eq!(fitting_height(&d4).unwrap(), 1);
        assert_eq!(fitting_height(&PermGroup::trivial(3)).unwrap(), 0);
        let s3 = group(&["(1 2)", "(1 2 3)"], 3);
        assert_eq!(fitting_height(&s3).unwrap(), 2);
    }

    #[test]
    fn fitting_height_rejects_nonsolvable() {
        let a5 = group(&["(1 2 3)", "(3 4 5)"], 5);
        assert!(matches!(fitting_height(&a5), Err(Error::NotSolvable)));
    }

    #[test]
    fn lower_fitting_series_of_s4() {
        let series = lower_fitting_series(&s4()).unwrap();
        assert_eq!(series.term_orders(), vec![24, 12, 4, 1]);
    }

    #[test]
    fn sfit_values() {
        let v4 = sfit(&s4()).unwrap();
        assert_eq!(v4.order(), 4);
        assert!(v4.contains(&p("(1 2)(3 4)", 4)));

        let s3 = group(&["(1 2)", "(1 2 3)"], 3);
        let c3 = sfit(&s3).unwrap();
        assert_eq!(c3.order(), 3);

        // Nilpotent group: sfit is the whole group.
        let d4 = group(&["(1 2 3 4)", "(2 4)"], 4);
        assert_eq!(sfit(&d4).unwrap().order(), 8);
    }

    #[test]
    fn sfit_rejects_trivial_and_nonsolvable() {
        assert!(matches!(
            sfit(&PermGroup::trivial(2)),
            Err(Error::TrivialGroup)
        ));
        let a5 = group(&["(1 2 3)", "(3 4 5)"], 5);
        assert!(matches!(sfit(&a5), Err(Error::NotSolvable)));
    }

    #[test]
    fn relative_fitting_heights_on_s4() {
        let g = s4();
        let v4 = Subgroup::new(&g, vec![p("(1 2)(3 4)", 4), p("(1 3)(2 4)", 4)]).unwrap();
        assert_eq!(fitting_height_mod(&g, &v4).unwrap(), 2);

        let a4 = Subgroup::new(&g, vec![p("(1 2 3)", 4), p("(2 3 4)", 4)]).unwrap();
        assert_eq!(fitting_height_mod(&g, &a4).unwrap(), 1);

        let trivial = Subgroup::trivial(&g);
        assert_eq!(
            fitting_height_mod(&g, &trivial).unwrap(),
            fitting_height(&g).unwrap()
        );

        let full = Subgroup::full(&g);
        assert_eq!(fitting_height_mod(&g, &full).unwrap(), 0);
    }

    #[test]
    fn relative_height_rejects_non_normal() {
        let g = s4();
        let h = Subgroup::new(&g, vec![p("(1 2)", 4)]).unwrap();
        assert!(matches!(
            fitting_height_mod(&g, &h),
            Err(Error::NotNormal)
        ));
    }

    #[test]
    fn relative_height_rejects_nonsolvable_quotient() {
        // S5 mod trivial: quotient S5 is not solvable.
        let s5 = group(&["(1 2)", "(1 2 3 4 5)"], 5);
        let trivial = Subgroup::trivial(&s5);
        assert!(matches!(
            fitting_height_mod(&s5, &trivial),
            Err(Error::QuotientNotSolvable)
        ));
    }

    #[test]
    fn normal_subgroups_of_s4() {
        let normals = enumerate_normal_subgroups(&s4(), 2000).unwrap();
        let orders: Vec<u64> = normals.iter().map(|n| n.order()).collect();
        assert_eq!(orders, vec![1, 4, 12, 24]);
        assert!(normals.iter().all(|n| n.is_normal()));
    }

    #[test]
    fn normal_subgroups_of_a5_and_c6() {
        let a5 = group(&["(1 2 3)", "(3 4 5)"], 5);
        let orders: Vec<u64> = enumerate_normal_subgroups(&a5, 2000)
            .unwrap()
            .iter()
            .map(|n| n.order())
            .collect();
        assert_eq!(orders, vec![1, 60]);

        let c6 = group(&["(1 2 3 4 5 6)"], 6);
        let orders: Vec<u64> = enumerate_normal_subgroups(&c6, 2000)
            .unwrap()
            .iter()
            .map(|n| n.order())
            .collect();
        assert_eq!(orders, vec![1, 2, 3, 6]);
    }

    #[test]
    fn center_of_d4_and_s4() {
        let d4 = group(&["(1 2 3 4)", "(2 4)"], 4);
        assert_eq!(center(&d4, 1000).unwrap().order(), 2);
        assert!(center(&s4(), 1000).unwrap().is_trivial());
    }

    #[test]
    fn complements_of_c3_in_s3() {
        let s3 = group(&["(1 2)", "(1 2 3)"], 3);
        let c3 = Subgroup::new(&s3, vec![p("(1 2 3)", 3)]).unwrap();
        let comps = find_complements(&s3, &c3, 1_000_000).unwrap();
        assert_eq!(comps.len(), 3);
        assert!(comps.iter().all(|a| a.order() == 2));
    }

    #[test]
    fn no_complement_to_c2_in_c4() {
        let c4 = group(&["(1 2 3 4)"], 4);
        let c2 = Subgroup::new(&c4, vec![p("(1 3)(2 4)", 4)]).unwrap();
        let comps = find_complements(&c4, &c2, 1_000_000).unwrap();
        assert!(comps.is_empty());
    }

    #[test]
    fn complements_of_v4_in_a4() {
        let a4 = group(&["(1 2 3)", "(2 3 4)"], 4);
        let v4 = Subgroup::new(&a4, vec![p("(1 2)(3 4)", 4), p("(1 3)(2 4)", 4)]).unwrap();
        let comps = find_complements(&a4, &v4, 1_000_000).unwrap();
        assert_eq!(comps.len(), 4);
        assert!(comps.iter().all(|a| a.order() == 3));
    }

    #[test]
    fn complements_reject_non_minimal_v() {
        let g = s4();
        let a4 = Subgroup::new(&g, vec![p("(1 2 3)", 4), p("(2 3 4)", 4)]).unwrap();
        assert!(matches!(
            find_complements(&g, &a4, 1_000_000),
            Err(Error::NotMinimalNormal)
        ));
    }

    #[test]
    fn no_complement_to_the_center_of_d4() {
        // D4 mod its center needs two generators, so the search lifts a
        // two-element generating set; every order-4 subgroup contains the
        // center, so no candidate survives.
        let d4 = group(&["(1 2 3 4)", "(2 4)"], 4);
        let z = center(&d4, 1000).unwrap();
        assert_eq!(z.order(), 2);
        let comps = find_complements(&d4, &z, 1_000_000).unwrap();
        assert!(comps.is_empty());
    }

    #[test]
    fn complements_respect_the_candidate_budget() {
        let s3 = group(&["(1 2)", "(1 2 3)"], 3);
        let c3 = Subgroup::new(&s3, vec![p("(1 2 3)", 3)]).unwrap();
        assert!(matches!(
            find_complements(&s3, &c3, 2),
            Err(Error::BudgetExceeded { needed: 3, budget: 2 })
        ));
    }

    #[test]
    fn fitting_profile_reports() {
        let profile = fitting_profile(&s4()).unwrap();
        assert_eq!(profile.height, 3);
        assert_eq!(profile.sfit.as_ref().unwrap().order(), 4);
        let json = profile.to_json();
        assert_eq!(json["height"], 3);
        assert_eq!(json["term_orders"][3], 1);
    }
}
