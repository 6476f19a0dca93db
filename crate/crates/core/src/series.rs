//! Commutator-based structural series: derived and lower central series,
//! nilpotent residuals, and the elementwise Fitting subgroup and solvable
//! radical (an element belongs to F(G) resp. R(G) exactly when its normal
//! closure is nilpotent resp. solvable).

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{conjugacy_classes, normal_closure, PermGroup, StabChain, Subgroup};
use crate::perm::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    Derived,
    LowerCentral,
    LowerFitting,
    ModNLowerFitting,
}

/// A descending chain of subgroups, run until it stabilizes.
#[derive(Debug, Clone)]
pub struct SeriesReport {
    pub kind: SeriesKind,
    pub terms: Vec<Subgroup>,
    pub stabilized: bool,
}

#[derive(Serialize)]
struct SeriesReportJson {
    kind: SeriesKind,
    term_orders: Vec<u64>,
    term_generators: Vec<Vec<String>>,
    stabilized: bool,
}

impl SeriesReport {
    pub fn term_orders(&self) -> Vec<u64> {
        self.terms.iter().map(|t| t.order()).collect()
    }

    pub fn last(&self) -> &Subgroup {
        self.terms.last().expect("series has at least one term")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(SeriesReportJson {
            kind: self.kind,
            term_orders: self.term_orders(),
            term_generators: self
                .terms
                .iter()
                .map(|t| t.generators().iter().map(|g| g.to_string()).collect())
                .collect(),
            stabilized: self.stabilized,
        })
        .expect("series report serializes")
    }
}

/// `[A, B]` inside `parent`: the closure of the generator commutators under
/// conjugation by the generators of `A` and `B`. Equals the subgroup generated
/// by all element commutators; the all-pairs version stays in `naive` as the
/// test oracle.
pub fn commutator_subgroup(parent: &PermGroup, a: &Subgroup, b: &Subgroup) -> Subgroup {
    let degree = parent.degree();
    let mut seeds = Vec::new();
    for x in a.generators() {
        for y in b.generators() {
            seeds.push(x.commutator(y));
        }
    }
    let conjugators: Vec<&Permutation> = a
        .generators()
        .iter()
        .chain(b.generators().iter())
        .collect();
    let mut chain = StabChain::build(degree, &[]);
    let mut gens: Vec<Permutation> = Vec::new();
    let mut queue: VecDeque<Permutation> =
        seeds.into_iter().filter(|s| !s.is_identity()).collect();
    while let Some(x) = queue.pop_front() {
        if chain.contains(&x) {
            continue;
        }
        chain.extend(x.clone());
        for g in &conjugators {
            queue.push_back(x.conjugate_by(g));
        }
        gens.push(x);
    }
    let group = if gens.is_empty() {
        PermGroup::trivial(degree)
    } else {
        PermGroup::from_generators(gens).expect("commutators share the parent degree")
    };
    Subgroup::from_group(parent, group)
}

/// Join `⟨a ∪ b⟩` of two subgroups of a common parent.
pub fn join(parent: &PermGroup, a: &Subgroup, b: &Subgroup) -> Subgroup {
    let mut gens: Vec<Permutation> = a.generators().to_vec();
    gens.extend(b.generators().iter().cloned());
    let gens: Vec<Permutation> = gens.into_iter().filter(|g| !g.is_identity()).collect();
    let group = if gens.is_empty() {
        PermGroup::trivial(parent.degree())
    } else {
        PermGroup::from_generators(gens).expect("join generators share the parent degree")
    };
    Subgroup::from_group(parent, group)
}

/// Runs `step` from the full group until the term order stops decreasing.
/// The first repeated term is kept unless the chain already hit the trivial
/// group, so `[24, 12, 4, 1]` and `[120, 60, 60]` both read as stabilized.
fn descending_series<F>(group: &PermGroup, kind: SeriesKind, mut step: F) -> SeriesReport
where
    F: FnMut(&Subgroup) -> Subgroup,
{
    let mut terms = vec![Subgroup::full(group)];
    loop {
        let last = terms.last().unwrap();
        if last.is_trivial() {
            break;
        }
        let next = step(last);
        let repeated = next.order() == last.order();
        terms.push(next);
        if repeated {
            break;
        }
    }
    SeriesReport {
        kind,
        terms,
        stabilized: true,
    }
}

/// `G ≥ G′ ≥ G″ ≥ …` until stabilization.
pub fn derived_series(group: &PermGroup) -> SeriesReport {
    descending_series(group, SeriesKind::Derived, |t| {
        commutator_subgroup(group, t, t)
    })
}

/// `γ₁ = G, γ_{i+1} = [γ_i, G]` until stabilization.
pub fn lower_central_series(group: &PermGroup) -> SeriesReport {
    let full = Subgroup::full(group);
    descending_series(group, SeriesKind::LowerCentral, |t| {
        commutator_subgroup(group, t, &full)
    })
}

pub fn is_solvable(group: &PermGroup) -> bool {
    let mut current = Subgroup::full(group);
    loop {
        if current.is_trivial() {
            return true;
        }
        let next = commutator_subgroup(group, &current, &current);
        if next.order() == current.order() {
            return false;
        }
        current = next;
    }
}

pub fn is_nilpotent(group: &PermGroup) -> bool {
    let full = Subgroup::full(group);
    let mut current = Subgroup::full(group);
    loop {
        if current.is_trivial() {
            return true;
        }
        let next = commutator_subgroup(group, &current, &full);
        if next.order() == current.order() {
            return false;
        }
        current = next;
    }
}

/// Stable term of `K₁ = G, K_{j+1} = ⟨[K_j, G] ∪ base⟩`. The result contains
/// `base` and, read modulo `base`, is the nilpotent residual `γ_∞(G/base)`.
/// `base` must be normal in `group`.
pub fn nilpotent_residual(group: &PermGroup, base: &Subgroup) -> Result<Subgroup> {
    if !base.is_normal() {
        return Err(Error::NotNormal);
    }
    let full = Subgroup::full(group);
    let mut current = full.clone();
    loop {
        let commutators = commutator_subgroup(group, &current, &full);
        let next = join(group, &commutators, base);
        if next.order() == current.order() {
            return Ok(next);
        }
        current = next;
    }
}

/// Representatives of classes whose members satisfy `pred` on their normal
/// closure, scanned in parallel; the verdict is per class since normal
/// closures of conjugate elements coincide.
fn qualifying_class_reps<F>(group: &PermGroup, bound: u64, pred: F) -> Result<Vec<Permutation>>
where
    F: Fn(&PermGroup) -> bool + Sync,
{
    let classes = conjugacy_classes(group, bound)?;
    let qualifying: Vec<Permutation> = classes
        .par_iter()
        .filter_map(|class| {
            let rep = class.representative();
            if rep.is_identity() {
                return None;
            }
            let closure = normal_closure(group, std::slice::from_ref(rep));
            pred(closure.group()).then(|| rep.clone())
        })
        .collect();
    Ok(qualifying)
}

/// Fitting subgroup `F(G)`: generated by every element whose normal closure is
/// nilpotent. Computed as the normal closure of the qualifying class
/// representatives.
pub fn fitting_subgroup(group: &PermGroup, bound: u64) -> Result<Subgroup> {
    let reps = qualifying_class_reps(group, bound, is_nilpotent)?;
    Ok(normal_closure(group, &reps))
}

/// Solvable radical `R(G)`: generated by every element whose normal closure is
/// solvable.
pub fn solvable_radical(group: &PermGroup, bound: u64) -> Result<Subgroup> {
    let reps = qualifying_class_reps(group, bound, is_solvable)?;
    Ok(normal_closure(group, &reps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::naive;

    fn p(text: &str, degree: usize) -> Permutation {
        Permutation::parse(text, degree).unwrap()
    }

    fn group(gens: &[&str], degree: usize) -> PermGroup {
        PermGroup::from_generators(gens.iter().map(|s| p(s, degree)).collect()).unwrap()
    }

    fn s4() -> PermGroup {
        group(&["(1 2)", "(1 2 3 4)"], 4)
    }

    fn a4() -> PermGroup {
        group(&["(1 2 3)", "(2 3 4)"], 4)
    }

    #[test]
    fn commutator_subgroup_of_s4_is_a4() {
        let g = s4();
        let full = Subgroup::full(&g);
        let derived = commutator_subgroup(&g, &full, &full);
        assert_eq!(derived.order(), 12);
        // Against the all-pairs oracle.
        let oracle = naive::commutator_subgroup_all_pairs(4, g.generators(), g.generators());
        assert_eq!(oracle.len(), 12);
        assert!(oracle.iter().all(|e| derived.contains(e)));
    }

    #[test]
    fn commutator_subgroup_of_a4_is_v4() {
        let g = a4();
        let full = Subgroup::full(&g);
        let derived = commutator_subgroup(&g, &full, &full);
        assert_eq!(derived.order(), 4);
        let oracle = naive::commutator_subgroup_all_pairs(4, g.generators(), g.generators());
        assert_eq!(oracle.len(), 4);
        assert!(oracle.iter().all(|e| derived.contains(e)));
    }

    #[test]
    fn commutator_subgroup_of_abelian_group_is_trivial() {
        let c6 = group(&["(1 2 3 4 5 6)"], 6);
        let full = Subgroup::full(&c6);
        assert!(commutator_subgroup(&c6, &full, &full).is_trivial());
    }

    #[test]
    fn derived_series_orders_match_oracle() {
        assert_eq!(derived_series(&s4()).term_orders(), vec![24, 12, 4, 1]);
        assert_eq!(
            naive::derived_series_orders(4, s4().generators()),
            vec![24, 12, 4, 1]
        );

        let s5 = group(&["(1 2)", "(1 2 3 4 5)"], 5);
        assert_eq!(derived_series(&s5).term_orders(), vec![120, 60, 60]);

        let c7 = group(&["(1 2 3 4 5 6 7)"], 7);
        assert_eq!(derived_series(&c7).term_orders(), vec![7, 1]);
    }

    #[test]
    fn solvability_verdicts() {
        assert!(is_solvable(&s4()));
        let a5 = group(&["(1 2 3)", "(3 4 5)"], 5);
        assert!(!is_solvable(&a5));
        // Transpositions generate S5, which is not solvable.
        let s5 = group(&["(1 2)", "(2 3)", "(3 4)", "(4 5)"], 5);
        assert_eq!(s5.order(), 120);
        assert!(!is_solvable(&s5));
    }

    #[test]
    fn lower_central_series_and_nilpotency() {
        // Dihedral group of order 8: nilpotent with three terms.
        let d4 = group(&["(1 2 3 4)", "(2 4)"], 4);
        assert_eq!(d4.order(), 8);
        let series = lower_central_series(&d4);
        assert_eq!(series.terms.len(), 3);
        assert!(series.last().is_trivial());
        assert!(is_nilpotent(&d4));

        let s3 = group(&["(1 2)", "(1 2 3)"], 3);
        let series = lower_central_series(&s3);
        assert_eq!(series.last().order(), 3);
        assert!(!is_nilpotent(&s3));

        let c12 = group(&["(1 2 3 4 5 6 7 8 9 10 11 12)"], 12);
        assert!(is_nilpotent(&c12));
    }

    #[test]
    fn nilpotent_residuals() {
        let g = s4();
        let trivial = Subgroup::trivial(&g);
        let residual = nilpotent_residual(&g, &trivial).unwrap();
        assert_eq!(residual.order(), 12); // A4

        let a = a4();
        let residual = nilpotent_residual(&a, &Subgroup::trivial(&a)).unwrap();
        assert_eq!(residual.order(), 4); // V4

        let d4 = group(&["(1 2 3 4)", "(2 4)"], 4);
        let residual = nilpotent_residual(&d4, &Subgroup::trivial(&d4)).unwrap();
        assert!(residual.is_trivial());
    }

    #[test]
    fn nilpotent_residual_rejects_non_normal_base() {
        let g = s4();
        let h = Subgroup::new(&g, vec![p("(1 2)", 4)]).unwrap();
        assert!(matches!(
            nilpotent_residual(&g, &h),
            Err(Error::NotNormal)
        ));
    }

    #[test]
    fn fitting_subgroup_values() {
        let f = fitting_subgroup(&s4(), 1000).unwrap();
        assert_eq!(f.order(), 4);
        assert!(f.is_normal());
        assert!(is_nilpotent(f.group()));

        let a5 = group(&["(1 2 3)", "(3 4 5)"], 5);
        assert!(fitting_subgroup(&a5, 1000).unwrap().is_trivial());
    }

    #[test]
    fn fitting_subgroup_of_c6_times_s3() {
        // C6 on points 1..6, S3 on points 7..9.
        let g = group(&["(1 2 3 4 5 6)", "(7 8)", "(7 8 9)"], 9);
        assert_eq!(g.order(), 36);
        let f = fitting_subgroup(&g, 1000).unwrap();
        assert_eq!(f.order(), 18); // C6 x C3
    }

    #[test]
    fn solvable_radical_values() {
        let r = solvable_radical(&s4(), 1000).unwrap();
        assert_eq!(r.order(), 24);

        let a5 = group(&["(1 2 3)", "(3 4 5)"], 5);
        assert!(solvable_radical(&a5, 1000).unwrap().is_trivial());

        // S3 on 1..3 times A5 on 4..8.
        let g = group(&["(1 2)", "(1 2 3)", "(4 5 6)", "(6 7 8)"], 8);
        assert_eq!(g.order(), 360);
        let r = solvable_radical(&g, 1000).unwrap();
        assert_eq!(r.order(), 6);
        assert!(is_solvable(r.group()));
        assert!(r.is_normal());
    }

    #[test]
    fn series_report_serializes() {
        let report = derived_series(&s4());
        let json = report.to_json();
        assert_eq!(json["kind"], "derived");
        assert_eq!(json["term_orders"][0], 24);
    }
}
