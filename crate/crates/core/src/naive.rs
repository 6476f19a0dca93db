//! Brute-force reference implementations used to verify the chain-based
//! algorithms. Everything here works on explicit element lists and avoids the
//! stabilizer chain, conjugation-closure shortcuts, and class machinery of the
//! main modules, so the two paths stay independent.

use std::collections::{HashSet, VecDeque};

use crate::perm::Permutation;

/// All elements of `⟨gens⟩` by plain closure under products.
pub fn elements_by_closure(degree: usize, gens: &[Permutation]) -> Vec<Permutation> {
    let mut seen: HashSet<Permutation> = HashSet::new();
    let id = Permutation::identity(degree);
    let mut queue = VecDeque::from([id.clone()]);
    seen.insert(id);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.compose(g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<Permutation> = seen.into_iter().collect();
    out.sort_unstable();
    out
}

pub fn order_by_closure(degree: usize, gens: &[Permutation]) -> u64 {
    elements_by_closure(degree, gens).len() as u64
}

pub fn contains_by_closure(degree: usize, gens: &[Permutation], p: &Permutation) -> bool {
    elements_by_closure(degree, gens).binary_search(p).is_ok()
}

/// Conjugacy classes by pairwise conjugation with every group element.
pub fn conjugacy_classes_by_enumeration(
    degree: usize,
    gens: &[Permutation],
) -> Vec<Vec<Permutation>> {
    let elems = elements_by_closure(degree, gens);
    let mut assigned: HashSet<Permutation> = HashSet::new();
    let mut classes = Vec::new();
    for e in &elems {
        if assigned.contains(e) {
            continue;
        }
        let mut class: Vec<Permutation> =
            elems.iter().map(|g| e.conjugate_by(g)).collect();
        class.sort_unstable();
        class.dedup();
        for m in &class {
            assigned.insert(m.clone());
        }
        classes.push(class);
    }
    classes
}

/// `[A, B]` as the closure of all |A|·|B| element commutators.
pub fn commutator_subgroup_all_pairs(
    degree: usize,
    a_gens: &[Permutation],
    b_gens: &[Permutation],
) -> Vec<Permutation> {
    let a = elements_by_closure(degree, a_gens);
    let b = elements_by_closure(degree, b_gens);
    let mut comms = Vec::new();
    for x in &a {
        for y in &b {
            comms.push(x.commutator(y));
        }
    }
    if comms.is_empty() {
        comms.push(Permutation::identity(degree));
    }
    comms.sort_unstable();
    comms.dedup();
    elements_by_closure(degree, &comms)
}

/// Derived series term orders via all-pairs commutator subgroups.
pub fn derived_series_orders(degree: usize, gens: &[Permutation]) -> Vec<u64> {
    let mut current = elements_by_closure(degree, gens);
    let mut orders = vec![current.len() as u64];
    loop {
        let next = commutator_subgroup_all_pairs(degree, &current, &current);
        if next.len() == current.len() {
            if current.len() > 1 {
                orders.push(next.len() as u64);
            }
            break;
        }
        orders.push(next.len() as u64);
        if next.len() == 1 {
            break;
        }
        current = next;
    }
    orders
}

pub fn is_solvable(degree: usize, gens: &[Permutation]) -> bool {
    let orders = derived_series_orders(degree, gens);
    *orders.last().unwrap() == 1
}

pub fn is_nilpotent(degree: usize, gens: &[Permutation]) -> bool {
    let whole = elements_by_closure(degree, gens);
    let mut current = whole.clone();
    loop {
        let next = commutator_subgroup_all_pairs(degree, &current, &whole);
        if next.len() == current.len() {
            return current.len() == 1;
        }
        current = next;
        if current.len() == 1 {
            return true;
        }
    }
}

/// Normal closure of `seeds` in the group: one-shot conjugation of the seeds
/// by every group element, then closure.
pub fn normal_closure(
    degree: usize,
    group_gens: &[Permutation],
    seeds: &[Permutation],
) -> Vec<Permutation> {
    let elems = elements_by_closure(degree, group_gens);
    let mut conj = Vec::new();
    for s in seeds {
        for g in &elems {
            conj.push(s.conjugate_by(g));
        }
    }
    if conj.is_empty() {
        conj.push(Permutation::identity(degree));
    }
    conj.sort_unstable();
    conj.dedup();
    elements_by_closure(degree, &conj)
}

/// Every subgroup of the group, as sorted element lists, by repeatedly
/// extending known subgroups with outside elements. Exponential; keep the
/// group order at a couple hundred.
pub fn all_subgroups(degree: usize, gens: &[Permutation]) -> Vec<Vec<Permutation>> {
    let elems = elements_by_closure(degree, gens);
    let trivial = vec![Permutation::identity(degree)];
    let mut known: HashSet<Vec<Permutation>> = HashSet::from([trivial.clone()]);
    let mut queue = VecDeque::from([trivial]);
    while let Some(h) = queue.pop_front() {
        for e in &elems {
            if h.binary_search(e).is_ok() {
                continue;
            }
            let mut g = h.clone();
            g.push(e.clone());
            let k = elements_by_closure(degree, &g);
            if known.insert(k.clone()) {
                queue.push_back(k);
            }
        }
    }
    let mut out: Vec<Vec<Permutation>> = known.into_iter().collect();
    out.sort_by_key(|s| (s.len(), s.clone()));
    out
}

/// Subgroups of the group that are closed under conjugation by every element.
pub fn normal_subgroups(degree: usize, gens: &[Permutation]) -> Vec<Vec<Permutation>> {
    let elems = elements_by_closure(degree, gens);
    all_subgroups(degree, gens)
        .into_iter()
        .filter(|h| {
            h.iter()
                .all(|s| elems.iter().all(|g| h.binary_search(&s.conjugate_by(g)).is_ok()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str, degree: usize) -> Permutation {
        Permutation::parse(text, degree).unwrap()
    }

    #[test]
    fn closure_counts_small_groups() {
        assert_eq!(order_by_closure(4, &[p("(1 2)", 4), p("(1 2 3 4)", 4)]), 24);
        assert_eq!(order_by_closure(4, &[p("(1 2 3)", 4), p("(2 3 4)", 4)]), 12);
    }

    #[test]
    fn derived_series_of_s4() {
        let orders = derived_series_orders(4, &[p("(1 2)", 4), p("(1 2 3 4)", 4)]);
        assert_eq!(orders, vec![24, 12, 4, 1]);
    }

    #[test]
    fn a5_is_perfect() {
        let gens = [p("(1 2 3)", 5), p("(3 4 5)", 5)];
        assert_eq!(order_by_closure(5, &gens), 60);
        assert_eq!(derived_series_orders(5, &gens), vec![60, 60]);
        assert!(!is_solvable(5, &gens));
    }

    #[test]
    fn subgroup_scan_of_s3() {
        // S3 has 6 subgroups: 1, three C2, C3, S3.
        let subs = all_subgroups(3, &[p("(1 2)", 3), p("(1 2 3)", 3)]);
        assert_eq!(subs.len(), 6);
        let normals = normal_subgroups(3, &[p("(1 2)", 3), p("(1 2 3)", 3)]);
        assert_eq!(normals.len(), 3);
    }
}
