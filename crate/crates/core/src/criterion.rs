//! Conjugacy-class generation criteria: the k-conjugate solvability test, the
//! minimal-witness search, the criterion-based radical, the nilpotency
//! (Baer–Suzuki) pair check, the prime-order pair test, and the
//! five-conjugate maximal-Fitting-height subgroup search.
//!
//! A class passes the k-test when every k of its members generate a solvable
//! subgroup; since that is conjugation-invariant, exhaustive search fixes the
//! first entry as the class representative and iterates sorted multisets for
//! the rest. Anything that smells like a counterexample to the underlying
//! theorems surfaces as `TheoremViolationSuspected`, never as a quiet `false`.

use dashmap::DashMap;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::group::{
    conjugacy_classes, conjugation_orbit, normal_closure, ConjugacyClass, PermGroup, Subgroup,
};
use crate::height::fitting_height;
use crate::perm::Permutation;
use crate::series::{fitting_subgroup, is_nilpotent, is_solvable, solvable_radical};

/// Default cap on canonical tuples per exhaustive class test.
pub const DEFAULT_TUPLE_BUDGET: u64 = 100_000_000;
/// Default randomized sample count when the exhaustive budget is exceeded.
pub const DEFAULT_SAMPLE_BUDGET: u64 = 100_000;
/// Subgroups up to this order are memoized by their full element set.
const ELEMENT_MEMO_BOUND: u64 = 10_000;
/// Tuples are tested in parallel blocks of this size.
const BLOCK: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CachedProperty {
    Solvable,
    Nilpotent,
}

/// Memoized verdicts for generated subgroups, keyed by the deduplicated
/// generator set and, for subgroups of order at most 10⁴, by the sorted
/// element set. Tuple searches revisit the same subgroup constantly.
pub struct GroupPropertyCache {
    property: CachedProperty,
    by_gens: DashMap<Vec<u8>, bool>,
    by_elements: DashMap<[u8; 32], bool>,
}

fn perm_bytes(p: &Permutation, out: &mut Vec<u8>) {
    for &im in p.images() {
        out.extend_from_slice(&im.to_le_bytes());
    }
}

fn gens_key(gens: &[&Permutation]) -> Vec<u8> {
    let mut sorted: Vec<&Permutation> = gens.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut key = Vec::with_capacity(sorted.len() * sorted[0].degree() * 2);
    for g in sorted {
        perm_bytes(g, &mut key);
    }
    key
}

fn elements_key(elems: &[Permutation]) -> [u8; 32] {
    let mut hasher = Sha256::new();
    let mut buf = Vec::new();
    for e in elems {
        buf.clear();
        perm_bytes(e, &mut buf);
        hasher.update(&buf);
    }
    hasher.finalize().into()
}

impl GroupPropertyCache {
    pub fn new(property: CachedProperty) -> Self {
        GroupPropertyCache {
            property,
            by_gens: DashMap::new(),
            by_elements: DashMap::new(),
        }
    }

    fn compute(&self, group: &PermGroup) -> bool {
        match self.property {
            CachedProperty::Solvable => is_solvable(group),
            CachedProperty::Nilpotent => is_nilpotent(group),
        }
    }

    /// Verdict for `⟨gens⟩`.
    pub fn eval(&self, degree: usize, gens: &[&Permutation]) -> bool {
        let key = gens_key(gens);
        if let Some(hit) = self.by_gens.get(&key) {
            return *hit;
        }
        let group = PermGroup::from_generators(gens.iter().map(|g| (*g).clone()).collect())
            .unwrap_or_else(|_| PermGroup::trivial(degree));
        let verdict = if group.order() <= ELEMENT_MEMO_BOUND {
            let elems = group.elements(ELEMENT_MEMO_BOUND).expect("within bound");
            let ekey = elements_key(&elems);
            match self.by_elements.get(&ekey) {
                Some(hit) => *hit,
                None => {
                    let v = self.compute(&group);
                    self.by_elements.insert(ekey, v);
                    v
                }
            }
        } else {
            self.compute(&group)
        };
        self.by_gens.insert(key, verdict);
        verdict
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SearchMode {
    Exhaustive,
    Randomized { samples: u64, seed: u64 },
}

/// Outcome of a k-conjugate solvability test on one class.
#[derive(Debug, Clone)]
pub struct CriterionVerdict {
    pub class_rep: Permutation,
    pub k: usize,
    pub mode: SearchMode,
    pub all_solvable: bool,
    /// Present exactly when `all_solvable` is false; every entry lies in the
    /// class and the entries generate a nonsolvable subgroup.
    pub witness: Option<Vec<Permutation>>,
    pub tuples_checked: u64,
}

#[derive(Serialize)]
struct CriterionVerdictJson {
    class_rep: String,
    k: usize,
    #[serde(flatten)]
    mode: SearchMode,
    all_solvable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<String>>,
    tuples_checked: u64,
}

impl CriterionVerdict {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(CriterionVerdictJson {
            class_rep: self.class_rep.to_string(),
            k: self.k,
            mode: self.mode,
            all_solvable: self.all_solvable,
            witness: self
                .witness
                .as_ref()
                .map(|w| w.iter().map(|p| p.to_string()).collect()),
            tuples_checked: self.tuples_checked,
        })
        .expect("verdict serializes")
    }
}

/// Number of size-`k` multisets over `m` elements, saturating on overflow
/// (anything that saturates is far beyond every budget anyway).
fn multiset_count(m: u64, k: u32) -> u128 {
    // C(m + k - 1, k), computed with interleaved division to keep the
    // intermediate products exact.
    if m == 0 {
        return if k == 0 { 1 } else { 0 };
    }
    let n = m as u128 + k as u128 - 1;
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        match acc.checked_mul(n - i) {
            Some(v) => acc = v / (i + 1),
            None => return u128::MAX,
        }
    }
    acc
}

/// Non-decreasing index tuples over `0..m`, lexicographic.
struct MultisetOdometer {
    idx: Vec<usize>,
    m: usize,
    fresh: bool,
    done: bool,
}

impl MultisetOdometer {
    fn new(k: usize, m: usize) -> Self {
        MultisetOdometer {
            idx: vec![0; k],
            m,
            fresh: true,
            done: m == 0 && k > 0,
        }
    }
}

impl Iterator for MultisetOdometer {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if self.fresh {
            self.fresh = false;
            if self.idx.is_empty() {
                self.done = true;
            }
            return Some(self.idx.clone());
        }
        let k = self.idx.len();
        let mut pos = k;
        loop {
            if pos == 0 {
                self.done = true;
                return None;
            }
            pos -= 1;
            if self.idx[pos] + 1 < self.m {
                let v = self.idx[pos] + 1;
                for q in pos..k {
                    self.idx[q] = v;
                }
                return Some(self.idx.clone());
            }
        }
    }
}

/// Runs `nonsolvable(tuple)` over blocks of tuples in parallel with a
/// deterministic first-hit: returns the canonical index and tuple of the
/// first failing tuple, plus the number of tuples covered.
fn first_witness<I, F>(tuples: I, test_fails: F) -> (Option<(u64, Vec<usize>)>, u64)
where
    I: Iterator<Item = Vec<usize>>,
    F: Fn(&[usize]) -> bool + Sync,
{
    let mut tuples = tuples;
    let mut base: u64 = 0;
    loop {
        let block: Vec<Vec<usize>> = tuples.by_ref().take(BLOCK).collect();
        if block.is_empty() {
            return (None, base);
        }
        let hit = block
            .par_iter()
            .enumerate()
            .find_first(|(_, t)| test_fails(t));
        if let Some((i, t)) = hit {
            return (Some((base + i as u64 + 1, t.clone())), base + i as u64 + 1);
        }
        base += block.len() as u64;
    }
}

/// Tests whether every k members of the class generate a solvable subgroup.
///
/// Exhaustive mode covers every canonical tuple (representative first, sorted
/// multiset for the rest) and is a proof either way; randomized mode samples
/// conjugates with the recorded seed and its `all_solvable = true` is only a
/// failed search.
pub fn class_k_test(
    group: &PermGroup,
    class: &ConjugacyClass,
    k: usize,
    mode: SearchMode,
    budget: u64,
    cache: &GroupPropertyCache,
) -> Result<CriterionVerdict> {
    if k == 0 {
        return Err(Error::ParameterOutOfRange("k must be at least 1".into()));
    }
    if class.elements().is_empty() {
        return Err(Error::EmptyClass);
    }
    let rep = class.representative().clone();
    let degree = group.degree();
    let members = class.elements();

    let solvable_tuple = |rest: &[usize]| -> bool {
        let mut gens: Vec<&Permutation> = Vec::with_capacity(rest.len() + 1);
        gens.push(&rep);
        for &i in rest {
            gens.push(&members[i]);
        }
        cache.eval(degree, &gens)
    };

    let (witness_rest, tuples_checked) = match mode {
        SearchMode::Exhaustive => {
            let count = multiset_count(members.len() as u64, k as u32 - 1);
            if count > budget as u128 {
                return Err(Error::BudgetExceeded {
                    needed: count.min(u64::MAX as u128) as u64,
                    budget,
                });
            }
            let odometer = MultisetOdometer::new(k - 1, members.len());
            let (hit, checked) = first_witness(odometer, |t| !solvable_tuple(t));
            (
                hit.map(|(_, t)| t.iter().map(|&i| members[i].clone()).collect::<Vec<_>>()),
                checked,
            )
        }
        SearchMode::Randomized { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut drawn: u64 = 0;
            let mut found: Option<Vec<Permutation>> = None;
            'outer: while drawn < samples {
                let block_len = BLOCK.min((samples - drawn) as usize);
                let block: Vec<Vec<Permutation>> = (0..block_len)
                    .map(|_| {
                        (1..k)
                            .map(|_| {
                                let g = group.random_element(&mut rng);
                                rep.conjugate_by(&g)
                            })
                            .collect()
                    })
                    .collect();
                let hit = block.par_iter().enumerate().find_first(|(_, tuple)| {
                    let mut gens: Vec<&Permutation> = Vec::with_capacity(k);
                    gens.push(&rep);
                    gens.extend(tuple.iter());
                    !cache.eval(degree, &gens)
                });
                if let Some((i, tuple)) = hit {
                    drawn += i as u64 + 1;
                    found = Some(tuple.clone());
                    break 'outer;
                }
                drawn += block_len as u64;
            }
            (found, drawn)
        }
    };

    let witness = witness_rest.map(|rest| {
        let mut tuple = vec![rep.clone()];
        tuple.extend(rest);
        tuple
    });
    if let Some(w) = &witness {
        // Independent re-verification through the series module.
        let regen = PermGroup::from_generators(w.clone()).expect("witness shares the degree");
        assert!(
            !is_solvable(&regen),
            "witness re-verification failed: generated subgroup is solvable"
        );
        assert!(
            w.iter().all(|x| members.binary_search(x).is_ok()),
            "witness re-verification failed: entry outside the class"
        );
    }
    Ok(CriterionVerdict {
        class_rep: rep,
        k,
        mode,
        all_solvable: witness.is_none(),
        witness,
        tuples_checked,
    })
}

/// Whether the class generates a solvable subgroup, and if not, the least
/// k ≤ 4 for which some k members generate a nonsolvable one.
#[derive(Debug, Clone)]
pub struct WitnessProfile {
    pub class_rep: Permutation,
    pub class_size: usize,
    pub generates_solvable: bool,
    pub min_witness_k: Option<usize>,
    pub witness: Option<Vec<Permutation>>,
}

#[derive(Serialize)]
struct WitnessProfileJson {
    class_rep: String,
    class_size: usize,
    generates_solvable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_witness_k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<String>>,
}

impl WitnessProfile {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(WitnessProfileJson {
            class_rep: self.class_rep.to_string(),
            class_size: self.class_size,
            generates_solvable: self.generates_solvable,
            min_witness_k: self.min_witness_k,
            witness: self
                .witness
                .as_ref()
                .map(|w| w.iter().map(|p| p.to_string()).collect()),
        })
        .expect("profile serializes")
    }
}

/// Searches k = 1, 2, 3, 4 in order for the least witness size. A class whose
/// closure is nonsolvable must yield a witness at k ≤ 4; coming up empty is
/// reported as a suspected theorem violation, not as a soft answer.
pub fn min_witness(
    group: &PermGroup,
    class: &ConjugacyClass,
    exhaustive_budget: u64,
    sample_budget: u64,
    seed: u64,
    cache: &GroupPropertyCache,
) -> Result<WitnessProfile> {
    let rep = class.representative().clone();
    let closure = normal_closure(group, std::slice::from_ref(&rep));
    if is_solvable(closure.group()) {
        return Ok(WitnessProfile {
            class_rep: rep,
            class_size: class.size(),
            generates_solvable: true,
            min_witness_k: None,
            witness: None,
        });
    }
    let mut exhaustive_at_4 = false;
    for k in 1..=4 {
        let count = multiset_count(class.size() as u64, k as u32 - 1);
        let verdict = if count <= exhaustive_budget as u128 {
            if k == 4 {
                exhaustive_at_4 = true;
            }
            class_k_test(group, class, k, SearchMode::Exhaustive, exhaustive_budget, cache)?
        } else {
            class_k_test(
                group,
                class,
                k,
                SearchMode::Randomized {
                    samples: sample_budget,
                    seed,
                },
                exhaustive_budget,
                cache,
            )?
        };
        if !verdict.all_solvable {
            return Ok(WitnessProfile {
                class_rep: rep,
                class_size: class.size(),
                generates_solvable: false,
                min_witness_k: Some(k),
                witness: verdict.witness,
            });
        }
    }
    Err(Error::TheoremViolationSuspected(format!(
        "class of {} generates a nonsolvable subgroup but no witness of size <= 4 was found ({})",
        rep,
        if exhaustive_at_4 {
            "exhaustive coverage at k = 4"
        } else {
            "randomized search exhausted its sample budget"
        }
    )))
}

/// Radical from the k-criterion alone: generated by the classes every k of
/// whose members generate a solvable subgroup. Cross-checked against the
/// elementwise radical; a mismatch is a suspected theorem violation.
pub fn radical_by_criterion(
    group: &PermGroup,
    k: usize,
    class_bound: u64,
    exhaustive_budget: u64,
    sample_budget: u64,
    seed: u64,
) -> Result<Subgroup> {
    let cache = GroupPropertyCache::new(CachedProperty::Solvable);
    let classes = conjugacy_classes(group, class_bound)?;
    let mut qualifying: Vec<Permutation> = Vec::new();
    for class in &classes {
        let count = multiset_count(class.size() as u64, k as u32 - 1);
        let mode = if count <= exhaustive_budget as u128 {
            SearchMode::Exhaustive
        } else {
            SearchMode::Randomized {
                samples: sample_budget,
                seed,
            }
        };
        let verdict = class_k_test(group, class, k, mode, exhaustive_budget, &cache)?;
        if verdict.all_solvable {
            qualifying.push(class.representative().clone());
        }
    }
    let by_criterion = normal_closure(
        group,
        &qualifying
            .iter()
            .filter(|r| !r.is_identity())
            .cloned()
            .collect::<Vec<_>>(),
    );
    let exact = solvable_radical(group, class_bound)?;
    if !by_criterion.same_subgroup_as(&exact) {
        return Err(Error::TheoremViolationSuspected(format!(
            "criterion radical (order {}) differs from elementwise radical (order {})",
            by_criterion.order(),
            exact.order()
        )));
    }
    Ok(by_criterion)
}

/// Pairwise nilpotency versus nilpotent normal closure for a prime-order
/// element, the elementwise Baer–Suzuki statement.
#[derive(Debug, Clone, Serialize)]
pub struct BaerSuzukiReport {
    #[serde(serialize_with = "crate::criterion::perm_as_string")]
    pub element: Permutation,
    pub class_size: usize,
    pub all_pairs_nilpotent: bool,
    pub closure_nilpotent: bool,
}

pub(crate) fn perm_as_string<S>(p: &Permutation, s: S) -> std::result::Result<S::Ok, S::Error>
where
    S: serde::Serializer,
{
    s.serialize_str(&p.to_string())
}

pub fn baer_suzuki_check(
    group: &PermGroup,
    g: &Permutation,
    cache: &GroupPropertyCache,
) -> Result<BaerSuzukiReport> {
    debug_assert_eq!(cache.property, CachedProperty::Nilpotent);
    if !is_prime(g.order()) {
        return Err(Error::NotPrimeOrder(g.order()));
    }
    if !group.contains(g)? {
        return Err(Error::ElementNotInGroup);
    }
    let conjugates = conjugation_orbit(group, g);
    let degree = group.degree();
    let all_pairs_nilpotent = conjugates
        .par_iter()
        .all(|c| cache.eval(degree, &[g, c]));
    let closure = normal_closure(group, std::slice::from_ref(g));
    let closure_nilpotent = is_nilpotent(closure.group());
    let report = BaerSuzukiReport {
        element: g.clone(),
        class_size: conjugates.len(),
        all_pairs_nilpotent,
        closure_nilpotent,
    };
    if all_pairs_nilpotent != closure_nilpotent {
        return Err(Error::TheoremViolationSuspected(format!(
            "pairwise nilpotency ({}) disagrees with closure nilpotency ({}) for {}",
            all_pairs_nilpotent, closure_nilpotent, g
        )));
    }
    Ok(report)
}

/// Pair form of the solvability criterion for classes of prime order ≥ 5:
/// the class generates a solvable subgroup exactly when every pair does.
#[derive(Debug, Clone, Serialize)]
pub struct PairTestReport {
    #[serde(serialize_with = "crate::criterion::perm_as_string")]
    pub class_rep: Permutation,
    pub class_size: usize,
    pub element_order: u64,
    pub class_generates_solvable: bool,
    pub all_pairs_solvable: bool,
}

pub fn pair_test_prime_ge5(
    group: &PermGroup,
    class: &ConjugacyClass,
    cache: &GroupPropertyCache,
) -> Result<PairTestReport> {
    debug_assert_eq!(cache.property, CachedProperty::Solvable);
    let rep = class.representative();
    let order = rep.order();
    if !is_prime(order) || order < 5 {
        return Err(Error::OrderConditionViolated {
            order,
            condition: "prime order at least 5",
        });
    }
    let degree = group.degree();
    let all_pairs_solvable = class
        .elements()
        .par_iter()
        .all(|c| cache.eval(degree, &[rep, c]));
    let closure = normal_closure(group, std::slice::from_ref(rep));
    let class_generates_solvable = is_solvable(closure.group());
    let report = PairTestReport {
        class_rep: rep.clone(),
        class_size: class.size(),
        element_order: order,
        class_generates_solvable,
        all_pairs_solvable,
    };
    if class_generates_solvable != all_pairs_solvable {
        return Err(Error::TheoremViolationSuspected(format!(
            "pair solvability ({}) disagrees with class solvability ({}) for class of {}",
            all_pairs_solvable, class_generates_solvable, rep
        )));
    }
    Ok(report)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Searches subgroups `A = ⟨a, a^{g₂}, …, a^{g_m}⟩` whose generators are
/// mutually conjugate inside `A`, and returns one of maximal Fitting height.
/// Exhaustive over canonical conjugate multisets when they fit in `budget`,
/// otherwise `budget` seeded random tuples; the tuple `(a, …, a)` always
/// qualifies, so the search cannot come back empty.
pub fn max_fh_subgroup_search(
    group: &PermGroup,
    a: &Permutation,
    m: usize,
    budget: u64,
    seed: u64,
) -> Result<Subgroup> {
    if !is_solvable(group) {
        return Err(Error::NotSolvable);
    }
    if !group.contains(a)? {
        return Err(Error::ElementNotInGroup);
    }
    if a.is_identity() {
        return Ok(Subgroup::trivial(group));
    }
    let class = conjugation_orbit(group, a);
    let count = multiset_count(class.len() as u64, m as u32 - 1);

    // Per-subgroup cache: conjugation orbit of `a` inside A, and fh(A).
    let seen: DashMap<[u8; 32], (Vec<Permutation>, u32)> = DashMap::new();
    let evaluate = |rest: &[usize]| -> Option<u32> {
        let mut gens: Vec<Permutation> = Vec::with_capacity(m);
        gens.push(a.clone());
        for &i in rest {
            gens.push(class[i].clone());
        }
        let subgroup = PermGroup::from_generators(gens.clone()).expect("uniform degree");
        let elems = subgroup
            .elements(u64::MAX)
            .expect("solvable subgroup at desk scale");
        let key = elements_key(&elems);
        let entry = seen.entry(key).or_insert_with(|| {
            let orbit_in_a = conjugation_orbit(&subgroup, a);
            let fh = fitting_height(&subgroup).expect("subgroup of a solvable group");
            (orbit_in_a, fh)
        });
        let (orbit_in_a, fh) = entry.value();
        let mutually_conjugate = gens
            .iter()
            .all(|x| orbit_in_a.binary_search(x).is_ok());
        mutually_conjugate.then_some(*fh)
    };

    let pick = |x: (u32, u64, Vec<usize>), y: (u32, u64, Vec<usize>)| {
        // Highest height wins; ties go to the earliest tuple.
        if (y.0, std::cmp::Reverse(y.1)) > (x.0, std::cmp::Reverse(x.1)) {
            y
        } else {
            x
        }
    };
    let mut best: Option<(u32, u64, Vec<usize>)> = None; // (fh, index, tuple)
    let fold_block = |block: &[Vec<usize>], base: u64, best: &mut Option<(u32, u64, Vec<usize>)>| {
        let block_best = block
            .par_iter()
            .enumerate()
            .filter_map(|(i, t)| evaluate(t).map(|fh| (fh, base + i as u64, t.clone())))
            .reduce_with(pick);
        if let Some(candidate) = block_best {
            *best = match best.take() {
                None => Some(candidate),
                Some(cur) => Some(pick(cur, candidate)),
            };
        }
    };

    if count <= budget as u128 {
        let mut odometer = MultisetOdometer::new(m - 1, class.len());
        let mut base: u64 = 0;
        loop {
            let block: Vec<Vec<usize>> = odometer.by_ref().take(BLOCK).collect();
            if block.is_empty() {
                break;
            }
            fold_block(&block, base, &mut best);
            base += block.len() as u64;
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut drawn: u64 = 0;
        // Seed with the constant tuple so the search is never empty-handed.
        fold_block(&[vec![class.binary_search(a).expect("a is in its own class"); m - 1]], 0, &mut best);
        while drawn < budget {
            let block_len = BLOCK.min((budget - drawn) as usize);
            let block: Vec<Vec<usize>> = (0..block_len)
                .map(|_| {
                    (1..m)
                        .map(|_| {
                            let g = group.random_element(&mut rng);
                            class
                                .binary_search(&a.conjugate_by(&g))
                                .expect("conjugates stay in the class")
                        })
                        .collect()
                })
                .collect();
            fold_block(&block, 1 + drawn, &mut best);
            drawn += block_len as u64;
        }
    }

    let (_, _, tuple) = best.expect("the constant tuple always qualifies");
    let mut gens = vec![a.clone()];
    for &i in &tuple {
        gens.push(class[i].clone());
    }
    Subgroup::new(group, gens)
}

/// The five-conjugate subgroup property: with `A` of maximal Fitting height
/// among five-conjugate subgroups, `sfit(A) ≤ F(G)`.
#[derive(Debug, Clone, Serialize)]
pub struct FiveConjugateReport {
    #[serde(serialize_with = "crate::criterion::perm_as_string")]
    pub element: Permutation,
    pub subgroup_order: u64,
    pub subgroup_height: u32,
    pub sfit_order: u64,
    pub fitting_order: u64,
    pub holds: bool,
}

pub fn five_conjugate_sfit_check(
    group: &PermGroup,
    a: &Permutation,
    budget: u64,
    class_bound: u64,
) -> Result<FiveConjugateReport> {
    let subgroup = max_fh_subgroup_search(group, a, 5, budget, 0)?;
    let fitting = fitting_subgroup(group, class_bound)?;
    let (sfit_sub, height) = if subgroup.is_trivial() {
        (Subgroup::trivial(group), 0)
    } else {
        let s = crate::height::sfit(subgroup.group())?;
        let h = fitting_height(subgroup.group())?;
        (Subgroup::from_group(group, s.group().clone()), h)
    };
    let holds = sfit_sub
        .generators()
        .iter()
        .all(|g| fitting.contains(g));
    let report = FiveConjugateReport {
        element: a.clone(),
        subgroup_order: subgroup.order(),
        subgroup_height: height,
        sfit_order: sfit_sub.order(),
        fitting_order: fitting.order(),
        holds,
    };
    if !holds {
        return Err(Error::TheoremViolationSuspected(format!(
            "sfit(A) (order {}) is not contained in F(G) (order {}) for a = {}",
            report.sfit_order, report.fitting_order, a
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::GroupSpec;

    fn p(text: &str, degree: usize) -> Permutation {
        Permutation::parse(text, degree).unwrap()
    }

    fn class_of(g: &PermGroup, rep: &Permutation) -> ConjugacyClass {
        conjugacy_classes(g, 1_000_000)
            .unwrap()
            .into_iter()
            .find(|c| c.elements().binary_search(rep).is_ok())
            .expect("element belongs to some class")
    }

    fn solv_cache() -> GroupPropertyCache {
        GroupPropertyCache::new(CachedProperty::Solvable)
    }

    #[test]
    fn multiset_counts() {
        assert_eq!(multiset_count(10, 3), 220);
        assert_eq!(multiset_count(10, 0), 1);
        assert_eq!(multiset_count(1, 4), 1);
        let total: usize = MultisetOdometer::new(3, 10).count();
        assert_eq!(total, 220);
    }

    #[test]
    fn transpositions_in_s5_pass_at_3_fail_at_4() {
        let s5 = GroupSpec::Sym(5).build().unwrap();
        let class = class_of(&s5, &p("(1 2)", 5));
        assert_eq!(class.size(), 10);
        let cache = solv_cache();
        let v3 = class_k_test(&s5, &class, 3, SearchMode::Exhaustive, 1_000_000, &cache).unwrap();
        assert!(v3.all_solvable);
        assert_eq!(v3.tuples_checked, 55); // C(11, 2)
        let v4 = class_k_test(&s5, &class, 4, SearchMode::Exhaustive, 1_000_000, &cache).unwrap();
        assert!(!v4.all_solvable);
        let witness = v4.witness.unwrap();
        assert_eq!(witness.len(), 4);
        let w = PermGroup::from_generators(witness).unwrap();
        assert!(!is_solvable(&w));
    }

    #[test]
    fn any_class_of_a_solvable_group_passes() {
        let s4 = GroupSpec::Sym(4).build().unwrap();
        let cache = solv_cache();
        for class in conjugacy_classes(&s4, 1000).unwrap() {
            let v = class_k_test(&s4, &class, 4, SearchMode::Exhaustive, 1_000_000, &cache).unwrap();
            assert!(v.all_solvable);
        }
    }

    #[test]
    fn randomized_mode_finds_witness_in_a5() {
        let a5 = GroupSpec::Alt(5).build().unwrap();
        let class = class_of(&a5, &p("(1 2 3 4 5)", 5));
        let cache = solv_cache();
        let mode = SearchMode::Randomized { samples: 10_000, seed: 0 };
        let v = class_k_test(&a5, &class, 2, mode, 1_000_000, &cache).unwrap();
        assert!(!v.all_solvable);
    }

    #[test]
    fn min_witness_values() {
        let s5 = GroupSpec::Sym(5).build().unwrap();
        let cache = solv_cache();
        let class = class_of(&s5, &p("(1 2)", 5));
        let profile = min_witness(&s5, &class, 1_000_000, 10_000, 0, &cache).unwrap();
        assert!(!profile.generates_solvable);
        assert_eq!(profile.min_witness_k, Some(4));

        let a5 = GroupSpec::Alt(5).build().unwrap();
        let class = class_of(&a5, &p("(1 2 3 4 5)", 5));
        let cache = solv_cache();
        let profile = min_witness(&a5, &class, 1_000_000, 10_000, 0, &cache).unwrap();
        assert_eq!(profile.min_witness_k, Some(2));

        let s4 = GroupSpec::Sym(4).build().unwrap();
        let cache = solv_cache();
        for class in conjugacy_classes(&s4, 1000).unwrap() {
            let profile = min_witness(&s4, &class, 1_000_000, 10_000, 0, &cache).unwrap();
            assert!(profile.generates_solvable);
            assert_eq!(profile.min_witness_k, None);
        }
    }

    #[test]
    fn criterion_radical_matches_elementwise_radical() {
        // S3 x A5 with radical S3 x 1 of order 6.
        let g = GroupSpec::parse("direct:sym:3,alt:5").unwrap().build().unwrap();
        let r = radical_by_criterion(&g, 4, 100_000, 1_000_000, 100_000, 0).unwrap();
        assert_eq!(r.order(), 6);

        let a5 = GroupSpec::Alt(5).build().unwrap();
        let r = radical_by_criterion(&a5, 4, 100_000, 1_000_000, 100_000, 0).unwrap();
        assert!(r.is_trivial());

        let s4 = GroupSpec::Sym(4).build().unwrap();
        let r = radical_by_criterion(&s4, 4, 100_000, 1_000_000, 100_000, 0).unwrap();
        assert_eq!(r.order(), 24);
    }

    #[test]
    fn baer_suzuki_examples() {
        let nilp = GroupPropertyCache::new(CachedProperty::Nilpotent);
        let a4 = GroupSpec::Alt(4).build().unwrap();
        let report = baer_suzuki_check(&a4, &p("(1 2)(3 4)", 4), &nilp).unwrap();
        assert!(report.all_pairs_nilpotent);
        assert!(report.closure_nilpotent);

        let s4 = GroupSpec::Sym(4).build().unwrap();
        let report = baer_suzuki_check(&s4, &p("(1 2)", 4), &nilp).unwrap();
        assert!(!report.all_pairs_nilpotent);
        assert!(!report.closure_nilpotent);

        let c6 = GroupSpec::Cyclic(6).build().unwrap();
        let g2 = p("(1 4)(2 5)(3 6)", 6); // the order-2 element of C6
        let report = baer_suzuki_check(&c6, &g2, &nilp).unwrap();
        assert!(report.all_pairs_nilpotent && report.closure_nilpotent);
    }

    #[test]
    fn baer_suzuki_rejects_composite_order() {
        let nilp = GroupPropertyCache::new(CachedProperty::Nilpotent);
        let c6 = GroupSpec::Cyclic(6).build().unwrap();
        let g = p("(1 2 3 4 5 6)", 6);
        assert!(matches!(
            baer_suzuki_check(&c6, &g, &nilp),
            Err(Error::NotPrimeOrder(6))
        ));
    }

    #[test]
    fn pair_test_examples() {
        let cache = solv_cache();
        let psl27 = GroupSpec::Psl2(7).build().unwrap();
        let seven_cycle_class = conjugacy_classes(&psl27, 1000)
            .unwrap()
            .into_iter()
            .find(|c| c.representative().order() == 7)
            .unwrap();
        let report = pair_test_prime_ge5(&psl27, &seven_cycle_class, &cache).unwrap();
        assert!(!report.class_generates_solvable);
        assert!(!report.all_pairs_solvable);

        let c5 = GroupSpec::Cyclic(5).build().unwrap();
        let class = class_of(&c5, &p("(1 2 3 4 5)", 5));
        let report = pair_test_prime_ge5(&c5, &class, &cache).unwrap();
        assert!(report.class_generates_solvable && report.all_pairs_solvable);

        let f20 = GroupSpec::Frobenius20.build().unwrap();
        let class = conjugacy_classes(&f20, 1000)
            .unwrap()
            .into_iter()
            .find(|c| c.representative().order() == 5)
            .unwrap();
        let report = pair_test_prime_ge5(&f20, &class, &cache).unwrap();
        assert!(report.class_generates_solvable && report.all_pairs_solvable);
    }

    #[test]
    fn pair_test_rejects_small_order() {
        let cache = solv_cache();
        let s4 = GroupSpec::Sym(4).build().unwrap();
        let class = class_of(&s4, &p("(1 2 3)", 4));
        assert!(matches!(
            pair_test_prime_ge5(&s4, &class, &cache),
            Err(Error::OrderConditionViolated { order: 3, .. })
        ));
    }

    #[test]
    fn max_fh_search_on_s4_reaches_the_whole_group() {
        let s4 = GroupSpec::Sym(4).build().unwrap();
        let a = max_fh_subgroup_search(&s4, &p("(1 2)", 4), 5, 1_000_000, 0).unwrap();
        assert_eq!(a.order(), 24);
        assert_eq!(fitting_height(a.group()).unwrap(), 3);
    }

    #[test]
    fn max_fh_search_in_abelian_group_returns_cyclic() {
        let c6 = GroupSpec::Cyclic(6).build().unwrap();
        let g = p("(1 2 3 4 5 6)", 6);
        let a = max_fh_subgroup_search(&c6, &g, 5, 1_000_000, 0).unwrap();
        assert_eq!(a.order(), 6);
        assert_eq!(fitting_height(a.group()).unwrap(), 1);
    }

    #[test]
    fn max_fh_search_with_three_cycle_in_s3() {
        let s3 = GroupSpec::Sym(3).build().unwrap();
        let a = max_fh_subgroup_search(&s3, &p("(1 2 3)", 3), 5, 1_000_000, 0).unwrap();
        // Tuples mixing both 3-cycles fail mutual conjugacy inside C3.
        assert_eq!(a.order(), 3);
        assert_eq!(fitting_height(a.group()).unwrap(), 1);
    }

    #[test]
    fn five_conjugate_property_on_s4_and_nilpotent_groups() {
        let s4 = GroupSpec::Sym(4).build().unwrap();
        let report = five_conjugate_sfit_check(&s4, &p("(1 2)", 4), 1_000_000, 100_000).unwrap();
        assert!(report.holds);
        assert_eq!(report.sfit_order, 4);
        assert_eq!(report.fitting_order, 4);

        let d4 = GroupSpec::Dihedral(4).build().unwrap();
        for class in conjugacy_classes(&d4, 1000).unwrap() {
            let report =
                five_conjugate_sfit_check(&d4, class.representative(), 1_000_000, 100_000).unwrap();
            assert!(report.holds);
        }
    }

    #[test]
    fn five_conjugate_property_on_s3_times_s3() {
        // a = the diagonal transposition ((1 2), (1 2)) of S3 x S3.
        let g = GroupSpec::parse("direct:sym:3,sym:3").unwrap().build().unwrap();
        assert_eq!(g.order(), 36);
        let a = p("(1 2)(4 5)", 6);
        let report = five_conjugate_sfit_check(&g, &a, 1_000_000, 100_000).unwrap();
        assert!(report.holds);
    }

    #[test]
    fn max_fh_search_randomized_fallback_matches_exhaustive_on_s4() {
        let s4 = GroupSpec::Sym(4).build().unwrap();
        let a = p("(1 2)", 4);
        let exhaustive = max_fh_subgroup_search(&s4, &a, 5, 1_000_000, 0).unwrap();
        // Budget 3 < C(9,4) canonical tuples forces the sampled path.
        let sampled = max_fh_subgroup_search(&s4, &a, 5, 3, 123).unwrap();
        assert!(sampled.order() <= exhaustive.order());
        assert!(fitting_height(sampled.group()).unwrap() <= 3);
    }

    #[test]
    fn verdict_serializes_with_mode() {
        let s4 = GroupSpec::Sym(4).build().unwrap();
        let cache = solv_cache();
        let class = class_of(&s4, &p("(1 2)", 4));
        let v = class_k_test(&s4, &class, 4, SearchMode::Exhaustive, 1_000_000, &cache).unwrap();
        let json = v.to_json();
        assert_eq!(json["mode"], "exhaustive");
        assert_eq!(json["all_solvable"], true);
    }
}
