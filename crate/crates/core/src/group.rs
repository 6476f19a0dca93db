//! Permutation groups backed by deterministic stabilizer chains.
//!
//! A [`PermGroup`] is a cheaply clonable handle (shared inner state) holding a
//! generator list, a stabilizer chain built on first demand, and an element
//! list enumerated on first demand. Everything is immutable once built, so
//! groups can be read from parallel workers freely.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, OnceLock};

use rand::Rng;

use crate::error::{Error, Result};
use crate::perm::{Permutation, Point};

/// Default cap on explicit element enumeration (conjugacy classes, oracles).
pub const DEFAULT_ENUMERATION_BOUND: u64 = 200_000;

/// Orbit and transversal of one base point.
#[derive(Debug, Clone)]
struct ChainLevel {
    base: Point,
    /// `transversal[p]` maps `base` to `p`; `None` when `p` is off-orbit.
    transversal: Vec<Option<Permutation>>,
    /// Orbit in BFS discovery order.
    orbit: Vec<Point>,
}

impl ChainLevel {
    fn new(degree: usize, base: Point) -> Self {
        let mut transversal = vec![None; degree];
        transversal[base as usize] = Some(Permutation::identity(degree));
        ChainLevel {
            base,
            transversal,
            orbit: vec![base],
        }
    }
}

/// Deterministic Schreier–Sims stabilizer chain.
///
/// One shared strong-generator list; level `i` works with the strong
/// generators fixing the first `i` base points, and its orbit/transversal is
/// rebuilt from exactly that set. The verification loop walks levels from the
/// deepest up, sifting every Schreier generator and restarting at the
/// drop-out level whenever a residue survives. Base points are the smallest
/// point moved by the generator that forced them, so identical generator
/// lists produce identical chains.
#[derive(Debug, Clone)]
pub struct StabChain {
    degree: usize,
    base: Vec<Point>,
    strong_gens: Vec<Permutation>,
    levels: Vec<ChainLevel>,
}

impl StabChain {
    pub fn build(degree: usize, gens: &[Permutation]) -> StabChain {
        let mut chain = StabChain {
            degree,
            base: Vec::new(),
            strong_gens: Vec::new(),
            levels: Vec::new(),
        };
        let mut touched = false;
        for g in gens {
            if !g.is_identity() && !chain.strong_gens.contains(g) {
                chain.push_strong_gen(g.clone());
                touched = true;
            }
        }
        if touched {
            chain.run_schreier_sims();
        }
        chain
    }

    pub fn order(&self) -> u64 {
        self.levels.iter().map(|l| l.orbit.len() as u64).product()
    }

    /// Registers a strong generator, appending a base point if it would
    /// otherwise fix the whole base.
    fn push_strong_gen(&mut self, g: Permutation) {
        if self.base.iter().all(|&b| g.apply(b) == b) {
            let b = g
                .smallest_moved_point()
                .expect("identity is never a strong generator");
            self.base.push(b);
        }
        self.strong_gens.push(g);
    }

    /// Indices of strong generators fixing the first `level` base points.
    fn gen_indices_at(&self, level: usize) -> Vec<usize> {
        self.strong_gens
            .iter()
            .enumerate()
            .filter(|(_, g)| self.base[..level].iter().all(|&b| g.apply(b) == b))
            .map(|(i, _)| i)
            .collect()
    }

    fn rebuild_level(&mut self, i: usize) {
        let mut level = ChainLevel::new(self.degree, self.base[i]);
        let gen_idx = self.gen_indices_at(i);
        let mut queue = VecDeque::from([level.base]);
        while let Some(gamma) = queue.pop_front() {
            let rep = level.transversal[gamma as usize].clone().unwrap();
            for &gi in &gen_idx {
                let g = &self.strong_gens[gi];
                let delta = g.apply(gamma);
                if level.transversal[delta as usize].is_none() {
                    level.transversal[delta as usize] = Some(rep.compose(g));
                    level.orbit.push(delta);
                    queue.push_back(delta);
                }
            }
        }
        if i < self.levels.len() {
            self.levels[i] = level;
        } else {
            debug_assert_eq!(i, self.levels.len());
            self.levels.push(level);
        }
    }

    fn rebuild_all(&mut self) {
        self.levels.truncate(self.base.len());
        for i in 0..self.base.len() {
            self.rebuild_level(i);
        }
    }

    /// Bottom-up verification: every Schreier generator of every level must
    /// sift to the identity through the deeper levels.
    fn run_schreier_sims(&mut self) {
        self.rebuild_all();
        if self.levels.is_empty() {
            return;
        }
        let mut i = self.levels.len() - 1;
        loop {
            self.rebuild_level(i);
            let mut pending: Option<(usize, Permutation)> = None;
            let gen_idx = self.gen_indices_at(i);
            'scan: for oi in 0..self.levels[i].orbit.len() {
                let gamma = self.levels[i].orbit[oi];
                let rep = self.levels[i].transversal[gamma as usize]
                    .clone()
                    .expect("orbit points have representatives");
                for &gi in &gen_idx {
                    let g = &self.strong_gens[gi];
                    let delta = g.apply(gamma);
                    let rep_delta = self.levels[i].transversal[delta as usize]
                        .as_ref()
                        .expect("orbit is closed under its generators");
                    let s = rep.compose(g).compose(&rep_delta.inverse());
                    if s.is_identity() {
                        continue;
                    }
                    let (j, residue) = self.sift_from(i + 1, s);
                    if !residue.is_identity() {
                        pending = Some((j, residue));
                        break 'scan;
                    }
                }
            }
            match pending {
                Some((j, residue)) => {
                    self.push_strong_gen(residue);
                    self.rebuild_all();
                    // The residue joined the generator sets of levels up to j;
                    // reverify from there back up.
                    i = j.min(self.levels.len() - 1);
                }
                None => {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                }
            }
        }
    }

    /// Sifts `p` starting at `start`; returns the level where sifting stopped
    /// and the residue. Membership means the residue is the identity.
    fn sift_from(&self, start: usize, p: Permutation) -> (usize, Permutation) {
        let mut residue = p;
        for (i, level) in self.levels.iter().enumerate().skip(start) {
            if residue.is_identity() {
                return (i, residue);
            }
            let beta = residue.apply(level.base);
            match &level.transversal[beta as usize] {
                None => return (i, residue),
                Some(rep) => residue = residue.compose(&rep.inverse()),
            }
        }
        (self.levels.len(), residue)
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        debug_assert_eq!(p.degree(), self.degree);
        let (_, residue) = self.sift_from(0, p.clone());
        residue.is_identity()
    }

    /// Adds `p` to the group if it is not already a member.
    pub fn extend(&mut self, p: Permutation) {
        if p.is_identity() || self.contains(&p) {
            return;
        }
        self.push_strong_gen(p);
        self.run_schreier_sims();
    }

    /// Uniformly random element via independent transversal choices.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Permutation {
        let mut out = Permutation::identity(self.degree);
        for level in self.levels.iter().rev() {
            let gamma = level.orbit[rng.gen_range(0..level.orbit.len())];
            let rep = level.transversal[gamma as usize].as_ref().unwrap();
            out = out.compose(rep);
        }
        out
    }

    pub fn base_points(&self) -> &[Point] {
        &self.base
    }
}

#[derive(Debug)]
struct GroupInner {
    degree: usize,
    gens: Vec<Permutation>,
    chain: OnceLock<StabChain>,
    elements: OnceLock<Arc<Vec<Permutation>>>,
}

/// A permutation group given by generators. Cloning shares the underlying
/// chain and element cache.
#[derive(Debug, Clone)]
pub struct PermGroup {
    inner: Arc<GroupInner>,
}

impl PermGroup {
    /// Builds a group from a nonempty generator list of uniform degree.
    /// Identity generators are tolerated; a list of identities yields the
    /// trivial group.
    pub fn from_generators(gens: Vec<Permutation>) -> Result<PermGroup> {
        let first = gens.first().ok_or(Error::EmptyGeneratorList)?;
        let degree = first.degree();
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(degree, g.degree()));
            }
        }
        let mut kept: Vec<Permutation> = gens.into_iter().filter(|g| !g.is_identity()).collect();
        if kept.is_empty() {
            kept.push(Permutation::identity(degree));
        }
        Ok(PermGroup {
            inner: Arc::new(GroupInner {
                degree,
                gens: kept,
                chain: OnceLock::new(),
                elements: OnceLock::new(),
            }),
        })
    }

    /// The trivial group on `degree` points.
    pub fn trivial(degree: usize) -> PermGroup {
        PermGroup::from_generators(vec![Permutation::identity(degree)]).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.inner.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.inner.gens
    }

    pub fn chain(&self) -> &StabChain {
        self.inner
            .chain
            .get_or_init(|| StabChain::build(self.inner.degree, &self.inner.gens))
    }

    pub fn order(&self) -> u64 {
        self.chain().order()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        if p.degree() != self.degree() {
            return Err(Error::DegreeMismatch(self.degree(), p.degree()));
        }
        Ok(self.chain().contains(p))
    }

    /// Membership for a permutation known to have the right degree.
    pub fn contains_unchecked(&self, p: &Permutation) -> bool {
        self.chain().contains(p)
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Permutation {
        self.chain().random_element(rng)
    }

    /// All elements, sorted, enumerated by closure under the generators.
    /// Fails with `GroupTooLarge` when the order exceeds `bound`.
    pub fn elements(&self, bound: u64) -> Result<Arc<Vec<Permutation>>> {
        let order = self.order();
        if order > bound {
            return Err(Error::GroupTooLarge { order, bound });
        }
        Ok(Arc::clone(self.inner.elements.get_or_init(|| {
            let mut elems = close_under_products(self.degree(), &self.inner.gens);
            elems.sort_unstable();
            Arc::new(elems)
        })))
    }

    /// True when every pair of generators commutes.
    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        for (i, a) in gens.iter().enumerate() {
            for b in &gens[i + 1..] {
                if a.compose(b) != b.compose(a) {
                    return false;
                }
            }
        }
        true
    }

    /// True when the two groups are equal as sets.
    pub fn same_group_as(&self, other: &PermGroup) -> bool {
        self.degree() == other.degree()
            && self.order() == other.order()
            && self.generators().iter().all(|g| other.contains_unchecked(g))
    }

    /// True when `self` is contained in `other`.
    pub fn subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree() == other.degree()
            && self.generators().iter().all(|g| other.contains_unchecked(g))
    }
}

/// BFS closure of a generator list under right multiplication.
pub(crate) fn close_under_products(degree: usize, gens: &[Permutation]) -> Vec<Permutation> {
    let mut seen: HashSet<Permutation> = HashSet::new();
    let id = Permutation::identity(degree);
    let mut queue = VecDeque::from([id.clone()]);
    seen.insert(id);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = p.compose(g);
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    seen.into_iter().collect()
}

/// A generator-defined subgroup viewed inside a parent group.
#[derive(Debug, Clone)]
pub struct Subgroup {
    parent: PermGroup,
    group: PermGroup,
    normal: OnceLock<bool>,
}

impl Subgroup {
    /// Checks that every generator lies in `parent`.
    pub fn new(parent: &PermGroup, gens: Vec<Permutation>) -> Result<Subgroup> {
        for g in &gens {
            if !parent.contains(g)? {
                return Err(Error::ElementNotInGroup);
            }
        }
        let group = if gens.is_empty() {
            PermGroup::trivial(parent.degree())
        } else {
            PermGroup::from_generators(gens)?
        };
        Ok(Subgroup {
            parent: parent.clone(),
            group,
            normal: OnceLock::new(),
        })
    }

    pub fn trivial(parent: &PermGroup) -> Subgroup {
        Subgroup {
            group: PermGroup::trivial(parent.degree()),
            parent: parent.clone(),
            normal: OnceLock::new(),
        }
    }

    /// The whole parent as a subgroup of itself.
    pub fn full(parent: &PermGroup) -> Subgroup {
        Subgroup {
            group: parent.clone(),
            parent: parent.clone(),
            normal: OnceLock::new(),
        }
    }

    /// Wraps an already-verified group; callers must guarantee containment.
    pub(crate) fn from_group(parent: &PermGroup, group: PermGroup) -> Subgroup {
        Subgroup {
            parent: parent.clone(),
            group,
            normal: OnceLock::new(),
        }
    }

    pub fn parent(&self) -> &PermGroup {
        &self.parent
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn order(&self) -> u64 {
        self.group.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.group.is_trivial()
    }

    pub fn generators(&self) -> &[Permutation] {
        self.group.generators()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.group.contains_unchecked(p)
    }

    /// Verified normality: `s^g` stays inside for all parent generators `g`
    /// and subgroup generators `s`. Cached after the first check.
    pub fn is_normal(&self) -> bool {
        *self.normal.get_or_init(|| {
            self.group.generators().iter().all(|s| {
                self.parent
                    .generators()
                    .iter()
                    .all(|g| self.group.contains_unchecked(&s.conjugate_by(g)))
            })
        })
    }

    /// Containment of `self` in `other` as subgroups of a common parent.
    pub fn contained_in(&self, other: &Subgroup) -> bool {
        self.group.subgroup_of(other.group())
    }

    pub fn same_subgroup_as(&self, other: &Subgroup) -> bool {
        self.group.same_group_as(other.group())
    }
}

/// Smallest normal subgroup of `parent` containing the given generators:
/// iterated conjugation by parent generators until closed, with membership
/// tracked by an incrementally extended chain.
pub fn normal_closure(parent: &PermGroup, seed_gens: &[Permutation]) -> Subgroup {
    let degree = parent.degree();
    let mut chain = StabChain::build(degree, &[]);
    let mut gens: Vec<Permutation> = Vec::new();
    let mut queue: VecDeque<Permutation> = seed_gens
        .iter()
        .filter(|g| !g.is_identity())
        .cloned()
        .collect();
    while let Some(x) = queue.pop_front() {
        if chain.contains(&x) {
            continue;
        }
        chain.extend(x.clone());
        for g in parent.generators() {
            queue.push_back(x.conjugate_by(g));
        }
        gens.push(x);
    }
    let group = if gens.is_empty() {
        PermGroup::trivial(degree)
    } else {
        PermGroup::from_generators(gens).expect("closure generators share the parent degree")
    };
    Subgroup::from_group(parent, group)
}

/// Normal closure of a subgroup handle inside its parent.
pub fn normal_closure_of(sub: &Subgroup) -> Subgroup {
    normal_closure(sub.parent(), sub.generators())
}

/// A conjugacy class with its full, sorted member list.
#[derive(Debug, Clone)]
pub struct ConjugacyClass {
    representative: Permutation,
    elements: Vec<Permutation>,
}

impl ConjugacyClass {
    pub fn representative(&self) -> &Permutation {
        &self.representative
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }
}

/// The conjugation orbit of `x` under `group`, sorted.
pub fn conjugation_orbit(group: &PermGroup, x: &Permutation) -> Vec<Permutation> {
    let mut seen: HashSet<Permutation> = HashSet::new();
    let mut queue = VecDeque::from([x.clone()]);
    seen.insert(x.clone());
    while let Some(p) = queue.pop_front() {
        for g in group.generators() {
            let q = p.conjugate_by(g);
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    let mut orbit: Vec<Permutation> = seen.into_iter().collect();
    orbit.sort_unstable();
    orbit
}

/// Partition of the group into conjugacy classes by explicit enumeration.
/// Classes are sorted by their lexicographically least member, which also
/// serves as the representative; the identity class comes first.
pub fn conjugacy_classes(group: &PermGroup, bound: u64) -> Result<Vec<ConjugacyClass>> {
    let elems = group.elements(bound)?;
    let index: HashMap<&Permutation, usize> =
        elems.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut assigned = vec![false; elems.len()];
    let mut classes = Vec::new();
    for (i, e) in elems.iter().enumerate() {
        if assigned[i] {
            continue;
        }
        let orbit = conjugation_orbit(group, e);
        for member in &orbit {
            assigned[index[member]] = true;
        }
        classes.push(ConjugacyClass {
            representative: orbit[0].clone(),
            elements: orbit,
        });
    }
    // Elements are scanned in sorted order, so classes are already ordered by
    // least member; keep that as the canonical order.
    Ok(classes)
}
