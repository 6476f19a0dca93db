//! Modules over prime fields for permutation groups in coprime (semisimple)
//! characteristic: exact row reduction, spinning, irreducibility testing, and
//! splitting the natural permutation module into irreducible constituents via
//! averaged projections. Supplies the test cases for the fixed-space bound
//! `4·dim C_V(a) ≤ 3·dim V`.
//!
//! Row-vector convention throughout: vectors are rows, the action is
//! `v ↦ v·M(g)`, and `M(g h) = M(g)·M(h)` with left-to-right composition.

use std::collections::{HashMap, VecDeque};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Hypothesis, Result};
use crate::group::{normal_closure, PermGroup};
use crate::perm::Permutation;
use crate::series::is_solvable;

/// Exhaustive irreducibility scan is allowed while `p^dim` stays below this.
pub const EXHAUSTIVE_SPIN_BOUND: u64 = 10_000_000;
const SAMPLED_SPIN_TRIALS: usize = 200;
const SPLIT_ATTEMPTS: usize = 60;

/// Dense matrix over GF(p), row-major, exact arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GfMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl GfMatrix {
    pub fn zero(p: u64, rows: usize, cols: usize) -> Self {
        GfMatrix {
            p,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zero(p, n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(p: u64, rows: Vec<Vec<u64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            entries.extend(row.into_iter().map(|x| x % p));
        }
        GfMatrix {
            p,
            rows: r,
            cols: c,
            entries,
        }
    }

    /// Permutation matrix of `g` in the row convention: `e_i ↦ e_{g(i)}`.
    pub fn permutation_matrix(p: u64, g: &Permutation) -> Self {
        let n = g.degree();
        let mut m = Self::zero(p, n, n);
        for i in 0..n {
            m[(i, g.apply(i as u16) as usize)] = 1;
        }
        m
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows)
                .all(|i| (0..self.cols).all(|j| self[(i, j)] == u64::from(i == j)))
    }

    pub fn mul(&self, other: &GfMatrix) -> GfMatrix {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.p, other.p);
        let mut out = GfMatrix::zero(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = (out[(i, j)] + a * other[(k, j)]) % self.p;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &GfMatrix) -> GfMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (x, y) in out.entries.iter_mut().zip(&other.entries) {
            *x = (*x + y) % self.p;
        }
        out
    }

    pub fn scale(&self, c: u64) -> GfMatrix {
        let c = c % self.p;
        let mut out = self.clone();
        for x in out.entries.iter_mut() {
            *x = *x * c % self.p;
        }
        out
    }

    pub fn sub_scalar_diagonal(&self, lambda: u64) -> GfMatrix {
        let mut out = self.clone();
        let n = self.rows.min(self.cols);
        for i in 0..n {
            out[(i, i)] = (out[(i, i)] + self.p - lambda % self.p) % self.p;
        }
        out
    }

    fn row_vec_mul(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![0u64; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for j in 0..self.cols {
                out[j] = (out[j] + a * self[(i, j)]) % self.p;
            }
        }
        out
    }

    /// In-place reduction to reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(pivot_row) = (r..self.rows).find(|&i| self[(i, c)] != 0) else {
                continue;
            };
            self.swap_rows(r, pivot_row);
            let inv = mod_inverse(self[(r, c)], p);
            for j in 0..self.cols {
                self[(r, j)] = self[(r, j)] * inv % p;
            }
            for i in 0..self.rows {
                if i != r && self[(i, c)] != 0 {
                    let f = self[(i, c)];
                    for j in 0..self.cols {
                        let sub = f * self[(r, j)] % p;
                        self[(i, j)] = (self[(i, j)] + p - sub) % p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of `{v : v·M = 0}` (left nullspace of a square matrix viewed as
    /// acting on row vectors), in RREF.
    pub fn nullspace(&self) -> GfMatrix {
        // Solve x·M = 0 by reducing Mᵀ: the kernel of the transpose acting on
        // columns is exactly our row-vector kernel.
        let t = self.transpose();
        let mut work = t.clone();
        let pivots = work.rref();
        let rank = pivots.len();
        let n = self.rows;
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let mut basis_rows = Vec::with_capacity(n - rank);
        for &f in &free {
            let mut v = vec![0u64; n];
            v[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                // work[(r, f)] is the coefficient of the free variable.
                let coeff = work[(r, f)];
                if coeff != 0 {
                    v[pc] = (self.p - coeff) % self.p;
                }
            }
            basis_rows.push(v);
        }
        let mut out = GfMatrix::from_rows(self.p, basis_rows);
        if out.rows == 0 {
            out = GfMatrix::zero(self.p, 0, n);
        }
        out.rref();
        out
    }

    pub fn transpose(&self) -> GfMatrix {
        let mut out = GfMatrix::zero(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    /// Inverse of a square invertible matrix; None when singular.
    pub fn inverse(&self) -> Option<GfMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = GfMatrix::zero(self.p, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, n + i)] = 1;
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        let mut inv = GfMatrix::zero(self.p, n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = aug[(i, n + j)];
            }
        }
        Some(inv)
    }

    pub fn determinant_is_zero(&self) -> bool {
        self.rank() < self.rows.min(self.cols)
    }
}

impl std::ops::Index<(usize, usize)> for GfMatrix {
    type Output = u64;
    fn index(&self, (i, j): (usize, usize)) -> &u64 {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for GfMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut u64 {
        &mut self.entries[i * self.cols + j]
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    mod_pow(a % p, p - 2, p)
}

fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// How irreducibility was certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IrreducibilityCertificate {
    /// Every nonzero vector up to scalars spins to the full space.
    Exhaustive,
    /// Random vectors in the module and its dual all spin to the full space;
    /// a confidence verdict, not a proof.
    Sampled,
}

/// A G-module over GF(p): one matrix per group generator, acting on row
/// vectors of length `dim`.
#[derive(Debug, Clone)]
pub struct GModule {
    group: PermGroup,
    p: u64,
    dim: usize,
    actions: Vec<GfMatrix>,
    /// Rows spanning this module inside the natural permutation module, when
    /// the module was produced by splitting it. Lets arbitrary elements act
    /// without word arithmetic.
    ambient_basis: Option<GfMatrix>,
    irreducible: Option<IrreducibilityCertificate>,
}

#[derive(Serialize)]
struct GModuleJson {
    p: u64,
    dim: usize,
    generator_matrices: Vec<Vec<u64>>,
    irreducible: Option<IrreducibilityCertificate>,
    trivial_action: bool,
}

impl GModule {
    /// Wraps explicit generator matrices. The assignment generator → matrix
    /// must extend to a homomorphism; see [`GModule::verify_homomorphism`].
    pub fn from_actions(group: PermGroup, p: u64, dim: usize, actions: Vec<GfMatrix>) -> Result<Self> {
        if actions.len() != group.generators().len() {
            return Err(Error::ParameterOutOfRange(
                "one action matrix per generator required".into(),
            ));
        }
        for m in &actions {
            if m.rows() != dim || m.cols() != dim || m.p() != p {
                return Err(Error::ParameterOutOfRange(
                    "action matrices must be square of the module dimension".into(),
                ));
            }
            if m.determinant_is_zero() {
                return Err(Error::ParameterOutOfRange(
                    "action matrices must be invertible".into(),
                ));
            }
        }
        Ok(GModule {
            group,
            p,
            dim,
            actions,
            ambient_basis: None,
            irreducible: None,
        })
    }

    /// The natural permutation module of the group over GF(p).
    pub fn natural(group: &PermGroup, p: u64) -> GModule {
        let actions = group
            .generators()
            .iter()
            .map(|g| GfMatrix::permutation_matrix(p, g))
            .collect();
        let dim = group.degree();
        GModule {
            group: group.clone(),
            p,
            dim,
            actions,
            ambient_basis: Some(GfMatrix::identity(p, dim)),
            irreducible: None,
        }
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn actions(&self) -> &[GfMatrix] {
        &self.actions
    }

    pub fn irreducible_certificate(&self) -> Option<IrreducibilityCertificate> {
        self.irreducible
    }

    /// Rows spanning this module inside the ambient permutation module, when
    /// it came from splitting one.
    pub fn ambient_basis(&self) -> Option<&GfMatrix> {
        self.ambient_basis.as_ref()
    }

    pub fn trivial_action(&self) -> bool {
        self.actions.iter().all(GfMatrix::is_identity)
    }

    /// Action matrix of an arbitrary group element. Uses the ambient basis
    /// when available; otherwise factors the element over the generators by
    /// breadth-first search through the group elements.
    pub fn matrix_for(&self, a: &Permutation) -> Result<GfMatrix> {
        if !self.group.contains(a)? {
            return Err(Error::ElementNotInGroup);
        }
        if let Some(basis) = &self.ambient_basis {
            let perm = GfMatrix::permutation_matrix(self.p, a);
            return Ok(restrict_to_basis(basis, &perm));
        }
        if a.is_identity() {
            return Ok(GfMatrix::identity(self.p, self.dim));
        }
        // Parent-pointer BFS over the group: each element remembers which
        // generator reached it.
        let gens = self.group.generators();
        let mut parent: HashMap<Permutation, (Permutation, usize)> = HashMap::new();
        let id = Permutation::identity(self.group.degree());
        let mut queue = VecDeque::from([id.clone()]);
        parent.insert(id.clone(), (id.clone(), usize::MAX));
        while let Some(x) = queue.pop_front() {
            if x == *a {
                break;
            }
            for (gi, g) in gens.iter().enumerate() {
                let y = x.compose(g);
                if !parent.contains_key(&y) {
                    parent.insert(y.clone(), (x.clone(), gi));
                    queue.push_back(y);
                }
            }
        }
        let mut word: Vec<usize> = Vec::new();
        let mut cur = a.clone();
        while cur != id {
            let (prev, gi) = parent.get(&cur).ok_or(Error::ElementNotInGroup)?.clone();
            word.push(gi);
            cur = prev;
        }
        word.reverse();
        let mut m = GfMatrix::identity(self.p, self.dim);
        for gi in word {
            m = m.mul(&self.actions[gi]);
        }
        Ok(m)
    }

    /// Checks that trivial generator words act as the identity matrix:
    /// exhaustive over words up to `exhaustive_len`, then `samples` random
    /// words of moderate length.
    pub fn verify_homomorphism(&self, exhaustive_len: usize, samples: usize, seed: u64) -> bool {
        let degree = self.group.degree();
        let gens = self.group.generators();
        let id = Permutation::identity(degree);
        let id_m = GfMatrix::identity(self.p, self.dim);
        // Exhaustive words.
        let mut frontier: Vec<(Permutation, GfMatrix)> = vec![(id.clone(), id_m.clone())];
        for _ in 0..exhaustive_len {
            let mut next = Vec::new();
            for (pw, mw) in &frontier {
                for (g, act) in gens.iter().zip(&self.actions) {
                    let np = pw.compose(g);
                    let nm = mw.mul(act);
                    if np.is_identity() && !nm.is_identity() {
                        return false;
                    }
                    next.push((np, nm));
                }
            }
            frontier = next;
            if frontier.len() > 200_000 {
                break;
            }
        }
        // Random words.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let len = rng.gen_range(1..=12);
            let mut pw = id.clone();
            let mut mw = id_m.clone();
            for _ in 0..len {
                let gi = rng.gen_range(0..gens.len());
                pw = pw.compose(&gens[gi]);
                mw = mw.mul(&self.actions[gi]);
            }
            if pw.is_identity() && !mw.is_identity() {
                return false;
            }
        }
        true
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(GModuleJson {
            p: self.p,
            dim: self.dim,
            generator_matrices: self.actions.iter().map(|m| m.entries().to_vec()).collect(),
            irreducible: self.irreducible,
            trivial_action: self.trivial_action(),
        })
        .expect("module serializes")
    }
}

/// Expresses the restriction of `ambient` to the invariant row space of
/// `basis` (in RREF) in the basis coordinates. Panics if the space is not
/// actually invariant; callers only pass invariant bases.
fn restrict_to_basis(basis: &GfMatrix, ambient: &GfMatrix) -> GfMatrix {
    let p = basis.p();
    let r = basis.rows();
    let mut probe = basis.clone();
    let pivots = probe.rref();
    debug_assert_eq!(pivots.len(), r, "basis rows must be independent");
    // Coordinates are read off at pivot columns, which needs the stored basis
    // to already be in reduced echelon form.
    debug_assert_eq!(&probe, basis, "module bases must be kept in RREF");
    let mapped = basis.mul(ambient);
    // Coordinates of each mapped row against the RREF basis read off at the
    // pivot columns; verify the residual is zero.
    let mut coords = GfMatrix::zero(p, r, r);
    for i in 0..r {
        let mut residual: Vec<u64> = mapped.row(i).to_vec();
        for (bj, &c) in pivots.iter().enumerate() {
            let coeff = residual[c] % p;
            coords[(i, bj)] = coeff;
            if coeff != 0 {
                for (x, b) in residual.iter_mut().zip(probe.row(bj)) {
                    *x = (*x + p - coeff * b % p) % p;
                }
            }
        }
        assert!(
            residual.iter().all(|&x| x == 0),
            "row image left the invariant subspace"
        );
    }
    coords
}

/// Dimension of the fixed space of `a` on the module: the nullity of
/// `ρ(a) − I` over GF(p).
pub fn fixed_space_dim(module: &GModule, a: &Permutation) -> Result<usize> {
    let m = module.matrix_for(a)?;
    let shifted = m.sub_scalar_diagonal(1);
    Ok(shifted.nullspace().rows())
}

/// Basis (RREF) of the smallest invariant subspace containing `v`.
pub fn spin(module: &GModule, v: &[u64]) -> Result<GfMatrix> {
    if v.len() != module.dim() || v.iter().all(|&x| x % module.p() == 0) {
        return Err(Error::ZeroVector);
    }
    let p = module.p();
    let mut basis = GfMatrix::from_rows(p, vec![v.to_vec()]);
    basis.rref();
    loop {
        let mut grew = false;
        let current_rank = basis.rows();
        let mut candidate_rows: Vec<Vec<u64>> =
            (0..basis.rows()).map(|i| basis.row(i).to_vec()).collect();
        for i in 0..basis.rows() {
            for act in module.actions() {
                candidate_rows.push(act.row_vec_mul(basis.row(i)));
            }
        }
        let mut expanded = GfMatrix::from_rows(p, candidate_rows);
        expanded.rref();
        let new_rank = expanded.rank();
        if new_rank > current_rank {
            grew = true;
            let rows: Vec<Vec<u64>> = (0..new_rank).map(|i| expanded.row(i).to_vec()).collect();
            basis = GfMatrix::from_rows(p, rows);
        }
        if !grew || basis.rows() == module.dim() {
            return Ok(basis);
        }
    }
}

/// Irreducibility verdict with the kind of evidence behind it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IrreducibilityVerdict {
    Irreducible(IrreducibilityCertificate),
    /// A proper invariant subspace was found; carries its dimension.
    Reducible(usize),
}

/// Exhaustive spinning when `p^dim` is small enough, otherwise sampled
/// spinning in the module and its dual (transpose-inverse action).
pub fn is_irreducible(module: &GModule) -> Result<IrreducibilityVerdict> {
    let p = module.p();
    let dim = module.dim();
    if dim == 0 {
        return Err(Error::ZeroVector);
    }
    if dim == 1 {
        return Ok(IrreducibilityVerdict::Irreducible(
            IrreducibilityCertificate::Exhaustive,
        ));
    }
    let size = (p as u128).checked_pow(dim as u32);
    let exhaustive = matches!(size, Some(s) if s <= EXHAUSTIVE_SPIN_BOUND as u128);
    if exhaustive {
        // Projective representatives: first nonzero coordinate equal to 1.
        let mut v = vec![0u64; dim];
        loop {
            // Advance to the next vector in base-p odometer order.
            let mut pos = 0;
            loop {
                if pos == dim {
                    return Ok(IrreducibilityVerdict::Irreducible(
                        IrreducibilityCertificate::Exhaustive,
                    ));
                }
                v[pos] += 1;
                if v[pos] < p {
                    break;
                }
                v[pos] = 0;
                pos += 1;
            }
            if v.iter().rev().find(|&&x| x != 0) != Some(&1) {
                continue; // not a projective representative
            }
            let spun = spin(module, &v)?;
            if spun.rows() < dim {
                return Ok(IrreducibilityVerdict::Reducible(spun.rows()));
            }
        }
    }
    // Sampled: random vectors here and in the dual module.
    let dual_actions: Vec<GfMatrix> = module
        .actions()
        .iter()
        .map(|m| {
            m.inverse()
                .expect("action matrices are invertible")
                .transpose()
        })
        .collect();
    let dual = GModule {
        group: module.group().clone(),
        p,
        dim,
        actions: dual_actions,
        ambient_basis: None,
        irreducible: None,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for m in [module, &dual] {
        for _ in 0..SAMPLED_SPIN_TRIALS {
            let mut v = vec![0u64; dim];
            while v.iter().all(|&x| x == 0) {
                for x in v.iter_mut() {
                    *x = rng.gen_range(0..p);
                }
            }
            let spun = spin(m, &v)?;
            if spun.rows() < dim {
                // A proper submodule of the dual dualizes back; either way the
                // module is reducible.
                return Ok(IrreducibilityVerdict::Reducible(spun.rows()));
            }
        }
    }
    Ok(IrreducibilityVerdict::Irreducible(
        IrreducibilityCertificate::Sampled,
    ))
}

/// Splits the natural degree-n permutation module over GF(p) into irreducible
/// constituents. Requires `p` prime to the group order, so invariant
/// complements exist and averaged projections realize them.
pub fn permutation_module_constituents(group: &PermGroup, p: u64) -> Result<Vec<GModule>> {
    if !crate::criterion::is_prime(p) {
        return Err(Error::ParameterOutOfRange(format!("{p} is not prime")));
    }
    let order = group.order();
    if order.is_multiple_of(p) {
        return Err(Error::ModularCharacteristic { p, order });
    }
    let n = group.degree();
    let elements = group.elements(u64::MAX)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);

    let mut queue: VecDeque<GfMatrix> = VecDeque::from([GfMatrix::identity(p, n)]);
    let mut constituents: Vec<GModule> = Vec::new();
    while let Some(basis) = queue.pop_front() {
        let dim = basis.rows();
        if dim == 0 {
            continue;
        }
        let actions: Vec<GfMatrix> = group
            .generators()
            .iter()
            .map(|g| restrict_to_basis(&basis, &GfMatrix::permutation_matrix(p, g)))
            .collect();
        let sub = GModule {
            group: group.clone(),
            p,
            dim,
            actions,
            ambient_basis: Some(basis.clone()),
            irreducible: None,
        };

        if dim == 1 {
            let mut done = sub;
            done.irreducible = Some(IrreducibilityCertificate::Exhaustive);
            constituents.push(done);
            continue;
        }

        // Joint fixed subspace first: it is the trivial-isotypic part and
        // splits off exactly.
        let fixed = joint_fixed_space(&sub);
        if fixed.rows() == dim {
            // Wholly trivial action: dim one-dimensional trivial constituents.
            for i in 0..dim {
                let row = vec![basis.row(i).to_vec()];
                let b = GfMatrix::from_rows(p, row);
                let mut m = GModule {
                    group: group.clone(),
                    p,
                    dim: 1,
                    actions: vec![GfMatrix::identity(p, 1); group.generators().len()],
                    ambient_basis: Some(b),
                    irreducible: Some(IrreducibilityCertificate::Exhaustive),
                };
                m.irreducible = Some(IrreducibilityCertificate::Exhaustive);
                constituents.push(m);
            }
            continue;
        }
        if fixed.rows() > 0 {
            split_and_enqueue(&sub, &basis, &fixed, &elements, &mut queue);
            continue;
        }

        // Probe with basis vectors: a proper spin is a submodule.
        if let Some(proper) = probe_spins(&sub)? {
            split_and_enqueue(&sub, &basis, &proper, &elements, &mut queue);
            continue;
        }

        // Averaged commutant elements: any GF(p)-rational eigenspace of a
        // commutant element is a submodule.
        if let Some(proper) = commutant_split(&sub, &elements, &mut rng) {
            split_and_enqueue(&sub, &basis, &proper, &elements, &mut queue);
            continue;
        }

        match is_irreducible(&sub)? {
            IrreducibilityVerdict::Irreducible(cert) => {
                let mut done = sub;
                done.irreducible = Some(cert);
                constituents.push(done);
            }
            IrreducibilityVerdict::Reducible(_) => {
                // The exhaustive scan found a submodule the probes missed;
                // locate one again and split.
                let proper =
                    exhaustive_proper_submodule(&sub)?.expect("reducible verdict implies one");
                split_and_enqueue(&sub, &basis, &proper, &elements, &mut queue);
            }
        }
    }

    let total: usize = constituents.iter().map(GModule::dim).sum();
    assert_eq!(total, n, "constituent dimensions must sum to the degree");
    constituents.sort_by(|a, b| {
        (a.dim, a.ambient_basis.as_ref().map(|m| m.entries().to_vec()))
            .cmp(&(b.dim, b.ambient_basis.as_ref().map(|m| m.entries().to_vec())))
    });
    Ok(constituents)
}

/// `{v : v·ρ(g) = v for all generators}` as RREF rows in module coordinates.
fn joint_fixed_space(module: &GModule) -> GfMatrix {
    let p = module.p();
    let dim = module.dim();
    // Stack (ρ(g) - I) side by side and take the left nullspace.
    let mut stacked = GfMatrix::zero(p, dim, dim * module.actions().len());
    for (gi, act) in module.actions().iter().enumerate() {
        let shifted = act.sub_scalar_diagonal(1);
        for i in 0..dim {
            for j in 0..dim {
                stacked[(i, gi * dim + j)] = shifted[(i, j)];
            }
        }
    }
    stacked.nullspace()
}

/// Spins the standard basis vectors; returns the smallest proper submodule
/// found, if any.
fn probe_spins(module: &GModule) -> Result<Option<GfMatrix>> {
    let dim = module.dim();
    let mut best: Option<GfMatrix> = None;
    for i in 0..dim {
        let mut v = vec![0u64; dim];
        v[i] = 1;
        let spun = spin(module, &v)?;
        if spun.rows() < dim {
            let better = match &best {
                None => true,
                Some(b) => spun.rows() < b.rows(),
            };
            if better {
                best = Some(spun);
            }
        }
    }
    Ok(best)
}

/// Averages random matrices over the group to land in the commutant, then
/// looks for a GF(p)-rational eigenvalue whose eigenspace is proper.
fn commutant_split(
    module: &GModule,
    elements: &[Permutation],
    rng: &mut ChaCha8Rng,
) -> Option<GfMatrix> {
    let p = module.p();
    let dim = module.dim();
    let matrices: Vec<GfMatrix> = elements
        .iter()
        .map(|e| module.matrix_for(e).expect("group element"))
        .collect();
    let inverses: Vec<GfMatrix> = matrices
        .iter()
        .map(|m| m.inverse().expect("group element acts invertibly"))
        .collect();
    for _ in 0..SPLIT_ATTEMPTS {
        let mut t = GfMatrix::zero(p, dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                t[(i, j)] = rng.gen_range(0..p);
            }
        }
        let mut averaged = GfMatrix::zero(p, dim, dim);
        for (m, minv) in matrices.iter().zip(&inverses) {
            averaged = averaged.add(&minv.mul(&t).mul(m));
        }
        averaged = averaged.scale(mod_inverse(elements.len() as u64 % p, p));
        for lambda in 0..p {
            let kernel = averaged.sub_scalar_diagonal(lambda).nullspace();
            if kernel.rows() > 0 && kernel.rows() < dim {
                return Some(kernel);
            }
        }
    }
    None
}

fn exhaustive_proper_submodule(module: &GModule) -> Result<Option<GfMatrix>> {
    let p = module.p();
    let dim = module.dim();
    let mut v = vec![0u64; dim];
    loop {
        let mut pos = 0;
        loop {
            if pos == dim {
                return Ok(None);
            }
            v[pos] += 1;
            if v[pos] < p {
                break;
            }
            v[pos] = 0;
            pos += 1;
        }
        let spun = spin(module, &v)?;
        if spun.rows() < dim {
            return Ok(Some(spun));
        }
    }
}

/// Splits `module = U ⊕ complement` along the invariant subspace `sub_rows`
/// (given in module coordinates) and enqueues ambient bases for both parts.
/// The complement is the kernel of the averaged projection onto `U`, which is
/// a module homomorphism because projections conjugated around the group and
/// summed commute with the action.
fn split_and_enqueue(
    module: &GModule,
    ambient_basis: &GfMatrix,
    sub_rows: &GfMatrix,
    elements: &[Permutation],
    queue: &mut VecDeque<GfMatrix>,
) {
    let p = module.p();
    let dim = module.dim();
    let u = sub_rows.rows();
    debug_assert!(u > 0 && u < dim);

    // Vector-space projection onto U along a coordinate complement.
    let mut rref_u = sub_rows.clone();
    let pivots = rref_u.rref();
    let mut s_rows: Vec<Vec<u64>> = (0..u).map(|i| rref_u.row(i).to_vec()).collect();
    for c in 0..dim {
        if !pivots.contains(&c) {
            let mut e = vec![0u64; dim];
            e[c] = 1;
            s_rows.push(e);
        }
    }
    let s = GfMatrix::from_rows(p, s_rows);
    let s_inv = s.inverse().expect("basis change is invertible");
    let mut e_diag = GfMatrix::zero(p, dim, dim);
    for i in 0..u {
        e_diag[(i, i)] = 1;
    }
    let proj0 = s_inv.mul(&e_diag).mul(&s);

    // Reynolds average: π = (1/|G|) Σ ρ(g) π₀ ρ(g)⁻¹.
    let mut averaged = GfMatrix::zero(p, dim, dim);
    for e in elements {
        let m = module.matrix_for(e).expect("group element");
        let minv = m.inverse().expect("invertible action");
        averaged = averaged.add(&m.mul(&proj0).mul(&minv));
    }
    averaged = averaged.scale(mod_inverse(elements.len() as u64 % p, p));

    // Kernel of the projection is the invariant complement.
    let kernel = averaged.nullspace();
    assert_eq!(
        kernel.rows(),
        dim - u,
        "averaged projection must split the module"
    );

    let to_ambient = |rows: &GfMatrix| -> GfMatrix {
        let mut out = rows.mul(ambient_basis);
        out.rref();
        out
    };
    queue.push_back(to_ambient(&rref_u));
    queue.push_back(to_ambient(&kernel));
}

/// Assertion report for the fixed-space bound `4·dim C_V(a) ≤ 3·dim V`.
#[derive(Debug, Clone, Serialize)]
pub struct FixedSpaceBoundReport {
    #[serde(serialize_with = "crate::criterion::perm_as_string")]
    pub element: Permutation,
    pub p: u64,
    pub dim: usize,
    pub fixed_dim: usize,
    pub holds: bool,
}

/// Checks the bound for a solvable group generated by the conjugates of `a`,
/// acting irreducibly and nontrivially.
pub fn check_fixed_space_bound(module: &GModule, a: &Permutation) -> Result<FixedSpaceBoundReport> {
    let group = module.group();
    if !is_solvable(group) {
        return Err(Error::HypothesisNotMet(Hypothesis::Solvable));
    }
    if normal_closure(group, std::slice::from_ref(a)).order() != group.order() {
        return Err(Error::HypothesisNotMet(Hypothesis::FullNormalClosure));
    }
    if module.irreducible_certificate().is_none() {
        return Err(Error::HypothesisNotMet(Hypothesis::Irreducible));
    }
    if module.trivial_action() {
        return Err(Error::HypothesisNotMet(Hypothesis::NontrivialAction));
    }
    let fixed_dim = fixed_space_dim(module, a)?;
    let holds = 4 * fixed_dim <= 3 * module.dim();
    let report = FixedSpaceBoundReport {
        element: a.clone(),
        p: module.p(),
        dim: module.dim(),
        fixed_dim,
        holds,
    };
    if !holds {
        return Err(Error::TheoremViolationSuspected(format!(
            "fixed space of {} has dimension {} > 3/4 of {}",
            a,
            fixed_dim,
            module.dim()
        )));
    }
    Ok(report)
}
