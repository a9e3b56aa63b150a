//! Isometric symmetries of finite point sets.
//!
//! A permutation of a point set extends to a linear isometry exactly when it
//! preserves every inner product, so automorphisms are enumerated
//! combinatorially on the clustered Gram graph. For several orbits the
//! search runs on orbit 1 only: each candidate image of an orbit-1 point drags
//! along the images of its nearest-point partners in the other orbits, and
//! every cross-orbit label is checked as soon as both endpoints are placed.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gramgraph::{build_gram_graph, GramGraph};
use crate::numerics::{common_shape, FieldTag, TolerancePolicy, Vector};

/// A bijection of `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// Returns `None` unless `images` is a bijection of `0..images.len()`.
    pub fn new(images: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationGroup {
    elements: Vec<Permutation>,
    identity_index: usize,
}

impl PermutationGroup {
    /// Validates distinctness, the identity, and closure under composition
    /// (inverses follow by finiteness).
    pub fn new(elements: Vec<Permutation>) -> Result<Self> {
        let first = elements.first().ok_or(Error::EmptyInput)?;
        let degree = first.degree();
        if elements.iter().any(|p| p.degree() != degree) {
            return Err(Error::NotAGroup);
        }
        let mut index = BTreeMap::new();
        for (i, p) in elements.iter().enumerate() {
            if index.insert(p.images.as_slice(), i).is_some() {
                return Err(Error::NotAGroup);
            }
        }
        let identity_index = elements.iter().position(Permutation::is_identity).ok_or(Error::NotAGroup)?;
        for a in &elements {
            for b in &elements {
                if !index.contains_key(a.compose(b).images.as_slice()) {
                    return Err(Error::NotAGroup);
                }
            }
        }
        Ok(PermutationGroup { elements, identity_index })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.elements[0].degree()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn identity_index(&self) -> usize {
        self.identity_index
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.elements.iter().position(|q| q == p)
    }
}

/// Backtracking over images of orbit-1 points. `blocks[x]` lists the union
/// indices that move together with orbit-1 point `x` (itself first).
struct BlockSearch<'a> {
    graph: &'a GramGraph,
    blocks: &'a [Vec<usize>],
    order: Vec<usize>,
    candidates: Vec<Vec<usize>>,
    /// For orbit-1 points whose orbit-1 row labels are pairwise distinct:
    /// label → column lookup inside orbit 1.
    row_lookup: Vec<Option<BTreeMap<u32, usize>>>,
    /// Orbit-1 point whose row is injective, searched first.
    base: Option<usize>,
    image: Vec<usize>,
    placed: Vec<usize>,
    used: Vec<bool>,
    found: Vec<Vec<usize>>,
}

impl BlockSearch<'_> {
    fn fits(&self, a: usize, b: usize, from: &[usize], to: &[usize]) -> bool {
        let g = self.graph;
        if g.label(a, a) != g.label(b, b) {
            return false;
        }
        for &u in &self.placed {
            let v = self.image[u];
            if g.label(u, a) != g.label(v, b) || g.label(a, u) != g.label(b, v) {
                return false;
            }
        }
        from.iter().zip(to).all(|(&u, &v)| g.label(u, a) == g.label(v, b) && g.label(a, u) == g.label(b, v))
    }

    fn try_place(&mut self, x: usize, y: usize) -> bool {
        let blocks = self.blocks;
        let (from, to) = (&blocks[x], &blocks[y]);
        for j in 0..from.len() {
            if !self.fits(from[j], to[j], &from[..j], &to[..j]) {
                return false;
            }
        }
        for j in 0..from.len() {
            self.image[from[j]] = to[j];
            self.placed.push(from[j]);
        }
        true
    }

    fn unplace(&mut self, x: usize) {
        for _ in 0..self.blocks[x].len() {
            let u = self.placed.pop().expect("placed block");
            self.image[u] = usize::MAX;
        }
    }

    fn forced(&self, x: usize) -> Option<Option<usize>> {
        let base = self.base?;
        let c = self.image[base];
        if c == usize::MAX || x == base {
            return None;
        }
        let lookup = self.row_lookup[c].as_ref()?;
        Some(lookup.get(&self.graph.label(base, x)).copied())
    }

    fn search(&mut self, depth: usize) {
        if depth == self.order.len() {
            self.found.push(self.image.clone());
            return;
        }
        let x = self.order[depth];
        let options: Vec<usize> = match self.forced(x) {
            Some(Some(y)) => vec![y],
            Some(None) => Vec::new(),
            None => self.candidates[x].clone(),
        };
        for y in options {
            if self.used[y] {
                continue;
            }
            if self.try_place(x, y) {
                self.used[y] = true;
                self.search(depth + 1);
                self.used[y] = false;
                self.unplace(x);
            }
        }
    }
}

/// All label-preserving permutations of the union that respect the blocks,
/// as union image vectors sorted lexicographically.
fn enumerate_block_automorphisms(graph: &GramGraph, blocks: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let m = blocks.len();
    let signature = |x: usize| -> Vec<u32> {
        let mut row: Vec<u32> = (0..m).map(|t| graph.label(x, t)).collect();
        let mut col: Vec<u32> = (0..m).map(|t| graph.label(t, x)).collect();
        row.sort_unstable();
        col.sort_unstable();
        row.push(u32::MAX);
        row.extend(col);
        row
    };
    let sigs: Vec<Vec<u32>> = (0..m).map(signature).collect();
    let candidates: Vec<Vec<usize>> = (0..m).map(|x| (0..m).filter(|&y| sigs[x] == sigs[y]).collect()).collect();
    let row_lookup: Vec<Option<BTreeMap<u32, usize>>> = (0..m)
        .map(|c| {
            let mut map = BTreeMap::new();
            for t in 0..m {
                if map.insert(graph.label(c, t), t).is_some() {
                    return None;
                }
            }
            Some(map)
        })
        .collect();
    let base = row_lookup.iter().position(Option::is_some);
    let mut order: Vec<usize> = (0..m).collect();
    if let Some(b) = base {
        order.retain(|&x| x != b);
        order.insert(0, b);
    }
    let mut search = BlockSearch {
        graph,
        blocks,
        order,
        candidates,
        row_lookup,
        base,
        image: vec![usize::MAX; graph.vertex_count()],
        placed: Vec::with_capacity(graph.vertex_count()),
        used: vec![false; m],
        found: Vec::new(),
    };
    search.search(0);
    let mut found = search.found;
    found.sort();
    found
}

/// Two distinct vertices whose mutual label equals both loop labels coincide
/// as points, up to tolerance.
fn check_distinct(graph: &GramGraph, range: core::ops::Range<usize>) -> Result<()> {
    for s in range.clone() {
        for t in s + 1..range.end {
            let l = graph.label(s, t);
            if l == graph.label(s, s) && l == graph.label(t, t) {
                return Err(Error::DuplicatePoints(s, t));
            }
        }
    }
    Ok(())
}

/// Aut(S): every permutation of the points that preserves all Gram labels.
pub fn point_automorphisms(points: &[Vector], policy: &TolerancePolicy) -> Result<Vec<Permutation>> {
    let graph = build_gram_graph(points, policy)?;
    check_distinct(&graph, 0..points.len())?;
    let blocks: Vec<Vec<usize>> = (0..points.len()).map(|x| vec![x]).collect();
    Ok(enumerate_block_automorphisms(&graph, &blocks).into_iter().map(|images| Permutation { images }).collect())
}

/// Nearest-point bijection from `a` to `b`: `result[i]` is the index in `b`
/// closest to `a[i]`.
pub fn orbit_pairing(a: &[Vector], b: &[Vector], policy: &TolerancePolicy) -> Result<Vec<usize>> {
    policy.validate()?;
    if a.len() != b.len() {
        return Err(Error::OrbitSizeMismatch(a.len(), b.len()));
    }
    let all: Vec<Vector> = a.iter().chain(b).cloned().collect();
    common_shape(&all)?;
    let scale = all.iter().map(Vector::norm_sqr).fold(0.0, f64::max);
    let tol = policy.label_tol_for(scale);
    let mut pairing = Vec::with_capacity(a.len());
    let mut hit = vec![false; b.len()];
    for x in a {
        let mut best = (f64::INFINITY, usize::MAX);
        let mut second = f64::INFINITY;
        for (j, y) in b.iter().enumerate() {
            let d = x.distance(y);
            let d2 = d * d;
            if d2 < best.0 {
                second = best.0;
                best = (d2, j);
            } else if d2 < second {
                second = d2;
            }
        }
        if second - best.0 <= tol {
            return Err(Error::NonGenericPair("a point has two nearest partners"));
        }
        if hit[best.1] {
            return Err(Error::NonGenericPair("nearest-point map is not injective"));
        }
        hit[best.1] = true;
        pairing.push(best.1);
    }
    Ok(pairing)
}

/// The joint permutation action recovered from several orbits.
#[derive(Debug, Clone)]
pub struct UnionAction {
    /// Permutations of the disjoint union; orbit `j` occupies indices
    /// `j * orbit_size .. (j + 1) * orbit_size`.
    pub group: PermutationGroup,
    pub orbit_size: usize,
    /// `pairings[j][x]`: partner in orbit `j` of orbit-1 point `x`
    /// (`pairings[0]` is the identity).
    pub pairings: Vec<Vec<usize>>,
    /// Set when a single real orbit was used, so the group may be too large.
    pub insufficient: bool,
}

impl UnionAction {
    pub fn orbit_count(&self) -> usize {
        self.pairings.len()
    }

    /// Permutation of orbit 1 induced by element `i`.
    pub fn restriction(&self, i: usize) -> Permutation {
        let p = &self.group.elements()[i];
        Permutation { images: p.images[..self.orbit_size].to_vec() }
    }
}

/// Recovers the permutation action of the hidden group on the union of the
/// given orbits.
pub fn union_action(orbits: &[Vec<Vector>], policy: &TolerancePolicy, allow_insufficient: bool) -> Result<UnionAction> {
    let first = orbits.first().ok_or(Error::EmptyInput)?;
    let m = first.len();
    if m == 0 {
        return Err(Error::EmptyInput);
    }
    for o in orbits {
        if o.len() != m {
            return Err(Error::OrbitSizeMismatch(m, o.len()));
        }
    }
    let all: Vec<Vector> = orbits.iter().flatten().cloned().collect();
    let (field, _) = common_shape(&all)?;
    let k = orbits.len();
    let insufficient = field == FieldTag::Real && k < field.extension_degree();
    if insufficient && !allow_insufficient {
        return Err(Error::InsufficientOrbits);
    }

    let graph = build_gram_graph(&all, policy)?;
    let mut loop_classes = Vec::with_capacity(k);
    for j in 0..k {
        let mut diag: Vec<u32> = (j * m..(j + 1) * m).map(|s| graph.label(s, s)).collect();
        diag.sort_unstable();
        diag.dedup();
        if diag.len() > 1 {
            return Err(Error::HeterogeneousNorms { classes: diag.len() });
        }
        if let Some(i) = loop_classes.iter().position(|&c| c == diag[0]) {
            return Err(Error::IndistinctNorms(i, j));
        }
        loop_classes.push(diag[0]);
    }
    check_distinct(&graph, 0..m)?;

    let mut pairings = vec![(0..m).collect::<Vec<usize>>()];
    for o in &orbits[1..] {
        pairings.push(orbit_pairing(first, o, policy)?);
    }
    let blocks: Vec<Vec<usize>> = (0..m).map(|x| (0..k).map(|j| j * m + pairings[j][x]).collect()).collect();
    let found = enumerate_block_automorphisms(&graph, &blocks);
    let elements = found.into_iter().map(|images| Permutation { images }).collect();
    let group = PermutationGroup::new(elements)?;
    Ok(UnionAction { group, orbit_size: m, pairings, insufficient })
}
