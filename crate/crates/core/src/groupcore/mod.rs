//! Abstract finite groups as multiplication tables.

mod catalog;
mod invariants;
mod iso;

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gramgraph::{gram_invariants, GramGraph};
use crate::numerics::FieldTag;
use crate::pointsym::PermutationGroup;

pub use catalog::{catalog_entries, identify_small_group, CatalogGroup};
pub use invariants::{group_invariants, GroupInvariants};
pub use iso::isomorphic;

/// Cayley table of a finite group; `product[i * order + j]` is the index of
/// element i · j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicationTable {
    order: usize,
    product: Vec<usize>,
    identity: usize,
}

impl MultiplicationTable {
    /// Wraps raw data without checking the group axioms; see [`validate_group`].
    pub fn from_raw(order: usize, product: Vec<usize>, identity: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::EmptyInput);
        }
        if product.len() != order * order {
            return Err(Error::DimensionMismatch { expected: order * order, found: product.len() });
        }
        Ok(MultiplicationTable { order, product, identity })
    }

    /// Like [`from_raw`](Self::from_raw) but rejects tables that fail any axiom.
    pub fn new(order: usize, product: Vec<usize>, identity: usize) -> Result<Self> {
        let t = Self::from_raw(order, product, identity)?;
        if validate_group(&t).is_valid() {
            Ok(t)
        } else {
            Err(Error::NotAGroup)
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.product[a * self.order + b]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.product.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.order).find(|&b| self.mul(a, b) == self.identity).expect("valid group has inverses")
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
            assert!(k <= self.order, "element order exceeds group order");
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order];
        inside[self.identity] = true;
        let mut queue = vec![self.identity];
        let mut head = 0;
        while head < queue.len() {
            let a = queue[head];
            head += 1;
            for &g in gens {
                let b = self.mul(a, g);
                if !inside[b] {
                    inside[b] = true;
                    queue.push(b);
                }
            }
        }
        (0..self.order).filter(|&i| inside[i]).collect()
    }

    /// Relabels elements so that `perm[old] = new`.
    pub fn relabel(&self, perm: &[usize]) -> MultiplicationTable {
        let n = self.order;
        let mut product = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                product[perm[a] * n + perm[b]] = perm[self.mul(a, b)];
            }
        }
        MultiplicationTable { order: n, product, identity: perm[self.identity] }
    }

    /// Direct product, element (a, b) at index `a * other.order + b`.
    pub fn direct_product(&self, other: &MultiplicationTable) -> MultiplicationTable {
        let (n, m) = (self.order, other.order);
        let size = n * m;
        let mut product = vec![0; size * size];
        for a1 in 0..n {
            for b1 in 0..m {
                for a2 in 0..n {
                    for b2 in 0..m {
                        product[(a1 * m + b1) * size + a2 * m + b2] = self.mul(a1, a2) * m + other.mul(b1, b2);
                    }
                }
            }
        }
        MultiplicationTable { order: size, product, identity: self.identity * m + other.identity }
    }
}

/// One violated group axiom, with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    EntryOutOfRange { a: usize, b: usize },
    IdentityOutOfRange,
    LatinRow { row: usize },
    LatinColumn { column: usize },
    Identity { element: usize },
    Inverse { element: usize },
    Associativity { a: usize, b: usize, c: usize, failures: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroupValidation {
    pub violations: Vec<AxiomViolation>,
}

impl GroupValidation {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the Latin-square property, the identity, inverses, and
/// associativity over all order³ triples.
pub fn validate_group(t: &MultiplicationTable) -> GroupValidation {
    let n = t.order;
    let mut v = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if t.mul(a, b) >= n {
                v.push(AxiomViolation::EntryOutOfRange { a, b });
            }
        }
    }
    if t.identity >= n {
        v.push(AxiomViolation::IdentityOutOfRange);
    }
    if !v.is_empty() {
        return GroupValidation { violations: v };
    }
    for a in 0..n {
        let mut seen = vec![false; n];
        if (0..n).any(|b| core::mem::replace(&mut seen[t.mul(a, b)], true)) {
            v.push(AxiomViolation::LatinRow { row: a });
        }
    }
    for b in 0..n {
        let mut seen = vec![false; n];
        if (0..n).any(|a| core::mem::replace(&mut seen[t.mul(a, b)], true)) {
            v.push(AxiomViolation::LatinColumn { column: b });
        }
    }
    let e = t.identity;
    for a in 0..n {
        if t.mul(e, a) != a || t.mul(a, e) != a {
            v.push(AxiomViolation::Identity { element: a });
        }
    }
    for a in 0..n {
        if !(0..n).any(|b| t.mul(a, b) == e && t.mul(b, a) == e) {
            v.push(AxiomViolation::Inverse { element: a });
        }
    }
    let mut first = None;
    let mut failures = 0;
    for a in 0..n {
        for b in 0..n {
            let ab = t.mul(a, b);
            for c in 0..n {
                if t.mul(ab, c) != t.mul(a, t.mul(b, c)) {
                    failures += 1;
                    first.get_or_insert((a, b, c));
                }
            }
        }
    }
    if let Some((a, b, c)) = first {
        v.push(AxiomViolation::Associativity { a, b, c, failures });
    }
    GroupValidation { violations: v }
}

/// Reads the group law off the Gram graph of a single generic complex orbit.
///
/// Element `a` is the label class of the edge 0 → a, the loop class is the
/// identity, and x · y is found by walking an x-edge then a y-edge from
/// vertex 0. Every vertex is checked to see the same law.
pub fn cayley_from_gram(g: &GramGraph) -> Result<MultiplicationTable> {
    if g.field() != FieldTag::Complex {
        return Err(Error::RealFieldUnsupported);
    }
    gram_invariants(g).map_err(|_| Error::NonGenericOrbit("loops carry several labels"))?;
    let n = g.vertex_count();
    // element_of[label] = vertex a with label(0, a) = label.
    let mut element_of = BTreeMap::new();
    for a in 0..n {
        if element_of.insert(g.label(0, a), a).is_some() {
            return Err(Error::NonGenericOrbit("repeated labels out of the base vertex"));
        }
    }
    // step[c][x] = vertex d with label(c, d) = class of element x.
    let mut step = vec![usize::MAX; n * n];
    for c in 0..n {
        for d in 0..n {
            let x = *element_of.get(&g.label(c, d)).ok_or(Error::NonGenericOrbit("label outside the base row"))?;
            if step[c * n + x] != usize::MAX {
                return Err(Error::NonGenericOrbit("repeated labels out of a vertex"));
            }
            step[c * n + x] = d;
        }
    }
    let product: Vec<usize> = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).map(|(x, y)| step[x * n + y]).collect();
    // Well-definedness from every start vertex: c --x--> d --y--> e needs label(c, e) = x·y.
    for c in 0..n {
        for x in 0..n {
            let d = step[c * n + x];
            for y in 0..n {
                let e = step[d * n + y];
                if element_of[&g.label(c, e)] != product[x * n + y] {
                    return Err(Error::NonGenericOrbit("inconsistent products"));
                }
            }
        }
    }
    let t = MultiplicationTable { order: n, product, identity: 0 };
    if !validate_group(&t).is_valid() {
        return Err(Error::NonGenericOrbit("recovered law violates the group axioms"));
    }
    Ok(t)
}

/// product(i, j) = index of elements[i] ∘ elements[j].
pub fn table_from_perm_group(pg: &PermutationGroup) -> Result<MultiplicationTable> {
    let elements = pg.elements();
    let n = elements.len();
    let index: BTreeMap<&[usize], usize> = elements.iter().enumerate().map(|(i, p)| (p.images(), i)).collect();
    let mut product = Vec::with_capacity(n * n);
    for a in elements {
        for b in elements {
            let c = a.compose(b);
            product.push(*index.get(c.images()).ok_or(Error::NotAGroup)?);
        }
    }
    Ok(MultiplicationTable { order: n, product, identity: pg.identity_index() })
}
