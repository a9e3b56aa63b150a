//! Named small groups: every group of order at most 15, plus the cyclic,
//! dihedral, dicyclic, A4 and S4 families and their direct products with
//! abelian groups up to order 32.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{group_invariants, isomorphic, MultiplicationTable};
use crate::pointsym::{Permutation, PermutationGroup};

const MAX_ORDER: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogGroup {
    Cyclic(usize),
    /// Symmetries of the regular n-gon, order 2n.
    Dihedral(usize),
    /// ⟨a, x | a^(2n), x² = a^n, x a x⁻¹ = a⁻¹⟩, order 4n.
    Dicyclic(usize),
    Alternating4,
    Symmetric4,
    Product(Vec<CatalogGroup>),
}

impl CatalogGroup {
    pub fn name(&self) -> String {
        match self {
            CatalogGroup::Cyclic(n) => format!("C{n}"),
            CatalogGroup::Dihedral(n) => format!("D{n}"),
            CatalogGroup::Dicyclic(n) if n.is_power_of_two() => format!("Q{}", 4 * n),
            CatalogGroup::Dicyclic(n) => format!("Dic{n}"),
            CatalogGroup::Alternating4 => "A4".into(),
            CatalogGroup::Symmetric4 => "S4".into(),
            CatalogGroup::Product(parts) => {
                let names: Vec<String> = parts.iter().map(CatalogGroup::name).collect();
                names.join("x")
            }
        }
    }

    pub fn order(&self) -> usize {
        match self {
            CatalogGroup::Cyclic(n) => *n,
            CatalogGroup::Dihedral(n) => 2 * n,
            CatalogGroup::Dicyclic(n) => 4 * n,
            CatalogGroup::Alternating4 => 12,
            CatalogGroup::Symmetric4 => 24,
            CatalogGroup::Product(parts) => parts.iter().map(CatalogGroup::order).product(),
        }
    }

    pub fn table(&self) -> MultiplicationTable {
        match self {
            CatalogGroup::Cyclic(n) => cyclic_table(*n),
            CatalogGroup::Dihedral(n) => dihedral_table(*n),
            CatalogGroup::Dicyclic(n) => dicyclic_table(*n),
            CatalogGroup::Alternating4 => permutation_table(4, true),
            CatalogGroup::Symmetric4 => permutation_table(4, false),
            CatalogGroup::Product(parts) => {
                let mut it = parts.iter();
                let first = it.next().map_or_else(|| cyclic_table(1), CatalogGroup::table);
                it.fold(first, |acc, g| acc.direct_product(&g.table()))
            }
        }
    }
}

pub(crate) fn cyclic_table(n: usize) -> MultiplicationTable {
    let product = (0..n * n).map(|k| (k / n + k % n) % n).collect();
    MultiplicationTable { order: n, product, identity: 0 }
}

/// Index e·n + k stands for r^k s^e.
pub(crate) fn dihedral_table(n: usize) -> MultiplicationTable {
    let m = 2 * n;
    let mut product = vec![0; m * m];
    for a in 0..m {
        for b in 0..m {
            let (e1, k1) = (a / n, a % n);
            let (e2, k2) = (b / n, b % n);
            let k = if e1 == 0 { (k1 + k2) % n } else { (k1 + n - k2) % n };
            product[a * m + b] = ((e1 + e2) % 2) * n + k;
        }
    }
    MultiplicationTable { order: m, product, identity: 0 }
}

/// Index e·2n + k stands for a^k x^e.
fn dicyclic_table(n: usize) -> MultiplicationTable {
    let half = 2 * n;
    let m = 4 * n;
    let mut product = vec![0; m * m];
    for a in 0..m {
        for b in 0..m {
            let (e1, k1) = (a / half, a % half);
            let (e2, k2) = (b / half, b % half);
            let (k, e) = match (e1, e2) {
                (0, _) => (k1 + k2, e2),
                (_, 0) => (k1 + half - k2, 1),
                _ => (k1 + half - k2 + n, 0),
            };
            product[a * m + b] = e * half + k % half;
        }
    }
    MultiplicationTable { order: m, product, identity: 0 }
}

fn permutation_table(n: usize, even_only: bool) -> MultiplicationTable {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for i in 0..n {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }
    fn is_even(p: &[usize]) -> bool {
        let inversions = (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]);
        inversions.count() % 2 == 0
    }
    let mut all = perms(n);
    all.sort();
    let elements: Vec<Permutation> = all
        .into_iter()
        .filter(|p| !even_only || is_even(p))
        .map(|p| Permutation::new(p).expect("permutation"))
        .collect();
    let pg = PermutationGroup::new(elements).expect("closed");
    super::table_from_perm_group(&pg).expect("closed")
}

/// Invariant-factor lists d₁ | d₂ | … (at least two factors, each ≥ 2) with
/// product at most `limit`.
fn noncyclic_abelian(limit: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, product: usize, limit: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() >= 2 {
            out.push(prefix.clone());
        }
        let last = *prefix.last().unwrap_or(&1);
        let mut next = if prefix.is_empty() { 2 } else { last };
        while product * next <= limit {
            if next % last == 0 {
                prefix.push(next);
                extend(prefix, product * next, limit, out);
                prefix.pop();
            }
            next += 1;
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), 1, limit, &mut out);
    out.sort_by_key(|f| (f.iter().product::<usize>(), f.len()));
    out
}

fn abelian_from_factors(factors: &[usize]) -> CatalogGroup {
    CatalogGroup::Product(factors.iter().rev().map(|&d| CatalogGroup::Cyclic(d)).collect())
}

/// The full catalog in match priority order.
pub fn catalog_entries() -> Vec<CatalogGroup> {
    let mut out: Vec<CatalogGroup> = (1..=MAX_ORDER).map(CatalogGroup::Cyclic).collect();
    out.extend((2..=MAX_ORDER / 2).map(CatalogGroup::Dihedral));
    out.extend((2..=MAX_ORDER / 4).map(CatalogGroup::Dicyclic));
    out.push(CatalogGroup::Alternating4);
    out.push(CatalogGroup::Symmetric4);
    let abelian = noncyclic_abelian(MAX_ORDER);
    out.extend(abelian.iter().map(|f| abelian_from_factors(f)));

    let mut bases: Vec<CatalogGroup> = (3..=MAX_ORDER / 2).map(CatalogGroup::Dihedral).collect();
    bases.extend((2..=MAX_ORDER / 4).map(CatalogGroup::Dicyclic));
    bases.push(CatalogGroup::Alternating4);
    bases.push(CatalogGroup::Symmetric4);
    let mut factor_lists: Vec<Vec<usize>> = (2..=MAX_ORDER / 6).map(|d| vec![d]).collect();
    factor_lists.extend(abelian);
    for base in &bases {
        for f in &factor_lists {
            let order = base.order() * f.iter().product::<usize>();
            if order <= MAX_ORDER {
                let mut parts = vec![base.clone()];
                parts.extend(f.iter().rev().map(|&d| CatalogGroup::Cyclic(d)));
                out.push(CatalogGroup::Product(parts));
            }
        }
    }
    out
}

/// Name of the first catalog entry isomorphic to `t`, or
/// `unidentified(order=n)`.
pub fn identify_small_group(t: &MultiplicationTable) -> String {
    let inv = group_invariants(t);
    for entry in catalog_entries() {
        if entry.order() != t.order() {
            continue;
        }
        let table = entry.table();
        if group_invariants(&table) != inv {
            continue;
        }
        if isomorphic(t, &table).is_some() {
            return entry.name();
        }
    }
    format!("unidentified(order={})", t.order())
}
