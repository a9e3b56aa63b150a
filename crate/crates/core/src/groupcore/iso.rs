use alloc::vec;
use alloc::vec::Vec;

use super::MultiplicationTable;

/// Greedy generating sequence: each step adds the element that enlarges the
/// generated subgroup the most (ties broken by larger order, then index).
fn greedy_generators(t: &MultiplicationTable) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut current = t.generated_subgroup(&gens);
    while current.len() < t.order() {
        let mut best: Option<(usize, usize, usize)> = None;
        for g in 0..t.order() {
            if current.binary_search(&g).is_ok() {
                continue;
            }
            let mut trial = gens.clone();
            trial.push(g);
            let size = t.generated_subgroup(&trial).len();
            let key = (size, t.element_order(g), usize::MAX - g);
            if best.is_none_or(|b| key > b) {
                best = Some(key);
            }
        }
        let (_, _, g) = best.expect("some element lies outside a proper subgroup");
        gens.push(usize::MAX - g);
        current = t.generated_subgroup(&gens);
    }
    gens
}

struct Extension<'a> {
    t1: &'a MultiplicationTable,
    t2: &'a MultiplicationTable,
    gens: &'a [usize],
    orders2: Vec<usize>,
}

impl Extension<'_> {
    /// Extends the assignment `gens[..images.len()] ↦ images` along the
    /// Cayley graph; `None` on a conflict or collision.
    fn extend(&self, images: &[usize]) -> Option<Vec<usize>> {
        let n = self.t1.order();
        let gens = &self.gens[..images.len()];
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        map[self.t1.identity()] = self.t2.identity();
        used[self.t2.identity()] = true;
        let mut queue = vec![self.t1.identity()];
        let mut head = 0;
        while head < queue.len() {
            let a = queue[head];
            head += 1;
            for (&g, &h) in gens.iter().zip(images) {
                let b = self.t1.mul(a, g);
                let image = self.t2.mul(map[a], h);
                if map[b] == usize::MAX {
                    if used[image] {
                        return None;
                    }
                    map[b] = image;
                    used[image] = true;
                    queue.push(b);
                } else if map[b] != image {
                    return None;
                }
            }
        }
        Some(map)
    }

    fn search(&self, images: &mut Vec<usize>) -> Option<Vec<usize>> {
        let depth = images.len();
        if depth == self.gens.len() {
            let map = self.extend(images)?;
            let n = self.t1.order();
            let ok = (0..n).all(|a| (0..n).all(|b| map[self.t1.mul(a, b)] == self.t2.mul(map[a], map[b])));
            return ok.then_some(map);
        }
        let wanted = self.t1.element_order(self.gens[depth]);
        for h in 0..self.t2.order() {
            if self.orders2[h] != wanted {
                continue;
            }
            images.push(h);
            if self.extend(images).is_some() {
                if let Some(map) = self.search(images) {
                    return Some(map);
                }
            }
            images.pop();
        }
        None
    }
}

/// A product-preserving bijection `t1 → t2` (indexed by `t1` elements), if any.
pub fn isomorphic(t1: &MultiplicationTable, t2: &MultiplicationTable) -> Option<Vec<usize>> {
    if t1.order() != t2.order() {
        return None;
    }
    let orders1: Vec<usize> = (0..t1.order()).map(|a| t1.element_order(a)).collect();
    let orders2: Vec<usize> = (0..t2.order()).map(|a| t2.element_order(a)).collect();
    let (mut h1, mut h2) = (orders1.clone(), orders2.clone());
    h1.sort_unstable();
    h2.sort_unstable();
    if h1 != h2 || t1.is_abelian() != t2.is_abelian() {
        return None;
    }
    let gens = greedy_generators(t1);
    let ext = Extension { t1, t2, gens: &gens, orders2 };
    ext.search(&mut Vec::with_capacity(gens.len()))
}

#[cfg(test)]
mod tests {
    use super::super::test_tables::*;
    use super::*;

    fn is_iso(t1: &MultiplicationTable, t2: &MultiplicationTable, map: &[usize]) -> bool {
        let n = t1.order();
        let mut seen = vec![false; n];
        map.iter().all(|&b| !core::mem::replace(&mut seen[b], true))
            && (0..n).all(|a| (0..n).all(|b| map[t1.mul(a, b)] == t2.mul(map[a], map[b])))
    }

    #[test]
    fn c2_matches_reflection_group() {
        // D1 as {id, s} under composition.
        let d1 = MultiplicationTable::new(2, vec![0, 1, 1, 0], 0).unwrap();
        assert!(isomorphic(&cyclic(2), &d1).is_some());
    }

    #[test]
    fn c4_is_not_klein() {
        assert!(isomorphic(&cyclic(4), &klein()).is_none());
    }

    #[test]
    fn relabeled_tables_are_isomorphic() {
        for t in [quaternion(), dihedral(4), dihedral(6), cyclic(12)] {
            let n = t.order();
            let perm: Vec<usize> = (0..n).map(|i| (i * 7 + 3) % n).collect();
            // perm must be a bijection for these orders (gcd(7, n) = 1).
            let u = t.relabel(&perm);
            let map = isomorphic(&t, &u).expect("relabeling is an isomorphism");
            assert!(is_iso(&t, &u, &map));
            let back = isomorphic(&u, &t).unwrap();
            assert!(is_iso(&u, &t, &back));
        }
    }

    #[test]
    fn q8_not_d4() {
        assert!(isomorphic(&quaternion(), &dihedral(4)).is_none());
        assert!(isomorphic(&cyclic(6), &dihedral(3)).is_none());
    }

    #[test]
    fn self_iso_fixes_identity() {
        let t = dihedral(5);
        let map = isomorphic(&t, &t).unwrap();
        assert_eq!(map[t.identity()], t.identity());
        assert!(is_iso(&t, &t, &map));
    }
}
