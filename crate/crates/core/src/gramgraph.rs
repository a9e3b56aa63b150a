//! Gram graphs: the complete edge-labeled digraph (loops included) on a
//! finite point set, with the edge s → t labeled by the class of ⟨s, t⟩.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numerics::{cluster_scalars, common_shape, gram_matrix, FieldTag, Scalar, TolerancePolicy, Vector};

#[derive(Debug, Clone, PartialEq)]
pub struct GramGraph {
    field: FieldTag,
    vertex_count: usize,
    /// Row-major label class ids, `labels[s * n + t]` for the edge s → t.
    labels: Vec<u32>,
    representatives: Vec<Scalar>,
}

impl GramGraph {
    /// Assembles a graph from an explicit label matrix. Representatives are
    /// diagnostic only and may be empty.
    pub fn from_labels(field: FieldTag, vertex_count: usize, labels: Vec<u32>, representatives: Vec<Scalar>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::EmptyInput);
        }
        if labels.len() != vertex_count * vertex_count {
            return Err(Error::DimensionMismatch { expected: vertex_count * vertex_count, found: labels.len() });
        }
        let count = labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
        let representatives =
            if representatives.len() == count { representatives } else { vec![Scalar::new(f64::NAN, 0.0); count] };
        Ok(GramGraph { field, vertex_count, labels, representatives })
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn label_count(&self) -> usize {
        self.representatives.len()
    }

    #[inline]
    pub fn label(&self, s: usize, t: usize) -> u32 {
        self.labels[s * self.vertex_count + t]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn representative(&self, class: u32) -> Scalar {
        self.representatives[class as usize]
    }

    pub fn representatives(&self) -> &[Scalar] {
        &self.representatives
    }

    /// Number of edges carrying each label.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.label_count()];
        for &l in &self.labels {
            sizes[l as usize] += 1;
        }
        sizes
    }

    /// Induced subgraph on a contiguous vertex range, keeping label ids.
    pub fn restrict(&self, start: usize, len: usize) -> GramGraph {
        let mut labels = Vec::with_capacity(len * len);
        for s in start..start + len {
            for t in start..start + len {
                labels.push(self.label(s, t));
            }
        }
        GramGraph { field: self.field, vertex_count: len, labels, representatives: self.representatives.clone() }
    }
}

/// Clusters all n² pairwise inner products into label classes.
pub fn build_gram_graph(points: &[Vector], policy: &TolerancePolicy) -> Result<GramGraph> {
    let (field, _) = common_shape(points)?;
    let g = gram_matrix(points);
    let n = points.len();
    let values: Vec<Scalar> = (0..n).flat_map(|s| (0..n).map(move |t| (s, t))).map(|(s, t)| g[(s, t)]).collect();
    let classes = cluster_scalars(&values, policy)?;
    Ok(GramGraph { field, vertex_count: n, labels: classes.class_of, representatives: classes.representatives })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GramInvariants {
    pub vertices: usize,
    pub labels: usize,
    /// The class shared by all loops.
    pub loop_class: u32,
}

pub fn gram_invariants(g: &GramGraph) -> Result<GramInvariants> {
    let loop_class = g.label(0, 0);
    let mut diag: Vec<u32> = (0..g.vertex_count).map(|s| g.label(s, s)).collect();
    diag.sort_unstable();
    diag.dedup();
    if diag.len() > 1 {
        return Err(Error::HeterogeneousNorms { classes: diag.len() });
    }
    Ok(GramInvariants { vertices: g.vertex_count, labels: g.label_count(), loop_class })
}

/// Witness of an isomorphism of edge-labeled digraphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphIsomorphism {
    /// Image in the second graph of each vertex of the first.
    pub vertex_map: Vec<usize>,
    /// Image of each label class of the first graph.
    pub label_map: Vec<u32>,
}

/// Label-agnostic vertex signature: sorted multiplicities of out-labels and
/// in-labels, together with the global size of the loop class.
fn vertex_signature(g: &GramGraph, sizes: &[usize], v: usize) -> Vec<usize> {
    let n = g.vertex_count;
    let mut out_counts = vec![0usize; g.label_count()];
    let mut in_counts = vec![0usize; g.label_count()];
    for t in 0..n {
        out_counts[g.label(v, t) as usize] += 1;
        in_counts[g.label(t, v) as usize] += 1;
    }
    let mut out: Vec<usize> = out_counts.into_iter().filter(|&c| c > 0).collect();
    let mut inn: Vec<usize> = in_counts.into_iter().filter(|&c| c > 0).collect();
    out.sort_unstable();
    inn.sort_unstable();
    let mut sig = vec![sizes[g.label(v, v) as usize]];
    sig.extend(out);
    sig.push(usize::MAX);
    sig.extend(inn);
    sig
}

struct IsoSearch<'a> {
    g1: &'a GramGraph,
    g2: &'a GramGraph,
    order: Vec<usize>,
    candidates: Vec<Vec<usize>>,
    vmap: Vec<usize>,
    used: Vec<bool>,
    lmap: Vec<u32>,
    lmap_inv: Vec<u32>,
    trail: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl IsoSearch<'_> {
    /// Binds label `a` of g1 to label `b` of g2, recording new bindings on the trail.
    fn bind(&mut self, a: u32, b: u32) -> bool {
        let cur = self.lmap[a as usize];
        if cur == NONE {
            if self.lmap_inv[b as usize] != NONE {
                return false;
            }
            self.lmap[a as usize] = b;
            self.lmap_inv[b as usize] = a;
            self.trail.push(a);
            true
        } else {
            cur == b
        }
    }

    fn unwind(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let a = self.trail.pop().expect("nonempty trail");
            let b = self.lmap[a as usize];
            self.lmap[a as usize] = NONE;
            self.lmap_inv[b as usize] = NONE;
        }
    }

    fn try_assign(&mut self, depth: usize, w: usize) -> bool {
        let v = self.order[depth];
        if !self.bind(self.g1.label(v, v), self.g2.label(w, w)) {
            return false;
        }
        for i in 0..depth {
            let u = self.order[i];
            let uw = self.vmap[u];
            if !self.bind(self.g1.label(u, v), self.g2.label(uw, w)) {
                return false;
            }
            if !self.bind(self.g1.label(v, u), self.g2.label(w, uw)) {
                return false;
            }
        }
        true
    }

    fn search(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let v = self.order[depth];
        for i in 0..self.candidates[v].len() {
            let w = self.candidates[v][i];
            if self.used[w] {
                continue;
            }
            let mark = self.trail.len();
            if self.try_assign(depth, w) {
                self.vmap[v] = w;
                self.used[w] = true;
                if self.search(depth + 1) {
                    return true;
                }
                self.used[w] = false;
                self.vmap[v] = usize::MAX;
            }
            self.unwind(mark);
        }
        false
    }
}

/// Searches for a pair of bijections (vertices, labels) carrying every edge
/// label of `g1` to the label of the image edge in `g2`.
pub fn graphs_isomorphic(g1: &GramGraph, g2: &GramGraph) -> Option<GraphIsomorphism> {
    let n = g1.vertex_count;
    if n != g2.vertex_count || g1.label_count() != g2.label_count() {
        return None;
    }
    let (s1, s2) = (g1.class_sizes(), g2.class_sizes());
    let (mut a, mut b) = (s1.clone(), s2.clone());
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return None;
    }
    let sig1: Vec<Vec<usize>> = (0..n).map(|v| vertex_signature(g1, &s1, v)).collect();
    let sig2: Vec<Vec<usize>> = (0..n).map(|v| vertex_signature(g2, &s2, v)).collect();
    let candidates: Vec<Vec<usize>> = (0..n).map(|v| (0..n).filter(|&w| sig1[v] == sig2[w]).collect()).collect();
    if candidates.iter().any(|c| c.is_empty()) {
        return None;
    }
    // Most constrained vertices first; ties keep their original order.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (candidates[v].len(), v));

    let labels = g1.label_count();
    let mut search = IsoSearch {
        g1,
        g2,
        order,
        candidates,
        vmap: vec![usize::MAX; n],
        used: vec![false; n],
        lmap: vec![NONE; labels],
        lmap_inv: vec![NONE; labels],
        trail: Vec::new(),
    };
    if search.search(0) {
        Some(GraphIsomorphism { vertex_map: search.vmap, label_map: search.lmap })
    } else {
        None
    }
}

/// Checks both conditions of an isomorphism witness.
pub fn is_isomorphism(g1: &GramGraph, g2: &GramGraph, iso: &GraphIsomorphism) -> bool {
    let n = g1.vertex_count;
    if n != g2.vertex_count || iso.vertex_map.len() != n || iso.label_map.len() != g1.label_count() {
        return false;
    }
    let mut seen = vec![false; n];
    for &w in &iso.vertex_map {
        if w >= n || seen[w] {
            return false;
        }
        seen[w] = true;
    }
    let mut lseen = vec![false; g2.label_count()];
    for &l in &iso.label_map {
        if l as usize >= g2.label_count() || lseen[l as usize] {
            return false;
        }
        lseen[l as usize] = true;
    }
    (0..n).all(|s| {
        (0..n).all(|t| iso.label_map[g1.label(s, t) as usize] == g2.label(iso.vertex_map[s], iso.vertex_map[t]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn rotate(p: (f64, f64), angle: f64) -> Vector {
        let (s, c) = (libm::sin(angle), libm::cos(angle));
        Vector::real(&[c * p.0 - s * p.1, s * p.0 + c * p.1])
    }

    fn cyclic_orbit(n: usize, p: (f64, f64)) -> Vec<Vector> {
        (0..n).map(|k| rotate(p, 2.0 * PI * k as f64 / n as f64)).collect()
    }

    fn dihedral_orbit(n: usize, p: (f64, f64)) -> Vec<Vector> {
        let mut pts = cyclic_orbit(n, p);
        pts.extend(cyclic_orbit(n, (p.0, -p.1)));
        pts
    }

    #[test]
    fn c4_representatives() {
        let g = build_gram_graph(&cyclic_orbit(4, (1.0, 2.0)), &TolerancePolicy::default()).unwrap();
        let mut reps: Vec<f64> = g.representatives().iter().map(|z| libm::round(z.re * 1e9) / 1e9).collect();
        reps.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(reps, vec![-5.0, 0.0, 5.0]);
    }

    #[test]
    fn label_counts_for_polygons() {
        let p = TolerancePolicy::default();
        let g = build_gram_graph(&cyclic_orbit(8, (0.83, -0.41)), &p).unwrap();
        assert_eq!((g.vertex_count(), g.label_count()), (8, 5));
        let g = build_gram_graph(&dihedral_orbit(4, (0.83, -0.41)), &p).unwrap();
        assert_eq!((g.vertex_count(), g.label_count()), (8, 7));
    }

    #[test]
    fn invariants_of_single_point() {
        let g = build_gram_graph(&[Vector::real(&[3.0, 1.0])], &TolerancePolicy::default()).unwrap();
        let inv = gram_invariants(&g).unwrap();
        assert_eq!((inv.vertices, inv.labels), (1, 1));
    }

    #[test]
    fn heterogeneous_norms_detected() {
        let pts = [Vector::real(&[1.0, 0.0]), Vector::real(&[0.0, 2.0])];
        let g = build_gram_graph(&pts, &TolerancePolicy::default()).unwrap();
        assert!(matches!(gram_invariants(&g), Err(Error::HeterogeneousNorms { classes: 2 })));
    }

    #[test]
    fn real_labels_symmetric() {
        let g = build_gram_graph(&dihedral_orbit(5, (1.3, 0.2)), &TolerancePolicy::default()).unwrap();
        for s in 0..g.vertex_count() {
            for t in 0..g.vertex_count() {
                assert_eq!(g.label(s, t), g.label(t, s));
            }
        }
    }

    /// All n! vertex maps, label map inferred; independent of the search.
    fn brute_force_isomorphic(g1: &GramGraph, g2: &GramGraph) -> bool {
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
        let n = g1.vertex_count();
        if n != g2.vertex_count() {
            return false;
        }
        perms(n).into_iter().any(|p| {
            let mut fwd = alloc::collections::BTreeMap::new();
            let mut bwd = alloc::collections::BTreeMap::new();
            (0..n).all(|s| {
                (0..n).all(|t| {
                    let (a, b) = (g1.label(s, t), g2.label(p[s], p[t]));
                    *fwd.entry(a).or_insert(b) == b && *bwd.entry(b).or_insert(a) == a
                })
            })
        })
    }

    #[test]
    fn c3_orbits_at_different_scales_are_isomorphic() {
        let p = TolerancePolicy::default();
        let a = build_gram_graph(&cyclic_orbit(3, (0.7, 0.1)), &p).unwrap();
        let b = build_gram_graph(&cyclic_orbit(3, (-2.4, 5.0)), &p).unwrap();
        assert!(brute_force_isomorphic(&a, &b));
        let iso = graphs_isomorphic(&a, &b).expect("isomorphic");
        assert!(is_isomorphism(&a, &b, &iso));
    }

    #[test]
    fn c4_and_d2_orbits_differ() {
        let p = TolerancePolicy::default();
        let c4 = build_gram_graph(&cyclic_orbit(4, (0.9, 0.3)), &p).unwrap();
        let d2 = build_gram_graph(&dihedral_orbit(2, (0.9, 0.3)), &p).unwrap();
        assert_eq!(d2.vertex_count(), 4);
        assert!(!brute_force_isomorphic(&c4, &d2));
        assert!(graphs_isomorphic(&c4, &d2).is_none());
    }

    #[test]
    fn self_isomorphism_and_symmetry() {
        let p = TolerancePolicy::default();
        let g = build_gram_graph(&dihedral_orbit(3, (1.1, 0.4)), &p).unwrap();
        let iso = graphs_isomorphic(&g, &g).unwrap();
        assert!(is_isomorphism(&g, &g, &iso));

        // Relabeled copy: permute vertices and label ids.
        let n = g.vertex_count();
        let perm: Vec<usize> = (0..n).map(|i| (i * 5 + 2) % n).collect();
        let k = g.label_count() as u32;
        let mut labels = vec![0u32; n * n];
        for s in 0..n {
            for t in 0..n {
                labels[perm[s] * n + perm[t]] = (g.label(s, t) + 3) % k;
            }
        }
        let h = GramGraph::from_labels(FieldTag::Real, n, labels, vec![]).unwrap();
        let fwd = graphs_isomorphic(&g, &h).unwrap();
        let back = graphs_isomorphic(&h, &g).unwrap();
        assert!(is_isomorphism(&g, &h, &fwd) && is_isomorphism(&h, &g, &back));
    }

    #[test]
    fn gram_graph_invariant_under_isometry() {
        let p = TolerancePolicy::default();
        let pts = dihedral_orbit(5, (0.3, 1.7));
        let moved: Vec<Vector> = pts.iter().map(|v| rotate((v.entries()[0].re, v.entries()[1].re), 0.913)).collect();
        let a = build_gram_graph(&pts, &p).unwrap();
        let b = build_gram_graph(&moved, &p).unwrap();
        assert_eq!(a.labels(), b.labels());
        for (x, y) in a.representatives().iter().zip(b.representatives()) {
            assert!((x - y).norm() < 1e-12);
        }
    }
}
