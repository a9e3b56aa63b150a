//! Forward direction: catalog groups as explicit isometries and seeded
//! generic orbits drawn from them.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gramgraph::build_gram_graph;
use crate::numerics::{FieldTag, Matrix, Scalar, TolerancePolicy, Vector};
use crate::pointsym::orbit_pairing;
use crate::reconstruct::ConcreteGroup;

/// Largest group [`build_group`] will generate before giving up.
pub const CLOSURE_LIMIT: usize = 10_000;
const SAMPLE_ATTEMPTS: usize = 100;
const RESEED_STRIDE: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// Rotations of the plane over ℝ; diag(ζ, ζ², …) over ℂ.
    Cyclic(usize),
    /// Symmetries of the regular n-gon in the plane.
    Dihedral(usize),
    /// Left multiplication on ℝ⁴ = ℍ over ℝ; SU(2) over ℂ.
    Quaternion8,
    /// Permutation matrices of Sₙ.
    Symmetric(usize),
    /// {I, −I}.
    Sign,
    /// ⟨r⊕I, I⊕−I⟩ on F⁴ with r the quarter turn.
    G1,
    /// ⟨r⊕r, I⊕−I⟩ on F⁴.
    G2,
    /// Direct product of the parts acting block-diagonally.
    DirectSum(Vec<GroupSpec>),
    /// Left-regular representation of the inner group.
    Regular(Box<GroupSpec>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    pub family: Family,
    pub field: FieldTag,
    /// Ambient dimension; the natural one when `None`, identity-padded when larger.
    pub dim: Option<usize>,
    pub conjugation_seed: Option<u64>,
}

impl GroupSpec {
    pub fn new(family: Family, field: FieldTag) -> Self {
        GroupSpec { family, field, dim: None, conjugation_seed: None }
    }

    pub fn with_dim(mut self, dim: usize) -> Self {
        self.dim = Some(dim);
        self
    }

    pub fn conjugated(mut self, seed: u64) -> Self {
        self.conjugation_seed = Some(seed);
        self
    }

    pub fn name(&self) -> String {
        let base = match &self.family {
            Family::Cyclic(n) => format!("cyclic{n}"),
            Family::Dihedral(n) => format!("dihedral{n}"),
            Family::Quaternion8 => "quaternion8".into(),
            Family::Symmetric(n) => format!("symmetric{n}"),
            Family::Sign => "sign".into(),
            Family::G1 => "g1".into(),
            Family::G2 => "g2".into(),
            Family::DirectSum(parts) => {
                let names: Vec<String> = parts.iter().map(GroupSpec::name).collect();
                format!("sum({})", names.join(","))
            }
            Family::Regular(inner) => format!("regular({})", inner.name()),
        };
        match self.dim {
            Some(d) => format!("{base}/{}{d}", if self.field == FieldTag::Real { "R" } else { "C" }),
            None => format!("{base}/{}", if self.field == FieldTag::Real { "R" } else { "C" }),
        }
    }
}

fn real_matrix(n: usize, entries: &[f64]) -> Matrix {
    Matrix::from_real_row_major(n, n, entries).expect("square")
}

fn rotation(angle: f64) -> Matrix {
    let (s, c) = (libm::sin(angle), libm::cos(angle));
    real_matrix(2, &[c, -s, s, c])
}

fn block_diag(blocks: &[Matrix]) -> Matrix {
    let n: usize = blocks.iter().map(Matrix::rows).sum();
    let mut m = DMatrix::<Scalar>::zeros(n, n);
    let mut at = 0;
    for b in blocks {
        m.view_mut((at, at), (b.rows(), b.rows())).copy_from(b.inner());
        at += b.rows();
    }
    Matrix::from_inner(m)
}

fn permutation_matrix(images: &[usize]) -> Matrix {
    let n = images.len();
    let mut m = DMatrix::<Scalar>::zeros(n, n);
    for (j, &i) in images.iter().enumerate() {
        m[(i, j)] = Scalar::new(1.0, 0.0);
    }
    Matrix::from_inner(m)
}

/// Generators and natural dimension.
fn generators(spec: &GroupSpec) -> Result<(Vec<Matrix>, usize)> {
    let invalid = |msg: &str| Error::InvalidSpec(String::from(msg));
    let complex = spec.field == FieldTag::Complex;
    Ok(match &spec.family {
        Family::Cyclic(0) | Family::Dihedral(0) | Family::Symmetric(0) => return Err(invalid("n must be positive")),
        Family::Cyclic(n) => {
            let theta = 2.0 * PI / *n as f64;
            if complex {
                let d = spec.dim.unwrap_or(1);
                let diag: Vec<Scalar> = (1..=d).map(|k| Scalar::from_polar(1.0, theta * k as f64)).collect();
                let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag));
                (vec![Matrix::from_inner(m)], d)
            } else {
                (vec![rotation(theta)], 2)
            }
        }
        Family::Dihedral(n) => (vec![rotation(2.0 * PI / *n as f64), real_matrix(2, &[1.0, 0.0, 0.0, -1.0])], 2),
        Family::Quaternion8 => {
            if complex {
                let z = Scalar::new(0.0, 0.0);
                let i = Matrix::from_row_major(2, 2, &[Scalar::i(), z, z, -Scalar::i()]).expect("2x2");
                let j = real_matrix(2, &[0.0, -1.0, 1.0, 0.0]);
                (vec![i, j], 2)
            } else {
                // Left multiplication by i and j in the basis 1, i, j, k.
                #[rustfmt::skip]
                let li = real_matrix(4, &[
                    0.0, -1.0, 0.0, 0.0,
                    1.0, 0.0, 0.0, 0.0,
                    0.0, 0.0, 0.0, -1.0,
                    0.0, 0.0, 1.0, 0.0,
                ]);
                #[rustfmt::skip]
                let lj = real_matrix(4, &[
                    0.0, 0.0, -1.0, 0.0,
                    0.0, 0.0, 0.0, 1.0,
                    1.0, 0.0, 0.0, 0.0,
                    0.0, -1.0, 0.0, 0.0,
                ]);
                (vec![li, lj], 4)
            }
        }
        Family::Symmetric(n) => {
            let n = *n;
            let mut swap: Vec<usize> = (0..n).collect();
            if n > 1 {
                swap.swap(0, 1);
            }
            let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
            (vec![permutation_matrix(&swap), permutation_matrix(&cycle)], n)
        }
        Family::Sign => {
            let d = spec.dim.unwrap_or(1);
            if d == 0 {
                return Err(invalid("dimension must be positive"));
            }
            (vec![Matrix::identity(d).scale(-1.0)], d)
        }
        Family::G1 | Family::G2 => {
            let r = real_matrix(2, &[0.0, -1.0, 1.0, 0.0]);
            let id = Matrix::identity(2);
            let first = if spec.family == Family::G1 { block_diag(&[r.clone(), id.clone()]) } else { block_diag(&[r.clone(), r]) };
            (vec![first, block_diag(&[id.clone(), id.scale(-1.0)])], 4)
        }
        Family::DirectSum(parts) => {
            if parts.is_empty() {
                return Err(invalid("empty direct sum"));
            }
            let mut blocks = Vec::with_capacity(parts.len());
            for p in parts {
                if p.field != spec.field {
                    return Err(invalid("direct summands must share the field"));
                }
                blocks.push(build_group(p)?);
            }
            let dims: Vec<usize> = blocks.iter().map(ConcreteGroup::dimension).collect();
            let mut gens = Vec::new();
            for (i, g) in blocks.iter().enumerate() {
                for m in g.matrices() {
                    let parts: Vec<Matrix> =
                        (0..blocks.len()).map(|j| if j == i { m.clone() } else { Matrix::identity(dims[j]) }).collect();
                    gens.push(block_diag(&parts));
                }
            }
            (gens, dims.iter().sum())
        }
        Family::Regular(inner) => {
            let g = build_group(inner)?;
            let t = g.table();
            let gens = (0..t.order())
                .map(|a| permutation_matrix(&(0..t.order()).map(|b| t.mul(a, b)).collect::<Vec<_>>()))
                .collect();
            (gens, t.order())
        }
    })
}

/// Bucket index of a fixed linear functional of the matrix entries; matrices
/// within `MATCH_TOL` land in the same or an adjacent bucket.
fn closure_key(m: &Matrix) -> i64 {
    let mut key = 0.0;
    for (i, z) in m.inner().iter().enumerate() {
        let w = 1.0 + 0.618_033_988_75 * i as f64;
        key += w * (z.re + 0.5 * z.im);
    }
    libm::floor(key * 1e6) as i64
}

fn closure(gens: &[Matrix], dim: usize) -> Result<Vec<Matrix>> {
    const MATCH_TOL: f64 = 1e-9;
    let mut elements = vec![Matrix::identity(dim)];
    let mut buckets: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    buckets.entry(closure_key(&elements[0])).or_default().push(0);
    let mut head = 0;
    while head < elements.len() {
        let e = elements[head].clone();
        head += 1;
        for g in gens {
            let p = g.mul(&e);
            let key = closure_key(&p);
            let known = (key - 1..=key + 1)
                .filter_map(|b| buckets.get(&b))
                .flatten()
                .any(|&i| elements[i].frobenius_distance(&p) < MATCH_TOL);
            if !known {
                if elements.len() == CLOSURE_LIMIT {
                    return Err(Error::NotFinite { limit: CLOSURE_LIMIT });
                }
                buckets.entry(key).or_default().push(elements.len());
                elements.push(p);
            }
        }
    }
    Ok(elements)
}

/// Standard normal draw (Box–Muller).
fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1 = 1.0 - rng.random::<f64>();
    let u2 = rng.random::<f64>();
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * PI * u2)
}

fn gaussian_scalar(rng: &mut ChaCha8Rng, field: FieldTag) -> Scalar {
    match field {
        FieldTag::Real => Scalar::new(gaussian(rng), 0.0),
        FieldTag::Complex => Scalar::new(gaussian(rng), gaussian(rng)),
    }
}

/// Haar-distributed isometry: Q from the QR factorization of a Gaussian
/// matrix, with the phases of R's diagonal moved into Q.
pub fn random_isometry(dim: usize, field: FieldTag, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = DMatrix::from_fn(dim, dim, |_, _| gaussian_scalar(&mut rng, field));
    let qr = a.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Scalar::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    if field == FieldTag::Real {
        q.iter_mut().for_each(|z| z.im = 0.0);
    }
    Matrix::from_inner(q)
}

pub fn build_group(spec: &GroupSpec) -> Result<ConcreteGroup> {
    let (gens, natural) = generators(spec)?;
    let dim = spec.dim.unwrap_or(natural);
    if dim < natural {
        return Err(Error::InvalidSpec(format!("dimension {dim} is below the natural dimension {natural}")));
    }
    let gens: Vec<Matrix> = if dim > natural {
        gens.iter().map(|g| block_diag(&[g.clone(), Matrix::identity(dim - natural)])).collect()
    } else {
        gens
    };
    let mut elements = closure(&gens, dim)?;
    if let Some(seed) = spec.conjugation_seed {
        let q = random_isometry(dim, spec.field, seed);
        let qi = q.adjoint();
        elements = elements.iter().map(|m| q.mul(m).mul(&qi)).collect();
    }
    if spec.field == FieldTag::Real {
        for m in &elements {
            if !m.is_real() {
                return Err(Error::InvalidSpec(String::from("real spec produced complex matrices")));
            }
        }
    }
    ConcreteGroup::from_matrices(spec.field, dim, elements, &TolerancePolicy::default())
}

/// Number of Gram label classes of `k` generic orbits: k²|G| over ℂ. Over ℝ
/// each orbit sees one label per distinct g + g⁻¹ (the zero matrix giving
/// the label 0 shared by all orbits) and each pair of orbits adds |G|.
pub fn expected_label_count(group: &ConcreteGroup, k: usize) -> usize {
    let n = group.order();
    match group.field() {
        FieldTag::Complex => k * k * n,
        FieldTag::Real => {
            let mut sums: Vec<Matrix> = Vec::new();
            for m in group.matrices() {
                let s = Matrix::from_inner(m.inner() + m.adjoint().inner());
                if !sums.iter().any(|x| x.frobenius_distance(&s) < 1e-9) {
                    sums.push(s);
                }
            }
            let zero = sums.iter().any(|s| s.inner().norm() < 1e-9);
            let shared = if zero { k - 1 } else { 0 };
            k * sums.len() - shared + k * (k - 1) / 2 * n
        }
    }
}

fn min_pairwise_distance(points: &[Vector]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            best = best.min(points[i].distance(&points[j]));
        }
    }
    best
}

fn validate_sample(group: &ConcreteGroup, orbits: &[Vec<Vector>], policy: &TolerancePolicy) -> bool {
    const SEPARATION: f64 = 1e-4;
    let norms: Vec<f64> = orbits.iter().map(|o| o[0].norm_sqr()).collect();
    let scale = norms.iter().copied().fold(0.0, f64::max);
    if scale <= 0.0 {
        return false;
    }
    for o in orbits {
        if min_pairwise_distance(o) <= SEPARATION * libm::sqrt(scale) {
            return false;
        }
    }
    for i in 0..norms.len() {
        for j in i + 1..norms.len() {
            if (norms[i] - norms[j]).abs() <= SEPARATION * scale {
                return false;
            }
        }
    }
    let all: Vec<Vector> = orbits.iter().flatten().cloned().collect();
    match build_gram_graph(&all, policy) {
        Ok(g) if g.label_count() == expected_label_count(group, orbits.len()) => {}
        _ => return false,
    }
    orbits[1..].iter().all(|o| orbit_pairing(&orbits[0], o, policy).is_ok())
}

/// Draws `k` generic orbits with Gaussian base points, resampling on failed
/// validation. Points in each orbit are shuffled.
pub fn sample_orbits(group: &ConcreteGroup, k: usize, seed: u64, policy: &TolerancePolicy) -> Result<Vec<Vec<Vector>>> {
    policy.validate()?;
    if k == 0 {
        return Err(Error::EmptyInput);
    }
    for attempt in 0..SAMPLE_ATTEMPTS as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt.wrapping_mul(RESEED_STRIDE)));
        let mut orbits = Vec::with_capacity(k);
        for _ in 0..k {
            let entries: Vec<Scalar> = (0..group.dimension()).map(|_| gaussian_scalar(&mut rng, group.field())).collect();
            let x = Vector::new(group.field(), entries)?;
            let orbit: Vec<Vector> = group.matrices().iter().map(|m| m.apply(&x)).collect::<Result<_>>()?;
            orbits.push(orbit);
        }
        if !validate_sample(group, &orbits, policy) {
            continue;
        }
        for o in &mut orbits {
            o.shuffle(&mut rng);
        }
        return Ok(orbits);
    }
    Err(Error::GenericityFailure { attempts: SAMPLE_ATTEMPTS })
}

/// Named specs exercised by the test suites and the `simulate` command.
pub fn catalog(field: FieldTag) -> Vec<GroupSpec> {
    let spec = |f: Family| GroupSpec::new(f, field);
    let mut out: Vec<GroupSpec> = [1, 2, 3, 4, 5, 6, 8, 12].iter().map(|&n| spec(Family::Cyclic(n))).collect();
    if field == FieldTag::Complex {
        out.push(spec(Family::Cyclic(4)).with_dim(2));
        out.push(spec(Family::Cyclic(6)).with_dim(3));
    }
    out.extend([2, 3, 4, 6].iter().map(|&n| spec(Family::Dihedral(n))));
    out.push(spec(Family::Quaternion8));
    out.extend([3, 4].iter().map(|&n| spec(Family::Symmetric(n))));
    out.extend([1, 2, 3].iter().map(|&d| spec(Family::Sign).with_dim(d)));
    out.push(spec(Family::G1));
    out.push(spec(Family::G2));
    out.push(spec(Family::Regular(Box::new(spec(Family::Cyclic(4))))));
    out.push(spec(Family::Regular(Box::new(spec(Family::Symmetric(3))))));
    out.push(spec(Family::DirectSum(vec![spec(Family::Cyclic(3)), spec(Family::Sign)])));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupcore::{identify_small_group, isomorphic, validate_group};
    use crate::pointsym::point_automorphisms;

    fn real(f: Family) -> GroupSpec {
        GroupSpec::new(f, FieldTag::Real)
    }

    #[test]
    fn cyclic_four_quarter_turns() {
        let g = build_group(&real(Family::Cyclic(4))).unwrap();
        assert_eq!(g.order(), 4);
        for k in 0..4 {
            let want = rotation(k as f64 * PI / 2.0);
            assert!(g.matrices().iter().any(|m| m.frobenius_distance(&want) < 1e-12));
        }
    }

    #[test]
    fn catalog_orders_and_names() {
        let cases: Vec<(GroupSpec, usize, &str)> = vec![
            (real(Family::Dihedral(3)), 6, "D3"),
            (real(Family::Quaternion8), 8, "Q8"),
            (GroupSpec::new(Family::Quaternion8, FieldTag::Complex), 8, "Q8"),
            (real(Family::Symmetric(4)), 24, "S4"),
            (real(Family::G1), 8, "C4xC2"),
            (real(Family::G2), 8, "C4xC2"),
            (real(Family::DirectSum(vec![real(Family::Cyclic(3)), real(Family::Sign)])), 6, "C6"),
            (GroupSpec::new(Family::Regular(Box::new(real(Family::Symmetric(3)))), FieldTag::Complex), 6, "D3"),
        ];
        for (spec, order, name) in cases {
            let g = build_group(&spec).unwrap();
            assert_eq!(g.order(), order, "{}", spec.name());
            assert!(validate_group(g.table()).is_valid());
            assert_eq!(identify_small_group(g.table()), name, "{}", spec.name());
        }
    }

    #[test]
    fn sign_on_complex_space() {
        let g = build_group(&GroupSpec::new(Family::Sign, FieldTag::Complex).with_dim(3)).unwrap();
        assert_eq!(g.order(), 2);
        assert!(g.matrices().iter().any(|m| m.frobenius_distance(&Matrix::identity(3).scale(-1.0)) < 1e-12));
    }

    #[test]
    fn invalid_specs() {
        assert!(matches!(build_group(&real(Family::Cyclic(0))), Err(Error::InvalidSpec(_))));
        assert!(matches!(build_group(&real(Family::Quaternion8).with_dim(3)), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn closure_limit() {
        // An irrational rotation never closes.
        let gens = vec![rotation(1.0)];
        assert_eq!(closure(&gens, 2), Err(Error::NotFinite { limit: CLOSURE_LIMIT }));
    }

    #[test]
    fn conjugation_keeps_table() {
        let spec = real(Family::Dihedral(4));
        let plain = build_group(&spec).unwrap();
        let conj = build_group(&spec.clone().conjugated(11)).unwrap();
        assert_eq!(plain.table(), conj.table());
        assert!(conj.matrices().iter().all(|m| m.isometry_defect() < 1e-12));
        let q = random_isometry(5, FieldTag::Complex, 3);
        assert!(q.isometry_defect() < 1e-12);
    }

    #[test]
    fn trivial_group_singleton() {
        let g = build_group(&real(Family::Cyclic(1))).unwrap();
        let orbits = sample_orbits(&g, 1, 0, &TolerancePolicy::default()).unwrap();
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0].len(), 1);
    }

    #[test]
    fn octagon_labels() {
        let g = build_group(&real(Family::Cyclic(8))).unwrap();
        let policy = TolerancePolicy::default();
        let orbits = sample_orbits(&g, 1, 4, &policy).unwrap();
        assert_eq!(orbits[0].len(), 8);
        let norm = orbits[0][0].norm();
        assert!(orbits[0].iter().all(|p| (p.norm() - norm).abs() < 1e-12));
        assert_eq!(build_gram_graph(&orbits[0], &policy).unwrap().label_count(), 5);
    }

    #[test]
    fn g1_and_g2_label_counts() {
        let policy = TolerancePolicy::default();
        for (f, want) in [(Family::G1, 6), (Family::G2, 5)] {
            let g = build_group(&real(f)).unwrap();
            let orbits = sample_orbits(&g, 1, 9, &policy).unwrap();
            assert_eq!(build_gram_graph(&orbits[0], &policy).unwrap().label_count(), want);
        }
    }

    #[test]
    fn quaternion_orbit_symmetry_excess() {
        let g = build_group(&real(Family::Quaternion8)).unwrap();
        let policy = TolerancePolicy::default();
        let orbits = sample_orbits(&g, 1, 2, &policy).unwrap();
        assert_eq!(point_automorphisms(&orbits[0], &policy).unwrap().len(), 384);
    }

    #[test]
    fn samples_are_deterministic_and_invariant() {
        let g = build_group(&real(Family::Dihedral(3)).conjugated(5)).unwrap();
        let policy = TolerancePolicy::default();
        let a = sample_orbits(&g, 2, 17, &policy).unwrap();
        let b = sample_orbits(&g, 2, 17, &policy).unwrap();
        assert_eq!(a, b);
        for o in &a {
            assert_eq!(o.len(), 6);
            for m in g.matrices() {
                for x in o {
                    let y = m.apply(x).unwrap();
                    assert!(o.iter().any(|z| z.distance(&y) < 1e-10));
                }
            }
        }
    }

    #[test]
    fn catalog_builds() {
        for field in [FieldTag::Real, FieldTag::Complex] {
            for spec in catalog(field) {
                let g = build_group(&spec).unwrap_or_else(|e| panic!("{}: {e}", spec.name()));
                let again = build_group(&spec.clone().conjugated(1)).unwrap();
                assert!(isomorphic(g.table(), again.table()).is_some());
            }
        }
    }
}
