//! Concrete recovery: explicit isometries from the recovered permutation
//! action, by linear extension on the span of the orbits and the identity on
//! its orthogonal complement.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::groupcore::{table_from_perm_group, MultiplicationTable};
use crate::numerics::{columns, common_shape, gram_matrix, span_rank, FieldTag, Matrix, Scalar, Svd, TolerancePolicy, Vector};
use crate::pointsym::union_action;
use crate::reptheory::{character_table, irreps_over_field, min_nontrivial_dim};

/// A finite group of isometries with its multiplication table;
/// `matrices[i]` represents table element `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcreteGroup {
    field: FieldTag,
    dimension: usize,
    matrices: Vec<Matrix>,
    table: MultiplicationTable,
}

impl ConcreteGroup {
    /// Checks shapes only; use [`verify_group`] for the numerical invariants.
    pub fn new(field: FieldTag, dimension: usize, matrices: Vec<Matrix>, table: MultiplicationTable) -> Result<Self> {
        if dimension == 0 || matrices.is_empty() {
            return Err(Error::EmptyInput);
        }
        if matrices.len() != table.order() {
            return Err(Error::DimensionMismatch { expected: table.order(), found: matrices.len() });
        }
        for m in &matrices {
            if m.rows() != dimension || m.cols() != dimension {
                return Err(Error::DimensionMismatch { expected: dimension, found: m.rows().max(m.cols()) });
            }
            if field == FieldTag::Real && !m.is_real() {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(ConcreteGroup { field, dimension, matrices, table })
    }

    /// Derives the table by matching each product to the nearest listed matrix.
    pub fn from_matrices(field: FieldTag, dimension: usize, matrices: Vec<Matrix>, policy: &TolerancePolicy) -> Result<Self> {
        let table = product_table(&matrices, policy)?;
        Self::new(field, dimension, matrices, table)
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn order(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn matrix(&self, i: usize) -> &Matrix {
        &self.matrices[i]
    }

    pub fn table(&self) -> &MultiplicationTable {
        &self.table
    }
}

fn nearest(matrices: &[Matrix], m: &Matrix) -> (usize, f64) {
    let mut best = (usize::MAX, f64::INFINITY);
    for (k, c) in matrices.iter().enumerate() {
        let d = c.frobenius_distance(m);
        if d < best.1 {
            best = (k, d);
        }
    }
    best
}

fn product_table(matrices: &[Matrix], policy: &TolerancePolicy) -> Result<MultiplicationTable> {
    if matrices.is_empty() {
        return Err(Error::EmptyInput);
    }
    let dim = matrices[0].rows();
    let (identity, d) = nearest(matrices, &Matrix::identity(dim));
    if d > policy.isometry_tol {
        return Err(Error::ClosureFailure { defect: d });
    }
    let n = matrices.len();
    let mut product = Vec::with_capacity(n * n);
    for a in matrices {
        for b in matrices {
            let (k, d) = nearest(matrices, &a.mul(b));
            if d > policy.isometry_tol {
                return Err(Error::ClosureFailure { defect: d });
            }
            product.push(k);
        }
    }
    MultiplicationTable::new(n, product, identity).map_err(|_| Error::ClosureFailure { defect: 0.0 })
}

/// Precomputed pieces of M = T·S⁺ + (I − S·S⁺) for a fixed source set.
struct Extender {
    field: FieldTag,
    pinv: DMatrix<Scalar>,
    complement: DMatrix<Scalar>,
    source: DMatrix<Scalar>,
    gram: DMatrix<Scalar>,
    scale: f64,
}

impl Extender {
    fn new(source: &[Vector], policy: &TolerancePolicy) -> Result<Extender> {
        let (field, dim) = common_shape(source)?;
        let s = columns(source);
        let svd = Svd::of(&s, field);
        let rank = svd.rank(policy.rank_tol);
        let n = source.len();
        let mut pinv = DMatrix::<Scalar>::zeros(n, dim);
        let mut projector = DMatrix::<Scalar>::zeros(dim, dim);
        for i in 0..rank {
            let u = svd.u.column(i);
            let v = svd.v_t.row(i).adjoint();
            pinv += &v * u.adjoint() / Scalar::new(svd.singular_values[i], 0.0);
            projector += u * u.adjoint();
        }
        let complement = DMatrix::<Scalar>::identity(dim, dim) - projector;
        let scale = source.iter().map(Vector::norm_sqr).fold(0.0, f64::max);
        Ok(Extender { field, pinv, complement, gram: gram_matrix(source), source: s, scale })
    }

    fn extend(&self, target: &[Vector], policy: &TolerancePolicy) -> Result<Matrix> {
        let (field, dim) = common_shape(target)?;
        if field != self.field {
            return Err(Error::FieldMismatch);
        }
        if dim != self.source.nrows() || target.len() != self.source.ncols() {
            return Err(Error::DimensionMismatch { expected: self.source.ncols(), found: target.len() });
        }
        let gram_defect = (gram_matrix(target) - &self.gram).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let gram_tol = policy.label_tol_for(self.scale).max(policy.isometry_tol * self.scale.max(1.0));
        if gram_defect > gram_tol {
            return Err(Error::NotIsometric { defect: gram_defect });
        }
        let t = columns(target);
        let mut m = &t * &self.pinv + &self.complement;
        if self.field == FieldTag::Real {
            m.iter_mut().for_each(|z| z.im = 0.0);
        }
        let residual = (&m * &self.source - &t).norm() / t.norm().max(f64::MIN_POSITIVE);
        let m = Matrix::from_inner(m);
        let isometry_defect = m.isometry_defect();
        if residual > policy.isometry_tol || isometry_defect > policy.isometry_tol {
            return Err(Error::ResidualTooLarge { residual, isometry_defect });
        }
        Ok(m)
    }
}

/// The isometry taking `source[i]` to `target[i]` on the span of `source`
/// and fixing its orthogonal complement.
pub fn extend_to_isometry(
    source: &[Vector],
    target: &[Vector],
    dimension: usize,
    field: FieldTag,
    policy: &TolerancePolicy,
) -> Result<Matrix> {
    policy.validate()?;
    if source.len() != target.len() {
        return Err(Error::DimensionMismatch { expected: source.len(), found: target.len() });
    }
    let (f, d) = common_shape(source)?;
    if f != field {
        return Err(Error::FieldMismatch);
    }
    if d != dimension {
        return Err(Error::DimensionMismatch { expected: dimension, found: d });
    }
    Extender::new(source, policy)?.extend(target, policy)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementResidual {
    /// Largest ‖M·x − σ(x)‖ over the union of orbits.
    pub max_point_error: f64,
    pub isometry_defect: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryReport {
    pub span_rank: usize,
    pub codimension: usize,
    /// Smallest nontrivial irreducible dimension of the recovered group;
    /// `None` for the trivial group.
    pub r_used: Option<usize>,
    /// Set when `codimension ≥ r_used`: the action on the complement of the
    /// span is then not determined, and the identity there is only a convention.
    pub ambiguous: bool,
    /// Set when a single real orbit was accepted on request.
    pub insufficient: bool,
    pub residuals: Vec<ElementResidual>,
}

/// Recovers the group as explicit matrices from generic orbits.
pub fn recover_concrete_group(
    orbits: &[Vec<Vector>],
    policy: &TolerancePolicy,
    allow_insufficient: bool,
) -> Result<(ConcreteGroup, RecoveryReport)> {
    policy.validate()?;
    let action = union_action(orbits, policy, allow_insufficient)?;
    let all: Vec<Vector> = orbits.iter().flatten().cloned().collect();
    let (field, dimension) = common_shape(&all)?;
    let extender = Extender::new(&all, policy)?;

    let mut matrices = Vec::with_capacity(action.group.order());
    let mut residuals = Vec::with_capacity(action.group.order());
    for sigma in action.group.elements() {
        let target: Vec<Vector> = (0..all.len()).map(|i| all[sigma.image(i)].clone()).collect();
        let m = extender.extend(&target, policy)?;
        let mut max_point_error: f64 = 0.0;
        for (x, y) in all.iter().zip(&target) {
            max_point_error = max_point_error.max(m.apply(x)?.distance(y));
        }
        residuals.push(ElementResidual { max_point_error, isometry_defect: m.isometry_defect() });
        matrices.push(m);
    }
    let table = table_from_perm_group(&action.group)?;
    let group = ConcreteGroup::new(field, dimension, matrices, table)?;
    let closure = homomorphism_defect(&group);
    if closure > policy.isometry_tol {
        return Err(Error::ClosureFailure { defect: closure });
    }

    let span = span_rank(&all, policy)?.rank;
    let codimension = dimension - span;
    let ct = character_table(group.table())?;
    let records = irreps_over_field(&ct, field)?;
    let r_used = match min_nontrivial_dim(&records) {
        Ok(r) => Some(r),
        Err(Error::TrivialGroup) => None,
        Err(e) => return Err(e),
    };
    let ambiguous = r_used.is_some_and(|r| codimension >= r);
    let report = RecoveryReport {
        span_rank: span,
        codimension,
        r_used,
        ambiguous,
        insufficient: action.insufficient,
        residuals,
    };
    Ok((group, report))
}

/// max over (i, j) of ‖M_i M_j − M_{ij}‖_F.
fn homomorphism_defect(group: &ConcreteGroup) -> f64 {
    let n = group.order();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let p = group.matrix(i).mul(group.matrix(j));
            worst = worst.max(p.frobenius_distance(group.matrix(group.table().mul(i, j))));
        }
    }
    worst
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub isometry_defects: Vec<f64>,
    pub max_isometry_defect: f64,
    /// max over (i, j) of the distance from M_i M_j to the nearest listed matrix.
    pub closure_defect: f64,
    /// Per orbit: max over matrices and points of the distance from M·x to the
    /// orbit, relative to the orbit's largest norm (at least 1).
    pub invariance_defects: Vec<f64>,
    pub passed: bool,
}

/// Checks isometry, closure and orbit invariance. Defects are reported, not raised.
pub fn verify_group(group: &ConcreteGroup, orbits: &[Vec<Vector>], policy: &TolerancePolicy) -> VerificationReport {
    let isometry_defects: Vec<f64> = group.matrices().iter().map(Matrix::isometry_defect).collect();
    let max_isometry_defect = isometry_defects.iter().copied().fold(0.0, f64::max);
    let mut closure_defect: f64 = 0.0;
    for a in group.matrices() {
        for b in group.matrices() {
            closure_defect = closure_defect.max(nearest(group.matrices(), &a.mul(b)).1);
        }
    }
    let invariance_defects: Vec<f64> = orbits.iter().map(|o| invariance_defect(group, o)).collect();
    let tol = policy.isometry_tol;
    let passed = max_isometry_defect <= tol && closure_defect <= tol && invariance_defects.iter().all(|&d| d <= tol);
    VerificationReport { isometry_defects, max_isometry_defect, closure_defect, invariance_defects, passed }
}

fn invariance_defect(group: &ConcreteGroup, orbit: &[Vector]) -> f64 {
    let scale = orbit.iter().map(Vector::norm).fold(1.0, f64::max);
    let mut worst: f64 = 0.0;
    for m in group.matrices() {
        for x in orbit {
            let y = match m.apply(x) {
                Ok(y) if y.field() == x.field() => y,
                _ => return f64::INFINITY,
            };
            let d = orbit.iter().map(|z| z.distance(&y)).fold(f64::INFINITY, f64::min);
            worst = worst.max(d / scale);
        }
    }
    worst
}

/// The permutation of `orbit` induced by `m` (nearest points), or `None` if
/// some image is farther than `tol` (relative) from the orbit or two points
/// collide.
pub fn orbit_action(m: &Matrix, orbit: &[Vector], tol: f64) -> Option<Vec<usize>> {
    let scale = orbit.iter().map(Vector::norm).fold(1.0, f64::max);
    let mut images = Vec::with_capacity(orbit.len());
    let mut used = vec![false; orbit.len()];
    for x in orbit {
        let y = m.apply(x).ok()?;
        let (k, d) = orbit
            .iter()
            .enumerate()
            .map(|(k, z)| (k, z.distance(&y)))
            .fold((usize::MAX, f64::INFINITY), |b, c| if c.1 < b.1 { c } else { b });
        if d > tol * scale || used[k] {
            return None;
        }
        used[k] = true;
        images.push(k);
    }
    Some(images)
}

/// Pairs elements of two groups that permute `orbit` identically:
/// `result[i]` is the index in `recovered` matching element `i` of `hidden`.
pub fn align_by_orbit_action(
    hidden: &ConcreteGroup,
    recovered: &ConcreteGroup,
    orbit: &[Vector],
    policy: &TolerancePolicy,
) -> Result<Vec<usize>> {
    if hidden.order() != recovered.order() {
        return Err(Error::OrbitSizeMismatch(hidden.order(), recovered.order()));
    }
    let actions = |g: &ConcreteGroup| -> Result<Vec<Vec<usize>>> {
        g.matrices()
            .iter()
            .map(|m| orbit_action(m, orbit, policy.isometry_tol).ok_or(Error::NonGenericOrbit("matrix does not permute the orbit")))
            .collect()
    };
    let a = actions(hidden)?;
    let b = actions(recovered)?;
    let mut taken = vec![false; b.len()];
    let mut out = Vec::with_capacity(a.len());
    for p in &a {
        let k = b
            .iter()
            .position(|q| q == p)
            .filter(|&k| !taken[k])
            .ok_or(Error::NonGenericOrbit("element actions do not match"))?;
        taken[k] = true;
        out.push(k);
    }
    Ok(out)
}
