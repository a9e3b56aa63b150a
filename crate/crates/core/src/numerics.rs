//! Field-tagged scalars, vectors and matrices, the tolerance policy, and the
//! clustering and rank utilities every other module builds on.

use alloc::vec::Vec;
use core::cmp::Ordering;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::unionfind::UnionFind;

/// Scalar values are stored as complex numbers; real-tagged data keeps a zero
/// imaginary part.
pub type Scalar = Complex64;

/// The ground field of the inner-product space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldTag {
    Real,
    Complex,
}

impl FieldTag {
    /// Degree of the extension C / F: 2 over the reals, 1 over the complexes.
    pub fn extension_degree(self) -> usize {
        match self {
            FieldTag::Real => 2,
            FieldTag::Complex => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FieldTag::Real => "real",
            FieldTag::Complex => "complex",
        }
    }
}

/// A point of F^d.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    field: FieldTag,
    entries: Vec<Scalar>,
}

impl Vector {
    pub fn new(field: FieldTag, entries: Vec<Scalar>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyInput);
        }
        if field == FieldTag::Real && entries.iter().any(|z| z.im != 0.0) {
            return Err(Error::FieldMismatch);
        }
        Ok(Vector { field, entries })
    }

    pub fn real(entries: &[f64]) -> Self {
        assert!(!entries.is_empty(), "vectors have positive dimension");
        Vector {
            field: FieldTag::Real,
            entries: entries.iter().map(|&x| Scalar::new(x, 0.0)).collect(),
        }
    }

    pub fn complex(entries: &[Scalar]) -> Self {
        assert!(!entries.is_empty(), "vectors have positive dimension");
        Vector { field: FieldTag::Complex, entries: entries.to_vec() }
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sqr())
    }

    pub fn distance(&self, other: &Vector) -> f64 {
        let d: f64 = self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm_sqr()).sum();
        libm::sqrt(d)
    }

    pub fn scaled(&self, factor: f64) -> Vector {
        Vector { field: self.field, entries: self.entries.iter().map(|z| z * factor).collect() }
    }

    pub(crate) fn to_dvector(&self) -> DVector<Scalar> {
        DVector::from_column_slice(&self.entries)
    }

    /// Wraps a column, snapping the imaginary part to zero for real data.
    pub(crate) fn from_column(field: FieldTag, col: impl Iterator<Item = Scalar>) -> Vector {
        let entries = match field {
            FieldTag::Real => col.map(|z| Scalar::new(z.re, 0.0)).collect(),
            FieldTag::Complex => col.collect(),
        };
        Vector { field, entries }
    }
}

/// A dense matrix over the complex numbers (real matrices carry zero
/// imaginary parts).
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix(DMatrix<Scalar>);

impl Matrix {
    pub fn from_row_major(rows: usize, cols: usize, entries: &[Scalar]) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyInput);
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: entries.len() });
        }
        Ok(Matrix(DMatrix::from_row_slice(rows, cols, entries)))
    }

    pub fn from_real_row_major(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        let z: Vec<Scalar> = entries.iter().map(|&x| Scalar::new(x, 0.0)).collect();
        Self::from_row_major(rows, cols, &z)
    }

    pub fn identity(n: usize) -> Self {
        Matrix(DMatrix::identity(n, n))
    }

    pub fn from_inner(m: DMatrix<Scalar>) -> Self {
        Matrix(m)
    }

    pub fn inner(&self) -> &DMatrix<Scalar> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<Scalar> {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.0[(r, c)]
    }

    pub fn to_row_major(&self) -> Vec<Scalar> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                out.push(self.0[(r, c)]);
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        Matrix(&self.0 * &other.0)
    }

    pub fn adjoint(&self) -> Matrix {
        Matrix(self.0.adjoint())
    }

    pub fn trace(&self) -> Scalar {
        self.0.trace()
    }

    pub fn scale(&self, factor: f64) -> Matrix {
        Matrix(self.0.map(|z| z * factor))
    }

    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        if v.dim() != self.cols() {
            return Err(Error::DimensionMismatch { expected: self.cols(), found: v.dim() });
        }
        let out = &self.0 * v.to_dvector();
        Ok(Vector::from_column(v.field(), out.iter().copied()))
    }

    pub fn frobenius_distance(&self, other: &Matrix) -> f64 {
        (&self.0 - &other.0).norm()
    }

    /// ‖M*M − I‖_F.
    pub fn isometry_defect(&self) -> f64 {
        let n = self.cols();
        (self.0.adjoint() * &self.0 - DMatrix::<Scalar>::identity(n, n)).norm()
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().all(|z| z.im == 0.0)
    }
}

/// Absolute label tolerance, or a factor of the largest observed label magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LabelTolerance {
    Relative(f64),
    Absolute(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolerancePolicy {
    pub label_tol: LabelTolerance,
    /// Singular values below `rank_tol × σ_max` count as zero.
    pub rank_tol: f64,
    /// Required ratio between inter-class gap and intra-class diameter.
    pub gap_factor: f64,
    /// Bound on ‖M*M − I‖_F and related matrix residuals.
    pub isometry_tol: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            label_tol: LabelTolerance::Relative(1e-9),
            rank_tol: 1e-10,
            gap_factor: 10.0,
            isometry_tol: 1e-8,
        }
    }
}

impl TolerancePolicy {
    pub fn validate(&self) -> Result<()> {
        let label = match self.label_tol {
            LabelTolerance::Relative(x) | LabelTolerance::Absolute(x) => x,
        };
        if !(label > 0.0 && label.is_finite()) {
            return Err(Error::InvalidPolicy("label tolerance must be positive"));
        }
        if !(self.rank_tol > 0.0 && self.rank_tol.is_finite()) {
            return Err(Error::InvalidPolicy("rank tolerance must be positive"));
        }
        if !(self.gap_factor > 1.0 && self.gap_factor.is_finite()) {
            return Err(Error::InvalidPolicy("gap factor must exceed 1"));
        }
        if !(self.isometry_tol > 0.0 && self.isometry_tol.is_finite()) {
            return Err(Error::InvalidPolicy("isometry tolerance must be positive"));
        }
        Ok(())
    }

    /// Effective absolute tolerance for labels whose largest magnitude is `scale`.
    pub fn label_tol_for(&self, scale: f64) -> f64 {
        match self.label_tol {
            LabelTolerance::Absolute(t) => t,
            LabelTolerance::Relative(f) => {
                let t = f * scale;
                if t > 0.0 {
                    t
                } else {
                    f
                }
            }
        }
    }
}

/// ⟨u, v⟩, conjugate-linear in the first argument.
pub fn inner_product(u: &Vector, v: &Vector) -> Result<Scalar> {
    if u.field != v.field {
        return Err(Error::FieldMismatch);
    }
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), found: v.dim() });
    }
    Ok(u.entries.iter().zip(&v.entries).map(|(a, b)| a.conj() * b).sum())
}

/// Partition of a list of scalars into tolerance classes.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelClasses {
    /// Class id per input index; ids are numbered by first appearance.
    pub class_of: Vec<u32>,
    /// Mean value of each class.
    pub representatives: Vec<Scalar>,
    /// Absolute tolerance that was applied.
    pub tolerance: f64,
}

impl LabelClasses {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = alloc::vec![Vec::new(); self.len()];
        for (i, &c) in self.class_of.iter().enumerate() {
            out[c as usize].push(i);
        }
        out
    }
}

fn cmp_f64(a: f64, b: f64) -> Ordering {
    a.partial_cmp(&b).unwrap_or(Ordering::Equal)
}

/// Groups values that are transitively within the label tolerance, then
/// checks that distinct classes are separated by at least
/// `gap_factor × max(intra-class diameter, tolerance)`.
pub fn cluster_scalars(values: &[Scalar], policy: &TolerancePolicy) -> Result<LabelClasses> {
    policy.validate()?;
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let scale = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tol = policy.label_tol_for(scale);

    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| cmp_f64(values[a].re, values[b].re));
    let mut uf = UnionFind::new(values.len());
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[pos + 1..] {
            if values[j].re - values[i].re > tol {
                break;
            }
            if (values[j] - values[i]).norm() <= tol {
                uf.union(i, j);
            }
        }
    }

    let mut root_to_class = alloc::collections::BTreeMap::new();
    let mut class_of = Vec::with_capacity(values.len());
    for i in 0..values.len() {
        let root = uf.find(i);
        let next = root_to_class.len() as u32;
        class_of.push(*root_to_class.entry(root).or_insert(next));
    }
    let n_classes = root_to_class.len();
    let mut sums = alloc::vec![Scalar::new(0.0, 0.0); n_classes];
    let mut counts = alloc::vec![0usize; n_classes];
    for (i, &c) in class_of.iter().enumerate() {
        sums[c as usize] += values[i];
        counts[c as usize] += 1;
    }
    let representatives: Vec<Scalar> =
        sums.iter().zip(&counts).map(|(s, &n)| s / n as f64).collect();

    // Twice the largest distance to the class mean bounds the diameter.
    let mut diameter = 0.0f64;
    for (i, &c) in class_of.iter().enumerate() {
        diameter = diameter.max(2.0 * (values[i] - representatives[c as usize]).norm());
    }
    let required = policy.gap_factor * diameter.max(tol);

    let mut reps: Vec<usize> = (0..n_classes).collect();
    reps.sort_by(|&a, &b| cmp_f64(representatives[a].re, representatives[b].re));
    let mut min_gap = f64::INFINITY;
    for (pos, &a) in reps.iter().enumerate() {
        for &b in &reps[pos + 1..] {
            if representatives[b].re - representatives[a].re >= required {
                break;
            }
            min_gap = min_gap.min((representatives[b] - representatives[a]).norm());
        }
    }
    if min_gap < required {
        return Err(Error::AmbiguousLabels { gap: min_gap, required });
    }
    Ok(LabelClasses { class_of, representatives, tolerance: tol })
}

/// Rank of the span of a point set and an orthonormal basis of it.
#[derive(Debug, Clone)]
pub struct SpanInfo {
    pub rank: usize,
    pub basis: Vec<Vector>,
}

/// Numerical rank via singular values relative to the largest one.
pub fn span_rank(points: &[Vector], policy: &TolerancePolicy) -> Result<SpanInfo> {
    policy.validate()?;
    let (field, _) = common_shape(points)?;
    let m = columns(points);
    let svd = Svd::of(&m, field);
    let rank = svd.rank(policy.rank_tol);
    let basis = (0..rank).map(|i| Vector::from_column(field, svd.u.column(i).iter().copied())).collect();
    Ok(SpanInfo { rank, basis })
}

/// Field and dimension shared by all points.
pub(crate) fn common_shape(points: &[Vector]) -> Result<(FieldTag, usize)> {
    let first = points.first().ok_or(Error::EmptyInput)?;
    for p in points {
        if p.field != first.field {
            return Err(Error::FieldMismatch);
        }
        if p.dim() != first.dim() {
            return Err(Error::DimensionMismatch { expected: first.dim(), found: p.dim() });
        }
    }
    Ok((first.field, first.dim()))
}

/// Stacks points as the columns of a d × n matrix.
pub(crate) fn columns(points: &[Vector]) -> DMatrix<Scalar> {
    let d = points[0].dim();
    DMatrix::from_fn(d, points.len(), |r, c| points[c].entries[r])
}

/// Full Gram matrix `G[s][t] = ⟨p_s, p_t⟩`; exactly symmetric for real data.
pub(crate) fn gram_matrix(points: &[Vector]) -> DMatrix<Scalar> {
    let n = points.len();
    let mut g = DMatrix::from_element(n, n, Scalar::new(0.0, 0.0));
    for s in 0..n {
        for t in s..n {
            let v: Scalar =
                points[s].entries.iter().zip(&points[t].entries).map(|(a, b)| a.conj() * b).sum();
            g[(s, t)] = v;
            g[(t, s)] = v.conj();
        }
    }
    g
}

/// Thin singular value decomposition with singular values sorted descending.
/// Real-tagged input is decomposed in real arithmetic so the factors stay real.
pub(crate) struct Svd {
    pub u: DMatrix<Scalar>,
    pub singular_values: Vec<f64>,
    pub v_t: DMatrix<Scalar>,
}

impl Svd {
    pub fn of(m: &DMatrix<Scalar>, field: FieldTag) -> Svd {
        // nalgebra's bidiagonal SVD loses accuracy on nearly equal singular
        // values, so this uses one-sided Jacobi on the narrower orientation.
        let real = field == FieldTag::Real;
        let (u, s, v_t) = if m.nrows() <= m.ncols() {
            let (w, s, v) = jacobi(m.adjoint(), real);
            (v, s, w.adjoint())
        } else {
            let (w, s, v) = jacobi(m.clone(), real);
            (w, s, v.adjoint())
        };
        let mut order: Vec<usize> = (0..s.len()).collect();
        order.sort_by(|&a, &b| cmp_f64(s[b], s[a]));
        let u = DMatrix::from_fn(u.nrows(), order.len(), |r, c| u[(r, order[c])]);
        let v_t = DMatrix::from_fn(order.len(), v_t.ncols(), |r, c| v_t[(order[r], c)]);
        let singular_values = order.iter().map(|&i| s[i]).collect();
        Svd { u, singular_values, v_t }
    }

    pub fn rank(&self, rank_tol: f64) -> usize {
        let top = self.singular_values.first().copied().unwrap_or(0.0);
        if top <= 0.0 {
            return 0;
        }
        self.singular_values.iter().filter(|&&s| s > rank_tol * top).count()
    }
}

/// One-sided Jacobi: returns (W, σ, V) with a·V = W·diag(σ), W having unit
/// (or zero) columns and V unitary.
fn jacobi(mut a: DMatrix<Scalar>, real: bool) -> (DMatrix<Scalar>, Vec<f64>, DMatrix<Scalar>) {
    let n = a.ncols();
    let mut v = DMatrix::<Scalar>::identity(n, n);
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = a.column(p).norm_squared();
                let beta = a.column(q).norm_squared();
                let gamma = a.column(p).dotc(&a.column(q));
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let phase = if real { Scalar::new(gamma.re.signum(), 0.0) } else { gamma.conj() / g };
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                for m in [&mut a, &mut v] {
                    for r in 0..m.nrows() {
                        let x = m[(r, p)];
                        let y = m[(r, q)] * phase;
                        m[(r, p)] = x * c - y * s;
                        m[(r, q)] = x * s + y * c;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma: Vec<f64> = (0..n).map(|j| a.column(j).norm()).collect();
    for (j, &sj) in sigma.iter().enumerate() {
        let scale = if sj > 0.0 { 1.0 / sj } else { 0.0 };
        a.column_mut(j).iter_mut().for_each(|z| *z *= scale);
    }
    (a, sigma, v)
}
