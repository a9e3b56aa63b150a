//! Character-theoretic analysis of a finite group and its representation:
//! conjugacy classes, the complex character table, Frobenius–Schur
//! indicators, irreducibles over the working field, multiplicities, and the
//! number of generic orbits needed for concrete recovery.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::groupcore::MultiplicationTable;
use crate::numerics::{FieldTag, Scalar};
use crate::reconstruct::ConcreteGroup;

/// Acceptance window for quantities that must round to integers.
const INTEGRALITY_TOL: f64 = 1e-6;
const CHARACTER_ATTEMPTS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClasses {
    pub class_of: Vec<usize>,
    pub sizes: Vec<usize>,
    /// Smallest element index in each class; class 0 holds the identity.
    pub representatives: Vec<usize>,
    pub group_order: usize,
}

impl ConjugacyClasses {
    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn members(&self, class: usize) -> impl Iterator<Item = usize> + '_ {
        self.class_of.iter().enumerate().filter(move |(_, &c)| c == class).map(|(g, _)| g)
    }
}

pub fn conjugacy_classes(t: &MultiplicationTable) -> ConjugacyClasses {
    let n = t.order();
    let inverses: Vec<usize> = (0..n).map(|h| t.inverse(h)).collect();
    let mut class_of = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    let mut representatives = Vec::new();
    let start = core::iter::once(t.identity()).chain((0..n).filter(|&g| g != t.identity()));
    for g in start {
        if class_of[g] != usize::MAX {
            continue;
        }
        let c = sizes.len();
        let mut size = 0;
        let mut smallest = g;
        for h in 0..n {
            let x = t.mul(t.mul(h, g), inverses[h]);
            if class_of[x] == usize::MAX {
                class_of[x] = c;
                size += 1;
                smallest = smallest.min(x);
            }
        }
        sizes.push(size);
        representatives.push(smallest);
    }
    ConjugacyClasses { class_of, sizes, representatives, group_order: n }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CharacterTable {
    pub classes: ConjugacyClasses,
    /// `characters[i][c]` is χ_i on class c.
    pub characters: Vec<Vec<Scalar>>,
    pub dims: Vec<usize>,
    pub fs_indicator: Vec<i8>,
    pub trivial_index: usize,
}

impl CharacterTable {
    /// Class-weighted inner product (1/|G|) Σ_c |c| conj(a(c)) b(c).
    pub fn inner(&self, a: &[Scalar], b: &[Scalar]) -> Scalar {
        class_inner(&self.classes, a, b)
    }
}

fn class_inner(classes: &ConjugacyClasses, a: &[Scalar], b: &[Scalar]) -> Scalar {
    let total: Scalar = classes.sizes.iter().zip(a.iter().zip(b)).map(|(&s, (x, y))| x.conj() * y * s as f64).sum();
    total / classes.group_order as f64
}

fn round_integral(x: f64) -> Option<i64> {
    let r = libm::round(x);
    ((x - r).abs() <= INTEGRALITY_TOL).then_some(r as i64)
}

/// Irreducible complex characters from the class algebra.
///
/// For each class c the operator (A_c f)(g) = Σ_{h∈c} f(gh) acts on class
/// functions; irreducible characters are its common eigenvectors (eigenvalue
/// |c|χ(c)/χ(1)). In the orthonormal basis of scaled class indicators the
/// adjoint of A_c is A_{c⁻¹}, so a random combination Σ αA_c + conj(α)A_c* is
/// Hermitian and, once its eigenvalues are distinct, its unit eigenvectors
/// are exactly the characters up to phase.
pub fn character_table(t: &MultiplicationTable) -> Result<CharacterTable> {
    let classes = conjugacy_classes(t);
    let s = classes.len();
    let n = t.order();

    // counts[c][e][d] = #{h ∈ c : g_e h ∈ d}
    let mut counts = vec![vec![vec![0usize; s]; s]; s];
    for e in 0..s {
        let ge = classes.representatives[e];
        for h in 0..n {
            counts[classes.class_of[h]][e][classes.class_of[t.mul(ge, h)]] += 1;
        }
    }
    let ops: Vec<DMatrix<Scalar>> = (0..s)
        .map(|c| {
            DMatrix::from_fn(s, s, |e, d| {
                let w = libm::sqrt(classes.sizes[e] as f64 / classes.sizes[d] as f64);
                Scalar::new(counts[c][e][d] as f64 * w, 0.0)
            })
        })
        .collect();
    let scale = classes.sizes.iter().copied().max().unwrap_or(1) as f64;

    for attempt in 0..CHARACTER_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c1a5 + attempt as u64);
        let mut h = DMatrix::<Scalar>::zeros(s, s);
        for op in &ops {
            let alpha = Scalar::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            h += op * alpha + op.adjoint() * alpha.conj();
        }
        // Symmetrize away rounding so the solver sees an exact Hermitian matrix.
        let h = (&h + h.adjoint()) * Scalar::new(0.5, 0.0);
        let eig = h.symmetric_eigen();
        let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
        let gap = values.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        if gap <= 1e-7 * scale {
            continue;
        }
        if let Some(table) = characters_from_eigenvectors(t, &classes, &ops, &eig.eigenvectors) {
            return Ok(table);
        }
    }
    Err(Error::NumericalDegeneracy { attempts: CHARACTER_ATTEMPTS })
}

fn characters_from_eigenvectors(
    t: &MultiplicationTable,
    classes: &ConjugacyClasses,
    ops: &[DMatrix<Scalar>],
    vectors: &DMatrix<Scalar>,
) -> Option<CharacterTable> {
    let s = classes.len();
    let n = t.order() as f64;
    let mut rows: Vec<(usize, Vec<Scalar>)> = Vec::with_capacity(s);
    for col in 0..s {
        let x = vectors.column(col).into_owned();
        for op in ops {
            let y = op * &x;
            let mu = x.dotc(&y);
            if (y - &x * mu).norm() > 1e-8 * (1.0 + op.norm()) {
                return None;
            }
        }
        let phase = x[0].conj() / x[0].norm();
        let mut chi: Vec<Scalar> = (0..s).map(|c| x[c] * phase * libm::sqrt(n / classes.sizes[c] as f64)).collect();
        let dim = round_integral(chi[0].re)?;
        if dim < 1 {
            return None;
        }
        chi[0] = Scalar::new(dim as f64, 0.0);
        rows.push((dim as usize, chi));
    }
    let is_trivial = |chi: &[Scalar]| chi.iter().all(|z| (z - Scalar::new(1.0, 0.0)).norm() < 1e-8);
    rows.sort_by(|(da, a), (db, b)| {
        let key = |d: usize, chi: &[Scalar]| (!is_trivial(chi), d);
        key(*da, a).cmp(&key(*db, b)).then_with(|| {
            for (x, y) in a.iter().zip(b.iter()) {
                let (xr, yr) = (libm::round(x.re * 1e9), libm::round(y.re * 1e9));
                if xr != yr {
                    return yr.partial_cmp(&xr).unwrap_or(core::cmp::Ordering::Equal);
                }
                let (xi, yi) = (libm::round(x.im * 1e9), libm::round(y.im * 1e9));
                if xi != yi {
                    return yi.partial_cmp(&xi).unwrap_or(core::cmp::Ordering::Equal);
                }
            }
            core::cmp::Ordering::Equal
        })
    });
    if !is_trivial(&rows[0].1) {
        return None;
    }
    let sum_sq: usize = rows.iter().map(|(d, _)| d * d).sum();
    if sum_sq != t.order() {
        return None;
    }
    // Class of g² for each class representative.
    let square_class: Vec<usize> = classes.representatives.iter().map(|&g| classes.class_of[t.mul(g, g)]).collect();
    let mut fs_indicator = Vec::with_capacity(s);
    for (_, chi) in &rows {
        let nu: Scalar =
            (0..s).map(|c| chi[square_class[c]] * classes.sizes[c] as f64).sum::<Scalar>() / n;
        if nu.im.abs() > INTEGRALITY_TOL {
            return None;
        }
        let r = round_integral(nu.re)?;
        if !(-1..=1).contains(&r) {
            return None;
        }
        fs_indicator.push(r as i8);
    }
    Some(CharacterTable {
        classes: classes.clone(),
        dims: rows.iter().map(|(d, _)| *d).collect(),
        characters: rows.into_iter().map(|(_, chi)| chi).collect(),
        fs_indicator,
        trivial_index: 0,
    })
}

/// Trace of the representing matrix on each class.
pub fn rep_character(group: &ConcreteGroup, classes: &ConjugacyClasses) -> Result<Vec<Scalar>> {
    let traces: Vec<Scalar> = group.matrices().iter().map(|m| m.trace()).collect();
    let mut chi = Vec::with_capacity(classes.len());
    for c in 0..classes.len() {
        let value = traces[classes.representatives[c]];
        if classes.members(c).any(|g| (traces[g] - value).norm() > 1e-8) {
            return Err(Error::InconsistentTraces { class: c });
        }
        chi.push(value);
    }
    Ok(chi)
}

/// ⟨χ_π, χ_V⟩ rounded to a nonnegative integer.
pub fn multiplicity(chi_v: &[Scalar], chi_pi: &[Scalar], classes: &ConjugacyClasses) -> Result<usize> {
    let m = class_inner(classes, chi_pi, chi_v);
    checked_count(m)
}

fn checked_count(m: Scalar) -> Result<usize> {
    if m.im.abs() > INTEGRALITY_TOL {
        return Err(Error::NonIntegralMultiplicity { value: m.im });
    }
    match round_integral(m.re) {
        Some(k) if k >= 0 => Ok(k as usize),
        _ => Err(Error::NonIntegralMultiplicity { value: m.re }),
    }
}

/// Frobenius–Schur type of a complex irreducible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IrrepKind {
    /// Used as is over the complex numbers.
    Complex,
    /// Indicator 1: realizable over the reals.
    Real,
    /// Indicator 0: merged with its complex conjugate.
    ComplexPair,
    /// Indicator −1: doubled.
    Quaternionic,
}

/// An irreducible representation over the working field.
#[derive(Debug, Clone, PartialEq)]
pub struct IrrepRecord {
    pub name: String,
    /// Dimension over the working field.
    pub dim: usize,
    pub character: Vec<Scalar>,
    pub kind: IrrepKind,
    /// Dimension of the endomorphism algebra over the working field (1, 2 or 4).
    pub endomorphism_degree: usize,
    /// Multiplicity in the regular representation over the working field.
    pub regular_multiplicity: usize,
    pub trivial: bool,
    /// Complex irreducibles (rows of the character table) it is built from.
    pub constituents: Vec<usize>,
}

pub fn irreps_over_field(ct: &CharacterTable, field: FieldTag) -> Result<Vec<IrrepRecord>> {
    let order = ct.classes.group_order;
    let mut out = Vec::new();
    match field {
        FieldTag::Complex => {
            for (i, chi) in ct.characters.iter().enumerate() {
                out.push(IrrepRecord {
                    name: format!("chi{i}"),
                    dim: ct.dims[i],
                    character: chi.clone(),
                    kind: IrrepKind::Complex,
                    endomorphism_degree: 1,
                    regular_multiplicity: ct.dims[i],
                    trivial: i == ct.trivial_index,
                    constituents: vec![i],
                });
            }
        }
        FieldTag::Real => {
            let mut taken = vec![false; ct.characters.len()];
            for i in 0..ct.characters.len() {
                if taken[i] {
                    continue;
                }
                taken[i] = true;
                let chi = &ct.characters[i];
                let d = ct.dims[i];
                let name = format!("rho{}", out.len());
                let record = match ct.fs_indicator[i] {
                    1 => IrrepRecord {
                        name,
                        dim: d,
                        character: chi.clone(),
                        kind: IrrepKind::Real,
                        endomorphism_degree: 1,
                        regular_multiplicity: d,
                        trivial: i == ct.trivial_index,
                        constituents: vec![i],
                    },
                    0 => {
                        let j = (0..ct.characters.len())
                            .find(|&j| {
                                !taken[j]
                                    && ct.characters[j].iter().zip(chi).all(|(a, b)| (a - b.conj()).norm() < 1e-8)
                            })
                            .ok_or(Error::NumericalDegeneracy { attempts: 1 })?;
                        taken[j] = true;
                        IrrepRecord {
                            name,
                            dim: 2 * d,
                            character: chi.iter().map(|z| Scalar::new(2.0 * z.re, 0.0)).collect(),
                            kind: IrrepKind::ComplexPair,
                            endomorphism_degree: 2,
                            regular_multiplicity: d,
                            trivial: false,
                            constituents: vec![i, j],
                        }
                    }
                    _ => IrrepRecord {
                        name,
                        dim: 2 * d,
                        character: chi.iter().map(|z| z * 2.0).collect(),
                        kind: IrrepKind::Quaternionic,
                        endomorphism_degree: 4,
                        regular_multiplicity: d / 2,
                        trivial: false,
                        constituents: vec![i],
                    },
                };
                out.push(record);
            }
        }
    }
    let total: usize = out.iter().map(|r| r.regular_multiplicity * r.dim).sum();
    if total != order || out.iter().any(|r| r.regular_multiplicity == 0) {
        return Err(Error::RegularDecompositionMismatch { expected: order, found: total });
    }
    Ok(out)
}

/// Multiplicity of a field-irreducible in a representation with character `chi_v`.
pub fn record_multiplicity(record: &IrrepRecord, chi_v: &[Scalar], classes: &ConjugacyClasses) -> Result<usize> {
    let m = class_inner(classes, &record.character, chi_v) / record.endomorphism_degree as f64;
    checked_count(m)
}

/// Smallest dimension of a nontrivial irreducible over the working field.
pub fn min_nontrivial_dim(records: &[IrrepRecord]) -> Result<usize> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    records.iter().filter(|r| !r.trivial).map(|r| r.dim).min().ok_or(Error::TrivialGroup)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdEntry {
    pub name: String,
    pub dim: usize,
    pub n_pi_v: usize,
    pub n_pi_r: usize,
    pub trivial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdReport {
    pub field: FieldTag,
    pub irreps: Vec<ThresholdEntry>,
    /// Smallest nontrivial irreducible dimension over the field.
    pub r: usize,
    /// Fewest orbits whose generic span has codimension below `r`.
    pub k_span: usize,
    /// `max(k_span, [C:F], 1)`.
    pub k_recover: usize,
}

/// k_span = max over irreducibles π of ⌈(n_π(V) − (r−1)·[π trivial]) / n_π(R)⌉,
/// clamped below at 1.
pub fn span_threshold(entries: &[ThresholdEntry], r: usize) -> usize {
    let mut k = 0usize;
    for e in entries {
        let shift = if e.trivial { r as i64 - 1 } else { 0 };
        let num = e.n_pi_v as i64 - shift;
        if num > 0 {
            let need = (num as usize).div_ceil(e.n_pi_r);
            k = k.max(need);
        }
    }
    k.max(1)
}

pub fn orbit_threshold(group: &ConcreteGroup) -> Result<ThresholdReport> {
    let ct = character_table(group.table())?;
    let records = irreps_over_field(&ct, group.field())?;
    let r = min_nontrivial_dim(&records)?;
    let chi_v = rep_character(group, &ct.classes)?;
    let mut irreps = Vec::with_capacity(records.len());
    for rec in &records {
        irreps.push(ThresholdEntry {
            name: rec.name.clone(),
            dim: rec.dim,
            n_pi_v: record_multiplicity(rec, &chi_v, &ct.classes)?,
            n_pi_r: rec.regular_multiplicity,
            trivial: rec.trivial,
        });
    }
    let k_span = span_threshold(&irreps, r);
    let k_recover = k_span.max(group.field().extension_degree()).max(1);
    Ok(ThresholdReport { field: group.field(), irreps, r, k_span, k_recover })
}
