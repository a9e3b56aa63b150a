//! Brute-force representation oracles built from explicit matrices.

#![allow(dead_code)]

use nalgebra::DMatrix;
use orbitsym::groupcore::MultiplicationTable;
use orbitsym::reptheory::CharacterTable;
use orbitsym::{Matrix, Scalar};

pub fn left_regular(t: &MultiplicationTable) -> Vec<DMatrix<f64>> {
    let n = t.order();
    (0..n)
        .map(|g| {
            let mut m = DMatrix::zeros(n, n);
            for h in 0..n {
                m[(t.mul(g, h), h)] = 1.0;
            }
            m
        })
        .collect()
}

pub fn right_regular(t: &MultiplicationTable) -> Vec<DMatrix<f64>> {
    let n = t.order();
    (0..n)
        .map(|g| {
            let gi = t.inverse(g);
            let mut m = DMatrix::zeros(n, n);
            for h in 0..n {
                m[(t.mul(h, gi), h)] = 1.0;
            }
            m
        })
        .collect()
}

/// Isotypic projection (d/|G|) Σ_g conj(χ(g)) ρ(g), summed over complex
/// constituents.
pub fn isotypic_projection(ct: &CharacterTable, constituents: &[usize], rho: &[DMatrix<Scalar>]) -> DMatrix<Scalar> {
    let n = rho.len();
    let dim = rho[0].nrows();
    let mut p = DMatrix::<Scalar>::zeros(dim, dim);
    for &i in constituents {
        let d = ct.dims[i] as f64;
        for (g, m) in rho.iter().enumerate() {
            let chi = ct.characters[i][ct.classes.class_of[g]];
            p += m * (chi.conj() * d / n as f64);
        }
    }
    p
}

/// Rank of a projection: its singular values are 0 or 1.
pub fn rank(m: &DMatrix<Scalar>) -> usize {
    m.clone().singular_values().iter().filter(|&&s| s > 0.5).count()
}

pub fn as_complex(ms: &[Matrix]) -> Vec<DMatrix<Scalar>> {
    ms.iter().map(|m| m.inner().clone()).collect()
}

/// Splits the real isotypic component cut out by `constituents` in the real
/// regular representation and returns (number of copies, dimension of a copy).
///
/// A generic symmetric element X = Σ a_g R_g (a_g = a_{g⁻¹}) of the commutant
/// of the left action restricted to an isotypic block ρ^n is a Hermitian n×n
/// matrix over the division algebra End(ρ); its n distinct eigenvalues each
/// occupy one copy of ρ.
pub fn regular_isotypic_split(t: &MultiplicationTable, ct: &CharacterTable, constituents: &[usize], seed: u64) -> (usize, usize) {
    let n = t.order();
    let left: Vec<DMatrix<Scalar>> = left_regular(t).iter().map(|m| m.map(|x| Scalar::new(x, 0.0))).collect();
    let p = isotypic_projection(ct, constituents, &left).map(|z| z.re);
    let eig = p.clone().symmetric_eigen();
    let basis_cols: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] > 0.5).collect();
    let b = DMatrix::from_fn(n, basis_cols.len(), |r, c| eig.eigenvectors[(r, basis_cols[c])]);

    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let mut coeff = vec![0.0; n];
    for g in 0..n {
        let gi = t.inverse(g);
        if gi >= g {
            let a = next();
            coeff[g] = a;
            coeff[gi] = a;
        }
    }
    let right = right_regular(t);
    let mut x = DMatrix::<f64>::zeros(n, n);
    for g in 0..n {
        x += &right[g] * coeff[g];
    }
    let restricted = b.transpose() * x * &b;
    let mut values: Vec<f64> = restricted.symmetric_eigen().eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut clusters: Vec<usize> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for v in values {
        if v - last > 1e-7 {
            clusters.push(1);
        } else {
            *clusters.last_mut().unwrap() += 1;
        }
        last = v;
    }
    let size = clusters[0];
    assert!(clusters.iter().all(|&c| c == size), "uneven clusters {clusters:?}");
    (clusters.len(), size)
}
