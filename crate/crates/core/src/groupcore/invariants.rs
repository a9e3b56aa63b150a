use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::MultiplicationTable;

/// Isomorphism invariants used for quick rejection and in reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupInvariants {
    pub order: usize,
    /// element order → number of elements of that order
    pub order_histogram: BTreeMap<usize, usize>,
    pub abelian: bool,
    pub center_order: usize,
    /// Invariant factors d₁ | d₂ | … of G / [G, G]; empty when G is perfect.
    pub abelianization: Vec<usize>,
}

pub fn group_invariants(t: &MultiplicationTable) -> GroupInvariants {
    let n = t.order();
    let mut order_histogram = BTreeMap::new();
    for a in 0..n {
        *order_histogram.entry(t.element_order(a)).or_insert(0) += 1;
    }
    let center_order = (0..n).filter(|&a| (0..n).all(|b| t.mul(a, b) == t.mul(b, a))).count();

    let mut commutators = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let c = t.mul(t.mul(t.inverse(a), t.inverse(b)), t.mul(a, b));
            commutators.push(c);
        }
    }
    commutators.sort_unstable();
    commutators.dedup();
    let derived = t.generated_subgroup(&commutators);
    let mut in_derived = vec![false; n];
    for &d in &derived {
        in_derived[d] = true;
    }
    // Order of each coset aD in G/D; each coset contributes |D| elements.
    let mut quotient_counts: BTreeMap<usize, usize> = BTreeMap::new();
    for a in 0..n {
        let mut x = a;
        let mut k = 1;
        while !in_derived[x] {
            x = t.mul(x, a);
            k += 1;
        }
        *quotient_counts.entry(k).or_insert(0) += 1;
    }
    for c in quotient_counts.values_mut() {
        *c /= derived.len();
    }
    let abelianization = abelian_invariant_factors(&quotient_counts);

    GroupInvariants { order: n, order_histogram, abelian: center_order == n, center_order, abelianization }
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Invariant factors of a finite abelian group given its element-order counts.
///
/// For each prime p the number of solutions of x^(p^e) = 1 is p^(Σ min(e, λᵢ)),
/// which recovers the partition λ of the p-primary part.
fn abelian_invariant_factors(counts: &BTreeMap<usize, usize>) -> Vec<usize> {
    let order: usize = counts.values().sum();
    let mut per_prime: Vec<Vec<usize>> = Vec::new();
    for p in prime_factors(order) {
        let mut exponent = 0;
        let mut m = order;
        while m % p == 0 {
            m /= p;
            exponent += 1;
        }
        // at_least[e-1] = #{i : λᵢ ≥ e}
        let mut at_least = Vec::new();
        let mut prev_log = 0;
        let mut pe = 1;
        for _ in 0..exponent {
            pe *= p;
            let solutions: usize = counts.iter().filter(|(&k, _)| pe % k == 0).map(|(_, &c)| c).sum();
            let mut log = 0;
            let mut s = solutions;
            while s > 1 {
                s /= p;
                log += 1;
            }
            at_least.push(log - prev_log);
            prev_log = log;
        }
        // Conjugate partition: powers of p, largest first.
        let parts = at_least.first().copied().unwrap_or(0);
        let mut powers = vec![1usize; parts];
        for &c in &at_least {
            for power in powers.iter_mut().take(c) {
                *power *= p;
            }
        }
        per_prime.push(powers);
    }
    let len = per_prime.iter().map(Vec::len).max().unwrap_or(0);
    let mut factors = vec![1usize; len];
    for powers in &per_prime {
        for (i, &q) in powers.iter().enumerate() {
            factors[i] *= q;
        }
    }
    factors.reverse();
    factors.retain(|&f| f > 1);
    factors
}
