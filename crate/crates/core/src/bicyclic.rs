//! Exact `(p^d, p^e)`-bicyclic generating pairs: a definitional oracle, the
//! closed-form congruence test, and enumeration.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::group::{Element, Family, Group, GroupSpec};
use crate::numtheory::{is_unit, valuation};

/// Which predicate drives an enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Closed-form congruence conditions; no group arithmetic.
    #[default]
    Fast,
    /// Definitional checks on explicit subgroups.
    Oracle,
}

/// A candidate pair `(alpha, beta) = (b^i a^j, b^k a^l)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BicyclicPair {
    pub alpha: Element,
    pub beta: Element,
}

impl BicyclicPair {
    pub fn new(alpha: Element, beta: Element) -> Self {
        BicyclicPair { alpha, beta }
    }

    pub fn from_exponents(i: u64, j: u64, k: u64, l: u64) -> Self {
        BicyclicPair::new(Element::new(i, j), Element::new(k, l))
    }

    /// `(i, j, k, l)`.
    pub fn exponents(&self) -> (u64, u64, u64, u64) {
        (self.alpha.i, self.alpha.j, self.beta.i, self.beta.j)
    }

    pub fn swapped(&self) -> Self {
        BicyclicPair::new(self.beta, self.alpha)
    }

    /// Packs the pair into one integer, preserving lexicographic order.
    pub fn pack(&self, group: &Group) -> u64 {
        let n = group.order();
        group.index_of(&self.alpha) as u64 * n + group.index_of(&self.beta) as u64
    }

    pub fn unpack(code: u64, group: &Group) -> Self {
        let n = group.order();
        BicyclicPair::new(
            group.element_at((code / n) as usize),
            group.element_at((code % n) as usize),
        )
    }
}

/// Definitional test with memoised cyclic subgroups.
pub struct PairOracle<'g> {
    group: &'g Group,
    cyclic: HashMap<Element, Vec<usize>>,
}

impl<'g> PairOracle<'g> {
    pub fn new(group: &'g Group) -> Result<Self> {
        group.check_brute_force()?;
        Ok(PairOracle { group, cyclic: HashMap::new() })
    }

    fn cyclic_subgroup(&mut self, x: &Element) -> &[usize] {
        let group = self.group;
        self.cyclic
            .entry(*x)
            .or_insert_with(|| group.closure_indices(&[*x]))
    }

    /// True iff `|alpha| = m`, `|beta| = n` and `<alpha> ∩ <beta> = 1`.
    pub fn is_exact_with_orders(&mut self, pair: &BicyclicPair, m: u64, n: u64) -> bool {
        let (sa, sb) = {
            let a = self.cyclic_subgroup(&pair.alpha).to_vec();
            let b = self.cyclic_subgroup(&pair.beta);
            (a, b)
        };
        if sa.len() as u64 != m || sb.len() as u64 != n {
            return false;
        }
        // both sorted; only the identity (index 0) may be shared
        let (mut x, mut y, mut shared) = (0, 0, 0);
        while x < sa.len() && y < sb.len() {
            match sa[x].cmp(&sb[y]) {
                std::cmp::Ordering::Less => x += 1,
                std::cmp::Ordering::Greater => y += 1,
                std::cmp::Ordering::Equal => {
                    shared += 1;
                    x += 1;
                    y += 1;
                }
            }
        }
        shared == 1
    }

    /// Exact `(p^d, p^e)`-bicyclic test.
    pub fn is_exact(&mut self, pair: &BicyclicPair) -> bool {
        let s = self.group.spec();
        self.is_exact_with_orders(pair, s.p.pow(s.d), s.p.pow(s.e))
    }
}

/// Definitional test for a single pair.
pub fn is_exact_pair_oracle(group: &Group, pair: &BicyclicPair) -> Result<bool> {
    if !group.contains(&pair.alpha) || !group.contains(&pair.beta) {
        return Ok(false);
    }
    Ok(PairOracle::new(group)?.is_exact(pair))
}

/// Closed-form test for `alpha = b^i a^j`, `beta = b^k a^l`.
///
/// * M1, `d = e`: `p ∤ (il - jk)`
/// * M1, `d < e`: `p^(e-d) | j` and `p ∤ il`
/// * M2: `p^(e-d) | i` and `p ∤ jk`
/// * M3: `p^(e-h) || i`, `p^(h-d) | (j + i/p^(e-h))` and `p ∤ jk`
/// * cyclic: `alpha = 1` and `beta` generates
pub fn is_exact_pair_fast(spec: &GroupSpec, i: u64, j: u64, k: u64, l: u64) -> bool {
    let p = spec.p;
    let (d, e) = (spec.d, spec.e);
    match spec.family {
        Family::Cyclic => i == 0 && j == 0 && l == 0 && is_unit(k, p, e),
        Family::M1 if d == e => {
            let det = ((i % p) * (l % p) + p * p - (j % p) * (k % p)) % p;
            det != 0
        }
        Family::M1 => j % p.pow(e - d) == 0 && (i % p) * (l % p) % p != 0,
        Family::M2 => i % p.pow(e - d) == 0 && (j % p) * (k % p) % p != 0,
        Family::M3 => {
            let h = spec.h();
            // i = 0 has no exact valuation and never qualifies
            if valuation(i, p) != Some(e - h) {
                return false;
            }
            let shifted = i / p.pow(e - h);
            (j + shifted) % p.pow(h - d) == 0 && (j % p) * (k % p) % p != 0
        }
    }
}

/// Closed-form pair count: `|GL(2, Z_{p^e})|` for M1 with `d = e`,
/// `p^(3d+e-2)(p-1)^2` otherwise, `phi(p^e)` for the cyclic group.
pub fn pair_count_formula(spec: &GroupSpec) -> u64 {
    let p = spec.p;
    let (d, e) = (spec.d, spec.e);
    match spec.family {
        Family::Cyclic => crate::numtheory::phi_prime_power(p, e),
        Family::M1 if d == e => p.pow(4 * e - 3) * (p * p - 1) * (p - 1),
        _ => p.pow(3 * d + e - 2) * (p - 1) * (p - 1),
    }
}

/// Number of exact pairs, iterating over every exponent quadruple.
pub fn enumerate_exact_pairs(group: &Group, mode: Mode) -> Result<u64> {
    match mode {
        Mode::Fast => {
            let spec = *group.spec();
            let (ar, br) = (group.a_range(), group.b_range());
            Ok((0..br)
                .into_par_iter()
                .map(|i| {
                    let mut n = 0u64;
                    for j in 0..ar {
                        for k in 0..br {
                            for l in 0..ar {
                                n += is_exact_pair_fast(&spec, i, j, k, l) as u64;
                            }
                        }
                    }
                    n
                })
                .sum())
        }
        Mode::Oracle => {
            let mut oracle = PairOracle::new(group)?;
            let all: Vec<Element> = group.elements().collect();
            let mut n = 0;
            for x in &all {
                for y in &all {
                    n += oracle.is_exact(&BicyclicPair::new(*x, *y)) as u64;
                }
            }
            Ok(n)
        }
    }
}

/// Every exact pair, in lexicographic `(i, j, k, l)` order.
pub fn exact_pairs(group: &Group, mode: Mode) -> Result<Vec<BicyclicPair>> {
    let all: Vec<Element> = group.elements().collect();
    match mode {
        Mode::Fast => {
            let spec = *group.spec();
            Ok(all
                .par_iter()
                .flat_map_iter(|x| {
                    all.iter()
                        .filter(move |y| is_exact_pair_fast(&spec, x.i, x.j, y.i, y.j))
                        .map(move |y| BicyclicPair::new(*x, *y))
                })
                .collect())
        }
        Mode::Oracle => {
            let mut oracle = PairOracle::new(group)?;
            let mut out = Vec::new();
            for x in &all {
                for y in &all {
                    let pair = BicyclicPair::new(*x, *y);
                    if oracle.is_exact(&pair) {
                        out.push(pair);
                    }
                }
            }
            Ok(out)
        }
    }
}
