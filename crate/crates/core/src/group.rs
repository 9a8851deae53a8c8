//! Normal-form arithmetic for the metacyclic families `M1`, `M2`, `M3` and the
//! cyclic case, plus brute-force structural computations.
//!
//! Every element is stored as `b^i a^j` with `0 <= i < b_range` and
//! `0 <= j < a_range`. `<a>` is normal in every family and `a^b = a^q` with
//! `q = 1 + p^f`, so moving `a^j` past `b^i` gives `b^i a^(j q^i)`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::{
    check_odd_prime, checked_prime_power, geom_sum_raw, mul_mod, pow_mod_raw,
};

/// Structural (all-pairs) computations refuse groups larger than this unless
/// the caller raises the limit on the [`Group`].
pub const DEFAULT_BRUTE_FORCE_LIMIT: u64 = 729;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Family {
    M1,
    M2,
    M3,
    Cyclic,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::M1 => "M1",
            Family::M2 => "M2",
            Family::M3 => "M3",
            Family::Cyclic => "CYCLIC",
        };
        f.write_str(s)
    }
}

/// Validated parameters of one of the classified groups of order `p^(d+e)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupSpec {
    pub family: Family,
    pub p: u64,
    pub d: u32,
    pub e: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub f: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub h: Option<u32>,
}

fn invalid<T>(msg: String) -> Result<T> {
    Err(Error::InvalidParameters(msg))
}

impl GroupSpec {
    /// `<a, b | a^(p^e) = b^(p^d) = 1, a^b = a^(1+p^f)>`.
    ///
    /// Accepts `1 <= f <= e <= d + f` with `1 <= d <= e`. This covers both listed
    /// ranges of the classification and also `f < d = e`, which the `K_{n,n}`
    /// count needs.
    pub fn m1(p: u64, d: u32, e: u32, f: u32) -> Result<Self> {
        check_odd_prime(p)?;
        if !(1 <= d && d <= e && 1 <= f && f <= e && e <= d + f) {
            return invalid(format!("M1({d},{e},{f}) needs 1 <= d <= e, 1 <= f <= e <= d+f"));
        }
        Self::checked(GroupSpec { family: Family::M1, p, d, e, f: Some(f), h: None })
    }

    /// `<a, b | a^(p^d) = b^(p^e) = 1, a^b = a^(1+p^f)>` with `1 <= f < d < e`.
    pub fn m2(p: u64, d: u32, e: u32, f: u32) -> Result<Self> {
        check_odd_prime(p)?;
        if !(1 <= f && f < d && d < e) {
            return invalid(format!("M2({d},{e},{f}) needs 1 <= f < d < e"));
        }
        Self::checked(GroupSpec { family: Family::M2, p, d, e, f: Some(f), h: None })
    }

    /// `<a, b | a^(p^h) = 1, b^(p^(d+e-h)) = a^(p^d), a^b = a^(1+p^f)>` with
    /// `h - d <= f < d < h < e`.
    pub fn m3(p: u64, d: u32, e: u32, h: u32, f: u32) -> Result<Self> {
        check_odd_prime(p)?;
        if !(h <= d + f && f < d && d < h && h < e) {
            return invalid(format!("M3({d},{e},{h},{f}) needs h-d <= f < d < h < e"));
        }
        Self::checked(GroupSpec { family: Family::M3, p, d, e, f: Some(f), h: Some(h) })
    }

    /// The cyclic group of order `p^e`, generated by `b` (`d = 0`).
    pub fn cyclic(p: u64, e: u32) -> Result<Self> {
        check_odd_prime(p)?;
        Self::checked(GroupSpec { family: Family::Cyclic, p, d: 0, e, f: None, h: None })
    }

    fn checked(spec: GroupSpec) -> Result<Self> {
        checked_prime_power(spec.p, spec.d + spec.e)?;
        Ok(spec)
    }

    pub fn f(&self) -> u32 {
        self.f.unwrap_or(self.e)
    }

    pub fn h(&self) -> u32 {
        self.h.unwrap_or(0)
    }

    /// Exponent of `p` in the order of `a`.
    pub fn a_exp(&self) -> u32 {
        match self.family {
            Family::M1 => self.e,
            Family::M2 => self.d,
            Family::M3 => self.h(),
            Family::Cyclic => 0,
        }
    }

    /// Exponent of `p` in the modulus of the `b`-exponent.
    pub fn b_exp(&self) -> u32 {
        match self.family {
            Family::M1 => self.d,
            Family::M2 | Family::Cyclic => self.e,
            Family::M3 => self.d + self.e - self.h(),
        }
    }

    pub fn a_range(&self) -> u64 {
        self.p.pow(self.a_exp())
    }

    pub fn b_range(&self) -> u64 {
        self.p.pow(self.b_exp())
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.d + self.e)
    }

    /// `1 + p^f` reduced modulo the order of `a`.
    pub fn q(&self) -> u64 {
        let a = self.a_range();
        if a == 1 {
            return 0;
        }
        (1 + pow_mod_raw(self.p, self.f() as u64, a)) % a
    }

    /// Exponent `i` for which the group is `p^i`-abelian: `e-f`, `d-f`, `h-f`.
    pub fn abelian_power_exponent(&self) -> u32 {
        match self.family {
            Family::M1 => self.e - self.f(),
            Family::M2 => self.d - self.f(),
            Family::M3 => self.h() - self.f(),
            Family::Cyclic => 0,
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::M1 | Family::M2 => {
                write!(f, "{}({},{},{})", self.family, self.d, self.e, self.f())
            }
            Family::M3 => write!(f, "M3({},{},{},{})", self.d, self.e, self.h(), self.f()),
            Family::Cyclic => write!(f, "CYCLIC(e={})", self.e),
        }
    }
}

/// All classified groups admitting an exact `(p^d, p^e)`-bicyclic factorisation,
/// ordered by family, then `f`, then `h`.
pub fn enumerate_specs(p: u64, d: u32, e: u32) -> Result<Vec<GroupSpec>> {
    check_odd_prime(p)?;
    if d > e {
        return invalid(format!("d = {d} exceeds e = {e}"));
    }
    checked_prime_power(p, d + e)?;
    if d == 0 {
        return Ok(vec![GroupSpec::cyclic(p, e)?]);
    }
    let mut out = Vec::new();
    for f in 1..=e {
        if let Ok(s) = GroupSpec::m1(p, d, e, f) {
            out.push(s);
        }
    }
    for f in 1..d {
        if let Ok(s) = GroupSpec::m2(p, d, e, f) {
            out.push(s);
        }
    }
    for f in 1..d {
        for h in d + 1..e {
            if let Ok(s) = GroupSpec::m3(p, d, e, h, f) {
                out.push(s);
            }
        }
    }
    Ok(out)
}

/// A group element in normal form `b^i a^j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Element {
    /// Exponent of `b`.
    pub i: u64,
    /// Exponent of `a`.
    pub j: u64,
}

impl Element {
    pub const IDENTITY: Element = Element { i: 0, j: 0 };

    pub fn new(i: u64, j: u64) -> Self {
        Element { i, j }
    }

    pub fn is_identity(&self) -> bool {
        self.i == 0 && self.j == 0
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b^{} a^{}", self.i, self.j)
    }
}

const Q_TABLE_MAX: u64 = 1 << 20;

/// A [`GroupSpec`] with its arithmetic precomputed.
#[derive(Debug, Clone)]
pub struct Group {
    spec: GroupSpec,
    a_range: u64,
    b_range: u64,
    q: u64,
    /// `p^d` in M3 (the `a`-exponent of `b^(b_range)`), zero otherwise.
    carry: u64,
    /// `q^k mod a_range` for `k` below the multiplicative order of `q`.
    q_pows: Vec<u64>,
    brute_force_limit: u64,
}

impl Group {
    pub fn new(spec: GroupSpec) -> Self {
        let a_range = spec.a_range();
        let b_range = spec.b_range();
        let q = spec.q();
        let carry = match spec.family {
            Family::M3 => spec.p.pow(spec.d),
            _ => 0,
        };
        let mut q_pows = Vec::new();
        if a_range > 1 {
            let mut x = 1;
            loop {
                q_pows.push(x);
                x = mul_mod(x, q, a_range);
                if x == 1 || q_pows.len() as u64 >= Q_TABLE_MAX {
                    break;
                }
            }
            if x != 1 {
                q_pows.clear();
            }
        }
        Group {
            spec,
            a_range,
            b_range,
            q,
            carry,
            q_pows,
            brute_force_limit: DEFAULT_BRUTE_FORCE_LIMIT,
        }
    }

    pub fn with_brute_force_limit(mut self, limit: u64) -> Self {
        self.brute_force_limit = limit;
        self
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn p(&self) -> u64 {
        self.spec.p
    }

    pub fn order(&self) -> u64 {
        self.a_range * self.b_range
    }

    pub fn a_range(&self) -> u64 {
        self.a_range
    }

    pub fn b_range(&self) -> u64 {
        self.b_range
    }

    pub fn brute_force_limit(&self) -> u64 {
        self.brute_force_limit
    }

    pub fn check_brute_force(&self) -> Result<()> {
        if self.order() > self.brute_force_limit {
            return Err(Error::BruteForceLimit {
                order: self.order(),
                limit: self.brute_force_limit,
            });
        }
        Ok(())
    }

    pub fn identity(&self) -> Element {
        Element::IDENTITY
    }

    /// The generator `a` (the identity in the cyclic family).
    pub fn a(&self) -> Element {
        Element::new(0, 1 % self.a_range)
    }

    pub fn b(&self) -> Element {
        Element::new(1 % self.b_range, 0)
    }

    /// Checked constructor for `b^i a^j`.
    pub fn element(&self, i: u64, j: u64) -> Result<Element> {
        if i >= self.b_range {
            return Err(Error::OutOfRange { value: i, bound: self.b_range });
        }
        if j >= self.a_range {
            return Err(Error::OutOfRange { value: j, bound: self.a_range });
        }
        Ok(Element::new(i, j))
    }

    pub fn contains(&self, x: &Element) -> bool {
        x.i < self.b_range && x.j < self.a_range
    }

    /// Position of `x` in the lexicographic order of normal forms.
    pub fn index_of(&self, x: &Element) -> usize {
        (x.i * self.a_range + x.j) as usize
    }

    pub fn element_at(&self, idx: usize) -> Element {
        let idx = idx as u64;
        Element::new(idx / self.a_range, idx % self.a_range)
    }

    /// All elements in lexicographic normal-form order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.b_range).flat_map(move |i| (0..self.a_range).map(move |j| Element::new(i, j)))
    }

    /// `q^k mod a_range`.
    #[inline]
    fn q_pow(&self, k: u64) -> u64 {
        if self.q_pows.is_empty() {
            pow_mod_raw(self.q, k, self.a_range)
        } else {
            self.q_pows[(k % self.q_pows.len() as u64) as usize]
        }
    }

    /// Reduces a raw `b`-exponent, returning the reduced exponent and the number
    /// of wraps. In M3 each wrap contributes the central element `a^(p^d)`.
    #[inline]
    fn reduce_b(&self, raw: u128) -> (u64, u128) {
        let b = self.b_range as u128;
        ((raw % b) as u64, raw / b)
    }

    #[inline]
    fn carry_term(&self, wraps: u128) -> u64 {
        if self.carry == 0 {
            0
        } else {
            ((wraps % self.a_range as u128) as u64 * self.carry) % self.a_range
        }
    }

    pub fn multiply(&self, x: &Element, y: &Element) -> Element {
        debug_assert!(self.contains(x) && self.contains(y));
        let (i, wraps) = self.reduce_b(x.i as u128 + y.i as u128);
        let j = (mul_mod(x.j, self.q_pow(y.i), self.a_range) + y.j + self.carry_term(wraps))
            % self.a_range;
        Element::new(i, j)
    }

    /// `(b^i a^j)^m = b^(im) a^(j (1 + q^i + ... + q^(i(m-1))))`, with the
    /// central M3 carry for every wrap of the `b`-exponent.
    pub fn power(&self, x: &Element, m: u64) -> Element {
        debug_assert!(self.contains(x));
        if self.a_range == 1 {
            return Element::new(((x.i as u128 * m as u128) % self.b_range as u128) as u64, 0);
        }
        let (i, wraps) = self.reduce_b(x.i as u128 * m as u128);
        let s = geom_sum_raw(self.q_pow(x.i), m, self.a_range);
        let j = (mul_mod(x.j, s, self.a_range) + self.carry_term(wraps)) % self.a_range;
        Element::new(i, j)
    }

    pub fn inverse(&self, x: &Element) -> Element {
        self.power(x, self.order() - 1)
    }

    /// `x^-1 y^-1 x y`.
    pub fn commutator(&self, x: &Element, y: &Element) -> Element {
        let xy = self.multiply(x, y);
        let yx = self.multiply(y, x);
        self.multiply(&self.inverse(&yx), &xy)
    }

    /// `y^-1 x y`.
    pub fn conjugate(&self, x: &Element, y: &Element) -> Element {
        self.multiply(&self.multiply(&self.inverse(y), x), y)
    }

    /// Least `p^k` with `x^(p^k) = 1`.
    pub fn element_order(&self, x: &Element) -> u64 {
        let p = self.spec.p;
        let mut y = *x;
        let mut ord = 1;
        while !y.is_identity() {
            y = self.power(&y, p);
            ord *= p;
        }
        ord
    }

    /// Maximum element order.
    pub fn exponent(&self) -> Result<u64> {
        self.check_brute_force()?;
        Ok(self.elements().map(|x| self.element_order(&x)).max().unwrap_or(1))
    }

    /// The subgroup generated by `gens`, by breadth-first closure under right
    /// multiplication by generators.
    pub fn subgroup_closure(&self, gens: &[Element]) -> Result<BTreeSet<Element>> {
        self.check_brute_force()?;
        Ok(self.closure_indices(gens).into_iter().map(|k| self.element_at(k)).collect())
    }

    /// Like [`Group::subgroup_closure`], but returns sorted element indices and
    /// skips the size gate.
    pub(crate) fn closure_indices(&self, gens: &[Element]) -> Vec<usize> {
        let mut seen = vec![false; self.order() as usize];
        let gens: Vec<Element> = gens.iter().copied().filter(|g| !g.is_identity()).collect();
        let mut queue = vec![Element::IDENTITY];
        seen[0] = true;
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for g in &gens {
                let y = self.multiply(&x, g);
                let k = self.index_of(&y);
                if !seen[k] {
                    seen[k] = true;
                    queue.push(y);
                }
            }
        }
        let mut out: Vec<usize> = queue.iter().map(|x| self.index_of(x)).collect();
        out.sort_unstable();
        out
    }

    /// Whether `gens` generate the whole group.
    pub fn generates(&self, gens: &[Element]) -> bool {
        self.closure_indices(gens).len() as u64 == self.order()
    }

    pub fn derived_subgroup(&self) -> Result<BTreeSet<Element>> {
        self.check_brute_force()?;
        let all: Vec<Element> = self.elements().collect();
        let mut seen = vec![false; all.len()];
        let mut gens = Vec::new();
        for x in &all {
            for y in &all {
                let c = self.commutator(x, y);
                let k = self.index_of(&c);
                if !seen[k] {
                    seen[k] = true;
                    gens.push(c);
                }
            }
        }
        self.subgroup_closure(&gens)
    }

    pub fn center(&self) -> Result<BTreeSet<Element>> {
        self.check_brute_force()?;
        let all: Vec<Element> = self.elements().collect();
        Ok(all
            .iter()
            .filter(|z| all.iter().all(|x| self.multiply(z, x) == self.multiply(x, z)))
            .copied()
            .collect())
    }

    /// `<g^(p^i) : g in G>`.
    pub fn mho(&self, i: u32) -> Result<BTreeSet<Element>> {
        self.check_brute_force()?;
        let pk = self.spec.p.pow(i);
        let gens: Vec<Element> = self.elements().map(|g| self.power(&g, pk)).collect();
        self.subgroup_closure(&gens)
    }

    /// `<g : g^(p^i) = 1>`.
    pub fn omega(&self, i: u32) -> Result<BTreeSet<Element>> {
        self.check_brute_force()?;
        let pk = self.spec.p.pow(i);
        let gens: Vec<Element> =
            self.elements().filter(|g| self.power(g, pk).is_identity()).collect();
        self.subgroup_closure(&gens)
    }

    /// Whether `(xy)^(p^i) = x^(p^i) y^(p^i)` for all `x, y`.
    pub fn is_pi_abelian(&self, i: u32) -> Result<bool> {
        self.check_brute_force()?;
        let pk = self.spec.p.pow(i);
        let all: Vec<Element> = self.elements().collect();
        let powers: Vec<Element> = all.iter().map(|x| self.power(x, pk)).collect();
        for (x, xp) in all.iter().zip(&powers) {
            for (y, yp) in all.iter().zip(&powers) {
                if self.power(&self.multiply(x, y), pk) != self.multiply(xp, yp) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Invariant type of an abelian subgroup.
    pub fn subgroup_invariant_type(&self, sub: &BTreeSet<Element>) -> Result<Vec<u64>> {
        self.check_brute_force()?;
        for x in sub {
            for y in sub {
                if self.multiply(x, y) != self.multiply(y, x) {
                    return Err(Error::NotAbelian);
                }
            }
        }
        abelian_invariant_type(self.spec.p, sub.iter().map(|x| self.element_order(x)))
    }

    /// Invariant type of `G/N` for a normal subgroup `N`, computed on coset
    /// representatives (the least element of each coset).
    pub fn quotient_invariant_type(&self, normal: &BTreeSet<Element>) -> Result<Vec<u64>> {
        self.check_brute_force()?;
        let n = self.order() as usize;
        let mut in_normal = vec![false; n];
        for x in normal {
            in_normal[self.index_of(x)] = true;
        }
        let mut covered = vec![false; n];
        let mut reps = Vec::new();
        for g in self.elements() {
            if covered[self.index_of(&g)] {
                continue;
            }
            reps.push(g);
            for x in normal {
                covered[self.index_of(&self.multiply(&g, x))] = true;
            }
        }
        if reps.len() * normal.len() != n {
            return invalid("subgroup does not partition the group into cosets".into());
        }
        for x in &reps {
            for y in &reps {
                if !in_normal[self.index_of(&self.commutator(x, y))] {
                    return Err(Error::NotAbelian);
                }
            }
        }
        let p = self.spec.p;
        let orders = reps.iter().map(|x| {
            let mut y = *x;
            let mut ord = 1;
            while !in_normal[self.index_of(&y)] {
                y = self.power(&y, p);
                ord *= p;
            }
            ord
        });
        abelian_invariant_type(p, orders)
    }
}

/// Invariant factors (ascending prime powers) of an abelian `p`-group, given the
/// orders of all its elements.
///
/// Uses the order profile: if `w_k` counts elements of order dividing `p^k`, then
/// `log_p(w_k) - log_p(w_(k-1))` is the number of cyclic factors of order at
/// least `p^k`.
pub fn abelian_invariant_type<I>(p: u64, orders: I) -> Result<Vec<u64>>
where
    I: IntoIterator<Item = u64>,
{
    let mut counts: Vec<u64> = Vec::new();
    let mut total = 0u64;
    for ord in orders {
        let k = crate::numtheory::valuation(ord, p)
            .filter(|&k| p.pow(k) == ord)
            .ok_or_else(|| Error::InvalidParameters(format!("{ord} is not a power of {p}")))?
            as usize;
        if counts.len() <= k {
            counts.resize(k + 1, 0);
        }
        counts[k] += 1;
        total += 1;
    }
    let log_p = |x: u64| -> Result<u32> {
        match crate::numtheory::valuation(x, p) {
            Some(v) if p.pow(v) == x => Ok(v),
            _ => invalid(format!("{x} elements is not a power of {p}")),
        }
    };
    log_p(total)?;
    let mut ranks = Vec::new(); // ranks[k-1] = #factors of order >= p^k
    let mut cumulative = 0;
    let mut prev_log = 0;
    for c in counts.iter().copied() {
        cumulative += c;
        let l = log_p(cumulative)?;
        if cumulative > 1 {
            ranks.push(l - prev_log);
        }
        prev_log = l;
    }
    let mut factors = Vec::new();
    for (k, r) in ranks.iter().enumerate() {
        let next = ranks.get(k + 1).copied().unwrap_or(0);
        if next > *r {
            return invalid("order profile is not that of an abelian p-group".into());
        }
        for _ in 0..r - next {
            factors.push(p.pow(k as u32 + 1));
        }
    }
    factors.sort_unstable();
    if factors.iter().product::<u64>() != total {
        return invalid("order profile is not that of an abelian p-group".into());
    }
    Ok(factors)
}
