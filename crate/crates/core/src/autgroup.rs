//! Automorphisms stored by generator images: `a ↦ b^r a^s`, `b ↦ b^t a^u`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bicyclic::{BicyclicPair, Mode};
use crate::error::Result;
use crate::group::{Element, Family, Group, GroupSpec};
use crate::numtheory::{is_unit, phi_prime_power};

/// Lists longer than this are not materialised.
pub const DEFAULT_AUT_BUDGET: u64 = 4_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AutMap {
    pub r: u64,
    pub s: u64,
    pub t: u64,
    pub u: u64,
}

impl AutMap {
    pub const IDENTITY: AutMap = AutMap { r: 0, s: 1, t: 1, u: 0 };

    pub fn new(r: u64, s: u64, t: u64, u: u64) -> Self {
        AutMap { r, s, t, u }
    }

    /// The identity map in `group`'s canonical ranges.
    pub fn identity(group: &Group) -> Self {
        let a = group.a();
        let b = group.b();
        AutMap::new(a.i, a.j, b.i, b.j)
    }

    /// Images of `a` and `b`.
    pub fn images(&self) -> (Element, Element) {
        (Element::new(self.r, self.s), Element::new(self.t, self.u))
    }

    /// Reads a map back from the images of `a` and `b`.
    pub fn from_images(a_image: Element, b_image: Element) -> Self {
        AutMap::new(a_image.i, a_image.j, b_image.i, b_image.j)
    }
}

/// Image of `b^i a^j`, namely `(b^t a^u)^i (b^r a^s)^j`.
pub fn apply(group: &Group, aut: &AutMap, x: &Element) -> Element {
    let (a1, b1) = aut.images();
    group.multiply(&group.power(&b1, x.i), &group.power(&a1, x.j))
}

pub fn apply_pair(group: &Group, aut: &AutMap, pair: &BicyclicPair) -> BicyclicPair {
    BicyclicPair::new(apply(group, aut, &pair.alpha), apply(group, aut, &pair.beta))
}

/// `outer ∘ inner`.
pub fn compose(group: &Group, outer: &AutMap, inner: &AutMap) -> AutMap {
    let (a1, b1) = inner.images();
    AutMap::from_images(apply(group, outer, &a1), apply(group, outer, &b1))
}

/// Definitional test: the images satisfy the family's defining relations and
/// generate the group (von Dyck).
pub fn is_automorphism_oracle(group: &Group, aut: &AutMap) -> Result<bool> {
    group.check_brute_force()?;
    let (a1, b1) = aut.images();
    if !group.contains(&a1) || !group.contains(&b1) {
        return Ok(false);
    }
    let spec = group.spec();
    let p = spec.p;
    let pw = |k: u32| p.pow(k);
    let one = group.identity();
    let relations = match spec.family {
        Family::Cyclic => a1 == one && group.power(&b1, pw(spec.e)) == one,
        Family::M1 | Family::M2 | Family::M3 => {
            let q = 1 + pw(spec.f());
            let conj = group.conjugate(&a1, &b1) == group.power(&a1, q);
            conj && match spec.family {
                Family::M1 => {
                    group.power(&a1, pw(spec.e)) == one && group.power(&b1, pw(spec.d)) == one
                }
                Family::M2 => {
                    group.power(&a1, pw(spec.d)) == one && group.power(&b1, pw(spec.e)) == one
                }
                _ => {
                    let h = spec.h();
                    group.power(&a1, pw(h)) == one
                        && group.power(&b1, pw(spec.d + spec.e - h)) == group.power(&a1, pw(spec.d))
                }
            }
        }
    };
    Ok(relations && group.generates(&[a1, b1]))
}

/// The five parameter regimes of `M1(d, e, f)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum M1Case {
    /// `f = e = d`
    Abelian,
    /// `f < e = d`
    EqualOrders,
    /// `d < f = e`
    AbelianUnequal,
    /// `d <= f < e`
    Mid,
    /// `f < d < e`
    Low,
}

pub fn m1_case(d: u32, e: u32, f: u32) -> M1Case {
    let cases = [
        (f == e && e == d, M1Case::Abelian),
        (f < e && e == d, M1Case::EqualOrders),
        (d < f && f == e, M1Case::AbelianUnequal),
        (d <= f && f < e && d < e, M1Case::Mid),
        (f < d && d < e, M1Case::Low),
    ];
    let mut firing = cases.iter().filter(|(hit, _)| *hit).map(|(_, c)| *c);
    let case = firing.next().expect("M1 parameter cases must cover every valid spec");
    assert!(firing.next().is_none(), "M1 parameter cases overlap at ({d},{e},{f})");
    case
}

fn divides(m: u64, x: u64) -> bool {
    x % m == 0
}

fn is_one_mod(x: u64, m: u64) -> bool {
    x % m == 1 % m
}

/// Closed-form congruence test for `a ↦ b^r a^s`, `b ↦ b^t a^u`.
pub fn is_automorphism_fast(spec: &GroupSpec, r: u64, s: u64, t: u64, u: u64) -> bool {
    let p = spec.p;
    let (d, e, f) = (spec.d, spec.e, spec.f());
    let pw = |k: u32| p.pow(k);
    let unit = |x: u64| x % p != 0;
    match spec.family {
        Family::Cyclic => r == 0 && s == 0 && u == 0 && is_unit(t, p, e),
        Family::M1 => match m1_case(d, e, f) {
            M1Case::Abelian => ((r % p) * (u % p) + p * p - (s % p) * (t % p)) % p != 0,
            M1Case::EqualOrders => {
                divides(pw(e - f), r) && is_one_mod(t, pw(e - f)) && unit(s)
            }
            M1Case::AbelianUnequal => divides(pw(e - d), u) && unit(s) && unit(t),
            M1Case::Mid => divides(pw(e - d), u) && is_one_mod(t, pw(e - f)) && unit(s),
            M1Case::Low => {
                divides(pw(d - f), r)
                    && divides(pw(e - d), u)
                    && is_one_mod(t, pw(e - f))
                    && unit(s)
            }
        },
        Family::M2 => divides(pw(e - f), r) && unit(s) && is_one_mod(t, pw(d - f)),
        Family::M3 => {
            let h = spec.h();
            let m_hd = pw(h - d) as i128;
            let m_ef = pw(e - f) as i128;
            let s_target = 1 + u as i128 * pw(e - h) as i128;
            let r_target = (t as i128 - 1) * pw(e - h) as i128;
            divides(pw(d + e - h - f), r)
                && (s as i128 - s_target).rem_euclid(m_hd) == 0
                && is_one_mod(t, pw(d - f))
                && (r as i128 - r_target).rem_euclid(m_ef) == 0
        }
    }
}

/// Closed-form `|Aut(G)|`.
pub fn aut_count_formula(spec: &GroupSpec) -> u64 {
    let p = spec.p;
    let (d, e, f) = (spec.d, spec.e, spec.f());
    match spec.family {
        Family::Cyclic => phi_prime_power(p, e),
        Family::M1 => match m1_case(d, e, f) {
            M1Case::Abelian => p.pow(4 * e - 3) * (p * p - 1) * (p - 1),
            M1Case::EqualOrders => p.pow(2 * (e + f) - 1) * (p - 1),
            M1Case::AbelianUnequal => p.pow(3 * d + e - 2) * (p - 1) * (p - 1),
            M1Case::Mid => p.pow(3 * d + f - 1) * (p - 1),
            M1Case::Low => p.pow(2 * (d + f) - 1) * (p - 1),
        },
        Family::M2 => p.pow(d + e + 2 * f - 1) * (p - 1),
        Family::M3 => p.pow(2 * d + e + 2 * f - spec.h()),
    }
}

#[derive(Debug, Clone)]
pub struct AutEnumeration {
    pub count: u64,
    /// In `(r, s, t, u)` lexicographic order; `None` when over budget.
    pub maps: Option<Vec<AutMap>>,
}

/// All automorphisms, by the chosen predicate.
pub fn enumerate_automorphisms(group: &Group, mode: Mode, budget: u64) -> Result<AutEnumeration> {
    let (ar, br) = (group.a_range(), group.b_range());
    match mode {
        Mode::Fast => {
            let spec = *group.spec();
            let count_r = |r: u64| -> u64 {
                let mut n = 0;
                for s in 0..ar {
                    for t in 0..br {
                        for u in 0..ar {
                            n += is_automorphism_fast(&spec, r, s, t, u) as u64;
                        }
                    }
                }
                n
            };
            let count: u64 = (0..br).into_par_iter().map(count_r).sum();
            if count > budget {
                return Ok(AutEnumeration { count, maps: None });
            }
            let maps: Vec<AutMap> = (0..br)
                .into_par_iter()
                .flat_map_iter(|r| {
                    (0..ar).flat_map(move |s| {
                        (0..br).flat_map(move |t| {
                            (0..ar)
                                .filter(move |&u| is_automorphism_fast(&spec, r, s, t, u))
                                .map(move |u| AutMap::new(r, s, t, u))
                        })
                    })
                })
                .collect();
            Ok(AutEnumeration { count, maps: Some(maps) })
        }
        Mode::Oracle => {
            group.check_brute_force()?;
            let mut maps = Vec::new();
            for r in 0..br {
                for s in 0..ar {
                    for t in 0..br {
                        for u in 0..ar {
                            let aut = AutMap::new(r, s, t, u);
                            if is_automorphism_oracle(group, &aut)? {
                                maps.push(aut);
                            }
                        }
                    }
                }
            }
            let count = maps.len() as u64;
            Ok(AutEnumeration { count, maps: (count <= budget).then_some(maps) })
        }
    }
}
