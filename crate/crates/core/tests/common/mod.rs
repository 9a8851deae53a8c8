#![allow(dead_code)]

pub mod todd_coxeter;

use std::collections::BTreeSet;

use regdessin::group::{enumerate_specs, Element, Family, Group, GroupSpec};

use todd_coxeter::{A, B};

/// Every classified spec with `p in primes`, `d + e <= max_de` and order at most `max_order`.
pub fn specs_up_to(primes: &[u64], max_de: u32, max_order: u64) -> Vec<GroupSpec> {
    let mut out = Vec::new();
    for &p in primes {
        for e in 0..=max_de {
            for d in 0..=e.min(max_de - e) {
                for spec in enumerate_specs(p, d, e).unwrap() {
                    if spec.order() <= max_order {
                        out.push(spec);
                    }
                }
            }
        }
    }
    out
}

fn word(x: &Element) -> Vec<usize> {
    let mut w = todd_coxeter::power(B, x.i);
    w.extend(todd_coxeter::power(A, x.j));
    w
}

/// Compares the normal-form product with the right regular action read off a
/// coset table built from the defining relators.
pub fn check_against_coset_table(spec: &GroupSpec) -> Result<(), String> {
    let group = Group::new(*spec);
    let table = todd_coxeter::enumerate(&todd_coxeter::relators(spec), 2_000_000);
    if table.len() as u64 != group.order() {
        return Err(format!("{spec}: presentation has order {}", table.len()));
    }
    let elements: Vec<Element> = group.elements().collect();
    let coset: Vec<usize> = elements.iter().map(|x| table.walk(0, &word(x))).collect();
    let distinct: BTreeSet<_> = coset.iter().collect();
    if distinct.len() != elements.len() {
        return Err(format!("{spec}: normal forms are not distinct in the presentation"));
    }
    let words: Vec<Vec<usize>> = elements.iter().map(word).collect();
    for (x, cx) in elements.iter().zip(&coset) {
        for (y, wy) in elements.iter().zip(&words) {
            let xy = group.multiply(x, y);
            if coset[group.index_of(&xy)] != table.walk(*cx, wy) {
                return Err(format!("{spec}: {x} * {y} = {xy} disagrees with the coset table"));
            }
        }
    }
    Ok(())
}

/// `log_p |G'|`.
pub fn derived_order_exponent(spec: &GroupSpec) -> u32 {
    match spec.family {
        Family::M1 => spec.e - spec.f(),
        Family::M2 => spec.d - spec.f(),
        Family::M3 => spec.h() - spec.f(),
        Family::Cyclic => 0,
    }
}

/// Expected `(type of G', type of G/G')`, ascending, trivial factors dropped.
pub fn table_types(spec: &GroupSpec) -> (Vec<u64>, Vec<u64>) {
    let p = spec.p;
    let (d, e) = (spec.d, spec.e);
    let nontrivial = |v: Vec<u64>| {
        let mut v: Vec<u64> = v.into_iter().filter(|&x| x > 1).collect();
        v.sort_unstable();
        v
    };
    let derived = nontrivial(vec![p.pow(derived_order_exponent(spec))]);
    let f = spec.f();
    let quotient = match spec.family {
        Family::Cyclic => nontrivial(vec![p.pow(e)]),
        Family::M1 => nontrivial(vec![p.pow(f), p.pow(d)]),
        Family::M2 => nontrivial(vec![p.pow(f), p.pow(e)]),
        Family::M3 => nontrivial(vec![p.pow(f), p.pow(d + e - spec.h())]),
    };
    (derived, quotient)
}
