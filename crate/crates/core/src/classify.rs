//! Orbit counting of exact pairs under `Aut(G)` and the census of complete
//! regular dessins with underlying graph `K_{p^d, p^e}`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::autgroup::{
    apply_pair, aut_count_formula, enumerate_automorphisms, AutMap, DEFAULT_AUT_BUDGET,
};
use crate::bicyclic::{enumerate_exact_pairs, exact_pairs, pair_count_formula, BicyclicPair, Mode};
use crate::dessin::{build_dessin, genus_formula};
use crate::error::{Error, Result};
use crate::group::{enumerate_specs, Family, Group, GroupSpec, DEFAULT_BRUTE_FORCE_LIMIT};

pub const REPORT_VERSION: u32 = 1;

/// `|P(G)| / |Aut(G)|`, failing if the division is not exact.
pub fn nu_of_group(group: &Group, mode: Mode) -> Result<u64> {
    let pairs = enumerate_exact_pairs(group, mode)?;
    let auts = enumerate_automorphisms(group, mode, 0)?.count;
    if auts == 0 || pairs % auts != 0 {
        return Err(Error::Falsified(format!(
            "{}: {pairs} exact pairs are not a multiple of {auts} automorphisms",
            group.spec()
        )));
    }
    Ok(pairs / auts)
}

/// Partition of the exact pairs into `Aut(G)`-orbits.
#[derive(Debug, Clone)]
pub struct OrbitPartition {
    /// Lexicographically least pair of each orbit, in increasing order.
    pub representatives: Vec<BicyclicPair>,
    /// Common size of every orbit.
    pub orbit_size: u64,
    orbit_of: HashMap<u64, u32>,
}

impl OrbitPartition {
    pub fn orbit_count(&self) -> usize {
        self.representatives.len()
    }

    pub fn orbit_of(&self, group: &Group, pair: &BicyclicPair) -> Option<usize> {
        self.orbit_of.get(&pair.pack(group)).map(|&k| k as usize)
    }

    /// Members of orbit `k`, in lexicographic order.
    pub fn members(&self, group: &Group, k: usize) -> Vec<BicyclicPair> {
        let mut codes: Vec<u64> = self
            .orbit_of
            .iter()
            .filter(|(_, &v)| v as usize == k)
            .map(|(&c, _)| c)
            .collect();
        codes.sort_unstable();
        codes.into_iter().map(|c| BicyclicPair::unpack(c, group)).collect()
    }

    /// Whether the orbit of `pair` also contains `(beta, alpha)`.
    pub fn is_symmetric(&self, group: &Group, pair: &BicyclicPair) -> bool {
        let here = self.orbit_of(group, pair);
        here.is_some() && here == self.orbit_of(group, &pair.swapped())
    }
}

/// Sweeps each unvisited pair (in lexicographic order) through every
/// automorphism. Every orbit must have exactly `|autos|` members.
pub fn orbit_partition(
    group: &Group,
    autos: &[AutMap],
    pairs: &[BicyclicPair],
) -> Result<OrbitPartition> {
    const UNSEEN: u32 = u32::MAX;
    let mut codes: Vec<u64> = pairs.iter().map(|x| x.pack(group)).collect();
    codes.sort_unstable();
    codes.dedup();
    let mut orbit_of: HashMap<u64, u32> = codes.iter().map(|&c| (c, UNSEEN)).collect();
    let mut representatives = Vec::new();
    for &code in &codes {
        if orbit_of[&code] != UNSEEN {
            continue;
        }
        let id = representatives.len() as u32;
        let rep = BicyclicPair::unpack(code, group);
        representatives.push(rep);
        for aut in autos {
            let image = apply_pair(group, aut, &rep);
            match orbit_of.get_mut(&image.pack(group)) {
                None => {
                    return Err(Error::Falsified(format!(
                        "{}: automorphism {aut:?} sends exact pair {rep:?} to non-pair {image:?}",
                        group.spec()
                    )))
                }
                Some(slot) if *slot == UNSEEN => *slot = id,
                Some(slot) => {
                    return Err(Error::Falsified(format!(
                        "{}: pair {image:?} reached twice (orbit {} and {id}); action not semi-regular",
                        group.spec(),
                        *slot
                    )))
                }
            }
        }
        if orbit_of[&code] != id {
            return Err(Error::Falsified("identity automorphism missing from list".into()));
        }
    }
    Ok(OrbitPartition { representatives, orbit_size: autos.len() as u64, orbit_of })
}

/// Whether some automorphism swaps `alpha` and `beta` (`d = e` only).
pub fn is_isobicyclic(group: &Group, autos: &[AutMap], pair: &BicyclicPair) -> Result<bool> {
    let spec = group.spec();
    if spec.d != spec.e {
        return Err(Error::InvalidParameters(format!(
            "symmetry is only defined for d = e, got {spec}"
        )));
    }
    Ok(autos.iter().any(|aut| apply_pair(group, aut, pair) == pair.swapped()))
}

/// Number of isomorphism classes of reciprocal pairs of regular dessins on
/// `K_{p^d, p^e}`: `1`, `p^(e-1)(1 + p^(e-1))/2` or `p^(2d-1)`.
pub fn theorem_formula(p: u64, d: u32, e: u32) -> u64 {
    if d == 0 {
        1
    } else if d == e {
        let x = p.pow(e - 1);
        x * (1 + x) / 2
    } else {
        p.pow(2 * d - 1)
    }
}

/// Per-group class count from the closed forms.
pub fn nu_formula(spec: &GroupSpec) -> u64 {
    let p = spec.p;
    let (d, e, f) = (spec.d, spec.e, spec.f());
    match spec.family {
        Family::Cyclic => 1,
        Family::M1 if f == e => 1,
        Family::M1 if d == e => p.pow(2 * e - 2 * f - 2) * (p * p - 1),
        Family::M1 if d <= f => p.pow(e - f - 1) * (p - 1),
        Family::M1 => p.pow(d + e - 2 * f - 1) * (p - 1),
        Family::M2 => p.pow(2 * d - 2 * f - 1) * (p - 1),
        Family::M3 => p.pow(d + spec.h() - 2 * (f + 1)) * (p - 1) * (p - 1),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub mode: Mode,
    /// Largest automorphism list held in memory.
    pub aut_budget: u64,
    /// Brute-force gate handed to each group (oracle mode only).
    pub brute_force_limit: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            mode: Mode::Fast,
            aut_budget: DEFAULT_AUT_BUDGET,
            brute_force_limit: DEFAULT_BRUTE_FORCE_LIMIT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRepresentative {
    pub pair: BicyclicPair,
    /// `d = e` only.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub symmetric: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecRow {
    pub spec: GroupSpec,
    pub pairs: u64,
    pub pair_formula: u64,
    pub auts: u64,
    pub aut_formula: u64,
    /// `pairs / auts`.
    pub nu: u64,
    /// Number of orbits found explicitly.
    pub orbits: u64,
    pub nu_formula: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub symmetric: Option<u64>,
    /// One entry per orbit, lexicographically least pair first.
    pub representatives: Vec<ClassRepresentative>,
    /// Every representative builds a dessin of the predicted type, genus and
    /// face count.
    pub geometry_ok: bool,
    #[serde(rename = "match")]
    pub matches: bool,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub version: u32,
    pub p: u64,
    pub d: u32,
    pub e: u32,
    pub rows: Vec<SpecRow>,
    /// Sum of per-group orbit counts: dessins for `d = e`, reciprocal pairs otherwise.
    pub nu_total: u64,
    /// `d = e > 0` only: symmetric dessins among `nu_total`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub symmetric_total: Option<u64>,
    /// Classes of reciprocal pairs.
    pub reciprocal_classes: u64,
    pub theorem_value: u64,
    #[serde(rename = "match")]
    pub matches: bool,
}

impl CountReport {
    pub fn offending_specs(&self) -> Vec<&GroupSpec> {
        self.rows.iter().filter(|r| !r.matches).map(|r| &r.spec).collect()
    }
}

fn verify_spec(spec: GroupSpec, opts: &VerifyOptions) -> Result<SpecRow> {
    let group = Group::new(spec).with_brute_force_limit(opts.brute_force_limit);
    let p = spec.p;
    let pairs = exact_pairs(&group, opts.mode)?;
    let auts = enumerate_automorphisms(&group, opts.mode, opts.aut_budget)?;
    let mut row = SpecRow {
        spec,
        pairs: pairs.len() as u64,
        pair_formula: pair_count_formula(&spec),
        auts: auts.count,
        aut_formula: aut_count_formula(&spec),
        nu: 0,
        orbits: 0,
        nu_formula: nu_formula(&spec),
        symmetric: None,
        representatives: Vec::new(),
        geometry_ok: false,
        matches: false,
        diagnostics: Vec::new(),
    };
    if row.pairs != row.pair_formula {
        row.diagnostics.push(format!("pair count {} != {}", row.pairs, row.pair_formula));
    }
    if row.auts != row.aut_formula {
        row.diagnostics.push(format!("aut count {} != {}", row.auts, row.aut_formula));
    }
    if row.auts == 0 || row.pairs % row.auts != 0 {
        row.diagnostics.push(format!("{} pairs not divisible by {} auts", row.pairs, row.auts));
        return Ok(row);
    }
    row.nu = row.pairs / row.auts;
    if row.nu != row.nu_formula {
        row.diagnostics.push(format!("nu {} != formula {}", row.nu, row.nu_formula));
    }
    let Some(maps) = auts.maps else {
        row.diagnostics.push(format!("{} automorphisms exceed the list budget", auts.count));
        return Ok(row);
    };
    let partition = match orbit_partition(&group, &maps, &pairs) {
        Ok(x) => x,
        Err(err) => {
            row.diagnostics.push(err.to_string());
            return Ok(row);
        }
    };
    row.orbits = partition.orbit_count() as u64;
    if row.orbits != row.nu {
        row.diagnostics.push(format!("{} orbits but nu = {}", row.orbits, row.nu));
    }
    let with_symmetry = spec.d == spec.e && spec.d > 0;
    row.representatives = partition
        .representatives
        .iter()
        .map(|x| ClassRepresentative {
            pair: *x,
            symmetric: with_symmetry.then(|| partition.is_symmetric(&group, x)),
        })
        .collect();
    if with_symmetry {
        let sym = row.representatives.iter().filter(|x| x.symmetric == Some(true)).count();
        row.symmetric = Some(sym as u64);
    }

    let expected_type = (p.pow(spec.d), p.pow(spec.e), p.pow(spec.e));
    let expected_genus = genus_formula(p, spec.d, spec.e);
    row.geometry_ok = true;
    for rep in &partition.representatives {
        let summary = build_dessin(&group, rep).and_then(|x| x.summarize());
        match summary {
            Ok(s) if s.dessin_type == expected_type
                && s.genus == expected_genus
                && s.faces == p.pow(spec.d) => {}
            Ok(s) => {
                row.geometry_ok = false;
                row.diagnostics.push(format!(
                    "{rep:?}: type {:?}, genus {}, {} faces",
                    s.dessin_type, s.genus, s.faces
                ));
            }
            Err(err) => {
                row.geometry_ok = false;
                row.diagnostics.push(format!("{rep:?}: {err}"));
            }
        }
    }
    row.matches = row.diagnostics.is_empty();
    Ok(row)
}

/// Full census of `(p^d, p^e)`-complete regular dessins: per-group pair and
/// automorphism counts, explicit orbits, symmetry and geometry, aggregated
/// against the closed-form class count.
pub fn verify(p: u64, d: u32, e: u32, opts: &VerifyOptions) -> Result<CountReport> {
    let specs = enumerate_specs(p, d, e)?;
    let rows: Vec<SpecRow> = specs
        .into_par_iter()
        .map(|spec| verify_spec(spec, opts))
        .collect::<Result<_>>()?;
    let nu_total: u64 = rows.iter().map(|r| r.orbits).sum();
    let theorem_value = theorem_formula(p, d, e);
    let mut matches = rows.iter().all(|r| r.matches);
    let (symmetric_total, reciprocal_classes) = if d == e && d > 0 {
        let sym: u64 = rows.iter().filter_map(|r| r.symmetric).sum();
        matches &= nu_total == p.pow(2 * (e - 1)) && sym == p.pow(e - 1);
        matches &= nu_total >= sym && (nu_total - sym) % 2 == 0;
        (Some(sym), sym + nu_total.saturating_sub(sym) / 2)
    } else {
        (None, nu_total)
    };
    matches &= reciprocal_classes == theorem_value;
    Ok(CountReport {
        version: REPORT_VERSION,
        p,
        d,
        e,
        rows,
        nu_total,
        symmetric_total,
        reciprocal_classes,
        theorem_value,
        matches,
    })
}
