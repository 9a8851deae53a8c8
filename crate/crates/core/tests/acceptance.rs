//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;

use regdessin::autgroup::{
    aut_count_formula, enumerate_automorphisms, is_automorphism_fast, is_automorphism_oracle,
    AutMap, DEFAULT_AUT_BUDGET,
};
use regdessin::bicyclic::{
    enumerate_exact_pairs, exact_pairs, is_exact_pair_fast, pair_count_formula, BicyclicPair, Mode,
    PairOracle,
};
use regdessin::classify::{nu_of_group, orbit_partition, verify, CountReport, VerifyOptions};
use regdessin::dessin::{build_dessin, genus_formula};
use regdessin::group::{Family, Group, GroupSpec};

const PRIMES: [u64; 2] = [3, 5];
const MAX_DE: u32 = 5;
const SWEEP_LIMIT: u64 = 3125;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn cells() -> Vec<(u64, u32, u32)> {
    let mut out = Vec::new();
    for p in PRIMES {
        for e in 0..=MAX_DE {
            for d in 0..=e.min(MAX_DE - e) {
                out.push((p, d, e));
            }
        }
    }
    out
}

fn sweep() -> Vec<GroupSpec> {
    common::specs_up_to(&PRIMES, MAX_DE, SWEEP_LIMIT)
}

fn options() -> VerifyOptions {
    VerifyOptions { brute_force_limit: SWEEP_LIMIT, ..VerifyOptions::default() }
}

struct Reports(BTreeMap<(u64, u32, u32), CountReport>);

impl Reports {
    fn compute() -> Result<Self, String> {
        let mut map = BTreeMap::new();
        for (p, d, e) in cells() {
            let report = verify(p, d, e, &options()).map_err(|err| format!("verify({p},{d},{e}): {err}"))?;
            map.insert((p, d, e), report);
        }
        Ok(Reports(map))
    }

    fn get(&self, p: u64, d: u32, e: u32) -> &CountReport {
        &self.0[&(p, d, e)]
    }
}

fn criterion_1(reports: &Reports) -> Outcome {
    for ((p, d, e), r) in &reports.0 {
        ensure!(r.matches, "verify({p},{d},{e}) does not match: {:?}", r.offending_specs());
        ensure!(
            r.reciprocal_classes == r.theorem_value,
            "verify({p},{d},{e}): {} classes, theorem {}",
            r.reciprocal_classes,
            r.theorem_value
        );
        for row in &r.rows {
            ensure!(
                row.orbits == row.nu && row.nu == row.nu_formula,
                "{}: orbits {} nu {} formula {}",
                row.spec,
                row.orbits,
                row.nu,
                row.nu_formula
            );
        }
    }
    let named = [((3, 1, 2), 3), ((3, 2, 2), 6), ((3, 2, 3), 27), ((5, 1, 2), 5)];
    for ((p, d, e), want) in named {
        let got = reports.get(p, d, e).reciprocal_classes;
        ensure!(got == want, "nu({p};{d},{e}) = {got}, expected {want}");
    }
    for e in 0..=MAX_DE {
        let got = reports.get(3, 0, e).reciprocal_classes;
        ensure!(got == 1, "nu(3;0,{e}) = {got}");
    }
    Ok(format!("{} cells, all matching", reports.0.len()))
}

fn criterion_2() -> Outcome {
    let r = verify(3, 2, 4, &options()).map_err(|err| err.to_string())?;
    ensure!(r.matches, "verify(3,2,4) does not match: {:?}", r.offending_specs());
    let expected = [
        (GroupSpec::m1(3, 2, 4, 2).unwrap(), 6),
        (GroupSpec::m1(3, 2, 4, 3).unwrap(), 2),
        (GroupSpec::m1(3, 2, 4, 4).unwrap(), 1),
        (GroupSpec::m2(3, 2, 4, 1).unwrap(), 6),
        (GroupSpec::m3(3, 2, 4, 3, 1).unwrap(), 12),
    ];
    let got: Vec<(GroupSpec, u64)> = r.rows.iter().map(|row| (row.spec, row.orbits)).collect();
    ensure!(got == expected, "per-group orbit counts {got:?}");
    ensure!(r.nu_total == 27 && r.theorem_value == 27, "total {} theorem {}", r.nu_total, r.theorem_value);
    Ok("orbits 6,2,1,6,12 total 27".into())
}

fn criterion_3() -> Outcome {
    let m1 = |d, e, f| Group::new(GroupSpec::m1(3, d, e, f).unwrap());
    let n111 = enumerate_exact_pairs(&m1(1, 1, 1), Mode::Fast).map_err(|e| e.to_string())?;
    let n121 = enumerate_exact_pairs(&m1(1, 2, 1), Mode::Fast).map_err(|e| e.to_string())?;
    ensure!(n111 == 48 && n121 == 108, "examples give {n111}, {n121}");
    let specs = sweep();
    for spec in &specs {
        let group = Group::new(*spec);
        let n = enumerate_exact_pairs(&group, Mode::Fast).map_err(|e| e.to_string())?;
        ensure!(n == pair_count_formula(spec), "{spec}: {n} pairs, formula {}", pair_count_formula(spec));
    }
    Ok(format!("{} groups", specs.len()))
}

fn criterion_4() -> Outcome {
    let examples = [
        (GroupSpec::m1(3, 1, 1, 1).unwrap(), 48),
        (GroupSpec::m1(3, 1, 2, 1).unwrap(), 54),
        (GroupSpec::m3(3, 2, 4, 3, 1).unwrap(), 2187),
    ];
    for (spec, want) in examples {
        let n = enumerate_automorphisms(&Group::new(spec), Mode::Fast, 0).map_err(|e| e.to_string())?.count;
        ensure!(n == want, "{spec}: {n} automorphisms, expected {want}");
    }
    let specs = sweep();
    for spec in &specs {
        let n = enumerate_automorphisms(&Group::new(*spec), Mode::Fast, 0)
            .map_err(|e| e.to_string())?
            .count;
        ensure!(n == aut_count_formula(spec), "{spec}: {n} automorphisms, formula {}", aut_count_formula(spec));
    }
    Ok(format!("{} groups", specs.len()))
}

fn criterion_5() -> Outcome {
    let specs = common::specs_up_to(&[3, 5, 7], 5, 243);
    for spec in &specs {
        common::check_against_coset_table(spec)?;
        let group = Group::new(*spec);
        let mut oracle = PairOracle::new(&group).map_err(|e| e.to_string())?;
        let elements: Vec<_> = group.elements().collect();
        for x in &elements {
            for y in &elements {
                let pair = BicyclicPair::new(*x, *y);
                let (i, j, k, l) = pair.exponents();
                ensure!(
                    is_exact_pair_fast(spec, i, j, k, l) == oracle.is_exact(&pair),
                    "{spec}: pair ({x}, {y})"
                );
                let aut = AutMap::from_images(*x, *y);
                let slow = is_automorphism_oracle(&group, &aut).map_err(|e| e.to_string())?;
                ensure!(
                    is_automorphism_fast(spec, aut.r, aut.s, aut.t, aut.u) == slow,
                    "{spec}: map a -> {x}, b -> {y}"
                );
            }
        }
    }
    Ok(format!("{} groups up to order 243", specs.len()))
}

fn criterion_6() -> Outcome {
    let mut checked = 0;
    for (p, d, e) in cells() {
        let mut seen = BTreeSet::new();
        for spec in regdessin::group::enumerate_specs(p, d, e).map_err(|e| e.to_string())? {
            let group = Group::new(spec).with_brute_force_limit(SWEEP_LIMIT);
            let err = |e: regdessin::Error| format!("{spec}: {e}");
            let derived = group.derived_subgroup().map_err(err)?;
            let want = p.pow(common::derived_order_exponent(&spec));
            ensure!(derived.len() as u64 == want, "{spec}: |G'| = {}, expected {want}", derived.len());

            let x = spec.abelian_power_exponent();
            let center = group.center().map_err(err)?;
            let lemma = group
                .subgroup_closure(&[
                    group.power(&group.a(), p.pow(x)),
                    group.power(&group.b(), p.pow(x)),
                ])
                .map_err(err)?;
            ensure!(center == lemma, "{spec}: center has order {}", center.len());
            ensure!(group.is_pi_abelian(x).map_err(err)?, "{spec}: not p^{x}-abelian");

            let types = (
                group.subgroup_invariant_type(&derived).map_err(err)?,
                group.quotient_invariant_type(&derived).map_err(err)?,
            );
            ensure!(types == common::table_types(&spec), "{spec}: invariant types {types:?}");
            ensure!(seen.insert(types), "{spec}: invariants coincide with another group");
            checked += 1;
        }
    }
    Ok(format!("{checked} groups, invariants pairwise distinct"))
}

fn criterion_7(reports: &Reports) -> Outcome {
    let mut dessins = 0;
    for ((p, d, e), r) in &reports.0 {
        let (p, d, e) = (*p, *d, *e);
        for row in &r.rows {
            ensure!(row.geometry_ok, "{}: geometry flagged", row.spec);
            let group = Group::new(row.spec);
            for rep in &row.representatives {
                let dessin = build_dessin(&group, &rep.pair).map_err(|err| format!("{}: {err}", row.spec))?;
                let s = dessin.summarize().map_err(|err| err.to_string())?;
                let chi = (s.black_vertices + s.white_vertices + s.faces) as i64 - s.edges as i64;
                ensure!(chi == 2 - 2 * s.genus as i64, "{}: Euler relation fails", row.spec);
                ensure!(s.genus == genus_formula(p, d, e), "{}: genus {}", row.spec, s.genus);
                let twice = (p.pow(d) as i64 - 1) * (p.pow(e) as i64 - 2);
                ensure!(2 * s.genus as i64 == twice, "{}: genus {}", row.spec, s.genus);
                ensure!(
                    s.dessin_type == (p.pow(d), p.pow(e), p.pow(e)),
                    "{}: type {:?}",
                    row.spec,
                    s.dessin_type
                );
                ensure!(s.faces == p.pow(d), "{}: {} faces", row.spec, s.faces);
                dessins += 1;
            }
        }
    }
    for p in PRIMES {
        for n in [1, 2] {
            let sym = reports.get(p, n, n).symmetric_total;
            ensure!(sym == Some(p.pow(n - 1)), "p={p}, d=e={n}: symmetric {sym:?}");
        }
    }
    Ok(format!("{dessins} representative dessins"))
}

fn criterion_8() -> Outcome {
    let specs = sweep();
    for spec in &specs {
        let group = Group::new(*spec).with_brute_force_limit(SWEEP_LIMIT);
        nu_of_group(&group, Mode::Fast).map_err(|e| format!("{spec}: {e}"))?;
        let pairs = exact_pairs(&group, Mode::Fast).map_err(|e| e.to_string())?;
        let autos = enumerate_automorphisms(&group, Mode::Fast, DEFAULT_AUT_BUDGET)
            .map_err(|e| e.to_string())?
            .maps
            .ok_or_else(|| format!("{spec}: automorphism list over budget"))?;
        let partition = orbit_partition(&group, &autos, &pairs).map_err(|e| format!("{spec}: {e}"))?;
        let mut sizes = vec![0usize; partition.orbit_count()];
        for pair in &pairs {
            let k = partition.orbit_of(&group, pair).ok_or_else(|| format!("{spec}: unassigned pair"))?;
            sizes[k] += 1;
        }
        ensure!(sizes.iter().all(|&s| s == autos.len()), "{spec}: orbit sizes {sizes:?}");
        if spec.family == Family::Cyclic {
            ensure!(sizes.len() == 1, "{spec}: cyclic group with {} orbits", sizes.len());
        }
    }
    Ok(format!("{} groups, every orbit regular", specs.len()))
}

fn run(n: u32, check: impl FnOnce() -> Outcome) -> bool {
    let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|payload| {
        let msg = payload
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    match outcome {
        Ok(detail) => {
            println!("criterion {n}: PASS ({detail})");
            true
        }
        Err(why) => {
            println!("criterion {n}: FAIL ({why})");
            false
        }
    }
}

fn main() -> ExitCode {
    let reports = Reports::compute();
    let with_reports = |f: fn(&Reports) -> Outcome| -> Outcome {
        match &reports {
            Ok(r) => f(r),
            Err(why) => Err(why.clone()),
        }
    };
    let results = [
        run(1, || with_reports(criterion_1)),
        run(2, criterion_2),
        run(3, criterion_3),
        run(4, criterion_4),
        run(5, criterion_5),
        run(6, criterion_6),
        run(7, || with_reports(criterion_7)),
        run(8, criterion_8),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
