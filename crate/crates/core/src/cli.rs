//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when a verification check fails, 2 on bad
//! configuration. CSV columns for `count` and `verify` are fixed:
//! `p,d,e,family,f,h,pairs,auts,nu,nu_formula,match`.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::autgroup::{aut_count_formula, enumerate_automorphisms, DEFAULT_AUT_BUDGET};
use crate::bicyclic::{enumerate_exact_pairs, pair_count_formula, Mode};
use crate::classify::{nu_formula, theorem_formula, verify, CountReport, VerifyOptions};
use crate::dessin::{build_dessin, DessinFile, DessinSummary};
use crate::error::{Error, Result};
use crate::group::{enumerate_specs, Group, GroupSpec, DEFAULT_BRUTE_FORCE_LIMIT};
use crate::numtheory::{check_odd_prime, checked_prime_power};

pub const CSV_HEADER: &str = "p,d,e,family,f,h,pairs,auts,nu,nu_formula,match";
pub const TABLE_CSV_HEADER: &str = "p,d,e,theorem,computed,match";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// List the groups of order p^(d+e) admitting an exact (p^d, p^e) factorisation.
    Specs {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        e: u32,
    },
    /// Per-group exact pair and automorphism counts.
    Count {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        e: u32,
    },
    /// Full orbit census checked against the closed forms.
    Verify {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        e: u32,
    },
    /// Export one dessin per isomorphism class.
    Dessin {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        e: u32,
        /// Include vertex rotations and face boundaries as edge-index cycles.
        #[arg(long)]
        adjacency: bool,
    },
    /// Class counts over all 0 <= d <= e with d + e <= max-de.
    Table {
        #[arg(long)]
        p: u64,
        #[arg(long = "max-de")]
        max_de: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Parser)]
#[command(name = "regdessin", version, about = "Census of complete regular dessins of odd prime power order")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Output file (standard output when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    pub parallel: Option<usize>,
    /// Largest group order processed without --slow.
    #[arg(long, global = true, env = "DESSIN_MAX_ORDER", default_value_t = DEFAULT_BRUTE_FORCE_LIMIT)]
    pub max_order: u64,
    /// Allow groups above --max-order.
    #[arg(long, global = true)]
    pub slow: bool,
    /// Use the definitional predicates instead of the closed-form ones.
    #[arg(long, global = true)]
    pub oracle: bool,
}

/// Outcome of a successful run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Mismatch,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Mismatch => 1,
        }
    }
}

impl RunConfig {
    fn mode(&self) -> Mode {
        if self.oracle {
            Mode::Oracle
        } else {
            Mode::Fast
        }
    }

    fn verify_options(&self) -> VerifyOptions {
        VerifyOptions {
            mode: self.mode(),
            aut_budget: DEFAULT_AUT_BUDGET,
            brute_force_limit: self.max_order.max(DEFAULT_BRUTE_FORCE_LIMIT),
        }
    }

    fn within_bound(&self, p: u64, d: u32, e: u32) -> Result<bool> {
        Ok(self.slow || checked_prime_power(p, d + e)? <= self.max_order)
    }

    /// Checks the parameters shared by every subcommand.
    pub fn validate(&self) -> Result<()> {
        if self.parallel == Some(0) {
            return Err(Error::InvalidParameters("--parallel must be at least 1".into()));
        }
        let (p, d, e) = match self.command {
            Command::Specs { p, d, e }
            | Command::Count { p, d, e }
            | Command::Verify { p, d, e }
            | Command::Dessin { p, d, e, .. } => (p, d, e),
            Command::Table { p, .. } => {
                check_odd_prime(p)?;
                return Ok(());
            }
        };
        check_odd_prime(p)?;
        if d > e {
            return Err(Error::InvalidParameters(format!("d = {d} exceeds e = {e}")));
        }
        let order = checked_prime_power(p, d + e)?;
        let gated = !matches!(self.command, Command::Specs { .. });
        if gated && !self.within_bound(p, d, e)? {
            return Err(Error::BruteForceLimit { order, limit: self.max_order });
        }
        Ok(())
    }
}

fn opt(x: Option<u32>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn csv_row(
    out: &mut String,
    spec: &GroupSpec,
    pairs: u64,
    auts: u64,
    nu: u64,
    nu_formula: u64,
    ok: bool,
) {
    let _ = writeln!(
        out,
        "{},{},{},{},{},{},{pairs},{auts},{nu},{nu_formula},{ok}",
        spec.p,
        spec.d,
        spec.e,
        spec.family,
        opt(spec.f),
        opt(spec.h)
    );
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialise");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct CountRow {
    spec: GroupSpec,
    pairs: u64,
    pair_formula: u64,
    auts: u64,
    aut_formula: u64,
    nu: Option<u64>,
    nu_formula: u64,
    #[serde(rename = "match")]
    matches: bool,
}

fn count_rows(config: &RunConfig, p: u64, d: u32, e: u32) -> Result<Vec<CountRow>> {
    use rayon::prelude::*;
    let limit = config.verify_options().brute_force_limit;
    enumerate_specs(p, d, e)?
        .into_par_iter()
        .map(|spec| {
            let group = Group::new(spec).with_brute_force_limit(limit);
            let pairs = enumerate_exact_pairs(&group, config.mode())?;
            let auts = enumerate_automorphisms(&group, config.mode(), 0)?.count;
            let nu = (auts > 0 && pairs % auts == 0).then(|| pairs / auts);
            let (pair_formula, aut_formula) = (pair_count_formula(&spec), aut_count_formula(&spec));
            let nu_formula = nu_formula(&spec);
            Ok(CountRow {
                spec,
                pairs,
                pair_formula,
                auts,
                aut_formula,
                nu,
                nu_formula,
                matches: pairs == pair_formula && auts == aut_formula && nu == Some(nu_formula),
            })
        })
        .collect()
}

fn render_report(report: &CountReport, format: Format) -> String {
    match format {
        Format::Json => to_json(report),
        Format::Csv => {
            let mut s = format!("{CSV_HEADER}\n");
            for r in &report.rows {
                csv_row(&mut s, &r.spec, r.pairs, r.auts, r.orbits, r.nu_formula, r.matches);
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "K_{{{}^{}, {}^{}}}", report.p, report.d, report.p, report.e);
            for r in &report.rows {
                let _ = write!(
                    s,
                    "  {:<14} pairs {:>10}  auts {:>10}  orbits {:>5}  formula {:>5}",
                    r.spec.to_string(),
                    r.pairs,
                    r.auts,
                    r.orbits,
                    r.nu_formula
                );
                if let Some(sym) = r.symmetric {
                    let _ = write!(s, "  symmetric {sym}");
                }
                let _ = writeln!(s, "  {}", if r.matches { "ok" } else { "MISMATCH" });
                for diag in &r.diagnostics {
                    let _ = writeln!(s, "    {diag}");
                }
            }
            if let Some(sym) = report.symmetric_total {
                let _ = writeln!(s, "dessins {}  symmetric {}", report.nu_total, sym);
            }
            let _ = writeln!(
                s,
                "reciprocal-pair classes {}  theorem {}  {}",
                report.reciprocal_classes,
                report.theorem_value,
                if report.matches { "ok" } else { "MISMATCH" }
            );
            s
        }
    }
}

#[derive(Serialize)]
struct DessinRecord {
    summary: DessinSummary,
    dessin: DessinFile,
}

fn render_dessins(config: &RunConfig, report: &CountReport, adjacency: bool) -> Result<String> {
    let mut records = Vec::new();
    for row in &report.rows {
        let group = Group::new(row.spec);
        for rep in &row.representatives {
            let d = build_dessin(&group, &rep.pair)?;
            let mut summary = d.summarize()?;
            summary.symmetric = rep.symmetric;
            records.push(DessinRecord { summary, dessin: d.to_file(adjacency) });
        }
    }
    Ok(match config.format {
        Format::Json => to_json(&records),
        Format::Csv => {
            let mut s = String::from(
                "p,d,e,family,f,h,alpha_i,alpha_j,beta_i,beta_j,type_l,type_m,type_n,faces,genus,symmetric\n",
            );
            for r in &records {
                let sp = &r.dessin.spec;
                let t = r.summary.dessin_type;
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                    sp.p,
                    sp.d,
                    sp.e,
                    sp.family,
                    opt(sp.f),
                    opt(sp.h),
                    r.dessin.alpha.i,
                    r.dessin.alpha.j,
                    r.dessin.beta.i,
                    r.dessin.beta.j,
                    t.0,
                    t.1,
                    t.2,
                    r.summary.faces,
                    r.summary.genus,
                    r.summary.symmetric.map(|b| b.to_string()).unwrap_or_default()
                );
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in &records {
                let _ = writeln!(
                    s,
                    "{:<14} alpha = {}, beta = {}  type {:?}  genus {}{}",
                    r.dessin.spec.to_string(),
                    r.dessin.alpha,
                    r.dessin.beta,
                    r.summary.dessin_type,
                    r.summary.genus,
                    match r.summary.symmetric {
                        Some(true) => "  symmetric",
                        _ => "",
                    }
                );
            }
            s
        }
    })
}

#[derive(Serialize)]
struct TableRow {
    p: u64,
    d: u32,
    e: u32,
    theorem: u64,
    computed: Option<u64>,
    #[serde(rename = "match")]
    matches: Option<bool>,
}

fn table_rows(config: &RunConfig, p: u64, max_de: u32) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for e in 0..=max_de {
        for d in 0..=e.min(max_de - e) {
            let theorem = theorem_formula(p, d, e);
            let (computed, matches) = if config.within_bound(p, d, e)? {
                let report = verify(p, d, e, &config.verify_options())?;
                (Some(report.reciprocal_classes), Some(report.matches))
            } else {
                (None, None)
            };
            rows.push(TableRow { p, d, e, theorem, computed, matches });
        }
    }
    Ok(rows)
}

/// Produces the output text for `config` and the resulting status.
pub fn render(config: &RunConfig) -> Result<(String, Status)> {
    config.validate()?;
    let status = |ok: bool| if ok { Status::Ok } else { Status::Mismatch };
    match config.command {
        Command::Specs { p, d, e } => {
            let specs = enumerate_specs(p, d, e)?;
            let text = match config.format {
                Format::Json => to_json(&specs),
                Format::Csv => {
                    let mut s = String::from("p,d,e,family,f,h,order\n");
                    for sp in &specs {
                        let _ = writeln!(
                            s,
                            "{},{},{},{},{},{},{}",
                            sp.p,
                            sp.d,
                            sp.e,
                            sp.family,
                            opt(sp.f),
                            opt(sp.h),
                            sp.order()
                        );
                    }
                    s
                }
                Format::Text => specs.iter().map(|s| format!("{s}\n")).collect(),
            };
            Ok((text, Status::Ok))
        }
        Command::Count { p, d, e } => {
            let rows = count_rows(config, p, d, e)?;
            let ok = rows.iter().all(|r| r.matches);
            let text = match config.format {
                Format::Json => to_json(&rows),
                Format::Csv => {
                    let mut s = format!("{CSV_HEADER}\n");
                    for r in &rows {
                        csv_row(&mut s, &r.spec, r.pairs, r.auts, r.nu.unwrap_or(0), r.nu_formula, r.matches);
                    }
                    s
                }
                Format::Text => rows
                    .iter()
                    .map(|r| {
                        format!(
                            "{:<14} pairs {:>10}  auts {:>10}  nu {:>5}  formula {:>5}  {}\n",
                            r.spec.to_string(),
                            r.pairs,
                            r.auts,
                            r.nu.map(|x| x.to_string()).unwrap_or_else(|| "-".into()),
                            r.nu_formula,
                            if r.matches { "ok" } else { "MISMATCH" }
                        )
                    })
                    .collect(),
            };
            Ok((text, status(ok)))
        }
        Command::Verify { p, d, e } => {
            let report = verify(p, d, e, &config.verify_options())?;
            Ok((render_report(&report, config.format), status(report.matches)))
        }
        Command::Dessin { p, d, e, adjacency } => {
            let report = verify(p, d, e, &config.verify_options())?;
            let text = render_dessins(config, &report, adjacency)?;
            Ok((text, status(report.matches)))
        }
        Command::Table { p, max_de } => {
            let rows = table_rows(config, p, max_de)?;
            let ok = rows.iter().all(|r| r.matches != Some(false));
            let text = match config.format {
                Format::Json => to_json(&rows),
                Format::Csv | Format::Text => {
                    let mut s = format!("{TABLE_CSV_HEADER}\n");
                    for r in &rows {
                        let _ = writeln!(
                            s,
                            "{},{},{},{},{},{}",
                            r.p,
                            r.d,
                            r.e,
                            r.theorem,
                            r.computed.map(|x| x.to_string()).unwrap_or_default(),
                            r.matches.map(|x| x.to_string()).unwrap_or_default()
                        );
                    }
                    if config.format == Format::Text {
                        s = s.replace(',', "\t");
                    }
                    s
                }
            };
            Ok((text, status(ok)))
        }
    }
}

/// Runs `config`, writing to `--out` or `stdout`. Returns the process exit code.
pub fn run(config: &RunConfig, stdout: &mut dyn Write) -> i32 {
    let result = match config.parallel {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidParameters(e.to_string()))
            .and_then(|pool| pool.install(|| render(config))),
        None => render(config),
    };
    let (text, status) = match result {
        Ok(x) => x,
        Err(err) => {
            eprintln!("error: {err}");
            return match err {
                Error::Falsified(_) => 1,
                _ => 2,
            };
        }
    };
    let written = match &config.out {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => stdout.write_all(text.as_bytes()),
    };
    if let Err(err) = written {
        eprintln!("error: {err}");
        return 2;
    }
    status.code()
}
