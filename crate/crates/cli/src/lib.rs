//! Command-line front end for the geodetic toolkit: digraph verification,
//! quotient analysis, feasibility scans, and exhaustive searches.
//!
//! Every subcommand produces a [`RunReport`], printed either as flat
//! `key: value` text or, with `--json`, as a JSON document that
//! deserialises back into the same report. Exit status follows a fixed
//! contract: 0 when every requested check passes, 1 when a check fails,
//! 2 on usage or input errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use geodetic::certificates::{
    check_charpoly_form, check_trace_bound, check_trace_identities, check_walk_identity,
    exceptional_pairs, exceptional_pairs_csv, inequality_one_report, inequality_two_parts,
    outlier_regular_filter, type_a_filter, type_b_filter, CertificateReport,
};
use geodetic::geodecity::verify_automorphism;
use geodetic::perm::{OrbitPartition, Permutation};
use geodetic::quotient::{check_representative_walks, equitable_check, QuotientPseudodigraph};
use geodetic::search::{generate, write_results, SearchConfig, SearchManifest};
use geodetic::{
    excess, is_k_geodetic, outlier_map, parse_arc_list, quotient, Digraph, GeodecityReport, Int,
};

/// Toolkit for k-geodetic digraphs near the directed Moore bound.
#[derive(Parser, Debug)]
#[command(name = "geodetic", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check regularity, geodecity, and excess of an arc-list digraph.
    ///
    /// When the excess is one, the full certificate chain also runs:
    /// outlier map, automorphism and orbit structure, quotient
    /// construction, and the spectral and trace checks.
    Verify(VerifyArgs),
    /// Build the orbit quotient of a digraph and check it.
    Quotient(QuotientArgs),
    /// Scan a parameter window and table the surviving pairs.
    Bounds(BoundsArgs),
    /// Exhaustively generate k-geodetic digraphs of a fixed order.
    Search(SearchArgs),
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Arc-list file: first line the vertex count, then `tail head` lines.
    pub file: PathBuf,
    /// Required out-degree of every vertex.
    #[arg(long)]
    pub d: u32,
    /// Geodecity parameter.
    #[arg(long)]
    pub k: u32,
    /// Fail unless the computed excess equals this value.
    #[arg(long = "expect-excess")]
    pub expect_excess: Option<String>,
    /// Emit the report as JSON instead of key-value text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct QuotientArgs {
    /// Arc-list file.
    pub file: PathBuf,
    /// Out-degree; required with `--partition auto`.
    #[arg(long)]
    pub d: Option<u32>,
    /// Geodecity parameter; required with `--partition auto`, optional
    /// with a partition file (it enables the certificate chain).
    #[arg(long)]
    pub k: Option<u32>,
    /// `auto` (outlier orbits of an excess-one digraph) or the path of a
    /// partition file: one class per line, space-separated vertex indices.
    #[arg(long, default_value = "auto")]
    pub partition: String,
    /// Emit the report as JSON instead of key-value text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    /// Largest out-degree scanned (at least 12).
    #[arg(long, default_value_t = 50)]
    pub dmax: u32,
    /// Largest k scanned (at least 10).
    #[arg(long, default_value_t = 50)]
    pub kmax: u32,
    /// Also write the scan table as CSV to this path.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Emit the report as JSON instead of key-value text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    /// Out-degree of every vertex.
    #[arg(long)]
    pub d: u32,
    /// Geodecity parameter.
    #[arg(long)]
    pub k: u32,
    /// Number of vertices.
    #[arg(long)]
    pub order: usize,
    /// Require in-degree d as well.
    #[arg(long)]
    pub diregular: bool,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    pub shards: usize,
    /// Stop after this many attempted arc additions.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Write witnesses and a manifest into this directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Exit nonzero when the search was truncated by the budget.
    #[arg(long = "require-exhaustive")]
    pub require_exhaustive: bool,
    /// Emit the report as JSON instead of key-value text.
    #[arg(long)]
    pub json: bool,
}

impl Cli {
    /// Whether the selected subcommand asked for JSON output.
    pub fn json_requested(&self) -> bool {
        match &self.command {
            Command::Verify(a) => a.json,
            Command::Quotient(a) => a.json,
            Command::Bounds(a) => a.json,
            Command::Search(a) => a.json,
        }
    }
}

/// Usage or input failure; printed on stderr with exit status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Excess-one structure around the outlier automorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureSection {
    pub outlier_images: Vec<usize>,
    pub orbit_sizes: Vec<usize>,
    pub automorphism_ok: bool,
    pub structure_valid: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure_violation: Option<String>,
}

/// Quotient matrix plus the equitable verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientSection {
    pub quotient: QuotientPseudodigraph,
    pub equitable: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equitable_violation: Option<String>,
}

/// One row of the bounds table: both sides of the parameter-free
/// inequality plus the three structural filter verdicts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub d: u32,
    pub k: u32,
    pub lhs: String,
    pub rhs: String,
    pub outlier_regular_feasible: bool,
    pub type_a_feasible: bool,
    pub type_b_feasible: bool,
}

/// Search outcome; witnesses inlined as arc-list texts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSection {
    pub mode: String,
    pub witness_count: usize,
    pub complete: bool,
    pub nodes_explored: u64,
    pub witnesses: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<SearchManifest>,
}

/// Structured result of one CLI run; `--json` emits exactly this.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub subcommand: String,
    pub inputs: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geodecity: Option<GeodecityReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient: Option<QuotientSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<CertificateReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bounds: Vec<BoundsRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchSection>,
    pub exit_status: i32,
}

/// Dispatches the parsed command line; `Err` means exit status 2.
pub fn run(cli: &Cli) -> Result<RunReport, UsageError> {
    match &cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Quotient(args) => cmd_quotient(args),
        Command::Bounds(args) => cmd_bounds(args),
        Command::Search(args) => cmd_search(args),
    }
}

fn load_digraph(path: &Path) -> Result<Digraph, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    parse_arc_list(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

/// Runs the full excess-one certificate chain; returns the sections and
/// whether everything passed.
fn excess_one_chain(
    g: &Digraph,
    d: u32,
    k: u32,
    map: &Permutation,
) -> (
    StructureSection,
    Option<QuotientSection>,
    Vec<CertificateReport>,
    bool,
) {
    let automorphism_ok = verify_automorphism(g, map).is_ok();
    let part = map.orbits();
    let structure_result = part.permutation_structure().validate_excess_one();
    let structure = StructureSection {
        outlier_images: map.images().to_vec(),
        orbit_sizes: part.sizes(),
        automorphism_ok,
        structure_valid: structure_result.is_ok(),
        structure_violation: structure_result.err().map(|v| v.to_string()),
    };
    let mut pass = automorphism_ok && structure.structure_valid;

    let mut certificates = Vec::new();
    let quotient_section = match quotient(g, &part) {
        Ok(q) => {
            certificates.push(check_walk_identity(&q, k));
            certificates.push(check_charpoly_form(&q, k));
            certificates.push(check_trace_identities(&q, k));
            certificates.push(check_trace_bound(&q, k));
            certificates.push(check_representative_walks(g, k, &part));
            let w = q.class_count() as u64;
            if (w - 1).is_multiple_of(u64::from(k)) {
                certificates.push(inequality_one_report(d, k, (w - 1) / u64::from(k)));
            }
            let eq = equitable_check(g, &part);
            pass &= eq.is_ok();
            Some(QuotientSection {
                quotient: q,
                equitable: eq.is_ok(),
                equitable_violation: eq.err().map(|v| v.to_string()),
            })
        }
        Err(_) => {
            pass = false;
            None
        }
    };
    pass &= certificates.iter().all(|c| c.pass);
    (structure, quotient_section, certificates, pass)
}

fn cmd_verify(args: &VerifyArgs) -> Result<RunReport, UsageError> {
    let g = load_digraph(&args.file)?;
    let expect_excess = args
        .expect_excess
        .as_deref()
        .map(|s| {
            s.parse::<Int>()
                .map_err(|_| UsageError(format!("--expect-excess {s}: not an integer")))
        })
        .transpose()?;

    let mut inputs = BTreeMap::new();
    inputs.insert("file".to_string(), args.file.display().to_string());
    inputs.insert("d".to_string(), args.d.to_string());
    inputs.insert("k".to_string(), args.k.to_string());

    let geodecity = is_k_geodetic(&g, args.k);
    let out_regular = g.is_out_regular(args.d);
    inputs.insert("out_regular".to_string(), out_regular.to_string());
    inputs.insert(
        "diregular".to_string(),
        g.is_diregular(args.d).to_string(),
    );
    let mut pass = out_regular && geodecity.is_geodetic;

    let computed_excess = if pass {
        excess(&g, args.d, args.k).ok()
    } else {
        None
    };
    if let Some(want) = &expect_excess {
        let matches = computed_excess.as_ref() == Some(want);
        inputs.insert("expected_excess".to_string(), want.to_string());
        inputs.insert("excess_matches".to_string(), matches.to_string());
        pass &= matches;
    }

    let mut structure = None;
    let mut quotient_section = None;
    let mut certificates = Vec::new();
    if computed_excess == Some(Int::from(1)) {
        match outlier_map(&g, args.d, args.k) {
            Ok(map) => {
                let (s, q, c, chain_pass) = excess_one_chain(&g, args.d, args.k, &map);
                structure = Some(s);
                quotient_section = q;
                certificates = c;
                pass &= chain_pass;
            }
            Err(e) => {
                inputs.insert("outlier_error".to_string(), e.to_string());
                pass = false;
            }
        }
    }

    Ok(RunReport {
        subcommand: "verify".to_string(),
        inputs,
        geodecity: Some(geodecity),
        structure,
        quotient: quotient_section,
        certificates,
        bounds: Vec::new(),
        search: None,
        exit_status: i32::from(!pass),
    })
}

/// Parses a partition file: one class per line as space-separated vertex
/// indices; blank lines and `#` comments are skipped.
pub fn parse_partition(text: &str, n: usize) -> Result<OrbitPartition, UsageError> {
    let mut classes = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut class = Vec::new();
        for token in line.split_whitespace() {
            let v: usize = token.parse().map_err(|_| {
                UsageError(format!(
                    "partition line {}: `{token}` is not a vertex index",
                    idx + 1
                ))
            })?;
            class.push(v);
        }
        classes.push(class);
    }
    OrbitPartition::from_classes(n, classes).map_err(|e| UsageError(e.to_string()))
}

fn cmd_quotient(args: &QuotientArgs) -> Result<RunReport, UsageError> {
    let g = load_digraph(&args.file)?;
    let mut inputs = BTreeMap::new();
    inputs.insert("file".to_string(), args.file.display().to_string());
    inputs.insert("partition".to_string(), args.partition.clone());
    if let Some(d) = args.d {
        inputs.insert("d".to_string(), d.to_string());
    }
    if let Some(k) = args.k {
        inputs.insert("k".to_string(), k.to_string());
    }

    if args.partition == "auto" {
        let (d, k) = match (args.d, args.k) {
            (Some(d), Some(k)) => (d, k),
            _ => {
                return Err(UsageError(
                    "--partition auto needs --d and --k".to_string(),
                ))
            }
        };
        let geodecity = is_k_geodetic(&g, k);
        let computed_excess = if g.is_out_regular(d) && geodecity.is_geodetic {
            excess(&g, d, k).ok()
        } else {
            None
        };
        inputs.insert(
            "excess".to_string(),
            computed_excess
                .as_ref()
                .map_or("undefined".to_string(), |e| e.to_string()),
        );
        if computed_excess != Some(Int::from(1)) {
            inputs.insert(
                "error".to_string(),
                "not an excess-one digraph; orbit partition undefined".to_string(),
            );
            return Ok(RunReport {
                subcommand: "quotient".to_string(),
                inputs,
                geodecity: Some(geodecity),
                structure: None,
                quotient: None,
                certificates: Vec::new(),
                bounds: Vec::new(),
                search: None,
                exit_status: 1,
            });
        }
        let map = outlier_map(&g, d, k).map_err(|e| UsageError(e.to_string()))?;
        let (structure, quotient_section, certificates, pass) = excess_one_chain(&g, d, k, &map);
        return Ok(RunReport {
            subcommand: "quotient".to_string(),
            inputs,
            geodecity: Some(geodecity),
            structure: Some(structure),
            quotient: quotient_section,
            certificates,
            bounds: Vec::new(),
            search: None,
            exit_status: i32::from(!pass),
        });
    }

    // Explicit partition file: quotient plus equitable check, with the
    // certificate chain added when k is supplied.
    let text = std::fs::read_to_string(&args.partition)
        .map_err(|e| UsageError(format!("{}: {e}", args.partition)))?;
    let part = parse_partition(&text, g.order())?;
    if let Some(d) = args.d {
        if !g.is_out_regular(d) {
            return Err(UsageError(format!("digraph is not out-regular of degree {d}")));
        }
    }
    let q = quotient(&g, &part).map_err(|e| UsageError(e.to_string()))?;
    let eq = equitable_check(&g, &part);
    let mut pass = eq.is_ok();
    let mut certificates = Vec::new();
    if let Some(k) = args.k {
        certificates.push(check_walk_identity(&q, k));
        certificates.push(check_charpoly_form(&q, k));
        certificates.push(check_trace_identities(&q, k));
        certificates.push(check_trace_bound(&q, k));
        certificates.push(check_representative_walks(&g, k, &part));
        pass &= certificates.iter().all(|c| c.pass);
    }
    Ok(RunReport {
        subcommand: "quotient".to_string(),
        inputs,
        geodecity: None,
        structure: None,
        quotient: Some(QuotientSection {
            quotient: q,
            equitable: eq.is_ok(),
            equitable_violation: eq.err().map(|v| v.to_string()),
        }),
        certificates,
        bounds: Vec::new(),
        search: None,
        exit_status: i32::from(!pass),
    })
}

fn cmd_bounds(args: &BoundsArgs) -> Result<RunReport, UsageError> {
    let pairs = exceptional_pairs(args.dmax, args.kmax).map_err(|e| UsageError(e.to_string()))?;
    let mut inputs = BTreeMap::new();
    inputs.insert("dmax".to_string(), args.dmax.to_string());
    inputs.insert("kmax".to_string(), args.kmax.to_string());

    let mut rows = Vec::new();
    let mut pass = true;
    for (d, k) in pairs {
        let (lhs, rhs) = inequality_two_parts(d, k);
        let row = BoundsRow {
            d,
            k,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            outlier_regular_feasible: outlier_regular_filter(d, k).feasible,
            type_a_feasible: type_a_filter(d, k).feasible,
            type_b_feasible: type_b_filter(d, k).feasible,
        };
        pass &= !row.outlier_regular_feasible && !row.type_a_feasible && !row.type_b_feasible;
        rows.push(row);
    }

    if let Some(path) = &args.csv {
        let csv =
            exceptional_pairs_csv(args.dmax, args.kmax).map_err(|e| UsageError(e.to_string()))?;
        std::fs::write(path, csv).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
        inputs.insert("csv".to_string(), path.display().to_string());
    }

    Ok(RunReport {
        subcommand: "bounds".to_string(),
        inputs,
        geodecity: None,
        structure: None,
        quotient: None,
        certificates: Vec::new(),
        bounds: rows,
        search: None,
        exit_status: i32::from(!pass),
    })
}

fn cmd_search(args: &SearchArgs) -> Result<RunReport, UsageError> {
    let mut cfg = SearchConfig::new(args.d, args.k, args.order);
    if args.diregular {
        cfg = cfg.diregular();
    }
    cfg.shards = args.shards;
    cfg.node_budget = args.budget;

    let mut inputs = BTreeMap::new();
    inputs.insert("d".to_string(), args.d.to_string());
    inputs.insert("k".to_string(), args.k.to_string());
    inputs.insert("order".to_string(), args.order.to_string());
    inputs.insert("mode".to_string(), cfg.mode.to_string());
    inputs.insert("shards".to_string(), args.shards.to_string());
    if let Some(budget) = args.budget {
        inputs.insert("budget".to_string(), budget.to_string());
    }

    let result = generate(&cfg).map_err(|e| UsageError(e.to_string()))?;
    let manifest = match &args.out {
        Some(dir) => {
            inputs.insert("out".to_string(), dir.display().to_string());
            Some(
                write_results(dir, &cfg, &result)
                    .map_err(|e| UsageError(format!("{}: {e}", dir.display())))?,
            )
        }
        None => None,
    };

    let pass = result.complete || !args.require_exhaustive;
    Ok(RunReport {
        subcommand: "search".to_string(),
        inputs,
        geodecity: None,
        structure: None,
        quotient: None,
        certificates: Vec::new(),
        bounds: Vec::new(),
        search: Some(SearchSection {
            mode: cfg.mode.to_string(),
            witness_count: result.witnesses.len(),
            complete: result.complete,
            nodes_explored: result.nodes_explored,
            witnesses: result.witnesses.iter().map(|g| g.to_arc_list()).collect(),
            manifest,
        }),
        exit_status: i32::from(!pass),
    })
}

fn join_usize(values: &[usize]) -> String {
    values
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Flat `key: value` rendering of a report, one line per fact.
pub fn render_human(report: &RunReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("subcommand: {}\n", report.subcommand));
    for (key, value) in &report.inputs {
        out.push_str(&format!("{key}: {value}\n"));
    }
    if let Some(g) = &report.geodecity {
        out.push_str(&g.to_key_value_text());
    }
    if let Some(s) = &report.structure {
        out.push_str(&format!("outlier: {}\n", join_usize(&s.outlier_images)));
        out.push_str(&format!("orbit_sizes: {}\n", join_usize(&s.orbit_sizes)));
        out.push_str(&format!("automorphism_ok: {}\n", s.automorphism_ok));
        out.push_str(&format!("structure_valid: {}\n", s.structure_valid));
        if let Some(v) = &s.structure_violation {
            out.push_str(&format!("structure_violation: {v}\n"));
        }
    }
    if let Some(q) = &report.quotient {
        out.push_str("quotient_matrix:\n");
        out.push_str(&q.quotient.to_text());
        out.push_str(&format!(
            "orbit_sizes: {}\n",
            join_usize(q.quotient.orbit_sizes())
        ));
        out.push_str(&format!(
            "equitable: {}\n",
            if q.equitable { "pass" } else { "fail" }
        ));
        if let Some(v) = &q.equitable_violation {
            out.push_str(&format!("equitable_violation: {v}\n"));
        }
    }
    for c in &report.certificates {
        out.push_str(&format!(
            "{}: {}\n",
            c.check,
            if c.pass { "pass" } else { "fail" }
        ));
        if let Some(w) = &c.witness {
            out.push_str(&format!("{}_witness: {w}\n", c.check));
        }
    }
    if !report.bounds.is_empty() {
        out.push_str(&format!("pairs: {}\n", report.bounds.len()));
        out.push_str("d k lhs rhs outlier_regular type_a type_b\n");
        let verdict = |feasible: bool| if feasible { "feasible" } else { "infeasible" };
        for r in &report.bounds {
            out.push_str(&format!(
                "{} {} {} {} {} {} {}\n",
                r.d,
                r.k,
                r.lhs,
                r.rhs,
                verdict(r.outlier_regular_feasible),
                verdict(r.type_a_feasible),
                verdict(r.type_b_feasible),
            ));
        }
    }
    if let Some(s) = &report.search {
        out.push_str(&format!("witness_count: {}\n", s.witness_count));
        out.push_str(&format!("complete: {}\n", s.complete));
        out.push_str(&format!("nodes_explored: {}\n", s.nodes_explored));
        out.push_str(&format!(
            "summary: {} digraphs, {}\n",
            s.witness_count,
            if s.complete { "exhaustive" } else { "truncated" }
        ));
        if let Some(m) = &s.manifest {
            out.push_str(&format!("files_written: {}\n", m.files.len()));
        }
    }
    out.push_str(&format!("exit: {}\n", report.exit_status));
    out
}
