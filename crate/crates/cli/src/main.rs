use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use mapgerm::arith::parse_poly;
use mapgerm::boundary::{build_boundary, checksum, pairing_sigma10, BoundaryError, BoundaryResult, PairingData, SurgeryLedger};
use mapgerm::catalog::{self, CatalogEntry};
use mapgerm::germ::{c_weighted_homogeneous, compute_report, source_vars, GermError, InvariantReport, MapGerm, ReportOptions};
use mapgerm::input::{parse_germ_input, parse_pairing, GermInput};
use mapgerm::local::{Codim, LocalError, DEFAULT_DEGREE_CAP};
use mapgerm::plumbing::{graphs_equivalent, normalize, PlumbingError, PlumbingGraph};
use mapgerm::resolution::{resolve_curve, EmbeddedResolutionGraph, ResolutionError};
use mapgerm::verify::{entry_boundary, verify_entry, Status, VerifyOptions};
use mapgerm::MultiPoly;

/// Graphs larger than this are refused by `normalize`.
const NORMALIZE_LIMIT: usize = 5000;

#[derive(Parser)]
#[command(name = "mapgerm", version, about = "Invariants of map germs (C²,0) → (C³,0) and plumbing graphs of Milnor fibre boundaries")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args, Clone, Debug)]
struct Source {
    /// Built-in catalog entry (see `mapgerm list`).
    #[arg(long, conflicts_with_all = ["germ", "input"])]
    catalog: Option<String>,
    /// Germ components, e.g. "s; t^2; t^3 + s^2*t".
    #[arg(long, conflicts_with = "input")]
    germ: Option<String>,
    /// File in the germ input format (blocks or JSON).
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// C, T, image equation, double curve and the derived invariants.
    Invariants {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        degree_cap: u32,
    },
    /// Embedded resolution graph of a plane curve.
    Resolve {
        /// Comma-separated branches, e.g. "x, y^2 + x^3".
        #[arg(long, conflicts_with_all = ["catalog", "germ", "input"])]
        curve: Option<String>,
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        degree_cap: u32,
    },
    /// Plumbing graph of the boundary of the Milnor fibre of the image.
    Boundary {
        #[command(flatten)]
        source: Source,
        /// Comma-separated double-curve branches in (s, t).
        #[arg(long)]
        curve: Option<String>,
        /// File with a `pairing { … }` block.
        #[arg(long)]
        pairing: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Compare with the catalog's expected graph.
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        degree_cap: u32,
    },
    /// Normalize a plumbing graph file ("-" reads stdin).
    Normalize {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check every catalog entry against its expected data.
    VerifyAll {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        degree_cap: u32,
    },
    /// List the catalog.
    List,
}

/// An error together with its exit code.
struct Failure {
    code: u8,
    msg: String,
}

fn input_error(e: impl std::fmt::Display) -> Failure {
    Failure { code: 2, msg: e.to_string() }
}

fn resource_error(e: impl std::fmt::Display) -> Failure {
    Failure { code: 3, msg: e.to_string() }
}

fn local_failure(e: &LocalError) -> Failure {
    match e {
        LocalError::Undecided { .. } => resource_error(e),
        _ => input_error(e),
    }
}

fn germ_failure(e: GermError) -> Failure {
    match &e {
        GermError::Local(l) => local_failure(l),
        _ => input_error(e),
    }
}

fn resolution_failure(e: ResolutionError) -> Failure {
    match &e {
        ResolutionError::TooManyBlowUps(_) => resource_error(e),
        ResolutionError::Local(l) => local_failure(l),
        _ => input_error(e),
    }
}

fn boundary_failure(e: BoundaryError) -> Failure {
    match e {
        BoundaryError::Resolution(r) => resolution_failure(r),
        BoundaryError::Local(l) => local_failure(&l),
        e => input_error(e),
    }
}

fn plumbing_failure(e: PlumbingError) -> Failure {
    match e {
        PlumbingError::TooLarge(_) => resource_error(e),
        e => input_error(e),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| input_error(format!("stdin: {e}")))
    } else {
        std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
    }
}

fn lookup(name: &str) -> Result<CatalogEntry, Failure> {
    catalog::lookup(name).ok_or_else(|| input_error(format!("unknown catalog entry `{name}`; try `mapgerm list`")))
}

fn to_json(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

/// What a source resolves to.
enum Resolved {
    Entry(Box<CatalogEntry>),
    Input(GermInput),
}

fn resolve_source(src: &Source) -> Result<Resolved, Failure> {
    if let Some(name) = &src.catalog {
        return Ok(Resolved::Entry(Box::new(lookup(name)?)));
    }
    if let Some(g) = &src.germ {
        return Ok(Resolved::Input(parse_germ_input(g).map_err(input_error)?));
    }
    if let Some(path) = &src.input {
        return Ok(Resolved::Input(parse_germ_input(&read(path)?).map_err(input_error)?));
    }
    Err(input_error("give one of --catalog, --germ or --input"))
}

fn parse_curve(text: &str, vars_st: bool) -> Result<Vec<MultiPoly>, Failure> {
    text.split(',')
        .map(|b| {
            let b = b.trim();
            let parsed = if vars_st {
                parse_poly(b, &source_vars())
            } else {
                mapgerm::arith::parse_poly_auto(b, &["x", "y"])
            };
            parsed.map_err(|e| input_error(format!("branch `{b}`: {e}")))
        })
        .collect()
}

fn report_for(germ: &MapGerm, lambda: Option<mapgerm::PolyMatrix>, cap: u32) -> Result<InvariantReport, Failure> {
    let opts = ReportOptions { degree_cap: cap, lambda, ..Default::default() };
    compute_report(germ, &opts).map_err(germ_failure)
}

fn undecided(r: &InvariantReport) -> bool {
    matches!(r.c, Codim::Undecided { .. }) || matches!(r.t, Some(Codim::Undecided { .. }))
}

fn cmd_invariants(src: &Source, format: Format, cap: u32) -> Result<u8, Failure> {
    let (germ, lambda, entry) = match resolve_source(src)? {
        Resolved::Entry(e) => (e.germ.clone(), e.lambda.clone(), Some(e)),
        Resolved::Input(i) => (Some(i.germ), None, None),
    };
    let Some(germ) = germ else {
        // known only through weights
        let e = entry.expect("catalog entry");
        let [w1, w2, d1, d2, d3] = e.weights.expect("weights");
        let c = c_weighted_homogeneous(w1, w2, d1, d2, d3).map_err(input_error)?;
        let value = serde_json::json!({
            "germ": null, "C": c, "Omega": -(c as i64),
            "flags": { "C": format!("weighted-homogeneous formula, weights ({w1},{w2}), degrees ({d1},{d2},{d3})") },
        });
        match format {
            Format::Json => print!("{}", to_json(&value)),
            _ => print!("germ: -\nC: {c}\nOmega: {}\nflag C: {}\n", -(c as i64), value["flags"]["C"].as_str().unwrap()),
        }
        return Ok(0);
    };
    let r = report_for(&germ, lambda, cap)?;
    match format {
        Format::Json => print!("{}", to_json(&r)),
        Format::Text => print!("{}", r.to_text()),
        Format::Dot => return Err(input_error("invariants has no DOT form")),
    }
    Ok(if undecided(&r) { 3 } else { 0 })
}

fn emit_resolution(g: &EmbeddedResolutionGraph, format: Format) {
    match format {
        Format::Text => print!("{}", g.to_text()),
        Format::Dot => print!("{}", g.to_dot()),
        Format::Json => print!("{}", to_json(&serde_json::json!({ "graph": g.to_plumbing(), "resolution": g }))),
    }
}

fn double_curve_of(germ: &MapGerm, cap: u32) -> Result<MultiPoly, Failure> {
    let r = report_for(germ, None, cap)?;
    let d = r.double_curve_d.ok_or_else(|| {
        input_error(format!("no double curve: {}", r.flags.get("double_curve_d").cloned().unwrap_or_default()))
    })?;
    let d = parse_poly(&d, &source_vars()).map_err(input_error)?;
    if d.is_constant() {
        return Err(input_error("the double curve is empty"));
    }
    Ok(d)
}

fn cmd_resolve(curve: Option<&str>, src: &Source, format: Format, cap: u32) -> Result<u8, Failure> {
    let branches = match curve {
        Some(c) => parse_curve(c, false)?,
        None => match resolve_source(src)? {
            Resolved::Entry(e) => match (&e.curve, &e.germ) {
                (Some(c), _) => c.branches.clone(),
                (None, Some(g)) => vec![double_curve_of(g, cap)?],
                (None, None) => return Err(input_error(format!("`{}` has no germ", e.name))),
            },
            Resolved::Input(i) => match i.branches {
                Some(b) => b,
                None => vec![double_curve_of(&i.germ, cap)?],
            },
        },
    };
    let g = resolve_curve(&branches).map_err(resolution_failure)?;
    emit_resolution(&g, format);
    Ok(0)
}

fn ledger_text(pairing: &PairingData, ledger: &SurgeryLedger) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# sigma: {}", pairing.sigma_text());
    for c in &ledger.classes {
        let members: Vec<String> = c.branches.iter().map(|i| (i + 1).to_string()).collect();
        let _ = write!(s, "# class {{{}}}: m = {:?}", members.join(","), c.mult);
        if let Some(l) = &c.lambda {
            let _ = write!(s, ", lambda = {l:?}");
        }
        if let Some(v) = c.v {
            let _ = write!(s, ", v = {v}");
        }
        let _ = writeln!(s, ", vi = {}, alpha = {}", c.vi, c.alpha);
    }
    s
}

struct BoundaryRun {
    pairing: PairingData,
    result: BoundaryResult,
    /// C when it is known, for the checksum.
    c: Option<u64>,
    sigma10: bool,
    expected: Vec<PlumbingGraph>,
}

fn boundary_run(src: &Source, curve: Option<&str>, pairing_file: Option<&Path>, cap: u32) -> Result<BoundaryRun, Failure> {
    let user_pairing = pairing_file.map(|p| parse_pairing(&read(p)?).map_err(input_error)).transpose()?;
    let user_curve = curve.map(|c| parse_curve(c, true)).transpose()?;
    match resolve_source(src)? {
        Resolved::Entry(e) if user_pairing.is_none() && user_curve.is_none() => {
            let (pairing, result) = entry_boundary(&e)
                .ok_or_else(|| input_error(format!("`{}` has no double-curve data", e.name)))?
                .map_err(boundary_failure)?;
            Ok(BoundaryRun { pairing, result, c: e.expected_c.finite(), sigma10: e.is_sigma10(), expected: e.expected_boundary.clone() })
        }
        resolved => {
            let (germ, branches, pairing, expected) = match resolved {
                Resolved::Entry(e) => {
                    let g = e.germ.clone().ok_or_else(|| input_error(format!("`{}` has no germ", e.name)))?;
                    (g, e.curve.as_ref().map(|c| c.branches.clone()), None, e.expected_boundary.clone())
                }
                Resolved::Input(i) => (i.germ, i.branches, i.pairing, Vec::new()),
            };
            let branches = match user_curve.or(branches) {
                Some(b) => b,
                None => vec![double_curve_of(&germ, cap)?],
            };
            let sigma10 = germ.sigma10_curve().is_some();
            let pairing = match user_pairing.or(pairing) {
                Some(p) => p,
                None if sigma10 => pairing_sigma10(&germ, &branches).map_err(boundary_failure)?,
                None => return Err(input_error("not a (s, t², t·d(s, t²)) germ: supply pairing data with --pairing")),
            };
            let result = build_boundary(&branches, &pairing).map_err(|e| match e {
                BoundaryError::LocallyReducible(_) => {
                    input_error(format!("{e}; list the branches of the double curve with --curve"))
                }
                e => boundary_failure(e),
            })?;
            let c = report_for(&germ, None, cap).ok().and_then(|r| r.c.finite());
            Ok(BoundaryRun { pairing, result, c, sigma10, expected })
        }
    }
}

fn cmd_boundary(src: &Source, curve: Option<&str>, pairing: Option<&Path>, format: Format, check: bool, cap: u32) -> Result<u8, Failure> {
    let run = boundary_run(src, curve, pairing, cap)?;
    if check && run.expected.is_empty() {
        return Err(input_error("--check needs a catalog entry with an expected graph"));
    }
    let sum = run.c.filter(|_| run.sigma10).map(|c| checksum(&run.result.ledger, c));
    let mut checks = Vec::new();
    let mut code = 0;
    if check {
        for (k, want) in run.expected.iter().enumerate() {
            let verdict = match graphs_equivalent(&run.result.graph, want) {
                Ok(true) => "PASS",
                Ok(false) => {
                    code = code.max(1);
                    "FAIL"
                }
                Err(e) => {
                    code = 3;
                    eprintln!("check #{}: {e}", k + 1);
                    "UNDECIDED"
                }
            };
            checks.push((k + 1, verdict));
        }
    }
    match format {
        Format::Text => {
            let mut out = ledger_text(&run.pairing, &run.result.ledger);
            if let Some(cs) = &sum {
                let _ = writeln!(out, "# checksum: {} = {} ({})", cs.lhs, cs.rhs, if cs.holds { "holds" } else { "fails" });
            }
            out.push_str(&run.result.graph.to_text());
            for (k, v) in &checks {
                let _ = writeln!(out, "# check #{k}: {v}");
            }
            print!("{out}");
        }
        Format::Dot => print!("{}", run.result.graph.to_dot()),
        Format::Json => {
            let checks: Vec<_> = checks.iter().map(|(k, v)| serde_json::json!({ "expected": k, "result": v })).collect();
            print!(
                "{}",
                to_json(&serde_json::json!({
                    "sigma": run.pairing.sigma_text(),
                    "ledger": run.result.ledger,
                    "checksum": sum,
                    "graph": run.result.graph,
                    "checks": checks,
                }))
            );
        }
    }
    Ok(code)
}

fn cmd_normalize(file: &Path, format: Format) -> Result<u8, Failure> {
    let g = PlumbingGraph::parse_text(&read(file)?).map_err(plumbing_failure)?;
    if g.vertex_count() > NORMALIZE_LIMIT {
        return Err(resource_error(format!("graph has {} vertices, more than the supported {NORMALIZE_LIMIT}", g.vertex_count())));
    }
    let n = normalize(&g);
    match format {
        Format::Text => print!("{}", n.to_text()),
        Format::Dot => print!("{}", n.to_dot()),
        Format::Json => print!("{}", to_json(&n)),
    }
    Ok(0)
}

fn cmd_verify_all(format: Format, cap: u32) -> Result<u8, Failure> {
    let entries = catalog::catalog();
    let opts = VerifyOptions { degree_cap: cap };
    let verdicts: Vec<_> = entries.par_iter().map(|e| verify_entry(e, &opts)).collect();
    let count = |s: Status| verdicts.iter().filter(|v| v.status() == s).count();
    let (pass, fail, undecided) = (count(Status::Pass), count(Status::Fail), count(Status::Undecided));
    match format {
        Format::Json => print!("{}", to_json(&verdicts)),
        Format::Text => {
            let mut out = String::new();
            for v in &verdicts {
                let tag = match v.status() {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::Undecided => "UNDECIDED",
                };
                let _ = writeln!(out, "{tag:9} {:14} {} checks", v.entry, v.checks.len());
                for c in v.checks.iter().filter(|c| c.status != Status::Pass) {
                    let _ = writeln!(out, "          {}: {:?} {}", c.name, c.status, c.detail);
                }
            }
            let _ = writeln!(out, "{} entries: {pass} pass, {fail} fail, {undecided} undecided", verdicts.len());
            print!("{out}");
        }
        Format::Dot => return Err(input_error("verify-all has no DOT form")),
    }
    Ok(if fail > 0 {
        1
    } else if undecided > 0 {
        3
    } else {
        0
    })
}

fn cmd_list() -> Result<u8, Failure> {
    for e in catalog::catalog() {
        let germ = e.germ.as_ref().map(|g| g.to_string()).unwrap_or_else(|| "-".into());
        println!("{:14} {:10} {}", e.name, e.family, germ);
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.cmd {
        Cmd::Invariants { source, format, degree_cap } => cmd_invariants(&source, format, degree_cap),
        Cmd::Resolve { curve, source, format, degree_cap } => cmd_resolve(curve.as_deref(), &source, format, degree_cap),
        Cmd::Boundary { source, curve, pairing, format, check, degree_cap } => {
            cmd_boundary(&source, curve.as_deref(), pairing.as_deref(), format, check, degree_cap)
        }
        Cmd::Normalize { file, format } => cmd_normalize(&file, format),
        Cmd::VerifyAll { format, degree_cap } => cmd_verify_all(format, degree_cap),
        Cmd::List => cmd_list(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
