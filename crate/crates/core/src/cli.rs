//! The `unital-iso` command line: construct designs, search arcs, bound and
//! certify isoperimetric numbers, verify certificates, export graphs.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 bad input or inadmissible
//! parameters, 3 budget exhausted.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::arc::{find_arc, greedy_arc, SearchMode, DEFAULT_GREEDY_RESTARTS};
use crate::bounds::{
    audit_lowerbound_machinery, construct_extremal_set, floor_c, theorem1_bounds, theorem2_value,
    verify_certificate, AuditOptions, AuditReport, BoundReport, Certificate, DesignRef,
};
use crate::design::{admissible_bm_pairs, construct_bm, construct_hermitian, construct_order2_unital, Design, Provenance};
use crate::error::Error;
use crate::field::FieldCtx;
use crate::iso::{
    brute_force_iso, build_graph, heuristic_iso, BruteOptions, Flavor, HeuristicOptions, IsoResult, IsoResultFile,
};
use crate::manifest::RunManifest;
use crate::plane::ProjectivePlane;
use crate::rational::{serialize_exact, ExactValue};
use crate::Rational;

const DEFAULT_EXACT_NODES: u64 = 1 << 32;

#[derive(Debug, Parser)]
#[command(name = "unital-iso", version, about = "Unitals, 2-designs and vertex-isoperimetric numbers")]
pub struct Cli {
    /// Worker threads for the search kernels (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write a run manifest to this path.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    /// Record wall-clock time in the manifest (makes it run-dependent).
    #[arg(long, global = true)]
    pub record_timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build and validate a design file.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// List admissible Buekenhout-Metz pairs (alpha, beta) for a given q.
    BmScan {
        #[arg(long)]
        q: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Arc search, bounds and an extremal certificate for a unital.
    Bounds(BoundsArgs),
    /// Isoperimetric number of the (non-)incidence graph.
    Iso(IsoArgs),
    /// Recheck a certificate against a design file.
    Verify { certificate: PathBuf, design: PathBuf },
    /// Export a graph or a projective plane.
    Export {
        #[command(subcommand)]
        what: ExportKind,
    },
    /// Audit the lower-bound inequalities for a range of orders.
    Audit {
        #[arg(long)]
        n: u64,
        /// Last order audited (default: n).
        #[arg(long)]
        to: Option<u64>,
        #[arg(long, default_value_t = 12)]
        exhaustive_limit: u64,
        #[arg(long, default_value_t = 200_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Re-run the command recorded in a manifest and compare output hashes.
    Replay { manifest: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum ConstructKind {
    Hermitian {
        #[arg(long)]
        q: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    Bm {
        #[arg(long)]
        q: u64,
        /// Index of alpha in GF(q^2).
        #[arg(long)]
        alpha: u64,
        #[arg(long)]
        beta: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    Order2 {
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// PG(2, order) as a 2-design.
    Plane {
        #[arg(long)]
        order: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Validate an external block list and re-emit it.
    Import {
        input: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    Complement {
        input: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExportKind {
    Graph {
        design: PathBuf,
        #[arg(long, default_value = "incidence")]
        flavor: Flavor,
        #[arg(long, value_enum, default_value_t = GraphFormat::Json)]
        format: GraphFormat,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// PG(2, order) with coordinates and incidences.
    Plane {
        #[arg(long)]
        order: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GraphFormat {
    Json,
    Dimacs,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    pub design: PathBuf,
    /// Arc size to search for (capped at floor c(n), at least 3).
    #[arg(long)]
    pub arc_target: Option<u64>,
    /// Branch-and-bound instead of randomized greedy.
    #[arg(long)]
    pub exact_arc: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Greedy restarts, or branch-and-bound nodes with --exact-arc.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Also run the lower-bound audit for this order.
    #[arg(long)]
    pub audit: bool,
    /// Cross-check the certificate value against brute force.
    #[arg(long)]
    pub brute: bool,
    /// Directory for report.json and certificate.json.
    #[arg(short, long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("method").args(["brute", "heuristic"]).required(true)))]
pub struct IsoArgs {
    pub design: PathBuf,
    #[arg(long, default_value = "incidence")]
    pub flavor: Flavor,
    #[arg(long)]
    pub brute: bool,
    #[arg(long)]
    pub heuristic: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Heuristic restarts.
    #[arg(long, default_value_t = 64)]
    pub budget: u64,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

/// Maps an error to the documented exit code.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Verification(_)) => 1,
        Some(Error::BudgetExhausted | Error::WorkGuard { .. }) => 3,
        Some(_) => 2,
        None => 2,
    }
}

/// Accumulates the manifest while a command runs.
struct Session {
    manifest: RunManifest,
}

impl Session {
    fn read(&mut self, path: &Path) -> anyhow::Result<String> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        self.manifest.record_input(path, text.as_bytes());
        Ok(text)
    }

    fn read_design(&mut self, path: &Path) -> anyhow::Result<Design> {
        let text = self.read(path)?;
        Design::from_json(&text).with_context(|| format!("loading design {}", path.display()))
    }

    /// Writes to `path`, or to stdout when absent.
    fn emit(&mut self, path: Option<&Path>, content: &str) -> anyhow::Result<()> {
        match path {
            Some(p) => {
                if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(dir)?;
                }
                std::fs::write(p, content).with_context(|| format!("writing {}", p.display()))?;
                self.manifest.record_output(&p.display().to_string(), content.as_bytes());
            }
            None => {
                print!("{content}");
                self.manifest.record_output("-", content.as_bytes());
            }
        }
        Ok(())
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Arguments without the run-environment flags that must not affect outputs.
fn recorded_command(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut it = args.iter();
    while let Some(a) = it.next() {
        match a.as_str() {
            "--threads" | "--manifest" => {
                it.next();
            }
            "--record-timing" => {}
            s if s.starts_with("--threads=") || s.starts_with("--manifest=") => {}
            _ => out.push(a.clone()),
        }
    }
    out
}

fn construct(kind: &ConstructKind, s: &mut Session) -> anyhow::Result<()> {
    let (design, out) = match kind {
        ConstructKind::Hermitian { q, out } => (construct_hermitian(*q)?, out),
        ConstructKind::Bm { q, alpha, beta, out } => {
            let f = FieldCtx::quadratic(*q)?;
            (construct_bm(*q, f.element(*alpha)?, f.element(*beta)?)?, out)
        }
        ConstructKind::Order2 { out } => (construct_order2_unital(), out),
        ConstructKind::Plane { order, out } => (Design::projective_plane(*order)?, out),
        ConstructKind::Import { input, out } => {
            let text = s.read(input)?;
            let file: crate::design::DesignFile = serde_json::from_str(&text).map_err(Error::from)?;
            (Design::new(file.v, file.blocks, Provenance::Imported)?, out)
        }
        ConstructKind::Complement { input, out } => (s.read_design(input)?.complement()?, out),
    };
    let p = design.params();
    eprintln!("2-({}, {}, {}) design, b = {}, r = {}", p.v, p.k, p.lambda, p.b, p.r);
    s.emit(out.as_deref(), &(design.to_json_pretty() + "\n"))
}

#[derive(Serialize)]
struct BmPair {
    alpha: u32,
    beta: u32,
    beta_in_subfield: bool,
}

#[derive(Serialize)]
struct BmScan {
    q: u64,
    pairs_checked: u64,
    admissible: Vec<BmPair>,
}

fn bm_scan(q: u64, out: Option<&Path>, s: &mut Session) -> anyhow::Result<()> {
    let f = FieldCtx::quadratic(q)?;
    let pairs = admissible_bm_pairs(q)?;
    let admissible = pairs
        .iter()
        .map(|&(a, b)| Ok(BmPair { alpha: a.0, beta: b.0, beta_in_subfield: f.in_subfield(b)? }))
        .collect::<crate::Result<Vec<_>>>()?;
    eprintln!("{} admissible pairs out of {}", admissible.len(), (f.order() as u64).pow(2));
    let scan = BmScan { q, pairs_checked: (f.order() as u64).pow(2), admissible };
    s.emit(out, &pretty(&scan))
}

#[derive(Serialize)]
struct ArcOutcome {
    mode: SearchMode,
    target: u64,
    seed: u64,
    budget: u64,
    status: &'static str,
    size: usize,
    points: Vec<u32>,
}

#[derive(Serialize)]
struct BruteCheck {
    ratio: ExactValue,
    agrees: bool,
}

#[derive(Serialize)]
struct BoundsOutput {
    design: DesignRef,
    bounds: BoundReport,
    arc: ArcOutcome,
    #[serde(serialize_with = "serialize_exact")]
    certified: Rational,
    certificate: String,
    brute: Option<BruteCheck>,
    audit: Option<AuditReport>,
}

fn bounds(args: &BoundsArgs, s: &mut Session) -> anyhow::Result<()> {
    let design = s.read_design(&args.design)?;
    let n = design
        .unital_order()
        .ok_or_else(|| Error::InvalidParameter(format!("{:?} are not unital parameters", design.params())))? as u64;
    let fc = floor_c(n)?;
    let target = args.arc_target.unwrap_or(fc).min(fc).max(3);
    let mode = if args.exact_arc { SearchMode::Exact } else { SearchMode::Greedy };
    let budget = args.budget.unwrap_or(match mode {
        SearchMode::Greedy => DEFAULT_GREEDY_RESTARTS as u64,
        SearchMode::Exact => DEFAULT_EXACT_NODES,
    });
    s.manifest.seed = Some(args.seed);
    s.manifest.budgets.insert(format!("{mode:?}").to_lowercase(), budget);

    let (status, arc) = match find_arc(&design, target as usize, mode, args.seed, budget) {
        Ok(arc) => ("found", arc),
        Err(e @ (Error::BudgetExhausted | Error::Infeasible(_))) => {
            eprintln!("arc search for size {target} failed ({e}); using the best greedy arc");
            let status = if matches!(e, Error::BudgetExhausted) { "budget_exhausted" } else { "infeasible" };
            (status, greedy_arc(&design, args.seed, DEFAULT_GREEDY_RESTARTS)?)
        }
        Err(e) => return Err(e.into()),
    };
    let report = theorem1_bounds(n, arc.len() as u64)?;
    let cert = construct_extremal_set(&design, &arc)?;
    let certified = cert.claimed.to_rational()?;
    if certified < report.lower || certified > report.upper {
        return Err(Error::Verification(format!(
            "certified value {certified} outside [{}, {}]",
            report.lower, report.upper
        ))
        .into());
    }

    let brute = if args.brute {
        let g = build_graph(&design, Flavor::Incidence)?;
        let res = brute_force_iso(&g, &BruteOptions::default())?;
        Some(BruteCheck { agrees: res.ratio == certified, ratio: ExactValue::new(&res.ratio)? })
    } else {
        None
    };
    let audit = if args.audit && n >= 3 {
        Some(audit_lowerbound_machinery(n, &AuditOptions::default())?)
    } else {
        if args.audit {
            eprintln!("audit skipped: n = 2 is settled by brute force");
        }
        None
    };

    let cert_path = args.out.join("certificate.json");
    let output = BoundsOutput {
        design: cert.design.clone(),
        bounds: report.clone(),
        arc: ArcOutcome { mode, target, seed: args.seed, budget, status, size: arc.len(), points: arc },
        certified: certified.clone(),
        certificate: "certificate.json".into(),
        brute,
        audit,
    };
    s.emit(Some(&cert_path), &(cert.to_json() + "\n"))?;
    s.emit(Some(&args.out.join("report.json")), &pretty(&output))?;

    println!(
        "n = {n}, floor c = {fc}, arc size {} ({status}), bounds [{}, {}], certified {}{}",
        output.arc.size,
        report.lower,
        report.upper,
        certified,
        if report.pinch { " (pinched)" } else { "" }
    );
    if let Some(b) = &output.brute {
        if !b.agrees {
            return Err(Error::Verification(format!("brute force gives {}/{}", b.ratio.num, b.ratio.den)).into());
        }
    }
    if let Some(a) = &output.audit {
        if !a.passed() {
            return Err(Error::Verification(format!("audit failed: {:?}", a.failures())).into());
        }
    }
    Ok(())
}

/// Known values the result must respect on unitals.
fn consistency(design: &Design, flavor: Flavor, res: &IsoResult) -> anyhow::Result<()> {
    let Some(n) = design.unital_order().map(|n| n as u64) else {
        return Ok(());
    };
    let exact = res.method == crate::iso::Method::Brute;
    match flavor {
        Flavor::Incidence => {
            let lower = theorem1_bounds(n, 3)?.lower;
            if res.ratio < lower {
                bail!(Error::Verification(format!("ratio {} below the lower bound {lower}", res.ratio)));
            }
            eprintln!("lower bound {lower}");
        }
        Flavor::NonIncidence => {
            let value = theorem2_value(n)?;
            if res.ratio < value || (exact && res.ratio != value) {
                bail!(Error::Verification(format!("ratio {} but the known value is {value}", res.ratio)));
            }
            eprintln!("known value {value}");
        }
    }
    Ok(())
}

fn iso(args: &IsoArgs, s: &mut Session) -> anyhow::Result<()> {
    let design = s.read_design(&args.design)?;
    let graph = build_graph(&design, args.flavor)?;
    let res = if args.brute {
        let opts = BruteOptions::default();
        s.manifest.budgets.insert("work_guard".into(), opts.guard.min(u64::MAX as u128) as u64);
        brute_force_iso(&graph, &opts)?
    } else {
        s.manifest.seed = Some(args.seed);
        s.manifest.budgets.insert("restarts".into(), args.budget);
        heuristic_iso(&graph, &HeuristicOptions::with_budget(args.budget as usize, args.seed))?
    };
    res.recheck(&graph)?;
    let file: IsoResultFile = res.to_file(&graph)?;
    eprintln!("i = {} ({})", res.ratio, file.ratio.decimal);
    s.emit(args.out.as_deref(), &pretty(&file))?;
    consistency(&design, args.flavor, &res)
}

fn verify(cert_path: &Path, design_path: &Path, s: &mut Session) -> anyhow::Result<()> {
    let text = s.read(cert_path)?;
    let cert = Certificate::from_json(&text).map_err(|e| Error::Verification(format!("unreadable certificate: {e}")))?;
    let design = s.read_design(design_path)?;
    match verify_certificate(&cert, &design) {
        Ok(()) => {
            println!("certificate verified: {}/{}", cert.claimed.num, cert.claimed.den);
            Ok(())
        }
        Err(e @ Error::Verification(_)) => Err(e.into()),
        Err(e) => Err(Error::Verification(e.to_string()).into()),
    }
}

fn export(what: &ExportKind, s: &mut Session) -> anyhow::Result<()> {
    match what {
        ExportKind::Graph { design, flavor, format, out } => {
            let d = s.read_design(design)?;
            let g = build_graph(&d, *flavor)?;
            let text = match format {
                GraphFormat::Json => pretty(&g.export()),
                GraphFormat::Dimacs => g.to_dimacs(),
            };
            s.emit(out.as_deref(), &text)
        }
        ExportKind::Plane { order, out } => {
            let plane = ProjectivePlane::new(Arc::new(FieldCtx::with_order(*order)?));
            s.emit(out.as_deref(), &pretty(&plane.export()))
        }
    }
}

fn audit(n: u64, to: Option<u64>, opts: AuditOptions, out: Option<&Path>, s: &mut Session) -> anyhow::Result<()> {
    s.manifest.seed = Some(opts.seed);
    s.manifest.budgets.insert("samples".into(), opts.samples as u64);
    let last = to.unwrap_or(n);
    let reports = (n..=last)
        .map(|k| audit_lowerbound_machinery(k, &opts))
        .collect::<crate::Result<Vec<_>>>()?;
    for r in &reports {
        println!("n = {}: {}", r.n, if r.passed() { "all checks pass" } else { "FAILED" });
    }
    s.emit(out, &pretty(&reports))?;
    if let Some(r) = reports.iter().find(|r| !r.passed()) {
        bail!(Error::Verification(format!("n = {}: {:?}", r.n, r.failures())));
    }
    Ok(())
}

fn replay(path: &Path, threads: Option<usize>) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let recorded = RunManifest::from_json(&text)?;
    for input in &recorded.inputs {
        let bytes = std::fs::read(&input.path).with_context(|| format!("reading {}", input.path))?;
        if crate::manifest::sha256_hex(&bytes) != input.sha256 {
            bail!(Error::Verification(format!("input {} changed since the recorded run", input.path)));
        }
    }
    let mut argv = vec!["unital-iso".to_string()];
    argv.extend(recorded.command.iter().cloned());
    let cli = Cli::try_parse_from(&argv).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    if matches!(cli.command, Command::Replay { .. }) {
        bail!(Error::InvalidParameter("manifest records a replay".into()));
    }
    let rerun = execute(&cli.command, recorded.command.clone(), threads, false)?;
    if rerun.outputs != recorded.outputs {
        bail!(Error::Verification("replayed outputs differ from the manifest".into()));
    }
    println!("replay reproduced {} output(s)", rerun.outputs.len());
    Ok(())
}

fn dispatch(command: &Command, s: &mut Session) -> anyhow::Result<()> {
    match command {
        Command::Construct { kind } => construct(kind, s),
        Command::BmScan { q, out } => bm_scan(*q, out.as_deref(), s),
        Command::Bounds(args) => bounds(args, s),
        Command::Iso(args) => iso(args, s),
        Command::Verify { certificate, design } => verify(certificate, design, s),
        Command::Export { what } => export(what, s),
        Command::Audit { n, to, exhaustive_limit, samples, seed, out } => audit(
            *n,
            *to,
            AuditOptions { exhaustive_limit: *exhaustive_limit, samples: *samples, seed: *seed },
            out.as_deref(),
            s,
        ),
        Command::Replay { .. } => unreachable!("handled by run"),
    }
}

fn execute(command: &Command, recorded: Vec<String>, threads: Option<usize>, timing: bool) -> anyhow::Result<RunManifest> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        if t == 0 {
            bail!(Error::InvalidParameter("--threads must be positive".into()));
        }
        builder = builder.num_threads(t);
    }
    let pool = builder.build().context("building thread pool")?;
    let mut session = Session { manifest: RunManifest::new(recorded) };
    let start = Instant::now();
    pool.install(|| dispatch(command, &mut session))?;
    if timing {
        session.manifest.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(session.manifest)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run(args: Vec<String>) -> anyhow::Result<()> {
    let cli = Cli::try_parse_from(&args).map_err(|e| {
        if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) {
            e.exit();
        }
        Error::InvalidParameter(e.to_string())
    })?;
    if let Command::Replay { manifest } = &cli.command {
        return replay(manifest, cli.threads);
    }
    let recorded = recorded_command(&args[1..]);
    let manifest = execute(&cli.command, recorded, cli.threads, cli.record_timing)?;
    if let Some(path) = &cli.manifest {
        std::fs::write(path, manifest.to_json()).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

/// Entry point for the binary.
pub fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
