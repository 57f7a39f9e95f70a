mod input;
mod output;

use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use justinf_core::algebra::{
    commutant_dimension, find_scalar_entry, is_zero_in_b, nucleus_rank_at_level,
    nucleus_relations_at_level, pi_level, psi_iterate, reduce_to_nucleus, rigid_kernel_element,
    scan_scalar_entry,
};
use justinf_core::bratteli::{
    build_strictly_rfd, build_y_infty, compare_with_open_set_formula, enumerate_ideals,
    ideal_from_open_set, ideal_violation, is_essential, left_half, limit_dimension,
    primitive_quotient_sizes, quotient, strictly_rfd_u, BratteliDiagram, DiagramIdeal,
};
use justinf_core::grig::{
    equal, is_trivial, level_permutation, level_quotient_order, lift_first, lift_second,
    lysenok_relators, normal_closure_index, order, section, wreath,
};
use justinf_core::k0::{self, K0Element};
use justinf_core::primspace::{build_yn, classify_yn, is_prime_closed, is_spectral};
use justinf_core::verify::{self, DEFAULT_SEED};
use justinf_core::{Error, Limits};
use serde_json::json;

use output::{Format, Output};

const ENV_HELP: &str = "\
Environment:
  JUSTINF_DEPTH_CAP        matrix-recursion depth and Bratteli truncation cap (default 12)
  JUSTINF_GROUP_LEVEL_CAP  tree level cap for permutation-group closures (default 5, hard max 6)
  JUSTINF_MATRIX_LEVEL_CAP tree level cap for dense level matrices (default 8)
  --cap-override takes precedence over the environment.

Arguments:
  Words and algebra elements may be given inline (e.g. \"(1-d)a(1-d)\"), as JSON,
  as @path to a file, or as - for stdin. Diagrams, ideals and spaces are JSON.

Exit status:
  0 success, 1 precondition violated, 2 resource cap exceeded, 3 malformed input.";

#[derive(Parser)]
#[command(name = "justinf", version, about = "Exact computations for the Grigorchuk group, its Koopman algebra and related AF algebras", after_help = ENV_HELP)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Recursion or truncation depth for commands that take one.
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Tree level for commands that take one.
    #[arg(long, global = true)]
    level: Option<usize>,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Override a cap: depth=N, group-level=N or matrix-level=N. Repeatable.
    #[arg(long = "cap-override", global = true, value_name = "CAP=N")]
    cap_override: Vec<String>,
    #[arg(long, env = "JUSTINF_DEPTH_CAP", hide = true)]
    depth_cap: Option<usize>,
    #[arg(long, env = "JUSTINF_GROUP_LEVEL_CAP", hide = true)]
    group_level_cap: Option<usize>,
    #[arg(long, env = "JUSTINF_MATRIX_LEVEL_CAP", hide = true)]
    matrix_level_cap: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// The group: words, sections, orders, level actions.
    #[command(subcommand)]
    Grig(GrigCmd),
    /// The group algebra, matrix recursion and the Koopman kernel.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Bratteli diagrams, ideals and quotients.
    #[command(subcommand)]
    Bratteli(BratteliCmd),
    /// The ordered dimension group.
    #[command(subcommand)]
    K0(K0Cmd),
    /// Finite primitive-ideal-space models.
    #[command(subcommand)]
    Space(SpaceCmd),
    /// Run the acceptance battery and print a pass/fail table.
    VerifyPaper {
        /// Run only these criteria (e.g. AC3).
        #[arg(long)]
        only: Vec<String>,
    },
}

#[derive(Subcommand)]
enum GrigCmd {
    /// Reduced normal form of a word.
    Normalize { word: String },
    /// Decide whether a word is the identity.
    Trivial { word: String },
    Equal { left: String, right: String },
    /// Sections at the first-level vertices and root activity.
    Wreath { word: String },
    /// Section at a vertex given as a 0/1 string.
    Section { word: String, vertex: String },
    Order {
        word: String,
        #[arg(long, default_value_t = 16)]
        max_exponent: u32,
    },
    /// Action on level --level as a 0-based permutation.
    Perm { word: String },
    /// A stabilizer element with the given section at vertex 0 (or 1 with --second).
    Lift {
        word: String,
        #[arg(long)]
        second: bool,
    },
    /// Order of the group acting on level --level.
    QuotientOrder,
    /// Index of the normal closure of a word at level --level.
    ClosureIndex { word: String },
    /// The defining relators up to the given shift.
    Relators {
        #[arg(long, default_value_t = 4)]
        k_max: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Proof,
    Scan,
}

#[derive(Subcommand)]
enum AlgebraCmd {
    /// Normal form of an element.
    Normalize { element: String },
    /// Decide whether an element vanishes in the Koopman algebra.
    KernelTest { element: String },
    /// Locate a non-zero scalar entry of an iterated recursion matrix.
    ScalarEntry {
        element: String,
        #[arg(long, value_enum, default_value = "proof")]
        method: Method,
    },
    /// Level matrix at --level.
    PiMatrix { element: String },
    /// Dimension of the commutant at --level.
    Commutant,
    /// Recursion matrix at --depth (default 1).
    Psi { element: String },
    /// Iterate the recursion until every entry lies in the nucleus span.
    Reduce { element: String },
    /// Rank of the nucleus at --level, with the relations it satisfies.
    NucleusRank,
    /// The kernel element (1-g1)(1-g2) for commuting rigid elements.
    Rigid { g1: String, g2: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    YInfty,
    StrictlyRfd,
}

#[derive(Args)]
struct DiagramSource {
    /// Diagram JSON (inline, @file or -). Without it, the rule is built to --depth.
    #[arg(long)]
    diagram: Option<String>,
    #[arg(long, value_enum, default_value = "y-infty")]
    rule: RuleArg,
}

#[derive(Args)]
struct IdealSource {
    /// Ideal JSON (inline, @file or -).
    #[arg(long, conflicts_with_all = ["omit", "left_half", "u"])]
    ideal: Option<String>,
    /// For y_infty: the ideal of the open set missing these columns, e.g. 1,3.
    #[arg(long)]
    omit: Option<String>,
    /// For strictly_rfd: the left half.
    #[arg(long)]
    left_half: bool,
    /// For strictly_rfd: the largest ideal avoiding left column k.
    #[arg(long)]
    u: Option<usize>,
}

#[derive(Subcommand)]
enum BratteliCmd {
    /// Build a rule diagram to --depth.
    Build {
        #[command(flatten)]
        source: DiagramSource,
    },
    /// Enumerate all ideals of a small truncated diagram.
    Ideals {
        #[command(flatten)]
        source: DiagramSource,
        /// Compare with the open-set formula instead of listing.
        #[arg(long)]
        compare: bool,
    },
    /// Check that a vertex set is an ideal.
    CheckIdeal {
        #[command(flatten)]
        source: DiagramSource,
        #[command(flatten)]
        ideal: IdealSource,
    },
    Quotient {
        #[command(flatten)]
        source: DiagramSource,
        #[command(flatten)]
        ideal: IdealSource,
    },
    /// Stable block sizes of a diagram, or of a quotient when an ideal is given.
    LimitDim {
        #[command(flatten)]
        source: DiagramSource,
        #[command(flatten)]
        ideal: IdealSource,
    },
    ExportDot {
        #[command(flatten)]
        source: DiagramSource,
        /// Ideal to highlight.
        #[command(flatten)]
        mark: IdealSource,
    },
    /// The ideal attached to an open subset of the column space.
    OpenSetIdeal {
        #[command(flatten)]
        source: DiagramSource,
        #[command(flatten)]
        ideal: IdealSource,
    },
    /// Matrix sizes of the primitive quotients for columns 1..j-max.
    PrimSizes {
        #[arg(long, default_value_t = 8)]
        j_max: usize,
    },
    /// Whether an ideal meets every non-zero ideal.
    Essential {
        #[command(flatten)]
        source: DiagramSource,
        #[command(flatten)]
        ideal: IdealSource,
    },
}

#[derive(Subcommand)]
enum K0Cmd {
    /// Push an element to a later level.
    Push {
        element: String,
        #[arg(long)]
        to: usize,
    },
    Positive { element: String },
    Equal { left: String, right: String },
    /// The order unit.
    Unit,
    /// The image sequence in the model group.
    Rho {
        element: String,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    Add { left: String, right: String },
}

#[derive(Subcommand)]
enum SpaceCmd {
    /// Build the n-point model space.
    BuildYn { n: usize },
    /// Validate a space and report its prime closed sets and spectrality.
    Check { space: String },
    /// Recognize a space as a model space up to relabeling.
    Classify { space: String },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let format = cli.global.format;
    let result = limits(&cli.global).and_then(|limits| run(&cli, &limits));
    match result.and_then(|(out, code)| Ok((out.render(format)?, code))) {
        Ok((text, code)) => {
            // A closed pipe (e.g. `| head`) is not an error of the command.
            let _ = writeln!(std::io::stdout(), "{text}");
            ExitCode::from(code)
        }
        Err(e) => {
            match format {
                Format::Json => eprintln!("{}", output::error_json(&e)),
                _ => eprintln!("error[{}]: {e}", e.kind()),
            }
            ExitCode::from(output::exit_code(&e) as u8)
        }
    }
}

fn limits(g: &Global) -> Result<Limits, Error> {
    let mut limits = Limits::default();
    if let Some(v) = g.depth_cap {
        limits.depth_cap = v;
    }
    if let Some(v) = g.group_level_cap {
        limits.group_level_cap = v;
    }
    if let Some(v) = g.matrix_level_cap {
        limits.matrix_level_cap = v;
    }
    for entry in &g.cap_override {
        let (key, value) = entry
            .split_once('=')
            .ok_or_else(|| Error::Malformed(format!("cap override {entry:?} is not CAP=N")))?;
        let value: usize = value
            .trim()
            .parse()
            .map_err(|e| Error::Malformed(format!("cap override {entry:?}: {e}")))?;
        match key.trim() {
            "depth" => limits.depth_cap = value,
            "group-level" => limits.group_level_cap = value,
            "matrix-level" => limits.matrix_level_cap = value,
            other => return Err(Error::Malformed(format!("unknown cap {other:?}"))),
        }
    }
    if limits.depth_cap == 0 || limits.group_level_cap == 0 || limits.matrix_level_cap == 0 {
        return Err(Error::Malformed("caps must be positive".into()));
    }
    Ok(limits)
}

fn need(value: Option<usize>, flag: &str) -> Result<usize, Error> {
    value.ok_or_else(|| Error::Malformed(format!("this command needs {flag}")))
}

fn run(cli: &Cli, limits: &Limits) -> Result<(Output, u8), Error> {
    let g = &cli.global;
    let out = match &cli.command {
        Command::Grig(cmd) => grig(cmd, g, limits)?,
        Command::Algebra(cmd) => algebra(cmd, g, limits)?,
        Command::Bratteli(cmd) => bratteli(cmd, g, limits)?,
        Command::K0(cmd) => k0_cmd(cmd)?,
        Command::Space(cmd) => space(cmd)?,
        Command::VerifyPaper { only } => return verify_paper(only, g.seed, limits),
    };
    Ok((out, 0))
}

fn grig(cmd: &GrigCmd, g: &Global, limits: &Limits) -> Result<Output, Error> {
    Ok(match cmd {
        GrigCmd::Normalize { word } => {
            let w = input::word(word)?;
            Output::new(&json!({ "word": w, "length": w.len() })).plain(w.to_word())
        }
        GrigCmd::Trivial { word } => {
            let t = is_trivial(&input::word(word)?);
            Output::new(&json!({ "trivial": t })).plain(t.to_string())
        }
        GrigCmd::Equal { left, right } => {
            let e = equal(&input::word(left)?, &input::word(right)?);
            Output::new(&json!({ "equal": e })).plain(e.to_string())
        }
        GrigCmd::Wreath { word } => {
            let w = wreath(&input::word(word)?);
            let plain = format!(
                "({}, {}){}",
                w.first.to_word(),
                w.second.to_word(),
                if w.active { " a" } else { "" }
            );
            Output::new(&w).plain(plain)
        }
        GrigCmd::Section { word, vertex } => {
            let s = section(&input::word(word)?, vertex)?;
            Output::new(&json!({ "vertex": vertex, "section": s })).plain(s.to_word())
        }
        GrigCmd::Order { word, max_exponent } => {
            let o = order(&input::word(word)?, *max_exponent);
            let plain = match o.value() {
                Some(v) => v.to_string(),
                None => format!("greater than 2^{max_exponent}"),
            };
            let mut value = serde_json::to_value(o).expect("order serializes");
            if let Some(v) = o.value() {
                value["order"] = json!(v.to_string());
            }
            Output::new(&value).plain(plain)
        }
        GrigCmd::Perm { word } => {
            let n = need(g.level, "--level")?;
            limits_check_matrix(n, limits)?;
            let p = level_permutation(&input::word(word)?, n);
            let cycles: Vec<Vec<usize>> = p.cycles();
            Output::new(&json!({ "level": n, "map": p, "cycles": cycles }))
                .plain(format!("{:?}", p.map()))
        }
        GrigCmd::Lift { word, second } => {
            let f = input::word(word)?;
            let l = if *second { lift_second(&f) } else { lift_first(&f) };
            Output::new(&json!({ "lift": l, "wreath": wreath(&l) })).plain(l.to_word())
        }
        GrigCmd::QuotientOrder => {
            let n = need(g.level, "--level")?;
            let o = level_quotient_order(n, limits)?;
            Output::new(&json!({ "level": n, "order": o })).plain(o.to_string())
        }
        GrigCmd::ClosureIndex { word } => {
            let n = need(g.level, "--level")?;
            let i = normal_closure_index(&input::word(word)?, n, limits)?;
            Output::new(&json!({ "level": n, "index": i })).plain(i.to_string())
        }
        GrigCmd::Relators { k_max } => {
            let rs: Vec<_> = lysenok_relators(*k_max)
                .into_iter()
                .map(|(name, r)| json!({ "name": name, "word": r, "trivial": is_trivial(&r) }))
                .collect();
            Output::new(&rs)
        }
    })
}

/// Level permutations are dense arrays of 2^n entries; share the matrix cap.
fn limits_check_matrix(n: usize, limits: &Limits) -> Result<(), Error> {
    if n > limits.matrix_level_cap {
        return Err(Error::ResourceCap {
            what: "matrix level",
            requested: n,
            cap: limits.matrix_level_cap,
        });
    }
    Ok(())
}

fn algebra(cmd: &AlgebraCmd, g: &Global, limits: &Limits) -> Result<Output, Error> {
    Ok(match cmd {
        AlgebraCmd::Normalize { element } => {
            let x = input::element(element)?;
            let plain = x.to_string();
            Output::new(&x).plain(plain)
        }
        AlgebraCmd::KernelTest { element } => {
            let cert = is_zero_in_b(&input::element(element)?, limits)?;
            Output::new(&cert).plain(format!("in_kernel: {}\ndepth: {}", cert.in_kernel, cert.depth))
        }
        AlgebraCmd::ScalarEntry { element, method } => {
            let x = input::element(element)?;
            let w = match method {
                Method::Proof => find_scalar_entry(&x, limits)?,
                Method::Scan => scan_scalar_entry(&x, limits)?,
            };
            Output::new(&w)
        }
        AlgebraCmd::PiMatrix { element } => {
            let n = need(g.level, "--level")?;
            Output::new(&pi_level(&input::element(element)?, n, limits)?)
        }
        AlgebraCmd::Commutant => {
            let n = need(g.level, "--level")?;
            let d = commutant_dimension(n, limits)?;
            Output::new(&json!({ "level": n, "dimension": d })).plain(d.to_string())
        }
        AlgebraCmd::Psi { element } => {
            let depth = g.depth.unwrap_or(1);
            Output::new(&psi_iterate(&input::element(element)?, depth, limits)?)
        }
        AlgebraCmd::Reduce { element } => Output::new(&reduce_to_nucleus(&input::element(element)?, limits)?),
        AlgebraCmd::NucleusRank => {
            let n = need(g.level, "--level")?;
            let rank = nucleus_rank_at_level(n, limits)?;
            let relations: Vec<String> = nucleus_relations_at_level(n, limits)?
                .iter()
                .map(|v| v.to_element().to_string())
                .collect();
            Output::new(&json!({ "level": n, "rank": rank, "relations": relations }))
        }
        AlgebraCmd::Rigid { g1, g2 } => {
            let x = rigid_kernel_element(&input::word(g1)?, &input::word(g2)?)?;
            let cert = is_zero_in_b(&x, limits)?;
            let plain = x.to_string();
            Output::new(&json!({ "element": x, "in_kernel": cert.in_kernel, "depth": cert.depth })).plain(plain)
        }
    })
}

fn load_diagram(s: &DiagramSource, g: &Global, limits: &Limits) -> Result<BratteliDiagram, Error> {
    match &s.diagram {
        Some(arg) => {
            let d = input::diagram(arg)?;
            if d.depth() > limits.depth_cap {
                return Err(Error::ResourceCap {
                    what: "depth",
                    requested: d.depth(),
                    cap: limits.depth_cap,
                });
            }
            Ok(d)
        }
        None => {
            let depth = g.depth.unwrap_or(6);
            match s.rule {
                RuleArg::YInfty => build_y_infty(depth, limits),
                RuleArg::StrictlyRfd => build_strictly_rfd(depth, limits),
            }
        }
    }
}

fn load_ideal(d: &BratteliDiagram, s: &IdealSource) -> Result<Option<DiagramIdeal>, Error> {
    if let Some(arg) = &s.ideal {
        let u = input::ideal(arg)?;
        if u.members.len() != d.depth() {
            return Err(Error::Malformed(format!(
                "ideal has {} levels, diagram has {}",
                u.members.len(),
                d.depth()
            )));
        }
        return Ok(Some(u));
    }
    if let Some(omit) = &s.omit {
        return ideal_from_open_set(d, &input::index_set(omit)?).map(Some);
    }
    if s.left_half {
        return left_half(d).map(Some);
    }
    if let Some(k) = s.u {
        return strictly_rfd_u(d, k).map(Some);
    }
    Ok(None)
}

fn require_ideal(d: &BratteliDiagram, s: &IdealSource) -> Result<DiagramIdeal, Error> {
    load_ideal(d, s)?.ok_or_else(|| Error::Malformed("an ideal is required (--ideal, --omit, --left-half or --u)".into()))
}

fn bratteli(cmd: &BratteliCmd, g: &Global, limits: &Limits) -> Result<Output, Error> {
    Ok(match cmd {
        BratteliCmd::Build { source } => {
            let d = load_diagram(source, g, limits)?;
            let dot = d.to_dot(None);
            Output::new(&d).dot(dot)
        }
        BratteliCmd::Ideals { source, compare } => {
            let d = load_diagram(source, g, limits)?;
            if *compare {
                let c = compare_with_open_set_formula(&d)?;
                let plain = format!(
                    "enumerated {} formula {} matched {} discrepancies {} artifacts {}",
                    c.enumerated,
                    c.formula,
                    c.matched,
                    c.discrepancies(),
                    c.truncation_artifacts.len()
                );
                Output::new(&c).plain(plain)
            } else {
                let ideals = enumerate_ideals(&d)?;
                let plain = ideals.iter().map(|u| u.to_string()).collect::<Vec<_>>().join("\n");
                Output::new(&ideals).plain(plain)
            }
        }
        BratteliCmd::CheckIdeal { source, ideal } => {
            let d = load_diagram(source, g, limits)?;
            let u = require_ideal(&d, ideal)?;
            let v = ideal_violation(&d, &u)?;
            let plain = match &v {
                None => "ideal".to_string(),
                Some(v) => v.to_string(),
            };
            Output::new(&json!({ "is_ideal": v.is_none(), "violation": v })).plain(plain)
        }
        BratteliCmd::Quotient { source, ideal } => {
            let d = load_diagram(source, g, limits)?;
            let q = quotient(&d, &require_ideal(&d, ideal)?)?;
            let dot = q.to_dot(None);
            Output::new(&q).dot(dot)
        }
        BratteliCmd::LimitDim { source, ideal } => {
            let d = load_diagram(source, g, limits)?;
            let target = match load_ideal(&d, ideal)? {
                Some(u) => quotient(&d, &u)?,
                None => d,
            };
            let horizon = target.depth();
            Output::new(&limit_dimension(&target, horizon)?)
        }
        BratteliCmd::ExportDot { source, mark } => {
            let d = load_diagram(source, g, limits)?;
            let u = load_ideal(&d, mark)?;
            let dot = d.to_dot(u.as_ref());
            Output::new(&json!({ "dot": dot })).plain(dot.clone()).dot(dot)
        }
        BratteliCmd::OpenSetIdeal { source, ideal } => {
            let d = load_diagram(source, g, limits)?;
            let u = require_ideal(&d, ideal)?;
            let plain = u.to_string();
            Output::new(&u).plain(plain)
        }
        BratteliCmd::PrimSizes { j_max } => {
            let depth = g.depth.unwrap_or(j_max + 1);
            let d = build_y_infty(depth, limits)?;
            let ks = primitive_quotient_sizes(&d, *j_max)?;
            Output::new(&json!({ "k": ks }))
        }
        BratteliCmd::Essential { source, ideal } => {
            let d = load_diagram(source, g, limits)?;
            let e = is_essential(&d, &require_ideal(&d, ideal)?, limits)?;
            Output::new(&json!({ "essential": e })).plain(e.to_string())
        }
    })
}

fn k0_cmd(cmd: &K0Cmd) -> Result<Output, Error> {
    Ok(match cmd {
        K0Cmd::Push { element, to } => {
            let x = input::k0(element)?;
            let v = x.push(*to)?;
            Output::new(&json!({ "level": to, "vector": v }))
        }
        K0Cmd::Positive { element } => {
            let p = input::k0(element)?.is_positive();
            Output::new(&json!({ "positive": p })).plain(p.to_string())
        }
        K0Cmd::Equal { left, right } => {
            let e = k0::equal(&input::k0(left)?, &input::k0(right)?);
            Output::new(&json!({ "equal": e })).plain(e.to_string())
        }
        K0Cmd::Unit => Output::new(&K0Element::unit()),
        K0Cmd::Rho { element, count } => {
            let x = input::k0(element)?;
            let seq = x.rho_model();
            let values = seq.take(*count)?;
            Output::new(&json!({ "model": seq, "values": values }))
        }
        K0Cmd::Add { left, right } => Output::new(&input::k0(left)?.add(&input::k0(right)?)?),
    })
}

fn space(cmd: &SpaceCmd) -> Result<Output, Error> {
    Ok(match cmd {
        SpaceCmd::BuildYn { n } => Output::new(&build_yn(*n)?),
        SpaceCmd::Check { space } => {
            let s = input::space(space)?;
            let mut prime = Vec::new();
            for set in s.closed_sets() {
                if is_prime_closed(&s, set)? {
                    prime.push(s.names(set));
                }
            }
            Output::new(&json!({
                "points": s.len(),
                "closed_sets": s.closed_sets().count(),
                "spectral": is_spectral(&s),
                "prime_closed": prime,
            }))
        }
        SpaceCmd::Classify { space } => {
            let c = classify_yn(&input::space(space)?);
            let plain = match c {
                Some(n) => format!("Y_{n}"),
                None => "not a model space".into(),
            };
            Output::new(&json!({ "yn": c })).plain(plain)
        }
    })
}

fn verify_paper(only: &[String], seed: u64, limits: &Limits) -> Result<(Output, u8), Error> {
    let reports = if only.is_empty() {
        verify::run_all(seed, limits)
    } else {
        only.iter()
            .map(|id| {
                verify::run_criterion(id, seed, limits)
                    .ok_or_else(|| Error::Malformed(format!("unknown criterion {id:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    let passed = reports.iter().filter(|r| r.passed).count();
    let mut table = String::new();
    for r in &reports {
        table.push_str(&format!(
            "{:<5} {}  {}: {}\n",
            r.id,
            if r.passed { "PASS" } else { "FAIL" },
            r.title,
            r.detail
        ));
    }
    table.push_str(&format!("{passed}/{} criteria pass", reports.len()));
    let by_id: BTreeMap<&str, bool> = reports.iter().map(|r| (r.id, r.passed)).collect();
    let out = Output::new(&json!({ "seed": seed, "passed": passed, "total": reports.len(), "summary": by_id, "criteria": reports }))
        .plain(table);
    Ok((out, if passed == reports.len() { 0 } else { 1 }))
}
