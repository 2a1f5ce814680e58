//! Batch front end for the certification library. Every subcommand reads
//! exact textual inputs, prints a deterministic report, and exits 0 when all
//! checks pass, 1 when a mathematical check fails (the witness is in the
//! report), or 2 when the input cannot be parsed.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use rosenthal_core::amalgam::{
    build_amalgam, encode_members, enrich_for_members, select_chain, verify_member_strong_embedding,
    verify_norm_identity, AmalgamOutput, DenseWindow, Member,
};
use rosenthal_core::basisnorm::EquivalenceReport;
use rosenthal_core::ell1::{build_glued_tree, build_l1_tree, FnWindow};
use rosenthal_core::embed::{
    check_propnew, check_srce1, extract_2k_equivalence, monotone_map_iv,
    StrongEmbeddingCertificate,
};
use rosenthal_core::families::{
    random_hereditary, schreier_restricted, uniform_family, verify_hereditary_claim,
    HereditaryFamily,
};
use rosenthal_core::par;
use rosenthal_core::polylin::{DominanceReport, Rat, SupOverBall};
use rosenthal_core::Error;

#[derive(Parser)]
#[command(name = "rosenthal")]
#[command(about = "Exact certification of l1-tree ranks, hereditary families, and norm amalgams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the scale-2 equivalence claim for a hereditary family.
    Family {
        #[command(subcommand)]
        source: FamilySource,
    },

    /// Print the equivalence trees and the glued rank of a function window.
    Rank {
        /// JSON file: an array of step functions.
        window: PathBuf,

        /// Largest integer scale for the glued rank.
        #[arg(long, default_value_t = 2)]
        d_max: usize,

        /// Extra scale to print alongside the integer range, as p/q.
        #[arg(long)]
        d: Option<String>,

        /// Write the glued tree here in its textual format.
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Certify the strong-embedding inequality for a selection, with
    /// optional follow-up checks.
    Embed {
        /// JSON file: the g window.
        g: PathBuf,

        /// JSON file: the f window the selection indexes into.
        f: PathBuf,

        /// Comma-separated strictly increasing indices into the f window.
        #[arg(long, value_delimiter = ',', required = true)]
        selection: Vec<usize>,

        /// Slack scale, as p/q.
        #[arg(long)]
        eps: String,

        /// Also extract the two-sided constant and check it against 2K.
        #[arg(long)]
        extract: bool,

        /// Also build the monotone tree map at scale d (requires --d).
        #[arg(long)]
        monotone: bool,

        /// Tree scale for --monotone, as p/q.
        #[arg(long)]
        d: Option<String>,

        /// Also certify the near-isometry refinement.
        #[arg(long)]
        near: bool,

        /// Write the embedding certificate here as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Build or re-verify a full construction bundle.
    Amalgam {
        #[command(subcommand)]
        action: AmalgamAction,
    },

    /// Run a built-in end-to-end sanity suite.
    Selftest,
}

#[derive(Subcommand)]
enum FamilySource {
    /// The family {F : |F| <= min F + 1} over 0..=N.
    Schreier { n: usize },

    /// All subsets of 0..=N of size at most K.
    Uniform { n: usize, k: usize },

    /// Seed-stable random family from downward-closed maximal sets.
    Random {
        ground: usize,
        maximal: usize,
        max_size: usize,
        #[arg(long)]
        seed: u64,
    },

    /// Load a family from its textual format (one {..} member per line).
    Check { file: PathBuf },
}

#[derive(Subcommand)]
enum AmalgamAction {
    /// Encode members into a tree over a dense window, realize it, and
    /// certify every member.
    Build {
        /// JSON file: an array of member windows.
        members: PathBuf,

        /// Tolerance scale for every member, as p/q.
        #[arg(long)]
        eps: String,

        /// Branch length; must reach every window position.
        #[arg(long)]
        depth: usize,

        /// JSON file with dense candidate functions; auto-enriched copies
        /// of the member functions when omitted.
        #[arg(long)]
        dense: Option<PathBuf>,

        /// Write the bundle here; without it the bundle JSON goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Re-build a bundle from its inputs and re-check every certificate.
    Verify { bundle: PathBuf },
}

/// Input problems exit 2, failed mathematical checks exit 1. A check report
/// is still printed on failure so the witness lands in front of the user.
enum Failure {
    Input(String),
    Check(String),
}

type RunResult = Result<String, Failure>;

fn main() -> ExitCode {
    if let Ok(raw) = std::env::var(par::THREADS_ENV) {
        let ok = raw.trim().parse::<usize>().map(|n| n >= 1).unwrap_or(false);
        if !ok {
            eprintln!("{} must be a positive integer, got {raw:?}", par::THREADS_ENV);
            return ExitCode::from(2);
        }
    }
    match run(Cli::parse().command) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Check(report)) => {
            print!("{report}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> RunResult {
    match command {
        Command::Family { source } => cmd_family(source),
        Command::Rank { window, d_max, d, out } => cmd_rank(&window, d_max, d.as_deref(), out.as_deref()),
        Command::Embed {
            g,
            f,
            selection,
            eps,
            extract,
            monotone,
            d,
            near,
            out,
        } => cmd_embed(&g, &f, &selection, &eps, extract, monotone, d.as_deref(), near, out.as_deref()),
        Command::Amalgam { action } => match action {
            AmalgamAction::Build {
                members,
                eps,
                depth,
                dense,
                out,
            } => cmd_amalgam_build(&members, &eps, depth, dense.as_deref(), out.as_deref()),
            AmalgamAction::Verify { bundle } => cmd_amalgam_verify(&bundle),
        },
        Command::Selftest => cmd_selftest(),
    }
}

fn input_err(context: &str, e: impl std::fmt::Display) -> Failure {
    Failure::Input(format!("{context}: {e}"))
}

fn check_err(context: &str, e: impl std::fmt::Display) -> Failure {
    Failure::Check(format!("FAIL {context}: {e}\n"))
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input_err(&format!("reading {}", path.display()), e))
}

fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read_text(path)?)
        .map_err(|e| input_err(&format!("parsing {}", path.display()), e))
}

fn parse_rat(flag: &str, raw: &str) -> Result<Rat, Failure> {
    raw.parse()
        .map_err(|e: Error| input_err(&format!("parsing {flag} {raw:?}"), e))
}

fn write_out(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| input_err(&format!("writing {}", path.display()), e))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("library types serialize");
    s.push('\n');
    s
}

fn verdict(holds: bool) -> &'static str {
    if holds {
        "PASS"
    } else {
        "FAIL"
    }
}

fn describe_dominance(report: &DominanceReport) -> String {
    match &report.violation {
        None => format!("margin {} (holds)", report.margin),
        Some(v) => format!(
            "margin {}, witness {:?} gives {} > {}",
            report.margin, v.witness, v.lhs, v.rhs
        ),
    }
}

fn describe_sup(side: &SupOverBall) -> String {
    match side {
        SupOverBall::Bounded(c) => c.to_string(),
        SupOverBall::Unbounded => "unbounded".into(),
    }
}

fn describe_equivalence(e: &EquivalenceReport) -> String {
    match e.best() {
        Some(best) => format!(
            "forward {}, backward {}, two-sided {best}",
            describe_sup(&e.forward),
            describe_sup(&e.backward)
        ),
        None => format!(
            "forward {}, backward {}",
            describe_sup(&e.forward),
            describe_sup(&e.backward)
        ),
    }
}

fn cmd_family(source: FamilySource) -> RunResult {
    let family = match source {
        FamilySource::Schreier { n } => {
            schreier_restricted(n).map_err(|e| input_err("building the family", e))?
        }
        FamilySource::Uniform { n, k } => {
            uniform_family(n, k).map_err(|e| input_err("building the family", e))?
        }
        FamilySource::Random {
            ground,
            maximal,
            max_size,
            seed,
        } => random_hereditary(ground, maximal, max_size, seed)
            .map_err(|e| input_err("building the family", e))?,
        FamilySource::Check { file } => read_text(&file)?
            .parse::<HereditaryFamily>()
            .map_err(|e| input_err(&format!("parsing {}", file.display()), e))?,
    };

    let report = verify_hereditary_claim(&family).map_err(|e| check_err("family claim", e))?;

    let mut out = String::new();
    let _ = writeln!(
        out,
        "family: ground 0..={}, {} members",
        family.ground_max(),
        family.member_count()
    );
    let _ = writeln!(out, "scale: {}", report.scale);
    let _ = writeln!(out, "family tree order: {}", report.family_tree_order);
    let _ = writeln!(out, "scale-2 tree order: {}", report.l1_tree_order);
    let _ = writeln!(
        out,
        "monotone map into the scale-2 tree: {}",
        if report.monotone { "yes" } else { "no" }
    );
    let _ = writeln!(out, "member constants (lower, upper):");
    for mc in &report.member_constants {
        let label: Vec<String> = mc.member.iter().map(ToString::to_string).collect();
        let _ = writeln!(
            out,
            "  {{{}}}: {}, {}",
            label.join(" "),
            mc.constants.lower,
            mc.constants.upper
        );
    }
    for failure in &report.failures {
        let _ = writeln!(out, "failure: {failure:?}");
    }
    let _ = writeln!(out, "verdict: {}", verdict(report.holds));

    if report.holds {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}

fn load_window(path: &Path) -> Result<FnWindow, Failure> {
    load_json::<FnWindow>(path)
}

fn cmd_rank(
    window: &Path,
    d_max: usize,
    extra: Option<&str>,
    out_path: Option<&Path>,
) -> RunResult {
    let w = load_window(window)?;
    if d_max == 0 {
        return Err(Failure::Input("--d-max must be at least 1".into()));
    }

    let mut out = String::new();
    let _ = writeln!(
        out,
        "window: {} functions on {} atoms",
        w.len(),
        w.space().atom_count()
    );
    let mut orders = Vec::new();
    for d in 1..=d_max {
        let tree = build_l1_tree(&w, &Rat::from_int(d as i64), w.len())
            .map_err(|e| check_err("tree construction", e))?;
        let _ = writeln!(out, "scale {d} tree: order {}", tree.order());
        let _ = write!(out, "{tree}");
        orders.push(tree.order());
    }
    if let Some(raw) = extra {
        let d = parse_rat("--d", raw)?;
        let tree =
            build_l1_tree(&w, &d, w.len()).map_err(|e| check_err("tree construction", e))?;
        let _ = writeln!(out, "scale {d} tree: order {}", tree.order());
        let _ = write!(out, "{tree}");
    }
    let monotone = orders.windows(2).all(|p| p[0] <= p[1]);
    let _ = writeln!(
        out,
        "orders by scale: {} ({})",
        orders
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", "),
        if monotone { "nondecreasing" } else { "NOT monotone" }
    );
    let glued =
        build_glued_tree(&w, d_max, w.len()).map_err(|e| check_err("glued construction", e))?;
    let _ = writeln!(out, "glued rank: {}", glued.order());
    let _ = writeln!(out, "glued tree:");
    let _ = write!(out, "{glued}");

    if let Some(path) = out_path {
        write_out(path, &glued.to_string())?;
    }
    if monotone {
        Ok(out)
    } else {
        // Scale growth can only add nodes; a shrinking order means a bug.
        Err(Failure::Check(out))
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_embed(
    g_path: &Path,
    f_path: &Path,
    selection: &[usize],
    eps_raw: &str,
    extract: bool,
    monotone: bool,
    d_raw: Option<&str>,
    near: bool,
    out_path: Option<&Path>,
) -> RunResult {
    let g = load_window(g_path)?;
    let f = load_window(f_path)?;
    let eps = parse_rat("--eps", eps_raw)?;
    if selection.len() != g.len() {
        return Err(Failure::Input(format!(
            "selection has {} indices, the g window has {} functions",
            selection.len(),
            g.len()
        )));
    }
    let f_sel = f
        .select(selection)
        .map_err(|e| input_err("applying the selection", e))?;
    if monotone && d_raw.is_none() {
        return Err(Failure::Input("--monotone requires --d".into()));
    }

    let mut out = String::new();
    let _ = writeln!(
        out,
        "g window: {} functions on {} atoms",
        g.len(),
        g.space().atom_count()
    );
    let _ = writeln!(
        out,
        "selection: {selection:?} from {} functions",
        f.len()
    );
    let _ = writeln!(out, "eps: {eps}");

    let mut all_hold = true;
    let certificate: StrongEmbeddingCertificate =
        check_srce1(&g, &f_sel, &eps).map_err(|e| check_err("embedding inequality", e))?;
    let _ = writeln!(out, "forward: {}", describe_dominance(&certificate.forward));
    let _ = writeln!(out, "backward: {}", describe_dominance(&certificate.backward));
    let _ = writeln!(out, "embedding certificate: {}", verdict(certificate.holds()));
    all_hold &= certificate.holds();

    if extract {
        let report = extract_2k_equivalence(&g, &f_sel, &eps)
            .map_err(|e| check_err("constant extraction", e))?;
        let _ = writeln!(out, "basis constant K: {}", report.basis_constant);
        let _ = writeln!(out, "equivalence: {}", describe_equivalence(&report.equivalence));
        let _ = writeln!(
            out,
            "constant within 2K = {}: {}",
            report.bound,
            verdict(report.holds)
        );
        all_hold &= report.holds;
    }
    if monotone {
        let d = parse_rat("--d", d_raw.expect("checked above"))?;
        let report = monotone_map_iv(&g, &f, selection, &eps, &d)
            .map_err(|e| check_err("monotone tree map", e))?;
        let _ = writeln!(
            out,
            "tree orders at scale {d} vs {}: {} <= {}",
            Rat::from_int(2) * &d,
            report.g_tree_order,
            report.f_tree_order
        );
        if !report.escaped.is_empty() {
            let _ = writeln!(out, "escaped nodes: {:?}", report.escaped);
        }
        let _ = writeln!(out, "monotone map: {}", verdict(report.holds));
        all_hold &= report.holds;
    }
    if near {
        let report =
            check_propnew(&g, &f_sel, &eps).map_err(|e| check_err("near-isometry", e))?;
        let _ = writeln!(out, "slack certified down to: {}", report.eps_used);
        let _ = writeln!(out, "equivalence: {}", describe_equivalence(&report.equivalence));
        let _ = writeln!(
            out,
            "two-sided constant within 1 + {}: {}",
            report.eps,
            verdict(report.holds)
        );
        all_hold &= report.holds;
    }

    if let Some(path) = out_path {
        write_out(path, &to_json(&certificate))?;
    }
    if all_hold {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}

/// Everything `amalgam verify` needs to re-build and re-check: the exact
/// inputs plus the realized construction for tamper detection.
#[derive(Serialize, Deserialize)]
struct Bundle {
    members: Vec<Member>,
    depth: usize,
    dense: DenseWindow,
    built: serde_json::Value,
}

fn certify_members(out: &mut String, built: &AmalgamOutput, members: &[Member]) -> bool {
    let mut all_hold = true;
    for (i, (branch, member)) in built.tree.branches().iter().zip(members).enumerate() {
        let line = match verify_member_strong_embedding(built, branch, member) {
            Ok(cert) => {
                all_hold &= cert.holds();
                format!(
                    "member {i}: embedding {} (forward {}; backward {})",
                    verdict(cert.holds()),
                    describe_dominance(&cert.forward),
                    describe_dominance(&cert.backward)
                )
            }
            Err(e) => {
                all_hold = false;
                format!("member {i}: embedding FAIL ({e})")
            }
        };
        let _ = writeln!(out, "{line}");
        let line = match select_chain(built, branch, member)
            .and_then(|sel| verify_norm_identity(built, &sel))
        {
            Ok(identity) => {
                all_hold &= identity.holds;
                format!(
                    "member {i}: norm identity {} (forward {}; backward {})",
                    verdict(identity.holds),
                    describe_dominance(&identity.forward),
                    describe_dominance(&identity.backward)
                )
            }
            Err(e) => {
                all_hold = false;
                format!("member {i}: norm identity FAIL ({e})")
            }
        };
        let _ = writeln!(out, "{line}");
    }
    all_hold
}

fn cmd_amalgam_build(
    members_path: &Path,
    eps_raw: &str,
    depth: usize,
    dense_path: Option<&Path>,
    out_path: Option<&Path>,
) -> RunResult {
    let windows: Vec<FnWindow> = load_json(members_path)?;
    let eps = parse_rat("--eps", eps_raw)?;
    let members: Vec<Member> = windows
        .into_iter()
        .map(|w| Member::new(w, eps.clone()))
        .collect::<Result<_, _>>()
        .map_err(|e| input_err("building members", e))?;

    let (dense, dense_origin) = match dense_path {
        Some(path) => (load_json::<DenseWindow>(path)?, "supplied"),
        None => (
            enrich_for_members(&[], &members, depth)
                .map_err(|e| check_err("enriching the dense window", e))?,
            "auto-enriched",
        ),
    };

    let tree = encode_members(&members, &dense, depth)
        .map_err(|e| check_err("encoding members", e))?;
    let built = build_amalgam(&tree, &dense).map_err(|e| check_err("realizing the tree", e))?;

    let mut out = String::new();
    let _ = writeln!(
        out,
        "members: {}, depth {depth}, eps {eps}",
        members.len()
    );
    let _ = writeln!(out, "dense window: {} functions ({dense_origin})", dense.len());
    let _ = writeln!(
        out,
        "tree: {} nodes, {} branches, level {}, {} blocks",
        built.tree.nodes().len(),
        built.tree.branches().len(),
        built.level,
        built.count
    );
    let all_hold = certify_members(&mut out, &built, &members);
    let _ = writeln!(out, "verdict: {}", verdict(all_hold));

    let bundle = Bundle {
        members,
        depth,
        dense,
        built: serde_json::to_value(&built).expect("library types serialize"),
    };
    match out_path {
        Some(path) => write_out(path, &to_json(&bundle))?,
        None => {
            let _ = write!(out, "{}", to_json(&bundle));
        }
    }

    if all_hold {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}

/// First JSON pointer where two values differ, for tamper diagnostics.
fn first_difference(a: &serde_json::Value, b: &serde_json::Value, at: &str) -> Option<String> {
    use serde_json::Value;
    match (a, b) {
        (Value::Object(x), Value::Object(y)) => {
            let mut keys: Vec<&String> = x.keys().chain(y.keys()).collect();
            keys.sort();
            keys.dedup();
            for k in keys {
                match (x.get(k), y.get(k)) {
                    (Some(va), Some(vb)) => {
                        if let Some(d) = first_difference(va, vb, &format!("{at}/{k}")) {
                            return Some(d);
                        }
                    }
                    _ => return Some(format!("{at}/{k}")),
                }
            }
            None
        }
        (Value::Array(x), Value::Array(y)) => {
            if x.len() != y.len() {
                return Some(format!("{at} (length {} vs {})", x.len(), y.len()));
            }
            for (i, (va, vb)) in x.iter().zip(y).enumerate() {
                if let Some(d) = first_difference(va, vb, &format!("{at}/{i}")) {
                    return Some(d);
                }
            }
            None
        }
        _ => (a != b).then(|| at.to_string()),
    }
}

fn cmd_amalgam_verify(bundle_path: &Path) -> RunResult {
    let bundle: Bundle = load_json(bundle_path)?;

    let mut out = String::new();
    let _ = writeln!(
        out,
        "bundle: {} members, depth {}, dense window of {}",
        bundle.members.len(),
        bundle.depth,
        bundle.dense.len()
    );

    let tree = encode_members(&bundle.members, &bundle.dense, bundle.depth)
        .map_err(|e| check_err("re-encoding members", e))?;
    let rebuilt =
        build_amalgam(&tree, &bundle.dense).map_err(|e| check_err("re-realizing the tree", e))?;
    let rebuilt_value = serde_json::to_value(&rebuilt).expect("library types serialize");

    let matches = rebuilt_value == bundle.built;
    match first_difference(&rebuilt_value, &bundle.built, "") {
        None => {
            let _ = writeln!(out, "deterministic rebuild: matches");
        }
        Some(at) => {
            let _ = writeln!(out, "deterministic rebuild: DIFFERS at {at}");
        }
    }
    let all_hold = certify_members(&mut out, &rebuilt, &bundle.members) && matches;
    let _ = writeln!(out, "verdict: {}", verdict(all_hold));

    if all_hold {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}

fn cmd_selftest() -> RunResult {
    use rosenthal_core::ell1::l1_equivalence_constants;
    use rosenthal_core::families::projection_functions;
    use rosenthal_core::polylin::rat::rat;
    use rosenthal_core::stepfn::{AtomSpace, StepFn};

    let mut out = String::new();
    let mut all_hold = true;
    let record = |line: String, ok: bool, out: &mut String, all: &mut bool| {
        let _ = writeln!(out, "{line}: {}", verdict(ok));
        *all &= ok;
    };

    let family = schreier_restricted(3).map_err(|e| check_err("selftest family", e))?;
    let claim = verify_hereditary_claim(&family).map_err(|e| check_err("selftest claim", e))?;
    record(
        format!(
            "schreier(3) claim (orders {} and {})",
            claim.family_tree_order, claim.l1_tree_order
        ),
        claim.holds,
        &mut out,
        &mut all_hold,
    );

    let pair = uniform_family(1, 2).map_err(|e| check_err("selftest family", e))?;
    let w = projection_functions(&pair).map_err(|e| check_err("selftest projections", e))?;
    let constants =
        l1_equivalence_constants(w.fns()).map_err(|e| check_err("selftest constants", e))?;
    record(
        format!(
            "projection pair constants ({}, {})",
            constants.lower, constants.upper
        ),
        constants.lower == rat("1/2") && constants.upper == rat("1"),
        &mut out,
        &mut all_hold,
    );

    let step = |vals: [&str; 2]| {
        StepFn::new(AtomSpace::dyadic(1), vals.iter().map(|s| rat(s)).collect()).unwrap()
    };
    let members = vec![
        Member::new(
            FnWindow::new(vec![step(["1", "1"]), step(["-1", "-1/2"])]).unwrap(),
            rat("1/4"),
        )
        .unwrap(),
        Member::new(
            FnWindow::new(vec![step(["1", "0"]), step(["0", "1"])]).unwrap(),
            rat("1/4"),
        )
        .unwrap(),
    ];
    let dense = enrich_for_members(&[], &members, 4)
        .map_err(|e| check_err("selftest dense window", e))?;
    let tree =
        encode_members(&members, &dense, 4).map_err(|e| check_err("selftest encoding", e))?;
    let built = build_amalgam(&tree, &dense).map_err(|e| check_err("selftest realization", e))?;
    for (i, (branch, member)) in built.tree.branches().iter().zip(&members).enumerate() {
        let cert = verify_member_strong_embedding(&built, branch, member)
            .map_err(|e| check_err("selftest embedding", e))?;
        record(
            format!("two-member construction, member {i} embedding"),
            cert.holds(),
            &mut out,
            &mut all_hold,
        );
        let identity = select_chain(&built, branch, member)
            .and_then(|sel| verify_norm_identity(&built, &sel))
            .map_err(|e| check_err("selftest identity", e))?;
        record(
            format!("two-member construction, member {i} norm identity"),
            identity.holds,
            &mut out,
            &mut all_hold,
        );
    }

    let _ = writeln!(out, "verdict: {}", verdict(all_hold));
    if all_hold {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}
