//! `specsign`: exact spectral analysis of matrix signings and graph
//! orientations from the command line.
//!
//! Matrices and graphs come from files in the plain-text or JSON formats
//! of `specsign::io`; results go to stdout, diagnostics to stderr, and the
//! exit code carries the decision: 0 success/true, 1 false, 2 unparseable
//! or invalid input, 3 reducible or disconnected input, 4 mismatched
//! inputs, 5 a cap exceeded.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use specsign::io;
use specsign::verify::{FaultInjection, VerifyConfig, VerifyReport};
use specsign::{
    analyze, bipartition_of, canonical_orientation, construct_witness, decide_diag_similar,
    membership, switch, switching_equivalent, AnalysisReport, Digraph, Error, Result,
    RotationFactor, Sign, SignDiagonal, Signing,
};

const EXIT_FALSE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_REDUCIBLE: u8 = 3;
const EXIT_MISMATCH: u8 = 4;
const EXIT_CAP: u8 = 5;

#[derive(Parser)]
#[command(
    name = "specsign",
    version,
    about = "Exact spectra of matrix signings and graph orientations",
    arg_required_else_help = true
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalOpts {
    /// Emit machine-readable JSON on stdout instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Largest accepted matrix or graph order.
    #[arg(
        long,
        global = true,
        env = "SPECSIGN_MAX_ORDER",
        default_value_t = io::DEFAULT_MAX_ORDER
    )]
    max_order: usize,

    /// Largest support size swept exhaustively by `verify` (2^m signings).
    #[arg(long, global = true, default_value_t = specsign::oracle::DEFAULT_SUPPORT_CAP)]
    max_support: usize,

    /// Largest order whose similarity class `verify` enumerates (2^(n-1) members).
    #[arg(long, global = true, default_value_t = specsign::signing::DEFAULT_CLASS_ENUM_CAP)]
    max_enum: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Report irreducibility, period, cyclic classes, and admissible rotations.
    Analyze { path: PathBuf },

    /// Print a signing of the input whose spectrum is e^(i*pi*k/p) times the
    /// input's, where p is the period.
    Construct {
        path: PathBuf,
        /// Rotation exponent, 0 <= k < 2p.
        #[arg(long)]
        k: u64,
    },

    /// Decide whether the signed matrix's spectrum is e^(i*pi*k/p) times the
    /// base's; prints the conjugating diagonal on success.
    Check {
        base: PathBuf,
        signed: PathBuf,
        /// Rotation exponent, 0 <= k < 2p.
        #[arg(long)]
        k: u64,
    },

    /// Decide whether two signed matrices are {-1,+1}-diagonally similar.
    Similar { first: PathBuf, second: PathBuf },

    /// Orientation tools for undirected graphs.
    #[command(subcommand)]
    Orient(OrientCommand),

    /// Run the self-check suite: fast implementations against brute-force
    /// oracles on seeded random (or exhaustive) inputs.
    Verify {
        /// Largest matrix order exercised.
        #[arg(long, default_value_t = 4)]
        n: usize,

        /// Random trials per property.
        #[arg(long, default_value_t = 25)]
        trials: u64,

        #[arg(long, default_value_t = 1)]
        seed: u64,

        /// Sweep every irreducible 0/1 matrix up to min(n, 4) instead of sampling.
        #[arg(long)]
        exhaustive: bool,

        /// Plant a bug in the checking loop to confirm the properties can fail.
        #[arg(long, hide = true, value_enum)]
        inject_fault: Option<FaultKind>,
    },
}

#[derive(Subcommand)]
enum OrientCommand {
    /// Is the graph bipartite?  Prints the two parts when it is.
    Bipartite { graph: PathBuf },

    /// Print the all-left-to-right orientation of a bipartite graph, whose
    /// skew spectrum is i times the adjacency spectrum.
    Canonical { graph: PathBuf },

    /// Reverse every arc with exactly one endpoint in the given vertex set.
    Switch {
        orientation: PathBuf,
        /// Comma-separated vertices, e.g. --set 0,2,5.
        #[arg(long, value_delimiter = ',')]
        set: Vec<usize>,
    },

    /// Decide whether two orientations differ by a switching; prints the set.
    Equivalent { first: PathBuf, second: PathBuf },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FaultKind {
    FlipOddRotation,
}

fn main() -> ExitCode {
    // Die quietly on SIGPIPE like other Unix filters instead of panicking
    // when a downstream pager closes the stream early.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            report_error(&e);
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let g = &cli.global;
    match &cli.command {
        Command::Analyze { path } => cmd_analyze(g, path),
        Command::Construct { path, k } => cmd_construct(g, path, *k),
        Command::Check { base, signed, k } => cmd_check(g, base, signed, *k),
        Command::Similar { first, second } => cmd_similar(g, first, second),
        Command::Orient(orient) => match orient {
            OrientCommand::Bipartite { graph } => cmd_orient_bipartite(g, graph),
            OrientCommand::Canonical { graph } => cmd_orient_canonical(g, graph),
            OrientCommand::Switch { orientation, set } => cmd_orient_switch(g, orientation, set),
            OrientCommand::Equivalent { first, second } => cmd_orient_equivalent(g, first, second),
        },
        Command::Verify { n, trials, seed, exhaustive, inject_fault } => {
            cmd_verify(g, *n, *trials, *seed, *exhaustive, *inject_fault)
        }
    }
}

/// Exit codes by error family; everything not otherwise classified is an
/// invalid input.
fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Reducible { .. } | Error::NoClosedPath | Error::Disconnected { .. } => {
            EXIT_REDUCIBLE
        }
        Error::BaseMismatch
        | Error::GraphMismatch
        | Error::OrderMismatch { .. }
        | Error::SupportMismatch { .. } => EXIT_MISMATCH,
        Error::OrderCapExceeded { .. }
        | Error::SupportCapExceeded { .. }
        | Error::ClassCapExceeded { .. }
        | Error::CycleCapExceeded { .. } => EXIT_CAP,
        _ => EXIT_INVALID,
    }
}

fn report_error(e: &Error) {
    eprintln!("error: {e}");
    match e {
        Error::Reducible { components } | Error::Disconnected { components } => {
            for (i, members) in components.iter().enumerate() {
                eprintln!("  component {i}: {}", join(members));
            }
        }
        _ => {}
    }
}

fn read_input(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn render_diagonal(d: &SignDiagonal) -> String {
    d.signs()
        .iter()
        .map(|s| if *s == Sign::Plus { "+1" } else { "-1" })
        .collect::<Vec<_>>()
        .join(" ")
}

fn diagonal_to_json(d: &SignDiagonal) -> Value {
    Value::from(d.signs().iter().map(|s| s.as_i64()).collect::<Vec<_>>())
}

fn print_json(v: &Value) {
    println!("{v}");
}

fn cmd_analyze(g: &GlobalOpts, path: &Path) -> Result<ExitCode> {
    let a = io::parse_nonneg_matrix(&read_input(path)?, g.max_order)?;
    let report = analyze(&a)?;
    if g.json {
        print_json(&analysis_to_json(a.order(), &report));
    } else {
        print_analysis(a.order(), &report);
    }
    Ok(ExitCode::SUCCESS)
}

fn print_analysis(order: usize, r: &AnalysisReport) {
    println!("order: {order}");
    println!("irreducible: {}", if r.irreducible { "yes" } else { "no" });
    let Some(p) = r.period else {
        println!("period: undefined (no closed path)");
        println!("admissible k: none");
        return;
    };
    println!("period: {p}");
    match &r.cyclic {
        Some(cs) => {
            for (c, size) in cs.block_sizes.iter().enumerate() {
                let members: Vec<usize> =
                    (0..order).filter(|&v| cs.classes[v] == c).collect();
                println!("class {c} (size {size}): {}", join(&members));
            }
        }
        None => println!("class 0 (size {order}): all vertices (period 1)"),
    }
    let ks: Vec<u64> = r.admissible.iter().map(RotationFactor::k).collect();
    println!("admissible k: {{{}}} with alpha = e^(i*pi*k/{p})", join(&ks));
    println!(
        "even k {{{}}}: signings diagonally similar to the input",
        join(&r.even_ks)
    );
    println!(
        "odd k {{{}}}: signings diagonally similar to the k = 1 witness",
        join(&r.odd_ks)
    );
}

fn analysis_to_json(order: usize, r: &AnalysisReport) -> Value {
    let (classes, block_sizes) = match (&r.cyclic, r.period) {
        (Some(cs), _) => (Some(cs.classes.clone()), Some(cs.block_sizes.clone())),
        (None, Some(_)) => (Some(vec![0; order]), Some(vec![order])),
        (None, None) => (None, None),
    };
    json!({
        "order": order,
        "irreducible": r.irreducible,
        "period": r.period,
        "classes": classes,
        "block_sizes": block_sizes,
        "admissible_k": r.admissible.iter().map(RotationFactor::k).collect::<Vec<_>>(),
        "alphas": r.admissible.iter().map(|rot| rot.to_string()).collect::<Vec<_>>(),
        "even_k": r.even_ks,
        "odd_k": r.odd_ks,
    })
}

fn cmd_construct(g: &GlobalOpts, path: &Path, k: u64) -> Result<ExitCode> {
    let a = io::parse_nonneg_matrix(&read_input(path)?, g.max_order)?;
    let witness = construct_witness(&a, k)?;
    let b = witness.realize();
    if g.json {
        print_json(&io::matrix_to_json(&b));
    } else {
        print!("{}", io::render_matrix(&b));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(g: &GlobalOpts, base: &Path, signed: &Path, k: u64) -> Result<ExitCode> {
    let a = io::parse_nonneg_matrix(&read_input(base)?, g.max_order)?;
    let b = io::parse_matrix(&read_input(signed)?, g.max_order)?;
    let signing = Signing::from_matrix(&b);
    if signing.base() != &a {
        return Err(Error::BaseMismatch);
    }
    let p = Digraph::from_matrix(&a).period()?;
    let alpha = RotationFactor::new(k, p)?;
    match membership(&signing, k)? {
        Some(delta) => {
            if g.json {
                print_json(&json!({
                    "member": true,
                    "alpha": alpha.to_string(),
                    "delta": diagonal_to_json(&delta),
                }));
            } else {
                println!("member of the alpha = {alpha} class: yes");
                println!("delta: {}", render_diagonal(&delta));
            }
            Ok(ExitCode::SUCCESS)
        }
        None => {
            if g.json {
                print_json(&json!({ "member": false, "alpha": alpha.to_string() }));
            } else {
                println!("member of the alpha = {alpha} class: no");
            }
            Ok(ExitCode::from(EXIT_FALSE))
        }
    }
}

fn cmd_similar(g: &GlobalOpts, first: &Path, second: &Path) -> Result<ExitCode> {
    let b1 = Signing::from_matrix(&io::parse_matrix(&read_input(first)?, g.max_order)?);
    let b2 = Signing::from_matrix(&io::parse_matrix(&read_input(second)?, g.max_order)?);
    match decide_diag_similar(&b1, &b2)? {
        Some(delta) => {
            if g.json {
                print_json(&json!({ "similar": true, "delta": diagonal_to_json(&delta) }));
            } else {
                println!("diagonally similar: yes");
                println!("delta: {}", render_diagonal(&delta));
            }
            Ok(ExitCode::SUCCESS)
        }
        None => {
            if g.json {
                print_json(&json!({ "similar": false }));
            } else {
                println!("diagonally similar: no");
            }
            Ok(ExitCode::from(EXIT_FALSE))
        }
    }
}

fn cmd_orient_bipartite(g: &GlobalOpts, graph: &Path) -> Result<ExitCode> {
    let gr = io::parse_graph(&read_input(graph)?, g.max_order)?;
    match bipartition_of(&gr)? {
        Some(bp) => {
            if g.json {
                print_json(&json!({
                    "bipartite": true,
                    "left": bp.left(),
                    "right": bp.right(),
                }));
            } else {
                println!("bipartite: yes");
                println!("left: {}", join(bp.left()));
                println!("right: {}", join(bp.right()));
            }
            Ok(ExitCode::SUCCESS)
        }
        None => {
            if g.json {
                print_json(&json!({ "bipartite": false }));
            } else {
                println!("bipartite: no (the graph contains an odd cycle)");
            }
            Ok(ExitCode::from(EXIT_FALSE))
        }
    }
}

fn cmd_orient_canonical(g: &GlobalOpts, graph: &Path) -> Result<ExitCode> {
    let gr = io::parse_graph(&read_input(graph)?, g.max_order)?;
    match bipartition_of(&gr)? {
        Some(bp) => {
            let o = canonical_orientation(&gr, &bp)?;
            if g.json {
                print_json(&io::orientation_to_json(&o));
            } else {
                print!("{}", io::render_orientation(&o));
            }
            Ok(ExitCode::SUCCESS)
        }
        None => {
            eprintln!("graph is not bipartite; no orientation rotates its spectrum by i");
            Ok(ExitCode::from(EXIT_FALSE))
        }
    }
}

fn cmd_orient_switch(g: &GlobalOpts, orientation: &Path, set: &[usize]) -> Result<ExitCode> {
    let o = io::parse_orientation(&read_input(orientation)?, g.max_order)?;
    let w: BTreeSet<usize> = set.iter().copied().collect();
    let switched = switch(&o, &w)?;
    if g.json {
        print_json(&io::orientation_to_json(&switched));
    } else {
        print!("{}", io::render_orientation(&switched));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_orient_equivalent(g: &GlobalOpts, first: &Path, second: &Path) -> Result<ExitCode> {
    let o1 = io::parse_orientation(&read_input(first)?, g.max_order)?;
    let o2 = io::parse_orientation(&read_input(second)?, g.max_order)?;
    match switching_equivalent(&o1, &o2)? {
        Some(w) => {
            if g.json {
                print_json(&json!({ "equivalent": true, "switch_set": w }));
            } else {
                println!("switching equivalent: yes");
                println!("switch set: {{{}}}", join(&w));
            }
            Ok(ExitCode::SUCCESS)
        }
        None => {
            if g.json {
                print_json(&json!({ "equivalent": false }));
            } else {
                println!("switching equivalent: no");
            }
            Ok(ExitCode::from(EXIT_FALSE))
        }
    }
}

fn cmd_verify(
    g: &GlobalOpts,
    n: usize,
    trials: u64,
    seed: u64,
    exhaustive: bool,
    inject_fault: Option<FaultKind>,
) -> Result<ExitCode> {
    let config = VerifyConfig {
        max_order: n,
        trials,
        seed,
        exhaustive,
        support_cap: g.max_support,
        class_cap: g.max_enum,
        fault: match inject_fault {
            Some(FaultKind::FlipOddRotation) => FaultInjection::FlipOddRotation,
            None => FaultInjection::None,
        },
    };
    let report = specsign::verify::run_verify(&config)?;
    if g.json {
        print_json(&verify_to_json(&report));
    } else {
        print_verify(&report);
    }
    Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_FALSE) })
}

fn print_verify(report: &VerifyReport) {
    for p in &report.properties {
        if p.passed() {
            println!("PASS {} ({} cases)", p.name, p.cases);
        } else {
            println!("FAIL {} ({} of {} cases)", p.name, p.failures, p.cases);
            if let Some(cex) = &p.counterexample {
                println!("counterexample:\n{cex}");
            }
        }
    }
    println!("{}", if report.all_passed() { "all properties passed" } else { "FAILURES detected" });
}

fn verify_to_json(report: &VerifyReport) -> Value {
    json!({
        "passed": report.all_passed(),
        "properties": report
            .properties
            .iter()
            .map(|p| {
                json!({
                    "name": p.name,
                    "cases": p.cases,
                    "failures": p.failures,
                    "counterexample": p.counterexample,
                })
            })
            .collect::<Vec<_>>(),
    })
}
