//! `dg`: validate, inspect, canonicalize, compare and enumerate
//! distinguishing graphs of surface functions.

use std::fmt::Write as _;
use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use dg_core::{
    are_related, canonical_form, enumerate_minimal, graph_to_word, parse_text, serialize_text,
    smooth, surface_report, validate, word_to_graph, DocumentModel, Relation, SignedWord,
    SurfaceSpec, Violation,
};

#[derive(Parser)]
#[command(
    name = "dg",
    version,
    about = "Distinguishing graphs of surface functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RelationArg {
    /// Conjugating homeomorphisms preserve both orientations.
    OrientedConjugate,
    /// The value axis keeps its orientation.
    Conjugate,
    /// Conjugacy with g or with -g.
    Equivalent,
}

impl From<RelationArg> for Relation {
    fn from(arg: RelationArg) -> Relation {
        match arg {
            RelationArg::OrientedConjugate => Relation::OrientedConjugacy,
            RelationArg::Conjugate => Relation::Conjugacy,
            RelationArg::Equivalent => Relation::Equivalence,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the structural invariants; print violations, exit 0 iff valid.
    Validate { file: String },
    /// Surface report and per-vertex table.
    Info {
        file: String,
        #[arg(long)]
        json: bool,
    },
    /// Canonical key (hex) and canonical serialized form; smooths first.
    Canon {
        file: String,
        #[arg(long, value_enum)]
        relation: RelationArg,
    },
    /// Decide the relation between two graphs; exit 0 related, 1 not.
    Compare {
        file1: String,
        file2: String,
        #[arg(long, value_enum)]
        relation: RelationArg,
    },
    /// Build the three-level graph of a word and print it.
    Word2graph {
        #[arg(long)]
        word: String,
    },
    /// Extract the word of a minimal-shape graph; smooths first.
    Graph2word { file: String },
    /// Enumerate minimal functions: representatives, then `count: N`.
    Enum {
        /// g0, g1, g2, ... orientable; n1, n2, ... non-orientable.
        #[arg(long)]
        surface: String,
        #[arg(long, value_enum)]
        relation: RelationArg,
    },
}

enum Failure {
    /// Usage, parse or precondition problem: exit 2.
    Error(String),
    /// `compare` decided "not related": exit 1.
    NotRelated,
}

impl From<dg_core::Error> for Failure {
    fn from(e: dg_core::Error) -> Failure {
        Failure::Error(e.to_string())
    }
}

impl From<dg_core::ParseError> for Failure {
    fn from(e: dg_core::ParseError) -> Failure {
        Failure::Error(e.to_string())
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::Error(format!("stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Error(format!("{path}: {e}")))
    }
}

fn load(path: &str) -> Result<DocumentModel, Failure> {
    let text = read_input(path)?;
    let model = parse_text(&text).map_err(|e| Failure::Error(format!("{path}: {e}")))?;
    Ok(model)
}

/// Parse + validate, reporting violations through stderr with exit 2.
fn load_valid(path: &str) -> Result<dg_core::DistinguishingGraph, Failure> {
    let model = load(path)?;
    let report = validate(&model.graph);
    if !report.is_valid() {
        return Err(Failure::Error(format!("{path}: invalid graph:\n{report}")));
    }
    Ok(model.graph)
}

/// The identifier a violation names, for line lookup in diagnostics.
fn violation_item(v: &Violation) -> Option<dg_core::format::Item> {
    use dg_core::format::Item;
    match v {
        Violation::DuplicateVertex { vertex }
        | Violation::IsolatedVertexCycles { vertex, .. }
        | Violation::OddDegree { vertex, .. } => Some(Item::Vertex(vertex.clone())),
        Violation::DuplicateEdge { edge } | Violation::Coverage { edge, .. } => {
            Some(Item::Edge(edge.clone()))
        }
        Violation::UnknownEndpoint { edge, .. } => Some(Item::Edge(edge.clone())),
        Violation::DuplicateCycle { cycle }
        | Violation::UnknownCycleEdge { cycle, .. }
        | Violation::BrokenWalk { cycle, .. }
        | Violation::UnknownAnchor { cycle, .. }
        | Violation::AnchorNotIsolated { cycle, .. }
        | Violation::BoundaryRole { cycle }
        | Violation::RepairedCycle { cycle }
        | Violation::UnpairedCycle { cycle }
        | Violation::UnknownPairingCycle { cycle } => Some(Item::Cycle(cycle.clone())),
        Violation::MalformedPairing { lower, upper } => {
            Some(Item::Pair(lower.clone(), upper.clone()))
        }
        Violation::TooFewLevels { .. }
        | Violation::BadLevelIndex { .. }
        | Violation::EmptyLevel { .. } => None,
    }
}

fn cmd_validate(file: &str) -> Result<(), Failure> {
    let model = load(file)?;
    let report = validate(&model.graph);
    if report.is_valid() {
        return Ok(());
    }
    let mut out = String::new();
    for v in &report.violations {
        match violation_item(v).and_then(|item| model.line_of(&item)) {
            Some(line) => writeln!(out, "line {line}: {v}").unwrap(),
            None => writeln!(out, "{v}").unwrap(),
        }
    }
    print!("{out}");
    Err(Failure::Error(format!(
        "{file}: {} violation(s)",
        report.violations.len()
    )))
}

fn cmd_info(file: &str, json: bool) -> Result<(), Failure> {
    let graph = load_valid(file)?;
    let report = surface_report(&graph)?;
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        );
        return Ok(());
    }
    let yn = |b: bool| if b { "yes" } else { "no" };
    println!("connected: {}", yn(report.connected));
    println!("realizable: {}", yn(report.realizable));
    match report.orientable {
        Some(o) => println!("orientable: {}", yn(o)),
        None => println!("orientable: undefined"),
    }
    println!("euler-characteristic: {}", report.euler_characteristic);
    match report.genus {
        Some(g) => println!("genus: {g}"),
        None => println!("genus: undefined"),
    }
    println!("vertices:");
    println!(
        "  {:<12} {:>5} {:>6} {:>3} {:>5}  {:<6} {:>5}",
        "name", "level", "degree", "k", "index", "kind", "link"
    );
    for v in &report.vertex_reports {
        println!(
            "  {:<12} {:>5} {:>6} {:>3} {:>5}  {:<6} {:>5}",
            v.vertex,
            v.level,
            v.degree,
            v.local_degree_k,
            v.index,
            v.kind.to_string(),
            v.link_components
        );
    }
    Ok(())
}

fn cmd_canon(file: &str, relation: Relation) -> Result<(), Failure> {
    let graph = smooth(&load_valid(file)?);
    let form = canonical_form(&graph, relation)?;
    let hex: String = form.key.iter().map(|b| format!("{b:02x}")).collect();
    println!("key: {hex}");
    print!("{}", serialize_text(&form.graph));
    Ok(())
}

fn cmd_compare(file1: &str, file2: &str, relation: Relation) -> Result<(), Failure> {
    let g1 = smooth(&load_valid(file1)?);
    let g2 = smooth(&load_valid(file2)?);
    if are_related(&g1, &g2, relation)? {
        println!("related");
        Ok(())
    } else {
        println!("not-related");
        Err(Failure::NotRelated)
    }
}

fn cmd_word2graph(word: &str) -> Result<(), Failure> {
    let word = SignedWord::parse(word)?;
    print!("{}", serialize_text(&word_to_graph(&word)));
    Ok(())
}

fn cmd_graph2word(file: &str) -> Result<(), Failure> {
    let graph = smooth(&load_valid(file)?);
    println!("{}", graph_to_word(&graph)?);
    Ok(())
}

fn cmd_enum(surface: &str, relation: Relation) -> Result<(), Failure> {
    let spec = SurfaceSpec::parse(surface)?;
    let result = enumerate_minimal(spec, relation)?;
    for word in &result.representatives {
        println!("{word}");
    }
    println!("count: {}", result.class_count);
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { file } => cmd_validate(&file),
        Command::Info { file, json } => cmd_info(&file, json),
        Command::Canon { file, relation } => cmd_canon(&file, relation.into()),
        Command::Compare {
            file1,
            file2,
            relation,
        } => cmd_compare(&file1, &file2, relation.into()),
        Command::Word2graph { word } => cmd_word2graph(&word),
        Command::Graph2word { file } => cmd_graph2word(&file),
        Command::Enum { surface, relation } => cmd_enum(&surface, relation.into()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::NotRelated) => ExitCode::from(1),
        Err(Failure::Error(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
