//! The `ulrich` command-line tool.
//!
//! Exit codes: 0 success, 1 validation failure, 2 parse or usage error,
//! 3 verification mismatch.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::builders::{build_ade, build_cyclic, parse_graph, serialize_graph, validate, AdeFamily, ValidationReport};
use crate::classify::{verify_rdp, ClassificationEntry, Classifier, RdpVerification};
use crate::error::Error;
use crate::invariants::{fundamental_cycle, Analysis, Filtration};
use crate::lattice::{Cycle, DualGraph};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

type Int = BigInt;

#[derive(Parser, Debug)]
#[command(name = "ulrich", version, about = "Special and Ulrich cycles on rational surface singularities")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Args, Debug)]
struct GraphInput {
    /// Graph file; `-` or absent reads standard input.
    #[arg(long, value_name = "FILE")]
    graph: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build or load a dual graph and print it in the graph text format.
    Graph {
        #[command(subcommand)]
        source: GraphSource,
    },
    /// Structural checks: connected, negative definite, tree, rational, Gorenstein.
    Validate(GraphInput),
    /// Fundamental cycle on the whole graph or on a connected support.
    Fundamental {
        #[command(flatten)]
        input: GraphInput,
        /// Comma-separated 1-based vertices.
        #[arg(long, value_delimiter = ',')]
        support: Option<Vec<usize>>,
    },
    /// Invariants of one cycle.
    Invariants {
        #[command(flatten)]
        input: GraphInput,
        /// Comma-separated coefficients in vertex order.
        #[arg(long, allow_hyphen_values = true)]
        cycle: String,
    },
    /// Enumerate special and/or Ulrich cycles.
    Classify {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, conflicts_with = "ulrich")]
        special: bool,
        #[arg(long)]
        ulrich: bool,
        /// Largest colength searched for special cycles (default: vertex count + 1).
        #[arg(long, value_name = "K")]
        max_colength: Option<usize>,
        /// Longest Ulrich chain allowed before failing (default: 10 * vertex count).
        #[arg(long, value_name = "N")]
        max_steps: Option<usize>,
    },
    /// Brute-force pointwise classification of all anti-nef Z <= B * Z_0.
    Oracle {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, value_name = "B", default_value_t = 6)]
        bound: u32,
    },
    /// Compare enumerated Ulrich cycles of an ADE graph with the closed-form table.
    VerifyRdp {
        #[arg(long)]
        family: AdeFamily,
        #[arg(long)]
        index: usize,
    },
}

#[derive(Subcommand, Debug)]
enum GraphSource {
    /// Rational double point A_n, D_n or E_6..E_8.
    Ade {
        #[arg(long)]
        family: AdeFamily,
        #[arg(long)]
        index: usize,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Cyclic quotient singularity 1/n(1,q).
    Cyclic {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        q: u64,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Parse a graph file and re-emit it in canonical form.
    Load {
        path: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

/// A failure carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. }
            | Error::Dimension { .. }
            | Error::OutOfRange(_)
            | Error::VertexOutOfRange { .. } => EXIT_USAGE,
            _ => EXIT_VALIDATION,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

/// Result of one command: the rendered document plus an exit code, and
/// findings for stderr.
struct Outcome {
    command: &'static str,
    graph: Option<DualGraph>,
    results: Value,
    table: String,
    code: i32,
    findings: Vec<String>,
}

impl Outcome {
    fn ok(command: &'static str, graph: Option<DualGraph>, results: Value, table: String) -> Self {
        Self { command, graph, results, table, code: EXIT_OK, findings: Vec::new() }
    }
}

/// Parses `args` (including the program name), runs one subcommand and returns
/// the exit code.
pub fn run<I, S>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let format = cli.format;
    match execute(cli.command, stdin) {
        Ok(outcome) => {
            let body = match format {
                Format::Table => outcome.table.clone(),
                Format::Json => {
                    let doc = document(&outcome);
                    serde_json::to_string_pretty(&doc).expect("JSON values serialize") + "\n"
                }
            };
            let _ = out.write_all(body.as_bytes());
            for finding in &outcome.findings {
                let _ = writeln!(err, "{finding}");
            }
            outcome.code
        }
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}

fn document(outcome: &Outcome) -> Value {
    json!({
        "tool_version": env!("CARGO_PKG_VERSION"),
        "command": outcome.command,
        "graph": outcome.graph.as_ref().map(graph_json),
        "results": outcome.results,
    })
}

fn read_graph(input: &GraphInput, stdin: &mut dyn Read) -> Result<DualGraph, Failure> {
    let text = match &input.graph {
        Some(path) if path.as_os_str() != "-" => std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?,
        _ => {
            let mut buf = String::new();
            stdin.read_to_string(&mut buf).map_err(|e| usage(format!("cannot read stdin: {e}")))?;
            buf
        }
    };
    Ok(parse_graph(&text)?)
}

fn parse_cycle(text: &str, graph: &DualGraph) -> Result<Cycle<Int>, Failure> {
    let coeffs = text
        .split(',')
        .map(|t| t.trim().parse::<Int>().map_err(|_| usage(format!("invalid coefficient {t:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if coeffs.len() != graph.vertex_count() {
        return Err(Error::Dimension { expected: graph.vertex_count(), found: coeffs.len() }.into());
    }
    Ok(Cycle::new(coeffs))
}

fn execute(command: Command, stdin: &mut dyn Read) -> Result<Outcome, Failure> {
    match command {
        Command::Graph { source } => cmd_graph(source),
        Command::Validate(input) => cmd_validate(read_graph(&input, stdin)?),
        Command::Fundamental { input, support } => cmd_fundamental(read_graph(&input, stdin)?, support),
        Command::Invariants { input, cycle } => {
            let graph = read_graph(&input, stdin)?;
            let z = parse_cycle(&cycle, &graph)?;
            cmd_invariants(graph, z)
        }
        Command::Classify { input, special, ulrich, max_colength, max_steps } => {
            let graph = read_graph(&input, stdin)?;
            let (want_special, want_ulrich) = match (special, ulrich) {
                (false, false) => (true, true),
                flags => flags,
            };
            cmd_classify(graph, want_special, want_ulrich, max_colength, max_steps)
        }
        Command::Oracle { input, bound } => cmd_oracle(read_graph(&input, stdin)?, bound),
        Command::VerifyRdp { family, index } => cmd_verify(family, index),
    }
}

fn cmd_graph(source: GraphSource) -> Result<Outcome, Failure> {
    let (graph, out) = match source {
        GraphSource::Ade { family, index, out } => (build_ade(family, index)?, out),
        GraphSource::Cyclic { n, q, out } => (build_cyclic(n, q)?, out),
        GraphSource::Load { path, out } => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            (parse_graph(&text)?, out)
        }
    };
    let text = serialize_graph(&graph);
    let mut table = text.clone();
    if let Some(path) = &out {
        std::fs::write(path, &text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
        table = format!("wrote {} ({} vertices)\n", path.display(), graph.vertex_count());
    }
    let results = json!({
        "serialized": text,
        "out": out.map(|p| p.display().to_string()),
    });
    Ok(Outcome::ok("graph", Some(graph), results, table))
}

fn cmd_validate(graph: DualGraph) -> Result<Outcome, Failure> {
    let report = validate::<Int>(&graph);
    let mut table = render_graph(&graph, None, &[]);
    table.push_str(&render_report(&report));
    let mut outcome = Outcome::ok("validate", Some(graph), report_json(&report), table);
    if !report.is_valid_rational() {
        outcome.code = EXIT_VALIDATION;
        outcome.findings = report.failures.clone();
    }
    Ok(outcome)
}

fn cmd_fundamental(graph: DualGraph, support: Option<Vec<usize>>) -> Result<Outcome, Failure> {
    let r = graph.vertex_count();
    let support: Vec<usize> = match support {
        None => (0..r).collect(),
        Some(list) => list
            .into_iter()
            .map(|v| {
                if v == 0 || v > r {
                    Err(Failure::from(Error::VertexOutOfRange { vertex: v, count: r }))
                } else {
                    Ok(v - 1)
                }
            })
            .collect::<Result<_, _>>()?,
    };
    let z = fundamental_cycle::<Int>(&graph, &support)?;
    let table = format!("fundamental cycle on {}: {}\n", vertex_list(&support), z);
    let results = json!({
        "support": support.iter().map(|v| v + 1).collect::<Vec<_>>(),
        "cycle": cycle_json(&z),
    });
    Ok(Outcome::ok("fundamental", Some(graph), results, table))
}

fn cmd_invariants(graph: DualGraph, z: Cycle<Int>) -> Result<Outcome, Failure> {
    let self_int = graph.intersection(&z, &z)?;
    let canonical = graph.canonical_degree(&z)?;
    let genus = graph.virtual_genus(&z)?;
    let anti_nef = z.is_nonnegative() && graph.is_anti_nef(&z)? && !z.is_zero();

    let mut results = json!({
        "cycle": cycle_json(&z),
        "self_intersection": int_json(&self_int),
        "canonical_degree": int_json(&canonical),
        "virtual_genus": int_json(&genus),
        "anti_nef": anti_nef,
    });
    let mut table = format!(
        "Z = {z}\n  Z^2 = {self_int}\n  K.Z = {canonical}\n  p_a(Z) = {genus}\n  anti-nef: {anti_nef}\n"
    );
    let mut findings = Vec::new();
    let mut code = EXIT_OK;

    if !anti_nef {
        findings.push(format!("{z} is not a nonzero anti-nef cycle; ideal-level invariants skipped"));
        code = EXIT_VALIDATION;
    } else {
        let analysis = Analysis::<Int>::new(&graph)?;
        let colength = analysis.colength(&z)?;
        let mult = analysis.multiplicity(&z)?;
        let gens = analysis.min_gens(&z)?;
        let u = analysis.u_invariant(&z)?;
        let chain = analysis.filtration(&z)?;
        let map = results.as_object_mut().expect("object");
        map.insert("colength".into(), int_json(&colength));
        map.insert("multiplicity".into(), int_json(&mult));
        map.insert("min_gens".into(), int_json(&gens));
        map.insert("u_invariant".into(), int_json(&u));
        map.insert("filtration".into(), chain_json(&chain));
        let _ = writeln!(
            table,
            "  colength = {colength}\n  multiplicity = {mult}\n  min_gens = {gens}\n  U(Z) = {u}\n  filtration: {}",
            render_chain(&chain)
        );
        match Classifier::<Int>::new(&graph) {
            Ok(classifier) => {
                let indices = classifier.analysis().special_module_indices(&z)?;
                let special = !indices.is_empty();
                let ulrich = classifier.is_ulrich_cycle(&z)?;
                map.insert("module_indices".into(), json!(indices.iter().map(|i| i + 1).collect::<Vec<_>>()));
                map.insert("special".into(), json!(special));
                map.insert("ulrich".into(), json!(ulrich));
                let _ = writeln!(
                    table,
                    "  special: {special} (module indices {})\n  ulrich: {ulrich}",
                    vertex_list(&indices)
                );
            }
            Err(e) => findings.push(format!("special/Ulrich tests skipped: {e}")),
        }
    }
    Ok(Outcome { command: "invariants", graph: Some(graph), results, table, code, findings })
}

fn cmd_classify(
    graph: DualGraph,
    want_special: bool,
    want_ulrich: bool,
    max_colength: Option<usize>,
    max_steps: Option<usize>,
) -> Result<Outcome, Failure> {
    let classifier = Classifier::<Int>::new(&graph)?;
    let r = graph.vertex_count();
    let mut results = serde_json::Map::new();
    let mut table = render_graph(&graph, classifier.report().multiplicity.as_ref(), &[]);
    if want_special {
        let entries = classifier.enumerate_special(max_colength.unwrap_or(r + 1))?;
        let _ = writeln!(table, "\nspecial cycles: {}", entries.len());
        table.push_str(&render_entries(&graph, &entries));
        results.insert("special".into(), Value::Array(entries.iter().map(entry_json).collect()));
    }
    if want_ulrich {
        let entries = classifier.enumerate_ulrich(max_steps.unwrap_or(classifier.default_max_steps()))?;
        let _ = writeln!(table, "\nulrich cycles: {}", entries.len());
        table.push_str(&render_entries(&graph, &entries));
        results.insert("ulrich".into(), Value::Array(entries.iter().map(entry_json).collect()));
    }
    Ok(Outcome::ok("classify", Some(graph), Value::Object(results), table))
}

fn cmd_oracle(graph: DualGraph, bound: u32) -> Result<Outcome, Failure> {
    if bound == 0 {
        return Err(usage("--bound must be at least 1"));
    }
    let classifier = Classifier::<Int>::new(&graph)?;
    let oracle = classifier.oracle_classify(bound)?;
    let mut table = format!("oracle over anti-nef Z <= {bound} Z_0\n");
    let _ = writeln!(table, "special ({}):", oracle.special.len());
    for z in &oracle.special {
        let _ = writeln!(table, "  {z}");
    }
    let _ = writeln!(table, "ulrich ({}):", oracle.ulrich.len());
    for z in &oracle.ulrich {
        let _ = writeln!(table, "  {z}");
    }
    let results = json!({
        "bound": bound,
        "special": oracle.special.iter().map(cycle_json).collect::<Vec<_>>(),
        "ulrich": oracle.ulrich.iter().map(cycle_json).collect::<Vec<_>>(),
    });
    Ok(Outcome::ok("oracle", Some(graph), results, table))
}

fn cmd_verify(family: AdeFamily, index: usize) -> Result<Outcome, Failure> {
    let graph = build_ade(family, index)?;
    let v: RdpVerification<Int> = verify_rdp(family, index)?;
    let matched = v.is_match();
    let mut table = format!(
        "{family}{index}: {} Ulrich cycles (expected {}), {}\n",
        v.count(),
        v.expected_count,
        if matched { "match" } else { "MISMATCH" }
    );
    for g in &v.expected {
        let _ = writeln!(table, "  {:<8} {}  colength {}", g.label, g.cycle, g.colength);
    }
    for z in &v.missing {
        let _ = writeln!(table, "  missing:    {z}");
    }
    for z in &v.unexpected {
        let _ = writeln!(table, "  unexpected: {z}");
    }
    for (z, want, got) in &v.colength_mismatches {
        let _ = writeln!(table, "  colength of {z}: expected {want}, found {got}");
    }
    let results = json!({
        "family": family.to_string(),
        "index": index,
        "match": matched,
        "count": v.count(),
        "expected_count": v.expected_count,
        "expected": v.expected.iter().map(|g| json!({
            "label": g.label,
            "cycle": cycle_json(&g.cycle),
            "colength": int_json(&g.colength),
        })).collect::<Vec<_>>(),
        "found": v.found.iter().map(entry_json).collect::<Vec<_>>(),
        "missing": v.missing.iter().map(cycle_json).collect::<Vec<_>>(),
        "unexpected": v.unexpected.iter().map(cycle_json).collect::<Vec<_>>(),
        "colength_mismatches": v.colength_mismatches.iter().map(|(z, want, got)| json!({
            "cycle": cycle_json(z),
            "expected": int_json(want),
            "found": int_json(got),
        })).collect::<Vec<_>>(),
    });
    let mut outcome = Outcome::ok("verify-rdp", Some(graph), results, table);
    if !matched {
        outcome.code = EXIT_MISMATCH;
        outcome.findings.push(format!("{family}{index}: enumerated Ulrich cycles differ from the table"));
    }
    Ok(outcome)
}

fn int_json(v: &Int) -> Value {
    match v.to_i64() {
        Some(small) => json!(small),
        None => json!(v.to_string()),
    }
}

fn cycle_json(z: &Cycle<Int>) -> Value {
    Value::Array(z.coeffs().iter().map(int_json).collect())
}

fn graph_json(graph: &DualGraph) -> Value {
    json!({
        "vertices": graph.vertex_count(),
        "weights": graph.weights(),
        "edges": graph.edges().iter().map(|&(i, j)| [i + 1, j + 1]).collect::<Vec<_>>(),
    })
}

fn chain_json(chain: &Filtration<Int>) -> Value {
    json!({
        "base": cycle_json(&chain.base),
        "steps": chain.steps.iter().map(|s| json!({
            "increment": cycle_json(&s.increment),
            "cycle": cycle_json(&s.cycle),
        })).collect::<Vec<_>>(),
    })
}

fn entry_json(e: &ClassificationEntry<Int>) -> Value {
    json!({
        "cycle": cycle_json(&e.cycle),
        "colength": int_json(&e.colength),
        "multiplicity": int_json(&e.multiplicity),
        "min_gens": int_json(&e.min_gens),
        "module_indices": e.module_indices.iter().map(|i| i + 1).collect::<Vec<_>>(),
        "chain": chain_json(&e.chain),
        "kind": e.kind.to_string(),
    })
}

fn report_json(r: &ValidationReport<Int>) -> Value {
    json!({
        "connected": r.connected,
        "negative_definite": r.negative_definite,
        "tree": r.tree,
        "rational": r.rational,
        "gorenstein": r.gorenstein,
        "multiplicity": r.multiplicity.as_ref().map(int_json),
        "failures": r.failures,
    })
}

fn vertex_list(vertices: &[usize]) -> String {
    if vertices.is_empty() {
        return "{}".into();
    }
    let names: Vec<String> = vertices.iter().map(|v| format!("E{}", v + 1)).collect();
    format!("{{{}}}", names.join(","))
}

/// ASCII adjacency list; `marked` vertices get a `*`.
fn render_graph(graph: &DualGraph, multiplicity: Option<&Int>, marked: &[usize]) -> String {
    let mut s = format!("dual graph: {} vertices", graph.vertex_count());
    if let Some(m) = multiplicity {
        let _ = write!(s, ", multiplicity {m}");
    }
    s.push('\n');
    s.push_str(&render_vertices(graph, None, marked));
    s
}

fn render_vertices(graph: &DualGraph, coeffs: Option<&Cycle<Int>>, marked: &[usize]) -> String {
    let mut s = String::new();
    for v in 0..graph.vertex_count() {
        let label = format!("E{}{}", v + 1, if marked.contains(&v) { "*" } else { "" });
        let coeff = coeffs.map(|z| format!(" {:>3}", z.coeff(v))).unwrap_or_default();
        let neighbors: Vec<String> = graph.neighbors(v).iter().map(|w| format!("E{}", w + 1)).collect();
        let _ = writeln!(s, "  {label:<5}{coeff} [{:>3}] -- {}", graph.weight(v), neighbors.join(" "));
    }
    s
}

fn render_chain(chain: &Filtration<Int>) -> String {
    let mut s = chain.base.to_string();
    for step in &chain.steps {
        let _ = write!(s, " +{} -> {}", step.increment, step.cycle);
    }
    s
}

fn render_entries(graph: &DualGraph, entries: &[ClassificationEntry<Int>]) -> String {
    let mut s = String::new();
    for e in entries {
        let _ = writeln!(
            s,
            "Z = {}  kind {}  colength {}  multiplicity {}  min_gens {}",
            e.cycle, e.kind, e.colength, e.multiplicity, e.min_gens
        );
        let _ = writeln!(s, "  chain: {}", render_chain(&e.chain));
        s.push_str(&render_vertices(graph, Some(&e.cycle), &e.module_indices));
    }
    s
}

fn render_report(r: &ValidationReport<Int>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "connected:         {}", r.connected);
    let _ = writeln!(s, "negative definite: {}", r.negative_definite);
    let _ = writeln!(s, "tree:              {}", r.tree);
    let _ = writeln!(s, "rational:          {}", r.rational);
    let _ = writeln!(s, "gorenstein:        {}", r.gorenstein);
    match &r.multiplicity {
        Some(m) => {
            let _ = writeln!(s, "multiplicity:      {m}");
        }
        None => s.push_str("multiplicity:      n/a\n"),
    }
    for f in &r.failures {
        let _ = writeln!(s, "finding: {f}");
    }
    s
}
