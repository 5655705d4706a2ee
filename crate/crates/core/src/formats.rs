//! Line-oriented network documents and trace rendering.
//!
//! ```text
//! format 1
//! network g1
//! input-alphabet a c
//! alphabet a b c
//! node C
//!   mode any
//!   beta weak
//! node x1
//!   mode any
//!   beta weak
//!   rule a -> b
//!   po b
//! edge C x1
//! input x1
//! output C
//! ```
//!
//! `.` stands for the empty side of a rule; the rule kind follows from which
//! side is empty. Filter lines (`pi`, `fi`, `po`, `fo`) are omitted when the
//! set is empty, `mode` defaults to `any` and `beta` to `weak`. A loop is
//! written `edge x x`. `#` starts a comment.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::engine::{Configuration, Trace};
use crate::model::{
    ActionMode, AhnepNetwork, Alphabet, Graph, NodeId, PredicateStrength, Processor, Rule, Symbol,
    ValidationReport, Word,
};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("document is missing `{0}`")]
    Missing(&'static str),
    #[error("network is not valid:\n{0}")]
    Invalid(ValidationReport),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

#[derive(Default)]
struct Draft {
    name: Option<String>,
    input_alphabet: Option<Alphabet>,
    alphabet: Option<Alphabet>,
    nodes: BTreeMap<NodeId, Processor>,
    node_order: Vec<NodeId>,
    edges: Vec<(usize, String, String)>,
    input: Option<String>,
    output: Option<String>,
}

fn lookup(alphabet: Option<&Alphabet>, name: &str, line: usize) -> Result<Symbol, FormatError> {
    let alphabet = alphabet.ok_or_else(|| syntax(line, "`alphabet` must come before nodes"))?;
    alphabet
        .find(name)
        .ok_or_else(|| syntax(line, format!("unknown symbol {name}")))
}

fn parse_alphabet(args: &[&str], line: usize) -> Result<Alphabet, FormatError> {
    Alphabet::from_names(args).map_err(|e| syntax(line, e.to_string()))
}

fn single<'a>(args: &[&'a str], line: usize, keyword: &str) -> Result<&'a str, FormatError> {
    match args {
        [one] => Ok(one),
        _ => Err(syntax(line, format!("`{keyword}` takes exactly one argument"))),
    }
}

/// Parses and validates a network document.
pub fn parse_network(text: &str) -> Result<AhnepNetwork, FormatError> {
    let mut d = Draft::default();
    let mut saw_format = false;
    let mut current: Option<NodeId> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split_once('#').map_or(raw, |(before, _)| before).trim();
        if content.is_empty() {
            continue;
        }
        let mut parts = content.split_whitespace();
        let keyword = parts.next().expect("non-empty line");
        let args: Vec<&str> = parts.collect();

        if !saw_format {
            if keyword != "format" {
                return Err(syntax(line, "document must start with `format 1`"));
            }
            if args != [FORMAT_VERSION.to_string().as_str()] {
                return Err(syntax(line, format!("unsupported format {}", args.join(" "))));
            }
            saw_format = true;
            continue;
        }

        match keyword {
            "network" => {
                current = None;
                if args.is_empty() {
                    return Err(syntax(line, "`network` needs a name"));
                }
                d.name = Some(args.join(" "));
            }
            "input-alphabet" => {
                current = None;
                d.input_alphabet = Some(parse_alphabet(&args, line)?);
            }
            "alphabet" => {
                current = None;
                d.alphabet = Some(parse_alphabet(&args, line)?);
            }
            "node" => {
                let id = single(&args, line, "node")?.to_string();
                if d.nodes.contains_key(&id) {
                    return Err(syntax(line, format!("node {id} declared twice")));
                }
                d.nodes.insert(id.clone(), Processor::default());
                d.node_order.push(id.clone());
                current = Some(id);
            }
            "mode" | "beta" | "rule" | "pi" | "fi" | "po" | "fo" => {
                let id = current
                    .as_ref()
                    .ok_or_else(|| syntax(line, format!("`{keyword}` outside a node block")))?;
                let proc = d.nodes.get_mut(id).expect("current node exists");
                match keyword {
                    "mode" => {
                        proc.mode = match single(&args, line, "mode")? {
                            "any" => ActionMode::Any,
                            "left" => ActionMode::Left,
                            "right" => ActionMode::Right,
                            other => return Err(syntax(line, format!("unknown mode {other}"))),
                        }
                    }
                    "beta" => {
                        proc.beta = match single(&args, line, "beta")? {
                            "weak" => PredicateStrength::Weak,
                            "strong" => PredicateStrength::Strong,
                            other => return Err(syntax(line, format!("unknown beta {other}"))),
                        }
                    }
                    "rule" => {
                        let [lhs, "->", rhs] = args[..] else {
                            return Err(syntax(line, "rule must read `rule <lhs> -> <rhs>`"));
                        };
                        let side = |s: &str| -> Result<Option<Symbol>, FormatError> {
                            if s == "." {
                                Ok(None)
                            } else {
                                lookup(d.alphabet.as_ref(), s, line).map(Some)
                            }
                        };
                        let rule = Rule::from_sides(side(lhs)?, side(rhs)?)
                            .map_err(|_| syntax(line, "rule `. -> .` has no symbol"))?;
                        proc.rules.insert(rule);
                    }
                    _ => {
                        let set = args
                            .iter()
                            .map(|s| lookup(d.alphabet.as_ref(), s, line))
                            .collect::<Result<BTreeSet<_>, _>>()?;
                        let f = &mut proc.filters;
                        match keyword {
                            "pi" => f.pi = set,
                            "fi" => f.fi = set,
                            "po" => f.po = set,
                            _ => f.fo = set,
                        }
                    }
                }
            }
            "edge" => {
                current = None;
                let [a, b] = args[..] else {
                    return Err(syntax(line, "edge needs two node ids"));
                };
                d.edges.push((line, a.to_string(), b.to_string()));
            }
            "input" => {
                current = None;
                d.input = Some(single(&args, line, "input")?.to_string());
            }
            "output" => {
                current = None;
                d.output = Some(single(&args, line, "output")?.to_string());
            }
            "format" => return Err(syntax(line, "repeated `format` line")),
            other => return Err(syntax(line, format!("unknown keyword {other}"))),
        }
    }

    if !saw_format {
        return Err(FormatError::Missing("format"));
    }
    let mut graph = Graph::new();
    for id in &d.node_order {
        graph.add_node(id.clone());
    }
    for (line, a, b) in &d.edges {
        graph.add_edge(a, b).map_err(|e| syntax(*line, e.to_string()))?;
    }
    let net = AhnepNetwork {
        name: d.name.ok_or(FormatError::Missing("network"))?,
        input_alphabet: d.input_alphabet.ok_or(FormatError::Missing("input-alphabet"))?,
        network_alphabet: d.alphabet.ok_or(FormatError::Missing("alphabet"))?,
        graph,
        processors: d.nodes,
        input_node: d.input.ok_or(FormatError::Missing("input"))?,
        output_node: d.output.ok_or(FormatError::Missing("output"))?,
    };
    let report = net.validate();
    if !report.is_valid() {
        return Err(FormatError::Invalid(report));
    }
    Ok(net)
}

/// Canonical document for a network: nodes and edges in id order, symbols
/// in network-alphabet order, one rule per line.
pub fn serialize_network(net: &AhnepNetwork) -> String {
    let u = &net.network_alphabet;
    let rank = |s: &Symbol| (u.position(*s).unwrap_or(usize::MAX), s.name());
    let names = |syms: &mut Vec<Symbol>| {
        syms.sort_by_key(rank);
        syms.iter().map(|s| s.name()).collect::<Vec<_>>().join(" ")
    };

    let mut out = String::new();
    let _ = writeln!(out, "format {FORMAT_VERSION}");
    let _ = writeln!(out, "network {}", net.name);
    let _ = writeln!(
        out,
        "input-alphabet {}",
        names(&mut net.input_alphabet.symbols().to_vec())
    );
    let _ = writeln!(out, "alphabet {}", names(&mut u.symbols().to_vec()));
    for id in net.graph.nodes() {
        let _ = writeln!(out, "node {id}");
        let Some(p) = net.processors.get(id) else {
            continue;
        };
        let _ = writeln!(out, "  mode {}", p.mode.as_str());
        let _ = writeln!(out, "  beta {}", p.beta.as_str());
        let mut rules: Vec<&Rule> = p.rules.iter().collect();
        rules.sort_by_key(|r| (r.lhs().as_ref().map(rank), r.rhs().as_ref().map(rank)));
        for r in rules {
            let _ = writeln!(out, "  rule {r}");
        }
        for (key, set) in [
            ("pi", &p.filters.pi),
            ("fi", &p.filters.fi),
            ("po", &p.filters.po),
            ("fo", &p.filters.fo),
        ] {
            if !set.is_empty() {
                let _ = writeln!(out, "  {key} {}", names(&mut set.iter().copied().collect()));
            }
        }
    }
    for e in net.graph.edges() {
        let (a, b) = e.endpoints();
        let _ = writeln!(out, "edge {a} {b}");
    }
    let _ = writeln!(out, "input {}", net.input_node);
    let _ = writeln!(out, "output {}", net.output_node);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceFormat {
    Text,
    JsonLines,
}

fn sorted_words(set: &BTreeSet<Word>) -> Vec<String> {
    let mut words: Vec<String> = set.iter().map(Word::to_string).collect();
    words.sort();
    words
}

#[derive(Serialize)]
struct StepRecord<'a> {
    step: usize,
    kind: &'a str,
    nodes: BTreeMap<&'a str, Vec<String>>,
}

pub fn render_configuration(c: &Configuration) -> String {
    let mut out = String::new();
    for (id, set) in c.iter() {
        let _ = writeln!(out, "  {id}: {{{}}}", sorted_words(set).join(" "));
    }
    out
}

/// One block (text) or one JSON object per line (JSON lines) per step.
pub fn serialize_trace(trace: &Trace, format: TraceFormat) -> String {
    let mut out = String::new();
    for entry in &trace.entries {
        match format {
            TraceFormat::Text => {
                let _ = writeln!(out, "step {} {}", entry.step, entry.kind.as_str());
                out.push_str(&render_configuration(&entry.configuration));
            }
            TraceFormat::JsonLines => {
                let record = StepRecord {
                    step: entry.step,
                    kind: entry.kind.as_str(),
                    nodes: entry
                        .configuration
                        .iter()
                        .map(|(id, set)| (id, sorted_words(set)))
                        .collect(),
                };
                out.push_str(&serde_json::to_string(&record).expect("plain data serializes"));
                out.push('\n');
            }
        }
    }
    out
}
