//! Domain types shared by every module: symbols, words, rules, processors,
//! graphs and whole networks, plus structural validation.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{OnceLock, RwLock};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("invalid symbol name {0:?}")]
    InvalidSymbolName(String),
    #[error("alphabet must not be empty")]
    EmptyAlphabet,
    #[error("duplicate symbol {0} in alphabet")]
    DuplicateSymbol(String),
    #[error("rule {lhs} -> {rhs} has no non-empty side")]
    EmptyRule { lhs: String, rhs: String },
    #[error("edge endpoint {0:?} is not a node of the graph")]
    UnknownNode(String),
    #[error("invalid word {0:?}")]
    InvalidWord(String),
}

struct Interner {
    ids: HashMap<&'static str, u32>,
    names: Vec<&'static str>,
}

fn interner() -> &'static RwLock<Interner> {
    static INTERNER: OnceLock<RwLock<Interner>> = OnceLock::new();
    INTERNER.get_or_init(|| {
        RwLock::new(Interner {
            ids: HashMap::new(),
            names: Vec::new(),
        })
    })
}

/// An interned alphabet symbol. Equality is identity of the interned id.
///
/// Symbol names are whitespace-free tokens. The comma (word separator), the
/// lone `.` (empty word), `->` (rule arrow) and a leading `#` (comment) are
/// reserved by the text formats.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(u32);

impl Symbol {
    pub fn new(name: &str) -> Result<Symbol, ModelError> {
        if !Self::is_valid_name(name) {
            return Err(ModelError::InvalidSymbolName(name.to_string()));
        }
        if let Some(&id) = interner().read().expect("interner poisoned").ids.get(name) {
            return Ok(Symbol(id));
        }
        let mut table = interner().write().expect("interner poisoned");
        if let Some(&id) = table.ids.get(name) {
            return Ok(Symbol(id));
        }
        let id = u32::try_from(table.names.len()).expect("symbol table overflow");
        let leaked: &'static str = Box::leak(name.to_string().into_boxed_str());
        table.names.push(leaked);
        table.ids.insert(leaked, id);
        Ok(Symbol(id))
    }

    pub fn is_valid_name(name: &str) -> bool {
        !name.is_empty()
            && name != "."
            && name != "->"
            && !name.starts_with('#')
            && !name.contains(',')
            && !name.chars().any(char::is_whitespace)
    }

    pub fn name(self) -> &'static str {
        interner().read().expect("interner poisoned").names[self.0 as usize]
    }

    pub fn id(self) -> u32 {
        self.0
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An ordered, non-empty, duplicate-free set of symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<Symbol>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = Symbol>) -> Result<Alphabet, ModelError> {
        let mut seen = BTreeSet::new();
        let mut ordered = Vec::new();
        for s in symbols {
            if !seen.insert(s) {
                return Err(ModelError::DuplicateSymbol(s.name().to_string()));
            }
            ordered.push(s);
        }
        if ordered.is_empty() {
            return Err(ModelError::EmptyAlphabet);
        }
        Ok(Alphabet { symbols: ordered })
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Alphabet, ModelError> {
        let symbols = names
            .iter()
            .map(|n| Symbol::new(n.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Alphabet::new(symbols)
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.symbols.contains(&s)
    }

    pub fn position(&self, s: Symbol) -> Option<usize> {
        self.symbols.iter().position(|&x| x == s)
    }

    pub fn find(&self, name: &str) -> Option<Symbol> {
        self.symbols.iter().copied().find(|s| s.name() == name)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn iter(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.symbols.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn is_subset_of(&self, other: &Alphabet) -> bool {
        self.iter().all(|s| other.contains(s))
    }

    /// A copy of `self` with `extra` appended (duplicates skipped).
    pub fn extended(&self, extra: impl IntoIterator<Item = Symbol>) -> Alphabet {
        let mut symbols = self.symbols.clone();
        for s in extra {
            if !symbols.contains(&s) {
                symbols.push(s);
            }
        }
        Alphabet { symbols }
    }
}

/// A finite word over interned symbols; the empty word is allowed.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn from_symbols(symbols: Vec<Symbol>) -> Word {
        Word(symbols)
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Word, ModelError> {
        names
            .iter()
            .map(|n| Symbol::new(n.as_ref()))
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    /// Parses the comma-separated token form used on the command line and in
    /// traces; `.` (or the empty string) is the empty word.
    pub fn parse(text: &str) -> Result<Word, ModelError> {
        let text = text.trim();
        if text.is_empty() || text == "." {
            return Ok(Word::empty());
        }
        text.split(',')
            .map(|tok| Symbol::new(tok.trim()).map_err(|_| ModelError::InvalidWord(text.to_string())))
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.0.contains(&s)
    }

    pub fn count(&self, s: Symbol) -> usize {
        self.0.iter().filter(|&&x| x == s).count()
    }

    /// The set of distinct symbols occurring in the word.
    pub fn alph(&self) -> BTreeSet<Symbol> {
        self.0.iter().copied().collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str(".");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(s.name())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleKind {
    Substitution,
    Deletion,
    Insertion,
}

/// One evolutionary operation. The variants encode which side is ε.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Substitution { from: Symbol, to: Symbol },
    Deletion(Symbol),
    Insertion(Symbol),
}

impl Rule {
    /// Builds a rule from its two sides, `None` standing for ε.
    pub fn from_sides(lhs: Option<Symbol>, rhs: Option<Symbol>) -> Result<Rule, ModelError> {
        match (lhs, rhs) {
            (Some(from), Some(to)) => Ok(Rule::Substitution { from, to }),
            (Some(a), None) => Ok(Rule::Deletion(a)),
            (None, Some(b)) => Ok(Rule::Insertion(b)),
            (None, None) => Err(ModelError::EmptyRule {
                lhs: ".".into(),
                rhs: ".".into(),
            }),
        }
    }

    pub fn kind(&self) -> RuleKind {
        match self {
            Rule::Substitution { .. } => RuleKind::Substitution,
            Rule::Deletion(_) => RuleKind::Deletion,
            Rule::Insertion(_) => RuleKind::Insertion,
        }
    }

    pub fn lhs(&self) -> Option<Symbol> {
        match *self {
            Rule::Substitution { from, .. } => Some(from),
            Rule::Deletion(a) => Some(a),
            Rule::Insertion(_) => None,
        }
    }

    pub fn rhs(&self) -> Option<Symbol> {
        match *self {
            Rule::Substitution { to, .. } => Some(to),
            Rule::Deletion(_) => None,
            Rule::Insertion(b) => Some(b),
        }
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        self.lhs().into_iter().chain(self.rhs())
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |s: Option<Symbol>| s.map_or(".", Symbol::name);
        write!(f, "{} -> {}", side(self.lhs()), side(self.rhs()))
    }
}

/// Where deletion and insertion rules act: anywhere, left end, right end.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ActionMode {
    #[default]
    Any,
    Left,
    Right,
}

impl ActionMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ActionMode::Any => "any",
            ActionMode::Left => "left",
            ActionMode::Right => "right",
        }
    }
}

/// Random-context predicate type used by both filters of a node.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PredicateStrength {
    Strong,
    #[default]
    Weak,
}

impl PredicateStrength {
    pub fn as_str(self) -> &'static str {
        match self {
            PredicateStrength::Strong => "strong",
            PredicateStrength::Weak => "weak",
        }
    }
}

/// Input/output permitting and forbidding contexts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FilterSpec {
    pub pi: BTreeSet<Symbol>,
    pub fi: BTreeSet<Symbol>,
    pub po: BTreeSet<Symbol>,
    pub fo: BTreeSet<Symbol>,
}

impl FilterSpec {
    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.pi
            .iter()
            .chain(&self.fi)
            .chain(&self.po)
            .chain(&self.fo)
            .copied()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Processor {
    pub rules: BTreeSet<Rule>,
    pub mode: ActionMode,
    pub beta: PredicateStrength,
    pub filters: FilterSpec,
}

impl Processor {
    /// A weak, mode-`Any` processor with the given rules and no filters.
    pub fn new(rules: impl IntoIterator<Item = Rule>) -> Processor {
        Processor {
            rules: rules.into_iter().collect(),
            ..Processor::default()
        }
    }

    pub fn with_mode(mut self, mode: ActionMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_beta(mut self, beta: PredicateStrength) -> Self {
        self.beta = beta;
        self
    }

    pub fn with_pi(mut self, syms: impl IntoIterator<Item = Symbol>) -> Self {
        self.filters.pi = syms.into_iter().collect();
        self
    }

    pub fn with_fi(mut self, syms: impl IntoIterator<Item = Symbol>) -> Self {
        self.filters.fi = syms.into_iter().collect();
        self
    }

    pub fn with_po(mut self, syms: impl IntoIterator<Item = Symbol>) -> Self {
        self.filters.po = syms.into_iter().collect();
        self
    }

    pub fn with_fo(mut self, syms: impl IntoIterator<Item = Symbol>) -> Self {
        self.filters.fo = syms.into_iter().collect();
        self
    }

    /// The shared kind of the rule set; `None` when empty.
    pub fn kind(&self) -> Option<RuleKind> {
        self.rules.iter().next().map(Rule::kind)
    }
}

pub type NodeId = String;

/// An undirected edge, stored with endpoints in sorted order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge(NodeId, NodeId);

impl Edge {
    pub fn new(a: &str, b: &str) -> Edge {
        if a <= b {
            Edge(a.to_string(), b.to_string())
        } else {
            Edge(b.to_string(), a.to_string())
        }
    }

    pub fn endpoints(&self) -> (&str, &str) {
        (&self.0, &self.1)
    }

    pub fn is_loop(&self) -> bool {
        self.0 == self.1
    }

    pub fn touches(&self, id: &str) -> bool {
        self.0 == id || self.1 == id
    }

    /// The endpoint opposite `id`, or `id` itself for a loop.
    pub fn other(&self, id: &str) -> Option<&str> {
        if self.0 == id {
            Some(&self.1)
        } else if self.1 == id {
            Some(&self.0)
        } else {
            None
        }
    }
}

/// Undirected graph with optional self-loops and no parallel edges.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    nodes: BTreeSet<NodeId>,
    edges: BTreeSet<Edge>,
}

impl Graph {
    pub fn new() -> Graph {
        Graph::default()
    }

    pub fn add_node(&mut self, id: impl Into<NodeId>) -> bool {
        self.nodes.insert(id.into())
    }

    pub fn add_edge(&mut self, a: &str, b: &str) -> Result<bool, ModelError> {
        for end in [a, b] {
            if !self.nodes.contains(end) {
                return Err(ModelError::UnknownNode(end.to_string()));
            }
        }
        Ok(self.edges.insert(Edge::new(a, b)))
    }

    pub fn remove_edge(&mut self, a: &str, b: &str) -> bool {
        self.edges.remove(&Edge::new(a, b))
    }

    pub fn has_edge(&self, a: &str, b: &str) -> bool {
        self.edges.contains(&Edge::new(a, b))
    }

    pub fn contains_node(&self, id: &str) -> bool {
        self.nodes.contains(id)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &str> + '_ {
        self.nodes.iter().map(String::as_str)
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Neighbours of `id` in id order; a node with a loop lists itself.
    pub fn neighbors(&self, id: &str) -> Vec<&str> {
        let mut out: Vec<&str> = self.edges.iter().filter_map(|e| e.other(id)).collect();
        out.sort_unstable();
        out
    }

    /// Number of incident edges; a loop counts once.
    pub fn degree(&self, id: &str) -> usize {
        self.edges.iter().filter(|e| e.touches(id)).count()
    }

    pub fn has_loop(&self, id: &str) -> bool {
        self.has_edge(id, id)
    }

    /// Returns a copy with every node id passed through `rename`.
    pub fn relabeled(&self, mut rename: impl FnMut(&str) -> NodeId) -> Graph {
        let map: BTreeMap<&str, NodeId> = self.nodes().map(|n| (n, rename(n))).collect();
        Graph {
            nodes: map.values().cloned().collect(),
            edges: self
                .edges
                .iter()
                .map(|e| Edge::new(&map[e.0.as_str()], &map[e.1.as_str()]))
                .collect(),
        }
    }
}

/// An accepting hybrid network of evolutionary processors.
///
/// Action mode and predicate strength are stored per processor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AhnepNetwork {
    pub name: String,
    pub input_alphabet: Alphabet,
    pub network_alphabet: Alphabet,
    pub graph: Graph,
    pub processors: BTreeMap<NodeId, Processor>,
    pub input_node: NodeId,
    pub output_node: NodeId,
}

impl AhnepNetwork {
    pub fn processor(&self, id: &str) -> Option<&Processor> {
        self.processors.get(id)
    }

    pub fn size(&self) -> usize {
        self.graph.node_count()
    }

    pub fn validate(&self) -> ValidationReport {
        validate_network(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub location: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, location: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation {
            location: location.into(),
            message: message.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

fn join(syms: impl IntoIterator<Item = Symbol>) -> String {
    syms.into_iter().map(Symbol::name).collect::<Vec<_>>().join(" ")
}

/// Checks every structural invariant of a network. Never fails; an empty
/// report means the network is well formed.
pub fn validate_network(net: &AhnepNetwork) -> ValidationReport {
    let mut report = ValidationReport::default();
    let u = &net.network_alphabet;

    let stray: Vec<Symbol> = net.input_alphabet.iter().filter(|&s| !u.contains(s)).collect();
    if !stray.is_empty() {
        report.push(
            "input-alphabet",
            format!("symbols not in network alphabet: {}", join(stray)),
        );
    }

    for (field, id) in [("input", &net.input_node), ("output", &net.output_node)] {
        if !net.graph.contains_node(id) {
            report.push(field, format!("node {id} is not in the graph"));
        }
    }

    for e in net.graph.edges() {
        let (a, b) = e.endpoints();
        for end in [a, b] {
            if !net.graph.contains_node(end) {
                report.push(format!("edge {a} {b}"), format!("unknown endpoint {end}"));
            }
        }
    }

    for id in net.graph.nodes() {
        if !net.processors.contains_key(id) {
            report.push(format!("node {id}"), "no processor assigned");
        }
    }

    for (id, proc) in &net.processors {
        let loc = format!("node {id}");
        if !net.graph.contains_node(id) {
            report.push(&loc, "processor for a node that is not in the graph");
        }
        let kinds: BTreeSet<RuleKind> = proc.rules.iter().map(Rule::kind).collect();
        if kinds.len() > 1 {
            report.push(&loc, "rules mix substitution, deletion and insertion");
        }
        if kinds.contains(&RuleKind::Substitution) && proc.mode != ActionMode::Any {
            report.push(
                &loc,
                format!(
                    "mode {} is only defined for deletion and insertion rules",
                    proc.mode.as_str()
                ),
            );
        }
        let f = &proc.filters;
        let clash: Vec<Symbol> = f.pi.intersection(&f.fi).copied().collect();
        if !clash.is_empty() {
            report.push(
                &loc,
                format!(
                    "input contexts pi and fi must be disjoint; shared: {}",
                    join(clash)
                ),
            );
        }
        let clash: Vec<Symbol> = f.po.intersection(&f.fo).copied().collect();
        if !clash.is_empty() {
            report.push(
                &loc,
                format!(
                    "output contexts po and fo must be disjoint; shared: {}",
                    join(clash)
                ),
            );
        }
        let unknown: BTreeSet<Symbol> = proc
            .rules
            .iter()
            .flat_map(Rule::symbols)
            .chain(f.symbols())
            .filter(|&s| !u.contains(s))
            .collect();
        if !unknown.is_empty() {
            report.push(
                &loc,
                format!("symbols not in network alphabet: {}", join(unknown)),
            );
        }
    }
    report
}
