//! Computations: initial configuration, alternating evolutionary and
//! communication steps, halting detection and traces.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::model::{AhnepNetwork, NodeId, Processor, Symbol, ValidationReport, Word};
use crate::semantics::{apply_ruleset_into, passes_input, passes_output};

/// Below this many words in a configuration a step runs on the calling
/// thread; above it nodes are processed in parallel.
const PARALLEL_THRESHOLD: usize = 512;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("invalid network:\n{0}")]
    InvalidNetwork(ValidationReport),
    #[error("input word {word} uses symbol {symbol} outside the input alphabet")]
    InvalidWord { word: String, symbol: String },
    #[error("invalid run limits: {0}")]
    InvalidLimits(&'static str),
}

/// Assignment of a word set to every node, in node-id order.
#[derive(Clone, Debug)]
pub struct Configuration {
    ids: Arc<[NodeId]>,
    sets: Vec<BTreeSet<Word>>,
}

impl PartialEq for Configuration {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ids, &other.ids) || self.ids == other.ids) && self.sets == other.sets
    }
}

impl Eq for Configuration {}

impl Configuration {
    pub fn empty(net: &AhnepNetwork) -> Configuration {
        let ids: Arc<[NodeId]> = net.graph.nodes().map(str::to_string).collect();
        Configuration {
            sets: vec![BTreeSet::new(); ids.len()],
            ids,
        }
    }

    pub fn get(&self, id: &str) -> Option<&BTreeSet<Word>> {
        self.index_of(id).map(|i| &self.sets[i])
    }

    pub fn get_mut(&mut self, id: &str) -> Option<&mut BTreeSet<Word>> {
        self.index_of(id).map(|i| &mut self.sets[i])
    }

    fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.binary_search_by(|n| n.as_str().cmp(id)).ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &BTreeSet<Word>)> + '_ {
        self.ids.iter().map(String::as_str).zip(self.sets.iter())
    }

    pub fn node_ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn total_words(&self) -> usize {
        self.sets.iter().map(BTreeSet::len).sum()
    }

    pub fn largest_node(&self) -> usize {
        self.sets.iter().map(BTreeSet::len).max().unwrap_or(0)
    }

    fn content_hash(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.sets.hash(&mut h);
        h.finish()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum HaltingMode {
    /// Reject when a configuration equals the one two steps earlier.
    #[default]
    PaperRule,
    /// Reject when a configuration equals any earlier one of the same parity.
    CycleDetect,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RunLimits {
    pub max_steps: usize,
    pub max_word_len: usize,
    pub max_words_per_node: usize,
    pub halting_mode: HaltingMode,
}

impl Default for RunLimits {
    fn default() -> Self {
        RunLimits {
            max_steps: 10_000,
            max_word_len: 256,
            max_words_per_node: 100_000,
            halting_mode: HaltingMode::PaperRule,
        }
    }
}

impl RunLimits {
    pub fn with_max_steps(mut self, n: usize) -> Self {
        self.max_steps = n;
        self
    }

    pub fn with_max_word_len(mut self, n: usize) -> Self {
        self.max_word_len = n;
        self
    }

    pub fn with_max_words_per_node(mut self, n: usize) -> Self {
        self.max_words_per_node = n;
        self
    }

    pub fn with_halting(mut self, mode: HaltingMode) -> Self {
        self.halting_mode = mode;
        self
    }

    fn check(&self) -> Result<(), EngineError> {
        if self.max_steps == 0 {
            return Err(EngineError::InvalidLimits("max_steps must be at least 1"));
        }
        if self.max_word_len == 0 {
            return Err(EngineError::InvalidLimits("max_word_len must be at least 1"));
        }
        if self.max_words_per_node == 0 {
            return Err(EngineError::InvalidLimits(
                "max_words_per_node must be at least 1",
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RejectReason {
    EvolutionRepeat,
    CommunicationRepeat,
    CycleAtParity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LimitKind {
    MaxSteps,
    MaxWordLen,
    MaxWordsPerNode,
}

/// Verdict of a computation. `steps` is the index of the last configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RunOutcome {
    Accepted { steps: usize },
    Rejected { steps: usize, reason: RejectReason },
    LimitExceeded { limit: LimitKind, steps: usize },
}

impl RunOutcome {
    pub fn is_accepted(&self) -> bool {
        matches!(self, RunOutcome::Accepted { .. })
    }

    pub fn is_rejected(&self) -> bool {
        matches!(self, RunOutcome::Rejected { .. })
    }

    /// Accepted or rejected, as opposed to stopped by a resource limit.
    pub fn is_definitive(&self) -> bool {
        !matches!(self, RunOutcome::LimitExceeded { .. })
    }

    pub fn steps(&self) -> usize {
        match *self {
            RunOutcome::Accepted { steps }
            | RunOutcome::Rejected { steps, .. }
            | RunOutcome::LimitExceeded { steps, .. } => steps,
        }
    }
}

impl std::fmt::Display for RunOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunOutcome::Accepted { steps } => write!(f, "accepted in {steps} steps"),
            RunOutcome::Rejected { steps, reason } => {
                write!(f, "rejected in {steps} steps ({reason:?})")
            }
            RunOutcome::LimitExceeded { limit, steps } => {
                write!(f, "limit {limit:?} exceeded after {steps} steps")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepKind {
    Evolution,
    Communication,
}

impl StepKind {
    pub fn of_step(step: usize) -> StepKind {
        if step % 2 == 1 {
            StepKind::Evolution
        } else {
            StepKind::Communication
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            StepKind::Evolution => "evolution",
            StepKind::Communication => "communication",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub step: usize,
    pub kind: StepKind,
    pub configuration: Configuration,
}

/// Configurations C_1, C_2, ... of one computation (C_0 is not recorded).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trace {
    pub entries: Vec<TraceEntry>,
}

/// Tracks earlier configurations and decides whether a computation halts.
struct HaltDetector {
    mode: HaltingMode,
    output: usize,
    // configurations k-1 and k-2 (PaperRule)
    recent: [Option<Configuration>; 2],
    // content hash -> steps, and the stored configurations (CycleDetect)
    seen: HashMap<(u8, u64), Vec<usize>>,
    stored: BTreeMap<usize, Configuration>,
}

impl HaltDetector {
    fn new(mode: HaltingMode, output: usize) -> Self {
        HaltDetector {
            mode,
            output,
            recent: [None, None],
            seen: HashMap::new(),
            stored: BTreeMap::new(),
        }
    }

    fn check(&self, step: usize, c: &Configuration) -> Option<RunOutcome> {
        if !c.sets[self.output].is_empty() {
            return Some(RunOutcome::Accepted { steps: step });
        }
        // C_0 is the initial configuration, not the result of a step.
        if step < 3 {
            return None;
        }
        let two_back = self.recent[1].as_ref();
        let paper_repeat = two_back.is_some_and(|prev| prev == c);
        let paper_reason = if step % 2 == 1 {
            RejectReason::EvolutionRepeat
        } else {
            RejectReason::CommunicationRepeat
        };
        match self.mode {
            HaltingMode::PaperRule => paper_repeat.then_some(RunOutcome::Rejected {
                steps: step,
                reason: paper_reason,
            }),
            HaltingMode::CycleDetect => {
                if paper_repeat {
                    return Some(RunOutcome::Rejected {
                        steps: step,
                        reason: paper_reason,
                    });
                }
                let key = ((step % 2) as u8, c.content_hash());
                let hit = self
                    .seen
                    .get(&key)
                    .is_some_and(|steps| steps.iter().any(|s| &self.stored[s] == c));
                hit.then_some(RunOutcome::Rejected {
                    steps: step,
                    reason: RejectReason::CycleAtParity,
                })
            }
        }
    }

    fn record(&mut self, step: usize, c: &Configuration) {
        let older = self.recent[0].take();
        self.recent = [Some(c.clone()), older];
        if self.mode == HaltingMode::CycleDetect && step >= 1 {
            let key = ((step % 2) as u8, c.content_hash());
            self.seen.entry(key).or_default().push(step);
            self.stored.insert(step, c.clone());
        }
    }
}

/// Halting verdict for the latest configuration of `history` (indexed by
/// step, starting with C_0), or `None` if the computation continues.
pub fn check_halt(history: &[Configuration], net: &AhnepNetwork, mode: HaltingMode) -> Option<RunOutcome> {
    let (last, earlier) = history.split_last()?;
    let output = net.graph.nodes().position(|n| n == net.output_node)?;
    let mut detector = HaltDetector::new(mode, output);
    for (step, c) in earlier.iter().enumerate() {
        detector.record(step, c);
    }
    detector.check(earlier.len(), last)
}

/// A validated network prepared for repeated runs.
pub struct Simulator {
    ids: Arc<[NodeId]>,
    procs: Vec<Processor>,
    neighbors: Vec<Vec<usize>>,
    input_alphabet: BTreeSet<Symbol>,
    input: usize,
    output: usize,
}

impl Simulator {
    pub fn new(net: &AhnepNetwork) -> Result<Simulator, EngineError> {
        let report = net.validate();
        if !report.is_valid() {
            return Err(EngineError::InvalidNetwork(report));
        }
        Ok(Self::compile(net))
    }

    fn compile(net: &AhnepNetwork) -> Simulator {
        let ids: Arc<[NodeId]> = net.graph.nodes().map(str::to_string).collect();
        let index = |id: &str| ids.binary_search_by(|n| n.as_str().cmp(id)).ok();
        let neighbors = ids
            .iter()
            .map(|id| net.graph.neighbors(id).into_iter().filter_map(index).collect())
            .collect();
        let procs = ids
            .iter()
            .map(|id| net.processors.get(id).cloned().unwrap_or_default())
            .collect();
        Simulator {
            procs,
            neighbors,
            input_alphabet: net.input_alphabet.iter().collect(),
            input: index(&net.input_node).unwrap_or(0),
            output: index(&net.output_node).unwrap_or(0),
            ids,
        }
    }

    pub fn initial_configuration(&self, w: &Word) -> Result<Configuration, EngineError> {
        if let Some(bad) = w.symbols().iter().find(|s| !self.input_alphabet.contains(s)) {
            return Err(EngineError::InvalidWord {
                word: w.to_string(),
                symbol: bad.name().to_string(),
            });
        }
        let mut sets = vec![BTreeSet::new(); self.ids.len()];
        sets[self.input].insert(w.clone());
        Ok(Configuration {
            ids: self.ids.clone(),
            sets,
        })
    }

    fn per_node<T: Send>(&self, c: &Configuration, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
        if c.total_words() >= PARALLEL_THRESHOLD {
            (0..self.ids.len()).into_par_iter().map(f).collect()
        } else {
            (0..self.ids.len()).map(f).collect()
        }
    }

    /// One evolutionary step; words longer than `max_len` are discarded and
    /// counted in the second component.
    fn evolve(&self, c: &Configuration, max_len: usize) -> (Configuration, usize) {
        let results = self.per_node(c, |x| {
            let proc = &self.procs[x];
            let mut out = BTreeSet::new();
            for w in &c.sets[x] {
                apply_ruleset_into(&proc.rules, proc.mode, w, &mut out);
            }
            let before = out.len();
            out.retain(|w| w.len() <= max_len);
            let dropped = before - out.len();
            (out, dropped)
        });
        let dropped = results.iter().map(|r| r.1).sum();
        let sets = results.into_iter().map(|r| r.0).collect();
        (
            Configuration {
                ids: self.ids.clone(),
                sets,
            },
            dropped,
        )
    }

    fn communicate(&self, c: &Configuration) -> Configuration {
        let leaving: Vec<Vec<&Word>> = self.per_node(c, |y| {
            c.sets[y]
                .iter()
                .filter(|w| passes_output(&self.procs[y], w))
                .collect()
        });
        let sets = self.per_node(c, |x| {
            let proc = &self.procs[x];
            let mut out: BTreeSet<Word> = c.sets[x]
                .iter()
                .filter(|w| !passes_output(proc, w))
                .cloned()
                .collect();
            for &y in &self.neighbors[x] {
                for w in &leaving[y] {
                    if passes_input(proc, w) && !out.contains(*w) {
                        out.insert((*w).clone());
                    }
                }
            }
            out
        });
        Configuration {
            ids: self.ids.clone(),
            sets,
        }
    }

    pub fn evolutionary_step(&self, c: &Configuration) -> Configuration {
        self.evolve(c, usize::MAX).0
    }

    pub fn communication_step(&self, c: &Configuration) -> Configuration {
        self.communicate(c)
    }

    pub fn run(
        &self,
        w: &Word,
        limits: &RunLimits,
        want_trace: bool,
    ) -> Result<(RunOutcome, Option<Trace>), EngineError> {
        limits.check()?;
        let mut current = self.initial_configuration(w)?;
        let mut trace = want_trace.then(Trace::default);
        let mut detector = HaltDetector::new(limits.halting_mode, self.output);
        if let Some(verdict) = detector.check(0, &current) {
            return Ok((verdict, trace));
        }
        detector.record(0, &current);
        let mut dropped = 0usize;
        let mut step = 0usize;
        loop {
            step += 1;
            let kind = StepKind::of_step(step);
            let next = match kind {
                StepKind::Evolution => {
                    let (next, lost) = self.evolve(&current, limits.max_word_len);
                    dropped += lost;
                    next
                }
                StepKind::Communication => self.communicate(&current),
            };
            if let Some(t) = trace.as_mut() {
                t.entries.push(TraceEntry {
                    step,
                    kind,
                    configuration: next.clone(),
                });
            }
            if let Some(verdict) = detector.check(step, &next) {
                // A rejection is only sound if no word was discarded.
                let verdict = match verdict {
                    RunOutcome::Rejected { steps, .. } if dropped > 0 => RunOutcome::LimitExceeded {
                        limit: LimitKind::MaxWordLen,
                        steps,
                    },
                    v => v,
                };
                return Ok((verdict, trace));
            }
            if next.largest_node() > limits.max_words_per_node {
                let limit = LimitKind::MaxWordsPerNode;
                return Ok((RunOutcome::LimitExceeded { limit, steps: step }, trace));
            }
            if step >= limits.max_steps {
                let limit = LimitKind::MaxSteps;
                return Ok((RunOutcome::LimitExceeded { limit, steps: step }, trace));
            }
            detector.record(step, &next);
            current = next;
        }
    }

    /// Runs every distinct word independently.
    pub fn accepts_all(
        &self,
        words: &[Word],
        limits: &RunLimits,
    ) -> BTreeMap<Word, Result<RunOutcome, EngineError>> {
        let distinct: BTreeSet<&Word> = words.iter().collect();
        let distinct: Vec<&Word> = distinct.into_iter().collect();
        distinct
            .par_iter()
            .map(|w| ((*w).clone(), self.run(w, limits, false).map(|r| r.0)))
            .collect::<Vec<_>>()
            .into_iter()
            .collect()
    }
}

pub fn initial_configuration(net: &AhnepNetwork, w: &Word) -> Result<Configuration, EngineError> {
    Simulator::compile(net).initial_configuration(w)
}

pub fn evolutionary_step(net: &AhnepNetwork, c: &Configuration) -> Configuration {
    Simulator::compile(net).evolutionary_step(c)
}

pub fn communication_step(net: &AhnepNetwork, c: &Configuration) -> Configuration {
    Simulator::compile(net).communication_step(c)
}

pub fn run(
    net: &AhnepNetwork,
    w: &Word,
    limits: &RunLimits,
    want_trace: bool,
) -> Result<(RunOutcome, Option<Trace>), EngineError> {
    Simulator::new(net)?.run(w, limits, want_trace)
}

pub fn accepts_all(
    net: &AhnepNetwork,
    words: &[Word],
    limits: &RunLimits,
) -> Result<BTreeMap<Word, Result<RunOutcome, EngineError>>, EngineError> {
    Ok(Simulator::new(net)?.accepts_all(words, limits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ActionMode, Alphabet, Graph, Processor, Rule};

    fn sym(n: &str) -> Symbol {
        Symbol::new(n).unwrap()
    }

    fn word(t: &str) -> Word {
        Word::parse(t).unwrap()
    }

    fn words(items: &[&str]) -> BTreeSet<Word> {
        items.iter().map(|t| word(t)).collect()
    }

    fn net(
        nodes: &[(&str, Processor)],
        edges: &[(&str, &str)],
        input: &str,
        output: &str,
        v: &[&str],
        u: &[&str],
    ) -> AhnepNetwork {
        let mut graph = Graph::new();
        for (id, _) in nodes {
            graph.add_node(*id);
        }
        for (a, b) in edges {
            graph.add_edge(a, b).unwrap();
        }
        AhnepNetwork {
            name: "t".into(),
            input_alphabet: Alphabet::from_names(v).unwrap(),
            network_alphabet: Alphabet::from_names(u).unwrap(),
            graph,
            processors: nodes.iter().map(|(id, p)| (id.to_string(), p.clone())).collect(),
            input_node: input.into(),
            output_node: output.into(),
        }
    }

    /// One satellite rewriting a to b and emitting only b-words, plus an open hub.
    fn gamma1(v: &[&str]) -> AhnepNetwork {
        let x1 = Processor::new([Rule::Substitution {
            from: sym("a"),
            to: sym("b"),
        }])
        .with_po([sym("b")]);
        net(
            &[("x1", x1), ("C", Processor::new([]))],
            &[("x1", "C")],
            "x1",
            "C",
            v,
            &["a", "b", "c"],
        )
    }

    #[test]
    fn initial_configuration_places_word() {
        let g = gamma1(&["a", "b"]);
        let c = initial_configuration(&g, &word("a,b")).unwrap();
        assert_eq!(c.get("x1").unwrap(), &words(&["a,b"]));
        assert!(c.get("C").unwrap().is_empty());
        let c = initial_configuration(&g, &Word::empty()).unwrap();
        assert_eq!(c.get("x1").unwrap(), &words(&["."]));
        assert!(matches!(
            initial_configuration(&g, &word("c")),
            Err(EngineError::InvalidWord { .. })
        ));
    }

    #[test]
    fn evolution_applies_node_rules() {
        let g = gamma1(&["a"]);
        let mut c = Configuration::empty(&g);
        c.get_mut("x1").unwrap().insert(word("a"));
        c.get_mut("C").unwrap().insert(word("c"));
        let next = evolutionary_step(&g, &c);
        assert_eq!(next.get("x1").unwrap(), &words(&["b"]));
        assert_eq!(next.get("C").unwrap(), &words(&["c"]));

        let ins = Processor::new([Rule::Insertion(sym("Y"))]);
        let n2 = net(&[("x", ins)], &[], "x", "x", &["a", "b"], &["a", "b", "Y"]);
        let mut c = Configuration::empty(&n2);
        c.get_mut("x").unwrap().insert(word("a,b"));
        let next = evolutionary_step(&n2, &c);
        assert_eq!(next.get("x").unwrap(), &words(&["Y,a,b", "a,Y,b", "a,b,Y"]));
    }

    #[test]
    fn communication_moves_keeps_and_loses() {
        // x emits everything; y admits only words with b; no loop on x.
        let x = Processor::new([]);
        let y = Processor::new([]).with_pi([sym("b")]).with_po([sym("z")]);
        let g = net(
            &[("x", x), ("y", y)],
            &[("x", "y")],
            "x",
            "y",
            &["a", "b"],
            &["a", "b", "z"],
        );
        let mut c = Configuration::empty(&g);
        c.get_mut("x").unwrap().extend([word("a"), word("b")]);
        c.get_mut("y").unwrap().insert(word("a,b"));
        let next = communication_step(&g, &c);
        assert!(next.get("x").unwrap().is_empty(), "a is lost, b moves on");
        assert_eq!(next.get("y").unwrap(), &words(&["b", "a,b"]));
    }

    #[test]
    fn loop_edge_returns_word_to_sender() {
        let x = Processor::new([]);
        let g = net(
            &[("x", x), ("o", Processor::new([]).with_pi([sym("z")]))],
            &[("x", "x"), ("x", "o")],
            "x",
            "o",
            &["a"],
            &["a", "z"],
        );
        let mut c = Configuration::empty(&g);
        c.get_mut("x").unwrap().insert(word("a"));
        // (C(x) - tau_x(C(x))) = {} ; from y = x: tau_x ∩ rho_x = {a}; from o: {}
        let next = communication_step(&g, &c);
        assert_eq!(next.get("x").unwrap(), &words(&["a"]));
        assert!(next.get("o").unwrap().is_empty());
    }

    #[test]
    fn gamma1_accepts_a_in_two_steps() {
        let (outcome, trace) = run(&gamma1(&["a", "c"]), &word("a"), &RunLimits::default(), true).unwrap();
        assert_eq!(outcome, RunOutcome::Accepted { steps: 2 });
        let trace = trace.unwrap();
        assert_eq!(trace.entries.len(), 2);
        assert_eq!(trace.entries[0].configuration.get("x1").unwrap(), &words(&["b"]));
        assert_eq!(trace.entries[1].configuration.get("C").unwrap(), &words(&["b"]));
    }

    #[test]
    fn gamma1_rejects_stuck_word() {
        let (outcome, _) = run(&gamma1(&["a", "c"]), &word("c"), &RunLimits::default(), false).unwrap();
        assert_eq!(
            outcome,
            RunOutcome::Rejected {
                steps: 3,
                reason: RejectReason::EvolutionRepeat
            }
        );
    }

    #[test]
    fn growing_words_hit_step_limit() {
        let xi = Processor::new([Rule::Insertion(sym("a"))])
            .with_mode(ActionMode::Right)
            .with_po([sym("Z")]);
        let xo = Processor::new([]).with_pi([sym("Z")]);
        let g = net(
            &[("in", xi), ("out", xo)],
            &[("in", "out")],
            "in",
            "out",
            &["a"],
            &["a", "Z"],
        );
        let limits = RunLimits::default().with_max_steps(50);
        let (outcome, _) = run(&g, &word("a"), &limits, false).unwrap();
        assert_eq!(
            outcome,
            RunOutcome::LimitExceeded {
                limit: LimitKind::MaxSteps,
                steps: 50
            }
        );
        let short = limits.with_max_word_len(10).with_max_steps(100);
        let (outcome, _) = run(&g, &word("a"), &short, false).unwrap();
        assert!(matches!(
            outcome,
            RunOutcome::LimitExceeded {
                limit: LimitKind::MaxWordLen,
                ..
            }
        ));
    }

    #[test]
    fn input_equal_output_accepts_immediately() {
        let g = net(&[("x", Processor::new([]))], &[], "x", "x", &["a"], &["a"]);
        let (outcome, _) = run(&g, &word("a"), &RunLimits::default(), false).unwrap();
        assert_eq!(outcome, RunOutcome::Accepted { steps: 0 });
    }

    /// Two identity nodes that trade a word back and forth: the word is at
    /// `p` in C_0, C_1, at `q` in C_2, C_3, back at `p` in C_4, C_5.
    fn shuttle() -> AhnepNetwork {
        let p = Processor::new([]).with_pi([sym("a")]);
        let q = Processor::new([]).with_pi([sym("a")]);
        let o = Processor::new([]).with_pi([sym("z")]);
        net(
            &[("p", p), ("q", q), ("o", o)],
            &[("p", "q"), ("q", "o")],
            "p",
            "o",
            &["a"],
            &["a", "z"],
        )
    }

    #[test]
    fn period_four_only_caught_by_cycle_detection() {
        let g = shuttle();
        let limits = RunLimits::default().with_max_steps(40);
        let (paper, _) = run(&g, &word("a"), &limits, false).unwrap();
        assert_eq!(
            paper,
            RunOutcome::LimitExceeded {
                limit: LimitKind::MaxSteps,
                steps: 40
            }
        );
        let (cycle, _) = run(
            &g,
            &word("a"),
            &limits.with_halting(HaltingMode::CycleDetect),
            false,
        )
        .unwrap();
        assert_eq!(
            cycle,
            RunOutcome::Rejected {
                steps: 5,
                reason: RejectReason::CycleAtParity
            }
        );
    }

    #[test]
    fn check_halt_on_histories() {
        let g = gamma1(&["a", "c"]);
        let sim = Simulator::new(&g).unwrap();
        let c0 = sim.initial_configuration(&word("c")).unwrap();
        let c1 = sim.evolutionary_step(&c0);
        let c2 = sim.communication_step(&c1);
        let c3 = sim.evolutionary_step(&c2);
        let history = vec![c0.clone(), c1.clone(), c2.clone()];
        assert_eq!(check_halt(&history, &g, HaltingMode::PaperRule), None);
        let history = vec![c0, c1, c2, c3];
        assert_eq!(
            check_halt(&history, &g, HaltingMode::PaperRule),
            Some(RunOutcome::Rejected {
                steps: 3,
                reason: RejectReason::EvolutionRepeat
            })
        );
        let same = net(&[("x", Processor::new([]))], &[], "x", "x", &["a"], &["a"]);
        let c0 = initial_configuration(&same, &word("a")).unwrap();
        assert_eq!(
            check_halt(&[c0], &same, HaltingMode::PaperRule),
            Some(RunOutcome::Accepted { steps: 0 })
        );
    }

    #[test]
    fn accepts_all_deduplicates() {
        let g = gamma1(&["a", "c"]);
        let out = accepts_all(&g, &[word("a"), word("c"), word("a")], &RunLimits::default()).unwrap();
        assert_eq!(out.len(), 2);
        assert!(out[&word("a")].as_ref().unwrap().is_accepted());
        assert!(out[&word("c")].as_ref().unwrap().is_rejected());
        assert!(accepts_all(&g, &[], &RunLimits::default()).unwrap().is_empty());
    }

    #[test]
    fn zero_limits_rejected() {
        let g = gamma1(&["a"]);
        let bad = RunLimits::default().with_max_steps(0);
        assert!(matches!(
            run(&g, &word("a"), &bad, false),
            Err(EngineError::InvalidLimits(_))
        ));
    }
}
