//! Network reshaping constructions that keep the accepted language, and a
//! bounded differential checker comparing two networks word by word.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_rational::Ratio;
use rayon::prelude::*;
use thiserror::Error;

use crate::engine::{EngineError, RunLimits, RunOutcome, Simulator};
use crate::model::{AhnepNetwork, Alphabet, Graph, NodeId, Processor, Rule, Symbol, Word};
use crate::topology::{build_grid, grid_node_id, is_complete_with_loops, is_grid};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("underlying graph is not a complete graph with loops")]
    NotCompleteWithLoops,
    #[error("network is not shaped like a 4-row grid construction: {0}")]
    NotGridConstruction(String),
    #[error("input alphabets differ")]
    AlphabetMismatch,
    #[error(transparent)]
    Engine(#[from] EngineError),
}

fn fresh_node_id(net: &AhnepNetwork, base: &str) -> NodeId {
    let mut id = base.to_string();
    while net.graph.contains_node(&id) {
        id.push('_');
    }
    id
}

/// Adds a rule-less, filter-less hub `C` and replaces every edge of the
/// complete graph with a spoke to the hub. Original processors are kept.
pub fn to_star(net: &AhnepNetwork) -> Result<AhnepNetwork, TransformError> {
    if !is_complete_with_loops(&net.graph) {
        return Err(TransformError::NotCompleteWithLoops);
    }
    let hub = fresh_node_id(net, "C");
    let mut graph = Graph::new();
    graph.add_node(hub.clone());
    for id in net.graph.nodes() {
        graph.add_node(id);
        graph.add_edge(id, &hub).expect("nodes exist");
    }
    let mut processors = net.processors.clone();
    processors.insert(hub, Processor::new([]));
    Ok(AhnepNetwork {
        name: format!("{}-star", net.name),
        graph,
        processors,
        ..net.clone()
    })
}

/// Marker symbols introduced by the grid construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSymbols {
    /// `X_0 .. X_n`
    pub counters: Vec<Symbol>,
    /// `X_0' .. X_n'`
    pub primed: Vec<Symbol>,
    pub y: Symbol,
    pub y_primed: Symbol,
}

impl GridSymbols {
    fn all(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.counters
            .iter()
            .chain(&self.primed)
            .copied()
            .chain([self.y, self.y_primed])
    }
}

/// A grid network together with how it was derived.
#[derive(Clone, Debug)]
pub struct GridConstruction {
    pub network: AhnepNetwork,
    /// Original node simulated in column `i + 1` of the grid, for `i` in `1..=n`.
    pub columns: Vec<NodeId>,
    pub symbols: GridSymbols,
    /// Suffix appended to every marker name to keep it clear of the original
    /// alphabet; empty when no clash occurred.
    pub suffix: String,
}

fn grid_symbols(n: usize, taken: &Alphabet) -> (GridSymbols, String) {
    let names = |suffix: &str| -> Vec<String> {
        let mut v: Vec<String> = (0..=n).map(|i| format!("X_{i}{suffix}")).collect();
        v.extend((0..=n).map(|i| format!("X_{i}'{suffix}")));
        v.push(format!("Y{suffix}"));
        v.push(format!("Y'{suffix}"));
        v
    };
    let mut attempt = 0usize;
    let (suffix, chosen) = loop {
        let suffix = if attempt == 0 {
            String::new()
        } else {
            format!("~{attempt}")
        };
        let candidate = names(&suffix);
        if candidate.iter().all(|name| taken.find(name).is_none()) {
            break (suffix, candidate);
        }
        attempt += 1;
    };
    let syms: Vec<Symbol> = chosen
        .iter()
        .map(|s| Symbol::new(s).expect("generated names are valid"))
        .collect();
    let symbols = GridSymbols {
        counters: syms[..=n].to_vec(),
        primed: syms[n + 1..2 * n + 2].to_vec(),
        y: syms[2 * n + 2],
        y_primed: syms[2 * n + 3],
    };
    (symbols, suffix)
}

/// Embeds a complete-with-loops network of size `n` into the 4 x (n+1) grid.
///
/// Row 3 holds the original processors (input forbidding contexts extended
/// by `Y` and `X_0`); rows 4, 1 and 2 route a word from any column to any
/// other: row 4 marks it with `Y`s while walking left, column 1 turns one
/// mark into `X_0`, row 1 counts `X_0 -> X_1 -> ...` to the target column
/// and row 2 strips the counter before the word re-enters row 3.
pub fn grid_construction(net: &AhnepNetwork) -> Result<GridConstruction, TransformError> {
    if !is_complete_with_loops(&net.graph) {
        return Err(TransformError::NotCompleteWithLoops);
    }
    let columns: Vec<NodeId> = net.graph.nodes().map(str::to_string).collect();
    let n = columns.len();
    let (sy, suffix) = grid_symbols(n, &net.network_alphabet);
    let x = &sy.counters;
    let xp = &sy.primed;
    let (y, yp) = (sy.y, sy.y_primed);
    let sub = |from, to| Rule::Substitution { from, to };

    let mut procs: BTreeMap<NodeId, Processor> = BTreeMap::new();
    let mut put = |row: usize, col: usize, p: Processor| {
        procs.insert(grid_node_id(row, col), p);
    };

    put(1, 1, Processor::new([sub(x[0], x[1])]).with_pi([x[0]]));
    for i in 1..n {
        put(
            1,
            i + 1,
            Processor::new([sub(x[i], x[i + 1]), sub(x[i], xp[i])]).with_pi([x[i]]),
        );
    }
    put(1, n + 1, Processor::new([sub(x[n], xp[n])]).with_pi([x[n]]));

    put(
        2,
        1,
        Processor::new([Rule::Deletion(y)]).with_pi([x[0]]).with_fo([y]),
    );
    for (i, &mark) in xp.iter().enumerate().skip(1) {
        put(2, i + 1, Processor::new([Rule::Deletion(mark)]).with_pi([mark]));
    }

    put(3, 1, Processor::new([sub(yp, x[0])]).with_pi([yp]));
    for (i, id) in columns.iter().enumerate() {
        let mut p = net.processors.get(id).cloned().unwrap_or_default();
        p.filters.fi.extend([y, x[0]]);
        put(3, i + 2, p);
    }

    put(4, 1, Processor::new([sub(y, yp)]).with_pi([y]));
    for i in 1..=n {
        put(4, i + 1, Processor::new([Rule::Insertion(y)]).with_fi([yp]));
    }

    let column_of = |id: &str| columns.iter().position(|c| c == id).expect("node exists") + 2;
    let network = AhnepNetwork {
        name: format!("{}-grid", net.name),
        input_alphabet: net.input_alphabet.clone(),
        network_alphabet: net.network_alphabet.extended(sy.all()),
        graph: build_grid(4, n + 1).expect("n >= 1"),
        processors: procs,
        input_node: grid_node_id(3, column_of(&net.input_node)),
        output_node: grid_node_id(3, column_of(&net.output_node)),
    };
    Ok(GridConstruction {
        network,
        columns,
        symbols: sy,
        suffix,
    })
}

pub fn to_grid(net: &AhnepNetwork) -> Result<AhnepNetwork, TransformError> {
    grid_construction(net).map(|g| g.network)
}

/// Drops the horizontal edges of rows 2 and 3 of a grid construction,
/// leaving every node with at most three neighbours.
pub fn prune_to_degree3(grid: &AhnepNetwork) -> Result<AhnepNetwork, TransformError> {
    let shape_err = |msg: String| TransformError::NotGridConstruction(msg);
    let total = grid.graph.node_count();
    if !total.is_multiple_of(4) || total < 8 {
        return Err(shape_err(format!("{total} nodes")));
    }
    let cols = total / 4;
    let dims = is_grid(&grid.graph).ok_or_else(|| shape_err("graph is not a grid".into()))?;
    if dims != (4.min(cols), 4.max(cols)) {
        return Err(shape_err(format!("grid is {}x{}", dims.0, dims.1)));
    }
    for row in 1..=4 {
        for col in 1..=cols {
            let id = grid_node_id(row, col);
            if !grid.graph.contains_node(&id) {
                return Err(shape_err(format!("missing node {id}")));
            }
        }
        for col in 1..cols {
            if !grid
                .graph
                .has_edge(&grid_node_id(row, col), &grid_node_id(row, col + 1))
            {
                return Err(shape_err(format!("row {row} is not a horizontal path")));
            }
        }
    }
    let mut graph = grid.graph.clone();
    for row in [2, 3] {
        for col in 1..cols {
            graph.remove_edge(&grid_node_id(row, col), &grid_node_id(row, col + 1));
        }
    }
    Ok(AhnepNetwork {
        name: format!("{}-deg3", grid.name),
        graph,
        ..grid.clone()
    })
}

/// Word-by-word comparison of two networks' verdicts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivReport {
    pub words_tested: usize,
    pub agreements: usize,
    pub disagreements: Vec<(Word, RunOutcome, RunOutcome)>,
    /// Largest `steps_b / steps_a` over words both networks accept in at
    /// least one step; `None` if there is no such word.
    pub step_ratio_max: Option<Ratio<usize>>,
    /// Words on which either run stopped at a resource limit.
    pub inconclusive: Vec<Word>,
    /// Both outcomes for every tested word, in test order.
    pub runs: Vec<(Word, RunOutcome, RunOutcome)>,
}

impl EquivReport {
    pub fn is_equivalent(&self) -> bool {
        self.disagreements.is_empty()
    }

    /// Deterministic plain-text rendering.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let ratio = self
            .step_ratio_max
            .map_or_else(|| "n/a".to_string(), |r| format!("{}/{}", r.numer(), r.denom()));
        let _ = writeln!(
            out,
            "words {} agree {} disagree {} inconclusive {} step-ratio-max {}",
            self.words_tested,
            self.agreements,
            self.disagreements.len(),
            self.inconclusive.len(),
            ratio
        );
        for (w, a, b) in &self.runs {
            let _ = writeln!(out, "{w}\t{a}\t{b}");
        }
        out
    }
}

/// Runs both networks on every distinct word and compares acceptance.
pub fn check_equivalence(
    a: &AhnepNetwork,
    b: &AhnepNetwork,
    words: &[Word],
    limits: &RunLimits,
) -> Result<EquivReport, TransformError> {
    let va: BTreeSet<Symbol> = a.input_alphabet.iter().collect();
    let vb: BTreeSet<Symbol> = b.input_alphabet.iter().collect();
    if va != vb {
        return Err(TransformError::AlphabetMismatch);
    }
    let sim_a = Simulator::new(a)?;
    let sim_b = Simulator::new(b)?;
    let mut seen = BTreeSet::new();
    let distinct: Vec<&Word> = words.iter().filter(|w| seen.insert(*w)).collect();
    let runs = distinct
        .par_iter()
        .map(|w| -> Result<_, TransformError> {
            let (ra, rb) = rayon::join(|| sim_a.run(w, limits, false), || sim_b.run(w, limits, false));
            Ok(((*w).clone(), ra?.0, rb?.0))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut report = EquivReport {
        words_tested: runs.len(),
        agreements: 0,
        disagreements: Vec::new(),
        step_ratio_max: None,
        inconclusive: Vec::new(),
        runs: Vec::new(),
    };
    for (w, ra, rb) in &runs {
        if !ra.is_definitive() || !rb.is_definitive() {
            report.inconclusive.push(w.clone());
        } else if ra.is_accepted() == rb.is_accepted() {
            report.agreements += 1;
            if ra.is_accepted() && ra.steps() > 0 {
                let r = Ratio::new(rb.steps(), ra.steps());
                if report.step_ratio_max.is_none_or(|m| r > m) {
                    report.step_ratio_max = Some(r);
                }
            }
        } else {
            report.disagreements.push((w.clone(), *ra, *rb));
        }
    }
    report.runs = runs;
    Ok(report)
}

/// All words over `alphabet` of length at most `max_len`, shortest first.
pub fn enumerate_words(alphabet: &Alphabet, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Vec::<Symbol>::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * alphabet.len());
        for prefix in &layer {
            for s in alphabet.iter() {
                let mut v = prefix.clone();
                v.push(s);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned().map(Word::from_symbols));
        layer = next;
    }
    out
}
