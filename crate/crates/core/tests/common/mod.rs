//! Random network and formula generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use ahnep_core::model::{
    ActionMode, AhnepNetwork, Alphabet, PredicateStrength, Processor, Rule, RuleKind, Symbol,
};
use ahnep_core::sat::{CnfFormula, Literal};
use ahnep_core::topology::build_complete_with_loops;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn sym(name: &str) -> Symbol {
    Symbol::new(name).unwrap()
}

const NAMES: [&str; 4] = ["a", "b", "c", "d"];

/// A uniformly random disjoint pair (permitting, forbidding): each symbol
/// lands in one of the two sets or in neither with equal probability.
fn random_filter_pair(rng: &mut ChaCha8Rng, u: &[Symbol]) -> (BTreeSet<Symbol>, BTreeSet<Symbol>) {
    let (mut p, mut f) = (BTreeSet::new(), BTreeSet::new());
    for &s in u {
        match rng.gen_range(0..3) {
            0 => {
                p.insert(s);
            }
            1 => {
                f.insert(s);
            }
            _ => {}
        }
    }
    (p, f)
}

pub fn random_processor(rng: &mut ChaCha8Rng, u: &[Symbol]) -> Processor {
    let kind = *[RuleKind::Substitution, RuleKind::Deletion, RuleKind::Insertion]
        .choose(rng)
        .unwrap();
    let count = rng.gen_range(0..=2);
    let rules: BTreeSet<Rule> = (0..count)
        .map(|_| {
            let a = *u.choose(rng).unwrap();
            let b = *u.choose(rng).unwrap();
            match kind {
                RuleKind::Substitution => Rule::Substitution { from: a, to: b },
                RuleKind::Deletion => Rule::Deletion(a),
                RuleKind::Insertion => Rule::Insertion(b),
            }
        })
        .collect();
    let mode = match kind {
        RuleKind::Substitution => ActionMode::Any,
        _ => *[ActionMode::Any, ActionMode::Left, ActionMode::Right]
            .choose(rng)
            .unwrap(),
    };
    let beta = if rng.gen_bool(0.5) {
        PredicateStrength::Weak
    } else {
        PredicateStrength::Strong
    };
    let (pi, fi) = random_filter_pair(rng, u);
    let (po, fo) = random_filter_pair(rng, u);
    let mut p = Processor::new(rules).with_mode(mode).with_beta(beta);
    p.filters.pi = pi;
    p.filters.fi = fi;
    p.filters.po = po;
    p.filters.fo = fo;
    p
}

/// A complete-with-loops network on `nodes` nodes over at most four
/// symbols, with random processors and distinct input and output nodes.
pub fn random_complete_network(rng: &mut ChaCha8Rng, nodes: usize, tag: &str) -> AhnepNetwork {
    let u_size = rng.gen_range(2..=4);
    let v_size = rng.gen_range(1..=2);
    let u: Vec<Symbol> = NAMES[..u_size].iter().map(|n| sym(n)).collect();
    let graph = build_complete_with_loops(nodes).unwrap();
    let ids: Vec<String> = graph.nodes().map(str::to_string).collect();
    let processors = ids
        .iter()
        .map(|id| (id.clone(), random_processor(rng, &u)))
        .collect();
    let input = ids.choose(rng).unwrap().clone();
    let output = ids
        .iter()
        .filter(|id| **id != input)
        .collect::<Vec<_>>()
        .choose(rng)
        .copied()
        .unwrap()
        .clone();
    let net = AhnepNetwork {
        name: tag.to_string(),
        input_alphabet: Alphabet::new(u[..v_size].iter().copied()).unwrap(),
        network_alphabet: Alphabet::new(u.iter().copied()).unwrap(),
        graph,
        processors,
        input_node: input,
        output_node: output,
    };
    assert!(net.validate().is_valid());
    net
}

pub fn random_formula(rng: &mut ChaCha8Rng, n: usize, m: usize) -> CnfFormula {
    let clauses = (0..m)
        .map(|_| [0; 3].map(|_| Literal::new(rng.gen_range(1..=n), rng.gen_bool(0.5))))
        .collect();
    CnfFormula { num_vars: n, clauses }
}

/// Every 3-literal clause over `n` variables, taken as a multiset of
/// literals (order inside a clause is irrelevant).
pub fn all_clauses(n: usize) -> Vec<[Literal; 3]> {
    let lits: Vec<Literal> = (1..=n)
        .flat_map(|v| [Literal::new(v, true), Literal::new(v, false)])
        .collect();
    let mut out = Vec::new();
    for i in 0..lits.len() {
        for j in i..lits.len() {
            for k in j..lits.len() {
                out.push([lits[i], lits[j], lits[k]]);
            }
        }
    }
    out
}
