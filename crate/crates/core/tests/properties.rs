mod common;

use std::collections::BTreeSet;

use ahnep_core::engine::{Configuration, Simulator};
use ahnep_core::formats::{parse_network, serialize_network};
use ahnep_core::model::{ActionMode, Rule, Symbol, Word};
use ahnep_core::semantics::{apply_rule, strong_predicate, weak_predicate};
use ahnep_core::topology::{
    build_complete_with_loops, build_grid, build_ring, build_star, is_complete_with_loops, is_grid, is_ring,
    is_star,
};
use ahnep_core::transform::{to_grid, to_star};
use common::*;
use proptest::prelude::*;
use proptest::sample::Index;

fn alphabet() -> Vec<Symbol> {
    ["a", "b", "c"].map(sym).to_vec()
}

fn word_strategy(max: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(0..3usize, 0..=max)
        .prop_map(|ix| Word::from_symbols(ix.into_iter().map(|i| alphabet()[i]).collect()))
}

fn symbol_set() -> impl Strategy<Value = BTreeSet<Symbol>> {
    proptest::collection::btree_set(0..3usize, 0..=3)
        .prop_map(|ix| ix.into_iter().map(|i| alphabet()[i]).collect())
}

fn rule_strategy() -> impl Strategy<Value = (Rule, ActionMode)> {
    let mode = prop_oneof![
        Just(ActionMode::Any),
        Just(ActionMode::Left),
        Just(ActionMode::Right)
    ];
    (0..3usize, 0..3usize, 0..3usize, mode).prop_map(|(kind, x, y, mode)| {
        let (x, y) = (alphabet()[x], alphabet()[y]);
        match kind {
            0 => (Rule::Substitution { from: x, to: y }, ActionMode::Any),
            1 => (Rule::Deletion(x), mode),
            _ => (Rule::Insertion(y), mode),
        }
    })
}

fn union(a: &Configuration, b: &Configuration) -> Configuration {
    let mut out = a.clone();
    for (id, words) in b.iter() {
        out.get_mut(id).unwrap().extend(words.iter().cloned());
    }
    out
}

/// Random distinct names for `n` nodes.
fn shuffled_names(n: usize, seed: u64) -> Vec<String> {
    use rand::seq::SliceRandom;
    let mut names: Vec<String> = (0..n).map(|i| format!("v{}", i * 7 + 3)).collect();
    names.shuffle(&mut rng(seed));
    names
}

proptest! {
    #[test]
    fn rewriting_changes_length_by_kind((rule, mode) in rule_strategy(), w in word_strategy(6)) {
        let out = apply_rule(&rule, mode, &w).unwrap();
        prop_assert!(!out.is_empty());
        let bound = if mode == ActionMode::Any { w.len() + 1 } else { 1 };
        prop_assert!(out.len() <= bound);
        for r in &out {
            match rule {
                Rule::Substitution { .. } => prop_assert_eq!(r.len(), w.len()),
                Rule::Deletion(_) => prop_assert!(r.len() + 1 == w.len() || r == &w),
                Rule::Insertion(_) => prop_assert_eq!(r.len(), w.len() + 1),
            }
        }
    }

    #[test]
    fn strong_implies_weak(w in word_strategy(5), p in symbol_set(), f in symbol_set()) {
        if strong_predicate(&w, &p, &f) {
            prop_assert!(weak_predicate(&w, &p, &f));
        }
    }

    #[test]
    fn forbidding_more_never_helps(w in word_strategy(5), p in symbol_set(), f in symbol_set(), g in symbol_set()) {
        let wider: BTreeSet<Symbol> = f.union(&g).copied().collect();
        prop_assert!(!weak_predicate(&w, &p, &wider) || weak_predicate(&w, &p, &f));
        prop_assert!(!strong_predicate(&w, &p, &wider) || strong_predicate(&w, &p, &f));
    }

    #[test]
    fn words_evolve_and_travel_independently(seed in any::<u64>(), nodes in 2..=4usize, u in word_strategy(3), v in word_strategy(3)) {
        let net = random_complete_network(&mut rng(seed), nodes, "p");
        let sim = Simulator::new(&net).unwrap();
        let to_v = |w: &Word| Word::from_symbols(
            w.symbols().iter().map(|s| if net.input_alphabet.contains(*s) { *s } else { net.input_alphabet.symbols()[0] }).collect());
        let (cu, cv) = (sim.initial_configuration(&to_v(&u)).unwrap(), sim.initial_configuration(&to_v(&v)).unwrap());
        let both = union(&cu, &cv);
        let eu = sim.evolutionary_step(&cu);
        let ev = sim.evolutionary_step(&cv);
        prop_assert_eq!(sim.evolutionary_step(&both), union(&eu, &ev));
        prop_assert_eq!(
            sim.communication_step(&union(&eu, &ev)),
            union(&sim.communication_step(&eu), &sim.communication_step(&ev))
        );
    }

    #[test]
    fn families_survive_relabeling(n in 2..=9usize, m in 1..=5usize, seed in any::<u64>()) {
        let relabel = |g: &ahnep_core::model::Graph| {
            let ids: Vec<String> = g.nodes().map(str::to_string).collect();
            let names = shuffled_names(ids.len(), seed);
            g.relabeled(|id| names[ids.iter().position(|x| x == id).unwrap()].clone())
        };
        prop_assert!(is_star(&relabel(&build_star(n).unwrap())).is_some());
        prop_assert!(is_ring(&relabel(&build_ring(n).unwrap())).is_some());
        prop_assert!(is_complete_with_loops(&relabel(&build_complete_with_loops(n).unwrap())));
        prop_assert_eq!(is_grid(&relabel(&build_grid(m, n).unwrap())), Some((m.min(n), m.max(n))));
    }

    #[test]
    fn serialization_round_trips(seed in any::<u64>(), nodes in 2..=4usize, pick in any::<Index>()) {
        let net = random_complete_network(&mut rng(seed), nodes, "rt");
        let variants = [to_star(&net).unwrap(), to_grid(&net).unwrap(), net];
        let net = pick.get(&variants);
        let text = serialize_network(net);
        prop_assert_eq!(&parse_network(&text).unwrap(), net);
    }
}
