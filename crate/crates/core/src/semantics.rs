//! Rule actions on words and languages, and the random-context predicates
//! behind node filters.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::model::{ActionMode, PredicateStrength, Processor, Rule, RuleKind, Symbol, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("rule {rule} cannot be applied in mode {mode}")]
    IllegalMode { rule: String, mode: &'static str },
    #[error("rule set mixes {0:?} and {1:?} rules")]
    MixedKinds(RuleKind, RuleKind),
}

fn check_mode(rule: &Rule, mode: ActionMode) -> Result<(), SemanticsError> {
    if rule.kind() == RuleKind::Substitution && mode != ActionMode::Any {
        return Err(SemanticsError::IllegalMode {
            rule: rule.to_string(),
            mode: mode.as_str(),
        });
    }
    Ok(())
}

/// Pushes every word of `rule` acting on `w` in `mode` into `out`.
///
/// A deletion in mode `Left`/`Right` whose symbol is not at that end leaves
/// the word unchanged, the same as when the symbol is absent altogether.
pub(crate) fn apply_rule_into(rule: &Rule, mode: ActionMode, w: &Word, out: &mut impl Extend<Word>) {
    let s = w.symbols();
    match (*rule, mode) {
        (Rule::Substitution { from, to }, _) => {
            if !w.contains(from) {
                out.extend([w.clone()]);
                return;
            }
            out.extend(s.iter().enumerate().filter(|(_, &x)| x == from).map(|(i, _)| {
                let mut v = s.to_vec();
                v[i] = to;
                Word::from_symbols(v)
            }));
        }
        (Rule::Deletion(a), ActionMode::Any) => {
            if !w.contains(a) {
                out.extend([w.clone()]);
                return;
            }
            out.extend(s.iter().enumerate().filter(|(_, &x)| x == a).map(|(i, _)| {
                let mut v = s.to_vec();
                v.remove(i);
                Word::from_symbols(v)
            }));
        }
        (Rule::Deletion(a), ActionMode::Right) => match s.split_last() {
            Some((&last, rest)) if last == a => out.extend([Word::from_symbols(rest.to_vec())]),
            _ => out.extend([w.clone()]),
        },
        (Rule::Deletion(a), ActionMode::Left) => match s.split_first() {
            Some((&first, rest)) if first == a => out.extend([Word::from_symbols(rest.to_vec())]),
            _ => out.extend([w.clone()]),
        },
        (Rule::Insertion(b), ActionMode::Any) => {
            out.extend((0..=s.len()).map(|i| {
                let mut v = Vec::with_capacity(s.len() + 1);
                v.extend_from_slice(&s[..i]);
                v.push(b);
                v.extend_from_slice(&s[i..]);
                Word::from_symbols(v)
            }));
        }
        (Rule::Insertion(b), ActionMode::Right) => {
            let mut v = s.to_vec();
            v.push(b);
            out.extend([Word::from_symbols(v)]);
        }
        (Rule::Insertion(b), ActionMode::Left) => {
            let mut v = Vec::with_capacity(s.len() + 1);
            v.push(b);
            v.extend_from_slice(s);
            out.extend([Word::from_symbols(v)]);
        }
    }
}

/// Applies every rule to `w` and pushes the union into `out`; an empty rule
/// set leaves the word unchanged.
pub(crate) fn apply_ruleset_into<'a>(
    rules: impl IntoIterator<Item = &'a Rule>,
    mode: ActionMode,
    w: &Word,
    out: &mut impl Extend<Word>,
) {
    let mut any = false;
    for rule in rules {
        any = true;
        apply_rule_into(rule, mode, w, out);
    }
    if !any {
        out.extend([w.clone()]);
    }
}

/// The set of words obtained by one application of `rule` to `w`.
pub fn apply_rule(rule: &Rule, mode: ActionMode, w: &Word) -> Result<BTreeSet<Word>, SemanticsError> {
    check_mode(rule, mode)?;
    let mut out = BTreeSet::new();
    apply_rule_into(rule, mode, w, &mut out);
    Ok(out)
}

fn check_ruleset<'a>(
    rules: impl IntoIterator<Item = &'a Rule>,
    mode: ActionMode,
) -> Result<(), SemanticsError> {
    let mut kind: Option<RuleKind> = None;
    for rule in rules {
        check_mode(rule, mode)?;
        match kind {
            Some(k) if k != rule.kind() => return Err(SemanticsError::MixedKinds(k, rule.kind())),
            _ => kind = Some(rule.kind()),
        }
    }
    Ok(())
}

/// Union of [`apply_rule`] over a homogeneous rule set. The empty set acts as
/// the identity, so a rule-less node passes words through untouched.
pub fn apply_ruleset(
    rules: &BTreeSet<Rule>,
    mode: ActionMode,
    w: &Word,
) -> Result<BTreeSet<Word>, SemanticsError> {
    check_ruleset(rules, mode)?;
    let mut out = BTreeSet::new();
    apply_ruleset_into(rules, mode, w, &mut out);
    Ok(out)
}

/// Pointwise union of [`apply_ruleset`] over a language.
pub fn apply_ruleset_language<'w>(
    rules: &BTreeSet<Rule>,
    mode: ActionMode,
    language: impl IntoIterator<Item = &'w Word>,
) -> Result<BTreeSet<Word>, SemanticsError> {
    check_ruleset(rules, mode)?;
    let mut out = BTreeSet::new();
    for w in language {
        apply_ruleset_into(rules, mode, w, &mut out);
    }
    Ok(out)
}

/// Every permitting symbol occurs and no forbidding symbol occurs.
pub fn strong_predicate(w: &Word, permitting: &BTreeSet<Symbol>, forbidding: &BTreeSet<Symbol>) -> bool {
    permitting.iter().all(|&p| w.contains(p)) && !forbidding.iter().any(|&f| w.contains(f))
}

/// Some permitting symbol occurs (or there are none) and no forbidding
/// symbol occurs.
pub fn weak_predicate(w: &Word, permitting: &BTreeSet<Symbol>, forbidding: &BTreeSet<Symbol>) -> bool {
    (permitting.is_empty() || permitting.iter().any(|&p| w.contains(p)))
        && !forbidding.iter().any(|&f| w.contains(f))
}

pub fn predicate(
    beta: PredicateStrength,
    w: &Word,
    permitting: &BTreeSet<Symbol>,
    forbidding: &BTreeSet<Symbol>,
) -> bool {
    match beta {
        PredicateStrength::Strong => strong_predicate(w, permitting, forbidding),
        PredicateStrength::Weak => weak_predicate(w, permitting, forbidding),
    }
}

pub fn passes_input(proc: &Processor, w: &Word) -> bool {
    predicate(proc.beta, w, &proc.filters.pi, &proc.filters.fi)
}

pub fn passes_output(proc: &Processor, w: &Word) -> bool {
    predicate(proc.beta, w, &proc.filters.po, &proc.filters.fo)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(n: &str) -> Symbol {
        Symbol::new(n).unwrap()
    }

    fn w(text: &str) -> Word {
        if text.is_empty() {
            return Word::empty();
        }
        Word::from_symbols(text.chars().map(|c| sym(&c.to_string())).collect())
    }

    fn words(items: &[&str]) -> BTreeSet<Word> {
        items.iter().map(|t| w(t)).collect()
    }

    fn set(items: &[&str]) -> BTreeSet<Symbol> {
        items.iter().map(|n| sym(n)).collect()
    }

    fn sub(a: &str, b: &str) -> Rule {
        Rule::Substitution {
            from: sym(a),
            to: sym(b),
        }
    }

    #[test]
    fn substitution_any() {
        assert_eq!(
            apply_rule(&sub("a", "b"), ActionMode::Any, &w("aba")).unwrap(),
            words(&["bba", "abb"])
        );
        assert_eq!(
            apply_rule(&sub("a", "b"), ActionMode::Any, &w("bb")).unwrap(),
            words(&["bb"])
        );
    }

    #[test]
    fn insertion_modes() {
        let ins = Rule::Insertion(sym("Y"));
        assert_eq!(
            apply_rule(&ins, ActionMode::Any, &w("ab")).unwrap(),
            words(&["Yab", "aYb", "abY"])
        );
        assert_eq!(
            apply_rule(&ins, ActionMode::Right, &w("")).unwrap(),
            words(&["Y"])
        );
        assert_eq!(
            apply_rule(&ins, ActionMode::Left, &w("ab")).unwrap(),
            words(&["Yab"])
        );
    }

    #[test]
    fn deletion_at_ends() {
        let del = Rule::Deletion(sym("a"));
        assert_eq!(
            apply_rule(&del, ActionMode::Right, &w("ba")).unwrap(),
            words(&["b"])
        );
        assert_eq!(
            apply_rule(&del, ActionMode::Right, &w("ab")).unwrap(),
            words(&["ab"])
        );
        assert_eq!(
            apply_rule(&del, ActionMode::Left, &w("ab")).unwrap(),
            words(&["b"])
        );
        assert_eq!(
            apply_rule(&del, ActionMode::Left, &w("ba")).unwrap(),
            words(&["ba"])
        );
        assert_eq!(apply_rule(&del, ActionMode::Left, &w("")).unwrap(), words(&[""]));
    }

    #[test]
    fn substitution_rejects_end_modes() {
        for mode in [ActionMode::Left, ActionMode::Right] {
            assert!(matches!(
                apply_rule(&sub("a", "b"), mode, &w("a")),
                Err(SemanticsError::IllegalMode { .. })
            ));
        }
    }

    #[test]
    fn ruleset_union_and_identity() {
        let rules: BTreeSet<Rule> = [sub("a", "b"), sub("a", "c")].into();
        assert_eq!(
            apply_ruleset(&rules, ActionMode::Any, &w("a")).unwrap(),
            words(&["b", "c"])
        );
        assert_eq!(
            apply_ruleset(&BTreeSet::new(), ActionMode::Any, &w("ab")).unwrap(),
            words(&["ab"])
        );
        let del: BTreeSet<Rule> = [Rule::Deletion(sym("a"))].into();
        assert_eq!(
            apply_ruleset(&del, ActionMode::Any, &w("aa")).unwrap(),
            words(&["a"])
        );
    }

    #[test]
    fn ruleset_rejects_mixed_kinds() {
        let rules: BTreeSet<Rule> = [sub("a", "b"), Rule::Deletion(sym("a"))].into();
        assert!(matches!(
            apply_ruleset(&rules, ActionMode::Any, &w("a")),
            Err(SemanticsError::MixedKinds(..))
        ));
    }

    #[test]
    fn language_action() {
        let rules: BTreeSet<Rule> = [sub("a", "b")].into();
        assert_eq!(
            apply_ruleset_language(&rules, ActionMode::Any, &words(&["a", "b"])).unwrap(),
            words(&["b"])
        );
        assert_eq!(
            apply_ruleset_language(&BTreeSet::new(), ActionMode::Any, &words(&["x", "y"])).unwrap(),
            words(&["x", "y"])
        );
        let ins: BTreeSet<Rule> = [Rule::Insertion(sym("a"))].into();
        assert_eq!(
            apply_ruleset_language(&ins, ActionMode::Right, &words(&["", "a"])).unwrap(),
            words(&["a", "aa"])
        );
    }

    #[test]
    fn predicates() {
        assert!(strong_predicate(&w("ab"), &set(&["a"]), &set(&["c"])));
        assert!(!strong_predicate(&w("ab"), &set(&["a", "c"]), &set(&[])));
        assert!(strong_predicate(&w(""), &set(&[]), &set(&[])));
        assert!(weak_predicate(&w("ab"), &set(&[]), &set(&[])));
        assert!(weak_predicate(&w("ab"), &set(&["b", "c"]), &set(&[])));
        assert!(!weak_predicate(&w("ab"), &set(&["c"]), &set(&[])));
        assert!(!weak_predicate(&w("ab"), &set(&[]), &set(&["b"])));
    }

    #[test]
    fn node_filters() {
        let open = Processor::new([]);
        assert!(passes_input(&open, &w("abc")));
        assert!(passes_output(&open, &w("")));
        let strong = Processor::new([])
            .with_beta(PredicateStrength::Strong)
            .with_po([sym("b")]);
        assert!(!passes_output(&strong, &w("a")));
        let marker = Processor::new([]).with_pi([sym("X_0")]);
        let word = Word::from_names(&["X_0", "a"]).unwrap();
        assert!(passes_input(&marker, &word));
        assert!(!passes_input(&marker, &w("a")));
    }
}
