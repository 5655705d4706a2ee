//! 3-CNF satisfiability decided by a ring network.
//!
//! For a formula over `n` variables with `m` clauses the network has ring
//! nodes `x1..x(n+m+1)` and the output centre `x0`:
//!
//! * `x1..xn` generate assignments. Node `i` rewrites `v_i` to `T_i` or
//!   `F_i`; set semantics keeps both branches, so all `2^n` assignment words
//!   leave node `n` together. A node admits only words still holding `v_i`
//!   and no longer holding `v_(i-1)`, and releases a word once `v_i` is gone.
//! * `x(n+1)` appends the clause-stage marker `s_0`.
//! * `x(n+1+j)` checks clause `j`: its weak input filter admits a word iff
//!   one of the clause's literal symbols occurs, and it advances
//!   `s_(j-1)` to `s_j`. Forbidding every other marker keeps words moving
//!   forward around the ring.
//! * The centre admits words carrying `s_m`, i.e. assignments that passed
//!   every clause.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::engine::{EngineError, RunLimits, RunOutcome, Simulator};
use crate::model::{AhnepNetwork, Alphabet, PredicateStrength, Processor, Rule, Symbol, Word};
use crate::topology::build_ring;

/// Largest variable count the exhaustive oracle accepts.
pub const BRUTE_FORCE_MAX_VARS: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("formula needs at least one variable and one clause")]
    EmptyFormula,
    #[error("{0} variables is beyond the brute-force limit of {BRUTE_FORCE_MAX_VARS}")]
    TooManyVariables(usize),
    #[error("network stopped without a verdict: {0}")]
    LimitExceeded(RunOutcome),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    /// 1-based variable index.
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn new(var: usize, positive: bool) -> Literal {
        Literal { var, positive }
    }

    fn holds(&self, assignment: u64) -> bool {
        (assignment >> (self.var - 1) & 1 == 1) == self.positive
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<[Literal; 3]>,
}

fn parse_err(line: usize, message: impl Into<String>) -> SatError {
    SatError::Parse {
        line,
        message: message.into(),
    }
}

/// Reads DIMACS CNF. Clauses narrower than three literals are padded by
/// repeating their last literal; wider clauses are an error.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, SatError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if header.is_some() || parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(parse_err(line_no, format!("malformed header {line:?}")));
            }
            let n = parts[2]
                .parse()
                .map_err(|_| parse_err(line_no, "variable count is not a number"))?;
            let m = parts[3]
                .parse()
                .map_err(|_| parse_err(line_no, "clause count is not a number"))?;
            header = Some((n, m));
            continue;
        }
        let (n, _) = header.ok_or_else(|| parse_err(line_no, "clause before header"))?;
        for tok in line.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| parse_err(line_no, format!("bad literal {tok:?}")))?;
            if lit == 0 {
                let Some(&last) = current.last() else {
                    return Err(parse_err(line_no, "empty clause"));
                };
                if current.len() > 3 {
                    return Err(parse_err(
                        line_no,
                        format!("clause has {} literals", current.len()),
                    ));
                }
                while current.len() < 3 {
                    current.push(last);
                }
                clauses.push([current[0], current[1], current[2]]);
                current.clear();
                continue;
            }
            let var = lit.unsigned_abs() as usize;
            if var > n {
                return Err(parse_err(line_no, format!("variable {var} exceeds declared {n}")));
            }
            current.push(Literal::new(var, lit > 0));
        }
    }
    let (n, m) = header.ok_or_else(|| parse_err(last_line, "missing header"))?;
    if !current.is_empty() {
        return Err(parse_err(last_line, "last clause is not terminated by 0"));
    }
    if clauses.len() != m {
        return Err(parse_err(
            last_line,
            format!("header declares {m} clauses, found {}", clauses.len()),
        ));
    }
    Ok(CnfFormula { num_vars: n, clauses })
}

impl CnfFormula {
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                let v = lit.var as i64;
                out.push_str(&format!("{} ", if lit.positive { v } else { -v }));
            }
            out.push_str("0\n");
        }
        out
    }

    fn satisfied_by(&self, assignment: u64) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.holds(assignment)))
    }
}

/// Tries all `2^n` assignments.
pub fn brute_force_sat(f: &CnfFormula) -> Result<bool, SatError> {
    if f.num_vars > BRUTE_FORCE_MAX_VARS {
        return Err(SatError::TooManyVariables(f.num_vars));
    }
    Ok((0..1u64 << f.num_vars).any(|a| f.satisfied_by(a)))
}

struct SatSymbols {
    var: Vec<Symbol>,
    truth: Vec<Symbol>,
    falsity: Vec<Symbol>,
    stage: Vec<Symbol>,
}

impl SatSymbols {
    fn new(n: usize, m: usize) -> SatSymbols {
        let make = |prefix: &str, range: std::ops::RangeInclusive<usize>| -> Vec<Symbol> {
            range
                .map(|i| Symbol::new(&format!("{prefix}{i}")).expect("valid name"))
                .collect()
        };
        SatSymbols {
            var: make("v", 1..=n),
            truth: make("T", 1..=n),
            falsity: make("F", 1..=n),
            stage: make("s", 0..=m),
        }
    }

    fn literal(&self, lit: Literal) -> Symbol {
        if lit.positive {
            self.truth[lit.var - 1]
        } else {
            self.falsity[lit.var - 1]
        }
    }
}

/// Ring node hosting generation stage `i` (1-based).
pub fn generation_node(i: usize) -> String {
    format!("x{i}")
}

/// Builds the deciding network and the instance word `v1,...,vn`.
pub fn build_sat_network(f: &CnfFormula) -> Result<(AhnepNetwork, Word), SatError> {
    let n = f.num_vars;
    let m = f.clauses.len();
    if n == 0 || m == 0 {
        return Err(SatError::EmptyFormula);
    }
    let sy = SatSymbols::new(n, m);
    let graph = build_ring(n + m + 1).expect("ring of at least 3 nodes");
    let mut processors = BTreeMap::new();

    for i in 0..n {
        let v = sy.var[i];
        let rules = [
            Rule::Substitution {
                from: v,
                to: sy.truth[i],
            },
            Rule::Substitution {
                from: v,
                to: sy.falsity[i],
            },
        ];
        let previous = (i > 0).then(|| sy.var[i - 1]);
        let p = Processor::new(rules)
            .with_beta(PredicateStrength::Strong)
            .with_pi([v])
            .with_fi(previous)
            .with_fo([v]);
        processors.insert(generation_node(i + 1), p);
    }

    let start = Processor::new([Rule::Insertion(sy.stage[0])])
        .with_mode(crate::model::ActionMode::Right)
        .with_fi(sy.var.iter().chain(&sy.stage).copied())
        .with_po([sy.stage[0]]);
    processors.insert(format!("x{}", n + 1), start);

    for (j, clause) in f.clauses.iter().enumerate() {
        let permitting = clause.iter().map(|&l| sy.literal(l));
        let forbidding = sy
            .stage
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .map(|(_, &s)| s)
            .chain(sy.var.iter().copied());
        let p = Processor::new([Rule::Substitution {
            from: sy.stage[j],
            to: sy.stage[j + 1],
        }])
        .with_pi(permitting)
        .with_fi(forbidding)
        .with_po([sy.stage[j + 1]]);
        processors.insert(format!("x{}", n + 2 + j), p);
    }

    processors.insert("x0".to_string(), Processor::new([]).with_pi([sy.stage[m]]));

    let network_symbols = sy
        .var
        .iter()
        .chain(&sy.truth)
        .chain(&sy.falsity)
        .chain(&sy.stage)
        .copied();
    let net = AhnepNetwork {
        name: format!("sat-n{n}-m{m}"),
        input_alphabet: Alphabet::new(sy.var.iter().copied()).expect("n >= 1"),
        network_alphabet: Alphabet::new(network_symbols).expect("distinct names"),
        graph,
        processors,
        input_node: generation_node(1),
        output_node: "x0".to_string(),
    };
    Ok((net, Word::from_symbols(sy.var.clone())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SatRun {
    pub satisfiable: bool,
    pub steps: usize,
}

/// Builds the network and runs it; a limit hit is an error, not a verdict.
pub fn solve_detailed(f: &CnfFormula, limits: &RunLimits) -> Result<SatRun, SatError> {
    let (net, word) = build_sat_network(f)?;
    let (outcome, _) = Simulator::new(&net)?.run(&word, limits, false)?;
    match outcome {
        RunOutcome::Accepted { steps } => Ok(SatRun {
            satisfiable: true,
            steps,
        }),
        RunOutcome::Rejected { steps, .. } => Ok(SatRun {
            satisfiable: false,
            steps,
        }),
        other => Err(SatError::LimitExceeded(other)),
    }
}

pub fn solve(f: &CnfFormula, limits: &RunLimits) -> Result<bool, SatError> {
    solve_detailed(f, limits).map(|r| r.satisfiable)
}
