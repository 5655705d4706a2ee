//! Simulator and topology toolkit for accepting hybrid networks of
//! evolutionary processors (AHNEPs).
//!
//! A network is an undirected graph whose nodes each hold a set of words and
//! a processor: a homogeneous set of substitution, deletion or insertion
//! rules guarded by random-context input and output filters. Computations
//! alternate evolutionary steps (every node rewrites its words) with
//! communication steps (words that pass a node's output filter are copied to
//! every neighbour whose input filter admits them). A word is accepted once
//! anything reaches the output node.
//!
//! Besides the engine the crate builds and recognizes star, ring (wheel) and
//! grid graphs, rewrites complete-with-loops networks into star and grid
//! networks, prunes grids to maximum degree three, and compiles 3-CNF
//! formulas into ring networks that decide satisfiability.

pub mod engine;
pub mod formats;
pub mod model;
pub mod sat;
pub mod semantics;
pub mod topology;
pub mod transform;

pub use engine::{
    accepts_all, run, Configuration, EngineError, HaltingMode, LimitKind, RejectReason, RunLimits,
    RunOutcome, Simulator, StepKind, Trace,
};
pub use model::{
    validate_network, ActionMode, AhnepNetwork, Alphabet, FilterSpec, Graph, NodeId, PredicateStrength,
    Processor, Rule, RuleKind, Symbol, ValidationReport, Word,
};
