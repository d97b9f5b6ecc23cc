//! A runtime for interaction nets.
//!
//! The calculus works on configurations `< head | equations >`: terms are
//! agents over names, an equation is a wire between two trees' principal
//! ports, and reduction is interaction (rule application) plus indirection
//! and collect (substitution through equations and into the head). The
//! graph backend works on port nets directly and adds the nondeterministic
//! Amb agent; both engines agree on deterministic systems.
//!
//! - [`model`]: signatures, terms, equations, rules, configurations,
//!   renaming/substitution, validation, alpha-equivalence.
//! - [`parser`]: the `.inet` textual format and canonical printer.
//! - [`calculus`]: redex discovery, the three reduction rules, scheduling
//!   policies, full and head strategies.
//! - [`graph`]: port nets, net/configuration conversion, graph reduction,
//!   Amb, parallel rounds, the JSON net format.
//! - [`stdlib`]: shipped systems (arithmetic, booleans, lists, interaction
//!   combinators, linear lambda / SK, Amb) with builders and denotations.

pub mod calculus;
pub mod graph;
pub mod model;
pub mod parser;
pub mod stdlib;

pub use calculus::{
    blocked_pairs, classify_head, find_redexes, reduce, reduce_head, reduce_head_traced,
    reduce_traced, step, HeadForm, Outcome, Redex, RedexKind, SchedulerPolicy, Stats, TraceStep,
};
pub use graph::{
    config_to_net, graph_reduce, net_from_json, net_to_config, net_to_json, parallel_reduce,
    parallel_round, ActivePair, GraphOutcome, PortNet, PortRef,
};
pub use model::{
    alpha_equal, rename, substitute, validate, Configuration, Equation, NameSupply, Rule, RuleSet,
    Signature, SymbolAttr, Term, Violation,
};
pub use parser::{
    parse_configuration, parse_configuration_in, parse_system, parse_term, print_configuration,
    print_system, ParseError, SystemFile,
};
