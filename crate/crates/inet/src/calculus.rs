//! Reduction of configurations: the interaction, indirection and collect
//! rules, redex discovery, scheduling policies, and the full / head
//! normal-form strategies.

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{Configuration, Equation, NameSupply, RuleSet, Signature, Term};

// ---------------------------------------------------------------------------
// Redexes
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RedexKind {
    /// Both sides of the equation are agent-rooted and a rule exists for the
    /// symbol pair.
    Interaction { left: String, right: String },
    /// The equation defines a name whose other occurrence lies in another
    /// equation (`target`).
    Indirection { name: String, target: usize },
    /// The equation defines a name whose other occurrence lies in the head.
    Collect { name: String, head_index: usize },
}

/// A reducible site: the index of its primary equation plus the structural
/// case that makes it reducible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Redex {
    pub eq: usize,
    pub kind: RedexKind,
}

impl Redex {
    fn rank(&self) -> u8 {
        match self.kind {
            RedexKind::Interaction { .. } => 0,
            RedexKind::Indirection { .. } => 1,
            RedexKind::Collect { .. } => 2,
        }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            RedexKind::Interaction { left, right } => format!("interaction {left} >< {right}"),
            RedexKind::Indirection { name, .. } => format!("indirection {name}"),
            RedexKind::Collect { name, .. } => format!("collect {name}"),
        }
    }
}

/// An occurrence site of a name.
enum OtherOccurrence {
    Head(usize),
    Equation(usize),
}

/// One pass over the configuration: every name's occurrence sites, in
/// scan order.
fn occurrence_index(config: &Configuration) -> HashMap<&str, Vec<OtherOccurrence>> {
    let mut index: HashMap<&str, Vec<OtherOccurrence>> = HashMap::new();
    for (k, t) in config.head.iter().enumerate() {
        t.for_each_name(&mut |n| index.entry(n).or_default().push(OtherOccurrence::Head(k)));
    }
    for (j, e) in config.equations.iter().enumerate() {
        e.for_each_name(&mut |n| {
            index.entry(n).or_default().push(OtherOccurrence::Equation(j))
        });
    }
    index
}

/// Lists every redex of the configuration. An equation `x = t` with `x`
/// occurring inside `t` (a cyclic tree) yields no redex by itself, and a
/// name-definition whose name is globally free yields none either. When a
/// name is a full side of two equations the indirection is listed once, from
/// the smaller index.
pub fn find_redexes(config: &Configuration, sig: &Signature, rules: &RuleSet) -> Vec<Redex> {
    let index = occurrence_index(config);
    let mut out = Vec::new();
    for (i, eq) in config.equations.iter().enumerate() {
        if let (Term::Agent { symbol: a, .. }, Term::Agent { symbol: b, .. }) = (&eq.left, &eq.right) {
            if rules.get(sig, a, b).is_some() {
                out.push(Redex {
                    eq: i,
                    kind: RedexKind::Interaction {
                        left: a.clone(),
                        right: b.clone(),
                    },
                });
            }
            continue;
        }
        let mut seen_this_eq: HashSet<&str> = HashSet::new();
        for side in [&eq.left, &eq.right] {
            let Term::Name(x) = side else { continue };
            if !seen_this_eq.insert(x.as_str()) {
                continue; // x = x: a closed loop, irreducible
            }
            let other = index[x.as_str()]
                .iter()
                .find(|o| !matches!(o, OtherOccurrence::Equation(j) if *j == i));
            match other {
                None => {} // globally free, or cyclic within this equation
                Some(OtherOccurrence::Head(k)) => out.push(Redex {
                    eq: i,
                    kind: RedexKind::Collect {
                        name: x.clone(),
                        head_index: *k,
                    },
                }),
                Some(OtherOccurrence::Equation(j)) => {
                    // if x is a full side of both equations, list the redex
                    // only from the smaller index
                    let also_side_there = config.equations[*j].definition_of(x).is_some();
                    if !also_side_there || i < *j {
                        out.push(Redex {
                            eq: i,
                            kind: RedexKind::Indirection {
                                name: x.clone(),
                                target: *j,
                            },
                        });
                    }
                }
            }
        }
    }
    out
}

/// Active pairs with no interaction rule, deduplicated. These never reduce.
pub fn blocked_pairs(config: &Configuration, sig: &Signature, rules: &RuleSet) -> Vec<(String, String)> {
    let mut out = BTreeSet::new();
    for eq in &config.equations {
        if let (Term::Agent { symbol: a, .. }, Term::Agent { symbol: b, .. }) = (&eq.left, &eq.right) {
            if rules.get(sig, a, b).is_none() {
                out.insert(crate::model::pair_key(a, b));
            }
        }
    }
    out.into_iter().collect()
}

// ---------------------------------------------------------------------------
// Single step
// ---------------------------------------------------------------------------

#[derive(Error, Debug, PartialEq, Eq)]
pub enum StepError {
    #[error("no rule for the active pair ({0}, {1})")]
    NoRule(String, String),
    #[error("redex does not match the configuration")]
    StaleRedex,
}

/// Instantiates both sides of a rule with one shared fresh renaming, so
/// rule-internal name pairs stay connected and nothing is captured.
fn instantiate(
    rule: &crate::model::OrientedRule,
    supply: &mut NameSupply,
) -> (Vec<Term>, Vec<Term>) {
    // fresh names are assigned in first-occurrence order so runs are
    // deterministic and traces reproducible
    let mut map: HashMap<String, String> = HashMap::new();
    for t in rule.left_args.iter().chain(rule.right_args.iter()) {
        t.for_each_name(&mut |n| {
            if !map.contains_key(n) {
                map.insert(n.to_string(), supply.fresh());
            }
        });
    }
    (
        rule.left_args.iter().map(|t| t.rename_all(&map)).collect(),
        rule.right_args.iter().map(|t| t.rename_all(&map)).collect(),
    )
}

/// Applies one redex. Interaction replaces the equation by the m+n equations
/// pairing argument terms with the freshly renamed rule sides; indirection
/// and collect each remove one equation by substituting through it. The
/// interface (free names and head arity) is preserved exactly. The supply
/// must be scoped to the configuration (see [`NameSupply::fresh_for`]).
pub fn step(
    config: &Configuration,
    redex: &Redex,
    sig: &Signature,
    rules: &RuleSet,
    supply: &mut NameSupply,
) -> Result<Configuration, StepError> {
    let mut out = config.clone();
    apply_step(&mut out.head, &mut out.equations, redex, sig, rules, supply).map(|_| out)
}

/// In-place version used by the engines; returns the equations created
/// (interaction) or merged (indirection) so callers can maintain age ids.
fn apply_step(
    head: &mut [Term],
    equations: &mut Vec<Equation>,
    redex: &Redex,
    sig: &Signature,
    rules: &RuleSet,
    supply: &mut NameSupply,
) -> Result<SpliceInfo, StepError> {
    match &redex.kind {
        RedexKind::Interaction { .. } => {
            let eq = equations.get(redex.eq).ok_or(StepError::StaleRedex)?;
            let (Term::Agent { symbol: a, args: args_a }, Term::Agent { symbol: b, args: args_b }) =
                (&eq.left, &eq.right)
            else {
                return Err(StepError::StaleRedex);
            };
            let rule = rules
                .get(sig, a, b)
                .ok_or_else(|| StepError::NoRule(a.clone(), b.clone()))?;
            let (left_rhs, right_rhs) = instantiate(&rule, supply);
            debug_assert_eq!(left_rhs.len(), args_a.len());
            debug_assert_eq!(right_rhs.len(), args_b.len());
            let new_eqs: Vec<Equation> = args_a
                .iter()
                .zip(left_rhs)
                .map(|(arg, rhs)| Equation::new(arg.clone(), rhs))
                .chain(args_b.iter().zip(right_rhs).map(|(arg, rhs)| Equation::new(arg.clone(), rhs)))
                .collect();
            let count = new_eqs.len();
            equations.splice(redex.eq..=redex.eq, new_eqs);
            Ok(SpliceInfo::Interaction {
                at: redex.eq,
                count,
            })
        }
        RedexKind::Indirection { name, target } => {
            let def = equations.get(redex.eq).ok_or(StepError::StaleRedex)?;
            let t = def.definition_of(name).ok_or(StepError::StaleRedex)?.clone();
            let mut merged = equations.get(*target).ok_or(StepError::StaleRedex)?.clone();
            let replaced =
                merged.left.replace_first(name, &t) || merged.right.replace_first(name, &t);
            if !replaced {
                return Err(StepError::StaleRedex);
            }
            let (first, second) = if redex.eq < *target {
                (redex.eq, *target)
            } else {
                (*target, redex.eq)
            };
            equations.remove(second);
            equations.remove(first);
            equations.push(merged);
            Ok(SpliceInfo::Indirection)
        }
        RedexKind::Collect { name, head_index } => {
            let def = equations.get(redex.eq).ok_or(StepError::StaleRedex)?;
            let u = def.definition_of(name).ok_or(StepError::StaleRedex)?.clone();
            let entry = head.get_mut(*head_index).ok_or(StepError::StaleRedex)?;
            if !entry.replace_first(name, &u) {
                return Err(StepError::StaleRedex);
            }
            equations.remove(redex.eq);
            Ok(SpliceInfo::Collect)
        }
    }
}

enum SpliceInfo {
    Interaction { at: usize, count: usize },
    Indirection,
    Collect,
}

// ---------------------------------------------------------------------------
// Statistics, policies, outcomes
// ---------------------------------------------------------------------------

/// Step counts per reduction kind. The calculus exposes the real cost of an
/// interaction step: building the rule instance plus the indirections and
/// collects that follow.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub interactions: u64,
    pub indirections: u64,
    pub collects: u64,
}

impl Stats {
    pub fn total(&self) -> u64 {
        self.interactions + self.indirections + self.collects
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "interactions": self.interactions,
            "indirections": self.indirections,
            "collects": self.collects,
            "total": self.total(),
        })
    }
}

/// Order in which the scheduler picks among available redexes. Reduction is
/// strongly confluent, so the policy never changes the normal form; the
/// policies exist to exercise exactly that.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchedulerPolicy {
    /// Oldest equation first.
    Fifo,
    /// Newest equation first.
    Lifo,
    /// Uniformly random redex from a seeded generator; equal seeds give
    /// identical reduction sequences.
    RandomSeeded(u64),
    /// All interactions before any indirection or collect, emulating the
    /// graphical semantics where an interaction looks atomic.
    InteractionFirst,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Normal {
        config: Configuration,
        stats: Stats,
    },
    HeadNormal {
        config: Configuration,
        stats: Stats,
    },
    LimitExceeded {
        config: Configuration,
        stats: Stats,
    },
    Blocked {
        config: Configuration,
        stats: Stats,
        pairs: Vec<(String, String)>,
    },
}

impl Outcome {
    pub fn config(&self) -> &Configuration {
        match self {
            Outcome::Normal { config, .. }
            | Outcome::HeadNormal { config, .. }
            | Outcome::LimitExceeded { config, .. }
            | Outcome::Blocked { config, .. } => config,
        }
    }

    pub fn stats(&self) -> Stats {
        match self {
            Outcome::Normal { stats, .. }
            | Outcome::HeadNormal { stats, .. }
            | Outcome::LimitExceeded { stats, .. }
            | Outcome::Blocked { stats, .. } => *stats,
        }
    }

    pub fn is_normal(&self) -> bool {
        matches!(self, Outcome::Normal { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Normal { .. } => "normal",
            Outcome::HeadNormal { .. } => "head-normal",
            Outcome::LimitExceeded { .. } => "limit-exceeded",
            Outcome::Blocked { .. } => "blocked",
        }
    }
}

/// One recorded reduction step: its index, what was reduced, and the
/// configuration it produced.
#[derive(Clone, Debug)]
pub struct TraceStep {
    pub index: u64,
    pub kind: &'static str,
    pub description: String,
    pub config: Configuration,
}

// ---------------------------------------------------------------------------
// The reduction engine
// ---------------------------------------------------------------------------

struct Engine<'a> {
    sig: &'a Signature,
    rules: &'a RuleSet,
    config: Configuration,
    ids: Vec<u64>,
    next_id: u64,
    supply: NameSupply,
    stats: Stats,
    rng: Option<ChaCha8Rng>,
    trace: Option<Vec<TraceStep>>,
}

impl<'a> Engine<'a> {
    fn new(config: Configuration, sig: &'a Signature, rules: &'a RuleSet, policy: SchedulerPolicy, trace: bool) -> Self {
        let n = config.equations.len();
        let supply = NameSupply::fresh_for(&config);
        Engine {
            sig,
            rules,
            config,
            ids: (0..n as u64).collect(),
            next_id: n as u64,
            supply,
            stats: Stats::default(),
            rng: match policy {
                SchedulerPolicy::RandomSeeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
                _ => None,
            },
            trace: trace.then(Vec::new),
        }
    }

    /// Deterministic sort key: equation age, then kind, then a textual
    /// discriminator, so ties between an indirection and a collect on the
    /// same equation resolve canonically.
    fn key(&self, r: &Redex) -> (u64, u8, String) {
        let discr = match &r.kind {
            RedexKind::Interaction { left, right } => format!("{left}><{right}"),
            RedexKind::Indirection { name, .. } | RedexKind::Collect { name, .. } => name.clone(),
        };
        (self.ids[r.eq], r.rank(), discr)
    }

    fn select(&mut self, mut redexes: Vec<Redex>, policy: SchedulerPolicy) -> Redex {
        redexes.sort_by_key(|r| self.key(r));
        match policy {
            SchedulerPolicy::Fifo => redexes.swap_remove(0),
            SchedulerPolicy::Lifo => {
                let max_id = redexes.iter().map(|r| self.ids[r.eq]).max().unwrap();
                let pos = redexes.iter().position(|r| self.ids[r.eq] == max_id).unwrap();
                redexes.swap_remove(pos)
            }
            SchedulerPolicy::RandomSeeded(_) => {
                let i = self.rng.as_mut().unwrap().gen_range(0..redexes.len());
                redexes.swap_remove(i)
            }
            SchedulerPolicy::InteractionFirst => {
                let pos = redexes
                    .iter()
                    .position(|r| matches!(r.kind, RedexKind::Interaction { .. }))
                    .unwrap_or(0);
                redexes.swap_remove(pos)
            }
        }
    }

    fn apply(&mut self, redex: &Redex) -> Result<(), StepError> {
        let info = apply_step(
            &mut self.config.head,
            &mut self.config.equations,
            redex,
            self.sig,
            self.rules,
            &mut self.supply,
        )?;
        match info {
            SpliceInfo::Interaction { at, count } => {
                self.stats.interactions += 1;
                let fresh: Vec<u64> = (0..count as u64).map(|k| self.next_id + k).collect();
                self.next_id += count as u64;
                self.ids.splice(at..=at, fresh);
            }
            SpliceInfo::Indirection => {
                self.stats.indirections += 1;
                let RedexKind::Indirection { target, .. } = redex.kind else {
                    unreachable!()
                };
                let (first, second) = if redex.eq < target {
                    (redex.eq, target)
                } else {
                    (target, redex.eq)
                };
                self.ids.remove(second);
                self.ids.remove(first);
                self.ids.push(self.next_id);
                self.next_id += 1;
            }
            SpliceInfo::Collect => {
                self.stats.collects += 1;
                self.ids.remove(redex.eq);
            }
        }
        if let Some(trace) = &mut self.trace {
            trace.push(TraceStep {
                index: self.stats.total(),
                kind: match redex.kind {
                    RedexKind::Interaction { .. } => "interaction",
                    RedexKind::Indirection { .. } => "indirection",
                    RedexKind::Collect { .. } => "collect",
                },
                description: redex.describe(),
                config: self.config.clone(),
            });
        }
        Ok(())
    }

    fn run_full(mut self, policy: SchedulerPolicy, limit: u64) -> (Outcome, Vec<TraceStep>) {
        loop {
            let redexes = find_redexes(&self.config, self.sig, self.rules);
            if redexes.is_empty() {
                let pairs = blocked_pairs(&self.config, self.sig, self.rules);
                let outcome = if pairs.is_empty() {
                    Outcome::Normal {
                        config: self.config,
                        stats: self.stats,
                    }
                } else {
                    Outcome::Blocked {
                        config: self.config,
                        stats: self.stats,
                        pairs,
                    }
                };
                return (outcome, self.trace.unwrap_or_default());
            }
            if self.stats.total() >= limit {
                return (
                    Outcome::LimitExceeded {
                        config: self.config,
                        stats: self.stats,
                    },
                    self.trace.unwrap_or_default(),
                );
            }
            let redex = self.select(redexes, policy);
            self.apply(&redex).expect("redex from find_redexes must apply");
        }
    }

    fn run_head(mut self, limit: u64) -> (Outcome, Vec<TraceStep>) {
        loop {
            if classify_head(&self.config).iter().all(|c| *c != HeadForm::NotHeadNormal) {
                return (
                    Outcome::HeadNormal {
                        config: self.config,
                        stats: self.stats,
                    },
                    self.trace.unwrap_or_default(),
                );
            }
            let reachable = reachable_equations(&self.config);
            let mut redexes: Vec<Redex> = find_redexes(&self.config, self.sig, self.rules)
                .into_iter()
                .filter(|r| {
                    reachable.contains(&r.eq)
                        && match r.kind {
                            RedexKind::Indirection { target, .. } => reachable.contains(&target),
                            _ => true,
                        }
                })
                .collect();
            if redexes.is_empty() {
                let mut blocked: BTreeSet<(String, String)> = BTreeSet::new();
                for (i, e) in self.config.equations.iter().enumerate() {
                    if !reachable.contains(&i) {
                        continue;
                    }
                    if let (Term::Agent { symbol: a, .. }, Term::Agent { symbol: b, .. }) =
                        (&e.left, &e.right)
                    {
                        if self.rules.get(self.sig, a, b).is_none() {
                            blocked.insert(crate::model::pair_key(a, b));
                        }
                    }
                }
                let pairs: Vec<(String, String)> = blocked.into_iter().collect();
                let outcome = if pairs.is_empty() {
                    // The reachable region is quiescent: every remaining head
                    // entry hangs off a port that can never become principal.
                    Outcome::HeadNormal {
                        config: self.config,
                        stats: self.stats,
                    }
                } else {
                    Outcome::Blocked {
                        config: self.config,
                        stats: self.stats,
                        pairs,
                    }
                };
                return (outcome, self.trace.unwrap_or_default());
            }
            if self.stats.total() >= limit {
                return (
                    Outcome::LimitExceeded {
                        config: self.config,
                        stats: self.stats,
                    },
                    self.trace.unwrap_or_default(),
                );
            }
            redexes.sort_by_key(|r| self.key(r));
            let redex = redexes.remove(0);
            self.apply(&redex).expect("redex from find_redexes must apply");
        }
    }
}

/// Reduces to full normal form (or Blocked/LimitExceeded), choosing redexes
/// according to `policy`; `limit` bounds the total number of steps of all
/// three kinds.
pub fn reduce(
    config: Configuration,
    sig: &Signature,
    rules: &RuleSet,
    policy: SchedulerPolicy,
    limit: u64,
) -> Outcome {
    Engine::new(config, sig, rules, policy, false).run_full(policy, limit).0
}

/// Like [`reduce`], also returning one [`TraceStep`] per applied step.
pub fn reduce_traced(
    config: Configuration,
    sig: &Signature,
    rules: &RuleSet,
    policy: SchedulerPolicy,
    limit: u64,
) -> (Outcome, Vec<TraceStep>) {
    Engine::new(config, sig, rules, policy, true).run_full(policy, limit)
}

/// Demand-driven strategy: only redexes whose equations are reachable from
/// the head names are eligible, and reduction stops as soon as every head
/// entry is agent-headed, an open wire, or part of a cyclic tree. Remaining
/// equations are returned untouched inside the HeadNormal outcome.
pub fn reduce_head(config: Configuration, sig: &Signature, rules: &RuleSet, limit: u64) -> Outcome {
    Engine::new(config, sig, rules, SchedulerPolicy::Fifo, false).run_head(limit).0
}

pub fn reduce_head_traced(
    config: Configuration,
    sig: &Signature,
    rules: &RuleSet,
    limit: u64,
) -> (Outcome, Vec<TraceStep>) {
    Engine::new(config, sig, rules, SchedulerPolicy::Fifo, true).run_head(limit)
}

/// Equations reachable from the head by shared names. Cyclic trees are
/// entered but not traversed through: they are head-normal constituents.
fn reachable_equations(config: &Configuration) -> HashSet<usize> {
    let mut frontier: Vec<String> = Vec::new();
    for t in &config.head {
        t.for_each_name(&mut |n| frontier.push(n.to_string()));
    }
    let mut seen_names: HashSet<String> = frontier.iter().cloned().collect();
    let mut reachable: HashSet<usize> = HashSet::new();
    while let Some(name) = frontier.pop() {
        for (i, eq) in config.equations.iter().enumerate() {
            if reachable.contains(&i) || !eq.contains_name(&name) {
                continue;
            }
            reachable.insert(i);
            if eq.is_cyclic_tree() {
                continue;
            }
            eq.for_each_name(&mut |n| {
                if seen_names.insert(n.to_string()) {
                    frontier.push(n.to_string());
                }
            });
        }
    }
    reachable
}

// ---------------------------------------------------------------------------
// Head-normal-form classification
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeadForm {
    AgentHeaded,
    OpenWire,
    CyclicTree,
    NotHeadNormal,
}

/// Classifies each head entry: an agent-rooted tree, an open wire (the name
/// occurs in another head entry, or nowhere else — both ends then lie on the
/// interface), a leaf of a cyclic tree, or none of these. The configuration
/// is head-normal iff no entry is `NotHeadNormal`.
pub fn classify_head(config: &Configuration) -> Vec<HeadForm> {
    let counts = config.name_counts();
    config
        .head
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let Term::Name(x) = t else {
                return HeadForm::AgentHeaded;
            };
            let elsewhere_in_head = config
                .head
                .iter()
                .enumerate()
                .any(|(j, u)| j != i && u.contains_name(x));
            if elsewhere_in_head || counts[x.as_str()] == 1 {
                return HeadForm::OpenWire;
            }
            let in_cyclic_tree = config.equations.iter().any(|eq| match (&eq.left, &eq.right) {
                (Term::Name(y), s) | (s, Term::Name(y)) => {
                    s.contains_name(y) && s.contains_name(x)
                }
                _ => false,
            });
            if in_cyclic_tree {
                HeadForm::CyclicTree
            } else {
                HeadForm::NotHeadNormal
            }
        })
        .collect()
}
