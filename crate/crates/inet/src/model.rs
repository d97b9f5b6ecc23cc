//! Data model of the interaction calculus: signatures, terms, equations,
//! rules and configurations, together with renaming, substitution,
//! validation and alpha-equivalence.
//!
//! Values of these types are immutable after construction and can be shared
//! freely between threads; the only mutable object is [`NameSupply`], which
//! is confined to a single reduction session.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

/// Reserved prefix for machine-generated names. The parser rejects user
/// names starting with it, so fresh names can never capture user names.
pub const RESERVED_PREFIX: char = '%';

// ---------------------------------------------------------------------------
// Signature
// ---------------------------------------------------------------------------

/// Builtin role a symbol may play. `Eraser` and `Duplicator` get synthesized
/// interaction rules against every other symbol; `Amb` is the nondeterministic
/// agent with two principal ports, handled by the graph engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolAttr {
    Plain,
    Eraser,
    Duplicator,
    Amb,
}

impl SymbolAttr {
    pub fn keyword(self) -> Option<&'static str> {
        match self {
            SymbolAttr::Plain => None,
            SymbolAttr::Eraser => Some("eraser"),
            SymbolAttr::Duplicator => Some("duplicator"),
            SymbolAttr::Amb => Some("amb"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolDecl {
    pub arity: usize,
    pub attr: SymbolAttr,
}

#[derive(Error, Debug, PartialEq, Eq)]
pub enum SignatureError {
    #[error("symbol name is empty")]
    EmptyName,
    #[error("symbol {0} is already declared")]
    Duplicate(String),
    #[error("symbol {0} conflicts with an earlier declaration")]
    Conflict(String),
    #[error("an {attr} symbol must have arity {expected}, {symbol} has arity {actual}")]
    BadAttrArity {
        symbol: String,
        attr: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("the {attr} attribute is already carried by {previous}")]
    AttrTaken {
        attr: &'static str,
        previous: String,
    },
}

/// Declared agent symbols with their arities and builtin attributes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    symbols: BTreeMap<String, SymbolDecl>,
}

impl Signature {
    pub fn new() -> Self {
        Signature::default()
    }

    /// Declares a symbol, enforcing the structural invariants: unique
    /// non-empty names, eraser/0, duplicator/2, amb/3, and at most one
    /// carrier per attribute.
    pub fn declare(&mut self, name: &str, arity: usize, attr: SymbolAttr) -> Result<(), SignatureError> {
        if name.is_empty() {
            return Err(SignatureError::EmptyName);
        }
        if self.symbols.contains_key(name) {
            return Err(SignatureError::Duplicate(name.to_string()));
        }
        let expected = match attr {
            SymbolAttr::Plain => None,
            SymbolAttr::Eraser => Some(0),
            SymbolAttr::Duplicator => Some(2),
            SymbolAttr::Amb => Some(3),
        };
        if let Some(expected) = expected {
            if arity != expected {
                return Err(SignatureError::BadAttrArity {
                    symbol: name.to_string(),
                    attr: attr.keyword().unwrap(),
                    expected,
                    actual: arity,
                });
            }
            if let Some((prev, _)) = self.symbols.iter().find(|(_, d)| d.attr == attr) {
                return Err(SignatureError::AttrTaken {
                    attr: attr.keyword().unwrap(),
                    previous: prev.clone(),
                });
            }
        }
        self.symbols.insert(name.to_string(), SymbolDecl { arity, attr });
        Ok(())
    }

    pub fn arity(&self, symbol: &str) -> Option<usize> {
        self.symbols.get(symbol).map(|d| d.arity)
    }

    pub fn attr(&self, symbol: &str) -> Option<SymbolAttr> {
        self.symbols.get(symbol).map(|d| d.attr)
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.symbols.contains_key(symbol)
    }

    pub fn symbols(&self) -> impl Iterator<Item = (&str, &SymbolDecl)> {
        self.symbols.iter().map(|(k, v)| (k.as_str(), v))
    }

    fn find_attr(&self, attr: SymbolAttr) -> Option<&str> {
        self.symbols
            .iter()
            .find(|(_, d)| d.attr == attr)
            .map(|(k, _)| k.as_str())
    }

    pub fn eraser(&self) -> Option<&str> {
        self.find_attr(SymbolAttr::Eraser)
    }

    pub fn duplicator(&self) -> Option<&str> {
        self.find_attr(SymbolAttr::Duplicator)
    }

    pub fn amb(&self) -> Option<&str> {
        self.find_attr(SymbolAttr::Amb)
    }

    /// Merges another signature in. Identical re-declarations are tolerated
    /// so that profiles sharing the nat/bool symbols compose.
    pub fn merge(&mut self, other: &Signature) -> Result<(), SignatureError> {
        for (name, decl) in &other.symbols {
            match self.symbols.get(name) {
                None => {
                    self.declare(name, decl.arity, decl.attr)?;
                }
                Some(existing) if existing == decl => {}
                Some(_) => return Err(SignatureError::Conflict(name.clone())),
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

/// A term of the calculus: a name, or an agent applied to argument terms.
/// Within the value owning the term (a rule or a configuration) each name
/// may occur at most twice.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Name(String),
    Agent { symbol: String, args: Vec<Term> },
}

impl Term {
    pub fn name(n: impl Into<String>) -> Term {
        Term::Name(n.into())
    }

    pub fn agent(symbol: impl Into<String>, args: Vec<Term>) -> Term {
        Term::Agent {
            symbol: symbol.into(),
            args,
        }
    }

    pub fn nullary(symbol: impl Into<String>) -> Term {
        Term::agent(symbol, Vec::new())
    }

    pub fn is_agent(&self) -> bool {
        matches!(self, Term::Agent { .. })
    }

    /// Root symbol, if the term is agent-headed.
    pub fn head_symbol(&self) -> Option<&str> {
        match self {
            Term::Name(_) => None,
            Term::Agent { symbol, .. } => Some(symbol),
        }
    }

    /// Visits every name occurrence in depth-first, left-to-right order.
    pub fn for_each_name<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match self {
            Term::Name(n) => f(n),
            Term::Agent { args, .. } => {
                for a in args {
                    a.for_each_name(f);
                }
            }
        }
    }

    /// The multiset of names occurring in the term, as name -> multiplicity.
    pub fn names(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        self.for_each_name(&mut |n| *out.entry(n.to_string()).or_insert(0) += 1);
        out
    }

    pub fn contains_name(&self, name: &str) -> bool {
        let mut found = false;
        self.for_each_name(&mut |n| found |= n == name);
        found
    }

    fn count_name(&self, name: &str) -> usize {
        let mut count = 0;
        self.for_each_name(&mut |n| {
            if n == name {
                count += 1;
            }
        });
        count
    }

    /// Replaces the first occurrence of `name` by `with`, returning whether a
    /// replacement happened. No linearity checks: callers are responsible for
    /// the global invariant (the engine relies on configuration linearity,
    /// which is weaker than term-local disjointness).
    pub(crate) fn replace_first(&mut self, name: &str, with: &Term) -> bool {
        match self {
            Term::Name(n) if n == name => {
                *self = with.clone();
                true
            }
            Term::Name(_) => false,
            Term::Agent { args, .. } => {
                for a in args {
                    if a.replace_first(name, with) {
                        return true;
                    }
                }
                false
            }
        }
    }

    /// Applies a name -> name mapping to every occurrence. Used to
    /// instantiate rule copies with fresh names.
    pub(crate) fn rename_all(&self, map: &HashMap<String, String>) -> Term {
        match self {
            Term::Name(n) => Term::Name(map.get(n).cloned().unwrap_or_else(|| n.clone())),
            Term::Agent { symbol, args } => Term::Agent {
                symbol: symbol.clone(),
                args: args.iter().map(|a| a.rename_all(map)).collect(),
            },
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Name(n) => write!(f, "{n}"),
            Term::Agent { symbol, args } => {
                write!(f, "{symbol}")?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{a}")?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Error, Debug, PartialEq, Eq)]
pub enum RenameError {
    #[error("name {0} does not occur in the term")]
    Absent(String),
    #[error("name {0} occurs twice (bound); only free occurrences can be renamed")]
    Bound(String),
    #[error("name {0} already occurs in the term")]
    TargetPresent(String),
}

/// Replaces the single free occurrence of `x` by the new name `y`.
pub fn rename(term: &Term, x: &str, y: &str) -> Result<Term, RenameError> {
    match term.count_name(x) {
        0 => return Err(RenameError::Absent(x.to_string())),
        1 => {}
        _ => return Err(RenameError::Bound(x.to_string())),
    }
    if term.contains_name(y) {
        return Err(RenameError::TargetPresent(y.to_string()));
    }
    let mut out = term.clone();
    out.replace_first(x, &Term::name(y));
    Ok(out)
}

#[derive(Error, Debug, PartialEq, Eq)]
pub enum SubstError {
    #[error("name {0} does not occur in the term")]
    Absent(String),
    #[error("name {0} occurs twice (bound); only free occurrences can be substituted")]
    Bound(String),
    #[error("substitution would break linearity: {0} occurs in both terms")]
    NotLinear(String),
}

/// Replaces the single free occurrence of `x` in `t` by the term `u`.
/// Requires the names of `u` to be disjoint from those of `t` minus `x`,
/// so the result is linear whenever the inputs are.
pub fn substitute(t: &Term, x: &str, u: &Term) -> Result<Term, SubstError> {
    match t.count_name(x) {
        0 => return Err(SubstError::Absent(x.to_string())),
        1 => {}
        _ => return Err(SubstError::Bound(x.to_string())),
    }
    let mut clash = None;
    t.for_each_name(&mut |n| {
        if n != x && clash.is_none() && u.contains_name(n) {
            clash = Some(n.to_string());
        }
    });
    if let Some(n) = clash {
        return Err(SubstError::NotLinear(n));
    }
    let mut out = t.clone();
    out.replace_first(x, u);
    Ok(out)
}

// ---------------------------------------------------------------------------
// Equations
// ---------------------------------------------------------------------------

/// An unordered pair of terms, denoting a wire between the roots of the two
/// trees. Equality ignores side order; printing and hashing use a canonical
/// orientation (lexicographically smaller printed side first).
#[derive(Clone, Debug, Eq)]
pub struct Equation {
    pub left: Term,
    pub right: Term,
}

impl Equation {
    pub fn new(left: Term, right: Term) -> Equation {
        Equation { left, right }
    }

    /// Both sides, smaller printed form first.
    pub fn canonical(&self) -> (&Term, &Term) {
        let l = self.left.to_string();
        let r = self.right.to_string();
        if l <= r {
            (&self.left, &self.right)
        } else {
            (&self.right, &self.left)
        }
    }

    pub fn for_each_name<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        self.left.for_each_name(f);
        self.right.for_each_name(f);
    }

    pub fn contains_name(&self, name: &str) -> bool {
        self.left.contains_name(name) || self.right.contains_name(name)
    }

    /// If one side is exactly the name `x`, returns the other side.
    pub fn definition_of(&self, x: &str) -> Option<&Term> {
        match (&self.left, &self.right) {
            (Term::Name(n), other) if n == x => Some(other),
            (other, Term::Name(n)) if n == x => Some(other),
            _ => None,
        }
    }

    /// A cyclic tree is an equation `y = s` with `y` occurring inside `s`.
    pub fn is_cyclic_tree(&self) -> bool {
        match (&self.left, &self.right) {
            (Term::Name(n), s) | (s, Term::Name(n)) => s.contains_name(n),
            _ => false,
        }
    }

    pub(crate) fn rename_all(&self, map: &HashMap<String, String>) -> Equation {
        Equation::new(self.left.rename_all(map), self.right.rename_all(map))
    }
}

impl PartialEq for Equation {
    fn eq(&self, other: &Self) -> bool {
        (self.left == other.left && self.right == other.right)
            || (self.left == other.right && self.right == other.left)
    }
}

impl std::hash::Hash for Equation {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        let (a, b) = self.canonical();
        a.hash(state);
        b.hash(state);
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.canonical();
        write!(f, "{a} = {b}")
    }
}

// ---------------------------------------------------------------------------
// Rules
// ---------------------------------------------------------------------------

/// An interaction rule `lhs_a[rhs_a] >< lhs_b[rhs_b]`. Every name occurring
/// in the argument terms occurs exactly twice across the whole rule; the
/// unordered symbol pair identifies the rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs_a: String,
    pub lhs_b: String,
    pub rhs_a: Vec<Term>,
    pub rhs_b: Vec<Term>,
}

impl Rule {
    pub fn new(lhs_a: impl Into<String>, rhs_a: Vec<Term>, lhs_b: impl Into<String>, rhs_b: Vec<Term>) -> Rule {
        Rule {
            lhs_a: lhs_a.into(),
            lhs_b: lhs_b.into(),
            rhs_a,
            rhs_b,
        }
    }

    pub fn key(&self) -> (String, String) {
        pair_key(&self.lhs_a, &self.lhs_b)
    }

    pub fn names(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for t in self.rhs_a.iter().chain(self.rhs_b.iter()) {
            t.for_each_name(&mut |n| *out.entry(n.to_string()).or_insert(0) += 1);
        }
        out
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |f: &mut fmt::Formatter<'_>, sym: &str, args: &[Term]| -> fmt::Result {
            write!(f, "{sym}[")?;
            for (i, t) in args.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{t}")?;
            }
            write!(f, "]")
        };
        side(f, &self.lhs_a, &self.rhs_a)?;
        write!(f, " >< ")?;
        side(f, &self.lhs_b, &self.rhs_b)
    }
}

/// Unordered lookup key for a symbol pair.
pub fn pair_key(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

/// A rule instance aligned with a concrete equation: `left_args` belongs to
/// the symbol on the queried left side, `right_args` to the right side.
#[derive(Clone, Debug)]
pub struct OrientedRule {
    pub left_args: Vec<Term>,
    pub right_args: Vec<Term>,
}

#[derive(Error, Debug, PartialEq, Eq)]
pub enum RuleSetError {
    #[error("duplicate rule for the pair ({0}, {1})")]
    Duplicate(String, String),
}

/// Rules indexed by unordered symbol pair. Lookups fall back to rule schemas
/// synthesized from the signature's eraser/duplicator attributes; an explicit
/// rule for a pair always shadows the schema.
#[derive(Clone, Debug, Default)]
pub struct RuleSet {
    rules: BTreeMap<(String, String), Rule>,
}

impl RuleSet {
    pub fn new() -> Self {
        RuleSet::default()
    }

    pub fn insert(&mut self, rule: Rule) -> Result<(), RuleSetError> {
        let key = rule.key();
        if self.rules.contains_key(&key) {
            return Err(RuleSetError::Duplicate(key.0, key.1));
        }
        self.rules.insert(key, rule);
        Ok(())
    }

    pub fn explicit(&self, a: &str, b: &str) -> Option<&Rule> {
        self.rules.get(&pair_key(a, b))
    }

    pub fn iter(&self) -> impl Iterator<Item = &Rule> {
        self.rules.values()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Looks up the rule for the unordered pair `(left, right)` and orients
    /// it so `left_args` matches `left`. Schemas for the eraser and the
    /// duplicator are materialized here when no explicit rule shadows them;
    /// the amb symbol never takes part in a schema (its pairs belong to the
    /// graph engine).
    pub fn get(&self, sig: &Signature, left: &str, right: &str) -> Option<OrientedRule> {
        if let Some(rule) = self.explicit(left, right) {
            return Some(orient(rule, left));
        }
        schema_rule(sig, left, right).map(|rule| orient(&rule, left))
    }

    /// Pairs where an explicit rule shadows a would-be schema rule.
    pub fn shadowed_schemas(&self, sig: &Signature) -> Vec<(String, String)> {
        self.rules
            .keys()
            .filter(|(a, b)| schema_rule(sig, a, b).is_some())
            .cloned()
            .collect()
    }
}

fn orient(rule: &Rule, left: &str) -> OrientedRule {
    if rule.lhs_a == left {
        OrientedRule {
            left_args: rule.rhs_a.clone(),
            right_args: rule.rhs_b.clone(),
        }
    } else {
        OrientedRule {
            left_args: rule.rhs_b.clone(),
            right_args: rule.rhs_a.clone(),
        }
    }
}

/// Synthesizes the eraser/duplicator schema rule for an unordered pair, if
/// one applies. The eraser deletes its peer and spawns erasers on every
/// auxiliary port; the duplicator produces two copies of the peer with
/// duplicators fanned out over its auxiliary ports. When a pair matches both
/// schemas (eraser vs duplicator) the two coincide, and the eraser schema is
/// produced.
pub fn schema_rule(sig: &Signature, a: &str, b: &str) -> Option<Rule> {
    let amb = sig.amb();
    if amb == Some(a) || amb == Some(b) {
        return None;
    }
    if let Some(eps) = sig.eraser() {
        let peer = if a == eps {
            Some(b)
        } else if b == eps {
            Some(a)
        } else {
            None
        };
        if let Some(peer) = peer {
            let arity = sig.arity(peer)?;
            let eps_each = (0..arity).map(|_| Term::nullary(eps)).collect();
            return Some(Rule::new(eps, Vec::new(), peer, eps_each));
        }
    }
    if let Some(dup) = sig.duplicator() {
        let peer = if a == dup {
            Some(b)
        } else if b == dup {
            Some(a)
        } else {
            None
        };
        if let Some(peer) = peer {
            let arity = sig.arity(peer)?;
            let xs: Vec<Term> = (0..arity).map(|i| Term::name(format!("x{i}"))).collect();
            let ys: Vec<Term> = (0..arity).map(|i| Term::name(format!("y{i}"))).collect();
            let copy_a = Term::agent(peer, xs.clone());
            let copy_b = Term::agent(peer, ys.clone());
            let fans = xs
                .into_iter()
                .zip(ys)
                .map(|(x, y)| Term::agent(dup, vec![x, y]))
                .collect();
            return Some(Rule::new(dup, vec![copy_a, copy_b], peer, fans));
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Configurations
// ---------------------------------------------------------------------------

/// A head term sequence together with a multiset of equations: the calculus
/// form of a net. Names occurring once are free, twice bound; the head order
/// is significant (it is the net interface).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Configuration {
    pub head: Vec<Term>,
    pub equations: Vec<Equation>,
}

impl Configuration {
    pub fn new(head: Vec<Term>, equations: Vec<Equation>) -> Configuration {
        Configuration { head, equations }
    }

    pub fn empty() -> Configuration {
        Configuration::default()
    }

    /// Name -> occurrence count over the whole configuration.
    pub fn name_counts(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        self.for_each_name(&mut |n| *out.entry(n.to_string()).or_insert(0) += 1);
        out
    }

    pub fn for_each_name<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        for t in &self.head {
            t.for_each_name(f);
        }
        for e in &self.equations {
            e.for_each_name(f);
        }
    }

    /// Free names (single occurrence) in first-occurrence order.
    pub fn free_names(&self) -> Vec<String> {
        let counts = self.name_counts();
        let mut seen = Vec::new();
        self.for_each_name(&mut |n| {
            if counts[n] == 1 && !seen.iter().any(|s| s == n) {
                seen.push(n.to_string());
            }
        });
        seen
    }
}

// ---------------------------------------------------------------------------
// Fresh names
// ---------------------------------------------------------------------------

/// Monotone supply of machine names `%0, %1, ...`, scoped to one reduction
/// session.
#[derive(Debug, Default)]
pub struct NameSupply {
    next: u64,
}

impl NameSupply {
    pub fn new() -> Self {
        NameSupply::default()
    }

    /// A supply that starts past every machine name already present, so
    /// stepping a configuration produced by an earlier session cannot
    /// capture its names.
    pub fn fresh_for(config: &Configuration) -> Self {
        let mut next: u64 = 0;
        config.for_each_name(&mut |n| {
            if let Some(rest) = n.strip_prefix(RESERVED_PREFIX) {
                if let Ok(k) = rest.parse::<u64>() {
                    next = next.max(k + 1);
                }
            }
        });
        NameSupply { next }
    }

    pub fn fresh(&mut self) -> String {
        let n = self.next;
        self.next += 1;
        format!("{RESERVED_PREFIX}{n}")
    }
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// A single validation finding; violations are data, not failures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub location: String,
    pub message: String,
}

impl Violation {
    fn new(location: impl Into<String>, message: impl Into<String>) -> Violation {
        Violation {
            location: location.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

fn check_term_symbols(sig: &Signature, term: &Term, location: &str, out: &mut Vec<Violation>) {
    if let Term::Agent { symbol, args } = term {
        match sig.arity(symbol) {
            None => out.push(Violation::new(location, format!("undeclared symbol {symbol}"))),
            Some(a) if a != args.len() => out.push(Violation::new(
                location,
                format!("symbol {symbol} has arity {a}, applied to {} arguments", args.len()),
            )),
            Some(_) => {}
        }
        for arg in args {
            check_term_symbols(sig, arg, location, out);
        }
    }
}

/// Checks a signature/ruleset/configuration triple against every structural
/// invariant: declared symbols and arities, rule linearity (each name exactly
/// twice, none free), and the two-occurrence bound on configuration names.
pub fn validate(sig: &Signature, rules: &RuleSet, config: &Configuration) -> Vec<Violation> {
    let mut out = Vec::new();

    for rule in rules.iter() {
        let loc = format!("rule {} >< {}", rule.lhs_a, rule.lhs_b);
        for (sym, args) in [(&rule.lhs_a, &rule.rhs_a), (&rule.lhs_b, &rule.rhs_b)] {
            match sig.arity(sym) {
                None => out.push(Violation::new(&loc, format!("undeclared symbol {sym}"))),
                Some(a) if a != args.len() => out.push(Violation::new(
                    &loc,
                    format!("symbol {sym} has arity {a}, rule side lists {} terms", args.len()),
                )),
                Some(_) => {}
            }
            for t in args.iter() {
                check_term_symbols(sig, t, &loc, &mut out);
            }
        }
        for (name, count) in rule.names() {
            if count != 2 {
                out.push(Violation::new(
                    &loc,
                    format!("name {name} occurs {count} time(s); every rule name must occur exactly twice"),
                ));
            }
        }
    }

    for (i, t) in config.head.iter().enumerate() {
        check_term_symbols(sig, t, &format!("configuration head[{i}]"), &mut out);
    }
    for (i, e) in config.equations.iter().enumerate() {
        let loc = format!("configuration equation[{i}]");
        check_term_symbols(sig, &e.left, &loc, &mut out);
        check_term_symbols(sig, &e.right, &loc, &mut out);
    }
    for (name, count) in config.name_counts() {
        if count > 2 {
            out.push(Violation::new(
                "configuration",
                format!("name {name} occurs {count} times; at most two occurrences are allowed"),
            ));
        }
    }

    out
}

// ---------------------------------------------------------------------------
// Alpha-equivalence
// ---------------------------------------------------------------------------

struct AlphaMatcher<'a> {
    bound_a: BTreeMap<&'a str, usize>,
    bound_b: BTreeMap<&'a str, usize>,
}

type Bij = (HashMap<String, String>, HashMap<String, String>);

impl<'a> AlphaMatcher<'a> {
    fn term(&self, a: &'a Term, b: &'a Term, bij: &mut Bij) -> bool {
        match (a, b) {
            (Term::Name(x), Term::Name(y)) => {
                let xb = self.bound_a.contains_key(x.as_str());
                let yb = self.bound_b.contains_key(y.as_str());
                if xb != yb {
                    return false;
                }
                if !xb {
                    // free names are interface labels, not renameable
                    return x == y;
                }
                match (bij.0.get(x), bij.1.get(y)) {
                    (None, None) => {
                        bij.0.insert(x.clone(), y.clone());
                        bij.1.insert(y.clone(), x.clone());
                        true
                    }
                    (Some(mapped), Some(rev)) => mapped == y && rev == x,
                    _ => false,
                }
            }
            (Term::Agent { symbol: sa, args: aa }, Term::Agent { symbol: sb, args: ab }) => {
                sa == sb
                    && aa.len() == ab.len()
                    && aa.iter().zip(ab).all(|(x, y)| self.term(x, y, bij))
            }
            _ => false,
        }
    }

    fn equations(&self, rest_a: &[&'a Equation], used_b: &mut Vec<bool>, eqs_b: &'a [Equation], bij: &Bij) -> bool {
        let Some((first, rest)) = rest_a.split_first() else {
            return true;
        };
        for (j, eb) in eqs_b.iter().enumerate() {
            if used_b[j] {
                continue;
            }
            for (l, r) in [(&eb.left, &eb.right), (&eb.right, &eb.left)] {
                let mut trial = bij.clone();
                if self.term(&first.left, l, &mut trial) && self.term(&first.right, r, &mut trial) {
                    used_b[j] = true;
                    if self.equations(rest, used_b, eqs_b, &trial) {
                        return true;
                    }
                    used_b[j] = false;
                }
            }
        }
        false
    }
}

/// Structural equality of configurations up to a bijective renaming of bound
/// names: head order must match exactly, equation multisets are compared with
/// unordered sides, free names must coincide literally.
pub fn alpha_equal(a: &Configuration, b: &Configuration) -> bool {
    if a.head.len() != b.head.len() || a.equations.len() != b.equations.len() {
        return false;
    }
    let counts_a = a.name_counts();
    let counts_b = b.name_counts();
    let matcher = AlphaMatcher {
        bound_a: counts_a.iter().filter(|(_, c)| **c == 2).map(|(n, c)| (n.as_str(), *c)).collect(),
        bound_b: counts_b.iter().filter(|(_, c)| **c == 2).map(|(n, c)| (n.as_str(), *c)).collect(),
    };
    let mut bij: Bij = (HashMap::new(), HashMap::new());
    for (x, y) in a.head.iter().zip(&b.head) {
        if !matcher.term(x, y, &mut bij) {
            return false;
        }
    }
    let rest: Vec<&Equation> = a.equations.iter().collect();
    let mut used = vec![false; b.equations.len()];
    matcher.equations(&rest, &mut used, &b.equations, &bij)
}
