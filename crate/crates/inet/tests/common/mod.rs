//! Shared generators and fixtures for the integration suites: random linear
//! terms, rules, configurations and whole systems, plus the deterministic
//! example corpus both engines must agree on.

#![allow(dead_code)]

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use inet::model::{Rule, SymbolAttr};
use inet::parser::SystemFile;
use inet::stdlib;
use inet::{Configuration, Equation, RuleSet, Signature, Term};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// Random systems
// ---------------------------------------------------------------------------

pub fn gen_signature(rng: &mut ChaCha8Rng) -> Signature {
    let mut sig = Signature::new();
    // a nullary filler is always available to fix hole parity
    sig.declare("N0", 0, SymbolAttr::Plain).unwrap();
    let n = rng.gen_range(2..=6);
    for i in 0..n {
        let arity = rng.gen_range(0..=3);
        sig.declare(&format!("G{i}"), arity, SymbolAttr::Plain).unwrap();
    }
    if rng.gen_bool(0.4) {
        sig.declare("Er", 0, SymbolAttr::Eraser).unwrap();
    }
    if rng.gen_bool(0.4) {
        sig.declare("Du", 2, SymbolAttr::Duplicator).unwrap();
    }
    sig
}

fn symbols_of(sig: &Signature) -> Vec<(String, usize)> {
    sig.symbols().map(|(n, d)| (n.to_string(), d.arity)).collect()
}

/// A nullary plain symbol used to plug an odd placeholder.
fn nullary_filler(sig: &Signature) -> &str {
    sig.symbols()
        .find(|(_, d)| d.arity == 0 && d.attr == SymbolAttr::Plain)
        .map(|(n, _)| n)
        .expect("signature must declare a nullary symbol")
}

/// A random tree whose leaves are unique `?k` placeholders (later paired
/// into names) or nullary agents.
fn gen_tree(rng: &mut ChaCha8Rng, syms: &[(String, usize)], depth: usize, next_hole: &mut usize) -> Term {
    if depth == 0 || rng.gen_bool(0.35) {
        let hole = *next_hole;
        *next_hole += 1;
        return Term::name(format!("?{hole}"));
    }
    let (sym, arity) = syms[rng.gen_range(0..syms.len())].clone();
    let args = (0..arity)
        .map(|_| gen_tree(rng, syms, depth - 1, next_hole))
        .collect();
    Term::agent(sym, args)
}

fn placeholders(terms: &[&Term]) -> Vec<String> {
    let mut out = Vec::new();
    for t in terms {
        t.for_each_name(&mut |n| {
            if n.starts_with('?') {
                out.push(n.to_string());
            }
        });
    }
    out
}

fn substitute_placeholders(term: &Term, map: &HashMap<String, Term>) -> Term {
    match term {
        Term::Name(n) => map.get(n).cloned().unwrap_or_else(|| term.clone()),
        Term::Agent { symbol, args } => Term::agent(
            symbol.clone(),
            args.iter().map(|a| substitute_placeholders(a, map)).collect(),
        ),
    }
}

/// Pairs placeholders into bound names `w{i}`; some become free names
/// `f{i}` instead, and an odd leftover is plugged with a nullary agent.
fn pair_holes(
    rng: &mut ChaCha8Rng,
    holes: Vec<String>,
    free_fraction: f64,
    filler: &str,
) -> HashMap<String, Term> {
    let mut map = HashMap::new();
    let mut shuffled = holes;
    shuffled.shuffle(rng);
    let mut free = Vec::new();
    let mut to_pair = Vec::new();
    for h in shuffled {
        if rng.gen_bool(free_fraction) {
            free.push(h);
        } else {
            to_pair.push(h);
        }
    }
    if to_pair.len() % 2 == 1 {
        let h = to_pair.pop().unwrap();
        map.insert(h, Term::nullary(filler));
    }
    for (i, pair) in to_pair.chunks(2).enumerate() {
        map.insert(pair[0].clone(), Term::name(format!("w{i}")));
        map.insert(pair[1].clone(), Term::name(format!("w{i}")));
    }
    for (i, h) in free.into_iter().enumerate() {
        map.insert(h, Term::name(format!("f{i}")));
    }
    map
}

pub fn gen_rule(rng: &mut ChaCha8Rng, sig: &Signature, a: &str, b: &str) -> Rule {
    let syms = symbols_of(sig);
    let mut next = 0;
    let args_a: Vec<Term> = (0..sig.arity(a).unwrap())
        .map(|_| gen_tree(rng, &syms, 2, &mut next))
        .collect();
    let args_b: Vec<Term> = (0..sig.arity(b).unwrap())
        .map(|_| gen_tree(rng, &syms, 2, &mut next))
        .collect();
    let holes = placeholders(&args_a.iter().chain(args_b.iter()).collect::<Vec<_>>());
    // rules forbid free names: pair everything
    let map = pair_holes(rng, holes, 0.0, nullary_filler(sig));
    Rule::new(
        a,
        args_a.iter().map(|t| substitute_placeholders(t, &map)).collect(),
        b,
        args_b.iter().map(|t| substitute_placeholders(t, &map)).collect(),
    )
}

/// Options for [`gen_config`].
pub struct ConfigShape {
    pub max_head: usize,
    pub max_eqs: usize,
    /// probability that a placeholder stays a free name
    pub free_fraction: f64,
    /// allow name-rooted equation sides (not net-canonical)
    pub allow_name_sides: bool,
}

impl ConfigShape {
    /// Anything valid: free names, name=name equations.
    pub fn any() -> Self {
        ConfigShape {
            max_head: 3,
            max_eqs: 4,
            free_fraction: 0.25,
            allow_name_sides: true,
        }
    }

    /// The image of net_to_config: agent-rooted equation sides and a fully
    /// listed interface (every name bound).
    pub fn net_canonical() -> Self {
        ConfigShape {
            max_head: 3,
            max_eqs: 4,
            free_fraction: 0.0,
            allow_name_sides: false,
        }
    }
}

pub fn gen_config(rng: &mut ChaCha8Rng, sig: &Signature, shape: &ConfigShape) -> Configuration {
    let syms = symbols_of(sig);
    let mut next = 0;
    let n_head = rng.gen_range(0..=shape.max_head);
    let n_eqs = rng.gen_range(0..=shape.max_eqs);
    let head: Vec<Term> = (0..n_head).map(|_| gen_tree(rng, &syms, 3, &mut next)).collect();
    let mut eq_sides: Vec<(Term, Term)> = Vec::new();
    for _ in 0..n_eqs {
        let side = |rng: &mut ChaCha8Rng, next: &mut usize| {
            if shape.allow_name_sides {
                gen_tree(rng, &syms, 2, next)
            } else {
                // force an agent root
                loop {
                    let t = gen_tree(rng, &syms, 2, next);
                    if t.is_agent() {
                        break t;
                    }
                    *next -= 1; // the discarded tree was a single hole
                }
            }
        };
        let l = side(rng, &mut next);
        let r = side(rng, &mut next);
        eq_sides.push((l, r));
    }
    let mut all: Vec<&Term> = head.iter().collect();
    for (l, r) in &eq_sides {
        all.push(l);
        all.push(r);
    }
    let map = pair_holes(rng, placeholders(&all), shape.free_fraction, nullary_filler(sig));
    Configuration::new(
        head.iter().map(|t| substitute_placeholders(t, &map)).collect(),
        eq_sides
            .iter()
            .map(|(l, r)| {
                Equation::new(
                    substitute_placeholders(l, &map),
                    substitute_placeholders(r, &map),
                )
            })
            .collect(),
    )
}

pub fn gen_system(rng: &mut ChaCha8Rng) -> SystemFile {
    let sig = gen_signature(rng);
    let syms = symbols_of(&sig);
    let mut rules = RuleSet::new();
    let n_rules = rng.gen_range(0..=4);
    for _ in 0..n_rules {
        let a = &syms[rng.gen_range(0..syms.len())].0;
        let b = &syms[rng.gen_range(0..syms.len())].0;
        let rule = gen_rule(rng, &sig, a, b);
        let _ = rules.insert(rule); // duplicate pairs are skipped
    }
    let mut nets = std::collections::BTreeMap::new();
    for i in 0..rng.gen_range(1..=3usize) {
        nets.insert(
            format!("net{i}"),
            gen_config(rng, &sig, &ConfigShape::any()),
        );
    }
    SystemFile {
        signature: sig,
        rules,
        nets,
    }
}

// ---------------------------------------------------------------------------
// Deterministic example corpus
// ---------------------------------------------------------------------------

/// Every deterministic stdlib example the engines must agree on:
/// (label, system, configuration).
pub fn deterministic_examples() -> Vec<(String, SystemFile, Configuration)> {
    let mut out: Vec<(String, SystemFile, Configuration)> = Vec::new();
    let nat = stdlib::nat_profile().system;
    for (m, n) in [(0, 0), (1, 0), (1, 1), (2, 3)] {
        out.push((format!("nat/add({m},{n})"), nat.clone(), stdlib::add(m, n)));
        out.push((format!("nat/mult({m},{n})"), nat.clone(), stdlib::mult(m, n)));
        out.push((format!("nat/max({m},{n})"), nat.clone(), stdlib::max(m, n)));
        out.push((format!("nat/min({m},{n})"), nat.clone(), stdlib::min(m, n)));
    }
    out.push(("nat/fact(3)".into(), nat.clone(), stdlib::fact(3)));
    out.push(("nat/zero_test(0)".into(), nat.clone(), stdlib::zero_test(0)));
    out.push(("nat/zero_test(2)".into(), nat.clone(), stdlib::zero_test(2)));

    let boolp = stdlib::bool_profile().system;
    out.push(("bool/and_chain".into(), boolp.clone(), boolp.nets["and_chain"].clone()));

    let dlist = stdlib::dlist_profile().system;
    out.push(("dlist/append".into(), dlist.clone(), stdlib::dlist_append(&[1, 2], &[3])));
    out.push(("dlist/append_empty".into(), dlist.clone(), stdlib::dlist_append(&[], &[4])));
    out.push(("dlist/classic".into(), dlist.clone(), stdlib::list_append(&[1], &[2, 3])));
    out.push(("dlist/interleave".into(), dlist.clone(), stdlib::interleave(&[0, 2, 4], &[1, 3])));

    let comb = stdlib::comb_profile().system;
    for name in ["delta_delta", "gamma_gamma", "gamma_delta", "delta_eps", "gamma_eps", "eps_eps"] {
        out.push((format!("comb/{name}"), comb.clone(), comb.nets[name].clone()));
    }

    let lambda = stdlib::lambda_profile().system;
    out.push((
        "lambda/identity".into(),
        lambda.clone(),
        lambda.nets["identity_identity"].clone(),
    ));
    let mut lambda_nat = lambda.clone();
    lambda_nat.merge(&nat).unwrap();
    let skk = stdlib::Sk::app(
        stdlib::Sk::app(stdlib::Sk::app(stdlib::Sk::S, stdlib::Sk::K), stdlib::Sk::K),
        stdlib::Sk::Leaf(stdlib::num(2)),
    );
    out.push(("lambda/skk(2)".into(), lambda_nat, stdlib::sk_config(&skk)));

    let cstar = stdlib::cstar_profile().system;
    out.push(("cstar/add(2,3)".into(), cstar.clone(), stdlib::cstar_add(2, 3)));
    out.push(("cstar/zero".into(), cstar.clone(), cstar.nets["zero"].clone()));

    out
}
