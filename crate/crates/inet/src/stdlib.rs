//! The systems and example nets shipped with the runtime, as loadable
//! profiles: unary arithmetic, booleans, lists (classic and difference),
//! interaction combinators, linear lambda / SK combinators, the endless
//! loop, and the Amb extension. Each profile is parsed from the `.inet`
//! file shipped in `profiles/`, so the files and the library can never
//! drift apart. Builders construct parametric nets; denote functions read
//! results back into host values.

use crate::model::{Configuration, Equation, Term};
use crate::parser::{parse_system, SystemFile};

/// A named interaction system with its example nets.
#[derive(Clone, Debug)]
pub struct Profile {
    pub name: &'static str,
    pub system: SystemFile,
}

fn load(name: &'static str, source: &str) -> Profile {
    let system = parse_system(source)
        .unwrap_or_else(|e| panic!("shipped profile {name} must parse: {e}"));
    Profile { name, system }
}

/// Z/S naturals with Add, Mult, Max/MaxP, Min/MinP, ZeroTest and Fact, plus
/// the eraser and duplicator the non-linear operations need.
pub fn nat_profile() -> Profile {
    load("nat", include_str!("../profiles/nat.inet"))
}

/// T/F with And, Or and the equality test Same.
pub fn bool_profile() -> Profile {
    load("bool", include_str!("../profiles/bool.inet"))
}

/// Classic Cons/Nil lists, difference lists with O(1) append, Interleave.
pub fn dlist_profile() -> Profile {
    load("dlist", include_str!("../profiles/dlist.inet"))
}

/// The interaction combinators with their six pair-specific rules.
pub fn comb_profile() -> Profile {
    load("comb", include_str!("../profiles/comb.inet"))
}

/// Linear beta reduction and the K/S combinator agents.
pub fn lambda_profile() -> Profile {
    load("lambda", include_str!("../profiles/lambda.inet"))
}

/// The C/C* constant-time addition encoding.
pub fn cstar_profile() -> Profile {
    load("cstar", include_str!("../profiles/cstar.inet"))
}

/// The diverging example net.
pub fn endless_profile() -> Profile {
    load("endless", include_str!("../profiles/endless.inet"))
}

/// Amb with ParallelOr / ParallelAnd nets.
pub fn amb_profile() -> Profile {
    load("amb", include_str!("../profiles/amb.inet"))
}

/// Every shipped profile.
pub fn all_profiles() -> Vec<Profile> {
    vec![
        nat_profile(),
        bool_profile(),
        dlist_profile(),
        comb_profile(),
        lambda_profile(),
        cstar_profile(),
        endless_profile(),
        amb_profile(),
    ]
}

// ---------------------------------------------------------------------------
// nat builders
// ---------------------------------------------------------------------------

/// `S^n(Z)`.
pub fn num(n: u64) -> Term {
    let mut t = Term::nullary("Z");
    for _ in 0..n {
        t = Term::agent("S", vec![t]);
    }
    t
}

fn binop(op: &str, m: u64, n: u64) -> Configuration {
    Configuration::new(
        vec![Term::name("r")],
        vec![Equation::new(
            num(m),
            Term::agent(op, vec![num(n), Term::name("r")]),
        )],
    )
}

pub fn add(m: u64, n: u64) -> Configuration {
    binop("Add", m, n)
}

pub fn mult(m: u64, n: u64) -> Configuration {
    binop("Mult", m, n)
}

pub fn max(m: u64, n: u64) -> Configuration {
    binop("Max", m, n)
}

pub fn min(m: u64, n: u64) -> Configuration {
    binop("Min", m, n)
}

pub fn zero_test(n: u64) -> Configuration {
    Configuration::new(
        vec![Term::name("r")],
        vec![Equation::new(num(n), Term::agent("ZeroTest", vec![Term::name("r")]))],
    )
}

pub fn fact(n: u64) -> Configuration {
    Configuration::new(
        vec![Term::name("r")],
        vec![Equation::new(num(n), Term::agent("Fact", vec![Term::name("r")]))],
    )
}

fn nat_of_term(t: &Term) -> Option<u64> {
    match t {
        Term::Agent { symbol, args } if symbol == "Z" && args.is_empty() => Some(0),
        Term::Agent { symbol, args } if symbol == "S" && args.len() == 1 => {
            Some(1 + nat_of_term(&args[0])?)
        }
        _ => None,
    }
}

/// Reads `< S^k(Z) | >` back as `k`.
pub fn denote_nat(config: &Configuration) -> Option<u64> {
    match config.head.as_slice() {
        [t] if config.equations.is_empty() => nat_of_term(t),
        _ => None,
    }
}

/// Reads `< T | >` / `< F | >` back as a boolean.
pub fn denote_bool(config: &Configuration) -> Option<bool> {
    match config.head.as_slice() {
        [Term::Agent { symbol, args }] if args.is_empty() && config.equations.is_empty() => {
            match symbol.as_str() {
                "T" => Some(true),
                "F" => Some(false),
                _ => None,
            }
        }
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// C/C* builders
// ---------------------------------------------------------------------------

/// `< C(x, S^n(x)) | >`: the difference-list numeral.
pub fn cstar_num(n: u64) -> Configuration {
    Configuration::new(vec![cstar_num_term(n, "x")], vec![])
}

fn cstar_num_term(n: u64, hole: &str) -> Term {
    let mut chain = Term::name(hole);
    for _ in 0..n {
        chain = Term::agent("S", vec![chain]);
    }
    Term::agent("C", vec![Term::name(hole), chain])
}

/// `< z | C(x, S^m(x)) = Add(C(y, S^n(y)), z) >`: the constant-time sum.
pub fn cstar_add(m: u64, n: u64) -> Configuration {
    Configuration::new(
        vec![Term::name("z")],
        vec![Equation::new(
            cstar_num_term(m, "x"),
            Term::agent("Add", vec![cstar_num_term(n, "y"), Term::name("z")]),
        )],
    )
}

/// Reads `< C(x, S^k(x)) | >` back as `k`.
pub fn denote_cstar(config: &Configuration) -> Option<u64> {
    let [Term::Agent { symbol, args }] = config.head.as_slice() else {
        return None;
    };
    if symbol != "C" || args.len() != 2 || !config.equations.is_empty() {
        return None;
    }
    let Term::Name(hole) = &args[0] else {
        return None;
    };
    let mut k = 0;
    let mut cur = &args[1];
    loop {
        match cur {
            Term::Name(n) if n == hole => return Some(k),
            Term::Agent { symbol, args } if symbol == "S" && args.len() == 1 => {
                k += 1;
                cur = &args[0];
            }
            _ => return None,
        }
    }
}

// ---------------------------------------------------------------------------
// list builders
// ---------------------------------------------------------------------------

/// Difference list `Diff(Cons(e1, ... Cons(ek, h)), h)` over nat elements.
pub fn dlist_term(elems: &[u64], hole: &str) -> Term {
    let mut chain = Term::name(hole);
    for e in elems.iter().rev() {
        chain = Term::agent("Cons", vec![num(*e), chain]);
    }
    Term::agent("Diff", vec![chain, Term::name(hole)])
}

/// `< r | dlist(xs) = Append(dlist(ys), r) >`.
pub fn dlist_append(xs: &[u64], ys: &[u64]) -> Configuration {
    Configuration::new(
        vec![Term::name("r")],
        vec![Equation::new(
            dlist_term(xs, "h1"),
            Term::agent("Append", vec![dlist_term(ys, "h2"), Term::name("r")]),
        )],
    )
}

/// Reads a difference-list normal form back as its nat elements.
pub fn denote_dlist(config: &Configuration) -> Option<Vec<u64>> {
    let [Term::Agent { symbol, args }] = config.head.as_slice() else {
        return None;
    };
    if symbol != "Diff" || args.len() != 2 || !config.equations.is_empty() {
        return None;
    }
    let Term::Name(hole) = &args[1] else {
        return None;
    };
    let mut out = Vec::new();
    let mut cur = &args[0];
    loop {
        match cur {
            Term::Name(n) if n == hole => return Some(out),
            Term::Agent { symbol, args } if symbol == "Cons" && args.len() == 2 => {
                out.push(nat_of_term(&args[0])?);
                cur = &args[1];
            }
            _ => return None,
        }
    }
}

/// Classic list `Cons(e1, ... Cons(ek, Nil))` over nat elements.
pub fn list_term(elems: &[u64]) -> Term {
    let mut chain = Term::nullary("Nil");
    for e in elems.iter().rev() {
        chain = Term::agent("Cons", vec![num(*e), chain]);
    }
    chain
}

/// `< r | list(xs) = Append(list(ys), r) >` over classic lists.
pub fn list_append(xs: &[u64], ys: &[u64]) -> Configuration {
    Configuration::new(
        vec![Term::name("r")],
        vec![Equation::new(
            list_term(xs),
            Term::agent("Append", vec![list_term(ys), Term::name("r")]),
        )],
    )
}

/// `< r | list(xs) = Interleave(list(ys), r) >`.
pub fn interleave(xs: &[u64], ys: &[u64]) -> Configuration {
    Configuration::new(
        vec![Term::name("r")],
        vec![Equation::new(
            list_term(xs),
            Term::agent("Interleave", vec![list_term(ys), Term::name("r")]),
        )],
    )
}

/// Reads a classic-list normal form back as its nat elements.
pub fn denote_list(config: &Configuration) -> Option<Vec<u64>> {
    let [t] = config.head.as_slice() else {
        return None;
    };
    if !config.equations.is_empty() {
        return None;
    }
    let mut out = Vec::new();
    let mut cur = t;
    loop {
        match cur {
            Term::Agent { symbol, args } if symbol == "Nil" && args.is_empty() => return Some(out),
            Term::Agent { symbol, args } if symbol == "Cons" && args.len() == 2 => {
                out.push(nat_of_term(&args[0])?);
                cur = &args[1];
            }
            _ => return None,
        }
    }
}

// ---------------------------------------------------------------------------
// SK combinator builders
// ---------------------------------------------------------------------------

/// Applicative combinator expressions over the lambda profile's agents.
#[derive(Clone, Debug)]
pub enum Sk {
    S,
    K,
    /// An opaque payload (e.g. a numeral) that combinators move around.
    Leaf(Term),
    App(Box<Sk>, Box<Sk>),
}

impl Sk {
    pub fn app(f: Sk, a: Sk) -> Sk {
        Sk::App(Box::new(f), Box::new(a))
    }
}

/// Compiles an applicative expression to `< r | ... >`: every application
/// wires its function's root to an App agent's principal port.
pub fn sk_config(expr: &Sk) -> Configuration {
    fn compile(expr: &Sk, eqs: &mut Vec<Equation>, fresh: &mut u64) -> Term {
        match expr {
            Sk::S => Term::nullary("S0"),
            Sk::K => Term::nullary("K0"),
            Sk::Leaf(t) => t.clone(),
            Sk::App(f, a) => {
                let tf = compile(f, eqs, fresh);
                let ta = compile(a, eqs, fresh);
                let r = format!("v{}", *fresh);
                *fresh += 1;
                eqs.push(Equation::new(tf, Term::agent("App", vec![ta, Term::name(r.clone())])));
                Term::name(r)
            }
        }
    }
    let mut eqs = Vec::new();
    let mut fresh = 0;
    let root = compile(expr, &mut eqs, &mut fresh);
    Configuration::new(vec![root], eqs)
}

// ---------------------------------------------------------------------------
// Amb builders
// ---------------------------------------------------------------------------

/// An argument fed into ParallelOr / ParallelAnd.
#[derive(Clone, Copy, Debug)]
pub enum AmbArg {
    True,
    False,
    /// The endless loop with its spare interface port plugged by Eps, so the
    /// whole branch is droppable garbage once the other argument answers.
    Divergent,
}

fn amb_call(gate: &str, first: AmbArg, second: AmbArg) -> Configuration {
    let mut eqs = Vec::new();
    let mut arg = |which: AmbArg, tag: &str| -> Term {
        match which {
            AmbArg::True => Term::nullary("T"),
            AmbArg::False => Term::nullary("F"),
            AmbArg::Divergent => {
                let d = format!("d{tag}");
                eqs.push(Equation::new(
                    Term::agent("A", vec![Term::name(d.clone())]),
                    Term::agent("B", vec![Term::agent("A", vec![Term::nullary("Eps")])]),
                ));
                Term::name(d)
            }
        }
    };
    let t1 = arg(first, "1");
    let t2 = arg(second, "2");
    let amb = Term::agent(
        "Amb",
        vec![
            t2,
            Term::agent(gate, vec![Term::name("a"), Term::name("r")]),
            Term::name("a"),
        ],
    );
    eqs.insert(0, Equation::new(t1, amb));
    Configuration::new(vec![Term::name("r")], eqs)
}

/// ParallelOr: answers True as soon as either argument is True.
pub fn parallel_or(first: AmbArg, second: AmbArg) -> Configuration {
    amb_call("Or", first, second)
}

/// ParallelAnd: answers False as soon as either argument is False.
pub fn parallel_and(first: AmbArg, second: AmbArg) -> Configuration {
    amb_call("And", first, second)
}
