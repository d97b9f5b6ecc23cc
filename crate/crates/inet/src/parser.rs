//! Textual format for interaction systems.
//!
//! A `.inet` file is a sequence of declarations:
//!
//! ```text
//! agents { Z/0, S/1, Add/2, Eps/0 @eraser }
//! rules {
//!   Add[x, S(y)] >< S[Add(x, y)];
//!   Add[x, x] >< Z[];
//! }
//! net main = < a | Add(Z, a) = S(Z) >
//! ```
//!
//! `><` is the rule separator, `< head | equations >` is a configuration.
//! Symbols start with an uppercase letter, names with a lowercase one;
//! `#` opens a comment to end of line unless immediately followed by a
//! digit, in which case `#n` abbreviates the numeral `S(...S(Z)...)`.
//! `[t1, ..., tk]` in term position builds a difference list over
//! `Diff`/`Cons`. Names starting with `%` are reserved for the machine.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::model::{
    Configuration, Equation, Rule, RuleSet, Signature, SymbolAttr, Term, RESERVED_PREFIX,
};

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    pub span: Span,
    /// Extra positions involved in the error (e.g. the first of two
    /// duplicate rules).
    pub notes: Vec<(String, Span)>,
}

impl ParseError {
    fn new(message: impl Into<String>, span: Span) -> ParseError {
        ParseError {
            message: message.into(),
            span,
            notes: Vec::new(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)?;
        for (msg, span) in &self.notes {
            write!(f, "\n  note: {span}: {msg}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

// ---------------------------------------------------------------------------
// System files
// ---------------------------------------------------------------------------

/// One parsed program: a signature, its rules, and named nets.
#[derive(Clone, Debug, Default)]
pub struct SystemFile {
    pub signature: Signature,
    pub rules: RuleSet,
    pub nets: BTreeMap<String, Configuration>,
}

impl SystemFile {
    /// Merges another system in. Identical symbol declarations and identical
    /// rules are tolerated so profiles sharing nat/bool symbols compose.
    pub fn merge(&mut self, other: &SystemFile) -> Result<(), String> {
        self.signature
            .merge(&other.signature)
            .map_err(|e| e.to_string())?;
        for rule in other.rules.iter() {
            match self.rules.explicit(&rule.lhs_a, &rule.lhs_b) {
                None => self.rules.insert(rule.clone()).map_err(|e| e.to_string())?,
                Some(existing) if existing == rule => {}
                Some(_) => {
                    return Err(format!(
                        "conflicting rules for the pair ({}, {})",
                        rule.lhs_a, rule.lhs_b
                    ))
                }
            }
        }
        for (name, config) in &other.nets {
            if self.nets.contains_key(name) {
                return Err(format!("net {name} is defined twice"));
            }
            self.nets.insert(name.clone(), config.clone());
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Name(String),
    Nat(u64),
    HashNat(u64),
    Attr(String),
    Bowtie,
    Lt,
    Gt,
    Pipe,
    Eq,
    Comma,
    Semi,
    Slash,
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Name(s) => write!(f, "{s}"),
            Tok::Nat(n) => write!(f, "{n}"),
            Tok::HashNat(n) => write!(f, "#{n}"),
            Tok::Attr(s) => write!(f, "@{s}"),
            Tok::Bowtie => write!(f, "><"),
            Tok::Lt => write!(f, "<"),
            Tok::Gt => write!(f, ">"),
            Tok::Pipe => write!(f, "|"),
            Tok::Eq => write!(f, "="),
            Tok::Comma => write!(f, ","),
            Tok::Semi => write!(f, ";"),
            Tok::Slash => write!(f, "/"),
            Tok::LBrace => write!(f, "{{"),
            Tok::RBrace => write!(f, "}}"),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
            Tok::LBracket => write!(f, "["),
            Tok::RBracket => write!(f, "]"),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn span(&self) -> Span {
        Span {
            line: self.line,
            col: self.col,
        }
    }

    fn lex(mut self) -> Result<Vec<(Tok, Span)>, ParseError> {
        let mut out = Vec::new();
        loop {
            while matches!(self.chars.peek(), Some(c) if c.is_whitespace()) {
                self.bump();
            }
            let span = self.span();
            let Some(&c) = self.chars.peek() else {
                return Ok(out);
            };
            match c {
                '#' => {
                    self.bump();
                    if matches!(self.chars.peek(), Some(d) if d.is_ascii_digit()) {
                        let n = self.lex_number(span)?;
                        out.push((Tok::HashNat(n), span));
                    } else {
                        // comment to end of line
                        while matches!(self.chars.peek(), Some(&c) if c != '\n') {
                            self.bump();
                        }
                    }
                }
                '@' => {
                    self.bump();
                    let word = self.lex_word();
                    if word.is_empty() {
                        return Err(ParseError::new("expected attribute name after @", span));
                    }
                    out.push((Tok::Attr(word), span));
                }
                '>' => {
                    self.bump();
                    if self.chars.peek() == Some(&'<') {
                        self.bump();
                        out.push((Tok::Bowtie, span));
                    } else {
                        out.push((Tok::Gt, span));
                    }
                }
                '<' => {
                    self.bump();
                    out.push((Tok::Lt, span));
                }
                '|' => {
                    self.bump();
                    out.push((Tok::Pipe, span));
                }
                '=' => {
                    self.bump();
                    out.push((Tok::Eq, span));
                }
                ',' => {
                    self.bump();
                    out.push((Tok::Comma, span));
                }
                ';' => {
                    self.bump();
                    out.push((Tok::Semi, span));
                }
                '/' => {
                    self.bump();
                    out.push((Tok::Slash, span));
                }
                '{' => {
                    self.bump();
                    out.push((Tok::LBrace, span));
                }
                '}' => {
                    self.bump();
                    out.push((Tok::RBrace, span));
                }
                '(' => {
                    self.bump();
                    out.push((Tok::LParen, span));
                }
                ')' => {
                    self.bump();
                    out.push((Tok::RParen, span));
                }
                '[' => {
                    self.bump();
                    out.push((Tok::LBracket, span));
                }
                ']' => {
                    self.bump();
                    out.push((Tok::RBracket, span));
                }
                c if c == RESERVED_PREFIX => {
                    return Err(ParseError::new(
                        "names starting with % are reserved for machine-generated names",
                        span,
                    ));
                }
                c if c.is_ascii_digit() => {
                    let n = self.lex_number(span)?;
                    if matches!(self.chars.peek(), Some(c) if c.is_alphabetic() || *c == '_') {
                        return Err(ParseError::new(
                            "identifiers may not start with a digit",
                            span,
                        ));
                    }
                    out.push((Tok::Nat(n), span));
                }
                c if c.is_alphabetic() => {
                    let word = self.lex_word();
                    let tok = if c.is_uppercase() {
                        Tok::Ident(word)
                    } else {
                        Tok::Name(word)
                    };
                    out.push((tok, span));
                }
                other => {
                    return Err(ParseError::new(format!("unexpected character {other:?}"), span));
                }
            }
        }
    }

    fn lex_word(&mut self) -> String {
        let mut word = String::new();
        while matches!(self.chars.peek(), Some(&c) if c.is_alphanumeric() || c == '_') {
            word.push(self.bump().unwrap());
        }
        word
    }

    fn lex_number(&mut self, span: Span) -> Result<u64, ParseError> {
        let mut n: u64 = 0;
        while matches!(self.chars.peek(), Some(c) if c.is_ascii_digit()) {
            let d = self.bump().unwrap().to_digit(10).unwrap() as u64;
            n = n
                .checked_mul(10)
                .and_then(|n| n.checked_add(d))
                .ok_or_else(|| ParseError::new("number is too large", span))?;
        }
        Ok(n)
    }
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    end: Span,
}

/// Name bookkeeping while parsing one rule or one net: spots a third
/// occurrence as soon as it is read.
struct NameUse {
    counts: HashMap<String, (usize, Span)>,
}

impl NameUse {
    fn new() -> Self {
        NameUse {
            counts: HashMap::new(),
        }
    }

    fn record(&mut self, name: &str, span: Span) -> Result<(), ParseError> {
        let entry = self.counts.entry(name.to_string()).or_insert((0, span));
        entry.0 += 1;
        if entry.0 > 2 {
            return Err(ParseError::new(
                format!("name {name} occurs more than twice"),
                span,
            ));
        }
        Ok(())
    }
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn next(&mut self) -> Option<(Tok, Span)> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<Span, ParseError> {
        match self.next() {
            Some((t, s)) if t == tok => Ok(s),
            Some((t, s)) => Err(ParseError::new(format!("expected {tok}, found {t}"), s)),
            None => Err(ParseError::new(format!("expected {tok}, found end of input"), self.end)),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    // term := IDENT [ "(" terms ")" ] | NAME | "#" NAT | "[" terms? "]"
    fn term(&mut self, sig: Option<&Signature>, names: &mut NameUse, sugar: &mut u64) -> Result<Term, ParseError> {
        match self.next() {
            Some((Tok::Ident(symbol), span)) => {
                let mut args = Vec::new();
                if self.eat(&Tok::LParen) {
                    loop {
                        args.push(self.term(sig, names, sugar)?);
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                    self.expect(Tok::RParen)?;
                }
                if let Some(sig) = sig {
                    match sig.arity(&symbol) {
                        None => {
                            return Err(ParseError::new(format!("undeclared symbol {symbol}"), span))
                        }
                        Some(a) if a != args.len() => {
                            return Err(ParseError::new(
                                format!(
                                    "symbol {symbol} has arity {a}, applied to {} arguments",
                                    args.len()
                                ),
                                span,
                            ))
                        }
                        Some(_) => {}
                    }
                }
                Ok(Term::agent(symbol, args))
            }
            Some((Tok::Name(n), span)) => {
                names.record(&n, span)?;
                Ok(Term::Name(n))
            }
            Some((Tok::HashNat(n), span)) => {
                self.check_sugar_symbols(sig, span, &[("S", 1), ("Z", 0)])?;
                let mut t = Term::nullary("Z");
                for _ in 0..n {
                    t = Term::agent("S", vec![t]);
                }
                Ok(t)
            }
            Some((Tok::LBracket, span)) => {
                self.check_sugar_symbols(sig, span, &[("Diff", 2), ("Cons", 2)])?;
                let mut elems = Vec::new();
                if self.peek() != Some(&Tok::RBracket) {
                    loop {
                        elems.push(self.term(sig, names, sugar)?);
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                }
                self.expect(Tok::RBracket)?;
                // hole name; placeholder renamed to an ordinary name afterwards
                let hole = format!("{RESERVED_PREFIX}dl{}", *sugar);
                *sugar += 1;
                names.record(&hole, span)?;
                names.record(&hole, span)?;
                let mut chain = Term::name(hole.clone());
                for e in elems.into_iter().rev() {
                    chain = Term::agent("Cons", vec![e, chain]);
                }
                Ok(Term::agent("Diff", vec![chain, Term::name(hole)]))
            }
            Some((Tok::Nat(_), span)) => Err(ParseError::new(
                "bare numbers are not terms; use #n for numerals or a declared symbol",
                span,
            )),
            Some((t, span)) => Err(ParseError::new(format!("expected a term, found {t}"), span)),
            None => Err(ParseError::new("expected a term, found end of input", self.end)),
        }
    }

    fn check_sugar_symbols(
        &self,
        sig: Option<&Signature>,
        span: Span,
        needed: &[(&str, usize)],
    ) -> Result<(), ParseError> {
        if let Some(sig) = sig {
            for (sym, arity) in needed {
                if sig.arity(sym) != Some(*arity) {
                    return Err(ParseError::new(
                        format!("sugar requires {sym}/{arity} to be declared"),
                        span,
                    ));
                }
            }
        }
        Ok(())
    }

    // config := "<" terms? "|" eqs? ">"
    fn config(&mut self, sig: Option<&Signature>) -> Result<Configuration, ParseError> {
        self.expect(Tok::Lt)?;
        let mut names = NameUse::new();
        let mut sugar = 0u64;
        let mut head = Vec::new();
        if self.peek() != Some(&Tok::Pipe) {
            loop {
                head.push(self.term(sig, &mut names, &mut sugar)?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(Tok::Pipe)?;
        let mut equations = Vec::new();
        if self.peek() != Some(&Tok::Gt) {
            loop {
                let left = self.term(sig, &mut names, &mut sugar)?;
                self.expect(Tok::Eq)?;
                let right = self.term(sig, &mut names, &mut sugar)?;
                equations.push(Equation::new(left, right));
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(Tok::Gt)?;
        let mut config = Configuration::new(head, equations);
        unreserve_sugar_holes(&mut config);
        Ok(config)
    }

    // rule := IDENT "[" terms? "]" "><" IDENT "[" terms? "]" ";"
    fn rule(&mut self, sig: &Signature) -> Result<(Rule, Span), ParseError> {
        let mut names = NameUse::new();
        let mut sugar = 0u64;
        let (a, span) = self.rule_side(sig, &mut names, &mut sugar)?;
        self.expect(Tok::Bowtie)?;
        let (b, _) = self.rule_side(sig, &mut names, &mut sugar)?;
        self.expect(Tok::Semi)?;
        for (name, (count, nspan)) in &names.counts {
            if *count != 2 && !name.starts_with(RESERVED_PREFIX) {
                return Err(ParseError::new(
                    format!("name {name} occurs {count} time(s); every rule name must occur exactly twice"),
                    *nspan,
                ));
            }
        }
        let mut rule = Rule::new(a.0, a.1, b.0, b.1);
        unreserve_rule_holes(&mut rule);
        Ok((rule, span))
    }

    fn rule_side(
        &mut self,
        sig: &Signature,
        names: &mut NameUse,
        sugar: &mut u64,
    ) -> Result<((String, Vec<Term>), Span), ParseError> {
        let (symbol, span) = match self.next() {
            Some((Tok::Ident(s), span)) => (s, span),
            Some((t, span)) => return Err(ParseError::new(format!("expected an agent symbol, found {t}"), span)),
            None => return Err(ParseError::new("expected an agent symbol, found end of input", self.end)),
        };
        self.expect(Tok::LBracket)?;
        let mut args = Vec::new();
        if self.peek() != Some(&Tok::RBracket) {
            loop {
                args.push(self.term(Some(sig), names, sugar)?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(Tok::RBracket)?;
        match sig.arity(&symbol) {
            None => return Err(ParseError::new(format!("undeclared symbol {symbol}"), span)),
            Some(a) if a != args.len() => {
                return Err(ParseError::new(
                    format!("symbol {symbol} has arity {a}, rule side lists {} terms", args.len()),
                    span,
                ))
            }
            Some(_) => {}
        }
        if sig.attr(&symbol) == Some(SymbolAttr::Amb) {
            return Err(ParseError::new(
                format!("{symbol} is the amb symbol; its interactions are builtin and cannot be redefined"),
                span,
            ));
        }
        Ok(((symbol, args), span))
    }

    fn system(&mut self) -> Result<SystemFile, ParseError> {
        let mut sys = SystemFile::default();
        let mut rule_spans: HashMap<(String, String), Span> = HashMap::new();
        loop {
            match self.next() {
                None => return Ok(sys),
                Some((Tok::Name(kw), span)) if kw == "agents" => {
                    self.expect(Tok::LBrace)?;
                    loop {
                        let (sym, span) = match self.next() {
                            Some((Tok::Ident(s), span)) => (s, span),
                            Some((t, span)) => {
                                return Err(ParseError::new(
                                    format!("expected a symbol declaration, found {t}"),
                                    span,
                                ))
                            }
                            None => {
                                return Err(ParseError::new(
                                    "expected a symbol declaration, found end of input",
                                    self.end,
                                ))
                            }
                        };
                        self.expect(Tok::Slash)?;
                        let arity = match self.next() {
                            Some((Tok::Nat(n), _)) => n as usize,
                            Some((t, span)) => {
                                return Err(ParseError::new(format!("expected an arity, found {t}"), span))
                            }
                            None => return Err(ParseError::new("expected an arity", self.end)),
                        };
                        let attr = if let Some(Tok::Attr(_)) = self.peek() {
                            let Some((Tok::Attr(word), aspan)) = self.next() else {
                                unreachable!()
                            };
                            match word.as_str() {
                                "eraser" => SymbolAttr::Eraser,
                                "duplicator" => SymbolAttr::Duplicator,
                                "amb" => SymbolAttr::Amb,
                                other => {
                                    return Err(ParseError::new(
                                        format!("unknown attribute @{other}"),
                                        aspan,
                                    ))
                                }
                            }
                        } else {
                            SymbolAttr::Plain
                        };
                        sys.signature
                            .declare(&sym, arity, attr)
                            .map_err(|e| ParseError::new(e.to_string(), span))?;
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                    self.expect(Tok::RBrace).map_err(|mut e| {
                        e.notes.push(("agents block starts here".into(), span));
                        e
                    })?;
                }
                Some((Tok::Name(kw), _)) if kw == "rules" => {
                    self.expect(Tok::LBrace)?;
                    while self.peek() != Some(&Tok::RBrace) {
                        let (rule, span) = self.rule(&sys.signature)?;
                        let key = rule.key();
                        if let Some(first) = rule_spans.get(&key) {
                            let mut err = ParseError::new(
                                format!("duplicate rule for the pair ({}, {})", key.0, key.1),
                                span,
                            );
                            err.notes.push(("first rule for this pair".into(), *first));
                            return Err(err);
                        }
                        rule_spans.insert(key, span);
                        sys.rules
                            .insert(rule)
                            .map_err(|e| ParseError::new(e.to_string(), span))?;
                    }
                    self.expect(Tok::RBrace)?;
                }
                Some((Tok::Name(kw), _)) if kw == "net" => {
                    let (name, span) = match self.next() {
                        Some((Tok::Name(s), span)) | Some((Tok::Ident(s), span)) => (s, span),
                        Some((t, span)) => {
                            return Err(ParseError::new(format!("expected a net name, found {t}"), span))
                        }
                        None => return Err(ParseError::new("expected a net name", self.end)),
                    };
                    self.expect(Tok::Eq)?;
                    let config = self.config(Some(&sys.signature))?;
                    if sys.nets.insert(name.clone(), config).is_some() {
                        return Err(ParseError::new(format!("net {name} is defined twice"), span));
                    }
                }
                Some((t, span)) => {
                    return Err(ParseError::new(
                        format!("expected agents, rules or net, found {t}"),
                        span,
                    ))
                }
            }
        }
    }
}

/// Replaces the `%dlN` placeholder holes (left by the list sugar) with
/// ordinary names `h0, h1, ...` not otherwise used, so printed output stays
/// parseable.
fn unreserve_sugar_holes(config: &mut Configuration) {
    let counts = config.name_counts();
    let holes: Vec<String> = counts
        .keys()
        .filter(|n| n.starts_with(RESERVED_PREFIX))
        .cloned()
        .collect();
    if holes.is_empty() {
        return;
    }
    let map = hole_renaming(&holes, |n| counts.contains_key(n));
    for t in &mut config.head {
        *t = t.rename_all(&map);
    }
    for e in &mut config.equations {
        *e = e.rename_all(&map);
    }
}

fn unreserve_rule_holes(rule: &mut Rule) {
    let counts = rule.names();
    let holes: Vec<String> = counts
        .keys()
        .filter(|n| n.starts_with(RESERVED_PREFIX))
        .cloned()
        .collect();
    if holes.is_empty() {
        return;
    }
    let map = hole_renaming(&holes, |n| counts.contains_key(n));
    for t in rule.rhs_a.iter_mut().chain(rule.rhs_b.iter_mut()) {
        *t = t.rename_all(&map);
    }
}

fn hole_renaming(holes: &[String], in_use: impl Fn(&str) -> bool) -> HashMap<String, String> {
    let mut map = HashMap::new();
    let mut k = 0u64;
    for hole in holes {
        let fresh = loop {
            let candidate = format!("h{k}");
            k += 1;
            if !in_use(&candidate) && !map.values().any(|v| v == &candidate) {
                break candidate;
            }
        };
        map.insert(hole.clone(), fresh);
    }
    map
}

fn tokens(text: &str) -> Result<Parser, ParseError> {
    let lexer = Lexer::new(text);
    let end = Span {
        line: text.lines().count().max(1),
        col: text.lines().last().map(|l| l.chars().count() + 1).unwrap_or(1),
    };
    Ok(Parser {
        toks: lexer.lex()?,
        pos: 0,
        end,
    })
}

/// Parses a whole system file and validates it: declared symbols, arities,
/// rule linearity, configuration linearity, no duplicate rules.
pub fn parse_system(text: &str) -> Result<SystemFile, ParseError> {
    let mut p = tokens(text)?;
    p.system()
}

/// Parses a standalone configuration. Symbol arities are only checked
/// against `sig` when one is supplied.
pub fn parse_configuration_in(text: &str, sig: &Signature) -> Result<Configuration, ParseError> {
    let mut p = tokens(text)?;
    let config = p.config(Some(sig))?;
    if let Some((t, span)) = p.next() {
        return Err(ParseError::new(format!("unexpected trailing {t}"), span));
    }
    Ok(config)
}

/// Grammar-only configuration parse (no signature checks); linearity is
/// still enforced. Intended for tests and programmatic construction.
pub fn parse_configuration(text: &str) -> Result<Configuration, ParseError> {
    let mut p = tokens(text)?;
    let config = p.config(None)?;
    if let Some((t, span)) = p.next() {
        return Err(ParseError::new(format!("unexpected trailing {t}"), span));
    }
    Ok(config)
}

/// Grammar-only term parse, for tests.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = tokens(text)?;
    let mut names = NameUse::new();
    let mut sugar = 0;
    let term = p.term(None, &mut names, &mut sugar)?;
    if let Some((t, span)) = p.next() {
        return Err(ParseError::new(format!("unexpected trailing {t}"), span));
    }
    Ok(term)
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

/// Canonical configuration text: head terms in order, equations canonically
/// oriented and sorted by printed form. `parse(print(c))` is alpha-equal to
/// `c` for any configuration free of machine names.
pub fn print_configuration(config: &Configuration) -> String {
    let head = config
        .head
        .iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    let mut eqs: Vec<String> = config.equations.iter().map(|e| e.to_string()).collect();
    eqs.sort();
    let eqs = eqs.join(", ");
    match (head.is_empty(), eqs.is_empty()) {
        (true, true) => "< | >".to_string(),
        (false, true) => format!("< {head} | >"),
        (true, false) => format!("< | {eqs} >"),
        (false, false) => format!("< {head} | {eqs} >"),
    }
}

/// Canonical system text, parseable by [`parse_system`].
pub fn print_system(sys: &SystemFile) -> String {
    let mut out = String::new();
    let decls: Vec<String> = sys
        .signature
        .symbols()
        .map(|(name, decl)| {
            let attr = decl
                .attr
                .keyword()
                .map(|k| format!(" @{k}"))
                .unwrap_or_default();
            format!("{name}/{}{attr}", decl.arity)
        })
        .collect();
    if !decls.is_empty() {
        out.push_str(&format!("agents {{ {} }}\n", decls.join(", ")));
    }
    if !sys.rules.is_empty() {
        out.push_str("\nrules {\n");
        for rule in sys.rules.iter() {
            out.push_str(&format!("  {rule};\n"));
        }
        out.push_str("}\n");
    }
    for (name, config) in &sys.nets {
        out.push_str(&format!("\nnet {name} = {}\n", print_configuration(config)));
    }
    out
}
