//! Sentence syntax, the pool DSL, and pool resolution.
//!
//! Formulas live in a truth-predicate language over bounded arithmetic:
//! arithmetic atoms (`=`, `!=`, `<`, `<=` over `+`/`succ`/numerals/variables),
//! a sentencehood atom `sent(t)`, the truth atom `Tr(t)`, and the classical
//! connectives/quantifiers. Quantifiers range over the pool's finite domain
//! `0..N`; closed terms evaluate with saturating arithmetic (capped at `N-1`).
//!
//! A *pool file* declares a domain size, named sentences (optionally pinning
//! their codes), closure directives, and optional extra witnesses:
//!
//! ```text
//! domain 24;
//! sentence tau := Tr(#tau);        // #name resolves to that sentence's code
//! sentence lam := not Tr(#lam);
//! close negation;
//! close instances;
//! ```
//!
//! Resolution assigns injective codes (auto-assignment is declaration order,
//! then breadth-first closure order; code 0 is never assigned), substitutes
//! `#name` self-codes, normalizes closed terms to numerals, folds closed
//! arithmetic atoms to the canonical `0 = 0` / `0 != 0`, closes the statement
//! list under single negation and quantifier instances, and builds the witness
//! list (statements, their self-conjunctions, declared extras).
//!
//! Double negations are never rewritten inside ASTs; the *negation partner* of
//! `not P` is `P` and of anything else is `not <it>`, so partnering is an
//! involution on the resolved statement list.

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::set::TruthSet;

/// Relation symbol of an arithmetic atom.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Rel {
    Eq,
    Ne,
    Lt,
    Le,
}

impl Rel {
    pub fn eval(self, a: u32, b: u32) -> bool {
        match self {
            Rel::Eq => a == b,
            Rel::Ne => a != b,
            Rel::Lt => a < b,
            Rel::Le => a <= b,
        }
    }

    fn token(self) -> &'static str {
        match self {
            Rel::Eq => "=",
            Rel::Ne => "!=",
            Rel::Lt => "<",
            Rel::Le => "<=",
        }
    }
}

/// First-order terms. `SelfCode` survives only until resolution, which
/// replaces it by the named sentence's code numeral.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Term {
    Numeral(u32),
    SelfCode(String),
    Var(String),
    Succ(Box<Term>),
    Plus(Box<Term>, Box<Term>),
}

impl Term {
    pub fn is_closed(&self) -> bool {
        match self {
            Term::Numeral(_) => true,
            Term::SelfCode(_) | Term::Var(_) => false,
            Term::Succ(t) => t.is_closed(),
            Term::Plus(a, b) => a.is_closed() && b.is_closed(),
        }
    }
}

/// Formulas. `Not` is never collapsed: a declared double negation stays a
/// distinct AST.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Formula {
    ArithAtom(Rel, Term, Term),
    /// `sent(t)`: the term's value codes a pool statement. Classical in both
    /// Strong Kleene polarities and a base literal for skeletons.
    SentAtom(Term),
    TrAtom(Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    ForAll(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    /// Canonical true atom `0 = 0` (the folding target of closed true atoms).
    pub fn truth() -> Formula {
        Formula::ArithAtom(Rel::Eq, Term::Numeral(0), Term::Numeral(0))
    }

    /// Canonical false atom `0 != 0`.
    pub fn falsity() -> Formula {
        Formula::ArithAtom(Rel::Ne, Term::Numeral(0), Term::Numeral(0))
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn tr(code: u32) -> Formula {
        Formula::TrAtom(Term::Numeral(code))
    }

    /// The negation-partner AST: strips one outer `not`, else wraps one.
    pub fn partner_ast(&self) -> Formula {
        match self {
            Formula::Not(inner) => (**inner).clone(),
            other => Formula::not(other.clone()),
        }
    }

    /// Literal in the base (truth-free) vocabulary: an arithmetic or
    /// sentencehood atom, possibly under a single negation.
    pub fn is_base_literal(&self) -> bool {
        match self {
            Formula::ArithAtom(..) | Formula::SentAtom(_) => true,
            Formula::Not(inner) => {
                matches!(**inner, Formula::ArithAtom(..) | Formula::SentAtom(_))
            }
            _ => false,
        }
    }

    pub fn contains_tr(&self) -> bool {
        match self {
            Formula::TrAtom(_) => true,
            Formula::ArithAtom(..) | Formula::SentAtom(_) => false,
            Formula::Not(f) => f.contains_tr(),
            Formula::And(a, b) | Formula::Or(a, b) => a.contains_tr() || b.contains_tr(),
            Formula::ForAll(_, f) | Formula::Exists(_, f) => f.contains_tr(),
        }
    }

    fn free_var(&self, bound: &mut Vec<String>) -> Option<String> {
        fn term_free(t: &Term, bound: &[String]) -> Option<String> {
            match t {
                Term::Numeral(_) => None,
                Term::SelfCode(_) => None,
                Term::Var(v) => {
                    if bound.iter().any(|b| b == v) {
                        None
                    } else {
                        Some(v.clone())
                    }
                }
                Term::Succ(t) => term_free(t, bound),
                Term::Plus(a, b) => term_free(a, bound).or_else(|| term_free(b, bound)),
            }
        }
        match self {
            Formula::ArithAtom(_, a, b) => {
                term_free(a, bound).or_else(|| term_free(b, bound))
            }
            Formula::SentAtom(t) | Formula::TrAtom(t) => term_free(t, bound),
            Formula::Not(f) => f.free_var(bound),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.free_var(bound).or_else(|| b.free_var(bound))
            }
            Formula::ForAll(v, f) | Formula::Exists(v, f) => {
                bound.push(v.clone());
                let r = f.free_var(bound);
                bound.pop();
                r
            }
        }
    }

    /// Name of some free variable, if the formula is open.
    pub fn some_free_var(&self) -> Option<String> {
        self.free_var(&mut Vec::new())
    }

    /// Whether this formula still mentions a `#name` self-code.
    pub fn has_self_code(&self) -> bool {
        fn term_has(t: &Term) -> bool {
            match t {
                Term::SelfCode(_) => true,
                Term::Numeral(_) | Term::Var(_) => false,
                Term::Succ(t) => term_has(t),
                Term::Plus(a, b) => term_has(a) || term_has(b),
            }
        }
        match self {
            Formula::ArithAtom(_, a, b) => term_has(a) || term_has(b),
            Formula::SentAtom(t) | Formula::TrAtom(t) => term_has(t),
            Formula::Not(f) => f.has_self_code(),
            Formula::And(a, b) | Formula::Or(a, b) => a.has_self_code() || b.has_self_code(),
            Formula::ForAll(_, f) | Formula::Exists(_, f) => f.has_self_code(),
        }
    }
}

/// Every truth atom sits under an even number of negations.
pub fn is_tr_positive(f: &Formula) -> bool {
    fn walk(f: &Formula, positive: bool) -> bool {
        match f {
            Formula::TrAtom(_) => positive,
            Formula::ArithAtom(..) | Formula::SentAtom(_) => true,
            Formula::Not(inner) => walk(inner, !positive),
            Formula::And(a, b) | Formula::Or(a, b) => {
                walk(a, positive) && walk(b, positive)
            }
            Formula::ForAll(_, inner) | Formula::Exists(_, inner) => walk(inner, positive),
        }
    }
    walk(f, true)
}

// ---------------------------------------------------------------------------
// Printing (round-trips through the parser)
// ---------------------------------------------------------------------------

fn fmt_term(t: &Term, f: &mut fmt::Formatter<'_>, in_plus: bool) -> fmt::Result {
    match t {
        Term::Numeral(n) => write!(f, "{n}"),
        Term::SelfCode(name) => write!(f, "#{name}"),
        Term::Var(v) => write!(f, "{v}"),
        Term::Succ(t) => {
            write!(f, "succ(")?;
            fmt_term(t, f, false)?;
            write!(f, ")")
        }
        Term::Plus(a, b) => {
            // `+` is left-associative in the grammar; parenthesize when nested
            // on the right or inside another `+`'s operand position.
            if in_plus {
                write!(f, "(")?;
            }
            fmt_term(a, f, false)?;
            write!(f, " + ")?;
            fmt_term(b, f, true)?;
            if in_plus {
                write!(f, ")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_term(self, f, false)
    }
}

/// Printer precedence: or < and < not/quantifier < atom.
fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Or(..) => 1,
        Formula::And(..) => 2,
        Formula::Not(_) | Formula::ForAll(..) | Formula::Exists(..) => 3,
        _ => 4,
    }
}

fn fmt_formula(fla: &Formula, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
    let p = prec(fla);
    // Quantifier bodies parse greedily to the end of the expression, so a
    // quantifier embedded anywhere but the top level must be parenthesized.
    let greedy = matches!(fla, Formula::ForAll(..) | Formula::Exists(..));
    let parens = p < min_prec || (greedy && min_prec > 0);
    if parens {
        write!(f, "(")?;
    }
    match fla {
        Formula::ArithAtom(rel, a, b) => {
            fmt_term(a, f, false)?;
            write!(f, " {} ", rel.token())?;
            fmt_term(b, f, false)?;
        }
        Formula::SentAtom(t) => {
            write!(f, "sent(")?;
            fmt_term(t, f, false)?;
            write!(f, ")")?;
        }
        Formula::TrAtom(t) => {
            write!(f, "Tr(")?;
            fmt_term(t, f, false)?;
            write!(f, ")")?;
        }
        Formula::Not(inner) => {
            write!(f, "not ")?;
            fmt_formula(inner, f, 4)?;
        }
        Formula::And(a, b) => {
            fmt_formula(a, f, 2)?;
            write!(f, " and ")?;
            // left-associative: right child needs strictly higher precedence
            fmt_formula(b, f, 3)?;
        }
        Formula::Or(a, b) => {
            fmt_formula(a, f, 1)?;
            write!(f, " or ")?;
            fmt_formula(b, f, 2)?;
        }
        Formula::ForAll(v, inner) => {
            write!(f, "forall {v} . ")?;
            fmt_formula(inner, f, 1)?;
        }
        Formula::Exists(v, inner) => {
            write!(f, "exists {v} . ")?;
            fmt_formula(inner, f, 1)?;
        }
    }
    if parens {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_formula(self, f, 0)
    }
}

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Errors from pool parsing and resolution.
#[derive(Error, Debug)]
pub enum PoolError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown sentence name `{0}`")]
    UnknownName(String),
    #[error("sentence name `{0}` declared twice")]
    DuplicateName(String),
    #[error("sentences `{first}` and `{second}` resolve to the same statement")]
    DuplicateStatement { first: String, second: String },
    #[error("pinned code {code} for `{name}` is out of range 1..{domain}")]
    PinOutOfRange { name: String, code: u32, domain: u32 },
    #[error("pinned code {code} used by both `{first}` and `{second}`")]
    PinConflict { first: String, second: String, code: u32 },
    #[error("domain of size {domain} exhausted while coding statement `{statement}`")]
    DomainExhausted { domain: u32, statement: String },
    #[error("closure exceeded the {cap}-statement cap")]
    ClosureCap { cap: usize },
    #[error("pool file must declare `close {0};`")]
    MissingDirective(&'static str),
    #[error("free variable `{var}` in {context}")]
    FreeVariable { var: String, context: String },
    #[error("domain must leave at least one non-sentence code (all {domain} codes coded)")]
    NoSpareCode { domain: u32 },
    #[error("domain size must be at least 2, got {0}")]
    DomainTooSmall(u32),
    #[error("domain size {0} exceeds the {1} cap")]
    DomainTooLarge(u32, u32),
    #[error("set entry `{entry}`: {msg}")]
    SetEntry { entry: String, msg: String },
    #[error("code {0} does not code a statement")]
    NotAStatement(u32),
}

/// Hard cap on closure size, independent of domain.
pub const CLOSURE_CAP: usize = 4096;

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    Ident(String),
    Num(u32),
    Hash,      // #
    At,        // @
    Assign,    // :=
    Semi,      // ;
    LParen,
    RParen,
    Dot,
    Plus,
    Arrow,     // ->
    DArrow,    // <->
    Eq,        // =
    Ne,        // !=
    Lt,        // <
    Le,        // <=
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Lexer {
    fn new(src: &str) -> Result<Lexer, PoolError> {
        let mut toks = Vec::new();
        for (lineno, raw) in src.lines().enumerate() {
            let line = lineno + 1;
            let text = match raw.find("//") {
                Some(i) => &raw[..i],
                None => raw,
            };
            let bytes = text.as_bytes();
            let mut i = 0;
            while i < bytes.len() {
                let c = bytes[i] as char;
                if c.is_whitespace() {
                    i += 1;
                    continue;
                }
                let tok = match c {
                    '#' => {
                        i += 1;
                        Tok::Hash
                    }
                    '@' => {
                        i += 1;
                        Tok::At
                    }
                    ';' => {
                        i += 1;
                        Tok::Semi
                    }
                    '(' => {
                        i += 1;
                        Tok::LParen
                    }
                    ')' => {
                        i += 1;
                        Tok::RParen
                    }
                    '.' => {
                        i += 1;
                        Tok::Dot
                    }
                    '+' => {
                        i += 1;
                        Tok::Plus
                    }
                    ':' => {
                        if bytes.get(i + 1) == Some(&b'=') {
                            i += 2;
                            Tok::Assign
                        } else {
                            return Err(PoolError::Parse {
                                line,
                                msg: "expected `:=`".into(),
                            });
                        }
                    }
                    '=' => {
                        i += 1;
                        Tok::Eq
                    }
                    '!' => {
                        if bytes.get(i + 1) == Some(&b'=') {
                            i += 2;
                            Tok::Ne
                        } else {
                            return Err(PoolError::Parse {
                                line,
                                msg: "expected `!=`".into(),
                            });
                        }
                    }
                    '<' => match bytes.get(i + 1) {
                        Some(&b'=') => {
                            i += 2;
                            Tok::Le
                        }
                        Some(&b'-') if bytes.get(i + 2) == Some(&b'>') => {
                            i += 3;
                            Tok::DArrow
                        }
                        _ => {
                            i += 1;
                            Tok::Lt
                        }
                    },
                    '-' => {
                        if bytes.get(i + 1) == Some(&b'>') {
                            i += 2;
                            Tok::Arrow
                        } else {
                            return Err(PoolError::Parse {
                                line,
                                msg: "expected `->`".into(),
                            });
                        }
                    }
                    c if c.is_ascii_digit() => {
                        let start = i;
                        while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                            i += 1;
                        }
                        let n: u32 = text[start..i].parse().map_err(|_| PoolError::Parse {
                            line,
                            msg: format!("numeral `{}` out of range", &text[start..i]),
                        })?;
                        Tok::Num(n)
                    }
                    c if c.is_ascii_alphabetic() || c == '_' => {
                        let start = i;
                        while i < bytes.len()
                            && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                        {
                            i += 1;
                        }
                        Tok::Ident(text[start..i].to_string())
                    }
                    other => {
                        return Err(PoolError::Parse {
                            line,
                            msg: format!("unexpected character `{other}`"),
                        })
                    }
                };
                toks.push((tok, line));
            }
        }
        Ok(Lexer { toks, pos: 0 })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn line(&self) -> usize {
        self.toks
            .get(self.pos.min(self.toks.len().saturating_sub(1)))
            .map(|&(_, l)| l)
            .unwrap_or(0)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<(), PoolError> {
        let line = self.line();
        match self.next() {
            Some(ref t) if t == want => Ok(()),
            other => Err(PoolError::Parse {
                line,
                msg: format!("expected {what}, found {other:?}"),
            }),
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PoolError> {
        Err(PoolError::Parse {
            line: self.line(),
            msg: msg.into(),
        })
    }
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

/// One `sentence` declaration as written.
#[derive(Clone, Debug)]
pub struct SentenceDecl {
    pub name: String,
    pub pinned_code: Option<u32>,
    pub body: Formula,
}

/// Parsed but unresolved pool file.
#[derive(Clone, Debug, Default)]
pub struct PoolSource {
    pub domain_size: u32,
    pub sentences: Vec<SentenceDecl>,
    pub extra_witnesses: Vec<Formula>,
    pub close_negation: bool,
    pub close_instances: bool,
    pub close_subformulas: bool,
}

fn parse_term(lx: &mut Lexer) -> Result<Term, PoolError> {
    let mut t = parse_addend(lx)?;
    while lx.peek() == Some(&Tok::Plus) {
        lx.next();
        let rhs = parse_addend(lx)?;
        t = Term::Plus(Box::new(t), Box::new(rhs));
    }
    Ok(t)
}

fn parse_addend(lx: &mut Lexer) -> Result<Term, PoolError> {
    match lx.next() {
        Some(Tok::Num(n)) => Ok(Term::Numeral(n)),
        Some(Tok::Hash) => match lx.next() {
            Some(Tok::Ident(name)) => Ok(Term::SelfCode(name)),
            _ => lx.err("expected a name after `#`"),
        },
        Some(Tok::Ident(id)) if id == "succ" => {
            lx.expect(&Tok::LParen, "`(` after succ")?;
            let inner = parse_term(lx)?;
            lx.expect(&Tok::RParen, "`)`")?;
            Ok(Term::Succ(Box::new(inner)))
        }
        Some(Tok::Ident(id)) => Ok(Term::Var(id)),
        Some(Tok::LParen) => {
            let inner = parse_term(lx)?;
            lx.expect(&Tok::RParen, "`)`")?;
            Ok(inner)
        }
        other => lx.err(format!("expected a term, found {other:?}")),
    }
}

const KEYWORDS: &[&str] = &[
    "not", "and", "or", "forall", "exists", "Tr", "sent", "succ", "domain", "sentence", "close",
    "witness",
];

/// expr := imp ( `<->` expr )?   — desugared to (a -> b) and (b -> a)
fn parse_expr(lx: &mut Lexer) -> Result<Formula, PoolError> {
    let a = parse_imp(lx)?;
    if lx.peek() == Some(&Tok::DArrow) {
        lx.next();
        let b = parse_expr(lx)?;
        let fwd = Formula::or(a.clone().partner_wrap(), b.clone());
        let bwd = Formula::or(b.partner_wrap(), a);
        return Ok(Formula::and(fwd, bwd));
    }
    Ok(a)
}

/// imp := or ( `->` imp )?   — desugared to (not a) or b
fn parse_imp(lx: &mut Lexer) -> Result<Formula, PoolError> {
    let a = parse_or(lx)?;
    if lx.peek() == Some(&Tok::Arrow) {
        lx.next();
        let b = parse_imp(lx)?;
        return Ok(Formula::or(a.partner_wrap(), b));
    }
    Ok(a)
}

impl Formula {
    /// Negation as written by desugaring: always wraps (genuine `not`, no
    /// collapse — `not not P` stays a double negation).
    fn partner_wrap(self) -> Formula {
        Formula::not(self)
    }
}

fn parse_or(lx: &mut Lexer) -> Result<Formula, PoolError> {
    let mut f = parse_and(lx)?;
    while matches!(lx.peek(), Some(Tok::Ident(id)) if id == "or") {
        lx.next();
        let rhs = parse_and(lx)?;
        f = Formula::or(f, rhs);
    }
    Ok(f)
}

fn parse_and(lx: &mut Lexer) -> Result<Formula, PoolError> {
    let mut f = parse_unary(lx)?;
    while matches!(lx.peek(), Some(Tok::Ident(id)) if id == "and") {
        lx.next();
        let rhs = parse_unary(lx)?;
        f = Formula::and(f, rhs);
    }
    Ok(f)
}

fn parse_unary(lx: &mut Lexer) -> Result<Formula, PoolError> {
    match lx.peek() {
        Some(Tok::Ident(id)) if id == "not" => {
            lx.next();
            Ok(Formula::not(parse_unary(lx)?))
        }
        Some(Tok::Ident(id)) if id == "forall" || id == "exists" => {
            let kind = id.clone();
            lx.next();
            let var = match lx.next() {
                Some(Tok::Ident(v)) if !KEYWORDS.contains(&v.as_str()) => v,
                other => return lx.err(format!("expected a variable, found {other:?}")),
            };
            lx.expect(&Tok::Dot, "`.` after the bound variable")?;
            let body = parse_expr(lx)?;
            Ok(if kind == "forall" {
                Formula::ForAll(var, Box::new(body))
            } else {
                Formula::Exists(var, Box::new(body))
            })
        }
        _ => parse_atom(lx),
    }
}

fn parse_atom(lx: &mut Lexer) -> Result<Formula, PoolError> {
    match lx.peek() {
        Some(Tok::Ident(id)) if id == "Tr" || id == "sent" => {
            let kind = id.clone();
            lx.next();
            lx.expect(&Tok::LParen, "`(`")?;
            let t = parse_term(lx)?;
            lx.expect(&Tok::RParen, "`)`")?;
            Ok(if kind == "Tr" {
                Formula::TrAtom(t)
            } else {
                Formula::SentAtom(t)
            })
        }
        Some(Tok::LParen) => {
            // Could open a parenthesized formula or a parenthesized term of an
            // arithmetic atom; try a formula first by lookahead save/restore.
            let save = lx.pos;
            lx.next();
            match parse_expr(lx) {
                Ok(inner) => {
                    if lx.peek() == Some(&Tok::RParen) {
                        lx.next();
                        // `(t) = u` would have parsed the inner as a formula and
                        // failed; formulas and terms don't overlap otherwise.
                        return Ok(inner);
                    }
                    lx.pos = save;
                }
                Err(_) => lx.pos = save,
            }
            parse_arith(lx)
        }
        _ => parse_arith(lx),
    }
}

fn parse_arith(lx: &mut Lexer) -> Result<Formula, PoolError> {
    let a = parse_term(lx)?;
    let rel = match lx.next() {
        Some(Tok::Eq) => Rel::Eq,
        Some(Tok::Ne) => Rel::Ne,
        Some(Tok::Lt) => Rel::Lt,
        Some(Tok::Le) => Rel::Le,
        other => return lx.err(format!("expected a relation symbol, found {other:?}")),
    };
    let b = parse_term(lx)?;
    Ok(Formula::ArithAtom(rel, a, b))
}

/// Parse a standalone formula (as used in tests and the CLI).
pub fn parse_formula(src: &str) -> Result<Formula, PoolError> {
    let mut lx = Lexer::new(src)?;
    let f = parse_expr(&mut lx)?;
    if lx.peek().is_some() {
        return lx.err("trailing input after formula");
    }
    Ok(f)
}

/// Parse a pool file into its unresolved form.
pub fn parse_pool(src: &str) -> Result<PoolSource, PoolError> {
    let mut lx = Lexer::new(src)?;
    let mut pool = PoolSource::default();
    let mut saw_domain = false;
    while let Some(tok) = lx.peek().cloned() {
        match tok {
            Tok::Ident(id) if id == "domain" => {
                lx.next();
                match lx.next() {
                    Some(Tok::Num(n)) => {
                        pool.domain_size = n;
                        saw_domain = true;
                    }
                    other => return lx.err(format!("expected a domain size, found {other:?}")),
                }
                lx.expect(&Tok::Semi, "`;`")?;
            }
            Tok::Ident(id) if id == "sentence" => {
                lx.next();
                let name = match lx.next() {
                    Some(Tok::Ident(n)) if !KEYWORDS.contains(&n.as_str()) => n,
                    other => return lx.err(format!("expected a sentence name, found {other:?}")),
                };
                let pinned_code = if lx.peek() == Some(&Tok::At) {
                    lx.next();
                    match lx.next() {
                        Some(Tok::Num(n)) => Some(n),
                        other => return lx.err(format!("expected a code after `@`, found {other:?}")),
                    }
                } else {
                    None
                };
                lx.expect(&Tok::Assign, "`:=`")?;
                let body = parse_expr(&mut lx)?;
                lx.expect(&Tok::Semi, "`;`")?;
                pool.sentences.push(SentenceDecl {
                    name,
                    pinned_code,
                    body,
                });
            }
            Tok::Ident(id) if id == "close" => {
                lx.next();
                match lx.next() {
                    Some(Tok::Ident(what)) => match what.as_str() {
                        "negation" => pool.close_negation = true,
                        "instances" => pool.close_instances = true,
                        "subformulas" => pool.close_subformulas = true,
                        other => {
                            return lx.err(format!("unknown closure directive `{other}`"))
                        }
                    },
                    other => return lx.err(format!("expected a directive, found {other:?}")),
                }
                lx.expect(&Tok::Semi, "`;`")?;
            }
            Tok::Ident(id) if id == "witness" => {
                lx.next();
                let body = parse_expr(&mut lx)?;
                lx.expect(&Tok::Semi, "`;`")?;
                pool.extra_witnesses.push(body);
            }
            other => return lx.err(format!("expected a pool item, found {other:?}")),
        }
    }
    if !saw_domain {
        return Err(PoolError::Parse {
            line: 0,
            msg: "pool file must declare `domain N;`".into(),
        });
    }
    Ok(pool)
}

// ---------------------------------------------------------------------------
// Term normalization / folding / instantiation
// ---------------------------------------------------------------------------

/// Saturating closed-term value: `succ`/`+` cap at `domain_size - 1`.
pub fn eval_closed_term(t: &Term, domain_size: u32) -> Option<u32> {
    let max = domain_size - 1;
    match t {
        Term::Numeral(n) => Some((*n).min(max)),
        Term::SelfCode(_) | Term::Var(_) => None,
        Term::Succ(t) => eval_closed_term(t, domain_size).map(|v| (v + 1).min(max)),
        Term::Plus(a, b) => {
            let a = eval_closed_term(a, domain_size)?;
            let b = eval_closed_term(b, domain_size)?;
            Some((a + b).min(max))
        }
    }
}

fn normalize_term(t: &Term, domain_size: u32) -> Term {
    if let Some(v) = eval_closed_term(t, domain_size) {
        return Term::Numeral(v);
    }
    match t {
        Term::Succ(inner) => Term::Succ(Box::new(normalize_term(inner, domain_size))),
        Term::Plus(a, b) => Term::Plus(
            Box::new(normalize_term(a, domain_size)),
            Box::new(normalize_term(b, domain_size)),
        ),
        other => other.clone(),
    }
}

/// Normalize all closed terms to numerals and fold every closed arithmetic
/// atom to the canonical `0 = 0` / `0 != 0`. Sent-atoms and connectives are
/// left alone; no double negation is created or removed.
pub fn normalize_formula(f: &Formula, domain_size: u32) -> Formula {
    match f {
        Formula::ArithAtom(rel, a, b) => {
            let a = normalize_term(a, domain_size);
            let b = normalize_term(b, domain_size);
            if let (Term::Numeral(x), Term::Numeral(y)) = (&a, &b) {
                if rel.eval(*x, *y) {
                    Formula::truth()
                } else {
                    Formula::falsity()
                }
            } else {
                Formula::ArithAtom(*rel, a, b)
            }
        }
        Formula::SentAtom(t) => Formula::SentAtom(normalize_term(t, domain_size)),
        Formula::TrAtom(t) => Formula::TrAtom(normalize_term(t, domain_size)),
        Formula::Not(inner) => Formula::not(normalize_formula(inner, domain_size)),
        Formula::And(a, b) => Formula::and(
            normalize_formula(a, domain_size),
            normalize_formula(b, domain_size),
        ),
        Formula::Or(a, b) => Formula::or(
            normalize_formula(a, domain_size),
            normalize_formula(b, domain_size),
        ),
        Formula::ForAll(v, inner) => {
            Formula::ForAll(v.clone(), Box::new(normalize_formula(inner, domain_size)))
        }
        Formula::Exists(v, inner) => {
            Formula::Exists(v.clone(), Box::new(normalize_formula(inner, domain_size)))
        }
    }
}

fn subst_term(t: &Term, var: &str, val: u32) -> Term {
    match t {
        Term::Var(v) if v == var => Term::Numeral(val),
        Term::Succ(inner) => Term::Succ(Box::new(subst_term(inner, var, val))),
        Term::Plus(a, b) => Term::Plus(
            Box::new(subst_term(a, var, val)),
            Box::new(subst_term(b, var, val)),
        ),
        other => other.clone(),
    }
}

fn subst(f: &Formula, var: &str, val: u32) -> Formula {
    match f {
        Formula::ArithAtom(rel, a, b) => {
            Formula::ArithAtom(*rel, subst_term(a, var, val), subst_term(b, var, val))
        }
        Formula::SentAtom(t) => Formula::SentAtom(subst_term(t, var, val)),
        Formula::TrAtom(t) => Formula::TrAtom(subst_term(t, var, val)),
        Formula::Not(inner) => Formula::not(subst(inner, var, val)),
        Formula::And(a, b) => Formula::and(subst(a, var, val), subst(b, var, val)),
        Formula::Or(a, b) => Formula::or(subst(a, var, val), subst(b, var, val)),
        Formula::ForAll(v, inner) => {
            if v == var {
                f.clone() // shadowed
            } else {
                Formula::ForAll(v.clone(), Box::new(subst(inner, var, val)))
            }
        }
        Formula::Exists(v, inner) => {
            if v == var {
                f.clone()
            } else {
                Formula::Exists(v.clone(), Box::new(subst(inner, var, val)))
            }
        }
    }
}

/// The quantifier instance `body[d/var]`, normalized and folded exactly as
/// resolution does it — jump evaluation relies on the ASTs agreeing.
pub fn instantiate(body: &Formula, var: &str, d: u32, domain_size: u32) -> Formula {
    normalize_formula(&subst(body, var, d), domain_size)
}

fn subst_self_codes_term(t: &Term, codes: &BTreeMap<String, u32>) -> Result<Term, PoolError> {
    Ok(match t {
        Term::SelfCode(name) => Term::Numeral(
            *codes
                .get(name)
                .ok_or_else(|| PoolError::UnknownName(name.clone()))?,
        ),
        Term::Succ(inner) => Term::Succ(Box::new(subst_self_codes_term(inner, codes)?)),
        Term::Plus(a, b) => Term::Plus(
            Box::new(subst_self_codes_term(a, codes)?),
            Box::new(subst_self_codes_term(b, codes)?),
        ),
        other => other.clone(),
    })
}

fn subst_self_codes(f: &Formula, codes: &BTreeMap<String, u32>) -> Result<Formula, PoolError> {
    Ok(match f {
        Formula::ArithAtom(rel, a, b) => Formula::ArithAtom(
            *rel,
            subst_self_codes_term(a, codes)?,
            subst_self_codes_term(b, codes)?,
        ),
        Formula::SentAtom(t) => Formula::SentAtom(subst_self_codes_term(t, codes)?),
        Formula::TrAtom(t) => Formula::TrAtom(subst_self_codes_term(t, codes)?),
        Formula::Not(inner) => Formula::not(subst_self_codes(inner, codes)?),
        Formula::And(a, b) => {
            Formula::and(subst_self_codes(a, codes)?, subst_self_codes(b, codes)?)
        }
        Formula::Or(a, b) => {
            Formula::or(subst_self_codes(a, codes)?, subst_self_codes(b, codes)?)
        }
        Formula::ForAll(v, inner) => {
            Formula::ForAll(v.clone(), Box::new(subst_self_codes(inner, codes)?))
        }
        Formula::Exists(v, inner) => {
            Formula::Exists(v.clone(), Box::new(subst_self_codes(inner, codes)?))
        }
    })
}

// ---------------------------------------------------------------------------
// Resolved pools
// ---------------------------------------------------------------------------

/// A resolved named sentence.
#[derive(Clone, Debug)]
pub struct NamedSentence {
    pub name: String,
    pub code: u32,
    pub formula: Formula,
}

/// A resolved, closure-complete sentence pool.
#[derive(Clone, Debug)]
pub struct SentencePool {
    pub domain_size: u32,
    pub base: Vec<NamedSentence>,
    /// Declaration order, then breadth-first closure order.
    pub statements: Vec<Formula>,
    /// Statements first, then self-conjunctions, then declared extras (deduped).
    pub witnesses: Vec<Formula>,
    code_of: Vec<u32>,
    by_code: Vec<Option<usize>>,
    by_ast: HashMap<Formula, usize>,
    partner: Vec<usize>,
    names: BTreeMap<String, u32>,
}

impl SentencePool {
    pub fn n_statements(&self) -> usize {
        self.statements.len()
    }

    pub fn code_of(&self, idx: usize) -> u32 {
        self.code_of[idx]
    }

    pub fn stmt_of_code(&self, code: u32) -> Option<usize> {
        self.by_code.get(code as usize).copied().flatten()
    }

    pub fn is_sent_code(&self, code: u32) -> bool {
        self.stmt_of_code(code).is_some()
    }

    pub fn lookup(&self, f: &Formula) -> Option<usize> {
        self.by_ast.get(f).copied()
    }

    /// Index of the negation partner of statement `idx`.
    pub fn partner_idx(&self, idx: usize) -> usize {
        self.partner[idx]
    }

    /// Code of the negation partner of the statement coded `code`.
    pub fn partner_code(&self, code: u32) -> Option<u32> {
        self.stmt_of_code(code)
            .map(|i| self.code_of[self.partner[i]])
    }

    /// Whether partnering is a perfect pairing (no double-negation statements,
    /// whose partner chains break the 2-cycles). The pair-wise consistent-set
    /// enumerations require this.
    pub fn partner_is_involution(&self) -> bool {
        (0..self.statements.len()).all(|i| self.partner[self.partner[i]] == i)
    }

    pub fn code_of_name(&self, name: &str) -> Option<u32> {
        self.names.get(name).copied()
    }

    /// Name of the statement coded `code`, when one was declared.
    pub fn name_of_code(&self, code: u32) -> Option<&str> {
        self.names
            .iter()
            .find(|(_, &c)| c == code)
            .map(|(n, _)| n.as_str())
    }

    pub fn empty_set(&self) -> TruthSet {
        TruthSet::empty(self.n_statements())
    }

    pub fn set_from_codes(&self, codes: &[u32]) -> Result<TruthSet, PoolError> {
        let mut s = self.empty_set();
        for &c in codes {
            let idx = self.stmt_of_code(c).ok_or(PoolError::NotAStatement(c))?;
            s.insert(idx);
        }
        Ok(s)
    }

    pub fn set_to_codes(&self, s: &TruthSet) -> Vec<u32> {
        let mut v: Vec<u32> = s.iter().map(|i| self.code_of[i]).collect();
        v.sort_unstable();
        v
    }

    /// Parse a `.set` file: one entry per line — a sentence name, `not NAME`
    /// (its negation partner), or a numeric statement code. `//` comments.
    pub fn parse_set(&self, src: &str) -> Result<TruthSet, PoolError> {
        let mut s = self.empty_set();
        for raw in src.lines() {
            let line = match raw.find("//") {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let idx = if let Some(rest) = line.strip_prefix("not ") {
                let name = rest.trim();
                let code = self
                    .code_of_name(name)
                    .ok_or_else(|| PoolError::UnknownName(name.to_string()))?;
                let base = self
                    .stmt_of_code(code)
                    .ok_or(PoolError::NotAStatement(code))?;
                self.partner[base]
            } else if line.chars().all(|c| c.is_ascii_digit()) {
                let code: u32 = line.parse().map_err(|_| PoolError::SetEntry {
                    entry: line.to_string(),
                    msg: "code out of range".into(),
                })?;
                self.stmt_of_code(code).ok_or(PoolError::NotAStatement(code))?
            } else {
                let code = self
                    .code_of_name(line)
                    .ok_or_else(|| PoolError::UnknownName(line.to_string()))?;
                self.stmt_of_code(code).unwrap()
            };
            s.insert(idx);
        }
        Ok(s)
    }

    /// Canonical listing used for hashing and `pool print`.
    pub fn canonical_print(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "domain {}", self.domain_size);
        for (i, st) in self.statements.iter().enumerate() {
            let name = self
                .name_of_code(self.code_of[i])
                .map(|n| format!(" ({n})"))
                .unwrap_or_default();
            let _ = writeln!(out, "{}: {}{}", self.code_of[i], st, name);
        }
        for w in &self.witnesses[self.statements.len()..] {
            let _ = writeln!(out, "witness: {w}");
        }
        out
    }

    /// FNV-1a 64 hash of the canonical listing, as fixed-width hex.
    pub fn pool_hash(&self) -> String {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in self.canonical_print().bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        format!("{h:016x}")
    }

    /// Append generated sentences (negation closure re-runs); used by the
    /// theory-driven extensions (π families, con/com instances). Returns the
    /// statement indices the formulas ended up at (existing ones dedup).
    pub fn extend_with(
        &mut self,
        formulas: &[Formula],
    ) -> Result<Vec<usize>, PoolError> {
        let mut picked = Vec::new();
        let mut builder = PoolBuilder::resume(self);
        for f in formulas {
            let norm = normalize_formula(f, self.domain_size);
            let idx = builder.add_statement(&norm, None)?;
            picked.push(idx);
        }
        builder.close()?;
        builder.finish_into(self)?;
        Ok(picked)
    }
}

// ---------------------------------------------------------------------------
// Resolution
// ---------------------------------------------------------------------------

struct PoolBuilder {
    domain_size: u32,
    statements: Vec<Formula>,
    code_of: Vec<u32>,
    by_ast: HashMap<Formula, usize>,
    used_codes: Vec<bool>,
    next_code: u32,
    work: usize, // next statement index to close over
    close_subformulas: bool,
}

impl PoolBuilder {
    fn new(domain_size: u32, close_subformulas: bool) -> PoolBuilder {
        let mut used_codes = vec![false; domain_size as usize];
        used_codes[0] = true; // reserved non-sentence code
        PoolBuilder {
            domain_size,
            statements: Vec::new(),
            code_of: Vec::new(),
            by_ast: HashMap::new(),
            used_codes,
            next_code: 1,
            work: 0,
            close_subformulas,
        }
    }

    fn resume(pool: &SentencePool) -> PoolBuilder {
        let mut used = vec![false; pool.domain_size as usize];
        used[0] = true;
        for &c in &pool.code_of {
            used[c as usize] = true;
        }
        PoolBuilder {
            domain_size: pool.domain_size,
            statements: pool.statements.clone(),
            code_of: pool.code_of.clone(),
            by_ast: pool.by_ast.clone(),
            used_codes: used,
            next_code: 1,
            work: pool.statements.len(),
            close_subformulas: false,
        }
    }

    fn alloc_code(&mut self, stmt: &Formula) -> Result<u32, PoolError> {
        while (self.next_code as usize) < self.used_codes.len()
            && self.used_codes[self.next_code as usize]
        {
            self.next_code += 1;
        }
        if (self.next_code as usize) >= self.used_codes.len() {
            return Err(PoolError::DomainExhausted {
                domain: self.domain_size,
                statement: stmt.to_string(),
            });
        }
        let c = self.next_code;
        self.used_codes[c as usize] = true;
        Ok(c)
    }

    fn add_statement(&mut self, f: &Formula, pin: Option<u32>) -> Result<usize, PoolError> {
        if let Some(&idx) = self.by_ast.get(f) {
            return Ok(idx);
        }
        if self.statements.len() >= CLOSURE_CAP {
            return Err(PoolError::ClosureCap { cap: CLOSURE_CAP });
        }
        let code = match pin {
            Some(c) => c, // validated by caller
            None => self.alloc_code(f)?,
        };
        let idx = self.statements.len();
        self.statements.push(f.clone());
        self.code_of.push(code);
        self.by_ast.insert(f.clone(), idx);
        Ok(idx)
    }

    /// Close under single negation, quantifier instances, and (optionally)
    /// binary subformulas, breadth-first from the unprocessed tail.
    fn close(&mut self) -> Result<(), PoolError> {
        while self.work < self.statements.len() {
            let f = self.statements[self.work].clone();
            self.work += 1;
            let partner = f.partner_ast();
            self.add_statement(&partner, None)?;
            let mut instance_sources = vec![f.clone()];
            // Instances of a negated quantifier come from the inner quantifier,
            // which the partner closure has already added; nothing extra here.
            while let Some(src) = instance_sources.pop() {
                match &src {
                    Formula::ForAll(v, body) | Formula::Exists(v, body) => {
                        for d in 0..self.domain_size {
                            let inst = instantiate(body, v, d, self.domain_size);
                            self.add_statement(&inst, None)?;
                        }
                    }
                    _ => {}
                }
            }
            if self.close_subformulas {
                match &f {
                    Formula::And(a, b) | Formula::Or(a, b) => {
                        self.add_statement(a, None)?;
                        self.add_statement(b, None)?;
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    fn finish_into(self, pool: &mut SentencePool) -> Result<(), PoolError> {
        let extras = pool.witnesses.split_off(pool.statements.len());
        let rebuilt = build_tables(
            self.domain_size,
            self.statements,
            self.code_of,
            self.by_ast,
            std::mem::take(&mut pool.base),
            std::mem::take(&mut pool.names),
            extras,
        )?;
        *pool = rebuilt;
        Ok(())
    }
}

/// Assemble the final pool: partner table, code tables, witness list.
fn build_tables(
    domain_size: u32,
    statements: Vec<Formula>,
    code_of: Vec<u32>,
    by_ast: HashMap<Formula, usize>,
    base: Vec<NamedSentence>,
    names: BTreeMap<String, u32>,
    extra_witnesses: Vec<Formula>,
) -> Result<SentencePool, PoolError> {
    let mut by_code = vec![None; domain_size as usize];
    for (idx, &c) in code_of.iter().enumerate() {
        by_code[c as usize] = Some(idx);
    }
    if by_code.iter().all(|e| e.is_some()) {
        return Err(PoolError::NoSpareCode {
            domain: domain_size,
        });
    }
    let mut partner = vec![usize::MAX; statements.len()];
    for (idx, st) in statements.iter().enumerate() {
        let p = st.partner_ast();
        let pidx = *by_ast
            .get(&p)
            .expect("closure guarantees negation partners");
        partner[idx] = pidx;
    }
    // Partnering is an involution exactly when no statement is a double
    // negation (¬¬φ strips to ¬φ, whose partner strips to φ — a chain).
    // Consumers that need a perfect pairing check `partner_is_involution`.
    debug_assert!(partner.iter().all(|&p| p != usize::MAX));

    let mut witnesses = statements.clone();
    let mut witness_set: HashMap<Formula, ()> =
        statements.iter().cloned().map(|f| (f, ())).collect();
    for st in &statements {
        let sc = Formula::and(st.clone(), st.clone());
        if witness_set.insert(sc.clone(), ()).is_none() {
            witnesses.push(sc);
        }
    }
    for w in extra_witnesses {
        if witness_set.insert(w.clone(), ()).is_none() {
            witnesses.push(w);
        }
    }

    Ok(SentencePool {
        domain_size,
        base,
        statements,
        witnesses,
        code_of,
        by_code,
        by_ast,
        partner,
        names,
    })
}

/// Maximum domain size (codes are one per statement and the closure cap
/// bounds statements).
pub const DOMAIN_CAP: u32 = 4096;

/// Resolve a parsed pool: assign codes, substitute self-codes, normalize,
/// close, and build the witness list.
pub fn resolve_pool(src: &PoolSource) -> Result<SentencePool, PoolError> {
    if !src.close_negation {
        return Err(PoolError::MissingDirective("negation"));
    }
    if !src.close_instances {
        return Err(PoolError::MissingDirective("instances"));
    }
    let n = src.domain_size;
    if n < 2 {
        return Err(PoolError::DomainTooSmall(n));
    }
    if n > DOMAIN_CAP {
        return Err(PoolError::DomainTooLarge(n, DOMAIN_CAP));
    }

    // Codes: pinned first, then declaration order from the lowest free code.
    // Code 0 is never assigned, so at least one non-sentence code exists.
    let mut names: BTreeMap<String, u32> = BTreeMap::new();
    let mut pinned_by: BTreeMap<u32, String> = BTreeMap::new();
    for decl in &src.sentences {
        if names.contains_key(&decl.name) {
            return Err(PoolError::DuplicateName(decl.name.clone()));
        }
        if let Some(code) = decl.pinned_code {
            if code == 0 || code >= n {
                return Err(PoolError::PinOutOfRange {
                    name: decl.name.clone(),
                    code,
                    domain: n,
                });
            }
            if let Some(first) = pinned_by.get(&code) {
                return Err(PoolError::PinConflict {
                    first: first.clone(),
                    second: decl.name.clone(),
                    code,
                });
            }
            pinned_by.insert(code, decl.name.clone());
            names.insert(decl.name.clone(), code);
        } else {
            names.insert(decl.name.clone(), 0); // placeholder
        }
    }
    let mut used = vec![false; n as usize];
    used[0] = true; // reserved non-sentence code
    for (&code, _) in &pinned_by {
        used[code as usize] = true;
    }
    let mut next = 1u32;
    for decl in &src.sentences {
        if decl.pinned_code.is_none() {
            while (next as usize) < used.len() && used[next as usize] {
                next += 1;
            }
            if (next as usize) >= used.len() {
                return Err(PoolError::DomainExhausted {
                    domain: n,
                    statement: decl.name.clone(),
                });
            }
            used[next as usize] = true;
            names.insert(decl.name.clone(), next);
        }
    }

    // Resolve bodies: self-codes, normalization, folding.
    let mut builder = PoolBuilder::new(n, src.close_subformulas);
    let mut base = Vec::new();
    for decl in &src.sentences {
        let with_codes = subst_self_codes(&decl.body, &names)?;
        if let Some(v) = with_codes.some_free_var() {
            return Err(PoolError::FreeVariable {
                var: v,
                context: format!("sentence `{}`", decl.name),
            });
        }
        let resolved = normalize_formula(&with_codes, n);
        let code = names[&decl.name];
        if let Some(&existing) = builder.by_ast.get(&resolved) {
            let first = src.sentences.iter().map(|d| &d.name).nth(existing);
            return Err(PoolError::DuplicateStatement {
                first: first.cloned().unwrap_or_default(),
                second: decl.name.clone(),
            });
        }
        builder.used_codes[code as usize] = true;
        builder.add_statement(&resolved, Some(code))?;
        base.push(NamedSentence {
            name: decl.name.clone(),
            code,
            formula: resolved,
        });
    }

    builder.close()?;

    // Extra witnesses resolve over the same name table.
    let mut extras = Vec::new();
    for w in &src.extra_witnesses {
        let with_codes = subst_self_codes(w, &names)?;
        if let Some(v) = with_codes.some_free_var() {
            return Err(PoolError::FreeVariable {
                var: v,
                context: "witness declaration".to_string(),
            });
        }
        extras.push(normalize_formula(&with_codes, n));
    }

    build_tables(
        n,
        builder.statements,
        builder.code_of,
        builder.by_ast,
        base,
        names,
        extras,
    )
}

/// Parse and resolve in one step.
pub fn load_pool(src: &str) -> Result<SentencePool, PoolError> {
    resolve_pool(&parse_pool(src)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn truth_teller_self_codes() {
        // Single self-referential declaration: the sentence literally becomes
        // Tr(n̄) at its own code (first free code = 1) and the closure adds the
        // single negation.
        let pool = load_pool(
            "domain 8;\nsentence tau := Tr(#tau);\nclose negation;\nclose instances;",
        )
        .unwrap();
        assert_eq!(pool.code_of_name("tau"), Some(1));
        assert_eq!(pool.statements[0], Formula::tr(1));
        assert_eq!(pool.n_statements(), 2);
        assert_eq!(pool.statements[1], Formula::not(Formula::tr(1)));
        assert_eq!(pool.partner_idx(0), 1);
        assert_eq!(pool.partner_idx(1), 0);
        assert_eq!(pool.partner_code(1), Some(2));
    }

    #[test]
    fn liar_partner_collapses() {
        let pool = load_pool(
            "domain 8;\nsentence lam := not Tr(#lam);\nclose negation;\nclose instances;",
        )
        .unwrap();
        // Partner of `not Tr(1)` is `Tr(1)`, not a double negation.
        assert_eq!(pool.statements[1], Formula::tr(1));
        assert_eq!(pool.partner_idx(0), 1);
    }

    #[test]
    fn declared_double_negation_is_kept() {
        let pool = load_pool(
            "domain 8;\nsentence a := not not (0 = 0);\nclose negation;\nclose instances;",
        )
        .unwrap();
        let dneg = Formula::not(Formula::not(Formula::truth()));
        assert_eq!(pool.statements[0], dneg);
        // Its partner strips one negation only, producing the chain
        // ¬¬T → ¬T → T → ¬T: well-defined but not an involution.
        assert_eq!(pool.statements[1], Formula::not(Formula::truth()));
        assert_eq!(pool.statements[2], Formula::truth());
        assert_eq!(pool.partner_idx(0), 1);
        assert_eq!(pool.partner_idx(1), 2);
        assert_eq!(pool.partner_idx(2), 1);
        assert!(!pool.partner_is_involution());
    }

    #[test]
    fn plain_pools_have_involutive_partners() {
        let pool = load_pool(
            "domain 8;\nsentence tau := Tr(#tau);\nsentence lam := not Tr(#lam);\nclose negation;\nclose instances;",
        )
        .unwrap();
        assert!(pool.partner_is_involution());
    }

    #[test]
    fn instance_closure_collapses_via_folding() {
        // exists x . (Tr(#tau) and 0 <= x): all instances fold to a single
        // statement And(Tr(c), 0 = 0).
        let pool = load_pool(
            "domain 12;\nsentence tau := Tr(#tau);\nsentence e := exists x . (Tr(#tau) and 0 <= x);\nclose negation;\nclose instances;",
        )
        .unwrap();
        let inst = Formula::and(Formula::tr(1), Formula::truth());
        assert!(pool.lookup(&inst).is_some());
        // tau, e, their partners, the folded instance, its partner: 6 total.
        assert_eq!(pool.n_statements(), 6);
    }

    #[test]
    fn pinned_codes_and_auto_fill() {
        // Teller family pinned at the top of the saturation range so every
        // instance Tr(min(8+d, 11)) lands on a pinned code.
        let pool = load_pool(
            "domain 12;\nsentence all := forall x . Tr(8 + x);\nsentence t8 @ 8 := Tr(8);\nsentence t9 @ 9 := Tr(9);\nsentence t10 @ 10 := Tr(10);\nsentence t11 @ 11 := Tr(11);\nclose negation;\nclose instances;",
        )
        .unwrap();
        assert_eq!(pool.code_of_name("all"), Some(1));
        assert_eq!(pool.code_of_name("t8"), Some(8));
        assert_eq!(pool.code_of_name("t11"), Some(11));
        for v in 8..=11u32 {
            assert!(
                pool.lookup(&Formula::tr(v)).is_some(),
                "instance Tr({v}) missing"
            );
        }
        // all + 4 tellers + the 5 negation partners:
        assert_eq!(pool.n_statements(), 10);
        // Pinning a code twice or out of range errors.
        assert!(matches!(
            load_pool("domain 4;\nsentence a @ 9 := 0 = 0;\nclose negation;\nclose instances;"),
            Err(PoolError::PinOutOfRange { .. })
        ));
        assert!(matches!(
            load_pool(
                "domain 8;\nsentence a @ 2 := 0 = 0;\nsentence b @ 2 := 0 != 0;\nclose negation;\nclose instances;"
            ),
            Err(PoolError::PinConflict { .. })
        ));
    }

    #[test]
    fn missing_directives_error() {
        let err = load_pool("domain 4;\nsentence a := 0 = 0;\nclose negation;").unwrap_err();
        assert!(matches!(err, PoolError::MissingDirective("instances")));
    }

    #[test]
    fn unknown_self_code_errors() {
        let err = load_pool(
            "domain 4;\nsentence a := Tr(#nope);\nclose negation;\nclose instances;",
        )
        .unwrap_err();
        assert!(matches!(err, PoolError::UnknownName(n) if n == "nope"));
    }

    #[test]
    fn folding_is_canonical() {
        let pool = load_pool(
            "domain 8;\nsentence t := 0 = 0;\nsentence f := not (0 = 0);\nsentence g := 1 <= 0;\nclose negation;\nclose instances;",
        )
        .unwrap();
        // 1 <= 0 folds to the canonical false atom 0 != 0.
        assert_eq!(pool.statements[2], Formula::falsity());
        // not (0 = 0) keeps its negation shape (connectives never fold).
        assert_eq!(pool.statements[1], Formula::not(Formula::truth()));
    }

    #[test]
    fn witnesses_include_self_conjunctions() {
        let pool = load_pool(
            "domain 8;\nsentence tau := Tr(#tau);\nclose negation;\nclose instances;\nwitness Tr(#tau) and 0 = 0;",
        )
        .unwrap();
        let sc = Formula::and(Formula::tr(1), Formula::tr(1));
        assert!(pool.witnesses.contains(&sc));
        let extra = Formula::and(Formula::tr(1), Formula::truth());
        assert!(pool.witnesses.contains(&extra));
        assert_eq!(pool.witnesses.len(), pool.n_statements() + 2 + 1);
    }

    #[test]
    fn set_parsing() {
        let pool = load_pool(
            "domain 8;\nsentence tau := Tr(#tau);\nsentence lam := not Tr(#lam);\nclose negation;\nclose instances;",
        )
        .unwrap();
        let s = pool.parse_set("tau\nnot lam // the partner Tr(c)\n").unwrap();
        let codes = pool.set_to_codes(&s);
        let lam_partner = pool.partner_code(pool.code_of_name("lam").unwrap()).unwrap();
        assert!(codes.contains(&1));
        assert!(codes.contains(&lam_partner));
        assert!(pool.parse_set("missing").is_err());
        assert!(pool.parse_set("0").is_err());
    }

    #[test]
    fn arrow_sugar_desugars_with_genuine_double_negation() {
        let f = parse_formula("(not Tr(1)) <-> Tr(2)").unwrap();
        // (¬¬Tr(1) ∨ Tr(2)) ∧ (¬Tr(2) ∨ ¬Tr(1))
        let a = Formula::not(Formula::tr(1));
        let expected = Formula::and(
            Formula::or(Formula::not(a.clone()), Formula::tr(2)),
            Formula::or(Formula::not(Formula::tr(2)), a),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn tr_positive_matches_negation_depth_oracle() {
        fn oracle(f: &Formula, depth: usize, ok: &mut bool) {
            match f {
                Formula::TrAtom(_) => {
                    if depth % 2 == 1 {
                        *ok = false;
                    }
                }
                Formula::ArithAtom(..) | Formula::SentAtom(_) => {}
                Formula::Not(inner) => oracle(inner, depth + 1, ok),
                Formula::And(a, b) | Formula::Or(a, b) => {
                    oracle(a, depth, ok);
                    oracle(b, depth, ok);
                }
                Formula::ForAll(_, inner) | Formula::Exists(_, inner) => {
                    oracle(inner, depth, ok)
                }
            }
        }
        let cases = [
            "Tr(1)",
            "not Tr(1)",
            "not not Tr(1)",
            "Tr(1) and not (0 = 0)",
            "not (Tr(1) or not Tr(2))",
            "forall x . Tr(x)",
            "not (not Tr(1) and Tr(2))",
            "sent(3) or not sent(4)",
        ];
        for src in cases {
            let f = parse_formula(src).unwrap();
            let mut ok = true;
            oracle(&f, 0, &mut ok);
            assert_eq!(is_tr_positive(&f), ok, "mismatch on {src}");
        }
    }

    #[test]
    fn eval_saturates() {
        let n = 8;
        let t = Term::Plus(Box::new(Term::Numeral(6)), Box::new(Term::Numeral(6)));
        assert_eq!(eval_closed_term(&t, n), Some(7));
        let s = Term::Succ(Box::new(Term::Numeral(7)));
        assert_eq!(eval_closed_term(&s, n), Some(7));
        assert_eq!(eval_closed_term(&Term::Numeral(99), n), Some(7));
    }

    #[test]
    fn pool_hash_is_stable() {
        let src = "domain 8;\nsentence tau := Tr(#tau);\nclose negation;\nclose instances;";
        let a = load_pool(src).unwrap();
        let b = load_pool(src).unwrap();
        assert_eq!(a.pool_hash(), b.pool_hash());
        let c = load_pool(
            "domain 8;\nsentence tau := not Tr(#tau);\nclose negation;\nclose instances;",
        )
        .unwrap();
        assert_ne!(a.pool_hash(), c.pool_hash());
    }

    // --- random round-trip: print then parse yields the same AST ---

    fn arb_term(depth: u32) -> BoxedStrategy<Term> {
        if depth == 0 {
            prop_oneof![
                (0u32..20).prop_map(Term::Numeral),
                Just(Term::Var("x".into())),
                Just(Term::Var("y".into())),
            ]
            .boxed()
        } else {
            let sub = arb_term(depth - 1);
            prop_oneof![
                sub.clone(),
                sub.clone().prop_map(|t| Term::Succ(Box::new(t))),
                (sub.clone(), sub).prop_map(|(a, b)| Term::Plus(Box::new(a), Box::new(b))),
            ]
            .boxed()
        }
    }

    fn arb_formula(depth: u32) -> BoxedStrategy<Formula> {
        let atom = prop_oneof![
            (
                prop_oneof![Just(Rel::Eq), Just(Rel::Ne), Just(Rel::Lt), Just(Rel::Le)],
                arb_term(1),
                arb_term(1)
            )
                .prop_map(|(r, a, b)| Formula::ArithAtom(r, a, b)),
            arb_term(1).prop_map(Formula::TrAtom),
            arb_term(1).prop_map(Formula::SentAtom),
        ];
        atom.prop_recursive(depth, 64, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                inner
                    .clone()
                    .prop_map(|f| Formula::ForAll("x".into(), Box::new(f))),
                inner.prop_map(|f| Formula::Exists("y".into(), Box::new(f))),
            ]
        })
        .boxed()
    }

    proptest! {
        #[test]
        fn printer_parser_round_trip(f in arb_formula(4)) {
            let printed = f.to_string();
            let reparsed = parse_formula(&printed)
                .unwrap_or_else(|e| panic!("failed to reparse `{printed}`: {e}"));
            prop_assert_eq!(reparsed, f);
        }
    }
}
