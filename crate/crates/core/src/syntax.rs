//! Formula AST, concrete grammar, and sublanguage utilities.
//!
//! The abstract language is `⊤ | p | ¬φ | φ∧ψ | ℓ_i φ | a_i φ | k_i φ`.
//! Concrete syntax uses ASCII: `T`, atom identifiers, `~`, `&`, `L1`, `A1`,
//! `K1`, and parentheses, plus `|`, `->`, `<->` as surface sugar that the
//! parser desugars into the primitive connectives. Precedence, tightest
//! first: modalities and negation, `&`, `|`, `->` (right-associative),
//! `<->`. Agent indices are 1-based in the surface syntax and 0-based in
//! the AST.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::MAX_ATOMS;

/// Index of an agent (0-based).
pub type AgentId = usize;

/// Index of an atom within a vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AtomId(pub u8);

/// A subset of a vocabulary of at most [`MAX_ATOMS`] atoms, as a bitmask.
/// Doubles as the index of a lattice space and of a sublanguage.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
pub struct AtomSet(pub u16);

impl AtomSet {
    pub const EMPTY: AtomSet = AtomSet(0);

    pub fn singleton(a: AtomId) -> Self {
        AtomSet(1 << a.0)
    }

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_ATOMS);
        if n == 16 {
            AtomSet(u16::MAX)
        } else {
            AtomSet((1u16 << n) - 1)
        }
    }

    pub fn contains(self, a: AtomId) -> bool {
        self.0 & (1 << a.0) != 0
    }

    pub fn insert(&mut self, a: AtomId) {
        self.0 |= 1 << a.0;
    }

    pub fn remove(self, a: AtomId) -> Self {
        AtomSet(self.0 & !(1 << a.0))
    }

    pub fn union(self, other: Self) -> Self {
        AtomSet(self.0 | other.0)
    }

    pub fn intersect(self, other: Self) -> Self {
        AtomSet(self.0 & other.0)
    }

    pub fn minus(self, other: Self) -> Self {
        AtomSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = AtomId> {
        (0..16u8).filter(move |b| self.0 & (1 << b) != 0).map(AtomId)
    }

    /// All subsets of `self`, ascending in the bitmask order.
    pub fn subsets(self) -> impl Iterator<Item = AtomSet> {
        let mask = self.0;
        (0..=u16::MAX)
            .take_while(move |_| true)
            .filter(move |s| s & !mask == 0)
            .take_while(move |s| *s <= mask)
            .map(AtomSet)
    }
}

/// A fixed vocabulary of named atoms; `AtomId` indexes into it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocab {
    names: Vec<String>,
}

impl Vocab {
    /// Atom names must be unique identifiers of the shape
    /// `[a-z][A-Za-z0-9_]*`; at most [`MAX_ATOMS`] of them.
    pub fn new(names: Vec<String>) -> Result<Self, ParseError> {
        if names.len() > MAX_ATOMS {
            return Err(ParseError::TooManyAtoms { count: names.len() });
        }
        for (i, n) in names.iter().enumerate() {
            if !is_atom_name(n) {
                return Err(ParseError::BadAtomName { name: n.clone() });
            }
            if names[..i].contains(n) {
                return Err(ParseError::DuplicateAtom { name: n.clone() });
            }
        }
        Ok(Vocab { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn full_set(&self) -> AtomSet {
        AtomSet::full(self.names.len())
    }

    pub fn name(&self, a: AtomId) -> &str {
        &self.names[a.0 as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Option<AtomId> {
        self.names.iter().position(|n| n == name).map(|i| AtomId(i as u8))
    }

    pub fn atoms(&self) -> impl Iterator<Item = AtomId> + '_ {
        (0..self.names.len()).map(|i| AtomId(i as u8))
    }

    /// Canonical label for a subset: atom names sorted lexicographically and
    /// comma-joined, `""` for the empty set. Used as the space key in model
    /// files.
    pub fn set_label(&self, set: AtomSet) -> String {
        let mut names: Vec<&str> = set.iter().map(|a| self.name(a)).collect();
        names.sort_unstable();
        names.join(",")
    }

    /// Inverse of [`Vocab::set_label`].
    pub fn parse_set_label(&self, label: &str) -> Result<AtomSet, ParseError> {
        let mut set = AtomSet::EMPTY;
        if label.is_empty() {
            return Ok(set);
        }
        for part in label.split(',') {
            let a = self
                .lookup(part.trim())
                .ok_or_else(|| ParseError::UnknownAtom { name: part.trim().to_string(), pos: 0 })?;
            set.insert(a);
        }
        Ok(set)
    }
}

fn is_atom_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A formula of the language, over primitive connectives only. Surface
/// sugar (`|`, `->`, `<->`) is desugared by the parser.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Top,
    Atom(AtomId),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    /// Implicit knowledge: true at a world iff the operand holds throughout
    /// the agent's accessibility class.
    L(AgentId, Box<Formula>),
    /// Awareness: true iff the agent is aware of every atom of the operand.
    A(AgentId, Box<Formula>),
    /// Explicit knowledge: implicit knowledge plus awareness.
    K(AgentId, Box<Formula>),
}

impl Formula {
    pub fn atom(a: AtomId) -> Self {
        Formula::Atom(a)
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn l(i: AgentId, f: Formula) -> Self {
        Formula::L(i, Box::new(f))
    }

    pub fn a(i: AgentId, f: Formula) -> Self {
        Formula::A(i, Box::new(f))
    }

    pub fn k(i: AgentId, f: Formula) -> Self {
        Formula::K(i, Box::new(f))
    }

    /// `φ ∨ ψ` as `¬(¬φ ∧ ¬ψ)`.
    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::not(Formula::and(Formula::not(l), Formula::not(r)))
    }

    /// `φ → ψ` as `¬(φ ∧ ¬ψ)`.
    pub fn implies(l: Formula, r: Formula) -> Self {
        Formula::not(Formula::and(l, Formula::not(r)))
    }

    /// `φ ↔ ψ` as `(φ → ψ) ∧ (ψ → φ)`.
    pub fn iff(l: Formula, r: Formula) -> Self {
        Formula::and(Formula::implies(l.clone(), r.clone()), Formula::implies(r, l))
    }

    /// AST depth; `T` and atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Atom(_) => 0,
            Formula::Not(f) | Formula::L(_, f) | Formula::A(_, f) | Formula::K(_, f) => {
                1 + f.depth()
            }
            Formula::And(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// The set of atoms occurring in the formula; `atoms_of(T) = ∅`.
    pub fn atoms(&self) -> AtomSet {
        match self {
            Formula::Top => AtomSet::EMPTY,
            Formula::Atom(a) => AtomSet::singleton(*a),
            Formula::Not(f) | Formula::L(_, f) | Formula::A(_, f) | Formula::K(_, f) => f.atoms(),
            Formula::And(l, r) => l.atoms().union(r.atoms()),
        }
    }

    /// Largest agent index occurring, if any.
    pub fn max_agent(&self) -> Option<AgentId> {
        match self {
            Formula::Top | Formula::Atom(_) => None,
            Formula::Not(f) => f.max_agent(),
            Formula::And(l, r) => match (l.max_agent(), r.max_agent()) {
                (Some(a), Some(b)) => Some(a.max(b)),
                (a, b) => a.or(b),
            },
            Formula::L(i, f) | Formula::A(i, f) | Formula::K(i, f) => {
                Some(f.max_agent().map_or(*i, |m| m.max(*i)))
            }
        }
    }

    /// True iff all atoms of the formula lie in `phi`, i.e. the formula
    /// belongs to the sublanguage indexed by `phi`.
    pub fn in_sublanguage(&self, phi: AtomSet) -> bool {
        self.atoms().is_subset(phi)
    }

    /// Replace every explicit-knowledge node `k_i ψ`, innermost first, by
    /// `ℓ_i ψ' ∧ a_i ψ'` where `ψ'` is the expansion of `ψ`. The result is
    /// free of `K` nodes and has the same atoms.
    pub fn expand_k(&self) -> Formula {
        match self {
            Formula::Top => Formula::Top,
            Formula::Atom(a) => Formula::Atom(*a),
            Formula::Not(f) => Formula::not(f.expand_k()),
            Formula::And(l, r) => Formula::and(l.expand_k(), r.expand_k()),
            Formula::L(i, f) => Formula::l(*i, f.expand_k()),
            Formula::A(i, f) => Formula::a(*i, f.expand_k()),
            Formula::K(i, f) => {
                let inner = f.expand_k();
                Formula::and(Formula::l(*i, inner.clone()), Formula::a(*i, inner))
            }
        }
    }
}

/// Errors from lexing or parsing formula text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("lexical error at byte {pos}: {msg}")]
    Lex { pos: usize, msg: String },
    #[error("unknown atom `{name}` at byte {pos}")]
    UnknownAtom { name: String, pos: usize },
    #[error("malformed agent index at byte {pos}: {msg}")]
    BadAgentIndex { pos: usize, msg: String },
    #[error("unbalanced parentheses at byte {pos}")]
    Unbalanced { pos: usize },
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected token at byte {pos}: {msg}")]
    UnexpectedToken { pos: usize, msg: String },
    #[error("vocabulary has {count} atoms, more than the cap of 16")]
    TooManyAtoms { count: usize },
    #[error("`{name}` is not a valid atom name")]
    BadAtomName { name: String },
    #[error("duplicate atom `{name}` in vocabulary")]
    DuplicateAtom { name: String },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Top,
    Ident(String),
    Modal(char, AgentId), // 'L' | 'A' | 'K', 0-based agent
    Tilde,
    Amp,
    Pipe,
    Arrow,
    DArrow,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '~' => {
                toks.push((i, Tok::Tilde));
                i += 1;
            }
            '&' => {
                toks.push((i, Tok::Amp));
                i += 1;
            }
            '|' => {
                toks.push((i, Tok::Pipe));
                i += 1;
            }
            '(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    toks.push((i, Tok::Arrow));
                    i += 2;
                } else {
                    return Err(ParseError::Lex { pos: i, msg: "expected `->`".into() });
                }
            }
            '<' => {
                if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') {
                    toks.push((i, Tok::DArrow));
                    i += 3;
                } else {
                    return Err(ParseError::Lex { pos: i, msg: "expected `<->`".into() });
                }
            }
            'T' => {
                toks.push((i, Tok::Top));
                i += 1;
            }
            'L' | 'A' | 'K' => {
                let start = i;
                i += 1;
                let ds = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if ds == i {
                    return Err(ParseError::BadAgentIndex {
                        pos: start,
                        msg: format!("`{c}` must be followed by a 1-based agent number"),
                    });
                }
                let n: usize = text[ds..i].parse().map_err(|_| ParseError::BadAgentIndex {
                    pos: start,
                    msg: "agent number out of range".into(),
                })?;
                if n == 0 {
                    return Err(ParseError::BadAgentIndex {
                        pos: start,
                        msg: "agent numbers start at 1".into(),
                    });
                }
                toks.push((start, Tok::Modal(c, n - 1)));
            }
            c if c.is_ascii_lowercase() => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((start, Tok::Ident(text[start..i].to_string())));
            }
            other => {
                return Err(ParseError::Lex { pos: i, msg: format!("unexpected `{other}`") });
            }
        }
    }
    Ok(toks)
}

struct Parser<'v> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    vocab: &'v Vocab,
}

impl<'v> Parser<'v> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn bump(&mut self) -> Option<(usize, Tok)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or_else(|| self.toks.last().map_or(0, |(p, _)| *p + 1), |(p, _)| *p)
    }

    // iff := imp (`<->` imp)*      (left-assoc chain of biconditionals)
    fn parse_iff(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.parse_imp()?;
        while matches!(self.peek(), Some(Tok::DArrow)) {
            self.bump();
            let r = self.parse_imp()?;
            f = Formula::iff(f, r);
        }
        Ok(f)
    }

    // imp := or (`->` imp)?        (right-assoc)
    fn parse_imp(&mut self) -> Result<Formula, ParseError> {
        let l = self.parse_or()?;
        if matches!(self.peek(), Some(Tok::Arrow)) {
            self.bump();
            let r = self.parse_imp()?;
            Ok(Formula::implies(l, r))
        } else {
            Ok(l)
        }
    }

    fn parse_or(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.parse_and()?;
        while matches!(self.peek(), Some(Tok::Pipe)) {
            self.bump();
            let r = self.parse_and()?;
            f = Formula::or(f, r);
        }
        Ok(f)
    }

    fn parse_and(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.parse_unary()?;
        while matches!(self.peek(), Some(Tok::Amp)) {
            self.bump();
            let r = self.parse_unary()?;
            f = Formula::and(f, r);
        }
        Ok(f)
    }

    fn parse_unary(&mut self) -> Result<Formula, ParseError> {
        match self.bump() {
            None => Err(ParseError::UnexpectedEnd),
            Some((_, Tok::Tilde)) => Ok(Formula::not(self.parse_unary()?)),
            Some((_, Tok::Modal(m, i))) => {
                let f = self.parse_unary()?;
                Ok(match m {
                    'L' => Formula::l(i, f),
                    'A' => Formula::a(i, f),
                    _ => Formula::k(i, f),
                })
            }
            Some((_, Tok::Top)) => Ok(Formula::Top),
            Some((p, Tok::Ident(name))) => match self.vocab.lookup(&name) {
                Some(a) => Ok(Formula::Atom(a)),
                None => Err(ParseError::UnknownAtom { name, pos: p }),
            },
            Some((p, Tok::LParen)) => {
                let f = self.parse_iff()?;
                match self.bump() {
                    Some((_, Tok::RParen)) => Ok(f),
                    _ => Err(ParseError::Unbalanced { pos: p }),
                }
            }
            Some((p, Tok::RParen)) => Err(ParseError::Unbalanced { pos: p }),
            Some((p, t)) => {
                Err(ParseError::UnexpectedToken { pos: p, msg: format!("{t:?}") })
            }
        }
    }
}

/// Parse formula text against a vocabulary.
pub fn parse_formula(text: &str, vocab: &Vocab) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, vocab };
    let f = p.parse_iff()?;
    if p.pos != p.toks.len() {
        return Err(ParseError::UnexpectedToken { pos: p.here(), msg: "trailing input".into() });
    }
    Ok(f)
}

/// Print a formula in the concrete syntax. Binary conjunctions are fully
/// parenthesized, so `parse_formula(print_formula(f)) == f`.
pub fn print_formula(f: &Formula, vocab: &Vocab) -> String {
    let mut s = String::new();
    write_formula(f, vocab, &mut s);
    s
}

fn write_formula(f: &Formula, vocab: &Vocab, out: &mut String) {
    match f {
        Formula::Top => out.push('T'),
        Formula::Atom(a) => out.push_str(vocab.name(*a)),
        Formula::Not(g) => {
            out.push('~');
            write_formula(g, vocab, out);
        }
        Formula::And(l, r) => {
            out.push('(');
            write_formula(l, vocab, out);
            out.push_str(" & ");
            write_formula(r, vocab, out);
            out.push(')');
        }
        Formula::L(i, g) | Formula::A(i, g) | Formula::K(i, g) => {
            let tag = match f {
                Formula::L(..) => 'L',
                Formula::A(..) => 'A',
                _ => 'K',
            };
            out.push(tag);
            out.push_str(&(i + 1).to_string());
            out.push(' ');
            write_formula(g, vocab, out);
        }
    }
}

/// Printable view of a formula bundled with its vocabulary.
pub struct DisplayFormula<'a>(pub &'a Formula, pub &'a Vocab);

impl fmt::Display for DisplayFormula<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self.0, self.1))
    }
}

/// Deterministic, duplicate-free stream of all formulas over the atoms in
/// `phi` and agents `0..agents`, of AST depth at most `max_depth`, built
/// from the primitive connectives `¬, ∧, ℓ, a, k`.
///
/// Formulas are produced level by level: all depth-0 formulas, then all of
/// depth exactly 1, and so on. Distinct constructions yield structurally
/// distinct trees, so no deduplication is needed.
pub fn enumerate_formulas(
    phi: AtomSet,
    agents: usize,
    max_depth: usize,
) -> impl Iterator<Item = Formula> {
    FormulaStream::new(phi, agents, max_depth)
}

struct FormulaStream {
    agents: usize,
    max_depth: usize,
    /// Formulas of depth exactly `d`, for each completed level `d`.
    levels: Vec<Vec<Formula>>,
    pending: VecDeque<Formula>,
    next_level: usize,
}

impl FormulaStream {
    fn new(phi: AtomSet, agents: usize, max_depth: usize) -> Self {
        let mut base = vec![Formula::Top];
        base.extend(phi.iter().map(Formula::Atom));
        FormulaStream {
            agents,
            max_depth,
            levels: Vec::new(),
            pending: base.iter().cloned().collect(),
            next_level: 0,
        }
        .with_level(base)
    }

    fn with_level(mut self, level: Vec<Formula>) -> Self {
        self.levels.push(level);
        self.next_level = 1;
        self
    }

    fn build_level(&mut self) {
        let d = self.next_level;
        let prev = &self.levels[d - 1];
        let mut level = Vec::new();
        for f in prev {
            level.push(Formula::not(f.clone()));
        }
        for i in 0..self.agents {
            for f in prev {
                level.push(Formula::l(i, f.clone()));
            }
        }
        for i in 0..self.agents {
            for f in prev {
                level.push(Formula::a(i, f.clone()));
            }
        }
        for i in 0..self.agents {
            for f in prev {
                level.push(Formula::k(i, f.clone()));
            }
        }
        // Conjunctions of depth exactly d: at least one side has depth d-1.
        for (dl, ls) in self.levels.iter().enumerate() {
            for (dr, rs) in self.levels.iter().enumerate() {
                if dl.max(dr) != d - 1 {
                    continue;
                }
                for l in ls {
                    for r in rs {
                        level.push(Formula::and(l.clone(), r.clone()));
                    }
                }
            }
        }
        self.pending.extend(level.iter().cloned());
        self.levels.push(level);
        self.next_level += 1;
    }
}

impl Iterator for FormulaStream {
    type Item = Formula;

    fn next(&mut self) -> Option<Formula> {
        loop {
            if let Some(f) = self.pending.pop_front() {
                return Some(f);
            }
            if self.next_level > self.max_depth {
                return None;
            }
            self.build_level();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vocab_pq() -> Vocab {
        Vocab::new(vec!["p".into(), "q".into()]).unwrap()
    }

    fn p() -> Formula {
        Formula::Atom(AtomId(0))
    }

    fn q() -> Formula {
        Formula::Atom(AtomId(1))
    }

    #[test]
    fn parses_top() {
        let v = vocab_pq();
        assert_eq!(parse_formula("T", &v).unwrap(), Formula::Top);
    }

    #[test]
    fn parses_modal_nesting() {
        let v = vocab_pq();
        let f = parse_formula("K1 (p & ~A1 q)", &v).unwrap();
        assert_eq!(f, Formula::k(0, Formula::and(p(), Formula::not(Formula::a(0, q())))));
    }

    #[test]
    fn desugars_implication() {
        let v = vocab_pq();
        let f = parse_formula("L2 p -> A2 p", &v).unwrap();
        assert_eq!(
            f,
            Formula::not(Formula::and(
                Formula::l(1, p()),
                Formula::not(Formula::a(1, p()))
            ))
        );
    }

    #[test]
    fn desugars_or_and_iff() {
        let v = vocab_pq();
        assert_eq!(parse_formula("p | q", &v).unwrap(), Formula::or(p(), q()));
        assert_eq!(parse_formula("p <-> q", &v).unwrap(), Formula::iff(p(), q()));
    }

    #[test]
    fn implication_is_right_associative() {
        let v = vocab_pq();
        let f = parse_formula("p -> q -> p", &v).unwrap();
        assert_eq!(f, Formula::implies(p(), Formula::implies(q(), p())));
    }

    #[test]
    fn precedence_modal_tighter_than_and() {
        let v = vocab_pq();
        let f = parse_formula("K1 p & q", &v).unwrap();
        assert_eq!(f, Formula::and(Formula::k(0, p()), q()));
    }

    #[test]
    fn print_examples() {
        let v = vocab_pq();
        assert_eq!(print_formula(&Formula::Top, &v), "T");
        assert_eq!(print_formula(&Formula::k(0, p()), &v), "K1 p");
        assert_eq!(print_formula(&Formula::and(p(), q()), &v), "(p & q)");
    }

    #[test]
    fn parse_errors() {
        let v = vocab_pq();
        assert!(matches!(parse_formula("r", &v), Err(ParseError::UnknownAtom { .. })));
        assert!(matches!(parse_formula("K0 p", &v), Err(ParseError::BadAgentIndex { .. })));
        assert!(matches!(parse_formula("(p & q", &v), Err(ParseError::Unbalanced { .. })));
        assert!(matches!(parse_formula("p q", &v), Err(ParseError::UnexpectedToken { .. })));
        assert!(matches!(parse_formula("", &v), Err(ParseError::UnexpectedEnd)));
        assert!(matches!(parse_formula("p @ q", &v), Err(ParseError::Lex { .. })));
    }

    #[test]
    fn vocabulary_rules() {
        assert!(Vocab::new(vec!["p".into(), "p".into()]).is_err());
        assert!(Vocab::new(vec!["P".into()]).is_err());
        assert!(Vocab::new((0..17).map(|i| format!("a{i}")).collect()).is_err());
        assert!(Vocab::new(vec!["t".into()]).is_ok());
    }

    #[test]
    fn atoms_of_examples() {
        let f = Formula::k(0, Formula::and(p(), Formula::not(Formula::a(0, q()))));
        assert_eq!(f.atoms(), AtomSet(0b11));
        assert_eq!(Formula::Top.atoms(), AtomSet::EMPTY);
        assert_eq!(Formula::l(0, Formula::a(1, p())).atoms(), AtomSet(0b01));
    }

    #[test]
    fn sublanguage_examples() {
        assert!(!Formula::and(p(), q()).in_sublanguage(AtomSet(0b01)));
        assert!(Formula::Top.in_sublanguage(AtomSet::EMPTY));
        assert!(Formula::a(0, p()).in_sublanguage(AtomSet(0b11)));
    }

    #[test]
    fn expand_k_examples() {
        let f = Formula::k(0, p());
        assert_eq!(f.expand_k(), Formula::and(Formula::l(0, p()), Formula::a(0, p())));
        assert_eq!(p().expand_k(), p());
        let nested = Formula::k(0, Formula::k(1, p()));
        let inner = Formula::and(Formula::l(1, p()), Formula::a(1, p()));
        assert_eq!(
            nested.expand_k(),
            Formula::and(Formula::l(0, inner.clone()), Formula::a(0, inner))
        );
    }

    #[test]
    fn enumerate_depth0() {
        let fs: Vec<_> = enumerate_formulas(AtomSet(0b01), 1, 0).collect();
        assert_eq!(fs, vec![Formula::Top, p()]);
    }

    #[test]
    fn enumerate_empty_vocab_depth1() {
        let fs: Vec<_> = enumerate_formulas(AtomSet::EMPTY, 1, 1).collect();
        let t = Formula::Top;
        assert_eq!(
            fs,
            vec![
                t.clone(),
                Formula::not(t.clone()),
                Formula::l(0, t.clone()),
                Formula::a(0, t.clone()),
                Formula::k(0, t.clone()),
                Formula::and(t.clone(), t),
            ]
        );
    }

    // Count frozen from this very enumeration at depth 1 over one atom and
    // one agent: 2 atoms-level formulas, 4 unary connectives over each of
    // the 2, and 2x2 conjunctions.
    #[test]
    fn enumerate_count_one_atom_depth1() {
        let n = enumerate_formulas(AtomSet(0b01), 1, 1).count();
        assert_eq!(n, 2 + 4 * 2 + 4);
        assert_eq!(n, 14);
    }

    #[test]
    fn enumerate_is_duplicate_free() {
        let fs: Vec<_> = enumerate_formulas(AtomSet(0b11), 2, 2).collect();
        let set: std::collections::HashSet<_> = fs.iter().cloned().collect();
        assert_eq!(fs.len(), set.len());
        assert!(fs.iter().all(|f| f.depth() <= 2));
    }

    prop_compose! {
        fn arb_formula_inner(vocab_size: usize, agents: usize)(depth in 0usize..=4)
            (f in arb_formula_at(vocab_size, agents, depth)) -> Formula { f }
    }

    fn arb_formula_at(
        vocab_size: usize,
        agents: usize,
        depth: usize,
    ) -> BoxedStrategy<Formula> {
        if depth == 0 {
            let mut leaves = vec![Formula::Top];
            leaves.extend((0..vocab_size).map(|i| Formula::Atom(AtomId(i as u8))));
            proptest::sample::select(leaves).boxed()
        } else {
            let sub = arb_formula_at(vocab_size, agents, depth - 1);
            let agent = 0..agents.max(1);
            prop_oneof![
                sub.clone().prop_map(Formula::not),
                (arb_formula_at(vocab_size, agents, depth - 1), sub.clone())
                    .prop_map(|(l, r)| Formula::and(l, r)),
                (agent.clone(), sub.clone()).prop_map(|(i, f)| Formula::l(i, f)),
                (agent.clone(), sub.clone()).prop_map(|(i, f)| Formula::a(i, f)),
                (agent, sub).prop_map(|(i, f)| Formula::k(i, f)),
            ]
            .boxed()
        }
    }

    proptest! {
        #[test]
        fn roundtrip(f in arb_formula_inner(2, 2)) {
            let v = vocab_pq();
            let printed = print_formula(&f, &v);
            let parsed = parse_formula(&printed, &v).unwrap();
            prop_assert_eq!(&parsed, &f);
            prop_assert_eq!(print_formula(&parsed, &v), printed);
        }

        #[test]
        fn expand_k_preserves_atoms(f in arb_formula_inner(2, 2)) {
            let e = f.expand_k();
            prop_assert_eq!(e.atoms(), f.atoms());
            fn k_free(f: &Formula) -> bool {
                match f {
                    Formula::K(..) => false,
                    Formula::Top | Formula::Atom(_) => true,
                    Formula::Not(g) | Formula::L(_, g) | Formula::A(_, g) => k_free(g),
                    Formula::And(l, r) => k_free(l) && k_free(r),
                }
            }
            prop_assert!(k_free(&e));
        }

        #[test]
        fn sublanguage_monotone(f in arb_formula_inner(2, 2), small in 0u16..4, extra in 0u16..4) {
            let phi = AtomSet(small);
            let psi = AtomSet(small | extra);
            if f.in_sublanguage(phi) {
                prop_assert!(f.in_sublanguage(psi));
            }
        }
    }
}
