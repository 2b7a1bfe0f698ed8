//! Graphviz figures of combinatorial proofs, and a DOT grammar checker.
//!
//! The figure has two ranked layers: upper leaves `u<i>` above lower
//! leaves `l<i>`. Connectives are drawn as nested clusters. Axiom links
//! are curved edges with `class="link"`; the leaf map is straight edges
//! with `class="map"`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::formula::{Connective, Formula, NodeId};
use crate::proof::CombinatorialProof;

pub fn emit_figure(p: &CombinatorialProof) -> String {
    let mut out = String::new();
    out.push_str("graph combinatorial_proof {\n");
    out.push_str("  newrank=true;\n");
    out.push_str("  node [shape=plaintext];\n");
    emit_formula(&mut out, &p.upper, "u");
    emit_formula(&mut out, &p.lower, "l");
    for (prefix, f) in [("u", &p.upper), ("l", &p.lower)] {
        let ids: Vec<String> = (0..f.leaf_count()).map(|i| format!("{prefix}{i}")).collect();
        let _ = writeln!(out, "  {{ rank=same; {}; }}", ids.join("; "));
    }
    for &(a, b) in p.linking.pairs() {
        let _ = writeln!(out, "  u{a} -- u{b} [class=\"link\", constraint=false, color=blue, style=bold];");
    }
    for (i, &t) in p.map.as_slice().iter().enumerate() {
        let _ = writeln!(out, "  u{i} -- l{t} [class=\"map\"];");
    }
    out.push_str("}\n");
    out
}

fn emit_formula(out: &mut String, f: &Formula, prefix: &str) {
    fn go(out: &mut String, f: &Formula, prefix: &str, node: NodeId, indent: usize) {
        let pad = "  ".repeat(indent);
        match f.children(node) {
            None => {
                let leaf = f.leaf_range(node).start;
                let label = f.literal(leaf).to_string();
                let _ = writeln!(out, "{pad}{prefix}{leaf} [label={}];", quote(&label));
            }
            Some((left, right)) => {
                let symbol = match f.connective(node) {
                    Some(Connective::And) => "&",
                    _ => "|",
                };
                let _ = writeln!(out, "{pad}subgraph cluster_{prefix}_{node} {{");
                let _ = writeln!(out, "{pad}  label={};", quote(symbol));
                go(out, f, prefix, left, indent + 1);
                go(out, f, prefix, right, indent + 1);
                let _ = writeln!(out, "{pad}}}");
            }
        }
    }
    go(out, f, prefix, f.root(), 1);
}

fn quote(s: &str) -> String {
    let mut q = String::with_capacity(s.len() + 2);
    q.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            q.push('\\');
        }
        q.push(c);
    }
    q.push('"');
    q
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("DOT syntax error at offset {offset}: {message}")]
pub struct DotError {
    pub offset: usize,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DotEdge {
    pub from: String,
    pub to: String,
    pub attrs: BTreeMap<String, String>,
}

/// What a well-formed DOT text declares.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DotSummary {
    pub directed: bool,
    /// Nodes given by node statements.
    pub nodes: BTreeSet<String>,
    /// Edges between plain node ids; edge chains contribute one per hop.
    pub edges: Vec<DotEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Id(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Eq,
    Colon,
    Edge(bool),
    Eof,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, DotError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |offset: usize, message: &str| DotError { offset, message: message.to_string() };
    while i < chars.len() {
        let (pos, c) = chars[i];
        let next = chars.get(i + 1).map(|&(_, c)| c);
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '/' && next == Some('/') || c == '#' {
            while i < chars.len() && chars[i].1 != '\n' {
                i += 1;
            }
            continue;
        }
        if c == '/' && next == Some('*') {
            i += 2;
            loop {
                if i + 1 >= chars.len() {
                    return Err(err(pos, "unterminated comment"));
                }
                if chars[i].1 == '*' && chars[i + 1].1 == '/' {
                    i += 2;
                    break;
                }
                i += 1;
            }
            continue;
        }
        let simple = match c {
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ';' => Some(Tok::Semi),
            ',' => Some(Tok::Comma),
            '=' => Some(Tok::Eq),
            ':' => Some(Tok::Colon),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((t, pos));
            i += 1;
            continue;
        }
        if c == '-' && (next == Some('-') || next == Some('>')) {
            out.push((Tok::Edge(next == Some('>')), pos));
            i += 2;
            continue;
        }
        if c == '"' {
            let mut s = String::new();
            i += 1;
            loop {
                let Some(&(_, d)) = chars.get(i) else {
                    return Err(err(pos, "unterminated string"));
                };
                i += 1;
                match d {
                    '"' => break,
                    '\\' if chars.get(i).is_some_and(|&(_, e)| e == '"') => {
                        s.push('"');
                        i += 1;
                    }
                    _ => s.push(d),
                }
            }
            out.push((Tok::Id(s), pos));
            continue;
        }
        if c == '<' {
            let mut depth = 0;
            let start = i;
            loop {
                let Some(&(_, d)) = chars.get(i) else {
                    return Err(err(pos, "unterminated HTML string"));
                };
                i += 1;
                if d == '<' {
                    depth += 1;
                } else if d == '>' {
                    depth -= 1;
                    if depth == 0 {
                        break;
                    }
                }
            }
            out.push((Tok::Id(chars[start..i].iter().map(|&(_, c)| c).collect()), pos));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            out.push((Tok::Id(chars[start..i].iter().map(|&(_, c)| c).collect()), pos));
            continue;
        }
        if c.is_ascii_digit() || c == '.' || c == '-' {
            let start = i;
            i += 1;
            while i < chars.len() && (chars[i].1.is_ascii_digit() || chars[i].1 == '.') {
                i += 1;
            }
            let lit: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            if lit == "-" || lit == "." || lit.matches('.').count() > 1 {
                return Err(err(pos, "malformed numeral"));
            }
            out.push((Tok::Id(lit), pos));
            continue;
        }
        return Err(err(pos, &format!("unexpected character `{c}`")));
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

struct DotParser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    summary: DotSummary,
}

impl DotParser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, message: &str) -> Result<T, DotError> {
        Err(DotError { offset: self.toks[self.pos].1, message: message.to_string() })
    }

    fn keyword(&self, k: usize, word: &str) -> bool {
        matches!(self.peek_at(k), Tok::Id(s) if s.eq_ignore_ascii_case(word))
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), DotError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.fail(&format!("expected {what}"))
        }
    }

    fn id(&mut self) -> Result<String, DotError> {
        match self.bump() {
            Tok::Id(s) => Ok(s),
            _ => {
                self.pos -= 1;
                self.fail("expected identifier")
            }
        }
    }

    fn graph(&mut self) -> Result<(), DotError> {
        if self.keyword(0, "strict") {
            self.bump();
        }
        if self.keyword(0, "digraph") {
            self.summary.directed = true;
        } else if !self.keyword(0, "graph") {
            return self.fail("expected `graph` or `digraph`");
        }
        self.bump();
        if matches!(self.peek(), Tok::Id(_)) {
            self.bump();
        }
        self.expect(Tok::LBrace, "`{`")?;
        self.stmt_list()?;
        self.expect(Tok::RBrace, "`}`")?;
        if *self.peek() != Tok::Eof {
            return self.fail("trailing input after graph");
        }
        Ok(())
    }

    fn stmt_list(&mut self) -> Result<(), DotError> {
        while *self.peek() != Tok::RBrace {
            if *self.peek() == Tok::Eof {
                return self.fail("unexpected end of input");
            }
            self.stmt()?;
            if *self.peek() == Tok::Semi {
                self.bump();
            }
        }
        Ok(())
    }

    fn stmt(&mut self) -> Result<(), DotError> {
        if self.keyword(0, "graph") || self.keyword(0, "node") || self.keyword(0, "edge") {
            self.bump();
            if *self.peek() != Tok::LBracket {
                return self.fail("expected attribute list");
            }
            self.attr_lists()?;
            return Ok(());
        }
        if matches!(self.peek(), Tok::Id(_)) && *self.peek_at(1) == Tok::Eq && !self.keyword(0, "subgraph") {
            self.bump();
            self.bump();
            self.id()?;
            return Ok(());
        }
        let first = self.endpoint()?;
        if matches!(self.peek(), Tok::Edge(_)) {
            let mut hops = Vec::new();
            let mut prev = first;
            while let Tok::Edge(directed) = *self.peek() {
                if directed != self.summary.directed {
                    return self.fail("edge operator does not match graph kind");
                }
                self.bump();
                let next = self.endpoint()?;
                hops.push((prev, next.clone()));
                prev = next;
            }
            let attrs = if *self.peek() == Tok::LBracket { self.attr_lists()? } else { BTreeMap::new() };
            for (a, b) in hops {
                if let (Some(from), Some(to)) = (a, b) {
                    self.summary.edges.push(DotEdge { from, to, attrs: attrs.clone() });
                }
            }
            return Ok(());
        }
        match first {
            Some(node) => {
                if *self.peek() == Tok::LBracket {
                    self.attr_lists()?;
                }
                self.summary.nodes.insert(node);
                Ok(())
            }
            None => Ok(()),
        }
    }

    /// A node id (`Some`) or a subgraph (`None`).
    fn endpoint(&mut self) -> Result<Option<String>, DotError> {
        if self.keyword(0, "subgraph") || *self.peek() == Tok::LBrace {
            if self.keyword(0, "subgraph") {
                self.bump();
                if matches!(self.peek(), Tok::Id(_)) {
                    self.bump();
                }
            }
            self.expect(Tok::LBrace, "`{`")?;
            self.stmt_list()?;
            self.expect(Tok::RBrace, "`}`")?;
            return Ok(None);
        }
        let id = self.id()?;
        if *self.peek() == Tok::Colon {
            self.bump();
            self.id()?;
            if *self.peek() == Tok::Colon {
                self.bump();
                self.id()?;
            }
        }
        Ok(Some(id))
    }

    fn attr_lists(&mut self) -> Result<BTreeMap<String, String>, DotError> {
        let mut attrs = BTreeMap::new();
        while *self.peek() == Tok::LBracket {
            self.bump();
            while *self.peek() != Tok::RBracket {
                let key = self.id()?;
                self.expect(Tok::Eq, "`=`")?;
                let value = self.id()?;
                attrs.insert(key, value);
                if matches!(self.peek(), Tok::Semi | Tok::Comma) {
                    self.bump();
                }
            }
            self.bump();
        }
        Ok(attrs)
    }
}

/// Checks `text` against the DOT language grammar.
pub fn validate_dot(text: &str) -> Result<DotSummary, DotError> {
    let mut p = DotParser { toks: lex(text)?, pos: 0, summary: DotSummary::default() };
    p.graph()?;
    Ok(p.summary)
}
