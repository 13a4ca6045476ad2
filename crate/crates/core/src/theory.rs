//! Propositional domain theories.
//!
//! A theory is written as Prolog-style clauses:
//!
//! ```text
//! % comment
//! promoter :- contact, conformation.
//! minus_35 :- p-36=t, p-35=t, p-34=g.
//! minus_35 :- p-36=t, not(p-31=a).
//! ```
//!
//! Each body condition is `feature=value`, the name of another head,
//! `not(<condition>)`, or `true`. Clauses sharing a head are joined by
//! disjunction; a body with two or more conditions is a conjunction. Head
//! references are expanded inline, so the result is a tree: a head used twice
//! appears as two copies with distinct paths.

use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::dataset::Schema;
use crate::error::{Error, Result};

/// The canonical promoter recognition theory, shipped with the crate.
pub const PROMOTER_THEORY: &str = include_str!("../data/promoters.theory");

/// A directly testable `feature=value` test.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Condition {
    pub feature: String,
    pub value: String,
}

impl Condition {
    pub fn new(feature: impl Into<String>, value: impl Into<String>) -> Self {
        Condition {
            feature: feature.into(),
            value: value.into(),
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.feature, self.value)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum NodeKind {
    Leaf { condition: Condition },
    True,
    And { children: Vec<TheoryNode> },
    Or { children: Vec<TheoryNode> },
    Not { child: Box<TheoryNode> },
}

/// One node of an AND/OR/NOT tree.
///
/// `path` is a slash-separated label from the concept root, unique within a
/// theory (`promoter/contact/minus_35/#2`). `head` is set when the node is the
/// expansion of a named clause head.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoryNode {
    pub path: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub head: Option<String>,
    #[serde(flatten)]
    pub kind: NodeKind,
}

impl TheoryNode {
    pub fn children(&self) -> &[TheoryNode] {
        match &self.kind {
            NodeKind::And { children } | NodeKind::Or { children } => children,
            NodeKind::Not { child } => std::slice::from_ref(child.as_ref()),
            NodeKind::Leaf { .. } | NodeKind::True => &[],
        }
    }

    /// True for AND, OR and NOT nodes.
    pub fn is_internal(&self) -> bool {
        !matches!(self.kind, NodeKind::Leaf { .. } | NodeKind::True)
    }

    /// Pre-order traversal.
    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a TheoryNode)) {
        visit(self);
        for child in self.children() {
            child.walk(visit);
        }
    }

    /// Every leaf condition below this node, in pre-order.
    pub fn conditions(&self) -> Vec<&Condition> {
        let mut out = Vec::new();
        self.walk(&mut |n| {
            if let NodeKind::Leaf { condition } = &n.kind {
                out.push(condition);
            }
        });
        out
    }

    pub fn find(&self, name: &str) -> Option<&TheoryNode> {
        let mut found = None;
        self.walk(&mut |n| {
            if found.is_none() && (n.path == name || n.head.as_deref() == Some(name)) {
                found = Some(n);
            }
        });
        found
    }

    fn rebased(&self, old_prefix: &str, new_prefix: &str) -> TheoryNode {
        let path = format!("{new_prefix}{}", &self.path[old_prefix.len()..]);
        let kind = match &self.kind {
            NodeKind::And { children } => NodeKind::And {
                children: children
                    .iter()
                    .map(|c| c.rebased(old_prefix, new_prefix))
                    .collect(),
            },
            NodeKind::Or { children } => NodeKind::Or {
                children: children
                    .iter()
                    .map(|c| c.rebased(old_prefix, new_prefix))
                    .collect(),
            },
            NodeKind::Not { child } => NodeKind::Not {
                child: Box::new(child.rebased(old_prefix, new_prefix)),
            },
            other => other.clone(),
        };
        TheoryNode {
            path,
            head: self.head.clone(),
            kind,
        }
    }

    fn fmt_indented(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        let pad = "  ".repeat(depth);
        match &self.kind {
            NodeKind::Leaf { condition } => writeln!(f, "{pad}{condition}"),
            NodeKind::True => writeln!(f, "{pad}true"),
            NodeKind::And { .. } => writeln!(f, "{pad}AND {}", self.path),
            NodeKind::Or { .. } => writeln!(f, "{pad}OR {}", self.path),
            NodeKind::Not { .. } => writeln!(f, "{pad}NOT {}", self.path),
        }?;
        for child in self.children() {
            child.fmt_indented(f, depth + 1)?;
        }
        Ok(())
    }
}

impl fmt::Display for TheoryNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_indented(f, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Concept {
    pub name: String,
    pub root: TheoryNode,
}

/// A parsed theory: one tree per top-level concept, in source order.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Theory {
    concepts: Vec<Concept>,
    #[serde(skip)]
    source: String,
}

impl PartialEq for Theory {
    fn eq(&self, other: &Self) -> bool {
        self.concepts == other.concepts
    }
}

impl Theory {
    pub fn from_concepts(concepts: Vec<Concept>) -> Self {
        let mut theory = Theory {
            concepts,
            source: String::new(),
        };
        theory.source = theory.to_dsl();
        theory
    }

    pub fn parse(text: &str) -> Result<Theory> {
        parse_theory(text)
    }

    pub fn concepts(&self) -> &[Concept] {
        &self.concepts
    }

    pub fn concept(&self, name: &str) -> Option<&Concept> {
        self.concepts.iter().find(|c| c.name == name)
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    /// AND, OR and NOT nodes across all concepts.
    pub fn internal_node_count(&self) -> usize {
        let mut count = 0;
        for c in &self.concepts {
            c.root.walk(&mut |n| count += usize::from(n.is_internal()));
        }
        count
    }

    /// Reports every condition whose feature or value is absent from `schema`.
    pub fn validate(&self, schema: &Schema) -> ValidationReport {
        let mut findings = Vec::new();
        for concept in &self.concepts {
            concept.root.walk(&mut |n| {
                if let NodeKind::Leaf { condition } = &n.kind {
                    let problem = match schema.feature_index(&condition.feature) {
                        None => Some(Problem::UnknownFeature),
                        Some(i) if schema.features()[i].value_index(&condition.value).is_none() => {
                            Some(Problem::UnknownValue)
                        }
                        Some(_) => None,
                    };
                    if let Some(problem) = problem {
                        findings.push(Finding {
                            path: n.path.clone(),
                            condition: condition.clone(),
                            problem,
                        });
                    }
                }
            });
        }
        ValidationReport { findings }
    }

    /// A single-concept theory rooted at the node named `name`, which may be a
    /// clause head or a full node path. Paths are recomputed from the new root.
    pub fn fragment(&self, name: &str) -> Result<Theory> {
        for concept in &self.concepts {
            if concept.name == name {
                return Ok(Theory::from_concepts(vec![concept.clone()]));
            }
        }
        let node = self
            .concepts
            .iter()
            .find_map(|c| c.root.find(name))
            .ok_or_else(|| Error::UnknownHead(name.to_string()))?;
        let root_name = match &node.head {
            Some(h) if h == name => h.clone(),
            _ => short_name(&node.path),
        };
        let mut root = node.rebased(&node.path, &root_name);
        root.head = Some(root_name.clone());
        Ok(Theory::from_concepts(vec![Concept {
            name: root_name,
            root,
        }]))
    }

    /// Renders the theory back to clause syntax. Parsing the output yields a
    /// structurally identical theory.
    pub fn to_dsl(&self) -> String {
        let mut out = String::new();
        let mut emitted = BTreeSet::new();
        for concept in &self.concepts {
            render_head(&concept.name, &concept.root, &mut emitted, &mut out);
        }
        out
    }
}

/// `minus_35/#2` style paths shortened to `minus_35#2`; other paths to their
/// last segment.
pub(crate) fn short_name(path: &str) -> String {
    let mut segs = path.rsplit('/');
    let last = segs.next().unwrap_or(path);
    if last.starts_with('#') {
        if let Some(prev) = segs.next() {
            return format!("{prev}{last}");
        }
    }
    last.to_string()
}

fn render_head(name: &str, node: &TheoryNode, emitted: &mut BTreeSet<String>, out: &mut String) {
    if !emitted.insert(name.to_string()) {
        return;
    }
    let mut pending = Vec::new();
    let bodies: Vec<&TheoryNode> = match &node.kind {
        NodeKind::Or { children } => children.iter().collect(),
        _ => vec![node],
    };
    for body in bodies {
        let own = std::ptr::eq(body, node);
        let conds: Vec<String> = match &body.kind {
            _ if body.head.is_some() && !own => vec![render_cond(body, &mut pending)],
            NodeKind::And { children } => children
                .iter()
                .map(|c| render_cond(c, &mut pending))
                .collect(),
            _ => vec![render_bare(body, &mut pending)],
        };
        let _ = writeln!(out, "{name} :- {}.", conds.join(", "));
    }
    for (head, sub) in pending {
        render_head(&head, sub, emitted, out);
    }
}

fn render_cond<'a>(node: &'a TheoryNode, pending: &mut Vec<(String, &'a TheoryNode)>) -> String {
    if let Some(head) = &node.head {
        pending.push((head.clone(), node));
        return head.clone();
    }
    render_bare(node, pending)
}

fn render_bare<'a>(node: &'a TheoryNode, pending: &mut Vec<(String, &'a TheoryNode)>) -> String {
    match &node.kind {
        NodeKind::Leaf { condition } => condition.to_string(),
        NodeKind::True => "true".to_string(),
        NodeKind::Not { child } => format!("not({})", render_cond(child, pending)),
        // composites without a head of their own only come from hand-built trees
        NodeKind::And { .. } | NodeKind::Or { .. } => {
            let head = synthetic_head(&node.path);
            pending.push((head.clone(), node));
            head
        }
    }
}

fn synthetic_head(path: &str) -> String {
    path.chars()
        .map(|c| if is_ident_char(c) { c } else { '_' })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Problem {
    UnknownFeature,
    UnknownValue,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Finding {
    pub path: String,
    pub condition: Condition,
    pub problem: Problem,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.problem {
            Problem::UnknownFeature => "feature not in schema",
            Problem::UnknownValue => "value not allowed for feature",
        };
        write!(f, "{}: `{}`: {what}", self.path, self.condition)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_consistent(&self) -> bool {
        self.findings.is_empty()
    }
}

// ---------------------------------------------------------------------------
// Lexing and parsing

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Turnstile,
    Comma,
    Period,
    LParen,
    RParen,
    Eq,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '+' | '#' | '*' | '\'')
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let mut toks = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1;
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                line += 1;
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            '%' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            ':' => {
                chars.next();
                if chars.next_if_eq(&'-').is_none() {
                    return Err(Error::Syntax {
                        line,
                        message: "expected `:-`".into(),
                    });
                }
                toks.push((Tok::Turnstile, line));
            }
            ',' | '.' | '(' | ')' | '=' => {
                chars.next();
                let t = match c {
                    ',' => Tok::Comma,
                    '.' => Tok::Period,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    _ => Tok::Eq,
                };
                toks.push((t, line));
            }
            c if is_ident_char(c) => {
                let mut s = String::new();
                while let Some(c) = chars.next_if(|&c| is_ident_char(c)) {
                    s.push(c);
                }
                toks.push((Tok::Ident(s), line));
            }
            other => {
                return Err(Error::Syntax {
                    line,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(toks)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum RawCond {
    Test(Condition),
    True,
    Head(String),
    Not(Box<RawCond>),
}

impl RawCond {
    fn label(&self) -> String {
        match self {
            RawCond::Test(c) => c.to_string(),
            RawCond::True => "true".into(),
            RawCond::Head(h) => h.clone(),
            RawCond::Not(inner) => format!("not({})", inner.label()),
        }
    }

    fn heads(&self, out: &mut Vec<String>) {
        match self {
            RawCond::Head(h) => out.push(h.clone()),
            RawCond::Not(inner) => inner.heads(out),
            _ => {}
        }
    }
}

#[derive(Debug)]
struct RawClause {
    head: String,
    body: Vec<(RawCond, usize)>,
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn line(&self) -> usize {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map_or(1, |t| t.1)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let line = self.line();
        match self.next() {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(Error::Syntax {
                line,
                message: format!("expected {what}, found {}", describe(&t)),
            }),
            None => Err(Error::Syntax {
                line,
                message: format!("expected {what}, found end of input"),
            }),
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        let line = self.line();
        match self.next() {
            Some(Tok::Ident(s)) => Ok(s),
            Some(t) => Err(Error::Syntax {
                line,
                message: format!("expected {what}, found {}", describe(&t)),
            }),
            None => Err(Error::Syntax {
                line,
                message: format!("expected {what}, found end of input"),
            }),
        }
    }

    fn clause(&mut self) -> Result<RawClause> {
        let head = self.ident("clause head")?;
        if head == "not" || head == "true" {
            return Err(Error::Syntax {
                line: self.line(),
                message: format!("`{head}` is reserved and cannot be a clause head"),
            });
        }
        self.expect(Tok::Turnstile, "`:-`")?;
        let mut body = Vec::new();
        loop {
            let line = self.line();
            let cond = self.cond()?;
            if body.iter().any(|(c, _)| *c == cond) {
                return Err(Error::DuplicateCondition {
                    line,
                    head,
                    condition: cond.label(),
                });
            }
            body.push((cond, line));
            let line = self.line();
            match self.next() {
                Some(Tok::Comma) => continue,
                Some(Tok::Period) => break,
                Some(t) => {
                    return Err(Error::Syntax {
                        line,
                        message: format!("expected `,` or `.`, found {}", describe(&t)),
                    })
                }
                None => {
                    return Err(Error::Syntax {
                        line,
                        message: "clause not terminated by `.`".into(),
                    })
                }
            }
        }
        Ok(RawClause { head, body })
    }

    fn cond(&mut self) -> Result<RawCond> {
        let name = self.ident("condition")?;
        match (name.as_str(), self.peek()) {
            ("not", Some(Tok::LParen)) => {
                self.next();
                let inner = self.cond()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(RawCond::Not(Box::new(inner)))
            }
            (_, Some(Tok::Eq)) => {
                self.next();
                let value = self.ident("condition value")?;
                Ok(RawCond::Test(Condition::new(name, value)))
            }
            ("true", _) => Ok(RawCond::True),
            ("not", _) => Err(Error::Syntax {
                line: self.line(),
                message: "`not` must be followed by `(`".into(),
            }),
            _ => Ok(RawCond::Head(name)),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Turnstile => "`:-`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Period => "`.`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Eq => "`=`".into(),
    }
}

/// Parses theory source into AND/OR/NOT trees, one per top-level concept.
///
/// Top-level concepts are the heads that no clause body references, ordered
/// by first definition.
pub fn parse_theory(text: &str) -> Result<Theory> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(Error::EmptyTheory);
    }
    let mut parser = Parser { toks, pos: 0 };
    let mut clauses = Vec::new();
    while parser.peek().is_some() {
        clauses.push(parser.clause()?);
    }

    let mut order: Vec<String> = Vec::new();
    let mut defs: HashMap<String, Vec<usize>> = HashMap::new();
    for (i, c) in clauses.iter().enumerate() {
        defs.entry(c.head.clone())
            .or_insert_with(|| {
                order.push(c.head.clone());
                Vec::new()
            })
            .push(i);
    }

    let mut referenced = BTreeSet::new();
    for c in &clauses {
        for (cond, line) in &c.body {
            let mut hs = Vec::new();
            cond.heads(&mut hs);
            for h in hs {
                if !defs.contains_key(&h) {
                    return Err(Error::UndefinedHead {
                        line: *line,
                        head: h,
                    });
                }
                referenced.insert(h);
            }
        }
    }

    let ctx = Expander {
        clauses: &clauses,
        defs: &defs,
    };
    // Cycles can hide in components that no root reaches, so check every head.
    for head in &order {
        ctx.check_acyclic(head, &mut Vec::new())?;
    }

    let concepts = order
        .iter()
        .filter(|h| !referenced.contains(*h))
        .map(|h| Concept {
            name: h.clone(),
            root: ctx.expand_head(h, h),
        })
        .collect();
    Ok(Theory {
        concepts,
        source: text.to_string(),
    })
}

struct Expander<'a> {
    clauses: &'a [RawClause],
    defs: &'a HashMap<String, Vec<usize>>,
}

impl Expander<'_> {
    fn check_acyclic(&self, head: &str, stack: &mut Vec<String>) -> Result<()> {
        stack.push(head.to_string());
        for &ci in &self.defs[head] {
            for (cond, line) in &self.clauses[ci].body {
                let mut hs = Vec::new();
                cond.heads(&mut hs);
                for h in hs {
                    if let Some(start) = stack.iter().position(|s| *s == h) {
                        let mut cycle = stack[start..].to_vec();
                        cycle.push(h.clone());
                        return Err(Error::CyclicReference {
                            line: *line,
                            head: h,
                            cycle: cycle.join(" -> "),
                        });
                    }
                    self.check_acyclic(&h, stack)?;
                }
            }
        }
        stack.pop();
        Ok(())
    }

    fn expand_head(&self, head: &str, path: &str) -> TheoryNode {
        let clause_ids = &self.defs[head];
        let mut node = if clause_ids.len() == 1 {
            self.expand_body(&self.clauses[clause_ids[0]].body, path)
        } else {
            let children = clause_ids
                .iter()
                .enumerate()
                .map(|(k, &ci)| {
                    self.expand_body(&self.clauses[ci].body, &format!("{path}/#{}", k + 1))
                })
                .collect();
            TheoryNode {
                path: path.to_string(),
                head: None,
                kind: NodeKind::Or { children },
            }
        };
        node.head = Some(head.to_string());
        node
    }

    fn expand_body(&self, body: &[(RawCond, usize)], path: &str) -> TheoryNode {
        if let [(only, _)] = body {
            return self.expand_cond(only, path);
        }
        let children = body
            .iter()
            .map(|(c, _)| self.expand_cond(c, &format!("{path}/{}", c.label())))
            .collect();
        TheoryNode {
            path: path.to_string(),
            head: None,
            kind: NodeKind::And { children },
        }
    }

    fn expand_cond(&self, cond: &RawCond, path: &str) -> TheoryNode {
        let kind = match cond {
            RawCond::Head(h) => return self.expand_head(h, path),
            RawCond::Test(c) => NodeKind::Leaf {
                condition: c.clone(),
            },
            RawCond::True => NodeKind::True,
            RawCond::Not(inner) => NodeKind::Not {
                child: Box::new(self.expand_cond(inner, &format!("{path}/{}", inner.label()))),
            },
        };
        TheoryNode {
            path: path.to_string(),
            head: None,
            kind,
        }
    }
}
