//! Newick-style text format for tree shapes.
//!
//! ```text
//! tree    := subtree ";"
//! subtree := "(" subtree ("," subtree)* ")" label? | label?
//! label   := [A-Za-z0-9_]+
//! ```
//!
//! Whitespace is ignored. Branch lengths, comments and quoted labels are not
//! supported. Vertices are numbered in preorder, so the leaf order of the
//! parsed tree is the left-to-right order of the text.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::tree::{RootedTree, Shape, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NewickError {
    #[error("empty input")]
    EmptyInput,
    #[error("syntax error at byte {position}: {message}")]
    SyntaxError { position: usize, message: String },
    #[error("trailing input at byte {0}")]
    TrailingGarbage(usize),
}

/// A parsed tree together with the source text and any leaf labels.
#[derive(Debug, Clone)]
pub struct NewickDocument {
    pub text: String,
    pub tree: RootedTree,
    /// Labels of labelled leaves, keyed by vertex.
    pub labels: BTreeMap<Vertex, String>,
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    // label of each leaf, in textual order
    labels: Vec<Option<String>>,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn error(&self, message: impl Into<String>) -> NewickError {
        NewickError::SyntaxError { position: self.pos, message: message.into() }
    }

    fn label(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned())
    }

    fn subtree(&mut self) -> Result<Shape, NewickError> {
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let mut kids = vec![self.subtree()?];
            loop {
                match self.peek() {
                    Some(b',') => {
                        self.pos += 1;
                        kids.push(self.subtree()?);
                    }
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    Some(_) => return Err(self.error("expected ',' or ')'")),
                    None => return Err(self.error("unbalanced '('")),
                }
            }
            // internal labels are accepted and dropped
            let _ = self.label();
            Ok(Shape::node(kids))
        } else {
            let label = self.label();
            self.labels.push(label);
            Ok(Shape::leaf())
        }
    }
}

/// Parses a single tree, keeping leaf labels.
pub fn parse_document(text: &str) -> Result<NewickDocument, NewickError> {
    if text.trim().is_empty() {
        return Err(NewickError::EmptyInput);
    }
    let mut p = Parser { bytes: text.as_bytes(), pos: 0, labels: Vec::new() };
    let shape = p.subtree()?;
    match p.peek() {
        Some(b';') => p.pos += 1,
        Some(b')') => return Err(p.error("unbalanced ')'")),
        Some(_) => return Err(p.error("expected ';'")),
        None => return Err(p.error("missing ';'")),
    }
    if p.peek().is_some() {
        return Err(NewickError::TrailingGarbage(p.pos));
    }
    let tree = RootedTree::from_shape(&shape);
    let labels = tree
        .leaves()
        .iter()
        .zip(p.labels)
        .filter_map(|(&v, l)| l.map(|l| (v, l)))
        .collect();
    Ok(NewickDocument { text: text.to_string(), tree, labels })
}

pub fn parse_newick(text: &str) -> Result<RootedTree, NewickError> {
    parse_document(text).map(|d| d.tree)
}

/// Canonical text: stored child order, no whitespace, unlabelled leaves.
pub fn serialize_newick(tree: &RootedTree) -> String {
    serialize_with_labels(tree, &BTreeMap::new())
}

pub fn serialize_with_labels(tree: &RootedTree, labels: &BTreeMap<Vertex, String>) -> String {
    fn walk(t: &RootedTree, v: Vertex, labels: &BTreeMap<Vertex, String>, out: &mut String) {
        let kids = t.children(v);
        if kids.is_empty() {
            if let Some(l) = labels.get(&v) {
                out.push_str(l);
            }
            return;
        }
        out.push('(');
        for (i, &c) in kids.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            walk(t, c, labels, out);
        }
        out.push(')');
    }
    let mut out = String::new();
    walk(tree, tree.root(), labels, &mut out);
    out.push(';');
    out
}
