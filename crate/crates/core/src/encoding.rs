//! Line-oriented preorder encoding of tree databases and mined patterns.
//!
//! A dataset line is `<tid> <tid> <n> <tok_1> ... <tok_n>` where every token
//! is a nonnegative label or `-1`, which moves back to the parent. A pattern
//! string is the same token stream without the header, with trailing `-1`s
//! elided.

use std::collections::HashMap;
use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use thiserror::Error;

use crate::tree::{DatabaseTree, Label, Pattern, TreeError, VertexId};

const UP: &str = "-1";

#[derive(Debug, Error)]
pub enum ParseErrorKind {
    #[error("bad token {0:?}")]
    BadToken(String),
    #[error("unbalanced backtrack")]
    UnbalancedBacktrack,
    #[error("duplicate tid {0}")]
    DuplicateTid(u32),
    #[error("header declares {declared} tokens but line has {found}")]
    CountMismatch { declared: usize, found: usize },
    #[error("tid fields differ ({0} vs {1})")]
    TidMismatch(u32, u32),
    #[error("missing header field")]
    MissingHeader,
    #[error("no vertices")]
    EmptyTree,
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn at(line: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, kind }
    }
}

/// Bijection between external label strings and label ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelDictionary {
    names: Vec<String>,
    ids: HashMap<String, Label>,
}

impl LabelDictionary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id of `name`, assigning the next free id on first sight.
    pub fn intern(&mut self, name: &str) -> Label {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = self.names.len() as Label;
        self.names.push(name.to_owned());
        self.ids.insert(name.to_owned(), id);
        id
    }

    pub fn id(&self, name: &str) -> Option<Label> {
        self.ids.get(name).copied()
    }

    pub fn name(&self, id: Label) -> Option<&str> {
        self.names.get(id as usize).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Reads `<id>\t<name>` lines; ids must be dense and in order.
    pub fn read<R: BufRead>(reader: R) -> Result<Self, ParseError> {
        let mut dict = LabelDictionary::new();
        for (i, line) in reader.lines().enumerate() {
            let lineno = i + 1;
            let line = line.map_err(|e| ParseError::at(lineno, e.into()))?;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            let (id, name) = line
                .split_once('\t')
                .ok_or_else(|| ParseError::at(lineno, ParseErrorKind::MissingHeader))?;
            let id: Label = id
                .trim()
                .parse()
                .map_err(|_| ParseError::at(lineno, ParseErrorKind::BadToken(id.into())))?;
            if id as usize != dict.len() || dict.id(name).is_some() {
                return Err(ParseError::at(lineno, ParseErrorKind::BadToken(line.into())));
            }
            dict.intern(name);
        }
        Ok(dict)
    }

    pub fn write<W: Write>(&self, mut w: W) -> io::Result<()> {
        for (id, name) in self.names.iter().enumerate() {
            writeln!(w, "{id}\t{name}")?;
        }
        Ok(())
    }
}

/// A collection of database trees, sorted by tid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dataset {
    trees: Vec<DatabaseTree>,
    dictionary: Option<LabelDictionary>,
}

impl Dataset {
    /// Sorts `trees` by tid and rejects duplicates.
    pub fn new(mut trees: Vec<DatabaseTree>) -> Result<Self, ParseErrorKind> {
        trees.sort_by_key(DatabaseTree::tid);
        if let Some(w) = trees.windows(2).find(|w| w[0].tid() == w[1].tid()) {
            return Err(ParseErrorKind::DuplicateTid(w[0].tid()));
        }
        Ok(Dataset {
            trees,
            dictionary: None,
        })
    }

    pub fn with_dictionary(mut self, dictionary: LabelDictionary) -> Self {
        self.dictionary = Some(dictionary);
        self
    }

    pub fn trees(&self) -> &[DatabaseTree] {
        &self.trees
    }

    pub fn dictionary(&self) -> Option<&LabelDictionary> {
        self.dictionary.as_ref()
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.trees.iter().map(DatabaseTree::len).sum()
    }

    pub fn tree_by_tid(&self, tid: u32) -> Option<&DatabaseTree> {
        self.trees
            .binary_search_by_key(&tid, DatabaseTree::tid)
            .ok()
            .map(|i| &self.trees[i])
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    /// Accept lines whose two leading ids differ; the first is used as tid.
    pub allow_distinct_ids: bool,
}

/// Turns a preorder token stream into labels and parent links.
fn tokens_to_tree(
    tokens: &[Token],
) -> Result<(Vec<Label>, Vec<Option<VertexId>>), ParseErrorKind> {
    let mut labels = Vec::new();
    let mut parents = Vec::new();
    let mut open: Vec<VertexId> = Vec::new();
    for tok in tokens {
        match *tok {
            Token::Label(l) => {
                if labels.is_empty() {
                    labels.push(l);
                    parents.push(None);
                } else {
                    // a second root would have no open vertex to attach to
                    let p = *open.last().ok_or(ParseErrorKind::UnbalancedBacktrack)?;
                    labels.push(l);
                    parents.push(Some(p));
                }
                open.push(labels.len() as VertexId - 1);
            }
            Token::Up => {
                // the root itself may not be closed
                if open.len() < 2 {
                    return Err(ParseErrorKind::UnbalancedBacktrack);
                }
                open.pop();
            }
        }
    }
    if labels.is_empty() {
        return Err(ParseErrorKind::EmptyTree);
    }
    Ok((labels, parents))
}

fn parse_line(line: &str, opts: ParseOptions) -> Result<Option<DatabaseTree>, ParseErrorKind> {
    let mut fields = line.split_whitespace();
    let Some(first) = fields.next() else {
        return Ok(None);
    };
    let num = |s: &str| -> Result<u32, ParseErrorKind> {
        s.parse().map_err(|_| ParseErrorKind::BadToken(s.into()))
    };
    let tid = num(first)?;
    let other = num(fields.next().ok_or(ParseErrorKind::MissingHeader)?)?;
    if tid != other && !opts.allow_distinct_ids {
        return Err(ParseErrorKind::TidMismatch(tid, other));
    }
    let declared = num(fields.next().ok_or(ParseErrorKind::MissingHeader)?)? as usize;
    let tokens = fields.map(Token::from_str).collect::<Result<Vec<_>, _>>()?;
    if tokens.len() != declared {
        return Err(ParseErrorKind::CountMismatch {
            declared,
            found: tokens.len(),
        });
    }
    if matches!(tokens.first(), Some(Token::Up)) {
        return Err(ParseErrorKind::UnbalancedBacktrack);
    }
    let (labels, parents) = tokens_to_tree(&tokens)?;
    Ok(Some(DatabaseTree::build(tid, labels, parents)?))
}

/// Parses a dataset, one tree per nonblank line.
pub fn parse_dataset<R: BufRead>(reader: R, opts: ParseOptions) -> Result<Dataset, ParseError> {
    let mut trees = Vec::new();
    let mut seen = HashMap::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| ParseError::at(lineno, e.into()))?;
        if let Some(tree) = parse_line(&line, opts).map_err(|k| ParseError::at(lineno, k))? {
            if seen.insert(tree.tid(), lineno).is_some() {
                return Err(ParseError::at(lineno, ParseErrorKind::DuplicateTid(tree.tid())));
            }
            trees.push(tree);
        }
    }
    Dataset::new(trees).map_err(|k| ParseError::at(0, k))
}

pub fn parse_dataset_str(text: &str) -> Result<Dataset, ParseError> {
    parse_dataset(text.as_bytes(), ParseOptions::default())
}

/// Preorder tokens of a tree, closing every non-root vertex.
fn tree_tokens(labels: &[Label], parents: &[Option<VertexId>]) -> Vec<Token> {
    let mut out = Vec::with_capacity(labels.len() * 2);
    let mut open: Vec<VertexId> = Vec::new();
    for (v, (&label, &parent)) in labels.iter().zip(parents).enumerate() {
        if let Some(p) = parent {
            while *open.last().expect("preorder tree") != p {
                open.pop();
                out.push(Token::Up);
            }
        }
        out.push(Token::Label(label));
        open.push(v as VertexId);
    }
    for _ in 1..open.len() {
        out.push(Token::Up);
    }
    out
}

pub fn write_dataset<W: Write>(d: &Dataset, mut w: W) -> io::Result<()> {
    for t in d.trees() {
        let toks = tree_tokens(t.labels(), t.parents());
        write!(w, "{} {} {}", t.tid(), t.tid(), toks.len())?;
        for tok in &toks {
            write!(w, " {tok}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}

pub fn write_dataset_string(d: &Dataset) -> String {
    let mut buf = Vec::new();
    write_dataset(d, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Token {
    Label(Label),
    Up,
}

impl FromStr for Token {
    type Err = ParseErrorKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == UP {
            return Ok(Token::Up);
        }
        s.parse()
            .map(Token::Label)
            .map_err(|_| ParseErrorKind::BadToken(s.into()))
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Label(l) => write!(f, "{l}"),
            Token::Up => f.write_str(UP),
        }
    }
}

/// Canonical string form of a pattern: preorder labels with `-1` backtracks,
/// trailing backtracks elided.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PatternString(Vec<Token>);

impl PatternString {
    pub fn tokens(&self) -> &[Token] {
        &self.0
    }

    /// Renders labels through `dict`, falling back to the numeric id.
    pub fn display_with<'a>(&'a self, dict: &'a LabelDictionary) -> impl fmt::Display + 'a {
        struct Named<'a>(&'a PatternString, &'a LabelDictionary);
        impl fmt::Display for Named<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                for (i, tok) in self.0 .0.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    match tok {
                        Token::Label(l) => match self.1.name(*l) {
                            Some(name) => f.write_str(name)?,
                            None => write!(f, "{l}")?,
                        },
                        Token::Up => f.write_str(UP)?,
                    }
                }
                Ok(())
            }
        }
        Named(self, dict)
    }

    /// Parses named tokens (`a b -1 c`) through `dict`.
    pub fn parse_with(s: &str, dict: &LabelDictionary) -> Result<Self, ParseErrorKind> {
        s.split_whitespace()
            .map(|t| {
                if t == UP {
                    Ok(Token::Up)
                } else {
                    dict.id(t)
                        .map(Token::Label)
                        .ok_or_else(|| ParseErrorKind::BadToken(t.into()))
                }
            })
            .collect::<Result<Vec<_>, _>>()
            .map(PatternString)
    }
}

impl From<Vec<Token>> for PatternString {
    fn from(tokens: Vec<Token>) -> Self {
        PatternString(tokens)
    }
}

impl fmt::Display for PatternString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, tok) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{tok}")?;
        }
        Ok(())
    }
}

impl FromStr for PatternString {
    type Err = ParseErrorKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split_whitespace()
            .map(Token::from_str)
            .collect::<Result<Vec<_>, _>>()
            .map(PatternString)
    }
}

pub fn encode_pattern(p: &Pattern) -> PatternString {
    let mut toks = tree_tokens(p.labels(), p.parents());
    while toks.last() == Some(&Token::Up) {
        toks.pop();
    }
    PatternString(toks)
}

pub fn decode_pattern(s: &PatternString) -> Result<Pattern, ParseErrorKind> {
    if matches!(s.0.first(), Some(Token::Up)) {
        return Err(ParseErrorKind::UnbalancedBacktrack);
    }
    let (labels, parents) = tokens_to_tree(&s.0)?;
    Ok(Pattern::from_parents(labels, parents)?)
}
