//! Line-oriented text format for categories, ideals and covers.
//!
//! ```text
//! # comment
//! category Arrow
//! objects A B
//! mor f : A -> B
//! end
//! ideal nulls on Arrow = { f }
//! cover base on Arrow = { A }
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::fincat::{
    validate_category, FinCategory, FullSubcategory, ObjId, RawCategory, RawComposite, RawMorphism,
    ValidationErrors,
};
use crate::ideals::{Ideal, IdealError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("SyntaxError at line {line}, column {column}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealBlock {
    pub name: String,
    /// A category name, or the name of a cover on one.
    pub on: String,
    pub members: Vec<String>,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverBlock {
    pub name: String,
    pub on: String,
    pub objects: Vec<String>,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Block {
    /// Consecutive top-level comment lines, without the leading `#`.
    Comment(Vec<String>),
    Category(RawCategory),
    Ideal(IdealBlock),
    Cover(CoverBlock),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusFile {
    pub blocks: Vec<Block>,
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A declared name, or an identity reference `1_<obj>`.
fn is_reference(s: &str) -> bool {
    is_name(s) || s.strip_prefix("1_").is_some_and(is_name)
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(s, t)| (line[..s].chars().count() + 1, t))
        .collect()
}

struct LineCursor<'a> {
    line: usize,
    end_column: usize,
    toks: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> LineCursor<'a> {
    fn new(line: usize, text: &'a str) -> Self {
        LineCursor {
            line,
            end_column: text.chars().count() + 1,
            toks: tokens(text),
            pos: 0,
        }
    }

    fn err<T>(&self, column: usize, message: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError {
            line: self.line,
            column,
            message: message.into(),
        })
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_column, |t| t.0)
    }

    fn next(&mut self, what: &str) -> Result<&'a str, SyntaxError> {
        match self.toks.get(self.pos) {
            Some(&(_, t)) => {
                self.pos += 1;
                Ok(t)
            }
            None => self.err(self.end_column, format!("expected {what}")),
        }
    }

    fn name(&mut self, what: &str) -> Result<String, SyntaxError> {
        let col = self.column();
        let t = self.next(what)?;
        if is_name(t) {
            Ok(t.to_string())
        } else {
            self.err(col, format!("invalid {what} `{t}`"))
        }
    }

    fn reference(&mut self, what: &str) -> Result<String, SyntaxError> {
        let col = self.column();
        let t = self.next(what)?;
        if is_reference(t) {
            Ok(t.to_string())
        } else {
            self.err(col, format!("invalid {what} `{t}`"))
        }
    }

    fn expect(&mut self, lit: &str) -> Result<(), SyntaxError> {
        let col = self.column();
        let t = self.next(&format!("`{lit}`"))?;
        if t == lit {
            Ok(())
        } else {
            self.err(col, format!("expected `{lit}`, found `{t}`"))
        }
    }

    fn finish(&self) -> Result<(), SyntaxError> {
        match self.toks.get(self.pos) {
            None => Ok(()),
            Some(&(c, t)) => self.err(c, format!("unexpected `{t}`")),
        }
    }

    /// `{ a, b, c }`; commas may touch the names.
    fn braced_list(&mut self, what: &str) -> Result<Vec<String>, SyntaxError> {
        let col = self.column();
        let rest: Vec<(usize, &str)> = self.toks[self.pos..].to_vec();
        self.pos = self.toks.len();
        let mut pieces: Vec<(usize, String)> = Vec::new();
        for (c, t) in rest {
            let mut offset = 0;
            for part in t.split_inclusive(['{', '}', ',']) {
                let (body, delim) = match part.char_indices().last() {
                    Some((i, ch)) if matches!(ch, '{' | '}' | ',') => (&part[..i], Some(ch)),
                    _ => (part, None),
                };
                if !body.is_empty() {
                    pieces.push((c + offset, body.to_string()));
                }
                if let Some(d) = delim {
                    pieces.push((c + offset + body.chars().count(), d.to_string()));
                }
                offset += part.chars().count();
            }
        }
        let mut it = pieces.into_iter().peekable();
        match it.next() {
            Some((_, t)) if t == "{" => {}
            Some((c, t)) => return self.err(c, format!("expected `{{`, found `{t}`")),
            None => return self.err(col, "expected `{`"),
        }
        let mut out = Vec::new();
        let mut expect_item = true;
        loop {
            match it.next() {
                Some((_, t)) if t == "}" => break,
                Some((c, t)) if t == "," => {
                    if expect_item {
                        return self.err(c, format!("expected {what}"));
                    }
                    expect_item = true;
                }
                Some((c, t)) => {
                    if !expect_item {
                        return self.err(c, "expected `,` or `}`");
                    }
                    if !is_reference(&t) {
                        return self.err(c, format!("invalid {what} `{t}`"));
                    }
                    out.push(t);
                    expect_item = false;
                }
                None => return self.err(self.end_column, "expected `}`"),
            }
        }
        if expect_item && !out.is_empty() {
            return self.err(self.end_column, format!("trailing `,` in {what} list"));
        }
        if let Some((c, t)) = it.next() {
            return self.err(c, format!("unexpected `{t}`"));
        }
        Ok(out)
    }
}

/// `ideal N on C = { ... }` and `cover P on C = { ... }` share a shape.
fn parse_set_block(
    cur: &mut LineCursor,
    what: &str,
) -> Result<(String, String, Vec<String>), SyntaxError> {
    let name = cur.name(&format!("{what} name"))?;
    cur.expect("on")?;
    let on = cur.name("category name")?;
    cur.expect("=")?;
    let members = cur.braced_list(if what == "ideal" {
        "morphism"
    } else {
        "object"
    })?;
    Ok((name, on, members))
}

pub fn parse(text: &str) -> Result<CorpusFile, SyntaxError> {
    let mut blocks: Vec<Block> = Vec::new();
    let mut open: Option<RawCategory> = None;
    let mut pending_comment: Vec<String> = Vec::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = raw_line.trim();
        if let Some(comment) = trimmed.strip_prefix('#') {
            if open.is_none() {
                pending_comment.push(comment.strip_prefix(' ').unwrap_or(comment).to_string());
            }
            continue;
        }
        let content = raw_line.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            if !pending_comment.is_empty() {
                blocks.push(Block::Comment(std::mem::take(&mut pending_comment)));
            }
            continue;
        }
        if !pending_comment.is_empty() {
            blocks.push(Block::Comment(std::mem::take(&mut pending_comment)));
        }
        let mut cur = LineCursor::new(line_no, content);
        let keyword_col = cur.column();
        let keyword = cur.next("keyword")?;
        match (&mut open, keyword) {
            (None, "category") => {
                let mut raw = RawCategory::new(cur.name("category name")?);
                raw.line = line_no;
                cur.finish()?;
                open = Some(raw);
            }
            (None, "ideal") => {
                let (name, on, members) = parse_set_block(&mut cur, "ideal")?;
                blocks.push(Block::Ideal(IdealBlock {
                    name,
                    on,
                    members,
                    line: line_no,
                }));
            }
            (None, "cover") => {
                let (name, on, objects) = parse_set_block(&mut cur, "cover")?;
                blocks.push(Block::Cover(CoverBlock {
                    name,
                    on,
                    objects,
                    line: line_no,
                }));
            }
            (None, other) => {
                return cur.err(
                    keyword_col,
                    format!("expected `category`, `ideal` or `cover`, found `{other}`"),
                )
            }
            (Some(raw), "objects") => {
                while cur.pos < cur.toks.len() {
                    raw.objects.push(cur.name("object name")?);
                }
            }
            (Some(raw), "mor") => {
                let name = cur.name("morphism name")?;
                cur.expect(":")?;
                let dom = cur.name("object name")?;
                cur.expect("->")?;
                let cod = cur.name("object name")?;
                cur.finish()?;
                raw.morphisms.push(RawMorphism {
                    name,
                    dom,
                    cod,
                    line: line_no,
                });
            }
            (Some(raw), "comp") => {
                let g = cur.reference("morphism name")?;
                let f = cur.reference("morphism name")?;
                cur.expect("=")?;
                let h = cur.reference("morphism name")?;
                cur.finish()?;
                raw.composites.push(RawComposite {
                    g,
                    f,
                    h,
                    line: line_no,
                });
            }
            (Some(_), "end") => {
                cur.finish()?;
                blocks.push(Block::Category(open.take().expect("open block")));
            }
            (Some(_), other) => {
                return cur.err(
                    keyword_col,
                    format!("expected `objects`, `mor`, `comp` or `end`, found `{other}`"),
                )
            }
        }
    }
    if let Some(raw) = open {
        return Err(SyntaxError {
            line: raw.line,
            column: 1,
            message: format!("category {} is missing `end`", raw.name),
        });
    }
    if !pending_comment.is_empty() {
        blocks.push(Block::Comment(pending_comment));
    }
    Ok(CorpusFile { blocks })
}

fn sorted(items: &[String]) -> Vec<&str> {
    let mut v: Vec<&str> = items.iter().map(String::as_str).collect();
    v.sort_unstable();
    v
}

fn write_category(out: &mut String, raw: &RawCategory) {
    let _ = writeln!(out, "category {}", raw.name);
    let objects = sorted(&raw.objects);
    if objects.is_empty() {
        out.push_str("objects\n");
    } else {
        let _ = writeln!(out, "objects {}", objects.join(" "));
    }
    let mut mors: Vec<&RawMorphism> = raw.morphisms.iter().collect();
    mors.sort_by(|a, b| a.name.cmp(&b.name));
    for m in mors {
        let _ = writeln!(out, "mor {} : {} -> {}", m.name, m.dom, m.cod);
    }
    let mut comps: Vec<&RawComposite> = raw.composites.iter().collect();
    comps.sort_by(|a, b| (&a.g, &a.f, &a.h).cmp(&(&b.g, &b.f, &b.h)));
    for c in comps {
        let _ = writeln!(out, "comp {} {} = {}", c.g, c.f, c.h);
    }
    out.push_str("end\n");
}

fn write_set(out: &mut String, keyword: &str, name: &str, on: &str, items: &[String]) {
    let items = sorted(items);
    if items.is_empty() {
        let _ = writeln!(out, "{keyword} {name} on {on} = {{ }}");
    } else {
        let _ = writeln!(out, "{keyword} {name} on {on} = {{ {} }}", items.join(", "));
    }
}

/// Canonical text: sorted contents, a blank line before every comment block
/// and before every category block that does not follow a comment.
pub fn serialize(file: &CorpusFile) -> String {
    let mut out = String::new();
    let mut after_comment = false;
    for block in &file.blocks {
        let separates = match block {
            Block::Comment(_) => true,
            Block::Category(_) => !after_comment,
            _ => false,
        };
        if separates && !out.is_empty() {
            out.push('\n');
        }
        after_comment = false;
        match block {
            Block::Comment(lines) => {
                for l in lines {
                    if l.is_empty() {
                        out.push_str("#\n");
                    } else {
                        let _ = writeln!(out, "# {l}");
                    }
                }
                after_comment = true;
            }
            Block::Category(raw) => write_category(&mut out, raw),
            Block::Ideal(b) => write_set(&mut out, "ideal", &b.name, &b.on, &b.members),
            Block::Cover(b) => write_set(&mut out, "cover", &b.name, &b.on, &b.objects),
        }
    }
    out
}

impl CorpusFile {
    pub fn push_comment(&mut self, lines: impl IntoIterator<Item = impl Into<String>>) {
        self.blocks
            .push(Block::Comment(lines.into_iter().map(Into::into).collect()));
    }

    pub fn push_category(&mut self, cat: &FinCategory) {
        self.blocks.push(Block::Category(cat.to_raw()));
    }

    pub fn push_ideal(&mut self, name: &str, cat: &FinCategory, ideal: &Ideal) {
        self.push_ideal_on(name, cat.name(), cat, ideal);
    }

    /// An ideal of `cat` declared on `on`, typically a cover whose category
    /// is `cat`.
    pub fn push_ideal_on(&mut self, name: &str, on: &str, cat: &FinCategory, ideal: &Ideal) {
        self.blocks.push(Block::Ideal(IdealBlock {
            name: name.to_string(),
            on: on.to_string(),
            members: ideal.names(cat),
            line: 0,
        }));
    }

    pub fn push_cover(&mut self, name: &str, cat: &FinCategory, objects: &[ObjId]) {
        self.blocks.push(Block::Cover(CoverBlock {
            name: name.to_string(),
            on: cat.name().to_string(),
            objects: objects
                .iter()
                .map(|&x| cat.object_name(x).to_string())
                .collect(),
            line: 0,
        }));
    }

    pub fn categories(&self) -> impl Iterator<Item = &RawCategory> {
        self.blocks.iter().filter_map(|b| match b {
            Block::Category(c) => Some(c),
            _ => None,
        })
    }
}

impl std::fmt::Display for CorpusFile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&serialize(self))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("{0}")]
    Validation(ValidationErrors),
    #[error("line {line}: DuplicateName `{name}`")]
    Duplicate { name: String, line: usize },
    #[error("line {line}: UnknownName `{name}`")]
    UnknownName { name: String, line: usize },
    #[error("line {line}: ideal `{name}`: {source}")]
    Ideal {
        name: String,
        line: usize,
        source: IdealError,
    },
}

impl CorpusError {
    pub fn line(&self) -> Option<usize> {
        match self {
            CorpusError::Syntax(e) => Some(e.line),
            CorpusError::Validation(v) => v.errors.first().and_then(|e| match e {
                crate::fincat::CategoryError::DuplicateName { line, .. }
                | crate::fincat::CategoryError::UnknownName { line, .. }
                | crate::fincat::CategoryError::BadTyping { line, .. }
                | crate::fincat::CategoryError::RedundantIdentityRow { line, .. }
                | crate::fincat::CategoryError::ConflictingComposite { line, .. } => Some(*line),
                _ => None,
            }),
            CorpusError::Duplicate { line, .. }
            | CorpusError::UnknownName { line, .. }
            | CorpusError::Ideal { line, .. } => Some(*line),
        }
    }
}

/// A cover resolved against its category.
#[derive(Debug, Clone)]
pub struct NamedCover {
    pub name: String,
    pub category: String,
    pub objects: Vec<ObjId>,
    pub sub: FullSubcategory,
}

/// An ideal resolved against a category, or against a cover of one.
#[derive(Debug, Clone)]
pub struct NamedIdeal {
    pub name: String,
    pub category: String,
    pub cover: Option<String>,
    pub ideal: Ideal,
}

/// A parsed file whose categories validate and whose ideals and covers
/// resolve.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub categories: Vec<FinCategory>,
    pub ideals: Vec<NamedIdeal>,
    pub covers: Vec<NamedCover>,
}

impl Corpus {
    pub fn category(&self, name: &str) -> Option<&FinCategory> {
        self.categories.iter().find(|c| c.name() == name)
    }

    /// An ideal declared directly on the category `cat`.
    pub fn ideal(&self, cat: &str, name: &str) -> Option<&Ideal> {
        self.ideals
            .iter()
            .find(|i| i.category == cat && i.cover.is_none() && i.name == name)
            .map(|i| &i.ideal)
    }

    /// An ideal declared on the cover `cover` of `cat`.
    pub fn cover_ideal(&self, cat: &str, cover: &str, name: &str) -> Option<&Ideal> {
        self.ideals
            .iter()
            .find(|i| i.category == cat && i.cover.as_deref() == Some(cover) && i.name == name)
            .map(|i| &i.ideal)
    }

    pub fn cover(&self, cat: &str, name: &str) -> Option<&NamedCover> {
        self.covers
            .iter()
            .find(|c| c.category == cat && c.name == name)
    }
}

fn resolve_ideal(
    cat: &FinCategory,
    block: &IdealBlock,
    category: &str,
    cover: Option<String>,
) -> Result<NamedIdeal, CorpusError> {
    let mut members = Vec::new();
    for m in &block.members {
        members.push(
            cat.find_morphism(m)
                .ok_or_else(|| CorpusError::UnknownName {
                    name: m.clone(),
                    line: block.line,
                })?,
        );
    }
    let ideal = Ideal::new(cat, members).map_err(|source| CorpusError::Ideal {
        name: block.name.clone(),
        line: block.line,
        source,
    })?;
    Ok(NamedIdeal {
        name: block.name.clone(),
        category: category.to_string(),
        cover,
        ideal,
    })
}

/// Validates every category and resolves ideal and cover blocks. Stops at the
/// first error.
pub fn resolve(file: &CorpusFile) -> Result<Corpus, CorpusError> {
    let mut corpus = Corpus::default();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for block in &file.blocks {
        match block {
            Block::Comment(_) => {}
            Block::Category(raw) => {
                if seen.insert(raw.name.clone(), raw.line).is_some() {
                    return Err(CorpusError::Duplicate {
                        name: raw.name.clone(),
                        line: raw.line,
                    });
                }
                corpus
                    .categories
                    .push(validate_category(raw).map_err(CorpusError::Validation)?);
            }
            Block::Cover(b) => {
                let cat = corpus
                    .category(&b.on)
                    .ok_or_else(|| CorpusError::UnknownName {
                        name: b.on.clone(),
                        line: b.line,
                    })?;
                let mut objects = Vec::new();
                for o in &b.objects {
                    objects.push(cat.find_object(o).ok_or_else(|| CorpusError::UnknownName {
                        name: o.clone(),
                        line: b.line,
                    })?);
                }
                if corpus.cover(&b.on, &b.name).is_some() {
                    return Err(CorpusError::Duplicate {
                        name: b.name.clone(),
                        line: b.line,
                    });
                }
                let sub = FullSubcategory::named(cat, &objects, b.name.clone());
                corpus.covers.push(NamedCover {
                    name: b.name.clone(),
                    category: b.on.clone(),
                    objects,
                    sub,
                });
            }
            Block::Ideal(b) => {
                let resolved = if let Some(cat) = corpus.category(&b.on) {
                    resolve_ideal(cat, b, &b.on, None)?
                } else if let Some(c) = corpus.covers.iter().find(|c| c.name == b.on) {
                    resolve_ideal(c.sub.category(), b, &c.category, Some(c.name.clone()))?
                } else {
                    return Err(CorpusError::UnknownName {
                        name: b.on.clone(),
                        line: b.line,
                    });
                };
                let dup = corpus.ideals.iter().any(|i| {
                    i.category == resolved.category && i.cover == resolved.cover && i.name == b.name
                });
                if dup {
                    return Err(CorpusError::Duplicate {
                        name: b.name.clone(),
                        line: b.line,
                    });
                }
                corpus.ideals.push(resolved);
            }
        }
    }
    Ok(corpus)
}

pub fn parse_and_resolve(text: &str) -> Result<Corpus, CorpusError> {
    resolve(&parse(text)?)
}
