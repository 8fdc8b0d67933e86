use serde::{Deserialize, Serialize};

use super::tokenize::{tokenize, Span};
use crate::confidence::ConfidenceVector;

/// Granularity of a block, from the whole input down to single words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Document,
    Paragraph,
    Sentence,
    Word,
}

impl Level {
    pub const ALL: [Level; 4] = [Level::Document, Level::Paragraph, Level::Sentence, Level::Word];

    pub fn depth(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Level::Document => "document",
            Level::Paragraph => "paragraph",
            Level::Sentence => "sentence",
            Level::Word => "word",
        }
    }
}

impl std::str::FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "document" => Ok(Level::Document),
            "paragraph" => Ok(Level::Paragraph),
            "sentence" => Ok(Level::Sentence),
            "word" => Ok(Level::Word),
            other => Err(format!("unknown level `{other}`")),
        }
    }
}

/// One block of the input hierarchy.
///
/// Trees produced by [`split_blocks`] carry empty confidence vectors; they
/// are filled in by annotation.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockNode {
    pub level: Level,
    pub span: Span,
    pub children: Vec<BlockNode>,
    pub confidence: ConfidenceVector,
    /// Normalized token, set on word nodes only.
    pub token: Option<String>,
}

impl BlockNode {
    fn branch(level: Level, span: Span, children: Vec<BlockNode>) -> Self {
        BlockNode {
            level,
            span,
            children,
            confidence: ConfidenceVector::default(),
            token: None,
        }
    }

    /// Depth-first iterator over every node of the given level.
    pub fn nodes_at(&self, level: Level) -> Vec<&BlockNode> {
        let mut out = Vec::new();
        self.collect_at(level, &mut out);
        out
    }

    fn collect_at<'a>(&'a self, level: Level, out: &mut Vec<&'a BlockNode>) {
        if self.level == level {
            out.push(self);
            return;
        }
        for child in &self.children {
            child.collect_at(level, out);
        }
    }

    pub fn words(&self) -> Vec<&BlockNode> {
        self.nodes_at(Level::Word)
    }
}

fn is_newline(c: char) -> bool {
    c == '\n' || c == '\r'
}

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

/// Trims whitespace off `[start, end)` of `text`; `None` when nothing is left.
fn trimmed(text: &str, start: usize, end: usize) -> Option<Span> {
    let piece = &text[start..end];
    let lead = piece.len() - piece.trim_start().len();
    let body = piece.trim();
    if body.is_empty() {
        None
    } else {
        Some(Span::new(start + lead, start + lead + body.len()))
    }
}

/// Paragraph spans: text between runs of newlines, whitespace-trimmed.
fn paragraphs(text: &str) -> Vec<Span> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut in_break = false;
    for (i, c) in text.char_indices() {
        if is_newline(c) {
            if !in_break {
                out.extend(trimmed(text, start, i));
                in_break = true;
            }
        } else if in_break {
            start = i;
            in_break = false;
        }
    }
    if !in_break {
        out.extend(trimmed(text, start, text.len()));
    }
    out
}

/// Sentence spans inside `within`. A sentence ends after a run of `.`, `!`
/// or `?`; the terminators stay with the sentence they close.
fn sentences(text: &str, within: Span) -> Vec<Span> {
    let piece = within.slice(text);
    let mut out = Vec::new();
    let mut start = 0;
    let mut in_terminator = false;
    for (i, c) in piece.char_indices() {
        if is_terminator(c) {
            in_terminator = true;
        } else if in_terminator {
            out.extend(trimmed(piece, start, i));
            start = i;
            in_terminator = false;
        }
    }
    out.extend(trimmed(piece, start, piece.len()));
    out.into_iter().map(|s| s.shift(within.start)).collect()
}

fn words(text: &str, within: Span) -> Vec<BlockNode> {
    tokenize(within.slice(text))
        .into_iter()
        .map(|t| BlockNode {
            level: Level::Word,
            span: t.span.shift(within.start),
            children: Vec::new(),
            confidence: ConfidenceVector::default(),
            token: Some(t.text),
        })
        .collect()
}

/// Splits text into document → paragraphs → sentences → words.
///
/// Paragraphs are separated by one or more newlines; whitespace-only
/// paragraphs and sentences are dropped. A sentence of punctuation only is
/// kept with no word children.
pub fn split_blocks(text: &str) -> BlockNode {
    let paragraphs = paragraphs(text)
        .into_iter()
        .map(|p| {
            let sentences = sentences(text, p)
                .into_iter()
                .map(|s| BlockNode::branch(Level::Sentence, s, words(text, s)))
                .collect();
            BlockNode::branch(Level::Paragraph, p, sentences)
        })
        .collect();
    BlockNode::branch(Level::Document, Span::new(0, text.len()), paragraphs)
}
