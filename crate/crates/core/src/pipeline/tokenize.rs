use serde::{Deserialize, Serialize};

/// Half-open byte range `[start, end)` into the source text. Both ends fall on
/// character boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn slice<'t>(&self, text: &'t str) -> &'t str {
        &text[self.start..self.end]
    }

    pub(crate) fn shift(self, offset: usize) -> Self {
        Span::new(self.start + offset, self.end + offset)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    /// Case-folded form used for counting and lookup.
    pub text: String,
    pub span: Span,
}

fn is_token_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '\'' | '\u{2019}' | '-')
}

/// Splits text into lower-cased tokens.
///
/// A token is a maximal run of letters, digits, apostrophes and hyphens that
/// holds at least one letter or digit. Runs made only of punctuation are
/// skipped.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut start: Option<usize> = None;
    let mut has_alnum = false;

    let flush = |start: usize, end: usize, has_alnum: bool, tokens: &mut Vec<Token>| {
        if has_alnum {
            tokens.push(Token {
                text: text[start..end].to_lowercase(),
                span: Span::new(start, end),
            });
        }
    };

    for (i, c) in text.char_indices() {
        if is_token_char(c) {
            if start.is_none() {
                start = Some(i);
                has_alnum = false;
            }
            has_alnum |= c.is_alphanumeric();
        } else if let Some(s) = start.take() {
            flush(s, i, has_alnum, &mut tokens);
        }
    }
    if let Some(s) = start {
        flush(s, text.len(), has_alnum, &mut tokens);
    }
    tokens
}
