//! Segmentation, annotation and classification of raw text.

mod blocks;
mod classify;
mod summary;
mod tokenize;

pub use blocks::{split_blocks, BlockNode, Level};
pub use classify::{Classification, Classifier, ExplainedNode, Explanation};
pub use summary::{OperatorRegistry, SummaryOperator, SummaryOperators};
pub use tokenize::{tokenize, Span, Token};
