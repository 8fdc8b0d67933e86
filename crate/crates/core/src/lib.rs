//! Explainable text classification with the SS3 model.
//!
//! Training only counts words per category, so models can be updated with
//! new documents at any time. Classification splits a document into
//! paragraphs, sentences and words, values each word against every category
//! and sums the values back up the hierarchy; the per-block vectors double as
//! a visual explanation of the decision.
//!
//! ```
//! use ss3::{Hyperparameters, Model};
//!
//! let mut model = Model::new(Hyperparameters::default())?;
//! model.fit([
//!     ("the match ended with a late goal", "sports"),
//!     ("the new chip doubles battery life", "tech"),
//! ]);
//! assert_eq!(model.classify("what a goal")?.label, "sports");
//! # Ok::<(), ss3::Error>(())
//! ```

pub mod confidence;
pub mod dataset;
pub mod error;
pub mod evaluation;
pub mod model;
pub mod pipeline;
pub mod valuation;

pub use confidence::ConfidenceVector;
pub use dataset::{load_from_files, load_model, save_model, LabeledCorpus};
pub use error::{Error, Result};
pub use model::{CategoryModel, Hyperparameters, Model};
pub use pipeline::{
    split_blocks, tokenize, BlockNode, Classification, Classifier, Explanation, Level, SummaryOperator,
    SummaryOperators,
};
pub use valuation::{LocalValue, PowerLaw, Valuator, WordScorer};

// The guide's code listings are compiled and run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/valuation.md")]
    mod valuation {}
    #[doc = include_str!("../../../book/src/classification.md")]
    mod classification {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
    #[doc = include_str!("../../../book/src/persistence.md")]
    mod persistence {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/live-test.md")]
    mod live_test {}
}
