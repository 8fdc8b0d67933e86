use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::confidence::ConfidenceVector;

type ReduceFn = dyn Fn(&[ConfidenceVector]) -> ConfidenceVector + Send + Sync;

/// Reduces the confidence vectors of a block's children to the block's own
/// vector.
#[derive(Clone)]
pub struct SummaryOperator {
    name: Arc<str>,
    reduce: Arc<ReduceFn>,
}

impl SummaryOperator {
    pub const ADDITION: &'static str = "add";
    pub const MAXIMUM: &'static str = "max";

    /// Componentwise sum. The default at every level.
    pub fn addition() -> Self {
        SummaryOperator::custom(Self::ADDITION, |children| {
            let mut acc = ConfidenceVector::zeros(children[0].len());
            for child in children {
                acc.add_assign(child);
            }
            acc
        })
    }

    /// Componentwise maximum.
    pub fn maximum() -> Self {
        SummaryOperator::custom(Self::MAXIMUM, |children| {
            let mut acc = ConfidenceVector::zeros(children[0].len());
            for child in children {
                acc.max_assign(child);
            }
            acc
        })
    }

    /// Wraps a user reduction. `reduce` is only called with a non-empty slice
    /// and must return a vector of the same length as its inputs.
    pub fn custom<F>(name: impl Into<Arc<str>>, reduce: F) -> Self
    where
        F: Fn(&[ConfidenceVector]) -> ConfidenceVector + Send + Sync + 'static,
    {
        SummaryOperator {
            name: name.into(),
            reduce: Arc::new(reduce),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Applies the operator. An empty `children` gives the zero vector of
    /// length `dimension`.
    pub fn reduce(&self, children: &[ConfidenceVector], dimension: usize) -> ConfidenceVector {
        if children.is_empty() {
            return ConfidenceVector::zeros(dimension);
        }
        let out = (self.reduce)(children);
        assert_eq!(
            out.len(),
            dimension,
            "summary operator `{}` changed the vector length",
            self.name
        );
        out
    }
}

impl fmt::Debug for SummaryOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("SummaryOperator").field(&self.name).finish()
    }
}

/// The operator used to build each non-word level from its children.
#[derive(Debug, Clone)]
pub struct SummaryOperators {
    /// Words → sentence.
    pub sentence: SummaryOperator,
    /// Sentences → paragraph.
    pub paragraph: SummaryOperator,
    /// Paragraphs → document.
    pub document: SummaryOperator,
}

impl SummaryOperators {
    pub fn uniform(op: SummaryOperator) -> Self {
        SummaryOperators {
            sentence: op.clone(),
            paragraph: op.clone(),
            document: op,
        }
    }
}

impl Default for SummaryOperators {
    fn default() -> Self {
        SummaryOperators::uniform(SummaryOperator::addition())
    }
}

/// Named operators, so callers (CLI flags, configuration) can pick them by
/// name. Starts out with `add` and `max`.
#[derive(Debug, Clone)]
pub struct OperatorRegistry {
    ops: BTreeMap<String, SummaryOperator>,
}

impl OperatorRegistry {
    pub fn new() -> Self {
        let mut registry = OperatorRegistry { ops: BTreeMap::new() };
        registry.register(SummaryOperator::addition());
        registry.register(SummaryOperator::maximum());
        registry
    }

    /// Adds or replaces an operator under its own name.
    pub fn register(&mut self, op: SummaryOperator) {
        self.ops.insert(op.name().to_owned(), op);
    }

    pub fn get(&self, name: &str) -> Option<&SummaryOperator> {
        self.ops.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.ops.keys().map(String::as_str)
    }
}

impl Default for OperatorRegistry {
    fn default() -> Self {
        OperatorRegistry::new()
    }
}
