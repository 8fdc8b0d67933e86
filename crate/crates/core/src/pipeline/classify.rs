use serde::{Deserialize, Serialize};

use super::blocks::{split_blocks, BlockNode, Level};
use super::summary::SummaryOperators;
use super::tokenize::Span;
use crate::confidence::ConfidenceVector;
use crate::error::{Error, Result};
use crate::model::Model;
use crate::valuation::{Valuator, WordScorer};

/// Outcome of classifying one input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub label: String,
    pub category_index: usize,
    /// The document-level confidence vector.
    pub confidence: ConfidenceVector,
    /// Set when the document vector is all zeros: no token carried any
    /// evidence (including the zero-token case) and the label is simply the
    /// first category.
    pub no_evidence: bool,
}

/// An annotated block, as sent to explanation clients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplainedNode {
    pub level: Level,
    pub span: Span,
    pub confidence: ConfidenceVector,
    /// `confidence` divided, per category, by the largest value any node of
    /// the same level reaches for that category. Always in `[0, 1]`.
    pub intensity: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub token: Option<String>,
    pub children: Vec<ExplainedNode>,
}

/// Classification result together with the annotated block tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Explanation {
    pub label: String,
    pub confidence: ConfidenceVector,
    pub no_evidence: bool,
    pub categories: Vec<String>,
    /// Deepest level present in `tree`.
    pub level: Level,
    pub tree: ExplainedNode,
}

impl ExplainedNode {
    pub fn nodes_at(&self, level: Level) -> Vec<&ExplainedNode> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            if node.level == level {
                out.push(node);
            } else {
                stack.extend(node.children.iter().rev());
            }
        }
        out
    }
}

/// Runs the two-phase process: split into blocks, value the words, reduce
/// upwards with the summary operators, then pick the argmax category.
pub struct Classifier<'m, S = Valuator<'m>> {
    model: &'m Model,
    scorer: S,
    operators: SummaryOperators,
}

impl<'m> Classifier<'m> {
    pub fn new(model: &'m Model) -> Result<Self> {
        Classifier::with_scorer(model, Valuator::new(model))
    }
}

impl<'m, S: WordScorer> Classifier<'m, S> {
    /// Uses `scorer` for word vectors. It must produce vectors of the model's
    /// category count.
    pub fn with_scorer(model: &'m Model, scorer: S) -> Result<Self> {
        if model.is_empty() {
            return Err(Error::EmptyModel);
        }
        debug_assert_eq!(scorer.dimension(), model.num_categories());
        Ok(Classifier {
            model,
            scorer,
            operators: SummaryOperators::default(),
        })
    }

    pub fn with_operators(mut self, operators: SummaryOperators) -> Self {
        self.operators = operators;
        self
    }

    pub fn model(&self) -> &'m Model {
        self.model
    }

    /// Fills in every confidence vector of `tree`, bottom-up.
    pub fn annotate(&self, mut tree: BlockNode) -> BlockNode {
        self.annotate_in_place(&mut tree);
        tree
    }

    fn annotate_in_place(&self, node: &mut BlockNode) {
        let dimension = self.scorer.dimension();
        if node.level == Level::Word {
            node.confidence = match &node.token {
                Some(token) => self.scorer.word_vector(token),
                None => ConfidenceVector::zeros(dimension),
            };
            return;
        }
        for child in &mut node.children {
            self.annotate_in_place(child);
        }
        let op = match node.level {
            Level::Sentence => &self.operators.sentence,
            Level::Paragraph => &self.operators.paragraph,
            Level::Document | Level::Word => &self.operators.document,
        };
        let children: Vec<ConfidenceVector> = node.children.iter().map(|c| c.confidence.clone()).collect();
        node.confidence = op.reduce(&children, dimension);
    }

    /// Splits and annotates `text`.
    pub fn analyze(&self, text: &str) -> BlockNode {
        self.annotate(split_blocks(text))
    }

    fn decide(&self, confidence: ConfidenceVector) -> Classification {
        let category_index = confidence.argmax().unwrap_or(0);
        Classification {
            label: self.model.categories()[category_index].name().to_owned(),
            category_index,
            no_evidence: confidence.is_zero(),
            confidence,
        }
    }

    pub fn classify(&self, text: &str) -> Classification {
        self.decide(self.analyze(text).confidence)
    }

    /// Labels for each document, in input order.
    pub fn predict<I, T>(&self, docs: I) -> Vec<String>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<str>,
    {
        docs.into_iter().map(|d| self.classify(d.as_ref()).label).collect()
    }

    /// Classifies `text` and returns the annotated tree down to `level`, with
    /// per-level normalized intensities.
    pub fn explain(&self, text: &str, level: Level) -> Explanation {
        let tree = self.analyze(text);
        let dimension = self.scorer.dimension();

        let mut max_per_level = vec![vec![0.0f64; dimension]; Level::ALL.len()];
        for l in Level::ALL.iter().filter(|l| **l <= level) {
            let maxima = &mut max_per_level[l.depth()];
            for node in tree.nodes_at(*l) {
                for (m, v) in maxima.iter_mut().zip(node.confidence.iter()) {
                    *m = m.max(*v);
                }
            }
        }

        let decision = self.decide(tree.confidence.clone());
        Explanation {
            label: decision.label,
            confidence: decision.confidence,
            no_evidence: decision.no_evidence,
            categories: self.model.category_names().into_iter().map(str::to_owned).collect(),
            level,
            tree: explained(tree, level, &max_per_level),
        }
    }
}

fn explained(node: BlockNode, deepest: Level, max_per_level: &[Vec<f64>]) -> ExplainedNode {
    let maxima = &max_per_level[node.level.depth()];
    let intensity = node
        .confidence
        .iter()
        .zip(maxima)
        .map(|(v, m)| if *m > 0.0 { v / m } else { 0.0 })
        .collect();
    let children = if node.level < deepest {
        node.children
            .into_iter()
            .map(|c| explained(c, deepest, max_per_level))
            .collect()
    } else {
        Vec::new()
    };
    ExplainedNode {
        level: node.level,
        span: node.span,
        confidence: node.confidence,
        intensity,
        token: node.token,
        children,
    }
}

impl Model {
    /// Annotates a tree from [`split_blocks`] with this model.
    pub fn annotate(&self, tree: BlockNode, operators: &SummaryOperators) -> Result<BlockNode> {
        Ok(Classifier::new(self)?.with_operators(operators.clone()).annotate(tree))
    }

    pub fn classify(&self, text: &str) -> Result<Classification> {
        Ok(Classifier::new(self)?.classify(text))
    }

    pub fn predict<I, T>(&self, docs: I) -> Result<Vec<String>>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<str>,
    {
        Ok(Classifier::new(self)?.predict(docs))
    }

    pub fn explain(&self, text: &str, level: Level) -> Result<Explanation> {
        Ok(Classifier::new(self)?.explain(text, level))
    }
}
