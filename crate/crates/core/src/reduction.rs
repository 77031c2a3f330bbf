//! Merging of co-answered questions.
//!
//! Two questions are co-answered when every admissible position gives them
//! the same answer. Such questions can be replaced by their conjunction
//! without changing any condition, so a merged model keeps one column per
//! class, labelled with the members joined by `∧`.

use serde::Serialize;
use thiserror::Error;

use crate::model::{Model, ModelError, Position, Space};

/// Separator used in merged question labels.
pub const CONJUNCTION: &str = "∧";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("question merging is undefined for syncretic models")]
    Syncretic,
    #[error("merged labels collide: {0}")]
    Labels(#[from] ModelError),
}

/// Co-answered classes of questions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuestionPartition {
    /// Question ordinals per class, ascending; classes ordered by their least member.
    pub classes: Vec<Vec<usize>>,
    pub merged_labels: Vec<String>,
}

impl QuestionPartition {
    pub fn is_trivial(&self) -> bool {
        self.classes.iter().all(|c| c.len() == 1)
    }

    /// The class index holding `question`.
    pub fn class_of(&self, question: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(&question))
    }
}

/// Groups questions whose answer columns are identical across the model.
pub fn coanswered_partition(model: &Model) -> QuestionPartition {
    let space = model.space();
    let column_eq = |a: usize, b: usize| model.positions().iter().all(|p| p.cell(a) == p.cell(b));
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for q in 0..space.n() {
        match classes.iter_mut().find(|c| column_eq(c[0], q)) {
            Some(class) => class.push(q),
            None => classes.push(vec![q]),
        }
    }
    let merged_labels = classes
        .iter()
        .map(|c| {
            c.iter()
                .map(|&q| space.question_label(q))
                .collect::<Vec<_>>()
                .join(CONJUNCTION)
        })
        .collect();
    QuestionPartition {
        classes,
        merged_labels,
    }
}

/// Replaces each co-answered class by its lowest-ordinal question.
pub fn merge_questions(model: &Model) -> Result<Model, ReductionError> {
    if model.is_syncretic() {
        return Err(ReductionError::Syncretic);
    }
    let partition = coanswered_partition(model);
    if partition.is_trivial() {
        return Ok(model.clone());
    }
    let space = Space::new(
        partition.merged_labels.iter().cloned(),
        model.space().answers(),
    )?;
    let positions = model.positions().iter().enumerate().map(|(i, p)| {
        let Position::Single(answers) = p else {
            unreachable!("functional model holds single positions")
        };
        let kept = partition.classes.iter().map(|c| answers[c[0]]).collect();
        (Position::Single(kept), model.name(i).map(str::to_string))
    });
    Ok(Model::with_names(space, positions, false)?)
}
