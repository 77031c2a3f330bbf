//! Question/answer/position models and their classification.
//!
//! A [`Model`] is a set of admissible positions, each assigning answers to a
//! fixed list of questions. [`classify`] evaluates the globalism and monism
//! conditions (and their weak forms) with witnesses and reports one of four
//! taxa: global monism, global pluralism, local monism or local pluralism,
//! with hybrid/strict refinements of local pluralism and a syncretism flag
//! for set-valued positions.
//!
//! ```
//! use pluralism::{classify, parse_compact_spec, Taxon};
//!
//! let model = parse_compact_spec("3x2:{1,8}").unwrap();
//! assert_eq!(classify(&model).primary, Taxon::GlobalPluralism);
//! ```
//!
//! The [`sweep`] module checks the classification laws exhaustively over
//! every non-empty subset of small position universes. With the default
//! `parallel` feature the sweep runs on rayon.

pub mod conditions;
pub mod index;
pub mod io;
pub mod model;
pub mod reduction;
pub mod sweep;
pub mod taxonomy;

pub use conditions::{
    condition_profile, eval_g, eval_m, eval_syncretism, eval_weak_globalism, eval_weak_monism,
    Condition, ConditionProfile, Entailment, Evaluation, Witness,
};
pub use index::{canonical_index, compare_positions, position_from_index, IndexError};
pub use io::{
    emit_report, parse_compact_spec, parse_model_document, serialize_model, Format, ModelDocument,
    ParseError, ReportRef,
};
pub use model::{Answers, Cell, Model, ModelError, Position, Space};
pub use reduction::{coanswered_partition, merge_questions, QuestionPartition, ReductionError};
pub use sweep::{
    enumerate_positions, for_each_nonempty_subset, maximal_model, verify_laws, SweepError,
    SweepReport,
};
pub use taxonomy::{classify, explain, Taxon, TaxonReport};
