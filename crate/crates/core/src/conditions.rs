//! Evaluation of the classification conditions over a model, with witnesses.
//!
//! | condition | reading                                              | witness when |
//! |-----------|------------------------------------------------------|--------------|
//! | G         | every position gives all questions the same answer   | false        |
//! | M         | every question gets the same answer in all positions | false        |
//! | G'        | some position gives all questions the same answer    | true         |
//! | M'        | some question gets the same answer in all positions  | true         |
//! | S         | some position gives some question several answers    | true         |
//!
//! "Same answer" is equality of answer sets, so a functional model and its
//! singleton-wrapped syncretic embedding evaluate identically.
//!
//! When several witnesses exist the least one is reported, ordering by
//! position ordinal (canonical order) and then question ordinal, in the order
//! the witness fields are listed.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::model::Model;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    G,
    M,
    WeakG,
    WeakM,
    S,
}

impl Condition {
    pub const ALL: [Condition; 5] = [
        Condition::G,
        Condition::M,
        Condition::WeakG,
        Condition::WeakM,
        Condition::S,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Condition::G => "G",
            Condition::M => "M",
            Condition::WeakG => "G'",
            Condition::WeakM => "M'",
            Condition::S => "S",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Condition::G => "globalism",
            Condition::M => "monism",
            Condition::WeakG => "weak globalism",
            Condition::WeakM => "weak monism",
            Condition::S => "syncretism",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Evidence for the truth value of one condition.
///
/// Position fields are ordinals into [`Model::positions`], question fields are
/// question ordinals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `position` answers `first` and `second` differently, refuting G.
    MixedPosition {
        position: usize,
        first: usize,
        second: usize,
    },
    /// `question` is answered differently by `first` and `second`, refuting M.
    VaryingQuestion {
        question: usize,
        first: usize,
        second: usize,
    },
    /// `position` answers every question alike, establishing G'.
    UniformPosition { position: usize },
    /// `question` is answered alike in every position, establishing M'.
    ConstantQuestion { question: usize },
    /// `position` gives `question` more than one answer, establishing S.
    JointAnswer { position: usize, question: usize },
}

impl Witness {
    /// The condition whose truth value this witness certifies.
    pub fn condition(&self) -> Condition {
        match self {
            Witness::MixedPosition { .. } => Condition::G,
            Witness::VaryingQuestion { .. } => Condition::M,
            Witness::UniformPosition { .. } => Condition::WeakG,
            Witness::ConstantQuestion { .. } => Condition::WeakM,
            Witness::JointAnswer { .. } => Condition::S,
        }
    }

    /// Re-checks the witness against `model`. Out-of-range references fail.
    pub fn replay(&self, model: &Model) -> bool {
        let k = model.len();
        let n = model.space().n();
        let ps = model.positions();
        match *self {
            Witness::MixedPosition {
                position,
                first,
                second,
            } => {
                position < k
                    && first < n
                    && second < n
                    && ps[position].cell(first) != ps[position].cell(second)
            }
            Witness::VaryingQuestion {
                question,
                first,
                second,
            } => {
                question < n
                    && first < k
                    && second < k
                    && ps[first].cell(question) != ps[second].cell(question)
            }
            Witness::UniformPosition { position } => {
                position < k && ps[position].cells().all(|c| c == ps[position].cell(0))
            }
            Witness::ConstantQuestion { question } => {
                question < n && ps.iter().all(|p| p.cell(question) == ps[0].cell(question))
            }
            Witness::JointAnswer { position, question } => {
                position < k && question < n && ps[position].cell(question).len() > 1
            }
        }
    }

    /// A one-line account of the witness in terms of the model's labels.
    pub fn describe(&self, model: &Model) -> String {
        let space = model.space();
        let ps = model.positions();
        let q = |i: usize| space.question_label(i);
        let pl = |i: usize| model.position_label(i);
        match *self {
            Witness::MixedPosition {
                position,
                first,
                second,
            } => format!(
                "{} answers {} with {} but {} with {}",
                pl(position),
                q(first),
                ps[position].cell(first).render(space),
                q(second),
                ps[position].cell(second).render(space),
            ),
            Witness::VaryingQuestion {
                question,
                first,
                second,
            } => format!(
                "{} is answered {} in {} but {} in {}",
                q(question),
                ps[first].cell(question).render(space),
                pl(first),
                ps[second].cell(question).render(space),
                pl(second),
            ),
            Witness::UniformPosition { position } => format!(
                "{} answers every question with {}",
                pl(position),
                ps[position].cell(0).render(space),
            ),
            Witness::ConstantQuestion { question } => format!(
                "{} is answered {} in every position",
                q(question),
                ps[0].cell(question).render(space),
            ),
            Witness::JointAnswer { position, question } => format!(
                "{} answers {} with {} jointly",
                pl(position),
                q(question),
                ps[position].cell(question).render(space),
            ),
        }
    }
}

/// Truth value of one condition and its witness, if the condition carries one
/// for that value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Evaluation {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Evaluation {
    fn universal(refutation: Option<Witness>) -> Self {
        Evaluation {
            holds: refutation.is_none(),
            witness: refutation,
        }
    }

    fn existential(example: Option<Witness>) -> Self {
        Evaluation {
            holds: example.is_some(),
            witness: example,
        }
    }
}

/// The first question `position` answers differently from question 0.
fn mixing_question(model: &Model, position: usize) -> Option<usize> {
    let p = &model.positions()[position];
    let head = p.cell(0);
    (1..p.len()).find(|&q| p.cell(q) != head)
}

/// The first position answering `question` differently from position 0.
fn varying_position(model: &Model, question: usize) -> Option<usize> {
    let ps = model.positions();
    let head = ps[0].cell(question);
    (1..ps.len()).find(|&x| ps[x].cell(question) != head)
}

// Answer equality is transitive, so "all entries equal" reduces to "all
// entries equal the first", and the least refuting pair always starts at
// ordinal 0.

/// G: every position assigns one answer to all questions.
pub fn eval_g(model: &Model) -> Evaluation {
    Evaluation::universal((0..model.len()).find_map(|x| {
        mixing_question(model, x).map(|z| Witness::MixedPosition {
            position: x,
            first: 0,
            second: z,
        })
    }))
}

/// M: every question receives one answer across all positions.
pub fn eval_m(model: &Model) -> Evaluation {
    Evaluation::universal((0..model.space().n()).find_map(|y| {
        varying_position(model, y).map(|x| Witness::VaryingQuestion {
            question: y,
            first: 0,
            second: x,
        })
    }))
}

/// G': some position assigns one answer to all questions.
pub fn eval_weak_globalism(model: &Model) -> Evaluation {
    Evaluation::existential(
        (0..model.len())
            .find(|&x| mixing_question(model, x).is_none())
            .map(|position| Witness::UniformPosition { position }),
    )
}

/// M': some question receives one answer across all positions.
pub fn eval_weak_monism(model: &Model) -> Evaluation {
    Evaluation::existential(
        (0..model.space().n())
            .find(|&y| varying_position(model, y).is_none())
            .map(|question| Witness::ConstantQuestion { question }),
    )
}

/// S: some position assigns more than one answer to some question.
pub fn eval_syncretism(model: &Model) -> Evaluation {
    if !model.is_syncretic() {
        return Evaluation::existential(None);
    }
    let n = model.space().n();
    Evaluation::existential((0..model.len()).find_map(|x| {
        (0..n)
            .find(|&y| model.positions()[x].cell(y).len() > 1)
            .map(|y| Witness::JointAnswer {
                position: x,
                question: y,
            })
    }))
}

/// When G' fails: one refutation per position, each showing it mixes answers.
/// Returns `None` if some position is uniform.
pub fn refute_weak_globalism(model: &Model) -> Option<Vec<Witness>> {
    (0..model.len())
        .map(|x| {
            mixing_question(model, x).map(|z| Witness::MixedPosition {
                position: x,
                first: 0,
                second: z,
            })
        })
        .collect()
}

/// When M' fails: one refutation per question, each showing it varies.
/// Returns `None` if some question is constant.
pub fn refute_weak_monism(model: &Model) -> Option<Vec<Witness>> {
    (0..model.space().n())
        .map(|y| {
            varying_position(model, y).map(|x| Witness::VaryingQuestion {
                question: y,
                first: 0,
                second: x,
            })
        })
        .collect()
}

/// One of the four implications between the strong and weak conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Entailment {
    /// G implies G'.
    GImpliesWeakG,
    /// M implies M'.
    MImpliesWeakM,
    /// not-G and M imply not-G'.
    LocalMonismDeniesWeakG,
    /// G and not-M imply not-M'.
    GlobalPluralismDeniesWeakM,
}

impl Entailment {
    pub const ALL: [Entailment; 4] = [
        Entailment::GImpliesWeakG,
        Entailment::MImpliesWeakM,
        Entailment::LocalMonismDeniesWeakG,
        Entailment::GlobalPluralismDeniesWeakM,
    ];

    /// Whether the implication holds for the given truth values.
    pub fn holds(self, g: bool, m: bool, weak_g: bool, weak_m: bool) -> bool {
        match self {
            Entailment::GImpliesWeakG => !g || weak_g,
            Entailment::MImpliesWeakM => !m || weak_m,
            Entailment::LocalMonismDeniesWeakG => !(!g && m) || !weak_g,
            Entailment::GlobalPluralismDeniesWeakM => !(g && !m) || !weak_m,
        }
    }
}

impl fmt::Display for Entailment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Entailment::GImpliesWeakG => "(G) => (G')",
            Entailment::MImpliesWeakM => "(M) => (M')",
            Entailment::LocalMonismDeniesWeakG => "(~G) & (M) => (~G')",
            Entailment::GlobalPluralismDeniesWeakM => "(G) & (~M) => (~M')",
        })
    }
}

/// Truth values of all five conditions plus their witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionProfile {
    pub g: bool,
    pub m: bool,
    pub weak_g: bool,
    pub weak_m: bool,
    pub s: bool,
    /// Witnesses for every failed universal (G, M) and every true existential (G', M', S).
    pub witnesses: BTreeMap<Condition, Witness>,
}

impl ConditionProfile {
    pub fn holds(&self, condition: Condition) -> bool {
        match condition {
            Condition::G => self.g,
            Condition::M => self.m,
            Condition::WeakG => self.weak_g,
            Condition::WeakM => self.weak_m,
            Condition::S => self.s,
        }
    }

    pub fn witness(&self, condition: Condition) -> Option<&Witness> {
        self.witnesses.get(&condition)
    }

    /// Entailments this profile violates. Always empty for profiles computed
    /// from a model.
    pub fn entailment_failures(&self) -> Vec<Entailment> {
        Entailment::ALL
            .into_iter()
            .filter(|e| !e.holds(self.g, self.m, self.weak_g, self.weak_m))
            .collect()
    }

    /// Whether the four non-syncretic truth values agree with `other`.
    pub fn same_truth_values(&self, other: &ConditionProfile) -> bool {
        (self.g, self.m, self.weak_g, self.weak_m) == (other.g, other.m, other.weak_g, other.weak_m)
    }
}

pub fn condition_profile(model: &Model) -> ConditionProfile {
    let evaluations = [
        (Condition::G, eval_g(model)),
        (Condition::M, eval_m(model)),
        (Condition::WeakG, eval_weak_globalism(model)),
        (Condition::WeakM, eval_weak_monism(model)),
        (Condition::S, eval_syncretism(model)),
    ];
    let [g, m, weak_g, weak_m, s] = evaluations.map(|(_, e)| e.holds);
    let witnesses = evaluations
        .into_iter()
        .filter_map(|(c, e)| e.witness.map(|w| (c, w)))
        .collect();
    let profile = ConditionProfile {
        g,
        m,
        weak_g,
        weak_m,
        s,
        witnesses,
    };
    debug_assert!(profile.entailment_failures().is_empty());
    profile
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::position_from_index;
    use crate::model::{Position, Space};

    fn model(indices: &[u64]) -> Model {
        let space = Space::with_default_labels(3, 2).unwrap();
        let ps = indices
            .iter()
            .map(|&i| position_from_index(&space, i).unwrap())
            .collect();
        Model::new(space, ps, false).unwrap()
    }

    #[test]
    fn g_cases() {
        assert!(eval_g(&model(&[1, 8])).holds);
        let e = eval_g(&model(&[2]));
        assert!(!e.holds);
        assert_eq!(
            e.witness,
            Some(Witness::MixedPosition {
                position: 0,
                first: 0,
                second: 2
            })
        );
        let one_q = Model::new(
            Space::with_default_labels(1, 3).unwrap(),
            vec![Position::single([0]), Position::single([2])],
            false,
        )
        .unwrap();
        assert!(eval_g(&one_q).holds);
    }

    #[test]
    fn m_cases() {
        assert!(eval_m(&model(&[5])).holds);
        let e = eval_m(&model(&[1, 8]));
        assert_eq!(
            e.witness,
            Some(Witness::VaryingQuestion {
                question: 0,
                first: 0,
                second: 1
            })
        );
        let e = eval_m(&model(&[1, 2]));
        assert_eq!(
            e.witness,
            Some(Witness::VaryingQuestion {
                question: 2,
                first: 0,
                second: 1
            })
        );
    }

    #[test]
    fn weak_cases() {
        let full = model(&[1, 2, 3, 4, 5, 6, 7, 8]);
        let e = eval_weak_globalism(&full);
        assert_eq!(e.witness, Some(Witness::UniformPosition { position: 0 }));
        assert!(!eval_weak_globalism(&model(&[2, 7])).holds);
        assert!(eval_weak_globalism(&model(&[1])).holds);

        assert_eq!(
            eval_weak_monism(&model(&[1, 2])).witness,
            Some(Witness::ConstantQuestion { question: 0 })
        );
        let m = model(&[5, 6, 7, 8]);
        assert_eq!(
            eval_weak_monism(&m).witness,
            Some(Witness::ConstantQuestion { question: 0 })
        );
        assert_eq!(m.answer_of(0, 0).unwrap().answers(), vec![1]);
        assert!(!eval_weak_monism(&model(&[2, 7])).holds);
    }

    #[test]
    fn syncretism() {
        let space = Space::with_default_labels(2, 2).unwrap();
        let m = Model::new(
            space.clone(),
            vec![Position::joint([vec![0, 1], vec![0]])],
            true,
        )
        .unwrap();
        let e = eval_syncretism(&m);
        assert_eq!(
            e.witness,
            Some(Witness::JointAnswer {
                position: 0,
                question: 0
            })
        );
        assert!(e.witness.unwrap().replay(&m));
        assert!(!eval_syncretism(&model(&[1, 2, 3])).holds);
        let wrapped = Model::new(space, vec![Position::joint([vec![0], vec![1]])], true).unwrap();
        assert!(!eval_syncretism(&wrapped).holds);
    }

    #[test]
    fn profiles() {
        let p = condition_profile(&model(&[1]));
        assert_eq!(
            (p.g, p.m, p.weak_g, p.weak_m, p.s),
            (true, true, true, true, false)
        );
        let p = condition_profile(&model(&[1, 2, 3, 4, 5, 6, 7, 8]));
        assert_eq!(
            (p.g, p.m, p.weak_g, p.weak_m, p.s),
            (false, false, true, false, false)
        );
        let p = condition_profile(&model(&[2, 7]));
        assert_eq!(
            (p.g, p.m, p.weak_g, p.weak_m, p.s),
            (false, false, false, false, false)
        );
        assert_eq!(
            p.witnesses.keys().copied().collect::<Vec<_>>(),
            vec![Condition::G, Condition::M]
        );
    }

    #[test]
    fn witnesses_replay_and_describe() {
        let m = model(&[2]);
        let p = condition_profile(&m);
        let w = p.witness(Condition::G).unwrap();
        assert!(w.replay(&m));
        assert_eq!(w.describe(&m), "P2 answers Q1 with A1 but Q3 with A2");
        let bogus = Witness::MixedPosition {
            position: 0,
            first: 0,
            second: 1,
        };
        assert!(!bogus.replay(&m));
        assert!(!Witness::UniformPosition { position: 4 }.replay(&m));
    }

    #[test]
    fn entailment_table() {
        assert!(!Entailment::GImpliesWeakG.holds(true, false, false, false));
        assert!(!Entailment::LocalMonismDeniesWeakG.holds(false, true, true, true));
        assert!(!Entailment::GlobalPluralismDeniesWeakM.holds(true, false, true, true));
        assert!(Entailment::ALL
            .iter()
            .all(|e| e.holds(false, false, true, true)));
    }
}
