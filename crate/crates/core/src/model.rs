//! Spaces, positions and models.
//!
//! A [`Space`] fixes a list of `n` questions and `m` answers. A [`Position`]
//! assigns every question an answer (or, for syncretic models, a non-empty
//! set of answers). A [`Model`] is a non-empty set of distinct positions over
//! one space: the admissible positions being classified.
//!
//! Question and answer ordinals are 0-based throughout the API. Display
//! labels default to `Q1..Qn` and `A1..Am`.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;
use thiserror::Error;

/// Questions a functional position stores without a heap allocation.
pub(crate) const INLINE_ANSWERS: usize = 2;

/// Answer ordinals of a functional position.
pub type Answers = SmallVec<[usize; INLINE_ANSWERS]>;

/// Errors raised while constructing or querying spaces and models.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("a space needs at least one question and one answer (got {questions} questions, {answers} answers)")]
    EmptySpace { questions: usize, answers: usize },
    #[error("{kind} label {label:?} appears more than once")]
    DuplicateLabel { kind: LabelKind, label: String },
    #[error("{kind} labels must be non-empty (ordinal {ordinal})")]
    EmptyLabel { kind: LabelKind, ordinal: usize },
    #[error("a model needs at least one position")]
    NoPositions,
    #[error("position {position} has {found} entries but the space has {expected} questions")]
    WrongLength {
        position: usize,
        expected: usize,
        found: usize,
    },
    #[error("position {position} gives question {question} answer ordinal {answer}, but the space has {answers} answers")]
    AnswerOutOfRange {
        position: usize,
        question: usize,
        answer: usize,
        answers: usize,
    },
    #[error("position {position} gives question {question} an empty answer set")]
    EmptyAnswerSet { position: usize, question: usize },
    #[error("position {position} is set-valued but the model is not syncretic")]
    JointInFunctionalModel { position: usize },
    #[error("{what} ordinal {index} is out of range (0..{len})")]
    OrdinalOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },
    #[error("invalid space shape {0:?}, expected <questions>x<answers> such as 3x2")]
    BadShape(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelKind {
    Question,
    Answer,
}

impl fmt::Display for LabelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LabelKind::Question => "question",
            LabelKind::Answer => "answer",
        })
    }
}

/// Display labels for questions or answers.
///
/// Default labels (`Q1..Qn`, `A1..Am`) are kept symbolic so that building a
/// space costs O(1) regardless of its size.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Labels {
    Numbered { prefix: &'static str, count: usize },
    Custom(Vec<String>),
}

impl Labels {
    /// Stores `labels`, collapsing them to the numbered form when they match it.
    fn new(labels: Vec<String>, prefix: &'static str) -> Labels {
        let numbered = labels
            .iter()
            .enumerate()
            .all(|(i, l)| l.strip_prefix(prefix) == Some((i + 1).to_string().as_str()));
        if numbered {
            Labels::Numbered {
                prefix,
                count: labels.len(),
            }
        } else {
            Labels::Custom(labels)
        }
    }

    #[inline]
    fn len(&self) -> usize {
        match self {
            Labels::Numbered { count, .. } => *count,
            Labels::Custom(v) => v.len(),
        }
    }

    fn get(&self, i: usize) -> Cow<'_, str> {
        match self {
            Labels::Numbered { prefix, count } => {
                assert!(i < *count, "label ordinal {i} out of range 0..{count}");
                Cow::Owned(format!("{prefix}{}", i + 1))
            }
            Labels::Custom(v) => Cow::Borrowed(&v[i]),
        }
    }

    fn ordinal(&self, label: &str) -> Option<usize> {
        match self {
            Labels::Numbered { prefix, count } => {
                let digits = label.strip_prefix(prefix)?;
                let k: usize = digits.parse().ok()?;
                (k >= 1 && k <= *count && k.to_string() == digits).then(|| k - 1)
            }
            Labels::Custom(v) => v.iter().position(|l| l == label),
        }
    }

    fn to_vec(&self) -> Vec<String> {
        (0..self.len()).map(|i| self.get(i).into_owned()).collect()
    }
}

/// The questions and answers a model ranges over.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Space {
    questions: Labels,
    answers: Labels,
    // cached shape; the index hot paths read these per position
    n: usize,
    m: usize,
    universe: Option<u64>,
}

impl Space {
    fn from_labels(questions: Labels, answers: Labels) -> Self {
        let (n, m) = (questions.len(), answers.len());
        let universe = u32::try_from(n)
            .ok()
            .and_then(|n| (m as u64).checked_pow(n));
        Space {
            questions,
            answers,
            n,
            m,
            universe,
        }
    }

    pub fn new<Q, A>(questions: Q, answers: A) -> Result<Self, ModelError>
    where
        Q: IntoIterator,
        Q::Item: Into<String>,
        A: IntoIterator,
        A::Item: Into<String>,
    {
        let questions: Vec<String> = questions.into_iter().map(Into::into).collect();
        let answers: Vec<String> = answers.into_iter().map(Into::into).collect();
        if questions.is_empty() || answers.is_empty() {
            return Err(ModelError::EmptySpace {
                questions: questions.len(),
                answers: answers.len(),
            });
        }
        check_labels(&questions, LabelKind::Question)?;
        check_labels(&answers, LabelKind::Answer)?;
        Ok(Space::from_labels(
            Labels::new(questions, "Q"),
            Labels::new(answers, "A"),
        ))
    }

    /// A space with `n` questions labelled `Q1..Qn` and `m` answers labelled `A1..Am`.
    pub fn with_default_labels(n: usize, m: usize) -> Result<Self, ModelError> {
        if n == 0 || m == 0 {
            return Err(ModelError::EmptySpace {
                questions: n,
                answers: m,
            });
        }
        Ok(Space::from_labels(
            Labels::Numbered {
                prefix: "Q",
                count: n,
            },
            Labels::Numbered {
                prefix: "A",
                count: m,
            },
        ))
    }

    /// Number of questions.
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of answers.
    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn questions(&self) -> Vec<String> {
        self.questions.to_vec()
    }

    pub fn answers(&self) -> Vec<String> {
        self.answers.to_vec()
    }

    pub fn question_label(&self, question: usize) -> Cow<'_, str> {
        self.questions.get(question)
    }

    pub fn answer_label(&self, answer: usize) -> Cow<'_, str> {
        self.answers.get(answer)
    }

    pub fn question_ordinal(&self, label: &str) -> Option<usize> {
        self.questions.ordinal(label)
    }

    pub fn answer_ordinal(&self, label: &str) -> Option<usize> {
        self.answers.ordinal(label)
    }

    /// Size of the position universe, `m^n`, or `None` if it overflows `u64`.
    #[inline]
    pub fn universe_size(&self) -> Option<u64> {
        self.universe
    }

    /// Whether two spaces have the same shape (labels may differ).
    pub fn same_shape(&self, other: &Space) -> bool {
        self.n() == other.n() && self.m() == other.m()
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.n(), self.m())
    }
}

/// Parses an `NxM` shape (`N` questions, `M` answers) into a space with default labels.
impl FromStr for Space {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ModelError::BadShape(s.to_string());
        let (n, m) = s.trim().split_once(['x', 'X']).ok_or_else(bad)?;
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        let m: usize = m.trim().parse().map_err(|_| bad())?;
        Space::with_default_labels(n, m)
    }
}

fn check_labels(labels: &[String], kind: LabelKind) -> Result<(), ModelError> {
    let mut seen = BTreeSet::new();
    for (ordinal, label) in labels.iter().enumerate() {
        if label.is_empty() {
            return Err(ModelError::EmptyLabel { kind, ordinal });
        }
        if !seen.insert(label.as_str()) {
            return Err(ModelError::DuplicateLabel {
                kind,
                label: label.clone(),
            });
        }
    }
    Ok(())
}

/// One assignment of answers to every question.
///
/// The derived ordering on `Single` positions is lexicographic over answer
/// ordinals, which coincides with canonical index order.
#[allow(clippy::derived_hash_with_manual_eq)] // `eq` agrees with the derived one
#[derive(Debug, Eq, PartialOrd, Ord, Hash)]
pub enum Position {
    /// Exactly one answer per question.
    Single(Answers),
    /// A non-empty answer set per question (syncretic models only).
    Joint(Vec<BTreeSet<usize>>),
}

// Answer lists are short; an element loop beats a `memcmp` call.
impl PartialEq for Position {
    #[inline]
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Position::Single(a), Position::Single(b)) => {
                a.len() == b.len() && a.iter().zip(b.iter()).all(|(x, y)| x == y)
            }
            (Position::Joint(a), Position::Joint(b)) => a == b,
            _ => false,
        }
    }
}

// SmallVec's own clone goes through `extend`; copying the slice is much cheaper.
impl Clone for Position {
    fn clone(&self) -> Self {
        match self {
            Position::Single(a) => Position::Single(Answers::from_slice(a)),
            Position::Joint(c) => Position::Joint(c.clone()),
        }
    }
}

impl Position {
    pub fn single(answers: impl IntoIterator<Item = usize>) -> Self {
        Position::Single(answers.into_iter().collect())
    }

    pub fn joint<I, S>(cells: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = usize>,
    {
        Position::Joint(cells.into_iter().map(|c| c.into_iter().collect()).collect())
    }

    /// Number of questions this position covers.
    pub fn len(&self) -> usize {
        match self {
            Position::Single(a) => a.len(),
            Position::Joint(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_joint(&self) -> bool {
        matches!(self, Position::Joint(_))
    }

    /// The answer(s) given to `question`. Panics if `question` is out of range.
    pub fn cell(&self, question: usize) -> Cell<'_> {
        match self {
            Position::Single(a) => Cell::One(a[question]),
            Position::Joint(c) => Cell::Many(&c[question]),
        }
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell<'_>> + '_ {
        (0..self.len()).map(move |q| self.cell(q))
    }

    /// Wraps every answer as a singleton set. Joint positions are returned unchanged.
    pub fn to_joint(&self) -> Position {
        match self {
            Position::Single(a) => {
                Position::Joint(a.iter().map(|&j| BTreeSet::from([j])).collect())
            }
            joint => joint.clone(),
        }
    }

    /// Checks length and answer ranges against `space`. `ordinal` is only used in error messages.
    pub fn validate(&self, space: &Space, ordinal: usize) -> Result<(), ModelError> {
        if self.len() != space.n() {
            return Err(ModelError::WrongLength {
                position: ordinal,
                expected: space.n(),
                found: self.len(),
            });
        }
        let out_of_range = |question, answer| ModelError::AnswerOutOfRange {
            position: ordinal,
            question,
            answer,
            answers: space.m(),
        };
        match self {
            Position::Single(a) => {
                if let Some((q, &j)) = a.iter().enumerate().find(|(_, &j)| j >= space.m()) {
                    return Err(out_of_range(q, j));
                }
            }
            Position::Joint(cells) => {
                for (q, cell) in cells.iter().enumerate() {
                    match cell.last() {
                        None => {
                            return Err(ModelError::EmptyAnswerSet {
                                position: ordinal,
                                question: q,
                            })
                        }
                        Some(&j) if j >= space.m() => return Err(out_of_range(q, j)),
                        Some(_) => {}
                    }
                }
            }
        }
        Ok(())
    }
}

/// A borrowed view of one entry of a position.
///
/// Equality is answer-set equality, so `One(a) == Many({a})`.
#[derive(Debug, Clone, Copy)]
pub enum Cell<'a> {
    One(usize),
    Many(&'a BTreeSet<usize>),
}

impl Cell<'_> {
    /// Number of answers in this entry.
    pub fn len(&self) -> usize {
        match self {
            Cell::One(_) => 1,
            Cell::Many(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn answers(&self) -> Vec<usize> {
        match self {
            Cell::One(a) => vec![*a],
            Cell::Many(s) => s.iter().copied().collect(),
        }
    }

    /// Renders the entry with the space's answer labels, `{A1, A2}` for sets.
    pub fn render(&self, space: &Space) -> String {
        match self {
            Cell::One(a) => space.answer_label(*a).into_owned(),
            Cell::Many(s) => {
                let labels: Vec<Cow<'_, str>> = s.iter().map(|&a| space.answer_label(a)).collect();
                format!("{{{}}}", labels.join(", "))
            }
        }
    }
}

impl PartialEq for Cell<'_> {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Cell::One(a), Cell::One(b)) => a == b,
            (Cell::Many(a), Cell::Many(b)) => a == b,
            (Cell::One(a), Cell::Many(s)) | (Cell::Many(s), Cell::One(a)) => {
                s.len() == 1 && s.contains(a)
            }
        }
    }
}

impl Eq for Cell<'_> {}

/// A non-empty set of distinct positions over one space.
///
/// Positions are stored in canonical order (ascending canonical index for
/// functional models, structural order for syncretic ones). Equality ignores
/// position names and the duplicate count.
#[derive(Debug, Clone)]
pub struct Model {
    space: Space,
    positions: Vec<Position>,
    names: Vec<Option<String>>,
    syncretic: bool,
    duplicates: usize,
}

impl PartialEq for Model {
    fn eq(&self, other: &Self) -> bool {
        self.syncretic == other.syncretic
            && self.space == other.space
            && self.positions == other.positions
    }
}

impl Eq for Model {}

impl Model {
    /// Builds a model, deduplicating and sorting the positions.
    ///
    /// In syncretic mode functional positions are wrapped as singleton sets.
    pub fn new(
        space: Space,
        positions: Vec<Position>,
        syncretic: bool,
    ) -> Result<Self, ModelError> {
        Model::with_names(space, positions.into_iter().map(|p| (p, None)), syncretic)
    }

    /// Like [`Model::new`], carrying an optional display name per position.
    /// When duplicates collapse, the first non-empty name wins.
    pub fn with_names<I>(space: Space, positions: I, syncretic: bool) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (Position, Option<String>)>,
    {
        let mut set: BTreeMap<Position, Option<String>> = BTreeMap::new();
        let mut total = 0;
        for (ordinal, (position, name)) in positions.into_iter().enumerate() {
            total += 1;
            position.validate(&space, ordinal)?;
            let position = match (syncretic, position.is_joint()) {
                (false, true) => {
                    return Err(ModelError::JointInFunctionalModel { position: ordinal })
                }
                (true, false) => position.to_joint(),
                _ => position,
            };
            let slot = set.entry(position).or_default();
            if slot.is_none() {
                *slot = name;
            }
        }
        if set.is_empty() {
            return Err(ModelError::NoPositions);
        }
        let duplicates = total - set.len();
        let (positions, names) = set.into_iter().unzip();
        Ok(Model {
            space,
            positions,
            names,
            syncretic,
            duplicates,
        })
    }

    /// Builds a functional model from positions already validated, distinct and sorted.
    pub(crate) fn from_sorted_unchecked(space: Space, positions: Vec<Position>) -> Self {
        debug_assert!(!positions.is_empty());
        debug_assert!(positions.windows(2).all(|w| w[0] < w[1]));
        let names = vec![None; positions.len()];
        Model {
            space,
            positions,
            names,
            syncretic: false,
            duplicates: 0,
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    /// Number of admissible positions.
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    /// Always false; models are non-empty by construction.
    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn is_syncretic(&self) -> bool {
        self.syncretic
    }

    /// How many input positions were dropped as duplicates.
    pub fn duplicates_dropped(&self) -> usize {
        self.duplicates
    }

    pub fn name(&self, position: usize) -> Option<&str> {
        self.names.get(position).and_then(|n| n.as_deref())
    }

    /// The stored entry for `question` in the `position`-th admissible position.
    pub fn answer_of(&self, position: usize, question: usize) -> Result<Cell<'_>, ModelError> {
        let p = self
            .positions
            .get(position)
            .ok_or(ModelError::OrdinalOutOfRange {
                what: "position",
                index: position,
                len: self.positions.len(),
            })?;
        if question >= self.space.n() {
            return Err(ModelError::OrdinalOutOfRange {
                what: "question",
                index: question,
                len: self.space.n(),
            });
        }
        Ok(p.cell(question))
    }

    /// Display label of a position: its name if one was given, `P<canonical index>`
    /// for functional positions, `#<ordinal>` (1-based) for syncretic ones.
    pub fn position_label(&self, position: usize) -> String {
        if let Some(name) = self.name(position) {
            return name.to_string();
        }
        match crate::index::canonical_index(&self.space, &self.positions[position]) {
            Ok(idx) => format!("P{idx}"),
            Err(_) => format!("#{}", position + 1),
        }
    }

    /// Renders a position in `{Q1A1, Q2A2}` notation.
    pub fn render_position(&self, position: usize) -> String {
        let p = &self.positions[position];
        let parts: Vec<String> = p
            .cells()
            .enumerate()
            .map(|(q, cell)| {
                format!(
                    "{}{}",
                    self.space.question_label(q),
                    cell.render(&self.space)
                )
            })
            .collect();
        format!("{{{}}}", parts.join(", "))
    }

    /// The syncretic embedding: every answer wrapped as a singleton set.
    pub fn to_syncretic(&self) -> Model {
        let mut pairs: Vec<(Position, Option<String>)> = self
            .positions
            .iter()
            .map(Position::to_joint)
            .zip(self.names.iter().cloned())
            .collect();
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let (positions, names) = pairs.into_iter().unzip();
        Model {
            space: self.space.clone(),
            positions,
            names,
            syncretic: true,
            duplicates: self.duplicates,
        }
    }
}
