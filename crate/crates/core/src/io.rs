//! Model documents, compact model specs and report rendering.
//!
//! A model document is JSON with the top-level keys `questions`, `answers`,
//! `positions` and optionally `syncretic`:
//!
//! ```json
//! {
//!   "questions": ["Q1", "Q2", "Q3"],
//!   "answers": ["A1", "A2"],
//!   "positions": [["A1", "A1", "A1"], {"name": "top", "answers": ["A2", "A2", "A2"]}],
//!   "syncretic": false
//! }
//! ```
//!
//! Rows are either plain label lists or `{"name", "answers"}` objects. In
//! syncretic documents an entry may be a list of labels.
//!
//! A compact spec names positions by canonical index over default labels,
//! e.g. `3x2:{1,8}`.

use std::borrow::Cow;
use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::index::{canonical_index, position_from_index, IndexError};
use crate::model::{Cell, Model, ModelError, Position, Space};
use crate::sweep::SweepReport;
use crate::taxonomy::{render_explanation, Taxon, TaxonReport};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("malformed document at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{field}: unknown answer label {label:?}")]
    UnknownAnswer { field: String, label: String },
    #[error("{field}: row has {found} entries but there are {expected} questions")]
    Ragged {
        field: String,
        expected: usize,
        found: usize,
    },
    #[error("{field}: empty answer set")]
    EmptyCell { field: String },
    #[error("{field}: answer sets need \"syncretic\": true")]
    JointInFunctional { field: String },
    #[error("{field}: answer {label:?} listed twice")]
    RepeatedAnswer { field: String, label: String },
    #[error("questions/answers: {0}")]
    Model(#[from] ModelError),
    #[error("bad compact spec {spec:?}: {reason}")]
    Compact { spec: String, reason: String },
    #[error("compact spec: {0}")]
    Index(#[from] IndexError),
    #[error("compact spec lists index {0} twice")]
    DuplicateIndex(u64),
}

/// One answer entry of a row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    One(String),
    Many(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Row {
    Plain(Vec<Entry>),
    Named { name: String, answers: Vec<Entry> },
}

impl Row {
    fn parts(&self) -> (Option<&str>, &[Entry]) {
        match self {
            Row::Plain(e) => (None, e),
            Row::Named { name, answers } => (Some(name), answers),
        }
    }
}

/// The serialized form of a model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub questions: Vec<String>,
    pub answers: Vec<String>,
    pub positions: Vec<Row>,
    #[serde(default)]
    pub syncretic: bool,
}

impl ModelDocument {
    /// Canonical document for `model`: rows in canonical order, `syncretic` always present.
    pub fn from_model(model: &Model) -> Self {
        let space = model.space();
        let label = |a: usize| space.answer_label(a).into_owned();
        let positions = (0..model.len())
            .map(|i| {
                let entries = model.positions()[i]
                    .cells()
                    .map(|c| match c {
                        Cell::One(a) => Entry::One(label(a)),
                        Cell::Many(s) => Entry::Many(s.iter().map(|&a| label(a)).collect()),
                    })
                    .collect();
                match model.name(i) {
                    Some(name) => Row::Named {
                        name: name.to_string(),
                        answers: entries,
                    },
                    None => Row::Plain(entries),
                }
            })
            .collect();
        ModelDocument {
            questions: space.questions(),
            answers: space.answers(),
            positions,
            syncretic: model.is_syncretic(),
        }
    }

    /// Resolves labels and builds the model. Duplicate rows are dropped; see
    /// [`Model::duplicates_dropped`].
    pub fn to_model(&self) -> Result<Model, ParseError> {
        let space = Space::new(self.questions.iter().cloned(), self.answers.iter().cloned())?;
        if self.positions.is_empty() {
            return Err(ModelError::NoPositions.into());
        }
        let mut rows = Vec::with_capacity(self.positions.len());
        for (r, row) in self.positions.iter().enumerate() {
            let (name, entries) = row.parts();
            if entries.len() != space.n() {
                return Err(ParseError::Ragged {
                    field: format!("positions[{r}]"),
                    expected: space.n(),
                    found: entries.len(),
                });
            }
            let position = self.resolve_row(&space, r, entries)?;
            rows.push((position, name.map(str::to_string)));
        }
        Ok(Model::with_names(space, rows, self.syncretic)?)
    }

    fn resolve_row(
        &self,
        space: &Space,
        r: usize,
        entries: &[Entry],
    ) -> Result<Position, ParseError> {
        let lookup = |field: &dyn Fn() -> String, label: &str| {
            space
                .answer_ordinal(label)
                .ok_or_else(|| ParseError::UnknownAnswer {
                    field: field(),
                    label: label.to_string(),
                })
        };
        if !self.syncretic {
            let mut answers = Vec::with_capacity(entries.len());
            for (q, e) in entries.iter().enumerate() {
                let field = || format!("positions[{r}][{q}]");
                match e {
                    Entry::One(label) => answers.push(lookup(&field, label)?),
                    Entry::Many(_) => return Err(ParseError::JointInFunctional { field: field() }),
                }
            }
            return Ok(Position::single(answers));
        }
        let mut cells = Vec::with_capacity(entries.len());
        for (q, e) in entries.iter().enumerate() {
            let field = || format!("positions[{r}][{q}]");
            let labels: &[String] = match e {
                Entry::One(label) => std::slice::from_ref(label),
                Entry::Many(labels) => labels,
            };
            if labels.is_empty() {
                return Err(ParseError::EmptyCell { field: field() });
            }
            let mut set = BTreeSet::new();
            for label in labels {
                if !set.insert(lookup(&field, label)?) {
                    return Err(ParseError::RepeatedAnswer {
                        field: field(),
                        label: label.clone(),
                    });
                }
            }
            cells.push(set);
        }
        Ok(Position::Joint(cells))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }
}

/// Parses a JSON model document.
pub fn parse_model_document(text: &[u8]) -> Result<Model, ParseError> {
    let doc: ModelDocument = serde_json::from_slice(text).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    doc.to_model()
}

/// Serializes `model` as a canonical JSON document.
pub fn serialize_model(model: &Model) -> String {
    ModelDocument::from_model(model).to_json()
}

/// Parses `<n>x<m>:{i,j,...}` into a functional model with default labels.
pub fn parse_compact_spec(text: &str) -> Result<Model, ParseError> {
    let bad = |reason: &str| ParseError::Compact {
        spec: text.to_string(),
        reason: reason.to_string(),
    };
    let (shape, list) = text
        .split_once(':')
        .ok_or_else(|| bad("expected <n>x<m>:{indices}"))?;
    let space: Space = shape.parse().map_err(|e: ModelError| bad(&e.to_string()))?;
    let inner = list
        .trim()
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| bad("indices must be enclosed in braces"))?;
    let mut seen = BTreeSet::new();
    let mut positions = Vec::new();
    for item in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let index: u64 = item
            .parse()
            .map_err(|_| bad(&format!("{item:?} is not an index")))?;
        if !seen.insert(index) {
            return Err(ParseError::DuplicateIndex(index));
        }
        positions.push(position_from_index(&space, index)?);
    }
    Ok(Model::new(space, positions, false)?)
}

/// Compact spec for a functional model (labels are not represented).
pub fn compact_spec(model: &Model) -> Option<String> {
    let indices: Option<Vec<String>> = model
        .positions()
        .iter()
        .map(|p| {
            canonical_index(model.space(), p)
                .ok()
                .map(|i| i.to_string())
        })
        .collect();
    Some(format!("{}:{{{}}}", model.space(), indices?.join(",")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?} (expected text or json)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Text => "text",
            Format::Json => "json",
        })
    }
}

/// A report together with whatever it needs for rendering.
#[derive(Debug, Clone, Copy)]
pub enum ReportRef<'a> {
    Taxon {
        model: &'a Model,
        report: &'a TaxonReport,
    },
    Sweep(&'a SweepReport),
}

/// Renders a report. Text output of a taxon report is the explanation.
pub fn emit_report(report: ReportRef<'_>, format: Format) -> String {
    match (report, format) {
        (ReportRef::Taxon { model, report }, Format::Text) => render_explanation(model, report),
        (ReportRef::Taxon { model, report }, Format::Json) => pretty(&taxon_json(model, report)),
        (ReportRef::Sweep(r), Format::Text) => sweep_text(r),
        (ReportRef::Sweep(r), Format::Json) => {
            pretty(&serde_json::to_value(r).expect("sweep reports serialize"))
        }
    }
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values serialize");
    s.push('\n');
    s
}

fn taxon_json(model: &Model, report: &TaxonReport) -> Value {
    let mut value = serde_json::to_value(report).expect("taxon reports serialize");
    value["title"] = json!(report.title());
    value["space"] = json!(model.space().to_string());
    value["questions"] = json!(model.space().questions());
    value["answers"] = json!(model.space().answers());
    value["positions"] = (0..model.len())
        .map(|i| {
            json!({
                "label": model.position_label(i),
                "assignment": model.render_position(i),
            })
        })
        .collect();
    if let Some(witnesses) = value["profile"]["witnesses"].as_object_mut() {
        for (key, w) in report.profile.witnesses.iter().map(|(c, w)| {
            let key = serde_json::to_value(c).expect("condition keys serialize");
            (key.as_str().unwrap_or_default().to_string(), w)
        }) {
            if let Some(entry) = witnesses.get_mut(&key) {
                entry["description"] = json!(w.describe(model));
            }
        }
    }
    value
}

fn sweep_text(r: &SweepReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "space: {}", r.space);
    let _ = writeln!(out, "models checked: {}", r.models_checked);
    for t in Taxon::ALL {
        let c = r.count(t);
        if c > 0 {
            let _ = writeln!(out, "  {:<17} {c}", t.to_string());
        }
    }
    let f = r.flag_counts;
    let _ = writeln!(
        out,
        "local pluralism flags: hybrid pluralist {}, hybrid localist {}, strict {}",
        f.hybrid_pluralist, f.hybrid_localist, f.strict
    );
    if r.law_violations.is_empty() {
        let _ = writeln!(out, "law violations: none");
    } else {
        let _ = writeln!(out, "law violations: {}", r.law_violations.len());
        for v in &r.law_violations {
            let _ = writeln!(out, "  mask {:#x}: {}: {}", v.mask, v.law, v.detail);
        }
    }
    let _ = writeln!(out, "elapsed: {:.3} ms", r.elapsed.as_secs_f64() * 1e3);
    out
}

/// Renders a list of positions of `space` (used by the enumerate command).
pub fn emit_positions(space: &Space, positions: &[Position], format: Format) -> String {
    let rows: Vec<(u64, Vec<Cow<'_, str>>)> = positions
        .iter()
        .map(|p| {
            let idx = canonical_index(space, p).expect("functional position");
            let labels = p
                .cells()
                .map(|c| match c {
                    Cell::One(a) => space.answer_label(a),
                    Cell::Many(_) => unreachable!("functional position"),
                })
                .collect();
            (idx, labels)
        })
        .collect();
    match format {
        Format::Text => {
            let mut out = String::new();
            for (idx, labels) in &rows {
                let parts: Vec<String> = labels
                    .iter()
                    .enumerate()
                    .map(|(q, a)| format!("{}{a}", space.question_label(q)))
                    .collect();
                let _ = writeln!(out, "P{idx} = {{{}}}", parts.join(", "));
            }
            out
        }
        Format::Json => pretty(&json!({
            "space": space.to_string(),
            "questions": space.questions(),
            "answers": space.answers(),
            "positions": rows
                .iter()
                .map(|(idx, labels)| json!({"index": idx, "answers": labels}))
                .collect::<Vec<_>>(),
        })),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::verify_laws;
    use crate::taxonomy::classify;

    const GP: &str = r#"{"questions":["Q1","Q2","Q3"],"answers":["A1","A2"],
        "positions":[["A1","A1","A1"],["A2","A2","A2"]]}"#;

    #[test]
    fn parses_global_pluralism_document() {
        let m = parse_model_document(GP.as_bytes()).unwrap();
        assert_eq!(m, parse_compact_spec("3x2:{1,8}").unwrap());
        assert!(!m.is_syncretic());
    }

    #[test]
    fn parses_singleton_document() {
        let m = parse_model_document(br#"{"questions":["q"],"answers":["a"],"positions":[["a"]]}"#)
            .unwrap();
        assert_eq!((m.space().n(), m.space().m(), m.len()), (1, 1, 1));
    }

    #[test]
    fn duplicate_rows_are_counted() {
        let doc = br#"{"questions":["Q1","Q2","Q3"],"answers":["A1","A2"],
            "positions":[["A1","A1","A2"],["A1","A1","A2"]]}"#;
        let m = parse_model_document(doc).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.duplicates_dropped(), 1);
    }

    #[test]
    fn document_errors_carry_context() {
        let err = parse_model_document(b"{\"questions\": [\"Q1\"],\n \"answers\": [").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, .. }), "{err}");

        let err = parse_model_document(
            br#"{"questions":["Q1","Q2"],"answers":["A1"],"positions":[["A1","B"]]}"#,
        )
        .unwrap_err();
        assert_eq!(
            err.to_string(),
            "positions[0][1]: unknown answer label \"B\""
        );

        let err = parse_model_document(
            br#"{"questions":["Q1","Q2"],"answers":["A1"],"positions":[["A1"]]}"#,
        )
        .unwrap_err();
        assert!(matches!(
            err,
            ParseError::Ragged {
                expected: 2,
                found: 1,
                ..
            }
        ));

        let err = parse_model_document(br#"{"questions":["Q1"],"answers":["A1"],"positions":[]}"#)
            .unwrap_err();
        assert!(matches!(err, ParseError::Model(ModelError::NoPositions)));

        let err = parse_model_document(
            br#"{"questions":["Q1"],"answers":["A1"],"positions":[[[]]],"syncretic":true}"#,
        )
        .unwrap_err();
        assert_eq!(err.to_string(), "positions[0][0]: empty answer set");

        let err = parse_model_document(
            br#"{"questions":["Q1"],"answers":["A1","A2"],"positions":[[["A1","A2"]]]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, ParseError::JointInFunctional { .. }));

        let err = parse_model_document(
            br#"{"questions":["Q1"],"answers":["A1"],"positions":[["A1"]],"extra":1}"#,
        )
        .unwrap_err();
        assert!(matches!(err, ParseError::Syntax { .. }));
    }

    #[test]
    fn syncretic_documents() {
        let doc = br#"{"questions":["Q1","Q2"],"answers":["A1","A2"],
            "positions":[{"name":"both","answers":[["A2","A1"],"A1"]}],"syncretic":true}"#;
        let m = parse_model_document(doc).unwrap();
        assert!(m.is_syncretic());
        assert_eq!(m.position_label(0), "both");
        assert!(classify(&m).syncretist);
        let text = serialize_model(&m);
        assert_eq!(parse_model_document(text.as_bytes()).unwrap(), m);
    }

    #[test]
    fn canonical_round_trip() {
        let m = parse_model_document(
            br#"{"questions":["x","y"],"answers":["no","yes"],
                "positions":[["yes","no"],{"name":"first","answers":["no","no"]}]}"#,
        )
        .unwrap();
        let once = serialize_model(&m);
        let again = parse_model_document(once.as_bytes()).unwrap();
        assert_eq!(again, m);
        assert_eq!(serialize_model(&again), once);
        assert_eq!(again.name(0), Some("first"));
    }

    #[test]
    fn compact_specs() {
        assert_eq!(parse_compact_spec("1x1:{1}").unwrap().len(), 1);
        let m = parse_compact_spec(" 3x2 : { 2, 7 } ").unwrap();
        assert!(classify(&m).strict);
        assert_eq!(compact_spec(&m).unwrap(), "3x2:{2,7}");
        assert!(matches!(
            parse_compact_spec("3x2:{1,9}"),
            Err(ParseError::Index(IndexError::OutOfRange {
                index: 9,
                size: 8
            }))
        ));
        assert!(matches!(
            parse_compact_spec("3x2:{1,1}"),
            Err(ParseError::DuplicateIndex(1))
        ));
        assert!(matches!(
            parse_compact_spec("3x2"),
            Err(ParseError::Compact { .. })
        ));
        assert!(matches!(
            parse_compact_spec("3x2:1,2"),
            Err(ParseError::Compact { .. })
        ));
        assert!(matches!(
            parse_compact_spec("3x2:{a}"),
            Err(ParseError::Compact { .. })
        ));
        assert!(matches!(
            parse_compact_spec("3x2:{}"),
            Err(ParseError::Model(ModelError::NoPositions))
        ));
        assert!(compact_spec(&m.to_syncretic()).is_none());
    }

    #[test]
    fn taxon_json() {
        let m = parse_compact_spec("3x2:{1}").unwrap();
        let r = classify(&m);
        let v: Value = serde_json::from_str(&emit_report(
            ReportRef::Taxon {
                model: &m,
                report: &r,
            },
            Format::Json,
        ))
        .unwrap();
        assert_eq!(v["primary"], "global_monism");
        for flag in [
            "hybrid_pluralist",
            "hybrid_localist",
            "strict",
            "syncretist",
        ] {
            assert_eq!(v[flag], false);
        }

        let m = parse_compact_spec("3x2:{1,2}").unwrap();
        let r = classify(&m);
        let v: Value = serde_json::from_str(&emit_report(
            ReportRef::Taxon {
                model: &m,
                report: &r,
            },
            Format::Json,
        ))
        .unwrap();
        assert_eq!(v["primary"], "local_pluralism");
        assert_eq!(v["hybrid_pluralist"], true);
        assert_eq!(v["hybrid_localist"], true);
        assert_eq!(v["profile"]["weak_g"], true);
        assert_eq!(v["profile"]["witnesses"]["m"]["kind"], "varying_question");
        assert_eq!(v["profile"]["witnesses"]["m"]["question"], 2);
        assert_eq!(
            v["profile"]["witnesses"]["m"]["description"],
            "Q3 is answered A1 in P1 but A2 in P2"
        );
    }

    #[test]
    fn taxon_text_is_explanation() {
        let m = parse_compact_spec("3x2:{2}").unwrap();
        let r = classify(&m);
        assert_eq!(
            emit_report(
                ReportRef::Taxon {
                    model: &m,
                    report: &r
                },
                Format::Text
            ),
            crate::taxonomy::explain(&m)
        );
    }

    #[test]
    fn sweep_text_for_1x1() {
        let r = verify_laws(&Space::with_default_labels(1, 1).unwrap()).unwrap();
        let text = emit_report(ReportRef::Sweep(&r), Format::Text);
        assert!(text.contains("models checked: 1\n"));
        let taxon_lines = text.lines().filter(|l| l.starts_with("  ")).count();
        assert_eq!(taxon_lines, 1, "{text}");
        assert!(text.contains("global monism"));
        let v: Value =
            serde_json::from_str(&emit_report(ReportRef::Sweep(&r), Format::Json)).unwrap();
        assert_eq!(v["space"], "1x1");
        assert_eq!(v["taxon_counts"]["global_monism"], 1);
        assert_eq!(v["law_violations"], json!([]));
    }

    #[test]
    fn enumeration_output() {
        let space = Space::with_default_labels(3, 2).unwrap();
        let all = crate::sweep::enumerate_positions(&space).unwrap();
        let text = emit_positions(&space, &all, Format::Text);
        assert_eq!(text.lines().nth(5), Some("P6 = {Q1A2, Q2A1, Q3A2}"));
        let v: Value = serde_json::from_str(&emit_positions(&space, &all, Format::Json)).unwrap();
        assert_eq!(v["positions"][7]["answers"], json!(["A2", "A2", "A2"]));
    }
}
