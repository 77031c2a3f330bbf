//! Classification of models into the four primary taxa, with the hybrid and
//! strict refinements of local pluralism and the orthogonal syncretism flag.
//!
//! Everything here is derived from a [`ConditionProfile`]; positions are only
//! consulted again when rendering explanations.
//!
//! The unrestricted 3x2 set is a common trap: it contains the uniform
//! positions P1 and P8, so G' holds and the set is hybrid localist, not
//! strict, even though every question varies.

use std::fmt;
use std::fmt::Write as _;

use serde::Serialize;

use crate::conditions::{
    condition_profile, refute_weak_globalism, refute_weak_monism, Condition, ConditionProfile,
};
use crate::model::Model;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Taxon {
    GlobalMonism,
    GlobalPluralism,
    LocalMonism,
    LocalPluralism,
}

impl Taxon {
    pub const ALL: [Taxon; 4] = [
        Taxon::GlobalMonism,
        Taxon::GlobalPluralism,
        Taxon::LocalMonism,
        Taxon::LocalPluralism,
    ];

    pub fn from_conditions(g: bool, m: bool) -> Taxon {
        match (g, m) {
            (true, true) => Taxon::GlobalMonism,
            (true, false) => Taxon::GlobalPluralism,
            (false, true) => Taxon::LocalMonism,
            (false, false) => Taxon::LocalPluralism,
        }
    }

    /// Snake-case key used in JSON output.
    pub fn key(self) -> &'static str {
        match self {
            Taxon::GlobalMonism => "global_monism",
            Taxon::GlobalPluralism => "global_pluralism",
            Taxon::LocalMonism => "local_monism",
            Taxon::LocalPluralism => "local_pluralism",
        }
    }
}

impl fmt::Display for Taxon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Taxon::GlobalMonism => "global monism",
            Taxon::GlobalPluralism => "global pluralism",
            Taxon::LocalMonism => "local monism",
            Taxon::LocalPluralism => "local pluralism",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TaxonReport {
    pub primary: Taxon,
    pub hybrid_pluralist: bool,
    pub hybrid_localist: bool,
    pub strict: bool,
    pub syncretist: bool,
    pub profile: ConditionProfile,
}

impl TaxonReport {
    pub fn from_profile(profile: ConditionProfile) -> Self {
        let primary = Taxon::from_conditions(profile.g, profile.m);
        let local_pluralism = primary == Taxon::LocalPluralism;
        TaxonReport {
            primary,
            hybrid_pluralist: local_pluralism && profile.weak_m,
            hybrid_localist: local_pluralism && profile.weak_g,
            strict: local_pluralism && !profile.weak_m && !profile.weak_g,
            syncretist: profile.s,
            profile,
        }
    }

    /// Whether the two reports agree on the taxon and every flag.
    pub fn same_classification(&self, other: &TaxonReport) -> bool {
        self.flags() == other.flags()
    }

    fn flags(&self) -> (Taxon, bool, bool, bool, bool) {
        (
            self.primary,
            self.hybrid_pluralist,
            self.hybrid_localist,
            self.strict,
            self.syncretist,
        )
    }

    /// Full name, e.g. "strict local pluralism" or "local pluralism (hybrid pluralism, hybrid localism)".
    pub fn title(&self) -> String {
        let base = if self.strict {
            "strict local pluralism".to_string()
        } else {
            let hybrids: Vec<&str> = [
                (self.hybrid_pluralist, "hybrid pluralism"),
                (self.hybrid_localist, "hybrid localism"),
            ]
            .into_iter()
            .filter_map(|(on, name)| on.then_some(name))
            .collect();
            if hybrids.is_empty() {
                self.primary.to_string()
            } else {
                format!("{} ({})", self.primary, hybrids.join(", "))
            }
        };
        if self.syncretist {
            format!("syncretist {base}")
        } else {
            base
        }
    }
}

pub fn classify(model: &Model) -> TaxonReport {
    TaxonReport::from_profile(condition_profile(model))
}

/// Human-readable classification of `model`.
pub fn explain(model: &Model) -> String {
    render_explanation(model, &classify(model))
}

/// Renders `report` (computed for `model`) with the model's labels.
pub fn render_explanation(model: &Model, report: &TaxonReport) -> String {
    let mut out = String::new();
    let labels: Vec<String> = (0..model.len()).map(|i| model.position_label(i)).collect();
    let _ = writeln!(
        out,
        "space: {} ({} questions, {} answers){}",
        model.space(),
        model.space().n(),
        model.space().m(),
        if model.is_syncretic() {
            ", syncretic"
        } else {
            ""
        }
    );
    let _ = writeln!(out, "positions ({}): {}", model.len(), labels.join(", "));
    for (i, label) in labels.iter().enumerate() {
        let _ = writeln!(out, "  {label} = {}", model.render_position(i));
    }
    let _ = writeln!(out, "taxon: {}", report.title());
    let _ = writeln!(out, "conditions:");
    let profile = &report.profile;
    for c in Condition::ALL {
        let tag = format!("({})", c.symbol());
        let _ = write!(out, "  {tag:<5} {:<15} {}", c.name(), profile.holds(c));
        match profile.witness(c) {
            Some(w) => {
                let pad = if profile.holds(c) { " " } else { "" };
                let _ = writeln!(out, "{pad} because {}", w.describe(model));
            }
            None => {
                let _ = writeln!(out);
            }
        }
    }
    if report.strict {
        let _ = writeln!(out, "every position mixes answers (~G'):");
        for w in refute_weak_globalism(model).unwrap_or_default() {
            let _ = writeln!(out, "  {}", w.describe(model));
        }
        let _ = writeln!(out, "no question is constant (~M'):");
        for w in refute_weak_monism(model).unwrap_or_default() {
            let _ = writeln!(out, "  {}", w.describe(model));
        }
    }
    out
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
    fn primary_taxa() {
        assert_eq!(classify(&model(&[1])).primary, Taxon::GlobalMonism);
        assert_eq!(classify(&model(&[1, 8])).primary, Taxon::GlobalPluralism);
        assert_eq!(classify(&model(&[3])).primary, Taxon::LocalMonism);
    }

    #[test]
    fn refinements() {
        let r = classify(&model(&[1, 2]));
        assert_eq!(r.primary, Taxon::LocalPluralism);
        assert!(r.hybrid_pluralist && r.hybrid_localist && !r.strict);
        assert_eq!(
            r.title(),
            "local pluralism (hybrid pluralism, hybrid localism)"
        );

        let r = classify(&model(&[2, 7]));
        assert!(r.strict && !r.hybrid_pluralist && !r.hybrid_localist);
        assert_eq!(r.title(), "strict local pluralism");
    }

    #[test]
    fn unrestricted_set_is_hybrid_localist_not_strict() {
        // P1 is uniform, so G' holds.
        let r = classify(&model(&[1, 2, 3, 4, 5, 6, 7, 8]));
        assert_eq!(r.primary, Taxon::LocalPluralism);
        assert!(r.hybrid_localist);
        assert!(!r.hybrid_pluralist);
        assert!(!r.strict);
    }

    #[test]
    fn flags_off_outside_local_pluralism() {
        for idx in [&[1][..], &[1, 8], &[4]] {
            let r = classify(&model(idx));
            assert!(!r.hybrid_localist && !r.hybrid_pluralist && !r.strict);
        }
    }

    #[test]
    fn syncretist_flag() {
        let space = Space::with_default_labels(2, 2).unwrap();
        let m = Model::new(space, vec![Position::joint([vec![0, 1], vec![0, 1]])], true).unwrap();
        let r = classify(&m);
        assert!(r.syncretist);
        assert_eq!(r.primary, Taxon::GlobalMonism);
        assert_eq!(r.title(), "syncretist global monism");
    }

    #[test]
    fn explain_local_monism() {
        let text = explain(&model(&[2]));
        assert!(text.contains("taxon: local monism"), "{text}");
        assert!(
            text.contains("P2 answers Q1 with A1 but Q3 with A2"),
            "{text}"
        );
    }

    #[test]
    fn explain_global_monism_has_no_refutations() {
        let text = explain(&model(&[1]));
        assert!(text.contains("taxon: global monism"));
        assert!(!text.contains(" but "));
    }

    #[test]
    fn explain_strict() {
        let text = explain(&model(&[2, 7]));
        assert!(text.contains("taxon: strict local pluralism"), "{text}");
        assert!(text.contains("every position mixes answers"));
        assert!(
            text.contains("P7 answers Q1 with A2 but Q3 with A1"),
            "{text}"
        );
        assert!(
            text.contains("Q2 is answered A1 in P2 but A2 in P7"),
            "{text}"
        );
        assert_eq!(text, explain(&model(&[7, 2])));
    }
}
