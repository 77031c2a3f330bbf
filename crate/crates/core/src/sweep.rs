//! Exhaustive enumeration of position universes and their subsets, and a
//! brute-force law checker over every non-empty subset.
//!
//! Subsets are bit masks over canonical order: bit `i` selects the position
//! with canonical index `i + 1`. Masks are visited in ascending order by the
//! sequential path; the parallel path splits the mask range across rayon
//! workers and sums the per-worker tallies, so reports are identical either
//! way (violations are sorted by mask).

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::conditions::{condition_profile, Entailment};
use crate::model::{Answers, Model, Position, Space, INLINE_ANSWERS as INLINE};
use crate::reduction::merge_questions;
use crate::taxonomy::{Taxon, TaxonReport};

/// Largest universe [`enumerate_positions`] and [`maximal_model`] accept.
pub const UNIVERSE_LIMIT: u64 = 1_000_000;
/// Largest universe the subset sweep accepts (2^20 - 1 subsets).
pub const SUBSET_LIMIT: u64 = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SweepError {
    #[error("{space} has {size} positions, more than the limit of {limit}")]
    TooLarge {
        space: String,
        size: u64,
        limit: u64,
    },
    #[error("the position universe of {0} does not fit in 64 bits")]
    Overflow(String),
}

fn checked_universe(space: &Space, limit: u64) -> Result<u64, SweepError> {
    let size = space
        .universe_size()
        .ok_or_else(|| SweepError::Overflow(space.to_string()))?;
    if size > limit {
        return Err(SweepError::TooLarge {
            space: space.to_string(),
            size,
            limit,
        });
    }
    Ok(size)
}

/// Every position of `space` in canonical index order.
pub fn enumerate_positions(space: &Space) -> Result<Vec<Position>, SweepError> {
    let size = checked_universe(space, UNIVERSE_LIMIT)? as usize;
    let (n, m) = (space.n(), space.m());
    let mut out = Vec::with_capacity(size);
    if n <= INLINE {
        let mut digits = [0usize; INLINE];
        out.extend((0..size).map(|_| {
            let p = Position::Single(Answers::from_buf_and_len(digits, n));
            step(&mut digits[..n], m);
            p
        }));
    } else {
        let mut digits = vec![0usize; n];
        for _ in 0..size {
            out.push(Position::Single(Answers::from_slice(&digits)));
            step(&mut digits, m);
        }
    }
    Ok(out)
}

/// Odometer step, last question fastest.
#[inline]
fn step(digits: &mut [usize], m: usize) {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < m {
            return;
        }
        *d = 0;
    }
}

/// The model admitting every possible position.
pub fn maximal_model(space: &Space) -> Result<Model, SweepError> {
    let positions = enumerate_positions(space)?;
    Ok(Model::from_sorted_unchecked(space.clone(), positions))
}

/// The model selected by `mask` from a canonical-order universe.
pub fn subset_model(space: &Space, universe: &[Position], mask: u64) -> Model {
    let positions = universe
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, p)| p.clone())
        .collect();
    Model::from_sorted_unchecked(space.clone(), positions)
}

struct Subsets {
    space: Space,
    universe: Vec<Position>,
    last: u64,
}

impl Subsets {
    fn new(space: &Space) -> Result<Self, SweepError> {
        let size = checked_universe(space, SUBSET_LIMIT)?;
        Ok(Subsets {
            space: space.clone(),
            universe: enumerate_positions(space)?,
            last: (1u64 << size) - 1,
        })
    }

    fn model(&self, mask: u64) -> Model {
        subset_model(&self.space, &self.universe, mask)
    }
}

/// Calls `visitor` once per non-empty subset of the position universe and
/// returns the number of subsets visited. With the `parallel` feature the
/// visitor runs concurrently on distinct models.
pub fn for_each_nonempty_subset<F>(space: &Space, visitor: F) -> Result<u64, SweepError>
where
    F: Fn(&Model) + Sync + Send,
{
    let subsets = Subsets::new(space)?;
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (1..=subsets.last)
            .into_par_iter()
            .for_each(|mask| visitor(&subsets.model(mask)));
    }
    #[cfg(not(feature = "parallel"))]
    for mask in 1..=subsets.last {
        visitor(&subsets.model(mask));
    }
    Ok(subsets.last)
}

/// Literal quantifier evaluation over raw answer rows.
///
/// Each condition and each negation is evaluated as written, nesting one
/// loop per quantified variable, with no shortcuts shared with
/// [`crate::conditions`].
pub mod naive {
    /// Truth values of the four conditions and of their negated forms.
    #[derive(Debug, Clone, Copy, PartialEq, Eq)]
    pub struct Quantified {
        pub g: bool,
        pub m: bool,
        pub weak_g: bool,
        pub weak_m: bool,
        pub not_g: bool,
        pub not_m: bool,
        pub not_weak_g: bool,
        pub not_weak_m: bool,
    }

    impl Quantified {
        /// Every negated form is the complement of its positive form.
        pub fn consistent(&self) -> bool {
            self.g != self.not_g
                && self.m != self.not_m
                && self.weak_g != self.not_weak_g
                && self.weak_m != self.not_weak_m
        }
    }

    /// `rows[x][y]` is the answer position `x` gives question `y`.
    pub fn evaluate(rows: &[Vec<usize>], n: usize) -> Quantified {
        let k = rows.len();
        let p = |x: usize, y: usize| rows[x][y];
        let all = |r: usize, f: &dyn Fn(usize) -> bool| (0..r).all(f);
        let any = |r: usize, f: &dyn Fn(usize) -> bool| (0..r).any(f);
        Quantified {
            g: all(k, &|x| all(n, &|y| all(n, &|z| p(x, y) == p(x, z)))),
            m: all(n, &|y| all(k, &|w| all(k, &|x| p(w, y) == p(x, y)))),
            weak_g: any(k, &|x| all(n, &|y| all(n, &|z| p(x, y) == p(x, z)))),
            weak_m: any(n, &|y| all(k, &|w| all(k, &|x| p(w, y) == p(x, y)))),
            not_g: any(k, &|x| any(n, &|y| any(n, &|z| p(x, y) != p(x, z)))),
            not_m: any(n, &|y| any(k, &|w| any(k, &|x| p(w, y) != p(x, y)))),
            not_weak_g: all(k, &|x| any(n, &|y| any(n, &|z| p(x, y) != p(x, z)))),
            not_weak_m: all(n, &|y| any(k, &|w| any(k, &|x| p(w, y) != p(x, y)))),
        }
    }
}

/// A property every swept model must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    /// Exactly one primary taxon applies, and it is the reported one.
    UniquePrimary,
    Entailment(Entailment),
    /// Local pluralism is strict or hybrid, never both.
    SubTotality,
    /// The profile agrees with literal quantifier evaluation, and witnesses replay.
    ProfileAgreement,
    /// Merging co-answered questions leaves the profile and taxon unchanged.
    MergeInvariance,
    /// Sweep-level count identities (singleton monism, constant-position counts).
    CountIdentity,
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Law::UniquePrimary => f.write_str("unique primary taxon"),
            Law::Entailment(e) => write!(f, "entailment {e}"),
            Law::SubTotality => f.write_str("local pluralism sub-totality"),
            Law::ProfileAgreement => f.write_str("profile agreement"),
            Law::MergeInvariance => f.write_str("merge invariance"),
            Law::CountIdentity => f.write_str("count identity"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawViolation {
    /// Subset mask of the offending model; 0 for sweep-level laws.
    pub mask: u64,
    pub law: Law,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct FlagCounts {
    pub hybrid_pluralist: u64,
    pub hybrid_localist: u64,
    pub strict: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    #[serde(serialize_with = "shape")]
    pub space: Space,
    pub models_checked: u64,
    pub taxon_counts: BTreeMap<Taxon, u64>,
    pub flag_counts: FlagCounts,
    pub law_violations: Vec<LawViolation>,
    #[serde(rename = "elapsed_ms", serialize_with = "millis")]
    pub elapsed: Duration,
}

fn shape<S: Serializer>(space: &Space, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(space)
}

fn millis<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1e3)
}

impl SweepReport {
    pub fn count(&self, taxon: Taxon) -> u64 {
        self.taxon_counts.get(&taxon).copied().unwrap_or(0)
    }

    pub fn is_clean(&self) -> bool {
        self.law_violations.is_empty()
    }
}

#[derive(Default)]
struct Tally {
    models: u64,
    taxa: [u64; 4],
    flags: FlagCounts,
    singletons_with_m: u64,
    violations: Vec<LawViolation>,
}

impl Tally {
    #[cfg(feature = "parallel")]
    fn merge(mut self, other: Tally) -> Tally {
        self.models += other.models;
        for (a, b) in self.taxa.iter_mut().zip(other.taxa) {
            *a += b;
        }
        self.flags.hybrid_pluralist += other.flags.hybrid_pluralist;
        self.flags.hybrid_localist += other.flags.hybrid_localist;
        self.flags.strict += other.flags.strict;
        self.singletons_with_m += other.singletons_with_m;
        self.violations.extend(other.violations);
        self
    }

    fn visit(mut self, subsets: &Subsets, rows: &[Vec<usize>], mask: u64) -> Tally {
        let model = subsets.model(mask);
        let report = TaxonReport::from_profile(condition_profile(&model));
        let profile = &report.profile;
        let mut fail =
            |law: Law, detail: String| self.violations.push(LawViolation { mask, law, detail });

        // (a) exactly one primary taxon
        let (g, m) = (profile.g, profile.m);
        let applicable: Vec<Taxon> = [
            (Taxon::GlobalMonism, g && m),
            (Taxon::GlobalPluralism, g && !m),
            (Taxon::LocalMonism, !g && m),
            (Taxon::LocalPluralism, !g && !m),
        ]
        .into_iter()
        .filter_map(|(t, on)| on.then_some(t))
        .collect();
        if applicable != [report.primary] {
            fail(
                Law::UniquePrimary,
                format!("applicable {applicable:?}, reported {:?}", report.primary),
            );
        }

        // (b) entailments
        for e in profile.entailment_failures() {
            fail(Law::Entailment(e), format!("profile {profile:?}"));
        }

        // (c) sub-totality
        let hybrid = report.hybrid_pluralist || report.hybrid_localist;
        let ok = if report.primary == Taxon::LocalPluralism {
            report.strict != hybrid
        } else {
            !report.strict && !hybrid
        };
        if !ok {
            fail(Law::SubTotality, format!("report {report:?}"));
        }

        // (d) literal quantifiers and witness replay
        let selected: Vec<Vec<usize>> = rows
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, r)| r.clone())
            .collect();
        let q = naive::evaluate(&selected, subsets.space.n());
        if !q.consistent()
            || (q.g, q.m, q.weak_g, q.weak_m)
                != (profile.g, profile.m, profile.weak_g, profile.weak_m)
            || profile.s
        {
            fail(
                Law::ProfileAgreement,
                format!("naive {q:?}, engine {profile:?}"),
            );
        }
        for (c, w) in &profile.witnesses {
            if w.condition() != *c || !w.replay(&model) {
                fail(
                    Law::ProfileAgreement,
                    format!("witness {w:?} for {c} does not replay"),
                );
            }
        }

        // (e) merge invariance
        match merge_questions(&model) {
            Ok(merged) => {
                let merged_report = TaxonReport::from_profile(condition_profile(&merged));
                if !merged_report.same_classification(&report)
                    || !merged_report.profile.same_truth_values(profile)
                    || merged.len() != model.len()
                {
                    fail(
                        Law::MergeInvariance,
                        format!("before {report:?}, after {merged_report:?}"),
                    );
                }
            }
            Err(e) => fail(Law::MergeInvariance, e.to_string()),
        }

        self.models += 1;
        self.taxa[report.primary as usize] += 1;
        self.flags.hybrid_pluralist += report.hybrid_pluralist as u64;
        self.flags.hybrid_localist += report.hybrid_localist as u64;
        self.flags.strict += report.strict as u64;
        if profile.m != (model.len() == 1) {
            self.violations.push(LawViolation {
                mask,
                law: Law::CountIdentity,
                detail: format!("monism {} with {} positions", profile.m, model.len()),
            });
        }
        self.singletons_with_m += (profile.m && model.len() == 1) as u64;
        self
    }

    fn into_report(mut self, space: &Space, elapsed: Duration) -> SweepReport {
        let size = space.universe_size().unwrap_or(0);
        let m = space.m() as u64;
        let constant_positions = m;
        let identities = [
            ("models = 2^(m^n) - 1", self.models, (1u64 << size) - 1),
            (
                "global monism + local monism = m^n",
                self.taxa[Taxon::GlobalMonism as usize] + self.taxa[Taxon::LocalMonism as usize],
                size,
            ),
            (
                "global monism = m",
                self.taxa[Taxon::GlobalMonism as usize],
                constant_positions,
            ),
            (
                "global pluralism = 2^m - m - 1",
                self.taxa[Taxon::GlobalPluralism as usize],
                (1u64 << m) - m - 1,
            ),
        ];
        for (what, got, want) in identities {
            if got != want {
                self.violations.push(LawViolation {
                    mask: 0,
                    law: Law::CountIdentity,
                    detail: format!("{what}: got {got}, expected {want}"),
                });
            }
        }
        self.violations.sort_by_key(|v| (v.mask, v.law));
        SweepReport {
            space: space.clone(),
            models_checked: self.models,
            taxon_counts: Taxon::ALL
                .into_iter()
                .map(|t| (t, self.taxa[t as usize]))
                .collect(),
            flag_counts: self.flags,
            law_violations: self.violations,
            elapsed,
        }
    }
}

fn answer_rows(universe: &[Position]) -> Vec<Vec<usize>> {
    universe
        .iter()
        .map(|p| match p {
            Position::Single(a) => a.to_vec(),
            Position::Joint(_) => unreachable!("universes are functional"),
        })
        .collect()
}

/// Checks every law on every non-empty subset, one mask at a time.
pub fn verify_laws_sequential(space: &Space) -> Result<SweepReport, SweepError> {
    let start = Instant::now();
    let subsets = Subsets::new(space)?;
    let rows = answer_rows(&subsets.universe);
    let tally = (1..=subsets.last).fold(Tally::default(), |t, mask| t.visit(&subsets, &rows, mask));
    Ok(tally.into_report(space, start.elapsed()))
}

/// Checks every law on every non-empty subset, splitting the masks across rayon workers.
#[cfg(feature = "parallel")]
pub fn verify_laws_parallel(space: &Space) -> Result<SweepReport, SweepError> {
    use rayon::prelude::*;
    let start = Instant::now();
    let subsets = Subsets::new(space)?;
    let rows = answer_rows(&subsets.universe);
    let tally = (1..=subsets.last)
        .into_par_iter()
        .fold(Tally::default, |t, mask| t.visit(&subsets, &rows, mask))
        .reduce(Tally::default, Tally::merge);
    Ok(tally.into_report(space, start.elapsed()))
}

/// Runs the law sweep, in parallel when the `parallel` feature is enabled.
pub fn verify_laws(space: &Space) -> Result<SweepReport, SweepError> {
    #[cfg(feature = "parallel")]
    return verify_laws_parallel(space);
    #[cfg(not(feature = "parallel"))]
    return verify_laws_sequential(space);
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::atomic::{AtomicU64, Ordering};

    fn space(n: usize, m: usize) -> Space {
        Space::with_default_labels(n, m).unwrap()
    }

    #[test]
    fn enumerates_in_canonical_order() {
        let all = enumerate_positions(&space(2, 2)).unwrap();
        assert_eq!(
            all,
            vec![
                Position::single([0, 0]),
                Position::single([0, 1]),
                Position::single([1, 0]),
                Position::single([1, 1]),
            ]
        );
        assert_eq!(enumerate_positions(&space(1, 1)).unwrap().len(), 1);
        assert!(matches!(
            enumerate_positions(&space(21, 2)),
            Err(SweepError::TooLarge { .. })
        ));
    }

    #[test]
    fn maximal_models() {
        assert_eq!(maximal_model(&space(3, 2)).unwrap().len(), 8);
        assert_eq!(maximal_model(&space(2, 3)).unwrap().len(), 9);
        assert_eq!(maximal_model(&space(1, 1)).unwrap().len(), 1);
    }

    #[test]
    fn subset_counts() {
        for ((n, m), want) in [((3, 2), 255), ((2, 2), 15), ((2, 3), 511)] {
            let seen = AtomicU64::new(0);
            let visited = for_each_nonempty_subset(&space(n, m), |model| {
                assert!(!model.is_empty());
                seen.fetch_add(1, Ordering::Relaxed);
            })
            .unwrap();
            assert_eq!(visited, want);
            assert_eq!(seen.into_inner(), want);
        }
        assert!(matches!(
            for_each_nonempty_subset(&space(3, 3), |_| {}),
            Err(SweepError::TooLarge { size: 27, .. })
        ));
    }

    #[test]
    fn naive_negations() {
        let q = naive::evaluate(&[vec![0, 0, 1], vec![1, 1, 0]], 3);
        assert!(q.consistent());
        assert!(!q.g && !q.m && !q.weak_g && !q.weak_m);
    }

    #[test]
    fn verify_3x2() {
        let r = verify_laws_sequential(&space(3, 2)).unwrap();
        assert!(r.is_clean(), "{:?}", r.law_violations);
        assert_eq!(r.models_checked, 255);
        assert_eq!(r.count(Taxon::GlobalMonism), 2);
        assert_eq!(r.count(Taxon::GlobalPluralism), 1);
        assert_eq!(r.count(Taxon::LocalMonism), 6);
        assert_eq!(r.count(Taxon::LocalPluralism), 246);
    }

    #[test]
    fn verify_1x1() {
        let r = verify_laws(&space(1, 1)).unwrap();
        assert!(r.is_clean());
        assert_eq!(r.models_checked, 1);
        assert_eq!(r.count(Taxon::GlobalMonism), 1);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_matches_sequential() {
        for (n, m) in [(2, 3), (3, 2), (4, 2)] {
            let a = verify_laws_sequential(&space(n, m)).unwrap();
            let b = verify_laws_parallel(&space(n, m)).unwrap();
            assert_eq!(a.models_checked, b.models_checked);
            assert_eq!(a.taxon_counts, b.taxon_counts);
            assert_eq!(a.flag_counts, b.flag_counts);
            assert_eq!(a.law_violations, b.law_violations);
        }
    }
}
