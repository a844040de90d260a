//! Citation deltas applied to a reference set, and a full account of how the
//! rank structure and every P100 value moved as a result.
//!
//! Text format for a [`PerturbationSpec`], one delta per line:
//!
//! ```text
//! # comment
//! id:lbr-c134-1 -2
//! at:40#1 -1
//! ```
//!
//! `at:<count>#<ordinal>` addresses the ordinal-th paper (1-based, input
//! order) currently holding `<count>` citations.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::exact::{relative_percent, Exact};
use crate::exec::Strategy;
use crate::indicators::{self, build_unique_table, DegeneratePolicy, IndicatorError};
use crate::model::{IndicatorValue, ReferenceSet, UniqueCountTable};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Selector {
    Id(String),
    At { citations: u32, ordinal: u32 },
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selector::Id(id) => write!(f, "id:{id}"),
            Selector::At { citations, ordinal } => write!(f, "at:{citations}#{ordinal}"),
        }
    }
}

impl FromStr for Selector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(id) = s.strip_prefix("id:") {
            if id.is_empty() {
                return Err("empty id selector".into());
            }
            return Ok(Selector::Id(id.to_string()));
        }
        if let Some(rest) = s.strip_prefix("at:") {
            let (count, ordinal) = rest
                .split_once('#')
                .ok_or_else(|| format!("selector {s:?} lacks '#<ordinal>'"))?;
            let citations = count
                .parse()
                .map_err(|_| format!("invalid citation count {count:?}"))?;
            let ordinal: u32 = ordinal
                .parse()
                .map_err(|_| format!("invalid ordinal {ordinal:?}"))?;
            if ordinal == 0 {
                return Err("ordinals start at 1".into());
            }
            return Ok(Selector::At { citations, ordinal });
        }
        Err(format!("selector {s:?} must start with 'id:' or 'at:'"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Delta {
    pub selector: Selector,
    pub delta: i64,
    /// Source line when parsed from text.
    pub line: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PerturbationSpec {
    pub deltas: Vec<Delta>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct SpecParseError {
    pub line: usize,
    pub message: String,
}

impl PerturbationSpec {
    pub fn new(deltas: impl IntoIterator<Item = (Selector, i64)>) -> Self {
        Self {
            deltas: deltas
                .into_iter()
                .map(|(selector, delta)| Delta {
                    selector,
                    delta,
                    line: None,
                })
                .collect(),
        }
    }

    pub fn net_delta(&self) -> i64 {
        self.deltas.iter().map(|d| d.delta).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }

    pub fn parse(text: &str) -> Result<Self, SpecParseError> {
        let mut deltas = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let err = |message: String| SpecParseError { line, message };
            let mut fields = trimmed.split_whitespace();
            let (Some(selector), Some(delta), None) = (fields.next(), fields.next(), fields.next())
            else {
                return Err(err(format!(
                    "expected '<selector> <signed integer>', got {trimmed:?}"
                )));
            };
            let selector = selector.parse().map_err(err)?;
            let delta: i64 = delta
                .strip_prefix('+')
                .unwrap_or(delta)
                .parse()
                .map_err(|_| err(format!("invalid delta {delta:?}")))?;
            deltas.push(Delta {
                selector,
                delta,
                line: Some(line),
            });
        }
        Ok(Self { deltas })
    }

    pub fn to_text(&self) -> String {
        self.deltas
            .iter()
            .map(|d| format!("{} {:+}\n", d.selector, d.delta))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PerturbError {
    #[error("{}no paper matches selector {selector}", location(*line))]
    SelectorUnresolved {
        selector: Selector,
        line: Option<usize>,
    },
    #[error("{}paper {id:?} with {citations} citations cannot take delta {delta}", location(*line))]
    NegativeResult {
        id: String,
        citations: u32,
        delta: i64,
        line: Option<usize>,
    },
    #[error("{}paper {id:?} would exceed the supported citation range", location(*line))]
    Overflow { id: String, line: Option<usize> },
    #[error("{}paper {id:?} is addressed by more than one delta", location(*line))]
    ConflictingTargets { id: String, line: Option<usize> },
    #[error("reference sets do not contain the same paper ids")]
    MismatchedIds,
    #[error(transparent)]
    Indicator(#[from] IndicatorError),
}

impl PerturbError {
    pub fn line(&self) -> Option<usize> {
        match self {
            PerturbError::SelectorUnresolved { line, .. }
            | PerturbError::NegativeResult { line, .. }
            | PerturbError::Overflow { line, .. }
            | PerturbError::ConflictingTargets { line, .. } => *line,
            _ => None,
        }
    }
}

fn location(line: Option<usize>) -> String {
    line.map(|l| format!("line {l}: ")).unwrap_or_default()
}

fn resolve(set: &ReferenceSet, selector: &Selector) -> Option<usize> {
    match selector {
        Selector::Id(id) => set.papers().iter().position(|p| p.id() == id),
        Selector::At { citations, ordinal } => set
            .papers()
            .iter()
            .enumerate()
            .filter(|(_, p)| p.citations() == *citations)
            .nth(*ordinal as usize - 1)
            .map(|(i, _)| i),
    }
}

/// Applies every delta against the original set at once. Nothing is applied
/// unless every selector resolves and every result stays non-negative.
pub fn apply(set: &ReferenceSet, spec: &PerturbationSpec) -> Result<ReferenceSet, PerturbError> {
    let mut targets: HashMap<usize, u32> = HashMap::with_capacity(spec.deltas.len());
    for d in &spec.deltas {
        let index = resolve(set, &d.selector).ok_or_else(|| PerturbError::SelectorUnresolved {
            selector: d.selector.clone(),
            line: d.line,
        })?;
        let paper = &set.papers()[index];
        if targets.contains_key(&index) {
            return Err(PerturbError::ConflictingTargets {
                id: paper.id().to_string(),
                line: d.line,
            });
        }
        let updated = i64::from(paper.citations()) + d.delta;
        if updated < 0 {
            return Err(PerturbError::NegativeResult {
                id: paper.id().to_string(),
                citations: paper.citations(),
                delta: d.delta,
                line: d.line,
            });
        }
        let updated = u32::try_from(updated).map_err(|_| PerturbError::Overflow {
            id: paper.id().to_string(),
            line: d.line,
        })?;
        targets.insert(index, updated);
    }
    let papers = set
        .papers()
        .iter()
        .enumerate()
        .map(|(i, p)| match targets.get(&i) {
            Some(&c) => p.with_citations(c),
            None => p.clone(),
        })
        .collect();
    Ok(set.with_papers(papers))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PaperShift {
    pub citations_before: u32,
    pub citations_after: u32,
    pub before: IndicatorValue,
    pub after: IndicatorValue,
}

impl PaperShift {
    /// Change in percentage points.
    pub fn delta(&self) -> Exact {
        self.after.value() - self.before.value()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuthorShift {
    pub papers: usize,
    /// `None` when the author has no papers on that side.
    pub mean_before: Option<Exact>,
    pub mean_after: Option<Exact>,
}

impl AuthorShift {
    /// Change in percentage points.
    pub fn delta(&self) -> Option<Exact> {
        Some(self.mean_after? - self.mean_before?)
    }

    pub fn relative_percent(&self) -> Option<Exact> {
        relative_percent(self.mean_before.as_ref()?, self.mean_after.as_ref()?)
    }
}

/// P100 of a citation count ranked on both sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountShift {
    pub citations: u32,
    pub before: IndicatorValue,
    pub after: IndicatorValue,
}

impl CountShift {
    pub fn delta(&self) -> Exact {
        self.after.value() - self.before.value()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaperMove {
    pub id: String,
    pub from: u32,
    pub to: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffReport {
    pub counts_appeared: BTreeSet<u32>,
    pub counts_vanished: BTreeSet<u32>,
    pub i_max_before: u32,
    pub i_max_after: u32,
    pub per_paper: BTreeMap<String, PaperShift>,
    pub per_author: BTreeMap<String, AuthorShift>,
    pub per_count: Vec<CountShift>,
    pub moves: Vec<PaperMove>,
    pub net_citation_delta: i64,
}

impl DiffReport {
    pub fn unique_before(&self) -> u32 {
        self.i_max_before + 1
    }

    pub fn unique_after(&self) -> u32 {
        self.i_max_after + 1
    }

    pub fn is_noop(&self) -> bool {
        self.moves.is_empty()
    }
}

pub fn diff(
    before: &ReferenceSet,
    after: &ReferenceSet,
    policy: DegeneratePolicy,
) -> Result<DiffReport, PerturbError> {
    diff_with(before, after, policy, Strategy::default())
}

pub fn diff_with(
    before: &ReferenceSet,
    after: &ReferenceSet,
    policy: DegeneratePolicy,
    strategy: Strategy,
) -> Result<DiffReport, PerturbError> {
    if before.len() != after.len() {
        return Err(PerturbError::MismatchedIds);
    }
    let after_by_id: HashMap<&str, u32> = after
        .papers()
        .iter()
        .map(|p| (p.id(), p.citations()))
        .collect();
    if before
        .papers()
        .iter()
        .any(|p| !after_by_id.contains_key(p.id()))
    {
        return Err(PerturbError::MismatchedIds);
    }
    let table_before = build_unique_table(before);
    let table_after = build_unique_table(after);
    let shifts = strategy.try_map(before.papers(), |p| {
        let moved_to = after_by_id[p.id()];
        let shift = PaperShift {
            citations_before: p.citations(),
            citations_after: moved_to,
            before: indicators::p100(p.citations(), &table_before, policy)?,
            after: indicators::p100(moved_to, &table_after, policy)?,
        };
        Ok::<_, IndicatorError>((p.id().to_string(), shift))
    })?;

    let moves = shifts
        .iter()
        .filter(|(_, s)| s.citations_before != s.citations_after)
        .map(|(id, s)| PaperMove {
            id: id.clone(),
            from: s.citations_before,
            to: s.citations_after,
        })
        .collect();

    let labels: Vec<String> = before
        .authors()
        .union(&after.authors())
        .map(|a| a.to_string())
        .collect();
    let author_rows = strategy.try_map(&labels, |label| {
        let mean = |set: &ReferenceSet, table: &UniqueCountTable| match indicators::mean_p100_in(
            set, table, label, policy,
        ) {
            Ok(m) => Ok(Some(m)),
            Err(IndicatorError::UnknownAuthor(_)) => Ok(None),
            Err(e) => Err(e),
        };
        let papers = before
            .papers()
            .iter()
            .filter(|p| p.has_author(label))
            .count();
        Ok::<_, IndicatorError>((
            label.clone(),
            AuthorShift {
                papers,
                mean_before: mean(before, &table_before)?,
                mean_after: mean(after, &table_after)?,
            },
        ))
    })?;

    let per_count = table_before
        .counts()
        .filter(|c| table_after.contains(*c))
        .map(|c| {
            Ok(CountShift {
                citations: c,
                before: indicators::p100(c, &table_before, policy)?,
                after: indicators::p100(c, &table_after, policy)?,
            })
        })
        .collect::<Result<Vec<_>, IndicatorError>>()?;

    let before_counts: BTreeSet<u32> = table_before.counts().collect();
    let after_counts: BTreeSet<u32> = table_after.counts().collect();

    Ok(DiffReport {
        counts_appeared: after_counts.difference(&before_counts).copied().collect(),
        counts_vanished: before_counts.difference(&after_counts).copied().collect(),
        i_max_before: table_before.i_max(),
        i_max_after: table_after.i_max(),
        per_paper: shifts.into_iter().collect(),
        per_author: author_rows.into_iter().collect(),
        per_count,
        moves,
        net_citation_delta: after.total_citations() as i64 - before.total_citations() as i64,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mechanism {
    /// A previously absent count is now held by papers coming from `sources`.
    GapFilled { sources: BTreeSet<u32> },
    /// All papers of the count joined counts that already existed, leaving a gap.
    Merged { into: BTreeSet<u32> },
    /// The count's papers moved on to counts that are themselves new.
    Emptied { moved_to: BTreeSet<u32> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlobalShift {
    /// i_max grew: the spacing 100 / i_max narrows.
    Compression,
    /// i_max shrank: the spacing 100 / i_max widens.
    Dilation,
    /// Counts were swapped without changing i_max.
    Reshuffle,
    Unchanged,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MechanismReport {
    pub counts: Vec<(u32, Mechanism)>,
    pub global: GlobalShift,
}

pub fn classify_mechanism(report: &DiffReport) -> MechanismReport {
    let mut counts = Vec::new();
    for &c in &report.counts_appeared {
        let sources = report
            .moves
            .iter()
            .filter(|m| m.to == c)
            .map(|m| m.from)
            .collect();
        counts.push((c, Mechanism::GapFilled { sources }));
    }
    for &c in &report.counts_vanished {
        let destinations: BTreeSet<u32> = report
            .moves
            .iter()
            .filter(|m| m.from == c)
            .map(|m| m.to)
            .collect();
        let into_existing = destinations
            .iter()
            .all(|d| !report.counts_appeared.contains(d));
        let mechanism = if into_existing {
            Mechanism::Merged { into: destinations }
        } else {
            Mechanism::Emptied {
                moved_to: destinations,
            }
        };
        counts.push((c, mechanism));
    }
    counts.sort_by_key(|(c, _)| *c);
    let global = match report.i_max_after.cmp(&report.i_max_before) {
        std::cmp::Ordering::Greater => GlobalShift::Compression,
        std::cmp::Ordering::Less => GlobalShift::Dilation,
        std::cmp::Ordering::Equal if counts.is_empty() => GlobalShift::Unchanged,
        std::cmp::Ordering::Equal => GlobalShift::Reshuffle,
    };
    MechanismReport { counts, global }
}

/// Outcome of moving a single paper by one citation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitDeltaOutcome {
    pub selector: Selector,
    pub delta: i64,
    pub i_max_after: u32,
    pub global: GlobalShift,
    /// Change of each author's mean P100 in percentage points.
    pub author_deltas: BTreeMap<String, Exact>,
}

/// Tries every single-citation change: each paper moved up and down by one
/// (down only when it has citations). Runs the candidates under `strategy`.
pub fn sweep_unit_deltas(
    set: &ReferenceSet,
    policy: DegeneratePolicy,
    strategy: Strategy,
) -> Result<Vec<UnitDeltaOutcome>, PerturbError> {
    let candidates: Vec<(Selector, i64)> = set
        .papers()
        .iter()
        .flat_map(|p| {
            let up = Some((Selector::Id(p.id().to_string()), 1));
            let down = (p.citations() > 0).then(|| (Selector::Id(p.id().to_string()), -1));
            up.into_iter().chain(down)
        })
        .collect();
    strategy.try_map(&candidates, |(selector, delta)| {
        let spec = PerturbationSpec::new([(selector.clone(), *delta)]);
        let after = apply(set, &spec)?;
        let report = diff_with(set, &after, policy, Strategy::Sequential)?;
        let global = classify_mechanism(&report).global;
        let author_deltas = report
            .per_author
            .iter()
            .filter_map(|(a, s)| s.delta().map(|d| (a.clone(), d)))
            .collect();
        Ok(UnitDeltaOutcome {
            selector: selector.clone(),
            delta: *delta,
            i_max_after: report.i_max_after,
            global,
            author_deltas,
        })
    })
}
