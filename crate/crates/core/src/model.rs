//! Domain types shared by the indicator, perturbation and reporting code.
//!
//! Everything here is immutable once built. A modified reference set is a
//! new [`ReferenceSet`], never an in-place edit.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::exact::{int, Exact};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("reference set is empty")]
    EmptySet,
    #[error("duplicate paper id {0:?}")]
    DuplicateId(String),
    #[error("paper {id:?} has negative citation count {citations}")]
    NegativeCitations { id: String, citations: i64 },
    #[error("paper {id:?} citation count {citations} exceeds the supported range")]
    CitationOverflow { id: String, citations: i64 },
}

/// One publication with its aggregate citation count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaperRecord {
    id: String,
    citations: u32,
    authors: BTreeSet<String>,
    year: Option<i32>,
    categories: BTreeSet<String>,
}

impl PaperRecord {
    /// Builds a record, rejecting negative or out-of-range counts.
    pub fn new(id: impl Into<String>, citations: i64) -> Result<Self, ModelError> {
        let id = id.into();
        if citations < 0 {
            return Err(ModelError::NegativeCitations { id, citations });
        }
        let citations = u32::try_from(citations).map_err(|_| ModelError::CitationOverflow {
            id: id.clone(),
            citations,
        })?;
        Ok(Self {
            id,
            citations,
            authors: BTreeSet::new(),
            year: None,
            categories: BTreeSet::new(),
        })
    }

    pub fn with_authors<I, S>(mut self, authors: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.authors = authors.into_iter().map(Into::into).collect();
        self
    }

    pub fn with_year(mut self, year: Option<i32>) -> Self {
        self.year = year;
        self
    }

    pub fn with_categories<I, S>(mut self, categories: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.categories = categories.into_iter().map(Into::into).collect();
        self
    }

    /// Same paper with a different citation count.
    pub(crate) fn with_citations(&self, citations: u32) -> Self {
        Self {
            citations,
            ..self.clone()
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn citations(&self) -> u32 {
        self.citations
    }

    pub fn authors(&self) -> &BTreeSet<String> {
        &self.authors
    }

    pub fn has_author(&self, label: &str) -> bool {
        self.authors.contains(label)
    }

    pub fn year(&self) -> Option<i32> {
        self.year
    }

    pub fn categories(&self) -> &BTreeSet<String> {
        &self.categories
    }
}

/// The comparison population for a paper's citation count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceSet {
    label: String,
    papers: Vec<PaperRecord>,
}

/// Validates a paper collection: non-empty with unique ids.
pub fn validate_reference_set(
    label: impl Into<String>,
    papers: Vec<PaperRecord>,
) -> Result<ReferenceSet, ModelError> {
    if papers.is_empty() {
        return Err(ModelError::EmptySet);
    }
    let mut seen = HashSet::with_capacity(papers.len());
    for paper in &papers {
        if !seen.insert(paper.id.as_str()) {
            return Err(ModelError::DuplicateId(paper.id.clone()));
        }
    }
    Ok(ReferenceSet {
        label: label.into(),
        papers,
    })
}

impl ReferenceSet {
    pub fn new(label: impl Into<String>, papers: Vec<PaperRecord>) -> Result<Self, ModelError> {
        validate_reference_set(label, papers)
    }

    /// Anonymous set from bare citation counts; ids are `p1`, `p2`, ...
    pub fn from_counts<I>(label: impl Into<String>, counts: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = u32>,
    {
        let papers = counts
            .into_iter()
            .enumerate()
            .map(|(i, c)| PaperRecord::new(format!("p{}", i + 1), i64::from(c)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(label, papers)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn papers(&self) -> &[PaperRecord] {
        &self.papers
    }

    pub fn len(&self) -> usize {
        self.papers.len()
    }

    /// Always false for a validated set.
    pub fn is_empty(&self) -> bool {
        self.papers.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&PaperRecord> {
        self.papers.iter().find(|p| p.id == id)
    }

    pub fn total_citations(&self) -> u64 {
        self.papers.iter().map(|p| u64::from(p.citations)).sum()
    }

    /// All author labels present, sorted.
    pub fn authors(&self) -> BTreeSet<&str> {
        self.papers
            .iter()
            .flat_map(|p| p.authors.iter().map(String::as_str))
            .collect()
    }

    pub fn citation_counts(&self) -> impl Iterator<Item = u32> + '_ {
        self.papers.iter().map(|p| p.citations)
    }

    /// Rebuilds the set with the given papers, keeping the label.
    pub(crate) fn with_papers(&self, papers: Vec<PaperRecord>) -> Self {
        Self {
            label: self.label.clone(),
            papers,
        }
    }

    pub fn relabeled(&self, label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            papers: self.papers.clone(),
        }
    }
}

/// One ranked unique citation count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniqueCount {
    pub citations: u32,
    pub papers: u64,
    pub rank: u32,
}

/// Distinct citation counts of a reference set in ascending order, ranked
/// 0..=i_max. Counts held by no paper are absent and therefore unranked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniqueCountTable {
    entries: Vec<UniqueCount>,
}

impl UniqueCountTable {
    /// Builds a table from `(citations, papers)` pairs in any order.
    /// Duplicate counts are merged and zero-paper counts dropped.
    pub fn from_paper_counts<I>(pairs: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (u32, u64)>,
    {
        let mut merged = std::collections::BTreeMap::<u32, u64>::new();
        for (citations, papers) in pairs {
            if papers > 0 {
                *merged.entry(citations).or_default() += papers;
            }
        }
        if merged.is_empty() {
            return Err(ModelError::EmptySet);
        }
        let entries = merged
            .into_iter()
            .zip(0u32..)
            .map(|((citations, papers), rank)| UniqueCount {
                citations,
                papers,
                rank,
            })
            .collect();
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[UniqueCount] {
        &self.entries
    }

    pub fn i_max(&self) -> u32 {
        (self.entries.len() - 1) as u32
    }

    /// Number of unique counts, `i_max + 1`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_papers(&self) -> u64 {
        self.entries.iter().map(|e| e.papers).sum()
    }

    pub fn min_citations(&self) -> u32 {
        self.entries[0].citations
    }

    pub fn max_citations(&self) -> u32 {
        self.entries[self.entries.len() - 1].citations
    }

    pub fn rank_of(&self, citations: u32) -> Option<u32> {
        self.entries
            .binary_search_by_key(&citations, |e| e.citations)
            .ok()
            .map(|i| self.entries[i].rank)
    }

    pub fn get(&self, citations: u32) -> Option<&UniqueCount> {
        self.entries
            .binary_search_by_key(&citations, |e| e.citations)
            .ok()
            .map(|i| &self.entries[i])
    }

    pub fn contains(&self, citations: u32) -> bool {
        self.rank_of(citations).is_some()
    }

    pub fn counts(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.iter().map(|e| e.citations)
    }
}

/// A P100 value kept as the exact pair (rank, i_max).
///
/// `i_max == 0` only occurs when a degenerate table was explicitly allowed;
/// such a value reads as 100.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndicatorValue {
    rank: u32,
    i_max: u32,
}

impl IndicatorValue {
    pub fn new(rank: u32, i_max: u32) -> Option<Self> {
        (rank <= i_max).then_some(Self { rank, i_max })
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn i_max(&self) -> u32 {
        self.i_max
    }

    pub fn is_degenerate(&self) -> bool {
        self.i_max == 0
    }

    /// `100 * rank / i_max`.
    pub fn value(&self) -> Exact {
        if self.i_max == 0 {
            int(100)
        } else {
            Exact::new(100 * i128::from(self.rank), i128::from(self.i_max))
        }
    }
}

impl PartialOrd for IndicatorValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IndicatorValue {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.value()
            .cmp(&other.value())
            .then(self.rank.cmp(&other.rank))
            .then(self.i_max.cmp(&other.i_max))
    }
}

impl fmt::Display for IndicatorValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let precision = f.precision().unwrap_or(1) as u32;
        f.write_str(&crate::exact::display(&self.value(), precision))
    }
}
