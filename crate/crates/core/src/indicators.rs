//! P100 and the classic percentile statistics it is compared against.

use std::collections::{BTreeMap, BTreeSet};

use crate::exact::{int, Exact};
use crate::exec::Strategy;
use crate::model::{IndicatorValue, ReferenceSet, UniqueCountTable};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IndicatorError {
    #[error("citation count {0} is not present in the reference set and has no rank")]
    UnrankedCount(u32),
    #[error("reference set has a single unique citation count; P100 is undefined (use the `top` degenerate policy to map it to 100)")]
    Degenerate,
    #[error("author {0:?} has no papers in the reference set")]
    UnknownAuthor(String),
    #[error("position {position} is outside 1..={n}")]
    PositionOutOfRange { position: u64, n: u64 },
    #[error("at least one category is required")]
    NoCategories,
    #[error("fraction must lie strictly between 0 and 1")]
    InvalidFraction,
}

/// What to do with a table holding a single unique count, where the lowest
/// and the highest count coincide.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum DegeneratePolicy {
    /// Refuse with [`IndicatorError::Degenerate`].
    #[default]
    Reject,
    /// Treat the sole count as the highest impact: P100 = 100.
    Top,
}

/// Whether a value sitting exactly on a class boundary belongs to the class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Inclusive,
    Exclusive,
}

pub fn build_unique_table(set: &ReferenceSet) -> UniqueCountTable {
    let mut counts = BTreeMap::<u32, u64>::new();
    for c in set.citation_counts() {
        *counts.entry(c).or_default() += 1;
    }
    UniqueCountTable::from_paper_counts(counts).expect("validated reference sets are never empty")
}

/// P100 of a citation count within `table`: `100 * rank / i_max`.
pub fn p100(
    citations: u32,
    table: &UniqueCountTable,
    policy: DegeneratePolicy,
) -> Result<IndicatorValue, IndicatorError> {
    let rank = table
        .rank_of(citations)
        .ok_or(IndicatorError::UnrankedCount(citations))?;
    let i_max = table.i_max();
    if i_max == 0 && policy == DegeneratePolicy::Reject {
        return Err(IndicatorError::Degenerate);
    }
    Ok(IndicatorValue::new(rank, i_max).expect("rank comes from the table"))
}

pub fn p100_all(
    set: &ReferenceSet,
    policy: DegeneratePolicy,
) -> Result<BTreeMap<String, IndicatorValue>, IndicatorError> {
    p100_all_with(set, policy, Strategy::default())
}

/// P100 for every paper, keyed by id. Tied papers share one value.
pub fn p100_all_with(
    set: &ReferenceSet,
    policy: DegeneratePolicy,
    strategy: Strategy,
) -> Result<BTreeMap<String, IndicatorValue>, IndicatorError> {
    let table = build_unique_table(set);
    let values = strategy.try_map(set.papers(), |paper| {
        p100(paper.citations(), &table, policy).map(|v| (paper.id().to_string(), v))
    })?;
    Ok(values.into_iter().collect())
}

/// Unweighted mean P100 over the papers carrying `author`.
pub fn mean_p100(
    set: &ReferenceSet,
    author: &str,
    policy: DegeneratePolicy,
) -> Result<Exact, IndicatorError> {
    let table = build_unique_table(set);
    mean_p100_in(set, &table, author, policy)
}

pub(crate) fn mean_p100_in(
    set: &ReferenceSet,
    table: &UniqueCountTable,
    author: &str,
    policy: DegeneratePolicy,
) -> Result<Exact, IndicatorError> {
    let mut sum = int(0);
    let mut papers = 0i128;
    for paper in set.papers().iter().filter(|p| p.has_author(author)) {
        sum += p100(paper.citations(), table, policy)?.value();
        papers += 1;
    }
    if papers == 0 {
        return Err(IndicatorError::UnknownAuthor(author.to_string()));
    }
    Ok(sum / int(papers))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuthorMean {
    pub papers: usize,
    pub mean: Exact,
}

/// Mean P100 for every author label in the set.
pub fn author_means(
    set: &ReferenceSet,
    policy: DegeneratePolicy,
    strategy: Strategy,
) -> Result<BTreeMap<String, AuthorMean>, IndicatorError> {
    let table = build_unique_table(set);
    let authors: Vec<String> = set.authors().into_iter().map(str::to_string).collect();
    let means = strategy.try_map(&authors, |author| {
        let papers = set.papers().iter().filter(|p| p.has_author(author)).count();
        mean_p100_in(set, &table, author, policy)
            .map(|mean| (author.clone(), AuthorMean { papers, mean }))
    })?;
    Ok(means.into_iter().collect())
}

/// Unweighted mean of per-category P100 values for a paper classified in
/// several subject categories.
pub fn multi_category_p100(
    per_category: &[(&UniqueCountTable, u32)],
    policy: DegeneratePolicy,
) -> Result<Exact, IndicatorError> {
    if per_category.is_empty() {
        return Err(IndicatorError::NoCategories);
    }
    let mut sum = int(0);
    for (table, citations) in per_category {
        sum += p100(*citations, table, policy)?.value();
    }
    Ok(sum / int(per_category.len() as i128))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CumulatedRow {
    pub citations: u32,
    pub papers: u64,
    /// Fraction of papers with at most `citations` citations.
    pub cumulated_fraction: Exact,
}

impl CumulatedRow {
    pub fn percent(&self) -> Exact {
        self.cumulated_fraction * int(100)
    }
}

/// Running share of papers up to and including each unique count.
pub fn cumulated_percentages(table: &UniqueCountTable) -> Vec<CumulatedRow> {
    let total = table.total_papers() as i128;
    let mut running = 0u64;
    table
        .entries()
        .iter()
        .map(|e| {
            running += e.papers;
            CumulatedRow {
                citations: e.citations,
                papers: e.papers,
                cumulated_fraction: Exact::new(running as i128, total),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopFractionResult {
    pub threshold_citations: u32,
    pub member_count: usize,
    pub member_ids: BTreeSet<String>,
    /// `None` only for a degenerate table under [`DegeneratePolicy::Reject`].
    pub threshold_p100: Option<IndicatorValue>,
}

/// Top-`fraction` class: the threshold is the smallest count whose exact
/// cumulated fraction strictly exceeds `1 - fraction`; every paper at or
/// above it is a member.
pub fn top_fraction(
    set: &ReferenceSet,
    fraction: &Exact,
    policy: DegeneratePolicy,
) -> Result<TopFractionResult, IndicatorError> {
    if *fraction <= int(0) || *fraction >= int(1) {
        return Err(IndicatorError::InvalidFraction);
    }
    let table = build_unique_table(set);
    let bound = int(1) - fraction;
    let threshold_citations = cumulated_percentages(&table)
        .into_iter()
        .find(|row| row.cumulated_fraction > bound)
        .map(|row| row.citations)
        .expect("the final cumulated fraction is 1");
    let member_ids: BTreeSet<String> = set
        .papers()
        .iter()
        .filter(|p| p.citations() >= threshold_citations)
        .map(|p| p.id().to_string())
        .collect();
    let threshold_p100 = match p100(threshold_citations, &table, policy) {
        Ok(v) => Some(v),
        Err(IndicatorError::Degenerate) => None,
        Err(e) => return Err(e),
    };
    Ok(TopFractionResult {
        threshold_citations,
        member_count: member_ids.len(),
        member_ids,
        threshold_p100,
    })
}

/// Citation count of the paper at ascending position `ceil(n / 2)`.
pub fn median_paper_citations(set: &ReferenceSet) -> u32 {
    let mut counts: Vec<u32> = set.citation_counts().collect();
    counts.sort_unstable();
    counts[counts.len().div_ceil(2) - 1]
}

/// Hazen percentile `100 * (position - 1/2) / n` for 1-based `position`.
pub fn hazen_percentile(position: u64, n: u64) -> Result<Exact, IndicatorError> {
    if position == 0 || position > n {
        return Err(IndicatorError::PositionOutOfRange { position, n });
    }
    let position = i128::from(position);
    let n = i128::from(n);
    Ok(Exact::new(100 * (2 * position - 1), 2 * n))
}

/// Whether `value` lies in the upper class starting at `lower_bound`
/// (e.g. 50 for the top half). A value exactly on the bound belongs to the
/// class only for [`Boundary::Inclusive`].
pub fn in_upper_class(value: &Exact, lower_bound: &Exact, boundary: Boundary) -> bool {
    match boundary {
        Boundary::Inclusive => value >= lower_bound,
        Boundary::Exclusive => value > lower_bound,
    }
}
