//! Report tables, plot data and cross-year comparisons, rendered as aligned
//! text for people and as CSV records for tooling.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

use crate::dataset::DatasetError;
use crate::exact::{display, int, Exact};
use crate::exec::Strategy;
use crate::indicators::{
    author_means, build_unique_table, cumulated_percentages, p100, top_fraction, AuthorMean,
    DegeneratePolicy, IndicatorError,
};
use crate::model::{IndicatorValue, PaperRecord, ReferenceSet};
use crate::perturbation::{classify_mechanism, DiffReport, GlobalShift, Mechanism};

/// Right-aligns every column under its header.
pub(crate) fn columns(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &mut dyn Iterator<Item = &str>| {
        let parts: Vec<String> = cells
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}", w = *w))
            .collect();
        parts.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(&mut headers.iter().copied());
    for row in rows {
        out += &line(&mut row.iter().map(String::as_str));
    }
    out
}

fn opt(value: Option<String>) -> String {
    value.unwrap_or_default()
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ReportOptions {
    pub show_cumulated: bool,
    pub show_author_means: bool,
    pub policy: DegeneratePolicy,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportRow {
    pub citations: u32,
    pub papers: u64,
    pub p100: IndicatorValue,
    pub cumulated: Option<Exact>,
}

/// The unique-count table of one reference set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportTable {
    pub label: String,
    pub papers: usize,
    pub total_citations: u64,
    pub i_max: u32,
    pub rows: Vec<ReportRow>,
    pub author_means: Option<BTreeMap<String, AuthorMean>>,
}

pub fn build_report(
    set: &ReferenceSet,
    options: &ReportOptions,
    strategy: Strategy,
) -> Result<ReportTable, IndicatorError> {
    let table = build_unique_table(set);
    let cumulated = cumulated_percentages(&table);
    let rows = table
        .entries()
        .iter()
        .zip(cumulated)
        .map(|(entry, cum)| {
            Ok(ReportRow {
                citations: entry.citations,
                papers: entry.papers,
                p100: p100(entry.citations, &table, options.policy)?,
                cumulated: options.show_cumulated.then(|| cum.percent()),
            })
        })
        .collect::<Result<Vec<_>, IndicatorError>>()?;
    let author_means = if options.show_author_means {
        Some(author_means(set, options.policy, strategy)?)
    } else {
        None
    };
    Ok(ReportTable {
        label: set.label().to_string(),
        papers: set.len(),
        total_citations: set.total_citations(),
        i_max: table.i_max(),
        rows,
        author_means,
    })
}

/// One machine-readable record per unique count.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ReportRecord {
    pub citations: u32,
    pub papers: u64,
    pub rank: u32,
    pub i_max: u32,
    /// Exact P100 as a reduced fraction, e.g. `200/3`.
    pub p100: String,
    pub p100_display: String,
    pub cumulated: Option<String>,
    pub cumulated_display: Option<String>,
}

impl ReportTable {
    pub fn render(&self, precision: u32) -> String {
        let mut out = format!(
            "# {}: {} papers, {} citations, {} unique counts, i_max = {}\n",
            self.label,
            self.papers,
            self.total_citations,
            self.rows.len(),
            self.i_max
        );
        let show_cum = self.rows.iter().any(|r| r.cumulated.is_some());
        let mut headers = vec!["citations", "papers", "rank", "P100"];
        if show_cum {
            headers.push("cumulated %");
        }
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                let mut cells = vec![
                    r.citations.to_string(),
                    r.papers.to_string(),
                    r.p100.rank().to_string(),
                    display(&r.p100.value(), precision),
                ];
                if show_cum {
                    cells.push(opt(r.cumulated.as_ref().map(|c| display(c, 1))));
                }
                cells
            })
            .collect();
        out += &columns(&headers, &rows);
        if let Some(means) = &self.author_means {
            out += "\n";
            let rows: Vec<Vec<String>> = means
                .iter()
                .map(|(author, m)| {
                    vec![
                        author.clone(),
                        m.papers.to_string(),
                        display(&m.mean, precision + 1),
                    ]
                })
                .collect();
            out += &columns(&["author", "papers", "mean P100"], &rows);
        }
        out
    }

    pub fn records(&self, precision: u32) -> Vec<ReportRecord> {
        self.rows
            .iter()
            .map(|r| ReportRecord {
                citations: r.citations,
                papers: r.papers,
                rank: r.p100.rank(),
                i_max: r.p100.i_max(),
                p100: r.p100.value().to_string(),
                p100_display: display(&r.p100.value(), precision),
                cumulated: r.cumulated.as_ref().map(|c| (c / int(100)).to_string()),
                cumulated_display: r.cumulated.as_ref().map(|c| display(c, 1)),
            })
            .collect()
    }

    pub fn write_records<W: Write>(&self, writer: W, precision: u32) -> Result<(), csv::Error> {
        let mut out = csv::Writer::from_writer(writer);
        for record in self.records(precision) {
            out.serialize(record)?;
        }
        out.flush()?;
        Ok(())
    }
}

pub fn read_records<R: Read>(reader: R) -> Result<Vec<ReportRecord>, DatasetError> {
    let mut csv = csv::Reader::from_reader(reader);
    csv.deserialize()
        .map(|r| r.map_err(DatasetError::from))
        .collect()
}

/// Expands report records back into a reference set with one anonymous
/// paper per counted paper.
pub fn expand_records(records: &[ReportRecord], label: &str) -> Result<ReferenceSet, DatasetError> {
    let papers = records
        .iter()
        .flat_map(|r| (1..=r.papers).map(move |k| (r.citations, k)))
        .map(|(c, k)| PaperRecord::new(format!("c{c}-{k}"), i64::from(c)).expect("u32 fits"))
        .collect();
    ReferenceSet::new(label, papers).map_err(|_| DatasetError::Empty)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotMode {
    /// Every count from 0 to the maximum, zero paper counts included.
    ByCitationCount,
    /// Only counts held by at least one paper.
    ByUniqueCount,
    /// Ranked counts placed on the P100 axis.
    ByP100,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlotPoint {
    pub x: Exact,
    pub papers: u64,
}

/// Two-column plot data. `max_citations` limits the citation window.
pub fn plot_points(
    set: &ReferenceSet,
    mode: PlotMode,
    max_citations: Option<u32>,
    policy: DegeneratePolicy,
) -> Result<Vec<PlotPoint>, IndicatorError> {
    let table = build_unique_table(set);
    let limit = max_citations.unwrap_or(u32::MAX);
    let in_window = |c: &u32| *c <= limit;
    Ok(match mode {
        PlotMode::ByCitationCount => (0..=table.max_citations().min(limit))
            .map(|c| PlotPoint {
                x: int(c),
                papers: table.get(c).map_or(0, |e| e.papers),
            })
            .collect(),
        PlotMode::ByUniqueCount => table
            .entries()
            .iter()
            .filter(|e| in_window(&e.citations))
            .map(|e| PlotPoint {
                x: int(e.citations),
                papers: e.papers,
            })
            .collect(),
        PlotMode::ByP100 => table
            .entries()
            .iter()
            .filter(|e| in_window(&e.citations))
            .map(|e| {
                Ok(PlotPoint {
                    x: p100(e.citations, &table, policy)?.value(),
                    papers: e.papers,
                })
            })
            .collect::<Result<_, IndicatorError>>()?,
    })
}

pub fn render_plot(points: &[PlotPoint], mode: PlotMode, precision: u32) -> String {
    let x_label = match mode {
        PlotMode::ByCitationCount | PlotMode::ByUniqueCount => "citations",
        PlotMode::ByP100 => "p100",
    };
    let mut out = format!("# {x_label}\tpapers\n");
    for p in points {
        let x = match mode {
            PlotMode::ByP100 => display(&p.x, precision),
            _ => p.x.to_integer().to_string(),
        };
        out += &format!("{x}\t{}\n", p.papers);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YearSummary {
    pub label: String,
    pub year: Option<i32>,
    pub papers: usize,
    pub i_max: u32,
    pub top_citations: u32,
    pub threshold_citations: u32,
    pub member_count: usize,
    pub threshold_p100: Option<IndicatorValue>,
}

/// Two rows whose top-fraction thresholds carry different P100 values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnequalThresholds {
    pub first: usize,
    pub second: usize,
    /// Both thresholds are the same citation count.
    pub same_threshold: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YearComparison {
    pub fraction: Exact,
    pub rows: Vec<YearSummary>,
    pub flags: Vec<UnequalThresholds>,
}

impl YearComparison {
    pub fn is_flagged(&self, row: usize) -> bool {
        self.flags.iter().any(|f| f.first == row || f.second == row)
    }
}

fn common_year(set: &ReferenceSet) -> Option<i32> {
    let years: BTreeSet<Option<i32>> = set.papers().iter().map(PaperRecord::year).collect();
    match years.into_iter().collect::<Vec<_>>().as_slice() {
        [Some(y)] => Some(*y),
        _ => None,
    }
}

/// Top-fraction thresholds of several reference sets side by side.
pub fn compare_years(
    sets: &[ReferenceSet],
    fraction: &Exact,
    policy: DegeneratePolicy,
    strategy: Strategy,
) -> Result<YearComparison, IndicatorError> {
    let rows = strategy.try_map(sets, |set| {
        let table = build_unique_table(set);
        let top = top_fraction(set, fraction, policy)?;
        Ok::<_, IndicatorError>(YearSummary {
            label: set.label().to_string(),
            year: common_year(set),
            papers: set.len(),
            i_max: table.i_max(),
            top_citations: table.max_citations(),
            threshold_citations: top.threshold_citations,
            member_count: top.member_count,
            threshold_p100: top.threshold_p100,
        })
    })?;
    let mut flags = Vec::new();
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            if let (Some(a), Some(b)) = (rows[i].threshold_p100, rows[j].threshold_p100) {
                if a.value() != b.value() {
                    flags.push(UnequalThresholds {
                        first: i,
                        second: j,
                        same_threshold: rows[i].threshold_citations == rows[j].threshold_citations,
                    });
                }
            }
        }
    }
    Ok(YearComparison {
        fraction: *fraction,
        rows,
        flags,
    })
}

impl YearComparison {
    pub fn render(&self, precision: u32) -> String {
        let mut out = format!(
            "# top {}% thresholds\n",
            display(&(self.fraction * int(100)), 1)
        );
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                vec![
                    r.year.map_or_else(|| r.label.clone(), |y| y.to_string()),
                    r.papers.to_string(),
                    r.i_max.to_string(),
                    r.top_citations.to_string(),
                    r.threshold_citations.to_string(),
                    r.member_count.to_string(),
                    opt(r
                        .threshold_p100
                        .map(|v| format!("{}/{}", v.rank(), v.i_max()))),
                    opt(r.threshold_p100.map(|v| display(&v.value(), precision))),
                    if self.is_flagged(i) {
                        "*".into()
                    } else {
                        String::new()
                    },
                ]
            })
            .collect();
        out += &columns(
            &[
                "set",
                "papers",
                "i_max",
                "top",
                "threshold",
                "members",
                "rank",
                "P100",
                "flag",
            ],
            &rows,
        );
        for f in &self.flags {
            let (a, b) = (&self.rows[f.first], &self.rows[f.second]);
            let kind = if f.same_threshold {
                format!("same threshold of {} citations", a.threshold_citations)
            } else {
                format!(
                    "thresholds {} and {} citations",
                    a.threshold_citations, b.threshold_citations
                )
            };
            out += &format!(
                "* {} vs {}: {kind}, P100 {} vs {}\n",
                a.year.map_or_else(|| a.label.clone(), |y| y.to_string()),
                b.year.map_or_else(|| b.label.clone(), |y| y.to_string()),
                opt(a.threshold_p100.map(|v| display(&v.value(), precision))),
                opt(b.threshold_p100.map(|v| display(&v.value(), precision))),
            );
        }
        out
    }
}

fn list(counts: &BTreeSet<u32>) -> String {
    if counts.is_empty() {
        "none".into()
    } else {
        counts
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    }
}

fn set_list(counts: &BTreeSet<u32>) -> String {
    counts
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

/// Per-count rows of a diff over the union of both sides' counts.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct DiffRecord {
    pub citations: u32,
    pub papers_before: u64,
    pub papers_after: u64,
    pub rank_before: Option<u32>,
    pub rank_after: Option<u32>,
    pub p100_before: Option<String>,
    pub p100_after: Option<String>,
    pub delta_pp: Option<String>,
}

pub fn diff_records(
    before: &ReferenceSet,
    after: &ReferenceSet,
    report: &DiffReport,
    precision: u32,
) -> Vec<DiffRecord> {
    let tb = build_unique_table(before);
    let ta = build_unique_table(after);
    let counts: BTreeSet<u32> = tb.counts().chain(ta.counts()).collect();
    let shifts: BTreeMap<u32, _> = report.per_count.iter().map(|s| (s.citations, s)).collect();
    let value = |v: Option<IndicatorValue>| v.map(|v| display(&v.value(), precision));
    counts
        .into_iter()
        .map(|c| {
            let rb = tb.get(c);
            let ra = ta.get(c);
            let vb = rb.map(|e| IndicatorValue::new(e.rank, tb.i_max()).expect("ranked"));
            let va = ra.map(|e| IndicatorValue::new(e.rank, ta.i_max()).expect("ranked"));
            DiffRecord {
                citations: c,
                papers_before: rb.map_or(0, |e| e.papers),
                papers_after: ra.map_or(0, |e| e.papers),
                rank_before: rb.map(|e| e.rank),
                rank_after: ra.map(|e| e.rank),
                p100_before: value(vb),
                p100_after: value(va),
                delta_pp: shifts.get(&c).map(|s| display(&s.delta(), precision)),
            }
        })
        .collect()
}

/// Human-readable account of a perturbation.
pub fn render_diff(
    before: &ReferenceSet,
    after: &ReferenceSet,
    report: &DiffReport,
    precision: u32,
) -> String {
    let mut out = format!(
        "unique counts: {} → {}\ni_max: {} → {}\n",
        report.unique_before(),
        report.unique_after(),
        report.i_max_before,
        report.i_max_after
    );
    let moved: i64 = report
        .moves
        .iter()
        .map(|m| (i64::from(m.to) - i64::from(m.from)).abs())
        .sum();
    out += &format!(
        "net citation delta: {:+} ({} citations moved across {} papers)\n",
        report.net_citation_delta,
        moved,
        report.moves.len()
    );
    out += &format!("appeared counts: {}\n", list(&report.counts_appeared));
    out += &format!("vanished counts: {}\n", list(&report.counts_vanished));

    let mechanisms = classify_mechanism(report);
    let global = match mechanisms.global {
        GlobalShift::Compression => "compression (i_max grew, spacing 100/i_max narrowed)",
        GlobalShift::Dilation => "dilation (i_max shrank, spacing 100/i_max widened)",
        GlobalShift::Reshuffle => "reshuffle (i_max unchanged)",
        GlobalShift::Unchanged => "unchanged",
    };
    out += &format!("mechanism: {global}\n");
    for (c, m) in &mechanisms.counts {
        let text = match m {
            Mechanism::GapFilled { sources } => format!("gap filled from {}", set_list(sources)),
            Mechanism::Merged { into } => format!("merged into {}", set_list(into)),
            Mechanism::Emptied { moved_to } => {
                format!("emptied, papers moved to {}", set_list(moved_to))
            }
        };
        out += &format!("  {c:>6}  {text}\n");
    }

    if !report.per_author.is_empty() {
        out += "\n";
        let rows: Vec<Vec<String>> = report
            .per_author
            .iter()
            .map(|(author, s)| {
                let fmt = |v: &Option<Exact>| opt(v.as_ref().map(|v| display(v, precision + 1)));
                vec![
                    author.clone(),
                    s.papers.to_string(),
                    fmt(&s.mean_before),
                    fmt(&s.mean_after),
                    fmt(&s.delta()),
                    fmt(&s.relative_percent()),
                ]
            })
            .collect();
        out += &columns(
            &[
                "author",
                "papers",
                "mean before",
                "mean after",
                "delta pp",
                "delta %",
            ],
            &rows,
        );
    }

    out += "\n";
    let rows: Vec<Vec<String>> = diff_records(before, after, report, precision)
        .into_iter()
        .map(|r| {
            vec![
                r.citations.to_string(),
                r.papers_before.to_string(),
                opt(r.rank_before.map(|v| v.to_string())),
                opt(r.p100_before),
                r.papers_after.to_string(),
                opt(r.rank_after.map(|v| v.to_string())),
                opt(r.p100_after),
                opt(r.delta_pp),
            ]
        })
        .collect();
    out += &columns(
        &[
            "citations",
            "papers",
            "rank",
            "P100",
            "papers'",
            "rank'",
            "P100'",
            "delta pp",
        ],
        &rows,
    );
    out
}
