//! Delimited dataset files: a header row followed by one paper per row.
//!
//! ```text
//! id,citations,authors,year,categories
//! lbr-c30-1,30,LB;LL;RM,,
//! ```
//!
//! `authors` and `categories` are `;`-separated and may be empty, as may
//! `year`. Only `id` and `citations` are required columns.

use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use crate::model::{ModelError, PaperRecord, ReferenceSet};

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("missing required column {0:?} in header")]
    MissingColumn(&'static str),
    #[error("line {line}: {message}")]
    Row { line: u64, message: String },
    #[error("dataset contains no papers")]
    Empty,
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl DatasetError {
    pub fn line(&self) -> Option<u64> {
        match self {
            DatasetError::Row { line, .. } => Some(*line),
            DatasetError::Csv(e) => e.position().map(|p| p.line()),
            _ => None,
        }
    }
}

fn split_labels(field: &str) -> Vec<&str> {
    field
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect()
}

pub fn parse_dataset<R: Read>(reader: R, label: &str) -> Result<ReferenceSet, DatasetError> {
    let mut csv = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let headers = csv.headers()?.clone();
    let column = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let id_col = column("id").ok_or(DatasetError::MissingColumn("id"))?;
    let cit_col = column("citations").ok_or(DatasetError::MissingColumn("citations"))?;
    let authors_col = column("authors");
    let year_col = column("year");
    let categories_col = column("categories");

    let mut papers = Vec::new();
    let mut seen = HashSet::new();
    for record in csv.records() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let row_err = |message: String| DatasetError::Row { line, message };
        let field = |col: Option<usize>| col.and_then(|c| record.get(c)).unwrap_or("");

        let id = field(Some(id_col));
        if id.is_empty() {
            return Err(row_err("empty id".into()));
        }
        let raw = field(Some(cit_col));
        let citations: i64 = raw
            .parse()
            .map_err(|_| row_err(format!("citations {raw:?} is not an integer")))?;
        let year = match field(year_col) {
            "" => None,
            y => Some(
                y.parse()
                    .map_err(|_| row_err(format!("year {y:?} is not an integer")))?,
            ),
        };
        let paper = PaperRecord::new(id, citations)
            .map_err(|e| row_err(e.to_string()))?
            .with_authors(split_labels(field(authors_col)))
            .with_categories(split_labels(field(categories_col)))
            .with_year(year);
        if !seen.insert(paper.id().to_string()) {
            return Err(row_err(
                ModelError::DuplicateId(paper.id().to_string()).to_string(),
            ));
        }
        papers.push(paper);
    }
    ReferenceSet::new(label, papers).map_err(|e| match e {
        ModelError::EmptySet => DatasetError::Empty,
        other => DatasetError::Row {
            line: 0,
            message: other.to_string(),
        },
    })
}

/// Reads a dataset; the label is the file stem.
pub fn read_dataset(path: &Path) -> Result<ReferenceSet, DatasetError> {
    let file = std::fs::File::open(path).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let label = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("dataset");
    parse_dataset(std::io::BufReader::new(file), label)
}

pub fn write_dataset<W: Write>(set: &ReferenceSet, writer: W) -> Result<(), csv::Error> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(["id", "citations", "authors", "year", "categories"])?;
    for p in set.papers() {
        let authors = p
            .authors()
            .iter()
            .map(String::as_str)
            .collect::<Vec<_>>()
            .join(";");
        let categories = p
            .categories()
            .iter()
            .map(String::as_str)
            .collect::<Vec<_>>()
            .join(";");
        let year = p.year().map(|y| y.to_string()).unwrap_or_default();
        out.write_record([
            p.id(),
            &p.citations().to_string(),
            &authors,
            &year,
            &categories,
        ])?;
    }
    out.flush()?;
    Ok(())
}
