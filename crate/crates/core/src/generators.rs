//! The fictitious model datasets, built from their construction rules.

use std::fmt;
use std::str::FromStr;

use crate::model::{PaperRecord, ReferenceSet};
use crate::perturbation::{apply, PerturbationSpec, Selector};

/// (citations, author) for the eight papers of the first model, ascending.
const TABLE1_PAPERS: [(u32, &str); 8] = [
    (1, "X"),
    (2, "Y"),
    (3, "Y"),
    (4, "Y"),
    (4, "Y"),
    (4, "Y"),
    (7, "Z"),
    (10, "X"),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table1Models {
    pub original: ReferenceSet,
    /// The least cited paper gains one citation.
    pub first_modification: ReferenceSet,
    /// One of the three papers with four citations gains one citation.
    pub second_modification: ReferenceSet,
}

pub fn table1_models() -> Table1Models {
    let papers = TABLE1_PAPERS
        .iter()
        .enumerate()
        .map(|(i, &(c, author))| {
            PaperRecord::new(format!("t1-p{}", i + 1), i64::from(c))
                .expect("non-negative")
                .with_authors([author])
        })
        .collect();
    let original = ReferenceSet::new("table1_orig", papers).expect("distinct ids");
    let first = PerturbationSpec::new([(
        Selector::At {
            citations: 1,
            ordinal: 1,
        },
        1,
    )]);
    let second = PerturbationSpec::new([(
        Selector::At {
            citations: 4,
            ordinal: 3,
        },
        1,
    )]);
    Table1Models {
        first_modification: apply(&original, &first)
            .expect("static spec")
            .relabeled("table1_mod1"),
        second_modification: apply(&original, &second)
            .expect("static spec")
            .relabeled("table1_mod2"),
        original,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CaseId {
    A,
    B,
    C,
    D,
}

impl CaseId {
    pub const ALL: [CaseId; 4] = [CaseId::A, CaseId::B, CaseId::C, CaseId::D];
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown field case {0:?} (expected A, B, C or D)")]
pub struct UnknownCase(pub String);

impl FromStr for CaseId {
    type Err = UnknownCase;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "A" | "a" => Ok(CaseId::A),
            "B" | "b" => Ok(CaseId::B),
            "C" | "c" => Ok(CaseId::C),
            "D" | "d" => Ok(CaseId::D),
            other => Err(UnknownCase(other.to_string())),
        }
    }
}

pub const FIELD_PAPERS: u32 = 100;
pub const SINGLY_CITED: u32 = 20;

/// Case A paper counts for 0..=10 citations. Only roughly an inverse power
/// law, so it is kept as data rather than derived.
const CASE_A: [u32; 11] = [45, 20, 10, 7, 5, 4, 3, 2, 2, 1, 1];

/// One fictitious field: paper counts for 0..=10 citations, 100 papers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldCase {
    pub case_id: CaseId,
    pub paper_counts: [u32; 11],
}

impl FieldCase {
    pub fn total(&self) -> u32 {
        self.paper_counts.iter().sum()
    }

    pub fn to_reference_set(&self) -> ReferenceSet {
        let papers = self
            .paper_counts
            .iter()
            .enumerate()
            .flat_map(|(c, &n)| (1..=n).map(move |k| (c, k)))
            .map(|(c, k)| {
                PaperRecord::new(format!("t2{}-c{c}-{k}", self.case_id), c as i64)
                    .expect("non-negative")
            })
            .collect();
        ReferenceSet::new(format!("table2_{}", self.case_id), papers).expect("distinct ids")
    }
}

/// Builds a field case. B halves A, C adds 50% to A (both rounded up, for two
/// or more citations), D shifts A up by one citation; one citation always
/// holds 20 papers and the uncited row tops the total up to 100.
pub fn field_case(case_id: CaseId) -> FieldCase {
    let mut counts = [0u32; 11];
    counts[1] = SINGLY_CITED;
    for c in 2..=10 {
        counts[c] = match case_id {
            CaseId::A => CASE_A[c],
            CaseId::B => CASE_A[c].div_ceil(2),
            CaseId::C => (3 * CASE_A[c]).div_ceil(2),
            CaseId::D => CASE_A[c - 1],
        };
    }
    counts[0] = FIELD_PAPERS - counts[1..].iter().sum::<u32>();
    FieldCase {
        case_id,
        paper_counts: counts,
    }
}
