//! Citation-rank indicator P100 over reference sets of citation counts.
//!
//! P100 ranks the distinct citation counts of a reference set from 0 to
//! `i_max` and maps rank `i` to `100 * i / i_max`. The crate computes it
//! exactly, together with the classic statistics it is usually compared
//! with (cumulated percentages, top-fraction thresholds, medians, Hazen
//! percentiles), and tracks how every value moves when citations are
//! added, removed or rearranged.
//!
//! ```
//! use p100::{indicators, DegeneratePolicy, ReferenceSet};
//!
//! let set = ReferenceSet::from_counts("example", [1, 2, 3, 4, 4, 4, 7, 10]).unwrap();
//! let table = indicators::build_unique_table(&set);
//! let value = indicators::p100(4, &table, DegeneratePolicy::Reject).unwrap();
//! assert_eq!(value.to_string(), "60.0");
//! ```

pub mod cli;
pub mod dataset;
pub mod exact;
pub mod exec;
pub mod generators;
pub mod indicators;
pub mod model;
pub mod perturbation;
pub mod report;

pub use exact::Exact;
pub use exec::Strategy;
pub use indicators::DegeneratePolicy;
pub use model::{IndicatorValue, PaperRecord, ReferenceSet, UniqueCountTable};
