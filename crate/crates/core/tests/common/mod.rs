#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use num_rational::Ratio;
use p100::dataset::read_dataset;
use p100::perturbation::PerturbationSpec;
use p100::ReferenceSet;
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn spec_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("specs")
        .join(name)
}

pub fn load(name: &str) -> ReferenceSet {
    read_dataset(&fixture(&format!("{name}.csv"))).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn load_spec(name: &str) -> PerturbationSpec {
    let text = std::fs::read_to_string(spec_path(&format!("{name}.spec"))).unwrap();
    PerturbationSpec::parse(&text).unwrap()
}

/// From-scratch P100 for each count: sort the distinct values and place
/// each at 100 * position / (distinct - 1). A single distinct value maps
/// to 100.
pub fn brute_p100(counts: &[u32]) -> Vec<Ratio<i128>> {
    let distinct: BTreeSet<u32> = counts.iter().copied().collect();
    let distinct: Vec<u32> = distinct.into_iter().collect();
    let i_max = distinct.len() as i128 - 1;
    counts
        .iter()
        .map(|c| {
            if i_max == 0 {
                return Ratio::from_integer(100);
            }
            let i = distinct.iter().position(|d| d == c).unwrap() as i128;
            Ratio::new(100 * i, i_max)
        })
        .collect()
}

pub fn brute_distinct(counts: &[u32]) -> BTreeSet<u32> {
    counts.iter().copied().collect()
}

/// Mean of brute-force P100 over the positions carrying `author`.
pub fn brute_author_means(counts: &[u32], authors: &[&str]) -> BTreeMap<String, Ratio<i128>> {
    let values = brute_p100(counts);
    let mut sums: BTreeMap<String, (Ratio<i128>, i128)> = BTreeMap::new();
    for (v, a) in values.into_iter().zip(authors) {
        let e = sums
            .entry(a.to_string())
            .or_insert((Ratio::from_integer(0), 0));
        e.0 += v;
        e.1 += 1;
    }
    sums.into_iter()
        .map(|(a, (s, n))| (a, s / Ratio::from_integer(n)))
        .collect()
}

pub fn random_counts(rng: &mut impl Rng, max_len: usize, max_count: u32) -> Vec<u32> {
    let n = rng.random_range(1..=max_len);
    (0..n).map(|_| rng.random_range(0..=max_count)).collect()
}

pub fn to_f64(v: &Ratio<i128>) -> f64 {
    *v.numer() as f64 / *v.denom() as f64
}

/// Prints one line per criterion and remembers failures.
pub struct Criterion {
    name: String,
    checks: usize,
    failures: Vec<String>,
}

impl Criterion {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            checks: 0,
            failures: Vec::new(),
        }
    }

    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn close(&mut self, label: &str, actual: f64, expected: f64, tol: f64) {
        self.check((actual - expected).abs() <= tol + 1e-12, || {
            format!("{label}: got {actual:.4}, expected {expected} ± {tol}")
        });
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Prints the result line (plus up to five failure details).
    pub fn report(&self) -> bool {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        println!("[{status}] {} ({} checks)", self.name, self.checks);
        for f in self.failures.iter().take(5) {
            println!("       - {f}");
        }
        if self.failures.len() > 5 {
            println!("       - ... {} more", self.failures.len() - 5);
        }
        self.passed()
    }
}
