//! Command-line surface of the `p100` binary.
//!
//! Exit codes: 0 ok, 1 usage or I/O, 2 parse failure, 3 degenerate
//! reference set, 4 perturbation failure.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::dataset::{read_dataset, write_dataset, DatasetError};
use crate::exact::{display, parse_exact, Exact};
use crate::exec::Strategy;
use crate::generators::{field_case, table1_models, CaseId};
use crate::indicators::{top_fraction, DegeneratePolicy, IndicatorError};
use crate::model::ReferenceSet;
use crate::perturbation::{apply, diff, PerturbError, PerturbationSpec, SpecParseError};
use crate::report::{
    self, build_report, compare_years, plot_points, render_plot, PlotMode, ReportOptions,
};

#[derive(Debug, Parser)]
#[command(
    name = "p100",
    version,
    about = "Citation-rank (P100) indicator and perturbation analysis"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the unique-count table with ranks and P100 values.
    Compute(ComputeArgs),
    /// Apply a perturbation spec and report what changed.
    Perturb(PerturbArgs),
    /// Top-fraction threshold and its P100.
    Top(TopArgs),
    /// Compare top-fraction thresholds across several datasets.
    CompareYears(CompareArgs),
    /// Emit two-column plot data.
    Plotdata(PlotArgs),
    /// Write one of the built-in model datasets.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    #[default]
    Reject,
    Top,
}

impl From<PolicyArg> for DegeneratePolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Reject => DegeneratePolicy::Reject,
            PolicyArg::Top => DegeneratePolicy::Top,
        }
    }
}

#[derive(Debug, Args)]
pub struct Common {
    /// How to treat a reference set with a single unique citation count.
    #[arg(long, value_enum, default_value_t = PolicyArg::Reject)]
    pub degenerate_policy: PolicyArg,
    /// Decimals shown for P100 values.
    #[arg(long)]
    pub precision: Option<u32>,
    /// Also write machine-readable CSV to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    pub dataset: PathBuf,
    #[arg(long)]
    pub show_cumulated: bool,
    #[arg(long)]
    pub show_author_means: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct PerturbArgs {
    pub dataset: PathBuf,
    pub spec: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct TopArgs {
    pub dataset: PathBuf,
    #[arg(long, default_value = "0.10")]
    pub fraction: String,
    #[arg(long, value_enum, default_value_t = PolicyArg::Reject)]
    pub degenerate_policy: PolicyArg,
    #[arg(long)]
    pub precision: Option<u32>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(required = true, num_args = 2..)]
    pub datasets: Vec<PathBuf>,
    #[arg(long, default_value = "0.10")]
    pub fraction: String,
    #[arg(long, value_enum, default_value_t = PolicyArg::Reject)]
    pub degenerate_policy: PolicyArg,
    #[arg(long)]
    pub precision: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    ByCitationCount,
    ByUniqueCount,
    ByP100,
}

impl From<ModeArg> for PlotMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::ByCitationCount => PlotMode::ByCitationCount,
            ModeArg::ByUniqueCount => PlotMode::ByUniqueCount,
            ModeArg::ByP100 => PlotMode::ByP100,
        }
    }
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    pub dataset: PathBuf,
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    /// Only include citation counts up to this value.
    #[arg(long)]
    pub max_citations: Option<u32>,
    /// Apply this perturbation spec before emitting the data.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Table1Orig,
    Table1Mod1,
    Table1Mod2,
    Table2A,
    Table2B,
    Table2C,
    Table2D,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub model: Model,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Dataset { path: String, source: DatasetError },
    #[error("{path}: {source}")]
    Spec {
        path: String,
        source: SpecParseError,
    },
    #[error("{0}")]
    Degenerate(IndicatorError),
    #[error("{path}: {source}")]
    Perturb { path: String, source: PerturbError },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Dataset {
                source: DatasetError::Io { .. },
                ..
            } => 1,
            CliError::Dataset { .. } | CliError::Spec { .. } => 2,
            CliError::Degenerate(_) => 3,
            CliError::Perturb { .. } => 4,
            CliError::Usage(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<IndicatorError> for CliError {
    fn from(e: IndicatorError) -> Self {
        match e {
            IndicatorError::Degenerate => CliError::Degenerate(e),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}

fn load(path: &Path) -> Result<ReferenceSet, CliError> {
    read_dataset(path).map_err(|source| CliError::Dataset {
        path: path.display().to_string(),
        source,
    })
}

fn load_spec(path: &Path) -> Result<PerturbationSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Dataset {
        path: path.display().to_string(),
        source: DatasetError::Io {
            path: path.display().to_string(),
            source: e,
        },
    })?;
    PerturbationSpec::parse(&text).map_err(|source| CliError::Spec {
        path: path.display().to_string(),
        source,
    })
}

fn perturbed(set: &ReferenceSet, spec_path: &Path) -> Result<ReferenceSet, CliError> {
    let spec = load_spec(spec_path)?;
    apply(set, &spec).map_err(|source| CliError::Perturb {
        path: spec_path.display().to_string(),
        source,
    })
}

fn fraction(text: &str) -> Result<Exact, CliError> {
    let value = parse_exact(text).map_err(|e| CliError::Usage(e.to_string()))?;
    if value <= Exact::from_integer(0) || value >= Exact::from_integer(1) {
        return Err(CliError::Usage(format!(
            "--fraction {text} must lie strictly between 0 and 1"
        )));
    }
    Ok(value)
}

fn create(path: &Path) -> Result<std::io::BufWriter<std::fs::File>, CliError> {
    Ok(std::io::BufWriter::new(std::fs::File::create(path)?))
}

/// Runs one command, writing its report to `stdout`.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let strategy = Strategy::default();
    match cli.command {
        Command::Compute(args) => {
            let set = load(&args.dataset)?;
            let precision = args.common.precision.unwrap_or(1);
            let options = ReportOptions {
                show_cumulated: args.show_cumulated,
                show_author_means: args.show_author_means,
                policy: args.common.degenerate_policy.into(),
            };
            let table = build_report(&set, &options, strategy)?;
            stdout.write_all(table.render(precision).as_bytes())?;
            if let Some(out) = &args.common.out {
                table.write_records(create(out)?, precision)?;
            }
        }
        Command::Perturb(args) => {
            let before = load(&args.dataset)?;
            let after = perturbed(&before, &args.spec)?;
            let precision = args.common.precision.unwrap_or(1);
            let policy = args.common.degenerate_policy.into();
            let report = diff(&before, &after, policy).map_err(|e| match e {
                PerturbError::Indicator(inner) => CliError::from(inner),
                other => CliError::Perturb {
                    path: args.spec.display().to_string(),
                    source: other,
                },
            })?;
            stdout
                .write_all(report::render_diff(&before, &after, &report, precision).as_bytes())?;
            if let Some(out) = &args.common.out {
                let mut w = csv::Writer::from_writer(create(out)?);
                for record in report::diff_records(&before, &after, &report, precision) {
                    w.serialize(record)?;
                }
                w.flush()?;
            }
        }
        Command::Top(args) => {
            let set = load(&args.dataset)?;
            let fraction = fraction(&args.fraction)?;
            let precision = args.precision.unwrap_or(2);
            let top = top_fraction(&set, &fraction, args.degenerate_policy.into())?;
            writeln!(stdout, "dataset: {} ({} papers)", set.label(), set.len())?;
            writeln!(
                stdout,
                "fraction: {}%",
                display(&(fraction * Exact::from_integer(100)), 1)
            )?;
            writeln!(stdout, "threshold citations: {}", top.threshold_citations)?;
            writeln!(stdout, "members: {}", top.member_count)?;
            match top.threshold_p100 {
                Some(v) => {
                    writeln!(stdout, "threshold rank: {}/{}", v.rank(), v.i_max())?;
                    writeln!(stdout, "threshold P100: {}", display(&v.value(), precision))?;
                }
                None => return Err(IndicatorError::Degenerate.into()),
            }
        }
        Command::CompareYears(args) => {
            let fraction = fraction(&args.fraction)?;
            let sets = strategy.try_map(&args.datasets, |p| load(p))?;
            let cmp = compare_years(&sets, &fraction, args.degenerate_policy.into(), strategy)?;
            stdout.write_all(cmp.render(args.precision.unwrap_or(2)).as_bytes())?;
        }
        Command::Plotdata(args) => {
            let mut set = load(&args.dataset)?;
            if let Some(spec) = &args.spec {
                set = perturbed(&set, spec)?;
            }
            let mode = args.mode.into();
            let points = plot_points(
                &set,
                mode,
                args.max_citations,
                args.common.degenerate_policy.into(),
            )?;
            let text = render_plot(&points, mode, args.common.precision.unwrap_or(4));
            stdout.write_all(text.as_bytes())?;
            if let Some(out) = &args.common.out {
                std::fs::write(out, text)?;
            }
        }
        Command::Generate(args) => {
            let set = match args.model {
                Model::Table1Orig => table1_models().original,
                Model::Table1Mod1 => table1_models().first_modification,
                Model::Table1Mod2 => table1_models().second_modification,
                Model::Table2A => field_case(CaseId::A).to_reference_set(),
                Model::Table2B => field_case(CaseId::B).to_reference_set(),
                Model::Table2C => field_case(CaseId::C).to_reference_set(),
                Model::Table2D => field_case(CaseId::D).to_reference_set(),
            };
            match &args.out {
                Some(path) => write_dataset(&set, create(path)?)?,
                None => write_dataset(&set, &mut *stdout)?,
            }
        }
    }
    Ok(())
}
