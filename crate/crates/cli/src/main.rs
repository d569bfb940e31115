//! `ranksum`: ordinal calculator, ranked-sum rank queries, and bound checks.
//!
//! Exit status: 0 when the command succeeds and every checked bound holds,
//! 1 when a bound is violated, 2 on usage, input or evaluation errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use ranksum::lemma::{self, BoundKind, CheckSummary, ExhaustiveBounds, GapReport, RandomSizes};
use ranksum::poset::Label;
use ranksum::rankedsum::{Address, RankedFamily};
use ranksum::{DepthCap, Ordinal};

#[derive(Parser, Debug)]
#[command(
    name = "ranksum",
    version,
    about = "Ordinal ranks of ranked sums of posets"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Maximum nesting depth of ordinal exponents.
    #[arg(long, global = true, default_value_t = ranksum::ordinal::DEFAULT_DEPTH_CAP)]
    depth_cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Original,
    Switched,
}

impl From<Kind> for BoundKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Original => BoundKind::Original,
            Kind::Switched => BoundKind::Switched,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normalize an ordinal expression, e.g. "1+w".
    Eval { expr: String },
    /// Rank of one element of the ranked sum described by a family file.
    Rank {
        family: PathBuf,
        /// Index element.
        #[arg(long)]
        t: String,
        /// Element of the component at that index.
        #[arg(long)]
        a: String,
    },
    /// Compare an element's rank against a bound.
    Check {
        family: PathBuf,
        #[arg(long)]
        t: String,
        #[arg(long)]
        a: String,
        #[arg(long, value_enum, default_value_t = Kind::Original)]
        kind: Kind,
    },
    /// Build the family on which the chosen bound fails by exactly alpha.
    Counterexample {
        #[arg(long)]
        alpha: String,
        #[arg(long, value_enum, default_value_t = Kind::Original)]
        kind: Kind,
    },
    /// Check the original bound on random finite families.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: u64,
        #[arg(long, default_value_t = 4)]
        index_size: usize,
        #[arg(long, default_value_t = 4)]
        component_size: usize,
    },
    /// Check the original bound on every small labelled finite family.
    Exhaust {
        #[arg(long, default_value_t = 3)]
        index_size: usize,
        #[arg(long, default_value_t = 3)]
        component_size: usize,
        #[arg(long, default_value_t = 3)]
        components: usize,
    },
}

/// What a command produced: a JSON document, its text rendering, and
/// whether every checked bound held.
struct Outcome {
    json: serde_json::Value,
    text: String,
    holds: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let format = cli.format;
    match execute(cli) {
        Ok(outcome) => {
            match format {
                Format::Json => {
                    println!("{}", serde_json::to_string_pretty(&outcome.json).unwrap())
                }
                Format::Text => print!("{}", outcome.text),
            }
            ExitCode::from(if outcome.holds { 0 } else { 1 })
        }
        Err(e) => {
            let message = format!("{e:#}");
            eprintln!("error: {message}");
            if format == Format::Json {
                println!("{}", json!({ "error": message }));
            }
            ExitCode::from(2)
        }
    }
}

fn parse_ordinal(text: &str, cap: DepthCap) -> Result<Ordinal> {
    Ordinal::parse_with_cap(text, cap).with_context(|| format!("in ordinal expression '{text}'"))
}

fn load_family(path: &Path, cap: DepthCap) -> Result<RankedFamily> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    RankedFamily::from_json(&text, cap)
        .with_context(|| format!("in family file {}", path.display()))
}

fn address(t: &str, a: &str) -> Address {
    Address {
        t: Label::Text(t.to_owned()),
        a: Label::Text(a.to_owned()),
    }
}

fn report_text(report: &GapReport) -> String {
    let kind = match report.bound_kind {
        BoundKind::Original => "original",
        BoundKind::Switched => "switched",
    };
    let gap = report
        .gap
        .as_ref()
        .map_or("none".to_string(), Ordinal::to_string);
    format!(
        "element {}\nrank    {}\nbound   {} ({kind})\nholds   {}\ngap     {gap}\n",
        report.element, report.rank, report.bound, report.holds
    )
}

fn summary_outcome(summary: CheckSummary, started: Instant) -> Result<Outcome> {
    let holds = summary.holds();
    let mut text = format!(
        "{} families, {} elements checked, {} violations ({:.2?})\n",
        summary.families,
        summary.elements,
        summary.violations,
        started.elapsed()
    );
    if let Some(v) = &summary.first_violation {
        text.push_str("first violation:\n");
        text.push_str(&serde_json::to_string_pretty(v)?);
        text.push('\n');
    }
    text.push_str(if holds {
        "verdict: holds\n"
    } else {
        "verdict: violated\n"
    });
    #[derive(Serialize)]
    struct Doc<'a> {
        verdict: &'a str,
        #[serde(flatten)]
        summary: CheckSummary,
    }
    let json = serde_json::to_value(Doc {
        verdict: if holds { "holds" } else { "violated" },
        summary,
    })?;
    Ok(Outcome { json, text, holds })
}

fn execute(cli: Cli) -> Result<Outcome> {
    let cap = DepthCap(cli.depth_cap);
    match cli.command {
        Command::Eval { expr } => {
            let value = parse_ordinal(&expr, cap)?;
            Ok(Outcome {
                json: json!({ "input": expr, "value": value }),
                text: format!("{value}\n"),
                holds: true,
            })
        }
        Command::Rank { family, t, a } => {
            let fam = load_family(&family, cap)?;
            let e = fam.resolve(&address(&t, &a), cap)?;
            let (rank, engine) = fam.rank(&e)?;
            let element = fam.address(&e);
            Ok(Outcome {
                text: format!("rank {element} = {rank}\n"),
                json: json!({ "element": element, "rank": rank, "engine": engine }),
                holds: true,
            })
        }
        Command::Check { family, t, a, kind } => {
            let fam = load_family(&family, cap)?;
            let e = fam.resolve(&address(&t, &a), cap)?;
            let report = lemma::check(&fam, &e, kind.into())?;
            Ok(Outcome {
                text: report_text(&report),
                holds: report.holds,
                json: serde_json::to_value(&report)?,
            })
        }
        Command::Counterexample { alpha, kind } => {
            let alpha = parse_ordinal(&alpha, cap)?;
            let kind: BoundKind = kind.into();
            let (fam, e) = match kind {
                BoundKind::Original => lemma::build_gap_family(&alpha, cap)?,
                BoundKind::Switched => lemma::build_switched_gap_family(&alpha, cap)?,
            };
            let report = lemma::check(&fam, &e, kind)?;
            #[derive(Serialize)]
            struct Doc<'a> {
                #[serde(flatten)]
                report: &'a GapReport,
                alpha: &'a Ordinal,
                family: ranksum::FamilySpec,
            }
            let json = serde_json::to_value(Doc {
                report: &report,
                alpha: &alpha,
                family: fam.to_spec(),
            })?;
            let text = format!(
                "index {}\ncomponents {}\n{}",
                fam.index(),
                match fam.components() {
                    ranksum::Components::Uniform(p) => p.to_string(),
                    ranksum::Components::PerIndex(_) => "per index".to_string(),
                },
                report_text(&report)
            );
            Ok(Outcome {
                json,
                text,
                holds: report.holds,
            })
        }
        Command::Fuzz {
            seed,
            count,
            index_size,
            component_size,
        } => {
            let started = Instant::now();
            let summary = lemma::fuzz(
                seed,
                count,
                RandomSizes {
                    max_index_size: index_size,
                    max_component_size: component_size,
                },
            )?;
            summary_outcome(summary, started)
        }
        Command::Exhaust {
            index_size,
            component_size,
            components,
        } => {
            let started = Instant::now();
            let summary = lemma::exhaustive_finite_check(ExhaustiveBounds {
                max_index_size: index_size,
                max_component_size: component_size,
                max_components: components,
            })?;
            summary_outcome(summary, started)
        }
    }
}
