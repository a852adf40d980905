//! Command-line workbench: validate documents, compute equivariant homology
//! through the reduction pipeline, compute group homology, and run the
//! deterministic selftest battery.
//!
//! Exit codes: `0` success, `1` a validated invariant fails (bad document
//! semantics, a failed identity, a failed selftest check), `2` usage or
//! parse errors.

use clap::{Parser, Subcommand};
use equichain::bar::RInftyAction;
use equichain::complex::FreeModuleTerm;
use equichain::dga::Dga;
use equichain::docs::{
    gen_bar_complex, gen_bar_resolution, gen_lens_complex, parse_builtin, parse_document,
    parse_group_ref, strict_module_action, trivial_span, AnyDocument, BuiltinInput,
    HomologyTable, TableFormat,
};
use equichain::element::Term;
use equichain::error::{Error, Result};
use equichain::homology::{
    cohomology_groups, homology_groups, quotient_by_g, AbelianGroupDescriptor,
};
use equichain::pipeline::equivariant_strong_equivalence;
use equichain::reduction::{SampleCfg, StrongEquivalence};
use equichain::selftest::run_selftest;
use std::path::PathBuf;
use std::sync::Arc;

#[derive(Parser)]
#[command(
    name = "equichain",
    version,
    about = "Equivariant chain-level workbench over group rings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a group or complex document and check every invariant.
    Validate {
        /// Path to a JSON document.
        file: PathBuf,
    },
    /// Equivariant homology of a module through the reduction pipeline.
    EquivariantHomology {
        /// Path to a complex document, or a builtin reference
        /// (builtin:bar:<n>, builtin:lens:<p>:<k>).
        #[arg(long)]
        input: String,
        /// Largest homological degree to report.
        #[arg(long)]
        max_degree: i64,
        /// Report cohomology instead of homology.
        #[arg(long)]
        cohomology: bool,
        /// Output format: tsv or json.
        #[arg(long, default_value = "tsv")]
        format: String,
        /// Seed for validation sampling (overrides EQUICHAIN_SEED).
        #[arg(long)]
        seed: Option<u64>,
        /// Random samples drawn per degree during validation.
        #[arg(long, default_value_t = 4)]
        samples: usize,
    },
    /// Integral homology of a finite group via its standard resolution.
    GroupHomology {
        /// cyclic:<n>, symmetric:<n>, or a path to a group document.
        #[arg(long)]
        group: String,
        /// Largest homological degree to report.
        #[arg(long)]
        max_degree: i64,
        /// Report cohomology instead of homology.
        #[arg(long)]
        cohomology: bool,
        /// Output format: tsv or json.
        #[arg(long, default_value = "tsv")]
        format: String,
    },
    /// Run the deterministic self-test battery and print its report.
    Selftest {
        /// Seed for all sampled checks (overrides EQUICHAIN_SEED).
        #[arg(long)]
        seed: Option<u64>,
        /// Degree bound for the battery.
        #[arg(long, default_value_t = 2)]
        max_degree: i64,
    },
}

fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("EQUICHAIN_SEED") {
        Ok(text) => text.parse().map_err(|_| {
            Error::Usage(format!("EQUICHAIN_SEED is not an integer: `{text}`"))
        }),
        Err(_) => Ok(equichain::default_seed()),
    }
}

/// Runs the full pipeline on a span and reads the (co)homology of the
/// quotiented target off its integral matrices.
fn run_pipeline_homology<Mid, S, N>(
    ring: &Arc<Dga>,
    m_action: &RInftyAction<S>,
    se: &StrongEquivalence<Mid, S, N>,
    max_degree: i64,
    cohomology: bool,
    cfg: &SampleCfg,
) -> Result<Vec<(i64, AbelianGroupDescriptor)>>
where
    Mid: FreeModuleTerm,
    S: FreeModuleTerm,
    N: Term,
{
    let result = equivariant_strong_equivalence(m_action, se, max_degree, cfg)?;
    let mc = quotient_by_g(&result.target, ring, max_degree + 1)?;
    let mut rows = Vec::new();
    for k in 0..=max_degree {
        let d = if cohomology {
            cohomology_groups(&mc, k)?
        } else {
            homology_groups(&mc, k)?
        };
        rows.push((k, d));
    }
    Ok(rows)
}

fn cmd_validate(file: &PathBuf) -> Result<()> {
    let text = std::fs::read_to_string(file)?;
    match parse_document(&text)? {
        AnyDocument::Group(doc) => {
            let group = doc.to_group()?;
            println!(
                "ok: group of order {}{}",
                group.order(),
                if group.is_abelian() { " (abelian)" } else { "" }
            );
        }
        AnyDocument::Complex(doc) => {
            let (ring, cx) = doc.to_complex()?;
            let ranks: Vec<usize> = doc.degrees.iter().map(|d| d.rank).collect();
            println!(
                "ok: complex `{}` over {} with ranks {ranks:?}",
                cx.name(),
                ring.name()
            );
        }
    }
    Ok(())
}

fn cmd_equivariant_homology(
    input: &str,
    max_degree: i64,
    cohomology: bool,
    format: TableFormat,
    seed: u64,
    samples: usize,
) -> Result<()> {
    if max_degree < 0 {
        return Err(Error::Usage("--max-degree must be nonnegative".into()));
    }
    let cfg = SampleCfg::new(max_degree, samples, seed);
    let rows = if input.starts_with("builtin:") {
        match parse_builtin(input)? {
            BuiltinInput::BarResolution(n) => {
                let group = equichain::group::FiniteGroup::cyclic(n)?;
                let span = gen_bar_resolution(&group, max_degree, &cfg)?;
                run_pipeline_homology(
                    &span.ring,
                    &span.action,
                    &span.se,
                    max_degree,
                    cohomology,
                    &cfg,
                )?
            }
            BuiltinInput::Lens(p, k) => {
                let (ring, cx) = gen_lens_complex(p, k)?;
                let action = strict_module_action(&cx, &ring);
                let se = trivial_span(&cx);
                run_pipeline_homology(&ring, &action, &se, max_degree, cohomology, &cfg)?
            }
        }
    } else {
        let text = std::fs::read_to_string(input)?;
        let doc = match parse_document(&text)? {
            AnyDocument::Complex(doc) => doc,
            AnyDocument::Group(_) => {
                return Err(Error::Usage(format!(
                    "`{input}` is a group document; equivariant homology needs a complex \
                     (use group-homology for groups)"
                )));
            }
        };
        let (ring, cx) = doc.to_complex()?;
        let action = strict_module_action(&cx, &ring);
        let se = trivial_span(&cx);
        run_pipeline_homology(&ring, &action, &se, max_degree, cohomology, &cfg)?
    };
    print!("{}", HomologyTable { cohomology, rows }.render(format));
    Ok(())
}

fn cmd_group_homology(
    group_ref: &str,
    max_degree: i64,
    cohomology: bool,
    format: TableFormat,
) -> Result<()> {
    if max_degree < 0 {
        return Err(Error::Usage("--max-degree must be nonnegative".into()));
    }
    let group = parse_group_ref(group_ref)?;
    // The standard resolution is free over the group ring, so its orbit
    // quotient computes the group's integral (co)homology directly.
    let (ring, _, w) = gen_bar_complex(&group, max_degree);
    let mc = quotient_by_g(&w, &ring, max_degree + 1)?;
    let mut rows = Vec::new();
    for k in 0..=max_degree {
        let d = if cohomology {
            cohomology_groups(&mc, k)?
        } else {
            homology_groups(&mc, k)?
        };
        rows.push((k, d));
    }
    print!("{}", HomologyTable { cohomology, rows }.render(format));
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Validate { file } => cmd_validate(&file),
        Command::EquivariantHomology {
            input,
            max_degree,
            cohomology,
            format,
            seed,
            samples,
        } => {
            let format: TableFormat = format.parse()?;
            let seed = resolve_seed(seed)?;
            cmd_equivariant_homology(&input, max_degree, cohomology, format, seed, samples)
        }
        Command::GroupHomology {
            group,
            max_degree,
            cohomology,
            format,
        } => {
            let format: TableFormat = format.parse()?;
            cmd_group_homology(&group, max_degree, cohomology, format)
        }
        Command::Selftest { seed, max_degree } => {
            let seed = resolve_seed(seed)?;
            let report = run_selftest(seed, max_degree)?;
            print!("{}", report.text);
            if report.all_passed() {
                Ok(())
            } else {
                Err(Error::Precondition {
                    op: "selftest".into(),
                    reason: format!("{} checks failed", report.failed),
                })
            }
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_) | Error::Json(_) | Error::Io(_) => 2,
        _ => 1,
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(exit_code(&e));
    }
}
