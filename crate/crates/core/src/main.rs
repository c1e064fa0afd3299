use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use semilin::commutation::{check_gl_mapping, check_pgl_mapping, exhaustive_gl_search, sampled_gl_search, CheckMode};
use semilin::extendability::{
    classify_linear_subset, classify_projective_subset, transposition_report_linear, transposition_report_projective,
    TranspositionReport,
};
use semilin::gf::Field;
use semilin::io::{
    gl_report_to_json, load_mapping, load_point_map, matrix_to_json, pgl_report_to_json, reconstruction_to_json,
    save_json, search_report_to_json, to_pretty, ARTIFACT_VERSION,
};
use semilin::linalg::{Vector, VectorSpace};
use semilin::projective::{normalize, ProjectiveSpace};
use semilin::reconstruct::reconstruct_semilinear;
use semilin::suites::{run_suite, SuiteConfig, SUITES};
use semilin::{Error, Result};

/// Semilinear maps, GL-mappings and permutation extendability over small finite fields.
#[derive(Parser, Debug)]
#[command(name = "semilin", version)]
struct Cli {
    /// Worker threads for partitionable sweeps (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Seed for sampled modes.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Omit wall-clock timings so reports are byte-identical across runs.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a subset of vectors or projective points by permutation extendability.
    Classify {
        /// Field such as GF(3) or GF(2^2).
        #[arg(long)]
        field: Field,
        /// Dimension of the ambient vector space.
        #[arg(long)]
        dim: usize,
        /// Semicolon-separated points with comma-separated coordinates, e.g. "1,0;0,1;1,1".
        #[arg(long)]
        points: String,
        /// Treat the points as projective points.
        #[arg(long)]
        projective: bool,
    },
    /// Decide whether a mapping table commutes with GL up to a partner.
    CheckGl {
        #[arg(long)]
        mapping: PathBuf,
        /// Quantify over the whole group instead of generators.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Decide whether a point map commutes with PGL up to a partner.
    CheckPgl {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        exhaustive: bool,
    },
    /// Recover a semilinear map inducing the given point map.
    Reconstruct {
        #[arg(long)]
        map: PathBuf,
    },
    /// Count GL-mappings between two spaces and test each for strong embedding.
    Search {
        /// Domain such as GF(2)^3.
        #[arg(long)]
        domain: VectorSpace,
        #[arg(long)]
        codomain: VectorSpace,
        /// Examine this many seeded random tables instead of all of them.
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Run a named verification suite.
    Verify {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: String,
        /// Largest subset size for the subset suites.
        #[arg(long)]
        max_size: Option<usize>,
        /// Sample count for the sampled suites.
        #[arg(long)]
        samples: Option<u64>,
    },
}

fn parse_points(field: &Field, dim: usize, text: &str) -> Result<Vec<Vector>> {
    text.split(';')
        .map(|chunk| {
            let coords = chunk
                .split(',')
                .map(|c| c.trim().parse::<u8>().map_err(|_| Error::Parse(format!("invalid coordinate {c:?}"))))
                .collect::<Result<Vec<u8>>>()?;
            if coords.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: coords.len() });
            }
            Vector::new(field, coords)
        })
        .collect()
}

fn witnesses(r: &TranspositionReport) -> Value {
    json!({
        "failing_transposition": r.failing_transposition,
        "extension_matrices": r.extensions.iter().map(|((i, j), m)| json!({
            "transposition": [i, j],
            "matrix": matrix_to_json(m),
        })).collect::<Vec<_>>(),
    })
}

/// `class` and, for parametrized classes, `m`, next to the transposition witnesses.
fn classification(class: serde_json::Result<Value>, r: &TranspositionReport) -> Value {
    let mut v = class.expect("plain enum serializes");
    v["fully_extendable"] = json!(r.fully_extendable);
    v["witnesses"] = witnesses(r);
    v
}

/// Produces the report and whether it contradicts the expected outcome.
fn execute(cli: &Cli) -> Result<(Value, bool)> {
    let start = Instant::now();
    let (mut report, contradiction) = match &cli.command {
        Command::Classify { field, dim, points, projective } => {
            let vs = parse_points(field, *dim, points)?;
            if *projective {
                let space = ProjectiveSpace::new(field, *dim);
                let ps = vs.iter().map(normalize).collect::<Result<Vec<_>>>()?;
                let class = classify_projective_subset(&space, &ps)?;
                let r = transposition_report_projective(&space, &ps)?;
                (classification(serde_json::to_value(class), &r), false)
            } else {
                let class = classify_linear_subset(&vs)?;
                let r = transposition_report_linear(&vs)?;
                (classification(serde_json::to_value(class), &r), false)
            }
        }
        Command::CheckGl { mapping, exhaustive } => {
            let g = load_mapping(mapping)?;
            (gl_report_to_json(&check_gl_mapping(&g, mode(*exhaustive))?), false)
        }
        Command::CheckPgl { map, exhaustive } => {
            let f = load_point_map(map)?;
            (pgl_report_to_json(&check_pgl_mapping(&f, mode(*exhaustive))?), false)
        }
        Command::Reconstruct { map } => {
            let f = load_point_map(map)?;
            (reconstruction_to_json(&reconstruct_semilinear(&f)), false)
        }
        Command::Search { domain, codomain, samples } => {
            let r = match samples {
                Some(s) => sampled_gl_search(domain, codomain, *s, cli.seed, cli.threads)?,
                None => exhaustive_gl_search(domain, codomain, cli.threads)?,
            };
            let bad = !r.exploratory() && r.strong_embeddings != r.nontrivial_gl_dim_le_n;
            (search_report_to_json(&r), bad)
        }
        Command::Verify { suite, max_size, samples } => {
            let cfg = SuiteConfig {
                threads: cli.threads,
                seed: cli.seed,
                timing: false,
                max_size: *max_size,
                samples: *samples,
                ..SuiteConfig::default()
            };
            let r = run_suite(suite, &cfg)?;
            (r.to_json(), !r.passed)
        }
    };
    if let Value::Object(map) = &mut report {
        map.entry("artifact_version").or_insert(json!(ARTIFACT_VERSION));
        if !cli.no_timing {
            map.insert("wall_time_ms".into(), json!(start.elapsed().as_millis()));
        }
    }
    Ok((report, contradiction))
}

fn mode(exhaustive: bool) -> CheckMode {
    if exhaustive {
        CheckMode::Exhaustive
    } else {
        CheckMode::Generators
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli).and_then(|(report, bad)| {
        if let Some(path) = &cli.out {
            save_json(path, &report)?;
        }
        print!("{}", to_pretty(&report));
        Ok(bad)
    }) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
