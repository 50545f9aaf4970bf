//! Command-line driver: builds the lattice and initial field, runs the
//! automaton, and writes snapshots, the convergence CSV and a run summary.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use thiserror::Error;

use crate::analysis::{build_report, write_csv, Provenance};
use crate::automaton::{
    run, AutomatonError, MajorityRule, Rule, RunOptions, Stepper, Termination, DEFAULT_CYCLE_WINDOW,
};
use crate::field::{Field, FieldError, InitSpec};
use crate::lattice::{Boundary, LatticeKind, LatticeSpec, QuadNeighborhood};
use crate::render::{render, write_pgm, RenderConfig, RenderError};

/// Name and version of the generator behind random initial fields.
pub const PRNG_DESCRIPTION: &str = "ChaCha8 (rand_chacha 0.3.1, seed_from_u64)";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    /// `--help` was requested; the payload is the rendered help text.
    #[error("{0}")]
    Help(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Help(_) => EXIT_OK,
            CliError::Usage(_) => EXIT_USAGE,
        }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LatticeArg {
    Hex,
    Quad,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BoundaryArg {
    Periodic,
    Clamped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NeighborhoodArg {
    Vn4,
    Moore8,
}

/// Majority-rule cellular automaton on hexagonal and quadratic lattices.
#[derive(Debug, Parser)]
#[command(name = "lizard-ca", version)]
struct Args {
    /// Lattice kind.
    #[arg(long, value_enum, default_value = "hex")]
    lattice: LatticeArg,
    /// Columns.
    #[arg(long, default_value_t = 100)]
    width: usize,
    /// Rows (must be even for a periodic hex lattice).
    #[arg(long, default_value_t = 100)]
    height: usize,
    #[arg(long, value_enum, default_value = "periodic")]
    boundary: BoundaryArg,
    /// Neighborhood on the quadratic lattice (ignored for hex).
    #[arg(long, value_enum, default_value = "vn4")]
    quad_neighborhood: NeighborhoodArg,
    /// Alphabet size k.
    #[arg(long, default_value_t = 2)]
    states: usize,
    /// Probability of state 1 (two states only).
    #[arg(long, conflicts_with = "probs")]
    p1: Option<f64>,
    /// Comma-separated probabilities of states 0..k.
    #[arg(long, value_delimiter = ',')]
    probs: Option<Vec<f64>>,
    /// PRNG seed for the initial field.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Maximum number of CA actions.
    #[arg(long, default_value_t = 10)]
    actions: usize,
    /// Comma-separated action indices to snapshot (0 = initial field).
    #[arg(long, value_delimiter = ',', default_value = "0,1,2,10")]
    snapshots: Vec<usize>,
    /// Cell size in pixels (square edge, or hexagon circumradius).
    #[arg(long, default_value_t = 6)]
    cell_px: usize,
    /// Output directory.
    #[arg(long, default_value = "./out")]
    out: PathBuf,
}

/// Validated configuration of one pipeline run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub lattice: LatticeSpec,
    pub init: InitSpec,
    pub max_actions: usize,
    pub snapshots: BTreeSet<usize>,
    pub cell_px: usize,
    pub out_dir: PathBuf,
}

impl RunConfig {
    /// Defaults for everything except the lattice and seed.
    pub fn new(lattice: LatticeSpec, seed: u64) -> Self {
        Self {
            lattice,
            init: InitSpec::binary(0.5, seed).expect("0.5 is a valid probability"),
            max_actions: 10,
            snapshots: BTreeSet::from([0, 1, 2, 10]),
            cell_px: 6,
            out_dir: PathBuf::from("./out"),
        }
    }
}

/// Parses an argument vector (including the program name) into a
/// [`RunConfig`], enforcing every lattice and distribution invariant.
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = Args::try_parse_from(argv).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
            CliError::Help(e.render().to_string())
        }
        _ => CliError::Usage(e.render().to_string()),
    })?;
    let usage = |msg: String| CliError::Usage(format!("error: {msg}"));

    let kind = match args.lattice {
        LatticeArg::Hex => LatticeKind::Hexagonal,
        LatticeArg::Quad => LatticeKind::Quadratic,
    };
    let boundary = match args.boundary {
        BoundaryArg::Periodic => Boundary::Periodic,
        BoundaryArg::Clamped => Boundary::Clamped,
    };
    let neighborhood = match args.quad_neighborhood {
        NeighborhoodArg::Vn4 => QuadNeighborhood::VonNeumann4,
        NeighborhoodArg::Moore8 => QuadNeighborhood::Moore8,
    };
    let lattice = LatticeSpec::new(kind, args.width, args.height, boundary, neighborhood)
        .map_err(|e| usage(e.to_string()))?;

    let k = args.states;
    let probabilities = match (args.p1, args.probs) {
        (Some(_), _) if k != 2 => {
            return Err(usage(format!(
                "--p1 needs --states 2, got {k}; use --probs"
            )))
        }
        (Some(p1), _) => vec![1.0 - p1, p1],
        (None, Some(probs)) if probs.len() != k => {
            return Err(usage(format!(
                "--probs has {} entries but --states is {k}",
                probs.len()
            )))
        }
        (None, Some(probs)) => probs,
        (None, None) if k < 2 => {
            return Err(usage(format!("--states must be at least 2, got {k}")))
        }
        (None, None) => vec![1.0 / k as f64; k],
    };
    let init = InitSpec::new(probabilities, args.seed).map_err(|e| usage(e.to_string()))?;

    if args.actions == 0 {
        return Err(usage("--actions must be at least 1".into()));
    }
    if let Some(&bad) = args.snapshots.iter().find(|&&s| s > args.actions) {
        return Err(usage(format!(
            "snapshot index {bad} exceeds --actions {}",
            args.actions
        )));
    }
    if args.cell_px == 0 {
        return Err(usage("--cell-px must be at least 1".into()));
    }

    Ok(RunConfig {
        lattice,
        init,
        max_actions: args.actions,
        snapshots: args.snapshots.into_iter().collect(),
        cell_px: args.cell_px,
        out_dir: args.out,
    })
}

/// How a scheduled snapshot was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnapshotSource {
    /// Captured while running.
    Reached,
    /// Scheduled after a fixed point; the fixed-point field is written.
    FixedPoint { at_action: usize },
    /// Scheduled after a detected cycle; the field is the cycle state with the
    /// same phase.
    CyclePhase {
        period: usize,
        first_detected_at: usize,
    },
}

#[derive(Debug, Clone)]
pub struct PipelineSummary {
    pub termination: Termination,
    pub actions_executed: usize,
    pub total_changes: usize,
    pub snapshots: BTreeMap<usize, SnapshotSource>,
    pub files: Vec<PathBuf>,
}

/// Runs the pipeline from the seeded random field described by `cfg`.
pub fn run_pipeline(cfg: &RunConfig) -> Result<PipelineSummary, PipelineError> {
    let initial = Field::random(cfg.lattice, &cfg.init);
    execute(cfg, initial, false)
}

/// Runs the pipeline from a caller-supplied initial field instead of a random
/// one. The field must live on `cfg.lattice`.
pub fn run_pipeline_with_initial(
    cfg: &RunConfig,
    initial: Field,
) -> Result<PipelineSummary, PipelineError> {
    if *initial.lattice() != cfg.lattice {
        return Err(AutomatonError::ShapeMismatch {
            field: *initial.lattice(),
            lattice: cfg.lattice,
        }
        .into());
    }
    execute(cfg, initial, true)
}

fn execute(
    cfg: &RunConfig,
    initial: Field,
    injected: bool,
) -> Result<PipelineSummary, PipelineError> {
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| PipelineError::Io { path, source }
    };
    fs::create_dir_all(&cfg.out_dir).map_err(io_err(&cfg.out_dir))?;

    let rule = MajorityRule;
    let options = RunOptions::new(cfg.max_actions)
        .with_snapshots(cfg.snapshots.iter().copied())
        .with_cycle_window(DEFAULT_CYCLE_WINDOW);
    let outcome = run(&initial, &cfg.lattice, &rule, &options)?;
    let termination = outcome.trace.termination();
    let executed = outcome.trace.actions();

    let mut fields = outcome.snapshots;
    let mut sources: BTreeMap<usize, SnapshotSource> = fields
        .keys()
        .map(|&a| (a, SnapshotSource::Reached))
        .collect();
    let stepper = Stepper::new(cfg.lattice, &rule);
    for &action in cfg.snapshots.iter().filter(|&&a| a > executed) {
        let (field, source) = match termination {
            Termination::FixedPoint { at_action } => (
                outcome.final_field.clone(),
                SnapshotSource::FixedPoint { at_action },
            ),
            Termination::Cycle {
                period,
                first_detected_at,
            } => {
                let mut f = outcome.final_field.clone();
                for _ in 0..(action - first_detected_at) % period {
                    f = stepper.step(&f)?.0;
                }
                (
                    f,
                    SnapshotSource::CyclePhase {
                        period,
                        first_detected_at,
                    },
                )
            }
            Termination::BudgetExhausted { .. } => {
                unreachable!("snapshot indices never exceed the action budget")
            }
        };
        fields.insert(action, field);
        sources.insert(action, source);
    }

    let render_cfg = RenderConfig::new(cfg.cell_px, cfg.init.k());
    let mut files = Vec::new();
    for (action, field) in &fields {
        let path = cfg.out_dir.join(format!("pattern_A{action:04}.pgm"));
        let raster = render(field, &render_cfg)?;
        write_pgm(&raster, &path).map_err(io_err(&path))?;
        files.push(path);
    }

    let report = build_report(
        &outcome.trace,
        Provenance {
            seed: cfg.init.seed(),
            lattice: cfg.lattice.to_string(),
            rule: rule.name().to_string(),
        },
    );
    let csv_path = cfg.out_dir.join("trace.csv");
    write_csv(&report, &csv_path).map_err(io_err(&csv_path))?;
    files.push(csv_path);

    let summary = PipelineSummary {
        termination,
        actions_executed: executed,
        total_changes: outcome.trace.total_changes(),
        snapshots: sources,
        files,
    };
    let txt_path = cfg.out_dir.join("run.txt");
    fs::write(
        &txt_path,
        summary_text(cfg, &summary, injected, rule.name()),
    )
    .map_err(io_err(&txt_path))?;
    let mut summary = summary;
    summary.files.push(txt_path);
    Ok(summary)
}

fn summary_text(cfg: &RunConfig, s: &PipelineSummary, injected: bool, rule: &str) -> String {
    let lat = &cfg.lattice;
    let join = |it: &mut dyn Iterator<Item = String>| it.collect::<Vec<_>>().join(",");
    let mut out = String::new();
    let mut line = |k: &str, v: &dyn std::fmt::Display| {
        writeln!(out, "{k}: {v}").expect("writing to a String cannot fail");
    };
    line("lattice", &lat.kind());
    line("width", &lat.width());
    line("height", &lat.height());
    line("boundary", &lat.boundary());
    if lat.kind() == LatticeKind::Quadratic {
        line("quad_neighborhood", &lat.quad_neighborhood());
    }
    line("states", &cfg.init.k());
    line(
        "probabilities",
        &join(&mut cfg.init.probabilities().iter().map(|p| p.to_string())),
    );
    line("seed", &cfg.init.seed());
    line("prng", &PRNG_DESCRIPTION);
    line(
        "initial_field",
        &if injected { "injected" } else { "random" },
    );
    line("rule", &rule);
    line("max_actions", &cfg.max_actions);
    line(
        "snapshots",
        &join(&mut cfg.snapshots.iter().map(|a| a.to_string())),
    );
    line("cell_px", &cfg.cell_px);
    line("actions_executed", &s.actions_executed);
    line("total_changes", &s.total_changes);
    line("termination", &s.termination);
    for (action, source) in &s.snapshots {
        match source {
            SnapshotSource::Reached => {}
            SnapshotSource::FixedPoint { at_action } => line(
                "substituted_snapshot",
                &format!("A={action} uses fixed point reached at action {at_action}"),
            ),
            SnapshotSource::CyclePhase {
                period,
                first_detected_at,
            } => line(
                "substituted_snapshot",
                &format!(
                    "A={action} uses cycle phase (period {period}, detected at action {first_detected_at})"
                ),
            ),
        }
    }
    out
}

/// Entry point used by the binary. Returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match parse_args(argv) {
        Ok(cfg) => cfg,
        Err(CliError::Help(text)) => {
            print!("{text}");
            return EXIT_OK;
        }
        Err(e) => {
            eprint!("{e}");
            if !e.to_string().ends_with('\n') {
                eprintln!();
            }
            return e.exit_code();
        }
    };
    match run_pipeline(&cfg) {
        Ok(summary) => {
            println!(
                "{}: {} actions, {} changes, wrote {} files to {}",
                summary.termination,
                summary.actions_executed,
                summary.total_changes,
                summary.files.len(),
                cfg.out_dir.display()
            );
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_RUNTIME
        }
    }
}
