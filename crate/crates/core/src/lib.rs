//! Majority-rule cellular automata that turn seeded random fields into
//! labyrinthine two-tone patterns on hexagonal and quadratic lattices.
//!
//! ```
//! use lizard_ca::{run, Boundary, Field, InitSpec, LatticeSpec, MajorityRule, RunOptions};
//!
//! let lattice = LatticeSpec::hexagonal(40, 40, Boundary::Periodic).unwrap();
//! let initial = Field::random(lattice, &InitSpec::binary(0.5, 7).unwrap());
//! let outcome = run(&initial, &lattice, &MajorityRule, &RunOptions::new(50)).unwrap();
//! println!("{} after {} actions", outcome.trace.termination(), outcome.trace.actions());
//! ```

pub mod analysis;
pub mod automaton;
pub mod cli;
pub mod field;
pub mod lattice;
pub mod render;

pub use analysis::{build_report, ConvergenceReport, Provenance, ReportRow};
pub use automaton::{
    majority_next_state, run, step, AutomatonError, MajorityRule, Rule, RunOptions, RunOutcome,
    RunTrace, Stepper, Termination,
};
pub use field::{Field, FieldDigest, FieldError, InitSpec, State};
pub use lattice::{
    Boundary, CellIndex, LatticeError, LatticeKind, LatticeSpec, NeighborTable, QuadNeighborhood,
};
pub use render::{render, render_hex, render_quad, Raster, RenderConfig, RenderError};
