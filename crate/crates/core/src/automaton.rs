//! Synchronous cellular-automaton dynamics.
//!
//! One *action* maps the whole old field to a new one: every cell reads its
//! own state and its neighbors' states from the old field only, then all
//! cells switch at once. The local map is a [`Rule`]; [`MajorityRule`] is the
//! shipped instance.
//!
//! [`run`] repeats actions, records the number of changed cells per action
//! and stops on a fixed point, on a detected cycle, or when the action budget
//! runs out.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::field::{Field, FieldDigest, FieldError, State, MAX_ALPHABET};
use crate::lattice::{LatticeSpec, NeighborTable};

/// Default number of recent fields kept for cycle detection.
pub const DEFAULT_CYCLE_WINDOW: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AutomatonError {
    #[error("state {state} is not below k = {k}")]
    StateOutOfRange { state: usize, k: usize },
    #[error("empty neighborhood")]
    EmptyNeighborhood,
    #[error("field lattice {field} does not match {lattice}")]
    ShapeMismatch {
        field: LatticeSpec,
        lattice: LatticeSpec,
    },
    #[error("invalid run options: {0}")]
    InvalidRunOptions(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Local next-state function of a cellular automaton.
pub trait Rule: Send + Sync {
    fn name(&self) -> &str;

    /// Next state of a cell in `current` surrounded by `neighbors`, over an
    /// alphabet of size `k`. Must be deterministic and return a value below `k`.
    fn next_state(
        &self,
        current: State,
        neighbors: &[State],
        k: usize,
    ) -> Result<State, AutomatonError>;
}

/// Adopt the most frequent neighbor state; on a tie keep the current state if
/// it is among the tied states, otherwise take the smallest tied state.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MajorityRule;

impl Rule for MajorityRule {
    fn name(&self) -> &str {
        "majority"
    }

    fn next_state(
        &self,
        current: State,
        neighbors: &[State],
        k: usize,
    ) -> Result<State, AutomatonError> {
        majority_next_state(current, neighbors, k)
    }
}

/// The majority transition for one cell. The center is not counted.
pub fn majority_next_state(
    current: State,
    neighbors: &[State],
    k: usize,
) -> Result<State, AutomatonError> {
    if k > MAX_ALPHABET {
        return Err(FieldError::InvalidAlphabet(k).into());
    }
    let out_of_range = |s: State| AutomatonError::StateOutOfRange {
        state: s as usize,
        k,
    };
    if current as usize >= k {
        return Err(out_of_range(current));
    }
    if neighbors.is_empty() {
        return Err(AutomatonError::EmptyNeighborhood);
    }
    let mut counts = [0u16; MAX_ALPHABET];
    for &s in neighbors {
        if s as usize >= k {
            return Err(out_of_range(s));
        }
        counts[s as usize] += 1;
    }
    let best = counts[..k].iter().copied().max().unwrap_or(0);
    if counts[current as usize] == best {
        return Ok(current);
    }
    // smallest state reaching the maximum; unique when there is no tie
    let winner = counts[..k].iter().position(|&c| c == best).unwrap_or(0);
    Ok(winner as State)
}

/// Applies a rule to whole fields on a fixed lattice. Building one
/// precomputes the neighbor table, so reuse it across actions.
pub struct Stepper<'r> {
    lattice: LatticeSpec,
    table: NeighborTable,
    rule: &'r dyn Rule,
}

impl<'r> Stepper<'r> {
    pub fn new(lattice: LatticeSpec, rule: &'r dyn Rule) -> Self {
        Self {
            lattice,
            table: lattice.neighbor_table(),
            rule,
        }
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    /// One synchronous action. Returns the new field and the number of cells
    /// that changed.
    pub fn step(&self, field: &Field) -> Result<(Field, usize), AutomatonError> {
        if *field.lattice() != self.lattice {
            return Err(AutomatonError::ShapeMismatch {
                field: *field.lattice(),
                lattice: self.lattice,
            });
        }
        let k = field.k();
        let old = field.states();
        let width = self.lattice.width();
        let mut next = vec![0 as State; old.len()];
        // Rows are independent: every read goes to `old`.
        next.par_chunks_mut(width).enumerate().try_for_each(
            |(row, out)| -> Result<(), AutomatonError> {
                let mut buf = [0 as State; 8];
                for (col, slot) in out.iter_mut().enumerate() {
                    let i = row * width + col;
                    let nbrs = self.table.of(i);
                    for (b, &j) in buf.iter_mut().zip(nbrs) {
                        *b = old[j as usize];
                    }
                    let s = self.rule.next_state(old[i], &buf[..nbrs.len()], k)?;
                    if s as usize >= k {
                        return Err(AutomatonError::StateOutOfRange {
                            state: s as usize,
                            k,
                        });
                    }
                    *slot = s;
                }
                Ok(())
            },
        )?;
        let delta = old.iter().zip(&next).filter(|(a, b)| a != b).count();
        Ok((Field::from_parts_unchecked(self.lattice, k, next), delta))
    }
}

/// One synchronous action of `rule` on `field`.
pub fn step(
    field: &Field,
    lattice: &LatticeSpec,
    rule: &dyn Rule,
) -> Result<(Field, usize), AutomatonError> {
    Stepper::new(*lattice, rule).step(field)
}

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Action `at_action` changed no cell.
    FixedPoint {
        at_action: usize,
    },
    /// The field after `first_detected_at` equals the field `period` actions
    /// earlier, and no shorter period does.
    Cycle {
        period: usize,
        first_detected_at: usize,
    },
    BudgetExhausted {
        max_actions: usize,
    },
}

impl Termination {
    /// Number of actions executed before stopping.
    pub fn actions_executed(&self) -> usize {
        match *self {
            Termination::FixedPoint { at_action } => at_action,
            Termination::Cycle {
                first_detected_at, ..
            } => first_detected_at,
            Termination::BudgetExhausted { max_actions } => max_actions,
        }
    }
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Termination::FixedPoint { at_action } => {
                write!(f, "fixed_point at_action={at_action}")
            }
            Termination::Cycle {
                period,
                first_detected_at,
            } => write!(
                f,
                "cycle period={period} first_detected_at={first_detected_at}"
            ),
            Termination::BudgetExhausted { max_actions } => {
                write!(f, "budget_exhausted max_actions={max_actions}")
            }
        }
    }
}

/// Per-action change counts of a run. `deltas[i]` belongs to action `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunTrace {
    deltas: Vec<usize>,
    cumulative: Vec<usize>,
    termination: Termination,
}

impl RunTrace {
    pub fn new(deltas: Vec<usize>, termination: Termination) -> Self {
        let cumulative = deltas
            .iter()
            .scan(0, |acc, &d| {
                *acc += d;
                Some(*acc)
            })
            .collect();
        Self {
            deltas,
            cumulative,
            termination,
        }
    }

    pub fn deltas(&self) -> &[usize] {
        &self.deltas
    }

    pub fn cumulative(&self) -> &[usize] {
        &self.cumulative
    }

    pub fn termination(&self) -> Termination {
        self.termination
    }

    pub fn actions(&self) -> usize {
        self.deltas.len()
    }

    /// Cumulative changes after `action` actions, holding the last value
    /// after the run stopped.
    pub fn cumulative_at(&self, action: usize) -> usize {
        match action {
            0 => 0,
            a => self.cumulative[a.min(self.cumulative.len()) - 1],
        }
    }

    pub fn total_changes(&self) -> usize {
        self.cumulative.last().copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOptions {
    pub max_actions: usize,
    /// Actions after which the field is captured; 0 is the initial field.
    pub snapshot_schedule: BTreeSet<usize>,
    /// Number of recent fields compared against when looking for cycles.
    pub cycle_window: usize,
}

impl RunOptions {
    pub fn new(max_actions: usize) -> Self {
        Self {
            max_actions,
            snapshot_schedule: BTreeSet::new(),
            cycle_window: DEFAULT_CYCLE_WINDOW,
        }
    }

    pub fn with_snapshots<I: IntoIterator<Item = usize>>(mut self, actions: I) -> Self {
        self.snapshot_schedule = actions.into_iter().collect();
        self
    }

    /// Capture every field from the initial one up to the budget.
    pub fn with_all_snapshots(mut self) -> Self {
        self.snapshot_schedule = (0..=self.max_actions).collect();
        self
    }

    pub fn with_cycle_window(mut self, window: usize) -> Self {
        self.cycle_window = window;
        self
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub trace: RunTrace,
    /// Captured fields keyed by action index, only for actions reached.
    pub snapshots: BTreeMap<usize, Field>,
    pub final_field: Field,
}

/// Repeats synchronous actions from `initial` until a fixed point, a cycle
/// (period ≥ 2, found among the last `cycle_window` fields and confirmed by
/// exact comparison), or `max_actions`.
pub fn run(
    initial: &Field,
    lattice: &LatticeSpec,
    rule: &dyn Rule,
    options: &RunOptions,
) -> Result<RunOutcome, AutomatonError> {
    if options.max_actions == 0 {
        return Err(AutomatonError::InvalidRunOptions(
            "max_actions must be at least 1".into(),
        ));
    }
    if options.cycle_window == 0 {
        return Err(AutomatonError::InvalidRunOptions(
            "cycle_window must be at least 1".into(),
        ));
    }
    let stepper = Stepper::new(*lattice, rule);
    let wants = |a: usize| options.snapshot_schedule.contains(&a);

    let mut snapshots = BTreeMap::new();
    if wants(0) {
        snapshots.insert(0, initial.clone());
    }
    let mut recent: VecDeque<(usize, FieldDigest, Field)> =
        VecDeque::with_capacity(options.cycle_window + 1);
    recent.push_back((0, initial.digest(), initial.clone()));

    let mut current = initial.clone();
    let mut deltas = Vec::new();
    let mut termination = Termination::BudgetExhausted {
        max_actions: options.max_actions,
    };

    for action in 1..=options.max_actions {
        let (next, delta) = stepper.step(&current)?;
        deltas.push(delta);
        current = next;
        if wants(action) {
            snapshots.insert(action, current.clone());
        }
        if delta == 0 {
            termination = Termination::FixedPoint { at_action: action };
            break;
        }

        let digest = current.digest();
        // newest first, so the first hit is the shortest period
        let repeat = recent
            .iter()
            .rev()
            .find(|(_, d, f)| *d == digest && *f == current)
            .map(|(a, _, _)| action - a);
        if let Some(period) = repeat {
            termination = Termination::Cycle {
                period,
                first_detected_at: action,
            };
            break;
        }
        if recent.len() == options.cycle_window {
            recent.pop_front();
        }
        recent.push_back((action, digest, current.clone()));
    }

    Ok(RunOutcome {
        trace: RunTrace::new(deltas, termination),
        snapshots,
        final_field: current,
    })
}
