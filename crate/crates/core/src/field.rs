//! Cell-state fields, seeded random initialization, and comparison helpers.
//!
//! A [`Field`] stores one state per cell in row-major order. States are small
//! integers in `[0, k)`; with the default binary alphabet, state 0 renders
//! light and state 1 dark.
//!
//! # Random initial fields
//!
//! [`Field::random`] is reproducible across implementations:
//!
//! 1. The generator is ChaCha8 as provided by `rand_chacha` 0.3.1, seeded with
//!    `SeedableRng::seed_from_u64(seed)` (rand_core 0.6 seed expansion).
//! 2. Cells are visited in row-major order. Each cell consumes exactly one
//!    `next_u64()` output `x`, mapped to `u = (x >> 11) * 2^-53` in `[0, 1)`.
//! 3. The state is the first `v` with `u < p[0] + ... + p[v]` (running sum in
//!    `f64`). If rounding leaves `u` above the final sum, the largest state
//!    with nonzero weight is used.

use std::fmt;
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use sha2::{Digest as _, Sha256};
use thiserror::Error;

use crate::lattice::{CellIndex, LatticeError, LatticeKind, LatticeSpec};

/// A single cell state.
pub type State = u8;

/// Largest supported alphabet: states must fit in a [`State`].
pub const MAX_ALPHABET: usize = State::MAX as usize + 1;

const PROBABILITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    #[error("alphabet size {0} outside [2, {MAX_ALPHABET}]")]
    InvalidAlphabet(usize),
    #[error("invalid probabilities: {0}")]
    InvalidProbabilities(String),
    #[error("state {state} at index {index} is not below k = {k}")]
    StateOutOfRange {
        index: usize,
        state: usize,
        k: usize,
    },
    #[error("expected {expected} states, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("field shapes differ: {left} (k={left_k}) vs {right} (k={right_k})")]
    ShapeMismatch {
        left: LatticeSpec,
        left_k: usize,
        right: LatticeSpec,
        right_k: usize,
    },
    #[error("not a permutation of [0, {k}): {perm:?}")]
    NotAPermutation { perm: Vec<State>, k: usize },
    #[error("hexagonal translation by an odd number of rows ({0}) breaks the row stagger")]
    OddHexRowShift(isize),
    #[error("malformed field text: {0}")]
    Parse(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Categorical distribution and seed for a random initial field.
#[derive(Debug, Clone, PartialEq)]
pub struct InitSpec {
    probabilities: Vec<f64>,
    seed: u64,
}

impl InitSpec {
    /// `probabilities[v]` is the chance of state `v`; the alphabet size is the
    /// vector length.
    pub fn new(probabilities: Vec<f64>, seed: u64) -> Result<Self, FieldError> {
        let k = probabilities.len();
        if !(2..=MAX_ALPHABET).contains(&k) {
            return Err(FieldError::InvalidAlphabet(k));
        }
        if let Some(bad) = probabilities.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(FieldError::InvalidProbabilities(format!(
                "weight {bad} is not a finite nonnegative number"
            )));
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > PROBABILITY_TOLERANCE {
            return Err(FieldError::InvalidProbabilities(format!(
                "weights sum to {sum}, not 1"
            )));
        }
        Ok(Self {
            probabilities,
            seed,
        })
    }

    /// Two states with `P(state 1) = p1`.
    pub fn binary(p1: f64, seed: u64) -> Result<Self, FieldError> {
        Self::new(vec![1.0 - p1, p1], seed)
    }

    pub fn uniform(k: usize, seed: u64) -> Result<Self, FieldError> {
        if k == 0 {
            return Err(FieldError::InvalidAlphabet(k));
        }
        Self::new(vec![1.0 / k as f64; k], seed)
    }

    pub fn k(&self) -> usize {
        self.probabilities.len()
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Fixed-width SHA-256 digest of a field's dimensions, alphabet and states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldDigest([u8; 32]);

impl FieldDigest {
    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }
}

impl fmt::Display for FieldDigest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|b| write!(f, "{b:02x}"))
    }
}

/// One state per lattice cell, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Field {
    lattice: LatticeSpec,
    k: usize,
    states: Vec<State>,
}

impl Field {
    pub fn new(lattice: LatticeSpec, k: usize, states: Vec<State>) -> Result<Self, FieldError> {
        check_alphabet(k)?;
        if states.len() != lattice.cell_count() {
            return Err(FieldError::LengthMismatch {
                expected: lattice.cell_count(),
                actual: states.len(),
            });
        }
        if let Some((index, &s)) = states.iter().enumerate().find(|(_, &s)| s as usize >= k) {
            return Err(FieldError::StateOutOfRange {
                index,
                state: s as usize,
                k,
            });
        }
        Ok(Self { lattice, k, states })
    }

    /// Every cell in `state`.
    pub fn uniform(lattice: LatticeSpec, k: usize, state: State) -> Result<Self, FieldError> {
        Self::new(lattice, k, vec![state; lattice.cell_count()])
    }

    pub fn from_fn<F>(lattice: LatticeSpec, k: usize, mut f: F) -> Result<Self, FieldError>
    where
        F: FnMut(CellIndex) -> State,
    {
        let states = (0..lattice.cell_count())
            .map(|i| f(lattice.cell_at(i)))
            .collect();
        Self::new(lattice, k, states)
    }

    /// Binary checkerboard: state `(col + row) % 2`.
    pub fn checkerboard(lattice: LatticeSpec) -> Self {
        Self::from_fn(lattice, 2, |c| ((c.col + c.row) % 2) as State)
            .expect("checkerboard states are binary")
    }

    /// Seeded i.i.d. categorical field; see the module docs for the exact
    /// sampling procedure.
    pub fn random(lattice: LatticeSpec, init: &InitSpec) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(init.seed);
        let mut cumulative = Vec::with_capacity(init.k());
        let mut acc = 0.0;
        for &p in &init.probabilities {
            acc += p;
            cumulative.push(acc);
        }
        let fallback = init
            .probabilities
            .iter()
            .rposition(|&p| p > 0.0)
            .unwrap_or(0) as State;
        let states = (0..lattice.cell_count())
            .map(|_| {
                let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
                cumulative
                    .iter()
                    .position(|&c| u < c)
                    .map_or(fallback, |v| v as State)
            })
            .collect();
        Self {
            lattice,
            k: init.k(),
            states,
        }
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn into_states(self) -> Vec<State> {
        self.states
    }

    pub fn get(&self, cell: CellIndex) -> Result<State, FieldError> {
        Ok(self.states[self.lattice.index_of(cell)?])
    }

    /// Number of cells in `state`.
    pub fn count(&self, state: State) -> usize {
        self.states.iter().filter(|&&s| s == state).count()
    }

    pub fn same_shape(&self, other: &Field) -> bool {
        self.lattice == other.lattice && self.k == other.k
    }

    pub(crate) fn ensure_same_shape(&self, other: &Field) -> Result<(), FieldError> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(FieldError::ShapeMismatch {
                left: self.lattice,
                left_k: self.k,
                right: other.lattice,
                right_k: other.k,
            })
        }
    }

    /// Number of cells whose states differ.
    pub fn hamming(&self, other: &Field) -> Result<usize, FieldError> {
        self.ensure_same_shape(other)?;
        Ok(self
            .states
            .iter()
            .zip(&other.states)
            .filter(|(a, b)| a != b)
            .count())
    }

    pub fn digest(&self) -> FieldDigest {
        let mut hasher = Sha256::new();
        hasher.update((self.lattice.width() as u64).to_le_bytes());
        hasher.update((self.lattice.height() as u64).to_le_bytes());
        hasher.update((self.k as u64).to_le_bytes());
        hasher.update(&self.states);
        let mut out = [0u8; 32];
        out.copy_from_slice(&hasher.finalize());
        FieldDigest(out)
    }

    /// Replaces every state `s` with `perm[s]`.
    pub fn relabel(&self, perm: &[State]) -> Result<Field, FieldError> {
        let mut seen = vec![false; self.k];
        let is_perm = perm.len() == self.k
            && perm.iter().all(|&p| {
                let p = p as usize;
                p < self.k && !std::mem::replace(&mut seen[p], true)
            });
        if !is_perm {
            return Err(FieldError::NotAPermutation {
                perm: perm.to_vec(),
                k: self.k,
            });
        }
        Ok(Field {
            lattice: self.lattice,
            k: self.k,
            states: self.states.iter().map(|&s| perm[s as usize]).collect(),
        })
    }

    /// Cyclically shifts the field so that the state at `(c, r)` moves to
    /// `(c + dcol, r + drow)` modulo the dimensions. Hexagonal fields only
    /// admit even row shifts.
    pub fn translated(&self, dcol: isize, drow: isize) -> Result<Field, FieldError> {
        if self.lattice.kind() == LatticeKind::Hexagonal && drow % 2 != 0 {
            return Err(FieldError::OddHexRowShift(drow));
        }
        let (w, h) = (self.lattice.width(), self.lattice.height());
        let mut states = vec![0; self.states.len()];
        for row in 0..h {
            let to_row = (row as isize + drow).rem_euclid(h as isize) as usize;
            for col in 0..w {
                let to_col = (col as isize + dcol).rem_euclid(w as isize) as usize;
                states[to_row * w + to_col] = self.states[row * w + col];
            }
        }
        Ok(Field {
            lattice: self.lattice,
            k: self.k,
            states,
        })
    }

    pub(crate) fn from_parts_unchecked(lattice: LatticeSpec, k: usize, states: Vec<State>) -> Self {
        debug_assert_eq!(states.len(), lattice.cell_count());
        Self { lattice, k, states }
    }

    /// Plain-text snapshot: `width height k`, then one line per row of
    /// space-separated states.
    pub fn to_text(&self) -> String {
        let w = self.lattice.width();
        let mut out = format!("{} {} {}\n", w, self.lattice.height(), self.k);
        for row in self.states.chunks(w) {
            let line: Vec<String> = row.iter().map(|s| s.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses [`to_text`](Self::to_text) output. The text carries no lattice
    /// kind or boundary, so `lattice` supplies them and must match the
    /// stored dimensions.
    pub fn from_text(lattice: LatticeSpec, text: &str) -> Result<Field, FieldError> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| FieldError::Parse("empty input".into()))?;
        let dims = parse_numbers::<usize>(header)?;
        let [w, h, k] = dims[..] else {
            return Err(FieldError::Parse(format!("bad header {header:?}")));
        };
        if (w, h) != (lattice.width(), lattice.height()) {
            return Err(FieldError::Parse(format!(
                "text is {w}x{h}, lattice is {}x{}",
                lattice.width(),
                lattice.height()
            )));
        }
        let mut states = Vec::with_capacity(w * h);
        for (i, line) in lines.enumerate() {
            let row = parse_numbers::<State>(line)?;
            if row.len() != w {
                return Err(FieldError::Parse(format!(
                    "row {i} has {} entries, expected {w}",
                    row.len()
                )));
            }
            states.extend(row);
        }
        Field::new(lattice, k, states)
    }
}

fn parse_numbers<T: FromStr>(line: &str) -> Result<Vec<T>, FieldError> {
    line.split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| FieldError::Parse(format!("not a number: {t:?}")))
        })
        .collect()
}

fn check_alphabet(k: usize) -> Result<(), FieldError> {
    if (2..=MAX_ALPHABET).contains(&k) {
        Ok(())
    } else {
        Err(FieldError::InvalidAlphabet(k))
    }
}
