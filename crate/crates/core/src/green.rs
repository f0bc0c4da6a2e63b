//! Green and red column indices of C-matrices, green sequences, and the
//! search for maximal green and green-to-red sequences.
//!
//! Every column of a C-matrix is either green (nonnegative) or red
//! (nonpositive). A sequence is *green* when each direction is green at
//! the moment it is mutated, *green-to-red* when the final C-matrix has
//! only red columns, and *maximal green* when it is both.
//!
//! Searches are bounded by a depth. `ExhaustedToDepth(d)` says that no
//! qualifying sequence of length at most `d` exists; it says nothing about
//! longer sequences.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize, Serializer};

use crate::coherence::ColumnSign;
use crate::error::{Error, Result};
use crate::exchange::ExchangeMatrix;
use crate::matrix::IntMatrix;
use crate::mutation::{frame, ExtendedMatrix, MutationSequence};
use crate::quiver::{decompose, BlockDecomposition};

pub const DEFAULT_SEARCH_DEPTH: usize = 10;
pub const DEFAULT_MAX_STATES: usize = 4_000_000;

/// Framed matrix reached from `frame(B)` by `history`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreenState {
    ext: ExtendedMatrix,
    history: MutationSequence,
}

impl GreenState {
    pub fn new(b: &ExchangeMatrix) -> Self {
        Self {
            ext: frame(b),
            history: MutationSequence::empty(),
        }
    }

    pub fn n(&self) -> usize {
        self.ext.n()
    }

    pub fn extended(&self) -> &ExtendedMatrix {
        &self.ext
    }

    pub fn history(&self) -> &MutationSequence {
        &self.history
    }

    pub fn b_matrix(&self) -> IntMatrix {
        self.ext.principal()
    }

    pub fn c_matrix(&self) -> IntMatrix {
        self.ext.attached()
    }

    pub fn apply(&self, k: usize) -> Result<Self> {
        Ok(Self {
            ext: self.ext.mutate(k)?,
            history: self.history.with(k),
        })
    }

    /// Sign of C-matrix column `j` (1-based); never zero or mixed.
    pub fn sign(&self, j: usize) -> Result<ColumnSign> {
        c_column_sign(&self.ext, j)
    }

    /// `(greens, reds)`, 1-based and ascending.
    pub fn green_indices(&self) -> Result<(Vec<usize>, Vec<usize>)> {
        let mut greens = Vec::new();
        let mut reds = Vec::new();
        for j in 1..=self.n() {
            match self.sign(j)? {
                ColumnSign::Green => greens.push(j),
                _ => reds.push(j),
            }
        }
        Ok((greens, reds))
    }

    pub fn all_red(&self) -> Result<bool> {
        Ok(self.green_indices()?.0.is_empty())
    }

    /// Whether replaying the history from `frame(initial)` gives this state.
    pub fn replays_from(&self, initial: &ExchangeMatrix) -> bool {
        frame(initial)
            .mutate_sequence(&self.history)
            .is_ok_and(|ext| ext == self.ext)
    }
}

fn c_column_sign(ext: &ExtendedMatrix, j: usize) -> Result<ColumnSign> {
    let n = ext.n();
    if j == 0 || j > n {
        return Err(Error::IndexOutOfRange { index: j, max: n });
    }
    let sign = ColumnSign::of((n..ext.data().rows()).map(|i| ext.entry(i, j - 1)));
    match sign {
        ColumnSign::Green | ColumnSign::Red => Ok(sign),
        other => Err(Error::InternalSignViolation(format!(
            "C-matrix column {j} is {other:?}"
        ))),
    }
}

fn all_red(ext: &ExtendedMatrix) -> Result<bool> {
    for j in 1..=ext.n() {
        if c_column_sign(ext, j)? == ColumnSign::Green {
            return Ok(false);
        }
    }
    Ok(true)
}

fn greens_of(ext: &ExtendedMatrix) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for j in 1..=ext.n() {
        if c_column_sign(ext, j)? == ColumnSign::Green {
            out.push(j);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ViolationKind {
    /// The mutated direction was red.
    NotGreen,
    /// A column is still green after the last step.
    NotRedAtEnd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Violation {
    pub kind: ViolationKind,
    /// 1-based step; `len + 1` for a violation at the end.
    pub step: usize,
    pub index: usize,
    pub sign: ColumnSign,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SequenceVerdict {
    pub is_green_sequence: bool,
    pub is_green_to_red: bool,
    pub is_maximal_green: bool,
    pub first_violation: Option<Violation>,
}

impl SequenceVerdict {
    pub fn satisfies(&self, target: SearchTarget) -> bool {
        match target {
            SearchTarget::MaximalGreen => self.is_maximal_green,
            SearchTarget::GreenToRed => self.is_green_to_red,
        }
    }
}

/// Replays `seq` on the framed matrix of `b` and classifies it.
pub fn verify_sequence(b: &ExchangeMatrix, seq: &MutationSequence) -> Result<SequenceVerdict> {
    seq.validate(b.n())?;
    let mut ext = frame(b);
    let mut first_violation = None;
    for (step, &k) in seq.indices().iter().enumerate() {
        let sign = c_column_sign(&ext, k)?;
        if sign != ColumnSign::Green && first_violation.is_none() {
            first_violation = Some(Violation {
                kind: ViolationKind::NotGreen,
                step: step + 1,
                index: k,
                sign,
            });
        }
        ext = ext.mutate(k)?;
    }
    let is_green_sequence = first_violation.is_none();
    let still_green = greens_of(&ext)?;
    let is_green_to_red = still_green.is_empty();
    if let (None, Some(&j)) = (first_violation, still_green.first()) {
        first_violation = Some(Violation {
            kind: ViolationKind::NotRedAtEnd,
            step: seq.len() + 1,
            index: j,
            sign: ColumnSign::Green,
        });
    }
    Ok(SequenceVerdict {
        is_green_sequence,
        is_green_to_red,
        is_maximal_green: is_green_sequence && is_green_to_red,
        first_violation,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SearchTarget {
    #[serde(rename = "mgs")]
    MaximalGreen,
    #[serde(rename = "g2r")]
    GreenToRed,
}

impl FromStr for SearchTarget {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "mgs" | "maximal-green" => Ok(Self::MaximalGreen),
            "g2r" | "green-to-red" => Ok(Self::GreenToRed),
            _ => Err(format!("unknown target {s:?} (expected mgs or g2r)")),
        }
    }
}

impl fmt::Display for SearchTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::MaximalGreen => "maximal green",
            Self::GreenToRed => "green-to-red",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    #[default]
    Bfs,
    Iddfs,
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "bfs" => Ok(Self::Bfs),
            "iddfs" => Ok(Self::Iddfs),
            _ => Err(format!("unknown strategy {s:?} (expected bfs or iddfs)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_depth: usize,
    pub strategy: Strategy,
    /// Cap on distinct states held (BFS) or generated (IDDFS).
    pub max_states: usize,
    pub timeout: Option<Duration>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            max_depth: DEFAULT_SEARCH_DEPTH,
            strategy: Strategy::Bfs,
            max_states: DEFAULT_MAX_STATES,
            timeout: None,
        }
    }
}

impl SearchConfig {
    pub fn with_depth(max_depth: usize) -> Self {
        Self {
            max_depth,
            ..Self::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum BudgetKind {
    States,
    Time,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "camelCase")]
pub enum SearchResult {
    Found {
        sequence: MutationSequence,
    },
    ExhaustedToDepth {
        depth: usize,
    },
    /// The state or time budget ran out; every length up to
    /// `depth_completed` was searched in full.
    #[serde(rename_all = "camelCase")]
    OutOfBudget {
        budget: BudgetKind,
        depth_completed: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchOutcome {
    #[serde(flatten)]
    pub result: SearchResult,
    pub states_visited: usize,
    #[serde(rename = "elapsedMs", serialize_with = "as_millis")]
    pub elapsed: Duration,
    /// Green-persistence checks performed during maximal green search.
    pub persistence_checks: u64,
}

fn as_millis<S: Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1000.0)
}

impl SearchOutcome {
    pub fn found(&self) -> Option<&MutationSequence> {
        match &self.result {
            SearchResult::Found { sequence } => Some(sequence),
            _ => None,
        }
    }
}

struct Budget {
    started: Instant,
    deadline: Option<Instant>,
    max_states: usize,
    ticks: u32,
}

impl Budget {
    fn new(config: &SearchConfig) -> Self {
        let started = Instant::now();
        Self {
            started,
            deadline: config.timeout.map(|t| started + t),
            max_states: config.max_states,
            ticks: 0,
        }
    }

    fn exceeded(&mut self, states: usize) -> Option<BudgetKind> {
        if states > self.max_states {
            return Some(BudgetKind::States);
        }
        self.ticks = self.ticks.wrapping_add(1);
        if self.ticks.is_multiple_of(256) {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    return Some(BudgetKind::Time);
                }
            }
        }
        None
    }
}

/// Directions to try from `ext`, in ascending order.
fn candidate_directions(ext: &ExtendedMatrix, target: SearchTarget) -> Result<Vec<usize>> {
    match target {
        SearchTarget::MaximalGreen => greens_of(ext),
        SearchTarget::GreenToRed => Ok((1..=ext.n()).collect()),
    }
}

/// Mutates at green `k` and checks that every other green direction stays
/// green.
fn green_step(
    ext: &ExtendedMatrix,
    greens: &[usize],
    k: usize,
    checks: &mut u64,
) -> Result<ExtendedMatrix> {
    let next = ext.mutate(k)?;
    for &j in greens.iter().filter(|&&j| j != k) {
        *checks += 1;
        if c_column_sign(&next, j)? != ColumnSign::Green {
            return Err(Error::InternalSignViolation(format!(
                "green direction {j} turned red after mutating at green direction {k}"
            )));
        }
    }
    Ok(next)
}

fn expand(
    ext: &ExtendedMatrix,
    target: SearchTarget,
    last: Option<usize>,
    checks: &mut u64,
) -> Result<Vec<(usize, ExtendedMatrix)>> {
    let dirs = candidate_directions(ext, target)?;
    let mut out = Vec::with_capacity(dirs.len());
    for &k in &dirs {
        if Some(k) == last {
            continue;
        }
        let next = match target {
            SearchTarget::MaximalGreen => green_step(ext, &dirs, k, checks)?,
            SearchTarget::GreenToRed => ext.mutate(k)?,
        };
        out.push((k, next));
    }
    Ok(out)
}

/// Searches for a sequence meeting `target`, returning the shortest one and,
/// among those, the lexicographically smallest.
///
/// Maximal green search only mutates at green directions. States are
/// deduplicated on the exact pair `(B, C)`.
pub fn find_sequence(
    b: &ExchangeMatrix,
    target: SearchTarget,
    config: &SearchConfig,
) -> Result<SearchOutcome> {
    let mut budget = Budget::new(config);
    let mut checks = 0;
    let (result, states_visited) = match config.strategy {
        Strategy::Bfs => bfs(b, target, config.max_depth, &mut budget, &mut checks)?,
        Strategy::Iddfs => iddfs(b, target, config.max_depth, &mut budget, &mut checks)?,
    };
    Ok(SearchOutcome {
        result,
        states_visited,
        elapsed: budget.started.elapsed(),
        persistence_checks: checks,
    })
}

fn bfs(
    b: &ExchangeMatrix,
    target: SearchTarget,
    max_depth: usize,
    budget: &mut Budget,
    checks: &mut u64,
) -> Result<(SearchResult, usize)> {
    let start = frame(b);
    if all_red(&start)? {
        return Ok((
            SearchResult::Found {
                sequence: MutationSequence::empty(),
            },
            1,
        ));
    }
    let mut seen: HashSet<IntMatrix> = HashSet::from([start.data().clone()]);
    let mut queue = VecDeque::from([(start, MutationSequence::empty())]);
    while let Some((ext, seq)) = queue.pop_front() {
        if seq.len() == max_depth {
            continue;
        }
        if let Some(budget) = budget.exceeded(seen.len()) {
            return Ok((
                SearchResult::OutOfBudget {
                    budget,
                    depth_completed: seq.len(),
                },
                seen.len(),
            ));
        }
        for (k, next) in expand(&ext, target, seq.last(), checks)? {
            if !seen.insert(next.data().clone()) {
                continue;
            }
            let next_seq = seq.with(k);
            if all_red(&next)? {
                return Ok((SearchResult::Found { sequence: next_seq }, seen.len()));
            }
            queue.push_back((next, next_seq));
        }
    }
    Ok((
        SearchResult::ExhaustedToDepth { depth: max_depth },
        seen.len(),
    ))
}

fn iddfs(
    b: &ExchangeMatrix,
    target: SearchTarget,
    max_depth: usize,
    budget: &mut Budget,
    checks: &mut u64,
) -> Result<(SearchResult, usize)> {
    let start = frame(b);
    let mut generated = 1;
    for limit in 0..=max_depth {
        // Shallowest depth at which each state was expanded in this round.
        let mut best: HashMap<IntMatrix, usize> = HashMap::new();
        let mut path = MutationSequence::empty();
        match dfs(
            &start,
            limit,
            &mut path,
            &mut best,
            target,
            budget,
            checks,
            &mut generated,
        )? {
            Dfs::Found => return Ok((SearchResult::Found { sequence: path }, generated)),
            Dfs::OutOfBudget(kind) => {
                return Ok((
                    SearchResult::OutOfBudget {
                        budget: kind,
                        depth_completed: limit.saturating_sub(1),
                    },
                    generated,
                ))
            }
            Dfs::NotFound => {}
        }
    }
    Ok((
        SearchResult::ExhaustedToDepth { depth: max_depth },
        generated,
    ))
}

enum Dfs {
    Found,
    NotFound,
    OutOfBudget(BudgetKind),
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    ext: &ExtendedMatrix,
    remaining: usize,
    path: &mut MutationSequence,
    best: &mut HashMap<IntMatrix, usize>,
    target: SearchTarget,
    budget: &mut Budget,
    checks: &mut u64,
    generated: &mut usize,
) -> Result<Dfs> {
    if remaining == 0 {
        return Ok(if all_red(ext)? {
            Dfs::Found
        } else {
            Dfs::NotFound
        });
    }
    match best.get(ext.data()) {
        Some(&depth) if depth <= path.len() => return Ok(Dfs::NotFound),
        _ => {
            best.insert(ext.data().clone(), path.len());
        }
    }
    if let Some(kind) = budget.exceeded(*generated) {
        return Ok(Dfs::OutOfBudget(kind));
    }
    for (k, next) in expand(ext, target, path.last(), checks)? {
        *generated += 1;
        path.push(k);
        match dfs(
            &next,
            remaining - 1,
            path,
            best,
            target,
            budget,
            checks,
            generated,
        )? {
            Dfs::NotFound => {
                path.pop();
            }
            done => return Ok(done),
        }
    }
    Ok(Dfs::NotFound)
}

fn split_blocks(b: &ExchangeMatrix, split: usize) -> Result<(ExchangeMatrix, ExchangeMatrix)> {
    let size = b.n();
    if split == 0 || split >= size {
        return Err(Error::InvalidSplit {
            n: split,
            m: size.saturating_sub(split),
            size,
        });
    }
    let lower_left = b.matrix().block(split, 0, size - split, split);
    if let Some((row, column, value)) = lower_left.first_negative() {
        return Err(Error::NonNegativityViolation {
            row: split + row + 1,
            column: column + 1,
            value: value as i128,
        });
    }
    let first: Vec<usize> = (1..=split).collect();
    let second: Vec<usize> = (split + 1..=size).collect();
    Ok((
        b.principal_submatrix(&first)?,
        b.principal_submatrix(&second)?,
    ))
}

/// Joins a sequence for the upper-left block and one for the lower-right
/// block of `b` (split after row/column `split`) into one sequence for `b`.
/// The lower-left block must be nonnegative.
pub fn compose_mgs(
    b: &ExchangeMatrix,
    split: usize,
    first: &MutationSequence,
    second: &MutationSequence,
    target: SearchTarget,
) -> Result<MutationSequence> {
    let (upper, lower) = split_blocks(b, split)?;
    for (name, block, seq) in [("first", &upper, first), ("second", &lower, second)] {
        seq.validate(block.n())
            .map_err(|e| Error::InvalidInputSequence(format!("{name} sequence {seq}: {e}")))?;
        if !verify_sequence(block, seq)?.satisfies(target) {
            return Err(Error::InvalidInputSequence(format!(
                "{name} sequence {seq} is not a {target} sequence of its block"
            )));
        }
    }
    let joined = first.concat(&second.shifted(split));
    debug_assert!(verify_sequence(b, &joined).is_ok_and(|v| v.satisfies(target)));
    Ok(joined)
}

/// Inverse of [`compose_mgs`]: splits a sequence whose first part uses
/// directions `1..=split` and whose second part uses the rest.
pub fn split_mgs(
    b: &ExchangeMatrix,
    split: usize,
    seq: &MutationSequence,
    target: SearchTarget,
) -> Result<(MutationSequence, MutationSequence)> {
    let (upper, lower) = split_blocks(b, split)?;
    seq.validate(b.n())?;
    let cut = seq
        .indices()
        .iter()
        .position(|&k| k > split)
        .unwrap_or(seq.len());
    if let Some(&k) = seq.indices()[cut..].iter().find(|&&k| k <= split) {
        return Err(Error::ShapeViolation(format!(
            "direction {k} from the first block appears after the second block started in {seq}"
        )));
    }
    if !verify_sequence(b, seq)?.satisfies(target) {
        return Err(Error::InvalidInputSequence(format!(
            "{seq} is not a {target} sequence"
        )));
    }
    let first = MutationSequence::new(seq.indices()[..cut].to_vec());
    let second = MutationSequence::new(seq.indices()[cut..].iter().map(|k| k - split).collect());
    debug_assert!(verify_sequence(&upper, &first).is_ok_and(|v| v.satisfies(target)));
    debug_assert!(verify_sequence(&lower, &second).is_ok_and(|v| v.satisfies(target)));
    Ok((first, second))
}

/// Result of searching block by block.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReducedSearch {
    pub outcome: SearchOutcome,
    pub decomposition: BlockDecomposition,
    /// Per-block outcomes in block order, in block-local labels; stops at
    /// the first block without a sequence.
    pub block_outcomes: Vec<SearchOutcome>,
    /// Vertices of the first block that has no sequence within the bounds.
    pub failed_block: Option<Vec<usize>>,
}

/// Splits `b` into irreducible blocks, searches each one, and composes the
/// block sequences into a sequence for `b`.
pub fn reduce_and_search(
    b: &ExchangeMatrix,
    target: SearchTarget,
    config: &SearchConfig,
) -> Result<ReducedSearch> {
    let started = Instant::now();
    let decomposition = decompose(b);
    let mut block_outcomes = Vec::with_capacity(decomposition.blocks.len());
    let mut states_visited = 0;
    let mut persistence_checks = 0;
    for block in &decomposition.blocks {
        let sub = b.principal_submatrix(block)?;
        let outcome = find_sequence(&sub, target, config)?;
        states_visited += outcome.states_visited;
        persistence_checks += outcome.persistence_checks;
        let failed = outcome.found().is_none();
        let result = outcome.result.clone();
        block_outcomes.push(outcome);
        if failed {
            return Ok(ReducedSearch {
                outcome: SearchOutcome {
                    result,
                    states_visited,
                    elapsed: started.elapsed(),
                    persistence_checks,
                },
                decomposition: decomposition.clone(),
                block_outcomes,
                failed_block: Some(block.clone()),
            });
        }
    }

    let relabeled = decomposition.relabeled(b)?;
    let mut joined = MutationSequence::empty();
    let mut offset = 0;
    for (block, outcome) in decomposition.blocks.iter().zip(&block_outcomes) {
        let local = outcome.found().expect("every block succeeded");
        if offset == 0 {
            joined = local.clone();
        } else {
            let prefix: Vec<usize> = (1..=offset + block.len()).collect();
            let sub = relabeled.principal_submatrix(&prefix)?;
            joined = compose_mgs(&sub, offset, &joined, local, target)?;
        }
        offset += block.len();
    }
    let sequence = joined.relabeled(&decomposition.order);
    if !verify_sequence(b, &sequence)?.satisfies(target) {
        return Err(Error::InternalSignViolation(format!(
            "composed sequence {sequence} is not a {target} sequence"
        )));
    }
    Ok(ReducedSearch {
        outcome: SearchOutcome {
            result: SearchResult::Found { sequence },
            states_visited,
            elapsed: started.elapsed(),
            persistence_checks,
        },
        decomposition,
        block_outcomes,
        failed_block: None,
    })
}
