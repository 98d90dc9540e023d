//! Exact solution of the scheduling problem on top of a [`SpacesTable`].
//!
//! A schedule is a sequence of processing blocks separated by spaces. Inside
//! a contiguous block the order of the jobs does not change its cost, so the
//! search only tracks the multiset of processing times still to be placed.
//! `f(i, R)` is the cheapest completion when a block starts at interval `i`
//! and the jobs `R` remain; the block's next job `p` is followed either by
//! the next job directly, by a space `φ(i + p - 1, i'')` and a new block, or,
//! when `R` is exhausted, by the closing space `φ(i + p - 1, h)`.

mod assemble;
mod brute;

use std::time::{Duration, Instant};

pub use assemble::assemble_schedule;
pub(crate) use assemble::assemble_segments;
pub use brute::{brute_force_schedule, brute_force_switching};

use crate::error::{Error, Result};
use crate::model::{compute_tec, Cost, Instance, Schedule};
use crate::spaces::SpacesTable;

const UNSET: Cost = Cost::MAX;
const INF: Cost = Cost::MAX - 1;

/// Remaining jobs grouped by processing time.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct JobMultiset {
    lengths: Vec<u32>,
    counts: Vec<u32>,
    total: u64,
}

impl JobMultiset {
    pub fn from_jobs(jobs: &[u32]) -> Self {
        let mut lengths: Vec<u32> = jobs.to_vec();
        lengths.sort_unstable();
        lengths.dedup();
        let counts = lengths
            .iter()
            .map(|&p| jobs.iter().filter(|&&q| q == p).count() as u32)
            .collect();
        Self {
            lengths,
            counts,
            total: jobs.iter().map(|&p| p as u64).sum(),
        }
    }

    /// Distinct processing times, ascending.
    pub fn lengths(&self) -> &[u32] {
        &self.lengths
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Total remaining processing time.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Removes one job of length `p`; returns `false` if none is left.
    pub fn remove(&mut self, p: u32) -> bool {
        match self.lengths.binary_search(&p) {
            Ok(k) if self.counts[k] > 0 => {
                self.counts[k] -= 1;
                self.total -= p as u64;
                true
            }
            _ => false,
        }
    }

    /// Number of distinct sub-multisets (the size of the DP key space).
    pub fn key_space(&self) -> usize {
        self.counts
            .iter()
            .try_fold(1usize, |acc, &c| acc.checked_mul(c as usize + 1))
            .unwrap_or(usize::MAX)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    /// The time limit expired; the schedule is the best incumbent known.
    TimeLimit,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Optimal => "optimal",
            Self::Infeasible => "infeasible",
            Self::TimeLimit => "time_limit",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub states_expanded: u64,
    pub wall_time: Duration,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub tec: Cost,
    /// Proven lower bound on the optimal TEC; equals `tec` when optimal.
    pub lower_bound: Cost,
    pub status: SolveStatus,
    pub schedule: Option<Schedule>,
    /// `(job, start interval)` for every job.
    pub placement: Vec<(usize, usize)>,
    pub stats: SolveStats,
}

impl SolveResult {
    fn infeasible(stats: SolveStats) -> Self {
        Self {
            tec: 0,
            lower_bound: 0,
            status: SolveStatus::Infeasible,
            schedule: None,
            placement: Vec::new(),
            stats,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub time_limit: Option<Duration>,
    /// Worker threads for the top-level branches; 1 runs sequentially.
    pub threads: usize,
    /// Upper bound on memo entries per table.
    pub max_states: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            time_limit: None,
            threads: 1,
            max_states: 1 << 24,
        }
    }
}

/// Solves to optimality with default options.
pub fn solve_exact(inst: &Instance, table: &SpacesTable) -> Result<SolveResult> {
    solve_exact_with(inst, table, &SolveOptions::default())
}

pub fn solve_exact_with(
    inst: &Instance,
    table: &SpacesTable,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    inst.check()?;
    let started = Instant::now();
    let deadline = opts.time_limit.map(|d| started + d);
    let shape = Shape::new(inst, table);
    let slots = (inst.horizon() + 2).saturating_mul(shape.keys);
    if slots > opts.max_states {
        return Err(Error::ResourceGuard(format!(
            "exact search needs {slots} memo entries (limit {})",
            opts.max_states
        )));
    }

    let threads = opts.threads.max(1);
    let starts: Vec<usize> = (shape.t_on..=shape.t_off).collect();
    let outcome = if threads == 1 {
        let mut dp = Dp::new(&shape, deadline);
        let best = dp.best_first_block(starts.iter().copied());
        let blocks = best.map(|(_, i)| dp.blocks_from(i));
        (best, blocks, dp.expanded, dp.timed_out)
    } else {
        let results: Vec<_> = std::thread::scope(|scope| {
            let shape = &shape;
            let workers: Vec<_> = (0..threads)
                .map(|t| {
                    let mine: Vec<usize> =
                        starts.iter().copied().skip(t).step_by(threads).collect();
                    scope.spawn(move || {
                        let mut dp = Dp::new(shape, deadline);
                        let best = dp.best_first_block(mine.into_iter());
                        let blocks = best.map(|(_, i)| dp.blocks_from(i));
                        (best, blocks, dp.expanded, dp.timed_out)
                    })
                })
                .collect();
            workers
                .into_iter()
                .map(|w| w.join().expect("solver worker panicked"))
                .collect()
        });
        let expanded = results.iter().map(|r| r.2).sum();
        let timed_out = results.iter().any(|r| r.3);
        let winner = results
            .into_iter()
            .filter_map(|(best, blocks, _, _)| best.zip(blocks))
            .min_by_key(|&((cost, i), _)| (cost, i));
        match winner {
            Some((best, blocks)) => (Some(best), Some(blocks), expanded, timed_out),
            None => (None, None, expanded, timed_out),
        }
    };
    let (best, blocks, expanded, timed_out) = outcome;
    let mut stats = SolveStats {
        states_expanded: expanded,
        wall_time: Duration::ZERO,
    };

    if timed_out {
        let res = incumbent_after_timeout(inst, table, &shape, stats);
        return res.map(|mut r| {
            r.stats.wall_time = started.elapsed();
            r
        });
    }
    let (Some((cost, _)), Some(blocks)) = (best, blocks) else {
        stats.wall_time = started.elapsed();
        return Ok(SolveResult::infeasible(stats));
    };

    let placement = assign_jobs(inst, &blocks);
    let schedule = assemble_schedule(inst, &placement, table)?;
    let tec = inst.boundary_cost() + cost;
    let recomputed = compute_tec(inst, &schedule)?;
    if recomputed != tec {
        return Err(Error::TecMismatch {
            recomputed,
            objective: tec,
        });
    }
    stats.wall_time = started.elapsed();
    Ok(SolveResult {
        tec,
        lower_bound: tec,
        status: SolveStatus::Optimal,
        schedule: Some(schedule),
        placement,
        stats,
    })
}

/// Maps `(start, length)` blocks onto job indices, lowest index first.
fn assign_jobs(inst: &Instance, blocks: &[(usize, u32)]) -> Vec<(usize, usize)> {
    let mut used = vec![false; inst.jobs().len()];
    blocks
        .iter()
        .map(|&(start, p)| {
            let job = (0..used.len())
                .find(|&j| !used[j] && inst.jobs()[j] == p)
                .expect("block length matches a remaining job");
            used[job] = true;
            (job, start)
        })
        .collect()
}

/// Single contiguous block at its cheapest position; used when the search is
/// interrupted.
fn incumbent_after_timeout(
    inst: &Instance,
    table: &SpacesTable,
    shape: &Shape,
    stats: SolveStats,
) -> Result<SolveResult> {
    let total = inst.total_processing() as usize;
    let mut best: Option<(Cost, usize)> = None;
    for i in shape.t_on..=shape.t_off {
        let e = i + total - 1;
        if e > shape.t_off {
            break;
        }
        let (Some(a), Some(b)) = (table.phi(1, i), table.phi(e, inst.horizon())) else {
            continue;
        };
        let c = a + inst.cost_sum(i, e) * shape.proc_power + b;
        if best.is_none_or(|(bc, _)| c < bc) {
            best = Some((c, i));
        }
    }
    let Some((cost, start)) = best else {
        return Ok(SolveResult::infeasible(stats));
    };
    let mut blocks = Vec::new();
    let mut at = start;
    let mut lengths: Vec<u32> = inst.jobs().to_vec();
    lengths.sort_unstable();
    for p in lengths {
        blocks.push((at, p));
        at += p as usize;
    }
    let placement = assign_jobs(inst, &blocks);
    let schedule = assemble_schedule(inst, &placement, table)?;
    let tec = inst.boundary_cost() + cost;
    let lower_bound = (inst.boundary_cost()
        + inst.total_processing() * shape.proc_power * shape.min_cost_from[shape.t_on])
        .min(tec);
    Ok(SolveResult {
        tec,
        lower_bound,
        status: SolveStatus::TimeLimit,
        schedule: Some(schedule),
        placement,
        stats,
    })
}

/// Immutable data shared by all search workers.
struct Shape<'a> {
    inst: &'a Instance,
    table: &'a SpacesTable,
    h: usize,
    t_on: usize,
    t_off: usize,
    proc_power: Cost,
    lengths: Vec<u32>,
    strides: Vec<usize>,
    radix: Vec<usize>,
    keys: usize,
    full: usize,
    remaining: Vec<u64>,
    // min c over [i, t_off]
    min_cost_from: Vec<Cost>,
}

impl<'a> Shape<'a> {
    fn new(inst: &'a Instance, table: &'a SpacesTable) -> Self {
        let ms = JobMultiset::from_jobs(inst.jobs());
        let (t_on, t_off) = table.window();
        let mut strides = Vec::with_capacity(ms.lengths().len());
        let mut radix = Vec::with_capacity(ms.lengths().len());
        let mut keys = 1usize;
        let mut full = 0usize;
        for &c in ms.counts() {
            strides.push(keys);
            radix.push(c as usize + 1);
            full += keys * c as usize;
            keys = keys.saturating_mul(c as usize + 1);
        }
        let remaining = if keys <= (1 << 26) {
            (0..keys)
                .map(|key| {
                    ms.lengths()
                        .iter()
                        .zip(strides.iter().zip(&radix))
                        .map(|(&p, (&s, &r))| ((key / s) % r) as u64 * p as u64)
                        .sum()
                })
                .collect()
        } else {
            Vec::new()
        };
        let h = inst.horizon();
        let mut min_cost_from = vec![Cost::MAX; h + 2];
        for i in (1..=t_off.min(h)).rev() {
            min_cost_from[i] = min_cost_from[i + 1].min(inst.cost(i));
        }
        Self {
            inst,
            table,
            h,
            t_on,
            t_off,
            proc_power: inst.proc_power(),
            lengths: ms.lengths().to_vec(),
            strides,
            radix,
            keys,
            full,
            remaining,
            min_cost_from,
        }
    }

    #[inline]
    fn count(&self, key: usize, k: usize) -> usize {
        (key / self.strides[k]) % self.radix[k]
    }

    #[inline]
    fn lower_bound(&self, i: usize, key: usize) -> Cost {
        if i > self.t_off {
            return INF;
        }
        self.remaining[key] * self.proc_power * self.min_cost_from[i]
    }
}

struct Dp<'s, 'a> {
    shape: &'s Shape<'a>,
    // f(i, R): a block starts at i with R remaining (R non-empty)
    block: Vec<Cost>,
    // g(e, R): a block just ended at e, R non-empty remains
    after: Vec<Cost>,
    deadline: Option<Instant>,
    expanded: u64,
    timed_out: bool,
}

impl<'s, 'a> Dp<'s, 'a> {
    fn new(shape: &'s Shape<'a>, deadline: Option<Instant>) -> Self {
        let size = (shape.h + 2) * shape.keys;
        Self {
            shape,
            block: vec![UNSET; size],
            after: vec![UNSET; size],
            deadline,
            expanded: 0,
            timed_out: false,
        }
    }

    fn tick(&mut self) -> bool {
        self.expanded += 1;
        if self.expanded.is_multiple_of(1024) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.timed_out = true;
                }
            }
        }
        self.timed_out
    }

    /// Best `(cost, first start)` over the given first-block starts, excluding
    /// the two boundary intervals.
    fn best_first_block(&mut self, starts: impl Iterator<Item = usize>) -> Option<(Cost, usize)> {
        let shape = self.shape;
        let mut best: Option<(Cost, usize)> = None;
        for i in starts {
            let Some(lead) = shape.table.phi(1, i) else {
                continue;
            };
            if let Some((b, _)) = best {
                if lead + shape.lower_bound(i, shape.full) >= b {
                    continue;
                }
            }
            let rest = self.block(i, shape.full);
            if self.timed_out {
                return None;
            }
            if rest >= INF {
                continue;
            }
            if best.is_none_or(|(b, _)| lead + rest < b) {
                best = Some((lead + rest, i));
            }
        }
        best
    }

    fn block(&mut self, i: usize, key: usize) -> Cost {
        let shape = self.shape;
        if i + shape.remaining[key] as usize - 1 > shape.t_off {
            return INF;
        }
        let slot = i * shape.keys + key;
        let v = self.block[slot];
        if v != UNSET {
            return v;
        }
        if self.tick() {
            return INF;
        }
        let (v, _) = self.eval_block(i, key);
        if !self.timed_out {
            self.block[slot] = v;
        }
        v
    }

    /// Returns the value and the index of the chosen processing time.
    fn eval_block(&mut self, i: usize, key: usize) -> (Cost, usize) {
        let shape = self.shape;
        let mut best = (INF, usize::MAX);
        for k in 0..shape.lengths.len() {
            if shape.count(key, k) == 0 {
                continue;
            }
            let p = shape.lengths[k] as usize;
            let end = i + p - 1;
            let job = shape.inst.cost_sum(i, end) * shape.proc_power;
            let rest = key - shape.strides[k];
            let tail = if rest == 0 {
                shape.table.phi(end, shape.h).unwrap_or(INF)
            } else {
                self.after(end, rest)
            };
            if tail < INF && job + tail < best.0 {
                best = (job + tail, k);
            }
        }
        best
    }

    fn after(&mut self, end: usize, key: usize) -> Cost {
        let shape = self.shape;
        let slot = end * shape.keys + key;
        let v = self.after[slot];
        if v != UNSET {
            return v;
        }
        if self.tick() {
            return INF;
        }
        let (v, _) = self.eval_after(end, key);
        if !self.timed_out {
            self.after[slot] = v;
        }
        v
    }

    /// Returns the value and the chosen next block start.
    fn eval_after(&mut self, end: usize, key: usize) -> (Cost, usize) {
        let shape = self.shape;
        let need = shape.remaining[key] as usize;
        let mut best = (INF, usize::MAX);
        let mut next = end + 1;
        while next + need - 1 <= shape.t_off {
            let gap = if next == end + 1 {
                Some(0)
            } else {
                shape.table.phi(end, next)
            };
            if let Some(gap) = gap {
                if best.0 == INF || gap + shape.lower_bound(next, key) < best.0 {
                    let rest = self.block(next, key);
                    if rest < INF && gap + rest < best.0 {
                        best = (gap + rest, next);
                    }
                }
            }
            next += 1;
        }
        best
    }

    /// Replays the memoized decisions into `(start, length)` blocks.
    fn blocks_from(&mut self, first: usize) -> Vec<(usize, u32)> {
        let shape = self.shape;
        let mut out = Vec::new();
        let (mut i, mut key) = (first, shape.full);
        loop {
            let (_, k) = self.eval_block(i, key);
            let p = shape.lengths[k];
            out.push((i, p));
            key -= shape.strides[k];
            if key == 0 {
                return out;
            }
            let end = i + p as usize - 1;
            let (_, next) = self.eval_after(end, key);
            i = next;
        }
    }
}
