//! Exhaustive reference solvers for small instances.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{Config, Cost, Instance, OmegaAutomaton};
use crate::spaces::SpacesTable;

const SWITCHING_SPAN_LIMIT: usize = 12;
const SWITCHING_STATE_LIMIT: usize = 4;
const SCHEDULE_JOB_LIMIT: usize = 5;
const SCHEDULE_HORIZON_LIMIT: usize = 20;

/// Cheapest labelling of intervals `i + 1 ..= i' - 1` that leaves `I_i` in
/// proc (off when `i = 1`) and enters `I_i'` in proc (off when `i' = h`).
///
/// Works directly on Ω labels, without the interval-state graph.
pub fn brute_force_switching(inst: &Instance, i: usize, ip: usize) -> Result<Option<Cost>> {
    let h = inst.horizon();
    if i == 0 || ip <= i || ip > h {
        return Err(Error::NoSwitching { from: i, to: ip });
    }
    let span = ip - i - 1;
    let states = inst.states();
    if span > SWITCHING_SPAN_LIMIT || states.len() > SWITCHING_STATE_LIMIT {
        return Err(Error::ResourceGuard(format!(
            "switching enumeration over {span} intervals and {} states",
            states.len()
        )));
    }
    let first = if i == 1 { states.off() } else { states.proc() };
    let last = if ip == h { states.off() } else { states.proc() };
    let labels: Vec<_> = inst
        .transitions()
        .iter()
        .filter(|(_, _, t)| t.duration > 0)
        .map(|(a, b, t)| ((a, b), t.power))
        .collect();

    let automaton = OmegaAutomaton::new(inst);
    let start = automaton.step(&automaton.start(first), (first, first));
    let mut frontier: BTreeMap<Vec<Config>, Cost> = BTreeMap::new();
    if !start.is_empty() {
        frontier.insert(start, 0);
    }
    for k in i + 1..ip {
        let mut next: BTreeMap<Vec<Config>, Cost> = BTreeMap::new();
        for (configs, &cost) in &frontier {
            for &(label, power) in &labels {
                let stepped = automaton.step(configs, label);
                if stepped.is_empty() {
                    continue;
                }
                let c = cost + inst.cost(k) * power;
                next.entry(stepped)
                    .and_modify(|v| *v = (*v).min(c))
                    .or_insert(c);
            }
        }
        frontier = next;
    }
    Ok(frontier
        .iter()
        .filter(|(configs, _)| {
            let after = automaton.step(configs, (last, last));
            automaton.accepts(&after, last)
        })
        .map(|(_, &c)| c)
        .min())
}

/// Optimal TEC with its `(job, start)` placement.
pub type Enumerated = (Cost, Vec<(usize, usize)>);

/// Optimal TEC and placement by enumerating every block sequence, with
/// spaces priced from `table` (ignoring pruning).
pub fn brute_force_schedule(inst: &Instance, table: &SpacesTable) -> Result<Option<Enumerated>> {
    inst.check()?;
    let n = inst.jobs().len();
    let h = inst.horizon();
    if n > SCHEDULE_JOB_LIMIT || h > SCHEDULE_HORIZON_LIMIT {
        return Err(Error::ResourceGuard(format!(
            "schedule enumeration with {n} jobs over {h} intervals"
        )));
    }
    let mut search = Search {
        inst,
        table,
        used: vec![false; n],
        placement: Vec::with_capacity(n),
        best: None,
    };
    search.extend(1, 0, true);
    Ok(search.best.map(|(c, p)| (c + inst.boundary_cost(), p)))
}

struct Search<'a> {
    inst: &'a Instance,
    table: &'a SpacesTable,
    used: Vec<bool>,
    placement: Vec<(usize, usize)>,
    best: Option<Enumerated>,
}

impl Search<'_> {
    fn extend(&mut self, prev_end: usize, cost: Cost, first: bool) {
        let h = self.inst.horizon();
        if self.placement.len() == self.used.len() {
            if let Some(tail) = self.table.phi_unpruned(prev_end, h) {
                let total = cost + tail;
                if self.best.as_ref().is_none_or(|(b, _)| total < *b) {
                    let mut p = self.placement.clone();
                    p.sort_unstable();
                    self.best = Some((total, p));
                }
            }
            return;
        }
        for j in 0..self.used.len() {
            let p = self.inst.jobs()[j] as usize;
            // Equal lengths are interchangeable: only try the first free one.
            if self.used[j] || (0..j).any(|k| !self.used[k] && self.inst.jobs()[k] as usize == p) {
                continue;
            }
            for start in prev_end + 1..h {
                let end = start + p - 1;
                if end > h - 1 {
                    break;
                }
                let gap = if !first && start == prev_end + 1 {
                    Some(0)
                } else {
                    self.table.phi_unpruned(prev_end, start)
                };
                let Some(gap) = gap else { continue };
                let job = self.inst.cost_sum(start, end) * self.inst.proc_power();
                self.used[j] = true;
                self.placement.push((j, start));
                self.extend(end, cost + gap + job, false);
                self.placement.pop();
                self.used[j] = false;
            }
        }
    }
}
