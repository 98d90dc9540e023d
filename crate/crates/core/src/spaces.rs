//! Optimal switching costs between processing intervals.
//!
//! For every pair `i < i'` the table stores `φ(i, i')`, the cheapest way to
//! bridge intervals `i + 1 ..= i' - 1` when the machine processes in `I_i` and
//! `I_i'`. The pair `(1, i')` starts from the initial off interval and
//! `(i, h)` ends in the final one. Each row is one single-source shortest path
//! run on the interval-state graph; rows are independent and may be computed
//! concurrently.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::isg::{proc_window, sssp, walk_predecessors, Edge, IntervalStateGraph, Vertex};
use crate::model::{Cost, Instance, StatePair};

const ABSENT: Cost = Cost::MAX;

#[derive(Debug, Clone)]
pub struct SpacesTable {
    horizon: usize,
    window: (usize, usize),
    phi: Vec<Cost>,
    pruned: Vec<bool>,
    graph: Arc<IntervalStateGraph>,
    // Predecessor edge per dense vertex, starting at the row's source interval.
    paths: Vec<Option<Arc<[u32]>>>,
}

struct Row {
    phi: Vec<Cost>,
    pred: Arc<[u32]>,
}

impl SpacesTable {
    /// Builds the graph and the unpruned table for an instance.
    pub fn for_instance(inst: &Instance, parallelism: usize) -> Result<Self> {
        let g = crate::isg::build_graph(inst)?;
        compute_spaces(&g, parallelism)
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn window(&self) -> (usize, usize) {
        self.window
    }

    pub fn graph(&self) -> &IntervalStateGraph {
        &self.graph
    }

    #[inline]
    fn slot(&self, i: usize, ip: usize) -> Option<usize> {
        let h = self.horizon;
        if i == 0 || i >= ip || ip > h {
            return None;
        }
        Some((i - 1) * h - (i - 1) * i / 2 + (ip - i - 1))
    }

    /// `φ(i, i')`, or `None` when no switching exists or the pair is pruned.
    #[inline]
    pub fn phi(&self, i: usize, ip: usize) -> Option<Cost> {
        let k = self.slot(i, ip)?;
        (!self.pruned[k] && self.phi[k] != ABSENT).then_some(self.phi[k])
    }

    /// `φ(i, i')` ignoring pruning.
    #[inline]
    pub fn phi_unpruned(&self, i: usize, ip: usize) -> Option<Cost> {
        let k = self.slot(i, ip)?;
        (self.phi[k] != ABSENT).then_some(self.phi[k])
    }

    pub fn is_pruned(&self, i: usize, ip: usize) -> bool {
        self.slot(i, ip).is_some_and(|k| self.pruned[k])
    }

    pub fn pruned_count(&self) -> usize {
        self.pruned.iter().filter(|&&p| p).count()
    }

    /// All pairs `(i, i', φ)` with a defined, unpruned switching.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Cost)> + '_ {
        let h = self.horizon;
        (1..h).flat_map(move |i| {
            (i + 1..=h).filter_map(move |ip| self.phi(i, ip).map(|c| (i, ip, c)))
        })
    }

    fn endpoints(&self, i: usize, ip: usize) -> (Vertex, Vertex) {
        let g = &self.graph;
        let src = if i == 1 {
            Vertex::new(2, g.off())
        } else {
            Vertex::new(i + 1, g.proc())
        };
        let dst = if ip == self.horizon {
            Vertex::new(self.horizon, g.off())
        } else {
            Vertex::new(ip, g.proc())
        };
        (src, dst)
    }

    fn path_edges(&self, i: usize, ip: usize) -> Result<Vec<&Edge>> {
        if self.phi_unpruned(i, ip).is_none() {
            return Err(Error::NoSwitching { from: i, to: ip });
        }
        let g = &*self.graph;
        let (src, dst) = self.endpoints(i, ip);
        let base = (i + 1) * g.state_count();
        match &self.paths[i] {
            Some(pred) => Ok(walk_predecessors(g, pred, base, g.index(src), g.index(dst))),
            None => sssp(g, src)
                .path_to(g, dst)
                .ok_or(Error::NoSwitching { from: i, to: ip }),
        }
    }

    /// The transition steps of a cheapest switching between `i` and `i'`.
    pub fn switching_path(&self, i: usize, ip: usize) -> Result<Vec<StatePair>> {
        Ok(self
            .path_edges(i, ip)?
            .iter()
            .map(|e| e.transition)
            .collect())
    }

    /// Per-interval labels for intervals `i + 1 ..= i' - 1`.
    pub fn expand_space(&self, i: usize, ip: usize) -> Result<Vec<StatePair>> {
        let g = &*self.graph;
        let mut labels = Vec::with_capacity(ip - i - 1);
        for e in self.path_edges(i, ip)? {
            let span = g.vertex(e.to as usize).interval - g.vertex(e.from as usize).interval;
            labels.extend(std::iter::repeat_n(e.transition, span));
        }
        if labels.len() != ip - i - 1 {
            return Err(Error::InconsistentPlacement(format!(
                "space ({i}, {ip}) expands to {} intervals",
                labels.len()
            )));
        }
        Ok(labels)
    }

    /// Marks pairs whose activation leaves too little processing capacity.
    ///
    /// Capacities left of `i` and right of `i'` are clamped at zero, so pairs
    /// touching the horizon boundary only test the opposite side.
    pub fn apply_pruning(&self, inst: &Instance) -> SpacesTable {
        let (t_on, t_off) = (self.window.0 as i64, self.window.1 as i64);
        let max_p = inst.max_processing() as i64;
        let total = inst.total_processing() as i64;
        let mut out = self.clone();
        let h = self.horizon;
        for i in 1..h {
            for ip in i + 1..=h {
                let left = (i as i64 - t_on + 1).max(0);
                let right = (t_off - ip as i64 + 1).max(0);
                let pc1 = max_p > left && max_p > right;
                let pc2 = left + right < total;
                let k = out.slot(i, ip).unwrap();
                out.pruned[k] = pc1 || pc2;
            }
        }
        out
    }

    /// `i,ip,phi` lines for every defined, unpruned pair.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,ip,phi\n");
        for (i, ip, c) in self.entries() {
            out.push_str(&format!("{i},{ip},{c}\n"));
        }
        out
    }

    /// Restores a table from [`SpacesTable::to_csv`] output. Switching paths are
    /// recomputed on demand from the graph.
    pub fn from_csv(g: &IntervalStateGraph, text: &str) -> Result<Self> {
        let window = proc_window(g)?;
        let h = g.horizon();
        let mut table = SpacesTable {
            horizon: h,
            window,
            phi: vec![ABSENT; h * (h - 1) / 2],
            pruned: vec![false; h * (h - 1) / 2],
            graph: Arc::new(g.clone()),
            paths: vec![None; h],
        };
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (n == 0 && line.starts_with('i')) {
                continue;
            }
            let bad = || Error::Parse(format!("line {}: expected `i,ip,phi`", n + 1));
            let mut it = line.split(',').map(|f| f.trim().parse::<u64>());
            let (Some(Ok(i)), Some(Ok(ip)), Some(Ok(c)), None) =
                (it.next(), it.next(), it.next(), it.next())
            else {
                return Err(bad());
            };
            let k = table.slot(i as usize, ip as usize).ok_or_else(|| {
                Error::Parse(format!("line {}: pair ({i}, {ip}) out of range", n + 1))
            })?;
            table.phi[k] = c;
        }
        Ok(table)
    }
}

fn compute_row(g: &IntervalStateGraph, i: usize) -> Row {
    let h = g.horizon();
    let src = if i == 1 {
        Vertex::new(2, g.off())
    } else {
        Vertex::new(i + 1, g.proc())
    };
    let dist = sssp(g, src);
    let phi = (i + 1..=h)
        .map(|ip| {
            let dst = if ip == h {
                Vertex::new(h, g.off())
            } else {
                Vertex::new(ip, g.proc())
            };
            dist.get(g, dst).unwrap_or(ABSENT)
        })
        .collect();
    let base = (i + 1) * g.state_count();
    let pred = dist.into_predecessors();
    Row {
        phi,
        pred: pred[base..].into(),
    }
}

/// Runs one shortest-path computation per row `i = 1 .. h - 1`, using up to
/// `parallelism` threads. The result does not depend on `parallelism`.
pub fn compute_spaces(g: &IntervalStateGraph, parallelism: usize) -> Result<SpacesTable> {
    let window = proc_window(g)?;
    let h = g.horizon();
    let threads = parallelism.clamp(1, h.max(1));
    let mut rows: Vec<Option<Row>> = (0..h).map(|_| None).collect();
    if threads == 1 {
        for (i, slot) in rows.iter_mut().enumerate().take(h).skip(1) {
            *slot = Some(compute_row(g, i));
        }
    } else {
        let next = AtomicUsize::new(1);
        let done: Vec<Vec<(usize, Row)>> = std::thread::scope(|scope| {
            let workers: Vec<_> = (0..threads)
                .map(|_| {
                    scope.spawn(|| {
                        let mut mine = Vec::new();
                        loop {
                            let i = next.fetch_add(1, Ordering::Relaxed);
                            if i >= h {
                                break;
                            }
                            mine.push((i, compute_row(g, i)));
                        }
                        mine
                    })
                })
                .collect();
            workers
                .into_iter()
                .map(|w| w.join().expect("spaces worker panicked"))
                .collect()
        });
        for (i, row) in done.into_iter().flatten() {
            rows[i] = Some(row);
        }
    }

    let mut phi = Vec::with_capacity(h * (h - 1) / 2);
    let mut paths = vec![None; h];
    for (i, row) in rows.into_iter().enumerate() {
        if let Some(row) = row {
            phi.extend_from_slice(&row.phi);
            paths[i] = Some(row.pred);
        }
    }
    let len = phi.len();
    Ok(SpacesTable {
        horizon: h,
        window,
        phi,
        pruned: vec![false; len],
        graph: Arc::new(g.clone()),
        paths,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::{example_instance, preset_nosby, preset_twosby};
    use crate::isg::build_graph;

    fn example_table() -> (Instance, SpacesTable) {
        let inst = example_instance();
        let t = SpacesTable::for_instance(&inst, 1).unwrap();
        (inst, t)
    }

    #[test]
    fn example_values() {
        let (_, t) = example_table();
        assert_eq!(t.window(), (4, 14));
        assert_eq!(t.phi(4, 10), Some(48));
        assert_eq!(t.phi(1, 4), Some(24));
        assert_eq!(t.phi(1, 3), None);
        assert_eq!(t.phi(14, 16), Some(1));
        for i in 2..15 {
            assert_eq!(t.phi(i, i + 1), Some(0), "phi({i},{})", i + 1);
        }
    }

    #[test]
    fn example_paths() {
        let (inst, t) = example_table();
        let s = inst.states();
        let (off, proc, idle) = (s.off(), s.proc(), s.id("idle").unwrap());
        assert_eq!(
            t.switching_path(4, 10).unwrap(),
            vec![(proc, off), (off, off), (off, off), (off, proc)]
        );
        assert_eq!(
            t.expand_space(4, 10).unwrap(),
            vec![
                (proc, off),
                (off, off),
                (off, off),
                (off, proc),
                (off, proc)
            ]
        );
        assert_eq!(t.expand_space(11, 13).unwrap(), vec![(idle, idle)]);
        assert_eq!(t.phi(11, 13), Some(20));
        assert!(t.switching_path(7, 8).unwrap().is_empty());
        assert!(t.expand_space(7, 8).unwrap().is_empty());
        assert!(matches!(
            t.switching_path(1, 2),
            Err(Error::NoSwitching { .. })
        ));
    }

    #[test]
    fn expanded_cost_matches_phi() {
        let (inst, t) = example_table();
        for i in 1..16 {
            for ip in i + 1..=16 {
                if let Some(c) = t.phi(i, ip) {
                    let labels = t.expand_space(i, ip).unwrap();
                    let cost = crate::model::omega_cost(&inst, i + 1, &labels).unwrap();
                    assert_eq!(cost, c, "({i},{ip})");
                }
            }
        }
    }

    #[test]
    fn pruning_on_example() {
        let (inst, t) = example_table();
        let p = t.apply_pruning(&inst);
        assert!(p.is_pruned(2, 15));
        assert_eq!(p.phi(2, 15), None);
        // The optimal spaces survive.
        for (i, ip) in [(1, 4), (4, 10), (11, 13), (14, 16)] {
            assert!(!p.is_pruned(i, ip), "({i},{ip})");
        }
        // Capacity left of I_4 is 1; right of I_11 is 4 and right of I_12 is 3.
        assert!(!p.is_pruned(4, 11));
        assert!(p.is_pruned(4, 12));
    }

    #[test]
    fn ample_capacity_is_never_pruned_by_total() {
        let inst = preset_nosby().instance(vec![1; 40], vec![1, 1]);
        let t = SpacesTable::for_instance(&inst, 1)
            .unwrap()
            .apply_pruning(&inst);
        let (t_on, _) = t.window();
        for i in 1..40 {
            for ip in i + 1..=40 {
                if i as i64 - t_on as i64 + 1 >= 2 {
                    assert!(!t.is_pruned(i, ip), "({i},{ip})");
                }
            }
        }
    }

    #[test]
    fn parallel_rows_match_sequential() {
        let inst =
            preset_twosby().instance((0..60).map(|k| 1 + (k * 7 % 10)).collect(), vec![3, 2]);
        let g = build_graph(&inst).unwrap();
        let a = compute_spaces(&g, 1).unwrap();
        let b = compute_spaces(&g, 4).unwrap();
        assert_eq!(a.phi, b.phi);
        for i in 1..60 {
            for ip in i + 1..=60 {
                if a.phi(i, ip).is_some() {
                    assert_eq!(
                        a.switching_path(i, ip).unwrap(),
                        b.switching_path(i, ip).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn csv_round_trip_keeps_values_and_paths() {
        let (inst, t) = example_table();
        let t = t.apply_pruning(&inst);
        let csv = t.to_csv();
        assert!(csv.starts_with("i,ip,phi\n"));
        assert!(csv.contains("\n4,10,48\n"));
        let back = SpacesTable::from_csv(t.graph(), &csv).unwrap();
        for i in 1..16 {
            for ip in i + 1..=16 {
                assert_eq!(back.phi(i, ip), t.phi(i, ip));
            }
        }
        assert_eq!(
            back.expand_space(4, 10).unwrap(),
            t.expand_space(4, 10).unwrap()
        );
    }

    #[test]
    fn csv_rejects_garbage() {
        let (_, t) = example_table();
        assert!(SpacesTable::from_csv(t.graph(), "i,ip,phi\n1,2\n").is_err());
        assert!(SpacesTable::from_csv(t.graph(), "3,2,1\n").is_err());
        assert!(SpacesTable::from_csv(t.graph(), "1,x,1\n").is_err());
    }
}
