//! Interval-state graph and shortest-path primitives.
//!
//! Vertex `v(i, s)` means "the machine is in state `s` at the beginning of
//! interval `i`". An edge `v(i, s) -> v(i + τ(s, s'), s')` is one direct
//! transition and weighs the energy it consumes under the tariff.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{Cost, Instance, MachineStateSet, StateId, StatePair};

/// Default vertex limit of [`apsp_oracle`].
pub const APSP_VERTEX_LIMIT: usize = 2_000;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub interval: usize,
    pub state: StateId,
}

impl Vertex {
    pub fn new(interval: usize, state: StateId) -> Self {
        Self { interval, state }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub from: u32,
    pub to: u32,
    pub weight: Cost,
    pub transition: StatePair,
}

#[derive(Debug, Clone)]
pub struct IntervalStateGraph {
    horizon: usize,
    states: usize,
    off: StateId,
    proc: StateId,
    cost_prefix: Vec<Cost>,
    // CSR adjacency over dense vertex indices.
    offsets: Vec<u32>,
    edges: Vec<Edge>,
}

impl IntervalStateGraph {
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn off(&self) -> StateId {
        self.off
    }

    pub fn proc(&self) -> StateId {
        self.proc
    }

    pub fn cost_prefix(&self) -> &[Cost] {
        &self.cost_prefix
    }

    /// Dense index `i · |S| + s`.
    #[inline]
    pub fn index(&self, v: Vertex) -> usize {
        v.interval * self.states + v.state.index()
    }

    #[inline]
    pub fn vertex(&self, index: usize) -> Vertex {
        Vertex {
            interval: index / self.states,
            state: StateId((index % self.states) as u16),
        }
    }

    /// Size of the dense index space (includes indices that are not vertices).
    pub fn index_bound(&self) -> usize {
        (self.horizon + 2) * self.states
    }

    pub fn contains(&self, v: Vertex) -> bool {
        if v.state.index() >= self.states {
            return false;
        }
        match v.interval {
            1 => v.state == self.off,
            i if i >= 2 && i <= self.horizon => true,
            i if i == self.horizon + 1 => v.state == self.off,
            _ => false,
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.index_bound())
            .map(|k| self.vertex(k))
            .filter(|&v| self.contains(v))
    }

    pub fn vertex_count(&self) -> usize {
        2 + (self.horizon - 1) * self.states
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn out_edges(&self, index: usize) -> &[Edge] {
        let lo = self.offsets[index] as usize;
        let hi = self.offsets[index + 1] as usize;
        &self.edges[lo..hi]
    }

    /// DOT rendering with vertices labeled `i:state` and edges by weight.
    pub fn to_dot(&self, states: &MachineStateSet) -> String {
        let mut out = String::from("digraph isg {\n  rankdir=LR;\n");
        for v in self.vertices() {
            let _ = writeln!(
                out,
                "  v{} [label=\"{}:{}\"];",
                self.index(v),
                v.interval,
                states.name(v.state)
            );
        }
        for e in &self.edges {
            let _ = writeln!(out, "  v{} -> v{} [label=\"{}\"];", e.from, e.to, e.weight);
        }
        out.push_str("}\n");
        out
    }
}

/// Builds the interval-state graph of a valid instance.
pub fn build_graph(inst: &Instance) -> Result<IntervalStateGraph> {
    inst.check()?;
    let h = inst.horizon();
    let states = inst.states().len();
    let (off, proc) = (inst.states().off(), inst.states().proc());
    let prefix = inst.cost_prefix();
    let trans = inst.transitions();

    let mut outgoing: Vec<Vec<(StateId, u32, Cost)>> = vec![Vec::new(); states];
    for (s, t, tr) in trans.iter() {
        outgoing[s.index()].push((t, tr.duration, tr.power));
    }

    let bound = (h + 2) * states;
    let mut offsets = Vec::with_capacity(bound + 1);
    let mut edges = Vec::new();
    let idx = |i: usize, s: StateId| (i * states + s.index()) as u32;
    for k in 0..bound {
        offsets.push(edges.len() as u32);
        let (i, s) = (k / states, StateId((k % states) as u16));
        if i == 1 && s == off {
            let w = (prefix[1] - prefix[0]) * trans.get(off, off).map_or(0, |t| t.power);
            edges.push(Edge {
                from: k as u32,
                to: idx(2, off),
                weight: w,
                transition: (off, off),
            });
        } else if (2..=h).contains(&i) {
            for &(t, dur, power) in &outgoing[s.index()] {
                let dur = dur as usize;
                if (i - 1) + dur > h - 1 {
                    continue;
                }
                let target = i + dur;
                edges.push(Edge {
                    from: k as u32,
                    to: idx(target, t),
                    weight: (prefix[target - 1] - prefix[i - 1]) * power,
                    transition: (s, t),
                });
            }
            if i == h && s == off {
                let w = (prefix[h] - prefix[h - 1]) * trans.get(off, off).map_or(0, |t| t.power);
                edges.push(Edge {
                    from: k as u32,
                    to: idx(h + 1, off),
                    weight: w,
                    transition: (off, off),
                });
            }
        }
    }
    offsets.push(edges.len() as u32);

    Ok(IntervalStateGraph {
        horizon: h,
        states,
        off,
        proc,
        cost_prefix: prefix.to_vec(),
        offsets,
        edges,
    })
}

fn forward_reachable(g: &IntervalStateGraph, source: usize) -> Vec<bool> {
    let mut seen = vec![false; g.index_bound()];
    let mut queue = VecDeque::from([source]);
    seen[source] = true;
    while let Some(u) = queue.pop_front() {
        for e in g.out_edges(u) {
            if !seen[e.to as usize] {
                seen[e.to as usize] = true;
                queue.push_back(e.to as usize);
            }
        }
    }
    seen
}

fn backward_reachable(g: &IntervalStateGraph, target: usize) -> Vec<bool> {
    let mut incoming: Vec<Vec<u32>> = vec![Vec::new(); g.index_bound()];
    for e in g.edges() {
        incoming[e.to as usize].push(e.from);
    }
    let mut seen = vec![false; g.index_bound()];
    let mut queue = VecDeque::from([target]);
    seen[target] = true;
    while let Some(u) = queue.pop_front() {
        for &f in &incoming[u] {
            if !seen[f as usize] {
                seen[f as usize] = true;
                queue.push_back(f as usize);
            }
        }
    }
    seen
}

/// Earliest and latest interval in which the machine can be processing.
pub fn proc_window(g: &IntervalStateGraph) -> Result<(usize, usize)> {
    let h = g.horizon();
    if h < 3 {
        return Err(Error::NoProcessingWindow);
    }
    let (off, proc) = (g.off(), g.proc());
    let fwd = forward_reachable(g, g.index(Vertex::new(2, off)));
    let bwd = backward_reachable(g, g.index(Vertex::new(h, off)));
    // Processing during I_i means the edge v(i, proc) -> v(i + 1, proc).
    let stays = |i: usize| {
        g.out_edges(g.index(Vertex::new(i, proc)))
            .iter()
            .any(|e| e.transition == (proc, proc))
    };
    let t_on = (2..h).find(|&i| fwd[g.index(Vertex::new(i, proc))] && stays(i));
    let t_off = (2..h)
        .rev()
        .find(|&i| bwd[g.index(Vertex::new(i + 1, proc))] && stays(i));
    match (t_on, t_off) {
        (Some(a), Some(b)) if a <= b => Ok((a, b)),
        _ => Err(Error::NoProcessingWindow),
    }
}

/// Single-source shortest distances, with a predecessor edge per vertex.
#[derive(Debug, Clone)]
pub struct DistanceMap {
    source: usize,
    dist: Vec<Cost>,
    pred: Vec<u32>,
}

impl DistanceMap {
    pub fn source(&self) -> usize {
        self.source
    }

    pub fn get(&self, g: &IntervalStateGraph, v: Vertex) -> Option<Cost> {
        if !g.contains(v) {
            return None;
        }
        self.get_index(g.index(v))
    }

    #[inline]
    pub fn get_index(&self, index: usize) -> Option<Cost> {
        let d = self.dist[index];
        (d != Cost::MAX).then_some(d)
    }

    /// Edges of the selected shortest path from the source to `v`.
    pub fn path_to<'g>(&self, g: &'g IntervalStateGraph, v: Vertex) -> Option<Vec<&'g Edge>> {
        self.get(g, v)?;
        Some(walk_predecessors(g, &self.pred, 0, self.source, g.index(v)))
    }

    pub(crate) fn into_predecessors(self) -> Vec<u32> {
        self.pred
    }
}

/// Follows predecessor edge indices back from `target`. `pred[k - base]`
/// belongs to dense vertex `k`.
pub(crate) fn walk_predecessors<'g>(
    g: &'g IntervalStateGraph,
    pred: &[u32],
    base: usize,
    source: usize,
    target: usize,
) -> Vec<&'g Edge> {
    let mut path = Vec::new();
    let mut at = target;
    while at != source {
        let e = &g.edges()[pred[at - base] as usize];
        path.push(e);
        at = e.from as usize;
    }
    path.reverse();
    path
}

/// Label-setting shortest paths from `source`. Ties prefer fewer edges, then
/// the predecessor with the smaller dense index.
pub fn sssp(g: &IntervalStateGraph, source: Vertex) -> DistanceMap {
    let n = g.index_bound();
    let src = g.index(source);
    let mut dist = vec![Cost::MAX; n];
    let mut hops = vec![u32::MAX; n];
    let mut pred = vec![NONE; n];
    let mut done = vec![false; n];
    if !g.contains(source) {
        return DistanceMap {
            source: src,
            dist,
            pred,
        };
    }
    dist[src] = 0;
    hops[src] = 0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((0, 0u32, src)));
    while let Some(Reverse((d, hp, u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        let lo = g.offsets[u] as usize;
        let hi = g.offsets[u + 1] as usize;
        for (k, e) in g.edges[lo..hi].iter().enumerate() {
            let v = e.to as usize;
            let nd = d + e.weight;
            let nh = hp + 1;
            let better = match (nd, nh).cmp(&(dist[v], hops[v])) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Equal => u < g.edges[pred[v] as usize].from as usize,
                std::cmp::Ordering::Greater => false,
            };
            if better {
                dist[v] = nd;
                hops[v] = nh;
                pred[v] = (lo + k) as u32;
                if !done[v] {
                    heap.push(Reverse((nd, nh, v)));
                }
            }
        }
    }
    DistanceMap {
        source: src,
        dist,
        pred,
    }
}

/// All-pairs distances computed with Floyd-Warshall. Intended as a test oracle.
#[derive(Debug, Clone)]
pub struct ApspTable {
    compact: Vec<u32>,
    size: usize,
    dist: Vec<Cost>,
}

impl ApspTable {
    pub fn get(&self, g: &IntervalStateGraph, from: Vertex, to: Vertex) -> Option<Cost> {
        if !g.contains(from) || !g.contains(to) {
            return None;
        }
        let a = self.compact[g.index(from)] as usize;
        let b = self.compact[g.index(to)] as usize;
        let d = self.dist[a * self.size + b];
        (d != Cost::MAX).then_some(d)
    }
}

pub fn apsp_oracle(g: &IntervalStateGraph, vertex_limit: usize) -> Result<ApspTable> {
    let size = g.vertex_count();
    if size > vertex_limit {
        return Err(Error::ResourceGuard(format!(
            "all-pairs oracle refuses {size} vertices (limit {vertex_limit})"
        )));
    }
    let mut compact = vec![NONE; g.index_bound()];
    for (k, v) in g.vertices().enumerate() {
        compact[g.index(v)] = k as u32;
    }
    let mut dist = vec![Cost::MAX; size * size];
    for k in 0..size {
        dist[k * size + k] = 0;
    }
    for e in g.edges() {
        let a = compact[e.from as usize] as usize;
        let b = compact[e.to as usize] as usize;
        let cell = &mut dist[a * size + b];
        *cell = (*cell).min(e.weight);
    }
    for k in 0..size {
        for a in 0..size {
            let ak = dist[a * size + k];
            if ak == Cost::MAX {
                continue;
            }
            for b in 0..size {
                let kb = dist[k * size + b];
                if kb != Cost::MAX && ak + kb < dist[a * size + b] {
                    dist[a * size + b] = ak + kb;
                }
            }
        }
    }
    Ok(ApspTable {
        compact,
        size,
        dist,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::{example_instance, preset_nosby};
    use crate::model::TransitionSpec;

    #[test]
    fn example_graph_shape() {
        let inst = example_instance();
        let g = build_graph(&inst).unwrap();
        assert_eq!(g.vertex_count(), 2 + 15 * 3);
        assert!(g.edge_count() <= 15 * 9 + 2);
        let s = inst.states();
        let from = g.index(Vertex::new(2, s.off()));
        let to = g.index(Vertex::new(4, s.proc())) as u32;
        let e = g.out_edges(from).iter().find(|e| e.to == to).unwrap();
        assert_eq!(e.weight, 24);
    }

    #[test]
    fn edge_weights_match_raw_costs() {
        let inst = example_instance();
        let g = build_graph(&inst).unwrap();
        for e in g.edges() {
            let a = g.vertex(e.from as usize);
            let b = g.vertex(e.to as usize);
            assert!(b.interval >= a.interval);
            let p = inst
                .transitions()
                .get(e.transition.0, e.transition.1)
                .unwrap();
            if a.interval >= 2 && b.interval <= g.horizon() {
                assert_eq!(b.interval - a.interval, p.duration as usize);
            }
            let raw: Cost = (a.interval..b.interval).map(|i| inst.cost(i)).sum();
            assert_eq!(e.weight, raw * p.power);
            if b.interval == a.interval {
                assert_ne!(a.state, b.state);
            }
        }
    }

    #[test]
    fn zero_costs_give_zero_weights() {
        let inst = preset_nosby().instance(vec![0; 10], vec![1]);
        let g = build_graph(&inst).unwrap();
        assert!(g.edges().iter().all(|e| e.weight == 0));
    }

    #[test]
    fn late_transitions_are_absent() {
        let inst = example_instance();
        let g = build_graph(&inst).unwrap();
        let s = inst.states();
        // off -> proc takes two intervals; from I_15 it would end past I_16.
        let v = g.index(Vertex::new(15, s.off()));
        assert!(g
            .out_edges(v)
            .iter()
            .all(|e| e.transition != (s.off(), s.proc())));
        let v = g.index(Vertex::new(14, s.off()));
        assert!(g
            .out_edges(v)
            .iter()
            .any(|e| e.transition == (s.off(), s.proc())));
        // Only zero-duration transitions leave v(h, ·) apart from the final off edge.
        for st in s.ids() {
            for e in g.out_edges(g.index(Vertex::new(16, st))) {
                let t = inst
                    .transitions()
                    .get(e.transition.0, e.transition.1)
                    .unwrap();
                assert!(t.duration == 0 || (st == s.off() && e.transition == (s.off(), s.off())));
            }
        }
    }

    #[test]
    fn example_window() {
        let g = build_graph(&example_instance()).unwrap();
        assert_eq!(proc_window(&g).unwrap(), (4, 14));
    }

    #[test]
    fn immediate_start_window() {
        let states = MachineStateSet::new(["off", "proc"], "off", "proc").unwrap();
        let (off, proc) = (states.off(), states.proc());
        let mut tr = TransitionSpec::new(2);
        tr.insert(off, off, 1, 0);
        tr.insert(proc, proc, 1, 3);
        tr.insert(off, proc, 0, 0);
        tr.insert(proc, off, 0, 0);
        let inst = Instance::new(vec![1; 6], vec![1], states, tr);
        let g = build_graph(&inst).unwrap();
        assert_eq!(proc_window(&g).unwrap(), (2, 5));
    }

    #[test]
    fn window_too_small() {
        // off -> proc -> off needs 2 + 1 intervals plus the boundary offs.
        let inst = preset_nosby().instance(vec![1; 5], vec![1]);
        let g = build_graph(&inst).unwrap();
        assert!(matches!(proc_window(&g), Err(Error::NoProcessingWindow)));
        let inst = preset_nosby().instance(vec![1; 6], vec![1]);
        let g = build_graph(&inst).unwrap();
        assert_eq!(proc_window(&g).unwrap(), (4, 4));
    }

    #[test]
    fn sssp_example_switching() {
        let inst = example_instance();
        let g = build_graph(&inst).unwrap();
        let p = inst.states().proc();
        let d = sssp(&g, Vertex::new(5, p));
        assert_eq!(d.get(&g, Vertex::new(5, p)), Some(0));
        assert_eq!(d.get(&g, Vertex::new(10, p)), Some(48));
        for s in inst.states().ids() {
            for i in 2..5 {
                assert_eq!(d.get(&g, Vertex::new(i, s)), None);
            }
        }
        let path = d.path_to(&g, Vertex::new(10, p)).unwrap();
        let total: Cost = path.iter().map(|e| e.weight).sum();
        assert_eq!(total, 48);
    }

    #[test]
    fn apsp_agrees_with_sssp_on_example() {
        let inst = example_instance();
        let g = build_graph(&inst).unwrap();
        let all = apsp_oracle(&g, APSP_VERTEX_LIMIT).unwrap();
        let p = inst.states().proc();
        assert_eq!(all.get(&g, Vertex::new(5, p), Vertex::new(10, p)), Some(48));
        for u in g.vertices() {
            assert_eq!(all.get(&g, u, u), Some(0));
            let d = sssp(&g, u);
            for v in g.vertices() {
                assert_eq!(all.get(&g, u, v), d.get(&g, v));
            }
        }
    }

    #[test]
    fn apsp_guard() {
        let g = build_graph(&example_instance()).unwrap();
        assert!(matches!(apsp_oracle(&g, 10), Err(Error::ResourceGuard(_))));
    }

    #[test]
    fn dot_dump_mentions_vertices() {
        let inst = example_instance();
        let g = build_graph(&inst).unwrap();
        let dot = g.to_dot(inst.states());
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("label=\"4:proc\""));
        assert_eq!(dot.matches("->").count(), g.edge_count());
    }
}
